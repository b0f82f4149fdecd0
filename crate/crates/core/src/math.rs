//! Scalar float shims and a small least-squares solver.
//!
//! Under `std` the shims forward to the inherent `f64` methods; without it
//! they fall back to `libm`. Keeping all call sites on one set of names means
//! the numeric code paths are identical in both configurations.

use alloc::vec;
use alloc::vec::Vec;

macro_rules! shim {
    ($name:ident, $libm:ident) => {
        #[inline(always)]
        pub(crate) fn $name(x: f64) -> f64 {
            #[cfg(feature = "std")]
            {
                f64::$name(x)
            }
            #[cfg(not(feature = "std"))]
            {
                libm::$libm(x)
            }
        }
    };
}

shim!(sqrt, sqrt);
shim!(cos, cos);
shim!(ln, log);
shim!(abs, fabs);
shim!(floor, floor);
shim!(ceil, ceil);
shim!(cbrt, cbrt);

#[inline(always)]
pub(crate) fn sin_cos(x: f64) -> (f64, f64) {
    #[cfg(feature = "std")]
    {
        f64::sin_cos(x)
    }
    #[cfg(not(feature = "std"))]
    {
        libm::sincos(x)
    }
}

/// Least-squares solve of `cols · β ≈ rhs` for a handful of columns.
///
/// Columns are rescaled to unit max-magnitude (the regressors span λ^{3/2}
/// down to 1, so the raw Gram matrix would be badly conditioned), the normal
/// equations are solved by Cholesky factorization, and β is unscaled on the
/// way out. Returns `None` when the scaled Gram matrix is not (numerically)
/// positive definite, i.e. the design is degenerate.
pub(crate) fn least_squares(cols: &[&[f64]], rhs: &[f64]) -> Option<Vec<f64>> {
    let p = cols.len();
    let n = rhs.len();
    if p == 0 || n < p || cols.iter().any(|c| c.len() != n) {
        return None;
    }

    let mut scale = Vec::with_capacity(p);
    for col in cols {
        let mut s = 0.0f64;
        for &v in *col {
            if !v.is_finite() {
                return None;
            }
            let a = abs(v);
            if a > s {
                s = a;
            }
        }
        if s <= 0.0 {
            return None;
        }
        scale.push(s);
    }

    // Gram matrix G = XᵀX and right-hand side Xᵀy of the scaled design.
    let mut g = vec![0.0f64; p * p];
    let mut b = vec![0.0f64; p];
    for i in 0..p {
        for j in i..p {
            let mut acc = 0.0;
            for (xi, xj) in cols[i].iter().zip(cols[j].iter()) {
                acc += (xi / scale[i]) * (xj / scale[j]);
            }
            g[i * p + j] = acc;
            g[j * p + i] = acc;
        }
        let mut acc = 0.0;
        for (xi, y) in cols[i].iter().zip(rhs.iter()) {
            acc += (xi / scale[i]) * y;
        }
        b[i] = acc;
    }

    // In-place Cholesky G = LLᵀ (L in the lower triangle).
    let diag: Vec<f64> = (0..p).map(|i| g[i * p + i]).collect();
    for i in 0..p {
        for j in 0..=i {
            let mut sum = g[i * p + j];
            for k in 0..j {
                sum -= g[i * p + k] * g[j * p + k];
            }
            if i == j {
                if !sum.is_finite() || sum <= 1e-12 * diag[i] {
                    return None;
                }
                g[i * p + i] = sqrt(sum);
            } else {
                g[i * p + j] = sum / g[j * p + j];
            }
        }
    }

    // Forward solve L z = b, then back solve Lᵀ x = z.
    let mut x = b;
    for i in 0..p {
        for k in 0..i {
            x[i] -= g[i * p + k] * x[k];
        }
        x[i] /= g[i * p + i];
    }
    for i in (0..p).rev() {
        for k in i + 1..p {
            x[i] -= g[k * p + i] * x[k];
        }
        x[i] /= g[i * p + i];
    }
    // Undo the column scaling only after the whole solve is done.
    for (xi, s) in x.iter_mut().zip(&scale) {
        *xi /= s;
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_line() {
        let x: Vec<f64> = (1..=20).map(|v| v as f64).collect();
        let ones = vec![1.0; 20];
        let y: Vec<f64> = x.iter().map(|&v| 2.0 * v + 3.0).collect();
        let beta = least_squares(&[&x, &ones], &y).unwrap();
        assert!((beta[0] - 2.0).abs() < 1e-10, "slope {}", beta[0]);
        assert!((beta[1] - 3.0).abs() < 1e-9, "intercept {}", beta[1]);
    }

    #[test]
    fn recovers_three_terms_with_wild_scales() {
        let x: Vec<f64> = (1..=200).map(|v| 100.0 * v as f64).collect();
        let root: Vec<f64> = x.iter().map(|&v| sqrt(v)).collect();
        let ones = vec![1.0; x.len()];
        let y: Vec<f64> = x
            .iter()
            .zip(&root)
            .map(|(&v, &r)| 0.25 * v - 7.0 * r + 11.0)
            .collect();
        let beta = least_squares(&[&x, &root, &ones], &y).unwrap();
        assert!((beta[0] - 0.25).abs() < 1e-8);
        assert!((beta[1] + 7.0).abs() < 1e-6);
        assert!((beta[2] - 11.0).abs() < 1e-4);
    }

    #[test]
    fn rejects_degenerate_design() {
        let c = vec![3.5; 30];
        let ones = vec![1.0; 30];
        let y = vec![2.0; 30];
        assert!(least_squares(&[&c, &ones], &y).is_none());
    }

    #[test]
    fn rejects_zero_column() {
        let z = vec![0.0; 10];
        let ones = vec![1.0; 10];
        let y = vec![1.0; 10];
        assert!(least_squares(&[&z, &ones], &y).is_none());
    }
}
