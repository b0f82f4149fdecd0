//! A single self-contained SVG line chart of the power curve with detected
//! peaks marked — no plotting dependency, deterministic output.

use std::fmt::Write;

use hearbox_core::lengthspec::{LengthSpectrum, Peak};

const WIDTH: f64 = 960.0;
const HEIGHT: f64 = 540.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 24.0;
const MARGIN_BOTTOM: f64 = 56.0;

pub fn render(spectrum: &LengthSpectrum, peaks: &[Peak]) -> String {
    let grid = spectrum.grid();
    let power = spectrum.power();
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let l_span = grid.l_max() - grid.l_min();
    let p_max = {
        let m = spectrum.max_power();
        if m > 0.0 {
            m
        } else {
            1.0
        }
    };

    let x = |l: f64| MARGIN_LEFT + (l - grid.l_min()) / l_span * plot_w;
    let y = |p: f64| MARGIN_TOP + plot_h - (p / p_max) * plot_h;

    let mut svg = String::with_capacity(power.len() * 16 + 2048);
    let _ = write!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n\
         <rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
    );

    // Axes.
    let x0 = MARGIN_LEFT;
    let x1 = WIDTH - MARGIN_RIGHT;
    let y0 = MARGIN_TOP + plot_h;
    let y1 = MARGIN_TOP;
    let _ = writeln!(
        svg,
        "<line x1=\"{x0:.2}\" y1=\"{y0:.2}\" x2=\"{x1:.2}\" y2=\"{y0:.2}\" stroke=\"black\"/>\n\
         <line x1=\"{x0:.2}\" y1=\"{y0:.2}\" x2=\"{x0:.2}\" y2=\"{y1:.2}\" stroke=\"black\"/>"
    );

    // Tick marks and labels: eight intervals along L, four up the power axis.
    for i in 0..=8u32 {
        let l = grid.l_min() + l_span * f64::from(i) / 8.0;
        let xt = x(l);
        let _ = writeln!(
            svg,
            "<line x1=\"{xt:.2}\" y1=\"{y0:.2}\" x2=\"{xt:.2}\" y2=\"{:.2}\" stroke=\"black\"/>\n\
             <text x=\"{xt:.2}\" y=\"{:.2}\" font-size=\"13\" text-anchor=\"middle\">{l:.2}</text>",
            y0 + 6.0,
            y0 + 22.0
        );
    }
    for i in 0..=4u32 {
        let p = p_max * f64::from(i) / 4.0;
        let yt = y(p);
        let _ = writeln!(
            svg,
            "<line x1=\"{:.2}\" y1=\"{yt:.2}\" x2=\"{x0:.2}\" y2=\"{yt:.2}\" stroke=\"black\"/>\n\
             <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"13\" text-anchor=\"end\">{p:.3e}</text>",
            x0 - 6.0,
            x0 - 9.0,
            yt + 4.0
        );
    }
    let _ = writeln!(
        svg,
        "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"15\" text-anchor=\"middle\">trial length L</text>",
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        svg,
        "<text x=\"18\" y=\"{:.2}\" font-size=\"15\" text-anchor=\"middle\" \
         transform=\"rotate(-90 18 {:.2})\">power S(L)</text>",
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0
    );

    // The curve itself.
    svg.push_str("<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.2\" points=\"");
    for (j, &p) in power.iter().enumerate() {
        if j > 0 {
            svg.push(' ');
        }
        let _ = write!(svg, "{:.2},{:.2}", x(grid.point(j)), y(p));
    }
    svg.push_str("\"/>\n");

    // Detected peaks: marker plus location label.
    for peak in peaks {
        let xp = x(peak.location);
        let yp = y(peak.power);
        let _ = writeln!(
            svg,
            "<circle cx=\"{xp:.2}\" cy=\"{yp:.2}\" r=\"4\" fill=\"none\" stroke=\"#d62728\" \
             stroke-width=\"1.5\"/>\n\
             <text x=\"{xp:.2}\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"middle\" \
             fill=\"#d62728\">{:.3}</text>",
            (yp - 10.0).max(12.0),
            peak.location
        );
    }

    svg.push_str("</svg>\n");
    svg
}
