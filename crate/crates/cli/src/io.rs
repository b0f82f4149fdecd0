//! File plumbing shared by the subcommands: `-` means standard input or
//! output, anything else is a path.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Read, Write};

use hearbox_core::lengthspec::LengthSpectrum;

pub fn read_input(path: &str) -> io::Result<String> {
    if path == "-" {
        let mut text = String::new();
        io::stdin().lock().read_to_string(&mut text)?;
        Ok(text)
    } else {
        fs::read_to_string(path)
    }
}

pub fn write_output(path: &str, content: &str) -> io::Result<()> {
    if path == "-" {
        io::stdout().lock().write_all(content.as_bytes())
    } else {
        fs::write(path, content)
    }
}

/// Two-column CSV of the power curve; 12 significant digits keep files small
/// while staying far below the pipeline's meaningful precision.
pub fn spectrum_csv(spectrum: &LengthSpectrum) -> String {
    let mut out = String::with_capacity(spectrum.power().len() * 40 + 4);
    out.push_str("L,S\n");
    for (j, &p) in spectrum.power().iter().enumerate() {
        let _ = writeln!(out, "{:.11e},{:.11e}", spectrum.grid().point(j), p);
    }
    out
}
