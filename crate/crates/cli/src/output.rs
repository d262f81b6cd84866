//! Deterministic numeric formatting, config hashing and CSV emission.

use sha2::{Digest, Sha256};
use std::io::Write;
use std::path::Path;

/// Render with 6 significant digits in plain decimal notation. Used for
/// every numeric CSV field so reruns diff cleanly.
pub fn sig6(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let x = if x == 0.0 { 0.0 } else { x }; // normalize -0.0
    let exp = if x == 0.0 {
        0
    } else {
        x.abs().log10().floor() as i32
    };
    let decimals = (5 - exp).max(0) as usize;
    format!("{x:.decimals$}")
}

/// SHA-256 of the canonical run-configuration string.
pub fn config_hash(desc: &str) -> String {
    hex::encode(Sha256::digest(desc.as_bytes()))
}

/// Write the finished CSV to `--out` or standard output.
pub fn emit(out: Option<&Path>, content: &str) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, content),
        None => std::io::stdout().write_all(content.as_bytes()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_significant_digits() {
        assert_eq!(sig6(0.0), "0.00000");
        assert_eq!(sig6(1.0), "1.00000");
        assert_eq!(sig6(-0.57), "-0.570000");
        assert_eq!(sig6(2839.815), "2839.82");
        assert_eq!(sig6(0.000307700), "0.000307700");
        assert_eq!(sig6(1.0 / 3.0), "0.333333");
    }

    #[test]
    fn hash_is_stable_and_input_sensitive() {
        let a = config_hash("x = 1\n");
        assert_eq!(a, config_hash("x = 1\n"));
        assert_ne!(a, config_hash("x = 2\n"));
        assert_eq!(a.len(), 64);
    }
}
