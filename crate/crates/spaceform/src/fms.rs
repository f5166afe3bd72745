//! The `FMS v1` distance-matrix text format.
//!
//! ```text
//! FMS v1 <N>
//! curvature <k>          # optional
//! radius <r>             # optional
//! <d(1,0)>
//! <d(2,0)> <d(2,1)>
//! ...
//! ```
//!
//! Lower-triangle entries in row-major order, one row per line, decimal text
//! with at least 17 significant digits (lossless for 64-bit floats). `#`
//! starts a comment anywhere on a line; blank lines are ignored.

use crate::error::{Error, Result};
use crate::metric::{FiniteMetricSpace, Validation};
use std::fmt::Write as _;
use std::path::Path;

/// Serialize a space to FMS v1 text.
pub fn to_string(x: &FiniteMetricSpace) -> String {
    let n = x.len();
    let mut out = String::new();
    writeln!(out, "FMS v1 {n}").unwrap();
    if let Some(k) = x.claimed_curvature {
        writeln!(out, "curvature {k:.17e}").unwrap();
    }
    if let Some(r) = x.claimed_radius {
        writeln!(out, "radius {r:.17e}").unwrap();
    }
    for i in 1..n {
        let mut line = String::new();
        for j in 0..i {
            if j > 0 {
                line.push(' ');
            }
            write!(line, "{:.17e}", x.dist(i, j)).unwrap();
        }
        writeln!(out, "{line}").unwrap();
    }
    out
}

/// Parse FMS v1 text.
pub fn from_str(text: &str) -> Result<FiniteMetricSpace> {
    let mut lines = text
        .lines()
        .map(|l| match l.find('#') {
            Some(pos) => &l[..pos],
            None => l,
        })
        .map(str::trim)
        .filter(|l| !l.is_empty());

    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty FMS file".into()))?;
    let mut parts = header.split_whitespace();
    match (parts.next(), parts.next()) {
        (Some("FMS"), Some("v1")) => {}
        _ => return Err(Error::Parse(format!("bad header line: {header:?}"))),
    }
    let n: usize = parts
        .next()
        .ok_or_else(|| Error::Parse("header missing point count".into()))?
        .parse()
        .map_err(|e| Error::Parse(format!("bad point count: {e}")))?;
    if n < 1 {
        return Err(Error::Parse("point count must be positive".into()));
    }

    let mut claimed_curvature = None;
    let mut claimed_radius = None;
    let mut entries: Vec<f64> = Vec::with_capacity(n * (n - 1) / 2);
    for line in lines {
        let mut parts = line.split_whitespace().peekable();
        match parts.peek().copied() {
            Some("curvature") => {
                parts.next();
                let v = parts
                    .next()
                    .ok_or_else(|| Error::Parse("curvature line missing value".into()))?;
                claimed_curvature = Some(
                    v.parse::<f64>()
                        .map_err(|e| Error::Parse(format!("bad curvature: {e}")))?,
                );
            }
            Some("radius") => {
                parts.next();
                let v = parts
                    .next()
                    .ok_or_else(|| Error::Parse("radius line missing value".into()))?;
                claimed_radius = Some(
                    v.parse::<f64>()
                        .map_err(|e| Error::Parse(format!("bad radius: {e}")))?,
                );
            }
            _ => {
                for tok in parts {
                    entries.push(
                        tok.parse::<f64>()
                            .map_err(|e| Error::Parse(format!("bad entry {tok:?}: {e}")))?,
                    );
                }
            }
        }
    }

    let expected = n * (n - 1) / 2;
    if entries.len() != expected {
        return Err(Error::Parse(format!(
            "expected {expected} lower-triangle entries for N = {n}, found {}",
            entries.len()
        )));
    }

    let mut dist = vec![0.0; n * n];
    let mut it = entries.into_iter();
    for i in 1..n {
        for j in 0..i {
            let d = it.next().expect("length checked");
            dist[i * n + j] = d;
            dist[j * n + i] = d;
        }
    }
    let mut x = FiniteMetricSpace::new(n, dist, Validation::AllowZeroDistances)?;
    x.claimed_curvature = claimed_curvature;
    x.claimed_radius = claimed_radius;
    Ok(x)
}

pub fn write_file(x: &FiniteMetricSpace, path: &Path) -> Result<()> {
    std::fs::write(path, to_string(x))?;
    Ok(())
}

pub fn read_file(path: &Path) -> Result<FiniteMetricSpace> {
    let text = std::fs::read_to_string(path)?;
    from_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn round_trip_with_metadata() {
        let d = vec![
            0.0,
            std::f64::consts::PI,
            0.5,
            std::f64::consts::PI,
            0.0,
            1.0 / 3.0,
            0.5,
            1.0 / 3.0,
            0.0,
        ];
        let mut x = FiniteMetricSpace::new(3, d, Validation::Strict).unwrap();
        x.claimed_curvature = Some(1.0);
        x.claimed_radius = Some(std::f64::consts::FRAC_PI_2);
        let text = to_string(&x);
        let y = from_str(&text).unwrap();
        assert_eq!(x.matrix(), y.matrix());
        assert_eq!(y.claimed_curvature, Some(1.0));
        assert_eq!(y.claimed_radius, Some(std::f64::consts::FRAC_PI_2));
    }

    #[test]
    fn comments_and_blank_lines_ignored() {
        let text = "# full matrix\nFMS v1 3\n\n1.0 # one\n2.0 1.5\n";
        let x = from_str(text).unwrap();
        assert_eq!(x.dist(1, 0), 1.0);
        assert_eq!(x.dist(2, 1), 1.5);
    }

    #[test]
    fn truncated_file_rejected() {
        assert!(from_str("FMS v1 3\n1.0\n").is_err());
        assert!(from_str("FMS v2 3\n").is_err());
        assert!(from_str("").is_err());
    }

    proptest! {
        #[test]
        fn round_trip_is_lossless(seed in 0u64..1000) {
            // Random strictly positive symmetric matrices survive the text
            // round trip bit-for-bit.
            let mut rng = crate::rng::shard_rng(seed, 0);
            use rand::Rng;
            let n = 2 + (seed % 5) as usize;
            let mut dist = vec![0.0; n * n];
            for i in 0..n {
                for j in 0..i {
                    let d: f64 = rng.gen::<f64>() + 1e-3;
                    dist[i * n + j] = d;
                    dist[j * n + i] = d;
                }
            }
            let x = FiniteMetricSpace::new(n, dist, Validation::Strict).unwrap();
            let y = from_str(&to_string(&x)).unwrap();
            prop_assert_eq!(x.matrix(), y.matrix());
        }
    }
}
