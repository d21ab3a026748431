//! Plain-text sample files: decimal literals separated by whitespace or
//! newlines, with `#` starting a comment that runs to the end of the line.

use std::path::Path;

use crate::error::{Error, Result};
use crate::sample::SortedSample;

/// Inter-occurrence times (days) of fatal accidents to British registered
/// passenger aircraft, 1946-63.
pub const AIRCRAFT: &str = include_str!("../data/aircraft.txt");

pub fn parse_values(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        for token in line.split_whitespace() {
            let value: f64 = token.parse().map_err(|_| Error::Parse {
                line: lineno + 1,
                token: token.to_string(),
            })?;
            out.push(value);
        }
    }
    Ok(out)
}

/// Parses and validates a sample. Empty input and negative values are errors.
pub fn parse_sample(text: &str) -> Result<SortedSample> {
    SortedSample::new(parse_values(text)?)
}

pub fn read_sample(path: impl AsRef<Path>) -> Result<SortedSample> {
    let path = path.as_ref();
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_sample(&text)
}

pub fn aircraft() -> SortedSample {
    parse_sample(AIRCRAFT).expect("bundled fixture is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_fixture() {
        let s = aircraft();
        assert_eq!(s.len(), 31);
        assert_eq!(s.values()[0], 14.0);
        assert_eq!(*s.values().last().unwrap(), 1105.0);
    }

    #[test]
    fn comments_and_layout() {
        let v = parse_values("# header\n1 2.5\n\n  3e1 # trailing\n").unwrap();
        assert_eq!(v, vec![1.0, 2.5, 30.0]);
    }

    #[test]
    fn reports_bad_token_position() {
        assert_eq!(
            parse_values("1 2\n3 x4\n"),
            Err(Error::Parse {
                line: 2,
                token: "x4".into()
            })
        );
    }

    #[test]
    fn rejects_empty_and_negative() {
        assert_eq!(parse_sample("# nothing\n"), Err(Error::EmptySample));
        assert!(matches!(
            parse_sample("1 -2"),
            Err(Error::NegativeValue { index: 1, .. })
        ));
    }
}
