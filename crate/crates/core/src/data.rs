//! Dataset loading: the bundled remission-time sample and plain-text files.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use sha2::{Digest, Sha256};

use crate::inference::Sample;
use crate::{Error, Result};

/// Remission times in months of 128 bladder cancer patients.
pub const BLADDER128: &str = include_str!("../data/bladder128.txt");
pub const BLADDER128_SHA256: &str = "d7e69097ab651c7aed6a88e8ec93288619e4a526c02548ed7fb3333cb8d91f0a";

/// Where a sample comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DatasetRef {
    Bundled(&'static str),
    File(PathBuf),
}

impl FromStr for DatasetRef {
    type Err = Error;

    /// `bladder128` names the bundled data; anything else is a path.
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "bladder128" => DatasetRef::Bundled("bladder128"),
            _ => DatasetRef::File(PathBuf::from(s)),
        })
    }
}

impl DatasetRef {
    pub fn load(&self) -> Result<Sample> {
        match self {
            DatasetRef::Bundled(_) => bladder128(),
            DatasetRef::File(p) => load_file(p),
        }
    }

    pub fn label(&self) -> String {
        match self {
            DatasetRef::Bundled(name) => (*name).to_string(),
            DatasetRef::File(p) => p.display().to_string(),
        }
    }
}

/// Parses whitespace- or comma-separated numbers; `#` starts a comment line.
pub fn parse_values(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        for tok in line.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
            let v: f64 = tok
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: cannot read {tok:?} as a number", lineno + 1)))?;
            out.push(v);
        }
    }
    Ok(out)
}

pub fn parse_sample(text: &str) -> Result<Sample> {
    Sample::new(parse_values(text)?)
}

pub fn load_file(path: &Path) -> Result<Sample> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_sample(&text)
}

/// The bundled sample, verified against its pinned checksum.
pub fn bladder128() -> Result<Sample> {
    let digest = Sha256::digest(BLADDER128.as_bytes());
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    if hex != BLADDER128_SHA256 {
        return Err(Error::Parse(format!("bundled dataset checksum mismatch: {hex}")));
    }
    parse_sample(BLADDER128)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_listing_is_intact() {
        let s = bladder128().unwrap();
        let v = s.values();
        assert_eq!(v.len(), 128);
        assert_eq!((v[0], v[127]), (0.08, 5.49));
        assert!((s.mean() - 9.365625).abs() < 1e-12);
        assert_eq!(v.iter().filter(|&&x| x == 2.02).count(), 2);
        assert_eq!(v.iter().cloned().fold(0.0, f64::max), 79.05);
    }

    #[test]
    fn parser_tolerates_commas_comments_and_spacing() {
        let v = parse_values("# header\n1.5, 2.0 ,3\n\n  4e-1\t5\n").unwrap();
        assert_eq!(v, vec![1.5, 2.0, 3.0, 0.4, 5.0]);
        assert!(parse_values("1, x").is_err());
        assert!(parse_sample("1, -2").is_err());
        assert!(parse_sample("# nothing\n").is_err());
    }

    #[test]
    fn dataset_refs() {
        assert_eq!("bladder128".parse::<DatasetRef>().unwrap(), DatasetRef::Bundled("bladder128"));
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("d.txt");
        std::fs::write(&p, "1\n2\n").unwrap();
        let s = DatasetRef::File(p.clone()).load().unwrap();
        assert_eq!(s.len(), 2);
        assert!(DatasetRef::File(dir.path().join("missing")).load().is_err());
    }
}
