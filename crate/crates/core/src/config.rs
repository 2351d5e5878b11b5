//! Modulus overrides, one `degree=0xHEX` entry per line.
//!
//! ```text
//! # comments and blank lines are ignored
//! 4=0x19
//! 8 = 0x11d
//! ```

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::field::{poly_degree, FieldSpec};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ModulusConfig {
    moduli: BTreeMap<u32, u64>,
}

impl ModulusConfig {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        std::fs::read_to_string(path)?.parse()
    }

    pub fn get(&self, k: u32) -> Option<u64> {
        self.moduli.get(&k).copied()
    }

    pub fn insert(&mut self, k: u32, modulus: u64) {
        self.moduli.insert(k, modulus);
    }

    /// GF(2^k) with tables, using the configured modulus when present and the
    /// default (smallest irreducible) otherwise.
    pub fn field(&self, k: u32) -> Result<FieldSpec> {
        match self.get(k) {
            Some(m) => FieldSpec::new(k, m)?.build_tables(),
            None => FieldSpec::default_for(k),
        }
    }
}

/// Parses `0x`-prefixed (or bare) hexadecimal.
pub fn parse_hex_u64(s: &str) -> Option<u64> {
    let t = s.trim();
    let t = t
        .strip_prefix("0x")
        .or_else(|| t.strip_prefix("0X"))
        .unwrap_or(t);
    u64::from_str_radix(t, 16).ok()
}

impl FromStr for ModulusConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut cfg = ModulusConfig::default();
        for (idx, raw) in s.lines().enumerate() {
            let line = idx + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let (k, m) = body.split_once('=').ok_or_else(|| Error::Parse {
                line,
                message: format!("expected `degree=0xMODULUS`, got `{body}`"),
            })?;
            let k: u32 = k.trim().parse().map_err(|_| Error::Parse {
                line,
                message: format!("bad degree `{}`", k.trim()),
            })?;
            let m = parse_hex_u64(m).ok_or_else(|| Error::Parse {
                line,
                message: format!("bad modulus `{}`", m.trim()),
            })?;
            if poly_degree(m) != Some(k) {
                return Err(Error::Parse {
                    line,
                    message: format!("modulus {m:#x} does not have degree {k}"),
                });
            }
            cfg.insert(k, m);
        }
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_entries_and_comments() {
        let cfg: ModulusConfig = "# moduli\n4=0x19\n\n 8 = 0x11d # alt\n".parse().unwrap();
        assert_eq!(cfg.get(4), Some(0x19));
        assert_eq!(cfg.get(8), Some(0x11d));
        assert_eq!(cfg.get(12), None);
        assert_eq!(cfg.field(4).unwrap().modulus(), 0x19);
        assert_eq!(cfg.field(12).unwrap().modulus(), 0x1009);
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(matches!(
            "4 0x13".parse::<ModulusConfig>(),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            "4=0x13\n8=0x13".parse::<ModulusConfig>(),
            Err(Error::Parse { line: 2, .. })
        ));
        let cfg: ModulusConfig = "4=0x15".parse().unwrap();
        assert!(matches!(cfg.field(4), Err(Error::Reducible(0x15))));
    }
}
