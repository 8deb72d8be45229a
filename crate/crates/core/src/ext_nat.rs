//! Natural numbers extended with a single infinite cardinal.

use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};

/// A finite count or ℵ₀. Ordered with every finite value below `Aleph0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum ExtNat {
    Finite(u64),
    Aleph0,
}

impl ExtNat {
    pub const ZERO: ExtNat = ExtNat::Finite(0);

    pub fn is_finite(self) -> bool {
        matches!(self, ExtNat::Finite(_))
    }

    pub fn is_infinite(self) -> bool {
        !self.is_finite()
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            ExtNat::Finite(n) => Some(n),
            ExtNat::Aleph0 => None,
        }
    }

    pub fn is_zero(self) -> bool {
        self == ExtNat::ZERO
    }
}

impl From<u64> for ExtNat {
    fn from(n: u64) -> Self {
        ExtNat::Finite(n)
    }
}

impl Add for ExtNat {
    type Output = ExtNat;

    fn add(self, rhs: ExtNat) -> ExtNat {
        match (self, rhs) {
            (ExtNat::Finite(a), ExtNat::Finite(b)) => ExtNat::Finite(a + b),
            _ => ExtNat::Aleph0,
        }
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtNat::Finite(n) => write!(f, "{n}"),
            ExtNat::Aleph0 => f.write_str("ℵ₀"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_puts_aleph0_last() {
        assert!(ExtNat::Finite(u64::MAX) < ExtNat::Aleph0);
        assert!(ExtNat::Finite(2) < ExtNat::Finite(3));
    }

    #[test]
    fn addition_absorbs() {
        assert_eq!(ExtNat::Finite(2) + ExtNat::Finite(3), ExtNat::Finite(5));
        assert_eq!(ExtNat::Finite(2) + ExtNat::Aleph0, ExtNat::Aleph0);
    }

    #[test]
    fn json_tags() {
        assert_eq!(
            serde_json::to_string(&ExtNat::Finite(3)).unwrap(),
            r#"{"kind":"finite","value":3}"#
        );
        assert_eq!(serde_json::to_string(&ExtNat::Aleph0).unwrap(), r#"{"kind":"aleph0"}"#);
        let back: ExtNat = serde_json::from_str(r#"{"kind":"aleph0"}"#).unwrap();
        assert_eq!(back, ExtNat::Aleph0);
    }
}
