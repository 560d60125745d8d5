use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite set of digit-system bases, each either 2 or an odd integer >= 3.
///
/// Stored sorted and deduplicated so that equal sets compare and hash equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct Bases(Vec<u64>);

pub fn check_base(base: u64) -> Result<()> {
    if base == 2 || (base >= 3 && base % 2 == 1) {
        Ok(())
    } else {
        Err(Error::InvalidBase(base))
    }
}

impl Bases {
    pub fn new(bases: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut v: Vec<u64> = bases.into_iter().collect();
        if v.is_empty() {
            return Err(Error::InvalidInput("base set is empty".into()));
        }
        for &b in &v {
            check_base(b)?;
        }
        v.sort_unstable();
        v.dedup();
        Ok(Bases(v))
    }

    /// The set {2, n}.
    pub fn pair(n: u64) -> Result<Self> {
        Bases::new([2, n])
    }

    pub fn single(b: u64) -> Result<Self> {
        Bases::new([b])
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.iter().copied()
    }

    pub fn max(&self) -> u64 {
        *self.0.last().expect("non-empty by construction")
    }

    pub fn contains(&self, b: u64) -> bool {
        self.0.binary_search(&b).is_ok()
    }
}

impl TryFrom<Vec<u64>> for Bases {
    type Error = Error;

    fn try_from(v: Vec<u64>) -> Result<Self> {
        Bases::new(v)
    }
}

impl From<Bases> for Vec<u64> {
    fn from(b: Bases) -> Self {
        b.0
    }
}

impl FromStr for Bases {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parsed = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::Parse(format!("bad base {:?} in {:?}", p.trim(), s)))
            })
            .collect::<Result<Vec<_>>>()?;
        Bases::new(parsed)
    }
}

impl fmt::Display for Bases {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorted_and_deduplicated() {
        let b = Bases::new([5, 2, 5]).unwrap();
        assert_eq!(b.as_slice(), &[2, 5]);
        assert_eq!(b.to_string(), "2,5");
        assert_eq!("5, 2".parse::<Bases>().unwrap(), b);
    }

    #[test]
    fn rejects_even_and_small_bases() {
        assert!(matches!(Bases::new([4]), Err(Error::InvalidBase(4))));
        assert!(matches!(Bases::new([1]), Err(Error::InvalidBase(1))));
        assert!(Bases::new(Vec::<u64>::new()).is_err());
        assert!("2,x".parse::<Bases>().is_err());
    }

    #[test]
    fn serde_validates() {
        assert!(serde_json::from_str::<Bases>("[2,6]").is_err());
        let b: Bases = serde_json::from_str("[9,2]").unwrap();
        assert_eq!(serde_json::to_string(&b).unwrap(), "[2,9]");
    }
}
