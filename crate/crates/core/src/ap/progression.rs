use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::IndexSet;
use crate::error::{Error, Result};

/// A finite arithmetic progression `first, first + diff, …, first + (len-1)·diff`.
///
/// Stored by its three parameters; term lists are derived on demand. Both
/// `first` and `diff` are at least one, so terms are positive and strictly
/// increasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Progression {
    first: BigUint,
    diff: BigUint,
    len: usize,
}

impl Progression {
    pub fn new(first: impl Into<BigUint>, diff: impl Into<BigUint>, len: usize) -> Result<Self> {
        let first = first.into();
        let diff = diff.into();
        if first.is_zero() {
            return Err(Error::InvalidProgression("first term must be >= 1".into()));
        }
        if diff.is_zero() {
            return Err(Error::InvalidProgression("difference must be >= 1".into()));
        }
        if len < 2 {
            return Err(Error::InvalidProgression(format!(
                "length must be >= 2, got {len}"
            )));
        }
        Ok(Progression { first, diff, len })
    }

    pub fn first(&self) -> &BigUint {
        &self.first
    }

    /// The common difference.
    pub fn diff(&self) -> &BigUint {
        &self.diff
    }

    pub fn len(&self) -> usize {
        self.len
    }

    /// Always false; present for the `len`/`is_empty` convention.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// The `s`-th term, 1-based.
    pub fn term(&self, s: usize) -> Result<BigUint> {
        if s == 0 || s > self.len {
            return Err(Error::IndexOutOfRange {
                index: s,
                len: self.len,
            });
        }
        Ok(self.term_unchecked(s))
    }

    fn term_unchecked(&self, s: usize) -> BigUint {
        &self.first + &self.diff * BigUint::from(s - 1)
    }

    pub fn last(&self) -> BigUint {
        self.term_unchecked(self.len)
    }

    pub fn terms(&self) -> impl Iterator<Item = BigUint> + '_ {
        (1..=self.len).map(move |s| self.term_unchecked(s))
    }

    /// Pointwise sum: `(P ⊕ Q)[s] = P[s] + Q[s]`.
    pub fn oplus(&self, other: &Progression) -> Result<Progression> {
        self.check_len(other)?;
        Ok(Progression {
            first: &self.first + &other.first,
            diff: &self.diff + &other.diff,
            len: self.len,
        })
    }

    /// `P ≺ Q`: every term of `self` is strictly below the matching term of
    /// `other`. Terms are affine in `s`, so comparing both endpoints decides it.
    pub fn precedes(&self, other: &Progression) -> Result<bool> {
        self.check_len(other)?;
        Ok(self.first < other.first && self.last() < other.last())
    }

    /// Term-by-term evaluation of `≺`; the reference for [`Progression::precedes`].
    pub fn precedes_termwise(&self, other: &Progression) -> Result<bool> {
        self.check_len(other)?;
        Ok(self.terms().zip(other.terms()).all(|(a, b)| a < b))
    }

    /// Terms at positions `a, a+d, …, a+(l-1)d`, again a progression with
    /// difference `d·diff`.
    pub fn subsample(&self, a: usize, d: usize, l: usize) -> Result<Progression> {
        if a == 0 || d == 0 {
            return Err(Error::precondition("subsample needs a >= 1 and d >= 1"));
        }
        let end = a + (l.saturating_sub(1)) * d;
        if end > self.len {
            return Err(Error::IndexOutOfRange {
                index: end,
                len: self.len,
            });
        }
        Progression::new(self.term_unchecked(a), &self.diff * BigUint::from(d), l)
    }

    fn check_len(&self, other: &Progression) -> Result<()> {
        if self.len != other.len {
            return Err(Error::LengthMismatch {
                left: self.len,
                right: other.len,
            });
        }
        Ok(())
    }
}

/// Left fold of `⊕` over the members of `family` selected by `index` (1-based).
pub fn oplus_family(family: &[Progression], index: &IndexSet) -> Result<Progression> {
    let mut acc: Option<Progression> = None;
    for i in index.iter() {
        let member = family
            .get(i.wrapping_sub(1))
            .ok_or(Error::IndexOutOfRange {
                index: i,
                len: family.len(),
            })?;
        acc = Some(match acc {
            None => member.clone(),
            Some(sum) => sum.oplus(member)?,
        });
    }
    acc.ok_or(Error::EmptyIndexSet)
}

/// `2^k` as a big integer.
pub fn pow2(k: u64) -> BigUint {
    BigUint::one() << k
}

impl fmt::Display for Progression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.first, self.diff, self.len)
    }
}

impl FromStr for Progression {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.trim().split(':');
        let (Some(a), Some(d), Some(l), None) =
            (parts.next(), parts.next(), parts.next(), parts.next())
        else {
            return Err(Error::parse(format!(
                "progression must be first:diff:length, got {s:?}"
            )));
        };
        let first = BigUint::from_str(a).map_err(|e| Error::parse(format!("first {a:?}: {e}")))?;
        let diff = BigUint::from_str(d).map_err(|e| Error::parse(format!("diff {d:?}: {e}")))?;
        let len = l
            .parse::<usize>()
            .map_err(|e| Error::parse(format!("length {l:?}: {e}")))?;
        Progression::new(first, diff, len)
    }
}

impl Serialize for Progression {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Progression {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ap(a: u64, d: u64, l: usize) -> Progression {
        Progression::new(a, d, l).unwrap()
    }

    #[test]
    fn term_examples() {
        assert_eq!(ap(3, 2, 3).term(2).unwrap(), BigUint::from(5u32));
        assert_eq!(ap(7, 1, 4).term(1).unwrap(), BigUint::from(7u32));
        let p = Progression::new(2u32, pow2(7), 3).unwrap();
        assert_eq!(p.term(3).unwrap(), BigUint::from(258u32));
        // P_2 of the m=2, q=3 power-of-two family starts at 2^2
        let p = Progression::new(4u32, pow2(7), 3).unwrap();
        assert_eq!(p.term(3).unwrap(), BigUint::from(260u32));
        assert!(matches!(
            ap(3, 2, 3).term(4),
            Err(Error::IndexOutOfRange { index: 4, len: 3 })
        ));
        assert!(ap(3, 2, 3).term(0).is_err());
    }

    #[test]
    fn rejects_degenerate() {
        assert!(Progression::new(0u32, 1u32, 3).is_err());
        assert!(Progression::new(1u32, 0u32, 3).is_err());
        assert!(Progression::new(1u32, 1u32, 1).is_err());
        assert!(Progression::new(1u32, 1u32, 2).is_ok());
    }

    #[test]
    fn oplus_examples() {
        assert_eq!(ap(1, 1, 3).oplus(&ap(2, 2, 3)).unwrap(), ap(3, 3, 3));
        assert_eq!(ap(4, 5, 3).oplus(&ap(4, 5, 3)).unwrap(), ap(8, 10, 3));
        let sum = ap(1, 1, 2)
            .oplus(&ap(3, 3, 2))
            .and_then(|p| p.oplus(&ap(9, 9, 2)))
            .unwrap();
        assert_eq!(
            sum.terms().collect::<Vec<_>>(),
            vec![13u32.into(), 26u32.into()]
        );
        assert!(matches!(
            ap(1, 1, 3).oplus(&ap(1, 1, 4)),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn oplus_family_examples() {
        let fam = vec![ap(1, 1, 3), ap(2, 2, 3), ap(5, 1, 3)];
        let c = IndexSet::new([1, 3]).unwrap();
        assert_eq!(oplus_family(&fam, &c).unwrap(), ap(6, 2, 3));
        let c = IndexSet::new([2]).unwrap();
        assert_eq!(oplus_family(&fam, &c).unwrap(), ap(2, 2, 3));
        let c = IndexSet::new([4]).unwrap();
        assert!(matches!(
            oplus_family(&fam, &c),
            Err(Error::IndexOutOfRange { index: 4, .. })
        ));

        let thm4 = vec![
            Progression::new(2u32, 8u32, 3).unwrap(),
            Progression::new(4u32, 128u32, 3).unwrap(),
        ];
        let sum = oplus_family(&thm4, &IndexSet::new([1, 2]).unwrap()).unwrap();
        let terms: Vec<BigUint> = sum.terms().collect();
        assert_eq!(terms, vec![6u32.into(), 142u32.into(), 278u32.into()]);
    }

    #[test]
    fn precedes_examples() {
        assert!(ap(1, 1, 3).precedes(&ap(2, 2, 3)).unwrap());
        assert!(!ap(1, 4, 3).precedes(&ap(2, 2, 3)).unwrap());
        let p = ap(4, 3, 5);
        assert!(!p.precedes(&p).unwrap());
        assert!(ap(1, 1, 3).precedes(&ap(1, 1, 4)).is_err());
    }

    #[test]
    fn subsample_scales_difference() {
        let p = ap(5, 3, 9);
        let q = p.subsample(2, 3, 3).unwrap();
        assert_eq!(q, ap(8, 9, 3));
        assert!(p.subsample(3, 4, 3).is_err());
    }

    #[test]
    fn text_form() {
        let p: Progression = "3:2:5".parse().unwrap();
        assert_eq!(p, ap(3, 2, 5));
        assert_eq!(p.to_string(), "3:2:5");
        let big: Progression = "340282366920938463463374607431768211456:1:3"
            .parse()
            .unwrap();
        assert_eq!(big.first(), &pow2(128));
        assert!("3:2".parse::<Progression>().is_err());
        assert!("3:x:2".parse::<Progression>().is_err());
        assert!("3:2:5:1".parse::<Progression>().is_err());
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, "\"3:2:5\"");
    }
}
