use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Default cap on `|S|` for [`finite_sums`] and on block counts for [`nu`].
pub const FS_DEFAULT_CAP: usize = 24;

/// A finite nonempty set of positive integers, kept sorted.
///
/// Plays the role of the index sets `B`, `C`, `D` as well as the blocks
/// drawn from `P^+([m])`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    pub fn new(elements: impl IntoIterator<Item = usize>) -> Result<Self> {
        let set: BTreeSet<usize> = elements.into_iter().collect();
        if set.is_empty() {
            return Err(Error::EmptyIndexSet);
        }
        if set.contains(&0) {
            return Err(Error::precondition("index sets hold positive integers"));
        }
        Ok(IndexSet(set.into_iter().collect()))
    }

    /// Decodes a bitmask: bit `i` stands for element `i + 1`.
    pub fn from_mask(mask: u64) -> Result<Self> {
        Self::new((0..64).filter(|b| mask >> b & 1 == 1).map(|b| b + 1))
    }

    /// Inverse of [`IndexSet::from_mask`]; `None` if some element exceeds 64.
    pub fn to_mask(&self) -> Option<u64> {
        self.0
            .iter()
            .try_fold(0u64, |m, &i| (i <= 64).then(|| m | 1u64 << (i - 1)))
    }

    pub fn singleton(i: usize) -> Result<Self> {
        Self::new([i])
    }

    /// `{lo, lo+1, …, hi}`.
    pub fn range(lo: usize, hi: usize) -> Result<Self> {
        Self::new(lo..=hi)
    }

    pub fn min_element(&self) -> usize {
        self.0[0]
    }

    pub fn max_element(&self) -> usize {
        self.0[self.0.len() - 1]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// `A < B`: `max A < min B`.
    pub fn before(&self, other: &IndexSet) -> bool {
        self.max_element() < other.min_element()
    }

    pub fn union(&self, other: &IndexSet) -> IndexSet {
        let set: BTreeSet<usize> = self.iter().chain(other.iter()).collect();
        IndexSet(set.into_iter().collect())
    }

    pub fn is_disjoint(&self, other: &IndexSet) -> bool {
        !self.iter().any(|i| other.contains(i))
    }

    /// Selects the elements of `self` at the (1-based) ranks in `ranks`.
    pub fn select(&self, ranks: &IndexSet) -> Result<IndexSet> {
        let picked = ranks
            .iter()
            .map(|r| {
                self.0.get(r - 1).copied().ok_or(Error::IndexOutOfRange {
                    index: r,
                    len: self.len(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        IndexSet::new(picked)
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// All nonempty subsets of `[n]`, in bitmask order. `n` must be at most 63.
pub fn nonempty_subsets(n: usize) -> impl Iterator<Item = IndexSet> {
    assert!(n < 64, "nonempty_subsets supports n < 64");
    (1u64..(1u64 << n)).map(|m| IndexSet::from_mask(m).expect("nonzero mask"))
}

/// A finite set of positive integers of arbitrary size.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValueSet(BTreeSet<BigUint>);

impl ValueSet {
    pub fn new(values: impl IntoIterator<Item = BigUint>) -> Result<Self> {
        let set: BTreeSet<BigUint> = values.into_iter().collect();
        if set.iter().any(|v| v.is_zero()) {
            return Err(Error::precondition("value sets hold positive integers"));
        }
        Ok(ValueSet(set))
    }

    pub fn from_u64s(values: impl IntoIterator<Item = u64>) -> Result<Self> {
        Self::new(values.into_iter().map(BigUint::from))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, x: &BigUint) -> bool {
        self.0.contains(x)
    }

    pub fn iter(&self) -> impl Iterator<Item = &BigUint> {
        self.0.iter()
    }
}

/// `FS(S)`: every sum of a nonempty subset of `S`, each element used at most once.
pub fn finite_sums(set: &ValueSet) -> Result<ValueSet> {
    finite_sums_capped(set, FS_DEFAULT_CAP)
}

pub fn finite_sums_capped(set: &ValueSet, cap: usize) -> Result<ValueSet> {
    if set.is_empty() {
        return Err(Error::precondition("finite_sums needs a nonempty set"));
    }
    if set.len() > cap {
        return Err(Error::resource("finite_sums input cardinality", cap as u64));
    }
    let mut sums: BTreeSet<BigUint> = BTreeSet::new();
    let mut layer: Vec<BigUint> = Vec::with_capacity(1 << set.len());
    for x in set.iter() {
        let grown: Vec<BigUint> = layer.iter().map(|s| s + x).collect();
        layer.push(x.clone());
        layer.extend(grown);
    }
    sums.extend(layer);
    Ok(ValueSet(sums))
}

/// `pow(a)`: positions of the one bits in the binary expansion of `a`.
pub fn pow_set(a: &BigUint) -> BTreeSet<u64> {
    (0..a.bits()).filter(|&k| a.bit(k)).collect()
}

/// True iff `a` and `b` share no bit position.
pub fn power_disjoint(a: &BigUint, b: &BigUint) -> bool {
    (a & b).is_zero()
}

/// `NU(T)`: all unions of nonempty subcollections of pairwise disjoint blocks.
pub fn nu(blocks: &[IndexSet]) -> Result<BTreeSet<IndexSet>> {
    if blocks.is_empty() {
        return Err(Error::precondition("nu needs at least one block"));
    }
    if blocks.len() > FS_DEFAULT_CAP {
        return Err(Error::resource("nu block count", FS_DEFAULT_CAP as u64));
    }
    for (i, a) in blocks.iter().enumerate() {
        if blocks[i + 1..].iter().any(|b| !a.is_disjoint(b)) {
            return Err(Error::NotDisjoint);
        }
    }
    Ok(nonempty_subsets(blocks.len())
        .map(|pick| {
            let mut it = pick.iter().map(|k| &blocks[k - 1]);
            let first = it.next().expect("nonempty pick").clone();
            it.fold(first, |acc, b| acc.union(b))
        })
        .collect())
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Decimal {
    Text(String),
    Number(u64),
}

impl Decimal {
    fn into_biguint(self) -> std::result::Result<BigUint, String> {
        match self {
            Decimal::Number(n) => Ok(BigUint::from(n)),
            Decimal::Text(s) => s.parse().map_err(|e| format!("{s:?}: {e}")),
        }
    }
}

impl Serialize for IndexSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.0.iter().map(|i| i.to_string()))
    }
}

impl<'de> Deserialize<'de> for IndexSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = Vec::<Decimal>::deserialize(deserializer)?;
        let mut out = Vec::with_capacity(raw.len());
        for d in raw {
            let v = d.into_biguint().map_err(D::Error::custom)?;
            let v: usize = v
                .try_into()
                .map_err(|_| D::Error::custom("index too large"))?;
            out.push(v);
        }
        IndexSet::new(out).map_err(D::Error::custom)
    }
}

impl Serialize for ValueSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.0.iter().map(|v| v.to_string()))
    }
}

impl<'de> Deserialize<'de> for ValueSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = Vec::<Decimal>::deserialize(deserializer)?;
        let values = raw
            .into_iter()
            .map(Decimal::into_biguint)
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        ValueSet::new(values).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ap::pow2;

    fn vs(xs: &[u64]) -> ValueSet {
        ValueSet::from_u64s(xs.iter().copied()).unwrap()
    }

    #[test]
    fn finite_sums_examples() {
        assert_eq!(
            finite_sums(&vs(&[1, 2, 4])).unwrap(),
            vs(&[1, 2, 3, 4, 5, 6, 7])
        );
        assert_eq!(finite_sums(&vs(&[5])).unwrap(), vs(&[5]));
        // 3 = 1 + 2 collides, so 6 sums instead of 7
        assert_eq!(
            finite_sums(&vs(&[1, 2, 3])).unwrap(),
            vs(&[1, 2, 3, 4, 5, 6])
        );
        assert!(finite_sums(&ValueSet::default()).is_err());
    }

    #[test]
    fn finite_sums_cap() {
        let big = ValueSet::from_u64s(0..25).err();
        assert!(big.is_some(), "zero is rejected");
        let s = ValueSet::from_u64s(1..=25).unwrap();
        assert!(finite_sums(&s).unwrap_err().is_resource());
        assert!(finite_sums_capped(&vs(&[1, 2, 3]), 2)
            .unwrap_err()
            .is_resource());
    }

    #[test]
    fn pow_set_examples() {
        assert_eq!(pow_set(&5u32.into()), BTreeSet::from([0, 2]));
        assert_eq!(pow_set(&pow2(100)), BTreeSet::from([100]));
        assert_eq!(pow_set(&18u32.into()), BTreeSet::from([1, 4]));
    }

    #[test]
    fn power_disjoint_examples() {
        assert!(power_disjoint(&5u32.into(), &2u32.into()));
        assert!(!power_disjoint(&5u32.into(), &4u32.into()));
        assert!(power_disjoint(&10u32.into(), &132u32.into()));
    }

    #[test]
    fn nu_examples() {
        let one = IndexSet::singleton(1).unwrap();
        let two = IndexSet::singleton(2).unwrap();
        let got = nu(&[one.clone(), two.clone()]).unwrap();
        let want = BTreeSet::from([one.clone(), two.clone(), IndexSet::new([1, 2]).unwrap()]);
        assert_eq!(got, want);
        let three = IndexSet::singleton(3).unwrap();
        assert_eq!(nu(std::slice::from_ref(&three)).unwrap().len(), 1);
        assert_eq!(nu(&[one.clone(), two, three]).unwrap().len(), 7);
        let overlap = IndexSet::new([1, 2]).unwrap();
        assert!(matches!(nu(&[one, overlap]), Err(Error::NotDisjoint)));
    }

    #[test]
    fn index_set_basics() {
        assert!(matches!(IndexSet::new([]), Err(Error::EmptyIndexSet)));
        assert!(IndexSet::new([0, 1]).is_err());
        let a = IndexSet::new([3, 1, 2, 2]).unwrap();
        assert_eq!(a.as_slice(), &[1, 2, 3]);
        assert_eq!((a.min_element(), a.max_element()), (1, 3));
        let b = IndexSet::new([4, 6]).unwrap();
        assert!(a.before(&b));
        assert!(!b.before(&a));
        assert_eq!(
            IndexSet::from_mask(0b101).unwrap(),
            IndexSet::new([1, 3]).unwrap()
        );
        assert_eq!(b.to_mask(), Some(0b101000));
        assert_eq!(
            a.select(&IndexSet::new([1, 3]).unwrap())
                .unwrap()
                .as_slice(),
            &[1, 3]
        );
        assert!(a.select(&IndexSet::new([4]).unwrap()).is_err());
        assert_eq!(a.to_string(), "{1,2,3}");
    }

    #[test]
    fn json_forms() {
        let a = IndexSet::new([1, 3]).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), r#"["1","3"]"#);
        let back: IndexSet = serde_json::from_str(r#"["3", 1]"#).unwrap();
        assert_eq!(back, a);
        assert!(serde_json::from_str::<IndexSet>("[]").is_err());
        let v: ValueSet =
            serde_json::from_str(r#"["340282366920938463463374607431768211456"]"#).unwrap();
        assert!(v.contains(&pow2(128)));
    }
}
