//! Colorings: explicit tables on `[p]`, rule-based oracles on all positive
//! integers, and colorings of the nonempty subsets of `[m]`.
//!
//! Tables and set colorings are enumerated up to color permutation using
//! first-occurrence (restricted growth) canonical form: color `k + 1` may
//! only appear after color `k` has appeared.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::ap::IndexSet;
use crate::error::{Error, Result};

/// Colors are `1..=c`.
pub type Color = u32;

/// Largest number of subset cells a [`SetColoring`] stream will enumerate.
pub const SET_CELL_CAP: usize = 31;

/// Largest color count with a single-character text form.
pub const TEXT_COLOR_LIMIT: u32 = 35;

/// Anything that assigns colors to positive integers.
pub trait Coloring {
    /// Number of colors `c`; every color lies in `1..=c`.
    fn colors(&self) -> u32;

    fn color_of(&self, x: &BigUint) -> Result<Color>;

    /// `Some(p)` for colorings defined only on `[p]`.
    fn domain(&self) -> Option<usize> {
        None
    }
}

/// A coloring of `[p]` given cell by cell.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TableColoring {
    c: u32,
    cells: Vec<Color>,
}

impl TableColoring {
    pub fn new(c: u32, cells: Vec<Color>) -> Result<Self> {
        if c == 0 {
            return Err(Error::precondition("a coloring needs at least one color"));
        }
        if let Some(&bad) = cells.iter().find(|&&x| x == 0 || x > c) {
            return Err(Error::InvalidColor {
                color: bad,
                colors: c,
            });
        }
        Ok(TableColoring { c, cells })
    }

    /// The coloring of `[0]`, root of the backtracking tree.
    pub fn empty(c: u32) -> Result<Self> {
        Self::new(c, Vec::new())
    }

    pub fn constant(p: usize, color: Color, c: u32) -> Result<Self> {
        Self::new(c, vec![color; p])
    }

    /// Parses the text form (`'1'..='9'`, then `'a'..='z'` for 10..=35).
    /// With `c = None` the color count is the largest color present.
    pub fn parse(text: &str, c: Option<u32>) -> Result<Self> {
        let cells = text
            .trim()
            .chars()
            .map(|ch| match ch {
                '1'..='9' => Ok(ch as u32 - '0' as u32),
                'a'..='z' => Ok(ch as u32 - 'a' as u32 + 10),
                _ => Err(Error::parse(format!("bad color symbol {ch:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        let c = c.unwrap_or_else(|| cells.iter().copied().max().unwrap_or(1));
        Self::new(c, cells)
    }

    /// Text form, or `None` when `c` exceeds [`TEXT_COLOR_LIMIT`].
    pub fn to_text(&self) -> Option<String> {
        (self.c <= TEXT_COLOR_LIMIT).then(|| self.cells.iter().map(|&k| symbol(k)).collect())
    }

    /// Number of colored points `p`.
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self) -> &[Color] {
        &self.cells
    }

    /// Color of `x ∈ [p]`.
    pub fn get(&self, x: usize) -> Result<Color> {
        if x == 0 || x > self.cells.len() {
            return Err(Error::OutOfDomain {
                value: x.to_string(),
                max: self.cells.len(),
            });
        }
        Ok(self.cells[x - 1])
    }

    /// Unchecked lookup for the search hot paths; `x` is 1-based.
    #[inline]
    pub(crate) fn at(&self, x: usize) -> Color {
        self.cells[x - 1]
    }

    pub fn max_used(&self) -> Color {
        self.cells.iter().copied().max().unwrap_or(0)
    }

    pub fn is_canonical(&self) -> bool {
        is_restricted_growth(&self.cells)
    }

    /// Relabels colors in order of first occurrence.
    pub fn canonicalize(&self) -> TableColoring {
        TableColoring {
            c: self.c,
            cells: relabel(&self.cells),
        }
    }

    /// Appends one cell while keeping the canonical order.
    pub fn extend(&self, color: Color) -> Result<TableColoring> {
        let mut next = self.clone();
        next.push_checked(color)?;
        Ok(next)
    }

    pub(crate) fn push_checked(&mut self, color: Color) -> Result<()> {
        if color == 0 || color > self.c {
            return Err(Error::InvalidColor {
                color,
                colors: self.c,
            });
        }
        let max_used = self.max_used();
        if color > max_used + 1 {
            return Err(Error::NotCanonical { color, max_used });
        }
        self.cells.push(color);
        Ok(())
    }

    /// The restriction to `[p]`.
    pub fn prefix(&self, p: usize) -> TableColoring {
        TableColoring {
            c: self.c,
            cells: self.cells[..p.min(self.cells.len())].to_vec(),
        }
    }
}

impl Coloring for TableColoring {
    fn colors(&self) -> u32 {
        self.c
    }

    fn color_of(&self, x: &BigUint) -> Result<Color> {
        let out = || Error::OutOfDomain {
            value: x.to_string(),
            max: self.cells.len(),
        };
        let x = x.to_usize().ok_or_else(out)?;
        self.get(x)
    }

    fn domain(&self) -> Option<usize> {
        Some(self.cells.len())
    }
}

impl fmt::Display for TableColoring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_text() {
            Some(t) => f.write_str(&t),
            None => write!(f, "{:?}", self.cells),
        }
    }
}

fn symbol(k: Color) -> char {
    if k < 10 {
        char::from(b'0' + k as u8)
    } else {
        char::from(b'a' + (k - 10) as u8)
    }
}

fn is_restricted_growth(cells: &[Color]) -> bool {
    let mut max = 0;
    for &k in cells {
        if k > max + 1 {
            return false;
        }
        max = max.max(k);
    }
    true
}

fn relabel(cells: &[Color]) -> Vec<Color> {
    let mut map: BTreeMap<Color, Color> = BTreeMap::new();
    cells
        .iter()
        .map(|k| {
            let next = map.len() as Color + 1;
            *map.entry(*k).or_insert(next)
        })
        .collect()
}

#[derive(Serialize, Deserialize)]
struct TableRepr {
    colors: u32,
    table: TableCells,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum TableCells {
    Text(String),
    List(Vec<Color>),
}

impl Serialize for TableColoring {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let table = match self.to_text() {
            Some(t) => TableCells::Text(t),
            None => TableCells::List(self.cells.clone()),
        };
        TableRepr {
            colors: self.c,
            table,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TableColoring {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = TableRepr::deserialize(deserializer)?;
        match repr.table {
            TableCells::Text(t) => TableColoring::parse(&t, Some(repr.colors)),
            TableCells::List(cells) => TableColoring::new(repr.colors, cells),
        }
        .map_err(D::Error::custom)
    }
}

/// Rules for [`OracleColoring`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "parameters", rename_all = "kebab-case")]
pub enum OracleRule {
    /// `classes[x mod modulus]`.
    Modulus {
        modulus: u64,
        classes: Vec<Color>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        colors: Option<u32>,
    },
    /// `map[digit]` where `digit = (x / base^position) mod base`.
    Digit {
        base: u32,
        position: u32,
        map: Vec<Color>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        colors: Option<u32>,
    },
    /// A keyed hash of `x` reduced into `1..=colors`.
    Seeded { seed: u64, colors: u32 },
}

/// A total, deterministic coloring of all positive integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleColoring {
    rule: OracleRule,
    c: u32,
}

impl OracleColoring {
    pub fn new(rule: OracleRule) -> Result<Self> {
        let check_map = |map: &[Color], size: u64, colors: Option<u32>| -> Result<u32> {
            if map.len() as u64 != size {
                return Err(Error::precondition(format!(
                    "rule map has {} entries, expected {size}",
                    map.len()
                )));
            }
            let max = map.iter().copied().max().unwrap_or(0);
            let c = colors.unwrap_or(max);
            if let Some(&bad) = map.iter().find(|&&k| k == 0 || k > c) {
                return Err(Error::InvalidColor {
                    color: bad,
                    colors: c,
                });
            }
            Ok(c)
        };
        let c = match &rule {
            OracleRule::Modulus {
                modulus,
                classes,
                colors,
            } => {
                if *modulus == 0 {
                    return Err(Error::precondition("modulus must be >= 1"));
                }
                check_map(classes, *modulus, *colors)?
            }
            OracleRule::Digit {
                base, map, colors, ..
            } => {
                if *base < 2 {
                    return Err(Error::precondition("digit base must be >= 2"));
                }
                check_map(map, u64::from(*base), *colors)?
            }
            OracleRule::Seeded { colors, .. } => {
                if *colors == 0 {
                    return Err(Error::precondition("seeded rule needs colors >= 1"));
                }
                *colors
            }
        };
        Ok(OracleColoring { rule, c })
    }

    pub fn constant(color: Color, c: u32) -> Result<Self> {
        Self::new(OracleRule::Modulus {
            modulus: 1,
            classes: vec![color],
            colors: Some(c),
        })
    }

    pub fn modulus(modulus: u64, classes: Vec<Color>) -> Result<Self> {
        Self::new(OracleRule::Modulus {
            modulus,
            classes,
            colors: None,
        })
    }

    /// Odd numbers get color 1, even numbers color 2.
    pub fn parity() -> Self {
        Self::modulus(2, vec![2, 1]).expect("valid rule")
    }

    /// Residue `r` modulo `m` gets color `r + 1`.
    pub fn residue(m: u64) -> Result<Self> {
        Self::modulus(m, (1..=m as Color).collect())
    }

    pub fn digit(base: u32, position: u32, map: Vec<Color>) -> Result<Self> {
        Self::new(OracleRule::Digit {
            base,
            position,
            map,
            colors: None,
        })
    }

    pub fn seeded(seed: u64, colors: u32) -> Result<Self> {
        Self::new(OracleRule::Seeded { seed, colors })
    }

    pub fn rule(&self) -> &OracleRule {
        &self.rule
    }
}

impl Coloring for OracleColoring {
    fn colors(&self) -> u32 {
        self.c
    }

    fn color_of(&self, x: &BigUint) -> Result<Color> {
        if x.is_zero() {
            return Err(Error::OutOfDomain {
                value: "0".into(),
                max: 0,
            });
        }
        Ok(match &self.rule {
            OracleRule::Modulus {
                modulus, classes, ..
            } => {
                let r = (x % *modulus).to_u64().expect("residue fits");
                classes[r as usize]
            }
            OracleRule::Digit {
                base,
                position,
                map,
                ..
            } => {
                let base = BigUint::from(*base);
                let digit = (x / base.pow(*position)) % &base;
                map[digit.to_usize().expect("digit fits")]
            }
            OracleRule::Seeded { seed, colors } => {
                let h = x
                    .iter_u64_digits()
                    .fold(splitmix64(*seed), |h, limb| splitmix64(h ^ limb));
                (h % u64::from(*colors)) as Color + 1
            }
        })
    }
}

impl Serialize for OracleColoring {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.rule.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for OracleColoring {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let rule = OracleRule::deserialize(deserializer)?;
        OracleColoring::new(rule).map_err(D::Error::custom)
    }
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// A coloring of `P^+([m])`, indexed by bitmask (bit `i` ↔ element `i + 1`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SetColoring {
    m: usize,
    c: u32,
    cells: Vec<Color>,
}

impl SetColoring {
    /// `cells[mask - 1]` is the color of the subset encoded by `mask`.
    pub fn new(m: usize, c: u32, cells: Vec<Color>) -> Result<Self> {
        if m == 0 || m >= 64 {
            return Err(Error::precondition("set colorings need 1 <= m < 64"));
        }
        if cells.len() != (1usize << m) - 1 {
            return Err(Error::precondition(format!(
                "set coloring on [{m}] needs {} cells, got {}",
                (1usize << m) - 1,
                cells.len()
            )));
        }
        TableColoring::new(c, Vec::new())?;
        if let Some(&bad) = cells.iter().find(|&&k| k == 0 || k > c) {
            return Err(Error::InvalidColor {
                color: bad,
                colors: c,
            });
        }
        Ok(SetColoring { m, c, cells })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn colors(&self) -> u32 {
        self.c
    }

    pub fn cells(&self) -> &[Color] {
        &self.cells
    }

    /// Color of the subset `mask` (nonzero, below `2^m`).
    pub fn get(&self, mask: u64) -> Result<Color> {
        if mask == 0 || mask as usize > self.cells.len() {
            return Err(Error::OutOfDomain {
                value: mask.to_string(),
                max: self.cells.len(),
            });
        }
        Ok(self.cells[mask as usize - 1])
    }

    pub fn color_of_set(&self, set: &IndexSet) -> Result<Color> {
        let mask = set.to_mask().ok_or(Error::IndexOutOfRange {
            index: set.max_element(),
            len: self.m,
        })?;
        self.get(mask)
    }

    /// The restriction to subsets of `[m']`, `m' <= m`.
    pub fn restrict(&self, m: usize) -> Result<SetColoring> {
        if m == 0 || m > self.m {
            return Err(Error::precondition("restriction must keep 1 <= m' <= m"));
        }
        SetColoring::new(m, self.c, self.cells[..(1usize << m) - 1].to_vec())
    }

    /// Reads the cells as the table coloring of `FS({1, 2, …, 2^{m-1}}) = [2^m - 1]`.
    pub fn as_binary_table(&self) -> TableColoring {
        TableColoring {
            c: self.c,
            cells: self.cells.clone(),
        }
    }

    pub fn is_canonical(&self) -> bool {
        is_restricted_growth(&self.cells)
    }
}

impl Serialize for SetColoring {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        struct Assignment<'a>(&'a [Color]);
        impl Serialize for Assignment<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                s.collect_map(
                    self.0
                        .iter()
                        .enumerate()
                        .map(|(i, k)| ((i + 1).to_string(), *k)),
                )
            }
        }
        let mut st = serializer.serialize_struct("SetColoring", 3)?;
        st.serialize_field("m", &self.m)?;
        st.serialize_field("colors", &self.c)?;
        st.serialize_field("assignment", &Assignment(&self.cells))?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for SetColoring {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        #[derive(Deserialize)]
        struct Repr {
            m: usize,
            colors: u32,
            assignment: BTreeMap<String, Color>,
        }
        let repr = Repr::deserialize(deserializer)?;
        if repr.m == 0 || repr.m >= 64 {
            return Err(D::Error::custom("set colorings need 1 <= m < 64"));
        }
        let size = (1usize << repr.m) - 1;
        let mut cells = vec![0; size];
        for (key, color) in repr.assignment {
            let mask: usize = key
                .parse()
                .map_err(|_| D::Error::custom(format!("bad bitmask key {key:?}")))?;
            if mask == 0 || mask > size {
                return Err(D::Error::custom(format!("bitmask {mask} outside P^+([m])")));
            }
            cells[mask - 1] = color;
        }
        if cells.contains(&0) {
            return Err(D::Error::custom("set coloring is not total"));
        }
        SetColoring::new(repr.m, repr.colors, cells).map_err(D::Error::custom)
    }
}

/// Restricted growth strings of a fixed length with colors `1..=c`,
/// in lexicographic order.
#[derive(Clone, Debug)]
struct Rgs {
    c: u32,
    cur: Vec<Color>,
    done: bool,
}

impl Rgs {
    fn new(len: usize, c: u32) -> Self {
        Rgs {
            c,
            cur: vec![1; len],
            done: c == 0,
        }
    }
}

impl Iterator for Rgs {
    type Item = Vec<Color>;

    fn next(&mut self) -> Option<Vec<Color>> {
        if self.done {
            return None;
        }
        let out = self.cur.clone();
        // prefix maxima, then bump the rightmost position that can grow
        let mut maxes = Vec::with_capacity(self.cur.len());
        let mut m = 0;
        for &k in &self.cur {
            maxes.push(m);
            m = m.max(k);
        }
        let bump = (1..self.cur.len())
            .rev()
            .find(|&i| self.cur[i] < self.c.min(maxes[i] + 1));
        match bump {
            Some(i) => {
                self.cur[i] += 1;
                for k in &mut self.cur[i + 1..] {
                    *k = 1;
                }
            }
            None => self.done = true,
        }
        Some(out)
    }
}

/// One representative per color-permutation orbit of the `c^p` colorings of `[p]`.
pub fn enumerate_canonical(p: usize, c: u32) -> impl Iterator<Item = TableColoring> {
    Rgs::new(p, c).map(move |cells| TableColoring { c, cells })
}

/// One representative per color-permutation orbit of the colorings of `P^+([m])`.
pub fn set_coloring_enumerate(m: usize, c: u32) -> Result<impl Iterator<Item = SetColoring>> {
    if m == 0 || m > 5 || (1usize << m) - 1 > SET_CELL_CAP {
        return Err(Error::resource(
            format!("set coloring enumeration over 2^{m} - 1 cells"),
            SET_CELL_CAP as u64,
        ));
    }
    if c == 0 {
        return Err(Error::precondition("a coloring needs at least one color"));
    }
    Ok(Rgs::new((1usize << m) - 1, c).map(move |cells| SetColoring { m, c, cells }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn texts(p: usize, c: u32) -> Vec<String> {
        enumerate_canonical(p, c)
            .map(|t| t.to_text().unwrap())
            .collect()
    }

    /// Every coloring of `[p]` by brute force, then quotient by color permutation.
    fn orbit_representatives(p: usize, c: u32) -> HashSet<Vec<Color>> {
        let total = (c as usize).pow(p as u32);
        (0..total)
            .map(|mut code| {
                let cells: Vec<Color> = (0..p)
                    .map(|_| {
                        let k = (code % c as usize) as Color + 1;
                        code /= c as usize;
                        k
                    })
                    .collect();
                relabel(&cells)
            })
            .collect()
    }

    #[test]
    fn color_examples() {
        let t = TableColoring::parse("12211221", None).unwrap();
        assert_eq!(t.get(4).unwrap(), 1);
        assert!(matches!(t.get(9), Err(Error::OutOfDomain { .. })));
        assert!(t.color_of(&0u32.into()).is_err());
        assert_eq!(OracleColoring::parity().color_of(&10u32.into()).unwrap(), 2);
        assert_eq!(OracleColoring::parity().color_of(&7u32.into()).unwrap(), 1);
        let s = OracleColoring::seeded(42, 3).unwrap();
        for x in 1u32..200 {
            let a = s.color_of(&x.into()).unwrap();
            assert_eq!(a, s.color_of(&x.into()).unwrap());
            assert!((1..=3).contains(&a));
        }
    }

    #[test]
    fn seeded_rule_uses_all_colors() {
        let s = OracleColoring::seeded(7, 4).unwrap();
        let seen: HashSet<Color> = (1u32..100)
            .map(|x| s.color_of(&x.into()).unwrap())
            .collect();
        assert_eq!(seen.len(), 4);
        let t = OracleColoring::seeded(8, 4).unwrap();
        assert!(
            (1u32..100).any(|x| s.color_of(&x.into()).unwrap() != t.color_of(&x.into()).unwrap())
        );
    }

    #[test]
    fn digit_rule() {
        // bit 4 of x
        let d = OracleColoring::digit(2, 4, vec![1, 2]).unwrap();
        assert_eq!(d.color_of(&15u32.into()).unwrap(), 1);
        assert_eq!(d.color_of(&16u32.into()).unwrap(), 2);
        let dec = OracleColoring::digit(10, 1, (1..=10).collect()).unwrap();
        assert_eq!(dec.color_of(&1234u32.into()).unwrap(), 4);
        assert!(OracleColoring::digit(1, 0, vec![1]).is_err());
        assert!(OracleColoring::digit(2, 0, vec![1]).is_err());
    }

    #[test]
    fn canonical_enumeration_examples() {
        assert_eq!(texts(2, 2), vec!["11", "12"]);
        assert_eq!(texts(3, 2), vec!["111", "112", "121", "122"]);
        assert_eq!(texts(1, 5), vec!["1"]);
    }

    #[test]
    fn canonical_enumeration_matches_orbit_quotient() {
        for (p, c) in [(2, 2), (3, 2), (4, 3), (5, 3), (6, 2), (5, 4)] {
            let got: HashSet<Vec<Color>> = enumerate_canonical(p, c).map(|t| t.cells).collect();
            assert_eq!(
                got.len(),
                enumerate_canonical(p, c).count(),
                "no duplicates"
            );
            assert_eq!(got, orbit_representatives(p, c), "p={p} c={c}");
        }
    }

    #[test]
    fn two_color_count_is_power_of_two() {
        for p in 1..=12 {
            assert_eq!(enumerate_canonical(p, 2).count(), 1 << (p - 1));
        }
    }

    #[test]
    fn extend_examples() {
        let t = TableColoring::parse("12", Some(3)).unwrap();
        assert_eq!(t.extend(1).unwrap().to_text().unwrap(), "121");
        let t = TableColoring::parse("11", Some(3)).unwrap();
        assert_eq!(t.extend(2).unwrap().to_text().unwrap(), "112");
        let t = TableColoring::parse("1", Some(3)).unwrap();
        assert!(matches!(
            t.extend(3),
            Err(Error::NotCanonical {
                color: 3,
                max_used: 1
            })
        ));
        assert!(matches!(t.extend(4), Err(Error::InvalidColor { .. })));
    }

    #[test]
    fn extend_tree_reproduces_enumeration() {
        for c in 1..=3 {
            let mut level = vec![TableColoring::empty(c).unwrap()];
            for p in 1..=7 {
                level = level
                    .iter()
                    .flat_map(|t| (1..=c).filter_map(move |k| t.extend(k).ok()))
                    .collect();
                assert!(level.iter().all(TableColoring::is_canonical));
                let expected: Vec<TableColoring> = enumerate_canonical(p, c).collect();
                assert_eq!(level, expected, "p={p} c={c}");
            }
        }
    }

    #[test]
    fn canonicalize_lands_in_stream() {
        let mut x = 12345u64;
        for _ in 0..200 {
            x = splitmix64(x);
            let p = 1 + (x % 9) as usize;
            let cells: Vec<Color> = (0..p).map(|i| ((x >> (3 * i)) % 3) as Color + 1).collect();
            let t = TableColoring::new(3, cells).unwrap();
            let canon = t.canonicalize();
            assert!(canon.is_canonical());
            let hits = enumerate_canonical(p, 3).filter(|u| *u == canon).count();
            assert_eq!(hits, 1);
        }
    }

    #[test]
    fn set_coloring_enumeration_examples() {
        assert_eq!(set_coloring_enumerate(1, 2).unwrap().count(), 1);
        assert_eq!(set_coloring_enumerate(2, 1).unwrap().count(), 1);
        assert_eq!(set_coloring_enumerate(2, 2).unwrap().count(), 4);
        assert!(set_coloring_enumerate(6, 2).err().unwrap().is_resource());
    }

    #[test]
    fn serialization_forms() {
        let t = TableColoring::parse("1221", Some(2)).unwrap();
        let json = serde_json::to_string(&t).unwrap();
        assert_eq!(json, r#"{"colors":2,"table":"1221"}"#);
        let back: TableColoring = serde_json::from_str(&json).unwrap();
        assert_eq!(back, t);
        let wide = TableColoring::new(40, vec![1, 40, 2]).unwrap();
        assert!(wide.to_text().is_none());
        let json = serde_json::to_string(&wide).unwrap();
        assert_eq!(json, r#"{"colors":40,"table":[1,40,2]}"#);
        assert_eq!(serde_json::from_str::<TableColoring>(&json).unwrap(), wide);
        let letters = TableColoring::parse("19az", None).unwrap();
        assert_eq!(letters.cells(), &[1, 9, 10, 35]);

        let o = OracleColoring::parity();
        let json = serde_json::to_string(&o).unwrap();
        assert_eq!(
            json,
            r#"{"kind":"modulus","parameters":{"modulus":2,"classes":[2,1]}}"#
        );
        assert_eq!(serde_json::from_str::<OracleColoring>(&json).unwrap(), o);
        let bad = r#"{"kind":"modulus","parameters":{"modulus":3,"classes":[1]}}"#;
        assert!(serde_json::from_str::<OracleColoring>(bad).is_err());
        let seeded: OracleColoring =
            serde_json::from_str(r#"{"kind":"seeded","parameters":{"seed":5,"colors":2}}"#)
                .unwrap();
        assert_eq!(seeded.colors(), 2);

        let sc = SetColoring::new(2, 2, vec![1, 1, 2]).unwrap();
        let json = serde_json::to_string(&sc).unwrap();
        assert_eq!(
            json,
            r#"{"m":2,"colors":2,"assignment":{"1":1,"2":1,"3":2}}"#
        );
        assert_eq!(serde_json::from_str::<SetColoring>(&json).unwrap(), sc);
        let partial = r#"{"m":2,"colors":2,"assignment":{"1":1,"3":2}}"#;
        assert!(serde_json::from_str::<SetColoring>(partial).is_err());
    }

    #[test]
    fn set_coloring_lookup() {
        let sc = SetColoring::new(2, 2, vec![1, 1, 2]).unwrap();
        assert_eq!(sc.color_of_set(&IndexSet::new([1, 2]).unwrap()).unwrap(), 2);
        assert!(sc.get(4).is_err());
        assert_eq!(sc.restrict(1).unwrap().cells(), &[1]);
        assert_eq!(sc.as_binary_table().get(3).unwrap(), 2);
    }
}
