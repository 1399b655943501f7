//! Fixed-width subsets of a point set of size at most 64.

use std::fmt;

use serde::de::{Deserialize, Deserializer, Error as _};
use serde::ser::{Serialize, Serializer};

/// Hard upper bound on the number of points (or group elements) a
/// [`PointSet`] can address.
pub const MAX_POINTS: usize = 64;

/// A subset of `{0, .., 63}` stored as a bit mask.
///
/// The canonical order on subsets is the numeric order of the mask.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct PointSet(u64);

impl PointSet {
    pub const EMPTY: PointSet = PointSet(0);

    pub fn from_bits(bits: u64) -> Self {
        PointSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// All points `0..m`.
    pub fn full(m: usize) -> Self {
        debug_assert!(m <= MAX_POINTS);
        if m == MAX_POINTS {
            PointSet(u64::MAX)
        } else {
            PointSet((1u64 << m) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        PointSet(1u64 << i)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        let mut bits = 0u64;
        for i in indices {
            assert!(i < MAX_POINTS, "point index {i} out of range");
            bits |= 1u64 << i;
        }
        PointSet(bits)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        i < MAX_POINTS && self.0 >> i & 1 == 1
    }

    pub fn with(self, i: usize) -> Self {
        PointSet(self.0 | 1u64 << i)
    }

    pub fn union(self, other: Self) -> Self {
        PointSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        PointSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        PointSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Size of the intersection, without materializing it.
    pub fn meet_count(self, other: Self) -> usize {
        (self.0 & other.0).count_ones() as usize
    }

    /// Largest index present, if any.
    pub fn max(self) -> Option<usize> {
        (self.0 != 0).then(|| 63 - self.0.leading_zeros() as usize)
    }

    pub fn min(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Indices in increasing order.
    pub fn iter(self) -> Points {
        Points(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Image of the set under a point map given as a lookup table.
    pub fn map_through(self, table: &[usize]) -> Self {
        let mut out = 0u64;
        for i in self.iter() {
            out |= 1u64 << table[i];
        }
        PointSet(out)
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

impl FromIterator<usize> for PointSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        PointSet::from_indices(iter)
    }
}

#[derive(Clone)]
pub struct Points(u64);

impl Iterator for Points {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Points {}

// Serialized as the increasing list of member indices.
impl Serialize for PointSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for PointSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let indices = Vec::<usize>::deserialize(deserializer)?;
        let mut bits = 0u64;
        for (k, &i) in indices.iter().enumerate() {
            if i >= MAX_POINTS {
                return Err(D::Error::custom(format!("point index {i} out of range")));
            }
            if k > 0 && indices[k - 1] >= i {
                return Err(D::Error::custom("point list must be strictly increasing"));
            }
            bits |= 1u64 << i;
        }
        Ok(PointSet(bits))
    }
}

/// Binomial coefficient, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// All `k`-element subsets of `0..m` in increasing mask order (Gosper's hack).
pub fn k_subsets(m: usize, k: usize) -> KSubsets {
    assert!(m <= MAX_POINTS);
    let next = if k > m {
        None
    } else if k == 0 {
        Some(0)
    } else {
        Some(PointSet::full(k).bits())
    };
    KSubsets { m, next }
}

pub struct KSubsets {
    m: usize,
    next: Option<u64>,
}

impl Iterator for KSubsets {
    type Item = PointSet;

    fn next(&mut self) -> Option<PointSet> {
        let cur = self.next?;
        self.next = if cur == 0 {
            None
        } else {
            let c = cur & cur.wrapping_neg();
            let (r, overflow) = cur.overflowing_add(c);
            if overflow {
                None
            } else {
                let nxt = (((r ^ cur) >> 2) / c) | r;
                (self.m == MAX_POINTS || nxt >> self.m == 0).then_some(nxt)
            }
        };
        Some(PointSet(cur))
    }
}
