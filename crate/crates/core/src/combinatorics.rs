//! Subsets of a small ground set, their canonical ordering, and binomials.
//!
//! A [`Subset`] is a set of integers drawn from `[1..64]`, stored as a bit
//! mask (element `e` lives in bit `e - 1`). Every row, column, circuit input
//! and circuit output in the crate is labeled by one.
//!
//! Ordering is lexicographic on ascending element lists, so `{1,2} < {1,3} <
//! {2,3}` and `{1} < {1,2}`. Enumeration and ranking follow the same order.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Largest element a [`Subset`] can hold.
pub const MAX_ELEMENT: u32 = 64;

#[derive(Copy, Clone, Default, PartialEq, Eq, Hash)]
pub struct Subset(u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn from_elements<I: IntoIterator<Item = u32>>(elements: I) -> Result<Self> {
        let mut mask = 0u64;
        for e in elements {
            if e == 0 || e > MAX_ELEMENT {
                return Err(Error::ElementOutOfRange(e, MAX_ELEMENT));
            }
            mask |= 1 << (e - 1);
        }
        Ok(Subset(mask))
    }

    /// The interval `[lo..hi]`; empty when `lo > hi`.
    pub fn range(lo: u32, hi: u32) -> Self {
        let mut mask = 0u64;
        for e in lo.max(1)..=hi.min(MAX_ELEMENT) {
            mask |= 1 << (e - 1);
        }
        Subset(mask)
    }

    pub fn singleton(e: u32) -> Self {
        assert!((1..=MAX_ELEMENT).contains(&e), "element {e} out of range");
        Subset(1 << (e - 1))
    }

    pub const fn from_mask(mask: u64) -> Self {
        Subset(mask)
    }

    pub const fn mask(self) -> u64 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, e: u32) -> bool {
        (1..=MAX_ELEMENT).contains(&e) && self.0 & (1 << (e - 1)) != 0
    }

    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub fn intersection(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    pub fn difference(self, other: Subset) -> Subset {
        Subset(self.0 & !other.0)
    }

    pub fn is_disjoint(self, other: Subset) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn min(self) -> Option<u32> {
        (self.0 != 0).then(|| self.0.trailing_zeros() + 1)
    }

    pub fn max(self) -> Option<u32> {
        (self.0 != 0).then(|| 64 - self.0.leading_zeros())
    }

    /// Adds `offset` to every element. Panics if an element would leave `[1..64]`.
    pub fn shifted(self, offset: u32) -> Subset {
        if self.0 == 0 || offset == 0 {
            return self;
        }
        assert!(
            self.max().unwrap() + offset <= MAX_ELEMENT,
            "shift overflows the ground set"
        );
        Subset(self.0 << offset)
    }

    /// Elements in ascending order.
    pub fn elements(self) -> Elements {
        Elements(self.0)
    }

    pub fn to_vec(self) -> Vec<u32> {
        self.elements().collect()
    }
}

pub struct Elements(u64);

impl Iterator for Elements {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        if self.0 == 0 {
            return None;
        }
        let e = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(e + 1)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Elements {}

impl Ord for Subset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.elements().cmp(other.elements())
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.elements().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Subset {
    type Err = Error;

    /// Parses the canonical form only: `{}` or `{a,b,c}` with strictly
    /// ascending elements and no whitespace.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Malformed(format!("not a canonical subset: {s:?}"));
        let inner = s
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(bad)?;
        if inner.is_empty() {
            return Ok(Subset::EMPTY);
        }
        let mut prev = 0u32;
        let mut mask = 0u64;
        for tok in inner.split(',') {
            if tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_digit()) || tok.starts_with('0') {
                return Err(bad());
            }
            let e: u32 = tok.parse().map_err(|_| bad())?;
            if e <= prev {
                return Err(bad());
            }
            if e > MAX_ELEMENT {
                return Err(Error::ElementOutOfRange(e, MAX_ELEMENT));
            }
            mask |= 1 << (e - 1);
            prev = e;
        }
        Ok(Subset(mask))
    }
}

/// The ground set `[1..n]`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroundSet {
    n: u32,
}

impl GroundSet {
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 || n > MAX_ELEMENT {
            return Err(Error::GroundSize(n));
        }
        Ok(GroundSet { n })
    }

    pub fn n(self) -> u32 {
        self.n
    }

    pub fn as_subset(self) -> Subset {
        Subset::range(1, self.n)
    }

    pub fn elements(self) -> Vec<u32> {
        (1..=self.n).collect()
    }

    pub fn contains(self, s: Subset) -> bool {
        s.is_subset(self.as_subset())
    }

    pub fn k_subsets(self, k: usize) -> Vec<Subset> {
        enumerate_k_subsets(&self.elements(), k)
    }
}

/// `C(n, k)`, zero when `k < 0` or `k > n`.
pub fn binomial(n: u64, k: i64) -> BigUint {
    if k < 0 || k as u64 > n {
        return BigUint::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Machine-width binomial for sizes that index real memory. Panics on overflow.
pub fn binomial_usize(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    usize::try_from(acc).expect("binomial overflows usize")
}

/// Signed-index variant for recurrence terms like `C(n-2, q-2)` that may
/// have a negative lower index.
pub(crate) fn binom_i(n: i64, k: i64) -> usize {
    if n < 0 || k < 0 || k > n {
        0
    } else {
        binomial_usize(n as usize, k as usize)
    }
}

/// All `k`-subsets of `ground` (which must be strictly ascending), in
/// lexicographic order.
pub fn enumerate_k_subsets(ground: &[u32], k: usize) -> Vec<Subset> {
    debug_assert!(ground.windows(2).all(|w| w[0] < w[1]));
    let m = ground.len();
    if k > m {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(binomial_usize(m, k));
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        let mask = idx.iter().fold(0u64, |acc, &i| acc | 1 << (ground[i] - 1));
        out.push(Subset(mask));
        // advance the rightmost index that still has room
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] < m - k + i {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Position of `s` in `enumerate_k_subsets(ground, |s|)`.
pub fn rank_subset(ground: &[u32], s: Subset) -> Result<usize> {
    let m = ground.len();
    let k = s.len();
    let mut positions = Vec::with_capacity(k);
    for e in s.elements() {
        match ground.iter().position(|&g| g == e) {
            Some(pos) => positions.push(pos),
            None => {
                return Err(Error::ForeignElement {
                    subset: s.to_string(),
                })
            }
        }
    }
    let mut rank = 0;
    let mut next = 0;
    for (i, &pos) in positions.iter().enumerate() {
        for skipped in next..pos {
            rank += binomial_usize(m - 1 - skipped, k - 1 - i);
        }
        next = pos + 1;
    }
    Ok(rank)
}

/// Inverse of [`rank_subset`].
pub fn unrank_subset(ground: &[u32], k: usize, rank: usize) -> Result<Subset> {
    let m = ground.len();
    let total = binomial_usize(m, k);
    if rank >= total {
        return Err(Error::RankOutOfRange { rank, total });
    }
    let mut r = rank;
    let mut mask = 0u64;
    let mut pos = 0;
    for i in 0..k {
        loop {
            let block = binomial_usize(m - 1 - pos, k - 1 - i);
            if r < block {
                break;
            }
            r -= block;
            pos += 1;
        }
        mask |= 1 << (ground[pos] - 1);
        pos += 1;
    }
    Ok(Subset(mask))
}
