use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result, SetLabel};
use crate::ratpoly::{parse_rational, Rational};

/// Largest number of sides handled; subsets are stored as `u32` bitmasks and
/// several routines sweep all `2^n` of them.
pub const MAX_SIDES: usize = 20;

/// A subset of `{1, ..., n}` stored as a bitmask (bit `i` is side `i + 1`).
///
/// Canonical order: by cardinality, then lexicographically on the sorted
/// element list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IndexSet {
    n: usize,
    mask: u32,
}

impl IndexSet {
    pub fn from_mask(n: usize, mask: u32) -> Result<Self> {
        if n > MAX_SIDES || (n < 32 && mask >> n != 0) {
            return Err(Error::InvalidLength(format!(
                "mask {mask:#b} does not fit in {n} sides"
            )));
        }
        Ok(IndexSet { n, mask })
    }

    /// Builds a set from 1-based side indices.
    pub fn from_one_based(n: usize, elems: &[usize]) -> Result<Self> {
        let mut mask = 0u32;
        for &e in elems {
            if e == 0 || e > n {
                return Err(Error::InvalidLength(format!(
                    "index {e} is outside 1..={n}"
                )));
            }
            mask |= 1 << (e - 1);
        }
        IndexSet::from_mask(n, mask)
    }

    pub(crate) fn new_unchecked(n: usize, mask: u32) -> Self {
        IndexSet { n, mask }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn full_mask(n: usize) -> u32 {
        if n >= 32 {
            u32::MAX
        } else {
            (1u32 << n) - 1
        }
    }

    pub fn is_proper(&self) -> bool {
        self.mask != 0 && self.mask != Self::full_mask(self.n)
    }

    pub fn complement(&self) -> IndexSet {
        IndexSet {
            n: self.n,
            mask: !self.mask & Self::full_mask(self.n),
        }
    }

    /// Whether 0-based side `i` is in the set.
    pub fn contains(&self, i: usize) -> bool {
        self.mask >> i & 1 == 1
    }

    pub fn is_subset_of(&self, other: &IndexSet) -> bool {
        self.mask & !other.mask == 0
    }

    /// 0-based members, ascending.
    pub fn elements(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| self.contains(i)).collect()
    }

    /// 1-based members, ascending.
    pub fn one_based(&self) -> Vec<usize> {
        self.elements().into_iter().map(|i| i + 1).collect()
    }

    pub fn label(&self) -> SetLabel {
        SetLabel(self.one_based())
    }

    /// Image under the side relabeling `i ↦ perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> IndexSet {
        let mask = self.elements().iter().fold(0u32, |m, &i| m | 1 << perm[i]);
        IndexSet { n: self.n, mask }
    }
}

impl Ord for IndexSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n
            .cmp(&other.n)
            .then_with(|| self.len().cmp(&other.len()))
            .then_with(|| self.elements().cmp(&other.elements()))
    }
}

impl PartialOrd for IndexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.label().fmt(f)
    }
}

/// Side lengths `r = (r_1, ..., r_n)`, all strictly positive.
///
/// The perimeter is not normalized; chambers are cones, so `r` and `λr`
/// always lie in the same one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LengthVector {
    r: Vec<Rational>,
}

impl LengthVector {
    pub fn new(r: Vec<Rational>) -> Result<Self> {
        if r.len() < 3 {
            return Err(Error::InvalidLength(format!(
                "need at least 3 sides, got {}",
                r.len()
            )));
        }
        if r.len() > MAX_SIDES {
            return Err(Error::UnsupportedSize(r.len()));
        }
        if let Some(i) = r.iter().position(|x| !x.is_positive()) {
            return Err(Error::InvalidLength(format!(
                "side r_{} = {} is not strictly positive",
                i + 1,
                r[i]
            )));
        }
        Ok(LengthVector { r })
    }

    pub fn from_ints(r: &[i64]) -> Result<Self> {
        LengthVector::new(
            r.iter()
                .map(|&x| Rational::from_integer(x.into()))
                .collect(),
        )
    }

    /// Parses a comma-separated list of integers, fractions or decimals.
    pub fn parse(s: &str) -> Result<Self> {
        let r = s
            .split(',')
            .map(parse_rational)
            .collect::<Result<Vec<_>>>()?;
        LengthVector::new(r)
    }

    pub fn n(&self) -> usize {
        self.r.len()
    }

    pub fn values(&self) -> &[Rational] {
        &self.r
    }

    pub fn perimeter(&self) -> Rational {
        self.r.iter().sum()
    }

    pub fn scaled(&self, lambda: &Rational) -> Result<LengthVector> {
        LengthVector::new(self.r.iter().map(|x| x * lambda).collect())
    }

    /// `(σ·r)_{σ(i)} = r_i`.
    pub fn permute(&self, perm: &[usize]) -> LengthVector {
        let mut out = self.r.clone();
        for (i, x) in self.r.iter().enumerate() {
            out[perm[i]] = x.clone();
        }
        LengthVector { r: out }
    }

    /// `(1 - t)·self + t·other`.
    pub fn lerp(&self, other: &LengthVector, t: &Rational) -> Result<LengthVector> {
        let s = Rational::one() - t;
        LengthVector::new(
            self.r
                .iter()
                .zip(&other.r)
                .map(|(a, b)| &s * a + t * b)
                .collect(),
        )
    }

    /// `D·ε_I(r)` for every mask `I`, with `D > 0` the common denominator of
    /// the entries; signs equal the signs of `ε_I(r)`.
    pub(crate) fn scaled_epsilons(&self) -> Vec<BigInt> {
        let d = self
            .r
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let ints: Vec<BigInt> = self
            .r
            .iter()
            .map(|x| x.numer() * (&d / x.denom()))
            .collect();
        scaled_epsilons_of(&ints)
    }
}

/// `2·Σ_{i∈I} a_i − Σ a_i` for every mask `I`.
pub(crate) fn scaled_epsilons_of(a: &[BigInt]) -> Vec<BigInt> {
    let n = a.len();
    let total: BigInt = a.iter().sum();
    let mut sums = vec![BigInt::zero(); 1 << n];
    for mask in 1usize..(1 << n) {
        let low = mask.trailing_zeros() as usize;
        sums[mask] = &sums[mask & (mask - 1)] + &a[low];
    }
    sums.into_iter().map(|s| 2 * s - &total).collect()
}

/// `ε_I(r) = Σ_{i∈I} r_i − Σ_{i∉I} r_i`.
pub fn epsilon(r: &LengthVector, set: &IndexSet) -> Result<Rational> {
    if set.n() != r.n() {
        return Err(Error::DimensionMismatch {
            expected: r.n(),
            got: set.n(),
        });
    }
    if !set.is_proper() {
        return Err(Error::ImproperIndexSet);
    }
    Ok(r.values()
        .iter()
        .enumerate()
        .map(|(i, x)| {
            if set.contains(i) {
                x.clone()
            } else {
                -x.clone()
            }
        })
        .sum())
}

/// True when no `ε_I(r)` vanishes. One representative per complementary pair
/// is checked: the masks containing side 1.
pub fn is_generic(r: &LengthVector) -> bool {
    first_vanishing(r).is_none()
}

/// First (in canonical order) set `I` containing side 1 with `ε_I(r) = 0`.
pub fn first_vanishing(r: &LengthVector) -> Option<IndexSet> {
    let n = r.n();
    let eps = r.scaled_epsilons();
    let full = IndexSet::full_mask(n);
    let mut bad: Vec<IndexSet> = (1..full)
        .filter(|m| m & 1 == 1 && eps[*m as usize].is_zero())
        .map(|m| IndexSet::new_unchecked(n, m))
        .collect();
    bad.sort();
    bad.into_iter().next()
}

pub(crate) fn require_generic(r: &LengthVector) -> Result<()> {
    match first_vanishing(r) {
        None => Ok(()),
        Some(set) => Err(Error::SingularLength { set: set.label() }),
    }
}

/// All proper nonempty long sets (`ε_I(r) > 0`), canonically sorted.
pub fn long_sets(r: &LengthVector) -> Result<Vec<IndexSet>> {
    require_generic(r)?;
    let n = r.n();
    let eps = r.scaled_epsilons();
    let full = IndexSet::full_mask(n);
    let mut out: Vec<IndexSet> = (1..full)
        .filter(|&m| eps[m as usize].is_positive())
        .map(|m| IndexSet::new_unchecked(n, m))
        .collect();
    out.sort();
    Ok(out)
}

/// True when one side is longer than all the others combined, so no closed
/// polygon exists.
pub fn is_empty(r: &LengthVector) -> Result<bool> {
    require_generic(r)?;
    let eps = r.scaled_epsilons();
    Ok((0..r.n()).any(|i| eps[1 << i].is_positive()))
}
