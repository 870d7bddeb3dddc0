use std::fmt;

use num_traits::Signed;

use super::sets::{require_generic, IndexSet, LengthVector, MAX_SIDES};
use crate::error::{Error, Result};

/// A chamber, identified by its inclusion-maximal short sets.
///
/// The whole short family is the down-closure of `maximal_shorts`; a set is
/// long exactly when its complement is short.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChamberSignature {
    n: usize,
    maximal_shorts: Vec<IndexSet>,
}

impl ChamberSignature {
    /// Validates that `sets` form an antichain whose down-closure contains
    /// exactly one set of every complementary pair.
    pub fn from_maximal_shorts(n: usize, sets: Vec<IndexSet>) -> Result<Self> {
        if !(3..=MAX_SIDES).contains(&n) {
            return Err(Error::UnsupportedSize(n));
        }
        if sets.iter().any(|s| s.n() != n || !s.is_proper()) {
            return Err(Error::ImproperIndexSet);
        }
        let mut maximal_shorts = sets;
        maximal_shorts.sort();
        maximal_shorts.dedup();
        for (i, a) in maximal_shorts.iter().enumerate() {
            if maximal_shorts
                .iter()
                .enumerate()
                .any(|(j, b)| i != j && a.is_subset_of(b))
            {
                return Err(Error::InvalidLength(format!(
                    "{a} is contained in another listed set"
                )));
            }
        }
        let sig = ChamberSignature { n, maximal_shorts };
        let full = IndexSet::full_mask(n);
        for m in (1..full).filter(|m| m & 1 == 1) {
            if sig.is_short_mask(m) == sig.is_short_mask(!m & full) {
                return Err(Error::InvalidLength(format!(
                    "pair {} is not split into one short and one long set",
                    IndexSet::new_unchecked(n, m)
                )));
            }
        }
        Ok(sig)
    }

    pub(crate) fn from_long_table(n: usize, long: &[bool]) -> Self {
        let full = IndexSet::full_mask(n);
        let mut maximal_shorts: Vec<IndexSet> = (1..full)
            .filter(|&m| {
                !long[m as usize] && (0..n).all(|i| m >> i & 1 == 1 || long[(m | 1 << i) as usize])
            })
            .map(|m| IndexSet::new_unchecked(n, m))
            .collect();
        maximal_shorts.sort();
        ChamberSignature { n, maximal_shorts }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn maximal_shorts(&self) -> &[IndexSet] {
        &self.maximal_shorts
    }

    pub(crate) fn is_short_mask(&self, mask: u32) -> bool {
        self.maximal_shorts.iter().any(|s| mask & !s.mask() == 0)
    }

    pub fn is_short(&self, set: &IndexSet) -> bool {
        set.mask() != 0 && self.is_short_mask(set.mask())
    }

    /// Long in this chamber; the full set is long and the empty set is not.
    pub fn is_long(&self, set: &IndexSet) -> bool {
        set.mask() != 0 && !self.is_short_mask(set.mask())
    }

    /// `table[mask]` is true when `mask` is long (index 0 is the empty set).
    pub fn long_table(&self) -> Vec<bool> {
        let size = 1usize << self.n;
        (0..size)
            .map(|m| m != 0 && !self.is_short_mask(m as u32))
            .collect()
    }

    /// All long sets including the full set, canonically sorted.
    pub fn long_sets_with_full(&self) -> Vec<IndexSet> {
        let table = self.long_table();
        let mut out: Vec<IndexSet> = (1..table.len())
            .filter(|&m| table[m])
            .map(|m| IndexSet::new_unchecked(self.n, m as u32))
            .collect();
        out.sort();
        out
    }

    /// Some side is longer than the rest combined.
    pub fn is_empty(&self) -> bool {
        (0..self.n).any(|i| !self.is_short_mask(1 << i))
    }

    /// Some singleton is itself a maximal short set: the chamber touches an
    /// outer wall of the hypersimplex, and `M(r)` is `CP^{n-3}`.
    pub fn is_external(&self) -> bool {
        self.maximal_shorts.iter().any(|s| s.len() == 1)
    }

    /// The long sides `I` of the walls bounding this chamber: the complements
    /// of the maximal short sets.
    pub fn facets(&self) -> Vec<IndexSet> {
        let mut out: Vec<IndexSet> = self.maximal_shorts.iter().map(|s| s.complement()).collect();
        out.sort();
        out
    }

    /// The signature on the far side of the facet wall where `long_set`
    /// turns short.
    pub fn flip(&self, long_set: &IndexSet) -> Result<ChamberSignature> {
        let co = long_set.complement();
        if long_set.n() != self.n || !long_set.is_proper() {
            return Err(Error::ImproperIndexSet);
        }
        if !self.maximal_shorts.contains(&co) {
            return Err(Error::NotAFacet {
                set: long_set.label(),
            });
        }
        let mut table = self.long_table();
        table[long_set.mask() as usize] = false;
        table[co.mask() as usize] = true;
        Ok(ChamberSignature::from_long_table(self.n, &table))
    }

    /// Image under the side relabeling `i ↦ perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> ChamberSignature {
        let mut maximal_shorts: Vec<IndexSet> = self
            .maximal_shorts
            .iter()
            .map(|s| s.permute(perm))
            .collect();
        maximal_shorts.sort();
        ChamberSignature {
            n: self.n,
            maximal_shorts,
        }
    }

    /// Sets that are long here but short in `other`, one per flipped pair.
    pub fn flipped_pairs(&self, other: &ChamberSignature) -> Vec<IndexSet> {
        if self.n != other.n {
            return Vec::new();
        }
        let full = IndexSet::full_mask(self.n);
        let mut out: Vec<IndexSet> = (1..full)
            .filter(|&m| !self.is_short_mask(m) && other.is_short_mask(m))
            .map(|m| IndexSet::new_unchecked(self.n, m))
            .collect();
        out.sort();
        out
    }

    /// Canonical representative of the orbit under relabeling the sides: the
    /// smallest permuted signature. Brute force over `n!` permutations.
    pub fn symmetric_canonical_form(&self) -> ChamberSignature {
        let mut perm: Vec<usize> = (0..self.n).collect();
        let mut best = self.clone();
        while next_permutation(&mut perm) {
            let cand = self.permute(&perm);
            if cand < best {
                best = cand;
            }
        }
        best
    }

    /// Maximal short sets as sorted 1-based lists.
    pub fn to_lists(&self) -> Vec<Vec<usize>> {
        self.maximal_shorts
            .iter()
            .map(IndexSet::one_based)
            .collect()
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

impl fmt::Display for ChamberSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, s) in self.maximal_shorts.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "]")
    }
}

pub fn signature(r: &LengthVector) -> Result<ChamberSignature> {
    require_generic(r)?;
    let eps = r.scaled_epsilons();
    let long: Vec<bool> = eps.iter().map(Signed::is_positive).collect();
    Ok(ChamberSignature::from_long_table(r.n(), &long))
}

pub fn is_external(sig: &ChamberSignature) -> bool {
    sig.is_external()
}
