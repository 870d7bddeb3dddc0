use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::sets::LengthVector;
use super::signature::{signature, ChamberSignature};
use super::walk::{cross_facet, external_anchor, Wall};
use crate::error::{Error, Result};
use crate::ratpoly::rat;

/// Largest `n` accepted by [`enumerate_chambers`].
pub const MAX_ENUMERATION_SIDES: usize = 9;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChamberNode {
    pub signature: ChamberSignature,
    /// Generic point of the chamber with perimeter 1.
    pub representative: LengthVector,
    pub empty: bool,
    pub external: bool,
}

/// Edge between two chambers sharing a facet; `wall` is oriented from
/// `from` to `to`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChamberEdge {
    pub from: usize,
    pub to: usize,
    pub wall: Wall,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChamberGraph {
    pub n: usize,
    /// Sorted by signature.
    pub nodes: Vec<ChamberNode>,
    /// Sorted by `(from, to)` with `from < to`.
    pub edges: Vec<ChamberEdge>,
}

impl ChamberGraph {
    pub fn index_of(&self, sig: &ChamberSignature) -> Option<usize> {
        self.nodes
            .binary_search_by(|node| node.signature.cmp(sig))
            .ok()
    }

    pub fn nonempty(&self) -> impl Iterator<Item = &ChamberNode> {
        self.nodes.iter().filter(|node| !node.empty)
    }
}

/// All chambers of the hypersimplex for `n` sides, empty ones included,
/// found by breadth-first search across facet walls from an external chamber.
pub fn enumerate_chambers(n: usize, max_nodes: usize) -> Result<ChamberGraph> {
    if !(3..=MAX_ENUMERATION_SIDES).contains(&n) {
        return Err(Error::UnsupportedSize(n));
    }
    let perimeter = rat(1, 1);
    let start = external_anchor(n, 0, &perimeter)?;
    let start_sig = signature(&start)?;

    let mut found: Vec<(ChamberSignature, LengthVector)> = vec![(start_sig.clone(), start)];
    let mut index: BTreeMap<ChamberSignature, usize> = BTreeMap::from([(start_sig, 0)]);
    let mut edges: BTreeMap<(usize, usize), Wall> = BTreeMap::new();
    let mut queue = VecDeque::from([0usize]);
    if max_nodes == 0 {
        return Err(Error::BudgetExceeded(max_nodes));
    }

    while let Some(cur) = queue.pop_front() {
        let sig = found[cur].0.clone();
        for facet in sig.facets() {
            // A maximal short set need not span a facet; such walls miss the
            // chamber closure in codimension one.
            let step = match cross_facet(&sig, &facet, &perimeter) {
                Ok(step) => step,
                Err(Error::DegenerateWall { .. }) => continue,
                Err(e) => return Err(e),
            };
            let next = match index.get(&step.target) {
                Some(&k) => k,
                None => {
                    if found.len() >= max_nodes {
                        return Err(Error::BudgetExceeded(max_nodes));
                    }
                    let k = found.len();
                    index.insert(step.target.clone(), k);
                    found.push((step.target, step.r_after));
                    queue.push_back(k);
                    k
                }
            };
            let key = (cur.min(next), cur.max(next));
            edges.entry(key).or_insert(step.wall);
        }
    }

    // Canonical order: nodes by signature; walls re-oriented from lower to
    // higher index.
    let mut order: Vec<usize> = (0..found.len()).collect();
    order.sort_by(|&a, &b| found[a].0.cmp(&found[b].0));
    let mut new_index = vec![0; found.len()];
    for (new, &old) in order.iter().enumerate() {
        new_index[old] = new;
    }
    let mut edge_set = BTreeSet::new();
    for ((a, b), wall) in edges {
        let (na, nb) = (new_index[a], new_index[b]);
        let edge = if na < nb {
            (na, nb, wall)
        } else {
            (nb, na, wall.reversed())
        };
        edge_set.insert(edge);
    }
    let nodes = order
        .into_iter()
        .map(|old| {
            let (signature, representative) = found[old].clone();
            ChamberNode {
                empty: signature.is_empty(),
                external: signature.is_external(),
                signature,
                representative,
            }
        })
        .collect();
    let edges = edge_set
        .into_iter()
        .map(|(from, to, wall)| ChamberEdge { from, to, wall })
        .collect();
    Ok(ChamberGraph { n, nodes, edges })
}
