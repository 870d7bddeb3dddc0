//! Wall crossing: how the polygon space changes across a single wall, Betti
//! numbers obtained by walking from an external chamber, and a differential
//! check of those against the apolar computation.

use std::fmt;

use crate::apolar::{
    betti_numbers, is_zero_class, normal_bundle_chern, pd_class, unit_class, CohomologyClass,
};
use crate::chambers::{
    chamber_representative, cross_facet, external_anchor, is_external, require_generic,
    segment_crossings_perturbed, signature, ChamberSignature, IndexSet, LengthVector, Wall,
};
use crate::error::{Error, Result};
use crate::ratpoly::rat;
use crate::volume::{predicted_jump, wall_jump, Convention};

/// The submanifold `M_I` of polygons whose edges in `I` are parallel, which
/// is `CP^{dim}` next to the wall (empty when `dim < 0`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Submanifold {
    pub set: IndexSet,
    pub dim: i64,
}

impl fmt::Display for Submanifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.dim < 0 {
            write!(f, "M_{} = empty", self.set)
        } else {
            write!(f, "M_{} = CP^{}", self.set, self.dim)
        }
    }
}

/// `pd_born · normal_chern^power` and whether it vanishes after the crossing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionClass {
    pub power: u32,
    pub class: CohomologyClass,
    pub is_zero: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WallCrossingReport {
    pub wall: Wall,
    pub p: usize,
    pub q: usize,
    /// `M_{I_p^c} ≅ CP^{p−2}`, present before the crossing only.
    pub dies: Submanifold,
    /// `M_{I_p} ≅ CP^{q−2}`, present after the crossing only.
    pub born: Submanifold,
    /// Change of `b_{2d}`, indexed by `d = 0..=n−3`.
    pub betti_delta: Vec<i64>,
    /// Poincaré dual of `born`, based at the smallest element of `I_p`;
    /// `None` when `|I_p| = 1`.
    pub pd_born: Option<CohomologyClass>,
    pub normal_chern: Option<CohomologyClass>,
    /// `pd_born · normal_chern^a` for `a = 0..=q−p`, tested in the chamber
    /// after the crossing.
    pub decomposition: Vec<DecompositionClass>,
}

/// Change of the Betti numbers across a wall with `|I_p| = p`: `+1` in
/// degrees `2p−2..=2q−4` if `q ≥ p`, `−1` in degrees `2q−2..=2p−4` if
/// `p ≥ q`. Entry `d` refers to degree `2d`.
pub fn betti_delta(p: usize, q: usize, n: usize) -> Result<Vec<i64>> {
    if p == 0 || q == 0 || p + q != n || n < 3 {
        return Err(Error::BadPartition { p, q, n });
    }
    let mut delta = vec![0i64; n - 2];
    let (lo, hi, sign) = if q >= p { (p, q, 1) } else { (q, p, -1) };
    delta[lo - 1..hi - 1].iter_mut().for_each(|x| *x += sign);
    Ok(delta)
}

pub fn crossing_report(
    sig0: &ChamberSignature,
    sig1: &ChamberSignature,
) -> Result<WallCrossingReport> {
    let flipped = sig0.flipped_pairs(sig1);
    if sig0.n() != sig1.n() || flipped.len() != 1 {
        return Err(Error::NotAdjacent);
    }
    let n = sig0.n();
    let ip = flipped[0];
    let wall = Wall::new(ip)?;
    let (p, q) = (wall.p(), wall.q());
    let (pd_born, normal_chern, decomposition) = if p >= 2 {
        let base = ip.elements()[0];
        let pd = pd_class(&ip, base)?;
        let nc = normal_bundle_chern(&ip, base)?;
        let mut classes = Vec::new();
        if q >= p {
            let mut power = unit_class(n);
            for a in 0..=(q - p) as u32 {
                let class = pd.mul(&power);
                let is_zero = is_zero_class(&class, sig1, Convention::Homogeneous)?;
                classes.push(DecompositionClass {
                    power: a,
                    class,
                    is_zero,
                });
                power = power.mul(&nc);
            }
        }
        (Some(pd), Some(nc), classes)
    } else {
        (None, None, Vec::new())
    };
    Ok(WallCrossingReport {
        wall,
        p,
        q,
        dies: Submanifold {
            set: ip.complement(),
            dim: p as i64 - 2,
        },
        born: Submanifold {
            set: ip,
            dim: q as i64 - 2,
        },
        betti_delta: betti_delta(p, q, n)?,
        pd_born,
        normal_chern,
        decomposition,
    })
}

/// Betti numbers of `M(r)` from `CP^{n−3}` and the wall crossings along the
/// segment from an external anchor to `r`.
pub fn betti_via_path(r: &LengthVector) -> Result<Vec<usize>> {
    require_generic(r)?;
    let j = (0..r.n())
        .max_by(|&a, &b| r.values()[a].cmp(&r.values()[b]).then(b.cmp(&a)))
        .expect("n >= 3");
    let anchor = external_anchor(r.n(), j, &r.perimeter())?;
    betti_via_path_from(&anchor, r)
}

/// As [`betti_via_path`], from a given anchor in an external chamber with
/// the same perimeter as `r`.
pub fn betti_via_path_from(anchor: &LengthVector, r: &LengthVector) -> Result<Vec<usize>> {
    require_generic(r)?;
    let target = signature(r)?;
    if target.is_empty() {
        return Err(Error::EmptyTarget);
    }
    let start = signature(anchor)?;
    if !is_external(&start) {
        return Err(Error::InvalidLength(format!(
            "anchor lies in the non-external chamber {start}"
        )));
    }
    let n = r.n();
    let mut betti = vec![1i64; n - 2];
    let (_, crossings) = segment_crossings_perturbed(anchor, r)?;
    for c in &crossings {
        for (b, d) in betti
            .iter_mut()
            .zip(betti_delta(c.wall.p(), c.wall.q(), n)?)
        {
            *b += d;
        }
    }
    betti
        .into_iter()
        .map(|b| {
            usize::try_from(b).map_err(|_| {
                Error::NonGenericSegment(format!("negative Betti number {b} along the path"))
            })
        })
        .collect()
}

/// Outcome of [`validate_chamber`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChamberValidation {
    pub chamber: ChamberSignature,
    pub representative: LengthVector,
    pub betti_apolar: Vec<usize>,
    pub betti_path: Vec<usize>,
    /// `b_{2d} = b_{2(n−3−d)}` for the apolar vector.
    pub duality: bool,
    /// One entry per facet neighbor: whether `v_1 − v_0` matches the closed
    /// form of the jump.
    pub jumps: Vec<(Wall, bool)>,
}

impl ChamberValidation {
    pub fn betti_agree(&self) -> bool {
        self.betti_apolar == self.betti_path
    }

    pub fn passed(&self) -> bool {
        self.betti_agree() && self.duality && self.jumps.iter().all(|(_, ok)| *ok)
    }
}

/// Compares the apolar and wall-crossing Betti numbers of a nonempty chamber
/// and checks the volume jump across each of its facets.
pub fn validate_chamber(sig: &ChamberSignature) -> Result<ChamberValidation> {
    let representative = chamber_representative(sig, &rat(1, 1))?;
    let betti_apolar = betti_numbers(sig, Convention::Homogeneous)?;
    let betti_path = betti_via_path(&representative)?;
    let duality = betti_apolar.iter().eq(betti_apolar.iter().rev());
    let mut jumps = Vec::new();
    for facet in sig.facets() {
        let step = match cross_facet(sig, &facet, &rat(1, 1)) {
            Ok(step) => step,
            Err(Error::DegenerateWall { .. }) => continue,
            Err(e) => return Err(e),
        };
        let (ip, jump) = wall_jump(sig, &step.target)?;
        jumps.push((step.wall, ip == facet && jump == predicted_jump(&ip)));
    }
    Ok(ChamberValidation {
        chamber: sig.clone(),
        representative,
        betti_apolar,
        betti_path,
        duality,
        jumps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratpoly::MultiPoly;

    fn lv(xs: &[(i64, i64)]) -> LengthVector {
        LengthVector::new(xs.iter().map(|&(a, b)| rat(a, b)).collect()).unwrap()
    }

    fn delta0() -> LengthVector {
        lv(&[(3, 20), (3, 20), (2, 5), (3, 20), (3, 20)])
    }

    fn delta1() -> LengthVector {
        lv(&[(1, 20), (11, 60), (2, 5), (11, 60), (11, 60)])
    }

    fn set(n: usize, xs: &[usize]) -> IndexSet {
        IndexSet::from_one_based(n, xs).unwrap()
    }

    #[test]
    fn delta_examples() {
        assert_eq!(betti_delta(2, 3, 5).unwrap(), vec![0, 1, 0]);
        assert_eq!(betti_delta(3, 3, 6).unwrap(), vec![0; 4]);
        assert_eq!(betti_delta(2, 5, 7).unwrap(), vec![0, 1, 1, 1, 0]);
        assert_eq!(betti_delta(3, 2, 5).unwrap(), vec![0, -1, 0]);
        assert_eq!(betti_delta(1, 4, 5).unwrap(), vec![1, 1, 1]);
        assert_eq!(
            betti_delta(2, 2, 5),
            Err(Error::BadPartition { p: 2, q: 2, n: 5 })
        );
    }

    #[test]
    fn delta_is_antisymmetric_and_sums_to_q_minus_p() {
        for n in 3..=12 {
            for p in 1..n {
                let q = n - p;
                let a = betti_delta(p, q, n).unwrap();
                let b = betti_delta(q, p, n).unwrap();
                assert!(a.iter().zip(&b).all(|(x, y)| x + y == 0));
                assert_eq!(a.iter().sum::<i64>(), q as i64 - p as i64);
            }
        }
    }

    #[test]
    fn report_for_the_13_wall() {
        let s0 = signature(&delta0()).unwrap();
        let s1 = signature(&delta1()).unwrap();
        let rep = crossing_report(&s0, &s1).unwrap();
        assert_eq!(rep.wall.index_set(), set(5, &[1, 3]));
        assert_eq!((rep.p, rep.q), (2, 3));
        assert_eq!(rep.dies.set, set(5, &[2, 4, 5]));
        assert_eq!(rep.dies.dim, 0);
        assert_eq!(rep.born.set, set(5, &[1, 3]));
        assert_eq!(rep.born.dim, 1);
        assert_eq!(rep.born.to_string(), "M_{1,3} = CP^1");
        assert_eq!(rep.betti_delta, vec![0, 1, 0]);
        let pd = rep.pd_born.as_ref().unwrap();
        assert_eq!(pd.poly(), &-(&MultiPoly::var(5, 0) + &MultiPoly::var(5, 2)));
        assert_eq!(rep.decomposition.len(), 2);
        assert!(rep.decomposition.iter().all(|c| !c.is_zero));

        let back = crossing_report(&s1, &s0).unwrap();
        assert_eq!(back.wall.index_set(), set(5, &[2, 4, 5]));
        assert_eq!((back.p, back.q), (3, 2));
        assert_eq!(back.betti_delta, vec![0, -1, 0]);
        assert!(back.decomposition.is_empty());
        assert_eq!(crossing_report(&s0, &s0), Err(Error::NotAdjacent));
    }

    #[test]
    fn four_gon_crossing_changes_nothing() {
        let a = signature(&LengthVector::from_ints(&[10, 10, 9, 12]).unwrap()).unwrap();
        let b = signature(&LengthVector::from_ints(&[11, 10, 9, 11]).unwrap()).unwrap();
        let rep = crossing_report(&a, &b).unwrap();
        assert_eq!((rep.p, rep.q), (2, 2));
        assert_eq!(rep.betti_delta, vec![0, 0]);
    }

    #[test]
    fn path_betti_numbers() {
        assert_eq!(betti_via_path(&delta0()).unwrap(), vec![1, 1, 1]);
        assert_eq!(betti_via_path(&delta1()).unwrap(), vec![1, 2, 1]);
        let eq = LengthVector::from_ints(&[100, 101, 102, 103, 104]).unwrap();
        assert_eq!(betti_via_path(&eq).unwrap(), vec![1, 5, 1]);
        let empty = LengthVector::from_ints(&[10, 1, 1, 1]).unwrap();
        assert_eq!(betti_via_path(&empty), Err(Error::EmptyTarget));
        assert!(matches!(
            betti_via_path(&LengthVector::from_ints(&[1, 1, 1, 1]).unwrap()),
            Err(Error::SingularLength { .. })
        ));
    }

    #[test]
    fn path_from_every_anchor_agrees() {
        let eq = LengthVector::from_ints(&[100, 101, 102, 103, 104]).unwrap();
        for j in 0..5 {
            let anchor = external_anchor(5, j, &eq.perimeter()).unwrap();
            assert_eq!(betti_via_path_from(&anchor, &eq).unwrap(), vec![1, 5, 1]);
        }
        assert!(betti_via_path_from(&eq, &delta1().scaled(&rat(510, 1)).unwrap()).is_err());
    }

    #[test]
    fn validation_of_two_chambers() {
        for r in [delta0(), delta1()] {
            let v = validate_chamber(&signature(&r).unwrap()).unwrap();
            assert!(v.passed(), "{v:?}");
            assert!(!v.jumps.is_empty());
        }
    }
}
