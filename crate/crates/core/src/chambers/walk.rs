use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::lp::{maximize, LpOutcome};
use super::sets::{require_generic, scaled_epsilons_of, IndexSet, LengthVector};
use super::signature::{signature, ChamberSignature};
use crate::error::{Error, Result};
use crate::ratpoly::{rat, Rational};

/// A wall `ε_I = 0` with a crossing direction: `index_set` is long before the
/// crossing and short after it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Wall {
    index_set: IndexSet,
}

impl Wall {
    pub fn new(index_set: IndexSet) -> Result<Self> {
        if !index_set.is_proper() {
            return Err(Error::ImproperIndexSet);
        }
        Ok(Wall { index_set })
    }

    pub fn index_set(&self) -> IndexSet {
        self.index_set
    }

    /// `|I_p|`.
    pub fn p(&self) -> usize {
        self.index_set.len()
    }

    /// `n − |I_p|`.
    pub fn q(&self) -> usize {
        self.index_set.n() - self.index_set.len()
    }

    /// Same wall, opposite direction.
    pub fn reversed(&self) -> Wall {
        Wall {
            index_set: self.index_set.complement(),
        }
    }

    /// An outer wall of the hypersimplex: one side of it is a singleton.
    pub fn is_outer(&self) -> bool {
        self.p() == 1 || self.q() == 1
    }
}

impl fmt::Display for Wall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "W{}", self.index_set)
    }
}

/// A generic point of a chamber next to one of its facets, reached by
/// crossing that facet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjacentStep {
    pub wall: Wall,
    /// Lies on `wall` and on no other wall.
    pub wall_point: LengthVector,
    /// Generic point just past the wall.
    pub r_after: LengthVector,
    pub target: ChamberSignature,
    pub target_empty: bool,
}

/// A wall met by a straight segment, at parameter `t ∈ (0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Crossing {
    pub t: Rational,
    pub wall: Wall,
}

/// Point of the (relatively open) chamber or facet with every margin `|ε_J|`
/// (over the non-wall pairs) and every `r_i` positive, at the given
/// perimeter, together with the smallest such margin.
///
/// A floating-point maximin solve proposes a point, which is then rounded,
/// projected onto the wall and certified exactly; when that fails the exact
/// simplex decides.
fn maximin_point(
    sig: &ChamberSignature,
    wall: Option<&IndexSet>,
    perimeter: &Rational,
) -> Option<(Vec<Rational>, Rational)> {
    approx_maximin(sig, wall)
        .and_then(|x| certify(sig, wall, &x, perimeter))
        .or_else(|| exact_maximin(sig, wall, perimeter))
}

fn approx_maximin(sig: &ChamberSignature, wall: Option<&IndexSet>) -> Option<Vec<f64>> {
    use microlp::{ComparisonOp, OptimizationDirection, Problem};

    let n = sig.n();
    let excluded = wall.map(|w| w.complement());
    let mut lp = Problem::new(OptimizationDirection::Maximize);
    let r: Vec<_> = (0..n).map(|_| lp.add_var(0.0, (0.0, 1.0))).collect();
    let t = lp.add_var(1.0, (f64::NEG_INFINITY, 1.0));
    let sign = |s: &IndexSet, i: usize| if s.contains(i) { 1.0 } else { -1.0 };

    lp.add_constraint(r.iter().map(|&v| (v, 1.0)), ComparisonOp::Eq, 1.0);
    if let Some(w) = wall {
        lp.add_constraint((0..n).map(|i| (r[i], sign(w, i))), ComparisonOp::Eq, 0.0);
    }
    for s in sig
        .maximal_shorts()
        .iter()
        .filter(|s| Some(**s) != excluded)
    {
        let mut row: Vec<_> = (0..n).map(|i| (r[i], -sign(s, i))).collect();
        row.push((t, -1.0));
        lp.add_constraint(row, ComparisonOp::Ge, 0.0);
    }
    for &v in &r {
        lp.add_constraint([(v, 1.0), (t, -1.0)], ComparisonOp::Ge, 0.0);
    }
    let solution = lp.solve().ok()?.into_solution().ok()?;
    if solution.objective() < 1e-9 {
        return None;
    }
    Some(r.iter().map(|&v| solution.var_value(v)).collect())
}

/// Rounds `approx` to a rational point, moves it exactly onto the wall and
/// perimeter, and checks every sign exactly.
fn certify(
    sig: &ChamberSignature,
    wall: Option<&IndexSet>,
    approx: &[f64],
    perimeter: &Rational,
) -> Option<(Vec<Rational>, Rational)> {
    let n = sig.n();
    let a: Vec<BigInt> = approx
        .iter()
        .map(|&x| BigInt::from((x * (1u64 << 40) as f64).round() as i64))
        .collect();
    if a.iter().any(|x| !x.is_positive()) {
        return None;
    }
    let side = |inside: bool| -> BigInt {
        (0..n)
            .filter(|&i| wall.is_none_or(|w| w.contains(i) == inside))
            .map(|i| &a[i])
            .sum()
    };
    let point: Vec<Rational> = match wall {
        None => {
            let total = side(true);
            a.iter()
                .map(|x| Rational::new(x.clone(), total.clone()) * perimeter)
                .collect()
        }
        Some(w) => {
            let (inner, outer) = (side(true), side(false));
            let half = perimeter / rat(2, 1);
            (0..n)
                .map(|i| {
                    let den = if w.contains(i) { &inner } else { &outer };
                    Rational::new(a[i].clone(), den.clone()) * &half
                })
                .collect()
        }
    };

    let d = point
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = point.iter().map(|x| x.numer() * (&d / x.denom())).collect();
    let eps = scaled_epsilons_of(&ints);
    let long = sig.long_table();
    let full = IndexSet::full_mask(n) as usize;
    let mut margin = ints.iter().min()?.clone();
    for m in 1..full {
        if wall.is_some_and(|w| m == w.mask() as usize || m == w.complement().mask() as usize) {
            continue;
        }
        if eps[m].is_zero() || eps[m].is_positive() != long[m] {
            return None;
        }
        if eps[m].abs() < margin {
            margin = eps[m].abs();
        }
    }
    Some((point, Rational::new(margin, d)))
}

fn exact_maximin(
    sig: &ChamberSignature,
    wall: Option<&IndexSet>,
    perimeter: &Rational,
) -> Option<(Vec<Rational>, Rational)> {
    let n = sig.n();
    let excluded = wall.map(|w| w.complement());
    let shorts: Vec<&IndexSet> = sig
        .maximal_shorts()
        .iter()
        .filter(|s| Some(**s) != excluded)
        .collect();
    let slacks = shorts.len() + n;
    let width = n + 1 + slacks;
    let t_col = n;
    let one = Rational::one();
    let minus_one = -Rational::one();

    let mut a = Vec::new();
    let mut b = Vec::new();

    let mut row = vec![Rational::zero(); width];
    for x in row.iter_mut().take(n) {
        *x = one.clone();
    }
    a.push(row);
    b.push(perimeter.clone());

    if let Some(w) = wall {
        let mut row = vec![Rational::zero(); width];
        for (i, x) in row.iter_mut().enumerate().take(n) {
            *x = if w.contains(i) {
                one.clone()
            } else {
                minus_one.clone()
            };
        }
        a.push(row);
        b.push(Rational::zero());
    }

    // -ε_S(r) - t - slack = 0
    for (k, s) in shorts.iter().enumerate() {
        let mut row = vec![Rational::zero(); width];
        for (i, x) in row.iter_mut().enumerate().take(n) {
            *x = if s.contains(i) {
                minus_one.clone()
            } else {
                one.clone()
            };
        }
        row[t_col] = minus_one.clone();
        row[n + 1 + k] = minus_one.clone();
        a.push(row);
        b.push(Rational::zero());
    }

    // r_i - t - slack = 0
    for i in 0..n {
        let mut row = vec![Rational::zero(); width];
        row[i] = one.clone();
        row[t_col] = minus_one.clone();
        row[n + 1 + shorts.len() + i] = minus_one.clone();
        a.push(row);
        b.push(Rational::zero());
    }

    let mut cost = vec![Rational::zero(); width];
    cost[t_col] = one;
    match maximize(&cost, &a, &b) {
        LpOutcome::Optimal { x, value } if value.is_positive() => Some((x[..n].to_vec(), value)),
        _ => None,
    }
}

/// A well-centered generic point of the chamber `sig` with the given perimeter.
pub fn chamber_representative(
    sig: &ChamberSignature,
    perimeter: &Rational,
) -> Result<LengthVector> {
    let (point, _) = maximin_point(sig, None, perimeter).ok_or_else(|| {
        Error::InvalidLength(format!(
            "signature {sig} is not realized by any length vector"
        ))
    })?;
    let r = LengthVector::new(point)?;
    debug_assert_eq!(signature(&r).as_ref(), Ok(sig));
    Ok(r)
}

/// Crosses the facet of `sig` on which `long_set` turns short, at the
/// given perimeter.
pub fn cross_facet(
    sig: &ChamberSignature,
    long_set: &IndexSet,
    perimeter: &Rational,
) -> Result<AdjacentStep> {
    let target = sig.flip(long_set)?;
    let wall = Wall::new(*long_set)?;
    let degenerate = || Error::DegenerateWall {
        set: long_set.label(),
    };
    let (point, margin) = maximin_point(sig, Some(long_set), perimeter).ok_or_else(degenerate)?;
    let wall_point = LengthVector::new(point)?;

    // u = -(1/p) χ_I + (1/q) χ_{I^c}: keeps the perimeter, ε_I decreases at rate 2.
    let p = Rational::from_integer(BigInt::from(wall.p()));
    let q = Rational::from_integer(BigInt::from(wall.q()));
    let u: Vec<Rational> = (0..sig.n())
        .map(|i| {
            if long_set.contains(i) {
                -p.recip()
            } else {
                q.recip()
            }
        })
        .collect();

    let mut delta = margin / rat(4, 1);
    for _ in 0..64 {
        let cand: Vec<Rational> = wall_point
            .values()
            .iter()
            .zip(&u)
            .map(|(w, ui)| w + &delta * ui)
            .collect();
        if let Ok(r_after) = LengthVector::new(cand) {
            if signature(&r_after).as_ref() == Ok(&target) {
                let target_empty = target.is_empty();
                return Ok(AdjacentStep {
                    wall,
                    wall_point,
                    r_after,
                    target,
                    target_empty,
                });
            }
        }
        delta /= rat(2, 1);
    }
    Err(degenerate())
}

/// Steps from `r` across the wall where the long set `long_set` becomes
/// short. Requires the complement of `long_set` to be a maximal short set of
/// the chamber of `r`, so that the wall is a facet.
pub fn adjacent_representative(r: &LengthVector, long_set: &IndexSet) -> Result<AdjacentStep> {
    let sig = signature(r)?;
    if long_set.n() != r.n() {
        return Err(Error::DimensionMismatch {
            expected: r.n(),
            got: long_set.n(),
        });
    }
    if !long_set.is_proper() {
        return Err(Error::ImproperIndexSet);
    }
    if !sig.is_long(long_set) || !sig.maximal_shorts().contains(&long_set.complement()) {
        return Err(Error::NotAFacet {
            set: long_set.label(),
        });
    }
    cross_facet(&sig, long_set, &r.perimeter())
}

/// Walls met by the segment `(1 − t)·from + t·to`, ordered by `t`, each
/// oriented in the direction of travel.
///
/// Fails with `NonGenericSegment` if two different walls are met at the same
/// parameter.
pub fn segment_crossings(from: &LengthVector, to: &LengthVector) -> Result<Vec<Crossing>> {
    if from.n() != to.n() {
        return Err(Error::DimensionMismatch {
            expected: from.n(),
            got: to.n(),
        });
    }
    require_generic(from)?;
    require_generic(to)?;
    if from.perimeter() != to.perimeter() {
        return Err(Error::PerimeterMismatch);
    }
    let n = from.n();
    let d = from
        .values()
        .iter()
        .chain(to.values())
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints = |r: &LengthVector| -> Vec<BigInt> {
        r.values()
            .iter()
            .map(|x| x.numer() * (&d / x.denom()))
            .collect()
    };
    let e0 = scaled_epsilons_of(&ints(from));
    let e1 = scaled_epsilons_of(&ints(to));
    let full = IndexSet::full_mask(n);

    let mut out: Vec<Crossing> = Vec::new();
    for m in (1..full).filter(|m| m & 1 == 1) {
        let (a, b) = (&e0[m as usize], &e1[m as usize]);
        if a.is_positive() == b.is_positive() {
            continue;
        }
        let t = Rational::new(a.clone(), a - b);
        let set = IndexSet::new_unchecked(n, m);
        let long_before = if a.is_positive() {
            set
        } else {
            set.complement()
        };
        out.push(Crossing {
            t,
            wall: Wall {
                index_set: long_before,
            },
        });
    }
    out.sort_by(|x, y| x.t.cmp(&y.t).then_with(|| x.wall.cmp(&y.wall)));
    if let Some(w) = out.windows(2).find(|w| w[0].t == w[1].t) {
        return Err(Error::NonGenericSegment(format!(
            "walls {} and {} are met together at t = {}",
            w[0].wall, w[1].wall, w[0].t
        )));
    }
    Ok(out)
}

const PERTURBATION_RETRIES: u32 = 64;

/// Zero-sum integer direction used for the `k`-th perturbation attempt.
fn perturbation_direction(n: usize, k: u32) -> Vec<i64> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0000 + u64::from(k));
    let mut w: Vec<i64> = (0..n - 1).map(|_| rng.gen_range(-1000..=1000)).collect();
    let s: i64 = w.iter().sum();
    w.push(-s);
    w
}

/// Like [`segment_crossings`], but if the segment meets two walls at once the
/// endpoint `to` is nudged inside its own chamber until every crossing is
/// single. Returns the endpoint actually used.
pub fn segment_crossings_perturbed(
    from: &LengthVector,
    to: &LengthVector,
) -> Result<(LengthVector, Vec<Crossing>)> {
    match segment_crossings(from, to) {
        Err(Error::NonGenericSegment(_)) => {}
        other => return other.map(|c| (to.clone(), c)),
    }
    let n = to.n();
    let target_sig = signature(to)?;
    // Smallest margin of `to` to any wall or to the boundary of the orthant.
    let eps = to.scaled_epsilons();
    let d = to
        .values()
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let min_eps = eps
        .iter()
        .skip(1)
        .take((1 << n) - 2)
        .map(|e| e.abs())
        .min()
        .unwrap();
    let mut margin = Rational::new(min_eps, d);
    for x in to.values() {
        if x < &margin {
            margin = x.clone();
        }
    }
    let retries = Rational::from_integer(BigInt::from(PERTURBATION_RETRIES));
    let mut last_err = None;
    for k in 1..=PERTURBATION_RETRIES {
        let w = perturbation_direction(n, k);
        let norm1: i64 = w.iter().map(|x| x.abs()).sum();
        // k·δ·|w|_1 ≤ margin / 2 keeps the nudged point inside the chamber.
        let delta = &margin / (rat(2, 1) * &retries * rat(norm1, 1));
        let step = Rational::from_integer(BigInt::from(k)) * delta;
        let nudged: Vec<Rational> = to
            .values()
            .iter()
            .zip(&w)
            .map(|(x, wi)| x + &step * rat(*wi, 1))
            .collect();
        let nudged = LengthVector::new(nudged)?;
        debug_assert_eq!(nudged.perimeter(), to.perimeter());
        if signature(&nudged)? != target_sig {
            continue;
        }
        match segment_crossings(from, &nudged) {
            Ok(c) => return Ok((nudged, c)),
            Err(e @ Error::NonGenericSegment(_)) => last_err = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last_err.unwrap_or_else(|| Error::NonGenericSegment("perturbation failed".into())))
}

/// Point of an external chamber with side `j` (0-based) just below half the
/// perimeter and all other sides equal. `{j}` is then a maximal short set.
pub fn external_anchor(n: usize, j: usize, perimeter: &Rational) -> Result<LengthVector> {
    if n < 3 || j >= n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: j + 1,
        });
    }
    let nn = n as i64;
    let big = (rat(1, 2) - rat(1, 8 * nn)) * perimeter;
    let rest = (perimeter - &big) / rat(nn - 1, 1);
    let r: Vec<Rational> = (0..n)
        .map(|i| if i == j { big.clone() } else { rest.clone() })
        .collect();
    LengthVector::new(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(xs: &[(i64, i64)]) -> LengthVector {
        LengthVector::new(xs.iter().map(|&(a, b)| rat(a, b)).collect()).unwrap()
    }

    fn set(n: usize, xs: &[usize]) -> IndexSet {
        IndexSet::from_one_based(n, xs).unwrap()
    }

    fn sixtieths(xs: &[i64]) -> LengthVector {
        LengthVector::new(xs.iter().map(|&a| rat(a, 60)).collect()).unwrap()
    }

    #[test]
    fn facet_step_from_delta0() {
        let r0 = sixtieths(&[9, 9, 24, 9, 9]);
        let i13 = set(5, &[1, 3]);
        let step = adjacent_representative(&r0, &i13).unwrap();
        let wp = &step.wall_point;
        assert!(crate::chambers::epsilon(wp, &i13).unwrap().is_zero());
        // the only vanishing pair on the wall point is {1,3} | {2,4,5}
        for m in (1u32..31).filter(|m| m & 1 == 1) {
            let e = crate::chambers::epsilon(wp, &IndexSet::from_mask(5, m).unwrap()).unwrap();
            assert_eq!(e.is_zero(), m == i13.mask(), "{m:#b}");
        }
        assert_eq!(wp.perimeter(), r0.perimeter());
        assert_eq!(step.r_after.perimeter(), r0.perimeter());
        let expected = signature(&sixtieths(&[3, 11, 24, 11, 11])).unwrap();
        assert_eq!(signature(&step.r_after).unwrap(), expected);
        assert_eq!(step.target, expected);
        assert!(!step.target_empty);
    }

    #[test]
    fn the_interpolated_wall_point_is_a_valid_facet_point() {
        // Midpoint of the Δ⁰ and Δ¹ representatives lies on the {1,3} wall only.
        let r0 = sixtieths(&[9, 9, 24, 9, 9]);
        let r1 = sixtieths(&[3, 11, 24, 11, 11]);
        let mid = r0.lerp(&r1, &rat(1, 2)).unwrap();
        assert_eq!(mid, sixtieths(&[6, 10, 24, 10, 10]));
        assert_eq!(
            crate::chambers::first_vanishing(&mid),
            Some(set(5, &[1, 3]))
        );
    }

    #[test]
    fn non_facet_is_rejected() {
        let r0 = sixtieths(&[9, 9, 24, 9, 9]);
        // {3} is short at r0
        assert!(matches!(
            adjacent_representative(&r0, &set(5, &[3])),
            Err(Error::NotAFacet { .. })
        ));
        // {1,2,3} is long but {4,5} is not maximal short
        assert!(matches!(
            adjacent_representative(&r0, &set(5, &[1, 2, 3])),
            Err(Error::NotAFacet { .. })
        ));
    }

    #[test]
    fn exit_through_an_outer_wall() {
        let r = LengthVector::from_ints(&[2, 1, 1, 1]).unwrap();
        let step = adjacent_representative(&r, &set(4, &[2, 3, 4])).unwrap();
        assert!(step.target_empty);
        assert!(step.wall.is_outer());
        assert_eq!(step.wall_point.values()[0], rat(5, 2));
        assert!(crate::chambers::is_empty(&step.r_after).unwrap());
    }

    #[test]
    fn single_crossing_between_delta0_and_delta1() {
        let r0 = sixtieths(&[9, 9, 24, 9, 9]);
        let r1 = sixtieths(&[3, 11, 24, 11, 11]);
        let c = segment_crossings(&r0, &r1).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].t, rat(1, 2));
        assert_eq!(c[0].wall.index_set(), set(5, &[1, 3]));
        assert!(segment_crossings(&r0, &r0).unwrap().is_empty());
    }

    #[test]
    fn triangle_exits_through_outer_wall() {
        let a = LengthVector::from_ints(&[1, 1, 1]).unwrap();
        let b = lv(&[(9, 5), (3, 5), (3, 5)]);
        let c = segment_crossings(&a, &b).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].t, rat(5, 8));
        assert_eq!(c[0].wall.index_set(), set(3, &[2, 3]));
    }

    #[test]
    fn segment_preconditions() {
        let a = LengthVector::from_ints(&[1, 1, 1]).unwrap();
        let b = LengthVector::from_ints(&[2, 2, 2]).unwrap();
        assert_eq!(segment_crossings(&a, &b), Err(Error::PerimeterMismatch));
        let s = LengthVector::from_ints(&[1, 1, 1, 1]).unwrap();
        assert!(matches!(
            segment_crossings(&s, &s),
            Err(Error::SingularLength { .. })
        ));
    }

    #[test]
    fn simultaneous_walls_are_detected_and_perturbed_away() {
        // From the Δ⁰ point straight to a symmetric point in the all-pairs chamber:
        // the four walls {3,j} are met at the same time by symmetry.
        let from = sixtieths(&[9, 9, 24, 9, 9]);
        let to = lv(&[(19, 100), (19, 100), (24, 100), (19, 100), (19, 100)]);
        assert!(matches!(
            segment_crossings(&from, &to),
            Err(Error::NonGenericSegment(_))
        ));
        let (used, crossings) = segment_crossings_perturbed(&from, &to).unwrap();
        assert_ne!(used, to);
        assert_eq!(signature(&used).unwrap(), signature(&to).unwrap());
        assert_eq!(crossings.len(), 4);
        assert!(crossings.windows(2).all(|w| w[0].t < w[1].t));
    }

    #[test]
    fn anchors_are_external_and_generic() {
        for n in 3..=9 {
            for j in 0..n {
                let a = external_anchor(n, j, &rat(1, 1)).unwrap();
                let sig = signature(&a).unwrap();
                assert!(sig.is_external());
                assert!(sig
                    .maximal_shorts()
                    .contains(&IndexSet::from_mask(n, 1 << j).unwrap()));
                assert_eq!(a.perimeter(), rat(1, 1));
            }
        }
    }

    #[test]
    fn chamber_representative_realizes_signature() {
        let sig = signature(&sixtieths(&[3, 11, 24, 11, 11])).unwrap();
        let r = chamber_representative(&sig, &rat(1, 1)).unwrap();
        assert_eq!(signature(&r).unwrap(), sig);
        assert_eq!(r.perimeter(), rat(1, 1));
    }
}
