//! The cohomology ring `ℚ[x_1..x_n] / Ann(v)` of a polygon space, handled
//! through apolarity: `Q ∈ Ann(v)` when `Q(∂) v = 0`, with `x_i` acting as
//! `∂/∂r_i`.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use crate::chambers::{ChamberSignature, IndexSet};
use crate::error::{Error, Result};
use crate::ratpoly::{
    matrix_rank, primitive, transpose, MultiIndex, MultiPoly, Rational, RowSpace,
};
use crate::volume::{volume_polynomial, Convention, VolumePolynomial};

/// A homogeneous class in `H^{2·degree}`, represented by a polynomial in
/// `x_1..x_n` (`x_i` standing for `c_i`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyClass {
    degree: u32,
    poly: MultiPoly,
}

impl CohomologyClass {
    pub fn new(poly: MultiPoly) -> Result<Self> {
        if !poly.is_homogeneous() {
            return Err(Error::NotHomogeneous);
        }
        let degree = poly.degree().ok_or(Error::NotHomogeneous)?;
        Ok(CohomologyClass { degree, poly })
    }

    pub fn zero(nvars: usize, degree: u32) -> Self {
        CohomologyClass {
            degree,
            poly: MultiPoly::zero(nvars),
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn poly(&self) -> &MultiPoly {
        &self.poly
    }

    pub fn mul(&self, other: &CohomologyClass) -> CohomologyClass {
        CohomologyClass {
            degree: self.degree + other.degree,
            poly: &self.poly * &other.poly,
        }
    }

    pub fn pow(&self, k: u32) -> CohomologyClass {
        CohomologyClass {
            degree: self.degree * k,
            poly: self.poly.pow(k),
        }
    }
}

/// Betti numbers and annihilator generators of one chamber.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApolarPresentation {
    pub chamber: ChamberSignature,
    pub convention: Convention,
    /// `b_0, b_2, ..., b_{2(n−3)}`.
    pub betti: Vec<usize>,
    /// Entry `k` holds the new generators of `Ann` in degree `k + 1`, for
    /// degrees `1..=n−2`.
    pub generators: Vec<Vec<MultiPoly>>,
}

/// The volume polynomial in a fixed convention, with the variables that
/// may appear in operators.
#[derive(Debug, Clone)]
struct Apolar {
    n: usize,
    top: u32,
    vars: Vec<usize>,
    v: MultiPoly,
}

impl Apolar {
    fn new(vp: &VolumePolynomial, conv: Convention) -> Result<Self> {
        Ok(Apolar {
            n: vp.n(),
            top: (vp.n() - 3) as u32,
            vars: conv.active_vars(vp.n()),
            v: vp.in_convention(conv)?,
        })
    }

    fn check_degree(&self, d: u32) -> Result<()> {
        if d > self.top {
            Err(Error::DegreeOutOfRange(d))
        } else {
            Ok(())
        }
    }

    /// Rows: degree-`d` monomials. Columns: every monomial occurring in some
    /// `∂^α v`.
    fn catalecticant(&self, d: u32) -> (Vec<MultiIndex>, Vec<Vec<Rational>>) {
        let rows = MultiIndex::all_of_degree(self.n, &self.vars, d);
        let images: Vec<MultiPoly> = rows
            .iter()
            .map(|a| self.v.differentiate(a).expect("matching dimensions"))
            .collect();
        let cols: BTreeSet<&MultiIndex> = images
            .iter()
            .flat_map(|p| p.terms().map(|(e, _)| e))
            .collect();
        let matrix = images
            .iter()
            .map(|p| cols.iter().map(|e| p.coeff(e)).collect())
            .collect();
        (rows, matrix)
    }

    fn rank(&self, d: u32) -> usize {
        let (_, m) = self.catalecticant(d);
        let ncols = m.first().map_or(0, Vec::len);
        matrix_rank(&m, ncols).rank
    }

    /// Coefficient vectors over the degree-`d` monomials of a basis of `Ann_d`.
    fn kernel(&self, d: u32) -> (Vec<MultiIndex>, Vec<Vec<Rational>>) {
        let (rows, m) = self.catalecticant(d);
        let kernel = matrix_rank(&transpose(&m), rows.len()).kernel;
        (rows, kernel)
    }

    fn operator_check(&self, q: &MultiPoly) -> Result<()> {
        if q.nvars() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: q.nvars(),
            });
        }
        if let Some(j) = (0..self.n).find(|j| !self.vars.contains(j) && q.involves(*j)) {
            return Err(Error::AffineIndexUsed(j + 1));
        }
        Ok(())
    }

    fn apply(&self, q: &MultiPoly) -> Result<MultiPoly> {
        self.operator_check(q)?;
        q.apply_as_operator(&self.v)
    }
}

fn to_poly(n: usize, rows: &[MultiIndex], coeffs: &[Rational]) -> MultiPoly {
    let mut p = MultiPoly::zero(n);
    for (e, c) in rows.iter().zip(coeffs) {
        p.add_term(e.clone(), c.clone());
    }
    p
}

fn nonempty_volume(sig: &ChamberSignature) -> Result<VolumePolynomial> {
    if sig.is_empty() {
        return Err(Error::EmptyChamber);
    }
    Ok(volume_polynomial(sig))
}

/// Rank of the degree-`d` catalecticant of `v`, which is `b_{2d}`.
pub fn catalecticant_rank(vp: &VolumePolynomial, d: u32, conv: Convention) -> Result<usize> {
    let ap = Apolar::new(vp, conv)?;
    ap.check_degree(d)?;
    Ok(ap.rank(d))
}

/// `[b_0, b_2, ..., b_{2(n−3)}]`: the catalecticant ranks of `v` in the
/// given convention.
///
/// In the homogeneous convention these are the Betti numbers of `M(r)`.
/// Under `Affine(j)` the operators only reach the span of the differences
/// `x_i − x_j`, so when `b_2 = n` the degree-one rank drops by one.
pub fn betti_numbers(sig: &ChamberSignature, conv: Convention) -> Result<Vec<usize>> {
    let ap = Apolar::new(&nonempty_volume(sig)?, conv)?;
    Ok((0..=ap.top).map(|d| ap.rank(d)).collect())
}

/// A basis of the degree-`d` part of `Ann(v)`.
pub fn annihilator_basis(
    vp: &VolumePolynomial,
    d: u32,
    conv: Convention,
) -> Result<Vec<MultiPoly>> {
    let ap = Apolar::new(vp, conv)?;
    let (rows, kernel) = ap.kernel(d);
    Ok(kernel
        .iter()
        .map(|k| to_poly(ap.n, &rows, &primitive(k)))
        .collect())
}

/// For each degree `d = 1..=n−2`, the part of `Ann_d` not generated by
/// `Ann_{d−1}`, as primitive integer polynomials.
pub fn annihilator_generators(
    sig: &ChamberSignature,
    conv: Convention,
) -> Result<Vec<Vec<MultiPoly>>> {
    let ap = Apolar::new(&nonempty_volume(sig)?, conv)?;
    let mut out = Vec::new();
    let mut previous: Vec<MultiPoly> = Vec::new();
    for d in 1..=ap.top + 1 {
        let (rows, kernel) = ap.kernel(d);
        let position: BTreeMap<&MultiIndex, usize> =
            rows.iter().enumerate().map(|(k, e)| (e, k)).collect();
        let coords = |p: &MultiPoly| -> Vec<Rational> {
            let mut v = vec![Rational::zero(); rows.len()];
            for (e, c) in p.terms() {
                v[position[e]] = c.clone();
            }
            v
        };
        let mut span = RowSpace::new();
        for g in &previous {
            for &i in &ap.vars {
                span.insert(&coords(&(g * &MultiPoly::var(ap.n, i))));
            }
        }
        let mut fresh = Vec::new();
        for k in &kernel {
            if span.insert(k) {
                fresh.push(to_poly(ap.n, &rows, &primitive(k)));
            }
        }
        out.push(fresh);
        previous = kernel.iter().map(|k| to_poly(ap.n, &rows, k)).collect();
    }
    Ok(out)
}

pub fn apolar_presentation(sig: &ChamberSignature, conv: Convention) -> Result<ApolarPresentation> {
    Ok(ApolarPresentation {
        chamber: sig.clone(),
        convention: conv,
        betti: betti_numbers(sig, conv)?,
        generators: annihilator_generators(sig, conv)?,
    })
}

/// Whether `c` vanishes in `ℚ[x] / Ann(v)`.
pub fn is_zero_class(
    c: &CohomologyClass,
    sig: &ChamberSignature,
    conv: Convention,
) -> Result<bool> {
    let ap = Apolar::new(&volume_polynomial(sig), conv)?;
    ap.operator_check(c.poly())?;
    if c.degree() > ap.top {
        return Ok(true);
    }
    Ok(ap.apply(c.poly())?.is_zero())
}

/// `∫ a·b`, for classes of complementary degree.
pub fn poincare_pairing(
    a: &CohomologyClass,
    b: &CohomologyClass,
    sig: &ChamberSignature,
    conv: Convention,
) -> Result<Rational> {
    let ap = Apolar::new(&volume_polynomial(sig), conv)?;
    let total = a.degree() + b.degree();
    if total != ap.top {
        return Err(Error::WrongTotalDegree {
            expected: ap.top,
            got: total,
        });
    }
    Ok(ap.apply(&(a.poly() * b.poly()))?.constant_term())
}

/// Rank of the pairing between degree-`d` and degree-`(n−3−d)` monomials.
pub fn pairing_rank(vp: &VolumePolynomial, d: u32, conv: Convention) -> Result<usize> {
    let ap = Apolar::new(vp, conv)?;
    ap.check_degree(d)?;
    let left = MultiIndex::all_of_degree(ap.n, &ap.vars, d);
    let right = MultiIndex::all_of_degree(ap.n, &ap.vars, ap.top - d);
    let m: Vec<Vec<Rational>> = left
        .iter()
        .map(|a| {
            right
                .iter()
                .map(|b| {
                    ap.v.differentiate(&a.plus(b))
                        .expect("matching dimensions")
                        .constant_term()
                })
                .collect()
        })
        .collect();
    Ok(matrix_rank(&m, right.len()).rank)
}

fn check_base(set: &IndexSet, base: usize) -> Result<()> {
    if set.len() < 2 {
        return Err(Error::SetTooSmall { set: set.label() });
    }
    if !set.contains(base) {
        return Err(Error::BaseNotInSet {
            base: base + 1,
            set: set.label(),
        });
    }
    Ok(())
}

/// Poincaré dual of the submanifold where the edges in `set` are parallel:
/// `(−1)^{p−1} Π_{j ∈ set, j ≠ base} (x_j + x_base)`. `base` is 0-based.
pub fn pd_class(set: &IndexSet, base: usize) -> Result<CohomologyClass> {
    check_base(set, base)?;
    let n = set.n();
    let xb = MultiPoly::var(n, base);
    let mut poly = MultiPoly::one(n);
    for j in set.elements().into_iter().filter(|&j| j != base) {
        poly = &poly * &(&MultiPoly::var(n, j) + &xb);
    }
    if set.len().is_multiple_of(2) {
        poly = -poly;
    }
    CohomologyClass::new(poly)
}

/// First Chern class of the normal bundle of that submanifold:
/// `−2 Σ_{j ∈ set, j ≠ base} x_j`.
pub fn normal_bundle_chern(set: &IndexSet, base: usize) -> Result<CohomologyClass> {
    check_base(set, base)?;
    let n = set.n();
    let coeffs: Vec<Rational> = (0..n)
        .map(|j| {
            if j != base && set.contains(j) {
                -Rational::from_integer(2.into())
            } else {
                Rational::zero()
            }
        })
        .collect();
    CohomologyClass::new(MultiPoly::linear_form(&coeffs))
}

/// Whether `pd_class(set, b)` agrees modulo `Ann` for every base `b ∈ set`.
pub fn pd_class_base_independent(
    set: &IndexSet,
    sig: &ChamberSignature,
    conv: Convention,
) -> Result<bool> {
    let elems = set.elements();
    let first = pd_class(set, elems[0])?;
    for &b in &elems[1..] {
        let diff = CohomologyClass {
            degree: first.degree(),
            poly: first.poly() - pd_class(set, b)?.poly(),
        };
        if !is_zero_class(&diff, sig, conv)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `1` as a degree-0 class.
pub fn unit_class(nvars: usize) -> CohomologyClass {
    CohomologyClass {
        degree: 0,
        poly: MultiPoly::constant(nvars, Rational::one()),
    }
}
