//! The Duistermaat-Heckman volume polynomial of a chamber and the
//! intersection numbers read off from its derivatives.
//!
//! On a chamber with long sets `L` (the full set included),
//!
//! ```text
//! v(r) = −1/(2(n−3)!) · Σ_{I ∈ L} (−1)^{n−|I|} ε_I(r)^{n−3}
//! ```
//!
//! and `vol M(r) = (2π)^{n−3} · v(r)`. Only the rational factor `v` is
//! stored.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::chambers::{require_generic, signature, ChamberSignature, IndexSet, LengthVector};
use crate::error::{Error, Result};
use crate::ratpoly::{factorial, MultiIndex, MultiPoly, Rational};

/// The factor separating `v` from the symplectic volume.
pub const VOLUME_SCALE: &str = "(2pi)^(n-3)";

/// Coordinates in which derivatives of the volume are taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Convention {
    /// `v` as a homogeneous polynomial in all of `r_1..r_n`.
    #[default]
    Homogeneous,
    /// `r_j` eliminated through `r_j = 1 − Σ_{i≠j} r_i` (0-based `j`).
    Affine(usize),
}

impl Convention {
    /// Checks that the eliminated index exists for `n` sides.
    pub fn check(&self, n: usize) -> Result<()> {
        match *self {
            Convention::Affine(j) if j >= n => Err(Error::ConventionOutOfRange { j: j + 1, n }),
            _ => Ok(()),
        }
    }

    /// Variables that remain after applying the convention.
    pub fn active_vars(&self, n: usize) -> Vec<usize> {
        match *self {
            Convention::Homogeneous => (0..n).collect(),
            Convention::Affine(j) => (0..n).filter(|&i| i != j).collect(),
        }
    }

    /// Rewrites a polynomial in `r_1..r_n` in this convention. The number of
    /// variables is kept; under `Affine(j)` the variable `j` no longer occurs.
    pub fn apply(&self, p: &MultiPoly) -> Result<MultiPoly> {
        self.check(p.nvars())?;
        match *self {
            Convention::Homogeneous => Ok(p.clone()),
            Convention::Affine(j) => {
                let n = p.nvars();
                let mut coeffs = vec![-Rational::one(); n];
                coeffs[j] = Rational::zero();
                let replacement = MultiPoly::linear_form(&coeffs) + MultiPoly::one(n);
                Ok(p.substitute(j, &replacement))
            }
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Convention::Homogeneous => write!(f, "homogeneous"),
            Convention::Affine(j) => write!(f, "affine:{}", j + 1),
        }
    }
}

impl FromStr for Convention {
    type Err = Error;

    /// Accepts `homogeneous` or `affine:j` with 1-based `j`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("homogeneous") {
            return Ok(Convention::Homogeneous);
        }
        let bad = || Error::Parse(format!("unknown convention {s:?}"));
        let j = s
            .strip_prefix("affine:")
            .ok_or_else(bad)?
            .parse::<usize>()
            .map_err(|_| bad())?;
        if j == 0 {
            return Err(bad());
        }
        Ok(Convention::Affine(j - 1))
    }
}

/// The volume polynomial `v` of one chamber.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VolumePolynomial {
    chamber: ChamberSignature,
    poly: MultiPoly,
}

impl VolumePolynomial {
    pub fn chamber(&self) -> &ChamberSignature {
        &self.chamber
    }

    /// Homogeneous of degree `n − 3`, or zero on an empty chamber.
    pub fn poly(&self) -> &MultiPoly {
        &self.poly
    }

    pub fn n(&self) -> usize {
        self.chamber.n()
    }

    pub fn scale(&self) -> &'static str {
        VOLUME_SCALE
    }

    pub fn in_convention(&self, conv: Convention) -> Result<MultiPoly> {
        conv.apply(&self.poly)
    }
}

/// Expands the volume sum for `sig`.
///
/// With `ε_I = Σ s_i r_i`, the coefficient of `r^α` in `ε_I^k / k!` is
/// `Π s_i^{α_i} / α!`, so the whole sum reduces to one signed integer count
/// per monomial.
pub fn volume_polynomial(sig: &ChamberSignature) -> VolumePolynomial {
    let n = sig.n();
    let k = (n - 3) as u32;
    let long: Vec<u32> = sig
        .long_sets_with_full()
        .iter()
        .map(IndexSet::mask)
        .collect();
    let vars: Vec<usize> = (0..n).collect();
    let mut poly = MultiPoly::zero(n);
    for alpha in MultiIndex::all_of_degree(n, &vars, k) {
        let odd: u32 = alpha
            .exps()
            .iter()
            .enumerate()
            .filter(|(_, &e)| e % 2 == 1)
            .fold(0, |m, (i, _)| m | 1 << i);
        let count: i64 = long
            .iter()
            .map(|&m| {
                let outside = n - m.count_ones() as usize;
                let flips = (odd & !m).count_ones() as usize;
                if (outside + flips).is_multiple_of(2) {
                    1
                } else {
                    -1
                }
            })
            .sum();
        if count == 0 {
            continue;
        }
        let denom: BigInt = alpha.exps().iter().map(|&e| factorial(e)).product();
        let c = Rational::new(BigInt::from(-count), denom * 2);
        poly.add_term(alpha, c);
    }
    VolumePolynomial {
        chamber: sig.clone(),
        poly,
    }
}

/// `vol M(r) / (2π)^{n−3}`.
pub fn volume_value(r: &LengthVector) -> Result<Rational> {
    let sig = signature(r)?;
    volume_polynomial(&sig).poly.evaluate(r.values())
}

/// The volume sum evaluated directly at `r`, term by term, without forming
/// a polynomial.
pub fn dh_sum(r: &LengthVector) -> Result<Rational> {
    require_generic(r)?;
    let n = r.n();
    let k = n - 3;
    let total = r.perimeter();
    let mut sum = Rational::zero();
    for mask in 1u32..=IndexSet::full_mask(n) {
        let inside: Rational = (0..n)
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| r.values()[i].clone())
            .sum();
        let eps = &inside * Rational::from_integer(2.into()) - &total;
        if eps <= Rational::zero() {
            continue;
        }
        let term = num_traits::pow(eps, k);
        if (n - mask.count_ones() as usize).is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
    }
    Ok(-sum / Rational::from_integer(factorial(k as u32) * 2))
}

/// `ε_I` as a linear form in `r_1..r_n`.
pub fn epsilon_form(set: &IndexSet) -> MultiPoly {
    let coeffs: Vec<Rational> = (0..set.n())
        .map(|i| Rational::from_integer(if set.contains(i) { 1 } else { -1 }.into()))
        .collect();
    MultiPoly::linear_form(&coeffs)
}

/// `∂^α v` in the given convention.
pub fn derivative_polynomial(
    vp: &VolumePolynomial,
    alpha: &MultiIndex,
    conv: Convention,
) -> Result<MultiPoly> {
    let n = vp.n();
    if alpha.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: alpha.len(),
        });
    }
    conv.check(n)?;
    if let Convention::Affine(j) = conv {
        if alpha.exps()[j] > 0 {
            return Err(Error::AffineIndexUsed(j + 1));
        }
    }
    vp.in_convention(conv)?.differentiate(alpha)
}

/// `∫ c^α` for `|α| = n − 3`: the constant `∂^α v`.
pub fn intersection_number(
    sig: &ChamberSignature,
    alpha: &MultiIndex,
    conv: Convention,
) -> Result<Rational> {
    let expected = (sig.n() - 3) as u32;
    if alpha.total() != expected {
        return Err(Error::WrongTotalDegree {
            expected,
            got: alpha.total(),
        });
    }
    let d = derivative_polynomial(&volume_polynomial(sig), alpha, conv)?;
    Ok(d.constant_term())
}

/// `v_1 − v_0` across the single wall separating `sig0` from `sig1`,
/// together with the set `I_p` that is long in `sig0`.
pub fn wall_jump(
    sig0: &ChamberSignature,
    sig1: &ChamberSignature,
) -> Result<(IndexSet, MultiPoly)> {
    let flipped = sig0.flipped_pairs(sig1);
    if sig0.n() != sig1.n() || flipped.len() != 1 {
        return Err(Error::NotAdjacent);
    }
    let v0 = volume_polynomial(sig0);
    let v1 = volume_polynomial(sig1);
    Ok((flipped[0], &v1.poly - &v0.poly))
}

/// The closed form of the jump across the wall where `I_p` turns short:
/// `(−1)^q / (n−3)! · ε_{I_p}^{n−3}`, `q = n − |I_p|`.
pub fn predicted_jump(long_set: &IndexSet) -> MultiPoly {
    let n = long_set.n();
    let k = (n - 3) as u32;
    let q = n - long_set.len();
    let sign = if q.is_multiple_of(2) { 1 } else { -1 };
    let c = Rational::new(BigInt::from(sign), factorial(k));
    epsilon_form(long_set).pow(k).scale(&c)
}
