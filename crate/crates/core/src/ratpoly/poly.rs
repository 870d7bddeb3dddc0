use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::rational::{format_rational, Rational};
use crate::error::{Error, Result};

/// Exponent vector `(a_1, ..., a_n)` of a monomial, or equivalently the
/// multi-index of a mixed partial derivative.
///
/// Ordered by graded lexicographic order: total degree first, then
/// lexicographically with `x_1 > x_2 > ... > x_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    exps: Vec<u32>,
    total: u32,
}

impl MultiIndex {
    pub fn new(exps: Vec<u32>) -> Self {
        let total = exps.iter().sum();
        MultiIndex { exps, total }
    }

    pub fn zeros(n: usize) -> Self {
        MultiIndex::new(vec![0; n])
    }

    /// The unit vector `e_i` (0-based).
    pub fn unit(n: usize, i: usize) -> Self {
        let mut exps = vec![0; n];
        exps[i] = 1;
        MultiIndex::new(exps)
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn total(&self) -> u32 {
        self.total
    }

    pub fn plus(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.len(), other.len());
        MultiIndex::new(
            self.exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// All monomials of total degree `d` in the variables listed in `vars`
    /// (0-based, out of `n`), in descending graded-lex order.
    pub fn all_of_degree(n: usize, vars: &[usize], d: u32) -> Vec<MultiIndex> {
        fn rec(vars: &[usize], d: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            match vars.split_first() {
                None => {
                    if d == 0 {
                        out.push(MultiIndex::new(cur.clone()));
                    }
                }
                Some((&v, rest)) => {
                    let top = if rest.is_empty() { d } else { 0 };
                    for e in (top..=d).rev() {
                        cur[v] = e;
                        rec(rest, d - e, cur, out);
                    }
                    cur[v] = 0;
                }
            }
        }
        let mut sorted = vars.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut out = Vec::new();
        if sorted.is_empty() {
            if d == 0 {
                out.push(MultiIndex::zeros(n));
            }
            return out;
        }
        rec(&sorted, d, &mut vec![0; n], &mut out);
        out
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total
            .cmp(&other.total)
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial in `nvars` variables with exact rational coefficients.
///
/// Zero coefficients are never stored, so two polynomials are equal exactly
/// when their term maps are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<MultiIndex, Rational>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = MultiPoly::zero(nvars);
        p.add_term(MultiIndex::zeros(nvars), c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        MultiPoly::constant(nvars, Rational::one())
    }

    /// The coordinate function `x_i` (0-based).
    pub fn var(nvars: usize, i: usize) -> Self {
        MultiPoly::monomial(MultiIndex::unit(nvars, i), Rational::one())
    }

    pub fn monomial(exps: MultiIndex, c: Rational) -> Self {
        let mut p = MultiPoly::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    /// `Σ coeffs[i] · x_i`.
    pub fn linear_form(coeffs: &[Rational]) -> Self {
        let n = coeffs.len();
        let mut p = MultiPoly::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(MultiIndex::unit(n, i), c.clone());
        }
        p
    }

    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Rational, Vec<u32>)>,
    {
        let mut p = MultiPoly::zero(nvars);
        for (c, exps) in terms {
            if exps.len() != nvars {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    got: exps.len(),
                });
            }
            p.add_term(MultiIndex::new(exps), c);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order: descending graded-lex, leading term first.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, exps: &MultiIndex) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&MultiIndex::zeros(self.nvars))
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(MultiIndex::total)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(MultiIndex::total);
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|e| e == d),
        }
    }

    pub fn add_term(&mut self, exps: MultiIndex, c: Rational) {
        debug_assert_eq!(exps.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> MultiPoly {
        let mut acc = MultiPoly::one(self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// `∂/∂x_i`.
    pub fn partial(&self, i: usize) -> MultiPoly {
        let mut out = MultiPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let k = e.exps[i];
            if k == 0 {
                continue;
            }
            let mut exps = e.exps.clone();
            exps[i] -= 1;
            out.add_term(
                MultiIndex::new(exps),
                c * Rational::from_integer(BigInt::from(k)),
            );
        }
        out
    }

    /// The iterated partial derivative `∂^α`.
    pub fn differentiate(&self, alpha: &MultiIndex) -> Result<MultiPoly> {
        if alpha.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: alpha.len(),
            });
        }
        let mut out = MultiPoly::zero(self.nvars);
        'terms: for (e, c) in &self.terms {
            let mut coeff = c.clone();
            let mut exps = e.exps.clone();
            for (k, &a) in alpha.exps.iter().enumerate() {
                if a > exps[k] {
                    continue 'terms;
                }
                // falling factorial e (e-1) ... (e-a+1)
                for j in 0..a {
                    coeff *= Rational::from_integer(BigInt::from(exps[k] - j));
                }
                exps[k] -= a;
            }
            out.add_term(MultiIndex::new(exps), coeff);
        }
        Ok(out)
    }

    /// Applies `self` as a constant-coefficient differential operator:
    /// `x_i ↦ ∂/∂r_i`, returning `self(∂) target`.
    pub fn apply_as_operator(&self, target: &MultiPoly) -> Result<MultiPoly> {
        if self.nvars != target.nvars {
            return Err(Error::DimensionMismatch {
                expected: target.nvars,
                got: self.nvars,
            });
        }
        let mut out = MultiPoly::zero(self.nvars);
        for (alpha, c) in &self.terms {
            let d = target.differentiate(alpha)?;
            out += d.scale(c);
        }
        Ok(out)
    }

    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: point.len(),
            });
        }
        let mut total = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(&e.exps) {
                if k > 0 {
                    t *= num_traits::pow(x.clone(), k as usize);
                }
            }
            total += t;
        }
        Ok(total)
    }

    /// Replaces `x_var` by `replacement` (a polynomial in the same variables).
    pub fn substitute(&self, var: usize, replacement: &MultiPoly) -> MultiPoly {
        debug_assert_eq!(replacement.nvars, self.nvars);
        let mut powers: Vec<MultiPoly> = vec![MultiPoly::one(self.nvars)];
        let mut out = MultiPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let k = e.exps[var] as usize;
            while powers.len() <= k {
                let next = powers.last().unwrap() * replacement;
                powers.push(next);
            }
            let mut rest = e.exps.clone();
            rest[var] = 0;
            let m = MultiPoly::monomial(MultiIndex::new(rest), c.clone());
            out += &m * &powers[k];
        }
        out
    }

    /// Relabels variables: `x_i ↦ x_{perm[i]}`.
    pub fn permute(&self, perm: &[usize]) -> MultiPoly {
        debug_assert_eq!(perm.len(), self.nvars);
        let mut out = MultiPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut exps = vec![0; self.nvars];
            for (i, &k) in e.exps.iter().enumerate() {
                exps[perm[i]] = k;
            }
            out.add_term(MultiIndex::new(exps), c.clone());
        }
        out
    }

    /// Whether `x_var` occurs in any term.
    pub fn involves(&self, var: usize) -> bool {
        self.terms.keys().any(|e| e.exps[var] > 0)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({})", format_rational(c))?;
            for (i, &a) in e.exps.iter().enumerate() {
                match a {
                    0 => {}
                    1 => write!(f, "*x{}", i + 1)?,
                    _ => write!(f, "*x{}^{}", i + 1, a)?,
                }
            }
        }
        Ok(())
    }
}

impl AddAssign<MultiPoly> for MultiPoly {
    fn add_assign(&mut self, rhs: MultiPoly) {
        for (e, c) in rhs.terms {
            self.add_term(e, c);
        }
    }
}

impl AddAssign<&MultiPoly> for MultiPoly {
    fn add_assign(&mut self, rhs: &MultiPoly) {
        for (e, c) in &rhs.terms {
            self.add_term(e.clone(), c.clone());
        }
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(mut self, rhs: MultiPoly) -> MultiPoly {
        self += rhs;
        self
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: MultiPoly) -> MultiPoly {
        &self - &rhs
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        debug_assert_eq!(self.nvars, rhs.nvars);
        let mut out = MultiPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(ea.plus(eb), ca * cb);
            }
        }
        out
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        &self * &rhs
    }
}
