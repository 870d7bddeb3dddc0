use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::Rational;

/// Rank of a rational matrix together with a basis of its right kernel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankInfo {
    pub rank: usize,
    /// Pivot columns of the row echelon form, ascending.
    pub pivots: Vec<usize>,
    /// Basis of `{x : M x = 0}`; each vector has a `1` in one free column and
    /// `0` in the other free columns.
    pub kernel: Vec<Vec<Rational>>,
}

pub fn transpose(m: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

/// Exact rank and kernel over ℚ.
///
/// Rows are first cleared of denominators, then reduced with Bareiss
/// fraction-free elimination so every intermediate entry is a minor of the
/// integer matrix. `ncols` is needed for the kernel of a matrix with no rows.
pub fn matrix_rank(m: &[Vec<Rational>], ncols: usize) -> RankInfo {
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|row| {
            assert_eq!(row.len(), ncols, "ragged matrix");
            let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
        })
        .collect();

    let rows = a.len();
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let (top, bottom) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in bottom.iter_mut() {
            let factor = row[c].clone();
            for j in c + 1..ncols {
                let v = &pivot_row[c] * &row[j] - &factor * &pivot_row[j];
                debug_assert!((&v % &prev).is_zero(), "Bareiss division must be exact");
                row[j] = v / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    let rank = pivots.len();

    // Back substitution on the echelon rows, one kernel vector per free column.
    let mut kernel = Vec::new();
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    for free in (0..ncols).filter(|&j| !is_pivot[j]) {
        let mut x = vec![Rational::zero(); ncols];
        x[free] = Rational::one();
        for (k, &pc) in pivots.iter().enumerate().rev() {
            let row = &a[k];
            let mut s = Rational::zero();
            for j in pc + 1..ncols {
                if !row[j].is_zero() && !x[j].is_zero() {
                    s += Rational::from_integer(row[j].clone()) * &x[j];
                }
            }
            x[pc] = -s / Rational::from_integer(row[pc].clone());
        }
        kernel.push(x);
    }

    RankInfo {
        rank,
        pivots,
        kernel,
    }
}

/// Incrementally maintained row space in reduced echelon form, used to pick
/// a deterministic complement basis.
#[derive(Debug, Clone, Default)]
pub struct RowSpace {
    rows: Vec<(usize, Vec<Rational>)>,
}

impl RowSpace {
    pub fn new() -> Self {
        RowSpace { rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[Rational]) -> Vec<Rational> {
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            for (x, y) in v.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Adds `v`; returns `false` if it was already in the span.
    pub fn insert(&mut self, v: &[Rational]) -> bool {
        let mut w = self.reduce(v);
        let Some(p) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = w[p].recip();
        for x in w.iter_mut() {
            *x *= &inv;
        }
        for (_, row) in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for (x, y) in row.iter_mut().zip(&w) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        self.rows.push((p, w));
        true
    }
}

/// Scales a rational vector to a primitive integer vector whose first nonzero
/// entry is positive.
pub(crate) fn primitive(v: &[Rational]) -> Vec<Rational> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    let sign = match ints.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => -BigInt::one(),
        _ => BigInt::one(),
    };
    ints.into_iter()
        .map(|x| Rational::from_integer(x / &g * &sign))
        .collect()
}
