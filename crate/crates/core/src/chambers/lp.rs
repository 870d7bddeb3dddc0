//! Dense two-phase simplex over ℚ with Bland's rule.
//!
//! Solves `maximize c·x  s.t.  A x = b, x ≥ 0`. Problem sizes here are a few
//! hundred rows at most, so a dense tableau is adequate.

use num_traits::{Signed, Zero};

use crate::ratpoly::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum LpOutcome {
    Optimal { x: Vec<Rational>, value: Rational },
    Infeasible,
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    /// Number of columns excluding the right-hand side.
    width: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Rational {
        &self.rows[i][self.width]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for x in self.rows[r].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Runs simplex iterations maximizing `cost` over columns `< allowed`.
    /// Returns `false` if unbounded.
    fn optimize(&mut self, cost: &[Rational], allowed: usize) -> bool {
        loop {
            // reduced cost: Σ_i c_{b_i} T[i][j] - c_j; enter on the first negative.
            let entering = (0..allowed).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let mut rc = -cost[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    if !cost[b].is_zero() && !self.rows[i][j].is_zero() {
                        rc += &cost[b] * &self.rows[i][j];
                    }
                }
                rc.is_negative()
            });
            let Some(c) = entering else {
                return true;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => {
                        ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((r, _)) = leave else {
                return false;
            };
            self.pivot(r, c);
        }
    }
}

pub(crate) fn maximize(cost: &[Rational], a: &[Vec<Rational>], b: &[Rational]) -> LpOutcome {
    let nvars = cost.len();
    let m = a.len();
    let width = nvars + m;
    let mut rows = Vec::with_capacity(m);
    for (i, (row, bi)) in a.iter().zip(b).enumerate() {
        debug_assert_eq!(row.len(), nvars);
        let flip = bi.is_negative();
        let mut t: Vec<Rational> = row
            .iter()
            .map(|x| if flip { -x.clone() } else { x.clone() })
            .collect();
        t.extend((0..m).map(|k| {
            if k == i {
                Rational::from_integer(1.into())
            } else {
                Rational::zero()
            }
        }));
        t.push(if flip { -bi.clone() } else { bi.clone() });
        rows.push(t);
    }
    let mut tab = Tableau {
        rows,
        basis: (nvars..width).collect(),
        width,
    };

    let mut phase1 = vec![Rational::zero(); width];
    for c in phase1.iter_mut().skip(nvars) {
        *c = Rational::from_integer((-1).into());
    }
    tab.optimize(&phase1, width);
    let infeasibility: Rational = (0..m)
        .filter(|&i| tab.basis[i] >= nvars)
        .map(|i| tab.rhs(i).clone())
        .sum();
    if !infeasibility.is_zero() {
        return LpOutcome::Infeasible;
    }

    // Drive zero-valued artificials out of the basis; drop redundant rows.
    let mut i = 0;
    while i < tab.rows.len() {
        if tab.basis[i] >= nvars {
            match (0..nvars).find(|&j| !tab.rows[i][j].is_zero()) {
                Some(j) => tab.pivot(i, j),
                None => {
                    tab.rows.remove(i);
                    tab.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }

    let mut phase2 = cost.to_vec();
    phase2.resize(width, Rational::zero());
    if !tab.optimize(&phase2, nvars) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![Rational::zero(); nvars];
    for (i, &bv) in tab.basis.iter().enumerate() {
        if bv < nvars {
            x[bv] = tab.rhs(i).clone();
        }
    }
    let value = x.iter().zip(cost).map(|(xi, ci)| xi * ci).sum();
    LpOutcome::Optimal { x, value }
}
