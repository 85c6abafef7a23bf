//! Exact Fourier–Motzkin feasibility for small rational linear systems.
//!
//! Used by the cell-projection test in [`super::facing`]: the systems there
//! have a handful of variables, so the doubly exponential worst case of the
//! method is irrelevant and exactness is what matters.

use alloc::vec::Vec;
use num_traits::{Signed, Zero};

use super::Rat;

/// A linear constraint `coeffs · x (= | >=) rhs`.
#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Rat>,
    pub rhs: Rat,
    pub equality: bool,
}

impl Constraint {
    pub fn eq(coeffs: Vec<Rat>, rhs: Rat) -> Self {
        Constraint {
            coeffs,
            rhs,
            equality: true,
        }
    }

    pub fn ge(coeffs: Vec<Rat>, rhs: Rat) -> Self {
        Constraint {
            coeffs,
            rhs,
            equality: false,
        }
    }
}

/// Decides whether `{ x : constraints }` is nonempty, exactly.
///
/// Equalities are eliminated first by Gaussian substitution, then the
/// remaining variables by Fourier–Motzkin, leaving ground facts `0 >= rhs`.
pub fn feasible(num_vars: usize, constraints: &[Constraint]) -> bool {
    let mut eqs: Vec<(Vec<Rat>, Rat)> = Vec::new();
    let mut ges: Vec<(Vec<Rat>, Rat)> = Vec::new();
    for c in constraints {
        debug_assert_eq!(c.coeffs.len(), num_vars);
        if c.equality {
            eqs.push((c.coeffs.clone(), c.rhs.clone()));
        } else {
            ges.push((c.coeffs.clone(), c.rhs.clone()));
        }
    }

    // Substitute equalities away one at a time.
    while let Some((coeffs, rhs)) = eqs.pop() {
        let Some(v) = coeffs.iter().position(|c| !c.is_zero()) else {
            if !rhs.is_zero() {
                return false;
            }
            continue;
        };
        let pivot = coeffs[v].clone();
        let substitute = |row: &mut Vec<Rat>, b: &mut Rat| {
            let factor = &row[v] / &pivot;
            if factor.is_zero() {
                return;
            }
            for (r, c) in row.iter_mut().zip(coeffs.iter()) {
                *r -= &factor * c;
            }
            *b -= &factor * &rhs;
            row[v] = Rat::zero();
        };
        for (row, b) in eqs.iter_mut().chain(ges.iter_mut()) {
            substitute(row, b);
        }
    }

    // Fourier–Motzkin on the surviving inequalities.
    for v in 0..num_vars {
        if ges.iter().all(|(c, _)| c[v].is_zero()) {
            continue;
        }
        let (with_v, rest): (Vec<_>, Vec<_>) = ges.into_iter().partition(|(c, _)| !c[v].is_zero());
        let lowers: Vec<_> = with_v
            .iter()
            .filter(|(c, _)| c[v].is_positive())
            .collect();
        let uppers: Vec<_> = with_v
            .iter()
            .filter(|(c, _)| c[v].is_negative())
            .collect();
        ges = rest;
        for (lc, lb) in &lowers {
            for (uc, ub) in &uppers {
                // lc[v] > 0 and uc[v] < 0; the combination below cancels v
                // with positive multipliers, so it stays a valid `>=`.
                let lm = -uc[v].clone();
                let um = lc[v].clone();
                let coeffs: Vec<Rat> = lc
                    .iter()
                    .zip(uc.iter())
                    .map(|(a, b)| a * &lm + b * &um)
                    .collect();
                let rhs = lb * &lm + ub * &um;
                ges.push((coeffs, rhs));
            }
        }
    }

    ges.iter().all(|(c, rhs)| {
        debug_assert!(c.iter().all(Zero::is_zero));
        !rhs.is_positive()
    })
}
