//! The lock-based iterative half-space learner for arbitrary dimension.
//!
//! While open, the learner aggregates data until some `d` positive and `d`
//! negative points form adjacent basic sets whose tangent half-spaces
//! separate everything retained; it then locks on that pair, discards all
//! other data, and ignores consistent input. A datum crossing the
//! separation reopens collection seeded with the `2d` lock points and the
//! violator.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{One, Signed};

use super::{Datum, IterativeLearner, Language, LearnerError, Mode};
use crate::lattice::{facing, hyperplane_through, BasicSet, HalfSpace, Int, IntVec};
use crate::mix::fnv1a64;

/// Learner state; the hypothesis is this state, nothing else.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HsState {
    Open { retained: BTreeSet<Datum> },
    Locked { cplus: BasicSet, cminus: BasicSet },
}

/// Searches consistent labeled data for adjacent basic sets `(C+, C-)` —
/// `C+` from positive points, `C-` from negative ones — whose tangent
/// half-spaces separate every datum. Returns the lexicographically least
/// valid pair under the sorted-point-list order, or `None`.
///
/// Exhaustive over `d`-subsets with early pruning: a valid `C+` spans a
/// supporting plane of the positives with the adjacent plane supporting
/// the negatives, so candidate normals are rejected with a single scan.
pub fn find_lock(data: &BTreeSet<Datum>, dim: usize) -> Option<(BasicSet, BasicSet)> {
    let pos: Vec<&IntVec> = data.iter().filter(|d| d.positive).map(|d| &d.point).collect();
    let neg: Vec<&IntVec> = data.iter().filter(|d| !d.positive).map(|d| &d.point).collect();
    if pos.len() < dim || neg.len() < dim {
        return None;
    }

    let mut best: Option<(BasicSet, BasicSet)> = None;
    for_each_combination(pos.len(), dim, &mut |idx: &[usize]| {
        let pts: Vec<IntVec> = idx.iter().map(|&i| pos[i].clone()).collect();
        let Ok(cplus) = BasicSet::new(pts) else {
            return;
        };
        let h = hyperplane_through(&cplus).expect("independent by construction");
        let normal = h.normal();
        let plane = -h.offset().to_integer();

        // Which side of the plane is free of positives?
        let mut can_point_up = true; // all positives at value <= plane
        let mut can_point_down = true; // all positives at value >= plane
        for p in &pos {
            let v = normal.dot(p);
            if v > plane {
                can_point_up = false;
            }
            if v < plane {
                can_point_down = false;
            }
            if !can_point_up && !can_point_down {
                return;
            }
        }

        for toward_neg in [(can_point_up, false), (can_point_down, true)] {
            let (feasible, flip) = toward_neg;
            if !feasible {
                continue;
            }
            // Oriented so negatives sit at strictly larger values; they
            // must all reach at least plane value + 1, with the adjacent
            // plane exactly met by the C- candidates.
            let oriented = |p: &IntVec| {
                let v = normal.dot(p);
                if flip {
                    -v
                } else {
                    v
                }
            };
            let oriented_plane = if flip { -plane.clone() } else { plane.clone() };
            let wanted = &oriented_plane + Int::one();
            let mut touching: Vec<&IntVec> = Vec::new();
            let mut all_beyond = true;
            for q in &neg {
                let v = oriented(q);
                if v < wanted {
                    all_beyond = false;
                    break;
                }
                if v == wanted {
                    touching.push(q);
                }
            }
            if !all_beyond || touching.len() < dim {
                continue;
            }
            for_each_combination(touching.len(), dim, &mut |jdx: &[usize]| {
                let pts: Vec<IntVec> = jdx.iter().map(|&j| touching[j].clone()).collect();
                let Ok(cminus) = BasicSet::new(pts) else {
                    return;
                };
                if !facing(&cplus, &cminus).expect("same dimension") {
                    return;
                }
                let candidate = (cplus.clone(), cminus);
                if best.as_ref().map(|b| candidate < *b).unwrap_or(true) {
                    best = Some(candidate);
                }
            });
        }
    });
    best
}

fn for_each_combination(n: usize, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k > n {
        return;
    }
    if k == 0 {
        f(&[]);
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        // rightmost slot that can still advance
        let mut slot = k;
        let advanced = loop {
            if slot == 0 {
                break None;
            }
            slot -= 1;
            if idx[slot] != slot + n - k {
                break Some(slot);
            }
        };
        let Some(slot) = advanced else {
            return;
        };
        idx[slot] += 1;
        for j in slot + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// The oriented tangent half-spaces of an adjacent lock pair: the first
/// contains `C+`'s plane and everything on its side, the second is the
/// complementary half-space bounded by `C-`'s plane. Together they
/// partition the lattice.
pub fn lock_tangents(cplus: &BasicSet, cminus: &BasicSet) -> (HalfSpace, HalfSpace) {
    let h = hyperplane_through(cplus).expect("valid basic set");
    let normal = h.normal();
    let plus_val = -h.offset().to_integer();
    let minus_val = normal.dot(&cminus.points()[0]);
    let gap = &minus_val - &plus_val;
    assert!(gap.abs().is_one(), "lock planes must be adjacent");
    // Orient the normal toward the positive side.
    let toward_pos = if gap.is_one() {
        normal.neg()
    } else {
        normal.clone()
    };
    let vplus = toward_pos.dot(&cplus.points()[0]);
    let vminus = toward_pos.dot(&cminus.points()[0]);
    let plus = HalfSpace::new(toward_pos.clone(), -vplus).expect("primitive normal");
    let minus = HalfSpace::new(toward_pos.neg(), vminus).expect("primitive normal");
    (plus, minus)
}

/// The general-dimension iterative half-space learner.
pub struct HalfSpaceLearner {
    dim: usize,
}

impl HalfSpaceLearner {
    pub fn new(dim: usize) -> Self {
        assert!(dim >= 1);
        HalfSpaceLearner { dim }
    }
}

fn insert_checked(retained: &mut BTreeSet<Datum>, datum: Datum) -> Result<(), LearnerError> {
    let opposite = Datum::new(datum.point.clone(), !datum.positive);
    if retained.contains(&opposite) {
        return Err(LearnerError::InconsistentDatum(datum.point));
    }
    retained.insert(datum);
    Ok(())
}

impl IterativeLearner for HalfSpaceLearner {
    type Hypothesis = HsState;

    fn dim(&self) -> usize {
        self.dim
    }

    fn initial(&self) -> HsState {
        HsState::Open {
            retained: BTreeSet::new(),
        }
    }

    fn step(&self, hyp: &HsState, datum: &Datum) -> Result<HsState, LearnerError> {
        if datum.point.dim() != self.dim {
            return Err(LearnerError::DimMismatch);
        }
        match hyp {
            HsState::Open { retained } => {
                let mut retained = retained.clone();
                insert_checked(&mut retained, datum.clone())?;
                match find_lock(&retained, self.dim) {
                    Some((cplus, cminus)) => Ok(HsState::Locked { cplus, cminus }),
                    None => Ok(HsState::Open { retained }),
                }
            }
            HsState::Locked { cplus, cminus } => {
                let (plus, minus) = lock_tangents(cplus, cminus);
                let fits = if datum.positive {
                    plus.member(&datum.point).expect("dimension checked")
                } else {
                    minus.member(&datum.point).expect("dimension checked")
                };
                if fits {
                    return Ok(hyp.clone());
                }
                // Violated: reopen with the lock points and the violator.
                let mut retained = BTreeSet::new();
                for p in cplus.points() {
                    retained.insert(Datum::new(p.clone(), true));
                }
                for q in cminus.points() {
                    retained.insert(Datum::new(q.clone(), false));
                }
                insert_checked(&mut retained, datum.clone())?;
                Ok(HsState::Open { retained })
            }
        }
    }

    fn hypothesis_id(&self, hyp: &HsState) -> String {
        use core::fmt::Write;
        let mut out = String::new();
        match hyp {
            HsState::Open { retained } => {
                let mut bytes = Vec::new();
                for d in retained {
                    bytes.extend_from_slice(d.point.display().as_bytes());
                    bytes.push(if d.positive { b'+' } else { b'-' });
                }
                let _ = write!(out, "open:{}:{:016x}", retained.len(), fnv1a64(&bytes));
            }
            HsState::Locked { cplus, cminus } => {
                out.push_str("lock:+");
                for p in cplus.points() {
                    out.push_str(&p.display());
                }
                out.push_str("/-");
                for q in cminus.points() {
                    out.push_str(&q.display());
                }
            }
        }
        out
    }

    fn language(&self, hyp: &HsState) -> Language {
        match hyp {
            HsState::Open { .. } => Language::HalfSpace(HalfSpace::dummy(self.dim)),
            HsState::Locked { cplus, cminus } => {
                Language::HalfSpace(lock_tangents(cplus, cminus).0)
            }
        }
    }

    fn mode(&self, hyp: &HsState) -> Mode {
        match hyp {
            HsState::Open { .. } => Mode::Open,
            HsState::Locked { .. } => Mode::Locked,
        }
    }
}
