//! The fully coded two-dimensional learner.
//!
//! Hypotheses are single natural numbers. An even code `2<s, w>` is
//! data-collection mode: `w` encodes an array of `s` stored labeled
//! points. An odd code `2<<u>,<v>,<x>,<y>> + 1` claims a separating
//! configuration: `u, v` positively and `x, y` negatively labeled points
//! on parallel adjacent lattice lines with overlapping extents. Odd codes
//! whose points lack that property, and all even codes, denote the
//! placeholder upper half-plane.
//!
//! The learner moves to an odd code only when the configuration's
//! half-space also classifies all currently stored data correctly — the
//! two-dimensional instance of the locked-state requirement that keeps
//! lock distances strictly decreasing.

use alloc::string::String;
use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Datum, IterativeLearner, Language, LearnerError, Mode};
use crate::codec::{decode_point, decode_tuple, encode_point, encode_tuple, pair, unpair, Nat};
use crate::lattice::{gcd_vec, HalfSpace, Int, IntVec};
use crate::mix::fnv1a64;

/// Decode guard: stored-data arrays beyond this length cannot arise from
/// legitimate runs at desk scale (the codes would be astronomically big).
const MAX_STORED: usize = 4096;

/// Whether four plane points `u, v` (positive) and `x, y` (negative) form
/// a separating configuration: distinct parallel lattice lines with no
/// lattice line strictly between them, and segment extents overlapping on
/// every coordinate axis along which both lines vary.
pub fn lock_property_2d(u: &IntVec, v: &IntVec, x: &IntVec, y: &IntVec) -> bool {
    assert!(
        u.dim() == 2 && v.dim() == 2 && x.dim() == 2 && y.dim() == 2,
        "plane points expected"
    );
    if u == v || x == y {
        return false;
    }
    let duv = v.sub(u);
    let dxy = y.sub(x);
    // parallel directions
    if (&duv[0] * &dxy[1] - &duv[1] * &dxy[0]) != Int::zero() {
        return false;
    }
    let normal = line_normal(&duv);
    let line_uv = normal.dot(u);
    let line_xy = normal.dot(x);
    // distinct and with no lattice line strictly between: primitive
    // normals take every integer value, so the offsets must differ by one
    if (&line_uv - &line_xy).abs() != Int::one() {
        return false;
    }
    // extent overlap per axis, where the lines vary along that axis
    for axis in 0..2 {
        // the line varies along `axis` iff the other normal coordinate
        // does not vanish
        if normal[1 - axis].is_zero() {
            continue;
        }
        let (alo, ahi) = minmax(&u[axis], &v[axis]);
        let (blo, bhi) = minmax(&x[axis], &y[axis]);
        if ahi < blo || bhi < alo {
            return false;
        }
    }
    true
}

fn minmax<'a>(a: &'a Int, b: &'a Int) -> (&'a Int, &'a Int) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Primitive normal of the line with direction `dir`.
fn line_normal(dir: &IntVec) -> IntVec {
    let n = IntVec::new(alloc::vec![dir[1].clone(), -dir[0].clone()]);
    let g = gcd_vec(&n);
    IntVec::new(n.coords().iter().map(|c| c / &g).collect())
}

/// The half-space carved out by a separating configuration: boundary
/// through `u, v`, the side away from `x, y`, in canonical form.
fn halfspace_from_lock(u: &IntVec, v: &IntVec, x: &IntVec) -> HalfSpace {
    let normal = line_normal(&v.sub(u));
    let here = normal.dot(u);
    let there = normal.dot(x);
    // orient toward the negative points: language is { z : a.z <= a0 }
    let (a, a0) = if there > here {
        (normal, here)
    } else {
        (normal.neg(), -here)
    };
    HalfSpace::new(a.neg(), a0).expect("primitive by construction")
}

/// The coded 2-D learner. Initial hypothesis is the code 0.
pub struct Coded2dLearner;

impl Coded2dLearner {
    /// One step on coded input `(value, label)`.
    pub fn coded_step(hyp: &Nat, value: &Nat, positive: bool) -> Result<Nat, LearnerError> {
        let two = Nat::from(2u32);
        if hyp.is_even() {
            let j = hyp / &two;
            let (s_code, w) = unpair(&j);
            let s = s_code
                .to_usize()
                .filter(|&s| s <= MAX_STORED)
                .ok_or(LearnerError::MalformedCode)?;
            let mut items = decode_tuple(&w, s);
            let mut stored: Vec<(IntVec, bool)> = Vec::with_capacity(s + 1);
            for item in &items {
                let (point_code, label_code) = unpair(item);
                let label = decode_label(&label_code)?;
                stored.push((decode_point(&point_code, 2), label));
            }
            stored.push((decode_point(value, 2), positive));
            if let Some((u, v, x, y)) = search_lock(&stored) {
                let quad = encode_tuple(&[
                    encode_point(&u),
                    encode_point(&v),
                    encode_point(&x),
                    encode_point(&y),
                ]);
                return Ok(quad * &two + Nat::one());
            }
            items.push(pair(value, &nat_label(positive)));
            let next = pair(&Nat::from(s as u64 + 1), &encode_tuple(&items));
            Ok(next * &two)
        } else {
            let j = (hyp - Nat::one()) / &two;
            let quad = decode_tuple(&j, 4);
            let pts: Vec<IntVec> = quad.iter().map(|c| decode_point(c, 2)).collect();
            let (u, v, x, y) = (&pts[0], &pts[1], &pts[2], &pts[3]);
            if !lock_property_2d(u, v, x, y) {
                return Err(LearnerError::MalformedCode);
            }
            let hs = halfspace_from_lock(u, v, x);
            let point = decode_point(value, 2);
            if hs.member(&point).expect("plane point") == positive {
                return Ok(hyp.clone());
            }
            // discard the separating configuration, reopen with its four
            // points and the violating datum as stored data
            let items = [
                pair(&encode_point(u), &nat_label(true)),
                pair(&encode_point(v), &nat_label(true)),
                pair(&encode_point(x), &nat_label(false)),
                pair(&encode_point(y), &nat_label(false)),
                pair(value, &nat_label(positive)),
            ];
            let next = pair(&Nat::from(5u32), &encode_tuple(&items));
            Ok(next * &two)
        }
    }

    /// The language an arbitrary code denotes.
    pub fn decode_language(hyp: &Nat) -> Language {
        match Self::decode_lock(hyp) {
            Some((u, v, x, _)) => Language::HalfSpace(halfspace_from_lock(&u, &v, &x)),
            None => Language::HalfSpace(HalfSpace::dummy(2)),
        }
    }

    fn decode_lock(hyp: &Nat) -> Option<(IntVec, IntVec, IntVec, IntVec)> {
        if hyp.is_even() {
            return None;
        }
        let j = (hyp - Nat::one()) / Nat::from(2u32);
        let quad = decode_tuple(&j, 4);
        let pts: Vec<IntVec> = quad.iter().map(|c| decode_point(c, 2)).collect();
        if lock_property_2d(&pts[0], &pts[1], &pts[2], &pts[3]) {
            Some((pts[0].clone(), pts[1].clone(), pts[2].clone(), pts[3].clone()))
        } else {
            None
        }
    }
}

fn decode_label(code: &Nat) -> Result<bool, LearnerError> {
    if code.is_zero() {
        Ok(false)
    } else if code.is_one() {
        Ok(true)
    } else {
        Err(LearnerError::MalformedCode)
    }
}

fn nat_label(positive: bool) -> Nat {
    if positive {
        Nat::one()
    } else {
        Nat::zero()
    }
}

/// First 4-tuple in lexicographic order over the deduplicated stored
/// points that has the separating-configuration property *and* whose
/// induced half-space classifies every stored datum correctly, or `None`.
///
/// Without the classification requirement the learner can relock a stale
/// configuration forever: after a violation the four old points still
/// qualify on their own, the violator is discarded on relock, and the
/// lock distance never decreases.
fn search_lock(stored: &[(IntVec, bool)]) -> Option<(IntVec, IntVec, IntVec, IntVec)> {
    let mut pos: Vec<&IntVec> = stored.iter().filter(|(_, l)| *l).map(|(p, _)| p).collect();
    let mut neg: Vec<&IntVec> = stored.iter().filter(|(_, l)| !*l).map(|(p, _)| p).collect();
    pos.sort();
    pos.dedup();
    neg.sort();
    neg.dedup();
    for ui in 0..pos.len() {
        for vi in ui + 1..pos.len() {
            for xi in 0..neg.len() {
                for yi in xi + 1..neg.len() {
                    if !lock_property_2d(pos[ui], pos[vi], neg[xi], neg[yi]) {
                        continue;
                    }
                    let hs = halfspace_from_lock(pos[ui], pos[vi], neg[xi]);
                    let separates = stored
                        .iter()
                        .all(|(p, label)| hs.member(p).expect("plane point") == *label);
                    if separates {
                        return Some((
                            pos[ui].clone(),
                            pos[vi].clone(),
                            neg[xi].clone(),
                            neg[yi].clone(),
                        ));
                    }
                }
            }
        }
    }
    None
}

impl IterativeLearner for Coded2dLearner {
    type Hypothesis = Nat;

    fn dim(&self) -> usize {
        2
    }

    fn initial(&self) -> Nat {
        Nat::zero()
    }

    fn step(&self, hyp: &Nat, datum: &Datum) -> Result<Nat, LearnerError> {
        if datum.point.dim() != 2 {
            return Err(LearnerError::DimMismatch);
        }
        Self::coded_step(hyp, &encode_point(&datum.point), datum.positive)
    }

    fn hypothesis_id(&self, hyp: &Nat) -> String {
        use core::fmt::Write;
        let mut out = String::from("c2d:");
        let _ = write!(out, "{:016x}", fnv1a64(&hyp.to_bytes_le()));
        out
    }

    fn language(&self, hyp: &Nat) -> Language {
        Self::decode_language(hyp)
    }

    fn mode(&self, hyp: &Nat) -> Mode {
        if Self::decode_lock(hyp).is_some() {
            Mode::Locked
        } else {
            Mode::Open
        }
    }
}
