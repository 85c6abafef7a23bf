//! Bijective codings between integers, integer vectors, and naturals, and
//! the induced indexing of half-spaces.
//!
//! The pairing bijection is Cantor's, `<i,j> = (i+j)(i+j+1)/2 + j`; tuples
//! are left-nested, `<i0,...,ik> = <<i0,...,i(k-1)>, ik>`. Traces record
//! the pairing name because indices produced under a different pairing are
//! not bit-compatible.
//!
//! A half-space index encodes the coefficient vector `(a0, a1, ..., ad)` of
//! the inequality `a0 >= sum a_i x_i`; decoding normalizes to the oriented
//! canonical form used everywhere else in the crate (`n . x + c >= 0` with
//! primitive `n`), so one internal convention holds and codes are confined
//! to this boundary.

use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::lattice::{HalfSpace, Int, IntVec};

/// Natural number code (arbitrary precision; nested pairings grow fast).
pub type Nat = num_bigint::BigUint;

/// Name of the pairing bijection, recorded in trace metadata.
pub const PAIRING_NAME: &str = "cantor";

/// Integer-to-natural zigzag: 0,-1,1,-2,2,... -> 0,1,2,3,4,...
pub fn z_to_n(x: &Int) -> Nat {
    let doubled = x * Int::from(2);
    if x.is_negative() {
        (-doubled - Int::one()).to_biguint().expect("positive")
    } else {
        doubled.to_biguint().expect("non-negative")
    }
}

/// Inverse of [`z_to_n`].
pub fn n_to_z(i: &Nat) -> Int {
    let i = Int::from(i.clone());
    if i.is_even() {
        i / 2
    } else {
        -(i + Int::one()) / 2
    }
}

/// Cantor pairing `<i,j> = (i+j)(i+j+1)/2 + j`.
pub fn pair(i: &Nat, j: &Nat) -> Nat {
    let s = i + j;
    (&s * (&s + Nat::one())) / Nat::from(2u32) + j
}

/// Inverse of [`pair`].
pub fn unpair(k: &Nat) -> (Nat, Nat) {
    // w = floor((sqrt(8k+1) - 1) / 2) is the diagonal index.
    let w = ((k * Nat::from(8u32) + Nat::one()).sqrt() - Nat::one()) / Nat::from(2u32);
    let t = (&w * (&w + Nat::one())) / Nat::from(2u32);
    let j = k - t;
    let i = w - &j;
    (i, j)
}

/// Left-nested tuple code; a 1-tuple is the element itself and the empty
/// tuple is 0.
pub fn encode_tuple(items: &[Nat]) -> Nat {
    let mut iter = items.iter();
    let Some(first) = iter.next() else {
        return Nat::zero();
    };
    iter.fold(first.clone(), |acc, item| pair(&acc, item))
}

/// Inverse of [`encode_tuple`] for a known length.
pub fn decode_tuple(code: &Nat, len: usize) -> Vec<Nat> {
    if len == 0 {
        return Vec::new();
    }
    let mut out = alloc::vec![Nat::zero(); len];
    let mut acc = code.clone();
    for slot in (1..len).rev() {
        let (rest, item) = unpair(&acc);
        out[slot] = item;
        acc = rest;
    }
    out[0] = acc;
    out
}

/// Code of a lattice point: `<<x1>,...,<xd>>`.
pub fn encode_point(p: &IntVec) -> Nat {
    let items: Vec<Nat> = p.coords().iter().map(z_to_n).collect();
    encode_tuple(&items)
}

/// Inverse of [`encode_point`] for a known dimension.
pub fn decode_point(code: &Nat, dim: usize) -> IntVec {
    assert!(dim >= 1);
    let items = decode_tuple(code, dim);
    IntVec::new(items.iter().map(n_to_z).collect())
}

/// Result of decoding a half-space index: indices whose slope coefficients
/// are all zero form the degenerate index set and denote no half-space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecodedHalfSpace {
    Proper(HalfSpace),
    Degenerate,
}

/// Decodes index `<<a0>,<a1>,...,<ad>>` into the canonical form of the
/// half-space `{ x : a0 >= sum a_i x_i }`. Total on naturals.
pub fn decode_halfspace(index: &Nat, dim: usize) -> DecodedHalfSpace {
    let items = decode_tuple(index, dim + 1);
    let coeffs: Vec<Int> = items.iter().map(n_to_z).collect();
    let a0 = &coeffs[0];
    let slopes = &coeffs[1..];
    if slopes.iter().all(Zero::is_zero) {
        return DecodedHalfSpace::Degenerate;
    }
    // a0 >= a.x  <=>  (-a).x + a0 >= 0; divide by the slope gcd and floor.
    let g = slopes.iter().fold(Int::zero(), |acc, c| acc.gcd(c));
    let normal = IntVec::new(slopes.iter().map(|c| -c / &g).collect());
    let floor_offset = a0.div_floor(&g);
    DecodedHalfSpace::Proper(HalfSpace::new(normal, floor_offset).expect("primitive by gcd"))
}

/// The canonical index of a half-space: equal languages map to equal
/// indices and decoding is the identity up to language equality.
pub fn canonical_index(l: &HalfSpace) -> Nat {
    // { x : n.x + c >= 0 } = { x : -n.x <= c } = { x : a0 >= a.x } with
    // a = -n, a0 = c.
    let mut items = Vec::with_capacity(l.dim() + 1);
    items.push(z_to_n(l.floor_offset()));
    for c in l.normal().coords() {
        items.push(z_to_n(&-c));
    }
    encode_tuple(&items)
}
