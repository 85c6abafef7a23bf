//! Learning by enumeration over uniformly decidable indexed families, and
//! the small zoo of indexed families used to exercise the validators.
//!
//! The enumeration learner is the classical full-information strategy: it
//! keeps everything it has seen and conjectures the least index whose
//! language is consistent with all of it. It serves as the ground-truth
//! oracle the iterative learners are compared against.

use alloc::boxed::Box;
use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::HarnessError;
use crate::codec::{decode_tuple, n_to_z, unpair, Nat};
use crate::lattice::Int;

/// The uniform decision procedure of an indexed family.
pub type MemberFn = Box<dyn Fn(&Nat, &Nat) -> bool>;

/// A uniformly decidable family of languages over the naturals, indexed
/// by naturals.
pub struct IndexedFamily {
    name: &'static str,
    member: MemberFn,
}

impl IndexedFamily {
    pub fn new(name: &'static str, member: MemberFn) -> Self {
        IndexedFamily { name, member }
    }

    pub fn name(&self) -> &'static str {
        self.name
    }

    /// The uniform decision procedure: is `x` in the language of `index`?
    pub fn member(&self, index: &Nat, x: &Nat) -> bool {
        (self.member)(index, x)
    }

    /// The canonical informant for the language of `index`: naturals in
    /// increasing order, labeled by membership.
    pub fn informant(&self, index: &Nat, t: u64) -> (Nat, bool) {
        let x = Nat::from(t);
        let label = self.member(index, &x);
        (x, label)
    }

    /// A canonical text for the language of `index`: position `t` carries
    /// `t` itself when it is a member and a pause otherwise, so finite
    /// languages still have a legal text.
    pub fn text(&self, index: &Nat, t: u64) -> Option<Nat> {
        let x = Nat::from(t);
        if self.member(index, &x) {
            Some(x)
        } else {
            None
        }
    }

    /// The half-space family in dimension `dim`: index
    /// `<<a0>,<a1>,...,<ad>>` decides by `a0 >= sum a_i x_i` on the coded
    /// point. Indices with all slopes zero decide a trivial full or empty
    /// set and never equal a half-space.
    pub fn half_spaces(dim: usize) -> IndexedFamily {
        IndexedFamily::new(
            "half-spaces",
            Box::new(move |index, x| {
                let coeffs: Vec<Int> = decode_tuple(index, dim + 1).iter().map(n_to_z).collect();
                let point: Vec<Int> = decode_tuple(x, dim).iter().map(n_to_z).collect();
                let rhs: Int = coeffs[1..]
                    .iter()
                    .zip(&point)
                    .map(|(a, x)| a * x)
                    .sum();
                coeffs[0] >= rhs
            }),
        )
    }
}

/// Bits of a natural, read as a canonical finite set of naturals.
fn bit_set_contains(code: &Nat, x: &Nat) -> bool {
    match x.to_u64() {
        Some(k) if k < code.bits() => code.bit(k),
        _ => false,
    }
}

/// The separating families: all finite sets plus the full set; the
/// cofinite sets; the even numbers with one odd point added and optionally
/// one even point removed; the full set and its one-point punctures; and
/// the two-row table languages distinguishing marked rows.
pub fn fixtures() -> Vec<IndexedFamily> {
    alloc::vec![
        // 0 is the full set; i+1 is the finite set with bit code i.
        IndexedFamily::new(
            "fin-or-all",
            Box::new(|index, x| {
                if index.is_zero() {
                    true
                } else {
                    bit_set_contains(&(index - Nat::one()), x)
                }
            }),
        ),
        // complement of the finite set with bit code `index`
        IndexedFamily::new(
            "cofin",
            Box::new(|index, x| !bit_set_contains(index, x)),
        ),
        // 0: the evens; 2k+1: evens plus the odd point 2k+1;
        // 2k+2: that language with the even point 2k removed
        IndexedFamily::new(
            "evens-and-bumps",
            Box::new(move |index, x| {
                if index.is_zero() {
                    return x.is_even();
                }
                let (k, with_hole) = {
                    let shifted = index - Nat::one();
                    (&shifted / Nat::from(2u32), shifted.is_odd())
                };
                let bump = &k * Nat::from(2u32) + Nat::one();
                if *x == bump {
                    return true;
                }
                if with_hole && *x == &k * Nat::from(2u32) {
                    return false;
                }
                x.is_even()
            }),
        ),
        // 0: the full set; x+1: everything except x
        IndexedFamily::new(
            "all-or-punctured",
            Box::new(|index, x| index.is_zero() || *index != x + Nat::one()),
        ),
        // index <s,d>: marked rows (bits of s) hold {0} union the set
        // coded by d shifted off zero; unmarked rows hold everything
        // but 0. Elements are pairs <row, column>.
        IndexedFamily::new(
            "row-table",
            Box::new(move |index, x| {
                let (s_code, d_code) = unpair(index);
                let (row, col) = unpair(x);
                if bit_set_contains(&s_code, &row) {
                    col.is_zero()
                        || (!col.is_zero() && bit_set_contains(&d_code, &(&col - Nat::one())))
                } else {
                    !col.is_zero()
                }
            }),
        ),
        IndexedFamily::half_spaces(2),
    ]
}

/// The learning-by-enumeration strategy: conjectures the least index
/// consistent with everything observed. Full information — it retains all
/// data — and therefore only an oracle, not an iterative learner.
pub struct Enumerator<'a> {
    family: &'a IndexedFamily,
    budget: u64,
    data: Vec<(Nat, bool)>,
    current: Nat,
}

impl<'a> Enumerator<'a> {
    pub fn new(family: &'a IndexedFamily, budget: u64) -> Self {
        Enumerator {
            family,
            budget,
            data: Vec::new(),
            current: Nat::zero(),
        }
    }

    /// The least index consistent with the data so far (before any datum:
    /// index 0).
    pub fn hypothesis(&self) -> &Nat {
        &self.current
    }

    /// Observes one datum and re-establishes the least consistent index.
    /// Consistency of an index only ever shrinks, so the search resumes
    /// from the current index and is guarded by the budget.
    pub fn observe(&mut self, value: Nat, label: bool) -> Result<&Nat, HarnessError> {
        self.data.push((value, label));
        let budget = Nat::from(self.budget);
        'search: loop {
            if self.current > budget {
                return Err(HarnessError::BudgetExceeded {
                    budget: self.budget,
                });
            }
            for (x, label) in &self.data {
                if self.family.member(&self.current, x) != *label {
                    self.current += Nat::one();
                    continue 'search;
                }
            }
            return Ok(&self.current);
        }
    }
}
