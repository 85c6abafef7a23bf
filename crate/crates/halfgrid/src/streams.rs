//! Informant prefixes and deterministic informant generators.
//!
//! An informant for a half-space presents every lattice point at least
//! once, labeled by membership. Generators here are pure functions of
//! `(spec, t)`: nothing is ever materialized infinitely and identical
//! specs yield bit-identical streams, which is what makes traces
//! replayable. The canonical order enumerates `Z^d` by growing max-norm
//! shells, lexicographically inside each shell.
//!
//! The even/odd Boolean-mapping transforms convert an informant over the
//! naturals into an informant (or text) for the mapped language in which
//! `2n` tracks membership of `n` and `2n+1` tracks non-membership.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::codec::Nat;
use crate::lattice::{HalfSpace, IntVec};
use crate::mix::Mix64;

use num_traits::{One, Zero};

/// A labeled lattice point as delivered by an informant.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Datum {
    pub point: IntVec,
    pub positive: bool,
}

impl Datum {
    pub fn new(point: IntVec, positive: bool) -> Self {
        Datum { point, positive }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StreamError {
    /// Some point occurs with both labels.
    Inconsistent,
    /// A stream spec violates its own kind-specific constraints.
    InvalidSpec(String),
}

impl fmt::Display for StreamError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StreamError::Inconsistent => write!(f, "prefix labels some point both ways"),
            StreamError::InvalidSpec(what) => write!(f, "invalid stream spec: {what}"),
        }
    }
}

/// Positive content of a prefix. Errors if the prefix is inconsistent.
pub fn pos(prefix: &[Datum]) -> Result<BTreeSet<IntVec>, StreamError> {
    check_consistent(prefix)?;
    Ok(prefix
        .iter()
        .filter(|d| d.positive)
        .map(|d| d.point.clone())
        .collect())
}

/// Negative content of a prefix. Errors if the prefix is inconsistent.
pub fn neg(prefix: &[Datum]) -> Result<BTreeSet<IntVec>, StreamError> {
    check_consistent(prefix)?;
    Ok(prefix
        .iter()
        .filter(|d| !d.positive)
        .map(|d| d.point.clone())
        .collect())
}

/// All labeled pairs of a prefix (repetitions collapse).
pub fn content(prefix: &[Datum]) -> BTreeSet<(IntVec, bool)> {
    prefix
        .iter()
        .map(|d| (d.point.clone(), d.positive))
        .collect()
}

fn check_consistent(prefix: &[Datum]) -> Result<(), StreamError> {
    let mut seen: BTreeSet<(&IntVec, bool)> = BTreeSet::new();
    for d in prefix {
        if seen.contains(&(&d.point, !d.positive)) {
            return Err(StreamError::Inconsistent);
        }
        seen.insert((&d.point, d.positive));
    }
    Ok(())
}

pub fn is_consistent(prefix: &[Datum]) -> bool {
    check_consistent(prefix).is_ok()
}

/// Whether every positive point lies in `l` and every negative point
/// outside it. Dimensions must match.
pub fn consistent_with(prefix: &[Datum], l: &HalfSpace) -> bool {
    prefix
        .iter()
        .all(|d| l.member(&d.point).expect("dimension checked by caller") == d.positive)
}

// ---------------------------------------------------------------------
// Canonical order on Z^d: max-norm shells, lexicographic within a shell.
// ---------------------------------------------------------------------

fn box_count(dim: u32, k: u64) -> u128 {
    (2 * k as u128 + 1).pow(dim)
}

fn shell_count(dim: u32, k: u64) -> u128 {
    if k == 0 {
        1
    } else {
        box_count(dim, k) - box_count(dim, k - 1)
    }
}

/// Lexicographic `m`-th point of the box `[-k, k]^dim`.
fn box_point(dim: u32, k: u64, mut m: u128) -> Vec<i64> {
    let side = 2 * k as u128 + 1;
    let mut coords = alloc::vec![0i64; dim as usize];
    for slot in (0..dim as usize).rev() {
        coords[slot] = (m % side) as i64 - k as i64;
        m /= side;
    }
    debug_assert_eq!(m, 0);
    coords
}

/// Lexicographic `m`-th point of the shell of max-norm exactly `k`.
fn shell_point(dim: u32, k: u64, mut m: u128) -> Vec<i64> {
    if k == 0 {
        return alloc::vec![0i64; dim as usize];
    }
    if dim == 1 {
        return alloc::vec![if m == 0 { -(k as i64) } else { k as i64 }];
    }
    for x1 in -(k as i64)..=k as i64 {
        let block = if x1.unsigned_abs() == k {
            box_count(dim - 1, k)
        } else {
            shell_count(dim - 1, k)
        };
        if m < block {
            let mut rest = if x1.unsigned_abs() == k {
                box_point(dim - 1, k, m)
            } else {
                shell_point(dim - 1, k, m)
            };
            let mut coords = Vec::with_capacity(dim as usize);
            coords.push(x1);
            coords.append(&mut rest);
            return coords;
        }
        m -= block;
    }
    unreachable!("shell index out of range")
}

/// The `t`-th point of `Z^dim` in canonical order.
pub fn canonical_point(dim: usize, t: u64) -> IntVec {
    let dim = dim as u32;
    let mut k = 0u64;
    let mut m = t as u128;
    loop {
        let c = shell_count(dim, k);
        if m < c {
            return IntVec::from_i64s(&shell_point(dim, k, m));
        }
        m -= c;
        k += 1;
    }
}

/// Position of `p` in the canonical order (inverse of [`canonical_point`]).
pub fn canonical_index_of(p: &IntVec) -> u64 {
    let dim = p.dim() as u32;
    let k = p
        .coords()
        .iter()
        .map(|c| {
            use num_traits::Signed;
            u64::try_from(c.abs().to_biguint().unwrap()).expect("desk-scale point")
        })
        .max()
        .unwrap();
    let base: u128 = (0..k).map(|s| shell_count(dim, s)).sum();
    // Linear scan inside the shell: shells at desk scale are small.
    let mut m = 0u128;
    loop {
        if IntVec::from_i64s(&shell_point(dim, k, m)) == *p {
            return (base + m) as u64;
        }
        m += 1;
        assert!(m < shell_count(dim, k), "point not found in its shell");
    }
}

/// The `t`-th datum of the canonical informant for `target`.
pub fn canonical_informant(target: &HalfSpace, t: u64) -> Datum {
    let point = canonical_point(target.dim(), t);
    let positive = target.member(&point).expect("dimensions agree");
    Datum { point, positive }
}

// ---------------------------------------------------------------------
// Stream specs
// ---------------------------------------------------------------------

/// Shuffled blocks of this many consecutive canonical positions make up a
/// permuted stream.
const PERMUTE_BLOCK: u64 = 32;

/// How a legal informant for the target is laid out over time.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StreamKind {
    /// The canonical shell order itself.
    Canonical,
    /// Canonical order shuffled within fixed-size blocks, seeded.
    Permuted,
    /// Mostly repeats of already-presented data; every fourth step is
    /// guaranteed fresh so the stream stays surjective.
    RepeatHeavy { repeat_percent: u8 },
    /// Canonical order with one designated point delayed until
    /// `release_at`, where it is guaranteed to appear.
    Withhold { point: IntVec, release_at: u64 },
}

impl StreamKind {
    pub fn name(&self) -> &'static str {
        match self {
            StreamKind::Canonical => "canonical",
            StreamKind::Permuted => "permuted",
            StreamKind::RepeatHeavy { .. } => "repeat-heavy",
            StreamKind::Withhold { .. } => "withhold",
        }
    }

    /// Kind-specific parameters as a compact string for trace metadata.
    pub fn params(&self) -> String {
        use core::fmt::Write;
        match self {
            StreamKind::Canonical | StreamKind::Permuted => String::new(),
            StreamKind::RepeatHeavy { repeat_percent } => {
                let mut s = String::new();
                let _ = write!(s, "repeat={repeat_percent}");
                s
            }
            StreamKind::Withhold { point, release_at } => {
                let mut s = String::new();
                let _ = write!(s, "withhold={}@{release_at}", point.display());
                s
            }
        }
    }
}

/// A deterministic informant: target, layout kind and seed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StreamSpec {
    pub target: HalfSpace,
    pub kind: StreamKind,
    pub seed: u64,
}

impl StreamSpec {
    pub fn new(target: HalfSpace, kind: StreamKind, seed: u64) -> Result<Self, StreamError> {
        let spec = StreamSpec { target, kind, seed };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), StreamError> {
        match &self.kind {
            StreamKind::RepeatHeavy { repeat_percent } if *repeat_percent > 100 => Err(
                StreamError::InvalidSpec(String::from("repeat percentage above 100")),
            ),
            StreamKind::Withhold { point, .. } if point.dim() != self.target.dim() => Err(
                StreamError::InvalidSpec(String::from(
                    "withheld point dimension differs from target",
                )),
            ),
            _ => Ok(()),
        }
    }

    pub fn dim(&self) -> usize {
        self.target.dim()
    }

    /// The `t`-th datum. Pure in `(self, t)`; for `RepeatHeavy` this
    /// replays the decision history, so sequential consumers should prefer
    /// [`StreamSpec::iter`].
    pub fn datum(&self, t: u64) -> Datum {
        let point = match &self.kind {
            StreamKind::Canonical => canonical_point(self.dim(), t),
            StreamKind::Permuted => canonical_point(self.dim(), permuted_index(self.seed, t)),
            StreamKind::RepeatHeavy { repeat_percent } => {
                let fresh_before = (0..t)
                    .filter(|&s| is_fresh_step(self.seed, s, *repeat_percent))
                    .count() as u64;
                self.repeat_heavy_point(t, fresh_before, *repeat_percent)
            }
            StreamKind::Withhold { point, release_at } => self.withheld_point(point, *release_at, t),
        };
        let positive = self.target.member(&point).expect("dimensions agree");
        Datum { point, positive }
    }

    fn repeat_heavy_point(&self, t: u64, fresh_before: u64, percent: u8) -> IntVec {
        if is_fresh_step(self.seed, t, percent) {
            canonical_point(self.dim(), fresh_before)
        } else {
            // t = 0 is always fresh, so fresh_before >= 1 here.
            let pick = Mix64::from_pair(self.seed, 2 * t + 1).below(fresh_before);
            canonical_point(self.dim(), pick)
        }
    }

    fn withheld_point(&self, withheld: &IntVec, release_at: u64, t: u64) -> IntVec {
        if t == release_at {
            return withheld.clone();
        }
        let i = if t < release_at { t } else { t - 1 };
        let w_index = canonical_index_of(withheld);
        if i < w_index {
            canonical_point(self.dim(), i)
        } else {
            canonical_point(self.dim(), i + 1)
        }
    }

    /// Sequential iterator over the stream; equal to `(0..).map(|t| datum(t))`.
    pub fn iter(&self) -> StreamIter<'_> {
        StreamIter {
            spec: self,
            t: 0,
            fresh_before: 0,
        }
    }
}

fn is_fresh_step(seed: u64, t: u64, percent: u8) -> bool {
    t.is_multiple_of(4) || Mix64::from_pair(seed, 2 * t).below(100) >= percent as u64
}

/// Canonical position presented at time `t` by the block-permuted layout.
fn permuted_index(seed: u64, t: u64) -> u64 {
    let block = t / PERMUTE_BLOCK;
    let offset = (t % PERMUTE_BLOCK) as usize;
    let mut rng = Mix64::from_pair(seed, block);
    let mut perm: Vec<u64> = (0..PERMUTE_BLOCK).collect();
    for i in (1..perm.len()).rev() {
        let j = rng.below(i as u64 + 1) as usize;
        perm.swap(i, j);
    }
    block * PERMUTE_BLOCK + perm[offset]
}

pub struct StreamIter<'a> {
    spec: &'a StreamSpec,
    t: u64,
    fresh_before: u64,
}

impl Iterator for StreamIter<'_> {
    type Item = Datum;

    fn next(&mut self) -> Option<Datum> {
        let t = self.t;
        self.t += 1;
        let point = match &self.spec.kind {
            StreamKind::RepeatHeavy { repeat_percent } => {
                let p = self
                    .spec
                    .repeat_heavy_point(t, self.fresh_before, *repeat_percent);
                if is_fresh_step(self.spec.seed, t, *repeat_percent) {
                    self.fresh_before += 1;
                }
                p
            }
            _ => return Some(self.spec.datum(t)),
        };
        let positive = self.spec.target.member(&point).expect("dimensions agree");
        Some(Datum { point, positive })
    }
}

// ---------------------------------------------------------------------
// Boolean mapping: informants over N to informants/texts for f(L), where
// 2n in f(L) <=> n in L and 2n+1 in f(L) <=> n not in L.
// ---------------------------------------------------------------------

/// Membership of `n` in the mapped language, given an oracle for the
/// original one.
pub fn bool_map_member(oracle: impl Fn(&Nat) -> bool, n: &Nat) -> bool {
    use num_integer::Integer;
    let (half, rem) = n.div_rem(&Nat::from(2u32));
    if rem.is_one() {
        !oracle(&half)
    } else {
        oracle(&half)
    }
}

/// Checks that no natural occurs with both labels.
pub fn nat_prefix_consistent(prefix: &[(Nat, bool)]) -> bool {
    let mut seen: BTreeSet<(&Nat, bool)> = BTreeSet::new();
    for (n, label) in prefix {
        if seen.contains(&(n, !label)) {
            return false;
        }
        seen.insert((n, *label));
    }
    true
}

/// Interweaves the positive and negative halves of the mapped informant:
/// each input datum `(n, 1)` becomes `(2n, 1), (2n+1, 0)` and each
/// `(n, 0)` becomes `(2n+1, 1), (2n, 0)`.
pub fn bool_map_informant(prefix: &[(Nat, bool)]) -> Result<Vec<(Nat, bool)>, StreamError> {
    if !nat_prefix_consistent(prefix) {
        return Err(StreamError::Inconsistent);
    }
    let mut out = Vec::with_capacity(prefix.len() * 2);
    for (n, label) in prefix {
        let even = n * Nat::from(2u32);
        let odd = &even + Nat::one();
        if *label {
            out.push((even, true));
            out.push((odd, false));
        } else {
            out.push((odd, true));
            out.push((even, false));
        }
    }
    Ok(out)
}

/// The text obtained by projecting the positive half of the mapped
/// informant: the `t`-th element is `2 n_t + 1 - label_t`.
pub fn bool_map_text(prefix: &[(Nat, bool)]) -> Vec<Nat> {
    prefix
        .iter()
        .map(|(n, label)| {
            let base = n * Nat::from(2u32);
            if *label {
                base
            } else {
                base + Nat::one()
            }
        })
        .collect()
}

/// Recovers the original informant from a mapped text by parity.
pub fn bool_map_decode_text(text: &[Nat]) -> Vec<(Nat, bool)> {
    use num_integer::Integer;
    text.iter()
        .map(|x| {
            let (half, rem) = x.div_rem(&Nat::from(2u32));
            (half, rem.is_zero())
        })
        .collect()
}
