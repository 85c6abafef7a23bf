//! Iterative learners of integral half-spaces.
//!
//! An iterative learner carries no memory besides its current hypothesis:
//! the next hypothesis is a pure function of (current hypothesis, newest
//! datum). What a hypothesis *denotes* is kept separate from what it *is*:
//! identity strings distinguish states that memorize different data even
//! when they denote the same language, which is exactly the distinction
//! the syntactic behavioral restrictions test.
//!
//! - [`HalfSpaceLearner`]: the lock-based learner for arbitrary dimension.
//! - [`Coded2dLearner`]: the two-dimensional variant whose hypotheses are
//!   single natural-number codes.
//! - [`CannyLearner`]: wrapper ensuring no datum causes two mind changes.
//! - [`WitnessLearner`]: wrapper recording mind-change witnesses into the
//!   hypothesis semantics.

mod coded;
mod halfspace;
mod wrap;

pub use coded::{lock_property_2d, Coded2dLearner};
pub use halfspace::{find_lock, lock_tangents, HalfSpaceLearner, HsState};
pub use wrap::{CannyHypothesis, CannyLearner, WitnessHypothesis, WitnessLearner};

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::lattice::{HalfSpace, Int, IntVec, LatticeError};
pub use crate::streams::Datum;

/// Operating phase of a learner, as exposed in traces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Collecting data, hypothesis semantics is the placeholder language.
    Open,
    /// Holding a committed separating pair; consistent data are forgotten.
    Locked,
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::Open => "open",
            Mode::Locked => "locked",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LearnerError {
    /// The datum contradicts a point the learner has retained with the
    /// opposite label; informants never do this.
    InconsistentDatum(IntVec),
    /// The datum's dimension differs from the learner's.
    DimMismatch,
    /// A hypothesis code does not decode to a well-formed state.
    MalformedCode,
}

impl fmt::Display for LearnerError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LearnerError::InconsistentDatum(p) => {
                write!(f, "datum contradicts retained point {}", p.display())
            }
            LearnerError::DimMismatch => write!(f, "datum dimension mismatch"),
            LearnerError::MalformedCode => write!(f, "hypothesis code is malformed"),
        }
    }
}

/// A half-space with finitely many membership exceptions. Normalized: the
/// added points lie outside the base, the removed points inside it, both
/// lists sorted and duplicate-free, and at least one exception exists
/// (otherwise the language is represented as a plain half-space).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Patched {
    base: HalfSpace,
    add: Vec<IntVec>,
    remove: Vec<IntVec>,
}

impl Patched {
    pub fn base(&self) -> &HalfSpace {
        &self.base
    }

    pub fn added(&self) -> &[IntVec] {
        &self.add
    }

    pub fn removed(&self) -> &[IntVec] {
        &self.remove
    }
}

/// The language a hypothesis denotes: a half-space, possibly with finitely
/// many forced membership exceptions. Thanks to normalization, two values
/// compare equal iff they denote the same set of lattice points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Language {
    HalfSpace(HalfSpace),
    Patched(Patched),
}

impl Language {
    /// Builds the language `(base with add forced in) with remove forced
    /// out`, normalizing away ineffective exceptions. `add` and `remove`
    /// must not share points.
    pub fn patched(base: HalfSpace, add: &[IntVec], remove: &[IntVec]) -> Self {
        let mut eff_add: Vec<IntVec> = add
            .iter()
            .filter(|p| !base.member(p).expect("dimensions agree"))
            .cloned()
            .collect();
        let mut eff_remove: Vec<IntVec> = remove
            .iter()
            .filter(|p| base.member(p).expect("dimensions agree"))
            .cloned()
            .collect();
        eff_add.sort();
        eff_add.dedup();
        eff_remove.sort();
        eff_remove.dedup();
        debug_assert!(eff_add.iter().all(|p| !eff_remove.contains(p)));
        if eff_add.is_empty() && eff_remove.is_empty() {
            Language::HalfSpace(base)
        } else {
            Language::Patched(Patched {
                base,
                add: eff_add,
                remove: eff_remove,
            })
        }
    }

    pub fn base_halfspace(&self) -> &HalfSpace {
        match self {
            Language::HalfSpace(h) => h,
            Language::Patched(p) => &p.base,
        }
    }

    pub fn dim(&self) -> usize {
        self.base_halfspace().dim()
    }

    pub fn member(&self, p: &IntVec) -> Result<bool, LatticeError> {
        match self {
            Language::HalfSpace(h) => h.member(p),
            Language::Patched(patched) => {
                if p.dim() != patched.base.dim() {
                    return Err(LatticeError::DimMismatch);
                }
                if patched.add.binary_search(p).is_ok() {
                    return Ok(true);
                }
                if patched.remove.binary_search(p).is_ok() {
                    return Ok(false);
                }
                patched.base.member(p)
            }
        }
    }

    /// Exact language equality. Normalization makes this structural: two
    /// patched languages over different base half-spaces differ on
    /// infinitely many points, which finitely many exceptions cannot mend.
    pub fn equal(&self, other: &Language) -> Result<bool, LatticeError> {
        if self.dim() != other.dim() {
            return Err(LatticeError::DimMismatch);
        }
        Ok(self == other)
    }

    /// Exact language inclusion. If the base half-spaces are not included
    /// in one another the difference is infinite and no finite exception
    /// sets can repair it; otherwise only the exception points can break
    /// inclusion and each is checked directly.
    pub fn subset(&self, other: &Language) -> Result<bool, LatticeError> {
        if self.dim() != other.dim() {
            return Err(LatticeError::DimMismatch);
        }
        if !self.base_halfspace().subset_of(other.base_halfspace())? {
            return Ok(false);
        }
        let mut suspects: Vec<&IntVec> = Vec::new();
        if let Language::Patched(p) = self {
            suspects.extend(p.add.iter());
        }
        if let Language::Patched(q) = other {
            suspects.extend(q.remove.iter());
        }
        for p in suspects {
            if self.member(p)? && !other.member(p)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The language with `force_in` points made members and `force_out`
    /// points removed, on top of the existing exceptions. The two lists
    /// must not share points.
    pub fn override_with(&self, force_in: &[IntVec], force_out: &[IntVec]) -> Language {
        let base = self.base_halfspace().clone();
        let mut candidates: Vec<&IntVec> = Vec::new();
        candidates.extend(force_in.iter());
        candidates.extend(force_out.iter());
        if let Language::Patched(p) = self {
            candidates.extend(p.add.iter());
            candidates.extend(p.remove.iter());
        }
        let mut add = Vec::new();
        let mut remove = Vec::new();
        for p in candidates {
            let result = (self.member(p).expect("dimensions agree") || force_in.contains(p))
                && !force_out.contains(p);
            let in_base = base.member(p).expect("dimensions agree");
            if result && !in_base {
                add.push(p.clone());
            } else if !result && in_base {
                remove.push(p.clone());
            }
        }
        Language::patched(base, &add, &remove)
    }

    /// Canonical textual form, stable across runs; inverse of [`Language::parse`].
    pub fn tag(&self) -> String {
        use core::fmt::Write;
        fn hs_tag(out: &mut String, h: &HalfSpace) {
            out.push_str("hs ");
            for (i, c) in h.normal().coords().iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                let _ = write!(out, "{}", c);
            }
            let _ = write!(out, ";{}", h.floor_offset());
        }
        let mut out = String::new();
        match self {
            Language::HalfSpace(h) => hs_tag(&mut out, h),
            Language::Patched(p) => {
                out.push_str("patched ");
                hs_tag(&mut out, &p.base);
                out.push_str(" add=");
                for pt in &p.add {
                    out.push_str(&pt.display());
                }
                out.push_str(" remove=");
                for pt in &p.remove {
                    out.push_str(&pt.display());
                }
            }
        }
        out
    }

    /// Parses [`Language::tag`] output.
    pub fn parse(tag: &str) -> Option<Language> {
        fn parse_int(s: &str) -> Option<Int> {
            use core::str::FromStr;
            Int::from_str(s.trim()).ok()
        }
        fn parse_hs(s: &str) -> Option<HalfSpace> {
            let rest = s.strip_prefix("hs ")?;
            let (coords, floor) = rest.split_once(';')?;
            let normal: Option<Vec<Int>> = coords.split(',').map(parse_int).collect();
            HalfSpace::new(IntVec::new(normal?), parse_int(floor)?).ok()
        }
        fn parse_points(s: &str) -> Option<Vec<IntVec>> {
            let mut out = Vec::new();
            let mut rest = s;
            while !rest.is_empty() {
                let rest2 = rest.strip_prefix('(')?;
                let (body, tail) = rest2.split_once(')')?;
                let coords: Option<Vec<Int>> = body.split(',').map(parse_int).collect();
                out.push(IntVec::new(coords?));
                rest = tail;
            }
            Some(out)
        }
        if let Some(rest) = tag.strip_prefix("patched ") {
            let (hs_part, patches) = rest.split_once(" add=")?;
            let (add_part, remove_part) = patches.split_once(" remove=")?;
            let base = parse_hs(hs_part)?;
            let add = parse_points(add_part)?;
            let remove = parse_points(remove_part)?;
            Some(Language::patched(base, &add, &remove))
        } else {
            parse_hs(tag).map(Language::HalfSpace)
        }
    }
}

/// The iterative learner contract: the hypothesis is the entire memory.
pub trait IterativeLearner {
    type Hypothesis: Clone + PartialEq;

    /// Ambient dimension of the data this learner consumes.
    fn dim(&self) -> usize;

    /// Hypothesis before any datum has been seen.
    fn initial(&self) -> Self::Hypothesis;

    /// Next hypothesis from the current one and the newest datum alone.
    fn step(
        &self,
        hyp: &Self::Hypothesis,
        datum: &Datum,
    ) -> Result<Self::Hypothesis, LearnerError>;

    /// Deterministic identity string; equal iff the hypotheses are equal.
    fn hypothesis_id(&self, hyp: &Self::Hypothesis) -> String;

    /// The language the hypothesis denotes.
    fn language(&self, hyp: &Self::Hypothesis) -> Language;

    fn mode(&self, hyp: &Self::Hypothesis) -> Mode;
}
