//! Learner transforms.
//!
//! [`CannyLearner`] rebuilds the wrapped learner's run from only the data
//! that caused mind changes; a point that has appeared once is never acted
//! on again, so no datum can cause two mind changes.
//!
//! [`WitnessLearner`] accumulates the data that caused mind changes and
//! forces their labels into the hypothesis semantics, so that every
//! abandoned language visibly conflicts with some recorded datum.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use super::{Datum, IterativeLearner, Language, LearnerError, Mode};
use crate::lattice::IntVec;
use crate::mix::fnv1a64;

fn fingerprint<'a>(data: impl Iterator<Item = &'a Datum>) -> u64 {
    let mut bytes = Vec::new();
    for d in data {
        bytes.extend_from_slice(d.point.display().as_bytes());
        bytes.push(if d.positive { b'+' } else { b'-' });
    }
    fnv1a64(&bytes)
}

/// Hypothesis of the canny wrapper: the retained subsequence of
/// mind-change-causing data, plus the wrapped learner's state after
/// replaying exactly that subsequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CannyHypothesis<H> {
    sigma: Vec<Datum>,
    inner: H,
}

impl<H> CannyHypothesis<H> {
    /// The retained mind-change subsequence, in arrival order.
    pub fn retained(&self) -> &[Datum] {
        &self.sigma
    }

    pub fn inner(&self) -> &H {
        &self.inner
    }
}

/// Wraps a learner so that no datum causes two mind changes: data whose
/// point already occurs in the retained subsequence are ignored, data that
/// do not change the wrapped learner's mind are forgotten, and only
/// mind-change-causing data extend the retained subsequence.
pub struct CannyLearner<M> {
    inner: M,
}

impl<M> CannyLearner<M> {
    pub fn new(inner: M) -> Self {
        CannyLearner { inner }
    }
}

impl<M: IterativeLearner> IterativeLearner for CannyLearner<M> {
    type Hypothesis = CannyHypothesis<M::Hypothesis>;

    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn initial(&self) -> Self::Hypothesis {
        CannyHypothesis {
            sigma: Vec::new(),
            inner: self.inner.initial(),
        }
    }

    fn step(
        &self,
        hyp: &Self::Hypothesis,
        datum: &Datum,
    ) -> Result<Self::Hypothesis, LearnerError> {
        if hyp.sigma.iter().any(|d| d.point == datum.point) {
            return Ok(hyp.clone());
        }
        let next = self.inner.step(&hyp.inner, datum)?;
        if next == hyp.inner {
            return Ok(hyp.clone());
        }
        let mut sigma = hyp.sigma.clone();
        sigma.push(datum.clone());
        Ok(CannyHypothesis { sigma, inner: next })
    }

    fn hypothesis_id(&self, hyp: &Self::Hypothesis) -> String {
        use core::fmt::Write;
        let mut out = String::new();
        let _ = write!(
            out,
            "canny:{}:{:016x}",
            hyp.sigma.len(),
            fingerprint(hyp.sigma.iter())
        );
        out
    }

    fn language(&self, hyp: &Self::Hypothesis) -> Language {
        self.inner.language(&hyp.inner)
    }

    fn mode(&self, hyp: &Self::Hypothesis) -> Mode {
        self.inner.mode(&hyp.inner)
    }
}

/// Hypothesis of the witness wrapper: the wrapped learner's state plus the
/// set of mind-change witnesses folded into the semantics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessHypothesis<H> {
    inner: H,
    witnesses: BTreeSet<Datum>,
}

impl<H> WitnessHypothesis<H> {
    pub fn witnesses(&self) -> &BTreeSet<Datum> {
        &self.witnesses
    }

    pub fn inner(&self) -> &H {
        &self.inner
    }
}

/// Wraps a learner so every mind change records its triggering datum; the
/// hypothesis denotes the wrapped language with all recorded positive
/// witnesses forced in and negative ones forced out. Data already recorded
/// are skipped entirely.
pub struct WitnessLearner<M> {
    inner: M,
}

impl<M> WitnessLearner<M> {
    pub fn new(inner: M) -> Self {
        WitnessLearner { inner }
    }
}

impl<M: IterativeLearner> IterativeLearner for WitnessLearner<M> {
    type Hypothesis = WitnessHypothesis<M::Hypothesis>;

    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn initial(&self) -> Self::Hypothesis {
        WitnessHypothesis {
            inner: self.inner.initial(),
            witnesses: BTreeSet::new(),
        }
    }

    fn step(
        &self,
        hyp: &Self::Hypothesis,
        datum: &Datum,
    ) -> Result<Self::Hypothesis, LearnerError> {
        if hyp.witnesses.contains(datum) {
            return Ok(hyp.clone());
        }
        let next = self.inner.step(&hyp.inner, datum)?;
        if next == hyp.inner {
            return Ok(hyp.clone());
        }
        let mut witnesses = hyp.witnesses.clone();
        witnesses.insert(datum.clone());
        Ok(WitnessHypothesis {
            inner: next,
            witnesses,
        })
    }

    fn hypothesis_id(&self, hyp: &Self::Hypothesis) -> String {
        use core::fmt::Write;
        let mut out = String::new();
        let _ = write!(
            out,
            "wb:{:016x}:",
            fingerprint(hyp.witnesses.iter())
        );
        out.push_str(&self.inner.hypothesis_id(&hyp.inner));
        out
    }

    fn language(&self, hyp: &Self::Hypothesis) -> Language {
        let force_in: Vec<IntVec> = hyp
            .witnesses
            .iter()
            .filter(|d| d.positive)
            .map(|d| d.point.clone())
            .collect();
        let force_out: Vec<IntVec> = hyp
            .witnesses
            .iter()
            .filter(|d| !d.positive)
            .map(|d| d.point.clone())
            .collect();
        self.inner
            .language(&hyp.inner)
            .override_with(&force_in, &force_out)
    }

    fn mode(&self, hyp: &Self::Hypothesis) -> Mode {
        self.inner.mode(&hyp.inner)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::HalfSpace;
    use crate::learners::HalfSpaceLearner;

    fn dat(coords: &[i64], positive: bool) -> Datum {
        Datum::new(IntVec::from_i64s(coords), positive)
    }

    #[test]
    fn canny_ignores_repeated_point() {
        let learner = CannyLearner::new(HalfSpaceLearner::new(2));
        let mut h = learner.initial();
        let d = dat(&[2, 1], true);
        h = learner.step(&h, &d).unwrap();
        let id_after = learner.hypothesis_id(&h);
        // the same point never changes the wrapped hypothesis again,
        // under either label
        let again = learner.step(&h, &d).unwrap();
        assert_eq!(learner.hypothesis_id(&again), id_after);
        assert_eq!(again, h);
    }

    #[test]
    fn canny_tracks_inner_mind_changes_only() {
        let inner = HalfSpaceLearner::new(2);
        let learner = CannyLearner::new(inner);
        let mut h = learner.initial();
        for d in [
            dat(&[0, 0], true),
            dat(&[1, 0], true),
            dat(&[0, -1], false),
            dat(&[1, -1], false),
        ] {
            h = learner.step(&h, &d).unwrap();
        }
        assert_eq!(learner.mode(&h), Mode::Locked);
        assert_eq!(h.retained().len(), 4);
        // a consistent datum does not extend the retained subsequence
        let h2 = learner.step(&h, &dat(&[9, 5], true)).unwrap();
        assert_eq!(h2.retained().len(), 4);
    }

    #[test]
    fn witness_empty_matches_inner_semantics() {
        let learner = WitnessLearner::new(HalfSpaceLearner::new(2));
        let h = learner.initial();
        assert_eq!(
            learner.language(&h),
            Language::HalfSpace(HalfSpace::dummy(2))
        );
    }

    #[test]
    fn witness_forces_recorded_labels() {
        let learner = WitnessLearner::new(HalfSpaceLearner::new(2));
        let mut h = learner.initial();
        // (0,-1) is outside the placeholder language; the mind change it
        // causes records it, so membership flips to forced-positive
        h = learner.step(&h, &dat(&[0, -1], true)).unwrap();
        let lang = learner.language(&h);
        assert!(lang.member(&IntVec::from_i64s(&[0, -1])).unwrap());
        assert!(matches!(lang, Language::Patched(_)));
        // a recorded datum is skipped entirely
        let h2 = learner.step(&h, &dat(&[0, -1], true)).unwrap();
        assert_eq!(h2, h);
    }
}
