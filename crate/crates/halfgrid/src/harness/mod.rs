//! Run loop, trace recording, behavioral validators, the enumeration
//! oracle, indexed language fixtures, and brute-force geometry oracles.
//!
//! The harness is a referee, not a learner: convergence is judged
//! semantically against the known target, which finite prefixes alone
//! could never decide. Plain hypothesis stabilization without semantic
//! correctness is reported separately.

pub mod enumerate;
pub mod oracle;
pub mod validate;

pub use enumerate::{fixtures, Enumerator, IndexedFamily};
pub use oracle::{gap_oracle, jdist_oracle, lock_oracle};
pub use validate::{validate, Adapter, Restriction, RestrictionVerdict};

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::lattice::{min_parallel_distance_sq, Rat};
use crate::learners::{Datum, IterativeLearner, Language, LearnerError, Mode};
use crate::streams::StreamSpec;

/// Crate version string recorded in trace metadata.
pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");
/// Name of the canonical enumeration order of the lattice.
pub const ORDER_NAME: &str = "maxnorm-shell-lex";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HarnessError {
    /// The learner failed at the given step.
    Learner { at: usize, source: LearnerError },
    /// A validator needed an exact decider that the adapter does not
    /// supply, and no bounded-check radius was given either.
    AdapterInsufficient(&'static str),
    /// A trace carries a language tag the adapter cannot interpret.
    UnknownLanguageTag(String),
    /// The enumeration search walked past its index budget.
    BudgetExceeded { budget: u64 },
    /// A brute-force oracle was asked to search beyond desk scale.
    BoundsExceeded(&'static str),
    /// A trace violates the well-formedness the validators assume.
    MalformedTrace(&'static str),
}

impl fmt::Display for HarnessError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HarnessError::Learner { at, source } => write!(f, "learner failed at step {at}: {source}"),
            HarnessError::AdapterInsufficient(what) => {
                write!(f, "adapter insufficient: {what}")
            }
            HarnessError::UnknownLanguageTag(tag) => write!(f, "unknown language tag: {tag}"),
            HarnessError::BudgetExceeded { budget } => {
                write!(f, "enumeration exceeded index budget {budget}")
            }
            HarnessError::BoundsExceeded(what) => write!(f, "oracle bounds exceeded: {what}"),
            HarnessError::MalformedTrace(what) => write!(f, "malformed trace: {what}"),
        }
    }
}

/// One hypothesis as recorded in a trace: identity, denoted language,
/// phase, and the squared distance of the separating pair when locked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypothesisRecord {
    pub id: String,
    pub language_tag: String,
    pub mode: Mode,
    pub lock_dist_sq: Option<Rat>,
}

fn record<L: IterativeLearner>(learner: &L, hyp: &L::Hypothesis) -> HypothesisRecord {
    let mode = learner.mode(hyp);
    let language = learner.language(hyp);
    let lock_dist_sq = match mode {
        Mode::Locked => Some(
            min_parallel_distance_sq(language.base_halfspace().normal())
                .expect("lock normals are primitive"),
        ),
        Mode::Open => None,
    };
    HypothesisRecord {
        id: learner.hypothesis_id(hyp),
        language_tag: language.tag(),
        mode,
        lock_dist_sq,
    }
}

/// One step of a run: the datum consumed at time `t` and the hypothesis
/// the learner held afterwards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub t: usize,
    pub datum: Datum,
    pub hyp: HypothesisRecord,
}

/// Everything needed to replay a run bit-exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceMeta {
    pub dim: usize,
    pub learner: String,
    pub stream: StreamSpec,
    pub pairing: String,
    pub order: String,
    pub version: String,
    pub initial: HypothesisRecord,
}

/// A time-indexed record of a run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub meta: TraceMeta,
    pub steps: Vec<TraceStep>,
}

impl Trace {
    /// Hypotheses indexed by time: entry `i` is the hypothesis after `i`
    /// data, entry 0 the initial one.
    pub fn hypotheses(&self) -> Vec<&HypothesisRecord> {
        let mut out = Vec::with_capacity(self.steps.len() + 1);
        out.push(&self.meta.initial);
        out.extend(self.steps.iter().map(|s| &s.hyp));
        out
    }

    /// Squared lock distances, one per entry into the locked phase, in
    /// order of occurrence.
    pub fn lock_episodes(&self) -> Vec<Rat> {
        let hyps = self.hypotheses();
        let mut out = Vec::new();
        for pair in hyps.windows(2) {
            if pair[0].mode == Mode::Open && pair[1].mode == Mode::Locked {
                out.push(
                    pair[1]
                        .lock_dist_sq
                        .clone()
                        .expect("locked records carry a distance"),
                );
            }
        }
        out
    }
}

/// Outcome of the convergence referee.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// The hypothesis first emitted at step `at` was held for the full
    /// window and denotes exactly the target language.
    Converged { at: usize },
    /// The run ended without semantic convergence; if the identity was
    /// nevertheless stable for a full window, the step where the final
    /// hypothesis was first emitted is reported.
    NotConverged { syntactic_stable: Option<usize> },
}

impl Verdict {
    pub fn converged(&self) -> bool {
        matches!(self, Verdict::Converged { .. })
    }
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub trace: Trace,
    pub verdict: Verdict,
    /// Number of entries into the locked phase.
    pub lock_count: usize,
    /// Language of the last hypothesis.
    pub final_language: Language,
}

/// Feeds the learner from the stream until it has held one hypothesis
/// identity for `window` consecutive steps *and* that hypothesis denotes
/// the target language, or `max_steps` data have been consumed.
///
/// Learner errors abort the run and carry the offending step index.
pub fn run<L: IterativeLearner>(
    learner: &L,
    learner_name: &str,
    spec: &StreamSpec,
    max_steps: usize,
    window: usize,
) -> Result<RunOutcome, HarnessError> {
    assert!(window >= 1, "convergence window must be at least 1");
    let target = Language::HalfSpace(spec.target.clone());
    let mut hyp = learner.initial();
    let initial = record(learner, &hyp);
    let mut steps: Vec<TraceStep> = Vec::new();
    let mut lock_count = 0usize;
    let mut last_mode = initial.mode;
    let mut current_id = initial.id.clone();
    let mut streak_start = 0usize; // step index where the current id began
    let mut verdict = Verdict::NotConverged {
        syntactic_stable: None,
    };
    let mut stream = spec.iter();
    let mut matches_target: Option<bool> = None;

    for t in 0..max_steps {
        let datum = stream.next().expect("streams are infinite");
        hyp = learner
            .step(&hyp, &datum)
            .map_err(|source| HarnessError::Learner { at: t, source })?;
        let rec = record(learner, &hyp);
        if rec.mode == Mode::Locked && last_mode == Mode::Open {
            lock_count += 1;
        }
        last_mode = rec.mode;
        if rec.id != current_id {
            current_id = rec.id.clone();
            streak_start = t;
            matches_target = None;
        }
        steps.push(TraceStep { t, datum, hyp: rec });
        let streak = t - streak_start + 1;
        if streak >= window {
            let ok = *matches_target.get_or_insert_with(|| {
                learner
                    .language(&hyp)
                    .equal(&target)
                    .expect("run and target share a dimension")
            });
            if ok {
                verdict = Verdict::Converged { at: streak_start };
                break;
            }
        }
    }

    if !verdict.converged() && !steps.is_empty() {
        let streak = steps.len() - streak_start;
        if streak >= window {
            verdict = Verdict::NotConverged {
                syntactic_stable: Some(streak_start),
            };
        }
    }

    let final_language = learner.language(&hyp);
    let trace = Trace {
        meta: TraceMeta {
            dim: spec.dim(),
            learner: String::from(learner_name),
            stream: spec.clone(),
            pairing: String::from(crate::codec::PAIRING_NAME),
            order: String::from(ORDER_NAME),
            version: String::from(CODE_VERSION),
            initial,
        },
        steps,
    };
    Ok(RunOutcome {
        trace,
        verdict,
        lock_count,
        final_language,
    })
}
