//! Validators for behavioral restrictions of learning processes.
//!
//! Each validator checks one universally quantified condition over the
//! hypothesis sequence `h_0, ..., h_T` of a trace (`h_t` is the hypothesis
//! after `t` data). Syntactic conditions compare hypothesis identities;
//! semantic ones compare denoted languages through a [`Adapter`], either
//! with exact deciders or, when only membership is available, bounded to a
//! box of configurable radius — in which case a clean result is reported
//! as `BoundedPass`, never as an exact `Pass`.
//!
//! Failures carry the lexicographically least witnessing index triple
//! `(r, s, t)`; conditions over fewer indices repeat one of them.
//!
//! Finite-trace reading of the limit conditions: the positive content of
//! the whole trace stands in for the positive content of the infinite
//! presentation, and a hypothesis counts as "successful" when it labels
//! every datum of the trace correctly.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::ToString;
use alloc::vec::Vec;
use core::cell::{Cell, RefCell};

use super::{HarnessError, HypothesisRecord, Trace};
use crate::lattice::{Int, IntVec};
use crate::learners::Language;

/// The twelve checkable restrictions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Restriction {
    /// Never abandon a hypothesis consistent with all data seen.
    Conservative,
    /// Never return to a semantically abandoned language.
    Decisive,
    /// Never move to a proper subset of an earlier language.
    Cautious,
    /// While consistent, only grow the language.
    WeaklyMonotonic,
    /// Positive content, once covered, stays covered.
    Monotonic,
    /// Languages only ever grow.
    StronglyMonotonic,
    /// Never abandon and later re-adopt the correct language.
    NonUShaped,
    /// As non-U-shaped, but the return must be syntactic.
    StronglyNonUShaped,
    /// As decisive, but the return must be syntactic.
    StronglyDecisive,
    /// Every mind change is justified by the datum that caused it.
    LocallyConservative,
    /// Every mind change is witnessed by a previously seen datum the two
    /// hypotheses classify differently.
    WitnessBased,
    /// No datum causes two mind changes.
    Canny,
}

impl Restriction {
    pub const ALL: [Restriction; 12] = [
        Restriction::Conservative,
        Restriction::Decisive,
        Restriction::Cautious,
        Restriction::WeaklyMonotonic,
        Restriction::Monotonic,
        Restriction::StronglyMonotonic,
        Restriction::NonUShaped,
        Restriction::StronglyNonUShaped,
        Restriction::StronglyDecisive,
        Restriction::LocallyConservative,
        Restriction::WitnessBased,
        Restriction::Canny,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            Restriction::Conservative => "conv",
            Restriction::Decisive => "dec",
            Restriction::Cautious => "caut",
            Restriction::WeaklyMonotonic => "wmon",
            Restriction::Monotonic => "mon",
            Restriction::StronglyMonotonic => "smon",
            Restriction::NonUShaped => "nu",
            Restriction::StronglyNonUShaped => "snu",
            Restriction::StronglyDecisive => "sdec",
            Restriction::LocallyConservative => "locconv",
            Restriction::WitnessBased => "wb",
            Restriction::Canny => "canny",
        }
    }

    pub fn parse(s: &str) -> Option<Restriction> {
        Restriction::ALL.iter().copied().find(|r| r.id() == s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RestrictionVerdict {
    Pass,
    /// No violation found, but some language comparison fell back to the
    /// bounded box of the given radius.
    BoundedPass { radius: u64 },
    Fail { r: usize, s: usize, t: usize },
}

impl RestrictionVerdict {
    pub fn passed(&self) -> bool {
        !matches!(self, RestrictionVerdict::Fail { .. })
    }
}

type MemberFn<'a> = dyn Fn(&str, &IntVec) -> Option<bool> + 'a;
type CompareFn<'a> = dyn Fn(&str, &str) -> Option<bool> + 'a;

/// Supplies the language deciders validators need. When the exact equality
/// or inclusion deciders are absent, comparisons fall back to membership
/// agreement over the max-norm box of radius `radius` (if given).
pub struct Adapter<'a> {
    member: Box<MemberFn<'a>>,
    equal: Option<Box<CompareFn<'a>>>,
    subset: Option<Box<CompareFn<'a>>>,
    radius: Option<u64>,
    dim: usize,
}

impl Adapter<'static> {
    /// Exact deciders for traces whose tags parse as [`Language`].
    pub fn exact(dim: usize) -> Self {
        Adapter {
            member: Box::new(|tag, p| Language::parse(tag)?.member(p).ok()),
            equal: Some(Box::new(|a, b| {
                Language::parse(a)?.equal(&Language::parse(b)?).ok()
            })),
            subset: Some(Box::new(|a, b| {
                Language::parse(a)?.subset(&Language::parse(b)?).ok()
            })),
            radius: None,
            dim,
        }
    }

    /// Membership-only deciders for the same tags; language comparisons
    /// are box-bounded.
    pub fn bounded(dim: usize, radius: u64) -> Self {
        Adapter {
            member: Box::new(|tag, p| Language::parse(tag)?.member(p).ok()),
            equal: None,
            subset: None,
            radius: Some(radius),
            dim,
        }
    }
}

impl<'a> Adapter<'a> {
    /// A custom membership decider (for hypothesis spaces that are not
    /// half-spaces), with optional bounded-comparison radius.
    pub fn custom(dim: usize, member: Box<MemberFn<'a>>, radius: Option<u64>) -> Self {
        Adapter {
            member,
            equal: None,
            subset: None,
            radius,
            dim,
        }
    }
}

fn for_each_box_point(dim: usize, radius: i64, f: &mut dyn FnMut(&IntVec) -> bool) -> bool {
    fn rec(coords: &mut Vec<Int>, dim: usize, radius: i64, f: &mut dyn FnMut(&IntVec) -> bool) -> bool {
        if coords.len() == dim {
            return f(&IntVec::new(coords.clone()));
        }
        for v in -radius..=radius {
            coords.push(Int::from(v));
            let keep_going = rec(coords, dim, radius, f);
            coords.pop();
            if !keep_going {
                return false;
            }
        }
        true
    }
    rec(&mut Vec::new(), dim, radius, f)
}

const NEVER: usize = usize::MAX;

struct Ctx<'a> {
    hyps: Vec<&'a HypothesisRecord>,
    steps: &'a [super::TraceStep],
    ids: Vec<usize>,
    sems: Vec<usize>,
    tags: Vec<&'a str>,
    adapter: &'a Adapter<'a>,
    bounded_used: Cell<bool>,
    memo_eq: RefCell<BTreeMap<(usize, usize), bool>>,
    memo_sub: RefCell<BTreeMap<(usize, usize), bool>>,
    memo_member: RefCell<BTreeMap<(usize, usize), bool>>,
    memo_first_bad: RefCell<BTreeMap<usize, usize>>,
    memo_witness: RefCell<BTreeMap<(usize, usize), usize>>,
}

impl<'a> Ctx<'a> {
    fn new(trace: &'a Trace, adapter: &'a Adapter<'a>) -> Result<Self, HarnessError> {
        for (i, step) in trace.steps.iter().enumerate() {
            if step.t != i {
                return Err(HarnessError::MalformedTrace("step indices must be 0,1,2,..."));
            }
            if (step.hyp.lock_dist_sq.is_some())
                != (step.hyp.mode == crate::learners::Mode::Locked)
            {
                return Err(HarnessError::MalformedTrace(
                    "lock distance present iff mode is locked",
                ));
            }
        }
        let hyps: Vec<&HypothesisRecord> = core::iter::once(&trace.meta.initial)
            .chain(trace.steps.iter().map(|s| &s.hyp))
            .collect();
        let mut id_classes: BTreeMap<&str, usize> = BTreeMap::new();
        let mut sem_classes: BTreeMap<&str, usize> = BTreeMap::new();
        let mut tags: Vec<&str> = Vec::new();
        let mut ids = Vec::with_capacity(hyps.len());
        let mut sems = Vec::with_capacity(hyps.len());
        for h in &hyps {
            let next_id = id_classes.len();
            ids.push(*id_classes.entry(h.id.as_str()).or_insert(next_id));
            let next_sem = sem_classes.len();
            let sem = *sem_classes.entry(h.language_tag.as_str()).or_insert_with(|| {
                tags.push(h.language_tag.as_str());
                next_sem
            });
            sems.push(sem);
        }
        Ok(Ctx {
            hyps,
            steps: &trace.steps,
            ids,
            sems,
            tags,
            adapter,
            bounded_used: Cell::new(false),
            memo_eq: RefCell::new(BTreeMap::new()),
            memo_sub: RefCell::new(BTreeMap::new()),
            memo_member: RefCell::new(BTreeMap::new()),
            memo_first_bad: RefCell::new(BTreeMap::new()),
            memo_witness: RefCell::new(BTreeMap::new()),
        })
    }

    fn len(&self) -> usize {
        self.hyps.len() // T + 1 hypothesis indices
    }

    fn raw_member(&self, sem: usize, p: &IntVec) -> Result<bool, HarnessError> {
        (self.adapter.member)(self.tags[sem], p)
            .ok_or_else(|| HarnessError::UnknownLanguageTag(self.tags[sem].to_string()))
    }

    /// Membership of the `step`-th datum point in language class `sem`.
    fn member_at(&self, sem: usize, step: usize) -> Result<bool, HarnessError> {
        if let Some(&v) = self.memo_member.borrow().get(&(sem, step)) {
            return Ok(v);
        }
        let v = self.raw_member(sem, &self.steps[step].datum.point)?;
        self.memo_member.borrow_mut().insert((sem, step), v);
        Ok(v)
    }

    fn bounded_compare(&self, a: usize, b: usize, equality: bool) -> Result<bool, HarnessError> {
        let Some(radius) = self.adapter.radius else {
            return Err(HarnessError::AdapterInsufficient(
                "semantic decider missing and no bounded radius given",
            ));
        };
        self.bounded_used.set(true);
        let mut ok = true;
        let mut failure: Option<HarnessError> = None;
        for_each_box_point(self.adapter.dim, radius as i64, &mut |p| {
            match (self.raw_member(a, p), self.raw_member(b, p)) {
                (Ok(ma), Ok(mb)) => {
                    let fine = if equality { ma == mb } else { !ma || mb };
                    if !fine {
                        ok = false;
                    }
                    fine
                }
                (Err(e), _) | (_, Err(e)) => {
                    failure = Some(e);
                    false
                }
            }
        });
        if let Some(e) = failure {
            return Err(e);
        }
        Ok(ok)
    }

    fn sem_equal(&self, a: usize, b: usize) -> Result<bool, HarnessError> {
        if a == b {
            return Ok(true);
        }
        let key = if a < b { (a, b) } else { (b, a) };
        if let Some(&v) = self.memo_eq.borrow().get(&key) {
            return Ok(v);
        }
        let v = if let Some(eq) = &self.adapter.equal {
            eq(self.tags[a], self.tags[b])
                .ok_or_else(|| HarnessError::UnknownLanguageTag(self.tags[a].to_string()))?
        } else if self.adapter.subset.is_some() {
            self.sem_subset(a, b)? && self.sem_subset(b, a)?
        } else {
            self.bounded_compare(a, b, true)?
        };
        self.memo_eq.borrow_mut().insert(key, v);
        Ok(v)
    }

    fn sem_subset(&self, a: usize, b: usize) -> Result<bool, HarnessError> {
        if a == b {
            return Ok(true);
        }
        if let Some(&v) = self.memo_sub.borrow().get(&(a, b)) {
            return Ok(v);
        }
        let v = if let Some(sub) = &self.adapter.subset {
            sub(self.tags[a], self.tags[b])
                .ok_or_else(|| HarnessError::UnknownLanguageTag(self.tags[a].to_string()))?
        } else {
            self.bounded_compare(a, b, false)?
        };
        self.memo_sub.borrow_mut().insert((a, b), v);
        Ok(v)
    }

    /// Index of the first datum the language class misclassifies, or
    /// `NEVER`. The class is consistent with the prefix `I[t]` iff this is
    /// at least `t`.
    fn first_bad(&self, sem: usize) -> Result<usize, HarnessError> {
        if let Some(&v) = self.memo_first_bad.borrow().get(&sem) {
            return Ok(v);
        }
        let mut v = NEVER;
        for (i, step) in self.steps.iter().enumerate() {
            if self.member_at(sem, i)? != step.datum.positive {
                v = i;
                break;
            }
        }
        self.memo_first_bad.borrow_mut().insert(sem, v);
        Ok(v)
    }

    /// Whether the class labels every datum of the trace correctly — the
    /// finite-trace stand-in for denoting the presented language.
    fn successful(&self, sem: usize) -> Result<bool, HarnessError> {
        Ok(self.first_bad(sem)? == NEVER)
    }

    /// Least datum index witnessing the mind change `old -> new`: a
    /// positive datum in `new` but not `old`, or a negative one in `old`
    /// but not `new`. `NEVER` when no datum of the trace witnesses it.
    fn first_witness(&self, old: usize, new: usize) -> Result<usize, HarnessError> {
        if let Some(&v) = self.memo_witness.borrow().get(&(old, new)) {
            return Ok(v);
        }
        let mut v = NEVER;
        for (i, step) in self.steps.iter().enumerate() {
            let in_old = self.member_at(old, i)?;
            let in_new = self.member_at(new, i)?;
            let witnesses = if step.datum.positive {
                in_new && !in_old
            } else {
                in_old && !in_new
            };
            if witnesses {
                v = i;
                break;
            }
        }
        self.memo_witness.borrow_mut().insert((old, new), v);
        Ok(v)
    }
}

type Found = Option<(usize, usize, usize)>;

/// Checks one restriction over a trace. `Fail` carries the least
/// witnessing triple in lexicographic order.
pub fn validate(
    trace: &Trace,
    restriction: Restriction,
    adapter: &Adapter<'_>,
) -> Result<RestrictionVerdict, HarnessError> {
    let ctx = Ctx::new(trace, adapter)?;
    let found = match restriction {
        Restriction::Conservative => conservative(&ctx)?,
        Restriction::Decisive => decisive(&ctx, false, false)?,
        Restriction::Cautious => cautious(&ctx)?,
        Restriction::WeaklyMonotonic => weakly_monotonic(&ctx)?,
        Restriction::Monotonic => monotonic(&ctx)?,
        Restriction::StronglyMonotonic => strongly_monotonic(&ctx)?,
        Restriction::NonUShaped => decisive(&ctx, true, false)?,
        Restriction::StronglyNonUShaped => decisive(&ctx, true, true)?,
        Restriction::StronglyDecisive => decisive(&ctx, false, true)?,
        Restriction::LocallyConservative => locally_conservative(&ctx)?,
        Restriction::WitnessBased => witness_based(&ctx)?,
        Restriction::Canny => canny(&ctx)?,
    };
    Ok(match found {
        Some((r, s, t)) => RestrictionVerdict::Fail { r, s, t },
        None if ctx.bounded_used.get() => RestrictionVerdict::BoundedPass {
            radius: adapter.radius.unwrap_or(0),
        },
        None => RestrictionVerdict::Pass,
    })
}

fn conservative(ctx: &Ctx<'_>) -> Result<Found, HarnessError> {
    for s in 0..ctx.len() {
        let horizon = ctx.first_bad(ctx.sems[s])?;
        for t in s..ctx.len() {
            // h_s is consistent with I[t] iff no datum before t is misread
            if t > horizon {
                break;
            }
            if ctx.ids[t] != ctx.ids[s] {
                return Ok(Some((s, s, t)));
            }
        }
    }
    Ok(None)
}

/// Shared engine for the four return-forbidding conditions. With
/// `only_successful`, premises are restricted to hypotheses that classify
/// the whole trace correctly; with `syntactic`, the condition inside the
/// revisit is identity equality rather than semantic equality.
fn decisive(ctx: &Ctx<'_>, only_successful: bool, syntactic: bool) -> Result<Found, HarnessError> {
    for r in 0..ctx.len() {
        if only_successful && !ctx.successful(ctx.sems[r])? {
            continue;
        }
        let mut first_departed: Option<usize> = None;
        for t in r..ctx.len() {
            if first_departed.is_none() {
                let departed = if syntactic {
                    ctx.ids[t] != ctx.ids[r]
                } else {
                    !ctx.sem_equal(ctx.sems[r], ctx.sems[t])?
                };
                if departed {
                    first_departed = Some(t);
                }
            }
            if let Some(s) = first_departed {
                if ctx.sem_equal(ctx.sems[r], ctx.sems[t])? {
                    return Ok(Some((r, s, t)));
                }
            }
        }
    }
    Ok(None)
}

fn cautious(ctx: &Ctx<'_>) -> Result<Found, HarnessError> {
    for s in 0..ctx.len() {
        for t in s..ctx.len() {
            let proper = ctx.sem_subset(ctx.sems[t], ctx.sems[s])?
                && !ctx.sem_subset(ctx.sems[s], ctx.sems[t])?;
            if proper {
                return Ok(Some((s, s, t)));
            }
        }
    }
    Ok(None)
}

fn weakly_monotonic(ctx: &Ctx<'_>) -> Result<Found, HarnessError> {
    for s in 0..ctx.len() {
        let horizon = ctx.first_bad(ctx.sems[s])?;
        for t in s..ctx.len() {
            if t > horizon {
                break;
            }
            if !ctx.sem_subset(ctx.sems[s], ctx.sems[t])? {
                return Ok(Some((s, s, t)));
            }
        }
    }
    Ok(None)
}

fn monotonic(ctx: &Ctx<'_>) -> Result<Found, HarnessError> {
    // distinct positive data points, by first occurrence
    let mut seen = BTreeMap::new();
    let mut pos_steps: Vec<usize> = Vec::new();
    for (i, step) in ctx.steps.iter().enumerate() {
        if step.datum.positive && seen.insert(&step.datum.point, ()).is_none() {
            pos_steps.push(i);
        }
    }
    let mut memo: BTreeMap<(usize, usize), bool> = BTreeMap::new();
    for s in 0..ctx.len() {
        for t in s..ctx.len() {
            let key = (ctx.sems[s], ctx.sems[t]);
            let fine = match memo.get(&key) {
                Some(&v) => v,
                None => {
                    let mut fine = true;
                    for &i in &pos_steps {
                        if ctx.member_at(key.0, i)? && !ctx.member_at(key.1, i)? {
                            fine = false;
                            break;
                        }
                    }
                    memo.insert(key, fine);
                    fine
                }
            };
            if !fine {
                return Ok(Some((s, s, t)));
            }
        }
    }
    Ok(None)
}

fn strongly_monotonic(ctx: &Ctx<'_>) -> Result<Found, HarnessError> {
    for s in 0..ctx.len() {
        for t in s..ctx.len() {
            if !ctx.sem_subset(ctx.sems[s], ctx.sems[t])? {
                return Ok(Some((s, s, t)));
            }
        }
    }
    Ok(None)
}

fn locally_conservative(ctx: &Ctx<'_>) -> Result<Found, HarnessError> {
    for t in 0..ctx.steps.len() {
        if ctx.ids[t] != ctx.ids[t + 1] {
            let justified = ctx.member_at(ctx.sems[t], t)? != ctx.steps[t].datum.positive;
            if !justified {
                return Ok(Some((t, t, t + 1)));
            }
        }
    }
    Ok(None)
}

#[allow(clippy::needless_range_loop)]
fn witness_based(ctx: &Ctx<'_>) -> Result<Found, HarnessError> {
    let n = ctx.len();
    for r in 0..n {
        // earliest witness index for the change from h_r to each h_t
        let mut arr: Vec<usize> = Vec::with_capacity(n);
        for t in 0..n {
            arr.push(ctx.first_witness(ctx.sems[r], ctx.sems[t])?);
        }
        // suffix maxima: the worst (latest-witnessed) revisit target
        let mut suffmax = alloc::vec![0usize; n + 1];
        suffmax[n] = 0;
        for t in (0..n).rev() {
            suffmax[t] = suffmax[t + 1].max(arr[t]);
        }
        for s in r + 1..n {
            if ctx.ids[s] == ctx.ids[r] {
                continue;
            }
            // some t >= s lacks a witness among the first s data?
            if suffmax[s] >= s {
                let t = (s..n).find(|&t| arr[t] >= s).expect("suffix max");
                return Ok(Some((r, s, t)));
            }
        }
    }
    Ok(None)
}

fn canny(ctx: &Ctx<'_>) -> Result<Found, HarnessError> {
    let mut caused: BTreeMap<(&IntVec, bool), usize> = BTreeMap::new();
    for t in 0..ctx.steps.len() {
        if ctx.ids[t] != ctx.ids[t + 1] {
            let key = (&ctx.steps[t].datum.point, ctx.steps[t].datum.positive);
            if let Some(&first) = caused.get(&key) {
                return Ok(Some((first, t, t + 1)));
            }
            caused.insert(key, t);
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{TraceMeta, TraceStep};
    use crate::lattice::{HalfSpace, IntVec};
    use crate::learners::{Datum, Mode};
    use crate::streams::{StreamKind, StreamSpec};
    use alloc::boxed::Box;
    use alloc::string::String;

    /// Builds a synthetic trace from labeled 2-D data and (id, tag) pairs;
    /// `hyps` has one more entry than `data` (the initial hypothesis).
    fn synth(data: &[(&[i64], bool)], hyps: &[(&str, &str)]) -> Trace {
        assert_eq!(hyps.len(), data.len() + 1);
        let rec = |(id, tag): &(&str, &str)| HypothesisRecord {
            id: String::from(*id),
            language_tag: String::from(*tag),
            mode: Mode::Open,
            lock_dist_sq: None,
        };
        Trace {
            meta: TraceMeta {
                dim: 2,
                learner: String::from("synthetic"),
                stream: StreamSpec::new(HalfSpace::dummy(2), StreamKind::Canonical, 0).unwrap(),
                pairing: String::from("cantor"),
                order: String::from("maxnorm-shell-lex"),
                version: String::from("test"),
                initial: rec(&hyps[0]),
            },
            steps: data
                .iter()
                .enumerate()
                .map(|(t, (coords, positive))| TraceStep {
                    t,
                    datum: Datum::new(IntVec::from_i64s(coords), *positive),
                    hyp: rec(&hyps[t + 1]),
                })
                .collect(),
        }
    }

    const X_GE_0: &str = "hs 1,0;0"; // x >= 0
    const X_GE_1: &str = "hs 1,0;-1"; // x >= 1
    const Y_GE_0: &str = "hs 0,1;0"; // y >= 0

    #[test]
    fn cautious_flags_proper_subset() {
        let trace = synth(&[(&[5, 5], true)], &[("a", X_GE_0), ("b", X_GE_1)]);
        let verdict = validate(&trace, Restriction::Cautious, &Adapter::exact(2)).unwrap();
        assert_eq!(verdict, RestrictionVerdict::Fail { r: 0, s: 0, t: 1 });
        // the reverse move is fine
        let growing = synth(&[(&[5, 5], true)], &[("a", X_GE_1), ("b", X_GE_0)]);
        let verdict = validate(&growing, Restriction::Cautious, &Adapter::exact(2)).unwrap();
        assert_eq!(verdict, RestrictionVerdict::Pass);
    }

    #[test]
    fn conservative_flags_unforced_change() {
        // datum (1,1) is consistent with x >= 0, yet the id changes
        let trace = synth(&[(&[1, 1], true)], &[("a", X_GE_0), ("b", X_GE_1)]);
        let verdict = validate(&trace, Restriction::Conservative, &Adapter::exact(2)).unwrap();
        assert_eq!(verdict, RestrictionVerdict::Fail { r: 0, s: 0, t: 1 });
        // a change forced by an inconsistent datum passes
        let forced = synth(&[(&[-2, 0], true)], &[("a", X_GE_0), ("b", Y_GE_0)]);
        let verdict = validate(&forced, Restriction::Conservative, &Adapter::exact(2)).unwrap();
        assert_eq!(verdict, RestrictionVerdict::Pass);
    }

    #[test]
    fn canny_flags_double_mind_change() {
        let trace = synth(
            &[(&[3, 3], true), (&[4, 4], true), (&[3, 3], true)],
            &[("a", X_GE_0), ("b", X_GE_0), ("b", X_GE_0), ("c", X_GE_0)],
        );
        let verdict = validate(&trace, Restriction::Canny, &Adapter::exact(2)).unwrap();
        assert_eq!(verdict, RestrictionVerdict::Fail { r: 0, s: 2, t: 3 });
    }

    #[test]
    fn locally_conservative_needs_justification() {
        // mind change on a datum the old hypothesis classified correctly
        let trace = synth(&[(&[1, 1], true)], &[("a", X_GE_0), ("b", Y_GE_0)]);
        let verdict =
            validate(&trace, Restriction::LocallyConservative, &Adapter::exact(2)).unwrap();
        assert_eq!(verdict, RestrictionVerdict::Fail { r: 0, s: 0, t: 1 });
    }

    #[test]
    fn witness_based_needs_separating_datum() {
        // change from x>=0 to y>=0 with only a datum both contain
        let trace = synth(&[(&[1, 1], true)], &[("a", X_GE_0), ("b", Y_GE_0)]);
        let verdict = validate(&trace, Restriction::WitnessBased, &Adapter::exact(2)).unwrap();
        assert_eq!(verdict, RestrictionVerdict::Fail { r: 0, s: 1, t: 1 });
        // with a datum only the new language contains, the change is witnessed
        let ok = synth(&[(&[-1, 1], true)], &[("a", X_GE_0), ("b", Y_GE_0)]);
        let verdict = validate(&ok, Restriction::WitnessBased, &Adapter::exact(2)).unwrap();
        assert_eq!(verdict, RestrictionVerdict::Pass);
    }

    #[test]
    fn strongly_decisive_spots_syntactic_return() {
        // same language throughout, but the id flaps a -> b -> a
        let trace = synth(
            &[(&[1, 1], true), (&[2, 2], true)],
            &[("a", X_GE_0), ("b", X_GE_0), ("a", X_GE_0)],
        );
        let verdict = validate(&trace, Restriction::StronglyDecisive, &Adapter::exact(2)).unwrap();
        assert_eq!(verdict, RestrictionVerdict::Fail { r: 0, s: 1, t: 1 });
        let decisive_ok = validate(&trace, Restriction::Decisive, &Adapter::exact(2)).unwrap();
        assert_eq!(decisive_ok, RestrictionVerdict::Pass);
    }

    #[test]
    fn bounded_adapter_reports_bounded_pass() {
        let trace = synth(&[(&[1, 1], true)], &[("a", X_GE_1), ("b", X_GE_0)]);
        let verdict =
            validate(&trace, Restriction::StronglyMonotonic, &Adapter::bounded(2, 6)).unwrap();
        assert_eq!(verdict, RestrictionVerdict::BoundedPass { radius: 6 });
        // and still finds genuine violations
        let shrink = synth(&[(&[1, 1], true)], &[("a", X_GE_0), ("b", X_GE_1)]);
        let verdict =
            validate(&shrink, Restriction::StronglyMonotonic, &Adapter::bounded(2, 6)).unwrap();
        assert_eq!(verdict, RestrictionVerdict::Fail { r: 0, s: 0, t: 1 });
    }

    #[test]
    fn failures_survive_trace_extension() {
        // verdicts are monotone in prefixes: extending a violating trace
        // never turns its FAIL into a PASS
        let mut trace = synth(&[(&[5, 5], true)], &[("a", X_GE_0), ("b", X_GE_1)]);
        let fail = validate(&trace, Restriction::Cautious, &Adapter::exact(2)).unwrap();
        assert!(matches!(fail, RestrictionVerdict::Fail { .. }));
        for extra in 0..4 {
            trace.steps.push(TraceStep {
                t: trace.steps.len(),
                datum: Datum::new(IntVec::from_i64s(&[6 + extra, 6]), true),
                hyp: trace.steps.last().unwrap().hyp.clone(),
            });
            let again = validate(&trace, Restriction::Cautious, &Adapter::exact(2)).unwrap();
            assert_eq!(again, fail, "extension changed the verdict");
        }
    }

    #[test]
    fn missing_deciders_are_an_error() {
        let trace = synth(&[(&[1, 1], true)], &[("a", X_GE_0), ("b", X_GE_1)]);
        let adapter = Adapter::custom(
            2,
            Box::new(|tag, p| Language::parse(tag)?.member(p).ok()),
            None,
        );
        let err = validate(&trace, Restriction::Cautious, &adapter);
        assert!(matches!(err, Err(HarnessError::AdapterInsufficient(_))));
        // membership-only restrictions still work without a radius
        let ok = validate(&trace, Restriction::Canny, &adapter).unwrap();
        assert_eq!(ok, RestrictionVerdict::Pass);
    }
}
