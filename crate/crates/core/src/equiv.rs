//! Equivalence checking of two operations by enumerating partial inputs
//! and comparing what each side can produce on them.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::analysis::{AnalysisError, Analyzer};
use crate::eval::{EvalConfig, EvalError, Evaluator, Reachability};
use crate::lang::{Annotation, Program, Signature, Type};
use crate::partial::{default_ring, enum_cmp, less_defined_eq, Enumerator, PartialError, PartialValue};

/// Type that instantiates every type variable of a checked signature.
pub const DEFAULT_ELEMENT_TYPE: &str = "Ordering";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EquivError {
    #[error("unknown operation {0}")]
    UnknownOperation(String),
    #[error("operation {0} has no type signature")]
    MissingSignature(String),
    #[error("signatures of {0} and {1} differ")]
    SignatureMismatch(String, String),
    #[error("{0} has no specification {0}'spec")]
    MissingSpec(String),
    #[error("{0} must take {1} arguments")]
    Arity(String, usize),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Partial(#[from] PartialError),
}

impl From<AnalysisError> for EquivError {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::UnknownOperation(o) => EquivError::UnknownOperation(o),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Mode {
    PartialTemplate,
    PartialSet,
    Ground,
}

/// Enumeration bounds and evaluation budgets shared by all tasks of a run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Bounds {
    /// Maximum total size of an input tuple.
    pub levels: usize,
    /// Maximum size of a result template.
    pub template_levels: usize,
    pub eval: EvalConfig,
    /// Skip tasks whose operations are not known to be productive.
    pub safe_mode: bool,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { levels: 6, template_levels: 6, eval: EvalConfig::default(), safe_mode: false }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivTask {
    pub lhs: String,
    pub rhs: String,
    pub annotation: Annotation,
    pub mode_override: Option<Mode>,
    pub bounds: Bounds,
}

impl EquivTask {
    pub fn new(lhs: &str, rhs: &str) -> EquivTask {
        EquivTask {
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            annotation: Annotation::None,
            mode_override: None,
            bounds: Bounds::default(),
        }
    }
}

/// What one side showed for the recorded test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Evidence {
    /// Whether the template is reachable.
    Reach(Reachability),
    /// The computed values.
    Values { values: Vec<PartialValue>, complete: bool },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub inputs: Vec<PartialValue>,
    pub template: Option<PartialValue>,
    pub lhs: Evidence,
    pub rhs: Evidence,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Outcome {
    EquivalentUpToBound { tests_run: u64 },
    Counterexample(Counterexample),
    Inconclusive { reason: String },
    Skipped { reason: String },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Stats {
    pub tests: u64,
    pub branches: u64,
    /// Tests where a budget prevented a decision.
    pub undecided: u64,
    /// Inputs rejected by a precondition.
    pub filtered_inputs: u64,
    #[serde(skip)]
    pub wall_time: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub mode: Mode,
    pub outcome: Outcome,
    pub stats: Stats,
}

impl Verdict {
    pub fn is_counterexample(&self) -> bool {
        matches!(self.outcome, Outcome::Counterexample(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModeChoice {
    pub mode: Mode,
    /// Set when safe mode refuses to run the task.
    pub skip: Option<String>,
}

/// Picks the checking mode for a task from the analyses and annotations.
pub fn select_mode(program: &Program, task: &EquivTask) -> Result<ModeChoice, EquivError> {
    let a = Analyzer::new(program);
    select_with(&a, task)
}

fn select_with(a: &Analyzer<'_>, task: &EquivTask) -> Result<ModeChoice, EquivError> {
    let (l, r) = (task.lhs.as_str(), task.rhs.as_str());
    let mode = match task.mode_override {
        Some(m) => m,
        None => {
            let well_behaved = |o: &str| -> Result<bool, EquivError> {
                Ok(a.totally_defined(o)?.is_proven() && a.deterministic(o)?.is_proven())
            };
            let trivial = l == r || (arity_of(a, l)? == 0 && arity_of(a, r)? == 0);
            if trivial && well_behaved(l)? && well_behaved(r)? {
                Mode::Ground
            } else if task.annotation == Annotation::Terminate
                || (a.termination(l)?.is_proven() && a.termination(r)?.is_proven())
            {
                Mode::PartialSet
            } else {
                Mode::PartialTemplate
            }
        }
    };
    let productive = task.annotation == Annotation::Productive
        || (a.productivity(l)?.is_proven() && a.productivity(r)?.is_proven());
    let skip = (task.bounds.safe_mode && mode == Mode::PartialTemplate && !productive)
        .then(|| "safe mode: productivity of the operations is not proven".to_string());
    Ok(ModeChoice { mode, skip })
}

fn arity_of(a: &Analyzer<'_>, op: &str) -> Result<usize, EquivError> {
    a.program().op(op).map(|o| o.arity()).ok_or_else(|| EquivError::UnknownOperation(op.to_string()))
}

/// Instantiated parameter and result types of an operation.
fn instantiated(program: &Program, op: &str) -> Result<Signature, EquivError> {
    let decl = program.op(op).ok_or_else(|| EquivError::UnknownOperation(op.to_string()))?;
    let sig = decl.signature.as_ref().ok_or_else(|| EquivError::MissingSignature(op.to_string()))?;
    Ok(sig.subst(&|_| Some(Type::con(DEFAULT_ELEMENT_TYPE))))
}

fn matching_signature(program: &Program, l: &str, r: &str) -> Result<Signature, EquivError> {
    let sl = instantiated(program, l)?;
    let sr = instantiated(program, r)?;
    if sl != sr {
        return Err(EquivError::SignatureMismatch(l.to_string(), r.to_string()));
    }
    Ok(sl)
}

enum Cmp {
    Agree,
    Undecided,
    /// A value only one side has.
    Disagree(PartialValue),
}

/// Decides whether the inputs pass a precondition.
type Filter<'a> = &'a dyn Fn(&[PartialValue]) -> Result<bool, EquivError>;

struct Run<'p> {
    program: &'p Program,
    ev: Evaluator,
    task: &'p EquivTask,
    sig: Signature,
    stats: Stats,
}

impl<'p> Run<'p> {
    fn new(program: &'p Program, task: &'p EquivTask) -> Result<Run<'p>, EquivError> {
        let sig = matching_signature(program, &task.lhs, &task.rhs)?;
        let ev = Evaluator::new(program, &task.bounds.eval)?;
        Ok(Run { program, ev, task, sig, stats: Stats::default() })
    }

    fn inputs(&self) -> Result<Vec<Vec<PartialValue>>, EquivError> {
        let mut e = Enumerator::new(self.program, default_ring(self.task.bounds.levels.max(1)));
        self.sig.params.iter().try_for_each(|t| e.check_type(t))?;
        Ok(e.tuples_up_to(&self.sig.params, self.task.bounds.levels))
    }

    fn reach(&self, op: &str, inputs: &[PartialValue], t: &PartialValue) -> Result<Reachability, EquivError> {
        Ok(self.ev.call_reach(op, inputs, t)?.0)
    }

    /// Replays a test; returns the one-sided evidence if it still disagrees.
    fn disagrees(&self, inputs: &[PartialValue], t: &PartialValue) -> Result<Option<(Reachability, Reachability)>, EquivError> {
        let l = self.reach(&self.task.lhs, inputs, t)?;
        let r = self.reach(&self.task.rhs, inputs, t)?;
        Ok(match (l, r) {
            (Reachability::Yes, Reachability::No) | (Reachability::No, Reachability::Yes) => Some((l, r)),
            _ => None,
        })
    }

    fn counterexample(
        &self,
        inputs: Vec<PartialValue>,
        t: PartialValue,
        filter: Filter<'_>,
    ) -> Result<Option<Counterexample>, EquivError> {
        if self.disagrees(&inputs, &t)?.is_none() {
            return Ok(None);
        }
        let (inputs, t) = self.minimize(inputs, t, filter)?;
        let (l, r) = self.disagrees(&inputs, &t)?.expect("minimization keeps the disagreement");
        Ok(Some(Counterexample { inputs, template: Some(t), lhs: Evidence::Reach(l), rhs: Evidence::Reach(r) }))
    }

    /// Greedily replaces subtrees by ⊥ while the disagreement persists.
    fn minimize(
        &self,
        mut inputs: Vec<PartialValue>,
        mut t: PartialValue,
        filter: Filter<'_>,
    ) -> Result<(Vec<PartialValue>, PartialValue), EquivError> {
        'again: loop {
            for k in 0..=inputs.len() {
                let target = if k < inputs.len() { &inputs[k] } else { &t };
                for path in target.defined_positions() {
                    let mut ci = inputs.clone();
                    let mut ct = t.clone();
                    if k < inputs.len() {
                        ci[k] = ci[k].bottom_at(&path);
                        if !filter(&ci)? {
                            continue;
                        }
                    } else {
                        ct = ct.bottom_at(&path);
                    }
                    if self.disagrees(&ci, &ct)?.is_some() {
                        inputs = ci;
                        t = ct;
                        continue 'again;
                    }
                }
            }
            return Ok((inputs, t));
        }
    }

    fn accepted(&mut self, cache: &mut HashMap<usize, bool>, i: usize, inp: &[PartialValue], filter: Filter<'_>) -> Result<bool, EquivError> {
        if let Some(&b) = cache.get(&i) {
            return Ok(b);
        }
        let b = filter(inp)?;
        if !b {
            self.stats.filtered_inputs += 1;
        }
        cache.insert(i, b);
        Ok(b)
    }

    fn template_mode(&mut self, filter: Filter<'_>) -> Result<Outcome, EquivError> {
        let inputs = self.inputs()?;
        let tl = self.task.bounds.template_levels;
        let mut te = Enumerator::new(self.program, vec![0]);
        te.check_type(&self.sig.result)?;
        let templates: Vec<_> = (0..=tl).map(|s| te.exact(&self.sig.result, s)).collect();
        let mut cache = HashMap::new();
        let (lhs, rhs) = (self.task.lhs.clone(), self.task.rhs.clone());
        for total in 1..=self.task.bounds.levels + tl {
            for (i, inp) in inputs.iter().enumerate() {
                let s: usize = inp.iter().map(|x| x.size()).sum();
                if s >= total || total - s > tl {
                    continue;
                }
                if !self.accepted(&mut cache, i, inp, filter)? {
                    continue;
                }
                for skel in templates[total - s].iter() {
                    self.stats.tests += 1;
                    let l = self.ev.call_instances(&lhs, inp, skel)?;
                    let r = self.ev.call_instances(&rhs, inp, skel)?;
                    self.stats.branches += l.branches + r.branches;
                    let holes = has_int(skel);
                    let sat_l = l.complete || (!holes && !l.results.is_empty());
                    let sat_r = r.complete || (!holes && !r.results.is_empty());
                    match compare_exact(&l.results, &r.results, sat_l, sat_r) {
                        Cmp::Agree => {}
                        Cmp::Undecided => self.stats.undecided += 1,
                        Cmp::Disagree(t) => match self.counterexample(inp.clone(), t, filter)? {
                            Some(c) => return Ok(Outcome::Counterexample(c)),
                            None => self.stats.undecided += 1,
                        },
                    }
                }
            }
        }
        Ok(self.finish())
    }

    fn set_mode(&mut self, filter: Filter<'_>) -> Result<Outcome, EquivError> {
        let inputs = self.inputs()?;
        let (lhs, rhs) = (self.task.lhs.clone(), self.task.rhs.clone());
        let mut cache = HashMap::new();
        for (i, inp) in inputs.iter().enumerate() {
            if !self.accepted(&mut cache, i, inp, filter)? {
                continue;
            }
            self.stats.tests += 1;
            let l = self.ev.call_maximal(&lhs, inp)?;
            let r = self.ev.call_maximal(&rhs, inp)?;
            self.stats.branches += l.branches + r.branches;
            let mut lv: Vec<_> = l.results.iter().cloned().collect();
            let mut rv: Vec<_> = r.results.iter().cloned().collect();
            lv.sort_by(|a, b| enum_cmp(self.program, a, b));
            rv.sort_by(|a, b| enum_cmp(self.program, a, b));
            let uncovered = |xs: &[PartialValue], ys: &[PartialValue]| {
                xs.iter().find(|x| !ys.iter().any(|y| less_defined_eq(x, y))).cloned()
            };
            let witness = match (uncovered(&lv, &rv), uncovered(&rv, &lv)) {
                (Some(t), _) if r.complete => Some(t),
                (_, Some(t)) if l.complete => Some(t),
                (None, None) if l.complete && r.complete => None,
                _ => {
                    self.stats.undecided += 1;
                    None
                }
            };
            if let Some(t) = witness {
                match self.counterexample(inp.clone(), t, filter)? {
                    Some(c) => return Ok(Outcome::Counterexample(c)),
                    None => self.stats.undecided += 1,
                }
            }
        }
        Ok(self.finish())
    }

    fn ground_mode(&mut self, filter: Filter<'_>) -> Result<Outcome, EquivError> {
        let inputs = self.inputs()?;
        let (lhs, rhs) = (self.task.lhs.clone(), self.task.rhs.clone());
        let mut cache = HashMap::new();
        for (i, inp) in inputs.iter().enumerate() {
            if !inp.iter().all(PartialValue::is_total) || !self.accepted(&mut cache, i, inp, filter)? {
                continue;
            }
            self.stats.tests += 1;
            let (l, bl) = self.ev.call_values(&lhs, inp)?;
            let (r, br) = self.ev.call_values(&rhs, inp)?;
            self.stats.branches += bl + br;
            match compare_exact(&l.outcomes, &r.outcomes, l.complete, r.complete) {
                Cmp::Agree => {}
                Cmp::Undecided => self.stats.undecided += 1,
                Cmp::Disagree(_) => {
                    let ev = |o: &crate::eval::OutcomeSet| Evidence::Values {
                        values: o.outcomes.iter().cloned().collect(),
                        complete: o.complete,
                    };
                    return Ok(Outcome::Counterexample(Counterexample {
                        inputs: inp.clone(),
                        template: None,
                        lhs: ev(&l),
                        rhs: ev(&r),
                    }));
                }
            }
        }
        Ok(self.finish())
    }

    fn finish(&self) -> Outcome {
        if self.stats.undecided > 0 {
            Outcome::Inconclusive {
                reason: format!("{} of {} tests exhausted a budget", self.stats.undecided, self.stats.tests),
            }
        } else {
            Outcome::EquivalentUpToBound { tests_run: self.stats.tests }
        }
    }

    fn run_mode(mut self, mode: Mode, filter: Filter<'_>) -> Result<Verdict, EquivError> {
        let start = Instant::now();
        let outcome = match mode {
            Mode::PartialTemplate => self.template_mode(filter)?,
            Mode::PartialSet => self.set_mode(filter)?,
            Mode::Ground => self.ground_mode(filter)?,
        };
        self.stats.wall_time = start.elapsed();
        Ok(Verdict { mode, outcome, stats: self.stats })
    }
}

fn has_int(t: &PartialValue) -> bool {
    match t {
        PartialValue::Int(_) => true,
        PartialValue::Bottom => false,
        PartialValue::Con(_, xs) => xs.iter().any(has_int),
    }
}

fn compare_exact(
    l: &std::collections::BTreeSet<PartialValue>,
    r: &std::collections::BTreeSet<PartialValue>,
    sat_l: bool,
    sat_r: bool,
) -> Cmp {
    if let Some(t) = l.iter().find(|t| !r.contains(t)) {
        if sat_r {
            return Cmp::Disagree(t.clone());
        }
    }
    if let Some(t) = r.iter().find(|t| !l.contains(t)) {
        if sat_l {
            return Cmp::Disagree(t.clone());
        }
    }
    if sat_l && sat_r {
        Cmp::Agree
    } else {
        Cmp::Undecided
    }
}

fn accept_all(_: &[PartialValue]) -> Result<bool, EquivError> {
    Ok(true)
}

fn skipped(mode: Mode, reason: String) -> Verdict {
    Verdict { mode, outcome: Outcome::Skipped { reason }, stats: Stats::default() }
}

/// Checks a task in the mode chosen by [`select_mode`].
pub fn check_equiv(program: &Program, task: &EquivTask) -> Result<Verdict, EquivError> {
    check_filtered(program, task, &accept_all)
}

fn check_filtered(program: &Program, task: &EquivTask, filter: Filter<'_>) -> Result<Verdict, EquivError> {
    let run = Run::new(program, task)?;
    let choice = select_with(&Analyzer::new(program), task)?;
    if let Some(reason) = choice.skip {
        return Ok(skipped(choice.mode, reason));
    }
    run.run_mode(choice.mode, filter)
}

/// Compares the operations on total inputs only. Weaker than
/// [`check_equiv`]: operations can agree on all total inputs and still be
/// distinguishable by a context.
pub fn check_ground_equiv(program: &Program, task: &EquivTask) -> Result<Verdict, EquivError> {
    Run::new(program, task)?.run_mode(Mode::Ground, &accept_all)
}

/// Shrinks a reproducible counterexample by replacing subtrees of its
/// inputs and template with ⊥ while the one-sided result persists.
pub fn minimize_counterexample(program: &Program, task: &EquivTask, cex: &Counterexample) -> Result<Counterexample, EquivError> {
    let Some(t) = cex.template.clone() else {
        return Ok(cex.clone());
    };
    let run = Run::new(program, task)?;
    Ok(run.counterexample(cex.inputs.clone(), t, &accept_all)?.unwrap_or_else(|| cex.clone()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Strictness {
    /// The operation yields this constructor-rooted value on a ⊥ argument.
    NonStrictWitness { value: PartialValue },
    /// No value was found; testing cannot prove strictness.
    PossiblyStrict,
}

/// Probes each argument: applies the operation to ⊥ in that position and
/// to the smallest total value of the respective type elsewhere.
pub fn strict_probe(program: &Program, op: &str, cfg: &EvalConfig) -> Result<Vec<Strictness>, EquivError> {
    let sig = instantiated(program, op)?;
    let ev = Evaluator::new(program, cfg)?;
    let mut e = Enumerator::new(program, default_ring(1));
    let mut fillers = Vec::new();
    for t in &sig.params {
        e.check_type(t)?;
        let total = (1..=8).find_map(|s| e.exact(t, s).iter().find(|v| v.is_total()).cloned());
        fillers.push(total.unwrap_or(PartialValue::Bottom));
    }
    (0..sig.params.len())
        .map(|k| {
            let mut args = fillers.clone();
            args[k] = PartialValue::Bottom;
            let r = ev.call_maximal(op, &args)?;
            let mut vals: Vec<_> = r.results.into_iter().filter(|v| *v != PartialValue::Bottom).collect();
            vals.sort_by(|a, b| enum_cmp(program, a, b));
            Ok(match vals.into_iter().next() {
                Some(value) => Strictness::NonStrictWitness { value },
                None => Strictness::PossiblyStrict,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NamedVerdict {
    pub name: String,
    pub verdict: Verdict,
}

/// Name of the specification of `op`.
pub fn spec_name(op: &str) -> String {
    format!("{op}'spec")
}

/// Operations that have a specification, in declaration order.
pub fn specified_ops(program: &Program) -> Vec<String> {
    program
        .user_ops()
        .filter(|o| program.op(&spec_name(&o.name)).is_some())
        .map(|o| o.name.clone())
        .collect()
}

/// Checks `op` against `op'spec`, honouring the preconditions `op'pre` and
/// `op'spec'pre`; with a postcondition `op'post` every computed value is
/// also checked against it.
pub fn check_spec(program: &Program, op: &str, bounds: &Bounds) -> Result<Vec<NamedVerdict>, EquivError> {
    program.op(op).ok_or_else(|| EquivError::UnknownOperation(op.to_string()))?;
    let spec = spec_name(op);
    let has_spec = program.op(&spec).is_some();
    let post = format!("{op}'post");
    if !has_spec && program.op(&post).is_none() {
        return Err(EquivError::MissingSpec(op.to_string()));
    }
    let arity = program.op(op).map(|o| o.arity()).unwrap_or(0);
    let pres: Vec<String> =
        [format!("{op}'pre"), format!("{spec}'pre")].into_iter().filter(|p| program.op(p).is_some()).collect();
    for p in &pres {
        if program.op(p).map(|o| o.arity()) != Some(arity) {
            return Err(EquivError::Arity(p.clone(), arity));
        }
    }
    let ev = Evaluator::new(program, &bounds.eval)?;
    let truth = PartialValue::con("True", vec![]);
    let filter = |inp: &[PartialValue]| -> Result<bool, EquivError> {
        for p in &pres {
            let (r, _) = ev.call_values(p, inp)?;
            if !r.complete || r.outcomes.len() != 1 || !r.outcomes.contains(&truth) {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let mut out = Vec::new();
    if has_spec {
        let task = EquivTask { bounds: bounds.clone(), ..EquivTask::new(op, &spec) };
        let verdict = check_filtered(program, &task, &filter)?;
        out.push(NamedVerdict { name: format!("{op}SatisfiesSpecification"), verdict });
    }
    if program.op(&post).is_some() {
        if program.op(&post).map(|o| o.arity()) != Some(arity + 1) {
            return Err(EquivError::Arity(post, arity + 1));
        }
        let verdict = check_post(program, op, &post, bounds, &filter)?;
        out.push(NamedVerdict { name: format!("{op}SatisfiesPostCondition"), verdict });
    }
    Ok(out)
}

fn check_post(program: &Program, op: &str, post: &str, bounds: &Bounds, filter: Filter<'_>) -> Result<Verdict, EquivError> {
    let start = Instant::now();
    let task = EquivTask { bounds: bounds.clone(), ..EquivTask::new(op, op) };
    let mut run = Run::new(program, &task)?;
    let truth = PartialValue::con("True", vec![]);
    let mut cache = HashMap::new();
    let inputs = run.inputs()?;
    let mut outcome = None;
    'inputs: for (i, inp) in inputs.iter().enumerate() {
        if !run.accepted(&mut cache, i, inp, filter)? {
            continue;
        }
        let (vals, b) = run.ev.call_values(op, inp)?;
        run.stats.branches += b;
        if !vals.complete {
            run.stats.undecided += 1;
        }
        for v in &vals.outcomes {
            run.stats.tests += 1;
            let mut args = inp.clone();
            args.push(v.clone());
            let (p, b) = run.ev.call_values(post, &args)?;
            run.stats.branches += b;
            if p.outcomes.contains(&truth) {
                continue;
            }
            if !p.complete {
                run.stats.undecided += 1;
                continue;
            }
            outcome = Some(Outcome::Counterexample(Counterexample {
                inputs: inp.clone(),
                template: Some(v.clone()),
                lhs: Evidence::Values { values: vec![v.clone()], complete: vals.complete },
                rhs: Evidence::Values { values: p.outcomes.into_iter().collect(), complete: true },
            }));
            break 'inputs;
        }
    }
    let outcome = outcome.unwrap_or_else(|| run.finish());
    run.stats.wall_time = start.elapsed();
    Ok(Verdict { mode: Mode::Ground, outcome, stats: run.stats })
}
