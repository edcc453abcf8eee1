//! Non-deterministic lazy evaluation with call-time choice.
//!
//! Three services are offered: enumerating the values of an expression,
//! deciding whether a partial value (template) is reachable, and
//! enumerating all reachable partial values.

mod compile;
mod machine;

use std::collections::BTreeSet;
use std::rc::Rc;

use serde::Serialize;

use crate::lang::{Expr, Program};
use crate::partial::{downward_closure, PartialValue};

pub(crate) use compile::Compiled;
pub(crate) use machine::{Demand, Observe, Root, Search, SearchResult};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("budgets must be positive")]
    InvalidConfig,
    #[error("unknown operation {0}")]
    UnknownOperation(String),
    #[error("unknown constructor {0}")]
    UnknownConstructor(String),
    #[error("variable {0} is not bound")]
    UnboundVariable(String),
    #[error("the prelude types are missing")]
    MissingPrelude,
    #[error("operation {0} expects {1} arguments")]
    Arity(String, usize),
    #[error("malformed program: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EvalConfig {
    /// Rule applications allowed per branch.
    pub step_budget: u64,
    /// Maximum number of live branches.
    pub branch_budget: u64,
    /// Maximum constructor depth of observed values.
    pub depth_budget: usize,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig { step_budget: 100_000, branch_budget: 10_000, depth_budget: 25 }
    }
}

impl EvalConfig {
    pub fn validate(&self) -> Result<(), EvalError> {
        if self.step_budget == 0 || self.branch_budget == 0 || self.depth_budget == 0 {
            return Err(EvalError::InvalidConfig);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OutcomeSet {
    pub outcomes: BTreeSet<PartialValue>,
    pub complete: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Reachability {
    Yes,
    No,
    Unknown,
}

/// A compiled program ready for repeated queries.
pub struct Evaluator {
    code: Compiled,
    cfg: EvalConfig,
}

impl Evaluator {
    pub fn new(program: &Program, cfg: &EvalConfig) -> Result<Evaluator, EvalError> {
        cfg.validate()?;
        Ok(Evaluator { code: Compiled::new(program)?, cfg: cfg.clone() })
    }

    pub fn config(&self) -> &EvalConfig {
        &self.cfg
    }

    fn check_value(&self, t: &PartialValue) -> Result<(), EvalError> {
        match t {
            PartialValue::Bottom | PartialValue::Int(_) => Ok(()),
            PartialValue::Con(c, xs) => {
                self.code.con_id(c)?;
                xs.iter().try_for_each(|x| self.check_value(x))
            }
        }
    }

    fn call_root<'a>(&self, op: &str, args: &'a [PartialValue]) -> Result<Root<'a>, EvalError> {
        let id = self.code.op_id(op)?;
        let arity = self.code.ops[id as usize].arity;
        if arity != args.len() {
            return Err(EvalError::Arity(op.to_string(), arity));
        }
        args.iter().try_for_each(|a| self.check_value(a))?;
        Ok(Root::Call(id, args))
    }

    fn expr_root(&self, e: &Expr) -> Result<Root<'static>, EvalError> {
        Ok(Root::Expr(self.code.closed_expr(e)?))
    }

    pub(crate) fn demand(&self, t: &PartialValue, holes: bool) -> Result<Rc<Demand>, EvalError> {
        Ok(Rc::new(match t {
            PartialValue::Bottom => Demand::Stop,
            PartialValue::Int(n) => {
                if holes {
                    Demand::AnyInt
                } else {
                    Demand::Int(*n)
                }
            }
            PartialValue::Con(c, xs) => Demand::Con(
                self.code.con_id(c)?,
                xs.iter().map(|x| self.demand(x, holes)).collect::<Result<_, _>>()?,
            ),
        }))
    }

    fn values(&self, root: Root<'_>) -> SearchResult {
        Search::run(&self.code, &self.cfg, root, Observe::Deep { depth: 0, catch: false }, true, false)
    }

    fn maximal(&self, root: Root<'_>) -> SearchResult {
        Search::run(&self.code, &self.cfg, root, Observe::Deep { depth: 0, catch: true }, false, false)
    }

    fn reach(&self, root: Root<'_>, demand: Rc<Demand>) -> (Reachability, u64) {
        let r = Search::run(&self.code, &self.cfg, root, Observe::Template(demand), false, true);
        (reachability(&r), r.branches)
    }

    pub fn eval_values(&self, e: &Expr) -> Result<OutcomeSet, EvalError> {
        let r = self.values(self.expr_root(e)?);
        Ok(OutcomeSet { outcomes: r.results, complete: r.complete })
    }

    pub fn call_values(&self, op: &str, args: &[PartialValue]) -> Result<(OutcomeSet, u64), EvalError> {
        let r = self.values(self.call_root(op, args)?);
        Ok((OutcomeSet { outcomes: r.results, complete: r.complete }, r.branches))
    }

    pub fn reach_partial(&self, e: &Expr, template: &PartialValue) -> Result<Reachability, EvalError> {
        let d = self.demand(template, false)?;
        Ok(self.reach(self.expr_root(e)?, d).0)
    }

    pub fn call_reach(&self, op: &str, args: &[PartialValue], template: &PartialValue) -> Result<(Reachability, u64), EvalError> {
        let d = self.demand(template, false)?;
        Ok(self.reach(self.call_root(op, args)?, d))
    }

    /// All instances of a template skeleton whose integer leaves are holes.
    pub(crate) fn call_instances(&self, op: &str, args: &[PartialValue], skeleton: &PartialValue) -> Result<SearchResult, EvalError> {
        let d = self.demand(skeleton, true)?;
        let root = self.call_root(op, args)?;
        Ok(Search::run(&self.code, &self.cfg, root, Observe::Template(d), false, false))
    }

    /// Maximal reachable partial values of a call (failures observed as ⊥).
    pub(crate) fn call_maximal(&self, op: &str, args: &[PartialValue]) -> Result<SearchResult, EvalError> {
        Ok(self.maximal(self.call_root(op, args)?))
    }

    pub fn enumerate_partials(&self, e: &Expr) -> Result<OutcomeSet, EvalError> {
        let r = self.maximal(self.expr_root(e)?);
        Ok(close(r, self.cfg.branch_budget as usize))
    }

    pub fn call_partials(&self, op: &str, args: &[PartialValue]) -> Result<OutcomeSet, EvalError> {
        let r = self.maximal(self.call_root(op, args)?);
        Ok(close(r, self.cfg.branch_budget as usize))
    }
}

fn reachability(r: &SearchResult) -> Reachability {
    if !r.results.is_empty() {
        Reachability::Yes
    } else if r.complete {
        Reachability::No
    } else {
        Reachability::Unknown
    }
}

/// Downward closure of a set of maximal values, capped at `cap` elements.
fn close(r: SearchResult, cap: usize) -> OutcomeSet {
    let mut out = BTreeSet::new();
    let mut complete = r.complete;
    out.insert(PartialValue::Bottom);
    for t in &r.results {
        match downward_closure(t, cap) {
            Some(d) => out.extend(d),
            None => {
                complete = false;
                out.insert(t.clone());
            }
        }
        if out.len() > cap {
            complete = false;
            break;
        }
    }
    OutcomeSet { outcomes: out, complete }
}

/// Every value of `expr` discoverable within the budgets.
pub fn eval_values(program: &Program, expr: &Expr, cfg: &EvalConfig) -> Result<OutcomeSet, EvalError> {
    Evaluator::new(program, cfg)?.eval_values(expr)
}

/// Whether `expr` can be evaluated to (at least) the given partial value.
pub fn reach_partial(
    program: &Program,
    expr: &Expr,
    template: &PartialValue,
    cfg: &EvalConfig,
) -> Result<Reachability, EvalError> {
    Evaluator::new(program, cfg)?.reach_partial(expr, template)
}

/// All partial values of `expr`, closed downwards.
pub fn enumerate_partials(program: &Program, expr: &Expr, cfg: &EvalConfig) -> Result<OutcomeSet, EvalError> {
    Evaluator::new(program, cfg)?.enumerate_partials(expr)
}

#[cfg(test)]
mod tests;
