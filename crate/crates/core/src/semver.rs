//! Semantic-versioning diff between two versions of a module: API
//! comparison, a merged comparison program with type translations, and
//! behavioral equivalence checks of the shared operations.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Serialize, Serializer};

use crate::equiv::{check_equiv, Bounds, Counterexample, EquivError, EquivTask, Evidence, Outcome, Verdict};
use crate::lang::{
    pretty_signature, Alt, Annotation, Binding, ConDecl, Expr, OpDecl, Pattern, Program, PropDecl, Rule, Signature,
    Span, Type, TypeDecl,
};
use crate::partial::PartialValue;

pub const OLD_PREFIX: &str = "V0_";
pub const NEW_PREFIX: &str = "V1_";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SemverError {
    #[error("malformed version {0:?}: {1}")]
    MalformedVersion(String, String),
}

/// A `MAJOR.MINOR.PATCH[-pre]` version with semantic-versioning precedence.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Version(::semver::Version);

impl Version {
    pub fn major(&self) -> u64 {
        self.0.major
    }
    pub fn minor(&self) -> u64 {
        self.0.minor
    }
    pub fn patch(&self) -> u64 {
        self.0.patch
    }
    /// Dot-separated prerelease identifiers; empty for releases.
    pub fn prerelease(&self) -> Vec<String> {
        if self.0.pre.is_empty() {
            Vec::new()
        } else {
            self.0.pre.as_str().split('.').map(str::to_string).collect()
        }
    }
}

impl fmt::Display for Version {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Serialize for Version {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub fn parse_version(text: &str) -> Result<Version, SemverError> {
    ::semver::Version::parse(text.trim())
        .map(Version)
        .map_err(|e| SemverError::MalformedVersion(text.to_string(), e.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EntityKind {
    Type,
    Operation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ApiStatus {
    Identical,
    SignatureChanged,
    Removed,
    Added,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EntityReport {
    pub kind: EntityKind,
    pub name: String,
    pub status: ApiStatus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ApiViolation {
    pub entity: String,
    pub rule: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ApiReport {
    pub entities: Vec<EntityReport>,
    pub violations: Vec<ApiViolation>,
}

/// Correspondence between the locally declared types of two versions.
struct TypeMatch<'a> {
    old: &'a Program,
    new: &'a Program,
    /// Compatible same-named types with the new index of each old
    /// constructor.
    pairs: BTreeMap<String, Vec<usize>>,
}

impl<'a> TypeMatch<'a> {
    fn new(old: &'a Program, new: &'a Program) -> TypeMatch<'a> {
        let mut m = TypeMatch { old, new, pairs: BTreeMap::new() };
        let candidates: Vec<String> = old
            .user_types()
            .filter(|t| new.user_types().any(|u| u.name == t.name))
            .map(|t| t.name.clone())
            .collect();
        for c in &candidates {
            m.pairs.insert(c.clone(), Vec::new());
        }
        // Greatest fixpoint: drop pairs until every remaining one matches
        // under the assumption that all remaining pairs match.
        loop {
            let mut changed = false;
            for c in &candidates {
                if !m.pairs.contains_key(c) {
                    continue;
                }
                let (o, n) = (old.type_decl(c).unwrap(), new.type_decl(c).unwrap());
                match m.match_constructors(o, n) {
                    Some(map) => {
                        if m.pairs[c] != map {
                            m.pairs.insert(c.clone(), map);
                        }
                    }
                    None => {
                        m.pairs.remove(c);
                        changed = true;
                    }
                }
            }
            if !changed {
                return m;
            }
        }
    }

    fn is_local_old(&self, n: &str) -> bool {
        self.old.type_decl(n).is_some_and(|t| !t.builtin)
    }

    /// Structural equality of an old and a new type; `vars` pairs type
    /// variables consistently.
    fn eq(&self, o: &Type, n: &Type, vars: &mut Vec<(String, String)>) -> bool {
        match (o, n) {
            (Type::Int, Type::Int) => true,
            (Type::Var(a), Type::Var(b)) => match vars.iter().find(|(x, y)| x == a || y == b) {
                Some((x, y)) => x == a && y == b,
                None => {
                    vars.push((a.clone(), b.clone()));
                    true
                }
            },
            (Type::Con(a, xs), Type::Con(b, ys)) => {
                let head = if self.is_local_old(a) { a == b && self.pairs.contains_key(a) } else { a == b };
                head && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| self.eq(x, y, vars))
            }
            _ => false,
        }
    }

    fn fields_eq(&self, o: &TypeDecl, n: &TypeDecl, a: &ConDecl, b: &ConDecl) -> bool {
        let mut vars: Vec<(String, String)> = o.params.iter().cloned().zip(n.params.iter().cloned()).collect();
        a.args.len() == b.args.len() && a.args.iter().zip(&b.args).all(|(x, y)| self.eq(x, y, &mut vars))
    }

    /// Positional match first; otherwise a unique match by field shapes.
    fn match_constructors(&self, o: &TypeDecl, n: &TypeDecl) -> Option<Vec<usize>> {
        if o.params.len() != n.params.len() || o.constructors.len() != n.constructors.len() {
            return None;
        }
        let k = o.constructors.len();
        if (0..k).all(|i| self.fields_eq(o, n, &o.constructors[i], &n.constructors[i])) {
            return Some((0..k).collect());
        }
        let mut map = Vec::with_capacity(k);
        for a in &o.constructors {
            let hits: Vec<usize> = (0..k).filter(|&j| self.fields_eq(o, n, a, &n.constructors[j])).collect();
            if hits.len() != 1 {
                return None;
            }
            map.push(hits[0]);
        }
        let mut seen = map.clone();
        seen.sort_unstable();
        seen.dedup();
        (seen.len() == k).then_some(map)
    }

    fn signature_eq(&self, o: &Signature, n: &Signature) -> bool {
        let mut vars = Vec::new();
        o.params.len() == n.params.len()
            && o.params.iter().zip(&n.params).all(|(x, y)| self.eq(x, y, &mut vars))
            && self.eq(&o.result, &n.result, &mut vars)
    }
}

fn op_compatible(m: &TypeMatch<'_>, o: &OpDecl, n: &OpDecl) -> bool {
    match (&o.signature, &n.signature) {
        (Some(a), Some(b)) => m.signature_eq(a, b),
        (None, None) => o.arity() == n.arity(),
        _ => false,
    }
}

pub fn compare_api(old: &Program, new: &Program, vold: &Version, vnew: &Version) -> ApiReport {
    let m = TypeMatch::new(old, new);
    let same_major = vold.major() == vnew.major();
    let mut entities = Vec::new();
    let mut violations = Vec::new();
    let mut record = |kind, name: &str, status| {
        match status {
            ApiStatus::SignatureChanged if same_major => violations.push(ApiViolation {
                entity: name.to_string(),
                rule: "changed in a release with the same major version".into(),
            }),
            ApiStatus::Removed if same_major && vnew.minor() <= vold.minor() => violations.push(ApiViolation {
                entity: name.to_string(),
                rule: "removed without increasing the minor version".into(),
            }),
            _ => {}
        }
        entities.push(EntityReport { kind, name: name.to_string(), status });
    };
    for t in old.user_types() {
        let status = match new.type_decl(&t.name).filter(|u| !u.builtin) {
            None => ApiStatus::Removed,
            Some(_) if m.pairs.contains_key(&t.name) => ApiStatus::Identical,
            Some(_) => ApiStatus::SignatureChanged,
        };
        record(EntityKind::Type, &t.name, status);
    }
    for t in new.user_types() {
        if old.type_decl(&t.name).is_none_or(|u| u.builtin) {
            record(EntityKind::Type, &t.name, ApiStatus::Added);
        }
    }
    for o in old.user_ops() {
        let status = match new.op(&o.name).filter(|n| !n.builtin) {
            None => ApiStatus::Removed,
            Some(n) if op_compatible(&m, o, n) => ApiStatus::Identical,
            Some(_) => ApiStatus::SignatureChanged,
        };
        record(EntityKind::Operation, &o.name, status);
    }
    for o in new.user_ops() {
        if old.op(&o.name).is_none_or(|u| u.builtin) {
            record(EntityKind::Operation, &o.name, ApiStatus::Added);
        }
    }
    ApiReport { entities, violations }
}

/// Renames the user-declared entities of one version.
#[derive(Clone, Copy)]
struct Renamer<'a> {
    program: &'a Program,
    prefix: &'static str,
}

impl Renamer<'_> {
    fn ty(&self, t: &Type) -> Type {
        match t {
            Type::Con(n, xs) => {
                let local = self.program.type_decl(n).is_some_and(|d| !d.builtin);
                let name = if local { format!("{}{n}", self.prefix) } else { n.clone() };
                Type::Con(name, xs.iter().map(|x| self.ty(x)).collect())
            }
            _ => t.clone(),
        }
    }

    fn con(&self, c: &str) -> String {
        match self.program.constructor(c) {
            Some((t, _)) if !t.builtin => format!("{}{c}", self.prefix),
            _ => c.to_string(),
        }
    }

    fn op(&self, f: &str) -> String {
        match self.program.op(f) {
            Some(o) if !o.builtin => format!("{}{f}", self.prefix),
            _ => f.to_string(),
        }
    }

    fn pat(&self, p: &Pattern) -> Pattern {
        match p {
            Pattern::Con(c, ps) => Pattern::Con(self.con(c), ps.iter().map(|q| self.pat(q)).collect()),
            _ => p.clone(),
        }
    }

    fn expr(&self, e: &Expr) -> Expr {
        let ex = |xs: &[Expr]| xs.iter().map(|x| self.expr(x)).collect();
        let bx = |x: &Expr| Box::new(self.expr(x));
        match e {
            Expr::Var(_) | Expr::Int(_) | Expr::Failed => e.clone(),
            Expr::Con(c, xs) => Expr::Con(self.con(c), ex(xs)),
            Expr::Call(f, xs) => Expr::Call(self.op(f), ex(xs)),
            Expr::Prim(p, xs) => Expr::Prim(*p, ex(xs)),
            Expr::Choice(a, b) => Expr::Choice(bx(a), bx(b)),
            Expr::If(c, t, f) => Expr::If(bx(c), bx(t), bx(f)),
            Expr::Case(s, alts) => Expr::Case(
                bx(s),
                alts.iter().map(|a| Alt { pat: self.pat(&a.pat), body: self.expr(&a.body) }).collect(),
            ),
            Expr::Let(bs, body) => Expr::Let(self.binds(bs), bx(body)),
        }
    }

    fn binds(&self, bs: &[Binding]) -> Vec<Binding> {
        bs.iter().map(|b| Binding { pat: self.pat(&b.pat), expr: self.expr(&b.expr) }).collect()
    }

    fn type_decl(&self, t: &TypeDecl) -> TypeDecl {
        TypeDecl {
            name: format!("{}{}", self.prefix, t.name),
            params: t.params.clone(),
            constructors: t
                .constructors
                .iter()
                .map(|c| ConDecl { name: self.con(&c.name), args: c.args.iter().map(|a| self.ty(a)).collect() })
                .collect(),
            builtin: false,
            span: t.span,
        }
    }

    fn op_decl(&self, o: &OpDecl) -> OpDecl {
        OpDecl {
            name: self.op(&o.name),
            signature: o.signature.as_ref().map(|s| self.sig(s)),
            rules: o
                .rules
                .iter()
                .map(|r| Rule {
                    params: r.params.iter().map(|p| self.pat(p)).collect(),
                    guard: r.guard.as_ref().map(|g| self.expr(g)),
                    body: self.expr(&r.body),
                    wheres: self.binds(&r.wheres),
                    span: r.span,
                })
                .collect(),
            builtin: false,
            span: o.span,
        }
    }

    fn sig(&self, s: &Signature) -> Signature {
        Signature { params: s.params.iter().map(|t| self.ty(t)).collect(), result: self.ty(&s.result) }
    }
}

/// Merged program plus the behavior tasks it supports.
#[derive(Debug, Clone)]
pub struct Comparison {
    pub program: Program,
    /// Shared operation and the property comparing its two versions.
    pub tasks: Vec<(String, EquivTask)>,
    /// Shared operations left out, with the reason.
    pub excluded: Vec<(String, String)>,
}

/// Generates translation operations between the two versions of a type.
struct Translations<'a> {
    m: &'a TypeMatch<'a>,
    old: Renamer<'a>,
    new: Renamer<'a>,
    ops: Vec<OpDecl>,
    done: HashMap<String, String>,
}

fn mangle(t: &Type) -> String {
    match t {
        Type::Int => "Int".into(),
        Type::Var(v) => v.clone(),
        Type::Con(n, xs) if xs.is_empty() => n.clone(),
        Type::Con(n, xs) => std::iter::once(n.clone()).chain(xs.iter().map(mangle)).collect::<Vec<_>>().join("_"),
    }
}

impl Translations<'_> {
    fn has_local(&self, t: &Type) -> bool {
        match t {
            Type::Con(n, xs) => self.m.pairs.contains_key(n) || xs.iter().any(|x| self.has_local(x)),
            _ => false,
        }
    }

    /// Name of the operation translating values of type `t` (unprefixed)
    /// from one version to the other; `None` when no translation is needed.
    /// `forward` translates new values to old ones.
    fn translator(&mut self, t: &Type, forward: bool) -> Option<String> {
        if !self.has_local(t) {
            return None;
        }
        let name = format!("{}_{}", if forward { "t" } else { "tinv" }, mangle(t));
        if self.done.contains_key(&name) {
            return Some(name);
        }
        self.done.insert(name.clone(), name.clone());
        let Type::Con(tn, args) = t else { unreachable!() };
        let (src_p, dst_p) = if forward { (self.m.new, self.m.old) } else { (self.m.old, self.m.new) };
        let (src_r, dst_r) = if forward { (self.new, self.old) } else { (self.old, self.new) };
        let src = src_p.type_decl(tn).unwrap();
        let dst = dst_p.type_decl(tn).unwrap();
        let map = &self.m.pairs.get(tn).cloned().unwrap_or_else(|| (0..src.constructors.len()).collect());
        let mut rules = Vec::new();
        for (si, sc) in src.constructors.iter().enumerate() {
            // map sends old constructor indices to new ones
            let di = if forward { map.iter().position(|&j| j == si).unwrap() } else { map[si] };
            let dc = &dst.constructors[di];
            let sub = |v: &str| src.params.iter().position(|p| p == v).and_then(|k| args.get(k).cloned());
            let vars: Vec<String> = (0..sc.args.len()).map(|k| format!("x{}", k + 1)).collect();
            let mut fields = Vec::new();
            for (k, a) in sc.args.iter().enumerate() {
                let fty = a.subst(&sub);
                let x = Expr::Var(vars[k].clone());
                fields.push(match self.translator(&fty, forward) {
                    Some(f) => Expr::Call(f, vec![x]),
                    None => x,
                });
            }
            rules.push(Rule {
                params: vec![Pattern::Con(src_r.con(&sc.name), vars.iter().map(|v| Pattern::Var(v.clone())).collect())],
                guard: None,
                body: Expr::Con(dst_r.con(&dc.name), fields),
                wheres: vec![],
                span: Span::default(),
            });
        }
        let signature = Signature { params: vec![src_r.ty(t)], result: dst_r.ty(t) };
        self.ops.push(OpDecl { name: name.clone(), signature: Some(signature), rules, builtin: false, span: Span::default() });
        Some(name)
    }
}

fn apply(f: Option<String>, x: Expr) -> Expr {
    match f {
        Some(f) => Expr::Call(f, vec![x]),
        None => x,
    }
}

/// Merges both versions into one program: old entities get the prefix
/// `V0_`, new ones `V1_`; shared operations get wrappers `M_f_1` (new
/// version, result translated) and `M_f_2` (old version, arguments
/// translated) and a property `test_f_Equivalent`.
pub fn build_comparison_program(old: &Program, new: &Program) -> Comparison {
    let m = TypeMatch::new(old, new);
    let ro = Renamer { program: old, prefix: OLD_PREFIX };
    let rn = Renamer { program: new, prefix: NEW_PREFIX };
    let mut program = Program {
        types: old.types.iter().filter(|t| t.builtin).cloned().collect(),
        ops: old.ops.iter().filter(|o| o.builtin).cloned().collect(),
        props: Vec::new(),
    };
    program.types.extend(old.user_types().map(|t| ro.type_decl(t)));
    program.types.extend(new.user_types().map(|t| rn.type_decl(t)));
    program.ops.extend(old.user_ops().map(|o| ro.op_decl(o)));
    program.ops.extend(new.user_ops().map(|o| rn.op_decl(o)));
    let mut tr = Translations {
        m: &m,
        old: Renamer { program: old, prefix: OLD_PREFIX },
        new: Renamer { program: new, prefix: NEW_PREFIX },
        ops: Vec::new(),
        done: HashMap::new(),
    };
    for t in old.user_types().filter(|t| m.pairs.contains_key(&t.name)) {
        let ty = Type::Con(t.name.clone(), t.params.iter().map(|p| Type::Var(p.clone())).collect());
        tr.translator(&ty, true);
        tr.translator(&ty, false);
    }
    let mut tasks = Vec::new();
    let mut excluded = Vec::new();
    let mut wrappers = Vec::new();
    for o in old.user_ops() {
        let Some(n) = new.op(&o.name).filter(|n| !n.builtin) else { continue };
        if !op_compatible(&m, o, n) {
            excluded.push((o.name.clone(), "incompatible signatures".to_string()));
            continue;
        }
        let Some(sig) = n.signature.clone() else {
            excluded.push((o.name.clone(), "no type signature".to_string()));
            continue;
        };
        let vars: Vec<String> = (0..sig.params.len()).map(|k| format!("x{}", k + 1)).collect();
        let pats: Vec<Pattern> = vars.iter().map(|v| Pattern::Var(v.clone())).collect();
        let xs: Vec<Expr> = vars.iter().map(|v| Expr::Var(v.clone())).collect();
        let wsig = Signature { params: sig.params.iter().map(|t| rn.ty(t)).collect(), result: to_old(&m, &sig.result) };
        let res_tr = tr.translator(&sig.result, true);
        let body1 = apply(res_tr, Expr::Call(rn.op(&n.name), xs.clone()));
        let args2 = sig.params.iter().zip(&xs).map(|(t, x)| apply(tr.translator(t, true), x.clone())).collect();
        let body2 = Expr::Call(ro.op(&o.name), args2);
        let (w1, w2) = (format!("M_{}_1", o.name), format!("M_{}_2", o.name));
        for (name, body) in [(&w1, body1), (&w2, body2)] {
            wrappers.push(OpDecl {
                name: name.clone(),
                signature: Some(wsig.clone()),
                rules: vec![Rule { params: pats.clone(), guard: None, body, wheres: vec![], span: Span::default() }],
                builtin: false,
                span: Span::default(),
            });
        }
        let prop = format!("test_{}_Equivalent", o.name);
        program.props.push(PropDecl {
            name: prop,
            annotation: Annotation::None,
            lhs: w1.clone(),
            rhs: w2.clone(),
            span: Span::default(),
        });
        tasks.push((o.name.clone(), EquivTask::new(&w1, &w2)));
    }
    program.ops.extend(tr.ops);
    program.ops.extend(wrappers);
    Comparison { program, tasks, excluded }
}

/// A new-version type expressed with the old version's (prefixed) names.
fn to_old(m: &TypeMatch<'_>, t: &Type) -> Type {
    match t {
        Type::Con(n, xs) if m.pairs.contains_key(n) => {
            Type::Con(format!("{OLD_PREFIX}{n}"), xs.iter().map(|x| to_old(m, x)).collect())
        }
        Type::Con(n, xs) => Type::Con(n.clone(), xs.iter().map(|x| to_old(m, x)).collect()),
        _ => t.clone(),
    }
}

/// Removes the version prefixes from constructor names.
pub fn strip_prefixes(t: &PartialValue) -> PartialValue {
    match t {
        PartialValue::Con(c, xs) => {
            let name = c.strip_prefix(OLD_PREFIX).or_else(|| c.strip_prefix(NEW_PREFIX)).unwrap_or(c);
            PartialValue::Con(name.to_string(), xs.iter().map(strip_prefixes).collect())
        }
        _ => t.clone(),
    }
}

fn strip_evidence(e: &Evidence) -> Evidence {
    match e {
        Evidence::Values { values, complete } => {
            Evidence::Values { values: values.iter().map(strip_prefixes).collect(), complete: *complete }
        }
        other => other.clone(),
    }
}

fn strip_verdict(mut v: Verdict) -> Verdict {
    if let Outcome::Counterexample(c) = &v.outcome {
        v.outcome = Outcome::Counterexample(Counterexample {
            inputs: c.inputs.iter().map(strip_prefixes).collect(),
            template: c.template.as_ref().map(strip_prefixes),
            lhs: strip_evidence(&c.lhs),
            rhs: strip_evidence(&c.rhs),
        });
    }
    v
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OpBehavior {
    pub op: String,
    /// Property checked in the merged program.
    pub property: String,
    pub verdict: Option<Verdict>,
    /// Why the operation was not checked.
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Judgment {
    pub ok: bool,
    pub violations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiffReport {
    pub old_version: Version,
    pub new_version: Version,
    pub api: ApiReport,
    pub behavior: Vec<OpBehavior>,
    pub judgment: Judgment,
}

/// Bounds for version diffs: the defaults with safe mode on, since diffs run
/// unattended.
pub fn diff_bounds() -> Bounds {
    Bounds { safe_mode: true, ..Bounds::default() }
}

/// API comparison plus, for equal major versions, an equivalence check of
/// every shared operation.
pub fn behavior_diff(
    old: &Program,
    new: &Program,
    vold: &Version,
    vnew: &Version,
    bounds: &Bounds,
) -> Result<DiffReport, EquivError> {
    let api = compare_api(old, new, vold, vnew);
    let mut behavior = Vec::new();
    if vold.major() == vnew.major() {
        let cmp = build_comparison_program(old, new);
        for (op, reason) in &cmp.excluded {
            behavior.push(OpBehavior { op: op.clone(), property: String::new(), verdict: None, note: Some(reason.clone()) });
        }
        for (op, task) in &cmp.tasks {
            let task = EquivTask { bounds: bounds.clone(), ..task.clone() };
            let verdict = strip_verdict(check_equiv(&cmp.program, &task)?);
            behavior.push(OpBehavior {
                op: op.clone(),
                property: format!("test_{op}_Equivalent"),
                verdict: Some(verdict),
                note: None,
            });
        }
        behavior.sort_by_key(|b| old.ops.iter().position(|o| o.name == b.op));
    }
    let mut violations: Vec<String> =
        api.violations.iter().map(|v| format!("API: {} {}", v.entity, v.rule)).collect();
    for b in &behavior {
        if b.verdict.as_ref().is_some_and(Verdict::is_counterexample) {
            violations.push(format!("behavior: {} changed", b.op));
        }
    }
    Ok(DiffReport {
        old_version: vold.clone(),
        new_version: vnew.clone(),
        api,
        behavior,
        judgment: Judgment { ok: violations.is_empty(), violations },
    })
}

/// Signature text of an operation, for reports.
pub fn signature_text(p: &Program, op: &str) -> Option<String> {
    p.op(op).and_then(|o| o.signature.as_ref()).map(|s| pretty_signature(op, s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::{EvalConfig, Evaluator};
    use crate::lang::parse_program;
    use crate::partial::{Enumerator, PartialValue};

    fn v(s: &str) -> Version {
        parse_version(s).unwrap()
    }

    #[test]
    fn versions() {
        let a = v("2.0.1");
        assert_eq!((a.major(), a.minor(), a.patch()), (2, 0, 1));
        assert!(a.prerelease().is_empty());
        let b = v("3.2.1-alpha.2");
        assert_eq!((b.major(), b.minor(), b.patch()), (3, 2, 1));
        assert_eq!(b.prerelease(), vec!["alpha".to_string(), "2".to_string()]);
        assert!(parse_version("1.2").is_err());
        assert!(v("1.0.0-alpha") < v("1.0.0"));
        assert!(v("1.2.0") < v("1.10.0"));
    }

    const OLD: &str = "data AB = A | B\ndata C = C AB\nf :: AB -> C\nf x = C (h x)\nh :: AB -> AB\nh A = A\n";
    const NEW: &str = "data AB = A | B\ndata C = C AB\nf :: AB -> C\nf A = C A\n";

    #[test]
    fn removal_rules() {
        let old = parse_program(OLD).unwrap();
        let new = parse_program(NEW).unwrap();
        let r = compare_api(&old, &new, &v("1.2.0"), &v("1.3.0"));
        assert!(r.violations.is_empty(), "{r:?}");
        let r = compare_api(&old, &new, &v("1.2.0"), &v("1.2.1"));
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].entity, "h");
        let r = compare_api(&old, &old, &v("1.2.0"), &v("1.2.0"));
        assert!(r.violations.is_empty());
        assert!(r.entities.iter().all(|e| e.status == ApiStatus::Identical));
    }

    #[test]
    fn signature_changes() {
        let old = parse_program("g :: Int -> Int\ng x = x\n").unwrap();
        let new = parse_program("g :: Bool -> Bool\ng x = x\n").unwrap();
        let r = compare_api(&old, &new, &v("1.0.0"), &v("1.1.0"));
        assert_eq!(r.entities[0].status, ApiStatus::SignatureChanged);
        assert_eq!(r.violations.len(), 1);
        assert!(compare_api(&old, &new, &v("1.0.0"), &v("2.0.0")).violations.is_empty());
    }

    #[test]
    fn wrappers_and_translations() {
        let old = parse_program(OLD).unwrap();
        let new = parse_program(NEW).unwrap();
        let c = build_comparison_program(&old, &new);
        let p = &c.program;
        for name in ["t_AB", "t_C", "tinv_AB", "tinv_C", "M_f_1", "M_f_2", "V0_f", "V0_h", "V1_f"] {
            assert!(p.op(name).is_some(), "{name}");
        }
        let text = crate::lang::pretty_rule("M_f_1", &p.op("M_f_1").unwrap().rules[0]);
        assert_eq!(text, "M_f_1 x1 = t_C (V1_f x1)");
        let text = crate::lang::pretty_rule("M_f_2", &p.op("M_f_2").unwrap().rules[0]);
        assert_eq!(text, "M_f_2 x1 = V0_f (t_AB x1)");
        assert_eq!(c.tasks.len(), 1);
    }

    #[test]
    fn integer_wrappers_are_plain_calls() {
        let p = parse_program("g :: Int -> Int -> Int\ng x y = x + y\n").unwrap();
        let c = build_comparison_program(&p, &p);
        let m = &c.program;
        assert_eq!(crate::lang::pretty_rule("M_g_1", &m.op("M_g_1").unwrap().rules[0]), "M_g_1 x1 x2 = V1_g x1 x2");
        assert_eq!(crate::lang::pretty_rule("M_g_2", &m.op("M_g_2").unwrap().rules[0]), "M_g_2 x1 x2 = V0_g x1 x2");
        assert!(m.user_ops().all(|o| !o.name.starts_with("t_") && !o.name.starts_with("tinv_")));
        assert_eq!(m.props.len(), 1);
        assert_eq!((m.props[0].lhs.as_str(), m.props[0].rhs.as_str()), ("M_g_1", "M_g_2"));
    }

    #[test]
    fn swapped_constructors_follow_shapes() {
        let old = parse_program("data T = L Int | N T T\nk :: T -> T\nk x = x\n").unwrap();
        let new = parse_program("data T = N T T | L Int\nk :: T -> T\nk x = x\n").unwrap();
        let c = build_comparison_program(&old, &new);
        let t = c.program.op("t_T").unwrap();
        let heads: Vec<_> = t
            .rules
            .iter()
            .map(|r| match (&r.params[0], &r.body) {
                (Pattern::Con(a, _), Expr::Con(b, _)) => (a.clone(), b.clone()),
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(heads, vec![("V1_N".into(), "V0_N".into()), ("V1_L".into(), "V0_L".into())]);
        // Same shapes in a different order cannot be told apart.
        let old = parse_program("data T = P | Q\n").unwrap();
        let new = parse_program("data T = Q Int | P\n").unwrap();
        assert_eq!(compare_api(&old, &new, &v("1.0.0"), &v("1.0.1")).entities[0].status, ApiStatus::SignatureChanged);
    }

    #[test]
    fn translations_are_inverse() {
        let src = "data AB = A | B\ndata T a = L | N (T a) a AB\nk :: T Int -> [AB]\nk _ = []\n";
        let old = parse_program(src).unwrap();
        let new = parse_program(src).unwrap();
        let c = build_comparison_program(&old, &new);
        let ev = Evaluator::new(&c.program, &EvalConfig::default()).unwrap();
        let ty = Type::Con("V1_T".into(), vec![Type::Int]);
        let mut e = Enumerator::new(&c.program, vec![0, 1]);
        let mut n = 0;
        for s in 1..=4 {
            for t in e.exact(&ty, s).iter().filter(|t| t.is_total()) {
                let there = ev.call_values("t_T_a", std::slice::from_ref(t)).unwrap().0;
                assert_eq!(there.outcomes.len(), 1);
                let back = ev.call_values("tinv_T_a", &[there.outcomes.iter().next().unwrap().clone()]).unwrap().0;
                assert_eq!(back.outcomes.into_iter().collect::<Vec<_>>(), vec![t.clone()]);
                n += 1;
            }
        }
        assert!(n > 3);
    }

    #[test]
    fn diff_judgments() {
        let old = parse_program(OLD).unwrap();
        let new = parse_program(NEW).unwrap();
        let bounds = Bounds { safe_mode: true, ..Bounds::default() };
        let r = behavior_diff(&old, &new, &v("1.0.0"), &v("1.1.0"), &bounds).unwrap();
        assert!(!r.judgment.ok);
        let b = &r.behavior[0];
        let Some(Outcome::Counterexample(c)) = b.verdict.as_ref().map(|v| &v.outcome) else { panic!("{r:?}") };
        assert_eq!(c.inputs, vec![PartialValue::Bottom]);
        assert_eq!(c.template, Some(PartialValue::con("C", vec![PartialValue::Bottom])));
        let r = behavior_diff(&old, &old, &v("1.0.0"), &v("1.0.1"), &bounds).unwrap();
        assert!(r.judgment.ok, "{r:?}");
        let r = behavior_diff(&old, &new, &v("1.0.0"), &v("2.0.0"), &bounds).unwrap();
        assert!(r.behavior.is_empty());
        assert!(r.judgment.ok);
    }
}
