//! HGN method schemas, the method file parser and ground method instances.

use std::collections::BTreeSet;
use std::sync::Arc;

use super::formula::{GoalFormula, Literal};
use super::network::SubNetwork;
use crate::model::domain::{
    conjuncts, err, parse_condition, typed_names, write_conditions, write_literals, write_params,
    Condition, DomainModel, LiteralSchema, Parameter, Scope, Term,
};
use crate::model::problem::{parse_network_sections, Atom, ObjId};
use crate::model::{GroundTask, State};
use crate::sexpr::{self, ParseError, SExpr};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MethodSchema {
    pub name: String,
    pub params: Vec<Parameter>,
    pub goal: Vec<LiteralSchema>,
    pub precond: Vec<Condition>,
    /// Declared subgoal nodes followed by the implicit last node holding `goal`.
    pub nodes: Vec<(String, Vec<LiteralSchema>)>,
    pub edges: Vec<(usize, usize)>,
}

impl MethodSchema {
    pub fn last(&self) -> usize {
        self.nodes.len() - 1
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MethodLibrary {
    pub name: String,
    pub methods: Vec<MethodSchema>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundMethod {
    pub schema: usize,
    /// Instantiated head, e.g. `(put-on a b)`.
    pub name: String,
    pub args: Vec<ObjId>,
    pub precond_pos: Vec<u32>,
    pub precond_neg: Vec<u32>,
    pub network: SubNetwork,
}

impl GroundMethod {
    pub fn applicable(&self, s: &State) -> bool {
        self.precond_pos.iter().all(|&f| s.contains(f))
            && self.precond_neg.iter().all(|&f| !s.contains(f))
    }
}

fn literal_list(
    e: &SExpr,
    dom: &DomainModel,
    scope: &Scope<'_>,
    what: &str,
) -> Result<Vec<LiteralSchema>, ParseError> {
    let mut out = Vec::new();
    for c in conjuncts(e)? {
        match parse_condition(c, &dom.predicates, scope)? {
            Condition::Literal(l) => {
                if !out.contains(&l) {
                    out.push(l)
                }
            }
            Condition::Equal { .. } => {
                return err(c.pos(), format!("equality is not allowed in a {what}"))
            }
        }
    }
    Ok(out)
}

pub fn parse_methods(text: &str, dom: &DomainModel) -> Result<MethodLibrary, ParseError> {
    let root = sexpr::parse_one(text)?;
    let items = root.list("`(define ...)`")?;
    if root.head() != Some("define") {
        return err(root.pos(), "expected `(define (methods NAME) ...)`");
    }
    let name = match items.get(1).and_then(SExpr::as_list) {
        Some([kw, n]) if kw.as_atom() == Some("methods") => {
            n.atom("a method library name")?.to_string()
        }
        _ => return err(root.pos(), "expected `(methods NAME)`"),
    };
    let mut lib = MethodLibrary {
        name,
        methods: Vec::new(),
    };
    for section in &items[2..] {
        match section.head() {
            Some(":method") => {
                let m = parse_method(section, dom)?;
                if lib.methods.iter().any(|o| o.name == m.name) {
                    return err(section.pos(), format!("duplicate method `{}`", m.name));
                }
                lib.methods.push(m);
            }
            Some(":domain") | Some(":requirements") => {}
            other => {
                return err(
                    section.pos(),
                    format!("unknown section `{}`", other.unwrap_or("()")),
                )
            }
        }
    }
    Ok(lib)
}

fn parse_method(section: &SExpr, dom: &DomainModel) -> Result<MethodSchema, ParseError> {
    let parts = section.list("a method")?;
    let name = parts
        .get(1)
        .ok_or_else(|| ParseError::new(section.pos(), "method without a name"))?
        .atom("a method name")?;
    let mut params = Vec::new();
    let mut goal_expr = None;
    let mut precond_expr = None;
    let mut network_exprs: &[SExpr] = &[];
    let mut i = 2;
    while i < parts.len() {
        let key = parts[i].atom("a method keyword")?;
        if key == ":network" {
            // Either `:network (:nodes ...) (:orderings ...)` or `:network ((:nodes ...) ...)`.
            let start = i + 1;
            let mut end = start;
            while end < parts.len() && parts[end].as_atom().is_none() {
                end += 1;
            }
            network_exprs = &parts[start..end];
            if let [single] = network_exprs {
                if single
                    .as_list()
                    .and_then(|l| l.first())
                    .is_some_and(|f| f.as_list().is_some())
                {
                    network_exprs = single.as_list().unwrap();
                } else if single.as_list().is_some_and(|l| l.is_empty()) {
                    network_exprs = &[];
                }
            }
            i = end;
            continue;
        }
        let value = parts
            .get(i + 1)
            .ok_or_else(|| ParseError::new(parts[i].pos(), format!("missing value for `{key}`")))?;
        match key {
            ":parameters" => {
                for (v, ty, pos) in typed_names(value.list("a parameter list")?)? {
                    if !v.starts_with('?') {
                        return err(pos, format!("parameter `{v}` must start with `?`"));
                    }
                    let ty = dom
                        .types
                        .id(&ty)
                        .ok_or_else(|| ParseError::new(pos, format!("unknown type `{ty}`")))?;
                    params.push(Parameter { name: v, ty });
                }
            }
            ":goal" => goal_expr = Some(value),
            ":precondition" => precond_expr = Some(value),
            other => return err(parts[i].pos(), format!("unknown method keyword `{other}`")),
        }
        i += 2;
    }
    let scope = Scope {
        params: &params,
        constants: &dom.constants,
    };
    let goal_expr = goal_expr
        .ok_or_else(|| ParseError::new(section.pos(), format!("method `{name}` has no :goal")))?;
    let goal = literal_list(goal_expr, dom, &scope, "method goal")?;
    if goal.is_empty() {
        return err(
            goal_expr.pos(),
            format!("method `{name}` has an empty goal"),
        );
    }
    let mut precond = Vec::new();
    if let Some(e) = precond_expr {
        for c in conjuncts(e)? {
            precond.push(parse_condition(c, &dom.predicates, &scope)?);
        }
    }
    let (mut nodes, mut edges) = parse_network_sections(network_exprs, |e| {
        let lits = literal_list(e, dom, &scope, "subgoal")?;
        if lits.is_empty() {
            return err(e.pos(), "empty subgoal");
        }
        Ok(lits)
    })?;
    let last = nodes.len();
    for k in 0..last {
        edges.push((k, last));
    }
    nodes.push(("goal".to_string(), goal.clone()));
    Ok(MethodSchema {
        name: name.to_string(),
        params,
        goal,
        precond,
        nodes,
        edges,
    })
}

impl MethodLibrary {
    pub fn display<'a>(&'a self, dom: &'a DomainModel) -> LibraryDisplay<'a> {
        LibraryDisplay { lib: self, dom }
    }
}

pub struct LibraryDisplay<'a> {
    lib: &'a MethodLibrary,
    dom: &'a DomainModel,
}

impl std::fmt::Display for LibraryDisplay<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "(define (methods {})", self.lib.name)?;
        for m in &self.lib.methods {
            write!(f, "  (:method {} :parameters ", m.name)?;
            write_params(f, &m.params, &self.dom.types)?;
            f.write_str(" :goal ")?;
            write_literals(f, &m.goal, &self.dom.predicates, &m.params)?;
            f.write_str(" :precondition ")?;
            write_conditions(f, &m.precond, &self.dom.predicates, &m.params)?;
            f.write_str("\n    :network (:nodes")?;
            for (n, lits) in &m.nodes[..m.last()] {
                write!(f, " ({n} ")?;
                write_literals(f, lits, &self.dom.predicates, &m.params)?;
                f.write_str(")")?;
            }
            f.write_str(") (:orderings")?;
            for &(a, b) in m.edges.iter().filter(|e| e.1 != m.last()) {
                write!(f, " ({} {})", m.nodes[a].0, m.nodes[b].0)?;
            }
            f.write_str("))\n")?;
        }
        f.write_str(")\n")
    }
}

/// Ground literal lookup: `None` for a positive atom outside the fact
/// universe (it can never hold), `Some(None)` for a negative one (it always
/// holds).
fn ground_literal(
    task: &GroundTask,
    l: &LiteralSchema,
    binding: &[ObjId],
) -> Option<Option<Literal>> {
    let atom = Atom {
        pred: l.atom.pred,
        args: l
            .atom
            .args
            .iter()
            .map(|t| resolve(task, t, binding))
            .collect(),
    };
    match task.fact_id(&atom) {
        Some(fact) => Some(Some(Literal {
            fact,
            positive: l.positive,
        })),
        None if l.positive => None,
        None => Some(None),
    }
}

fn resolve(task: &GroundTask, t: &Term, binding: &[ObjId]) -> ObjId {
    match t {
        Term::Var(v) => binding[*v],
        Term::Const(c) => task
            .objects
            .iter()
            .position(|(n, _)| n == c)
            .expect("domain constant"),
    }
}

fn condition_holds(task: &GroundTask, c: &Condition, binding: &[ObjId], s: &State) -> bool {
    match c {
        Condition::Equal {
            left,
            right,
            positive,
        } => (resolve(task, left, binding) == resolve(task, right, binding)) == *positive,
        Condition::Literal(l) => match ground_literal(task, l, binding) {
            None => false,
            Some(None) => true,
            Some(Some(lit)) => lit.holds(s),
        },
    }
}

fn vars_of(c: &Condition) -> Vec<usize> {
    let terms: Vec<&Term> = match c {
        Condition::Equal { left, right, .. } => vec![left, right],
        Condition::Literal(l) => l.atom.args.iter().collect(),
    };
    terms
        .into_iter()
        .filter_map(|t| match t {
            Term::Var(v) => Some(*v),
            Term::Const(_) => None,
        })
        .collect()
}

/// Extends partial bindings of `m`'s goal so that every literal of `d`
/// matches some goal literal.
fn unify_disjunct(
    task: &GroundTask,
    m: &MethodSchema,
    d: &[Literal],
    binding: &mut Vec<Option<ObjId>>,
    out: &mut Vec<Vec<Option<ObjId>>>,
) {
    let Some((first, rest)) = d.split_first() else {
        out.push(binding.clone());
        return;
    };
    let atom = task.fact_atom(first.fact);
    for gl in m
        .goal
        .iter()
        .filter(|gl| gl.positive == first.positive && gl.atom.pred == atom.pred)
    {
        let saved = binding.clone();
        let ok = gl.atom.args.iter().zip(&atom.args).all(|(t, &o)| match t {
            Term::Const(c) => task.objects[o].0 == *c,
            Term::Var(v) => {
                if !task
                    .domain
                    .types
                    .is_subtype(task.objects[o].1, m.params[*v].ty)
                {
                    return false;
                }
                match binding[*v] {
                    Some(b) => b == o,
                    None => {
                        binding[*v] = Some(o);
                        true
                    }
                }
            }
        });
        if ok {
            unify_disjunct(task, m, rest, binding, out);
        }
        *binding = saved;
    }
}

fn complete_bindings(
    task: &GroundTask,
    m: &MethodSchema,
    s: &State,
    binding: &mut Vec<Option<ObjId>>,
    checks: &[Vec<&Condition>],
    out: &mut BTreeSet<Vec<ObjId>>,
) {
    match binding.iter().position(Option::is_none) {
        None => {
            let full: Vec<ObjId> = binding.iter().map(|b| b.unwrap()).collect();
            if m.precond.iter().all(|c| condition_holds(task, c, &full, s)) {
                out.insert(full);
            }
        }
        Some(v) => {
            for &o in task.objects_of_type(m.params[v].ty) {
                binding[v] = Some(o);
                let prefix_ok = checks[v].iter().all(|c| {
                    let vars = vars_of(c);
                    if vars.iter().any(|&x| binding[x].is_none()) {
                        return true;
                    }
                    let tmp: Vec<ObjId> = binding.iter().map(|b| b.unwrap_or(0)).collect();
                    condition_holds(task, c, &tmp, s)
                });
                if prefix_ok {
                    complete_bindings(task, m, s, binding, checks, out);
                }
            }
            binding[v] = None;
        }
    }
}

/// Instantiates `m` under a complete binding. Returns `None` when some
/// subgoal contains a positive atom outside the fact universe.
pub fn instantiate(
    task: &GroundTask,
    schema: usize,
    m: &MethodSchema,
    args: &[ObjId],
) -> Option<GroundMethod> {
    let mut precond_pos = Vec::new();
    let mut precond_neg = Vec::new();
    for c in &m.precond {
        if let Condition::Literal(l) = c {
            match ground_literal(task, l, args)? {
                Some(lit) if lit.positive => precond_pos.push(lit.fact),
                Some(lit) => precond_neg.push(lit.fact),
                None => {}
            }
        }
    }
    let mut nodes = Vec::with_capacity(m.nodes.len());
    for (_, lits) in &m.nodes {
        let mut conj = Vec::new();
        for l in lits {
            if let Some(lit) = ground_literal(task, l, args)? {
                conj.push(lit);
            }
        }
        nodes.push(Arc::new(GoalFormula::conjunction(conj).ok()?));
    }
    let mut name = format!("({}", m.name);
    for &o in args {
        name.push(' ');
        name.push_str(&task.objects[o].0);
    }
    name.push(')');
    Some(GroundMethod {
        schema,
        name,
        args: args.to_vec(),
        precond_pos,
        precond_neg,
        network: SubNetwork {
            nodes,
            edges: m.edges.clone(),
            last: m.last(),
        },
    })
}

/// Ground instances of `m` whose goal covers a whole disjunct of `g` and
/// whose precondition holds in `s`, ordered by binding.
pub fn relevant_method_instances(
    lib: &MethodLibrary,
    schema: usize,
    g: &GoalFormula,
    s: &State,
    task: &GroundTask,
) -> Vec<GroundMethod> {
    let m = &lib.methods[schema];
    let mut partial = Vec::new();
    for d in g.disjuncts() {
        if d.is_empty() {
            continue;
        }
        let mut b = vec![None; m.params.len()];
        unify_disjunct(task, m, d, &mut b, &mut partial);
    }
    partial.sort();
    partial.dedup();
    // Precondition conjuncts are checked once the variable completing them is bound.
    let mut checks: Vec<Vec<&Condition>> = vec![Vec::new(); m.params.len()];
    for c in &m.precond {
        if let Some(&v) = vars_of(c).iter().max() {
            checks[v].push(c);
        }
    }
    let mut bindings = BTreeSet::new();
    for mut b in partial {
        complete_bindings(task, m, s, &mut b, &checks, &mut bindings);
    }
    bindings
        .into_iter()
        .filter_map(|args| instantiate(task, schema, m, &args))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse_domain;

    const BW: &str = include_str!("../../tests/fixtures/blocksworld-domain.pddl");

    #[test]
    fn implicit_last_node() {
        let dom = parse_domain(BW).unwrap();
        let lib = parse_methods(
            "(define (methods m)
               (:method direct :parameters (?x - block) :goal (holding ?x) :precondition (clear ?x))
               (:method two :parameters (?x ?y - block) :goal (on ?x ?y)
                 :network (:nodes (s1 (clear ?y)) (s2 (holding ?x))) (:orderings (s1 s2))))",
            &dom,
        )
        .unwrap();
        let direct = &lib.methods[0];
        assert_eq!(direct.nodes.len(), 1);
        assert!(direct.edges.is_empty());
        let two = &lib.methods[1];
        assert_eq!(two.nodes.len(), 3);
        let mut e = two.edges.clone();
        e.sort();
        assert_eq!(e, vec![(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn cyclic_subgoals_rejected() {
        let dom = parse_domain(BW).unwrap();
        let r = parse_methods(
            "(define (methods m) (:method c :parameters (?x - block) :goal (holding ?x)
               :network (:nodes (a (clear ?x)) (b (handempty))) (:orderings (a b) (b a))))",
            &dom,
        );
        assert!(r.is_err());
    }

    #[test]
    fn unknown_variable_rejected() {
        let dom = parse_domain(BW).unwrap();
        let e = parse_methods(
            "(define (methods m) (:method c :parameters (?x - block) :goal (on ?x ?y)))",
            &dom,
        )
        .unwrap_err();
        assert!(e.message.contains("?y"));
    }

    #[test]
    fn print_parse_round_trip() {
        let dom = parse_domain(BW).unwrap();
        let lib = parse_methods(
            "(define (methods m) (:method two :parameters (?x ?y - block) :goal (on ?x ?y)
               :precondition (and (not (= ?x ?y)) (clear ?x))
               :network (:nodes (s1 (clear ?y)) (s2 (and (holding ?x) (clear ?y)))) (:orderings (s1 s2))))",
            &dom,
        )
        .unwrap();
        let printed = lib.display(&dom).to_string();
        assert_eq!(parse_methods(&printed, &dom).unwrap(), lib);
    }
}
