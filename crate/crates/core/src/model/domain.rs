//! Lifted classical domains: types, predicates and operator schemas.

use std::collections::HashMap;
use std::fmt;

use crate::cost::Cost;
use crate::sexpr::{self, ParseError, Pos, SExpr};

pub type TypeId = usize;
pub type PredId = usize;

pub const OBJECT_TYPE: TypeId = 0;

/// Type names with single-parent inheritance rooted at `object`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeHierarchy {
    names: Vec<String>,
    parents: Vec<Option<TypeId>>,
}

impl Default for TypeHierarchy {
    fn default() -> Self {
        TypeHierarchy {
            names: vec!["object".to_string()],
            parents: vec![None],
        }
    }
}

impl TypeHierarchy {
    pub fn id(&self, name: &str) -> Option<TypeId> {
        self.names.iter().position(|n| n == name)
    }

    pub fn name(&self, id: TypeId) -> &str {
        &self.names[id]
    }

    pub fn parent(&self, id: TypeId) -> Option<TypeId> {
        self.parents[id]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// True when `sub` equals `sup` or inherits from it.
    pub fn is_subtype(&self, mut sub: TypeId, sup: TypeId) -> bool {
        loop {
            if sub == sup {
                return true;
            }
            match self.parents[sub] {
                Some(p) => sub = p,
                None => return false,
            }
        }
    }

    fn intern(&mut self, name: &str) -> TypeId {
        match self.id(name) {
            Some(id) => id,
            None => {
                self.names.push(name.to_string());
                self.parents.push(Some(OBJECT_TYPE));
                self.names.len() - 1
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Predicate {
    pub name: String,
    pub params: Vec<TypeId>,
}

/// An argument position inside a schema: a head variable or a named constant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(usize),
    Const(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AtomSchema {
    pub pred: PredId,
    pub args: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LiteralSchema {
    pub atom: AtomSchema,
    pub positive: bool,
}

/// One conjunct of a precondition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Condition {
    Literal(LiteralSchema),
    /// `(= a b)` or its negation; evaluated at instantiation time.
    Equal {
        left: Term,
        right: Term,
        positive: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Parameter {
    pub name: String,
    pub ty: TypeId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorSchema {
    pub name: String,
    pub params: Vec<Parameter>,
    pub precond: Vec<Condition>,
    pub effects: Vec<LiteralSchema>,
    pub cost: Cost,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DomainModel {
    pub name: String,
    pub requirements: Vec<String>,
    pub types: TypeHierarchy,
    pub constants: Vec<(String, TypeId)>,
    pub predicates: Vec<Predicate>,
    pub operators: Vec<OperatorSchema>,
}

impl DomainModel {
    pub fn predicate_id(&self, name: &str) -> Option<PredId> {
        self.predicates.iter().position(|p| p.name == name)
    }

    pub fn uses_action_costs(&self) -> bool {
        self.requirements.iter().any(|r| r == ":action-costs")
    }
}

pub(crate) fn err<T>(pos: Pos, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError::new(pos, message))
}

/// Splits a PDDL typed list (`a b - t c`) into `(name, type name)` pairs.
pub(crate) fn typed_names(items: &[SExpr]) -> Result<Vec<(String, String, Pos)>, ParseError> {
    let mut out = Vec::new();
    let mut pending: Vec<(String, Pos)> = Vec::new();
    let mut i = 0;
    while i < items.len() {
        let tok = items[i].atom("a name")?;
        if tok == "-" {
            let ty = items
                .get(i + 1)
                .ok_or_else(|| ParseError::new(items[i].pos(), "missing type after `-`"))?;
            if ty.head() == Some("either") {
                return err(ty.pos(), "`either` types are not supported");
            }
            let ty = ty.atom("a type name")?;
            out.extend(pending.drain(..).map(|(n, p)| (n, ty.to_string(), p)));
            i += 2;
        } else {
            pending.push((tok.to_string(), items[i].pos()));
            i += 1;
        }
    }
    out.extend(
        pending
            .into_iter()
            .map(|(n, p)| (n, "object".to_string(), p)),
    );
    Ok(out)
}

/// Resolves schema terms against a parameter list and the known constants.
pub(crate) struct Scope<'a> {
    pub params: &'a [Parameter],
    pub constants: &'a [(String, TypeId)],
}

impl Scope<'_> {
    pub(crate) fn term(&self, e: &SExpr) -> Result<Term, ParseError> {
        let tok = e.atom("a term")?;
        if let Some(var) = tok.strip_prefix('?') {
            let _ = var;
            match self.params.iter().position(|p| p.name == tok) {
                Some(i) => Ok(Term::Var(i)),
                None => err(e.pos(), format!("variable `{tok}` is not a parameter")),
            }
        } else if self.constants.iter().any(|(c, _)| c == tok) {
            Ok(Term::Const(tok.to_string()))
        } else {
            err(e.pos(), format!("unknown constant `{tok}`"))
        }
    }
}

pub(crate) fn parse_atom_schema(
    e: &SExpr,
    predicates: &[Predicate],
    scope: &Scope<'_>,
) -> Result<AtomSchema, ParseError> {
    let items = e.list("an atom")?;
    let head = items
        .first()
        .ok_or_else(|| ParseError::new(e.pos(), "empty atom"))?;
    let name = head.atom("a predicate name")?;
    let pred = predicates
        .iter()
        .position(|p| p.name == name)
        .ok_or_else(|| ParseError::new(head.pos(), format!("unknown predicate `{name}`")))?;
    let args = items[1..]
        .iter()
        .map(|a| scope.term(a))
        .collect::<Result<Vec<_>, _>>()?;
    if args.len() != predicates[pred].params.len() {
        return err(
            e.pos(),
            format!(
                "predicate `{name}` expects {} arguments, found {}",
                predicates[pred].params.len(),
                args.len()
            ),
        );
    }
    Ok(AtomSchema { pred, args })
}

/// Flattens `(and ...)`, a single literal, or `()` into its conjuncts.
pub(crate) fn conjuncts(e: &SExpr) -> Result<Vec<&SExpr>, ParseError> {
    let items = e.list("a conjunction")?;
    if items.is_empty() {
        return Ok(Vec::new());
    }
    if e.head() == Some("and") {
        let mut out = Vec::new();
        for item in &items[1..] {
            out.extend(conjuncts(item)?);
        }
        Ok(out)
    } else {
        Ok(vec![e])
    }
}

pub(crate) fn parse_condition(
    e: &SExpr,
    predicates: &[Predicate],
    scope: &Scope<'_>,
) -> Result<Condition, ParseError> {
    let (inner, positive) = match e.head() {
        Some("not") => {
            let items = e.as_list().unwrap_or_default();
            if items.len() != 2 {
                return err(e.pos(), "`not` takes exactly one argument");
            }
            (&items[1], false)
        }
        _ => (e, true),
    };
    match inner.head() {
        Some("=") => {
            let items = inner.as_list().unwrap_or_default();
            if items.len() != 3 {
                return err(inner.pos(), "`=` takes exactly two arguments");
            }
            Ok(Condition::Equal {
                left: scope.term(&items[1])?,
                right: scope.term(&items[2])?,
                positive,
            })
        }
        Some("or") | Some("imply") | Some("forall") | Some("exists") | Some("when") => err(
            inner.pos(),
            format!("unsupported construct `{}`", inner.head().unwrap_or("")),
        ),
        _ => Ok(Condition::Literal(LiteralSchema {
            atom: parse_atom_schema(inner, predicates, scope)?,
            positive,
        })),
    }
}

pub fn parse_domain(text: &str) -> Result<DomainModel, ParseError> {
    let root = sexpr::parse_one(text)?;
    let items = root.list("`(define ...)`")?;
    if root.head() != Some("define") {
        return err(root.pos(), "expected `(define (domain NAME) ...)`");
    }
    let header = items
        .get(1)
        .ok_or_else(|| ParseError::new(root.pos(), "missing domain header"))?;
    let name = match header.as_list() {
        Some([kw, n]) if kw.as_atom() == Some("domain") => n.atom("a domain name")?.to_string(),
        _ => return err(header.pos(), "expected `(domain NAME)`"),
    };

    let mut dom = DomainModel {
        name,
        requirements: Vec::new(),
        types: TypeHierarchy::default(),
        constants: Vec::new(),
        predicates: Vec::new(),
        operators: Vec::new(),
    };

    let mut actions = Vec::new();
    for section in &items[2..] {
        let parts = section.list("a domain section")?;
        match section.head() {
            Some(":requirements") => {
                dom.requirements = parts[1..]
                    .iter()
                    .map(|r| r.atom("a requirement").map(str::to_string))
                    .collect::<Result<_, _>>()?;
            }
            Some(":types") => {
                for (child, parent, pos) in typed_names(&parts[1..])? {
                    if child == "object" {
                        return err(pos, "`object` cannot be redeclared");
                    }
                    let p = dom.types.intern(&parent);
                    let c = dom.types.intern(&child);
                    if dom.types.is_subtype(p, c) {
                        return err(pos, format!("cyclic type declaration for `{child}`"));
                    }
                    dom.types.parents[c] = Some(p);
                }
            }
            Some(":constants") => {
                for (c, ty, pos) in typed_names(&parts[1..])? {
                    let ty = dom
                        .types
                        .id(&ty)
                        .ok_or_else(|| ParseError::new(pos, format!("unknown type `{ty}`")))?;
                    dom.constants.push((c, ty));
                }
            }
            Some(":predicates") => {
                for p in &parts[1..] {
                    let decl = p.list("a predicate declaration")?;
                    let pname = decl
                        .first()
                        .ok_or_else(|| ParseError::new(p.pos(), "empty predicate declaration"))?
                        .atom("a predicate name")?;
                    if dom.predicate_id(pname).is_some() {
                        return err(p.pos(), format!("duplicate predicate `{pname}`"));
                    }
                    let mut params = Vec::new();
                    for (_, ty, pos) in typed_names(&decl[1..])? {
                        params.push(
                            dom.types.id(&ty).ok_or_else(|| {
                                ParseError::new(pos, format!("unknown type `{ty}`"))
                            })?,
                        );
                    }
                    dom.predicates.push(Predicate {
                        name: pname.to_string(),
                        params,
                    });
                }
            }
            Some(":functions") => {}
            Some(":action") => actions.push(section),
            other => {
                return err(
                    section.pos(),
                    format!("unknown domain section `{}`", other.unwrap_or("()")),
                )
            }
        }
    }

    let unit_costs = !dom.uses_action_costs();
    for a in actions {
        let op = parse_action(a, &dom, unit_costs)?;
        dom.operators.push(op);
    }
    Ok(dom)
}

fn parse_action(
    section: &SExpr,
    dom: &DomainModel,
    unit_costs: bool,
) -> Result<OperatorSchema, ParseError> {
    let parts = section.list("an action")?;
    let name = parts
        .get(1)
        .ok_or_else(|| ParseError::new(section.pos(), "action without a name"))?
        .atom("an action name")?
        .to_string();
    let mut params = Vec::new();
    let mut precond_expr = None;
    let mut effect_expr = None;
    let mut i = 2;
    while i < parts.len() {
        let key = parts[i].atom("an action keyword")?;
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
            ":precondition" => precond_expr = Some(value),
            ":effect" => effect_expr = Some(value),
            other => return err(parts[i].pos(), format!("unknown action keyword `{other}`")),
        }
        i += 2;
    }

    let scope = Scope {
        params: &params,
        constants: &dom.constants,
    };
    let mut precond = Vec::new();
    if let Some(e) = precond_expr {
        for c in conjuncts(e)? {
            precond.push(parse_condition(c, &dom.predicates, &scope)?);
        }
    }
    let mut effects: Vec<LiteralSchema> = Vec::new();
    let mut cost = Cost::ONE;
    let mut explicit_cost = false;
    if let Some(e) = effect_expr {
        for c in conjuncts(e)? {
            if c.head() == Some("increase") {
                let items = c.as_list().unwrap_or_default();
                if items.len() != 3 || items[1].head() != Some("total-cost") {
                    return err(c.pos(), "only `(increase (total-cost) k)` is supported");
                }
                let lit = items[2].atom("a cost literal")?;
                let k: Cost = lit
                    .parse()
                    .map_err(|_| ParseError::new(items[2].pos(), format!("bad cost `{lit}`")))?;
                if k.is_negative() {
                    return err(items[2].pos(), format!("negative cost `{lit}`"));
                }
                if explicit_cost {
                    cost += k;
                } else {
                    cost = k;
                    explicit_cost = true;
                }
                continue;
            }
            match parse_condition(c, &dom.predicates, &scope)? {
                Condition::Literal(l) => effects.push(l),
                Condition::Equal { .. } => {
                    return err(c.pos(), "equality is not allowed in effects")
                }
            }
        }
    }
    if unit_costs {
        cost = Cost::ONE;
    }
    for (i, a) in effects.iter().enumerate() {
        if effects[i + 1..]
            .iter()
            .any(|b| a.atom == b.atom && a.positive != b.positive)
        {
            return err(
                section.pos(),
                format!("action `{name}` both adds and deletes the same atom"),
            );
        }
    }
    Ok(OperatorSchema {
        name,
        params,
        precond,
        effects,
        cost,
    })
}

fn write_term(f: &mut fmt::Formatter<'_>, t: &Term, params: &[Parameter]) -> fmt::Result {
    match t {
        Term::Var(i) => f.write_str(&params[*i].name),
        Term::Const(c) => f.write_str(c),
    }
}

fn write_literal(
    f: &mut fmt::Formatter<'_>,
    l: &LiteralSchema,
    preds: &[Predicate],
    params: &[Parameter],
) -> fmt::Result {
    if !l.positive {
        f.write_str("(not ")?;
    }
    write!(f, "({}", preds[l.atom.pred].name)?;
    for a in &l.atom.args {
        f.write_str(" ")?;
        write_term(f, a, params)?;
    }
    f.write_str(")")?;
    if !l.positive {
        f.write_str(")")?;
    }
    Ok(())
}

pub(crate) fn write_conditions(
    f: &mut fmt::Formatter<'_>,
    conds: &[Condition],
    preds: &[Predicate],
    params: &[Parameter],
) -> fmt::Result {
    f.write_str("(and")?;
    for c in conds {
        f.write_str(" ")?;
        match c {
            Condition::Literal(l) => write_literal(f, l, preds, params)?,
            Condition::Equal {
                left,
                right,
                positive,
            } => {
                if !positive {
                    f.write_str("(not ")?;
                }
                f.write_str("(= ")?;
                write_term(f, left, params)?;
                f.write_str(" ")?;
                write_term(f, right, params)?;
                f.write_str(")")?;
                if !positive {
                    f.write_str(")")?;
                }
            }
        }
    }
    f.write_str(")")
}

pub(crate) fn write_literals(
    f: &mut fmt::Formatter<'_>,
    lits: &[LiteralSchema],
    preds: &[Predicate],
    params: &[Parameter],
) -> fmt::Result {
    f.write_str("(and")?;
    for l in lits {
        f.write_str(" ")?;
        write_literal(f, l, preds, params)?;
    }
    f.write_str(")")
}

pub(crate) fn write_params(
    f: &mut fmt::Formatter<'_>,
    params: &[Parameter],
    types: &TypeHierarchy,
) -> fmt::Result {
    f.write_str("(")?;
    for (i, p) in params.iter().enumerate() {
        if i > 0 {
            f.write_str(" ")?;
        }
        write!(f, "{} - {}", p.name, types.name(p.ty))?;
    }
    f.write_str(")")
}

/// Prints the domain back in the file grammar it was read from.
impl fmt::Display for DomainModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "(define (domain {})", self.name)?;
        if !self.requirements.is_empty() {
            writeln!(f, "  (:requirements {})", self.requirements.join(" "))?;
        }
        f.write_str("  (:types")?;
        for id in 1..self.types.len() {
            let parent = self.types.parent(id).unwrap_or(OBJECT_TYPE);
            write!(f, " {} - {}", self.types.name(id), self.types.name(parent))?;
        }
        f.write_str(")\n")?;
        if !self.constants.is_empty() {
            f.write_str("  (:constants")?;
            for (c, ty) in &self.constants {
                write!(f, " {} - {}", c, self.types.name(*ty))?;
            }
            f.write_str(")\n")?;
        }
        f.write_str("  (:predicates")?;
        for p in &self.predicates {
            write!(f, " ({}", p.name)?;
            for (i, ty) in p.params.iter().enumerate() {
                write!(f, " ?a{} - {}", i, self.types.name(*ty))?;
            }
            f.write_str(")")?;
        }
        f.write_str(")\n")?;
        for op in &self.operators {
            write!(f, "  (:action {} :parameters ", op.name)?;
            write_params(f, &op.params, &self.types)?;
            f.write_str(" :precondition ")?;
            write_conditions(f, &op.precond, &self.predicates, &op.params)?;
            f.write_str(" :effect ")?;
            f.write_str("(and")?;
            for l in &op.effects {
                f.write_str(" ")?;
                write_literal(f, l, &self.predicates, &op.params)?;
            }
            if self.uses_action_costs() {
                write!(f, " (increase (total-cost) {})", op.cost)?;
            }
            f.write_str(")")?;
            f.write_str(")\n")?;
        }
        f.write_str(")\n")
    }
}

/// Object names and types visible to a problem: domain constants first.
pub(crate) fn object_index(objects: &[(String, TypeId)]) -> HashMap<&str, usize> {
    objects
        .iter()
        .enumerate()
        .map(|(i, (n, _))| (n.as_str(), i))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "(define (domain tiny)
        (:requirements :strips :action-costs)
        (:predicates (done))
        (:action finish :parameters () :effect (and (done) (increase (total-cost) 2))))";

    #[test]
    fn minimal_domain() {
        let d = parse_domain(MINIMAL).unwrap();
        assert_eq!(d.predicates.len(), 1);
        assert_eq!(d.operators.len(), 1);
        assert_eq!(d.operators[0].cost, Cost::integer(2));
    }

    #[test]
    fn costs_default_to_one_without_requirement() {
        let d = parse_domain(&MINIMAL.replace(":action-costs", "")).unwrap();
        assert_eq!(d.operators[0].cost, Cost::ONE);
    }

    #[test]
    fn rejects_unbound_effect_variable() {
        let text = "(define (domain d) (:predicates (p ?x))
            (:action a :parameters (?x) :effect (p ?y)))";
        let e = parse_domain(text).unwrap_err();
        assert!(e.message.contains("?y"), "{e}");
        assert_eq!(e.pos.line, 2);
    }

    #[test]
    fn rejects_arity_mismatch_and_unknown_predicate() {
        let text = "(define (domain d) (:predicates (p ?x))
            (:action a :parameters (?x) :effect (p ?x ?x)))";
        assert!(parse_domain(text)
            .unwrap_err()
            .message
            .contains("expects 1"));
        let text = "(define (domain d) (:predicates (p ?x))
            (:action a :parameters (?x) :precondition (q ?x) :effect (p ?x)))";
        assert!(parse_domain(text)
            .unwrap_err()
            .message
            .contains("unknown predicate `q`"));
    }

    #[test]
    fn rejects_negative_cost() {
        let text = MINIMAL.replace("total-cost) 2", "total-cost) -1");
        assert!(parse_domain(&text)
            .unwrap_err()
            .message
            .contains("negative cost"));
    }

    #[test]
    fn rejects_conflicting_effects() {
        let text = "(define (domain d) (:predicates (p))
            (:action a :parameters () :effect (and (p) (not (p)))))";
        assert!(parse_domain(text).is_err());
    }

    #[test]
    fn type_hierarchy() {
        let text = "(define (domain d) (:types truck plane - vehicle vehicle place - object)
            (:predicates (at ?v - vehicle ?p - place)))";
        let d = parse_domain(text).unwrap();
        let truck = d.types.id("truck").unwrap();
        let vehicle = d.types.id("vehicle").unwrap();
        assert!(d.types.is_subtype(truck, vehicle));
        assert!(d.types.is_subtype(truck, OBJECT_TYPE));
        assert!(!d.types.is_subtype(vehicle, truck));
    }
}
