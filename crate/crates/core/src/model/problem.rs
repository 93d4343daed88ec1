//! Problem files: objects, initial atoms, a classical goal and/or an initial
//! goal network.

use std::collections::HashMap;
use std::fmt;

use super::domain::{self, err, typed_names, DomainModel, PredId, TypeId};
use crate::sexpr::{self, ParseError, SExpr};

pub type ObjId = usize;

/// A ground atom over problem objects.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub pred: PredId,
    pub args: Vec<ObjId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AtomLiteral {
    pub atom: Atom,
    pub positive: bool,
}

/// A goal in disjunctive normal form over ground atoms.
pub type Dnf = Vec<Vec<AtomLiteral>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetworkSpec {
    pub nodes: Vec<(String, Dnf)>,
    pub orderings: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemInstance {
    pub name: String,
    pub domain_name: String,
    /// Domain constants followed by problem objects.
    pub objects: Vec<(String, TypeId)>,
    pub init: Vec<Atom>,
    /// The classical goal conjunction (`:goal`); empty when absent.
    pub goal: Vec<AtomLiteral>,
    pub goal_network: Option<NetworkSpec>,
}

impl ProblemInstance {
    pub fn object_id(&self, name: &str) -> Option<ObjId> {
        self.objects.iter().position(|(n, _)| n == name)
    }

    /// The initial goal network; a plain `:goal` is read as one node.
    pub fn network_spec(&self) -> NetworkSpec {
        match &self.goal_network {
            Some(n) => n.clone(),
            None if self.goal.is_empty() => NetworkSpec {
                nodes: Vec::new(),
                orderings: Vec::new(),
            },
            None => NetworkSpec {
                nodes: vec![("goal".to_string(), vec![self.goal.clone()])],
                orderings: Vec::new(),
            },
        }
    }

    /// The classical goal; falls back to the conjunction of single-disjunct
    /// network nodes when no `:goal` section is given.
    pub fn classical_goal(&self) -> Vec<AtomLiteral> {
        if !self.goal.is_empty() || self.goal_network.is_none() {
            return self.goal.clone();
        }
        let mut out: Vec<AtomLiteral> = Vec::new();
        for (_, dnf) in &self.goal_network.as_ref().unwrap().nodes {
            if let [conj] = dnf.as_slice() {
                for l in conj {
                    if !out.contains(l) {
                        out.push(l.clone());
                    }
                }
            }
        }
        out
    }
}

pub(crate) struct GroundScope<'a> {
    pub dom: &'a DomainModel,
    pub objects: HashMap<&'a str, ObjId>,
}

impl GroundScope<'_> {
    pub(crate) fn atom(&self, e: &SExpr) -> Result<Atom, ParseError> {
        let items = e.list("an atom")?;
        let head = items
            .first()
            .ok_or_else(|| ParseError::new(e.pos(), "empty atom"))?;
        let name = head.atom("a predicate name")?;
        let pred = self
            .dom
            .predicate_id(name)
            .ok_or_else(|| ParseError::new(head.pos(), format!("unknown predicate `{name}`")))?;
        let mut args = Vec::new();
        for a in &items[1..] {
            let o = a.atom("an object name")?;
            args.push(
                *self
                    .objects
                    .get(o)
                    .ok_or_else(|| ParseError::new(a.pos(), format!("unknown object `{o}`")))?,
            );
        }
        let arity = self.dom.predicates[pred].params.len();
        if args.len() != arity {
            return err(
                e.pos(),
                format!(
                    "predicate `{name}` expects {arity} arguments, found {}",
                    args.len()
                ),
            );
        }
        Ok(Atom { pred, args })
    }

    pub(crate) fn literal(&self, e: &SExpr) -> Result<AtomLiteral, ParseError> {
        if e.head() == Some("not") {
            match e.as_list() {
                Some([_, inner]) => Ok(AtomLiteral {
                    atom: self.atom(inner)?,
                    positive: false,
                }),
                _ => err(e.pos(), "`not` takes exactly one argument"),
            }
        } else {
            Ok(AtomLiteral {
                atom: self.atom(e)?,
                positive: true,
            })
        }
    }

    pub(crate) fn conjunction(&self, e: &SExpr) -> Result<Vec<AtomLiteral>, ParseError> {
        let mut out = Vec::new();
        for c in domain::conjuncts(e)? {
            let l = self.literal(c)?;
            if !out.contains(&l) {
                out.push(l);
            }
        }
        Ok(out)
    }

    /// `(or c1 c2 ...)` or a conjunction.
    pub(crate) fn dnf(&self, e: &SExpr) -> Result<Dnf, ParseError> {
        if e.head() == Some("or") {
            let items = e.as_list().unwrap_or_default();
            items[1..].iter().map(|d| self.conjunction(d)).collect()
        } else {
            Ok(vec![self.conjunction(e)?])
        }
    }
}

/// Named nodes and ordering pairs by node index.
pub(crate) type NetworkSections<G> = (Vec<(String, G)>, Vec<(usize, usize)>);

/// Parses `(:nodes (n1 goal) ...)` and `(:orderings (n1 n2) ...)` sections.
pub(crate) fn parse_network_sections<G>(
    sections: &[SExpr],
    mut goal: impl FnMut(&SExpr) -> Result<G, ParseError>,
) -> Result<NetworkSections<G>, ParseError> {
    let mut nodes: Vec<(String, G)> = Vec::new();
    let mut raw_orderings = Vec::new();
    for s in sections {
        let items = s.list("a network section")?;
        match s.head() {
            Some(":nodes") => {
                for n in &items[1..] {
                    match n.as_list() {
                        Some([id, g]) => {
                            let id = id.atom("a node name")?;
                            if nodes.iter().any(|(x, _)| x == id) {
                                return err(n.pos(), format!("duplicate node `{id}`"));
                            }
                            nodes.push((id.to_string(), goal(g)?));
                        }
                        _ => return err(n.pos(), "expected `(NODE GOAL)`"),
                    }
                }
            }
            Some(":orderings") => {
                for o in &items[1..] {
                    match o.as_list() {
                        Some([a, b]) => raw_orderings.push((a, b)),
                        _ => return err(o.pos(), "expected `(BEFORE AFTER)`"),
                    }
                }
            }
            other => {
                return err(
                    s.pos(),
                    format!("unknown network section `{}`", other.unwrap_or("()")),
                )
            }
        }
    }
    let mut orderings = Vec::new();
    for (a, b) in raw_orderings {
        let find = |e: &SExpr| -> Result<usize, ParseError> {
            let name = e.atom("a node name")?;
            nodes
                .iter()
                .position(|(n, _)| n == name)
                .ok_or_else(|| ParseError::new(e.pos(), format!("unknown node `{name}`")))
        };
        let pair = (find(a)?, find(b)?);
        if !orderings.contains(&pair) {
            orderings.push(pair);
        }
    }
    if has_cycle(nodes.len(), &orderings) {
        let pos = sections.first().map(SExpr::pos).unwrap_or_default();
        return err(pos, "cyclic orderings in goal network");
    }
    Ok((nodes, orderings))
}

pub(crate) fn has_cycle(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut indeg = vec![0usize; n];
    for &(_, b) in edges {
        indeg[b] += 1;
    }
    let mut stack: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
    let mut seen = 0;
    while let Some(v) = stack.pop() {
        seen += 1;
        for &(a, b) in edges {
            if a == v {
                indeg[b] -= 1;
                if indeg[b] == 0 {
                    stack.push(b);
                }
            }
        }
    }
    seen != n
}

pub fn parse_problem(text: &str, dom: &DomainModel) -> Result<ProblemInstance, ParseError> {
    let root = sexpr::parse_one(text)?;
    let items = root.list("`(define ...)`")?;
    if root.head() != Some("define") {
        return err(root.pos(), "expected `(define (problem NAME) ...)`");
    }
    let name = match items.get(1).and_then(SExpr::as_list) {
        Some([kw, n]) if kw.as_atom() == Some("problem") => n.atom("a problem name")?.to_string(),
        _ => return err(root.pos(), "expected `(problem NAME)`"),
    };

    let mut objects: Vec<(String, TypeId)> = dom.constants.clone();
    let mut domain_name = dom.name.clone();
    let mut init_expr = None;
    let mut goal_expr = None;
    let mut network_expr = None;
    for section in &items[2..] {
        let parts = section.list("a problem section")?;
        match section.head() {
            Some(":domain") => {
                domain_name = parts
                    .get(1)
                    .map(|d| d.atom("a domain name"))
                    .transpose()?
                    .unwrap_or("")
                    .to_string();
                if domain_name != dom.name {
                    return err(
                        section.pos(),
                        format!("problem is for domain `{domain_name}`, not `{}`", dom.name),
                    );
                }
            }
            Some(":objects") => {
                for (o, ty, pos) in typed_names(&parts[1..])? {
                    let ty = dom
                        .types
                        .id(&ty)
                        .ok_or_else(|| ParseError::new(pos, format!("unknown type `{ty}`")))?;
                    if objects.iter().any(|(n, _)| *n == o) {
                        return err(pos, format!("duplicate object `{o}`"));
                    }
                    objects.push((o, ty));
                }
            }
            Some(":init") => init_expr = Some(parts),
            Some(":goal") => goal_expr = parts.get(1),
            Some(":goal-network") => network_expr = Some(&parts[1..]),
            Some(":metric") | Some(":requirements") => {}
            other => {
                return err(
                    section.pos(),
                    format!("unknown problem section `{}`", other.unwrap_or("()")),
                )
            }
        }
    }

    let scope = GroundScope {
        dom,
        objects: domain::object_index(&objects),
    };
    let mut init = Vec::new();
    if let Some(parts) = init_expr {
        for a in &parts[1..] {
            if a.head() == Some("=") {
                continue; // numeric fluent initialisation, e.g. (= (total-cost) 0)
            }
            let atom = scope.atom(a)?;
            if !init.contains(&atom) {
                init.push(atom);
            }
        }
    }
    let goal = match goal_expr {
        Some(g) => scope.conjunction(g)?,
        None => Vec::new(),
    };
    let goal_network = match network_expr {
        Some(sections) => {
            let (nodes, orderings) = parse_network_sections(sections, |e| {
                let dnf = scope.dnf(e)?;
                if dnf.is_empty() || dnf.iter().any(|d| d.is_empty()) {
                    return err(e.pos(), "network node has an empty goal");
                }
                Ok(dnf)
            })?;
            Some(NetworkSpec { nodes, orderings })
        }
        None => None,
    };
    drop(scope);
    Ok(ProblemInstance {
        name,
        domain_name,
        objects,
        init,
        goal,
        goal_network,
    })
}

pub(crate) struct AtomDisplay<'a> {
    pub atom: &'a Atom,
    pub dom: &'a DomainModel,
    pub objects: &'a [(String, TypeId)],
}

impl fmt::Display for AtomDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.dom.predicates[self.atom.pred].name)?;
        for a in &self.atom.args {
            write!(f, " {}", self.objects[*a].0)?;
        }
        f.write_str(")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::domain::parse_domain;

    pub(crate) const BW: &str = include_str!("../../tests/fixtures/blocksworld-domain.pddl");

    #[test]
    fn two_block_problem() {
        let dom = parse_domain(BW).unwrap();
        let p = parse_problem(
            "(define (problem bw2) (:domain blocksworld) (:objects a b - block)
               (:init (on b a) (ontable a) (clear b) (handempty))
               (:goal (and (on a b))))",
            &dom,
        )
        .unwrap();
        assert_eq!(p.objects.len(), 2);
        assert_eq!(p.init.len(), 4);
        assert_eq!(p.goal.len(), 1);
        assert_eq!(p.network_spec().nodes.len(), 1);
    }

    #[test]
    fn empty_goal_is_empty_conjunction() {
        let dom = parse_domain(BW).unwrap();
        let p = parse_problem(
            "(define (problem e) (:domain blocksworld) (:objects a - block) (:init (ontable a)) (:goal (and)))",
            &dom,
        )
        .unwrap();
        assert!(p.goal.is_empty());
        assert!(p.network_spec().nodes.is_empty());
    }

    #[test]
    fn undeclared_object_is_named() {
        let dom = parse_domain(BW).unwrap();
        let e = parse_problem(
            "(define (problem e) (:domain blocksworld) (:objects a - block) (:init (ontable z)))",
            &dom,
        )
        .unwrap_err();
        assert!(e.message.contains("`z`"), "{e}");
    }

    #[test]
    fn goal_network_section() {
        let dom = parse_domain(BW).unwrap();
        let p = parse_problem(
            "(define (problem n) (:domain blocksworld) (:objects a b - block) (:init (ontable a))
               (:goal-network (:nodes (n1 (on a b)) (n2 (or (ontable a) (and (clear a) (clear b)))))
                              (:orderings (n1 n2))))",
            &dom,
        )
        .unwrap();
        let n = p.goal_network.unwrap();
        assert_eq!(n.nodes.len(), 2);
        assert_eq!(n.nodes[1].1.len(), 2);
        assert_eq!(n.orderings, vec![(0, 1)]);
    }

    #[test]
    fn cyclic_network_rejected() {
        let dom = parse_domain(BW).unwrap();
        let r = parse_problem(
            "(define (problem n) (:domain blocksworld) (:objects a b - block) (:init)
               (:goal-network (:nodes (n1 (on a b)) (n2 (on b a))) (:orderings (n1 n2) (n2 n1))))",
            &dom,
        );
        assert!(r.is_err());
    }
}
