//! Instantiation of operator schemas over problem objects.

use std::sync::Arc;

use rustc_hash::FxHashMap;

use super::domain::{Condition, DomainModel, LiteralSchema, OperatorSchema, Term, TypeId};
use super::problem::{Atom, AtomDisplay, ObjId, ProblemInstance};
use super::state::{FactId, State};
use crate::cost::Cost;

pub type ActionId = u32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundAction {
    pub id: ActionId,
    /// Instantiated head, e.g. `(stack a b)`.
    pub name: String,
    pub schema: usize,
    pub args: Vec<ObjId>,
    pub pre_pos: Vec<FactId>,
    pub pre_neg: Vec<FactId>,
    pub add: Vec<FactId>,
    pub del: Vec<FactId>,
    pub cost: Cost,
}

impl GroundAction {
    pub fn applicable(&self, s: &State) -> bool {
        self.pre_pos.iter().all(|&f| s.contains(f)) && self.pre_neg.iter().all(|&f| !s.contains(f))
    }

    pub fn adds(&self, f: FactId) -> bool {
        self.add.binary_search(&f).is_ok()
    }

    pub fn deletes(&self, f: FactId) -> bool {
        self.del.binary_search(&f).is_ok()
    }
}

/// A grounded classical task. Immutable after construction.
#[derive(Debug)]
pub struct GroundTask {
    pub domain: Arc<DomainModel>,
    pub objects: Vec<(String, TypeId)>,
    facts: Vec<Atom>,
    fact_names: Vec<String>,
    fact_index: FxHashMap<Atom, FactId>,
    pub actions: Vec<GroundAction>,
    pub initial: State,
    adders: Vec<Vec<ActionId>>,
    deleters: Vec<Vec<ActionId>>,
    pos_users: Vec<Vec<ActionId>>,
    neg_users: Vec<Vec<ActionId>>,
    action_index: FxHashMap<String, ActionId>,
    objects_by_type: Vec<Vec<ObjId>>,
}

impl GroundTask {
    pub fn num_facts(&self) -> usize {
        self.facts.len()
    }

    pub fn num_actions(&self) -> usize {
        self.actions.len()
    }

    pub fn fact_id(&self, atom: &Atom) -> Option<FactId> {
        self.fact_index.get(atom).copied()
    }

    /// Looks a fact up by its printed form, e.g. `(on a b)`.
    pub fn fact_by_name(&self, name: &str) -> Option<FactId> {
        self.fact_names
            .iter()
            .position(|n| n == name)
            .map(|i| i as FactId)
    }

    pub fn fact_atom(&self, f: FactId) -> &Atom {
        &self.facts[f as usize]
    }

    pub fn fact_name(&self, f: FactId) -> &str {
        &self.fact_names[f as usize]
    }

    pub fn action(&self, a: ActionId) -> &GroundAction {
        &self.actions[a as usize]
    }

    pub fn action_by_name(&self, name: &str) -> Option<ActionId> {
        self.action_index.get(name).copied()
    }

    /// Actions with `f` among their add effects, in id order.
    pub fn adders(&self, f: FactId) -> &[ActionId] {
        &self.adders[f as usize]
    }

    pub fn deleters(&self, f: FactId) -> &[ActionId] {
        &self.deleters[f as usize]
    }

    /// Actions with `f` as a positive precondition.
    pub fn pos_users(&self, f: FactId) -> &[ActionId] {
        &self.pos_users[f as usize]
    }

    /// Actions with `f` as a negative precondition.
    pub fn neg_users(&self, f: FactId) -> &[ActionId] {
        &self.neg_users[f as usize]
    }

    /// Objects whose type is `ty` or one of its subtypes.
    pub fn objects_of_type(&self, ty: TypeId) -> &[ObjId] {
        &self.objects_by_type[ty]
    }

    pub fn state_from_atoms<'a>(&self, atoms: impl IntoIterator<Item = &'a Atom>) -> Option<State> {
        let mut s = State::empty(self.num_facts());
        for a in atoms {
            s.insert(self.fact_id(a)?);
        }
        Some(s)
    }

    /// Facts of `s` rendered as atom strings.
    pub fn describe(&self, s: &State) -> Vec<String> {
        s.facts().map(|f| self.fact_name(f).to_string()).collect()
    }
}

struct Grounder<'a> {
    dom: &'a DomainModel,
    prob: &'a ProblemInstance,
    objects_by_type: Vec<Vec<ObjId>>,
    init: rustc_hash::FxHashSet<Atom>,
    static_preds: Vec<bool>,
    addable_memo: FxHashMap<Atom, bool>,
    facts: Vec<Atom>,
    fact_index: FxHashMap<Atom, FactId>,
}

impl Grounder<'_> {
    fn intern(&mut self, atom: Atom) -> FactId {
        if let Some(&f) = self.fact_index.get(&atom) {
            return f;
        }
        let f = self.facts.len() as FactId;
        self.fact_index.insert(atom.clone(), f);
        self.facts.push(atom);
        f
    }

    fn resolve(&self, t: &Term, binding: &[ObjId]) -> ObjId {
        match t {
            Term::Var(v) => binding[*v],
            Term::Const(c) => self
                .prob
                .object_id(c)
                .expect("constant present in problem objects"),
        }
    }

    fn instantiate(&self, l: &LiteralSchema, binding: &[ObjId]) -> Atom {
        Atom {
            pred: l.atom.pred,
            args: l
                .atom
                .args
                .iter()
                .map(|t| self.resolve(t, binding))
                .collect(),
        }
    }

    /// Whether some operator's add effect can produce `atom`, judged by types.
    fn addable(&mut self, atom: &Atom) -> bool {
        if let Some(&r) = self.addable_memo.get(atom) {
            return r;
        }
        let types = &self.dom.types;
        let r = self.dom.operators.iter().any(|op| {
            op.effects
                .iter()
                .filter(|e| e.positive && e.atom.pred == atom.pred)
                .any(|e| {
                    let mut bound: Vec<Option<ObjId>> = vec![None; op.params.len()];
                    e.atom.args.iter().zip(&atom.args).all(|(t, &o)| match t {
                        Term::Const(c) => self.prob.objects[o].0 == *c,
                        Term::Var(v) => {
                            if !types.is_subtype(self.prob.objects[o].1, op.params[*v].ty) {
                                return false;
                            }
                            match bound[*v] {
                                Some(b) => b == o,
                                None => {
                                    bound[*v] = Some(o);
                                    true
                                }
                            }
                        }
                    })
                })
        });
        self.addable_memo.insert(atom.clone(), r);
        r
    }

    /// False if the condition is statically violated under a complete binding
    /// of its variables.
    fn condition_possible(&mut self, c: &Condition, binding: &[ObjId]) -> bool {
        match c {
            Condition::Equal {
                left,
                right,
                positive,
            } => (self.resolve(left, binding) == self.resolve(right, binding)) == *positive,
            Condition::Literal(l) => {
                let atom = self.instantiate(l, binding);
                let in_init = self.init.contains(&atom);
                if l.positive {
                    in_init || (!self.static_preds[atom.pred] && self.addable(&atom))
                } else {
                    !(self.static_preds[atom.pred] && in_init)
                }
            }
        }
    }

    fn ground_operator(&mut self, schema: usize, op: &OperatorSchema, out: &mut Vec<GroundAction>) {
        // Conditions become checkable once their highest variable is bound.
        let mut checks: Vec<Vec<&Condition>> = vec![Vec::new(); op.params.len() + 1];
        for c in &op.precond {
            let vars: Vec<usize> = match c {
                Condition::Equal { left, right, .. } => {
                    [left, right].iter().filter_map(|t| var(t)).collect()
                }
                Condition::Literal(l) => l.atom.args.iter().filter_map(var).collect(),
            };
            let level = vars.iter().map(|v| v + 1).max().unwrap_or(0);
            checks[level].push(c);
        }
        if !checks[0].iter().all(|c| self.condition_possible(c, &[])) {
            return;
        }
        let mut binding = Vec::with_capacity(op.params.len());
        self.extend(schema, op, &checks, &mut binding, out);
    }

    fn extend(
        &mut self,
        schema: usize,
        op: &OperatorSchema,
        checks: &[Vec<&Condition>],
        binding: &mut Vec<ObjId>,
        out: &mut Vec<GroundAction>,
    ) {
        let depth = binding.len();
        if depth == op.params.len() {
            self.emit(schema, op, binding, out);
            return;
        }
        let candidates = self.objects_by_type[op.params[depth].ty].clone();
        for o in candidates {
            binding.push(o);
            if checks[depth + 1]
                .iter()
                .all(|c| self.condition_possible(c, binding))
            {
                self.extend(schema, op, checks, binding, out);
            }
            binding.pop();
        }
    }

    fn emit(
        &mut self,
        schema: usize,
        op: &OperatorSchema,
        binding: &[ObjId],
        out: &mut Vec<GroundAction>,
    ) {
        let mut pre_pos = Vec::new();
        let mut pre_neg = Vec::new();
        for c in &op.precond {
            if let Condition::Literal(l) = c {
                let f = self.intern(self.instantiate(l, binding));
                if l.positive {
                    pre_pos.push(f);
                } else {
                    pre_neg.push(f);
                }
            }
        }
        let mut add = Vec::new();
        let mut del = Vec::new();
        for e in &op.effects {
            let f = self.intern(self.instantiate(e, binding));
            if e.positive {
                add.push(f);
            } else {
                del.push(f);
            }
        }
        for v in [&mut pre_pos, &mut pre_neg, &mut add, &mut del] {
            v.sort_unstable();
            v.dedup();
        }
        if pre_pos.iter().any(|f| pre_neg.binary_search(f).is_ok()) {
            return;
        }
        // Add-after-delete: an atom both added and deleted ends up true.
        del.retain(|f| add.binary_search(f).is_err());
        let mut name = format!("({}", op.name);
        for &o in binding {
            name.push(' ');
            name.push_str(&self.prob.objects[o].0);
        }
        name.push(')');
        out.push(GroundAction {
            id: out.len() as ActionId,
            name,
            schema,
            args: binding.to_vec(),
            pre_pos,
            pre_neg,
            add,
            del,
            cost: op.cost,
        });
    }
}

fn var(t: &Term) -> Option<usize> {
    match t {
        Term::Var(v) => Some(*v),
        Term::Const(_) => None,
    }
}

pub(crate) fn objects_by_type(dom: &DomainModel, objects: &[(String, TypeId)]) -> Vec<Vec<ObjId>> {
    (0..dom.types.len())
        .map(|ty| {
            (0..objects.len())
                .filter(|&o| dom.types.is_subtype(objects[o].1, ty))
                .collect()
        })
        .collect()
}

/// Grounds `prob` against `dom`. Actions with a statically false precondition
/// atom (never initially true and never added) are dropped.
pub fn ground(dom: &DomainModel, prob: &ProblemInstance) -> GroundTask {
    let dom_arc = Arc::new(dom.clone());
    let static_preds = (0..dom.predicates.len())
        .map(|p| {
            !dom.operators
                .iter()
                .any(|op| op.effects.iter().any(|e| e.atom.pred == p))
        })
        .collect();
    let mut g = Grounder {
        dom,
        prob,
        objects_by_type: objects_by_type(dom, &prob.objects),
        init: prob.init.iter().cloned().collect(),
        static_preds,
        addable_memo: FxHashMap::default(),
        facts: Vec::new(),
        fact_index: FxHashMap::default(),
    };
    for a in &prob.init {
        g.intern(a.clone());
    }
    for l in &prob.goal {
        g.intern(l.atom.clone());
    }
    if let Some(n) = &prob.goal_network {
        for (_, dnf) in &n.nodes {
            for l in dnf.iter().flatten() {
                g.intern(l.atom.clone());
            }
        }
    }
    let mut actions = Vec::new();
    for (i, op) in dom.operators.iter().enumerate() {
        g.ground_operator(i, op, &mut actions);
    }

    let n = g.facts.len();
    let mut adders = vec![Vec::new(); n];
    let mut deleters = vec![Vec::new(); n];
    let mut pos_users = vec![Vec::new(); n];
    let mut neg_users = vec![Vec::new(); n];
    for a in &actions {
        for &f in &a.pre_pos {
            pos_users[f as usize].push(a.id);
        }
        for &f in &a.pre_neg {
            neg_users[f as usize].push(a.id);
        }
        for &f in &a.add {
            adders[f as usize].push(a.id);
        }
        for &f in &a.del {
            deleters[f as usize].push(a.id);
        }
    }
    let initial = State::from_facts(n, prob.init.iter().map(|a| g.fact_index[a]));
    let fact_names = g
        .facts
        .iter()
        .map(|a| {
            AtomDisplay {
                atom: a,
                dom,
                objects: &prob.objects,
            }
            .to_string()
        })
        .collect();
    let action_index = actions.iter().map(|a| (a.name.clone(), a.id)).collect();
    GroundTask {
        domain: dom_arc,
        objects: prob.objects.clone(),
        facts: g.facts,
        fact_names,
        fact_index: g.fact_index,
        actions,
        initial,
        adders,
        deleters,
        pos_users,
        neg_users,
        action_index,
        objects_by_type: g.objects_by_type,
    }
}
