use std::collections::BTreeMap;
use std::hash::{DefaultHasher, Hash, Hasher};
use std::sync::Arc;

use super::formula::{FormulaError, GoalFormula, Literal};
use crate::model::problem::NetworkSpec;
use crate::model::GroundTask;

pub type NodeId = u32;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum NetworkError {
    #[error("node {0} is not in the network")]
    Absent(NodeId),
    #[error("node {0} has predecessors")]
    Constrained(NodeId),
    #[error("goal of node `{node}`: {source}")]
    BadGoal { node: String, source: FormulaError },
    #[error("atom {0} is not part of the grounded task")]
    UnknownAtom(String),
}

/// Subgoal network of a ground method. `last` is the node carrying the
/// method's own goal; every other node precedes it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubNetwork {
    pub nodes: Vec<Arc<GoalFormula>>,
    pub edges: Vec<(usize, usize)>,
    pub last: usize,
}

/// A partially ordered multiset of goal nodes. Operations return new
/// networks and leave the receiver untouched.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GoalNetwork {
    nodes: Vec<(NodeId, Arc<GoalFormula>)>,
    edges: Vec<(NodeId, NodeId)>,
    next_id: NodeId,
}

/// Isomorphism-invariant identity of a goal network.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NetworkKey(Box<[u64]>);

impl GoalNetwork {
    pub fn empty() -> GoalNetwork {
        GoalNetwork::default()
    }

    pub fn from_spec(spec: &NetworkSpec, task: &GroundTask) -> Result<GoalNetwork, NetworkError> {
        let mut gn = GoalNetwork::empty();
        let mut ids = Vec::new();
        for (name, dnf) in &spec.nodes {
            let mut disjuncts = Vec::new();
            for conj in dnf {
                let mut d = Vec::new();
                for l in conj {
                    let fact = task.fact_id(&l.atom).ok_or_else(|| {
                        NetworkError::UnknownAtom(format!("{:?} in node `{name}`", l.atom))
                    })?;
                    d.push(Literal {
                        fact,
                        positive: l.positive,
                    });
                }
                disjuncts.push(d);
            }
            let goal = GoalFormula::new(disjuncts).map_err(|source| NetworkError::BadGoal {
                node: name.clone(),
                source,
            })?;
            ids.push(gn.add_node(goal));
        }
        for &(a, b) in &spec.orderings {
            gn.add_edge(ids[a], ids[b]);
        }
        Ok(gn)
    }

    pub fn add_node(&mut self, goal: impl Into<Arc<GoalFormula>>) -> NodeId {
        let id = self.next_id;
        self.next_id += 1;
        self.nodes.push((id, goal.into()));
        id
    }

    /// Adds `before ≺ after`. The caller keeps the relation acyclic.
    pub fn add_edge(&mut self, before: NodeId, after: NodeId) {
        if let Err(i) = self.edges.binary_search(&(before, after)) {
            self.edges.insert(i, (before, after));
        }
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = (NodeId, &GoalFormula)> {
        self.nodes.iter().map(|(id, g)| (*id, &**g))
    }

    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    pub fn contains(&self, t: NodeId) -> bool {
        self.index(t).is_some()
    }

    fn index(&self, t: NodeId) -> Option<usize> {
        self.nodes.binary_search_by_key(&t, |(id, _)| *id).ok()
    }

    pub fn goal(&self, t: NodeId) -> Option<&GoalFormula> {
        self.index(t).map(|i| &*self.nodes[i].1)
    }

    pub fn successors(&self, t: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.edges.iter().filter(move |e| e.0 == t).map(|e| e.1)
    }

    pub fn predecessors(&self, t: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.edges.iter().filter(move |e| e.1 == t).map(|e| e.0)
    }

    pub fn is_unconstrained(&self, t: NodeId) -> bool {
        self.contains(t) && !self.edges.iter().any(|e| e.1 == t)
    }

    /// Nodes without predecessors, ascending by id.
    pub fn unconstrained(&self) -> Vec<NodeId> {
        self.nodes
            .iter()
            .map(|(id, _)| *id)
            .filter(|&id| !self.edges.iter().any(|e| e.1 == id))
            .collect()
    }

    fn check_unconstrained(&self, t: NodeId) -> Result<usize, NetworkError> {
        let i = self.index(t).ok_or(NetworkError::Absent(t))?;
        if self.edges.iter().any(|e| e.1 == t) {
            return Err(NetworkError::Constrained(t));
        }
        Ok(i)
    }

    /// Goal release: removes the unconstrained node `t`.
    pub fn release(&self, t: NodeId) -> Result<GoalNetwork, NetworkError> {
        let i = self.check_unconstrained(t)?;
        let mut out = self.clone();
        out.nodes.remove(i);
        out.edges.retain(|e| e.0 != t);
        Ok(out)
    }

    /// Method application via the unconstrained node `t`: the method's nodes
    /// get fresh ids and its last node is placed before `t`.
    pub fn apply_method(&self, t: NodeId, sub: &SubNetwork) -> Result<GoalNetwork, NetworkError> {
        self.check_unconstrained(t)?;
        let mut out = self.clone();
        let ids: Vec<NodeId> = sub.nodes.iter().map(|g| out.add_node(g.clone())).collect();
        for &(a, b) in &sub.edges {
            out.add_edge(ids[a], ids[b]);
        }
        out.add_edge(ids[sub.last], t);
        Ok(out)
    }

    pub fn canonical_key(&self) -> NetworkKey {
        let mut sig: BTreeMap<NodeId, u64> = BTreeMap::new();
        // Successors before predecessors; the relation is acyclic.
        let mut pending: Vec<NodeId> = self.nodes.iter().map(|(id, _)| *id).collect();
        while !pending.is_empty() {
            let before = pending.len();
            pending.retain(|&t| {
                let mut succ = Vec::new();
                for s in self.successors(t) {
                    match sig.get(&s) {
                        Some(&h) => succ.push(h),
                        None => return true,
                    }
                }
                succ.sort_unstable();
                let mut h = DefaultHasher::new();
                self.goal(t).unwrap().hash(&mut h);
                succ.hash(&mut h);
                sig.insert(t, h.finish());
                false
            });
            assert!(pending.len() < before, "goal network ordering is cyclic");
        }
        let mut all: Vec<u64> = sig.into_values().collect();
        all.sort_unstable();
        NetworkKey(all.into_boxed_slice())
    }

    pub fn is_acyclic(&self) -> bool {
        let ids: Vec<NodeId> = self.nodes.iter().map(|(id, _)| *id).collect();
        let idx = |t: NodeId| ids.binary_search(&t).unwrap();
        let edges: Vec<(usize, usize)> =
            self.edges.iter().map(|&(a, b)| (idx(a), idx(b))).collect();
        !crate::model::problem::has_cycle(ids.len(), &edges)
    }

    pub fn display<'a>(&'a self, task: &'a GroundTask) -> String {
        let mut out = String::new();
        for (id, g) in self.nodes() {
            out.push_str(&format!("{id}: {}\n", g.display(task)));
        }
        for (a, b) in &self.edges {
            out.push_str(&format!("{a} < {b}\n"));
        }
        out
    }
}
