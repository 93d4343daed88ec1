use std::collections::BTreeMap;

use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::model::{FactId, State};

pub type LmId = usize;

/// A fact (one atom) or disjunction of atoms that must hold at some point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Landmark {
    atoms: Vec<FactId>,
}

impl Landmark {
    pub fn new(mut atoms: Vec<FactId>) -> Landmark {
        atoms.sort_unstable();
        atoms.dedup();
        assert!(!atoms.is_empty(), "landmark without atoms");
        Landmark { atoms }
    }

    pub fn fact(f: FactId) -> Landmark {
        Landmark { atoms: vec![f] }
    }

    pub fn atoms(&self) -> &[FactId] {
        &self.atoms
    }

    pub fn is_fact(&self) -> bool {
        self.atoms.len() == 1
    }

    pub fn holds(&self, s: &State) -> bool {
        self.atoms.iter().any(|&f| s.contains(f))
    }

    /// `self ⊨ other`: every atom of `self` is an atom of `other`.
    pub fn entails(&self, other: &Landmark) -> bool {
        self.atoms
            .iter()
            .all(|f| other.atoms.binary_search(f).is_ok())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderingKind {
    Natural,
    GreedyNecessary,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("landmark {0} is not in the graph")]
    Missing(LmId),
}

/// Landmarks with stable ids and at most one ordering per directed pair.
/// Removed landmarks leave a hole until [`LandmarkGraph::compact`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LandmarkGraph {
    slots: Vec<Option<Landmark>>,
    orderings: BTreeMap<(LmId, LmId), OrderingKind>,
    by_fact: FxHashMap<FactId, Vec<LmId>>,
}

impl LandmarkGraph {
    pub fn new() -> LandmarkGraph {
        LandmarkGraph::default()
    }

    pub fn len(&self) -> usize {
        self.slots.iter().flatten().count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// One past the largest id ever issued.
    pub fn capacity(&self) -> usize {
        self.slots.len()
    }

    pub fn contains(&self, id: LmId) -> bool {
        self.slots.get(id).is_some_and(Option::is_some)
    }

    pub fn get(&self, id: LmId) -> Option<&Landmark> {
        self.slots.get(id).and_then(Option::as_ref)
    }

    pub fn landmarks(&self) -> impl Iterator<Item = (LmId, &Landmark)> {
        self.slots
            .iter()
            .enumerate()
            .filter_map(|(i, l)| l.as_ref().map(|l| (i, l)))
    }

    pub fn orderings(&self) -> impl Iterator<Item = (LmId, LmId, OrderingKind)> + '_ {
        self.orderings.iter().map(|(&(a, b), &k)| (a, b, k))
    }

    pub fn ordering(&self, from: LmId, to: LmId) -> Option<OrderingKind> {
        self.orderings.get(&(from, to)).copied()
    }

    pub fn find(&self, lm: &Landmark) -> Option<LmId> {
        self.by_fact
            .get(&lm.atoms[0])?
            .iter()
            .copied()
            .find(|&id| self.slots[id].as_ref() == Some(lm))
    }

    fn insert(&mut self, lm: Landmark) -> LmId {
        let id = self.slots.len();
        for &f in &lm.atoms {
            self.by_fact.entry(f).or_default().push(id);
        }
        self.slots.push(Some(lm));
        id
    }

    fn remove(&mut self, id: LmId) {
        if let Some(lm) = self.slots[id].take() {
            for f in &lm.atoms {
                if let Some(v) = self.by_fact.get_mut(f) {
                    v.retain(|&x| x != id);
                }
            }
            self.orderings.retain(|&(a, b), _| a != id && b != id);
        }
    }

    /// Inserts `lm` unless an existing landmark entails it. A fact landmark
    /// replaces every disjunctive landmark containing it, together with their
    /// orderings. Returns the id standing for `lm` and whether it is new.
    pub fn add_lm(&mut self, lm: Landmark) -> (LmId, bool) {
        let mut existing: Option<LmId> = None;
        for f in &lm.atoms {
            if let Some(ids) = self.by_fact.get(f) {
                for &id in ids {
                    if self.slots[id].as_ref().is_some_and(|o| o.entails(&lm)) {
                        existing = Some(existing.map_or(id, |e: LmId| e.min(id)));
                    }
                }
            }
        }
        if let Some(id) = existing {
            return (id, false);
        }
        if lm.is_fact() {
            let supersets: Vec<LmId> = self.by_fact.get(&lm.atoms[0]).cloned().unwrap_or_default();
            for id in supersets {
                self.remove(id);
            }
        }
        (self.insert(lm), true)
    }

    /// Inserts `from → to` of the given kind; greedy-necessary overrides
    /// natural on the same pair.
    pub fn add_ordering(
        &mut self,
        from: LmId,
        to: LmId,
        kind: OrderingKind,
    ) -> Result<(), GraphError> {
        for id in [from, to] {
            if !self.contains(id) {
                return Err(GraphError::Missing(id));
            }
        }
        if from == to {
            return Ok(());
        }
        let e = self.orderings.entry((from, to)).or_insert(kind);
        *e = (*e).max(kind);
        Ok(())
    }

    /// `add_lm` followed by an ordering from the returned landmark to `to`.
    /// Returns the landmark id and whether it was newly inserted.
    ///
    /// When `lm` is absorbed by a strictly stronger landmark, a
    /// greedy-necessary ordering is kept only as natural: `p ∨ r` holding
    /// right before `to` does not mean `p` does, and acceptance waiting on
    /// `p` would count `to` again after it was reached through `r`.
    pub fn add_lm_and_ordering(
        &mut self,
        lm: Landmark,
        to: LmId,
        kind: OrderingKind,
    ) -> Result<(LmId, bool), GraphError> {
        if !self.contains(to) {
            return Err(GraphError::Missing(to));
        }
        let (id, new) = self.add_lm(lm.clone());
        let kind = match self.get(id) {
            Some(stored) if *stored != lm => OrderingKind::Natural,
            _ => kind,
        };
        if self.contains(to) {
            self.add_ordering(id, to, kind)?;
        }
        Ok((id, new))
    }

    /// Renumbers landmarks densely in id order.
    pub fn compact(&self) -> LandmarkGraph {
        let mut remap = vec![usize::MAX; self.slots.len()];
        let mut out = LandmarkGraph::new();
        for (id, lm) in self.landmarks() {
            remap[id] = out.insert(lm.clone());
        }
        for (a, b, k) in self.orderings() {
            out.orderings.insert((remap[a], remap[b]), k);
        }
        out
    }

    /// Structural check: every ordering endpoint exists and none is a loop.
    pub fn well_formed(&self) -> bool {
        self.orderings
            .keys()
            .all(|&(a, b)| a != b && self.contains(a) && self.contains(b))
    }
}
