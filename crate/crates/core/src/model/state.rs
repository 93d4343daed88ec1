use std::fmt;

pub type FactId = u32;

/// A set of fact ids over a fixed universe, stored as a bitset so equality and
/// hashing are cheap for duplicate detection.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State {
    bits: Box<[u64]>,
}

impl State {
    pub fn empty(num_facts: usize) -> State {
        State {
            bits: vec![0; num_facts.div_ceil(64)].into_boxed_slice(),
        }
    }

    pub fn from_facts(num_facts: usize, facts: impl IntoIterator<Item = FactId>) -> State {
        let mut s = State::empty(num_facts);
        for f in facts {
            s.insert(f);
        }
        s
    }

    #[inline]
    pub fn contains(&self, f: FactId) -> bool {
        let f = f as usize;
        self.bits
            .get(f / 64)
            .is_some_and(|w| w >> (f % 64) & 1 == 1)
    }

    #[inline]
    pub fn insert(&mut self, f: FactId) {
        let f = f as usize;
        self.bits[f / 64] |= 1 << (f % 64);
    }

    #[inline]
    pub fn remove(&mut self, f: FactId) {
        let f = f as usize;
        self.bits[f / 64] &= !(1 << (f % 64));
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    /// Fact ids in increasing order.
    pub fn facts(&self) -> impl Iterator<Item = FactId> + '_ {
        self.bits.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros();
                w &= w - 1;
                Some((i * 64) as FactId + b)
            })
        })
    }

    pub fn byte_size(&self) -> usize {
        self.bits.len() * 8
    }
}

impl fmt::Debug for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.facts()).finish()
    }
}
