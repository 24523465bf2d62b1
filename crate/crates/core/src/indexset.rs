//! Hash set with stable indices, supporting O(1) insert, remove and
//! uniform sampling by index.

use alloc::vec::Vec;
use core::hash::Hash;

use hashbrown::HashMap;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Set of `T` backed by a dense vector and a position map.
///
/// Element order is a pure function of the sequence of inserts and removes,
/// never of hashing, so iteration and sampling are reproducible.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(from = "Vec<T>", into = "Vec<T>")]
#[serde(bound(
    serialize = "T: Serialize + Clone",
    deserialize = "T: Deserialize<'de> + Eq + Hash + Copy"
))]
pub struct IndexedSet<T: Eq + Hash> {
    items: Vec<T>,
    pos: HashMap<T, usize>,
}

impl<T: Eq + Hash + Copy> Default for IndexedSet<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Eq + Hash> PartialEq for IndexedSet<T> {
    /// Order-sensitive: two sets are equal only if they also sample alike.
    fn eq(&self, other: &Self) -> bool {
        self.items == other.items
    }
}

impl<T: Eq + Hash> Eq for IndexedSet<T> {}

impl<T: Eq + Hash + Copy> From<Vec<T>> for IndexedSet<T> {
    fn from(v: Vec<T>) -> Self {
        let mut s = IndexedSet::new();
        for x in v {
            s.insert(x);
        }
        s
    }
}

impl<T: Eq + Hash + Clone> From<IndexedSet<T>> for Vec<T> {
    fn from(s: IndexedSet<T>) -> Self {
        s.items
    }
}

impl<T: Eq + Hash + Copy> IndexedSet<T> {
    pub fn new() -> Self {
        IndexedSet {
            items: Vec::new(),
            pos: HashMap::new(),
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.items.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    #[inline]
    pub fn contains(&self, x: &T) -> bool {
        self.pos.contains_key(x)
    }

    #[inline]
    pub fn get(&self, i: usize) -> Option<&T> {
        self.items.get(i)
    }

    pub fn as_slice(&self) -> &[T] {
        &self.items
    }

    pub fn iter(&self) -> core::slice::Iter<'_, T> {
        self.items.iter()
    }

    /// Inserts `x`; returns its index, or `None` if it was already present.
    pub fn insert(&mut self, x: T) -> Option<usize> {
        if self.pos.contains_key(&x) {
            return None;
        }
        let i = self.items.len();
        self.items.push(x);
        self.pos.insert(x, i);
        Some(i)
    }

    /// Removes `x` by swapping the last element into its slot; returns the
    /// index it occupied.
    pub fn remove(&mut self, x: &T) -> Option<usize> {
        let i = self.pos.remove(x)?;
        self.items.swap_remove(i);
        if i < self.items.len() {
            let moved = self.items[i];
            self.pos.insert(moved, i);
        }
        Some(i)
    }

    /// Exact inverse of a `remove(x)` that returned `i`, provided nothing
    /// else changed in between.
    pub(crate) fn undo_remove(&mut self, x: T, i: usize) {
        debug_assert!(!self.contains(&x));
        if i == self.items.len() {
            self.items.push(x);
        } else {
            let moved = self.items[i];
            self.items.push(moved);
            let last = self.items.len() - 1;
            self.pos.insert(moved, last);
            self.items[i] = x;
        }
        self.pos.insert(x, i);
    }

    /// Exact inverse of the most recent `insert(x)`.
    pub(crate) fn undo_insert(&mut self, x: T) {
        let last = self.items.pop();
        debug_assert!(last == Some(x));
        self.pos.remove(&x);
    }

    /// Uniformly random element, `None` when empty.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<T> {
        if self.items.is_empty() {
            None
        } else {
            Some(self.items[rng.gen_range(0..self.items.len())])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn insert_remove_sample() {
        let mut s = IndexedSet::new();
        assert_eq!(s.insert(3u32), Some(0));
        assert_eq!(s.insert(5), Some(1));
        assert_eq!(s.insert(3), None);
        assert_eq!(s.remove(&3), Some(0));
        assert_eq!(s.as_slice(), &[5]);
        assert!(!s.contains(&3));
        assert!(s.remove(&3).is_none());
        let mut rng = rand_xoshiro::Xoshiro256StarStar::seed_from_u64(0);
        assert_eq!(s.sample(&mut rng), Some(5));
    }

    use rand::SeedableRng;

    proptest! {
        #[test]
        fn undo_restores_exact_order(
            init in proptest::collection::vec(0u32..50, 0..40),
            ops in proptest::collection::vec((any::<bool>(), 0u32..60), 0..20),
        ) {
            let mut s: IndexedSet<u32> = init.into();
            let before = s.clone();
            let mut log = std::vec::Vec::new();
            for (ins, x) in ops {
                if ins {
                    if s.insert(x).is_some() { log.push((true, x, 0)); }
                } else if let Some(i) = s.remove(&x) {
                    log.push((false, x, i));
                }
            }
            for (ins, x, i) in log.into_iter().rev() {
                if ins { s.undo_insert(x) } else { s.undo_remove(x, i) }
            }
            prop_assert_eq!(&s, &before);
            for (i, x) in s.iter().enumerate() {
                prop_assert_eq!(s.pos[x], i);
            }
        }
    }
}
