use std::collections::HashSet;
use std::hash::BuildHasherDefault;

use super::tt::KeyHasher;
use crate::game::StateKey;

/// Ordered, duplicate-free set of positions awaiting one evaluator call.
#[derive(Debug)]
pub struct BatchBuffer<G> {
    entries: Vec<(StateKey, G)>,
    keys: HashSet<StateKey, BuildHasherDefault<KeyHasher>>,
    capacity: usize,
}

impl<G> BatchBuffer<G> {
    pub fn new(capacity: usize) -> Self {
        assert!(capacity >= 1);
        BatchBuffer {
            entries: Vec::with_capacity(capacity),
            keys: HashSet::default(),
            capacity,
        }
    }

    /// Adds `state` unless it is already queued or the buffer is full.
    pub fn push(&mut self, key: StateKey, state: G) -> bool {
        if self.is_full() || !self.keys.insert(key) {
            return false;
        }
        self.entries.push((key, state));
        true
    }

    pub fn contains(&self, key: &StateKey) -> bool {
        self.keys.contains(key)
    }

    pub fn is_full(&self) -> bool {
        self.entries.len() >= self.capacity
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn keys(&self) -> impl Iterator<Item = &StateKey> {
        self.entries.iter().map(|(k, _)| k)
    }

    /// Empties the buffer, returning its contents in insertion order.
    pub fn take(&mut self) -> Vec<(StateKey, G)> {
        self.keys.clear();
        std::mem::take(&mut self.entries)
    }

    pub fn clear(&mut self) {
        self.keys.clear();
        self.entries.clear();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dedup_and_capacity() {
        let mut b = BatchBuffer::new(2);
        assert!(b.push(StateKey::new(0, 1), "a"));
        assert!(!b.push(StateKey::new(0, 1), "a again"));
        assert!(b.push(StateKey::new(0, 2), "b"));
        assert!(b.is_full());
        assert!(!b.push(StateKey::new(0, 3), "c"));
        let out = b.take();
        assert_eq!(out.iter().map(|e| e.1).collect::<Vec<_>>(), vec!["a", "b"]);
        assert!(b.is_empty());
        assert!(b.push(StateKey::new(0, 1), "a"));
    }
}
