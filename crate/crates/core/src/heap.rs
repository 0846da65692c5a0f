//! Binary max-heap whose entries can be removed through a handle.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Handle {
    slot: usize,
    generation: u32,
}

#[derive(Debug, Clone)]
struct Slot {
    generation: u32,
    /// Position in `heap` while occupied.
    pos: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct IndexedHeap<K, V> {
    heap: Vec<(K, V, usize)>,
    slots: Vec<Slot>,
    free: Vec<usize>,
}

impl<K: Ord, V> Default for IndexedHeap<K, V> {
    fn default() -> Self {
        Self::new()
    }
}

impl<K: Ord, V> IndexedHeap<K, V> {
    pub fn new() -> Self {
        IndexedHeap { heap: Vec::new(), slots: Vec::new(), free: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    pub fn contains(&self, h: Handle) -> bool {
        self.slots.get(h.slot).is_some_and(|s| s.generation == h.generation && s.pos.is_some())
    }

    pub fn push(&mut self, key: K, value: V) -> Handle {
        let slot = match self.free.pop() {
            Some(s) => s,
            None => {
                self.slots.push(Slot { generation: 0, pos: None });
                self.slots.len() - 1
            }
        };
        let pos = self.heap.len();
        self.slots[slot].pos = Some(pos);
        self.heap.push((key, value, slot));
        self.sift_up(pos);
        Handle { slot, generation: self.slots[slot].generation }
    }

    pub fn peek(&self) -> Option<(&K, &V)> {
        self.heap.first().map(|(k, v, _)| (k, v))
    }

    pub fn pop(&mut self) -> Option<(K, V)> {
        if self.heap.is_empty() {
            None
        } else {
            Some(self.remove_at(0))
        }
    }

    /// Remove the entry behind `h`; `None` if it is no longer in the heap.
    pub fn remove(&mut self, h: Handle) -> Option<(K, V)> {
        if !self.contains(h) {
            return None;
        }
        let pos = self.slots[h.slot].pos.expect("checked by contains");
        Some(self.remove_at(pos))
    }

    fn remove_at(&mut self, pos: usize) -> (K, V) {
        let last = self.heap.len() - 1;
        self.swap(pos, last);
        let (k, v, slot) = self.heap.pop().expect("non-empty");
        let s = &mut self.slots[slot];
        s.pos = None;
        s.generation = s.generation.wrapping_add(1);
        self.free.push(slot);
        if pos < self.heap.len() {
            self.sift_down(pos);
            self.sift_up(pos);
        }
        (k, v)
    }

    fn swap(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        self.heap.swap(a, b);
        let (sa, sb) = (self.heap[a].2, self.heap[b].2);
        self.slots[sa].pos = Some(a);
        self.slots[sb].pos = Some(b);
    }

    fn sift_up(&mut self, mut pos: usize) {
        while pos > 0 {
            let parent = (pos - 1) / 2;
            if self.heap[pos].0 <= self.heap[parent].0 {
                break;
            }
            self.swap(pos, parent);
            pos = parent;
        }
    }

    fn sift_down(&mut self, mut pos: usize) {
        let n = self.heap.len();
        loop {
            let (l, r) = (2 * pos + 1, 2 * pos + 2);
            let mut best = pos;
            if l < n && self.heap[l].0 > self.heap[best].0 {
                best = l;
            }
            if r < n && self.heap[r].0 > self.heap[best].0 {
                best = r;
            }
            if best == pos {
                break;
            }
            self.swap(pos, best);
            pos = best;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeMap;

    #[test]
    fn basic_order_and_removal() {
        let mut h = IndexedHeap::new();
        let a = h.push(3, 'a');
        let b = h.push(9, 'b');
        let _c = h.push(5, 'c');
        assert_eq!(h.peek(), Some((&9, &'b')));
        assert_eq!(h.remove(b), Some((9, 'b')));
        assert_eq!(h.remove(b), None);
        assert_eq!(h.pop(), Some((5, 'c')));
        assert!(h.contains(a));
        // slot of `b` gets reused; the stale handle must stay dead
        let d = h.push(1, 'd');
        assert!(!h.contains(b));
        assert!(h.contains(d));
        assert_eq!(h.pop(), Some((3, 'a')));
        assert_eq!(h.pop(), Some((1, 'd')));
        assert!(h.is_empty());
    }

    #[derive(Debug, Clone)]
    enum Op {
        Push(i32),
        Pop,
        Remove(usize),
    }

    fn op() -> impl Strategy<Value = Op> {
        prop_oneof![
            (-50i32..50).prop_map(Op::Push),
            Just(Op::Pop),
            (0usize..64).prop_map(Op::Remove),
        ]
    }

    proptest! {
        #[test]
        fn behaves_like_a_multiset(ops in proptest::collection::vec(op(), 1..200)) {
            let mut heap = IndexedHeap::new();
            let mut model: BTreeMap<usize, i32> = BTreeMap::new();
            let mut handles = Vec::new();
            for o in ops {
                match o {
                    Op::Push(k) => {
                        let id = handles.len();
                        handles.push(heap.push(k, id));
                        model.insert(id, k);
                    }
                    Op::Pop => {
                        let expected = model.values().max().copied();
                        let got = heap.pop();
                        prop_assert_eq!(got.map(|(k, _)| k), expected);
                        if let Some((_, id)) = got {
                            model.remove(&id);
                        }
                    }
                    Op::Remove(i) => {
                        if let Some(&h) = handles.get(i) {
                            let got = heap.remove(h);
                            prop_assert_eq!(got.map(|(k, _)| k), model.remove(&i));
                        }
                    }
                }
                prop_assert_eq!(heap.len(), model.len());
            }
        }
    }
}
