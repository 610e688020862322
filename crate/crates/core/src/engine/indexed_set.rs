/// Set of channel ids with O(1) insert, remove and uniform indexing.
#[derive(Clone, Debug, Default)]
pub(crate) struct IndexedSet {
    items: Vec<u32>,
    pos: Vec<u32>,
}

const ABSENT: u32 = u32::MAX;

impl IndexedSet {
    pub fn with_capacity(capacity: usize) -> Self {
        Self { items: Vec::new(), pos: vec![ABSENT; capacity] }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn grow(&mut self, capacity: usize) {
        if capacity > self.pos.len() {
            self.pos.resize(capacity, ABSENT);
        }
    }

    pub fn contains(&self, id: u32) -> bool {
        self.pos.get(id as usize).is_some_and(|&p| p != ABSENT)
    }

    pub fn insert(&mut self, id: u32) {
        if !self.contains(id) {
            self.pos[id as usize] = self.items.len() as u32;
            self.items.push(id);
        }
    }

    pub fn remove(&mut self, id: u32) {
        let p = self.pos[id as usize];
        if p == ABSENT {
            return;
        }
        let last = *self.items.last().expect("nonempty");
        self.items.swap_remove(p as usize);
        if last != id {
            self.pos[last as usize] = p;
        }
        self.pos[id as usize] = ABSENT;
    }

    pub fn set(&mut self, id: u32, present: bool) {
        if present {
            self.insert(id);
        } else {
            self.remove(id);
        }
    }

    pub fn get(&self, i: usize) -> u32 {
        self.items[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.items.iter().copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_remove() {
        let mut s = IndexedSet::with_capacity(10);
        for id in [3, 7, 1, 7] {
            s.insert(id);
        }
        assert_eq!(s.len(), 3);
        s.remove(3);
        assert!(!s.contains(3));
        assert!(s.contains(7) && s.contains(1));
        s.remove(1);
        s.remove(1);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![7]);
        s.grow(20);
        s.insert(19);
        assert_eq!(s.len(), 2);
    }
}
