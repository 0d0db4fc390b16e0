//! Disjoint-set forest, optionally tracking a Z₂ label relative to the root.

#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
    /// Parity of the path from a node to its parent.
    offset: Vec<u8>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), rank: vec![0; n], offset: vec![0; n] }
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.parent.len()
    }

    /// Root of `x` and the parity of `x` relative to it.
    pub fn find_with_parity(&mut self, x: usize) -> (usize, u8) {
        let p = self.parent[x];
        if p == x {
            return (x, 0);
        }
        let (root, parent_offset) = self.find_with_parity(p);
        self.offset[x] ^= parent_offset;
        self.parent[x] = root;
        (root, self.offset[x])
    }

    pub fn find(&mut self, x: usize) -> usize {
        self.find_with_parity(x).0
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        self.union_with_parity(a, b, 0).unwrap_or(false)
    }

    /// Records `label(a) + label(b) = parity`. Returns `Ok(true)` if two sets
    /// merged, `Ok(false)` if the constraint was already implied, and `Err(())`
    /// if it contradicts earlier constraints.
    pub fn union_with_parity(&mut self, a: usize, b: usize, parity: u8) -> Result<bool, ()> {
        let (ra, pa) = self.find_with_parity(a);
        let (rb, pb) = self.find_with_parity(b);
        if ra == rb {
            return if pa ^ pb == parity & 1 { Ok(false) } else { Err(()) };
        }
        let (hi, lo) = if self.rank[ra] >= self.rank[rb] { (ra, rb) } else { (rb, ra) };
        self.parent[lo] = hi;
        self.offset[lo] = pa ^ pb ^ (parity & 1);
        if self.rank[hi] == self.rank[lo] {
            self.rank[hi] += 1;
        }
        Ok(true)
    }

    /// Dense labels `0..k` for the classes, in order of first appearance.
    pub fn class_labels(&mut self) -> (Vec<usize>, usize) {
        let n = self.len();
        let mut label_of_root = vec![usize::MAX; n];
        let mut labels = vec![0; n];
        let mut next = 0;
        for (x, label) in labels.iter_mut().enumerate() {
            let r = self.find(x);
            if label_of_root[r] == usize::MAX {
                label_of_root[r] = next;
                next += 1;
            }
            *label = label_of_root[r];
        }
        (labels, next)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_unions() {
        let mut uf = UnionFind::new(5);
        assert!(uf.union(0, 1));
        assert!(uf.union(3, 4));
        assert!(!uf.union(1, 0));
        let (labels, k) = uf.class_labels();
        assert_eq!(k, 3);
        assert_eq!(labels, vec![0, 0, 1, 2, 2]);
    }

    #[test]
    fn odd_cycle_is_inconsistent() {
        let mut uf = UnionFind::new(3);
        uf.union_with_parity(0, 1, 1).unwrap();
        uf.union_with_parity(1, 2, 1).unwrap();
        assert_eq!(uf.union_with_parity(0, 2, 0), Ok(false));
        assert_eq!(uf.union_with_parity(2, 0, 1), Err(()));
        assert_eq!(uf.find_with_parity(2).1 ^ uf.find_with_parity(0).1, 0);
    }
}
