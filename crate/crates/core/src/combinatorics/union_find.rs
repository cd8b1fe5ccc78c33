//! Disjoint-set forest with path compression and union by size.

#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn find(&mut self, mut node: usize) -> usize {
        let mut root = node;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[node] != root {
            let next = self.parent[node];
            self.parent[node] = root;
            node = next;
        }
        root
    }

    /// Merges the sets containing `a` and `b`. Returns the surviving root and
    /// the absorbed one, or `None` when they were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> Option<(usize, usize)> {
        let mut ra = self.find(a);
        let mut rb = self.find(b);
        if ra == rb {
            return None;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        Some((ra, rb))
    }

    /// Restricted-growth labelling of the current classes, in element order.
    pub fn labels(&mut self) -> Vec<usize> {
        let n = self.len();
        let mut root_label = vec![usize::MAX; n];
        let mut next = 0;
        let mut out = Vec::with_capacity(n);
        for v in 0..n {
            let r = self.find(v);
            if root_label[r] == usize::MAX {
                root_label[r] = next;
                next += 1;
            }
            out.push(root_label[r]);
        }
        out
    }
}
