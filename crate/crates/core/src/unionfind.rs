/// Disjoint sets whose representative is always the least member index.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(len: usize) -> Self {
        UnionFind {
            parent: (0..len).collect(),
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    /// Returns true if the two classes were distinct.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if ra < rb {
            self.parent[rb] = ra;
        } else {
            self.parent[ra] = rb;
        }
        true
    }

    /// Dense class numbering in order of first member.
    pub fn classes(&mut self) -> (Vec<usize>, usize) {
        let mut id = vec![usize::MAX; self.parent.len()];
        let mut of = vec![0; self.parent.len()];
        let mut n = 0;
        for x in 0..self.parent.len() {
            let r = self.find(x);
            if id[r] == usize::MAX {
                id[r] = n;
                n += 1;
            }
            of[x] = id[r];
        }
        (of, n)
    }
}
