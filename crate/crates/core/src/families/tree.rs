//! Spanning trees of the complete graph `K_n`.
//!
//! Edge `{u, v}` with `u < v` has index `u*n - u*(u+1)/2 + (v - u - 1)`, i.e. the
//! edges are listed as `(0,1), (0,2), .., (0,n-1), (1,2), ..`.

use std::cmp::Ordering;

use rand::Rng;

use super::dsu::DisjointSets;
use super::{SolveResult, WeightAssignment};

#[derive(Debug, Clone)]
pub struct SpanningTrees {
    n: usize,
    endpoints: Vec<(u32, u32)>,
}

/// Total order used by every greedy pass: by weight, then by element index.
#[inline]
pub(crate) fn key_cmp(a: &(f64, u32), b: &(f64, u32)) -> Ordering {
    a.0.total_cmp(&b.0).then(a.1.cmp(&b.1))
}

impl SpanningTrees {
    pub(crate) fn new(n: usize) -> Self {
        let mut endpoints = Vec::with_capacity(n * (n - 1) / 2);
        for u in 0..n as u32 {
            for v in u + 1..n as u32 {
                endpoints.push((u, v));
            }
        }
        Self { n, endpoints }
    }

    pub fn vertices(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.endpoints.len()
    }

    pub fn endpoints(&self, edge: usize) -> (usize, usize) {
        let (u, v) = self.endpoints[edge];
        (u as usize, v as usize)
    }

    pub fn edge_index(&self, u: usize, v: usize) -> usize {
        let (u, v) = if u < v { (u, v) } else { (v, u) };
        debug_assert!(u != v && v < self.n);
        u * self.n - u * (u + 1) / 2 + (v - u - 1)
    }

    /// Union-find over the vertices with the edges of `g` merged.
    pub fn components_of(&self, g: &[usize]) -> DisjointSets {
        let mut dsu = DisjointSets::new(self.n);
        for &e in g {
            let (u, v) = self.endpoints(e);
            dsu.union(u, v);
        }
        dsu
    }

    pub fn rho(&self, g: &[usize]) -> usize {
        self.components_of(g).components() - 1
    }

    /// Greedy cheapest-first acceptance sequence starting from `dsu`, stopping
    /// once the graph is connected. Only candidate edges with `allowed(e)` are
    /// considered.
    ///
    /// A prefix of the `(weight, index)` order is selected first; if it does
    /// not connect the graph the rest is sorted and scanned. Both phases walk
    /// the same total order, so the result equals a full sort.
    pub(crate) fn greedy_order(
        &self,
        w: &WeightAssignment,
        mut dsu: DisjointSets,
        allowed: impl Fn(usize) -> bool,
    ) -> Vec<usize> {
        let needed = dsu.components() - 1;
        let mut accepted = Vec::with_capacity(needed);
        if needed == 0 {
            return accepted;
        }
        let values = w.values();
        let mut keys: Vec<(f64, u32)> = (0..self.edge_count())
            .filter(|&e| allowed(e))
            .map(|e| (values[e], e as u32))
            .collect();
        let n = self.n as f64;
        let prefix = ((2.0 * n * n.ln()) as usize + 4 * self.n).min(keys.len());
        let mut scan = |slice: &mut [(f64, u32)], accepted: &mut Vec<usize>| {
            slice.sort_unstable_by(key_cmp);
            for &(_, e) in slice.iter() {
                let (u, v) = self.endpoints[e as usize];
                if dsu.union(u as usize, v as usize) {
                    accepted.push(e as usize);
                    if accepted.len() == needed {
                        return true;
                    }
                }
            }
            false
        };
        if prefix < keys.len() && prefix > 0 {
            keys.select_nth_unstable_by(prefix - 1, key_cmp);
            let (head, tail) = keys.split_at_mut(prefix);
            if !scan(head, &mut accepted) {
                scan(tail, &mut accepted);
            }
        } else {
            scan(&mut keys, &mut accepted);
        }
        accepted
    }

    /// Minimum spanning tree by Kruskal's rule. The witness is listed in
    /// acceptance order.
    pub fn kruskal(&self, w: &WeightAssignment) -> Vec<usize> {
        self.greedy_order(w, DisjointSets::new(self.n), |_| true)
    }

    pub fn min_weight(&self, w: &WeightAssignment) -> SolveResult {
        SolveResult::from_witness(w, self.kruskal(w))
    }

    /// A uniformly random labelled spanning tree, decoded from a random
    /// Prüfer sequence. Edge indices ascending.
    pub fn random_tree<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<usize> {
        let n = self.n;
        if n == 2 {
            return vec![0];
        }
        let seq: Vec<usize> = (0..n - 2).map(|_| rng.random_range(0..n)).collect();
        let mut degree = vec![1usize; n];
        for &s in &seq {
            degree[s] += 1;
        }
        let mut edges = Vec::with_capacity(n - 1);
        let mut leaves: std::collections::BTreeSet<usize> =
            (0..n).filter(|&v| degree[v] == 1).collect();
        for &s in &seq {
            let leaf = leaves.pop_first().expect("a leaf exists");
            edges.push(self.edge_index(leaf, s));
            degree[s] -= 1;
            if degree[s] == 1 {
                leaves.insert(s);
            }
        }
        let a = leaves.pop_first().unwrap();
        let b = leaves.pop_first().unwrap();
        edges.push(self.edge_index(a, b));
        edges.sort_unstable();
        edges
    }
}
