//! Perfect matchings of the complete bipartite graph `K_{n,n}`.
//!
//! Edge `(row i, column j)` has index `i*n + j`.

use super::{SolveResult, WeightAssignment};

#[derive(Debug, Clone)]
pub struct Matchings {
    n: usize,
}

impl Matchings {
    pub(crate) fn new(n: usize) -> Self {
        Self { n }
    }

    pub fn side(&self) -> usize {
        self.n
    }

    pub fn edge_index(&self, row: usize, col: usize) -> usize {
        row * self.n + col
    }

    pub fn endpoints(&self, edge: usize) -> (usize, usize) {
        (edge / self.n, edge % self.n)
    }

    /// Shortest-augmenting-path assignment with row/column potentials, O(n^3).
    /// Returns the column assigned to each row.
    pub fn assignment(&self, w: &WeightAssignment) -> Vec<usize> {
        let n = self.n;
        let cost = w.values();
        let inf = f64::INFINITY;
        // 1-based arrays; index 0 is the virtual column/row.
        let mut u = vec![0.0; n + 1];
        let mut v = vec![0.0; n + 1];
        let mut p = vec![0usize; n + 1];
        let mut way = vec![0usize; n + 1];
        for i in 1..=n {
            p[0] = i;
            let mut j0 = 0usize;
            let mut minv = vec![inf; n + 1];
            let mut used = vec![false; n + 1];
            loop {
                used[j0] = true;
                let i0 = p[j0];
                let row = &cost[(i0 - 1) * n..i0 * n];
                let mut delta = inf;
                let mut j1 = 0usize;
                for j in 1..=n {
                    if used[j] {
                        continue;
                    }
                    let cur = row[j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
                for j in 0..=n {
                    if used[j] {
                        u[p[j]] += delta;
                        v[j] -= delta;
                    } else {
                        minv[j] -= delta;
                    }
                }
                j0 = j1;
                if p[j0] == 0 {
                    break;
                }
            }
            loop {
                let j1 = way[j0];
                p[j0] = p[j1];
                j0 = j1;
                if j0 == 0 {
                    break;
                }
            }
        }
        let mut assignment = vec![0usize; n];
        for j in 1..=n {
            if p[j] > 0 {
                assignment[p[j] - 1] = j - 1;
            }
        }
        assignment
    }

    pub fn min_weight(&self, w: &WeightAssignment) -> SolveResult {
        let witness = self
            .assignment(w)
            .into_iter()
            .enumerate()
            .map(|(i, j)| self.edge_index(i, j))
            .collect();
        SolveResult::from_witness(w, witness)
    }

    /// Maximum matching inside `g` (Kuhn's augmenting paths), as row -> column.
    pub fn max_matching(&self, g: &[usize]) -> Vec<Option<usize>> {
        let n = self.n;
        let mut adj = vec![Vec::new(); n];
        for &e in g {
            let (i, j) = self.endpoints(e);
            adj[i].push(j);
        }
        for a in &mut adj {
            a.sort_unstable();
            a.dedup();
        }
        let mut col_match: Vec<Option<usize>> = vec![None; n];
        fn augment(
            i: usize,
            adj: &[Vec<usize>],
            seen: &mut [bool],
            col_match: &mut [Option<usize>],
        ) -> bool {
            for &j in &adj[i] {
                if seen[j] {
                    continue;
                }
                seen[j] = true;
                if col_match[j].is_none_or(|k| augment(k, adj, seen, col_match)) {
                    col_match[j] = Some(i);
                    return true;
                }
            }
            false
        }
        let mut seen = vec![false; n];
        for i in 0..n {
            seen.fill(false);
            augment(i, &adj, &mut seen, &mut col_match);
        }
        let mut row_match = vec![None; n];
        for (j, m) in col_match.iter().enumerate() {
            if let Some(i) = *m {
                row_match[i] = Some(j);
            }
        }
        row_match
    }

    pub fn rho(&self, g: &[usize]) -> usize {
        self.n - self.max_matching(g).iter().flatten().count()
    }
}

/// Minimum-cost matchings of every size, grown one augmenting path at a time.
///
/// Successive shortest paths with potentials: after `k` augmentations the
/// current matching has minimum total weight among all matchings with `k`
/// edges. Each augmentation is a dense Dijkstra, O(n^2).
#[derive(Debug, Clone)]
pub struct MatchingGrower<'a> {
    n: usize,
    cost: &'a [f64],
    row_match: Vec<Option<usize>>,
    col_match: Vec<Option<usize>>,
    row_pot: Vec<f64>,
    col_pot: Vec<f64>,
}

impl<'a> MatchingGrower<'a> {
    pub fn new(fam: &Matchings, w: &'a WeightAssignment) -> Self {
        let n = fam.n;
        Self {
            n,
            cost: w.values(),
            row_match: vec![None; n],
            col_match: vec![None; n],
            row_pot: vec![0.0; n],
            col_pot: vec![0.0; n],
        }
    }

    pub fn size(&self) -> usize {
        self.row_match.iter().flatten().count()
    }

    /// Edge indices of the current matching, ascending.
    pub fn edges(&self) -> Vec<usize> {
        self.row_match
            .iter()
            .enumerate()
            .filter_map(|(i, m)| m.map(|j| i * self.n + j))
            .collect()
    }

    pub fn weight(&self) -> f64 {
        self.edges().iter().map(|&e| self.cost[e]).sum()
    }

    /// Adds one edge to the matching along a cheapest augmenting path.
    /// Returns false once the matching is perfect.
    pub fn augment(&mut self) -> bool {
        let n = self.n;
        if self.size() == n {
            return false;
        }
        let inf = f64::INFINITY;
        let mut dist_row = vec![inf; n];
        let mut dist_col = vec![inf; n];
        let mut prev_col = vec![usize::MAX; n];
        let mut done_row = vec![false; n];
        let mut done_col = vec![false; n];
        for i in 0..n {
            if self.row_match[i].is_none() {
                dist_row[i] = 0.0;
            }
        }
        loop {
            // Closest unsettled node; rows win ties, then lower index.
            let mut best = inf;
            let mut pick: Option<(bool, usize)> = None;
            for i in 0..n {
                if !done_row[i] && dist_row[i] < best {
                    best = dist_row[i];
                    pick = Some((true, i));
                }
            }
            for j in 0..n {
                if !done_col[j] && dist_col[j] < best {
                    best = dist_col[j];
                    pick = Some((false, j));
                }
            }
            let Some((is_row, idx)) = pick else { break };
            if is_row {
                let i = idx;
                done_row[i] = true;
                let row = &self.cost[i * n..(i + 1) * n];
                for j in 0..n {
                    if done_col[j] || self.row_match[i] == Some(j) {
                        continue;
                    }
                    let nd = dist_row[i] + row[j] + self.row_pot[i] - self.col_pot[j];
                    if nd < dist_col[j] {
                        dist_col[j] = nd;
                        prev_col[j] = i;
                    }
                }
            } else {
                let j = idx;
                done_col[j] = true;
                if let Some(i) = self.col_match[j] {
                    let nd = dist_col[j] - self.cost[i * n + j] + self.col_pot[j] - self.row_pot[i];
                    if nd < dist_row[i] {
                        dist_row[i] = nd;
                    }
                }
            }
        }
        // Cheapest free column by true path length.
        let mut target = usize::MAX;
        let mut best = inf;
        for j in 0..n {
            if self.col_match[j].is_none() && dist_col[j] < inf {
                let true_len = dist_col[j] + self.col_pot[j];
                if true_len < best {
                    best = true_len;
                    target = j;
                }
            }
        }
        debug_assert!(target != usize::MAX);
        for i in 0..n {
            if dist_row[i] < inf {
                self.row_pot[i] += dist_row[i];
            }
        }
        for j in 0..n {
            if dist_col[j] < inf {
                self.col_pot[j] += dist_col[j];
            }
        }
        let mut j = target;
        loop {
            let i = prev_col[j];
            let previous = self.row_match[i];
            self.row_match[i] = Some(j);
            self.col_match[j] = Some(i);
            match previous {
                Some(pj) => j = pj,
                None => break,
            }
        }
        true
    }

    /// Grows to exactly `k` edges (capped at `n`).
    pub fn grow_to(&mut self, k: usize) {
        while self.size() < k.min(self.n) {
            self.augment();
        }
    }

    /// Grows while the matching weight stays `<= budget`; the result is a
    /// maximum-cardinality matching within the budget.
    pub fn grow_within(&mut self, budget: f64) {
        loop {
            let saved = (self.row_match.clone(), self.col_match.clone());
            if !self.augment() {
                return;
            }
            if self.weight() > budget {
                self.row_match = saved.0;
                self.col_match = saved.1;
                return;
            }
        }
    }
}
