//! Brute-force enumeration used to cross-check the exact solvers.
//!
//! Nothing here shares code with the solvers: trees come from decoding every
//! Prüfer sequence, matchings from every permutation, and subset questions
//! are answered by scanning all `2^N` subsets.

use rand::Rng;
use serde::Serialize;

use crate::dual::{m_br, z_l};
use crate::error::Result;
use crate::families::{FamilyInstance, SolveResult, WeightAssignment};
use crate::patching::exact_patch;
use crate::rng::{stream, Purpose};
use crate::weights::WeightSpec;

fn tree_edge_index(n: usize, u: usize, v: usize) -> usize {
    let (u, v) = if u < v { (u, v) } else { (v, u) };
    // Count edges (a, b) with a < u, then offset within row u.
    let before: usize = (0..u).map(|a| n - 1 - a).sum();
    before + (v - u - 1)
}

/// Every labelled spanning tree of `K_n` (`n^(n-2)` of them) as ascending
/// edge-index sets.
pub fn all_spanning_trees(n: usize) -> Vec<Vec<usize>> {
    assert!(n >= 2);
    if n == 2 {
        return vec![vec![0]];
    }
    let len = n - 2;
    let total = n.pow(len as u32);
    let mut trees = Vec::with_capacity(total);
    let mut seq = vec![0usize; len];
    for code in 0..total {
        let mut c = code;
        for s in seq.iter_mut() {
            *s = c % n;
            c /= n;
        }
        let mut degree = vec![1usize; n];
        for &s in &seq {
            degree[s] += 1;
        }
        let mut edges = Vec::with_capacity(n - 1);
        for &s in &seq {
            let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
            edges.push(tree_edge_index(n, leaf, s));
            degree[leaf] -= 1;
            degree[s] -= 1;
        }
        let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
        edges.push(tree_edge_index(n, rest[0], rest[1]));
        edges.sort_unstable();
        trees.push(edges);
    }
    trees
}

/// Every perfect matching of `K_{n,n}` (`n!` of them), edge `(i, j)` = `i*n + j`.
pub fn all_perfect_matchings(n: usize) -> Vec<Vec<usize>> {
    fn extend(n: usize, row: usize, used: &mut Vec<bool>, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if row == n {
            out.push(current.clone());
            return;
        }
        for j in 0..n {
            if !used[j] {
                used[j] = true;
                current.push(row * n + j);
                extend(n, row + 1, used, current, out);
                current.pop();
                used[j] = false;
            }
        }
    }
    let mut out = Vec::new();
    extend(n, 0, &mut vec![false; n], &mut Vec::new(), &mut out);
    out
}

/// Minimum member weight; ties go to the lexicographically smallest member.
pub fn min_over_members(members: &[Vec<usize>], w: &WeightAssignment) -> SolveResult {
    let mut best: Option<SolveResult> = None;
    for m in members {
        let value: f64 = m.iter().map(|&e| w.values()[e]).sum();
        let better = match &best {
            None => true,
            Some(b) => value < b.value || (value == b.value && *m < b.witness),
        };
        if better {
            best = Some(SolveResult {
                value,
                witness: m.clone(),
            });
        }
    }
    best.expect("at least one member")
}

/// `min_F |F \ G|`.
pub fn rho_over_members(members: &[Vec<usize>], g: &[usize]) -> usize {
    members
        .iter()
        .map(|m| m.iter().filter(|e| !g.contains(e)).count())
        .min()
        .expect("at least one member")
}

/// Cheapest `G`-patch, `min_F X_{F \ G}`.
pub fn patch_over_members(members: &[Vec<usize>], g: &[usize], w: &WeightAssignment) -> SolveResult {
    let missing: Vec<Vec<usize>> = members
        .iter()
        .map(|m| m.iter().copied().filter(|e| !g.contains(e)).collect())
        .collect();
    min_over_members(&missing, w)
}

/// `Z_L` through members: the best affordable subset of a member keeps its
/// cheapest elements.
pub fn z_l_over_members(members: &[Vec<usize>], w: &WeightAssignment, budget: f64) -> usize {
    members
        .iter()
        .map(|m| {
            let mut vals: Vec<f64> = m.iter().map(|&e| w.values()[e]).collect();
            vals.sort_by(f64::total_cmp);
            let mut total = 0.0;
            let mut kept = 0;
            for v in vals {
                if total + v > budget {
                    break;
                }
                total += v;
                kept += 1;
            }
            m.len() - kept
        })
        .min()
        .unwrap()
}

/// `M(B_r)` through members: drop the `r` most expensive elements of a member.
pub fn m_br_over_members(members: &[Vec<usize>], w: &WeightAssignment, r: usize) -> f64 {
    members
        .iter()
        .map(|m| {
            let mut vals: Vec<f64> = m.iter().map(|&e| w.values()[e]).collect();
            vals.sort_by(f64::total_cmp);
            vals.iter().take(m.len().saturating_sub(r)).sum::<f64>()
        })
        .fold(f64::INFINITY, f64::min)
}

/// `rho` for spanning trees of `K_n` on a subset given as a bit mask:
/// connected components minus one, by label propagation.
pub fn forest_rho_mask(n: usize, mask: u64) -> usize {
    let mut label: Vec<usize> = (0..n).collect();
    let mut changed = true;
    while changed {
        changed = false;
        let mut e = 0;
        for u in 0..n {
            for v in u + 1..n {
                if mask >> e & 1 == 1 {
                    let m = label[u].min(label[v]);
                    if label[u] != m || label[v] != m {
                        label[u] = m;
                        label[v] = m;
                        changed = true;
                    }
                }
                e += 1;
            }
        }
    }
    let mut roots: Vec<usize> = label.clone();
    roots.sort_unstable();
    roots.dedup();
    roots.len() - 1
}

fn mask_weight(w: &WeightAssignment, mask: u64) -> f64 {
    let mut total = 0.0;
    let mut m = mask;
    while m != 0 {
        let e = m.trailing_zeros() as usize;
        total += w.values()[e];
        m &= m - 1;
    }
    total
}

/// `Z_L` by scanning every subset of the ground set.
pub fn z_l_over_subsets(size: usize, rho: impl Fn(u64) -> usize, w: &WeightAssignment, budget: f64) -> usize {
    assert!(size < 64);
    (0..1u64 << size)
        .filter(|&mask| mask_weight(w, mask) <= budget)
        .map(&rho)
        .min()
        .unwrap()
}

/// `M(B_r)` by scanning every subset of the ground set.
pub fn m_br_over_subsets(size: usize, rho: impl Fn(u64) -> usize, w: &WeightAssignment, r: usize) -> f64 {
    assert!(size < 64);
    (0..1u64 << size)
        .filter(|&mask| rho(mask) <= r)
        .map(|mask| mask_weight(w, mask))
        .fold(f64::INFINITY, f64::min)
}

/// Cheapest `G`-patch by scanning every subset `P` of the complement of `G`.
pub fn patch_over_subsets(size: usize, rho: impl Fn(u64) -> usize, w: &WeightAssignment, g: u64) -> f64 {
    assert!(size < 64);
    let full = (1u64 << size) - 1;
    let free = full & !g;
    let mut best = f64::INFINITY;
    // Enumerate submasks of `free`.
    let mut p = free;
    loop {
        if rho(g | p) == 0 {
            best = best.min(mask_weight(w, p));
        }
        if p == 0 {
            break;
        }
        p = (p - 1) & free;
    }
    best
}

/// Agreement counts from [`equivalence_check`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub family: &'static str,
    pub n: usize,
    pub members: usize,
    pub weight_vectors: usize,
    /// `(operation, agreeing cases, total cases)`.
    pub checks: Vec<(&'static str, usize, usize)>,
}

impl EquivalenceReport {
    pub fn all_agree(&self) -> bool {
        self.checks.iter().all(|&(_, ok, total)| ok == total)
    }
}

fn same_value(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}

/// Compares the solvers with member enumeration on `vectors` weight draws.
///
/// Witness and patch sets must match exactly; values may differ only by
/// summation order (1e-12 relative). `Z_L` is compared at budgets of 25%, 50%
/// and 75% of the optimum, `M(B_r)` at every `r`.
pub fn equivalence_check(fam: &FamilyInstance, spec: &WeightSpec, vectors: usize, seed: u64) -> Result<EquivalenceReport> {
    let members = match fam {
        FamilyInstance::SpanningTree(t) => all_spanning_trees(t.vertices()),
        FamilyInstance::Matching(m) => all_perfect_matchings(m.side()),
        FamilyInstance::Explicit(e) => e.members(),
    };
    let names = ["min_weight", "rho", "exact_patch", "z_l", "m_br"];
    let mut ok = [0usize; 5];
    let mut total = [0usize; 5];
    let len = fam.ground_size();
    for i in 0..vectors as u64 {
        let w = WeightAssignment::sample(spec, len, &mut stream(seed, Purpose::Trial, i));
        let mut design = stream(seed, Purpose::Design, i);
        let g: Vec<usize> = (0..len).filter(|_| design.random_bool(0.3)).collect();

        let got = fam.min_weight(&w)?;
        let best = min_over_members(&members, &w);
        total[0] += 1;
        ok[0] += usize::from(got.witness == best.witness && same_value(got.value, best.value));

        total[1] += 1;
        ok[1] += usize::from(fam.rho(&g)? == rho_over_members(&members, &g));

        let got = exact_patch(fam, &g, &w)?;
        let want = patch_over_members(&members, &g, &w);
        total[2] += 1;
        ok[2] += usize::from(got.patch == want.witness && same_value(got.cost, want.value));

        for frac in [0.25, 0.5, 0.75] {
            let budget = frac * best.value;
            total[3] += 1;
            ok[3] += usize::from(z_l(fam, &w, budget)?.z == z_l_over_members(&members, &w, budget));
        }
        for r in 0..=fam.ell() {
            total[4] += 1;
            ok[4] += usize::from(same_value(m_br(fam, &w, r)?.value, m_br_over_members(&members, &w, r)));
        }
    }
    Ok(EquivalenceReport {
        family: fam.kind().name(),
        n: fam.size_param(),
        members: members.len(),
        weight_vectors: vectors,
        checks: (0..5).map(|k| (names[k], ok[k], total[k])).collect(),
    })
}
