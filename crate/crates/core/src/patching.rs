//! Patch costs: the cheapest set `P` with `G ∪ P` containing a member.
//!
//! [`exact_patch`] is exact for every family. [`component_patch`] is the
//! outgoing-edge heuristic for spanning trees: sort the components of `(V, G)`
//! by size and join each one, except the largest, to a later component by its
//! cheapest edge. [`estimate_patchability`] measures how expensive patching is
//! when the weights are redrawn independently of `G`.

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::families::{
    elements_of, key_cmp, mask_of, DisjointSets, ExplicitFamily, FamilyInstance, Matchings,
    SpanningTrees, WeightAssignment,
};
use crate::montecarlo::stats::quantile;
use crate::rng::{stream, Purpose};
use crate::weights::WeightSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PatchMethod {
    Exact,
    ComponentHeuristic,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PatchResult {
    pub cost: f64,
    /// Ascending element indices.
    pub patch: Vec<usize>,
    pub method: PatchMethod,
}

impl PatchResult {
    fn new(w: &WeightAssignment, mut patch: Vec<usize>, method: PatchMethod) -> Self {
        let cost = w.subset_sum(&patch);
        patch.sort_unstable();
        Self { cost, patch, method }
    }
}

/// Minimum-weight `G`-patch.
pub fn exact_patch(fam: &FamilyInstance, g: &[usize], w: &WeightAssignment) -> Result<PatchResult> {
    fam.check_weights(w)?;
    fam.check_set(g)?;
    let patch = match fam {
        FamilyInstance::SpanningTree(t) => tree_exact_patch(t, g, w),
        FamilyInstance::Matching(m) => matching_exact_patch(m, g, w),
        FamilyInstance::Explicit(e) => explicit_exact_patch(e, g, w),
    };
    Ok(PatchResult::new(w, patch, PatchMethod::Exact))
}

/// Contracts the components of `(V, G)` keeping the cheapest edge between
/// each pair, then runs the greedy tree solver on the contracted graph.
fn tree_exact_patch(t: &SpanningTrees, g: &[usize], w: &WeightAssignment) -> Vec<usize> {
    let labels = t.components_of(g).labels();
    let c = labels.iter().max().map_or(0, |m| m + 1);
    if c <= 1 {
        return Vec::new();
    }
    let values = w.values();
    let mut cheapest: Vec<Option<(f64, u32)>> = vec![None; c * c];
    for e in 0..t.edge_count() {
        let (u, v) = t.endpoints(e);
        let (a, b) = (labels[u], labels[v]);
        if a == b {
            continue;
        }
        let slot = &mut cheapest[a.min(b) * c + a.max(b)];
        let key = (values[e], e as u32);
        if slot.is_none_or(|cur| key_cmp(&key, &cur).is_lt()) {
            *slot = Some(key);
        }
    }
    let mut pairs: Vec<((f64, u32), usize, usize)> = Vec::with_capacity(c * (c - 1) / 2);
    for a in 0..c {
        for b in a + 1..c {
            if let Some(key) = cheapest[a * c + b] {
                pairs.push((key, a, b));
            }
        }
    }
    pairs.sort_unstable_by(|x, y| key_cmp(&x.0, &y.0));
    let mut dsu = DisjointSets::new(c);
    let mut patch = Vec::with_capacity(c - 1);
    for ((_, e), a, b) in pairs {
        if dsu.union(a, b) {
            patch.push(e as usize);
            if patch.len() == c - 1 {
                break;
            }
        }
    }
    patch
}

/// Assignment with the edges of `G` priced at zero; the patch is the chosen
/// edges outside `G`.
fn matching_exact_patch(m: &Matchings, g: &[usize], w: &WeightAssignment) -> Vec<usize> {
    let mut in_g = vec![false; w.len()];
    for &e in g {
        in_g[e] = true;
    }
    let zeroed = w.zeroed_on(g);
    m.assignment(&zeroed)
        .into_iter()
        .enumerate()
        .map(|(i, j)| m.edge_index(i, j))
        .filter(|&e| !in_g[e])
        .collect()
}

fn explicit_exact_patch(fam: &ExplicitFamily, g: &[usize], w: &WeightAssignment) -> Vec<usize> {
    let gm = mask_of(g);
    let mut best = (f64::INFINITY, 0u32);
    for &m in fam.member_masks() {
        let missing = m & !gm;
        let cost = fam.mask_weight(w, missing);
        if cost < best.0 {
            best = (cost, missing);
        }
    }
    elements_of(best.1)
}

/// Components of `(V, G)` in patching order: increasing vertex count, ties by
/// smallest contained vertex. Returns `(rank of each vertex's component, sizes)`.
fn ordered_components(t: &SpanningTrees, g: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let labels = t.components_of(g).labels();
    let c = labels.iter().max().map_or(0, |m| m + 1);
    let mut size = vec![0usize; c];
    let mut first = vec![usize::MAX; c];
    for (v, &l) in labels.iter().enumerate() {
        size[l] += 1;
        first[l] = first[l].min(v);
    }
    let mut order: Vec<usize> = (0..c).collect();
    order.sort_by_key(|&l| (size[l], first[l]));
    let mut rank_of_label = vec![0; c];
    for (rank, &l) in order.iter().enumerate() {
        rank_of_label[l] = rank;
    }
    let ranks = labels.iter().map(|&l| rank_of_label[l]).collect();
    let sizes = order.iter().map(|&l| size[l]).collect();
    (ranks, sizes)
}

fn tree_family<'a>(fam: &'a FamilyInstance, op: &'static str) -> Result<&'a SpanningTrees> {
    match fam {
        FamilyInstance::SpanningTree(t) => Ok(t),
        other => Err(Error::Unsupported {
            op,
            family: other.kind().name(),
        }),
    }
}

/// Outgoing-edge patch for spanning trees: each component except the largest
/// adds its cheapest edge toward a later component. Always a valid patch with
/// exactly `rho(G)` edges.
pub fn component_patch(fam: &FamilyInstance, g: &[usize], w: &WeightAssignment) -> Result<PatchResult> {
    let t = tree_family(fam, "component_patch")?;
    fam.check_weights(w)?;
    fam.check_set(g)?;
    let (rank, sizes) = ordered_components(t, g);
    let c = sizes.len();
    let values = w.values();
    let mut best: Vec<Option<(f64, u32)>> = vec![None; c];
    for e in 0..t.edge_count() {
        let (u, v) = t.endpoints(e);
        let (a, b) = (rank[u], rank[v]);
        if a == b {
            continue;
        }
        let slot = &mut best[a.min(b)];
        let key = (values[e], e as u32);
        if slot.is_none_or(|cur| key_cmp(&key, &cur).is_lt()) {
            *slot = Some(key);
        }
    }
    let patch = best[..c - 1]
        .iter()
        .map(|k| k.expect("every non-last component has an outgoing edge").1 as usize)
        .collect();
    Ok(PatchResult::new(w, patch, PatchMethod::ComponentHeuristic))
}

/// Outcome of the outgoing-edge count check for one `G`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OutgoingCheck {
    pub r: usize,
    /// Minimum over non-largest components of the number of edges toward
    /// later components.
    pub min_count: usize,
    /// `min(n/2, n^2 / (4 r^2))`.
    pub bound: f64,
    pub holds: bool,
}

pub fn min_outgoing_count_check(fam: &FamilyInstance, g: &[usize]) -> Result<OutgoingCheck> {
    let t = tree_family(fam, "min_outgoing_count_check")?;
    fam.check_set(g)?;
    let (_, sizes) = ordered_components(t, g);
    let r = sizes.len() - 1;
    if r == 0 {
        return Err(invalid("G", "outgoing-edge check needs rho(G) >= 1"));
    }
    let mut later: usize = sizes.iter().sum();
    let mut min_count = usize::MAX;
    for &s in &sizes[..r] {
        later -= s;
        min_count = min_count.min(s * later);
    }
    let n = t.vertices() as f64;
    let bound = (n / 2.0).min(n * n / (4.0 * (r * r) as f64));
    Ok(OutgoingCheck {
        r,
        min_count,
        bound,
        holds: min_count as f64 >= bound,
    })
}

/// How the set `G` to be patched is chosen. `G` never depends on the weights
/// that are later used to patch it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum GStrategy {
    /// Optimum under an independent design draw, minus `r` random elements.
    RemoveFromOptimum,
    /// A uniformly random member minus `r` random elements.
    RemoveFromRandomMember,
    /// Optimum under an independent design draw, minus its `r` heaviest elements.
    AdversarialHeaviest,
}

impl GStrategy {
    pub fn name(self) -> &'static str {
        match self {
            GStrategy::RemoveFromOptimum => "remove-from-optimum",
            GStrategy::RemoveFromRandomMember => "remove-from-random-member",
            GStrategy::AdversarialHeaviest => "adversarial-heaviest",
        }
    }
}

impl std::str::FromStr for GStrategy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "remove-from-optimum" => Ok(Self::RemoveFromOptimum),
            "remove-from-random-member" => Ok(Self::RemoveFromRandomMember),
            "adversarial-heaviest" => Ok(Self::AdversarialHeaviest),
            other => Err(format!(
                "unknown strategy `{other}` (expected remove-from-optimum|remove-from-random-member|adversarial-heaviest)"
            )),
        }
    }
}

fn random_member<R: Rng + ?Sized>(fam: &FamilyInstance, rng: &mut R) -> Vec<usize> {
    match fam {
        FamilyInstance::SpanningTree(t) => t.random_tree(rng),
        FamilyInstance::Matching(m) => {
            let mut cols: Vec<usize> = (0..m.side()).collect();
            cols.shuffle(rng);
            cols.into_iter()
                .enumerate()
                .map(|(i, j)| m.edge_index(i, j))
                .collect()
        }
        FamilyInstance::Explicit(e) => {
            let masks = e.member_masks();
            elements_of(masks[rng.random_range(0..masks.len())])
        }
    }
}

/// Draws a set `G` by `strategy`, removing `r` elements from a member (all of
/// them when the member is smaller). The result lies in `B_r`.
pub fn generate_g<R: Rng + ?Sized>(
    fam: &FamilyInstance,
    spec: &WeightSpec,
    r: usize,
    strategy: GStrategy,
    rng: &mut R,
) -> Result<Vec<usize>> {
    let member = match strategy {
        GStrategy::RemoveFromRandomMember => random_member(fam, rng),
        GStrategy::RemoveFromOptimum | GStrategy::AdversarialHeaviest => {
            let design = WeightAssignment::sample(spec, fam.ground_size(), rng);
            let opt = fam.min_weight(&design)?.witness;
            if strategy == GStrategy::AdversarialHeaviest {
                let mut by_weight = opt;
                by_weight.sort_by(|&a, &b| {
                    design.values()[b].total_cmp(&design.values()[a]).then(a.cmp(&b))
                });
                let keep = by_weight.len().saturating_sub(r);
                let mut g = by_weight.split_off(by_weight.len() - keep);
                g.sort_unstable();
                return Ok(g);
            }
            opt
        }
    };
    let mut member = member;
    member.shuffle(rng);
    member.truncate(member.len().saturating_sub(r));
    member.sort_unstable();
    Ok(member)
}

/// Plan for [`estimate_patchability`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PatchabilityPlan {
    pub r: usize,
    pub eps: f64,
    pub strategy: GStrategy,
    /// Weight redraws per set `G`.
    pub trials: usize,
    /// Number of sets `G` drawn.
    pub g_samples: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PatchabilityEstimate {
    pub r: usize,
    /// Largest empirical `(1 - eps)`-quantile of the patch cost over the sets tried.
    pub lambda: f64,
    pub eps: f64,
    pub trials: usize,
    pub g_samples: usize,
    /// True when every set in `B_r` was swept; otherwise `lambda` is a lower
    /// bound on the worst case over `B_r`.
    pub exhaustive: bool,
    /// The set attaining `lambda`.
    pub worst_g: Vec<usize>,
    /// Per-set quantiles, in sampling order.
    pub per_g_lambda: Vec<f64>,
    /// Patch costs of the worst set, one per trial.
    pub worst_costs: Vec<f64>,
}

fn check_plan(fam: &FamilyInstance, r: usize, eps: f64, trials: usize) -> Result<()> {
    if r > fam.ell() {
        return Err(invalid("r", format!("r = {r} exceeds ell(F) = {}", fam.ell())));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(invalid("eps", format!("must lie in (0, 1), got {eps}")));
    }
    if trials == 0 {
        return Err(invalid("trials", "need at least one trial"));
    }
    Ok(())
}

/// Patch costs of `g` over `trials` weight draws. Trial `t` always uses the
/// same weights, whatever `g` is.
fn patch_costs(fam: &FamilyInstance, spec: &WeightSpec, g: &[usize], trials: usize, seed: u64) -> Result<Vec<f64>> {
    (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let w = WeightAssignment::sample(spec, fam.ground_size(), &mut stream(seed, Purpose::Trial, t));
            exact_patch(fam, g, &w).map(|p| p.cost)
        })
        .collect()
}

fn summarise(
    candidates: Vec<(Vec<usize>, Vec<f64>)>,
    r: usize,
    eps: f64,
    trials: usize,
    exhaustive: bool,
) -> PatchabilityEstimate {
    let per_g_lambda: Vec<f64> = candidates.iter().map(|(_, c)| quantile(c, 1.0 - eps)).collect();
    let worst = per_g_lambda
        .iter()
        .enumerate()
        .fold(0, |best, (i, &l)| if l > per_g_lambda[best] { i } else { best });
    let g_samples = candidates.len();
    let (worst_g, worst_costs) = candidates.into_iter().nth(worst).expect("at least one set");
    PatchabilityEstimate {
        r,
        lambda: per_g_lambda[worst],
        eps,
        trials,
        g_samples,
        exhaustive,
        worst_g,
        per_g_lambda,
        worst_costs,
    }
}

/// Empirical `(r, lambda, eps)` patchability from sampled sets `G`.
pub fn estimate_patchability(
    fam: &FamilyInstance,
    spec: &WeightSpec,
    plan: &PatchabilityPlan,
) -> Result<PatchabilityEstimate> {
    check_plan(fam, plan.r, plan.eps, plan.trials)?;
    if plan.g_samples == 0 {
        return Err(invalid("g_samples", "need at least one set"));
    }
    let mut candidates = Vec::with_capacity(plan.g_samples);
    for i in 0..plan.g_samples as u64 {
        let g = generate_g(fam, spec, plan.r, plan.strategy, &mut stream(plan.seed, Purpose::Design, i))?;
        let costs = patch_costs(fam, spec, &g, plan.trials, plan.seed)?;
        candidates.push((g, costs));
    }
    Ok(summarise(candidates, plan.r, plan.eps, plan.trials, false))
}

/// Largest ground set accepted by [`estimate_patchability_exhaustive`].
pub const MAX_EXHAUSTIVE_GROUND: usize = 18;

/// Sweeps every `G` with `rho(G) <= r` of an explicit family.
pub fn estimate_patchability_exhaustive(
    fam: &FamilyInstance,
    spec: &WeightSpec,
    r: usize,
    eps: f64,
    trials: usize,
    seed: u64,
) -> Result<PatchabilityEstimate> {
    let FamilyInstance::Explicit(e) = fam else {
        return Err(Error::Unsupported {
            op: "estimate_patchability_exhaustive",
            family: fam.kind().name(),
        });
    };
    if e.ground_size() > MAX_EXHAUSTIVE_GROUND {
        return Err(invalid(
            "N",
            format!("exhaustive sweep is capped at {MAX_EXHAUSTIVE_GROUND} elements"),
        ));
    }
    check_plan(fam, r, eps, trials)?;
    let weights: Vec<WeightAssignment> = (0..trials as u64)
        .map(|t| WeightAssignment::sample(spec, e.ground_size(), &mut stream(seed, Purpose::Trial, t)))
        .collect();
    let mut candidates = Vec::new();
    for gm in 0..1u32 << e.ground_size() {
        if e.rho_mask(gm) > r {
            continue;
        }
        let g = elements_of(gm);
        let costs = weights
            .iter()
            .map(|w| exact_patch(fam, &g, w).map(|p| p.cost))
            .collect::<Result<Vec<f64>>>()?;
        candidates.push((g, costs));
    }
    Ok(summarise(candidates, r, eps, trials, true))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use crate::rng::{stream, Purpose};

    fn tree(n: usize) -> (FamilyInstance, SpanningTrees) {
        let fam = FamilyInstance::spanning_tree(n).unwrap();
        let FamilyInstance::SpanningTree(t) = &fam else { unreachable!() };
        let t = t.clone();
        (fam, t)
    }

    fn uniform() -> WeightSpec {
        WeightSpec::uniform(1.0).unwrap()
    }

    #[test]
    fn member_needs_no_patch() {
        let (fam, _) = tree(5);
        let w = WeightAssignment::sample(&uniform(), 10, &mut stream(1, Purpose::Trial, 0));
        let opt = fam.min_weight(&w).unwrap().witness;
        let p = exact_patch(&fam, &opt, &w).unwrap();
        assert_eq!((p.cost, p.patch.len()), (0.0, 0));
        let h = component_patch(&fam, &opt, &w).unwrap();
        assert!(h.patch.is_empty());
        let m = FamilyInstance::matching(3).unwrap();
        let wm = WeightAssignment::sample(&uniform(), 9, &mut stream(1, Purpose::Trial, 1));
        assert_eq!(exact_patch(&m, &[0, 4, 8], &wm).unwrap().patch, Vec::<usize>::new());
    }

    #[test]
    fn two_disjoint_edges_on_four_vertices() {
        let (fam, t) = tree(4);
        // Vertices 1..4 of the description are 0..3 here.
        let g = vec![t.edge_index(0, 1), t.edge_index(2, 3)];
        let mut w = vec![1.0; 6];
        w[t.edge_index(0, 2)] = 0.2;
        w[t.edge_index(0, 3)] = 0.5;
        w[t.edge_index(1, 2)] = 0.4;
        w[t.edge_index(1, 3)] = 0.3;
        let w = WeightAssignment::new(w).unwrap();
        let exact = exact_patch(&fam, &g, &w).unwrap();
        assert_eq!(exact.patch, vec![t.edge_index(0, 2)]);
        assert!((exact.cost - 0.2).abs() < 1e-15);
        let h = component_patch(&fam, &g, &w).unwrap();
        assert_eq!(h.patch.len(), 1);
        assert_eq!(h.cost, exact.cost);
        assert!(fam.contains_member(&[g, h.patch].concat()).unwrap());
    }

    #[test]
    fn tree_patch_matches_subset_enumeration() {
        let (fam, t) = tree(6);
        for seed in 0..100 {
            let mut rng = stream(seed, Purpose::Design, 0);
            let mut g = t.random_tree(&mut rng);
            g.shuffle(&mut rng);
            g.truncate(3);
            let w = WeightAssignment::sample(&uniform(), 15, &mut stream(seed, Purpose::Trial, 0));
            let exact = exact_patch(&fam, &g, &w).unwrap();
            let want = oracle::patch_over_subsets(15, |m| oracle::forest_rho_mask(6, m), &w, mask_of(&g) as u64);
            assert!((exact.cost - want).abs() < 1e-12, "seed {seed}");
            assert_eq!(exact.patch.len(), 2);
            let h = component_patch(&fam, &g, &w).unwrap();
            assert!(h.cost >= exact.cost);
        }
    }

    #[test]
    fn matching_patch_matches_enumeration() {
        let fam = FamilyInstance::matching(5).unwrap();
        let perms = oracle::all_perfect_matchings(5);
        for seed in 0..100 {
            let mut rng = stream(seed, Purpose::Design, 1);
            let g: Vec<usize> = (0..25).filter(|_| rng.random_bool(0.2)).collect();
            let w = WeightAssignment::sample(&uniform(), 25, &mut stream(seed, Purpose::Trial, 1));
            let exact = exact_patch(&fam, &g, &w).unwrap();
            let want = oracle::patch_over_members(&perms, &g, &w);
            assert!((exact.cost - want.value).abs() < 1e-12);
            assert!(fam.contains_member(&[g.clone(), exact.patch.clone()].concat()).unwrap());
        }
    }

    #[test]
    fn component_patch_rejects_other_families() {
        let m = FamilyInstance::matching(2).unwrap();
        let w = WeightAssignment::new(vec![1.0; 4]).unwrap();
        assert!(matches!(component_patch(&m, &[], &w), Err(Error::Unsupported { .. })));
    }

    #[test]
    fn heuristic_size_validity_and_dominance() {
        let (fam, t) = tree(30);
        for seed in 0..200 {
            let mut rng = stream(seed, Purpose::Design, 2);
            let mut g = t.random_tree(&mut rng);
            g.shuffle(&mut rng);
            g.truncate(29 - (seed as usize % 8));
            let r = fam.rho(&g).unwrap();
            let w = WeightAssignment::sample(&uniform(), t.edge_count(), &mut stream(seed, Purpose::Trial, 2));
            let exact = exact_patch(&fam, &g, &w).unwrap();
            let h = component_patch(&fam, &g, &w).unwrap();
            assert_eq!(h.patch.len(), r);
            assert_eq!(exact.patch.len(), r);
            assert!(h.cost >= exact.cost);
            assert!(exact.cost <= r as f64);
            for p in [&exact, &h] {
                assert!(fam.contains_member(&[g.clone(), p.patch.clone()].concat()).unwrap());
            }
            if r == 1 {
                assert_eq!(h.cost, exact.cost);
            }
        }
    }

    #[test]
    fn outgoing_count_examples() {
        let (fam, t) = tree(10);
        let c = min_outgoing_count_check(&fam, &[]).unwrap();
        assert_eq!((c.r, c.min_count), (9, 1));
        assert!(c.holds && c.bound.ceil() <= c.min_count as f64);

        let (fam, t8) = tree(8);
        let g: Vec<usize> = [(0, 1), (1, 2), (2, 3), (4, 5), (5, 6), (6, 7)]
            .iter()
            .map(|&(u, v)| t8.edge_index(u, v))
            .collect();
        let c = min_outgoing_count_check(&fam, &g).unwrap();
        assert_eq!((c.r, c.min_count, c.bound), (1, 16, 4.0));
        assert!(c.holds);

        let full: Vec<usize> = t.random_tree(&mut stream(0, Purpose::Design, 0));
        assert!(min_outgoing_count_check(&FamilyInstance::spanning_tree(10).unwrap(), &full).is_err());
    }

    #[test]
    fn outgoing_count_bound_on_random_sets() {
        for n in [20usize, 50] {
            let (fam, t) = tree(n);
            let max_r = (n as f64).sqrt().ceil() as usize;
            for i in 0..1000u64 {
                let mut rng = stream(i, Purpose::Design, n as u64);
                let r = rng.random_range(1..=max_r);
                let mut g = t.random_tree(&mut rng);
                g.shuffle(&mut rng);
                g.truncate(n - 1 - r);
                let c = min_outgoing_count_check(&fam, &g).unwrap();
                assert_eq!(c.r, r);
                assert!(c.holds, "n={n} r={r} {c:?}");
            }
        }
    }

    #[test]
    fn generated_sets_have_the_requested_distance() {
        let spec = uniform();
        for fam in [FamilyInstance::spanning_tree(12).unwrap(), FamilyInstance::matching(7).unwrap()] {
            for strategy in [
                GStrategy::RemoveFromOptimum,
                GStrategy::RemoveFromRandomMember,
                GStrategy::AdversarialHeaviest,
            ] {
                for r in [0, 1, 3, fam.ell()] {
                    let g = generate_g(&fam, &spec, r, strategy, &mut stream(r as u64, Purpose::Design, 9)).unwrap();
                    assert_eq!(fam.rho(&g).unwrap(), r, "{strategy:?}");
                }
            }
        }
    }

    #[test]
    fn adversarial_removes_heaviest() {
        let (fam, _) = tree(9);
        let spec = uniform();
        let mut rng = stream(4, Purpose::Design, 0);
        let g = generate_g(&fam, &spec, 3, GStrategy::AdversarialHeaviest, &mut rng).unwrap();
        let mut rng = stream(4, Purpose::Design, 0);
        let design = WeightAssignment::sample(&spec, fam.ground_size(), &mut rng);
        let opt = fam.min_weight(&design).unwrap().witness;
        let kept_max = g.iter().map(|&e| design.values()[e]).fold(0.0, f64::max);
        let dropped_min = opt
            .iter()
            .filter(|e| !g.contains(e))
            .map(|&e| design.values()[e])
            .fold(f64::INFINITY, f64::min);
        assert!(kept_max <= dropped_min);
    }

    #[test]
    fn zero_distance_has_zero_lambda() {
        let fam = FamilyInstance::spanning_tree(20).unwrap();
        let plan = PatchabilityPlan {
            r: 0,
            eps: 0.05,
            strategy: GStrategy::RemoveFromRandomMember,
            trials: 20,
            g_samples: 3,
            seed: 7,
        };
        let est = estimate_patchability(&fam, &uniform(), &plan).unwrap();
        assert_eq!(est.lambda, 0.0);
        assert!(!est.exhaustive);
        let bad = PatchabilityPlan { r: 20, ..plan };
        assert!(estimate_patchability(&fam, &uniform(), &bad).is_err());
    }

    #[test]
    fn tree_lambda_scales_like_r_over_n() {
        let fam = FamilyInstance::spanning_tree(100).unwrap();
        let plan = PatchabilityPlan {
            r: 10,
            eps: 0.05,
            strategy: GStrategy::RemoveFromRandomMember,
            trials: 500,
            g_samples: 4,
            seed: 7,
        };
        let est = estimate_patchability(&fam, &uniform(), &plan).unwrap();
        let scale = 10.0 / 100.0;
        assert!(est.lambda >= scale / 3.0 && est.lambda <= scale * 3.0, "lambda {}", est.lambda);
        assert_eq!(est.worst_costs.len(), 500);
    }

    #[test]
    fn exhaustive_sweep_matches_enumeration() {
        let members: Vec<Vec<usize>> = vec![
            vec![0, 1, 2],
            vec![2, 3, 4, 5],
            vec![6, 7],
            vec![1, 8, 9, 10],
            vec![4, 11],
            vec![0, 5, 9],
        ];
        let fam = FamilyInstance::explicit(12, &members).unwrap();
        let spec = uniform();
        let (r, eps, trials, seed) = (2, 0.1, 60, 3);
        let est = estimate_patchability_exhaustive(&fam, &spec, r, eps, trials, seed).unwrap();
        assert!(est.exhaustive);

        let weights: Vec<WeightAssignment> = (0..trials as u64)
            .map(|t| WeightAssignment::sample(&spec, 12, &mut stream(seed, Purpose::Trial, t)))
            .collect();
        let mut want = 0.0f64;
        let mut swept = 0;
        for gm in 0u64..1 << 12 {
            let g: Vec<usize> = (0..12).filter(|e| gm >> e & 1 == 1).collect();
            if oracle::rho_over_members(&members, &g) > r {
                continue;
            }
            swept += 1;
            let costs: Vec<f64> = weights
                .iter()
                .map(|w| oracle::patch_over_members(&members, &g, w).value)
                .collect();
            want = want.max(quantile(&costs, 1.0 - eps));
        }
        assert_eq!(est.g_samples, swept);
        assert!((est.lambda - want).abs() < 1e-12);
    }
}
