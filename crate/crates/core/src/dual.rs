//! The budget variable `Z_L` and the neighbourhood optimum `M(B_r)`.
//!
//! `Z_L` is the smallest `rho(G)` over sets `G` with `X_G <= L`; `M(B_r)` is
//! the cheapest `G` with `rho(G) <= r`. They are dual:
//! `M(B_r) <= L` exactly when `Z_L <= r`.
//!
//! All three families are solved exactly. For trees the best affordable set
//! is a forest, and the greedy forest is optimal by the matroid exchange
//! property. For matchings the best affordable set is a matching, and
//! successive shortest paths give a minimum-cost matching of every size.
//! For explicit families a member's cheapest elements are kept.

use rand::Rng;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::families::{elements_of, FamilyInstance, MatchingGrower, SolveResult, WeightAssignment};
use crate::weights::WeightSpec;

/// Value of `Z_L` with a set attaining it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualResult {
    #[serde(rename = "L")]
    pub budget: f64,
    pub z: usize,
    /// Ascending element indices; `rho(g_star) = z`.
    pub g_star: Vec<usize>,
    pub weight_used: f64,
}

/// Longest prefix of `values` whose running total stays `<= budget`.
fn affordable_prefix(values: impl IntoIterator<Item = f64>, budget: f64) -> (usize, f64) {
    let mut total = 0.0;
    let mut kept = 0;
    for v in values {
        let next = total + v;
        if next > budget {
            break;
        }
        total = next;
        kept += 1;
    }
    (kept, total)
}

/// Elements of `member` sorted cheapest first, ties by index.
fn cheapest_first(member: &[usize], w: &WeightAssignment) -> Vec<usize> {
    let mut m = member.to_vec();
    m.sort_by(|&a, &b| w.values()[a].total_cmp(&w.values()[b]).then(a.cmp(&b)));
    m
}

/// `Z_L`. The affordable sets are `{G : X_G <= L}`, boundary included.
pub fn z_l(fam: &FamilyInstance, w: &WeightAssignment, budget: f64) -> Result<DualResult> {
    fam.check_weights(w)?;
    if budget.is_nan() || budget < 0.0 {
        return Err(invalid("L", format!("budget must be non-negative, got {budget}")));
    }
    let (z, mut g_star, weight_used) = match fam {
        FamilyInstance::SpanningTree(t) => {
            let order = t.kruskal(w);
            let (kept, total) = affordable_prefix(order.iter().map(|&e| w.values()[e]), budget);
            (order.len() - kept, order[..kept].to_vec(), total)
        }
        FamilyInstance::Matching(m) => {
            let mut grower = MatchingGrower::new(m, w);
            grower.grow_within(budget);
            (m.side() - grower.size(), grower.edges(), grower.weight())
        }
        FamilyInstance::Explicit(e) => {
            let mut best: Option<(usize, Vec<usize>, f64)> = None;
            for &mask in e.member_masks() {
                let order = cheapest_first(&elements_of(mask), w);
                let (kept, total) = affordable_prefix(order.iter().map(|&i| w.values()[i]), budget);
                let z = order.len() - kept;
                if best.as_ref().is_none_or(|b| z < b.0) {
                    best = Some((z, order[..kept].to_vec(), total));
                }
            }
            best.expect("family is non-empty")
        }
    };
    g_star.sort_unstable();
    Ok(DualResult {
        budget,
        z,
        g_star,
        weight_used,
    })
}

/// `M(B_r)`: the cheapest set within Hamming distance `r` of the family.
pub fn m_br(fam: &FamilyInstance, w: &WeightAssignment, r: usize) -> Result<SolveResult> {
    fam.check_weights(w)?;
    if r > fam.ell() {
        return Err(invalid("r", format!("r = {r} exceeds ell(F) = {}", fam.ell())));
    }
    Ok(match fam {
        FamilyInstance::SpanningTree(t) => {
            let mut order = t.kruskal(w);
            order.truncate(order.len() - r);
            SolveResult::from_witness(w, order)
        }
        FamilyInstance::Matching(m) => {
            let mut grower = MatchingGrower::new(m, w);
            grower.grow_to(m.side() - r);
            SolveResult {
                value: grower.weight(),
                witness: grower.edges(),
            }
        }
        FamilyInstance::Explicit(e) => {
            let mut best: Option<SolveResult> = None;
            for &mask in e.member_masks() {
                let mut order = cheapest_first(&elements_of(mask), w);
                order.truncate(order.len().saturating_sub(r));
                let cand = SolveResult::from_witness(w, order);
                if best.as_ref().is_none_or(|b| cand.value < b.value) {
                    best = Some(cand);
                }
            }
            best.expect("family is non-empty")
        }
    })
}

/// Surrogate for an infinite weight in perturbation checks.
pub const INFINITE_WEIGHT: f64 = 1e18;

/// Outcome of [`talagrand_certificate_check`]. Every `*_violations` count is
/// zero when the properties hold.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateReport {
    pub z: usize,
    pub witness_size: usize,
    pub ell: usize,
    pub perturbations: usize,
    /// Largest `|Z_L(w') - Z_L(w)|` over single-coordinate changes.
    pub max_abs_delta: usize,
    pub lipschitz_violations: usize,
    /// Redraws of every coordinate outside `g_star`.
    pub freezes: usize,
    /// Freezes after which `Z_L` rose above `z`.
    pub freeze_violations: usize,
    /// Raising a coordinate outside `g_star` changed `Z_L`.
    pub nonwitness_violations: usize,
}

impl CertificateReport {
    pub fn holds(&self) -> bool {
        self.witness_size <= self.ell
            && self.lipschitz_violations == 0
            && self.freeze_violations == 0
            && self.nonwitness_violations == 0
    }
}

/// Checks by perturbation that `Z_L` is 1-Lipschitz in each coordinate and
/// that `{Z_L <= z}` is certified by the weights of `g_star`.
///
/// Each round changes one uniformly chosen coordinate, to a fresh draw, to
/// zero, or to [`INFINITE_WEIGHT`] in turn, and separately redraws every
/// coordinate outside the witness. Raising a non-witness coordinate must
/// leave `Z_L` unchanged; lowering one may decrease it, so only raises are
/// checked for equality.
pub fn talagrand_certificate_check<R: Rng + ?Sized>(
    fam: &FamilyInstance,
    spec: &WeightSpec,
    w: &WeightAssignment,
    budget: f64,
    rounds: usize,
    rng: &mut R,
) -> Result<CertificateReport> {
    let base = z_l(fam, w, budget)?;
    let size = fam.ground_size();
    let mut in_witness = vec![false; size];
    for &e in &base.g_star {
        in_witness[e] = true;
    }
    let outside: Vec<usize> = (0..size).filter(|&i| !in_witness[i]).collect();
    let mut report = CertificateReport {
        z: base.z,
        witness_size: base.g_star.len(),
        ell: fam.ell(),
        perturbations: 0,
        max_abs_delta: 0,
        lipschitz_violations: 0,
        freezes: 0,
        freeze_violations: 0,
        nonwitness_violations: 0,
    };
    for round in 0..rounds {
        let e = rng.random_range(0..size);
        let value = match round % 3 {
            0 => spec.sample(rng),
            1 => 0.0,
            _ => INFINITE_WEIGHT,
        };
        let z = z_l(fam, &w.with_value(e, value)?, budget)?.z;
        let delta = z.abs_diff(base.z);
        report.perturbations += 1;
        report.max_abs_delta = report.max_abs_delta.max(delta);
        if delta > 1 {
            report.lipschitz_violations += 1;
        }

        if !outside.is_empty() {
            let i = outside[rng.random_range(0..outside.len())];
            let raised = if round % 2 == 0 { INFINITE_WEIGHT } else { w.values()[i] + spec.sample(rng) };
            if z_l(fam, &w.with_value(i, raised)?, budget)?.z != base.z {
                report.nonwitness_violations += 1;
            }
        }

        let frozen: Vec<f64> = (0..size)
            .map(|i| if in_witness[i] { w.values()[i] } else { spec.sample(rng) })
            .collect();
        report.freezes += 1;
        if z_l(fam, &WeightAssignment::new(frozen)?, budget)?.z > base.z {
            report.freeze_violations += 1;
        }
    }
    Ok(report)
}

/// `e^{-t^2/4}`, the bound on `P(Z_L <= b) P(Z_L >= b + t sqrt(ell))`.
pub fn talagrand_bound(t: f64) -> Result<f64> {
    if t.is_nan() || t < 0.0 {
        return Err(invalid("t", format!("must be non-negative, got {t}")));
    }
    Ok((-t * t / 4.0).exp())
}

/// The gap `t sqrt(ell)` paired with [`talagrand_bound`].
pub fn talagrand_threshold(ell: usize, t: f64) -> f64 {
    t * (ell as f64).sqrt()
}
