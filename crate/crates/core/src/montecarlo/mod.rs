//! Seeded trial engine and the experiments built on it.
//!
//! Trial `i` draws its weights from `stream(seed, Trial, i)` and any
//! structural choice from `stream(seed, Design, i)`. Trials run in parallel
//! and are collected by index, so output never depends on scheduling.

pub mod stats;

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{ab_min, mean_median_const, upper_tail_bound};
use crate::dual::{m_br, talagrand_bound, talagrand_threshold, z_l};
use crate::error::{invalid, Error, Result};
use crate::families::{FamilyInstance, FamilyKind, WeightAssignment};
use crate::patching::{component_patch, exact_patch, generate_g, GStrategy};
use crate::rng::{stream, Purpose};
use crate::weights::{red_green_split, WeightSpec};
use stats::{chi_square_independence, fit_exponent, ks_one_sample, median, PowerLawFit, SummaryStats, TestOutcome};

/// Relative slack allowed when checking the split inequality: both sides are
/// sums of a few hundred floats and can disagree in the last bits.
pub const SPLIT_SLACK: f64 = 1e-12;

/// What each trial computes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ExperimentKind {
    /// `value` = `M(F)`.
    MinWeight,
    /// `value` = exact patch cost of a set `G` at distance `r`, drawn
    /// independently of the weights.
    Patch { r: usize, strategy: GStrategy },
    /// `value` = `Z_L`.
    Dual { budget: f64 },
    /// `value` = `M(F)` under weights coupled to green and red copies with
    /// split fraction `s`.
    Split { r: usize, s: f64 },
}

impl ExperimentKind {
    /// Names of the extra columns after `trial,n,q,seed,value`.
    pub fn extra_columns(&self, family: FamilyKind) -> &'static [&'static str] {
        match (self, family) {
            (ExperimentKind::MinWeight, _) => &[],
            (ExperimentKind::Patch { .. }, FamilyKind::SpanningTree) => &["rho", "heuristic_cost"],
            (ExperimentKind::Patch { .. }, _) => &["rho"],
            (ExperimentKind::Dual { .. }, _) => &["weight_used"],
            (ExperimentKind::Split { .. }, _) => &["w_green", "w_red", "bound", "violation"],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub family: FamilyKind,
    pub n: usize,
    pub spec: WeightSpec,
    pub trials: usize,
    pub seed: u64,
}

impl ExperimentConfig {
    pub fn new(family: FamilyKind, n: usize, spec: WeightSpec, trials: usize, seed: u64) -> Self {
        Self {
            family,
            n,
            spec,
            trials,
            seed,
        }
    }

    pub fn instance(&self) -> Result<FamilyInstance> {
        match self.family {
            FamilyKind::SpanningTree => FamilyInstance::spanning_tree(self.n),
            FamilyKind::Matching => FamilyInstance::matching(self.n),
            FamilyKind::Explicit => Err(Error::Unsupported {
                op: "experiments",
                family: "explicit",
            }),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(invalid("trials", "need at least one trial"));
        }
        Ok(())
    }
}

/// One trial's output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub n: usize,
    pub q: f64,
    pub seed: u64,
    pub value: f64,
    /// Aligned with [`ExperimentKind::extra_columns`].
    pub extras: Vec<f64>,
}

fn one_trial(
    cfg: &ExperimentConfig,
    fam: &FamilyInstance,
    kind: &ExperimentKind,
    trial: u64,
) -> Result<(f64, Vec<f64>)> {
    let mut rng = stream(cfg.seed, Purpose::Trial, trial);
    let len = fam.ground_size();
    Ok(match *kind {
        ExperimentKind::MinWeight => {
            let w = WeightAssignment::sample(&cfg.spec, len, &mut rng);
            (fam.min_weight(&w)?.value, Vec::new())
        }
        ExperimentKind::Patch { r, strategy } => {
            let g = generate_g(fam, &cfg.spec, r, strategy, &mut stream(cfg.seed, Purpose::Design, trial))?;
            let w = WeightAssignment::sample(&cfg.spec, len, &mut rng);
            let exact = exact_patch(fam, &g, &w)?;
            let rho = exact.patch.len() as f64;
            match fam {
                FamilyInstance::SpanningTree(_) => {
                    let h = component_patch(fam, &g, &w)?;
                    (exact.cost, vec![rho, h.cost])
                }
                _ => (exact.cost, vec![rho]),
            }
        }
        ExperimentKind::Dual { budget } => {
            let w = WeightAssignment::sample(&cfg.spec, len, &mut rng);
            let d = z_l(fam, &w, budget)?;
            (d.z as f64, vec![d.weight_used])
        }
        ExperimentKind::Split { r, s } => {
            let mut x = Vec::with_capacity(len);
            let mut green = Vec::with_capacity(len);
            let mut red = Vec::with_capacity(len);
            for _ in 0..len {
                let c = red_green_split(&cfg.spec, s, &mut rng)?;
                x.push(c.x);
                green.push(c.y);
                red.push(c.y_prime);
            }
            let (x, green, red) = (
                WeightAssignment::new(x)?,
                WeightAssignment::new(green)?,
                WeightAssignment::new(red)?,
            );
            let m = fam.min_weight(&x)?.value;
            let near = m_br(fam, &green, r)?;
            let patch = exact_patch(fam, &near.witness, &red)?;
            let p = 1.0 / cfg.spec.q();
            let bound = near.value / (1.0 - s).powf(p) + patch.cost / s.powf(p);
            let violation = if m > bound * (1.0 + SPLIT_SLACK) { 1.0 } else { 0.0 };
            (m, vec![near.value, patch.cost, bound, violation])
        }
    })
}

/// Runs `cfg.trials` independent trials of `kind`.
pub fn run(cfg: &ExperimentConfig, kind: &ExperimentKind) -> Result<Vec<TrialRecord>> {
    cfg.validate()?;
    let fam = cfg.instance()?;
    (0..cfg.trials as u64)
        .into_par_iter()
        .map(|trial| {
            let (value, extras) = one_trial(cfg, &fam, kind, trial).map_err(|e| Error::Trial {
                trial,
                source: Box::new(e),
            })?;
            Ok(TrialRecord {
                trial,
                n: cfg.n,
                q: cfg.spec.q(),
                seed: cfg.seed,
                value,
                extras,
            })
        })
        .collect()
}

pub fn values(records: &[TrialRecord]) -> Vec<f64> {
    records.iter().map(|r| r.value).collect()
}

pub fn extra(records: &[TrialRecord], column: usize) -> Vec<f64> {
    records.iter().map(|r| r.extras[column]).collect()
}

pub fn summarize(records: &[TrialRecord]) -> Result<SummaryStats> {
    SummaryStats::from_values(&values(records))
}

fn check_grid(name: &'static str, grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(invalid(name, "grid must be non-empty"));
    }
    if grid.windows(2).any(|p| !(p[0] < p[1])) {
        return Err(invalid(name, "grid must be strictly increasing"));
    }
    Ok(())
}

/// Summary of `M(F)` at each size with a power-law fit of its standard
/// deviation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingReport {
    pub points: Vec<(usize, SummaryStats)>,
    pub std_fit: PowerLawFit,
}

pub fn fluctuation_scaling(
    family: FamilyKind,
    n_grid: &[usize],
    spec: &WeightSpec,
    trials: usize,
    seed: u64,
) -> Result<ScalingReport> {
    check_grid("n_grid", &n_grid.iter().map(|&n| n as f64).collect::<Vec<_>>())?;
    let mut points = Vec::with_capacity(n_grid.len());
    for &n in n_grid {
        let cfg = ExperimentConfig::new(family, n, *spec, trials, seed);
        points.push((n, summarize(&run(&cfg, &ExperimentKind::MinWeight)?)?));
    }
    let pairs: Vec<(f64, f64)> = points.iter().map(|(n, s)| (*n as f64, s.std)).collect();
    Ok(ScalingReport {
        std_fit: fit_exponent(&pairs)?,
        points,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PatchScalingRow {
    pub n: usize,
    pub r: usize,
    pub mean_cost: f64,
    pub sem: f64,
    /// `mean_cost / (r n^{-1/q})`.
    pub normalized: f64,
    /// Trials where the component heuristic cost less than the exact patch
    /// (always zero); `None` outside spanning trees.
    pub heuristic_below_exact: Option<usize>,
}

/// Exact patch cost at `r = ceil(sqrt(n))` across sizes.
pub fn patch_scaling(
    family: FamilyKind,
    n_grid: &[usize],
    spec: &WeightSpec,
    trials: usize,
    seed: u64,
    strategy: GStrategy,
) -> Result<Vec<PatchScalingRow>> {
    check_grid("n_grid", &n_grid.iter().map(|&n| n as f64).collect::<Vec<_>>())?;
    n_grid
        .iter()
        .map(|&n| {
            let r = (n as f64).sqrt().ceil() as usize;
            let cfg = ExperimentConfig::new(family, n, *spec, trials, seed);
            let records = run(&cfg, &ExperimentKind::Patch { r, strategy })?;
            let summary = summarize(&records)?;
            let heuristic_below_exact = (family == FamilyKind::SpanningTree)
                .then(|| records.iter().filter(|t| t.extras[1] < t.value).count());
            Ok(PatchScalingRow {
                n,
                r,
                mean_cost: summary.mean,
                sem: summary.sem,
                normalized: summary.mean / (r as f64 * (n as f64).powf(-1.0 / spec.q())),
                heuristic_below_exact,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplitReport {
    pub r: usize,
    pub s: f64,
    pub trials: usize,
    pub violations: usize,
    pub min_weight: SummaryStats,
    pub w_green: SummaryStats,
    pub w_red: SummaryStats,
    /// `bound - M(F)` per trial.
    pub slack: SummaryStats,
    /// Split fraction minimising the bound evaluated at the medians of `W`, `W'`.
    pub suggested_s: f64,
    /// That minimal composite value.
    pub composite_at_medians: f64,
}

pub fn split_experiment(cfg: &ExperimentConfig, r: usize, s: f64) -> Result<(SplitReport, Vec<TrialRecord>)> {
    let records = run(cfg, &ExperimentKind::Split { r, s })?;
    let green = extra(&records, 0);
    let red = extra(&records, 1);
    let slack: Vec<f64> = records.iter().map(|t| t.extras[2] - t.value).collect();
    let violations = records.iter().filter(|t| t.extras[3] != 0.0).count();
    let (a, b) = (median(&green), median(&red));
    let p = 1.0 / cfg.spec.q();
    // f(s) = a/(1-s)^p + b/s^p; the minimiser needs its larger coefficient first.
    // A zero coefficient pushes the minimiser to the boundary.
    let (suggested_s, composite_at_medians) = if b <= 0.0 {
        (0.0, a)
    } else if a <= 0.0 {
        (1.0, b)
    } else if a >= b {
        let m = ab_min(a, b, p)?;
        (m.s0, m.fmin)
    } else {
        let m = ab_min(b, a, p)?;
        (1.0 - m.s0, m.fmin)
    };
    let report = SplitReport {
        r,
        s,
        trials: records.len(),
        violations,
        min_weight: summarize(&records)?,
        w_green: SummaryStats::from_values(&green)?,
        w_red: SummaryStats::from_values(&red)?,
        slack: SummaryStats::from_values(&slack)?,
        suggested_s,
        composite_at_medians,
    };
    Ok((report, records))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailRow {
    pub t: f64,
    pub bound: f64,
    pub survival: f64,
    /// Binomial standard error of `survival`.
    pub se: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailReport {
    /// Median estimated on the calibration half.
    pub mu_hat: f64,
    pub calibration: usize,
    pub evaluation: usize,
    pub rows: Vec<TailRow>,
    pub mean: f64,
    pub mean_bound: f64,
    pub mean_holds: bool,
}

impl TailReport {
    pub fn holds(&self) -> bool {
        self.mean_holds && self.rows.iter().all(|r| r.holds)
    }
}

/// Upper-tail check: the median comes from even-numbered trials, survival and
/// mean from odd-numbered ones. A row holds when survival is within
/// `se_multiplier` standard errors of the bound.
pub fn tail_experiment(cfg: &ExperimentConfig, t_grid: &[f64], se_multiplier: f64) -> Result<(TailReport, Vec<TrialRecord>)> {
    check_grid("t_grid", t_grid)?;
    if cfg.trials < 2 {
        return Err(invalid("trials", "need at least two trials to split calibration and evaluation"));
    }
    let records = run(cfg, &ExperimentKind::MinWeight)?;
    let (calib, eval): (Vec<&TrialRecord>, Vec<&TrialRecord>) = records.iter().partition(|t| t.trial % 2 == 0);
    let mu_hat = median(&calib.iter().map(|t| t.value).collect::<Vec<_>>());
    let eval_values: Vec<f64> = eval.iter().map(|t| t.value).collect();
    let ne = eval_values.len() as f64;
    let q = cfg.spec.q();
    let rows = t_grid
        .iter()
        .map(|&t| {
            let bound = upper_tail_bound(t, q)?;
            let survival = eval_values.iter().filter(|&&v| v > t * mu_hat).count() as f64 / ne;
            let se = (survival * (1.0 - survival) / ne).sqrt();
            Ok(TailRow {
                t,
                bound,
                survival,
                se,
                holds: survival <= bound + se_multiplier * se,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mean = SummaryStats::from_values(&eval_values)?.mean;
    let mean_bound = mean_median_const(q)? * mu_hat;
    let report = TailReport {
        mu_hat,
        calibration: calib.len(),
        evaluation: eval_values.len(),
        rows,
        mean,
        mean_bound,
        mean_holds: mean <= mean_bound,
    };
    Ok((report, records))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TalagrandRow {
    pub t: f64,
    /// `t sqrt(ell)`.
    pub threshold: f64,
    pub p_low: f64,
    pub p_high: f64,
    pub product: f64,
    /// Delta-method standard error of `product`.
    pub se: f64,
    pub bound: f64,
    pub holds: bool,
}

/// Empirical `P(Z_L <= 0) P(Z_L >= t sqrt(ell))` against `e^{-t^2/4}`.
pub fn talagrand_ensemble(cfg: &ExperimentConfig, budget: f64, t_grid: &[f64], se_multiplier: f64) -> Result<Vec<TalagrandRow>> {
    check_grid("t_grid", t_grid)?;
    let ell = cfg.instance()?.ell();
    let records = run(cfg, &ExperimentKind::Dual { budget })?;
    let n = records.len() as f64;
    let z = values(&records);
    let p_low = z.iter().filter(|&&v| v <= 0.0).count() as f64 / n;
    t_grid
        .iter()
        .map(|&t| {
            let threshold = talagrand_threshold(ell, t);
            let p_high = z.iter().filter(|&&v| v >= threshold).count() as f64 / n;
            let var_low = p_low * (1.0 - p_low) / n;
            let var_high = p_high * (1.0 - p_high) / n;
            let se = (p_high * p_high * var_low + p_low * p_low * var_high).sqrt();
            let bound = talagrand_bound(t)?;
            let product = p_low * p_high;
            Ok(TalagrandRow {
                t,
                threshold,
                p_low,
                p_high,
                product,
                se,
                bound,
                holds: product <= bound + se_multiplier * se,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CouplingReport {
    pub q: f64,
    pub base: &'static str,
    pub s: f64,
    pub samples: usize,
    /// Triples with `x` above `min(y/(1-s)^{1/q}, y'/s^{1/q})`.
    pub violations: usize,
    pub ks_x: TestOutcome,
    pub ks_y: TestOutcome,
    pub ks_y_prime: TestOutcome,
    /// Chi-square independence of `y` and `y'` on 4 x 4 quantile bins.
    pub independence: TestOutcome,
}

impl CouplingReport {
    pub fn passes(&self, significance: f64) -> bool {
        self.violations == 0
            && [self.ks_x, self.ks_y, self.ks_y_prime, self.independence]
                .iter()
                .all(|t| t.passes(significance))
    }
}

const COUPLING_CHUNK: usize = 1 << 16;

/// Draws `samples` coupled triples and tests the sure inequality, the three
/// marginal laws and the independence of the two copies.
pub fn coupling_soundness(spec: &WeightSpec, s: f64, samples: usize, seed: u64) -> Result<CouplingReport> {
    if samples == 0 {
        return Err(invalid("samples", "need at least one sample"));
    }
    let chunks = samples.div_ceil(COUPLING_CHUNK);
    let triples = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let len = COUPLING_CHUNK.min(samples - c * COUPLING_CHUNK);
            let mut rng = stream(seed, Purpose::Trial, c as u64);
            (0..len).map(|_| red_green_split(spec, s, &mut rng)).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?
        .concat();
    let q = spec.q();
    let violations = triples.iter().filter(|t| t.x > t.bound(q)).count();
    let cdf = |x: f64| spec.cdf(x).unwrap_or(0.0);
    let xs: Vec<f64> = triples.iter().map(|t| t.x).collect();
    let ys: Vec<f64> = triples.iter().map(|t| t.y).collect();
    let yps: Vec<f64> = triples.iter().map(|t| t.y_prime).collect();
    Ok(CouplingReport {
        q,
        base: spec.base().name(),
        s,
        samples,
        violations,
        ks_x: ks_one_sample(&xs, cdf),
        ks_y: ks_one_sample(&ys, cdf),
        ks_y_prime: ks_one_sample(&yps, cdf),
        independence: chi_square_independence(&ys, &yps, 4),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(family: FamilyKind, n: usize, trials: usize) -> ExperimentConfig {
        ExperimentConfig::new(family, n, WeightSpec::uniform(1.0).unwrap(), trials, 7)
    }

    #[test]
    fn runs_are_deterministic() {
        for kind in [
            ExperimentKind::MinWeight,
            ExperimentKind::Patch {
                r: 3,
                strategy: GStrategy::RemoveFromRandomMember,
            },
            ExperimentKind::Dual { budget: 0.8 },
            ExperimentKind::Split { r: 2, s: 0.3 },
        ] {
            for family in [FamilyKind::SpanningTree, FamilyKind::Matching] {
                let c = cfg(family, 12, 16);
                let a = run(&c, &kind).unwrap();
                let b = run(&c, &kind).unwrap();
                assert_eq!(a, b);
                assert_eq!(a.len(), 16);
                assert!(a.iter().enumerate().all(|(i, t)| t.trial == i as u64));
                assert!(a.iter().all(|t| t.extras.len() == kind.extra_columns(family).len()));
            }
        }
        assert_eq!(run(&cfg(FamilyKind::SpanningTree, 5, 1), &ExperimentKind::MinWeight).unwrap().len(), 1);
        assert!(run(&cfg(FamilyKind::SpanningTree, 5, 0), &ExperimentKind::MinWeight).is_err());
    }

    #[test]
    fn trial_errors_carry_the_index() {
        let c = cfg(FamilyKind::SpanningTree, 6, 3);
        let err = run(&c, &ExperimentKind::Dual { budget: -1.0 }).unwrap_err();
        assert!(matches!(err, Error::Trial { trial: 0, .. }));
    }

    #[test]
    fn mst_mean_near_zeta3() {
        let s = summarize(&run(&cfg(FamilyKind::SpanningTree, 100, 500), &ExperimentKind::MinWeight).unwrap()).unwrap();
        assert!((s.mean - 1.2020569).abs() < 0.05, "mean {}", s.mean);
    }

    #[test]
    fn split_at_full_distance() {
        let c = cfg(FamilyKind::SpanningTree, 20, 30);
        let (report, records) = split_experiment(&c, 19, 0.4).unwrap();
        assert_eq!(report.violations, 0);
        assert!(records.iter().all(|t| t.extras[0] == 0.0));
        // With W = 0 the bound is the red MST over s^{1/q}.
        assert!(report.slack.quantiles[0] >= 0.0);
    }

    #[test]
    fn split_composite_covers_median() {
        let c = cfg(FamilyKind::SpanningTree, 60, 100);
        let (report, _) = split_experiment(&c, 8, 0.2).unwrap();
        assert_eq!(report.violations, 0);
        assert!(report.suggested_s > 0.0 && report.suggested_s < 1.0);
        assert!(report.composite_at_medians >= report.min_weight.median);
    }

    #[test]
    fn tail_trivial_row() {
        let (report, _) = tail_experiment(&cfg(FamilyKind::SpanningTree, 30, 400), &[0.5, 1.0, 2.0], 3.0).unwrap();
        assert_eq!(report.rows[0].bound, 1.0);
        assert_eq!(report.rows[1].bound, 1.0);
        assert!(report.holds());
        assert_eq!(report.calibration + report.evaluation, 400);
        assert!(tail_experiment(&cfg(FamilyKind::SpanningTree, 30, 10), &[2.0, 1.0], 3.0).is_err());
    }

    #[test]
    fn coupling_small_run() {
        let spec = WeightSpec::exponential(2.0).unwrap();
        let r = coupling_soundness(&spec, 0.3, 100_000, 1).unwrap();
        assert!(r.passes(0.01), "{r:?}");
        assert_eq!(r.samples, 100_000);
    }
}
