//! Acceptance suite. Runs without the libtest harness and prints one
//! `PASS`/`FAIL` line per criterion; exits non-zero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use patchable::bounds::{ab_min, ab_objective, ball_volume_prob, mean_median_const, upper_tail_bound};
use patchable::dual::{talagrand_certificate_check, z_l};
use patchable::montecarlo::stats::median;
use patchable::montecarlo::{
    coupling_soundness, fluctuation_scaling, patch_scaling, run, split_experiment, summarize, tail_experiment,
    talagrand_ensemble, values, ExperimentConfig, ExperimentKind,
};
use patchable::oracle::equivalence_check;
use patchable::patching::GStrategy;
use patchable::rng::{stream, Purpose};
use patchable::{Base, FamilyInstance, FamilyKind, WeightAssignment, WeightSpec};
use rand::Rng;

const SEED: u64 = 7;
const ZETA3: f64 = 1.202_056_903_159_594_3;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn uniform(q: f64) -> WeightSpec {
    WeightSpec::uniform(q).unwrap()
}

fn mst_limit() -> Outcome {
    let start = Instant::now();
    let cfg = ExperimentConfig::new(FamilyKind::SpanningTree, 200, uniform(1.0), 1000, SEED);
    let s = summarize(&run(&cfg, &ExperimentKind::MinWeight).unwrap()).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let rel = (s.mean - ZETA3).abs() / ZETA3;
    outcome(
        rel <= 0.05 && secs < 30.0,
        format!("mean {:.5} vs 1.20206 (rel err {rel:.4}), {secs:.1}s", s.mean),
    )
}

fn assignment_limit() -> Outcome {
    let start = Instant::now();
    let target = std::f64::consts::PI.powi(2) / 6.0;
    let cfg = ExperimentConfig::new(FamilyKind::Matching, 100, uniform(1.0), 500, SEED);
    let s = summarize(&run(&cfg, &ExperimentKind::MinWeight).unwrap()).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let rel = (s.mean - target).abs() / target;
    outcome(
        rel <= 0.05 && secs < 60.0,
        format!("mean {:.5} vs 1.64493 (rel err {rel:.4}), {secs:.1}s", s.mean),
    )
}

fn fluctuation_exponent() -> Outcome {
    let report = fluctuation_scaling(FamilyKind::SpanningTree, &[50, 100, 200, 400], &uniform(1.0), 2000, SEED).unwrap();
    let slope = report.std_fit.slope;
    let bound = -1.0 / 4.0;
    let stds: Vec<String> = report.points.iter().map(|(n, s)| format!("{n}:{:.4}", s.std)).collect();
    outcome(
        (-0.65..=-0.35).contains(&slope) && slope <= bound + 0.1,
        format!("std slope {slope:.3} (bound slope {bound}), std {}", stds.join(" ")),
    )
}

fn patch_scaling_check() -> Outcome {
    let rows = patch_scaling(
        FamilyKind::SpanningTree,
        &[100, 200, 400],
        &uniform(1.0),
        300,
        SEED,
        GStrategy::RemoveFromRandomMember,
    )
    .unwrap();
    let pass = rows
        .iter()
        .all(|r| (0.1..=10.0).contains(&r.normalized) && r.heuristic_below_exact == Some(0));
    let detail: Vec<String> = rows
        .iter()
        .map(|r| format!("n={} r={} cost/(r/n)={:.3} heuristic<exact={}", r.n, r.r, r.normalized, r.heuristic_below_exact.unwrap()))
        .collect();
    outcome(pass, detail.join("; "))
}

fn coupling() -> Outcome {
    let mut pass = true;
    let mut violations = 0;
    let mut min_p = f64::INFINITY;
    let mut configs = 0;
    for q in [0.5, 1.0, 2.0] {
        for base in [Base::UniformPower, Base::ExponentialPower] {
            for s in [0.1, 0.5] {
                let spec = WeightSpec::new(q, base).unwrap();
                let r = coupling_soundness(&spec, s, 1_000_000, SEED + configs).unwrap();
                configs += 1;
                violations += r.violations;
                pass &= r.passes(0.01);
                min_p = [r.ks_x, r.ks_y, r.ks_y_prime, r.independence]
                    .iter()
                    .map(|t| t.p_value)
                    .fold(min_p, f64::min);
            }
        }
    }
    outcome(
        pass,
        format!("{configs} configs x 1e6 triples, {violations} violations, smallest p-value {min_p:.4}"),
    )
}

fn oracle_equivalence() -> Outcome {
    let spec = uniform(1.0);
    let mut pass = true;
    let mut parts = Vec::new();
    let families = (2..=5)
        .map(|n| FamilyInstance::spanning_tree(n).unwrap())
        .chain((1..=6).map(|n| FamilyInstance::matching(n).unwrap()));
    for fam in families {
        let report = equivalence_check(&fam, &spec, 100, SEED).unwrap();
        pass &= report.all_agree();
        let cases: usize = report.checks.iter().map(|c| c.2).sum();
        parts.push(format!("{}({})={}/{cases}", fam.kind().name(), report.n, if report.all_agree() { "ok" } else { "MISMATCH" }));
    }
    outcome(pass, parts.join(" "))
}

fn golden_section_min(a: f64, b: f64, p: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let x1 = hi - g * (hi - lo);
        let x2 = lo + g * (hi - lo);
        if ab_objective(a, b, p, x1) < ab_objective(a, b, p, x2) {
            hi = x2;
        } else {
            lo = x1;
        }
    }
    ab_objective(a, b, p, 0.5 * (lo + hi))
}

fn closed_forms() -> Outcome {
    let mut rng = stream(SEED, Purpose::Reference, 0);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let x: f64 = rng.random_range(1e-3..10.0);
        let y: f64 = rng.random_range(1e-3..10.0);
        let p = rng.random_range(0.0..4.0);
        let (a, b) = (x.max(y), x.min(y));
        let fmin = ab_min(a, b, p).unwrap().fmin;
        worst = worst.max((golden_section_min(a, b, p) - fmin).abs() / fmin);
    }
    let exact = (ball_volume_prob(1.0, 2, 1.0).unwrap() - 0.5).abs() < 1e-14
        && (ball_volume_prob(1.0, 3, 1.0).unwrap() - 1.0 / 6.0).abs() < 1e-14;

    let samples = 1_000_000;
    let mut mc = stream(SEED, Purpose::Reference, 1);
    let hits = (0..samples)
        .filter(|_| {
            let (u, v): (f64, f64) = (mc.random(), mc.random());
            u.sqrt() + v.sqrt() <= 0.5
        })
        .count();
    let p_hat = hits as f64 / samples as f64;
    let vol = ball_volume_prob(2.0, 2, 0.5).unwrap();
    let se = (vol * (1.0 - vol) / samples as f64).sqrt();
    let mc_ok = (p_hat - vol).abs() <= 3.0 * se;

    let tail = upper_tail_bound(2.0, 1.0).unwrap();
    let c1_err = (mean_median_const(1.0).unwrap() - 2.0 / 2f64.ln()).abs();
    outcome(
        worst <= 1e-9 && exact && mc_ok && tail == 0.5 && c1_err <= 1e-12,
        format!(
            "ab_min worst rel {worst:.1e}; ball exact {exact}; MC {p_hat:.6} vs {vol:.6} ({:.2} SE); tail {tail}; C_1 err {c1_err:.1e}",
            (p_hat - vol).abs() / se
        ),
    )
}

fn split_inequality() -> Outcome {
    let cfg = ExperimentConfig::new(FamilyKind::SpanningTree, 100, uniform(1.0), 200, SEED);
    let (report, _) = split_experiment(&cfg, 14, 0.1).unwrap();
    outcome(
        report.violations == 0 && report.trials == 200,
        format!(
            "{} violations in {} trials; min slack {:.4}, median W {:.4}, median W' {:.4}",
            report.violations, report.trials, report.slack.quantiles[0], report.w_green.median, report.w_red.median
        ),
    )
}

fn tail_bound() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for q in [1.0, 2.0] {
        let cfg = ExperimentConfig::new(FamilyKind::SpanningTree, 50, uniform(q), 5000, SEED);
        let (report, _) = tail_experiment(&cfg, &[1.0, 1.5, 2.0, 3.0], 3.0).unwrap();
        pass &= report.holds();
        for r in &report.rows {
            parts.push(format!("q={q} t={}: {:.4}<={:.4}", r.t, r.survival, r.bound));
        }
        parts.push(format!("q={q} mean {:.3}<={:.3}", report.mean, report.mean_bound));
    }
    outcome(pass, parts.join(", "))
}

fn talagrand() -> Outcome {
    let spec = uniform(1.0);
    let fam = FamilyInstance::spanning_tree(6).unwrap();
    let mut max_delta = 0;
    let mut cert_ok = true;
    for i in 0..200u64 {
        let w = WeightAssignment::sample(&spec, fam.ground_size(), &mut stream(SEED, Purpose::Trial, i));
        let budget = fam.min_weight(&w).unwrap().value * 0.5;
        let report =
            talagrand_certificate_check(&fam, &spec, &w, budget, 1, &mut stream(SEED, Purpose::Perturb, i)).unwrap();
        max_delta = max_delta.max(report.max_abs_delta);
        cert_ok &= report.holds();
        // The witness alone certifies the bound.
        let d = z_l(&fam, &w, budget).unwrap();
        cert_ok &= d.g_star.len() <= fam.ell();
    }

    let cfg = ExperimentConfig::new(FamilyKind::SpanningTree, 50, spec, 2000, SEED);
    let budget = median(&values(&run(&cfg, &ExperimentKind::MinWeight).unwrap()));
    let rows = talagrand_ensemble(&cfg, budget, &[1.0, 2.0, 3.0], 3.0).unwrap();
    let ensemble_ok = rows.iter().all(|r| r.holds);
    let parts: Vec<String> = rows
        .iter()
        .map(|r| format!("t={}: {:.2e}<={:.3}", r.t, r.product, r.bound))
        .collect();
    outcome(
        max_delta <= 1 && cert_ok && ensemble_ok,
        format!("max |dZ| {max_delta}, certificates {}, products {}", if cert_ok { "ok" } else { "FAILED" }, parts.join(" ")),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("MST limit constant", mst_limit),
        ("assignment limit constant", assignment_limit),
        ("MST fluctuation exponent", fluctuation_exponent),
        ("patch scaling", patch_scaling_check),
        ("coupling soundness", coupling),
        ("oracle equivalence", oracle_equivalence),
        ("closed-form cross-checks", closed_forms),
        ("sure split inequality", split_inequality),
        ("upper-tail bound", tail_bound),
        ("Talagrand properties", talagrand),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = check();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {:>2} {verdict} {name} [{:.1}s]: {}",
            i + 1,
            start.elapsed().as_secs_f64(),
            o.detail
        );
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
