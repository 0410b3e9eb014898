//! Closed-form bounds and constants.
//!
//! Gamma functions come from `statrs` and are evaluated in log space, so the
//! ball-volume and first-moment bounds stay finite when `q m` is far beyond
//! the range of `Γ` in double precision.

use serde::Serialize;
use statrs::function::gamma::{gamma, ln_gamma};

use crate::error::{invalid, Result};

fn non_negative(name: &'static str, x: f64) -> Result<()> {
    if x.is_nan() || x < 0.0 {
        return Err(invalid(name, format!("must be non-negative, got {x}")));
    }
    Ok(())
}

fn positive(name: &'static str, x: f64) -> Result<()> {
    if !(x > 0.0) {
        return Err(invalid(name, format!("must be positive, got {x}")));
    }
    Ok(())
}

fn probability(name: &'static str, x: f64) -> Result<()> {
    if !(x > 0.0 && x < 1.0) {
        return Err(invalid(name, format!("must lie in (0, 1), got {x}")));
    }
    Ok(())
}

/// `(a^{1/(p+1)} + b^{1/(p+1)})^{p+1}`, shared by [`ab_min`] and
/// [`concentration_upper`] so the two agree to the last bit.
fn power_sum(a: f64, b: f64, p: f64) -> (f64, f64, f64) {
    let e = 1.0 / (p + 1.0);
    let (u, v) = (a.powf(e), b.powf(e));
    (u, v, (u + v).powf(p + 1.0))
}

/// Upper end of the concentration window,
/// `(L^{q/(q+1)} + λ^{q/(q+1)})^{(q+1)/q}`.
pub fn concentration_upper(budget: f64, lambda: f64, q: f64) -> Result<f64> {
    non_negative("L", budget)?;
    non_negative("lambda", lambda)?;
    positive("q", q)?;
    if lambda == 0.0 || budget == 0.0 {
        return Ok(budget + lambda);
    }
    Ok(power_sum(budget, lambda, 1.0 / q).2)
}

/// Smallest `r` for which the concentration theorem applies:
/// `sqrt(8 ln(1/eps) ell)`.
pub fn r_min(ell: usize, eps: f64) -> Result<f64> {
    if ell == 0 {
        return Err(invalid("ell", "must be at least 1"));
    }
    probability("eps", eps)?;
    Ok((8.0 * (1.0 / eps).ln() * ell as f64).sqrt())
}

/// Minimiser of `f(s) = a/(1-s)^p + b/s^p` on `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AbMin {
    pub s0: f64,
    pub fmin: f64,
    /// `a (1 + (2^{p+1} - 1) (b/a)^{1/(p+1)})`, an upper bound on `fmin`.
    pub secant_bound: f64,
}

pub fn ab_min(a: f64, b: f64, p: f64) -> Result<AbMin> {
    positive("b", b)?;
    non_negative("p", p)?;
    if !(a >= b) || a.is_infinite() {
        return Err(invalid("a", format!("need finite a >= b, got a = {a}, b = {b}")));
    }
    let (u, v, fmin) = power_sum(a, b, p);
    let c = 2f64.powf(p + 1.0) - 1.0;
    Ok(AbMin {
        s0: v / (u + v),
        fmin,
        secant_bound: a * (1.0 + c * (b / a).powf(1.0 / (p + 1.0))),
    })
}

/// `f(s) = a/(1-s)^p + b/s^p`.
pub fn ab_objective(a: f64, b: f64, p: f64, s: f64) -> f64 {
    a / (1.0 - s).powf(p) + b / s.powf(p)
}

/// `ln(Γ(1+q)^m / Γ(1+qm) · L^{qm})`.
fn ln_ball_volume(q: f64, m: usize, budget: f64) -> f64 {
    let m = m as f64;
    m * ln_gamma(1.0 + q) - ln_gamma(1.0 + q * m) + q * m * budget.ln()
}

/// Bound on `P(U_1^{1/q} + .. + U_m^{1/q} <= L)` by the volume of the
/// positive `(1/q)`-ball of radius `L`: `Γ(1+q)^m / Γ(1+qm) · L^{qm}`, capped
/// at 1. The exponent of `L` is `q m`, which the volume formula requires.
pub fn ball_volume_prob(q: f64, m: usize, budget: f64) -> Result<f64> {
    positive("q", q)?;
    non_negative("L", budget)?;
    if m == 0 {
        return Err(invalid("m", "must be at least 1"));
    }
    if budget == 0.0 {
        return Ok(0.0);
    }
    Ok(ln_ball_volume(q, m, budget).exp().min(1.0))
}

/// `min(1, 2^{1 - t^q})`, the upper-tail bound relative to the median.
pub fn upper_tail_bound(t: f64, q: f64) -> Result<f64> {
    non_negative("t", t)?;
    positive("q", q)?;
    Ok(2f64.powf(1.0 - t.powf(q)).min(1.0))
}

/// `C_q = 2 ln(2)^{-1/q} Γ(1 + 1/q)`, with `E M <= C_q · median`.
pub fn mean_median_const(q: f64) -> Result<f64> {
    positive("q", q)?;
    Ok(2.0 * 2f64.ln().powf(-1.0 / q) * gamma(1.0 + 1.0 / q))
}

/// `C_q` as `q → ∞`.
pub const MEAN_MEDIAN_ASYMPTOTE: f64 = 2.0;

/// Inputs of the first-moment lower bound: members have between `ell0` and
/// `ell1` elements and there are at most `c^m m^{βm}` members of size `m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FirstMomentInputs {
    pub q: f64,
    pub ell0: usize,
    pub ell1: usize,
    pub beta: f64,
    pub c: f64,
    /// Target decay rate: failure probability `e^{-ell0 t}`.
    pub t: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FirstMomentBound {
    /// `P(M(F) <= l_lower) <= failure_bound`.
    pub l_lower: f64,
    pub failure_bound: f64,
    pub c0: f64,
    pub c1: f64,
    /// `β < q`: sets of size `ell0` dominate and set the scale.
    pub small_sets_dominate: bool,
    /// `(m, bound on E[R_m])` with `E[R_m] <= (c0 L / m^{1-β/q})^{qm}`.
    pub per_size: Vec<(usize, f64)>,
    /// Markov sum `Σ c^m m^{βm} · ball_volume(q, m, L)` over the size range.
    pub markov_sum: f64,
}

/// First-moment lower bound on `M(F)` for families with controlled growth.
///
/// `c0` is the smallest constant with
/// `c^m m^{βm} Γ(1+q)^m / Γ(1+qm) L^{qm} <= (c0 L / m^{1-β/q})^{qm}` on the
/// size range. `c1` is the largest value with
/// `c1^{q ell0} / (1 - c1^q) <= e^{-t ell0}`, found by bisection. Then
/// `L = (c1/c0) min(ell0^{1-β/q}, ell1^{1-β/q})`.
pub fn first_moment_lb(inputs: &FirstMomentInputs) -> Result<FirstMomentBound> {
    let FirstMomentInputs { q, ell0, ell1, beta, c, t } = *inputs;
    positive("q", q)?;
    positive("beta", beta)?;
    positive("c", c)?;
    positive("t", t)?;
    if ell0 == 0 || ell0 > ell1 {
        return Err(invalid("ell0", format!("need 1 <= ell0 <= ell1, got {ell0}, {ell1}")));
    }
    // ln c0(m) = (ln c + ln Γ(1+q))/q + ln m - ln Γ(1+qm)/(qm)
    let ln_c0 = (ell0..=ell1)
        .map(|m| {
            let mf = m as f64;
            (c.ln() + ln_gamma(1.0 + q)) / q + mf.ln() - ln_gamma(1.0 + q * mf) / (q * mf)
        })
        .fold(f64::NEG_INFINITY, f64::max);
    let c0 = ln_c0.exp();

    let target = -t * ell0 as f64;
    let ln_tail = |c1: f64| q * ell0 as f64 * c1.ln() - (-(q * c1.ln()).exp_m1()).ln();
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if ln_tail(mid) <= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let c1 = lo;

    let exponent = 1.0 - beta / q;
    let scale = (ell0 as f64).powf(exponent).min((ell1 as f64).powf(exponent));
    let l_lower = c1 / c0 * scale;

    let mut per_size = Vec::with_capacity(ell1 - ell0 + 1);
    let mut markov_sum = 0.0;
    for m in ell0..=ell1 {
        let mf = m as f64;
        let ln_rm = q * mf * (ln_c0 + l_lower.ln() - exponent * mf.ln());
        per_size.push((m, ln_rm.exp()));
        markov_sum += (mf * c.ln() + beta * mf * mf.ln() + ln_ball_volume(q, m, l_lower)).exp();
    }
    Ok(FirstMomentBound {
        l_lower,
        failure_bound: target.exp(),
        c0,
        c1,
        small_sets_dominate: beta < q,
        per_size,
        markov_sum,
    })
}
