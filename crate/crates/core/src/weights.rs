//! Weight laws satisfying the A(q) coupling assumption, and explicit couplings.
//!
//! A weight `X` with exponent `q` is a `1/q`-th power of a base variable: either
//! `U(0,1]` ([`Base::UniformPower`]) or `Exp(1)` ([`Base::ExponentialPower`]).
//! Everything below works in "base space", where `X^q` follows the base law.
//!
//! The red-green split couples one weight `X` to two independent copies `Y`,
//! `Y'` so that surely `X <= min(Y / (1-s)^(1/q), Y' / s^(1/q))`. The
//! construction maps `W = min(Y^q / (1-s), Y'^q / s)` back to the base law by
//! its exact distribution function. `F_W(w) <= w` on the whole support, so the
//! inequality holds for every draw, not just in distribution.

use rand::distr::{Distribution, Open01};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Base law of `X^q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Base {
    /// `X^q ~ U(0,1)`; samples lie in `(0, 1]`.
    UniformPower,
    /// `X^q ~ Exp(1)`; samples lie in `(0, inf)`.
    ExponentialPower,
}

impl Base {
    pub fn name(self) -> &'static str {
        match self {
            Base::UniformPower => "uniform",
            Base::ExponentialPower => "exponential",
        }
    }
}

impl std::str::FromStr for Base {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "uniform" => Ok(Base::UniformPower),
            "exponential" => Ok(Base::ExponentialPower),
            other => Err(format!("unknown base `{other}` (expected uniform|exponential)")),
        }
    }
}

/// The law of the i.i.d. weights.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightSpec {
    q: f64,
    base: Base,
}

impl WeightSpec {
    pub fn new(q: f64, base: Base) -> Result<Self> {
        if !(q > 0.0 && q.is_finite()) {
            return Err(invalid("q", format!("must be positive and finite, got {q}")));
        }
        Ok(Self { q, base })
    }

    pub fn uniform(q: f64) -> Result<Self> {
        Self::new(q, Base::UniformPower)
    }

    pub fn exponential(q: f64) -> Result<Self> {
        Self::new(q, Base::ExponentialPower)
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn base(&self) -> Base {
        self.base
    }

    /// Maps a base-space value `t = x^q` to the weight `x`.
    #[inline]
    pub fn from_base(&self, t: f64) -> f64 {
        if self.q == 1.0 {
            t
        } else {
            t.powf(1.0 / self.q)
        }
    }

    /// Maps a weight `x` to base space, `x^q`.
    #[inline]
    pub fn to_base(&self, x: f64) -> f64 {
        if self.q == 1.0 {
            x
        } else {
            x.powf(self.q)
        }
    }

    /// One draw of the base variable (`U(0,1]` or `Exp(1)`).
    #[inline]
    pub fn sample_base<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = Open01.sample(rng);
        match self.base {
            // 1 - u lies in (0, 1).
            Base::UniformPower => 1.0 - u,
            Base::ExponentialPower => -u.ln(),
        }
    }

    /// One weight draw.
    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.from_base(self.sample_base(rng))
    }

    /// `len` i.i.d. weight draws.
    pub fn sample_vec<R: Rng + ?Sized>(&self, len: usize, rng: &mut R) -> Vec<f64> {
        (0..len).map(|_| self.sample(rng)).collect()
    }

    /// Distribution function of the weight.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        if !(x >= 0.0) {
            return Err(invalid("x", format!("cdf needs x >= 0, got {x}")));
        }
        let t = self.to_base(x);
        Ok(match self.base {
            Base::UniformPower => t.min(1.0),
            Base::ExponentialPower => -(-t).exp_m1(),
        })
    }

    /// Inverse of [`WeightSpec::cdf`]. `quantile(1)` is `1` for the uniform base
    /// and `+inf` for the exponential base.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&p) {
            return Err(invalid("p", format!("quantile needs p in [0, 1], got {p}")));
        }
        let t = match self.base {
            Base::UniformPower => p,
            Base::ExponentialPower => -(-p).ln_1p(),
        };
        Ok(self.from_base(t))
    }
}

/// One weight coupled to a green copy `y` and an independent red copy `y_prime`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoupledTriple {
    pub x: f64,
    pub y: f64,
    pub y_prime: f64,
    pub s: f64,
}

impl CoupledTriple {
    /// `min(y / (1-s)^(1/q), y' / s^(1/q))`, the surely-valid upper bound on `x`.
    pub fn bound(&self, q: f64) -> f64 {
        split_bound(q, self.s, self.y, self.y_prime)
    }
}

/// One weight coupled to `k` independent copies with `x <= k^(1/q) min(copies)`.
#[derive(Debug, Clone, PartialEq)]
pub struct IteratedSplit {
    pub x: f64,
    pub copies: Vec<f64>,
}

impl IteratedSplit {
    pub fn k(&self) -> usize {
        self.copies.len()
    }
}

fn check_split_fraction(s: f64) -> Result<()> {
    if s > 0.0 && s < 1.0 {
        Ok(())
    } else {
        Err(invalid("s", format!("split fraction must lie in (0, 1), got {s}")))
    }
}

#[inline]
fn split_bound(q: f64, s: f64, y: f64, y_prime: f64) -> f64 {
    let green = y / (1.0 - s).powf(1.0 / q);
    let red = y_prime / s.powf(1.0 / q);
    green.min(red)
}

/// Exact distribution function of `W = min(A / (1-s), B / s)` for independent
/// `A, B ~ U(0,1)`: `1 - (1 - (1-s) w)+ (1 - s w)+`.
#[inline]
pub fn split_min_cdf_uniform(s: f64, w: f64) -> f64 {
    if w <= 0.0 {
        return 0.0;
    }
    // Both factors are positive below this point; past it one of them is 0.
    if w >= 1.0 / s.max(1.0 - s) {
        return 1.0;
    }
    w - s * (1.0 - s) * w * w
}

/// Builds `x` from a green copy `y` and red copy `y_prime`.
///
/// Deterministic and nondecreasing in both arguments. The final `min` with the
/// analytic bound only absorbs rounding in the `powf` round trip; in exact
/// arithmetic the transformed value is already below it.
pub fn couple(spec: &WeightSpec, s: f64, y: f64, y_prime: f64) -> f64 {
    let q = spec.q();
    let bound = split_bound(q, s, y, y_prime);
    match spec.base() {
        // min of Exp(1-s) and Exp(s) is Exp(1): the bound itself has the right law.
        Base::ExponentialPower => bound,
        Base::UniformPower => {
            let w = (spec.to_base(y) / (1.0 - s)).min(spec.to_base(y_prime) / s);
            spec.from_base(split_min_cdf_uniform(s, w)).min(bound)
        }
    }
}

/// Draws an independent `(y, y')` pair and couples `x` to it.
pub fn red_green_split<R: Rng + ?Sized>(
    spec: &WeightSpec,
    s: f64,
    rng: &mut R,
) -> Result<CoupledTriple> {
    check_split_fraction(s)?;
    let y = spec.sample(rng);
    let y_prime = spec.sample(rng);
    Ok(CoupledTriple {
        x: couple(spec, s, y, y_prime),
        y,
        y_prime,
        s,
    })
}

/// Couples `x` to `k` independent copies with equal shares `1/k`.
///
/// Built from the innermost pair outwards: with `m` copies left, copy `j`
/// takes green share `1/m` and the remaining `m - 1` copies (already merged
/// into one variable of the right law) take the red share.
pub fn iterated_split<R: Rng + ?Sized>(
    spec: &WeightSpec,
    k: usize,
    rng: &mut R,
) -> Result<IteratedSplit> {
    if k == 0 {
        return Err(invalid("k", "need at least one copy"));
    }
    let copies = spec.sample_vec(k, rng);
    let mut merged = copies[k - 1];
    for j in (0..k - 1).rev() {
        let m = (k - j) as f64;
        merged = couple(spec, (m - 1.0) / m, copies[j], merged);
    }
    // Rounding guard, as in `couple`: the nested bounds multiply to k^(1/q)
    // only up to a few ulps.
    let cap = (k as f64).powf(1.0 / spec.q()) * copies.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(IteratedSplit {
        x: merged.min(cap),
        copies,
    })
}
