//! Minimisation families `F ⊆ 2^S` with exact solvers.
//!
//! Three families are supported: spanning trees of `K_n`, perfect matchings of
//! `K_{n,n}`, and explicit member lists over a ground set of at most 24
//! elements. For each, [`FamilyInstance`] exposes the minimum member weight
//! `M(F)`, the maximum member size `ell(F)`, and `rho(G)`, the number of
//! elements that must be added to `G` before it contains a member.
//!
//! Element sets are plain `Vec<usize>` of ground-set indices, ascending.

mod dsu;
mod explicit;
mod matching;
mod tree;

pub use dsu::DisjointSets;
pub use explicit::{ExplicitFamily, MAX_EXPLICIT_GROUND};
pub use matching::{MatchingGrower, Matchings};
pub use tree::SpanningTrees;

pub(crate) use explicit::{elements_of, mask_of};
pub(crate) use tree::key_cmp;

use rand::Rng;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::weights::WeightSpec;

/// Non-negative weights indexed by the ground set.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightAssignment(Vec<f64>);

impl WeightAssignment {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| !(**v >= 0.0)) {
            return Err(invalid("weights", format!("weights must be non-negative, got {v}")));
        }
        Ok(Self(values))
    }

    /// `len` i.i.d. draws from `spec`.
    pub fn sample<R: Rng + ?Sized>(spec: &WeightSpec, len: usize, rng: &mut R) -> Self {
        Self(spec.sample_vec(len, rng))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `X_G`, the total weight of `set`.
    pub fn subset_sum(&self, set: &[usize]) -> f64 {
        set.iter().map(|&e| self.0[e]).sum()
    }

    /// Copy with `set` priced at zero.
    pub fn zeroed_on(&self, set: &[usize]) -> Self {
        let mut v = self.0.clone();
        for &e in set {
            v[e] = 0.0;
        }
        Self(v)
    }

    pub fn with_value(&self, index: usize, value: f64) -> Result<Self> {
        let mut v = self.0.clone();
        v[index] = value;
        Self::new(v)
    }
}

/// A minimum value together with a set attaining it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveResult {
    pub value: f64,
    pub witness: Vec<usize>,
}

impl SolveResult {
    /// Sums `witness` in the order given, then sorts it.
    pub(crate) fn from_witness(w: &WeightAssignment, mut witness: Vec<usize>) -> Self {
        let value = w.subset_sum(&witness);
        witness.sort_unstable();
        Self { value, witness }
    }

    pub fn empty() -> Self {
        Self {
            value: 0.0,
            witness: Vec::new(),
        }
    }
}

/// The ground set `S = {0, .., N-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroundSet {
    pub size: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum FamilyKind {
    SpanningTree,
    Matching,
    Explicit,
}

impl FamilyKind {
    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::SpanningTree => "spanning-tree",
            FamilyKind::Matching => "matching",
            FamilyKind::Explicit => "explicit",
        }
    }
}

#[derive(Debug, Clone)]
pub enum FamilyInstance {
    SpanningTree(SpanningTrees),
    Matching(Matchings),
    Explicit(ExplicitFamily),
}

impl FamilyInstance {
    /// Spanning trees of `K_n`: `N = n(n-1)/2`, `ell = n - 1`.
    pub fn spanning_tree(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(invalid("n", format!("spanning trees need n >= 2, got {n}")));
        }
        if n > 1 << 15 {
            return Err(invalid("n", format!("n = {n} is too large")));
        }
        Ok(Self::SpanningTree(SpanningTrees::new(n)))
    }

    /// Perfect matchings of `K_{n,n}`: `N = n^2`, `ell = n`.
    pub fn matching(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(invalid("n", "matchings need n >= 1"));
        }
        Ok(Self::Matching(Matchings::new(n)))
    }

    /// An explicit family over `{0, .., size-1}`. Non-minimal members are dropped.
    pub fn explicit(size: usize, members: &[Vec<usize>]) -> Result<Self> {
        ExplicitFamily::new(size, members).map(Self::Explicit)
    }

    pub fn kind(&self) -> FamilyKind {
        match self {
            Self::SpanningTree(_) => FamilyKind::SpanningTree,
            Self::Matching(_) => FamilyKind::Matching,
            Self::Explicit(_) => FamilyKind::Explicit,
        }
    }

    pub fn ground(&self) -> GroundSet {
        let size = match self {
            Self::SpanningTree(t) => t.edge_count(),
            Self::Matching(m) => m.side() * m.side(),
            Self::Explicit(e) => e.ground_size(),
        };
        GroundSet { size }
    }

    pub fn ground_size(&self) -> usize {
        self.ground().size
    }

    /// `ell(F)`, the largest member size.
    pub fn ell(&self) -> usize {
        match self {
            Self::SpanningTree(t) => t.vertices() - 1,
            Self::Matching(m) => m.side(),
            Self::Explicit(e) => e.ell(),
        }
    }

    /// Size parameter `n` for graph families, `N` for explicit ones.
    pub fn size_param(&self) -> usize {
        match self {
            Self::SpanningTree(t) => t.vertices(),
            Self::Matching(m) => m.side(),
            Self::Explicit(e) => e.ground_size(),
        }
    }

    pub(crate) fn check_weights(&self, w: &WeightAssignment) -> Result<()> {
        let expected = self.ground_size();
        if w.len() != expected {
            return Err(Error::IndexMismatch {
                expected,
                got: w.len(),
            });
        }
        Ok(())
    }

    pub(crate) fn check_set(&self, g: &[usize]) -> Result<()> {
        let size = self.ground_size();
        match g.iter().find(|&&e| e >= size) {
            Some(&index) => Err(Error::ElementOutOfRange { index, size }),
            None => Ok(()),
        }
    }

    /// `M(F)` and a member attaining it.
    ///
    /// Ties are broken by the `(weight, element index)` order for trees, by
    /// scan order for matchings, and by the lexicographically first member for
    /// explicit families.
    pub fn min_weight(&self, w: &WeightAssignment) -> Result<SolveResult> {
        self.check_weights(w)?;
        Ok(match self {
            Self::SpanningTree(t) => t.min_weight(w),
            Self::Matching(m) => m.min_weight(w),
            Self::Explicit(e) => e.min_weight(w),
        })
    }

    /// Hamming distance from `g` to the upward closure of the family.
    pub fn rho(&self, g: &[usize]) -> Result<usize> {
        self.check_set(g)?;
        Ok(match self {
            Self::SpanningTree(t) => t.rho(g),
            Self::Matching(m) => m.rho(g),
            Self::Explicit(e) => e.rho(g),
        })
    }

    /// True when `g` contains a member.
    pub fn contains_member(&self, g: &[usize]) -> Result<bool> {
        self.rho(g).map(|r| r == 0)
    }
}

/// Normalises an element list: ascending, no duplicates.
pub fn normalize_set(mut set: Vec<usize>) -> Vec<usize> {
    set.sort_unstable();
    set.dedup();
    set
}
