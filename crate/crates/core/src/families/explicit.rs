//! Families given as an explicit list of members over a small ground set.
//! Members are stored as bit masks; the ground set is capped at 24 elements.

use super::{SolveResult, WeightAssignment};
use crate::error::{invalid, Error, Result};

pub const MAX_EXPLICIT_GROUND: usize = 24;

#[derive(Debug, Clone)]
pub struct ExplicitFamily {
    size: usize,
    /// Minimal members, ascending by their sorted element sequence.
    members: Vec<u32>,
    ell: usize,
}

pub(crate) fn mask_of(set: &[usize]) -> u32 {
    set.iter().fold(0u32, |m, &e| m | (1 << e))
}

pub(crate) fn elements_of(mask: u32) -> Vec<usize> {
    (0..32).filter(|&e| mask & (1 << e) != 0).collect()
}

impl ExplicitFamily {
    pub(crate) fn new(size: usize, members: &[Vec<usize>]) -> Result<Self> {
        if size == 0 {
            return Err(invalid("N", "ground set must be non-empty"));
        }
        if size > MAX_EXPLICIT_GROUND {
            return Err(invalid(
                "N",
                format!("explicit families are capped at {MAX_EXPLICIT_GROUND} elements, got {size}"),
            ));
        }
        if members.is_empty() {
            return Err(invalid("members", "family must have at least one member"));
        }
        let mut masks = Vec::with_capacity(members.len());
        for m in members {
            if m.is_empty() {
                return Err(invalid("members", "members must be non-empty sets"));
            }
            if let Some(&e) = m.iter().find(|&&e| e >= size) {
                return Err(Error::ElementOutOfRange { index: e, size });
            }
            masks.push(mask_of(m));
        }
        masks.sort_unstable();
        masks.dedup();
        // Keep only minimal sets: drop anything that strictly contains another member.
        let minimal: Vec<u32> = masks
            .iter()
            .copied()
            .filter(|&m| !masks.iter().any(|&o| o != m && o & m == o))
            .collect();
        let mut members: Vec<(Vec<usize>, u32)> =
            minimal.into_iter().map(|m| (elements_of(m), m)).collect();
        members.sort();
        let ell = members.iter().map(|(v, _)| v.len()).max().unwrap_or(0);
        Ok(Self {
            size,
            members: members.into_iter().map(|(_, m)| m).collect(),
            ell,
        })
    }

    pub fn ground_size(&self) -> usize {
        self.size
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn members(&self) -> Vec<Vec<usize>> {
        self.members.iter().map(|&m| elements_of(m)).collect()
    }

    pub(crate) fn member_masks(&self) -> &[u32] {
        &self.members
    }

    pub(crate) fn mask_weight(&self, w: &WeightAssignment, mask: u32) -> f64 {
        let v = w.values();
        (0..self.size).filter(|&e| mask & (1 << e) != 0).map(|e| v[e]).sum()
    }

    pub fn min_weight(&self, w: &WeightAssignment) -> SolveResult {
        let mut best = (f64::INFINITY, 0u32);
        for &m in &self.members {
            let value = self.mask_weight(w, m);
            if value < best.0 {
                best = (value, m);
            }
        }
        SolveResult {
            value: best.0,
            witness: elements_of(best.1),
        }
    }

    pub fn rho_mask(&self, g: u32) -> usize {
        self.members
            .iter()
            .map(|&m| (m & !g).count_ones() as usize)
            .min()
            .expect("family is non-empty")
    }

    pub fn rho(&self, g: &[usize]) -> usize {
        self.rho_mask(mask_of(g))
    }
}
