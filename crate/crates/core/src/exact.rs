//! Exhaustive minimum guard sets for small instances.
//!
//! The optimum size is found by iterative deepening over a branch-and-bound
//! cover search. The returned set is the lexicographically smallest optimum,
//! built one guard at a time with the same search as a feasibility test.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::terrain::{Terrain, VertexClass};
use crate::visibility::sees;

pub const DEFAULT_CAP: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactConfig {
    /// Largest candidate count accepted.
    pub cap: usize,
}

impl Default for ExactConfig {
    fn default() -> Self {
        ExactConfig { cap: DEFAULT_CAP }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("{candidates} candidates exceed the exact solver cap of {cap}")]
    CapExceeded { candidates: usize, cap: usize },
    #[error("witness {witness} is not seen by any candidate")]
    Infeasible { witness: usize },
    #[error("vertex index {index} out of range for terrain of {len} vertices")]
    IndexOutOfRange { index: usize, len: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Bits(Vec<u64>);

impl Bits {
    fn empty(len: usize) -> Self {
        Bits(vec![0; len.div_ceil(64)])
    }

    fn full(len: usize) -> Self {
        let mut b = Self::empty(len);
        for i in 0..len {
            b.set(i);
        }
        b
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn minus(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & !b).collect())
    }

    fn and_count(&self, other: &Bits) -> usize {
        self.0.iter().zip(&other.0).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }

    fn is_subset(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }

    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(wi, &w)| {
            (0..64).filter(move |b| w >> b & 1 == 1).map(move |b| wi * 64 + b)
        })
    }
}

/// Candidates, witnesses, and which witnesses each candidate sees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverInstance {
    pub candidates: Vec<usize>,
    pub witnesses: Vec<usize>,
    coverage: Vec<Bits>,
}

impl CoverInstance {
    pub fn new(t: &Terrain, candidates: &[usize], witnesses: &[usize]) -> Result<Self, ExactError> {
        for &i in candidates.iter().chain(witnesses) {
            if i >= t.len() {
                return Err(ExactError::IndexOutOfRange { index: i, len: t.len() });
            }
        }
        let candidates: Vec<usize> = candidates.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        let witnesses: Vec<usize> = witnesses.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        let coverage = candidates
            .iter()
            .map(|&c| {
                let mut b = Bits::empty(witnesses.len());
                for (j, &w) in witnesses.iter().enumerate() {
                    if sees(t, c, w) {
                        b.set(j);
                    }
                }
                b
            })
            .collect();
        Ok(CoverInstance { candidates, witnesses, coverage })
    }

    /// Whether candidate `c` (position in `candidates`) sees witness `w` (position in `witnesses`).
    pub fn covers(&self, c: usize, w: usize) -> bool {
        self.coverage[c].get(w)
    }

    fn check_feasible(&self) -> Result<(), ExactError> {
        let mut all = Bits::empty(self.witnesses.len());
        for b in &self.coverage {
            for i in b.ones() {
                all.set(i);
            }
        }
        match (0..self.witnesses.len()).find(|&j| !all.get(j)) {
            Some(j) => Err(ExactError::Infeasible { witness: self.witnesses[j] }),
            None => Ok(()),
        }
    }

    /// Candidate positions in `allowed` whose coverage is not contained in another's.
    fn undominated(&self, allowed: &[usize]) -> Vec<usize> {
        allowed
            .iter()
            .copied()
            .filter(|&c| {
                !allowed.iter().any(|&d| {
                    d != c
                        && self.coverage[c].is_subset(&self.coverage[d])
                        && (self.coverage[c] != self.coverage[d] || d < c)
                })
            })
            .collect()
    }

    /// Whether at most `k` of `allowed` cover `uncovered`.
    fn can_cover(&self, uncovered: &Bits, k: usize, allowed: &[usize]) -> bool {
        if uncovered.is_empty() {
            return true;
        }
        if k == 0 {
            return false;
        }
        let best = allowed.iter().map(|&c| self.coverage[c].and_count(uncovered)).max().unwrap_or(0);
        if best * k < uncovered.count() {
            return false;
        }
        // Branch on the witness with the fewest covering candidates.
        let mut pick: Option<(usize, Vec<usize>)> = None;
        for w in uncovered.ones() {
            let cs: Vec<usize> = allowed.iter().copied().filter(|&c| self.coverage[c].get(w)).collect();
            if pick.as_ref().is_none_or(|(_, p)| cs.len() < p.len()) {
                let done = cs.len() <= 1;
                pick = Some((w, cs));
                if done {
                    break;
                }
            }
        }
        let (_, cs) = pick.expect("uncovered is non-empty");
        cs.into_iter().any(|c| self.can_cover(&uncovered.minus(&self.coverage[c]), k - 1, allowed))
    }

    fn min_size(&self, uncovered: &Bits, allowed: &[usize]) -> Option<usize> {
        let pruned = self.undominated(allowed);
        (0..=pruned.len()).find(|&k| self.can_cover(uncovered, k, &pruned))
    }

    /// Lexicographically smallest minimum cover, as candidate vertex indices.
    pub fn solve(&self) -> Result<BTreeSet<usize>, ExactError> {
        self.check_feasible()?;
        let all: Vec<usize> = (0..self.candidates.len()).collect();
        let mut uncovered = Bits::full(self.witnesses.len());
        let opt = self.min_size(&uncovered, &all).expect("feasible instances have a cover");
        let mut chosen = BTreeSet::new();
        let mut next = 0;
        for remaining in (0..opt).rev() {
            let c = (next..self.candidates.len())
                .find(|&c| {
                    let rest = uncovered.minus(&self.coverage[c]);
                    let later: Vec<usize> = self.undominated(&((c + 1)..self.candidates.len()).collect::<Vec<_>>());
                    self.can_cover(&rest, remaining, &later)
                })
                .expect("an optimum extends the current prefix");
            uncovered = uncovered.minus(&self.coverage[c]);
            chosen.insert(self.candidates[c]);
            next = c + 1;
        }
        debug_assert!(uncovered.is_empty());
        Ok(chosen)
    }

    pub fn optimum_size(&self) -> Result<usize, ExactError> {
        self.check_feasible()?;
        let all: Vec<usize> = (0..self.candidates.len()).collect();
        Ok(self.min_size(&Bits::full(self.witnesses.len()), &all).expect("feasible"))
    }
}

pub fn minimum_guard_set(t: &Terrain, candidates: &[usize], witnesses: &[usize]) -> Result<BTreeSet<usize>, ExactError> {
    minimum_guard_set_with(t, candidates, witnesses, &ExactConfig::default())
}

pub fn minimum_guard_set_with(
    t: &Terrain,
    candidates: &[usize],
    witnesses: &[usize],
    config: &ExactConfig,
) -> Result<BTreeSet<usize>, ExactError> {
    let inst = capped_instance(t, candidates, witnesses, config)?;
    inst.solve()
}

/// Size of a minimum guard set, without reconstructing it.
pub fn optimum_size_with(
    t: &Terrain,
    candidates: &[usize],
    witnesses: &[usize],
    config: &ExactConfig,
) -> Result<usize, ExactError> {
    capped_instance(t, candidates, witnesses, config)?.optimum_size()
}

fn capped_instance(
    t: &Terrain,
    candidates: &[usize],
    witnesses: &[usize],
    config: &ExactConfig,
) -> Result<CoverInstance, ExactError> {
    let distinct = candidates.iter().collect::<BTreeSet<_>>().len();
    if distinct > config.cap {
        return Err(ExactError::CapExceeded { candidates: distinct, cap: config.cap });
    }
    CoverInstance::new(t, candidates, witnesses)
}

/// Whether every witness is seen by some guard.
pub fn verify_guarding(t: &Terrain, guards: &BTreeSet<usize>, witnesses: &[usize]) -> bool {
    witnesses.iter().all(|&w| guards.iter().any(|&g| sees(t, g, w)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionReport {
    /// A minimum cover of the convex vertices by reflex vertices.
    pub reflex_cover: BTreeSet<usize>,
    /// That cover also sees every vertex of the terrain.
    pub covers_all_vertices: bool,
    /// Optimum for the convex vertices over all vertices as candidates.
    pub optimum_all_candidates: usize,
    pub optimum_reflex_candidates: usize,
}

impl ReductionReport {
    pub fn passed(&self) -> bool {
        self.covers_all_vertices && self.optimum_all_candidates == self.optimum_reflex_candidates
    }
}

/// Check on `t` that reflex guards for the convex vertices guard the whole
/// terrain, and that allowing convex guards does not shrink the optimum.
pub fn reduction_check(t: &Terrain, config: &ExactConfig) -> Result<ReductionReport, ExactError> {
    let reflex = t.reflex_indices();
    let convex = t.convex_indices();
    let all: Vec<usize> = (0..t.len()).collect();
    let reflex_cover = minimum_guard_set_with(t, &reflex, &convex, config)?;
    let covers_all_vertices = verify_guarding(t, &reflex_cover, &all);
    let optimum_all_candidates = optimum_size_with(t, &all, &convex, config)?;
    Ok(ReductionReport {
        optimum_reflex_candidates: reflex_cover.len(),
        reflex_cover,
        covers_all_vertices,
        optimum_all_candidates,
    })
}

/// Exact optima for the left and right convex witnesses over reflex candidates.
pub fn one_sided_optima(t: &Terrain, config: &ExactConfig) -> Result<(usize, usize), ExactError> {
    let reflex = t.reflex_indices();
    let left = optimum_size_with(t, &reflex, &t.indices_of(VertexClass::LeftConvex), config)?;
    let right = optimum_size_with(t, &reflex, &t.indices_of(VertexClass::RightConvex), config)?;
    Ok((left, right))
}
