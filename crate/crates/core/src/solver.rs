//! The full pipeline: a guard set for every vertex of a terrain, at most twice
//! the optimum.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::solution::{GuardSolution, Provenance};
use crate::sweep::{run_left_sweep, run_left_sweep_with, SweepError, TraceWriter};
use crate::terrain::{extend, mirror, replace_added_guards, Extension, Terrain, TerrainError};
use crate::visibility::sees;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error(transparent)]
    Sweep(#[from] SweepError),
    #[error(transparent)]
    Terrain(#[from] TerrainError),
}

/// Which convex witnesses to guard.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Side {
    Left,
    Right,
    #[default]
    Both,
}

impl FromStr for Side {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "left" => Ok(Side::Left),
            "right" => Ok(Side::Right),
            "both" => Ok(Side::Both),
            other => Err(format!("unknown side `{other}`, expected left, right or both")),
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
            Side::Both => "both",
        })
    }
}

/// Guards for every vertex of `t`, at most twice the optimum.
pub fn approx_guard_set(t: &Terrain) -> Result<GuardSolution, SolverError> {
    solve_side(t, Side::Both)
}

/// Run the left sweep, the mirrored sweep, or both, on `t` or on its extension
/// when an end edge is horizontal. Indices in the result refer to `t`.
pub fn solve_side(t: &Terrain, side: Side) -> Result<GuardSolution, SolverError> {
    solve_inner(t, side, None)
}

/// [`solve_side`] that also returns the trace of each sweep. Trace indices
/// refer to the swept terrain: the extension for flat-ended input, and the
/// mirrored terrain for the right sweep.
pub fn solve_traced(t: &Terrain, side: Side) -> Result<(GuardSolution, String), SolverError> {
    let mut trace = String::new();
    let sol = solve_inner(t, side, Some(&mut trace))?;
    Ok((sol, trace))
}

fn sweep(t: &Terrain, trace: &mut Option<&mut String>, label: &str) -> Result<GuardSolution, SweepError> {
    match trace {
        None => run_left_sweep(t),
        Some(out) => {
            let mut w = TraceWriter::new();
            let sol = run_left_sweep_with(t, &mut w)?;
            out.push_str(&format!("# sweep {label}\n"));
            out.push_str(w.as_str());
            Ok(sol)
        }
    }
}

fn solve_inner(t: &Terrain, side: Side, mut trace: Option<&mut String>) -> Result<GuardSolution, SolverError> {
    let ext = extend(t);
    let work = ext.as_ref().map_or(t, |e| &e.terrain);
    if let (Some(out), Some(e)) = (trace.as_deref_mut(), ext.as_ref()) {
        out.push_str(&format!("# extended terrain, scale {}, {} vertices\n", e.scale, work.len()));
    }
    let mut sol = GuardSolution::default();
    if side != Side::Right {
        let left = sweep(work, &mut trace, "left")?;
        sol.left_counters = left.left_counters;
        for (g, e) in left.guards {
            sol.add(g, e.witnesses, Provenance::LeftSweep);
        }
    }
    if side != Side::Left {
        let (m, map) = mirror(work);
        let right = sweep(&m, &mut trace, "right mirrored")?;
        sol.right_counters = right.left_counters;
        for (g, e) in right.guards {
            sol.add(map.map(g), e.witnesses.into_iter().map(|w| map.map(w)), Provenance::RightSweep);
        }
    }
    match ext {
        None => Ok(sol),
        Some(ext) => retract_solution(&ext, sol, side),
    }
}

fn retract_solution(ext: &Extension, sol: GuardSolution, side: Side) -> Result<GuardSolution, SolverError> {
    let te = &ext.terrain;
    let guards = sol.guard_set();
    let witnesses: Vec<usize> = match side {
        Side::Both => (0..te.len()).collect(),
        _ => sol.guards.values().flat_map(|e| e.witnesses.iter().copied()).collect(),
    };
    let kept = replace_added_guards(ext, &guards, &witnesses)?;
    let fresh: BTreeSet<usize> = kept.difference(&guards).copied().collect();

    let mut lists: BTreeMap<usize, (Vec<usize>, Vec<Provenance>)> = BTreeMap::new();
    let mut orphans = Vec::new();
    for (g, e) in sol.guards {
        if kept.contains(&g) {
            lists.insert(g, (e.witnesses, e.provenance));
        } else {
            orphans.extend(e.witnesses);
        }
    }
    for &g in &fresh {
        lists.insert(g, (Vec::new(), vec![Provenance::Retraction]));
    }
    for w in orphans {
        let owner = fresh
            .iter()
            .chain(kept.iter())
            .copied()
            .find(|&g| sees(te, g, w))
            .ok_or(TerrainError::NoReplacement { index: w })?;
        let entry = lists.get_mut(&owner).expect("owner is kept");
        entry.0.push(w);
        if !entry.1.contains(&Provenance::Retraction) {
            entry.1.push(Provenance::Retraction);
        }
    }

    let mut out = GuardSolution { left_counters: sol.left_counters, right_counters: sol.right_counters, ..Default::default() };
    for (g, (ws, provs)) in lists {
        let g = ext.to_original(g).expect("kept guards are original vertices");
        let ws: Vec<usize> = ws.into_iter().filter_map(|w| ext.to_original(w)).collect();
        let entry = out.guards.entry(g).or_default();
        entry.witnesses.extend(ws);
        for p in provs {
            if !entry.provenance.contains(&p) {
                entry.provenance.push(p);
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CoverageReport {
    pub uncovered: Vec<usize>,
}

impl CoverageReport {
    pub fn is_covered(&self) -> bool {
        self.uncovered.is_empty()
    }
}

/// Check with the visibility oracle that the guards of `sol` see every vertex.
pub fn verify_solution(t: &Terrain, sol: &GuardSolution) -> CoverageReport {
    verify_guard_set(t, &sol.guard_set())
}

pub fn verify_guard_set(t: &Terrain, guards: &BTreeSet<usize>) -> CoverageReport {
    let uncovered = (0..t.len())
        .filter(|&w| {
            if guards.contains(&w) {
                return false;
            }
            !guards.range(w..).chain(guards.range(..w).rev()).any(|&g| sees(t, g, w))
        })
        .collect();
    CoverageReport { uncovered }
}
