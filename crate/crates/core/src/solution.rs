use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::sweep::SweepCounters;

/// Which stage of the pipeline put a guard into a solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Provenance {
    LeftSweep,
    RightSweep,
    Retraction,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::LeftSweep => "left",
            Provenance::RightSweep => "right",
            Provenance::Retraction => "retraction",
        }
    }

    pub fn parse(s: &str) -> Option<Provenance> {
        match s {
            "left" => Some(Provenance::LeftSweep),
            "right" => Some(Provenance::RightSweep),
            "retraction" => Some(Provenance::Retraction),
            _ => None,
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GuardEntry {
    /// Witnesses assigned to this guard, in insertion order.
    pub witnesses: Vec<usize>,
    pub provenance: Vec<Provenance>,
}

/// A guard set together with the witness list each guard is responsible for.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GuardSolution {
    pub guards: BTreeMap<usize, GuardEntry>,
    pub left_counters: Option<SweepCounters>,
    pub right_counters: Option<SweepCounters>,
}

impl GuardSolution {
    pub fn len(&self) -> usize {
        self.guards.len()
    }

    pub fn is_empty(&self) -> bool {
        self.guards.is_empty()
    }

    pub fn guard_set(&self) -> BTreeSet<usize> {
        self.guards.keys().copied().collect()
    }

    pub fn witnesses(&self, guard: usize) -> Option<&[usize]> {
        self.guards.get(&guard).map(|e| e.witnesses.as_slice())
    }

    /// Add `witnesses` under `guard`, merging with an existing entry.
    pub fn add(&mut self, guard: usize, witnesses: impl IntoIterator<Item = usize>, provenance: Provenance) {
        let entry = self.guards.entry(guard).or_default();
        entry.witnesses.extend(witnesses);
        if !entry.provenance.contains(&provenance) {
            entry.provenance.push(provenance);
        }
    }
}
