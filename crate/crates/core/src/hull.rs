//! Upper hull maintained right to left. The hull neighbour of a left convex
//! vertex is its right horizon: the rightmost reflex vertex that sees it.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::geometry::{orient_grid, Turn};
use crate::terrain::{Terrain, VertexClass};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HullError {
    #[error("vertex {index} pushed after vertex {top}; vertices must arrive right to left")]
    OutOfOrder { index: usize, top: usize },
}

#[derive(Debug, Clone, Default)]
pub struct UpperHullStack {
    stack: Vec<usize>,
    last: Option<usize>,
    pops: usize,
}

impl UpperHullStack {
    pub fn new() -> Self {
        Self::default()
    }

    /// Hull vertices from the rightmost (bottom) to the leftmost (top).
    pub fn as_slice(&self) -> &[usize] {
        &self.stack
    }

    pub fn pops(&self) -> usize {
        self.pops
    }

    /// Add vertex `v`, which must lie left of (or on the same wall as, with a
    /// smaller index than) everything pushed so far. For a left convex `v` the
    /// right horizon is returned.
    pub fn push_vertex(&mut self, t: &Terrain, v: usize) -> Result<Option<usize>, HullError> {
        if let Some(last) = self.last {
            if v >= last {
                return Err(HullError::OutOfOrder { index: v, top: last });
            }
        }
        self.last = Some(v);
        let p = t.vertex(v);
        if let Some(&top) = self.stack.last() {
            let q = t.vertex(top);
            if q.x == p.x && q.y >= p.y {
                // Lower end of a wall whose top is already on the hull.
                return Ok(self.horizon_for(t, v));
            }
        }
        while let Some(&top) = self.stack.last() {
            let q = t.vertex(top);
            let pop = if q.x == p.x {
                true
            } else if self.stack.len() >= 2 {
                let second = t.vertex(self.stack[self.stack.len() - 2]);
                // top on or below the chord from v to second
                orient_grid(p, q, second) != Turn::Right
            } else {
                false
            };
            if !pop {
                break;
            }
            self.stack.pop();
            self.pops += 1;
        }
        let horizon = self.horizon_for(t, v);
        self.stack.push(v);
        Ok(horizon)
    }

    fn horizon_for(&self, t: &Terrain, v: usize) -> Option<usize> {
        if t.class(v) != VertexClass::LeftConvex {
            return None;
        }
        match self.stack.last() {
            Some(&top) => Some(top),
            // Rightmost vertex: its own wall top.
            None => t.wall_partner(v),
        }
    }
}

/// Right horizon of every left convex vertex, from one right-to-left pass.
pub fn right_horizons(t: &Terrain) -> BTreeMap<usize, usize> {
    let mut hull = UpperHullStack::new();
    let mut out = BTreeMap::new();
    for v in (0..t.len()).rev() {
        if let Some(r) = hull.push_vertex(t, v).expect("indices arrive in decreasing order") {
            out.insert(v, r);
        }
    }
    out
}
