//! Right-to-left sweep computing a minimum set of reflex vertices that sees
//! every left convex vertex of a terrain with vertical ends.
//!
//! The sweep keeps a stack of candidate guards (top = leftmost and lowest),
//! each with the shadow ray that bounds what it can still see beyond the sweep
//! line. Adjacent rays that cross ahead of the sweep line are queued as
//! intersection events in a handle-addressable max-heap keyed by `(x, y)`.
//! Each left convex vertex ends up in the witness list of exactly one guard.

mod trace;

use std::cmp::Ordering;
use std::collections::BTreeSet;

use thiserror::Error;

use crate::geometry::{orient, ray_intersection_grid, side_of_line_grid, GeometryError, GridPoint, Point, Rational, Side, Turn};
use crate::heap::{Handle, IndexedHeap};
use crate::hull::UpperHullStack;
use crate::solution::{GuardSolution, Provenance};
use crate::terrain::{height_range_grid, Terrain, VertexClass};
use crate::visibility;

pub use trace::{TraceWriter, TRACE_HEADER};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SweepError {
    #[error("the sweep needs a terrain whose first and last edges are vertical")]
    FlatEnds,
    #[error("internal consistency violated: {0}")]
    Inconsistent(String),
    #[error("guard {0} has an empty witness list")]
    EmptyList(usize),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Ray from a stack vertex through its current obstacle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ShadowRay {
    pub origin: usize,
    pub obstacle: usize,
    /// Set when the obstacle is the left convex witness that created the entry.
    pub dummy: bool,
}

pub type EntryId = usize;

#[derive(Debug, Clone)]
struct Entry {
    ray: ShadowRay,
    /// Neighbour towards the top (to the left).
    above: Option<EntryId>,
    /// Neighbour towards the bottom (to the right).
    below: Option<EntryId>,
    /// Queued crossing with `below`.
    below_event: Option<Handle>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct EventKey {
    x: Rational,
    y: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionEvent {
    pub point: Point,
    /// Entry nearer the top of the stack.
    pub upper: EntryId,
    pub lower: EntryId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Event {
    Vertex(usize),
    Intersection(IntersectionEvent),
}

/// One `ms_sees` evaluation, recorded for cross-checking against the oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VisibilityQuery {
    pub origin: usize,
    pub target: usize,
    pub result: bool,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SweepCounters {
    pub lc_events: usize,
    pub rc_events: usize,
    pub lr_events: usize,
    pub rr_events: usize,
    pub intersections_fired: usize,
    pub intersections_discarded: usize,
    pub ms_pushes: usize,
    pub ms_pops: usize,
    pub ms_deletes: usize,
    pub obstacle_updates: usize,
    pub heap_inserts: usize,
    pub heap_deletes: usize,
    pub heap_pops: usize,
    pub visibility_tests: usize,
    /// Crossings found at or right of the sweep line; never queued.
    pub late_intersections: usize,
    pub horizon_fallbacks: usize,
    pub hull_pops: usize,
    pub max_ms: usize,
    pub max_heap: usize,
}

impl SweepCounters {
    pub fn heap_ops(&self) -> usize {
        self.heap_inserts + self.heap_deletes + self.heap_pops
    }

    pub fn vertex_events(&self) -> usize {
        self.lc_events + self.rc_events + self.lr_events + self.rr_events
    }

    pub fn merged(&self, other: &SweepCounters) -> SweepCounters {
        SweepCounters {
            lc_events: self.lc_events + other.lc_events,
            rc_events: self.rc_events + other.rc_events,
            lr_events: self.lr_events + other.lr_events,
            rr_events: self.rr_events + other.rr_events,
            intersections_fired: self.intersections_fired + other.intersections_fired,
            intersections_discarded: self.intersections_discarded + other.intersections_discarded,
            ms_pushes: self.ms_pushes + other.ms_pushes,
            ms_pops: self.ms_pops + other.ms_pops,
            ms_deletes: self.ms_deletes + other.ms_deletes,
            obstacle_updates: self.obstacle_updates + other.obstacle_updates,
            heap_inserts: self.heap_inserts + other.heap_inserts,
            heap_deletes: self.heap_deletes + other.heap_deletes,
            heap_pops: self.heap_pops + other.heap_pops,
            visibility_tests: self.visibility_tests + other.visibility_tests,
            late_intersections: self.late_intersections + other.late_intersections,
            horizon_fallbacks: self.horizon_fallbacks + other.horizon_fallbacks,
            hull_pops: self.hull_pops + other.hull_pops,
            max_ms: self.max_ms.max(other.max_ms),
            max_heap: self.max_heap.max(other.max_heap),
        }
    }
}

/// Hooks into a running sweep. All methods default to no-ops.
pub trait SweepObserver {
    /// Whether `visibility_query` should receive every `ms_sees` evaluation.
    fn wants_queries(&self) -> bool {
        false
    }
    fn before_event(&mut self, _state: &SweepState<'_>, _event: &Event) {}
    fn after_event(&mut self, _state: &SweepState<'_>, _event: &Event) {}
    fn visibility_query(&mut self, _state: &SweepState<'_>, _query: VisibilityQuery) {}
}

struct NoObserver;

impl SweepObserver for NoObserver {}

pub struct SweepState<'t> {
    terrain: &'t Terrain,
    entries: Vec<Entry>,
    top: Option<EntryId>,
    ms_len: usize,
    heap: IndexedHeap<EventKey, (EntryId, EntryId)>,
    /// Vertices `0..remaining` are still to be swept.
    remaining: usize,
    hull: UpperHullStack,
    lists: Vec<Vec<usize>>,
    nonempty_lists: usize,
    in_ms: Vec<Option<EntryId>>,
    sweep_x: Rational,
    counters: SweepCounters,
    log_queries: bool,
    queries: Vec<VisibilityQuery>,
    last_fired: Option<bool>,
}

impl<'t> SweepState<'t> {
    pub fn new(terrain: &'t Terrain) -> Result<Self, SweepError> {
        if !terrain.has_vertical_ends() {
            return Err(SweepError::FlatEnds);
        }
        let n = terrain.len();
        Ok(SweepState {
            terrain,
            entries: Vec::new(),
            top: None,
            ms_len: 0,
            heap: IndexedHeap::new(),
            remaining: n,
            hull: UpperHullStack::new(),
            lists: vec![Vec::new(); n],
            nonempty_lists: 0,
            in_ms: vec![None; n],
            sweep_x: Rational::from(terrain.vertex(n - 1).x),
            counters: SweepCounters::default(),
            log_queries: false,
            queries: Vec::new(),
            last_fired: None,
        })
    }

    pub fn set_query_log(&mut self, on: bool) {
        self.log_queries = on;
    }

    pub fn terrain(&self) -> &'t Terrain {
        self.terrain
    }

    pub fn counters(&self) -> &SweepCounters {
        &self.counters
    }

    pub fn sweep_x(&self) -> &Rational {
        &self.sweep_x
    }

    pub fn ms_len(&self) -> usize {
        self.ms_len
    }

    pub fn heap_len(&self) -> usize {
        self.heap.len()
    }

    pub fn list(&self, v: usize) -> &[usize] {
        &self.lists[v]
    }

    pub fn in_ms(&self, v: usize) -> bool {
        self.in_ms[v].is_some()
    }

    /// Stack rays from top (leftmost) to bottom.
    pub fn ms_rays(&self) -> Vec<ShadowRay> {
        self.ms_ids().into_iter().map(|id| self.entries[id].ray).collect()
    }

    fn ms_ids(&self) -> Vec<EntryId> {
        let mut out = Vec::with_capacity(self.ms_len);
        let mut cur = self.top;
        while let Some(id) = cur {
            out.push(id);
            cur = self.entries[id].below;
        }
        out
    }

    /// `k + t`: stack size plus listed vertices outside the stack.
    pub fn k_plus_t(&self) -> usize {
        let listed_in_ms = self.ms_ids().iter().filter(|&&id| !self.lists[self.entries[id].ray.origin].is_empty()).count();
        self.ms_len + self.nonempty_lists - listed_in_ms
    }

    /// Whether the last intersection event deleted anything.
    pub fn last_intersection_fired(&self) -> Option<bool> {
        self.last_fired
    }

    /// Next vertex to be swept.
    pub fn next_vertex(&self) -> Option<usize> {
        self.remaining.checked_sub(1)
    }

    pub fn is_done(&self) -> bool {
        self.remaining == 0
    }

    fn take_queries(&mut self) -> Vec<VisibilityQuery> {
        std::mem::take(&mut self.queries)
    }

    fn ray_points(&self, ray: &ShadowRay) -> (GridPoint, GridPoint) {
        (self.terrain.vertex(ray.origin), self.terrain.vertex(ray.obstacle))
    }

    /// Whether the entry's current ray lets it see vertex `w` at or left of the sweep line.
    pub fn ms_sees(&mut self, id: EntryId, w: usize) -> bool {
        let ray = self.entries[id].ray;
        let (o, b) = self.ray_points(&ray);
        let p = self.terrain.vertex(w);
        let result = if o.x == b.x {
            p.y >= b.y
        } else {
            side_of_line_grid(p, o, b).expect("non-vertical ray") != Side::Below
        };
        self.counters.visibility_tests += 1;
        if self.log_queries {
            self.queries.push(VisibilityQuery { origin: ray.origin, target: w, result });
        }
        result
    }

    /// Abscissa of the next event without consuming it.
    pub fn peek_next_x(&self) -> Option<Rational> {
        let vx = self.remaining.checked_sub(1).map(|v| self.terrain.vertex(v).x);
        match (self.heap.peek(), vx) {
            (Some((k, _)), Some(vx)) => Some(if k.x.cmp_int(vx) != Ordering::Less { k.x.clone() } else { vx.into() }),
            (Some((k, _)), None) => Some(k.x.clone()),
            (None, Some(vx)) => Some(vx.into()),
            (None, None) => None,
        }
    }

    /// Rightmost pending event; an intersection wins a tie with a vertex.
    /// Returns `None` once every vertex has been swept.
    pub fn next_event(&mut self) -> Option<Event> {
        let v = self.remaining.checked_sub(1)?;
        let vx = self.terrain.vertex(v).x;
        let take_heap = self.heap.peek().is_some_and(|(k, _)| k.x.cmp_int(vx) != Ordering::Less);
        if take_heap {
            let (key, (upper, lower)) = self.heap.pop().expect("peeked");
            self.counters.heap_pops += 1;
            self.entries[upper].below_event = None;
            Some(Event::Intersection(IntersectionEvent { point: Point::new(key.x, key.y), upper, lower }))
        } else {
            self.remaining -= 1;
            Some(Event::Vertex(v))
        }
    }

    pub fn process_event(&mut self, event: &Event) -> Result<(), SweepError> {
        match event {
            Event::Vertex(v) => {
                let v = *v;
                self.sweep_x = Rational::from(self.terrain.vertex(v).x);
                let before = self.hull.pops();
                let horizon = self.hull.push_vertex(self.terrain, v).map_err(|e| SweepError::Inconsistent(e.to_string()))?;
                self.counters.hull_pops += self.hull.pops() - before;
                match self.terrain.class(v) {
                    VertexClass::LeftConvex => {
                        self.counters.lc_events += 1;
                        let r = self.checked_horizon(v, horizon)?;
                        self.handle_left_convex(v, r)?;
                    }
                    VertexClass::RightConvex => self.counters.rc_events += 1,
                    VertexClass::LeftReflex => {
                        self.counters.lr_events += 1;
                        self.handle_left_reflex(v)?;
                    }
                    VertexClass::RightReflex => {
                        self.counters.rr_events += 1;
                        self.handle_right_reflex(v)?;
                    }
                }
            }
            Event::Intersection(ev) => {
                self.sweep_x = ev.point.x.clone();
                self.handle_intersection(ev)?;
            }
        }
        self.counters.max_ms = self.counters.max_ms.max(self.ms_len);
        self.counters.max_heap = self.counters.max_heap.max(self.heap.len());
        Ok(())
    }

    fn checked_horizon(&mut self, v: usize, horizon: Option<usize>) -> Result<usize, SweepError> {
        match horizon {
            Some(r) if self.terrain.class(r).is_reflex() => Ok(r),
            _ => {
                self.counters.horizon_fallbacks += 1;
                visibility::right_horizon_bruteforce(self.terrain, v).map_err(|e| SweepError::Inconsistent(e.to_string()))
            }
        }
    }

    fn append(&mut self, guard: usize, witness: usize) {
        if self.lists[guard].is_empty() {
            self.nonempty_lists += 1;
        }
        self.lists[guard].push(witness);
    }

    fn handle_left_convex(&mut self, v: usize, horizon: usize) -> Result<(), SweepError> {
        let mut seer = None;
        while let Some(top) = self.top {
            if self.ms_sees(top, v) {
                seer = Some(top);
                break;
            }
            if self.entries[top].ray.origin > horizon {
                break;
            }
            self.remove(top);
        }
        match seer {
            Some(id) => {
                let g = self.entries[id].ray.origin;
                self.append(g, v);
            }
            None => {
                self.push(ShadowRay { origin: horizon, obstacle: v, dummy: true })?;
                self.append(horizon, v);
            }
        }
        Ok(())
    }

    /// Entries from the top that see `w`, in stack order.
    fn seers_from_top(&mut self, w: usize) -> Vec<EntryId> {
        let mut out = Vec::new();
        let mut cur = self.top;
        while let Some(id) = cur {
            if !self.ms_sees(id, w) {
                break;
            }
            out.push(id);
            cur = self.entries[id].below;
        }
        out
    }

    fn handle_left_reflex(&mut self, v: usize) -> Result<(), SweepError> {
        let seers = self.seers_from_top(v);
        if let Some((&keep, dropped)) = seers.split_last() {
            for &id in dropped {
                self.remove(id);
            }
            self.set_obstacle(keep, v)?;
        }
        Ok(())
    }

    fn handle_right_reflex(&mut self, v: usize) -> Result<(), SweepError> {
        let vy = self.terrain.vertex(v).y;
        let u = self.top.map(|id| self.entries[id].ray.origin);
        let u_lower = u.is_some_and(|u| self.terrain.vertex(u).y < vy);
        while let Some(top) = self.top {
            if self.terrain.vertex(self.entries[top].ray.origin).y >= vy {
                break;
            }
            self.remove(top);
        }
        if let (true, Some(u)) = (u_lower, u) {
            if self.lists[u].len() == 1 {
                let p = self.lists[u].pop().expect("length checked");
                self.nonempty_lists -= 1;
                self.append(v, p);
                // The first vertex has no edge to its left and nothing left to sweep.
                if v > 0 {
                    self.push(ShadowRay { origin: v, obstacle: v - 1, dummy: false })?;
                }
            }
        }
        let seers = self.seers_from_top(v);
        if let Some((_, dropped)) = seers.split_last() {
            for &id in dropped {
                self.remove(id);
            }
        }
        Ok(())
    }

    fn passes_through(&self, id: EntryId, p: &Point) -> bool {
        let (o, b) = self.ray_points(&self.entries[id].ray);
        orient(&o.into(), &b.into(), p) == Turn::Straight
    }

    fn handle_intersection(&mut self, ev: &IntersectionEvent) -> Result<(), SweepError> {
        let (low, _) = height_range_grid(self.terrain, &ev.point.x).map_err(|e| SweepError::Inconsistent(e.to_string()))?;
        if ev.point.y.cmp_int(low) == Ordering::Less {
            self.counters.intersections_discarded += 1;
            self.last_fired = Some(false);
            return Ok(());
        }
        self.counters.intersections_fired += 1;
        self.last_fired = Some(true);
        let mut run = Vec::new();
        let mut cur = self.entries[ev.upper].above;
        while let Some(id) = cur {
            if !self.passes_through(id, &ev.point) {
                break;
            }
            run.push(id);
            cur = self.entries[id].above;
        }
        run.reverse();
        run.push(ev.upper);
        let mut cur = Some(ev.lower);
        while let Some(id) = cur {
            if id != ev.lower && !self.passes_through(id, &ev.point) {
                break;
            }
            run.push(id);
            cur = self.entries[id].below;
        }
        // `run` is top to bottom; the bottom entry is the rightmost.
        let (_, dropped) = run.split_last().expect("at least two entries");
        for &id in dropped {
            self.remove(id);
        }
        Ok(())
    }

    fn clear_pair(&mut self, upper: EntryId) {
        if let Some(h) = self.entries[upper].below_event.take() {
            if self.heap.remove(h).is_some() {
                self.counters.heap_deletes += 1;
            }
        }
    }

    fn refresh_pair(&mut self, upper: EntryId) -> Result<(), SweepError> {
        debug_assert!(self.entries[upper].below_event.is_none());
        let Some(lower) = self.entries[upper].below else {
            return Ok(());
        };
        let (o1, t1) = self.ray_points(&self.entries[upper].ray);
        let (o2, t2) = self.ray_points(&self.entries[lower].ray);
        if let Some(p) = ray_intersection_grid(o1, t1, o2, t2)? {
            if p.x < self.sweep_x {
                let h = self.heap.push(EventKey { x: p.x, y: p.y }, (upper, lower));
                self.counters.heap_inserts += 1;
                self.entries[upper].below_event = Some(h);
            } else {
                self.counters.late_intersections += 1;
            }
        }
        Ok(())
    }

    fn push(&mut self, ray: ShadowRay) -> Result<(), SweepError> {
        let id = self.entries.len();
        if let Some(below) = self.top {
            let b = self.entries[below].ray.origin;
            let (pv, pb) = (self.terrain.vertex(ray.origin), self.terrain.vertex(b));
            if ray.origin >= b || pv.y > pb.y {
                return Err(SweepError::Inconsistent(format!(
                    "pushing {} {} above {} {} breaks stack order",
                    ray.origin, pv, b, pb
                )));
            }
        }
        if self.in_ms[ray.origin].is_some() {
            return Err(SweepError::Inconsistent(format!("vertex {} is already on the stack", ray.origin)));
        }
        self.entries.push(Entry { ray, above: None, below: self.top, below_event: None });
        if let Some(below) = self.top {
            self.entries[below].above = Some(id);
        }
        self.top = Some(id);
        self.ms_len += 1;
        self.in_ms[ray.origin] = Some(id);
        self.counters.ms_pushes += 1;
        self.refresh_pair(id)
    }

    fn remove(&mut self, id: EntryId) {
        let (above, below) = (self.entries[id].above, self.entries[id].below);
        self.clear_pair(id);
        if let Some(a) = above {
            self.clear_pair(a);
            self.entries[a].below = below;
        }
        if let Some(b) = below {
            self.entries[b].above = above;
        }
        if self.top == Some(id) {
            self.top = below;
            self.counters.ms_pops += 1;
        } else {
            self.counters.ms_deletes += 1;
        }
        self.entries[id].above = None;
        self.entries[id].below = None;
        self.ms_len -= 1;
        self.in_ms[self.entries[id].ray.origin] = None;
        if let Some(a) = above {
            self.refresh_pair(a).expect("stack rays are never degenerate");
        }
    }

    fn set_obstacle(&mut self, id: EntryId, obstacle: usize) -> Result<(), SweepError> {
        let above = self.entries[id].above;
        self.clear_pair(id);
        if let Some(a) = above {
            self.clear_pair(a);
        }
        let ray = &mut self.entries[id].ray;
        ray.obstacle = obstacle;
        ray.dummy = false;
        self.counters.obstacle_updates += 1;
        self.refresh_pair(id)?;
        if let Some(a) = above {
            self.refresh_pair(a)?;
        }
        Ok(())
    }

    pub fn into_solution(self) -> GuardSolution {
        let mut sol = GuardSolution { left_counters: Some(self.counters), ..GuardSolution::default() };
        for (g, list) in self.lists.into_iter().enumerate() {
            if !list.is_empty() {
                sol.add(g, list, Provenance::LeftSweep);
            }
        }
        sol
    }
}

/// Optimal guards among the reflex vertices for the left convex vertices.
pub fn run_left_sweep(t: &Terrain) -> Result<GuardSolution, SweepError> {
    run_left_sweep_with(t, &mut NoObserver)
}

pub fn run_left_sweep_with(t: &Terrain, observer: &mut dyn SweepObserver) -> Result<GuardSolution, SweepError> {
    let mut state = SweepState::new(t)?;
    state.set_query_log(observer.wants_queries());
    while let Some(event) = state.next_event() {
        observer.before_event(&state, &event);
        state.process_event(&event)?;
        for q in state.take_queries() {
            observer.visibility_query(&state, q);
        }
        observer.after_event(&state, &event);
    }
    Ok(state.into_solution())
}

/// First witness of every guard's list.
pub fn extract_first_witnesses(sol: &GuardSolution) -> Result<BTreeSet<usize>, SweepError> {
    sol.guards
        .iter()
        .map(|(&g, e)| e.witnesses.first().copied().ok_or(SweepError::EmptyList(g)))
        .collect()
}
