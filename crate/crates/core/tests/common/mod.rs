#![allow(dead_code)]

use std::collections::BTreeSet;

use orthoguard::geometry::{ray_intersection_grid, Rational};
use orthoguard::gen::{random_terrain, EndStyle, GenParams};
use orthoguard::sweep::{run_left_sweep_with, Event, SweepObserver, SweepState, VisibilityQuery};
use orthoguard::terrain::height_range_at;
use orthoguard::visibility::sees;
use orthoguard::{GuardSolution, Terrain, VertexClass};

/// Generated vertical-ended terrain with at most `max_n` vertices.
pub fn corpus_terrain(seed: u64, max_n: usize) -> Terrain {
    let steps = 1 + (seed as usize * 7919) % (max_n / 2 - 1);
    let p = GenParams {
        seed,
        steps,
        max_run: 1 + (seed % 5) as u32,
        max_jump: 1 + (seed / 5 % 6) as u32,
        ends: EndStyle::VerticalBoth,
    };
    random_terrain(&p).expect("corpus parameters are valid")
}

/// Generated terrain with at most `max_n` vertices and at least one horizontal end.
pub fn flat_terrain(seed: u64, max_n: usize) -> Terrain {
    let ends = if seed.is_multiple_of(2) { EndStyle::HorizontalBoth } else { EndStyle::Mixed };
    let steps = 1 + (seed as usize * 7919) % ((max_n - 1) / 2);
    let p = GenParams { seed, steps, max_run: 1 + (seed % 4) as u32, max_jump: 1 + (seed / 4 % 5) as u32, ends };
    random_terrain(&p).expect("corpus parameters are valid")
}

fn ray_y_at(t: &Terrain, origin: usize, obstacle: usize, x: &Rational) -> Option<Rational> {
    let (o, b) = (t.vertex(origin), t.vertex(obstacle));
    if o.x == b.x {
        return None;
    }
    let slope = Rational::new(b.y - o.y, b.x - o.x).expect("non-zero run");
    Some(&Rational::from(o.y) + &(&slope * &(x - &Rational::from(o.x))))
}

/// Observer that checks the sweep's structural invariants after every event.
#[derive(Default)]
pub struct Checker {
    pub violations: Vec<String>,
    pub queries: usize,
    pub query_mismatches: Vec<VisibilityQuery>,
    /// Also evaluate the recovery property for every future left convex vertex.
    pub recovery: bool,
    /// Adjacent pairs seen crossed strictly below the terrain, summed over events.
    pub below_crossings: usize,
    last_kt: usize,
    promised: BTreeSet<usize>,
    events: usize,
}

impl Checker {
    pub fn with_recovery() -> Self {
        Checker { recovery: true, ..Default::default() }
    }

    fn fail(&mut self, event: &Event, what: String) {
        if self.violations.len() < 20 {
            self.violations.push(format!("event #{} {:?}: {}", self.events, event, what));
        }
    }
}

impl SweepObserver for Checker {
    fn wants_queries(&self) -> bool {
        true
    }

    fn before_event(&mut self, s: &SweepState<'_>, event: &Event) {
        if !self.recovery {
            return;
        }
        if let Event::Vertex(v) = event {
            if self.promised.contains(v) {
                let t = s.terrain();
                if !s.ms_rays().iter().any(|r| sees(t, r.origin, *v)) {
                    self.fail(event, format!("vertex {v} was seen by a stack entry earlier but by none now"));
                }
            }
        }
    }

    fn visibility_query(&mut self, s: &SweepState<'_>, q: VisibilityQuery) {
        self.queries += 1;
        if sees(s.terrain(), q.origin, q.target) != q.result {
            self.query_mismatches.push(q);
        }
    }

    fn after_event(&mut self, s: &SweepState<'_>, event: &Event) {
        let t = s.terrain();
        let rays = s.ms_rays();
        for w in rays.windows(2) {
            let (a, b) = (t.vertex(w[0].origin), t.vertex(w[1].origin));
            if !(a.x < b.x && a.y <= b.y) {
                self.fail(event, format!("stack out of order: {} {} above {} {}", w[0].origin, a, w[1].origin, b));
            }
        }
        for r in &rays {
            let (o, b) = (t.vertex(r.origin), t.vertex(r.obstacle));
            if b.x > o.x || b.y > o.y {
                self.fail(event, format!("ray {}->{} has negative slope", r.origin, r.obstacle));
            }
            if b.x == o.x && !(r.dummy && r.obstacle == t.len() - 1) {
                self.fail(event, format!("unexpected vertical ray {}->{}", r.origin, r.obstacle));
            }
            if !r.dummy && t.class(r.obstacle) != VertexClass::LeftReflex && r.obstacle + 1 != r.origin {
                self.fail(event, format!("obstacle {} of {} is not left reflex", r.obstacle, r.origin));
            }
        }
        if let Some(next_x) = s.peek_next_x() {
            for w in rays.windows(2) {
                let (u, l) = (w[0], w[1]);
                let crossing = ray_intersection_grid(
                    t.vertex(u.origin),
                    t.vertex(u.obstacle),
                    t.vertex(l.origin),
                    t.vertex(l.obstacle),
                )
                .expect("stack rays are proper");
                let mut skip_order = false;
                if let Some(p) = crossing {
                    if p.x > next_x {
                        let (low, _) = height_range_at(t, &p.x).expect("crossing inside the terrain");
                        if p.y < low {
                            // A discarded crossing: the pair stays adjacent and crossed.
                            self.below_crossings += 1;
                            skip_order = true;
                        } else {
                            self.fail(
                                event,
                                format!("rays of {} and {} cross at {} right of the next event {}", u.origin, l.origin, p, next_x),
                            );
                        }
                    }
                }
                if skip_order || next_x >= *s.sweep_x() {
                    continue;
                }
                if let (Some(yu), Some(yl)) = (ray_y_at(t, u.origin, u.obstacle, &next_x), ray_y_at(t, l.origin, l.obstacle, &next_x)) {
                    if yu > yl {
                        self.fail(event, format!("ray of {} above ray of {} at x = {}", u.origin, l.origin, next_x));
                    }
                }
            }
        }
        let kt = s.k_plus_t();
        if kt < self.last_kt {
            self.fail(event, format!("k + t dropped from {} to {}", self.last_kt, kt));
        }
        self.last_kt = kt;
        if s.heap_len() >= s.ms_len().max(1) {
            self.fail(event, format!("heap holds {} events for a stack of {}", s.heap_len(), s.ms_len()));
        }
        if self.recovery {
            if let Some(next) = s.next_vertex() {
                for v in 0..=next {
                    if t.class(v) == VertexClass::LeftConvex
                        && !self.promised.contains(&v)
                        && rays.iter().any(|r| sees(t, r.origin, v))
                    {
                        self.promised.insert(v);
                    }
                }
            }
        }
        self.events += 1;
    }
}

/// Final-state checks: every left convex vertex in exactly one list, counters consistent.
pub fn check_solution(t: &Terrain, sol: &GuardSolution) -> Vec<String> {
    let mut out = Vec::new();
    let lc: BTreeSet<usize> = t.indices_of(VertexClass::LeftConvex).into_iter().collect();
    let mut seen = BTreeSet::new();
    for (g, e) in &sol.guards {
        if !t.class(*g).is_reflex() {
            out.push(format!("guard {g} is not reflex"));
        }
        if e.witnesses.is_empty() {
            out.push(format!("guard {g} has an empty list"));
        }
        for w in &e.witnesses {
            if !lc.contains(w) {
                out.push(format!("{w} in L({g}) is not left convex"));
            }
            if !seen.insert(*w) {
                out.push(format!("{w} is listed twice"));
            }
            if !sees(t, *g, *w) {
                out.push(format!("guard {g} does not see its witness {w}"));
            }
        }
    }
    if seen != lc {
        out.push(format!("unlisted left convex vertices {:?}", lc.difference(&seen).collect::<Vec<_>>()));
    }
    let c = sol.left_counters.expect("sweep counters");
    if c.intersections_fired > sol.len() {
        out.push(format!("{} intersections fired for {} guards", c.intersections_fired, sol.len()));
    }
    out
}

/// Run an instrumented left sweep and collect every invariant violation.
pub fn instrumented(t: &Terrain, recovery: bool) -> (GuardSolution, Checker) {
    let mut checker = if recovery { Checker::with_recovery() } else { Checker::default() };
    let sol = run_left_sweep_with(t, &mut checker).expect("sweep succeeds");
    let extra = check_solution(t, &sol);
    checker.violations.extend(extra);
    (sol, checker)
}
