//! Line-oriented sweep trace.
//!
//! ```text
//! # orthoguard-trace v1
//! 15 V 6 RR ms=[6:5 21:11] h=1
//! 16 X 10 -3 fired ms=[21:11] h=0
//! 17 V 5 LR ms=[21:5] h=0
//! ```
//!
//! Each line is the event sequence number, the event kind (`V` vertex, `X`
//! intersection), the vertex index and class or the intersection point, then
//! the stack after the event from top to bottom as `origin:obstacle` (a `*`
//! marks a dummy obstacle) and the heap size.

use std::fmt::Write as _;

use super::{Event, SweepObserver, SweepState};

pub const TRACE_HEADER: &str = "# orthoguard-trace v1";

#[derive(Debug, Clone)]
pub struct TraceWriter {
    out: String,
    seq: usize,
}

impl Default for TraceWriter {
    fn default() -> Self {
        Self::new()
    }
}

impl TraceWriter {
    pub fn new() -> Self {
        TraceWriter { out: format!("{TRACE_HEADER}\n"), seq: 0 }
    }

    pub fn as_str(&self) -> &str {
        &self.out
    }

    pub fn into_string(self) -> String {
        self.out
    }
}

impl SweepObserver for TraceWriter {
    fn after_event(&mut self, state: &SweepState<'_>, event: &Event) {
        let _ = write!(self.out, "{} ", self.seq);
        self.seq += 1;
        match event {
            Event::Vertex(v) => {
                let _ = write!(self.out, "V {} {}", v, state.terrain().class(*v).abbrev());
            }
            Event::Intersection(ev) => {
                let status = if state.last_intersection_fired() == Some(true) { "fired" } else { "discarded" };
                let _ = write!(self.out, "X {} {} {}", ev.point.x, ev.point.y, status);
            }
        }
        self.out.push_str(" ms=[");
        for (i, r) in state.ms_rays().iter().enumerate() {
            if i > 0 {
                self.out.push(' ');
            }
            let _ = write!(self.out, "{}:{}{}", r.origin, r.obstacle, if r.dummy { "*" } else { "" });
        }
        let _ = writeln!(self.out, "] h={}", state.heap_len());
    }
}
