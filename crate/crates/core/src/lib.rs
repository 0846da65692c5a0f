//! Guard sets for 1.5D orthogonal terrains.
//!
//! A terrain is an x-monotone chain of alternating horizontal and vertical
//! edges with integer vertices. The crate computes a minimum set of reflex
//! vertices that sees every left convex vertex with a right-to-left sweep in
//! `O(n log m)` time, and combines it with the mirrored sweep into a guard set
//! for all vertices that is at most twice the optimum. A brute-force
//! visibility oracle and an exact exhaustive solver are included for checking.
//!
//! Vertex indices are 0-based throughout.

pub mod exact;
pub mod gen;
pub mod geometry;
pub mod heap;
pub mod hull;
pub mod solution;
pub mod solver;
pub mod sweep;
pub mod terrain;
pub mod visibility;

pub use exact::{minimum_guard_set, verify_guarding, ExactConfig, ExactError};
pub use gen::{fixtures, random_terrain, EndStyle, GenParams};
pub use geometry::{GridPoint, Point, Rational};
pub use solution::{GuardEntry, GuardSolution, Provenance};
pub use solver::{approx_guard_set, solve_side, solve_traced, verify_solution, CoverageReport, Side, SolverError};
pub use sweep::{extract_first_witnesses, run_left_sweep, SweepCounters};
pub use terrain::{extend, mirror, Terrain, TerrainError, VertexClass};
