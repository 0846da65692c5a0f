//! Terrain families shared by the benchmarks.

use orthoguard::gen::{random_terrain, EndStyle, GenParams};
use orthoguard::Terrain;

/// A vertical-ended random terrain with about `n` vertices.
pub fn terrain_of_size(n: usize, seed: u64) -> Terrain {
    let p = GenParams { seed, steps: (n / 2).max(2) - 1, max_run: 2, max_jump: 6, ends: EndStyle::VerticalBoth };
    random_terrain(&p).expect("benchmark terrain")
}

/// Same shape as [`terrain_of_size`] with horizontal ends, so the solver extends it.
pub fn flat_terrain_of_size(n: usize, seed: u64) -> Terrain {
    let p = GenParams { seed, steps: (n / 2).max(2) - 1, max_run: 2, max_jump: 6, ends: EndStyle::HorizontalBoth };
    random_terrain(&p).expect("benchmark terrain")
}

/// A staircase descending to the right with `steps` treads.
pub fn staircase(steps: usize) -> Terrain {
    let mut coords = Vec::with_capacity(2 * steps + 3);
    let top = steps as i64;
    coords.push((0, top + 1));
    for i in 0..=steps as i64 {
        coords.push((i, top - i));
        coords.push((i + 1, top - i));
    }
    coords.pop();
    Terrain::from_coords(&coords).expect("staircase")
}
