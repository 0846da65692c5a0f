//! Seeded random orthogonal terrains and the named fixtures used across tests.
//!
//! The generator is SplitMix64 (Steele, Lea and Flood 2014): the state advances by
//! `0x9E3779B97F4A7C15` and each output is mixed with the multipliers
//! `0xBF58476D1CE4E5B9` and `0x94D049BB133111EB` (shifts 30, 27, 31).
//! A value in `[1, k]` is drawn as `1 + next() % k`; a coin flip is the top
//! bit of `next()`. Anyone reimplementing these three rules reproduces every
//! generated terrain bit for bit.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::geometry::GridPoint;
use crate::terrain::{mirror, Terrain, COORD_LIMIT};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform-ish draw from `[1, k]`.
    pub fn draw(&mut self, k: u64) -> u64 {
        1 + self.next_u64() % k
    }

    pub fn coin(&mut self) -> bool {
        self.next_u64() >> 63 == 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EndStyle {
    /// First and last edges vertical.
    VerticalBoth,
    /// First and last edges horizontal.
    HorizontalBoth,
    /// One vertical end and one horizontal end, chosen by the generator.
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenParams {
    pub seed: u64,
    /// Number of horizontal runs.
    pub steps: usize,
    pub max_run: u32,
    pub max_jump: u32,
    pub ends: EndStyle,
}

impl GenParams {
    pub fn vertical(seed: u64, steps: usize) -> Self {
        GenParams { seed, steps, max_run: 4, max_jump: 4, ends: EndStyle::VerticalBoth }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("steps must be at least 1")]
    NoSteps,
    #[error("max_run and max_jump must be at least 1")]
    ZeroBound,
    #[error("x extent {0} would exceed the coordinate limit")]
    TooWide(u64),
}

/// A random terrain, fully determined by `p`.
pub fn random_terrain(p: &GenParams) -> Result<Terrain, GenError> {
    if p.steps == 0 {
        return Err(GenError::NoSteps);
    }
    if p.max_run == 0 || p.max_jump == 0 {
        return Err(GenError::ZeroBound);
    }
    let width = p.steps as u64 * u64::from(p.max_run);
    if width > COORD_LIMIT as u64 {
        return Err(GenError::TooWide(width));
    }
    let mut rng = SplitMix64::new(p.seed);
    let (start_vertical, end_vertical) = match p.ends {
        EndStyle::VerticalBoth => (true, true),
        EndStyle::HorizontalBoth => (false, false),
        EndStyle::Mixed => {
            let v = rng.coin();
            (v, !v)
        }
    };
    let walls = p.steps + 1 - usize::from(!start_vertical) - usize::from(!end_vertical);

    let mut x = 0i64;
    let mut y = 0i64;
    let mut points = Vec::with_capacity(p.steps + walls + 1);
    points.push(GridPoint::new(x, y));
    let wall = |x: i64, y: &mut i64, rng: &mut SplitMix64, points: &mut Vec<GridPoint>| {
        let h = rng.draw(u64::from(p.max_jump)) as i64;
        let up = rng.coin();
        let step = if (up && *y + h <= COORD_LIMIT) || *y - h < -COORD_LIMIT { h } else { -h };
        *y += step;
        points.push(GridPoint::new(x, *y));
    };
    if start_vertical {
        wall(x, &mut y, &mut rng, &mut points);
    }
    for i in 0..p.steps {
        x += rng.draw(u64::from(p.max_run)) as i64;
        points.push(GridPoint::new(x, y));
        if i + 1 < p.steps || end_vertical {
            wall(x, &mut y, &mut rng, &mut points);
        }
    }
    Ok(Terrain::validate(&points).expect("generated terrains are valid by construction"))
}

/// Named fixtures: `E1`, `E2`, `E1-mirror` and `T3`.
///
/// `T3` is the vertical-ended generated terrain for seed 60 with 10 runs. Its
/// left sweep fires one shadow-ray intersection event, at `(10, -3)` exactly on
/// the terrain, and returns three guards.
pub fn fixtures() -> BTreeMap<&'static str, Terrain> {
    let e1 = Terrain::from_coords(&[(0, 3), (0, 2), (2, 2), (2, 0), (5, 0), (5, 1), (7, 1), (7, 4)])
        .expect("E1 is valid");
    let e2 = Terrain::from_coords(&[(0, 1), (2, 1), (2, 0), (4, 0), (4, 2), (6, 2)]).expect("E2 is valid");
    let e1m = mirror(&e1).0;
    let t3 = random_terrain(&T3_PARAMS).expect("T3 parameters are valid");
    BTreeMap::from([("E1", e1), ("E2", e2), ("E1-mirror", e1m), ("T3", t3)])
}

pub const T3_PARAMS: GenParams =
    GenParams { seed: 60, steps: 10, max_run: 4, max_jump: 4, ends: EndStyle::VerticalBoth };
