//! Brute-force vertex-to-vertex visibility. Slow, simple, and the reference
//! every faster routine in the crate is checked against.
//!
//! A segment sees past the terrain as long as it is never strictly below it;
//! grazing a horizontal edge or passing through a wall point is allowed.

use thiserror::Error;

use crate::terrain::{Terrain, VertexClass};

/// Default cap on the vertex count accepted by [`visibility_matrix`].
pub const MATRIX_CAP: usize = 512;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VisibilityError {
    #[error("vertex index {index} out of range for terrain of {len} vertices")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("vertex {index} is {class}, expected left convex")]
    NotLeftConvex { index: usize, class: VertexClass },
    #[error("terrain has {len} vertices, above the matrix cap of {cap}")]
    CapExceeded { len: usize, cap: usize },
}

/// Whether vertices `p` and `q` see each other. Panics on out-of-range indices;
/// see [`try_sees`] for the checked form.
pub fn sees(t: &Terrain, p: usize, q: usize) -> bool {
    let (p, q) = if p <= q { (p, q) } else { (q, p) };
    let a = t.vertex(p);
    let b = t.vertex(q);
    if a.x == b.x {
        // Distinct x between walls, so equal abscissas means the same wall.
        return true;
    }
    let dx = (b.x - a.x) as i128;
    let dy = (b.y - a.y) as i128;
    // seg_y(x) >= h  <=>  (a.y - h) * dx + dy * (x - a.x) >= 0
    let clears = |x: i64, h: i64| ((a.y - h) as i128) * dx + dy * ((x - a.x) as i128) >= 0;
    for e in p..q {
        let (u, v) = (t.vertex(e), t.vertex(e + 1));
        if u.y != v.y {
            continue;
        }
        let lo = u.x.max(a.x);
        let hi = v.x.min(b.x);
        if lo >= hi {
            continue;
        }
        if !clears(lo, u.y) || !clears(hi, u.y) {
            return false;
        }
    }
    true
}

pub fn try_sees(t: &Terrain, p: usize, q: usize) -> Result<bool, VisibilityError> {
    for index in [p, q] {
        if index >= t.len() {
            return Err(VisibilityError::IndexOutOfRange { index, len: t.len() });
        }
    }
    Ok(sees(t, p, q))
}

/// `R(v)`: the highest-indexed reflex vertex that sees the left convex vertex `v`.
pub fn right_horizon_bruteforce(t: &Terrain, v: usize) -> Result<usize, VisibilityError> {
    if v >= t.len() {
        return Err(VisibilityError::IndexOutOfRange { index: v, len: t.len() });
    }
    let class = t.class(v);
    if class != VertexClass::LeftConvex {
        return Err(VisibilityError::NotLeftConvex { index: v, class });
    }
    Ok((v..t.len())
        .rev()
        .find(|&r| t.class(r).is_reflex() && sees(t, v, r))
        .unwrap_or_else(|| t.wall_partner(v).expect("left convex vertices sit below a wall")))
}

/// Symmetric all-pairs visibility with a true diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VisibilityMatrix {
    n: usize,
    bits: Vec<bool>,
}

impl VisibilityMatrix {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, p: usize, q: usize) -> bool {
        self.bits[p * self.n + q]
    }

    /// Vertices seen by `p`, in index order.
    pub fn row(&self, p: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&q| self.get(p, q))
    }
}

pub fn visibility_matrix(t: &Terrain) -> Result<VisibilityMatrix, VisibilityError> {
    visibility_matrix_with_cap(t, MATRIX_CAP)
}

pub fn visibility_matrix_with_cap(t: &Terrain, cap: usize) -> Result<VisibilityMatrix, VisibilityError> {
    let n = t.len();
    if n > cap {
        return Err(VisibilityError::CapExceeded { len: n, cap });
    }
    let mut bits = vec![false; n * n];
    for p in 0..n {
        bits[p * n + p] = true;
        for q in p + 1..n {
            let s = sees(t, p, q);
            bits[p * n + q] = s;
            bits[q * n + p] = s;
        }
    }
    Ok(VisibilityMatrix { n, bits })
}
