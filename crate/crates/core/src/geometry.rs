//! Exact scalars and the orientation-style predicates used by every other module.
//!
//! Terrain vertices live on the integer grid ([`GridPoint`]) and all predicates
//! over them are evaluated in `i128`, which is exact for coordinates up to
//! 2^60 in magnitude. Points that are not vertices (shadow-ray intersections)
//! carry [`Rational`] coordinates backed by arbitrary-precision integers.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("line through {} and {} is vertical", .0.0, .0.1)]
    DegenerateLine(Box<(Point, Point)>),
    #[error("ray origin {0} coincides with its through point")]
    DegenerateRay(Box<Point>),
    #[error("division by zero")]
    DivisionByZero,
}

/// Exact rational number, always stored in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: i64, denom: i64) -> Result<Self, GeometryError> {
        if denom == 0 {
            return Err(GeometryError::DivisionByZero);
        }
        Ok(Rational(BigRational::new(numer.into(), denom.into())))
    }

    pub fn from_big(numer: BigInt, denom: BigInt) -> Result<Self, GeometryError> {
        if denom.is_zero() {
            return Err(GeometryError::DivisionByZero);
        }
        Ok(Rational(BigRational::new(numer, denom)))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// Compare against an integer without allocating an intermediate rational.
    pub fn cmp_int(&self, value: i64) -> Ordering {
        self.numer().cmp(&(self.denom() * BigInt::from(value)))
    }

    /// Floor as `i64`, saturating at the `i64` range.
    pub fn floor_i64(&self) -> i64 {
        let floor = self.0.floor().to_integer();
        i64::try_from(floor.clone()).unwrap_or(if floor.is_negative() { i64::MIN } else { i64::MAX })
    }

    pub fn checked_div(&self, rhs: &Rational) -> Result<Rational, GeometryError> {
        if rhs.0.is_zero() {
            return Err(GeometryError::DivisionByZero);
        }
        Ok(Rational(&self.0 / &rhs.0))
    }

    pub fn signum(&self) -> Ordering {
        self.0.numer().sign().cmp(&num_bigint::Sign::NoSign)
    }

    /// Lossy conversion for rendering only.
    pub fn to_f64_lossy(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational(BigRational::from_integer(v.into()))
    }
}

impl From<BigInt> for Rational {
    fn from(v: BigInt) -> Self {
        Rational(BigRational::from_integer(v))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

macro_rules! rational_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
    };
}

rational_binop!(Add, add);
rational_binop!(Sub, sub);
rational_binop!(Mul, mul);

/// Panics on a zero divisor; use [`Rational::checked_div`] when the divisor may vanish.
impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        Rational(self.0 / rhs.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

/// A point with exact rational coordinates.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point { x: x.into(), y: y.into() }
    }

    /// "Left of" order: compares abscissas only.
    pub fn cmp_x(&self, other: &Point) -> Ordering {
        self.x.cmp(&other.x)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<GridPoint> for Point {
    fn from(p: GridPoint) -> Self {
        Point::from_ints(p.x, p.y)
    }
}

/// An integer lattice point; terrain vertices are always lattice points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridPoint {
    pub x: i64,
    pub y: i64,
}

impl GridPoint {
    pub const fn new(x: i64, y: i64) -> Self {
        GridPoint { x, y }
    }
}

impl fmt::Display for GridPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Turn {
    Left,
    Straight,
    Right,
}

impl Turn {
    fn from_sign(sign: Ordering) -> Turn {
        match sign {
            Ordering::Greater => Turn::Left,
            Ordering::Equal => Turn::Straight,
            Ordering::Less => Turn::Right,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Above,
    On,
    Below,
}

/// A ray `origin + t * (through - origin)` for `t >= 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ray {
    pub origin: Point,
    pub through: Point,
}

impl Ray {
    pub fn new(origin: Point, through: Point) -> Self {
        Ray { origin, through }
    }
}

fn cross(ax: &Rational, ay: &Rational, bx: &Rational, by: &Rational) -> Rational {
    &(ax * by) - &(ay * bx)
}

/// Sign of `(b - a) x (c - a)`.
pub fn orient(a: &Point, b: &Point, c: &Point) -> Turn {
    let det = cross(&(&b.x - &a.x), &(&b.y - &a.y), &(&c.x - &a.x), &(&c.y - &a.y));
    Turn::from_sign(det.signum())
}

/// Position of `p` relative to the non-vertical line through `a` and `b`.
pub fn side_of_line(p: &Point, a: &Point, b: &Point) -> Result<Side, GeometryError> {
    if a.x == b.x {
        return Err(GeometryError::DegenerateLine(Box::new((a.clone(), b.clone()))));
    }
    // Orient the line left to right so that "left turn" means "above".
    let (l, r) = if a.x < b.x { (a, b) } else { (b, a) };
    Ok(match orient(l, r, p) {
        Turn::Left => Side::Above,
        Turn::Straight => Side::On,
        Turn::Right => Side::Below,
    })
}

/// Interior intersection of two rays (excluding both origins), if any.
/// Collinear rays and parallel rays report `None`.
pub fn ray_intersection(r1: &Ray, r2: &Ray) -> Result<Option<Point>, GeometryError> {
    if r1.origin == r1.through {
        return Err(GeometryError::DegenerateRay(Box::new(r1.origin.clone())));
    }
    if r2.origin == r2.through {
        return Err(GeometryError::DegenerateRay(Box::new(r2.origin.clone())));
    }
    let d1x = &r1.through.x - &r1.origin.x;
    let d1y = &r1.through.y - &r1.origin.y;
    let d2x = &r2.through.x - &r2.origin.x;
    let d2y = &r2.through.y - &r2.origin.y;
    let denom = cross(&d1x, &d1y, &d2x, &d2y);
    if denom.signum() == Ordering::Equal {
        return Ok(None);
    }
    let wx = &r2.origin.x - &r1.origin.x;
    let wy = &r2.origin.y - &r1.origin.y;
    let t = cross(&wx, &wy, &d2x, &d2y).checked_div(&denom)?;
    let u = cross(&wx, &wy, &d1x, &d1y).checked_div(&denom)?;
    if t.signum() != Ordering::Greater || u.signum() != Ordering::Greater {
        return Ok(None);
    }
    let x = &r1.origin.x + &(&t * &d1x);
    let y = &r1.origin.y + &(&t * &d1y);
    Ok(Some(Point::new(x, y)))
}

#[inline]
fn cross_i(ax: i128, ay: i128, bx: i128, by: i128) -> i128 {
    ax * by - ay * bx
}

/// Integer orientation test, exact for coordinates below 2^60.
#[inline]
pub fn orient_grid(a: GridPoint, b: GridPoint, c: GridPoint) -> Turn {
    let det = cross_i(
        (b.x - a.x) as i128,
        (b.y - a.y) as i128,
        (c.x - a.x) as i128,
        (c.y - a.y) as i128,
    );
    Turn::from_sign(det.cmp(&0))
}

/// Integer counterpart of [`side_of_line`].
#[inline]
pub fn side_of_line_grid(p: GridPoint, a: GridPoint, b: GridPoint) -> Result<Side, GeometryError> {
    if a.x == b.x {
        return Err(GeometryError::DegenerateLine(Box::new((a.into(), b.into()))));
    }
    let (l, r) = if a.x < b.x { (a, b) } else { (b, a) };
    Ok(match orient_grid(l, r, p) {
        Turn::Left => Side::Above,
        Turn::Straight => Side::On,
        Turn::Right => Side::Below,
    })
}

/// Integer counterpart of [`ray_intersection`]; the sign tests run in `i128`
/// and only an actual crossing point is materialised as a rational.
pub fn ray_intersection_grid(
    origin1: GridPoint,
    through1: GridPoint,
    origin2: GridPoint,
    through2: GridPoint,
) -> Result<Option<Point>, GeometryError> {
    if origin1 == through1 {
        return Err(GeometryError::DegenerateRay(Box::new(origin1.into())));
    }
    if origin2 == through2 {
        return Err(GeometryError::DegenerateRay(Box::new(origin2.into())));
    }
    let (d1x, d1y) = ((through1.x - origin1.x) as i128, (through1.y - origin1.y) as i128);
    let (d2x, d2y) = ((through2.x - origin2.x) as i128, (through2.y - origin2.y) as i128);
    let denom = cross_i(d1x, d1y, d2x, d2y);
    if denom == 0 {
        return Ok(None);
    }
    let (wx, wy) = ((origin2.x - origin1.x) as i128, (origin2.y - origin1.y) as i128);
    let t_num = cross_i(wx, wy, d2x, d2y);
    let u_num = cross_i(wx, wy, d1x, d1y);
    let positive = |num: i128| num != 0 && (num > 0) == (denom > 0);
    if !positive(t_num) || !positive(u_num) {
        return Ok(None);
    }
    let denom_b = BigInt::from(denom);
    let t_b = BigInt::from(t_num);
    let x = BigInt::from(origin1.x) * &denom_b + &t_b * BigInt::from(d1x);
    let y = BigInt::from(origin1.y) * &denom_b + &t_b * BigInt::from(d1y);
    Ok(Some(Point::new(
        Rational::from_big(x, denom_b.clone())?,
        Rational::from_big(y, denom_b)?,
    )))
}
