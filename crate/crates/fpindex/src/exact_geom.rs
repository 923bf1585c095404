//! Exact rational plane primitives.
//!
//! Every predicate here works over arbitrary-precision rationals, so a sign
//! is never wrong. Callers that need floats (SVG output) convert at the edge.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Exact rational scalar used throughout the crate.
pub type Rat = BigRational;

/// Builds the rational `n / d`. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Builds the integer rational `n`.
pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Lossy conversion for display only.
pub fn to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Sign of a rational as -1, 0 or 1.
pub fn sign(r: &Rat) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    #[error("point lies on the loop")]
    PointOnLoop,
    #[error("segment endpoints coincide")]
    DegenerateSegment,
    #[error("loop needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("consecutive loop vertices {0} and {1} coincide")]
    RepeatedVertex(usize, usize),
}

impl GeomError {
    pub fn reason(&self) -> &'static str {
        match self {
            GeomError::PointOnLoop => "PointOnLoop",
            GeomError::DegenerateSegment => "DegenerateSegment",
            GeomError::TooFewVertices(_) => "TooFewVertices",
            GeomError::RepeatedVertex(..) => "RepeatedVertex",
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatPoint {
    pub x: Rat,
    pub y: Rat,
}

impl RatPoint {
    pub fn new(x: Rat, y: Rat) -> Self {
        RatPoint { x, y }
    }

    pub fn ints(x: i64, y: i64) -> Self {
        RatPoint::new(int(x), int(y))
    }

    pub fn origin() -> Self {
        RatPoint::new(Rat::zero(), Rat::zero())
    }

    pub fn scale(&self, k: &Rat) -> RatPoint {
        RatPoint::new(&self.x * k, &self.y * k)
    }

    /// `self + t * (other - self)`.
    pub fn lerp(&self, other: &RatPoint, t: &Rat) -> RatPoint {
        RatPoint::new(
            &self.x + (&other.x - &self.x) * t,
            &self.y + (&other.y - &self.y) * t,
        )
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (to_f64(&self.x), to_f64(&self.y))
    }
}

impl fmt::Debug for RatPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl<'a> Sub<&'a RatPoint> for &'a RatPoint {
    type Output = RatPoint;
    fn sub(self, o: &'a RatPoint) -> RatPoint {
        RatPoint::new(&self.x - &o.x, &self.y - &o.y)
    }
}

impl<'a> Add<&'a RatPoint> for &'a RatPoint {
    type Output = RatPoint;
    fn add(self, o: &'a RatPoint) -> RatPoint {
        RatPoint::new(&self.x + &o.x, &self.y + &o.y)
    }
}

impl<'a> Mul<&'a Rat> for &'a RatPoint {
    type Output = RatPoint;
    fn mul(self, k: &'a Rat) -> RatPoint {
        self.scale(k)
    }
}

/// z-component of the cross product `u x v`.
pub fn cross(u: &RatPoint, v: &RatPoint) -> Rat {
    &u.x * &v.y - &u.y * &v.x
}

pub fn dot(u: &RatPoint, v: &RatPoint) -> Rat {
    &u.x * &v.x + &u.y * &v.y
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub a: RatPoint,
    pub b: RatPoint,
}

impl Segment {
    pub fn new(a: RatPoint, b: RatPoint) -> Result<Self, GeomError> {
        if a == b {
            return Err(GeomError::DegenerateSegment);
        }
        Ok(Segment { a, b })
    }

    pub fn contains(&self, p: &RatPoint) -> bool {
        point_on_segment(&self.a, &self.b, p)
    }
}

/// A closed polygonal loop. Consecutive vertices (cyclically) are distinct.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PLLoop {
    vertices: Vec<RatPoint>,
}

impl PLLoop {
    pub fn new(vertices: Vec<RatPoint>) -> Result<Self, GeomError> {
        let n = vertices.len();
        if n < 3 {
            return Err(GeomError::TooFewVertices(n));
        }
        for i in 0..n {
            let j = (i + 1) % n;
            if vertices[i] == vertices[j] {
                return Err(GeomError::RepeatedVertex(i, j));
            }
        }
        Ok(PLLoop { vertices })
    }

    /// Builds a loop from arbitrary samples, dropping consecutive repeats.
    ///
    /// The result may have fewer than 3 vertices (a loop that collapsed to a
    /// point or a back-and-forth segment); winding is still well defined.
    pub fn from_samples(samples: Vec<RatPoint>) -> Self {
        let mut vertices: Vec<RatPoint> = Vec::with_capacity(samples.len());
        for p in samples {
            if vertices.last() != Some(&p) {
                vertices.push(p);
            }
        }
        while vertices.len() > 1 && vertices.first() == vertices.last() {
            vertices.pop();
        }
        PLLoop { vertices }
    }

    pub fn vertices(&self) -> &[RatPoint] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Edges as (start, end) pairs, including the closing edge.
    pub fn edges(&self) -> impl Iterator<Item = (&RatPoint, &RatPoint)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (&self.vertices[i], &self.vertices[(i + 1) % n]))
    }

    pub fn reversed(&self) -> PLLoop {
        let mut v = self.vertices.clone();
        v.reverse();
        PLLoop { vertices: v }
    }

    pub fn map(&self, f: impl Fn(&RatPoint) -> RatPoint) -> PLLoop {
        PLLoop::from_samples(self.vertices.iter().map(f).collect())
    }
}

/// Sign of twice the signed area of triangle `abc`.
pub fn orient2d(a: &RatPoint, b: &RatPoint, c: &RatPoint) -> i32 {
    sign(&cross(&(b - a), &(c - a)))
}

/// True iff `p` lies on the closed segment `ab`.
pub fn point_on_segment(a: &RatPoint, b: &RatPoint, p: &RatPoint) -> bool {
    if orient2d(a, b, p) != 0 {
        return false;
    }
    let (lox, hix) = span(&a.x, &b.x);
    let (loy, hiy) = span(&a.y, &b.y);
    lox <= &p.x && &p.x <= hix && loy <= &p.y && &p.y <= hiy
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SegmentIntersection {
    Empty,
    ProperPoint(RatPoint),
    Degenerate,
}

fn span<'a>(a: &'a Rat, b: &'a Rat) -> (&'a Rat, &'a Rat) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

fn boxes_disjoint(s: &Segment, t: &Segment) -> bool {
    let (sx0, sx1) = span(&s.a.x, &s.b.x);
    let (tx0, tx1) = span(&t.a.x, &t.b.x);
    if sx1 < tx0 || tx1 < sx0 {
        return true;
    }
    let (sy0, sy1) = span(&s.a.y, &s.b.y);
    let (ty0, ty1) = span(&t.a.y, &t.b.y);
    sy1 < ty0 || ty1 < sy0
}

pub fn segment_intersection(s: &Segment, t: &Segment) -> SegmentIntersection {
    if boxes_disjoint(s, t) {
        return SegmentIntersection::Empty;
    }
    let d1 = orient2d(&t.a, &t.b, &s.a);
    let d2 = orient2d(&t.a, &t.b, &s.b);
    let d3 = orient2d(&s.a, &s.b, &t.a);
    let d4 = orient2d(&s.a, &s.b, &t.b);
    if d1 * d2 < 0 && d3 * d4 < 0 {
        let r = &s.b - &s.a;
        let q = &t.b - &t.a;
        let lambda = cross(&(&t.a - &s.a), &q) / cross(&r, &q);
        return SegmentIntersection::ProperPoint(s.a.lerp(&s.b, &lambda));
    }
    let touches = (d1 == 0 && t.contains(&s.a))
        || (d2 == 0 && t.contains(&s.b))
        || (d3 == 0 && s.contains(&t.a))
        || (d4 == 0 && s.contains(&t.b));
    if touches {
        SegmentIntersection::Degenerate
    } else {
        SegmentIntersection::Empty
    }
}

/// Winding number of a closed vertex cycle around `p`.
///
/// Works for any cycle, including ones with fewer than 3 vertices.
pub fn winding_of_cycle(vertices: &[RatPoint], p: &RatPoint) -> Result<i64, GeomError> {
    let n = vertices.len();
    if n == 0 {
        return Ok(0);
    }
    if n == 1 {
        return if &vertices[0] == p { Err(GeomError::PointOnLoop) } else { Ok(0) };
    }
    let mut w = 0i64;
    for i in 0..n {
        let a = &vertices[i];
        let b = &vertices[(i + 1) % n];
        // Edges strictly above or below p neither contain it nor cross its ray.
        if (a.y > p.y && b.y > p.y) || (a.y < p.y && b.y < p.y) {
            continue;
        }
        let o = orient2d(a, b, p);
        if o == 0 && point_on_segment(a, b, p) {
            return Err(GeomError::PointOnLoop);
        }
        if a.y <= p.y {
            if b.y > p.y && o > 0 {
                w += 1;
            }
        } else if b.y <= p.y && o < 0 {
            w -= 1;
        }
    }
    Ok(w)
}

pub fn winding_number(lp: &PLLoop, p: &RatPoint) -> Result<i64, GeomError> {
    winding_of_cycle(lp.vertices(), p)
}

/// Shoelace area; positive for counterclockwise loops.
pub fn signed_area(lp: &PLLoop) -> Rat {
    let mut acc = Rat::zero();
    for (a, b) in lp.edges() {
        acc += cross(a, b);
    }
    acc / int(2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Location {
    Inside,
    Outside,
    OnBoundary,
}

pub fn point_in_polygon(lp: &PLLoop, p: &RatPoint) -> Location {
    match winding_number(lp, p) {
        Err(_) => Location::OnBoundary,
        Ok(0) => Location::Outside,
        Ok(_) => Location::Inside,
    }
}

/// Midpoint of two rationals.
pub fn mid(a: &Rat, b: &Rat) -> Rat {
    (a + b) / int(2)
}

/// Floor of a rational as a big integer.
pub fn floor(r: &Rat) -> BigInt {
    r.floor().to_integer()
}

/// Fractional part in `[0, 1)`.
pub fn frac(r: &Rat) -> Rat {
    r - r.floor()
}

pub fn one() -> Rat {
    Rat::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sq() -> PLLoop {
        PLLoop::new(vec![
            RatPoint::ints(0, 0),
            RatPoint::ints(1, 0),
            RatPoint::ints(1, 1),
            RatPoint::ints(0, 1),
        ])
        .unwrap()
    }

    fn half() -> Rat {
        rat(1, 2)
    }

    #[test]
    fn orient_examples() {
        let (o, x, y) = (RatPoint::ints(0, 0), RatPoint::ints(1, 0), RatPoint::ints(0, 1));
        assert_eq!(orient2d(&o, &x, &y), 1);
        assert_eq!(orient2d(&o, &x, &RatPoint::ints(2, 0)), 0);
        assert_eq!(orient2d(&o, &y, &x), -1);
    }

    #[test]
    fn segment_examples() {
        let s = |a: (i64, i64), b: (i64, i64)| {
            Segment::new(RatPoint::ints(a.0, a.1), RatPoint::ints(b.0, b.1)).unwrap()
        };
        assert_eq!(
            segment_intersection(&s((0, -1), (0, 1)), &s((-1, 0), (1, 0))),
            SegmentIntersection::ProperPoint(RatPoint::origin())
        );
        assert_eq!(
            segment_intersection(&s((0, 0), (1, 0)), &s((2, 0), (3, 0))),
            SegmentIntersection::Empty
        );
        assert_eq!(
            segment_intersection(&s((0, 0), (1, 1)), &s((1, 1), (2, 0))),
            SegmentIntersection::Degenerate
        );
        assert_eq!(
            segment_intersection(&s((0, 0), (2, 0)), &s((1, 0), (3, 0))),
            SegmentIntersection::Degenerate
        );
        assert_eq!(
            segment_intersection(&s((0, 0), (2, 0)), &s((1, 0), (1, 5))),
            SegmentIntersection::Degenerate
        );
    }

    #[test]
    fn degenerate_segment_rejected() {
        assert_eq!(
            Segment::new(RatPoint::ints(1, 1), RatPoint::ints(1, 1)),
            Err(GeomError::DegenerateSegment)
        );
    }

    #[test]
    fn winding_examples() {
        let c = RatPoint::new(half(), half());
        assert_eq!(winding_number(&sq(), &c), Ok(1));
        assert_eq!(winding_number(&sq(), &RatPoint::ints(2, 2)), Ok(0));
        assert_eq!(winding_number(&sq().reversed(), &c), Ok(-1));
        let mut twice = sq().vertices().to_vec();
        twice.extend(sq().vertices().iter().cloned());
        assert_eq!(winding_of_cycle(&twice, &c), Ok(2));
        assert_eq!(winding_number(&sq(), &RatPoint::new(int(1), half())), Err(GeomError::PointOnLoop));
    }

    #[test]
    fn ray_through_vertex() {
        // Ray from (1/2, 1) grazes the apex of the triangle (1,1) only once.
        let diamond = PLLoop::new(vec![
            RatPoint::ints(0, 0),
            RatPoint::ints(2, 1),
            RatPoint::ints(0, 2),
            RatPoint::ints(-2, 1),
        ])
        .unwrap();
        assert_eq!(winding_number(&diamond, &RatPoint::new(half(), int(1))), Ok(1));
        assert_eq!(winding_number(&diamond, &RatPoint::new(int(-3), int(1))), Ok(0));
        assert_eq!(winding_number(&diamond, &RatPoint::new(int(-1), int(0))), Ok(0));
    }

    #[test]
    fn area_examples() {
        assert_eq!(signed_area(&sq()), int(1));
        assert_eq!(signed_area(&sq().reversed()), int(-1));
        let tri = PLLoop::new(vec![RatPoint::ints(0, 0), RatPoint::ints(2, 0), RatPoint::ints(0, 2)]).unwrap();
        assert_eq!(signed_area(&tri), int(2));
    }

    #[test]
    fn pip_examples() {
        assert_eq!(point_in_polygon(&sq(), &RatPoint::new(half(), half())), Location::Inside);
        assert_eq!(point_in_polygon(&sq(), &RatPoint::ints(2, 0)), Location::Outside);
        assert_eq!(point_in_polygon(&sq(), &RatPoint::new(int(1), half())), Location::OnBoundary);
    }

    #[test]
    fn loop_validation() {
        assert_eq!(PLLoop::new(vec![RatPoint::ints(0, 0), RatPoint::ints(1, 0)]), Err(GeomError::TooFewVertices(2)));
        assert_eq!(
            PLLoop::new(vec![RatPoint::ints(0, 0), RatPoint::ints(1, 0), RatPoint::ints(0, 0)]),
            Err(GeomError::RepeatedVertex(2, 0))
        );
        let collapsed = PLLoop::from_samples(vec![RatPoint::ints(3, 3); 5]);
        assert_eq!(collapsed.len(), 1);
        assert_eq!(winding_number(&collapsed, &RatPoint::origin()), Ok(0));
    }
}
