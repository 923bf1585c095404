//! Polygonal Jordan curves and transverse pairs of them.

mod arrangement;
mod canonical;
pub mod meander;

pub use arrangement::{build_arrangement, cuts_each_other, param_inside_other, Arc, ArcCurve, Arrangement, ArrangementFace, HalfEdge};
pub use canonical::canonical_noncut_pair;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exact_geom::{
    cross, floor, frac, int, orient2d, point_on_segment, segment_intersection, signed_area, GeomError, PLLoop,
    Rat, RatPoint, Segment, SegmentIntersection,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum JordanError {
    #[error("edges {0} and {1} intersect")]
    NotSimple(usize, usize),
    #[error("curve is negatively oriented")]
    NotPositivelyOriented,
    #[error("edge {k_edge} of K meets edge {kt_edge} of Kt non-transversely")]
    NotTransverse { k_edge: usize, kt_edge: usize },
    #[error("crossing kinds do not alternate")]
    AlternationViolation,
    #[error("arrangement check failed: {0}")]
    Arrangement(String),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

impl JordanError {
    pub fn reason(&self) -> &'static str {
        match self {
            JordanError::NotSimple(..) => "NotSimple",
            JordanError::NotPositivelyOriented => "NotPositivelyOriented",
            JordanError::NotTransverse { .. } => "NotTransverse",
            JordanError::AlternationViolation => "AlternationViolation",
            JordanError::Arrangement(_) => "ArrangementInconsistent",
            JordanError::Geom(g) => g.reason(),
        }
    }
}

/// A simple, counterclockwise polygon.
///
/// Boundary parameters live on the circle `[0, 1)`: vertex `i` of `n` sits at
/// `i / n` and edges are parametrized linearly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyJordanCurve {
    lp: PLLoop,
}

/// Validates a vertex list as a positively oriented simple polygon.
///
/// With `auto_reverse`, a clockwise input is reversed instead of rejected.
pub fn validate_curve(vertices: Vec<RatPoint>, auto_reverse: bool) -> Result<PolyJordanCurve, JordanError> {
    let lp = PLLoop::new(vertices)?;
    check_simple(&lp)?;
    if signed_area(&lp) > Rat::zero() {
        Ok(PolyJordanCurve { lp })
    } else if auto_reverse {
        Ok(PolyJordanCurve { lp: lp.reversed() })
    } else {
        Err(JordanError::NotPositivelyOriented)
    }
}

fn check_simple(lp: &PLLoop) -> Result<(), JordanError> {
    let v = lp.vertices();
    let n = v.len();
    for i in 0..n {
        let a = &v[i];
        let b = &v[(i + 1) % n];
        let c = &v[(i + 2) % n];
        // Adjacent edges may only share their common vertex.
        if orient2d(a, b, c) == 0 && (point_on_segment(a, b, c) || point_on_segment(b, c, a)) {
            return Err(JordanError::NotSimple(i, (i + 1) % n));
        }
    }
    for i in 0..n {
        let s = Segment { a: v[i].clone(), b: v[(i + 1) % n].clone() };
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            let t = Segment { a: v[j].clone(), b: v[(j + 1) % n].clone() };
            if segment_intersection(&s, &t) != SegmentIntersection::Empty {
                return Err(JordanError::NotSimple(i, j));
            }
        }
    }
    Ok(())
}

impl PolyJordanCurve {
    pub fn from_ints(pts: &[(i64, i64)]) -> Result<Self, JordanError> {
        validate_curve(pts.iter().map(|&(x, y)| RatPoint::ints(x, y)).collect(), false)
    }

    pub fn as_loop(&self) -> &PLLoop {
        &self.lp
    }

    pub fn vertices(&self) -> &[RatPoint] {
        self.lp.vertices()
    }

    pub fn n(&self) -> usize {
        self.lp.len()
    }

    pub fn vertex(&self, i: usize) -> &RatPoint {
        &self.lp.vertices()[i % self.n()]
    }

    pub fn segment(&self, i: usize) -> Segment {
        Segment { a: self.vertex(i).clone(), b: self.vertex(i + 1).clone() }
    }

    pub fn vertex_param(&self, i: usize) -> Rat {
        Rat::new((i % self.n()).into(), self.n().into())
    }

    /// Point at parameter `t` (taken mod 1).
    pub fn point_at(&self, t: &Rat) -> RatPoint {
        let n = int(self.n() as i64);
        let s = frac(t) * &n;
        let i: usize = floor(&s).try_into().expect("edge index fits usize");
        let lam = frac(&s);
        self.vertex(i).lerp(self.vertex(i + 1), &lam)
    }

    /// Parameter in `[0, 1)` of a point on edge `i`.
    pub fn param_on_edge(&self, i: usize, p: &RatPoint) -> Rat {
        let a = self.vertex(i);
        let b = self.vertex(i + 1);
        let lam = if a.x != b.x { (&p.x - &a.x) / (&b.x - &a.x) } else { (&p.y - &a.y) / (&b.y - &a.y) };
        (int(i as i64) + lam) / int(self.n() as i64)
    }

    /// Parameter of a boundary point, if it is on the curve.
    pub fn param_of(&self, p: &RatPoint) -> Option<Rat> {
        (0..self.n())
            .find(|&i| point_on_segment(self.vertex(i), self.vertex(i + 1), p))
            .map(|i| frac(&self.param_on_edge(i, p)))
    }

    /// Vertex parameters strictly inside the cyclic interval `(a, b)`, in order.
    pub fn vertices_between(&self, a: &Rat, b: &Rat) -> Vec<usize> {
        let n = self.n();
        let mut out: Vec<usize> = Vec::new();
        let ps: Vec<Rat> = (0..n).map(|i| self.vertex_param(i)).collect();
        if a < b {
            out.extend((0..n).filter(|&i| &ps[i] > a && &ps[i] < b));
        } else {
            out.extend((0..n).filter(|&i| &ps[i] > a));
            out.extend((0..n).filter(|&i| &ps[i] < b));
        }
        out
    }

    pub fn signed_area(&self) -> Rat {
        signed_area(&self.lp)
    }

    pub fn map_points(&self, f: impl Fn(&RatPoint) -> RatPoint) -> Result<Self, JordanError> {
        validate_curve(self.vertices().iter().map(f).collect(), false)
    }

    /// Image under `p -> r p + c`. A positive similarity keeps the curve
    /// simple and counterclockwise, so nothing is rechecked.
    pub fn scaled(&self, r: &Rat, c: &RatPoint) -> Self {
        assert!(r > &Rat::zero(), "scale factor must be positive");
        PolyJordanCurve { lp: self.lp.map(|p| &p.scale(r) + c) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CrossingKind {
    /// ∂K enters K̃.
    P,
    /// ∂K̃ enters K.
    Ptilde,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Crossing {
    pub point: RatPoint,
    pub param_k: Rat,
    pub param_kt: Rat,
    pub kind: CrossingKind,
    pub edge_k: usize,
    pub edge_kt: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CrossingSet {
    /// Sorted by `param_k`.
    pub crossings: Vec<Crossing>,
}

impl CrossingSet {
    pub fn len(&self) -> usize {
        self.crossings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.crossings.is_empty()
    }

    /// Indices into `crossings`, sorted by `param_kt`.
    pub fn order_along_kt(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.sort_by(|&a, &b| self.crossings[a].param_kt.cmp(&self.crossings[b].param_kt));
        idx
    }

    pub fn count(&self, kind: CrossingKind) -> usize {
        self.crossings.iter().filter(|c| c.kind == kind).count()
    }
}

fn alternates(kinds: impl Iterator<Item = CrossingKind>) -> bool {
    let ks: Vec<CrossingKind> = kinds.collect();
    let n = ks.len();
    n.is_multiple_of(2) && (0..n).all(|i| ks[i] != ks[(i + 1) % n])
}

/// Computes all crossings of two curves, requiring every contact to be a
/// proper crossing of edge interiors.
pub fn check_transverse(k: &PolyJordanCurve, kt: &PolyJordanCurve) -> Result<CrossingSet, JordanError> {
    let mut crossings = Vec::new();
    let kt_segs: Vec<Segment> = (0..kt.n()).map(|j| kt.segment(j)).collect();
    for i in 0..k.n() {
        let s = k.segment(i);
        let u = &s.b - &s.a;
        for (j, t) in kt_segs.iter().enumerate() {
            match segment_intersection(&s, t) {
                SegmentIntersection::Empty => {}
                SegmentIntersection::Degenerate => {
                    return Err(JordanError::NotTransverse { k_edge: i, kt_edge: j });
                }
                SegmentIntersection::ProperPoint(p) => {
                    let v = &t.b - &t.a;
                    let kind = if cross(&v, &u) > Rat::zero() { CrossingKind::P } else { CrossingKind::Ptilde };
                    crossings.push(Crossing {
                        param_k: k.param_on_edge(i, &p),
                        param_kt: kt.param_on_edge(j, &p),
                        point: p,
                        kind,
                        edge_k: i,
                        edge_kt: j,
                    });
                }
            }
        }
    }
    crossings.sort_by(|a, b| a.param_k.cmp(&b.param_k));
    let set = CrossingSet { crossings };
    let by_kt = set.order_along_kt();
    if !alternates(set.crossings.iter().map(|c| c.kind))
        || !alternates(by_kt.iter().map(|&i| set.crossings[i].kind))
    {
        return Err(JordanError::AlternationViolation);
    }
    Ok(set)
}

/// True iff `t` lies in the open cyclic interval from `a` to `b` on `[0, 1)`.
pub fn in_open_arc(a: &Rat, b: &Rat, t: &Rat) -> bool {
    if a < b {
        a < t && t < b
    } else {
        t > a || t < b
    }
}

/// Forward distance from `a` to `b` on the unit circle, in `[0, 1)`.
pub fn cyclic_gap(a: &Rat, b: &Rat) -> Rat {
    let d = b - a;
    if d < Rat::zero() {
        d + Rat::one()
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_geom::rat;

    fn square(x: i64, y: i64, s: i64) -> Vec<(i64, i64)> {
        vec![(x, y), (x + s, y), (x + s, y + s), (x, y + s)]
    }

    #[test]
    fn validate_examples() {
        assert!(PolyJordanCurve::from_ints(&square(0, 0, 1)).is_ok());
        let mut cw = square(0, 0, 1);
        cw.reverse();
        assert_eq!(PolyJordanCurve::from_ints(&cw), Err(JordanError::NotPositivelyOriented));
        let rev = validate_curve(cw.iter().map(|&(x, y)| RatPoint::ints(x, y)).collect(), true).unwrap();
        assert!(rev.signed_area() > Rat::zero());
        let bowtie = [(0, 0), (1, 1), (1, 0), (0, 1)];
        assert!(matches!(PolyJordanCurve::from_ints(&bowtie), Err(JordanError::NotSimple(..))));
        let spike = [(0, 0), (2, 0), (1, 0), (1, 1)];
        assert!(matches!(PolyJordanCurve::from_ints(&spike), Err(JordanError::NotSimple(..))));
    }

    #[test]
    fn lens_crossings() {
        let k = PolyJordanCurve::from_ints(&square(0, 0, 2)).unwrap();
        let kt = PolyJordanCurve::from_ints(&square(1, 1, 2)).unwrap();
        let cs = check_transverse(&k, &kt).unwrap();
        assert_eq!(cs.len(), 2);
        assert_eq!(cs.count(CrossingKind::P), 1);
        // ∂K leaves its right side upward at (2,1) into K̃.
        let c0 = cs.crossings.iter().find(|c| c.point == RatPoint::ints(2, 1)).unwrap();
        assert_eq!(c0.kind, CrossingKind::P);
        assert_eq!(c0.param_k, rat(3, 8));
    }

    #[test]
    fn disjoint_and_touching() {
        let k = PolyJordanCurve::from_ints(&square(0, 0, 1)).unwrap();
        let far = PolyJordanCurve::from_ints(&square(5, 5, 1)).unwrap();
        assert!(check_transverse(&k, &far).unwrap().is_empty());
        let adj = PolyJordanCurve::from_ints(&square(1, 0, 1)).unwrap();
        assert!(matches!(check_transverse(&k, &adj), Err(JordanError::NotTransverse { .. })));
    }

    #[test]
    fn params_round_trip() {
        let k = PolyJordanCurve::from_ints(&square(0, 0, 4)).unwrap();
        for t in [rat(0, 1), rat(1, 3), rat(7, 8), rat(5, 4)] {
            let p = k.point_at(&t);
            assert_eq!(k.param_of(&p), Some(frac(&t)));
        }
        assert_eq!(k.vertices_between(&rat(7, 8), &rat(1, 8)), vec![0]);
        assert_eq!(k.vertices_between(&rat(1, 8), &rat(5, 8)), vec![1, 2]);
    }
}
