//! Planar subdivision induced by a transverse pair of curves.
//!
//! Vertices are the crossings, edges are the boundary arcs between
//! consecutive crossings, and faces are traced as half-edge cycles. Labels are
//! derived combinatorially from the crossing kinds and then cross-checked
//! against exact point classification of an interior sample point.

use num_traits::{Signed, Zero};

use super::{check_transverse, in_open_arc, CrossingKind, CrossingSet, JordanError, PolyJordanCurve};
use crate::exact_geom::{cross, dot, int, point_in_polygon, Location, Rat, RatPoint};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ArcCurve {
    K,
    Kt,
}

/// Boundary piece of one curve between two consecutive crossings.
#[derive(Clone, Debug)]
pub struct Arc {
    pub curve: ArcCurve,
    pub points: Vec<RatPoint>,
    pub start: usize,
    pub end: usize,
    /// Whether the arc lies inside the other curve's domain.
    pub inside_other: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HalfEdge {
    pub arc: usize,
    pub forward: bool,
}

#[derive(Clone, Debug)]
pub struct ArrangementFace {
    pub id: usize,
    pub boundary: Vec<HalfEdge>,
    pub in_k: bool,
    pub in_kt: bool,
    pub sample_point: RatPoint,
    pub unbounded: bool,
}

#[derive(Clone, Debug)]
pub struct Arrangement {
    pub arcs: Vec<Arc>,
    pub faces: Vec<ArrangementFace>,
}

impl Arrangement {
    pub fn count(&self, in_k: bool, in_kt: bool) -> usize {
        self.faces.iter().filter(|f| f.in_k == in_k && f.in_kt == in_kt).count()
    }

    pub fn face_polygon(&self, f: &ArrangementFace) -> Vec<RatPoint> {
        let mut out = Vec::new();
        for h in &f.boundary {
            let pts = &self.arcs[h.arc].points;
            if h.forward {
                out.extend(pts[..pts.len() - 1].iter().cloned());
            } else {
                out.extend(pts[1..].iter().rev().cloned());
            }
        }
        out
    }
}

fn half_edge_labels(arc: &Arc, forward: bool) -> (bool, bool) {
    match (arc.curve, forward) {
        (ArcCurve::K, true) => (true, arc.inside_other),
        (ArcCurve::K, false) => (false, arc.inside_other),
        (ArcCurve::Kt, true) => (arc.inside_other, true),
        (ArcCurve::Kt, false) => (arc.inside_other, false),
    }
}

fn arcs_of(
    curve: &PolyJordanCurve,
    which: ArcCurve,
    cs: &CrossingSet,
    order: &[usize],
) -> Vec<Arc> {
    let m = order.len();
    let param = |i: usize| match which {
        ArcCurve::K => &cs.crossings[i].param_k,
        ArcCurve::Kt => &cs.crossings[i].param_kt,
    };
    (0..m)
        .map(|j| {
            let a = order[j];
            let b = order[(j + 1) % m];
            let mut points = vec![cs.crossings[a].point.clone()];
            let between = curve.vertices_between(param(a), param(b));
            points.extend(between.into_iter().map(|v| curve.vertex(v).clone()));
            points.push(cs.crossings[b].point.clone());
            let start_kind = cs.crossings[a].kind;
            let inside_other = match which {
                ArcCurve::K => start_kind == CrossingKind::P,
                ArcCurve::Kt => start_kind == CrossingKind::Ptilde,
            };
            Arc { curve: which, points, start: a, end: b, inside_other }
        })
        .collect()
}

fn perp_left(d: &RatPoint) -> RatPoint {
    RatPoint::new(-d.y.clone(), d.x.clone())
}

/// Smallest positive ray parameter at which `m + s * n` meets segment `ab`.
fn ray_hit(m: &RatPoint, n: &RatPoint, a: &RatPoint, b: &RatPoint) -> Option<Rat> {
    let e = b - a;
    let am = a - m;
    let denom = cross(n, &e);
    if !denom.is_zero() {
        let s = cross(&am, &e) / &denom;
        let lam = cross(&am, n) / &denom;
        if s.is_positive() && !lam.is_negative() && lam <= int(1) {
            return Some(s);
        }
        return None;
    }
    if !cross(&am, n).is_zero() {
        return None;
    }
    let nn = dot(n, n);
    let sa = dot(&am, n) / &nn;
    let sb = dot(&(b - m), n) / &nn;
    [sa, sb].into_iter().filter(|s| s.is_positive()).min()
}

/// A point strictly inside the face to the left of the directed segment `pq`.
fn sample_left(p: &RatPoint, q: &RatPoint, segments: &[(RatPoint, RatPoint)]) -> RatPoint {
    let m = RatPoint::new((&p.x + &q.x) / int(2), (&p.y + &q.y) / int(2));
    let n = perp_left(&(q - p));
    let hit = segments
        .iter()
        .filter(|(a, b)| !(a == p && b == q))
        .filter_map(|(a, b)| ray_hit(&m, &n, a, b))
        .min();
    let s = match hit {
        Some(s) => s / int(2),
        None => int(1),
    };
    &m + &n.scale(&s)
}

fn all_segments(k: &PolyJordanCurve, kt: &PolyJordanCurve) -> Vec<(RatPoint, RatPoint)> {
    let mut segs = Vec::new();
    for c in [k, kt] {
        for i in 0..c.n() {
            segs.push((c.vertex(i).clone(), c.vertex(i + 1).clone()));
        }
    }
    segs
}

fn check_sample(k: &PolyJordanCurve, kt: &PolyJordanCurve, f: &ArrangementFace) -> Result<(), JordanError> {
    let ik = point_in_polygon(k.as_loop(), &f.sample_point);
    let ikt = point_in_polygon(kt.as_loop(), &f.sample_point);
    let ok = ik != Location::OnBoundary
        && ikt != Location::OnBoundary
        && (ik == Location::Inside) == f.in_k
        && (ikt == Location::Inside) == f.in_kt;
    if ok {
        Ok(())
    } else {
        Err(JordanError::Arrangement(format!("face {} sample {:?} misclassified", f.id, f.sample_point)))
    }
}

fn no_crossing_faces(k: &PolyJordanCurve, kt: &PolyJordanCurve) -> Result<Vec<ArrangementFace>, JordanError> {
    let segs = all_segments(k, kt);
    let k_in_kt = point_in_polygon(kt.as_loop(), k.vertex(0)) == Location::Inside;
    let kt_in_k = point_in_polygon(k.as_loop(), kt.vertex(0)) == Location::Inside;
    let left = |c: &PolyJordanCurve| sample_left(c.vertex(0), c.vertex(1), &segs);
    let right = |c: &PolyJordanCurve| sample_left(c.vertex(1), c.vertex(0), &segs);
    let labels: Vec<(bool, bool, RatPoint)> = if k_in_kt {
        vec![(true, true, left(k)), (false, true, right(k))]
    } else if kt_in_k {
        vec![(true, true, left(kt)), (true, false, right(kt))]
    } else {
        vec![(true, false, left(k)), (false, true, left(kt))]
    };
    let mut faces: Vec<ArrangementFace> = labels
        .into_iter()
        .enumerate()
        .map(|(id, (in_k, in_kt, sample_point))| ArrangementFace {
            id,
            boundary: Vec::new(),
            in_k,
            in_kt,
            sample_point,
            unbounded: false,
        })
        .collect();
    let outer = if k_in_kt { right(kt) } else { right(k) };
    faces.push(ArrangementFace {
        id: faces.len(),
        boundary: Vec::new(),
        in_k: false,
        in_kt: false,
        sample_point: outer,
        unbounded: true,
    });
    for f in &faces {
        check_sample(k, kt, f)?;
    }
    Ok(faces)
}

/// Builds the face structure of the overlay of two transverse curves.
pub fn build_arrangement(
    k: &PolyJordanCurve,
    kt: &PolyJordanCurve,
    cs: &CrossingSet,
) -> Result<Arrangement, JordanError> {
    if cs.is_empty() {
        return Ok(Arrangement { arcs: Vec::new(), faces: no_crossing_faces(k, kt)? });
    }
    let m = cs.len();
    let k_order: Vec<usize> = (0..m).collect();
    let kt_order = cs.order_along_kt();
    let mut arcs = arcs_of(k, ArcCurve::K, cs, &k_order);
    arcs.extend(arcs_of(kt, ArcCurve::Kt, cs, &kt_order));

    // Outgoing half-edges at each crossing, in counterclockwise order.
    let mut k_start = vec![0; m];
    let mut k_end = vec![0; m];
    let mut t_start = vec![0; m];
    let mut t_end = vec![0; m];
    for (a, arc) in arcs.iter().enumerate() {
        match arc.curve {
            ArcCurve::K => {
                k_start[arc.start] = a;
                k_end[arc.end] = a;
            }
            ArcCurve::Kt => {
                t_start[arc.start] = a;
                t_end[arc.end] = a;
            }
        }
    }
    let out: Vec<[HalfEdge; 4]> = (0..m)
        .map(|c| {
            let ku = HalfEdge { arc: k_start[c], forward: true };
            let kb = HalfEdge { arc: k_end[c], forward: false };
            let tu = HalfEdge { arc: t_start[c], forward: true };
            let tb = HalfEdge { arc: t_end[c], forward: false };
            let u = &arcs[ku.arc].points[1] - &arcs[ku.arc].points[0];
            let v = &arcs[tu.arc].points[1] - &arcs[tu.arc].points[0];
            if cross(&u, &v).is_positive() {
                [ku, tu, kb, tb]
            } else {
                [ku, tb, kb, tu]
            }
        })
        .collect();
    let head = |h: HalfEdge| if h.forward { arcs[h.arc].end } else { arcs[h.arc].start };
    let next = |h: HalfEdge| {
        let w = head(h);
        let twin = HalfEdge { arc: h.arc, forward: !h.forward };
        let k = out[w].iter().position(|&o| o == twin).expect("twin is outgoing at head");
        out[w][(k + 3) % 4]
    };

    let segs = all_segments(k, kt);
    let mut seen = vec![[false; 2]; arcs.len()];
    let mut faces = Vec::new();
    let mut arr = Arrangement { arcs: Vec::new(), faces: Vec::new() };
    for a in 0..arcs.len() {
        for fw in [true, false] {
            if seen[a][fw as usize] {
                continue;
            }
            let start = HalfEdge { arc: a, forward: fw };
            let mut cycle = Vec::new();
            let mut h = start;
            loop {
                seen[h.arc][h.forward as usize] = true;
                cycle.push(h);
                h = next(h);
                if h == start {
                    break;
                }
                if cycle.len() > 2 * arcs.len() {
                    return Err(JordanError::Arrangement("half-edge cycle does not close".into()));
                }
            }
            let (in_k, in_kt) = half_edge_labels(&arcs[a], fw);
            for h in &cycle {
                if half_edge_labels(&arcs[h.arc], h.forward) != (in_k, in_kt) {
                    return Err(JordanError::Arrangement("inconsistent face labels".into()));
                }
            }
            let pts = &arcs[a].points;
            let (p, q) = if fw { (&pts[0], &pts[1]) } else { (&pts[pts.len() - 1], &pts[pts.len() - 2]) };
            let sample_point = sample_left(p, q, &segs);
            faces.push(ArrangementFace {
                id: faces.len(),
                boundary: cycle,
                in_k,
                in_kt,
                sample_point,
                unbounded: false,
            });
        }
    }
    arr.arcs = arcs;
    for f in &mut faces {
        let poly = arr.face_polygon(f);
        let mut area = Rat::zero();
        for i in 0..poly.len() {
            area += cross(&poly[i], &poly[(i + 1) % poly.len()]);
        }
        f.unbounded = area.is_negative();
    }
    let v = m as i64;
    let e = arr.arcs.len() as i64;
    let nf = faces.len() as i64;
    if v - e + nf != 2 {
        return Err(JordanError::Arrangement(format!("Euler check failed: V={v} E={e} F={nf}")));
    }
    if faces.iter().filter(|f| f.unbounded).count() != 1 {
        return Err(JordanError::Arrangement("expected exactly one unbounded face".into()));
    }
    for f in &faces {
        check_sample(k, kt, f)?;
    }
    arr.faces = faces;
    Ok(arr)
}

/// Whether `K \ K̃` or `K̃ \ K` has more than one component.
pub fn cuts_each_other(k: &PolyJordanCurve, kt: &PolyJordanCurve) -> Result<bool, JordanError> {
    let cs = check_transverse(k, kt)?;
    let arr = build_arrangement(k, kt, &cs)?;
    Ok(arr.count(true, false) > 1 || arr.count(false, true) > 1)
}

/// Whether parameter `t` lies on an arc of `curve` that is inside the other domain.
pub fn param_inside_other(cs: &CrossingSet, t: &Rat, along_k: bool) -> Option<bool> {
    if cs.is_empty() {
        return None;
    }
    let order: Vec<usize> = if along_k { (0..cs.len()).collect() } else { cs.order_along_kt() };
    let param = |i: usize| if along_k { &cs.crossings[i].param_k } else { &cs.crossings[i].param_kt };
    let m = order.len();
    for j in 0..m {
        let a = order[j];
        let b = order[(j + 1) % m];
        if in_open_arc(param(a), param(b), t) {
            let kind = cs.crossings[a].kind;
            return Some(if along_k { kind == CrossingKind::P } else { kind == CrossingKind::Ptilde });
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sq(x: i64, y: i64, w: i64, h: i64) -> PolyJordanCurve {
        PolyJordanCurve::from_ints(&[(x, y), (x + w, y), (x + w, y + h), (x, y + h)]).unwrap()
    }

    fn labels(k: &PolyJordanCurve, kt: &PolyJordanCurve) -> Vec<(bool, bool)> {
        let cs = check_transverse(k, kt).unwrap();
        let mut l: Vec<(bool, bool)> =
            build_arrangement(k, kt, &cs).unwrap().faces.iter().map(|f| (f.in_k, f.in_kt)).collect();
        l.sort();
        l
    }

    #[test]
    fn lens_faces() {
        assert_eq!(
            labels(&sq(0, 0, 2, 2), &sq(1, 1, 2, 2)),
            vec![(false, false), (false, true), (true, false), (true, true)]
        );
        assert!(!cuts_each_other(&sq(0, 0, 2, 2), &sq(1, 1, 2, 2)).unwrap());
    }

    #[test]
    fn zero_crossing_faces() {
        assert_eq!(labels(&sq(0, 0, 1, 1), &sq(3, 0, 1, 1)), vec![(false, false), (false, true), (true, false)]);
        assert_eq!(labels(&sq(1, 1, 1, 1), &sq(0, 0, 4, 4)), vec![(false, false), (false, true), (true, true)]);
        assert_eq!(labels(&sq(0, 0, 4, 4), &sq(1, 1, 1, 1)), vec![(false, false), (true, false), (true, true)]);
    }

    #[test]
    fn plus_sign_cuts() {
        let h = sq(0, 2, 6, 2);
        let v = sq(2, 0, 2, 6);
        let cs = check_transverse(&h, &v).unwrap();
        assert_eq!(cs.len(), 4);
        assert!(cuts_each_other(&h, &v).unwrap());
        assert!(cuts_each_other(&v, &h).unwrap());
        let arr = build_arrangement(&h, &v, &cs).unwrap();
        assert_eq!(arr.count(true, false), 2);
        assert_eq!(arr.count(false, true), 2);
        assert_eq!(arr.faces.iter().filter(|f| f.unbounded).count(), 1);
    }
}
