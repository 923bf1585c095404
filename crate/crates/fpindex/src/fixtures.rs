//! Hand-built inputs with known answers.

use crate::exact_geom::{int, rat, Rat, RatPoint};
use crate::jordan::{canonical_noncut_pair, PolyJordanCurve};
use crate::packing::{PackingSpec, TopoRectangle};
use crate::plmap::PLCorrespondence;

fn curve(pts: &[(i64, i64)]) -> PolyJordanCurve {
    PolyJordanCurve::from_ints(pts).expect("fixture curve is valid")
}

/// Two disjoint unit squares with the vertex-to-vertex map: index 0.
pub fn fig1() -> (PolyJordanCurve, PolyJordanCurve, PLCorrespondence) {
    let k = curve(&[(0, 0), (2, 0), (2, 2), (0, 2)]);
    let kt = curve(&[(5, 1), (7, 1), (7, 3), (5, 3)]);
    (k, kt, PLCorrespondence::identity())
}

/// A tall rectangle over a wide one, corners to corners: index −1.
pub fn fig2() -> (PolyJordanCurve, PolyJordanCurve, PLCorrespondence) {
    let k = curve(&[(1, -3), (5, -3), (5, 3), (1, 3)]);
    let kt = curve(&[(0, -2), (6, -2), (6, 2), (0, 2)]);
    (k, kt, PLCorrespondence::identity())
}

/// The four corner parameters of both curves in [`fig2`].
pub fn fig2_corners() -> Vec<Rat> {
    (0..4).map(|i| rat(i, 4)).collect()
}

/// The two-bump non-cutting pair with three constraints on each curve.
pub fn two_bump() -> (PolyJordanCurve, PolyJordanCurve, Vec<Rat>, Vec<Rat>) {
    let (k, kt) = canonical_noncut_pair(2);
    let z = vec![rat(0, 1), rat(1, 4), rat(1, 2)];
    let zt = vec![rat(19, 22), rat(20, 22), rat(21, 22)];
    (k, kt, z, zt)
}

/// The same pair with constraints that need one reinsertion step.
pub fn two_bump_boxed() -> (PolyJordanCurve, PolyJordanCurve, Vec<Rat>, Vec<Rat>) {
    let (k, kt) = canonical_noncut_pair(2);
    let z = vec![rat(1, 32), rat(3, 32), rat(25, 32)];
    let zt = vec![rat(0, 1), rat(1, 22), rat(3, 22)];
    (k, kt, z, zt)
}

/// Axis-parallel rectangle `[x0,x1] x [y0,y1]` whose boundary also passes
/// through `extra` (points on its sides), corners first at bottom-right.
fn rect_with(x0: i64, x1: i64, y0: i64, y1: i64, extra: &[(i64, i64)]) -> TopoRectangle {
    let mut right: Vec<i64> = extra.iter().filter(|p| p.0 == x1).map(|p| p.1).collect();
    let mut top: Vec<i64> = extra.iter().filter(|p| p.1 == y1).map(|p| p.0).collect();
    let mut left: Vec<i64> = extra.iter().filter(|p| p.0 == x0).map(|p| p.1).collect();
    let mut bottom: Vec<i64> = extra.iter().filter(|p| p.1 == y0).map(|p| p.0).collect();
    right.sort();
    top.sort_by(|a, b| b.cmp(a));
    left.sort_by(|a, b| b.cmp(a));
    bottom.sort();
    let mut pts = Vec::new();
    let mut corners = [0; 4];
    corners[0] = pts.len();
    pts.push((x1, y0));
    pts.extend(right.iter().map(|&y| (x1, y)));
    corners[1] = pts.len();
    pts.push((x1, y1));
    pts.extend(top.iter().map(|&x| (x, y1)));
    corners[2] = pts.len();
    pts.push((x0, y1));
    pts.extend(left.iter().map(|&y| (x0, y)));
    corners[3] = pts.len();
    pts.push((x0, y0));
    pts.extend(bottom.iter().map(|&x| (x, y0)));
    TopoRectangle::new(curve(&pts), corners).expect("fixture rectangle is valid")
}

/// `n` diamonds in a row, each touching the top and bottom of the rectangle
/// and its neighbours; the outer two also touch the left and right sides.
///
/// Each diamond is `w` wide and `h` tall, centred on the x-axis.
pub fn diamond_row(n: usize, w: i64, h: i64) -> PackingSpec {
    assert!(n >= 1 && w % 2 == 0 && h % 2 == 0);
    let (hw, hh) = (w / 2, h / 2);
    let total = w * n as i64;
    let x0 = -total / 2;
    let mut pieces = Vec::new();
    let mut extra = vec![(x0, 0), (x0 + total, 0)];
    for i in 0..n as i64 {
        let cx = x0 + hw + w * i;
        pieces.push(curve(&[(cx - hw, 0), (cx, -hh), (cx + hw, 0), (cx, hh)]));
        extra.push((cx, hh));
        extra.push((cx, -hh));
    }
    let rect = rect_with(x0, x0 + total, -hh, hh, &extra);
    PackingSpec { rect, pieces }
}

/// Overlay shift that keeps the fixtures below in general position.
pub fn overlay_shift() -> RatPoint {
    RatPoint::new(rat(1, 3), rat(1, 5))
}

/// Two stout diamonds in a wide rectangle over two thin tall diamonds in a
/// tall one. The middle pieces of a row always cut.
pub fn overlay_two() -> (PackingSpec, PackingSpec) {
    let a = diamond_row(2, 4, 4);
    let b = diamond_row(2, 2, 12).translated(&overlay_shift()).expect("translation is valid");
    (a, b)
}

/// Three-piece version of [`overlay_two`].
pub fn overlay_three() -> (PackingSpec, PackingSpec) {
    let a = diamond_row(3, 4, 4);
    let b = diamond_row(3, 2, 18).translated(&overlay_shift()).expect("translation is valid");
    (a, b)
}

/// The empty packings of the two rectangles in [`fig2`], crossing in the
/// interleaved way.
pub fn overlay_empty() -> (PackingSpec, PackingSpec) {
    let (k, kt, _) = fig2();
    let r = TopoRectangle::new(kt, [1, 2, 3, 0]).expect("valid");
    let rt = TopoRectangle::new(k, [1, 2, 3, 0]).expect("valid");
    (PackingSpec { rect: r, pieces: vec![] }, PackingSpec { rect: rt, pieces: vec![] })
}

/// Moves `p` far to the right of everything in the fixtures.
pub fn far_away(p: &PackingSpec) -> PackingSpec {
    p.translated(&RatPoint::new(int(1000), rat(1, 7))).expect("translation is valid")
}
