//! A concrete non-cutting pair with any even number of crossings.

use super::PolyJordanCurve;
use crate::exact_geom::{int, rat, Rat, RatPoint};

/// Rational points on the unit circle, `t = tan(θ/2)`, sweeping -90° to 90°.
const HALF_DISK_T: [(i64, i64); 9] = [(-1, 1), (-2, 3), (-2, 5), (-1, 5), (0, 1), (1, 5), (2, 5), (2, 3), (1, 1)];

fn circle_point(t: &Rat) -> RatPoint {
    let t2 = t * t;
    let d = int(1) + &t2;
    RatPoint::new((int(1) - &t2) / &d, (int(2) * t) / &d)
}

/// K is the rectangle `[0,4] x [0,3m]`; K̃ sits to its left and pokes `m`
/// half-disk bumps of radius 1 through K's left side, two crossings each.
pub fn canonical_noncut_pair(m: usize) -> (PolyJordanCurve, PolyJordanCurve) {
    assert!(m >= 1, "need at least one bump");
    let h = 3 * m as i64;
    let k = PolyJordanCurve::from_ints(&[(0, 0), (4, 0), (4, h), (0, h)]).expect("rectangle is valid");

    let x0 = rat(-1, 2);
    let mut pts = vec![RatPoint::new(x0.clone(), int(-1))];
    for j in 0..m as i64 {
        let cy = rat(6 * j + 3, 2);
        for &(n, d) in &HALF_DISK_T {
            let c = circle_point(&rat(n, d));
            pts.push(RatPoint::new(&x0 + &c.x, &cy + &c.y));
        }
    }
    pts.push(RatPoint::new(x0, int(h + 1)));
    pts.push(RatPoint::ints(-3, h + 1));
    pts.push(RatPoint::ints(-3, -1));
    let kt = super::validate_curve(pts, false).expect("bump curve is valid");
    (k, kt)
}
