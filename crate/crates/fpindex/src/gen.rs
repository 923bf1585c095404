//! Seeded random fixtures: circle approximations, star-shaped polygons,
//! monotone correspondences and staircase paths.

use std::sync::OnceLock;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::exact_geom::{int, rat, Rat, RatPoint};
use crate::jordan::{check_transverse, validate_curve, CrossingSet, PolyJordanCurve};
use crate::plmap::{fixed_point_index, PLCorrespondence};
use crate::torus::{Mark, Step, StaircasePath, TorusDiagram};

pub use rand_chacha::ChaCha8Rng as Rng8;

pub fn rng(seed: u64) -> Rng8 {
    use rand::SeedableRng;
    Rng8::seed_from_u64(seed)
}

/// 64 rational points on the unit circle, counterclockwise from (1, 0).
///
/// The first octant uses `t ≈ tan(θ/2)` rounded to 1/1024; the rest follow by
/// the symmetries of the square, so the polygon is close to regular.
pub fn unit_circle_64() -> Vec<RatPoint> {
    let mut oct: Vec<RatPoint> = (0..=8)
        .map(|k| {
            let theta = std::f64::consts::PI * 2.0 * k as f64 / 64.0;
            let t = rat(((theta / 2.0).tan() * 1024.0).round() as i64, 1024);
            let t2 = &t * &t;
            let d = int(1) + &t2;
            RatPoint::new((int(1) - &t2) / &d, (int(2) * &t) / &d)
        })
        .collect();
    // 45°..90° by reflecting in y = x.
    let refl: Vec<RatPoint> = oct[..8].iter().rev().map(|p| RatPoint::new(p.y.clone(), p.x.clone())).collect();
    oct.extend(refl);
    oct.pop(); // (0, 1) starts the next quadrant
    let mut pts = Vec::with_capacity(64);
    for q in 0..4 {
        for p in &oct {
            let r = match q {
                0 => p.clone(),
                1 => RatPoint::new(-p.y.clone(), p.x.clone()),
                2 => RatPoint::new(-p.x.clone(), -p.y.clone()),
                _ => RatPoint::new(p.y.clone(), -p.x.clone()),
            };
            pts.push(r);
        }
    }
    pts
}

pub fn circle(c: &RatPoint, r: &Rat) -> PolyJordanCurve {
    static UNIT: OnceLock<PolyJordanCurve> = OnceLock::new();
    UNIT.get_or_init(|| validate_curve(unit_circle_64(), false).expect("circle approximation is a convex polygon"))
        .scaled(r, c)
}

/// Uniform rational in `[lo, hi)` with denominator `den`.
pub fn rand_rat<R: Rng>(rng: &mut R, lo: i64, hi: i64, den: i64) -> Rat {
    rat(rng.gen_range(lo * den..hi * den), den)
}

/// `k` distinct sorted values `j / den` in `[0, 1)`.
pub fn sorted_fracs<R: Rng>(rng: &mut R, k: usize, den: i64) -> Vec<Rat> {
    let mut pool: Vec<i64> = (0..den).collect();
    pool.shuffle(rng);
    let mut v: Vec<i64> = pool[..k].to_vec();
    v.sort();
    v.into_iter().map(|j| rat(j, den)).collect()
}

/// Random orientation-preserving circle map with `k` breakpoints.
pub fn random_correspondence<R: Rng>(rng: &mut R, k: usize) -> PLCorrespondence {
    let s = sorted_fracs(rng, k, 1000);
    let mut off = sorted_fracs(rng, k, 1000);
    let base = off[0].clone();
    for o in &mut off {
        *o = &*o - &base;
    }
    let t0 = rand_rat(rng, 0, 1, 1000);
    PLCorrespondence::new(s.into_iter().zip(off.into_iter().map(|o| &t0 + o)).collect())
        .expect("sorted offsets are monotone")
}

/// Random correspondence with no fixed point, with its index.
pub fn random_indexable<R: Rng>(
    rng: &mut R,
    k: &PolyJordanCurve,
    kt: &PolyJordanCurve,
) -> (PLCorrespondence, i64) {
    loop {
        let n = rng.gen_range(1..=8);
        let phi = random_correspondence(rng, n);
        if let Ok(eta) = fixed_point_index(k, kt, &phi) {
            return (phi, eta);
        }
    }
}

/// Star-shaped polygon about `c`: `n` of the 64 circle directions, each
/// scaled by a random radius in `[r_lo, r_hi)`.
pub fn random_star<R: Rng>(rng: &mut R, c: &RatPoint, n: usize, r_lo: i64, r_hi: i64) -> PolyJordanCurve {
    let dirs = unit_circle_64();
    let mut idx: Vec<usize> = (0..64).collect();
    loop {
        idx.shuffle(rng);
        let mut pick: Vec<usize> = idx[..n].to_vec();
        pick.sort();
        // Consecutive directions less than a half turn apart keep it star-shaped.
        let ok = (0..n).all(|i| (pick[(i + 1) % n] + 64 - pick[i]) % 64 < 31);
        if !ok {
            continue;
        }
        let pts = pick.iter().map(|&i| &dirs[i].scale(&rand_rat(rng, r_lo, r_hi, 8)) + c).collect();
        if let Ok(curve) = validate_curve(pts, false) {
            return curve;
        }
    }
}

/// Random transverse pair of star polygons with a crossing count in range.
pub fn random_pair<R: Rng>(
    rng: &mut R,
    min_cross: usize,
    max_cross: usize,
) -> (PolyJordanCurve, PolyJordanCurve, CrossingSet) {
    loop {
        let n1 = rng.gen_range(5..=12);
        let n2 = rng.gen_range(5..=12);
        let c1 = RatPoint::origin();
        let c2 = RatPoint::new(rand_rat(rng, -3, 3, 4), rand_rat(rng, -3, 3, 4));
        let k = random_star(rng, &c1, n1, 2, 6);
        let kt = random_star(rng, &c2, n2, 2, 6);
        if let Ok(cs) = check_transverse(&k, &kt) {
            if (min_cross..=max_cross).contains(&cs.len()) {
                return (k, kt, cs);
            }
        }
    }
}

/// Three counterclockwise parameters on `k` avoiding `other`.
pub fn random_constraints<R: Rng>(rng: &mut R, k: &PolyJordanCurve, other: &PolyJordanCurve, count: usize) -> Vec<Rat> {
    loop {
        let z = sorted_fracs(rng, count, 997);
        if z.iter().all(|t| other.param_of(&k.point_at(t)).is_none()) {
            return z;
        }
    }
}

/// Random mark-avoiding staircase path from a random valid base point.
pub fn random_path<R: Rng>(rng: &mut R, d: &TorusDiagram) -> StaircasePath {
    let p = d.period();
    let bases: Vec<i64> = (0..p)
        .filter(|&x| x % 2 == 1 || matches!(d.cols[(x / 2) as usize], Mark::Constraint(_)))
        .collect();
    let rows: Vec<i64> = (0..p)
        .filter(|&y| y % 2 == 1 || matches!(d.rows[(y / 2) as usize], Mark::Constraint(_)))
        .collect();
    'outer: loop {
        let start = (*bases.choose(rng).unwrap(), *rows.choose(rng).unwrap());
        let (mut x, mut y) = start;
        let (mut rr, mut uu) = (p, p);
        let mut steps = Vec::with_capacity(2 * p as usize);
        while rr + uu > 0 {
            let can_r = rr > 0 && d.crossing_at(x + 1, y).is_none();
            let can_u = uu > 0 && d.crossing_at(x, y + 1).is_none();
            let step = match (can_r, can_u) {
                (true, true) => {
                    if rng.gen_range(0..rr + uu) < rr {
                        Step::R
                    } else {
                        Step::U
                    }
                }
                (true, false) => Step::R,
                (false, true) => Step::U,
                (false, false) => continue 'outer,
            };
            match step {
                Step::R => {
                    x += 1;
                    rr -= 1;
                }
                Step::U => {
                    y += 1;
                    uu -= 1;
                }
            }
            steps.push(step);
        }
        let path = StaircasePath { start, steps };
        debug_assert!(path.validate(d).is_ok());
        return path;
    }
}
