//! Boundary correspondences between polygonal curves and their fixed-point
//! index.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exact_geom::{
    frac, int, signed_area, winding_of_cycle, GeomError, PLLoop, Rat, RatPoint,
};
use crate::jordan::{in_open_arc, validate_curve, JordanError, PolyJordanCurve};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlmapError {
    #[error("difference loop passes through the origin")]
    HasFixedPoint,
    #[error("breakpoints are not strictly increasing around the circle")]
    NotMonotone,
    #[error("maps disagree on the shared arc")]
    ArcsDisagree,
    #[error("bad gluing geometry: {0}")]
    BadGluingGeometry(String),
    #[error("affine map does not preserve orientation")]
    NotOrientationPreserving,
    #[error(transparent)]
    Jordan(#[from] JordanError),
}

impl PlmapError {
    pub fn reason(&self) -> &'static str {
        match self {
            PlmapError::HasFixedPoint => "HasFixedPoint",
            PlmapError::NotMonotone => "NotMonotone",
            PlmapError::ArcsDisagree => "ArcsDisagree",
            PlmapError::BadGluingGeometry(_) => "BadGluingGeometry",
            PlmapError::NotOrientationPreserving => "NotOrientationPreserving",
            PlmapError::Jordan(j) => j.reason(),
        }
    }
}

/// Orientation-preserving circle map given by breakpoints `(s_j, t_j)`.
///
/// `s` is stored sorted in `[0, 1)`; `t` is lifted to be strictly increasing
/// with `t_last < t_0 + 1`. A single breakpoint describes a rotation.
#[derive(Clone, Debug)]
pub struct PLCorrespondence {
    s: Vec<Rat>,
    t: Vec<Rat>,
}

/// Equality as circle maps: two PL maps agreeing at every breakpoint of
/// either one agree everywhere.
impl PartialEq for PLCorrespondence {
    fn eq(&self, other: &Self) -> bool {
        self.s.iter().chain(other.s.iter()).all(|x| self.evaluate(x) == other.evaluate(x))
    }
}

impl Eq for PLCorrespondence {}

impl PLCorrespondence {
    pub fn new(mut pairs: Vec<(Rat, Rat)>) -> Result<Self, PlmapError> {
        if pairs.is_empty() {
            return Err(PlmapError::NotMonotone);
        }
        for p in &mut pairs {
            p.0 = frac(&p.0);
        }
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(PlmapError::NotMonotone);
        }
        let mut s = Vec::with_capacity(pairs.len());
        let mut t: Vec<Rat> = Vec::with_capacity(pairs.len());
        for (sj, tj) in pairs {
            let mut lifted = frac(&tj);
            if let Some(prev) = t.last() {
                lifted += (prev - &lifted).floor() + Rat::one();
            }
            s.push(sj);
            t.push(lifted);
        }
        if t[t.len() - 1] >= &t[0] + Rat::one() {
            return Err(PlmapError::NotMonotone);
        }
        Ok(PLCorrespondence { s, t })
    }

    pub fn identity() -> Self {
        PLCorrespondence { s: vec![Rat::zero()], t: vec![Rat::zero()] }
    }

    pub fn rotation(a: Rat) -> Self {
        PLCorrespondence::new(vec![(Rat::zero(), a)]).expect("rotation is monotone")
    }

    /// Breakpoints as stored (lifted targets).
    pub fn breakpoints(&self) -> Vec<(Rat, Rat)> {
        self.s.iter().cloned().zip(self.t.iter().cloned()).collect()
    }

    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    /// Lifted value: for `s` in `[s_0, s_0 + 1)` the result lies in `[t_0, t_0 + 1)`.
    fn eval_lifted(&self, s: &Rat) -> Rat {
        let k = self.s.len();
        let mut x = frac(s);
        if x < self.s[0] {
            x += Rat::one();
        }
        // Last j with s_j <= x.
        let j = match self.s.binary_search(&x) {
            Ok(j) => return self.t[j].clone(),
            Err(0) => k - 1,
            Err(j) => j - 1,
        };
        let (s0, t0) = (&self.s[j], &self.t[j]);
        let (s1, t1) = if j + 1 < k {
            (self.s[j + 1].clone(), self.t[j + 1].clone())
        } else {
            (&self.s[0] + Rat::one(), &self.t[0] + Rat::one())
        };
        t0 + (&t1 - t0) * (&x - s0) / (&s1 - s0)
    }

    pub fn evaluate(&self, s: &Rat) -> Rat {
        frac(&self.eval_lifted(s))
    }

    pub fn invert(&self) -> PLCorrespondence {
        PLCorrespondence::new(self.t.iter().cloned().zip(self.s.iter().cloned()).collect())
            .expect("inverse of a monotone map is monotone")
    }

    /// Source parameters where the difference loop may bend: breakpoints,
    /// source vertices and preimages of target vertices.
    pub fn refined_params(&self, k: &PolyJordanCurve, kt: &PolyJordanCurve) -> Vec<Rat> {
        let inv = self.invert();
        let mut all: Vec<Rat> = self.s.clone();
        all.extend((0..k.n()).map(|i| k.vertex_param(i)));
        all.extend((0..kt.n()).map(|j| inv.evaluate(&kt.vertex_param(j))));
        all.sort();
        all.dedup();
        all
    }
}

/// The loop of vectors `φ(z) - z` as `z` runs once around `∂K`.
pub fn difference_loop(k: &PolyJordanCurve, kt: &PolyJordanCurve, phi: &PLCorrespondence) -> PLLoop {
    let samples = phi
        .refined_params(k, kt)
        .iter()
        .map(|s| &kt.point_at(&phi.evaluate(s)) - &k.point_at(s))
        .collect();
    PLLoop::from_samples(samples)
}

pub fn fixed_point_index(k: &PolyJordanCurve, kt: &PolyJordanCurve, phi: &PLCorrespondence) -> Result<i64, PlmapError> {
    let lp = difference_loop(k, kt, phi);
    winding_of_cycle(lp.vertices(), &RatPoint::origin()).map_err(|e| match e {
        GeomError::PointOnLoop => PlmapError::HasFixedPoint,
        other => PlmapError::Jordan(other.into()),
    })
}

/// Affine map `p -> A p + b` with rational entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Affine {
    pub a: [[Rat; 2]; 2],
    pub b: [Rat; 2],
}

impl Affine {
    pub fn linear(a11: Rat, a12: Rat, a21: Rat, a22: Rat) -> Self {
        Affine { a: [[a11, a12], [a21, a22]], b: [Rat::zero(), Rat::zero()] }
    }

    pub fn translation(x: Rat, y: Rat) -> Self {
        Affine { a: [[Rat::one(), Rat::zero()], [Rat::zero(), Rat::one()]], b: [x, y] }
    }

    pub fn det(&self) -> Rat {
        &self.a[0][0] * &self.a[1][1] - &self.a[0][1] * &self.a[1][0]
    }

    pub fn apply(&self, p: &RatPoint) -> RatPoint {
        RatPoint::new(
            &self.a[0][0] * &p.x + &self.a[0][1] * &p.y + &self.b[0],
            &self.a[1][0] * &p.x + &self.a[1][1] * &p.y + &self.b[1],
        )
    }
}

/// Applies `T` to both curves. Vertex `i` goes to vertex `i`, so parameters
/// and hence the breakpoints of `φ' = T φ T⁻¹` are unchanged.
pub fn transform_pair(
    k: &PolyJordanCurve,
    kt: &PolyJordanCurve,
    phi: &PLCorrespondence,
    t: &Affine,
) -> Result<(PolyJordanCurve, PolyJordanCurve, PLCorrespondence), PlmapError> {
    if t.det() <= Rat::zero() {
        return Err(PlmapError::NotOrientationPreserving);
    }
    Ok((k.map_points(|p| t.apply(p))?, kt.map_points(|p| t.apply(p))?, phi.clone()))
}

/// A piece of a glued or assembled map: source curve, target curve, map.
pub type Piece<'a> = (&'a PolyJordanCurve, &'a PolyJordanCurve, &'a PLCorrespondence);

/// Builds the map on `∂U → ∂Ũ` that restricts to each piece's map wherever
/// the piece's boundary runs along `∂U`.
///
/// Every piece must send its part of `∂U` into `∂Ũ`; points claimed by two
/// pieces must agree.
pub fn assemble_by_restriction(
    pieces: &[Piece<'_>],
    union_src: &PolyJordanCurve,
    union_tgt: &PolyJordanCurve,
) -> Result<PLCorrespondence, PlmapError> {
    let mut table: BTreeMap<Rat, Rat> = BTreeMap::new();
    for (src, tgt, phi) in pieces {
        let params = phi.refined_params(src, tgt);
        let on_union: Vec<Option<Rat>> = params.iter().map(|s| union_src.param_of(&src.point_at(s))).collect();
        let np = params.len();
        for (i, s) in params.iter().enumerate() {
            let Some(u) = &on_union[i] else { continue };
            // Keep isolated touch points only if the piece really runs along ∂U here.
            let next = &on_union[(i + 1) % np];
            let prev = &on_union[(i + np - 1) % np];
            if next.is_none() && prev.is_none() {
                continue;
            }
            let y = tgt.point_at(&phi.evaluate(s));
            let v = union_tgt
                .param_of(&y)
                .ok_or_else(|| PlmapError::BadGluingGeometry("piece image leaves the union target".into()))?;
            match table.get(u) {
                Some(old) if *old != v => return Err(PlmapError::ArcsDisagree),
                Some(_) => {}
                None => {
                    table.insert(u.clone(), v);
                }
            }
        }
    }
    if table.is_empty() {
        return Err(PlmapError::BadGluingGeometry("no piece runs along the union boundary".into()));
    }
    PLCorrespondence::new(table.into_iter().collect())
}

/// Shared boundary of two curves: a contiguous run of `a`'s edges that `b`
/// traverses in reverse. Returns the first and last shared vertex indices in `a`.
fn shared_arc(a: &PolyJordanCurve, b: &PolyJordanCurve) -> Result<(usize, usize), PlmapError> {
    let n = a.n();
    let bset: std::collections::HashSet<(&RatPoint, &RatPoint)> =
        (0..b.n()).map(|j| (b.vertex(j + 1), b.vertex(j))).collect();
    let shared: Vec<bool> = (0..n).map(|i| bset.contains(&(a.vertex(i), a.vertex(i + 1)))).collect();
    let count = shared.iter().filter(|&&x| x).count();
    if count == 0 {
        return Err(PlmapError::BadGluingGeometry("domains do not share a boundary arc".into()));
    }
    if count == n {
        return Err(PlmapError::BadGluingGeometry("domains coincide".into()));
    }
    let starts: Vec<usize> = (0..n).filter(|&i| shared[i] && !shared[(i + n - 1) % n]).collect();
    if starts.len() != 1 {
        return Err(PlmapError::BadGluingGeometry("shared boundary is not a single arc".into()));
    }
    Ok((starts[0], (starts[0] + count) % n))
}

/// Boundary of the union of two domains glued along a single arc.
///
/// Walks `a` from the end of the shared arc to its start, then `b` back.
pub fn union_curve(a: &PolyJordanCurve, b: &PolyJordanCurve) -> Result<PolyJordanCurve, PlmapError> {
    let (s, e) = shared_arc(a, b)?;
    let mut pts = Vec::new();
    let mut i = e;
    while i != s {
        pts.push(a.vertex(i).clone());
        i = (i + 1) % a.n();
    }
    let start_b = (0..b.n()).find(|&j| b.vertex(j) == a.vertex(s)).expect("shared vertex is on b");
    let end_b = (0..b.n()).find(|&j| b.vertex(j) == a.vertex(e)).expect("shared vertex is on b");
    let mut j = start_b;
    while j != end_b {
        pts.push(b.vertex(j).clone());
        j = (j + 1) % b.n();
    }
    let u = validate_curve(pts, false)
        .map_err(|e| PlmapError::BadGluingGeometry(format!("union is not a Jordan domain: {e}")))?;
    if signed_area(u.as_loop()) != a.signed_area() + b.signed_area() {
        return Err(PlmapError::BadGluingGeometry("domains overlap".into()));
    }
    Ok(u)
}

pub struct Glued {
    pub source: PolyJordanCurve,
    pub target: PolyJordanCurve,
    pub theta: PLCorrespondence,
}

/// Glues `φ: ∂K → ∂K̃` and `ψ: ∂L → ∂L̃` along the common arc.
pub fn glue(
    k: &PolyJordanCurve,
    kt: &PolyJordanCurve,
    phi: &PLCorrespondence,
    l: &PolyJordanCurve,
    lt: &PolyJordanCurve,
    psi: &PLCorrespondence,
) -> Result<Glued, PlmapError> {
    let source = union_curve(k, l)?;
    let target = union_curve(kt, lt)?;
    let (sa, sb) = shared_arc(k, l)?;
    let (ta, tb) = shared_arc(kt, lt)?;
    let (pa, pb) = (k.vertex_param(sa), k.vertex_param(sb));

    // φ must carry the shared source arc onto the shared target arc.
    let arc_a = (kt.vertex_param(ta), kt.vertex_param(tb));
    let mid = {
        let gap = crate::jordan::cyclic_gap(&pa, &pb);
        frac(&(&pa + gap / int(2)))
    };
    if phi.evaluate(&pa) != arc_a.0 || phi.evaluate(&pb) != arc_a.1 || !in_open_arc(&arc_a.0, &arc_a.1, &phi.evaluate(&mid)) {
        return Err(PlmapError::ArcsDisagree);
    }

    // Both maps are PL along the arc; agreeing at every bend of either one is enough.
    let mut xs: Vec<RatPoint> = Vec::new();
    for s in phi.refined_params(k, kt) {
        if s == pa || s == pb || in_open_arc(&pa, &pb, &s) {
            xs.push(k.point_at(&s));
        }
    }
    let index_in_l = |v: &RatPoint| (0..l.n()).find(|&j| l.vertex(j) == v).expect("shared vertex is on L");
    let (la, lb) = (l.vertex_param(index_in_l(k.vertex(sb))), l.vertex_param(index_in_l(k.vertex(sa))));
    for s in psi.refined_params(l, lt) {
        if s == la || s == lb || in_open_arc(&la, &lb, &s) {
            xs.push(l.point_at(&s));
        }
    }
    for x in &xs {
        let sk = k.param_of(x).ok_or(PlmapError::ArcsDisagree)?;
        let sl = l.param_of(x).ok_or(PlmapError::ArcsDisagree)?;
        if kt.point_at(&phi.evaluate(&sk)) != lt.point_at(&psi.evaluate(&sl)) {
            return Err(PlmapError::ArcsDisagree);
        }
    }
    let theta = assemble_by_restriction(&[(k, kt, phi), (l, lt, psi)], &source, &target)?;
    Ok(Glued { source, target, theta })
}
