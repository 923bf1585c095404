//! Combinatorial torus picture of a transverse pair with marked points.
//!
//! Coordinates are doubled: along the first circle, `2c` is column mark `c`
//! and `2c + 1` the gap after it; rows likewise. Crossings sit at
//! `(2 col, 2 row)`. A staircase path is a closed monotone lattice path in
//! these coordinates that goes once around in each direction.

use std::fmt::Write as _;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exact_geom::{int, mid, point_in_polygon, winding_of_cycle, Location, Rat, RatPoint};
use crate::jordan::{check_transverse, CrossingKind, CrossingSet, JordanError, PolyJordanCurve};
use crate::plmap::{PLCorrespondence, PlmapError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TorusError {
    #[error("constraint {0} lies on the other curve")]
    ConstraintOnCurve(usize),
    #[error("constraints are not in counterclockwise order")]
    OrderViolation,
    #[error("base point lies on a crossing grid line")]
    BasePointOnGrid,
    #[error("the two index formulas disagree: {0} vs {1}")]
    FormulaMismatch(i64, i64),
    #[error("combinatorial and geometric winding disagree at the base point")]
    OmegaMismatch,
    #[error("path visits a crossing mark")]
    PathHitsMark,
    #[error("path does not wind once in each direction")]
    BadPath,
    #[error("path misses constraint {0}")]
    NotFaithful(usize),
    #[error("square around the mark captures another mark")]
    SquareTooLarge,
    #[error("diagram has no geometry attached")]
    NoGeometry,
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error(transparent)]
    Jordan(#[from] JordanError),
    #[error(transparent)]
    Plmap(#[from] PlmapError),
}

impl TorusError {
    pub fn reason(&self) -> &'static str {
        match self {
            TorusError::ConstraintOnCurve(_) => "ConstraintOnCurve",
            TorusError::OrderViolation => "OrderViolation",
            TorusError::BasePointOnGrid => "BasePointOnGrid",
            TorusError::FormulaMismatch(..) => "FormulaMismatch",
            TorusError::OmegaMismatch => "OmegaMismatch",
            TorusError::PathHitsMark => "PathHitsMark",
            TorusError::BadPath => "BadPath",
            TorusError::NotFaithful(_) => "NotFaithful",
            TorusError::SquareTooLarge => "SquareTooLarge",
            TorusError::NoGeometry => "NoGeometry",
            TorusError::InvalidDiagram(_) => "InvalidDiagram",
            TorusError::Jordan(e) => e.reason(),
            TorusError::Plmap(e) => e.reason(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mark {
    Constraint(usize),
    Crossing(usize),
}

/// Relative position of two curves without crossings.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Nesting {
    Disjoint,
    KInsideKt,
    KtInsideK,
}

#[derive(Clone, Debug)]
pub struct GeometryLink {
    pub k: PolyJordanCurve,
    pub kt: PolyJordanCurve,
    pub crossings: CrossingSet,
    /// Parameter on ∂K of each column mark, lifted to increase from the first.
    pub col_params: Vec<Rat>,
    /// Parameter on ∂K̃ of each row mark, lifted likewise.
    pub row_params: Vec<Rat>,
}

#[derive(Clone, Debug)]
pub struct TorusDiagram {
    /// Column marks in cyclic order; index 0 is the first constraint.
    pub cols: Vec<Mark>,
    /// Row marks in cyclic order; index 0 is the first constraint.
    pub rows: Vec<Mark>,
    pub kinds: Vec<CrossingKind>,
    pub crossing_col: Vec<usize>,
    pub crossing_row: Vec<usize>,
    pub constraint_col: Vec<usize>,
    pub constraint_row: Vec<usize>,
    /// Only meaningful without crossings.
    pub nesting: Nesting,
    pub link: Option<GeometryLink>,
}

fn positions(order: &[Mark], n_cross: usize, n_cons: usize) -> Result<(Vec<usize>, Vec<usize>), TorusError> {
    let mut cr = vec![usize::MAX; n_cross];
    let mut co = vec![usize::MAX; n_cons];
    for (i, m) in order.iter().enumerate() {
        let slot = match *m {
            Mark::Crossing(c) if c < n_cross => &mut cr[c],
            Mark::Constraint(c) if c < n_cons => &mut co[c],
            _ => return Err(TorusError::InvalidDiagram(format!("unknown mark {m:?}"))),
        };
        if *slot != usize::MAX {
            return Err(TorusError::InvalidDiagram(format!("mark {m:?} repeated")));
        }
        *slot = i;
    }
    if cr.contains(&usize::MAX) || co.contains(&usize::MAX) {
        return Err(TorusError::InvalidDiagram("missing mark".into()));
    }
    Ok((cr, co))
}

impl TorusDiagram {
    /// Builds and validates a purely combinatorial diagram.
    pub fn from_orders(
        cols: Vec<Mark>,
        rows: Vec<Mark>,
        kinds: Vec<CrossingKind>,
        nesting: Nesting,
    ) -> Result<Self, TorusError> {
        let n_cross = kinds.len();
        if cols.len() != rows.len() || cols.len() < n_cross {
            return Err(TorusError::InvalidDiagram("row and column counts differ".into()));
        }
        let n_cons = cols.len() - n_cross;
        if n_cons == 0 {
            return Err(TorusError::InvalidDiagram("no constraints".into()));
        }
        let (crossing_col, constraint_col) = positions(&cols, n_cross, n_cons)?;
        let (crossing_row, constraint_row) = positions(&rows, n_cross, n_cons)?;
        if cols[0] != Mark::Constraint(0) || rows[0] != Mark::Constraint(0) {
            return Err(TorusError::InvalidDiagram("orders must start at the first constraint".into()));
        }
        if constraint_col.windows(2).any(|w| w[0] > w[1]) || constraint_row.windows(2).any(|w| w[0] > w[1]) {
            return Err(TorusError::OrderViolation);
        }
        let d = TorusDiagram {
            cols,
            rows,
            kinds,
            crossing_col,
            crossing_row,
            constraint_col,
            constraint_row,
            nesting,
            link: None,
        };
        let alt = |order: &[Mark]| {
            let ks: Vec<CrossingKind> =
                order.iter().filter_map(|m| if let Mark::Crossing(c) = m { Some(d.kinds[*c]) } else { None }).collect();
            (0..ks.len()).all(|i| ks[i] != ks[(i + 1) % ks.len()])
        };
        if !n_cross.is_multiple_of(2) || !alt(&d.cols) || !alt(&d.rows) {
            return Err(TorusError::InvalidDiagram("crossing kinds do not alternate".into()));
        }
        Ok(d)
    }

    pub fn n_cols(&self) -> usize {
        self.cols.len()
    }

    pub fn n_crossings(&self) -> usize {
        self.kinds.len()
    }

    pub fn n_constraints(&self) -> usize {
        self.constraint_col.len()
    }

    /// Doubled lattice point of crossing `c`.
    pub fn crossing_point(&self, c: usize) -> (i64, i64) {
        (2 * self.crossing_col[c] as i64, 2 * self.crossing_row[c] as i64)
    }

    pub fn constraint_point(&self, i: usize) -> (i64, i64) {
        (2 * self.constraint_col[i] as i64, 2 * self.constraint_row[i] as i64)
    }

    /// Period of the doubled coordinates.
    pub fn period(&self) -> i64 {
        2 * self.n_cols() as i64
    }

    fn is_crossing_col(&self, x: i64) -> bool {
        let x = x.rem_euclid(self.period());
        x % 2 == 0 && matches!(self.cols[(x / 2) as usize], Mark::Crossing(_))
    }

    fn is_crossing_row(&self, y: i64) -> bool {
        let y = y.rem_euclid(self.period());
        y % 2 == 0 && matches!(self.rows[(y / 2) as usize], Mark::Crossing(_))
    }

    /// Crossing mark at a doubled lattice point, if any.
    pub fn crossing_at(&self, x: i64, y: i64) -> Option<usize> {
        let p = self.period();
        let (x, y) = (x.rem_euclid(p), y.rem_euclid(p));
        if x % 2 != 0 || y % 2 != 0 {
            return None;
        }
        match (self.cols[(x / 2) as usize], self.rows[(y / 2) as usize]) {
            (Mark::Crossing(a), Mark::Crossing(b)) if a == b => Some(a),
            _ => None,
        }
    }

    /// Display names: `P1..PM`, `P~1..P~M` numbered by column order.
    pub fn crossing_names(&self) -> Vec<String> {
        let mut names = vec![String::new(); self.n_crossings()];
        let (mut np, mut nt) = (0, 0);
        for m in &self.cols {
            if let Mark::Crossing(c) = *m {
                names[c] = match self.kinds[c] {
                    CrossingKind::P => {
                        np += 1;
                        format!("P{np}")
                    }
                    CrossingKind::Ptilde => {
                        nt += 1;
                        format!("P~{nt}")
                    }
                };
            }
        }
        names
    }

    /// Text dump used by golden tests.
    pub fn dump(&self) -> String {
        let names = self.crossing_names();
        let fmt = |order: &[Mark], z: &str| {
            order
                .iter()
                .map(|m| match *m {
                    Mark::Constraint(i) => format!("{z}{}", i + 1),
                    Mark::Crossing(c) => names[c].clone(),
                })
                .collect::<Vec<_>>()
                .join(" ")
        };
        let mut s = String::new();
        writeln!(s, "cols: {}", fmt(&self.cols, "z")).unwrap();
        writeln!(s, "rows: {}", fmt(&self.rows, "z~")).unwrap();
        if self.n_crossings() == 0 {
            writeln!(s, "nesting: {:?}", self.nesting).unwrap();
        }
        s
    }

    /// Same diagram with crossings `a` and `b` removed. Needs at least four
    /// crossings, so the result still has some.
    pub fn without_pair(&self, a: usize, b: usize) -> TorusDiagram {
        assert!(self.n_crossings() >= 4, "cannot remove the last pair");
        let remap = |c: usize| c - (c > a) as usize - (c > b) as usize;
        let keep = |m: &Mark| !matches!(m, Mark::Crossing(c) if *c == a || *c == b);
        let re = |m: &Mark| match *m {
            Mark::Crossing(c) => Mark::Crossing(remap(c)),
            other => other,
        };
        let cols: Vec<Mark> = self.cols.iter().filter(|m| keep(m)).map(re).collect();
        let rows: Vec<Mark> = self.rows.iter().filter(|m| keep(m)).map(re).collect();
        let kinds: Vec<CrossingKind> =
            self.kinds.iter().enumerate().filter(|(c, _)| *c != a && *c != b).map(|(_, k)| *k).collect();
        TorusDiagram::from_orders(cols, rows, kinds, self.nesting).expect("removing a pair keeps the diagram valid")
    }

    /// Combinatorial ω(∂K̃, u) for `u` in the column run just after doubled column `x`.
    pub fn omega_kt_at_col(&self, x: i64) -> bool {
        if self.n_crossings() == 0 {
            return self.nesting == Nesting::KInsideKt;
        }
        let n = self.n_cols() as i64;
        let start = x.div_euclid(2);
        for k in 1..=n {
            if let Mark::Crossing(c) = self.cols[((start + k).rem_euclid(n)) as usize] {
                return self.kinds[c] == CrossingKind::Ptilde;
            }
        }
        unreachable!("diagram has crossings")
    }

    /// Combinatorial ω(∂K, ũ) for `ũ` just after doubled row `y`.
    pub fn omega_k_at_row(&self, y: i64) -> bool {
        if self.n_crossings() == 0 {
            return self.nesting == Nesting::KtInsideK;
        }
        let n = self.n_cols() as i64;
        let start = y.div_euclid(2);
        for k in 1..=n {
            if let Mark::Crossing(c) = self.rows[((start + k).rem_euclid(n)) as usize] {
                return self.kinds[c] == CrossingKind::P;
            }
        }
        unreachable!("diagram has crossings")
    }

    /// Parameter for a doubled column coordinate (any integer; lifts add 1 per turn).
    pub fn col_param(&self, x: &Rat) -> Result<Rat, TorusError> {
        let link = self.link.as_ref().ok_or(TorusError::NoGeometry)?;
        Ok(doubled_to_param(&link.col_params, x))
    }

    pub fn row_param(&self, y: &Rat) -> Result<Rat, TorusError> {
        let link = self.link.as_ref().ok_or(TorusError::NoGeometry)?;
        Ok(doubled_to_param(&link.row_params, y))
    }
}

/// Piecewise-linear map from doubled coordinates to lifted parameters.
/// Even integers hit mark parameters, odd integers the midpoints of gaps;
/// each full period adds 1.
fn doubled_to_param(lp: &[Rat], x: &Rat) -> Rat {
    let n = lp.len();
    let period = 2 * n as i64;
    let val = |j: i64| -> Rat {
        let q = j.div_euclid(period);
        let r = j.rem_euclid(period);
        let c = (r / 2) as usize;
        let v = if r % 2 == 0 {
            lp[c].clone()
        } else {
            let next = if c + 1 < n { lp[c + 1].clone() } else { &lp[0] + Rat::one() };
            mid(&lp[c], &next)
        };
        v + int(q)
    };
    let k = x.floor();
    let f = x - &k;
    let ki: i64 = k.to_integer().try_into().expect("coordinate fits i64");
    let lo = val(ki);
    let hi = val(ki + 1);
    &lo + (&hi - &lo) * f
}

fn cyc_order_ok(ts: &[Rat]) -> bool {
    // Strictly increasing when read cyclically from ts[0].
    let base = &ts[0];
    let gaps: Vec<Rat> = ts.iter().map(|t| crate::jordan::cyclic_gap(base, t)).collect();
    gaps.windows(2).all(|w| w[0] < w[1]) && ts.len() == gaps.len()
}

/// Torus diagram of a transverse pair with constraint parameters `z` on ∂K
/// and `zt` on ∂K̃.
pub fn build_diagram(
    k: &PolyJordanCurve,
    kt: &PolyJordanCurve,
    crossings: &CrossingSet,
    z: &[Rat],
    zt: &[Rat],
) -> Result<TorusDiagram, TorusError> {
    if z.len() != zt.len() || z.is_empty() {
        return Err(TorusError::InvalidDiagram("constraint lists differ in length".into()));
    }
    for (i, (a, b)) in z.iter().zip(zt).enumerate() {
        if kt.param_of(&k.point_at(a)).is_some() || k.param_of(&kt.point_at(b)).is_some() {
            return Err(TorusError::ConstraintOnCurve(i));
        }
    }
    let zs: Vec<Rat> = z.iter().map(crate::exact_geom::frac).collect();
    let zts: Vec<Rat> = zt.iter().map(crate::exact_geom::frac).collect();
    if !cyc_order_ok(&zs) || !cyc_order_ok(&zts) {
        return Err(TorusError::OrderViolation);
    }
    let order = |cons: &[Rat], cross: Vec<Rat>| -> (Vec<Mark>, Vec<Rat>) {
        let mut all: Vec<(Rat, Mark)> = cons.iter().cloned().enumerate().map(|(i, t)| (t, Mark::Constraint(i))).collect();
        all.extend(cross.into_iter().enumerate().map(|(c, t)| (t, Mark::Crossing(c))));
        let base = cons[0].clone();
        all.sort_by_key(|a| crate::jordan::cyclic_gap(&base, &a.0));
        let marks = all.iter().map(|x| x.1).collect();
        let params = all.into_iter().map(|x| &base + crate::jordan::cyclic_gap(&base, &x.0)).collect();
        (marks, params)
    };
    let (cols, col_params) = order(&zs, crossings.crossings.iter().map(|c| c.param_k.clone()).collect());
    let (rows, row_params) = order(&zts, crossings.crossings.iter().map(|c| c.param_kt.clone()).collect());
    let nesting = if !crossings.is_empty() {
        Nesting::Disjoint
    } else if point_in_polygon(kt.as_loop(), k.vertex(0)) == Location::Inside {
        Nesting::KInsideKt
    } else if point_in_polygon(k.as_loop(), kt.vertex(0)) == Location::Inside {
        Nesting::KtInsideK
    } else {
        Nesting::Disjoint
    };
    let kinds = crossings.crossings.iter().map(|c| c.kind).collect();
    let mut d = TorusDiagram::from_orders(cols, rows, kinds, nesting)?;
    d.link = Some(GeometryLink { k: k.clone(), kt: kt.clone(), crossings: crossings.clone(), col_params, row_params });
    Ok(d)
}

/// Convenience: computes the crossings first.
pub fn build_diagram_for(
    k: &PolyJordanCurve,
    kt: &PolyJordanCurve,
    z: &[Rat],
    zt: &[Rat],
) -> Result<TorusDiagram, TorusError> {
    let cs = check_transverse(k, kt)?;
    build_diagram(k, kt, &cs, z, zt)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Step {
    R,
    U,
}

/// Closed monotone lattice path in doubled coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StaircasePath {
    pub start: (i64, i64),
    pub steps: Vec<Step>,
}

impl StaircasePath {
    /// Lifted vertices, starting at `start` and ending one period later.
    pub fn vertices(&self) -> Vec<(i64, i64)> {
        let mut v = Vec::with_capacity(self.steps.len() + 1);
        let (mut x, mut y) = self.start;
        v.push((x, y));
        for s in &self.steps {
            match s {
                Step::R => x += 1,
                Step::U => y += 1,
            }
            v.push((x, y));
        }
        v
    }

    /// The same closed path read from its `k`-th vertex.
    pub fn rerooted(&self, k: usize) -> StaircasePath {
        let verts = self.vertices();
        let mut steps = self.steps[k..].to_vec();
        steps.extend_from_slice(&self.steps[..k]);
        StaircasePath { start: verts[k], steps }
    }

    /// Builds a path from the heights at which it leaves each column.
    /// `h[i]` is the height of the rightward step out of column `x0 + i`.
    pub fn from_heights(start: (i64, i64), h: &[i64], end_y: i64) -> StaircasePath {
        let mut steps = Vec::new();
        let mut y = start.1;
        for &hi in h {
            for _ in y..hi {
                steps.push(Step::U);
            }
            steps.push(Step::R);
            y = hi.max(y);
        }
        for _ in y..end_y {
            steps.push(Step::U);
        }
        StaircasePath { start, steps }
    }

    pub fn validate(&self, d: &TorusDiagram) -> Result<(), TorusError> {
        let p = d.period() as usize;
        let r = self.steps.iter().filter(|s| **s == Step::R).count();
        if r != p || self.steps.len() != 2 * p {
            return Err(TorusError::BadPath);
        }
        if self.vertices().iter().any(|&(x, y)| d.crossing_at(x, y).is_some()) {
            return Err(TorusError::PathHitsMark);
        }
        Ok(())
    }

    /// Whether the path visits lattice point `q` (mod the period).
    pub fn visits(&self, d: &TorusDiagram, q: (i64, i64)) -> bool {
        let p = d.period();
        self.vertices().iter().any(|&(x, y)| (x - q.0).rem_euclid(p) == 0 && (y - q.1).rem_euclid(p) == 0)
    }

    pub fn is_faithful(&self, d: &TorusDiagram) -> bool {
        (0..d.n_constraints()).all(|i| self.visits(d, d.constraint_point(i)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaSplit {
    /// Per crossing: true iff it lies in Δ↓.
    pub below: Vec<bool>,
    pub p_down: usize,
    pub pt_down: usize,
    pub p_up: usize,
    pub pt_up: usize,
}

/// Splits the crossing marks by which side of the path (read from its start)
/// they lie on.
pub fn delta_split(d: &TorusDiagram, gamma: &StaircasePath) -> Result<DeltaSplit, TorusError> {
    gamma.validate(d)?;
    let (x0, y0) = gamma.start;
    if d.is_crossing_col(x0) || d.is_crossing_row(y0) {
        return Err(TorusError::BasePointOnGrid);
    }
    let p = d.period();
    let verts = gamma.vertices();
    let mut below = Vec::with_capacity(d.n_crossings());
    for c in 0..d.n_crossings() {
        let (a, b) = d.crossing_point(c);
        let a = x0 + (a - x0).rem_euclid(p);
        let b = y0 + (b - y0).rem_euclid(p);
        let ymin = verts.iter().filter(|v| v.0 == a).map(|v| v.1).min().expect("path crosses every column");
        below.push(b < ymin);
    }
    let count = |kind: CrossingKind, down: bool| {
        (0..d.n_crossings()).filter(|&c| d.kinds[c] == kind && below[c] == down).count()
    };
    Ok(DeltaSplit {
        p_down: count(CrossingKind::P, true),
        pt_down: count(CrossingKind::Ptilde, true),
        p_up: count(CrossingKind::P, false),
        pt_up: count(CrossingKind::Ptilde, false),
        below,
    })
}

/// ω(∂K, ũ) and ω(∂K̃, u) at the path's start, checked against geometry when linked.
pub fn base_windings(d: &TorusDiagram, u: (i64, i64)) -> Result<(i64, i64), TorusError> {
    let comb = (d.omega_k_at_row(u.1) as i64, d.omega_kt_at_col(u.0) as i64);
    if let Some(link) = &d.link {
        let up = link.k.point_at(&d.col_param(&int(u.0))?);
        let utp = link.kt.point_at(&d.row_param(&int(u.1))?);
        let w_k = winding_of_cycle(link.k.vertices(), &utp).map_err(|_| TorusError::BasePointOnGrid)?;
        let w_kt = winding_of_cycle(link.kt.vertices(), &up).map_err(|_| TorusError::BasePointOnGrid)?;
        if (w_k, w_kt) != comb {
            return Err(TorusError::OmegaMismatch);
        }
    }
    Ok(comb)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusIndex {
    pub eq1: i64,
    pub eq2: i64,
    pub omega_k: i64,
    pub omega_kt: i64,
    pub split: DeltaSplit,
}

/// w(γ) from the torus picture, by both formulas. The base point is the
/// path's start.
pub fn index_from_torus(d: &TorusDiagram, gamma: &StaircasePath) -> Result<TorusIndex, TorusError> {
    let split = delta_split(d, gamma)?;
    let (omega_k, omega_kt) = base_windings(d, gamma.start)?;
    let eq1 = omega_k + omega_kt - split.p_down as i64 + split.pt_down as i64;
    let eq2 = omega_k + omega_kt + split.p_up as i64 - split.pt_up as i64;
    if eq1 != eq2 {
        return Err(TorusError::FormulaMismatch(eq1, eq2));
    }
    Ok(TorusIndex { eq1, eq2, omega_k, omega_kt, split })
}

/// The lowest path from `start` that keeps the marks in `below` under it and
/// passes through every pin. `None` if no such path exists.
///
/// Pins are lifted lattice points `(x, y)` with `start <= pin < start + period`.
pub fn lowest_path(
    d: &TorusDiagram,
    start: (i64, i64),
    below: &[bool],
    pins: &[(i64, i64)],
) -> Option<StaircasePath> {
    let p = d.period();
    let (x0, y0) = start;
    let lifted: Vec<(i64, i64)> = (0..d.n_crossings())
        .map(|c| {
            let (a, b) = d.crossing_point(c);
            (x0 + (a - x0).rem_euclid(p), y0 + (b - y0).rem_euclid(p))
        })
        .collect();
    let n = p as usize;
    let mut h = vec![y0; n];
    for (i, hi) in h.iter_mut().enumerate() {
        let x = x0 + i as i64;
        for (c, &(a, b)) in lifted.iter().enumerate() {
            if below[c] && a <= x + 1 {
                *hi = (*hi).max(b + 1);
            }
        }
        for &(qx, qy) in pins {
            if qx <= x {
                *hi = (*hi).max(qy);
            }
        }
    }
    let height = |x: i64| h[(x - x0) as usize];
    if height(x0 + p - 1) > y0 + p {
        return None;
    }
    for (c, &(a, b)) in lifted.iter().enumerate() {
        if !below[c] && height(a) >= b {
            return None;
        }
    }
    for &(qx, qy) in pins {
        if qx > x0 && height(qx - 1) > qy {
            return None;
        }
    }
    let path = StaircasePath::from_heights(start, &h, y0 + p);
    path.validate(d).ok().map(|_| path)
}

/// Constraint lattice points other than the first, lifted from the first.
pub fn constraint_pins(d: &TorusDiagram) -> Vec<(i64, i64)> {
    (1..d.n_constraints()).map(|i| d.constraint_point(i)).collect()
}

/// Realizes a staircase path as a boundary correspondence.
///
/// Each path vertex is pushed by `θ (1, -1)` with `θ` drifting so every step
/// becomes strictly increasing in both coordinates; `θ` returns to 0 at the
/// start and at every constraint lattice point the path visits, so those
/// are hit exactly.
pub fn realize_path(d: &TorusDiagram, gamma: &StaircasePath) -> Result<PLCorrespondence, TorusError> {
    gamma.validate(d)?;
    if d.link.is_none() {
        return Err(TorusError::NoGeometry);
    }
    let p = d.period();
    let verts = gamma.vertices();
    let pins: Vec<(i64, i64)> = (0..d.n_constraints()).map(|i| d.constraint_point(i)).collect();
    let is_pin = |v: (i64, i64)| pins.iter().any(|q| (v.0 - q.0).rem_euclid(p) == 0 && (v.1 - q.1).rem_euclid(p) == 0);

    // Reset points split the steps into segments, each with both step kinds.
    let mut resets = vec![0usize];
    let mut last = 0usize;
    for k in 1..gamma.steps.len() {
        if !is_pin(verts[k]) {
            continue;
        }
        let seg = &gamma.steps[last..k];
        let rest = &gamma.steps[k..];
        let both = |s: &[Step]| s.contains(&Step::R) && s.contains(&Step::U);
        if both(seg) && both(rest) {
            resets.push(k);
            last = k;
        }
    }
    resets.push(gamma.steps.len());

    let eps = Rat::new(1.into(), 4.into());
    let mut pairs: Vec<(Rat, Rat)> = Vec::new();
    for w in resets.windows(2) {
        let seg = &gamma.steps[w[0]..w[1]];
        let nr = seg.iter().filter(|s| **s == Step::R).count() as i64;
        let nu = seg.len() as i64 - nr;
        let dr = &eps / int(nr);
        let du = &eps / int(nu);
        let mut theta = Rat::zero();
        for (off, step) in seg.iter().enumerate() {
            let k = w[0] + off;
            let (x, y) = verts[k];
            let px = int(x) + &theta;
            let py = int(y) - &theta;
            pairs.push((d.col_param(&px)?, d.row_param(&py)?));
            match step {
                Step::R => theta -= &dr,
                Step::U => theta += &du,
            }
        }
    }
    Ok(PLCorrespondence::new(pairs)?)
}

/// Winding of `κ̃⁻¹(y) - κ⁻¹(x)` around a small square about a crossing mark.
pub fn local_winding(d: &TorusDiagram, c: usize) -> Result<i64, TorusError> {
    let link = d.link.as_ref().ok_or(TorusError::NoGeometry)?;
    let (a, b) = d.crossing_point(c);
    let (s_lo, s_hi) = (d.col_param(&int(a - 1))?, d.col_param(&int(a + 1))?);
    let (t_lo, t_hi) = (d.row_param(&int(b - 1))?, d.row_param(&int(b + 1))?);
    let k = &link.k;
    let kt = &link.kt;
    let inner = |lo: &Rat, hi: &Rat, n: usize| -> Vec<Rat> {
        let mut v: Vec<Rat> = Vec::new();
        for i in 0..n {
            let mut t = Rat::new((i as i64).into(), (n as i64).into());
            while &t <= lo {
                t += Rat::one();
            }
            if &t < hi {
                v.push(t);
            }
        }
        v.sort();
        v
    };
    let ks = inner(&s_lo, &s_hi, k.n());
    let ts = inner(&t_lo, &t_hi, kt.n());
    let mut pts: Vec<(Rat, Rat)> = vec![(s_lo.clone(), t_lo.clone())];
    pts.extend(ks.iter().map(|s| (s.clone(), t_lo.clone())));
    pts.push((s_hi.clone(), t_lo.clone()));
    pts.extend(ts.iter().map(|t| (s_hi.clone(), t.clone())));
    pts.push((s_hi.clone(), t_hi.clone()));
    pts.extend(ks.iter().rev().map(|s| (s.clone(), t_hi.clone())));
    pts.push((s_lo.clone(), t_hi.clone()));
    pts.extend(ts.iter().rev().map(|t| (s_lo.clone(), t.clone())));
    let loop_pts: Vec<RatPoint> = pts.iter().map(|(s, t)| &kt.point_at(t) - &k.point_at(s)).collect();
    winding_of_cycle(&loop_pts, &RatPoint::origin()).map_err(|_| TorusError::SquareTooLarge)
}
