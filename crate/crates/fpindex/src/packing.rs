//! Packings of topological rectangles, their contact graphs, overlays of two
//! packings, and the interstice-by-interstice index certificate.
//!
//! A packing is validated by building the planar subdivision cut out by the
//! rectangle and the pieces. Pieces may only touch at shared vertices, so the
//! subdivision's edges are exactly the input edges.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::exact_geom::{
    cross, mid, point_in_polygon, segment_intersection, Location, Rat, RatPoint, SegmentIntersection,
};
use crate::jordan::{check_transverse, cuts_each_other, validate_curve, JordanError, PolyJordanCurve};
use crate::plmap::{assemble_by_restriction, fixed_point_index, Affine, PLCorrespondence, PlmapError};
use crate::prescribe::{any_faithful, oracle_enumerate, prescribe, PrescribeError, PrescriptionTrace};
use crate::torus::{build_diagram_for, realize_path, TorusError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PackingError {
    #[error("piece {0} is not inside the rectangle")]
    PieceOutsideRect(usize),
    #[error("pieces {0} and {1} overlap")]
    PiecesOverlap(usize, usize),
    #[error("bad interstice: {0}")]
    BadInterstice(String),
    #[error("piece {0} touches a corner of the rectangle")]
    CornerContact(usize),
    #[error("bad rectangle: {0}")]
    BadRectangle(String),
    #[error("overlay is not transverse: {0}")]
    NotTransverseOverlay(String),
    #[error("hypothesis not met: {0}")]
    HypothesesNotMet(String),
    #[error("no corresponding pair cuts each other")]
    TheoremViolationSuspected,
    #[error(transparent)]
    Curve(#[from] JordanError),
    #[error(transparent)]
    Plmap(#[from] PlmapError),
    #[error(transparent)]
    Torus(#[from] TorusError),
    #[error(transparent)]
    Prescribe(#[from] PrescribeError),
}

impl PackingError {
    pub fn reason(&self) -> &'static str {
        match self {
            PackingError::PieceOutsideRect(_) => "PieceOutsideRect",
            PackingError::PiecesOverlap(..) => "PiecesOverlap",
            PackingError::BadInterstice(_) => "BadInterstice",
            PackingError::CornerContact(_) => "CornerContact",
            PackingError::BadRectangle(_) => "BadRectangle",
            PackingError::NotTransverseOverlay(_) => "NotTransverseOverlay",
            PackingError::HypothesesNotMet(_) => "HypothesesNotMet",
            PackingError::TheoremViolationSuspected => "TheoremViolationSuspected",
            PackingError::Curve(e) => e.reason(),
            PackingError::Plmap(e) => e.reason(),
            PackingError::Torus(e) => e.reason(),
            PackingError::Prescribe(e) => e.reason(),
        }
    }
}

pub const SIDE_NAMES: [&str; 4] = ["a", "b", "c", "d"];

/// A Jordan domain with four marked boundary vertices. Side `k` runs from
/// `corners[k]` to `corners[k + 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopoRectangle {
    pub curve: PolyJordanCurve,
    pub corners: [usize; 4],
}

impl TopoRectangle {
    pub fn new(curve: PolyJordanCurve, corners: [usize; 4]) -> Result<Self, PackingError> {
        let n = curve.n();
        if corners.iter().any(|&c| c >= n) {
            return Err(PackingError::BadRectangle("corner index out of range".into()));
        }
        let gaps: usize = (0..4).map(|k| (corners[(k + 1) % 4] + n - corners[k]) % n).sum();
        let distinct = corners.iter().collect::<BTreeSet<_>>().len() == 4;
        if !distinct || gaps != n {
            return Err(PackingError::BadRectangle("corners must be distinct and in boundary order".into()));
        }
        Ok(TopoRectangle { curve, corners })
    }

    /// Side containing edge `e` (from vertex `e` to `e + 1`).
    pub fn side_of_edge(&self, e: usize) -> usize {
        let n = self.curve.n();
        (0..4)
            .find(|&k| {
                let len = (self.corners[(k + 1) % 4] + n - self.corners[k]) % n;
                (e + n - self.corners[k]) % n < len
            })
            .expect("the sides cover the boundary")
    }

    pub fn corner_points(&self) -> [RatPoint; 4] {
        self.corners.map(|c| self.curve.vertex(c).clone())
    }

    pub fn corner_params(&self) -> Vec<Rat> {
        self.corners.iter().map(|&c| self.curve.vertex_param(c)).collect()
    }

    pub fn map_points(&self, f: impl Fn(&RatPoint) -> RatPoint) -> Result<Self, PackingError> {
        Ok(TopoRectangle { curve: self.curve.map_points(f)?, corners: self.corners })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackingSpec {
    pub rect: TopoRectangle,
    pub pieces: Vec<PolyJordanCurve>,
}

impl PackingSpec {
    pub fn map_points(&self, f: impl Fn(&RatPoint) -> RatPoint) -> Result<Self, PackingError> {
        Ok(PackingSpec {
            rect: self.rect.map_points(&f)?,
            pieces: self.pieces.iter().map(|k| k.map_points(&f)).collect::<Result<_, _>>()?,
        })
    }

    pub fn translated(&self, v: &RatPoint) -> Result<Self, PackingError> {
        self.map_points(|p| p + v)
    }

    pub fn transformed(&self, t: &Affine) -> Result<Self, PackingError> {
        if t.det() <= Rat::zero() {
            return Err(PackingError::BadRectangle("transform reverses orientation".into()));
        }
        self.map_points(|p| t.apply(p))
    }
}

/// A vertex of the contact graph: a side of the rectangle or a piece.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Owner {
    Side(usize),
    Piece(usize),
}

impl Owner {
    pub fn label(self) -> String {
        match self {
            Owner::Side(k) => SIDE_NAMES[k].to_string(),
            Owner::Piece(i) => format!("{}", i + 1),
        }
    }

    fn relabel(self, corr: &[usize]) -> Owner {
        match self {
            Owner::Piece(i) => Owner::Piece(corr[i]),
            s => s,
        }
    }
}

fn pair(a: Owner, b: Owner) -> (Owner, Owner) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

fn triple(mut t: [Owner; 3]) -> [Owner; 3] {
    t.sort();
    t
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContactGraph {
    pub n: usize,
    pub edges: BTreeSet<(Owner, Owner)>,
    pub faces: BTreeSet<[Owner; 3]>,
}

/// A complementary triangle. `corners[k]` is a vertex index of `curve`,
/// lying where the owners `owners[k]` and `owners[k + 1]` meet; the arc from
/// `corners[k]` to `corners[k + 1]` belongs to `owners[k + 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interstice {
    pub curve: PolyJordanCurve,
    pub corners: [usize; 3],
    pub owners: [Owner; 3],
}

impl Interstice {
    pub fn key(&self) -> [Owner; 3] {
        triple(self.owners)
    }

    /// The two owners meeting at corner `k`.
    pub fn corner_owners(&self, k: usize) -> (Owner, Owner) {
        pair(self.owners[k], self.owners[(k + 1) % 3])
    }
}

#[derive(Clone, Debug)]
pub struct ValidPacking {
    pub spec: PackingSpec,
    pub graph: ContactGraph,
    pub interstices: Vec<Interstice>,
    /// Points where two of the sets meet: tangencies, side contacts, corners.
    pub contact_points: Vec<RatPoint>,
}

/// Shared vertices of two curves whose boundaries meet nowhere else.
/// `None` if they cross or touch anywhere but at a vertex of both.
fn vertex_contacts(a: &PolyJordanCurve, b: &PolyJordanCurve) -> Option<BTreeSet<RatPoint>> {
    let mut out = BTreeSet::new();
    for i in 0..a.n() {
        let s = a.segment(i);
        for j in 0..b.n() {
            let t = b.segment(j);
            match segment_intersection(&s, &t) {
                SegmentIntersection::Empty => {}
                SegmentIntersection::ProperPoint(_) => return None,
                SegmentIntersection::Degenerate => {
                    let mut pts: BTreeSet<&RatPoint> = BTreeSet::new();
                    for p in [&s.a, &s.b] {
                        if t.contains(p) {
                            pts.insert(p);
                        }
                    }
                    for p in [&t.a, &t.b] {
                        if s.contains(p) {
                            pts.insert(p);
                        }
                    }
                    let p = match pts.into_iter().collect::<Vec<_>>()[..] {
                        [p] => p,
                        _ => return None,
                    };
                    if !(p == &s.a || p == &s.b) || !(p == &t.a || p == &t.b) {
                        return None;
                    }
                    out.insert(p.clone());
                }
            }
        }
    }
    Some(out)
}

fn edge_midpoints(k: &PolyJordanCurve) -> impl Iterator<Item = RatPoint> + '_ {
    (0..k.n()).map(move |i| {
        let (a, b) = (k.vertex(i), k.vertex(i + 1));
        RatPoint::new(mid(&a.x, &b.x), mid(&a.y, &b.y))
    })
}

fn inside_or_on(outer: &PolyJordanCurve, k: &PolyJordanCurve) -> bool {
    k.vertices().iter().all(|p| point_in_polygon(outer.as_loop(), p) != Location::Outside)
        && edge_midpoints(k).all(|p| point_in_polygon(outer.as_loop(), &p) == Location::Inside)
}

fn meets_interior(a: &PolyJordanCurve, b: &PolyJordanCurve) -> bool {
    a.vertices().iter().chain(edge_midpoints(a).collect::<Vec<_>>().iter()).any(|p| {
        point_in_polygon(b.as_loop(), p) == Location::Inside
    })
}

/// Half-turn bucket then cross product: a strict counterclockwise order.
fn angle_cmp(u: &RatPoint, v: &RatPoint) -> std::cmp::Ordering {
    let half = |d: &RatPoint| -> u8 {
        if d.y > Rat::zero() || (d.y.is_zero() && d.x > Rat::zero()) {
            0
        } else {
            1
        }
    };
    half(u).cmp(&half(v)).then_with(|| Rat::zero().cmp(&cross(u, v)))
}

struct HalfEdge {
    from: usize,
    to: usize,
    owner: Owner,
    /// Traversed in the direction of its curve.
    forward: bool,
}

/// Boundary cycles of the subdivision, each with the face on its left.
fn face_cycles(pts: &[RatPoint], hedges: &[HalfEdge]) -> Vec<Vec<usize>> {
    let mut out_of: Vec<Vec<usize>> = vec![Vec::new(); pts.len()];
    for (h, e) in hedges.iter().enumerate() {
        out_of[e.from].push(h);
    }
    for (v, list) in out_of.iter_mut().enumerate() {
        list.sort_by(|&a, &b| angle_cmp(&(&pts[hedges[a].to] - &pts[v]), &(&pts[hedges[b].to] - &pts[v])));
    }
    let twin = |h: usize| h ^ 1;
    let next = |h: usize| -> usize {
        let v = hedges[h].to;
        let list = &out_of[v];
        let j = list.iter().position(|&x| x == twin(h)).expect("twin leaves v");
        list[(j + list.len() - 1) % list.len()]
    };
    let mut seen = vec![false; hedges.len()];
    let mut cycles = Vec::new();
    for h0 in 0..hedges.len() {
        if seen[h0] {
            continue;
        }
        let mut cyc = Vec::new();
        let mut h = h0;
        while !seen[h] {
            seen[h] = true;
            cyc.push(h);
            h = next(h);
        }
        cycles.push(cyc);
    }
    cycles
}

fn cycle_area(pts: &[RatPoint], hedges: &[HalfEdge], cyc: &[usize]) -> Rat {
    cyc.iter().map(|&h| cross(&pts[hedges[h].from], &pts[hedges[h].to])).fold(Rat::zero(), |a, b| a + b)
}

/// Checks every packing condition and extracts the contact graph and the
/// interstices.
///
/// Each piece may meet each side of the rectangle at most once, never at a
/// corner, and any two pieces at most once.
pub fn validate_packing(spec: &PackingSpec) -> Result<ValidPacking, PackingError> {
    let n = spec.pieces.len();
    if n == 0 {
        return Err(PackingError::BadInterstice("an empty packing leaves a quadrilateral".into()));
    }
    let rect = &spec.rect;
    let corners: BTreeSet<RatPoint> = rect.corner_points().into_iter().collect();
    let mut contact_points: BTreeSet<RatPoint> = corners.clone();
    let mut edges: BTreeSet<(Owner, Owner)> = (0..4).map(|k| pair(Owner::Side(k), Owner::Side((k + 1) % 4))).collect();

    for (i, k) in spec.pieces.iter().enumerate() {
        let touch = vertex_contacts(k, &rect.curve).ok_or(PackingError::PieceOutsideRect(i))?;
        if !inside_or_on(&rect.curve, k) {
            return Err(PackingError::PieceOutsideRect(i));
        }
        let mut sides = BTreeSet::new();
        for p in &touch {
            if corners.contains(p) {
                return Err(PackingError::CornerContact(i));
            }
            let v = (0..rect.curve.n()).find(|&v| rect.curve.vertex(v) == p).expect("contact is a vertex");
            let side = rect.side_of_edge(v);
            if !sides.insert(side) {
                return Err(PackingError::BadInterstice(format!(
                    "piece {} meets side {} twice",
                    i + 1,
                    SIDE_NAMES[side]
                )));
            }
            edges.insert(pair(Owner::Piece(i), Owner::Side(side)));
            contact_points.insert(p.clone());
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (&spec.pieces[i], &spec.pieces[j]);
            let touch = vertex_contacts(a, b).ok_or(PackingError::PiecesOverlap(i, j))?;
            if touch.len() > 1 || meets_interior(a, b) || meets_interior(b, a) {
                return Err(PackingError::PiecesOverlap(i, j));
            }
            if let Some(p) = touch.into_iter().next() {
                edges.insert(pair(Owner::Piece(i), Owner::Piece(j)));
                contact_points.insert(p);
            }
        }
    }

    // Planar subdivision.
    let mut ids: BTreeMap<RatPoint, usize> = BTreeMap::new();
    let mut pts: Vec<RatPoint> = Vec::new();
    let mut id = |p: &RatPoint, pts: &mut Vec<RatPoint>| -> usize {
        *ids.entry(p.clone()).or_insert_with(|| {
            pts.push(p.clone());
            pts.len() - 1
        })
    };
    let mut hedges: Vec<HalfEdge> = Vec::new();
    let mut add_curve = |c: &PolyJordanCurve, owner: &dyn Fn(usize) -> Owner, pts: &mut Vec<RatPoint>| {
        for e in 0..c.n() {
            let (a, b) = (id(c.vertex(e), pts), id(c.vertex(e + 1), pts));
            hedges.push(HalfEdge { from: a, to: b, owner: owner(e), forward: true });
            hedges.push(HalfEdge { from: b, to: a, owner: owner(e), forward: false });
        }
    };
    add_curve(&rect.curve, &|e| Owner::Side(rect.side_of_edge(e)), &mut pts);
    for (i, k) in spec.pieces.iter().enumerate() {
        add_curve(k, &|_| Owner::Piece(i), &mut pts);
    }

    let mut interstices = Vec::new();
    let mut outer = 0;
    for cyc in face_cycles(&pts, &hedges) {
        let own = |h: usize| hedges[h].owner;
        let first = own(cyc[0]);
        if let Owner::Piece(_) = first {
            if cyc.iter().all(|&h| own(h) == first && hedges[h].forward) {
                continue; // a piece's own interior
            }
        }
        if cyc.iter().all(|&h| matches!(own(h), Owner::Side(_)) && !hedges[h].forward) {
            outer += 1;
            continue;
        }
        if cycle_area(&pts, &hedges, &cyc) <= Rat::zero() {
            return Err(PackingError::BadInterstice("a complementary region is not simply connected".into()));
        }
        let ok_dir = cyc.iter().all(|&h| matches!(own(h), Owner::Side(_)) == hedges[h].forward);
        if !ok_dir {
            return Err(PackingError::BadInterstice("a complementary region lies outside the rectangle".into()));
        }
        let len = cyc.len();
        let starts: Vec<usize> = (0..len).filter(|&t| own(cyc[t]) != own(cyc[(t + len - 1) % len])).collect();
        if starts.len() != 3 {
            return Err(PackingError::BadInterstice(format!(
                "a complementary region has {} sides",
                starts.len()
            )));
        }
        let rot: Vec<usize> = (0..len).map(|t| cyc[(t + starts[0]) % len]).collect();
        let owners = [own(rot[0]), own(rot[starts[1] - starts[0]]), own(rot[starts[2] - starts[0]])];
        if owners.iter().collect::<BTreeSet<_>>().len() != 3 {
            return Err(PackingError::BadInterstice("a complementary region has a repeated side".into()));
        }
        let curve = validate_curve(rot.iter().map(|&h| pts[hedges[h].from].clone()).collect(), false)?;
        // Corner k sits between owners[k] and owners[k+1].
        let corners = [starts[1] - starts[0], starts[2] - starts[0], 0];
        interstices.push(Interstice { curve, corners, owners });
    }
    if outer != 1 {
        return Err(PackingError::BadInterstice("pieces are not all connected to the rectangle".into()));
    }

    let faces: BTreeSet<[Owner; 3]> = interstices.iter().map(|f| f.key()).collect();
    if faces.len() != interstices.len() {
        return Err(PackingError::BadInterstice("two interstices share all three sides".into()));
    }
    let graph = ContactGraph { n, edges, faces };
    check_triangulated_square(&graph)?;
    Ok(ValidPacking { spec: spec.clone(), graph, interstices, contact_points: contact_points.into_iter().collect() })
}

/// Every interior edge in two faces, each side-side edge in one, and Euler
/// characteristic one.
fn check_triangulated_square(g: &ContactGraph) -> Result<(), PackingError> {
    let mut uses: BTreeMap<(Owner, Owner), usize> = BTreeMap::new();
    for f in &g.faces {
        for (a, b) in [(f[0], f[1]), (f[1], f[2]), (f[0], f[2])] {
            *uses.entry(pair(a, b)).or_default() += 1;
        }
    }
    for e in &g.edges {
        let boundary = matches!(e, (Owner::Side(_), Owner::Side(_)));
        let want = if boundary { 1 } else { 2 };
        if uses.get(e).copied().unwrap_or(0) != want {
            return Err(PackingError::BadInterstice(format!(
                "contact {}-{} is not surrounded by triangles",
                e.0.label(),
                e.1.label()
            )));
        }
    }
    if uses.keys().any(|e| !g.edges.contains(e)) {
        return Err(PackingError::BadInterstice("an interstice corner is not a contact".into()));
    }
    let (v, e, f) = (g.n as i64 + 4, g.edges.len() as i64, g.faces.len() as i64);
    if v - e + f != 1 {
        return Err(PackingError::BadInterstice("contact graph is not a triangulated square".into()));
    }
    Ok(())
}

/// True iff `corr` (piece `i` of A to piece `corr[i]` of B, sides fixed) is
/// an isomorphism of contact graphs.
pub fn isomorphic_contact(ga: &ContactGraph, gb: &ContactGraph, corr: &[usize]) -> bool {
    if ga.n != gb.n || corr.len() != ga.n || corr.iter().collect::<BTreeSet<_>>().len() != ga.n {
        return false;
    }
    if corr.iter().any(|&j| j >= gb.n) {
        return false;
    }
    let mapped: BTreeSet<(Owner, Owner)> = ga.edges.iter().map(|&(a, b)| pair(a.relabel(corr), b.relabel(corr))).collect();
    mapped == gb.edges
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairCrossings {
    pub a: String,
    pub b: String,
    pub crossings: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OverlayReport {
    pub pairs: Vec<PairCrossings>,
    pub total: usize,
}

fn named_curves(p: &PackingSpec, tilde: bool) -> Vec<(String, &PolyJordanCurve)> {
    let t = if tilde { "~" } else { "" };
    let mut v: Vec<(String, &PolyJordanCurve)> =
        p.pieces.iter().enumerate().map(|(i, k)| (format!("K{t}{}", i + 1), k)).collect();
    v.push((format!("R{t}"), &p.rect.curve));
    v
}

/// Transverse position of two valid packings: every pair of curves crosses
/// transversely, and no point where two sets of one packing meet lies on a
/// curve of the other.
pub fn check_overlay_transverse(a: &ValidPacking, b: &ValidPacking) -> Result<OverlayReport, PackingError> {
    let ca = named_curves(&a.spec, false);
    let cb = named_curves(&b.spec, true);
    let mut pairs = Vec::new();
    for (na, ka) in &ca {
        for (nb, kb) in &cb {
            let cs = check_transverse(ka, kb).map_err(|e| PackingError::NotTransverseOverlay(format!("{na} vs {nb}: {e}")))?;
            if !cs.is_empty() {
                pairs.push(PairCrossings { a: na.clone(), b: nb.clone(), crossings: cs.len() });
            }
        }
    }
    for (pts, curves, which) in [(&a.contact_points, &cb, "first"), (&b.contact_points, &ca, "second")] {
        for p in pts {
            if let Some((name, _)) = curves.iter().find(|(_, k)| k.param_of(p).is_some()) {
                return Err(PackingError::NotTransverseOverlay(format!(
                    "a contact point of the {which} packing lies on {name}"
                )));
            }
        }
    }
    let total = pairs.iter().map(|p| p.crossings).sum();
    Ok(OverlayReport { pairs, total })
}

/// The rectangles cross four times, each of one rectangle's top and bottom
/// meeting each of the other's left and right sides once.
pub fn check_rect_configuration(r: &TopoRectangle, rt: &TopoRectangle) -> Result<(), PackingError> {
    let cs = check_transverse(&r.curve, &rt.curve)
        .map_err(|e| PackingError::HypothesesNotMet(format!("rectangles are not transverse: {e}")))?;
    let hits: BTreeSet<(usize, usize)> =
        cs.crossings.iter().map(|c| (r.side_of_edge(c.edge_k), rt.side_of_edge(c.edge_kt))).collect();
    let want = |rs: [usize; 2], ts: [usize; 2]| -> BTreeSet<(usize, usize)> {
        rs.iter().flat_map(|&x| ts.iter().map(move |&y| (x, y))).collect()
    };
    if cs.len() == 4 && (hits == want([1, 3], [0, 2]) || hits == want([0, 2], [1, 3])) {
        Ok(())
    } else {
        Err(PackingError::HypothesesNotMet(format!(
            "rectangles cross {} times, not in the interleaved configuration",
            cs.len()
        )))
    }
}

fn check_hypotheses(a: &ValidPacking, b: &ValidPacking, corr: &[usize]) -> Result<OverlayReport, PackingError> {
    if !isomorphic_contact(&a.graph, &b.graph, corr) {
        return Err(PackingError::HypothesesNotMet("contact graphs differ under the correspondence".into()));
    }
    let report = check_overlay_transverse(a, b).map_err(|e| PackingError::HypothesesNotMet(e.to_string()))?;
    check_rect_configuration(&a.spec.rect, &b.spec.rect)?;
    Ok(report)
}

/// First piece `i` such that `K_i` and `K̃_corr[i]` cut each other.
pub fn find_cutting_pair(a: &PackingSpec, b: &PackingSpec, corr: &[usize]) -> Result<usize, PackingError> {
    let (va, vb) = (validate_packing(a)?, validate_packing(b)?);
    check_hypotheses(&va, &vb, corr)?;
    for (i, &j) in corr.iter().enumerate() {
        if cuts_each_other(&a.pieces[i], &b.pieces[j])? {
            return Ok(i);
        }
    }
    Err(PackingError::TheoremViolationSuspected)
}

#[derive(Clone, Debug, Serialize)]
pub struct IntersticeEntry {
    pub owners: [String; 3],
    pub eta: i64,
    pub trace: PrescriptionTrace,
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    /// Empty packings: the rectangle itself is the only region and `φ_R`
    /// comes from its four corners.
    pub degenerate: bool,
    pub eta_r: i64,
    pub eta_pieces: Vec<i64>,
    pub interstices: Vec<IntersticeEntry>,
    pub sum_pieces: i64,
    pub sum_interstices: i64,
    pub additivity_holds: bool,
    /// Indices reachable by corner-respecting maps, degenerate mode only.
    pub corner_achievable: Option<Vec<i64>>,
    #[serde(skip)]
    pub phi_r: Option<PLCorrespondence>,
    #[serde(skip)]
    pub phi_pieces: Vec<PLCorrespondence>,
}

/// Corner-respecting maps `∂R → ∂R̃`: the achievable indices and one map.
pub fn corner_diagnostic(
    r: &TopoRectangle,
    rt: &TopoRectangle,
) -> Result<(BTreeSet<i64>, PLCorrespondence, i64), PackingError> {
    let d = build_diagram_for(&r.curve, &rt.curve, &r.corner_params(), &rt.corner_params())?;
    let achievable = oracle_enumerate(&d)?;
    let g = any_faithful(&d).ok_or_else(|| PackingError::HypothesesNotMet("no corner-respecting map".into()))?;
    let phi = realize_path(&d, &g)?;
    let eta = fixed_point_index(&r.curve, &rt.curve, &phi)?;
    Ok((achievable, phi, eta))
}

/// Builds a map on every interstice with the three corner constraints,
/// assembles the maps on the pieces and on the rectangle, and checks that
/// the index of the rectangle map is the sum of the others.
pub fn assemble_theorem_certificate(
    a: &PackingSpec,
    b: &PackingSpec,
    corr: &[usize],
) -> Result<Certificate, PackingError> {
    if a.pieces.is_empty() && b.pieces.is_empty() {
        check_rect_configuration(&a.rect, &b.rect)?;
        let (ach, _, eta_r) = corner_diagnostic(&a.rect, &b.rect)?;
        return Ok(Certificate {
            degenerate: true,
            eta_r,
            eta_pieces: vec![],
            interstices: vec![],
            sum_pieces: 0,
            sum_interstices: 0,
            additivity_holds: eta_r == 0,
            corner_achievable: Some(ach.into_iter().collect()),
            phi_r: None,
            phi_pieces: vec![],
        });
    }
    let (va, vb) = (validate_packing(a)?, validate_packing(b)?);
    check_hypotheses(&va, &vb, corr)?;
    let by_key: BTreeMap<[Owner; 3], &Interstice> = vb.interstices.iter().map(|f| (f.key(), f)).collect();

    let mut maps: Vec<(&Interstice, &Interstice, PLCorrespondence)> = Vec::new();
    let mut entries = Vec::new();
    for u in &va.interstices {
        let key = triple(u.owners.map(|o| o.relabel(corr)));
        let ut = by_key
            .get(&key)
            .ok_or_else(|| PackingError::HypothesesNotMet("interstices do not correspond".into()))?;
        let mut z = Vec::new();
        let mut zt = Vec::new();
        let mut order: Vec<usize> = (0..3).collect();
        order.sort_by_key(|&k| u.corners[k]);
        for k in order {
            let (p, q) = u.corner_owners(k);
            let want = pair(p.relabel(corr), q.relabel(corr));
            let kt = (0..3).find(|&j| ut.corner_owners(j) == want).expect("matching faces have matching corners");
            z.push(u.curve.vertex_param(u.corners[k]));
            zt.push(ut.curve.vertex_param(ut.corners[kt]));
        }
        let d = build_diagram_for(&u.curve, &ut.curve, &z, &zt)?;
        let (g, trace) = prescribe(&d)?;
        let phi = realize_path(&d, &g)?;
        let eta = fixed_point_index(&u.curve, &ut.curve, &phi)?;
        entries.push(IntersticeEntry { owners: u.owners.map(|o| o.label()), eta, trace });
        maps.push((u, ut, phi));
    }
    let pieces: Vec<crate::plmap::Piece<'_>> = maps.iter().map(|(u, ut, phi)| (&u.curve, &ut.curve, phi)).collect();
    let phi_r = assemble_by_restriction(&pieces, &a.rect.curve, &b.rect.curve)?;
    let eta_r = fixed_point_index(&a.rect.curve, &b.rect.curve, &phi_r)?;
    let mut eta_pieces = Vec::new();
    let mut phi_pieces = Vec::new();
    for (i, &j) in corr.iter().enumerate() {
        let phi = assemble_by_restriction(&pieces, &a.pieces[i], &b.pieces[j])?;
        eta_pieces.push(fixed_point_index(&a.pieces[i], &b.pieces[j], &phi)?);
        phi_pieces.push(phi);
    }
    let sum_pieces: i64 = eta_pieces.iter().sum();
    let sum_interstices: i64 = entries.iter().map(|e| e.eta).sum();
    Ok(Certificate {
        degenerate: false,
        eta_r,
        additivity_holds: eta_r == sum_pieces + sum_interstices,
        eta_pieces,
        interstices: entries,
        sum_pieces,
        sum_interstices,
        corner_achievable: None,
        phi_r: Some(phi_r),
        phi_pieces,
    })
}
