//! Faithful staircase paths with nonnegative index, built by deleting a
//! doubly adjacent crossing pair, recursing, and reinserting the pair on the
//! side of the path its box location calls for.
//!
//! Everything here is combinatorial. Sides are encoded as Δ↓ bits read from
//! the first constraint lattice point, and the reinserted path is the lowest
//! one realizing the chosen bits.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::jordan::CrossingKind;
use crate::torus::{
    constraint_pins, delta_split, index_from_torus, lowest_path, Mark, StaircasePath, TorusDiagram, TorusError,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PrescribeError {
    #[error("fewer than four crossings")]
    TooFewCrossings,
    #[error("exactly three constraint pairs are needed, got {0}")]
    WrongConstraintCount(usize),
    #[error("fewer than two qualifying doubly adjacent pairs: {0}")]
    AssumptionViolated(String),
    #[error("no reinsertion rule applies: {0}")]
    InternalCaseGap(String),
    #[error("diagram too large to enumerate")]
    TooLarge,
    #[error(transparent)]
    Torus(#[from] TorusError),
}

impl PrescribeError {
    pub fn reason(&self) -> &'static str {
        match self {
            PrescribeError::TooFewCrossings => "TooFewCrossings",
            PrescribeError::WrongConstraintCount(_) => "WrongConstraintCount",
            PrescribeError::AssumptionViolated(_) => "AssumptionViolated",
            PrescribeError::InternalCaseGap(_) => "InternalCaseGap",
            PrescribeError::TooLarge => "TooLarge",
            PrescribeError::Torus(e) => e.reason(),
        }
    }
}

/// One of the nine lattice cells, named by its direction from the centre.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Cell {
    Up,
    UpRight,
    Right,
    DownRight,
    Down,
    DownLeft,
    Left,
    UpLeft,
    Centre,
}

impl Cell {
    pub const ALL: [Cell; 9] = [
        Cell::Up,
        Cell::UpRight,
        Cell::Right,
        Cell::DownRight,
        Cell::Down,
        Cell::DownLeft,
        Cell::Left,
        Cell::UpLeft,
        Cell::Centre,
    ];

    /// Cell at column band `c` and row band `r`, both in `0..3`.
    pub fn from_bands(c: usize, r: usize) -> Cell {
        match (c, r) {
            (0, 0) => Cell::DownLeft,
            (1, 0) => Cell::Down,
            (2, 0) => Cell::DownRight,
            (0, 1) => Cell::Left,
            (1, 1) => Cell::Centre,
            (2, 1) => Cell::Right,
            (0, 2) => Cell::UpLeft,
            (1, 2) => Cell::Up,
            (2, 2) => Cell::UpRight,
            _ => panic!("band out of range"),
        }
    }

    pub fn bands(self) -> (usize, usize) {
        match self {
            Cell::DownLeft => (0, 0),
            Cell::Down => (1, 0),
            Cell::DownRight => (2, 0),
            Cell::Left => (0, 1),
            Cell::Centre => (1, 1),
            Cell::Right => (2, 1),
            Cell::UpLeft => (0, 2),
            Cell::Up => (1, 2),
            Cell::UpRight => (2, 2),
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Cell::Up => "↑",
            Cell::UpRight => "↗",
            Cell::Right => "→",
            Cell::DownRight => "↘",
            Cell::Down => "↓",
            Cell::DownLeft => "↙",
            Cell::Left => "←",
            Cell::UpLeft => "↖",
            Cell::Centre => "•",
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// How P₀ and P̃₀ sit in their box: P₀ is always on the left.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BoxArrangement {
    /// P₀ upper-left, P̃₀ lower-right.
    Descending,
    /// P₀ lower-left, P̃₀ upper-right.
    Ascending,
}

/// Category label as listed in the case table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Category {
    /// The box misses the diagonal cells.
    Cat1,
    /// One diagonal component, holding a corner of the box.
    Cat2,
    /// The box holds a constraint lattice point.
    Cat3,
    SpecialLeftDown,
    SpecialLeftRight,
    Forbidden,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdjacencyBox {
    /// Crossing ids of P₀ and P̃₀.
    pub p0: usize,
    pub pt0: usize,
    /// Constraint used as base point for this box.
    pub base: usize,
    /// Doubled column interval in the rebased frame (odd endpoints).
    pub cols: (i64, i64),
    /// Doubled row interval in the rebased frame, lifted so `lo < hi`.
    pub rows: (i64, i64),
    pub r: Cell,
    pub s: Cell,
    pub arrangement: BoxArrangement,
    /// The row interval runs over the first constraint's row.
    pub wraps: bool,
}

/// The case table, one entry per `(r, s)`.
pub fn table_category(r: Cell, s: Cell) -> Category {
    use Category::*;
    use Cell::*;
    match (r, s) {
        (UpLeft, Up) | (UpLeft, UpLeft) => Cat1,
        (UpLeft, UpRight) | (UpLeft, DownRight) | (UpLeft, Down) | (UpLeft, DownLeft) => Cat2,
        (UpLeft, Right) | (UpLeft, Centre) => Cat3,
        (UpLeft, Left) => Forbidden,
        (Left, Left) | (Left, UpLeft) => Cat1,
        (Left, Up) | (Left, DownLeft) | (Left, Centre) => Cat2,
        (Left, UpRight) | (Left, DownRight) => Cat3,
        (Left, Right) => SpecialLeftRight,
        (Left, Down) => SpecialLeftDown,
        (DownLeft, DownRight)
        | (DownLeft, Down)
        | (DownLeft, DownLeft)
        | (DownLeft, Left)
        | (DownLeft, UpLeft) => Cat2,
        (DownLeft, Up) | (DownLeft, UpRight) | (DownLeft, Right) | (DownLeft, Centre) => Cat3,
        _ => panic!("r must lie in the left column"),
    }
}

/// Category read off the shape of a box on the 3×3 grid.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BoxShape {
    pub misses_diagonal: bool,
    pub holds_lattice_point: bool,
    pub single_corner_component: bool,
}

/// Shape of the box from the lower-left corner's cell `r` to the
/// upper-right corner's cell `s`, with both corners well inside their cells.
pub fn box_shape(r: Cell, s: Cell) -> BoxShape {
    let (rc, rr) = r.bands();
    let (sc, sr) = s.bands();
    assert_eq!(rc, 0);
    // Unit grid with lines at 1, 2 (and 3k for rows); corners 1/4 inside.
    let (xlo, xhi) = (1i64, 4 * sc as i64 + 3);
    let ylo = 4 * rr as i64 + 1;
    let mut yhi = 4 * sr as i64 + 3;
    if sr < rr {
        yhi += 12;
    }
    let xs: Vec<i64> = std::iter::once(xlo).chain([4, 8].into_iter().filter(|g| xlo < *g && *g < xhi)).chain([xhi]).collect();
    let ys: Vec<i64> =
        std::iter::once(ylo).chain((1..6).map(|k| 4 * k).filter(|g| ylo < *g && *g < yhi)).chain([yhi]).collect();
    let mut diag = Vec::new();
    for i in 0..xs.len() - 1 {
        for j in 0..ys.len() - 1 {
            let cx = (xs[i] + xs[i + 1]) / 2 / 4;
            let cy = ((ys[j] + ys[j + 1]) / 2).rem_euclid(12) / 4;
            if cx == cy {
                diag.push((i, j));
            }
        }
    }
    let (ni, nj) = (xs.len() - 2, ys.len() - 2);
    let corner = |&(i, j): &(usize, usize)| (i == 0 || i == ni) && (j == 0 || j == nj);
    let holds_lattice_point = [4i64, 8].iter().any(|&g| xlo < g && g < xhi && [g, g + 12].iter().any(|&h| ylo < h && h < yhi));
    BoxShape {
        misses_diagonal: diag.is_empty(),
        holds_lattice_point,
        single_corner_component: diag.len() == 1 && corner(&diag[0]),
    }
}

/// The diagram read from constraint `j`, and the doubled offset of that
/// constraint's lattice point in the original.
pub fn rebased(d: &TorusDiagram, j: usize) -> (TorusDiagram, (i64, i64)) {
    let nc = d.n_constraints();
    let relabel = |m: &Mark| match *m {
        Mark::Constraint(i) => Mark::Constraint((i + nc - j) % nc),
        other => other,
    };
    let rot = |order: &[Mark], at: usize| -> Vec<Mark> {
        order[at..].iter().chain(order[..at].iter()).map(relabel).collect()
    };
    let (cj, rj) = (d.constraint_col[j], d.constraint_row[j]);
    let out = TorusDiagram::from_orders(rot(&d.cols, cj), rot(&d.rows, rj), d.kinds.clone(), d.nesting)
        .expect("rotation keeps the diagram valid");
    (out, (2 * cj as i64, 2 * rj as i64))
}

/// Constraint band of a doubled coordinate off the grid lines, read from constraint 0.
fn band(lines: &[usize], period: i64, x: i64) -> usize {
    let x = x.rem_euclid(period);
    lines[1..].iter().filter(|&&c| 2 * (c as i64) < x).count()
}

fn col_band(d: &TorusDiagram, x: i64) -> usize {
    band(&d.constraint_col, d.period(), x)
}

fn row_band(d: &TorusDiagram, y: i64) -> usize {
    band(&d.constraint_row, d.period(), y)
}

/// Crossings in cyclic order along one circle.
fn crossing_order(order: &[Mark]) -> Vec<usize> {
    order.iter().filter_map(|m| if let Mark::Crossing(c) = m { Some(*c) } else { None }).collect()
}

/// Doubly adjacent pairs with P₀ immediately before P̃₀ along ∂K, each with
/// its box drawn from the last constraint before P₀.
pub fn find_doubly_adjacent(d: &TorusDiagram) -> Result<Vec<AdjacencyBox>, PrescribeError> {
    if d.n_constraints() != 3 {
        return Err(PrescribeError::WrongConstraintCount(d.n_constraints()));
    }
    let m = d.n_crossings();
    if m < 4 {
        return Err(PrescribeError::TooFewCrossings);
    }
    let co = crossing_order(&d.cols);
    let ro = crossing_order(&d.rows);
    let rpos: Vec<usize> = {
        let mut v = vec![0; m];
        for (i, &c) in ro.iter().enumerate() {
            v[c] = i;
        }
        v
    };
    let mut out = Vec::new();
    for i in 0..m {
        let (p0, pt0) = (co[i], co[(i + 1) % m]);
        if d.kinds[p0] != CrossingKind::P {
            continue;
        }
        let arrangement = if rpos[pt0] == (rpos[p0] + 1) % m {
            BoxArrangement::Ascending
        } else if rpos[p0] == (rpos[pt0] + 1) % m {
            BoxArrangement::Descending
        } else {
            continue;
        };
        // Last constraint at or before P₀'s column.
        let col0 = d.crossing_col[p0];
        let base = (0..3).filter(|&j| d.constraint_col[j] < col0).max().unwrap_or(2);
        let (db, _) = rebased(d, base);
        let p = db.period();
        let x_lo = 2 * db.crossing_col[p0] as i64 - 1;
        let mut x_hi = 2 * db.crossing_col[pt0] as i64 + 1;
        if x_hi < x_lo {
            x_hi += p;
        }
        let (lo_c, hi_c) = match arrangement {
            BoxArrangement::Descending => (pt0, p0),
            BoxArrangement::Ascending => (p0, pt0),
        };
        let y_lo = 2 * db.crossing_row[lo_c] as i64 - 1;
        let mut y_hi = 2 * db.crossing_row[hi_c] as i64 + 1;
        if y_hi < y_lo {
            y_hi += p;
        }
        let r = Cell::from_bands(col_band(&db, x_lo), row_band(&db, y_lo));
        let s = Cell::from_bands(col_band(&db, x_hi), row_band(&db, y_hi));
        out.push(AdjacencyBox {
            p0,
            pt0,
            base,
            cols: (x_lo, x_hi),
            rows: (y_lo, y_hi),
            r,
            s,
            arrangement,
            wraps: y_hi > p,
        });
    }
    if out.len() < 2 {
        return Err(PrescribeError::AssumptionViolated(format!("{} qualifying pairs in\n{}", out.len(), d.dump())));
    }
    Ok(out)
}

pub fn classify_box(b: &AdjacencyBox) -> Category {
    table_category(b.r, b.s)
}

/// Which argument placed the reinserted pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Rule {
    /// The path misses the box: both marks on the side the cells force.
    MissesBox,
    /// The path meets one corner component; shrink the box away from it.
    ShrinkBox,
    LateCase1,
    LateCase2,
    LateCase3,
    LateCase4,
    SpecialLeftRight,
}

impl Rule {
    /// Change of w from the sub-level path.
    pub fn predicted_gain(self) -> i64 {
        match self {
            Rule::LateCase1 | Rule::LateCase2 | Rule::SpecialLeftRight => 1,
            _ => 0,
        }
    }
}

pub fn dispatch(b: &AdjacencyBox) -> Option<Rule> {
    Some(match classify_box(b) {
        Category::Cat1 => Rule::MissesBox,
        Category::Cat2 | Category::SpecialLeftDown => Rule::ShrinkBox,
        Category::SpecialLeftRight => Rule::SpecialLeftRight,
        Category::Cat3 => match (b.arrangement, b.wraps) {
            (BoxArrangement::Descending, false) => Rule::LateCase1,
            (BoxArrangement::Descending, true) => Rule::LateCase2,
            (BoxArrangement::Ascending, false) => Rule::LateCase3,
            (BoxArrangement::Ascending, true) => Rule::LateCase4,
        },
        Category::Forbidden => return None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum LevelKind {
    NoCrossings,
    TwoCrossings,
    /// All crossings in one lattice row (`true`) or column.
    SingleBand { row: bool, band: usize },
    Reinsert {
        box_: AdjacencyBox,
        category: Category,
        rule: Rule,
        bits: (bool, bool),
        /// The rule's own placement was infeasible.
        fallback: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceLevel {
    pub depth: usize,
    pub crossings: usize,
    pub kind: LevelKind,
    pub w: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrescriptionTrace {
    /// Outermost level first.
    pub levels: Vec<TraceLevel>,
}

impl PrescriptionTrace {
    pub fn depth(&self) -> usize {
        self.levels.iter().filter(|l| matches!(l.kind, LevelKind::Reinsert { .. })).count()
    }

    pub fn w(&self) -> i64 {
        self.levels[0].w
    }
}

/// The path read from its visit to lattice point `q`, started exactly at `q`.
pub fn reroot_at(d: &TorusDiagram, g: &StaircasePath, q: (i64, i64)) -> Option<StaircasePath> {
    let p = d.period();
    let verts = g.vertices();
    let k = (0..g.steps.len()).find(|&k| (verts[k].0 - q.0).rem_euclid(p) == 0 && (verts[k].1 - q.1).rem_euclid(p) == 0)?;
    let mut out = g.rerooted(k);
    out.start = q;
    Some(out)
}

fn translate(g: StaircasePath, off: (i64, i64)) -> StaircasePath {
    StaircasePath { start: (g.start.0 + off.0, g.start.1 + off.1), steps: g.steps }
}

fn w_of(d: &TorusDiagram, g: &StaircasePath) -> Result<i64, PrescribeError> {
    Ok(index_from_torus(d, g)?.eq1)
}

/// Δ↓ bits a faithful path must have: a mark off the diagonal cells lies
/// below every faithful path iff its column band exceeds its row band.
pub fn forced_bits(d: &TorusDiagram) -> Vec<Option<bool>> {
    (0..d.n_crossings())
        .map(|c| {
            let (a, b) = d.crossing_point(c);
            let (cb, rb) = (col_band(d, a), row_band(d, b));
            if cb == rb {
                None
            } else {
                Some(cb > rb)
            }
        })
        .collect()
}

/// The first faithful path found by scanning the free Δ↓ bits in order.
pub fn any_faithful(d: &TorusDiagram) -> Option<StaircasePath> {
    let forced = forced_bits(d);
    let free: Vec<usize> = (0..forced.len()).filter(|&c| forced[c].is_none()).collect();
    let pins = constraint_pins(d);
    (0u64..1 << free.len()).find_map(|mask| {
        let mut bits: Vec<bool> = forced.iter().map(|f| f.unwrap_or(false)).collect();
        for (k, &c) in free.iter().enumerate() {
            bits[c] = mask >> k & 1 == 1;
        }
        lowest_path(d, (0, 0), &bits, &pins)
    })
}

fn single_band(d: &TorusDiagram) -> Option<(bool, usize)> {
    let m = d.n_crossings();
    let rb: BTreeSet<usize> = (0..m).map(|c| row_band(d, d.crossing_point(c).1)).collect();
    if rb.len() == 1 {
        return Some((true, *rb.iter().next().unwrap()));
    }
    let cb: BTreeSet<usize> = (0..m).map(|c| col_band(d, d.crossing_point(c).0)).collect();
    if cb.len() == 1 {
        return Some((false, *cb.iter().next().unwrap()));
    }
    None
}

/// Picks the box to work with: not forbidden, then P₀ earliest after z₁.
pub fn choose_box(boxes: &[AdjacencyBox], d: &TorusDiagram) -> Option<AdjacencyBox> {
    boxes
        .iter()
        .filter(|b| classify_box(b) != Category::Forbidden)
        .min_by_key(|b| d.crossing_col[b.p0])
        .cloned()
}

/// Candidate bits `(P₀ below, P̃₀ below)` for a rule, best first.
fn candidate_bits(rule: Rule, b: &AdjacencyBox, forced: &[Option<bool>]) -> Vec<(bool, bool)> {
    let (f0, f1) = (forced[b.p0], forced[b.pt0]);
    let same_side = || match (f0, f1) {
        (Some(x), None) | (None, Some(x)) => vec![(x, x)],
        (Some(x), Some(y)) if x == y => vec![(x, x)],
        (Some(_), Some(_)) => vec![],
        (None, None) => vec![(false, false), (true, true)],
    };
    match rule {
        Rule::MissesBox | Rule::ShrinkBox if b.wraps => {
            // The part past the first row lies in the bottom row, under the path.
            let p0_low = match b.arrangement {
                BoxArrangement::Descending => true,
                BoxArrangement::Ascending => false,
            };
            vec![(p0_low, !p0_low)]
        }
        Rule::MissesBox | Rule::ShrinkBox | Rule::LateCase3 => same_side(),
        Rule::LateCase1 | Rule::LateCase4 | Rule::SpecialLeftRight => vec![(false, true)],
        // P₀'s cell usually forces it above; then both go above, still +1.
        Rule::LateCase2 => {
            let mut v = vec![(true, false)];
            v.extend(same_side());
            v
        }
    }
}

fn solve(d: &TorusDiagram, depth: usize, levels: &mut Vec<TraceLevel>) -> Result<StaircasePath, PrescribeError> {
    let m = d.n_crossings();
    let at = levels.len();
    let push = |levels: &mut Vec<TraceLevel>, kind: LevelKind, w: i64| {
        levels.insert(at, TraceLevel { depth, crossings: m, kind, w });
    };
    let gap = |msg: &str| PrescribeError::InternalCaseGap(format!("{msg} at depth {depth} in\n{}", d.dump()));
    if m == 0 {
        let g = lowest_path(d, (0, 0), &[], &constraint_pins(d)).ok_or_else(|| gap("no diagonal path"))?;
        push(levels, LevelKind::NoCrossings, w_of(d, &g)?);
        return Ok(g);
    }
    if m == 2 {
        let g = any_faithful(d).ok_or_else(|| gap("no faithful path"))?;
        push(levels, LevelKind::TwoCrossings, w_of(d, &g)?);
        return Ok(g);
    }
    if let Some((row, band)) = single_band(d) {
        let (db, off) = rebased(d, band);
        let bits = vec![row; m];
        let g = lowest_path(&db, (0, 0), &bits, &constraint_pins(&db)).ok_or_else(|| gap("single band"))?;
        let g = translate(g, off);
        push(levels, LevelKind::SingleBand { row, band }, w_of(d, &g)?);
        return Ok(g);
    }
    let boxes = find_doubly_adjacent(d)?;
    let b = choose_box(&boxes, d).ok_or_else(|| gap("only forbidden boxes"))?;
    let category = classify_box(&b);
    let rule = dispatch(&b).expect("forbidden boxes are filtered");
    let (db, off) = rebased(d, b.base);
    let dp = db.without_pair(b.p0, b.pt0);
    let sub = solve(&dp, depth + 1, levels)?;
    let sub = reroot_at(&dp, &sub, (0, 0)).ok_or_else(|| gap("sub-level path is not faithful"))?;
    let w_sub = w_of(&dp, &sub)?;
    let old = delta_split(&dp, &sub)?.below;
    let remap = |c: usize| c - (c > b.p0) as usize - (c > b.pt0) as usize;
    let forced = forced_bits(&db);
    let pins = constraint_pins(&db);
    let place = |b0: bool, b1: bool| -> Option<StaircasePath> {
        let bits: Vec<bool> = (0..m)
            .map(|c| {
                if c == b.p0 {
                    b0
                } else if c == b.pt0 {
                    b1
                } else {
                    old[remap(c)]
                }
            })
            .collect();
        lowest_path(&db, (0, 0), &bits, &pins)
    };
    let candidates = candidate_bits(rule, &b, &forced);
    for &(b0, b1) in &candidates {
        if let Some(g) = place(b0, b1) {
            let w = w_of(&db, &g)?;
            if w - w_sub != rule.predicted_gain() {
                return Err(gap(&format!("{rule:?} gave {} not {}", w - w_sub, rule.predicted_gain())));
            }
            push(levels, LevelKind::Reinsert { box_: b, category, rule, bits: (b0, b1), fallback: false }, w);
            return Ok(translate(g, off));
        }
    }
    // The rule's placement is blocked by the cells the marks sit in; take
    // the best remaining placement that does not lower w.
    let mut best: Option<(i64, (bool, bool), StaircasePath)> = None;
    for bits in [(false, false), (true, true), (false, true), (true, false)] {
        if candidates.contains(&bits) {
            continue;
        }
        if let Some(g) = place(bits.0, bits.1) {
            let w = w_of(&db, &g)?;
            if w >= w_sub && best.as_ref().is_none_or(|(bw, _, _)| w > *bw) {
                best = Some((w, bits, g));
            }
        }
    }
    match best {
        Some((w, bits, g)) => {
            push(levels, LevelKind::Reinsert { box_: b, category, rule, bits, fallback: true }, w);
            Ok(translate(g, off))
        }
        None => Err(gap(&format!("{rule:?} has no feasible placement for ({}, {})", b.r, b.s))),
    }
}

/// A faithful path avoiding every crossing mark with `w ≥ 0`, and the trace
/// of how it was built.
pub fn prescribe(d: &TorusDiagram) -> Result<(StaircasePath, PrescriptionTrace), PrescribeError> {
    if d.n_constraints() != 3 {
        return Err(PrescribeError::WrongConstraintCount(d.n_constraints()));
    }
    let mut levels = Vec::new();
    let g = solve(d, 0, &mut levels)?;
    let g = reroot_at(d, &g, (0, 0)).ok_or_else(|| PrescribeError::InternalCaseGap("result not faithful".into()))?;
    let w = w_of(d, &g)?;
    if w < 0 || w != levels[0].w || !g.is_faithful(d) {
        return Err(PrescribeError::InternalCaseGap(format!("final path has w = {w}")));
    }
    Ok((g, PrescriptionTrace { levels }))
}

/// Every w reached by a faithful path avoiding the crossing marks.
///
/// Enumerates Δ↓ bits over the marks in diagonal cells; marks elsewhere are
/// forced. Works for any number of constraints.
pub fn oracle_enumerate(d: &TorusDiagram) -> Result<BTreeSet<i64>, PrescribeError> {
    if d.n_crossings() > 12 {
        return Err(PrescribeError::TooLarge);
    }
    let forced = forced_bits(d);
    let free: Vec<usize> = (0..forced.len()).filter(|&c| forced[c].is_none()).collect();
    let pins = constraint_pins(d);
    let mut out = BTreeSet::new();
    for mask in 0u64..1 << free.len() {
        let mut bits: Vec<bool> = forced.iter().map(|f| f.unwrap_or(false)).collect();
        for (k, &c) in free.iter().enumerate() {
            bits[c] = mask >> k & 1 == 1;
        }
        if let Some(g) = lowest_path(d, (0, 0), &bits, &pins) {
            debug_assert!(g.is_faithful(d));
            out.insert(w_of(d, &g)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_geom::rat;
    use crate::exact_geom::Rat;
    use crate::fixtures;
    use crate::gen;
    use crate::jordan::{canonical_noncut_pair, check_transverse, PolyJordanCurve};
    use crate::plmap::fixed_point_index;
    use crate::torus::{build_diagram, build_diagram_for, realize_path};
    use proptest::prelude::*;
    use Cell::*;

    const LEFT: [Cell; 3] = [UpLeft, Left, DownLeft];

    fn sq(x: i64, y: i64, s: i64) -> PolyJordanCurve {
        PolyJordanCurve::from_ints(&[(x, y), (x + s, y), (x + s, y + s), (x, y + s)]).unwrap()
    }

    fn three() -> Vec<Rat> {
        vec![rat(1, 16), rat(5, 16), rat(9, 16)]
    }

    #[test]
    fn table_agrees_with_box_geometry() {
        let mut disagree = Vec::new();
        for r in LEFT {
            for s in Cell::ALL {
                let sh = box_shape(r, s);
                let ok = match table_category(r, s) {
                    Category::Cat1 => sh.misses_diagonal,
                    Category::Cat2 => sh.single_corner_component && !sh.holds_lattice_point,
                    Category::Cat3 => sh.holds_lattice_point,
                    _ => !sh.misses_diagonal && !sh.holds_lattice_point && !sh.single_corner_component,
                };
                if !ok {
                    disagree.push((r, s));
                }
            }
        }
        assert_eq!(disagree, vec![(UpLeft, DownRight)]);
    }

    #[test]
    fn lattice_subcases_are_three_and_five() {
        let mut wrapping = Vec::new();
        let mut flat = Vec::new();
        for r in LEFT {
            for s in Cell::ALL {
                if table_category(r, s) == Category::Cat3 {
                    if s.bands().1 < r.bands().1 {
                        wrapping.push((r, s));
                    } else {
                        flat.push((r, s));
                    }
                }
            }
        }
        wrapping.sort();
        flat.sort();
        let mut w = vec![(UpLeft, Centre), (UpLeft, Right), (Left, DownRight)];
        let mut f = vec![(DownLeft, Centre), (DownLeft, Up), (DownLeft, UpRight), (DownLeft, Right), (Left, UpRight)];
        w.sort();
        f.sort();
        assert_eq!(wrapping, w);
        assert_eq!(flat, f);
    }

    #[test]
    fn every_cell_pair_dispatches_except_forbidden() {
        for r in LEFT {
            for s in Cell::ALL {
                let b = AdjacencyBox {
                    p0: 0,
                    pt0: 1,
                    base: 0,
                    cols: (0, 0),
                    rows: (0, 0),
                    r,
                    s,
                    arrangement: BoxArrangement::Ascending,
                    wraps: false,
                };
                assert_eq!(dispatch(&b).is_none(), (r, s) == (UpLeft, Left));
            }
        }
    }

    /// Doubly adjacent pairs straight from the crossing parameters.
    fn adjacent_from_geometry(k: &PolyJordanCurve, kt: &PolyJordanCurve) -> usize {
        let cs = check_transverse(k, kt).unwrap();
        let m = cs.len();
        let by_kt = cs.order_along_kt();
        let pos_kt = |c: usize| by_kt.iter().position(|&x| x == c).unwrap();
        (0..m)
            .filter(|&i| {
                let j = (i + 1) % m;
                let (a, b) = (pos_kt(i), pos_kt(j));
                cs.crossings[i].kind == CrossingKind::P && ((a + 1) % m == b || (b + 1) % m == a)
            })
            .count()
    }

    #[test]
    fn two_bump_pairs() {
        let (k, kt, z, zt) = fixtures::two_bump();
        let d = build_diagram_for(&k, &kt, &z, &zt).unwrap();
        let boxes = find_doubly_adjacent(&d).unwrap();
        assert_eq!(boxes.len(), adjacent_from_geometry(&k, &kt));
        assert_eq!(boxes.len(), 2);
        assert!(boxes.iter().all(|b| b.arrangement == BoxArrangement::Descending));
    }

    #[test]
    fn too_few_crossings() {
        let (k, kt) = canonical_noncut_pair(1);
        let d = build_diagram_for(&k, &kt, &[rat(0, 1), rat(1, 4), rat(1, 2)], &[rat(0, 1), rat(1, 4), rat(1, 2)]);
        let d = d.or_else(|_| build_diagram_for(&k, &kt, &three(), &[rat(1, 9), rat(2, 9), rat(3, 9)])).unwrap();
        assert_eq!(find_doubly_adjacent(&d).unwrap_err(), PrescribeError::TooFewCrossings);
        let (_, tr) = prescribe(&d).unwrap();
        assert_eq!(tr.levels[0].kind, LevelKind::TwoCrossings);
    }

    #[test]
    fn disjoint_and_nested() {
        let d = build_diagram_for(&sq(0, 0, 2), &sq(5, 0, 2), &three(), &three()).unwrap();
        let (g, tr) = prescribe(&d).unwrap();
        assert_eq!((tr.w(), tr.depth()), (0, 0));
        assert!(g.is_faithful(&d));
        let d = build_diagram_for(&sq(1, 1, 1), &sq(0, 0, 4), &three(), &three()).unwrap();
        assert_eq!(prescribe(&d).unwrap().1.w(), 1);
    }

    #[test]
    fn wrong_constraint_count() {
        let (k, kt, _) = fixtures::fig2();
        let c = fixtures::fig2_corners();
        let d = build_diagram_for(&k, &kt, &c, &c).unwrap();
        assert_eq!(prescribe(&d).unwrap_err(), PrescribeError::WrongConstraintCount(4));
    }

    #[test]
    fn three_points_can_be_met_four_cannot() {
        let (k, kt, _) = fixtures::fig2();
        let c = fixtures::fig2_corners();
        let d4 = build_diagram_for(&k, &kt, &c, &c).unwrap();
        let all4 = oracle_enumerate(&d4).unwrap();
        assert!(!all4.is_empty() && all4.iter().all(|&w| w < 0));
        let d3 = build_diagram_for(&k, &kt, &c[..3], &c[..3]).unwrap();
        let all3 = oracle_enumerate(&d3).unwrap();
        let (g, tr) = prescribe(&d3).unwrap();
        assert!(all3.contains(&tr.w()) && tr.w() >= 0);
        let phi = realize_path(&d3, &g).unwrap();
        assert_eq!(fixed_point_index(&k, &kt, &phi).unwrap(), tr.w());
    }

    #[test]
    fn two_bump_prescription() {
        let (k, kt, z, zt) = fixtures::two_bump();
        let d = build_diagram_for(&k, &kt, &z, &zt).unwrap();
        let (_, tr) = prescribe(&d).unwrap();
        assert!(matches!(tr.levels[0].kind, LevelKind::SingleBand { .. }));
        assert!(tr.w() >= 0);

        let (k, kt, z, zt) = fixtures::two_bump_boxed();
        let d = build_diagram_for(&k, &kt, &z, &zt).unwrap();
        let (g, tr) = prescribe(&d).unwrap();
        assert_eq!(tr.depth(), 1);
        assert!(matches!(tr.levels[1].kind, LevelKind::TwoCrossings));
        assert!(oracle_enumerate(&d).unwrap().contains(&tr.w()));
        let phi = realize_path(&d, &g).unwrap();
        assert_eq!(fixed_point_index(&k, &kt, &phi).unwrap(), tr.w());
        assert!(tr.w() >= 0);
    }

    #[test]
    fn oracle_rejects_large() {
        let (k, kt) = canonical_noncut_pair(7);
        let z = vec![rat(0, 1), rat(1, 4), rat(1, 2)];
        let zt = gen::random_constraints(&mut gen::rng(1), &kt, &k, 3);
        let d = build_diagram_for(&k, &kt, &z, &zt).unwrap();
        assert_eq!(oracle_enumerate(&d).unwrap_err(), PrescribeError::TooLarge);
    }

    fn top_rule(dump: &str) -> (Rule, bool, i64, i64) {
        let d = crate::io::parse_dump(dump).unwrap();
        let (g, tr) = prescribe(&d).unwrap();
        assert!(g.is_faithful(&d));
        assert!(oracle_enumerate(&d).unwrap().contains(&tr.w()));
        match &tr.levels[0].kind {
            LevelKind::Reinsert { rule, fallback, box_, .. } => {
                assert!(box_.arrangement == BoxArrangement::Descending);
                (*rule, *fallback, tr.levels[0].w, tr.levels[1].w)
            }
            k => panic!("unexpected top level {k:?}"),
        }
    }

    #[test]
    fn late_case_one_gains_one() {
        let (rule, fb, w, w_sub) = top_rule("cols: z1 z2 P1 z3 P~1 P2 P~2\nrows: z~1 z~2 P2 P~1 z~3 P1 P~2\n");
        assert_eq!((rule, fb, w - w_sub), (Rule::LateCase1, false, 1));
    }

    #[test]
    fn late_case_two_gains_one() {
        let (rule, fb, w, w_sub) = top_rule("cols: z1 z2 P1 z3 P~1 P2 P~2\nrows: z~1 P2 P~1 z~2 z~3 P1 P~2\n");
        assert_eq!((rule, fb, w - w_sub), (Rule::LateCase2, false, 1));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn prescription_is_sound(seed in any::<u64>()) {
            let mut rng = gen::rng(seed);
            let (k, kt, cs) = gen::random_pair(&mut rng, 4, 8);
            let z = gen::random_constraints(&mut rng, &k, &kt, 3);
            let zt = gen::random_constraints(&mut rng, &kt, &k, 3);
            let d = build_diagram(&k, &kt, &cs, &z, &zt).unwrap();
            let (g, tr) = prescribe(&d).unwrap();
            prop_assert!(g.is_faithful(&d));
            prop_assert!(tr.w() >= 0);
            prop_assert!(oracle_enumerate(&d).unwrap().contains(&tr.w()));
            let phi = realize_path(&d, &g).unwrap();
            prop_assert_eq!(fixed_point_index(&k, &kt, &phi).unwrap(), tr.w());
            prop_assert_eq!(find_doubly_adjacent(&d).unwrap().len(), adjacent_from_geometry(&k, &kt));
        }

        /// Reading the torus from another constraint changes nothing reachable.
        #[test]
        fn base_point_independent(seed in any::<u64>(), j in 0usize..3) {
            let mut rng = gen::rng(seed);
            let (k, kt, cs) = gen::random_pair(&mut rng, 2, 8);
            let z = gen::random_constraints(&mut rng, &k, &kt, 3);
            let zt = gen::random_constraints(&mut rng, &kt, &k, 3);
            let d = build_diagram(&k, &kt, &cs, &z, &zt).unwrap();
            let (db, _) = rebased(&d, j);
            prop_assert_eq!(oracle_enumerate(&d).unwrap(), oracle_enumerate(&db).unwrap());
            prop_assert!(prescribe(&db).unwrap().1.w() >= 0);
        }
    }
}
