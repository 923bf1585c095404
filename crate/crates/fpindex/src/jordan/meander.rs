//! Combinatorial configurations of two transverse Jordan curves.
//!
//! Put the `2m` crossings on a circle standing for ∂K, numbered
//! counterclockwise. ∂K̃ is then an inner non-crossing matching (its arcs
//! inside K) together with an outer one, whose union is a single cycle. One of
//! the outer regions holds the point at infinity. Configurations are compared
//! up to rotation of the numbering.

use std::collections::VecDeque;

use super::{ArcCurve, Arrangement, CrossingSet};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MeanderConfig {
    pub inner: Vec<usize>,
    pub outer: Vec<usize>,
    /// Smallest circle arc index bordering the outer region that holds ∞.
    pub infinity: usize,
}

/// All non-crossing perfect matchings of `0..n`, as partner arrays.
pub fn noncrossing_matchings(n: usize) -> Vec<Vec<usize>> {
    fn rec(pts: &[usize], out: &mut Vec<Vec<(usize, usize)>>) {
        if pts.is_empty() {
            out.push(Vec::new());
            return;
        }
        let first = pts[0];
        for j in (1..pts.len()).step_by(2) {
            let mut inside = Vec::new();
            rec(&pts[1..j], &mut inside);
            let mut rest = Vec::new();
            rec(&pts[j + 1..], &mut rest);
            for a in &inside {
                for b in &rest {
                    let mut v = vec![(first, pts[j])];
                    v.extend(a.iter().copied());
                    v.extend(b.iter().copied());
                    out.push(v);
                }
            }
        }
    }
    assert!(n.is_multiple_of(2));
    let pts: Vec<usize> = (0..n).collect();
    let mut pairs = Vec::new();
    rec(&pts, &mut pairs);
    pairs
        .into_iter()
        .map(|ps| {
            let mut m = vec![0; n];
            for (a, b) in ps {
                m[a] = b;
                m[b] = a;
            }
            m
        })
        .collect()
}

/// Region id (smallest member) of each circle arc, for one side's matching.
/// Arc `i` runs from point `i` to point `i + 1`.
pub fn regions(matching: &[usize]) -> Vec<usize> {
    let n = matching.len();
    let mut id = vec![usize::MAX; n];
    for s in 0..n {
        if id[s] != usize::MAX {
            continue;
        }
        let mut orbit = vec![s];
        let mut i = matching[(s + 1) % n];
        while i != s {
            orbit.push(i);
            i = matching[(i + 1) % n];
        }
        let r = *orbit.iter().min().unwrap();
        for a in orbit {
            id[a] = r;
        }
    }
    id
}

pub fn is_single_cycle(inner: &[usize], outer: &[usize]) -> bool {
    let n = inner.len();
    let mut len = 0;
    let mut p = 0;
    loop {
        p = outer[inner[p]];
        len += 2;
        if p == 0 {
            break;
        }
    }
    len == n
}

/// Inside-K̃ flag per inner region and per outer region (indexed by region id).
pub fn kt_labels(cfg: &MeanderConfig) -> (Vec<Option<bool>>, Vec<Option<bool>>) {
    let n = cfg.inner.len();
    let ri = regions(&cfg.inner);
    let ro = regions(&cfg.outer);
    // Nodes: inner region r -> r, outer region r -> n + r.
    let mut adj: Vec<Vec<(usize, bool)>> = vec![Vec::new(); 2 * n];
    for i in 0..n {
        // Crossing a circle arc keeps the K̃ side.
        adj[ri[i]].push((n + ro[i], false));
        adj[n + ro[i]].push((ri[i], false));
        // Crossing the chord at point i flips it.
        let prev = (i + n - 1) % n;
        for (reg, off) in [(&ri, 0), (&ro, n)] {
            let a = off + reg[prev];
            let b = off + reg[i];
            adj[a].push((b, true));
            adj[b].push((a, true));
        }
    }
    let mut lab: Vec<Option<bool>> = vec![None; 2 * n];
    let start = n + ro[cfg.infinity];
    lab[start] = Some(false);
    let mut q = VecDeque::from([start]);
    while let Some(u) = q.pop_front() {
        let lu = lab[u].unwrap();
        for &(v, flip) in &adj[u] {
            let lv = lu ^ flip;
            match lab[v] {
                None => {
                    lab[v] = Some(lv);
                    q.push_back(v);
                }
                Some(x) => assert_eq!(x, lv, "inconsistent meander labels"),
            }
        }
    }
    let inner = (0..n).map(|r| if ri.contains(&r) { lab[r] } else { None }).collect();
    let outer = (0..n).map(|r| if ro.contains(&r) { lab[n + r] } else { None }).collect();
    (inner, outer)
}

pub fn is_cutting(cfg: &MeanderConfig) -> bool {
    let (inner, outer) = kt_labels(cfg);
    let k_minus = inner.iter().filter(|l| **l == Some(false)).count();
    let kt_minus = outer.iter().filter(|l| **l == Some(true)).count();
    k_minus > 1 || kt_minus > 1
}

fn rotate(cfg: &MeanderConfig, r: usize) -> MeanderConfig {
    let n = cfg.inner.len();
    let mut inner = vec![0; n];
    let mut outer = vec![0; n];
    for i in 0..n {
        inner[(i + r) % n] = (cfg.inner[i] + r) % n;
        outer[(i + r) % n] = (cfg.outer[i] + r) % n;
    }
    let ro_old = regions(&cfg.outer);
    let ro_new = regions(&outer);
    // Any arc of the old infinity region, shifted, lies in the new one.
    let arc = (0..n).find(|&a| ro_old[a] == ro_old[cfg.infinity]).unwrap();
    let infinity = ro_new[(arc + r) % n];
    MeanderConfig { inner, outer, infinity }
}

/// Lexicographically least rotation.
pub fn canonical_form(cfg: &MeanderConfig) -> MeanderConfig {
    (0..cfg.inner.len()).map(|r| rotate(cfg, r)).min().unwrap()
}

/// Every configuration with `2m` crossings.
pub fn enumerate_configurations(m: usize) -> Vec<MeanderConfig> {
    let n = 2 * m;
    let ms = noncrossing_matchings(n);
    let mut out = Vec::new();
    for inner in &ms {
        for outer in &ms {
            if !is_single_cycle(inner, outer) {
                continue;
            }
            let mut ids: Vec<usize> = regions(outer);
            ids.sort();
            ids.dedup();
            for infinity in ids {
                out.push(MeanderConfig { inner: inner.clone(), outer: outer.clone(), infinity });
            }
        }
    }
    out
}

/// Distinct non-cutting configurations up to rotation.
pub fn noncutting_classes(m: usize) -> Vec<MeanderConfig> {
    let mut v: Vec<MeanderConfig> = enumerate_configurations(m)
        .iter()
        .filter(|c| !is_cutting(c))
        .map(canonical_form)
        .collect();
    v.sort();
    v.dedup();
    v
}

/// Reads off the configuration of a concrete transverse pair.
pub fn config_of_pair(cs: &CrossingSet, arr: &Arrangement) -> MeanderConfig {
    let n = cs.len();
    let mut inner = vec![usize::MAX; n];
    let mut outer = vec![usize::MAX; n];
    for arc in arr.arcs.iter().filter(|a| a.curve == ArcCurve::Kt) {
        let side = if arc.inside_other { &mut inner } else { &mut outer };
        side[arc.start] = arc.end;
        side[arc.end] = arc.start;
    }
    let unbounded = arr.faces.iter().find(|f| f.unbounded).expect("arrangement has an unbounded face");
    let k_arc = unbounded
        .boundary
        .iter()
        .find(|h| arr.arcs[h.arc].curve == ArcCurve::K)
        .expect("outer face touches K");
    // K arcs come first and arc j runs from crossing j to j + 1.
    let ro = regions(&outer);
    MeanderConfig { infinity: ro[k_arc.arc], inner, outer }
}
