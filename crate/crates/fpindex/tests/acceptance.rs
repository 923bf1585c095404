//! One PASS/FAIL line per acceptance criterion.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::Rng;

use fpindex::exact_geom::{int, point_in_polygon, rat, Location, Rat, RatPoint};
use fpindex::fixtures;
use fpindex::gen::{self, Rng8};
use fpindex::jordan::meander::{canonical_form, config_of_pair, noncutting_classes};
use fpindex::jordan::{build_arrangement, canonical_noncut_pair, check_transverse, validate_curve, CrossingKind, PolyJordanCurve};
use fpindex::packing::{assemble_theorem_certificate, find_cutting_pair};
use fpindex::plmap::{fixed_point_index, glue, transform_pair, Affine, PLCorrespondence};
use fpindex::prescribe::{oracle_enumerate, prescribe, LevelKind};
use fpindex::torus::{build_diagram, build_diagram_for, index_from_torus, local_winding, realize_path};

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn within(t: Instant, limit: Duration) -> bool {
    t.elapsed() < limit
}

fn c1_figures() -> Outcome {
    let t = Instant::now();
    let (k, kt, phi) = fixtures::fig1();
    let e1 = fixed_point_index(&k, &kt, &phi);
    let (k, kt, phi) = fixtures::fig2();
    let e2 = fixed_point_index(&k, &kt, &phi);
    let fast = within(t, Duration::from_secs(1));
    outcome(e1 == Ok(0) && e2 == Ok(-1) && fast, format!("fig1 {e1:?}, fig2 {e2:?}, {:?}", t.elapsed()))
}

fn random_circle(rng: &mut Rng8) -> PolyJordanCurve {
    let c = RatPoint::new(gen::rand_rat(rng, -4, 4, 8), gen::rand_rat(rng, -4, 4, 8));
    let r = gen::rand_rat(rng, 1, 5, 8);
    gen::circle(&c, &r)
}

fn c2_circles() -> Outcome {
    let t = Instant::now();
    let mut rng = gen::rng(2);
    let mut buckets: BTreeMap<&str, usize> = BTreeMap::new();
    let mut bad = Vec::new();
    let mut rejected = 0;
    let mut trials = 0;
    while trials < 1000 {
        let (k, kt) = (random_circle(&mut rng), random_circle(&mut rng));
        let Ok(cs) = check_transverse(&k, &kt) else {
            rejected += 1;
            continue;
        };
        let (phi, eta) = gen::random_indexable(&mut rng, &k, &kt);
        let inv = fixed_point_index(&kt, &k, &phi.invert());
        let bucket = match cs.len() {
            0 => {
                let nested = point_in_polygon(k.as_loop(), kt.vertex(0)) == Location::Inside
                    || point_in_polygon(kt.as_loop(), k.vertex(0)) == Location::Inside;
                if nested {
                    "nested"
                } else {
                    "disjoint"
                }
            }
            2 => "two",
            _ => "general",
        };
        let ok = inv == Ok(eta)
            && match bucket {
                "nested" => eta == 1,
                "disjoint" => eta == 0,
                _ => eta >= 0,
            };
        if !ok {
            bad.push(format!("trial {trials} ({bucket}): η {eta}, inverse {inv:?}"));
        }
        *buckets.entry(bucket).or_default() += 1;
        trials += 1;
    }
    let fast = within(t, Duration::from_secs(30));
    outcome(
        bad.is_empty() && fast,
        format!("{trials} trials {buckets:?}, {rejected} non-transverse resampled, {} violations {:?}, {:?}", bad.len(), bad.first(), t.elapsed()),
    )
}

/// Two domains on either side of the segment from `(0, -a)` to `(0, b)`.
fn adjacent_domains(rng: &mut Rng8) -> (PolyJordanCurve, PolyJordanCurve) {
    let dirs = gen::unit_circle_64();
    loop {
        let (a, b) = (rng.gen_range(1..4), rng.gen_range(1..4));
        let (lo, hi) = (RatPoint::ints(0, -a), RatPoint::ints(0, b));
        let mut side = |from: usize| -> Vec<RatPoint> {
            let mut idx: Vec<usize> = (from..from + 31).filter(|_| rng.gen_bool(0.25)).collect();
            if idx.is_empty() {
                idx.push(from + 15);
            }
            idx.iter().map(|&i| dirs[i % 64].scale(&gen::rand_rat(rng, 1, 4, 4))).collect()
        };
        let mut k = vec![lo.clone(), hi.clone()];
        k.extend(side(17));
        let mut l = vec![hi, lo];
        l.extend(side(49));
        if let (Ok(k), Ok(l)) = (validate_curve(k, false), validate_curve(l, false)) {
            return (k, l);
        }
    }
}

/// Identity on the first edge, random elsewhere.
fn fix_first_edge(rng: &mut Rng8, n: usize) -> PLCorrespondence {
    let e = rat(1, n as i64);
    let k = rng.gen_range(0..4);
    let mut s = gen::sorted_fracs(rng, k, 997);
    let mut t = gen::sorted_fracs(rng, k, 997);
    // Into the open arc after the first edge.
    let squeeze = |x: &Rat| &e + (x * int(997) + int(1)) / int(999) * (int(1) - &e);
    s.iter_mut().for_each(|x| *x = squeeze(x));
    t.iter_mut().for_each(|x| *x = squeeze(x));
    let mut pairs = vec![(int(0), int(0)), (e.clone(), e)];
    pairs.extend(s.into_iter().zip(t));
    PLCorrespondence::new(pairs).expect("monotone by construction")
}

fn shifted(mut t: Affine, x: Rat, y: Rat) -> Affine {
    t.b = [x, y];
    t
}

fn random_affine(rng: &mut Rng8) -> Affine {
    loop {
        let m: Vec<Rat> = (0..4).map(|_| gen::rand_rat(rng, -2, 2, 4)).collect();
        let lin = Affine::linear(m[0].clone(), m[1].clone(), m[2].clone(), m[3].clone());
        if lin.det() > rat(1, 8) {
            return shifted(lin, gen::rand_rat(rng, -3, 3, 7), gen::rand_rat(rng, -3, 3, 7));
        }
    }
}

fn c3_additivity() -> Outcome {
    let mut rng = gen::rng(3);
    let mut seen: BTreeMap<(i64, i64), usize> = BTreeMap::new();
    let mut bad = Vec::new();
    let mut trials = 0;
    while trials < 150 {
        let (k, l) = adjacent_domains(&mut rng);
        let t = random_affine(&mut rng);
        let (kt, lt) = (k.map_points(|p| t.apply(p)).unwrap(), l.map_points(|p| t.apply(p)).unwrap());
        let phi = fix_first_edge(&mut rng, k.n());
        let psi = fix_first_edge(&mut rng, l.n());
        let (Ok(ep), Ok(es)) = (fixed_point_index(&k, &kt, &phi), fixed_point_index(&l, &lt, &psi)) else {
            continue;
        };
        match glue(&k, &kt, &phi, &l, &lt, &psi) {
            Ok(g) => {
                let et = fixed_point_index(&g.source, &g.target, &g.theta);
                if et != Ok(ep + es) {
                    bad.push(format!("trial {trials}: {ep} + {es} vs {et:?}"));
                }
            }
            Err(e) => bad.push(format!("trial {trials}: glue failed: {e}")),
        }
        *seen.entry((ep, es)).or_default() += 1;
        trials += 1;
    }
    outcome(bad.is_empty(), format!("{trials} glued fixtures, (η(φ), η(ψ)) seen {seen:?}, {} violations {:?}", bad.len(), bad.first()))
}

fn c4_torus_formula() -> Outcome {
    let mut rng = gen::rng(4);
    let mut bad = Vec::new();
    let mut by_count: BTreeMap<usize, usize> = BTreeMap::new();
    for trial in 0..1000 {
        let (k, kt, cs) = gen::random_pair(&mut rng, 0, 12);
        let z = gen::random_constraints(&mut rng, &k, &kt, 3);
        let zt = gen::random_constraints(&mut rng, &kt, &k, 3);
        let d = build_diagram(&k, &kt, &cs, &z, &zt).unwrap();
        let g = gen::random_path(&mut rng, &d);
        let w = index_from_torus(&d, &g);
        let eta = realize_path(&d, &g).map_err(|e| e.to_string()).and_then(|phi| fixed_point_index(&k, &kt, &phi).map_err(|e| e.to_string()));
        match (&w, &eta) {
            (Ok(w), Ok(eta)) if w.eq1 == w.eq2 && w.eq1 == *eta => {}
            _ => bad.push(format!("trial {trial}: {w:?} vs {eta:?}")),
        }
        for c in 0..d.n_crossings() {
            let want = if d.kinds[c] == CrossingKind::P { 1 } else { -1 };
            if local_winding(&d, c) != Ok(want) {
                bad.push(format!("trial {trial}: local winding at {c}"));
            }
        }
        *by_count.entry(cs.len()).or_default() += 1;
    }
    outcome(bad.is_empty(), format!("1000 instances by crossing count {by_count:?}, {} violations {:?}", bad.len(), bad.first()))
}

fn c5_no_cut() -> Outcome {
    let mut rng = gen::rng(5);
    let mut bad = Vec::new();
    let mut witnessed: BTreeMap<usize, Vec<i64>> = BTreeMap::new();
    for m in 1..=6 {
        let (k, kt) = canonical_noncut_pair(m);
        let mut ws: Vec<i64> = Vec::new();
        for trial in 0..200 {
            let (_, eta) = gen::random_indexable(&mut rng, &k, &kt);
            if !(0..=2).contains(&eta) {
                bad.push(format!("m {m} trial {trial}: η {eta}"));
            }
            ws.push(eta);
        }
        ws.sort();
        ws.dedup();
        witnessed.insert(m, ws);
    }
    let all: std::collections::BTreeSet<i64> = witnessed.values().flatten().copied().collect();
    outcome(bad.is_empty(), format!("witnessed per m {witnessed:?}, overall {all:?}, {} violations {:?}", bad.len(), bad.first()))
}

fn c6_prescription() -> Outcome {
    let t = Instant::now();
    let mut rng = gen::rng(6);
    let mut bad = Vec::new();
    let (mut oracle_checked, mut fallbacks, mut max_depth) = (0, 0, 0);
    let mut rules: BTreeMap<String, usize> = BTreeMap::new();
    let mut ws: BTreeMap<i64, usize> = BTreeMap::new();
    let trials = 600;
    for trial in 0..trials {
        // Random star pairs, with every fourth instance a canonical bump pair
        // so the late reinsertion cases get exercised.
        let (k, kt) = if trial % 4 == 3 {
            canonical_noncut_pair(rng.gen_range(2..=6))
        } else {
            let (k, kt, _) = gen::random_pair(&mut rng, 4, 12);
            (k, kt)
        };
        let z = gen::random_constraints(&mut rng, &k, &kt, 3);
        let zt = gen::random_constraints(&mut rng, &kt, &k, 3);
        let d = build_diagram_for(&k, &kt, &z, &zt).unwrap();
        let (g, tr) = match prescribe(&d) {
            Ok(x) => x,
            Err(e) => {
                bad.push(format!("trial {trial}: {} {e}\n{}", e.reason(), d.dump()));
                continue;
            }
        };
        let w = tr.w();
        let eta = realize_path(&d, &g).ok().and_then(|phi| fixed_point_index(&k, &kt, &phi).ok());
        if !g.is_faithful(&d) || w < 0 || eta != Some(w) {
            bad.push(format!("trial {trial}: w {w}, η {eta:?}, faithful {}", g.is_faithful(&d)));
        }
        if d.n_crossings() <= 8 {
            match oracle_enumerate(&d) {
                Ok(all) if all.contains(&w) && all.iter().max().is_some_and(|&x| x >= 0) => {}
                other => bad.push(format!("trial {trial}: oracle {other:?} vs w {w}")),
            }
            oracle_checked += 1;
        }
        for l in &tr.levels {
            if let LevelKind::Reinsert { rule, fallback, .. } = &l.kind {
                *rules.entry(format!("{rule:?}")).or_default() += 1;
                fallbacks += *fallback as usize;
            }
        }
        max_depth = max_depth.max(tr.depth());
        *ws.entry(w).or_default() += 1;
    }
    let fast = within(t, Duration::from_secs(300));
    outcome(
        bad.is_empty() && fast,
        format!(
            "{trials} instances, {oracle_checked} oracle-checked, w {ws:?}, rules {rules:?}, {fallbacks} fallbacks, max depth {max_depth}, {} violations {:?}, {:?}",
            bad.len(),
            bad.first(),
            t.elapsed()
        ),
    )
}

fn c7_four_points() -> Outcome {
    let (k, kt, _) = fixtures::fig2();
    let c = fixtures::fig2_corners();
    let d = build_diagram_for(&k, &kt, &c, &c).unwrap();
    match oracle_enumerate(&d) {
        Ok(all) => outcome(!all.is_empty() && all.iter().all(|&w| w < 0), format!("achievable {all:?}")),
        Err(e) => outcome(false, format!("{e}")),
    }
}

fn c8_uniqueness() -> Outcome {
    let mut ok = true;
    let mut counts = Vec::new();
    for m in 1..=4 {
        let classes = noncutting_classes(m);
        let (k, kt) = canonical_noncut_pair(m);
        let cs = check_transverse(&k, &kt).unwrap();
        let arr = build_arrangement(&k, &kt, &cs).unwrap();
        let cfg = canonical_form(&config_of_pair(&cs, &arr));
        ok &= classes.len() == 1 && classes[0] == cfg;
        counts.push((2 * m, classes.len()));
    }
    outcome(ok, format!("(crossings, non-cutting classes) {counts:?}, canonical pair matches"))
}

fn c9_incompat() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, (a, b)) in [("two", fixtures::overlay_two()), ("three", fixtures::overlay_three())] {
        let corr: Vec<usize> = (0..a.pieces.len()).collect();
        let cut = find_cutting_pair(&a, &b, &corr);
        match (&cut, assemble_theorem_certificate(&a, &b, &corr)) {
            (Ok(i), Ok(cert)) => {
                let termwise = cert.interstices.iter().all(|f| f.eta >= 0);
                ok &= cert.additivity_holds && termwise && cert.eta_pieces[*i] < 0;
                parts.push(format!(
                    "{name}: cut {i}, η_R {} = pieces {:?} + interstices {}",
                    cert.eta_r, cert.eta_pieces, cert.sum_interstices
                ));
            }
            (c, e) => {
                ok = false;
                parts.push(format!("{name}: {c:?} {:?}", e.err()));
            }
        }
    }
    outcome(ok, parts.join("; "))
}

fn c10_affine() -> Outcome {
    let mut rng = gen::rng(10);
    let mut bad = Vec::new();
    let q = |n, d| rat(n, d);
    for trial in 0..500 {
        let (k, kt, _) = gen::random_pair(&mut rng, 0, 12);
        let (phi, eta) = gen::random_indexable(&mut rng, &k, &kt);
        let lin = match trial % 4 {
            0 => Affine::linear(int(1), gen::rand_rat(&mut rng, -3, 3, 5), int(0), int(1)),
            1 => Affine::linear(gen::rand_rat(&mut rng, 1, 4, 6), int(0), int(0), gen::rand_rat(&mut rng, 1, 4, 6)),
            2 => [(3, 4, 5), (5, 12, 13), (8, 15, 17)]
                .map(|(a, b, c)| Affine::linear(q(a, c), q(-b, c), q(b, c), q(a, c)))[rng.gen_range(0..3)]
                .clone(),
            _ => random_affine(&mut rng),
        };
        let t = shifted(lin, gen::rand_rat(&mut rng, -5, 5, 9), gen::rand_rat(&mut rng, -5, 5, 9));
        let after = transform_pair(&k, &kt, &phi, &t).map_err(|e| e.to_string()).and_then(|(a, b, f)| fixed_point_index(&a, &b, &f).map_err(|e| e.to_string()));
        if after != Ok(eta) {
            bad.push(format!("trial {trial}: {eta} vs {after:?}"));
        }
    }
    outcome(bad.is_empty(), format!("500 triples, {} violations {:?}", bad.len(), bad.first()))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("small fixture indices", c1_figures),
        ("circle index suite", c2_circles),
        ("additivity", c3_additivity),
        ("torus formula", c4_torus_formula),
        ("no-cut bounds", c5_no_cut),
        ("three point prescription", c6_prescription),
        ("four point diagnostic", c7_four_points),
        ("non-cutting uniqueness", c8_uniqueness),
        ("incompatibility kernel", c9_incompat),
        ("affine invariance", c10_affine),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = f();
        failed += !o.ok as usize;
        println!("{} criterion {} ({name}): {} [{:.1?}]", if o.ok { "PASS" } else { "FAIL" }, i + 1, o.detail, t.elapsed());
    }
    if failed > 0 {
        eprintln!("{failed} criteria failed");
        std::process::exit(1);
    }
}
