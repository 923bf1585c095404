//! Regenerates the JSON inputs under `fixtures/`.
//!
//! `cargo run -p fpindex --example write_fixtures -- <dir>`

use std::path::Path;

use fpindex::fixtures;
use fpindex::gen;
use fpindex::io;
use fpindex::prescribe::prescribe;
use fpindex::torus::build_diagram_for;
use serde_json::{json, Value};

fn put(dir: &Path, name: &str, v: &Value) {
    let mut s = serde_json::to_string_pretty(v).unwrap();
    s.push('\n');
    std::fs::write(dir.join(name), s).unwrap();
}

/// Seed for the twelve-crossing golden trace.
const TWELVE_SEED: u64 = 12;

fn main() {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "fixtures".into());
    let dir = Path::new(&dir);
    std::fs::create_dir_all(dir).unwrap();

    let (k, kt, phi) = fixtures::fig1();
    put(dir, "fig1_k.json", &io::curve_to_json(&k));
    put(dir, "fig1_kt.json", &io::curve_to_json(&kt));
    put(dir, "identity_map.json", &io::map_to_json(&phi));
    let thirds: Vec<_> = (0..3).map(|i| fpindex::exact_geom::rat(i, 3)).collect();
    put(dir, "fig1_constraints.json", &io::constraints_to_json(&thirds, &thirds));

    let (k, kt, _) = fixtures::fig2();
    put(dir, "fig2_k.json", &io::curve_to_json(&k));
    put(dir, "fig2_kt.json", &io::curve_to_json(&kt));

    let (k, kt, z, zt) = fixtures::two_bump();
    put(dir, "two_bump_k.json", &io::curve_to_json(&k));
    put(dir, "two_bump_kt.json", &io::curve_to_json(&kt));
    put(dir, "two_bump_constraints.json", &io::constraints_to_json(&z, &zt));
    let (_, _, z, zt) = fixtures::two_bump_boxed();
    put(dir, "two_bump_boxed_constraints.json", &io::constraints_to_json(&z, &zt));

    for (name, (a, b)) in [("overlay_two", fixtures::overlay_two()), ("overlay_three", fixtures::overlay_three())] {
        put(dir, &format!("{name}_a.json"), &io::packing_to_json(&a));
        put(dir, &format!("{name}_b.json"), &io::packing_to_json(&b));
        let corr: Vec<usize> = (0..a.pieces.len()).collect();
        put(dir, &format!("{name}_corr.json"), &json!(corr));
    }
    // Unshifted second packing, for the epsilon flag. No edge has slope 1,
    // so a diagonal shift cannot slide a contact along an edge.
    let a = fixtures::diamond_row(2, 6, 4);
    let b = fixtures::diamond_row(2, 2, 12);
    put(dir, "overlay_unshifted_a.json", &io::packing_to_json(&a));
    put(dir, "overlay_unshifted_b.json", &io::packing_to_json(&b));
    let (a, b) = fixtures::overlay_empty();
    put(dir, "overlay_empty_a.json", &io::packing_to_json(&a));
    put(dir, "overlay_empty_b.json", &io::packing_to_json(&b));
    put(dir, "empty_corr.json", &json!([]));

    let mut rng = gen::rng(TWELVE_SEED);
    loop {
        let (k, kt, _) = gen::random_pair(&mut rng, 12, 12);
        let z = gen::random_constraints(&mut rng, &k, &kt, 3);
        let zt = gen::random_constraints(&mut rng, &kt, &k, 3);
        let d = build_diagram_for(&k, &kt, &z, &zt).unwrap();
        if prescribe(&d).is_ok() {
            put(dir, "twelve_k.json", &io::curve_to_json(&k));
            put(dir, "twelve_kt.json", &io::curve_to_json(&kt));
            put(dir, "twelve_constraints.json", &io::constraints_to_json(&z, &zt));
            break;
        }
    }
}
