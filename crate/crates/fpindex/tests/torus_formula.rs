use fpindex::gen;
use fpindex::plmap::fixed_point_index;
use fpindex::torus::{build_diagram, index_from_torus, realize_path};

#[test]
fn random_paths_match_geometry() {
    let mut rng = gen::rng(7);
    for trial in 0..200 {
        let (k, kt, cs) = gen::random_pair(&mut rng, 0, 12);
        let z = gen::random_constraints(&mut rng, &k, &kt, 3);
        let zt = gen::random_constraints(&mut rng, &kt, &k, 3);
        let d = build_diagram(&k, &kt, &cs, &z, &zt).unwrap();
        let g = gen::random_path(&mut rng, &d);
        let w = index_from_torus(&d, &g).unwrap();
        let phi = realize_path(&d, &g).unwrap();
        let eta = fixed_point_index(&k, &kt, &phi).unwrap();
        assert_eq!(w.eq1, eta, "trial {trial}: {}", d.dump());
    }
}

#[test]
fn index_is_independent_of_base_point() {
    let mut rng = gen::rng(8);
    let mut compared = 0;
    for trial in 0..100 {
        let (k, kt, cs) = gen::random_pair(&mut rng, 2, 10);
        let z = gen::random_constraints(&mut rng, &k, &kt, 3);
        let zt = gen::random_constraints(&mut rng, &kt, &k, 3);
        let d = build_diagram(&k, &kt, &cs, &z, &zt).unwrap();
        let g = gen::random_path(&mut rng, &d);
        let w = index_from_torus(&d, &g).unwrap().eq1;
        for j in 0..g.steps.len() {
            // Base points must avoid the lines through crossing marks.
            if let Ok(r) = index_from_torus(&d, &g.rerooted(j)) {
                assert_eq!(r.eq1, w, "trial {trial}, vertex {j}");
                compared += 1;
            }
        }
    }
    assert!(compared > 1000, "{compared}");
}
