use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use fpindex::exact_geom::{Rat, RatPoint};
use fpindex::gen;
use fpindex::io::{self, IoError};
use fpindex::jordan::{build_arrangement, check_transverse, cuts_each_other, JordanError, PolyJordanCurve};
use fpindex::packing::{assemble_theorem_certificate, find_cutting_pair, PackingError};
use fpindex::plmap::{fixed_point_index, PlmapError};
use fpindex::prescribe::{any_faithful, prescribe, PrescribeError};
use fpindex::svg;
use fpindex::torus::{build_diagram_for, index_from_torus, local_winding, realize_path, StaircasePath, Step, TorusError};

#[derive(Parser)]
#[command(name = "fpindex", version, about = "Fixed-point indices of maps between polygonal Jordan curves")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Also write an SVG picture here.
    #[arg(long, global = true)]
    svg: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Index of a boundary correspondence.
    Index { k: PathBuf, kt: PathBuf, map: PathBuf },
    /// Torus diagram of a pair with three constraints per curve.
    Torus { k: PathBuf, kt: PathBuf, constraints: PathBuf },
    /// Map through the constraints with nonnegative index.
    Prescribe { k: PathBuf, kt: PathBuf, constraints: PathBuf },
    /// Whether two curves cut each other.
    Cut { k: PathBuf, kt: PathBuf },
    /// Cutting pair and index certificate for two packings.
    Incompat {
        a: PathBuf,
        b: PathBuf,
        correspondence: PathBuf,
        /// Translate the second packing by (ε, ε), e.g. `1/7`.
        #[arg(long)]
        epsilon: Option<String>,
    },
    /// SVG picture of an input.
    Render {
        kind: RenderKind,
        inputs: Vec<PathBuf>,
        #[arg(long)]
        epsilon: Option<String>,
    },
    /// Randomized checks.
    Selftest {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum RenderKind {
    /// Two curves.
    Pair,
    /// Faces of the arrangement of two curves.
    Arrangement,
    /// Torus diagram with a faithful path: curves plus constraints.
    Torus,
    /// Two packings.
    Overlay,
}

struct Failure {
    reason: String,
    message: String,
    code: u8,
}

impl Failure {
    fn input(reason: &str, message: impl Into<String>) -> Self {
        Failure { reason: reason.into(), message: message.into(), code: 2 }
    }

    fn check(reason: &str, message: impl Into<String>) -> Self {
        Failure { reason: reason.into(), message: message.into(), code: 1 }
    }

    /// Internal inconsistencies are test failures; everything else is a
    /// rejected input.
    fn classify(reason: &str, message: String) -> Self {
        let internal = ["InternalCaseGap", "FormulaMismatch", "TheoremViolationSuspected", "ArrangementInconsistent"];
        if internal.contains(&reason) {
            Failure::check(reason, message)
        } else {
            Failure::input(reason, message)
        }
    }
}

macro_rules! failure_from {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Failure::classify(e.reason(), e.to_string())
            }
        }
    )*};
}

failure_from!(IoError, JordanError, PlmapError, TorusError, PrescribeError, PackingError);

type Res<T> = Result<T, Failure>;

fn read_json(p: &Path) -> Res<Value> {
    let text = std::fs::read_to_string(p).map_err(|e| Failure::input("Unreadable", format!("{}: {e}", p.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::input("MalformedInput", format!("{}: {e}", p.display())))
}

fn read_curve(p: &Path) -> Res<PolyJordanCurve> {
    Ok(io::curve_from_json(&read_json(p)?)?)
}

fn parse_epsilon(s: &Option<String>) -> Res<Option<Rat>> {
    s.as_ref()
        .map(|t| t.trim().parse::<Rat>().map_err(|e| Failure::input("MalformedInput", format!("epsilon {t}: {e}"))))
        .transpose()
}

fn path_json(g: &StaircasePath) -> Value {
    let steps: String = g.steps.iter().map(|s| if *s == Step::R { 'R' } else { 'U' }).collect();
    json!({ "start": [g.start.0, g.start.1], "steps": steps })
}

fn write_svg(cli_svg: &Option<PathBuf>, picture: impl FnOnce() -> String) -> Res<()> {
    if let Some(p) = cli_svg {
        std::fs::write(p, picture()).map_err(|e| Failure::input("Unwritable", format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

fn cmd_index(k: &Path, kt: &Path, map: &Path) -> Res<Value> {
    let (k, kt) = (read_curve(k)?, read_curve(kt)?);
    let phi = io::map_from_json(&read_json(map)?)?;
    let eta = fixed_point_index(&k, &kt, &phi)?;
    let cs = check_transverse(&k, &kt);
    Ok(json!({
        "eta": eta,
        "transverse": cs.is_ok(),
        "crossings": cs.map(|c| json!(c.len())).unwrap_or(Value::Null),
    }))
}

fn load_diagram(k: &Path, kt: &Path, c: &Path) -> Res<fpindex::torus::TorusDiagram> {
    let (k, kt) = (read_curve(k)?, read_curve(kt)?);
    let (z, zt) = io::constraints_from_json(&read_json(c)?)?;
    Ok(build_diagram_for(&k, &kt, &z, &zt)?)
}

fn cmd_torus(k: &Path, kt: &Path, c: &Path, svg_out: &Option<PathBuf>) -> Res<Value> {
    let d = load_diagram(k, kt, c)?;
    let windings: Vec<i64> = (0..d.n_crossings()).map(|c| local_winding(&d, c)).collect::<Result<_, _>>()?;
    write_svg(svg_out, || svg::torus(&d, any_faithful(&d).as_ref()))?;
    Ok(json!({
        "dump": d.dump(),
        "crossings": d.n_crossings(),
        "names": d.crossing_names(),
        "local_windings": windings,
        "period": d.period(),
    }))
}

fn cmd_prescribe(k: &Path, kt: &Path, c: &Path, svg_out: &Option<PathBuf>) -> Res<Value> {
    let d = load_diagram(k, kt, c)?;
    let (g, trace) = prescribe(&d)?;
    let w = index_from_torus(&d, &g)?.eq1;
    let link = d.link.as_ref().expect("diagram built from geometry");
    let phi = realize_path(&d, &g)?;
    let eta = fixed_point_index(&link.k, &link.kt, &phi)?;
    if eta != w || !g.is_faithful(&d) {
        return Err(Failure::check("RealizationMismatch", format!("torus w {w}, geometric η {eta}")));
    }
    write_svg(svg_out, || svg::torus(&d, Some(&g)))?;
    Ok(json!({
        "w": w,
        "eta": eta,
        "depth": trace.depth(),
        "path": path_json(&g),
        "map": io::map_to_json(&phi),
        "trace": serde_json::to_value(&trace).expect("trace serializes"),
    }))
}

fn cmd_cut(k: &Path, kt: &Path, svg_out: &Option<PathBuf>) -> Res<Value> {
    let (k, kt) = (read_curve(k)?, read_curve(kt)?);
    let cs = check_transverse(&k, &kt)?;
    let cuts = cuts_each_other(&k, &kt)?;
    write_svg(svg_out, || svg::pair(&k, &kt))?;
    Ok(json!({ "cuts": cuts, "crossings": cs.len() }))
}

fn load_packings(a: &Path, b: &Path, eps: &Option<String>) -> Res<(fpindex::packing::PackingSpec, fpindex::packing::PackingSpec)> {
    let pa = io::packing_from_json(&read_json(a)?)?;
    let mut pb = io::packing_from_json(&read_json(b)?)?;
    if let Some(e) = parse_epsilon(eps)? {
        pb = pb.translated(&RatPoint::new(e.clone(), e))?;
    }
    Ok((pa, pb))
}

fn cmd_incompat(a: &Path, b: &Path, c: &Path, eps: &Option<String>, svg_out: &Option<PathBuf>) -> Res<Value> {
    let (pa, pb) = load_packings(a, b, eps)?;
    let corr = io::correspondence_from_json(&read_json(c)?)?;
    write_svg(svg_out, || svg::overlay(&pa, &pb))?;
    let cutting = if pa.pieces.is_empty() && pb.pieces.is_empty() { None } else { Some(find_cutting_pair(&pa, &pb, &corr)?) };
    let cert = assemble_theorem_certificate(&pa, &pb, &corr)?;
    if !cert.degenerate && (!cert.additivity_holds || cert.interstices.iter().any(|f| f.eta < 0)) {
        return Err(Failure::check("CertificateFailed", "additivity or interstice sign check failed"));
    }
    Ok(json!({
        "cutting_index": cutting,
        "certificate": serde_json::to_value(&cert).expect("certificate serializes"),
    }))
}

fn cmd_render(kind: RenderKind, inputs: &[PathBuf], eps: &Option<String>) -> Res<String> {
    let need = |n: usize| {
        if inputs.len() == n {
            Ok(())
        } else {
            Err(Failure::input("MalformedInput", format!("expected {n} input files, got {}", inputs.len())))
        }
    };
    match kind {
        RenderKind::Pair => {
            need(2)?;
            Ok(svg::pair(&read_curve(&inputs[0])?, &read_curve(&inputs[1])?))
        }
        RenderKind::Arrangement => {
            need(2)?;
            let (k, kt) = (read_curve(&inputs[0])?, read_curve(&inputs[1])?);
            let cs = check_transverse(&k, &kt)?;
            Ok(svg::arrangement(&build_arrangement(&k, &kt, &cs)?))
        }
        RenderKind::Torus => {
            need(3)?;
            let d = load_diagram(&inputs[0], &inputs[1], &inputs[2])?;
            Ok(svg::torus(&d, any_faithful(&d).as_ref()))
        }
        RenderKind::Overlay => {
            need(2)?;
            let (pa, pb) = load_packings(&inputs[0], &inputs[1], eps)?;
            Ok(svg::overlay(&pa, &pb))
        }
    }
}

fn cmd_selftest(seed: u64, trials: usize) -> Res<Value> {
    let mut rng = gen::rng(seed);
    let mut violations: Vec<String> = Vec::new();

    let unit = fpindex::exact_geom::int(1);
    let mut circle_trials = 0;
    for t in 0..trials {
        let c = RatPoint::new(gen::rand_rat(&mut rng, -3, 3, 4), gen::rand_rat(&mut rng, -3, 3, 4));
        let r = gen::rand_rat(&mut rng, 1, 3, 4);
        let (k, kt) = (gen::circle(&RatPoint::origin(), &unit), gen::circle(&c, &r));
        let (phi, eta) = gen::random_indexable(&mut rng, &k, &kt);
        let inv = fixed_point_index(&kt, &k, &phi.invert())?;
        if inv != eta || eta < 0 {
            violations.push(format!("circle trial {t}: η {eta}, inverse {inv}"));
        }
        circle_trials += 1;
    }

    let mut torus_trials = 0;
    for t in 0..trials {
        let (k, kt, _) = gen::random_pair(&mut rng, 2, 8);
        let z = gen::random_constraints(&mut rng, &k, &kt, 3);
        let zt = gen::random_constraints(&mut rng, &kt, &k, 3);
        let d = build_diagram_for(&k, &kt, &z, &zt)?;
        let g = gen::random_path(&mut rng, &d);
        let w = index_from_torus(&d, &g)?.eq1;
        let eta = fixed_point_index(&k, &kt, &realize_path(&d, &g)?)?;
        if w != eta {
            violations.push(format!("torus trial {t}: w {w}, η {eta}"));
        }
        torus_trials += 1;
    }

    let mut prescribe_trials = 0;
    for t in 0..trials {
        let (k, kt, _) = gen::random_pair(&mut rng, 4, 12);
        let z = gen::random_constraints(&mut rng, &k, &kt, 3);
        let zt = gen::random_constraints(&mut rng, &kt, &k, 3);
        let d = build_diagram_for(&k, &kt, &z, &zt)?;
        match prescribe(&d) {
            Ok((g, trace)) => {
                let eta = fixed_point_index(&k, &kt, &realize_path(&d, &g)?)?;
                if trace.w() < 0 || eta != trace.w() || !g.is_faithful(&d) {
                    violations.push(format!("prescribe trial {t}: w {}, η {eta}", trace.w()));
                }
            }
            Err(PrescribeError::AssumptionViolated(_)) => continue,
            Err(e) => violations.push(format!("prescribe trial {t}: {}", e.reason())),
        }
        prescribe_trials += 1;
    }

    let report = json!({
        "seed": seed,
        "circle_trials": circle_trials,
        "torus_trials": torus_trials,
        "prescribe_trials": prescribe_trials,
        "violations": violations,
    });
    if violations.is_empty() {
        Ok(report)
    } else {
        Err(Failure::check("InvariantViolated", report.to_string()))
    }
}

fn run(cli: &Cli) -> Res<String> {
    let report = match &cli.cmd {
        Cmd::Index { k, kt, map } => cmd_index(k, kt, map)?,
        Cmd::Torus { k, kt, constraints } => cmd_torus(k, kt, constraints, &cli.svg)?,
        Cmd::Prescribe { k, kt, constraints } => cmd_prescribe(k, kt, constraints, &cli.svg)?,
        Cmd::Cut { k, kt } => cmd_cut(k, kt, &cli.svg)?,
        Cmd::Incompat { a, b, correspondence, epsilon } => cmd_incompat(a, b, correspondence, epsilon, &cli.svg)?,
        Cmd::Render { kind, inputs, epsilon } => return cmd_render(*kind, inputs, epsilon),
        Cmd::Selftest { seed, trials } => cmd_selftest(*seed, *trials)?,
    };
    let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
    s.push('\n');
    Ok(s)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (text, code) = match run(&cli) {
        Ok(s) => (s, 0),
        Err(f) => {
            let v = json!({ "error": true, "reason": f.reason, "message": f.message });
            (format!("{}\n", serde_json::to_string_pretty(&v).expect("error serializes")), f.code)
        }
    };
    match &cli.out {
        Some(p) => {
            if let Err(e) = std::fs::write(p, &text) {
                eprintln!("cannot write {}: {e}", p.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(code)
}
