use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use tropdyn::dynamics3d::{orbit as run_orbit, Arithmetic, AutomorphismWord, OrbitOptions, SurfaceSpec};
use tropdyn::elliptic::{level_range, near_maximal_rotation, twist_profile, twist_profile_csv};
use tropdyn::geometry::{level_set_polytope, max_value, skeleton_mesh, GeometryError, Point, SkeletonMesh};
use tropdyn::pl1d::{
    atom_audit, measure_from_potential, potential_csv, solve_potential, support_interval, with_depth,
};
use tropdyn::potential::{PotentialError, PotentialField};
use tropdyn::presets;
use tropdyn::rational::{format_sig, parse_rational, rat, to_f64, Display, Rational};

use crate::config::{load_curve, load_map, load_surface, parse_point, read_points, SurfaceConfig};
use crate::verify::{self, Suite, VerifyOptions};
use crate::{svg, CliError, MeshFormat, Mode};

fn domain(e: impl std::fmt::Display) -> CliError {
    CliError::Domain(e.to_string())
}

fn rational_arg(text: &str, what: &str) -> Result<Rational, CliError> {
    parse_rational(text).map_err(|e| CliError::Domain(format!("{what}: {e}")))
}

fn level_arg(level: Option<&str>) -> Result<Option<Rational>, CliError> {
    level.map(|l| rational_arg(l, "--level")).transpose()
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

fn mesh_of(spec: &SurfaceSpec) -> Result<SkeletonMesh, CliError> {
    let with_max = |e: GeometryError| match (&e, max_value(spec.hcirc())) {
        (GeometryError::EmptyLevelSet { .. }, _) | (_, Err(_)) => domain(e),
        (_, Ok((max, _))) => domain(format!("{e} at level {} (max h° = {})", Display(spec.level()), Display(&max))),
    };
    let poly = level_set_polytope(spec.hcirc(), spec.level()).map_err(with_max)?;
    skeleton_mesh(&poly).map_err(with_max)
}

fn parse_word(word: &str) -> Result<AutomorphismWord, CliError> {
    word.parse().map_err(domain)
}

pub fn skeleton(spec: &str, level: Option<&str>, format: MeshFormat, out: Option<&Path>) -> Result<(), CliError> {
    let spec = load_surface(spec, level_arg(level)?)?;
    let mesh = mesh_of(&spec)?;
    let text = match format {
        MeshFormat::Obj => mesh.to_obj(),
        MeshFormat::Csv => mesh.to_csv(),
    };
    emit(out, &text)
}

pub struct OrbitArgs {
    pub spec: String,
    pub level: Option<String>,
    pub word: String,
    pub start: Option<String>,
    pub seed: u64,
    pub steps: usize,
    pub mode: Mode,
    pub max_bits: u64,
    pub out: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

pub fn orbit(args: &OrbitArgs) -> Result<(), CliError> {
    let spec = load_surface(&args.spec, level_arg(args.level.as_deref())?)?;
    let word = parse_word(&args.word)?;
    let mesh = mesh_of(&spec)?;
    let start = match &args.start {
        Some(s) => parse_point(s, 3)?,
        None => mesh
            .random_points(1, &mut ChaCha8Rng::seed_from_u64(args.seed))
            .pop()
            .expect("one point"),
    };
    let off_by = to_f64(&(spec.h(&start) - spec.level()));
    let opts = OrbitOptions {
        arithmetic: match args.mode {
            Mode::Exact => Arithmetic::Exact,
            Mode::Float => Arithmetic::Float,
        },
        max_bits: args.max_bits,
        ..OrbitOptions::default()
    };
    let on_level = match args.mode {
        Mode::Exact => off_by == 0.0,
        Mode::Float => off_by.abs() <= opts.float_tolerance,
    };
    if !on_level {
        return Err(CliError::Domain(format!(
            "start ({}) is not on the skeleton: h° - c = {}",
            start.iter().map(|x| Display(x).to_string()).collect::<Vec<_>>().join(", "),
            format_sig(off_by)
        )));
    }
    let orbit = run_orbit(&spec, &word, &start, args.steps, &opts).map_err(domain)?;
    let points = orbit.points_f64();
    let mut csv = String::from("step,x,y,z\n");
    for (i, p) in points.iter().enumerate() {
        let _ = writeln!(csv, "{i},{},{},{}", format_sig(p[0]), format_sig(p[1]), format_sig(p[2]));
    }
    if let Some(path) = &args.svg {
        emit(Some(path), &svg::scatter(&points, Some(&mesh)))?;
    }
    emit(args.out.as_deref(), &csv)
}

pub fn random_surface(seed: u64, range: &str, out: Option<&Path>) -> Result<(), CliError> {
    let range = rational_arg(range, "--coeff-range")?;
    if range < rat(0, 1) {
        return Err(CliError::Domain("--coeff-range must be nonnegative".into()));
    }
    let spec = presets::random_surface(seed, &range);
    emit(out, &SurfaceConfig::from_surface(&spec).to_json())
}

/// Lattice points with denominator `k` on a fan triangulation of each face.
pub fn face_grid(mesh: &SkeletonMesh, k: i64) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::new();
    for face in &mesh.faces {
        let v: Vec<&Point> = face.vertices.iter().map(|&i| &mesh.vertices[i]).collect();
        for t in 1..v.len().saturating_sub(1) {
            let (a, b, c) = (v[0], v[t], v[t + 1]);
            for i in 0..=k {
                for j in 0..=k - i {
                    let (wi, wj, wl) = (rat(i, k), rat(j, k), rat(k - i - j, k));
                    out.push((0..3).map(|d| &a[d] * &wi + &b[d] * &wj + &c[d] * &wl).collect());
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

pub fn potential(
    spec: &str,
    level: Option<&str>,
    word: &str,
    points: &str,
    tol: f64,
    out: Option<&Path>,
) -> Result<(), CliError> {
    if !(tol > 0.0) {
        return Err(CliError::Domain("--tol must be positive".into()));
    }
    let spec = load_surface(spec, level_arg(level)?)?;
    let word = parse_word(word)?;
    let field = PotentialField::with_tolerance(&spec, &word, tol).map_err(|e| match e {
        PotentialError::NotHyperbolic { .. } | PotentialError::EigenResidual(_) => {
            CliError::NotHyperbolic(format!("word {word}: {e}"))
        }
        other => domain(other),
    })?;
    let pts = match points {
        "grid" => face_grid(&mesh_of(&spec)?, 4),
        p if p.starts_with("grid:") => {
            let k: i64 = p[5..].parse().ok().filter(|&k| k > 0).ok_or_else(|| domain(format!("bad grid `{p}`")))?;
            face_grid(&mesh_of(&spec)?, k)
        }
        path => read_points(Path::new(path), 3)?,
    };
    if let Some(p) = pts.iter().find(|p| !spec.on_skeleton(p)) {
        return Err(CliError::Domain(format!(
            "point ({}) is not on the skeleton",
            p.iter().map(|x| Display(x).to_string()).collect::<Vec<_>>().join(", ")
        )));
    }
    eprintln!(
        "word {word}: lambda {}, depth {}, cocycle bound {}",
        format_sig(field.lambda()),
        field.depth(),
        format_sig(field.cocycle_bound())
    );
    let rows = pts
        .par_iter()
        .map(|p| {
            let g = field.evaluate(p).map_err(domain)?;
            let r = field.residual(p).map_err(domain)?;
            Ok(format!(
                "{},{},{},{},{}\n",
                format_sig(to_f64(&p[0])),
                format_sig(to_f64(&p[1])),
                format_sig(to_f64(&p[2])),
                format_sig(g),
                format_sig(r)
            ))
        })
        .collect::<Result<Vec<String>, CliError>>()?;
    let mut csv = String::from("x,y,z,g,residual\n");
    csv.extend(rows);
    emit(out, &csv)
}

pub fn measure1d(
    source: &str,
    grid: usize,
    interval: Option<&str>,
    tol: f64,
    depth: usize,
    out: Option<&Path>,
    potential_out: Option<&Path>,
) -> Result<(), CliError> {
    let map = load_map(source)?;
    let mut g = solve_potential(&map, tol);
    if g.depth() < depth {
        g = with_depth(&map, depth);
    }
    let (a, b) = match interval {
        Some(text) => {
            let (a, b) = text.split_once(':').ok_or_else(|| domain(format!("interval `{text}` is not a:b")))?;
            (rational_arg(a, "--interval")?, rational_arg(b, "--interval")?)
        }
        None => support_interval(&g),
    };
    let report = measure_from_potential(&g, (&a, &b), grid).map_err(domain)?;
    if !report.unstable.is_empty() {
        log::warn!("{} slope jumps changed with the step size and were spread into the density", report.unstable.len());
    }
    if report.measure.is_degenerate(1e-9) {
        eprintln!(
            "degenerate measure: {} atom(s) carry the mass, no density",
            report.measure.atoms.iter().filter(|m| m.mass > 1e-9).count()
        );
    }
    let audit = atom_audit(&g, (&a, &b), grid, 1e-9).map_err(domain)?;
    eprintln!(
        "depth {}, total mass {}, atoms {}, audit {}",
        g.depth(),
        format_sig(report.measure.total_mass),
        audit.atoms.len(),
        if audit.clean() { "clean" } else { "NOT clean" }
    );
    if let Some(path) = potential_out {
        emit(Some(path), &potential_csv(&g, &tropdyn::pl1d::measure_grid(&map, &a, &b, grid)))?;
    }
    let mut json = report.measure.to_json();
    json.push('\n');
    emit(out, &json)
}

pub fn elliptic(spec: &str, levels: &str, near_max: bool, out: Option<&Path>) -> Result<(), CliError> {
    let curve = load_curve(spec, None)?;
    let parts: Vec<&str> = levels.split(':').collect();
    let [a, b, step] = parts[..] else {
        return Err(domain(format!("levels `{levels}` is not a:b:step")));
    };
    let (a, b, step) = (rational_arg(a, "--levels")?, rational_arg(b, "--levels")?, rational_arg(step, "--levels")?);
    if step <= rat(0, 1) {
        return Err(domain("level step must be positive"));
    }
    let range = level_range(&a, &b, &step);
    let profile = twist_profile(&curve, &range);
    for (level, r) in &profile {
        if let Err(e) = r {
            log::warn!("level {}: {e}", Display(level));
        }
    }
    if near_max {
        match near_maximal_rotation(&curve, 60) {
            Ok(n) => eprintln!(
                "max h° {}: rotation {} at gap {}, limit {}",
                Display(&(&n.level + &n.gap)),
                Display(&n.rotation.rho),
                Display(&n.gap),
                n.limit.map(|l| Display(&l).to_string()).unwrap_or_else(|| "undetermined".into())
            ),
            Err(e) => eprintln!("near-maximal rotation: {e}"),
        }
    }
    emit(out, &twist_profile_csv(&profile))
}

pub fn verify(suite: Suite, samples: usize, seed: u64, corrupt: Option<&str>) -> ExitCode {
    let corrupt = match corrupt.map(|c| rational_arg(c, "--corrupt-coefficient")).transpose() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(64);
        }
    };
    let opts = VerifyOptions { samples, seed, corrupt };
    let mut failed = 0u8;
    for s in suite.expand() {
        let r = verify::run(s, &opts);
        println!("{}: {} ({})", r.name, if r.passed { "PASS" } else { "FAIL" }, r.detail);
        if !r.passed {
            failed += 1;
        }
    }
    ExitCode::from(failed)
}
