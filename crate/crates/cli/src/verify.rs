//! Self-check suites behind `tropdyn verify`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use tropdyn::dynamics3d::{Axis, SurfaceSpec};
use tropdyn::geometry::{level_set_polytope, skeleton_mesh};
use tropdyn::kummer::check_semiconjugacy;
use tropdyn::pl1d::{measure_from_potential, with_depth};
use tropdyn::presets;
use tropdyn::rational::{int, rat, to_f64, Rational};
use tropdyn::trop::TropicalPolynomial;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Kummer,
    Tent,
    Skeleton,
    All,
}

impl Suite {
    pub fn expand(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![Suite::Kummer, Suite::Tent, Suite::Skeleton],
            s => vec![s],
        }
    }

    fn name(self) -> &'static str {
        match self {
            Suite::Kummer => "kummer",
            Suite::Tent => "tent",
            Suite::Skeleton => "skeleton",
            Suite::All => "all",
        }
    }
}

pub struct SuiteResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

pub struct VerifyOptions {
    pub samples: usize,
    pub seed: u64,
    /// Negative control: replace one Kummer coefficient by this value.
    pub corrupt: Option<Rational>,
}

pub fn run(suite: Suite, opts: &VerifyOptions) -> SuiteResult {
    let (passed, detail) = match suite {
        Suite::Kummer => kummer(opts),
        Suite::Tent => tent(),
        Suite::Skeleton => skeleton(opts),
        Suite::All => unreachable!("expanded before running"),
    };
    SuiteResult { name: suite.name(), passed, detail }
}

fn kummer_spec(corrupt: Option<&Rational>) -> SurfaceSpec {
    let Some(value) = corrupt else { return presets::kummer_surface() };
    let mut terms: Vec<(Vec<i64>, Rational)> = presets::kummer_hcirc()
        .forms()
        .iter()
        .map(|f| (f.slope().to_vec(), f.constant().clone()))
        .collect();
    terms[0].1 = value.clone();
    let hcirc = TropicalPolynomial::from_terms(terms).expect("same slopes");
    SurfaceSpec::new(hcirc, int(-1)).expect("same slopes")
}

fn kummer(opts: &VerifyOptions) -> (bool, String) {
    let r = check_semiconjugacy(&kummer_spec(opts.corrupt.as_ref()), opts.samples, 100, opts.seed);
    (
        r.passed(),
        format!(
            "{} checks, {} mismatches (max deviation {}), {} orbit mismatches",
            r.checks, r.mismatches, r.max_deviation, r.orbit_mismatches
        ),
    )
}

fn tent() -> (bool, String) {
    let g = with_depth(&presets::tent_map(), 40);
    let closed = |x: f64| if x.abs() <= 0.5 { -x * x / 2.0 + 1.0 / 24.0 } else { -x.abs() / 2.0 + 1.0 / 6.0 };
    let worst = (0..=2000)
        .map(|i| {
            let x = rat(i - 1000, 500);
            (g.evaluate(&x) - closed(to_f64(&x))).abs()
        })
        .fold(0.0, f64::max);
    let measure = match measure_from_potential(&g, (&int(-1), &int(1)), 400) {
        Ok(r) => r.measure,
        Err(e) => return (false, e.to_string()),
    };
    let density = measure
        .density
        .iter()
        .filter(|c| c.x0 >= -0.45 && c.x1 <= 0.45)
        .map(|c| (c.value - 1.0).abs())
        .fold(0.0, f64::max);
    let atom = measure.atoms.iter().map(|a| a.mass).fold(0.0, f64::max);
    let mass = (measure.total_mass - 1.0).abs();
    (
        worst <= 1e-9 && density <= 1e-6 && atom < 1e-6 && mass <= 1e-9,
        format!("closed form {worst:.1e}, density {density:.1e}, atoms {atom:.1e}, mass {mass:.1e}"),
    )
}

fn skeleton(opts: &VerifyOptions) -> (bool, String) {
    let mut failures = 0usize;
    let mut checks = 0usize;
    for seed in 0..10 {
        let spec = presets::random_surface(seed, &int(2));
        let mesh = match level_set_polytope(spec.hcirc(), spec.level()).and_then(|p| skeleton_mesh(&p)) {
            Ok(m) => m,
            Err(e) => return (false, e.to_string()),
        };
        let points = mesh.random_points(opts.samples, &mut ChaCha8Rng::seed_from_u64(opts.seed + seed));
        checks += 3 * points.len();
        failures += points
            .par_iter()
            .map(|p| {
                Axis::ALL
                    .into_iter()
                    .filter(|a| {
                        let q = spec.reflector().reflect(a.index(), p);
                        spec.h(&q) != *spec.level() || spec.reflector().reflect(a.index(), &q) != *p
                    })
                    .count()
            })
            .sum::<usize>();
    }
    (failures == 0, format!("{checks} reflections on 10 random surfaces, {failures} failures"))
}
