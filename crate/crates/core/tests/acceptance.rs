//! End-to-end acceptance checks. Runs without the libtest harness so that
//! every criterion prints exactly one PASS/FAIL line; the process exits
//! non-zero when any criterion fails.

use std::time::{Duration, Instant};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use tropdyn::dynamics3d::{
    exact_period, lift_word, row_times, section, AutomorphismWord, Axis, LiftVariant, SurfaceSpec,
};
use tropdyn::elliptic::{arc_displacements, near_maximal_rotation, rotation_base_points, skeleton_cycle};
use tropdyn::geometry::{check_balancing, level_set_polytope, skeleton_mesh, Point, TropicalCurve};
use tropdyn::kummer::check_semiconjugacy;
use tropdyn::pl1d::{
    cocycle1d, cocycle_atoms, measure_from_potential, pullback_form, support_interval, with_depth, PLMap1D,
};
use tropdyn::potential::{fit_slope, homogeneity_matrix, leading_eigendata, PotentialField};
use tropdyn::presets;
use tropdyn::rational::{int, rat, to_f64, Rational};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn within(elapsed: Duration, limit: Option<Duration>) -> bool {
    limit.is_none_or(|l| elapsed <= l)
}

fn skeleton_points(spec: &SurfaceSpec, n: usize, seed: u64) -> Vec<Point> {
    let poly = level_set_polytope(spec.hcirc(), spec.level()).expect("bounded level set");
    let mesh = skeleton_mesh(&poly).expect("3D mesh");
    mesh.random_points(n, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn tent_closed_form(x: f64) -> f64 {
    if x.abs() <= 0.5 {
        -x * x / 2.0 + 1.0 / 24.0
    } else {
        -x.abs() / 2.0 + 1.0 / 6.0
    }
}

fn c1_tent_closed_form() -> Outcome {
    let g = with_depth(&presets::tent_map(), 40);
    let worst = (0..=2000)
        .map(|i| {
            let x = rat(i - 1000, 500);
            (g.evaluate(&x) - tent_closed_form(to_f64(&x))).abs()
        })
        .fold(0.0, f64::max);
    outcome(worst <= 1e-9, format!("max |g_40 - closed form| = {worst:.3e} on 2001 points"))
}

fn c2_tent_measure() -> Outcome {
    let g = with_depth(&presets::tent_map(), 40);
    let r = match measure_from_potential(&g, (&int(-1), &int(1)), 400) {
        Ok(r) => r,
        Err(e) => return outcome(false, e.to_string()),
    };
    let m = &r.measure;
    let density_dev = m
        .density
        .iter()
        .filter(|c| c.x0 >= -0.45 && c.x1 <= 0.45)
        .map(|c| (c.value - 1.0).abs())
        .fold(0.0, f64::max);
    let largest_atom = m.atoms.iter().map(|a| a.mass).fold(0.0, f64::max);
    let mass_dev = (m.total_mass - 1.0).abs();
    outcome(
        density_dev <= 1e-6 && largest_atom < 1e-6 && mass_dev <= 1e-9,
        format!("density dev {density_dev:.2e}, largest atom {largest_atom:.2e}, |mass - 1| {mass_dev:.2e}"),
    )
}

fn c3_kummer() -> Outcome {
    let r = check_semiconjugacy(&presets::kummer_surface(), 1000, 100, 2024);
    outcome(
        r.passed() && r.checks == 3000 && r.orbit_steps == 100,
        format!("{} checks, {} mismatches; {} orbit steps, {} mismatches", r.checks, r.mismatches, r.orbit_steps, r.orbit_mismatches),
    )
}

fn c4_skeleton_preservation() -> Outcome {
    let mut failures = 0usize;
    let mut checked = 0usize;
    for seed in 0..10 {
        let spec = presets::random_surface(seed, &int(2));
        let points = skeleton_points(&spec, 1000, 100 + seed);
        checked += 3 * points.len();
        failures += points
            .par_iter()
            .map(|p| {
                let mut bad = usize::from(spec.h(p) != *spec.level());
                for axis in Axis::ALL {
                    let q = spec.reflector().reflect(axis.index(), p);
                    let back = spec.reflector().reflect(axis.index(), &q);
                    bad += usize::from(spec.h(&q) != spec.h(p) || back != *p);
                }
                bad
            })
            .sum::<usize>();
    }
    outcome(failures == 0, format!("{checked} exact reflections on 10 surfaces, {failures} failures"))
}

/// `det(tI - M)` coefficients by Faddeev–LeVerrier, leading first.
fn char_poly_oracle(m: &[[i64; 3]; 3]) -> [i64; 4] {
    let mul = |a: &[[i64; 3]; 3], b: &[[i64; 3]; 3]| -> [[i64; 3]; 3] {
        std::array::from_fn(|i| std::array::from_fn(|j| (0..3).map(|k| a[i][k] * b[k][j]).sum()))
    };
    let trace = |a: &[[i64; 3]; 3]| a[0][0] + a[1][1] + a[2][2];
    let mut coeffs = [1i64, 0, 0, 0];
    let mut n: [[i64; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|j| i64::from(i == j)));
    for k in 1..=3 {
        let an = mul(m, &n);
        coeffs[k] = -trace(&an) / k as i64;
        n = an;
        for (i, row) in n.iter_mut().enumerate() {
            row[i] += coeffs[k];
        }
    }
    coeffs
}

fn c5_homogeneity() -> Outcome {
    let letter: [[[i64; 3]; 3]; 3] = [
        [[-1, 0, 0], [2, 1, 0], [2, 0, 1]],
        [[1, 2, 0], [0, -1, 0], [0, 2, 1]],
        [[1, 0, 2], [0, 1, 2], [0, 0, -1]],
    ];
    let spec = presets::random_surface(7, &int(2));
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let mut t = || -> [Rational; 3] { std::array::from_fn(|_| rat(rng.random_range(-80..=80), 16)) };
    let points = skeleton_points(&spec, 100, 56);
    let mut failures = 0;
    for (axis, m) in Axis::ALL.into_iter().zip(&letter) {
        let w = AutomorphismWord::new(vec![axis]).expect("one letter");
        if homogeneity_matrix(&w) != *m {
            failures += 1;
        }
        for p in &points {
            let base = section(p).shifted(&t());
            let shift = t();
            let lhs = lift_word(&spec, &w, &base.shifted(&shift), LiftVariant::Involutive, 0.0);
            let rhs = lift_word(&spec, &w, &base, LiftVariant::Involutive, 0.0)
                .map(|q| q.shifted(&row_times(&shift, m)));
            if lhs.is_err() || lhs != rhs {
                failures += 1;
            }
        }
    }
    // M_{A∘B} = M_B · M_A
    let mul = |a: &[[i64; 3]; 3], b: &[[i64; 3]; 3]| -> [[i64; 3]; 3] {
        std::array::from_fn(|i| std::array::from_fn(|j| (0..3).map(|k| a[i][k] * b[k][j]).sum()))
    };
    let m_xyz = mul(&mul(&letter[2], &letter[1]), &letter[0]);
    let word: AutomorphismWord = "xyz".parse().expect("word");
    let poly = char_poly_oracle(&m_xyz);
    // (t + 1)(t² - 18t + 1)
    let want = [1, -17, -17, 1];
    let lambda = leading_eigendata(&homogeneity_matrix(&word)).map(|d| d.lambda).unwrap_or(f64::NAN);
    let lambda_err = (lambda - (9.0 + 4.0 * 5f64.sqrt())).abs();
    let ok = failures == 0 && homogeneity_matrix(&word) == m_xyz && poly == want && lambda_err <= 1e-10;
    outcome(ok, format!("{failures} lift failures over 300 (P, t); char poly {poly:?}; |λ - (9+4√5)| = {lambda_err:.1e}"))
}

fn c6_residual_decay() -> Outcome {
    let word: AutomorphismWord = "xyz".parse().expect("word");
    let specs = [("kummer", presets::kummer_surface()), ("random seed 3", presets::random_surface(3, &int(2)))];
    let mut details = Vec::new();
    let mut ok = true;
    for (name, spec) in specs {
        let field = match PotentialField::new(&spec, &word, 30) {
            Ok(f) => f,
            Err(e) => return outcome(false, format!("{name}: {e}")),
        };
        let points = skeleton_points(&spec, 100, 66);
        let depths: Vec<usize> = (5..=30).collect();
        let profiles: Vec<Vec<f64>> = points
            .par_iter()
            .map(|p| field.residual_profile(p, 30).unwrap_or_else(|_| vec![f64::NAN; 31]))
            .collect();
        let logs: Vec<f64> = depths
            .iter()
            .map(|&n| profiles.iter().map(|r| r[n]).fold(0.0, f64::max).ln())
            .collect();
        let xs: Vec<f64> = depths.iter().map(|&n| n as f64).collect();
        let slope = fit_slope(&xs, &logs);
        let target = -field.lambda().ln();
        let rel = ((slope - target) / target).abs();
        ok &= rel <= 0.05;
        details.push(format!("{name}: slope {slope:.4} vs {target:.4} ({:.2}%)", 100.0 * rel));
    }
    outcome(ok, details.join("; "))
}

fn c7_elliptic() -> Outcome {
    let mut rigid_failures = 0;
    let mut limits = Vec::new();
    let mut ok = true;
    for seed in 0..5 {
        let curve = presets::random_curve(seed, &int(2));
        let displacements = skeleton_cycle(&curve)
            .and_then(|cycle| arc_displacements(&curve, &cycle, &rotation_base_points(&cycle)));
        match displacements {
            Ok(d) if d.len() == 11 && d.iter().all(|x| *x == d[0]) => {}
            _ => rigid_failures += 1,
        }
        match near_maximal_rotation(&curve, 40) {
            Ok(n) => {
                let limit = n.limit.clone();
                let good = limit.as_ref().is_some_and(|l| l.is_zero() || *l == rat(1, 2));
                ok &= good;
                limits.push(match limit {
                    Some(l) => format!("{seed}:{l}"),
                    None => format!("{seed}:none"),
                });
            }
            Err(e) => {
                ok = false;
                limits.push(format!("{seed}:{e}"));
            }
        }
    }
    outcome(
        ok && rigid_failures == 0,
        format!("{rigid_failures} non-rigid specs; near-maximal ρ limits [{}], expected 0 or 1/2", limits.join(", ")),
    )
}

fn c8_rubik() -> Outcome {
    let h = presets::rubik_hcirc();
    let count = |s: Rational| level_set_polytope(&h, &-s).map(|p| p.vertices.len()).unwrap_or(0);
    let (quarter, three_quarters) = (count(rat(1, 4)), count(rat(3, 4)));
    let spec = presets::rubik_surface(&rat(1, 4));
    let xy: AutomorphismWord = "xy".parse().expect("word");
    let mut longest = 0;
    let mut aperiodic = 0;
    for p in skeleton_points(&spec, 100, 88) {
        match exact_period(&spec, &xy, &p, 8) {
            Ok(Some(k)) => longest = longest.max(k),
            _ => aperiodic += 1,
        }
    }
    outcome(
        quarter == 8 && three_quarters == 10 && aperiodic == 0,
        format!("vertices {quarter} (s=1/4), {three_quarters} (s=3/4); xy: {aperiodic} of 100 starts without period ≤ 8, longest period {longest}"),
    )
}

/// Jumps of `c'` at every candidate break, by exact one-sided quotients.
fn cocycle_jumps_oracle(f: &PLMap1D) -> Vec<(Rational, Rational)> {
    let mut candidates = Vec::new();
    for side in 0..2 {
        let terms = f.side(side);
        for (i, s) in terms.iter().enumerate() {
            for t in &terms[i + 1..] {
                if s.b != t.b {
                    candidates.push((&t.c - &s.c) / int(s.b as i64 - t.b as i64));
                }
            }
        }
    }
    candidates.sort();
    candidates.dedup();
    let gap = candidates
        .windows(2)
        .map(|w| &w[1] - &w[0])
        .min()
        .unwrap_or_else(|| int(1));
    let h = gap.min(int(1)) / int(4);
    candidates
        .into_iter()
        .filter_map(|x| {
            let left = (cocycle1d(f, &x) - cocycle1d(f, &(&x - &h))) / &h;
            let right = (cocycle1d(f, &(&x + &h)) - cocycle1d(f, &x)) / &h;
            let jump = left - right;
            (!jump.is_zero()).then_some((x, jump))
        })
        .collect()
}

fn c9_property_suites() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    let mut cone_failures = 0;
    for pair in 0..500u64 {
        let f = presets::random_pl_map(10_000 + pair);
        let (a, b) = (rng.random_range(0..=4), rng.random_range(0..=4));
        let c = rat(rng.random_range(-40..=40), 8);
        let Ok(terms) = pullback_form(&f, a, b, &c) else {
            cone_failures += 1;
            continue;
        };
        let xi_f = |x0: &Rational, x1: &Rational| {
            let (y0, y1) = f.homogeneous(x0, x1);
            int(a) * y0 + int(b) * y1 + &c
        };
        let symbolic = |x0: &Rational, x1: &Rational| {
            terms.iter().map(|t| t.homogeneous(x0, x1)).min().expect("nonempty")
        };
        let mut xs: Vec<Rational> = (0..12).map(|_| rat(rng.random_range(-400..=400), 32)).collect();
        xs.sort();
        let mut prev: Option<Rational> = None;
        for x in &xs {
            let x0 = rat(rng.random_range(-64..=64), 16);
            if xi_f(&x0, x) != symbolic(&x0, x) {
                cone_failures += 1;
            }
            // nonnegative slopes: nondecreasing in X₁ at X₀ = 0
            let v = xi_f(&int(0), x);
            if prev.as_ref().is_some_and(|p| *p > v) {
                cone_failures += 1;
            }
            prev = Some(v);
        }
    }
    let mut atom_failures = 0;
    for seed in 0..100 {
        let f = presets::random_pl_map(20_000 + seed);
        if cocycle_atoms(&f) != cocycle_jumps_oracle(&f) {
            atom_failures += 1;
        }
    }
    let mut worst_mass: f64 = 0.0;
    for seed in 0..20 {
        let g = with_depth(&presets::random_pl_map(30_000 + seed), 30);
        let (lo, hi) = support_interval(&g);
        match measure_from_potential(&g, (&lo, &hi), 100) {
            Ok(r) => worst_mass = worst_mass.max((r.measure.total_mass - 1.0).abs()),
            Err(_) => worst_mass = f64::INFINITY,
        }
    }
    let mut unbalanced = 0;
    for seed in 0..20 {
        let curve = presets::random_curve(40_000 + seed, &int(2));
        match TropicalCurve::from_polynomial(&curve.full_polynomial()) {
            Ok(t) if check_balancing(&t) && !t.vertices().is_empty() => {}
            _ => unbalanced += 1,
        }
    }
    outcome(
        cone_failures == 0 && atom_failures == 0 && worst_mass <= 1e-9 && unbalanced == 0,
        format!(
            "cone {cone_failures} failures/500 pairs; μ_c atoms {atom_failures} mismatches/100 maps; max |mass - 1| {worst_mass:.2e} on 20 maps; {unbalanced} unbalanced of 20 curves"
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome, Option<u64>);

fn main() {
    let criteria: [Criterion; 9] = [
        ("tent potential closed form", c1_tent_closed_form, Some(1)),
        ("tent measure is Lebesgue on [-1/2, 1/2]", c2_tent_measure, Some(5)),
        ("Kummer semiconjugacy", c3_kummer, Some(5)),
        ("skeleton preservation and involutivity", c4_skeleton_preservation, None),
        ("homogeneity matrices", c5_homogeneity, None),
        ("potential residual decay", c6_residual_decay, Some(30)),
        ("elliptic rigid rotation and near-maximal order", c7_elliptic, None),
        ("Rubik regimes", c8_rubik, None),
        ("property suites", c9_property_suites, None),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let limit = limit.map(Duration::from_secs);
        let timely = within(elapsed, limit);
        let passed = out.passed && timely;
        if !passed {
            failed += 1;
        }
        let budget = match limit {
            Some(l) if !timely => format!(", over the {}s budget", l.as_secs()),
            Some(l) => format!(", budget {}s", l.as_secs()),
            None => String::new(),
        };
        println!(
            "criterion {}: {} {name} ({:.2}s{budget}) {}",
            i + 1,
            if passed { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            out.detail
        );
    }
    println!("acceptance: {} passed, {failed} failed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
