//! The Kummer tetrahedron: the folding map from the torus and its
//! compatibility with the Vieta reflections.

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics3d::{apply_word, vieta_reflection, AutomorphismWord, Axis, SurfaceSpec};
use crate::geometry::Point;
use crate::rational::{frac, int, rat, to_f64, Rational};

/// A point of `ℝ²/ℤ²`, stored with coordinates in `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TorusPoint {
    a: Rational,
    b: Rational,
}

impl TorusPoint {
    pub fn new(a: Rational, b: Rational) -> Self {
        Self { a: frac(&a), b: frac(&b) }
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn neg(&self) -> Self {
        Self::new(-&self.a, -&self.b)
    }

    /// Integer matrix acting on the column `(a, b)ᵀ`.
    pub fn apply(&self, m: &Matrix2) -> Self {
        Self::new(
            int(m[0][0]) * &self.a + int(m[0][1]) * &self.b,
            int(m[1][0]) * &self.a + int(m[1][1]) * &self.b,
        )
    }
}

pub type Matrix2 = [[i64; 2]; 2];

/// `c(a) = 4·dist(a, ℤ) - 1`, a two-to-one fold of the circle onto `[-1, 1]`.
pub fn double_cover(a: &Rational) -> Rational {
    let f = frac(a);
    let other = int(1) - &f;
    let dist = if f < other { f } else { other };
    int(4) * dist - int(1)
}

/// `C(a, b) = (c(a), c(b), c(a + b))`.
pub fn kummer_map(p: &TorusPoint) -> Point {
    vec![double_cover(&p.a), double_cover(&p.b), double_cover(&(&p.a + &p.b))]
}

pub fn kummer_involution_matrices() -> [Matrix2; 3] {
    [[[1, 2], [0, -1]], [[-1, 0], [2, 1]], [[-1, 0], [0, 1]]]
}

pub fn involution_matrix(axis: Axis) -> Matrix2 {
    kummer_involution_matrices()[axis.index()]
}

pub fn mat2_mul(a: &Matrix2, b: &Matrix2) -> Matrix2 {
    std::array::from_fn(|i| std::array::from_fn(|j| a[i][0] * b[0][j] + a[i][1] * b[1][j]))
}

/// Matrix of the torus map matching a word: letters compose like the
/// reflections, rightmost first.
pub fn word_matrix(word: &AutomorphismWord) -> Matrix2 {
    word.letters()
        .iter()
        .fold([[1, 0], [0, 1]], |acc, &a| mat2_mul(&acc, &involution_matrix(a)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mismatch {
    pub a: String,
    pub b: String,
    pub axis: char,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SemiconjugacyReport {
    pub samples: usize,
    pub axes: usize,
    pub checks: usize,
    pub mismatches: usize,
    pub max_deviation: f64,
    pub orbit_steps: usize,
    pub orbit_mismatches: usize,
    /// First few failures, for diagnosis.
    pub examples: Vec<Mismatch>,
}

impl SemiconjugacyReport {
    pub fn passed(&self) -> bool {
        self.mismatches == 0 && self.orbit_mismatches == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }
}

fn linf(p: &[Rational], q: &[Rational]) -> Rational {
    p.iter().zip(q).map(|(x, y)| (x - y).abs()).max().unwrap_or_else(|| int(0))
}

/// Random torus points with denominators up to 1000.
pub fn random_torus_points(n: usize, seed: u64) -> Vec<TorusPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let q = rng.random_range(1..=1000);
            let r = rng.random_range(1..=1000);
            TorusPoint::new(rat(rng.random_range(0..q), q), rat(rng.random_range(0..r), r))
        })
        .collect()
}

/// Checks `C∘ι_α = σ_α∘C` exactly on random samples for every axis, then
/// follows the word `xyz` for `orbit_steps` steps on both sides.
pub fn check_semiconjugacy(
    spec: &SurfaceSpec,
    samples: usize,
    orbit_steps: usize,
    seed: u64,
) -> SemiconjugacyReport {
    let mut points = vec![TorusPoint::new(int(0), int(0))];
    points.extend(random_torus_points(samples.saturating_sub(1), seed));
    let results: Vec<Option<Mismatch>> = points
        .par_iter()
        .flat_map_iter(|p| {
            Axis::ALL.into_iter().map(move |axis| {
                let lhs = kummer_map(&p.apply(&involution_matrix(axis)));
                let rhs = vieta_reflection(spec, axis, &kummer_map(p)).ok()?;
                let d = linf(&lhs, &rhs);
                (!d.is_zero()).then(|| Mismatch {
                    a: p.a.to_string(),
                    b: p.b.to_string(),
                    axis: axis.letter(),
                    deviation: to_f64(&d),
                })
            })
        })
        .collect();
    let checks = results.len();
    let failures: Vec<Mismatch> = results.into_iter().flatten().collect();
    let max_deviation = failures.iter().map(|m| m.deviation).fold(0.0, f64::max);

    let word: AutomorphismWord = "xyz".parse().expect("valid word");
    let m = word_matrix(&word);
    let mut orbit_mismatches = 0;
    let mut t = points.get(1).cloned().unwrap_or_else(|| TorusPoint::new(rat(1, 7), rat(2, 9)));
    let mut x = kummer_map(&t);
    for _ in 0..orbit_steps {
        t = t.apply(&m);
        x = match apply_word(spec, &word, &x) {
            Ok(y) => y,
            Err(_) => {
                orbit_mismatches += 1;
                break;
            }
        };
        if kummer_map(&t) != x {
            orbit_mismatches += 1;
            x = kummer_map(&t);
        }
    }
    SemiconjugacyReport {
        samples: points.len(),
        axes: 3,
        checks,
        mismatches: failures.len(),
        max_deviation,
        orbit_steps,
        orbit_mismatches,
        examples: failures.into_iter().take(5).collect(),
    }
}

/// `σ_α(s·p) = s·σ_α(p)` for a homogeneous `h°` and `s > 0`.
pub fn scaling_commutes(spec: &SurfaceSpec, s: &Rational, p: &[Rational]) -> bool {
    let scaled: Point = p.iter().map(|x| x * s).collect();
    Axis::ALL.into_iter().all(|axis| {
        match (vieta_reflection(spec, axis, &scaled), vieta_reflection(spec, axis, p)) {
            (Ok(a), Ok(b)) => a.iter().zip(&b).all(|(x, y)| *x == y * s),
            _ => false,
        }
    })
}

/// Trace and spectral radius of the torus matrix of `xyz`, for comparison
/// with the stretch factor of the lifted surface map.
pub fn linear_diagnostic() -> (i64, f64) {
    let m = word_matrix(&"xyz".parse().expect("valid word"));
    let tr = m[0][0] + m[1][1];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let disc = (tr * tr - 4 * det) as f64;
    let rho = if disc >= 0.0 { (tr.abs() as f64 + disc.sqrt()) / 2.0 } else { (det as f64).abs().sqrt() };
    (tr, rho)
}
