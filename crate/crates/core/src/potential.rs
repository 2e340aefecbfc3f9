//! Homogeneity matrices of lifted words, their leading eigendata, and the
//! dynamically scaled potential obtained by unrolling the contraction.

use nalgebra::Matrix3;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::dynamics3d::{
    apply_word, cocycle_with, section, AutomorphismWord, Axis, DynamicsError, LiftVariant,
    LiftedPoint, SurfaceSpec,
};
use crate::geometry::{level_set_polytope, skeleton_mesh, GeometryError, Point};
use crate::rational::{to_f64, Rational};

pub type IntMatrix = [[i64; 3]; 3];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PotentialError {
    #[error("not hyperbolic: eigenvalues {}", format_eigenvalues(.eigenvalues))]
    NotHyperbolic { eigenvalues: Vec<(f64, f64)> },
    #[error("eigenvector residual {0:e} too large")]
    EigenResidual(f64),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

fn format_eigenvalues(ev: &[(f64, f64)]) -> String {
    ev.iter()
        .map(|(re, im)| {
            if im.abs() < 1e-12 {
                format!("{re:.6}")
            } else {
                format!("{re:.6}{im:+.6}i")
            }
        })
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn letter_matrix(axis: Axis, variant: LiftVariant) -> IntMatrix {
    let a = axis.index();
    let mut m = [[0i64; 3]; 3];
    for (r, row) in m.iter_mut().enumerate() {
        row[r] = 1;
        if r != a {
            row[a] = 2;
        }
    }
    if variant == LiftVariant::Involutive {
        m[a][a] = -1;
    }
    m
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..3).map(|k| a[i][k] * b[k][j]).sum()))
}

pub const IDENTITY: IntMatrix = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];

/// Matrix `M` with `F(P + 𝕍t) = F(P) + 𝕍·t·M` for the lift of `word`;
/// composition follows `M_{A∘B} = M_B · M_A`.
pub fn homogeneity_matrix(word: &AutomorphismWord) -> IntMatrix {
    homogeneity_matrix_with(word, LiftVariant::Involutive)
}

pub fn homogeneity_matrix_with(word: &AutomorphismWord, variant: LiftVariant) -> IntMatrix {
    word.letters()
        .iter()
        .rev()
        .fold(IDENTITY, |acc, &a| mat_mul(&acc, &letter_matrix(a, variant)))
}

/// Coefficients `[1, c₂, c₁, c₀]` of `det(t·I - M)`.
pub fn characteristic_polynomial(m: &IntMatrix) -> [i64; 4] {
    let trace = m[0][0] + m[1][1] + m[2][2];
    let minors = m[0][0] * m[1][1] - m[0][1] * m[1][0] + m[0][0] * m[2][2] - m[0][2] * m[2][0]
        + m[1][1] * m[2][2]
        - m[1][2] * m[2][1];
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    [1, -trace, minors, -det]
}

#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneityData {
    pub matrix: IntMatrix,
    pub lambda: f64,
    /// Unit L1 norm, largest entry positive.
    pub v: [f64; 3],
}

impl HomogeneityData {
    pub fn residual(&self) -> f64 {
        let m = &self.matrix;
        (0..3)
            .map(|i| {
                let mv: f64 = (0..3).map(|j| m[i][j] as f64 * self.v[j]).sum();
                (mv - self.lambda * self.v[i]).abs()
            })
            .fold(0.0, f64::max)
    }

    pub fn dot(&self, c: &[Rational; 3]) -> f64 {
        c.iter().zip(&self.v).map(|(x, v)| to_f64(x) * v).sum()
    }
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// Real simple eigenvalue `λ > 1` of largest modulus and its eigenvector.
pub fn leading_eigendata(m: &IntMatrix) -> Result<HomogeneityData, PotentialError> {
    let mf = Matrix3::from_fn(|i, j| m[i][j] as f64);
    let ev = mf.complex_eigenvalues();
    let eigenvalues: Vec<(f64, f64)> = ev.iter().map(|z| (z.re, z.im)).collect();
    let not_hyperbolic = || PotentialError::NotHyperbolic { eigenvalues: eigenvalues.clone() };
    let moduli: Vec<f64> = ev.iter().map(|z| z.norm()).collect();
    let lead = (0..3)
        .max_by(|&a, &b| moduli[a].total_cmp(&moduli[b]))
        .expect("three eigenvalues");
    let lambda = ev[lead].re;
    let rho = moduli[lead];
    if ev[lead].im.abs() > 1e-9 * rho || lambda <= 1.0 + 1e-9 {
        return Err(not_hyperbolic());
    }
    if (0..3).any(|k| k != lead && (moduli[k] - rho).abs() <= 1e-9 * rho) {
        return Err(not_hyperbolic());
    }
    let rows: Vec<[f64; 3]> = (0..3)
        .map(|i| std::array::from_fn(|j| m[i][j] as f64 - if i == j { lambda } else { 0.0 }))
        .collect();
    let norm1 = |v: &[f64; 3]| v.iter().map(|x| x.abs()).sum::<f64>();
    let mut v = [(0, 1), (0, 2), (1, 2)]
        .iter()
        .map(|&(a, b)| cross(rows[a], rows[b]))
        .max_by(|a, b| norm1(a).total_cmp(&norm1(b)))
        .expect("three pairs");
    let n = norm1(&v);
    if n == 0.0 {
        return Err(not_hyperbolic());
    }
    let big = (0..3).max_by(|&a, &b| v[a].abs().total_cmp(&v[b].abs())).expect("three");
    let sign = if v[big] < 0.0 { -1.0 } else { 1.0 };
    for x in &mut v {
        *x *= sign / n;
    }
    let data = HomogeneityData { matrix: *m, lambda, v };
    let scale = v.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let res = data.residual();
    if res > 1e-10 * scale {
        return Err(PotentialError::EigenResidual(res));
    }
    Ok(data)
}

/// `N = ⌈log(M_c / ((λ-1)·tol)) / log λ⌉`, at least zero.
pub fn default_depth(m_c: f64, lambda: f64, tol: f64) -> usize {
    let n = ((m_c / ((lambda - 1.0) * tol)).ln() / lambda.ln()).ceil();
    if n.is_finite() && n > 0.0 {
        n as usize
    } else {
        0
    }
}

/// The potential `g = G∘σ` of a hyperbolic word, evaluated lazily through
/// the cocycle series `g_N(p) = Σ_{k<N} λ^{-(k+1)} c(f^k p)·v`, which solves
/// `g(f(p)) = λ g(p) - c(p)·v` up to `λ^{-N}`.
#[derive(Debug, Clone)]
pub struct PotentialField {
    spec: SurfaceSpec,
    word: AutomorphismWord,
    data: HomogeneityData,
    depth: usize,
    m_c: f64,
}

impl PotentialField {
    pub fn new(
        spec: &SurfaceSpec,
        word: &AutomorphismWord,
        depth: usize,
    ) -> Result<Self, PotentialError> {
        let data = leading_eigendata(&homogeneity_matrix(word))?;
        let mut field = Self { spec: spec.clone(), word: word.clone(), data, depth, m_c: 0.0 };
        field.m_c = field.estimate_cocycle_bound(1000, 0)?;
        Ok(field)
    }

    /// Depth chosen from the tail bound so the truncation error is below
    /// `tol`.
    pub fn with_tolerance(
        spec: &SurfaceSpec,
        word: &AutomorphismWord,
        tol: f64,
    ) -> Result<Self, PotentialError> {
        let mut field = Self::new(spec, word, 0)?;
        field.depth = default_depth(field.m_c, field.data.lambda, tol);
        Ok(field)
    }

    pub fn spec(&self) -> &SurfaceSpec {
        &self.spec
    }

    pub fn word(&self) -> &AutomorphismWord {
        &self.word
    }

    pub fn data(&self) -> &HomogeneityData {
        &self.data
    }

    pub fn lambda(&self) -> f64 {
        self.data.lambda
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn set_depth(&mut self, depth: usize) {
        self.depth = depth;
    }

    /// Safety-padded bound on `|c(p)·v|` over the skeleton.
    pub fn cocycle_bound(&self) -> f64 {
        self.m_c
    }

    /// `M_c · λ^{-N} / (λ - 1)`.
    pub fn tail_bound(&self, depth: usize) -> f64 {
        self.m_c * self.data.lambda.powi(-(depth as i32)) / (self.data.lambda - 1.0)
    }

    /// Twice the largest `|c·v|` over the mesh vertices and `samples` random
    /// skeleton points.
    pub fn estimate_cocycle_bound(&self, samples: usize, seed: u64) -> Result<f64, PotentialError> {
        let poly = level_set_polytope(self.spec.hcirc(), self.spec.level())?;
        let mesh = skeleton_mesh(&poly)?;
        let mut pts = mesh.vertices.clone();
        pts.extend(mesh.random_points(samples, &mut ChaCha8Rng::seed_from_u64(seed)));
        let values = pts
            .par_iter()
            .map(|p| self.cocycle(p).map(|c| self.data.dot(&c).abs()))
            .collect::<Result<Vec<f64>, _>>()?;
        Ok(2.0 * values.into_iter().fold(0.0, f64::max))
    }

    pub fn cocycle(&self, p: &[Rational]) -> Result<[Rational; 3], PotentialError> {
        Ok(cocycle_with(&self.spec, &self.word, p, LiftVariant::Involutive)?)
    }

    /// Exact cocycle values `c(f^k p)` for `k = 0..=n`.
    pub fn cocycle_series(&self, p: &[Rational], n: usize) -> Result<Vec<[Rational; 3]>, PotentialError> {
        let mut out = Vec::with_capacity(n + 1);
        let mut q = p.to_vec();
        for k in 0..=n {
            out.push(self.cocycle(&q)?);
            if k < n {
                q = apply_word(&self.spec, &self.word, &q)?;
            }
        }
        Ok(out)
    }

    pub fn evaluate(&self, p: &[Rational]) -> Result<f64, PotentialError> {
        self.evaluate_depth(p, self.depth)
    }

    pub fn evaluate_depth(&self, p: &[Rational], depth: usize) -> Result<f64, PotentialError> {
        if depth == 0 {
            return Ok(0.0);
        }
        let series = self.cocycle_series(p, depth - 1)?;
        let lambda = self.data.lambda;
        Ok(series
            .iter()
            .enumerate()
            .rev()
            .map(|(k, c)| lambda.powi(-(k as i32 + 1)) * self.data.dot(c))
            .sum())
    }

    /// `G` on a point of `E`: `g` of its projection plus the fiber shift
    /// paired with `v`.
    pub fn evaluate_lifted(&self, p: &LiftedPoint<Rational>) -> Result<f64, PotentialError> {
        let base = crate::dynamics3d::project(p);
        let s = section(&base);
        let shift: [f64; 3] = std::array::from_fn(|c| to_f64(&(&p.rows[0][c] - &s.rows[0][c])));
        let g = self.evaluate(&base)?;
        Ok(g + shift.iter().zip(&self.data.v).map(|(t, v)| t * v).sum::<f64>())
    }

    pub fn residual(&self, p: &[Rational]) -> Result<f64, PotentialError> {
        self.residual_depth(p, self.depth)
    }

    /// `|g_N(f(p)) - λ g_N(p) + c(p)·v|`. The terms of each side are first
    /// collected per power of `λ` with exact rational coefficients, so the
    /// cancellation between them happens before rounding.
    pub fn residual_depth(&self, p: &[Rational], depth: usize) -> Result<f64, PotentialError> {
        let series = self.cocycle_series(p, depth)?;
        Ok(self.grouped_residual(&series, depth))
    }

    /// Residuals for every depth `0..=max_depth` from one orbit.
    pub fn residual_profile(&self, p: &[Rational], max_depth: usize) -> Result<Vec<f64>, PotentialError> {
        let series = self.cocycle_series(p, max_depth)?;
        Ok((0..=max_depth).map(|n| self.grouped_residual(&series, n)).collect())
    }

    /// `series[k] = c(f^k p)`, so `c(f^k(f p)) = series[k + 1]`.
    fn grouped_residual(&self, series: &[[Rational; 3]], n: usize) -> f64 {
        // coeffs[j] multiplies λ^{-j}
        let mut coeffs: Vec<[Rational; 3]> = vec![std::array::from_fn(|_| Rational::default()); n + 1];
        for k in 0..n {
            for i in 0..3 {
                coeffs[k + 1][i] += &series[k + 1][i];
                coeffs[k][i] -= &series[k][i];
            }
        }
        for i in 0..3 {
            coeffs[0][i] += &series[0][i];
        }
        let lambda = self.data.lambda;
        coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| lambda.powi(-(j as i32)) * self.data.dot(c))
            .sum::<f64>()
            .abs()
    }
}

/// Reported, never asserted: midpoint second differences of `g` along
/// random segments inside faces.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexityProbe {
    pub segments: usize,
    pub concave: usize,
    pub convex: usize,
    pub max_second_difference: f64,
    pub min_second_difference: f64,
}

pub fn convexity_probe(
    field: &PotentialField,
    segments: usize,
    seed: u64,
) -> Result<ConvexityProbe, PotentialError> {
    let poly = level_set_polytope(field.spec.hcirc(), field.spec.level())?;
    let mesh = skeleton_mesh(&poly)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut probe = ConvexityProbe {
        segments,
        concave: 0,
        convex: 0,
        max_second_difference: f64::NEG_INFINITY,
        min_second_difference: f64::INFINITY,
    };
    for _ in 0..segments {
        let pts = mesh.random_points(1, &mut rng);
        let a = &pts[0];
        let face = mesh
            .faces
            .iter()
            .find(|f| field.spec.hcirc().active_forms(a).map(|s| s == vec![f.form]).unwrap_or(false));
        let Some(face) = face else { continue };
        let b: Point = mesh.vertices[face.vertices[0]].clone();
        let mid: Point = a.iter().zip(&b).map(|(x, y)| (x + y) / Rational::from_integer(2.into())).collect();
        let d = field.evaluate(a)? + field.evaluate(&b)? - 2.0 * field.evaluate(&mid)?;
        if d <= 0.0 {
            probe.concave += 1;
        }
        if d >= 0.0 {
            probe.convex += 1;
        }
        probe.max_second_difference = probe.max_second_difference.max(d);
        probe.min_second_difference = probe.min_second_difference.min(d);
    }
    Ok(probe)
}

/// Reported, never asserted: fitted exponent `α` in
/// `max |g(p) - g(q)| ≈ C·|p - q|^α` over dyadic scales.
pub fn holder_probe(
    field: &PotentialField,
    pairs: usize,
    seed: u64,
) -> Result<f64, PotentialError> {
    let poly = level_set_polytope(field.spec.hcirc(), field.spec.level())?;
    let mesh = skeleton_mesh(&poly)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for scale in 2..9 {
        let h = Rational::new(1.into(), (1i64 << scale).into());
        let mut worst: f64 = 0.0;
        for p in mesh.random_points(pairs, &mut rng) {
            let Some(face) = mesh
                .faces
                .iter()
                .find(|f| field.spec.hcirc().active_forms(&p).map(|s| s == vec![f.form]).unwrap_or(false))
            else {
                continue;
            };
            let v = &mesh.vertices[face.vertices[0]];
            let q: Point = p.iter().zip(v).map(|(a, b)| a + (b - a) * &h).collect();
            worst = worst.max((field.evaluate(&p)? - field.evaluate(&q)?).abs());
        }
        if worst > 0.0 {
            xs.push(to_f64(&h).ln());
            ys.push(worst.ln());
        }
    }
    Ok(fit_slope(&xs, &ys))
}

/// Least-squares slope of `ys` against `xs`.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics3d::lift_word;
    use crate::presets;
    use crate::rational::{int, rat};
    use rand::Rng;

    fn word(s: &str) -> AutomorphismWord {
        s.parse().unwrap()
    }

    #[test]
    fn letter_matrices() {
        assert_eq!(homogeneity_matrix(&word("x")), [[-1, 0, 0], [2, 1, 0], [2, 0, 1]]);
        assert_eq!(homogeneity_matrix(&word("y")), [[1, 2, 0], [0, -1, 0], [0, 2, 1]]);
        assert_eq!(homogeneity_matrix(&word("z")), [[1, 0, 2], [0, 1, 2], [0, 0, -1]]);
        assert_eq!(homogeneity_matrix(&word("xx")), IDENTITY);
        assert_eq!(
            homogeneity_matrix_with(&word("x"), LiftVariant::Positive),
            [[1, 0, 0], [2, 1, 0], [2, 0, 1]]
        );
    }

    /// Hand-expanded product `M_Z·M_Y·M_X`.
    #[test]
    fn xyz_matrix_and_characteristic_polynomial() {
        let m = homogeneity_matrix(&word("xyz"));
        assert_eq!(m, [[15, 6, 2], [10, 3, 2], [-6, -2, -1]]);
        // (t+1)(t²-18t+1) = t³ - 17t² - 17t + 1
        assert_eq!(characteristic_polynomial(&m), [1, -17, -17, 1]);
    }

    #[test]
    fn xyz_eigendata() {
        let d = leading_eigendata(&homogeneity_matrix(&word("xyz"))).unwrap();
        assert!((d.lambda - (9.0 + 4.0 * 5f64.sqrt())).abs() < 1e-10);
        assert!(d.residual() <= 1e-10);
        assert!((d.v.iter().map(|x| x.abs()).sum::<f64>() - 1.0).abs() < 1e-15);
        let inv = leading_eigendata(&homogeneity_matrix(&word("zyx"))).unwrap();
        assert!((inv.lambda - d.lambda).abs() < 1e-9);
    }

    #[test]
    fn non_hyperbolic_matrices_are_rejected() {
        assert!(matches!(leading_eigendata(&IDENTITY), Err(PotentialError::NotHyperbolic { .. })));
        let mx = homogeneity_matrix(&word("x"));
        assert_eq!(characteristic_polynomial(&mx), [1, -1, -1, 1]);
        assert!(matches!(leading_eigendata(&mx), Err(PotentialError::NotHyperbolic { .. })));
        let mxy = homogeneity_matrix(&word("xy"));
        // (t-1)³
        assert_eq!(characteristic_polynomial(&mxy), [1, -3, 3, -1]);
        assert!(matches!(leading_eigendata(&mxy), Err(PotentialError::NotHyperbolic { .. })));
    }

    #[test]
    fn default_depth_inverts_the_tail_bound() {
        let lambda = 9.0 + 4.0 * 5f64.sqrt();
        let n = default_depth(3.0, lambda, 1e-9);
        assert!(3.0 * lambda.powi(-(n as i32)) / (lambda - 1.0) <= 1e-9);
        assert!(3.0 * lambda.powi(-(n as i32 - 1)) / (lambda - 1.0) > 1e-9);
        assert_eq!(default_depth(1e-12, lambda, 1e-9), 0);
    }

    fn skeleton_points(spec: &SurfaceSpec, n: usize, seed: u64) -> Vec<Point> {
        let poly = level_set_polytope(spec.hcirc(), spec.level()).unwrap();
        skeleton_mesh(&poly).unwrap().random_points(n, &mut ChaCha8Rng::seed_from_u64(seed))
    }

    #[test]
    fn zero_depth_is_zero() {
        let spec = presets::kummer_surface();
        let f = PotentialField::new(&spec, &word("xyz"), 0).unwrap();
        for p in skeleton_points(&spec, 5, 1) {
            assert_eq!(f.evaluate(&p).unwrap(), 0.0);
        }
    }

    #[test]
    fn residual_and_cauchy_bounds() {
        for spec in [presets::kummer_surface(), presets::random_surface(4, &int(2))] {
            let mut f = PotentialField::with_tolerance(&spec, &word("xyz"), 1e-9).unwrap();
            let n = f.depth();
            assert!(n > 0);
            let lambda = f.lambda();
            for p in skeleton_points(&spec, 100, 2) {
                let r = f.residual(&p).unwrap();
                assert!(r <= f.cocycle_bound() * lambda.powi(-(n as i32) + 1) / (lambda - 1.0));
                let g_n = f.evaluate_depth(&p, n).unwrap();
                let g_2n = f.evaluate_depth(&p, 2 * n).unwrap();
                assert!((g_2n - g_n).abs() <= f.tail_bound(n) + 1e-15);
            }
            f.set_depth(n + 1);
            assert!(f.residual(&skeleton_points(&spec, 1, 3)[0]).unwrap() <= 1e-9);
        }
    }

    /// Independent of the grouped residual: the lifted potential scales by λ
    /// under the lifted map, compared in plain floating point.
    #[test]
    fn lifted_potential_scales() {
        let spec = presets::kummer_surface();
        let w = word("xyz");
        let f = PotentialField::new(&spec, &w, 25).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for p in skeleton_points(&spec, 40, 9) {
            let t: [Rational; 3] = std::array::from_fn(|_| rat(rng.random_range(-20..=20), 4));
            let lifted = section(&p).shifted(&t);
            let image = lift_word(&spec, &w, &lifted, LiftVariant::Involutive, 0.0).unwrap();
            let g0 = f.evaluate_lifted(&lifted).unwrap();
            let g1 = f.evaluate_lifted(&image).unwrap();
            assert!((g1 - f.lambda() * g0).abs() <= 1e-9 * (1.0 + g1.abs()), "{g1} vs {}", f.lambda() * g0);
        }
    }

    #[test]
    fn fixed_point_residual_shrinks_by_lambda() {
        let spec = presets::kummer_surface();
        let f = PotentialField::new(&spec, &word("xyz"), 0).unwrap();
        let p = vec![int(-1), int(-1), int(-1)];
        assert_eq!(apply_word(&spec, &word("xyz"), &p).unwrap(), p);
        let c = f.cocycle(&p).unwrap();
        let cv = f.data().dot(&c);
        for n in 1..6 {
            let g = f.evaluate_depth(&p, n).unwrap();
            let direct = ((f.lambda() - 1.0) * g - cv).abs();
            let r = f.residual_depth(&p, n).unwrap();
            assert!((direct - r).abs() <= 1e-12 * (1.0 + cv.abs()));
            let r_next = f.residual_depth(&p, n + 1).unwrap();
            assert!(r_next <= r / f.lambda() * (1.0 + 1e-9));
        }
    }

    #[test]
    fn inverse_word_has_same_lambda_and_small_residuals() {
        let spec = presets::kummer_surface();
        let fwd = PotentialField::with_tolerance(&spec, &word("xyz"), 1e-9).unwrap();
        let back = PotentialField::with_tolerance(&spec, &word("xyz").inverse(), 1e-9).unwrap();
        assert!((fwd.lambda() - back.lambda()).abs() < 1e-9);
        for p in skeleton_points(&spec, 50, 12) {
            assert!(fwd.residual(&p).unwrap() <= 1e-9 * fwd.lambda());
            assert!(back.residual(&p).unwrap() <= 1e-9 * back.lambda());
        }
    }

    #[test]
    fn probes_run() {
        let spec = presets::kummer_surface();
        let f = PotentialField::with_tolerance(&spec, &word("xyz"), 1e-6).unwrap();
        let c = convexity_probe(&f, 20, 1).unwrap();
        assert_eq!(c.segments, 20);
        let alpha = holder_probe(&f, 10, 2).unwrap();
        assert!(alpha.is_finite());
    }
}
