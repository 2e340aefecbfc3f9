//! Homogeneous piecewise-linear maps of the line, their potentials and the
//! measures read off from the potentials.

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{format_sig, int, rat, to_f64, Display, Rational};
use crate::trop::lower_envelope_breaks;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Pl1dError {
    #[error("degree {0} is below 2")]
    DegreeTooSmall(u32),
    #[error("F{0} has no terms")]
    EmptySide(usize),
    #[error("term {term} of F{side} has a + b = {sum}, expected {n}")]
    DegreeMismatch { side: usize, term: usize, sum: u32, n: u32 },
    #[error("no term has b = {0}")]
    MissingExtreme(u32),
    #[error("negative slope ({a}, {b}) in a form pulled back through the map")]
    NegativeSlope { a: i64, b: i64 },
    #[error("negative mass {mass:e} at {x}: the potential is not concave")]
    ConcavityViolation { x: f64, mass: f64 },
    #[error("empty interval [{}, {}]", Display(.0), Display(.1))]
    EmptyInterval(Rational, Rational),
}

/// `a·X₀ + b·X₁ + c`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MapTerm {
    pub a: u32,
    pub b: u32,
    #[serde(with = "rational_string")]
    pub c: Rational,
}

impl MapTerm {
    pub fn new(a: u32, b: u32, c: Rational) -> Self {
        Self { a, b, c }
    }

    /// Value on the line `X₀ = 0, X₁ = x`.
    pub fn dehomogenized(&self, x: &Rational) -> Rational {
        &self.c + int(self.b as i64) * x
    }

    pub fn homogeneous(&self, x0: &Rational, x1: &Rational) -> Rational {
        &self.c + int(self.a as i64) * x0 + int(self.b as i64) * x1
    }
}

pub(crate) mod rational_string {
    use crate::rational::{parse_rational, Display, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&Display(r).to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Number(serde_json::Number),
        }
        let text = match Raw::deserialize(d)? {
            Raw::Text(t) => t,
            Raw::Number(n) => n.to_string(),
        };
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

/// `F = (F₀ : F₁)` of degree `n`, each side a min of terms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawMap", into = "RawMap")]
pub struct PLMap1D {
    n: u32,
    sides: [Vec<MapTerm>; 2],
}

#[derive(Serialize, Deserialize)]
struct RawMap {
    degree: u32,
    f0: Vec<MapTerm>,
    f1: Vec<MapTerm>,
}

impl TryFrom<RawMap> for PLMap1D {
    type Error = Pl1dError;
    fn try_from(r: RawMap) -> Result<Self, Pl1dError> {
        PLMap1D::new(r.degree, r.f0, r.f1)
    }
}

impl From<PLMap1D> for RawMap {
    fn from(m: PLMap1D) -> Self {
        let [f0, f1] = m.sides;
        RawMap { degree: m.n, f0, f1 }
    }
}

fn side_value(terms: &[MapTerm], x: &Rational) -> Rational {
    terms.iter().map(|t| t.dehomogenized(x)).min().expect("nonempty side")
}

/// `(slope on the left, slope on the right)` of a side at `x`.
fn side_slopes(terms: &[MapTerm], x: &Rational) -> (i64, i64) {
    let m = side_value(terms, x);
    let active = terms.iter().filter(|t| t.dehomogenized(x) == m).map(|t| t.b as i64);
    let (lo, hi) = active.fold((i64::MAX, i64::MIN), |(lo, hi), b| (lo.min(b), hi.max(b)));
    (hi, lo)
}

impl PLMap1D {
    pub fn new(n: u32, f0: Vec<MapTerm>, f1: Vec<MapTerm>) -> Result<Self, Pl1dError> {
        if n < 2 {
            return Err(Pl1dError::DegreeTooSmall(n));
        }
        for (side, terms) in [&f0, &f1].into_iter().enumerate() {
            if terms.is_empty() {
                return Err(Pl1dError::EmptySide(side));
            }
            for (term, t) in terms.iter().enumerate() {
                if t.a + t.b != n {
                    return Err(Pl1dError::DegreeMismatch { side, term, sum: t.a + t.b, n });
                }
            }
        }
        for extreme in [n, 0] {
            if !f0.iter().chain(&f1).any(|t| t.b == extreme) {
                return Err(Pl1dError::MissingExtreme(extreme));
            }
        }
        Ok(Self { n, sides: [f0, f1] })
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    pub fn side(&self, i: usize) -> &[MapTerm] {
        &self.sides[i]
    }

    /// `f_i(x) = min_j (b x + c)`.
    pub fn side_value(&self, i: usize, x: &Rational) -> Rational {
        side_value(&self.sides[i], x)
    }

    /// Break points of `f_i` with the slope drop `b_left - b_right` at each.
    pub fn side_breaks(&self, i: usize) -> Vec<(Rational, i64)> {
        let lines: Vec<(i64, Rational)> =
            self.sides[i].iter().map(|t| (t.b as i64, t.c.clone())).collect();
        lower_envelope_breaks(&lines)
    }

    /// Sorted break points of `f₁` and `f₀` together.
    pub fn breaks(&self) -> Vec<Rational> {
        let mut out: Vec<Rational> =
            (0..2).flat_map(|i| self.side_breaks(i)).map(|(x, _)| x).collect();
        out.sort();
        out.dedup();
        out
    }

    /// `(f'ₗ(x), f'ᵣ(x))`.
    pub fn slopes_at(&self, x: &Rational) -> (i64, i64) {
        let (l1, r1) = side_slopes(&self.sides[1], x);
        let (l0, r0) = side_slopes(&self.sides[0], x);
        (l1 - l0, r1 - r0)
    }

    /// `F(X₀, X₁)`.
    pub fn homogeneous(&self, x0: &Rational, x1: &Rational) -> (Rational, Rational) {
        let eval = |terms: &[MapTerm]| {
            terms.iter().map(|t| t.homogeneous(x0, x1)).min().expect("nonempty side")
        };
        (eval(&self.sides[0]), eval(&self.sides[1]))
    }
}

/// `f(x) = f₁(x) - f₀(x)`.
pub fn evaluate_map(f: &PLMap1D, x: &Rational) -> Rational {
    f.side_value(1, x) - f.side_value(0, x)
}

/// `c(x) = ½(f₁(x) + f₀(x)) - n x / 2`.
pub fn cocycle1d(f: &PLMap1D, x: &Rational) -> Rational {
    ((f.side_value(1, x) + f.side_value(0, x)) - int(f.n as i64) * x) / int(2)
}

/// `ξ∘F` for `ξ = a X₀ + b X₁ + c` with `a, b ≥ 0`, expanded into a min of
/// terms `a·F₀ʲ + b·F₁ᵏ + c`, all with nonnegative slopes.
pub fn pullback_form(f: &PLMap1D, a: i64, b: i64, c: &Rational) -> Result<Vec<MapTerm>, Pl1dError> {
    if a < 0 || b < 0 {
        return Err(Pl1dError::NegativeSlope { a, b });
    }
    let (a, b) = (a as u32, b as u32);
    let zero_side = MapTerm::new(0, 0, int(0));
    let left: Vec<&MapTerm> = if a == 0 { vec![&zero_side] } else { f.sides[0].iter().collect() };
    let right: Vec<&MapTerm> = if b == 0 { vec![&zero_side] } else { f.sides[1].iter().collect() };
    let mut out: Vec<MapTerm> = Vec::new();
    for u in &left {
        for v in &right {
            let t = MapTerm::new(
                a * u.a + b * v.a,
                a * u.b + b * v.b,
                int(a as i64) * &u.c + int(b as i64) * &v.c + c,
            );
            match out.iter_mut().find(|s| s.a == t.a && s.b == t.b) {
                Some(s) if s.c > t.c => s.c = t.c,
                Some(_) => {}
                None => out.push(t),
            }
        }
    }
    Ok(out)
}

pub fn g0(x: &Rational) -> Rational {
    -x.abs() / int(2)
}

/// The potential `g` with `g(f(x)) = n g(x) - c(x)`, evaluated through the
/// truncated orbit sum seeded with `-|x|/2`.
#[derive(Debug, Clone)]
pub struct Potential1D {
    map: PLMap1D,
    depth: usize,
    /// `sup |g - g₀|`.
    seed_gap: f64,
    /// Beyond `±tail_point`, `g(x) = -|x|/2 + tail constant`.
    tail_point: Rational,
    tails: (Rational, Rational),
}

/// `sup_x |(g₀(f x) + c(x))/n - g₀(x)|`. The function is piecewise linear
/// and bounded, so the sup is taken at its break points or far out.
fn seed_defect(f: &PLMap1D) -> Rational {
    let mut knots = f.breaks();
    knots.push(int(0));
    knots.sort();
    knots.dedup();
    let far = knots.iter().map(|x| x.abs()).max().unwrap_or_else(|| int(0)) + int(1);
    let mut bounds = vec![-&far];
    bounds.extend(knots.iter().cloned());
    bounds.push(far.clone());
    let mut probes = bounds.clone();
    // zeros of f, where g₀∘f breaks
    for w in bounds.windows(2) {
        let (y0, y1) = (evaluate_map(f, &w[0]), evaluate_map(f, &w[1]));
        if (y0.is_negative() && y1.is_positive()) || (y0.is_positive() && y1.is_negative()) {
            let t = &y0 / (&y0 - &y1);
            probes.push(&w[0] + (&w[1] - &w[0]) * t);
        }
    }
    let n = int(f.n as i64);
    probes
        .iter()
        .map(|x| ((g0(&evaluate_map(f, x)) + cocycle1d(f, x)) / &n - g0(x)).abs())
        .max()
        .unwrap_or_else(|| int(0))
}

impl Potential1D {
    pub fn map(&self) -> &PLMap1D {
        &self.map
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn tail_point(&self) -> &Rational {
        &self.tail_point
    }

    /// Constants `(c', c'')` with `g(x) = x/2 + c'` far left and
    /// `g(x) = -x/2 + c''` far right.
    pub fn tails(&self) -> &(Rational, Rational) {
        &self.tails
    }

    /// `n^{-N} · sup |g - g₀|`.
    pub fn error_bound(&self) -> f64 {
        self.seed_gap * (self.map.n as f64).powi(-(self.depth as i32))
    }

    /// `g_N(x)` as an exact rational.
    pub fn evaluate_series(&self, x: &Rational, depth: usize) -> Rational {
        let n = int(self.map.n as i64);
        let mut terms = Vec::with_capacity(depth);
        let mut y = x.clone();
        for _ in 0..depth {
            let (f0, f1) = (self.map.side_value(0, &y), self.map.side_value(1, &y));
            terms.push((&f1 + &f0 - &n * &y) / int(2));
            y = f1 - f0;
        }
        terms.into_iter().rev().fold(g0(&y), |acc, c| (acc + c) / &n)
    }

    pub fn evaluate_exact(&self, x: &Rational) -> Rational {
        if *x >= self.tail_point {
            -x / int(2) + &self.tails.1
        } else if *x <= -&self.tail_point {
            x / int(2) + &self.tails.0
        } else {
            self.evaluate_series(x, self.depth)
        }
    }

    pub fn evaluate(&self, x: &Rational) -> f64 {
        to_f64(&self.evaluate_exact(x))
    }

    /// `|g_N(f(x)) - n g_N(x) + c(x)|`.
    pub fn residual(&self, x: &Rational) -> f64 {
        let fx = evaluate_map(&self.map, x);
        let r = self.evaluate_series(&fx, self.depth) - int(self.map.n as i64) * self.evaluate_series(x, self.depth)
            + cocycle1d(&self.map, x);
        to_f64(&r.abs())
    }

    /// Right (`side = 1`) or left (`side = -1`) derivative from the one-sided
    /// second-order quotient `(4g(x+h/2) - 3g(x) - g(x+h)) / h` with signed `h`.
    pub fn one_sided_derivative(&self, x: &Rational, h: &Rational, side: i64) -> Rational {
        let h = h * int(side);
        let g = |y: &Rational| self.evaluate_series(y, self.depth);
        (int(4) * g(&(x + &h / int(2))) - int(3) * g(x) - g(&(x + &h))) / h
    }
}

/// Depth `N` with `n^{-N} sup|g - g₀| ≤ tol`, at least one.
pub fn solve_potential(f: &PLMap1D, tol: f64) -> Potential1D {
    let n = f.n as f64;
    let gap = to_f64(&seed_defect(f)) * n / (n - 1.0);
    let depth = if gap <= tol { 1 } else { ((gap / tol).ln() / n.ln()).ceil().max(1.0) as usize };
    with_depth(f, depth)
}

/// Fixed-depth potential; the tail point is found by doubling until the
/// series is exactly affine with slope `∓1/2` beyond it.
pub fn with_depth(f: &PLMap1D, depth: usize) -> Potential1D {
    let n = f.n as f64;
    let gap = to_f64(&seed_defect(f)) * n / (n - 1.0);
    let mut pot = Potential1D {
        map: f.clone(),
        depth,
        seed_gap: gap,
        tail_point: int(0),
        tails: (int(0), int(0)),
    };
    let mut k = f.breaks().iter().map(|x| x.abs()).max().unwrap_or_else(|| int(0)) + int(1);
    for _ in 0..64 {
        let right = pot.evaluate_series(&k, depth) + &k / int(2);
        let right2 = pot.evaluate_series(&(int(2) * &k), depth) + &k;
        let left = pot.evaluate_series(&-&k, depth) + &k / int(2);
        let left2 = pot.evaluate_series(&(int(-2) * &k), depth) + &k;
        if right == right2 && left == left2 {
            pot.tail_point = k;
            pot.tails = (left, right);
            return pot;
        }
        k *= int(2);
    }
    pot.tail_point = k;
    pot.tails = (
        pot.evaluate_series(&-&pot.tail_point, depth) + &pot.tail_point / int(2),
        pot.evaluate_series(&pot.tail_point, depth) + &pot.tail_point / int(2),
    );
    pot
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub x: f64,
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityCell {
    pub x0: f64,
    pub x1: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PiecewiseMeasure {
    pub atoms: Vec<Atom>,
    pub density: Vec<DensityCell>,
    pub total_mass: f64,
}

impl PiecewiseMeasure {
    pub fn atom_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass).sum()
    }

    pub fn density_mass(&self) -> f64 {
        self.density.iter().map(|c| c.value * (c.x1 - c.x0)).sum()
    }

    /// Mass of `[a, b]`, with density cells counted proportionally.
    pub fn mass_of(&self, a: f64, b: f64) -> f64 {
        let atoms: f64 = self.atoms.iter().filter(|t| t.x >= a && t.x <= b).map(|t| t.mass).sum();
        let dens: f64 = self
            .density
            .iter()
            .map(|c| (c.x1.min(b) - c.x0.max(a)).max(0.0) * c.value)
            .sum();
        atoms + dens
    }

    /// No density and at most one atom: a point mass or nothing.
    pub fn is_degenerate(&self, tol: f64) -> bool {
        self.density.iter().all(|c| (c.value * (c.x1 - c.x0)).abs() <= tol)
            && self.atoms.iter().filter(|a| a.mass.abs() > tol).count() <= 1
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }
}

/// Output of [`measure_from_potential`].
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureReport {
    pub measure: PiecewiseMeasure,
    /// Exact locations of the reported atoms, parallel to `measure.atoms`.
    pub atom_points: Vec<Rational>,
    /// Jumps that changed with `h` and were folded into the density.
    pub unstable: Vec<Rational>,
}

pub const DERIVATIVE_STEPS: [(i64, i64); 3] = [(1, 10_000), (1, 100_000), (1, 1_000_000)];
/// Jumps below this are treated as quadrature noise.
pub const ATOM_FLOOR: f64 = 1e-12;
pub const NEGATIVE_TOLERANCE: f64 = 1e-6;

/// The grid used for measures: `resolution` equal cells on `[a, b]`, plus
/// `0`, the break points of `f` and their first ten images inside.
pub fn measure_grid(f: &PLMap1D, a: &Rational, b: &Rational, resolution: usize) -> Vec<Rational> {
    let resolution = resolution.max(1) as i64;
    let mut grid: Vec<Rational> =
        (0..=resolution).map(|i| a + (b - a) * rat(i, resolution)).collect();
    let mut extra = f.breaks();
    extra.push(int(0));
    extra.extend(fixed_points(f));
    let mut frontier = f.breaks();
    for _ in 0..10 {
        frontier = frontier.iter().map(|x| evaluate_map(f, x)).collect();
        extra.extend(frontier.iter().cloned());
    }
    grid.extend(extra.into_iter().filter(|x| x > a && x < b));
    grid.sort();
    grid.dedup();
    grid
}

/// Fixed points of `f`, solved piece by piece.
pub fn fixed_points(f: &PLMap1D) -> Vec<Rational> {
    let mut breaks = f.breaks();
    breaks.sort();
    breaks.dedup();
    let mut probes: Vec<(Rational, Rational)> = Vec::new();
    match (breaks.first(), breaks.last()) {
        (Some(lo), Some(hi)) => {
            probes.push((lo - int(2), lo - int(1)));
            for w in breaks.windows(2) {
                let d = (&w[1] - &w[0]) / int(3);
                probes.push((&w[0] + &d, &w[1] - &d));
            }
            probes.push((hi + int(1), hi + int(2)));
        }
        _ => probes.push((int(0), int(1))),
    }
    let mut out: Vec<Rational> = probes
        .into_iter()
        .filter_map(|(u, v)| {
            let (fu, fv) = (evaluate_map(f, &u), evaluate_map(f, &v));
            let s = (&fv - &fu) / (&v - &u);
            if s == int(1) {
                return None;
            }
            let x = (&fu - &s * &u) / (int(1) - &s);
            (evaluate_map(f, &x) == x).then_some(x)
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Atoms from one-sided slope jumps and piecewise-constant density from
/// slope drops across grid cells. Derivatives use `h = 10⁻⁶`; every jump
/// above [`ATOM_FLOOR`] is recomputed at `h = 10⁻⁴, 10⁻⁵` and kept as an
/// atom only if the three agree.
pub fn measure_from_potential(
    g: &Potential1D,
    interval: (&Rational, &Rational),
    resolution: usize,
) -> Result<MeasureReport, Pl1dError> {
    let (a, b) = interval;
    if a >= b {
        return Err(Pl1dError::EmptyInterval(a.clone(), b.clone()));
    }
    let grid = measure_grid(&g.map, a, b, resolution);
    let h = rat(DERIVATIVE_STEPS[2].0, DERIVATIVE_STEPS[2].1);
    let slopes: Vec<(f64, f64)> = grid
        .par_iter()
        .map(|x| {
            (
                to_f64(&g.one_sided_derivative(x, &h, -1)),
                to_f64(&g.one_sided_derivative(x, &h, 1)),
            )
        })
        .collect();
    let stable: Vec<bool> = grid
        .par_iter()
        .zip(&slopes)
        .enumerate()
        .map(|(i, (x, (l, r)))| {
            let jump = l - r;
            if i == 0 || i + 1 == grid.len() || jump.abs() <= ATOM_FLOOR {
                return true;
            }
            DERIVATIVE_STEPS[..2].iter().all(|&(p, q)| {
                let hh = rat(p, q);
                let j = to_f64(&(g.one_sided_derivative(x, &hh, -1) - g.one_sided_derivative(x, &hh, 1)));
                (j - jump).abs() <= 1e-9_f64.max(1e-3 * jump.abs())
            })
        })
        .collect();
    let mut report = MeasureReport {
        measure: PiecewiseMeasure::default(),
        atom_points: Vec::new(),
        unstable: Vec::new(),
    };
    let mut carry = 0.0;
    for i in 0..grid.len() {
        let (l, r) = slopes[i];
        let jump = l - r;
        let interior = i > 0 && i + 1 < grid.len();
        if interior && jump.abs() > ATOM_FLOOR {
            if stable[i] {
                if jump < -NEGATIVE_TOLERANCE {
                    return Err(Pl1dError::ConcavityViolation { x: to_f64(&grid[i]), mass: jump });
                }
                report.measure.atoms.push(Atom { x: to_f64(&grid[i]), mass: jump });
                report.atom_points.push(grid[i].clone());
            } else {
                report.unstable.push(grid[i].clone());
                carry += jump;
            }
        } else if interior {
            carry += jump;
        }
        if i + 1 < grid.len() {
            let len = to_f64(&(&grid[i + 1] - &grid[i]));
            let mass = r - slopes[i + 1].0 + carry;
            carry = 0.0;
            if mass < -NEGATIVE_TOLERANCE {
                return Err(Pl1dError::ConcavityViolation { x: to_f64(&grid[i]), mass });
            }
            report.measure.density.push(DensityCell {
                x0: to_f64(&grid[i]),
                x1: to_f64(&grid[i + 1]),
                value: mass / len,
            });
        }
    }
    let last = grid.len() - 1;
    report.measure.total_mass = slopes[0].1 - slopes[last].0;
    Ok(report)
}

/// Interval wide enough that `g` is affine with slopes `±1/2` outside it.
pub fn support_interval(g: &Potential1D) -> (Rational, Rational) {
    let k = &g.tail_point + int(1);
    (-&k, k)
}

/// Exact atoms of `μ_c`: half the slope drop of each side at its breaks.
pub fn cocycle_atoms(f: &PLMap1D) -> Vec<(Rational, Rational)> {
    let mut out: Vec<(Rational, Rational)> = Vec::new();
    for i in 0..2 {
        for (x, drop) in f.side_breaks(i) {
            let m = rat(drop, 2);
            match out.iter_mut().find(|(y, _)| *y == x) {
                Some((_, mass)) => *mass += m,
                None => out.push((x, m)),
            }
        }
    }
    out.sort();
    out
}

pub fn cocycle_measure_atoms(f: &PLMap1D) -> PiecewiseMeasure {
    let atoms: Vec<Atom> =
        cocycle_atoms(f).iter().map(|(x, m)| Atom { x: to_f64(x), mass: to_f64(m) }).collect();
    let total_mass = atoms.iter().map(|a| a.mass).sum();
    PiecewiseMeasure { atoms, density: Vec::new(), total_mass }
}

/// The constant `c_{f,g}` correcting the pullback of `μ_g` at a point where
/// `f` has one-sided slopes `f'ₗ, f'ᵣ` and `g` has `g'ₗ, g'ᵣ` at the image.
pub fn pullback_measure_constant(fl: &Rational, fr: &Rational, gl: &Rational, gr: &Rational) -> Rational {
    let zero = Rational::zero();
    if *fl >= zero && *fr >= zero {
        fl * gl - fr * gr
    } else if *fl >= zero && *fr <= zero {
        (fl - fr) * gl
    } else if *fl <= zero && *fr >= zero {
        (fl - fr) * gr
    } else {
        fl * gr - fr * gl
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monotonicity {
    pub monotonic: bool,
    /// Slopes of `f` on its pieces, left to right.
    pub slopes: Vec<i64>,
    /// Some piece has slope `±n`.
    pub reaches_degree: bool,
}

pub fn monotonicity_check(f: &PLMap1D) -> Monotonicity {
    let breaks = f.breaks();
    let mut slopes = Vec::with_capacity(breaks.len() + 1);
    match breaks.first() {
        None => slopes.push(f.slopes_at(&int(0)).0),
        Some(first) => {
            slopes.push(f.slopes_at(first).0);
            for x in &breaks {
                slopes.push(f.slopes_at(x).1);
            }
        }
    }
    let monotonic = slopes.iter().all(|&s| s >= 0) || slopes.iter().all(|&s| s <= 0);
    let n = f.n as i64;
    let reaches_degree = slopes.iter().any(|s| s.abs() == n);
    Monotonicity { monotonic, slopes, reaches_degree }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AtomAudit {
    pub atoms: Vec<(Rational, f64)>,
    /// Atoms above tolerance away from the break points of `f`.
    pub off_break: Vec<(Rational, f64)>,
    /// Same atoms above tolerance on the grid refined twice.
    pub stable_under_refinement: bool,
}

impl AtomAudit {
    pub fn clean(&self) -> bool {
        self.off_break.is_empty() && self.stable_under_refinement
    }
}

pub fn atom_audit(
    g: &Potential1D,
    interval: (&Rational, &Rational),
    resolution: usize,
    tolerance: f64,
) -> Result<AtomAudit, Pl1dError> {
    let big = |r: &MeasureReport| -> Vec<(Rational, f64)> {
        r.atom_points
            .iter()
            .zip(&r.measure.atoms)
            .filter(|(_, a)| a.mass > tolerance)
            .map(|(x, a)| (x.clone(), a.mass))
            .collect()
    };
    let coarse = big(&measure_from_potential(g, interval, resolution)?);
    let fine = big(&measure_from_potential(g, interval, 2 * resolution)?);
    let breaks = g.map.breaks();
    let off_break = coarse.iter().filter(|(x, _)| !breaks.contains(x)).cloned().collect();
    let same = coarse.len() == fine.len()
        && coarse
            .iter()
            .zip(&fine)
            .all(|((x, m), (y, n))| x == y && (m - n).abs() <= tolerance.max(1e-6 * m.abs()));
    Ok(AtomAudit { atoms: coarse, off_break, stable_under_refinement: same })
}

/// `x,g` rows.
pub fn potential_csv(g: &Potential1D, points: &[Rational]) -> String {
    let rows: Vec<String> = points
        .par_iter()
        .map(|x| format!("{},{}\n", format_sig(to_f64(x)), format_sig(g.evaluate(x))))
        .collect();
    let mut out = String::from("x,g\n");
    out.extend(rows);
    out
}
