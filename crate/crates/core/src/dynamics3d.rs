//! Tropical Vieta involutions, their words, homogeneous lifts to the rank-3
//! bundle over the skeleton, and the section cocycle.

use std::fmt;
use std::str::FromStr;

use num_traits::Signed;
use rayon::prelude::*;
use thiserror::Error;

use crate::geometry::Point;
use crate::rational::{bit_size, int, Rational, Scalar};
use crate::trop::{drop_coordinate, TropError, TropicalPolynomial};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error(transparent)]
    Trop(#[from] TropError),
    #[error("expected a polynomial in {expected} variables, found {found}")]
    WrongDimension { expected: usize, found: usize },
    #[error("form {form} has slope entry {slope}; only -1, 0, 1 are allowed")]
    SlopeOutOfRange { form: usize, slope: i64 },
    #[error("form {0} is the central monomial")]
    CentralForm(usize),
    #[error("no form has slope {side} along axis {axis}; the reflection is undefined")]
    EmptySide { axis: usize, side: i64 },
    #[error("empty automorphism word")]
    EmptyWord,
    #[error("unknown letter `{0}` in automorphism word")]
    BadLetter(char),
    #[error("lifted point is not on E")]
    OffE,
    #[error("cocycle rows differ: {0:?} vs {1:?}")]
    InconsistentCocycle(Vec<Rational>, Vec<Rational>),
    #[error("float orbit drifted off its level by {deviation:e} at step {step}")]
    Drift { step: usize, deviation: f64 },
    #[error("rational size reached {bits} bits at step {step}")]
    BitBound { step: usize, bits: u64 },
}

/// The two side groups of a polynomial along each axis; a polynomial whose
/// every axis has both sides present defines one reflection per axis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reflector {
    dim: usize,
    sides: Vec<(TropicalPolynomial, TropicalPolynomial)>,
}

impl Reflector {
    pub fn new(hcirc: &TropicalPolynomial) -> Result<Self, DynamicsError> {
        let dim = hcirc.dim();
        let mut sides = Vec::with_capacity(dim);
        for axis in 0..dim {
            let g = hcirc.group_by_axis(axis)?;
            let minus = g.minus.as_finite().ok_or(DynamicsError::EmptySide { axis, side: -1 })?;
            let plus = g.plus.as_finite().ok_or(DynamicsError::EmptySide { axis, side: 1 })?;
            sides.push((minus.clone(), plus.clone()));
        }
        Ok(Self { dim, sides })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `(h_{-1}, h_{+1})` along `axis`, in the remaining coordinates.
    pub fn sides(&self, axis: usize) -> (&TropicalPolynomial, &TropicalPolynomial) {
        let (m, p) = &self.sides[axis];
        (m, p)
    }

    /// `x ↦ h_{-1}(rest) - h_{+1}(rest) - x` on the chosen coordinate.
    pub fn reflect<S: Scalar>(&self, axis: usize, p: &[S]) -> Vec<S> {
        let rest = drop_coordinate(p, axis);
        let (minus, plus) = &self.sides[axis];
        let mut out = p.to_vec();
        out[axis] = minus.min_unchecked(&rest) - plus.min_unchecked(&rest) - p[axis].clone();
        out
    }

    /// Midpoint `½(h_{-1} - h_{+1})` of the reflection along `axis`.
    pub fn fixed_value<S: Scalar>(&self, axis: usize, rest: &[S]) -> S {
        let (minus, plus) = &self.sides[axis];
        (minus.min_unchecked(rest) - plus.min_unchecked(rest)).half()
    }
}

/// Validated `h°` and level `c` of a surface in the degree-(2,2,2) family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceSpec {
    hcirc: TropicalPolynomial,
    level: Rational,
    reflector: Reflector,
}

pub(crate) fn validate_unit_slopes(
    hcirc: &TropicalPolynomial,
    dim: usize,
) -> Result<(), DynamicsError> {
    if hcirc.dim() != dim {
        return Err(DynamicsError::WrongDimension { expected: dim, found: hcirc.dim() });
    }
    for (i, f) in hcirc.forms().iter().enumerate() {
        if let Some(&s) = f.slope().iter().find(|s| s.abs() > 1) {
            return Err(DynamicsError::SlopeOutOfRange { form: i, slope: s });
        }
        if f.slope().iter().all(|&s| s == 0) {
            return Err(DynamicsError::CentralForm(i));
        }
    }
    Ok(())
}

impl SurfaceSpec {
    pub fn new(hcirc: TropicalPolynomial, level: Rational) -> Result<Self, DynamicsError> {
        validate_unit_slopes(&hcirc, 3)?;
        let reflector = Reflector::new(&hcirc)?;
        Ok(Self { hcirc, level, reflector })
    }

    pub fn hcirc(&self) -> &TropicalPolynomial {
        &self.hcirc
    }

    pub fn level(&self) -> &Rational {
        &self.level
    }

    pub fn reflector(&self) -> &Reflector {
        &self.reflector
    }

    pub fn with_level(&self, level: Rational) -> Self {
        Self { level, ..self.clone() }
    }

    pub fn h<S: Scalar>(&self, p: &[S]) -> S {
        self.hcirc.min_unchecked(p)
    }

    pub fn on_skeleton(&self, p: &[Rational]) -> bool {
        self.h(p) == self.level
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn letter(self) -> char {
        ['x', 'y', 'z'][self.index()]
    }
}

/// Composition of reflections; `letters[0]` is applied last.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AutomorphismWord {
    letters: Vec<Axis>,
}

impl AutomorphismWord {
    pub fn new(letters: Vec<Axis>) -> Result<Self, DynamicsError> {
        if letters.is_empty() {
            return Err(DynamicsError::EmptyWord);
        }
        Ok(Self { letters })
    }

    pub fn letters(&self) -> &[Axis] {
        &self.letters
    }

    pub fn inverse(&self) -> Self {
        Self { letters: self.letters.iter().rev().copied().collect() }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self { letters: self.letters.iter().chain(&other.letters).copied().collect() }
    }
}

impl FromStr for AutomorphismWord {
    type Err = DynamicsError;

    /// Accepts letters `x`, `y`, `z`, optionally written `σx`, `s_x` or
    /// separated by commas and spaces.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut letters = Vec::new();
        for ch in s.chars() {
            match ch.to_ascii_lowercase() {
                'x' => letters.push(Axis::X),
                'y' => letters.push(Axis::Y),
                'z' => letters.push(Axis::Z),
                ' ' | ',' | '_' | 's' | 'σ' | '∘' => {}
                other => return Err(DynamicsError::BadLetter(other)),
            }
        }
        Self::new(letters)
    }
}

impl fmt::Display for AutomorphismWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in &self.letters {
            write!(f, "{}", a.letter())?;
        }
        Ok(())
    }
}

pub fn vieta_reflection(
    spec: &SurfaceSpec,
    axis: Axis,
    p: &[Rational],
) -> Result<Point, DynamicsError> {
    check_len(p.len(), 3)?;
    Ok(spec.reflector.reflect(axis.index(), p))
}

fn check_len(found: usize, expected: usize) -> Result<(), DynamicsError> {
    if found == expected {
        Ok(())
    } else {
        Err(TropError::DimensionMismatch { expected, found }.into())
    }
}

/// Applies the word right to left.
pub fn apply_word<S: Scalar>(
    spec: &SurfaceSpec,
    word: &AutomorphismWord,
    p: &[S],
) -> Result<Vec<S>, DynamicsError> {
    check_len(p.len(), 3)?;
    let mut q = p.to_vec();
    for a in word.letters.iter().rev() {
        q = spec.reflector.reflect(a.index(), &q);
    }
    Ok(q)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arithmetic {
    Exact,
    Float,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitOptions {
    pub arithmetic: Arithmetic,
    /// Largest allowed numerator-plus-denominator bit length in exact mode.
    pub max_bits: u64,
    /// Continue in floating point instead of failing once `max_bits` is hit.
    pub fallback_to_float: bool,
    pub float_tolerance: f64,
}

impl Default for OrbitOptions {
    fn default() -> Self {
        Self {
            arithmetic: Arithmetic::Exact,
            max_bits: 4096,
            fallback_to_float: true,
            float_tolerance: 1e-9,
        }
    }
}

/// An orbit stored exactly up to `exact.len()` and in floats afterwards.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Orbit {
    pub exact: Vec<Point>,
    pub float: Vec<[f64; 3]>,
}

impl Orbit {
    pub fn len(&self) -> usize {
        self.exact.len() + self.float.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn switched_at(&self) -> Option<usize> {
        (!self.float.is_empty() && !self.exact.is_empty()).then_some(self.exact.len())
    }

    pub fn points_f64(&self) -> Vec<[f64; 3]> {
        self.exact
            .iter()
            .map(|p| [p[0].as_f64(), p[1].as_f64(), p[2].as_f64()])
            .chain(self.float.iter().copied())
            .collect()
    }
}

fn float_point(p: &[Rational]) -> [f64; 3] {
    [p[0].as_f64(), p[1].as_f64(), p[2].as_f64()]
}

/// `N + 1` points `p0, f(p0), …, f^N(p0)`; every point keeps the `h°` value
/// of `p0`.
pub fn orbit(
    spec: &SurfaceSpec,
    word: &AutomorphismWord,
    p0: &[Rational],
    steps: usize,
    opts: &OrbitOptions,
) -> Result<Orbit, DynamicsError> {
    check_len(p0.len(), 3)?;
    let mut out = Orbit::default();
    let mut float_start = None;
    if opts.arithmetic == Arithmetic::Exact {
        let mut p = p0.to_vec();
        out.exact.push(p.clone());
        for step in 1..=steps {
            p = apply_word(spec, word, &p)?;
            let bits = p.iter().map(bit_size).max().unwrap_or(0);
            if bits > opts.max_bits {
                if !opts.fallback_to_float {
                    return Err(DynamicsError::BitBound { step, bits });
                }
                log::warn!("orbit switched to floating point at step {step} ({bits} bits)");
                float_start = Some((step, float_point(&p)));
                break;
            }
            out.exact.push(p.clone());
        }
        if float_start.is_none() {
            return Ok(out);
        }
    } else {
        float_start = Some((0, float_point(p0)));
    }
    let (first, start) = float_start.expect("set above");
    let target = spec.h(&float_point(p0));
    let mut p = start;
    out.float.push(p);
    for step in first + 1..=steps {
        let q = apply_word(spec, word, &p)?;
        p = [q[0], q[1], q[2]];
        let deviation = (spec.h(&p) - target).abs();
        if deviation > opts.float_tolerance {
            return Err(DynamicsError::Drift { step, deviation });
        }
        out.float.push(p);
    }
    Ok(out)
}

/// Orbits of many starting points in parallel, in input order.
pub fn orbits(
    spec: &SurfaceSpec,
    word: &AutomorphismWord,
    starts: &[Point],
    steps: usize,
    opts: &OrbitOptions,
) -> Vec<Result<Orbit, DynamicsError>> {
    starts.par_iter().map(|p| orbit(spec, word, p, steps, opts)).collect()
}

/// Smallest `k ≤ max_period` with `f^k(p) = p`, exactly.
pub fn exact_period(
    spec: &SurfaceSpec,
    word: &AutomorphismWord,
    p: &[Rational],
    max_period: usize,
) -> Result<Option<usize>, DynamicsError> {
    let mut q = p.to_vec();
    for k in 1..=max_period {
        q = apply_word(spec, word, &q)?;
        if q == p {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// A point of `(ℝ²)³` written as a 2×3 matrix: row 0 holds
/// `(X₁, Y₁, Z₁)` and row 1 holds `(X₀, Y₀, Z₀)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftedPoint<S = Rational> {
    pub rows: [[S; 3]; 2],
}

impl<S: Scalar> LiftedPoint<S> {
    pub fn new(rows: [[S; 3]; 2]) -> Self {
        Self { rows }
    }

    /// `(A₀, A₁)` for one coordinate.
    pub fn pair(&self, axis: usize) -> (S, S) {
        (self.rows[1][axis].clone(), self.rows[0][axis].clone())
    }

    /// Adds the column `(1, 1)` times the row `t`.
    pub fn shifted(&self, t: &[S; 3]) -> Self {
        Self {
            rows: std::array::from_fn(|r| {
                std::array::from_fn(|c| self.rows[r][c].clone() + t[c].clone())
            }),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            rows: std::array::from_fn(|r| {
                std::array::from_fn(|c| self.rows[r][c].clone() - other.rows[r][c].clone())
            }),
        }
    }

    pub fn total(&self) -> S {
        self.rows
            .iter()
            .flatten()
            .fold(S::zeroed(), |acc, v| acc + v.clone())
    }
}

/// `σ(p) = [[p/2], [-p/2]]`.
pub fn section<S: Scalar>(p: &[S]) -> LiftedPoint<S> {
    LiftedPoint {
        rows: [
            std::array::from_fn(|c| p[c].half()),
            std::array::from_fn(|c| -p[c].half()),
        ],
    }
}

/// `A₁ - A₀` per coordinate.
pub fn project<S: Scalar>(p: &LiftedPoint<S>) -> Vec<S> {
    (0..3).map(|c| p.rows[0][c].clone() - p.rows[1][c].clone()).collect()
}

/// Degree-2 homogenization of slope `s ∈ {-1, 0, 1}`: `2A₀`, `A₀+A₁`, `2A₁`.
fn p_hom<S: Scalar>(s: i64, a0: &S, a1: &S) -> S {
    match s {
        -1 => a0.clone() + a0.clone(),
        0 => a0.clone() + a1.clone(),
        _ => a1.clone() + a1.clone(),
    }
}

/// Homogenized minimum of a polynomial whose variables are the given pairs.
fn homogeneous_min<S: Scalar>(poly: &TropicalPolynomial, pairs: &[(S, S)]) -> S {
    poly.forms()
        .iter()
        .map(|f| {
            f.slope()
                .iter()
                .zip(pairs)
                .fold(S::form_constant(f), |acc, (&s, (a0, a1))| acc + p_hom(s, a0, a1))
        })
        .reduce(|a, b| if b < a { b } else { a })
        .expect("non-empty")
}

/// `H°` evaluated on a lifted point.
pub fn homogeneous_h<S: Scalar>(spec: &SurfaceSpec, p: &LiftedPoint<S>) -> S {
    let pairs: Vec<(S, S)> = (0..3).map(|c| p.pair(c)).collect();
    homogeneous_min(&spec.hcirc, &pairs)
}

/// Signed defect of the equation of `E`.
pub fn e_defect<S: Scalar>(spec: &SurfaceSpec, p: &LiftedPoint<S>) -> S {
    homogeneous_h(spec, p) - S::from_rational(&spec.level) - p.total()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LiftVariant {
    /// `(H_{X,1} - X₀ : H_{X,-1} - X₁)`, an involution.
    #[default]
    Involutive,
    /// `(X₁ + H_{X,1} : X₀ + H_{X,-1})`, only positive slopes.
    Positive,
}

pub fn homogeneous_lift_reflection<S: Scalar>(
    spec: &SurfaceSpec,
    axis: Axis,
    p: &LiftedPoint<S>,
    variant: LiftVariant,
    tolerance: f64,
) -> Result<LiftedPoint<S>, DynamicsError> {
    if e_defect(spec, p).as_f64().abs() > tolerance {
        return Err(DynamicsError::OffE);
    }
    Ok(lift_reflection_unchecked(spec, axis.index(), p, variant))
}

fn lift_reflection_unchecked<S: Scalar>(
    spec: &SurfaceSpec,
    axis: usize,
    p: &LiftedPoint<S>,
    variant: LiftVariant,
) -> LiftedPoint<S> {
    let rest: Vec<(S, S)> = (0..3).filter(|&c| c != axis).map(|c| p.pair(c)).collect();
    let (minus, plus) = spec.reflector.sides(axis);
    let h_minus = homogeneous_min(minus, &rest);
    let h_plus = homogeneous_min(plus, &rest);
    let (x0, x1) = p.pair(axis);
    let (new_x0, new_x1) = match variant {
        LiftVariant::Involutive => (h_plus - x0, h_minus - x1),
        LiftVariant::Positive => (x1 + h_plus, x0 + h_minus),
    };
    let mut out = p.clone();
    out.rows[1][axis] = new_x0;
    out.rows[0][axis] = new_x1;
    out
}

/// The lift of a word, applied right to left. Points off `E` are rejected
/// beyond `tolerance` (use `0.0` for exact input).
pub fn lift_word<S: Scalar>(
    spec: &SurfaceSpec,
    word: &AutomorphismWord,
    p: &LiftedPoint<S>,
    variant: LiftVariant,
    tolerance: f64,
) -> Result<LiftedPoint<S>, DynamicsError> {
    if e_defect(spec, p).as_f64().abs() > tolerance {
        return Err(DynamicsError::OffE);
    }
    let mut q = p.clone();
    for a in word.letters().iter().rev() {
        q = lift_reflection_unchecked(spec, a.index(), &q, variant);
    }
    Ok(q)
}

/// Row vector `c_F(p)` with `F(σ(p)) - σ(f(p)) = (1,1)ᵀ · c_F(p)`.
pub fn cocycle(
    spec: &SurfaceSpec,
    word: &AutomorphismWord,
    p: &[Rational],
) -> Result<[Rational; 3], DynamicsError> {
    cocycle_with(spec, word, p, LiftVariant::Involutive)
}

pub fn cocycle_with(
    spec: &SurfaceSpec,
    word: &AutomorphismWord,
    p: &[Rational],
    variant: LiftVariant,
) -> Result<[Rational; 3], DynamicsError> {
    check_len(p.len(), 3)?;
    let lifted = lift_word(spec, word, &section(p), variant, 0.0)?;
    let image = apply_word(spec, word, p)?;
    let diff = lifted.sub(&section(&image));
    if diff.rows[0] != diff.rows[1] {
        return Err(DynamicsError::InconsistentCocycle(
            diff.rows[0].to_vec(),
            diff.rows[1].to_vec(),
        ));
    }
    let [row, _] = diff.rows;
    Ok(row)
}

/// Row vector times an integer matrix.
pub fn row_times(t: &[Rational; 3], m: &[[i64; 3]; 3]) -> [Rational; 3] {
    std::array::from_fn(|c| (0..3).fold(int(0), |acc, r| acc + &t[r] * int(m[r][c])))
}

/// `max |h°(p) - c|` over an exact point set, for diagnostics.
pub fn max_level_deviation(spec: &SurfaceSpec, pts: &[Point]) -> Rational {
    pts.iter()
        .map(|p| (spec.h(p) - &spec.level).abs())
        .max()
        .unwrap_or_else(|| int(0))
}
