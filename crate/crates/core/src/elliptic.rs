//! Tropical elliptic curves in the plane: the skeleton cycle with its lattice
//! lengths, the two reflections, rotation numbers and tentacles.

use std::cmp::Ordering;

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::dynamics3d::{validate_unit_slopes, DynamicsError, Reflector};
use crate::geometry::{
    lattice_length, level_set_polytope, max_value, polygon_cycle, GeometryError, Point,
};
use crate::rational::{format_sig, int, rat, to_f64, Display, Rational};
use crate::trop::{lower_envelope_breaks, AffineForm, TropicalPolynomial};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EllipticError {
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("level {} leaves no interior cycle (max h° = {})", Display(.level), Display(.max))]
    NoCycle { level: Rational, max: Rational },
    #[error("point ({}, {}) is not on the cycle", Display(&.0[0]), Display(&.0[1]))]
    OffCycle(Point),
    #[error("displacements disagree: {} at base 0, {} at base {index}", Display(.first), Display(.other))]
    NotRigid { first: Rational, other: Rational, index: usize },
    #[error("no level below the maximum gave a cycle")]
    NoNearMaximalLevel,
}

/// A planar `h°` with unit slopes and a level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveSpec {
    hcirc: TropicalPolynomial,
    level: Rational,
    reflector: Reflector,
}

impl CurveSpec {
    pub fn new(hcirc: TropicalPolynomial, level: Rational) -> Result<Self, EllipticError> {
        validate_unit_slopes(&hcirc, 2)?;
        let reflector = Reflector::new(&hcirc)?;
        Ok(Self { hcirc, level, reflector })
    }

    /// Builds `h°` from the coefficients `c_{i,j}`, indexed by `i,j ∈ {-1,0,1}`.
    pub fn from_coefficients(
        coeffs: impl IntoIterator<Item = ((i64, i64), Rational)>,
        level: Rational,
    ) -> Result<Self, EllipticError> {
        let hcirc = TropicalPolynomial::from_terms(
            coeffs.into_iter().map(|((i, j), c)| (vec![i, j], c)),
        )
        .map_err(DynamicsError::from)?;
        Self::new(hcirc, level)
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

    pub fn h(&self, p: &[Rational]) -> Rational {
        self.hcirc.min_unchecked(p)
    }

    /// `min(h°, c)` with the level as the central coefficient; its break
    /// locus is the whole curve, tentacles included.
    pub fn full_polynomial(&self) -> TropicalPolynomial {
        let mut forms = self.hcirc.forms().to_vec();
        forms.push(AffineForm::new(vec![0, 0], self.level.clone()));
        TropicalPolynomial::new(forms).expect("central form is new")
    }

    pub fn max_h(&self) -> Result<Rational, EllipticError> {
        Ok(max_value(&self.hcirc)?.0)
    }
}

/// The boundary of `{h° ≥ c}`, counterclockwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkeletonCycle {
    pub vertices: Vec<Point>,
    /// `lengths[i]` is the lattice length from vertex `i` to `i + 1`.
    pub lengths: Vec<Rational>,
    pub total: Rational,
}

impl SkeletonCycle {
    fn edge(&self, i: usize) -> (&Point, &Point) {
        (&self.vertices[i], &self.vertices[(i + 1) % self.vertices.len()])
    }

    /// Arc coordinate of each vertex.
    pub fn offsets(&self) -> Vec<Rational> {
        let mut acc = int(0);
        self.lengths
            .iter()
            .map(|l| {
                let here = acc.clone();
                acc += l;
                here
            })
            .collect()
    }
}

pub fn skeleton_cycle(curve: &CurveSpec) -> Result<SkeletonCycle, EllipticError> {
    let no_cycle = |curve: &CurveSpec| -> EllipticError {
        match curve.max_h() {
            Ok(max) => EllipticError::NoCycle { level: curve.level.clone(), max },
            Err(e) => e,
        }
    };
    let poly = match level_set_polytope(&curve.hcirc, &curve.level) {
        Ok(p) => p,
        Err(GeometryError::EmptyLevelSet { .. }) => return Err(no_cycle(curve)),
        Err(e) => return Err(e.into()),
    };
    let order = match polygon_cycle(&poly) {
        Ok(o) => o,
        Err(GeometryError::Degenerate) => return Err(no_cycle(curve)),
        Err(e) => return Err(e.into()),
    };
    let vertices: Vec<Point> = order.iter().map(|&i| poly.vertices[i].clone()).collect();
    let n = vertices.len();
    let lengths = (0..n)
        .map(|i| lattice_length(&vertices[i], &vertices[(i + 1) % n]))
        .collect::<Result<Vec<_>, _>>()?;
    let total = lengths.iter().fold(int(0), |a, l| a + l);
    Ok(SkeletonCycle { vertices, lengths, total })
}

/// `axis` 0 is `σ₁` (moves `e₁`), `axis` 1 is `σ₂`.
pub fn reflection(curve: &CurveSpec, axis: usize, p: &[Rational]) -> Point {
    curve.reflector.reflect(axis, p)
}

/// `σ₁ ∘ σ₂`.
pub fn twist(curve: &CurveSpec, p: &[Rational]) -> Point {
    reflection(curve, 0, &reflection(curve, 1, p))
}

fn cross(a: &[Rational], b: &[Rational]) -> Rational {
    &a[0] * &b[1] - &a[1] * &b[0]
}

fn on_segment(p: &[Rational], a: &[Rational], b: &[Rational]) -> bool {
    let ab = [&b[0] - &a[0], &b[1] - &a[1]];
    let ap = [&p[0] - &a[0], &p[1] - &a[1]];
    if !cross(&ab, &ap).is_zero() {
        return false;
    }
    let dot = &ab[0] * &ap[0] + &ab[1] * &ap[1];
    let len2 = &ab[0] * &ab[0] + &ab[1] * &ab[1];
    !dot.is_negative() && dot <= len2
}

/// Lattice arc length from vertex 0, counterclockwise, in `[0, L)`.
pub fn arc_coordinate(cycle: &SkeletonCycle, p: &[Rational]) -> Result<Rational, EllipticError> {
    let offsets = cycle.offsets();
    for i in 0..cycle.vertices.len() {
        let (a, b) = cycle.edge(i);
        if on_segment(p, a, b) {
            if p == a.as_slice() {
                return Ok(offsets[i].clone());
            }
            let s = &offsets[i] + lattice_length(a, p)?;
            return Ok(if s == cycle.total { int(0) } else { s });
        }
    }
    Err(EllipticError::OffCycle(p.to_vec()))
}

/// Inverse of [`arc_coordinate`], taking `s` modulo `L`.
pub fn point_at_arc(cycle: &SkeletonCycle, s: &Rational) -> Point {
    let mut s = s - (s / &cycle.total).floor() * &cycle.total;
    for i in 0..cycle.vertices.len() {
        let l = &cycle.lengths[i];
        if s < *l {
            let (a, b) = cycle.edge(i);
            let t = &s / l;
            return a.iter().zip(b).map(|(x, y)| x + (y - x) * &t).collect();
        }
        s -= l;
    }
    cycle.vertices[0].clone()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationNumber {
    /// In `[0, 1)`.
    pub rho: Rational,
    pub displacement: Rational,
    pub length: Rational,
}

impl RotationNumber {
    pub fn to_f64(&self) -> f64 {
        to_f64(&self.rho)
    }
}

/// Base points used for the rigidity check: vertex 0 and ten more at
/// arc positions `k·L/11`.
pub fn rotation_base_points(cycle: &SkeletonCycle) -> Vec<Point> {
    (0..11).map(|k| point_at_arc(cycle, &(&cycle.total * rat(k, 11)))).collect()
}

/// Rotation number of `σ₁σ₂` from its arc displacement, which must be the
/// same at every base point.
pub fn rotation_number(curve: &CurveSpec) -> Result<RotationNumber, EllipticError> {
    let cycle = skeleton_cycle(curve)?;
    let displacements = arc_displacements(curve, &cycle, &rotation_base_points(&cycle))?;
    let first = displacements[0].clone();
    if let Some((index, other)) = displacements.iter().enumerate().find(|(_, d)| **d != first) {
        return Err(EllipticError::NotRigid { first, other: other.clone(), index });
    }
    Ok(RotationNumber { rho: &first / &cycle.total, displacement: first, length: cycle.total })
}

/// `arc(σ₁σ₂ p) - arc(p)` modulo `L` for each base point.
pub fn arc_displacements(
    curve: &CurveSpec,
    cycle: &SkeletonCycle,
    points: &[Point],
) -> Result<Vec<Rational>, EllipticError> {
    points
        .iter()
        .map(|p| {
            let before = arc_coordinate(cycle, p)?;
            let after = arc_coordinate(cycle, &twist(curve, p))?;
            let mut d = after - before;
            if d.is_negative() {
                d += &cycle.total;
            }
            Ok(d)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NearMaximal {
    pub level: Rational,
    pub gap: Rational,
    pub rotation: RotationNumber,
    /// `lim ρ` as the level rises to the maximum, in `[0, 1)`, once the
    /// displacement and length have become affine in the gap.
    pub limit: Option<Rational>,
}

fn wrap_unit(x: Rational) -> Rational {
    &x - x.floor()
}

/// Rotation numbers at `max h° - δ` for `δ = 1, 1/2, 1/4, …`. For small `δ`
/// the displacement `D(δ)` and length `L(δ)` are affine in `δ`, so each
/// window of three successive levels gives an exact extrapolation of
/// `D(0)/L(0)` (or `D/L` itself when the cycle shrinks to a point). The
/// limit is accepted once [`LIMIT_WINDOWS`] consecutive windows agree.
pub fn near_maximal_rotation(
    curve: &CurveSpec,
    max_halvings: usize,
) -> Result<NearMaximal, EllipticError> {
    let max = curve.max_h()?;
    let mut delta = int(1);
    let gap = stable_gap(curve.hcirc(), &max);
    while delta >= gap {
        delta /= int(2);
    }
    let mut history: Vec<NearMaximal> = Vec::new();
    let mut agreeing: Vec<Rational> = Vec::new();
    for _ in 0..=max_halvings {
        let level = &max - &delta;
        match rotation_number(&curve.with_level(level.clone())) {
            Ok(rotation) => {
                history.push(NearMaximal { level, gap: delta.clone(), rotation, limit: None });
                let candidate = match &history[history.len().saturating_sub(3)..] {
                    [a, b, c] => extrapolate(a, b, c),
                    _ => None,
                };
                match candidate {
                    Some(l) if agreeing.last().is_none_or(|p| *p == l) => agreeing.push(l),
                    Some(l) => agreeing = vec![l],
                    None => agreeing.clear(),
                }
                if agreeing.len() >= LIMIT_WINDOWS {
                    let mut out = history.pop().expect("just pushed");
                    out.limit = agreeing.pop();
                    return Ok(out);
                }
            }
            Err(EllipticError::NoCycle { .. }) => {}
            Err(e) => return Err(e),
        }
        delta /= int(2);
    }
    history.pop().ok_or(EllipticError::NoNearMaximalLevel)
}

pub const LIMIT_WINDOWS: usize = 3;

/// Distance from `max` to the nearest lower level at which three lines
/// `{form = t}` meet. Above that level the polygon `{h° ≥ t}` keeps its
/// combinatorial type.
pub fn stable_gap(hcirc: &TropicalPolynomial, max: &Rational) -> Rational {
    let forms = hcirc.forms();
    let mut best: Option<Rational> = None;
    for i in 0..forms.len() {
        for j in i + 1..forms.len() {
            for k in j + 1..forms.len() {
                let Some(t) = triple_level([&forms[i], &forms[j], &forms[k]]) else { continue };
                if t < *max {
                    let g = max - t;
                    if best.as_ref().is_none_or(|b| g < *b) {
                        best = Some(g);
                    }
                }
            }
        }
    }
    best.unwrap_or_else(|| int(1))
}

/// The `t` solving `a·p + c = t` for three forms at once, if unique.
fn triple_level(f: [&AffineForm; 3]) -> Option<Rational> {
    let rows: Vec<[Rational; 3]> =
        f.iter().map(|g| [int(g.slope()[0]), int(g.slope()[1]), int(-1)]).collect();
    let rhs: Vec<Rational> = f.iter().map(|g| -g.constant()).collect();
    let det3 = |m: &[[Rational; 3]]| {
        &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1])
            - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
            + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
    };
    let d = det3(&rows);
    if d.is_zero() {
        return None;
    }
    let mut m = rows.clone();
    for (row, r) in m.iter_mut().zip(&rhs) {
        row[2] = r.clone();
    }
    Some(det3(&m) / d)
}

fn extrapolate(a: &NearMaximal, b: &NearMaximal, c: &NearMaximal) -> Option<Rational> {
    if !consecutive_halvings(a, b, c) {
        return None;
    }
    let (d1, d2, d3) = (&a.rotation.displacement, &b.rotation.displacement, &c.rotation.displacement);
    let (l1, l2, l3) = (&a.rotation.length, &b.rotation.length, &c.rotation.length);
    if d1 - d2 != int(2) * (d2 - d3) || l1 - l2 != int(2) * (l2 - l3) {
        return None;
    }
    let l0 = int(2) * l3 - l2;
    Some(if l0.is_zero() { c.rotation.rho.clone() } else { wrap_unit((int(2) * d3 - d2) / l0) })
}

fn consecutive_halvings(a: &NearMaximal, b: &NearMaximal, c: &NearMaximal) -> bool {
    a.gap == int(2) * &b.gap && b.gap == int(2) * &c.gap
}

pub type TwistProfile = Vec<(Rational, Result<RotationNumber, EllipticError>)>;

/// Rotation numbers across the core pencil, one per level.
pub fn twist_profile(curve: &CurveSpec, levels: &[Rational]) -> TwistProfile {
    levels
        .par_iter()
        .map(|c| (c.clone(), rotation_number(&curve.with_level(c.clone()))))
        .collect()
}

/// CSV with header `level,rotation_number`; failed levels get `NaN`.
pub fn twist_profile_csv(profile: &TwistProfile) -> String {
    let mut out = String::from("level,rotation_number\n");
    for (level, r) in profile {
        let rho = match r {
            Ok(r) => format_sig(r.to_f64()),
            Err(_) => "NaN".into(),
        };
        out.push_str(&format!("{},{}\n", format_sig(to_f64(level)), rho));
    }
    out
}

/// Inclusive arithmetic progression `a, a + step, …` up to `b`.
pub fn level_range(a: &Rational, b: &Rational, step: &Rational) -> Vec<Rational> {
    let mut out = Vec::new();
    if step.is_zero() {
        return out;
    }
    let mut x = a.clone();
    let forward = step.is_positive();
    while (forward && x <= *b) || (!forward && x >= *b) {
        out.push(x.clone());
        x += step;
    }
    out
}

/// An unbounded ray of the curve escaping along a coordinate direction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tentacle {
    /// Coordinate that goes to infinity.
    pub axis: usize,
    /// `-1` or `+1`: the sign of the escape.
    pub direction: i64,
    /// Value of the other coordinate along the ray.
    pub offset: Rational,
    pub weight: i64,
}

/// The tentacles: far out along `±e_axis` the forms with `i_axis = ∓1`
/// dominate, and the curve is the break locus of their restriction.
pub fn tentacles(curve: &CurveSpec) -> Vec<Tentacle> {
    let mut out = Vec::new();
    for axis in 0..2 {
        for direction in [-1i64, 1] {
            let side = -direction;
            let lines: Vec<(i64, Rational)> = curve
                .hcirc
                .forms()
                .iter()
                .filter(|f| f.slope()[axis] == side)
                .map(|f| (f.slope()[1 - axis], f.constant().clone()))
                .collect();
            for (offset, weight) in lower_envelope_breaks(&lines) {
                out.push(Tentacle { axis, direction, offset, weight });
            }
        }
    }
    out.sort_by(|a, b| {
        (a.axis, a.direction).cmp(&(b.axis, b.direction)).then_with(|| a.offset.cmp(&b.offset))
    });
    out
}

/// Orders rotation numbers for reporting, treating them as points of the
/// circle `[0, 1)`.
pub fn circle_distance(a: &Rational, b: &Rational) -> Rational {
    let d = (a - b).abs();
    let d = &d - d.floor();
    let other = int(1) - &d;
    match d.cmp(&other) {
        Ordering::Greater => other,
        _ => d,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::TropicalCurve;
    use crate::presets;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pt(x: Rational, y: Rational) -> Point {
        vec![x, y]
    }

    fn square() -> CurveSpec {
        CurveSpec::from_coefficients(
            [((-1, 0), int(0)), ((1, 0), int(0)), ((0, -1), int(0)), ((0, 1), int(0))],
            int(-1),
        )
        .unwrap()
    }

    fn diamond() -> CurveSpec {
        CurveSpec::from_coefficients(
            [((1, 1), int(0)), ((1, -1), int(0)), ((-1, 1), int(0)), ((-1, -1), int(0))],
            int(-1),
        )
        .unwrap()
    }

    #[test]
    fn square_cycle() {
        let c = skeleton_cycle(&square()).unwrap();
        assert_eq!(c.vertices.len(), 4);
        assert!(c.lengths.iter().all(|l| *l == int(2)));
        assert_eq!(c.total, int(8));
        for v in &c.vertices {
            assert!(v.iter().all(|x| x.abs() == int(1)));
        }
    }

    #[test]
    fn diamond_cycle() {
        let c = skeleton_cycle(&diamond()).unwrap();
        assert_eq!(c.vertices.len(), 4);
        assert_eq!(c.total, int(4));
        assert!(c.vertices.contains(&pt(int(1), int(0))));
        assert!(c.vertices.contains(&pt(int(0), int(-1))));
    }

    #[test]
    fn generic_polygon_has_at_most_eight_edges() {
        for seed in 0..10 {
            let c = skeleton_cycle(&presets::random_curve(seed, &int(2))).unwrap();
            assert!((3..=8).contains(&c.vertices.len()));
            assert_eq!(c.total, c.lengths.iter().fold(int(0), |a, l| a + l));
        }
    }

    #[test]
    fn cycle_errors_above_max() {
        let err = skeleton_cycle(&square().with_level(int(1))).unwrap_err();
        assert!(matches!(err, EllipticError::NoCycle { .. }));
        let err = skeleton_cycle(&square().with_level(int(0))).unwrap_err();
        assert!(matches!(err, EllipticError::NoCycle { .. }));
    }

    #[test]
    fn rejects_bad_slopes() {
        assert!(CurveSpec::from_coefficients([((2, 0), int(0)), ((-1, 0), int(0))], int(0)).is_err());
        assert!(CurveSpec::from_coefficients([((1, 0), int(0)), ((0, 1), int(0))], int(0)).is_err());
    }

    #[test]
    fn reflections_are_involutions_and_preserve_h() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for seed in 0..5 {
            let curve = presets::random_curve(seed, &int(2));
            for _ in 0..50 {
                let p = pt(rat(rng.random_range(-300..300), 64), rat(rng.random_range(-300..300), 64));
                for axis in 0..2 {
                    let q = reflection(&curve, axis, &p);
                    assert_eq!(reflection(&curve, axis, &q), p);
                    assert_eq!(curve.h(&q), curve.h(&p));
                    // midpoint lies on the fixed line
                    let rest = vec![p[1 - axis].clone()];
                    let mid = (&p[axis] + &q[axis]) / int(2);
                    assert_eq!(mid, curve.reflector().fixed_value(axis, &rest));
                }
            }
        }
    }

    #[test]
    fn reflections_preserve_lattice_length_on_edges() {
        for seed in 0..5 {
            let curve = presets::random_curve(seed, &int(2));
            let cycle = skeleton_cycle(&curve).unwrap();
            for i in 0..cycle.vertices.len() {
                let (a, b) = cycle.edge(i);
                let p: Point = a.iter().zip(b).map(|(x, y)| x + (y - x) * rat(1, 3)).collect();
                let q: Point = a.iter().zip(b).map(|(x, y)| x + (y - x) * rat(2, 5)).collect();
                for axis in 0..2 {
                    let (pp, qq) = (reflection(&curve, axis, &p), reflection(&curve, axis, &q));
                    let same_edge = (0..cycle.vertices.len()).any(|j| {
                        let (c, d) = cycle.edge(j);
                        on_segment(&pp, c, d) && on_segment(&qq, c, d)
                    });
                    if same_edge {
                        assert_eq!(lattice_length(&pp, &qq).unwrap(), lattice_length(&p, &q).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn arc_coordinates() {
        let c = skeleton_cycle(&square()).unwrap();
        assert_eq!(arc_coordinate(&c, &c.vertices[0]).unwrap(), int(0));
        let (a, b) = c.edge(0);
        let mid: Point = a.iter().zip(b).map(|(x, y)| (x + y) / int(2)).collect();
        assert_eq!(arc_coordinate(&c, &mid).unwrap(), &c.lengths[0] / int(2));
        let sum: Rational = (0..4)
            .map(|i| {
                let (a, b) = c.edge(i);
                let end = if i == 3 { c.total.clone() } else { arc_coordinate(&c, b).unwrap() };
                end - arc_coordinate(&c, a).unwrap()
            })
            .fold(int(0), |x, y| x + y);
        assert_eq!(sum, c.total);
        assert!(matches!(arc_coordinate(&c, &pt(int(0), int(0))), Err(EllipticError::OffCycle(_))));
        for k in 0..16 {
            let s = rat(k, 2);
            assert_eq!(arc_coordinate(&c, &point_at_arc(&c, &s)).unwrap(), &s - (&s / int(8)).floor() * int(8));
        }
    }

    #[test]
    fn rotation_is_rigid_on_random_curves() {
        for seed in 0..5 {
            let curve = presets::random_curve(seed, &int(2));
            let r = rotation_number(&curve).unwrap();
            assert!(!r.rho.is_negative() && r.rho < int(1));
            // iterating the twist moves every base point by the same arc
            let cycle = skeleton_cycle(&curve).unwrap();
            let p = point_at_arc(&cycle, &rat(1, 7));
            let k = 5;
            let mut q = p.clone();
            for _ in 0..k {
                q = twist(&curve, &q);
            }
            let moved = arc_coordinate(&cycle, &q).unwrap();
            let expect = arc_coordinate(&cycle, &p).unwrap() + &r.displacement * int(k);
            assert_eq!(moved, &expect - (&expect / &cycle.total).floor() * &cycle.total);
        }
    }

    #[test]
    fn symmetric_square_has_order_two() {
        let r = rotation_number(&square()).unwrap();
        assert!(r.rho == int(0) || r.rho == rat(1, 2));
        let near = near_maximal_rotation(&presets::symmetric_curve(), 20).unwrap();
        let limit = near.limit.unwrap();
        assert!(limit == int(0) || limit == rat(1, 2));
    }

    /// `min(x, y, -x-y)` near its maximum: `σ₁σ₂(x, y) = (y, -x-y)` has
    /// order three.
    #[test]
    fn triangle_peak_has_order_three() {
        let curve = CurveSpec::from_coefficients(
            [
                ((1, 0), int(0)),
                ((0, 1), int(0)),
                ((-1, -1), int(0)),
                ((-1, 0), int(3)),
                ((0, -1), int(3)),
                ((1, 1), int(3)),
            ],
            int(-1),
        )
        .unwrap();
        assert_eq!(twist(&curve, &pt(rat(1, 5), rat(1, 7))), pt(rat(1, 7), rat(-12, 35)));
        let near = near_maximal_rotation(&curve, 20).unwrap();
        assert_eq!(near.limit, Some(rat(2, 3)));
    }

    #[test]
    fn twist_profile_is_deterministic_and_covers_the_pencil() {
        let curve = presets::random_curve(3, &int(2));
        let max = curve.max_h().unwrap();
        let levels = level_range(&(&max - int(6)), &(&max - rat(1, 4)), &rat(1, 4));
        let a = twist_profile(&curve, &levels);
        let b = twist_profile(&curve, &levels);
        assert_eq!(a, b);
        assert!(a.iter().all(|(_, r)| r.is_ok()));
        let csv = twist_profile_csv(&a);
        assert!(csv.starts_with("level,rotation_number\n"));
        assert_eq!(csv.lines().count(), levels.len() + 1);
    }

    #[test]
    fn tentacles_match_the_curve_rays() {
        for seed in 0..5 {
            let curve = presets::random_curve(seed, &int(2));
            let tent = tentacles(&curve);
            let weight: i64 = tent.iter().map(|t| t.weight).sum();
            assert_eq!(weight, 8);
            let tc = TropicalCurve::from_polynomial(&curve.full_polynomial()).unwrap();
            let mut rays: Vec<Tentacle> = tc
                .edges
                .iter()
                .filter(|e| e.is_ray())
                .map(|e| {
                    let axis = e.direction.iter().position(|&d| d != 0).unwrap();
                    let direction = e.direction[axis].signum();
                    let sign = if e.hi.is_none() { direction } else { -direction };
                    Tentacle { axis, direction: sign, offset: e.base[1 - axis].clone(), weight: e.weight }
                })
                .collect();
            rays.sort_by(|a, b| {
                (a.axis, a.direction).cmp(&(b.axis, b.direction)).then_with(|| a.offset.cmp(&b.offset))
            });
            assert_eq!(rays, tent);
        }
    }

    #[test]
    fn generic_tentacle_offsets() {
        let coeffs: Vec<((i64, i64), Rational)> = vec![
            ((1, -1), int(3)),
            ((1, 0), int(0)),
            ((1, 1), int(-2)),
            ((-1, -1), int(0)),
            ((-1, 0), int(0)),
            ((-1, 1), int(0)),
            ((0, 1), int(0)),
            ((0, -1), int(0)),
        ];
        let curve = CurveSpec::from_coefficients(coeffs, int(-5)).unwrap();
        let left: Vec<Rational> = tentacles(&curve)
            .into_iter()
            .filter(|t| t.axis == 0 && t.direction == -1)
            .map(|t| t.offset)
            .collect();
        // c_{1,-1} - c_{1,0} and c_{1,0} - c_{1,1}
        assert_eq!(left, vec![int(2), int(3)]);
    }
}
