//! Min-plus polynomials: finite minima of affine forms with integer slopes
//! and rational constants.

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::rational::{int, to_f64, Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TropError {
    #[error("a tropical polynomial needs at least one form")]
    Empty,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("form {0} is listed twice")]
    DuplicateForm(usize),
    #[error("axis {axis} out of range for dimension {dim}")]
    AxisOutOfRange { axis: usize, dim: usize },
    #[error("form {form} has slope {slope} along axis {axis}; only -1, 0, 1 can be grouped")]
    AxisSlopeOutOfRange { form: usize, axis: usize, slope: i64 },
    #[error("segment endpoints coincide")]
    DegenerateSegment,
}

/// `p ↦ slope · p + constant`.
#[derive(Debug, Clone)]
pub struct AffineForm {
    slope: Vec<i64>,
    constant: Rational,
    constant_f64: f64,
}

impl PartialEq for AffineForm {
    fn eq(&self, other: &Self) -> bool {
        self.slope == other.slope && self.constant == other.constant
    }
}

impl Eq for AffineForm {}

impl AffineForm {
    pub fn new(slope: Vec<i64>, constant: Rational) -> Self {
        let constant_f64 = to_f64(&constant);
        Self { slope, constant, constant_f64 }
    }

    pub fn slope(&self) -> &[i64] {
        &self.slope
    }

    pub fn constant(&self) -> &Rational {
        &self.constant
    }

    pub fn constant_f64(&self) -> f64 {
        self.constant_f64
    }

    pub fn dim(&self) -> usize {
        self.slope.len()
    }

    pub fn value_with<S: Scalar>(&self, point: &[S]) -> S {
        let mut acc = S::form_constant(self);
        for (s, x) in self.slope.iter().zip(point) {
            if *s != 0 {
                acc = acc + x.times(*s);
            }
        }
        acc
    }

    pub fn value(&self, point: &[Rational]) -> Rational {
        self.value_with(point)
    }
}

/// Pointwise minimum of finitely many affine forms. Monomials with
/// coefficient `+∞` are simply absent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TropicalPolynomial {
    dim: usize,
    forms: Vec<AffineForm>,
}

impl TropicalPolynomial {
    pub fn new(forms: Vec<AffineForm>) -> Result<Self, TropError> {
        let dim = forms.first().ok_or(TropError::Empty)?.dim();
        for (i, form) in forms.iter().enumerate() {
            if form.dim() != dim {
                return Err(TropError::DimensionMismatch { expected: dim, found: form.dim() });
            }
            if forms[..i].contains(form) {
                return Err(TropError::DuplicateForm(i));
            }
        }
        Ok(Self { dim, forms })
    }

    /// Convenience constructor from `(slope, constant)` pairs.
    pub fn from_terms<I>(terms: I) -> Result<Self, TropError>
    where
        I: IntoIterator<Item = (Vec<i64>, Rational)>,
    {
        Self::new(terms.into_iter().map(|(s, c)| AffineForm::new(s, c)).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn forms(&self) -> &[AffineForm] {
        &self.forms
    }

    fn check_dim(&self, found: usize) -> Result<(), TropError> {
        if found == self.dim {
            Ok(())
        } else {
            Err(TropError::DimensionMismatch { expected: self.dim, found })
        }
    }

    /// Minimum over all forms, in whichever scalar type the point uses.
    pub fn evaluate_with<S: Scalar>(&self, point: &[S]) -> Result<S, TropError> {
        self.check_dim(point.len())?;
        Ok(self.min_unchecked(point))
    }

    pub(crate) fn min_unchecked<S: Scalar>(&self, point: &[S]) -> S {
        let mut forms = self.forms.iter();
        let mut best = forms.next().expect("non-empty").value_with(point);
        for form in forms {
            let v = form.value_with(point);
            if v < best {
                best = v;
            }
        }
        best
    }

    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational, TropError> {
        self.evaluate_with(point)
    }

    /// Every form index attaining the minimum, in ascending order.
    pub fn active_forms(&self, point: &[Rational]) -> Result<Vec<usize>, TropError> {
        self.check_dim(point.len())?;
        let values: Vec<Rational> = self.forms.iter().map(|f| f.value(point)).collect();
        let min = values.iter().min().expect("non-empty");
        Ok(values
            .iter()
            .enumerate()
            .filter(|(_, v)| *v == min)
            .map(|(i, _)| i)
            .collect())
    }

    /// Splits the forms by their slope along `axis` (which must be -1, 0
    /// or 1) and drops that coordinate, so that
    /// `poly = min(-x + minus, zero, x + plus)`.
    pub fn group_by_axis(&self, axis: usize) -> Result<AxisGroups, TropError> {
        if axis >= self.dim {
            return Err(TropError::AxisOutOfRange { axis, dim: self.dim });
        }
        let mut buckets: [Vec<AffineForm>; 3] = Default::default();
        for (i, form) in self.forms.iter().enumerate() {
            let s = form.slope[axis];
            if !(-1..=1).contains(&s) {
                return Err(TropError::AxisSlopeOutOfRange { form: i, axis, slope: s });
            }
            let mut slope = form.slope.clone();
            slope.remove(axis);
            buckets[(s + 1) as usize].push(AffineForm::new(slope, form.constant.clone()));
        }
        let [minus, zero, plus] = buckets.map(|forms| {
            if forms.is_empty() {
                GroupPolynomial::Infinite
            } else {
                GroupPolynomial::Finite(TropicalPolynomial { dim: self.dim - 1, forms })
            }
        });
        Ok(AxisGroups { axis, minus, zero, plus })
    }

    /// Restricts to `t ↦ p + t (q - p)` on `[0, 1]` and returns the exact
    /// concave piecewise-linear function of `t`.
    pub fn restrict_to_segment(
        &self,
        p: &[Rational],
        q: &[Rational],
    ) -> Result<SegmentRestriction, TropError> {
        self.check_dim(p.len())?;
        self.check_dim(q.len())?;
        if p == q {
            return Err(TropError::DegenerateSegment);
        }
        let dir: Vec<Rational> = q.iter().zip(p).map(|(a, b)| a - b).collect();
        // each form becomes the line a t + b
        let lines: Vec<(Rational, Rational)> = self
            .forms
            .iter()
            .map(|f| {
                let a = f
                    .slope
                    .iter()
                    .zip(&dir)
                    .fold(Rational::zero(), |acc, (s, d)| acc + d * int(*s));
                (a, f.value(p))
            })
            .collect();

        let start = (0..lines.len())
            .min_by(|&i, &j| lines[i].1.cmp(&lines[j].1).then(lines[i].0.cmp(&lines[j].0)))
            .expect("non-empty");
        let mut current = start;
        let mut t = Rational::zero();
        let mut breaks = Vec::new();
        let mut slopes = vec![lines[current].0.clone()];
        let mut pieces = vec![current];
        let one = Rational::from_integer(1.into());
        loop {
            let (ac, bc) = &lines[current];
            let mut next: Option<(Rational, usize)> = None;
            for (j, (aj, bj)) in lines.iter().enumerate() {
                if aj >= ac {
                    continue;
                }
                let tj = (bj - bc) / (ac - aj);
                if tj < t {
                    continue;
                }
                let better = match &next {
                    None => true,
                    Some((tn, k)) => tj < *tn || (tj == *tn && *aj < lines[*k].0),
                };
                if better {
                    next = Some((tj, j));
                }
            }
            match next {
                Some((tn, j)) if tn < one => {
                    breaks.push(tn.clone());
                    t = tn;
                    current = j;
                    slopes.push(lines[current].0.clone());
                    pieces.push(current);
                }
                _ => break,
            }
        }
        let value_at = |s: &Rational| -> Rational {
            lines
                .iter()
                .map(|(a, b)| a * s + b)
                .min()
                .expect("non-empty")
        };
        let mut values = vec![value_at(&Rational::zero())];
        values.extend(breaks.iter().map(value_at));
        values.push(value_at(&one));
        Ok(SegmentRestriction { breaks, slopes, values, pieces })
    }
}

/// A grouped sub-polynomial; an empty group is the `+∞` polynomial, which
/// never attains a minimum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupPolynomial {
    Infinite,
    Finite(TropicalPolynomial),
}

impl GroupPolynomial {
    /// `None` stands for `+∞`.
    pub fn evaluate_with<S: Scalar>(&self, point: &[S]) -> Result<Option<S>, TropError> {
        match self {
            GroupPolynomial::Infinite => Ok(None),
            GroupPolynomial::Finite(p) => p.evaluate_with(point).map(Some),
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, GroupPolynomial::Infinite)
    }

    pub fn as_finite(&self) -> Option<&TropicalPolynomial> {
        match self {
            GroupPolynomial::Infinite => None,
            GroupPolynomial::Finite(p) => Some(p),
        }
    }
}

/// `poly = min(-x + minus(rest), zero(rest), x + plus(rest))` along `axis`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxisGroups {
    pub axis: usize,
    pub minus: GroupPolynomial,
    pub zero: GroupPolynomial,
    pub plus: GroupPolynomial,
}

impl AxisGroups {
    /// Evaluates the regrouped expression at a full point.
    pub fn reconstruct<S: Scalar>(&self, point: &[S]) -> Result<S, TropError> {
        if self.axis >= point.len() {
            return Err(TropError::AxisOutOfRange { axis: self.axis, dim: point.len() });
        }
        let x = point[self.axis].clone();
        let rest = drop_coordinate(point, self.axis);
        let candidates = [
            self.minus.evaluate_with(&rest)?.map(|v| v - x.clone()),
            self.zero.evaluate_with(&rest)?,
            self.plus.evaluate_with(&rest)?.map(|v| v + x.clone()),
        ];
        candidates
            .into_iter()
            .flatten()
            .reduce(|a, b| if b < a { b } else { a })
            .ok_or(TropError::Empty)
    }
}

pub(crate) fn drop_coordinate<S: Clone>(point: &[S], axis: usize) -> Vec<S> {
    point
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != axis)
        .map(|(_, v)| v.clone())
        .collect()
}

/// Exact restriction of a min-plus polynomial to a segment, parametrized by
/// `t ∈ [0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentRestriction {
    /// Interior kinks, strictly increasing in `(0, 1)`.
    pub breaks: Vec<Rational>,
    /// Slope in `t` on each piece; one more entry than `breaks`.
    pub slopes: Vec<Rational>,
    /// Values at `0`, each break, and `1`.
    pub values: Vec<Rational>,
    /// Index of a form active on each piece.
    pub pieces: Vec<usize>,
}

impl SegmentRestriction {
    pub fn is_concave(&self) -> bool {
        self.slopes.windows(2).all(|w| w[0] > w[1])
    }

    /// Value at parameter `t ∈ [0, 1]` by linear interpolation of the pieces.
    pub fn value_at(&self, t: &Rational) -> Rational {
        let idx = self.breaks.iter().take_while(|b| *b <= t).count();
        let (t0, v0) = if idx == 0 {
            (Rational::zero(), &self.values[0])
        } else {
            (self.breaks[idx - 1].clone(), &self.values[idx])
        };
        v0 + &self.slopes[idx] * (t - t0)
    }

    pub fn max_abs_slope(&self) -> Rational {
        self.slopes.iter().map(|s| s.abs()).max().unwrap_or_else(Rational::zero)
    }
}

/// Break points of a one-variable min of lines `(slope, constant)`, with the
/// slope drop at each.
pub fn lower_envelope_breaks(lines: &[(i64, Rational)]) -> Vec<(Rational, i64)> {
    let value = |x: &Rational| lines.iter().map(|(s, c)| c + int(*s) * x).min();
    let mut out: Vec<(Rational, i64)> = Vec::new();
    for (a, (sa, ca)) in lines.iter().enumerate() {
        for (sb, cb) in &lines[a + 1..] {
            if sa == sb {
                continue;
            }
            let x = (cb - ca) / int(sa - sb);
            let Some(m) = value(&x) else { continue };
            if ca + int(*sa) * &x != m || out.iter().any(|(y, _)| *y == x) {
                continue;
            }
            let active: Vec<i64> =
                lines.iter().filter(|(s, c)| c + int(*s) * &x == m).map(|(s, _)| *s).collect();
            let drop = active.iter().max().unwrap() - active.iter().min().unwrap();
            out.push((x, drop));
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use crate::rational::rat;
    use proptest::prelude::*;

    fn abs_poly() -> TropicalPolynomial {
        TropicalPolynomial::from_terms([(vec![1], int(0)), (vec![-1], int(0))]).unwrap()
    }

    #[test]
    fn single_form_is_constant() {
        let p = TropicalPolynomial::from_terms([(vec![0, 0], int(5))]).unwrap();
        assert_eq!(p.evaluate(&[rat(3, 7), int(-9)]).unwrap(), int(5));
        assert_eq!(p.active_forms(&[int(1), int(2)]).unwrap(), vec![0]);
    }

    #[test]
    fn rubik_at_origin_is_zero() {
        let h = presets::rubik_hcirc();
        // direct min over the seven forms: 0,0,0,0,0,0,1
        assert_eq!(h.evaluate(&[int(0), int(0), int(0)]).unwrap(), int(0));
    }

    #[test]
    fn tent_numerator_at_origin() {
        // F1 = min(4 X0 + 1/2, 4 X1 + 1/2)
        let f1 = TropicalPolynomial::from_terms([(vec![4, 0], rat(1, 2)), (vec![0, 4], rat(1, 2))])
            .unwrap();
        assert_eq!(f1.evaluate(&[int(0), int(0)]).unwrap(), rat(1, 2));
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let p = abs_poly();
        assert_eq!(
            p.evaluate(&[int(0), int(0)]),
            Err(TropError::DimensionMismatch { expected: 1, found: 2 })
        );
        assert!(p.active_forms(&[]).is_err());
    }

    #[test]
    fn construction_errors() {
        assert_eq!(TropicalPolynomial::new(vec![]), Err(TropError::Empty));
        assert_eq!(
            TropicalPolynomial::from_terms([(vec![1], int(0)), (vec![1], int(0))]),
            Err(TropError::DuplicateForm(1))
        );
        assert!(matches!(
            TropicalPolynomial::from_terms([(vec![1], int(0)), (vec![1, 0], int(0))]),
            Err(TropError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn ties_are_reported_in_full() {
        assert_eq!(abs_poly().active_forms(&[int(0)]).unwrap(), vec![0, 1]);
    }

    #[test]
    fn kummer_active_set_at_unit_x() {
        let h = presets::kummer_hcirc();
        // forms (-x+y+z, x-y+z, x+y-z, -x-y-z) evaluate to (-1, 1, 1, -1)
        assert_eq!(h.active_forms(&[int(1), int(0), int(0)]).unwrap(), vec![0, 3]);
    }

    #[test]
    fn kummer_grouped_by_x() {
        let g = presets::kummer_hcirc().group_by_axis(0).unwrap();
        let expect_minus =
            TropicalPolynomial::from_terms([(vec![1, 1], int(0)), (vec![-1, -1], int(0))]).unwrap();
        let expect_plus =
            TropicalPolynomial::from_terms([(vec![-1, 1], int(0)), (vec![1, -1], int(0))]).unwrap();
        assert_eq!(g.minus, GroupPolynomial::Finite(expect_minus));
        assert!(g.zero.is_infinite());
        assert_eq!(g.plus, GroupPolynomial::Finite(expect_plus));
    }

    #[test]
    fn axis_slope_zero_lands_in_middle_group() {
        let p = TropicalPolynomial::from_terms([(vec![0, 1], int(2))]).unwrap();
        let g = p.group_by_axis(0).unwrap();
        assert!(g.minus.is_infinite() && g.plus.is_infinite());
        assert!(!g.zero.is_infinite());
    }

    #[test]
    fn grouping_rejects_steep_slopes() {
        let p = TropicalPolynomial::from_terms([(vec![2, 0], int(0))]).unwrap();
        assert_eq!(
            p.group_by_axis(0),
            Err(TropError::AxisSlopeOutOfRange { form: 0, axis: 0, slope: 2 })
        );
        assert!(matches!(p.group_by_axis(2), Err(TropError::AxisOutOfRange { .. })));
    }

    #[test]
    fn constant_restriction_has_no_breaks() {
        let p = TropicalPolynomial::from_terms([(vec![0], int(3))]).unwrap();
        let r = p.restrict_to_segment(&[int(-1)], &[int(1)]).unwrap();
        assert!(r.breaks.is_empty());
        assert_eq!(r.slopes, vec![int(0)]);
        assert_eq!(r.values, vec![int(3), int(3)]);
    }

    #[test]
    fn abs_restriction_breaks_at_half() {
        let r = abs_poly().restrict_to_segment(&[int(-1)], &[int(1)]).unwrap();
        assert_eq!(r.breaks, vec![rat(1, 2)]);
        assert_eq!(r.slopes, vec![int(2), int(-2)]);
        assert_eq!(r.values, vec![int(-1), int(0), int(-1)]);
    }

    #[test]
    fn restriction_rejects_equal_endpoints() {
        assert_eq!(
            abs_poly().restrict_to_segment(&[int(0)], &[int(0)]),
            Err(TropError::DegenerateSegment)
        );
    }

    #[test]
    fn restriction_with_kink_at_start() {
        let r = abs_poly().restrict_to_segment(&[int(0)], &[int(1)]).unwrap();
        assert!(r.breaks.is_empty());
        assert_eq!(r.slopes, vec![int(-1)]);
    }

    /// Dense sampling oracle: the active set is constant on the open pieces
    /// and changes only at the reported breaks.
    #[test]
    fn rubik_restriction_matches_sampling() {
        let h = presets::rubik_hcirc();
        let p = [int(-1), int(0), int(0)];
        let q = [int(1), int(0), int(0)];
        let r = h.restrict_to_segment(&p, &q).unwrap();
        let samples = 10_000i64;
        let mut sampled_breaks = Vec::new();
        let mut prev: Option<Vec<usize>> = None;
        for k in 0..=samples {
            let t = rat(k, samples);
            let pt: Vec<Rational> = p.iter().zip(&q).map(|(a, b)| a + (b - a) * &t).collect();
            assert_eq!(r.value_at(&t), h.evaluate(&pt).unwrap());
            let act = h.active_forms(&pt).unwrap();
            if let Some(prev) = &prev {
                if *prev != act && act.len() > prev.len() {
                    sampled_breaks.push(t.clone());
                }
            }
            prev = Some(act);
        }
        assert_eq!(r.breaks, sampled_breaks);
        assert_eq!(r.breaks, vec![rat(1, 2)]);
        assert!(r.is_concave());
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-64i64..=64, 1i64..=16).prop_map(|(n, d)| rat(n, d))
    }

    fn random_poly(dim: usize) -> impl Strategy<Value = TropicalPolynomial> {
        prop::collection::vec((prop::collection::vec(-2i64..=2, dim), small_rational()), 1..8)
            .prop_map(|terms| {
                let mut forms: Vec<AffineForm> = Vec::new();
                for (s, c) in terms {
                    let f = AffineForm::new(s, c);
                    if !forms.contains(&f) {
                        forms.push(f);
                    }
                }
                TropicalPolynomial::new(forms).unwrap()
            })
    }

    fn unit_poly(dim: usize) -> impl Strategy<Value = TropicalPolynomial> {
        prop::collection::vec((prop::collection::vec(-1i64..=1, dim), small_rational()), 1..12)
            .prop_map(|terms| {
                let mut forms: Vec<AffineForm> = Vec::new();
                for (s, c) in terms {
                    let f = AffineForm::new(s, c);
                    if !forms.contains(&f) {
                        forms.push(f);
                    }
                }
                TropicalPolynomial::new(forms).unwrap()
            })
    }

    proptest! {
        #[test]
        fn concave_at_midpoints(
            poly in random_poly(3),
            p in prop::collection::vec(small_rational(), 3),
            q in prop::collection::vec(small_rational(), 3),
        ) {
            let mid: Vec<Rational> = p.iter().zip(&q).map(|(a, b)| (a + b) / int(2)).collect();
            let lhs = poly.evaluate(&mid).unwrap();
            let rhs = (poly.evaluate(&p).unwrap() + poly.evaluate(&q).unwrap()) / int(2);
            prop_assert!(lhs >= rhs);
        }

        #[test]
        fn min_consistency(poly in random_poly(2), p in prop::collection::vec(small_rational(), 2)) {
            let v = poly.evaluate(&p).unwrap();
            let values: Vec<Rational> = poly.forms().iter().map(|f| f.value(&p)).collect();
            prop_assert_eq!(&v, values.iter().min().unwrap());
            let act = poly.active_forms(&p).unwrap();
            prop_assert!(!act.is_empty());
            for (i, val) in values.iter().enumerate() {
                prop_assert_eq!(act.contains(&i), *val == v);
            }
            let vf = poly.evaluate_with(&[to_f64(&p[0]), to_f64(&p[1])]).unwrap();
            prop_assert!((vf - to_f64(&v)).abs() < 1e-9);
        }

        #[test]
        fn grouping_round_trip(
            poly in unit_poly(3),
            axis in 0usize..3,
            pts in prop::collection::vec(prop::collection::vec(small_rational(), 3), 100),
        ) {
            let groups = poly.group_by_axis(axis).unwrap();
            for p in &pts {
                prop_assert_eq!(groups.reconstruct(p).unwrap(), poly.evaluate(p).unwrap());
            }
        }

        #[test]
        fn restriction_agrees_pointwise(
            poly in random_poly(2),
            p in prop::collection::vec(small_rational(), 2),
            q in prop::collection::vec(small_rational(), 2),
        ) {
            prop_assume!(p != q);
            let r = poly.restrict_to_segment(&p, &q).unwrap();
            prop_assert!(r.is_concave());
            prop_assert_eq!(r.slopes.len(), r.breaks.len() + 1);
            for k in 0..=40i64 {
                let t = rat(k, 40);
                let pt: Vec<Rational> = p.iter().zip(&q).map(|(a, b)| a + (b - a) * &t).collect();
                prop_assert_eq!(r.value_at(&t), poly.evaluate(&pt).unwrap());
            }
            for b in &r.breaks {
                let pt: Vec<Rational> = p.iter().zip(&q).map(|(a, c)| a + (c - a) * b).collect();
                prop_assert!(poly.active_forms(&pt).unwrap().len() >= 2);
            }
        }
    }
    #[test]
    fn envelope_breaks() {
        let lines = vec![(-1, int(0)), (0, int(-1)), (1, int(0))];
        assert_eq!(lower_envelope_breaks(&lines), vec![(int(-1), 1), (int(1), 1)]);
        let lines = vec![(-1, int(0)), (0, int(5)), (1, int(0))];
        assert_eq!(lower_envelope_breaks(&lines), vec![(int(0), 2)]);
    }
}
