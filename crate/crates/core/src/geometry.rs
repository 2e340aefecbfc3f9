//! Level-set polytopes of concave min-plus polynomials, their boundary
//! complexes, lattice lengths and planar tropical curves.

use std::cmp::Ordering;
use std::fmt::Write as _;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::rational::{format_sig, int, to_f64, Rational};
use crate::trop::TropicalPolynomial;

pub type Point = Vec<Rational>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("halfspace normal is zero")]
    ZeroNormal,
    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("level {level} is above the maximum {max} of h°; the level set is empty")]
    EmptyLevelSet { level: Rational, max: Rational },
    #[error("no vertices: the halfspaces do not cut out a pointed region")]
    NoVertices,
    #[error("the region is unbounded")]
    Unbounded,
    #[error("the polytope is degenerate (lower-dimensional)")]
    Degenerate,
    #[error("zero-length segment has no lattice length")]
    ZeroSegment,
    #[error("integer overflow in a direction vector")]
    Overflow,
}

/// `{p : normal · p + offset ≥ 0}` with a primitive integer normal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Halfspace {
    normal: Vec<i64>,
    offset: Rational,
}

impl Halfspace {
    pub fn new(normal: Vec<i64>, offset: Rational) -> Result<Self, GeometryError> {
        let g = normal.iter().fold(0i64, |g, &n| g.gcd(&n));
        if g == 0 {
            return Err(GeometryError::ZeroNormal);
        }
        Ok(Self {
            normal: normal.iter().map(|n| n / g).collect(),
            offset: offset / int(g),
        })
    }

    pub fn normal(&self) -> &[i64] {
        &self.normal
    }

    pub fn offset(&self) -> &Rational {
        &self.offset
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    pub fn value(&self, p: &[Rational]) -> Rational {
        dot_int(&self.normal, p) + &self.offset
    }

    pub fn contains(&self, p: &[Rational]) -> bool {
        !self.value(p).is_negative()
    }

    pub fn is_tight(&self, p: &[Rational]) -> bool {
        self.value(p).is_zero()
    }
}

fn dot_int(a: &[i64], p: &[Rational]) -> Rational {
    a.iter()
        .zip(p)
        .filter(|(s, _)| **s != 0)
        .fold(Rational::zero(), |acc, (s, x)| acc + x * int(*s))
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

fn sub(a: &[Rational], b: &[Rational]) -> Point {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn cross3(a: &[Rational], b: &[Rational]) -> Point {
    vec![
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

/// Solves the square system `rows · x = rhs`; `None` when singular.
pub(crate) fn solve(rows: &[Vec<Rational>], rhs: &[Rational]) -> Option<Point> {
    let n = rows.len();
    let mut m: Vec<Vec<Rational>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut row = r.clone();
            row.push(b.clone());
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        let inv = Rational::one() / &m[col][col];
        for k in col..=n {
            m[col][k] = &m[col][k] * &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for k in col..=n {
                    let v = &m[col][k] * &factor;
                    m[r][k] -= v;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

/// Rank of a rational matrix.
pub(crate) fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..m.len() {
            if !m[i][c].is_zero() {
                let f = &m[i][c] / &m[r][c];
                for k in c..cols {
                    let v = &m[r][k] * &f;
                    m[i][k] -= v;
                }
            }
        }
        r += 1;
    }
    r
}

/// A nonzero vector spanning the kernel of a `(d-1) × d` matrix of rank
/// `d-1`.
fn kernel_vector(rows: &[Vec<Rational>], d: usize) -> Option<Point> {
    for free in 0..d {
        let mut sys: Vec<Vec<Rational>> = rows.to_vec();
        let mut unit = vec![Rational::zero(); d];
        unit[free] = Rational::one();
        sys.push(unit);
        let mut rhs = vec![Rational::zero(); d];
        rhs[d - 1] = Rational::one();
        if let Some(x) = solve(&sys, &rhs) {
            return Some(x);
        }
    }
    None
}

/// True when `{u : n_i · u ≥ 0 for all i}` is just the origin.
pub fn recession_cone_is_trivial(normals: &[Vec<Rational>]) -> bool {
    let Some(d) = normals.first().map(|n| n.len()) else {
        return false;
    };
    if rank(normals) < d {
        return false;
    }
    let feasible = |u: &Point| normals.iter().all(|n| !dot(n, u).is_negative());
    let candidates: Vec<Point> = if d == 1 {
        vec![vec![Rational::one()]]
    } else {
        normals
            .iter()
            .combinations(d - 1)
            .filter_map(|rows| {
                let rows: Vec<Vec<Rational>> = rows.into_iter().cloned().collect();
                if rank(&rows) < d - 1 {
                    None
                } else {
                    kernel_vector(&rows, d)
                }
            })
            .collect()
    };
    !candidates.iter().any(|u| {
        let neg: Point = u.iter().map(|x| -x).collect();
        feasible(u) || feasible(&neg)
    })
}

fn normals_of(halfspaces: &[Halfspace]) -> Vec<Vec<Rational>> {
    halfspaces
        .iter()
        .map(|h| h.normal.iter().map(|&n| int(n)).collect())
        .collect()
}

/// Every point where `d` independent boundary hyperplanes meet and all
/// halfspaces hold, sorted lexicographically and without repeats.
pub fn enumerate_vertices(halfspaces: &[Halfspace]) -> Result<Vec<Point>, GeometryError> {
    let d = halfspaces.first().ok_or(GeometryError::NoVertices)?.dim();
    if let Some(h) = halfspaces.iter().find(|h| h.dim() != d) {
        return Err(GeometryError::DimensionMismatch { expected: d, found: h.dim() });
    }
    let normals = normals_of(halfspaces);
    let tuples: Vec<Vec<usize>> = (0..halfspaces.len()).combinations(d).collect();
    let mut vertices: Vec<Point> = tuples
        .par_iter()
        .filter_map(|idx| {
            let rows: Vec<Vec<Rational>> = idx.iter().map(|&i| normals[i].clone()).collect();
            let rhs: Vec<Rational> = idx.iter().map(|&i| -halfspaces[i].offset.clone()).collect();
            let p = solve(&rows, &rhs)?;
            halfspaces.iter().all(|h| h.contains(&p)).then_some(p)
        })
        .collect();
    vertices.sort();
    vertices.dedup();
    if vertices.is_empty() {
        return Err(GeometryError::NoVertices);
    }
    Ok(vertices)
}

/// Maximum of a min-plus polynomial, attained at a vertex of its hypograph.
/// Errors when the super-level sets are unbounded.
pub fn max_value(poly: &TropicalPolynomial) -> Result<(Rational, Point), GeometryError> {
    let d = poly.dim();
    let normals: Vec<Vec<Rational>> = poly
        .forms()
        .iter()
        .map(|f| f.slope().iter().map(|&s| int(s)).collect())
        .collect();
    if !recession_cone_is_trivial(&normals) {
        return Err(GeometryError::Unbounded);
    }
    // t ≤ s·p + c for every form, in coordinates (p, t)
    let hyp: Vec<Halfspace> = poly
        .forms()
        .iter()
        .map(|f| {
            let mut n = f.slope().to_vec();
            n.push(-1);
            Halfspace { normal: n, offset: f.constant().clone() }
        })
        .collect();
    let verts = enumerate_vertices(&hyp)?;
    let best = verts
        .into_iter()
        .max_by(|a, b| a[d].cmp(&b[d]).then_with(|| b.cmp(a)))
        .ok_or(GeometryError::NoVertices)?;
    Ok((best[d].clone(), best[..d].to_vec()))
}

/// Convex region `{h° ≥ c}` with vertex/halfspace incidence.
#[derive(Debug, Clone)]
pub struct ConvexPolytope {
    pub dim: usize,
    pub halfspaces: Vec<Halfspace>,
    /// Form of `h°` behind each halfspace.
    pub forms: Vec<usize>,
    pub vertices: Vec<Point>,
    /// For each vertex, the halfspaces tight at it.
    pub incidence: Vec<Vec<usize>>,
    pub bounded: bool,
    /// Set when the level equals the maximum and the region has collapsed.
    pub degenerate: bool,
}

impl ConvexPolytope {
    pub fn contains(&self, p: &[Rational]) -> bool {
        self.halfspaces.iter().all(|h| h.contains(p))
    }

    /// Vertices on the boundary of halfspace `h`, in no particular order.
    pub fn vertices_on(&self, h: usize) -> Vec<usize> {
        (0..self.vertices.len()).filter(|&v| self.incidence[v].contains(&h)).collect()
    }

    /// Affine dimension of the vertex set.
    pub fn affine_dim(&self) -> usize {
        match self.vertices.split_first() {
            None => 0,
            Some((v0, rest)) => {
                let rows: Vec<Vec<Rational>> = rest.iter().map(|v| sub(v, v0)).collect();
                if rows.is_empty() {
                    0
                } else {
                    rank(&rows)
                }
            }
        }
    }
}

/// The super-level set `{hcirc ≥ c}`, whose boundary is `{hcirc = c}`.
pub fn level_set_polytope(
    hcirc: &TropicalPolynomial,
    c: &Rational,
) -> Result<ConvexPolytope, GeometryError> {
    let dim = hcirc.dim();
    if !(2..=3).contains(&dim) {
        return Err(GeometryError::UnsupportedDimension(dim));
    }
    let mut halfspaces = Vec::new();
    let mut forms = Vec::new();
    for (i, f) in hcirc.forms().iter().enumerate() {
        let h = Halfspace::new(f.slope().to_vec(), f.constant() - c)?;
        if !halfspaces.contains(&h) {
            halfspaces.push(h);
            forms.push(i);
        }
    }
    let bounded = recession_cone_is_trivial(&normals_of(&halfspaces));
    let mut degenerate = false;
    if bounded {
        let (max, _) = max_value(hcirc)?;
        match c.cmp(&max) {
            Ordering::Greater => {
                return Err(GeometryError::EmptyLevelSet { level: c.clone(), max });
            }
            Ordering::Equal => degenerate = true,
            Ordering::Less => {}
        }
    }
    let vertices = enumerate_vertices(&halfspaces)?;
    let incidence = vertices
        .iter()
        .map(|v| (0..halfspaces.len()).filter(|&h| halfspaces[h].is_tight(v)).collect())
        .collect();
    Ok(ConvexPolytope { dim, halfspaces, forms, vertices, incidence, bounded, degenerate })
}

/// Orders points of a convex polygon counterclockwise. In 3D the polygon
/// lies in a plane and `normal` says which side it is viewed from.
fn sort_ccw(points: &[Point], idx: &mut [usize], normal: Option<&[Rational]>) {
    if idx.len() < 3 {
        return;
    }
    let d = points[idx[0]].len();
    let n = Rational::from_integer(BigInt::from(idx.len() as i64));
    let centroid: Point = (0..d)
        .map(|k| idx.iter().fold(Rational::zero(), |acc, &i| acc + &points[i][k]) / &n)
        .collect();
    let orient = |a: &Point, b: &Point| -> Rational {
        match normal {
            None => &a[0] * &b[1] - &a[1] * &b[0],
            Some(nrm) => dot(nrm, &cross3(a, b)),
        }
    };
    let r = sub(&points[idx[0]], &centroid);
    let half = |a: &Point| -> u8 {
        let c = orient(&r, a);
        if c.is_positive() || (c.is_zero() && dot(&r, a).is_positive()) {
            0
        } else {
            1
        }
    };
    idx.sort_by(|&i, &j| {
        let a = sub(&points[i], &centroid);
        let b = sub(&points[j], &centroid);
        half(&a).cmp(&half(&b)).then_with(|| {
            let o = orient(&a, &b);
            if o.is_positive() {
                Ordering::Less
            } else if o.is_negative() {
                Ordering::Greater
            } else {
                Ordering::Equal
            }
        })
    });
}

/// Vertex indices of a 2D polytope in counterclockwise order.
pub fn polygon_cycle(poly: &ConvexPolytope) -> Result<Vec<usize>, GeometryError> {
    if poly.dim != 2 {
        return Err(GeometryError::UnsupportedDimension(poly.dim));
    }
    if !poly.bounded {
        return Err(GeometryError::Unbounded);
    }
    if poly.degenerate || poly.affine_dim() < 2 {
        return Err(GeometryError::Degenerate);
    }
    let mut idx: Vec<usize> = (0..poly.vertices.len()).collect();
    sort_ccw(&poly.vertices, &mut idx, None);
    Ok(idx)
}

/// Writes `v = t·u` with `u` a primitive integer vector and `t > 0`.
pub fn primitive_direction(v: &[Rational]) -> Result<(Vec<i64>, Rational), GeometryError> {
    let lcm = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let scaled: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let g = scaled.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return Err(GeometryError::ZeroSegment);
    }
    let u = scaled
        .iter()
        .map(|x| (x / &g).to_i64().ok_or(GeometryError::Overflow))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((u, Rational::new(g, lcm)))
}

/// Length of `[p, q]` in the integral affine structure: a primitive integer
/// vector has length one.
pub fn lattice_length(p: &[Rational], q: &[Rational]) -> Result<Rational, GeometryError> {
    if p.len() != q.len() {
        return Err(GeometryError::DimensionMismatch { expected: p.len(), found: q.len() });
    }
    primitive_direction(&sub(q, p)).map(|(_, t)| t)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeshEdge {
    pub a: usize,
    pub b: usize,
    /// Primitive integer vector from `a` towards `b`.
    pub direction: Vec<i64>,
    pub lattice_length: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeshFace {
    /// Counterclockwise seen from outside.
    pub vertices: Vec<usize>,
    /// Outward primitive normal.
    pub normal: Vec<i64>,
    /// Form of `h°` active on the face interior.
    pub form: usize,
}

/// Boundary complex of a bounded 3D level set.
#[derive(Debug, Clone)]
pub struct SkeletonMesh {
    pub vertices: Vec<Point>,
    pub edges: Vec<MeshEdge>,
    pub faces: Vec<MeshFace>,
}

impl SkeletonMesh {
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    /// OBJ text: `v` lines then 1-indexed `f` lines.
    pub fn to_obj(&self) -> String {
        let mut out = String::new();
        for v in &self.vertices {
            let coords: Vec<String> = v.iter().map(|x| format_sig(to_f64(x))).collect();
            let _ = writeln!(out, "v {}", coords.join(" "));
        }
        for f in &self.faces {
            let idx: Vec<String> = f.vertices.iter().map(|i| (i + 1).to_string()).collect();
            let _ = writeln!(out, "f {}", idx.join(" "));
        }
        out
    }

    /// Random rational points on the boundary: a uniformly chosen face and
    /// random positive weights on its vertices.
    pub fn random_points<R: Rng>(&self, n: usize, rng: &mut R) -> Vec<Point> {
        (0..n)
            .map(|_| {
                let face = &self.faces[rng.random_range(0..self.faces.len())];
                let weights: Vec<i64> = face.vertices.iter().map(|_| rng.random_range(1..=64)).collect();
                let total = int(weights.iter().sum());
                (0..3)
                    .map(|c| {
                        face.vertices
                            .iter()
                            .zip(&weights)
                            .fold(Rational::zero(), |acc, (&v, &w)| acc + &self.vertices[v][c] * int(w))
                            / &total
                    })
                    .collect()
            })
            .collect()
    }

    /// `kind,i,x,y,z` rows for vertices then `edge,a,b` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("kind,a,b,x,y,z\n");
        for (i, v) in self.vertices.iter().enumerate() {
            let c: Vec<String> = v.iter().map(|x| format_sig(to_f64(x))).collect();
            let _ = writeln!(out, "vertex,{i},,{}", c.join(","));
        }
        for e in &self.edges {
            let _ = writeln!(out, "edge,{},{},,,", e.a, e.b);
        }
        out
    }
}

pub fn skeleton_mesh(poly: &ConvexPolytope) -> Result<SkeletonMesh, GeometryError> {
    if poly.dim != 3 {
        return Err(GeometryError::UnsupportedDimension(poly.dim));
    }
    if !poly.bounded {
        return Err(GeometryError::Unbounded);
    }
    if poly.degenerate || poly.affine_dim() < 3 {
        return Err(GeometryError::Degenerate);
    }
    let mut faces = Vec::new();
    for (h, half) in poly.halfspaces.iter().enumerate() {
        let mut idx = poly.vertices_on(h);
        if idx.len() < 3 {
            continue;
        }
        let base = &poly.vertices[idx[0]];
        let span: Vec<Vec<Rational>> = idx[1..].iter().map(|&i| sub(&poly.vertices[i], base)).collect();
        if rank(&span) < 2 {
            continue;
        }
        let outward: Vec<i64> = half.normal.iter().map(|n| -n).collect();
        let outward_q: Point = outward.iter().map(|&n| int(n)).collect();
        sort_ccw(&poly.vertices, &mut idx, Some(&outward_q));
        faces.push(MeshFace { vertices: idx, normal: outward, form: poly.forms[h] });
    }
    let mut edges: Vec<MeshEdge> = Vec::new();
    for f in &faces {
        for (&a, &b) in f.vertices.iter().circular_tuple_windows() {
            let (a, b) = (a.min(b), a.max(b));
            if edges.iter().any(|e| e.a == a && e.b == b) {
                continue;
            }
            let (direction, lattice_length) =
                primitive_direction(&sub(&poly.vertices[b], &poly.vertices[a]))?;
            edges.push(MeshEdge { a, b, direction, lattice_length });
        }
    }
    edges.sort_by_key(|e| (e.a, e.b));
    Ok(SkeletonMesh { vertices: poly.vertices.clone(), edges, faces })
}

/// One edge of a planar tropical curve: `base + t·direction` for `t` in
/// `[lo, hi]`, where a missing bound means the edge runs off to infinity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveEdge {
    pub base: Point,
    pub direction: Vec<i64>,
    pub lo: Option<Rational>,
    pub hi: Option<Rational>,
    pub weight: i64,
    pub active: Vec<usize>,
}

impl CurveEdge {
    pub fn point_at(&self, t: &Rational) -> Point {
        self.base
            .iter()
            .zip(&self.direction)
            .map(|(b, &d)| b + t * int(d))
            .collect()
    }

    pub fn is_ray(&self) -> bool {
        self.lo.is_some() != self.hi.is_some()
    }

    /// Endpoints with the primitive direction pointing into the edge.
    fn ends(&self) -> Vec<(Point, Vec<i64>)> {
        let mut out = Vec::new();
        if let Some(lo) = &self.lo {
            out.push((self.point_at(lo), self.direction.clone()));
        }
        if let Some(hi) = &self.hi {
            out.push((self.point_at(hi), self.direction.iter().map(|d| -d).collect()));
        }
        out
    }
}

/// Break locus of a planar min-plus polynomial, with edge weights.
#[derive(Debug, Clone)]
pub struct TropicalCurve {
    pub edges: Vec<CurveEdge>,
}

impl TropicalCurve {
    pub fn from_polynomial(poly: &TropicalPolynomial) -> Result<Self, GeometryError> {
        if poly.dim() != 2 {
            return Err(GeometryError::UnsupportedDimension(poly.dim()));
        }
        let forms = poly.forms();
        let slope = |i: usize| -> Point { forms[i].slope().iter().map(|&s| int(s)).collect() };
        let mut edges: Vec<CurveEdge> = Vec::new();
        for (i, j) in (0..forms.len()).tuple_combinations() {
            let diff = sub(&slope(i), &slope(j));
            if diff.iter().all(|x| x.is_zero()) {
                continue;
            }
            let dc = forms[i].constant() - forms[j].constant();
            let (direction, _) = primitive_direction(&[-diff[1].clone(), diff[0].clone()])?;
            let base = if !diff[0].is_zero() {
                vec![-&dc / &diff[0], Rational::zero()]
            } else {
                vec![Rational::zero(), -&dc / &diff[1]]
            };
            let dir_q: Point = direction.iter().map(|&d| int(d)).collect();
            let mut lo: Option<Rational> = None;
            let mut hi: Option<Rational> = None;
            let mut active = vec![i, j];
            let mut empty = false;
            for k in 0..forms.len() {
                if k == i || k == j {
                    continue;
                }
                let dk = sub(&slope(k), &slope(i));
                let alpha = dot(&dk, &dir_q);
                let beta = dot(&dk, &base) + forms[k].constant() - forms[i].constant();
                if alpha.is_zero() {
                    if beta.is_negative() {
                        empty = true;
                        break;
                    }
                    if beta.is_zero() {
                        active.push(k);
                    }
                } else {
                    let t = -&beta / &alpha;
                    if alpha.is_positive() {
                        if lo.as_ref().is_none_or(|l| t > *l) {
                            lo = Some(t);
                        }
                    } else if hi.as_ref().is_none_or(|h| t < *h) {
                        hi = Some(t);
                    }
                }
            }
            if empty {
                continue;
            }
            if let (Some(l), Some(h)) = (&lo, &hi) {
                if l >= h {
                    continue;
                }
            }
            active.sort_unstable();
            if edges.iter().any(|e| e.active == active) {
                continue;
            }
            let weight = active
                .iter()
                .tuple_combinations()
                .map(|(&a, &b)| {
                    primitive_direction(&sub(&slope(a), &slope(b)))
                        .map(|(_, t)| t.to_integer().to_i64().unwrap_or(i64::MAX))
                        .unwrap_or(0)
                })
                .max()
                .unwrap_or(1);
            edges.push(CurveEdge { base, direction, lo, hi, weight, active });
        }
        Ok(Self { edges })
    }

    /// Distinct finite endpoints.
    pub fn vertices(&self) -> Vec<Point> {
        let mut v: Vec<Point> = self.edges.iter().flat_map(|e| e.ends()).map(|(p, _)| p).collect();
        v.sort();
        v.dedup();
        v
    }

    /// Weighted sum of outgoing primitive directions at each vertex.
    pub fn balancing_defects(&self) -> Vec<(Point, Vec<i64>)> {
        self.vertices()
            .into_iter()
            .map(|v| {
                let mut sum = vec![0i64; 2];
                for e in &self.edges {
                    for (p, d) in e.ends() {
                        if p == v {
                            sum[0] += e.weight * d[0];
                            sum[1] += e.weight * d[1];
                        }
                    }
                }
                (v, sum)
            })
            .collect()
    }
}

/// True iff the weighted outgoing directions sum to zero at every vertex.
pub fn check_balancing(curve: &TropicalCurve) -> bool {
    curve.balancing_defects().iter().all(|(_, s)| s.iter().all(|&x| x == 0))
}
