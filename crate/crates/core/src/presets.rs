//! Named surfaces, curves and maps, plus seeded random generators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dynamics3d::SurfaceSpec;
use crate::elliptic::CurveSpec;
use crate::geometry::max_value;
use crate::pl1d::{MapTerm, PLMap1D};
use crate::rational::{int, rat, Rational};
use crate::trop::TropicalPolynomial;

/// `min(-x+y+z, x-y+z, x+y-z, -x-y-z)`.
pub fn kummer_hcirc() -> TropicalPolynomial {
    TropicalPolynomial::from_terms([
        (vec![-1, 1, 1], int(0)),
        (vec![1, -1, 1], int(0)),
        (vec![1, 1, -1], int(0)),
        (vec![-1, -1, -1], int(0)),
    ])
    .expect("valid preset")
}

/// The tetrahedron `{h° = -1}`.
pub fn kummer_surface() -> SurfaceSpec {
    SurfaceSpec::new(kummer_hcirc(), int(-1)).expect("valid preset")
}

/// `min(-|x|, -|y|, -|z|, -(x+y+z)+1)` written as seven forms.
pub fn rubik_hcirc() -> TropicalPolynomial {
    let mut terms = Vec::new();
    for axis in 0..3 {
        for s in [-1, 1] {
            let mut slope = vec![0; 3];
            slope[axis] = s;
            terms.push((slope, int(0)));
        }
    }
    terms.push((vec![-1, -1, -1], int(1)));
    TropicalPolynomial::from_terms(terms).expect("valid preset")
}

/// The Rubik surface at level `-s`: a cube for `s ≤ 1/2`, a cube with a
/// corner chopped off for `1/2 < s ≤ 1`.
pub fn rubik_surface(s: &Rational) -> SurfaceSpec {
    SurfaceSpec::new(rubik_hcirc(), -s).expect("valid preset")
}

pub const RUBIK_DEFAULT_S: (i64, i64) = (1, 4);

/// `f(x) = -2|x| + 1/2` as a degree-4 homogeneous map.
pub fn tent_map() -> PLMap1D {
    PLMap1D::new(
        4,
        vec![MapTerm::new(2, 2, int(0))],
        vec![MapTerm::new(4, 0, rat(1, 2)), MapTerm::new(0, 4, rat(1, 2))],
    )
    .expect("valid preset")
}

/// Uniform on the grid `k/64` inside `[-range, range]`.
pub fn random_coefficient<R: Rng>(rng: &mut R, range: &Rational) -> Rational {
    let bound = (range * int(64)).floor().to_integer();
    let bound: i64 = bound.try_into().unwrap_or(i64::MAX / 2);
    rat(rng.random_range(-bound..=bound), 64)
}

/// Every one of the 26 non-central monomials with a random coefficient; the
/// level sits one unit below the maximum of `h°`.
pub fn random_surface(seed: u64, range: &Rational) -> SurfaceSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut terms = Vec::new();
    for i in -1..=1 {
        for j in -1..=1 {
            for k in -1..=1 {
                if (i, j, k) != (0, 0, 0) {
                    terms.push((vec![i, j, k], random_coefficient(&mut rng, range)));
                }
            }
        }
    }
    let hcirc = TropicalPolynomial::from_terms(terms).expect("distinct slopes");
    let (max, _) = max_value(&hcirc).expect("full support is bounded");
    SurfaceSpec::new(hcirc, max - int(1)).expect("unit slopes")
}

/// The eight non-central monomials with random coefficients, level one unit
/// below the maximum.
pub fn random_curve(seed: u64, range: &Rational) -> CurveSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut terms = Vec::new();
    for i in -1..=1 {
        for j in -1..=1 {
            if (i, j) != (0, 0) {
                terms.push((vec![i, j], random_coefficient(&mut rng, range)));
            }
        }
    }
    let hcirc = TropicalPolynomial::from_terms(terms).expect("distinct slopes");
    let (max, _) = max_value(&hcirc).expect("full support is bounded");
    CurveSpec::new(hcirc, max - int(1)).expect("unit slopes")
}

/// All eight outer coefficients zero, level `-1`.
pub fn symmetric_curve() -> CurveSpec {
    let terms = (-1..=1)
        .flat_map(|i| (-1..=1).map(move |j| (i, j)))
        .filter(|&(i, j)| (i, j) != (0, 0))
        .map(|(i, j)| (vec![i, j], int(0)));
    CurveSpec::new(TropicalPolynomial::from_terms(terms).expect("distinct"), int(-1))
        .expect("unit slopes")
}

/// A random valid map of degree `2..=4`: each side gets one to three terms
/// with distinct slopes, and the extremes `b = 0` and `b = n` both occur.
pub fn random_pl_map(seed: u64) -> PLMap1D {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let n: u32 = rng.random_range(2..=4);
        let mut sides: [Vec<MapTerm>; 2] = [Vec::new(), Vec::new()];
        for side in sides.iter_mut() {
            let count = rng.random_range(1..=3);
            let mut used = Vec::new();
            for _ in 0..count {
                let b = rng.random_range(0..=n);
                if used.contains(&b) {
                    continue;
                }
                used.push(b);
                side.push(MapTerm::new(n - b, b, rat(rng.random_range(-64..=64), 32)));
            }
        }
        let [f0, f1] = sides;
        if let Ok(map) = PLMap1D::new(n, f0, f1) {
            return map;
        }
    }
}
