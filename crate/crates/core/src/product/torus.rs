//! SL2(Z) orbits on the torus, the level-n orbit O_n, invariant subspaces of
//! T^4 and the varodot action.

use crate::error::{Error, Result};
use crate::geom::Mat2;
use crate::scalar::{Rational, Scalar};
use num::{BigInt, Integer, One, Signed, Zero};
use std::collections::BTreeSet;

/// Point on T^2 with exact coordinates reduced mod 1.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct TorusPoint {
    pub x: Scalar,
    pub y: Scalar,
}

impl TorusPoint {
    pub fn new(x: Scalar, y: Scalar) -> TorusPoint {
        TorusPoint {
            x: x.rem_euclid(&Scalar::one()),
            y: y.rem_euclid(&Scalar::one()),
        }
    }
}

impl std::fmt::Display for TorusPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

#[derive(Clone, Debug)]
pub enum OrbitClass {
    /// rational point of exact level n with its full SL2(Z) orbit
    FiniteOrbit { n: BigInt, points: Vec<TorusPoint> },
    /// any irrational coordinate gives a dense orbit
    Dense,
}

/// Classify the SL2(Z) orbit closure of a torus point: finite orbit O_n for
/// rational points of level n, dense otherwise.
pub fn torus_orbit_classify(p: &TorusPoint) -> OrbitClass {
    let (rx, ry) = match (p.x.to_rational(), p.y.to_rational()) {
        (Some(a), Some(b)) => (a, b),
        _ => return OrbitClass::Dense,
    };
    // joint level: lcm of denominators
    let n = rx.denom().lcm(ry.denom());
    let points = enumerate_orbit(&rx, &ry, &n);
    OrbitClass::FiniteOrbit { n, points }
}

/// Brute-force closure of (a/n, b/n) under the two SL2(Z) generators.
fn enumerate_orbit(rx: &Rational, ry: &Rational, n: &BigInt) -> Vec<TorusPoint> {
    let a0 = (rx * Rational::from_integer(n.clone())).to_integer().mod_floor(n);
    let b0 = (ry * Rational::from_integer(n.clone())).to_integer().mod_floor(n);
    let mut seen: BTreeSet<(BigInt, BigInt)> = BTreeSet::new();
    let mut stack = vec![(a0, b0)];
    while let Some((a, b)) = stack.pop() {
        if !seen.insert((a.clone(), b.clone())) {
            continue;
        }
        // S: (a, b) -> (-b, a); T: (a, b) -> (a + b, b); T^-1
        let cands = [
            ((-b.clone()).mod_floor(n), a.clone()),
            ((a.clone() + b.clone()).mod_floor(n), b.clone()),
            ((a.clone() - b.clone()).mod_floor(n), b.clone()),
        ];
        for c in cands {
            if !seen.contains(&c) {
                stack.push(c);
            }
        }
    }
    seen.into_iter()
        .map(|(a, b)| {
            TorusPoint::new(
                Scalar::from_rational(Rational::new(a, n.clone())),
                Scalar::from_rational(Rational::new(b, n.clone())),
            )
        })
        .collect()
}

/// The orbit O_n = SL2(Z) . [1/n, 0]: all (a/n, b/n) with gcd(a, b, n) = 1.
pub fn orbit_o_n(n: u64) -> Vec<TorusPoint> {
    let nb = BigInt::from(n);
    enumerate_orbit(
        &Rational::new(BigInt::one(), nb.clone()),
        &Rational::zero(),
        &nb,
    )
}

/// |O_n| by the multiplicative formula n^2 prod (1 - p^-2); used as an
/// independent oracle against the brute-force enumeration.
pub fn orbit_o_n_size_formula(n: u64) -> u64 {
    if n == 1 {
        return 1;
    }
    let mut size = n * n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            size = size / (p * p) * (p * p - 1);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        size = size / (m * m) * (m * m - 1);
    }
    size
}

/// Exact covering radius of a finite point set on T^2 in the sup metric.
/// The maximum of the distance function is attained on the half-grid of the
/// points' common denominator.
pub fn covering_radius(points: &[TorusPoint]) -> Rational {
    assert!(!points.is_empty());
    // common denominator
    let mut den = BigInt::one();
    for p in points {
        den = den.lcm(p.x.to_rational().expect("rational orbit").denom());
        den = den.lcm(p.y.to_rational().expect("rational orbit").denom());
    }
    let half = &den * BigInt::from(2);
    let pts: Vec<(BigInt, BigInt)> = points
        .iter()
        .map(|p| {
            (
                (p.x.to_rational().unwrap() * Rational::from_integer(half.clone())).to_integer(),
                (p.y.to_rational().unwrap() * Rational::from_integer(half.clone())).to_integer(),
            )
        })
        .collect();
    // candidates: half-grid points (i/2den, j/2den); distances scaled by 2den
    let hi: i64 = {
        let s = half.to_string();
        s.parse().expect("grid size fits i64")
    };
    let wrap = |d: i64| -> i64 {
        let m = d.rem_euclid(2 * hi);
        m.min(2 * hi - m)
    };
    let ipts: Vec<(i64, i64)> = pts
        .iter()
        .map(|(a, b)| {
            (
                a.to_string().parse::<i64>().unwrap(),
                b.to_string().parse::<i64>().unwrap(),
            )
        })
        .collect();
    let mut best_max = 0i64;
    for i in 0..2 * hi {
        for j in 0..2 * hi {
            let mut dmin = i64::MAX;
            for (a, b) in &ipts {
                let d = wrap(i - a).max(wrap(j - b));
                if d < dmin {
                    dmin = d;
                }
                if dmin <= best_max {
                    break;
                }
            }
            if dmin > best_max && dmin != i64::MAX {
                best_max = dmin;
            }
        }
    }
    Rational::new(BigInt::from(best_max), half)
}

/// Covering radius of O_n.
pub fn orbit_covering_radius(n: u64) -> Rational {
    covering_radius(&orbit_o_n(n))
}

/// The varodot action A (.) (z_h, z_v) = (a z_h + b z_v, c z_h + d z_v) on
/// T^4 with an integer matrix.
pub fn varodot_apply(a: &Mat2, z: (&TorusPoint, &TorusPoint)) -> Result<(TorusPoint, TorusPoint)> {
    if !a.is_integer() {
        return Err(Error::Unsupported("varodot requires an integer matrix".into()));
    }
    let (zh, zv) = z;
    let h = TorusPoint::new(
        a.a.clone() * zh.x.clone() + a.b.clone() * zv.x.clone(),
        a.a.clone() * zh.y.clone() + a.b.clone() * zv.y.clone(),
    );
    let v = TorusPoint::new(
        a.c.clone() * zh.x.clone() + a.d.clone() * zv.x.clone(),
        a.c.clone() * zh.y.clone() + a.d.clone() * zv.y.clone(),
    );
    Ok((h, v))
}

/// Exact solution set on the (1/grid) lattice of T^4 of the level equation
/// a z_h + b z_v = 0 mod Z^2 with gcd(a, b) = n, minus all solutions of the
/// same equation scaled to a proper divisor level m | n.
pub fn torus_subspace_solutions(
    a: i64,
    b: i64,
    grid: u64,
) -> Result<BTreeSet<(TorusPoint, TorusPoint)>> {
    if a == 0 && b == 0 {
        return Err(Error::Degenerate("coefficients must not both vanish".into()));
    }
    let n = gcd_i64(a.abs(), b.abs());
    let solves = |coef_a: i64, coef_b: i64, zh: &TorusPoint, zv: &TorusPoint| -> bool {
        let ca = Scalar::from_int(coef_a);
        let cb = Scalar::from_int(coef_b);
        let e1 = (ca.clone() * zh.x.clone() + cb.clone() * zv.x.clone()).rem_euclid(&Scalar::one());
        let e2 = (ca * zh.y.clone() + cb * zv.y.clone()).rem_euclid(&Scalar::one());
        e1.is_zero() && e2.is_zero()
    };
    let divisors: Vec<i64> = (1..n).filter(|m| n % m == 0).collect();
    let (pa, pb) = (a / n, b / n);
    let g = grid as i64;
    let mut out = BTreeSet::new();
    let frac = |i: i64| Scalar::from_rational(Rational::new(BigInt::from(i), BigInt::from(g)));
    for xh in 0..g {
        for yh in 0..g {
            for xv in 0..g {
                for yv in 0..g {
                    let zh = TorusPoint::new(frac(xh), frac(yh));
                    let zv = TorusPoint::new(frac(xv), frac(yv));
                    if !solves(a, b, &zh, &zv) {
                        continue;
                    }
                    if divisors.iter().any(|&m| solves(pa * m, pb * m, &zh, &zv)) {
                        continue;
                    }
                    out.insert((zh, zv));
                }
            }
        }
    }
    Ok(out)
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.max(1)
    } else {
        gcd_i64(b, a % b)
    }
}

/// Characterization (2): an SL2(Z) matrix moving the solution set to a
/// horizontal set whose cross-section is O_n. Returns the matrix built from
/// the primitive coefficient pair.
pub fn horizontalizing_matrix(a: i64, b: i64) -> Result<Mat2> {
    let n = gcd_i64(a.abs(), b.abs());
    if n == 0 {
        return Err(Error::Degenerate("zero coefficients".into()));
    }
    let (c, d) = (a / n, b / n);
    // find (x, y) with x*d - y*c = 1
    let (g, x, y) = ext_gcd(d, -c);
    if g != 1 && g != -1 {
        return Err(Error::InvalidSurface("coefficients not primitive".into()));
    }
    let (x, y) = if g == 1 { (x, y) } else { (-x, -y) };
    Ok(Mat2::from_ints(x, y, c, d))
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn origin_is_fixed() {
        let p = TorusPoint::new(Scalar::zero(), Scalar::zero());
        match torus_orbit_classify(&p) {
            OrbitClass::FiniteOrbit { n, points } => {
                assert_eq!(n, BigInt::one());
                assert_eq!(points.len(), 1);
            }
            _ => panic!("origin must have a finite orbit"),
        }
    }

    #[test]
    fn half_point_orbit() {
        let p = TorusPoint::new(Scalar::ratio(1, 2), Scalar::zero());
        match torus_orbit_classify(&p) {
            OrbitClass::FiniteOrbit { n, points } => {
                assert_eq!(n, BigInt::from(2));
                assert_eq!(points.len(), 3);
                let expect = [
                    TorusPoint::new(Scalar::zero(), Scalar::ratio(1, 2)),
                    TorusPoint::new(Scalar::ratio(1, 2), Scalar::zero()),
                    TorusPoint::new(Scalar::ratio(1, 2), Scalar::ratio(1, 2)),
                ];
                for e in expect {
                    assert!(points.contains(&e));
                }
            }
            _ => panic!("rational point must have a finite orbit"),
        }
    }

    #[test]
    fn irrational_is_dense() {
        let p = TorusPoint::new(Scalar::sqrt_of(2) - Scalar::one(), Scalar::zero());
        assert!(matches!(torus_orbit_classify(&p), OrbitClass::Dense));
    }

    #[test]
    fn orbit_size_formula_matches() {
        for n in 1..=50u64 {
            assert_eq!(
                orbit_o_n(n).len() as u64,
                orbit_o_n_size_formula(n),
                "orbit size mismatch at n={n}"
            );
        }
    }

    #[test]
    fn covering_radius_small_cases() {
        // n=1: the single point (0,0): farthest point (1/2,1/2), radius 1/2
        assert_eq!(orbit_covering_radius(1), Rational::new(BigInt::one(), BigInt::from(2)));
        // n=2: three points; the hole at (0,0) realizes 1/2 sup-distance to
        // the nearest of (1/2,0),(0,1/2),(1/2,1/2)
        assert_eq!(orbit_covering_radius(2), Rational::new(BigInt::one(), BigInt::from(2)));
        // n=3: radius drops to 1/3
        assert_eq!(orbit_covering_radius(3), Rational::new(BigInt::one(), BigInt::from(3)));
    }

    #[test]
    fn varodot_swap() {
        let s = Mat2::from_ints(0, -1, 1, 0);
        let zh = TorusPoint::new(Scalar::ratio(1, 3), Scalar::zero());
        let zv = TorusPoint::new(Scalar::zero(), Scalar::zero());
        let (h, v) = varodot_apply(&s, (&zh, &zv)).unwrap();
        assert_eq!(h, TorusPoint::new(Scalar::zero(), Scalar::zero()));
        assert_eq!(v, TorusPoint::new(Scalar::ratio(1, 3), Scalar::zero()));
    }
}
