//! Planar vectors and 2x2 matrices over exact scalars.

use crate::scalar::Scalar;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vec2 {
    pub x: Scalar,
    pub y: Scalar,
}

impl Vec2 {
    pub fn new(x: Scalar, y: Scalar) -> Self {
        Vec2 { x, y }
    }

    pub fn zero() -> Self {
        Vec2::new(Scalar::zero(), Scalar::zero())
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Vec2::new(Scalar::from_int(x), Scalar::from_int(y))
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    /// Exact squared euclidean length.
    pub fn norm_sq(&self) -> Scalar {
        self.x.clone() * self.x.clone() + self.y.clone() * self.y.clone()
    }

    pub fn dot(&self, rhs: &Vec2) -> Scalar {
        self.x.clone() * rhs.x.clone() + self.y.clone() * rhs.y.clone()
    }

    /// Cross product z-component; sign gives orientation.
    pub fn cross(&self, rhs: &Vec2) -> Scalar {
        self.x.clone() * rhs.y.clone() - self.y.clone() * rhs.x.clone()
    }

    pub fn scale(&self, s: &Scalar) -> Vec2 {
        Vec2::new(self.x.clone() * s.clone(), self.y.clone() * s.clone())
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl fmt::Display for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

impl fmt::Debug for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// 2x2 matrix (row major).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat2 {
    pub a: Scalar,
    pub b: Scalar,
    pub c: Scalar,
    pub d: Scalar,
}

impl Mat2 {
    pub fn new(a: Scalar, b: Scalar, c: Scalar, d: Scalar) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2::new(
            Scalar::from_int(a),
            Scalar::from_int(b),
            Scalar::from_int(c),
            Scalar::from_int(d),
        )
    }

    pub fn identity() -> Self {
        Mat2::from_ints(1, 0, 0, 1)
    }

    pub fn neg_identity() -> Self {
        Mat2::from_ints(-1, 0, 0, -1)
    }

    /// Horizontal shear (1 a; 0 1).
    pub fn shear_h(a: Scalar) -> Self {
        Mat2::new(Scalar::one(), a, Scalar::zero(), Scalar::one())
    }

    /// Vertical shear (1 0; b 1).
    pub fn shear_v(b: Scalar) -> Self {
        Mat2::new(Scalar::one(), Scalar::zero(), b, Scalar::one())
    }

    pub fn det(&self) -> Scalar {
        self.a.clone() * self.d.clone() - self.b.clone() * self.c.clone()
    }

    pub fn apply(&self, v: &Vec2) -> Vec2 {
        Vec2::new(
            self.a.clone() * v.x.clone() + self.b.clone() * v.y.clone(),
            self.c.clone() * v.x.clone() + self.d.clone() * v.y.clone(),
        )
    }

    pub fn mul(&self, rhs: &Mat2) -> Mat2 {
        Mat2::new(
            self.a.clone() * rhs.a.clone() + self.b.clone() * rhs.c.clone(),
            self.a.clone() * rhs.b.clone() + self.b.clone() * rhs.d.clone(),
            self.c.clone() * rhs.a.clone() + self.d.clone() * rhs.c.clone(),
            self.c.clone() * rhs.b.clone() + self.d.clone() * rhs.d.clone(),
        )
    }

    pub fn inv(&self) -> Mat2 {
        let det = self.det();
        assert!(!det.is_zero(), "singular matrix");
        let inv = det.inv();
        Mat2::new(
            self.d.clone() * inv.clone(),
            -self.b.clone() * inv.clone(),
            -self.c.clone() * inv.clone(),
            self.a.clone() * inv,
        )
    }

    /// True if all entries are integers.
    pub fn is_integer(&self) -> bool {
        [&self.a, &self.b, &self.c, &self.d].iter().all(|s| {
            s.to_rational()
                .map(|r| r.is_integer())
                .unwrap_or(false)
        })
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} {}; {} {}]", self.a, self.b, self.c, self.d)
    }
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        Mat2::mul(&self, &rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_and_inverse() {
        let m = Mat2::from_ints(1, 2, 0, 1);
        assert_eq!(m.det(), Scalar::one());
        let id = m.mul(&m.inv());
        assert_eq!(id, Mat2::identity());
    }

    #[test]
    fn cross_orientation() {
        let e1 = Vec2::from_ints(1, 0);
        let e2 = Vec2::from_ints(0, 1);
        assert!(e1.cross(&e2).is_positive());
        assert!(e2.cross(&e1).is_negative());
    }
}
