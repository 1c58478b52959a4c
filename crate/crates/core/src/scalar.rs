//! Exact arithmetic over the real quadratic field Q(sqrt(d)).
//!
//! Every coordinate, holonomy and matrix entry in this crate is a [`Scalar`]:
//! a value `a + b*sqrt(d)` with `a`, `b` rational and `d` a squarefree
//! non-negative integer. Rational values are stored in the canonical form
//! `d = 0, b = 0`, so structural equality coincides with numeric equality.

use crate::error::{Error, Result};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

pub type Rational = BigRational;

/// Element of Q(sqrt(d)), kept in canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    a: Rational,
    b: Rational,
    d: u64,
}

/// Extract the square part of `n`: returns `(s, d)` with `n = s^2 * d`,
/// `d` squarefree.
fn squarefree_split(n: u64) -> (u64, u64) {
    if n <= 1 {
        return (1, n);
    }
    let mut d = n;
    let mut s = 1u64;
    let mut p = 2u64;
    while p <= 10_000_000 && p * p <= d {
        while d % (p * p) == 0 {
            d /= p * p;
            s *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    // Any factor left after trial division up to 1e7 is p, p^2 or p*q with
    // p,q > 1e7; only the perfect square needs extracting (p*q*r exceeds u64).
    let r = d.isqrt();
    if r > 1 && r * r == d {
        s *= r;
        d = 1;
    }
    if d == 1 {
        // all of n was a square
        (s, 1)
    } else {
        (s, d)
    }
}

impl Scalar {
    /// Canonicalizing constructor: reduces the radicand to squarefree form and
    /// folds perfect squares into the rational part.
    pub fn new(a: Rational, b: Rational, d: u64) -> Self {
        if b.is_zero() || d == 0 {
            return Scalar {
                a,
                b: Rational::zero(),
                d: 0,
            };
        }
        let (s, d) = squarefree_split(d);
        let b = b * Rational::from_integer(BigInt::from(s));
        if d <= 1 {
            // sqrt(1) = 1, sqrt(0) = 0
            let a = if d == 1 { a + b } else { a };
            return Scalar {
                a,
                b: Rational::zero(),
                d: 0,
            };
        }
        Scalar { a, b, d }
    }

    /// Checked constructor used by the text parser; rejects negative radicands
    /// (the signed value comes in via `d_signed` so the error can be reported).
    pub fn try_new(a: Rational, b: Rational, d_signed: i64) -> Result<Self> {
        if d_signed < 0 {
            return Err(Error::NegativeRadicand);
        }
        Ok(Scalar::new(a, b, d_signed as u64))
    }

    pub fn from_rational(a: Rational) -> Self {
        Scalar {
            a,
            b: Rational::zero(),
            d: 0,
        }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        Scalar::from_rational(Rational::new(BigInt::from(p), BigInt::from(q)))
    }

    /// `sqrt(d)` as a Scalar (d need not be squarefree).
    pub fn sqrt_of(d: u64) -> Self {
        Scalar::new(Rational::zero(), Rational::one(), d)
    }

    pub fn zero() -> Self {
        Scalar::from_int(0)
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn radical_part(&self) -> &Rational {
        &self.b
    }

    /// Squarefree radicand; 0 for rational values.
    pub fn radicand(&self) -> u64 {
        self.d
    }

    /// As a rational, if the value lies in Q.
    pub fn to_rational(&self) -> Option<Rational> {
        if self.b.is_zero() {
            Some(self.a.clone())
        } else {
            None
        }
    }

    /// Common field of two values. Panics on a genuine mismatch; surfaces
    /// validate their field once so this indicates a programming error.
    fn join_field(&self, rhs: &Scalar) -> u64 {
        match (self.d, rhs.d) {
            (0, d) | (d, 0) => d,
            (d1, d2) if d1 == d2 => d1,
            (d1, d2) => panic!("field mismatch: sqrt({d1}) vs sqrt({d2})"),
        }
    }

    /// Exact sign of the real value `a + b*sqrt(d)`: -1, 0 or +1.
    pub fn signum(&self) -> i32 {
        let sa = rat_sign(&self.a);
        let sb = rat_sign(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 {
            return sb;
        }
        if sa == sb {
            return sa;
        }
        // opposite signs: compare a^2 with b^2 d
        let lhs = &self.a * &self.a;
        let rhs = &self.b * &self.b * Rational::from_integer(BigInt::from(self.d));
        match lhs.cmp(&rhs) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> Scalar {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Galois conjugate `a - b*sqrt(d)`.
    pub fn conjugate(&self) -> Scalar {
        Scalar {
            a: self.a.clone(),
            b: -self.b.clone(),
            d: self.d,
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self) -> Scalar {
        assert!(!self.is_zero(), "division by zero scalar");
        // 1/(a+b√d) = (a-b√d)/(a²-b²d)
        let norm = &self.a * &self.a - &self.b * &self.b * Rational::from_integer(BigInt::from(self.d));
        let conj = self.conjugate();
        Scalar {
            a: conj.a / &norm,
            b: conj.b / &norm,
            d: if conj.b.is_zero() { 0 } else { self.d },
        }
        .renormal()
    }

    fn renormal(self) -> Scalar {
        if self.b.is_zero() {
            Scalar {
                a: self.a,
                b: self.b,
                d: 0,
            }
        } else {
            self
        }
    }

    /// Floor of the real value, as a big integer.
    pub fn floor_int(&self) -> BigInt {
        if self.b.is_zero() {
            return self.a.floor().to_integer();
        }
        // bisect around the rational part of a + b√d using exact comparison
        let mut lo = self.a.floor().to_integer()
            - (self.b.abs().ceil().to_integer() + BigInt::one()) * BigInt::from(self.d.isqrt() + 1);
        let mut hi = self.a.ceil().to_integer()
            + (self.b.abs().ceil().to_integer() + BigInt::one()) * BigInt::from(self.d.isqrt() + 1);
        // invariant: lo <= floor(x) < hi
        while &hi - &lo > BigInt::one() {
            let mid = (&lo + &hi) / BigInt::from(2);
            let mid_s = Scalar::from_rational(Rational::from_integer(mid.clone()));
            if (self.clone() - mid_s).signum() >= 0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    /// `self mod m` reduced into `[0, m)` for positive `m`.
    pub fn rem_euclid(&self, m: &Scalar) -> Scalar {
        assert!(m.is_positive(), "modulus must be positive");
        let q = (self.clone() / m.clone()).floor_int();
        let r = self.clone() - m.clone() * Scalar::from_rational(Rational::from_integer(q));
        debug_assert!(r.signum() >= 0 && (r.clone() - m.clone()).signum() < 0);
        r
    }

    /// Approximate double value, for display and SVG layout only.
    pub fn to_f64(&self) -> f64 {
        let af = rat_f64(&self.a);
        let bf = rat_f64(&self.b);
        af + bf * (self.d as f64).sqrt()
    }
}

fn rat_sign(r: &Rational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

fn rat_f64(r: &Rational) -> f64 {
    let n = r.numer();
    let d = r.denom();
    // good enough for display precision
    n.to_string().parse::<f64>().unwrap_or(0.0) / d.to_string().parse::<f64>().unwrap_or(1.0)
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.clone() - other.clone()).signum() {
            x if x < 0 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        let d = self.join_field(&rhs);
        Scalar {
            a: self.a + rhs.a,
            b: self.b + rhs.b,
            d,
        }
        .renormal()
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        let d = self.join_field(&rhs);
        Scalar {
            a: self.a - rhs.a,
            b: self.b - rhs.b,
            d,
        }
        .renormal()
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        let d = self.join_field(&rhs);
        let dr = Rational::from_integer(BigInt::from(d));
        let a = &self.a * &rhs.a + &self.b * &rhs.b * &dr;
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        Scalar { a, b, d }.renormal()
    }
}

impl Div for Scalar {
    type Output = Scalar;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Scalar) -> Scalar {
        self * rhs.inv()
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            a: -self.a,
            b: -self.b,
            d: self.d,
        }
    }
}

impl AddAssign for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        *self = self.clone() + rhs;
    }
}

impl SubAssign for Scalar {
    fn sub_assign(&mut self, rhs: Scalar) {
        *self = self.clone() - rhs;
    }
}

impl MulAssign for Scalar {
    fn mul_assign(&mut self, rhs: Scalar) {
        *self = self.clone() * rhs;
    }
}

impl fmt::Display for Scalar {
    /// Bit-exact textual form `a+b*sqrt(d)`, rationals as `p/q`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn rat(r: &Rational) -> String {
            if r.denom() == &BigInt::one() {
                format!("{}", r.numer())
            } else {
                format!("{}/{}", r.numer(), r.denom())
            }
        }
        if self.b.is_zero() {
            return write!(f, "{}", rat(&self.a));
        }
        if self.a.is_zero() {
            if self.b == Rational::one() {
                return write!(f, "sqrt({})", self.d);
            }
            return write!(f, "{}*sqrt({})", rat(&self.b), self.d);
        }
        if self.b.is_positive() {
            write!(f, "{}+{}*sqrt({})", rat(&self.a), rat(&self.b), self.d)
        } else {
            write!(f, "{}-{}*sqrt({})", rat(&self.a), rat(&-self.b.clone()), self.d)
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Scalar {
    type Err = Error;

    /// Parses `a`, `a+b*sqrt(d)`, `b*sqrt(d)`, `sqrt(d)` and signed variants.
    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty scalar".into()));
        }
        // split into at most two signed terms
        let mut terms: Vec<String> = Vec::new();
        let mut cur = String::new();
        let mut depth = 0i32;
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '(' => depth += 1,
                ')' => depth -= 1,
                '+' | '-' if i > 0 && depth == 0 => {
                    // sign inside an exponent-free scalar always splits terms
                    terms.push(std::mem::take(&mut cur));
                    cur.push(ch);
                    continue;
                }
                _ => {}
            }
            cur.push(ch);
        }
        terms.push(cur);
        let mut a = Rational::zero();
        let mut b = Rational::zero();
        let mut d: Option<u64> = None;
        for t in &terms {
            let (coef_str, rad) = match t.find("sqrt(") {
                Some(pos) => {
                    let inner = &t[pos + 5..t
                        .rfind(')')
                        .ok_or_else(|| Error::Parse(format!("missing ) in {t}")))?];
                    let di: i64 = inner
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad radicand {inner}")))?;
                    if di < 0 {
                        return Err(Error::NegativeRadicand);
                    }
                    let coef = t[..pos].trim_end_matches('*');
                    (coef.to_string(), Some(di as u64))
                }
                None => (t.clone(), None),
            };
            let coef = if coef_str.is_empty() || coef_str == "+" {
                Rational::one()
            } else if coef_str == "-" {
                -Rational::one()
            } else {
                parse_rational(&coef_str)?
            };
            match rad {
                None => a += coef,
                Some(di) => {
                    let sq = Scalar::new(Rational::zero(), coef, di);
                    if sq.d != 0 {
                        if let Some(prev) = d {
                            if prev != sq.d {
                                return Err(Error::FieldMismatch(prev, sq.d));
                            }
                        }
                        d = Some(sq.d);
                        b += sq.b;
                    } else {
                        a += sq.a;
                    }
                }
            }
        }
        Ok(Scalar::new(a, b, d.unwrap_or(0)))
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, q)) => {
            let n: BigInt = n
                .parse()
                .map_err(|_| Error::Parse(format!("bad numerator {n}")))?;
            let q: BigInt = q
                .parse()
                .map_err(|_| Error::Parse(format!("bad denominator {q}")))?;
            if q.is_zero() {
                return Err(Error::Parse("zero denominator".into()));
            }
            Ok(Rational::new(n, q))
        }
        None => {
            let n: BigInt = s
                .parse()
                .map_err(|_| Error::Parse(format!("bad integer {s}")))?;
            Ok(Rational::from_integer(n))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(txt: &str) -> Scalar {
        txt.parse().unwrap()
    }

    #[test]
    fn normalize_reduces_rationals() {
        let x = Scalar::new(Rational::new(BigInt::from(2), BigInt::from(4)), Rational::zero(), 5);
        assert_eq!(x, Scalar::ratio(1, 2));
        assert_eq!(x.radicand(), 0);
    }

    #[test]
    fn normalize_folds_square_radicand() {
        // 0 + 1*sqrt(4) = 2
        let x = Scalar::new(Rational::zero(), Rational::one(), 4);
        assert_eq!(x, Scalar::from_int(2));
        assert_eq!(x.radicand(), 0);
        // sqrt(8) = 2 sqrt(2)
        let y = Scalar::sqrt_of(8);
        assert_eq!(y, Scalar::from_int(2) * Scalar::sqrt_of(2));
        assert_eq!(y.radicand(), 2);
    }

    #[test]
    fn golden_ratio_square() {
        // ((1+sqrt 5)/2)^2 = (3+sqrt 5)/2
        let phi = s("1/2+1/2*sqrt(5)");
        let sq = phi.clone() * phi;
        assert_eq!(sq, s("3/2+1/2*sqrt(5)"));
    }

    #[test]
    fn exact_sign() {
        assert_eq!(s("1-1*sqrt(2)").signum(), -1);
        assert_eq!(Scalar::zero().signum(), 0);
        assert_eq!(s("-3+2*sqrt(5)").signum(), 1);
        assert_eq!(s("3-2*sqrt(2)").signum(), 1); // 3 > 2.83
        assert_eq!(s("-3+2*sqrt(2)").signum(), -1);
    }

    #[test]
    fn sign_multiplicative() {
        let vals = [
            s("1-1*sqrt(2)"),
            s("3-2*sqrt(2)"),
            s("-1/3"),
            s("2+1/2*sqrt(2)"),
            Scalar::zero(),
        ];
        for x in &vals {
            for y in &vals {
                assert_eq!(
                    (x.clone() * y.clone()).signum(),
                    x.signum() * y.signum(),
                    "sign failed for {x} * {y}"
                );
            }
        }
    }

    #[test]
    fn parse_print_roundtrip() {
        for txt in ["1/2", "-7/3", "1/2+1/2*sqrt(5)", "1/2-1/2*sqrt(5)", "sqrt(2)", "0", "-2*sqrt(3)"] {
            let v = s(txt);
            let back: Scalar = v.to_string().parse().unwrap();
            assert_eq!(v, back, "roundtrip {txt}");
        }
    }

    #[test]
    fn negative_radicand_rejected() {
        assert!(Scalar::try_new(Rational::zero(), Rational::one(), -5).is_err());
        assert!("sqrt(-5)".parse::<Scalar>().is_err());
    }

    #[test]
    fn floor_and_mod() {
        assert_eq!(s("sqrt(2)").floor_int(), BigInt::from(1));
        assert_eq!(s("-1*sqrt(2)").floor_int(), BigInt::from(-2));
        assert_eq!(s("7/2").floor_int(), BigInt::from(3));
        let m = Scalar::from_int(2);
        assert_eq!(s("5/2").rem_euclid(&m), s("1/2"));
        assert_eq!(s("-1/2").rem_euclid(&m), s("3/2"));
        let phi = s("1/2+1/2*sqrt(5)");
        let r = phi.rem_euclid(&Scalar::one());
        assert_eq!(r, s("-1/2+1/2*sqrt(5)"));
    }

    #[test]
    fn field_mix_with_rationals_ok() {
        let x = s("1/2+1/3*sqrt(5)") + s("1/2");
        assert_eq!(x, s("1+1/3*sqrt(5)"));
    }

    #[test]
    #[should_panic(expected = "field mismatch")]
    fn field_mix_panics() {
        let _ = s("sqrt(2)") + s("sqrt(5)");
    }
}
