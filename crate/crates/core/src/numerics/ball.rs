//! Midpoint-radius arithmetic on top of MPFR.
//!
//! A [`Ball`] stores a midpoint at working precision and a short radius that
//! is always rounded upward. Every primitive adds the propagated input radii
//! plus one ulp of the result whenever MPFR reports an inexact rounding.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::{Constant, Round};
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};

/// Precision of the radius field. Radii only need a few correct bits.
pub const RAD_PREC: u32 = 30;

fn rad_zero() -> Float {
    Float::new(RAD_PREC)
}

fn up<T>(val: T) -> Float
where
    Float: rug::ops::AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(RAD_PREC, val, Round::Up).0
}

fn down<T>(val: T) -> Float
where
    Float: rug::ops::AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(RAD_PREC, val, Round::Down).0
}

/// One ulp of `x` at its own precision, as an upward-rounded radius.
fn ulp(x: &Float) -> Float {
    match x.get_exp() {
        Some(e) => {
            let mut u = Float::with_val(RAD_PREC, 1);
            u <<= e - x.prec() as i32;
            u
        }
        None => rad_zero(),
    }
}

fn rounding_err(x: &Float, ord: Ordering) -> Float {
    if ord == Ordering::Equal {
        rad_zero()
    } else {
        ulp(x)
    }
}

fn radd(a: &Float, b: &Float) -> Float {
    up(a + b)
}

fn rmul(a: &Float, b: &Float) -> Float {
    up(a * b)
}

fn rdiv(a: &Float, b: &Float) -> Float {
    up(a / b)
}

fn abs_up(x: &Float) -> Float {
    up(&*x.as_abs())
}

#[derive(Clone, PartialEq)]
pub struct Ball {
    mid: Float,
    rad: Float,
}

impl fmt::Debug for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} +/- {}]", self.mid.to_string_radix(10, Some(20)), self.rad.to_string_radix(10, Some(3)))
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(20);
        write!(f, "{} +/- {}", self.mid.to_string_radix(10, Some(digits)), self.rad.to_string_radix(10, Some(3)))
    }
}

impl Ball {
    /// Builds a ball from a midpoint and a radius; the radius is rounded up.
    pub fn new(mid: Float, rad: &Float) -> Ball {
        assert!(!rad.is_sign_negative() || rad.is_zero(), "negative radius");
        Ball { mid, rad: up(rad) }
    }

    pub fn exact(mid: Float) -> Ball {
        Ball { mid, rad: rad_zero() }
    }

    pub fn zero(prec: u32) -> Ball {
        Ball::exact(Float::new(prec))
    }

    pub fn one(prec: u32) -> Ball {
        Ball::from_i64(1, prec)
    }

    pub fn from_i64(v: i64, prec: u32) -> Ball {
        let (mid, ord) = Float::with_val_round(prec, v, Round::Nearest);
        let rad = rounding_err(&mid, ord);
        Ball { mid, rad }
    }

    pub fn from_integer(v: &Integer, prec: u32) -> Ball {
        let (mid, ord) = Float::with_val_round(prec, v, Round::Nearest);
        let rad = rounding_err(&mid, ord);
        Ball { mid, rad }
    }

    pub fn from_rational(q: &Rational, prec: u32) -> Ball {
        let (mid, ord) = Float::with_val_round(prec, q, Round::Nearest);
        let rad = rounding_err(&mid, ord);
        Ball { mid, rad }
    }

    /// Exact conversion of a double (every finite double fits in 53 bits).
    pub fn from_f64(v: f64, prec: u32) -> Ball {
        assert!(v.is_finite(), "non-finite f64");
        Ball::exact(Float::with_val(prec.max(53), v))
    }

    /// Smallest ball containing both endpoints.
    pub fn from_endpoints(lo: &Float, hi: &Float, prec: u32) -> Ball {
        let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        let mid = Float::with_val(prec, lo + hi) / 2u32;
        let r1 = up(Float::with_val_round(prec + 2, hi - &mid, Round::Up).0);
        let r2 = up(Float::with_val_round(prec + 2, &mid - lo, Round::Up).0);
        Ball { mid, rad: if r1 > r2 { r1 } else { r2 } }
    }

    pub fn pi(prec: u32) -> Ball {
        let (mid, ord) = Float::with_val_round(prec, Constant::Pi, Round::Nearest);
        let rad = rounding_err(&mid, ord);
        Ball { mid, rad }
    }

    pub fn ln2(prec: u32) -> Ball {
        let (mid, ord) = Float::with_val_round(prec, Constant::Log2, Round::Nearest);
        let rad = rounding_err(&mid, ord);
        Ball { mid, rad }
    }

    pub fn mid(&self) -> &Float {
        &self.mid
    }

    pub fn rad(&self) -> &Float {
        &self.rad
    }

    pub fn prec(&self) -> u32 {
        self.mid.prec()
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.mid.is_finite() && self.rad.is_finite()
    }

    /// Lower endpoint, rounded down.
    pub fn lower(&self) -> Float {
        Float::with_val_round(self.prec() + 2, &self.mid - &self.rad, Round::Down).0
    }

    /// Upper endpoint, rounded up.
    pub fn upper(&self) -> Float {
        Float::with_val_round(self.prec() + 2, &self.mid + &self.rad, Round::Up).0
    }

    /// Upper bound on `|x|` for every member, at radius precision.
    pub fn mag(&self) -> Float {
        radd(&abs_up(&self.mid), &self.rad)
    }

    /// Lower bound on `|x|` for every member (zero when the ball straddles 0).
    pub fn mig(&self) -> Float {
        let m = down(&*self.mid.as_abs());
        let d = down(&m - &self.rad);
        if d.is_sign_negative() {
            rad_zero()
        } else {
            d
        }
    }

    pub fn contains_zero(&self) -> bool {
        *self.mid.as_abs() <= self.rad
    }

    pub fn is_positive(&self) -> bool {
        self.mid > self.rad
    }

    pub fn is_negative(&self) -> bool {
        *self.mid.as_neg() > self.rad
    }

    pub fn is_exact_zero(&self) -> bool {
        self.mid.is_zero() && self.rad.is_zero()
    }

    pub fn contains_rational(&self, q: &Rational) -> bool {
        let Some(m) = self.mid.to_rational() else { return false };
        let Some(r) = self.rad.to_rational() else { return false };
        let d = Rational::from(q - &m).abs();
        d <= r
    }

    pub fn contains_float(&self, x: &Float) -> bool {
        self.contains_ball(&Ball::exact(x.clone()))
    }

    /// True when `other` lies entirely inside `self`.
    pub fn contains_ball(&self, other: &Ball) -> bool {
        let (Some(m), Some(r)) = (self.mid.to_rational(), self.rad.to_rational()) else { return false };
        let (Some(om), Some(or)) = (other.mid.to_rational(), other.rad.to_rational()) else { return false };
        let d = Rational::from(&om - &m).abs();
        d + or <= r
    }

    pub fn overlaps(&self, other: &Ball) -> bool {
        let (Some(m), Some(r)) = (self.mid.to_rational(), self.rad.to_rational()) else { return false };
        let (Some(om), Some(or)) = (other.mid.to_rational(), other.rad.to_rational()) else { return false };
        let d = Rational::from(&om - &m).abs();
        d <= r + or
    }

    /// Relative radius `rad / |mid|` as a double (infinite for a zero midpoint).
    pub fn rel_rad(&self) -> f64 {
        if self.rad.is_zero() {
            return 0.0;
        }
        if self.mid.is_zero() {
            return f64::INFINITY;
        }
        let r = Float::with_val(RAD_PREC, &self.rad / &*self.mid.as_abs());
        r.to_f64_round(Round::Up)
    }

    pub fn to_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    /// Re-rounds the midpoint to `prec` bits, widening the radius as needed.
    pub fn set_prec(&self, prec: u32) -> Ball {
        let (mid, ord) = Float::with_val_round(prec, &self.mid, Round::Nearest);
        let rad = radd(&self.rad, &rounding_err(&mid, ord));
        Ball { mid, rad }
    }

    /// Adds `extra` to the radius.
    pub fn add_error(&self, extra: &Float) -> Ball {
        Ball { mid: self.mid.clone(), rad: radd(&self.rad, &abs_up(extra)) }
    }

    pub fn abs(&self) -> Ball {
        if self.contains_zero() {
            let hi = self.mag();
            let prec = self.prec();
            Ball::from_endpoints(&Float::new(prec), &hi, prec)
        } else {
            Ball { mid: Float::with_val(self.prec(), &*self.mid.as_abs()), rad: self.rad.clone() }
        }
    }

    pub fn neg(&self) -> Ball {
        Ball { mid: Float::with_val(self.prec(), &*self.mid.as_neg()), rad: self.rad.clone() }
    }

    pub fn add_ref(&self, other: &Ball) -> Ball {
        let prec = self.prec().max(other.prec());
        let (mid, ord) = Float::with_val_round(prec, &self.mid + &other.mid, Round::Nearest);
        let rad = radd(&radd(&self.rad, &other.rad), &rounding_err(&mid, ord));
        Ball { mid, rad }
    }

    pub fn sub_ref(&self, other: &Ball) -> Ball {
        let prec = self.prec().max(other.prec());
        let (mid, ord) = Float::with_val_round(prec, &self.mid - &other.mid, Round::Nearest);
        let rad = radd(&radd(&self.rad, &other.rad), &rounding_err(&mid, ord));
        Ball { mid, rad }
    }

    pub fn mul_ref(&self, other: &Ball) -> Ball {
        let prec = self.prec().max(other.prec());
        let (mid, ord) = Float::with_val_round(prec, &self.mid * &other.mid, Round::Nearest);
        let mut rad = rounding_err(&mid, ord);
        if !self.rad.is_zero() || !other.rad.is_zero() {
            let a = abs_up(&self.mid);
            let b = abs_up(&other.mid);
            let t = radd(&rmul(&a, &other.rad), &rmul(&b, &self.rad));
            rad = radd(&radd(&t, &rmul(&self.rad, &other.rad)), &rad);
        }
        Ball { mid, rad }
    }

    pub fn div_ref(&self, other: &Ball) -> Result<Ball> {
        if other.contains_zero() {
            return Err(Error::Domain("division by a ball containing zero".into()));
        }
        let prec = self.prec().max(other.prec());
        let (mid, ord) = Float::with_val_round(prec, &self.mid / &other.mid, Round::Nearest);
        let mut rad = rounding_err(&mid, ord);
        if !self.rad.is_zero() || !other.rad.is_zero() {
            // |x/y - mx/my| <= (|mx| ry + |my| rx) / (|my| (|my| - ry))
            let a = abs_up(&self.mid);
            let b_up = abs_up(&other.mid);
            let b_dn = down(&*other.mid.as_abs());
            let gap = down(&b_dn - &other.rad);
            let num = radd(&rmul(&a, &other.rad), &rmul(&b_up, &self.rad));
            let den = down(&b_dn * &gap);
            rad = radd(&rdiv(&num, &den), &rad);
        }
        Ok(Ball { mid, rad })
    }

    pub fn sqr(&self) -> Ball {
        self.mul_ref(self)
    }

    /// Integer power by repeated squaring.
    pub fn pow_u(&self, mut e: u32) -> Ball {
        let mut base = self.clone();
        let mut acc = Ball::one(self.prec());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.sqr();
            }
        }
        acc
    }

    pub fn mul_i64(&self, v: i64) -> Ball {
        let (mid, ord) = Float::with_val_round(self.prec(), &self.mid * v, Round::Nearest);
        let scaled = rmul(&self.rad, &Float::with_val(64, v.unsigned_abs()));
        let rad = radd(&scaled, &rounding_err(&mid, ord));
        Ball { mid, rad }
    }

    pub fn div_i64(&self, v: i64) -> Ball {
        assert!(v != 0, "division by zero");
        let (mid, ord) = Float::with_val_round(self.prec(), &self.mid / v, Round::Nearest);
        let scaled = rdiv(&self.rad, &Float::with_val(64, v.unsigned_abs()));
        let rad = radd(&scaled, &rounding_err(&mid, ord));
        Ball { mid, rad }
    }

    pub fn mul_rational(&self, q: &Rational) -> Ball {
        self.mul_ref(&Ball::from_rational(q, self.prec()))
    }

    /// Exact multiplication by `2^e`.
    pub fn mul_2exp(&self, e: i32) -> Ball {
        let mut mid = self.mid.clone();
        let mut rad = self.rad.clone();
        mid <<= e;
        rad <<= e;
        Ball { mid, rad }
    }

    pub fn exp(&self) -> Ball {
        let prec = self.prec();
        let (mid, ord) = Float::with_val_round(prec, self.mid.exp_ref(), Round::Nearest);
        let mut rad = rounding_err(&mid, ord);
        if !self.rad.is_zero() {
            let e_up = up(self.mid.exp_ref());
            let g = up(self.rad.exp_m1_ref());
            rad = radd(&rmul(&e_up, &g), &rad);
        }
        Ball { mid, rad }
    }

    pub fn ln(&self) -> Result<Ball> {
        if !self.is_positive() {
            return Err(Error::Domain("logarithm of a ball not certainly positive".into()));
        }
        let prec = self.prec();
        let (mid, ord) = Float::with_val_round(prec, self.mid.ln_ref(), Round::Nearest);
        let mut rad = rounding_err(&mid, ord);
        if !self.rad.is_zero() {
            let lo = down(&self.mid - &self.rad);
            rad = radd(&rdiv(&self.rad, &lo), &rad);
        }
        Ok(Ball { mid, rad })
    }

    pub fn sqrt(&self) -> Result<Ball> {
        if self.is_negative() {
            return Err(Error::Domain("square root of a negative ball".into()));
        }
        let prec = self.prec();
        if self.rad.is_zero() || self.is_positive() {
            let (mid, ord) = Float::with_val_round(prec, self.mid.sqrt_ref(), Round::Nearest);
            let mut rad = rounding_err(&mid, ord);
            if !self.rad.is_zero() {
                let lo = down(&self.mid - &self.rad);
                let s = down(lo.sqrt_ref());
                rad = radd(&rdiv(&self.rad, &s), &rad);
            }
            Ok(Ball { mid, rad })
        } else {
            // Straddles zero: enclose [0, sqrt(hi)].
            let hi = Float::with_val_round(prec, self.upper().sqrt_ref(), Round::Up).0;
            Ok(Ball::from_endpoints(&Float::new(prec), &hi, prec))
        }
    }

    fn lipschitz1(&self, mid: Float, ord: Ordering) -> Ball {
        let rad = radd(&self.rad, &rounding_err(&mid, ord));
        Ball { mid, rad }
    }

    pub fn sin(&self) -> Ball {
        let (mid, ord) = Float::with_val_round(self.prec(), self.mid.sin_ref(), Round::Nearest);
        self.lipschitz1(mid, ord)
    }

    pub fn cos(&self) -> Ball {
        let (mid, ord) = Float::with_val_round(self.prec(), self.mid.cos_ref(), Round::Nearest);
        self.lipschitz1(mid, ord)
    }

    pub fn atan(&self) -> Ball {
        let (mid, ord) = Float::with_val_round(self.prec(), self.mid.atan_ref(), Round::Nearest);
        self.lipschitz1(mid, ord)
    }

    /// Four-quadrant argument of `x + i y` for balls not containing the origin.
    pub fn atan2(y: &Ball, x: &Ball) -> Result<Ball> {
        if x.contains_zero() && y.contains_zero() {
            return Err(Error::Domain("argument of a complex ball containing 0".into()));
        }
        let prec = x.prec().max(y.prec());
        let (mid, ord) = Float::with_val_round(prec, y.mid.atan2_ref(&x.mid), Round::Nearest);
        // |d atan2| <= (|dx| + |dy|) / |z|_min
        let mut rad = rounding_err(&mid, ord);
        if !x.rad.is_zero() || !y.rad.is_zero() {
            let mx = x.mig();
            let my = y.mig();
            let zsq = down(&down(&mx * &mx) + &down(&my * &my));
            let zmin = down(zsq.sqrt_ref());
            rad = radd(&rdiv(&radd(&x.rad, &y.rad), &zmin), &rad);
        }
        Ok(Ball { mid, rad })
    }

    /// Smallest ball containing both inputs.
    pub fn hull(&self, other: &Ball) -> Ball {
        let prec = self.prec().max(other.prec());
        let lo = if self.lower() < other.lower() { self.lower() } else { other.lower() };
        let hi = if self.upper() > other.upper() { self.upper() } else { other.upper() };
        Ball::from_endpoints(&lo, &hi, prec)
    }

    /// Enclosure of `min(x, y)` over members.
    pub fn min(&self, other: &Ball) -> Ball {
        if self.upper() <= other.lower() {
            return self.clone();
        }
        if other.upper() <= self.lower() {
            return other.clone();
        }
        let prec = self.prec().max(other.prec());
        let lo = if self.lower() < other.lower() { self.lower() } else { other.lower() };
        let hi = if self.upper() < other.upper() { self.upper() } else { other.upper() };
        Ball::from_endpoints(&lo, &hi, prec)
    }

    /// Certified `self < other`.
    pub fn lt(&self, other: &Ball) -> bool {
        self.sub_ref(other).is_negative()
    }

    /// Certified `self > other`.
    pub fn gt(&self, other: &Ball) -> bool {
        self.sub_ref(other).is_positive()
    }

    /// Decimal rendering of the midpoint with enough digits to round-trip.
    pub fn mid_decimal(&self) -> String {
        float_to_decimal(&self.mid)
    }

    /// Radius digits rounded toward zero; parsing rounds up, which lands
    /// back on the same value.
    pub fn rad_decimal(&self) -> String {
        if self.rad.is_zero() {
            return "0".to_string();
        }
        let digits = (self.rad.prec() as f64 * std::f64::consts::LOG10_2).ceil() as usize + 2;
        self.rad.to_string_radix_round(10, Some(digits), Round::Down)
    }

    /// Parses a ball written with [`Ball::mid_decimal`] / [`Ball::rad_decimal`].
    pub fn from_decimal(mid: &str, rad: &str, prec: u32) -> Result<Ball> {
        let m = Float::parse(mid).map_err(|e| Error::Parse(format!("midpoint {mid:?}: {e}")))?;
        let r = Float::parse(rad).map_err(|e| Error::Parse(format!("radius {rad:?}: {e}")))?;
        let mid = Float::with_val(prec, m);
        let rad = Float::with_val_round(RAD_PREC, r, Round::Up).0;
        if rad.is_sign_negative() && !rad.is_zero() {
            return Err(Error::Parse(format!("negative radius {rad:?}")));
        }
        Ok(Ball { mid, rad })
    }
}

/// Enough significant decimal digits for an exact round trip at `x.prec()`.
pub fn float_to_decimal(x: &Float) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let digits = (x.prec() as f64 * std::f64::consts::LOG10_2).ceil() as usize + 2;
    x.to_string_radix(10, Some(digits))
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl $tr<&Ball> for &Ball {
            type Output = Ball;
            fn $method(self, rhs: &Ball) -> Ball {
                self.$inner(rhs)
            }
        }
        impl $tr<Ball> for Ball {
            type Output = Ball;
            fn $method(self, rhs: Ball) -> Ball {
                self.$inner(&rhs)
            }
        }
        impl $tr<&Ball> for Ball {
            type Output = Ball;
            fn $method(self, rhs: &Ball) -> Ball {
                self.$inner(rhs)
            }
        }
        impl $tr<Ball> for &Ball {
            type Output = Ball;
            fn $method(self, rhs: Ball) -> Ball {
                self.$inner(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, sub_ref);
forward_binop!(Mul, mul, mul_ref);

/// Panics when the divisor contains zero; use [`Ball::div_ref`] to handle that case.
impl Div<&Ball> for &Ball {
    type Output = Ball;
    fn div(self, rhs: &Ball) -> Ball {
        self.div_ref(rhs).expect("ball division")
    }
}

impl Div<Ball> for Ball {
    type Output = Ball;
    fn div(self, rhs: Ball) -> Ball {
        self.div_ref(&rhs).expect("ball division")
    }
}

impl Neg for Ball {
    type Output = Ball;
    fn neg(self) -> Ball {
        Ball::neg(&self)
    }
}

impl Neg for &Ball {
    type Output = Ball;
    fn neg(self) -> Ball {
        Ball::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn rational_conversion_contains_value() {
        let third = q(1, 3);
        let b = Ball::from_rational(&third, 64);
        assert!(!b.is_exact());
        assert!(b.contains_rational(&third));
        let half = Ball::from_rational(&q(1, 2), 64);
        assert!(half.is_exact());
    }

    #[test]
    fn division_by_ball_containing_zero_is_rejected() {
        let z = Ball::new(Float::with_val(64, 0.001), &Float::with_val(RAD_PREC, 0.01));
        assert!(Ball::one(64).div_ref(&z).is_err());
    }

    #[test]
    fn exp_of_exact_zero_is_exact_one() {
        let e = Ball::zero(128).exp();
        assert!(e.is_exact());
        assert_eq!(e.mid(), &1);
    }

    #[test]
    fn ln_rejects_nonpositive() {
        assert!(Ball::zero(64).ln().is_err());
        assert!(Ball::from_i64(-2, 64).ln().is_err());
    }

    #[test]
    fn sqrt_straddling_zero_encloses_interval() {
        let b = Ball::new(Float::with_val(64, 0.0), &Float::with_val(RAD_PREC, 4.0));
        let s = b.sqrt().unwrap();
        assert!(s.contains_float(&Float::with_val(64, 0)));
        assert!(s.contains_float(&Float::with_val(64, 2)));
    }

    #[test]
    fn pi_encloses_known_digits() {
        let p = Ball::pi(200);
        let approx = Float::with_val(200, Float::parse("3.14159265358979323846264338327950288419716939937510582097494459").unwrap());
        let d = Float::with_val(200, p.mid() - &approx).abs();
        assert!(d < 1e-55);
    }

    #[test]
    fn decimal_round_trip_is_bit_exact() {
        let b = Ball::pi(256).mul_ref(&Ball::from_rational(&q(1, 7), 256));
        let back = Ball::from_decimal(&b.mid_decimal(), &b.rad_decimal(), 256).unwrap();
        assert_eq!(back.mid(), b.mid());
        assert_eq!(back.rad(), b.rad());
    }

    #[test]
    fn atan2_quadrants() {
        let prec = 128;
        let a = Ball::atan2(&Ball::from_i64(1, prec), &Ball::from_i64(-1, prec)).unwrap();
        let expect = Ball::pi(prec).mul_rational(&q(3, 4));
        assert!(a.overlaps(&expect));
    }
}
