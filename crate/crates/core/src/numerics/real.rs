//! Scalars that are either exact rationals or balls.

use rug::Rational;

use super::ball::Ball;
use super::sign::{Sign, SignTag};
use crate::error::Result;

#[derive(Clone, Debug, PartialEq)]
pub enum Real {
    Exact(Rational),
    Approx(Ball),
}

impl Real {
    pub fn zero() -> Real {
        Real::Exact(Rational::new())
    }

    pub fn from_i64(v: i64) -> Real {
        Real::Exact(Rational::from(v))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Real::Exact(_))
    }

    pub fn is_exact_zero(&self) -> bool {
        match self {
            Real::Exact(q) => *q == 0,
            Real::Approx(b) => b.is_exact_zero(),
        }
    }

    pub fn to_ball(&self, prec: u32) -> Ball {
        match self {
            Real::Exact(q) => Ball::from_rational(q, prec),
            Real::Approx(b) => b.clone(),
        }
    }

    pub fn sign(&self) -> Sign {
        match self {
            Real::Exact(q) => {
                let tag = match q.cmp0() {
                    std::cmp::Ordering::Greater => SignTag::Positive,
                    std::cmp::Ordering::Less => SignTag::Negative,
                    std::cmp::Ordering::Equal => SignTag::Zero,
                };
                Sign { tag, at_bits: 0 }
            }
            Real::Approx(b) => Sign::of(b),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Real::Exact(q) => q.to_f64(),
            Real::Approx(b) => b.to_f64(),
        }
    }

    fn prec_hint(a: &Real, b: &Real) -> u32 {
        match (a, b) {
            (Real::Approx(x), Real::Approx(y)) => x.prec().max(y.prec()),
            (Real::Approx(x), _) | (_, Real::Approx(x)) => x.prec(),
            _ => 128,
        }
    }

    pub fn add(&self, other: &Real) -> Real {
        match (self, other) {
            (Real::Exact(a), Real::Exact(b)) => Real::Exact(Rational::from(a + b)),
            _ => {
                let p = Real::prec_hint(self, other);
                Real::Approx(self.to_ball(p).add_ref(&other.to_ball(p)))
            }
        }
    }

    pub fn sub(&self, other: &Real) -> Real {
        match (self, other) {
            (Real::Exact(a), Real::Exact(b)) => Real::Exact(Rational::from(a - b)),
            _ => {
                let p = Real::prec_hint(self, other);
                Real::Approx(self.to_ball(p).sub_ref(&other.to_ball(p)))
            }
        }
    }

    pub fn mul(&self, other: &Real) -> Real {
        match (self, other) {
            (Real::Exact(a), Real::Exact(b)) => Real::Exact(Rational::from(a * b)),
            _ => {
                let p = Real::prec_hint(self, other);
                Real::Approx(self.to_ball(p).mul_ref(&other.to_ball(p)))
            }
        }
    }

    pub fn div(&self, other: &Real) -> Result<Real> {
        match (self, other) {
            (Real::Exact(_), Real::Exact(b)) if *b == 0 => {
                Err(crate::error::Error::Domain("division by exact zero".into()))
            }
            (Real::Exact(a), Real::Exact(b)) => Ok(Real::Exact(Rational::from(a / b))),
            _ => {
                let p = Real::prec_hint(self, other);
                Ok(Real::Approx(self.to_ball(p).div_ref(&other.to_ball(p))?))
            }
        }
    }

    pub fn mul_rational(&self, q: &Rational) -> Real {
        match self {
            Real::Exact(a) => Real::Exact(Rational::from(a * q)),
            Real::Approx(b) => Real::Approx(b.mul_rational(q)),
        }
    }
}

impl From<Rational> for Real {
    fn from(q: Rational) -> Self {
        Real::Exact(q)
    }
}

impl From<Ball> for Real {
    fn from(b: Ball) -> Self {
        Real::Approx(b)
    }
}
