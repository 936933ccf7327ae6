//! Rectangular complex balls (a pair of real balls).

use super::ball::Ball;
use crate::error::Result;

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexBall {
    pub re: Ball,
    pub im: Ball,
}

impl ComplexBall {
    pub fn new(re: Ball, im: Ball) -> Self {
        ComplexBall { re, im }
    }

    pub fn real(re: Ball) -> Self {
        let p = re.prec();
        ComplexBall { re, im: Ball::zero(p) }
    }

    pub fn zero(prec: u32) -> Self {
        ComplexBall { re: Ball::zero(prec), im: Ball::zero(prec) }
    }

    pub fn one(prec: u32) -> Self {
        ComplexBall { re: Ball::one(prec), im: Ball::zero(prec) }
    }

    /// `r e^{i theta}`.
    pub fn from_polar(r: &Ball, theta: &Ball) -> Self {
        ComplexBall { re: r.mul_ref(&theta.cos()), im: r.mul_ref(&theta.sin()) }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn add(&self, o: &ComplexBall) -> ComplexBall {
        ComplexBall { re: self.re.add_ref(&o.re), im: self.im.add_ref(&o.im) }
    }

    pub fn sub(&self, o: &ComplexBall) -> ComplexBall {
        ComplexBall { re: self.re.sub_ref(&o.re), im: self.im.sub_ref(&o.im) }
    }

    pub fn mul(&self, o: &ComplexBall) -> ComplexBall {
        let re = self.re.mul_ref(&o.re).sub_ref(&self.im.mul_ref(&o.im));
        let im = self.re.mul_ref(&o.im).add_ref(&self.im.mul_ref(&o.re));
        ComplexBall { re, im }
    }

    pub fn scale(&self, s: &Ball) -> ComplexBall {
        ComplexBall { re: self.re.mul_ref(s), im: self.im.mul_ref(s) }
    }

    pub fn div_real(&self, s: &Ball) -> Result<ComplexBall> {
        Ok(ComplexBall { re: self.re.div_ref(s)?, im: self.im.div_ref(s)? })
    }

    pub fn conj(&self) -> ComplexBall {
        ComplexBall { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn norm_sqr(&self) -> Ball {
        self.re.sqr().add_ref(&self.im.sqr())
    }

    pub fn abs(&self) -> Result<Ball> {
        self.norm_sqr().sqrt()
    }

    /// Widens both components by `r` (a disc of radius `r` fits inside).
    pub fn add_error(&self, r: &rug::Float) -> ComplexBall {
        ComplexBall { re: self.re.add_error(r), im: self.im.add_error(r) }
    }
}
