use serde::{Deserialize, Serialize};

use super::ball::Ball;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SignTag {
    Positive,
    Negative,
    Zero,
    Undetermined,
}

impl SignTag {
    pub fn of(x: &Ball) -> SignTag {
        if x.is_exact_zero() {
            SignTag::Zero
        } else if x.is_positive() {
            SignTag::Positive
        } else if x.is_negative() {
            SignTag::Negative
        } else {
            SignTag::Undetermined
        }
    }

    pub fn is_resolved(self) -> bool {
        self != SignTag::Undetermined
    }

    /// Certified `>= 0`.
    pub fn is_nonnegative(self) -> bool {
        matches!(self, SignTag::Positive | SignTag::Zero)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SignTag::Positive => "+",
            SignTag::Negative => "-",
            SignTag::Zero => "0",
            SignTag::Undetermined => "?",
        }
    }
}

/// A sign verdict together with the precision at which it was reached.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sign {
    pub tag: SignTag,
    pub at_bits: u32,
}

impl Sign {
    pub fn of(x: &Ball) -> Sign {
        Sign { tag: SignTag::of(x), at_bits: x.prec() }
    }
}

/// Geometric precision escalation from `start_bits` up to `max_bits`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionPolicy {
    pub start_bits: u32,
    pub max_bits: u32,
    /// Escalation factor as a fraction `num / den`, strictly above one.
    pub escalation_num: u32,
    pub escalation_den: u32,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy { start_bits: 256, max_bits: 16384, escalation_num: 2, escalation_den: 1 }
    }
}

impl PrecisionPolicy {
    pub fn new(start_bits: u32, max_bits: u32) -> Result<Self> {
        PrecisionPolicy { start_bits, max_bits, ..Default::default() }.validated()
    }

    pub fn fixed(bits: u32) -> Self {
        PrecisionPolicy { start_bits: bits, max_bits: bits, ..Default::default() }
    }

    pub fn validated(self) -> Result<Self> {
        if self.start_bits == 0 || self.start_bits > self.max_bits {
            return Err(Error::Invalid(format!(
                "precision policy needs 0 < start_bits <= max_bits (got {} and {})",
                self.start_bits, self.max_bits
            )));
        }
        if self.escalation_den == 0 || self.escalation_num <= self.escalation_den {
            return Err(Error::Invalid("escalation factor must exceed 1".into()));
        }
        Ok(self)
    }

    /// The next precision after `bits`, or `None` once `max_bits` is reached.
    pub fn next(&self, bits: u32) -> Option<u32> {
        if bits >= self.max_bits {
            return None;
        }
        let num = u64::from(self.escalation_num);
        let den = u64::from(self.escalation_den);
        let next = (u64::from(bits) * num).div_ceil(den).max(u64::from(bits) + 1);
        Some(next.min(u64::from(self.max_bits)) as u32)
    }

    /// All precisions visited, starting at `start_bits`.
    pub fn ladder(&self) -> Vec<u32> {
        let mut out = vec![self.start_bits];
        while let Some(n) = self.next(*out.last().unwrap()) {
            out.push(n);
        }
        out
    }
}

/// Certified sign of `x`, recomputing at escalating precision while the ball
/// straddles zero.
pub fn certified_sign<F>(x: &Ball, policy: &PrecisionPolicy, mut recompute: F) -> Sign
where
    F: FnMut(u32) -> Option<Ball>,
{
    let mut sign = Sign::of(x);
    let mut bits = x.prec().max(policy.start_bits);
    while !sign.tag.is_resolved() {
        let Some(next) = policy.next(bits) else { break };
        bits = next;
        match recompute(bits) {
            Some(y) => sign = Sign { tag: SignTag::of(&y), at_bits: bits },
            None => break,
        }
    }
    if !sign.tag.is_resolved() {
        sign.at_bits = sign.at_bits.max(bits);
    }
    sign
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::{Float, Rational};

    #[test]
    fn clear_positive() {
        let b = Ball::new(Float::with_val(64, 3.0), &Float::with_val(30, 0.5));
        let s = certified_sign(&b, &PrecisionPolicy::default(), |_| None);
        assert_eq!(s.tag, SignTag::Positive);
    }

    #[test]
    fn straddling_zero_without_gain_is_undetermined() {
        let b = Ball::new(Float::with_val(64, 0.001), &Float::with_val(30, 0.01));
        let policy = PrecisionPolicy::fixed(64);
        let s = certified_sign(&b, &policy, |bits| Some(b.set_prec(bits)));
        assert_eq!(s.tag, SignTag::Undetermined);
        let mut calls = 0;
        let s = certified_sign(&b, &PrecisionPolicy::new(64, 1024).unwrap(), |bits| {
            calls += 1;
            Some(b.set_prec(bits))
        });
        assert_eq!(s.tag, SignTag::Undetermined);
        assert_eq!(s.at_bits, 1024);
        assert_eq!(calls, 4);
    }

    #[test]
    fn exact_negative_rational() {
        let b = Ball::from_rational(&Rational::from((-2, 3)), 128);
        assert_eq!(certified_sign(&b, &PrecisionPolicy::default(), |_| None).tag, SignTag::Negative);
    }

    #[test]
    fn exact_zero_is_zero() {
        assert_eq!(Sign::of(&Ball::zero(64)).tag, SignTag::Zero);
    }

    #[test]
    fn escalation_resolves_when_recompute_tightens() {
        // A value 2^-100 that is invisible at 64 bits of radius.
        let tiny = |bits: u32| {
            let v = Ball::one(bits).mul_2exp(-100);
            Ball::new(v.mid().clone(), &Float::with_val(30, Float::i_exp(1, 40 - bits as i32)))
        };
        let s = certified_sign(&tiny(64), &PrecisionPolicy::new(64, 512).unwrap(), |b| Some(tiny(b)));
        assert_eq!(s.tag, SignTag::Positive);
        assert_eq!(s.at_bits, 256);
    }

    #[test]
    fn ladder_is_geometric() {
        assert_eq!(PrecisionPolicy::default().ladder(), vec![256, 512, 1024, 2048, 4096, 8192, 16384]);
        assert!(PrecisionPolicy::new(512, 256).is_err());
    }
}
