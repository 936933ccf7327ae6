//! Zero sectors and the PF orders they force.
//!
//! A polynomial with positive leading behaviour and no zeros in the open
//! sector `|arg z| < theta` is `PF_m` for every `m` with
//! `pi m / (m + 1) <= theta`. Conversely a `PF_m` polynomial of degree `n`
//! has no zeros in `|arg z| < pi m / (n + m - 1)`, which caps `m` at
//! `floor(theta (n - 1) / (pi - theta))`. Zeros lying exactly on the
//! boundary ray count as outside the open sector.

use rug::{Integer, Rational};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::numerics::{Ball, ComplexBall, Real};
use crate::toeplitz::{SequenceWindow, WindowSource};

/// An angle in radians: an exact rational multiple of pi, or a ball.
#[derive(Clone, Debug, PartialEq)]
pub enum Angle {
    PiFraction(Rational),
    Approx(Ball),
}

impl Angle {
    pub fn pi() -> Angle {
        Angle::PiFraction(Rational::from(1))
    }

    pub fn to_ball(&self, prec: u32) -> Ball {
        match self {
            Angle::PiFraction(q) => Ball::pi(prec).mul_rational(q),
            Angle::Approx(b) => b.clone(),
        }
    }

    /// The angle divided by pi.
    pub fn over_pi(&self, prec: u32) -> Ball {
        match self {
            Angle::PiFraction(q) => Ball::from_rational(q, prec),
            Angle::Approx(b) => b.div_ref(&Ball::pi(prec.max(b.prec()))).expect("pi is nonzero"),
        }
    }

    /// `min(self, other)`, exact when both sides are exact.
    fn min(&self, other: &Angle, prec: u32) -> Angle {
        match (self, other) {
            (Angle::PiFraction(a), Angle::PiFraction(b)) => Angle::PiFraction(a.clone().min(b.clone())),
            _ => Angle::Approx(self.to_ball(prec).min(&other.to_ball(prec))),
        }
    }
}

/// A single zero `z != 0` of a real polynomial.
#[derive(Clone, Debug, PartialEq)]
pub enum Zero {
    /// `modulus * e^{i pi arg_pi}` with `-1 < arg_pi <= 1`.
    Polar { modulus: Rational, arg_pi: Rational },
    Rect { re: Rational, im: Rational },
    Approx(ComplexBall),
}

impl Zero {
    pub fn real(x: Rational) -> Zero {
        Zero::Rect { re: x, im: Rational::new() }
    }

    pub fn rect_i64(re: i64, im: i64) -> Zero {
        Zero::Rect { re: Rational::from(re), im: Rational::from(im) }
    }

    /// `|arg z|` in `[0, pi]`.
    pub fn abs_arg(&self, prec: u32) -> Result<Angle> {
        match self {
            Zero::Polar { arg_pi, .. } => Ok(Angle::PiFraction(arg_pi.clone().abs())),
            Zero::Rect { re, im } => {
                let im_abs = im.clone().abs();
                let exact = if im_abs == 0 {
                    Some(if *re > 0 { Rational::new() } else { Rational::from(1) })
                } else if *re == 0 {
                    Some(Rational::from((1, 2)))
                } else if im_abs == re.clone().abs() {
                    Some(if *re > 0 { Rational::from((1, 4)) } else { Rational::from((3, 4)) })
                } else {
                    None
                };
                match exact {
                    Some(q) => Ok(Angle::PiFraction(q)),
                    None => Ok(Angle::Approx(Ball::atan2(
                        &Ball::from_rational(&im_abs, prec),
                        &Ball::from_rational(re, prec),
                    )?)),
                }
            }
            Zero::Approx(z) => Ok(Angle::Approx(Ball::atan2(&z.im.abs(), &z.re)?)),
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            Zero::Polar { modulus, .. } => *modulus == 0,
            Zero::Rect { re, im } => *re == 0 && *im == 0,
            Zero::Approx(z) => z.re.contains_zero() && z.im.contains_zero(),
        }
    }

    /// `None` when the imaginary part may vanish, else its sign.
    fn im_sign(&self) -> Option<bool> {
        match self {
            Zero::Polar { arg_pi, .. } => {
                if *arg_pi == 0 || *arg_pi == 1 {
                    None
                } else {
                    Some(*arg_pi > 0)
                }
            }
            Zero::Rect { im, .. } => {
                if *im == 0 {
                    None
                } else {
                    Some(*im > 0)
                }
            }
            Zero::Approx(z) => {
                if z.im.contains_zero() {
                    None
                } else {
                    Some(z.im.is_positive())
                }
            }
        }
    }

    fn is_conjugate_of(&self, other: &Zero) -> bool {
        match (self, other) {
            (Zero::Polar { modulus: a, arg_pi: p }, Zero::Polar { modulus: b, arg_pi: q }) => {
                a == b && Rational::from(p + q) == 0
            }
            (Zero::Rect { re: a, im: p }, Zero::Rect { re: b, im: q }) => a == b && Rational::from(p + q) == 0,
            (Zero::Approx(a), Zero::Approx(b)) => a.re.overlaps(&b.re) && a.im.overlaps(&b.im.neg()),
            _ => false,
        }
    }
}

/// `cos(pi q)` when it is rational.
fn rational_cos_pi(q: &Rational) -> Option<Rational> {
    let (_, turns) = Rational::from(q / 2).fract_floor(Integer::new());
    let r = q.clone() - Rational::from(turns * 2);
    let table: [((i32, i32), (i32, i32)); 7] = [
        ((0, 1), (1, 1)),
        ((1, 3), (1, 2)),
        ((1, 2), (0, 1)),
        ((2, 3), (-1, 2)),
        ((1, 1), (-1, 1)),
        ((4, 3), (-1, 2)),
        ((3, 2), (0, 1)),
    ];
    if r == (5, 3) {
        return Some(Rational::from((1, 2)));
    }
    table.iter().find(|(a, _)| r == *a).map(|(_, c)| Rational::from(*c))
}

/// One real factor of `prod (1 - z / z_k)`: `1 + b z` or `1 + b z + c z^2`.
enum Factor {
    Linear(Real),
    Quadratic(Real, Real),
}

/// A multiset of nonzero zeros closed under complex conjugation.
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroSet {
    zeros: Vec<Zero>,
}

impl ZeroSet {
    pub fn new(zeros: Vec<Zero>) -> Result<ZeroSet> {
        if zeros.iter().any(Zero::is_zero) {
            return Err(Error::Invalid("zeros must be nonzero".into()));
        }
        let set = ZeroSet { zeros };
        set.pairing()?;
        Ok(set)
    }

    pub fn empty() -> ZeroSet {
        ZeroSet { zeros: Vec::new() }
    }

    pub fn zeros(&self) -> &[Zero] {
        &self.zeros
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    /// Real zeros on their own, the rest matched into conjugate pairs.
    fn pairing(&self) -> Result<(Vec<usize>, Vec<(usize, usize)>)> {
        let mut reals = Vec::new();
        let mut uppers = Vec::new();
        let mut lowers = Vec::new();
        for (i, z) in self.zeros.iter().enumerate() {
            match z.im_sign() {
                None => reals.push(i),
                Some(true) => uppers.push(i),
                Some(false) => lowers.push(i),
            }
        }
        let mut used = vec![false; lowers.len()];
        let mut pairs = Vec::new();
        for &u in &uppers {
            let partner = lowers
                .iter()
                .enumerate()
                .find(|&(j, &l)| !used[j] && self.zeros[u].is_conjugate_of(&self.zeros[l]));
            match partner {
                Some((j, &l)) => {
                    used[j] = true;
                    pairs.push((u, l));
                }
                None => return Err(Error::Invalid(format!("zero #{u} has no conjugate partner"))),
            }
        }
        if let Some(j) = used.iter().position(|u| !u) {
            return Err(Error::Invalid(format!("zero #{} has no conjugate partner", lowers[j])));
        }
        for &i in &reals {
            if let Zero::Approx(z) = &self.zeros[i] {
                if !z.im.is_exact_zero() {
                    return Err(Error::Invalid(format!("zero #{i} is not certainly real nor paired")));
                }
            }
        }
        Ok((reals, pairs))
    }

    fn factors(&self, prec: u32) -> Result<Vec<Factor>> {
        let (reals, pairs) = self.pairing()?;
        let mut out = Vec::with_capacity(reals.len() + pairs.len());
        for i in reals {
            let b = match &self.zeros[i] {
                Zero::Polar { modulus, arg_pi } => {
                    let x = if *arg_pi == 0 { modulus.clone() } else { -modulus.clone() };
                    Real::Exact(-x.recip())
                }
                Zero::Rect { re, .. } => Real::Exact(-re.clone().recip()),
                Zero::Approx(z) => Real::Approx(Ball::one(prec).div_ref(&z.re)?.neg()),
            };
            out.push(Factor::Linear(b));
        }
        for (u, _) in pairs {
            // (1 - z/w)(1 - z/conj w) = 1 - 2 Re(w)/|w|^2 z + z^2/|w|^2
            let (b, c) = match &self.zeros[u] {
                Zero::Polar { modulus, arg_pi } => {
                    let c = Rational::from(modulus * modulus).recip();
                    let b = match rational_cos_pi(arg_pi) {
                        Some(cos) => Real::Exact((-2 * cos) / modulus.clone()),
                        None => {
                            let cos = Ball::pi(prec).mul_rational(arg_pi).cos();
                            Real::Approx(cos.mul_rational(&(Rational::from(-2) / modulus.clone())))
                        }
                    };
                    (b, Real::Exact(c))
                }
                Zero::Rect { re, im } => {
                    let n2 = Rational::from(re * re) + Rational::from(im * im);
                    (Real::Exact((-2 * re.clone()) / n2.clone()), Real::Exact(n2.recip()))
                }
                Zero::Approx(z) => {
                    let n2 = z.norm_sqr();
                    let c = Ball::one(prec).div_ref(&n2)?;
                    (Real::Approx(z.re.mul_2exp(1).neg().mul_ref(&c)), Real::Approx(c))
                }
            };
            out.push(Factor::Quadratic(b, c));
        }
        Ok(out)
    }
}

/// Coefficients of `prod (1 - z / z_k)`, normalised so the constant term is 1.
pub fn poly_from_zeros(zs: &ZeroSet, prec: u32) -> Result<SequenceWindow> {
    let mut coeffs = vec![Real::from_i64(1)];
    for f in zs.factors(prec)? {
        let (b, c) = match f {
            Factor::Linear(b) => (b, None),
            Factor::Quadratic(b, c) => (b, Some(c)),
        };
        let extra = if c.is_some() { 2 } else { 1 };
        let mut next = vec![Real::zero(); coeffs.len() + extra];
        for (i, a) in coeffs.iter().enumerate() {
            next[i] = next[i].add(a);
            next[i + 1] = next[i + 1].add(&a.mul(&b));
            if let Some(c) = &c {
                next[i + 2] = next[i + 2].add(&a.mul(c));
            }
        }
        coeffs = next;
    }
    SequenceWindow::new(coeffs, WindowSource::Polynomial)
}

/// `min |arg z_k|`; pi for the empty set.
pub fn sector_of_zeros(zs: &ZeroSet, prec: u32) -> Result<Angle> {
    let mut best = Angle::pi();
    for z in &zs.zeros {
        best = best.min(&z.abs_arg(prec)?, prec);
    }
    Ok(best)
}

/// A PF order bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    Finite(u64),
    Infinite,
    /// The bound lies in `lo..=hi` (`hi = None`: possibly infinite).
    Undetermined { lo: u64, hi: Option<u64> },
}

impl Order {
    pub fn is_determined(&self) -> bool {
        !matches!(self, Order::Undetermined { .. })
    }

    /// `self <= m` certainly holds.
    pub fn at_most(&self, m: u64) -> bool {
        match self {
            Order::Finite(v) => *v <= m,
            Order::Infinite => false,
            Order::Undetermined { hi, .. } => hi.is_some_and(|h| h <= m),
        }
    }

    /// `self >= m` certainly holds.
    pub fn at_least(&self, m: u64) -> bool {
        match self {
            Order::Finite(v) => *v >= m,
            Order::Infinite => true,
            Order::Undetermined { lo, .. } => *lo >= m,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Order::Finite(v) => json!(v),
            Order::Infinite => json!("inf"),
            Order::Undetermined { lo, hi } => json!({"undetermined": {"lo": lo, "hi": hi.map_or(json!("inf"), |h| json!(h))}}),
        }
    }
}

/// Orders implied by a zero-free sector of opening `theta`.
#[derive(Clone, Debug)]
pub struct SectorVerdict {
    pub theta: Angle,
    /// Polynomial degree; `None` for an entire function.
    pub degree: Option<usize>,
    /// Largest `m` with `pi m / (m + 1) <= theta`.
    pub m_sufficient: Order,
    /// Upper bound on the PF order from the necessary sector.
    pub m_ceiling: Order,
}

impl SectorVerdict {
    pub fn to_json(&self, prec: u32) -> Value {
        let t = self.theta.to_ball(prec);
        let tp = self.theta.over_pi(prec);
        json!({
            "degree": self.degree,
            "theta": t.mid_decimal(),
            "theta_rad": t.rad_decimal(),
            "theta_over_pi": tp.mid_decimal(),
            "m_sufficient": self.m_sufficient.to_json(),
            "m_ceiling": self.m_ceiling.to_json(),
        })
    }
}

fn exact_floor(q: &Rational) -> u64 {
    let (_, f) = q.clone().fract_floor(Integer::new());
    f.to_u64().unwrap_or(u64::MAX)
}

/// `floor(x)` for a nonnegative ball, or the straddled range.
fn ball_floor(x: &Ball) -> Order {
    let lo = x.lower().max(&rug::Float::new(x.prec())).floor().to_integer().and_then(|i| i.to_u64());
    let hi = x.upper().floor().to_integer().and_then(|i| i.to_u64());
    match (lo, hi) {
        (Some(a), Some(b)) if a == b => Order::Finite(a),
        (a, b) => Order::Undetermined { lo: a.unwrap_or(0), hi: b },
    }
}

/// PF order bounds from a zero-free sector `|arg z| < theta`, `0 <= theta <= pi`.
pub fn pf_bounds(degree: Option<usize>, theta: &Angle, prec: u32) -> Result<SectorVerdict> {
    let (m_sufficient, m_ceiling) = match theta {
        Angle::PiFraction(a) => {
            if *a < 0 || *a > 1 {
                return Err(Error::Domain(format!("sector angle {a}*pi outside [0, pi]")));
            }
            if *a == 1 {
                (Order::Infinite, Order::Infinite)
            } else {
                let x = a.clone() / (Rational::from(1) - a.clone());
                let ceil = match degree {
                    Some(n) => Order::Finite(exact_floor(&(x.clone() * Rational::from(n.saturating_sub(1))))),
                    None => Order::Infinite,
                };
                (Order::Finite(exact_floor(&x)), ceil)
            }
        }
        Angle::Approx(t) => {
            let pi = Ball::pi(prec.max(t.prec()));
            if t.is_negative() || t.gt(&pi) {
                return Err(Error::Domain("sector angle outside [0, pi]".into()));
            }
            let gap = pi.sub_ref(t);
            if gap.is_positive() {
                let x = t.div_ref(&gap)?;
                let ceil = match degree {
                    Some(n) => ball_floor(&x.mul_i64(n.saturating_sub(1) as i64)),
                    None => Order::Infinite,
                };
                (ball_floor(&x), ceil)
            } else {
                let lo = |o: Order| match o {
                    Order::Finite(v) | Order::Undetermined { lo: v, .. } => v,
                    Order::Infinite => u64::MAX,
                };
                let x_lo = t.lower();
                let g_hi = gap.upper();
                let lower = if g_hi > 0 {
                    lo(ball_floor(&Ball::exact(rug::Float::with_val(prec, &x_lo / &g_hi))))
                } else {
                    0
                };
                let ceil = match degree {
                    Some(_) => Order::Undetermined { lo: 0, hi: None },
                    None => Order::Infinite,
                };
                (Order::Undetermined { lo: lower, hi: None }, ceil)
            }
        }
    };
    Ok(SectorVerdict { theta: theta.clone(), degree, m_sufficient, m_ceiling })
}

/// Opening of the zero-free sector of `xi(sqrt z + 1/2)` when `xi` has no
/// zeros with `|Im s| < h` in the critical strip: `pi - 2 atan(1/(2h))`.
pub fn zero_free_angle_from_height(h: &Rational, prec: u32) -> Result<Angle> {
    if *h <= 0 {
        return Err(Error::Domain("height must be positive".into()));
    }
    if *h == Rational::from((1, 2)) {
        return Ok(Angle::PiFraction(Rational::from((1, 2))));
    }
    let wp = prec + 16;
    let t = Ball::from_rational(&(Rational::from(2) * h.clone()).recip(), wp).atan();
    Ok(Angle::Approx(Ball::pi(wp).sub_ref(&t.mul_2exp(1)).set_prec(prec)))
}

/// Height of the zero-free rectangle used for the main construction.
pub const HEIGHT_RECTANGLE: (i64, i64) = (14, 1);
/// Height of the first nontrivial zero, truncated.
pub const HEIGHT_FIRST_ZERO: (i64, i64) = (14_134_725, 1_000_000);

/// Named height presets.
pub fn height_preset(name: &str) -> Option<Rational> {
    match name {
        "rectangle" => Some(Rational::from(HEIGHT_RECTANGLE)),
        "first-zero" => Some(Rational::from(HEIGHT_FIRST_ZERO)),
        _ => None,
    }
}

/// The PF order claimed for the entire function from the rectangle height.
pub const CLAIMED_ORDER: u64 = 44;

/// Sector report for a height: angle, both bounds for the entire function,
/// and whether the sufficient order agrees with [`CLAIMED_ORDER`].
pub fn height_report(h: &Rational, prec: u32) -> Result<Value> {
    let theta = zero_free_angle_from_height(h, prec)?;
    let v = pf_bounds(None, &theta, prec)?;
    let mut doc = v.to_json(prec);
    doc["h"] = json!(h.to_string());
    doc["h_decimal"] = json!(h.to_f64());
    doc["claimed_order"] = json!(CLAIMED_ORDER);
    doc["matches_claim"] = json!(v.m_sufficient == Order::Finite(CLAIMED_ORDER));
    Ok(doc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact_coeffs(w: &SequenceWindow) -> Vec<Rational> {
        w.coeffs()
            .iter()
            .map(|c| match c {
                Real::Exact(q) => q.clone(),
                Real::Approx(_) => panic!("expected exact"),
            })
            .collect()
    }

    fn polar(m: i64, num: i64, den: i64) -> Zero {
        Zero::Polar { modulus: Rational::from(m), arg_pi: Rational::from((num, den)) }
    }

    #[test]
    fn products_of_small_zero_sets() {
        let zs = ZeroSet::new(vec![Zero::rect_i64(-1, 0), Zero::rect_i64(-1, 0)]).unwrap();
        assert_eq!(exact_coeffs(&poly_from_zeros(&zs, 64).unwrap()), [1, 2, 1].map(Rational::from));
        let zs = ZeroSet::new(vec![polar(1, 2, 3), polar(1, -2, 3)]).unwrap();
        assert_eq!(exact_coeffs(&poly_from_zeros(&zs, 64).unwrap()), [1, 1, 1].map(Rational::from));
        let zs = ZeroSet::new(vec![polar(1, 1, 2), polar(1, -1, 2)]).unwrap();
        assert_eq!(exact_coeffs(&poly_from_zeros(&zs, 64).unwrap()), [1, 0, 1].map(Rational::from));
    }

    #[test]
    fn unmatched_zero_rejected() {
        assert!(ZeroSet::new(vec![Zero::rect_i64(1, 2)]).is_err());
        assert!(ZeroSet::new(vec![Zero::rect_i64(1, 2), Zero::rect_i64(1, 3)]).is_err());
        assert!(ZeroSet::new(vec![Zero::rect_i64(0, 0)]).is_err());
    }

    #[test]
    fn approximate_pair_matches_exact() {
        let w = Ball::pi(128).mul_rational(&Rational::from((3, 5)));
        let z = ComplexBall::from_polar(&Ball::from_i64(2, 128), &w);
        let zs = ZeroSet::new(vec![Zero::Approx(z.clone()), Zero::Approx(z.conj())]).unwrap();
        let p = poly_from_zeros(&zs, 128).unwrap();
        let zs2 = ZeroSet::new(vec![polar(2, 3, 5), polar(2, -3, 5)]).unwrap();
        let q = poly_from_zeros(&zs2, 128).unwrap();
        for (a, b) in p.coeffs().iter().zip(q.coeffs()) {
            assert!(a.to_ball(128).overlaps(&b.to_ball(128)));
        }
    }

    #[test]
    fn sector_angles() {
        let zs = ZeroSet::new(vec![polar(3, 2, 3), polar(3, -2, 3)]).unwrap();
        assert_eq!(sector_of_zeros(&zs, 64).unwrap(), Angle::PiFraction(Rational::from((2, 3))));
        let zs = ZeroSet::new(vec![Zero::rect_i64(-5, 0)]).unwrap();
        assert_eq!(sector_of_zeros(&zs, 64).unwrap(), Angle::pi());
        assert_eq!(sector_of_zeros(&ZeroSet::empty(), 64).unwrap(), Angle::pi());
        let zs = ZeroSet::new(vec![Zero::rect_i64(-1, 2), Zero::rect_i64(-1, -2)]).unwrap();
        let a = sector_of_zeros(&zs, 64).unwrap().to_ball(64);
        assert!((a.to_f64() - (2f64).atan2(-1.0)).abs() < 1e-15);
    }

    #[test]
    fn bounds_from_exact_angles() {
        let v = pf_bounds(Some(2), &Angle::PiFraction(Rational::from((2, 3))), 64).unwrap();
        assert_eq!((v.m_sufficient, v.m_ceiling), (Order::Finite(2), Order::Finite(2)));
        let v = pf_bounds(Some(4), &Angle::PiFraction(Rational::from((1, 2))), 64).unwrap();
        assert_eq!((v.m_sufficient, v.m_ceiling), (Order::Finite(1), Order::Finite(3)));
        let v = pf_bounds(Some(3), &Angle::pi(), 64).unwrap();
        assert_eq!((v.m_sufficient, v.m_ceiling), (Order::Infinite, Order::Infinite));
        let v = pf_bounds(None, &Angle::PiFraction(Rational::from((43, 44))), 64).unwrap();
        assert_eq!(v.m_sufficient, Order::Finite(43));
    }

    #[test]
    fn ball_angle_on_boundary_is_undetermined() {
        let t = Angle::Approx(Ball::pi(128).mul_rational(&Rational::from((2, 3))));
        let v = pf_bounds(Some(2), &t, 128).unwrap();
        assert!(!v.m_sufficient.is_determined());
        assert!(v.m_sufficient.at_least(1) && v.m_sufficient.at_most(2));
    }

    #[test]
    fn height_fourteen() {
        let t = zero_free_angle_from_height(&Rational::from(14), 256).unwrap().to_ball(256);
        let oracle = Ball::from_i64(28, 256).atan().mul_2exp(1);
        assert!(t.overlaps(&oracle));
        assert!(t.rad() < &1e-60);
        assert!((t.to_f64() - 3.0701944).abs() < 1e-7);
        for h in [Rational::from(14), height_preset("first-zero").unwrap()] {
            let th = zero_free_angle_from_height(&h, 256).unwrap();
            assert_eq!(pf_bounds(None, &th, 256).unwrap().m_sufficient, Order::Finite(43));
        }
        let doc = height_report(&Rational::from(14), 256).unwrap();
        assert_eq!(doc["matches_claim"], json!(false));
    }

    #[test]
    fn height_limits() {
        let t = zero_free_angle_from_height(&Rational::from((1, 2)), 64).unwrap();
        assert_eq!(t, Angle::PiFraction(Rational::from((1, 2))));
        let t = zero_free_angle_from_height(&Rational::from(1_000_000), 128).unwrap().to_ball(128);
        assert!((t.to_f64() - std::f64::consts::PI).abs() < 2e-6);
        assert!(zero_free_angle_from_height(&Rational::new(), 64).is_err());
    }
}
