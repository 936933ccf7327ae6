use proptest::prelude::*;
use pfzeta::numerics::{Ball, Real};
use pfzeta::sector::{pf_bounds, poly_from_zeros, sector_of_zeros, zero_free_angle_from_height, Order, Zero, ZeroSet};
use pfzeta::toeplitz::{bruteforce_minors, default_bound, SequenceWindow, WindowSource};
use rug::Rational;

const CAP: usize = 4;

/// Largest `m <= cap` passing the brute-force scan, `None` if undecided.
fn brute_order(w: &SequenceWindow, cap: usize) -> Option<usize> {
    let mut order = 0;
    for m in 1..=cap {
        let b = default_bound(w, m);
        let v = bruteforce_minors(w, m, b, b, 50_000_000).unwrap();
        if v.verdict.is_pass() {
            order = m;
        } else if v.verdict.is_fail() {
            break;
        } else {
            return None;
        }
    }
    Some(order)
}

fn zero_set() -> impl Strategy<Value = ZeroSet> {
    let pair = (-6i64..7, 1i64..6, 1i64..4).prop_map(|(re, im, d)| {
        let re = Rational::from((re, d));
        let im = Rational::from((im, d));
        vec![Zero::Rect { re: re.clone(), im: im.clone() }, Zero::Rect { re, im: -im }]
    });
    let real = (-6i64..7, 1i64..4)
        .prop_filter("nonzero", |(n, _)| *n != 0)
        .prop_map(|(n, d)| vec![Zero::real(Rational::from((n, d)))]);
    proptest::collection::vec(prop_oneof![2 => pair, 1 => real], 1..4)
        .prop_map(|groups| groups.into_iter().flatten().take(6).collect::<Vec<_>>())
        .prop_filter_map("conjugate closed", |z| ZeroSet::new(z).ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn sector_bounds_sandwich_brute_force(zs in zero_set()) {
        let w = poly_from_zeros(&zs, 128).unwrap();
        prop_assume!(w.is_exact());
        let theta = sector_of_zeros(&zs, 128).unwrap();
        let v = pf_bounds(Some(zs.degree()), &theta, 128).unwrap();
        let Some(order) = brute_order(&w, CAP) else { return Ok(()) };
        // soundness: the sufficient order never exceeds what brute force sees
        if order < CAP {
            prop_assert!(v.m_sufficient.at_most(order as u64), "{:?} vs {order}", v.m_sufficient);
        }
        // necessity: the ceiling is never below the observed order
        prop_assert!(v.m_ceiling.at_least(order as u64), "{:?} vs {order}", v.m_ceiling);
    }

    #[test]
    fn sufficient_order_grows_with_height(a in 1u32..4000, b in 1u32..4000) {
        let (lo, hi) = (a.min(b), a.max(b));
        let order = |h: u32| {
            let t = zero_free_angle_from_height(&Rational::from((h, 10)), 128).unwrap();
            pf_bounds(None, &t, 128).unwrap().m_sufficient
        };
        match (order(lo), order(hi)) {
            (Order::Finite(x), Order::Finite(y)) => prop_assert!(x <= y),
            (x, y) => prop_assert!(!x.is_determined() || !y.is_determined()),
        }
    }
}

#[test]
fn quadratic_family_flips_at_the_boundary() {
    let prec = 128;
    let third = Ball::pi(prec).div_i64(3);
    for j in -5i64..=5 {
        let psi = third.add_ref(&Ball::from_f64(j as f64 * 1e-2, prec));
        let c = if j == 0 { Real::Exact(Rational::from(1)) } else { Real::Approx(psi.cos().mul_2exp(1)) };
        let w = SequenceWindow::new(vec![Real::from_i64(1), c, Real::from_i64(1)], WindowSource::Polynomial).unwrap();
        let b = default_bound(&w, 2);
        let v = bruteforce_minors(&w, 2, b, b, 1_000_000).unwrap();
        assert_eq!(v.verdict.is_pass(), j <= 0, "psi offset {j}");
        assert_eq!(v.verdict.is_fail(), j > 0, "psi offset {j}");
    }
}

#[test]
fn degree_two_sharpness_from_bounds() {
    let zs = ZeroSet::new(vec![
        Zero::Polar { modulus: Rational::from(1), arg_pi: Rational::from((2, 3)) },
        Zero::Polar { modulus: Rational::from(1), arg_pi: Rational::from((-2, 3)) },
    ])
    .unwrap();
    let w = poly_from_zeros(&zs, 64).unwrap();
    assert_eq!(brute_order(&w, 3), Some(2));
    let v = pf_bounds(Some(2), &sector_of_zeros(&zs, 64).unwrap(), 64).unwrap();
    assert_eq!((v.m_sufficient, v.m_ceiling), (Order::Finite(2), Order::Finite(2)));
}
