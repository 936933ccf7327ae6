use proptest::prelude::*;
use pfzeta::multipliers::{min_n_search, mul_coeffs, MultiplierKind, MultiplierSpec};
use pfzeta::numerics::Real;
use pfzeta::toeplitz::{consecutive_scan, general_minor, ScanConfig, SequenceWindow};
use rug::Rational;

fn exact(v: &Real) -> Rational {
    match v {
        Real::Exact(q) => q.clone(),
        Real::Approx(_) => panic!("expected exact"),
    }
}

#[test]
fn scaled_source_tends_to_the_multiplier() {
    let src = SequenceWindow::polynomial_i64(&[1, -3, 5, 2]).unwrap();
    let e = SequenceWindow::exp_series(&Rational::from(1), 10);
    let mut last = None;
    for d in [10u32, 100, 1000, 10000] {
        let spec = MultiplierSpec::scaled_source(MultiplierKind::Exp, Rational::from((1, d)));
        let w = mul_coeffs(&src, &spec, 10).unwrap();
        let gap = (0..=10)
            .map(|j| (exact(&w.coeffs()[j]) - exact(&e.coeffs()[j])).abs())
            .max()
            .unwrap();
        assert!(gap < (10, d), "epsilon 1/{d}");
        if let Some(prev) = last {
            assert!(gap < prev);
        }
        last = Some(gap);
    }
}

#[test]
fn cosh_window_is_the_even_part_of_exp() {
    let one = SequenceWindow::polynomial_i64(&[1]).unwrap();
    let c = mul_coeffs(&one, &MultiplierSpec::new(MultiplierKind::CoshSqrt, 3), 12).unwrap();
    let e = SequenceWindow::exp_series(&Rational::from(3), 24);
    for j in 0..=12 {
        assert_eq!(exact(&c.coeffs()[j]), exact(&e.coeffs()[2 * j]));
    }
    for (rows, cols) in [(vec![0, 1], vec![1, 2]), (vec![0, 2, 3], vec![1, 3, 5]), (vec![1, 2, 4], vec![3, 4, 6])] {
        let even = |v: &[usize]| v.iter().map(|i| 2 * i).collect::<Vec<_>>();
        let lhs = exact(&general_minor(&c, &rows, &cols).unwrap());
        let rhs = exact(&general_minor(&e, &even(&rows), &even(&cols)).unwrap());
        assert_eq!(lhs, rhs, "{rows:?} {cols:?}");
    }
}

#[test]
fn trivial_and_squared_exponentials() {
    let cfg = ScanConfig::default();
    let e = SequenceWindow::exp_series(&Rational::from(1), 60);
    let r = min_n_search(&e, 4, (0, 20), 3, MultiplierKind::Exp, &cfg).unwrap();
    assert_eq!(r.minimal_n, Some(0));
    let sq = mul_coeffs(&e, &MultiplierSpec::new(MultiplierKind::Exp, 1), 40).unwrap();
    let e2 = SequenceWindow::exp_series(&Rational::from(2), 40);
    assert!(sq.coeffs().iter().zip(e2.coeffs()).all(|(a, b)| exact(a) == exact(b)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn passing_order_implies_lower_orders(coeffs in proptest::collection::vec(1i64..9, 3..6), m in 2usize..4) {
        let cfg = ScanConfig::default();
        let src = SequenceWindow::polynomial_i64(&coeffs).unwrap();
        let r = min_n_search(&src, m, (0, 12), 12, MultiplierKind::Exp, &cfg).unwrap();
        if let Some(n) = r.minimal_n {
            let w = mul_coeffs(&src, &MultiplierSpec::new(MultiplierKind::Exp, n), 12 + m).unwrap();
            for lower in 1..m {
                prop_assert!(consecutive_scan(&w, lower, (0, 12), &cfg, None).unwrap().verdict.is_pass());
            }
        }
    }
}
