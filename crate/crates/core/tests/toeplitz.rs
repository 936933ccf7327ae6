use proptest::prelude::*;
use pfzeta::numerics::{Real, SignTag};
use pfzeta::toeplitz::{bruteforce_minors, consecutive_scan, default_bound, fekete_check, toeplitz_minor, tp_matrix, ScanConfig, SequenceWindow};
use rug::ops::Pow;
use rug::Rational;

fn exact(v: Real) -> Rational {
    match v {
        Real::Exact(q) => q,
        Real::Approx(_) => panic!("expected an exact value"),
    }
}

fn rational() -> impl Strategy<Value = Rational> {
    (-20i64..21, 1i64..7).prop_map(|(a, b)| Rational::from((a, b)))
}

fn positive_rational() -> impl Strategy<Value = Rational> {
    (1i64..21, 1i64..7).prop_map(|(a, b)| Rational::from((a, b)))
}

/// Coefficients of prod (1 + alpha_i z).
fn real_rooted(alphas: &[Rational]) -> Vec<Rational> {
    let mut c = vec![Rational::from(1)];
    for a in alphas {
        let mut next = vec![Rational::new(); c.len() + 1];
        for (i, x) in c.iter().enumerate() {
            next[i] += x;
            next[i + 1] += Rational::from(x * a);
        }
        c = next;
    }
    c
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn minors_scale_with_radius_and_constant(
        coeffs in proptest::collection::vec(rational(), 2..7),
        r in positive_rational(),
        c in positive_rational(),
        k in 0usize..5,
        nu in 1usize..4,
    ) {
        let w = SequenceWindow::polynomial(&coeffs).unwrap();
        let base = exact(toeplitz_minor(&w, k, nu).unwrap());
        let by_r = exact(toeplitz_minor(&w.scaled(&r), k, nu).unwrap());
        let rk = r.clone().pow((k * nu) as i32);
        prop_assert_eq!(by_r, base.clone() * rk);
        let cw = SequenceWindow::polynomial(&coeffs.iter().map(|x| Rational::from(x * &c)).collect::<Vec<_>>()).unwrap();
        let by_c = exact(toeplitz_minor(&cw, k, nu).unwrap());
        prop_assert_eq!(by_c, base * c.pow(nu as i32));
    }

    #[test]
    fn geometric_windows_are_rank_one(num in 1i64..9, den in 1i64..9, nu in 2usize..6, extra in 0usize..4) {
        let g = SequenceWindow::geometric(&Rational::from((num, den)), 20);
        let k = nu - 1 + extra;
        prop_assert_eq!(toeplitz_minor(&g, k, nu).unwrap().sign().tag, SignTag::Zero);
    }

    #[test]
    fn real_rooted_products_pass_both_scans(alphas in proptest::collection::vec(positive_rational(), 1..5), m in 1usize..4) {
        let w = SequenceWindow::polynomial(&real_rooted(&alphas)).unwrap();
        let bound = default_bound(&w, m);
        let cons = consecutive_scan(&w, m, (0, bound), &ScanConfig::default(), None).unwrap();
        prop_assert!(cons.verdict.is_pass());
        let brute = bruteforce_minors(&w, m, bound, bound, 10_000_000).unwrap();
        prop_assert!(brute.verdict.is_pass());
    }

    #[test]
    fn fekete_never_reports_consecutive_without_all(
        params in proptest::collection::vec(positive_rational(), 16),
        n in 2usize..5,
        poke in 0usize..16,
        delta in rational(),
    ) {
        let need = n * (n - 1) + n;
        let mut m = tp_matrix(n, &params[..need]).unwrap();
        let r = fekete_check(&m, n).unwrap();
        prop_assert!(r.consecutive_ok && r.all_ok);
        // arbitrary perturbation: the implication must still hold
        let (i, j) = ((poke / n) % n, poke % n);
        m[i][j] += delta;
        let r = fekete_check(&m, n).unwrap();
        prop_assert!(!r.consecutive_ok || r.all_ok);
    }
}
