use proptest::prelude::*;
use pfzeta::numerics::det::exact_rational_ball;
use pfzeta::numerics::{ball_det, certified_sign, exact_det, Ball, PrecisionPolicy, SignTag};
use rug::Rational;

#[derive(Clone, Debug)]
enum Expr {
    Leaf(i64, i64),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
}

fn expr() -> impl Strategy<Value = Expr> {
    let leaf = (-50i64..50, 1i64..20).prop_map(|(n, d)| Expr::Leaf(n, d));
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
            (inner.clone(), inner).prop_map(|(a, b)| Expr::Div(Box::new(a), Box::new(b))),
        ]
    })
}

/// Exact value and ball enclosure; `None` on division by something that may vanish.
fn eval(e: &Expr, prec: u32) -> Option<(Rational, Ball)> {
    Some(match e {
        Expr::Leaf(n, d) => {
            let q = Rational::from((*n, *d));
            let b = Ball::from_rational(&q, prec);
            (q, b)
        }
        Expr::Add(a, b) => {
            let (x, bx) = eval(a, prec)?;
            let (y, by) = eval(b, prec)?;
            (x + y, bx.add_ref(&by))
        }
        Expr::Sub(a, b) => {
            let (x, bx) = eval(a, prec)?;
            let (y, by) = eval(b, prec)?;
            (x - y, bx.sub_ref(&by))
        }
        Expr::Mul(a, b) => {
            let (x, bx) = eval(a, prec)?;
            let (y, by) = eval(b, prec)?;
            (x * y, bx.mul_ref(&by))
        }
        Expr::Div(a, b) => {
            let (x, bx) = eval(a, prec)?;
            let (y, by) = eval(b, prec)?;
            if y == 0 {
                return None;
            }
            let q = bx.div_ref(&by).ok()?;
            (x / y, q)
        }
    })
}

fn small_matrix(n: usize) -> impl Strategy<Value = Vec<Vec<Rational>>> {
    proptest::collection::vec(proptest::collection::vec((-9i64..10, 1i64..5), n), n)
        .prop_map(|rows| rows.into_iter().map(|r| r.into_iter().map(|(a, b)| Rational::from((a, b))).collect()).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn ball_encloses_exact_value(e in expr()) {
        if let Some((q, b)) = eval(&e, 64) {
            prop_assert!(b.contains_rational(&q), "{q} not in {:?}", b);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ball_and_exact_determinants_agree(m in small_matrix(4)) {
        let exact = exact_det(&m).unwrap();
        let balls: Vec<Vec<Ball>> = m.iter().map(|r| r.iter().map(|q| Ball::from_rational(q, 128)).collect()).collect();
        let b = ball_det(&balls).unwrap();
        prop_assert!(b.contains_rational(&exact));
    }

    #[test]
    fn certified_sign_never_contradicts_exact(num in -1000i64..1000, den in 1i64..1000, noise in 0u32..200) {
        let q = Rational::from((num, den));
        // a ball around q whose radius can hide the sign at low precision
        let start = Ball::from_rational(&q, 64).add_error(&(rug::Float::with_val(64, 1) >> noise));
        let policy = PrecisionPolicy::new(64, 1024).unwrap();
        let s = certified_sign(&start, &policy, |bits| Some(exact_rational_ball(&q, bits)));
        let truth = if q > 0 { SignTag::Positive } else if q < 0 { SignTag::Negative } else { SignTag::Zero };
        prop_assert!(s.tag == truth || s.tag == SignTag::Undetermined);
        prop_assert!(s.tag.is_resolved());
    }
}
