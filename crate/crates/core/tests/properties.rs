mod common;

use edl_core::constant_term::{
    constant_term, dyson_constant_term, poly_mul, poly_pow, LaurentPolynomial, DEFAULT_TERM_BUDGET,
};
use edl_core::integrals::selberg_closed;
use edl_core::quadrature::GaussLegendre;
use edl_core::root_systems::{build_nonreduced, MultiplicityFunction, Orbit, RootFamily};
use num_bigint::BigInt;
use proptest::prelude::*;

fn small_poly(rank: usize) -> impl Strategy<Value = LaurentPolynomial> {
    prop::collection::vec((prop::collection::vec(-3i32..=3, rank), -5i64..=5), 0..6).prop_map(move |terms| {
        let mut p = LaurentPolynomial::zero(rank);
        for (e, c) in terms {
            p.add_term(e, BigInt::from(c));
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn laurent_product_commutes_and_associates(p in small_poly(2), q in small_poly(2), r in small_poly(2)) {
        prop_assert_eq!(poly_mul(&p, &q).unwrap(), poly_mul(&q, &p).unwrap());
        let left = poly_mul(&poly_mul(&p, &q).unwrap(), &r).unwrap();
        let right = poly_mul(&p, &poly_mul(&q, &r).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn single_root_factor_is_central_binomial(k in 0u32..12) {
        let ct = poly_pow(&LaurentPolynomial::root_factor(&[1]), k).unwrap().constant_term();
        prop_assert_eq!(ct.to_string(), common::binomial(2 * k as u64, k as u64).to_string());
    }

    #[test]
    fn gauss_legendre_is_exact_to_degree_2n_minus_1(n in 1usize..20, coeffs in prop::collection::vec(-3.0f64..3.0, 1..40)) {
        let rule = GaussLegendre::<f64>::new(n);
        let coeffs = &coeffs[..coeffs.len().min(2 * n)];
        let got = rule.integrate(-1.0, 2.0, |x| coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c));
        let exact: f64 = coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * (2f64.powi(i as i32 + 1) - (-1f64).powi(i as i32 + 1)) / (i + 1) as f64)
            .sum();
        prop_assert!((got - exact).abs() <= 1e-9 * (1.0 + exact.abs()), "{} vs {}", got, exact);
    }

    #[test]
    fn selberg_rank_one_is_beta(a in 0.1f64..8.0, b in 0.1f64..8.0, g in 0.1f64..3.0) {
        let s = selberg_closed(1, a, b, g).unwrap().value;
        let oracle = statrs::function::beta::beta(a, b);
        prop_assert!(((s - oracle) / oracle).abs() < 1e-11);
    }

    #[test]
    fn bc1_engine_matches_expansion(a in 0u32..5, b in 0u32..5) {
        let sys = build_nonreduced(RootFamily::parse("BC1").unwrap(), MultiplicityFunction::new()).unwrap();
        let k = MultiplicityFunction::new().with(Orbit::Long, a).with(Orbit::DoubleLong, b);
        let engine = constant_term(&sys, &k, DEFAULT_TERM_BUDGET).unwrap();
        let oracle = common::ct_by_expansion(1, &common::type_bc_roots(1, 0, a, b));
        prop_assert_eq!(engine.to_string(), oracle.to_string());
    }
}

#[test]
fn dyson_formula_matches_expansion_on_a_grid() {
    for n in 1..=4usize {
        for k in 0..=3u32 {
            let oracle = common::ct_by_expansion(n, &common::type_a_roots(n, k));
            assert_eq!(dyson_constant_term(n as u32, k).to_string(), oracle.to_string(), "n={n} k={k}");
        }
    }
}
