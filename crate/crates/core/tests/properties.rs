use convsq::arith::{gcd, jacobi_symbol, mod_pow};
use convsq::catalog::{parse_expr, Expr};
use convsq::gaussians::{gaussian_function, GaussianParams};
use convsq::group::{conj_fourier, convolve, criticality_residual, fourier, reindex, relative_criticality_residual};
use convsq::{Complex64, GroupFunction};
use proptest::prelude::*;

fn odd_modulus() -> impl Strategy<Value = u64> {
    (1u64..=20).prop_map(|k| 2 * k + 1)
}

fn function(d: u64) -> impl Strategy<Value = GroupFunction> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), d as usize)
        .prop_map(|v| GroupFunction::new(v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect()).unwrap())
}

fn sized() -> impl Strategy<Value = (GroupFunction, GroupFunction)> {
    odd_modulus().prop_flat_map(|d| (function(d), function(d)))
}

fn unit_of(d: u64, seed: u64) -> i64 {
    (seed % d..seed % d + d).map(|k| k % d).find(|&k| k != 0 && gcd(k, d) == 1).unwrap() as i64
}

/// Euler's criterion at a prime modulus.
fn legendre(n: i64, p: u64) -> i8 {
    let r = mod_pow(n.rem_euclid(p as i64) as u64, (p - 1) / 2, p);
    match r {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        (0i64..50).prop_map(Expr::Int),
        Just(Expr::I),
        (2u64..30).prop_map(|n| Expr::Sqrt(Box::new(Expr::Int(n as i64)))),
    ]
}

fn expr() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
        ]
    })
}

proptest! {
    #[test]
    fn conj_fourier_is_an_involution(f in odd_modulus().prop_flat_map(function)) {
        prop_assert!(conj_fourier(&conj_fourier(&f)).max_abs_diff(&f).unwrap() < 1e-12);
    }

    #[test]
    fn fourier_preserves_inner_products((f, g) in sized()) {
        let (ff, fg) = (fourier(&f), fourier(&g));
        let lhs: Complex64 = ff.values().iter().zip(fg.values()).map(|(a, b)| a * b.conj()).sum();
        let rhs: Complex64 = f.values().iter().zip(g.values()).map(|(a, b)| a * b.conj()).sum();
        prop_assert!((lhs - rhs).norm() < 1e-11);
    }

    #[test]
    fn fourier_turns_products_into_convolutions((f, g) in sized()) {
        let d = f.modulus() as f64;
        let lhs = fourier(&f.pointwise_mul(&g).unwrap());
        let rhs = convolve(&fourier(&f), &fourier(&g)).unwrap().scale(Complex64::new(d.sqrt().recip(), 0.0));
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-11);
    }

    #[test]
    fn convolution_commutes((f, g) in sized()) {
        prop_assert!(convolve(&f, &g).unwrap().max_abs_diff(&convolve(&g, &f).unwrap()).unwrap() < 1e-12);
    }

    #[test]
    fn reindexing_preserves_criticality(f in odd_modulus().prop_flat_map(function), seed in any::<u64>(), re in -3.0f64..3.0, im in -3.0f64..3.0) {
        let q = unit_of(f.modulus(), seed);
        let l = Complex64::new(re, im);
        let g = reindex(&f, q).unwrap();
        prop_assert!((criticality_residual(&f, l) - criticality_residual(&g, l)).abs() < 1e-10);
        let back = reindex(&g, convsq::arith::mod_inverse(q, f.modulus()).unwrap() as i64).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn gaussians_are_critical(d in odd_modulus(), seed in any::<u64>(), v in -50i64..50) {
        let u = unit_of(d, seed);
        let p = GaussianParams::new(d, u, v).unwrap();
        prop_assert!(relative_criticality_residual(&gaussian_function(&p), p.critical_value()) < 1e-9);
    }

    #[test]
    fn jacobi_symbol_matches_euler_at_primes(n in -500i64..500, idx in 0usize..10) {
        let p = [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31][idx];
        prop_assert_eq!(jacobi_symbol(n, p as i64).unwrap(), legendre(n, p));
    }

    #[test]
    fn jacobi_symbol_is_multiplicative_in_the_modulus(n in -500i64..500, a in odd_modulus(), b in odd_modulus()) {
        let ab = (a * b) as i64;
        prop_assert_eq!(jacobi_symbol(n, ab).unwrap(), jacobi_symbol(n, a as i64).unwrap() * jacobi_symbol(n, b as i64).unwrap());
    }

    #[test]
    fn expr_display_round_trips(e in expr()) {
        let text = e.to_string();
        let back = parse_expr(&text).unwrap();
        let (x, y) = (e.eval(None).unwrap(), back.eval(None).unwrap());
        prop_assert!((x - y).norm() <= 1e-9 * (1.0 + x.norm()), "{} -> {} vs {}", text, x, y);
        prop_assert_eq!(back.to_string(), text);
    }
}
