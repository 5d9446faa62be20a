use proptest::prelude::*;

use neumann_witness::eigenfunction::{diagonal_symmetrize, lift_to_square, symmetrize, trace, CoefficientVector, Eigenfunction};
use neumann_witness::exact::{Domain, Edge, Rational, RectangleClass};
use neumann_witness::oracle::{boundary_min, random_eigenfunction};
use neumann_witness::spectrum::{enumerate, SpectralParam};
use neumann_witness::twosquares::{check_proposition, decompose_u64};
use neumann_witness::witness::{certificate_values, check_relation, verify_certificate, witness, CertKind};

fn fixtures() -> Vec<Domain> {
    vec![
        Domain::Rect(RectangleClass::rational(1, 1).unwrap()),
        Domain::Rect(RectangleClass::rational(2, 1).unwrap()),
        Domain::Rect(RectangleClass::rational(3, 2).unwrap()),
        Domain::Rect(RectangleClass::rational(5, 3).unwrap()),
        Domain::Rect(RectangleClass::quadratic(Rational::from(2u64)).unwrap()),
        Domain::Rect(RectangleClass::quadratic(Rational::new(5, 2).unwrap()).unwrap()),
        Domain::Square2Pi,
    ]
}

/// A random non-constant eigenfunction: fixture, eigenvalue index, seed.
fn eigenfunction() -> impl Strategy<Value = Eigenfunction> {
    eigenfunction_on(fixtures())
}

fn eigenfunction_on(domains: Vec<Domain>) -> impl Strategy<Value = Eigenfunction> {
    (0..domains.len(), 0usize..200, any::<u64>()).prop_map(move |(f, k, seed)| {
        let dom = domains[f].clone();
        let spectrum = enumerate(&dom.spectral_rect(), &SpectralParam::Exact(Rational::from(60u64))).unwrap();
        let nonzero: Vec<_> = spectrum.into_iter().filter(|(mu, _)| !mu.is_zero()).collect();
        let (mu, _) = &nonzero[k % nonzero.len()];
        random_eigenfunction(dom, mu, seed).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn certificates_verify_and_bound_the_minimum(u in eigenfunction()) {
        let cert = witness(&u).unwrap();
        prop_assert!(verify_certificate(&u, &cert, 1e-9).unwrap());
        prop_assert!(check_relation(&u, &cert, 1e-9).unwrap());
        let cmin = certificate_values(&u, &cert).unwrap().into_iter().fold(f64::INFINITY, f64::min);
        let (bmin, _) = boundary_min(&u, 2048).unwrap();
        prop_assert!(bmin <= cmin + 1e-9);
    }

    #[test]
    fn positive_scaling_keeps_points(u in eigenfunction(), alpha in 0.01f64..100.0) {
        let cert = witness(&u).unwrap();
        prop_assert_eq!(witness(&u.scaled(alpha)).unwrap().points, cert.points);
        let neg = u.scaled(-alpha);
        prop_assert!(verify_certificate(&neg, &witness(&neg).unwrap(), 1e-9).unwrap());
    }

    #[test]
    fn symmetrization_is_idempotent_and_even(u in eigenfunction_on(fixtures()[..4].to_vec())) {
        let w = symmetrize(&u).unwrap();
        prop_assert_eq!(symmetrize(&w).unwrap(), w.clone());
        prop_assert!(w.coeffs().modes().all(|m| m.m % 2 == 0 && m.n % 2 == 0));
        if !w.is_zero() {
            let lift = lift_to_square(&w).unwrap();
            let s = diagonal_symmetrize(&lift.square).unwrap();
            prop_assert!(s.coeffs().is_symmetric());
            prop_assert_eq!(diagonal_symmetrize(&s).unwrap(), s);
        }
    }

    #[test]
    fn traces_match_pointwise_values(u in eigenfunction(), s in 0.0f64..1.0) {
        for edge in Edge::ALL {
            let tr = trace(&u, edge).unwrap();
            let t = s * tr.length;
            let (x, y) = u.domain().point(&neumann_witness::exact::BoundaryPoint::new(edge, t));
            let direct = u.evaluate(x, y).unwrap();
            prop_assert!((tr.value(t) - direct).abs() <= 1e-12 * (1.0 + direct.abs()) * tr.terms.len().max(1) as f64);
        }
    }

    #[test]
    fn parity_structure_holds(lam in 1u64..2_000_000) {
        let rep = check_proposition(lam).unwrap();
        prop_assert!(rep.pass, "{:?}", rep.violations);
        prop_assert_eq!(decompose_u64(lam).unwrap().reconstruct(), lam.into());
    }

    #[test]
    fn square_identities(m in 0u64..200, n in 0u64..200, coeffs in proptest::collection::vec(-1.0f64..1.0, 1..6)) {
        prop_assume!(m + n > 0);
        let lam = m * m + n * n;
        let reps = neumann_witness::twosquares::representations(lam);
        let pairs = reps.iter().zip(coeffs.iter().cycle()).map(|(md, a)| (*md, *a));
        let cv = CoefficientVector::from_pairs(pairs).unwrap();
        prop_assume!(!cv.is_empty());
        let u = Eigenfunction::neumann(Domain::Square2Pi, SpectralParam::Exact(Rational::from(lam)), cv).unwrap();
        let us = diagonal_symmetrize(&u).unwrap();
        let d = decompose_u64(lam).unwrap();
        let x = std::f64::consts::PI / (d.s as f64).exp2();
        let tol = 1e-12 * u.max_abs_coeff();
        if d.core == neumann_witness::twosquares::Core::OddCore {
            // u_S vanishes at (2^{-s}π, 0)
            prop_assert!(us.evaluate(x, 0.0).unwrap().abs() <= tol);
            prop_assert_eq!(witness(&u).unwrap().kind, CertKind::ExactZero);
        } else {
            // u_S(0,0) + u_S(2^{-s}π, 0) = 0
            prop_assert!((us.evaluate(0.0, 0.0).unwrap() + us.evaluate(x, 0.0).unwrap()).abs() <= tol);
            prop_assert_eq!(witness(&u).unwrap().kind, CertKind::SignPair);
        }
    }
}
