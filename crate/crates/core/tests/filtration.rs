use num_bigint::BigInt;

use narita_core::filtration::*;
use narita_core::harness::{self, oracle};
use narita_core::module::{GradedSubmodule, ModulePresentation};
use narita_core::ring::{Monomial, Ring, RingDescriptor};

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn adic(ring: &Ring, gens: &[&str]) -> Filtration {
    let i = GradedSubmodule::ideal_from_text(ring, gens).unwrap();
    Filtration::adic(&i, &ModulePresentation::ring_itself(ring)).unwrap()
}

#[test]
fn maximal_ideal_of_the_plane() {
    let r = RingDescriptor::polynomial(&["x", "y"]);
    let f = adic(&r, &["x", "y"]);
    for n in 0..6 {
        assert_eq!(f.hilbert_function(n).unwrap(), n as u64 + 1);
    }
    let hd = f.hilbert_data().unwrap();
    assert_eq!(hd.h, big(&[1]));
    assert_eq!(hd.e, big(&[1, 0, 0]));
    assert_eq!(hd.e0_cross_check, Some(1));
    assert_eq!(reduction_number(&f, 0).unwrap().r, 0);
    assert!(ratliff_rush(&f, 0).unwrap().coincides());
}

#[test]
fn parameter_ideal_has_constant_h() {
    let r = RingDescriptor::polynomial(&["x", "y"]);
    let f = adic(&r, &["x^2", "y^2"]);
    for n in 0..5 {
        // I^n / I^{n+1} is free of rank n + 1 over A/I, which has length 4
        assert_eq!(f.hilbert_function(n).unwrap(), 4 * (n as u64 + 1));
        assert_eq!(f.p_minus_h(n).unwrap(), BigInt::from(0));
    }
    let hd = f.hilbert_data().unwrap();
    assert_eq!(hd.h, big(&[4]));
    assert_eq!(hd.e, big(&[4, 0, 0]));
    let cert = reduction_number(&f, 0).unwrap();
    assert_eq!(cert.r, 0);
    assert!(cert.regular_sequence);
    assert!(vv_certify_cm(&f, &cert).unwrap().cohen_macaulay);
}

#[test]
fn superficial_candidates_are_checked_not_assumed() {
    let r = RingDescriptor::polynomial(&["x", "y"]);
    let f = adic(&r, &["x^2", "y^2"]);
    let x2 = r.parse("x^2").unwrap();
    let cert = check_superficial(&f, &x2).unwrap().unwrap();
    assert!(cert.regular);
    let generic = find_superficial(&f, 3).unwrap();
    assert!(generic.regular);
    assert_eq!(generic.seed, 3);
    // x*y is not in the ideal
    assert!(check_superficial(&f, &r.parse("x*y").unwrap()).is_err());

    // in Q[x,y]/(xy) the form x is a zero divisor, so x^2 + ... must be generic
    let node = RingDescriptor::quotient(&["x", "y"], &["x*y"], 1).unwrap();
    let g = adic(&node, &["x", "y"]);
    if let Ok(c) = check_superficial(&g, &node.parse("x").unwrap()).unwrap() {
        assert!(!c.regular)
    }
    assert!(find_superficial(&g, 0).unwrap().regular);
}

#[test]
fn quadric_cone() {
    let r = RingDescriptor::quotient(&["x", "y", "z"], &["x^2 + y^2 + z^2"], 2).unwrap();
    let f = adic(&r, &["x", "y", "z"]);
    let hd = f.hilbert_data().unwrap();
    assert_eq!(hd.h, big(&[1, 1]));
    assert_eq!(hd.e, big(&[2, 1, 0]));
    let id = dim2_identities(&f, 0).unwrap();
    assert_eq!(id.holds(), Some(true));
    assert_eq!(id.lengths, vec![1]);
}

#[test]
fn cubic_cone_identities() {
    let r = RingDescriptor::quotient(&["x", "y", "z"], &["x^3 + y^3 + z^3"], 2).unwrap();
    let f = adic(&r, &["x", "y", "z"]);
    let hd = f.hilbert_data().unwrap();
    assert_eq!(hd.h, big(&[1, 1, 1]));
    assert_eq!(hd.e, big(&[3, 3, 1]));
    let id = dim2_identities(&f, 0).unwrap();
    assert_eq!(id.lengths, vec![2, 1]);
    assert_eq!(id.e1, (BigInt::from(3), BigInt::from(3)));
    assert_eq!(id.e2, (BigInt::from(1), BigInt::from(1)));
}

#[test]
fn double_line_dimension_one_identities() {
    let r = RingDescriptor::quotient(&["x", "y"], &["y^2"], 1).unwrap();
    let f = adic(&r, &["x", "y"]);
    let hd = f.hilbert_data().unwrap();
    assert_eq!(hd.h, big(&[1, 1]));
    assert_eq!((hd.e(0), hd.e(1), hd.e(2)), (2.into(), 1.into(), 0.into()));
    // A has basis x^i, x^i y: H(0) = 1, H(n) = 2 after that
    let gens = [Monomial::new(vec![1, 0]), Monomial::new(vec![0, 1])];
    for n in 1..5 {
        let counted = oracle::colength(&oracle::power(&gens, n, 2), 2).unwrap()
            - oracle::colength(&oracle::power(&gens, n - 1, 2), 2).unwrap();
        // the oracle counts degree n - 1 in Q[x,y]; only x^a and x^a y survive in A
        assert_eq!(counted, n as u64);
        assert_eq!(f.hilbert_function(n - 1).unwrap(), counted.min(2));
    }
    let x = find_superficial(&f, 0).unwrap();
    let id = dim1_identities(&f, &x).unwrap();
    assert!(id.holds(), "{id:?}");
    assert_eq!(id.rho, vec![1]);
    assert_eq!(id.e1, (BigInt::from(1), BigInt::from(1)));
    assert_eq!(id.e2, (BigInt::from(0), BigInt::from(0)));
}

#[test]
fn principal_ideal_of_a_line() {
    let r = RingDescriptor::polynomial(&["t"]);
    let f = adic(&r, &["t^3"]);
    let hd = f.hilbert_data().unwrap();
    assert_eq!(hd.h, big(&[3]));
    let x = find_superficial(&f, 0).unwrap();
    let id = dim1_identities(&f, &x).unwrap();
    assert!(id.rho.is_empty());
    assert_eq!(id.e1, (BigInt::from(0), BigInt::from(0)));
}

#[test]
fn quotient_filtration_keeps_lower_coefficients() {
    let r = RingDescriptor::quotient(&["x", "y", "z"], &["x*z - y^2"], 2).unwrap();
    let f = adic(&r, &["x", "y", "z"]);
    let x = find_superficial(&f, 1).unwrap();
    assert!(x.regular);
    let q = f.quotient(&x.element).unwrap();
    assert_eq!(q.dim(), 1);
    assert!(matches!(q.kind(), FiltrationKind::Quotient(v) if v.len() == 1));
    let (a, b) = (f.hilbert_data().unwrap(), q.hilbert_data().unwrap());
    assert_eq!(a.e(0), b.e(0));
    assert_eq!(a.e(1), b.e(1));
}

#[test]
fn cut_down_m4_square_keeps_coefficients() {
    let fx = harness::fixture("m4-square").unwrap();
    let f = Filtration::adic(
        fx.get_ideal(Some("I")).unwrap(),
        &fx.modules[0].presentation,
    )
    .unwrap();
    let x = find_superficial(&f, 0).unwrap();
    let q = f.quotient(&x.element).unwrap();
    let (a, b) = (f.hilbert_data().unwrap(), q.hilbert_data().unwrap());
    for i in 0..3 {
        assert_eq!(a.e(i), b.e(i), "e_{i}");
    }
}

#[test]
fn classic_ratliff_rush_witness() {
    let r = RingDescriptor::polynomial(&["x", "y"]);
    let f = adic(&r, &["x^4", "x^3*y", "x*y^3", "y^4"]);
    let rr = ratliff_rush(&f, 0).unwrap();
    assert_eq!(rr.differences, vec![1]);
    assert_eq!(rr.end_h0(), Some(0));
    assert_eq!(rr.c_bound(), Some(2));
    let w = GradedSubmodule::ideal_from_text(&r, &["x^2*y^2"]).unwrap();
    assert!(rr.filtration.term(1).unwrap().contains(&w).unwrap());
    assert!(!f.term(1).unwrap().contains(&w).unwrap());
    let props = check_rr_properties(&f, &rr, 0).unwrap();
    assert!(props.all(), "{props:?}");
}

#[test]
fn m4_square_reduction_and_valabrega_valla() {
    let fx = harness::fixture("m4-square").unwrap();
    let f = Filtration::adic(
        fx.get_ideal(Some("I")).unwrap(),
        &fx.modules[0].presentation,
    )
    .unwrap();
    let cert = reduction_number(&f, 0).unwrap();
    assert_eq!(cert.r, 2);
    assert_eq!(cert.sequence.len(), 3);
    assert!(cert.regular_sequence);
    assert!(cert.verified_through >= cert.r);
    let vv = vv_certify_cm(&f, &cert).unwrap();
    assert!(!vv.holds);
    assert_eq!(vv.failure, Some(1));
    let rr = ratliff_rush(&f, 0).unwrap();
    assert!(!rr.coincides());
}

#[test]
fn sign_of_e3_on_synthetic_ideal() {
    let fx = harness::fixture("negative-e3").unwrap();
    let f = Filtration::adic(fx.get_ideal(None).unwrap(), &fx.modules[0].presentation).unwrap();
    let sv = e_d_sign_check(&f, 2, 0).unwrap();
    assert_eq!(sv.e, big(&[14, 7, 0, -1]));
    assert!(sv.hypothesis);
    assert_eq!(sv.signed_e_d, BigInt::from(1));
    assert!(sv.nonnegative);
    assert!(sv.vv_power.is_none());
}

#[test]
fn filtration_axioms_and_windows() {
    let r = RingDescriptor::polynomial(&["x", "y"]);
    let f = adic(&r, &["x^2", "x*y", "y^3"]).with_window(5);
    assert_eq!(f.window(), 5);
    f.check_axioms(4).unwrap();
    assert_eq!(f.stable_from(), 0);
    let rr = ratliff_rush(&f, 0).unwrap();
    rr.filtration.check_axioms(4).unwrap();
}

#[test]
fn parameter_and_power_ideals_in_the_plane() {
    let r = RingDescriptor::polynomial(&["x", "y"]);
    // (x^3, y^3) is generated by a regular sequence: h = 9, so the closure has minimal multiplicity
    let f = adic(&r, &["x^3", "y^3"]);
    let (ok, rr_hd) = minimal_multiplicity(&f, 0).unwrap();
    assert!(ok);
    assert_eq!(rr_hd.h, big(&[9]));

    // m^2: H(n) = dim m^{2n} / m^{2n+2} = 4n + 3, so h = 3 + z and e_2 = 0
    let m2 = GradedSubmodule::ideal_from_text(&r, &["x^2", "x*y", "y^2"]).unwrap();
    let g = Filtration::adic(&m2, &ModulePresentation::ring_itself(&r)).unwrap();
    let m = [Monomial::new(vec![1, 0]), Monomial::new(vec![0, 1])];
    for n in 0..4 {
        let counted = oracle::colength(&oracle::power(&m, 2 * n + 2, 2), 2).unwrap()
            - oracle::colength(&oracle::power(&m, 2 * n, 2), 2).unwrap();
        assert_eq!(g.hilbert_function(n).unwrap(), counted);
    }
    let hd = g.hilbert_data().unwrap();
    assert_eq!(hd.h, big(&[3, 1]));
    assert_eq!(hd.e, big(&[4, 1, 0]));
    assert!(is_generalized_narita(&m2).unwrap().0);
}
