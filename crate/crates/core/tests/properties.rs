use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use narita_core::filtration::Filtration;
use narita_core::harness::{monomial_oracle_length, oracle};
use narita_core::module::{GradedSubmodule, ModulePresentation};
use narita_core::ring::{Monomial, Polynomial, Ring, RingDescriptor};

fn ring3() -> Ring {
    RingDescriptor::polynomial(&["x", "y", "z"])
}

fn poly() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(((0u32..4, 0u32..4, 0u32..4), -9i64..10, 1i64..4), 0..5).prop_map(
        |terms| {
            Polynomial::from_terms(terms.into_iter().map(|((a, b, c), n, d)| {
                (
                    Monomial::new(vec![a, b, c]),
                    BigRational::new(BigInt::from(n), BigInt::from(d)),
                )
            }))
        },
    )
}

/// Monomials in two variables that always include pure powers of x and y,
/// so the ideal is primary to the maximal ideal.
fn primary_monomials() -> impl Strategy<Value = Vec<Monomial>> {
    (
        1u32..6,
        1u32..6,
        prop::collection::vec((0u32..5, 0u32..5), 0..3),
    )
        .prop_map(|(a, b, rest)| {
            let mut v = vec![Monomial::new(vec![a, 0]), Monomial::new(vec![0, b])];
            v.extend(
                rest.into_iter()
                    .filter(|&(i, j)| i + j > 0)
                    .map(|(i, j)| Monomial::new(vec![i, j])),
            );
            v
        })
}

fn as_polys(ms: &[Monomial]) -> Vec<Polynomial> {
    ms.iter()
        .map(|m| Polynomial::monomial(m.clone(), BigRational::from_integer(1.into())))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn print_then_parse_is_identity(p in poly()) {
        let r = ring3();
        let text = p.display(&r).to_string();
        prop_assert_eq!(r.parse(&text).unwrap(), p);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multiplication_is_a_commutative_ring_law(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn colength_agrees_with_lattice_count(gens in primary_monomials()) {
        let r = RingDescriptor::polynomial(&["x", "y"]);
        let counted = oracle::colength(&gens, 2).unwrap();
        let polys = as_polys(&gens);
        prop_assert_eq!(monomial_oracle_length(&r, &polys).unwrap(), counted);
        prop_assert_eq!(GradedSubmodule::ideal(&r, polys).unwrap().colength().unwrap(), counted);
    }

    #[test]
    fn ideal_products_commute(a in primary_monomials(), b in primary_monomials()) {
        let r = RingDescriptor::polynomial(&["x", "y"]);
        let i = GradedSubmodule::ideal(&r, as_polys(&a)).unwrap();
        let j = GradedSubmodule::ideal(&r, as_polys(&b)).unwrap();
        let ij = GradedSubmodule::product(&i, &j).unwrap();
        let ji = GradedSubmodule::product(&j, &i).unwrap();
        prop_assert!(ij.equals(&ji).unwrap());
        prop_assert_eq!(ij.colength().unwrap(), oracle::colength(&oracle::product(&a, &b), 2).unwrap());
    }

    #[test]
    fn hilbert_function_sums_to_colength(gens in primary_monomials()) {
        let r = RingDescriptor::polynomial(&["x", "y"]);
        let i = GradedSubmodule::ideal(&r, as_polys(&gens)).unwrap();
        let f = Filtration::adic(&i, &ModulePresentation::ring_itself(&r)).unwrap();
        let mut total = 0;
        for n in 0..3 {
            total += f.hilbert_function(n).unwrap();
            prop_assert_eq!(total, oracle::colength(&oracle::power(&gens, n + 1, 2), 2).unwrap());
        }
    }

    #[test]
    fn powers_add(gens in primary_monomials(), m in 1usize..3, n in 1usize..3) {
        let r = RingDescriptor::polynomial(&["x", "y"]);
        let i = GradedSubmodule::ideal(&r, as_polys(&gens)).unwrap();
        let lhs = i.power(m + n).unwrap();
        let rhs = GradedSubmodule::product(&i.power(m).unwrap(), &i.power(n).unwrap()).unwrap();
        prop_assert!(lhs.equals(&rhs).unwrap());
    }

    #[test]
    fn colon_sum_and_intersection_bounds(a in primary_monomials(), b in primary_monomials()) {
        let r = RingDescriptor::polynomial(&["x", "y"]);
        let i = GradedSubmodule::ideal(&r, as_polys(&a)).unwrap();
        let j = GradedSubmodule::ideal(&r, as_polys(&b)).unwrap();
        let colon = i.colon(&j, None).unwrap();
        prop_assert!(i.contains(&GradedSubmodule::product(&j, &colon).unwrap()).unwrap());
        prop_assert!(colon.contains(&i).unwrap());
        let meet = i.intersect(&j, None).unwrap();
        prop_assert!(i.contains(&meet).unwrap() && j.contains(&meet).unwrap());
        let sum = i.sum(&j).unwrap();
        prop_assert!(sum.contains(&i).unwrap() && sum.contains(&j).unwrap());
        // the lattice-point oracle agrees on the intersection: lcm generators
        let lcms: Vec<Monomial> = a
            .iter()
            .flat_map(|u| b.iter().map(move |v| {
                Monomial::new(u.exponents().iter().zip(v.exponents()).map(|(p, q)| *p.max(q)).collect())
            }))
            .collect();
        prop_assert_eq!(meet.colength().unwrap(), oracle::colength(&lcms, 2).unwrap());
    }
}
