//! Lengths and memberships for monomial ideals by counting lattice points.
//!
//! Nothing here touches linear algebra: a monomial lies in a monomial ideal
//! exactly when some generator divides it.

use crate::error::{Error, Result};
use crate::ring::{Monomial, Polynomial, RingDescriptor};

/// Exponent vectors of the generators, or an error for a non-monomial input.
pub fn monomial_generators(polys: &[Polynomial], ring: &RingDescriptor) -> Result<Vec<Monomial>> {
    polys
        .iter()
        .filter(|p| !p.is_zero())
        .map(|p| {
            if !p.is_monomial() {
                return Err(Error::Input(format!(
                    "`{}` is not a monomial",
                    p.display(ring)
                )));
            }
            Ok(p.terms().next().expect("nonzero").0.clone())
        })
        .collect()
}

/// Drops generators divisible by another generator.
pub fn minimalize(mut gens: Vec<Monomial>) -> Vec<Monomial> {
    gens.sort();
    gens.dedup();
    let keep: Vec<bool> = gens
        .iter()
        .enumerate()
        .map(|(i, g)| !gens.iter().enumerate().any(|(j, h)| j != i && h.divides(g)))
        .collect();
    gens.into_iter()
        .zip(keep)
        .filter_map(|(g, k)| k.then_some(g))
        .collect()
}

pub fn in_ideal(m: &Monomial, gens: &[Monomial]) -> bool {
    gens.iter().any(|g| g.divides(m))
}

/// Minimal generators of the product of two monomial ideals.
pub fn product(a: &[Monomial], b: &[Monomial]) -> Vec<Monomial> {
    minimalize(a.iter().flat_map(|x| b.iter().map(|y| x.mul(y))).collect())
}

pub fn power(gens: &[Monomial], n: usize, nvars: usize) -> Vec<Monomial> {
    let mut p = vec![Monomial::one(nvars)];
    for _ in 0..n {
        p = product(&p, gens);
    }
    p
}

/// Bounds `b_i` such that every monomial outside the ideal has `a_i < b_i`,
/// taken from pure powers among the generators.
fn box_bounds(gens: &[Monomial], nvars: usize) -> Result<Vec<u32>> {
    (0..nvars)
        .map(|i| {
            gens.iter()
                .filter(|g| {
                    g.exponents()
                        .iter()
                        .enumerate()
                        .all(|(j, &e)| j == i || e == 0)
                })
                .map(|g| g.exponents()[i])
                .min()
                .ok_or(Error::NotFinite { bound: -1 })
        })
        .collect()
}

/// `ℓ(Q[x_1..x_k] / (gens))` by counting standard monomials.
pub fn colength(gens: &[Monomial], nvars: usize) -> Result<u64> {
    let bounds = box_bounds(gens, nvars)?;
    let mut count = 0;
    let mut exps = vec![0u32; nvars];
    loop {
        if !in_ideal(&Monomial::new(exps.clone()), gens) {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == nvars {
                return Ok(count);
            }
            exps[i] += 1;
            if exps[i] < bounds[i] {
                break;
            }
            exps[i] = 0;
            i += 1;
        }
    }
}

/// `ℓ(R/I)` for a ring `R` whose relations are monomials and an ideal `I`
/// given by monomial generators.
pub fn monomial_oracle_length(ring: &RingDescriptor, generators: &[Polynomial]) -> Result<u64> {
    let mut gens = monomial_generators(generators, ring)?;
    gens.extend(monomial_generators(ring.relations(), ring)?);
    colength(&minimalize(gens), ring.nvars())
}

/// Whether `m ∈ (I^{n+r} : I^r)` for some `r <= max_r`, that is whether `m`
/// lies in the Ratliff-Rush closure of `I^n` as witnessed within `max_r` steps.
pub fn in_ratliff_rush_closure(
    m: &Monomial,
    gens: &[Monomial],
    n: usize,
    max_r: usize,
    nvars: usize,
) -> bool {
    (0..=max_r).any(|r| {
        let big = power(gens, n + r, nvars);
        power(gens, r, nvars)
            .iter()
            .all(|g| in_ideal(&m.mul(g), &big))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    #[test]
    fn staircase_counts() {
        assert_eq!(colength(&[mono(&[2, 0]), mono(&[0, 2])], 2).unwrap(), 4);
        let m2 = power(
            &[mono(&[1, 0, 0]), mono(&[0, 1, 0]), mono(&[0, 0, 1])],
            2,
            3,
        );
        assert_eq!(m2.len(), 6);
        assert_eq!(colength(&m2, 3).unwrap(), 4);
        let i = [mono(&[4, 0]), mono(&[3, 1]), mono(&[1, 3]), mono(&[0, 4])];
        assert_eq!(colength(&i, 2).unwrap(), 11);
        assert!(colength(&[mono(&[2, 0]), mono(&[1, 1])], 2).is_err());
    }

    #[test]
    fn closure_witness() {
        let i = [mono(&[4, 0]), mono(&[3, 1]), mono(&[1, 3]), mono(&[0, 4])];
        let w = mono(&[2, 2]);
        assert!(!in_ideal(&w, &i));
        assert!(in_ratliff_rush_closure(&w, &i, 1, 1, 2));
        assert!(!in_ratliff_rush_closure(&mono(&[2, 1]), &i, 1, 3, 2));
    }
}
