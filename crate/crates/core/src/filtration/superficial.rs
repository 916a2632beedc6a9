use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Filtration;
use crate::error::{Error, Result};
use crate::module::GradedSubmodule;
use crate::ring::Polynomial;

/// Largest absolute value of a random coefficient.
pub const COEFFICIENT_RANGE: i64 = 5;
/// Candidates tried before giving up.
pub const MAX_ATTEMPTS: usize = 64;

/// Evidence that `x` is superficial for a filtration.
#[derive(Clone, Debug)]
pub struct SuperficialCertificate {
    /// `x` as text in the ring's variables.
    pub element_text: String,
    pub element: Polynomial,
    /// Coefficients of `x` on the minimal-degree generators of the ideal.
    pub coefficients: Vec<i64>,
    /// Degree of `x`.
    pub degree: i32,
    /// `(F_{n+1} : x) ∩ F_c = F_n` holds for `n` in `window`, which ends
    /// `2 * w` past the stability index.
    pub c: usize,
    pub window: (usize, usize),
    /// Least `n0` with `(F_{k+1} : x) = F_k` for every `k` from `n0` through the
    /// end of the window, if it holds at the end of the window.
    pub strong_from: Option<usize>,
    /// Whether `x` is a nonzerodivisor on `F_0`.
    pub regular: bool,
    pub seed: u64,
    pub attempts: usize,
}

/// Certificates for `x_1, ..., x_k` and the filtration on `M/(x_1..x_k)M`.
#[derive(Debug)]
pub struct SuperficialSequence {
    pub certificates: Vec<SuperficialCertificate>,
    /// `None` for the empty sequence.
    pub quotient: Option<Filtration>,
}

impl SuperficialSequence {
    pub fn elements(&self) -> Vec<Polynomial> {
        self.certificates
            .iter()
            .map(|c| c.element.clone())
            .collect()
    }
}

/// Searches seeded random combinations of the lowest-degree generators of the
/// ideal that do not map `F_0` into `F_2`.
pub fn find_superficial(f: &Filtration, seed: u64) -> Result<SuperficialCertificate> {
    if f.dim() == 0 {
        return Err(Error::Hypothesis(
            "superficial elements are only sought on modules of positive dimension".into(),
        ));
    }
    // generators with g·F_0 ⊆ F_2 have zero initial form on G_F(M)
    let f0 = f.term(0)?;
    let f2 = f.term(2)?;
    let mut live = Vec::new();
    for (d, g) in f.ideal().generators() {
        let gi = GradedSubmodule::ideal(f.ring(), vec![g.comps()[0].clone()])?;
        if !f2.contains(&GradedSubmodule::product(&gi, &f0)?)? {
            live.push((*d, g.comps()[0].clone()));
        }
    }
    let delta = live.iter().map(|(d, _)| *d).min().ok_or_else(|| {
        Error::Hypothesis("the ideal acts nilpotently on the graded module".into())
    })?;
    if delta < 1 {
        return Err(Error::Hypothesis(
            "the ideal must be generated in positive degrees".into(),
        ));
    }
    let low: Vec<Polynomial> = live
        .into_iter()
        .filter(|(d, _)| *d == delta)
        .map(|(_, g)| g)
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last = String::from("no candidate drawn");
    for attempt in 1..=MAX_ATTEMPTS {
        let coefficients: Vec<i64> = (0..low.len())
            .map(|_| rng.gen_range(-COEFFICIENT_RANGE..=COEFFICIENT_RANGE))
            .collect();
        if coefficients.iter().all(|&c| c == 0) {
            continue;
        }
        let x = low
            .iter()
            .zip(&coefficients)
            .fold(Polynomial::zero(), |acc, (g, &c)| {
                acc.add(&g.scale(&crate::linalg::q(c)))
            });
        match check_superficial(f, &x)? {
            Ok(mut cert) => {
                cert.coefficients = coefficients;
                cert.seed = seed;
                cert.attempts = attempt;
                return Ok(cert);
            }
            Err(n) => last = format!("window condition failed at n = {n}"),
        }
    }
    Err(Error::SearchExhausted {
        tries: MAX_ATTEMPTS,
        last,
    })
}

/// Tests a given element: `x*` must be a nonzerodivisor on `G_F(M)` in degrees
/// `n` through `s + 2w`, for every `n` from some `c <= s + w` on. The inner
/// `Err(n)` reports the last `n` where `(F_{n+2} : x) ∩ F_n ≠ F_{n+1}`.
pub fn check_superficial(
    f: &Filtration,
    x: &Polynomial,
) -> Result<std::result::Result<SuperficialCertificate, usize>> {
    let ring = f.ring().clone();
    let degree =
        ring.homogeneous_degree(x)
            .ok_or_else(|| Error::NotHomogeneous(x.display(&ring).to_string()))? as i32;
    let principal = GradedSubmodule::ideal(&ring, vec![x.clone()])?;
    if !f.ideal().contains(&principal)? {
        return Err(Error::Hypothesis(
            "a superficial element must lie in the ideal".into(),
        ));
    }
    let s = f.stable_from();
    let hi = s + 2 * f.window();
    let mut colons: HashMap<usize, GradedSubmodule> = HashMap::new();
    let mut colon = |k: usize| -> Result<GradedSubmodule> {
        if let Some(c) = colons.get(&k) {
            return Ok(c.clone());
        }
        let c = f.colon(&*f.term(k + 1)?, &principal)?;
        colons.insert(k, c.clone());
        Ok(c)
    };
    // x* is a nonzerodivisor on G_F(M) in degree n
    let mut graded = |n: usize| -> Result<bool> {
        let q = colon(n + 1)?;
        let meet = f.meet(&q, &*f.term(n)?)?;
        f.term(n + 1)?.contains(&meet)
    };
    // the condition must hold on at least `window + 1` consecutive n ending at `hi`
    let mut c = hi + 1;
    while c > 0 && graded(c - 1)? {
        c -= 1;
    }
    if c > s + f.window() {
        return Ok(Err(c - 1));
    }
    let mut strong_from = None;
    for k in (0..=hi + 1).rev() {
        if f.term(k)?.contains(&colon(k)?)? {
            strong_from = Some(k);
        } else {
            break;
        }
    }
    let regular = is_regular(f, &principal, c)?;
    Ok(Ok(SuperficialCertificate {
        element_text: x.display(&ring).to_string(),
        element: x.clone(),
        coefficients: Vec::new(),
        degree,
        c,
        window: (c, hi),
        strong_from,
        regular,
        seed: 0,
        attempts: 0,
    }))
}

/// `0 :_M x = 0`, checked in the degrees below the point where `F_c` meets `M`;
/// above it, `(0 : x) ∩ F_c ⊆ ∩ F_n = 0`.
fn is_regular(f: &Filtration, principal: &GradedSubmodule, c: usize) -> Result<bool> {
    let m = f.module();
    let fc = f.term(c)?;
    let bound = f.ambient().degree_bound();
    let agree = fc
        .agrees_from(&m, bound)?
        .ok_or_else(|| Error::bound("F_c never meets M", bound as i64, "a larger --bound"))?;
    let zero = GradedSubmodule::zero(f.ambient());
    let polys = [(
        principal.generators()[0].0,
        principal.polynomial_generators()[0].clone(),
    )];
    for d in f.ambient().start_degree()..agree {
        if zero.colon_piece_within(&polys, &m, d)?.rank() != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `x_1, ..., x_k`, each superficial for the filtration induced on the
/// quotient by the earlier ones.
pub fn superficial_sequence(f: &Filtration, k: usize, seed: u64) -> Result<SuperficialSequence> {
    if k > f.dim() {
        return Err(Error::Hypothesis(format!(
            "a superficial sequence has at most dim M = {} elements",
            f.dim()
        )));
    }
    let mut certificates = Vec::new();
    let mut cur: Option<Filtration> = None;
    for i in 0..k {
        let base = cur.as_ref().unwrap_or(f);
        let cert = find_superficial(base, seed.wrapping_add(i as u64))?;
        let next = base.quotient(&cert.element)?;
        certificates.push(cert);
        cur = Some(next);
    }
    Ok(SuperficialSequence {
        certificates,
        quotient: cur,
    })
}
