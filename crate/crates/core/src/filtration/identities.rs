use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::{
    ratliff_rush, reduction_from_elements, superficial_sequence, vv_certify_cm, Filtration,
    HilbertData, ReductionCertificate, SuperficialCertificate, VvReport,
};
use crate::error::{Error, Result};
use crate::module::{GradedSubmodule, ModulePresentation};

/// Whether `e_2 = ... = e_d = 0` for the adic filtration of `I` on the ring.
pub fn is_generalized_narita(ideal: &GradedSubmodule) -> Result<(bool, HilbertData)> {
    let ring = ideal.ring().clone();
    let d = ring.krull_dim();
    if d < 2 {
        return Err(Error::Hypothesis(format!(
            "generalized Narita ideals need dimension at least 2, not {d}"
        )));
    }
    let f = Filtration::adic(ideal, &ModulePresentation::ring_itself(&ring))?;
    let hd = f.hilbert_data()?.clone();
    let holds = (2..=d).all(|i| hd.e(i).is_zero());
    Ok((holds, hd))
}

/// Whether the Ratliff-Rush h-polynomial has degree at most one.
pub fn minimal_multiplicity(f: &Filtration, seed: u64) -> Result<(bool, HilbertData)> {
    let rr = ratliff_rush(f, seed)?;
    let hd = rr.filtration.hilbert_data()?.clone();
    Ok((hd.h.len() <= 2, hd))
}

/// Both sides of the dimension-one identities for a superficial `x`:
/// `H(n) = e_0 - ℓ(F_{n+1}/xF_n)`, `h(z) = e_0 + (z-1)ρ(z)`,
/// `e_1 = Σ ℓ(F_{n+1}/xF_n)` and `e_2 = Σ n ℓ(F_{n+1}/xF_n)`.
#[derive(Clone, Debug)]
pub struct Dim1Identities {
    /// `ℓ(F_{n+1}/xF_n)`; zero from the end of the list on.
    pub rho: Vec<u64>,
    /// `(H(n), e_0 - ℓ(F_{n+1}/xF_n))` for each checked `n`.
    pub hilbert_pairs: Vec<(u64, BigInt)>,
    pub h: Vec<BigInt>,
    pub h_from_rho: Vec<BigInt>,
    pub e1: (BigInt, BigInt),
    pub e2: (BigInt, BigInt),
}

impl Dim1Identities {
    pub fn holds(&self) -> bool {
        self.hilbert_pairs
            .iter()
            .all(|(a, b)| BigInt::from(*a) == *b)
            && self.h == self.h_from_rho
            && self.e1.0 == self.e1.1
            && self.e2.0 == self.e2.1
    }
}

/// `ℓ(F_{n+1}/J F_n)` until it vanishes at some `n` past the stability index,
/// after which `F_{n+1} = J F_n` propagates.
fn reduction_lengths(f: &Filtration, j: &GradedSubmodule) -> Result<Vec<u64>> {
    let bound = f.ambient().degree_bound() as usize;
    let mut out = Vec::new();
    loop {
        let n = out.len();
        if n > bound {
            return Err(Error::bound(
                "F_{n+1} = J·F_n never reached",
                bound as i64,
                "a larger --bound",
            ));
        }
        let jf = GradedSubmodule::product(j, &*f.term(n)?)?;
        let l = f.term(n + 1)?.length_over(&jf)?;
        if l == 0 && n >= f.stable_from() {
            while out.last() == Some(&0) {
                out.pop();
            }
            return Ok(out);
        }
        out.push(l);
    }
}

fn weighted_sums(rho: &[u64]) -> (BigInt, BigInt) {
    let s1 = rho.iter().map(|&l| BigInt::from(l)).sum();
    let s2 = rho
        .iter()
        .enumerate()
        .map(|(n, &l)| BigInt::from(n as u64 * l))
        .sum();
    (s1, s2)
}

pub fn dim1_identities(f: &Filtration, x: &SuperficialCertificate) -> Result<Dim1Identities> {
    if f.dim() != 1 {
        return Err(Error::Hypothesis(format!(
            "the dimension-one identities need dim M = 1, not {}",
            f.dim()
        )));
    }
    let hd = f.hilbert_data()?;
    let j = GradedSubmodule::ideal(f.ring(), vec![x.element.clone()])?;
    let rho = reduction_lengths(f, &j)?;
    let e0 = hd.e(0);
    let count = (rho.len() + f.window()).max(hd.hilbert.len());
    let mut hilbert_pairs = Vec::new();
    for n in 0..count {
        let l = rho.get(n).copied().unwrap_or(0);
        hilbert_pairs.push((f.hilbert_function(n)?, &e0 - BigInt::from(l)));
    }
    // e_0 + (z - 1) ρ(z)
    let mut h_from_rho = vec![BigInt::zero(); rho.len() + 1];
    h_from_rho[0] += &e0;
    for (n, &l) in rho.iter().enumerate() {
        h_from_rho[n + 1] += BigInt::from(l);
        h_from_rho[n] -= BigInt::from(l);
    }
    while h_from_rho.last().is_some_and(|c| c.is_zero()) {
        h_from_rho.pop();
    }
    let (s1, s2) = weighted_sums(&rho);
    Ok(Dim1Identities {
        hilbert_pairs,
        h: hd.h.clone(),
        h_from_rho,
        e1: (hd.e(1), s1),
        e2: (hd.e(2), s2),
        rho,
    })
}

/// Both sides of `e_1 = Σ ℓ(F_{n+1}/JF_n)` and `e_2 = Σ n ℓ(F_{n+1}/JF_n)` in
/// dimension two, run only when the Ratliff-Rush filtration coincides with `F`
/// (which gives `depth G_F(M) > 0`).
#[derive(Clone, Debug)]
pub struct Dim2Identities {
    /// `None` when the gate passed, otherwise why the identities were skipped.
    pub skipped: Option<String>,
    pub sequence: Vec<SuperficialCertificate>,
    pub lengths: Vec<u64>,
    pub e1: (BigInt, BigInt),
    pub e2: (BigInt, BigInt),
}

impl Dim2Identities {
    /// `None` if skipped.
    pub fn holds(&self) -> Option<bool> {
        if self.skipped.is_some() {
            return None;
        }
        Some(self.e1.0 == self.e1.1 && self.e2.0 == self.e2.1)
    }
}

pub fn dim2_identities(f: &Filtration, seed: u64) -> Result<Dim2Identities> {
    if f.dim() != 2 {
        return Err(Error::Hypothesis(format!(
            "the dimension-two identities need dim M = 2, not {}",
            f.dim()
        )));
    }
    let rr = ratliff_rush(f, seed)?;
    if !rr.coincides() {
        return Ok(Dim2Identities {
            skipped: Some(format!(
                "Ratliff-Rush filtration differs from F at level {} (depth G_F(M) = 0)",
                rr.end_h0().expect("differs") + 1
            )),
            sequence: Vec::new(),
            lengths: Vec::new(),
            e1: Default::default(),
            e2: Default::default(),
        });
    }
    let seq = superficial_sequence(f, 2, seed)?;
    let j = GradedSubmodule::ideal(f.ring(), seq.elements())?;
    let lengths = reduction_lengths(f, &j)?;
    let hd = f.hilbert_data()?;
    let (s1, s2) = weighted_sums(&lengths);
    Ok(Dim2Identities {
        skipped: None,
        sequence: seq.certificates,
        lengths,
        e1: (hd.e(1), s1),
        e2: (hd.e(2), s2),
    })
}

/// A power `I^n` whose adic filtration passes the Valabrega-Valla check.
#[derive(Clone, Debug)]
pub struct VvPower {
    pub power: usize,
    pub reduction: ReductionCertificate,
    pub vv: VvReport,
}

/// Searches `n = 1..=max_power` for `I^n` with `G_{I^n}(M)` certified Cohen-Macaulay.
///
/// `J_n = (x_1^n, ..., x_d^n)` for a superficial sequence `x_1..x_d` of `I`;
/// powers of a regular sequence stay regular, and `J_n` being a reduction of
/// `I^n` is checked exactly.
pub fn vv_power_search(
    ideal: &GradedSubmodule,
    module: &GradedSubmodule,
    dim: usize,
    max_power: usize,
    seed: u64,
) -> Result<Option<VvPower>> {
    let base = Filtration::adic_on(ideal, module.clone(), dim)?;
    let seq = superficial_sequence(&base, dim, seed)?;
    let regular = seq.certificates.iter().all(|c| c.regular);
    let nvars = ideal.ring().nvars();
    for n in 1..=max_power {
        let power = ideal.power(n)?;
        let f = Filtration::adic_on(&power, module.clone(), dim)?;
        let elements = seq
            .elements()
            .iter()
            .map(|x| x.pow(n as u32, nvars))
            .collect();
        let mut reduction = reduction_from_elements(&f, elements, regular)?;
        if n == 1 {
            reduction.sequence = seq.certificates.clone();
        }
        let vv = vv_certify_cm(&f, &reduction)?;
        if vv.cohen_macaulay {
            return Ok(Some(VvPower {
                power: n,
                reduction,
                vv,
            }));
        }
    }
    Ok(None)
}

/// Outcome of the sign check `(-1)^d e_d >= 0`.
#[derive(Clone, Debug)]
pub struct SignVerdict {
    pub d: usize,
    pub e: Vec<BigInt>,
    /// `e_2 = ... = e_{d-1} = 0`.
    pub hypothesis: bool,
    pub signed_e_d: BigInt,
    pub nonnegative: bool,
    /// When `e_d = 0`: the first power passing the Valabrega-Valla check.
    pub vv_power: Option<VvPower>,
}

pub fn e_d_sign_check(f: &Filtration, max_power: usize, seed: u64) -> Result<SignVerdict> {
    let d = f.dim();
    if d < 3 {
        return Err(Error::Hypothesis(format!(
            "the sign check needs d >= 3, not {d}"
        )));
    }
    let hd = f.hilbert_data()?;
    let hypothesis = (2..d).all(|i| hd.e(i).is_zero());
    let e_d = hd.e(d);
    let signed_e_d = if d.is_multiple_of(2) {
        e_d.clone()
    } else {
        -e_d.clone()
    };
    let vv_power = if hypothesis && e_d.is_zero() {
        vv_power_search(f.ideal(), &f.module(), d, max_power, seed)?
    } else {
        None
    };
    Ok(SignVerdict {
        d,
        e: hd.e[..=d].to_vec(),
        hypothesis,
        nonnegative: !signed_e_d.is_negative(),
        signed_e_d,
        vv_power,
    })
}
