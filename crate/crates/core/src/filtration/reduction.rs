use super::{superficial_sequence, Filtration, SuperficialCertificate};
use crate::error::{Error, Result};
use crate::module::GradedSubmodule;
use crate::ring::Polynomial;

/// `J = (x_1..x_d)` from a superficial sequence and the least `r` with
/// `F_{n+1} = J·F_n` for all `n >= r`.
#[derive(Clone, Debug)]
pub struct ReductionCertificate {
    /// Empty when `J` was supplied rather than searched for.
    pub sequence: Vec<SuperficialCertificate>,
    pub generators: Vec<String>,
    pub j: GradedSubmodule,
    pub r: usize,
    /// Every `n` checked explicitly; `F_{n+1} = J·F_n` for `n` in `r..=verified_through`.
    pub verified_through: usize,
    /// `n < r` with `F_{n+1} ≠ J·F_n`.
    pub failures: Vec<usize>,
    /// Whether every `x_i` is a nonzerodivisor on `M/(x_1..x_{i-1})M`.
    pub regular_sequence: bool,
    pub propagation: String,
}

pub fn reduction_number(f: &Filtration, seed: u64) -> Result<ReductionCertificate> {
    let seq = superficial_sequence(f, f.dim(), seed)?;
    let regular = seq.certificates.iter().all(|c| c.regular);
    let mut cert = reduction_from_elements(f, seq.elements(), regular)?;
    cert.sequence = seq.certificates;
    Ok(cert)
}

/// The reduction number with respect to `J = (elements)`, which must lie in
/// the ideal. `regular_sequence` is recorded as given.
pub fn reduction_from_elements(
    f: &Filtration,
    elements: Vec<Polynomial>,
    regular_sequence: bool,
) -> Result<ReductionCertificate> {
    let generators = elements
        .iter()
        .map(|p| p.display(f.ring()).to_string())
        .collect();
    let j = GradedSubmodule::ideal(f.ring(), elements)?;
    let s = f.stable_from();
    let bound = f.ambient().degree_bound() as usize;
    let mut equal = Vec::new();
    let last = loop {
        let n = equal.len();
        if n > bound {
            return Err(Error::bound(
                "no n past the stability index with F_{n+1} = J·F_n",
                bound as i64,
                "a larger --bound",
            ));
        }
        let jf = GradedSubmodule::product(&j, &*f.term(n)?)?;
        let eq = jf.contains(&*f.term(n + 1)?)?;
        equal.push(eq);
        if eq && n >= s {
            break n;
        }
    };
    let r = (0..=last)
        .rev()
        .take_while(|&n| equal[n])
        .last()
        .expect("equal[last] holds");
    let failures = (0..r).filter(|&n| !equal[n]).collect();
    Ok(ReductionCertificate {
        sequence: Vec::new(),
        generators,
        j,
        r,
        verified_through: last,
        failures,
        regular_sequence,
        propagation: format!(
            "F_{{n+1}} = J·F_n checked for n = {r}..={last}; for n > {last}, \
             F_{{n+2}} = I·F_{{n+1}} = I·J·F_n = J·F_{{n+1}} since n >= {s}"
        ),
    })
}

/// The Valabrega-Valla check `F_{n+1} ∩ JM = J·F_n`.
#[derive(Clone, Debug)]
pub struct VvReport {
    /// The equality holds for every `n`.
    pub holds: bool,
    /// `n` checked explicitly; beyond the reduction number both sides are `F_{n+1}`.
    pub checked: Vec<usize>,
    pub implied_from: usize,
    pub failure: Option<usize>,
    /// `holds` and `J` is generated by a regular sequence, so `G_F(M)` is Cohen-Macaulay.
    pub cohen_macaulay: bool,
}

pub fn vv_certify_cm(f: &Filtration, cert: &ReductionCertificate) -> Result<VvReport> {
    let jm = GradedSubmodule::product(&cert.j, &*f.term(0)?)?;
    let mut failure = None;
    let mut checked = Vec::new();
    for n in 0..cert.r {
        checked.push(n);
        let lhs = f.meet(&*f.term(n + 1)?, &jm)?;
        let rhs = GradedSubmodule::product(&cert.j, &*f.term(n)?)?;
        if !rhs.contains(&lhs)? {
            failure = Some(n);
            break;
        }
    }
    let holds = failure.is_none();
    Ok(VvReport {
        holds,
        checked,
        implied_from: cert.r,
        failure,
        cohen_macaulay: holds && cert.regular_sequence,
    })
}
