use std::sync::Arc;

use super::{find_superficial, Filtration, FiltrationKind, SuperficialCertificate};
use crate::error::{Error, Result};
use crate::module::GradedSubmodule;

/// The Ratliff-Rush filtration `F̃_n = ∪_r (F_{n+r} : I^r)` with its certificate.
#[derive(Debug)]
pub struct RatliffRush {
    pub filtration: Filtration,
    pub superficial: SuperficialCertificate,
    /// `F̃_n = F_n` for every `n >= agrees_from`.
    pub agrees_from: usize,
    /// For `n < agrees_from`: the least `r` with `(F_{n+r} : I^r) = F̃_n`.
    pub stabilizing_r: Vec<usize>,
    /// `ℓ(F̃_{n+1} / F_{n+1})` for `n + 1 < agrees_from`.
    pub differences: Vec<u64>,
}

impl RatliffRush {
    /// `max { n : F̃_{n+1} ≠ F_{n+1} }`, or `None` when the filtrations coincide.
    pub fn end_h0(&self) -> Option<usize> {
        self.differences.iter().rposition(|&l| l > 0)
    }

    pub fn coincides(&self) -> bool {
        self.end_h0().is_none()
    }

    /// `end_h0 + 2`, or `None` when the filtrations coincide.
    pub fn c_bound(&self) -> Option<usize> {
        self.end_h0().map(|e| e + 2)
    }
}

/// Computes the Ratliff-Rush closure of `f`.
///
/// A superficial nonzerodivisor `x` with `(F_{k+1} : x) = F_k` for all
/// `k >= n0` gives `F̃_k = F_k` for `k >= n0`; lower terms follow from
/// `F̃_n = (F̃_{n+1} : I)`.
pub fn ratliff_rush(f: &Filtration, seed: u64) -> Result<RatliffRush> {
    let cert = find_superficial(f, seed)?;
    if !cert.regular {
        return Err(Error::Hypothesis(format!(
            "the module has depth zero: the superficial element {} is a zero divisor",
            cert.element_text
        )));
    }
    let n0 = cert.strong_from.ok_or_else(|| {
        Error::bound(
            "(F_{n+1} : x) = F_n not reached inside the window",
            (f.stable_from() + f.window()) as i64,
            "a larger --window",
        )
    })?;
    let ideal = f.ideal().clone();
    let top = n0.max(f.stable_from());
    let mut closed: Vec<Arc<GradedSubmodule>> =
        (0..=top).map(|n| f.term(n)).collect::<Result<_>>()?;
    for n in (0..n0).rev() {
        let c = f.colon(&closed[n + 1], &ideal)?.trimmed()?;
        closed[n] = Arc::new(c);
    }
    // C_r(n) = (F_{n+r} : I^r) = (C_{r-1}(n+1) : I), and C_r(n) = F̃_n once n + r >= n0
    let mut stabilizing_r = vec![0; n0];
    let mut done = vec![false; n0];
    let mut chain: Vec<Arc<GradedSubmodule>> =
        (0..=n0).map(|n| f.term(n)).collect::<Result<_>>()?;
    for r in 0..=n0 {
        if r > 0 {
            let mut next = chain.clone();
            for n in 0..n0 {
                next[n] = if n + r >= n0 {
                    closed[n].clone()
                } else {
                    Arc::new(f.colon(&chain[n + 1], &ideal)?)
                };
            }
            chain = next;
        }
        for n in 0..n0 {
            if !done[n] && (n + r >= n0 || closed[n].equals(&chain[n])?) {
                stabilizing_r[n] = r;
                done[n] = true;
            }
        }
        if done.iter().all(|&d| d) {
            break;
        }
    }
    let mut differences = Vec::new();
    for n in 0..n0.saturating_sub(1) {
        differences.push(closed[n + 1].length_over(&*f.term(n + 1)?)?);
    }
    let mut filtration =
        Filtration::from_head(ideal, closed, FiltrationKind::RatliffRush, f.dim())?;
    filtration.window = f.window();
    Ok(RatliffRush {
        filtration,
        superficial: cert,
        agrees_from: n0,
        stabilizing_r,
        differences,
    })
}

/// Outcome of checking the four basic properties of the closure, plus idempotence.
#[derive(Clone, Debug)]
pub struct RrProperties {
    /// `F̃_n = F_n` from `agrees_from` through the window.
    pub eventually_equal: bool,
    /// `F̃` is descending with `I·F̃_n ⊆ F̃_{n+1}`.
    pub is_filtration: bool,
    /// `e_i(F̃) = e_i(F)` for `0 <= i <= dim`.
    pub same_coefficients: bool,
    /// `(F̃_{n+1} : x) = F̃_n` for every checked `n`.
    pub superficial_colon: bool,
    /// Closing `F̃` again changes nothing.
    pub idempotent: bool,
    pub checked_through: usize,
}

impl RrProperties {
    pub fn all(&self) -> bool {
        self.eventually_equal
            && self.is_filtration
            && self.same_coefficients
            && self.superficial_colon
            && self.idempotent
    }
}

pub fn check_rr_properties(f: &Filtration, rr: &RatliffRush, seed: u64) -> Result<RrProperties> {
    let tilde = &rr.filtration;
    let upto = rr.agrees_from.max(f.stable_from()) + f.window();
    let mut eventually_equal = true;
    for n in rr.agrees_from..=upto {
        eventually_equal &= tilde.term(n)?.equals(&*f.term(n)?)?;
    }
    let is_filtration = match tilde.check_axioms(upto) {
        Ok(()) => true,
        Err(Error::Internal(_)) => false,
        Err(e) => return Err(e),
    };
    let a = f.hilbert_data()?;
    let b = tilde.hilbert_data()?;
    let same_coefficients = (0..=f.dim()).all(|i| a.e(i) == b.e(i));
    let x = GradedSubmodule::ideal(f.ring(), vec![rr.superficial.element.clone()])?;
    let mut superficial_colon = true;
    for n in 0..=upto {
        let c = tilde.colon(&*tilde.term(n + 1)?, &x)?;
        superficial_colon &= c.equals(&*tilde.term(n)?)?;
    }
    let again = ratliff_rush(tilde, seed)?;
    let mut idempotent = true;
    for n in 0..=upto {
        idempotent &= again.filtration.term(n)?.equals(&*tilde.term(n)?)?;
    }
    Ok(RrProperties {
        eventually_equal,
        is_filtration,
        same_coefficients,
        superficial_colon,
        idempotent,
        checked_through: upto,
    })
}
