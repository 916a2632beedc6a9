//! I-stable filtrations on graded modules and their numerical invariants.
//!
//! A [`Filtration`] stores explicit head terms `F_0, ..., F_s` and continues
//! with `F_{n+1} = I·F_n` for `n >= s`, so every term is computable and the
//! stability index `s` is part of the object rather than a hope.

mod hilbert;
mod identities;
mod ratliff_rush;
mod reduction;
mod superficial;

pub use hilbert::HilbertData;
pub use identities::{
    dim1_identities, dim2_identities, e_d_sign_check, is_generalized_narita, minimal_multiplicity,
    vv_power_search, Dim1Identities, Dim2Identities, SignVerdict, VvPower,
};
pub use ratliff_rush::{check_rr_properties, ratliff_rush, RatliffRush, RrProperties};
pub use reduction::{
    reduction_from_elements, reduction_number, vv_certify_cm, ReductionCertificate, VvReport,
};
pub use superficial::{
    check_superficial, find_superficial, superficial_sequence, SuperficialCertificate,
    SuperficialSequence,
};

use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::module::{Ambient, GradedSubmodule, ModElem, ModulePresentation};
use crate::ring::{Polynomial, Ring};

/// Default width of the trailing window used for "for all large n" checks.
pub const DEFAULT_WINDOW: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FiltrationKind {
    /// `F_n = I^n M`.
    Adic,
    /// The Ratliff-Rush closure of another filtration.
    RatliffRush,
    /// `(F_n + xM)/xM` for the listed elements, applied in order.
    Quotient(Vec<Polynomial>),
    /// `F_n = I^n H ∩ N` inside a cover `H`.
    Intersection,
}

#[derive(Debug)]
pub struct Filtration {
    ideal: Arc<GradedSubmodule>,
    ambient: Arc<Ambient>,
    kind: FiltrationKind,
    dim: usize,
    window: usize,
    stable_from: usize,
    terms: Mutex<Vec<Arc<GradedSubmodule>>>,
    hilbert: OnceLock<HilbertData>,
}

impl Filtration {
    /// Builds a filtration from explicit head terms `F_0..F_s`, continued by
    /// `F_{n+1} = I·F_n` for `n >= s`.
    pub fn from_head(
        ideal: Arc<GradedSubmodule>,
        head: Vec<Arc<GradedSubmodule>>,
        kind: FiltrationKind,
        dim: usize,
    ) -> Result<Self> {
        let first = head
            .first()
            .ok_or_else(|| Error::Input("a filtration needs at least F_0".into()))?;
        if ideal.ambient().free().rank() != 1 || !Arc::ptr_eq(ideal.ring(), first.ring()) {
            return Err(Error::AmbientMismatch(
                "filtration ideal must be an ideal of the module's ring".into(),
            ));
        }
        let ambient = first.ambient().clone();
        for t in &head {
            if !t.ambient().same_as(&ambient) {
                return Err(Error::AmbientMismatch(
                    "filtration terms differ in ambient".into(),
                ));
            }
        }
        Ok(Filtration {
            ideal,
            ambient,
            kind,
            dim,
            window: DEFAULT_WINDOW,
            stable_from: head.len() - 1,
            terms: Mutex::new(head),
            hilbert: OnceLock::new(),
        })
    }

    /// `F_n = I^n M` for an ideal primary to the maximal ideal; `dim M` is taken
    /// to be the Krull dimension of the ring.
    pub fn adic(ideal: &GradedSubmodule, module: &ModulePresentation) -> Result<Self> {
        let dim = module.ring().krull_dim();
        Self::adic_on(ideal, module.whole(), dim)
    }

    /// `F_n = I^n N` for a submodule `N` of dimension `dim`.
    pub fn adic_on(ideal: &GradedSubmodule, module: GradedSubmodule, dim: usize) -> Result<Self> {
        let (primary, _) = ideal.is_m_primary()?;
        if !primary {
            return Err(Error::Hypothesis(
                "the filtration ideal is not primary to the maximal ideal".into(),
            ));
        }
        Self::from_head(
            Arc::new(ideal.clone()),
            vec![Arc::new(module)],
            FiltrationKind::Adic,
            dim,
        )
    }

    /// `F_n = I^n H ∩ N`, where `H` is the whole ambient and `N` a submodule of
    /// dimension `dim`. The stability index is the first `h` with
    /// `I·F_n = F_{n+1}` on `h..=h + window`.
    pub fn intersection(
        ideal: &GradedSubmodule,
        cover: &Arc<Ambient>,
        kernel: &GradedSubmodule,
        dim: usize,
        window: usize,
    ) -> Result<Self> {
        let (primary, _) = ideal.is_m_primary()?;
        if !primary {
            return Err(Error::Hypothesis(
                "the filtration ideal is not primary to the maximal ideal".into(),
            ));
        }
        let whole = GradedSubmodule::whole(cover);
        let mut terms: Vec<Arc<GradedSubmodule>> = Vec::new();
        let mut power = whole.clone();
        let bound = cover.degree_bound();
        let min_deg = ideal.generators().first().map_or(1, |(d, _)| *d).max(1);
        for n in 0.. {
            if n * min_deg > bound {
                return Err(Error::bound(
                    "intersection filtration: no stability index",
                    bound as i64,
                    "a larger --bound",
                ));
            }
            if n > 0 {
                power = GradedSubmodule::product(ideal, &power)?;
            }
            terms.push(Arc::new(power.intersect(kernel, None)?.trimmed()?));
            if terms.len() > window + 1 {
                let h = terms.len() - window - 2;
                let mut stable = true;
                for k in h..terms.len() - 1 {
                    let next = GradedSubmodule::product(ideal, &terms[k])?;
                    if !terms[k + 1].contains(&next)? || !next.contains(&terms[k + 1])? {
                        stable = false;
                        break;
                    }
                }
                if stable {
                    terms.truncate(h + 1);
                    break;
                }
            }
        }
        Self::from_head(
            Arc::new(ideal.clone()),
            terms,
            FiltrationKind::Intersection,
            dim,
        )
    }

    pub fn with_window(mut self, window: usize) -> Self {
        self.window = window.max(1);
        self
    }

    pub fn ideal(&self) -> &Arc<GradedSubmodule> {
        &self.ideal
    }

    pub fn ring(&self) -> &Ring {
        self.ideal.ring()
    }

    pub fn ambient(&self) -> &Arc<Ambient> {
        &self.ambient
    }

    pub fn kind(&self) -> &FiltrationKind {
        &self.kind
    }

    /// Dimension of the filtered module.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn window(&self) -> usize {
        self.window
    }

    /// `s` such that `F_{n+1} = I·F_n` for every `n >= s`.
    pub fn stable_from(&self) -> usize {
        self.stable_from
    }

    /// Number of terms computed so far.
    pub fn realized(&self) -> usize {
        self.terms.lock().expect("terms").len()
    }

    /// `F_n`, computing intermediate terms as needed.
    pub fn term(&self, n: usize) -> Result<Arc<GradedSubmodule>> {
        loop {
            let last = {
                let terms = self.terms.lock().expect("terms");
                if let Some(t) = terms.get(n) {
                    return Ok(t.clone());
                }
                terms.last().expect("F_0 exists").clone()
            };
            let next = Arc::new(GradedSubmodule::product(&self.ideal, &last)?);
            self.terms.lock().expect("terms").push(next);
        }
    }

    /// `F_0`, the filtered module.
    pub fn module(&self) -> Arc<GradedSubmodule> {
        self.term(0).expect("F_0 exists")
    }

    /// `H(F, n) = ℓ(F_n / F_{n+1})`.
    pub fn hilbert_function(&self, n: usize) -> Result<u64> {
        self.term(n)?.length_over(&*self.term(n + 1)?)
    }

    /// `ℓ(F_0 / F_{n+1})`.
    pub fn colength(&self, n: usize) -> Result<u64> {
        self.module().length_over(&*self.term(n + 1)?)
    }

    /// The filtration induced on `F_0 / x F_0`.
    pub fn quotient(&self, x: &Polynomial) -> Result<Filtration> {
        if self.dim == 0 {
            return Err(Error::Hypothesis(
                "cannot cut down a zero-dimensional module".into(),
            ));
        }
        let m = self.module();
        let extra: Vec<ModElem> = m.generators().iter().map(|(_, g)| g.mul_poly(x)).collect();
        let ambient = self.ambient.extend(extra);
        let head = (0..=self.stable_from)
            .map(|n| Ok(Arc::new(self.term(n)?.transport(&ambient)?)))
            .collect::<Result<Vec<_>>>()?;
        let mut by = match &self.kind {
            FiltrationKind::Quotient(v) => v.clone(),
            _ => Vec::new(),
        };
        by.push(x.clone());
        let mut f = Filtration::from_head(
            self.ideal.clone(),
            head,
            FiltrationKind::Quotient(by),
            self.dim - 1,
        )?;
        f.window = self.window;
        Ok(f)
    }

    /// Hilbert data, computed once and cached.
    pub fn hilbert_data(&self) -> Result<&HilbertData> {
        if let Some(h) = self.hilbert.get() {
            return Ok(h);
        }
        let h = hilbert::compute(self)?;
        Ok(self.hilbert.get_or_init(|| h))
    }

    /// `P(n) − ℓ(F_0/F_{n+1})`, with `P` the Hilbert-Samuel polynomial.
    pub fn p_minus_h(&self, n: usize) -> Result<num_bigint::BigInt> {
        let hd = self.hilbert_data()?;
        Ok(hd.hilbert_samuel(n as u64) - num_bigint::BigInt::from(self.colength(n)?))
    }

    /// `(sub :_M ideal)` with `M = F_0`.
    pub fn colon(&self, sub: &GradedSubmodule, ideal: &GradedSubmodule) -> Result<GradedSubmodule> {
        sub.colon_within(ideal, &self.module(), None)
    }

    /// `a ∩ b` for submodules of `F_0`.
    pub fn meet(&self, a: &GradedSubmodule, b: &GradedSubmodule) -> Result<GradedSubmodule> {
        a.intersect_within(b, &self.module(), None)
    }

    /// Checks the filtration axioms on `F_0..=F_upto`: descending and `I·F_n ⊆ F_{n+1}`.
    pub fn check_axioms(&self, upto: usize) -> Result<()> {
        for n in 0..upto {
            let a = self.term(n)?;
            let b = self.term(n + 1)?;
            a.check_contains(&b)
                .map_err(|e| Error::Internal(format!("F_{} ⊄ F_{n}: {e}", n + 1)))?;
            let ib = GradedSubmodule::product(&self.ideal, &a)?;
            b.check_contains(&ib)
                .map_err(|e| Error::Internal(format!("I·F_{n} ⊄ F_{}: {e}", n + 1)))?;
        }
        Ok(())
    }
}
