use std::collections::{BTreeMap, HashSet};
use std::sync::{Arc, Mutex};

use super::space::{Ambient, DegreeSpace};
use super::{ModElem, ModulePresentation};
use crate::error::{Error, Result};
use crate::linalg::{q, Echelon, KernelBuilder, SparseVec};
use crate::ring::{Polynomial, Ring};

/// One degree piece of a submodule, as a subspace containing the base piece.
#[derive(Debug)]
pub enum Piece {
    /// The whole degree piece of the ambient.
    Full,
    /// Rows beyond the base; the subspace is base + rows.
    Sub(Echelon),
}

impl Piece {
    pub fn dim(&self, space: &DegreeSpace) -> usize {
        match self {
            Piece::Full => space.dim(),
            Piece::Sub(e) => e.rank(),
        }
    }

    /// Rows spanning the piece modulo the base.
    pub fn basis(&self, space: &DegreeSpace) -> Vec<SparseVec> {
        match self {
            Piece::Full => space.normal_columns().map(SparseVec::unit).collect(),
            Piece::Sub(e) => e.rows().to_vec(),
        }
    }

    pub fn reduce(&self, v: &SparseVec, space: &DegreeSpace) -> SparseVec {
        match self {
            Piece::Full => SparseVec::new(),
            Piece::Sub(e) => {
                debug_assert!(e.parent().is_some_and(|p| Arc::ptr_eq(p, space.base())));
                e.reduce(v)
            }
        }
    }
}

#[derive(Debug, Default, Clone)]
struct State {
    pieces: BTreeMap<i32, Arc<Piece>>,
    full_from: Option<i32>,
    useful: HashSet<usize>,
}

/// A graded submodule of an [`Ambient`], generated by homogeneous elements.
///
/// Degree pieces are computed on demand, lowest degree first, with
/// `S_d = base_d + span(gens of degree d) + Σ_v x_v · S_{d - deg x_v}`, and
/// cached. Once the pieces are full on a run of `max deg x_v` consecutive
/// degrees past every generator degree, all higher pieces are full and the
/// submodule is marked cofinite from the start of that run.
#[derive(Debug)]
pub struct GradedSubmodule {
    ambient: Arc<Ambient>,
    gens: Vec<(i32, ModElem)>,
    gen_top: i32,
    exact_through: Option<i32>,
    state: Mutex<State>,
    powers: Mutex<Vec<Arc<GradedSubmodule>>>,
}

impl Clone for GradedSubmodule {
    fn clone(&self) -> Self {
        GradedSubmodule {
            ambient: self.ambient.clone(),
            gens: self.gens.clone(),
            gen_top: self.gen_top,
            exact_through: self.exact_through,
            state: Mutex::new(self.state.lock().expect("piece cache").clone()),
            powers: Mutex::new(Vec::new()),
        }
    }
}

impl GradedSubmodule {
    fn raw(ambient: Arc<Ambient>, mut gens: Vec<(i32, ModElem)>) -> Self {
        gens.sort_by_key(|(d, _)| *d);
        let gen_top = gens
            .iter()
            .map(|(d, _)| *d)
            .max()
            .unwrap_or(i32::MIN)
            .max(ambient.gen_top());
        GradedSubmodule {
            ambient,
            gens,
            gen_top,
            exact_through: None,
            state: Mutex::new(State::default()),
            powers: Mutex::new(Vec::new()),
        }
    }

    /// The submodule generated by `gens`. Zero generators are dropped.
    pub fn from_generators(ambient: &Arc<Ambient>, gens: Vec<ModElem>) -> Result<Self> {
        let mut out = Vec::new();
        for g in gens {
            if g.comps().len() != ambient.free().rank() {
                return Err(Error::AmbientMismatch(format!(
                    "generator has {} entries, ambient rank is {}",
                    g.comps().len(),
                    ambient.free().rank()
                )));
            }
            if g.is_zero() {
                continue;
            }
            let d = ambient
                .free()
                .degree_of(&g)
                .ok_or_else(|| Error::NotHomogeneous(g.display(ambient.ring())))?;
            out.push((d, g));
        }
        Ok(Self::raw(ambient.clone(), out))
    }

    /// The ideal generated by `gens` in `ring`.
    pub fn ideal(ring: &Ring, gens: Vec<Polynomial>) -> Result<Self> {
        Self::from_generators(
            &ring.unit_ambient(),
            gens.into_iter().map(ModElem::scalar).collect(),
        )
    }

    /// Parses each generator with the ring's grammar.
    pub fn ideal_from_text(ring: &Ring, gens: &[&str]) -> Result<Self> {
        let polys = gens
            .iter()
            .map(|g| ring.parse(g))
            .collect::<Result<Vec<_>>>()?;
        Self::ideal(ring, polys)
    }

    /// The maximal homogeneous ideal, generated by all variables.
    pub fn maximal_ideal(ring: &Ring) -> Self {
        Self::ideal(ring, (0..ring.nvars()).map(|i| ring.variable(i)).collect())
            .expect("variables are homogeneous")
    }

    pub fn unit_ideal(ring: &Ring) -> Self {
        Self::ideal(ring, vec![Polynomial::constant(ring.nvars(), q(1))])
            .expect("constants are homogeneous")
    }

    pub fn zero(ambient: &Arc<Ambient>) -> Self {
        Self::raw(ambient.clone(), Vec::new())
    }

    /// The whole ambient module.
    pub fn whole(ambient: &Arc<Ambient>) -> Self {
        let free = ambient.free();
        let gens = (0..free.rank())
            .map(|i| (free.twists()[i], free.basis_element(i)))
            .collect();
        let s = Self::raw(ambient.clone(), gens);
        s.state.lock().expect("piece cache").full_from = Some(ambient.start_degree());
        s
    }

    /// Builds a submodule from explicitly computed pieces.
    ///
    /// `pieces` must be closed under multiplication by the variables. A degree
    /// without a key is the piece generated by the lower ones, and every degree
    /// `>= full_from` (when given) is full.
    pub(crate) fn from_pieces(
        ambient: &Arc<Ambient>,
        pieces: BTreeMap<i32, Echelon>,
        full_from: Option<i32>,
    ) -> Result<Self> {
        let ring = ambient.ring().clone();
        let start = ambient.start_degree();
        let maxw = ring.max_variable_degree() as i32;
        let explicit_top = pieces.keys().next_back().copied().unwrap_or(start - 1);
        let top = match full_from {
            Some(f) => explicit_top.max(f + maxw - 1).max(ambient.gen_top()),
            None => explicit_top,
        };
        let mut stored: BTreeMap<i32, Arc<Piece>> = BTreeMap::new();
        let mut gens = Vec::new();
        let rank = ambient.free().rank();
        for d in start..=top {
            let sp = ambient.space(d);
            let mut closure = Echelon::over(sp.base().clone());
            for (var, &w) in ring.variable_degrees().iter().enumerate() {
                let e = d - w as i32;
                let Some(prev) = stored.get(&e) else { continue };
                let psp = ambient.space(e);
                for row in prev.basis(&psp) {
                    closure.insert(&psp.mul_var_into(&row, var, &sp));
                }
            }
            // a degree without an explicit piece is generated by the lower ones
            let piece = match (full_from, pieces.get(&d)) {
                (Some(f), _) if d >= f => Piece::Full,
                (_, Some(e)) => Piece::Sub(e.clone()),
                (_, None) => Piece::Sub(closure.clone()),
            };
            for row in piece.basis(&sp) {
                if closure.insert(&row) {
                    gens.push(sp.decode(&row, rank));
                }
            }
            stored.insert(d, Arc::new(piece));
        }
        let s = Self::from_generators(ambient, gens)?;
        {
            let mut st = s.state.lock().expect("piece cache");
            st.pieces = stored;
            st.full_from = full_from;
            st.useful = (0..s.gens.len()).collect();
        }
        Ok(s)
    }

    pub fn ambient(&self) -> &Arc<Ambient> {
        &self.ambient
    }

    pub fn ring(&self) -> &Ring {
        self.ambient.ring()
    }

    /// Generators with their degrees, in ascending degree.
    pub fn generators(&self) -> &[(i32, ModElem)] {
        &self.gens
    }

    /// Generators as polynomials (for ideals).
    pub fn polynomial_generators(&self) -> Vec<Polynomial> {
        self.gens
            .iter()
            .map(|(_, g)| g.comps()[0].clone())
            .collect()
    }

    /// Largest degree of a generator of this submodule or of the ambient base.
    pub fn gen_top(&self) -> i32 {
        self.gen_top
    }

    /// `None` when every piece is exact; `Some(d)` when only pieces up to degree `d`
    /// are guaranteed (window-limited intersections).
    pub fn exact_through(&self) -> Option<i32> {
        self.exact_through
    }

    /// Degree from which every piece is certified full, if already known.
    pub fn full_from(&self) -> Option<i32> {
        self.state.lock().expect("piece cache").full_from
    }

    fn check_ambient(&self, other: &GradedSubmodule) -> Result<()> {
        if self.ambient.same_as(&other.ambient) {
            Ok(())
        } else {
            Err(Error::AmbientMismatch(
                "submodules live in different ambients".into(),
            ))
        }
    }

    /// The degree-`d` piece, computing lower pieces as needed.
    pub fn piece(&self, d: i32) -> Result<Arc<Piece>> {
        {
            let st = self.state.lock().expect("piece cache");
            if st.full_from.is_some_and(|f| d >= f) {
                return Ok(Arc::new(Piece::Full));
            }
            if let Some(p) = st.pieces.get(&d) {
                return Ok(p.clone());
            }
        }
        let bound = self.ambient.degree_bound();
        if d > bound {
            return Err(Error::bound(
                format!("piece of degree {d}"),
                bound as i64,
                format!("--bound {}", (d + 8).max(2 * bound)),
            ));
        }
        let start = self.ambient.start_degree();
        if d < start {
            let sp = self.ambient.space(d);
            return Ok(Arc::new(Piece::Sub(Echelon::over(sp.base().clone()))));
        }
        let maxw = self.ring().max_variable_degree() as i32;
        let mut run_start: Option<i32> = None;
        let mut last = None;
        for e in start..=d {
            let (cached, full_from) = {
                let st = self.state.lock().expect("piece cache");
                (st.pieces.get(&e).cloned(), st.full_from)
            };
            if full_from.is_some_and(|f| e >= f) {
                return Ok(Arc::new(Piece::Full));
            }
            let piece = match cached {
                Some(p) => p,
                None => {
                    let p = Arc::new(self.compute_piece(e)?);
                    self.state
                        .lock()
                        .expect("piece cache")
                        .pieces
                        .insert(e, p.clone());
                    p
                }
            };
            let sp = self.ambient.space(e);
            if piece.dim(&sp) == sp.dim() {
                let rs = *run_start.get_or_insert(e);
                if e - rs + 1 >= maxw && e >= self.gen_top {
                    self.state.lock().expect("piece cache").full_from = Some(rs);
                }
            } else {
                run_start = None;
            }
            last = Some(piece);
        }
        Ok(last.expect("loop ran at least once"))
    }

    fn compute_piece(&self, d: i32) -> Result<Piece> {
        let ring = self.ring().clone();
        let sp = self.ambient.space(d);
        let mut ech = Echelon::over(sp.base().clone());
        let start = self.ambient.start_degree();
        for (var, &w) in ring.variable_degrees().iter().enumerate() {
            let e = d - w as i32;
            if e < start {
                continue;
            }
            let prev = self.piece(e)?;
            let psp = self.ambient.space(e);
            for row in prev.basis(&psp) {
                ech.insert(&psp.mul_var_into(&row, var, &sp));
                if ech.rank() == sp.dim() {
                    break;
                }
            }
        }
        let mut useful = Vec::new();
        for (i, (gd, g)) in self.gens.iter().enumerate() {
            if *gd == d && ech.insert(&sp.encode_elem(g)) {
                useful.push(i);
            }
        }
        self.state
            .lock()
            .expect("piece cache")
            .useful
            .extend(useful);
        Ok(if ech.rank() == sp.dim() {
            Piece::Full
        } else {
            Piece::Sub(ech)
        })
    }

    /// `dim_Q` of the degree-`d` piece modulo the base.
    pub fn dim_at(&self, d: i32) -> Result<usize> {
        let p = self.piece(d)?;
        Ok(p.dim(&self.ambient.space(d)))
    }

    /// Computes pieces until the submodule is certified cofinite or `limit` is reached.
    pub fn certify_cofinite(&self, limit: i32) -> Result<Option<i32>> {
        let start = self.ambient.start_degree();
        let limit = limit.min(self.ambient.degree_bound());
        for d in start..=limit {
            if let Some(f) = self.full_from() {
                return Ok(Some(f));
            }
            self.piece(d)?;
        }
        Ok(self.full_from())
    }

    /// Like [`certify_cofinite`](Self::certify_cofinite) up to the working bound, but
    /// failing if no certificate is found.
    pub fn require_cofinite(&self, what: &str) -> Result<i32> {
        let bound = self.ambient.degree_bound();
        match self.certify_cofinite(bound)? {
            Some(f) => Ok(f),
            None => Err(Error::bound(
                format!("{what}: no finite-colength certificate"),
                bound as i64,
                format!("--bound {}", bound * 2),
            )),
        }
    }

    pub fn contains_element(&self, v: &ModElem) -> Result<bool> {
        if v.is_zero() {
            return Ok(true);
        }
        let d = self
            .ambient
            .free()
            .degree_of(v)
            .ok_or_else(|| Error::NotHomogeneous(v.display(self.ring())))?;
        let sp = self.ambient.space(d);
        let piece = self.piece(d)?;
        Ok(piece.reduce(&sp.encode_elem(v), &sp).is_zero())
    }

    /// Checks `other ⊆ self`, reporting the first degree where it fails.
    pub fn check_contains(&self, other: &GradedSubmodule) -> Result<()> {
        self.check_ambient(other)?;
        for (d, g) in &other.gens {
            let sp = self.ambient.space(*d);
            let piece = self.piece(*d)?;
            if !piece.reduce(&sp.encode_elem(g), &sp).is_zero() {
                return Err(Error::NotContained { degree: *d });
            }
        }
        Ok(())
    }

    pub fn contains(&self, other: &GradedSubmodule) -> Result<bool> {
        match self.check_contains(other) {
            Ok(()) => Ok(true),
            Err(Error::NotContained { .. }) => Ok(false),
            Err(e) => Err(e),
        }
    }

    pub fn equals(&self, other: &GradedSubmodule) -> Result<bool> {
        Ok(self.contains(other)? && other.contains(self)?)
    }

    /// Keeps only generators that are not in the span of lower pieces and
    /// earlier generators; the cached pieces carry over.
    pub fn trimmed(&self) -> Result<GradedSubmodule> {
        if let Some((d, _)) = self.gens.last() {
            let d = *d;
            if self.full_from().is_none_or(|f| d < f) {
                self.piece(d)?;
            }
        }
        let st = self.state.lock().expect("piece cache").clone();
        let gens: Vec<(i32, ModElem)> = self
            .gens
            .iter()
            .enumerate()
            .filter(|(i, _)| st.useful.contains(i))
            .map(|(_, g)| g.clone())
            .collect();
        let mut out = Self::raw(self.ambient.clone(), gens);
        out.exact_through = self.exact_through;
        let n = out.gens.len();
        *out.state.lock().expect("piece cache") = State {
            pieces: st.pieces,
            full_from: st.full_from,
            useful: (0..n).collect(),
        };
        Ok(out)
    }

    /// The same generators in another ambient over the same free module.
    pub fn transport(&self, ambient: &Arc<Ambient>) -> Result<GradedSubmodule> {
        if !ambient.free().same_as(self.ambient.free()) {
            return Err(Error::AmbientMismatch(
                "transport needs the same free module".into(),
            ));
        }
        let mut out = Self::raw(ambient.clone(), self.gens.clone());
        out.exact_through = self.exact_through;
        Ok(out)
    }

    pub fn sum(&self, other: &GradedSubmodule) -> Result<GradedSubmodule> {
        self.check_ambient(other)?;
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        let mut out = Self::raw(self.ambient.clone(), gens);
        out.exact_through = min_opt(self.exact_through, other.exact_through);
        Ok(out)
    }

    /// `ideal · self`, where `ideal` is an ideal of the same ring.
    pub fn product(ideal: &GradedSubmodule, module: &GradedSubmodule) -> Result<GradedSubmodule> {
        if !Arc::ptr_eq(ideal.ring(), module.ring()) {
            return Err(Error::AmbientMismatch(
                "ideal and module rings differ".into(),
            ));
        }
        if ideal.ambient.free().rank() != 1 || !ideal.ambient.extra().is_empty() {
            return Err(Error::AmbientMismatch(
                "left factor of a product must be an ideal".into(),
            ));
        }
        let mut gens = Vec::with_capacity(ideal.gens.len() * module.gens.len());
        for (di, gi) in &ideal.gens {
            let p = &gi.comps()[0];
            for (ds, s) in &module.gens {
                let v = s.mul_poly(p);
                if !v.is_zero() {
                    gens.push((di + ds, v));
                }
            }
        }
        let mut out = Self::raw(module.ambient.clone(), gens);
        out.exact_through = min_opt(ideal.exact_through, module.exact_through);
        out.trimmed()
    }

    /// `x · self` for a single ring element.
    pub fn times(&self, x: &Polynomial) -> Result<GradedSubmodule> {
        let principal = GradedSubmodule::ideal(self.ring(), vec![x.clone()])?;
        GradedSubmodule::product(&principal, self)
    }

    /// `self^n` for an ideal, memoized; `self^0` is the unit ideal.
    pub fn power(&self, n: usize) -> Result<Arc<GradedSubmodule>> {
        let mut memo = self.powers.lock().expect("power memo");
        if memo.is_empty() {
            memo.push(Arc::new(GradedSubmodule::unit_ideal(self.ring())));
            memo.push(Arc::new(self.clone()));
        }
        while memo.len() <= n {
            let prev = memo.last().expect("nonempty").clone();
            let next = GradedSubmodule::product(self, &prev)?;
            memo.push(Arc::new(next));
        }
        Ok(memo[n].clone())
    }

    /// True if the ideal contains a nonzero constant.
    pub fn is_unit_ideal(&self) -> Result<bool> {
        let sp = self.ambient.space(0);
        Ok(sp.dim() > 0 && self.dim_at(0)? == sp.dim())
    }

    /// `(self : ideal) = { v : g·v ∈ self for every generator g }`.
    ///
    /// Exact when `self` has finite colength (certified within the working
    /// bound, or within `window` when given); otherwise fails with an
    /// escalation hint.
    pub fn colon(&self, ideal: &GradedSubmodule, window: Option<i32>) -> Result<GradedSubmodule> {
        if !Arc::ptr_eq(ideal.ring(), self.ring()) {
            return Err(Error::AmbientMismatch(
                "ideal and module rings differ".into(),
            ));
        }
        if ideal.is_unit_ideal()? {
            return Ok(self.clone());
        }
        let bound = self.ambient.degree_bound();
        let limit = window.unwrap_or(bound);
        let Some(full) = self.certify_cofinite(limit)? else {
            return Err(Error::bound(
                "colon: numerator has no finite-colength certificate in the window",
                limit as i64,
                "a larger window, or a numerator of finite colength",
            ));
        };
        let polys: Vec<(i32, Polynomial)> = ideal
            .gens
            .iter()
            .map(|(d, g)| (*d, g.comps()[0].clone()))
            .collect();
        if polys.is_empty() {
            return Ok(GradedSubmodule::whole(&self.ambient));
        }
        let min_deg = polys.iter().map(|(d, _)| *d).min().expect("nonempty");
        let result_full = full - min_deg;
        let start = self.ambient.start_degree();
        let mut pieces = BTreeMap::new();
        for d in start..result_full {
            pieces.insert(d, self.colon_piece(&polys, d)?);
        }
        let mut out = GradedSubmodule::from_pieces(&self.ambient, pieces, Some(result_full))?;
        out.exact_through = min_opt(self.exact_through, ideal.exact_through);
        Ok(out)
    }

    /// Degree-`d` piece of `(self : (polys))`, exact for any `self`.
    pub(crate) fn colon_piece(&self, polys: &[(i32, Polynomial)], d: i32) -> Result<Echelon> {
        let sp = self.ambient.space(d);
        let mut kb = KernelBuilder::new();
        let targets: Vec<(Arc<DegreeSpace>, Arc<Piece>)> = polys
            .iter()
            .map(|(e, _)| {
                let t = self.ambient.space(d + e);
                self.piece(d + e).map(|p| (t, p))
            })
            .collect::<Result<_>>()?;
        for col in sp.normal_columns() {
            let unit = SparseVec::unit(col);
            let mut image = SparseVec::new();
            let mut offset = 0u32;
            for ((_, p), (tsp, tpiece)) in polys.iter().zip(&targets) {
                let prod = sp.mul_into(&unit, p, tsp);
                let r = tpiece.reduce(&prod, tsp);
                image = image.add_scaled(&q(1), &r.shifted(offset));
                offset += tsp.ncols() as u32;
            }
            kb.push(image, unit);
        }
        let mut ech = Echelon::over(sp.base().clone());
        for k in kb.into_kernel() {
            ech.insert(&k);
        }
        Ok(ech)
    }

    /// For `self ⊆ sup`: the least degree from which the two agree, certified by
    /// equal pieces on `max deg x_v` consecutive degrees past both generator tops.
    pub fn agrees_from(&self, sup: &GradedSubmodule, limit: i32) -> Result<Option<i32>> {
        self.check_ambient(sup)?;
        let start = self.ambient.start_degree();
        let maxw = self.ring().max_variable_degree() as i32;
        let top = self.gen_top.max(sup.gen_top);
        let mut run_start = None;
        for d in start..=limit.min(self.ambient.degree_bound()) {
            if self.dim_at(d)? == sup.dim_at(d)? {
                let rs = *run_start.get_or_insert(d);
                if d - rs + 1 >= maxw && d >= top {
                    return Ok(Some(rs));
                }
            } else {
                run_start = None;
            }
        }
        Ok(None)
    }

    /// The submodule with the given pieces below degree `from` that agrees
    /// with `tail` from degree `from` on. The pieces times any variable must
    /// land in the next pieces or in `tail`.
    pub(crate) fn from_pieces_with_tail(
        ambient: &Arc<Ambient>,
        pieces: BTreeMap<i32, Echelon>,
        tail: &GradedSubmodule,
        from: i32,
    ) -> Result<Self> {
        let maxw = ambient.ring().max_variable_degree() as i32;
        let head = Self::from_pieces(ambient, pieces, None)?;
        let mut gens = head.gens.clone();
        let rank = ambient.free().rank();
        for d in from..=(from + maxw - 1).max(tail.gen_top) {
            let sp = ambient.space(d);
            for row in tail.piece(d)?.basis(&sp) {
                gens.push((d, sp.decode(&row, rank)));
            }
        }
        let out = Self::raw(ambient.clone(), gens);
        {
            let head_state = head.state.lock().expect("piece cache");
            let mut st = out.state.lock().expect("piece cache");
            st.pieces = head_state
                .pieces
                .iter()
                .filter(|(d, _)| **d < from)
                .map(|(d, p)| (*d, p.clone()))
                .collect();
            st.useful = (0..head.gens.len()).collect();
        }
        out.trimmed()
    }

    /// `(self :_C ideal) = (self : ideal) ∩ C` for a container `C ⊇ self` that
    /// agrees with `self` in high degrees. With `C` the whole ambient this is
    /// [`colon`](Self::colon).
    pub fn colon_within(
        &self,
        ideal: &GradedSubmodule,
        container: &GradedSubmodule,
        window: Option<i32>,
    ) -> Result<GradedSubmodule> {
        if container.full_from() == Some(self.ambient.start_degree()) {
            return self.colon(ideal, window);
        }
        self.check_ambient(container)?;
        if ideal.is_unit_ideal()? {
            return Ok(self.clone());
        }
        let limit = window.unwrap_or(self.ambient.degree_bound());
        let Some(agree) = self.agrees_from(container, limit)? else {
            return Err(Error::bound(
                "colon: numerator does not reach its container in the window",
                limit as i64,
                "a larger window",
            ));
        };
        let polys: Vec<(i32, Polynomial)> = ideal
            .gens
            .iter()
            .map(|(d, g)| (*d, g.comps()[0].clone()))
            .collect();
        if polys.is_empty() {
            return Ok(container.clone());
        }
        let min_deg = polys.iter().map(|(d, _)| *d).min().expect("nonempty");
        let from = agree - min_deg;
        let mut pieces = BTreeMap::new();
        for d in self.ambient.start_degree()..from {
            pieces.insert(d, self.colon_piece_within(&polys, container, d)?);
        }
        let mut out = Self::from_pieces_with_tail(&self.ambient, pieces, container, from)?;
        out.exact_through = min_opt(self.exact_through, ideal.exact_through);
        Ok(out)
    }

    /// `self ∩ other` where both lie in `container` and one of them agrees with
    /// it in high degrees. With `C` the whole ambient this is
    /// [`intersect`](Self::intersect).
    pub fn intersect_within(
        &self,
        other: &GradedSubmodule,
        container: &GradedSubmodule,
        window: Option<i32>,
    ) -> Result<GradedSubmodule> {
        if container.full_from() == Some(self.ambient.start_degree()) {
            return self.intersect(other, window);
        }
        self.check_ambient(other)?;
        let limit = window.unwrap_or(self.ambient.degree_bound());
        let (near, far, from) = match self.agrees_from(container, limit)? {
            Some(d) => (self, other, d),
            None => match other.agrees_from(container, limit)? {
                Some(d) => (other, self, d),
                None => {
                    return Err(Error::bound(
                        "intersection: neither side reaches the container in the window",
                        limit as i64,
                        "a larger window",
                    ))
                }
            },
        };
        let mut pieces = BTreeMap::new();
        for d in self.ambient.start_degree()..from {
            pieces.insert(d, near.intersect_piece(far, d)?);
        }
        let mut out = Self::from_pieces_with_tail(&self.ambient, pieces, far, from)?;
        out.exact_through = min_opt(self.exact_through, other.exact_through);
        Ok(out)
    }

    /// Degree-`d` piece of `(self : (polys)) ∩ container`.
    pub(crate) fn colon_piece_within(
        &self,
        polys: &[(i32, Polynomial)],
        container: &GradedSubmodule,
        d: i32,
    ) -> Result<Echelon> {
        let sp = self.ambient.space(d);
        let colon = Piece::Sub(self.colon_piece(polys, d)?);
        Ok(intersect_pieces(&sp, &colon, &*container.piece(d)?))
    }

    /// `self ∩ other`. Exact when either side has finite colength (certified
    /// within `window`, or the working bound); otherwise the result is exact
    /// only through the window and says so in [`exact_through`](Self::exact_through).
    pub fn intersect(
        &self,
        other: &GradedSubmodule,
        window: Option<i32>,
    ) -> Result<GradedSubmodule> {
        self.check_ambient(other)?;
        let bound = self.ambient.degree_bound();
        let limit = window.unwrap_or(bound).min(bound);
        let maxw = self.ring().max_variable_degree() as i32;
        let start = self.ambient.start_degree();
        let fa = self.certify_cofinite(limit)?;
        let fb = other.certify_cofinite(limit)?;
        let (s, t, ft, fs) = match (fa, fb) {
            (_, Some(f)) => (self, other, f, fa),
            (Some(f), None) => (other, self, f, None),
            (None, None) => {
                let mut pieces = BTreeMap::new();
                for d in start..=limit {
                    pieces.insert(d, self.intersect_piece(other, d)?);
                }
                let mut out = GradedSubmodule::from_pieces(&self.ambient, pieces, None)?;
                out.exact_through = Some(
                    min_opt(
                        Some(limit),
                        min_opt(self.exact_through, other.exact_through),
                    )
                    .expect("some"),
                );
                return Ok(out);
            }
        };
        // beyond ft the intersection is s itself
        let full_from = fs.map(|f| f.max(ft));
        let top = (ft + maxw - 1).max(s.gen_top);
        let mut pieces = BTreeMap::new();
        for d in start..=top {
            if full_from.is_some_and(|f| d >= f) {
                break;
            }
            let e = if d < ft {
                s.intersect_piece(t, d)?
            } else {
                let sp = self.ambient.space(d);
                let mut ech = Echelon::over(sp.base().clone());
                for row in s.piece(d)?.basis(&sp) {
                    ech.insert(&row);
                }
                ech
            };
            pieces.insert(d, e);
        }
        let mut out = GradedSubmodule::from_pieces(&self.ambient, pieces, full_from)?;
        out.exact_through = min_opt(self.exact_through, other.exact_through);
        Ok(out)
    }

    fn intersect_piece(&self, other: &GradedSubmodule, d: i32) -> Result<Echelon> {
        let sp = self.ambient.space(d);
        Ok(intersect_pieces(&sp, &*self.piece(d)?, &*other.piece(d)?))
    }

    /// `ℓ(self / sub)` for `sub ⊆ self`.
    ///
    /// Sums piece dimension differences until both sides are certified full, or
    /// until they agree on `max deg x_v` consecutive degrees past every
    /// generator degree (after which they agree forever).
    pub fn length_over(&self, sub: &GradedSubmodule) -> Result<u64> {
        self.check_contains(sub)?;
        let start = self.ambient.start_degree();
        let bound = self.ambient.degree_bound();
        let maxw = self.ring().max_variable_degree() as i32;
        let top = self.gen_top.max(sub.gen_top);
        let mut total = 0u64;
        let mut agree_run = 0;
        for d in start..=bound {
            if let (Some(a), Some(b)) = (self.full_from(), sub.full_from()) {
                if d >= a.max(b) {
                    return Ok(total);
                }
            }
            let da = self.dim_at(d)?;
            let db = sub.dim_at(d)?;
            debug_assert!(da >= db);
            total += (da - db) as u64;
            if da == db {
                agree_run += 1;
                if agree_run >= maxw && d >= top {
                    return Ok(total);
                }
            } else {
                agree_run = 0;
            }
        }
        Err(Error::NotFinite { bound })
    }

    /// `ℓ(M / self)` where `M` is the whole ambient module.
    pub fn colength(&self) -> Result<u64> {
        GradedSubmodule::whole(&self.ambient).length_over(self)
    }

    /// Whether an ideal is primary to the maximal ideal, with the degree from which
    /// it contains the whole ring piece.
    ///
    /// A positive answer is certified by full pieces; a negative one by a variable
    /// whose pure powers survive modulo the ideal and the ring relations.
    pub fn is_m_primary(&self) -> Result<(bool, Option<i32>)> {
        let ring = self.ring().clone();
        let n = ring.nvars();
        let polys: Vec<Polynomial> = self
            .polynomial_generators()
            .into_iter()
            .chain(ring.relations().iter().cloned())
            .collect();
        for v in 0..n {
            let avoids_pure_power = polys.iter().all(|p| {
                p.terms().all(|(m, _)| {
                    m.exponents()
                        .iter()
                        .enumerate()
                        .any(|(i, &e)| i != v && e > 0)
                })
            });
            if avoids_pure_power {
                return Ok((false, None));
            }
        }
        match self.certify_cofinite(self.ambient.degree_bound())? {
            Some(t) => Ok((true, Some(t))),
            None => Err(Error::bound(
                "m-primary test inconclusive",
                self.ambient.degree_bound() as i64,
                "a larger --bound",
            )),
        }
    }

    /// `ideal · M` inside the ambient of the presented module `M`.
    pub fn apply_to_module(&self, module: &ModulePresentation) -> Result<GradedSubmodule> {
        GradedSubmodule::product(self, &module.whole())
    }
}

fn intersect_pieces(sp: &DegreeSpace, a: &Piece, b: &Piece) -> Echelon {
    let rows = match (a, b) {
        (_, Piece::Full) => a.basis(sp),
        (Piece::Full, _) => b.basis(sp),
        (Piece::Sub(ea), Piece::Sub(_)) => {
            let mut kb = KernelBuilder::new();
            for (i, row) in ea.rows().iter().enumerate() {
                kb.push(b.reduce(row, sp), SparseVec::unit(i as u32));
            }
            kb.into_kernel()
                .into_iter()
                .map(|tag| {
                    tag.entries().iter().fold(SparseVec::new(), |acc, (i, c)| {
                        acc.add_scaled(c, &ea.rows()[*i as usize])
                    })
                })
                .collect()
        }
    };
    let mut ech = Echelon::over(sp.base().clone());
    for r in rows {
        ech.insert(&r);
    }
    ech
}

fn min_opt(a: Option<i32>, b: Option<i32>) -> Option<i32> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingDescriptor;

    fn ideal(r: &Ring, gens: &[&str]) -> GradedSubmodule {
        GradedSubmodule::ideal_from_text(r, gens).unwrap()
    }

    #[test]
    fn piece_dimensions_and_lengths() {
        let r = RingDescriptor::polynomial(&["x", "y", "z"]);
        let i = ideal(&r, &["x^2 - y^2", "y^2 - z^2", "x*y", "x*z", "y*z"]);
        assert_eq!(i.dim_at(2).unwrap(), 5);
        assert_eq!(i.dim_at(3).unwrap(), 10);
        assert_eq!(i.colength().unwrap(), 5);
        assert_eq!(GradedSubmodule::maximal_ideal(&r).colength().unwrap(), 1);
        let s = RingDescriptor::polynomial(&["x", "y"]);
        assert_eq!(ideal(&s, &["x^2", "y^2"]).colength().unwrap(), 4);
        assert_eq!(
            ideal(&s, &["x^4", "x^3*y", "x*y^3", "y^4"])
                .colength()
                .unwrap(),
            11
        );
    }

    #[test]
    fn products_powers_and_colons() {
        let r = RingDescriptor::polynomial(&["x", "y"]);
        let m = GradedSubmodule::maximal_ideal(&r);
        let m2 = m.power(2).unwrap();
        assert!(m2.equals(&ideal(&r, &["x^2", "x*y", "y^2"])).unwrap());
        assert_eq!(m2.generators().len(), 3);
        let c = ideal(&r, &["x^2", "y^2"]).colon(&m, None).unwrap();
        assert!(c.equals(&ideal(&r, &["x^2", "x*y", "y^2"])).unwrap());

        let i = ideal(&r, &["x^4", "x^3*y", "x*y^3", "y^4"]);
        let i2 = i.power(2).unwrap();
        let rr = i2.colon(&i, None).unwrap();
        let x2y2 = ModElem::scalar(r.parse("x^2*y^2").unwrap());
        assert!(rr.contains_element(&x2y2).unwrap());
        assert!(!i.contains_element(&x2y2).unwrap());
        assert!(rr.contains(&i).unwrap());
    }

    #[test]
    fn intersections() {
        let r = RingDescriptor::polynomial(&["x", "y"]);
        let a = ideal(&r, &["x"])
            .intersect(&ideal(&r, &["y"]), None)
            .unwrap();
        assert!(a.equals(&ideal(&r, &["x*y"])).unwrap());
        let b = ideal(&r, &["x^2", "x*y"])
            .intersect(&ideal(&r, &["y"]), None)
            .unwrap();
        assert!(b.equals(&ideal(&r, &["x*y"])).unwrap());
        let c = ideal(&r, &["x^3", "y^2"])
            .intersect(&ideal(&r, &["x", "y^3"]), None)
            .unwrap();
        assert!(c.equals(&ideal(&r, &["x^3", "x*y^2", "y^3"])).unwrap());
        assert_eq!(c.exact_through(), None);
        // the cofinite side starts well below the other's fullness degree
        let d = ideal(&r, &["x^3", "y^3"])
            .intersect(&ideal(&r, &["x", "y"]), None)
            .unwrap();
        assert_eq!(d.dim_at(4).unwrap(), 4);
        assert_eq!(d.colength().unwrap(), 9);
    }

    #[test]
    fn quotient_ring_and_module_lengths() {
        let r = RingDescriptor::quotient(&["x", "y", "z", "w"], &["w^2 - x*y"], 3).unwrap();
        let p = |s: &str| r.parse(s).unwrap();
        let m = ModulePresentation::cokernel(&r, vec![vec![p("w"), p("x")], vec![p("y"), p("w")]])
            .unwrap();
        let amb = m.ambient();
        assert_eq!((amb.dim(0), amb.dim(1), amb.dim(2)), (2, 6, 12));
        let mm = GradedSubmodule::maximal_ideal(&r)
            .apply_to_module(&m)
            .unwrap();
        assert_eq!(m.whole().length_over(&mm).unwrap(), 2);
    }

    #[test]
    fn m_primary_detection() {
        let r = RingDescriptor::polynomial(&["x", "y"]);
        assert_eq!(
            ideal(&r, &["x^2", "y^3"]).is_m_primary().unwrap(),
            (true, Some(4))
        );
        assert_eq!(
            ideal(&r, &["x^2", "x*y"]).is_m_primary().unwrap(),
            (false, None)
        );
        let i = ideal(&r, &["x^2", "x*y"]);
        assert!(matches!(i.colength(), Err(Error::NotFinite { .. })));
    }

    #[test]
    fn containment_reports_degree() {
        let r = RingDescriptor::polynomial(&["x", "y"]);
        let a = ideal(&r, &["x^2", "y^2"]);
        let b = ideal(&r, &["x^2", "x*y^2", "x*y"]);
        assert_eq!(a.check_contains(&b), Err(Error::NotContained { degree: 2 }));
    }
}
