use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use num_traits::Zero;

use super::{FreeModule, ModElem};
use crate::linalg::{Echelon, SparseVec, Q};
use crate::ring::{Monomial, Polynomial, Ring};

/// Default largest degree any piece computation may touch.
pub const DEFAULT_DEGREE_BOUND: i32 = 64;

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

/// A free module together with the submodule it is taken modulo.
///
/// The base is generated by `relation * e_i` for every ring relation and basis
/// vector, plus the extra elements (presentation columns, or elements `x * e_i`
/// for a quotient `M / xM`).
#[derive(Debug)]
pub struct Ambient {
    id: u64,
    free: FreeModule,
    extra: Vec<ModElem>,
    base_gens: Vec<(i32, ModElem)>,
    gen_top: i32,
    degree_bound: i32,
    spaces: Mutex<HashMap<i32, Arc<DegreeSpace>>>,
}

impl Ambient {
    pub fn new(free: FreeModule, extra: Vec<ModElem>) -> Arc<Self> {
        let bound = free.ring().degree_bound();
        Self::with_bound(free, extra, bound)
    }

    pub fn with_bound(free: FreeModule, extra: Vec<ModElem>, degree_bound: i32) -> Arc<Self> {
        assert!(
            free.ring().nvars() <= 15,
            "at most 15 variables are supported"
        );
        assert!(degree_bound < 256, "degree bound must stay below 256");
        let mut base_gens = Vec::new();
        for rel in free.ring().relations() {
            for i in 0..free.rank() {
                let mut comps = vec![Polynomial::zero(); free.rank()];
                comps[i] = rel.clone();
                let e = ModElem::new(comps);
                let d = free.degree_of(&e).expect("relations are homogeneous");
                base_gens.push((d, e));
            }
        }
        for e in &extra {
            if e.is_zero() {
                continue;
            }
            let d = free
                .degree_of(e)
                .expect("ambient extra elements must be homogeneous");
            base_gens.push((d, e.clone()));
        }
        let gen_top = base_gens
            .iter()
            .map(|(d, _)| *d)
            .chain(free.twists().iter().copied())
            .max()
            .unwrap_or(0);
        Arc::new(Ambient {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            free,
            extra,
            base_gens,
            gen_top,
            degree_bound,
            spaces: Mutex::new(HashMap::new()),
        })
    }

    /// The quotient of this ambient by `x * (whole module)` for each `x`.
    pub fn quotient_by(&self, elements: &[Polynomial]) -> Arc<Ambient> {
        let mut extra = self.extra.clone();
        for x in elements {
            for i in 0..self.free.rank() {
                extra.push(self.free.basis_element(i).mul_poly(x));
            }
        }
        Self::with_bound(self.free.clone(), extra, self.degree_bound)
    }

    /// The quotient of this ambient by the submodule generated by `elements`.
    pub fn extend(&self, elements: Vec<ModElem>) -> Arc<Ambient> {
        let mut extra = self.extra.clone();
        extra.extend(elements);
        Self::with_bound(self.free.clone(), extra, self.degree_bound)
    }

    /// Same module, different working bound.
    pub fn rebound(&self, degree_bound: i32) -> Arc<Ambient> {
        Self::with_bound(self.free.clone(), self.extra.clone(), degree_bound)
    }

    pub fn same_as(&self, other: &Ambient) -> bool {
        self.id == other.id
    }

    pub fn free(&self) -> &FreeModule {
        &self.free
    }

    pub fn ring(&self) -> &Ring {
        self.free.ring()
    }

    pub fn extra(&self) -> &[ModElem] {
        &self.extra
    }

    pub fn degree_bound(&self) -> i32 {
        self.degree_bound
    }

    /// Largest degree of a free generator or base generator.
    pub fn gen_top(&self) -> i32 {
        self.gen_top
    }

    /// Smallest degree with a nonzero piece.
    pub fn start_degree(&self) -> i32 {
        self.free.twists().iter().copied().min().unwrap_or(0)
    }

    /// The degree-`d` piece: monomial columns and the base subspace.
    pub fn space(&self, d: i32) -> Arc<DegreeSpace> {
        if let Some(s) = self.spaces.lock().expect("space cache").get(&d) {
            return s.clone();
        }
        let s = Arc::new(DegreeSpace::build(self, d));
        self.spaces
            .lock()
            .expect("space cache")
            .entry(d)
            .or_insert(s)
            .clone()
    }

    /// `dim_Q M_d` for the module this ambient represents.
    pub fn dim(&self, d: i32) -> usize {
        self.space(d).dim()
    }
}

/// Columns of one degree piece of the free module and the base subspace in it.
#[derive(Debug)]
pub struct DegreeSpace {
    degree: i32,
    cols: Vec<(usize, Monomial)>,
    index: HashMap<u128, u32>,
    base: Arc<Echelon>,
}

fn key(comp: usize, m: &Monomial) -> u128 {
    let mut k = comp as u128;
    for &e in m.exponents() {
        debug_assert!(e < 256);
        k = (k << 8) | e as u128;
    }
    k
}

impl DegreeSpace {
    fn build(amb: &Ambient, d: i32) -> DegreeSpace {
        let ring = amb.ring();
        let mut cols = Vec::new();
        for (i, &t) in amb.free.twists().iter().enumerate() {
            if d >= t {
                for m in ring.monomials_of_degree((d - t) as u32) {
                    cols.push((i, m));
                }
            }
        }
        let index = cols
            .iter()
            .enumerate()
            .map(|(c, (i, m))| (key(*i, m), c as u32))
            .collect();
        let mut space = DegreeSpace {
            degree: d,
            cols,
            index,
            base: Arc::new(Echelon::new()),
        };
        let mut base = Echelon::new();
        for (gd, g) in &amb.base_gens {
            if *gd > d {
                continue;
            }
            for m in ring.monomials_of_degree((d - gd) as u32) {
                let v = space.encode_shifted(g, &m);
                base.insert(&v);
            }
        }
        space.base = Arc::new(base);
        space
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, c: u32) -> &(usize, Monomial) {
        &self.cols[c as usize]
    }

    pub fn column_of(&self, comp: usize, m: &Monomial) -> Option<u32> {
        self.index.get(&key(comp, m)).copied()
    }

    pub fn base(&self) -> &Arc<Echelon> {
        &self.base
    }

    /// Dimension of the degree piece modulo the base.
    pub fn dim(&self) -> usize {
        self.cols.len() - self.base.total_rank()
    }

    /// Columns that are not base pivots; their unit vectors form a basis modulo the base.
    pub fn normal_columns(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.cols.len() as u32).filter(|&c| !self.base.is_pivot(c))
    }

    fn encode_shifted(&self, v: &ModElem, m: &Monomial) -> SparseVec {
        let mut entries = Vec::new();
        for (i, p) in v.comps().iter().enumerate() {
            for (t, a) in p.terms() {
                let col = self
                    .column_of(i, &t.mul(m))
                    .expect("element lies in this degree");
                entries.push((col, a.clone()));
            }
        }
        SparseVec::from_entries(entries)
    }

    /// Coordinates of a homogeneous element of this degree.
    pub fn encode(&self, comps: &[Polynomial]) -> SparseVec {
        let n = comps.iter().find(|p| !p.is_zero()).map_or(0, |p| p.nvars());
        if n == 0 {
            return SparseVec::new();
        }
        self.encode_shifted(&ModElem::new(comps.to_vec()), &Monomial::one(n))
    }

    pub fn encode_elem(&self, v: &ModElem) -> SparseVec {
        self.encode(v.comps())
    }

    pub fn decode(&self, v: &SparseVec, rank: usize) -> ModElem {
        let mut comps = vec![Polynomial::zero(); rank];
        for (c, a) in v.entries() {
            let (i, m) = &self.cols[*c as usize];
            comps[*i].add_term(m.clone(), a.clone());
        }
        ModElem::new(comps)
    }

    /// `p * v`, landing in `target` (which must have degree `self.degree + deg p`).
    pub fn mul_into(&self, v: &SparseVec, p: &Polynomial, target: &DegreeSpace) -> SparseVec {
        let mut entries: Vec<(u32, Q)> = Vec::with_capacity(v.nnz() * p.len());
        for (c, a) in v.entries() {
            let (i, m) = &self.cols[*c as usize];
            for (t, b) in p.terms() {
                let col = target
                    .column_of(*i, &m.mul(t))
                    .expect("product lies in the target degree");
                let ab = a * b;
                if !ab.is_zero() {
                    entries.push((col, ab));
                }
            }
        }
        SparseVec::from_entries(entries)
    }

    /// `x_var * v` for a single variable.
    pub fn mul_var_into(&self, v: &SparseVec, var: usize, target: &DegreeSpace) -> SparseVec {
        let mut entries: Vec<(u32, Q)> = Vec::with_capacity(v.nnz());
        for (c, a) in v.entries() {
            let (i, m) = &self.cols[*c as usize];
            let mut e = m.exponents().to_vec();
            e[var] += 1;
            let col = target
                .column_of(*i, &Monomial::new(e))
                .expect("product lies in the target degree");
            entries.push((col, a.clone()));
        }
        entries.sort_by_key(|e| e.0);
        SparseVec::from_sorted(entries)
    }
}
