//! Exact sparse linear algebra over the rationals.
//!
//! Every vector space in the engine is a degree piece of a free module with a
//! fixed monomial basis, so vectors are sparse maps from column index to
//! rational. An [`Echelon`] keeps rows with a leading pivot of 1; reducing a
//! vector left to right against it yields a canonical normal form, which is
//! what makes subspace membership and equality exact.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational scalar.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Sparse vector sorted by column, no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparseVec {
    entries: Vec<(u32, Q)>,
}

impl SparseVec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn unit(col: u32) -> Self {
        SparseVec {
            entries: vec![(col, Q::one())],
        }
    }

    /// Builds a vector from unsorted entries; duplicates are summed and zeros dropped.
    pub fn from_entries(entries: impl IntoIterator<Item = (u32, Q)>) -> Self {
        let mut map: BTreeMap<u32, Q> = BTreeMap::new();
        for (c, a) in entries {
            *map.entry(c).or_insert_with(Q::zero) += a;
        }
        SparseVec {
            entries: map.into_iter().filter(|(_, a)| !a.is_zero()).collect(),
        }
    }

    pub(crate) fn from_sorted(entries: Vec<(u32, Q)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(entries.iter().all(|(_, a)| !a.is_zero()));
        SparseVec { entries }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(u32, Q)] {
        &self.entries
    }

    pub fn leading(&self) -> Option<&(u32, Q)> {
        self.entries.first()
    }

    pub fn get(&self, col: u32) -> Q {
        match self.entries.binary_search_by_key(&col, |e| e.0) {
            Ok(i) => self.entries[i].1.clone(),
            Err(_) => Q::zero(),
        }
    }

    pub fn scale(&self, a: &Q) -> SparseVec {
        if a.is_zero() {
            return SparseVec::new();
        }
        SparseVec {
            entries: self.entries.iter().map(|(c, b)| (*c, b * a)).collect(),
        }
    }

    /// `self + a * other`
    pub fn add_scaled(&self, a: &Q, other: &SparseVec) -> SparseVec {
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut i, mut j) = (0, 0);
        while i < self.entries.len() || j < other.entries.len() {
            let ci = self.entries.get(i).map(|e| e.0).unwrap_or(u32::MAX);
            let cj = other.entries.get(j).map(|e| e.0).unwrap_or(u32::MAX);
            if ci < cj {
                out.push(self.entries[i].clone());
                i += 1;
            } else if cj < ci {
                out.push((cj, &other.entries[j].1 * a));
                j += 1;
            } else {
                let s = &self.entries[i].1 + &other.entries[j].1 * a;
                if !s.is_zero() {
                    out.push((ci, s));
                }
                i += 1;
                j += 1;
            }
        }
        SparseVec { entries: out }
    }

    /// Rescales so that the leading coefficient is 1.
    pub fn monic(&self) -> SparseVec {
        match self.entries.first() {
            None => SparseVec::new(),
            Some((_, a)) if a.is_one() => self.clone(),
            Some((_, a)) => self.scale(&a.recip()),
        }
    }

    /// Shifts every column by `offset`.
    pub fn shifted(&self, offset: u32) -> SparseVec {
        SparseVec {
            entries: self
                .entries
                .iter()
                .map(|(c, a)| (c + offset, a.clone()))
                .collect(),
        }
    }

    /// Clears denominators and makes the leading coefficient positive.
    pub fn primitive_integer(&self) -> SparseVec {
        use num_integer::Integer;
        if self.is_zero() {
            return SparseVec::new();
        }
        let mut lcm = BigInt::one();
        for (_, a) in &self.entries {
            lcm = lcm.lcm(a.denom());
        }
        let mut gcd = BigInt::zero();
        for (_, a) in &self.entries {
            let n = a.numer() * (&lcm / a.denom());
            gcd = gcd.gcd(&n);
        }
        let mut factor = Q::new(lcm, gcd);
        if self.entries[0].1.is_negative() {
            factor = -factor;
        }
        self.scale(&factor)
    }
}

/// Rows in echelon form with pairwise distinct leading columns, each row monic.
///
/// An echelon may sit on top of a shared parent (the relation subspace of a
/// degree piece); reduction then uses both row sets.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    parent: Option<Arc<Echelon>>,
    rows: Vec<SparseVec>,
    pivots: HashMap<u32, usize>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn over(parent: Arc<Echelon>) -> Self {
        Echelon {
            parent: Some(parent),
            rows: Vec::new(),
            pivots: HashMap::new(),
        }
    }

    pub fn parent(&self) -> Option<&Arc<Echelon>> {
        self.parent.as_ref()
    }

    /// Rows owned by this echelon (excluding the parent).
    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn total_rank(&self) -> usize {
        self.rows.len() + self.parent.as_ref().map_or(0, |p| p.total_rank())
    }

    fn pivot_row(&self, col: u32) -> Option<&SparseVec> {
        if let Some(&i) = self.pivots.get(&col) {
            return Some(&self.rows[i]);
        }
        self.parent.as_ref().and_then(|p| p.pivot_row(col))
    }

    pub fn is_pivot(&self, col: u32) -> bool {
        self.pivot_row(col).is_some()
    }

    /// Canonical representative of `v` modulo the row space.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        if v.is_zero() {
            return SparseVec::new();
        }
        let mut work: BTreeMap<u32, Q> = v.entries.iter().cloned().collect();
        let mut out = Vec::new();
        while let Some((c, a)) = work.pop_first() {
            match self.pivot_row(c) {
                Some(row) => {
                    for (j, b) in &row.entries[1..] {
                        let slot = work.entry(*j).or_insert_with(Q::zero);
                        *slot -= &a * b;
                        if slot.is_zero() {
                            work.remove(j);
                        }
                    }
                }
                None => out.push((c, a)),
            }
        }
        SparseVec { entries: out }
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v` to the row space. Returns false if it was already there.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let r = self.reduce(v);
        self.push_reduced(r)
    }

    /// Adds a vector that is already in normal form.
    pub(crate) fn push_reduced(&mut self, r: SparseVec) -> bool {
        if r.is_zero() {
            return false;
        }
        let r = r.monic();
        let col = r.entries[0].0;
        // keep own rows fully reduced: clear the new pivot column elsewhere
        for row in &mut self.rows {
            let a = row.get(col);
            if !a.is_zero() {
                *row = row.add_scaled(&-a, &r);
            }
        }
        self.pivots.insert(col, self.rows.len());
        self.rows.push(r);
        true
    }
}

/// Linear dependency finder: each inserted image carries a tag recording which
/// domain combination produced it. Images that reduce to zero yield kernel
/// vectors (their reduced tags).
#[derive(Default)]
pub(crate) struct KernelBuilder {
    rows: Vec<(SparseVec, SparseVec)>,
    pivots: HashMap<u32, usize>,
    kernel: Vec<SparseVec>,
}

impl KernelBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, image: SparseVec, tag: SparseVec) {
        let mut work: BTreeMap<u32, Q> = image.entries.into_iter().collect();
        let mut tag = tag;
        let mut out = Vec::new();
        while let Some((c, a)) = work.pop_first() {
            match self.pivots.get(&c) {
                Some(&i) => {
                    let (row, row_tag) = &self.rows[i];
                    for (j, b) in &row.entries[1..] {
                        let slot = work.entry(*j).or_insert_with(Q::zero);
                        *slot -= &a * b;
                        if slot.is_zero() {
                            work.remove(j);
                        }
                    }
                    tag = tag.add_scaled(&-a, row_tag);
                }
                None => out.push((c, a)),
            }
        }
        if out.is_empty() {
            if !tag.is_zero() {
                self.kernel.push(tag);
            }
            return;
        }
        let inv = out[0].1.recip();
        let image = SparseVec { entries: out }.scale(&inv);
        let tag = tag.scale(&inv);
        self.pivots.insert(image.entries[0].0, self.rows.len());
        self.rows.push((image, tag));
    }

    pub fn into_kernel(self) -> Vec<SparseVec> {
        self.kernel
    }
}

/// Dense rational matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

/// Result of [`rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowReduction {
    pub rank: usize,
    pub pivot_cols: Vec<usize>,
    /// The nonzero rows of the reduced row-echelon form.
    pub basis: Vec<Vec<Q>>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![Q::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Q::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        RationalMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&a| q(a)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, a: Q) {
        self.data[i * self.cols + j] = a;
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
}

/// Exact reduced row-echelon form by Gauss-Jordan elimination.
pub fn rref(m: &RationalMatrix) -> RowReduction {
    let mut rows: Vec<Vec<Q>> = (0..m.rows).map(|i| m.row(i).to_vec()).collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for a in rows[r].iter_mut() {
            *a *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (a, b) in row.iter_mut().zip(&pivot_row) {
                *a -= &f * b;
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    RowReduction {
        rank: r,
        pivot_cols,
        basis: rows,
    }
}
