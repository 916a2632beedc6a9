//! Graded free modules, module presentations and their graded submodules.
//!
//! Every computation happens degreewise inside a free module `P^r` over the
//! polynomial ring `P`. Ring relations and presentation columns form the
//! *base* of an [`Ambient`]: each degree piece of a submodule is stored as a
//! subspace containing the base piece, so lengths and equalities are those of
//! the quotient module.

mod space;
mod submodule;

pub use space::{Ambient, DegreeSpace, DEFAULT_DEGREE_BOUND};
pub use submodule::{GradedSubmodule, Piece};

use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::linalg::q;
use crate::ring::{Polynomial, Ring, RingDescriptor};

/// `⊕ A(-t_i)`: a free module with generators in degrees `twists`.
#[derive(Clone, Debug)]
pub struct FreeModule {
    ring: Ring,
    twists: Vec<i32>,
}

impl FreeModule {
    pub fn new(ring: Ring, twists: Vec<i32>) -> Self {
        FreeModule { ring, twists }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn twists(&self) -> &[i32] {
        &self.twists
    }

    pub fn rank(&self) -> usize {
        self.twists.len()
    }

    pub fn same_as(&self, other: &FreeModule) -> bool {
        Arc::ptr_eq(&self.ring, &other.ring) && self.twists == other.twists
    }

    /// The `i`-th basis vector.
    pub fn basis_element(&self, i: usize) -> ModElem {
        let n = self.ring.nvars();
        let mut comps = vec![Polynomial::zero(); self.rank()];
        comps[i] = Polynomial::constant(n, q(1));
        ModElem { comps }
    }

    /// Degree of a homogeneous element; `None` for zero or inhomogeneous input.
    pub fn degree_of(&self, v: &ModElem) -> Option<i32> {
        let mut deg = None;
        for (p, &t) in v.comps.iter().zip(&self.twists) {
            for (m, _) in p.terms() {
                let d = self.ring.monomial_degree(m) as i32 + t;
                match deg {
                    None => deg = Some(d),
                    Some(e) if e != d => return None,
                    _ => {}
                }
            }
        }
        deg
    }
}

/// A vector of polynomials, one per free generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModElem {
    comps: Vec<Polynomial>,
}

impl ModElem {
    pub fn new(comps: Vec<Polynomial>) -> Self {
        ModElem { comps }
    }

    /// An element of the ring viewed as a rank-one module.
    pub fn scalar(p: Polynomial) -> Self {
        ModElem { comps: vec![p] }
    }

    pub fn comps(&self) -> &[Polynomial] {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|p| p.is_zero())
    }

    pub fn mul_poly(&self, p: &Polynomial) -> ModElem {
        ModElem {
            comps: self.comps.iter().map(|c| c.mul(p)).collect(),
        }
    }

    pub fn display(&self, ring: &RingDescriptor) -> String {
        if self.comps.len() == 1 {
            return self.comps[0].display(ring).to_string();
        }
        let parts: Vec<String> = self
            .comps
            .iter()
            .map(|p| p.display(ring).to_string())
            .collect();
        format!("[{}]", parts.join(", "))
    }
}

/// A finitely presented graded module: the cokernel of a homogeneous matrix.
///
/// The matrix is given by its columns, each an element of the free module.
#[derive(Debug)]
pub struct ModulePresentation {
    free: FreeModule,
    columns: Vec<ModElem>,
    ambient: OnceLock<Arc<Ambient>>,
}

impl ModulePresentation {
    pub fn new(free: FreeModule, columns: Vec<ModElem>) -> Result<Self> {
        for c in &columns {
            if c.comps.len() != free.rank() {
                return Err(Error::AmbientMismatch(format!(
                    "presentation column has {} entries, free module has rank {}",
                    c.comps.len(),
                    free.rank()
                )));
            }
            if !c.is_zero() && free.degree_of(c).is_none() {
                return Err(Error::NotHomogeneous(c.display(free.ring())));
            }
        }
        Ok(ModulePresentation {
            free,
            columns: columns.into_iter().filter(|c| !c.is_zero()).collect(),
            ambient: OnceLock::new(),
        })
    }

    /// The ring as a module over itself.
    pub fn ring_itself(ring: &Ring) -> Self {
        ModulePresentation {
            free: FreeModule::new(ring.clone(), vec![0]),
            columns: Vec::new(),
            ambient: OnceLock::new(),
        }
    }

    /// `A^r` with generators in degree zero.
    pub fn free_of_rank(ring: &Ring, r: usize) -> Self {
        ModulePresentation {
            free: FreeModule::new(ring.clone(), vec![0; r]),
            columns: Vec::new(),
            ambient: OnceLock::new(),
        }
    }

    /// Cokernel of a matrix given row by row (as in `coker [[w, x],[y, w]]`).
    ///
    /// Twists are chosen so that every column is homogeneous: row `i` gets twist
    /// `-(degree of its first nonzero entry) + column degree`, computed from the
    /// first column with a nonzero entry in that row; rows with no nonzero
    /// entries get twist 0.
    #[allow(clippy::needless_range_loop)]
    pub fn cokernel(ring: &Ring, rows: Vec<Vec<Polynomial>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::Input("ragged presentation matrix".into()));
        }
        // Column degrees: each column sits in degree (entry degree + row twist).
        // Take row 0 twist 0 when possible and propagate through shared columns.
        let mut twists: Vec<Option<i32>> = vec![None; nrows];
        let mut col_deg: Vec<Option<i32>> = vec![None; ncols];
        let entry_deg = |i: usize, j: usize| -> Result<Option<i32>> {
            let p = &rows[i][j];
            if p.is_zero() {
                return Ok(None);
            }
            ring.homogeneous_degree(p)
                .map(|d| Some(d as i32))
                .ok_or_else(|| Error::NotHomogeneous(p.display(ring).to_string()))
        };
        for start in 0..nrows {
            if twists[start].is_some() {
                continue;
            }
            twists[start] = Some(0);
            let mut changed = true;
            while changed {
                changed = false;
                for i in 0..nrows {
                    for j in 0..ncols {
                        let Some(e) = entry_deg(i, j)? else { continue };
                        match (twists[i], col_deg[j]) {
                            (Some(t), None) => {
                                col_deg[j] = Some(e + t);
                                changed = true;
                            }
                            (None, Some(c)) => {
                                twists[i] = Some(c - e);
                                changed = true;
                            }
                            (Some(t), Some(c)) if c != e + t => {
                                return Err(Error::NotHomogeneous(format!(
                                    "presentation matrix cannot be graded (row {i}, column {j})"
                                )));
                            }
                            _ => {}
                        }
                    }
                }
            }
        }
        let mut twists: Vec<i32> = twists.into_iter().map(|t| t.unwrap_or(0)).collect();
        // generators in nonnegative degrees starting at 0
        let min = twists.iter().copied().min().unwrap_or(0);
        for t in &mut twists {
            *t -= min;
        }
        let columns = (0..ncols)
            .map(|j| ModElem::new((0..nrows).map(|i| rows[i][j].clone()).collect()))
            .collect();
        Self::new(FreeModule::new(ring.clone(), twists), columns)
    }

    pub fn free(&self) -> &FreeModule {
        &self.free
    }

    pub fn ring(&self) -> &Ring {
        &self.free.ring
    }

    pub fn columns(&self) -> &[ModElem] {
        &self.columns
    }

    /// The ambient in which submodules of this module are computed.
    pub fn ambient(&self) -> Arc<Ambient> {
        self.ambient
            .get_or_init(|| {
                if self.columns.is_empty() && self.free.twists == [0] {
                    self.free.ring.unit_ambient()
                } else {
                    Ambient::new(self.free.clone(), self.columns.clone())
                }
            })
            .clone()
    }

    /// The whole module `M` as a submodule of itself.
    pub fn whole(&self) -> GradedSubmodule {
        GradedSubmodule::whole(&self.ambient())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cokernel_twists_make_columns_homogeneous() {
        let r = RingDescriptor::quotient(&["x", "y", "z", "w"], &["w^2 - x*y"], 3).unwrap();
        let p = |s: &str| r.parse(s).unwrap();
        let m = ModulePresentation::cokernel(&r, vec![vec![p("w"), p("x")], vec![p("y"), p("w")]])
            .unwrap();
        assert_eq!(m.free().twists(), &[0, 0]);
        for c in m.columns() {
            assert_eq!(m.free().degree_of(c), Some(1));
        }
        // a mixed-degree matrix gets nontrivial twists
        let s = RingDescriptor::polynomial(&["x", "y"]);
        let p = |t: &str| s.parse(t).unwrap();
        let n = ModulePresentation::cokernel(&s, vec![vec![p("x^2")], vec![p("y")]]).unwrap();
        assert_eq!(n.free().twists(), &[0, 1]);
        assert_eq!(n.free().degree_of(&n.columns()[0]), Some(2));
    }
}
