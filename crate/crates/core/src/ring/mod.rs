//! Positively graded polynomial rings over Q, optionally modulo homogeneous relations.

mod parse;
mod poly;

pub use parse::parse_polynomial;
pub use poly::{Monomial, Polynomial};

use std::collections::HashSet;
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::module::{Ambient, FreeModule, DEFAULT_DEGREE_BOUND};

/// A graded polynomial ring `Q[x_1..x_k] / (relations)` with a declared Krull dimension.
///
/// The maximal ideal `m` is the ideal generated by all variables.
#[derive(Debug)]
pub struct RingDescriptor {
    variable_names: Vec<String>,
    variable_degrees: Vec<u32>,
    relations: Vec<Polynomial>,
    krull_dim: usize,
    degree_bound: i32,
    // the ring as a rank-one module over itself, shared by all ideals
    unit_ambient: OnceLock<Arc<Ambient>>,
}

pub type Ring = Arc<RingDescriptor>;

impl RingDescriptor {
    /// Builds a ring after checking names, weights, homogeneity of the relations
    /// and `krull_dim <= #variables`.
    pub fn new(
        variable_names: Vec<String>,
        variable_degrees: Option<Vec<u32>>,
        relations: Vec<Polynomial>,
        krull_dim: usize,
    ) -> Result<Ring> {
        let k = variable_names.len();
        let degrees = variable_degrees.unwrap_or_else(|| vec![1; k]);
        if degrees.len() != k {
            return Err(Error::InvalidRing(format!(
                "{} variables but {} degrees",
                k,
                degrees.len()
            )));
        }
        if degrees.contains(&0) {
            return Err(Error::InvalidRing(
                "variable degrees must be positive".into(),
            ));
        }
        let mut seen = HashSet::new();
        for name in &variable_names {
            let valid = name
                .chars()
                .next()
                .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid {
                return Err(Error::InvalidRing(format!("`{name}` is not an identifier")));
            }
            if !seen.insert(name.as_str()) {
                return Err(Error::InvalidRing(format!("duplicate variable `{name}`")));
            }
        }
        if krull_dim > k {
            return Err(Error::InvalidRing(format!(
                "declared dimension {krull_dim} exceeds the number of variables {k}"
            )));
        }
        let mut ring = RingDescriptor {
            variable_names,
            variable_degrees: degrees,
            relations: Vec::new(),
            krull_dim,
            degree_bound: DEFAULT_DEGREE_BOUND,
            unit_ambient: OnceLock::new(),
        };
        for r in &relations {
            if r.nvars() != k && !r.is_zero() {
                return Err(Error::InvalidRing("relation has the wrong arity".into()));
            }
            if !r.is_zero() && ring.homogeneous_degree(r).is_none() {
                return Err(Error::NotHomogeneous(r.display(&ring).to_string()));
            }
        }
        ring.relations = relations.into_iter().filter(|r| !r.is_zero()).collect();
        Ok(Arc::new(ring))
    }

    /// Standard-graded polynomial ring with the given variables and no relations.
    pub fn polynomial(names: &[&str]) -> Ring {
        Self::new(
            names.iter().map(|s| s.to_string()).collect(),
            None,
            Vec::new(),
            names.len(),
        )
        .expect("valid polynomial ring")
    }

    /// Standard-graded quotient ring; relations are given as text.
    pub fn quotient(names: &[&str], relations: &[&str], krull_dim: usize) -> Result<Ring> {
        let base = Self::polynomial(names);
        let rels = relations
            .iter()
            .map(|r| base.parse(r))
            .collect::<Result<Vec<_>>>()?;
        Self::new(
            names.iter().map(|s| s.to_string()).collect(),
            None,
            rels,
            krull_dim,
        )
    }

    /// The same ring with a different working degree bound for every ambient built over it.
    pub fn with_degree_bound(&self, bound: i32) -> Ring {
        Arc::new(RingDescriptor {
            variable_names: self.variable_names.clone(),
            variable_degrees: self.variable_degrees.clone(),
            relations: self.relations.clone(),
            krull_dim: self.krull_dim,
            degree_bound: bound,
            unit_ambient: OnceLock::new(),
        })
    }

    pub fn degree_bound(&self) -> i32 {
        self.degree_bound
    }

    pub fn nvars(&self) -> usize {
        self.variable_names.len()
    }

    pub fn variable_names(&self) -> &[String] {
        &self.variable_names
    }

    pub fn variable_degrees(&self) -> &[u32] {
        &self.variable_degrees
    }

    pub fn max_variable_degree(&self) -> u32 {
        self.variable_degrees.iter().copied().max().unwrap_or(1)
    }

    pub fn relations(&self) -> &[Polynomial] {
        &self.relations
    }

    pub fn krull_dim(&self) -> usize {
        self.krull_dim
    }

    pub fn variable_index(&self, name: &str) -> Option<usize> {
        self.variable_names.iter().position(|n| n == name)
    }

    pub fn variable(&self, i: usize) -> Polynomial {
        Polynomial::monomial(Monomial::variable(self.nvars(), i), crate::linalg::q(1))
    }

    pub fn monomial_degree(&self, m: &Monomial) -> u32 {
        m.weighted_degree(&self.variable_degrees)
    }

    /// The common degree of all terms, or `None` if the polynomial is zero or inhomogeneous.
    pub fn homogeneous_degree(&self, p: &Polynomial) -> Option<u32> {
        let mut degs = p.terms().map(|(m, _)| self.monomial_degree(m));
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn parse(&self, text: &str) -> Result<Polynomial> {
        parse_polynomial(text, self)
    }

    /// All monomials of weighted degree `d`, in descending lexicographic order.
    pub fn monomials_of_degree(&self, d: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut exps = vec![0u32; self.nvars()];
        self.enumerate(0, d, &mut exps, &mut out);
        out
    }

    fn enumerate(&self, i: usize, rest: u32, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i == self.nvars() {
            if rest == 0 {
                out.push(Monomial::new(exps.clone()));
            }
            return;
        }
        let w = self.variable_degrees[i];
        let mut e = rest / w;
        loop {
            exps[i] = e;
            self.enumerate(i + 1, rest - e * w, exps, out);
            if e == 0 {
                break;
            }
            e -= 1;
        }
        exps[i] = 0;
    }

    /// The ring viewed as a free module of rank one over itself (modulo its relations).
    pub fn unit_ambient(self: &Arc<Self>) -> Arc<Ambient> {
        self.unit_ambient
            .get_or_init(|| Ambient::new(FreeModule::new(self.clone(), vec![0]), Vec::new()))
            .clone()
    }

    /// A basis of the degree-`d` piece of the ring, as residue classes of monomials.
    ///
    /// The relation multiples of degree `d` are row-reduced inside the monomial
    /// basis; the monomials that are not pivots form the basis.
    pub fn degree_basis(self: &Arc<Self>, d: u32) -> Vec<Monomial> {
        let amb = self.unit_ambient();
        let space = amb.space(d as i32);
        space
            .normal_columns()
            .map(|c| space.column(c).1.clone())
            .collect()
    }
}

impl fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q[{}]", self.variable_names.join(","))?;
        if !self.relations.is_empty() {
            let rels: Vec<String> = self
                .relations
                .iter()
                .map(|r| r.display(self).to_string())
                .collect();
            write!(f, "/({})", rels.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binomial(n: u64, k: u64) -> u64 {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn degree_basis_examples() {
        let r = RingDescriptor::polynomial(&["x", "y", "z"]);
        assert_eq!(r.degree_basis(2).len(), 6);

        let s = RingDescriptor::quotient(&["x", "y", "u", "v"], &["x*v - y*u"], 3).unwrap();
        assert_eq!(s.degree_basis(2).len(), 9);

        let t = RingDescriptor::quotient(&["x", "y"], &["y^2"], 1).unwrap();
        let b = t.degree_basis(3);
        let shown: Vec<String> = b
            .iter()
            .map(|m| {
                Polynomial::monomial(m.clone(), crate::linalg::q(1))
                    .display(&t)
                    .to_string()
            })
            .collect();
        assert_eq!(shown, vec!["x^3", "x^2*y"]);
    }

    #[test]
    fn polynomial_ring_piece_dimensions_are_binomials() {
        for k in 1..=5usize {
            let names: Vec<String> = (0..k).map(|i| format!("x{i}")).collect();
            let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
            let r = RingDescriptor::polynomial(&refs);
            for d in 0..=12u32 {
                let expect = binomial(d as u64 + k as u64 - 1, k as u64 - 1);
                assert_eq!(r.monomials_of_degree(d).len() as u64, expect, "k={k} d={d}");
                if k <= 3 {
                    assert_eq!(r.degree_basis(d).len() as u64, expect);
                }
            }
        }
    }

    #[test]
    fn ring_validation() {
        assert!(RingDescriptor::new(vec!["x".into(), "x".into()], None, vec![], 1).is_err());
        assert!(RingDescriptor::new(vec!["x".into()], None, vec![], 2).is_err());
        assert!(RingDescriptor::quotient(&["x", "y"], &["x^2 - y"], 1).is_err());
        let w =
            RingDescriptor::new(vec!["x".into(), "y".into()], Some(vec![1, 2]), vec![], 2).unwrap();
        assert!(
            w.parse("x^2 - y")
                .map(|p| w.homogeneous_degree(&p))
                .unwrap()
                == Some(2)
        );
        assert_eq!(w.monomials_of_degree(4).len(), 3);
    }

    #[test]
    fn multiplication_stays_in_graded_pieces() {
        let r = RingDescriptor::quotient(&["x", "y", "z", "w"], &["w^2 - x*y"], 3).unwrap();
        let amb = r.unit_ambient();
        for d1 in 0..3u32 {
            for d2 in 0..3u32 {
                for a in r.degree_basis(d1) {
                    for b in r.degree_basis(d2) {
                        let p = a.mul(&b);
                        assert_eq!(r.monomial_degree(&p), d1 + d2);
                        // the product has a normal form in the degree d1+d2 piece
                        let sp = amb.space((d1 + d2) as i32);
                        let v = sp.encode(&[Polynomial::monomial(p, crate::linalg::q(1))]);
                        let nf = sp.base().reduce(&v);
                        assert!(nf.entries().iter().all(|(c, _)| !sp.base().is_pivot(*c)));
                    }
                }
            }
        }
    }
}
