use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{Signed, Zero};

use super::{superficial_sequence, Filtration};
use crate::error::{Error, Result};
use crate::module::GradedSubmodule;

/// Hilbert function, h-polynomial and Hilbert coefficients of a filtration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertData {
    /// `H(F, n)` for `n = 0..hilbert.len()`.
    pub hilbert: Vec<u64>,
    /// Dimension `r` of the filtered module.
    pub dim: usize,
    /// Coefficients of `h(z)`, lowest degree first.
    pub h: Vec<BigInt>,
    /// `e_i = h^{(i)}(1)/i!` for `i = 0..=max(dim, deg h)`; entries past `dim`
    /// are convention-extended.
    pub e: Vec<BigInt>,
    /// Number of trailing zeros seen in `(1-z)^r Σ H(n) z^n` past `deg h`.
    pub zero_tail: usize,
    /// `ℓ(M/JM)` for a minimal reduction `J` generated by a regular sequence,
    /// when one was found; it always equals `e_0`.
    pub e0_cross_check: Option<u64>,
}

impl HilbertData {
    /// Builds the data from Hilbert function values. Returns `None` unless
    /// the numerator ends in at least `tail` zeros.
    pub fn from_values(hilbert: Vec<u64>, dim: usize, tail: usize) -> Option<HilbertData> {
        let numer = numerator(&hilbert, dim);
        let deg = numer.iter().rposition(|c| !c.is_zero());
        let zero_tail = numer.len() - deg.map_or(0, |d| d + 1);
        if zero_tail < tail {
            return None;
        }
        let h: Vec<BigInt> = numer[..deg.map_or(0, |d| d + 1)].to_vec();
        let top = dim.max(h.len().saturating_sub(1));
        let e = (0..=top)
            .map(|i| {
                h.iter()
                    .enumerate()
                    .map(|(k, c)| c * binomial(BigInt::from(k), BigInt::from(i)))
                    .sum()
            })
            .collect();
        Some(HilbertData {
            hilbert,
            dim,
            h,
            e,
            zero_tail,
            e0_cross_check: None,
        })
    }

    /// `e_i`, zero beyond the computed range.
    pub fn e(&self, i: usize) -> BigInt {
        self.e.get(i).cloned().unwrap_or_default()
    }

    /// Whether `e_i` is defined only through the extension `e_i = h^{(i)}(1)/i!`.
    pub fn is_extended(&self, i: usize) -> bool {
        i > self.dim
    }

    /// Degree of `h`, or `None` for the zero module.
    pub fn h_degree(&self) -> Option<usize> {
        self.h.len().checked_sub(1)
    }

    /// `P(n) = Σ_{i=0}^{r} (-1)^i e_i C(n + r - i, r - i)`, which equals
    /// `ℓ(M/F_{n+1})` for large `n`.
    pub fn hilbert_samuel(&self, n: u64) -> BigInt {
        let r = self.dim as u64;
        (0..=r)
            .map(|i| {
                let term =
                    self.e(i as usize) * binomial(BigInt::from(n + r - i), BigInt::from(r - i));
                if i % 2 == 0 {
                    term
                } else {
                    -term
                }
            })
            .sum()
    }

    /// Evaluates `Σ h_k z^k (1-z)^{-r}` back to Hilbert function values.
    pub fn expand(&self, count: usize) -> Vec<BigInt> {
        (0..count)
            .map(|n| {
                self.h
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| *k <= n)
                    .map(|(k, c)| {
                        if self.dim == 0 {
                            if k == n {
                                c.clone()
                            } else {
                                BigInt::zero()
                            }
                        } else {
                            let m = (n - k + self.dim - 1) as u64;
                            c * binomial(BigInt::from(m), BigInt::from(self.dim as u64 - 1))
                        }
                    })
                    .sum()
            })
            .collect()
    }

    pub fn h_is_nonnegative(&self) -> bool {
        !self.h.iter().any(|c| c.is_negative())
    }
}

/// Coefficients of `(1-z)^r Σ_{n < len} H(n) z^n`, truncated to `len` terms.
pub fn numerator(hilbert: &[u64], r: usize) -> Vec<BigInt> {
    let signs: Vec<BigInt> = (0..=r)
        .map(|j| {
            let b = binomial(BigInt::from(r), BigInt::from(j));
            if j % 2 == 0 {
                b
            } else {
                -b
            }
        })
        .collect();
    (0..hilbert.len())
        .map(|k| {
            (0..=r.min(k))
                .map(|j| &signs[j] * BigInt::from(hilbert[k - j]))
                .sum()
        })
        .collect()
}

pub(super) fn compute(f: &Filtration) -> Result<HilbertData> {
    let r = f.dim();
    let tail = r + 3;
    let min_len = f.stable_from() + tail + 1;
    let bound = f.ambient().degree_bound() as usize;
    let mut values = Vec::new();
    let mut data = loop {
        let n = values.len();
        if n > bound {
            return Err(Error::bound(
                "Hilbert numerator never reached a zero tail",
                bound as i64,
                "a larger --bound",
            ));
        }
        values.push(f.hilbert_function(n)?);
        if values.len() >= min_len {
            if let Some(d) = HilbertData::from_values(values.clone(), r, tail) {
                break d;
            }
        }
    };
    if data.e[0] <= BigInt::zero() && !f.module().equals(&GradedSubmodule::zero(f.ambient()))? {
        return Err(Error::Hypothesis(format!(
            "multiplicity {} for a nonzero module: the declared dimension {r} is too large",
            data.e[0]
        )));
    }
    data.e0_cross_check = cross_check(f, &data)?;
    Ok(data)
}

/// `ℓ(M/JM)` for `J` generated by a superficial sequence that is also
/// regular; compared against `e_0`.
fn cross_check(f: &Filtration, data: &HilbertData) -> Result<Option<u64>> {
    if f.dim() == 0 {
        return Ok(None);
    }
    let seq = match superficial_sequence(f, f.dim(), 0) {
        Ok(s) => s,
        Err(e) if e.is_inconclusive() => return Ok(None),
        Err(e) => return Err(e),
    };
    if !seq.certificates.iter().all(|c| c.regular) {
        return Ok(None);
    }
    let last = seq.quotient.expect("nonempty sequence");
    let len = last
        .module()
        .length_over(&GradedSubmodule::zero(last.ambient()))?;
    if BigInt::from(len) != data.e[0] {
        return Err(Error::Internal(format!(
            "e_0 = {} but ℓ(M/JM) = {len} for a regular minimal reduction",
            data.e[0]
        )));
    }
    Ok(Some(len))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn coefficients_from_known_series() {
        // 5 + 6z^2 - 4z^3 + z^4 over (1-z)^3
        let hd = HilbertData::from_values(vec![5, 15, 36, 64, 100, 144, 196, 256, 324, 400], 3, 3)
            .unwrap();
        assert_eq!(hd.h, big(&[5, 0, 6, -4, 1]));
        assert_eq!(hd.e, big(&[8, 4, 0, 0, 1]));
        assert!(hd.is_extended(4));
        assert_eq!(hd.hilbert_samuel(0), BigInt::from(4));
        assert_eq!(hd.expand(6), big(&[5, 15, 36, 64, 100, 144]));
    }

    #[test]
    fn short_tail_is_rejected() {
        assert!(HilbertData::from_values(vec![1, 2, 3], 2, 3).is_none());
        let hd = HilbertData::from_values(vec![1, 2, 3, 4, 5, 6], 2, 3).unwrap();
        assert_eq!(hd.h, big(&[1]));
        assert_eq!(hd.e, big(&[1, 0, 0]));
    }

    #[test]
    fn dimension_zero() {
        let hd = HilbertData::from_values(vec![1, 2, 1, 0, 0, 0], 0, 3).unwrap();
        assert_eq!(hd.h, big(&[1, 2, 1]));
        assert_eq!(hd.e[0], BigInt::from(4));
        assert_eq!(hd.expand(4), big(&[1, 2, 1, 0]));
        assert_eq!(hd.hilbert_samuel(7), BigInt::from(4));
    }
}
