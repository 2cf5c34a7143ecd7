//! The equivariant Magnus matrix `A_f` over the group ring of `H_f`, its
//! traces of powers, specializations and characteristic polynomial.

use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;

use crate::cyclotomic::{CycElem, CyclotomicField};
use crate::error::{Error, Result};
use crate::group_ring::{Character, LaurentElement, LaurentRing};
use crate::ring::{self, Matrix};
use crate::transition::TransitionGraph;

/// Default size bound for the group-ring characteristic polynomial.
pub const DEFAULT_CHARPOLY_BOUND: usize = 12;

/// Square matrix of Laurent polynomials. Row `i`, column `j` collects the
/// transition arcs from edge `i` to edge `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MagnusMatrix {
    dim: usize,
    entries: Matrix<LaurentElement>,
}

impl MagnusMatrix {
    pub fn new(dim: usize, entries: Matrix<LaurentElement>) -> Result<Self> {
        let m = entries.len();
        for row in &entries {
            if row.len() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    found: row.len(),
                });
            }
            for x in row {
                if x.dim() != dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        found: x.dim(),
                    });
                }
            }
        }
        Ok(MagnusMatrix { dim, entries })
    }

    pub fn zeros(size: usize, dim: usize) -> Self {
        MagnusMatrix {
            dim,
            entries: vec![vec![LaurentElement::zero(dim); size]; size],
        }
    }

    /// An integer matrix viewed over the group ring of `Z^dim`.
    pub fn from_integers(rows: &[Vec<i64>], dim: usize) -> Self {
        MagnusMatrix {
            dim,
            entries: rows
                .iter()
                .map(|r| r.iter().map(|&x| LaurentElement::from_int(dim, x)).collect())
                .collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> &LaurentElement {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &Matrix<LaurentElement> {
        &self.entries
    }

    pub(crate) fn entry_mut(&mut self, i: usize, j: usize) -> &mut LaurentElement {
        &mut self.entries[i][j]
    }

    pub fn ring(&self) -> LaurentRing {
        LaurentRing { dim: self.dim }
    }

    pub fn mul(&self, other: &MagnusMatrix) -> MagnusMatrix {
        MagnusMatrix {
            dim: self.dim,
            entries: ring::mat_mul(&self.ring(), &self.entries, &other.entries),
        }
    }

    pub fn pow(&self, k: usize) -> MagnusMatrix {
        MagnusMatrix {
            dim: self.dim,
            entries: ring::mat_pow(&self.ring(), &self.entries, k),
        }
    }

    pub fn trace(&self) -> LaurentElement {
        ring::trace(&self.ring(), &self.entries)
    }

    /// `trace(A^k)` for `k >= 1`.
    pub fn trace_power(&self, k: usize) -> LaurentElement {
        self.pow(k).trace()
    }

    /// `[trace(A), trace(A^2), ..., trace(A^k)]`.
    pub fn trace_powers(&self, k: usize) -> Vec<LaurentElement> {
        ring::trace_powers(&self.ring(), &self.entries, k)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(|x| x.is_zero())
    }

    /// Exact specialization in `Q(ζ_order)`.
    pub fn specialize(&self, xi: &Character) -> Result<(CyclotomicField, Matrix<CycElem>)> {
        let field = CyclotomicField::new(xi.order);
        let m = self.specialize_in(xi, &field)?;
        Ok((field, m))
    }

    /// Exact specialization in a given cyclotomic field containing the values
    /// of `xi`.
    pub fn specialize_in(&self, xi: &Character, field: &CyclotomicField) -> Result<Matrix<CycElem>> {
        self.entries
            .iter()
            .map(|row| row.iter().map(|x| x.specialize(xi, field)).collect())
            .collect()
    }

    pub fn specialize_numeric(&self, point: &[Complex64]) -> Result<Vec<Vec<Complex64>>> {
        self.entries
            .iter()
            .map(|row| row.iter().map(|x| x.specialize_numeric(point)).collect())
            .collect()
    }

    /// Coefficient sums (specialization at the trivial character).
    pub fn augmentation(&self) -> Vec<Vec<BigRational>> {
        self.entries
            .iter()
            .map(|row| row.iter().map(|x| x.augmentation()).collect())
            .collect()
    }

    pub fn to_text_rows(&self) -> Vec<Vec<String>> {
        self.entries
            .iter()
            .map(|row| row.iter().map(|x| x.to_string()).collect())
            .collect()
    }
}

impl fmt::Display for MagnusMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows = self.to_text_rows();
        let width = rows.iter().flatten().map(|s| s.len()).max().unwrap_or(1);
        for row in rows {
            let cells: Vec<String> = row.iter().map(|s| format!("{s:>width$}")).collect();
            writeln!(f, "[ {} ]", cells.join("  "))?;
        }
        Ok(())
    }
}

/// `(A_f)_{ij} = Σ s(η) t(η)` over the arcs `η` from `e_i` to `e_j`.
pub fn magnus_matrix(t: &TransitionGraph) -> MagnusMatrix {
    crate::transition::subgraph_matrix_of_arcs(t, 0..t.arcs().len())
}

/// `det(xI - A)` with group-ring coefficients, lowest degree first.
pub fn equivariant_charpoly(a: &MagnusMatrix, bound: usize) -> Result<Vec<LaurentElement>> {
    if a.size() > bound {
        return Err(Error::MatrixTooLarge {
            size: a.size(),
            bound,
        });
    }
    Ok(ring::berkowitz(&a.ring(), &a.entries))
}

/// Text form of a group-ring polynomial in `x`, highest degree first.
pub fn charpoly_text(coeffs: &[LaurentElement]) -> String {
    let mut parts = Vec::new();
    for (k, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let var = match k {
            0 => String::new(),
            1 => "x".to_string(),
            _ => format!("x^{k}"),
        };
        let cs = c.to_string();
        parts.push(if var.is_empty() {
            format!("({cs})")
        } else if cs == "1" {
            var
        } else {
            format!("({cs})*{var}")
        });
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::homology::HomologyData;
    use crate::transition::transition_graph;

    fn magnus(name: &str) -> MagnusMatrix {
        let f = corpus::load(name).unwrap();
        let h = HomologyData::compute(&f).unwrap();
        magnus_matrix(&transition_graph(&f, &h))
    }

    #[test]
    fn example_matrix() {
        let a = magnus("example_s3");
        assert_eq!(a.to_text_rows(), vec![vec!["X2", "1 - X1"], vec!["0", "1"]]);
        assert_eq!(a.trace_power(2).to_string(), "1 + X2^2");
        let cp = equivariant_charpoly(&a, DEFAULT_CHARPOLY_BOUND).unwrap();
        assert_eq!(charpoly_text(&cp), "x^2 + (-1 - X2)*x + (X2)");
    }

    #[test]
    fn golden_mean_matrix() {
        let a = magnus("golden_mean");
        assert_eq!(a.dim(), 0);
        assert_eq!(a.to_text_rows(), vec![vec!["1", "1"], vec!["1", "0"]]);
        assert_eq!(a.trace_power(2).to_string(), "3");
    }

    #[test]
    fn specializations() {
        let a = magnus("example_s3");
        let (field, m) = a.specialize(&Character::trivial(2)).unwrap();
        let ints: Vec<Vec<BigRational>> = m
            .iter()
            .map(|r| r.iter().map(|x| field.as_rational(x).unwrap()).collect())
            .collect();
        assert_eq!(ints, a.augmentation());
        let (field, m) = a.specialize(&Character::new(2, vec![1, 0])).unwrap();
        let vals: Vec<Vec<BigRational>> = m
            .iter()
            .map(|r| r.iter().map(|x| field.as_rational(x).unwrap()).collect())
            .collect();
        let r = |x: i64| BigRational::from_integer(x.into());
        assert_eq!(vals, vec![vec![r(1), r(2)], vec![r(0), r(1)]]);
    }

    #[test]
    fn charpoly_bound() {
        let a = MagnusMatrix::zeros(3, 1);
        assert!(matches!(equivariant_charpoly(&a, 2), Err(Error::MatrixTooLarge { .. })));
    }
}
