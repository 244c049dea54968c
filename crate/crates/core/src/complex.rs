//! Based chain complexes over an exact field: homology dimensions,
//! representative cycles, and exactness defects of longer sequences.

use rayon::prelude::*;
use thiserror::Error;

use crate::field::Scalar;
use crate::sparse::{QuotientSolver, SparseMatrix, SparseVec};

#[derive(Debug, Error)]
pub enum ComplexError {
    #[error("differential {0} has shape {1}x{2}, expected {3}x{4}")]
    ShapeMismatch(usize, usize, usize, usize, usize),
    #[error("d_{0} ∘ d_{1} is not zero")]
    SquareNotZero(usize, usize),
    #[error("maps {0} and {1} are not composable")]
    NotComposable(usize, usize),
    #[error("composite of maps {0} and {1} is not zero")]
    CompositeNotZero(usize, usize),
}

/// Homology of one degree.
#[derive(Debug, Clone)]
pub struct DegreeHomology<F> {
    pub dim: usize,
    /// Cycles spanning the homology, in chain coordinates.
    pub representatives: Vec<SparseVec<F>>,
    /// True when the degree sits at the computation boundary, where the
    /// incoming differential is unknown and treated as zero.
    pub truncated: bool,
}

/// A finite complex `d_n : C_n -> C_{n-1}`; `diffs[n]` is `d_n`, with
/// `diffs[0]` the zero map out of degree 0.
#[derive(Debug, Clone)]
pub struct BasedComplex<F> {
    dims: Vec<usize>,
    diffs: Vec<SparseMatrix<F>>,
}

impl<F: Scalar> BasedComplex<F> {
    /// `diffs[n]` must map `dims[n] -> dims[n-1]` for `n >= 1`; a zero map out
    /// of degree 0 is synthesized if `diffs` is one short.
    pub fn new(dims: Vec<usize>, mut diffs: Vec<SparseMatrix<F>>) -> Result<Self, ComplexError> {
        if diffs.len() + 1 == dims.len() {
            diffs.insert(0, SparseMatrix::zero(0, dims[0]));
        }
        assert_eq!(diffs.len(), dims.len(), "one differential per degree");
        for n in 1..dims.len() {
            let d = &diffs[n];
            if d.rows() != dims[n - 1] || d.cols() != dims[n] {
                return Err(ComplexError::ShapeMismatch(
                    n,
                    d.rows(),
                    d.cols(),
                    dims[n - 1],
                    dims[n],
                ));
            }
        }
        Ok(BasedComplex { dims, diffs })
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn dim(&self, n: usize) -> usize {
        self.dims[n]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn differential(&self, n: usize) -> &SparseMatrix<F> {
        &self.diffs[n]
    }

    /// Checks `d_n ∘ d_{n+1} = 0` for every adjacent pair.
    pub fn check_squares(&self) -> Result<(), ComplexError> {
        for n in 1..self.dims.len().saturating_sub(1) {
            if !self.diffs[n].mul(&self.diffs[n + 1]).is_zero() {
                return Err(ComplexError::SquareNotZero(n, n + 1));
            }
        }
        Ok(())
    }

    /// `dim H_n = dim ker d_n - rank d_{n+1}` per degree; the top degree uses
    /// the convention `d_{N+1} = 0` and is a truncation artifact.
    pub fn homology_dims(&self) -> Result<Vec<usize>, ComplexError> {
        self.check_squares()?;
        let n = self.dims.len();
        let ranks: Vec<usize> = (0..n)
            .into_par_iter()
            .map(|k| self.diffs[k].rank())
            .collect();
        Ok((0..n)
            .map(|k| {
                let kernel = self.dims[k] - ranks[k];
                let image = if k + 1 < n { ranks[k + 1] } else { 0 };
                kernel - image
            })
            .collect())
    }

    /// Full homology with representative cycles and truncation flags.
    pub fn homology(&self) -> Result<Vec<DegreeHomology<F>>, ComplexError> {
        self.check_squares()?;
        let n = self.dims.len();
        let out: Vec<DegreeHomology<F>> = (0..n)
            .into_par_iter()
            .map(|k| {
                let solver = self.quotient_solver(k);
                DegreeHomology {
                    dim: solver.dim(),
                    representatives: solver.representatives().to_vec(),
                    truncated: k + 1 == n,
                }
            })
            .collect();
        Ok(out)
    }

    /// The solver for `ker d_n / im d_{n+1}` (image empty at the top degree).
    pub fn quotient_solver(&self, n: usize) -> QuotientSolver<F> {
        let cycles = self.diffs[n].kernel_basis();
        let boundaries = if n + 1 < self.dims.len() {
            self.diffs[n + 1].clone()
        } else {
            SparseMatrix::zero(self.dims[n], 0)
        };
        QuotientSolver::new(&boundaries, cycles)
    }

    /// Degreewise dual complex (transposed differentials, reversed grading).
    pub fn dual(&self) -> BasedComplex<F> {
        let n = self.dims.len();
        let dims: Vec<usize> = (0..n).map(|k| self.dims[n - 1 - k]).collect();
        let mut diffs = vec![SparseMatrix::zero(0, dims[0])];
        for k in 1..n {
            // dual d_k maps old degree n-1-k to old degree n-k
            diffs.push(self.diffs[n - k].transpose());
        }
        BasedComplex { dims, diffs }
    }
}

/// Exactness defects of `V_0 -> V_1 -> ... -> V_k`: at each interior node,
/// `dim ker(outgoing) - rank(incoming)`. All zeros iff exact there.
///
/// `maps[i]` sends `V_i` to `V_{i+1}`; consecutive composites must vanish.
pub fn exactness_defects<F: Scalar>(
    spaces: &[usize],
    maps: &[SparseMatrix<F>],
) -> Result<Vec<usize>, ComplexError> {
    assert_eq!(maps.len() + 1, spaces.len(), "one map per adjacent pair");
    for (i, m) in maps.iter().enumerate() {
        if m.cols() != spaces[i] || m.rows() != spaces[i + 1] {
            return Err(ComplexError::NotComposable(i, i + 1));
        }
    }
    for i in 0..maps.len().saturating_sub(1) {
        if !maps[i + 1].mul(&maps[i]).is_zero() {
            return Err(ComplexError::CompositeNotZero(i, i + 1));
        }
    }
    let mut defects = Vec::new();
    for node in 1..spaces.len() - 1 {
        let out_rank = maps[node].rank();
        let kernel = spaces[node] - out_rank;
        let in_rank = maps[node - 1].rank();
        defects.push(kernel - in_rank);
    }
    Ok(defects)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rat;
    use num_bigint::BigInt;

    fn q(n: i64) -> Rat {
        Rat::from_integer(BigInt::from(n))
    }

    fn id(n: usize) -> SparseMatrix<Rat> {
        SparseMatrix::identity(n)
    }

    #[test]
    fn single_k_in_degree_zero() {
        let c = BasedComplex::<Rat>::new(vec![1], vec![]).unwrap();
        assert_eq!(c.homology_dims().unwrap(), vec![1]);
    }

    #[test]
    fn acyclic_identity_complex() {
        let c = BasedComplex::new(vec![1, 1], vec![id(1)]).unwrap();
        assert_eq!(c.homology_dims().unwrap(), vec![0, 0]);
    }

    #[test]
    fn alternating_point_complex() {
        // K <- K <- K <- ... with differentials 0, id, 0, id...
        let n = 6;
        let dims = vec![1; n];
        let mut diffs = Vec::new();
        for k in 1..n {
            if k % 2 == 0 {
                diffs.push(id(1));
            } else {
                diffs.push(SparseMatrix::zero(1, 1));
            }
        }
        let c = BasedComplex::new(dims, diffs).unwrap();
        let h = c.homology_dims().unwrap();
        assert_eq!(&h[..n - 1], &[1, 0, 0, 0, 0]);
    }

    #[test]
    fn rejects_non_complex() {
        // d1 = d2 = id does not square to zero
        let c = BasedComplex::new(vec![1, 1, 1], vec![id(1), id(1)]).unwrap();
        assert!(matches!(c.homology_dims(), Err(ComplexError::SquareNotZero(..))));
    }

    #[test]
    fn dual_has_same_homology_dims() {
        let d2 = SparseMatrix::from_triplets(2, 1, [(0usize, 0usize, q(1)), (1, 0, q(-1))]);
        let d1 = SparseMatrix::from_triplets(1, 2, [(0usize, 0usize, q(1)), (0, 1, q(1))]);
        let c = BasedComplex::new(vec![1, 2, 1], vec![d1, d2]).unwrap();
        let mut h = c.homology_dims().unwrap();
        let mut hd = c.dual().homology_dims().unwrap();
        hd.reverse();
        // compare away from the truncated ends
        h.pop();
        hd.remove(0);
        assert_eq!(h[0], hd[0]);
    }

    #[test]
    fn short_exact_sequence_has_zero_defects() {
        // 0 -> K -> K -> 0 with identity in the middle
        let spaces = vec![0, 1, 1, 0];
        let maps = vec![
            SparseMatrix::<Rat>::zero(1, 0),
            id(1),
            SparseMatrix::zero(0, 1),
        ];
        assert_eq!(exactness_defects(&spaces, &maps).unwrap(), vec![0, 0]);
    }

    #[test]
    fn lone_k_has_defect_one() {
        // 0 -> K -> 0 -> 0
        let spaces = vec![0, 1, 0, 0];
        let maps = vec![
            SparseMatrix::<Rat>::zero(1, 0),
            SparseMatrix::zero(0, 1),
            SparseMatrix::zero(0, 0),
        ];
        assert_eq!(exactness_defects(&spaces, &maps).unwrap(), vec![1, 0]);
    }
}
