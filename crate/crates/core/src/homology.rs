//! Hochschild homology and cohomology with coefficients in the standard
//! bimodule, plus the degree-0 shortcuts: the graded-commutator quotient
//! and the graded center.

use std::collections::HashMap;

use crate::category::{Parity, SuperCategory};
use crate::complex::{BasedComplex, DegreeHomology};
use crate::field::Scalar;
use crate::nerve::{boundary_matrix, cyclic_bases, nerve_basis, BoundaryVariant, ChainKind, ChainTuple};
use crate::sparse::{Echelon, SparseMatrix, SparseVec};

/// Per-degree dimensions and representatives of a (co)homology computation.
/// The top degree is computed against a vanishing incoming differential and
/// flagged truncated; request one extra degree when exact values are needed.
pub type HomologyResult<F> = Vec<DegreeHomology<F>>;

pub fn dims_of<F: Scalar>(h: &HomologyResult<F>) -> Vec<usize> {
    h.iter().map(|d| d.dim).collect()
}

/// The Hochschild chain complex on cyclic nerve bases, degrees `0..=nmax`.
pub fn hochschild_complex<F: Scalar>(cat: &SuperCategory<F>, nmax: usize) -> BasedComplex<F> {
    let bases = cyclic_bases(cat, nmax);
    let dims: Vec<usize> = bases.iter().map(|b| b.len()).collect();
    let mut diffs = Vec::new();
    for n in 1..=nmax {
        diffs.push(boundary_matrix(cat, &bases[n], &bases[n - 1], BoundaryVariant::Full));
    }
    BasedComplex::new(dims, diffs).expect("hochschild complex shapes agree")
}

/// HH_n(A, A) for n <= nmax; representatives in cyclic chain coordinates.
pub fn hochschild_homology<F: Scalar>(cat: &SuperCategory<F>, nmax: usize) -> HomologyResult<F> {
    hochschild_complex(cat, nmax)
        .homology()
        .expect("boundary squares to zero")
}

/// Basis element of the cochain space: a plain tuple and a value morphism
/// in hom(X_n, X_0).
#[derive(Debug, Clone)]
pub struct CochainBasis {
    pub degree: usize,
    pub elems: Vec<(ChainTuple, usize)>,
    index: HashMap<(ChainTuple, usize), usize>,
}

impl CochainBasis {
    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn index_of(&self, t: &ChainTuple, value: usize) -> Option<usize> {
        self.index.get(&(t.clone(), value)).copied()
    }
}

pub fn cochain_basis<F: Scalar>(cat: &SuperCategory<F>, n: usize) -> CochainBasis {
    let plain = nerve_basis(cat, n, ChainKind::Plain);
    let mut elems = Vec::new();
    for t in &plain.tuples {
        let objs = t.objects(cat, ChainKind::Plain);
        let xn = *objs.last().unwrap();
        let x0 = objs[0];
        for &b in cat.hom_basis(xn, x0) {
            elems.push((t.clone(), b));
        }
    }
    let index = elems.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
    CochainBasis { degree: n, elems, index }
}

/// The cochain differential ∂^n : C^n -> C^{n+1}:
/// (∂φ)(a_1..a_{n+1}) = (-1)^{|a_1||φ|} a_1 φ(a_2..a_{n+1})
///   + Σ_{i=1..n} (-1)^i φ(a_1.., a_i a_{i+1}, ..a_{n+1})
///   + (-1)^{n+1} φ(a_1..a_n) a_{n+1},
/// with |φ| = |value| + |tuple| for an elementary cochain.
pub fn cochain_differential<F: Scalar>(
    cat: &SuperCategory<F>,
    src: &CochainBasis,
    tgt: &CochainBasis,
) -> SparseMatrix<F> {
    let n = src.degree;
    debug_assert_eq!(tgt.degree, n + 1);
    let plain_up = nerve_basis(cat, n + 1, ChainKind::Plain);
    let mut triplets: Vec<(usize, usize, F)> = Vec::new();

    for t in &plain_up.tuples {
        let objs = t.objects(cat, ChainKind::Plain);
        let x_top = *objs.last().unwrap();
        let x0 = objs[0];

        // i = 0: value slot composes with a_1 on the left
        {
            let a1 = t.entry(0);
            let sub = ChainTuple {
                base: cat.morphism(t.entry(1.min(t.len() - 1))).target as u32,
                entries: t.entries[1..].to_vec(),
            };
            let sub = if t.len() == 1 {
                ChainTuple { base: cat.morphism(a1).source as u32, entries: Vec::new() }
            } else {
                sub
            };
            let tuple_parity = sub.parity(cat);
            for &beta in cat.hom_basis(x_top, objs[1]) {
                let col = src.index_of(&sub, beta).expect("cochain basis is complete");
                let phi_parity = cat.parity(beta) + tuple_parity;
                let negate = cat.parity(a1).koszul_negates(phi_parity);
                // chain-level product a_1 · β = compose(β, a_1)
                let expansion = cat.compose(beta, a1).expect("value composes with a_1");
                for (gamma, c) in expansion.iter() {
                    let row = tgt.index_of(t, *gamma).expect("target basis is complete");
                    triplets.push((row, col, c.clone().neg_if(negate)));
                }
            }
        }

        // 1 <= i <= n: interior compositions
        for i in 1..=n {
            let expansion = cat
                .compose(t.entry(i), t.entry(i - 1))
                .expect("adjacent entries compose");
            let negate = i % 2 == 1;
            for (m, c) in expansion.iter() {
                let mut entries: Vec<u32> = Vec::with_capacity(n);
                entries.extend_from_slice(&t.entries[..i - 1]);
                entries.push(*m as u32);
                entries.extend_from_slice(&t.entries[i + 1..]);
                let sub = ChainTuple { base: t.base, entries };
                for &beta in cat.hom_basis(x_top, x0) {
                    let col = src.index_of(&sub, beta).expect("cochain basis is complete");
                    let row = tgt.index_of(t, beta).expect("target basis is complete");
                    triplets.push((row, col, c.clone().neg_if(negate)));
                }
            }
        }

        // i = n + 1: value slot composes with a_{n+1} on the right
        {
            let a_top = t.entry(n);
            let sub = ChainTuple { base: t.base, entries: t.entries[..n].to_vec() };
            let xn = objs[n];
            let negate = (n + 1) % 2 == 1;
            for &beta in cat.hom_basis(xn, x0) {
                let col = src.index_of(&sub, beta).expect("cochain basis is complete");
                // chain-level product β · a_{n+1} = compose(a_{n+1}, β)
                let expansion = cat.compose(a_top, beta).expect("value composes with a_top");
                for (gamma, c) in expansion.iter() {
                    let row = tgt.index_of(t, *gamma).expect("target basis is complete");
                    triplets.push((row, col, c.clone().neg_if(negate)));
                }
            }
        }
    }

    SparseMatrix::from_triplets(tgt.len(), src.len(), triplets)
}

/// HH^n(A, A) for n <= nmax. The top degree is exact (the outgoing
/// differential is available), but is still flagged for uniformity.
pub fn hochschild_cohomology<F: Scalar>(cat: &SuperCategory<F>, nmax: usize) -> HomologyResult<F> {
    let bases: Vec<CochainBasis> = (0..=nmax + 1).map(|n| cochain_basis(cat, n)).collect();
    let diffs: Vec<SparseMatrix<F>> = (0..=nmax)
        .map(|n| cochain_differential(cat, &bases[n], &bases[n + 1]))
        .collect();
    for n in 1..=nmax {
        debug_assert!(
            diffs[n].mul(&diffs[n - 1]).is_zero(),
            "cochain differential squares to zero"
        );
    }
    (0..=nmax)
        .map(|n| {
            let cycles = diffs[n].kernel_basis();
            let boundaries = if n == 0 {
                SparseMatrix::zero(bases[0].len(), 0)
            } else {
                diffs[n - 1].clone()
            };
            let solver = crate::sparse::QuotientSolver::new(&boundaries, cycles);
            DegreeHomology {
                dim: solver.dim(),
                representatives: solver.representatives().to_vec(),
                truncated: n == nmax,
            }
        })
        .collect()
}

/// Dimension and representatives of ⊕_X A(X,X) modulo the span of all graded
/// commutators [α,β] = αβ - (-1)^{|α||β|} βα over pairs composable both ways.
pub fn commutator_quotient<F: Scalar>(cat: &SuperCategory<F>) -> (usize, Vec<SparseVec<F>>) {
    let basis0 = nerve_basis(cat, 0, ChainKind::Cyclic);
    let mut span: Vec<SparseVec<F>> = Vec::new();
    for f in 0..cat.basis_count() {
        let mf = cat.morphism(f);
        for &g in cat.hom_basis(mf.target, mf.source) {
            // [f, g] = f;g - (-1)^{|f||g|} g;f, landing in A(src,src) ⊕ A(tgt,tgt)
            let fg = cat.compose(f, g).expect("composable");
            let gf = cat.compose(g, f).expect("composable");
            let negate = cat.parity(f).koszul_negates(cat.parity(g));
            let mut v = SparseVec::new();
            for (m, c) in fg.iter() {
                let idx = basis0
                    .index_of(&ChainTuple {
                        base: mf.source as u32,
                        entries: vec![*m as u32],
                    })
                    .expect("endomorphism chain");
                v.axpy(&F::one(), &SparseVec::from_entries([(idx, c.clone())]));
            }
            for (m, c) in gf.iter() {
                let idx = basis0
                    .index_of(&ChainTuple {
                        base: mf.target as u32,
                        entries: vec![*m as u32],
                    })
                    .expect("endomorphism chain");
                let coeff = c.clone().neg_if(!negate); // subtract, with Koszul sign
                v.axpy(&F::one(), &SparseVec::from_entries([(idx, coeff)]));
            }
            if !v.is_zero() {
                span.push(v);
            }
        }
    }
    let mut ech = Echelon::new();
    for v in span {
        ech.push(v);
    }
    let rank = ech.len();
    // representatives: endomorphism chains extending the commutator span
    let mut reps = Vec::new();
    for i in 0..basis0.len() {
        if ech.push(SparseVec::unit(i)) {
            reps.push(SparseVec::unit(i));
        }
    }
    (basis0.len() - rank, reps)
}

/// The graded center: tuples (φ_X) of endomorphisms with
/// φ_X ψ = (-1)^{|ψ||φ|} ψ φ_Y for every basis morphism ψ: X -> Y,
/// solved per parity as a homogeneous linear system.
pub fn graded_center<F: Scalar>(cat: &SuperCategory<F>) -> (usize, Vec<SparseVec<F>>) {
    // variables: endomorphism basis elements, indexed by the degree-0 cochain basis
    let c0 = cochain_basis(cat, 0);
    let mut reps: Vec<SparseVec<F>> = Vec::new();
    for parity in [Parity::Even, Parity::Odd] {
        let vars: Vec<usize> = (0..c0.len())
            .filter(|&i| cat.parity(c0.elems[i].1) == parity)
            .collect();
        if vars.is_empty() {
            continue;
        }
        // rows: (ψ, output basis element of hom(X, Y))
        let mut row_index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut triplets: Vec<(usize, usize, F)> = Vec::new();
        for (col, &var) in vars.iter().enumerate() {
            let (tuple, b) = &c0.elems[var];
            let x = tuple.base as usize;
            // φ_X ψ for ψ out of X: contributes +; ψ φ_Y with sign for ψ into X
            for psi in 0..cat.basis_count() {
                let mpsi = cat.morphism(psi);
                if mpsi.source == x {
                    // compose(φ_X, ψ)
                    for (m, c) in cat.compose(*b, psi).expect("composable").iter() {
                        let next = row_index.len();
                        let row = *row_index.entry((psi, *m)).or_insert(next);
                        triplets.push((row, col, c.clone()));
                    }
                }
                if mpsi.target == x {
                    // -(-1)^{|ψ||φ|} compose(ψ, φ_Y) with Y = x here
                    let negate = cat.parity(psi).koszul_negates(parity);
                    for (m, c) in cat.compose(psi, *b).expect("composable").iter() {
                        let next = row_index.len();
                        let row = *row_index.entry((psi, *m)).or_insert(next);
                        triplets.push((row, col, c.clone().neg_if(!negate)));
                    }
                }
            }
        }
        let rows = row_index.len();
        let m = SparseMatrix::from_triplets(rows, vars.len(), triplets);
        for v in m.kernel_basis() {
            // re-express in degree-0 cochain coordinates
            reps.push(SparseVec::from_entries(
                v.iter().map(|(i, c)| (vars[*i], c.clone())),
            ));
        }
    }
    (reps.len(), reps)
}
