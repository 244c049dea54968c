//! Finite Morita-type completions — matrix truncations and idempotent
//! fragments — and the invariance report comparing HH/HH*/HC/HC* across a
//! completion.

use thiserror::Error;

use crate::category::{
    check_even_idempotent, corner_category, unitize, BasisMorphism, CategoryError, Parity,
    RawCategory, SuperCategory,
};
use crate::cyclic::{ChainOps, CyclicBicomplex};
use crate::field::Scalar;
use crate::homology::{cochain_basis, cochain_differential};
use crate::sparse::{SparseMatrix, SparseVec};

/// Completions stop once the object count would exceed this.
pub const MAX_COMPLETION_OBJECTS: usize = 64;

#[derive(Debug, Error)]
pub enum MoritaError {
    #[error("truncation length {0} yields {1} objects, over the bound {2}")]
    TooManyObjects(usize, usize, usize),
    #[error(transparent)]
    Category(#[from] CategoryError),
}

/// Additive completion truncated to object sequences of length <= L:
/// morphisms are matrices of morphisms, composed by the matrix product.
pub fn mat_truncation<F: Scalar>(
    cat: &SuperCategory<F>,
    max_len: usize,
) -> Result<SuperCategory<F>, MoritaError> {
    assert!(max_len >= 1);
    let base_objects = cat.object_count();
    let mut object_count = 0usize;
    let mut power = 1usize;
    for _ in 1..=max_len {
        power *= base_objects;
        object_count += power;
    }
    if object_count > MAX_COMPLETION_OBJECTS {
        return Err(MoritaError::TooManyObjects(max_len, object_count, MAX_COMPLETION_OBJECTS));
    }

    // object sequences, shortest first, lexicographic within a length
    let mut sequences: Vec<Vec<usize>> = Vec::new();
    let mut level: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 1..=max_len {
        let mut next = Vec::new();
        for seq in &level {
            for x in 0..base_objects {
                let mut s = seq.clone();
                s.push(x);
                next.push(s);
            }
        }
        sequences.extend(next.iter().cloned());
        level = next;
    }

    let seq_name = |seq: &[usize]| {
        let names: Vec<&str> = seq.iter().map(|&x| cat.object_name(x)).collect();
        format!("[{}]", names.join(","))
    };
    let objects: Vec<String> = sequences.iter().map(|s| seq_name(s)).collect();

    // basis: one matrix unit per (row, col, underlying basis morphism)
    struct Unit {
        src_seq: usize,
        tgt_seq: usize,
        row: usize,
        col: usize,
        inner: usize,
    }
    let mut units: Vec<Unit> = Vec::new();
    let mut basis: Vec<BasisMorphism> = Vec::new();
    for (si, s) in sequences.iter().enumerate() {
        for (ti, t) in sequences.iter().enumerate() {
            for (row, &x) in s.iter().enumerate() {
                for (col, &y) in t.iter().enumerate() {
                    for &inner in cat.hom_basis(x, y) {
                        basis.push(BasisMorphism {
                            id: format!(
                                "{}>{}:{},{}:{}",
                                objects[si],
                                objects[ti],
                                row,
                                col,
                                cat.morphism(inner).id
                            ),
                            source: si,
                            target: ti,
                            parity: cat.parity(inner),
                        });
                        units.push(Unit { src_seq: si, tgt_seq: ti, row, col, inner });
                    }
                }
            }
        }
    }

    // fast lookup: (src_seq, tgt_seq, row, col, inner) -> basis index
    let mut index = std::collections::HashMap::new();
    for (k, u) in units.iter().enumerate() {
        index.insert((u.src_seq, u.tgt_seq, u.row, u.col, u.inner), k);
    }

    // matrix product of single-entry matrices: zero unless col(f) = row(g)
    let mut composition = std::collections::HashMap::new();
    for (f, uf) in units.iter().enumerate() {
        for (g, ug) in units.iter().enumerate() {
            if uf.tgt_seq != ug.src_seq {
                continue;
            }
            let v = if uf.col != ug.row {
                SparseVec::new()
            } else {
                let expansion = cat
                    .compose(uf.inner, ug.inner)
                    .expect("matching endpoints inside matching sequences");
                SparseVec::from_entries(expansion.iter().map(|(m, c)| {
                    (index[&(uf.src_seq, ug.tgt_seq, uf.row, ug.col, *m)], c.clone())
                }))
            };
            composition.insert((f, g), v);
        }
    }

    // identities are the diagonal sums of the factors' identities
    let identity_vectors: Vec<SparseVec<F>> = sequences
        .iter()
        .enumerate()
        .map(|(si, s)| {
            SparseVec::from_entries((0..s.len()).map(|d| {
                let inner = cat.identity_of(s[d]);
                (index[&(si, si, d, d, inner)], F::one())
            }))
        })
        .collect();
    let identity_ids: Vec<String> = objects.iter().map(|o| format!("1{o}")).collect();

    let raw = RawCategory {
        field: *cat.field(),
        objects,
        basis,
        identity_vectors,
        identity_ids,
        composition,
    };
    let (out, _) = unitize(raw);
    Ok(out)
}

/// Idempotent fragment: objects (X, 1_X) for every X plus (X, ε) for each
/// supplied even idempotent; hom((X,ε),(Y,ε')) = ε · hom(X,Y) · ε'.
pub fn idempotent_fragment<F: Scalar>(
    cat: &SuperCategory<F>,
    idempotents: &[(usize, SparseVec<F>)],
) -> Result<SuperCategory<F>, MoritaError> {
    let mut corners: Vec<(usize, SparseVec<F>, String)> = (0..cat.object_count())
        .map(|x| (x, SparseVec::unit(cat.identity_of(x)), "1".to_string()))
        .collect();
    for (k, (x, e)) in idempotents.iter().enumerate() {
        check_even_idempotent(cat, e, &format!("idempotent #{k}"))?;
        for (m, _) in e.iter() {
            let morph = cat.morphism(*m);
            if morph.source != *x || morph.target != *x {
                return Err(CategoryError::BadIdempotent(format!(
                    "idempotent #{k} is not an endomorphism of {}",
                    cat.object_name(*x)
                ))
                .into());
            }
        }
        corners.push((*x, e.clone(), format!("e{k}")));
    }
    Ok(corner_category(cat, &corners)?)
}

/// Dimension tables of the four theories for one category, exact through
/// `nmax` (computed one degree deeper internally).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoryDims {
    pub hh: Vec<usize>,
    pub hh_co: Vec<usize>,
    pub hc: Vec<usize>,
    pub hc_co: Vec<usize>,
}

/// Rank-only computation of all four theories (no representatives), sized
/// for the completion-scale instances.
pub fn theory_dims<F: Scalar>(cat: &SuperCategory<F>, nmax: usize) -> TheoryDims {
    let internal = nmax + 1;
    let ops = ChainOps::build(cat, internal);

    let hh_full = ops
        .hochschild_complex()
        .homology_dims()
        .expect("hochschild boundary squares to zero");
    let hh = hh_full[..=nmax].to_vec();

    let hh_co = {
        let bases: Vec<_> = (0..=internal).map(|n| cochain_basis(cat, n)).collect();
        let diffs: Vec<SparseMatrix<F>> = (0..internal)
            .map(|n| cochain_differential(cat, &bases[n], &bases[n + 1]))
            .collect();
        let ranks: Vec<usize> = diffs.iter().map(|d| d.rank()).collect();
        (0..=nmax)
            .map(|n| {
                let kernel = bases[n].len() - ranks[n];
                let image = if n >= 1 { ranks[n - 1] } else { 0 };
                kernel - image
            })
            .collect()
    };

    let tot = CyclicBicomplex::new(&ops, internal).total_complex();
    let hc_full = tot.homology_dims().expect("total differential squares to zero");
    let hc = hc_full[..=nmax].to_vec();

    let hc_co = {
        // dual complex: same ranks on transposed differentials
        let mut out = Vec::new();
        for n in 0..=nmax {
            let out_rank = tot.differential(n + 1).transpose().rank();
            let in_rank = if n >= 1 { tot.differential(n).transpose().rank() } else { 0 };
            out.push(tot.dim(n) - out_rank - in_rank);
        }
        out
    };

    TheoryDims { hh, hh_co, hc, hc_co }
}

#[derive(Debug, Clone)]
pub struct InvarianceRow {
    pub theory: &'static str,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct InvarianceReport {
    pub nmax: usize,
    pub rows: Vec<InvarianceRow>,
}

impl InvarianceReport {
    pub fn all_equal(&self) -> bool {
        self.rows.iter().all(|r| r.left == r.right)
    }
}

/// Computes HH, HH*, HC, HC* dims of both categories through `nmax` and
/// reports equality per theory.
pub fn invariance_report<F: Scalar>(
    cat: &SuperCategory<F>,
    completed: &SuperCategory<F>,
    nmax: usize,
) -> InvarianceReport {
    let left = theory_dims(cat, nmax);
    let right = theory_dims(completed, nmax);
    InvarianceReport {
        nmax,
        rows: vec![
            InvarianceRow { theory: "HH", left: left.hh, right: right.hh },
            InvarianceRow { theory: "HH*", left: left.hh_co, right: right.hh_co },
            InvarianceRow { theory: "HC", left: left.hc, right: right.hc },
            InvarianceRow { theory: "HC*", left: left.hc_co, right: right.hc_co },
        ],
    }
}

/// The even split idempotent `diag(1, 0, ..)` on the first doubled object of
/// a truncation, when one exists. Used by the invariance suite.
pub fn split_idempotent_on_doubled<F: Scalar>(
    trunc: &SuperCategory<F>,
) -> Option<(usize, SparseVec<F>)> {
    for x in 0..trunc.object_count() {
        // a doubled object's identity is a sum of two diagonal units
        let endos = trunc.hom_basis(x, x);
        let id = trunc.identity_of(x);
        // seek a diagonal unit e with e·e = e, e != 1, inside the endo basis
        for &e in endos {
            if e == id || trunc.parity(e) != Parity::Even {
                continue;
            }
            let ee = trunc.compose(e, e).expect("endomorphisms compose");
            if ee.entries() == [(e, F::one())] {
                return Some((x, SparseVec::unit(e)));
            }
        }
    }
    None
}
