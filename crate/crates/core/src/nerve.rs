//! The graded Hochschild–Mitchell chain machinery: cyclic and plain nerve
//! bases, the face maps, full and bar boundaries, the cyclic rotation and
//! extra degeneracy at chain level, and the normalized quotient.
//!
//! Chain typing: a degree-`n` cyclic tuple `(a_0, ..., a_n)` has
//! `a_j : X_j -> X_{j-1}` for `j >= 1` and `a_0 : X_0 -> X_n`; the chain
//! product "a b" is the apply-order composite `compose(b, a)`. Plain tuples
//! drop the closing slot `a_0`.

use std::collections::{BTreeMap, HashMap};

use crate::category::{Parity, SuperCategory};
use crate::field::Scalar;
use crate::sparse::{SparseMatrix, SparseVec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChainKind {
    Cyclic,
    Plain,
}

/// A basis chain: `base` is the object X_0, `entries` are basis-morphism
/// indices (`a_0..a_n` for cyclic tuples, `a_1..a_n` for plain ones).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChainTuple {
    pub base: u32,
    pub entries: Vec<u32>,
}

impl ChainTuple {
    pub fn cyclic(entries: Vec<u32>, base: u32) -> Self {
        ChainTuple { base, entries }
    }

    pub fn entry(&self, j: usize) -> usize {
        self.entries[j] as usize
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Object tuple (X_0, ..., X_n) spelled out.
    pub fn objects<F: Scalar>(&self, cat: &SuperCategory<F>, kind: ChainKind) -> Vec<usize> {
        let mut out = vec![self.base as usize];
        let start = match kind {
            ChainKind::Cyclic => 1,
            ChainKind::Plain => 0,
        };
        for j in start..self.entries.len() {
            out.push(cat.morphism(self.entries[j] as usize).source);
        }
        out
    }

    pub fn parity<F: Scalar>(&self, cat: &SuperCategory<F>) -> Parity {
        let mut p = Parity::Even;
        for &e in &self.entries {
            p = p + cat.parity(e as usize);
        }
        p
    }

    pub fn display<F: Scalar>(&self, cat: &SuperCategory<F>) -> String {
        let ids: Vec<&str> = self
            .entries
            .iter()
            .map(|&e| cat.morphism(e as usize).id.as_str())
            .collect();
        format!("({})", ids.join(","))
    }
}

/// A formal linear combination of chain tuples of one degree and kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainVector<F> {
    pub kind: ChainKind,
    pub degree: usize,
    pub terms: BTreeMap<ChainTuple, F>,
}

impl<F: Scalar> ChainVector<F> {
    pub fn zero(kind: ChainKind, degree: usize) -> Self {
        ChainVector { kind, degree, terms: BTreeMap::new() }
    }

    pub fn from_tuple(kind: ChainKind, degree: usize, t: ChainTuple) -> Self {
        let mut v = Self::zero(kind, degree);
        v.add_term(t, F::one());
        v
    }

    pub fn add_term(&mut self, t: ChainTuple, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&t) {
            Some(prev) => {
                let s = prev + c;
                if !s.is_zero() {
                    self.terms.insert(t, s);
                }
            }
            None => {
                self.terms.insert(t, c);
            }
        }
    }

    pub fn add(&mut self, other: &ChainVector<F>) {
        debug_assert!(
            other.is_zero() || self.is_zero() || (self.kind, self.degree) == (other.kind, other.degree)
        );
        for (t, c) in &other.terms {
            self.add_term(t.clone(), c.clone());
        }
    }

    pub fn add_scaled(&mut self, c: &F, other: &ChainVector<F>) {
        debug_assert!(
            other.is_zero() || self.is_zero() || (self.kind, self.degree) == (other.kind, other.degree)
        );
        for (t, d) in &other.terms {
            self.add_term(t.clone(), c.clone() * d.clone());
        }
    }

    pub fn scale(&mut self, c: &F) {
        if c.is_zero() {
            self.terms.clear();
            return;
        }
        for v in self.terms.values_mut() {
            *v = v.clone() * c.clone();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Drops degenerate tuples (the projection onto the normalized quotient).
    pub fn project_normalized(&mut self, cat: &SuperCategory<F>) {
        self.terms.retain(|t, _| !is_degenerate(cat, t));
    }

    /// Coordinates with respect to an enumerated basis.
    pub fn to_sparsevec(&self, basis: &NerveBasis) -> SparseVec<F> {
        SparseVec::from_entries(self.terms.iter().map(|(t, c)| {
            let i = basis
                .index_of(t)
                .unwrap_or_else(|| panic!("chain tuple outside the enumerated basis"));
            (i, c.clone())
        }))
    }
}

/// An enumerated, deterministically ordered nerve basis of one degree.
#[derive(Debug, Clone)]
pub struct NerveBasis {
    pub kind: ChainKind,
    pub degree: usize,
    pub tuples: Vec<ChainTuple>,
    index: HashMap<ChainTuple, usize>,
    /// Positions of the nondegenerate tuples, in basis order.
    pub normalized: Vec<usize>,
}

impl NerveBasis {
    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn index_of(&self, t: &ChainTuple) -> Option<usize> {
        self.index.get(t).copied()
    }

    pub fn normalized_len(&self) -> usize {
        self.normalized.len()
    }
}

/// Enumerates the degree-`n` nerve basis in lexicographic order of
/// (object-name tuple, morphism-id tuple).
pub fn nerve_basis<F: Scalar>(cat: &SuperCategory<F>, n: usize, kind: ChainKind) -> NerveBasis {
    let mut tuples = Vec::new();
    // basis morphisms grouped by *target* object, since a_j : X_j -> X_{j-1}
    let mut by_target: Vec<Vec<usize>> = vec![Vec::new(); cat.object_count()];
    for k in 0..cat.basis_count() {
        by_target[cat.morphism(k).target].push(k);
    }

    for x0 in 0..cat.object_count() {
        // entries a_1..a_n built outward from X_0
        let mut stack: Vec<u32> = Vec::with_capacity(n);
        enumerate_rec(cat, &by_target, x0, x0, n, kind, &mut stack, &mut tuples);
    }

    // deterministic order: object names, then morphism ids
    let obj_rank = rank_by_name(cat.object_names());
    let morph_rank = {
        let ids: Vec<String> = cat.morphisms().iter().map(|m| m.id.clone()).collect();
        rank_by_name(&ids)
    };
    tuples.sort_by_cached_key(|t| {
        let objs: Vec<usize> = t.objects(cat, kind).iter().map(|&x| obj_rank[x]).collect();
        let ids: Vec<usize> = t.entries.iter().map(|&e| morph_rank[e as usize]).collect();
        (objs, ids)
    });

    let index: HashMap<ChainTuple, usize> =
        tuples.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
    let normalized: Vec<usize> = match kind {
        ChainKind::Cyclic => tuples
            .iter()
            .enumerate()
            .filter(|(_, t)| !is_degenerate(cat, t))
            .map(|(i, _)| i)
            .collect(),
        ChainKind::Plain => Vec::new(),
    };
    NerveBasis { kind, degree: n, tuples, index, normalized }
}

fn rank_by_name(names: &[String]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..names.len()).collect();
    order.sort_by(|&a, &b| names[a].cmp(&names[b]));
    let mut rank = vec![0; names.len()];
    for (r, &i) in order.iter().enumerate() {
        rank[i] = r;
    }
    rank
}

#[allow(clippy::too_many_arguments)]
fn enumerate_rec<F: Scalar>(
    cat: &SuperCategory<F>,
    by_target: &[Vec<usize>],
    x0: usize,
    x_prev: usize,
    remaining: usize,
    kind: ChainKind,
    stack: &mut Vec<u32>,
    out: &mut Vec<ChainTuple>,
) {
    if remaining == 0 {
        match kind {
            ChainKind::Plain => {
                out.push(ChainTuple { base: x0 as u32, entries: stack.clone() });
            }
            ChainKind::Cyclic => {
                // close up: a_0 in hom(X_0, X_n)
                for &a0 in cat.hom_basis(x0, x_prev) {
                    let mut entries = Vec::with_capacity(stack.len() + 1);
                    entries.push(a0 as u32);
                    entries.extend_from_slice(stack);
                    out.push(ChainTuple { base: x0 as u32, entries });
                }
            }
        }
        return;
    }
    for &a in &by_target[x_prev] {
        stack.push(a as u32);
        enumerate_rec(cat, by_target, x0, cat.morphism(a).source, remaining - 1, kind, stack, out);
        stack.pop();
    }
}

/// The chain-level product "x y" of Eq-style juxtaposition (apply order).
fn chain_product<'a, F: Scalar>(
    cat: &'a SuperCategory<F>,
    x: usize,
    y: usize,
) -> &'a SparseVec<F> {
    cat.compose(y, x).expect("face of a well-typed chain is composable")
}

/// Face `d_i` of a cyclic degree-`n` tuple (`n >= 1`). Carries the Koszul
/// sign of the rotating face `i = n`; the alternating `(-1)^i` belongs to
/// the boundary assembly.
pub fn face<F: Scalar>(cat: &SuperCategory<F>, i: usize, t: &ChainTuple) -> ChainVector<F> {
    let n = t.len() - 1;
    assert!(n >= 1, "faces are defined in degree >= 1");
    assert!(i <= n, "face index out of range");
    let mut out = ChainVector::zero(ChainKind::Cyclic, n - 1);
    if i < n {
        let expansion = chain_product(cat, t.entry(i), t.entry(i + 1));
        for (m, c) in expansion.iter() {
            let mut entries: Vec<u32> = Vec::with_capacity(n);
            entries.extend_from_slice(&t.entries[..i]);
            entries.push(*m as u32);
            entries.extend_from_slice(&t.entries[i + 2..]);
            let base = if i == 0 { cat.morphism(*m).source as u32 } else { t.base };
            out.add_term(ChainTuple { base, entries }, c.clone());
        }
    } else {
        // d_n: (-1)^{|a_n| |a_0 ... a_{n-1}|} (a_n a_0, a_1, ..., a_{n-1})
        let mut head_parity = Parity::Even;
        for j in 0..n {
            head_parity = head_parity + cat.parity(t.entry(j));
        }
        let negate = cat.parity(t.entry(n)).koszul_negates(head_parity);
        let expansion = chain_product(cat, t.entry(n), t.entry(0));
        for (m, c) in expansion.iter() {
            let mut entries: Vec<u32> = Vec::with_capacity(n);
            entries.push(*m as u32);
            entries.extend_from_slice(&t.entries[1..n]);
            out.add_term(
                ChainTuple { base: t.base, entries },
                c.clone().neg_if(negate),
            );
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryVariant {
    /// ∂ = Σ_{i=0}^{n} (-1)^i d_i
    Full,
    /// ∂̄ = Σ_{i=0}^{n-1} (-1)^i d_i
    Bar,
}

/// Boundary of a single cyclic tuple.
pub fn boundary_of_tuple<F: Scalar>(
    cat: &SuperCategory<F>,
    t: &ChainTuple,
    variant: BoundaryVariant,
) -> ChainVector<F> {
    let n = t.len() - 1;
    let top = match variant {
        BoundaryVariant::Full => n,
        BoundaryVariant::Bar => n.saturating_sub(1),
    };
    let mut out = ChainVector::zero(ChainKind::Cyclic, n.saturating_sub(1));
    if n == 0 {
        return out;
    }
    for i in 0..=top {
        let f = face(cat, i, t);
        let sign = cat.scalar(if i % 2 == 0 { 1 } else { -1 });
        out.add_scaled(&sign, &f);
    }
    out
}

pub fn boundary_of_vector<F: Scalar>(
    cat: &SuperCategory<F>,
    v: &ChainVector<F>,
    variant: BoundaryVariant,
) -> ChainVector<F> {
    let mut out = ChainVector::zero(v.kind, v.degree.saturating_sub(1));
    for (t, c) in &v.terms {
        out.add_scaled(c, &boundary_of_tuple(cat, t, variant));
    }
    out
}

/// Matrix of ∂_n or ∂̄_n with respect to enumerated cyclic bases.
pub fn boundary_matrix<F: Scalar>(
    cat: &SuperCategory<F>,
    src: &NerveBasis,
    tgt: &NerveBasis,
    variant: BoundaryVariant,
) -> SparseMatrix<F> {
    debug_assert_eq!(src.degree, tgt.degree + 1);
    let columns = src
        .tuples
        .iter()
        .map(|t| boundary_of_tuple(cat, t, variant).to_sparsevec(tgt))
        .collect();
    SparseMatrix::from_columns(tgt.len(), columns)
}

/// Cyclic rotation `t` on a tuple, with its sign: returns the rotated tuple
/// and whether the coefficient is negated.
pub fn cyclic_rotation<F: Scalar>(cat: &SuperCategory<F>, t: &ChainTuple) -> (ChainTuple, bool) {
    let n = t.len() - 1;
    let mut head_parity = Parity::Even;
    for j in 0..n {
        head_parity = head_parity + cat.parity(t.entry(j));
    }
    let koszul = cat.parity(t.entry(n)).koszul_negates(head_parity);
    let negate = (n % 2 == 1) ^ koszul;
    let mut entries = Vec::with_capacity(n + 1);
    entries.push(t.entries[n]);
    entries.extend_from_slice(&t.entries[..n]);
    let base = cat.morphism(t.entry(n)).source as u32;
    (ChainTuple { base, entries }, negate)
}

/// The extra degeneracy `s`: prepend the identity of X_n.
pub fn extra_degeneracy_tuple<F: Scalar>(cat: &SuperCategory<F>, t: &ChainTuple) -> ChainTuple {
    let xn = cat.morphism(t.entry(0)).target;
    let id = cat.identity_of(xn) as u32;
    let mut entries = Vec::with_capacity(t.len() + 1);
    entries.push(id);
    entries.extend_from_slice(&t.entries);
    ChainTuple { base: xn as u32, entries }
}

/// Degenerate = an identity among entries a_1..a_n (slot 0 is exempt).
pub fn is_degenerate<F: Scalar>(cat: &SuperCategory<F>, t: &ChainTuple) -> bool {
    t.entries[1..].iter().any(|&e| cat.is_identity(e as usize))
}

/// Projection/section pair for the normalized quotient at one degree.
#[derive(Debug, Clone)]
pub struct Normalization<F> {
    pub projection: SparseMatrix<F>,
    pub section: SparseMatrix<F>,
    pub tuples: Vec<ChainTuple>,
}

pub fn normalization<F: Scalar>(_cat: &SuperCategory<F>, basis: &NerveBasis) -> Normalization<F> {
    let k = basis.normalized.len();
    let m = basis.len();
    let projection = SparseMatrix::from_triplets(
        k,
        m,
        basis
            .normalized
            .iter()
            .enumerate()
            .map(|(r, &full)| (r, full, F::one())),
    );
    let section = SparseMatrix::from_triplets(
        m,
        k,
        basis
            .normalized
            .iter()
            .enumerate()
            .map(|(r, &full)| (full, r, F::one())),
    );
    let tuples = basis.normalized.iter().map(|&i| basis.tuples[i].clone()).collect();
    Normalization { projection, section, tuples }
}

/// Cyclic nerve bases for degrees `0..=max_n`.
pub fn cyclic_bases<F: Scalar>(cat: &SuperCategory<F>, max_n: usize) -> Vec<NerveBasis> {
    (0..=max_n).map(|n| nerve_basis(cat, n, ChainKind::Cyclic)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::builtin;
    use crate::field::{FieldSpec, Rat};

    fn cat(name: &str) -> SuperCategory<Rat> {
        builtin(name, FieldSpec::rationals()).unwrap()
    }

    #[test]
    fn point_cyclic_nerve_is_one_dimensional() {
        let c = cat("point");
        for n in 0..=4 {
            assert_eq!(nerve_basis(&c, n, ChainKind::Cyclic).len(), 1);
        }
    }

    #[test]
    fn clifford_degree_one_has_four_chains() {
        let c = cat("clifford1");
        let b = nerve_basis(&c, 1, ChainKind::Cyclic);
        assert_eq!(b.len(), 4);
    }

    #[test]
    fn arrow_degree_zero_has_two_chains() {
        // the connecting arrow is excluded: hom(Y, X) = 0
        let c = cat("arrow");
        let b = nerve_basis(&c, 0, ChainKind::Cyclic);
        assert_eq!(b.len(), 2);
    }

    #[test]
    fn clifford_boundary_of_xx_is_twice_the_point() {
        let c = cat("clifford1");
        let x = c.morphism_index("x").unwrap() as u32;
        let t = ChainTuple { base: 0, entries: vec![x, x] };
        let b = boundary_of_tuple(&c, &t, BoundaryVariant::Full);
        let one = c.morphism_index("1").unwrap() as u32;
        let expected = ChainTuple { base: 0, entries: vec![one] };
        assert_eq!(b.terms.len(), 1);
        assert_eq!(b.terms.get(&expected), Some(&Rat::from_integer(2.into())));
    }

    #[test]
    fn dual_odd_boundary_of_ee_vanishes() {
        let c = cat("dual_odd");
        let e = c.morphism_index("e").unwrap() as u32;
        let t = ChainTuple { base: 0, entries: vec![e, e] };
        assert!(boundary_of_tuple(&c, &t, BoundaryVariant::Full).is_zero());
    }

    #[test]
    fn rotation_sign_on_even_pair_is_negative() {
        let c = cat("kz2");
        let g = c.morphism_index("g").unwrap() as u32;
        let one = c.morphism_index("1").unwrap() as u32;
        let t = ChainTuple { base: 0, entries: vec![one, g] };
        let (rot, negate) = cyclic_rotation(&c, &t);
        assert_eq!(rot.entries, vec![g, one]);
        assert!(negate);
    }

    #[test]
    fn rotation_sign_on_odd_pair_is_positive() {
        let c = cat("clifford1");
        let x = c.morphism_index("x").unwrap() as u32;
        let t = ChainTuple { base: 0, entries: vec![x, x] };
        let (rot, negate) = cyclic_rotation(&c, &t);
        assert_eq!(rot.entries, vec![x, x]);
        assert!(!negate);
    }

    #[test]
    fn normalized_basis_of_point_is_empty_in_positive_degree() {
        let c = cat("point");
        for n in 1..=3 {
            let b = nerve_basis(&c, n, ChainKind::Cyclic);
            assert_eq!(b.normalized_len(), 0);
        }
    }

    #[test]
    fn normalized_basis_examples() {
        let c = cat("clifford1");
        let b = nerve_basis(&c, 1, ChainKind::Cyclic);
        assert_eq!(b.normalized_len(), 2); // (1,x), (x,x)

        let d = cat("dual_even");
        let b2 = nerve_basis(&d, 2, ChainKind::Cyclic);
        assert_eq!(b2.normalized_len(), 2); // (c,e,e) for c in {1,e}
    }

    #[test]
    fn projection_section_composes_to_identity() {
        let c = cat("dual_even");
        let b = nerve_basis(&c, 2, ChainKind::Cyclic);
        let norm = normalization(&c, &b);
        let ps = norm.projection.mul(&norm.section);
        assert_eq!(ps, SparseMatrix::identity(b.normalized_len()));
    }

    #[test]
    fn boundaries_square_to_zero_on_builtins() {
        for name in crate::builtin::BUILTIN_NAMES {
            let c = cat(name);
            let bases = cyclic_bases(&c, 4);
            for n in 2..=4usize {
                for variant in [BoundaryVariant::Full, BoundaryVariant::Bar] {
                    let d_n = boundary_matrix(&c, &bases[n], &bases[n - 1], variant);
                    let d_prev = boundary_matrix(&c, &bases[n - 1], &bases[n - 2], variant);
                    assert!(
                        d_prev.mul(&d_n).is_zero(),
                        "{name}: {variant:?} boundary fails to square to zero at n={n}"
                    );
                }
            }
        }
    }

    #[test]
    fn face_relations_on_seeded_random_chains() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for name in ["clifford1", "dual_odd", "arrow_odd", "mat11"] {
            let c = cat(name);
            for n in 2..=4usize {
                let basis = nerve_basis(&c, n, ChainKind::Cyclic);
                for _ in 0..8 {
                    let t = basis.tuples[rng.gen_range(0..basis.len())].clone();
                    // d_i d_j = d_{j-1} d_i for i < j <= n-1 (non-rotating faces)
                    for j in 1..n {
                        for i in 0..j {
                            let lhs = {
                                let mut acc = ChainVector::zero(ChainKind::Cyclic, n - 2);
                                for (u, cf) in face(&c, j, &t).terms {
                                    acc.add_scaled(&cf, &face(&c, i, &u));
                                }
                                acc
                            };
                            let rhs = {
                                let mut acc = ChainVector::zero(ChainKind::Cyclic, n - 2);
                                for (u, cf) in face(&c, i, &t).terms {
                                    acc.add_scaled(&cf, &face(&c, j - 1, &u));
                                }
                                acc
                            };
                            assert_eq!(lhs, rhs, "{name}: d_{i} d_{j} != d_{} d_{i}", j - 1);
                        }
                    }
                }
            }
        }
    }
}
