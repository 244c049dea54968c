//! Shuffle and cyclic-shuffle machinery: enumeration with graded signs, the
//! sh and csh products into the tensor category, chain-level identity
//! verification with a resolvable sign convention, and the Eilenberg–Zilber
//! and Künneth checks.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::category::{CategoryError, Parity, SuperCategory, TensorProduct};
use crate::cyclic::{homology_level_maps, ChainOps, CyclicError, MixedComplex};
use crate::field::Scalar;
use crate::homology::hochschild_complex;
use crate::nerve::{
    boundary_of_tuple, cyclic_bases, cyclic_rotation, extra_degeneracy_tuple, BoundaryVariant,
    ChainKind, ChainTuple, ChainVector, NerveBasis,
};
use crate::sparse::{SparseMatrix, SparseVec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ShuffleKind {
    Shuffle,
    CyclicShuffle,
}

/// A (p,q)-(cyclic-)shuffle, stored as the shuffled value word:
/// `word[j-1]` is the value sitting at position `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShufflePermutation {
    pub p: usize,
    pub q: usize,
    pub kind: ShuffleKind,
    pub word: Vec<usize>,
    /// Ungraded signature.
    pub sign: i8,
}

impl ShufflePermutation {
    /// Position of a value (1-based), i.e. σ(value).
    pub fn position_of(&self, value: usize) -> usize {
        self.word.iter().position(|&v| v == value).expect("value in range") + 1
    }
}

fn signature(word: &[usize]) -> i8 {
    let mut inversions = 0usize;
    for i in 0..word.len() {
        for j in i + 1..word.len() {
            if word[i] > word[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// All (p,q)-shuffles or cyclic shuffles; complete and duplicate-free.
/// Cyclic shuffles rotate each block by any amount, then shuffle, and keep
/// the results where value 1 appears before value p+1.
pub fn enumerate_shuffles(p: usize, q: usize, kind: ShuffleKind) -> Vec<ShufflePermutation> {
    let n = p + q;
    assert!(n <= 24, "shuffle enumeration out of desk range");
    let mut words: BTreeSet<Vec<usize>> = BTreeSet::new();
    let rotations_a: Vec<Vec<usize>> = match kind {
        ShuffleKind::Shuffle => vec![(1..=p).collect()],
        ShuffleKind::CyclicShuffle => {
            assert!(p >= 1 && q >= 1, "cyclic shuffles need nonempty blocks");
            (0..p)
                .map(|r| (0..p).map(|i| (i + r) % p + 1).collect())
                .collect()
        }
    };
    let rotations_b: Vec<Vec<usize>> = match kind {
        ShuffleKind::Shuffle => vec![(p + 1..=n).collect()],
        ShuffleKind::CyclicShuffle => (0..q)
            .map(|r| (0..q).map(|i| (i + r) % q + p + 1).collect())
            .collect(),
    };
    for block_a in &rotations_a {
        for block_b in &rotations_b {
            // every way to choose positions for the first block
            for mask in 0u32..(1 << n) {
                if mask.count_ones() as usize != p {
                    continue;
                }
                let mut word = vec![0usize; n];
                let (mut ia, mut ib) = (0, 0);
                for (j, slot) in word.iter_mut().enumerate() {
                    if mask & (1 << j) != 0 {
                        *slot = block_a[ia];
                        ia += 1;
                    } else {
                        *slot = block_b[ib];
                        ib += 1;
                    }
                }
                if kind == ShuffleKind::CyclicShuffle {
                    let pos1 = word.iter().position(|&v| v == 1).unwrap();
                    let pos_p1 = word.iter().position(|&v| v == p + 1).unwrap();
                    if pos1 > pos_p1 {
                        continue;
                    }
                }
                words.insert(word);
            }
        }
    }
    words
        .into_iter()
        .map(|word| {
            let sign = signature(&word);
            ShufflePermutation { p, q, kind, word, sign }
        })
        .collect()
}

/// Ungraded signature times the Koszul factor: one (-1) for every inverted
/// pair of odd letters. `parities[v-1]` is the parity of the letter `v`.
pub fn graded_sign(sigma: &ShufflePermutation, parities: &[Parity]) -> i8 {
    debug_assert_eq!(parities.len(), sigma.word.len());
    let mut sign = sigma.sign;
    for i in 0..sigma.word.len() {
        for j in i + 1..sigma.word.len() {
            // positions i < j; inverted when the values are out of order
            let (u, w) = (sigma.word[i], sigma.word[j]);
            if u > w && parities[u - 1].is_odd() && parities[w - 1].is_odd() {
                sign = -sign;
            }
        }
    }
    sign
}

/// How the "(-1)^{|a|}" sign in the Leibniz rules reads `|a|`: the
/// homological degree, the parity, or their sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DegreeSignSource {
    HomologicalDegree,
    Parity,
    Total,
}

/// The resolvable sign-convention point of the shuffle formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignConvention {
    pub koszul_in_shuffle: bool,
    pub degree_sign: DegreeSignSource,
}

impl SignConvention {
    /// The convention under which all three chain identities hold on desk
    /// instances: Koszul factors in the shuffle signs (including the merge
    /// factor of slot 0), and the Leibniz sign (-1)^{|x|} read as the
    /// homological degree.
    pub fn resolved() -> Self {
        SignConvention { koszul_in_shuffle: true, degree_sign: DegreeSignSource::HomologicalDegree }
    }
}

impl Default for SignConvention {
    fn default() -> Self {
        SignConvention::resolved()
    }
}

impl fmt::Display for SignConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = if self.koszul_in_shuffle { "koszul" } else { "nokoszul" };
        let d = match self.degree_sign {
            DegreeSignSource::HomologicalDegree => "homological",
            DegreeSignSource::Parity => "parity",
            DegreeSignSource::Total => "total",
        };
        write!(f, "{k}-{d}")
    }
}

impl SignConvention {
    pub fn parse(s: &str) -> Option<SignConvention> {
        let (k, d) = s.split_once('-')?;
        let koszul = match k {
            "koszul" => true,
            "nokoszul" => false,
            _ => return None,
        };
        let degree_sign = match d {
            "homological" => DegreeSignSource::HomologicalDegree,
            "parity" => DegreeSignSource::Parity,
            "total" => DegreeSignSource::Total,
            _ => return None,
        };
        Some(SignConvention { koszul_in_shuffle: koszul, degree_sign })
    }

    pub fn all() -> Vec<SignConvention> {
        let mut out = Vec::new();
        for koszul in [true, false] {
            for d in [
                DegreeSignSource::HomologicalDegree,
                DegreeSignSource::Parity,
                DegreeSignSource::Total,
            ] {
                out.push(SignConvention { koszul_in_shuffle: koszul, degree_sign: d });
            }
        }
        out
    }

    /// Whether the "(-1)^{|x|}" Leibniz factor in front of the second-factor
    /// term is negative, under this convention's reading.
    fn leibniz_negates<F: Scalar>(&self, a: &SuperCategory<F>, x: &ChainTuple) -> bool {
        let degree = x.len() - 1;
        match self.degree_sign {
            DegreeSignSource::HomologicalDegree => degree % 2 == 1,
            DegreeSignSource::Parity => x.parity(a).is_odd(),
            DegreeSignSource::Total => (degree % 2 == 1) ^ x.parity(a).is_odd(),
        }
    }
}

/// A tensor product with its factors, for shuffle products.
pub struct TensorContext<'c, F: Scalar> {
    pub a: &'c SuperCategory<F>,
    pub b: &'c SuperCategory<F>,
    pub product: TensorProduct<F>,
}

impl<'c, F: Scalar> TensorContext<'c, F> {
    pub fn new(a: &'c SuperCategory<F>, b: &'c SuperCategory<F>) -> Result<Self, CategoryError> {
        let product = SuperCategory::tensor_product(a, b)?;
        Ok(TensorContext { a, b, product })
    }

    pub fn cat(&self) -> &SuperCategory<F> {
        &self.product.cat
    }

    fn pair_basis(&self, f: usize, g: usize) -> u32 {
        self.product.basis_index[&(f, g)] as u32
    }

    fn pair_object(&self, x: usize, y: usize) -> u32 {
        self.product.object_index[&(x, y)] as u32
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductKind {
    Sh,
    Csh,
}

/// Places the entries of two cyclic tuples along a shuffle word, pairing
/// each entry with the identity of the other factor's current object.
pub fn interleave<F: Scalar>(
    ctx: &TensorContext<'_, F>,
    x: &ChainTuple,
    y: &ChainTuple,
    word: &[usize],
) -> ChainTuple {
    let p = x.len() - 1;
    let q = y.len() - 1;
    debug_assert_eq!(word.len(), p + q);
    let x_objs = x.objects(ctx.a, ChainKind::Cyclic);
    let y_objs = y.objects(ctx.b, ChainKind::Cyclic);
    let mut entries = vec![0u32; p + q + 1];
    entries[0] = ctx.pair_basis(x.entry(0), y.entry(0));
    // scan top-down; an entry at position j maps Z_j -> Z_{j-1}
    let mut cur_a = x_objs[p];
    let mut cur_b = y_objs[q];
    for j in (1..=p + q).rev() {
        let v = word[j - 1];
        if v <= p {
            debug_assert_eq!(cur_a, ctx.a.morphism(x.entry(v)).source);
            let id_b = ctx.b.identity_of(cur_b);
            entries[j] = ctx.pair_basis(x.entry(v), id_b);
            cur_a = ctx.a.morphism(x.entry(v)).target;
        } else {
            let w = v - p;
            debug_assert_eq!(cur_b, ctx.b.morphism(y.entry(w)).source);
            let id_a = ctx.a.identity_of(cur_a);
            entries[j] = ctx.pair_basis(id_a, y.entry(w));
            cur_b = ctx.b.morphism(y.entry(w)).target;
        }
    }
    debug_assert_eq!(cur_a, x_objs[0]);
    debug_assert_eq!(cur_b, y_objs[0]);
    let base = ctx.pair_object(x.base as usize, y.base as usize);
    ChainTuple { base, entries }
}

fn shuffle_tuple_product<F: Scalar>(
    ctx: &TensorContext<'_, F>,
    x: &ChainTuple,
    y: &ChainTuple,
    kind: ShuffleKind,
    conv: SignConvention,
    out: &mut ChainVector<F>,
    scale: &F,
) {
    let p = x.len() - 1;
    let q = y.len() - 1;
    let parities: Vec<Parity> = (1..=p)
        .map(|i| ctx.a.parity(x.entry(i)))
        .chain((1..=q).map(|i| ctx.b.parity(y.entry(i))))
        .collect();
    for sigma in enumerate_shuffles(p, q, kind) {
        let sign = if conv.koszul_in_shuffle {
            graded_sign(&sigma, &parities)
        } else {
            sigma.sign
        };
        let tuple = interleave(ctx, x, y, &sigma.word);
        let coeff = scale.clone().neg_if(sign < 0);
        out.add_term(tuple, coeff);
    }
}

/// The Koszul factor (-1)^{|x|·|y_0|} of merging the closing morphisms into
/// slot 0 of the shuffled tuple: the second factor's closing entry crosses
/// the whole first chain.
fn merge_negates<F: Scalar>(ctx: &TensorContext<'_, F>, tx: &ChainTuple, ty: &ChainTuple) -> bool {
    tx.parity(ctx.a).koszul_negates(ctx.b.parity(ty.entry(0)))
}

/// The shuffle product sh (degree 0) or cyclic shuffle product csh
/// (degree +2, via the extra degeneracies and the coherence sign ν) of two
/// cyclic chain vectors, landing in the cyclic nerve of the tensor category.
pub fn shuffle_product<F: Scalar>(
    ctx: &TensorContext<'_, F>,
    x: &ChainVector<F>,
    y: &ChainVector<F>,
    kind: ProductKind,
    conv: SignConvention,
) -> ChainVector<F> {
    let (p, q) = (x.degree, y.degree);
    let out_degree = match kind {
        ProductKind::Sh => p + q,
        ProductKind::Csh => p + q + 2,
    };
    let mut out = ChainVector::zero(ChainKind::Cyclic, out_degree);
    for (tx, cx) in &x.terms {
        for (ty, cy) in &y.terms {
            let c = cx.clone() * cy.clone();
            match kind {
                ProductKind::Sh => {
                    let c = c.neg_if(conv.koszul_in_shuffle && merge_negates(ctx, tx, ty));
                    shuffle_tuple_product(ctx, tx, ty, ShuffleKind::Shuffle, conv, &mut out, &c);
                }
                ProductKind::Csh => {
                    let lx = extra_degeneracy_tuple(ctx.a, tx);
                    let ly = extra_degeneracy_tuple(ctx.b, ty);
                    // the extra degeneracy of the second factor crosses the
                    // first: (s⊗s)(x⊗y) = (-1)^{deg x} s(x)⊗s(y)
                    let c = c.neg_if(p % 2 == 1);
                    shuffle_tuple_product(
                        ctx,
                        &lx,
                        &ly,
                        ShuffleKind::CyclicShuffle,
                        conv,
                        &mut out,
                        &c,
                    );
                }
            }
        }
    }
    out
}

/// Normalized boundary at chain level: apply ∂ and drop degenerate tuples.
pub fn normalized_boundary<F: Scalar>(
    cat: &SuperCategory<F>,
    v: &ChainVector<F>,
) -> ChainVector<F> {
    let mut out = ChainVector::zero(v.kind, v.degree.saturating_sub(1));
    for (t, c) in &v.terms {
        out.add_scaled(c, &boundary_of_tuple(cat, t, BoundaryVariant::Full));
    }
    out.project_normalized(cat);
    out
}

/// Connes B = (1-t) s N at chain level on one tuple.
pub fn connes_b_tuple<F: Scalar>(cat: &SuperCategory<F>, t: &ChainTuple) -> ChainVector<F> {
    let n = t.len() - 1;
    let mut out = ChainVector::zero(ChainKind::Cyclic, n + 1);
    let mut cur = t.clone();
    let mut neg = false;
    for _ in 0..=n {
        let lifted = extra_degeneracy_tuple(cat, &cur);
        out.add_term(lifted.clone(), cat.scalar(1).neg_if(neg));
        let (rot, rneg) = cyclic_rotation(cat, &lifted);
        out.add_term(rot, cat.scalar(-1).neg_if(neg ^ rneg));
        let (next, nneg) = cyclic_rotation(cat, &cur);
        cur = next;
        neg ^= nneg;
    }
    out
}

/// Normalized B at chain level.
pub fn normalized_b<F: Scalar>(cat: &SuperCategory<F>, v: &ChainVector<F>) -> ChainVector<F> {
    let mut out = ChainVector::zero(v.kind, v.degree + 1);
    for (t, c) in &v.terms {
        out.add_scaled(c, &connes_b_tuple(cat, t));
    }
    out.project_normalized(cat);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChainIdentity {
    /// [∂, sh] = 0
    BoundaryShuffle,
    /// [B, sh] + [∂, csh] = 0
    MixedShuffle,
    /// [B, csh] = 0
    ConnesCyclicShuffle,
}

impl fmt::Display for ChainIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChainIdentity::BoundaryShuffle => write!(f, "[d,sh] = 0"),
            ChainIdentity::MixedShuffle => write!(f, "[B,sh] + [d,csh] = 0"),
            ChainIdentity::ConnesCyclicShuffle => write!(f, "[B,csh] = 0"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct IdentityWitness {
    pub identity: ChainIdentity,
    pub p: usize,
    pub q: usize,
    pub x: String,
    pub y: String,
}

#[derive(Debug, Clone)]
pub struct IdentityReport {
    pub convention: SignConvention,
    pub max_degree: usize,
    pub pairs_checked: usize,
    pub failures: Vec<IdentityWitness>,
}

impl IdentityReport {
    pub fn all_hold(&self) -> bool {
        self.failures.is_empty()
    }
}

fn xorshift(state: &mut u64) -> u64 {
    let mut x = *state;
    x ^= x << 13;
    x ^= x >> 7;
    x ^= x << 17;
    *state = x.max(1);
    x
}

/// Evaluates the three normalized chain identities on the full normalized
/// basis of N_p(A) ⊗ N_q(B) for p + q <= nmax. The seed shuffles the sweep
/// order, which picks the witness reported first on failure.
pub fn verify_chain_identities<F: Scalar>(
    a: &SuperCategory<F>,
    b: &SuperCategory<F>,
    nmax: usize,
    conv: SignConvention,
    seed: u64,
) -> Result<IdentityReport, CategoryError> {
    let ctx = TensorContext::new(a, b)?;
    let bases_a = cyclic_bases(a, nmax);
    let bases_b = cyclic_bases(b, nmax);

    let mut pairs: Vec<(usize, usize, usize, usize)> = Vec::new();
    for p in 0..=nmax {
        for q in 0..=(nmax - p) {
            for &ix in &bases_a[p].normalized {
                for &iy in &bases_b[q].normalized {
                    pairs.push((p, q, ix, iy));
                }
            }
        }
    }
    let mut state = seed | 1;
    // Fisher-Yates with the tiny xorshift stream
    for i in (1..pairs.len()).rev() {
        let j = (xorshift(&mut state) % (i as u64 + 1)) as usize;
        pairs.swap(i, j);
    }

    let mut failures = Vec::new();
    for &(p, q, ix, iy) in &pairs {
        let xt = bases_a[p].tuples[ix].clone();
        let yt = bases_b[q].tuples[iy].clone();
        let x = ChainVector::from_tuple(ChainKind::Cyclic, p, xt.clone());
        let y = ChainVector::from_tuple(ChainKind::Cyclic, q, yt.clone());
        let x_negates = conv.leibniz_negates(a, &xt);

        let dx = normalized_boundary(a, &x);
        let dy = normalized_boundary(b, &y);
        let bx = normalized_b(a, &x);
        let by = normalized_b(b, &y);

        let sh = |u: &ChainVector<F>, v: &ChainVector<F>| {
            let mut w = shuffle_product(&ctx, u, v, ProductKind::Sh, conv);
            w.project_normalized(ctx.cat());
            w
        };
        let csh = |u: &ChainVector<F>, v: &ChainVector<F>| {
            let mut w = shuffle_product(&ctx, u, v, ProductKind::Csh, conv);
            w.project_normalized(ctx.cat());
            w
        };

        let minus_one = ctx.cat().scalar(-1);
        let signed = |v: ChainVector<F>, negate: bool| {
            let mut v = v;
            if negate {
                v.scale(&minus_one);
            }
            v
        };

        // (i) [∂, sh] = 0 with the convention's reading of (-1)^{|x|}
        let mut lhs1 = normalized_boundary(ctx.cat(), &sh(&x, &y));
        lhs1.add_scaled(&minus_one, &sh(&dx, &y));
        lhs1.add_scaled(&minus_one, &signed(sh(&x, &dy), x_negates));
        if !lhs1.is_zero() {
            failures.push(IdentityWitness {
                identity: ChainIdentity::BoundaryShuffle,
                p,
                q,
                x: xt.display(a),
                y: yt.display(b),
            });
            continue;
        }

        // (ii) [B, sh] + [∂, csh] = 0
        let mut lhs2 = normalized_b(ctx.cat(), &sh(&x, &y));
        lhs2.add_scaled(&minus_one, &sh(&bx, &y));
        lhs2.add_scaled(&minus_one, &signed(sh(&x, &by), x_negates));
        lhs2.add(&normalized_boundary(ctx.cat(), &csh(&x, &y)));
        lhs2.add_scaled(&minus_one, &csh(&dx, &y));
        lhs2.add_scaled(&minus_one, &signed(csh(&x, &dy), x_negates));
        if !lhs2.is_zero() {
            failures.push(IdentityWitness {
                identity: ChainIdentity::MixedShuffle,
                p,
                q,
                x: xt.display(a),
                y: yt.display(b),
            });
            continue;
        }

        // (iii) [B, csh] = 0 (every term is degenerate after normalization)
        let mut lhs3 = normalized_b(ctx.cat(), &csh(&x, &y));
        lhs3.add_scaled(&minus_one, &csh(&bx, &y));
        lhs3.add_scaled(&minus_one, &signed(csh(&x, &by), x_negates));
        if !lhs3.is_zero() {
            failures.push(IdentityWitness {
                identity: ChainIdentity::ConnesCyclicShuffle,
                p,
                q,
                x: xt.display(a),
                y: yt.display(b),
            });
        }
    }

    Ok(IdentityReport { convention: conv, max_degree: nmax, pairs_checked: pairs.len(), failures })
}

#[derive(Debug, Clone)]
pub struct ConventionResolution {
    pub chosen: SignConvention,
    pub passing: Vec<SignConvention>,
    pub rejected: Vec<(SignConvention, IdentityWitness)>,
}

/// Tries every convention on probe instances and keeps the ones under which
/// all three identities hold, preferring the default on ties.
pub fn resolve_convention<F: Scalar>(
    probes: &[(&SuperCategory<F>, &SuperCategory<F>)],
    nmax: usize,
    seed: u64,
) -> Result<ConventionResolution, CategoryError> {
    let mut passing = Vec::new();
    let mut rejected = Vec::new();
    for conv in SignConvention::all() {
        let mut witness = None;
        for &(a, b) in probes {
            let report = verify_chain_identities(a, b, nmax, conv, seed)?;
            if let Some(w) = report.failures.into_iter().next() {
                witness = Some(w);
                break;
            }
        }
        match witness {
            Some(w) => rejected.push((conv, w)),
            None => passing.push(conv),
        }
    }
    let default = SignConvention::default();
    let chosen = if passing.contains(&default) {
        default
    } else {
        *passing.first().unwrap_or(&default)
    };
    Ok(ConventionResolution { chosen, passing, rejected })
}

#[derive(Debug, Clone)]
pub struct EzRow {
    pub degree: usize,
    pub dim_tensor: usize,
    pub dim_sum: usize,
    pub induced_rank: usize,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct EzReport {
    pub rows: Vec<EzRow>,
}

impl EzReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

fn vector_from_coords<F: Scalar>(
    basis: &NerveBasis,
    coords: &SparseVec<F>,
) -> ChainVector<F> {
    let mut v = ChainVector::zero(basis.kind, basis.degree);
    for (i, c) in coords.iter() {
        v.add_term(basis.tuples[*i].clone(), c.clone());
    }
    v
}

/// Eilenberg–Zilber check: dim HH_n(A⊗B) = Σ_{p+q=n} dim HH_p(A)·dim HH_q(B),
/// and the induced map of sh on homology has full rank, for n <= nmax.
pub fn ez_check<F: Scalar>(
    a: &SuperCategory<F>,
    b: &SuperCategory<F>,
    nmax: usize,
    conv: SignConvention,
) -> Result<EzReport, CyclicError> {
    let ctx = TensorContext::new(a, b).map_err(|e| CyclicError::LiftFailed(e.to_string()))?;
    let internal = nmax + 1;
    let bases_a = cyclic_bases(a, internal);
    let bases_b = cyclic_bases(b, internal);
    let bases_t = cyclic_bases(ctx.cat(), internal);

    let cx_a = hochschild_complex(a, internal);
    let cx_b = hochschild_complex(b, internal);
    let cx_t = hochschild_complex(ctx.cat(), internal);
    let sol_a: Vec<_> = (0..=nmax).map(|n| cx_a.quotient_solver(n)).collect();
    let sol_b: Vec<_> = (0..=nmax).map(|n| cx_b.quotient_solver(n)).collect();
    let sol_t: Vec<_> = (0..=nmax).map(|n| cx_t.quotient_solver(n)).collect();

    let mut rows = Vec::new();
    for n in 0..=nmax {
        let dim_tensor = sol_t[n].dim();
        let mut dim_sum = 0;
        let mut cols: Vec<SparseVec<F>> = Vec::new();
        for p in 0..=n {
            let q = n - p;
            dim_sum += sol_a[p].dim() * sol_b[q].dim();
            for ra in sol_a[p].representatives() {
                let va = vector_from_coords(&bases_a[p], ra);
                for rb in sol_b[q].representatives() {
                    let vb = vector_from_coords(&bases_b[q], rb);
                    let image = shuffle_product(&ctx, &va, &vb, ProductKind::Sh, conv);
                    let coords = image.to_sparsevec(&bases_t[n]);
                    let class = sol_t[n].class_coords(&coords).map_err(CyclicError::LiftFailed)?;
                    cols.push(SparseVec::from_entries(class.into_iter().enumerate()));
                }
            }
        }
        let induced = SparseMatrix::from_columns(dim_tensor, cols);
        let induced_rank = induced.rank();
        let pass = dim_tensor == dim_sum && induced_rank == dim_sum;
        rows.push(EzRow { degree: n, dim_tensor, dim_sum, induced_rank, pass });
    }
    Ok(EzReport { rows })
}

#[derive(Debug, Clone)]
pub struct KunnethRow {
    pub degree: usize,
    pub dim_tensor: usize,
    pub ker_dim: usize,
    pub coker_dim: usize,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct KunnethReport {
    pub rows: Vec<KunnethRow>,
}

impl KunnethReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

fn kronecker<F: Scalar>(a: &SparseMatrix<F>, b: &SparseMatrix<F>) -> SparseMatrix<F> {
    let mut triplets = Vec::new();
    for ja in 0..a.cols() {
        for (ia, ca) in a.column(ja).iter() {
            for jb in 0..b.cols() {
                for (ib, cb) in b.column(jb).iter() {
                    triplets.push((ia * b.rows() + ib, ja * b.cols() + jb, ca.clone() * cb.clone()));
                }
            }
        }
    }
    SparseMatrix::from_triplets(a.rows() * b.rows(), a.cols() * b.cols(), triplets)
}

/// Künneth check via the rank identity
/// dim HC_n(A⊗B) = dim ker φ_n + dim coker φ_{n+1}, φ = S⊗id - id⊗S.
pub fn kunneth_check<F: Scalar>(
    a: &SuperCategory<F>,
    b: &SuperCategory<F>,
    nmax: usize,
) -> Result<KunnethReport, CyclicError> {
    let ctx = TensorContext::new(a, b).map_err(|e| CyclicError::LiftFailed(e.to_string()))?;
    let deep = nmax + 1;
    let maps_a = homology_level_maps(a, deep)?;
    let maps_b = homology_level_maps(b, deep)?;

    // exact HC dims of the tensor category through nmax
    let ops_t = ChainOps::build(ctx.cat(), nmax + 1);
    let mixed_t = MixedComplex::build(&ops_t, nmax + 1);
    let hc_t = mixed_t.complex.homology_dims().map_err(CyclicError::Complex)?;

    let da: Vec<usize> = maps_a.hc.iter().map(|d| d.dim).collect();
    let db: Vec<usize> = maps_b.hc.iter().map(|d| d.dim).collect();

    // φ_m : ⊕_{p+q=m} HC_p(A)⊗HC_q(B) -> ⊕_{p+q=m-2}
    let phi = |m: usize| -> SparseMatrix<F> {
        let dom_blocks: Vec<(usize, usize)> = (0..=m).map(|p| (p, m - p)).collect();
        let tgt_blocks: Vec<(usize, usize)> =
            if m >= 2 { (0..=m - 2).map(|p| (p, m - 2 - p)).collect() } else { Vec::new() };
        let block_dim = |(p, q): (usize, usize)| da[p] * db[q];
        let dom_dim: usize = dom_blocks.iter().map(|&pq| block_dim(pq)).sum();
        let tgt_dim: usize = tgt_blocks.iter().map(|&pq| block_dim(pq)).sum();
        let dom_off: Vec<usize> = dom_blocks
            .iter()
            .scan(0usize, |acc, &pq| {
                let o = *acc;
                *acc += block_dim(pq);
                Some(o)
            })
            .collect();
        let tgt_off: Vec<usize> = tgt_blocks
            .iter()
            .scan(0usize, |acc, &pq| {
                let o = *acc;
                *acc += block_dim(pq);
                Some(o)
            })
            .collect();
        let tgt_pos: HashMap<(usize, usize), usize> =
            tgt_blocks.iter().enumerate().map(|(i, &pq)| (pq, i)).collect();
        let mut triplets = Vec::new();
        for (bi, &(p, q)) in dom_blocks.iter().enumerate() {
            if da[p] * db[q] == 0 {
                continue;
            }
            if p >= 2 {
                let block = kronecker(&maps_a.s_maps[p], &SparseMatrix::identity(db[q]));
                let t = tgt_pos[&(p - 2, q)];
                for j in 0..block.cols() {
                    for (i, c) in block.column(j).iter() {
                        triplets.push((tgt_off[t] + i, dom_off[bi] + j, c.clone()));
                    }
                }
            }
            if q >= 2 {
                let block = kronecker(&SparseMatrix::identity(da[p]), &maps_b.s_maps[q]).neg();
                let t = tgt_pos[&(p, q - 2)];
                for j in 0..block.cols() {
                    for (i, c) in block.column(j).iter() {
                        triplets.push((tgt_off[t] + i, dom_off[bi] + j, c.clone()));
                    }
                }
            }
        }
        SparseMatrix::from_triplets(tgt_dim, dom_dim, triplets)
    };

    let mut rows = Vec::new();
    for n in 0..=nmax {
        let phi_n = phi(n);
        let ker_dim = phi_n.cols() - phi_n.rank();
        let phi_up = phi(n + 1);
        let coker_dim = phi_up.rows() - phi_up.rank();
        let dim_tensor = hc_t[n];
        let pass = dim_tensor == ker_dim + coker_dim;
        rows.push(KunnethRow { degree: n, dim_tensor, ker_dim, coker_dim, pass });
    }
    Ok(KunnethReport { rows })
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
    fn shuffle_counts_are_binomial() {
        fn binom(n: usize, k: usize) -> usize {
            (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
        }
        for p in 0..=4usize {
            for q in 0..=4usize {
                if p + q > 7 {
                    continue;
                }
                let count = enumerate_shuffles(p, q, ShuffleKind::Shuffle).len();
                assert_eq!(count, binom(p + q, p), "({p},{q})");
            }
        }
    }

    #[test]
    fn one_one_shuffles_have_signs_plus_minus() {
        let shs = enumerate_shuffles(1, 1, ShuffleKind::Shuffle);
        let mut signs: Vec<i8> = shs.iter().map(|s| s.sign).collect();
        signs.sort();
        assert_eq!(signs, vec![-1, 1]);
    }

    #[test]
    fn one_one_cyclic_shuffle_is_identity_only() {
        let shs = enumerate_shuffles(1, 1, ShuffleKind::CyclicShuffle);
        assert_eq!(shs.len(), 1);
        assert_eq!(shs[0].word, vec![1, 2]);
    }

    #[test]
    fn cyclic_shuffles_match_independent_predicate() {
        // Independent oracle: filter all of S_4 by "is some rotation of each
        // block, shuffled, with value 1 before value 3".
        fn is_rotation(seq: &[usize], lo: usize, hi: usize) -> bool {
            let block: Vec<usize> = (lo..=hi).collect();
            let k = block.len();
            (0..k).any(|r| (0..k).all(|i| seq[i] == block[(i + r) % k]))
        }
        let mut expected = BTreeSet::new();
        let perms = permutations(&[1, 2, 3, 4]);
        for word in perms {
            let block_a: Vec<usize> = word.iter().copied().filter(|&v| v <= 2).collect();
            let block_b: Vec<usize> = word.iter().copied().filter(|&v| v > 2).collect();
            let pos1 = word.iter().position(|&v| v == 1).unwrap();
            let pos3 = word.iter().position(|&v| v == 3).unwrap();
            if is_rotation(&block_a, 1, 2) && is_rotation(&block_b, 3, 4) && pos1 < pos3 {
                expected.insert(word.clone());
            }
        }
        let got: BTreeSet<Vec<usize>> = enumerate_shuffles(2, 2, ShuffleKind::CyclicShuffle)
            .into_iter()
            .map(|s| s.word)
            .collect();
        assert_eq!(got, expected);
    }

    fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
        if items.len() <= 1 {
            return vec![items.to_vec()];
        }
        let mut out = Vec::new();
        for (i, &x) in items.iter().enumerate() {
            let mut rest = items.to_vec();
            rest.remove(i);
            for mut tail in permutations(&rest) {
                tail.insert(0, x);
                out.push(tail);
            }
        }
        out
    }

    #[test]
    fn graded_sign_koszul_rules() {
        let swap = ShufflePermutation {
            p: 1,
            q: 1,
            kind: ShuffleKind::Shuffle,
            word: vec![2, 1],
            sign: -1,
        };
        assert_eq!(graded_sign(&swap, &[Parity::Even, Parity::Even]), -1);
        assert_eq!(graded_sign(&swap, &[Parity::Odd, Parity::Odd]), 1);
        let id = ShufflePermutation {
            p: 1,
            q: 1,
            kind: ShuffleKind::Shuffle,
            word: vec![1, 2],
            sign: 1,
        };
        assert_eq!(graded_sign(&id, &[Parity::Odd, Parity::Odd]), 1);
    }

    #[test]
    fn default_convention_holds_on_graded_probes() {
        let c1 = cat("clifford1");
        let d = cat("dual_odd");
        let report =
            verify_chain_identities(&c1, &d, 3, SignConvention::default(), 7).unwrap();
        assert!(report.all_hold(), "failures: {:?}", report.failures);
    }

    #[test]
    fn koszul_off_fails_with_witness() {
        let c1 = cat("clifford1");
        let conv = SignConvention { koszul_in_shuffle: false, ..Default::default() };
        let report = verify_chain_identities(&c1, &c1, 3, conv, 7).unwrap();
        assert!(!report.all_hold());
    }

    #[test]
    fn resolver_selects_koszul_homological_uniquely() {
        let c1 = cat("clifford1");
        let de = cat("dual_even");
        let dd = cat("dual_odd");
        let probes = vec![(&c1, &c1), (&c1, &dd), (&de, &c1)];
        let res = resolve_convention(&probes, 3, 11).unwrap();
        assert_eq!(res.chosen, SignConvention::resolved());
        assert_eq!(res.passing, vec![SignConvention::resolved()]);
        // every Koszul-off convention fails with a witness
        assert!(res.rejected.iter().any(|(c, _)| !c.koszul_in_shuffle));
        // the parity and total readings fail on graded instances
        assert!(res.rejected.iter().any(|(c, _)| {
            c.koszul_in_shuffle && c.degree_sign == DegreeSignSource::Total
        }));
    }

    #[test]
    fn ez_point_times_cat_reproduces_cat() {
        let p = cat("point");
        for name in ["dual_odd", "clifford1"] {
            let c = cat(name);
            let report = ez_check(&p, &c, 3, SignConvention::default()).unwrap();
            assert!(report.all_pass(), "{name}: {:?}", report.rows);
        }
    }

    #[test]
    fn kunneth_point_point_alternates() {
        let p = cat("point");
        let report = kunneth_check(&p, &p, 3).unwrap();
        assert!(report.all_pass(), "{:?}", report.rows);
        let dims: Vec<usize> = report.rows.iter().map(|r| r.dim_tensor).collect();
        assert_eq!(dims, vec![1, 0, 1, 0]);
        assert_eq!(report.rows[0].ker_dim, 1);
        assert_eq!(report.rows[1].coker_dim, 0);
    }
}
