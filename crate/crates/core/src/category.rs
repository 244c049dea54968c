//! Finite superadditive categories presented by structure constants, and the
//! constructions on them: validation, opposite, tensor product, the
//! one-object superalgebra, and categories carved out of an algebra by
//! idempotents.
//!
//! Composition is stored diagrammatically: `compose(f, g)` is "first `f`,
//! then `g`", defined exactly when `target(f) == source(g)`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::ops::Add;

use thiserror::Error;

use crate::field::{FieldSpec, Scalar};
use crate::sparse::{Echelon, SparseVec};

/// Z_2 degree of a homogeneous element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_u8(v: u8) -> Option<Parity> {
        match v {
            0 => Some(Parity::Even),
            1 => Some(Parity::Odd),
            _ => None,
        }
    }

    pub fn as_u8(self) -> u8 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    /// Koszul sign of swapping two homogeneous elements: true means negative.
    pub fn koszul_negates(self, other: Parity) -> bool {
        self.is_odd() && other.is_odd()
    }
}

impl Add for Parity {
    type Output = Parity;
    fn add(self, rhs: Parity) -> Parity {
        if self == rhs {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_u8())
    }
}

/// A homogeneous basis morphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisMorphism {
    pub id: String,
    pub source: usize,
    pub target: usize,
    pub parity: Parity,
}

#[derive(Debug, Error)]
pub enum CategoryError {
    #[error("category must have at least one object")]
    NoObjects,
    #[error("duplicate or empty object name `{0}`")]
    BadObjectName(String),
    #[error("duplicate or empty morphism id `{0}`")]
    BadMorphismId(String),
    #[error("morphism `{0}` references an out-of-range object")]
    BadEndpoints(String),
    #[error("object `{0}` has no identity designated")]
    MissingIdentity(String),
    #[error("designated identity `{0}` of object `{1}` is not an even endomorphism")]
    BadIdentity(String, String),
    #[error("composition entry ({0}, {1}) is not a composable pair")]
    NotComposable(String, String),
    #[error("duplicate composition entry ({0}, {1})")]
    DuplicateComposition(String, String),
    #[error("composition ({0}, {1}) has a term `{2}` outside hom({3}, {4})")]
    TermOutsideHom(String, String, String, String, String),
    #[error("composable pair ({0}, {1}) has no composition entry")]
    MissingComposition(String, String),
    #[error("field specs differ: {0} vs {1}")]
    FieldMismatch(FieldSpec, FieldSpec),
    #[error("idempotent check failed: {0}")]
    BadIdempotent(String),
    #[error("supplied idempotents are not orthogonal")]
    NotOrthogonal,
    #[error("supplied idempotents do not sum to the identity")]
    Incomplete,
    #[error("operation requires a one-object category")]
    NotOneObject,
}

/// One semantic violation found by `validate`.
#[derive(Debug, Clone)]
pub enum Violation {
    ParityRule { first: String, then: String, term: String },
    Associativity { f: String, g: String, h: String },
    LeftIdentity { morphism: String },
    RightIdentity { morphism: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ParityRule { first, then, term } => write!(
                f,
                "parity violation: compose({first}, {then}) contains `{term}` of wrong parity"
            ),
            Violation::Associativity { f: a, g, h } => {
                write!(f, "associativity fails on ({a}, {g}, {h})")
            }
            Violation::LeftIdentity { morphism } => {
                write!(f, "left identity law fails on `{morphism}`")
            }
            Violation::RightIdentity { morphism } => {
                write!(f, "right identity law fails on `{morphism}`")
            }
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            writeln!(f, "valid")
        } else {
            for v in &self.violations {
                writeln!(f, "{v}")?;
            }
            Ok(())
        }
    }
}

/// A finite superadditive category given by structure constants.
#[derive(Debug, Clone)]
pub struct SuperCategory<F: Scalar> {
    field: FieldSpec,
    objects: Vec<String>,
    basis: Vec<BasisMorphism>,
    hom: BTreeMap<(usize, usize), Vec<usize>>,
    identities: Vec<usize>,
    composition: HashMap<(usize, usize), SparseVec<F>>,
}

impl<F: Scalar> SuperCategory<F> {
    /// Structural constructor. Compositions with a designated identity are
    /// filled in from the identity laws when absent; all other composable
    /// pairs must be supplied explicitly.
    pub fn from_parts(
        field: FieldSpec,
        objects: Vec<String>,
        basis: Vec<BasisMorphism>,
        identities: Vec<usize>,
        composition: impl IntoIterator<Item = ((usize, usize), Vec<(usize, F)>)>,
    ) -> Result<Self, CategoryError> {
        if objects.is_empty() {
            return Err(CategoryError::NoObjects);
        }
        let mut seen = HashSet::new();
        for name in &objects {
            if name.is_empty() || !seen.insert(name.clone()) {
                return Err(CategoryError::BadObjectName(name.clone()));
            }
        }
        let mut seen = HashSet::new();
        let mut hom: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (k, m) in basis.iter().enumerate() {
            if m.id.is_empty() || !seen.insert(m.id.clone()) {
                return Err(CategoryError::BadMorphismId(m.id.clone()));
            }
            if m.source >= objects.len() || m.target >= objects.len() {
                return Err(CategoryError::BadEndpoints(m.id.clone()));
            }
            hom.entry((m.source, m.target)).or_default().push(k);
        }
        if identities.len() != objects.len() {
            let missing = identities.len().min(objects.len());
            return Err(CategoryError::MissingIdentity(
                objects.get(missing).cloned().unwrap_or_default(),
            ));
        }
        for (x, &e) in identities.iter().enumerate() {
            let m = basis.get(e).ok_or_else(|| CategoryError::MissingIdentity(objects[x].clone()))?;
            if m.source != x || m.target != x || m.parity != Parity::Even {
                return Err(CategoryError::BadIdentity(m.id.clone(), objects[x].clone()));
            }
        }

        let mut table: HashMap<(usize, usize), SparseVec<F>> = HashMap::new();
        for ((f, g), terms) in composition {
            let (mf, mg) = (&basis[f], &basis[g]);
            if mf.target != mg.source {
                return Err(CategoryError::NotComposable(mf.id.clone(), mg.id.clone()));
            }
            if table.contains_key(&(f, g)) {
                return Err(CategoryError::DuplicateComposition(mf.id.clone(), mg.id.clone()));
            }
            for (t, _) in &terms {
                let mt = &basis[*t];
                if mt.source != mf.source || mt.target != mg.target {
                    return Err(CategoryError::TermOutsideHom(
                        mf.id.clone(),
                        mg.id.clone(),
                        mt.id.clone(),
                        objects[mf.source].clone(),
                        objects[mg.target].clone(),
                    ));
                }
            }
            table.insert((f, g), SparseVec::from_entries(terms));
        }

        // identity compositions implied by the laws
        for (k, m) in basis.iter().enumerate() {
            let li = identities[m.source];
            let ri = identities[m.target];
            table
                .entry((li, k))
                .or_insert_with(|| SparseVec::from_entries([(k, F::one())]));
            table
                .entry((k, ri))
                .or_insert_with(|| SparseVec::from_entries([(k, F::one())]));
        }

        // every composable pair must now be present
        for (f, mf) in basis.iter().enumerate() {
            for (g, mg) in basis.iter().enumerate() {
                if mf.target == mg.source && !table.contains_key(&(f, g)) {
                    return Err(CategoryError::MissingComposition(mf.id.clone(), mg.id.clone()));
                }
            }
        }

        Ok(SuperCategory { field, objects, basis, hom, identities, composition: table })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn scalar(&self, n: i64) -> F {
        F::from_int(&self.field, n)
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn object_name(&self, x: usize) -> &str {
        &self.objects[x]
    }

    pub fn object_names(&self) -> &[String] {
        &self.objects
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|n| n == name)
    }

    pub fn basis_count(&self) -> usize {
        self.basis.len()
    }

    pub fn morphism(&self, k: usize) -> &BasisMorphism {
        &self.basis[k]
    }

    pub fn morphisms(&self) -> &[BasisMorphism] {
        &self.basis
    }

    pub fn morphism_index(&self, id: &str) -> Option<usize> {
        self.basis.iter().position(|m| m.id == id)
    }

    pub fn identity_of(&self, x: usize) -> usize {
        self.identities[x]
    }

    pub fn is_identity(&self, k: usize) -> bool {
        self.identities[self.basis[k].source] == k && self.basis[k].source == self.basis[k].target
    }

    pub fn parity(&self, k: usize) -> Parity {
        self.basis[k].parity
    }

    pub fn hom_basis(&self, src: usize, tgt: usize) -> &[usize] {
        self.hom.get(&(src, tgt)).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn hom_pairs(&self) -> impl Iterator<Item = (&(usize, usize), &Vec<usize>)> {
        self.hom.iter()
    }

    /// (even, odd) dimensions of hom(src, tgt).
    pub fn hom_dims(&self, src: usize, tgt: usize) -> (usize, usize) {
        let mut dims = (0, 0);
        for &k in self.hom_basis(src, tgt) {
            match self.basis[k].parity {
                Parity::Even => dims.0 += 1,
                Parity::Odd => dims.1 += 1,
            }
        }
        dims
    }

    /// Per-object-pair (even, odd) dimensions, for isomorphism-shape tests.
    pub fn hom_profile(&self) -> Vec<Vec<(usize, usize)>> {
        (0..self.objects.len())
            .map(|s| (0..self.objects.len()).map(|t| self.hom_dims(s, t)).collect())
            .collect()
    }

    pub fn total_dim(&self) -> usize {
        self.basis.len()
    }

    /// Structure constants of `first; then`, None when not composable.
    pub fn compose(&self, first: usize, then: usize) -> Option<&SparseVec<F>> {
        self.composition.get(&(first, then))
    }

    /// Bilinear extension of composition; non-composable basis pairs
    /// contribute zero (the matrix product of the corresponding superalgebra).
    pub fn compose_vectors(&self, a: &SparseVec<F>, b: &SparseVec<F>) -> SparseVec<F> {
        let mut out = SparseVec::new();
        for (f, c) in a.iter() {
            for (g, d) in b.iter() {
                if let Some(expansion) = self.compose(*f, *g) {
                    out.axpy(&(c.clone() * d.clone()), expansion);
                }
            }
        }
        out
    }

    /// Semantic validation: parity additivity, associativity on all
    /// composable basis triples, and the identity laws.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();

        for ((f, g), expansion) in self.composition.iter() {
            let expected = self.basis[*f].parity + self.basis[*g].parity;
            for (t, _) in expansion.iter() {
                if self.basis[*t].parity != expected {
                    report.violations.push(Violation::ParityRule {
                        first: self.basis[*f].id.clone(),
                        then: self.basis[*g].id.clone(),
                        term: self.basis[*t].id.clone(),
                    });
                }
            }
        }

        for f in 0..self.basis.len() {
            for &g in self.hom_reachable(self.basis[f].target) {
                for &h in self.hom_reachable(self.basis[g].target) {
                    let fg = self.compose(f, g).expect("composable");
                    let gh = self.compose(g, h).expect("composable");
                    let left = self.compose_on_right(fg, h);
                    let right = self.compose_on_left(f, gh);
                    if left != right {
                        report.violations.push(Violation::Associativity {
                            f: self.basis[f].id.clone(),
                            g: self.basis[g].id.clone(),
                            h: self.basis[h].id.clone(),
                        });
                    }
                }
            }
        }

        for (k, m) in self.basis.iter().enumerate() {
            let li = self.identities[m.source];
            let ri = self.identities[m.target];
            let unit = SparseVec::from_entries([(k, F::one())]);
            if self.compose(li, k) != Some(&unit) {
                report.violations.push(Violation::LeftIdentity { morphism: m.id.clone() });
            }
            if self.compose(k, ri) != Some(&unit) {
                report.violations.push(Violation::RightIdentity { morphism: m.id.clone() });
            }
        }

        report
    }

    fn hom_reachable(&self, from: usize) -> impl Iterator<Item = &usize> {
        self.hom
            .range((from, 0)..=(from, usize::MAX))
            .flat_map(|(_, v)| v.iter())
    }

    fn compose_on_right(&self, vec: &SparseVec<F>, h: usize) -> SparseVec<F> {
        let mut out = SparseVec::new();
        for (m, c) in vec.iter() {
            out.axpy(c, self.compose(*m, h).expect("composable"));
        }
        out
    }

    fn compose_on_left(&self, f: usize, vec: &SparseVec<F>) -> SparseVec<F> {
        let mut out = SparseVec::new();
        for (m, c) in vec.iter() {
            out.axpy(c, self.compose(f, *m).expect("composable"));
        }
        out
    }

    /// The opposite category: hom-pairs reversed, composition carrying the
    /// Koszul sign `f° g° = (-1)^{|f||g|} (g f)°`.
    pub fn opposite(&self) -> SuperCategory<F> {
        let basis: Vec<BasisMorphism> = self
            .basis
            .iter()
            .map(|m| BasisMorphism {
                id: m.id.clone(),
                source: m.target,
                target: m.source,
                parity: m.parity,
            })
            .collect();
        let composition: Vec<((usize, usize), Vec<(usize, F)>)> = self
            .composition
            .iter()
            .map(|(&(f, g), v)| {
                let negate = self.basis[f].parity.koszul_negates(self.basis[g].parity);
                let terms = v
                    .iter()
                    .map(|(t, c)| (*t, c.clone().neg_if(negate)))
                    .collect();
                ((g, f), terms)
            })
            .collect();
        SuperCategory::from_parts(
            self.field,
            self.objects.clone(),
            basis,
            self.identities.clone(),
            composition,
        )
        .expect("opposite of a well-formed category is well-formed")
    }

    /// Whether two categories have literally equal presentations.
    pub fn same_presentation(&self, other: &SuperCategory<F>) -> bool {
        self.field == other.field
            && self.objects == other.objects
            && self.basis == other.basis
            && self.identities == other.identities
            && self.composition.len() == other.composition.len()
            && self
                .composition
                .iter()
                .all(|(k, v)| other.composition.get(k) == Some(v))
    }

    /// Tensor product category with Koszul-signed componentwise composition.
    pub fn tensor_product(
        a: &SuperCategory<F>,
        b: &SuperCategory<F>,
    ) -> Result<TensorProduct<F>, CategoryError> {
        if a.field != b.field {
            return Err(CategoryError::FieldMismatch(a.field, b.field));
        }
        let mut objects = Vec::new();
        let mut object_index = HashMap::new();
        for (i, x) in a.objects.iter().enumerate() {
            for (j, y) in b.objects.iter().enumerate() {
                object_index.insert((i, j), objects.len());
                objects.push(format!("({x},{y})"));
            }
        }
        let mut basis = Vec::new();
        let mut basis_index = HashMap::new();
        for (f, mf) in a.basis.iter().enumerate() {
            for (g, mg) in b.basis.iter().enumerate() {
                basis_index.insert((f, g), basis.len());
                basis.push(BasisMorphism {
                    id: format!("({},{})", mf.id, mg.id),
                    source: object_index[&(mf.source, mg.source)],
                    target: object_index[&(mf.target, mg.target)],
                    parity: mf.parity + mg.parity,
                });
            }
        }
        let identities: Vec<usize> = (0..a.objects.len())
            .flat_map(|i| {
                (0..b.objects.len())
                    .map(move |j| (i, j))
            })
            .map(|(i, j)| basis_index[&(a.identities[i], b.identities[j])])
            .collect();

        // (f1⊗g1)(f2⊗g2) = (-1)^{|g1||f2|} f1f2 ⊗ g1g2
        let mut composition = Vec::new();
        for (&(f1, g1), &k1) in basis_index.iter() {
            for (&(f2, g2), _) in basis_index.iter() {
                let (Some(ff), Some(gg)) = (a.compose(f1, f2), b.compose(g1, g2)) else {
                    continue;
                };
                let negate = b.basis[g1].parity.koszul_negates(a.basis[f2].parity);
                let mut terms = Vec::new();
                for (tf, cf) in ff.iter() {
                    for (tg, cg) in gg.iter() {
                        let c = (cf.clone() * cg.clone()).neg_if(negate);
                        terms.push((basis_index[&(*tf, *tg)], c));
                    }
                }
                composition.push(((k1, basis_index[&(f2, g2)]), terms));
            }
        }

        let cat = SuperCategory::from_parts(a.field, objects, basis, identities, composition)?;
        Ok(TensorProduct { cat, object_index, basis_index })
    }

    /// The corresponding superalgebra Λ: one object, hom = ⊕ hom(X,Y) with
    /// the matrix product (non-composable products vanish). When the category
    /// has several objects the unit 1 = Σ 1_X is introduced by the basis
    /// change that replaces the last identity; every other basis morphism
    /// keeps its name. Returns the algebra and each old basis element in the
    /// new coordinates.
    pub fn to_superalgebra(&self) -> (SuperCategory<F>, Vec<SparseVec<F>>) {
        if self.objects.len() == 1 {
            let mut relabeled = self.clone();
            relabeled.objects = vec!["*".to_string()];
            let embed = (0..self.basis.len()).map(SparseVec::unit).collect();
            return (relabeled, embed);
        }
        let basis: Vec<BasisMorphism> = self
            .basis
            .iter()
            .map(|m| BasisMorphism { id: m.id.clone(), source: 0, target: 0, parity: m.parity })
            .collect();
        let identity_vec =
            SparseVec::from_entries(self.identities.iter().map(|&e| (e, F::one())));
        let composition: HashMap<(usize, usize), SparseVec<F>> = (0..basis.len())
            .flat_map(|f| (0..basis.len()).map(move |g| (f, g)))
            .map(|(f, g)| {
                let v = self.compose(f, g).cloned().unwrap_or_default();
                ((f, g), v)
            })
            .collect();
        let raw = RawCategory {
            field: self.field,
            objects: vec!["*".to_string()],
            basis,
            identity_vectors: vec![identity_vec],
            identity_ids: vec!["1".to_string()],
            composition,
        };
        unitize(raw)
    }

    /// Remark-2.6(ii) construction: a category from a one-object algebra and
    /// a complete orthogonal set of even idempotents, hom(x, y) = x·A·y.
    pub fn from_algebra_with_idempotents(
        alg: &SuperCategory<F>,
        idempotents: &[SparseVec<F>],
    ) -> Result<SuperCategory<F>, CategoryError> {
        if alg.objects.len() != 1 {
            return Err(CategoryError::NotOneObject);
        }
        for (i, e) in idempotents.iter().enumerate() {
            check_even_idempotent(alg, e, &format!("e{i}"))?;
            for f in idempotents.iter().skip(i + 1) {
                if !alg.compose_vectors(e, f).is_zero() || !alg.compose_vectors(f, e).is_zero() {
                    return Err(CategoryError::NotOrthogonal);
                }
            }
        }
        let mut sum = SparseVec::new();
        for e in idempotents {
            sum.axpy(&F::one(), e);
        }
        let unit = SparseVec::unit(alg.identities[0]);
        if sum != unit {
            return Err(CategoryError::Incomplete);
        }
        let corners: Vec<(usize, SparseVec<F>, String)> = idempotents
            .iter()
            .enumerate()
            .map(|(i, e)| (0usize, e.clone(), format!("e{i}")))
            .collect();
        corner_category(alg, &corners)
    }
}

/// A tensor product together with the index maps from factor data to the
/// product's objects and basis.
pub struct TensorProduct<F: Scalar> {
    pub cat: SuperCategory<F>,
    pub object_index: HashMap<(usize, usize), usize>,
    pub basis_index: HashMap<(usize, usize), usize>,
}

pub(crate) fn check_even_idempotent<F: Scalar>(
    cat: &SuperCategory<F>,
    e: &SparseVec<F>,
    label: &str,
) -> Result<(), CategoryError> {
    for (k, _) in e.iter() {
        if cat.basis[*k].parity != Parity::Even {
            return Err(CategoryError::BadIdempotent(format!("{label} is not even")));
        }
    }
    let square = cat.compose_vectors(e, e);
    if &square != e {
        return Err(CategoryError::BadIdempotent(format!("{label}^2 != {label}")));
    }
    Ok(())
}

/// Raw presentation whose identities may be sums of basis elements.
pub(crate) struct RawCategory<F: Scalar> {
    pub field: FieldSpec,
    pub objects: Vec<String>,
    pub basis: Vec<BasisMorphism>,
    pub identity_vectors: Vec<SparseVec<F>>,
    pub identity_ids: Vec<String>,
    pub composition: HashMap<(usize, usize), SparseVec<F>>,
}

/// Basis change designating every identity as a basis element: per object
/// whose identity is not already a lone basis element, the unit replaces the
/// last basis element it involves. Returns the category and the expression
/// of each raw basis element in the new basis.
pub(crate) fn unitize<F: Scalar>(raw: RawCategory<F>) -> (SuperCategory<F>, Vec<SparseVec<F>>) {
    let n = raw.basis.len();
    // rewrite[k]: raw basis element k in new coordinates
    let mut rewrite: Vec<SparseVec<F>> = (0..n).map(SparseVec::unit).collect();
    let mut new_basis = raw.basis.clone();
    let mut identities = Vec::new();
    let mut taken: HashSet<String> = raw.basis.iter().map(|m| m.id.clone()).collect();

    for (x, idv) in raw.identity_vectors.iter().enumerate() {
        if idv.len() == 1 {
            let (k, c) = idv.leading().map(|(k, c)| (k, c.clone())).unwrap();
            if c.is_one() {
                identities.push(k);
                continue;
            }
        }
        let (star, c_star) = idv
            .iter()
            .last()
            .map(|(k, c)| (*k, c.clone()))
            .expect("identity vector nonzero");
        let mut unit_id = raw.identity_ids[x].clone();
        while !taken.insert(unit_id.clone()) {
            unit_id.push('\'');
        }
        new_basis[star] = BasisMorphism {
            id: unit_id,
            source: raw.basis[star].source,
            target: raw.basis[star].target,
            parity: Parity::Even,
        };
        // b_star = (u - sum of the other identity components) / c_star
        let c_inv = c_star.inv().expect("identity coefficient invertible");
        let mut expr = SparseVec::unit(star);
        for (k, c) in idv.iter() {
            if *k != star {
                expr.axpy(&(-c.clone()), &SparseVec::unit(*k));
            }
        }
        expr.scale(&c_inv);
        rewrite[star] = expr;
        identities.push(star);
    }

    let to_new = |v: &SparseVec<F>| -> SparseVec<F> {
        let mut out = SparseVec::new();
        for (k, c) in v.iter() {
            out.axpy(c, &rewrite[*k]);
        }
        out
    };

    let composition: Vec<((usize, usize), Vec<(usize, F)>)> = {
        let mut entries = Vec::new();
        // identity slots compose by the laws; the rest by rewriting the raw table
        for f in 0..n {
            for g in 0..n {
                let mf = &new_basis[f];
                let mg = &new_basis[g];
                if mf.target != mg.source {
                    continue;
                }
                let fi = identities.contains(&f) && mf.source == mf.target;
                let gi = identities.contains(&g) && mg.source == mg.target;
                let v = if fi {
                    SparseVec::unit(g)
                } else if gi {
                    SparseVec::unit(f)
                } else {
                    let raw_v = raw
                        .composition
                        .get(&(f, g))
                        .cloned()
                        .unwrap_or_default();
                    to_new(&raw_v)
                };
                entries.push(((f, g), v.into_entries()));
            }
        }
        entries
    };

    let cat = SuperCategory::from_parts(
        raw.field,
        raw.objects,
        new_basis,
        identities,
        composition,
    )
    .expect("unitized presentation is well-formed");
    (cat, rewrite)
}

/// Builds the category whose objects are `(carrier object, even idempotent)`
/// pairs and whose hom spaces are the corners `ε · hom(X, Y) · ε'`, with
/// bases computed by exact elimination (forced to contain the idempotent
/// itself on the diagonal).
pub(crate) fn corner_category<F: Scalar>(
    cat: &SuperCategory<F>,
    corners: &[(usize, SparseVec<F>, String)],
) -> Result<SuperCategory<F>, CategoryError> {
    let m = corners.len();
    // choose a homogeneous basis of each corner space
    let mut corner_bases: Vec<Vec<Vec<SparseVec<F>>>> = vec![vec![Vec::new(); m]; m];
    for (i, (x, e, _)) in corners.iter().enumerate() {
        for (j, (y, f, _)) in corners.iter().enumerate() {
            let mut ech = Echelon::new();
            let mut chosen: Vec<SparseVec<F>> = Vec::new();
            if i == j {
                // ε = ε·1·ε lies in the corner and is the identity there
                ech.push(e.clone());
                chosen.push(e.clone());
            }
            for parity in [Parity::Even, Parity::Odd] {
                for &b in cat.hom_basis(*x, *y) {
                    if cat.parity(b) != parity {
                        continue;
                    }
                    let v = cat.compose_vectors(e, &cat.compose_vectors(&SparseVec::unit(b), f));
                    if v.is_zero() {
                        continue;
                    }
                    if ech.push(v.clone()) {
                        chosen.push(v);
                    }
                }
            }
            corner_bases[i][j] = chosen;
        }
    }

    let mut objects = Vec::new();
    for (x, _, tag) in corners {
        objects.push(format!("({},{tag})", cat.object_name(*x)));
    }

    let mut basis = Vec::new();
    let mut offset: Vec<Vec<usize>> = vec![vec![0; m]; m];
    let mut carriers: Vec<SparseVec<F>> = Vec::new();
    for i in 0..m {
        for j in 0..m {
            offset[i][j] = basis.len();
            for (k, v) in corner_bases[i][j].iter().enumerate() {
                let parity = corner_parity(cat, v);
                basis.push(BasisMorphism {
                    id: format!("c{i}.{j}.{k}"),
                    source: i,
                    target: j,
                    parity,
                });
                carriers.push(v.clone());
            }
        }
    }
    let identities: Vec<usize> = (0..m).map(|i| offset[i][i]).collect();

    // per-target-corner solver to express products in the chosen bases
    let mut solvers: Vec<Vec<Option<crate::sparse::QuotientSolver<F>>>> =
        (0..m).map(|_| (0..m).map(|_| None).collect()).collect();
    for (i, row) in solvers.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            if !corner_bases[i][j].is_empty() {
                let zero = crate::sparse::SparseMatrix::zero(cat.basis_count(), 0);
                *slot = Some(crate::sparse::QuotientSolver::new(
                    &zero,
                    corner_bases[i][j].clone(),
                ));
            }
        }
    }

    let mut composition = Vec::new();
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                for (a, va) in corner_bases[i][j].iter().enumerate() {
                    for (b, vb) in corner_bases[j][k].iter().enumerate() {
                        let prod = cat.compose_vectors(va, vb);
                        let coords = match &solvers[i][k] {
                            Some(s) => s
                                .class_coords(&prod)
                                .expect("corner product stays in the corner"),
                            None => {
                                debug_assert!(prod.is_zero());
                                Vec::new()
                            }
                        };
                        let terms: Vec<(usize, F)> = coords
                            .into_iter()
                            .enumerate()
                            .filter(|(_, c)| !c.is_zero())
                            .map(|(t, c)| (offset[i][k] + t, c))
                            .collect();
                        composition.push(((offset[i][j] + a, offset[j][k] + b), terms));
                    }
                }
            }
        }
    }

    SuperCategory::from_parts(cat.field, objects, basis, identities, composition)
}

fn corner_parity<F: Scalar>(cat: &SuperCategory<F>, v: &SparseVec<F>) -> Parity {
    let mut parity = None;
    for (k, _) in v.iter() {
        let p = cat.parity(*k);
        match parity {
            None => parity = Some(p),
            Some(q) => debug_assert_eq!(p, q, "corner basis vector not homogeneous"),
        }
    }
    parity.unwrap_or(Parity::Even)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::{builtin, BUILTIN_NAMES};
    use crate::field::{FieldSpec, Rat};

    fn cat(name: &str) -> SuperCategory<Rat> {
        builtin(name, FieldSpec::rationals()).unwrap()
    }

    #[test]
    fn opposite_is_an_involution_on_the_nose() {
        for name in BUILTIN_NAMES {
            let c = cat(name);
            assert!(c.opposite().validate().is_valid(), "{name}: op invalid");
            assert!(c.opposite().opposite().same_presentation(&c), "{name}");
        }
    }

    #[test]
    fn opposite_carries_the_koszul_sign() {
        let c = cat("clifford1");
        let op = c.opposite();
        let x = op.morphism_index("x").unwrap();
        // x° x° = (-1)^{1·1} (x x)° = -1°
        let v = op.compose(x, x).unwrap();
        assert_eq!(v.entries(), &[(0usize, Rat::from_integer((-1).into()))]);
    }

    #[test]
    fn tensor_dimensions_multiply() {
        for (na, nb) in [("clifford1", "dual_odd"), ("arrow", "kz2"), ("mat11", "arrow_odd")] {
            let a = cat(na);
            let b = cat(nb);
            let t = SuperCategory::tensor_product(&a, &b).unwrap();
            assert!(t.cat.validate().is_valid(), "{na}x{nb} invalid");
            for (&(xa, xb), &src) in t.object_index.iter() {
                for (&(ya, yb), &tgt) in t.object_index.iter() {
                    let (e, o) = t.cat.hom_dims(src, tgt);
                    let da = {
                        let (e, o) = a.hom_dims(xa, ya);
                        e + o
                    };
                    let db = {
                        let (e, o) = b.hom_dims(xb, yb);
                        e + o
                    };
                    assert_eq!(e + o, da * db);
                }
            }
        }
    }

    #[test]
    fn point_is_a_tensor_unit() {
        let p = cat("point");
        for name in ["clifford1", "arrow_odd"] {
            let c = cat(name);
            let t = SuperCategory::tensor_product(&p, &c).unwrap();
            assert_eq!(t.cat.hom_profile(), c.hom_profile(), "{name}");
        }
    }

    #[test]
    fn dual_odd_tensor_square_has_hom_dimension_four() {
        let d = cat("dual_odd");
        let t = SuperCategory::tensor_product(&d, &d).unwrap();
        let (e, o) = t.cat.hom_dims(0, 0);
        assert_eq!(e + o, 4);
    }

    #[test]
    fn tensor_koszul_sign_on_odd_generators() {
        // (x⊗1)(1⊗x) = x⊗x but (1⊗x)(x⊗1) = -(x⊗x)
        let c = cat("clifford1");
        let t = SuperCategory::tensor_product(&c, &c).unwrap();
        let x = c.morphism_index("x").unwrap();
        let one = c.morphism_index("1").unwrap();
        let x1 = t.basis_index[&(x, one)];
        let one_x = t.basis_index[&(one, x)];
        let xx = t.basis_index[&(x, x)];
        let fwd = t.cat.compose(x1, one_x).unwrap();
        assert_eq!(fwd.entries(), &[(xx, Rat::from_integer(1.into()))]);
        let bwd = t.cat.compose(one_x, x1).unwrap();
        assert_eq!(bwd.entries(), &[(xx, Rat::from_integer((-1).into()))]);
    }

    #[test]
    fn tensor_requires_matching_fields() {
        let a = cat("point");
        let b: SuperCategory<Rat> =
            builtin("point", FieldSpec::rationals()).unwrap();
        assert!(SuperCategory::tensor_product(&a, &b).is_ok());
        // different characteristic is rejected at the type level for Fp vs
        // Rat; the runtime check guards two prime fields
        let f5: SuperCategory<crate::field::Fp> =
            builtin("point", FieldSpec::prime(5).unwrap()).unwrap();
        let f7: SuperCategory<crate::field::Fp> =
            builtin("point", FieldSpec::prime(7).unwrap()).unwrap();
        assert!(matches!(
            SuperCategory::tensor_product(&f5, &f7),
            Err(CategoryError::FieldMismatch(..))
        ));
    }

    #[test]
    fn superalgebra_of_arrow_matches_the_block_basis() {
        let c = cat("arrow");
        let (alg, embed) = c.to_superalgebra();
        assert!(alg.validate().is_valid());
        assert_eq!(alg.total_dim(), 3);
        let a = alg.morphism_index("a").unwrap();
        let ex = alg.morphism_index("1X").unwrap();
        // a·a = 0, e_X a = a, a e_X = 0 in the one-object algebra
        assert!(alg.compose(a, a).unwrap().is_zero());
        assert_eq!(alg.compose(ex, a).unwrap().entries(), &[(a, Rat::from_integer(1.into()))]);
        assert!(alg.compose(a, ex).unwrap().is_zero());
        // the dropped identity 1Y is the unit minus 1X
        let unit = alg.identity_of(0);
        let ey = &embed[c.identity_of(1)];
        let mut expected = SparseVec::unit(unit);
        expected.axpy(&Rat::from_integer((-1).into()), &SparseVec::unit(ex));
        assert_eq!(ey, &expected);
    }

    #[test]
    fn from_algebra_with_single_identity_returns_the_algebra() {
        let c = cat("clifford1");
        let idems = vec![SparseVec::unit(c.identity_of(0))];
        let back = SuperCategory::from_algebra_with_idempotents(&c, &idems).unwrap();
        assert_eq!(back.hom_profile(), c.hom_profile());
    }

    #[test]
    fn incomplete_idempotent_set_is_rejected() {
        let c = cat("mat11");
        let e00 = c.morphism_index("e00").unwrap();
        let err =
            SuperCategory::from_algebra_with_idempotents(&c, &[SparseVec::unit(e00)]);
        assert!(matches!(err, Err(CategoryError::Incomplete)));
    }

    #[test]
    fn constructed_counterexample_fails_validation() {
        // compose(x, x) declared with a parity-1 result for |x| = 1
        let field = FieldSpec::rationals();
        let basis = vec![
            BasisMorphism { id: "1".into(), source: 0, target: 0, parity: Parity::Even },
            BasisMorphism { id: "x".into(), source: 0, target: 0, parity: Parity::Odd },
        ];
        let cat = SuperCategory::<Rat>::from_parts(
            field,
            vec!["*".into()],
            basis,
            vec![0],
            vec![((1, 1), vec![(1, Rat::from_integer(1.into()))])],
        )
        .unwrap();
        let report = cat.validate();
        assert!(!report.is_valid());
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::ParityRule { .. })));
    }
}
