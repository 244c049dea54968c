//! On-disk category description: structured TOML with exact fraction
//! coefficients, plus the idempotent-list format for `idem`.

use std::collections::BTreeMap;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use superhh::category::{BasisMorphism, Parity, SuperCategory};
use superhh::field::{FieldKind, FieldSpec, Scalar};
use superhh::sparse::SparseVec;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSection {
    pub kind: String,
    #[serde(default)]
    pub characteristic: u64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismSection {
    pub id: String,
    pub source: String,
    pub target: String,
    pub parity: u8,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompositionSection {
    pub first: String,
    pub then: String,
    pub terms: Vec<(String, String)>,
}

/// The category file: field, objects, hom bases with parities, identity
/// designations, and the composition table with exact coefficients.
/// Compositions implied by the identity laws may be omitted.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryFile {
    pub field: FieldSection,
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismSection>,
    pub identities: BTreeMap<String, String>,
    #[serde(default)]
    pub compositions: Vec<CompositionSection>,
}

pub fn parse_field(section: &FieldSection) -> Result<FieldSpec> {
    match section.kind.as_str() {
        "rationals" => Ok(FieldSpec::rationals()),
        "prime" => FieldSpec::prime(section.characteristic)
            .map_err(|e| anyhow!("bad field spec: {e}")),
        other => bail!("unknown field kind `{other}` (expected `rationals` or `prime`)"),
    }
}

/// Parses an exact coefficient string: "n" or "n/d" with integer n, d.
pub fn parse_coefficient<F: Scalar>(spec: &FieldSpec, s: &str) -> Result<F> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let num = BigInt::from_str(num).with_context(|| format!("bad numerator in `{s}`"))?;
    let den = BigInt::from_str(den).with_context(|| format!("bad denominator in `{s}`"))?;
    F::from_ratio(spec, &num, &den).map_err(|e| anyhow!("coefficient `{s}`: {e}"))
}

impl CategoryFile {
    pub fn from_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| anyhow!("category file parse error: {e}"))
    }

    /// Builds and validates the category over the given scalar type (the
    /// caller dispatches on the field section first).
    pub fn to_category<F: Scalar>(&self) -> Result<SuperCategory<F>> {
        let cat = self.to_category_unchecked::<F>()?;
        let validation = cat.validate();
        if !validation.is_valid() {
            bail!("category is not valid:\n{validation}");
        }
        Ok(cat)
    }

    /// Builds the category without running the semantic validation (used by
    /// the `validate` command, which reports violations instead of failing).
    pub fn to_category_unchecked<F: Scalar>(&self) -> Result<SuperCategory<F>> {
        let spec = parse_field(&self.field)?;
        let object_index: BTreeMap<&str, usize> = self
            .objects
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect();
        let mut basis = Vec::new();
        let mut morphism_index: BTreeMap<&str, usize> = BTreeMap::new();
        for (k, m) in self.morphisms.iter().enumerate() {
            let source = *object_index
                .get(m.source.as_str())
                .ok_or_else(|| anyhow!("morphism `{}`: unknown source `{}`", m.id, m.source))?;
            let target = *object_index
                .get(m.target.as_str())
                .ok_or_else(|| anyhow!("morphism `{}`: unknown target `{}`", m.id, m.target))?;
            let parity = Parity::from_u8(m.parity)
                .ok_or_else(|| anyhow!("morphism `{}`: parity must be 0 or 1", m.id))?;
            basis.push(BasisMorphism { id: m.id.clone(), source, target, parity });
            morphism_index.insert(m.id.as_str(), k);
        }
        let mut identities = Vec::new();
        for name in &self.objects {
            let id = self
                .identities
                .get(name)
                .ok_or_else(|| anyhow!("object `{name}` has no identity designation"))?;
            let k = *morphism_index
                .get(id.as_str())
                .ok_or_else(|| anyhow!("identity of `{name}`: unknown morphism `{id}`"))?;
            identities.push(k);
        }
        for designated in self.identities.keys() {
            if !object_index.contains_key(designated.as_str()) {
                bail!("identity designation for unknown object `{designated}`");
            }
        }
        let mut composition = Vec::new();
        for c in &self.compositions {
            let f = *morphism_index
                .get(c.first.as_str())
                .ok_or_else(|| anyhow!("composition: unknown morphism `{}`", c.first))?;
            let g = *morphism_index
                .get(c.then.as_str())
                .ok_or_else(|| anyhow!("composition: unknown morphism `{}`", c.then))?;
            let mut terms = Vec::new();
            for (id, coeff) in &c.terms {
                let t = *morphism_index
                    .get(id.as_str())
                    .ok_or_else(|| anyhow!("composition ({}, {}): unknown term `{id}`", c.first, c.then))?;
                terms.push((t, parse_coefficient::<F>(&spec, coeff)?));
            }
            composition.push(((f, g), terms));
        }
        SuperCategory::from_parts(spec, self.objects.clone(), basis, identities, composition)
            .map_err(|e| anyhow!("category structure error: {e}"))
    }

    /// Serializes a category, omitting the identity-implied compositions.
    pub fn from_category<F: Scalar>(cat: &SuperCategory<F>) -> Self {
        let field = match cat.field().kind() {
            FieldKind::Rationals => {
                FieldSection { kind: "rationals".into(), characteristic: 0 }
            }
            FieldKind::PrimeField => FieldSection {
                kind: "prime".into(),
                characteristic: cat.field().characteristic(),
            },
        };
        let objects: Vec<String> = cat.object_names().to_vec();
        let morphisms: Vec<MorphismSection> = cat
            .morphisms()
            .iter()
            .map(|m| MorphismSection {
                id: m.id.clone(),
                source: objects[m.source].clone(),
                target: objects[m.target].clone(),
                parity: m.parity.as_u8(),
            })
            .collect();
        let identities: BTreeMap<String, String> = (0..cat.object_count())
            .map(|x| {
                (
                    objects[x].clone(),
                    cat.morphism(cat.identity_of(x)).id.clone(),
                )
            })
            .collect();
        let mut compositions = Vec::new();
        for f in 0..cat.basis_count() {
            for g in 0..cat.basis_count() {
                if cat.is_identity(f) || cat.is_identity(g) {
                    continue; // implied by the identity laws
                }
                let Some(v) = cat.compose(f, g) else { continue };
                compositions.push(CompositionSection {
                    first: cat.morphism(f).id.clone(),
                    then: cat.morphism(g).id.clone(),
                    terms: v
                        .iter()
                        .map(|(t, c)| (cat.morphism(*t).id.clone(), c.ratio_string()))
                        .collect(),
                });
            }
        }
        CategoryFile {
            field,
            objects,
            morphisms,
            identities,
            compositions,
        }
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self).context("category serialization failed")
    }
}

/// Idempotent list for `idem`: each entry names the carrier object and the
/// coefficients of an even idempotent endomorphism.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdempotentsFile {
    pub idempotents: Vec<IdempotentSection>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdempotentSection {
    pub object: String,
    pub terms: Vec<(String, String)>,
}

impl IdempotentsFile {
    pub fn from_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| anyhow!("idempotents file parse error: {e}"))
    }

    pub fn resolve<F: Scalar>(
        &self,
        cat: &SuperCategory<F>,
    ) -> Result<Vec<(usize, SparseVec<F>)>> {
        let mut out = Vec::new();
        for idem in &self.idempotents {
            let x = cat
                .object_index(&idem.object)
                .ok_or_else(|| anyhow!("idempotent on unknown object `{}`", idem.object))?;
            let mut terms = Vec::new();
            for (id, coeff) in &idem.terms {
                let k = cat
                    .morphism_index(id)
                    .ok_or_else(|| anyhow!("idempotent term: unknown morphism `{id}`"))?;
                terms.push((k, parse_coefficient::<F>(cat.field(), coeff)?));
            }
            out.push((x, SparseVec::from_entries(terms)));
        }
        Ok(out)
    }
}
