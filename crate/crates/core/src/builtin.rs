//! The builtin test catalog: small superadditive categories exercised by
//! every invariance and identity suite.

use thiserror::Error;

use crate::category::{BasisMorphism, Parity, SuperCategory};
use crate::field::{FieldSpec, Scalar};

pub const BUILTIN_NAMES: &[&str] = &[
    "point",
    "dual_even",
    "dual_odd",
    "clifford1",
    "kz2",
    "arrow",
    "arrow_odd",
    "mat11",
];

#[derive(Debug, Error)]
pub enum BuiltinError {
    #[error("unknown builtin `{0}` (try `catalog`)")]
    Unknown(String),
}

/// One-object algebra helper: basis ids with parities, unit index, and the
/// multiplication table as integer structure constants.
fn one_object<F: Scalar>(
    field: FieldSpec,
    ids: &[(&str, Parity)],
    unit: usize,
    table: impl Fn(usize, usize) -> Vec<(usize, i64)>,
) -> SuperCategory<F> {
    let basis: Vec<BasisMorphism> = ids
        .iter()
        .map(|(id, parity)| BasisMorphism {
            id: (*id).to_string(),
            source: 0,
            target: 0,
            parity: *parity,
        })
        .collect();
    let mut composition = Vec::new();
    for f in 0..ids.len() {
        for g in 0..ids.len() {
            let terms: Vec<(usize, F)> = table(f, g)
                .into_iter()
                .map(|(k, c)| (k, F::from_int(&field, c)))
                .collect();
            composition.push(((f, g), terms));
        }
    }
    SuperCategory::from_parts(field, vec!["*".to_string()], basis, vec![unit], composition)
        .expect("builtin presentation is well-formed")
}

/// K[e]/(e^2 = c) with the generator in the given parity.
fn quadratic<F: Scalar>(field: FieldSpec, gen: &str, parity: Parity, square: i64) -> SuperCategory<F> {
    one_object(
        field,
        &[("1", Parity::Even), (gen, parity)],
        0,
        move |f, g| match (f, g) {
            (0, k) => vec![(k, 1)],
            (k, 0) => vec![(k, 1)],
            (1, 1) => {
                if square == 0 {
                    vec![]
                } else {
                    vec![(0, square)]
                }
            }
            _ => unreachable!(),
        },
    )
}

fn arrow<F: Scalar>(field: FieldSpec, arrow_parity: Parity) -> SuperCategory<F> {
    let basis = vec![
        BasisMorphism { id: "1X".into(), source: 0, target: 0, parity: Parity::Even },
        BasisMorphism { id: "a".into(), source: 0, target: 1, parity: arrow_parity },
        BasisMorphism { id: "1Y".into(), source: 1, target: 1, parity: Parity::Even },
    ];
    // only identity compositions exist; from_parts fills them in
    SuperCategory::from_parts(
        field,
        vec!["X".into(), "Y".into()],
        basis,
        vec![0, 2],
        Vec::new(),
    )
    .expect("arrow presentation is well-formed")
}

/// The 2x2 matrix superalgebra M(1|1) in the basis (e00, e01, e10, u) where
/// u is the unit and e11 = u - e00; parities (0,1,1,0).
fn mat11<F: Scalar>(field: FieldSpec) -> SuperCategory<F> {
    one_object(
        field,
        &[
            ("e00", Parity::Even),
            ("e01", Parity::Odd),
            ("e10", Parity::Odd),
            ("u", Parity::Even),
        ],
        3,
        |f, g| match (f, g) {
            (3, k) | (k, 3) => vec![(k, 1)],
            (0, 0) => vec![(0, 1)],
            (0, 1) => vec![(1, 1)],   // e00 e01 = e01
            (0, 2) => vec![],         // e00 e10 = 0
            (1, 0) => vec![],         // e01 e00 = 0
            (1, 1) => vec![],
            (1, 2) => vec![(0, 1)],   // e01 e10 = e00
            (2, 0) => vec![(2, 1)],   // e10 e00 = e10
            (2, 1) => vec![(3, 1), (0, -1)], // e10 e01 = e11 = u - e00
            (2, 2) => vec![],
            _ => unreachable!(),
        },
    )
}

/// The named builtin over the given field.
pub fn builtin<F: Scalar>(name: &str, field: FieldSpec) -> Result<SuperCategory<F>, BuiltinError> {
    let cat = match name {
        "point" => one_object(field, &[("1", Parity::Even)], 0, |_, _| vec![(0, 1)]),
        "dual_even" => quadratic(field, "e", Parity::Even, 0),
        "dual_odd" => quadratic(field, "e", Parity::Odd, 0),
        "clifford1" => quadratic(field, "x", Parity::Odd, 1),
        "kz2" => quadratic(field, "g", Parity::Even, 1),
        "arrow" => arrow(field, Parity::Even),
        "arrow_odd" => arrow(field, Parity::Odd),
        "mat11" => mat11(field),
        _ => return Err(BuiltinError::Unknown(name.to_string())),
    };
    Ok(cat)
}
