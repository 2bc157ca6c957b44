use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::HVector;
use crate::hconvex::{build_affine_pairing, build_gauge, build_quadratic, QuadraticSpec, ScalarField};
use crate::scalar::Scalar;

/// JSON grammar for fields:
/// `{"kind":"gauge"} | {"kind":"quadratic","A":[[..],[..]],"c":..} | {"kind":"affine","v":[..]} | {"kind":"sum","terms":[..]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldSpec {
    Gauge {},
    Quadratic {
        #[serde(rename = "A")]
        a: [[f64; 2]; 2],
        #[serde(default)]
        c: f64,
    },
    Affine {
        v: [f64; 2],
    },
    Sum {
        terms: Vec<FieldSpec>,
    },
}

impl FieldSpec {
    pub fn build<S: Scalar>(&self) -> Result<ScalarField<S>> {
        Ok(match self {
            FieldSpec::Gauge {} => build_gauge(),
            FieldSpec::Quadratic { a, c } => {
                let a = [[S::lit(a[0][0]), S::lit(a[0][1])], [S::lit(a[1][0]), S::lit(a[1][1])]];
                build_quadratic(QuadraticSpec::new(a, S::lit(*c))?)
            }
            FieldSpec::Affine { v } => build_affine_pairing(HVector::try_new(S::lit(v[0]), S::lit(v[1]))?),
            FieldSpec::Sum { terms } => {
                if terms.is_empty() {
                    return Err(Error::InvalidArgument("sum needs at least one term".into()));
                }
                let built = terms.iter().map(|t| t.build()).collect::<Result<Vec<_>>>()?;
                ScalarField::sum(&built)
            }
        })
    }
}
