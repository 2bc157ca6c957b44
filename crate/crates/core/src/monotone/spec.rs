use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{HVector, Point};
use crate::hconvex::FieldSpec;
use crate::monotone::{left_translate_operator, OperatorField, OperatorGraph};
use crate::scalar::Scalar;
use crate::tolerance::ToleranceConfig;

/// JSON grammar for operators:
/// `{"kind":"linear","Q":[[..],[..]]} | {"kind":"hgrad_of","field":{..}} |
/// {"kind":"graph","pairs":[[[x,y,t],[v1,v2]],..]} | {"kind":"translate","g0":[x,y,t],"inner":{..}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum OperatorSpec {
    Linear {
        #[serde(rename = "Q")]
        q: [[f64; 2]; 2],
    },
    HgradOf {
        field: FieldSpec,
    },
    Graph {
        pairs: Vec<([f64; 3], [f64; 2])>,
    },
    Translate {
        g0: [f64; 3],
        inner: Box<OperatorSpec>,
    },
}

/// A built operator: evaluable everywhere, or known only on a finite graph.
#[derive(Debug, Clone)]
pub enum Operator<S: Scalar> {
    Field(OperatorField<S>),
    Graph(OperatorGraph<S>),
}

fn point<S: Scalar>(p: &[f64; 3]) -> Result<Point<S>> {
    Point::try_new(S::lit(p[0]), S::lit(p[1]), S::lit(p[2]))
}

fn matrix<S: Scalar>(q: &[[f64; 2]; 2]) -> Result<[[S; 2]; 2]> {
    if q.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite {
            context: "matrix entry",
        });
    }
    Ok([[S::lit(q[0][0]), S::lit(q[0][1])], [S::lit(q[1][0]), S::lit(q[1][1])]])
}

impl OperatorSpec {
    pub fn build<S: Scalar>(&self, tol: &ToleranceConfig) -> Result<Operator<S>> {
        Ok(match self {
            OperatorSpec::Linear { q } => Operator::Field(OperatorField::linear(matrix(q)?)),
            OperatorSpec::HgradOf { field } => Operator::Field(OperatorField::hgrad_of(&field.build()?, tol)),
            OperatorSpec::Graph { pairs } => Operator::Graph(OperatorGraph::new(
                pairs
                    .iter()
                    .map(|(g, v)| Ok((point(g)?, HVector::try_new(S::lit(v[0]), S::lit(v[1]))?)))
                    .collect::<Result<Vec<_>>>()?,
            )?),
            OperatorSpec::Translate { g0, inner } => {
                let g0 = point(g0)?;
                match inner.build(tol)? {
                    Operator::Field(f) => Operator::Field(left_translate_operator(&f, &g0)),
                    Operator::Graph(g) => Operator::Graph(g.left_translate(&g0)),
                }
            }
        })
    }

    /// Builds and requires an evaluable field.
    pub fn build_field<S: Scalar>(&self, tol: &ToleranceConfig) -> Result<OperatorField<S>> {
        match self.build(tol)? {
            Operator::Field(f) => Ok(f),
            Operator::Graph(_) => Err(Error::InvalidArgument(
                "operator must be evaluable, not a finite graph".into(),
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_builds_each_kind() {
        let tol = ToleranceConfig::default();
        let lin: OperatorSpec = serde_json::from_str(r#"{"kind":"linear","Q":[[3,2],[-2,4]]}"#).unwrap();
        let t = lin.build_field::<f64>(&tol).unwrap();
        assert_eq!(
            t.evaluate_single(&Point::new(1.0, 0.0, 0.0)).unwrap(),
            HVector::new(3.0, -2.0)
        );

        let hg: OperatorSpec =
            serde_json::from_str(r#"{"kind":"hgrad_of","field":{"kind":"quadratic","A":[[3,0],[0,4]],"c":1}}"#)
                .unwrap();
        let t = hg.build_field::<f64>(&tol).unwrap();
        assert_eq!(
            t.evaluate_single(&Point::new(1.0, 0.0, 0.0)).unwrap(),
            HVector::new(3.0, -2.0)
        );

        let gr: OperatorSpec =
            serde_json::from_str(r#"{"kind":"graph","pairs":[[[0,0,0],[0,0]],[[1,0,0],[-1,0]]]}"#).unwrap();
        assert!(matches!(gr.build::<f64>(&tol).unwrap(), Operator::Graph(g) if g.len() == 2));

        let tr: OperatorSpec =
            serde_json::from_str(r#"{"kind":"translate","g0":[1,2,0],"inner":{"kind":"linear","Q":[[1,0],[0,1]]}}"#)
                .unwrap();
        let t = tr.build_field::<f64>(&tol).unwrap();
        assert_eq!(t.evaluate_single(&Point::identity()).unwrap(), HVector::new(1.0, 2.0));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(serde_json::from_str::<OperatorSpec>(r#"{"kind":"linear","Q":[[1,0],[0,1]],"x":1}"#).is_err());
        let empty: OperatorSpec = serde_json::from_str(r#"{"kind":"graph","pairs":[]}"#).unwrap();
        assert!(empty.build::<f64>(&ToleranceConfig::default()).is_err());
        assert!(empty.build_field::<f64>(&ToleranceConfig::default()).is_err());
    }
}
