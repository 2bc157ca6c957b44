//! Scenario files: parsing with JSON-pointer error locations and default materialization.

use std::fmt;
use std::path::PathBuf;

use heisconvex_core::hconvex::{FieldSpec, ScanConfig};
use heisconvex_core::monotone::OperatorSpec;
use heisconvex_core::sampling::Region;
use heisconvex_core::solvers::{polar_target_grid, GridSpec};
use heisconvex_core::ToleranceConfig;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    CheckHconvex,
    CheckMonotone,
    CheckCyclic,
    Rockafellar,
    Resolve,
    Sweep,
    Collisions,
    ReproduceExample1,
    ReproduceExample2,
    GroupSelftest,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::CheckHconvex => "check-hconvex",
            Command::CheckMonotone => "check-monotone",
            Command::CheckCyclic => "check-cyclic",
            Command::Rockafellar => "rockafellar",
            Command::Resolve => "resolve",
            Command::Sweep => "sweep",
            Command::Collisions => "collisions",
            Command::ReproduceExample1 => "reproduce-example1",
            Command::ReproduceExample2 => "reproduce-example2",
            Command::GroupSelftest => "group-selftest",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(&self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSpec {
    /// Report file; standard output when absent.
    pub path: Option<PathBuf>,
    pub format: Format,
}

/// The file as written, before command-specific parsing.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    command: Command,
    #[serde(default)]
    spec: Option<Value>,
    #[serde(default)]
    params: Option<Value>,
    #[serde(default)]
    tolerances: ToleranceConfig,
    #[serde(default)]
    output: OutputSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Spec {
    Field(FieldSpec),
    Operator(OperatorSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CyclicParams {
    pub sequences: usize,
    pub max_len: usize,
    pub region: Region,
}

impl Default for CyclicParams {
    fn default() -> Self {
        Self {
            sequences: 200,
            max_len: 6,
            region: Region::default(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RockafellarParams {
    /// Defaults to the first graph node.
    pub base: Option<[f64; 3]>,
    pub base_value: f64,
    /// Defaults to every graph node.
    pub targets: Option<Vec<[f64; 3]>>,
    /// Defaults to the node count.
    pub max_hops: Option<usize>,
    /// Require the target to lie on the base's horizontal plane.
    pub closed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ResolveParams {
    pub base: [f64; 3],
    pub lambda: f64,
    pub target: [f64; 2],
    pub threshold: f64,
}

impl Default for ResolveParams {
    fn default() -> Self {
        Self {
            base: [0.0; 3],
            lambda: 1.0,
            target: [0.0; 2],
            threshold: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepParams {
    pub bases: Vec<[f64; 3]>,
    pub lambdas: Vec<f64>,
    pub targets: Vec<[f64; 2]>,
    /// Largest accepted recomputed residual.
    pub threshold: f64,
}

impl Default for SweepParams {
    fn default() -> Self {
        Self {
            bases: vec![[0.0, 0.0, 0.0], [0.0, 5.0 / 3.0, 0.0], [1.0, -1.0, 2.0]],
            lambdas: vec![0.5, 1.0, 2.0],
            targets: polar_target_grid(3.0),
            threshold: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CollisionParams {
    pub plane_base: [f64; 3],
    pub lambdas: Vec<f64>,
    pub grid: GridSpec,
}

impl Default for CollisionParams {
    fn default() -> Self {
        Self {
            plane_base: [0.0, 5.0 / 3.0, 0.0],
            lambdas: vec![1.0],
            grid: GridSpec::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Example1Params {
    pub pairs: usize,
    pub gradient_points: usize,
    pub convexity_samples: usize,
    pub cyclic: CyclicParams,
}

impl Default for Example1Params {
    fn default() -> Self {
        Self {
            pairs: 10_000,
            gradient_points: 1_000,
            convexity_samples: 10_000,
            cyclic: CyclicParams::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Example2Params {
    pub lambdas: Vec<f64>,
    pub plane_base: [f64; 3],
    /// Height `t` of the family `(x, y, t)` paired with `e`.
    pub family_height: f64,
    pub grid: GridSpec,
    pub identity_samples: usize,
}

impl Default for Example2Params {
    fn default() -> Self {
        Self {
            lambdas: vec![0.5, 1.0, 2.0],
            plane_base: [0.0, 5.0 / 3.0, 0.0],
            family_height: 1.0,
            grid: GridSpec::default(),
            identity_samples: 1_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SelftestParams {
    pub samples: usize,
}

impl Default for SelftestParams {
    fn default() -> Self {
        Self { samples: 10_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Params {
    Scan(ScanConfig),
    Cyclic(CyclicParams),
    Rockafellar(RockafellarParams),
    Resolve(ResolveParams),
    Sweep(SweepParams),
    Collisions(CollisionParams),
    Example1(Example1Params),
    Example2(Example2Params),
    Selftest(SelftestParams),
}

/// A scenario with every default filled in; echoed into each report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scenario {
    pub command: Command,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spec: Option<Spec>,
    pub params: Params,
    pub tolerances: ToleranceConfig,
    pub output: OutputSpec,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// The scenario does not match the schema; `pointer` locates the offending value.
    Schema {
        pointer: String,
        message: String,
    },
    Usage(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        2
    }

    fn schema(pointer: impl Into<String>, message: impl fmt::Display) -> Self {
        CliError::Schema {
            pointer: pointer.into(),
            message: message.to_string(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Schema { pointer, message } => {
                let at = if pointer.is_empty() { "/" } else { pointer };
                write!(f, "schema error at {at}: {message}")
            }
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

fn escape(segment: &str) -> String {
    segment.replace('~', "~0").replace('/', "~1")
}

fn pointer(prefix: &str, path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = prefix.to_string();
    for seg in path.iter() {
        match seg {
            Segment::Seq { index } => out.push_str(&format!("/{index}")),
            Segment::Map { key } => out.push_str(&format!("/{}", escape(key))),
            Segment::Enum { variant } => out.push_str(&format!("/{}", escape(variant))),
            Segment::Unknown => out.push_str("/?"),
        }
    }
    out
}

fn typed<T: DeserializeOwned>(value: Value, prefix: &str) -> Result<T, CliError> {
    serde_path_to_error::deserialize(value).map_err(|e| CliError::schema(pointer(prefix, e.path()), e.inner()))
}

fn params<T: DeserializeOwned + Default>(value: Option<Value>) -> Result<T, CliError> {
    match value {
        None | Some(Value::Null) => Ok(T::default()),
        Some(v) => typed(v, "/params"),
    }
}

fn no_spec(spec: &Option<Value>, command: Command) -> Result<(), CliError> {
    match spec {
        None | Some(Value::Null) => Ok(()),
        Some(_) => Err(CliError::schema("/spec", format!("`{}` takes no spec", command.name()))),
    }
}

/// Splits `{"kind": .., rest}`. Specs are parsed variant by variant so that error
/// pointers reach inside them; a tagged-enum derive would only report `/spec`.
fn split_kind(v: Value, at: &str) -> Result<(String, Value), CliError> {
    let Value::Object(mut obj) = v else {
        return Err(CliError::schema(at, "expected an object with a `kind` key"));
    };
    match obj.remove("kind") {
        Some(Value::String(k)) => Ok((k, Value::Object(obj))),
        Some(_) => Err(CliError::schema(format!("{at}/kind"), "expected a string")),
        None => Err(CliError::schema(at, "missing key `kind`")),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NoFields {}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct QuadraticFields {
    #[serde(rename = "A")]
    a: [[f64; 2]; 2],
    #[serde(default)]
    c: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AffineFields {
    v: [f64; 2],
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SumFields {
    terms: Vec<Value>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LinearFields {
    #[serde(rename = "Q")]
    q: [[f64; 2]; 2],
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HgradFields {
    field: Value,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFields {
    pairs: Vec<([f64; 3], [f64; 2])>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TranslateFields {
    g0: [f64; 3],
    inner: Value,
}

fn unknown_kind(at: &str, kind: &str, expected: &str) -> CliError {
    CliError::schema(
        format!("{at}/kind"),
        format!("unknown kind `{kind}`, expected one of {expected}"),
    )
}

pub fn parse_field_spec(v: Value, at: &str) -> Result<FieldSpec, CliError> {
    let (kind, rest) = split_kind(v, at)?;
    Ok(match kind.as_str() {
        "gauge" => {
            typed::<NoFields>(rest, at)?;
            FieldSpec::Gauge {}
        }
        "quadratic" => {
            let f: QuadraticFields = typed(rest, at)?;
            FieldSpec::Quadratic { a: f.a, c: f.c }
        }
        "affine" => FieldSpec::Affine {
            v: typed::<AffineFields>(rest, at)?.v,
        },
        "sum" => {
            let f: SumFields = typed(rest, at)?;
            let terms = f
                .terms
                .into_iter()
                .enumerate()
                .map(|(i, t)| parse_field_spec(t, &format!("{at}/terms/{i}")))
                .collect::<Result<_, _>>()?;
            FieldSpec::Sum { terms }
        }
        other => return Err(unknown_kind(at, other, "gauge, quadratic, affine, sum")),
    })
}

pub fn parse_operator_spec(v: Value, at: &str) -> Result<OperatorSpec, CliError> {
    let (kind, rest) = split_kind(v, at)?;
    Ok(match kind.as_str() {
        "linear" => OperatorSpec::Linear {
            q: typed::<LinearFields>(rest, at)?.q,
        },
        "hgrad_of" => OperatorSpec::HgradOf {
            field: parse_field_spec(typed::<HgradFields>(rest, at)?.field, &format!("{at}/field"))?,
        },
        "graph" => OperatorSpec::Graph {
            pairs: typed::<GraphFields>(rest, at)?.pairs,
        },
        "translate" => {
            let f: TranslateFields = typed(rest, at)?;
            OperatorSpec::Translate {
                g0: f.g0,
                inner: Box::new(parse_operator_spec(f.inner, &format!("{at}/inner"))?),
            }
        }
        other => return Err(unknown_kind(at, other, "linear, hgrad_of, graph, translate")),
    })
}

fn field_spec(spec: Option<Value>, default: Option<FieldSpec>) -> Result<FieldSpec, CliError> {
    match (spec, default) {
        (None | Some(Value::Null), Some(d)) => Ok(d),
        (None | Some(Value::Null), None) => Err(CliError::schema("/spec", "missing field spec")),
        (Some(v), _) => parse_field_spec(v, "/spec"),
    }
}

fn operator_spec(spec: Option<Value>) -> Result<OperatorSpec, CliError> {
    match spec {
        None | Some(Value::Null) => Err(CliError::schema("/spec", "missing operator spec")),
        Some(v) => parse_operator_spec(v, "/spec"),
    }
}

impl Scenario {
    /// Parses scenario JSON and materializes all defaults.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let raw: RawScenario =
            serde_path_to_error::deserialize(de).map_err(|e| CliError::schema(pointer("", e.path()), e.inner()))?;
        raw.tolerances
            .validate()
            .map_err(|e| CliError::schema("/tolerances", e))?;
        let RawScenario {
            command,
            spec,
            params: p,
            tolerances,
            output,
        } = raw;
        let (spec, params) = match command {
            Command::CheckHconvex => (Some(Spec::Field(field_spec(spec, None)?)), Params::Scan(params(p)?)),
            Command::CheckMonotone => (Some(Spec::Operator(operator_spec(spec)?)), Params::Scan(params(p)?)),
            Command::CheckCyclic => (Some(Spec::Operator(operator_spec(spec)?)), Params::Cyclic(params(p)?)),
            Command::Rockafellar => (
                Some(Spec::Operator(operator_spec(spec)?)),
                Params::Rockafellar(params(p)?),
            ),
            Command::Resolve => (Some(Spec::Operator(operator_spec(spec)?)), Params::Resolve(params(p)?)),
            Command::Sweep => (Some(Spec::Operator(operator_spec(spec)?)), Params::Sweep(params(p)?)),
            Command::Collisions => (
                Some(Spec::Field(field_spec(spec, Some(FieldSpec::Gauge {}))?)),
                Params::Collisions(params(p)?),
            ),
            Command::ReproduceExample1 => {
                no_spec(&spec, command)?;
                (None, Params::Example1(params(p)?))
            }
            Command::ReproduceExample2 => {
                no_spec(&spec, command)?;
                (None, Params::Example2(params(p)?))
            }
            Command::GroupSelftest => {
                no_spec(&spec, command)?;
                (None, Params::Selftest(params(p)?))
            }
        };
        Ok(Scenario {
            command,
            spec,
            params,
            tolerances,
            output,
        })
    }

    /// A scenario for `command` with no spec and default parameters.
    pub fn builtin(command: Command) -> Result<Self, CliError> {
        Self::parse(&serde_json::json!({ "command": command }).to_string())
    }
}
