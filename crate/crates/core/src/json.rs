//! Wire formats: algebras, series, distributions, Lie modules and word series.
//!
//! Rationals travel as `"p/q"` strings (bare JSON integers are also read).
//! Dense tensors may be given flat or nested; either way they are read in
//! row-major order.

use std::fmt;
use std::path::Path;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::de::{self, Deserializer, MapAccess, SeqAccess, Visitor};
use serde::Deserialize;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::algebra::{AlgebraError, BaseAlgebra};
use crate::fliess::{FliessError, Word, WordSeries};
use crate::hopf::{HopfError, LieModule, SparseVec};
use crate::prob::{OVDistribution, ProbError, TransformPair, TransformRole};
use crate::rational::{fmt_q, parse_q, Q};
use crate::series::{GroupElement, MultiSeries, SeriesError};

#[derive(Debug, Error)]
pub enum InputError {
    #[error("parse error at line {line}: {message}")]
    ParseError { line: usize, message: String },
    #[error("mean is not the unit of B")]
    MeanNotUnit,
    #[error("invalid algebra: {0}")]
    AlgebraInvalid(String),
    #[error("invalid Lie module: {0}")]
    LieModuleInvalid(String),
    #[error("invalid document: {0}")]
    Shape(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, InputError>;

impl From<serde_json::Error> for InputError {
    fn from(e: serde_json::Error) -> Self {
        let message = e.to_string();
        let message = match message.rfind(" at line ") {
            Some(cut) => message[..cut].to_string(),
            None => message,
        };
        InputError::ParseError {
            line: e.line(),
            message,
        }
    }
}

impl From<AlgebraError> for InputError {
    fn from(e: AlgebraError) -> Self {
        InputError::AlgebraInvalid(e.to_string())
    }
}

impl From<ProbError> for InputError {
    fn from(e: ProbError) -> Self {
        match e {
            ProbError::MeanNotUnit => InputError::MeanNotUnit,
            other => InputError::Shape(other.to_string()),
        }
    }
}

impl From<SeriesError> for InputError {
    fn from(e: SeriesError) -> Self {
        InputError::Shape(e.to_string())
    }
}

impl From<FliessError> for InputError {
    fn from(e: FliessError) -> Self {
        InputError::Shape(e.to_string())
    }
}

impl From<HopfError> for InputError {
    fn from(e: HopfError) -> Self {
        InputError::LieModuleInvalid(e.to_string())
    }
}

pub fn read_file(path: impl AsRef<Path>) -> Result<String> {
    let path = path.as_ref();
    std::fs::read_to_string(path).map_err(|source| InputError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn rational_error<E: de::Error>(
    s: &str,
) -> impl FnOnce(crate::rational::ParseRationalError) -> E + '_ {
    move |e| E::custom(format_args!("rational `{s}`: {e}"))
}

/// One rational read from `"p/q"` or a JSON integer.
struct Rational(Q);

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Rational;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational string \"p/q\" or an integer")
            }
            fn visit_str<E: de::Error>(self, s: &str) -> std::result::Result<Rational, E> {
                parse_q(s).map(Rational).map_err(rational_error(s))
            }
            fn visit_i64<E: de::Error>(self, n: i64) -> std::result::Result<Rational, E> {
                Ok(Rational(Q::from_integer(BigInt::from(n))))
            }
            fn visit_u64<E: de::Error>(self, n: u64) -> std::result::Result<Rational, E> {
                Ok(Rational(Q::from_integer(BigInt::from(n))))
            }
        }
        d.deserialize_any(V)
    }
}

/// A rational tensor, nested or flat, flattened row-major.
struct Tensor(Vec<Q>);

impl<'de> Deserialize<'de> for Tensor {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = Tensor;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational or a nested array of rationals")
            }
            fn visit_str<E: de::Error>(self, s: &str) -> std::result::Result<Tensor, E> {
                parse_q(s)
                    .map(|x| Tensor(vec![x]))
                    .map_err(rational_error(s))
            }
            fn visit_i64<E: de::Error>(self, n: i64) -> std::result::Result<Tensor, E> {
                Ok(Tensor(vec![Q::from_integer(BigInt::from(n))]))
            }
            fn visit_u64<E: de::Error>(self, n: u64) -> std::result::Result<Tensor, E> {
                Ok(Tensor(vec![Q::from_integer(BigInt::from(n))]))
            }
            fn visit_seq<A: SeqAccess<'de>>(
                self,
                mut seq: A,
            ) -> std::result::Result<Tensor, A::Error> {
                let mut out = Vec::new();
                while let Some(Tensor(part)) = seq.next_element()? {
                    out.extend(part);
                }
                Ok(Tensor(out))
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraTable {
    dim: usize,
    unit: Tensor,
    table: Tensor,
}

/// `"scalar"` or a structure-constant table.
enum AlgebraDoc {
    Scalar,
    Table(AlgebraTable),
}

impl<'de> Deserialize<'de> for AlgebraDoc {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = AlgebraDoc;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("\"scalar\" or {\"dim\", \"unit\", \"table\"}")
            }
            fn visit_str<E: de::Error>(self, s: &str) -> std::result::Result<AlgebraDoc, E> {
                match s {
                    "scalar" => Ok(AlgebraDoc::Scalar),
                    other => Err(E::custom(format_args!("unknown algebra name `{other}`"))),
                }
            }
            fn visit_map<A: MapAccess<'de>>(
                self,
                map: A,
            ) -> std::result::Result<AlgebraDoc, A::Error> {
                AlgebraTable::deserialize(de::value::MapAccessDeserializer::new(map))
                    .map(AlgebraDoc::Table)
            }
        }
        d.deserialize_any(V)
    }
}

impl AlgebraDoc {
    fn build(self) -> Result<Arc<BaseAlgebra>> {
        match self {
            AlgebraDoc::Scalar => Ok(Arc::new(BaseAlgebra::scalar())),
            AlgebraDoc::Table(t) => Ok(Arc::new(BaseAlgebra::from_flat(
                t.dim, t.table.0, t.unit.0,
            )?)),
        }
    }
}

fn strings(xs: &[Q]) -> Value {
    Value::Array(xs.iter().map(|x| Value::String(fmt_q(x))).collect())
}

pub fn algebra_to_json(alg: &BaseAlgebra) -> Value {
    if alg.is_scalar() && alg.unit_coeffs()[0] == crate::rational::one() {
        return json!("scalar");
    }
    let table: Vec<Value> = alg
        .table_nested()
        .iter()
        .map(|row| Value::Array(row.iter().map(|cell| strings(cell)).collect()))
        .collect();
    json!({ "dim": alg.dim(), "unit": strings(alg.unit_coeffs()), "table": table })
}

pub fn parse_algebra(text: &str) -> Result<Arc<BaseAlgebra>> {
    serde_json::from_str::<AlgebraDoc>(text)?.build()
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SeriesDoc {
    algebra: AlgebraDoc,
    order: Option<usize>,
    components: Vec<Tensor>,
}

fn series_from(
    alg: &Arc<BaseAlgebra>,
    order: Option<usize>,
    comps: Vec<Tensor>,
    what: &str,
) -> Result<MultiSeries> {
    let available = comps
        .len()
        .checked_sub(1)
        .ok_or_else(|| InputError::Shape(format!("{what}: no components")))?;
    let order = order.unwrap_or(available);
    if order > available {
        return Err(InputError::Shape(format!(
            "{what}: order {order} needs {} components, found {}",
            order + 1,
            comps.len()
        )));
    }
    let comps = comps.into_iter().take(order + 1).map(|t| t.0).collect();
    Ok(MultiSeries::from_components(alg, order, comps)?)
}

pub fn series_to_json(s: &MultiSeries) -> Value {
    json!({
        "algebra": algebra_to_json(s.algebra()),
        "order": s.order(),
        "components": s.components().iter().map(|c| strings(c)).collect::<Vec<_>>(),
    })
}

pub fn parse_series(text: &str) -> Result<MultiSeries> {
    let doc: SeriesDoc = serde_json::from_str(text)?;
    let alg = doc.algebra.build()?;
    series_from(&alg, doc.order, doc.components, "components")
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CumulantsDoc {
    main: Vec<Tensor>,
    conditional: Option<Vec<Tensor>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DistributionDoc {
    algebra: AlgebraDoc,
    order: Option<usize>,
    phi_moments: Option<Vec<Tensor>>,
    psi_moments: Option<Vec<Tensor>>,
    cumulants: Option<CumulantsDoc>,
}

fn group(s: MultiSeries) -> Result<GroupElement> {
    GroupElement::new(s).map_err(|e| match e {
        SeriesError::NotUnital => InputError::MeanNotUnit,
        other => other.into(),
    })
}

/// Distribution JSON: moments of `phi` (and optionally `psi`), or cumulants
/// `main` (and optionally `conditional`). `order` is the transform order;
/// moment lists then need `order + 2` entries and cumulant lists `order + 1`.
pub fn parse_distribution(text: &str) -> Result<OVDistribution> {
    let doc: DistributionDoc = serde_json::from_str(text)?;
    let alg = doc.algebra.build()?;
    match (doc.phi_moments, doc.psi_moments, doc.cumulants) {
        (Some(phi), psi, None) => {
            let order = doc.order.map(|n| n + 1);
            let phi = series_from(&alg, order, phi, "phi_moments")?;
            let psi = psi
                .map(|p| series_from(&alg, order, p, "psi_moments"))
                .transpose()?;
            Ok(OVDistribution::from_moments(phi, psi)?)
        }
        (None, None, Some(k)) => {
            let main = group(series_from(&alg, doc.order, k.main, "cumulants.main")?)?;
            let conditional = k
                .conditional
                .map(|c| series_from(&alg, doc.order, c, "cumulants.conditional").and_then(group))
                .transpose()?;
            if main.order() < 1 {
                return Err(ProbError::OrderTooLow(main.order()).into());
            }
            Ok(OVDistribution::from_cumulants(&main, conditional.as_ref())?)
        }
        (None, Some(_), None) => Err(InputError::Shape(
            "psi_moments given without phi_moments".into(),
        )),
        (None, None, None) => Err(InputError::Shape(
            "expected phi_moments or cumulants".into(),
        )),
        (_, _, Some(_)) => Err(InputError::Shape(
            "give moments or cumulants, not both".into(),
        )),
    }
}

pub fn read_distribution(path: impl AsRef<Path>) -> Result<OVDistribution> {
    parse_distribution(&read_file(path)?)
}

fn components(s: &MultiSeries) -> Value {
    Value::Array(s.components().iter().map(|c| strings(c)).collect())
}

/// Moment form of a distribution, readable by [`parse_distribution`].
pub fn distribution_moments_json(d: &OVDistribution) -> Value {
    let mut doc = Map::new();
    doc.insert("algebra".into(), algebra_to_json(d.algebra()));
    doc.insert("order".into(), json!(d.order()));
    doc.insert("phi_moments".into(), components(d.phi_moments()));
    if d.has_two_states() {
        doc.insert("psi_moments".into(), components(d.psi_moments()));
    }
    Value::Object(doc)
}

/// Cumulant form, readable by [`parse_distribution`].
pub fn distribution_cumulants_json(
    main: &GroupElement,
    conditional: Option<&GroupElement>,
) -> Value {
    let mut k = Map::new();
    k.insert("main".into(), components(main));
    if let Some(c) = conditional {
        k.insert("conditional".into(), components(c));
    }
    json!({ "algebra": algebra_to_json(main.algebra()), "order": main.order(), "cumulants": k })
}

pub fn role_name(role: TransformRole) -> &'static str {
    match role {
        TransformRole::Cumulants => "K",
        TransformRole::T => "T",
        TransformRole::H => "H",
    }
}

/// `{"transform", "algebra", "order", "main", "conditional"?}`.
pub fn transform_pair_json(pair: &TransformPair, with_conditional: bool) -> Value {
    let mut doc = Map::new();
    doc.insert("transform".into(), json!(role_name(pair.role)));
    doc.insert("algebra".into(), algebra_to_json(pair.main.algebra()));
    doc.insert("order".into(), json!(pair.order()));
    doc.insert("main".into(), components(&pair.main));
    if with_conditional {
        doc.insert("conditional".into(), components(&pair.conditional));
    }
    Value::Object(doc)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LieDoc {
    dim: usize,
    bracket: Tensor,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LieModuleDoc {
    g: LieDoc,
    a: LieDoc,
    action: Tensor,
}

fn sparse_table(
    flat: Vec<Q>,
    rows: usize,
    cols: usize,
    len: usize,
    what: &str,
) -> Result<Vec<Vec<SparseVec>>> {
    if flat.len() != rows * cols * len {
        return Err(InputError::LieModuleInvalid(format!(
            "{what} has {} constants, expected {rows} x {cols} x {len}",
            flat.len()
        )));
    }
    let cells: Vec<SparseVec> = flat
        .chunks(len.max(1))
        .map(|cell| {
            cell.iter()
                .enumerate()
                .filter(|(_, c)| !num_traits::Zero::is_zero(*c))
                .map(|(k, c)| (k, c.clone()))
                .collect()
        })
        .collect();
    Ok(cells.chunks(cols.max(1)).map(|r| r.to_vec()).collect())
}

/// Lie-module JSON: `{"g": {"dim", "bracket"}, "a": {"dim", "bracket"},
/// "action"}` with dense tables; `bracket[i][j]` is `[e_i, e_j]` and
/// `action[i][j]` is `e_i ◁ f_j`, both as coefficient vectors.
pub fn parse_lie_module(text: &str) -> Result<LieModule> {
    let doc: LieModuleDoc = serde_json::from_str(text)?;
    let (dg, da) = (doc.g.dim, doc.a.dim);
    let g = sparse_table(doc.g.bracket.0, dg, dg, dg, "g.bracket")?;
    let a = sparse_table(doc.a.bracket.0, da, da, da, "a.bracket")?;
    let action = sparse_table(doc.action.0, dg, da, dg, "action")?;
    Ok(LieModule::from_constants((dg, g), (da, a), action)?)
}

/// Terms of one component, or an array of them for a tuple.
enum TermsDoc {
    Single(Vec<(String, Q)>),
    Tuple(Vec<Vec<(String, Q)>>),
}

struct TermMap(Vec<(String, Q)>);

impl<'de> Deserialize<'de> for TermMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = TermMap;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a map from words to rationals")
            }
            fn visit_map<A: MapAccess<'de>>(
                self,
                mut map: A,
            ) -> std::result::Result<TermMap, A::Error> {
                let mut out = Vec::new();
                while let Some((w, Rational(c))) = map.next_entry::<String, Rational>()? {
                    out.push((w, c));
                }
                Ok(TermMap(out))
            }
        }
        d.deserialize_map(V)
    }
}

impl<'de> Deserialize<'de> for TermsDoc {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = TermsDoc;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a term map or an array of term maps")
            }
            fn visit_map<A: MapAccess<'de>>(
                self,
                map: A,
            ) -> std::result::Result<TermsDoc, A::Error> {
                TermMap::deserialize(de::value::MapAccessDeserializer::new(map))
                    .map(|t| TermsDoc::Single(t.0))
            }
            fn visit_seq<A: SeqAccess<'de>>(
                self,
                mut seq: A,
            ) -> std::result::Result<TermsDoc, A::Error> {
                let mut out = Vec::new();
                while let Some(TermMap(t)) = seq.next_element()? {
                    out.push(t);
                }
                Ok(TermsDoc::Tuple(out))
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WordSeriesDoc {
    alphabet: usize,
    max_len: usize,
    terms: TermsDoc,
}

pub fn parse_word_series(text: &str) -> Result<WordSeries> {
    let doc: WordSeriesDoc = serde_json::from_str(text)?;
    let comps = match doc.terms {
        TermsDoc::Single(t) => vec![t],
        TermsDoc::Tuple(ts) => ts,
    };
    let terms = comps
        .into_iter()
        .map(|c| {
            c.into_iter()
                .map(|(w, x)| Ok((Word::parse(&w)?, x)))
                .collect::<std::result::Result<Vec<_>, FliessError>>()
        })
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(WordSeries::new(doc.alphabet, doc.max_len, terms)?)
}

/// Word-series JSON; a one-tuple is written as a single term map and the
/// empty word as `"1"`.
pub fn word_series_to_json(s: &WordSeries) -> Value {
    let comp = |i| {
        Value::Object(
            s.component(i)
                .map(|(w, c)| (format!("{w:?}"), json!(fmt_q(c))))
                .collect(),
        )
    };
    let terms = match s.arity() {
        1 => comp(0),
        n => Value::Array((0..n).map(comp).collect()),
    };
    json!({ "alphabet": s.letters(), "max_len": s.max_len(), "terms": terms })
}
