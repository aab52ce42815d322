use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use octrans::algebra::BaseAlgebra;
use octrans::json::{
    algebra_to_json, distribution_cumulants_json, distribution_moments_json, parse_algebra,
    parse_lie_module, read_distribution, read_file, transform_pair_json,
};
use octrans::ncpart::Independence;
use octrans::prob::{
    conditional_h, conditional_pair, conditional_t, multiplicative_convolve, subordination,
    transforms_of, OVDistribution, ProbabilityCase,
};
use octrans::series::GroupElement;
use octrans::suite::{run_suite_with, SuiteName, SuiteOptions};

use crate::render;

pub const MAX_ORDER_VAR: &str = "OCTRANS_MAX_ORDER";
const DEFAULT_MAX_ORDER: usize = 6;

#[derive(Parser, Debug)]
#[command(
    name = "octrans",
    version,
    about = "Exact operator-valued transforms and their verification suites"
)]
pub struct Cli {
    #[command(subcommand)]
    pub verb: Verb,

    /// Truncation order (capped by OCTRANS_MAX_ORDER, default 6).
    #[arg(long, global = true)]
    pub order: Option<usize>,

    /// Algebra JSON file; the base algebra for `verify probability`.
    #[arg(long, global = true)]
    pub algebra: Option<PathBuf>,

    /// Independence kind for `convolve`.
    #[arg(long, global = true, value_enum)]
    pub kind: Option<Kind>,

    /// Write the document here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Subcommand, Debug)]
pub enum Verb {
    /// Cumulants (and conditional cumulants) of a distribution.
    Cumulants { file: PathBuf },
    /// Moments of a distribution given by moments or cumulants.
    Moments { file: PathBuf },
    /// T-transform, with its conditional partner for two-state data.
    #[command(name = "t-transform")]
    TTransform { file: PathBuf },
    /// H-transform, with its conditional partner for two-state data.
    #[command(name = "h-transform")]
    HTransform { file: PathBuf },
    /// Transform of the product of two independent variables.
    Convolve { a: PathBuf, b: PathBuf },
    /// Subordination series of the c-free product of two variables.
    Subordination { a: PathBuf, b: PathBuf },
    /// Run a verification suite: all, hopf, probability, fliess, sts, classical, ybe or
    /// inverse-commutation (exploratory, expected to fail).
    Verify {
        suite: String,
        /// Restrict the Hopf checks to one end-operad instance.
        #[arg(long)]
        instance: Option<String>,
    },
    /// Validate an algebra or Lie-module JSON file.
    #[command(name = "validate-algebra")]
    ValidateAlgebra { file: Option<PathBuf> },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Free,
    #[value(alias = "conditionally-free")]
    Cfree,
    Monotone,
    #[value(alias = "conditionally-monotone")]
    Cmonotone,
}

impl Kind {
    fn independence(self) -> Independence {
        match self {
            Kind::Free => Independence::Free,
            Kind::Cfree => Independence::ConditionallyFree,
            Kind::Monotone => Independence::Monotone,
            Kind::Cmonotone => Independence::ConditionallyMonotone,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Kind::Free => "free",
            Kind::Cfree => "cfree",
            Kind::Monotone => "monotone",
            Kind::Cmonotone => "cmonotone",
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

pub enum Outcome {
    Success,
    VerificationFailed,
}

fn max_order() -> anyhow::Result<usize> {
    match std::env::var(MAX_ORDER_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .with_context(|| format!("{MAX_ORDER_VAR}=`{v}` is not a nonnegative integer")),
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_MAX_ORDER),
        Err(e) => bail!("{MAX_ORDER_VAR}: {e}"),
    }
}

/// Requested order, or `default`, clamped to the environment cap.
fn effective_order(cli: &Cli, default: usize) -> anyhow::Result<usize> {
    let cap = max_order()?;
    let order = cli.order.unwrap_or(default);
    if order > cap {
        eprintln!("note: order {order} capped at {cap} by {MAX_ORDER_VAR}");
    }
    Ok(order.min(cap))
}

fn load_algebra(path: &Path) -> anyhow::Result<Arc<BaseAlgebra>> {
    parse_algebra(&read_file(path)?).with_context(|| format!("in {}", path.display()))
}

fn load(cli: &Cli, path: &Path) -> anyhow::Result<OVDistribution> {
    let dist = read_distribution(path).with_context(|| format!("in {}", path.display()))?;
    if let Some(alg_path) = &cli.algebra {
        if **dist.algebra() != *load_algebra(alg_path)? {
            bail!(
                "{} is not over the algebra in {}",
                path.display(),
                alg_path.display()
            );
        }
    }
    let order = effective_order(cli, dist.order())?;
    if order > dist.order() {
        bail!(
            "{} has order {}, below the requested {order}",
            path.display(),
            dist.order()
        );
    }
    if order == 0 {
        bail!("order must be at least 1");
    }
    Ok(dist.truncate(order))
}

fn monotone_warning(kind: Kind) {
    if matches!(kind, Kind::Monotone | Kind::Cmonotone) {
        eprintln!(
            "warning: --kind {} takes the H-transforms of a then b and returns the transform of the product b·a, not a·b",
            kind.name()
        );
    }
}

fn comps(g: &GroupElement) -> Value {
    Value::Array(
        g.components()
            .iter()
            .map(|c| Value::Array(c.iter().map(|x| json!(x.to_string())).collect()))
            .collect(),
    )
}

fn emit(cli: &Cli, doc: &Value) -> anyhow::Result<()> {
    let text = match cli.format {
        Format::Json => serde_json::to_string_pretty(doc)? + "\n",
        Format::Text => render::text(doc),
    };
    match &cli.output {
        Some(path) => std::fs::write(path, text)
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

pub fn dispatch(cli: &Cli) -> anyhow::Result<Outcome> {
    if let Some(kind) = cli.kind {
        monotone_warning(kind);
    }
    let doc = match &cli.verb {
        Verb::Cumulants { file } => {
            let dist = load(cli, file)?;
            let pair = conditional_pair(&dist)?;
            distribution_cumulants_json(
                &pair.main,
                dist.has_two_states().then_some(&pair.conditional),
            )
        }
        Verb::Moments { file } => distribution_moments_json(&load(cli, file)?),
        Verb::TTransform { file } => {
            let dist = load(cli, file)?;
            transform_pair_json(
                &conditional_t(&conditional_pair(&dist)?)?,
                dist.has_two_states(),
            )
        }
        Verb::HTransform { file } => {
            let dist = load(cli, file)?;
            transform_pair_json(
                &conditional_h(&conditional_t(&conditional_pair(&dist)?)?)?,
                dist.has_two_states(),
            )
        }
        Verb::Convolve { a, b } => {
            let Some(kind) = cli.kind else {
                bail!("convolve requires --kind <free|cfree|monotone|cmonotone>\n\nUsage: octrans convolve --kind <KIND> <A> <B>");
            };
            let (da, db) = (load(cli, a)?, load(cli, b)?);
            if da.algebra() != db.algebra() {
                bail!(
                    "{} and {} live over different algebras",
                    a.display(),
                    b.display()
                );
            }
            let k = kind.independence();
            let product =
                multiplicative_convolve(k, &transforms_of(k, &da)?, &transforms_of(k, &db)?)?;
            let mut doc = transform_pair_json(&product, k.is_conditional());
            doc["kind"] = json!(kind.name());
            doc["product"] = json!(if matches!(kind, Kind::Monotone | Kind::Cmonotone) {
                "ba"
            } else {
                "ab"
            });
            doc
        }
        Verb::Subordination { a, b } => {
            let (da, db) = (load(cli, a)?, load(cli, b)?);
            if da.algebra() != db.algebra() {
                bail!(
                    "{} and {} live over different algebras",
                    a.display(),
                    b.display()
                );
            }
            let sub = subordination(&conditional_pair(&da)?, &conditional_pair(&db)?)?;
            json!({
                "algebra": algebra_to_json(da.algebra()),
                "order": sub.k_left.order(),
                "k_left": comps(&sub.k_left),
                "k_right": comps(&sub.k_right),
                "h_left": comps(&sub.h_left),
                "h_right": comps(&sub.h_right),
                "product_k": transform_pair_json(&sub.product_k, true),
                "product_h": transform_pair_json(&sub.product_h, true),
            })
        }
        Verb::Verify { suite, instance } => return verify(cli, suite, instance.clone()),
        Verb::ValidateAlgebra { file } => {
            let path = file
                .as_ref()
                .or(cli.algebra.as_ref())
                .context("validate-algebra needs a file")?;
            validate(path)?
        }
    };
    emit(cli, &doc)?;
    Ok(Outcome::Success)
}

fn validate(path: &Path) -> anyhow::Result<Value> {
    let text = read_file(path)?;
    let is_module = serde_json::from_str::<Value>(&text)
        .map(|v| v.get("g").is_some())
        .unwrap_or(false);
    let ctx = || format!("in {}", path.display());
    Ok(if is_module {
        let m = parse_lie_module(&text).with_context(ctx)?;
        json!({"kind": "lie-module", "status": "valid", "g_dim": m.g().dim(), "a_dim": m.a().dim()})
    } else {
        let alg = parse_algebra(&text).with_context(ctx)?;
        json!({"kind": "algebra", "status": "valid", "dim": alg.dim(), "commutative": alg.is_commutative()})
    })
}

fn verify(cli: &Cli, suite: &str, instance: Option<String>) -> anyhow::Result<Outcome> {
    let name: SuiteName = suite.parse()?;
    let mut options = SuiteOptions {
        instance,
        ..Default::default()
    };
    if let Some(path) = &cli.algebra {
        let alg = load_algebra(path)?;
        let default = if alg.is_scalar() { 4 } else { 3 };
        let label = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "custom".into());
        options.probability_cases = Some(vec![ProbabilityCase::new(
            label,
            alg,
            effective_order(cli, default)?,
        )]);
    } else if cli.order.is_some() {
        let order = effective_order(cli, 0)?;
        let mut cases = octrans::prob::default_cases();
        cases.iter_mut().for_each(|c| c.order = order);
        options.probability_cases = Some(cases);
    }
    if options
        .probability_cases
        .iter()
        .flatten()
        .any(|c| c.order == 0)
    {
        bail!("order must be at least 1");
    }
    let report = run_suite_with(name, &options)?;
    let doc = serde_json::to_value(&report)?;
    emit(cli, &doc)?;
    if report.passed() {
        return Ok(Outcome::Success);
    }
    eprintln!("verification failed:");
    for check in report.failures() {
        eprintln!("  {}: {}", check.property, check.witnesses.join("; "));
    }
    Ok(Outcome::VerificationFailed)
}
