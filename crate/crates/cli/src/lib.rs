//! Command-line front end for `symprod`.
//!
//! Every subcommand produces one artifact (JSON, or CSV for tables) and a
//! short human-readable summary. [`run`] does the work; the binary only
//! routes the two outputs and maps errors to exit codes.

pub mod selftest;

use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::json;
use symprod::domains::PlanarDomain;
use symprod::invmetrics::{
    carath_lower, divergence_probe, exhaustion_value, lempert_upper_disc_search,
    lempert_upper_permutation, DiscSearchConfig, DistanceBound, Sequence, OMEGA_GRID,
};
use symprod::peaks::{symmetric_peak, verify_peak, Approach};
use symprod::symgeo::{arrangement, classify, separating_hyperplane, SymProduct};
use symprod::sympoly::{roots_of_point, symmetrize, ComplexPoint};
use symprod::tol;

#[derive(Debug, Parser)]
#[command(name = "symprod", version, about = "Computations on symmetric products of planar domains")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Roots of the polynomial with the given symmetric coordinates.
    Roots(Common),
    /// Symmetric coordinates of a root tuple given in --point.
    Symmetrize(Common),
    /// Membership of --point in S_n(D).
    Member(Common),
    /// Separating hyperplane through an exterior --point.
    Separate(Common),
    /// Hyperplane arrangement of a punctured plane with general-position report.
    Arrangement(Common),
    /// Kobayashi completeness / hyperbolicity verdict for S_n(D).
    Classify(Common),
    /// Certified bounds on invariant distances between the points of --pair.
    Distance(Common),
    /// Value of the plurisubharmonic exhaustion at --point.
    Exhaust(Common),
    /// Build and verify the composed peak function at the root pair in --point.
    PeakVerify(Common),
    /// Carathéodory lower bounds along a radial sequence (CSV).
    Diverge(Common),
    /// Run the acceptance suite; --out names the artifact directory.
    Selftest(Common),
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Planar domain as JSON, e.g. '{"kind":"unit_disc"}'.
    #[arg(long)]
    pub domain: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Point as a JSON list of [re,im] pairs.
    #[arg(long)]
    pub point: Option<String>,
    /// Two points as a JSON list of two point lists.
    #[arg(long)]
    pub pair: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub samples: Option<usize>,
    /// Objective evaluations for the disc search.
    #[arg(long)]
    pub budget: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Width of the boundary band in membership verdicts.
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Sequence length for `diverge`.
    #[arg(long = "K")]
    pub k: Option<usize>,
}

#[derive(Debug)]
pub enum CliError {
    /// Malformed input or violated precondition (exit 1).
    Validation(String),
    /// Solver or optimizer failure, or a failed self-test (exit 2).
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "validation error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<symprod::Error> for CliError {
    fn from(e: symprod::Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Validation(e.to_string())
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Output of one subcommand.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub body: String,
    pub summary: String,
}

impl Artifact {
    fn json<T: Serialize>(value: &T, summary: String) -> CliResult<Self> {
        let mut body = serde_json::to_string_pretty(value).map_err(|e| CliError::Numerical(e.to_string()))?;
        body.push('\n');
        Ok(Artifact { body, summary })
    }
}

fn parse<T: DeserializeOwned>(flag: &str, text: &str) -> CliResult<T> {
    serde_json::from_str(text).map_err(|e| CliError::Validation(format!("--{flag}: {e}")))
}

fn required<'a>(flag: &str, value: &'a Option<String>) -> CliResult<&'a str> {
    value
        .as_deref()
        .ok_or_else(|| CliError::Validation(format!("--{flag} is required")))
}

impl Common {
    fn domain(&self) -> CliResult<PlanarDomain> {
        match &self.domain {
            Some(text) => parse("domain", text),
            None => Ok(PlanarDomain::UnitDisc),
        }
    }

    fn point(&self) -> CliResult<ComplexPoint> {
        parse("point", required("point", &self.point)?)
    }

    fn pair(&self) -> CliResult<(ComplexPoint, ComplexPoint)> {
        let [z, w]: [ComplexPoint; 2] = parse("pair", required("pair", &self.pair)?)?;
        Ok((z, w))
    }

    /// `S_n(D)` with `n` from `--n`, else from `fallback`, else 2.
    fn product(&self, fallback: Option<usize>) -> CliResult<SymProduct> {
        let n = self.n.or(fallback).unwrap_or(2);
        if let (Some(a), Some(b)) = (self.n, fallback) {
            if a != b {
                return Err(CliError::Validation(format!("--n {a} does not match point dimension {b}")));
            }
        }
        let s = SymProduct::new(self.domain()?, n)?;
        Ok(match self.tolerance {
            Some(t) => s.with_delta(t)?,
            None => s,
        })
    }
}

fn fmt_c(z: Complex64) -> String {
    format!("{:.6}{:+.6}i", z.re, z.im)
}

/// Runs a subcommand other than `selftest`.
pub fn run(command: &Command) -> CliResult<Artifact> {
    match command {
        Command::Roots(a) => {
            let z = a.point()?;
            let roots = roots_of_point(&z)?;
            let summary = format!(
                "{} roots, collision gap {:e}: {}",
                roots.len(),
                roots.collision_gap(),
                roots.roots.iter().map(|r| fmt_c(*r)).collect::<Vec<_>>().join(", ")
            );
            Artifact::json(
                &json!({"point": z, "roots": roots.roots, "collision_gap": finite_or_null(roots.collision_gap())}),
                summary,
            )
        }
        Command::Symmetrize(a) => {
            let roots = a.point()?.into_coords();
            let z = symmetrize(&roots)?;
            let summary = format!(
                "sigma = ({})",
                z.coords().iter().map(|c| fmt_c(*c)).collect::<Vec<_>>().join(", ")
            );
            Artifact::json(&json!({"roots": roots, "point": z}), summary)
        }
        Command::Member(a) => {
            let z = a.point()?;
            let s = a.product(Some(z.dim()))?;
            let fiber = s.fiber(&z)?;
            let summary = format!("{:?} (margin {:e})", fiber.verdict.state, fiber.verdict.margin);
            Artifact::json(
                &json!({
                    "state": fiber.verdict.state,
                    "margin": fiber.verdict.margin,
                    "roots": fiber.roots.roots,
                    "root_verdicts": fiber.verdicts,
                }),
                summary,
            )
        }
        Command::Separate(a) => {
            let w = a.point()?;
            let s = a.product(Some(w.dim()))?;
            let h = separating_hyperplane(&s, &w)?;
            let summary = format!(
                "hyperplane through witness {} (residual {:e})",
                fmt_c(h.witness),
                h.eval(&w).norm()
            );
            Artifact::json(&h, summary)
        }
        Command::Arrangement(a) => {
            let s = a.product(None)?;
            let arr = arrangement(s.base.punctures(), s.n)?;
            let summary = format!(
                "{} hyperplanes, {} subsets checked, general position: {}",
                arr.hyperplanes.len(),
                arr.report.subsets_checked,
                arr.report.general_position
            );
            Artifact::json(&arr, summary)
        }
        Command::Classify(a) => {
            let s = a.product(None)?;
            let c = classify(&s);
            let summary = format!("{:?}: {}", c.verdict, c.reason);
            Artifact::json(&c, summary)
        }
        Command::Distance(a) => {
            let (z, w) = a.pair()?;
            let s = a.product(Some(z.dim()))?;
            let bound = distance(&s, &z, &w, a)?;
            let upper = bound.upper.map_or("inf".to_string(), |u| format!("{u:.12}"));
            let summary = format!("{:.12} <= c <= k <= l <= {upper}", bound.lower);
            Artifact::json(&bound, summary)
        }
        Command::Exhaust(a) => {
            let z = a.point()?;
            let s = a.product(Some(z.dim()))?;
            let v = exhaustion_value(&s, &z)?;
            Artifact::json(&json!({"point": z, "value": v}), format!("v = {v:.12}"))
        }
        Command::PeakVerify(a) => {
            let s = a.product(Some(2))?;
            let pair = match &a.point {
                Some(text) => parse::<ComplexPoint>("point", text)?.into_coords(),
                None => vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            };
            if pair.len() != 2 {
                return Err(CliError::Validation("--point must hold the two roots z1, z2".into()));
            }
            let candidate = symmetric_peak(&s.base, pair[0], pair[1])?;
            let report = verify_peak(&candidate, &s, a.samples.unwrap_or(10_000), &Approach::default(), a.seed)?;
            let summary = format!(
                "{:?}: value at target {}, max interior modulus {:.12}",
                report.verdict,
                fmt_c(report.target_value),
                report.max_interior_modulus
            );
            Artifact::json(&report, summary)
        }
        Command::Diverge(a) => {
            let s = a.product(None)?;
            let target = match &a.point {
                Some(text) => parse("point", text)?,
                None => ComplexPoint::new(vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)])?,
            };
            let base = ComplexPoint::new(vec![Complex64::new(0.0, 0.0); s.n])?;
            let report = divergence_probe(
                &s,
                &base,
                &Sequence::CoordinateRadial { target },
                a.k.unwrap_or(20),
                a.samples.unwrap_or(OMEGA_GRID),
            )?;
            let crossings = report
                .thresholds
                .iter()
                .zip(&report.first_crossing)
                .map(|(t, k)| format!("{t}: {}", k.map_or("none".to_string(), |k| k.to_string())))
                .collect::<Vec<_>>()
                .join(", ");
            Ok(Artifact {
                body: report.to_csv(),
                summary: format!("{} rows; first crossings {crossings}", report.rows.len()),
            })
        }
        Command::Selftest(_) => Err(CliError::Validation("selftest is run through selftest::run".into())),
    }
}

fn finite_or_null(x: f64) -> serde_json::Value {
    if x.is_finite() {
        json!(x)
    } else {
        serde_json::Value::Null
    }
}

/// Carathéodory lower bound combined with the best available upper bound
/// for the Lempert function.
fn distance(s: &SymProduct, z: &ComplexPoint, w: &ComplexPoint, a: &Common) -> CliResult<DistanceBound> {
    let mut bound = carath_lower(s, z, w, a.samples.unwrap_or(OMEGA_GRID))?;
    match lempert_upper_permutation(s, z, w) {
        Ok(perm) => bound = bound.combine(perm),
        Err(symprod::Error::Unsupported(_)) => {}
        Err(e) => return Err(e.into()),
    }
    if s.n <= tol::MAX_MATCH {
        let config = DiscSearchConfig {
            budget: a.budget.unwrap_or(DiscSearchConfig::default().budget),
            seed: a.seed,
            ..DiscSearchConfig::default()
        };
        bound = bound.combine(lempert_upper_disc_search(s, z, w, &config)?);
    }
    Ok(bound)
}
