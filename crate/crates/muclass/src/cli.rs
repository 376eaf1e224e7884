//! Command-line surface: `mu`, `independence`, `crosscheck`, `scan`.
//!
//! Every command is deterministic given its flags (seeds included):
//! rerunning writes byte-identical output. Symbolic values are serialized as
//! exact "p/q" strings; Monte Carlo values as decimal floats with stderr
//! fields. Exit codes: 0 success, 1 internal invariant failure, 2
//! usage/config error.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use num::{BigRational, Zero};
use serde::Serialize;

use crate::analysis::{
    basic_invariants, decompose_in_generators, genericity_scan, independence_certificate,
    AnalysisError, Decomposition,
};
use crate::haarmc::{crosscheck_ratio, CrosscheckReport, HaarError, KStatus};
use crate::muclasses::{make_orbit, mu_class, MuError, OrbitSpec};
use crate::polyring::RatPoly;
use crate::rootdata::{build_root_datum, kset, Family, RootDataError, RootDatum};

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or inputs; exit code 2 with a diagnostic naming the field.
    Config(String),
    /// A violated internal invariant; exit code 1.
    Internal(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "{msg}"),
            CliError::Internal(msg) => write!(f, "internal error: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Internal(_) => 1,
        }
    }
}

impl From<RootDataError> for CliError {
    fn from(e: RootDataError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<MuError> for CliError {
    fn from(e: MuError) -> Self {
        match e {
            MuError::Internal(msg) => CliError::Internal(msg),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::Internal(msg) => CliError::Internal(msg),
            AnalysisError::Mu(m) => m.into(),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<HaarError> for CliError {
    fn from(e: HaarError) -> Self {
        match e {
            HaarError::NumericResidue { .. } => CliError::Internal(e.to_string()),
            HaarError::Mu(m) => m.into(),
            other => CliError::Config(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "muclass",
    version,
    about = "Characteristic classes of coadjoint orbits: exact Weyl-invariant \
             polynomials, independence certificates, and Haar Monte Carlo cross-checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Cap on worker threads (default: MUCLASS_THREADS or all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Write the document to this path instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OrbitArgs {
    /// Root-system family: A, B, C or D.
    #[arg(long)]
    pub family: String,
    /// Rank (1..=7; D needs rank >= 2).
    #[arg(long)]
    pub rank: usize,
    /// Coadjoint point as comma-separated rationals, e.g. "1,1,-1,-1" or "1/2,-1/2".
    #[arg(long)]
    pub xi: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute classes μ_k with their decompositions into basic invariants.
    Mu {
        #[command(flatten)]
        orbit: OrbitArgs,
        /// Comma-separated degrees, or "K" for the basic-invariant degrees.
        #[arg(long, default_value = "K")]
        k: String,
    },
    /// Jacobian-criterion independence certificate for {μ_k}.
    Independence {
        #[command(flatten)]
        orbit: OrbitArgs,
        #[arg(long, default_value = "K")]
        k: String,
        /// Random witness points to try before reporting dependence.
        #[arg(long, default_value_t = 25)]
        trials: usize,
        #[arg(long, default_value_t = 17)]
        seed: u64,
    },
    /// Cross-validate the symbolic classes against Haar Monte Carlo.
    Crosscheck {
        #[command(flatten)]
        orbit: OrbitArgs,
        #[arg(long, default_value = "K")]
        k: String,
        /// Test directions, semicolon-separated vectors, e.g. "1,-1;2,-2".
        /// Defaults to three deterministic directions.
        #[arg(long)]
        x: Option<String>,
        /// Haar samples per test direction (minimum 1000).
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 17)]
        seed: u64,
    },
    /// Scan μ-vanishing and Jacobian rank along a line of coadjoint points.
    Scan {
        /// Root-system family: A, B, C or D.
        #[arg(long)]
        family: String,
        #[arg(long)]
        rank: usize,
        /// Line spec "start:direction:steps"; row t uses xi = start + t*direction
        /// for t = 0..steps-1.
        #[arg(long)]
        line: String,
        #[arg(long, default_value = "K")]
        k: String,
        #[arg(long, default_value_t = 17)]
        seed: u64,
    },
}

fn parse_family(s: &str) -> Result<Family, CliError> {
    Family::parse(s).ok_or_else(|| CliError::Config(format!("invalid family: {s:?} (want A|B|C|D)")))
}

fn parse_rational(field: &str, s: &str) -> Result<BigRational, CliError> {
    BigRational::from_str(s.trim())
        .map_err(|e| CliError::Config(format!("invalid {field}: {s:?} ({e})")))
}

fn parse_vector(field: &str, s: &str) -> Result<Vec<BigRational>, CliError> {
    if s.trim().is_empty() {
        return Err(CliError::Config(format!("invalid {field}: empty vector")));
    }
    s.split(',').map(|part| parse_rational(field, part)).collect()
}

fn parse_k_list(s: &str, datum: &RootDatum) -> Result<Vec<usize>, CliError> {
    let trimmed = s.trim();
    let mut ks: Vec<usize> = if trimmed.eq_ignore_ascii_case("k") {
        kset(datum)
    } else {
        trimmed
            .split(',')
            .map(|part| {
                part.trim()
                    .parse::<usize>()
                    .map_err(|_| CliError::Config(format!("invalid k: {part:?}")))
            })
            .collect::<Result<_, _>>()?
    };
    ks.sort_unstable();
    ks.dedup();
    if ks.is_empty() {
        return Err(CliError::Config("invalid k: empty list".into()));
    }
    if ks[0] < 1 {
        return Err(CliError::Config("invalid k: degrees must be >= 1".into()));
    }
    Ok(ks)
}

fn build_datum(family: &str, rank: usize) -> Result<RootDatum, CliError> {
    let family = parse_family(family)?;
    Ok(build_root_datum(family, rank)?)
}

fn build_orbit(args: &OrbitArgs) -> Result<(RootDatum, OrbitSpec), CliError> {
    let datum = build_datum(&args.family, args.rank)?;
    let xi = parse_vector("xi", &args.xi)?;
    let spec = make_orbit(&datum, &xi)?;
    Ok((datum, spec))
}

/// Default test directions for the cross-check: squares of shifted integers,
/// centered for family A. Deterministic and generic enough in practice.
fn default_directions(datum: &RootDatum) -> Vec<Vec<BigRational>> {
    let d = datum.ambient_dim;
    (0..3u64)
        .map(|j| {
            let raw: Vec<BigRational> = (0..d as u64)
                .map(|i| BigRational::from_integer((((i + 1) + j * d as u64).pow(2)).into()))
                .collect();
            if datum.family == Family::A {
                let mean: BigRational =
                    raw.iter().sum::<BigRational>() / BigRational::from_integer((d as i64).into());
                raw.iter().map(|c| c - &mean).collect()
            } else {
                raw
            }
        })
        .collect()
}

fn rational_strings(v: &[BigRational]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

// ---- JSON documents ----

#[derive(Serialize)]
struct TermDoc {
    exp: Vec<u32>,
    coeff: String,
}

#[derive(Serialize)]
struct DecompositionTermDoc {
    generators: Vec<String>,
    coeff: String,
}

#[derive(Serialize)]
struct GeneratorComponentDoc {
    generator: String,
    coeff: String,
}

#[derive(Serialize)]
struct DecompositionDoc {
    terms: Vec<DecompositionTermDoc>,
    generator_component: Vec<GeneratorComponentDoc>,
}

#[derive(Serialize)]
struct StabilizerDoc {
    roots: Vec<Vec<i64>>,
    weyl_order: u64,
}

#[derive(Serialize)]
struct ClassDoc {
    k: usize,
    is_zero: bool,
    poly: Vec<TermDoc>,
    decomposition: DecompositionDoc,
}

#[derive(Serialize)]
struct MuDoc {
    family: String,
    rank: usize,
    group: String,
    xi: Vec<String>,
    n: usize,
    stabilizer: StabilizerDoc,
    classes: Vec<ClassDoc>,
}

#[derive(Serialize)]
struct IndependenceDoc {
    family: String,
    rank: usize,
    group: String,
    xi: Vec<String>,
    k_list: Vec<usize>,
    independent: bool,
    jacobian_rank: usize,
    witness_point: Option<Vec<String>>,
    trials_used: usize,
    annotations: Vec<String>,
}

#[derive(Serialize)]
struct CrosscheckPointDoc {
    x: Vec<String>,
    mean: f64,
    stderr: f64,
    mu_value: f64,
    rho: Option<f64>,
    rho_sigma: Option<f64>,
}

#[derive(Serialize)]
struct CrosscheckKDoc {
    k: usize,
    status: String,
    mu_is_zero: bool,
    rho_mean: Option<f64>,
    rho_sigma: Option<f64>,
    constancy_pass: bool,
    vanish_consistent: bool,
    points: Vec<CrosscheckPointDoc>,
}

#[derive(Serialize)]
struct PairDoc {
    k: usize,
    j: usize,
    observed: f64,
    sigma: f64,
    expected_plus: f64,
    expected_minus: f64,
    pass_plus: bool,
    pass_minus: bool,
}

#[derive(Serialize)]
struct CrosscheckDoc {
    family: String,
    rank: usize,
    group: String,
    xi: Vec<String>,
    n: usize,
    k_list: Vec<usize>,
    samples: usize,
    seed: u64,
    fitted_sign: Option<i8>,
    pass: bool,
    per_k: Vec<CrosscheckKDoc>,
    pairs: Vec<PairDoc>,
}

fn poly_terms_doc(p: &RatPoly) -> Vec<TermDoc> {
    p.term_strings()
        .into_iter()
        .map(|(exp, coeff)| TermDoc { exp, coeff })
        .collect()
}

fn decomposition_doc(datum: &RootDatum, dec: &Decomposition) -> DecompositionDoc {
    let gens = basic_invariants(datum);
    DecompositionDoc {
        terms: dec
            .terms
            .iter()
            .map(|t| DecompositionTermDoc {
                generators: t.generators.iter().map(|&gi| gens[gi].name.clone()).collect(),
                coeff: t.coeff.to_string(),
            })
            .collect(),
        generator_component: dec
            .generator_component
            .iter()
            .map(|(gi, c)| GeneratorComponentDoc {
                generator: gens[*gi].name.clone(),
                coeff: c.to_string(),
            })
            .collect(),
    }
}

fn to_json(doc: &impl Serialize) -> Result<String, CliError> {
    serde_json::to_string_pretty(doc)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| CliError::Internal(format!("serialization failed: {e}")))
}

fn cmd_mu(orbit: &OrbitArgs, k: &str) -> Result<String, CliError> {
    let (datum, spec) = build_orbit(orbit)?;
    let ks = parse_k_list(k, &datum)?;
    let mut classes = Vec::with_capacity(ks.len());
    for &k in &ks {
        let mu = mu_class(&spec, k)?;
        let dec = decompose_in_generators(&mu.poly, &datum, k)?;
        classes.push(ClassDoc {
            k,
            is_zero: mu.is_zero,
            poly: poly_terms_doc(&mu.poly),
            decomposition: decomposition_doc(&datum, &dec),
        });
    }
    let doc = MuDoc {
        family: datum.family.letter().into(),
        rank: datum.rank,
        group: datum.family.group_label(datum.rank),
        xi: rational_strings(&spec.xi),
        n: spec.n,
        stabilizer: StabilizerDoc {
            roots: spec.r_xi_pos.clone(),
            weyl_order: spec.w_xi_order,
        },
        classes,
    };
    to_json(&doc)
}

fn cmd_independence(
    orbit: &OrbitArgs,
    k: &str,
    trials: usize,
    seed: u64,
) -> Result<String, CliError> {
    let (datum, spec) = build_orbit(orbit)?;
    let ks = parse_k_list(k, &datum)?;
    let polys: Vec<RatPoly> = ks
        .iter()
        .map(|&k| mu_class(&spec, k).map(|m| m.poly))
        .collect::<Result<_, _>>()?;
    let report = independence_certificate(&polys, &ks, &datum, trials, seed)?;
    let annotations: Vec<String> = report
        .zero_members
        .iter()
        .map(|&i| format!("mu_{} is exactly zero", report.k_list[i]))
        .collect();
    let doc = IndependenceDoc {
        family: datum.family.letter().into(),
        rank: datum.rank,
        group: datum.family.group_label(datum.rank),
        xi: rational_strings(&spec.xi),
        k_list: report.k_list.clone(),
        independent: report.independent,
        jacobian_rank: report.jacobian_rank,
        witness_point: report.witness_point.as_deref().map(rational_strings),
        trials_used: report.trials_used,
        annotations,
    };
    to_json(&doc)
}

fn status_name(status: KStatus) -> &'static str {
    match status {
        KStatus::Ok => "ok",
        KStatus::BothSidesVanish => "both_sides_vanish",
        KStatus::Degenerate => "degenerate",
    }
}

fn crosscheck_doc(datum: &RootDatum, report: &CrosscheckReport) -> CrosscheckDoc {
    CrosscheckDoc {
        family: datum.family.letter().into(),
        rank: datum.rank,
        group: report.group.clone(),
        xi: Vec::new(), // filled by the caller
        n: report.n,
        k_list: report.k_list.clone(),
        samples: report.n_samples,
        seed: report.seed,
        fitted_sign: report.fitted_sign,
        pass: report.pass,
        per_k: report
            .per_k
            .iter()
            .map(|r| CrosscheckKDoc {
                k: r.k,
                status: status_name(r.status).into(),
                mu_is_zero: r.mu_is_zero,
                rho_mean: r.rho_mean,
                rho_sigma: r.rho_sigma,
                constancy_pass: r.constancy_pass,
                vanish_consistent: r.vanish_consistent,
                points: report
                    .x_list
                    .iter()
                    .enumerate()
                    .map(|(xi_idx, x)| CrosscheckPointDoc {
                        x: rational_strings(x),
                        mean: r.estimates[xi_idx].mean,
                        stderr: r.estimates[xi_idx].stderr,
                        mu_value: r.mu_values[xi_idx],
                        rho: r.ratios[xi_idx].map(|(rho, _)| rho),
                        rho_sigma: r.ratios[xi_idx].map(|(_, s)| s),
                    })
                    .collect(),
            })
            .collect(),
        pairs: report
            .pairs
            .iter()
            .map(|p| PairDoc {
                k: p.k,
                j: p.j,
                observed: p.observed,
                sigma: p.sigma,
                expected_plus: p.expected_plus,
                expected_minus: p.expected_minus,
                pass_plus: p.pass_plus,
                pass_minus: p.pass_minus,
            })
            .collect(),
    }
}

fn cmd_crosscheck(
    orbit: &OrbitArgs,
    k: &str,
    x: Option<&str>,
    samples: usize,
    seed: u64,
) -> Result<String, CliError> {
    let (datum, spec) = build_orbit(orbit)?;
    let ks = parse_k_list(k, &datum)?;
    if samples < 1_000 {
        return Err(CliError::Config(format!(
            "invalid samples: {samples} (minimum 1000)"
        )));
    }
    let x_list: Vec<Vec<BigRational>> = match x {
        Some(raw) => raw
            .split(';')
            .map(|part| parse_vector("x", part))
            .collect::<Result<_, _>>()?,
        None => default_directions(&datum),
    };
    let report = crosscheck_ratio(&spec, &ks, &x_list, samples, seed)?;
    let mut doc = crosscheck_doc(&datum, &report);
    doc.xi = rational_strings(&spec.xi);
    to_json(&doc)
}

fn cmd_scan(family: &str, rank: usize, line: &str, k: &str, seed: u64) -> Result<String, CliError> {
    let datum = build_datum(family, rank)?;
    let ks = parse_k_list(k, &datum)?;
    let parts: Vec<&str> = line.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::Config(format!(
            "invalid line: {line:?} (want start:direction:steps)"
        )));
    }
    let start = parse_vector("line start", parts[0])?;
    let direction = parse_vector("line direction", parts[1])?;
    let steps: usize = parts[2]
        .trim()
        .parse()
        .map_err(|_| CliError::Config(format!("invalid line steps: {:?}", parts[2])))?;
    if steps == 0 {
        return Err(CliError::Config("invalid line steps: need at least 1".into()));
    }
    if start.len() != datum.ambient_dim || direction.len() != datum.ambient_dim {
        return Err(CliError::Config(format!(
            "invalid line: vectors must have length {}",
            datum.ambient_dim
        )));
    }
    if direction.iter().all(|c| c.is_zero()) {
        return Err(CliError::Config("invalid line: zero-length direction".into()));
    }
    let grid: Vec<(BigRational, Vec<BigRational>)> = (0..steps)
        .map(|t| {
            let tq = BigRational::from_integer((t as i64).into());
            let xi: Vec<BigRational> = start
                .iter()
                .zip(&direction)
                .map(|(s, d)| s + d * &tq)
                .collect();
            (tq, xi)
        })
        .collect();
    let table = genericity_scan(&datum, &ks, &grid, seed)?;

    let mut out = String::new();
    let header: Vec<String> = std::iter::once("t".to_string())
        .chain(std::iter::once("xi".to_string()))
        .chain(table.k_list.iter().map(|k| format!("mu_{k}_zero")))
        .chain(std::iter::once("jacobian_rank".to_string()))
        .collect();
    writeln!(out, "{}", header.join(",")).expect("string write");
    for row in &table.rows {
        let xi_cell = rational_strings(&row.xi).join(";");
        let mut cells = vec![row.t.to_string(), xi_cell];
        cells.extend(row.mu_zero.iter().map(|(_, z)| z.to_string()));
        cells.push(row.jacobian_rank.to_string());
        writeln!(out, "{}", cells.join(",")).expect("string write");
    }
    Ok(out)
}

/// Run a parsed command and return the full output document.
pub fn execute(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Mu { orbit, k } => cmd_mu(orbit, k),
        Command::Independence {
            orbit,
            k,
            trials,
            seed,
        } => cmd_independence(orbit, k, *trials, *seed),
        Command::Crosscheck {
            orbit,
            k,
            x,
            samples,
            seed,
        } => cmd_crosscheck(orbit, k, x.as_deref(), *samples, *seed),
        Command::Scan {
            family,
            rank,
            line,
            k,
            seed,
        } => cmd_scan(family, *rank, line, k, *seed),
    }
}
