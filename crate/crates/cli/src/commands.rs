use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use fockkernel::approx::{run_experiment, ExperimentConfig, TargetFunction};
use fockkernel::free_group::haagerup_embed;
use fockkernel::io::{parse_points, parse_words};
use fockkernel::positivity::{certify_psd, DEFAULT_MAX_TRIES};
use fockkernel::series::{check_convergence, lift_with, Truncation};
use fockkernel::zoo::{self, pseudo_hyperbolic_distance, DiskPoint};
use fockkernel::{
    certify_cnd, certify_strict, edge_dist_sq, feature_distance_sq, find_separating, gram,
    vandermonde_independence, CndVerdict, Domain, Error, GramMatrix, KernelSpec, PdVerdict, Point,
    PowerSeries,
};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::args::{
    ApproximateArgs, CertifyArgs, CndArgs, EmbedArgs, KernelOpts, LiftArgs, SeparateArgs,
};
use crate::output::{check_distinct_output, csv_float, csv_row, emit, report_json, Report};
use crate::CliError;

/// Whether the verdict matched `--expect` (true when none was given).
pub type Outcome = bool;

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(format!("reading {}: {e}", path.display())))
}

fn read_config(path: &Path) -> Result<Map<String, Value>, CliError> {
    match serde_json::from_str(&read_text(path)?) {
        Ok(Value::Object(map)) => Ok(map),
        Ok(_) => Err(CliError::usage(format!(
            "{}: config must be a JSON object",
            path.display()
        ))),
        Err(e) => Err(CliError::parse(format!("{}: {e}", path.display()))),
    }
}

/// Overlays the config file on the parsed flags; config values win. A
/// `kernel` object in the config is returned separately as a full spec.
fn merge_config<T>(flags: &T, config: Option<&Path>) -> Result<(T, Option<KernelSpec>), CliError>
where
    T: Serialize + DeserializeOwned,
{
    let Some(path) = config else {
        return Ok((clone_via_json(flags)?, None));
    };
    let mut merged = match serde_json::to_value(flags) {
        Ok(Value::Object(map)) => map,
        _ => unreachable!("argument structs serialize as objects"),
    };
    let mut spec = None;
    for (key, value) in read_config(path)? {
        if !merged.contains_key(&key) {
            return Err(CliError::usage(format!(
                "{}: unknown key {key:?}",
                path.display()
            )));
        }
        if key == "kernel" && value.is_object() {
            let parsed: KernelSpec = serde_json::from_value(value)
                .map_err(|e| CliError::parse(format!("{}: kernel: {e}", path.display())))?;
            parsed.validate()?;
            spec = Some(parsed);
            merged.insert(key, Value::Null);
        } else {
            merged.insert(key, value);
        }
    }
    let out = serde_json::from_value(Value::Object(merged))
        .map_err(|e| CliError::parse(format!("{}: {e}", path.display())))?;
    Ok((out, spec))
}

fn clone_via_json<T: Serialize + DeserializeOwned>(value: &T) -> Result<T, CliError> {
    serde_json::to_value(value)
        .and_then(serde_json::from_value)
        .map_err(|e| CliError::usage(e.to_string()))
}

fn named_kernel(opts: &KernelOpts) -> Result<Option<KernelSpec>, CliError> {
    let Some(name) = opts.kernel.as_deref() else {
        return Ok(None);
    };
    let t = opts.t.unwrap_or(1.0);
    let k = match name.replace('_', "-").as_str() {
        "gaussian" => zoo::gaussian(t)?,
        "linear" => zoo::linear(opts.scale.unwrap_or(1.0))?,
        "drury-arveson" => zoo::drury_arveson(),
        "ph-base" => zoo::ph_base_kernel(),
        "ph-gaussian" => zoo::ph_gaussian(t)?,
        "word-metric" => zoo::word_metric_kernel(t)?,
        other => return Err(CliError::usage(format!("unknown kernel {other:?}"))),
    };
    Ok(Some(k))
}

fn require_kernel(opts: &KernelOpts, spec: Option<KernelSpec>) -> Result<KernelSpec, CliError> {
    match spec {
        Some(k) => Ok(k),
        None => named_kernel(opts)?.ok_or_else(|| CliError::usage("--kernel is required")),
    }
}

fn parse_domain(name: &str) -> Result<Domain, CliError> {
    match name {
        "real" => Ok(Domain::RealVector),
        "complex" => Ok(Domain::ComplexScalar),
        "word" => Ok(Domain::GroupWord),
        other => Err(CliError::usage(format!(
            "unknown domain {other:?} (expected real, complex or word)"
        ))),
    }
}

fn resolve_domain(k: &KernelSpec, flag: Option<&str>) -> Result<Domain, CliError> {
    let domains = k.domains();
    match flag {
        Some(name) => {
            let d = parse_domain(name)?;
            if !domains.contains(&d) {
                return Err(Error::DomainMismatch {
                    expected: format!("{domains:?}"),
                    found: format!("{d:?}"),
                }
                .into());
            }
            Ok(d)
        }
        None if domains.len() == 1 => Ok(domains[0]),
        None => Err(CliError::usage(format!(
            "{} accepts several domains; pass --domain",
            k.label()
        ))),
    }
}

fn require_path<'a>(path: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path, CliError> {
    let p = path
        .as_deref()
        .ok_or_else(|| CliError::usage(format!("{flag} is required")))?;
    if !p.is_file() {
        return Err(CliError::io(format!("{}: no such file", p.display())));
    }
    Ok(p)
}

fn load_points(path: &Path, domain: Domain) -> Result<Vec<Point>, CliError> {
    Ok(parse_points(&read_text(path)?, domain)?)
}

fn check_output(output: &Option<PathBuf>, inputs: &[&Path]) -> Result<(), CliError> {
    if let Some(out) = output {
        let parent = out.parent().filter(|p| !p.as_os_str().is_empty());
        if parent.is_some_and(|p| !p.is_dir()) {
            return Err(CliError::io(format!(
                "output directory of {} does not exist",
                out.display()
            )));
        }
    }
    check_distinct_output(output.as_deref(), inputs)
}

fn pd_verdict_name(v: PdVerdict) -> &'static str {
    match v {
        PdVerdict::StrictlyPositive => "strictly-positive",
        PdVerdict::PositiveSemidefinite => "psd",
        PdVerdict::Indefinite => "indefinite",
        PdVerdict::NotHermitian => "not-hermitian",
    }
}

/// `psd` is met by any positive semidefinite verdict, strict or not.
fn pd_matches(expect: &str, v: PdVerdict) -> Result<bool, CliError> {
    match expect {
        "strictly-positive" | "indefinite" | "not-hermitian" => Ok(pd_verdict_name(v) == expect),
        "psd" => Ok(matches!(
            v,
            PdVerdict::StrictlyPositive | PdVerdict::PositiveSemidefinite
        )),
        other => Err(CliError::usage(format!("unknown expectation {other:?}"))),
    }
}

fn check_expect(expect: Option<&str>, allowed: &[&str]) -> Result<(), CliError> {
    match expect {
        Some(e) if !allowed.contains(&e) => Err(CliError::usage(format!(
            "unknown expectation {e:?} (expected one of {})",
            allowed.join(", ")
        ))),
        _ => Ok(()),
    }
}

fn path_strings(paths: &[&Path]) -> Vec<String> {
    paths.iter().map(|p| p.display().to_string()).collect()
}

pub fn certify(flags: &CertifyArgs) -> Result<Outcome, CliError> {
    let (args, spec) = merge_config(flags, flags.config.as_deref())?;
    check_expect(
        args.expect.as_deref(),
        &["strictly-positive", "psd", "indefinite", "not-hermitian"],
    )?;
    let opts = &args.kernel;
    let k = require_kernel(opts, spec)?;
    let points_path = require_path(&opts.points, "--points")?;
    check_output(&opts.output, &[points_path])?;
    let points = load_points(points_path, resolve_domain(&k, opts.domain.as_deref())?)?;

    let cert = certify_strict(&k, &points, opts.tol)?;
    let matches = args
        .expect
        .as_deref()
        .map(|e| pd_matches(e, cert.verdict))
        .transpose()?;
    let mut report = Report::new("certify", Some(&k), cert);
    report.inputs = path_strings(&[points_path]);
    report.expect = args.expect.as_deref();
    report.matches_expectation = matches;
    emit(opts.output.as_deref(), &report_json(&report)?)?;
    Ok(matches.unwrap_or(true))
}

#[derive(Serialize)]
struct CndResult {
    psi: String,
    #[serde(flatten)]
    certificate: fockkernel::CndCertificate,
}

pub fn cnd(flags: &CndArgs) -> Result<Outcome, CliError> {
    let (args, spec) = merge_config(flags, flags.config.as_deref())?;
    check_expect(args.expect.as_deref(), &["cnd", "not-cnd"])?;
    let opts = &args.kernel;
    let points_path = require_path(&opts.points, "--points")?;
    check_output(&opts.output, &[points_path])?;
    let psi = args.psi.as_deref().unwrap_or("ph-d2").replace('_', "-");

    let mut kernel = None;
    let (rows, label) = match psi.as_str() {
        "ph-d2" => {
            let disk = load_points(points_path, Domain::ComplexScalar)?
                .into_iter()
                .map(|p| match p {
                    Point::Complex(z) => DiskPoint::new(z),
                    _ => unreachable!("complex domain yields complex points"),
                })
                .collect::<Result<Vec<_>, _>>()?;
            let rows = disk
                .iter()
                .map(|&l| {
                    disk.iter()
                        .map(|&m| pseudo_hyperbolic_distance(l, m).powi(2))
                        .collect()
                })
                .collect::<Vec<Vec<f64>>>();
            (rows, "pseudo_hyperbolic_distance_squared".to_string())
        }
        "feature-distance" => {
            let k = require_kernel(opts, spec)?;
            let points = load_points(points_path, resolve_domain(&k, opts.domain.as_deref())?)?;
            let rows = points
                .iter()
                .map(|x| {
                    points
                        .iter()
                        .map(|y| feature_distance_sq(&k, x, y))
                        .collect()
                })
                .collect::<Result<Vec<Vec<f64>>, _>>()?;
            let label = format!("feature_distance_squared({})", k.label());
            kernel = Some(k);
            (rows, label)
        }
        "word-length" => {
            let words = parse_words(&read_text(points_path)?)?;
            let rows = words
                .iter()
                .map(|g| {
                    words
                        .iter()
                        .map(|h| g.distance(h).map(|d| d as f64))
                        .collect()
                })
                .collect::<Result<Vec<Vec<f64>>, _>>()?;
            (rows, "word_length".to_string())
        }
        other => {
            return Err(CliError::usage(format!(
                "unknown psi {other:?} (expected ph-d2, feature-distance or word-length)"
            )))
        }
    };
    let m = GramMatrix::from_real_rows(&rows)?;
    let certificate = certify_cnd(&m, opts.tol)?;
    let verdict = match certificate.verdict {
        CndVerdict::ConditionallyNegative => "cnd",
        CndVerdict::NotConditionallyNegative => "not-cnd",
    };
    let matches = args.expect.as_deref().map(|e| e == verdict);
    let mut report = Report::new(
        "cnd",
        kernel.as_ref(),
        CndResult {
            psi: label,
            certificate,
        },
    );
    report.inputs = path_strings(&[points_path]);
    report.expect = args.expect.as_deref();
    report.matches_expectation = matches;
    emit(opts.output.as_deref(), &report_json(&report)?)?;
    Ok(matches.unwrap_or(true))
}

#[derive(Serialize)]
struct SeparateResult {
    separated: bool,
    tries: usize,
    min_pairwise_gap: f64,
    functional: Option<fockkernel::SeparatingFunctional>,
    vandermonde: Option<fockkernel::positivity::VandermondeReport>,
}

pub fn separate(flags: &SeparateArgs) -> Result<Outcome, CliError> {
    let (args, spec) = merge_config(flags, flags.config.as_deref())?;
    check_expect(args.expect.as_deref(), &["separated", "not-separated"])?;
    let seed = args
        .seed
        .ok_or_else(|| CliError::usage("--seed is required for separate"))?;
    let opts = &args.kernel;
    let k = require_kernel(opts, spec)?;
    let points_path = require_path(&opts.points, "--points")?;
    check_output(&opts.output, &[points_path])?;
    let points = load_points(points_path, resolve_domain(&k, opts.domain.as_deref())?)?;
    let max_tries = args.max_tries.unwrap_or(DEFAULT_MAX_TRIES);

    let result = match find_separating(&k, &points, seed, max_tries) {
        Ok(psi) => SeparateResult {
            separated: true,
            tries: psi.tries,
            min_pairwise_gap: psi.min_pairwise_gap,
            vandermonde: Some(vandermonde_independence(&psi.values)),
            functional: Some(psi),
        },
        Err(Error::SeparationFailed { tries, best_gap }) => SeparateResult {
            separated: false,
            tries,
            min_pairwise_gap: best_gap,
            functional: None,
            vandermonde: None,
        },
        Err(e) => return Err(e.into()),
    };
    let verdict = if result.separated {
        "separated"
    } else {
        "not-separated"
    };
    let matches = args.expect.as_deref().map(|e| e == verdict);
    let mut report = Report::new("separate", Some(&k), result);
    report.seed = Some(seed);
    report.inputs = path_strings(&[points_path]);
    report.expect = args.expect.as_deref();
    report.matches_expectation = matches;
    emit(opts.output.as_deref(), &report_json(&report)?)?;
    Ok(matches.unwrap_or(true))
}

#[derive(Serialize)]
struct LiftResult {
    series: PowerSeries,
    truncation: Truncation,
    converges: bool,
    strictness_claims_supported: bool,
    max_base_modulus: f64,
    truncation_degree: Option<usize>,
    certificate: fockkernel::PdCertificate,
}

fn build_series(args: &LiftArgs) -> Result<PowerSeries, CliError> {
    let series = match args.series.as_deref().unwrap_or("exp") {
        "exp" => PowerSeries::Exp {
            t: args.lift_t.unwrap_or(1.0),
        },
        "geometric" => PowerSeries::Geometric,
        "explicit" => PowerSeries::Explicit {
            coefficients: args
                .coefficients
                .clone()
                .ok_or_else(|| CliError::usage("--coefficients is required for explicit"))?,
        },
        other => {
            return Err(CliError::usage(format!(
                "unknown series {other:?} (expected exp, geometric or explicit)"
            )))
        }
    };
    series.validate()?;
    Ok(series)
}

pub fn lift(flags: &LiftArgs) -> Result<Outcome, CliError> {
    let (args, spec) = merge_config(flags, flags.config.as_deref())?;
    check_expect(
        args.expect.as_deref(),
        &["strictly-positive", "psd", "indefinite", "not-hermitian"],
    )?;
    let opts = &args.kernel;
    let base = require_kernel(opts, spec)?;
    let series = build_series(&args)?;
    let truncation = match args.max_terms {
        Some(max_terms) => Truncation::Terms {
            max_terms,
            tail_tolerance: args.tail_tol.unwrap_or(1e-12),
        },
        None => Truncation::ClosedForm,
    };
    let points_path = require_path(&opts.points, "--points")?;
    check_output(&opts.output, &[points_path])?;
    let points = load_points(points_path, resolve_domain(&base, opts.domain.as_deref())?)?;

    let converges = check_convergence(&series, &base, &points);
    if !converges {
        return Err(Error::Divergent(format!(
            "some k(x,x) lies outside the radius of convergence {}",
            series.radius()
        ))
        .into());
    }
    let base_gram = gram(&base, &points)?;
    let max_base_modulus = base_gram.max_abs();
    let truncation_degree = match truncation {
        Truncation::Terms {
            max_terms,
            tail_tolerance,
        } => Some(
            series
                .truncation_degree(max_base_modulus, tail_tolerance, max_terms)?
                .ok_or_else(|| {
                    Error::Divergent(format!(
                        "tail bound above {tail_tolerance:e} after {max_terms} terms"
                    ))
                })?,
        ),
        Truncation::ClosedForm => None,
    };
    let lifted = lift_with(base, series.clone(), truncation)?;
    let strict = series.supports_strictness_claims();
    let certificate = if strict {
        certify_strict(&lifted, &points, opts.tol)?
    } else {
        certify_psd(&gram(&lifted, &points)?, opts.tol)?
    };
    let matches = args
        .expect
        .as_deref()
        .map(|e| pd_matches(e, certificate.verdict))
        .transpose()?;
    let result = LiftResult {
        series,
        truncation,
        converges,
        strictness_claims_supported: strict,
        max_base_modulus,
        truncation_degree,
        certificate,
    };
    let mut report = Report::new("lift", Some(&lifted), result);
    report.inputs = path_strings(&[points_path]);
    report.expect = args.expect.as_deref();
    report.matches_expectation = matches;
    emit(opts.output.as_deref(), &report_json(&report)?)?;
    Ok(matches.unwrap_or(true))
}

#[derive(Serialize)]
struct EmbeddedEntry {
    base: String,
    generator: usize,
    coefficient: i64,
}

#[derive(Serialize)]
struct EmbeddedWord {
    word: String,
    length: usize,
    norm_sq: i64,
    entries: Vec<EmbeddedEntry>,
}

#[derive(Serialize)]
struct EmbedResult {
    rank: usize,
    words: Vec<EmbeddedWord>,
}

pub fn embed(flags: &EmbedArgs) -> Result<Outcome, CliError> {
    let (args, _) = merge_config(flags, flags.config.as_deref())?;
    let words_path = require_path(&args.words, "--words")?;
    check_output(&args.output, &[words_path])?;
    let words = parse_words(&read_text(words_path)?)?;

    if args.pairs {
        let mut csv = csv_row(&["g", "h", "dist_sq", "word_length", "equal"].map(String::from));
        let mut all_equal = true;
        for (i, g) in words.iter().enumerate() {
            for h in &words[i + 1..] {
                let dist_sq = edge_dist_sq(g, h)?;
                let length = g.distance(h)? as i64;
                all_equal &= dist_sq == length;
                csv.push_str(&csv_row(&[
                    g.to_string(),
                    h.to_string(),
                    dist_sq.to_string(),
                    length.to_string(),
                    (dist_sq == length).to_string(),
                ]));
            }
        }
        emit(args.output.as_deref(), &csv)?;
        return Ok(all_equal);
    }

    let rank = words.first().map_or(0, |w| w.rank());
    let embedded = words
        .iter()
        .map(|w| {
            let v = haagerup_embed(w);
            EmbeddedWord {
                word: w.to_string(),
                length: w.len(),
                norm_sq: v.norm_sq(),
                entries: v
                    .entries()
                    .iter()
                    .map(|(key, &coefficient)| EmbeddedEntry {
                        base: key.base.to_string(),
                        generator: key.generator,
                        coefficient,
                    })
                    .collect(),
            }
        })
        .collect();
    let mut report = Report::new(
        "embed",
        None,
        EmbedResult {
            rank,
            words: embedded,
        },
    );
    report.inputs = path_strings(&[words_path]);
    emit(args.output.as_deref(), &report_json(&report)?)?;
    Ok(true)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum TargetRef {
    Named(TargetFunction),
    Samples { samples: PathBuf },
}

#[derive(Debug, Deserialize)]
struct ExperimentFile {
    #[serde(flatten)]
    experiment: ExperimentConfig,
    #[serde(default)]
    target: Option<TargetRef>,
    #[serde(default)]
    output: Option<PathBuf>,
    #[serde(default)]
    csv: Option<PathBuf>,
    #[serde(default)]
    max_sup_error: Option<f64>,
}

/// Sampled target values keyed by coordinates rounded to 1e-9.
struct SampleTable(HashMap<Vec<i64>, f64>);

impl SampleTable {
    fn key(x: &[f64]) -> Vec<i64> {
        x.iter().map(|v| (v * 1e9).round() as i64).collect()
    }

    fn load(path: &Path) -> Result<Self, CliError> {
        let rows = parse_points(&read_text(path)?, Domain::RealVector)?;
        let mut table = HashMap::with_capacity(rows.len());
        for row in rows {
            let Point::Real(v) = row else {
                unreachable!("real domain yields real points")
            };
            let (f, x) = v.split_last().expect("parsed rows are non-empty");
            if x.is_empty() {
                return Err(CliError::parse(format!(
                    "{}: sample lines need coordinates and a value",
                    path.display()
                )));
            }
            table.insert(Self::key(x), *f);
        }
        Ok(Self(table))
    }

    fn get(&self, x: &[f64]) -> fockkernel::Result<f64> {
        self.0
            .get(&Self::key(x))
            .copied()
            .ok_or_else(|| Error::Parse(format!("samples file has no value at {x:?}")))
    }
}

#[derive(Serialize)]
struct ApproximateResult<'a> {
    target: String,
    config: &'a ExperimentConfig,
    #[serde(flatten)]
    outcome: &'a fockkernel::approx::ExperimentOutcome,
}

fn parse_target(name: &str) -> Result<TargetFunction, CliError> {
    serde_json::from_value(Value::String(name.replace('-', "_"))).map_err(|_| {
        CliError::usage(format!(
            "unknown target {name:?} (expected sin_pi, square or exp)"
        ))
    })
}

pub fn approximate(args: &ApproximateArgs) -> Result<Outcome, CliError> {
    let config_path = require_path(&args.config, "--config")?;
    let file: ExperimentFile = serde_json::from_str(&read_text(config_path)?)
        .map_err(|e| CliError::parse(format!("{}: {e}", config_path.display())))?;
    let target = match (file.target, &args.target, &args.samples) {
        (Some(t), _, _) => t,
        (None, Some(name), _) => TargetRef::Named(parse_target(name)?),
        (None, None, Some(path)) => TargetRef::Samples {
            samples: path.clone(),
        },
        (None, None, None) => return Err(CliError::usage("a target or samples file is required")),
    };
    let output = file.output.or_else(|| args.output.clone());
    let csv_path = file.csv.or_else(|| args.csv.clone());
    let max_sup = file.max_sup_error.or(args.max_sup_error);

    let mut inputs = vec![config_path.to_path_buf()];
    let (label, outcome) = match &target {
        TargetRef::Named(t) => {
            let t = *t;
            check_output(&output, &[config_path])?;
            check_output(&csv_path, &[config_path])?;
            let out = run_experiment(&file.experiment, |x| Ok(t.eval(x)))?;
            (
                serde_json::to_value(t)
                    .expect("enum serializes")
                    .as_str()
                    .unwrap_or("")
                    .to_string(),
                out,
            )
        }
        TargetRef::Samples { samples } => {
            let samples_path = require_path(&Some(samples.clone()), "samples")?.to_path_buf();
            check_output(&output, &[config_path, &samples_path])?;
            check_output(&csv_path, &[config_path, &samples_path])?;
            let table = SampleTable::load(&samples_path)?;
            let out = run_experiment(&file.experiment, |x| table.get(x))?;
            inputs.push(samples_path.clone());
            (format!("samples:{}", samples_path.display()), out)
        }
    };

    if let Some(csv_path) = &csv_path {
        let dim = file.experiment.bounds.len();
        let mut header: Vec<String> = if dim == 1 {
            vec!["x".to_string()]
        } else {
            (1..=dim).map(|i| format!("x{i}")).collect()
        };
        header.extend(["f", "model", "error"].map(String::from));
        let mut csv = csv_row(&header);
        for s in &outcome.samples {
            let mut row: Vec<String> = s.x.iter().map(|&v| csv_float(v)).collect();
            row.extend([s.f, s.model, s.error].map(csv_float));
            csv.push_str(&csv_row(&row));
        }
        emit(Some(csv_path), &csv)?;
    }

    let matches = max_sup.map(|bound| outcome.report.sup_error <= bound);
    let expect = max_sup.map(|b| format!("sup_error <= {}", csv_float(b)));
    let result = ApproximateResult {
        target: label,
        config: &file.experiment,
        outcome: &outcome,
    };
    let mut report = Report::new("approximate", Some(&file.experiment.kernel), result);
    report.inputs = inputs.iter().map(|p| p.display().to_string()).collect();
    report.expect = expect.as_deref();
    report.matches_expectation = matches;
    emit(output.as_deref(), &report_json(&report)?)?;
    Ok(matches.unwrap_or(true))
}
