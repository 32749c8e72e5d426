//! The command layer behind the `fadekit` binary.
//!
//! Every command returns an [`Outcome`]: an exit code and a JSON report
//! carrying `"schema_version": 1`. Exit codes are `0` on success, `1` when
//! a verification check fails, `2` on bad input and `3` when a state-space
//! system turns out to be unstable.

mod verify;

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::convrep::{classify, AnalyticKernel, KernelSeq};
use crate::error::Error;
use crate::exponent::parse_exponent;
use crate::rkhs::{finite_memory_fit, ridge_fit, truncated_fit, truncation_equivalence, Dataset, FitRecord, SeqKernel};
use crate::seqspace::lp_norm;
use crate::ssm::{run_recurrent, spectral_radius, ssm_to_kernel_with_margin, unstable_witness, LinearSSM, Stability};
use crate::{sample, FiniteSeq};

pub use verify::{run_checks, CheckResult};

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_BAD_INPUT: i32 = 2;
pub const EXIT_UNSTABLE: i32 = 3;

#[derive(Debug, Clone, Parser)]
#[command(name = "fadekit", version, about = "Linear fading-memory functionals: classification, realization, regression")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Fading-memory verdicts for a kernel (explicit or analytic family).
    Classify {
        #[arg(long)]
        input: PathBuf,
        /// Exponent in [1, ∞]; `inf` is accepted.
        #[arg(long)]
        p: String,
    },
    /// Convolution kernel and stability report of a state-space system.
    Realize {
        #[arg(long)]
        input: PathBuf,
        /// Bound on the kernel mass left in the tail.
        #[arg(long, default_value_t = 1e-10)]
        eps: f64,
        #[arg(long, default_value_t = crate::ssm::DEFAULT_MARGIN)]
        margin: f64,
    },
    /// Kernel ridge regression on a dataset manifest.
    Regress {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        gamma: f64,
        /// Truncate samples to `t ≥ T` before fitting.
        #[arg(long, allow_hyphen_values = true)]
        truncate: Option<i64>,
        /// Use the λ-kernel with this λ.
        #[arg(long, conflicts_with = "kernel")]
        lambda: Option<f64>,
        /// Use the kernel induced by this kernel file.
        #[arg(long)]
        kernel: Option<PathBuf>,
        /// Random probes for the truncation equivalence check (λ-kernel).
        #[arg(long, default_value_t = 200)]
        probes: usize,
        /// Also write the fit record (kernel, gamma, alpha, sample digests).
        #[arg(long)]
        save_fit: Option<PathBuf>,
    },
    /// Randomized self-checks of the library's identities and bounds.
    Verify {
        /// Instances per check.
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 1e-10)]
        eps: f64,
    },
    /// Recurrent versus convolution evaluation timings.
    Bench {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_delimiter = ',', default_values_t = vec![256usize, 1024, 4096])]
        lengths: Vec<usize>,
        #[arg(long, default_value_t = 1e-10)]
        eps: f64,
        #[arg(long, default_value_t = 11)]
        reps: usize,
    },
}

/// Exit code plus report.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub report: Value,
}

impl Outcome {
    fn ok(report: Value) -> Self {
        Outcome { code: EXIT_OK, report }
    }

    fn failure(code: i32, command: &str, err: impl std::fmt::Display) -> Self {
        Outcome {
            code,
            report: json!({ "schema_version": SCHEMA_VERSION, "command": command, "error": err.to_string() }),
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.report).expect("reports are plain JSON");
                s.push('\n');
                s
            }
            Format::Text => {
                let mut out = String::new();
                flatten(&self.report, "", &mut out);
                out
            }
        }
    }
}

fn flatten(v: &Value, prefix: &str, out: &mut String) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(map) => map.iter().for_each(|(k, v)| flatten(v, &key(k), out)),
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let parts: Vec<String> = items.iter().map(Value::to_string).collect();
            out.push_str(&format!("{prefix}: [{}]\n", parts.join(", ")));
        }
        Value::Array(items) => items.iter().enumerate().for_each(|(i, v)| flatten(v, &key(&i.to_string()), out)),
        Value::String(s) => out.push_str(&format!("{prefix}: {s}\n")),
        other => out.push_str(&format!("{prefix}: {other}\n")),
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable report")
}

fn input_code(e: &Error) -> i32 {
    match e {
        Error::Unstable { .. } | Error::StabilityUndecided { .. } => EXIT_UNSTABLE,
        _ => EXIT_BAD_INPUT,
    }
}

/// Runs one command.
pub fn run(cfg: &RunConfig) -> Outcome {
    match &cfg.command {
        Command::Classify { input, p } => cmd_classify(input, p),
        Command::Realize { input, eps, margin } => cmd_realize(input, *eps, *margin),
        Command::Regress { input, gamma, truncate, lambda, kernel, probes, save_fit } => {
            let spec = match (lambda, kernel) {
                (Some(l), _) => KernelChoice::Lambda(*l),
                (None, Some(path)) => KernelChoice::Induced(path.clone()),
                (None, None) => return Outcome::failure(EXIT_BAD_INPUT, "regress", "pass --lambda or --kernel"),
            };
            cmd_regress(input, &spec, *gamma, *truncate, *probes, cfg.seed, save_fit.as_deref())
        }
        Command::Verify { trials, eps } => cmd_verify(*trials, *eps, cfg.seed),
        Command::Bench { input, lengths, eps, reps } => cmd_bench(input, lengths, *eps, *reps, cfg.seed),
    }
}

fn read_json(path: &Path) -> Result<Value, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn parse_as<T: serde::de::DeserializeOwned>(v: Value, what: &str) -> Result<T, Error> {
    serde_json::from_value(v).map_err(|e| Error::Parse(format!("not a valid {what}: {e}")))
}

/// Either an explicit kernel or one of the analytic families (an object
/// with a `"family"` field).
#[derive(Debug, Clone, PartialEq)]
pub enum KernelSpec {
    Explicit(KernelSeq),
    Analytic(AnalyticKernel),
}

pub fn load_kernel_spec(path: &Path) -> Result<KernelSpec, Error> {
    let v = read_json(path)?;
    if v.get("family").is_some() {
        let a: AnalyticKernel = parse_as(v, "analytic kernel")?;
        a.validate()?;
        Ok(KernelSpec::Analytic(a))
    } else {
        Ok(KernelSpec::Explicit(parse_as(v, "kernel")?))
    }
}

pub fn cmd_classify(input: &Path, p: &str) -> Outcome {
    let result = (|| {
        let p = parse_exponent(p)?;
        let spec = load_kernel_spec(input)?;
        let (kind, report) = match &spec {
            KernelSpec::Explicit(k) => ("explicit", classify(k, p)?),
            KernelSpec::Analytic(a) => ("analytic", a.classify(p)?),
        };
        Ok::<_, Error>(json!({
            "schema_version": SCHEMA_VERSION,
            "command": "classify",
            "kernel_kind": kind,
            "report": to_value(&report),
        }))
    })();
    result.map_or_else(|e| Outcome::failure(EXIT_BAD_INPUT, "classify", e), Outcome::ok)
}

pub fn cmd_realize(input: &Path, eps: f64, margin: f64) -> Outcome {
    let sys: LinearSSM = match read_json(input).and_then(|v| parse_as(v, "state-space system")) {
        Ok(s) => s,
        Err(e) => return Outcome::failure(EXIT_BAD_INPUT, "realize", e),
    };
    let stability = match spectral_radius(sys.a(), margin) {
        Ok(r) => r,
        Err(e) => return Outcome::failure(EXIT_BAD_INPUT, "realize", e),
    };
    match ssm_to_kernel_with_margin(&sys, eps, margin) {
        Ok(kernel) => Outcome::ok(json!({
            "schema_version": SCHEMA_VERSION,
            "command": "realize",
            "stability": to_value(&stability),
            "kernel": to_value(&kernel),
        })),
        Err(e @ (Error::Unstable { .. } | Error::StabilityUndecided { .. })) => {
            let witness = match unstable_witness(sys.a()) {
                Ok(w) => to_value(&w),
                Err(we) => json!({ "error": we.to_string() }),
            };
            Outcome {
                code: EXIT_UNSTABLE,
                report: json!({
                    "schema_version": SCHEMA_VERSION,
                    "command": "realize",
                    "error": e.to_string(),
                    "stability": to_value(&stability),
                    "witness": witness,
                }),
            }
        }
        Err(e) => Outcome::failure(EXIT_BAD_INPUT, "realize", e),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum KernelChoice {
    Lambda(f64),
    Induced(PathBuf),
}

pub fn cmd_regress(
    input: &Path,
    choice: &KernelChoice,
    gamma: f64,
    truncate: Option<i64>,
    probes: usize,
    seed: u64,
    save_fit: Option<&Path>,
) -> Outcome {
    let result = (|| {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::Domain(format!("gamma must be positive, got {gamma}")));
        }
        let data = Dataset::load(input)?;
        let dim = data.dim();
        let kernel = match choice {
            KernelChoice::Lambda(l) => SeqKernel::lambda(*l, dim)?,
            KernelChoice::Induced(path) => match load_kernel_spec(path)? {
                KernelSpec::Explicit(k) => SeqKernel::induced(k),
                KernelSpec::Analytic(_) => {
                    return Err(Error::Invalid("regression needs an explicit kernel, not an analytic family".into()))
                }
            },
        };
        let fit = match truncate {
            Some(t) => truncated_fit(&kernel, &data.samples, &data.targets, gamma, t)?,
            None => ridge_fit(&kernel, &data.samples, &data.targets, gamma)?,
        };
        if let Some(path) = save_fit {
            let text = serde_json::to_string_pretty(&FitRecord::from(&fit))?;
            std::fs::write(path, text)?;
        }
        let mut report = json!({
            "schema_version": SCHEMA_VERSION,
            "command": "regress",
            "kernel": to_value(&kernel),
            "gamma": gamma,
            "truncation": truncate,
            "samples": data.samples.len(),
            "alpha": fit.alpha.iter().copied().collect::<Vec<f64>>(),
            "rkhs_norm": fit.rkhs_norm(),
            "train_mse": fit.train_mse(),
            "objective": fit.objective(),
            "normal_equation_residual": fit.normal_equation_residual(),
        });
        if let SeqKernel::Lambda { .. } = kernel {
            let cutoff = truncate.unwrap_or_else(|| data.samples.iter().map(FiniteSeq::support_start).min().unwrap_or(0));
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let len = (2 - cutoff.min(0)) as usize;
            let extra: Vec<FiniteSeq> = (0..probes).map(|_| sample::sequence(&mut rng, dim, len)).collect();
            let eq = truncation_equivalence(&kernel, &data.samples, &data.targets, gamma, cutoff, &extra)?;
            let fm = finite_memory_fit(&kernel, &data.samples, &data.targets, gamma, cutoff)?;
            report["equivalence"] = to_value(&eq);
            report["finite_memory_weights"] =
                to_value(&fm.weights.iter().map(|b| b.iter().copied().collect::<Vec<f64>>()).collect::<Vec<_>>());
        }
        Ok(report)
    })();
    result.map_or_else(|e| Outcome::failure(EXIT_BAD_INPUT, "regress", e), Outcome::ok)
}

pub fn cmd_verify(trials: usize, eps: f64, seed: u64) -> Outcome {
    if trials == 0 || eps.is_nan() || eps <= 0.0 {
        return Outcome::failure(EXIT_BAD_INPUT, "verify", "need trials >= 1 and eps > 0");
    }
    let checks = run_checks(trials, eps, seed);
    let passed = checks.iter().all(|c| c.passed);
    Outcome {
        code: if passed { EXIT_OK } else { EXIT_VERIFY_FAILED },
        report: json!({
            "schema_version": SCHEMA_VERSION,
            "command": "verify",
            "seed": seed,
            "trials": trials,
            "passed": passed,
            "checks": to_value(&checks),
        }),
    }
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    xs[xs.len() / 2]
}

/// Timing rows are wall-clock measurements and differ between runs; the
/// discrepancy column is deterministic given the seed.
pub fn cmd_bench(input: &Path, lengths: &[usize], eps: f64, reps: usize, seed: u64) -> Outcome {
    let sys: LinearSSM = match read_json(input).and_then(|v| parse_as(v, "state-space system")) {
        Ok(s) => s,
        Err(e) => return Outcome::failure(EXIT_BAD_INPUT, "bench", e),
    };
    if lengths.is_empty() || lengths.contains(&0) || reps == 0 {
        return Outcome::failure(EXIT_BAD_INPUT, "bench", "lengths and reps must be positive");
    }
    let kernel = match ssm_to_kernel_with_margin(&sys, eps, crate::ssm::DEFAULT_MARGIN) {
        Ok(k) => k,
        Err(e) => return Outcome::failure(input_code(&e), "bench", e),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(lengths.len());
    for &len in lengths {
        let z = sample::sequence(&mut rng, sys.input_dim(), len);
        let mut rec_t = Vec::with_capacity(reps);
        let mut conv_t = Vec::with_capacity(reps);
        let (mut rec, mut conv) = (None, None);
        for _ in 0..reps {
            let t0 = Instant::now();
            rec = Some(run_recurrent(&sys, &z).expect("dimensions checked"));
            rec_t.push(t0.elapsed().as_secs_f64());
            let t0 = Instant::now();
            conv = Some(kernel.eval_windowed(&z).expect("dimensions checked").value);
            conv_t.push(t0.elapsed().as_secs_f64());
        }
        let (rec, conv) = (rec.expect("reps >= 1"), conv.expect("reps >= 1"));
        let sup = lp_norm(&z, f64::INFINITY).expect("valid exponent");
        let discrepancy = (&rec - &conv).amax();
        rows.push(json!({
            "length": len,
            "recurrent_median_s": median(rec_t),
            "convolution_median_s": median(conv_t),
            "discrepancy": discrepancy,
            "bound": eps * sup,
            "within_bound": discrepancy <= eps * sup,
        }));
    }
    let stability = spectral_radius(sys.a(), crate::ssm::DEFAULT_MARGIN).map(|r| r.stable).unwrap_or(Stability::No);
    Outcome::ok(json!({
        "schema_version": SCHEMA_VERSION,
        "command": "bench",
        "eps": eps,
        "reps": reps,
        "kernel_window": 1 - kernel.window_start(),
        "stable": to_value(&stability),
        "rows": rows,
    }))
}
