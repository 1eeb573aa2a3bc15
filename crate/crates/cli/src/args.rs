use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(
    name = "fockkernel",
    version,
    about = "Kernel certification, embedding, lifting and approximation runs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Certify that a kernel's Gram matrix on a point set is positive definite.
    Certify(CertifyArgs),
    /// Test whether a function ψ(x, y) is conditionally negative definite.
    Cnd(CndArgs),
    /// Search for a kernel section taking distinct values on a point set.
    Separate(SeparateArgs),
    /// Evaluate and certify a power-series lift of a base kernel.
    Lift(LiftArgs),
    /// Embed free-group words into the edge space.
    Embed(EmbedArgs),
    /// Fit a kernel model to a target function and measure its sup error.
    Approximate(ApproximateArgs),
}

/// Flags shared by the kernel commands. A `--config` JSON object with the same
/// snake_case keys overrides them; its `kernel` may also be a full kernel
/// object such as `{"name": "gaussian", "parameters": {"t": 2}}`.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelOpts {
    /// gaussian, linear, drury-arveson, ph-base, ph-gaussian or word-metric.
    #[arg(long)]
    pub kernel: Option<String>,
    /// Bandwidth of gaussian, ph-gaussian and word-metric kernels.
    #[arg(long)]
    pub t: Option<f64>,
    /// Scale of the linear kernel.
    #[arg(long)]
    pub scale: Option<f64>,
    /// Point file: one point per line, or an `N=<k>` word file.
    #[arg(long)]
    pub points: Option<PathBuf>,
    /// real, complex or word; needed when the kernel accepts several.
    #[arg(long)]
    pub domain: Option<String>,
    /// Absolute eigenvalue tolerance (default relative to the spectrum).
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertifyArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub kernel: KernelOpts,
    /// strictly-positive, psd or indefinite.
    #[arg(long)]
    pub expect: Option<String>,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CndArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub kernel: KernelOpts,
    /// ph-d2 (disk points), feature-distance (needs --kernel) or word-length.
    #[arg(long)]
    pub psi: Option<String>,
    /// cnd or not-cnd.
    #[arg(long)]
    pub expect: Option<String>,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeparateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub kernel: KernelOpts,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub max_tries: Option<usize>,
    /// separated or not-separated.
    #[arg(long)]
    pub expect: Option<String>,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LiftArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub kernel: KernelOpts,
    /// exp, geometric or explicit.
    #[arg(long)]
    pub series: Option<String>,
    /// Parameter of the exp series.
    #[arg(long)]
    pub lift_t: Option<f64>,
    /// Comma-separated coefficients of an explicit series.
    #[arg(long, value_delimiter = ',')]
    pub coefficients: Option<Vec<f64>>,
    /// Evaluate by partial sums with at most this many terms.
    #[arg(long)]
    pub max_terms: Option<usize>,
    /// Tail bound required of partial sums.
    #[arg(long)]
    pub tail_tol: Option<f64>,
    /// strictly-positive, psd or indefinite.
    #[arg(long)]
    pub expect: Option<String>,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmbedArgs {
    /// Word file with an `N=<k>` header.
    #[arg(long)]
    pub words: Option<PathBuf>,
    /// Emit a CSV of pairwise distances instead of the embeddings.
    #[arg(long)]
    #[serde(default)]
    pub pairs: bool,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApproximateArgs {
    /// Experiment JSON (see the README for its keys).
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// sin_pi, square or exp.
    #[arg(long)]
    pub target: Option<String>,
    /// File of `x₁ … x_d f` lines covering both grids.
    #[arg(long)]
    pub samples: Option<PathBuf>,
    /// JSON report path.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// CSV of validation samples (x, f, model, error).
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Exit 1 if the sup error exceeds this bound.
    #[arg(long)]
    pub max_sup_error: Option<f64>,
}
