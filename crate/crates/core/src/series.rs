//! Power series `φ(z) = Σ aₙ zⁿ` with positive coefficients applied to
//! kernels, scalar-wise: the lifted kernel is `(x, y) ↦ φ(k(x, y))`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{KernelSpec, Point};

/// Values of `k(x, x)` must stay this far below a radius of convergence 1.
pub const RADIUS_MARGIN: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PowerSeries {
    /// `exp(t z)`, coefficients `tⁿ / n!`.
    Exp { t: f64 },
    /// `1 / (1 − z)`, all coefficients one.
    Geometric,
    /// A finite polynomial `Σ aₙ zⁿ`.
    Explicit { coefficients: Vec<f64> },
}

impl PowerSeries {
    pub fn validate(&self) -> Result<()> {
        match self {
            PowerSeries::Exp { t } if !(t.is_finite() && *t > 0.0) => Err(Error::InvalidParameter(
                format!("exp series needs t > 0, got {t}"),
            )),
            PowerSeries::Explicit { coefficients } if coefficients.is_empty() => Err(
                Error::InvalidParameter("explicit series needs coefficients".to_string()),
            ),
            PowerSeries::Explicit { coefficients }
                if coefficients.iter().any(|a| !(a.is_finite() && *a > 0.0)) =>
            {
                Err(Error::InvalidParameter(
                    "series coefficients must be positive".to_string(),
                ))
            }
            _ => Ok(()),
        }
    }

    pub fn label(&self) -> String {
        match self {
            PowerSeries::Exp { t } => format!("exp(t={t})"),
            PowerSeries::Geometric => "geometric".to_string(),
            PowerSeries::Explicit { coefficients } => {
                format!("explicit(degree={})", coefficients.len() - 1)
            }
        }
    }

    pub fn radius(&self) -> f64 {
        match self {
            PowerSeries::Geometric => 1.0,
            _ => f64::INFINITY,
        }
    }

    /// Finite series are lifts only: a polynomial with finitely many
    /// positive coefficients does not carry strict positivity.
    pub fn supports_strictness_claims(&self) -> bool {
        !matches!(self, PowerSeries::Explicit { .. })
    }

    /// `aₙ`.
    pub fn coefficient(&self, n: usize) -> f64 {
        match self {
            PowerSeries::Exp { t } => (1..=n).fold(1.0, |acc, k| acc * t / k as f64),
            PowerSeries::Geometric => 1.0,
            PowerSeries::Explicit { coefficients } => coefficients.get(n).copied().unwrap_or(0.0),
        }
    }

    fn inside_radius(&self, c: f64) -> bool {
        c < self.radius() - RADIUS_MARGIN
    }

    /// `φ(z)` via closed forms (Horner for explicit coefficients).
    pub fn closed_form(&self, z: Complex64) -> Result<Complex64> {
        match self {
            PowerSeries::Exp { t } => Ok((z * *t).exp()),
            PowerSeries::Geometric => {
                if !self.inside_radius(z.norm()) {
                    return Err(Error::Divergent(format!(
                        "geometric series at |z| = {}",
                        z.norm()
                    )));
                }
                Ok((Complex64::new(1.0, 0.0) - z).inv())
            }
            PowerSeries::Explicit { coefficients } => Ok(horner(coefficients, z)),
        }
    }

    /// `Σ_{n ≤ max_degree} aₙ zⁿ` by Horner evaluation.
    pub fn partial_sum(&self, z: Complex64, max_degree: usize) -> Complex64 {
        let coefficients: Vec<f64> = match self {
            PowerSeries::Explicit { coefficients } => {
                coefficients.iter().take(max_degree + 1).copied().collect()
            }
            _ => {
                let mut out = Vec::with_capacity(max_degree + 1);
                let mut a = 1.0;
                for n in 0..=max_degree {
                    if n > 0 {
                        a = match self {
                            PowerSeries::Exp { t } => a * t / n as f64,
                            _ => 1.0,
                        };
                    }
                    out.push(a);
                }
                out
            }
        };
        horner(&coefficients, z)
    }

    /// Smallest degree `N ≤ max_terms` whose tail bound at `c` is at most `tol`.
    pub fn truncation_degree(&self, c: f64, tol: f64, max_terms: usize) -> Result<Option<usize>> {
        for n in 0..=max_terms {
            if tail_bound(self, c, n)? <= tol {
                return Ok(Some(n));
            }
        }
        Ok(None)
    }
}

fn horner(coefficients: &[f64], z: Complex64) -> Complex64 {
    coefficients
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
}

/// Upper bound for `|Σ_{n > N} aₙ zⁿ|` whenever `|z| ≤ c`.
///
/// Exp series: `(tc)^{N+1} / (N+1)! · 1 / (1 − tc/(N+2))` when `tc < N+2`,
/// infinite otherwise. Geometric: `c^{N+1} / (1 − c)`. Explicit: the exact
/// finite tail at `c`.
pub fn tail_bound(series: &PowerSeries, c: f64, max_degree: usize) -> Result<f64> {
    series.validate()?;
    if !(c >= 0.0 && c.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "tail bound needs c ≥ 0, got {c}"
        )));
    }
    if c == 0.0 {
        return Ok(0.0);
    }
    let next = max_degree + 1;
    match series {
        PowerSeries::Exp { t } => {
            let x = t * c;
            let ratio = x / (next + 1) as f64;
            if ratio >= 1.0 {
                return Ok(f64::INFINITY);
            }
            let leading = (1..=next).fold(1.0, |acc, k| acc * x / k as f64);
            Ok(leading / (1.0 - ratio))
        }
        PowerSeries::Geometric => {
            if !series.inside_radius(c) {
                return Err(Error::Divergent(format!("geometric series at c = {c}")));
            }
            Ok(c.powi(next as i32) / (1.0 - c))
        }
        PowerSeries::Explicit { coefficients } => Ok(coefficients
            .iter()
            .enumerate()
            .skip(next)
            .map(|(n, a)| a * c.powi(n as i32))
            .sum()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Truncation {
    #[default]
    ClosedForm,
    /// Partial sums with the smallest degree whose tail bound meets
    /// `tail_tolerance`, capped at `max_terms`.
    Terms {
        max_terms: usize,
        tail_tolerance: f64,
    },
}

/// `φ(k)`: the kernel `(x, y) ↦ φ(k(x, y))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiftedKernel {
    pub base: Box<KernelSpec>,
    pub series: PowerSeries,
    #[serde(default)]
    pub truncation: Truncation,
}

impl LiftedKernel {
    pub fn validate(&self) -> Result<()> {
        self.series.validate()?;
        if let Truncation::Terms { tail_tolerance, .. } = self.truncation {
            if !(tail_tolerance > 0.0) {
                return Err(Error::InvalidParameter(
                    "tail tolerance must be positive".to_string(),
                ));
            }
        }
        self.base.validate()
    }

    pub(crate) fn eval_unchecked(&self, x: &Point, y: &Point) -> Result<Complex64> {
        if matches!(self.series, PowerSeries::Geometric) {
            for p in [x, y] {
                let diag = self.base.eval_unchecked(p, p)?.re;
                if !self.series.inside_radius(diag) {
                    return Err(Error::Divergent(format!(
                        "k(x,x) = {diag} outside the radius of convergence"
                    )));
                }
            }
        }
        let z = self.base.eval_unchecked(x, y)?;
        match self.truncation {
            Truncation::ClosedForm => self.series.closed_form(z),
            Truncation::Terms {
                max_terms,
                tail_tolerance,
            } => {
                let degree = self
                    .series
                    .truncation_degree(z.norm(), tail_tolerance, max_terms)?
                    .ok_or_else(|| {
                        Error::Divergent(format!(
                            "tail bound above {tail_tolerance:e} after {max_terms} terms"
                        ))
                    })?;
                Ok(self.series.partial_sum(z, degree))
            }
        }
    }
}

/// Builds the closed-form lift `φ(k)`.
pub fn lift(base: KernelSpec, series: PowerSeries) -> Result<KernelSpec> {
    lift_with(base, series, Truncation::ClosedForm)
}

pub fn lift_with(
    base: KernelSpec,
    series: PowerSeries,
    truncation: Truncation,
) -> Result<KernelSpec> {
    let lifted = LiftedKernel {
        base: Box::new(base),
        series,
        truncation,
    };
    lifted.validate()?;
    Ok(KernelSpec::Lift(Box::new(lifted)))
}

/// `exp(t·k)`.
pub fn exp_lift(base: KernelSpec, t: f64) -> Result<KernelSpec> {
    lift(base, PowerSeries::Exp { t })
}

/// True iff every `k(x, x)` lies strictly inside the radius of convergence.
pub fn check_convergence(series: &PowerSeries, k: &KernelSpec, points: &[Point]) -> bool {
    if series.validate().is_err() {
        return false;
    }
    points.iter().all(|p| match k.eval(p, p) {
        Ok(v) => series.inside_radius(v.re.abs()),
        Err(_) => false,
    })
}

/// Evaluates the lifted kernel at `(x, y)`.
pub fn lift_eval(lifted: &LiftedKernel, x: &Point, y: &Point) -> Result<Complex64> {
    KernelSpec::Lift(Box::new(lifted.clone())).eval(x, y)
}

/// The kernel `(x, y) ↦ e^{−t k(x,x)} · e^{2t Re k(x,y)} · e^{−t k(y,y)}`,
/// i.e. `exp(−t‖k_x − k_y‖²)`.
pub fn gaussian_from_lift(k: KernelSpec, t: f64) -> Result<KernelSpec> {
    let out = KernelSpec::FeatureGaussian {
        base: Box::new(k),
        t,
    };
    out.validate()?;
    Ok(out)
}
