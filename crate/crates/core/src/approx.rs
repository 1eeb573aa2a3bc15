//! Sup-norm approximation of continuous functions on a box by finite sums
//! `Σ dⱼ exp k(x, aⱼ)` or Gaussian bumps `Σ cⱼ e^{−t‖x − aⱼ‖²}`.
//!
//! The compact set is represented by two lattices: coefficients are fitted
//! by ridge-regularized least squares on a training lattice and the error is
//! measured on a strictly finer validation lattice.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{find_duplicate, KernelSpec, Point};
use crate::positivity::{find_separating, DEFAULT_MAX_TRIES};
use crate::zoo;

pub const DEFAULT_GRID_CAP: usize = 1_000_000;
/// Default ridge is this times `trace(AᵀA) / N`.
pub const DEFAULT_RIDGE_FACTOR: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridRole {
    Training,
    Validation,
}

/// A lattice over an axis-aligned box, including both endpoints of every
/// axis. Each axis `[lo, hi]` is split into `⌈(hi − lo)/h⌉` equal intervals,
/// so the realized spacing never exceeds `h`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompactGrid {
    pub bounds: Vec<(f64, f64)>,
    pub spacing: f64,
    pub role: GridRole,
    #[serde(skip)]
    points: Vec<Vec<f64>>,
}

impl CompactGrid {
    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn sample<F: Fn(&[f64]) -> f64>(&self, f: F) -> Vec<f64> {
        self.points.iter().map(|x| f(x)).collect()
    }
}

fn axis_nodes(lo: f64, hi: f64, h: f64) -> Vec<f64> {
    let intervals = (((hi - lo) / h) - 1e-9).ceil().max(1.0) as usize;
    (0..=intervals)
        .map(|k| {
            if k == intervals {
                hi
            } else {
                lo + (hi - lo) * (k as f64 / intervals as f64)
            }
        })
        .collect()
}

pub fn sample_grid(bounds: &[(f64, f64)], h: f64, role: GridRole) -> Result<CompactGrid> {
    sample_grid_capped(bounds, h, role, DEFAULT_GRID_CAP)
}

pub fn sample_grid_capped(
    bounds: &[(f64, f64)],
    h: f64,
    role: GridRole,
    cap: usize,
) -> Result<CompactGrid> {
    if bounds.is_empty() {
        return Err(Error::InvalidParameter("box has no axes".to_string()));
    }
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "spacing must be positive, got {h}"
        )));
    }
    if let Some(&(lo, hi)) = bounds
        .iter()
        .find(|(lo, hi)| !(lo < hi) || !lo.is_finite() || !hi.is_finite())
    {
        return Err(Error::InvalidParameter(format!("empty axis [{lo}, {hi}]")));
    }
    let axes: Vec<Vec<f64>> = bounds
        .iter()
        .map(|&(lo, hi)| axis_nodes(lo, hi, h))
        .collect();
    let total = axes
        .iter()
        .try_fold(1usize, |acc, a| acc.checked_mul(a.len()))
        .unwrap_or(usize::MAX);
    if total > cap {
        return Err(Error::GridTooLarge(total));
    }
    let mut points = vec![Vec::with_capacity(axes.len())];
    for axis in &axes {
        points = points
            .into_iter()
            .flat_map(|prefix| {
                axis.iter().map(move |&x| {
                    let mut p = prefix.clone();
                    p.push(x);
                    p
                })
            })
            .collect();
    }
    Ok(CompactGrid {
        bounds: bounds.to_vec(),
        spacing: h,
        role,
        points,
    })
}

/// `count` equispaced nodes per axis over the box (a single midpoint when
/// `count == 1`).
pub fn equispaced_centers(bounds: &[(f64, f64)], count: usize) -> Result<Vec<Vec<f64>>> {
    if count == 0 {
        return Err(Error::InvalidParameter(
            "need at least one center".to_string(),
        ));
    }
    let axes: Vec<Vec<f64>> = bounds
        .iter()
        .map(|&(lo, hi)| {
            if count == 1 {
                vec![0.5 * (lo + hi)]
            } else {
                (0..count)
                    .map(|k| {
                        if k + 1 == count {
                            hi
                        } else {
                            lo + (hi - lo) * (k as f64 / (count - 1) as f64)
                        }
                    })
                    .collect()
            }
        })
        .collect();
    let mut out = vec![Vec::new()];
    for axis in &axes {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                axis.iter().map(move |&x| {
                    let mut p = prefix.clone();
                    p.push(x);
                    p
                })
            })
            .collect();
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelForm {
    /// `Σ dⱼ exp k(x, aⱼ)` for a real-valued base kernel `k`.
    ExpKernel,
    /// `Σ cⱼ e^{−t‖x − aⱼ‖²}`; the kernel must be `gaussian(t)`.
    GaussianBump,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitDiagnostics {
    pub lambda: f64,
    /// `λ_max / λ_min` of the regularized normal matrix.
    pub condition_estimate: f64,
    pub training_points: usize,
    pub training_spacing: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproxModel {
    pub form: ModelForm,
    pub kernel: KernelSpec,
    pub centers: Vec<Vec<f64>>,
    pub coefficients: Vec<f64>,
    pub fit: Option<FitDiagnostics>,
    #[serde(skip)]
    center_points: Vec<Point>,
}

fn check_form(form: ModelForm, kernel: &KernelSpec) -> Result<()> {
    kernel.validate()?;
    match form {
        ModelForm::GaussianBump if !matches!(kernel, KernelSpec::Gaussian { .. }) => {
            Err(Error::WrongForm(format!(
                "Gaussian bumps need a gaussian kernel, got {kernel}"
            )))
        }
        ModelForm::ExpKernel if !kernel.is_real_on(crate::kernel::Domain::RealVector) => {
            Err(Error::NonRealKernel(kernel.label()))
        }
        _ if !kernel.accepts(crate::kernel::Domain::RealVector) => Err(Error::DomainMismatch {
            expected: "real_vector".to_string(),
            found: kernel
                .domains()
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join("|"),
        }),
        _ => Ok(()),
    }
}

impl ApproxModel {
    pub fn new(
        form: ModelForm,
        kernel: KernelSpec,
        centers: Vec<Vec<f64>>,
        coefficients: Vec<f64>,
    ) -> Result<Self> {
        check_form(form, &kernel)?;
        if centers.is_empty() {
            return Err(Error::InvalidParameter(
                "model needs at least one center".to_string(),
            ));
        }
        if centers.len() != coefficients.len() {
            return Err(Error::DimensionMismatch {
                left: centers.len(),
                right: coefficients.len(),
            });
        }
        let dim = centers[0].len();
        if let Some(bad) = centers.iter().find(|c| c.len() != dim) {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: bad.len(),
            });
        }
        let center_points = centers.iter().map(|c| Point::real(c.clone())).collect();
        Ok(Self {
            form,
            kernel,
            centers,
            coefficients,
            fit: None,
            center_points,
        })
    }

    pub fn dim(&self) -> usize {
        self.centers[0].len()
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    fn feature(&self, x: &Point, j: usize) -> Result<f64> {
        match (self.form, &self.kernel, x) {
            (ModelForm::GaussianBump, KernelSpec::Gaussian { t }, Point::Real(v)) => {
                zoo::gaussian_value(*t, v, &self.centers[j])
            }
            _ => Ok(self.kernel.eval_real(x, &self.center_points[j])?.exp()),
        }
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: x.len(),
            });
        }
        Ok(())
    }

    /// The finite sum at `x`.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x)?;
        let p = Point::real(x.to_vec());
        let mut sum = 0.0;
        for (j, c) in self.coefficients.iter().enumerate() {
            sum += c * self.feature(&p, j)?;
        }
        Ok(sum)
    }

    /// `M_K = sup_K exp(k̃(x,x)/2)` for the exponent kernel `k̃` of the model:
    /// the base kernel itself, or `2t⟨x, y⟩` for Gaussian bumps.
    pub fn exp_kernel_bound(&self, grid: &CompactGrid) -> Result<f64> {
        let mut sup = 0.0_f64;
        for x in grid.points() {
            let diag = match (&self.form, &self.kernel) {
                (ModelForm::GaussianBump, KernelSpec::Gaussian { t }) => {
                    2.0 * t * x.iter().map(|v| v * v).sum::<f64>()
                }
                _ => {
                    let p = Point::real(x.clone());
                    self.kernel.eval_real(&p, &p)?
                }
            };
            sup = sup.max((0.5 * diag).exp());
        }
        Ok(sup)
    }
}

pub fn eval_model(m: &ApproxModel, x: &[f64]) -> Result<f64> {
    m.eval(x)
}

/// Ridge least squares: minimizes `Σ (f − model)² + λ‖c‖²` through the
/// normal equations `(AᵀA + λI)c = Aᵀf`. The default `λ` is
/// `1e-10·trace(AᵀA)/N`.
pub fn fit(
    training: &CompactGrid,
    f_values: &[f64],
    centers: Vec<Vec<f64>>,
    kernel: &KernelSpec,
    form: ModelForm,
    lambda: Option<f64>,
) -> Result<ApproxModel> {
    if f_values.len() != training.len() {
        return Err(Error::DimensionMismatch {
            left: training.len(),
            right: f_values.len(),
        });
    }
    if let Some(l) = lambda {
        if !(l >= 0.0 && l.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "ridge must be ≥ 0, got {l}"
            )));
        }
    }
    let n = centers.len();
    let mut model = ApproxModel::new(form, kernel.clone(), centers, vec![0.0; n])?;
    if model.dim() != training.dim() {
        return Err(Error::DimensionMismatch {
            left: training.dim(),
            right: model.dim(),
        });
    }
    if let Some((i, j)) = find_duplicate(&model.center_points)? {
        return Err(Error::DuplicatePoints { i, j });
    }

    let rows: Vec<Vec<f64>> = training
        .points()
        .par_iter()
        .map(|x| {
            let p = Point::real(x.clone());
            (0..n)
                .map(|j| model.feature(&p, j))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    let design = DMatrix::from_fn(rows.len(), n, |i, j| rows[i][j]);
    let normal = design.transpose() * &design;
    let rhs = design.transpose() * DVector::from_column_slice(f_values);

    let lambda = lambda.unwrap_or(DEFAULT_RIDGE_FACTOR * normal.trace() / n as f64);
    let regularized = normal + DMatrix::identity(n, n) * lambda;
    let eig = SymmetricEigen::try_new(regularized.clone(), f64::EPSILON, 100_000)
        .ok_or(Error::EigenFailure)?;
    let (lo, hi) = eig
        .eigenvalues
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let condition_estimate = if lo > 0.0 { hi / lo } else { f64::INFINITY };
    let coefficients = regularized
        .cholesky()
        .ok_or_else(|| {
            Error::SolveFailure(format!(
                "normal matrix not positive definite (λ = {lambda:e}, min eigenvalue {lo:e})"
            ))
        })?
        .solve(&rhs);
    if coefficients.iter().any(|c| !c.is_finite()) {
        return Err(Error::SolveFailure("non-finite coefficients".to_string()));
    }
    model.coefficients = coefficients.iter().copied().collect();
    model.fit = Some(FitDiagnostics {
        lambda,
        condition_estimate,
        training_points: training.len(),
        training_spacing: training.spacing,
    });
    Ok(model)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproxReport {
    pub sup_error: f64,
    pub rms_error: f64,
    pub condition_estimate: f64,
    pub lambda: f64,
    pub n_centers: usize,
    pub training_points: usize,
    pub validation_points: usize,
    /// `M_K = sup_K exp(k̃(x,x)/2)` over the validation grid.
    pub m_k: f64,
}

/// Model values on every grid point, in grid order.
pub fn evaluate_on_grid(m: &ApproxModel, grid: &CompactGrid) -> Result<Vec<f64>> {
    grid.points().par_iter().map(|x| m.eval(x)).collect()
}

/// Error of `m` against `f_values` on a validation grid strictly finer than
/// the model's training grid.
pub fn sup_error(
    m: &ApproxModel,
    validation: &CompactGrid,
    f_values: &[f64],
) -> Result<ApproxReport> {
    if validation.role != GridRole::Validation {
        return Err(Error::InvalidParameter(
            "errors are measured on a validation grid".to_string(),
        ));
    }
    if f_values.len() != validation.len() {
        return Err(Error::DimensionMismatch {
            left: validation.len(),
            right: f_values.len(),
        });
    }
    if let Some(fit) = &m.fit {
        if !(validation.spacing < fit.training_spacing) {
            return Err(Error::InvalidParameter(format!(
                "validation spacing {} is not finer than training spacing {}",
                validation.spacing, fit.training_spacing
            )));
        }
    }
    let model_values = evaluate_on_grid(m, validation)?;
    let (mut sup, mut sq) = (0.0_f64, 0.0_f64);
    for (f, v) in f_values.iter().zip(&model_values) {
        let e = (f - v).abs();
        sup = sup.max(e);
        sq += e * e;
    }
    let (lambda, condition_estimate, training_points) = match &m.fit {
        Some(fit) => (fit.lambda, fit.condition_estimate, fit.training_points),
        None => (0.0, f64::NAN, 0),
    };
    Ok(ApproxReport {
        sup_error: sup,
        rms_error: (sq / validation.len() as f64).sqrt(),
        condition_estimate,
        lambda,
        n_centers: m.len(),
        training_points,
        validation_points: validation.len(),
        m_k: m.exp_kernel_bound(validation)?,
    })
}

/// Converts `Σ dⱼ exp(2⟨x, aⱼ⟩)` into Gaussian bumps `Σ cⱼ e^{−‖x − aⱼ‖²}`
/// with `cⱼ = dⱼ e^{‖aⱼ‖²}`, so that `bump(x) = e^{−‖x‖²}·exp_model(x)`.
pub fn rescale_exp_to_bump(m: &ApproxModel) -> Result<ApproxModel> {
    let scale_ok = matches!(m.kernel, KernelSpec::Linear { scale } if scale == 2.0);
    if m.form != ModelForm::ExpKernel || !scale_ok {
        return Err(Error::WrongForm(format!(
            "expected exp-kernel model over 2⟨x, y⟩, got {:?} over {}",
            m.form, m.kernel
        )));
    }
    let coefficients = m
        .centers
        .iter()
        .zip(&m.coefficients)
        .map(|(a, d)| d * a.iter().map(|v| v * v).sum::<f64>().exp())
        .collect();
    let mut out = ApproxModel::new(
        ModelForm::GaussianBump,
        KernelSpec::Gaussian { t: 1.0 },
        m.centers.clone(),
        coefficients,
    )?;
    out.fit = m.fit.clone();
    Ok(out)
}

/// Named target functions for experiment configs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetFunction {
    /// `Π sin(π xᵢ)`.
    SinPi,
    /// `‖x‖²`.
    Square,
    /// `exp(Σ xᵢ)`.
    Exp,
}

impl TargetFunction {
    pub fn eval(self, x: &[f64]) -> f64 {
        match self {
            TargetFunction::SinPi => x.iter().map(|v| (std::f64::consts::PI * v).sin()).product(),
            TargetFunction::Square => x.iter().map(|v| v * v).sum(),
            TargetFunction::Exp => x.iter().sum::<f64>().exp(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CenterSpec {
    /// Equispaced nodes per axis over the box.
    Count(usize),
    Explicit(Vec<Vec<f64>>),
}

fn default_kernel() -> KernelSpec {
    KernelSpec::Gaussian { t: 1.0 }
}

fn default_form() -> ModelForm {
    ModelForm::GaussianBump
}

/// Experiment configuration, minus the target which callers resolve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(rename = "box")]
    pub bounds: Vec<(f64, f64)>,
    pub train_h: f64,
    pub validate_h: f64,
    pub centers: CenterSpec,
    #[serde(default = "default_kernel")]
    pub kernel: KernelSpec,
    #[serde(default = "default_form")]
    pub form: ModelForm,
    #[serde(default)]
    pub lambda: Option<f64>,
    #[serde(default)]
    pub grid_cap: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridSample {
    pub x: Vec<f64>,
    pub f: f64,
    pub model: f64,
    pub error: f64,
}

/// Whether a random functional on the center set separates the centers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparationCheck {
    pub separated: bool,
    pub min_pairwise_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentOutcome {
    pub model: ApproxModel,
    pub report: ApproxReport,
    pub separation: SeparationCheck,
    #[serde(skip)]
    pub samples: Vec<GridSample>,
}

/// Fits on the training lattice and measures on the validation lattice.
pub fn run_experiment<F>(config: &ExperimentConfig, target: F) -> Result<ExperimentOutcome>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    let cap = config.grid_cap.unwrap_or(DEFAULT_GRID_CAP);
    if !(config.validate_h < config.train_h) {
        return Err(Error::InvalidParameter(
            "validate_h must be smaller than train_h".to_string(),
        ));
    }
    let training = sample_grid_capped(&config.bounds, config.train_h, GridRole::Training, cap)?;
    let validation =
        sample_grid_capped(&config.bounds, config.validate_h, GridRole::Validation, cap)?;
    let centers = match &config.centers {
        CenterSpec::Count(n) => equispaced_centers(&config.bounds, *n)?,
        CenterSpec::Explicit(list) => list.clone(),
    };
    let train_f = training
        .points()
        .iter()
        .map(|x| target(x))
        .collect::<Result<Vec<_>>>()?;
    let model = fit(
        &training,
        &train_f,
        centers,
        &config.kernel,
        config.form,
        config.lambda,
    )?;
    let valid_f = validation
        .points()
        .iter()
        .map(|x| target(x))
        .collect::<Result<Vec<_>>>()?;
    let report = sup_error(&model, &validation, &valid_f)?;
    let model_values = evaluate_on_grid(&model, &validation)?;
    let samples = validation
        .points()
        .iter()
        .zip(valid_f.iter().zip(&model_values))
        .map(|(x, (&f, &m))| GridSample {
            x: x.clone(),
            f,
            model: m,
            error: f - m,
        })
        .collect();

    let separation =
        match find_separating(&config.kernel, &model.center_points, 0, DEFAULT_MAX_TRIES) {
            Ok(psi) => SeparationCheck {
                separated: true,
                min_pairwise_gap: psi.min_pairwise_gap,
            },
            Err(Error::SeparationFailed { best_gap, .. }) => SeparationCheck {
                separated: false,
                min_pairwise_gap: best_gap,
            },
            Err(e) => return Err(e),
        };
    Ok(ExperimentOutcome {
        model,
        report,
        separation,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo::{gaussian, linear};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn grid_examples() {
        let g = sample_grid(&[(0.0, 1.0)], 0.5, GridRole::Training).unwrap();
        assert_eq!(g.points(), &[vec![0.0], vec![0.5], vec![1.0]]);
        let sq = sample_grid(&[(-1.0, 1.0), (-1.0, 1.0)], 1.0, GridRole::Training).unwrap();
        assert_eq!(sq.len(), 9);
        let coarse = sample_grid(&[(0.0, 1.0), (2.0, 3.0)], 5.0, GridRole::Training).unwrap();
        assert_eq!(coarse.len(), 4);
        let fine = sample_grid(&[(-1.0, 1.0)], 0.01, GridRole::Training).unwrap();
        assert_eq!(fine.len(), 201);
        assert_eq!(fine.points()[100], vec![0.0]);
        assert_eq!(fine.points()[200], vec![1.0]);
    }

    #[test]
    fn grid_errors() {
        assert!(matches!(
            sample_grid(&[(0.0, 1.0)], 0.0, GridRole::Training),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            sample_grid(&[(1.0, 1.0)], 0.1, GridRole::Training),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            sample_grid_capped(&[(0.0, 1.0), (0.0, 1.0)], 0.01, GridRole::Training, 1000),
            Err(Error::GridTooLarge(10201))
        ));
    }

    #[test]
    fn exact_single_bump() {
        let a = vec![0.3];
        let grid = sample_grid(&[(-1.0, 1.0)], 0.05, GridRole::Training).unwrap();
        let f = grid.sample(|x| (-(x[0] - 0.3) * (x[0] - 0.3)).exp());
        let k = gaussian(1.0).unwrap();
        let m = fit(&grid, &f, vec![a], &k, ModelForm::GaussianBump, Some(0.0)).unwrap();
        assert!((m.coefficients[0] - 1.0).abs() < 1e-12);
        let val = sample_grid(&[(-1.0, 1.0)], 0.01, GridRole::Validation).unwrap();
        let vf = val.sample(|x| (-(x[0] - 0.3) * (x[0] - 0.3)).exp());
        assert!(sup_error(&m, &val, &vf).unwrap().sup_error <= 1e-12);
    }

    #[test]
    fn zero_target_gives_zero_coefficients() {
        let grid = sample_grid(&[(-1.0, 1.0)], 0.1, GridRole::Training).unwrap();
        let f = vec![0.0; grid.len()];
        let centers = equispaced_centers(&[(-1.0, 1.0)], 5).unwrap();
        let m = fit(
            &grid,
            &f,
            centers,
            &gaussian(1.0).unwrap(),
            ModelForm::GaussianBump,
            None,
        )
        .unwrap();
        assert!(m.coefficients.iter().all(|&c| c == 0.0));
    }

    #[test]
    fn fit_errors() {
        let grid = sample_grid(&[(-1.0, 1.0)], 0.1, GridRole::Training).unwrap();
        let f = vec![0.0; grid.len()];
        let g = gaussian(1.0).unwrap();
        assert!(matches!(
            fit(
                &grid,
                &f,
                vec![vec![0.0], vec![0.0]],
                &g,
                ModelForm::GaussianBump,
                None
            ),
            Err(Error::DuplicatePoints { .. })
        ));
        assert!(matches!(
            fit(
                &grid,
                &f,
                vec![vec![0.0]],
                &linear(1.0).unwrap(),
                ModelForm::GaussianBump,
                None
            ),
            Err(Error::WrongForm(_))
        ));
        assert!(matches!(
            fit(
                &grid,
                &f,
                vec![vec![0.0]],
                &KernelSpec::PhBase,
                ModelForm::ExpKernel,
                None
            ),
            Err(Error::DomainMismatch { .. })
        ));
        assert!(matches!(
            fit(
                &grid,
                &f[1..],
                vec![vec![0.0]],
                &g,
                ModelForm::GaussianBump,
                None
            ),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(fit(
            &grid,
            &f,
            vec![vec![0.0]],
            &g,
            ModelForm::GaussianBump,
            Some(-1.0)
        )
        .is_err());
    }

    #[test]
    fn eval_model_examples() {
        let g = gaussian(1.0).unwrap();
        let zero = ApproxModel::new(
            ModelForm::GaussianBump,
            g.clone(),
            vec![vec![0.0]],
            vec![0.0],
        )
        .unwrap();
        assert_eq!(eval_model(&zero, &[0.4]).unwrap(), 0.0);
        let one = ApproxModel::new(
            ModelForm::GaussianBump,
            g.clone(),
            vec![vec![0.2]],
            vec![3.5],
        )
        .unwrap();
        assert_eq!(eval_model(&one, &[0.2]).unwrap(), 3.5);
        assert!(matches!(
            eval_model(&one, &[0.2, 0.1]),
            Err(Error::DimensionMismatch { .. })
        ));

        let left = ApproxModel::new(
            ModelForm::GaussianBump,
            g.clone(),
            vec![vec![-0.5]],
            vec![1.5],
        )
        .unwrap();
        let both = ApproxModel::new(
            ModelForm::GaussianBump,
            g,
            vec![vec![0.2], vec![-0.5]],
            vec![3.5, 1.5],
        )
        .unwrap();
        for &x in &[-1.0, -0.1, 0.33, 0.9] {
            let sum = one.eval(&[x]).unwrap() + left.eval(&[x]).unwrap();
            assert!((both.eval(&[x]).unwrap() - sum).abs() < 1e-15);
        }
    }

    #[test]
    fn sup_error_examples() {
        let g = gaussian(1.0).unwrap();
        let zero = ApproxModel::new(
            ModelForm::GaussianBump,
            g.clone(),
            vec![vec![0.0]],
            vec![0.0],
        )
        .unwrap();
        let val = sample_grid(&[(0.0, 1.0)], 0.1, GridRole::Validation).unwrap();
        let ones = vec![1.0; val.len()];
        assert_eq!(sup_error(&zero, &val, &ones).unwrap().sup_error, 1.0);
        let exact = evaluate_on_grid(&zero, &val).unwrap();
        assert_eq!(sup_error(&zero, &val, &exact).unwrap().sup_error, 0.0);

        let train = sample_grid(&[(0.0, 1.0)], 0.1, GridRole::Training).unwrap();
        assert!(sup_error(&zero, &train, &ones).is_err());
    }

    #[test]
    fn rescaling_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let k = linear(2.0).unwrap();
        let centers: Vec<Vec<f64>> = (0..5)
            .map(|_| vec![rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)])
            .collect();
        let d: Vec<f64> = (0..5).map(|_| rng.random_range(-2.0..2.0)).collect();
        let exp_model = ApproxModel::new(ModelForm::ExpKernel, k, centers, d).unwrap();
        let bump = rescale_exp_to_bump(&exp_model).unwrap();
        for _ in 0..100 {
            let x = [rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5)];
            let e = exp_model.eval(&x).unwrap();
            let lhs = bump.eval(&x).unwrap();
            let rhs = (-(x[0] * x[0] + x[1] * x[1])).exp() * e;
            assert!((lhs - rhs).abs() <= 1e-13 * (1.0 + e.abs()));
        }
    }

    #[test]
    fn rescaling_examples() {
        let k = linear(2.0).unwrap();
        let zero =
            ApproxModel::new(ModelForm::ExpKernel, k.clone(), vec![vec![0.5]], vec![0.0]).unwrap();
        assert_eq!(rescale_exp_to_bump(&zero).unwrap().coefficients, vec![0.0]);
        let origin = ApproxModel::new(ModelForm::ExpKernel, k, vec![vec![0.0]], vec![2.5]).unwrap();
        assert_eq!(
            rescale_exp_to_bump(&origin).unwrap().coefficients,
            vec![2.5]
        );
        let wrong = ApproxModel::new(
            ModelForm::ExpKernel,
            linear(1.0).unwrap(),
            vec![vec![0.0]],
            vec![1.0],
        )
        .unwrap();
        assert!(matches!(
            rescale_exp_to_bump(&wrong),
            Err(Error::WrongForm(_))
        ));
    }

    #[test]
    fn experiment_config_schema() {
        let cfg: ExperimentConfig = serde_json::from_str(
            r#"{"box":[[-1,1]],"train_h":0.01,"validate_h":0.001,"centers":{"count":15},
                "kernel":{"name":"gaussian","parameters":{"t":1.0}},"form":"gaussian_bump"}"#,
        )
        .unwrap();
        assert_eq!(cfg.centers, CenterSpec::Count(15));
        assert_eq!(cfg.lambda, None);
        let out = run_experiment(&cfg, |x| Ok(TargetFunction::SinPi.eval(x))).unwrap();
        assert_eq!(out.report.validation_points, 2001);
        assert_eq!(out.samples.len(), 2001);
        assert!(out.separation.separated);
    }
}
