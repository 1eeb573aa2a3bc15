//! Eigenvalue certificates for Gram matrices (positive semidefinite, strictly
//! positive, conditionally negative).
//!
//! The separation search looks for a seeded functional `ψ = Σ cⱼ k_{xⱼ}` with
//! pairwise distinct values on a point set; the Vandermonde test then checks
//! those values.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::kernel::{find_duplicate, gram, GramMatrix, KernelSpec, Point};

/// Relative asymmetry tolerated before a matrix is declared non-Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Relative floor used for default positivity tolerances.
pub const RELATIVE_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_TRIES: usize = 64;

const MAX_EIGEN_ITERATIONS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PdVerdict {
    StrictlyPositive,
    PositiveSemidefinite,
    Indefinite,
    NotHermitian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CertificationMethod {
    Eigendecomposition,
    PivotedCholesky,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PdCertificate {
    pub verdict: PdVerdict,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    pub tolerance: f64,
    pub method: CertificationMethod,
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CndVerdict {
    ConditionallyNegative,
    NotConditionallyNegative,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CndCertificate {
    pub verdict: CndVerdict,
    /// Largest eigenvalue of the form restricted to `Σ cⱼ = 0`; `−∞` when
    /// that subspace is trivial (`n = 1`).
    pub max_projected_eigenvalue: f64,
    pub tolerance: f64,
    pub n: usize,
}

/// Eigenvalues of a Hermitian matrix in ascending order. Only the lower
/// triangle is read.
pub fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Result<Vec<f64>> {
    if m.nrows() == 0 {
        return Ok(Vec::new());
    }
    let eig = SymmetricEigen::try_new(m.clone(), f64::EPSILON, MAX_EIGEN_ITERATIONS)
        .ok_or(Error::EigenFailure)?;
    let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::EigenFailure);
    }
    values.sort_by(f64::total_cmp);
    Ok(values)
}

fn hermitian_scale(g: &GramMatrix) -> f64 {
    g.max_abs().max(1.0)
}

/// Eigendecomposition-backed PSD / strict PD verdict. The default tolerance
/// is `1e-10·max(1, λ_max)`.
pub fn certify_psd(g: &GramMatrix, tol: Option<f64>) -> Result<PdCertificate> {
    let n = g.dim();
    if n == 0 {
        return Err(Error::InvalidParameter("empty matrix".to_string()));
    }
    if let Some(t) = tol {
        if !(t > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "tolerance must be positive, got {t}"
            )));
        }
    }
    if g.hermitian_defect() > HERMITIAN_TOL * hermitian_scale(g) {
        return Ok(PdCertificate {
            verdict: PdVerdict::NotHermitian,
            min_eigenvalue: f64::NAN,
            max_eigenvalue: f64::NAN,
            tolerance: tol.unwrap_or(f64::NAN),
            method: CertificationMethod::Eigendecomposition,
            n,
        });
    }
    let eigenvalues = hermitian_eigenvalues(g.entries())?;
    let min = eigenvalues[0];
    let max = eigenvalues[n - 1];
    let tolerance = tol.unwrap_or(RELATIVE_TOL * max.max(1.0));
    let verdict = if min > tolerance {
        PdVerdict::StrictlyPositive
    } else if min < -tolerance {
        PdVerdict::Indefinite
    } else {
        PdVerdict::PositiveSemidefinite
    };
    Ok(PdCertificate {
        verdict,
        min_eigenvalue: min,
        max_eigenvalue: max,
        tolerance,
        method: CertificationMethod::Eigendecomposition,
        n,
    })
}

/// `certify_psd(gram(k, points))` over pairwise distinct points.
pub fn certify_strict(k: &KernelSpec, points: &[Point], tol: Option<f64>) -> Result<PdCertificate> {
    if let Some((i, j)) = find_duplicate(points)? {
        return Err(Error::DuplicatePoints { i, j });
    }
    certify_psd(&gram(k, points)?, tol)
}

/// Outcome of the pivoted Cholesky fast path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FastVerdict {
    StrictlyPositive { min_pivot: f64 },
    Unknown,
}

/// Pivoted Cholesky that only ever confirms strict positivity: every pivot
/// must exceed `tol` (default `1e-10·max(1, max diagonal)`). Anything else is
/// `Unknown` and should go through [`certify_psd`].
pub fn cholesky_fast_path(g: &GramMatrix, tol: Option<f64>) -> FastVerdict {
    let n = g.dim();
    if n == 0 || g.hermitian_defect() > HERMITIAN_TOL * hermitian_scale(g) {
        return FastVerdict::Unknown;
    }
    let mut a = g.entries().clone();
    let max_diag = (0..n)
        .map(|i| a[(i, i)].re)
        .fold(f64::NEG_INFINITY, f64::max);
    let tol = tol.unwrap_or(RELATIVE_TOL * max_diag.max(1.0));
    let mut min_pivot = f64::INFINITY;
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re))
            .unwrap_or(k);
        a.swap_rows(k, p);
        a.swap_columns(k, p);
        let pivot = a[(k, k)].re;
        if !(pivot > tol) {
            return FastVerdict::Unknown;
        }
        min_pivot = min_pivot.min(pivot);
        let root = pivot.sqrt();
        for i in k + 1..n {
            a[(i, k)] /= root;
        }
        for j in k + 1..n {
            let ljk = a[(j, k)];
            for i in j..n {
                let update = a[(i, k)] * ljk.conj();
                a[(i, j)] -= update;
            }
        }
    }
    FastVerdict::StrictlyPositive { min_pivot }
}

/// Orthonormal basis (as columns) of `{c ∈ ℝⁿ : Σ cⱼ = 0}`: the last `n − 1`
/// columns of the Householder reflection exchanging `1/√n` and `−e₁`.
pub fn sum_zero_basis(n: usize) -> DMatrix<f64> {
    if n < 2 {
        return DMatrix::zeros(n, 0);
    }
    let u = 1.0 / (n as f64).sqrt();
    let mut v = vec![u; n];
    v[0] += 1.0;
    let vv: f64 = v.iter().map(|x| x * x).sum();
    DMatrix::from_fn(n, n - 1, |i, j| {
        let col = j + 1;
        let delta = if i == col { 1.0 } else { 0.0 };
        delta - 2.0 * v[i] * v[col] / vv
    })
}

/// Conditional negative definiteness: the quadratic form restricted to the
/// sum-zero subspace must have all eigenvalues `≤ tol` (default
/// `1e-10·max(1, max |m_ij|)`).
pub fn certify_cnd(m: &GramMatrix, tol: Option<f64>) -> Result<CndCertificate> {
    let n = m.dim();
    if n == 0 {
        return Err(Error::InvalidParameter("empty matrix".to_string()));
    }
    let scale = hermitian_scale(m);
    let defect = m.hermitian_defect();
    let diag_imag = (0..n).map(|i| m.get(i, i).im.abs()).fold(0.0, f64::max);
    if defect > HERMITIAN_TOL * scale || diag_imag > HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian {
            asymmetry: defect.max(diag_imag),
        });
    }
    let tolerance = tol.unwrap_or(RELATIVE_TOL * scale);
    let q = sum_zero_basis(n).map(|x| Complex64::new(x, 0.0));
    let projected = q.adjoint() * m.entries() * &q;
    let max = hermitian_eigenvalues(&projected)?
        .last()
        .copied()
        .unwrap_or(f64::NEG_INFINITY);
    Ok(CndCertificate {
        verdict: if max <= tolerance {
            CndVerdict::ConditionallyNegative
        } else {
            CndVerdict::NotConditionallyNegative
        },
        max_projected_eigenvalue: max,
        tolerance,
        n,
    })
}

/// Entrywise (Schur) product.
pub fn schur_product(a: &GramMatrix, b: &GramMatrix) -> Result<GramMatrix> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    Ok(
        GramMatrix::from_entries(a.entries().component_mul(b.entries()))?
            .with_kernel_label(format!("({})∘({})", a.kernel(), b.kernel())),
    )
}

fn serialize_points<S: Serializer>(points: &[Point], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(points.iter().map(|p| p.to_string()))
}

/// `ψ = Σ cⱼ k_{xⱼ}` together with its values `ψ(xᵢ) = Σⱼ cⱼ k(xᵢ, xⱼ)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparatingFunctional {
    #[serde(serialize_with = "serialize_points")]
    pub points: Vec<Point>,
    pub coefficients: Vec<Complex64>,
    pub values: Vec<Complex64>,
    /// `min_{i<j} |ψ(xᵢ) − ψ(xⱼ)|`, `+∞` for a single point.
    pub min_pairwise_gap: f64,
    /// Random draws consumed; zero for an explicitly supplied functional.
    pub tries: usize,
}

/// Minimum pairwise modulus gap, `+∞` for fewer than two values.
pub fn min_pairwise_gap(values: &[Complex64]) -> f64 {
    let mut gap = f64::INFINITY;
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            gap = gap.min((values[i] - values[j]).norm());
        }
    }
    gap
}

/// Gap values must exceed to count as separated: `1e-10·(1 + max |vᵢ|)`.
pub fn separation_threshold(values: &[Complex64]) -> f64 {
    RELATIVE_TOL * (1.0 + values.iter().map(|v| v.norm()).fold(0.0, f64::max))
}

fn functional_values(g: &GramMatrix, coefficients: &[Complex64]) -> Vec<Complex64> {
    let n = g.dim();
    (0..n)
        .map(|i| (0..n).map(|j| g.get(i, j) * coefficients[j]).sum())
        .collect()
}

/// Evaluates a given functional `Σ cⱼ k_{xⱼ}` on its own base points.
pub fn evaluate_functional(
    k: &KernelSpec,
    points: &[Point],
    coefficients: &[Complex64],
) -> Result<SeparatingFunctional> {
    if coefficients.len() != points.len() {
        return Err(Error::DimensionMismatch {
            left: points.len(),
            right: coefficients.len(),
        });
    }
    let g = gram(k, points)?;
    let values = functional_values(&g, coefficients);
    Ok(SeparatingFunctional {
        points: points.to_vec(),
        coefficients: coefficients.to_vec(),
        min_pairwise_gap: min_pairwise_gap(&values),
        values,
        tries: 0,
    })
}

/// Seeded search for coefficients `c` (standard Gaussian draws) such that
/// `ψ = Σ cⱼ k_{xⱼ}` separates the points. Deterministic given `seed`.
pub fn find_separating(
    k: &KernelSpec,
    points: &[Point],
    seed: u64,
    max_tries: usize,
) -> Result<SeparatingFunctional> {
    if points.is_empty() {
        return Err(Error::InvalidParameter("empty point list".to_string()));
    }
    if max_tries == 0 {
        return Err(Error::InvalidParameter(
            "max_tries must be at least 1".to_string(),
        ));
    }
    if let Some((i, j)) = find_duplicate(points)? {
        return Err(Error::DuplicatePoints { i, j });
    }
    let g = gram(k, points)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best_gap = 0.0_f64;
    for attempt in 1..=max_tries {
        let coefficients: Vec<Complex64> = (0..points.len())
            .map(|_| Complex64::new(StandardNormal.sample(&mut rng), 0.0))
            .collect();
        let values = functional_values(&g, &coefficients);
        let gap = min_pairwise_gap(&values);
        if gap > separation_threshold(&values) {
            return Ok(SeparatingFunctional {
                points: points.to_vec(),
                coefficients,
                values,
                min_pairwise_gap: gap,
                tries: attempt,
            });
        }
        best_gap = best_gap.max(gap);
    }
    Err(Error::SeparationFailed {
        tries: max_tries,
        best_gap,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VandermondeReport {
    pub nonsingular: bool,
    pub min_pairwise_gap: f64,
    /// `σ_max / σ_min` of `[vᵢ^j]`; `+∞` when singular to working precision.
    pub condition_estimate: f64,
}

/// Nonsingularity of the Vandermonde matrix `[ψ(xᵢ)^j]`, decided by the
/// pairwise gap of the values.
pub fn vandermonde_independence(values: &[Complex64]) -> VandermondeReport {
    let n = values.len();
    let gap = min_pairwise_gap(values);
    if n == 0 {
        return VandermondeReport {
            nonsingular: true,
            min_pairwise_gap: gap,
            condition_estimate: 1.0,
        };
    }
    let v = DMatrix::from_fn(n, n, |i, j| values[i].powu(j as u32));
    let sv = v.singular_values();
    let max = sv.iter().copied().fold(0.0, f64::max);
    let min = sv.iter().copied().fold(f64::INFINITY, f64::min);
    let condition_estimate = if min > max * f64::EPSILON * n as f64 && max.is_finite() {
        max / min
    } else {
        f64::INFINITY
    };
    VandermondeReport {
        nonsingular: gap > separation_threshold(values),
        min_pairwise_gap: gap,
        condition_estimate,
    }
}
