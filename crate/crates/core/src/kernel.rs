//! Kernels over heterogeneous point domains and Gram-matrix assembly.
//!
//! Inner products are linear in the first argument and conjugate-linear in
//! the second, so every kernel here satisfies `k(y, x) = conj k(x, y)`.
//! Values are complex internally; real-valued kernels report a zero
//! imaginary part and can be read through [`KernelSpec::eval_real`].

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::free_group::GroupWord;
use crate::series::LiftedKernel;
use crate::zoo;

/// Two points are distinct when their domain-native distance exceeds this.
pub const DISTINCT_TOL: f64 = 1e-12;

/// Imaginary parts allowed on values of real-valued kernels.
pub const REAL_IMAG_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    RealVector,
    ComplexScalar,
    GroupWord,
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Domain::RealVector => "real_vector",
            Domain::ComplexScalar => "complex_scalar",
            Domain::GroupWord => "group_word",
        })
    }
}

/// A point of one of the supported domains.
#[derive(Debug, Clone, PartialEq)]
pub enum Point {
    Real(Vec<f64>),
    Complex(Complex64),
    Word(GroupWord),
}

impl Point {
    pub fn real(coords: impl Into<Vec<f64>>) -> Self {
        Point::Real(coords.into())
    }

    pub fn complex(re: f64, im: f64) -> Self {
        Point::Complex(Complex64::new(re, im))
    }

    pub fn domain(&self) -> Domain {
        match self {
            Point::Real(_) => Domain::RealVector,
            Point::Complex(_) => Domain::ComplexScalar,
            Point::Word(_) => Domain::GroupWord,
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Real(v) => {
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{x:?}")?;
                }
                Ok(())
            }
            Point::Complex(z) => write!(f, "{:?} {:?}", z.re, z.im),
            Point::Word(g) => write!(f, "{g}"),
        }
    }
}

fn domain_mismatch(expected: impl fmt::Display, found: Domain) -> Error {
    Error::DomainMismatch {
        expected: expected.to_string(),
        found: found.to_string(),
    }
}

/// Domain-native distance: Euclidean for vectors, modulus for complex
/// scalars, word metric for group words.
pub fn point_distance(x: &Point, y: &Point) -> Result<f64> {
    match (x, y) {
        (Point::Real(a), Point::Real(b)) => {
            if a.len() != b.len() {
                return Err(Error::DimensionMismatch {
                    left: a.len(),
                    right: b.len(),
                });
            }
            Ok(zoo::squared_distance(a, b).sqrt())
        }
        (Point::Complex(a), Point::Complex(b)) => Ok((a - b).norm()),
        (Point::Word(g), Point::Word(h)) => Ok(g.distance(h)? as f64),
        _ => Err(domain_mismatch(x.domain(), y.domain())),
    }
}

pub fn are_distinct(x: &Point, y: &Point) -> Result<bool> {
    Ok(point_distance(x, y)? > DISTINCT_TOL)
}

/// First pair `(i, j)`, `i < j`, of points that are not distinct.
pub fn find_duplicate(points: &[Point]) -> Result<Option<(usize, usize)>> {
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if !are_distinct(&points[i], &points[j])? {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

/// A named, parameterized kernel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", content = "parameters", rename_all = "snake_case")]
pub enum KernelSpec {
    /// `exp(−t‖x − y‖²)` on real vectors.
    Gaussian { t: f64 },
    /// `scale · ⟨x, y⟩` on real vectors or complex scalars.
    Linear { scale: f64 },
    /// `1 / (1 − ⟨x, y⟩)` on the open unit ball.
    DruryArveson,
    /// `−d(λ, μ)² + |λ|² + |μ|²` on the unit disk.
    PhBase,
    /// `exp(−t·d(λ, μ)²)` on the unit disk.
    PhGaussian { t: f64 },
    /// `exp(−t·|h⁻¹g|)` on free-group words.
    WordMetric { t: f64 },
    /// A power series applied to a base kernel.
    Lift(Box<LiftedKernel>),
    /// `exp(−t‖k_x − k_y‖²)` built from a base kernel.
    FeatureGaussian { base: Box<KernelSpec>, t: f64 },
}

fn check_positive(name: &str, value: f64) -> Result<()> {
    if !(value.is_finite() && value > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "{name} must be positive and finite, got {value}"
        )));
    }
    Ok(())
}

impl KernelSpec {
    pub fn label(&self) -> String {
        match self {
            KernelSpec::Gaussian { t } => format!("gaussian(t={t})"),
            KernelSpec::Linear { scale } => format!("linear(scale={scale})"),
            KernelSpec::DruryArveson => "drury_arveson".to_string(),
            KernelSpec::PhBase => "ph_base".to_string(),
            KernelSpec::PhGaussian { t } => format!("ph_gaussian(t={t})"),
            KernelSpec::WordMetric { t } => format!("word_metric(t={t})"),
            KernelSpec::Lift(lifted) => {
                format!("lift[{}]({})", lifted.series.label(), lifted.base.label())
            }
            KernelSpec::FeatureGaussian { base, t } => {
                format!("feature_gaussian(t={t})({})", base.label())
            }
        }
    }

    pub fn domains(&self) -> Vec<Domain> {
        match self {
            KernelSpec::Gaussian { .. } => vec![Domain::RealVector],
            KernelSpec::Linear { .. } | KernelSpec::DruryArveson => {
                vec![Domain::RealVector, Domain::ComplexScalar]
            }
            KernelSpec::PhBase | KernelSpec::PhGaussian { .. } => vec![Domain::ComplexScalar],
            KernelSpec::WordMetric { .. } => vec![Domain::GroupWord],
            KernelSpec::Lift(lifted) => lifted.base.domains(),
            KernelSpec::FeatureGaussian { base, .. } => base.domains(),
        }
    }

    pub fn accepts(&self, domain: Domain) -> bool {
        self.domains().contains(&domain)
    }

    /// Whether values are real for every admissible pair drawn from `domain`.
    pub fn is_real_on(&self, domain: Domain) -> bool {
        match self {
            KernelSpec::Gaussian { .. }
            | KernelSpec::PhBase
            | KernelSpec::PhGaussian { .. }
            | KernelSpec::WordMetric { .. }
            | KernelSpec::FeatureGaussian { .. } => true,
            KernelSpec::Linear { .. } | KernelSpec::DruryArveson => domain == Domain::RealVector,
            KernelSpec::Lift(lifted) => lifted.base.is_real_on(domain),
        }
    }

    /// Whether values are real on every admissible domain.
    pub fn is_real_valued(&self) -> bool {
        self.domains().into_iter().all(|d| self.is_real_on(d))
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            KernelSpec::Gaussian { t }
            | KernelSpec::PhGaussian { t }
            | KernelSpec::WordMetric { t } => check_positive("t", *t),
            KernelSpec::Linear { scale } => check_positive("scale", *scale),
            KernelSpec::DruryArveson | KernelSpec::PhBase => Ok(()),
            KernelSpec::Lift(lifted) => lifted.validate(),
            KernelSpec::FeatureGaussian { base, t } => {
                check_positive("t", *t)?;
                base.validate()
            }
        }
    }

    fn check_domain(&self, x: &Point, y: &Point) -> Result<()> {
        let domains = self.domains();
        for p in [x, y] {
            if !domains.contains(&p.domain()) {
                let expected: Vec<String> = domains.iter().map(|d| d.to_string()).collect();
                return Err(domain_mismatch(expected.join("|"), p.domain()));
            }
        }
        if x.domain() != y.domain() {
            return Err(domain_mismatch(x.domain(), y.domain()));
        }
        Ok(())
    }

    /// Evaluates `k(x, y)`.
    pub fn eval(&self, x: &Point, y: &Point) -> Result<Complex64> {
        self.validate()?;
        self.check_domain(x, y)?;
        self.eval_unchecked(x, y)
    }

    // Parameters and domains have been validated by the caller.
    pub(crate) fn eval_unchecked(&self, x: &Point, y: &Point) -> Result<Complex64> {
        let real = |v: f64| Complex64::new(v, 0.0);
        match (self, x, y) {
            (KernelSpec::Gaussian { t }, Point::Real(a), Point::Real(b)) => {
                zoo::gaussian_value(*t, a, b).map(real)
            }
            (KernelSpec::Linear { scale }, Point::Real(a), Point::Real(b)) => {
                zoo::real_inner(a, b).map(|ip| real(scale * ip))
            }
            (KernelSpec::Linear { scale }, Point::Complex(a), Point::Complex(b)) => {
                Ok(zoo::complex_inner(*a, *b) * *scale)
            }
            (KernelSpec::DruryArveson, Point::Real(a), Point::Real(b)) => {
                zoo::drury_arveson_real(a, b).map(real)
            }
            (KernelSpec::DruryArveson, Point::Complex(a), Point::Complex(b)) => {
                zoo::drury_arveson_complex(*a, *b)
            }
            (KernelSpec::PhBase, Point::Complex(a), Point::Complex(b)) => {
                let (l, m) = (zoo::DiskPoint::new(*a)?, zoo::DiskPoint::new(*b)?);
                Ok(real(zoo::ph_base_value(l, m)))
            }
            (KernelSpec::PhGaussian { t }, Point::Complex(a), Point::Complex(b)) => {
                let (l, m) = (zoo::DiskPoint::new(*a)?, zoo::DiskPoint::new(*b)?);
                Ok(real(zoo::ph_gaussian_value(*t, l, m)))
            }
            (KernelSpec::WordMetric { t }, Point::Word(g), Point::Word(h)) => {
                zoo::word_metric_value(*t, g, h).map(real)
            }
            (KernelSpec::Lift(lifted), _, _) => lifted.eval_unchecked(x, y),
            (KernelSpec::FeatureGaussian { base, t }, _, _) => {
                let kxy = base.eval_unchecked(x, y)?;
                let kxx = base.eval_unchecked(x, x)?.re;
                let kyy = base.eval_unchecked(y, y)?.re;
                // e^{−t k(x,x)} · e^{2t Re k(x,y)} · e^{−t k(y,y)}, combined in
                // one exponent to avoid overflow of the middle factor.
                Ok(real((2.0 * t * kxy.re - t * (kxx + kyy)).exp()))
            }
            _ => Err(domain_mismatch(
                self.domains()
                    .iter()
                    .map(|d| d.to_string())
                    .collect::<Vec<_>>()
                    .join("|"),
                x.domain(),
            )),
        }
    }

    /// Evaluates a kernel that is real on the domain of `x` and `y`.
    pub fn eval_real(&self, x: &Point, y: &Point) -> Result<f64> {
        if !self.is_real_on(x.domain()) {
            return Err(Error::NonRealKernel(self.label()));
        }
        let v = self.eval(x, y)?;
        if v.im.abs() > REAL_IMAG_TOL * (1.0 + v.re.abs()) {
            return Err(Error::NonRealKernel(self.label()));
        }
        Ok(v.re)
    }
}

impl fmt::Display for KernelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Hermitian matrix of kernel values over an ordered point list.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    entries: DMatrix<Complex64>,
    points: Vec<Point>,
    kernel: String,
}

impl GramMatrix {
    /// Wraps an explicit square matrix. No symmetry is imposed.
    pub fn from_entries(entries: DMatrix<Complex64>) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::DimensionMismatch {
                left: entries.nrows(),
                right: entries.ncols(),
            });
        }
        Ok(Self {
            entries,
            points: Vec::new(),
            kernel: "explicit".to_string(),
        })
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                left: n,
                right: bad.len(),
            });
        }
        Self::from_entries(DMatrix::from_fn(n, n, |i, j| {
            Complex64::new(rows[i][j], 0.0)
        }))
    }

    pub fn with_kernel_label(mut self, label: impl Into<String>) -> Self {
        self.kernel = label.into();
        self
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[(i, j)]
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn kernel(&self) -> &str {
        &self.kernel
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max |a_ij − conj a_ji|`.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.entries[(i, j)] - self.entries[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_real(&self) -> bool {
        self.entries.iter().all(|z| z.im == 0.0)
    }

    pub fn into_entries(self) -> DMatrix<Complex64> {
        self.entries
    }
}

/// Assembles `[k(x_i, x_j)]` from the upper triangle, mirrored by conjugation.
pub fn gram(k: &KernelSpec, points: &[Point]) -> Result<GramMatrix> {
    if points.is_empty() {
        return Err(Error::InvalidParameter("empty point list".to_string()));
    }
    k.validate()?;
    let n = points.len();
    let rows: Vec<Vec<Result<Complex64>>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (i..n)
                .map(|j| {
                    k.check_domain(&points[i], &points[j])?;
                    k.eval_unchecked(&points[i], &points[j])
                })
                .collect()
        })
        .collect();

    let mut entries = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    for (i, row) in rows.into_iter().enumerate() {
        for (offset, value) in row.into_iter().enumerate() {
            let j = i + offset;
            let value = value.map_err(|e| Error::GramEntry {
                i,
                j,
                source: Box::new(e),
            })?;
            if i == j {
                entries[(i, i)] = Complex64::new(value.re, 0.0);
            } else {
                entries[(i, j)] = value;
                entries[(j, i)] = value.conj();
            }
        }
    }
    Ok(GramMatrix {
        entries,
        points: points.to_vec(),
        kernel: k.label(),
    })
}

/// `‖k_x − k_y‖² = k(x,x) − 2 Re k(x,y) + k(y,y)`.
///
/// Small negative values from roundoff are clamped to zero; anything below
/// `−1e-10·max(1, |k(x,x)| + |k(y,y)|)` is reported as evidence that `k` is
/// not positive semidefinite.
pub fn feature_distance_sq(k: &KernelSpec, x: &Point, y: &Point) -> Result<f64> {
    let kxx = k.eval(x, x)?.re;
    let kyy = k.eval(y, y)?.re;
    let kxy = k.eval(x, y)?;
    feature_distance_from_values(kxx, kxy, kyy)
}

/// Same as [`feature_distance_sq`] from the three kernel values.
pub fn feature_distance_from_values(kxx: f64, kxy: Complex64, kyy: f64) -> Result<f64> {
    let value = (kxx + kyy) - 2.0 * kxy.re;
    let floor = -1e-10 * (kxx.abs() + kyy.abs()).max(1.0);
    if value < floor {
        return Err(Error::NotAKernelEvidence { value });
    }
    Ok(value.max(0.0))
}
