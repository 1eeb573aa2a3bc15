//! Concrete kernel families. The pseudo-hyperbolic kernels live on the unit
//! disk and the word-metric kernel on free groups.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::free_group::{edge_dist_sq, GroupWord};
use crate::kernel::KernelSpec;

/// Points of the disk and ball must stay this far inside the boundary.
pub const BOUNDARY_MARGIN: f64 = 1e-12;

/// A point `λ` of the open unit disk with `|λ| < 1 − 1e-12`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskPoint(Complex64);

impl DiskPoint {
    pub fn new(z: Complex64) -> Result<Self> {
        if !(z.norm() < 1.0 - BOUNDARY_MARGIN) {
            return Err(Error::OutOfDomain(format!(
                "disk point {z} has modulus {} ≥ 1",
                z.norm()
            )));
        }
        Ok(Self(z))
    }

    pub fn from_parts(re: f64, im: f64) -> Result<Self> {
        Self::new(Complex64::new(re, im))
    }

    pub fn value(self) -> Complex64 {
        self.0
    }
}

pub(crate) fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn check_dims(a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.is_empty() {
        return Err(Error::InvalidParameter(
            "zero-dimensional point".to_string(),
        ));
    }
    Ok(())
}

pub(crate) fn real_inner(a: &[f64], b: &[f64]) -> Result<f64> {
    check_dims(a, b)?;
    Ok(a.iter().zip(b).map(|(x, y)| x * y).sum())
}

/// `⟨a, b⟩ = a·conj(b)`.
pub(crate) fn complex_inner(a: Complex64, b: Complex64) -> Complex64 {
    a * b.conj()
}

pub(crate) fn gaussian_value(t: f64, a: &[f64], b: &[f64]) -> Result<f64> {
    check_dims(a, b)?;
    Ok((-t * squared_distance(a, b)).exp())
}

fn check_in_ball(norm: f64) -> Result<()> {
    if !(norm < 1.0 - BOUNDARY_MARGIN) {
        return Err(Error::OutOfDomain(format!(
            "ball point has norm {norm} ≥ 1"
        )));
    }
    Ok(())
}

pub(crate) fn drury_arveson_real(a: &[f64], b: &[f64]) -> Result<f64> {
    let ip = real_inner(a, b)?;
    check_in_ball(real_inner(a, a)?.sqrt())?;
    check_in_ball(real_inner(b, b)?.sqrt())?;
    Ok(1.0 / (1.0 - ip))
}

pub(crate) fn drury_arveson_complex(a: Complex64, b: Complex64) -> Result<Complex64> {
    check_in_ball(a.norm())?;
    check_in_ball(b.norm())?;
    Ok((Complex64::new(1.0, 0.0) - complex_inner(a, b)).inv())
}

/// `d(λ, μ) = |λ − μ| / |1 − conj(μ)·λ|`.
pub fn pseudo_hyperbolic_distance(lambda: DiskPoint, mu: DiskPoint) -> f64 {
    let (l, m) = (lambda.0, mu.0);
    (l - m).norm() / (Complex64::new(1.0, 0.0) - m.conj() * l).norm()
}

/// `|⟨s_λ, s_μ⟩|² = (1 − |λ|²)(1 − |μ|²) / |1 − conj(μ)·λ|²` for the
/// normalized Szegő kernels `s_λ(z) = √(1 − |λ|²) / (1 − conj(λ)·z)`.
pub fn szego_normalized_overlap(lambda: DiskPoint, mu: DiskPoint) -> f64 {
    let (l, m) = (lambda.0, mu.0);
    (1.0 - l.norm_sqr()) * (1.0 - m.norm_sqr())
        / (Complex64::new(1.0, 0.0) - m.conj() * l).norm_sqr()
}

pub(crate) fn ph_base_value(lambda: DiskPoint, mu: DiskPoint) -> f64 {
    let d = pseudo_hyperbolic_distance(lambda, mu);
    (lambda.0.norm_sqr() + mu.0.norm_sqr()) - d * d
}

pub(crate) fn ph_gaussian_value(t: f64, lambda: DiskPoint, mu: DiskPoint) -> f64 {
    let d = pseudo_hyperbolic_distance(lambda, mu);
    (-t * d * d).exp()
}

pub(crate) fn word_metric_value(t: f64, g: &GroupWord, h: &GroupWord) -> Result<f64> {
    Ok((-t * g.distance(h)? as f64).exp())
}

/// `exp(−t‖Φ(g) − Φ(h)‖²)` computed through the Haagerup embedding. Equal to
/// the word-metric kernel value since `‖Φ(g) − Φ(h)‖² = |h⁻¹g|`.
pub fn word_metric_via_embedding(t: f64, g: &GroupWord, h: &GroupWord) -> Result<f64> {
    Ok((-t * edge_dist_sq(g, h)? as f64).exp())
}

pub fn gaussian(t: f64) -> Result<KernelSpec> {
    let k = KernelSpec::Gaussian { t };
    k.validate()?;
    Ok(k)
}

/// `scale·⟨x, y⟩`. With `scale = 2` its exponential yields Gaussian bumps
/// after rescaling.
pub fn linear(scale: f64) -> Result<KernelSpec> {
    let k = KernelSpec::Linear { scale };
    k.validate()?;
    Ok(k)
}

pub fn drury_arveson() -> KernelSpec {
    KernelSpec::DruryArveson
}

pub fn ph_base_kernel() -> KernelSpec {
    KernelSpec::PhBase
}

pub fn ph_gaussian(t: f64) -> Result<KernelSpec> {
    let k = KernelSpec::PhGaussian { t };
    k.validate()?;
    Ok(k)
}

pub fn word_metric_kernel(t: f64) -> Result<KernelSpec> {
    let k = KernelSpec::WordMetric { t };
    k.validate()?;
    Ok(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::free_group::parse_word;
    use crate::kernel::{feature_distance_sq, Point};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn disk(re: f64, im: f64) -> DiskPoint {
        DiskPoint::from_parts(re, im).unwrap()
    }

    fn random_disk(rng: &mut ChaCha8Rng) -> DiskPoint {
        let r = 0.99 * rng.random::<f64>().sqrt();
        let a = std::f64::consts::TAU * rng.random::<f64>();
        disk(r * a.cos(), r * a.sin())
    }

    #[test]
    fn disk_admission() {
        assert!(DiskPoint::from_parts(1.0, 0.0).is_err());
        assert!(DiskPoint::from_parts(0.6, 0.8).is_err());
        assert!(DiskPoint::from_parts(1.0 - 1e-13, 0.0).is_err());
        assert!(DiskPoint::from_parts(1.0 - 1e-11, 0.0).is_ok());
    }

    #[test]
    fn gaussian_examples() {
        let k = gaussian(2.0).unwrap();
        let v = k
            .eval_real(&Point::real([1.0, 1.0]), &Point::real([0.0, 0.0]))
            .unwrap();
        assert!((v - (-4.0f64).exp()).abs() < 1e-17);
        assert!(gaussian(0.0).is_err());
        assert!(gaussian(f64::NAN).is_err());
    }

    #[test]
    fn drury_arveson_examples() {
        let k = drury_arveson();
        let v = k
            .eval(&Point::real([0.5, 0.5]), &Point::real([0.5, 0.5]))
            .unwrap();
        assert_eq!(v.re, 2.0);
        let z = k
            .eval(&Point::complex(0.3, 0.4), &Point::complex(-0.2, 0.1))
            .unwrap();
        let expected = 1.0 / (1.0 - Complex64::new(0.3, 0.4) * Complex64::new(-0.2, -0.1));
        assert!((z - expected).norm() < 1e-16);
    }

    #[test]
    fn pseudo_hyperbolic_examples() {
        let l = disk(0.3, -0.4);
        assert!((pseudo_hyperbolic_distance(l, disk(0.0, 0.0)) - 0.5).abs() < 1e-16);
        assert!((pseudo_hyperbolic_distance(disk(0.5, 0.0), disk(-0.5, 0.0)) - 0.8).abs() < 1e-15);
        assert_eq!(pseudo_hyperbolic_distance(l, l), 0.0);
    }

    #[test]
    fn szego_examples() {
        let l = disk(0.2, 0.7);
        assert!((szego_normalized_overlap(l, l) - 1.0).abs() < 1e-15);
        assert!((szego_normalized_overlap(disk(0.5, 0.0), disk(0.0, 0.0)) - 0.75).abs() < 1e-16);
    }

    #[test]
    fn ph_base_examples() {
        let k = ph_base_kernel();
        let l = Point::complex(0.3, 0.5);
        let zero = Point::complex(0.0, 0.0);
        assert!(k.eval_real(&l, &zero).unwrap().abs() < 1e-16);
        let v = k.eval_real(&l, &l).unwrap();
        assert!((v - 2.0 * 0.34).abs() < 1e-15);
    }

    #[test]
    fn ph_gaussian_examples() {
        let k = ph_gaussian(1.0).unwrap();
        let (a, b) = (Point::complex(0.5, 0.0), Point::complex(-0.5, 0.0));
        assert_eq!(k.eval_real(&a, &a).unwrap(), 1.0);
        assert!((k.eval_real(&a, &b).unwrap() - (-0.64f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn word_metric_examples() {
        let k = word_metric_kernel(1.0).unwrap();
        let w = |s: &str| Point::Word(parse_word(s, 3).unwrap());
        assert_eq!(k.eval_real(&w("a1 a2"), &w("a1 a2")).unwrap(), 1.0);
        let inv_e = (-1.0f64).exp();
        assert_eq!(k.eval_real(&w("a1"), &w("e")).unwrap(), inv_e);
        assert_eq!(k.eval_real(&w("a1 a2"), &w("a1")).unwrap(), inv_e);
        let other = Point::Word(parse_word("a1", 2).unwrap());
        assert!(matches!(
            k.eval(&w("a1"), &other),
            Err(Error::AlphabetMismatch { .. })
        ));
    }

    #[test]
    fn distance_identities_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let ph = ph_base_kernel();
        for _ in 0..200 {
            let (l, m) = (random_disk(&mut rng), random_disk(&mut rng));
            let d = pseudo_hyperbolic_distance(l, m);
            assert!((0.0..1.0).contains(&d));
            assert_eq!(d, pseudo_hyperbolic_distance(m, l));
            assert!((d * d - (1.0 - szego_normalized_overlap(l, m))).abs() <= 1e-12);
            let (pl, pm) = (Point::Complex(l.value()), Point::Complex(m.value()));
            let half = 0.5 * feature_distance_sq(&ph, &pl, &pm).unwrap();
            assert!((half - d * d).abs() <= 1e-12);
        }
    }

    #[test]
    fn word_metric_matches_embedding_form() {
        let words = crate::free_group::enumerate_words(2, 3).unwrap();
        for g in &words {
            for h in &words {
                let direct = word_metric_value(0.8, g, h).unwrap();
                assert_eq!(direct, word_metric_via_embedding(0.8, g, h).unwrap());
            }
        }
    }
}
