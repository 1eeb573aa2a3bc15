#![allow(dead_code)]

use fockkernel::free_group::{random_word, GroupWord};
use fockkernel::{zoo, KernelSpec, Point};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn real_points(rng: &mut ChaCha8Rng, n: usize, dim: usize, half_width: f64) -> Vec<Point> {
    (0..n)
        .map(|_| {
            Point::Real(
                (0..dim)
                    .map(|_| rng.random_range(-half_width..half_width))
                    .collect(),
            )
        })
        .collect()
}

/// Points of the open ball in ℝ^dim with norms in `[0.1, r_max)`.
pub fn ball_points(rng: &mut ChaCha8Rng, n: usize, dim: usize, r_max: f64) -> Vec<Point> {
    (0..n)
        .map(|_| {
            let dir: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
            let norm = dir.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-3);
            let r = rng.random_range(0.1..r_max);
            Point::Real(dir.iter().map(|v| r * v / norm).collect())
        })
        .collect()
}

pub fn disk_values(rng: &mut ChaCha8Rng, n: usize, r_max: f64) -> Vec<zoo::DiskPoint> {
    (0..n)
        .map(|_| {
            let r = r_max * rng.random::<f64>().sqrt();
            let a = TAU * rng.random::<f64>();
            zoo::DiskPoint::from_parts(r * a.cos(), r * a.sin()).unwrap()
        })
        .collect()
}

pub fn disk_points(rng: &mut ChaCha8Rng, n: usize, r_max: f64) -> Vec<Point> {
    disk_values(rng, n, r_max)
        .into_iter()
        .map(|d| Point::Complex(d.value()))
        .collect()
}

pub fn distinct_words(rng: &mut ChaCha8Rng, n: usize, rank: usize, max_len: usize) -> Vec<Point> {
    let mut out: Vec<GroupWord> = Vec::new();
    while out.len() < n {
        let w = random_word(rng, rank, max_len).unwrap();
        if !out.contains(&w) {
            out.push(w);
        }
    }
    out.into_iter().map(Point::Word).collect()
}

pub type PointSampler = fn(&mut ChaCha8Rng, usize) -> Vec<Point>;

pub struct ZooCase {
    pub name: &'static str,
    pub kernel: KernelSpec,
    pub sample: PointSampler,
}

fn sample_real(rng: &mut ChaCha8Rng, n: usize) -> Vec<Point> {
    real_points(rng, n, 2, 3.0)
}

fn sample_ball(rng: &mut ChaCha8Rng, n: usize) -> Vec<Point> {
    ball_points(rng, n, 3, 0.9)
}

fn sample_disk(rng: &mut ChaCha8Rng, n: usize) -> Vec<Point> {
    disk_points(rng, n, 0.95)
}

fn sample_words(rng: &mut ChaCha8Rng, n: usize) -> Vec<Point> {
    distinct_words(rng, n, 3, 6)
}

/// The strictly positive definite zoo families with their desk-scale point
/// samplers.
pub fn strict_zoo() -> Vec<ZooCase> {
    vec![
        ZooCase {
            name: "gaussian",
            kernel: zoo::gaussian(1.0).unwrap(),
            sample: sample_real,
        },
        ZooCase {
            name: "drury_arveson",
            kernel: zoo::drury_arveson(),
            sample: sample_ball,
        },
        ZooCase {
            name: "ph_gaussian",
            kernel: zoo::ph_gaussian(PH_GAUSSIAN_T).unwrap(),
            sample: sample_disk,
        },
        ZooCase {
            name: "word_metric",
            kernel: zoo::word_metric_kernel(1.0).unwrap(),
            sample: sample_words,
        },
    ]
}

pub const PH_GAUSSIAN_T: f64 = 1.0;

/// Every zoo kernel, including the (only semidefinite) pseudo-hyperbolic base
/// kernel.
pub fn all_zoo() -> Vec<ZooCase> {
    let mut cases = strict_zoo();
    cases.push(ZooCase {
        name: "ph_base",
        kernel: zoo::ph_base_kernel(),
        sample: sample_disk,
    });
    cases
}
