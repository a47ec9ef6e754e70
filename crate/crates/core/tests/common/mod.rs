#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use simplexproj::{FaceIndexSet, MetricMatrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `G'G + ridge I` with entries of `G` uniform in [-1, 1].
pub fn random_spd_raw(rng: &mut impl Rng, n: usize, ridge: f64) -> DMatrix<f64> {
    let g = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
    g.transpose() * &g + DMatrix::identity(n, n) * ridge
}

pub fn random_spd(rng: &mut impl Rng, n: usize) -> MetricMatrix {
    MetricMatrix::from_dmatrix(random_spd_raw(rng, n, 0.01)).unwrap()
}

pub fn random_point(rng: &mut impl Rng, n: usize, half_width: f64) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-half_width..half_width)).collect()
}

/// Uniform-ish random point of the simplex (normalized exponentials).
pub fn random_simplex_point(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    let e: Vec<f64> = (0..n).map(|_| -rng.gen_range(1e-12..1.0f64).ln()).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|v| v / s).collect()
}

/// Random point of the hyperplane sum(x) = 1.
pub fn random_hyperplane_point(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    let mut x = random_point(rng, n, 2.0);
    let shift = (x.iter().sum::<f64>() - 1.0) / n as f64;
    x.iter_mut().for_each(|v| *v -= shift);
    x
}

pub fn random_face(rng: &mut impl Rng, n: usize) -> FaceIndexSet {
    loop {
        let idx: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
        if !idx.is_empty() {
            return FaceIndexSet::new(idx).unwrap();
        }
    }
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn inf_norm(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, v| m.max(v.abs()))
}

pub fn rel_diff(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}
