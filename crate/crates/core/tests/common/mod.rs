#![allow(dead_code)]

use hadamard::spd::random_spd;
use hadamard::{BookPoint, SpdMatrix};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Matrices sharing one random eigenbasis, eigenvalues in `[e^-2, e^2]`.
pub fn commuting_family(dim: usize, n: usize, r: &mut ChaCha8Rng) -> Vec<SpdMatrix> {
    let basis = random_spd(dim, 4.0, r).unwrap();
    let q = basis.matrix().clone().symmetric_eigen().eigenvectors;
    (0..n)
        .map(|_| {
            let d: Vec<f64> = (0..dim).map(|_| r.random_range(-2.0..2.0f64).exp()).collect();
            let m = &q * DMatrix::from_diagonal(&DVector::from_vec(d)) * q.transpose();
            SpdMatrix::new((&m + m.transpose()) * 0.5).unwrap()
        })
        .collect()
}

/// Squared open-book distance written out by hand: same sheet or spine-crossing.
pub fn book_sq(p: &BookPoint, q: &BookPoint) -> f64 {
    let spine: f64 = p.spine.iter().zip(&q.spine).map(|(a, b)| (a - b).powi(2)).sum();
    let normal = if p.sheet == q.sheet { p.t - q.t } else { p.t + q.t };
    spine + normal * normal
}

pub fn book_frechet_value(pts: &[BookPoint], w: &[f64], m: &BookPoint) -> f64 {
    pts.iter().zip(w).map(|(p, wi)| wi * book_sq(m, p)).sum()
}

fn argmin_on_grid(f: impl Fn(f64) -> f64, lo: f64, hi: f64, step: f64) -> (f64, f64) {
    let steps = ((hi - lo) / step).ceil() as usize;
    (0..=steps)
        .map(|i| (lo + i as f64 * step).min(hi))
        .map(|x| (x, f(x)))
        .fold((lo, f64::INFINITY), |best, c| if c.1 < best.1 { c } else { best })
}

/// Grid search for the weighted Fréchet minimum on a book.
///
/// The squared distance splits into a spine part and a normal part, so each
/// spine coordinate and the normal coordinate on each sheet are searched
/// separately: step `1e-3`, then `1e-5` around the coarse winner.
pub fn book_brute_force(pts: &[BookPoint], w: &[f64], sheets: usize, spine_dim: usize) -> f64 {
    let refine = |f: &dyn Fn(f64) -> f64, lo: f64, hi: f64| {
        let (x, _) = argmin_on_grid(f, lo, hi, 1e-3);
        argmin_on_grid(f, (x - 1e-3).max(lo), (x + 1e-3).min(hi), 1e-5).1
    };
    let mut spine_part = 0.0;
    for c in 0..spine_dim {
        let f = |s: f64| pts.iter().zip(w).map(|(p, wi)| wi * (s - p.spine[c]).powi(2)).sum::<f64>();
        let lo = pts.iter().map(|p| p.spine[c]).fold(f64::INFINITY, f64::min);
        let hi = pts.iter().map(|p| p.spine[c]).fold(f64::NEG_INFINITY, f64::max);
        spine_part += refine(&f, lo, hi);
    }
    let t_max = pts.iter().map(|p| p.t).fold(0.0, f64::max);
    let normal = (1..=sheets)
        .map(|j| {
            let f = |t: f64| {
                pts.iter()
                    .zip(w)
                    .map(|(p, wi)| {
                        let d = if p.sheet == j { t - p.t } else { t + p.t };
                        wi * d * d
                    })
                    .sum::<f64>()
            };
            refine(&f, 0.0, t_max)
        })
        .fold(f64::INFINITY, f64::min);
    spine_part + normal
}
