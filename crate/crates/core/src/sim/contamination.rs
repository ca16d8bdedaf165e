use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::book::BookPoint;
use crate::error::{Error, Result};
use crate::seed::{self, Domain};

/// Source of replacement values.
pub trait NoiseModel<P>: Sync {
    fn draw(&self, rng: &mut ChaCha8Rng) -> P;
}

/// Always substitutes the same point.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedPoint<P>(pub P);

impl<P: Clone + Sync> NoiseModel<P> for FixedPoint<P> {
    fn draw(&self, _rng: &mut ChaCha8Rng) -> P {
        self.0.clone()
    }
}

/// Fixed half-space coordinates on a uniformly chosen sheet of an open book.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomSheet {
    pub sheets: usize,
    pub t: f64,
    pub spine: Vec<f64>,
}

impl NoiseModel<BookPoint> for RandomSheet {
    fn draw(&self, rng: &mut ChaCha8Rng) -> BookPoint {
        let sheet = rng.random_range(1..=self.sheets);
        if self.t == 0.0 {
            return BookPoint { sheet: 1, t: 0.0, spine: self.spine.clone() };
        }
        BookPoint { sheet, t: self.t, spine: self.spine.clone() }
    }
}

/// Huber ε-contamination: every index is independently replaced by noise with probability `epsilon`.
#[derive(Debug, Clone, PartialEq)]
pub struct ContaminationSpec<N> {
    pub epsilon: f64,
    pub noise: N,
    pub seed: u64,
}

impl<N> ContaminationSpec<N> {
    pub fn new(epsilon: f64, noise: N, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(Error::Domain(format!("contamination level {epsilon} outside [0, 1]")));
        }
        Ok(ContaminationSpec { epsilon, noise, seed })
    }
}

/// Which of `n` indices are replaced under `(epsilon, seed)`.
pub fn contamination_mask(n: usize, epsilon: f64, seed: u64) -> Result<Vec<bool>> {
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::Domain(format!("contamination level {epsilon} outside [0, 1]")));
    }
    let mut rng = seed::stream(seed, Domain::ContaminationMask, 0);
    Ok((0..n).map(|_| rng.random_bool(epsilon)).collect())
}

/// Applies the contamination to `seq`. The mask and the noise values come from
/// separate streams, so the mask does not depend on the noise model.
pub fn huber_contaminate<P: Clone, N: NoiseModel<P>>(
    seq: &[P],
    spec: &ContaminationSpec<N>,
) -> Result<Vec<P>> {
    let mask = contamination_mask(seq.len(), spec.epsilon, spec.seed)?;
    let mut noise_rng = seed::stream(spec.seed, Domain::ContaminationNoise, 0);
    Ok(seq
        .iter()
        .zip(mask)
        .map(|(x, hit)| if hit { spec.noise.draw(&mut noise_rng) } else { x.clone() })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extremes() {
        let seq: Vec<f64> = (0..100).map(f64::from).collect();
        let none = huber_contaminate(&seq, &ContaminationSpec::new(0.0, FixedPoint(-1.0), 3).unwrap()).unwrap();
        assert_eq!(none, seq);
        let all = huber_contaminate(&seq, &ContaminationSpec::new(1.0, FixedPoint(-1.0), 3).unwrap()).unwrap();
        assert!(all.iter().all(|x| *x == -1.0));
        assert!(ContaminationSpec::new(1.5, FixedPoint(0.0), 0).is_err());
    }

    #[test]
    fn replacement_count_concentrates() {
        let n = 10_000;
        let eps = 0.1;
        let count = contamination_mask(n, eps, 2024).unwrap().iter().filter(|h| **h).count();
        let half_width = 3.0 * (n as f64 * eps * (1.0 - eps)).sqrt();
        assert!((count as f64 - 1000.0).abs() <= half_width, "{count}");
    }

    #[test]
    fn random_sheet_noise_uses_every_sheet() {
        let noise = RandomSheet { sheets: 3, t: 1.0, spine: vec![10.0] };
        let seq = vec![BookPoint { sheet: 1, t: 2.0, spine: vec![0.0] }; 300];
        let out = huber_contaminate(&seq, &ContaminationSpec::new(1.0, noise, 8).unwrap()).unwrap();
        for s in 1..=3 {
            assert!(out.iter().any(|p| p.sheet == s && p.t == 1.0 && p.spine == [10.0]));
        }
    }

    #[test]
    fn mask_is_seeded() {
        assert_eq!(contamination_mask(500, 0.3, 1).unwrap(), contamination_mask(500, 0.3, 1).unwrap());
        assert_ne!(contamination_mask(500, 0.3, 1).unwrap(), contamination_mask(500, 0.3, 2).unwrap());
    }
}
