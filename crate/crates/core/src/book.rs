//! Open books `B_k^d`: `k` copies of the half-space `[0, ∞) × R^d` glued along
//! their common boundary, the spine.
//!
//! Two points on the same sheet are joined by a straight segment. Points on
//! different sheets are joined through the spine; unfolding the two sheets into
//! one copy of `R^{d+1}` (the second reflected to negative first coordinate)
//! turns that path into a straight segment too, which gives closed forms for
//! both distance and geodesics.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::space::{check_fraction, GeodesicSpace, Weights, TOL_POINT};

/// A point of an open book. Spine points always carry sheet 1.
#[derive(Debug, Clone, PartialEq)]
pub struct BookPoint {
    /// Sheet index, 1-based.
    pub sheet: usize,
    /// Distance to the spine.
    pub t: f64,
    pub spine: Vec<f64>,
}

impl BookPoint {
    /// Builds and canonicalizes a point.
    pub fn new(sheet: usize, t: f64, spine: Vec<f64>) -> Result<Self> {
        canonicalize(BookPoint { sheet, t, spine })
    }

    pub fn on_spine(&self) -> bool {
        self.t == 0.0
    }
}

/// Clamps round-off below the spine and identifies spine points across sheets.
pub fn canonicalize(mut p: BookPoint) -> Result<BookPoint> {
    if p.t.is_nan() || p.t < -TOL_POINT {
        return Err(Error::Domain(format!(
            "book point with negative spine distance {}",
            p.t
        )));
    }
    if p.t <= TOL_POINT {
        p.t = 0.0;
        p.sheet = 1;
    }
    Ok(p)
}

/// The open book with `sheets` half-spaces over a spine `R^spine_dim`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OpenBook {
    pub sheets: usize,
    pub spine_dim: usize,
}

impl OpenBook {
    pub fn new(sheets: usize, spine_dim: usize) -> Result<Self> {
        if sheets < 2 {
            return Err(Error::Domain(format!("open book needs at least 2 sheets, got {sheets}")));
        }
        Ok(OpenBook { sheets, spine_dim })
    }

    fn spine_sq(p: &BookPoint, q: &BookPoint) -> f64 {
        p.spine
            .iter()
            .zip(&q.spine)
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    }

    /// Random point: spine with probability 1/10, otherwise a uniform sheet
    /// with spine distance uniform in `(0, 3]`; spine coordinates standard normal.
    pub fn random_point<R: Rng + ?Sized>(&self, rng: &mut R) -> BookPoint {
        let spine = (0..self.spine_dim)
            .map(|_| rng.sample::<f64, _>(StandardNormal))
            .collect();
        if rng.random_bool(0.1) {
            return BookPoint { sheet: 1, t: 0.0, spine };
        }
        BookPoint {
            sheet: rng.random_range(1..=self.sheets),
            t: 3.0 * (1.0 - rng.random::<f64>()),
            spine,
        }
    }

    /// Exact weighted Fréchet mean by folding.
    ///
    /// Restricted to sheet `j` and the spine, the weighted squared-distance
    /// functional is a Euclidean quadratic in folded coordinates (`+t` on sheet
    /// `j`, `-t` elsewhere), minimized over the half-space at
    /// `max(mean folded t, 0)`. At most one sheet can have a positive folded
    /// mean; if none does the mean sticks to the spine.
    pub fn frechet_mean(&self, points: &[BookPoint], weights: &Weights) -> Result<BookPoint> {
        if points.is_empty() {
            return Err(Error::domain("Fréchet mean of no points"));
        }
        weights.check_len(points.len())?;
        for p in points {
            self.validate(p)?;
        }
        let w = weights.as_slice();
        let mut spine = vec![0.0; self.spine_dim];
        for (p, wi) in points.iter().zip(w) {
            for (s, c) in spine.iter_mut().zip(&p.spine) {
                *s += wi * c;
            }
        }
        for sheet in 1..=self.sheets {
            let folded = self.folded_mean(points, w, sheet);
            if folded > 0.0 {
                return BookPoint::new(sheet, folded, spine);
            }
        }
        BookPoint::new(1, 0.0, spine)
    }

    /// Weighted mean of the first coordinate after folding every sheet other than `sheet` onto the negative axis.
    pub fn folded_mean(&self, points: &[BookPoint], weights: &[f64], sheet: usize) -> f64 {
        points
            .iter()
            .zip(weights)
            .map(|(p, w)| if p.sheet == sheet { w * p.t } else { -w * p.t })
            .sum()
    }
}

impl GeodesicSpace for OpenBook {
    type Point = BookPoint;

    fn distance(&self, p: &BookPoint, q: &BookPoint) -> Result<f64> {
        self.validate(p)?;
        self.validate(q)?;
        let dt = if p.sheet == q.sheet { p.t - q.t } else { p.t + q.t };
        Ok((dt * dt + Self::spine_sq(p, q)).sqrt())
    }

    fn interpolate(&self, p: &BookPoint, q: &BookPoint, u: f64) -> Result<BookPoint> {
        check_fraction(u)?;
        self.validate(p)?;
        self.validate(q)?;
        if u == 0.0 {
            return Ok(p.clone());
        }
        if u == 1.0 {
            return Ok(q.clone());
        }
        let spine: Vec<f64> = p
            .spine
            .iter()
            .zip(&q.spine)
            .map(|(a, b)| a + u * (b - a))
            .collect();
        if p.sheet == q.sheet {
            return BookPoint::new(p.sheet, p.t + u * (q.t - p.t), spine);
        }
        let s = (1.0 - u) * p.t - u * q.t;
        if s >= 0.0 {
            BookPoint::new(p.sheet, s, spine)
        } else {
            BookPoint::new(q.sheet, -s, spine)
        }
    }

    fn validate(&self, p: &BookPoint) -> Result<()> {
        if p.sheet == 0 || p.sheet > self.sheets {
            return Err(Error::Domain(format!(
                "sheet {} outside 1..={}",
                p.sheet, self.sheets
            )));
        }
        if p.spine.len() != self.spine_dim {
            return Err(Error::Domain(format!(
                "spine of dimension {} in a book with spine dimension {}",
                p.spine.len(),
                self.spine_dim
            )));
        }
        if !(p.t >= 0.0) || (p.t == 0.0 && p.sheet != 1) {
            return Err(Error::domain("book point is not canonical"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{check_metric_axioms, AxiomCheck};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bp(sheet: usize, t: f64, x: &[f64]) -> BookPoint {
        BookPoint::new(sheet, t, x.to_vec()).unwrap()
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(bp(3, 0.0, &[2.0]).sheet, 1);
        assert_eq!(bp(2, 1.0, &[2.0]), BookPoint { sheet: 2, t: 1.0, spine: vec![2.0] });
        let clamped = bp(2, -1e-14, &[2.0]);
        assert_eq!((clamped.sheet, clamped.t), (1, 0.0));
        assert!(BookPoint::new(2, -1e-3, vec![0.0]).is_err());
    }

    #[test]
    fn distances() {
        let b = OpenBook::new(3, 1).unwrap();
        assert_eq!(b.distance(&bp(1, 1.0, &[0.0]), &bp(1, 1.0, &[3.0])).unwrap(), 3.0);
        assert_eq!(b.distance(&bp(1, 1.0, &[0.0]), &bp(2, 1.0, &[0.0])).unwrap(), 2.0);
        let s = bp(1, 0.0, &[4.0]);
        assert_eq!(b.distance(&s, &s).unwrap(), 0.0);
        assert!(b.distance(&bp(4, 1.0, &[0.0]), &s).is_err());
        assert!(b.distance(&bp(1, 1.0, &[0.0, 1.0]), &s).is_err());
    }

    /// Path length through the spine point `z`, minimized by ternary search.
    fn unfolding_oracle(p: &BookPoint, q: &BookPoint) -> f64 {
        let len = |z: f64| {
            let a = (p.t * p.t + (p.spine[0] - z).powi(2)).sqrt();
            let b = (q.t * q.t + (q.spine[0] - z).powi(2)).sqrt();
            a + b
        };
        let (mut lo, mut hi) = (-50.0, 50.0);
        for _ in 0..200 {
            let m1 = lo + (hi - lo) / 3.0;
            let m2 = hi - (hi - lo) / 3.0;
            if len(m1) < len(m2) {
                hi = m2;
            } else {
                lo = m1;
            }
        }
        len(0.5 * (lo + hi))
    }

    #[test]
    fn cross_sheet_distance_matches_spine_crossing_minimum() {
        let b = OpenBook::new(3, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            let p = b.random_point(&mut rng);
            let mut q = b.random_point(&mut rng);
            if q.sheet == p.sheet {
                q.sheet = p.sheet % 3 + 1;
            }
            if q.t == 0.0 || p.t == 0.0 {
                continue;
            }
            let d = b.distance(&p, &q).unwrap();
            assert!((d - unfolding_oracle(&p, &q)).abs() < 1e-9);
        }
    }

    #[test]
    fn interpolation_examples() {
        let b = OpenBook::new(3, 1).unwrap();
        let p = bp(1, 1.0, &[5.0]);
        let q = bp(2, 1.0, &[5.0]);
        assert_eq!(b.interpolate(&p, &q, 0.0).unwrap(), p);
        assert_eq!(b.midpoint(&p, &q).unwrap(), bp(1, 0.0, &[5.0]));
        assert_eq!(b.midpoint(&bp(1, 1.0, &[0.0]), &bp(1, 3.0, &[4.0])).unwrap(), bp(1, 2.0, &[2.0]));
        let past = b.interpolate(&p, &bp(3, 3.0, &[1.0]), 0.5).unwrap();
        assert_eq!(past, bp(3, 1.0, &[3.0]));
        assert!(b.interpolate(&p, &q, 2.0).is_err());
    }

    #[test]
    fn axioms_hold_in_small_books() {
        for (k, d) in [(3, 1), (4, 2)] {
            let b = OpenBook::new(k, d).unwrap();
            let sampler = |rng: &mut ChaCha8Rng| Ok(b.random_point(rng));
            let report = check_metric_axioms(&b, &sampler, AxiomCheck::new(500, 1e-10)).unwrap();
            assert!(report.passes(), "B_{k}^{d}: {report:?}");
        }
    }

    #[test]
    fn frechet_examples() {
        let b = OpenBook::new(3, 1).unwrap();
        let one_sheet = [bp(2, 1.0, &[0.0]), bp(2, 3.0, &[2.0])];
        let m = b.frechet_mean(&one_sheet, &Weights::uniform(2).unwrap()).unwrap();
        assert_eq!(m, bp(2, 2.0, &[1.0]));

        let symmetric = [bp(1, 1.0, &[0.0]), bp(2, 1.0, &[0.0]), bp(3, 1.0, &[0.0])];
        let m = b.frechet_mean(&symmetric, &Weights::uniform(3).unwrap()).unwrap();
        assert_eq!(m, bp(1, 0.0, &[0.0]));

        let single = [bp(3, 0.7, &[-1.0])];
        assert_eq!(b.frechet_mean(&single, &Weights::uniform(1).unwrap()).unwrap(), single[0]);
        assert!(b.frechet_mean(&single, &Weights::uniform(2).unwrap()).is_err());
    }
}
