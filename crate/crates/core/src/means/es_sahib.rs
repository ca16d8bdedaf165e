use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::space::GeodesicSpace;

/// Parameters of the Es-Sahib–Heinich construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EsSahibConfig {
    /// Stop once the working tuple has diameter at most this.
    pub tol: f64,
    pub max_rounds: usize,
    /// Largest supported number of points; cost grows exponentially with it.
    pub n_cap: usize,
    /// Inner means are resolved to `max(tol / 4, inner_ratio * d)`, where `d` is
    /// the diameter of the calling level's tuple. Zero resolves every level to
    /// `tol / 4`.
    pub inner_ratio: f64,
    /// Scheduling of the `n` leave-one-out means of the outermost level.
    pub execution: Execution,
}

impl Default for EsSahibConfig {
    fn default() -> Self {
        EsSahibConfig {
            tol: 1e-9,
            max_rounds: 200,
            n_cap: 8,
            inner_ratio: 0.25,
            execution: Execution::Sequential,
        }
    }
}

/// The symmetric mean `β_n` determined by idempotence, L¹-contraction and the
/// leave-one-out fixed-point axiom.
///
/// `β_1` is the identity and `β_2` the geodesic midpoint. For `n ≥ 3` the tuple
/// is repeatedly replaced by its leave-one-out means `x̂_i = β_{n-1}(x_{-i})`,
/// which leaves `β_n` unchanged and shrinks the diameter by a factor
/// `1/(n-1)` per round, until the diameter drops below `tol`; any element of
/// the final tuple is returned.
///
/// Inner levels stop early, at a tolerance proportional to the caller's
/// current diameter, and report the inductive mean of their final tuple
/// instead of a single element. That mean equals `β_{n-1}` exactly when the
/// space is flat, so the early stop costs no accuracy there. In curved spaces
/// it leaves an error of order `inner_ratio²` times the data diameter
/// (around `1e-4` relative at the default); set `inner_ratio = 0` for the
/// plain recursion, which is affordable up to `n ≈ 5`.
pub fn es_sahib_mean<S: GeodesicSpace>(
    space: &S,
    points: &[S::Point],
    cfg: &EsSahibConfig,
) -> Result<S::Point> {
    if points.is_empty() {
        return Err(Error::domain("Es-Sahib mean of an empty tuple"));
    }
    if points.len() > cfg.n_cap {
        return Err(Error::Capacity {
            n: points.len(),
            cap: cfg.n_cap,
        });
    }
    if !(cfg.tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {}", cfg.tol)));
    }
    if !(cfg.inner_ratio >= 0.0 && cfg.inner_ratio < 1.0) {
        return Err(Error::Domain(format!(
            "inner_ratio must lie in [0, 1), got {}",
            cfg.inner_ratio
        )));
    }
    let mut tuple = iterate(space, points, cfg.tol, cfg, cfg.execution)?;
    Ok(tuple.swap_remove(0))
}

fn diameter<S: GeodesicSpace>(space: &S, pts: &[S::Point]) -> Result<f64> {
    let mut d: f64 = 0.0;
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            d = d.max(space.distance(a, b)?);
        }
    }
    Ok(d)
}

/// Runs the leave-one-out map until the tuple diameter is at most `tol`.
fn iterate<S: GeodesicSpace>(
    space: &S,
    pts: &[S::Point],
    tol: f64,
    cfg: &EsSahibConfig,
    execution: Execution,
) -> Result<Vec<S::Point>> {
    match pts.len() {
        1 => {
            space.validate(&pts[0])?;
            return Ok(pts.to_vec());
        }
        2 => return Ok(vec![space.midpoint(&pts[0], &pts[1])?]),
        _ => {}
    }
    let n = pts.len();
    let mut cur = pts.to_vec();
    let mut diam = diameter(space, &cur)?;
    for _ in 0..cfg.max_rounds {
        if diam <= tol {
            return Ok(cur);
        }
        let inner_tol = (tol / 4.0).max(cfg.inner_ratio * diam);
        let next = execution.map_range(n, |i| {
            let rest: Vec<S::Point> = cur
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, p)| p.clone())
                .collect();
            pooled(space, &rest, inner_tol, cfg)
        });
        cur = next.into_iter().collect::<Result<_>>()?;
        diam = diameter(space, &cur)?;
    }
    if diam <= tol {
        return Ok(cur);
    }
    Err(Error::Convergence {
        rounds: cfg.max_rounds,
        diameter: diam,
    })
}

fn pooled<S: GeodesicSpace>(
    space: &S,
    pts: &[S::Point],
    tol: f64,
    cfg: &EsSahibConfig,
) -> Result<S::Point> {
    let tuple = iterate(space, pts, tol, cfg, Execution::Sequential)?;
    let mut acc = tuple[0].clone();
    for (k, p) in tuple.iter().enumerate().skip(1) {
        acc = space.interpolate(&acc, p, 1.0 / (k + 1) as f64)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{Euclidean, EuclideanPoint};

    fn line(v: &[f64]) -> Vec<EuclideanPoint> {
        v.iter().map(|x| EuclideanPoint(vec![*x])).collect()
    }

    #[test]
    fn small_cases() {
        let e = Euclidean::new(1);
        let cfg = EsSahibConfig::default();
        assert_eq!(es_sahib_mean(&e, &line(&[2.0]), &cfg).unwrap().0[0], 2.0);
        assert_eq!(es_sahib_mean(&e, &line(&[2.0, 5.0]), &cfg).unwrap().0[0], 3.5);
        let m = es_sahib_mean(&e, &line(&[0.0, 3.0, 6.0]), &cfg).unwrap();
        assert!((m.0[0] - 3.0).abs() < 1e-9);
        let same = es_sahib_mean(&e, &line(&[1.25; 5]), &cfg).unwrap();
        assert_eq!(same.0[0], 1.25);
    }

    #[test]
    fn leave_one_out_round_preserves_the_sum() {
        // in the line the leave-one-out map is x̂_i = (Σx - x_i)/(n-1)
        let xs = [0.0, 3.0, 6.0, 10.0];
        let s: f64 = xs.iter().sum();
        let hat: Vec<f64> = xs.iter().map(|x| (s - x) / 3.0).collect();
        assert!((hat.iter().sum::<f64>() - s).abs() < 1e-12);
        let e = Euclidean::new(1);
        let a = es_sahib_mean(&e, &line(&xs), &EsSahibConfig::default()).unwrap();
        let b = es_sahib_mean(&e, &line(&hat), &EsSahibConfig::default()).unwrap();
        assert!((a.0[0] - b.0[0]).abs() < 1e-9);
    }

    #[test]
    fn errors() {
        let e = Euclidean::new(1);
        let cfg = EsSahibConfig::default();
        assert!(matches!(
            es_sahib_mean(&e, &line(&[0.0; 9]), &cfg),
            Err(Error::Capacity { n: 9, cap: 8 })
        ));
        assert!(es_sahib_mean(&e, &[], &cfg).is_err());
        let tight = EsSahibConfig { max_rounds: 2, ..cfg };
        match es_sahib_mean(&e, &line(&[0.0, 1.0, 5.0]), &tight) {
            Err(Error::Convergence { rounds: 2, diameter }) => assert!(diameter > 0.0),
            other => panic!("expected convergence error, got {other:?}"),
        }
        let bad_tol = EsSahibConfig { tol: 0.0, ..cfg };
        assert!(es_sahib_mean(&e, &line(&[0.0, 1.0, 2.0]), &bad_tol).is_err());
        let bad_ratio = EsSahibConfig { inner_ratio: 1.0, ..cfg };
        assert!(es_sahib_mean(&e, &line(&[0.0, 1.0, 2.0]), &bad_ratio).is_err());
    }

    #[test]
    fn early_inner_stop_is_exact_in_the_line() {
        let e = Euclidean::new(1);
        let xs = line(&[0.0, 7.0, 1.0, -3.0, 2.5]);
        let strict = EsSahibConfig { inner_ratio: 0.0, ..Default::default() };
        let a = es_sahib_mean(&e, &xs, &strict).unwrap().0[0];
        let b = es_sahib_mean(&e, &xs, &EsSahibConfig::default()).unwrap().0[0];
        assert!((a - 1.5).abs() < 1e-9);
        assert!((b - 1.5).abs() < 1e-9);
    }
}
