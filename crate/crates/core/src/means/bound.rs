use crate::error::{Error, Result};
use crate::space::GeodesicSpace;

/// Ingredients of the heteroscedastic law-of-large-numbers bound: the limit
/// `μ`, the per-step means `μ_k` and variances `Var(X_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundParams<P> {
    pub mu: P,
    pub mu_n: Vec<P>,
    pub var_n: Vec<f64>,
}

impl<P> BoundParams<P> {
    pub fn new(mu: P, mu_n: Vec<P>, var_n: Vec<f64>) -> Result<Self> {
        if mu_n.len() != var_n.len() {
            return Err(Error::Domain(format!(
                "{} means but {} variances",
                mu_n.len(),
                var_n.len()
            )));
        }
        if let Some(v) = var_n.iter().find(|v| !(**v >= 0.0)) {
            return Err(Error::Domain(format!("negative variance {v}")));
        }
        Ok(BoundParams { mu, mu_n, var_n })
    }

    pub fn len(&self) -> usize {
        self.mu_n.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mu_n.is_empty()
    }

    /// The bound for every `n = 1..=len`, in one pass.
    pub fn bounds<S: GeodesicSpace<Point = P>>(&self, space: &S) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(self.len());
        let (mut d_max, mut drift, mut var): (f64, f64, f64) = (0.0, 0.0, 0.0);
        for (k, (m, v)) in self.mu_n.iter().zip(&self.var_n).enumerate() {
            let d = space.distance(&self.mu, m)?;
            d_max = d_max.max(d).max(v.sqrt());
            drift += d;
            var += v;
            let n = (k + 1) as f64;
            out.push(9.0 * d_max / n * drift + var / (n * n));
        }
        Ok(out)
    }
}

/// `(9 D_n / n) Σ_{k≤n} d(μ_k, μ) + n^{-2} Σ_{k≤n} Var(X_k)` with
/// `D_n = max_{k≤n} max{d(μ, μ_k), √Var(X_k)}`: an upper bound on `E d(S_n, μ)²`.
pub fn slln_bound<S: GeodesicSpace>(space: &S, params: &BoundParams<S::Point>, n: usize) -> Result<f64> {
    if n == 0 || n > params.len() {
        return Err(Error::Domain(format!(
            "bound index {n} outside 1..={}",
            params.len()
        )));
    }
    let prefix = BoundParams {
        mu: params.mu.clone(),
        mu_n: params.mu_n[..n].to_vec(),
        var_n: params.var_n[..n].to_vec(),
    };
    Ok(*prefix.bounds(space)?.last().expect("n >= 1"))
}
