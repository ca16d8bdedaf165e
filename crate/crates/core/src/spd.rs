//! Symmetric positive-definite matrices under the affine-invariant metric
//! `d(A, B) = ‖log(B^{-1/2} A B^{-1/2})‖_F`.
//!
//! Matrix functions go through one symmetric eigendecomposition. Diagonal
//! inputs skip the factorization entirely: diagonal matrices commute, so
//! distance and geodesics reduce to entrywise scalar formulas.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::space::{check_fraction, GeodesicSpace, Weights};

/// Smallest admissible eigenvalue of a positive-definite matrix.
pub const EPS_PD: f64 = 1e-12;
/// Relative tolerance of the commutation test `‖AB - BA‖_F ≤ tol ‖A‖_F ‖B‖_F`.
pub const TOL_COMMUTE: f64 = 1e-8;
const TOL_SYMMETRY: f64 = 1e-12;
const EIG_EPS: f64 = 1e-15;
const EIG_MAX_ITER: usize = 10_000;

fn check_symmetric(m: &DMatrix<f64>) -> Result<()> {
    if !m.is_square() {
        return Err(Error::Domain(format!(
            "{}x{} matrix is not square",
            m.nrows(),
            m.ncols()
        )));
    }
    let n = m.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            let (a, b) = (m[(i, j)], m[(j, i)]);
            if !a.is_finite() || !b.is_finite() {
                return Err(Error::domain("matrix has non-finite entries"));
            }
            if (a - b).abs() > TOL_SYMMETRY * a.abs().max(1.0) {
                return Err(Error::Domain(format!(
                    "matrix not symmetric at ({i}, {j}): {a} vs {b}"
                )));
            }
        }
    }
    Ok(())
}

fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

fn off_diagonal_zero(m: &DMatrix<f64>) -> bool {
    let n = m.nrows();
    (0..n).all(|i| (0..n).all(|j| i == j || m[(i, j)] == 0.0))
}

/// Orthogonal diagonalization `A = Q Λ Qᵀ`, eigenvalues in descending order.
#[derive(Debug, Clone, PartialEq)]
pub struct SymEigen {
    pub eigenvalues: DVector<f64>,
    pub eigenvectors: DMatrix<f64>,
}

impl SymEigen {
    /// `Q f(Λ) Qᵀ`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> DMatrix<f64> {
        let q = &self.eigenvectors;
        let mut scaled = q.clone();
        for (j, lambda) in self.eigenvalues.iter().enumerate() {
            let fl = f(*lambda);
            scaled.column_mut(j).scale_mut(fl);
        }
        symmetrize(&(scaled * q.transpose()))
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

pub fn sym_eig(m: &DMatrix<f64>) -> Result<SymEigen> {
    check_symmetric(m)?;
    let n = m.nrows();
    let eig = SymmetricEigen::try_new(m.clone(), EIG_EPS, EIG_MAX_ITER)
        .ok_or_else(|| Error::Numeric(format!("symmetric eigensolver did not converge ({n}x{n})")))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let eigenvalues = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
    let mut eigenvectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    Ok(SymEigen {
        eigenvalues,
        eigenvectors,
    })
}

/// Scalar functions lifted to symmetric matrices through their spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MatFn {
    Log,
    Exp,
    Sqrt,
    InvSqrt,
    Power(f64),
}

impl MatFn {
    fn needs_positive(self) -> bool {
        !matches!(self, MatFn::Exp)
    }

    fn apply(self, x: f64) -> f64 {
        match self {
            MatFn::Log => x.ln(),
            MatFn::Exp => x.exp(),
            MatFn::Sqrt => x.sqrt(),
            MatFn::InvSqrt => 1.0 / x.sqrt(),
            MatFn::Power(t) => x.powf(t),
        }
    }
}

pub fn sym_matfn(m: &DMatrix<f64>, f: MatFn) -> Result<DMatrix<f64>> {
    let eig = sym_eig(m)?;
    if f.needs_positive() {
        let min = eig.min_eigenvalue();
        if min <= EPS_PD {
            return Err(Error::Domain(format!(
                "{f:?} needs a positive-definite argument, found eigenvalue {min:e}"
            )));
        }
    }
    Ok(eig.map(|x| f.apply(x)))
}

/// A symmetric positive-definite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SpdMatrix {
    m: DMatrix<f64>,
    diagonal: bool,
}

impl SpdMatrix {
    /// Validates symmetry and positive-definiteness.
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        check_symmetric(&m)?;
        if m.nrows() == 0 {
            return Err(Error::domain("empty matrix"));
        }
        let m = symmetrize(&m);
        let diagonal = off_diagonal_zero(&m);
        let min = if diagonal {
            m.diagonal().iter().copied().fold(f64::INFINITY, f64::min)
        } else {
            sym_eig(&m)?.min_eigenvalue()
        };
        if min <= EPS_PD {
            return Err(Error::Domain(format!(
                "matrix not positive-definite: smallest eigenvalue {min:e}"
            )));
        }
        Ok(SpdMatrix { m, diagonal })
    }

    pub fn from_diagonal(d: &[f64]) -> Result<Self> {
        Self::new(DMatrix::from_diagonal(&DVector::from_column_slice(d)))
    }

    pub fn from_row_slice(dim: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::Domain(format!(
                "{} entries for a {dim}x{dim} matrix",
                entries.len()
            )));
        }
        Self::new(DMatrix::from_row_slice(dim, dim, entries))
    }

    pub fn identity(dim: usize) -> Self {
        SpdMatrix {
            m: DMatrix::identity(dim, dim),
            diagonal: true,
        }
    }

    /// Exponential of a symmetric matrix; always positive-definite.
    pub fn exp_sym(log: &DMatrix<f64>) -> Result<Self> {
        if off_diagonal_zero(log) {
            return Self::from_diagonal(&log.diagonal().map(f64::exp).as_slice().to_vec());
        }
        Self::new(sym_matfn(log, MatFn::Exp)?)
    }

    /// Wraps a matrix that is known to be SPD by construction.
    fn trusted(m: DMatrix<f64>) -> Self {
        let m = symmetrize(&m);
        let diagonal = off_diagonal_zero(&m);
        SpdMatrix { m, diagonal }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn is_diagonal(&self) -> bool {
        self.diagonal
    }

    pub fn log(&self) -> Result<DMatrix<f64>> {
        if self.diagonal {
            return Ok(DMatrix::from_diagonal(&self.m.diagonal().map(f64::ln)));
        }
        sym_matfn(&self.m, MatFn::Log)
    }

    pub fn commutes_with(&self, other: &SpdMatrix) -> bool {
        if self.diagonal && other.diagonal {
            return true;
        }
        let (a, b) = (&self.m, &other.m);
        let comm = a * b - b * a;
        comm.norm() <= TOL_COMMUTE * a.norm() * b.norm()
    }

    /// `M A Mᵀ`.
    pub fn congruence(&self, m: &DMatrix<f64>) -> Result<SpdMatrix> {
        if m.nrows() != self.dim() || m.ncols() != self.dim() {
            return Err(Error::domain("congruence by a matrix of the wrong shape"));
        }
        SpdMatrix::new(symmetrize(&(m * &self.m * m.transpose())))
    }
}

fn same_dim(a: &SpdMatrix, b: &SpdMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::Domain(format!(
            "dimension mismatch: {} vs {}",
            a.dim(),
            b.dim()
        )));
    }
    Ok(())
}

/// Affine-invariant Riemannian distance.
pub fn spd_distance(a: &SpdMatrix, b: &SpdMatrix) -> Result<f64> {
    same_dim(a, b)?;
    if a.diagonal && b.diagonal {
        let s: f64 = a
            .m
            .diagonal()
            .iter()
            .zip(b.m.diagonal().iter())
            .map(|(x, y)| (x / y).ln().powi(2))
            .sum();
        return Ok(s.sqrt());
    }
    let inv_sqrt_b = sym_matfn(&b.m, MatFn::InvSqrt)?;
    let c = symmetrize(&(&inv_sqrt_b * &a.m * &inv_sqrt_b));
    let eig = sym_eig(&c)?;
    let min = eig.min_eigenvalue();
    if min <= 0.0 {
        return Err(Error::Numeric(format!(
            "whitened matrix lost definiteness (eigenvalue {min:e})"
        )));
    }
    Ok(eig.eigenvalues.iter().map(|l| l.ln().powi(2)).sum::<f64>().sqrt())
}

/// `A^{1/2} (A^{-1/2} B A^{-1/2})^t A^{1/2}`.
pub fn spd_interpolate(a: &SpdMatrix, b: &SpdMatrix, t: f64) -> Result<SpdMatrix> {
    check_fraction(t)?;
    same_dim(a, b)?;
    if t == 0.0 {
        return Ok(a.clone());
    }
    if t == 1.0 {
        return Ok(b.clone());
    }
    if a.diagonal && b.diagonal {
        let d = a
            .m
            .diagonal()
            .zip_map(&b.m.diagonal(), |x, y| x.powf(1.0 - t) * y.powf(t));
        return Ok(SpdMatrix {
            m: DMatrix::from_diagonal(&d),
            diagonal: true,
        });
    }
    let eig_a = sym_eig(&a.m)?;
    if eig_a.min_eigenvalue() <= EPS_PD {
        return Err(Error::domain("interpolation from a singular matrix"));
    }
    let sqrt_a = eig_a.map(f64::sqrt);
    let inv_sqrt_a = eig_a.map(|x| 1.0 / x.sqrt());
    let c = symmetrize(&(&inv_sqrt_a * &b.m * &inv_sqrt_a));
    let ct = sym_matfn(&c, MatFn::Power(t))?;
    Ok(SpdMatrix::trusted(&sqrt_a * ct * &sqrt_a))
}

/// Largest singular value of `A - B`.
pub fn spectral_distance(a: &SpdMatrix, b: &SpdMatrix) -> Result<f64> {
    same_dim(a, b)?;
    let diff = &a.m - &b.m;
    if a.diagonal && b.diagonal {
        return Ok(diff.diagonal().amax());
    }
    let eig = sym_eig(&symmetrize(&diff))?;
    Ok(eig.eigenvalues.amax())
}

/// Frobenius norm of `A - B`.
pub fn frobenius_distance(a: &SpdMatrix, b: &SpdMatrix) -> Result<f64> {
    same_dim(a, b)?;
    Ok((&a.m - &b.m).norm())
}

/// Weighted barycenter of a commuting family: `exp(Σ w_k log A_k)`.
///
/// For commuting matrices this equals the product form `(A_1 ⋯ A_n)^{1/n}`
/// under uniform weights.
pub fn commuting_weighted_barycenter(mats: &[SpdMatrix], weights: &Weights) -> Result<SpdMatrix> {
    let first = mats
        .first()
        .ok_or_else(|| Error::domain("barycenter of no matrices"))?;
    weights.check_len(mats.len())?;
    for (i, a) in mats.iter().enumerate() {
        same_dim(first, a)?;
        for b in &mats[i + 1..] {
            if !a.commutes_with(b) {
                return Err(Error::domain("matrices do not commute"));
            }
        }
    }
    let mut acc = DMatrix::zeros(first.dim(), first.dim());
    for (a, w) in mats.iter().zip(weights.as_slice()) {
        acc += a.log()? * *w;
    }
    SpdMatrix::exp_sym(&acc)
}

pub fn commuting_barycenter(mats: &[SpdMatrix]) -> Result<SpdMatrix> {
    commuting_weighted_barycenter(mats, &Weights::uniform(mats.len())?)
}

/// Random SPD matrix with eigenvalues log-uniform in `[cap^{-1/2}, cap^{1/2}]`
/// and a Haar-like random orthogonal basis.
pub fn random_spd<R: Rng + ?Sized>(dim: usize, condition_cap: f64, rng: &mut R) -> Result<SpdMatrix> {
    if !(condition_cap >= 1.0) {
        return Err(Error::Domain(format!("condition cap {condition_cap} < 1")));
    }
    if dim == 0 {
        return Err(Error::domain("zero-dimensional matrix"));
    }
    let half = 0.5 * condition_cap.ln();
    let eigenvalues: Vec<f64> = (0..dim)
        .map(|_| (rng.random_range(-1.0..=1.0) * half).exp())
        .collect();
    let g = DMatrix::from_fn(dim, dim, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..dim {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    let lambda = DMatrix::from_diagonal(&DVector::from_vec(eigenvalues));
    SpdMatrix::new(symmetrize(&(&q * lambda * q.transpose())))
}

/// The SPD manifold of fixed dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpdSpace {
    pub dim: usize,
}

impl SpdSpace {
    pub fn new(dim: usize) -> Self {
        SpdSpace { dim }
    }
}

impl GeodesicSpace for SpdSpace {
    type Point = SpdMatrix;

    fn distance(&self, x: &SpdMatrix, y: &SpdMatrix) -> Result<f64> {
        self.validate(x)?;
        spd_distance(x, y)
    }

    fn interpolate(&self, x: &SpdMatrix, y: &SpdMatrix, t: f64) -> Result<SpdMatrix> {
        self.validate(x)?;
        spd_interpolate(x, y, t)
    }

    fn validate(&self, p: &SpdMatrix) -> Result<()> {
        if p.dim() != self.dim {
            return Err(Error::Domain(format!(
                "{}x{} matrix in SPD({})",
                p.dim(),
                p.dim(),
                self.dim
            )));
        }
        Ok(())
    }
}
