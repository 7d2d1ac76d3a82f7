use nalgebra::DMatrix;
use num_complex::Complex64;

use super::gate::RotationGate;
use super::register::check_probability;
use crate::error::{Error, Result};

const TOL: f64 = 1e-10;

/// A 2×2 or 4×4 density matrix, used as an analysis view of reduced states.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: DMatrix<Complex64>,
}

impl DensityOperator {
    /// Validates Hermiticity, unit trace and positivity (to 1e-10).
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        let dim = matrix.nrows();
        if matrix.ncols() != dim || !(dim == 2 || dim == 4) {
            return Err(Error::invalid(format!(
                "density operator must be 2x2 or 4x4, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let rho = DensityOperator { matrix };
        if !rho.is_hermitian(TOL) {
            return Err(Error::invalid("density operator is not Hermitian"));
        }
        if (rho.trace() - 1.0).abs() > TOL {
            return Err(Error::invalid(format!("density operator trace {} != 1", rho.trace())));
        }
        if rho.eigenvalues().iter().any(|&l| l < -TOL) {
            return Err(Error::invalid("density operator has a negative eigenvalue"));
        }
        Ok(rho)
    }

    pub(crate) fn from_matrix_unchecked(matrix: DMatrix<Complex64>) -> Self {
        DensityOperator { matrix }
    }

    /// |ψ⟩⟨ψ| for a 2- or 4-dimensional state vector (normalized here).
    pub fn pure(state: &[Complex64]) -> Result<Self> {
        let dim = state.len();
        if !(dim == 2 || dim == 4) {
            return Err(Error::invalid(format!("pure state must have 2 or 4 amplitudes, got {dim}")));
        }
        let norm_sqr: f64 = state.iter().map(|a| a.norm_sqr()).sum();
        if norm_sqr == 0.0 || !norm_sqr.is_finite() {
            return Err(Error::invalid("pure state has zero or non-finite norm"));
        }
        let matrix = DMatrix::from_fn(dim, dim, |i, j| state[i] * state[j].conj() / norm_sqr);
        Ok(DensityOperator { matrix })
    }

    /// Diagonal single-qubit state.
    pub fn diagonal(p0: f64, p1: f64) -> Result<Self> {
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::new(p0, 0.0),
            Complex64::new(p1, 0.0),
        ]));
        DensityOperator::new(m)
    }

    /// I/2.
    pub fn maximally_mixed() -> Self {
        DensityOperator::diagonal(0.5, 0.5).expect("I/2 is a valid state")
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[(row, col)]
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let d = self.dim();
        (0..d).all(|i| (0..d).all(|j| (self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm() <= tol))
    }

    /// Eigenvalues of the Hermitian matrix, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix)
    }

    /// `(1−p)·ρ + p·I/2` on a single qubit.
    pub fn depolarize(&self, p: f64) -> Result<Self> {
        check_probability(p)?;
        if self.dim() != 2 {
            return Err(Error::invalid("depolarize is defined on single-qubit states only"));
        }
        let half = DMatrix::<Complex64>::identity(2, 2) * Complex64::new(0.5, 0.0);
        let matrix = &self.matrix * Complex64::new(1.0 - p, 0.0) + half * Complex64::new(p, 0.0);
        Ok(DensityOperator { matrix })
    }

    /// `R ρ R†` for a single-qubit state.
    pub fn rotate(&self, gate: &RotationGate) -> Result<Self> {
        if self.dim() != 2 {
            return Err(Error::invalid("rotation acts on single-qubit states only"));
        }
        let m = gate.complex_matrix();
        let u = DMatrix::from_fn(2, 2, |i, j| m[i][j]);
        let matrix = &u * &self.matrix * u.adjoint();
        Ok(DensityOperator { matrix })
    }

    /// Weighted mixture `Σ wᵢ ρᵢ`; weights are normalized.
    pub fn mixture(parts: &[(f64, DensityOperator)]) -> Result<Self> {
        let first = parts.first().ok_or_else(|| Error::invalid("empty mixture"))?;
        let dim = first.1.dim();
        let total: f64 = parts.iter().map(|(w, _)| w).sum();
        if total <= 0.0 {
            return Err(Error::invalid("mixture weights must sum to a positive value"));
        }
        let mut matrix = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
        for (w, rho) in parts {
            if rho.dim() != dim {
                return Err(Error::invalid("mixture components differ in dimension"));
            }
            matrix += &rho.matrix * Complex64::new(w / total, 0.0);
        }
        Ok(DensityOperator { matrix })
    }

    /// Largest absolute entry difference.
    pub fn max_abs_diff(&self, other: &DensityOperator) -> Result<f64> {
        same_dim(self, other)?;
        Ok((&self.matrix - &other.matrix).iter().map(|z| z.norm()).fold(0.0, f64::max))
    }
}

fn same_dim(a: &DensityOperator, b: &DensityOperator) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::invalid(format!("dimension mismatch: {} vs {}", a.dim(), b.dim())));
    }
    Ok(())
}

fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    let mut ev: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// `(1/2)‖a − b‖₁`, the sum of absolute eigenvalues of the Hermitian
/// difference halved. Clamped into [0, 1].
pub fn trace_distance(a: &DensityOperator, b: &DensityOperator) -> Result<f64> {
    same_dim(a, b)?;
    let diff = &a.matrix - &b.matrix;
    let d = 0.5 * hermitian_eigenvalues(&diff).iter().map(|l| l.abs()).sum::<f64>();
    Ok(d.clamp(0.0, 1.0))
}

/// `⟨ψ|ρ|ψ⟩` for a pure state given as amplitudes (normalized here).
pub fn fidelity(rho: &DensityOperator, pure: &[Complex64]) -> Result<f64> {
    if pure.len() != rho.dim() {
        return Err(Error::invalid(format!(
            "dimension mismatch: state has {} amplitudes, operator is {}x{}",
            pure.len(),
            rho.dim(),
            rho.dim()
        )));
    }
    let norm_sqr: f64 = pure.iter().map(|a| a.norm_sqr()).sum();
    if norm_sqr == 0.0 {
        return Err(Error::invalid("pure state has zero norm"));
    }
    let d = rho.dim();
    let mut f = Complex64::new(0.0, 0.0);
    for i in 0..d {
        for j in 0..d {
            f += pure[i].conj() * rho.matrix[(i, j)] * pure[j];
        }
    }
    Ok((f.re / norm_sqr).clamp(0.0, 1.0))
}

/// Free-function form of [`DensityOperator::depolarize`].
pub fn depolarize(rho: &DensityOperator, p: f64) -> Result<DensityOperator> {
    rho.depolarize(p)
}
