//! Small dense Hermitian linear algebra.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{invalid, Result};

pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Hermiticity tolerance of [`hermitian_eig`], relative to the largest entry.
pub const HERMITIAN_TOL: f64 = 1e-10;

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn hermitian_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Eigendecomposition `H = V diag(λ) V†` with ascending `λ`.
pub fn hermitian_eig(h: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    if h.nrows() != h.ncols() {
        return invalid(format!("matrix is {}×{}, not square", h.nrows(), h.ncols()));
    }
    let scale = max_abs(h).max(1.0);
    let defect = hermitian_defect(h);
    if defect > HERMITIAN_TOL * scale {
        return invalid(format!("matrix is not Hermitian (defect {defect:.3e})"));
    }
    let n = h.nrows();
    if n == 0 {
        return Ok((Vec::new(), CMatrix::zeros(0, 0)));
    }
    // symmetrize so the solver sees an exactly Hermitian input
    let sym = (h + h.adjoint()).scale(0.5);
    let (raw_values, raw_vectors) = if sym.iter().all(|z| z.im == 0.0) {
        // real symmetric input: the real solver is several times faster
        let eig = sym.map(|z| z.re).symmetric_eigen();
        (eig.eigenvalues, eig.eigenvectors.map(|x| C64::new(x, 0.0)))
    } else {
        let eig = sym.symmetric_eigen();
        (eig.eigenvalues, eig.eigenvectors)
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| raw_values[a].total_cmp(&raw_values[b]));
    let values = order.iter().map(|&k| raw_values[k]).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| raw_vectors[(i, order[j])]);
    Ok((values, vectors))
}

/// `e^{-iHt}` for a fixed Hermitian `H`, through its eigendecomposition.
#[derive(Debug, Clone)]
pub struct SpectralPropagator {
    values: Vec<f64>,
    vectors: CMatrix,
}

impl SpectralPropagator {
    pub fn new(h: &CMatrix) -> Result<Self> {
        let (values, vectors) = hermitian_eig(h)?;
        Ok(Self { values, vectors })
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.values
    }

    pub fn eigenvectors(&self) -> &CMatrix {
        &self.vectors
    }

    /// Eigenbasis coefficients `V†ψ`.
    pub fn project(&self, psi: &CVector) -> CVector {
        self.vectors.adjoint() * psi
    }

    /// State at time `t` from coefficients returned by [`Self::project`].
    pub fn evolve_projected(&self, coeffs: &CVector, t: f64) -> CVector {
        let phased = CVector::from_iterator(
            coeffs.len(),
            coeffs
                .iter()
                .zip(&self.values)
                .map(|(c, l)| c * C64::from_polar(1.0, -l * t)),
        );
        &self.vectors * phased
    }

    pub fn evolve(&self, psi: &CVector, t: f64) -> CVector {
        self.evolve_projected(&self.project(psi), t)
    }

    /// The unitary `e^{-iHt}` itself.
    pub fn unitary(&self, t: f64) -> CMatrix {
        let n = self.dim();
        let mut scaled = self.vectors.clone();
        for j in 0..n {
            let ph = C64::from_polar(1.0, -self.values[j] * t);
            for i in 0..n {
                scaled[(i, j)] *= ph;
            }
        }
        scaled * self.vectors.adjoint()
    }
}

/// A small density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrixSmall {
    entries: CMatrix,
}

impl DensityMatrixSmall {
    pub fn new(entries: CMatrix) -> Result<Self> {
        if entries.nrows() != entries.ncols() || entries.nrows() == 0 {
            return invalid("density matrix must be square and non-empty");
        }
        let defect = hermitian_defect(&entries);
        if defect > 1e-12 {
            return invalid(format!("density matrix not Hermitian (defect {defect:.3e})"));
        }
        let tr = entries.trace();
        if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
            return invalid(format!("density matrix trace {tr} ≠ 1"));
        }
        let (values, _) = hermitian_eig(&entries)?;
        if values[0] < -1e-10 {
            return invalid(format!("density matrix has negative eigenvalue {:.3e}", values[0]));
        }
        Ok(Self { entries })
    }

    pub fn pure(psi: &CVector) -> Result<Self> {
        let norm = psi.norm();
        if (norm - 1.0).abs() > 1e-10 {
            return invalid(format!("state norm {norm} ≠ 1"));
        }
        Self::new(psi * psi.adjoint())
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.entries
    }

    pub fn purity(&self) -> f64 {
        // tr ρ² = Σ |ρ_ij|² for Hermitian ρ
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn expectation_pure(&self, psi: &CVector) -> Result<f64> {
        if psi.len() != self.dim() {
            return invalid(format!("state of length {} against a {}-dim density matrix", psi.len(), self.dim()));
        }
        Ok((psi.adjoint() * &self.entries * psi)[(0, 0)].re)
    }
}
