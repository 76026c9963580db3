//! Initial states, density matrices and spin operators.
//!
//! Qubit `|0⟩` is the excited (`Sz = +1/2`) level and `σ⁻ = |1⟩⟨0|`.
//! Spin bases run over `m = f, f−1, …, −f`, so index `k` holds `m = f − k`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, Subsystem, DEFAULT_EIGEN_TOL};

/// Elementwise Hermiticity slack for density matrices.
pub const HERMITIAN_SLACK: f64 = 1e-10;
/// Trace slack for density matrices.
pub const TRACE_SLACK: f64 = 1e-10;
/// Smallest eigenvalue accepted at construction.
pub const PSD_SLACK: f64 = 1e-8;

const NORM_TOL: f64 = 1e-12;

/// Normalized state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::Domain("state vector must be nonempty".into()));
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("state norm {norm} is not 1")));
        }
        Ok(Self { amplitudes })
    }

    /// Normalizes `amplitudes` before wrapping them.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::Domain("cannot normalize a zero or non-finite vector".into()));
        }
        Self::new(amplitudes.into_iter().map(|z| z / norm).collect())
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }
}

/// Bipartite density matrix satisfying Hermiticity, unit trace and
/// positivity up to a stated slack.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
    dim_a: usize,
    dim_b: usize,
}

impl DensityMatrix {
    /// Validates with the construction slack ([`PSD_SLACK`]).
    pub fn new(mat: ComplexMatrix, dim_a: usize, dim_b: usize) -> Result<Self> {
        Self::with_psd_slack(mat, dim_a, dim_b, PSD_SLACK)
    }

    /// Validates with a caller-chosen bound on negative eigenvalues.
    pub fn with_psd_slack(mat: ComplexMatrix, dim_a: usize, dim_b: usize, psd_slack: f64) -> Result<Self> {
        if dim_a == 0 || dim_b == 0 || mat.dim() != dim_a * dim_b {
            return Err(Error::DimensionMismatch {
                expected: dim_a * dim_b,
                found: mat.dim(),
            });
        }
        if !mat.is_finite() {
            return Err(Error::InvalidState("non-finite entries".into()));
        }
        let herm = mat.hermiticity_deviation();
        if herm > HERMITIAN_SLACK {
            return Err(Error::InvalidState(format!("not Hermitian (deviation {herm:.3e})")));
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > TRACE_SLACK || tr.im.abs() > TRACE_SLACK {
            return Err(Error::InvalidState(format!("trace {tr} is not 1")));
        }
        let min = mat.hermitian_eigenvalues(DEFAULT_EIGEN_TOL)?.min();
        if min < -psd_slack {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(Self { mat, dim_a, dim_b })
    }

    /// Single-system density matrix (`dim_b = 1`).
    pub fn single(mat: ComplexMatrix) -> Result<Self> {
        let d = mat.dim();
        Self::new(mat, d, 1)
    }

    pub fn maximally_mixed(dim_a: usize, dim_b: usize) -> Result<Self> {
        let n = dim_a * dim_b;
        Self::new(ComplexMatrix::identity(n).scale_real(1.0 / n as f64), dim_a, dim_b)
    }

    pub fn product(a: &DensityMatrix, b: &DensityMatrix) -> Result<Self> {
        Self::new(a.mat.kron(&b.mat), a.mat.dim(), b.mat.dim())
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn reduced(&self, traced: Subsystem) -> Result<ComplexMatrix> {
        self.mat.partial_trace(self.dim_a, self.dim_b, traced)
    }

    pub fn partial_transpose(&self) -> Result<ComplexMatrix> {
        self.mat.partial_transpose(self.dim_a, self.dim_b)
    }

    pub fn purity(&self) -> f64 {
        // Tr(ρ²) = Σ |ρ_ij|² for Hermitian ρ
        self.mat.frobenius_norm().powi(2)
    }
}

/// `(|0,0⟩ + |1,1⟩ + … + |d−1,d−1⟩)/√d`.
pub fn max_entangled(d: usize) -> Result<PureState> {
    if d < 2 {
        return Err(Error::Domain(format!("local dimension must be >= 2, got {d}")));
    }
    let amp = 1.0 / (d as f64).sqrt();
    let mut v = vec![Complex64::new(0.0, 0.0); d * d];
    for i in 0..d {
        v[i * d + i] = Complex64::new(amp, 0.0);
    }
    PureState::new(v)
}

/// `(|0,1⟩ − |1,0⟩)/√2`.
pub fn singlet() -> PureState {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let z = Complex64::new(0.0, 0.0);
    PureState {
        amplitudes: vec![z, Complex64::new(s, 0.0), Complex64::new(-s, 0.0), z],
    }
}

/// `Σ_m |m, −m⟩ / √d` in the descending-`m` spin basis.
pub fn anticorrelated(d: usize) -> Result<PureState> {
    if d < 2 {
        return Err(Error::Domain(format!("local dimension must be >= 2, got {d}")));
    }
    let amp = 1.0 / (d as f64).sqrt();
    let mut v = vec![Complex64::new(0.0, 0.0); d * d];
    for k in 0..d {
        // index k holds m = f − k; −m sits at index d − 1 − k
        v[k * d + (d - 1 - k)] = Complex64::new(amp, 0.0);
    }
    PureState::new(v)
}

/// `|ψ⟩⟨ψ|` on a `dim_a × dim_b` space.
pub fn projector(psi: &PureState, dim_a: usize, dim_b: usize) -> Result<DensityMatrix> {
    if psi.dim() != dim_a * dim_b {
        return Err(Error::DimensionMismatch {
            expected: dim_a * dim_b,
            found: psi.dim(),
        });
    }
    let mat = ComplexMatrix::outer(psi.amplitudes(), psi.amplitudes())?;
    DensityMatrix::new(mat, dim_a, dim_b)
}

/// Qubit lowering operator `σ⁻ = |1⟩⟨0|`.
pub fn sigma_minus() -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(2);
    m[(1, 0)] = Complex64::new(1.0, 0.0);
    m
}

/// `σ_z = diag(1, −1)`.
pub fn sigma_z() -> ComplexMatrix {
    ComplexMatrix::from_real_diag(&[1.0, -1.0])
}

/// Angular-momentum matrices for spin `f` (units of ħ).
#[derive(Debug, Clone, PartialEq)]
pub struct SpinOperators {
    two_f: usize,
    pub sx: ComplexMatrix,
    pub sy: ComplexMatrix,
    pub sz: ComplexMatrix,
    pub splus: ComplexMatrix,
    pub sminus: ComplexMatrix,
}

impl SpinOperators {
    /// `2f`, kept integral so half-integer spins are exact.
    pub fn two_f(&self) -> usize {
        self.two_f
    }

    pub fn f(&self) -> f64 {
        self.two_f as f64 / 2.0
    }

    pub fn dim(&self) -> usize {
        self.two_f + 1
    }

    /// `m` labels in basis order.
    pub fn m_values(&self) -> Vec<f64> {
        m_values(self.two_f)
    }
}

/// `m = f, f − 1, …, −f` for spin `f = two_f / 2`.
pub fn m_values(two_f: usize) -> Vec<f64> {
    let f = two_f as f64 / 2.0;
    (0..=two_f).map(|k| f - k as f64).collect()
}

/// Builds `Sx, Sy, Sz, S₊, S₋` with `⟨m+1|S₊|m⟩ = √((f−m)(f+m+1))`.
pub fn spin_operators(two_f: usize) -> Result<SpinOperators> {
    if two_f < 1 {
        return Err(Error::Domain("spin must satisfy 2f >= 1".into()));
    }
    let d = two_f + 1;
    let f = two_f as f64 / 2.0;
    let ms = m_values(two_f);
    let mut splus = ComplexMatrix::zeros(d);
    for k in 1..d {
        let m = ms[k];
        // |m⟩ at index k is raised to |m+1⟩ at index k − 1
        splus[(k - 1, k)] = Complex64::new(((f - m) * (f + m + 1.0)).sqrt(), 0.0);
    }
    let sminus = splus.dagger();
    let sz = ComplexMatrix::from_real_diag(&ms);
    let sx = (&splus + &sminus).scale_real(0.5);
    let sy = (&splus - &sminus).scale(Complex64::new(0.0, -0.5));
    Ok(SpinOperators {
        two_f,
        sx,
        sy,
        sz,
        splus,
        sminus,
    })
}
