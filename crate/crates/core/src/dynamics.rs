//! Lindblad master equations and a fixed-step RK4 integrator.
//!
//! Generator convention:
//! `ρ̇ = −i[H, ρ] + Σ_j (γ_j/2)(2 L_j ρ L_j† − L_j†L_j ρ − ρ L_j†L_j)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, HERMITIAN_TOL};
use crate::states::{m_values, sigma_minus, sigma_z, spin_operators, DensityMatrix};

/// Negative-eigenvalue slack for states recorded during integration.
pub const TRAJECTORY_PSD_SLACK: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct LindbladModel {
    hamiltonian: ComplexMatrix,
    jumps: Vec<(ComplexMatrix, f64)>,
}

impl LindbladModel {
    pub fn new(hamiltonian: ComplexMatrix, jumps: Vec<(ComplexMatrix, f64)>) -> Result<Self> {
        let dev = hamiltonian.hermiticity_deviation();
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian { max_deviation: dev });
        }
        for (op, rate) in &jumps {
            if op.dim() != hamiltonian.dim() {
                return Err(Error::DimensionMismatch {
                    expected: hamiltonian.dim(),
                    found: op.dim(),
                });
            }
            if !(*rate >= 0.0) || !rate.is_finite() {
                return Err(Error::Domain(format!("jump rate must be finite and >= 0, got {rate}")));
            }
        }
        Ok(Self { hamiltonian, jumps })
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.dim()
    }

    pub fn hamiltonian(&self) -> &ComplexMatrix {
        &self.hamiltonian
    }

    pub fn jumps(&self) -> &[(ComplexMatrix, f64)] {
        &self.jumps
    }

    /// Two independent copies of a one-particle generator:
    /// `H ⊗ I + I ⊗ H` with jumps `L ⊗ I` and `I ⊗ L` at the same rates.
    pub fn two_sided(&self) -> Self {
        let id = ComplexMatrix::identity(self.dim());
        let hamiltonian = &self.hamiltonian.kron(&id) + &id.kron(&self.hamiltonian);
        let mut jumps = Vec::with_capacity(2 * self.jumps.len());
        for (l, rate) in &self.jumps {
            jumps.push((l.kron(&id), *rate));
        }
        for (l, rate) in &self.jumps {
            jumps.push((id.kron(l), *rate));
        }
        Self { hamiltonian, jumps }
    }
}

/// Right-hand side in the form `−i(H_eff ρ − ρ H_eff†) + Σ γ L ρ L†` with
/// `H_eff = H − (i/2) Σ γ L†L`.
struct Generator {
    h_eff: ComplexMatrix,
    h_eff_dag: ComplexMatrix,
    jumps: Vec<(ComplexMatrix, ComplexMatrix, f64)>,
}

impl Generator {
    fn new(model: &LindbladModel) -> Self {
        let mut h_eff = model.hamiltonian.clone();
        let mut jumps = Vec::with_capacity(model.jumps.len());
        for (l, rate) in &model.jumps {
            let ld = l.dagger();
            let ldl = ld.matmul(l).expect("validated dims");
            h_eff.add_scaled(&ldl, Complex64::new(0.0, -0.5 * rate));
            jumps.push((l.clone(), ld, *rate));
        }
        let h_eff_dag = h_eff.dagger();
        Self {
            h_eff,
            h_eff_dag,
            jumps,
        }
    }

    fn rhs(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let mut out = self.h_eff.matmul(rho).expect("validated dims");
        let right = rho.matmul(&self.h_eff_dag).expect("validated dims");
        out = (&out - &right).scale(Complex64::new(0.0, -1.0));
        for (l, ld, rate) in &self.jumps {
            if *rate == 0.0 {
                continue;
            }
            let lrl = l.matmul(rho).and_then(|x| x.matmul(ld)).expect("validated dims");
            out.add_scaled(&lrl, Complex64::new(*rate, 0.0));
        }
        out
    }
}

/// Evaluates the master-equation right-hand side at `rho`.
pub fn lindblad_rhs(model: &LindbladModel, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    if rho.dim() != model.dim() {
        return Err(Error::DimensionMismatch {
            expected: model.dim(),
            found: rho.dim(),
        });
    }
    Ok(Generator::new(model).rhs(rho))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub dt: f64,
    pub t_max: f64,
    /// Record every `record_stride`-th step; the last step is always kept.
    pub record_stride: usize,
}

impl IntegratorConfig {
    pub fn new(dt: f64, t_max: f64, record_stride: usize) -> Result<Self> {
        let cfg = Self {
            dt,
            t_max,
            record_stride,
        };
        cfg.check()?;
        Ok(cfg)
    }

    fn check(&self) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::Domain(format!("dt must be > 0, got {}", self.dt)));
        }
        if !(self.t_max >= 0.0) || !self.t_max.is_finite() {
            return Err(Error::Domain(format!("t_max must be >= 0, got {}", self.t_max)));
        }
        if self.record_stride == 0 {
            return Err(Error::Domain("record_stride must be positive".into()));
        }
        Ok(())
    }

    pub fn steps(&self) -> usize {
        (self.t_max / self.dt).round() as usize
    }
}

/// Recorded `(t, ρ(t))` pairs, times strictly ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<(f64, &DensityMatrix)> {
        self.times.last().copied().zip(self.states.last())
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &DensityMatrix)> {
        self.times.iter().copied().zip(&self.states)
    }
}

/// Classical RK4 from `rho0`; recorded states are revalidated with
/// [`TRAJECTORY_PSD_SLACK`].
pub fn evolve(model: &LindbladModel, rho0: &DensityMatrix, cfg: &IntegratorConfig) -> Result<Trajectory> {
    cfg.check()?;
    if rho0.dim() != model.dim() {
        return Err(Error::DimensionMismatch {
            expected: model.dim(),
            found: rho0.dim(),
        });
    }
    let gen = Generator::new(model);
    let (da, db) = (rho0.dim_a(), rho0.dim_b());
    let steps = cfg.steps();
    let dt = cfg.dt;
    let half = Complex64::new(0.5 * dt, 0.0);
    let full = Complex64::new(dt, 0.0);
    let sixth = Complex64::new(dt / 6.0, 0.0);
    let third = Complex64::new(dt / 3.0, 0.0);

    let mut times = vec![0.0];
    let mut states = vec![rho0.clone()];
    let mut rho = rho0.matrix().clone();
    for step in 1..=steps {
        let k1 = gen.rhs(&rho);
        let mut tmp = rho.clone();
        tmp.add_scaled(&k1, half);
        let k2 = gen.rhs(&tmp);
        let mut tmp = rho.clone();
        tmp.add_scaled(&k2, half);
        let k3 = gen.rhs(&tmp);
        let mut tmp = rho.clone();
        tmp.add_scaled(&k3, full);
        let k4 = gen.rhs(&tmp);
        rho.add_scaled(&k1, sixth);
        rho.add_scaled(&k2, third);
        rho.add_scaled(&k3, third);
        rho.add_scaled(&k4, sixth);

        let t = step as f64 * dt;
        if !rho.is_finite() {
            return Err(Error::IntegrationDiverged {
                time: t,
                reason: "non-finite entries".into(),
            });
        }
        if step % cfg.record_stride == 0 || step == steps {
            let state = DensityMatrix::with_psd_slack(rho.clone(), da, db, TRAJECTORY_PSD_SLACK).map_err(|e| {
                Error::IntegrationDiverged {
                    time: t,
                    reason: e.to_string(),
                }
            })?;
            times.push(t);
            states.push(state);
        }
    }
    Ok(Trajectory { times, states })
}

/// Two qubits, each decaying through `σ⁻` at rate `gamma`, with
/// `H₀ = ω(σ_z ⊗ I + I ⊗ σ_z)`.
pub fn two_qubit_dissipation(omega: f64, gamma: f64) -> Result<LindbladModel> {
    let one = LindbladModel::new(sigma_z().scale_real(omega), vec![(sigma_minus(), gamma)])?;
    Ok(one.two_sided())
}

/// Two qubits, each dephased through `σ_z` at rate `gamma`, same `H₀` as
/// [`two_qubit_dissipation`].
pub fn two_qubit_dephasing(omega: f64, gamma: f64) -> Result<LindbladModel> {
    let one = LindbladModel::new(sigma_z().scale_real(omega), vec![(sigma_z(), gamma)])?;
    Ok(one.two_sided())
}

/// Spin-`f` particle, `H = Ω S_z`, single jump `S₋` at rate `gamma`.
pub fn spin_dissipation(two_f: usize, omega: f64, gamma: f64) -> Result<LindbladModel> {
    let s = spin_operators(two_f)?;
    LindbladModel::new(s.sz.scale_real(omega), vec![(s.sminus, gamma)])
}

/// Spin-`f` particle, `H = Ω S_z`, single jump `S_z` at rate `gamma`.
pub fn spin_dephasing(two_f: usize, omega: f64, gamma: f64) -> Result<LindbladModel> {
    let s = spin_operators(two_f)?;
    LindbladModel::new(s.sz.scale_real(omega), vec![(s.sz.clone(), gamma)])
}

fn raise_amp(f: f64, m: f64) -> f64 {
    // √((f+m+1)(f−m)) = ⟨m+1|S₊|m⟩
    ((f + m + 1.0) * (f - m)).max(0.0).sqrt()
}

fn lower_weight(f: f64, m: f64) -> f64 {
    // (f+m)(f−m+1) = ⟨m|S₊S₋|m⟩
    (f + m) * (f - m + 1.0)
}

/// First-order-in-`t` solution of the spin dissipation model from
/// `ρ(0) = (1/d) Σ_{m,n} |m⟩⟨n|`:
///
/// `ρ_mn ≈ 1/d + (γt/d)√((f+m+1)(f−m)(f+n+1)(f−n))
///        − (γt/2d)[(f+m)(f−m+1) + (f+n)(f−n+1)] − (iΩt/d)(m − n)`.
///
/// Valid for `γt, Ωt ≪ 1`; the error is `O(t²)`.
pub fn perturbative_spin_rho(two_f: usize, omega: f64, gamma: f64, t: f64) -> ComplexMatrix {
    spin_first_order(two_f, |f, m, n| {
        let d = (two_f + 1) as f64;
        let gain = gamma * t * raise_amp(f, m) * raise_amp(f, n);
        let loss = 0.5 * gamma * t * (lower_weight(f, m) + lower_weight(f, n));
        Complex64::new(1.0 + gain - loss, -omega * t * (m - n)) / d
    })
}

/// Reference closed form
/// `ρ_mn = 1/d + (γt/d)√(…) − (it/d)(Ωm + Ωn − iγ(f+m)(f−m+1) − iγ(f+n)(f−n+1))`.
///
/// Kept for comparison with [`perturbative_spin_rho`]: it carries the
/// phase `Ω(m + n)` and twice the anticommutator loss, so it is not trace
/// preserving and deviates from the dynamics at first order.
pub fn perturbative_spin_rho_reference(two_f: usize, omega: f64, gamma: f64, t: f64) -> ComplexMatrix {
    spin_first_order(two_f, |f, m, n| {
        let d = (two_f + 1) as f64;
        let bracket = Complex64::new(
            omega * m + omega * n,
            -gamma * lower_weight(f, m) - gamma * lower_weight(f, n),
        );
        let gain = gamma * t * (raise_amp(f, m) * raise_amp(f, n));
        (Complex64::new(1.0 + gain, 0.0) - Complex64::new(0.0, t) * bracket) / d
    })
}

fn spin_first_order(two_f: usize, entry: impl Fn(f64, f64, f64) -> Complex64) -> ComplexMatrix {
    let f = two_f as f64 / 2.0;
    let ms = m_values(two_f);
    ComplexMatrix::from_fn(two_f + 1, |i, j| entry(f, ms[i], ms[j]))
}

/// Exact solution of the spin dephasing model:
/// `ρ_mn(t) = ρ_mn(0) e^{−γ(m−n)²t/2 − iΩ(m−n)t}`.
pub fn spin_dephasing_exact(
    two_f: usize,
    omega: f64,
    gamma: f64,
    rho0: &ComplexMatrix,
    t: f64,
) -> Result<ComplexMatrix> {
    if rho0.dim() != two_f + 1 {
        return Err(Error::DimensionMismatch {
            expected: two_f + 1,
            found: rho0.dim(),
        });
    }
    let ms = m_values(two_f);
    Ok(ComplexMatrix::from_fn(two_f + 1, |i, j| {
        let dm = ms[i] - ms[j];
        rho0[(i, j)] * Complex64::from_polar((-0.5 * gamma * dm * dm * t).exp(), -omega * dm * t)
    }))
}
