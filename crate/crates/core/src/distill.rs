//! Distillability diagnostics: fidelity `F = Tr(ρ₀ρ_f)`, the reduction
//! value `G = ⟨ψ|(Tr_B ρ) ⊗ I − ρ|ψ⟩`, the partial-transpose spectrum, and
//! the critical-time root finder.
//!
//! Verdicts never overclaim. A fidelity above `1/d` against a maximally
//! entangled reference forces `G < 0` and hence distillability; a negative
//! `G` is sufficient only; a positive partial transpose rules
//! distillation out.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::channels::{DephasingLaw, KrausChannel};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, Subsystem, DEFAULT_EIGEN_TOL};
use crate::states::{m_values, DensityMatrix, PureState};

/// Imaginary residue tolerated on quantities that must be real.
const REAL_TOL: f64 = 1e-12;
/// Partial-transpose eigenvalues above `−PPT_TOL` count as nonnegative.
pub const PPT_TOL: f64 = 1e-10;
/// Default bisection width.
pub const DEFAULT_BISECTION_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Criterion {
    Fidelity,
    Reduction,
    PartialTranspose,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Distillable {
    Yes,
    No,
    Inconclusive,
}

impl fmt::Display for Distillable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Distillable::Yes => "yes",
            Distillable::No => "no",
            Distillable::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriterionVerdict {
    pub criterion: Criterion,
    pub value: f64,
    pub threshold: f64,
    pub distillable: Distillable,
}

impl CriterionVerdict {
    /// Fidelity against a maximally entangled `d × d` reference state.
    pub fn fidelity(value: f64, local_dim: usize) -> Self {
        let threshold = 1.0 / local_dim as f64;
        Self {
            criterion: Criterion::Fidelity,
            value,
            threshold,
            distillable: if value > threshold {
                Distillable::Yes
            } else {
                Distillable::Inconclusive
            },
        }
    }

    pub fn reduction(value: f64) -> Self {
        Self {
            criterion: Criterion::Reduction,
            value,
            threshold: 0.0,
            distillable: if value < 0.0 {
                Distillable::Yes
            } else {
                Distillable::Inconclusive
            },
        }
    }

    /// Minimum partial-transpose eigenvalue on a `dim_a × dim_b` system.
    /// Negativity settles the question only for 2×2 and 2×3.
    pub fn partial_transpose(min_eigenvalue: f64, dim_a: usize, dim_b: usize) -> Self {
        let small = dim_a * dim_b <= 6 && dim_a.min(dim_b) <= 2;
        let distillable = if min_eigenvalue >= -PPT_TOL {
            Distillable::No
        } else if small {
            Distillable::Yes
        } else {
            Distillable::Inconclusive
        };
        Self {
            criterion: Criterion::PartialTranspose,
            value: min_eigenvalue,
            threshold: 0.0,
            distillable,
        }
    }
}

fn real_part(z: Complex64) -> Result<f64> {
    if z.im.abs() > REAL_TOL {
        return Err(Error::NotReal { imag: z.im });
    }
    Ok(z.re)
}

/// `Tr(ρ₀ ρ_f)`.
pub fn fidelity(rho0: &DensityMatrix, rhof: &DensityMatrix) -> Result<f64> {
    let (a, b) = (rho0.matrix(), rhof.matrix());
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    let n = a.dim();
    let mut tr = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            tr += a[(i, j)] * b[(j, i)];
        }
    }
    real_part(tr)
}

/// `Σ_i |⟨ψ|A_i|ψ⟩|²`, equal to `Tr(ρ₀ ρ_f)` for `ρ₀ = |ψ⟩⟨ψ|`.
pub fn fidelity_from_kraus(psi: &PureState, channel: &KrausChannel) -> Result<f64> {
    if psi.dim() != channel.dim() {
        return Err(Error::DimensionMismatch {
            expected: channel.dim(),
            found: psi.dim(),
        });
    }
    let v = psi.amplitudes();
    channel
        .operators()
        .iter()
        .map(|a| a.sandwich(v, v).map(|z| z.norm_sqr()))
        .sum()
}

/// `G = ⟨ψ|(Tr_B ρ_f) ⊗ I|ψ⟩ − ⟨ψ|ρ_f|ψ⟩`; negative values certify
/// distillability.
pub fn reduction_value(rhof: &DensityMatrix, psi: &PureState) -> Result<f64> {
    if psi.dim() != rhof.dim() {
        return Err(Error::DimensionMismatch {
            expected: rhof.dim(),
            found: psi.dim(),
        });
    }
    let reduced = rhof.reduced(Subsystem::B)?;
    let lifted = reduced.kron(&ComplexMatrix::identity(rhof.dim_b()));
    let v = psi.amplitudes();
    real_part(lifted.sandwich(v, v)? - rhof.matrix().sandwich(v, v)?)
}

/// Minimum eigenvalue of the partial transpose, with its verdict.
pub fn ppt_min_eigenvalue(rhof: &DensityMatrix) -> Result<CriterionVerdict> {
    let pt = rhof.partial_transpose()?;
    let min = pt.hermitian_eigenvalues(DEFAULT_EIGEN_TOL)?.min();
    Ok(CriterionVerdict::partial_transpose(min, rhof.dim_a(), rhof.dim_b()))
}

/// Closed-form fidelity curves for the qubit channels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReferenceCurve {
    /// `1/2 + e^{−γ_a t}/2`
    DephaseOne,
    /// `1/2 + e^{−(γ_a+γ_b) t}/2`
    DephaseTwo,
    /// `e^{−γ_a t/2}`
    DissipateOne,
    /// `e^{−(γ_a+γ_b) t/2}`
    DissipateTwo,
}

impl FromStr for ReferenceCurve {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dephase_one" => Ok(Self::DephaseOne),
            "dephase_two" => Ok(Self::DephaseTwo),
            "dissipate_one" => Ok(Self::DissipateOne),
            "dissipate_two" => Ok(Self::DissipateTwo),
            other => Err(Error::Domain(format!("unknown curve kind '{other}'"))),
        }
    }
}

/// Evaluates the closed-form curve; `gamma_b` is ignored by one-sided kinds.
pub fn reference_fidelity(kind: ReferenceCurve, gamma_a: f64, gamma_b: f64, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("time must be >= 0, got {t}")));
    }
    Ok(match kind {
        ReferenceCurve::DephaseOne => 0.5 + 0.5 * (-gamma_a * t).exp(),
        ReferenceCurve::DephaseTwo => 0.5 + 0.5 * (-(gamma_a + gamma_b) * t).exp(),
        ReferenceCurve::DissipateOne => (-0.5 * gamma_a * t).exp(),
        ReferenceCurve::DissipateTwo => (-0.5 * (gamma_a + gamma_b) * t).exp(),
    })
}

/// `S(t) = Σ_{m,n} e^{−γᵃ_mn − γᵇ_mn} cos(Γᵃ_mn + Γᵇ_mn)` over `d` levels.
pub fn dephasing_coherence_sum(d: usize, law_a: &DephasingLaw, law_b: &DephasingLaw, t: f64) -> Result<f64> {
    law_a.validate(d, t)?;
    law_b.validate(d, t)?;
    let mut sum = 0.0;
    for m in 0..d {
        for n in 0..d {
            let decay = law_a.decay(m, n, t) + law_b.decay(m, n, t);
            let phase = law_a.phase(m, n, t) + law_b.phase(m, n, t);
            sum += (-decay).exp() * phase.cos();
        }
    }
    Ok(sum)
}

/// Reduction value of a two-sided dephased maximally entangled state,
/// `G(t) = 1/d − S(t)/d²` with `S` from [`dephasing_coherence_sum`].
pub fn dephasing_reduction(d: usize, law_a: &DephasingLaw, law_b: &DephasingLaw, t: f64) -> Result<f64> {
    let s = dephasing_coherence_sum(d, law_a, law_b, t)?;
    let d = d as f64;
    Ok(1.0 / d - s / (d * d))
}

/// First-order reduction value for two-sided spin dissipation:
///
/// `G(t) = −(1/d²) Σ_{m>n} 2 Re[B_mn²]`,
/// `B_mn = 1 + γt√((f+m+1)(f−m))√((f+n+1)(f−n))
///         − it(Ωm + Ωn − iγ(f+m)(f−m+1) − iγ(f+n)(f−n+1))`.
pub fn first_order_reduction_spin_dissipation(two_f: usize, omega: f64, gamma: f64, t: f64) -> f64 {
    let f = two_f as f64 / 2.0;
    let d = (two_f + 1) as f64;
    let ms = m_values(two_f);
    let mut sum = 0.0;
    for &m in &ms {
        for &n in ms.iter().filter(|&&n| n < m) {
            let gain =
                gamma * t * ((f + m + 1.0) * (f - m)).max(0.0).sqrt() * ((f + n + 1.0) * (f - n)).max(0.0).sqrt();
            let bracket = Complex64::new(
                omega * m + omega * n,
                -gamma * (f + m) * (f - m + 1.0) - gamma * (f + n) * (f - n + 1.0),
            );
            let b = Complex64::new(1.0 + gain, 0.0) - Complex64::new(0.0, t) * bracket;
            sum += 2.0 * (b * b).re;
        }
    }
    -sum / (d * d)
}

/// Root of a time function bracketed by bisection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalTime {
    pub t_c: f64,
    pub bracket: (f64, f64),
    /// `|g(t_c)|`.
    pub residual: f64,
    pub iterations: usize,
}

fn eval(g: &impl Fn(f64) -> f64, t: f64) -> Result<f64> {
    let v = g(t);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite { t })
    }
}

/// Bisects `g` on `[t_lo, t_hi]` until the bracket is no wider than `tol`.
pub fn critical_time(g: impl Fn(f64) -> f64, t_lo: f64, t_hi: f64, tol: f64) -> Result<CriticalTime> {
    if !(tol > 0.0) || !(t_hi > t_lo) {
        return Err(Error::Domain(format!(
            "invalid bracket [{t_lo}, {t_hi}] or tolerance {tol}"
        )));
    }
    let g_lo = eval(&g, t_lo)?;
    let g_hi = eval(&g, t_hi)?;
    if g_lo == 0.0 || g_hi == 0.0 {
        let t_c = if g_lo == 0.0 { t_lo } else { t_hi };
        return Ok(CriticalTime {
            t_c,
            bracket: (t_lo, t_hi),
            residual: 0.0,
            iterations: 0,
        });
    }
    if g_lo.signum() == g_hi.signum() {
        return Err(Error::NoSignChange { lo: t_lo, hi: t_hi });
    }
    let (mut lo, mut hi) = (t_lo, t_hi);
    let mut iterations = 0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let g_mid = eval(&g, mid)?;
        iterations += 1;
        if g_mid == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if g_mid.signum() == g_lo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t_c = 0.5 * (lo + hi);
    Ok(CriticalTime {
        t_c,
        bracket: (t_lo, t_hi),
        residual: eval(&g, t_c)?.abs(),
        iterations,
    })
}

/// Scans `[t_lo, t_hi]` on `scan_points` uniform intervals for the first
/// sign change of `g`, then bisects it.
pub fn first_crossing(
    g: impl Fn(f64) -> f64,
    t_lo: f64,
    t_hi: f64,
    scan_points: usize,
    tol: f64,
) -> Result<CriticalTime> {
    if scan_points == 0 || !(t_hi > t_lo) {
        return Err(Error::Domain(
            "scan needs a nonempty interval and at least one step".into(),
        ));
    }
    let h = (t_hi - t_lo) / scan_points as f64;
    let mut a = t_lo;
    let mut g_a = eval(&g, a)?;
    for k in 1..=scan_points {
        let b = if k == scan_points { t_hi } else { t_lo + k as f64 * h };
        let g_b = eval(&g, b)?;
        if g_a == 0.0 || g_a.signum() != g_b.signum() {
            let mut ct = critical_time(&g, a, b, tol)?;
            ct.bracket = (a, b);
            return Ok(ct);
        }
        a = b;
        g_a = g_b;
    }
    Err(Error::NoSignChange { lo: t_lo, hi: t_hi })
}
