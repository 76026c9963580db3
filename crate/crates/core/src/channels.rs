//! Kraus channels, the qubit phase- and amplitude-damping channels, and
//! the elementwise dephasing propagator with its phase integral.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::states::DensityMatrix;

/// Completeness tolerance enforced by [`KrausChannel::new`].
pub const COMPLETENESS_TOL: f64 = 1e-10;
/// Default Simpson point count for [`phase_integral`].
pub const DEFAULT_QUAD_POINTS: usize = 2001;

/// Ordered set of Kraus operators `{A_i}` acting as `ρ ↦ Σ A_i ρ A_i†`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    dim: usize,
    operators: Vec<ComplexMatrix>,
}

/// Outcome of a completeness check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationReport {
    /// `max_ij |(Σ A†A − I)_ij|`.
    pub max_deviation: f64,
    pub tol: f64,
    pub passed: bool,
}

impl KrausChannel {
    /// Requires `Σ A_i† A_i = I` within [`COMPLETENESS_TOL`].
    pub fn new(operators: Vec<ComplexMatrix>) -> Result<Self> {
        let ch = Self::unchecked(operators)?;
        let report = ch.validate(COMPLETENESS_TOL);
        if !report.passed {
            return Err(Error::IncompleteChannel {
                deviation: report.max_deviation,
            });
        }
        Ok(ch)
    }

    /// Accepts any nonempty, equal-dimension operator list. Used to inspect
    /// operator sets that may not be trace preserving.
    pub fn unchecked(operators: Vec<ComplexMatrix>) -> Result<Self> {
        let dim = operators
            .first()
            .ok_or_else(|| Error::Domain("a channel needs at least one operator".into()))?
            .dim();
        if let Some(bad) = operators.iter().find(|a| a.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        Ok(Self { dim, operators })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            operators: vec![ComplexMatrix::identity(dim)],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn validate(&self, tol: f64) -> ValidationReport {
        let mut sum = ComplexMatrix::zeros(self.dim);
        for a in &self.operators {
            let ada = a.dagger().matmul(a).expect("operators share one dimension");
            sum += &ada;
        }
        let max_deviation = sum.max_abs_diff(&ComplexMatrix::identity(self.dim));
        ValidationReport {
            max_deviation,
            tol,
            passed: max_deviation <= tol,
        }
    }

    /// `Σ A_i ρ A_i†`, revalidated as a density matrix.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let out = self.apply_matrix(rho.matrix())?;
        DensityMatrix::new(out, rho.dim_a(), rho.dim_b())
    }

    /// `Σ A_i X A_i†` on an arbitrary matrix.
    pub fn apply_matrix(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.dim(),
            });
        }
        let mut out = ComplexMatrix::zeros(self.dim);
        for a in &self.operators {
            out += &a.matmul(x)?.matmul(&a.dagger())?;
        }
        Ok(out)
    }

    /// `A_i ↦ A_i ⊗ I_{dim_b}`: the channel acting on subsystem A only.
    pub fn lift_one_sided(&self, dim_b: usize) -> Self {
        let id = ComplexMatrix::identity(dim_b);
        Self {
            dim: self.dim * dim_b,
            operators: self.operators.iter().map(|a| a.kron(&id)).collect(),
        }
    }

    /// Product channel with every cross term `A_i ⊗ B_j`.
    pub fn tensor(&self, other: &KrausChannel) -> Self {
        let mut operators = Vec::with_capacity(self.len() * other.len());
        for a in &self.operators {
            for b in &other.operators {
                operators.push(a.kron(b));
            }
        }
        Self {
            dim: self.dim * other.dim,
            operators,
        }
    }

    /// Pairs `A_i ⊗ B_i` index by index, without cross terms. Generally not
    /// trace preserving; returned unchecked.
    pub fn paired_product(&self, other: &KrausChannel) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        Self::unchecked(
            self.operators
                .iter()
                .zip(&other.operators)
                .map(|(a, b)| a.kron(b))
                .collect(),
        )
    }
}

fn check_rate_time(gamma: f64, t: f64) -> Result<()> {
    if !(gamma >= 0.0) || !gamma.is_finite() {
        return Err(Error::Domain(format!("rate must be finite and >= 0, got {gamma}")));
    }
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("time must be >= 0, got {t}")));
    }
    Ok(())
}

/// Qubit phase damping: `A₁ = diag(1, e^{−γt})`, `A₂ = diag(0, √(1−e^{−2γt}))`.
pub fn phase_damping(gamma: f64, t: f64) -> Result<KrausChannel> {
    check_rate_time(gamma, t)?;
    let e = (-gamma * t).exp();
    let a1 = ComplexMatrix::from_real_diag(&[1.0, e]);
    let a2 = ComplexMatrix::from_real_diag(&[0.0, (-(-2.0 * gamma * t).exp_m1()).sqrt()]);
    KrausChannel::new(vec![a1, a2])
}

/// Qubit amplitude damping: `A₁ = diag(1, e^{−γt/2})` and `A₂` with the
/// single entry `−√(1−e^{−γt})` at row 0, column 1, so population flows
/// from level 1 into level 0.
pub fn amplitude_damping(gamma: f64, t: f64) -> Result<KrausChannel> {
    check_rate_time(gamma, t)?;
    let a1 = ComplexMatrix::from_real_diag(&[1.0, (-0.5 * gamma * t).exp()]);
    let mut a2 = ComplexMatrix::zeros(2);
    a2[(0, 1)] = Complex64::new(-(-(-gamma * t).exp_m1()).sqrt(), 0.0);
    KrausChannel::new(vec![a1, a2])
}

type LawFn = Arc<dyn Fn(usize, usize, f64) -> f64 + Send + Sync>;

/// Elementwise dephasing `ρ_mn(t) = ρ_mn(0) e^{−γ_mn(t) − iΓ_mn(t)}` in the
/// eigenbasis of the system Hamiltonian.
///
/// The closures must be pure: `decay(m, m, t) = 0`, `decay ≥ 0`, and
/// `phase(m, n, t) = −phase(n, m, t)`. [`DephasingLaw::validate`] checks
/// these on a given dimension and time.
#[derive(Clone)]
pub struct DephasingLaw {
    decay: LawFn,
    phase: LawFn,
}

impl fmt::Debug for DephasingLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("DephasingLaw { .. }")
    }
}

impl DephasingLaw {
    pub fn new(
        decay: impl Fn(usize, usize, f64) -> f64 + Send + Sync + 'static,
        phase: impl Fn(usize, usize, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            decay: Arc::new(decay),
            phase: Arc::new(phase),
        }
    }

    /// `γ_mn(t) = γ t` off the diagonal, no phase. On a qubit this is the
    /// phase-damping channel.
    pub fn uniform(gamma: f64) -> Self {
        Self::new(move |m, n, t| if m == n { 0.0 } else { gamma * t }, |_, _, _| 0.0)
    }

    /// Decay from `decay`, phase from [`phase_integral`] with level values
    /// `levels[m]`.
    pub fn with_spectral_phase(
        decay: impl Fn(usize, usize, f64) -> f64 + Send + Sync + 'static,
        spectrum: SpectralDensity,
        levels: Vec<f64>,
        quad_points: usize,
    ) -> Self {
        let phase = move |m: usize, n: usize, t: f64| {
            phase_integral(&spectrum, levels[m], levels[n], t, quad_points).unwrap_or(f64::NAN)
        };
        Self::new(decay, phase)
    }

    pub fn decay(&self, m: usize, n: usize, t: f64) -> f64 {
        (self.decay)(m, n, t)
    }

    pub fn phase(&self, m: usize, n: usize, t: f64) -> f64 {
        (self.phase)(m, n, t)
    }

    /// Multiplier `e^{−γ_mn(t) − iΓ_mn(t)}`.
    pub fn factor(&self, m: usize, n: usize, t: f64) -> Complex64 {
        Complex64::from_polar((-self.decay(m, n, t)).exp(), -self.phase(m, n, t))
    }

    pub fn validate(&self, dim: usize, t: f64) -> Result<()> {
        const TOL: f64 = 1e-12;
        for m in 0..dim {
            for n in 0..dim {
                let g = self.decay(m, n, t);
                let p = self.phase(m, n, t);
                if !g.is_finite() || !p.is_finite() {
                    return Err(Error::InvalidLaw(format!("non-finite value at ({m}, {n}), t = {t}")));
                }
                if m == n && g != 0.0 {
                    return Err(Error::InvalidLaw(format!("diagonal decay {g} at m = {m}")));
                }
                if g < 0.0 {
                    return Err(Error::InvalidLaw(format!("negative decay {g} at ({m}, {n})")));
                }
                let q = self.phase(n, m, t);
                if (p + q).abs() > TOL * (1.0 + p.abs()) {
                    return Err(Error::InvalidLaw(format!(
                        "phase not antisymmetric at ({m}, {n}): {p} vs {q}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Applies `law` to a single-system matrix.
pub fn dephase(rho0: &ComplexMatrix, law: &DephasingLaw, t: f64) -> Result<ComplexMatrix> {
    let d = rho0.dim();
    law.validate(d, t)?;
    Ok(ComplexMatrix::from_fn(d, |m, n| {
        if m == n {
            rho0[(m, m)]
        } else {
            rho0[(m, n)] * law.factor(m, n, t)
        }
    }))
}

/// Applies independent laws to both halves of a `d × d` bipartite matrix:
/// entry `((i, j), (k, l))` picks up `factor_a(i, k) · factor_b(j, l)`.
pub fn dephase_bipartite(
    rho0: &DensityMatrix,
    law_a: &DephasingLaw,
    law_b: &DephasingLaw,
    t: f64,
) -> Result<DensityMatrix> {
    let (da, db) = (rho0.dim_a(), rho0.dim_b());
    law_a.validate(da, t)?;
    law_b.validate(db, t)?;
    let m = rho0.matrix();
    let out = ComplexMatrix::from_fn(da * db, |r, c| {
        let (i, j) = (r / db, r % db);
        let (k, l) = (c / db, c % db);
        let fa = if i == k {
            Complex64::new(1.0, 0.0)
        } else {
            law_a.factor(i, k, t)
        };
        let fb = if j == l {
            Complex64::new(1.0, 0.0)
        } else {
            law_b.factor(j, l, t)
        };
        m[(r, c)] * fa * fb
    });
    DensityMatrix::new(out, da, db)
}

type SpectralFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Environment coupling `g_ω` and spectral weight `ρ(ω)` on a finite
/// support `[lo, hi]` with `lo > 0`.
#[derive(Clone)]
pub struct SpectralDensity {
    coupling: SpectralFn,
    weight: SpectralFn,
    lo: f64,
    hi: f64,
}

impl fmt::Debug for SpectralDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SpectralDensity {{ support: [{}, {}] }}", self.lo, self.hi)
    }
}

impl SpectralDensity {
    pub fn new(
        coupling: impl Fn(f64) -> f64 + Send + Sync + 'static,
        weight: impl Fn(f64) -> f64 + Send + Sync + 'static,
        lo: f64,
        hi: f64,
    ) -> Result<Self> {
        if !(lo > 0.0) {
            return Err(Error::Domain(format!("spectral support must exclude 0, got lo = {lo}")));
        }
        if !(hi > lo) || !hi.is_finite() {
            return Err(Error::Domain(format!("invalid spectral support [{lo}, {hi}]")));
        }
        Ok(Self {
            coupling: Arc::new(coupling),
            weight: Arc::new(weight),
            lo,
            hi,
        })
    }

    /// Constant coupling and flat weight on `[lo, hi]`.
    pub fn flat(coupling: f64, weight: f64, lo: f64, hi: f64) -> Result<Self> {
        Self::new(move |_| coupling, move |_| weight, lo, hi)
    }

    pub fn support(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn coupling(&self, w: f64) -> f64 {
        (self.coupling)(w)
    }

    pub fn weight(&self, w: f64) -> f64 {
        (self.weight)(w)
    }
}

/// `x − sin x` without cancellation for small `x`.
fn x_minus_sin(x: f64) -> f64 {
    if x.abs() < 0.1 {
        let x2 = x * x;
        // x³/3! − x⁵/5! + x⁷/7! − x⁹/9!
        x * x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0 * (1.0 - x2 / 72.0)))
    } else {
        x - x.sin()
    }
}

/// `Γ_mn(t) = ∫ (g_ω²/ω²)(m² − n²)(ωt − sin ωt) ρ(ω) dω` by composite
/// Simpson over the support. Even point counts are raised by one.
pub fn phase_integral(spec: &SpectralDensity, m: f64, n: f64, t: f64, quad_points: usize) -> Result<f64> {
    if quad_points < 2 {
        return Err(Error::Domain(format!(
            "need at least 2 quadrature points, got {quad_points}"
        )));
    }
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("time must be >= 0, got {t}")));
    }
    let level = m * m - n * n;
    if level == 0.0 || t == 0.0 {
        return Ok(0.0);
    }
    let intervals = if (quad_points - 1).is_multiple_of(2) {
        quad_points - 1
    } else {
        quad_points
    };
    let (lo, hi) = spec.support();
    let h = (hi - lo) / intervals as f64;
    let mut sum = 0.0;
    for k in 0..=intervals {
        let w = lo + k as f64 * h;
        let rho = spec.weight(w);
        if rho < 0.0 {
            return Err(Error::Domain(format!("negative spectral weight {rho} at omega = {w}")));
        }
        let g = spec.coupling(w);
        let f = g * g / (w * w) * x_minus_sin(w * t) * rho;
        let coef = if k == 0 || k == intervals {
            1.0
        } else if k % 2 == 1 {
            4.0
        } else {
            2.0
        };
        sum += coef * f;
    }
    Ok(level * sum * h / 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{projector, singlet};
    use approx::assert_abs_diff_eq;

    #[test]
    fn validate_reports() {
        for &(g, t) in &[(0.0, 0.0), (0.3, 1.0), (2.0, 5.0), (1.0, 40.0)] {
            assert!(phase_damping(g, t).unwrap().validate(1e-12).passed);
            assert!(amplitude_damping(g, t).unwrap().validate(1e-12).passed);
        }
        let half = KrausChannel::unchecked(vec![ComplexMatrix::identity(2).scale_real(0.5)]).unwrap();
        let r = half.validate(1e-10);
        assert!(!r.passed);
        assert_abs_diff_eq!(r.max_deviation, 0.75, epsilon = 1e-15);
        assert!(matches!(
            KrausChannel::new(vec![ComplexMatrix::identity(2).scale_real(0.5)]),
            Err(Error::IncompleteChannel { .. })
        ));
    }

    #[test]
    fn phase_damping_values() {
        let ch = phase_damping(1.0, 0.0).unwrap();
        assert_eq!(ch.operators()[0], ComplexMatrix::identity(2));
        assert_eq!(ch.operators()[1], ComplexMatrix::zeros(2));

        let ch = phase_damping(1.0, 2f64.ln()).unwrap();
        assert_abs_diff_eq!(ch.operators()[0][(1, 1)].re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(ch.operators()[1][(1, 1)].re, 3f64.sqrt() / 2.0, epsilon = 1e-15);

        assert!(phase_damping(-1.0, 1.0).is_err());
        assert!(phase_damping(1.0, -1.0).is_err());
    }

    #[test]
    fn amplitude_damping_limits() {
        let ch = amplitude_damping(0.5, 0.0).unwrap();
        assert_eq!(ch.operators()[0], ComplexMatrix::identity(2));
        assert_eq!(ch.operators()[1], ComplexMatrix::zeros(2));

        let ch = amplitude_damping(1.0, 800.0).unwrap();
        assert!(ch.operators()[0].max_abs_diff(&ComplexMatrix::from_real_diag(&[1.0, 0.0])) < 1e-15);
        assert_abs_diff_eq!(ch.operators()[1][(0, 1)].re, -1.0, epsilon = 1e-15);
        assert!(amplitude_damping(-0.1, 1.0).is_err());
    }

    #[test]
    fn amplitude_damping_drains_level_one() {
        // population moves from level 1 into level 0
        let rho = DensityMatrix::single(
            ComplexMatrix::from_vec(vec![
                Complex64::new(0.3, 0.0),
                Complex64::new(0.2, 0.1),
                Complex64::new(0.2, -0.1),
                Complex64::new(0.7, 0.0),
            ])
            .unwrap(),
        )
        .unwrap();
        let out = amplitude_damping(1.0, 60.0).unwrap().apply(&rho).unwrap();
        let ground = ComplexMatrix::from_real_diag(&[1.0, 0.0]);
        assert!(out.matrix().max_abs_diff(&ground) < 1e-12);
    }

    #[test]
    fn apply_identity_and_one_sided_dephasing() {
        let rho = projector(&singlet(), 2, 2).unwrap();
        let same = KrausChannel::identity(4).apply(&rho).unwrap();
        assert_eq!(same, rho);

        let (gamma, t) = (0.7f64, 1.3);
        let e = (-gamma * t).exp();
        let out = phase_damping(gamma, t).unwrap().lift_one_sided(2).apply(&rho).unwrap();
        // singlet coherence is −1/2; it decays to −e/2
        let expected = ComplexMatrix::from_real_rows(&[
            &[0.0, 0.0, 0.0, 0.0],
            &[0.0, 0.5, -0.5 * e, 0.0],
            &[0.0, -0.5 * e, 0.5, 0.0],
            &[0.0, 0.0, 0.0, 0.0],
        ])
        .unwrap();
        assert!(out.matrix().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn lifting() {
        let lifted = KrausChannel::identity(2).lift_one_sided(3);
        assert_eq!(lifted.operators(), &[ComplexMatrix::identity(6)]);

        let gt = 0.9f64;
        let lifted = phase_damping(1.0, gt).unwrap().lift_one_sided(2);
        let e = (-gt).exp();
        assert!(lifted.operators()[0].max_abs_diff(&ComplexMatrix::from_real_diag(&[1.0, 1.0, e, e])) < 1e-15);
        assert!(lifted.validate(1e-12).passed);
    }

    #[test]
    fn tensor_counts_and_identity() {
        let id = KrausChannel::identity(2).tensor(&KrausChannel::identity(2));
        assert_eq!(id, KrausChannel::identity(4));
        let two = phase_damping(0.3, 1.0)
            .unwrap()
            .tensor(&phase_damping(0.8, 1.0).unwrap());
        assert_eq!(two.len(), 4);
        assert!(two.validate(1e-12).passed);
    }

    #[test]
    fn paired_product_is_incomplete() {
        let a = phase_damping(0.3, 1.0).unwrap();
        let b = phase_damping(0.8, 1.0).unwrap();
        let paired = a.paired_product(&b).unwrap();
        assert_eq!(paired.len(), 2);
        assert!(!paired.validate(1e-6).passed);
    }

    #[test]
    fn dephase_matches_phase_damping() {
        let rho = ComplexMatrix::from_vec(vec![
            Complex64::new(0.4, 0.0),
            Complex64::new(0.1, 0.3),
            Complex64::new(0.1, -0.3),
            Complex64::new(0.6, 0.0),
        ])
        .unwrap();
        let law = DephasingLaw::uniform(0.8);
        for &t in &[0.0, 0.2, 1.0, 4.0] {
            let by_law = dephase(&rho, &law, t).unwrap();
            let by_kraus = phase_damping(0.8, t).unwrap().apply_matrix(&rho).unwrap();
            assert!(by_law.max_abs_diff(&by_kraus) < 1e-12);
            assert_eq!(by_law.diagonal(), rho.diagonal());
        }
        let full = dephase(&rho, &DephasingLaw::uniform(1.0), 1e4).unwrap();
        assert!(full.max_abs_diff(&ComplexMatrix::from_real_diag(&[0.4, 0.6])) < 1e-15);
    }

    #[test]
    fn dephase_rejects_invalid_laws() {
        let rho = ComplexMatrix::identity(3).scale_real(1.0 / 3.0);
        let diag_decay = DephasingLaw::new(|_, _, t| t, |_, _, _| 0.0);
        assert!(matches!(dephase(&rho, &diag_decay, 1.0), Err(Error::InvalidLaw(_))));
        let negative = DephasingLaw::new(|m, n, _| if m == n { 0.0 } else { -1.0 }, |_, _, _| 0.0);
        assert!(dephase(&rho, &negative, 1.0).is_err());
        let symmetric_phase = DephasingLaw::new(|_, _, _| 0.0, |m, n, _| (m + n) as f64);
        assert!(dephase(&rho, &symmetric_phase, 1.0).is_err());
    }

    #[test]
    fn phase_integral_basics() {
        let spec = SpectralDensity::flat(0.5, 1.0, 0.1, 3.0).unwrap();
        assert_eq!(phase_integral(&spec, 2.0, 2.0, 1.0, 101).unwrap(), 0.0);
        assert_eq!(phase_integral(&spec, 2.0, 1.0, 0.0, 101).unwrap(), 0.0);
        let a = phase_integral(&spec, 2.0, 1.0, 1.5, 101).unwrap();
        let b = phase_integral(&spec, 1.0, 2.0, 1.5, 101).unwrap();
        assert_eq!(a, -b);
        assert!(phase_integral(&spec, 2.0, 1.0, 1.0, 1).is_err());
        assert!(SpectralDensity::flat(1.0, 1.0, 0.0, 1.0).is_err());
        let neg = SpectralDensity::new(|_| 1.0, |w| 1.0 - w, 0.5, 2.0).unwrap();
        assert!(phase_integral(&neg, 1.0, 0.0, 1.0, 11).is_err());
    }

    #[test]
    fn x_minus_sin_is_continuous() {
        for &x in &[0.099_999_999, 0.1, -0.1, 0.05] {
            let direct = x - f64::sin(x);
            assert!((x_minus_sin(x) - direct).abs() < 1e-15);
        }
    }
}
