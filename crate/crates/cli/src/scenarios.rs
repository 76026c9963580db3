//! Scenario runners. Each returns a table whose header is fixed per scenario.

use distill_core::channels::{amplitude_damping, phase_damping};
use distill_core::distill::{
    fidelity, fidelity_from_kraus, first_crossing, first_order_reduction_spin_dissipation, ppt_min_eigenvalue,
    reduction_value, reference_fidelity, ReferenceCurve,
};
use distill_core::dynamics::{
    evolve, spin_dephasing, spin_dissipation, two_qubit_dephasing, two_qubit_dissipation, IntegratorConfig,
    LindbladModel, Trajectory,
};
use distill_core::states::{anticorrelated, max_entangled, projector, singlet};
use distill_core::{DensityMatrix, PureState};
use rayon::prelude::*;

use crate::config::{ModelKind, Scenario, ScenarioConfig};
use crate::csv::CsvTable;
use crate::CliError;

pub const FIG1_COLUMNS: &[&str] = &["t", "Ff_dissipation", "Ff_dephasing"];
pub const FIG2_COLUMNS: &[&str] = &["d", "t_c"];
pub const FIG3_COLUMNS: &[&str] = &["t", "Gf_dissip_d5", "Gf_dissip_d7", "Gf_dephase_d5", "Gf_dephase_d7"];
pub const KRAUS2X2_COLUMNS: &[&str] = &[
    "t",
    "Ff_dephase_one",
    "Ff_dephase_two",
    "Ff_dissip_brute",
    "Ff_dissip_closed_form",
    "Gf",
    "pt_min_eig",
];
pub const CUSTOM_COLUMNS: &[&str] = &["t", "Ff", "Gf", "pt_min_eig"];

/// Bracket start for the fig2 root search.
pub const FIG2_T_LO: f64 = 1e-6;
/// Uniform scan intervals before bisection in fig2.
pub const FIG2_SCAN_POINTS: usize = 4000;
pub const FIG3_DIMS: [usize; 2] = [5, 7];

type CoreResult<T> = distill_core::Result<T>;

pub fn columns(scenario: Scenario) -> &'static [&'static str] {
    match scenario {
        Scenario::Fig1 => FIG1_COLUMNS,
        Scenario::Fig2 => FIG2_COLUMNS,
        Scenario::Fig3 => FIG3_COLUMNS,
        Scenario::Kraus2x2 => KRAUS2X2_COLUMNS,
        Scenario::Custom => CUSTOM_COLUMNS,
    }
}

pub fn run(cfg: &ScenarioConfig) -> Result<CsvTable, CliError> {
    let result = match cfg.scenario {
        Scenario::Fig1 => run_fig1(cfg),
        Scenario::Fig2 => run_fig2(cfg),
        Scenario::Fig3 => run_fig3(cfg),
        Scenario::Kraus2x2 => run_kraus2x2(cfg),
        Scenario::Custom => run_custom(cfg),
    };
    result.map_err(|source| CliError::Numerical {
        scenario: cfg.scenario,
        source,
    })
}

fn integrator(cfg: &ScenarioConfig) -> CoreResult<IntegratorConfig> {
    IntegratorConfig::new(cfg.dt, cfg.t_max, cfg.record_stride)
}

fn evolve_pure(
    model: &LindbladModel,
    psi: &PureState,
    d: usize,
    cfg: &IntegratorConfig,
) -> CoreResult<(DensityMatrix, Trajectory)> {
    let rho0 = projector(psi, d, d)?;
    let traj = evolve(model, &rho0, cfg)?;
    Ok((rho0, traj))
}

/// Singlet fidelity under two-sided dissipation and dephasing.
pub fn run_fig1(cfg: &ScenarioConfig) -> CoreResult<CsvTable> {
    let icfg = integrator(cfg)?;
    let psi = singlet();
    let dissip = two_qubit_dissipation(cfg.omega, cfg.gamma)?;
    let dephase = two_qubit_dephasing(cfg.omega, cfg.gamma)?;
    let (a, b) = rayon::join(
        || evolve_pure(&dissip, &psi, 2, &icfg),
        || evolve_pure(&dephase, &psi, 2, &icfg),
    );
    let ((rho0, ta), (_, tb)) = (a?, b?);

    let mut table = CsvTable::new(FIG1_COLUMNS);
    for ((t, sa), (_, sb)) in ta.iter().zip(tb.iter()) {
        table.push(vec![t, fidelity(&rho0, sa)?, fidelity(&rho0, sb)?]);
    }
    Ok(table)
}

/// Critical time of the first-order reduction value per dimension. A row
/// whose bracket holds no sign change gets `t_c = NaN`.
pub fn run_fig2(cfg: &ScenarioConfig) -> CoreResult<CsvTable> {
    let rows: Vec<(usize, f64)> = (cfg.d_min..=cfg.d_max)
        .into_par_iter()
        .map(|d| {
            let g = |t: f64| first_order_reduction_spin_dissipation(d - 1, cfg.omega, cfg.gamma, t);
            let t_c = first_crossing(g, FIG2_T_LO, cfg.t_max, FIG2_SCAN_POINTS, cfg.tol)
                .map(|ct| ct.t_c)
                .unwrap_or(f64::NAN);
            (d, t_c)
        })
        .collect();

    let mut table = CsvTable::new(FIG2_COLUMNS);
    for (d, t_c) in rows {
        table.push(vec![d as f64, t_c]);
    }
    Ok(table)
}

fn reduction_series(
    model: &LindbladModel,
    psi: &PureState,
    d: usize,
    icfg: &IntegratorConfig,
) -> CoreResult<Vec<(f64, f64)>> {
    let (_, traj) = evolve_pure(model, psi, d, icfg)?;
    traj.iter().map(|(t, s)| Ok((t, reduction_value(s, psi)?))).collect()
}

/// Reduction value from `anticorrelated(d)` under two-sided spin models.
pub fn run_fig3(cfg: &ScenarioConfig) -> CoreResult<CsvTable> {
    let icfg = integrator(cfg)?;
    let jobs: Vec<(ModelKind, usize)> = [ModelKind::Dissipation, ModelKind::Dephasing]
        .into_iter()
        .flat_map(|m| FIG3_DIMS.map(|d| (m, d)))
        .collect();
    let series = jobs
        .par_iter()
        .map(|&(kind, d)| {
            let model = spin_model(kind, d, cfg.omega, cfg.gamma)?.two_sided();
            reduction_series(&model, &anticorrelated(d)?, d, &icfg)
        })
        .collect::<CoreResult<Vec<_>>>()?;

    let mut table = CsvTable::new(FIG3_COLUMNS);
    for k in 0..series[0].len() {
        let mut row = vec![series[0][k].0];
        row.extend(series.iter().map(|s| s[k].1));
        table.push(row);
    }
    Ok(table)
}

/// Qubit Kraus channels acting on the singlet. `Gf` and `pt_min_eig` are
/// taken on the one-sided phase-damped state.
pub fn run_kraus2x2(cfg: &ScenarioConfig) -> CoreResult<CsvTable> {
    let psi = singlet();
    let rho0 = projector(&psi, 2, 2)?;
    let (ga, gb) = (cfg.gamma, cfg.gamma_b);
    let steps = (cfg.t_max / cfg.dt).round() as usize;

    let rows = (0..=steps)
        .into_par_iter()
        .map(|k| {
            let t = k as f64 * cfg.dt;
            let pd_a = phase_damping(ga, t)?;
            let one_sided = pd_a.lift_one_sided(2);
            let two_sided = pd_a.tensor(&phase_damping(gb, t)?);
            let dissip = amplitude_damping(ga, t)?.lift_one_sided(2);
            let dephased = one_sided.apply(&rho0)?;
            Ok(vec![
                t,
                fidelity_from_kraus(&psi, &one_sided)?,
                fidelity_from_kraus(&psi, &two_sided)?,
                fidelity_from_kraus(&psi, &dissip)?,
                reference_fidelity(ReferenceCurve::DissipateOne, ga, gb, t)?,
                reduction_value(&dephased, &psi)?,
                ppt_min_eigenvalue(&dephased)?.value,
            ])
        })
        .collect::<CoreResult<Vec<_>>>()?;

    let mut table = CsvTable::new(KRAUS2X2_COLUMNS);
    for row in rows {
        table.push(row);
    }
    Ok(table)
}

/// Two-sided spin model of dimension `d` from the maximally entangled state.
pub fn run_custom(cfg: &ScenarioConfig) -> CoreResult<CsvTable> {
    let icfg = integrator(cfg)?;
    let psi = max_entangled(cfg.d)?;
    let model = spin_model(cfg.model, cfg.d, cfg.omega, cfg.gamma)?.two_sided();
    let (rho0, traj) = evolve_pure(&model, &psi, cfg.d, &icfg)?;

    let mut table = CsvTable::new(CUSTOM_COLUMNS);
    for (t, s) in traj.iter() {
        table.push(vec![
            t,
            fidelity(&rho0, s)?,
            reduction_value(s, &psi)?,
            ppt_min_eigenvalue(s)?.value,
        ]);
    }
    Ok(table)
}

fn spin_model(kind: ModelKind, d: usize, omega: f64, gamma: f64) -> CoreResult<LindbladModel> {
    match kind {
        ModelKind::Dissipation => spin_dissipation(d - 1, omega, gamma),
        ModelKind::Dephasing => spin_dephasing(d - 1, omega, gamma),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(scenario: Scenario) -> ScenarioConfig {
        ScenarioConfig {
            t_max: 0.2,
            dt: 0.01,
            record_stride: 5,
            ..ScenarioConfig::defaults(scenario)
        }
    }

    #[test]
    fn headers_match_contract() {
        for s in [Scenario::Fig1, Scenario::Fig3, Scenario::Kraus2x2, Scenario::Custom] {
            let table = run(&small(s)).unwrap();
            assert_eq!(table.header, columns(s));
            assert!(table.rows.iter().all(|r| r.len() == columns(s).len()));
            assert_eq!(table.rows[0][0], 0.0);
        }
    }

    #[test]
    fn fig2_flags_missing_crossing() {
        let cfg = ScenarioConfig {
            t_max: 1e-3,
            d_min: 3,
            d_max: 4,
            ..ScenarioConfig::defaults(Scenario::Fig2)
        };
        let table = run_fig2(&cfg).unwrap();
        assert_eq!(table.rows.len(), 2);
        assert!(table.rows.iter().all(|r| r[1].is_nan()));
    }

    #[test]
    fn custom_dephasing_keeps_populations() {
        let cfg = ScenarioConfig {
            model: ModelKind::Dephasing,
            ..small(Scenario::Custom)
        };
        let table = run_custom(&cfg).unwrap();
        let f = table.column("Ff").unwrap();
        assert!((f[0] - 1.0).abs() < 1e-12);
        assert!(f.windows(2).all(|w| w[1] <= w[0] + 1e-12));
    }
}
