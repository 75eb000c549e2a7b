//! Sweep drivers. Cells are evaluated in parallel on the current rayon pool
//! and always emitted in declared axis order: γ, then μ, then t̄, then x_F.

use rayon::prelude::*;

use qbm_core::monitoring::{asymptotic_variance, conditional_variance, small_tau_variance};
use qbm_core::{BathKind, ConditionalGaussian, CorrelatorSet, Kernel, MeasurementProtocol, Observable};

use crate::config::{RunConfig, SweepConfig};
use crate::error::CliError;
use crate::table::{Cell, Table};

pub const SURFACE_TERMS: usize = 150;
pub const VARIANCE_TERMS: usize = 2000;

const GAMMA: &str = "gamma[omega0]";
const MU: &str = "mu[omega0/2pi]";
const TIME: &str = "t[1/omega0]";

fn units(cfg: &RunConfig) -> (&'static str, &'static str, &'static str) {
    match cfg.observable {
        Observable::Position => ("x_f[sigma_gs]", "density[1/sigma_gs]", "[sigma_gs^2]"),
        Observable::Momentum => ("p_f[m_omega0_sigma_gs]", "density[1/m_omega0_sigma_gs]", "[(m_omega0_sigma_gs)^2]"),
    }
}

fn protocol(cfg: &RunConfig, rate: f64) -> MeasurementProtocol {
    let unit = cfg.outcome_unit();
    let sigma = cfg.protocol.slit_width * unit;
    let x0 = cfg.protocol.first_outcome * unit;
    if rate == 0.0 {
        MeasurementProtocol::unmonitored(cfg.observable, sigma, x0)
    } else {
        MeasurementProtocol::monitored(cfg.observable, sigma, x0, cfg.spacing(rate))
    }
}

fn correlators(cfg: &RunConfig, gamma: f64, terms: usize) -> Result<CorrelatorSet, CliError> {
    let ctrl = cfg.series_control(terms)?;
    Ok(CorrelatorSet::new(cfg.observable, cfg.oscillator, cfg.bath_at(gamma), ctrl)?)
}

/// `(γ index, μ index, t̄)` cells in declared order.
fn cells(sweep: &SweepConfig, rates: &[f64]) -> Vec<(usize, usize, f64)> {
    let elapsed = sweep.elapsed.values();
    let mut out = Vec::with_capacity(sweep.gammas.len() * rates.len() * elapsed.len());
    for g in 0..sweep.gammas.len() {
        for r in 0..rates.len() {
            out.extend(elapsed.iter().map(|&t| (g, r, t)));
        }
    }
    out
}

fn collect<T: Send>(results: Vec<Result<Vec<T>, CliError>>) -> Result<Vec<T>, CliError> {
    let mut out = Vec::new();
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

/// Conditional density `P(x_F, t̄ | x0)` over the `(γ, μ, t̄, x_F)` grid.
pub fn run_density_surface(cfg: &RunConfig) -> Result<Table, CliError> {
    if cfg.observable != Observable::Position {
        return Err(CliError::Unsupported("density surfaces are produced for position measurements".into()));
    }
    let (x_col, p_col, _) = units(cfg);
    let sets = cfg
        .sweep
        .gammas
        .iter()
        .map(|&g| correlators(cfg, g, SURFACE_TERMS))
        .collect::<Result<Vec<_>, _>>()?;
    let rates = cfg.rate_axis();
    let unit = cfg.outcome_unit();
    let w0 = cfg.oscillator.frequency;
    let outcomes = cfg.sweep.outcomes.values();

    let results: Vec<_> = cells(&cfg.sweep, &rates)
        .into_par_iter()
        .map(|(g, r, t)| {
            let elapsed = t / w0;
            let proto = protocol(cfg, rates[r]).at(elapsed);
            let cond = ConditionalGaussian::new(elapsed, &proto, &sets[g])?;
            Ok(outcomes
                .iter()
                .map(|&x| {
                    vec![
                        Cell::Float(cfg.sweep.gammas[g]),
                        Cell::Float(rates[r]),
                        Cell::Float(t),
                        Cell::Int(proto.intermediates as u64),
                        Cell::Float(x),
                        Cell::Float(cond.density(x * unit) * unit),
                    ]
                })
                .collect())
        })
        .collect();

    let mut table = Table::new(&[GAMMA, MU, TIME, "n", x_col, p_col]);
    table.rows = collect(results)?;
    table.check_finite()?;
    Ok(table)
}

/// Whether the Ohmic small-spacing closed forms apply to this run.
fn has_limits(cfg: &RunConfig, set: &CorrelatorSet) -> bool {
    cfg.observable == Observable::Position && !matches!(set.bath().kind, BathKind::Drude { .. })
}

/// Conditional variance `Σ²_τ(t̄)` over the `(γ, μ, t̄)` grid, with the
/// small-spacing and long-time limits and optional Drude comparison.
pub fn run_variance_curve(cfg: &RunConfig) -> Result<Table, CliError> {
    let (_, _, sq) = units(cfg);
    let sets = cfg
        .sweep
        .gammas
        .iter()
        .map(|&g| correlators(cfg, g, VARIANCE_TERMS))
        .collect::<Result<Vec<_>, _>>()?;
    let ctrl = cfg.series_control(VARIANCE_TERMS)?;
    let comparison = cfg
        .sweep
        .gammas
        .iter()
        .map(|&g| {
            cfg.comparison_bath_at(g)
                .map(|b| CorrelatorSet::new(cfg.observable, cfg.oscillator, b, ctrl))
                .transpose()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let limits = sets.iter().any(|s| has_limits(cfg, s));
    let compare = comparison.iter().any(Option::is_some);

    let rates = cfg.rate_axis();
    let w0 = cfg.oscillator.frequency;
    let scale = cfg.outcome_unit().powi(2);

    let results: Vec<_> = cells(&cfg.sweep, &rates)
        .into_par_iter()
        .map(|(g, r, t)| -> Result<Vec<Vec<Cell>>, CliError> {
            let elapsed = t / w0;
            let set = &sets[g];
            let proto = protocol(cfg, rates[r]).at(elapsed);
            let variance = conditional_variance(elapsed, &proto, set)?;
            let mut row = vec![
                Cell::Float(cfg.sweep.gammas[g]),
                Cell::Float(rates[r]),
                Cell::Float(t),
                Cell::Int(proto.intermediates as u64),
                Cell::Float(variance / scale),
            ];
            if limits {
                let applicable = rates[r] > 0.0 && has_limits(cfg, set);
                let small = if applicable {
                    Some(small_tau_variance(elapsed, &proto, set)? / scale)
                } else {
                    None
                };
                let asym = if applicable && set.bath().gamma > 0.0 {
                    Some(asymptotic_variance(&proto, set)? / scale)
                } else {
                    None
                };
                row.push(Cell::opt(small));
                row.push(Cell::opt(asym));
            }
            if compare {
                let drude = match &comparison[g] {
                    Some(c) => Some(conditional_variance(elapsed, &proto, c)? / scale),
                    None => None,
                };
                row.push(Cell::opt(drude));
            }
            Ok(vec![row])
        })
        .collect();

    let variance_col = format!("variance{sq}");
    let small_col = format!("variance_small_tau{sq}");
    let asym_col = format!("variance_asymptotic{sq}");
    let drude_col = format!("variance_drude{sq}");
    let mut columns = vec![GAMMA, MU, TIME, "n", variance_col.as_str()];
    if limits {
        columns.push(&small_col);
        columns.push(&asym_col);
    }
    if compare {
        columns.push(&drude_col);
    }
    let mut table = Table::new(&columns);
    table.rows = collect(results)?;
    table.check_finite()?;
    Ok(table)
}

/// Equilibrium correlators over the `(γ, t)` grid. Position correlators
/// are always emitted; momentum ones for Drude baths; Drude comparison
/// columns when a comparison cutoff is configured.
pub fn dump_correlators(cfg: &RunConfig) -> Result<Table, CliError> {
    let ctrl = cfg.series_control(VARIANCE_TERMS)?;
    let w0 = cfg.oscillator.frequency;
    let pos_scale = cfg.oscillator.ground_state_width().powi(2);
    let mom_scale = cfg.oscillator.ground_state_momentum_width().powi(2);
    let momentum = cfg.bath.cutoff.is_some();

    type Sets = (CorrelatorSet, Option<CorrelatorSet>, Option<CorrelatorSet>);
    let sets = cfg
        .sweep
        .gammas
        .iter()
        .map(|&g| -> Result<Sets, CliError> {
            let bath = cfg.bath_at(g);
            let pos = CorrelatorSet::position(cfg.oscillator, bath, ctrl)?;
            let mom = if momentum {
                Some(CorrelatorSet::momentum(cfg.oscillator, bath, ctrl)?)
            } else {
                None
            };
            let cmp = cfg
                .comparison_bath_at(g)
                .map(|b| CorrelatorSet::position(cfg.oscillator, b, ctrl))
                .transpose()?;
            Ok((pos, mom, cmp))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let compare = sets.iter().any(|s| s.2.is_some());

    let elapsed = cfg.sweep.elapsed.values();
    let cells: Vec<(usize, f64)> = (0..sets.len())
        .flat_map(|g| elapsed.iter().map(move |&t| (g, t)))
        .collect();
    let rows: Vec<Vec<Cell>> = cells
        .into_par_iter()
        .map(|(g, t)| {
            let time = t / w0;
            let (pos, mom, cmp) = &sets[g];
            let mut row = vec![
                Cell::Float(cfg.sweep.gammas[g]),
                Cell::Float(t),
                Cell::Float(pos.symmetric(time) / pos_scale),
                Cell::Float(pos.antisymmetric(time) / pos_scale),
            ];
            if let Some(m) = mom {
                row.push(Cell::Float(m.symmetric(time) / mom_scale));
                row.push(Cell::Float(m.antisymmetric(time) / mom_scale));
            }
            if compare {
                row.push(Cell::opt(cmp.map(|c| c.symmetric(time) / pos_scale)));
                row.push(Cell::opt(cmp.map(|c| c.antisymmetric(time) / pos_scale)));
            }
            row
        })
        .collect();

    let mut columns = vec![GAMMA, TIME, "S[sigma_gs^2]", "A[sigma_gs^2]"];
    if momentum {
        columns.push("S_pp[(m_omega0_sigma_gs)^2]");
        columns.push("A_pp[(m_omega0_sigma_gs)^2]");
    }
    if compare {
        columns.push("S_drude[sigma_gs^2]");
        columns.push("A_drude[sigma_gs^2]");
    }
    let mut table = Table::new(&columns);
    table.rows = rows;
    table.check_finite()?;
    Ok(table)
}
