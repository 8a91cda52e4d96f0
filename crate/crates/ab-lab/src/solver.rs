//! Conservative explicit finite-volume solver for
//! `dn/dt - div(n grad p(n)) = n G(p)` on 1D/2D uniform boxes, plus a direct
//! stepper for the pressure equation `p_t = gamma p p_xx + p_x^2` in 1D.
//!
//! The diffusive flux is written through the potential `Phi(n)` with
//! `Phi' = q(p(n))`, so `div(n grad p) = Delta Phi(n)`. Face fluxes
//! `(Phi_R - Phi_L)/dx` are assembled once per face and applied with opposite
//! signs to both neighbours, which makes the scheme exactly conservative and,
//! under the CFL bound `dt <= cfl * dx^2 / (2 dim max Phi')`, monotone.

use crate::growth_laws::{GrowthLaw, GrowthLawError};
use crate::pressure_laws::{PressureLaw, PressureLawError};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Periodic,
    NoFlux,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Density,
    Pressure,
    W,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SolverError {
    /// Time step above the admissible parabolic limit.
    CflViolation { dt: f64, admissible: f64 },
    /// A density undershoot beyond round-off; signals a scheme bug, not physics.
    NegativeDensity { cell: usize, value: f64 },
    Law(PressureLawError),
    Growth(GrowthLawError),
    Grid(String),
}

impl fmt::Display for SolverError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolverError::CflViolation { dt, admissible } => {
                write!(f, "step rejected: dt = {dt} exceeds admissible {admissible}")
            }
            SolverError::NegativeDensity { cell, value } => {
                write!(f, "density undershoot at cell {cell}: {value}")
            }
            SolverError::Law(e) => write!(f, "pressure law: {e}"),
            SolverError::Growth(e) => write!(f, "growth law: {e}"),
            SolverError::Grid(msg) => write!(f, "grid: {msg}"),
        }
    }
}

impl std::error::Error for SolverError {}

impl From<PressureLawError> for SolverError {
    fn from(e: PressureLawError) -> Self {
        SolverError::Law(e)
    }
}

impl From<GrowthLawError> for SolverError {
    fn from(e: GrowthLawError) -> Self {
        SolverError::Growth(e)
    }
}

/// Uniform 1D or 2D grid. 2D grids are square (same extent and cell count per
/// axis); the domain is centred unless an origin is given.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub dim: u32,
    pub extent: f64,
    pub cells: usize,
    pub boundary: Boundary,
    pub origin: f64,
}

impl Grid {
    pub fn new_1d(extent: f64, cells: usize, boundary: Boundary) -> Result<Self, SolverError> {
        Self::checked(1, extent, cells, boundary, -0.5 * extent)
    }

    pub fn new_1d_from(
        origin: f64,
        extent: f64,
        cells: usize,
        boundary: Boundary,
    ) -> Result<Self, SolverError> {
        Self::checked(1, extent, cells, boundary, origin)
    }

    pub fn new_2d(extent: f64, cells: usize, boundary: Boundary) -> Result<Self, SolverError> {
        Self::checked(2, extent, cells, boundary, -0.5 * extent)
    }

    fn checked(
        dim: u32,
        extent: f64,
        cells: usize,
        boundary: Boundary,
        origin: f64,
    ) -> Result<Self, SolverError> {
        if !(extent > 0.0) {
            return Err(SolverError::Grid(format!("extent must be positive, got {extent}")));
        }
        if cells < 8 {
            return Err(SolverError::Grid(format!("need at least 8 cells per axis, got {cells}")));
        }
        Ok(Self { dim, extent, cells, boundary, origin })
    }

    pub fn dx(&self) -> f64 {
        self.extent / self.cells as f64
    }

    /// Cell volume dx^dim.
    pub fn cell_volume(&self) -> f64 {
        self.dx().powi(self.dim as i32)
    }

    pub fn len(&self) -> usize {
        match self.dim {
            1 => self.cells,
            _ => self.cells * self.cells,
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Centre coordinate of cell i (1D).
    pub fn x(&self, i: usize) -> f64 {
        self.origin + (i as f64 + 0.5) * self.dx()
    }

    /// Centre coordinates of cell (i, j) (2D, row-major index j * cells + i).
    pub fn xy(&self, i: usize, j: usize) -> (f64, f64) {
        (self.x(i), self.origin + (j as f64 + 0.5) * self.dx())
    }
}

/// Grid samples of one physical quantity.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    pub grid: Grid,
    pub quantity: Quantity,
    pub values: Vec<f64>,
}

impl Field {
    pub fn new(grid: Grid, quantity: Quantity, values: Vec<f64>) -> Result<Self, SolverError> {
        if values.len() != grid.len() {
            return Err(SolverError::Grid(format!(
                "field length {} does not match grid ({})",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, quantity, values })
    }

    pub fn constant(grid: Grid, quantity: Quantity, value: f64) -> Self {
        let n = grid.len();
        Self { grid, quantity, values: vec![value; n] }
    }
}

/// Discrete Laplacian: 3-point stencil in 1D, 5-point in 2D. Periodic
/// boundaries wrap; no-flux boundaries mirror the boundary cell.
pub fn laplacian(f: &Field) -> Field {
    let g = &f.grid;
    let dx2 = g.dx() * g.dx();
    let n = g.cells;
    let v = &f.values;
    let mut out = vec![0.0; v.len()];
    match g.dim {
        1 => {
            for i in 0..n {
                let left = neighbor(v, i, -1, n, g.boundary);
                let right = neighbor(v, i, 1, n, g.boundary);
                out[i] = (left - 2.0 * v[i] + right) / dx2;
            }
        }
        _ => {
            for j in 0..n {
                for i in 0..n {
                    let c = v[j * n + i];
                    let l = v[j * n + wrap(i, -1, n, g.boundary)];
                    let r = v[j * n + wrap(i, 1, n, g.boundary)];
                    let d = v[wrap(j, -1, n, g.boundary) * n + i];
                    let u = v[wrap(j, 1, n, g.boundary) * n + i];
                    out[j * n + i] = (l + r + d + u - 4.0 * c) / dx2;
                }
            }
        }
    }
    Field { grid: g.clone(), quantity: Quantity::W, values: out }
}

fn wrap(i: usize, step: isize, n: usize, boundary: Boundary) -> usize {
    let k = i as isize + step;
    match boundary {
        Boundary::Periodic => k.rem_euclid(n as isize) as usize,
        Boundary::NoFlux => k.clamp(0, n as isize - 1) as usize,
    }
}

fn neighbor(v: &[f64], i: usize, step: isize, n: usize, boundary: Boundary) -> f64 {
    v[wrap(i, step, n, boundary)]
}

/// Full simulation state: density field plus the laws that close the model.
#[derive(Debug, Clone)]
pub struct SimState {
    pub time: f64,
    pub n: Field,
    pub law: PressureLaw,
    pub growth: GrowthLaw,
    pub step_count: u64,
}

impl SimState {
    pub fn new(time: f64, n: Field, law: PressureLaw, growth: GrowthLaw) -> Self {
        Self { time, n, law, growth, step_count: 0 }
    }

    /// Derived pressure field p = p(n).
    pub fn pressure(&self) -> Result<Field, SolverError> {
        let mut p = Vec::with_capacity(self.n.values.len());
        for &n in &self.n.values {
            p.push(self.law.pressure_from_density(n)?);
        }
        Ok(Field { grid: self.n.grid.clone(), quantity: Quantity::Pressure, values: p })
    }

    pub fn mass(&self) -> f64 {
        self.n.values.iter().sum::<f64>() * self.n.grid.cell_volume()
    }
}

/// Safety factor applied to the parabolic stability limit.
pub const DEFAULT_CFL_SAFETY: f64 = 0.45;

/// Admissible time step: `cfl * dx^2 / (2 dim max q(p(n)))`. Infinite when
/// the field is entirely vacuum.
pub fn admissible_dt(state: &SimState, cfl_safety: f64) -> Result<f64, SolverError> {
    let g = &state.n.grid;
    let mut max_q: f64 = 0.0;
    for &n in &state.n.values {
        let p = state.law.pressure_from_density(n)?;
        max_q = max_q.max(state.law.q(p)?);
    }
    if max_q == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(cfl_safety * g.dx() * g.dx() / (2.0 * g.dim as f64 * max_q))
}

/// One explicit step of the density equation in conservative flux form.
///
/// Rejects dt above the admissible limit. Densities below zero by more than
/// 1e-12 abort; smaller undershoots clamp to vacuum.
pub fn step_density(state: &SimState, dt: f64, cfl_safety: f64) -> Result<SimState, SolverError> {
    let admissible = admissible_dt(state, cfl_safety)?;
    if dt > admissible * (1.0 + 1e-12) {
        return Err(SolverError::CflViolation { dt, admissible });
    }
    let g = &state.n.grid;
    let n_cells = g.cells;
    let dx = g.dx();
    let v = &state.n.values;

    let mut phi = Vec::with_capacity(v.len());
    for &n in v {
        phi.push(state.law.flux_potential(n)?);
    }

    let lambda = dt / (dx * dx);
    let mut new = v.clone();
    match g.dim {
        1 => {
            // face k sits between cells k-1 and k; flux difference form
            let mut flux = vec![0.0; n_cells + 1];
            for k in 1..n_cells {
                flux[k] = phi[k] - phi[k - 1];
            }
            match g.boundary {
                Boundary::Periodic => {
                    flux[0] = phi[0] - phi[n_cells - 1];
                    flux[n_cells] = flux[0];
                }
                Boundary::NoFlux => {
                    flux[0] = 0.0;
                    flux[n_cells] = 0.0;
                }
            }
            for i in 0..n_cells {
                new[i] += lambda * (flux[i + 1] - flux[i]);
            }
        }
        _ => {
            for j in 0..n_cells {
                for i in 0..n_cells {
                    let c = phi[j * n_cells + i];
                    let mut acc = 0.0;
                    for (di, dj) in [(-1isize, 0isize), (1, 0), (0, -1), (0, 1)] {
                        let (ii, jj) = (wrap(i, di, n_cells, g.boundary), wrap(j, dj, n_cells, g.boundary));
                        let nb = phi[jj * n_cells + ii];
                        // mirrored ghost (no-flux) reproduces the cell itself -> zero flux
                        acc += nb - c;
                    }
                    new[j * n_cells + i] += lambda * acc;
                }
            }
        }
    }

    if !state.growth.is_zero() {
        for i in 0..new.len() {
            let p = state.law.pressure_from_density(v[i])?;
            new[i] += dt * v[i] * state.growth.g(p)?;
        }
    }

    for (i, n) in new.iter_mut().enumerate() {
        if *n < 0.0 {
            if *n > -1e-12 {
                *n = 0.0;
            } else {
                return Err(SolverError::NegativeDensity { cell: i, value: *n });
            }
        }
    }

    Ok(SimState {
        time: state.time + dt,
        n: Field { grid: g.clone(), quantity: Quantity::Density, values: new },
        law: state.law.clone(),
        growth: state.growth.clone(),
        step_count: state.step_count + 1,
    })
}

/// One explicit step of the 1D periodic pressure equation
/// `p_t = gamma p p_xx + p_x^2` (the form the regularity counterexample is
/// posed in). The pressure is clamped at zero.
pub fn step_pressure_1d(p: &Field, gamma: f64, dt: f64, cfl_safety: f64) -> Result<Field, SolverError> {
    let g = &p.grid;
    if g.dim != 1 || g.boundary != Boundary::Periodic {
        return Err(SolverError::Grid("pressure stepper needs a 1D periodic grid".into()));
    }
    let max_p = p.values.iter().cloned().fold(0.0f64, f64::max);
    let dx = g.dx();
    let admissible = if max_p > 0.0 {
        cfl_safety * dx * dx / (2.0 * gamma * max_p)
    } else {
        f64::INFINITY
    };
    if dt > admissible * (1.0 + 1e-12) {
        return Err(SolverError::CflViolation { dt, admissible });
    }
    let n = g.cells;
    let v = &p.values;
    let mut new = vec![0.0; n];
    for i in 0..n {
        let l = v[(i + n - 1) % n];
        let r = v[(i + 1) % n];
        let pxx = (l - 2.0 * v[i] + r) / (dx * dx);
        let px = (r - l) / (2.0 * dx);
        new[i] = (v[i] + dt * (gamma * v[i] * pxx + px * px)).max(0.0);
    }
    Ok(Field { grid: g.clone(), quantity: Quantity::Pressure, values: new })
}

/// Largest second x-difference of a field (the blow-up indicator for the
/// pressure-form runs; computed along x rows in 2D).
pub fn max_pxx(f: &Field) -> f64 {
    let g = &f.grid;
    let n = g.cells;
    let dx2 = g.dx() * g.dx();
    let mut worst = f64::NEG_INFINITY;
    let rows = if g.dim == 1 { 1 } else { n };
    for j in 0..rows {
        for i in 0..n {
            let c = f.values[j * n + i];
            let l = f.values[j * n + wrap(i, -1, n, g.boundary)];
            let r = f.values[j * n + wrap(i, 1, n, g.boundary)];
            worst = worst.max((l - 2.0 * c + r) / dx2);
        }
    }
    worst
}

/// Advances the state to `t_target` with adaptive CFL-limited steps.
/// The final step is shortened to land exactly on the target.
pub fn advance_to(
    state: &SimState,
    t_target: f64,
    cfl_safety: f64,
) -> Result<SimState, SolverError> {
    let mut s = state.clone();
    while s.time < t_target - 1e-14 * t_target.abs().max(1.0) {
        let dt_adm = admissible_dt(&s, cfl_safety)?;
        let dt = dt_adm.min(t_target - s.time);
        if !dt.is_finite() {
            // vacuum everywhere and no growth: nothing evolves
            s.time = t_target;
            break;
        }
        s = step_density(&s, dt, cfl_safety)?;
    }
    Ok(s)
}

/// Runs `steps` CFL-limited steps (used by conservation tests).
pub fn run_steps(state: &SimState, steps: u64, cfl_safety: f64) -> Result<SimState, SolverError> {
    let mut s = state.clone();
    for _ in 0..steps {
        let dt = admissible_dt(&s, cfl_safety)?;
        if !dt.is_finite() {
            break;
        }
        s = step_density(&s, dt, cfl_safety)?;
    }
    Ok(s)
}

/// A completed scenario run: snapshot trajectory, diagnostics, and the
/// objects the bound checks need.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub law: PressureLaw,
    pub growth: GrowthLaw,
    pub l1_weight: crate::weights::Weight,
    pub linf_weight: crate::weights::Weight,
    pub p_max: f64,
    pub snapshots: Vec<SimState>,
    pub series: crate::analysis::DiagnosticsSeries,
}

/// Runs a scenario to completion: snapshots at the requested times (the step
/// landing is exact, the last step before each target is clipped) and
/// diagnostics at every snapshot. Deterministic given the config.
pub fn simulate(config: &crate::config::ScenarioConfig) -> Result<RunOutput, crate::analysis::AnalysisError> {
    match config.form {
        crate::config::RunForm::Density => simulate_density(config),
        crate::config::RunForm::Pressure => simulate_pressure(config),
    }
}

fn build_grid(config: &crate::config::ScenarioConfig) -> Result<Grid, SolverError> {
    match config.grid_dim {
        1 => Grid::new_1d(config.grid_extent, config.grid_cells, config.boundary),
        _ => Grid::new_2d(config.grid_extent, config.grid_cells, config.boundary),
    }
}

fn initial_values(
    config: &crate::config::ScenarioConfig,
    grid: &Grid,
) -> Result<(f64, Vec<f64>), crate::analysis::AnalysisError> {
    use crate::config::InitialData;
    let radial_bump = |x: f64, y: f64, center: f64, radius: f64, height: f64| -> f64 {
        let r = ((x - center).powi(2) + if grid.dim == 2 { (y - center).powi(2) } else { 0.0 })
            .sqrt();
        if r < radius {
            height * (std::f64::consts::FRAC_PI_2 * r / radius).cos().powi(2)
        } else {
            0.0
        }
    };
    let mut values = Vec::with_capacity(grid.len());
    let start = match &config.initial {
        InitialData::Barenblatt { t0, c0 } => {
            let gamma = match config.law {
                crate::config::LawSpec::PowerLaw { gamma } => gamma,
                _ => unreachable!("validated: Barenblatt needs the power law"),
            };
            let params = crate::oracles::BarenblattParams::new(gamma, grid.dim, *c0)
                .map_err(|e| crate::analysis::AnalysisError::Config(e.to_string()))?;
            let field = params
                .sample_density(*t0, grid)
                .map_err(|e| crate::analysis::AnalysisError::Config(e.to_string()))?;
            values = field.values;
            *t0
        }
        InitialData::Bump { center, radius, height } => {
            fill_grid(grid, &mut values, |x, y| radial_bump(x, y, *center, *radius, *height));
            0.0
        }
        InitialData::CosSquared => {
            let omega = 2.0 * std::f64::consts::PI / grid.extent;
            fill_grid(grid, &mut values, |x, y| {
                let vx = (omega * (x - grid.origin)).cos().powi(2);
                if grid.dim == 2 {
                    vx * (omega * (y - grid.origin)).cos().powi(2)
                } else {
                    vx
                }
            });
            0.0
        }
        InitialData::FromCsv { path } => {
            values = crate::report::read_csv_column(path, "n")
                .map_err(|e| crate::analysis::AnalysisError::Config(e.to_string()))?;
            if values.len() != grid.len() {
                return Err(crate::analysis::AnalysisError::Config(format!(
                    "initial CSV has {} values, grid needs {}",
                    values.len(),
                    grid.len()
                )));
            }
            0.0
        }
    };
    Ok((start, values))
}

fn fill_grid(grid: &Grid, values: &mut Vec<f64>, f: impl Fn(f64, f64) -> f64) {
    match grid.dim {
        1 => {
            for i in 0..grid.cells {
                values.push(f(grid.x(i), 0.0));
            }
        }
        _ => {
            for j in 0..grid.cells {
                for i in 0..grid.cells {
                    let (x, y) = grid.xy(i, j);
                    values.push(f(x, y));
                }
            }
        }
    }
}

fn resolve_p_max(
    config: &crate::config::ScenarioConfig,
    law: &PressureLaw,
    growth: &GrowthLaw,
    initial: &[f64],
) -> Result<f64, crate::analysis::AnalysisError> {
    let max_n = initial.iter().cloned().fold(0.0f64, f64::max);
    let p0_max = law
        .pressure_from_density(max_n)
        .map_err(|e| crate::analysis::AnalysisError::Solver(e.into()))?;
    let needed = p0_max.max(growth.p_max().unwrap_or(0.0));
    match config.law_p_max {
        None => Ok((needed * (1.0 + 1e-9)).max(1e-12)),
        Some(user) if user >= needed => Ok(user),
        Some(user) => Err(crate::analysis::AnalysisError::Config(format!(
            "law.p_max = {user} is below the run's pressure range {needed}"
        ))),
    }
}

fn snapshot_times(start: f64, t_end: f64, count: usize) -> Vec<f64> {
    if t_end <= start {
        return vec![start];
    }
    (0..count)
        .map(|i| start + (t_end - start) * i as f64 / (count - 1) as f64)
        .collect()
}

fn diagnostics_row(
    state: &SimState,
    l1_weight: &crate::weights::Weight,
    linf_weight: &crate::weights::Weight,
    mask_threshold: f64,
) -> Result<crate::analysis::DiagnosticsRow, crate::analysis::AnalysisError> {
    use crate::analysis as an;
    let p = state.pressure()?;
    let w = an::w_field(&p, &state.growth)?;
    let mask = an::support_mask(&state.n, mask_threshold);
    let f1 = an::weighted_functionals(&p, &w, l1_weight, &mask);
    let finf = an::weighted_functionals(&p, &w, linf_weight, &mask);
    let min_w = {
        let m = an::masked_min(&w, &mask);
        if m.is_finite() {
            m
        } else {
            0.0
        }
    };
    let (r1, r2) = an::complementarity_residual(&p, &w, &state.n);
    Ok(an::DiagnosticsRow {
        time: state.time,
        mass: state.mass(),
        min_w,
        sup_weighted_neg_w: finf.sup,
        l1_weighted_neg_w: f1.l1,
        l2_weighted_neg_w_sq: finf.l2,
        complementarity_r1: r1,
        complementarity_r2: r2,
        max_pxx: max_pxx(&p),
    })
}

fn simulate_density(
    config: &crate::config::ScenarioConfig,
) -> Result<RunOutput, crate::analysis::AnalysisError> {
    let growth = config
        .growth_law()
        .map_err(|e| crate::analysis::AnalysisError::Config(e.to_string()))?;
    let grid = build_grid(config)?;
    let provisional = config
        .pressure_law(1.0)
        .map_err(|e| crate::analysis::AnalysisError::Config(e.to_string()))?;
    let (start, n0) = initial_values(config, &grid)?;
    let p_max = resolve_p_max(config, &provisional, &growth, &n0)?;
    let law = provisional
        .with_p_max(p_max)
        .map_err(|e| crate::analysis::AnalysisError::Solver(e.into()))?;
    let l1_weight = crate::weights::build_l1_weight(&law, p_max)?;
    let linf_weight = crate::weights::build_linfty_weight(&law, p_max)?;

    let field = Field::new(grid, Quantity::Density, n0)?;
    let mut state = SimState::new(start, field, law.clone(), growth.clone());
    let times = snapshot_times(start, config.t_end, config.snapshot_count);
    let mut snapshots = Vec::with_capacity(times.len());
    let mut series = crate::analysis::DiagnosticsSeries::new();
    for &t in &times {
        state = advance_to(&state, t, config.cfl_safety)?;
        series.push(diagnostics_row(&state, &l1_weight, &linf_weight, config.mask_threshold)?);
        snapshots.push(state.clone());
    }
    Ok(RunOutput { law, growth, l1_weight, linf_weight, p_max, snapshots, series })
}

fn simulate_pressure(
    config: &crate::config::ScenarioConfig,
) -> Result<RunOutput, crate::analysis::AnalysisError> {
    let gamma = match config.law {
        crate::config::LawSpec::PowerLaw { gamma } => gamma,
        _ => unreachable!("validated: pressure form needs the power law"),
    };
    let growth = GrowthLaw::zero();
    let grid = build_grid(config)?;
    let (_, p0) = initial_values(config, &grid)?;
    let p0_max = p0.iter().cloned().fold(0.0f64, f64::max);
    if !(p0_max > 0.0) {
        return Err(crate::analysis::AnalysisError::Config(
            "pressure-form initial data is identically zero".into(),
        ));
    }
    // the maximum of p does not increase along the flow
    let p_max = config.law_p_max.unwrap_or(p0_max * (1.0 + 1e-9));
    let law = PressureLaw::power_law(gamma, p_max)
        .map_err(|e| crate::analysis::AnalysisError::Solver(e.into()))?;
    let l1_weight = crate::weights::build_l1_weight(&law, p_max)?;
    let linf_weight = crate::weights::build_linfty_weight(&law, p_max)?;

    let mut p = Field::new(grid.clone(), Quantity::Pressure, p0)?;
    let make_state = |p: &Field, t: f64, steps: u64| -> Result<SimState, SolverError> {
        let n: Result<Vec<f64>, _> =
            p.values.iter().map(|&v| law.density_from_pressure(v)).collect();
        let mut s = SimState::new(
            t,
            Field::new(grid.clone(), Quantity::Density, n?)?,
            law.clone(),
            GrowthLaw::zero(),
        );
        s.step_count = steps;
        Ok(s)
    };

    let times = snapshot_times(0.0, config.t_end, config.snapshot_count);
    let mut snapshots = Vec::with_capacity(times.len());
    let mut series = crate::analysis::DiagnosticsSeries::new();
    let mut t = 0.0;
    let mut steps: u64 = 0;
    let dx = grid.dx();
    for &target in &times {
        while t < target - 1e-14 * target.abs().max(1.0) {
            let max_p = p.values.iter().cloned().fold(0.0f64, f64::max);
            if max_p == 0.0 {
                break;
            }
            let dt = (config.cfl_safety * dx * dx / (2.0 * gamma * max_p)).min(target - t);
            p = step_pressure_1d(&p, gamma, dt, config.cfl_safety)?;
            t += dt;
            steps += 1;
        }
        t = target;
        let state = make_state(&p, t, steps)?;
        series.push(diagnostics_row(&state, &l1_weight, &linf_weight, config.mask_threshold)?);
        snapshots.push(state);
    }
    Ok(RunOutput { law, growth, l1_weight, linf_weight, p_max, snapshots, series })
}
