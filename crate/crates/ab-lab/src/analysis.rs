//! Estimate functionals along trajectories, decay-law fits, and
//! bound-satisfaction reports for the implemented theorems.

use crate::growth_laws::{GrowthLaw, GrowthLawError};
use crate::pressure_laws::PressureLaw;
use crate::solver::{laplacian, Field, Quantity, SimState, SolverError};
use crate::weights::{
    self, LInftyBranch, TimeBound, Weight, WeightError,
};
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum AnalysisError {
    InsufficientData(String),
    Hypothesis(String),
    Weight(WeightError),
    Solver(SolverError),
    Config(String),
}

impl fmt::Display for AnalysisError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnalysisError::InsufficientData(m) => write!(f, "insufficient data: {m}"),
            AnalysisError::Hypothesis(m) => write!(f, "hypothesis violated: {m}"),
            AnalysisError::Weight(e) => write!(f, "{e}"),
            AnalysisError::Solver(e) => write!(f, "{e}"),
            AnalysisError::Config(m) => write!(f, "scenario: {m}"),
        }
    }
}

impl std::error::Error for AnalysisError {}

impl From<WeightError> for AnalysisError {
    fn from(e: WeightError) -> Self {
        AnalysisError::Weight(e)
    }
}

impl From<SolverError> for AnalysisError {
    fn from(e: SolverError) -> Self {
        AnalysisError::Solver(e)
    }
}

impl From<GrowthLawError> for AnalysisError {
    fn from(e: GrowthLawError) -> Self {
        AnalysisError::Solver(SolverError::Growth(e))
    }
}

/// Time series of every tracked functional, one entry per snapshot.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DiagnosticsSeries {
    pub times: Vec<f64>,
    pub mass: Vec<f64>,
    pub min_w: Vec<f64>,
    pub sup_weighted_neg_w: Vec<f64>,
    pub l1_weighted_neg_w: Vec<f64>,
    pub l2_weighted_neg_w_sq: Vec<f64>,
    pub complementarity_r1: Vec<f64>,
    pub complementarity_r2: Vec<f64>,
    pub max_pxx: Vec<f64>,
}

/// One row of [`DiagnosticsSeries`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticsRow {
    pub time: f64,
    pub mass: f64,
    pub min_w: f64,
    pub sup_weighted_neg_w: f64,
    pub l1_weighted_neg_w: f64,
    pub l2_weighted_neg_w_sq: f64,
    pub complementarity_r1: f64,
    pub complementarity_r2: f64,
    pub max_pxx: f64,
}

impl DiagnosticsSeries {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Appends a row. Times must strictly increase and entries be finite.
    pub fn push(&mut self, row: DiagnosticsRow) {
        if let Some(&last) = self.times.last() {
            assert!(row.time > last, "diagnostics times must strictly increase");
        }
        for v in [
            row.time,
            row.mass,
            row.min_w,
            row.sup_weighted_neg_w,
            row.l1_weighted_neg_w,
            row.l2_weighted_neg_w_sq,
            row.complementarity_r1,
            row.complementarity_r2,
            row.max_pxx,
        ] {
            assert!(v.is_finite(), "diagnostics entries must be finite");
        }
        self.times.push(row.time);
        self.mass.push(row.mass);
        self.min_w.push(row.min_w);
        self.sup_weighted_neg_w.push(row.sup_weighted_neg_w);
        self.l1_weighted_neg_w.push(row.l1_weighted_neg_w);
        self.l2_weighted_neg_w_sq.push(row.l2_weighted_neg_w_sq);
        self.complementarity_r1.push(row.complementarity_r1);
        self.complementarity_r2.push(row.complementarity_r2);
        self.max_pxx.push(row.max_pxx);
    }
}

/// w = Delta p + G(p), cellwise.
pub fn w_field(p: &Field, growth: &GrowthLaw) -> Result<Field, AnalysisError> {
    let mut w = laplacian(p);
    if !growth.is_zero() {
        for (wi, &pi) in w.values.iter_mut().zip(&p.values) {
            *wi += growth.g(pi)?;
        }
    }
    w.quantity = Quantity::W;
    Ok(w)
}

/// Cellwise negative part |f|_- = max(0, -f).
pub fn neg_part(f: &Field) -> Field {
    Field {
        grid: f.grid.clone(),
        quantity: f.quantity,
        values: f.values.iter().map(|&v| (-v).max(0.0)).collect(),
    }
}

/// Cells where the solution is considered positive: n > threshold_rel * max n,
/// eroded by [`MASK_EROSION`] cells around the sub-threshold region.
///
/// The erosion matters. The front of a degenerate-diffusion run carries one
/// or two partially filled cells whose density sits well below the profile
/// that the neighbouring cells follow; the discrete Laplacian one stencil
/// away from them picks up an O(|grad p|/dx) artifact that has nothing to do
/// with the estimate being checked. The relative threshold alone cannot
/// exclude those cells (a filling cell passes through every value), so the
/// mask is pulled back three cells from the sub-threshold region: the toe of
/// the front decays multiple orders per cell, leaving at most two partially
/// filled cells above any small threshold, plus one polluted neighbour.
pub fn support_mask(n: &Field, threshold_rel: f64) -> Vec<bool> {
    const MASK_EROSION: isize = 3;
    let max_n = n.values.iter().cloned().fold(0.0f64, f64::max);
    let thr = threshold_rel * max_n;
    let raw: Vec<bool> = n.values.iter().map(|&v| v > thr).collect();
    if raw.iter().all(|&m| m) {
        return raw;
    }
    let g = &n.grid;
    let cells = g.cells;
    let idx = |i: isize, bound: usize| -> usize {
        match g.boundary {
            crate::solver::Boundary::Periodic => i.rem_euclid(bound as isize) as usize,
            crate::solver::Boundary::NoFlux => i.clamp(0, bound as isize - 1) as usize,
        }
    };
    let mut out = vec![false; raw.len()];
    match g.dim {
        1 => {
            for i in 0..cells {
                out[i] = (-MASK_EROSION..=MASK_EROSION).all(|d| raw[idx(i as isize + d, cells)]);
            }
        }
        _ => {
            for j in 0..cells {
                for i in 0..cells {
                    let mut keep = true;
                    'scan: for dj in -MASK_EROSION..=MASK_EROSION {
                        for di in -MASK_EROSION..=MASK_EROSION {
                            if !raw[idx(j as isize + dj, cells) * cells + idx(i as isize + di, cells)]
                            {
                                keep = false;
                                break 'scan;
                            }
                        }
                    }
                    out[j * cells + i] = keep;
                }
            }
        }
    }
    out
}

/// The three weighted functionals of |w|_- over the masked cells.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct WeightedFunctionals {
    /// sum h(p) |w|_- dx^d
    pub l1: f64,
    /// sum h(p) |w|_-^2 dx^d
    pub l2: f64,
    /// max h(p) |w|_-
    pub sup: f64,
}

pub fn weighted_functionals(
    p: &Field,
    w: &Field,
    weight: &Weight,
    mask: &[bool],
) -> WeightedFunctionals {
    let vol = p.grid.cell_volume();
    let mut out = WeightedFunctionals::default();
    for ((&pi, &wi), &m) in p.values.iter().zip(&w.values).zip(mask) {
        if !m {
            continue;
        }
        let h = weight.h(pi);
        let neg = (-wi).max(0.0);
        out.l1 += h * neg;
        out.l2 += h * neg * neg;
        out.sup = out.sup.max(h * neg);
    }
    out.l1 *= vol;
    out.l2 *= vol;
    out
}

/// Minimum of w over the masked cells (+inf if the mask is empty).
pub fn masked_min(w: &Field, mask: &[bool]) -> f64 {
    w.values
        .iter()
        .zip(mask)
        .filter(|(_, &m)| m)
        .map(|(&v, _)| v)
        .fold(f64::INFINITY, f64::min)
}

/// Decay models the theorems assert.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecayModel {
    /// y = C / t
    CoverT,
    /// y = C / t^2
    CoverT2,
}

/// Least squares of log y against log t with the model's fixed slope.
/// Returns `(C, r_squared)`. Samples with y <= 0 are dropped; fewer than five
/// usable samples is an error.
pub fn fit_decay(
    times: &[f64],
    ys: &[f64],
    model: DecayModel,
) -> Result<(f64, f64), AnalysisError> {
    let slope = match model {
        DecayModel::CoverT => -1.0,
        DecayModel::CoverT2 => -2.0,
    };
    let mut lt = Vec::new();
    let mut ly = Vec::new();
    for (&t, &y) in times.iter().zip(ys) {
        if t > 0.0 && y > 0.0 {
            lt.push(t.ln());
            ly.push(y.ln());
        }
    }
    if lt.len() < 5 {
        return Err(AnalysisError::InsufficientData(format!(
            "decay fit needs >= 5 positive samples, got {}",
            lt.len()
        )));
    }
    let n = lt.len() as f64;
    let intercept = lt.iter().zip(&ly).map(|(t, y)| y - slope * t).sum::<f64>() / n;
    let mean_ly = ly.iter().sum::<f64>() / n;
    let mut ss_res = 0.0;
    let mut ss_tot = 0.0;
    for (t, y) in lt.iter().zip(&ly) {
        ss_res += (y - (intercept + slope * t)).powi(2);
        ss_tot += (y - mean_ly).powi(2);
    }
    let r2 = if ss_tot <= 1e-30 {
        if ss_res <= 1e-30 {
            1.0
        } else {
            0.0
        }
    } else {
        1.0 - ss_res / ss_tot
    };
    Ok((intercept.exp(), r2))
}

/// Theorem identifiers, one per implemented bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum TheoremId {
    L1NoG,
    L1WithG,
    LinfSpecial,
    LinfNoGB1,
    LinfNoGB2,
    LinfWithG,
    L2NoG,
    L2Weighted,
    L2WithG,
}

impl TheoremId {
    pub const ALL: [TheoremId; 9] = [
        TheoremId::L1NoG,
        TheoremId::L1WithG,
        TheoremId::LinfSpecial,
        TheoremId::LinfNoGB1,
        TheoremId::LinfNoGB2,
        TheoremId::LinfWithG,
        TheoremId::L2NoG,
        TheoremId::L2Weighted,
        TheoremId::L2WithG,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            TheoremId::L1NoG => "L1_NO_G",
            TheoremId::L1WithG => "L1_WITH_G",
            TheoremId::LinfSpecial => "LINF_SPECIAL",
            TheoremId::LinfNoGB1 => "LINF_NO_G_B1",
            TheoremId::LinfNoGB2 => "LINF_NO_G_B2",
            TheoremId::LinfWithG => "LINF_WITH_G",
            TheoremId::L2NoG => "L2_NO_G",
            TheoremId::L2Weighted => "L2_WEIGHTED",
            TheoremId::L2WithG => "L2_WITH_G",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|t| t.as_str() == s)
    }

    /// Bounds without growth terms require the zero growth law.
    pub fn requires_zero_growth(&self) -> bool {
        matches!(
            self,
            TheoremId::L1NoG | TheoremId::LinfNoGB1 | TheoremId::LinfNoGB2 | TheoremId::L2NoG
                | TheoremId::L2Weighted
        )
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Direction of a bound check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundSign {
    /// The theorem bounds the series from above: margin = bound - measured.
    UpperBoundsSeries,
    /// The theorem bounds min w from below: margin = measured - bound.
    LowerBoundsMinW,
}

/// Outcome of checking one theorem bound along a run.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub theorem: TheoremId,
    pub times: Vec<f64>,
    pub measured: Vec<f64>,
    pub bound: Vec<f64>,
    /// Signed margins, positive = satisfied.
    pub margins: Vec<f64>,
    pub worst_margin: f64,
    pub worst_time: f64,
    pub tol_rel: f64,
    pub passed: bool,
    /// Human-readable rendering of the constants behind the bound.
    pub constants: String,
}

/// Checks `measured(t)` against `bound_fn(t)`. A run passes when every margin
/// satisfies `margin >= -tol_rel * |bound|`, absorbing discretisation error.
pub fn bound_check(
    theorem: TheoremId,
    times: &[f64],
    measured: &[f64],
    bound_fn: &dyn Fn(f64) -> f64,
    sign: BoundSign,
    tol_rel: f64,
    constants: String,
) -> BoundReport {
    let mut bound = Vec::with_capacity(times.len());
    let mut margins = Vec::with_capacity(times.len());
    let mut worst_margin = f64::INFINITY;
    let mut worst_time = f64::NAN;
    let mut passed = true;
    for (&t, &y) in times.iter().zip(measured) {
        let b = bound_fn(t);
        let m = match sign {
            BoundSign::UpperBoundsSeries => b - y,
            BoundSign::LowerBoundsMinW => y - b,
        };
        if m < worst_margin {
            worst_margin = m;
            worst_time = t;
        }
        if m < -tol_rel * b.abs() {
            passed = false;
        }
        bound.push(b);
        margins.push(m);
    }
    BoundReport {
        theorem,
        times: times.to_vec(),
        measured: measured.to_vec(),
        bound,
        margins,
        worst_margin,
        worst_time,
        tol_rel,
        passed,
        constants,
    }
}

/// L1 residuals of the stiff-limit complementarity relations:
/// `r1 = sum |p w| dx^d` and `r2 = sum |p (n - 1)| dx^d`.
pub fn complementarity_residual(p: &Field, w: &Field, n: &Field) -> (f64, f64) {
    let vol = p.grid.cell_volume();
    let mut r1 = 0.0;
    let mut r2 = 0.0;
    for i in 0..p.values.len() {
        r1 += (p.values[i] * w.values[i]).abs();
        r2 += (p.values[i] * (n.values[i] - 1.0)).abs();
    }
    (r1 * vol, r2 * vol)
}

/// Result of fitting `y ~ C / (T - t)` to a blow-up indicator series.
#[derive(Debug, Clone, PartialEq)]
pub enum BlowupFit {
    Fitted { t_blowup: f64, amplitude: f64, r_squared: f64 },
    /// The series never exceeded the trigger threshold.
    NoBlowup,
}

/// Trigger: the series must exceed `10 x` its initial value somewhere; the
/// fit runs on the post-trigger window, where the near-singular hyperbola
/// dominates over slow early drift.
const BLOWUP_TRIGGER: f64 = 10.0;

/// Fits `max p_xx ~ C / (T - t)` by log-residual least squares over (T, C).
/// For fixed T the optimal `ln C` is the mean of `ln y + ln(T - t)`; the
/// one-dimensional search over T is a golden-section minimisation.
pub fn blowup_fit(times: &[f64], ys: &[f64]) -> Result<BlowupFit, AnalysisError> {
    if times.len() != ys.len() || times.len() < 2 {
        return Err(AnalysisError::InsufficientData("blow-up fit needs a series".into()));
    }
    let y0 = ys[0];
    if !(y0 > 0.0) {
        return Err(AnalysisError::InsufficientData("initial indicator must be positive".into()));
    }
    if !ys.iter().any(|&y| y > BLOWUP_TRIGGER * y0) {
        return Ok(BlowupFit::NoBlowup);
    }
    let window: Vec<(f64, f64)> = times
        .iter()
        .zip(ys)
        .filter(|(_, &y)| y > BLOWUP_TRIGGER * y0)
        .map(|(&t, &y)| (t, y))
        .collect();
    if window.len() < 5 {
        return Err(AnalysisError::InsufficientData(format!(
            "blow-up window has {} samples, need >= 5",
            window.len()
        )));
    }
    let t_last = window.last().unwrap().0;
    let span = (t_last - window[0].0).max(1e-12);

    let ss = |t_blow: f64| -> (f64, f64) {
        let n = window.len() as f64;
        let ln_c = window
            .iter()
            .map(|&(t, y)| y.ln() + (t_blow - t).ln())
            .sum::<f64>()
            / n;
        let res = window
            .iter()
            .map(|&(t, y)| (y.ln() - (ln_c - (t_blow - t).ln())).powi(2))
            .sum::<f64>();
        (res, ln_c)
    };

    // golden section over theta with T = t_last + e^theta
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut a = (1e-7 * span).ln();
    let mut b = (50.0 * span).ln();
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = ss(t_last + c.exp()).0;
    let mut fd = ss(t_last + d.exp()).0;
    for _ in 0..200 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = ss(t_last + c.exp()).0;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = ss(t_last + d.exp()).0;
        }
        if b - a < 1e-13 {
            break;
        }
    }
    let t_blowup = t_last + (0.5 * (a + b)).exp();
    let (ss_res, ln_c) = ss(t_blowup);
    let mean_ly =
        window.iter().map(|&(_, y)| y.ln()).sum::<f64>() / window.len() as f64;
    let ss_tot: f64 = window.iter().map(|&(_, y)| (y.ln() - mean_ly).powi(2)).sum();
    let r2 = if ss_tot <= 1e-30 {
        if ss_res <= 1e-30 {
            1.0
        } else {
            0.0
        }
    } else {
        1.0 - ss_res / ss_tot
    };
    Ok(BlowupFit::Fitted { t_blowup, amplitude: ln_c.exp(), r_squared: r2 })
}

/// Everything a theorem check needs from a completed run.
pub struct CheckContext<'a> {
    pub law: &'a PressureLaw,
    pub growth: &'a GrowthLaw,
    pub n_dim: u32,
    pub p_max: f64,
    pub l1_weight: &'a Weight,
    pub linf_weight: &'a Weight,
    pub snapshots: &'a [SimState],
    pub series: &'a DiagnosticsSeries,
    pub mask_threshold: f64,
    /// Fraction of the run treated as transient and excluded from checks.
    pub warmup_fraction: f64,
    pub tol_rel: f64,
    /// Multiplies every bound constant; 1.0 except under fault injection.
    pub bound_scale: f64,
}

impl CheckContext<'_> {
    /// Time the run's data was given at (Barenblatt runs start at t0 > 0).
    fn run_t0(&self) -> f64 {
        self.series.times.first().copied().unwrap_or(0.0)
    }

    /// Indices of post-warmup snapshots with `clock(t) > 0`.
    fn window(&self, clock: impl Fn(f64) -> f64) -> Vec<usize> {
        let times = &self.series.times;
        if times.is_empty() {
            return Vec::new();
        }
        let t0 = times[0];
        let t1 = *times.last().unwrap();
        let t_warm = t0 + self.warmup_fraction * (t1 - t0);
        times
            .iter()
            .enumerate()
            .filter(|(_, &t)| clock(t) > 0.0 && (t > t_warm || self.warmup_fraction == 0.0))
            .map(|(i, _)| i)
            .collect()
    }

    fn ensure_growth(&self, id: TheoremId) -> Result<(), AnalysisError> {
        if id.requires_zero_growth() && !self.growth.is_zero() {
            return Err(AnalysisError::Hypothesis(format!(
                "{id} is a zero-growth bound but the scenario has growth"
            )));
        }
        Ok(())
    }

    fn masked_measure_and_h_integral(&self, weight: Option<&Weight>) -> Result<(f64, f64), AnalysisError> {
        let mut max_measure = 0.0f64;
        let mut max_h = 0.0f64;
        for s in self.snapshots {
            let p = s.pressure()?;
            let mask = support_mask(&s.n, self.mask_threshold);
            let vol = s.n.grid.cell_volume();
            let cells = mask.iter().filter(|&&m| m).count();
            max_measure = max_measure.max(cells as f64 * vol);
            let h_sum: f64 = p
                .values
                .iter()
                .zip(&mask)
                .filter(|(_, &m)| m)
                .map(|(&pi, _)| weight.map_or(1.0, |w| w.h(pi)))
                .sum();
            max_h = max_h.max(h_sum * vol);
        }
        Ok((max_measure, max_h))
    }

    /// sum h |w|_-^2 per snapshot with an explicit weight choice.
    fn l2_series(&self, weight: Option<&Weight>) -> Result<Vec<f64>, AnalysisError> {
        let mut out = Vec::with_capacity(self.snapshots.len());
        for s in self.snapshots {
            let p = s.pressure()?;
            let w = w_field(&p, self.growth)?;
            let mask = support_mask(&s.n, self.mask_threshold);
            let vol = s.n.grid.cell_volume();
            let mut acc = 0.0;
            for ((&pi, &wi), &m) in p.values.iter().zip(&w.values).zip(&mask) {
                if m {
                    let neg = (-wi).max(0.0);
                    acc += weight.map_or(1.0, |wt| wt.h(pi)) * neg * neg;
                }
            }
            out.push(acc * vol);
        }
        Ok(out)
    }

    fn subset(&self, idx: &[usize], values: &[f64]) -> Vec<f64> {
        idx.iter().map(|&i| values[i]).collect()
    }
}

/// Runs one theorem's bound check against the run in `ctx`.
///
/// Clock convention: the decay (upper) bounds measure time from the run's
/// data, `tau = t - t0`, because their constants are taken over the observed
/// window; a self-similar run started at t0 > 0 would otherwise pair a
/// finite constant with the wrong time origin. The lower bounds on min w use
/// absolute time, which is valid whenever the solution genuinely evolved
/// from t = 0 and is the strongest (sharp for the self-similar profile).
pub fn check_theorem(id: TheoremId, ctx: &CheckContext) -> Result<BoundReport, AnalysisError> {
    ctx.ensure_growth(id)?;
    let upper = matches!(
        id,
        TheoremId::L1NoG
            | TheoremId::L1WithG
            | TheoremId::L2NoG
            | TheoremId::L2Weighted
            | TheoremId::L2WithG
    );
    let t0 = if upper { ctx.run_t0() } else { 0.0 };
    let clock = move |t: f64| t - t0;
    let idx = ctx.window(clock);
    if idx.is_empty() {
        return Err(AnalysisError::InsufficientData(
            "no post-warmup snapshots with positive clock time".into(),
        ));
    }
    let times = ctx.subset(&idx, &ctx.series.times);
    let scale = ctx.bound_scale;

    match id {
        TheoremId::L1NoG | TheoremId::L1WithG => {
            let mut a = 0.0f64;
            for s in ctx.snapshots {
                let p = s.pressure()?;
                a = a.max(weights::l1_constant_a(
                    ctx.law,
                    ctx.l1_weight,
                    ctx.n_dim,
                    &p.values,
                    p.grid.cell_volume(),
                )?);
            }
            let measured = ctx.subset(&idx, &ctx.series.l1_weighted_neg_w);
            let (bound, constants): (TimeBound, String) = if id == TheoremId::L1NoG {
                (
                    TimeBound::InverseT { constant: scale * a },
                    format!("A = {a:.6e}"),
                )
            } else {
                let d1 = weights::delta1_bar(ctx.law, ctx.growth, ctx.l1_weight, ctx.n_dim, ctx.p_max);
                (
                    TimeBound::ExpSaturating { prefactor: scale * a, delta_bar: d1 },
                    format!("A = {a:.6e}, delta1_bar = {d1:.6e}"),
                )
            };
            Ok(bound_check(
                id,
                &times,
                &measured,
                &|t| bound.eval(clock(t)).unwrap_or(f64::INFINITY),
                BoundSign::UpperBoundsSeries,
                ctx.tol_rel,
                constants,
            ))
        }
        TheoremId::LinfSpecial => {
            let (alpha0, delta_bar) =
                weights::special_case_alpha0(ctx.law, ctx.growth, ctx.n_dim, ctx.p_max)?;
            if !(alpha0 > 0.0) {
                return Err(AnalysisError::Hypothesis(format!(
                    "LINF_SPECIAL needs min(q' + 2/N) > 0, got {alpha0}"
                )));
            }
            let measured = ctx.subset(&idx, &ctx.series.min_w);
            let sat = TimeBound::ExpSaturating { prefactor: scale / alpha0, delta_bar };
            let constants = format!("alpha0 = {alpha0:.6e}, delta_bar = {delta_bar:.6e}");
            Ok(bound_check(
                id,
                &times,
                &measured,
                &|t| -sat.eval(t).unwrap_or(f64::INFINITY),
                BoundSign::LowerBoundsMinW,
                ctx.tol_rel,
                constants,
            ))
        }
        TheoremId::LinfNoGB1 => {
            let at0 = weights::alpha_tilde_0(ctx.law, ctx.p_max, LInftyBranch::RatioBranch, ctx.n_dim)?;
            // q/p >= q'(0) under the branch hypothesis, so the bound on min w
            // is -1 / (q'(0) alpha~_0 t); exact for the power law where q/p is
            // constant.
            let q10 = ctx.law.q_prime(0.0).expect("q'(0)");
            let measured = ctx.subset(&idx, &ctx.series.min_w);
            let constants = format!("alpha_tilde_0 = {at0:.6e}, q'(0) = {q10:.6e}");
            Ok(bound_check(
                id,
                &times,
                &measured,
                &|t| -scale / (q10 * at0 * t),
                BoundSign::LowerBoundsMinW,
                ctx.tol_rel,
                constants,
            ))
        }
        TheoremId::LinfNoGB2 | TheoremId::LinfWithG => {
            let at0 = weights::alpha_tilde_0(ctx.law, ctx.p_max, LInftyBranch::OdeBranch, ctx.n_dim)?;
            let min_qp = crate::numerics::scan_min(
                |p| ctx.law.q_prime(p).expect("q' in range"),
                0.0,
                ctx.p_max,
                crate::numerics::SCAN_RESOLUTION,
            )
            .value;
            let front = 1.0 + min_qp;
            let measured = ctx.subset(&idx, &ctx.series.min_w);
            if id == TheoremId::LinfNoGB2 {
                let constants =
                    format!("alpha_tilde_0 = {at0:.6e}, 1 + min q' = {front:.6e}");
                Ok(bound_check(
                    id,
                    &times,
                    &measured,
                    &|t| -scale / (front * at0 * t),
                    BoundSign::LowerBoundsMinW,
                    ctx.tol_rel,
                    constants,
                ))
            } else {
                let dinf = weights::delta_infty_bar(
                    ctx.law,
                    ctx.growth,
                    ctx.linf_weight,
                    ctx.n_dim,
                    ctx.p_max,
                );
                let sat = TimeBound::ExpSaturating {
                    prefactor: scale / (front * at0),
                    delta_bar: dinf,
                };
                let constants = format!(
                    "alpha_tilde_0 = {at0:.6e}, 1 + min q' = {front:.6e}, delta_infty_bar = {dinf:.6e}"
                );
                Ok(bound_check(
                    id,
                    &times,
                    &measured,
                    &|t| -sat.eval(t).unwrap_or(f64::INFINITY),
                    BoundSign::LowerBoundsMinW,
                    ctx.tol_rel,
                    constants,
                ))
            }
        }
        TheoremId::L2NoG => {
            let qpp_max = crate::numerics::scan_max(
                |p| ctx.law.q_second(p).expect("q'' in range"),
                0.0,
                ctx.p_max,
                crate::numerics::SCAN_RESOLUTION,
            )
            .value;
            if qpp_max > 1e-9 {
                return Err(AnalysisError::Hypothesis(format!(
                    "L2_NO_G needs q'' <= 0, max q'' = {qpp_max}"
                )));
            }
            let alpha0 = crate::numerics::scan_min(
                |p| 2.0 / ctx.n_dim as f64 - 1.0 + 0.5 * ctx.law.q_prime(p).expect("q'"),
                0.0,
                ctx.p_max,
                crate::numerics::SCAN_RESOLUTION,
            )
            .value;
            if !(alpha0 > 0.0) {
                return Err(AnalysisError::Hypothesis(format!(
                    "L2_NO_G needs inf(2/N - 1 + q'/2) > 0, got {alpha0}"
                )));
            }
            let (support, _) = ctx.masked_measure_and_h_integral(None)?;
            let c = support / (alpha0 * alpha0);
            let series = ctx.l2_series(None)?;
            let measured = ctx.subset(&idx, &series);
            let constants = format!("alpha0 = {alpha0:.6e}, |supp| = {support:.6e}, C = {c:.6e}");
            let b = TimeBound::InverseT2 { constant: scale * c };
            Ok(bound_check(
                id,
                &times,
                &measured,
                &|t| b.eval(clock(t)).unwrap_or(f64::INFINITY),
                BoundSign::UpperBoundsSeries,
                ctx.tol_rel,
                constants,
            ))
        }
        TheoremId::L2Weighted | TheoremId::L2WithG => {
            let rep = weights::l2_coefficients(
                ctx.law,
                ctx.growth,
                Some(ctx.linf_weight),
                ctx.n_dim,
                ctx.p_max,
            );
            if rep.beta_max > 1e-9 {
                return Err(AnalysisError::Hypothesis(format!(
                    "{id} needs beta_2 <= 0, max beta_2 = {:.6e}",
                    rep.beta_max
                )));
            }
            if !(rep.alpha_min > 0.0) {
                return Err(AnalysisError::Hypothesis(format!(
                    "{id} needs min alpha_2 > 0 for the decay bound, got {:.6e}",
                    rep.alpha_min
                )));
            }
            let (_, h_int) = ctx.masked_measure_and_h_integral(Some(ctx.linf_weight))?;
            let series = ctx.l2_series(Some(ctx.linf_weight))?;
            let measured = ctx.subset(&idx, &series);
            // Y' <= -k Y^{3/2} + delta2 Y with k = alpha_min / sqrt(int h)
            let k = rep.alpha_min / h_int.sqrt();
            if id == TheoremId::L2Weighted {
                let c = 4.0 * h_int / (rep.alpha_min * rep.alpha_min);
                let b = TimeBound::InverseT2 { constant: scale * c };
                let constants = format!(
                    "alpha2_min = {:.6e}, int h = {h_int:.6e}, C = {c:.6e}",
                    rep.alpha_min
                );
                Ok(bound_check(
                    id,
                    &times,
                    &measured,
                    &|t| b.eval(clock(t)).unwrap_or(f64::INFINITY),
                    BoundSign::UpperBoundsSeries,
                    ctx.tol_rel,
                    constants,
                ))
            } else {
                let half_rate = TimeBound::ExpSaturating {
                    prefactor: 2.0 / k,
                    delta_bar: 0.5 * rep.delta_bar,
                };
                let constants = format!(
                    "alpha2_min = {:.6e}, delta2_bar = {:.6e}, int h = {h_int:.6e}",
                    rep.alpha_min, rep.delta_bar
                );
                Ok(bound_check(
                    id,
                    &times,
                    &measured,
                    &|t| {
                        let v = half_rate.eval(clock(t)).unwrap_or(f64::INFINITY);
                        scale * v * v
                    },
                    BoundSign::UpperBoundsSeries,
                    ctx.tol_rel,
                    constants,
                ))
            }
        }
    }
}
