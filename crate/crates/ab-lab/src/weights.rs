//! Weight functions h(p) and estimate coefficients for the lower bounds on
//! the pressure Laplacian, in L1, L2 and L-infinity.
//!
//! Two constructions recur. The L1 weight kills `beta_1 = q h'' - h'`, i.e.
//! `h'(p) = exp(int dr / q(r))` normalised so that `h' ~ p^{1/q'(0)}` at the
//! degenerate origin; `h(0) = 0`. The L-infinity weight solves, with
//! `u = 1/h`,
//!
//! ```text
//!     q u' + (q' + 1) u = 1 + q'(0),      u(0) = 1,
//! ```
//!
//! which kills `beta_inf` and is trapped between the running-extrema envelope
//! `(1 + min_{r<=p} q') / (1 + q'(0)) <= h <= (1 + max_{r<=p} q') / (1 + q'(0))`.
//!
//! For the power law both constructions are explicit (`h_1 = gamma/(gamma+1)
//! p^{(gamma+1)/gamma}`, `h_inf = 1`). For the DHV law `h_1 = eps p - eps^2
//! ln(1 + p/eps)` and the exact solution of the weight ODE is
//! `h_inf(p) = p^2 / (2 eps (p - eps ln(1 + p/eps)))`.

use crate::growth_laws::GrowthLaw;
use crate::numerics::{scan_max, scan_min, SCAN_RESOLUTION};
use crate::pressure_laws::PressureLaw;
use std::fmt;

/// Which construction produced a weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightProvenance {
    L1Construction,
    LInftyOde,
    Identity,
    UserPoly,
}

/// Estimate family a coefficient or residual belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightFamily {
    L1,
    LInfty,
    L2,
}

/// Branch of the no-growth L-infinity bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LInftyBranch {
    /// Requires (q/p)' >= 0; constant is `min p q'/q`.
    RatioBranch,
    /// Requires q' > -1; constant from the weight ODE envelope.
    OdeBranch,
}

#[derive(Debug, Clone, PartialEq)]
pub enum WeightError {
    /// A structural hypothesis of the construction fails for this law.
    HypothesisViolation { what: String },
    /// The construction itself cannot proceed (e.g. q'(0) <= 0).
    Construction(String),
    /// Argument outside the valid domain (e.g. t <= 0 in a time bound).
    Domain { what: &'static str, value: f64 },
}

impl fmt::Display for WeightError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightError::HypothesisViolation { what } => write!(f, "hypothesis violated: {what}"),
            WeightError::Construction(msg) => write!(f, "weight construction failed: {msg}"),
            WeightError::Domain { what, value } => write!(f, "domain error: {what} ({value})"),
        }
    }
}

impl std::error::Error for WeightError {}

#[derive(Debug, Clone, PartialEq)]
enum WeightRepr {
    /// h = gamma/(gamma+1) p^{(gamma+1)/gamma}
    PowerLawL1 { gamma: f64 },
    /// h = eps p - eps^2 ln(1 + p/eps)
    DhvL1 { epsilon: f64 },
    /// h identically 1
    Constant,
    /// h = 1/u with u = 2 eps (p - eps ln(1 + p/eps)) / p^2
    DhvLInfty { epsilon: f64 },
    /// h(p) = sum c_k p^k
    Poly { coeffs: Vec<f64> },
    /// Dense samples of (h, h', h'') on a uniform grid, cubic Hermite in
    /// between; h''' samples sharpen the h'' interpolation when the
    /// construction provides them (the L1 kernel has singular h'' near 0).
    Sampled { h: Vec<f64>, hp: Vec<f64>, hpp: Vec<f64>, hppp: Option<Vec<f64>> },
}

/// A positive weight function with two derivatives on `[0, p_max]`.
///
/// Immutable and freely shareable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Weight {
    provenance: WeightProvenance,
    p_max: f64,
    repr: WeightRepr,
}

impl Weight {
    /// The trivial weight h = 1.
    pub fn identity(p_max: f64) -> Self {
        Self { provenance: WeightProvenance::Identity, p_max, repr: WeightRepr::Constant }
    }

    /// A user polynomial weight `h(p) = sum_k coeffs[k] p^k`.
    pub fn user_poly(coeffs: Vec<f64>, p_max: f64) -> Self {
        Self { provenance: WeightProvenance::UserPoly, p_max, repr: WeightRepr::Poly { coeffs } }
    }

    pub fn provenance(&self) -> WeightProvenance {
        self.provenance
    }

    pub fn p_max(&self) -> f64 {
        self.p_max
    }

    /// h(p). Pressures are clamped into `[0, p_max]`; callers guarantee the
    /// fields they evaluate stay in range up to round-off.
    pub fn h(&self, p: f64) -> f64 {
        let p = p.clamp(0.0, self.p_max);
        match &self.repr {
            WeightRepr::PowerLawL1 { gamma } => gamma / (gamma + 1.0) * p.powf((gamma + 1.0) / gamma),
            WeightRepr::DhvL1 { epsilon } => epsilon * epsilon * x_minus_ln1p(p / epsilon),
            WeightRepr::Constant => 1.0,
            WeightRepr::DhvLInfty { epsilon } => 1.0 / dhv_u(p / epsilon),
            WeightRepr::Poly { coeffs } => poly_eval(coeffs, p),
            WeightRepr::Sampled { h, hp, .. } => hermite_value(self.p_max, h, hp, p),
        }
    }

    /// h'(p).
    pub fn h_prime(&self, p: f64) -> f64 {
        let p = p.clamp(0.0, self.p_max);
        match &self.repr {
            WeightRepr::PowerLawL1 { gamma } => p.powf(1.0 / gamma),
            WeightRepr::DhvL1 { epsilon } => epsilon * p / (epsilon + p),
            WeightRepr::Constant => 0.0,
            WeightRepr::DhvLInfty { epsilon } => {
                let u = dhv_u(p / epsilon);
                let up = dhv_u_prime(p, *epsilon);
                -up / (u * u)
            }
            WeightRepr::Poly { coeffs } => poly_eval(&poly_derivative(coeffs), p),
            WeightRepr::Sampled { hp, hpp, .. } => hermite_value(self.p_max, hp, hpp, p),
        }
    }

    /// h''(p).
    pub fn h_second(&self, p: f64) -> f64 {
        let p = p.clamp(0.0, self.p_max);
        match &self.repr {
            WeightRepr::PowerLawL1 { gamma } => p.powf(1.0 / gamma - 1.0) / gamma,
            WeightRepr::DhvL1 { epsilon } => (epsilon / (epsilon + p)) * (epsilon / (epsilon + p)),
            WeightRepr::Constant => 0.0,
            WeightRepr::DhvLInfty { epsilon } => {
                let u = dhv_u(p / epsilon);
                let up = dhv_u_prime(p, *epsilon);
                let upp = dhv_u_second(p, *epsilon, u, up);
                (2.0 * up * up - u * upp) / (u * u * u)
            }
            WeightRepr::Poly { coeffs } => {
                poly_eval(&poly_derivative(&poly_derivative(coeffs)), p)
            }
            WeightRepr::Sampled { hpp, hppp, .. } => match hppp {
                Some(third) => hermite_value(self.p_max, hpp, third, p),
                None => hermite_linear(self.p_max, hpp, p),
            },
        }
    }

    /// The ratio h'q/h extended by its limit at p = 0 when the weight
    /// vanishes there: `q'(0) + 1` for the L1 construction (h ~ p^{1+1/q'(0)})
    /// and `k q'(0)` for a polynomial with a zero of order k.
    fn hq_ratio(&self, law: &PressureLaw, p: f64) -> f64 {
        let h = self.h(p);
        if p <= 1e-8 * self.p_max || h == 0.0 {
            match &self.repr {
                WeightRepr::PowerLawL1 { .. } | WeightRepr::DhvL1 { .. } => {
                    law.q_prime(0.0).expect("q'(0)") + 1.0
                }
                WeightRepr::Sampled { .. } if self.provenance == WeightProvenance::L1Construction => {
                    law.q_prime(0.0).expect("q'(0)") + 1.0
                }
                WeightRepr::Poly { coeffs } => {
                    match coeffs.iter().position(|&c| c != 0.0) {
                        Some(0) | None => 0.0,
                        Some(k) => k as f64 * law.q_prime(0.0).expect("q'(0)"),
                    }
                }
                _ => {
                    if h == 0.0 {
                        0.0
                    } else {
                        self.h_prime(p) * law.q(p).expect("q in range") / h
                    }
                }
            }
        } else {
            self.h_prime(p) * law.q(p).expect("q in range") / h
        }
    }
}

fn poly_eval(coeffs: &[f64], p: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * p + c)
}

fn poly_derivative(coeffs: &[f64]) -> Vec<f64> {
    coeffs.iter().enumerate().skip(1).map(|(k, c)| k as f64 * c).collect()
}

/// x - ln(1 + x), evaluated without cancellation for small x.
fn x_minus_ln1p(x: f64) -> f64 {
    if x < 0.01 {
        // sum_{k>=2} (-1)^k x^k / k
        let mut s = 0.0;
        let mut pw = x * x;
        let mut sign = 1.0;
        for k in 2..=10 {
            s += sign * pw / k as f64;
            pw *= x;
            sign = -sign;
        }
        s
    } else {
        x - x.ln_1p()
    }
}

/// u(x) = 2 (x - ln(1+x)) / x^2, the reciprocal of the DHV limit weight.
fn dhv_u(x: f64) -> f64 {
    if x < 0.01 {
        // 2 sum_{k>=2} (-1)^k x^{k-2} / k
        let mut s = 0.0;
        let mut pw = 1.0;
        let mut sign = 1.0;
        for k in 2..=10 {
            s += sign * 2.0 * pw / k as f64;
            pw *= x;
            sign = -sign;
        }
        s
    } else {
        2.0 * x_minus_ln1p(x) / (x * x)
    }
}

/// u'(p) from the weight ODE: u' = (2 - (2 + 2x) u) / (eps x (1 + x)).
fn dhv_u_prime(p: f64, epsilon: f64) -> f64 {
    let x = p / epsilon;
    if x < 0.05 {
        // numerator 2 - (2+2x)u = sum_{j>=1} 4 (-1)^j x^j / ((j+1)(j+2))
        let mut s = 0.0;
        let mut pw = x;
        let mut sign = -1.0;
        for j in 1..=10 {
            s += sign * 4.0 * pw / ((j + 1) as f64 * (j + 2) as f64);
            pw *= x;
            sign = -sign;
        }
        s / (epsilon * x * (1.0 + x))
    } else {
        let u = dhv_u(x);
        (2.0 - (2.0 + 2.0 * x) * u) / (epsilon * x * (1.0 + x))
    }
}

/// u''(p) from differentiating the ODE: u'' = -(q'' u + (2q'+1) u') / q.
fn dhv_u_second(p: f64, epsilon: f64, u: f64, up: f64) -> f64 {
    let x = p / epsilon;
    if x < 0.05 {
        // d2u/dx2 = sum_{k>=2} 2 (-1)^k k (k-1) x^{k-2} / (k+2), then / eps^2
        let mut s = 0.0;
        let mut pw = 1.0;
        let mut sign = 1.0;
        for k in 2..=12 {
            s += sign * 2.0 * (k * (k - 1)) as f64 * pw / (k + 2) as f64;
            pw *= x;
            sign = -sign;
        }
        s / (epsilon * epsilon)
    } else {
        let q = p * (1.0 + x);
        let qpp = 2.0 / epsilon;
        let qp = 1.0 + 2.0 * x;
        -(qpp * u + (2.0 * qp + 1.0) * up) / q
    }
}

const SAMPLE_NODES: usize = 4097;
const MAX_SIGMA_STEP: f64 = 2e-3;

fn hermite_index(p_max: f64, n: usize, p: f64) -> (usize, f64, f64) {
    let dx = p_max / (n - 1) as f64;
    let j = ((p / dx) as usize).min(n - 2);
    (j, p - j as f64 * dx, dx)
}

fn hermite_value(p_max: f64, y: &[f64], dy: &[f64], p: f64) -> f64 {
    let (j, t, dx) = hermite_index(p_max, y.len(), p);
    let s = t / dx;
    let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
    let h10 = t * (1.0 - s) * (1.0 - s);
    let h01 = s * s * (3.0 - 2.0 * s);
    let h11 = t * s * (s - 1.0);
    h00 * y[j] + h10 * dy[j] + h01 * y[j + 1] + h11 * dy[j + 1]
}

fn hermite_linear(p_max: f64, y: &[f64], p: f64) -> f64 {
    let (j, t, dx) = hermite_index(p_max, y.len(), p);
    let s = t / dx;
    (1.0 - s) * y[j] + s * y[j + 1]
}

fn rk4_step<const K: usize>(
    f: &impl Fn(f64, [f64; K]) -> [f64; K],
    s: f64,
    y: [f64; K],
    h: f64,
) -> [f64; K] {
    let k1 = f(s, y);
    let mut y2 = y;
    for i in 0..K {
        y2[i] = y[i] + 0.5 * h * k1[i];
    }
    let k2 = f(s + 0.5 * h, y2);
    let mut y3 = y;
    for i in 0..K {
        y3[i] = y[i] + 0.5 * h * k2[i];
    }
    let k3 = f(s + 0.5 * h, y3);
    let mut y4 = y;
    for i in 0..K {
        y4[i] = y[i] + h * k3[i];
    }
    let k4 = f(s + h, y4);
    let mut out = y;
    for i in 0..K {
        out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

/// Marches an ODE system in the stretched variable sigma = ln p from p0 to
/// every node of the uniform grid, recording the state there. The log
/// variable removes the regular-singular behaviour at p = 0.
fn march_log_grid<const K: usize>(
    rhs: impl Fn(f64, [f64; K]) -> [f64; K],
    p0: f64,
    y0: [f64; K],
    p_max: f64,
    nodes: usize,
) -> Vec<[f64; K]> {
    let dx = p_max / (nodes - 1) as f64;
    let mut out = Vec::with_capacity(nodes);
    out.push(y0); // placeholder for node 0, fixed up by the caller
    let mut sigma = p0.ln();
    let mut y = y0;
    for j in 1..nodes {
        let target = (j as f64 * dx).min(p_max).ln();
        while sigma < target - 1e-14 {
            let step = (target - sigma).min(MAX_SIGMA_STEP);
            y = rk4_step(&rhs, sigma, y, step);
            sigma += step;
        }
        sigma = target;
        out.push(y);
    }
    out
}

fn q1_or_err(law: &PressureLaw) -> Result<f64, WeightError> {
    let q1 = law.q_prime(0.0).map_err(|e| WeightError::Construction(e.to_string()))?;
    if !(q1 > 0.0) {
        return Err(WeightError::Construction(format!(
            "q'(0) = {q1} must be positive to regularise 1/q at the origin"
        )));
    }
    Ok(q1)
}

fn check_scan_range(law: &PressureLaw, p_max: f64) -> Result<(), WeightError> {
    if !(p_max > 0.0) || p_max > law.p_max() * (1.0 + 1e-12) {
        return Err(WeightError::Domain {
            what: "scan range must be positive and inside the law's range",
            value: p_max,
        });
    }
    Ok(())
}

/// Builds the L1 weight: closed form for the two analytic families, numeric
/// integration otherwise.
pub fn build_l1_weight(law: &PressureLaw, p_max: f64) -> Result<Weight, WeightError> {
    check_scan_range(law, p_max)?;
    if let Some(gamma) = law.power_law_gamma() {
        return Ok(Weight {
            provenance: WeightProvenance::L1Construction,
            p_max,
            repr: WeightRepr::PowerLawL1 { gamma },
        });
    }
    if let Some(epsilon) = law.dhv_epsilon() {
        return Ok(Weight {
            provenance: WeightProvenance::L1Construction,
            p_max,
            repr: WeightRepr::DhvL1 { epsilon },
        });
    }
    build_l1_weight_numeric(law, p_max)
}

/// Numeric L1 construction, also used to cross-check the closed forms.
///
/// Solves dE/dp = E/q (the regularised kernel `E = h'`) together with
/// dh/dp = E in sigma = ln p, starting from the local model
/// `E ~ p^{1/q'(0)}` at `p0 = 1e-8 p_max`.
pub fn build_l1_weight_numeric(law: &PressureLaw, p_max: f64) -> Result<Weight, WeightError> {
    check_scan_range(law, p_max)?;
    let q1 = q1_or_err(law)?;
    let q2 = law.q_second(0.0).map_err(|e| WeightError::Construction(e.to_string()))?;
    let m = 1.0 / q1;
    let p0 = 1e-8 * p_max;
    let e0 = p0.powf(m) * (-q2 * p0 / (2.0 * q1 * q1)).exp();
    let h0 = e0 * p0 / (m + 1.0);
    let rhs = |sigma: f64, y: [f64; 2]| -> [f64; 2] {
        let p = sigma.exp();
        let q = law.q(p).expect("q in range");
        [p * y[0] / q, p * y[0]]
    };
    let states = march_log_grid(rhs, p0, [e0, h0], p_max, SAMPLE_NODES);
    let mut h = vec![0.0; SAMPLE_NODES];
    let mut hp = vec![0.0; SAMPLE_NODES];
    let mut hpp = vec![0.0; SAMPLE_NODES];
    let mut hppp = vec![0.0; SAMPLE_NODES];
    for j in 1..SAMPLE_NODES {
        let p = j as f64 * p_max / (SAMPLE_NODES - 1) as f64;
        let q = law.q(p).expect("q in range");
        let qp = law.q_prime(p).expect("q' in range");
        hp[j] = states[j][0];
        h[j] = states[j][1];
        // h'' = E/q and h''' = E (1 - q') / q^2 follow from E' = E/q
        hpp[j] = states[j][0] / q;
        hppp[j] = states[j][0] * (1.0 - qp) / (q * q);
    }
    hpp[0] = hpp[1];
    hppp[0] = hppp[1];
    Ok(Weight {
        provenance: WeightProvenance::L1Construction,
        p_max,
        repr: WeightRepr::Sampled { h, hp, hpp, hppp: Some(hppp) },
    })
}

fn check_q_prime_above_minus_one(law: &PressureLaw, p_max: f64) -> Result<(f64, f64), WeightError> {
    let min_qp = scan_min(|p| law.q_prime(p).expect("q' in range"), 0.0, p_max, SCAN_RESOLUTION);
    let max_qp = scan_max(|p| law.q_prime(p).expect("q' in range"), 0.0, p_max, SCAN_RESOLUTION);
    if min_qp.value <= -1.0 {
        return Err(WeightError::HypothesisViolation {
            what: format!(
                "q'(p) > -1 fails: min q' = {} at p = {}",
                min_qp.value, min_qp.arg
            ),
        });
    }
    Ok((min_qp.value, max_qp.value))
}

/// Builds the L-infinity weight by solving the weight ODE; closed forms for
/// the two analytic families. Requires q' > -1 on the scan range.
pub fn build_linfty_weight(law: &PressureLaw, p_max: f64) -> Result<Weight, WeightError> {
    check_scan_range(law, p_max)?;
    check_q_prime_above_minus_one(law, p_max)?;
    if law.is_power_law() {
        return Ok(Weight {
            provenance: WeightProvenance::LInftyOde,
            p_max,
            repr: WeightRepr::Constant,
        });
    }
    if let Some(epsilon) = law.dhv_epsilon() {
        return Ok(Weight {
            provenance: WeightProvenance::LInftyOde,
            p_max,
            repr: WeightRepr::DhvLInfty { epsilon },
        });
    }
    build_linfty_weight_numeric(law, p_max)
}

/// Numeric L-infinity construction via the ODE `q u' + (q'+1) u = 1 + q'(0)`,
/// `u(0) = 1`, integrated in sigma = ln p from the regularised start
/// `u(p0) = 1 + u'(0) p0` with `u'(0) = -q''(0) / (2 q'(0) + 1)`.
pub fn build_linfty_weight_numeric(law: &PressureLaw, p_max: f64) -> Result<Weight, WeightError> {
    check_scan_range(law, p_max)?;
    check_q_prime_above_minus_one(law, p_max)?;
    let q1 = q1_or_err(law)?;
    let q2 = law.q_second(0.0).map_err(|e| WeightError::Construction(e.to_string()))?;
    let c0 = 1.0 + q1;
    let u_prime_0 = -q2 / (2.0 * q1 + 1.0);
    let p0 = 1e-8 * p_max;
    let u0 = 1.0 + u_prime_0 * p0;
    let rhs = |sigma: f64, y: [f64; 1]| -> [f64; 1] {
        let p = sigma.exp();
        let q = law.q(p).expect("q in range");
        let qp = law.q_prime(p).expect("q' in range");
        [p * (c0 - (qp + 1.0) * y[0]) / q]
    };
    let states = march_log_grid(rhs, p0, [u0], p_max, SAMPLE_NODES);
    let mut h = vec![0.0; SAMPLE_NODES];
    let mut hp = vec![0.0; SAMPLE_NODES];
    let mut hpp = vec![0.0; SAMPLE_NODES];
    h[0] = 1.0;
    hp[0] = -u_prime_0;
    for j in 1..SAMPLE_NODES {
        let p = j as f64 * p_max / (SAMPLE_NODES - 1) as f64;
        let u = states[j][0];
        let q = law.q(p).expect("q in range");
        let qp = law.q_prime(p).expect("q' in range");
        let qpp = law.q_second(p).expect("q'' in range");
        let up = (c0 - (qp + 1.0) * u) / q;
        let upp = -(qpp * u + (2.0 * qp + 1.0) * up) / q;
        h[j] = 1.0 / u;
        hp[j] = -up / (u * u);
        hpp[j] = (2.0 * up * up - u * upp) / (u * u * u);
    }
    hpp[0] = hpp[1];
    Ok(Weight {
        provenance: WeightProvenance::LInftyOde,
        p_max,
        repr: WeightRepr::Sampled { h, hp, hpp, hppp: None },
    })
}

/// Pointwise L1 coefficient `alpha_1 = h' q - h (1 - 1/N)`. This is the form
/// the estimate actually uses.
pub fn alpha1(law: &PressureLaw, weight: &Weight, n_dim: u32, p: f64) -> f64 {
    let q = law.q(p).expect("q in range");
    weight.h_prime(p) * q - weight.h(p) * (1.0 - 1.0 / n_dim as f64)
}

/// Integral form of the L1 coefficient, `int_0^p [q h' + h/N] d rho`, exposed
/// as a positivity diagnostic only; the pointwise [`alpha1`] enters the
/// estimates.
pub fn alpha1_integral(law: &PressureLaw, weight: &Weight, n_dim: u32, p: f64) -> f64 {
    crate::numerics::adaptive_simpson(
        |r| {
            weight.h_prime(r) * law.q(r).expect("q in range")
                + weight.h(r) / n_dim as f64
        },
        0.0,
        p,
        1e-10,
    )
}

/// Pointwise L-infinity coefficient `alpha_inf = q'/h + 2/(N h^2)`.
pub fn alpha_infty(law: &PressureLaw, weight: &Weight, n_dim: u32, p: f64) -> f64 {
    let h = weight.h(p);
    law.q_prime(p).expect("q' in range") / h + 2.0 / (n_dim as f64 * h * h)
}

/// Pointwise L2 coefficient `alpha_2 = 4/N + 2 h' q / h - 2 + q'`.
/// `weight = None` means h identically 1.
pub fn alpha2_pointwise(law: &PressureLaw, weight: Option<&Weight>, n_dim: u32, p: f64) -> f64 {
    let ratio = weight.map_or(0.0, |w| w.hq_ratio(law, p));
    4.0 / n_dim as f64 + 2.0 * ratio - 2.0 + law.q_prime(p).expect("q' in range")
}

/// Pointwise L2 coefficient `beta_2 = (h'' q + q'' h - h') / h`.
pub fn beta2_pointwise(law: &PressureLaw, weight: Option<&Weight>, p: f64) -> f64 {
    let q = law.q(p).expect("q in range");
    let qpp = law.q_second(p).expect("q'' in range");
    match weight {
        None => qpp,
        Some(w) => {
            let h = w.h(p);
            (mul_degenerate(q, w.h_second(p)) + qpp * h - w.h_prime(p)) / h
        }
    }
}

/// q * h'' with the convention that the product vanishes with q, so that the
/// limit at the degenerate origin (where h'' may diverge) is handled.
fn mul_degenerate(q: f64, hpp: f64) -> f64 {
    if q == 0.0 {
        0.0
    } else {
        q * hpp
    }
}

/// Residual of the beta coefficient the given family's construction is meant
/// to annihilate: `beta_1 = q h'' - h'`, `beta_inf = q'' - q h''/h + 2 q
/// h'^2/h^2 - 2 q' h'/h - h'/h`, `beta_2 = (h'' q + q'' h - h')/h`.
pub fn beta_residual(law: &PressureLaw, weight: &Weight, family: WeightFamily, p: f64) -> f64 {
    let q = law.q(p).expect("q in range");
    let qp = law.q_prime(p).expect("q' in range");
    let qpp = law.q_second(p).expect("q'' in range");
    let h = weight.h(p);
    let hp = weight.h_prime(p);
    let hpp = weight.h_second(p);
    match family {
        WeightFamily::L1 => mul_degenerate(q, hpp) - hp,
        WeightFamily::LInfty => {
            qpp - mul_degenerate(q, hpp) / h + 2.0 * q * hp * hp / (h * h) - 2.0 * qp * hp / h
                - hp / h
        }
        WeightFamily::L2 => (mul_degenerate(q, hpp) + qpp * h - hp) / h,
    }
}

/// Spatial part of the L1 decay constant for one snapshot:
/// `1/2 sum h(p)^2 / alpha_1(p) * cell_volume` over cells with p > 0.
/// The caller takes the sup over snapshots. Errors if `alpha_1 <= 0` at a
/// cell with positive pressure, which violates the L1 theorem's hypothesis.
pub fn l1_constant_a(
    law: &PressureLaw,
    weight: &Weight,
    n_dim: u32,
    pressures: &[f64],
    cell_volume: f64,
) -> Result<f64, WeightError> {
    let floor = 1e-12 * weight.p_max();
    let mut sum = 0.0;
    for &p in pressures {
        if p <= floor {
            continue; // h^2 / alpha_1 -> 0 with p
        }
        let a1 = alpha1(law, weight, n_dim, p);
        if a1 <= 0.0 {
            return Err(WeightError::HypothesisViolation {
                what: format!("L1_NO_G requires alpha_1 > 0; alpha_1({p}) = {a1}"),
            });
        }
        let h = weight.h(p);
        sum += h * h / a1;
    }
    Ok(0.5 * sum * cell_volume)
}

/// Scan constant of the L1 bound with growth:
/// `max over [0, p_M] of G [2(N-2)/N - h'q/h] + G' q`. Exactly 0 for the
/// zero growth law.
pub fn delta1_bar(
    law: &PressureLaw,
    growth: &GrowthLaw,
    weight: &Weight,
    n_dim: u32,
    p_max: f64,
) -> f64 {
    if growth.is_zero() {
        return 0.0;
    }
    scan_max(|p| delta1_pointwise(law, growth, weight, n_dim, p), 0.0, p_max, SCAN_RESOLUTION)
        .value
}

/// Pointwise integrand of [`delta1_bar`].
pub fn delta1_pointwise(
    law: &PressureLaw,
    growth: &GrowthLaw,
    weight: &Weight,
    n_dim: u32,
    p: f64,
) -> f64 {
    let n = n_dim as f64;
    let g = growth.g(p).expect("growth in range");
    let gp = growth.g_prime(p).expect("growth in range");
    let q = law.q(p).expect("q in range");
    g * (2.0 * (n - 2.0) / n - weight.hq_ratio(law, p)) + gp * q
}

/// Worst-case signed margins of the envelope bounds for an ODE-built
/// L-infinity weight: returns `(lower, upper)` where nonnegative values mean
/// the bound holds on the whole scan grid.
pub fn linfty_bounds_check(law: &PressureLaw, weight: &Weight, p_max: f64) -> (f64, f64) {
    let n = SCAN_RESOLUTION;
    let q1 = law.q_prime(0.0).expect("q'(0)");
    let denom = 1.0 + q1;
    let mut run_min = f64::INFINITY;
    let mut run_max = f64::NEG_INFINITY;
    let mut lower = f64::INFINITY;
    let mut upper = f64::INFINITY;
    for i in 0..=n {
        let p = p_max * i as f64 / n as f64;
        let qp = law.q_prime(p).expect("q' in range");
        run_min = run_min.min(qp);
        run_max = run_max.max(qp);
        let h = weight.h(p);
        lower = lower.min(h - (1.0 + run_min) / denom);
        upper = upper.min((1.0 + run_max) / denom - h);
    }
    (lower, upper)
}

/// The constant of the no-growth L-infinity bound.
///
/// Ratio branch: requires `(q/p)' >= 0`; returns `min p q'(p)/q(p)` (limit 1
/// at the origin). ODE branch: requires `q' > -1`; returns
/// `min q' / (1 + max q') + (2/N) (1 + q'(0)) / (1 + max q')^2`.
pub fn alpha_tilde_0(
    law: &PressureLaw,
    p_max: f64,
    branch: LInftyBranch,
    n_dim: u32,
) -> Result<f64, WeightError> {
    check_scan_range(law, p_max)?;
    match branch {
        LInftyBranch::RatioBranch => {
            let worst = scan_min(
                |p| {
                    let qp = law.q_prime(p).expect("q' in range");
                    let q = law.q(p).expect("q in range");
                    qp * p - q
                },
                0.0,
                p_max,
                SCAN_RESOLUTION,
            );
            let scale = law.q(p_max).expect("q in range").abs().max(1.0);
            if worst.value < -1e-9 * scale {
                return Err(WeightError::HypothesisViolation {
                    what: format!(
                        "ratio branch requires (q/p)' >= 0; p q' - q = {} at p = {}",
                        worst.value, worst.arg
                    ),
                });
            }
            let m = scan_min(
                |p| {
                    if p <= 1e-8 * p_max {
                        1.0
                    } else {
                        p * law.q_prime(p).expect("q' in range") / law.q(p).expect("q in range")
                    }
                },
                0.0,
                p_max,
                SCAN_RESOLUTION,
            );
            if !(m.value > 0.0) {
                return Err(WeightError::HypothesisViolation {
                    what: format!("ratio branch requires min p q'/q > 0, got {}", m.value),
                });
            }
            Ok(m.value)
        }
        LInftyBranch::OdeBranch => {
            let (min_qp, max_qp) = check_q_prime_above_minus_one(law, p_max)?;
            let q1 = law.q_prime(0.0).expect("q'(0)");
            let denom = 1.0 + max_qp;
            let value = min_qp / denom + (2.0 / n_dim as f64) * (1.0 + q1) / (denom * denom);
            if !(value > 0.0) {
                return Err(WeightError::HypothesisViolation {
                    what: format!("ODE branch constant must be positive, got {value}"),
                });
            }
            Ok(value)
        }
    }
}

/// Constants of the convex-q maximum-principle bound: requires `q'' >= 0`;
/// returns `(alpha_0, delta_bar)` with `alpha_0 = min (q' + 2/N)` and
/// `delta_bar = max (G' q - (4/N + q') G)`.
pub fn special_case_alpha0(
    law: &PressureLaw,
    growth: &GrowthLaw,
    n_dim: u32,
    p_max: f64,
) -> Result<(f64, f64), WeightError> {
    check_scan_range(law, p_max)?;
    let worst_qpp = scan_min(|p| law.q_second(p).expect("q'' in range"), 0.0, p_max, SCAN_RESOLUTION);
    let scale = law.q_second(0.0).expect("q''(0)").abs().max(1.0);
    if worst_qpp.value < -1e-9 * scale {
        return Err(WeightError::HypothesisViolation {
            what: format!(
                "convex-q bound requires q'' >= 0; q'' = {} at p = {}",
                worst_qpp.value, worst_qpp.arg
            ),
        });
    }
    let n = n_dim as f64;
    let alpha0 =
        scan_min(|p| law.q_prime(p).expect("q' in range") + 2.0 / n, 0.0, p_max, SCAN_RESOLUTION)
            .value;
    let delta_bar = if growth.is_zero() {
        0.0
    } else {
        scan_max(
            |p| {
                let g = growth.g(p).expect("growth in range");
                let gp = growth.g_prime(p).expect("growth in range");
                let q = law.q(p).expect("q in range");
                let qp = law.q_prime(p).expect("q' in range");
                gp * q - (4.0 / n + qp) * g
            },
            0.0,
            p_max,
            SCAN_RESOLUTION,
        )
        .value
    };
    Ok((alpha0, delta_bar))
}

/// Pointwise integrand of [`delta_infty_bar`]:
/// `G' q - (4/N + q') G + q h' G / h`.
pub fn delta_infty_pointwise(
    law: &PressureLaw,
    growth: &GrowthLaw,
    weight: &Weight,
    n_dim: u32,
    p: f64,
) -> f64 {
    let n = n_dim as f64;
    let g = growth.g(p).expect("growth in range");
    let gp = growth.g_prime(p).expect("growth in range");
    let q = law.q(p).expect("q in range");
    let qp = law.q_prime(p).expect("q' in range");
    gp * q - (4.0 / n + qp) * g + weight.hq_ratio(law, p) * g
}

/// Scan constant of the L-infinity bound with growth; 0 for zero growth.
pub fn delta_infty_bar(
    law: &PressureLaw,
    growth: &GrowthLaw,
    weight: &Weight,
    n_dim: u32,
    p_max: f64,
) -> f64 {
    if growth.is_zero() {
        return 0.0;
    }
    scan_max(|p| delta_infty_pointwise(law, growth, weight, n_dim, p), 0.0, p_max, SCAN_RESOLUTION)
        .value
}

/// Pointwise integrand of the L2 growth constant:
/// `2 G' q + G (2 (1 - 4/N) - (h'q + q'h)/h)`.
pub fn delta2_pointwise(
    law: &PressureLaw,
    growth: &GrowthLaw,
    weight: Option<&Weight>,
    n_dim: u32,
    p: f64,
) -> f64 {
    let n = n_dim as f64;
    let g = growth.g(p).expect("growth in range");
    let gp = growth.g_prime(p).expect("growth in range");
    let q = law.q(p).expect("q in range");
    let qp = law.q_prime(p).expect("q' in range");
    let ratio = weight.map_or(0.0, |w| w.hq_ratio(law, p));
    2.0 * gp * q + g * (2.0 * (1.0 - 4.0 / n) - (ratio + qp))
}

/// Scan report of the L2 coefficients for a weight (or h = 1 when `None`).
///
/// Feasibility of the L2 estimate is the report's content: it requires
/// `alpha_min >= 0` and `beta_max <= 0`.
pub fn l2_coefficients(
    law: &PressureLaw,
    growth: &GrowthLaw,
    weight: Option<&Weight>,
    n_dim: u32,
    p_max: f64,
) -> CoefficientReport {
    let alpha = scan_min(|p| alpha2_pointwise(law, weight, n_dim, p), 0.0, p_max, SCAN_RESOLUTION);
    let beta_hi = scan_max(|p| beta2_pointwise(law, weight, p), 0.0, p_max, SCAN_RESOLUTION);
    let beta_lo = scan_min(|p| beta2_pointwise(law, weight, p), 0.0, p_max, SCAN_RESOLUTION);
    let delta_bar = if growth.is_zero() {
        0.0
    } else {
        scan_max(|p| delta2_pointwise(law, growth, weight, n_dim, p), 0.0, p_max, SCAN_RESOLUTION)
            .value
    };
    CoefficientReport {
        alpha_min: alpha.value,
        alpha_argmin: alpha.arg,
        beta_max: beta_hi.value,
        beta_max_abs: beta_hi.value.abs().max(beta_lo.value.abs()),
        delta_bar,
        constant_a: None,
        alpha_tilde_0: None,
        scan_resolution: alpha.resolution,
    }
}

/// Scanned constants of one estimate family.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientReport {
    /// Minimum of the relevant alpha over `[0, p_M]`.
    pub alpha_min: f64,
    /// Pressure at which the minimum is attained.
    pub alpha_argmin: f64,
    /// Signed maximum of the relevant beta.
    pub beta_max: f64,
    /// Largest absolute beta value over the scan.
    pub beta_max_abs: f64,
    /// Scanned growth constant (0 for the zero law).
    pub delta_bar: f64,
    /// Decay constant A where applicable (field dependent, filled by caller).
    pub constant_a: Option<f64>,
    /// The no-growth L-infinity constant where applicable.
    pub alpha_tilde_0: Option<f64>,
    /// Grid points of the coarse scan behind the constants.
    pub scan_resolution: usize,
}

/// Right-hand sides of the time bounds the theorems assert.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeBound {
    /// `constant / t`
    InverseT { constant: f64 },
    /// `constant / t^2`
    InverseT2 { constant: f64 },
    /// `prefactor * delta_bar e^{delta_bar t} / (e^{delta_bar t} - 1)`,
    /// continued by `prefactor / t` at delta_bar = 0. Saturates at
    /// `prefactor * delta_bar` for positive rates, decays exponentially for
    /// negative ones; the sign of delta_bar plays no structural role.
    ExpSaturating { prefactor: f64, delta_bar: f64 },
}

impl TimeBound {
    /// Evaluates the bound at time `t > 0`.
    pub fn eval(&self, t: f64) -> Result<f64, WeightError> {
        if !(t > 0.0) {
            return Err(WeightError::Domain { what: "time bound needs t > 0", value: t });
        }
        Ok(match *self {
            TimeBound::InverseT { constant } => constant / t,
            TimeBound::InverseT2 { constant } => constant / (t * t),
            TimeBound::ExpSaturating { prefactor, delta_bar } => {
                if delta_bar == 0.0 {
                    prefactor / t
                } else {
                    // delta e^{delta t} / (e^{delta t} - 1) = delta / (1 - e^{-delta t})
                    prefactor * delta_bar / (-(-delta_bar * t).exp_m1())
                }
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::adaptive_simpson;

    fn power(gamma: f64, p_max: f64) -> PressureLaw {
        PressureLaw::power_law(gamma, p_max).unwrap()
    }

    fn dhv(eps: f64, p_max: f64) -> PressureLaw {
        PressureLaw::dhv(eps, p_max).unwrap()
    }

    #[test]
    fn l1_weight_closed_forms() {
        let law = power(1.0, 4.0);
        let w = build_l1_weight(&law, 4.0).unwrap();
        assert!((w.h(1.0) - 0.5).abs() < 1e-15);
        assert_eq!(w.h(0.0), 0.0);

        let law = dhv(1.0, 4.0);
        let w = build_l1_weight(&law, 4.0).unwrap();
        assert!((w.h(1.0) - (1.0 - std::f64::consts::LN_2)).abs() < 1e-14);
        assert_eq!(w.h(0.0), 0.0);
    }

    #[test]
    fn l1_numeric_matches_closed_forms() {
        for (law, p_max) in [(power(2.0, 3.0), 3.0), (power(0.8, 3.0), 3.0), (dhv(0.5, 3.0), 3.0)]
        {
            let closed = build_l1_weight(&law, p_max).unwrap();
            let numeric = build_l1_weight_numeric(&law, p_max).unwrap();
            for i in 1..=100 {
                let p = p_max / 100.0 + (p_max - p_max / 100.0) * i as f64 / 100.0;
                let (a, b) = (closed.h(p), numeric.h(p));
                assert!((a - b).abs() <= 1e-7 * a.abs(), "h mismatch at p={p}: {a} vs {b}");
                let (ap, bp) = (closed.h_prime(p), numeric.h_prime(p));
                assert!((ap - bp).abs() <= 1e-7 * ap.abs(), "h' mismatch at p={p}");
            }
        }
    }

    #[test]
    fn l1_kernel_matches_nested_quadrature() {
        // independent route: h'(p) = p^{1/q'(0)} exp(int_0^p [1/q - 1/(q'(0) r)] dr)
        let law = dhv(0.7, 2.0);
        let numeric = build_l1_weight_numeric(&law, 2.0).unwrap();
        for &p in &[0.3, 0.9, 1.7] {
            let inner = adaptive_simpson(
                |r| {
                    if r == 0.0 {
                        -law.q_second(0.0).unwrap() / (2.0 * law.q_prime(0.0).unwrap().powi(2))
                    } else {
                        1.0 / law.q(r).unwrap() - 1.0 / (law.q_prime(0.0).unwrap() * r)
                    }
                },
                0.0,
                p,
                1e-12,
            );
            let kernel = p.powf(1.0 / law.q_prime(0.0).unwrap()) * inner.exp();
            assert!(
                (numeric.h_prime(p) - kernel).abs() <= 1e-8 * kernel,
                "kernel mismatch at p={p}"
            );
        }
    }

    #[test]
    fn alpha1_values() {
        let law = power(1.0, 4.0);
        let w = build_l1_weight(&law, 4.0).unwrap();
        assert!((alpha1(&law, &w, 1, 2.0) - 4.0).abs() < 1e-13);
        assert_eq!(alpha1(&law, &w, 1, 0.0), 0.0);

        let law = dhv(1.0, 4.0);
        let w = build_l1_weight(&law, 4.0).unwrap();
        let expected = 1.0 + 0.5 * (std::f64::consts::LN_2 - 1.0);
        assert!((alpha1(&law, &w, 2, 1.0) - expected).abs() < 1e-12);
    }

    #[test]
    fn alpha1_matches_displayed_power_law_form() {
        let gamma = 3.0;
        let law = power(gamma, 5.0);
        let w = build_l1_weight(&law, 5.0).unwrap();
        for n_dim in [1u32, 2, 3] {
            for &p in &[0.2f64, 1.0, 4.5] {
                let expected = gamma
                    * (1.0 - (n_dim as f64 - 1.0) / n_dim as f64 / (gamma + 1.0))
                    * p.powf((gamma + 1.0) / gamma);
                let got = alpha1(&law, &w, n_dim, p);
                assert!((got - expected).abs() <= 1e-8 * expected, "N={n_dim} p={p}");
            }
        }
    }

    #[test]
    fn l1_constant_a_parabola_oracle() {
        // p(x) = (1 - x^2)_+, power law gamma = 1, N = 1:
        // A = 1/8 int (1-x^2)^2 dx = 2/15
        let law = power(1.0, 1.0);
        let w = build_l1_weight(&law, 1.0).unwrap();
        let cells = 40000;
        let dx = 4.0 / cells as f64;
        let pressures: Vec<f64> = (0..cells)
            .map(|i| {
                let x = -2.0 + (i as f64 + 0.5) * dx;
                (1.0 - x * x).max(0.0)
            })
            .collect();
        let a = l1_constant_a(&law, &w, 1, &pressures, dx).unwrap();
        assert!((a - 2.0 / 15.0).abs() < 1e-5, "got {a}");
    }

    #[test]
    fn l1_constant_a_zero_field() {
        let law = power(2.0, 1.0);
        let w = build_l1_weight(&law, 1.0).unwrap();
        assert_eq!(l1_constant_a(&law, &w, 1, &[0.0; 64], 0.1).unwrap(), 0.0);
    }

    #[test]
    fn delta1_bar_zero_growth_is_exactly_zero() {
        let law = power(2.0, 1.0);
        let w = build_l1_weight(&law, 1.0).unwrap();
        assert_eq!(delta1_bar(&law, &GrowthLaw::zero(), &w, 2, 1.0), 0.0);
    }

    #[test]
    fn delta1_bar_matches_brute_scan() {
        let law = power(1.0, 1.0);
        let growth = GrowthLaw::linear(1.0, 1.0).unwrap();
        let w = build_l1_weight(&law, 1.0).unwrap();
        let got = delta1_bar(&law, &growth, &w, 2, 1.0);
        // brute force over a plain grid: the ratio h'q/h is gamma+1 = 2, so
        // delta_1(p) = -2(1-p) - p with max -1 at p = 1
        let mut brute = f64::NEG_INFINITY;
        for i in 0..=(1 << 12) {
            let p = i as f64 / (1 << 12) as f64;
            brute = brute.max(-2.0 * (1.0 - p) - p);
        }
        assert!((got - brute).abs() < 1e-6);
        assert!((got + 1.0).abs() < 1e-9);
        assert!(got <= 0.0);
    }

    #[test]
    fn linfty_weight_closed_forms() {
        let law = power(7.0, 5.0);
        let w = build_linfty_weight(&law, 5.0).unwrap();
        for &p in &[0.0, 1.0, 4.9] {
            assert_eq!(w.h(p), 1.0);
        }

        // DHV: exact ODE solution h = p^2 / (2 eps (p - eps ln(1 + p/eps)))
        let law = dhv(1.0, 4.0);
        let w = build_linfty_weight(&law, 4.0).unwrap();
        assert_eq!(w.h(0.0), 1.0);
        let expected = 1.0 / (2.0 * (1.0 - std::f64::consts::LN_2));
        assert!((w.h(1.0) - expected).abs() < 1e-13, "got {}", w.h(1.0));
    }

    #[test]
    fn dhv_linfty_closed_form_satisfies_weight_ode() {
        // residual of q u' + (q'+1) u - (1 + q'(0)) with u = 1/h, using
        // finite differences of the closed form as the independent route
        let eps = 0.7;
        let law = dhv(eps, 3.0);
        let w = build_linfty_weight(&law, 3.0).unwrap();
        for &p in &[0.05, 0.4, 1.1, 2.7] {
            let d = 1e-6;
            let u = |p: f64| 1.0 / w.h(p);
            let up = (u(p + d) - u(p - d)) / (2.0 * d);
            let q = law.q(p).unwrap();
            let qp = law.q_prime(p).unwrap();
            let res = q * up + (qp + 1.0) * u(p) - 2.0;
            assert!(res.abs() < 1e-7, "ODE residual {res} at p={p}");
        }
    }

    #[test]
    fn linfty_numeric_matches_closed_forms() {
        for (law, p_max) in [(power(3.0, 2.0), 2.0), (dhv(1.0, 2.0), 2.0), (dhv(0.25, 2.0), 2.0)]
        {
            let closed = build_linfty_weight(&law, p_max).unwrap();
            let numeric = build_linfty_weight_numeric(&law, p_max).unwrap();
            for i in 1..=100 {
                let p = p_max / 100.0 + (p_max - p_max / 100.0) * i as f64 / 100.0;
                let (a, b) = (closed.h(p), numeric.h(p));
                assert!((a - b).abs() <= 1e-7 * a.abs(), "h mismatch at p={p}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn linfty_bounds_power_law_collapse() {
        let law = power(2.0, 3.0);
        let w = build_linfty_weight(&law, 3.0).unwrap();
        let (lo, hi) = linfty_bounds_check(&law, &w, 3.0);
        assert!(lo.abs() < 1e-12 && hi.abs() < 1e-12, "margins ({lo}, {hi})");
    }

    #[test]
    fn linfty_bounds_dhv_envelope() {
        let law = dhv(1.0, 1.0);
        let w = build_linfty_weight(&law, 1.0).unwrap();
        let (lo, hi) = linfty_bounds_check(&law, &w, 1.0);
        assert!(lo >= -1e-9, "lower margin {lo}");
        assert!(hi >= -1e-9, "upper margin {hi}");
    }

    #[test]
    fn linfty_tabulated_envelope_example() {
        // q' in [1, 3] with q'(0) = 1: the weight must stay in
        // [(1+1)/2, (1+3)/2] = [1, 2]; with q' in [0.5, 3] the envelope
        // would widen to [0.75, 2].
        let knots: Vec<f64> = (0..=64).map(|i| i as f64 / 64.0).collect();
        let q: Vec<f64> = knots
            .iter()
            .map(|&p| 2.0 * p - (2.0 * std::f64::consts::PI * p).sin() / (2.0 * std::f64::consts::PI))
            .collect(); // q' = 2 - cos(2 pi p) in [1, 3]
        let law = PressureLaw::tabulated(knots, q).unwrap();
        let w = build_linfty_weight_numeric(&law, 1.0).unwrap();
        for i in 0..=256 {
            let p = i as f64 / 256.0;
            let h = w.h(p);
            assert!((0.75 - 1e-6..=2.0 + 1e-6).contains(&h), "h({p}) = {h}");
        }
        let (lo, hi) = linfty_bounds_check(&law, &w, 1.0);
        assert!(lo >= -1e-6 && hi >= -1e-6, "margins ({lo}, {hi})");
    }

    #[test]
    fn alpha1_integral_is_positive_diagnostic() {
        for law in [power(2.0, 2.0), dhv(0.5, 2.0)] {
            let w = build_l1_weight(&law, 2.0).unwrap();
            for n_dim in [1u32, 2, 3] {
                for &p in &[0.2f64, 1.0, 1.9] {
                    let v = alpha1_integral(&law, &w, n_dim, p);
                    assert!(v > 0.0, "integral alpha_1 = {v} at p={p}, N={n_dim}");
                }
            }
        }
        // for the power law the integral form can be done by hand:
        // int_0^p [gamma r^{1/g} r^{... }] -- check against quadrature of the
        // pointwise integrand with an independent midpoint rule
        let law = power(2.0, 2.0);
        let w = build_l1_weight(&law, 2.0).unwrap();
        let p = 1.5;
        let n = 20000;
        let mut midpoint = 0.0;
        for k in 0..n {
            let r = p * (k as f64 + 0.5) / n as f64;
            midpoint += (w.h_prime(r) * law.q(r).unwrap() + w.h(r) / 2.0) * p / n as f64;
        }
        let v = alpha1_integral(&law, &w, 2, p);
        assert!((v - midpoint).abs() <= 1e-6 * midpoint, "quadrature mismatch {v} vs {midpoint}");
    }

    #[test]
    fn linfty_hypothesis_violation_detected() {
        // q = 4x ((x-1)^2 + 0.05) stays positive but q' = 4.2 - 16x + 12x^2
        // dips to -1.13 at x = 2/3
        let p: Vec<f64> = (0..=40).map(|i| i as f64 / 40.0).collect();
        let q: Vec<f64> = p.iter().map(|&x| 4.2 * x - 8.0 * x * x + 4.0 * x * x * x).collect();
        let law = PressureLaw::tabulated(p, q).unwrap();
        assert!(matches!(
            build_linfty_weight(&law, 1.0),
            Err(WeightError::HypothesisViolation { .. })
        ));
    }

    #[test]
    fn alpha_tilde_branches() {
        let law = power(4.0, 2.0);
        let v = alpha_tilde_0(&law, 2.0, LInftyBranch::RatioBranch, 2).unwrap();
        assert!((v - 1.0).abs() < 1e-9);
        let law = dhv(0.5, 2.0);
        let v = alpha_tilde_0(&law, 2.0, LInftyBranch::RatioBranch, 2).unwrap();
        assert!((v - 1.0).abs() < 1e-9);
        // power law gamma = 2: min q' = max q' = q'(0) = 2
        let law = power(2.0, 2.0);
        let v = alpha_tilde_0(&law, 2.0, LInftyBranch::OdeBranch, 2).unwrap();
        assert!((v - 1.0).abs() < 1e-9, "got {v}");
    }

    #[test]
    fn special_case_constants() {
        let law = power(3.0, 1.0);
        let (a0, db) = special_case_alpha0(&law, &GrowthLaw::zero(), 2, 1.0).unwrap();
        assert!((a0 - 4.0).abs() < 1e-12);
        assert_eq!(db, 0.0);

        let law = dhv(1.0, 1.0);
        let (a0, _) = special_case_alpha0(&law, &GrowthLaw::zero(), 1, 1.0).unwrap();
        assert!((a0 - 3.0).abs() < 1e-9);

        for gamma in [5.0, 10.0, 40.0] {
            let law = power(gamma, 1.0);
            let (a0, _) = special_case_alpha0(&law, &GrowthLaw::zero(), 2, 1.0).unwrap();
            assert!((a0 - (gamma + 1.0)).abs() < 1e-9);
        }
    }

    #[test]
    fn special_case_rejects_concave_q() {
        // tabulated concave q: q = 2p - 0.5 p^2 on [0, 1], q'' = -1
        let p: Vec<f64> = (0..=40).map(|i| i as f64 / 40.0).collect();
        let q: Vec<f64> = p.iter().map(|&x| 2.0 * x - 0.5 * x * x).collect();
        let law = PressureLaw::tabulated(p, q).unwrap();
        assert!(matches!(
            special_case_alpha0(&law, &GrowthLaw::zero(), 2, 1.0),
            Err(WeightError::HypothesisViolation { .. })
        ));
    }

    #[test]
    fn l2_coefficient_report() {
        let law = power(2.0, 1.0);
        let rep = l2_coefficients(&law, &GrowthLaw::zero(), None, 1, 1.0);
        assert!((rep.alpha_min - 4.0).abs() < 1e-12);
        assert_eq!(rep.beta_max, 0.0);

        let law = power(1.0, 1.0);
        let rep = l2_coefficients(&law, &GrowthLaw::zero(), None, 4, 1.0);
        assert!(rep.alpha_min.abs() < 1e-12, "boundary case, got {}", rep.alpha_min);

        let law = dhv(1.0, 1.0);
        let rep = l2_coefficients(&law, &GrowthLaw::zero(), None, 2, 1.0);
        assert!((rep.beta_max - 2.0).abs() < 1e-12, "q'' = 2/eps, got {}", rep.beta_max);
        assert!(rep.beta_max > 0.0, "DHV must be reported infeasible");
    }

    #[test]
    fn l2_user_poly_weight_widens_range() {
        // h = p for the power law: alpha_2 = 4/N + 3 gamma - 2
        let gamma = 0.4;
        let law = power(gamma, 1.0);
        let w = Weight::user_poly(vec![0.0, 1.0], 1.0);
        let rep = l2_coefficients(&law, &GrowthLaw::zero(), Some(&w), 4, 1.0);
        let plain = l2_coefficients(&law, &GrowthLaw::zero(), None, 4, 1.0);
        assert!(rep.alpha_min > plain.alpha_min);
        assert!((rep.alpha_min - (1.0 + 3.0 * gamma - 2.0)).abs() < 1e-9);
    }

    #[test]
    fn beta_residuals_vanish_for_own_construction() {
        let law = power(2.0, 2.0);
        let w1 = build_l1_weight(&law, 2.0).unwrap();
        let r = beta_residual(&law, &w1, WeightFamily::L1, 1.0);
        assert!(r.abs() < 1e-8, "power-law L1 beta_1 = {r}");

        let winf = build_linfty_weight(&law, 2.0).unwrap();
        assert_eq!(beta_residual(&law, &winf, WeightFamily::LInfty, 1.3), 0.0);

        let law = dhv(1.0, 2.0);
        let winf = build_linfty_weight(&law, 2.0).unwrap();
        let scale = 1.0
            + (law.q(0.5).unwrap() * winf.h_second(0.5)).abs()
            + winf.h_prime(0.5).abs();
        let r = beta_residual(&law, &winf, WeightFamily::LInfty, 0.5);
        assert!(r.abs() <= 1e-6 * scale, "DHV L-infinity residual {r}");

        let w1 = build_l1_weight(&law, 2.0).unwrap();
        let r = beta_residual(&law, &w1, WeightFamily::L1, 0.7);
        assert!(r.abs() < 1e-12, "DHV L1 residual {r}");
    }

    #[test]
    fn beta_residual_finite_difference_oracle() {
        // independent h'' from second differences of h
        let law = dhv(0.5, 2.0);
        let w = build_l1_weight(&law, 2.0).unwrap();
        for &p in &[0.3, 0.8, 1.6] {
            let d = 1e-5;
            let hpp = (w.h(p + d) - 2.0 * w.h(p) + w.h(p - d)) / (d * d);
            let res = law.q(p).unwrap() * hpp - w.h_prime(p);
            assert!(res.abs() < 1e-5, "fd residual {res} at p={p}");
        }
    }

    #[test]
    fn delta_infty_zero_growth() {
        let law = power(2.0, 1.0);
        let w = build_linfty_weight(&law, 1.0).unwrap();
        assert_eq!(delta_infty_bar(&law, &GrowthLaw::zero(), &w, 2, 1.0), 0.0);
    }

    #[test]
    fn delta_infty_linear_growth_sign_and_value() {
        let law = power(2.0, 1.0);
        let growth = GrowthLaw::linear(1.0, 1.0).unwrap();
        let w = build_linfty_weight(&law, 1.0).unwrap();
        let v = delta_infty_bar(&law, &growth, &w, 2, 1.0);
        // h = 1: delta(p) = -2p - 4(1-p) = 2p - 4, sup = -2 at p = 1
        assert!((v + 2.0).abs() < 1e-9, "got {v}");
        assert!(v <= 0.0);
    }

    #[test]
    fn delta_infty_stable_under_grid_doubling() {
        let law = dhv(1.0, 1.0);
        let growth = GrowthLaw::linear(1.0, 1.0).unwrap();
        let w = build_linfty_weight(&law, 1.0).unwrap();
        let f = |p: f64| delta_infty_pointwise(&law, &growth, &w, 1, p);
        let a = scan_max(f, 0.0, 1.0, SCAN_RESOLUTION).value;
        let b = scan_max(f, 0.0, 1.0, 2 * SCAN_RESOLUTION).value;
        assert!((a - b).abs() <= 1e-6 * (1.0 + a.abs()));
    }

    #[test]
    fn time_bound_values() {
        assert_eq!(TimeBound::InverseT { constant: 2.0 }.eval(4.0).unwrap(), 0.5);
        let b = TimeBound::ExpSaturating { prefactor: 1.0, delta_bar: 0.0 };
        assert_eq!(b.eval(1.0).unwrap(), 1.0);
        // continuity of the delta -> 0 limit
        let b_small = TimeBound::ExpSaturating { prefactor: 1.0, delta_bar: 1e-9 };
        assert!((b_small.eval(1.0).unwrap() - 1.0).abs() < 1e-8);
        // saturation at delta for large t
        let b1 = TimeBound::ExpSaturating { prefactor: 1.0, delta_bar: 1.0 };
        assert!((b1.eval(200.0).unwrap() - 1.0).abs() < 1e-12);
        // negative rates decay to zero
        let bn = TimeBound::ExpSaturating { prefactor: 1.0, delta_bar: -2.0 };
        assert!(bn.eval(1.0).unwrap() > 0.0);
        assert!(bn.eval(30.0).unwrap() < 1e-12);
        assert!(matches!(
            TimeBound::InverseT { constant: 1.0 }.eval(0.0),
            Err(WeightError::Domain { .. })
        ));
    }

    #[test]
    fn scanned_constants_stable_under_grid_doubling() {
        let law = dhv(0.5, 1.0);
        let growth = GrowthLaw::linear(2.0, 1.0).unwrap();
        let w = build_l1_weight(&law, 1.0).unwrap();
        let f = |p: f64| delta1_pointwise(&law, &growth, &w, 2, p);
        let a = scan_max(f, 0.0, 1.0, SCAN_RESOLUTION).value;
        let b = scan_max(f, 0.0, 1.0, 2 * SCAN_RESOLUTION).value;
        assert!((a - b).abs() <= 1e-6 * (1.0 + a.abs()));
    }
}
