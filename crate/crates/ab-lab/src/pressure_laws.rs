//! Constitutive pressure laws p = p(n), the induced q(p) = n p'(n), and the
//! flux potential used by the conservative solver.
//!
//! Two closed-form families are supported: the power law `p = n^gamma` with
//! `q(p) = gamma p`, and the singular law `p = eps n / (1 - n)` with
//! `q(p) = p (1 + p/eps)`, which blows up as the density approaches 1.
//! Tabulated laws are given as samples of q over `[0, p_max]` and completed by
//! a shape-preserving cubic interpolant.

use crate::numerics::{adaptive_simpson, PchipCurve};
use std::fmt;

/// Errors from constructing or evaluating a pressure law.
#[derive(Debug, Clone, PartialEq)]
pub enum PressureLawError {
    /// Parameter or argument outside the physical domain (e.g. DHV with n >= 1).
    Domain { what: &'static str, value: f64 },
    /// Tabulated law queried outside its sample range.
    Range { pressure: f64, p_max: f64 },
    /// Invalid tabulated data.
    Construction(String),
}

impl fmt::Display for PressureLawError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PressureLawError::Domain { what, value } => {
                write!(f, "domain error: {what} (value {value})")
            }
            PressureLawError::Range { pressure, p_max } => {
                write!(f, "pressure {pressure} outside tabulated range [0, {p_max}]")
            }
            PressureLawError::Construction(msg) => write!(f, "invalid pressure law: {msg}"),
        }
    }
}

impl std::error::Error for PressureLawError {}

#[derive(Debug, Clone, PartialEq)]
enum LawKind {
    PowerLaw { gamma: f64 },
    Dhv { epsilon: f64 },
    Tabulated { q: PchipCurve },
}

/// A constitutive pressure law with its evaluation range `[0, p_max]`.
///
/// Immutable after construction; shared freely across concurrent simulations.
#[derive(Debug, Clone, PartialEq)]
pub struct PressureLaw {
    kind: LawKind,
    p_max: f64,
}

impl PressureLaw {
    /// Power law `p(n) = n^gamma`, `gamma > 0`.
    pub fn power_law(gamma: f64, p_max: f64) -> Result<Self, PressureLawError> {
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(PressureLawError::Domain { what: "gamma must be positive", value: gamma });
        }
        check_p_max(p_max)?;
        Ok(Self { kind: LawKind::PowerLaw { gamma }, p_max })
    }

    /// Singular law `p(n) = eps n / (1 - n)`, `eps > 0`, defined for `n < 1`.
    pub fn dhv(epsilon: f64, p_max: f64) -> Result<Self, PressureLawError> {
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(PressureLawError::Domain { what: "epsilon must be positive", value: epsilon });
        }
        check_p_max(p_max)?;
        Ok(Self { kind: LawKind::Dhv { epsilon }, p_max })
    }

    /// Tabulated law from samples `(p_i, q_i)` on `[0, p_max]`.
    ///
    /// The first sample must sit at p = 0 with q = 0, q must be nonnegative,
    /// and q'(0) of the interpolant must be positive (the degenerate point
    /// p = 0 is resolved through the local model `q ~ q'(0) p`).
    pub fn tabulated(p: Vec<f64>, q: Vec<f64>) -> Result<Self, PressureLawError> {
        if p.is_empty() || p[0] != 0.0 {
            return Err(PressureLawError::Construction("first sample must be at p = 0".into()));
        }
        if q.first() != Some(&0.0) {
            return Err(PressureLawError::Construction("q(0) must be 0".into()));
        }
        if q.iter().any(|&v| v < 0.0) {
            return Err(PressureLawError::Construction("q must be nonnegative".into()));
        }
        let p_max = *p.last().unwrap();
        check_p_max(p_max)?;
        let curve = PchipCurve::new(p, q).map_err(PressureLawError::Construction)?;
        if !(curve.derivative(0.0) > 0.0) {
            return Err(PressureLawError::Construction(
                "interpolated q'(0) must be positive".into(),
            ));
        }
        // q > 0 away from the origin; an interior zero would make 1/q non-integrable.
        let n = 512;
        for i in 1..=n {
            let pi = p_max * i as f64 / n as f64;
            if !(curve.value(pi) > 0.0) {
                return Err(PressureLawError::Construction(format!(
                    "interpolated q vanishes at p = {pi}"
                )));
            }
        }
        Ok(Self { kind: LawKind::Tabulated { q: curve }, p_max })
    }

    /// Upper end of the pressure range all coefficient scans use.
    pub fn p_max(&self) -> f64 {
        self.p_max
    }

    /// Returns a copy of the law with a different scan range.
    pub fn with_p_max(&self, p_max: f64) -> Result<Self, PressureLawError> {
        check_p_max(p_max)?;
        if let LawKind::Tabulated { q } = &self.kind {
            if p_max > q.x_max() {
                return Err(PressureLawError::Range { pressure: p_max, p_max: q.x_max() });
            }
        }
        Ok(Self { kind: self.kind.clone(), p_max })
    }

    pub fn is_power_law(&self) -> bool {
        matches!(self.kind, LawKind::PowerLaw { .. })
    }

    pub fn power_law_gamma(&self) -> Option<f64> {
        match self.kind {
            LawKind::PowerLaw { gamma } => Some(gamma),
            _ => None,
        }
    }

    pub fn dhv_epsilon(&self) -> Option<f64> {
        match self.kind {
            LawKind::Dhv { epsilon } => Some(epsilon),
            _ => None,
        }
    }

    /// p(n). For DHV the density must stay below the packing threshold n = 1.
    pub fn pressure_from_density(&self, n: f64) -> Result<f64, PressureLawError> {
        if !(n >= 0.0) {
            return Err(PressureLawError::Domain { what: "density must be nonnegative", value: n });
        }
        match &self.kind {
            LawKind::PowerLaw { gamma } => Ok(n.powf(*gamma)),
            LawKind::Dhv { epsilon } => {
                if n >= 1.0 {
                    Err(PressureLawError::Domain {
                        what: "DHV pressure blows up at n = 1",
                        value: n,
                    })
                } else {
                    Ok(epsilon * n / (1.0 - n))
                }
            }
            LawKind::Tabulated { .. } => {
                if n == 0.0 {
                    return Ok(0.0);
                }
                if n > 1.0 {
                    return Err(PressureLawError::Domain {
                        what: "tabulated density is normalised to n(p_max) = 1",
                        value: n,
                    });
                }
                // Invert the monotone map n(p) by bisection.
                let (mut lo, mut hi) = (0.0, self.p_max);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if self.density_from_pressure(mid)? < n {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                    if hi - lo <= 1e-15 * self.p_max {
                        break;
                    }
                }
                Ok(0.5 * (lo + hi))
            }
        }
    }

    /// n(p), the inverse constitutive map.
    ///
    /// For tabulated laws the density scale is fixed by `n(p_max) = 1`, i.e.
    /// `n(p) = exp(-int_p^{p_max} dr/q(r))`; q only ever determines the
    /// constitutive map up to that normalisation.
    pub fn density_from_pressure(&self, p: f64) -> Result<f64, PressureLawError> {
        if !(p >= 0.0) {
            return Err(PressureLawError::Domain { what: "pressure must be nonnegative", value: p });
        }
        match &self.kind {
            LawKind::PowerLaw { gamma } => Ok(p.powf(1.0 / gamma)),
            LawKind::Dhv { epsilon } => Ok(p / (p + epsilon)),
            LawKind::Tabulated { q } => {
                if p == 0.0 {
                    return Ok(0.0);
                }
                if p > self.p_max * (1.0 + 1e-12) {
                    return Err(PressureLawError::Range { pressure: p, p_max: self.p_max });
                }
                let p = p.min(self.p_max);
                let integral = adaptive_simpson(|r| 1.0 / q.value(r), p, self.p_max, 1e-12);
                Ok((-integral).exp())
            }
        }
    }

    /// q(p) = n p'(n) expressed in the pressure variable.
    pub fn q(&self, p: f64) -> Result<f64, PressureLawError> {
        self.check_pressure(p)?;
        Ok(match &self.kind {
            LawKind::PowerLaw { gamma } => gamma * p,
            LawKind::Dhv { epsilon } => p * (1.0 + p / epsilon),
            LawKind::Tabulated { q } => q.value(p.min(q.x_max())),
        })
    }

    /// q'(p).
    pub fn q_prime(&self, p: f64) -> Result<f64, PressureLawError> {
        self.check_pressure(p)?;
        Ok(match &self.kind {
            LawKind::PowerLaw { gamma } => *gamma,
            LawKind::Dhv { epsilon } => 1.0 + 2.0 * p / epsilon,
            LawKind::Tabulated { q } => q.derivative(p.min(q.x_max())),
        })
    }

    /// q''(p).
    pub fn q_second(&self, p: f64) -> Result<f64, PressureLawError> {
        self.check_pressure(p)?;
        Ok(match &self.kind {
            LawKind::PowerLaw { .. } => 0.0,
            LawKind::Dhv { epsilon } => 2.0 / epsilon,
            LawKind::Tabulated { q } => q.second_derivative(p.min(q.x_max())),
        })
    }

    /// Flux potential `Phi(n) = int_0^n q(p(s)) ds`, so that
    /// `div(n grad p) = Delta Phi(n)`.
    ///
    /// Closed forms for the two analytic families; adaptive quadrature
    /// (absolute tolerance 1e-10) for tabulated laws.
    pub fn flux_potential(&self, n: f64) -> Result<f64, PressureLawError> {
        if !(n >= 0.0) {
            return Err(PressureLawError::Domain { what: "density must be nonnegative", value: n });
        }
        match &self.kind {
            LawKind::PowerLaw { gamma } => Ok(gamma / (gamma + 1.0) * n.powf(gamma + 1.0)),
            LawKind::Dhv { epsilon } => {
                if n >= 1.0 {
                    return Err(PressureLawError::Domain {
                        what: "DHV flux potential undefined at n >= 1",
                        value: n,
                    });
                }
                // int_0^n eps s/(1-s)^2 ds = eps [1/(1-n) + ln(1-n) - 1]
                Ok(epsilon * (1.0 / (1.0 - n) + (1.0 - n).ln() - 1.0))
            }
            LawKind::Tabulated { .. } => {
                if n == 0.0 {
                    return Ok(0.0);
                }
                let failed = std::cell::Cell::new(false);
                let v = adaptive_simpson(
                    |s| match self.pressure_from_density(s).and_then(|p| self.q(p)) {
                        Ok(q) => q,
                        Err(_) => {
                            failed.set(true);
                            0.0
                        }
                    },
                    0.0,
                    n,
                    1e-10,
                );
                if failed.get() {
                    return Err(PressureLawError::Domain {
                        what: "tabulated flux potential outside density domain",
                        value: n,
                    });
                }
                Ok(v)
            }
        }
    }

    fn check_pressure(&self, p: f64) -> Result<(), PressureLawError> {
        if !p.is_finite() || p < 0.0 {
            return Err(PressureLawError::Domain { what: "pressure must be nonnegative", value: p });
        }
        if let LawKind::Tabulated { q } = &self.kind {
            if p > q.x_max() * (1.0 + 1e-12) {
                return Err(PressureLawError::Range { pressure: p, p_max: q.x_max() });
            }
        }
        Ok(())
    }
}

fn check_p_max(p_max: f64) -> Result<(), PressureLawError> {
    if !(p_max > 0.0) || !p_max.is_finite() {
        Err(PressureLawError::Domain { what: "p_max must be positive", value: p_max })
    } else {
        Ok(())
    }
}
