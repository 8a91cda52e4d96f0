//! Growth / reaction term G(p): nonnegative, decreasing in pressure, and
//! vanishing at the homeostatic pressure p_M where proliferation stops.

use crate::numerics::PchipCurve;
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum GrowthLawError {
    Domain { what: &'static str, value: f64 },
    Range { pressure: f64, p_max: f64 },
    Construction(String),
}

impl fmt::Display for GrowthLawError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GrowthLawError::Domain { what, value } => {
                write!(f, "domain error: {what} (value {value})")
            }
            GrowthLawError::Range { pressure, p_max } => {
                write!(f, "pressure {pressure} outside growth range [0, {p_max}]")
            }
            GrowthLawError::Construction(msg) => write!(f, "invalid growth law: {msg}"),
        }
    }
}

impl std::error::Error for GrowthLawError {}

#[derive(Debug, Clone, PartialEq)]
enum GrowthKind {
    Zero,
    /// G(p) = rate * (p_max - p)
    Linear { rate: f64 },
    Tabulated { g: PchipCurve },
}

/// A growth law G with G' <= 0 on (0, p_M) and G(p_M) = 0.
///
/// Immutable after construction and freely shareable.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthLaw {
    kind: GrowthKind,
    p_max: Option<f64>,
}

impl GrowthLaw {
    /// No growth: G identically zero. Every delta constant downstream vanishes.
    pub fn zero() -> Self {
        Self { kind: GrowthKind::Zero, p_max: None }
    }

    /// Linear law `G(p) = rate (p_max - p)`.
    pub fn linear(rate: f64, p_max: f64) -> Result<Self, GrowthLawError> {
        if !(rate > 0.0) || !rate.is_finite() {
            return Err(GrowthLawError::Domain { what: "rate must be positive", value: rate });
        }
        if !(p_max > 0.0) || !p_max.is_finite() {
            return Err(GrowthLawError::Domain { what: "p_max must be positive", value: p_max });
        }
        Ok(Self { kind: GrowthKind::Linear { rate }, p_max: Some(p_max) })
    }

    /// Tabulated law from samples of G over `[0, p_M]`. The samples must be
    /// nonnegative, strictly decreasing away from flats, and end at G = 0.
    pub fn tabulated(p: Vec<f64>, g: Vec<f64>) -> Result<Self, GrowthLawError> {
        if p.is_empty() || p[0] != 0.0 {
            return Err(GrowthLawError::Construction("first sample must be at p = 0".into()));
        }
        let p_max = *p.last().unwrap();
        if !(p_max > 0.0) {
            return Err(GrowthLawError::Construction("p_max must be positive".into()));
        }
        if g.last() != Some(&0.0) {
            return Err(GrowthLawError::Construction("G(p_max) must be 0".into()));
        }
        if g.iter().any(|&v| v < 0.0) {
            return Err(GrowthLawError::Construction("G must be nonnegative".into()));
        }
        if g.windows(2).any(|w| w[1] > w[0]) {
            return Err(GrowthLawError::Construction("G samples must be nonincreasing".into()));
        }
        let curve = PchipCurve::new(p, g).map_err(GrowthLawError::Construction)?;
        Ok(Self { kind: GrowthKind::Tabulated { g: curve }, p_max: Some(p_max) })
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.kind, GrowthKind::Zero)
    }

    /// Homeostatic pressure, if the law has one (the zero law does not).
    pub fn p_max(&self) -> Option<f64> {
        self.p_max
    }

    /// G(p). Pressures up to `1e-9 * p_M` above the homeostatic value clamp
    /// to 0 instead of erroring, to tolerate round-off overshoot from explicit
    /// time stepping; anything beyond that band is a range error.
    pub fn g(&self, p: f64) -> Result<f64, GrowthLawError> {
        let p = self.admit(p)?;
        Ok(match &self.kind {
            GrowthKind::Zero => 0.0,
            GrowthKind::Linear { rate } => rate * (self.p_max.unwrap() - p),
            GrowthKind::Tabulated { g } => g.value(p),
        })
    }

    /// G'(p), nonpositive by construction.
    pub fn g_prime(&self, p: f64) -> Result<f64, GrowthLawError> {
        let p = self.admit(p)?;
        Ok(match &self.kind {
            GrowthKind::Zero => 0.0,
            GrowthKind::Linear { rate } => -rate,
            GrowthKind::Tabulated { g } => g.derivative(p),
        })
    }

    fn admit(&self, p: f64) -> Result<f64, GrowthLawError> {
        if !p.is_finite() || p < 0.0 {
            return Err(GrowthLawError::Domain { what: "pressure must be nonnegative", value: p });
        }
        match self.p_max {
            None => Ok(p),
            Some(pm) => {
                if p <= pm {
                    Ok(p)
                } else if p <= pm * (1.0 + 1e-9) {
                    Ok(pm)
                } else {
                    Err(GrowthLawError::Range { pressure: p, p_max: pm })
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_law() {
        let g = GrowthLaw::zero();
        for &p in &[0.0, 1.0, 17.5] {
            assert_eq!(g.g(p).unwrap(), 0.0);
            assert_eq!(g.g_prime(p).unwrap(), 0.0);
        }
    }

    #[test]
    fn linear_law_values() {
        let g = GrowthLaw::linear(1.0, 2.0).unwrap();
        assert_eq!(g.g(0.5).unwrap(), 1.5);
        assert_eq!(g.g(2.0).unwrap(), 0.0);
        assert_eq!(g.g_prime(1.0).unwrap(), -1.0);
    }

    #[test]
    fn overshoot_clamps_then_errors() {
        let g = GrowthLaw::linear(1.0, 2.0).unwrap();
        assert_eq!(g.g(2.0 * (1.0 + 1e-10)).unwrap(), 0.0);
        assert!(matches!(g.g(2.1), Err(GrowthLawError::Range { .. })));
        assert!(matches!(g.g(-0.1), Err(GrowthLawError::Domain { .. })));
    }

    #[test]
    fn monotone_decrease() {
        let laws = [
            GrowthLaw::linear(2.0, 1.5).unwrap(),
            GrowthLaw::tabulated(
                (0..=16).map(|i| 1.5 * i as f64 / 16.0).collect(),
                (0..=16).map(|i| (1.0 - i as f64 / 16.0).powi(2)).collect(),
            )
            .unwrap(),
        ];
        for law in &laws {
            for i in 0..100 {
                // deterministic pseudo-random pressure pairs in [0, p_M]
                let a = 1.5 * ((i as f64 * 0.618_033_988_749_894_9) % 1.0);
                let b = 1.5 * ((i as f64 * 0.414_213_562_373_095_1) % 1.0);
                let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
                assert!(law.g(lo).unwrap() >= law.g(hi).unwrap() - 1e-12);
                assert!(law.g_prime(0.5 * (lo + hi)).unwrap() <= 1e-12);
            }
        }
    }

    #[test]
    fn tabulated_guards() {
        assert!(GrowthLaw::tabulated(vec![0.0, 1.0], vec![1.0, 0.1]).is_err());
        assert!(GrowthLaw::tabulated(vec![0.0, 1.0], vec![-0.5, 0.0]).is_err());
        assert!(GrowthLaw::tabulated(vec![0.0, 0.5, 1.0], vec![0.2, 0.5, 0.0]).is_err());
        assert!(GrowthLaw::linear(0.0, 1.0).is_err());
        assert!(GrowthLaw::linear(1.0, -1.0).is_err());
    }
}
