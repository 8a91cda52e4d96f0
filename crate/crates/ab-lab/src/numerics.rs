//! Shared numerical kernels: adaptive quadrature, shape-preserving cubic
//! interpolation, and scalar extremum scans with golden-section refinement.

/// Adaptive Simpson quadrature of `f` over `[a, b]` to absolute tolerance `tol`.
///
/// Classic recursive bisection with the Richardson correction `(s_l + s_r - s) / 15`.
/// Depth is capped so that integrable endpoint singularities (like `x^alpha`,
/// `alpha > 0`) terminate; the cap is generous enough for tolerances down to 1e-12.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(&f, a, b, fa, fm, fb, whole, tol, 52)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
}

/// Monotonicity-limited piecewise-cubic Hermite interpolant (Fritsch-Carlson).
///
/// Node slopes are the weighted harmonic mean of adjacent secants, zeroed at
/// local extrema, so the interpolant never overshoots the data. Used for
/// tabulated constitutive laws where `q >= 0` must survive interpolation.
#[derive(Debug, Clone, PartialEq)]
pub struct PchipCurve {
    x: Vec<f64>,
    y: Vec<f64>,
    d: Vec<f64>,
}

impl PchipCurve {
    /// Builds the interpolant. `x` must be strictly increasing with at least
    /// two nodes and `y` the same length.
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self, String> {
        if x.len() < 2 || x.len() != y.len() {
            return Err(format!(
                "pchip needs >= 2 nodes with matching values, got {} x {}",
                x.len(),
                y.len()
            ));
        }
        for w in x.windows(2) {
            if !(w[1] > w[0]) {
                return Err(format!("pchip abscissae must strictly increase ({} !< {})", w[0], w[1]));
            }
        }
        if x.iter().chain(y.iter()).any(|v| !v.is_finite()) {
            return Err("pchip data must be finite".to_string());
        }
        let n = x.len();
        let mut h = vec![0.0; n - 1];
        let mut s = vec![0.0; n - 1];
        for k in 0..n - 1 {
            h[k] = x[k + 1] - x[k];
            s[k] = (y[k + 1] - y[k]) / h[k];
        }
        let mut d = vec![0.0; n];
        if n == 2 {
            d[0] = s[0];
            d[1] = s[0];
        } else {
            for k in 1..n - 1 {
                if s[k - 1] * s[k] <= 0.0 {
                    d[k] = 0.0;
                } else {
                    let w1 = 2.0 * h[k] + h[k - 1];
                    let w2 = h[k] + 2.0 * h[k - 1];
                    d[k] = (w1 + w2) / (w1 / s[k - 1] + w2 / s[k]);
                }
            }
            d[0] = edge_slope(h[0], h[1], s[0], s[1]);
            d[n - 1] = edge_slope(h[n - 2], h[n - 3], s[n - 2], s[n - 3]);
        }
        Ok(Self { x: x.to_vec(), y: y.to_vec(), d })
    }

    pub fn x_min(&self) -> f64 {
        self.x[0]
    }

    pub fn x_max(&self) -> f64 {
        *self.x.last().unwrap()
    }

    pub fn in_range(&self, x: f64) -> bool {
        x >= self.x_min() && x <= self.x_max()
    }

    fn segment(&self, x: f64) -> usize {
        // partition_point returns the first node > x; segment is the one before.
        let k = self.x.partition_point(|&v| v <= x);
        k.clamp(1, self.x.len() - 1) - 1
    }

    /// Interpolated value. `x` must lie inside the node range.
    pub fn value(&self, x: f64) -> f64 {
        let k = self.segment(x);
        let (h, t) = (self.x[k + 1] - self.x[k], x - self.x[k]);
        let s = t / h;
        let (y0, y1, d0, d1) = (self.y[k], self.y[k + 1], self.d[k], self.d[k + 1]);
        let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
        let h10 = t * (1.0 - s) * (1.0 - s);
        let h01 = s * s * (3.0 - 2.0 * s);
        let h11 = t * s * (s - 1.0);
        h00 * y0 + h10 * d0 + h01 * y1 + h11 * d1
    }

    /// First derivative of the interpolant.
    pub fn derivative(&self, x: f64) -> f64 {
        let k = self.segment(x);
        let (h, t) = (self.x[k + 1] - self.x[k], x - self.x[k]);
        let s = t / h;
        let (y0, y1, d0, d1) = (self.y[k], self.y[k + 1], self.d[k], self.d[k + 1]);
        let dh00 = 6.0 * s * (s - 1.0) / h;
        let dh10 = (1.0 - s) * (1.0 - 3.0 * s);
        let dh01 = -dh00;
        let dh11 = s * (3.0 * s - 2.0);
        dh00 * y0 + dh10 * d0 + dh01 * y1 + dh11 * d1
    }

    /// Second derivative (piecewise linear, jumps at the nodes).
    pub fn second_derivative(&self, x: f64) -> f64 {
        let k = self.segment(x);
        let (h, t) = (self.x[k + 1] - self.x[k], x - self.x[k]);
        let s = t / h;
        let (y0, y1, d0, d1) = (self.y[k], self.y[k + 1], self.d[k], self.d[k + 1]);
        let ddh00 = (12.0 * s - 6.0) / (h * h);
        let ddh10 = (6.0 * s - 4.0) / h;
        let ddh01 = -ddh00;
        let ddh11 = (6.0 * s - 2.0) / h;
        ddh00 * y0 + ddh10 * d0 + ddh01 * y1 + ddh11 * d1
    }
}

fn edge_slope(h0: f64, h1: f64, s0: f64, s1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * s0 - h0 * s1) / (h0 + h1);
    if d * s0 <= 0.0 {
        0.0
    } else if s0 * s1 <= 0.0 && d.abs() > 3.0 * s0.abs() {
        3.0 * s0
    } else {
        d
    }
}

/// Result of an extremum scan over a closed interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanExtremum {
    /// Abscissa of the extremum after refinement.
    pub arg: f64,
    /// Extremal value.
    pub value: f64,
    /// Number of grid points of the coarse scan.
    pub resolution: usize,
}

/// Default scan resolution for every min/max constant: 2^12 grid points.
pub const SCAN_RESOLUTION: usize = 1 << 12;

/// Maximum of `f` over `[a, b]`: uniform scan plus golden-section refinement
/// around the best grid point (tolerance 1e-9 relative to the interval).
pub fn scan_max<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, resolution: usize) -> ScanExtremum {
    let neg = scan_min(|x| -f(x), a, b, resolution);
    ScanExtremum { arg: neg.arg, value: -neg.value, resolution: neg.resolution }
}

/// Minimum of `f` over `[a, b]`; see [`scan_max`].
pub fn scan_min<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, resolution: usize) -> ScanExtremum {
    assert!(b >= a, "scan interval is reversed");
    assert!(resolution >= 2, "scan resolution too small");
    if a == b {
        return ScanExtremum { arg: a, value: f(a), resolution };
    }
    let n = resolution;
    let dx = (b - a) / n as f64;
    let mut best_i = 0usize;
    let mut best = f64::INFINITY;
    for i in 0..=n {
        let x = if i == n { b } else { a + i as f64 * dx };
        let v = f(x);
        if v < best {
            best = v;
            best_i = i;
        }
    }
    let lo = if best_i == 0 { a } else { a + (best_i - 1) as f64 * dx };
    let hi = if best_i >= n { b } else { a + (best_i + 1) as f64 * dx };
    let (arg, value) = golden_min(&f, lo, hi, 1e-9 * (b - a));
    if value <= best {
        ScanExtremum { arg, value, resolution }
    } else {
        let x_best = if best_i == n { b } else { a + best_i as f64 * dx };
        ScanExtremum { arg: x_best, value: best, resolution }
    }
}

fn golden_min<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Formats a float with 17 significant digits, the fixed interchange format
/// for every CSV and report this crate emits.
pub fn fmt_f64(x: f64) -> String {
    format!("{:.16e}", x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_polynomial_is_exact() {
        let v = adaptive_simpson(|x| 3.0 * x * x, 0.0, 2.0, 1e-12);
        assert!((v - 8.0).abs() < 1e-12);
    }

    #[test]
    fn simpson_handles_integrable_endpoint_singularity() {
        // int_0^1 x^{-1/2} dx = 2
        let v = adaptive_simpson(|x| if x > 0.0 { x.powf(-0.5) } else { 0.0 }, 0.0, 1.0, 1e-10);
        assert!((v - 2.0).abs() < 1e-6, "got {v}");
    }

    #[test]
    fn simpson_transcendental() {
        let v = adaptive_simpson(|x| x.sin(), 0.0, std::f64::consts::PI, 1e-12);
        assert!((v - 2.0).abs() < 1e-11);
    }

    #[test]
    fn pchip_reproduces_data_and_stays_monotone() {
        let x = vec![0.0, 0.5, 1.0, 2.0, 3.0];
        let y = vec![0.0, 0.8, 1.0, 3.5, 4.0];
        let c = PchipCurve::new(x.clone(), y.clone()).unwrap();
        for (xi, yi) in x.iter().zip(&y) {
            assert!((c.value(*xi) - yi).abs() < 1e-14);
        }
        // monotone data stays monotone between nodes
        let mut prev = c.value(0.0);
        for i in 1..=600 {
            let v = c.value(3.0 * i as f64 / 600.0);
            assert!(v >= prev - 1e-12, "overshoot at i={i}");
            prev = v;
        }
    }

    #[test]
    fn pchip_derivative_matches_finite_difference() {
        let x: Vec<f64> = (0..=20).map(|i| i as f64 / 20.0).collect();
        let y: Vec<f64> = x.iter().map(|&p| p * (1.0 + p)).collect();
        let c = PchipCurve::new(x, y).unwrap();
        let eps = 1e-6;
        for &p in &[0.11, 0.33, 0.61, 0.89] {
            let fd = (c.value(p + eps) - c.value(p - eps)) / (2.0 * eps);
            assert!((c.derivative(p) - fd).abs() < 1e-7, "at p={p}");
            let fd2 = (c.value(p + eps) - 2.0 * c.value(p) + c.value(p - eps)) / (eps * eps);
            assert!((c.second_derivative(p) - fd2).abs() < 1e-3, "at p={p}");
        }
    }

    #[test]
    fn pchip_rejects_bad_input() {
        assert!(PchipCurve::new(vec![0.0, 0.0], vec![1.0, 2.0]).is_err());
        assert!(PchipCurve::new(vec![0.0], vec![1.0]).is_err());
        assert!(PchipCurve::new(vec![0.0, 1.0], vec![1.0, f64::NAN]).is_err());
    }

    #[test]
    fn scan_finds_smooth_extrema() {
        let m = scan_min(|x| (x - 0.3271).powi(2) + 1.0, 0.0, 1.0, SCAN_RESOLUTION);
        assert!((m.arg - 0.3271).abs() < 1e-7);
        assert!((m.value - 1.0).abs() < 1e-13);
        let mx = scan_max(|x| x * (1.0 - x), 0.0, 1.0, SCAN_RESOLUTION);
        assert!((mx.arg - 0.5).abs() < 1e-7);
        assert!((mx.value - 0.25).abs() < 1e-13);
    }

    #[test]
    fn scan_handles_boundary_extremum() {
        let m = scan_min(|x| x, 0.0, 1.0, 64);
        assert!(m.arg.abs() < 1e-9);
        assert!(m.value.abs() < 1e-9);
    }

    #[test]
    fn scan_is_stable_under_grid_doubling() {
        let f = |x: f64| (3.0 * x).sin() + 0.5 * (7.0 * x).cos();
        let a = scan_max(f, 0.0, 2.0, SCAN_RESOLUTION);
        let b = scan_max(f, 0.0, 2.0, 2 * SCAN_RESOLUTION);
        assert!((a.value - b.value).abs() <= 1e-6 * (1.0 + a.value.abs()));
    }

    #[test]
    fn float_format_is_17_significant_digits() {
        assert_eq!(fmt_f64(0.25), "2.5000000000000000e-1");
        assert_eq!(fmt_f64(-3.0), "-3.0000000000000000e0");
    }
}
