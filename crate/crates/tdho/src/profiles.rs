//! Frequency profiles ω(t) driving the oscillator.
//!
//! Two closed-form families cover the worked examples: a tanh step between
//! two asymptotic frequencies and a sech² bump returning to the initial
//! frequency. Arbitrary profiles come in as tabulated (t, ω) samples with
//! monotone cubic interpolation.

use crate::error::{Error, Result};

/// ω(t) with parameters, or tabulated samples.
#[derive(Debug, Clone)]
pub enum FrequencyProfile {
    /// ω(t) = ω₀.
    Constant { omega0: f64 },
    /// ω²(t) = (ω_f²+ω₀²)/2 + (ω_f²−ω₀²)/2 · tanh κt.
    TanhStep { omega0: f64, omega_f: f64, kappa: f64 },
    /// ω²(t) = ω₀² + (ω_c²−ω₀²)/cosh² κt.
    SechBump { omega0: f64, omega_c: f64, kappa: f64 },
    /// Monotone cubic interpolation of (t, ω) samples.
    Tabulated { spline: MonotoneCubic },
}

impl FrequencyProfile {
    pub fn constant(omega0: f64) -> Result<Self> {
        require_positive(omega0, "omega0")?;
        Ok(Self::Constant { omega0 })
    }

    pub fn tanh_step(omega0: f64, omega_f: f64, kappa: f64) -> Result<Self> {
        require_positive(omega0, "omega0")?;
        require_positive(omega_f, "omega_f")?;
        require_positive(kappa, "kappa")?;
        Ok(Self::TanhStep { omega0, omega_f, kappa })
    }

    pub fn sech_bump(omega0: f64, omega_c: f64, kappa: f64) -> Result<Self> {
        require_positive(omega0, "omega0")?;
        require_positive(omega_c, "omega_c")?;
        require_positive(kappa, "kappa")?;
        Ok(Self::SechBump { omega0, omega_c, kappa })
    }

    pub fn tabulated(samples: Vec<(f64, f64)>) -> Result<Self> {
        let spline = MonotoneCubic::new(samples)?;
        Ok(Self::Tabulated { spline })
    }

    /// Parse a two-column CSV (t, omega); header optional, '.' decimals.
    pub fn tabulated_from_csv(text: &str) -> Result<Self> {
        let mut samples = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut cols = line.split(',').map(str::trim);
            let (a, b) = match (cols.next(), cols.next()) {
                (Some(a), Some(b)) => (a, b),
                _ => {
                    return Err(Error::InvalidProfile(format!(
                        "line {}: expected two comma-separated columns",
                        i + 1
                    )))
                }
            };
            match (a.parse::<f64>(), b.parse::<f64>()) {
                (Ok(t), Ok(w)) => samples.push((t, w)),
                _ if i == 0 => continue, // header row
                _ => {
                    return Err(Error::InvalidProfile(format!(
                        "line {}: cannot parse '{}', '{}' as numbers",
                        i + 1,
                        a,
                        b
                    )))
                }
            }
        }
        Self::tabulated(samples)
    }

    /// The ω₀ parameter: asymptotic-past frequency for the closed forms,
    /// first sample for tabulated profiles.
    pub fn omega0(&self) -> f64 {
        match self {
            Self::Constant { omega0 }
            | Self::TanhStep { omega0, .. }
            | Self::SechBump { omega0, .. } => *omega0,
            Self::Tabulated { spline } => spline.ys[0],
        }
    }

    /// ω²(t); may be evaluated where the square root would fail.
    pub fn omega_sq(&self, t: f64) -> f64 {
        match self {
            Self::Constant { omega0 } => omega0 * omega0,
            Self::TanhStep { omega0, omega_f, kappa } => {
                let (w0s, wfs) = (omega0 * omega0, omega_f * omega_f);
                0.5 * (wfs + w0s) + 0.5 * (wfs - w0s) * (kappa * t).tanh()
            }
            Self::SechBump { omega0, omega_c, kappa } => {
                let (w0s, wcs) = (omega0 * omega0, omega_c * omega_c);
                let sech = 1.0 / (kappa * t).cosh();
                w0s + (wcs - w0s) * sech * sech
            }
            Self::Tabulated { spline } => {
                let w = spline.eval(t);
                w * w
            }
        }
    }

    /// ω(t).
    pub fn omega(&self, t: f64) -> Result<f64> {
        if !t.is_finite() {
            return Err(Error::Domain(format!("non-finite time {t}")));
        }
        let w2 = self.omega_sq(t);
        if w2 <= 0.0 {
            return Err(Error::Domain(format!(
                "omega^2 = {w2} <= 0 at t = {t}: invalid profile parameters"
            )));
        }
        Ok(w2.sqrt())
    }

    /// dω/dt; analytic for the closed forms, centered finite difference for
    /// tabulated input (step ∛ε·max(1,|t|)).
    pub fn omega_dot(&self, t: f64) -> Result<f64> {
        match self {
            Self::Constant { .. } => Ok(0.0),
            Self::TanhStep { omega0, omega_f, kappa } => {
                let w = self.omega(t)?;
                let c1 = 0.5 * (omega_f * omega_f - omega0 * omega0);
                let sech = 1.0 / (kappa * t).cosh();
                Ok(c1 * kappa * sech * sech / (2.0 * w))
            }
            Self::SechBump { omega0, omega_c, kappa } => {
                let w = self.omega(t)?;
                let d = omega_c * omega_c - omega0 * omega0;
                let sech = 1.0 / (kappa * t).cosh();
                let th = (kappa * t).tanh();
                Ok(-d * kappa * sech * sech * th / w)
            }
            Self::Tabulated { .. } => {
                let h = f64::EPSILON.cbrt() * t.abs().max(1.0);
                let wp = self.omega(t + h)?;
                let wm = self.omega(t - h)?;
                Ok((wp - wm) / (2.0 * h))
            }
        }
    }

    /// ∫₀ᵗ ω²(s) ds, needed by the Fock oracle's interaction picture.
    pub fn omega_sq_integral(&self, t: f64) -> f64 {
        match self {
            Self::Constant { omega0 } => omega0 * omega0 * t,
            Self::TanhStep { omega0, omega_f, kappa } => {
                let (w0s, wfs) = (omega0 * omega0, omega_f * omega_f);
                let c0 = 0.5 * (wfs + w0s);
                let c1 = 0.5 * (wfs - w0s);
                c0 * t + c1 * ln_cosh(kappa * t) / kappa
            }
            Self::SechBump { omega0, omega_c, kappa } => {
                let w0s = omega0 * omega0;
                let d = omega_c * omega_c - w0s;
                w0s * t + d * (kappa * t).tanh() / kappa
            }
            Self::Tabulated { spline } => spline.integral_sq(t),
        }
    }

    /// Asymptotic-region predicate for the step/bump shapes: |tanh κt| > 1−1e−12.
    pub fn in_asymptotic_region(&self, t: f64) -> bool {
        match self {
            Self::Constant { .. } => true,
            Self::TanhStep { kappa, .. } | Self::SechBump { kappa, .. } => {
                (kappa * t).tanh().abs() > 1.0 - 1e-12
            }
            Self::Tabulated { .. } => false,
        }
    }
}

fn require_positive(x: f64, name: &str) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidProfile(format!("{name} must be positive, got {x}")))
    }
}

/// ln cosh(x) without overflow for large |x|.
fn ln_cosh(x: f64) -> f64 {
    let a = x.abs();
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}

/// Fritsch–Carlson monotone cubic interpolant.
///
/// Keeps ω² free of the spurious overshoot an unconstrained spline would feed
/// into the Ermakov integration near rapid ramps.
#[derive(Debug, Clone)]
pub struct MonotoneCubic {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
    /// cumulative ∫ y² dx at the knots, filled at construction
    cum_sq: Vec<f64>,
}

impl MonotoneCubic {
    pub fn new(samples: Vec<(f64, f64)>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidProfile(
                "tabulated profile needs at least two samples".into(),
            ));
        }
        let mut samples = samples;
        samples.sort_by(|a, b| a.0.total_cmp(&b.0));
        let xs: Vec<f64> = samples.iter().map(|s| s.0).collect();
        let ys: Vec<f64> = samples.iter().map(|s| s.1).collect();
        if xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidProfile("duplicate sample times".into()));
        }
        if ys.iter().any(|&y| !(y > 0.0) || !y.is_finite()) {
            return Err(Error::InvalidProfile("omega samples must be positive".into()));
        }

        let n = xs.len();
        let mut d = vec![0.0; n - 1]; // secant slopes
        for i in 0..n - 1 {
            d[i] = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
        }
        let mut m = vec![0.0; n];
        m[0] = d[0];
        m[n - 1] = d[n - 2];
        for i in 1..n - 1 {
            m[i] = if d[i - 1] * d[i] <= 0.0 { 0.0 } else { 0.5 * (d[i - 1] + d[i]) };
        }
        // Fritsch–Carlson limiter
        for i in 0..n - 1 {
            if d[i] == 0.0 {
                m[i] = 0.0;
                m[i + 1] = 0.0;
            } else {
                let a = m[i] / d[i];
                let b = m[i + 1] / d[i];
                let s = (a * a + b * b).sqrt();
                if s > 3.0 {
                    m[i] = 3.0 * a / s * d[i];
                    m[i + 1] = 3.0 * b / s * d[i];
                }
            }
        }

        let mut spline = Self { xs, ys, slopes: m, cum_sq: Vec::new() };
        spline.fill_cum_sq();
        Ok(spline)
    }

    fn segment(&self, x: f64) -> usize {
        match self.xs.binary_search_by(|v| v.total_cmp(&x)) {
            Ok(i) => i.min(self.xs.len() - 2),
            Err(0) => 0,
            Err(i) => (i - 1).min(self.xs.len() - 2),
        }
    }

    /// Hermite evaluation; clamped extrapolation outside the sample range.
    pub fn eval(&self, x: f64) -> f64 {
        if x <= self.xs[0] {
            return self.ys[0];
        }
        if x >= *self.xs.last().unwrap() {
            return *self.ys.last().unwrap();
        }
        let i = self.segment(x);
        let h = self.xs[i + 1] - self.xs[i];
        let s = (x - self.xs[i]) / h;
        let (y0, y1) = (self.ys[i], self.ys[i + 1]);
        let (m0, m1) = (self.slopes[i] * h, self.slopes[i + 1] * h);
        let s2 = s * s;
        let s3 = s2 * s;
        y0 * (2.0 * s3 - 3.0 * s2 + 1.0)
            + m0 * (s3 - 2.0 * s2 + s)
            + y1 * (-2.0 * s3 + 3.0 * s2)
            + m1 * (s3 - s2)
    }

    fn fill_cum_sq(&mut self) {
        // y is piecewise cubic, y² piecewise degree 6: 4-point Gauss–Legendre
        // per segment is exact to degree 7.
        let n = self.xs.len();
        let mut cum = vec![0.0; n];
        for i in 0..n - 1 {
            cum[i + 1] = cum[i] + self.gl4_sq(self.xs[i], self.xs[i + 1]);
        }
        self.cum_sq = cum;
    }

    const GL4_X: [f64; 4] = [
        -0.861_136_311_594_052_6,
        -0.339_981_043_584_856_3,
        0.339_981_043_584_856_3,
        0.861_136_311_594_052_6,
    ];
    const GL4_W: [f64; 4] = [
        0.347_854_845_137_453_85,
        0.652_145_154_862_546_2,
        0.652_145_154_862_546_2,
        0.347_854_845_137_453_85,
    ];

    fn gl4_sq(&self, a: f64, b: f64) -> f64 {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut acc = 0.0;
        for (&x, &w) in Self::GL4_X.iter().zip(Self::GL4_W.iter()) {
            let y = self.eval(c + h * x);
            acc += w * y * y;
        }
        acc * h
    }

    /// ∫₀ˣ y²(s) ds with constant extension outside the sample range.
    pub fn integral_sq(&self, x: f64) -> f64 {
        let lo = self.xs[0];
        let hi = *self.xs.last().unwrap();
        let inner = |x: f64| -> f64 {
            let i = self.segment(x);
            self.cum_sq[i] + self.gl4_sq(self.xs[i], x)
        };
        let at = |x: f64| -> f64 {
            if x <= lo {
                let y = self.ys[0];
                y * y * (x - lo)
            } else if x >= hi {
                let y = *self.ys.last().unwrap();
                *self.cum_sq.last().unwrap() + y * y * (x - hi)
            } else {
                inner(x)
            }
        };
        // reference the integral to x = 0
        at(x) - at(0.0)
    }
}
