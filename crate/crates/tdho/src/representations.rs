//! Bogoliubov coefficients, squeeze parameters, and Hamiltonian coefficients
//! for the initial, diagonal, and invariant representations.

use crate::error::Result;
use crate::ermakov::ErmakovSolution;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Representation {
    /// Ladder operators diagonalizing the Hamiltonian at the initial time.
    Initial,
    /// Ladder operators diagonalizing the instantaneous Hamiltonian.
    Diagonal,
    /// Lewis–Riesenfeld operators with conserved number operator.
    Invariant,
}

impl Representation {
    pub fn label(self) -> &'static str {
        match self {
            Self::Initial => "initial",
            Self::Diagonal => "diagonal",
            Self::Invariant => "invariant",
        }
    }
}

/// α(t), β(t) mixing the representation's ladder operators into the initial
/// ones, with |α|² − |β|² = 1.
#[derive(Debug, Clone, Copy)]
pub struct BogoliubovSet {
    pub representation: Representation,
    pub t: f64,
    pub alpha: Complex64,
    pub beta: Complex64,
    pub theta_alpha: f64,
    pub theta_beta: f64,
    /// squeeze parameter, r = asinh |β| (better conditioned than acosh |α|)
    pub r: f64,
}

impl BogoliubovSet {
    /// Build from explicit α, β (synthetic states for tests and checks).
    pub fn from_alpha_beta(
        representation: Representation,
        t: f64,
        alpha: Complex64,
        beta: Complex64,
    ) -> Self {
        Self::with_phases(representation, t, alpha, beta, alpha.arg(), beta.arg())
    }

    /// Build with explicit phase conventions.
    ///
    /// θ_α must be continuous in t (not wrapped to a principal branch): the
    /// matrix-element phase multiplies it by the half-integer (N+M+1)/2, so a
    /// 2π jump would flip the amplitude sign. θ_β only ever appears with even
    /// integer multipliers and may wrap freely.
    pub fn with_phases(
        representation: Representation,
        t: f64,
        alpha: Complex64,
        beta: Complex64,
        theta_alpha: f64,
        theta_beta: f64,
    ) -> Self {
        Self { representation, t, alpha, beta, theta_alpha, theta_beta, r: beta.norm().asinh() }
    }

    pub fn normalization_defect(&self) -> f64 {
        (self.alpha.norm_sqr() - self.beta.norm_sqr() - 1.0).abs()
    }
}

/// λ±, λ₀ of H = λ₊ (a†)² + λ₋ a² + λ₀ (a†a + ½) in a given representation.
#[derive(Debug, Clone, Copy)]
pub struct HamiltonianCoeffs {
    pub representation: Representation,
    pub t: f64,
    pub lambda_plus: Complex64,
    pub lambda_minus: Complex64,
    pub lambda0: f64,
}

/// Bogoliubov coefficients of `rep` at time t.
///
/// θ_α is assembled as −ω₀τ + arg(f) where Re f > 0 always, so it is a
/// continuous function of t (τ itself is continuous); θ_β analogously as
/// +ω₀τ + arg(g).
pub fn bogoliubov(sol: &ErmakovSolution, rep: Representation, t: f64) -> Result<BogoliubovSet> {
    let p = sol.eval(t)?;
    let w0 = sol.omega_ref();
    let rot_minus = Complex64::from_polar(1.0, -w0 * p.tau);
    let rot_plus = rot_minus.conj();
    let (f, g) = match rep {
        Representation::Initial => (
            Complex64::new(0.5 * (p.sigma + 1.0 / p.sigma), 0.5 * p.sigma_dot / w0),
            Complex64::new(0.5 * (p.sigma - 1.0 / p.sigma), 0.5 * p.sigma_dot / w0),
        ),
        Representation::Diagonal => {
            let w = sol.profile().omega(t)?;
            let scale = (w / w0).sqrt();
            (
                Complex64::new(
                    0.5 * scale * (p.sigma + w0 / (p.sigma * w)),
                    0.5 * scale * p.sigma_dot / w,
                ),
                Complex64::new(
                    0.5 * scale * (p.sigma - w0 / (p.sigma * w)),
                    0.5 * scale * p.sigma_dot / w,
                ),
            )
        }
        Representation::Invariant => {
            return Ok(BogoliubovSet::with_phases(
                rep,
                t,
                rot_minus,
                Complex64::new(0.0, 0.0),
                -w0 * p.tau,
                0.0,
            ))
        }
    };
    Ok(BogoliubovSet::with_phases(
        rep,
        t,
        f * rot_minus,
        g * rot_plus,
        -w0 * p.tau + f.arg(),
        w0 * p.tau + g.arg(),
    ))
}

/// Hamiltonian coefficients of `rep` at time t.
pub fn hamiltonian_coeffs(
    sol: &ErmakovSolution,
    rep: Representation,
    t: f64,
) -> Result<HamiltonianCoeffs> {
    let p = sol.eval(t)?;
    let w0 = sol.omega_ref();
    let w2 = sol.profile().omega_sq(t);
    Ok(raw_hamiltonian_coeffs(rep, t, p.sigma, p.sigma_dot, w2, w0))
}

/// Coefficient formulas at an explicit phase-space point (σ, σ̇, ω², ω₀).
pub fn raw_hamiltonian_coeffs(
    rep: Representation,
    t: f64,
    sigma: f64,
    sigma_dot: f64,
    omega_sq: f64,
    omega0: f64,
) -> HamiltonianCoeffs {
    match rep {
        Representation::Initial => {
            let lam = -(omega0 / 4.0) * (1.0 - omega_sq / (omega0 * omega0));
            HamiltonianCoeffs {
                representation: rep,
                t,
                lambda_plus: Complex64::new(lam, 0.0),
                lambda_minus: Complex64::new(lam, 0.0),
                lambda0: (omega0 / 2.0) * (1.0 + omega_sq / (omega0 * omega0)),
            }
        }
        Representation::Diagonal => HamiltonianCoeffs {
            representation: rep,
            t,
            lambda_plus: Complex64::new(0.0, 0.0),
            lambda_minus: Complex64::new(0.0, 0.0),
            lambda0: omega_sq.sqrt(),
        },
        Representation::Invariant => {
            let z = Complex64::new(sigma_dot, -omega0 / sigma);
            let lambda_minus = (z * z + omega_sq * sigma * sigma) / (4.0 * omega0);
            HamiltonianCoeffs {
                representation: rep,
                t,
                lambda_plus: lambda_minus.conj(),
                lambda_minus,
                lambda0: (sigma_dot * sigma_dot
                    + omega0 * omega0 / (sigma * sigma)
                    + omega_sq * sigma * sigma)
                    / (2.0 * omega0),
            }
        }
    }
}

/// θ_α + θ_β (principal value) for the non-invariant representations.
///
/// The per-coefficient τ rotations cancel in the sum, leaving the closed
/// forms in terms of σ, σ̇ alone.
pub fn phase_sum(sol: &ErmakovSolution, rep: Representation, t: f64) -> Result<f64> {
    let p = sol.eval(t)?;
    let w0 = sol.omega_ref();
    Ok(match rep {
        Representation::Initial => {
            let denom = p.sigma * p.sigma * w0 - w0 / (p.sigma * p.sigma)
                - p.sigma_dot * p.sigma_dot / w0;
            (2.0 * p.sigma * p.sigma_dot).atan2(denom)
        }
        Representation::Diagonal => {
            let w = sol.profile().omega(t)?;
            let denom = p.sigma * p.sigma * w
                - w0 * w0 / (p.sigma * p.sigma * w)
                - p.sigma_dot * p.sigma_dot / w;
            (2.0 * p.sigma * p.sigma_dot).atan2(denom)
        }
        Representation::Invariant => 0.0,
    })
}

/// θ_α + θ_β along a grid, unwrapped into a continuous series.
pub fn phase_sum_series(
    sol: &ErmakovSolution,
    rep: Representation,
    times: &[f64],
) -> Result<Vec<f64>> {
    use std::f64::consts::TAU;
    let mut out = Vec::with_capacity(times.len());
    let mut offset = 0.0;
    let mut prev: Option<f64> = None;
    for &t in times {
        let raw = phase_sum(sol, rep, t)?;
        if let Some(p) = prev {
            let mut jump = raw + offset - p;
            while jump > std::f64::consts::PI {
                offset -= TAU;
                jump -= TAU;
            }
            while jump < -std::f64::consts::PI {
                offset += TAU;
                jump += TAU;
            }
        }
        let v = raw + offset;
        out.push(v);
        prev = Some(v);
    }
    Ok(out)
}
