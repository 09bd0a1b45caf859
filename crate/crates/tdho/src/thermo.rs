//! Occupation numbers, the total energy in its three representational forms,
//! and the representation-dependent heat and work rates with first-law
//! bookkeeping.
//!
//! All rates are closed forms in (σ, σ̇, ω, ω̇); Ė is evaluated analytically
//! (λ̇₀^{(I)} = ωω̇σ²/ω₀ once the Ermakov equation is used), finite
//! differences appear only in tests.

use crate::error::{Error, Result};
use crate::ermakov::ErmakovSolution;
use rayon::prelude::*;

/// Mean occupations and the energy split at one time.
#[derive(Debug, Clone, Copy)]
pub struct ThermoRecord {
    pub t: f64,
    /// mean occupation of the initial representation
    pub n0: f64,
    /// mean occupation of the diagonal representation
    pub n_omega: f64,
    /// conserved invariant-representation occupation (the initial N)
    pub n_inv: f64,
    pub energy: f64,
    /// vacuum-energy term ε₀(t) of the initial-representation split
    pub eps0: f64,
    pub qdot_0: f64,
    pub wdot_0: f64,
    pub qdot_omega: f64,
    pub wdot_omega: f64,
    /// identically zero (the invariant representation is truly adiabatic)
    pub qdot_inv: f64,
    pub wdot_inv: f64,
    pub q_0: f64,
    pub w_0: f64,
    pub q_omega: f64,
    pub w_omega: f64,
    pub w_inv: f64,
}

/// The three equivalent energy evaluations and their spread.
#[derive(Debug, Clone, Copy)]
pub struct EnergyForms {
    pub diagonal: f64,
    pub invariant: f64,
    pub initial: f64,
    pub eps0: f64,
    pub max_rel_discrepancy: f64,
}

/// Instantaneous heat/work rates in the three representations.
#[derive(Debug, Clone, Copy)]
pub struct RateBundle {
    pub t: f64,
    pub qdot_0: f64,
    pub wdot_0: f64,
    pub qdot_omega: f64,
    pub wdot_omega: f64,
    pub qdot_inv: f64,
    pub wdot_inv: f64,
    /// analytic Ė = λ̇₀^{(I)} (N+½) = σ²ωω̇ (N+½)/ω₀
    pub edot: f64,
}

/// (N₀, N_ω) from the σ-expression moduli (independent of the complex
/// Bogoliubov code path).
pub fn occupations(sol: &ErmakovSolution, n: usize, t: f64) -> Result<(f64, f64)> {
    let p = sol.eval(t)?;
    let w0 = sol.omega_ref();
    let w = sol.profile().omega(t)?;
    let nf = n as f64;
    let beta0_sq =
        0.25 * ((p.sigma - 1.0 / p.sigma).powi(2) + p.sigma_dot.powi(2) / (w0 * w0));
    let sum0 = 1.0 + 2.0 * beta0_sq; // |α|²+|β|² with the normalization identity
    let beta_w_sq = (w / (4.0 * w0))
        * ((p.sigma - w0 / (p.sigma * w)).powi(2) + p.sigma_dot.powi(2) / (w * w));
    let sum_w = 1.0 + 2.0 * beta_w_sq;
    Ok((sum0 * nf + beta0_sq, sum_w * nf + beta_w_sq))
}

/// Energy via the diagonal, invariant, and initial-representation forms.
///
/// The three are algebraically identical given the Ermakov constraint, so a
/// spread above 1e-6 relative signals a corrupted σ and is an error.
pub fn energy(sol: &ErmakovSolution, n: usize, t: f64) -> Result<EnergyForms> {
    let p = sol.eval(t)?;
    let w = sol.profile().omega(t)?;
    let forms = energy_forms_raw(p.sigma, p.sigma_dot, w, sol.omega_ref(), n);
    if forms.max_rel_discrepancy > 1e-6 {
        return Err(Error::Consistency(format!(
            "energy forms disagree by {} at t = {t}",
            forms.max_rel_discrepancy
        )));
    }
    Ok(forms)
}

/// The three energy forms at an explicit phase-space point.
pub fn energy_forms_raw(sigma: f64, sigma_dot: f64, omega: f64, omega0: f64, n: usize) -> EnergyForms {
    let nf = n as f64 + 0.5;
    let w2 = omega * omega;

    let beta_w_sq = (omega / (4.0 * omega0))
        * ((sigma - omega0 / (sigma * omega)).powi(2) + sigma_dot.powi(2) / w2);
    let n_omega = (1.0 + 2.0 * beta_w_sq) * (nf - 0.5) + beta_w_sq;
    let diagonal = omega * (n_omega + 0.5);

    let lambda0 =
        (sigma_dot * sigma_dot + omega0 * omega0 / (sigma * sigma) + w2 * sigma * sigma)
            / (2.0 * omega0);
    let invariant = lambda0 * nf;

    let beta0_sq =
        0.25 * ((sigma - 1.0 / sigma).powi(2) + sigma_dot.powi(2) / (omega0 * omega0));
    let n0 = (1.0 + 2.0 * beta0_sq) * (nf - 0.5) + beta0_sq;
    let eps0 = 0.5 * omega0 + (sigma * sigma / (2.0 * omega0)) * (w2 - omega0 * omega0) * nf;
    let initial = omega0 * n0 + eps0;

    let lo = diagonal.min(invariant).min(initial);
    let hi = diagonal.max(invariant).max(initial);
    let scale = hi.abs().max(lo.abs()).max(f64::MIN_POSITIVE);
    EnergyForms { diagonal, invariant, initial, eps0, max_rel_discrepancy: (hi - lo) / scale }
}

/// All six heat/work rates and the analytic Ė.
pub fn heat_work_rates(sol: &ErmakovSolution, n: usize, t: f64) -> Result<RateBundle> {
    let p = sol.eval(t)?;
    let w0 = sol.omega_ref();
    let w = sol.profile().omega(t)?;
    let wdot = sol.profile().omega_dot(t)?;
    let nf = n as f64 + 0.5;
    let (s, sd) = (p.sigma, p.sigma_dot);
    let w2 = w * w;

    let qdot_0 = -(s * sd / w0) * (w2 - w0 * w0) * nf;
    let wdot_0 = ((s * sd / w0) * (w2 - w0 * w0) + s * s * w * wdot / w0) * nf;
    let qdot_omega = (wdot / (2.0 * w0)) * (s * s * w - w0 * w0 / (s * s * w) - sd * sd / w) * nf;
    let wdot_omega = (wdot / (2.0 * w0)) * (s * s * w + w0 * w0 / (s * s * w) + sd * sd / w) * nf;
    let edot = s * s * w * wdot / w0 * nf;
    Ok(RateBundle {
        t,
        qdot_0,
        wdot_0,
        qdot_omega,
        wdot_omega,
        qdot_inv: 0.0,
        wdot_inv: edot,
        edot,
    })
}

/// Composite Simpson on a uniform grid (odd point count preferred; a
/// trapezoid patch closes an even count).
pub fn simpson_cumulative(times: &[f64], values: &[f64]) -> Vec<f64> {
    assert_eq!(times.len(), values.len());
    let n = times.len();
    let mut out = vec![0.0; n];
    if n < 2 {
        return out;
    }
    let h = times[1] - times[0];
    // pairwise Simpson gives the cumulative at odd strides; fill even strides
    // with the symmetric half-panel rule
    for i in (2..n).step_by(2) {
        out[i] = out[i - 2] + h / 3.0 * (values[i - 2] + 4.0 * values[i - 1] + values[i]);
    }
    for i in (1..n).step_by(2) {
        // cubic-exact single-interval rule on a 4-point stencil
        out[i] = if i + 2 < n {
            out[i - 1]
                + h / 24.0
                    * (9.0 * values[i - 1] + 19.0 * values[i] - 5.0 * values[i + 1]
                        + values[i + 2])
        } else if i >= 3 {
            out[i - 1]
                + h / 24.0
                    * (9.0 * values[i] + 19.0 * values[i - 1] - 5.0 * values[i - 2]
                        + values[i - 3])
        } else {
            out[i - 1] + 0.5 * h * (values[i - 1] + values[i])
        };
    }
    out
}

/// Thermodynamic series over a uniform grid: rates plus Simpson-integrated
/// cumulatives, with closed-form initial-representation cross-check values.
pub struct ThermoSeries {
    pub records: Vec<ThermoRecord>,
    /// closed-form cumulative Q₀(t) − Q₀(start) = ω₀(N₀(t) − N)
    pub q0_closed: Vec<f64>,
    /// closed-form W₀(t) − W₀(start) = [σ²(ω²−ω₀²)]ᵗ_start (N+½)/2ω₀
    pub w0_closed: Vec<f64>,
}

pub fn cumulative(sol: &ErmakovSolution, n: usize, times: &[f64]) -> Result<ThermoSeries> {
    if times.len() < 2 {
        return Err(Error::Domain("cumulative needs at least two grid times".into()));
    }
    let h = times[1] - times[0];
    for w in times.windows(2) {
        if ((w[1] - w[0]) - h).abs() > 1e-9 * h.abs().max(1e-12) {
            return Err(Error::Domain("cumulative expects a uniform grid".into()));
        }
    }
    let rates: Vec<RateBundle> = times
        .par_iter()
        .map(|&t| heat_work_rates(sol, n, t))
        .collect::<Result<_>>()?;

    let col = |f: &dyn Fn(&RateBundle) -> f64| -> Vec<f64> { rates.iter().map(f).collect() };
    let q0 = simpson_cumulative(times, &col(&|r| r.qdot_0));
    let w0 = simpson_cumulative(times, &col(&|r| r.wdot_0));
    let qw = simpson_cumulative(times, &col(&|r| r.qdot_omega));
    let ww = simpson_cumulative(times, &col(&|r| r.wdot_omega));
    let wi = simpson_cumulative(times, &col(&|r| r.wdot_inv));

    let w0ref = sol.omega_ref();
    let nf = n as f64 + 0.5;
    let start = sol.eval(times[0])?;
    let w_start = sol.profile().omega(times[0])?;
    let w0_closed_start =
        start.sigma.powi(2) * (w_start * w_start - w0ref * w0ref) * nf / (2.0 * w0ref);
    let (n0_start, _) = occupations(sol, n, times[0])?;

    let mut records = Vec::with_capacity(times.len());
    let mut q0_closed = Vec::with_capacity(times.len());
    let mut w0_closed = Vec::with_capacity(times.len());
    for (i, &t) in times.iter().enumerate() {
        let (n0, n_omega) = occupations(sol, n, t)?;
        let forms = energy(sol, n, t)?;
        let r = &rates[i];
        records.push(ThermoRecord {
            t,
            n0,
            n_omega,
            n_inv: n as f64,
            energy: forms.invariant,
            eps0: forms.eps0,
            qdot_0: r.qdot_0,
            wdot_0: r.wdot_0,
            qdot_omega: r.qdot_omega,
            wdot_omega: r.wdot_omega,
            qdot_inv: 0.0,
            wdot_inv: r.wdot_inv,
            q_0: q0[i],
            w_0: w0[i],
            q_omega: qw[i],
            w_omega: ww[i],
            w_inv: wi[i],
        });
        q0_closed.push(w0ref * (n0 - n0_start));
        let p = sol.eval(t)?;
        let w = sol.profile().omega(t)?;
        w0_closed
            .push(p.sigma.powi(2) * (w * w - w0ref * w0ref) * nf / (2.0 * w0ref) - w0_closed_start);
    }
    Ok(ThermoSeries { records, q0_closed, w0_closed })
}
