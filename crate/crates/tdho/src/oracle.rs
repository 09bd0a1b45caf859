//! Independent brute-force validators: truncated-Fock-basis Schrödinger
//! evolution, Gauss–Hermite overlap integrals, and position-space
//! wavefunction residuals.
//!
//! Nothing here touches the closed-form Legendre path, so agreement between
//! the two is a genuine cross-check, not a tautology.

use crate::error::{Error, Result};
use crate::ermakov::ErmakovSolution;
use crate::ode::{Dopri5, OdeOptions};
use crate::profiles::FrequencyProfile;
use crate::representations::Representation;
use crate::specfun::{gauss_hermite, hermite_functions};
use num_complex::Complex64;
use serde::Serialize;

/// Fock-basis amplitudes at one sample time.
#[derive(Debug, Clone)]
pub struct FockState {
    pub t: f64,
    /// c_M over M = 0..D−1 in the initial-representation basis
    pub amplitudes: Vec<Complex64>,
}

impl FockState {
    pub fn norm_sq(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn occupation(&self) -> f64 {
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(m, c)| m as f64 * c.norm_sqr())
            .sum()
    }

    /// mass in the top 10% of modes (truncation monitor)
    pub fn top_band_mass(&self) -> f64 {
        let d = self.amplitudes.len();
        let lo = d - (d / 10).max(1);
        self.amplitudes[lo..].iter().map(|c| c.norm_sqr()).sum()
    }
}

/// Trajectory of the truncated-Fock evolution at requested sample times.
#[derive(Debug, Clone)]
pub struct FockTrajectory {
    pub dim: usize,
    pub initial_n: usize,
    pub states: Vec<FockState>,
}

/// Evolve |N⟩ from the start of `t_span` under the initial-representation
/// Hamiltonian, sampling at `sample_times` (ascending, within the span).
///
/// The integration runs in the interaction picture of the number-diagonal
/// part, c_M = e^{−i(M+½)Λ(t)} d_M with Λ = ∫λ₀, so quiescent stretches cost
/// nothing and only the pair-coupling term limits the step size. Parity
/// conservation is structural: odd-offset amplitudes are identically zero.
pub fn evolve_fock(
    profile: &FrequencyProfile,
    initial_n: usize,
    t_span: (f64, f64),
    dim: usize,
    rtol: f64,
    leak_tol: f64,
    sample_times: &[f64],
) -> Result<FockTrajectory> {
    if initial_n >= dim {
        return Err(Error::Dimension(format!("initial N = {initial_n} ≥ D = {dim}")));
    }
    let (t0, t1) = t_span;
    if sample_times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Domain("sample times must be ascending".into()));
    }
    if let (Some(&first), Some(&last)) = (sample_times.first(), sample_times.last()) {
        if first < t0 - 1e-12 || last > t1 + 1e-12 {
            return Err(Error::Range { t: last, lo: t0, hi: t1 });
        }
    }

    let w0 = profile.omega0();
    let parity = initial_n % 2;
    let packed_len = (dim - parity).div_ceil(2);
    let couple_minus: Vec<f64> = (0..packed_len)
        .map(|j| {
            let m = (parity + 2 * j) as f64;
            if m >= 2.0 { (m * (m - 1.0)).sqrt() } else { 0.0 }
        })
        .collect();
    let couple_plus: Vec<f64> = (0..packed_len)
        .map(|j| {
            let m = (parity + 2 * j) as f64;
            ((m + 1.0) * (m + 2.0)).sqrt()
        })
        .collect();

    let i0 = profile.omega_sq_integral(t0);
    let big_lambda = |t: f64| -> f64 {
        0.5 * w0 * (t - t0) + (profile.omega_sq_integral(t) - i0) / (2.0 * w0)
    };

    let rhs = |t: f64, y: &[f64], dy: &mut [f64]| {
        let lam = -(w0 / 4.0) * (1.0 - profile.omega_sq(t) / (w0 * w0));
        let (u, v) = {
            let phase = 2.0 * big_lambda(t);
            (phase.cos(), phase.sin())
        };
        for j in 0..packed_len {
            let (mut re, mut im) = (0.0, 0.0);
            if j > 0 {
                let (x, yy) = (y[2 * (j - 1)], y[2 * (j - 1) + 1]);
                // −i λ e^{2iΛ} c₋ d_{j−1}
                re += couple_minus[j] * (u * yy + v * x);
                im -= couple_minus[j] * (u * x - v * yy);
            }
            if j + 1 < packed_len {
                let (x, yy) = (y[2 * (j + 1)], y[2 * (j + 1) + 1]);
                // −i λ e^{−2iΛ} c₊ d_{j+1}
                re += couple_plus[j] * (u * yy - v * x);
                im -= couple_plus[j] * (u * x + v * yy);
            }
            dy[2 * j] = lam * re;
            dy[2 * j + 1] = lam * im;
        }
    };

    let mut y0 = vec![0.0; 2 * packed_len];
    y0[2 * ((initial_n - parity) / 2)] = 1.0;

    let opts = OdeOptions { rtol, atol: rtol * 1e-3, ..Default::default() };
    let mut solver = Dopri5::new(rhs, opts);
    let mut states: Vec<FockState> = Vec::with_capacity(sample_times.len());
    solver.solve_sampled(t0, &y0, t1, sample_times, |_idx, t, y| {
        let lam_t = big_lambda(t);
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        for j in 0..packed_len {
            let m = parity + 2 * j;
            let d = Complex64::new(y[2 * j], y[2 * j + 1]);
            amplitudes[m] = d * Complex64::from_polar(1.0, -(m as f64 + 0.5) * lam_t);
        }
        states.push(FockState { t, amplitudes });
    })?;

    for s in &states {
        let leak = s.top_band_mass();
        if leak > leak_tol {
            return Err(Error::Dimension(format!(
                "top-band mass {leak:.3e} exceeds {leak_tol:.1e} at t = {}; increase D beyond {dim}",
                s.t
            )));
        }
    }
    Ok(FockTrajectory { dim, initial_n, states })
}

/// Default truncation dimension for a given initial N.
pub fn default_dim(initial_n: usize) -> usize {
    (8 * initial_n + 100).max(200)
}

/// ⟨H(t)⟩ of a Fock state under the initial-representation Hamiltonian.
pub fn fock_energy(profile: &FrequencyProfile, state: &FockState) -> f64 {
    let w0 = profile.omega0();
    let w2 = profile.omega_sq(state.t);
    let lam0 = 0.5 * w0 * (1.0 + w2 / (w0 * w0));
    let lam = -(w0 / 4.0) * (1.0 - w2 / (w0 * w0));
    let c = &state.amplitudes;
    let diag: f64 = c.iter().enumerate().map(|(m, a)| (m as f64 + 0.5) * a.norm_sqr()).sum();
    let mut adag2 = Complex64::new(0.0, 0.0);
    for m in 0..c.len().saturating_sub(2) {
        adag2 += (((m + 1) * (m + 2)) as f64).sqrt() * c[m + 2].conj() * c[m];
    }
    lam0 * diag + 2.0 * lam * adag2.re
}

/// ⟨M_I(t)|N_rep⟩ by Gauss–Hermite quadrature of the position-space overlap.
///
/// The change of variable u = √(Re φ)·x leaves the two Hermite functions and
/// the oscillatory remainder e^{−i(Im φ/Re φ)u²} as the integrand; Hermite
/// *functions* keep every intermediate bounded regardless of order.
pub fn overlap_quadrature(
    sol: &ErmakovSolution,
    rep: Representation,
    n_rep: usize,
    m_inv: usize,
    t: f64,
    n_nodes: usize,
) -> Result<Complex64> {
    let p = sol.eval(t)?;
    let w0 = sol.omega_ref();
    let w_rep = match rep {
        Representation::Initial => w0,
        Representation::Diagonal => sol.profile().omega(t)?,
        Representation::Invariant => {
            // the invariant basis overlaps are Kronecker deltas by unitarity
            return Ok(if n_rep == m_inv {
                Complex64::from_polar(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            });
        }
    };
    let phi_re = 0.5 * (w_rep + w0 / (p.sigma * p.sigma));
    let phi_im = 0.5 * p.sigma_dot / p.sigma;
    if phi_re <= 0.0 {
        return Err(Error::Domain(format!("Re φ = {phi_re} ≤ 0 at t = {t}")));
    }
    let c_osc = phi_im / phi_re;
    let a = w0.sqrt() / (p.sigma * phi_re.sqrt());
    let b = (w_rep / phi_re).sqrt();

    let gh = gauss_hermite(n_nodes);
    let mut acc = Complex64::new(0.0, 0.0);
    for (&u, &wt) in gh.nodes.iter().zip(&gh.weights_scaled) {
        let phi_m = hermite_functions(m_inv, a * u);
        let phi_n = hermite_functions(n_rep, b * u);
        let osc = Complex64::from_polar(1.0, -c_osc * u * u);
        acc += wt * phi_m[m_inv] * phi_n[n_rep] * osc;
    }
    let pref = Complex64::from_polar(
        (w_rep * w0 / (p.sigma * p.sigma)).powf(0.25) / phi_re.sqrt(),
        (m_inv as f64 + 0.5) * w0 * p.tau,
    );
    Ok(pref * acc)
}

/// Spatial grid resolving ψ_N^{(I)} at time t: `ppw` points per local
/// wavelength, extending past the classical turning point.
pub fn wavefunction_grid(sol: &ErmakovSolution, n: usize, t: f64, ppw: usize) -> Result<Vec<f64>> {
    let p = sol.eval(t)?;
    let w0 = sol.omega_ref();
    let scale = p.sigma / w0.sqrt();
    let x_max = scale * ((2.0 * n as f64 + 1.0).sqrt() + 6.0);
    let k_hermite = (w0 * (2.0 * n as f64 + 1.0)).sqrt() / p.sigma;
    let k_phase = (p.sigma_dot / p.sigma).abs() * x_max;
    let dx = std::f64::consts::TAU / (ppw as f64 * (k_hermite + k_phase).max(1.0 / scale));
    let half = (x_max / dx).ceil() as usize;
    Ok((-(half as isize)..=half as isize).map(|i| i as f64 * dx).collect())
}

/// ψ_N^{(I)}(x, t) on a grid.
pub fn invariant_wavefunction(
    sol: &ErmakovSolution,
    n: usize,
    t: f64,
    xs: &[f64],
) -> Result<Vec<Complex64>> {
    let p = sol.eval(t)?;
    let w0 = sol.omega_ref();
    let pref = Complex64::from_polar(
        w0.powf(0.25) / p.sigma.sqrt(),
        -(n as f64 + 0.5) * w0 * p.tau,
    );
    Ok(xs
        .iter()
        .map(|&x| {
            let phi = hermite_functions(n, w0.sqrt() * x / p.sigma);
            let gauge = Complex64::from_polar(1.0, 0.5 * p.sigma_dot * x * x / p.sigma);
            pref * gauge * phi[n]
        })
        .collect())
}

/// Consistency report for ψ_N^{(I)}: L² normalization error, relative
/// Schrödinger residual, worst cross-overlap with other modes.
#[derive(Debug, Clone, Serialize)]
pub struct WavefunctionReport {
    pub n: usize,
    pub t: f64,
    pub norm_error: f64,
    pub schrodinger_residual: f64,
    pub max_cross_overlap: f64,
}

pub fn check_invariant_wavefunction(
    sol: &ErmakovSolution,
    n: usize,
    t: f64,
    xs: &[f64],
) -> Result<WavefunctionReport> {
    let dx = xs[1] - xs[0];
    let psi = invariant_wavefunction(sol, n, t, xs)?;

    let norm: f64 = psi.iter().map(|c| c.norm_sqr()).sum::<f64>() * dx;
    let norm_error = (norm - 1.0).abs();

    // i ∂_t ψ by centered time differences
    let dt = 3e-6;
    let psi_p = invariant_wavefunction(sol, n, t + dt, xs)?;
    let psi_m = invariant_wavefunction(sol, n, t - dt, xs)?;

    // Hψ = −½ψ'' + ½ω²x²ψ with a 4th-order stencil
    let w2 = sol.profile().omega_sq(t);
    let mut resid_sq = 0.0;
    let mut h_sq = 0.0;
    for i in 2..xs.len() - 2 {
        let lap = (-psi[i - 2] + 16.0 * psi[i - 1] - 30.0 * psi[i] + 16.0 * psi[i + 1]
            - psi[i + 2])
            / (12.0 * dx * dx);
        let h_psi = -0.5 * lap + 0.5 * w2 * xs[i] * xs[i] * psi[i];
        let dpsi_dt = (psi_p[i] - psi_m[i]) / (2.0 * dt);
        let r = Complex64::new(0.0, 1.0) * dpsi_dt - h_psi;
        resid_sq += r.norm_sqr();
        h_sq += h_psi.norm_sqr();
    }
    let schrodinger_residual = (resid_sq / h_sq).sqrt();

    // orthogonality against neighbors of the same parity
    let mut max_cross: f64 = 0.0;
    for m in (0..=n + 4).filter(|&m| m != n) {
        let psi_m_fn = invariant_wavefunction(sol, m, t, xs)?;
        let overlap: Complex64 =
            psi.iter().zip(&psi_m_fn).map(|(a, b)| a.conj() * b).sum::<Complex64>() * dx;
        max_cross = max_cross.max(overlap.norm());
    }

    Ok(WavefunctionReport {
        n,
        t,
        norm_error,
        schrodinger_residual,
        max_cross_overlap: max_cross,
    })
}

/// One oracle check line for the JSON report.
#[derive(Debug, Clone, Serialize)]
pub struct OracleCheck {
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl OracleCheck {
    pub fn new(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        let pass = measured.is_finite() && measured <= tolerance;
        Self { name: name.into(), measured, tolerance, pass }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub checks: Vec<OracleCheck>,
}

impl OracleReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Desk-scale oracle suite: Fock evolution vs closed forms, quadrature vs
/// matrix elements, and wavefunction residuals, on the profile behind `sol`.
///
/// Enforces N ≤ 8 and D ≤ 400; meant for validation runs, not production
/// tables.
pub fn run_suite(
    sol: &ErmakovSolution,
    n_values: &[usize],
    dim: usize,
    rtol: f64,
    leak_tol: f64,
) -> Result<OracleReport> {
    use crate::representations::bogoliubov;
    use crate::transitions::{closed_form_mean, matrix_element, probability};

    if n_values.iter().any(|&n| n > 8) {
        return Err(Error::Domain("oracle suite enforces N ≤ 8".into()));
    }
    if dim > 400 {
        return Err(Error::Domain("oracle suite enforces D ≤ 400".into()));
    }
    let (t0, t1) = sol.t_span();
    let span = t1 - t0;
    let samples: Vec<f64> = (0..12).map(|i| t0 + span * (0.05 + 0.95 * i as f64 / 11.0)).collect();

    let mut worst_norm = 0.0f64;
    let mut worst_entry = 0.0f64;
    let mut worst_mean = 0.0f64;
    let mut worst_energy = 0.0f64;
    let mut worst_parity = 0.0f64;
    for &n in n_values {
        let traj = evolve_fock(sol.profile(), n, (t0, t1), dim, rtol, leak_tol, &samples)?;
        for s in &traj.states {
            worst_norm = worst_norm.max((s.norm_sq() - 1.0).abs());
            let bog = bogoliubov(sol, Representation::Initial, s.t)?;
            for m in 0..=60.min(dim - 1) {
                let p_fock = s.amplitudes[m].norm_sqr();
                if (m + n) % 2 == 1 {
                    worst_parity = worst_parity.max(p_fock.sqrt());
                } else {
                    worst_entry = worst_entry.max((p_fock - probability(&bog, n, m)).abs());
                }
            }
            let closed = closed_form_mean(&bog, n);
            worst_mean = worst_mean.max((s.occupation() - closed).abs() / closed.max(1.0));
            let e_closed = crate::thermo::energy(sol, n, s.t)?.invariant;
            worst_energy = worst_energy
                .max((fock_energy(sol.profile(), s) - e_closed).abs() / e_closed.abs().max(1.0));
        }
    }

    let mut worst_quad = 0.0f64;
    let quad_times: Vec<f64> = (1..=4).map(|i| t0 + span * i as f64 / 5.0).collect();
    for &t in &quad_times {
        for rep in [Representation::Initial, Representation::Diagonal] {
            let bog = bogoliubov(sol, rep, t)?;
            for n in 0..=6usize {
                for m in (n % 2..=24).step_by(2) {
                    let o = overlap_quadrature(sol, rep, n, m, t, 320)?;
                    let el = matrix_element(&bog, m, n).conj();
                    worst_quad =
                        worst_quad.max((o - el).norm() / el.norm().max(1e-4));
                }
            }
        }
    }

    let mut worst_wf = 0.0f64;
    for n in 0..=2usize {
        for &t in &[t0 + 0.3 * span, t0 + 0.5 * span, t0 + 0.7 * span] {
            let xs = wavefunction_grid(sol, n, t, 64)?;
            let rep = check_invariant_wavefunction(sol, n, t, &xs)?;
            worst_wf = worst_wf.max(rep.schrodinger_residual);
        }
    }

    Ok(OracleReport {
        checks: vec![
            OracleCheck::new("fock_norm_conservation", worst_norm, 1e-8),
            OracleCheck::new("fock_vs_closed_form_entrywise", worst_entry, 1e-6),
            OracleCheck::new("fock_parity_leakage", worst_parity, 1e-10),
            OracleCheck::new("fock_mean_occupation", worst_mean, 1e-6),
            OracleCheck::new("fock_energy_vs_closed_form", worst_energy, 1e-6),
            OracleCheck::new("quadrature_vs_matrix_element", worst_quad, 1e-7),
            OracleCheck::new("invariant_wavefunction_residual", worst_wf, 1e-4),
        ],
    })
}
