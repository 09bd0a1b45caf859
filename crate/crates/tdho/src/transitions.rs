//! Transition matrix elements and measurement probabilities P_M(N;t).
//!
//! The amplitude ⟨M_rep|N_I(t)⟩ is assembled in log-domain from the
//! terminating-hypergeometric Legendre kernel; probabilities are its squared
//! modulus. Tables span hundreds of orders of magnitude, so nothing is
//! exponentiated until the final assembly.

use crate::error::{Error, Result};
use crate::ermakov::ErmakovSolution;
use crate::representations::{bogoliubov, BogoliubovSet, Representation};
use crate::specfun::{legendre_from_alpha_beta, log_factorial, LogComplex};
use num_complex::Complex64;
use rayon::prelude::*;

/// Hard ceiling for adaptive M-range growth.
pub const DEFAULT_M_CAP: usize = 2000;

/// P_M(N;t) for one representation over a mode range of fixed parity.
#[derive(Debug, Clone)]
pub struct TransitionTable {
    pub representation: Representation,
    pub initial_n: usize,
    pub times: Vec<f64>,
    /// included modes, same parity as N, ascending
    pub m_values: Vec<usize>,
    /// probs[i][j] = P_{m_values[j]}(N; times[i])
    pub probs: Vec<Vec<f64>>,
    /// estimated truncation remainder per time
    pub tail_mass: Vec<f64>,
}

impl TransitionTable {
    pub fn row(&self, i: usize) -> &[f64] {
        &self.probs[i]
    }

    pub fn row_sum(&self, i: usize) -> f64 {
        self.probs[i].iter().sum()
    }

    /// Σ M·P_M at time index i.
    pub fn mean_occupation(&self, i: usize) -> f64 {
        self.m_values
            .iter()
            .zip(&self.probs[i])
            .map(|(&m, &p)| m as f64 * p)
            .sum()
    }

    pub fn time_index(&self, t: f64) -> Option<usize> {
        self.times
            .iter()
            .position(|&x| (x - t).abs() <= 1e-12 * t.abs().max(1.0))
    }
}

/// Off-diagonal density-matrix block P_{I,J}(N;t) = C_IN C̄_JN.
#[derive(Debug, Clone)]
pub struct DensityBlock {
    pub representation: Representation,
    pub initial_n: usize,
    pub t: f64,
    pub modes: Vec<usize>,
    /// row-major (modes.len() × modes.len()), Hermitian by construction
    pub entries: Vec<Complex64>,
}

impl DensityBlock {
    pub fn dim(&self) -> usize {
        self.modes.len()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.modes.len() + j]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.get(i, i).re).sum()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..=i {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }
}

/// log|⟨M_rep|N_I⟩| and its phase, or None for a parity mismatch.
///
/// ⟨M_rep|N_I⟩ = √(N!/M!) e^{i[(θ_α/2)(N+M+1) + (θ_β/2)(M−N)]}
///               |α|^{−1/2} P^{(M−N)/2}_{(M+N)/2}(1/|α|);
/// the (−1)^{(M−N)/2} of the main-text form is absorbed by the Ferrers
/// order-reflection identity, and the sign convention is pinned by agreement
/// with the Gauss–Hermite overlap oracle.
pub fn matrix_element_log(bog: &BogoliubovSet, n: usize, m: usize) -> Option<LogComplex> {
    if (n + m) % 2 == 1 {
        return None;
    }
    let log_alpha = bog.alpha.norm().ln().max(0.0);
    let beta_sq = bog.beta.norm_sqr();
    let legendre = legendre_from_alpha_beta(m, n, log_alpha, beta_sq).ok()?;
    if legendre.is_zero() {
        return Some(LogComplex::ZERO);
    }
    let log_mod = 0.5 * (log_factorial(n) - log_factorial(m)) - 0.5 * log_alpha;
    let phase = 0.5 * bog.theta_alpha * (n + m + 1) as f64
        + 0.5 * bog.theta_beta * (m as f64 - n as f64);
    Some(legendre.scale_log(log_mod).rotate(phase))
}

/// ⟨M_rep|N_I⟩ as a complex number (0 for parity mismatch or underflow).
pub fn matrix_element(bog: &BogoliubovSet, n: usize, m: usize) -> Complex64 {
    matrix_element_log(bog, n, m)
        .map(LogComplex::to_complex)
        .unwrap_or(Complex64::new(0.0, 0.0))
}

/// ln P_M(N) for one time, or None for parity mismatch.
pub fn probability_log(bog: &BogoliubovSet, n: usize, m: usize) -> Option<f64> {
    matrix_element_log(bog, n, m).map(|lc| 2.0 * lc.log_modulus)
}

/// P_M(N) at one time.
pub fn probability(bog: &BogoliubovSet, n: usize, m: usize) -> f64 {
    probability_log(bog, n, m).map(f64::exp).unwrap_or(0.0)
}

/// Closed-form mean occupation (|α|²+|β|²)N + |β|².
pub fn closed_form_mean(bog: &BogoliubovSet, n: usize) -> f64 {
    (bog.alpha.norm_sqr() + bog.beta.norm_sqr()) * n as f64 + bog.beta.norm_sqr()
}

/// Large-mode asymptotic P_I ≈ (I!/(N!(I/2)!²)) |α|^{−1} (|β|/2|α|)^I.
pub fn large_mode_probability(bog: &BogoliubovSet, n: usize, i: usize) -> Result<f64> {
    if i < (2 * n).max(20) {
        return Err(Error::Domain(format!(
            "large-mode asymptotic needs I ≥ max(2N, 20), got I = {i}, N = {n}"
        )));
    }
    if (i + n) % 2 == 1 {
        return Err(Error::Parity { n, m: i });
    }
    let alpha_mod = bog.alpha.norm();
    let beta_mod = bog.beta.norm();
    if beta_mod == 0.0 {
        return Ok(0.0);
    }
    let log_p = log_factorial(i) - log_factorial(n) - 2.0 * log_factorial(i / 2)
        - alpha_mod.ln()
        + i as f64 * (beta_mod.ln() - (2.0 * alpha_mod).ln());
    Ok(log_p.exp())
}

/// Required mode count so the geometric tail beyond it is below `tail_tol`.
fn tail_is_small(probs: &[f64], ratio: f64, tail_tol: f64) -> bool {
    let last = *probs.last().unwrap_or(&1.0);
    if ratio >= 1.0 {
        return false;
    }
    last * ratio / (1.0 - ratio) < tail_tol
}

/// Adaptive P_M(N;t) table over `times`.
///
/// The mode range grows geometrically (×1.5) until the estimated tail falls
/// below `tail_tol` at every time, or the cap is reached; hitting the cap is
/// recorded in `tail_mass`, not an error.
pub fn probability_table(
    sol: &ErmakovSolution,
    rep: Representation,
    n: usize,
    times: &[f64],
    tail_tol: f64,
    m_cap: usize,
) -> Result<TransitionTable> {
    if !(1e-12..=1e-3).contains(&tail_tol) {
        return Err(Error::Domain(format!("tail_tol {tail_tol} outside [1e-12, 1e-3]")));
    }
    if rep == Representation::Invariant {
        // conserved occupation: point mass at N for all t
        let m_values = vec![n];
        let probs = vec![vec![1.0]; times.len()];
        return Ok(TransitionTable {
            representation: rep,
            initial_n: n,
            times: times.to_vec(),
            m_values,
            probs,
            tail_mass: vec![0.0; times.len()],
        });
    }

    let bogs: Vec<BogoliubovSet> =
        times.iter().map(|&t| bogoliubov(sol, rep, t)).collect::<Result<_>>()?;

    // grow the shared range until every time's tail estimate is below tol
    let parity = n % 2;
    let mut m_max = (2 * n + 40).min(m_cap);
    let m_needed = loop {
        let mut ok = true;
        for bog in &bogs {
            let ratio = bog.beta.norm_sqr() / bog.alpha.norm_sqr();
            // probe only the last included mode
            let last_m = m_max - (m_max + parity) % 2;
            let p_last = probability(bog, n, last_m.max(parity));
            if !tail_is_small(&[p_last], ratio, tail_tol) {
                ok = false;
                break;
            }
        }
        if ok || m_max >= m_cap {
            break m_max.min(m_cap);
        }
        m_max = ((m_max as f64 * 1.5) as usize).min(m_cap);
    };

    let m_values: Vec<usize> = (0..=m_needed).filter(|m| m % 2 == parity).collect();
    let rows: Vec<(Vec<f64>, f64)> = bogs
        .par_iter()
        .map(|bog| {
            let row: Vec<f64> = m_values.iter().map(|&m| probability(bog, n, m)).collect();
            let ratio = bog.beta.norm_sqr() / bog.alpha.norm_sqr();
            let last = *row.last().unwrap_or(&0.0);
            let tail = if ratio < 1.0 { last * ratio / (1.0 - ratio) } else { f64::INFINITY };
            (row, tail)
        })
        .collect();

    let (probs, tail_mass): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
    Ok(TransitionTable {
        representation: rep,
        initial_n: n,
        times: times.to_vec(),
        m_values,
        probs,
        tail_mass,
    })
}

/// Pure-state density block over `modes` at one time.
pub fn density_block(
    sol: &ErmakovSolution,
    rep: Representation,
    n: usize,
    t: f64,
    modes: &[usize],
) -> Result<DensityBlock> {
    let bog = bogoliubov(sol, rep, t)?;
    let v: Vec<Complex64> = modes.iter().map(|&m| matrix_element(&bog, n, m)).collect();
    let dim = modes.len();
    let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            entries[i * dim + j] = v[i] * v[j].conj();
        }
    }
    Ok(DensityBlock { representation: rep, initial_n: n, t, modes: modes.to_vec(), entries })
}
