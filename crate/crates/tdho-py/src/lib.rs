//! Python bindings: profiles, Ermakov solutions, Bogoliubov coefficients,
//! transition tables, thermodynamic series, entropies, and the Fock oracle.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;
use tdho::entropy_temp::{diagonal_entropy_row, entropy_rate, mode_temperatures};
use tdho::representations::{bogoliubov, Representation};
use tdho::transitions::probability_table;

fn err(e: tdho::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_rep(s: &str) -> PyResult<Representation> {
    match s {
        "initial" => Ok(Representation::Initial),
        "diagonal" => Ok(Representation::Diagonal),
        "invariant" => Ok(Representation::Invariant),
        other => Err(PyValueError::new_err(format!(
            "unknown representation '{other}' (initial|diagonal|invariant)"
        ))),
    }
}

/// Frequency profile ω(t).
#[pyclass(name = "FrequencyProfile")]
#[derive(Clone)]
struct PyProfile {
    inner: tdho::FrequencyProfile,
}

#[pymethods]
impl PyProfile {
    #[staticmethod]
    fn constant(omega0: f64) -> PyResult<Self> {
        Ok(Self { inner: tdho::FrequencyProfile::constant(omega0).map_err(err)? })
    }

    #[staticmethod]
    fn tanh_step(omega0: f64, omega_f: f64, kappa: f64) -> PyResult<Self> {
        Ok(Self { inner: tdho::FrequencyProfile::tanh_step(omega0, omega_f, kappa).map_err(err)? })
    }

    #[staticmethod]
    fn sech_bump(omega0: f64, omega_c: f64, kappa: f64) -> PyResult<Self> {
        Ok(Self { inner: tdho::FrequencyProfile::sech_bump(omega0, omega_c, kappa).map_err(err)? })
    }

    #[staticmethod]
    fn tabulated(samples: Vec<(f64, f64)>) -> PyResult<Self> {
        Ok(Self { inner: tdho::FrequencyProfile::tabulated(samples).map_err(err)? })
    }

    fn omega(&self, t: f64) -> PyResult<f64> {
        self.inner.omega(t).map_err(err)
    }

    fn omega_dot(&self, t: f64) -> PyResult<f64> {
        self.inner.omega_dot(t).map_err(err)
    }

    fn omega0(&self) -> f64 {
        self.inner.omega0()
    }
}

/// Dense Ermakov solution with everything computed from it.
#[pyclass(name = "ErmakovSolution")]
struct PySolution {
    inner: tdho::ErmakovSolution,
}

#[pymethods]
impl PySolution {
    /// (sigma, sigma_dot, tau) at time t.
    fn eval(&self, t: f64) -> PyResult<(f64, f64, f64)> {
        let p = self.inner.eval(t).map_err(err)?;
        Ok((p.sigma, p.sigma_dot, p.tau))
    }

    fn omega_ref(&self) -> f64 {
        self.inner.omega_ref()
    }

    fn t_span(&self) -> (f64, f64) {
        self.inner.t_span()
    }

    fn classical_propagator(&self, t: f64) -> PyResult<[[f64; 2]; 2]> {
        self.inner.classical_propagator(t).map_err(err)
    }

    /// dict with alpha, beta (complex), theta_alpha, theta_beta, r.
    fn bogoliubov<'py>(&self, py: Python<'py>, rep: &str, t: f64) -> PyResult<Bound<'py, PyDict>> {
        let b = bogoliubov(&self.inner, parse_rep(rep)?, t).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("alpha", num_complex::Complex64::new(b.alpha.re, b.alpha.im))?;
        d.set_item("beta", num_complex::Complex64::new(b.beta.re, b.beta.im))?;
        d.set_item("theta_alpha", b.theta_alpha)?;
        d.set_item("theta_beta", b.theta_beta)?;
        d.set_item("r", b.r)?;
        Ok(d)
    }

    /// (m_values, rows) with rows[i][j] = P_{m_values[j]}(N; times[i]).
    #[pyo3(signature = (rep, n, times, tail_tol = 1e-10, m_max = 2000))]
    fn probability_table(
        &self,
        rep: &str,
        n: usize,
        times: Vec<f64>,
        tail_tol: f64,
        m_max: usize,
    ) -> PyResult<(Vec<usize>, Vec<Vec<f64>>)> {
        let table = probability_table(&self.inner, parse_rep(rep)?, n, &times, tail_tol, m_max)
            .map_err(err)?;
        Ok((table.m_values, table.probs))
    }

    /// (N0, N_omega) mean occupations at time t.
    fn occupations(&self, n: usize, t: f64) -> PyResult<(f64, f64)> {
        tdho::thermo::occupations(&self.inner, n, t).map_err(err)
    }

    fn energy(&self, n: usize, t: f64) -> PyResult<f64> {
        Ok(tdho::thermo::energy(&self.inner, n, t).map_err(err)?.invariant)
    }

    /// dict of the six heat/work rates and edot at time t.
    fn heat_work_rates<'py>(
        &self,
        py: Python<'py>,
        n: usize,
        t: f64,
    ) -> PyResult<Bound<'py, PyDict>> {
        let r = tdho::thermo::heat_work_rates(&self.inner, n, t).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("qdot_0", r.qdot_0)?;
        d.set_item("wdot_0", r.wdot_0)?;
        d.set_item("qdot_omega", r.qdot_omega)?;
        d.set_item("wdot_omega", r.wdot_omega)?;
        d.set_item("qdot_inv", r.qdot_inv)?;
        d.set_item("wdot_inv", r.wdot_inv)?;
        d.set_item("edot", r.edot)?;
        Ok(d)
    }

    /// Diagonal entropy S_d(t) series over `times` for one representation.
    #[pyo3(signature = (rep, n, times, tail_tol = 1e-10))]
    fn diagonal_entropy_series(
        &self,
        rep: &str,
        n: usize,
        times: Vec<f64>,
        tail_tol: f64,
    ) -> PyResult<Vec<f64>> {
        let rep = parse_rep(rep)?;
        if rep == Representation::Invariant {
            return Ok(vec![0.0; times.len()]);
        }
        let table =
            probability_table(&self.inner, rep, n, &times, tail_tol, 2000).map_err(err)?;
        Ok((0..times.len()).map(|i| diagonal_entropy_row(table.row(i))).collect())
    }

    /// Per-mode temperatures at one time: dict of K, T_K, T_K_half, T_K_th
    /// (None where undefined).
    #[pyo3(signature = (rep, n, t, tail_tol = 1e-10))]
    fn mode_temperatures<'py>(
        &self,
        py: Python<'py>,
        rep: &str,
        n: usize,
        t: f64,
        tail_tol: f64,
    ) -> PyResult<Bound<'py, PyDict>> {
        let rep = parse_rep(rep)?;
        let table = probability_table(&self.inner, rep, n, &[t], tail_tol, 2000).map_err(err)?;
        let bog = bogoliubov(&self.inner, rep, t).map_err(err)?;
        let w_rep = match rep {
            Representation::Initial => self.inner.omega_ref(),
            _ => self.inner.profile().omega(t).map_err(err)?,
        };
        let temps = mode_temperatures(&table, &bog, w_rep, t).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("K", temps.k_values)?;
        d.set_item("T_K", temps.t_k)?;
        d.set_item("T_K_half", temps.t_k_half)?;
        d.set_item("T_K_th", temps.t_k_th)?;
        Ok(d)
    }

    /// Ṡ_d at each index of a uniform `times` grid.
    #[pyo3(signature = (rep, n, times, tail_tol = 1e-10))]
    fn entropy_rate_series(
        &self,
        rep: &str,
        n: usize,
        times: Vec<f64>,
        tail_tol: f64,
    ) -> PyResult<Vec<f64>> {
        let rep = parse_rep(rep)?;
        if rep == Representation::Invariant {
            return Ok(vec![0.0; times.len()]);
        }
        let table =
            probability_table(&self.inner, rep, n, &times, tail_tol, 2000).map_err(err)?;
        Ok((0..times.len()).map(|i| entropy_rate(&table, i)).collect())
    }
}

/// Solve the Ermakov system over [t_min, t_max] (initial conditions at the
/// left end, τ(0) = 0).
#[pyfunction]
#[pyo3(signature = (profile, t_min, t_max, tol = 1e-10))]
fn solve(profile: &PyProfile, t_min: f64, t_max: f64, tol: f64) -> PyResult<PySolution> {
    Ok(PySolution {
        inner: tdho::ermakov::solve(&profile.inner, (t_min, t_max), tol).map_err(err)?,
    })
}

/// Analytic sech-bump σ(t) (integer Legendre degree), normalized to 1 in the
/// asymptotic past.
#[pyfunction]
fn analytic_sigma_sech(omega0: f64, omega_c: f64, kappa: f64, t: f64) -> PyResult<f64> {
    tdho::ermakov::analytic_sigma_sech(omega0, omega_c, kappa, t).map_err(err)
}

/// Truncated-Fock oracle evolution; returns |c_M|² rows at the sample times.
#[pyfunction]
#[pyo3(signature = (profile, n, t_min, t_max, samples, dim = 200, rtol = 1e-10, leak_tol = 1e-8))]
#[allow(clippy::too_many_arguments)]
fn evolve_fock_probabilities(
    profile: &PyProfile,
    n: usize,
    t_min: f64,
    t_max: f64,
    samples: Vec<f64>,
    dim: usize,
    rtol: f64,
    leak_tol: f64,
) -> PyResult<Vec<Vec<f64>>> {
    let traj =
        tdho::oracle::evolve_fock(&profile.inner, n, (t_min, t_max), dim, rtol, leak_tol, &samples)
            .map_err(err)?;
    Ok(traj
        .states
        .iter()
        .map(|s| s.amplitudes.iter().map(|c| c.norm_sqr()).collect())
        .collect())
}

#[pymodule]
fn tdho_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyProfile>()?;
    m.add_class::<PySolution>()?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(analytic_sigma_sech, m)?)?;
    m.add_function(wrap_pyfunction!(evolve_fock_probabilities, m)?)?;
    Ok(())
}
