//! Embedded Dormand–Prince 5(4) integrator with cubic-Hermite dense output.
//!
//! One integrator serves both the Ermakov system and the truncated-Fock
//! Schrödinger evolution, so the state is a plain `Vec<f64>` and complex
//! vectors are packed as interleaved re/im pairs by the caller.

use crate::error::{Error, Result};

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    pub h_max: f64,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self { rtol: 1e-10, atol: 1e-12, max_steps: 50_000_000, h_max: f64::INFINITY }
    }
}

/// An accepted step: state and derivative at its left endpoint.
#[derive(Debug, Clone)]
pub struct StepRecord {
    pub t: f64,
    pub y: Vec<f64>,
    pub dy: Vec<f64>,
}

/// Dense solution as accepted steps plus the final point.
#[derive(Debug, Clone)]
pub struct DenseOutput {
    pub steps: Vec<StepRecord>,
    pub forward: bool,
}

impl DenseOutput {
    pub fn t_start(&self) -> f64 {
        self.steps.first().map(|s| s.t).unwrap_or(f64::NAN)
    }

    pub fn t_end(&self) -> f64 {
        self.steps.last().map(|s| s.t).unwrap_or(f64::NAN)
    }

    fn segment(&self, t: f64) -> Result<usize> {
        let (lo, hi) = if self.forward {
            (self.t_start(), self.t_end())
        } else {
            (self.t_end(), self.t_start())
        };
        let tol = 1e-12 * (hi - lo).abs().max(1.0);
        if t < lo - tol || t > hi + tol {
            return Err(Error::Range { t, lo, hi });
        }
        let cmp = |probe: f64| {
            if self.forward {
                probe.total_cmp(&t)
            } else {
                t.total_cmp(&probe)
            }
        };
        let idx = self.steps.partition_point(|s| cmp(s.t) == std::cmp::Ordering::Less);
        Ok(idx.clamp(1, self.steps.len() - 1) - 1)
    }

    /// Cubic Hermite interpolation of component `k` (value, derivative).
    pub fn eval_component(&self, t: f64, k: usize) -> Result<(f64, f64)> {
        let i = self.segment(t)?;
        let (a, b) = (&self.steps[i], &self.steps[i + 1]);
        let h = b.t - a.t;
        let s = (t - a.t) / h;
        let (y0, y1) = (a.y[k], b.y[k]);
        let (m0, m1) = (a.dy[k] * h, b.dy[k] * h);
        let s2 = s * s;
        let s3 = s2 * s;
        let v = y0 * (2.0 * s3 - 3.0 * s2 + 1.0)
            + m0 * (s3 - 2.0 * s2 + s)
            + y1 * (-2.0 * s3 + 3.0 * s2)
            + m1 * (s3 - s2);
        let dv = (y0 * (6.0 * s2 - 6.0 * s)
            + m0 * (3.0 * s2 - 4.0 * s + 1.0)
            + y1 * (-6.0 * s2 + 6.0 * s)
            + m1 * (3.0 * s2 - 2.0 * s))
            / h;
        Ok((v, dv))
    }
}

pub struct Dopri5<'a, F>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    pub rhs: F,
    pub opts: OdeOptions,
    /// Called after every accepted step; returning an error aborts.
    pub inspect: Option<&'a mut dyn FnMut(f64, &[f64]) -> Result<()>>,
}

impl<'a, F> Dopri5<'a, F>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    pub fn new(rhs: F, opts: OdeOptions) -> Self {
        Self { rhs, opts, inspect: None }
    }

    /// Integrate from (t0, y0) to t_end, recording every accepted step.
    pub fn solve_dense(&mut self, t0: f64, y0: &[f64], t_end: f64) -> Result<DenseOutput> {
        let mut steps = Vec::new();
        let record = &mut |t: f64, y: &[f64], dy: &[f64]| {
            steps.push(StepRecord { t, y: y.to_vec(), dy: dy.to_vec() });
        };
        self.drive(t0, y0, t_end, &[], record, &mut |_, _, _| {})?;
        Ok(DenseOutput { steps, forward: t_end >= t0 })
    }

    /// Integrate and interpolate only at `samples` (must be sorted in the
    /// direction of integration); avoids storing the whole trajectory.
    pub fn solve_sampled(
        &mut self,
        t0: f64,
        y0: &[f64],
        t_end: f64,
        samples: &[f64],
        mut on_sample: impl FnMut(usize, f64, &[f64]),
    ) -> Result<Vec<f64>> {
        let mut finals: Vec<f64> = Vec::new();
        let sink = &mut |idx: usize, t: f64, y: &[f64]| on_sample(idx, t, y);
        let record = &mut |_t: f64, y: &[f64], _dy: &[f64]| {
            finals.clear();
            finals.extend_from_slice(y);
        };
        self.drive(t0, y0, t_end, samples, record, sink)?;
        Ok(finals)
    }

    fn drive(
        &mut self,
        t0: f64,
        y0: &[f64],
        t_end: f64,
        samples: &[f64],
        record: &mut dyn FnMut(f64, &[f64], &[f64]),
        on_sample: &mut dyn FnMut(usize, f64, &[f64]),
    ) -> Result<()> {
        let n = y0.len();
        let dir = if t_end >= t0 { 1.0 } else { -1.0 };
        let span = (t_end - t0).abs();
        if span == 0.0 {
            let mut k1 = vec![0.0; n];
            (self.rhs)(t0, y0, &mut k1);
            record(t0, y0, &k1);
            return Ok(());
        }

        let mut t = t0;
        let mut y = y0.to_vec();
        let mut k1 = vec![0.0; n];
        (self.rhs)(t, &y, &mut k1);
        record(t, &y, &k1);

        let mut sample_idx = 0usize;
        // emit samples that coincide with the start point
        while sample_idx < samples.len() && (samples[sample_idx] - t0).abs() <= 1e-14 * span {
            on_sample(sample_idx, t0, &y);
            sample_idx += 1;
        }

        let mut h = dir * self.initial_step(t0, &y, &k1, span);
        let (mut k2, mut k3, mut k4, mut k5, mut k6, mut k7) = (
            vec![0.0; n],
            vec![0.0; n],
            vec![0.0; n],
            vec![0.0; n],
            vec![0.0; n],
            vec![0.0; n],
        );
        let mut y_stage = vec![0.0; n];
        let mut y_new = vec![0.0; n];
        let mut err_old: f64 = 1e-4;

        for _step in 0..self.opts.max_steps {
            if h.abs() < 1e-14 * t.abs().max(1.0) {
                return Err(Error::Stiffness { t });
            }
            let remaining = t_end - t;
            if h.abs() > remaining.abs() {
                h = remaining;
            }
            let last = (t + h - t_end).abs() <= f64::EPSILON * span;

            // stages
            for i in 0..n {
                y_stage[i] = y[i] + h * A21 * k1[i];
            }
            (self.rhs)(t + C2 * h, &y_stage, &mut k2);
            for i in 0..n {
                y_stage[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
            }
            (self.rhs)(t + C3 * h, &y_stage, &mut k3);
            for i in 0..n {
                y_stage[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
            }
            (self.rhs)(t + C4 * h, &y_stage, &mut k4);
            for i in 0..n {
                y_stage[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
            }
            (self.rhs)(t + C5 * h, &y_stage, &mut k5);
            for i in 0..n {
                y_stage[i] = y[i]
                    + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
            }
            (self.rhs)(t + h, &y_stage, &mut k6);
            for i in 0..n {
                y_new[i] =
                    y[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
            }
            (self.rhs)(t + h, &y_new, &mut k7);

            // embedded error estimate
            let mut err_sq = 0.0;
            for i in 0..n {
                let e = h
                    * (E1 * k1[i]
                        + E3 * k3[i]
                        + E4 * k4[i]
                        + E5 * k5[i]
                        + E6 * k6[i]
                        + E7 * k7[i]);
                let scale = self.opts.atol + self.opts.rtol * y[i].abs().max(y_new[i].abs());
                err_sq += (e / scale) * (e / scale);
            }
            let err = (err_sq / n as f64).sqrt().max(1e-30);

            if err <= 1.0 {
                // accept (PI controller, Hairer's constants)
                let t_new = if last { t_end } else { t + h };
                // interpolate pending samples inside (t, t_new]
                while sample_idx < samples.len() {
                    let ts = samples[sample_idx];
                    let inside = if dir > 0.0 { ts <= t_new + 1e-14 * span } else { ts >= t_new - 1e-14 * span };
                    if !inside {
                        break;
                    }
                    let s = (ts - t) / h;
                    let s2 = s * s;
                    let s3 = s2 * s;
                    let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
                    let h10 = s3 - 2.0 * s2 + s;
                    let h01 = -2.0 * s3 + 3.0 * s2;
                    let h11 = s3 - s2;
                    for i in 0..n {
                        y_stage[i] =
                            y[i] * h00 + h * k1[i] * h10 + y_new[i] * h01 + h * k7[i] * h11;
                    }
                    on_sample(sample_idx, ts, &y_stage);
                    sample_idx += 1;
                }

                t = t_new;
                std::mem::swap(&mut y, &mut y_new);
                std::mem::swap(&mut k1, &mut k7); // FSAL
                record(t, &y, &k1);
                if let Some(cb) = self.inspect.as_mut() {
                    cb(t, &y)?;
                }
                if last {
                    return Ok(());
                }
                let fac = 0.9 * err.powf(-0.7 / 5.0) * err_old.powf(0.4 / 5.0);
                h *= fac.clamp(0.2, 5.0);
                if h.abs() > self.opts.h_max {
                    h = dir * self.opts.h_max;
                }
                err_old = err;
            } else {
                let fac = (0.9 * err.powf(-0.2)).clamp(0.2, 1.0);
                h *= fac;
            }
        }
        Err(Error::Integration { t, reason: "maximum step count exceeded".into() })
    }

    fn initial_step(&mut self, t0: f64, y0: &[f64], k1: &[f64], span: f64) -> f64 {
        let n = y0.len();
        let mut d0 = 0.0;
        let mut d1 = 0.0;
        for i in 0..n {
            let sc = self.opts.atol + self.opts.rtol * y0[i].abs();
            d0 += (y0[i] / sc) * (y0[i] / sc);
            d1 += (k1[i] / sc) * (k1[i] / sc);
        }
        let d0 = (d0 / n as f64).sqrt();
        let d1 = (d1 / n as f64).sqrt();
        let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        let h0 = h0.min(0.1 * span);

        // one Euler probe to estimate the second derivative scale
        let mut y1 = vec![0.0; n];
        for i in 0..n {
            y1[i] = y0[i] + h0 * k1[i];
        }
        let mut k2 = vec![0.0; n];
        (self.rhs)(t0 + h0, &y1, &mut k2);
        let mut d2 = 0.0;
        for i in 0..n {
            let sc = self.opts.atol + self.opts.rtol * y0[i].abs();
            d2 += ((k2[i] - k1[i]) / sc) * ((k2[i] - k1[i]) / sc);
        }
        let d2 = (d2 / n as f64).sqrt() / h0;
        let m = d1.max(d2);
        let h1 = if m <= 1e-15 { (h0 * 1e-3).max(1e-6) } else { (0.01 / m).powf(0.2) };
        h1.min(100.0 * h0).min(span).max(1e-12)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn sho_rhs(omega: f64) -> impl FnMut(f64, &[f64], &mut [f64]) {
        move |_t, y, dy| {
            dy[0] = y[1];
            dy[1] = -omega * omega * y[0];
        }
    }

    #[test]
    fn harmonic_oscillator_accuracy() {
        let opts = OdeOptions { rtol: 1e-10, atol: 1e-12, ..Default::default() };
        let mut solver = Dopri5::new(sho_rhs(3.0), opts);
        let out = solver.solve_dense(0.0, &[1.0, 0.0], 10.0).unwrap();
        for i in 0..=100 {
            let t = i as f64 * 0.1;
            let (x, _) = out.eval_component(t, 0).unwrap();
            assert_relative_eq!(x, (3.0 * t).cos(), epsilon = 5e-9);
        }
    }

    #[test]
    fn backward_integration_and_reversibility() {
        let opts = OdeOptions { rtol: 1e-11, atol: 1e-13, ..Default::default() };
        let mut solver = Dopri5::new(sho_rhs(2.0), opts);
        let fwd = solver.solve_dense(0.0, &[1.0, 0.5], 5.0).unwrap();
        let end = fwd.steps.last().unwrap().y.clone();
        let mut back = Dopri5::new(sho_rhs(2.0), opts);
        let rev = back.solve_dense(5.0, &end, 0.0).unwrap();
        let y0 = &rev.steps.last().unwrap().y;
        assert!((y0[0] - 1.0).abs() < 1e-9, "reversibility: {}", y0[0]);
        assert!((y0[1] - 0.5).abs() < 1e-9);
        // backward dense output is queryable
        let (x, _) = rev.eval_component(2.5, 0).unwrap();
        let expect = { 1.0 * (2.0_f64 * 2.5).cos() + 0.25 * (2.0_f64 * 2.5).sin() };
        assert_relative_eq!(x, expect, epsilon = 1e-8);
    }

    #[test]
    fn sampled_integration_matches_dense() {
        let opts = OdeOptions::default();
        let samples: Vec<f64> = (0..=20).map(|i| i as f64 * 0.25).collect();
        let mut got = vec![0.0; samples.len()];
        let mut solver = Dopri5::new(sho_rhs(1.5), opts);
        solver
            .solve_sampled(0.0, &[0.0, 1.0], 5.0, &samples, |i, _t, y| got[i] = y[0])
            .unwrap();
        for (i, &t) in samples.iter().enumerate() {
            assert_relative_eq!(got[i], (1.5 * t).sin() / 1.5, epsilon = 1e-8);
        }
    }

    #[test]
    fn out_of_range_eval_is_an_error() {
        let mut solver = Dopri5::new(sho_rhs(1.0), OdeOptions::default());
        let out = solver.solve_dense(0.0, &[1.0, 0.0], 1.0).unwrap();
        assert!(out.eval_component(1.5, 0).is_err());
        assert!(out.eval_component(-0.1, 0).is_err());
    }
}
