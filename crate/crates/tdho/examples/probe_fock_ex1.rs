use std::time::Instant;
use tdho::*;
use tdho::oracle::evolve_fock;
use tdho::representations::{bogoliubov, Representation};
use tdho::transitions::probability;

fn main() {
    let p = FrequencyProfile::tanh_step(10.0, 100.0, 5.0).unwrap();
    let sol = solve_ermakov(&p, (-2.0, 2.0), 1e-10).unwrap();
    let samples: Vec<f64> = (0..20).map(|i| -1.8 + 3.8 * i as f64 / 19.0).collect();
    for n in [0usize, 3] {
        let t0 = Instant::now();
        let traj = evolve_fock(&p, n, (-2.0, 2.0), 200, 1e-10, 1e-8, &samples).unwrap();
        let dt = t0.elapsed();
        let mut worst = 0.0f64;
        for s in &traj.states {
            let bog = bogoliubov(&sol, Representation::Initial, s.t).unwrap();
            for m in (n % 2..=60).step_by(2) {
                let diff = (s.amplitudes[m].norm_sqr() - probability(&bog, n, m)).abs();
                worst = worst.max(diff);
            }
        }
        println!("N={n}: {:.1}s, worst entrywise diff = {:.2e}, final norm defect = {:.2e}",
                 dt.as_secs_f64(), worst, (traj.states.last().unwrap().norm_sq()-1.0).abs());
    }
}
