//! CSV emission with fixed column schemas.
//!
//! Floats are written with the shortest round-trip representation (`{}`), so
//! repeated runs with the same configuration are byte-identical. Undefined
//! values (0/0 temperatures) become empty cells, never NaN.

use crate::entropy_temp::ModeTemps;
use crate::ermakov::ErmakovSolution;
use crate::representations::{BogoliubovSet, Representation};
use crate::thermo::ThermoRecord;
use crate::transitions::{DensityBlock, TransitionTable};
use crate::error::Result;
use std::io::Write;

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// t, sigma, sigma_dot, tau over a grid.
pub fn write_ermakov(w: &mut dyn Write, sol: &ErmakovSolution, times: &[f64]) -> Result<()> {
    writeln!(w, "t,sigma,sigma_dot,tau")?;
    for &t in times {
        let p = sol.eval(t)?;
        writeln!(w, "{},{},{},{}", t, p.sigma, p.sigma_dot, p.tau)?;
    }
    Ok(())
}

/// t, rep, Re α, Im α, Re β, Im β, r, θ_α, θ_β.
pub fn write_bogoliubov(
    w: &mut dyn Write,
    rows: &[(f64, Representation, BogoliubovSet)],
) -> Result<()> {
    writeln!(w, "t,rep,re_alpha,im_alpha,re_beta,im_beta,r,theta_alpha,theta_beta")?;
    for (t, rep, b) in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{}",
            t,
            rep.label(),
            b.alpha.re,
            b.alpha.im,
            b.beta.re,
            b.beta.im,
            b.r,
            b.theta_alpha,
            b.theta_beta
        )?;
    }
    Ok(())
}

/// Long format t, N, M, P.
pub fn write_transitions(w: &mut dyn Write, table: &TransitionTable) -> Result<()> {
    writeln!(w, "t,N,M,P")?;
    for (i, &t) in table.times.iter().enumerate() {
        for (j, &m) in table.m_values.iter().enumerate() {
            writeln!(w, "{},{},{},{}", t, table.initial_n, m, table.probs[i][j])?;
        }
    }
    Ok(())
}

/// t, I, J, Re, Im of a density block.
pub fn write_density_block(w: &mut dyn Write, block: &DensityBlock) -> Result<()> {
    writeln!(w, "t,I,J,re,im")?;
    for (i, &mi) in block.modes.iter().enumerate() {
        for (j, &mj) in block.modes.iter().enumerate() {
            let v = block.get(i, j);
            writeln!(w, "{},{},{},{},{}", block.t, mi, mj, v.re, v.im)?;
        }
    }
    Ok(())
}

pub const THERMO_HEADER: &str = "t,N0,N_omega,N_inv,E,eps0,Qdot_0,Wdot_0,Qdot_omega,Wdot_omega,Qdot_I,Wdot_I,Q_0,W_0,Q_omega,W_omega,W_I";

/// One row per grid time with every ThermoRecord field.
pub fn write_thermo(w: &mut dyn Write, records: &[ThermoRecord]) -> Result<()> {
    writeln!(w, "{THERMO_HEADER}")?;
    for r in records {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.t,
            r.n0,
            r.n_omega,
            r.n_inv,
            r.energy,
            r.eps0,
            r.qdot_0,
            r.wdot_0,
            r.qdot_omega,
            r.wdot_omega,
            r.qdot_inv,
            r.wdot_inv,
            r.q_0,
            r.w_0,
            r.q_omega,
            r.w_omega,
            r.w_inv
        )?;
    }
    Ok(())
}

/// t, rep, S_d, S_vN_trunc, Sdot_d, T_macr rows; None → empty cell.
pub struct EntropyRow {
    pub t: f64,
    pub representation: Representation,
    pub s_d: f64,
    pub s_vn_trunc: Option<f64>,
    pub sdot_d: f64,
    pub t_macr: Option<f64>,
}

pub fn write_entropy(w: &mut dyn Write, rows: &[EntropyRow]) -> Result<()> {
    writeln!(w, "t,rep,S_d,S_vN_trunc,Sdot_d,T_macr")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            r.t,
            r.representation.label(),
            r.s_d,
            opt(r.s_vn_trunc),
            r.sdot_d,
            opt(r.t_macr)
        )?;
    }
    Ok(())
}

/// t, rep, K, T_K, T_K_half, T_K_th rows.
pub fn write_mode_temps(w: &mut dyn Write, blocks: &[ModeTemps]) -> Result<()> {
    writeln!(w, "t,rep,K,T_K,T_K_half,T_K_th")?;
    for b in blocks {
        for (j, &k) in b.k_values.iter().enumerate() {
            writeln!(
                w,
                "{},{},{},{},{},{}",
                b.t,
                b.representation.label(),
                k,
                opt(b.t_k[j]),
                opt(b.t_k_half[j]),
                opt(b.t_k_th[j])
            )?;
        }
    }
    Ok(())
}
