//! Simulation orchestration and file emission.

use crate::config::RunConfig;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::fs;
use std::path::{Path, PathBuf};
use tdho::entropy_temp::{
    diagonal_entropy_row, entropy_rate, macroscopic_temperature, mode_temperatures,
    von_neumann_trunc,
};
use tdho::export::{self, EntropyRow};
use tdho::representations::{bogoliubov, Representation};
use tdho::thermo::{cumulative, heat_work_rates};
use tdho::transitions::{density_block, probability_table, TransitionTable};
use tdho::{Error, Result};

#[derive(Serialize)]
struct ManifestFile {
    name: String,
    bytes: usize,
    sha256: String,
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    config: &'a RunConfig,
    files: Vec<ManifestFile>,
}

pub struct Emitted {
    pub out_dir: PathBuf,
    pub files: Vec<String>,
}

fn sha256_hex(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    let digest = h.finalize();
    let mut s = String::with_capacity(64);
    for b in digest {
        s.push_str(&format!("{b:02x}"));
    }
    s
}

/// Run one configuration: solve, emit the requested CSVs plus manifest.json.
pub fn run(config: &RunConfig) -> Result<Emitted> {
    config.validate()?;
    let profile = config.build_profile()?;
    let sol = tdho::ermakov::solve_with(
        &profile,
        (config.grid.t_min, config.grid.t_max),
        config.run.rtol,
        config.run.atol,
    )?;
    let times = config.times();
    let n = config.run.initial_n;
    let reps = config.representations();

    let out_dir = PathBuf::from(&config.run.out_dir);
    fs::create_dir_all(&out_dir)?;
    let mut written: Vec<(String, Vec<u8>)> = Vec::new();

    if config.emit.ermakov {
        let mut buf = Vec::new();
        export::write_ermakov(&mut buf, &sol, &times)?;
        written.push(("ermakov.csv".into(), buf));
    }

    if config.emit.bogoliubov {
        let mut rows = Vec::new();
        for &rep in &reps {
            for &t in &times {
                rows.push((t, rep, bogoliubov(&sol, rep, t)?));
            }
        }
        let mut buf = Vec::new();
        export::write_bogoliubov(&mut buf, &rows)?;
        written.push(("bogoliubov.csv".into(), buf));
    }

    let mut tables: Vec<(Representation, TransitionTable)> = Vec::new();
    for &rep in &reps {
        if rep == Representation::Invariant {
            continue;
        }
        let table =
            probability_table(&sol, rep, n, &times, config.run.tail_tol, config.run.m_max)?;
        tables.push((rep, table));
    }

    if config.emit.transitions {
        for (rep, table) in &tables {
            let mut buf = Vec::new();
            export::write_transitions(&mut buf, table)?;
            written.push((format!("transitions_{}_N{}.csv", rep.label(), n), buf));
        }
    }

    if config.emit.thermo {
        let series = cumulative(&sol, n, &times)?;
        let mut buf = Vec::new();
        export::write_thermo(&mut buf, &series.records)?;
        written.push((format!("thermo_N{n}.csv"), buf));
    }

    if config.emit.entropy {
        let mut rows = Vec::new();
        for (rep, table) in &tables {
            for (i, &t) in times.iter().enumerate() {
                let s_d = diagonal_entropy_row(table.row(i));
                let sdot = entropy_rate(table, i);
                let rates = heat_work_rates(&sol, n, t)?;
                let qdot = match rep {
                    Representation::Initial => rates.qdot_0,
                    Representation::Diagonal => rates.qdot_omega,
                    Representation::Invariant => 0.0,
                };
                let s_vn = if i % config.run.svn_stride == 0 {
                    let block = density_block(&sol, *rep, n, t, &table.m_values)?;
                    Some(von_neumann_trunc(&block)?)
                } else {
                    None
                };
                rows.push(EntropyRow {
                    t,
                    representation: *rep,
                    s_d,
                    s_vn_trunc: s_vn,
                    sdot_d: sdot,
                    t_macr: macroscopic_temperature(qdot, sdot),
                });
            }
        }
        let mut buf = Vec::new();
        export::write_entropy(&mut buf, &rows)?;
        written.push((format!("entropy_N{n}.csv"), buf));
    }

    if config.emit.temps {
        let mut blocks = Vec::new();
        for (rep, table) in &tables {
            for (i, &t) in times.iter().enumerate() {
                if i % config.run.temps_stride != 0 {
                    continue;
                }
                let bog = bogoliubov(&sol, *rep, t)?;
                let w_rep = match rep {
                    Representation::Initial => sol.omega_ref(),
                    _ => sol.profile().omega(t)?,
                };
                blocks.push(mode_temperatures(table, &bog, w_rep, t)?);
            }
        }
        let mut buf = Vec::new();
        export::write_mode_temps(&mut buf, &blocks)?;
        written.push((format!("temps_N{n}.csv"), buf));
    }

    if config.emit.oracle {
        let dims = tdho::oracle::default_dim(n).min(400);
        let report = tdho::oracle::run_suite(&sol, &[n.min(8)], dims, config.run.rtol, 1e-8)?;
        let buf = serde_json::to_vec_pretty(&report)
            .map_err(|e| Error::Domain(format!("report serialization: {e}")))?;
        written.push(("oracle_report.json".into(), buf));
        if !report.all_pass() {
            // still write everything, then surface the failure
            flush(&out_dir, config, &written)?;
            return Err(Error::Consistency("oracle checks failed (see oracle_report.json)".into()));
        }
    }

    flush(&out_dir, config, &written)?;
    Ok(Emitted { out_dir, files: written.into_iter().map(|(n, _)| n).collect() })
}

fn flush(out_dir: &Path, config: &RunConfig, written: &[(String, Vec<u8>)]) -> Result<()> {
    let mut manifest_files = Vec::new();
    for (name, bytes) in written {
        fs::write(out_dir.join(name), bytes)?;
        manifest_files.push(ManifestFile {
            name: name.clone(),
            bytes: bytes.len(),
            sha256: sha256_hex(bytes),
        });
    }
    let manifest = Manifest {
        tool: "tdho",
        version: env!("CARGO_PKG_VERSION"),
        config,
        files: manifest_files,
    };
    let json = serde_json::to_vec_pretty(&manifest)
        .map_err(|e| Error::Domain(format!("manifest serialization: {e}")))?;
    fs::write(out_dir.join("manifest.json"), json)?;
    Ok(())
}

/// `reproduce example1|example2`: the paper's figure-set products.
pub fn reproduce(name: &str, out_dir: Option<String>) -> Result<Emitted> {
    let mut base = crate::config::preset(name)?;
    if let Some(dir) = out_dir {
        base.run.out_dir = dir;
    }
    let root = PathBuf::from(&base.run.out_dir);
    fs::create_dir_all(&root)?;

    // transition tables for the figure sets; thermo/entropy/temps ride with
    // the per-N runs
    let n_sets: &[(&str, usize, Vec<String>)] = match name {
        "example1" => &[
            ("initial", 0, vec!["initial".into(), "diagonal".into()]),
            ("initial", 1, vec!["initial".into()]),
            ("initial", 8, vec!["initial".into()]),
            ("diagonal", 51, vec!["diagonal".into()]),
        ],
        _ => &[
            ("initial", 0, vec!["initial".into(), "diagonal".into()]),
            ("initial", 1, vec!["initial".into(), "diagonal".into()]),
            ("initial", 3, vec!["initial".into()]),
            ("diagonal", 10, vec!["diagonal".into()]),
        ],
    };

    let mut all_files = Vec::new();
    for (tag, n, reps) in n_sets {
        let mut cfg = base.clone();
        cfg.run.initial_n = *n;
        cfg.run.representations = reps.clone();
        cfg.run.out_dir = root.join(format!("{tag}_N{n}")).to_string_lossy().into_owned();
        // σ/τ and Bogoliubov series only once (they do not depend on N)
        let first = all_files.is_empty();
        cfg.emit.ermakov = first;
        cfg.emit.bogoliubov = first;
        let emitted = run(&cfg)?;
        for f in emitted.files {
            all_files.push(format!("{}/{}", emitted.out_dir.display(), f));
        }
    }
    Ok(Emitted { out_dir: root, files: all_files })
}

/// Parameter sweep over kappa, omega_target, or N.
pub fn sweep(config: &RunConfig, parameter: &str, values: &[f64]) -> Result<Emitted> {
    if !["kappa", "omega_target", "N"].contains(&parameter) {
        return Err(Error::Domain(format!(
            "sweep parameter must be kappa|omega_target|N, got '{parameter}'"
        )));
    }
    let root = PathBuf::from(&config.run.out_dir);
    fs::create_dir_all(&root)?;
    let mut summary = String::from("value,peak_N_omega,asymptotic_N0,max_T_macr\n");
    let mut all_files = Vec::new();

    for &v in values {
        let mut cfg = config.clone();
        match parameter {
            "kappa" => {
                let base_kappa = cfg.profile.kappa.unwrap_or(1.0);
                cfg.profile.kappa = Some(v);
                // keep the profile equally saturated at the ends
                let scale = base_kappa / v;
                cfg.grid.t_min *= scale;
                cfg.grid.t_max *= scale;
            }
            "omega_target" => cfg.profile.omega_target = Some(v),
            _ => cfg.run.initial_n = v as usize,
        }
        cfg.run.out_dir = root.join(format!("{parameter}_{v}")).to_string_lossy().into_owned();
        let emitted = run(&cfg)?;
        for f in &emitted.files {
            all_files.push(format!("{}/{}", emitted.out_dir.display(), f));
        }

        // summary quantities from a fresh solve (cheap next to the emission)
        let profile = cfg.build_profile()?;
        let sol = tdho::ermakov::solve_with(
            &profile,
            (cfg.grid.t_min, cfg.grid.t_max),
            cfg.run.rtol,
            cfg.run.atol,
        )?;
        let times = cfg.times();
        let n = cfg.run.initial_n;
        let mut peak_nw = 0.0f64;
        let mut tail_n0 = 0.0f64;
        let mut tail_count = 0usize;
        for &t in &times {
            let (n0, nw) = tdho::thermo::occupations(&sol, n, t)?;
            peak_nw = peak_nw.max((nw - n as f64).abs());
            if t >= cfg.grid.t_max - 0.2 * (cfg.grid.t_max - cfg.grid.t_min) {
                tail_n0 += n0;
                tail_count += 1;
            }
        }
        let table = probability_table(
            &sol,
            Representation::Diagonal,
            n,
            &times,
            cfg.run.tail_tol,
            cfg.run.m_max,
        )?;
        let mut max_tmacr = 0.0f64;
        for (i, &t) in times.iter().enumerate() {
            let rates = heat_work_rates(&sol, n, t)?;
            if let Some(tm) = macroscopic_temperature(rates.qdot_omega, entropy_rate(&table, i)) {
                if tm.is_finite() {
                    max_tmacr = max_tmacr.max(tm.abs());
                }
            }
        }
        summary.push_str(&format!(
            "{},{},{},{}\n",
            v,
            peak_nw,
            tail_n0 / tail_count.max(1) as f64,
            max_tmacr
        ));
    }
    fs::write(root.join("sweep_summary.csv"), summary)?;
    all_files.push("sweep_summary.csv".into());
    Ok(Emitted { out_dir: root, files: all_files })
}

/// Standalone oracle check returning the report (caller picks the exit code).
pub fn oracle_check(config: &RunConfig, dim: usize) -> Result<tdho::oracle::OracleReport> {
    config.validate()?;
    if config.run.initial_n > 8 || dim > 400 {
        return Err(Error::Domain("oracle-check enforces N ≤ 8 and D ≤ 400".into()));
    }
    let profile = config.build_profile()?;
    let sol = tdho::ermakov::solve_with(
        &profile,
        (config.grid.t_min, config.grid.t_max),
        config.run.rtol,
        config.run.atol,
    )?;
    let n_values: Vec<usize> = [0usize, 1, config.run.initial_n]
        .iter()
        .copied()
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    tdho::oracle::run_suite(&sol, &n_values, dim, config.run.rtol.max(1e-11), 1e-8)
}
