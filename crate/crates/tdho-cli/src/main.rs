//! Command-line front end: simulation runs, transition tables, paper-example
//! reproduction, oracle validation, and parameter sweeps.
//!
//! Exit codes: 0 success, 1 usage error, 2 numerical-consistency failure,
//! 3 oracle failure.

mod config;
mod runner;

use clap::{Args, Parser, Subcommand};
use config::RunConfig;
use tdho::Error;

#[derive(Parser)]
#[command(name = "tdho", version, about = "Exact dynamics and thermodynamics of the time-dependent harmonic oscillator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct CommonFlags {
    /// TOML configuration file (flags override its values)
    #[arg(long)]
    config: Option<String>,
    /// profile kind: constant|tanh_step|sech_bump|tabulated
    #[arg(long)]
    profile: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    omega0: Option<f64>,
    /// ω_f (tanh_step) or ω_c (sech_bump)
    #[arg(long, allow_negative_numbers = true)]
    omega_target: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    kappa: Option<f64>,
    /// two-column CSV (t, omega) for tabulated profiles
    #[arg(long)]
    profile_csv: Option<String>,
    /// initial number state N
    #[arg(long, short = 'N')]
    n: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    t_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    t_max: Option<f64>,
    #[arg(long)]
    n_out: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    tail_tol: Option<f64>,
    #[arg(long)]
    m_max: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    rtol: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    atol: Option<f64>,
    #[arg(long)]
    out_dir: Option<String>,
    /// representations to compute (repeatable)
    #[arg(long = "rep")]
    reps: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Full simulation: all requested products plus manifest
    Simulate(CommonFlags),
    /// Transition probability tables only
    Transitions(CommonFlags),
    /// Pinned paper-example runs: example1 | example2
    Reproduce {
        name: String,
        #[arg(long)]
        out_dir: Option<String>,
    },
    /// Validate against the truncated-Fock / quadrature / wavefunction oracles
    OracleCheck {
        #[command(flatten)]
        flags: CommonFlags,
        /// Fock truncation dimension (≤ 400)
        #[arg(long, default_value_t = 200)]
        dim: usize,
        /// preset to start from: example1 | example2
        #[arg(long)]
        preset: Option<String>,
    },
    /// One run per parameter value plus a summary CSV
    Sweep {
        #[command(flatten)]
        flags: CommonFlags,
        /// kappa | omega_target | N
        #[arg(long)]
        parameter: String,
        /// comma-separated values
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        values: Vec<f64>,
    },
}

fn build_config(flags: &CommonFlags, preset: Option<&str>) -> Result<RunConfig, Error> {
    let mut cfg = if let Some(name) = preset {
        config::preset(name)?
    } else if let Some(path) = &flags.config {
        let text = std::fs::read_to_string(path)?;
        RunConfig::from_toml(&text)?
    } else {
        // minimal default requiring profile flags
        RunConfig::from_toml(
            "[profile]\nkind = \"constant\"\nomega0 = 1.0\n[grid]\nt_min = -1.0\nt_max = 1.0\nn_out = 201\n",
        )?
    };
    if let Some(v) = &flags.profile {
        cfg.profile.kind = v.clone();
    }
    if let Some(v) = flags.omega0 {
        cfg.profile.omega0 = Some(v);
    }
    if let Some(v) = flags.omega_target {
        cfg.profile.omega_target = Some(v);
    }
    if let Some(v) = flags.kappa {
        cfg.profile.kappa = Some(v);
    }
    if let Some(v) = &flags.profile_csv {
        cfg.profile.csv = Some(v.clone());
    }
    if let Some(v) = flags.n {
        cfg.run.initial_n = v;
    }
    if let Some(v) = flags.t_min {
        cfg.grid.t_min = v;
    }
    if let Some(v) = flags.t_max {
        cfg.grid.t_max = v;
    }
    if let Some(v) = flags.n_out {
        cfg.grid.n_out = v;
    }
    if let Some(v) = flags.tail_tol {
        cfg.run.tail_tol = v;
    }
    if let Some(v) = flags.m_max {
        cfg.run.m_max = v;
    }
    if let Some(v) = flags.rtol {
        cfg.run.rtol = v;
    }
    if let Some(v) = flags.atol {
        cfg.run.atol = v;
    }
    if let Some(v) = &flags.out_dir {
        cfg.run.out_dir = v.clone();
    }
    if !flags.reps.is_empty() {
        cfg.run.representations = flags.reps.clone();
    }
    Ok(cfg)
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Consistency(_) => 2,
        Error::Domain(_) | Error::InvalidProfile(_) => 1,
        _ => 2,
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // keep clap's message but force usage errors onto exit code 1
            let is_help = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = e.print();
            std::process::exit(if is_help { 0 } else { 1 });
        }
    };

    let outcome: Result<(), (i32, String)> = match cli.command {
        Command::Simulate(flags) => build_config(&flags, None)
            .and_then(|cfg| runner::run(&cfg))
            .map(|emitted| {
                println!("wrote {} files to {}", emitted.files.len() + 1, emitted.out_dir.display());
            })
            .map_err(|e| (exit_code_for(&e), e.to_string())),
        Command::Transitions(flags) => build_config(&flags, None)
            .map(|mut cfg| {
                cfg.emit = config::RunConfig::from_toml(
                    "[profile]\nkind=\"constant\"\nomega0=1.0\n[grid]\nt_min=-1.0\nt_max=1.0\nn_out=2\n[emit]\nermakov=false\nbogoliubov=false\ntransitions=true\nthermo=false\nentropy=false\ntemps=false\n",
                )
                .expect("static emit config")
                .emit;
                cfg
            })
            .and_then(|cfg| runner::run(&cfg))
            .map(|emitted| {
                println!("wrote {} files to {}", emitted.files.len() + 1, emitted.out_dir.display());
            })
            .map_err(|e| (exit_code_for(&e), e.to_string())),
        Command::Reproduce { name, out_dir } => runner::reproduce(&name, out_dir)
            .map(|emitted| {
                println!("wrote {} files under {}", emitted.files.len(), emitted.out_dir.display());
            })
            .map_err(|e| (exit_code_for(&e), e.to_string())),
        Command::OracleCheck { flags, dim, preset } => {
            build_config(&flags, preset.as_deref()).map_err(|e| (1, e.to_string())).and_then(
                |cfg| {
                    let report = runner::oracle_check(&cfg, dim)
                        .map_err(|e| (exit_code_for(&e), e.to_string()))?;
                    let json = serde_json::to_string_pretty(&report)
                        .map_err(|e| (2, e.to_string()))?;
                    let out_dir = std::path::PathBuf::from(&cfg.run.out_dir);
                    std::fs::create_dir_all(&out_dir)
                        .map_err(|e| (2, e.to_string()))?;
                    let path = out_dir.join("oracle_report.json");
                    std::fs::write(&path, &json).map_err(|e| (2, e.to_string()))?;
                    for c in &report.checks {
                        println!(
                            "{} {}: measured {:.3e} vs tolerance {:.1e}",
                            if c.pass { "PASS" } else { "FAIL" },
                            c.name,
                            c.measured,
                            c.tolerance
                        );
                    }
                    if report.all_pass() {
                        println!("oracle report written to {}", path.display());
                        Ok(())
                    } else {
                        Err((3, format!("oracle checks failed, report at {}", path.display())))
                    }
                },
            )
        }
        Command::Sweep { flags, parameter, values } => build_config(&flags, None)
            .and_then(|cfg| runner::sweep(&cfg, &parameter, &values))
            .map(|emitted| {
                println!("wrote {} files under {}", emitted.files.len(), emitted.out_dir.display());
            })
            .map_err(|e| (exit_code_for(&e), e.to_string())),
    };

    if let Err((code, msg)) = outcome {
        eprintln!("error: {msg}");
        std::process::exit(code);
    }
}
