//! Run configuration: TOML file plus command-line overrides (flags win).

use serde::{Deserialize, Serialize};
use tdho::representations::Representation;
use tdho::{Error, FrequencyProfile, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileConfig {
    pub kind: String,
    #[serde(default)]
    pub omega0: Option<f64>,
    /// ω_f for tanh_step, ω_c for sech_bump
    #[serde(default)]
    pub omega_target: Option<f64>,
    #[serde(default)]
    pub kappa: Option<f64>,
    /// two-column CSV (t, omega) for tabulated profiles
    #[serde(default)]
    pub csv: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub t_min: f64,
    pub t_max: f64,
    pub n_out: usize,
}

fn default_reps() -> Vec<String> {
    vec!["initial".into(), "diagonal".into(), "invariant".into()]
}
fn default_tail_tol() -> f64 {
    1e-10
}
fn default_m_max() -> usize {
    2000
}
fn default_rtol() -> f64 {
    1e-10
}
fn default_atol() -> f64 {
    1e-12
}
fn default_out_dir() -> String {
    "out".into()
}
fn default_temps_stride() -> usize {
    8
}
fn default_svn_stride() -> usize {
    16
}
fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    #[serde(default)]
    pub initial_n: usize,
    #[serde(default = "default_reps")]
    pub representations: Vec<String>,
    #[serde(default = "default_tail_tol")]
    pub tail_tol: f64,
    #[serde(default = "default_m_max")]
    pub m_max: usize,
    #[serde(default = "default_rtol")]
    pub rtol: f64,
    #[serde(default = "default_atol")]
    pub atol: f64,
    #[serde(default = "default_out_dir")]
    pub out_dir: String,
    #[serde(default = "default_temps_stride")]
    pub temps_stride: usize,
    #[serde(default = "default_svn_stride")]
    pub svn_stride: usize,
}

impl Default for RunSection {
    fn default() -> Self {
        Self {
            initial_n: 0,
            representations: default_reps(),
            tail_tol: default_tail_tol(),
            m_max: default_m_max(),
            rtol: default_rtol(),
            atol: default_atol(),
            out_dir: default_out_dir(),
            temps_stride: default_temps_stride(),
            svn_stride: default_svn_stride(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct EmitSection {
    #[serde(default = "default_true")]
    pub ermakov: bool,
    #[serde(default = "default_true")]
    pub bogoliubov: bool,
    #[serde(default = "default_true")]
    pub transitions: bool,
    #[serde(default = "default_true")]
    pub thermo: bool,
    #[serde(default = "default_true")]
    pub entropy: bool,
    #[serde(default = "default_true")]
    pub temps: bool,
    #[serde(default)]
    pub oracle: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub profile: ProfileConfig,
    pub grid: GridConfig,
    #[serde(default)]
    pub run: RunSection,
    #[serde(default = "default_emit")]
    pub emit: EmitSection,
}

fn default_emit() -> EmitSection {
    EmitSection {
        ermakov: true,
        bogoliubov: true,
        transitions: true,
        thermo: true,
        entropy: true,
        temps: true,
        oracle: false,
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Domain(format!("config parse error: {e}")))
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.grid.t_min < 0.0 && 0.0 < self.grid.t_max) {
            return Err(Error::Domain(format!(
                "grid must satisfy t_min < 0 < t_max, got [{}, {}]",
                self.grid.t_min, self.grid.t_max
            )));
        }
        if self.grid.n_out < 2 {
            return Err(Error::Domain("n_out must be at least 2".into()));
        }
        if !(1e-13..=1e-4).contains(&self.run.rtol) {
            return Err(Error::Domain(format!("rtol {} outside [1e-13, 1e-4]", self.run.rtol)));
        }
        if !(1e-12..=1e-3).contains(&self.run.tail_tol) {
            return Err(Error::Domain(format!(
                "tail_tol {} outside [1e-12, 1e-3]",
                self.run.tail_tol
            )));
        }
        for r in &self.run.representations {
            parse_representation(r)?;
        }
        self.build_profile().map(|_| ())
    }

    pub fn build_profile(&self) -> Result<FrequencyProfile> {
        let need = |v: Option<f64>, name: &str| {
            v.ok_or_else(|| {
                Error::Domain(format!("profile.{name} is required for kind '{}'", self.profile.kind))
            })
        };
        match self.profile.kind.as_str() {
            "constant" => FrequencyProfile::constant(need(self.profile.omega0, "omega0")?),
            "tanh_step" => FrequencyProfile::tanh_step(
                need(self.profile.omega0, "omega0")?,
                need(self.profile.omega_target, "omega_target")?,
                need(self.profile.kappa, "kappa")?,
            ),
            "sech_bump" => FrequencyProfile::sech_bump(
                need(self.profile.omega0, "omega0")?,
                need(self.profile.omega_target, "omega_target")?,
                need(self.profile.kappa, "kappa")?,
            ),
            "tabulated" => {
                let path = self.profile.csv.as_ref().ok_or_else(|| {
                    Error::Domain("profile.csv is required for kind 'tabulated'".into())
                })?;
                let text = std::fs::read_to_string(path)?;
                FrequencyProfile::tabulated_from_csv(&text)
            }
            other => Err(Error::Domain(format!(
                "unknown profile kind '{other}' (constant|tanh_step|sech_bump|tabulated)"
            ))),
        }
    }

    pub fn representations(&self) -> Vec<Representation> {
        self.run
            .representations
            .iter()
            .map(|s| parse_representation(s).expect("validated"))
            .collect()
    }

    pub fn times(&self) -> Vec<f64> {
        let n = self.grid.n_out;
        (0..n)
            .map(|i| {
                self.grid.t_min
                    + (self.grid.t_max - self.grid.t_min) * i as f64 / (n - 1) as f64
            })
            .collect()
    }
}

pub fn parse_representation(s: &str) -> Result<Representation> {
    match s {
        "initial" => Ok(Representation::Initial),
        "diagonal" => Ok(Representation::Diagonal),
        "invariant" => Ok(Representation::Invariant),
        other => Err(Error::Domain(format!(
            "unknown representation '{other}' (initial|diagonal|invariant)"
        ))),
    }
}

/// The two paper presets with pinned parameters and grids.
pub fn preset(name: &str) -> Result<RunConfig> {
    match name {
        "example1" => Ok(RunConfig {
            profile: ProfileConfig {
                kind: "tanh_step".into(),
                omega0: Some(10.0),
                omega_target: Some(100.0),
                kappa: Some(5.0),
                csv: None,
            },
            grid: GridConfig { t_min: -2.0, t_max: 2.0, n_out: 1201 },
            run: RunSection::default(),
            emit: default_emit(),
        }),
        "example2" => Ok(RunConfig {
            profile: ProfileConfig {
                kind: "sech_bump".into(),
                omega0: Some(2.0),
                omega_target: Some(102f64.sqrt()),
                kappa: Some(7.0),
                csv: None,
            },
            grid: GridConfig { t_min: -3.0, t_max: 3.0, n_out: 1201 },
            run: RunSection { initial_n: 1, ..RunSection::default() },
            emit: default_emit(),
        }),
        other => Err(Error::Domain(format!("unknown preset '{other}' (example1|example2)"))),
    }
}
