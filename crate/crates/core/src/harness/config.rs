use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bounds::MarkovBoundConfig;
use crate::control::linalg::{from_rows, to_rows};
use crate::control::{Mat, PlantModel, Vector};
use crate::error::{Error, Result};
use crate::polar::{Crc, PolarCode, CRC16_5G_POLY};
use crate::quant::{Quantizer, DEFAULT_EPS_MASS};

/// How the Kalman filter learns whether a packet arrived.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum GammaMode {
    /// `γ = 1` exactly when the decoded payload equals the sent one.
    #[default]
    Genie,
    /// `γ` is the CRC check of the decision; undetected errors are counted.
    Crc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum DecoderChoice {
    Map,
    Ml,
    #[default]
    Both,
}

impl DecoderChoice {
    pub fn runs_map(self) -> bool {
        matches!(self, Self::Map | Self::Both)
    }
    pub fn runs_ml(self) -> bool {
        matches!(self, Self::Ml | Self::Both)
    }
}

macro_rules! text_enum {
    ($t:ty, $($name:literal => $v:expr),+) => {
        impl FromStr for $t {
            type Err = String;
            fn from_str(s: &str) -> std::result::Result<Self, String> {
                match s.to_ascii_lowercase().as_str() {
                    $($name => Ok($v),)+
                    other => Err(format!("unknown value `{other}` (expected one of: {})", [$($name),+].join(", "))),
                }
            }
        }
        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                $(if *self == $v { return f.write_str($name); })+
                unreachable!()
            }
        }
    };
}

text_enum!(GammaMode, "genie" => GammaMode::Genie, "crc" => GammaMode::Crc);
text_enum!(DecoderChoice, "map" => DecoderChoice::Map, "ml" => DecoderChoice::Ml, "both" => DecoderChoice::Both);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlantSection {
    pub a: Vec<Vec<f64>>,
    pub b: Vec<Vec<f64>>,
    pub c: Vec<Vec<f64>>,
    pub w: Vec<Vec<f64>>,
    pub v: Vec<Vec<f64>>,
    pub k_con: Vec<Vec<f64>>,
    pub x_ref: Vec<f64>,
    /// Initial true state; defaults to `x_ref`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x0: Option<Vec<f64>>,
    /// Initial posterior covariance; defaults to `M = C⁻¹VC⁻ᵀ` (or `P∞` when
    /// `C` is not square).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p0: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuantizerSection {
    pub z_range: f64,
    pub n_bits: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeSection {
    pub n: usize,
    pub k: usize,
    #[serde(default)]
    pub crc_len: usize,
    /// Generator without the leading term; defaults to 0x1021 for 16 bits.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub crc_poly: Option<u32>,
}

fn default_trials() -> usize {
    100
}
fn default_steps() -> usize {
    2200
}
fn default_warmup() -> usize {
    200
}
fn default_seed() -> u64 {
    1
}
fn default_eps() -> f64 {
    DEFAULT_EPS_MASS
}
fn default_i_max() -> usize {
    MarkovBoundConfig::default().i_max
}
fn default_mu_points() -> usize {
    MarkovBoundConfig::default().mu_points
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimSection {
    pub snr_db: Vec<f64>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_steps")]
    pub steps_per_trial: usize,
    #[serde(default = "default_warmup")]
    pub warmup_steps: usize,
    #[serde(default)]
    pub gamma_mode: GammaMode,
    #[serde(default)]
    pub decoder: DecoderChoice,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_eps")]
    pub eps_mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsSection {
    #[serde(default = "default_i_max")]
    pub i_max: usize,
    #[serde(default = "default_mu_points")]
    pub mu_points: usize,
    #[serde(default = "default_eps")]
    pub eps_mass: f64,
}

impl Default for BoundsSection {
    fn default() -> Self {
        Self { i_max: default_i_max(), mu_points: default_mu_points(), eps_mass: default_eps() }
    }
}

/// On-disk experiment description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub plant: PlantSection,
    pub quantizer: QuantizerSection,
    pub code: CodeSection,
    pub sim: SimSection,
    #[serde(default)]
    pub bounds: BoundsSection,
}

/// Validated experiment with every default resolved.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    /// The configuration with defaults filled in, for provenance.
    pub file: ConfigFile,
    pub plant: PlantModel,
    pub quant: Quantizer,
    pub code: PolarCode,
    pub x0: Vector,
    pub p0: Mat,
    pub sim: SimSection,
    pub bounds: MarkovBoundConfig,
}

fn matrix(rows: &[Vec<f64>], field: &str) -> Result<Mat> {
    from_rows(rows, "config matrix").map_err(|e| Error::config(field, e.to_string()))
}

fn field_err(field: &str) -> impl Fn(Error) -> Error + '_ {
    move |e| Error::config(field, e.to_string())
}

impl ExperimentConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.display().to_string(), source })?;
        Self::from_toml(&text).map_err(|e| match e {
            Error::Config { field, msg } => Error::Config { field, msg: format!("{msg} (in {})", path.display()) },
            other => other,
        })
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let file: ConfigFile = toml::from_str(text).map_err(|e| {
            let msg = e.message().to_string();
            let field = e
                .span()
                .map(|s| text[..s.start.min(text.len())].lines().count().max(1))
                .map(|line| format!("line {line}"))
                .unwrap_or_else(|| "config".into());
            Error::config(field, msg)
        })?;
        Self::from_file(file)
    }

    pub fn from_file(mut file: ConfigFile) -> Result<Self> {
        let p = &file.plant;
        let x_ref = Vector::from_vec(p.x_ref.clone());
        let plant = PlantModel::new(
            matrix(&p.a, "plant.a")?,
            matrix(&p.b, "plant.b")?,
            matrix(&p.c, "plant.c")?,
            matrix(&p.w, "plant.w")?,
            matrix(&p.v, "plant.v")?,
            matrix(&p.k_con, "plant.k_con")?,
            x_ref.clone(),
        )
        .map_err(field_err("plant"))?;
        let x0 = match &p.x0 {
            Some(v) if v.len() != plant.nx() => {
                return Err(Error::config("plant.x0", format!("expected {} entries, got {}", plant.nx(), v.len())))
            }
            Some(v) => Vector::from_vec(v.clone()),
            None => x_ref,
        };
        let p0 = match &p.p0 {
            Some(rows) => {
                let m = matrix(rows, "plant.p0")?;
                if m.shape() != (plant.nx(), plant.nx()) {
                    return Err(Error::config("plant.p0", format!("expected {0}x{0}", plant.nx())));
                }
                crate::control::linalg::ingest_symmetric(&m, "plant.p0").map_err(field_err("plant.p0"))?
            }
            None => match plant.observation_bound() {
                Ok(m) => m,
                Err(_) => {
                    crate::control::solve_riccati(&plant, crate::control::RICCATI_TOL, crate::control::RICCATI_MAX_ITER)
                        .map_err(field_err("plant.p0"))?
                        .p_inf
                }
            },
        };
        file.plant.x0 = Some(x0.iter().copied().collect());
        file.plant.p0 = Some(to_rows(&p0));

        let quant = Quantizer::new(file.quantizer.z_range, file.quantizer.n_bits, plant.ny()).map_err(field_err("quantizer"))?;

        let cs = file.code.clone();
        let poly = match (cs.crc_len, cs.crc_poly) {
            (0, _) => 0,
            (_, Some(p)) => p,
            (16, None) => CRC16_5G_POLY,
            (len, None) => return Err(Error::config("code.crc_poly", format!("required for a {len}-bit CRC"))),
        };
        let crc = if cs.crc_len == 0 { Crc::none() } else { Crc::new(cs.crc_len, poly).map_err(field_err("code.crc_poly"))? };
        if cs.crc_len > 0 {
            file.code.crc_poly = Some(poly);
        }
        if cs.k != quant.payload_bits() {
            return Err(Error::config(
                "code.k",
                format!("must equal Ny * n_bits = {} * {} = {}", plant.ny(), quant.n_bits(), quant.payload_bits()),
            ));
        }
        let code = PolarCode::new(cs.n, cs.k, crc).map_err(field_err("code"))?;

        let sim = file.sim.clone();
        if sim.snr_db.is_empty() || sim.snr_db.iter().any(|s| !s.is_finite()) {
            return Err(Error::config("sim.snr_db", "needs at least one finite SNR value"));
        }
        if sim.trials == 0 {
            return Err(Error::config("sim.trials", "must be at least 1"));
        }
        if sim.warmup_steps >= sim.steps_per_trial {
            return Err(Error::config("sim.warmup_steps", "must be smaller than sim.steps_per_trial"));
        }
        if !(sim.eps_mass > 0.0 && sim.eps_mass < 1.0) {
            return Err(Error::config("sim.eps_mass", "must lie in (0, 1)"));
        }
        let b = &file.bounds;
        if b.i_max == 0 {
            return Err(Error::config("bounds.i_max", "must be at least 1"));
        }
        if b.mu_points == 0 {
            return Err(Error::config("bounds.mu_points", "must be at least 1"));
        }
        if !(b.eps_mass > 0.0 && b.eps_mass < 1.0) {
            return Err(Error::config("bounds.eps_mass", "must lie in (0, 1)"));
        }
        let bounds = MarkovBoundConfig { i_max: b.i_max, mu_points: b.mu_points, eps_mass: b.eps_mass };
        Ok(Self { file, plant, quant, code, x0, p0, sim, bounds })
    }

    /// Re-validates after edits to `file` (for example CLI overrides).
    pub fn with_file(file: ConfigFile) -> Result<Self> {
        Self::from_file(file)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const DESK: &str = r#"
[plant]
a = [[-1.13]]
b = [[1.0]]
c = [[1.0]]
w = [[1e-7]]
v = [[1e-7]]
k_con = [[-1.13]]
x_ref = [0.0]

[quantizer]
z_range = 0.01953125
n_bits = 8

[code]
n = 32
k = 8

[sim]
snr_db = [0.0, 1.0]
"#;

    #[test]
    fn defaults_resolve() {
        let cfg = ExperimentConfig::from_toml(DESK).unwrap();
        assert_eq!(cfg.sim.trials, 100);
        assert_eq!(cfg.sim.warmup_steps, 200);
        assert_eq!(cfg.sim.gamma_mode, GammaMode::Genie);
        assert_eq!(cfg.bounds.i_max, 5);
        assert_eq!(cfg.x0, Vector::zeros(1));
        assert!((cfg.p0[(0, 0)] - 1e-7).abs() < 1e-22);
        assert_eq!(cfg.file.plant.x0, Some(vec![0.0]));
    }

    #[test]
    fn errors_name_the_field() {
        let bad = DESK.replace("k = 8", "k = 9");
        let msg = ExperimentConfig::from_toml(&bad).unwrap_err().to_string();
        assert!(msg.contains("code.k"), "{msg}");
        let bad = DESK.replace("[sim]", "[sim]\nwarmup_steps = 5000");
        assert!(ExperimentConfig::from_toml(&bad).unwrap_err().to_string().contains("sim.warmup_steps"));
        let bad = DESK.replace("n_bits = 8", "n_bits = 8\nbogus = 1");
        assert!(ExperimentConfig::from_toml(&bad).unwrap_err().to_string().contains("bogus"));
        let bad = DESK.replace("v = [[1e-7]]", "v = [[1e-7, 0.0]]");
        assert!(ExperimentConfig::from_toml(&bad).unwrap_err().to_string().contains("plant"));
    }

    #[test]
    fn enum_text() {
        assert_eq!("CRC".parse::<GammaMode>().unwrap(), GammaMode::Crc);
        assert_eq!(DecoderChoice::Both.to_string(), "both");
        assert!("x".parse::<DecoderChoice>().is_err());
    }

    #[test]
    fn echo_roundtrip() {
        let cfg = ExperimentConfig::from_toml(DESK).unwrap();
        let text = toml::to_string(&cfg.file).unwrap();
        let again = ExperimentConfig::from_toml(&text).unwrap();
        assert_eq!(again.file, cfg.file);
    }
}
