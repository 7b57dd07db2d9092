//! Named beams, default run documents and the constants table.

use std::path::Path;

use quup::{Beam, Constants};
use serde::Deserialize;

use crate::config::{syntax_error, ExperimentKind};
use crate::error::{CliError, Result};

/// Environment variable naming a constants TOML file.
pub const CONSTANTS_ENV: &str = "QUUP_CONSTANTS";

pub const BEAM_PRESETS: &[&str] = &["thermal-neutron", "stable-neutron"];

pub fn beam(name: &str, constants: &Constants) -> Result<Beam> {
    match name {
        "thermal-neutron" => Ok(Beam::thermal_neutron(constants)),
        "stable-neutron" => Ok(Beam::stable_neutron(constants)),
        other => Err(CliError::config(
            "beam.preset",
            format!("unknown preset `{other}` (expected one of {})", BEAM_PRESETS.join(", ")),
        )),
    }
}

const DSLIT: &str = r#"experiment = "dslit"

[beam]
preset = "thermal-neutron"
ell0_over_lambda0 = 10.0

[geometry]
mean_path_over_lambda0 = 50.0

[sweep]
parameter = "delta_s_over_lambda0"
start = -40.0
stop = 40.0
n_points = 2049
"#;

const COW: &str = r#"experiment = "cow"

[beam]
preset = "thermal-neutron"

[geometry]
H0_m = 0.1
L0_m = 0.1

[sweep]
parameter = "alpha_rad"
start = -1.5707963267948966
stop = 1.5707963267948966
n_points = 1001
"#;

// ℓ0 = 1 m so that attenuation is visible over the packet paths
const PACKET: &str = r#"experiment = "packet"

[beam]
preset = "thermal-neutron"
gamma_per_s = 2200.0

[packet]
sigma0_m = 1.0e-4
s1_m = 0.5

[sweep]
parameter = "delta_s_m"
start = -4.0e-4
stop = 4.0e-4
n_points = 201
"#;

const DUALITY: &str = r#"experiment = "duality-report"

[beam]
preset = "thermal-neutron"
ell0_over_lambda0 = 10.0

[sweep]
parameter = "delta_s_over_2ell0"
start = 0.0
stop = 10.0
n_points = 101
"#;

const VERIFY: &str = "experiment = \"verify\"\n";

/// The document used when no `--config` is given.
pub fn default_document(kind: ExperimentKind) -> &'static str {
    match kind {
        ExperimentKind::Dslit => DSLIT,
        ExperimentKind::Cow => COW,
        ExperimentKind::Packet => PACKET,
        ExperimentKind::DualityReport => DUALITY,
        ExperimentKind::Verify => VERIFY,
    }
}

/// Overrides of the built-in constants. Missing keys keep their defaults.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(non_snake_case)]
struct ConstantsTable {
    hbar_J_s: Option<f64>,
    c_m_per_s: Option<f64>,
    g_m_per_s2: Option<f64>,
    m_neutron_kg: Option<f64>,
}

pub fn parse_constants(text: &str, name: &str) -> Result<Constants> {
    let t: ConstantsTable = toml::from_str(text).map_err(|e| syntax_error(text, name, &e))?;
    let d = Constants::codata();
    Ok(Constants::new(
        t.hbar_J_s.unwrap_or(d.hbar()),
        t.c_m_per_s.unwrap_or(d.c()),
        t.g_m_per_s2.unwrap_or(d.g_std()),
        t.m_neutron_kg.unwrap_or(d.m_neutron()),
    )?)
}

/// Constants from `path`, or the built-in table. The string names the source.
pub fn load_constants(path: Option<&Path>) -> Result<(Constants, String)> {
    match path {
        None => Ok((Constants::codata(), "builtin".to_string())),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::io(p, e))?;
            let name = p.display().to_string();
            Ok((parse_constants(&text, &name)?, name))
        }
    }
}

/// Constants named by [`CONSTANTS_ENV`], if set.
pub fn constants_from_env() -> Result<(Constants, String)> {
    match std::env::var_os(CONSTANTS_ENV) {
        Some(p) if !p.is_empty() => load_constants(Some(Path::new(&p))),
        _ => load_constants(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets() {
        let k = Constants::codata();
        assert!(beam("thermal-neutron", &k).unwrap().decay_rate() > 0.0);
        assert!(beam("stable-neutron", &k).unwrap().is_stable());
        assert!(matches!(beam("muon", &k), Err(CliError::Config { .. })));
    }

    #[test]
    fn constants_table() {
        let k = parse_constants("g_m_per_s2 = 9.81\n", "k.toml").unwrap();
        assert_eq!(k.g_std(), 9.81);
        assert_eq!(k.hbar(), Constants::codata().hbar());
        assert!(matches!(parse_constants("g = 1.0\n", "k.toml"), Err(CliError::Syntax { .. })));
        assert!(parse_constants("hbar_J_s = -1.0\n", "k.toml").is_err());
    }
}
