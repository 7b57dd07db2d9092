//! Run configuration.
//!
//! One TOML document per run. Keys carry their units in the name, unknown
//! keys are rejected, and every range check names the offending field.
//!
//! ```toml
//! experiment = "dslit"
//!
//! [beam]
//! preset = "thermal-neutron"
//! ell0_over_lambda0 = 10.0
//!
//! [geometry]
//! mean_path_over_lambda0 = 50.0
//!
//! [sweep]
//! parameter = "delta_s_over_lambda0"
//! start = -40.0
//! stop = 40.0
//! n_points = 2049
//!
//! [output]
//! format = "csv"
//! precision = 12
//! ```

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use quup::{Beam, Constants};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::presets;

pub const DEFAULT_PRECISION: usize = 12;
/// `{:e}` on an `f64` stops changing past 17 significant digits.
pub const MAX_PRECISION: usize = 17;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Dslit,
    Cow,
    Packet,
    DualityReport,
    Verify,
}

impl ExperimentKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ExperimentKind::Dslit => "dslit",
            ExperimentKind::Cow => "cow",
            ExperimentKind::Packet => "packet",
            ExperimentKind::DualityReport => "duality-report",
            ExperimentKind::Verify => "verify",
        }
    }

    /// Sweep parameters this experiment understands.
    pub fn sweep_parameters(&self) -> &'static [&'static str] {
        match self {
            ExperimentKind::Dslit => &["delta_s_over_lambda0", "delta_s_m", "x_m"],
            ExperimentKind::Cow => &["alpha_rad"],
            ExperimentKind::Packet => &["delta_s_m", "sigma0_m", "gamma_per_s", "s1_m"],
            ExperimentKind::DualityReport => &["delta_s_over_2ell0"],
            ExperimentKind::Verify => &[],
        }
    }

    fn geometry_keys(&self) -> &'static [&'static str] {
        match self {
            ExperimentKind::Dslit => &["mean_path_m", "mean_path_over_lambda0", "d_m", "L_m", "i0"],
            ExperimentKind::Cow => &["H0_m", "L0_m", "alpha_rad", "q_cow", "q_ucow", "height_ratio", "i0"],
            _ => &[],
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format `{other}` (expected csv or json)")),
        }
    }
}

// ---- document as written ----

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub experiment: Option<ExperimentKind>,
    #[serde(default, skip_serializing_if = "BeamSection::is_empty")]
    pub beam: BeamSection,
    #[serde(default, skip_serializing_if = "GeometrySection::is_empty")]
    pub geometry: GeometrySection,
    #[serde(default, skip_serializing_if = "PacketSection::is_empty")]
    pub packet: PacketSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
    #[serde(default, skip_serializing_if = "OutputSection::is_empty")]
    pub output: OutputSection,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BeamSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mass_kg: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub momentum_kg_m_per_s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub speed_m_per_s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_per_s: Option<f64>,
    /// Sets `Γ` so that `ℓ0 = ell0_over_lambda0 · λ0`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ell0_over_lambda0: Option<f64>,
}

impl BeamSection {
    fn is_empty(&self) -> bool {
        *self == Self::default()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(non_snake_case)]
pub struct GeometrySection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_path_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_path_over_lambda0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub L_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub H0_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub L0_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_rad: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_cow: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_ucow: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub height_ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub i0: Option<f64>,
}

impl GeometrySection {
    fn is_empty(&self) -> bool {
        *self == Self::default()
    }

    fn present_keys(&self) -> Vec<&'static str> {
        let all = [
            ("mean_path_m", self.mean_path_m),
            ("mean_path_over_lambda0", self.mean_path_over_lambda0),
            ("d_m", self.d_m),
            ("L_m", self.L_m),
            ("H0_m", self.H0_m),
            ("L0_m", self.L0_m),
            ("alpha_rad", self.alpha_rad),
            ("q_cow", self.q_cow),
            ("q_ucow", self.q_ucow),
            ("height_ratio", self.height_ratio),
            ("i0", self.i0),
        ];
        all.iter().filter(|(_, v)| v.is_some()).map(|(k, _)| *k).collect()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PacketSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma0_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s1_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s2_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n0: Option<f64>,
}

impl PacketSection {
    fn is_empty(&self) -> bool {
        *self == Self::default()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub parameter: String,
    pub start: f64,
    pub stop: f64,
    pub n_points: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precision: Option<usize>,
}

impl OutputSection {
    fn is_empty(&self) -> bool {
        *self == Self::default()
    }
}

// ---- validated ----

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub parameter: String,
    pub start: f64,
    pub stop: f64,
    pub n_points: usize,
}

impl Sweep {
    pub fn values(&self) -> Result<Vec<f64>> {
        Ok(quup::scalar::linspace(self.start, self.stop, self.n_points)?)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub path: Option<String>,
    pub format: Format,
    pub precision: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DslitMean {
    Metres(f64),
    Wavelengths(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CowSource {
    /// Loop size in metres; phases from the beam.
    Loop { h0_m: f64, l0_m: f64 },
    /// Prescribed strengths.
    Synthetic { q_cow: f64, q_ucow: f64, height_ratio: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Setup {
    Dslit {
        mean: DslitMean,
        /// `(d, L)` for screen-coordinate sweeps.
        screen: Option<(f64, f64)>,
        i0: f64,
    },
    Cow {
        source: CowSource,
        alpha_rad: f64,
        i0: f64,
    },
    Packet {
        sigma0_m: f64,
        s1_m: f64,
        s2_m: f64,
        n0: f64,
    },
    DualityReport,
    Verify,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub experiment: ExperimentKind,
    pub beam: Option<Beam>,
    /// How the beam was specified, for the metadata header.
    pub beam_source: String,
    pub setup: Setup,
    pub sweep: Option<Sweep>,
    pub output: Output,
    /// The document the run was built from, re-serialised.
    pub echo: String,
}

/// Parses and validates `text`. `name` labels syntax errors.
pub fn parse_config(text: &str, name: &str, kind: ExperimentKind, constants: &Constants) -> Result<RunConfig> {
    let doc = parse_document(text, name)?;
    validate(doc, kind, constants)
}

/// Reads a config file; without one, the experiment's preset document.
pub fn load_config(path: Option<&Path>, kind: ExperimentKind, constants: &Constants) -> Result<RunConfig> {
    match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::io(p, e))?;
            parse_config(&text, &p.display().to_string(), kind, constants)
        }
        None => parse_config(presets::default_document(kind), "<preset>", kind, constants),
    }
}

pub fn parse_document(text: &str, name: &str) -> Result<Document> {
    toml::from_str(text).map_err(|e| syntax_error(text, name, &e))
}

pub(crate) fn syntax_error(text: &str, name: &str, e: &toml::de::Error) -> CliError {
    let (line, column) = match e.span() {
        Some(span) => line_column(text, span.start),
        None => (1, 1),
    };
    CliError::Syntax {
        source_name: name.to_string(),
        line,
        column,
        message: e.message().to_string(),
    }
}

/// 1-based line and column (in characters) of a byte offset.
fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let line_start = before.rfind('\n').map_or(0, |i| i + 1);
    (line, before[line_start..].chars().count() + 1)
}

fn positive(field: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(CliError::config(field, format!("must be finite and > 0, got {v}")))
    }
}

fn finite(field: &str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::config(field, format!("must be finite, got {v}")))
    }
}

fn non_negative(field: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v >= 0.0 {
        Ok(v)
    } else {
        Err(CliError::config(field, format!("must be finite and >= 0, got {v}")))
    }
}

fn require(field: &str, v: Option<f64>) -> Result<f64> {
    v.ok_or_else(|| CliError::config(field, "is required"))
}

pub fn validate(doc: Document, kind: ExperimentKind, constants: &Constants) -> Result<RunConfig> {
    if let Some(declared) = doc.experiment {
        if declared != kind {
            return Err(CliError::config(
                "experiment",
                format!("config is for `{declared}` but the `{kind}` command was run"),
            ));
        }
    }
    let echo = toml::to_string(&doc).map_err(|e| CliError::config("document", e.to_string()))?;

    let output = validate_output(&doc.output)?;
    if kind == ExperimentKind::Verify {
        if !(doc.beam.is_empty() && doc.geometry.is_empty() && doc.packet.is_empty() && doc.sweep.is_none()) {
            return Err(CliError::config("verify", "only the [output] section is used by verify"));
        }
        return Ok(RunConfig {
            experiment: kind,
            beam: None,
            beam_source: String::new(),
            setup: Setup::Verify,
            sweep: None,
            output,
            echo,
        });
    }

    for key in doc.geometry.present_keys() {
        if !kind.geometry_keys().contains(&key) {
            return Err(CliError::config(format!("geometry.{key}"), format!("not used by `{kind}`")));
        }
    }
    if kind != ExperimentKind::Packet && !doc.packet.is_empty() {
        return Err(CliError::config("packet", format!("section not used by `{kind}`")));
    }

    let (beam, beam_source) = validate_beam(&doc.beam, constants)?;
    let sweep = validate_sweep(doc.sweep.as_ref(), kind)?;
    let g = &doc.geometry;
    let i0 = match g.i0 {
        Some(v) => positive("geometry.i0", v)?,
        None => 1.0,
    };

    let setup = match kind {
        ExperimentKind::Dslit => {
            let mean = match (g.mean_path_m, g.mean_path_over_lambda0) {
                (Some(_), Some(_)) => {
                    return Err(CliError::config(
                        "geometry.mean_path_m",
                        "give either mean_path_m or mean_path_over_lambda0, not both",
                    ))
                }
                (Some(m), None) => DslitMean::Metres(positive("geometry.mean_path_m", m)?),
                (None, Some(w)) => DslitMean::Wavelengths(positive("geometry.mean_path_over_lambda0", w)?),
                (None, None) => DslitMean::Metres(1.0),
            };
            let screen = match (g.d_m, g.L_m) {
                (Some(d), Some(l)) => Some((positive("geometry.d_m", d)?, positive("geometry.L_m", l)?)),
                (None, None) => None,
                (None, Some(_)) => return Err(CliError::config("geometry.d_m", "required with geometry.L_m")),
                (Some(_), None) => return Err(CliError::config("geometry.L_m", "required with geometry.d_m")),
            };
            if sweep.as_ref().is_some_and(|s| s.parameter == "x_m") && screen.is_none() {
                return Err(CliError::config("geometry.d_m", "an x_m sweep needs geometry.d_m and geometry.L_m"));
            }
            Setup::Dslit { mean, screen, i0 }
        }
        ExperimentKind::Cow => {
            let loop_keys = g.H0_m.is_some() || g.L0_m.is_some();
            let synthetic_keys = g.q_cow.is_some() || g.q_ucow.is_some() || g.height_ratio.is_some();
            let source = if synthetic_keys {
                if loop_keys {
                    return Err(CliError::config(
                        "geometry.q_cow",
                        "give either H0_m/L0_m or q_cow/q_ucow, not both",
                    ));
                }
                CowSource::Synthetic {
                    q_cow: finite("geometry.q_cow", require("geometry.q_cow", g.q_cow)?)?,
                    q_ucow: non_negative("geometry.q_ucow", require("geometry.q_ucow", g.q_ucow)?)?,
                    height_ratio: positive("geometry.height_ratio", g.height_ratio.unwrap_or(1.0))?,
                }
            } else {
                CowSource::Loop {
                    h0_m: positive("geometry.H0_m", require("geometry.H0_m", g.H0_m)?)?,
                    l0_m: positive("geometry.L0_m", require("geometry.L0_m", g.L0_m)?)?,
                }
            };
            let alpha_rad = finite("geometry.alpha_rad", g.alpha_rad.unwrap_or(0.0))?;
            Setup::Cow { source, alpha_rad, i0 }
        }
        ExperimentKind::Packet => {
            let p = &doc.packet;
            let sigma0_m = positive("packet.sigma0_m", require("packet.sigma0_m", p.sigma0_m)?)?;
            let s1_m = positive("packet.s1_m", require("packet.s1_m", p.s1_m)?)?;
            let s2_m = positive("packet.s2_m", p.s2_m.unwrap_or(s1_m))?;
            let n0 = positive("packet.n0", p.n0.unwrap_or(1.0))?;
            Setup::Packet { sigma0_m, s1_m, s2_m, n0 }
        }
        ExperimentKind::DualityReport => {
            if !g.is_empty() {
                return Err(CliError::config("geometry", "section not used by `duality-report`"));
            }
            if beam.is_stable() {
                return Err(CliError::config("beam.gamma", "duality-report needs an unstable beam (gamma > 0)"));
            }
            Setup::DualityReport
        }
        ExperimentKind::Verify => unreachable!("handled above"),
    };

    Ok(RunConfig {
        experiment: kind,
        beam: Some(beam),
        beam_source,
        setup,
        sweep,
        output,
        echo,
    })
}

fn validate_output(o: &OutputSection) -> Result<Output> {
    let precision = o.precision.unwrap_or(DEFAULT_PRECISION);
    if precision == 0 || precision > MAX_PRECISION {
        return Err(CliError::config(
            "output.precision",
            format!("must be in 1..={MAX_PRECISION}, got {precision}"),
        ));
    }
    if o.path.as_deref() == Some("") {
        return Err(CliError::config("output.path", "must not be empty"));
    }
    Ok(Output {
        path: o.path.clone(),
        format: o.format.unwrap_or_default(),
        precision,
    })
}

fn validate_sweep(s: Option<&SweepSection>, kind: ExperimentKind) -> Result<Option<Sweep>> {
    let Some(s) = s else { return Ok(None) };
    let allowed = kind.sweep_parameters();
    if !allowed.contains(&s.parameter.as_str()) {
        return Err(CliError::config(
            "sweep.parameter",
            format!("`{}` is not a `{kind}` parameter (expected one of {})", s.parameter, allowed.join(", ")),
        ));
    }
    finite("sweep.start", s.start)?;
    finite("sweep.stop", s.stop)?;
    if s.n_points < 2 {
        return Err(CliError::config("sweep.n_points", format!("must be >= 2, got {}", s.n_points)));
    }
    if s.stop <= s.start {
        return Err(CliError::config("sweep.stop", "must be greater than sweep.start"));
    }
    Ok(Some(Sweep {
        parameter: s.parameter.clone(),
        start: s.start,
        stop: s.stop,
        n_points: s.n_points,
    }))
}

fn validate_beam(b: &BeamSection, constants: &Constants) -> Result<(Beam, String)> {
    if let Some(g) = b.gamma_per_s {
        // named after the physical quantity, as the library does
        non_negative("beam.gamma", g)?;
    }
    if b.gamma_per_s.is_some() && b.ell0_over_lambda0.is_some() {
        return Err(CliError::config(
            "beam.ell0_over_lambda0",
            "give either gamma_per_s or ell0_over_lambda0, not both",
        ));
    }

    let (base, mut source) = match (&b.preset, b.mass_kg) {
        (Some(_), Some(_)) => {
            return Err(CliError::config("beam.mass_kg", "give either a preset or explicit parameters, not both"))
        }
        (Some(name), None) => {
            if b.momentum_kg_m_per_s.is_some() || b.speed_m_per_s.is_some() {
                return Err(CliError::config("beam.preset", "a preset fixes the momentum"));
            }
            (presets::beam(name, constants)?, format!("preset {name}"))
        }
        (None, Some(m)) => {
            let m = positive("beam.mass_kg", m)?;
            let gamma = b.gamma_per_s.unwrap_or(0.0);
            let beam = match (b.momentum_kg_m_per_s, b.speed_m_per_s) {
                (Some(p), None) => Beam::new(m, positive("beam.momentum_kg_m_per_s", p)?, gamma, constants)?,
                (None, Some(v)) => Beam::from_speed(m, positive("beam.speed_m_per_s", v)?, gamma, constants)?,
                _ => {
                    return Err(CliError::config(
                        "beam.momentum_kg_m_per_s",
                        "give exactly one of momentum_kg_m_per_s or speed_m_per_s",
                    ))
                }
            };
            (beam, "explicit".to_string())
        }
        (None, None) => return Err(CliError::config("beam.preset", "give a preset or beam.mass_kg")),
    };

    let beam = if let Some(n) = b.ell0_over_lambda0 {
        source.push_str(&format!(", ell0 = {n} lambda0"));
        base.with_survival_in_wavelengths(positive("beam.ell0_over_lambda0", n)?)?
    } else if let (Some(g), Some(_)) = (b.gamma_per_s, &b.preset) {
        source.push_str(&format!(", gamma = {g} /s"));
        Beam::new(base.mass(), base.momentum(), g, constants)?
    } else {
        base
    };
    Ok((beam, source))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k() -> Constants {
        Constants::codata()
    }

    fn parse(text: &str, kind: ExperimentKind) -> Result<RunConfig> {
        parse_config(text, "test.toml", kind, &k())
    }

    #[test]
    fn minimal_dslit() {
        let c = parse("[beam]\npreset = \"thermal-neutron\"\n", ExperimentKind::Dslit).unwrap();
        let b = c.beam.unwrap();
        assert_eq!(b, Beam::thermal_neutron(&k()));
        assert_eq!(c.output.precision, 12);
        assert_eq!(c.output.format, Format::Csv);
        assert!(c.sweep.is_none());
    }

    #[test]
    fn negative_gamma_names_the_field() {
        let err = parse("[beam]\npreset = \"thermal-neutron\"\ngamma_per_s = -1.0\n", ExperimentKind::Dslit).unwrap_err();
        assert!(matches!(&err, CliError::Config { field, .. } if field == "beam.gamma"), "{err}");
        assert_eq!(err.exit_code(), 2);
        let err = parse("[beam]\nmass_kg = 1e-27\nspeed_m_per_s = 10.0\ngamma_per_s = -2.0\n", ExperimentKind::Dslit)
            .unwrap_err();
        assert!(err.to_string().contains("beam.gamma"));
    }

    #[test]
    fn cow_loop_preset() {
        let text = "[beam]\npreset = \"thermal-neutron\"\n[geometry]\nH0_m = 0.1\nL0_m = 0.1\n";
        let c = parse(text, ExperimentKind::Cow).unwrap();
        assert_eq!(
            c.setup,
            Setup::Cow {
                source: CowSource::Loop { h0_m: 0.1, l0_m: 0.1 },
                alpha_rad: 0.0,
                i0: 1.0
            }
        );
        assert_eq!(c.beam.unwrap().group_velocity(), 2200.0);
    }

    #[test]
    fn unknown_keys_rejected_with_position() {
        let err = parse("[beam]\npreset = \"thermal-neutron\"\nmass = 3\n", ExperimentKind::Dslit).unwrap_err();
        match err {
            CliError::Syntax { line, column, message, .. } => {
                assert_eq!((line, column), (3, 1));
                assert!(message.contains("mass"), "{message}");
            }
            other => panic!("{other}"),
        }
        let err = parse("[beam]\npreset = \n", ExperimentKind::Dslit).unwrap_err();
        assert!(matches!(err, CliError::Syntax { line: 2, .. }), "{err}");
    }

    #[test]
    fn cross_experiment_keys_rejected() {
        let text = "[beam]\npreset = \"thermal-neutron\"\n[geometry]\nH0_m = 0.1\n";
        let err = parse(text, ExperimentKind::Dslit).unwrap_err();
        assert!(matches!(&err, CliError::Config { field, .. } if field == "geometry.H0_m"));
        let text = "experiment = \"cow\"\n[beam]\npreset = \"thermal-neutron\"\n";
        assert!(matches!(parse(text, ExperimentKind::Dslit), Err(CliError::Config { .. })));
    }

    #[test]
    fn sweep_checks() {
        let base = "[beam]\npreset = \"thermal-neutron\"\n[geometry]\nH0_m = 0.1\nL0_m = 0.1\n";
        let bad_param = format!("{base}[sweep]\nparameter = \"x_m\"\nstart = 0.0\nstop = 1.0\nn_points = 5\n");
        assert!(matches!(parse(&bad_param, ExperimentKind::Cow), Err(CliError::Config { field, .. }) if field == "sweep.parameter"));
        let one = format!("{base}[sweep]\nparameter = \"alpha_rad\"\nstart = 0.0\nstop = 1.0\nn_points = 1\n");
        assert!(matches!(parse(&one, ExperimentKind::Cow), Err(CliError::Config { field, .. }) if field == "sweep.n_points"));
        let inverted = format!("{base}[sweep]\nparameter = \"alpha_rad\"\nstart = 1.0\nstop = 0.0\nn_points = 3\n");
        assert!(parse(&inverted, ExperimentKind::Cow).is_err());
    }

    #[test]
    fn presets_parse_for_every_experiment() {
        for kind in [
            ExperimentKind::Dslit,
            ExperimentKind::Cow,
            ExperimentKind::Packet,
            ExperimentKind::DualityReport,
            ExperimentKind::Verify,
        ] {
            let c = load_config(None, kind, &k()).unwrap();
            assert_eq!(c.experiment, kind);
            // the echo is itself a valid document for the same experiment
            assert_eq!(parse(&c.echo, kind).unwrap(), c);
        }
    }

    #[test]
    fn exclusive_beam_keys() {
        let both = "[beam]\npreset = \"thermal-neutron\"\ngamma_per_s = 1.0\nell0_over_lambda0 = 3.0\n";
        assert!(parse(both, ExperimentKind::Dslit).is_err());
        let neither = "[beam]\nmass_kg = 1.0\n";
        assert!(parse(neither, ExperimentKind::Dslit).is_err());
        let c = parse("[beam]\npreset = \"stable-neutron\"\nell0_over_lambda0 = 10.0\n", ExperimentKind::Dslit).unwrap();
        let b = c.beam.unwrap();
        assert!((b.survival_length().unwrap() / b.wavelength() - 10.0).abs() < 1e-12);
    }

    #[test]
    fn line_columns() {
        assert_eq!(line_column("ab\ncd", 0), (1, 1));
        assert_eq!(line_column("ab\ncd", 4), (2, 2));
        assert_eq!(line_column("αβ\nx", 4), (1, 3));
    }
}
