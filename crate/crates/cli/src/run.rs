//! Sweeps. Points are evaluated on a rayon pool and written in sweep order,
//! so the output does not depend on the worker count.

use std::f64::consts::FRAC_PI_2;

use quup::cow::{self, CowModel};
use quup::doubleslit;
use quup::duality::{self, ExtractionRule, DEFAULT_DUALITY_TOLERANCE};
use quup::wavepacket::{self, PacketParams, TwoPathPacketSetup};
use quup::{Beam, Constants, CowGeometry, Phases, SlitGeometry, Splitter};
use rayon::prelude::*;

use crate::config::{CowSource, DslitMean, RunConfig, Setup};
use crate::error::{CliError, Result};
use crate::output::{col, fmt_num, Cell, Column, Table};
use crate::verify;

/// Settings that come from the environment rather than the config.
#[derive(Debug, Clone)]
pub struct Context {
    pub constants: Constants,
    pub constants_source: String,
    /// Worker threads; `None` lets rayon choose.
    pub threads: Option<usize>,
}

impl Context {
    pub fn new(constants: Constants, constants_source: impl Into<String>, threads: Option<usize>) -> Self {
        Self {
            constants,
            constants_source: constants_source.into(),
            threads,
        }
    }
}

/// Maps `f` over `items` in parallel. Results keep the input order and the
/// first error in that order is returned.
pub fn par_map<T, R, F>(threads: Option<usize>, items: &[T], f: F) -> Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Result<R> + Sync + Send,
{
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| CliError::config("threads", e.to_string()))?;
    let results: Vec<Result<R>> = pool.install(|| items.par_iter().map(&f).collect());
    results.into_iter().collect()
}

/// Runs one experiment into a table.
pub fn run(config: &RunConfig, ctx: &Context) -> Result<Table> {
    let mut table = Table {
        config_echo: config.echo.clone(),
        ..Default::default()
    };
    header(&mut table, config, ctx);
    match &config.setup {
        Setup::Dslit { mean, screen, i0 } => dslit(&mut table, config, ctx, *mean, *screen, *i0)?,
        Setup::Cow { source, alpha_rad, i0 } => cow_scan(&mut table, config, ctx, *source, *alpha_rad, *i0)?,
        Setup::Packet {
            sigma0_m,
            s1_m,
            s2_m,
            n0,
        } => packet(&mut table, config, ctx, *sigma0_m, *s1_m, *s2_m, *n0)?,
        Setup::DualityReport => duality_report(&mut table, config, ctx)?,
        Setup::Verify => verify::suite(&mut table, ctx)?,
    }
    Ok(table)
}

fn g(x: f64) -> String {
    // shortest round-trip form
    format!("{x:e}")
}

fn header(t: &mut Table, config: &RunConfig, ctx: &Context) {
    let k = &ctx.constants;
    t.meta("generator", format!("quup-cli {} (quup {})", env!("CARGO_PKG_VERSION"), quup::VERSION));
    t.meta("experiment", config.experiment.as_str());
    t.meta(
        "constants",
        format!(
            "hbar_J_s={} c_m_per_s={} g_m_per_s2={} m_neutron_kg={}",
            g(k.hbar()),
            g(k.c()),
            g(k.g_std()),
            g(k.m_neutron())
        ),
    );
    t.meta("constants_source", ctx.constants_source.clone());
    if let Some(b) = &config.beam {
        t.meta("beam_source", config.beam_source.clone());
        let ell0 = b.survival_length().map_or("inf".to_string(), g);
        t.meta(
            "beam",
            format!(
                "mass_kg={} momentum_kg_m_per_s={} speed_m_per_s={} gamma_per_s={} lambda0_m={} ell0_m={} k0_per_m={} kappa0_per_m={}",
                g(b.mass()),
                g(b.momentum()),
                g(b.group_velocity()),
                g(b.decay_rate()),
                g(b.wavelength()),
                ell0,
                g(b.wavenumber()),
                g(b.attenuation())
            ),
        );
        let v = b.check_validity();
        t.meta(
            "validity",
            format!(
                "kinetic_to_rest={} decay_to_kinetic={} attenuation_to_wavenumber={} threshold={} passes={}",
                g(v.kinetic_to_rest),
                g(v.decay_to_kinetic),
                g(v.attenuation_to_wavenumber),
                g(v.threshold),
                v.passes()
            ),
        );
    }
    if let Some(s) = &config.sweep {
        t.meta(
            "sweep",
            format!("parameter={} start={} stop={} n_points={}", s.parameter, g(s.start), g(s.stop), s.n_points),
        );
    }
}

fn sweep_values(config: &RunConfig, single: f64) -> Result<Vec<f64>> {
    match &config.sweep {
        Some(s) => s.values(),
        None => Ok(vec![single]),
    }
}

fn beam(config: &RunConfig) -> &Beam {
    config.beam.as_ref().expect("validated experiments carry a beam")
}

const DSLIT_COLUMNS: [Column; 11] = [
    col("delta_s_m", "path difference s_BD - s_CD (m)"),
    col("delta_s_over_lambda0", "path difference in units of lambda0 = hbar/p0"),
    col("P", "detection probability with unit source probability"),
    col("I", "intensity I0/2 [1 + V cos(delta_s/lambda0)]"),
    col("V_closed", "visibility sech(delta_s/2 ell0)"),
    col("V_extracted", "visibility extracted from this sweep's extrema; NaN when v_extracted_ok = 0"),
    col("v_extracted_ok", "1 when an extracted fringe lies within half a fringe of this point"),
    col("Pred", "predictability tanh(|delta_s|/2 ell0)"),
    col("Pred_ratio", "predictability |P_BD - P_CD|/(P_BD + P_CD) from path survival"),
    col("duality_residual", "V_closed^2 + Pred^2 - 1"),
    col("duality_status", "coherent, partial or violation"),
];

fn dslit(
    t: &mut Table,
    config: &RunConfig,
    ctx: &Context,
    mean: DslitMean,
    screen: Option<(f64, f64)>,
    i0: f64,
) -> Result<()> {
    let b = beam(config);
    let lambda0 = b.wavelength();
    let mean_m = match mean {
        DslitMean::Metres(m) => m,
        DslitMean::Wavelengths(w) => w * lambda0,
    };
    let param = config.sweep.as_ref().map_or("delta_s_m", |s| s.parameter.as_str());
    let values = sweep_values(config, 0.0)?;
    t.meta("mean_path_m", g(mean_m));
    t.meta("i0", g(i0));

    let points = par_map(ctx.threads, &values, |&v| {
        let geo = match param {
            "x_m" => {
                let (d, l) = screen.expect("validated");
                SlitGeometry::from_screen(d, v, l)?
            }
            "delta_s_over_lambda0" => SlitGeometry::symmetric(mean_m, v * lambda0)?,
            _ => SlitGeometry::symmetric(mean_m, v)?,
        };
        let point = doubleslit::intensity(b, &geo, i0)?;
        let pred = doubleslit::predictability(b, &geo);
        let v_closed = doubleslit::visibility(b, geo.delta_s());
        let check = duality::duality_check(v_closed, pred.closed)?;
        Ok((point, pred, v_closed, check))
    })?;

    // extraction runs over the whole scan in units of lambda0
    let mut samples: Vec<(f64, f64)> = points.iter().map(|(p, ..)| (p.delta_s / lambda0, p.intensity)).collect();
    // screen sweeps run towards negative Δs
    if samples.windows(2).all(|w| w[1].0 < w[0].0) {
        samples.reverse();
    }
    let extracted = if samples.windows(2).all(|w| w[1].0 > w[0].0) && samples.len() >= 3 {
        duality::extract_fringe_visibility(&samples, ExtractionRule::default())?
    } else {
        Vec::new()
    };
    t.meta("extraction_rule", "envelope-at-minima");
    t.meta("extracted_fringes", extracted.len().to_string());

    t.columns = DSLIT_COLUMNS.to_vec();
    for (p, pred, v_closed, check) in &points {
        let x = p.delta_s / lambda0;
        let nearest = extracted
            .iter()
            .min_by(|a, b| (a.position - x).abs().total_cmp(&(b.position - x).abs()))
            .filter(|e| (e.position - x).abs() <= std::f64::consts::PI);
        t.rows.push(vec![
            Cell::Num(p.delta_s),
            Cell::Num(x),
            Cell::Num(p.probability),
            Cell::Num(p.intensity),
            Cell::Num(*v_closed),
            Cell::Num(nearest.map_or(f64::NAN, |e| e.visibility)),
            Cell::Flag(nearest.is_some()),
            Cell::Num(pred.closed),
            Cell::Num(pred.ratio),
            Cell::Num(check.residual),
            Cell::Text(check.status.as_str().to_string()),
        ]);
    }
    Ok(())
}

const COW_COLUMNS: [Column; 10] = [
    col("alpha_rad", "tilt of the loop plane about the incident beam (rad)"),
    col("P_D1", "detector-1 probability, closed form"),
    col("P_D1_amplitude", "detector-1 probability from the two-path amplitude sum"),
    col("P_D2", "detector-2 probability from the two-path amplitude sum"),
    col("I", "intensity I0/2 [1 + V cos(q_cow sin alpha)]"),
    col("V", "visibility sech(q_ucow sin alpha)"),
    col("Pred", "predictability |tanh(q_ucow sin alpha)|"),
    col("duality_residual", "V^2 + Pred^2 - 1"),
    col("cow_phase", "q_cow sin alpha (rad)"),
    col("ucow_phase", "q_ucow sin alpha"),
];

fn cow_scan(t: &mut Table, config: &RunConfig, ctx: &Context, source: CowSource, alpha: f64, i0: f64) -> Result<()> {
    let model = match source {
        CowSource::Loop { h0_m, l0_m } => CowModel::Physical {
            beam: *beam(config),
            geometry: CowGeometry::new(h0_m, l0_m, alpha)?,
            constants: ctx.constants,
        },
        CowSource::Synthetic {
            q_cow,
            q_ucow,
            height_ratio,
        } => CowModel::Synthetic {
            q_cow,
            q_ucow,
            height_ratio,
        },
    };
    let at_rest = model.phases(0.0)?;
    t.meta("model", if matches!(source, CowSource::Loop { .. }) { "loop" } else { "synthetic" });
    t.meta("q_cow", g(at_rest.q_cow));
    t.meta("q_ucow", g(at_rest.q_ucow));
    t.meta("splitter", "balanced");
    t.meta("i0", g(i0));

    let values = sweep_values(config, alpha)?;
    let splitter = Splitter::balanced();
    let rows = par_map(ctx.threads, &values, |&a| Ok(cow::rotation_row(&model, a, &splitter, i0)?))?;
    t.columns = COW_COLUMNS.to_vec();
    for r in rows {
        t.rows.push(vec![
            Cell::Num(r.alpha),
            Cell::Num(r.p_d1),
            Cell::Num(r.p_d1_amplitude),
            Cell::Num(r.p_d2),
            Cell::Num(r.intensity),
            Cell::Num(r.visibility),
            Cell::Num(r.predictability),
            Cell::Num(r.duality_residual),
            Cell::Num(r.cow_phase),
            Cell::Num(r.ucow_phase),
        ]);
    }
    Ok(())
}

const PACKET_COLUMNS: [Column; 17] = [
    col("s1_m", "path length 1 (m)"),
    col("s2_m", "path length 2 (m)"),
    col("sigma0_m", "packet width (m)"),
    col("gamma_per_s", "decay rate (1/s)"),
    col("P1_num", "path-1 detection probability, quadrature from t = 0"),
    col("P1_ana", "path-1 detection probability, closed form"),
    col("P2_num", "path-2 detection probability, quadrature from t = 0"),
    col("P2_ana", "path-2 detection probability, closed form"),
    col("P12_num", "interference term, quadrature from t = 0"),
    col("P12_ana", "interference term, closed form"),
    col("P_num", "P1_num + P2_num + P12_num"),
    col("P_ana", "P1_ana + P2_ana + P12_ana"),
    col("rel_err", "max of |dP1|/P1, |dP2|/P2 and |dP12|/(P1 + P2), closed form as reference"),
    col("log10_lower_limit_gap", "log10 of the largest relative change from taking the lower time limit to -inf"),
    col("valid_separated", "1 when min(s1, s2) >= 30 sigma0"),
    col("valid_slow_decay", "1 when gamma sigma0/v <= 1e-3"),
    col("valid_no_spreading", "1 when the transit time is <= 1e-2 of the spreading time"),
];

#[allow(clippy::too_many_arguments)]
fn packet(t: &mut Table, config: &RunConfig, ctx: &Context, sigma0: f64, s1: f64, s2: f64, n0: f64) -> Result<()> {
    let b = beam(config);
    let base = PacketParams::from_beam(b, sigma0)?.with_normalization(n0)?;
    t.meta("n0", g(n0));
    let param = config.sweep.as_ref().map(|s| s.parameter.as_str());
    let values = sweep_values(config, f64::NAN)?;
    let rows = par_map(ctx.threads, &values, |&v| {
        let (p, a, c) = match param {
            None => (base, s1, s2),
            Some("delta_s_m") => (base, s1, s1 - v),
            Some("sigma0_m") => (PacketParams::new(v, base.k0(), base.group_velocity(), base.gamma())?.with_normalization(n0)?, s1, s2),
            Some("gamma_per_s") => (base.with_gamma(v)?, s1, s2),
            Some("s1_m") => (base, v, v - (s1 - s2)),
            Some(other) => unreachable!("validated sweep parameter {other}"),
        };
        let setup = TwoPathPacketSetup::new(a, c, p)?;
        let num = wavepacket::detection_probability_numeric(&setup)?;
        let ana = wavepacket::detection_probability_analytic(&setup);
        Ok((setup, num, ana))
    })?;
    t.columns = PACKET_COLUMNS.to_vec();
    for (setup, num, ana) in rows {
        let (pn, pa) = (num.probabilities, ana);
        let rel_err = [
            (pn.p1 - pa.p1).abs() / pa.p1,
            (pn.p2 - pa.p2).abs() / pa.p2,
            (pn.p12 - pa.p12).abs() / (pa.p1 + pa.p2),
        ]
        .into_iter()
        .fold(0.0, f64::max);
        let log_gap = num.log_lower_limit_gap.into_iter().fold(f64::NEG_INFINITY, f64::max) / std::f64::consts::LN_10;
        let p = setup.packet();
        t.rows.push(vec![
            Cell::Num(setup.s1()),
            Cell::Num(setup.s2()),
            Cell::Num(p.sigma0()),
            Cell::Num(p.gamma()),
            Cell::Num(pn.p1),
            Cell::Num(pa.p1),
            Cell::Num(pn.p2),
            Cell::Num(pa.p2),
            Cell::Num(pn.p12),
            Cell::Num(pa.p12),
            Cell::Num(pn.total),
            Cell::Num(pa.total),
            Cell::Num(rel_err),
            Cell::Num(log_gap),
            Cell::Flag(num.validity.separated()),
            Cell::Flag(num.validity.slow_decay()),
            Cell::Flag(num.validity.no_spreading()),
        ]);
    }
    Ok(())
}

const DUALITY_COLUMNS: [Column; 7] = [
    col("source", "dslit: slits at delta_s = 2 ell0 x; cow: loop with q_ucow sin alpha = x"),
    col("x", "argument of sech and tanh"),
    col("visibility", "closed-form visibility"),
    col("predictability", "closed-form predictability"),
    col("predictability_paths", "predictability from the two path survival probabilities"),
    col("residual", "visibility^2 + predictability^2 - 1"),
    col("status", "coherent, partial or violation"),
];

fn duality_report(t: &mut Table, config: &RunConfig, ctx: &Context) -> Result<()> {
    let b = beam(config);
    let ell0 = b.survival_length().expect("validated unstable beam");
    t.meta("tolerance", g(DEFAULT_DUALITY_TOLERANCE));
    let values = sweep_values(config, 0.5)?;
    let rows = par_map(ctx.threads, &values, |&x| {
        if x.is_nan() || x < 0.0 {
            return Err(CliError::config("sweep.start", "duality-report arguments must be >= 0"));
        }
        let ds = 2.0 * ell0 * x;
        // any mean path longer than |Δs|/2 gives the same ratio
        let geo = SlitGeometry::symmetric(ell0 * (1.0 + x), ds)?;
        let v = doubleslit::visibility(b, ds);
        let p = doubleslit::predictability(b, &geo);
        let slit = duality::duality_check(v, p.closed)?;
        let ph = Phases::synthetic(0.0, x, FRAC_PI_2, 1.0)?;
        let loop_check = duality::duality_check(ph.visibility(), ph.predictability())?;
        Ok([
            ("dslit", x, slit, p.ratio),
            ("cow", x, loop_check, ph.predictability_from_paths()),
        ])
    })?;
    t.columns = DUALITY_COLUMNS.to_vec();
    let mut worst: f64 = 0.0;
    for pair in rows {
        for (source, x, r, paths) in pair {
            worst = worst.max(r.residual.abs());
            t.rows.push(vec![
                Cell::Text(source.to_string()),
                Cell::Num(x),
                Cell::Num(r.visibility),
                Cell::Num(r.predictability),
                Cell::Num(paths),
                Cell::Num(r.residual),
                Cell::Text(r.status.as_str().to_string()),
            ]);
        }
    }
    t.meta("max_abs_residual", fmt_num(worst, 3));
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{load_config, parse_config, ExperimentKind};

    fn ctx(threads: usize) -> Context {
        Context::new(Constants::codata(), "builtin", Some(threads))
    }

    #[test]
    fn par_map_keeps_order_and_first_error() {
        let items: Vec<usize> = (0..100).collect();
        let out = par_map(Some(4), &items, |&i| Ok(i * 2)).unwrap();
        assert_eq!(out, (0..100).map(|i| i * 2).collect::<Vec<_>>());
        let err = par_map(Some(4), &items, |&i| {
            if i % 30 == 29 {
                Err(CliError::config(format!("item{i}"), "bad"))
            } else {
                Ok(i)
            }
        })
        .unwrap_err();
        assert!(matches!(err, CliError::Config { field, .. } if field == "item29"));
    }

    #[test]
    fn default_dslit_matches_envelope() {
        let c = load_config(None, ExperimentKind::Dslit, &Constants::codata()).unwrap();
        let t = run(&c, &ctx(2)).unwrap();
        assert_eq!(t.rows.len(), 2049);
        let mut checked = 0;
        for r in &t.rows {
            if let (Cell::Num(v_closed), Cell::Num(v_ex), Cell::Flag(true)) = (&r[4], &r[5], &r[6]) {
                // only exact at fringe centres; between them the nearest fringe's value
                assert!((v_closed - v_ex).abs() < 0.1);
                checked += 1;
            }
        }
        assert!(checked > 1500);
    }

    #[test]
    fn cow_golden_metadata() {
        let c = load_config(None, ExperimentKind::Cow, &Constants::codata()).unwrap();
        let t = run(&c, &ctx(1)).unwrap();
        let q: f64 = t.metadata.iter().find(|(k, _)| k == "q_cow").unwrap().1.parse().unwrap();
        assert!((600.0..=800.0).contains(&q));
        assert_eq!(t.rows.len(), 1001);
    }

    #[test]
    fn packet_default_rows() {
        let text = "[beam]\npreset = \"thermal-neutron\"\ngamma_per_s = 2200.0\n[packet]\nsigma0_m = 1e-4\ns1_m = 0.5\n\
                    [sweep]\nparameter = \"sigma0_m\"\nstart = 1e-4\nstop = 2e-4\nn_points = 3\n";
        let c = parse_config(text, "p.toml", ExperimentKind::Packet, &Constants::codata()).unwrap();
        let t = run(&c, &ctx(2)).unwrap();
        assert_eq!(t.rows.len(), 3);
        for r in &t.rows {
            let Cell::Num(rel) = r[12] else { panic!() };
            assert!(rel < 1e-6, "{rel}");
            assert_eq!(r[14], Cell::Flag(true));
        }
    }

    #[test]
    fn duality_rows_are_coherent() {
        let c = load_config(None, ExperimentKind::DualityReport, &Constants::codata()).unwrap();
        let t = run(&c, &ctx(3)).unwrap();
        assert_eq!(t.rows.len(), 202);
        for r in &t.rows {
            let Cell::Num(res) = r[5] else { panic!() };
            assert!(res.abs() <= 1e-12);
            assert_eq!(r[6], Cell::Text("coherent".into()));
        }
    }

    #[test]
    fn thread_count_does_not_change_output() {
        let c = load_config(None, ExperimentKind::Dslit, &Constants::codata()).unwrap();
        let a = run(&c, &ctx(1)).unwrap().csv(12);
        let b = run(&c, &ctx(5)).unwrap().csv(12);
        assert_eq!(a, b);
    }
}
