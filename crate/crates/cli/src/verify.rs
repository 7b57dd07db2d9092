//! Cross-module oracle checks behind `quup verify`.
//!
//! Sample points come from fixed grids and Weyl sequences, so two runs
//! print the same report byte for byte. Nothing here is timed.

use std::f64::consts::FRAC_PI_2;

use quup::cow;
use quup::doubleslit;
use quup::duality::{self, ExtractionRule};
use quup::scalar::{linspace, sech};
use quup::wavepacket::{self, PacketParams, TwoPathPacketSetup};
use quup::{Beam, Constants, CowGeometry, Phases, SlitGeometry, Splitter};

use crate::error::Result;
use crate::output::{col, fmt_num, Cell, Table};
use crate::run::{par_map, Context};

/// Fractional part of `n·a`, a low-discrepancy sequence in `[0, 1)`.
fn weyl(n: usize, a: f64) -> f64 {
    (n as f64 * a).fract()
}

const GOLDEN: f64 = 0.618_033_988_749_894_9;
const SQRT2_FRAC: f64 = 0.414_213_562_373_095_1;
const SQRT3_FRAC: f64 = 0.732_050_807_568_877_2;

struct Check {
    name: &'static str,
    value: f64,
    threshold: String,
    pass: bool,
}

fn at_most(name: &'static str, value: f64, limit: f64) -> Check {
    Check {
        name,
        value,
        threshold: format!("<= {}", fmt_num(limit, 1)),
        pass: value <= limit,
    }
}

fn within(name: &'static str, value: f64, lo: f64, hi: f64) -> Check {
    Check {
        name,
        value,
        threshold: format!("in [{}, {}]", fmt_num(lo, 1), fmt_num(hi, 1)),
        pass: (lo..=hi).contains(&value),
    }
}

/// Appends the report rows. A failing check is a row with `pass = 0`,
/// not an error; see [`failures`].
pub fn suite(t: &mut Table, ctx: &Context) -> Result<()> {
    let k = &ctx.constants;
    let mut checks = Vec::new();
    checks.extend(duality_grid(ctx, k)?);
    checks.extend(cow_golden(k)?);
    checks.push(cow_forms(ctx, k)?);
    checks.extend(steady_vs_packet(ctx, k)?);
    checks.push(fringe_extraction(ctx, k)?);
    checks.extend(stable_limits(ctx, k)?);
    checks.extend(lower_limit(ctx, k)?);

    t.meta("checks", checks.len().to_string());
    t.meta("failed", checks.iter().filter(|c| !c.pass).count().to_string());
    t.columns = vec![
        col("check", "oracle name"),
        col("value", "measured quantity"),
        col("threshold", "acceptance condition on value"),
        col("pass", "1 when value meets threshold"),
    ];
    for c in checks {
        t.rows.push(vec![
            Cell::Text(c.name.to_string()),
            Cell::Num(c.value),
            Cell::Text(c.threshold),
            Cell::Flag(c.pass),
        ]);
    }
    Ok(())
}

/// Number of failed checks in a verify report.
pub fn failures(t: &Table) -> usize {
    t.rows.iter().filter(|r| r.last() == Some(&Cell::Flag(false))).count()
}

/// V² + P² - 1 over 10⁴ double-slit and 10⁴ interferometer points with
/// arguments in [0, 10].
fn duality_grid(ctx: &Context, k: &Constants) -> Result<Vec<Check>> {
    let stable = Beam::stable_neutron(k);
    let beams: Vec<Beam> = (0..100)
        .map(|i| stable.with_survival_in_wavelengths(10f64.powf(1.0 + 6.0 * weyl(i + 1, GOLDEN))))
        .collect::<quup::Result<_>>()?;
    let per_beam = par_map(ctx.threads, &beams, |b| {
        let ell0 = b.survival_length().expect("unstable");
        let mut worst = (0.0f64, 0.0f64);
        for j in 0..100 {
            let x = 10.0 * j as f64 / 99.0;
            let ds = 2.0 * ell0 * x;
            let geo = SlitGeometry::symmetric(ell0 * (1.0 + x), ds)?;
            let p = doubleslit::predictability(b, &geo);
            let r = duality::duality_check(doubleslit::visibility(b, ds), p.closed)?;
            worst.0 = worst.0.max(r.residual.abs());
            worst.1 = worst.1.max((p.ratio - p.closed).abs());
        }
        Ok(worst)
    })?;
    let alphas = linspace(-FRAC_PI_2, FRAC_PI_2, 100)?;
    let per_alpha = par_map(ctx.threads, &alphas, |&a| {
        let mut worst = 0.0f64;
        for j in 0..100 {
            // q_ucow sin α spans [0, 10] over the grid
            let q = 10.0 * j as f64 / 99.0;
            let ph = Phases::synthetic(700.0, q, a, 1.0)?;
            let r = duality::duality_check(ph.visibility(), ph.predictability())?;
            worst = worst.max(r.residual.abs());
        }
        Ok(worst)
    })?;
    Ok(vec![
        at_most("duality_double_slit", per_beam.iter().map(|w| w.0).fold(0.0, f64::max), 1e-12),
        at_most("predictability_forms", per_beam.iter().map(|w| w.1).fold(0.0, f64::max), 1e-12),
        at_most("duality_interferometer", per_alpha.into_iter().fold(0.0, f64::max), 1e-12),
    ])
}

fn cow_golden(k: &Constants) -> Result<Vec<Check>> {
    let b = Beam::thermal_neutron(k);
    let geo = CowGeometry::new(0.1, 0.1, 0.0)?;
    Ok(vec![
        within("cow_q_cow", cow::q_cow(&b, geo.height(), geo.length(), k.g_std()), 600.0, 800.0),
        within("cow_q_ucow", cow::q_ucow(&b, geo.height(), geo.length(), k.g_std()), 3e-15, 7e-15),
    ])
}

/// Closed-form detector probability against the amplitude sum on a tilt
/// grid, with the thermal-neutron `q_cow`.
fn cow_forms(ctx: &Context, k: &Constants) -> Result<Check> {
    let q_cow = cow::q_cow(&Beam::thermal_neutron(k), 0.1, 0.1, k.g_std());
    let alphas = linspace(-FRAC_PI_2, FRAC_PI_2, 1000)?;
    let bs = Splitter::balanced();
    let worst = par_map(ctx.threads, &alphas, |&a| {
        let mut w = 0.0f64;
        for q in [0.1, 1.0, 5.0] {
            let ph = Phases::synthetic(q_cow, q, a, 1.0)?;
            let amp = ph.detector1_amplitude(&bs);
            w = w.max((ph.detector1_closed(&bs) - amp).abs() / amp);
        }
        Ok(w)
    })?;
    Ok(at_most("cow_closed_vs_amplitude", worst.into_iter().fold(0.0, f64::max), 1e-12))
}

/// Packet setups with `σ0 ≥ 10⁴ |Δs|`, `s ≥ 30σ0` and `Γσ0/v ≤ 10⁻³` on
/// four beams.
fn steady_vs_packet(ctx: &Context, k: &Constants) -> Result<Vec<Check>> {
    let v = 2200.0;
    let mut setups = Vec::new();
    for (bi, gamma) in [2200.0, 1100.0, 440.0, 220.0].into_iter().enumerate() {
        let beam = Beam::from_speed(k.m_neutron(), v, gamma, k)?;
        for j in 0..25 {
            let n = 25 * bi + j + 1;
            let sigma0 = 1e-4 * 10f64.powf(weyl(n, GOLDEN));
            let ds = sigma0 * 10f64.powf(-4.0 - 2.0 * weyl(n, SQRT2_FRAC)) * if n % 2 == 0 { 1.0 } else { -1.0 };
            let s1 = 0.1 + 1.9 * weyl(n, SQRT3_FRAC);
            setups.push((bi, beam, sigma0, s1, s1 - ds));
        }
    }
    let rows = par_map(ctx.threads, &setups, |&(bi, beam, sigma0, s1, s2)| {
        let packet = PacketParams::from_beam(&beam, sigma0)?;
        let setup = TwoPathPacketSetup::new(s1, s2, packet)?;
        let num = wavepacket::detection_probability_numeric(&setup)?.probabilities;
        let ana = wavepacket::detection_probability_analytic(&setup);
        let steady = doubleslit::detection_probability(&beam, &SlitGeometry::new(s1, s2)?);
        let comp = [
            (num.p1 - ana.p1).abs() / ana.p1,
            (num.p2 - ana.p2).abs() / ana.p2,
            (num.p12 - ana.p12).abs() / ana.p12.abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max);
        Ok((bi, num.total / steady, comp))
    })?;
    let mut spread = 0.0f64;
    for bi in 0..4 {
        let ratios: Vec<f64> = rows.iter().filter(|r| r.0 == bi).map(|r| r.1).collect();
        let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        spread = spread.max((hi - lo) / lo);
    }
    let comp = rows.iter().map(|r| r.2).fold(0.0, f64::max);
    Ok(vec![
        at_most("packet_over_steady_spread", spread, 1e-5),
        at_most("packet_numeric_vs_closed", comp, 1e-6),
    ])
}

/// Fringe visibility read off a sampled pattern with `ℓ0 = 10λ0`.
fn fringe_extraction(ctx: &Context, k: &Constants) -> Result<Check> {
    let b = Beam::thermal_neutron(k).with_survival_in_wavelengths(10.0)?;
    let lambda0 = b.wavelength();
    let xs = linspace(-40.0, 40.0, 4097)?;
    let pts = par_map(ctx.threads, &xs, |&x| Ok(doubleslit::fringe_point(&b, 50.0 * lambda0, x * lambda0, 1.0)?))?;
    let samples: Vec<(f64, f64)> = xs.iter().zip(&pts).map(|(x, p)| (*x, p.intensity)).collect();
    let ex = duality::extract_fringe_visibility(&samples, ExtractionRule::EnvelopeAtMinima)?;
    let worst = ex
        .iter()
        .map(|e| (e.visibility - sech(e.position / 20.0)).abs())
        .fold(0.0, f64::max);
    Ok(at_most("fringe_visibility_extraction", worst, 1e-3))
}

/// `Γ = 0` closed forms, compared for exact equality. The value is the
/// number of mismatches.
fn stable_limits(ctx: &Context, k: &Constants) -> Result<Vec<Check>> {
    let b = Beam::stable_neutron(k);
    let lambda0 = b.wavelength();
    let xs = linspace(-40.0, 40.0, 801)?;
    let slit = par_map(ctx.threads, &xs, |&x| {
        let geo = SlitGeometry::symmetric(1.0, x * lambda0)?;
        let p = doubleslit::predictability(&b, &geo);
        Ok(doubleslit::visibility(&b, geo.delta_s()) != 1.0 || p.closed != 0.0 || p.ratio != 0.0)
    })?;

    let packet = PacketParams::from_beam(&b, 1e-4)?;
    let packet_bad = par_map(ctx.threads, &xs, |&x| {
        let setup = TwoPathPacketSetup::new(0.5 + x * 1e-6, 0.5, packet)?;
        let got = wavepacket::detection_probability_analytic(&setup).total;
        let (n0, ds, sigma0) = (packet.normalization(), setup.delta_s(), packet.sigma0());
        let envelope = (-ds * ds / (8.0 * sigma0 * sigma0)).exp();
        let want = 2.0 * n0 + 2.0 * n0 * (packet.k0() * ds).cos() * envelope;
        Ok(got != want)
    })?;

    let geo = CowGeometry::new(0.1, 0.1, 0.0)?;
    let alphas = linspace(-FRAC_PI_2, FRAC_PI_2, 801)?;
    let cow_bad = par_map(ctx.threads, &alphas, |&a| {
        let ph = cow::leg_phases(&b, &geo.with_tilt(a)?, k);
        let want = 0.5 * (1.0 + (ph.q_cow * a.sin()).cos());
        Ok(ph.intensity(1.0) != want || ph.visibility() != 1.0 || ph.predictability() != 0.0)
    })?;

    let count = |v: &[bool]| v.iter().filter(|&&x| x).count() as f64;
    Ok(vec![
        at_most("stable_double_slit", count(&slit), 0.0),
        at_most("stable_packet", count(&packet_bad), 0.0),
        at_most("stable_interferometer", count(&cow_bad), 0.0),
    ])
}

/// Lower-limit gap at `s/σ0 ∈ {5, 10, 20, 30}`.
fn lower_limit(ctx: &Context, k: &Constants) -> Result<Vec<Check>> {
    let b = Beam::from_speed(k.m_neutron(), 2200.0, 2200.0, k)?;
    let sigma0 = 1e-3;
    let ratios = [30.0, 20.0, 10.0, 5.0];
    let gaps = par_map(ctx.threads, &ratios, |&r| {
        let s = r * sigma0;
        let setup = TwoPathPacketSetup::new(s, s - 1e-7, PacketParams::from_beam(&b, sigma0)?)?;
        let d = wavepacket::detection_probability_numeric(&setup)?;
        Ok(d.log_lower_limit_gap.into_iter().fold(f64::NEG_INFINITY, f64::max))
    })?;
    let increasing = gaps.windows(2).all(|w| w[1] > w[0]);
    Ok(vec![
        at_most("lower_limit_gap_at_30_sigma", gaps[0].exp(), 1e-10),
        Check {
            name: "lower_limit_gap_monotone",
            value: if increasing { 1.0 } else { 0.0 },
            threshold: "== 1 (gap grows as s/sigma0 falls)".to_string(),
            pass: increasing,
        },
    ])
}
