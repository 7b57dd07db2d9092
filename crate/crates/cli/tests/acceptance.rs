//! Exit gate: one PASS/FAIL line per criterion. Runs without the libtest
//! harness so the lines print in order.

use std::f64::consts::{FRAC_PI_2, PI};
use std::process::Command;
use std::time::{Duration, Instant};

use quup::cow;
use quup::doubleslit;
use quup::duality::{self, ExtractionRule};
use quup::scalar::{linspace, sech};
use quup::wavepacket::{self, PacketParams, TwoPathPacketSetup};
use quup::{Beam, Constants, CowGeometry, Phases, SlitGeometry, Splitter};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Criterion = (&'static str, Option<Duration>, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut o = f();
    let took = start.elapsed();
    if let Some(limit) = limit {
        o.pass &= took < limit;
        o.detail = format!("{}; {:.3} s (limit {} s)", o.detail, took.as_secs_f64(), limit.as_secs());
    }
    o
}

/// V² + P² = 1 over 10⁴ double-slit and 10⁴ interferometer samples.
fn duality_identity() -> Outcome {
    let k = Constants::codata();
    let stable = Beam::stable_neutron(&k);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let b = stable
            .with_survival_in_wavelengths(10f64.powf(rng.random_range(0.5..8.0)))
            .unwrap();
        let ell0 = b.survival_length().unwrap();
        let x: f64 = rng.random_range(0.0..=10.0);
        let ds = 2.0 * ell0 * x * if rng.random::<bool>() { 1.0 } else { -1.0 };
        let geo = SlitGeometry::symmetric(ell0 * rng.random_range(10.5..1e3), ds).unwrap();
        let p = doubleslit::predictability(&b, &geo);
        let r = duality::duality_check(doubleslit::visibility(&b, geo.delta_s()), p.closed).unwrap();
        worst = worst.max(r.residual.abs());
    }
    let mut worst_cow: f64 = 0.0;
    for _ in 0..10_000 {
        let alpha = rng.random_range(-FRAC_PI_2..=FRAC_PI_2);
        // q_ucow sin α up to 10
        let q = rng.random_range(0.0..=10.0);
        let ph = Phases::synthetic(rng.random_range(0.0..1e3), q, alpha, rng.random_range(0.1..10.0)).unwrap();
        let r = duality::duality_check(ph.visibility(), ph.predictability()).unwrap();
        worst_cow = worst_cow.max(r.residual.abs());
    }
    let m = worst.max(worst_cow);
    outcome(
        m <= 1e-12,
        format!("2x10^4 samples, max |residual| {m:.3e} (slits {worst:.3e}, loop {worst_cow:.3e})"),
    )
}

fn cow_golden() -> Outcome {
    let k = Constants::codata();
    let b = Beam::thermal_neutron(&k);
    let q_cow = cow::q_cow(&b, 0.1, 0.1, k.g_std());
    let q_ucow = cow::q_ucow(&b, 0.1, 0.1, k.g_std());
    outcome(
        (600.0..=800.0).contains(&q_cow) && (3e-15..=7e-15).contains(&q_ucow),
        format!("q_cow {q_cow:.6}, q_ucow {q_ucow:.6e}"),
    )
}

/// Packet quadrature against the steady beam and the closed forms.
fn steady_vs_packet() -> Outcome {
    let k = Constants::codata();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let v = 2200.0;
    let mut worst_spread: f64 = 0.0;
    let mut worst_comp: f64 = 0.0;
    let mut n = 0;
    for gamma in [2200.0, 733.0, 220.0, 22.0] {
        let beam = Beam::from_speed(k.m_neutron(), v, gamma, &k).unwrap();
        let mut ratios = Vec::new();
        for _ in 0..30 {
            let sigma0 = 10f64.powf(rng.random_range(-4.0..-3.0));
            let ds = sigma0 * 10f64.powf(rng.random_range(-6.0..-4.0)) * if rng.random::<bool>() { 1.0 } else { -1.0 };
            let s1 = rng.random_range(0.1..2.0);
            let packet = PacketParams::from_beam(&beam, sigma0).unwrap();
            let setup = TwoPathPacketSetup::new(s1, s1 - ds, packet).unwrap();
            let val = setup.validity();
            assert!(val.separated() && val.slow_decay() && sigma0 >= 1e3 * ds.abs());
            let num = wavepacket::detection_probability_numeric(&setup).unwrap().probabilities;
            let ana = wavepacket::detection_probability_analytic(&setup);
            let steady = doubleslit::detection_probability(&beam, &SlitGeometry::new(s1, s1 - ds).unwrap());
            ratios.push(num.total / steady);
            for (a, b) in [(num.p1, ana.p1), (num.p2, ana.p2), (num.p12, ana.p12)] {
                worst_comp = worst_comp.max((a - b).abs() / b.abs());
            }
            n += 1;
        }
        let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        worst_spread = worst_spread.max((hi - lo) / lo);
    }
    outcome(
        worst_spread <= 1e-5 && worst_comp <= 1e-6,
        format!("{n} setups on 4 beams, ratio spread {worst_spread:.3e}, componentwise {worst_comp:.3e}"),
    )
}

/// Per-fringe visibility from a sampled pattern with `ℓ0 = 10λ0`.
fn fringe_envelope() -> Outcome {
    let k = Constants::codata();
    let b = Beam::thermal_neutron(&k).with_survival_in_wavelengths(10.0).unwrap();
    let lambda0 = b.wavelength();
    let n = 1024;
    let per_fringe = n as f64 / (80.0 / (2.0 * PI));
    let scan = doubleslit::fringe_scan(&b, (-40.0 * lambda0, 40.0 * lambda0), n, 50.0 * lambda0, 1.0).unwrap();
    let samples: Vec<(f64, f64)> = scan.iter().map(|p| (p.delta_s / lambda0, p.intensity)).collect();
    let ex = duality::extract_fringe_visibility(&samples, ExtractionRule::EnvelopeAtMinima).unwrap();
    let worst = ex.iter().map(|e| (e.visibility - sech(e.position / 20.0)).abs()).fold(0.0, f64::max);
    outcome(
        worst <= 1e-3 && per_fringe >= 64.0 && ex.len() >= 10,
        format!("{per_fringe:.1} points/fringe, {} fringes, max |V - sech| {worst:.3e}", ex.len()),
    )
}

/// Closed form against the amplitude sum on 10³ tilts.
fn cow_forms() -> Outcome {
    let k = Constants::codata();
    let q_cow = cow::q_cow(&Beam::thermal_neutron(&k), 0.1, 0.1, k.g_std());
    let bs = Splitter::balanced();
    let mut worst: f64 = 0.0;
    for q in [0.1, 1.0, 5.0] {
        for a in linspace(-FRAC_PI_2, FRAC_PI_2, 1000).unwrap() {
            let ph = Phases::synthetic(q_cow, q, a, 1.0).unwrap();
            let amp = ph.detector1_amplitude(&bs);
            worst = worst.max((ph.detector1_closed(&bs) - amp).abs() / amp);
        }
    }
    outcome(worst <= 1e-12, format!("3x1000 tilts at q_cow {q_cow:.2}, max relative {worst:.3e}"))
}

/// `Γ = 0`: exact equality with the stable closed forms.
fn stable_limits() -> Outcome {
    let k = Constants::codata();
    let b = Beam::stable_neutron(&k);
    let lambda0 = b.wavelength();
    let mut bad = 0;
    let mut total = 0;
    for x in linspace(-40.0, 40.0, 801).unwrap() {
        let geo = SlitGeometry::symmetric(1.0, x * lambda0).unwrap();
        let p = doubleslit::predictability(&b, &geo);
        let i0 = 2.0;
        let i = doubleslit::intensity(&b, &geo, i0).unwrap().intensity;
        let want = i0 / 2.0 * (1.0 + (geo.delta_s() / lambda0).cos());
        bad += usize::from(doubleslit::visibility(&b, geo.delta_s()) != 1.0 || p.closed != 0.0 || p.ratio != 0.0 || i != want);
        total += 1;
    }
    let packet = PacketParams::from_beam(&b, 1e-4).unwrap();
    for x in linspace(-5e-4, 5e-4, 401).unwrap() {
        let setup = TwoPathPacketSetup::new(0.5 + x, 0.5, packet).unwrap();
        let got = wavepacket::detection_probability_analytic(&setup).total;
        let (n0, ds, s) = (packet.normalization(), setup.delta_s(), packet.sigma0());
        let want = 2.0 * n0 + 2.0 * n0 * (packet.k0() * ds).cos() * (-ds * ds / (8.0 * s * s)).exp();
        bad += usize::from(got != want);
        total += 1;
    }
    let geo = CowGeometry::new(0.1, 0.1, 0.0).unwrap();
    for a in linspace(-FRAC_PI_2, FRAC_PI_2, 801).unwrap() {
        let ph = cow::leg_phases(&b, &geo.with_tilt(a).unwrap(), &k);
        let want = 3.0 / 2.0 * (1.0 + (ph.q_cow * a.sin()).cos());
        bad += usize::from(ph.intensity(3.0) != want || ph.visibility() != 1.0 || ph.predictability() != 0.0);
        total += 1;
    }
    outcome(bad == 0, format!("{bad} of {total} closed-form outputs differ"))
}

/// Lower-limit gap: tiny at 30σ0 and growing as `s/σ0` falls.
fn lower_limit_gap() -> Outcome {
    let k = Constants::codata();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst_at_30: f64 = 0.0;
    let mut monotone = true;
    let cases = 20;
    for _ in 0..cases {
        let beam = Beam::from_speed(k.m_neutron(), 2200.0, rng.random_range(0.0..2200.0), &k).unwrap();
        let sigma0 = 10f64.powf(rng.random_range(-5.0..-3.0));
        let packet = PacketParams::from_beam(&beam, sigma0).unwrap();
        let offset = sigma0 * rng.random_range(-1e-3..1e-3);
        let mut gaps = Vec::new();
        for r in [5.0, 10.0, 20.0, 30.0] {
            let s = r * sigma0;
            let setup = TwoPathPacketSetup::new(s, s + offset, packet).unwrap();
            let d = wavepacket::detection_probability_numeric(&setup).unwrap();
            gaps.push(d.log_lower_limit_gap.into_iter().fold(f64::NEG_INFINITY, f64::max));
        }
        monotone &= gaps.windows(2).all(|w| w[0] > w[1]);
        worst_at_30 = worst_at_30.max(gaps[3].exp());
    }
    outcome(
        worst_at_30 <= 1e-10 && monotone,
        format!("{cases} setups, max gap at 30 sigma0 {worst_at_30:.3e}, monotone {monotone}"),
    )
}

fn run_cli(args: &[&str]) -> Vec<u8> {
    let o = Command::new(env!("CARGO_BIN_EXE_quup"))
        .args(args)
        .env_remove("QUUP_CONSTANTS")
        .output()
        .expect("binary runs");
    assert!(o.status.success(), "quup {args:?}: {}", String::from_utf8_lossy(&o.stderr));
    o.stdout
}

fn determinism() -> Outcome {
    let a = run_cli(&["verify"]);
    let b = run_cli(&["verify"]);
    let mut same_threads = true;
    for cmd in ["dslit", "cow", "packet", "duality-report"] {
        let one = run_cli(&[cmd, "--threads", "1"]);
        same_threads &= one == run_cli(&[cmd, "--threads", "4"]) && one == run_cli(&[cmd, "--threads", "9"]);
    }
    outcome(
        a == b && same_threads,
        format!("verify reruns identical {}, sweeps independent of --threads {same_threads}", a == b),
    )
}

fn main() {
    let second = Some(Duration::from_secs(1));
    let criteria: [Criterion; 8] = [
        ("duality identity", second, duality_identity),
        ("interferometer golden numbers", None, cow_golden),
        ("steady beam vs wave packet", Some(Duration::from_secs(30)), steady_vs_packet),
        ("fringe envelope reproduction", second, fringe_envelope),
        ("closed form vs amplitude sum", second, cow_forms),
        ("stable limits", None, stable_limits),
        ("quadrature lower limit", None, lower_limit_gap),
        ("determinism", None, determinism),
    ];
    let mut failed = 0;
    for (i, (name, limit, f)) in criteria.into_iter().enumerate() {
        let o = timed(limit, f);
        println!("{} criterion {} ({name}): {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
        failed += usize::from(!o.pass);
    }
    if failed > 0 {
        eprintln!("{failed} criteria failed");
        std::process::exit(1);
    }
}
