//! The same physics in f32 and f64.

use quup::cow;
use quup::doubleslit;
use quup::duality;
use quup::wavepacket::{self, PacketParams, TwoPathPacketSetup};
use quup::{BeamParticle, PhysicalConstants, SlitGeometry};

#[test]
fn f32_thermal_neutron_tracks_f64() {
    let k32 = PhysicalConstants::<f32>::codata();
    let k64 = PhysicalConstants::<f64>::codata();
    let b32 = BeamParticle::thermal_neutron(&k32);
    let b64 = BeamParticle::thermal_neutron(&k64);
    let rel = |a: f32, b: f64| ((a as f64 - b) / b).abs();
    assert!(rel(b32.wavelength(), b64.wavelength()) < 1e-6);
    assert!(rel(b32.survival_length().unwrap(), b64.survival_length().unwrap()) < 1e-6);
    assert!(rel(b32.attenuation(), b64.attenuation()) < 1e-5);
    let q32 = cow::q_cow(&b32, 0.1, 0.1, k32.g_std());
    let q64 = cow::q_cow(&b64, 0.1, 0.1, k64.g_std());
    assert!(rel(q32, q64) < 1e-5, "{q32} {q64}");
    let u32_ = cow::q_ucow(&b32, 0.1, 0.1, k32.g_std());
    let u64_ = cow::q_ucow(&b64, 0.1, 0.1, k64.g_std());
    assert!(rel(u32_, u64_) < 1e-5, "{u32_} {u64_}");
}

#[test]
fn f32_double_slit_and_duality() {
    let k = PhysicalConstants::<f32>::new(1.0, 1.0e4, 1.0, 1.0).unwrap();
    let b = BeamParticle::<f32>::new(1.0, 10.0, 0.5, &k).unwrap();
    let ell0 = b.survival_length().unwrap();
    assert_eq!(ell0, 20.0);
    let geo = SlitGeometry::symmetric(100.0f32, ell0).unwrap();
    let v = doubleslit::visibility(&b, geo.delta_s());
    assert!((v - 0.886_818_9).abs() < 1e-6);
    let p = doubleslit::predictability(&b, &geo);
    assert!((p.closed - 0.462_117_16).abs() < 1e-6);
    assert!((p.ratio - p.closed).abs() < 1e-5);
    let r = duality::duality_check(v, p.closed).unwrap();
    assert!(r.residual.abs() < 1e-6);
}

#[test]
fn f32_packet_quadrature() {
    let p = PacketParams::<f32>::new(1.0, 2.0, 1.0, 0.0).unwrap();
    let setup = TwoPathPacketSetup::new(40.0, 40.0, p).unwrap();
    let num = wavepacket::detection_probability_numeric(&setup).unwrap().probabilities;
    let ana = wavepacket::detection_probability_analytic(&setup);
    assert!((num.total - ana.total).abs() < 1e-4 * ana.total, "{} {}", num.total, ana.total);
    assert_eq!(ana.total, 4.0);
}
