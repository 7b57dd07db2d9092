//! Beam particles and the derived length scales of the non-relativistic
//! unstable-particle model.
//!
//! A beam is fixed by its mass `m`, momentum `p0` and decay rate `Γ`. The
//! stationary solution carries a complex wave number `k0 + iκ0` with
//!
//! ```text
//! k0² = (p0/ħ)² + κ0²        κ0 = mΓ / (2ħ k0)
//! ```
//!
//! solved here exactly rather than through the small-`Γ` expansion. The
//! reduced de Broglie wavelength `λ0 = ħ/p0` and the survival length
//! `ℓ0 = p0/(mΓ)` are the two scales every observable is written in.

use crate::constants::{PhysicalConstants, NEUTRON_LIFETIME, THERMAL_NEUTRON_SPEED};
use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

/// Default threshold for both hierarchy ratios in [`ValidityReport`].
pub const DEFAULT_VALIDITY_THRESHOLD: f64 = 1.0e-3;

/// Time and length scales of decay. Absent for stable beams.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayScales<T> {
    /// Mean lifetime `τ = 1/Γ` (s).
    pub lifetime: T,
    /// Mean distance travelled before decaying, `ℓ0 = p0/(mΓ)` (m).
    pub survival_length: T,
}

/// A monoenergetic beam of possibly unstable particles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamParticle<T> {
    mass: T,
    momentum: T,
    decay_rate: T,
    hbar: T,
    c: T,
    wavenumber: T,
    attenuation: T,
    decay: Option<DecayScales<T>>,
}

/// Builds a beam; free-function form of [`BeamParticle::new`].
pub fn make_beam<T: Real>(
    mass: T,
    momentum: T,
    decay_rate: T,
    constants: &PhysicalConstants<T>,
) -> Result<BeamParticle<T>> {
    BeamParticle::new(mass, momentum, decay_rate, constants)
}

impl<T: Real> BeamParticle<T> {
    /// `decay_rate == 0` yields a stable beam; there is no "tiny Γ" encoding.
    pub fn new(mass: T, momentum: T, decay_rate: T, constants: &PhysicalConstants<T>) -> Result<Self> {
        Self::build(mass, momentum, decay_rate, constants.hbar(), constants.c())
    }

    fn build(mass: T, momentum: T, decay_rate: T, hbar: T, c: T) -> Result<Self> {
        if !(mass.is_finite() && mass > T::zero()) {
            return Err(Error::domain("beam.mass", format!("must be finite and > 0, got {mass}")));
        }
        if !(momentum.is_finite() && momentum > T::zero()) {
            return Err(Error::domain(
                "beam.momentum",
                format!("must be finite and > 0, got {momentum}"),
            ));
        }
        if !(decay_rate.is_finite() && decay_rate >= T::zero()) {
            return Err(Error::domain(
                "beam.gamma",
                format!("must be finite and >= 0, got {decay_rate}"),
            ));
        }
        let free = momentum / hbar;

        let (wavenumber, attenuation, decay) = if decay_rate == T::zero() {
            (free, T::zero(), None)
        } else {
            // k0² = a² (1 + sqrt(1 + r²)) / 2 with r = mΓ/(ħ a²); the scaled
            // form keeps every intermediate inside the f32 exponent range.
            let half_width = mass * decay_rate / (lit::<T>(2.0) * hbar);
            let r = lit::<T>(2.0) * (half_width / free) / free;
            let k0 = free * ((T::one() + T::one().hypot(r)) / lit(2.0)).sqrt();
            let scales = DecayScales {
                lifetime: decay_rate.recip(),
                survival_length: (momentum / mass) / decay_rate,
            };
            (k0, half_width / k0, Some(scales))
        };

        Ok(Self {
            mass,
            momentum,
            decay_rate,
            hbar,
            c,
            wavenumber,
            attenuation,
            decay,
        })
    }

    /// Builds a beam from its speed instead of its momentum.
    pub fn from_speed(mass: T, speed: T, decay_rate: T, constants: &PhysicalConstants<T>) -> Result<Self> {
        if !(speed.is_finite() && speed > T::zero()) {
            return Err(Error::domain("beam.speed", format!("must be finite and > 0, got {speed}")));
        }
        Self::new(mass, mass * speed, decay_rate, constants)
    }

    /// Thermal neutrons (2200 m/s) with the free-neutron lifetime.
    pub fn thermal_neutron(constants: &PhysicalConstants<T>) -> Self {
        let m = constants.m_neutron();
        Self::from_speed(m, lit(THERMAL_NEUTRON_SPEED), lit::<T>(NEUTRON_LIFETIME).recip(), constants)
            .expect("preset parameters are valid")
    }

    /// Thermal neutrons treated as stable.
    pub fn stable_neutron(constants: &PhysicalConstants<T>) -> Self {
        let m = constants.m_neutron();
        Self::from_speed(m, lit(THERMAL_NEUTRON_SPEED), T::zero(), constants)
            .expect("preset parameters are valid")
    }

    /// A beam of the same particle and momentum with survival length
    /// `ell0_over_lambda0 · λ0`.
    pub fn with_survival_in_wavelengths(&self, ell0_over_lambda0: T) -> Result<Self> {
        if !(ell0_over_lambda0.is_finite() && ell0_over_lambda0 > T::zero()) {
            return Err(Error::domain(
                "beam.ell0_over_lambda0",
                format!("must be finite and > 0, got {ell0_over_lambda0}"),
            ));
        }
        // ℓ0 = p0/(mΓ) = n ħ/p0  ⇒  Γ = (p0/ħ) · (p0/m) / n
        let gamma = (self.momentum / self.hbar) * self.group_velocity() / ell0_over_lambda0;
        Self::build(self.mass, self.momentum, gamma, self.hbar, self.c)
    }

    pub fn mass(&self) -> T {
        self.mass
    }

    pub fn momentum(&self) -> T {
        self.momentum
    }

    /// Decay rate `Γ` (1/s); exactly zero for stable beams.
    pub fn decay_rate(&self) -> T {
        self.decay_rate
    }

    pub fn is_stable(&self) -> bool {
        self.decay.is_none()
    }

    pub fn hbar(&self) -> T {
        self.hbar
    }

    pub fn speed_of_light(&self) -> T {
        self.c
    }

    /// `v_g = p0/m` (m/s).
    pub fn group_velocity(&self) -> T {
        self.momentum / self.mass
    }

    /// Reduced de Broglie wavelength `λ0 = ħ/p0` (m).
    pub fn wavelength(&self) -> T {
        self.hbar / self.momentum
    }

    /// Real part `k0` of the complex wave number (1/m).
    pub fn wavenumber(&self) -> T {
        self.wavenumber
    }

    /// Imaginary part `κ0` of the complex wave number (1/m).
    pub fn attenuation(&self) -> T {
        self.attenuation
    }

    pub fn decay_scales(&self) -> Option<DecayScales<T>> {
        self.decay
    }

    /// `ℓ0`; `None` for a stable beam (infinite survival length).
    pub fn survival_length(&self) -> Option<T> {
        self.decay.map(|d| d.survival_length)
    }

    /// `τ = 1/Γ`; `None` for a stable beam.
    pub fn lifetime(&self) -> Option<T> {
        self.decay.map(|d| d.lifetime)
    }

    /// `1/ℓ0 = mΓ/p0`, zero for stable beams.
    pub fn inverse_survival_length(&self) -> T {
        match self.decay {
            Some(d) => d.survival_length.recip(),
            None => T::zero(),
        }
    }

    /// Probability `exp(-s/ℓ0)` of surviving a path of length `s`.
    pub fn survival_probability(&self, path_length: T) -> T {
        (-path_length * self.inverse_survival_length()).exp()
    }

    /// `mc²` (J).
    pub fn rest_energy(&self) -> T {
        self.mass * self.c * self.c
    }

    /// `E0 - mc² = p0²/2m` (J).
    pub fn kinetic_energy(&self) -> T {
        self.momentum * self.group_velocity() / lit(2.0)
    }

    pub fn check_validity(&self) -> ValidityReport<T> {
        self.check_validity_with(lit(DEFAULT_VALIDITY_THRESHOLD))
    }

    /// Evaluates the energy hierarchy `mc² ≫ p0²/2m ≫ ħΓ` against `threshold`.
    pub fn check_validity_with(&self, threshold: T) -> ValidityReport<T> {
        let kinetic = self.kinetic_energy();
        // (p0²/2m)/(mc²) = v²/(2c²)
        let beta = self.group_velocity() / self.c;
        ValidityReport {
            kinetic_to_rest: beta * beta / lit(2.0),
            decay_to_kinetic: self.hbar * self.decay_rate / kinetic,
            attenuation_to_wavenumber: self.attenuation / self.wavenumber,
            threshold,
        }
    }
}

/// Dimensionless hierarchy ratios of a beam.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidityReport<T> {
    /// `(p0²/2m) / (mc²)`.
    pub kinetic_to_rest: T,
    /// `ħΓ / (p0²/2m)`.
    pub decay_to_kinetic: T,
    /// `κ0 / k0`.
    pub attenuation_to_wavenumber: T,
    pub threshold: T,
}

impl<T: Real> ValidityReport<T> {
    pub fn non_relativistic(&self) -> bool {
        self.kinetic_to_rest <= self.threshold
    }

    pub fn slow_decay(&self) -> bool {
        self.decay_to_kinetic <= self.threshold
    }

    pub fn sharp_wavelength(&self) -> bool {
        self.attenuation_to_wavenumber <= self.threshold
    }

    pub fn passes(&self) -> bool {
        self.non_relativistic() && self.slow_decay() && self.sharp_wavelength()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::NEUTRON_MASS;

    fn codata() -> PhysicalConstants<f64> {
        PhysicalConstants::codata()
    }

    /// ħ = 1, c = 100 units where κ0 is comparable to k0.
    fn natural() -> PhysicalConstants<f64> {
        PhysicalConstants::new(1.0, 100.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn stable_beam_has_no_decay_scales() {
        let b = make_beam(NEUTRON_MASS, NEUTRON_MASS * 2200.0, 0.0, &codata()).unwrap();
        assert!(b.is_stable());
        assert_eq!(b.attenuation(), 0.0);
        assert_eq!(b.survival_length(), None);
        assert_eq!(b.inverse_survival_length(), 0.0);
        assert_eq!(b.wavelength(), 1.054571817e-34 / (NEUTRON_MASS * 2200.0));
        assert_eq!(b.wavenumber(), b.momentum() / b.hbar());
        assert_eq!(b.survival_probability(1.0e9), 1.0);
    }

    #[test]
    fn thermal_neutron_survival_length() {
        let b = make_beam(NEUTRON_MASS, NEUTRON_MASS * 2200.0, 1.0 / 879.4, &codata()).unwrap();
        let ell0 = b.survival_length().unwrap();
        // v_g τ = 2200 · 879.4
        assert!((ell0 - 1.934_68e6).abs() / 1.934_68e6 < 1e-12, "{ell0}");
        assert_eq!(b.lifetime(), Some(879.4));
    }

    #[test]
    fn exact_wavenumber_relation_with_strong_decay() {
        for gamma in [0.01, 0.5, 3.0, 40.0] {
            let b = make_beam(2.0, 3.0, gamma, &natural()).unwrap();
            let free = b.momentum() / b.hbar();
            let k0 = b.wavenumber();
            let kappa = b.attenuation();
            let lhs = k0 * k0 - free * free;
            assert!(
                (lhs - kappa * kappa).abs() <= 8.0 * f64::EPSILON * k0 * k0,
                "gamma={gamma}: {lhs} vs {}",
                kappa * kappa
            );
            let expect = b.mass() * gamma / (2.0 * b.hbar() * k0);
            assert!((kappa - expect).abs() <= 4.0 * f64::EPSILON * expect);
        }
    }

    #[test]
    fn survival_length_times_twice_attenuation_is_one_for_weak_decay() {
        let b = BeamParticle::thermal_neutron(&codata());
        let prod = b.survival_length().unwrap() * 2.0 * b.attenuation();
        assert!((prod - 1.0).abs() < 1e-14, "{prod}");
        // with strong decay the product differs from 1 by ~(κ0/k0)²
        let s = make_beam(1.0, 1.0, 0.2, &natural()).unwrap();
        let ratio = s.attenuation() / s.wavenumber();
        let prod = s.survival_length().unwrap() * 2.0 * s.attenuation();
        assert!((prod - 1.0).abs() <= ratio * ratio, "{prod}");
    }

    #[test]
    fn rejects_invalid_inputs() {
        let k = codata();
        assert!(matches!(
            make_beam(0.0, 1.0, 0.0, &k),
            Err(Error::Domain { field: "beam.mass", .. })
        ));
        assert!(matches!(
            make_beam(1.0, -1.0, 0.0, &k),
            Err(Error::Domain { field: "beam.momentum", .. })
        ));
        assert!(matches!(
            make_beam(1.0, 1.0, -1e-3, &k),
            Err(Error::Domain { field: "beam.gamma", .. })
        ));
    }

    #[test]
    fn thermal_neutron_validity() {
        let report = BeamParticle::thermal_neutron(&codata()).check_validity();
        // v²/(2c²) with v = 2200 m/s
        assert!((report.kinetic_to_rest - 2.692_613_135_649_757e-11).abs() < 1e-22);
        assert!(report.passes());
    }

    #[test]
    fn stable_validity_has_zero_decay_ratio() {
        let report = BeamParticle::stable_neutron(&codata()).check_validity();
        assert_eq!(report.decay_to_kinetic, 0.0);
        assert_eq!(report.attenuation_to_wavenumber, 0.0);
        assert!(report.passes());
    }

    #[test]
    fn decay_width_equal_to_kinetic_energy_fails() {
        let k = codata();
        let m = NEUTRON_MASS;
        let p = m * 2200.0;
        let kinetic = p * p / (2.0 * m);
        let gamma = kinetic / k.hbar();
        let report = make_beam(m, p, gamma, &k).unwrap().check_validity();
        assert!((report.decay_to_kinetic - 1.0).abs() < 1e-12);
        assert!(!report.slow_decay());
        assert!(!report.passes());
    }

    #[test]
    fn survival_in_wavelengths() {
        let b = BeamParticle::stable_neutron(&codata())
            .with_survival_in_wavelengths(10.0)
            .unwrap();
        let ratio = b.survival_length().unwrap() / b.wavelength();
        assert!((ratio - 10.0).abs() < 1e-12, "{ratio}");
    }

    #[test]
    fn f32_beam_stays_finite() {
        let k = PhysicalConstants::<f32>::codata();
        let b = BeamParticle::thermal_neutron(&k);
        assert!(b.wavenumber().is_finite() && b.wavenumber() > 0.0);
        assert!(b.kinetic_energy().is_normal());
        let r = b.check_validity();
        assert!(r.kinetic_to_rest.is_finite() && r.passes());
    }
}
