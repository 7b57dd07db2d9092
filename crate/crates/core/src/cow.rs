//! Gravity-induced interference (COW loop) with unstable particles.
//!
//! The loop `A → B → D` / `A → C → D` is a parallelogram with horizontal
//! legs `AB`, `CD` of length `L0` and legs `AC`, `BD` of length `H0` in a
//! plane tilted by `α` about the horizontal beam axis. In coordinates with
//! `z` vertical:
//!
//! ```text
//! A = (0, 0, 0)             B = (0, L0, 0)
//! C = (H0 cos α, 0, H0 sin α)    D = (H0 cos α, L0, H0 sin α)
//! ```
//!
//! and `V = m g z`. The two dimensionless strengths are
//!
//! ```text
//! q_cow  = m² g H0 L0 / (ħ p0)          (real phase difference)
//! q_ucow = m³ g Γ H0 L0 / (2 p0³)       (imaginary phase difference)
//! ```

use num_complex::Complex;

use crate::beam::BeamParticle;
use crate::constants::PhysicalConstants;
use crate::duality::{duality_check_with, DEFAULT_DUALITY_TOLERANCE};
use crate::error::{Error, Result};
use crate::propagator::{self, ComplexPhase, PathLeg, PotentialModel, Vec3};
use crate::scalar::{lit, linspace, sech, Real};

/// Tolerance on the beamsplitter unitarity relations.
pub const SPLITTER_TOLERANCE: f64 = 1.0e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CowGeometry<T> {
    height: T,
    length: T,
    tilt: T,
}

impl<T: Real> CowGeometry<T> {
    pub fn new(height: T, length: T, tilt: T) -> Result<Self> {
        if !(height.is_finite() && height > T::zero()) {
            return Err(Error::domain("geometry.H0_m", format!("must be finite and > 0, got {height}")));
        }
        if !(length.is_finite() && length > T::zero()) {
            return Err(Error::domain("geometry.L0_m", format!("must be finite and > 0, got {length}")));
        }
        Self::check_tilt(tilt)?;
        Ok(Self { height, length, tilt })
    }

    fn check_tilt(tilt: T) -> Result<()> {
        if tilt.is_nan() || tilt.abs() > T::FRAC_PI_2() {
            return Err(Error::domain("geometry.alpha_rad", format!("must lie in [-π/2, π/2], got {tilt}")));
        }
        Ok(())
    }

    /// Same loop at another tilt.
    pub fn with_tilt(&self, tilt: T) -> Result<Self> {
        Self::check_tilt(tilt)?;
        Ok(Self { tilt, ..*self })
    }

    pub fn height(&self) -> T {
        self.height
    }

    pub fn length(&self) -> T {
        self.length
    }

    pub fn tilt(&self) -> T {
        self.tilt
    }

    /// Corner positions `[A, B, C, D]`.
    pub fn corners(&self) -> [Vec3<T>; 4] {
        let (s, c) = self.tilt.sin_cos();
        let z = T::zero();
        let (h, l) = (self.height, self.length);
        [[z, z, z], [z, l, z], [h * c, z, h * s], [h * c, l, h * s]]
    }
}

/// Mirror and beamsplitter amplitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamSplitterSet<T> {
    mirror: Complex<T>,
    reflect: Complex<T>,
    transmit: Complex<T>,
}

impl<T: Real> BeamSplitterSet<T> {
    pub fn new(mirror: Complex<T>, reflect: Complex<T>, transmit: Complex<T>) -> Result<Self> {
        let tol = lit::<T>(SPLITTER_TOLERANCE);
        if (mirror.norm_sqr() - T::one()).abs() > tol {
            return Err(Error::domain("splitter.mirror", "|R_M|² must equal 1"));
        }
        if (reflect.norm_sqr() + transmit.norm_sqr() - T::one()).abs() > tol {
            return Err(Error::domain("splitter.reflect", "|R|² + |T|² must equal 1"));
        }
        let cross = reflect * transmit.conj() + reflect.conj() * transmit;
        if cross.norm() > tol {
            return Err(Error::domain("splitter.transmit", "R T* + R* T must vanish"));
        }
        Ok(Self {
            mirror,
            reflect,
            transmit,
        })
    }

    /// `T = 1/√2`, `R = i/√2`, `R_M = 1`.
    pub fn balanced() -> Self {
        let h = T::FRAC_1_SQRT_2();
        Self {
            mirror: Complex::new(T::one(), T::zero()),
            reflect: Complex::new(T::zero(), h),
            transmit: Complex::new(h, T::zero()),
        }
    }

    pub fn mirror(&self) -> Complex<T> {
        self.mirror
    }

    pub fn reflect(&self) -> Complex<T> {
        self.reflect
    }

    pub fn transmit(&self) -> Complex<T> {
        self.transmit
    }
}

impl<T: Real> Default for BeamSplitterSet<T> {
    fn default() -> Self {
        Self::balanced()
    }
}

/// Complex path phases and the two interference strengths at one tilt.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CowPhases<T> {
    pub phi_abd: ComplexPhase<T>,
    pub phi_acd: ComplexPhase<T>,
    pub q_cow: T,
    pub q_ucow: T,
    pub sin_alpha: T,
    /// `H0/L0`.
    pub height_ratio: T,
    /// `(H0 + L0)/ℓ0`, the survival exponent common to both paths.
    pub survival_exponent: T,
}

impl<T: Real> CowPhases<T> {
    /// Phases for prescribed strengths, using the leading-order imaginary
    /// parts and no overall survival factor.
    pub fn synthetic(q_cow: T, q_ucow: T, alpha: T, height_ratio: T) -> Result<Self> {
        if !(q_cow.is_finite() && q_cow >= T::zero()) {
            return Err(Error::domain("q_cow", format!("must be finite and >= 0, got {q_cow}")));
        }
        if !(q_ucow.is_finite() && q_ucow >= T::zero()) {
            return Err(Error::domain("q_ucow", format!("must be finite and >= 0, got {q_ucow}")));
        }
        if !(height_ratio.is_finite() && height_ratio > T::zero()) {
            return Err(Error::domain("height_ratio", "must be finite and > 0"));
        }
        CowGeometry::check_tilt(alpha)?;
        let s = alpha.sin();
        let half_ratio = height_ratio / lit(2.0);
        Ok(Self {
            phi_abd: ComplexPhase::new(T::zero(), q_ucow * s * half_ratio),
            phi_acd: ComplexPhase::new(-q_cow * s, q_ucow * s * (T::one() + half_ratio)),
            q_cow,
            q_ucow,
            sin_alpha: s,
            height_ratio,
            survival_exponent: T::zero(),
        })
    }

    /// `Δφ_COW = -q_cow sin α`.
    pub fn delta_phi_cow(&self) -> T {
        -self.q_cow * self.sin_alpha
    }

    /// `Δφ_UCOW = q_ucow sin α`.
    pub fn delta_phi_ucow(&self) -> T {
        self.q_ucow * self.sin_alpha
    }

    /// `Im(φ_ACD - φ_ABD)` from the stored path phases, including any
    /// `mgΓ/(2p0c²)` contribution.
    pub fn delta_phi_ucow_full(&self) -> T {
        (self.phi_acd - self.phi_abd).im
    }

    /// Leading-order `Im φ_ABD = q_ucow sin α · H0/2L0`.
    pub fn approx_im_abd(&self) -> T {
        self.delta_phi_ucow() * self.height_ratio / lit(2.0)
    }

    /// Leading-order `Im φ_ACD = q_ucow sin α · (1 + H0/2L0)`.
    pub fn approx_im_acd(&self) -> T {
        self.delta_phi_ucow() * (T::one() + self.height_ratio / lit(2.0))
    }

    /// Detector-1 probability from the closed form, scaled by `4|T R|²`
    /// for unbalanced splitters.
    pub fn detector1_closed(&self, splitter: &BeamSplitterSet<T>) -> T {
        let u = self.delta_phi_ucow();
        let r = self.height_ratio;
        let two = lit::<T>(2.0);
        let bracket = (-two * u * (T::one() + r / two)).exp()
            + (-two * u * (r / two)).exp()
            + two * (-u * (T::one() + r)).exp() * (self.q_cow * self.sin_alpha).cos();
        let weight = (splitter.transmit * splitter.reflect).norm_sqr();
        weight * (-self.survival_exponent).exp() * bracket
    }

    /// Detector-1 probability as `|T R_M R e^{iφ_ABD} + R R_M T e^{iφ_ACD}|²`
    /// times the survival factor.
    pub fn detector1_amplitude(&self, splitter: &BeamSplitterSet<T>) -> T {
        let trm = splitter.transmit * splitter.mirror * splitter.reflect;
        let amp = trm * self.phi_abd.exp_i() + trm * self.phi_acd.exp_i();
        (-self.survival_exponent).exp() * amp.norm_sqr()
    }

    /// Detector-2 probability, `|T R_M T e^{iφ_ABD} + R R_M R e^{iφ_ACD}|²`
    /// times the survival factor. Follows from the same splitter algebra as
    /// detector 1; with the balanced splitter the interference term flips
    /// sign.
    pub fn detector2_amplitude(&self, splitter: &BeamSplitterSet<T>) -> T {
        let m = splitter.mirror;
        let amp = splitter.transmit * m * splitter.transmit * self.phi_abd.exp_i()
            + splitter.reflect * m * splitter.reflect * self.phi_acd.exp_i();
        (-self.survival_exponent).exp() * amp.norm_sqr()
    }

    /// Closed-form detector-2 probability for the balanced splitter.
    pub fn detector2_closed(&self) -> T {
        let u = self.delta_phi_ucow();
        let r = self.height_ratio;
        let two = lit::<T>(2.0);
        let quarter = lit::<T>(0.25);
        let bracket = (-two * u * (T::one() + r / two)).exp() + (-two * u * (r / two)).exp()
            - two * (-u * (T::one() + r)).exp() * (self.q_cow * self.sin_alpha).cos();
        quarter * (-self.survival_exponent).exp() * bracket
    }

    /// Single-path probabilities `(P_ABD, P_ACD)` with splitter factors
    /// stripped.
    pub fn path_probabilities(&self) -> (T, T) {
        let two = lit::<T>(2.0);
        let common = (-self.survival_exponent).exp();
        (
            common * (-two * self.phi_abd.im).exp(),
            common * (-two * self.phi_acd.im).exp(),
        )
    }

    pub fn intensity(&self, i0: T) -> T {
        i0 / lit(2.0) * (T::one() + self.visibility() * (self.q_cow * self.sin_alpha).cos())
    }

    /// `sech(q_ucow sin α)`.
    pub fn visibility(&self) -> T {
        if self.q_ucow == T::zero() {
            return T::one();
        }
        sech(self.delta_phi_ucow())
    }

    /// `tanh|q_ucow sin α|`.
    pub fn predictability(&self) -> T {
        if self.q_ucow == T::zero() {
            return T::zero();
        }
        self.delta_phi_ucow().abs().tanh()
    }

    /// Predictability from [`Self::path_probabilities`].
    pub fn predictability_from_paths(&self) -> T {
        let (p1, p2) = self.path_probabilities();
        ((p1 - p2) / (p1 + p2)).abs()
    }

    /// Path difference giving the same double-slit pattern,
    /// `Δs = q_cow sin α · λ0`.
    pub fn equivalent_path_difference(&self, beam: &BeamParticle<T>) -> T {
        self.q_cow * self.sin_alpha * beam.wavelength()
    }
}

/// `q_cow = m² g H0 L0 / (ħ p0)`, arranged as `(m/ħ) g H0 L0 / v`.
pub fn q_cow<T: Real>(beam: &BeamParticle<T>, height: T, length: T, g: T) -> T {
    (beam.mass() / beam.hbar()) * g * height * length / beam.group_velocity()
}

/// `q_ucow = m³ g Γ H0 L0 / (2 p0³) = g Γ H0 L0 / (2 v³)`.
pub fn q_ucow<T: Real>(beam: &BeamParticle<T>, height: T, length: T, g: T) -> T {
    if beam.is_stable() {
        return T::zero();
    }
    let v = beam.group_velocity();
    g * beam.decay_rate() * height * length / (lit::<T>(2.0) * v * v * v)
}

/// Closed-form path phases, including the `mgΓ/(2p0c²)` terms and the
/// `sin²α` in the real part of the `AC`/`BD` legs exactly as they appear in
/// the leg formulas. Both cancel from the real phase difference.
pub fn leg_phases<T: Real>(
    beam: &BeamParticle<T>,
    geo: &CowGeometry<T>,
    constants: &PhysicalConstants<T>,
) -> CowPhases<T> {
    let g = constants.g_std();
    let c = beam.speed_of_light();
    let (m, gamma) = (beam.mass(), beam.decay_rate());
    let v = beam.group_velocity();
    let (h, l) = (geo.height, geo.length);
    let s = geo.tilt.sin();
    let two = lit::<T>(2.0);
    let four = lit::<T>(4.0);

    // -(m²gH0²/2ħp0) sin²α = -(m/ħ)(gH0²/2v) sin²α
    let vertical_re = -(m / beam.hbar()) * g * h * h / (two * v) * s * s;
    // m³gH0²Γ/4p0³ + mgH0²Γ/4p0c²
    let vertical_im = (g * h * h * gamma / (four * v * v * v) + g * h * h * gamma / (four * v * c * c)) * s;
    let vertical = ComplexPhase::new(vertical_re, vertical_im);

    let qc = q_cow(beam, h, l, g);
    let qu = q_ucow(beam, h, l, g);
    let top_im = (g * gamma / (two * v * v * v) + g * gamma / (two * v * c * c)) * h * l * s;
    let top = ComplexPhase::new(-qc * s, top_im);

    CowPhases {
        phi_abd: vertical,
        phi_acd: vertical + top,
        q_cow: qc,
        q_ucow: qu,
        sin_alpha: s,
        height_ratio: h / l,
        survival_exponent: (h + l) * beam.inverse_survival_length(),
    }
}

/// The four legs as straight segments, `[AB, BD, AC, CD]`.
pub fn loop_legs<T: Real>(geo: &CowGeometry<T>) -> Result<[PathLeg<T>; 4]> {
    let [a, b, c, d] = geo.corners();
    Ok([
        PathLeg::new(a, b)?,
        PathLeg::new(b, d)?,
        PathLeg::new(a, c)?,
        PathLeg::new(c, d)?,
    ])
}

/// Path phases obtained by integrating `V = mgz` along the loop legs.
pub fn propagated_leg_phases<T: Real>(
    beam: &BeamParticle<T>,
    geo: &CowGeometry<T>,
    constants: &PhysicalConstants<T>,
) -> Result<CowPhases<T>> {
    let g = constants.g_std();
    let gravity = PotentialModel::UniformGravity { g, z0: T::zero() };
    let [ab, bd, ac, cd] = loop_legs(geo)?;
    let one = Complex::new(T::one(), T::zero());
    let upper = propagator::propagate(beam, &[ab, bd], &gravity, one)?;
    let lower = propagator::propagate(beam, &[ac, cd], &gravity, one)?;
    Ok(CowPhases {
        phi_abd: upper.potential_phase,
        phi_acd: lower.potential_phase,
        q_cow: q_cow(beam, geo.height, geo.length, g),
        q_ucow: q_ucow(beam, geo.height, geo.length, g),
        sin_alpha: geo.tilt.sin(),
        height_ratio: geo.height / geo.length,
        survival_exponent: (geo.height + geo.length) * beam.inverse_survival_length(),
    })
}

/// Detector-1 probability in both forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Detector1<T> {
    pub closed: T,
    pub amplitude: T,
}

pub fn detector1_probability<T: Real>(
    beam: &BeamParticle<T>,
    geo: &CowGeometry<T>,
    splitter: &BeamSplitterSet<T>,
    constants: &PhysicalConstants<T>,
) -> Detector1<T> {
    let phases = leg_phases(beam, geo, constants);
    Detector1 {
        closed: phases.detector1_closed(splitter),
        amplitude: phases.detector1_amplitude(splitter),
    }
}

pub fn detector2_probability<T: Real>(
    beam: &BeamParticle<T>,
    geo: &CowGeometry<T>,
    splitter: &BeamSplitterSet<T>,
    constants: &PhysicalConstants<T>,
) -> T {
    leg_phases(beam, geo, constants).detector2_amplitude(splitter)
}

pub fn intensity<T: Real>(beam: &BeamParticle<T>, geo: &CowGeometry<T>, i0: T, constants: &PhysicalConstants<T>) -> Result<T> {
    if !(i0.is_finite() && i0 > T::zero()) {
        return Err(Error::domain("i0", format!("must be finite and > 0, got {i0}")));
    }
    Ok(leg_phases(beam, geo, constants).intensity(i0))
}

pub fn visibility<T: Real>(beam: &BeamParticle<T>, geo: &CowGeometry<T>, constants: &PhysicalConstants<T>) -> T {
    leg_phases(beam, geo, constants).visibility()
}

pub fn predictability<T: Real>(beam: &BeamParticle<T>, geo: &CowGeometry<T>, constants: &PhysicalConstants<T>) -> T {
    leg_phases(beam, geo, constants).predictability()
}

/// Where the phases of a rotation scan come from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CowModel<T> {
    Physical {
        beam: BeamParticle<T>,
        geometry: CowGeometry<T>,
        constants: PhysicalConstants<T>,
    },
    /// Prescribed strengths, see [`CowPhases::synthetic`].
    Synthetic { q_cow: T, q_ucow: T, height_ratio: T },
}

impl<T: Real> CowModel<T> {
    pub fn phases(&self, alpha: T) -> Result<CowPhases<T>> {
        match self {
            CowModel::Physical {
                beam,
                geometry,
                constants,
            } => Ok(leg_phases(beam, &geometry.with_tilt(alpha)?, constants)),
            CowModel::Synthetic {
                q_cow,
                q_ucow,
                height_ratio,
            } => CowPhases::synthetic(*q_cow, *q_ucow, alpha, *height_ratio),
        }
    }
}

/// One tilt of a rotation scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationRow<T> {
    pub alpha: T,
    pub p_d1: T,
    pub p_d1_amplitude: T,
    pub p_d2: T,
    pub intensity: T,
    pub visibility: T,
    pub predictability: T,
    pub duality_residual: T,
    /// `q_cow sin α`.
    pub cow_phase: T,
    /// `q_ucow sin α`.
    pub ucow_phase: T,
}

pub fn rotation_row<T: Real>(model: &CowModel<T>, alpha: T, splitter: &BeamSplitterSet<T>, i0: T) -> Result<RotationRow<T>> {
    if !(i0.is_finite() && i0 > T::zero()) {
        return Err(Error::domain("i0", format!("must be finite and > 0, got {i0}")));
    }
    let ph = model.phases(alpha)?;
    let (v, p) = (ph.visibility(), ph.predictability());
    let check = duality_check_with(v, p, lit(DEFAULT_DUALITY_TOLERANCE))?;
    Ok(RotationRow {
        alpha,
        p_d1: ph.detector1_closed(splitter),
        p_d1_amplitude: ph.detector1_amplitude(splitter),
        p_d2: ph.detector2_amplitude(splitter),
        intensity: ph.intensity(i0),
        visibility: v,
        predictability: p,
        duality_residual: check.residual,
        cow_phase: ph.q_cow * ph.sin_alpha,
        ucow_phase: ph.delta_phi_ucow(),
    })
}

/// Uniform tilt sweep.
pub fn rotation_scan<T: Real>(
    model: &CowModel<T>,
    alpha_range: (T, T),
    n_points: usize,
    splitter: &BeamSplitterSet<T>,
    i0: T,
) -> Result<Vec<RotationRow<T>>> {
    if alpha_range.1 <= alpha_range.0 {
        return Err(Error::domain("sweep", "range must satisfy start < stop"));
    }
    linspace(alpha_range.0, alpha_range.1, n_points)?
        .into_iter()
        .map(|a| rotation_row(model, a, splitter, i0))
        .collect()
}
