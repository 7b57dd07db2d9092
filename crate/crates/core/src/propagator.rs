//! Stationary WKB amplitudes along piecewise straight paths.
//!
//! For a beam with complex wave number the amplitude after a path of length
//! `s` through a slowly varying potential `V` is
//!
//! ```text
//! ψ = A0 χ(r0) · exp(i p0 s/ħ) · exp(-s/2ℓ0) · exp(i φ̃)
//! φ̃ = -(m/ħp0) · [1 - i λ0/(2ℓ0)] · ∫ V ds
//! ```
//!
//! with the line integral taken along the unperturbed (straight) legs and
//! `E = E0`.

use std::ops::{Add, AddAssign, Neg, Sub};

use num_complex::Complex;

use crate::beam::BeamParticle;
use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

pub type Vec3<T> = [T; 3];

/// Legs closer than this (m) at their junction count as contiguous.
pub const CONTIGUITY_TOLERANCE: f64 = 1.0e-12;

fn sub3<T: Real>(a: Vec3<T>, b: Vec3<T>) -> Vec3<T> {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot3<T: Real>(a: Vec3<T>, b: Vec3<T>) -> T {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm3<T: Real>(a: Vec3<T>) -> T {
    a[0].hypot(a[1]).hypot(a[2])
}

/// A straight segment of an unperturbed particle path. `z` is vertical.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathLeg<T> {
    start: Vec3<T>,
    end: Vec3<T>,
    length: T,
}

impl<T: Real> PathLeg<T> {
    pub fn new(start: Vec3<T>, end: Vec3<T>) -> Result<Self> {
        if start.iter().chain(end.iter()).any(|c| !c.is_finite()) {
            return Err(Error::Geometry("leg endpoints must be finite".into()));
        }
        let length = norm3(sub3(end, start));
        if length <= T::zero() {
            return Err(Error::domain("leg", "start and end coincide (empty leg)"));
        }
        Ok(Self { start, end, length })
    }

    pub fn start(&self) -> Vec3<T> {
        self.start
    }

    pub fn end(&self) -> Vec3<T> {
        self.end
    }

    pub fn length(&self) -> T {
        self.length
    }
}

/// Potential energy tabulated along a straight axis. The potential is taken
/// to be constant on planes normal to the axis and linear between samples.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledLineProfile<T> {
    origin: Vec3<T>,
    direction: Vec3<T>,
    samples: Vec<(T, T)>,
}

impl<T: Real> SampledLineProfile<T> {
    /// `samples` are `(s, V)` pairs with `s` the signed distance (m) from
    /// `origin` along `direction` and `V` in joules.
    pub fn new(origin: Vec3<T>, direction: Vec3<T>, samples: Vec<(T, T)>) -> Result<Self> {
        let n = norm3(direction);
        if !(n.is_finite() && n > T::zero()) {
            return Err(Error::Data("profile direction must be a finite non-zero vector".into()));
        }
        if samples.len() < 2 {
            return Err(Error::Data(format!("profile needs at least 2 samples, got {}", samples.len())));
        }
        if samples.iter().any(|(s, v)| !(s.is_finite() && v.is_finite())) {
            return Err(Error::Data("profile samples must be finite".into()));
        }
        if samples.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::Data("profile abscissae must be strictly increasing".into()));
        }
        Ok(Self {
            origin,
            direction: [direction[0] / n, direction[1] / n, direction[2] / n],
            samples,
        })
    }

    /// Samples `potential(s)` at `n` uniformly spaced points of `[s_lo, s_hi]`.
    pub fn tabulate(
        origin: Vec3<T>,
        direction: Vec3<T>,
        s_lo: T,
        s_hi: T,
        n: usize,
        potential: impl Fn(T) -> T,
    ) -> Result<Self> {
        let grid = crate::scalar::linspace(s_lo, s_hi, n)?;
        Self::new(origin, direction, grid.into_iter().map(|s| (s, potential(s))).collect())
    }

    pub fn samples(&self) -> &[(T, T)] {
        &self.samples
    }

    fn project(&self, r: Vec3<T>) -> T {
        dot3(sub3(r, self.origin), self.direction)
    }

    fn covers(&self, s: T) -> bool {
        let first = self.samples[0].0;
        let last = self.samples[self.samples.len() - 1].0;
        // allow rounding from the projection
        let slack = lit::<T>(4.0) * T::epsilon() * (first.abs().max(last.abs()));
        s >= first - slack && s <= last + slack
    }

    /// Linear interpolation, clamped to the tabulated range.
    pub fn value_at(&self, s: T) -> T {
        let pts = &self.samples;
        let idx = pts.partition_point(|&(x, _)| x <= s);
        if idx == 0 {
            return pts[0].1;
        }
        if idx == pts.len() {
            return pts[pts.len() - 1].1;
        }
        let (x0, v0) = pts[idx - 1];
        let (x1, v1) = pts[idx];
        v0 + (v1 - v0) * (s - x0) / (x1 - x0)
    }

    /// Trapezoidal integral of the tabulated potential over `[a, b]`, `a ≤ b`.
    fn integrate_axis(&self, a: T, b: T) -> T {
        let mut total = T::zero();
        let mut x_prev = a;
        let mut v_prev = self.value_at(a);
        for &(x, v) in self.samples.iter().filter(|(x, _)| *x > a && *x < b) {
            total = total + (x - x_prev) * (v + v_prev) / lit(2.0);
            x_prev = x;
            v_prev = v;
        }
        total + (b - x_prev) * (self.value_at(b) + v_prev) / lit(2.0)
    }

    fn leg_integral(&self, leg: &PathLeg<T>) -> Result<T> {
        let sa = self.project(leg.start);
        let sb = self.project(leg.end);
        if !(self.covers(sa) && self.covers(sb)) {
            return Err(Error::Data(format!(
                "leg spans profile coordinates [{sa}, {sb}] outside the tabulated range"
            )));
        }
        let span = (sb - sa).abs();
        // A leg normal to the axis sees a constant potential.
        if span <= T::epsilon() * leg.length {
            return Ok(self.value_at(sa) * leg.length);
        }
        let (lo, hi) = if sa <= sb { (sa, sb) } else { (sb, sa) };
        Ok(self.integrate_axis(lo, hi) * (leg.length / span))
    }
}

/// The potential acting on the beam.
#[derive(Debug, Clone, PartialEq)]
pub enum PotentialModel<T> {
    Zero,
    /// `V = m g (z - z0)` for the beam mass `m`.
    UniformGravity { g: T, z0: T },
    SampledLine(SampledLineProfile<T>),
}

impl<T: Real> PotentialModel<T> {
    /// `∫ V ds` (J·m) along a straight leg.
    pub fn line_integral(&self, beam: &BeamParticle<T>, leg: &PathLeg<T>) -> Result<T> {
        match self {
            PotentialModel::Zero => Ok(T::zero()),
            PotentialModel::UniformGravity { g, z0 } => {
                // V is linear along the leg: exact midpoint value.
                let z_mid = (leg.start[2] + leg.end[2]) / lit(2.0);
                Ok(beam.mass() * *g * (z_mid - *z0) * leg.length)
            }
            PotentialModel::SampledLine(profile) => profile.leg_integral(leg),
        }
    }
}

/// Complex phase `φ̃` accumulated along a path.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ComplexPhase<T> {
    /// Dynamical phase (rad).
    pub re: T,
    /// Decay exponent: the amplitude carries `exp(-im)`.
    pub im: T,
}

impl<T: Real> ComplexPhase<T> {
    pub fn new(re: T, im: T) -> Self {
        Self { re, im }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero())
    }

    /// `exp(i φ̃)`.
    pub fn exp_i(&self) -> Complex<T> {
        Complex::from_polar((-self.im).exp(), self.re)
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

impl<T: Real> Add for ComplexPhase<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl<T: Real> AddAssign for ComplexPhase<T> {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<T: Real> Sub for ComplexPhase<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl<T: Real> Neg for ComplexPhase<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl<T: Real> std::iter::Sum for ComplexPhase<T> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), Add::add)
    }
}

/// Converts `∫ V ds` into the complex phase for this beam.
pub fn phase_from_integral<T: Real>(beam: &BeamParticle<T>, potential_integral: T) -> ComplexPhase<T> {
    let coupling = (beam.mass() / beam.hbar()) / beam.momentum();
    let re = -coupling * potential_integral;
    let im = if beam.is_stable() {
        T::zero()
    } else {
        // λ0/(2ℓ0) = (ħ/p0)(mΓ/p0)/2
        let ratio = beam.wavelength() * beam.inverse_survival_length() / lit(2.0);
        coupling * ratio * potential_integral
    };
    ComplexPhase::new(re, im)
}

/// Potential-dependent complex phase of one leg.
///
/// The potential must vary slowly on the scale of `λ0`; that is not checked.
pub fn leg_phase<T: Real>(
    beam: &BeamParticle<T>,
    leg: &PathLeg<T>,
    potential: &PotentialModel<T>,
) -> Result<ComplexPhase<T>> {
    let integral = potential.line_integral(beam, leg)?;
    if !integral.is_finite() {
        return Err(Error::Data(format!("potential integral is not finite ({integral})")));
    }
    Ok(phase_from_integral(beam, integral))
}

/// Stationary amplitude at the end of a multi-leg path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagatedAmplitude<T> {
    /// `A0 χ(r0)`.
    pub prefactor: Complex<T>,
    /// Total path length `s` (m).
    pub path_length: T,
    /// `p0 s / ħ` (rad).
    pub dynamical_phase: T,
    /// `s / (2ℓ0)`, zero for stable beams.
    pub attenuation_exponent: T,
    pub potential_phase: ComplexPhase<T>,
}

impl<T: Real> PropagatedAmplitude<T> {
    pub fn amplitude(&self) -> Complex<T> {
        let modulus = (-self.attenuation_exponent - self.potential_phase.im).exp();
        let phase = self.dynamical_phase + self.potential_phase.re;
        self.prefactor * Complex::from_polar(modulus, phase)
    }

    /// `|ψ|² = |A0 χ|² · exp(-s/ℓ0) · exp(-2 Im φ̃)`.
    pub fn probability(&self) -> T {
        let two = lit::<T>(2.0);
        self.prefactor.norm_sqr() * (-two * (self.attenuation_exponent + self.potential_phase.im)).exp()
    }
}

/// Propagates along contiguous legs, summing lengths and leg phases.
pub fn propagate<T: Real>(
    beam: &BeamParticle<T>,
    legs: &[PathLeg<T>],
    potential: &PotentialModel<T>,
    prefactor: Complex<T>,
) -> Result<PropagatedAmplitude<T>> {
    if legs.is_empty() {
        return Err(Error::Geometry("path has no legs".into()));
    }
    let tol = lit::<T>(CONTIGUITY_TOLERANCE);
    for (i, pair) in legs.windows(2).enumerate() {
        let gap = norm3(sub3(pair[1].start, pair[0].end));
        if gap > tol {
            return Err(Error::Geometry(format!(
                "leg {} ends {gap} m away from the start of leg {}",
                i,
                i + 1
            )));
        }
    }
    let mut path_length = T::zero();
    let mut potential_phase = ComplexPhase::zero();
    for leg in legs {
        path_length = path_length + leg.length;
        potential_phase += leg_phase(beam, leg, potential)?;
    }
    Ok(PropagatedAmplitude {
        prefactor,
        path_length,
        dynamical_phase: path_length / beam.wavelength(),
        attenuation_exponent: path_length * beam.inverse_survival_length() / lit(2.0),
        potential_phase,
    })
}
