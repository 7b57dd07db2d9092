//! Steady-beam double slit with unstable particles.
//!
//! Slits `B` and `C` are equidistant from the source `A`, so only the
//! slit-to-detector lengths `s_BD`, `s_CD` matter. With `P0 = 1`,
//!
//! ```text
//! P(D) = e^{-s_BD/ℓ0} + e^{-s_CD/ℓ0} + 2 e^{-(s_BD+s_CD)/2ℓ0} cos(Δs/λ0)
//! I    = I0/2 · [1 + sech(Δs/2ℓ0) cos(Δs/λ0)]
//! V    = sech(Δs/2ℓ0)        P = tanh(|Δs|/2ℓ0)
//! ```

use crate::beam::BeamParticle;
use crate::error::{Error, Result};
use crate::scalar::{lit, linspace, sech, Real};

/// Exponents beyond this are evaluated relative to each other.
const UNDERFLOW_EXPONENT: f64 = 700.0;

/// Path lengths from the two slits to one detection point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlitGeometry<T> {
    s_bd: T,
    s_cd: T,
    // kept separately so small differences survive long paths
    delta_s: T,
}

impl<T: Real> SlitGeometry<T> {
    pub fn new(s_bd: T, s_cd: T) -> Result<Self> {
        for (field, v) in [("geometry.s_bd", s_bd), ("geometry.s_cd", s_cd)] {
            if !(v.is_finite() && v > T::zero()) {
                return Err(Error::domain(field, format!("must be finite and > 0, got {v}")));
            }
        }
        Ok(Self { s_bd, s_cd, delta_s: s_bd - s_cd })
    }

    /// Paths `mean ± delta_s/2`. The requested `delta_s` is kept exactly.
    pub fn symmetric(mean: T, delta_s: T) -> Result<Self> {
        if !delta_s.is_finite() {
            return Err(Error::domain("geometry.delta_s", "must be finite"));
        }
        let half = delta_s / lit(2.0);
        Self::new(mean + half, mean - half).map(|g| Self { delta_s, ..g })
    }

    /// Slits at transverse positions `±d/2` a distance `screen` from the
    /// detection plane; the detector sits at transverse offset `x`. Slit `B`
    /// is the one at `+d/2`.
    pub fn from_screen(slit_separation: T, x: T, screen: T) -> Result<Self> {
        if !(slit_separation.is_finite() && slit_separation > T::zero()) {
            return Err(Error::domain("geometry.d_m", "must be finite and > 0"));
        }
        if !(screen.is_finite() && screen > T::zero()) {
            return Err(Error::domain("geometry.L_m", "must be finite and > 0"));
        }
        if !x.is_finite() {
            return Err(Error::domain("geometry.x_m", "must be finite"));
        }
        let half = slit_separation / lit(2.0);
        let geo = Self::new(screen.hypot(x - half), screen.hypot(x + half))?;
        // s_BD² - s_CD² = -2xd
        let delta_s = -lit::<T>(2.0) * x * slit_separation / (geo.s_bd + geo.s_cd);
        Ok(Self { delta_s, ..geo })
    }

    pub fn s_bd(&self) -> T {
        self.s_bd
    }

    pub fn s_cd(&self) -> T {
        self.s_cd
    }

    /// `Δs = s_BD - s_CD`.
    pub fn delta_s(&self) -> T {
        self.delta_s
    }

    pub fn mean_path(&self) -> T {
        (self.s_bd + self.s_cd) / lit(2.0)
    }
}

/// Path difference at transverse offset `x` for slits `±d/2` at distance
/// `screen`, computed without subtracting the two lengths.
pub fn screen_path_difference<T: Real>(slit_separation: T, x: T, screen: T) -> Result<T> {
    SlitGeometry::from_screen(slit_separation, x, screen).map(|g| g.delta_s)
}

/// One point of an intensity pattern.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntensityPoint<T> {
    pub delta_s: T,
    /// `P(D)` with `P0 = 1`.
    pub probability: T,
    pub intensity: T,
    pub i0: T,
}

/// `P(D)` with `P0 = 1`.
pub fn detection_probability<T: Real>(beam: &BeamParticle<T>, geo: &SlitGeometry<T>) -> T {
    let inv = beam.inverse_survival_length();
    let (a, b) = (geo.s_bd * inv, geo.s_cd * inv);
    let fringe = (geo.delta_s() / beam.wavelength()).cos();
    (-a).exp() + (-b).exp() + lit::<T>(2.0) * (-(a + b) / lit(2.0)).exp() * fringe
}

/// Fringe visibility `sech(Δs/2ℓ0)`; exactly one for a stable beam.
pub fn visibility<T: Real>(beam: &BeamParticle<T>, delta_s: T) -> T {
    if beam.is_stable() {
        return T::one();
    }
    sech(delta_s * beam.inverse_survival_length() / lit(2.0))
}

/// Normalised intensity at a detection point.
pub fn intensity<T: Real>(beam: &BeamParticle<T>, geo: &SlitGeometry<T>, i0: T) -> Result<IntensityPoint<T>> {
    if !(i0.is_finite() && i0 > T::zero()) {
        return Err(Error::domain("i0", format!("must be finite and > 0, got {i0}")));
    }
    let ds = geo.delta_s();
    let fringe = (ds / beam.wavelength()).cos();
    Ok(IntensityPoint {
        delta_s: ds,
        probability: detection_probability(beam, geo),
        intensity: i0 / lit(2.0) * (T::one() + visibility(beam, ds) * fringe),
        i0,
    })
}

/// Which-way predictability in two independent forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Predictability<T> {
    /// `|P_ACD - P_ABD| / (P_ACD + P_ABD)` from the single-path survival
    /// probabilities.
    pub ratio: T,
    /// `tanh(|Δs|/2ℓ0)`.
    pub closed: T,
}

pub fn predictability<T: Real>(beam: &BeamParticle<T>, geo: &SlitGeometry<T>) -> Predictability<T> {
    if beam.is_stable() {
        return Predictability {
            ratio: T::zero(),
            closed: T::zero(),
        };
    }
    let inv = beam.inverse_survival_length();
    let (a, b) = (geo.s_bd * inv, geo.s_cd * inv);
    let ratio = if a.max(b) > lit(UNDERFLOW_EXPONENT) {
        // Shift both exponents by the smaller one before exponentiating.
        let lo = a.min(b);
        let (pa, pb) = ((lo - a).exp(), (lo - b).exp());
        ((pb - pa) / (pb + pa)).abs()
    } else {
        let (pa, pb) = ((-a).exp(), (-b).exp());
        ((pb - pa) / (pb + pa)).abs()
    };
    Predictability {
        ratio,
        closed: (geo.delta_s().abs() * inv / lit(2.0)).tanh(),
    }
}

/// A row of a `Δs` sweep at fixed mean path.
pub fn fringe_point<T: Real>(beam: &BeamParticle<T>, mean_path: T, delta_s: T, i0: T) -> Result<IntensityPoint<T>> {
    let geo = SlitGeometry::symmetric(mean_path, delta_s)?;
    intensity(beam, &geo, i0)
}

/// Uniform `Δs` sweep over `range` holding `(s_BD + s_CD)/2 = mean_path`.
pub fn fringe_scan<T: Real>(
    beam: &BeamParticle<T>,
    range: (T, T),
    n_points: usize,
    mean_path: T,
    i0: T,
) -> Result<Vec<IntensityPoint<T>>> {
    if range.1 <= range.0 {
        return Err(Error::domain("sweep", "range must satisfy start < stop"));
    }
    linspace(range.0, range.1, n_points)?
        .into_iter()
        .map(|ds| fringe_point(beam, mean_path, ds, i0))
        .collect()
}
