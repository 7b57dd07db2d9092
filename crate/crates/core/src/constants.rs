//! Physical constants.
//!
//! | symbol | value | unit |
//! |--------|-------|------|
//! | ħ | 1.054571817e-34 | J·s |
//! | c | 2.99792458e8 | m/s |
//! | g | 9.80 | m/s² |
//! | m_n | 1.67492749804e-27 | kg |
//!
//! Neutron beam presets use a free-neutron lifetime of 879.4 s and the
//! thermal speed 2200 m/s.

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

/// Reduced Planck constant (J·s).
pub const HBAR: f64 = 1.054571817e-34;
/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 2.99792458e8;
/// Gravitational acceleration at the interferometer (m/s²).
pub const STANDARD_GRAVITY: f64 = 9.80;
/// Neutron rest mass (kg).
pub const NEUTRON_MASS: f64 = 1.67492749804e-27;
/// Free-neutron mean lifetime (s).
pub const NEUTRON_LIFETIME: f64 = 879.4;
/// Speed of a thermal neutron (m/s).
pub const THERMAL_NEUTRON_SPEED: f64 = 2200.0;

/// The constants set used by every beam and interferometer calculation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants<T> {
    hbar: T,
    c: T,
    g: T,
    m_neutron: T,
}

impl<T: Real> PhysicalConstants<T> {
    /// Builds a custom constants set. Every value must be finite and positive.
    pub fn new(hbar: T, c: T, g: T, m_neutron: T) -> Result<Self> {
        for (field, v) in [
            ("hbar", hbar),
            ("c", c),
            ("g_std", g),
            ("m_neutron", m_neutron),
        ] {
            if !(v.is_finite() && v > T::zero()) {
                return Err(Error::domain(field, format!("must be finite and > 0, got {v}")));
            }
        }
        Ok(Self {
            hbar,
            c,
            g,
            m_neutron,
        })
    }

    /// The default table above.
    pub fn codata() -> Self {
        Self {
            hbar: lit(HBAR),
            c: lit(SPEED_OF_LIGHT),
            g: lit(STANDARD_GRAVITY),
            m_neutron: lit(NEUTRON_MASS),
        }
    }

    pub fn hbar(&self) -> T {
        self.hbar
    }

    pub fn c(&self) -> T {
        self.c
    }

    pub fn g_std(&self) -> T {
        self.g
    }

    pub fn m_neutron(&self) -> T {
        self.m_neutron
    }
}

impl<T: Real> Default for PhysicalConstants<T> {
    fn default() -> Self {
        Self::codata()
    }
}
