//! Time-dependent Gaussian wave packets through a double slit.
//!
//! Each slit emits a non-spreading packet that decays at rate `Γ`,
//!
//! ```text
//! Ψ_i(s,t) = (1/2πσ0²)^{1/4} e^{i[k0(s+s_i) - ω0 t]} e^{-(s+s_i-v t)²/4σ0²} e^{-Γt/2}
//! ```
//!
//! centred on slit `i` (at `s = -s_i`) when `t = 0`; the detector is at
//! `s = 0`. The detection probability is the time integral of the
//! probability current there. Its closed forms,
//!
//! ```text
//! P_i  = N0 e^{-Γ s_i/v}
//! P_12 = 2 N0 cos(k0 Δs) e^{-Δs²/8σ0²} e^{-Γ(s1+s2)/2v}
//! ```
//!
//! take the lower time limit to `-∞` and drop a factor `e^{Γ²σ0²/2v²}`; the
//! numeric path integrates from `t = 0` and reports both effects.

use num_complex::Complex;

use crate::beam::BeamParticle;
use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadratureOptions};
use crate::scalar::{lit, sech, Real};

/// Smallest `s_i/σ0` accepted as "far from the detector".
pub const MIN_SEPARATION_RATIO: f64 = 30.0;
/// Largest `Γσ0/v` accepted as "slow decay across one packet".
pub const MAX_DECAY_PER_WIDTH: f64 = 1.0e-3;
/// Largest travel-time to spreading-time ratio accepted as "no spreading".
pub const MAX_SPREADING_RATIO: f64 = 1.0e-2;
/// Half-width, in packet widths, of each arrival window and of the tail
/// kept beyond the last arrival.
pub const WINDOW_WIDTHS: f64 = 12.0;

/// A Gaussian packet. All fields in SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PacketParams<T> {
    sigma0: T,
    k0: T,
    v_g: T,
    gamma: T,
    n0: T,
}

impl<T: Real> PacketParams<T> {
    /// Normalisation `N0 = 1`.
    pub fn new(sigma0: T, k0: T, v_g: T, gamma: T) -> Result<Self> {
        for (field, v) in [("packet.sigma0_m", sigma0), ("packet.k0", k0), ("packet.v_g", v_g)] {
            if !(v.is_finite() && v > T::zero()) {
                return Err(Error::domain(field, format!("must be finite and > 0, got {v}")));
            }
        }
        if !(gamma.is_finite() && gamma >= T::zero()) {
            return Err(Error::domain("beam.gamma", format!("must be finite and >= 0, got {gamma}")));
        }
        Ok(Self {
            sigma0,
            k0,
            v_g,
            gamma,
            n0: T::one(),
        })
    }

    /// Packet of a beam: `k0 = p0/ħ`, `v = p0/m`.
    pub fn from_beam(beam: &BeamParticle<T>, sigma0: T) -> Result<Self> {
        Self::new(sigma0, beam.momentum() / beam.hbar(), beam.group_velocity(), beam.decay_rate())
    }

    pub fn with_normalization(self, n0: T) -> Result<Self> {
        if !(n0.is_finite() && n0 > T::zero()) {
            return Err(Error::domain("packet.n0", format!("must be finite and > 0, got {n0}")));
        }
        Ok(Self { n0, ..self })
    }

    pub fn with_gamma(self, gamma: T) -> Result<Self> {
        Self::new(self.sigma0, self.k0, self.v_g, gamma)?.with_normalization(self.n0)
    }

    pub fn sigma0(&self) -> T {
        self.sigma0
    }

    pub fn k0(&self) -> T {
        self.k0
    }

    pub fn group_velocity(&self) -> T {
        self.v_g
    }

    pub fn gamma(&self) -> T {
        self.gamma
    }

    pub fn normalization(&self) -> T {
        self.n0
    }

    /// `ħ/m = v/k0`.
    pub fn hbar_over_mass(&self) -> T {
        self.v_g / self.k0
    }

    /// `ω0 = ħk0²/2m`.
    pub fn omega0(&self) -> T {
        self.v_g * self.k0 / lit(2.0)
    }

    /// `t_spread = 2mσ0²/ħ`.
    pub fn t_spread(&self) -> T {
        lit::<T>(2.0) * self.sigma0 * self.sigma0 / self.hbar_over_mass()
    }

    /// Wave-number spread `σ_k = 1/2σ0`.
    pub fn sigma_k(&self) -> T {
        (lit::<T>(2.0) * self.sigma0).recip()
    }

    /// `Γσ0/v`.
    pub fn decay_per_width(&self) -> T {
        self.gamma * self.sigma0 / self.v_g
    }

    /// `(1/2πσ0²)^{1/2}`, the peak of `|Ψ|²`.
    pub fn peak_density(&self) -> T {
        (self.sigma0 * (lit::<T>(2.0) * T::PI()).sqrt()).recip()
    }

    /// `e^{Γ²σ0²/2v²}`: the full-line integral over the closed forms.
    pub fn full_line_factor(&self) -> T {
        let b = self.decay_per_width();
        (b * b / lit(2.0)).exp()
    }
}

/// Two packets with slit-to-detector paths `s1`, `s2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPathPacketSetup<T> {
    s1: T,
    s2: T,
    packet: PacketParams<T>,
}

/// Approximation diagnostics of a setup.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PacketValidity<T> {
    /// `min(s_i)/σ0`.
    pub separation_ratio: T,
    /// `Γσ0/v`.
    pub decay_per_width: T,
    /// Longest travel time over `t_spread`.
    pub spreading_ratio: T,
}

impl<T: Real> PacketValidity<T> {
    pub fn separated(&self) -> bool {
        self.separation_ratio >= lit(MIN_SEPARATION_RATIO)
    }

    pub fn slow_decay(&self) -> bool {
        self.decay_per_width <= lit(MAX_DECAY_PER_WIDTH)
    }

    pub fn no_spreading(&self) -> bool {
        self.spreading_ratio <= lit(MAX_SPREADING_RATIO)
    }

    /// The two conditions behind the closed forms.
    pub fn passes(&self) -> bool {
        self.separated() && self.slow_decay()
    }
}

impl<T: Real> TwoPathPacketSetup<T> {
    pub fn new(s1: T, s2: T, packet: PacketParams<T>) -> Result<Self> {
        for (field, v) in [("packet.s1_m", s1), ("packet.s2_m", s2)] {
            if !(v.is_finite() && v > T::zero()) {
                return Err(Error::domain(field, format!("must be finite and > 0, got {v}")));
            }
        }
        Ok(Self { s1, s2, packet })
    }

    pub fn s1(&self) -> T {
        self.s1
    }

    pub fn s2(&self) -> T {
        self.s2
    }

    pub fn packet(&self) -> &PacketParams<T> {
        &self.packet
    }

    /// `Δs = s1 - s2`.
    pub fn delta_s(&self) -> T {
        self.s1 - self.s2
    }

    pub fn validity(&self) -> PacketValidity<T> {
        let p = &self.packet;
        let longest = self.s1.max(self.s2);
        PacketValidity {
            separation_ratio: self.s1.min(self.s2) / p.sigma0,
            decay_per_width: p.decay_per_width(),
            spreading_ratio: (longest / p.v_g) / p.t_spread(),
        }
    }
}

/// `Ψ_i(s, t)`.
pub fn packet_value<T: Real>(p: &PacketParams<T>, s_i: T, s: T, t: T) -> Complex<T> {
    let x = s + s_i - p.v_g * t;
    let four = lit::<T>(4.0);
    let modulus = p.peak_density().sqrt() * (-x * x / (four * p.sigma0 * p.sigma0) - p.gamma * t / lit(2.0)).exp();
    Complex::from_polar(modulus, p.k0 * (s + s_i) - p.omega0() * t)
}

/// `∂Ψ_i/∂s = [i k0 - (s + s_i - v t)/2σ0²] Ψ_i`.
pub fn packet_gradient<T: Real>(p: &PacketParams<T>, s_i: T, s: T, t: T) -> Complex<T> {
    let x = s + s_i - p.v_g * t;
    let factor = Complex::new(-x / (lit::<T>(2.0) * p.sigma0 * p.sigma0), p.k0);
    factor * packet_value(p, s_i, s, t)
}

/// `J_i(0,t) = v (1/2πσ0²)^{1/2} e^{-(s_i - v t)²/2σ0²} e^{-Γt}`.
pub fn current_single<T: Real>(p: &PacketParams<T>, s_i: T, t: T) -> T {
    let x = s_i - p.v_g * t;
    p.v_g * p.peak_density() * (-x * x / (lit::<T>(2.0) * p.sigma0 * p.sigma0) - p.gamma * t).exp()
}

/// `J_i(0,t) = (ħ/m) Im[Ψ_i* ∂Ψ_i/∂s]` evaluated from the packet itself.
pub fn current_single_derivative<T: Real>(p: &PacketParams<T>, s_i: T, t: T) -> T {
    let psi = packet_value(p, s_i, T::zero(), t);
    let grad = packet_gradient(p, s_i, T::zero(), t);
    p.hbar_over_mass() * (psi.conj() * grad).im
}

/// Interference current `2v Re[Ψ1* Ψ2]` in its cosine–Gaussian form.
pub fn current_cross<T: Real>(setup: &TwoPathPacketSetup<T>, t: T) -> T {
    let p = &setup.packet;
    let four = lit::<T>(4.0);
    let (x1, x2) = (setup.s1 - p.v_g * t, setup.s2 - p.v_g * t);
    let var4 = four * p.sigma0 * p.sigma0;
    lit::<T>(2.0)
        * p.v_g
        * p.peak_density()
        * (p.k0 * setup.delta_s()).cos()
        * (-x1 * x1 / var4 - x2 * x2 / var4 - p.gamma * t).exp()
}

/// `(ħ/m) Im{Ψ1* ∂Ψ2 + Ψ2* ∂Ψ1}` without dropping the Gaussian-gradient
/// terms. Exceeds [`current_cross`] by `(v/k0)(Δs/2σ0²) Im[Ψ1* Ψ2]`.
pub fn current_cross_exact<T: Real>(setup: &TwoPathPacketSetup<T>, t: T) -> T {
    let p = &setup.packet;
    let z = T::zero();
    let (psi1, psi2) = (packet_value(p, setup.s1, z, t), packet_value(p, setup.s2, z, t));
    let (d1, d2) = (packet_gradient(p, setup.s1, z, t), packet_gradient(p, setup.s2, z, t));
    p.hbar_over_mass() * (psi1.conj() * d2 + psi2.conj() * d1).im
}

/// `N0 (J1 + J2 + J12)`.
pub fn total_current<T: Real>(setup: &TwoPathPacketSetup<T>, t: T) -> T {
    let p = &setup.packet;
    p.n0 * (current_single(p, setup.s1, t) + current_single(p, setup.s2, t) + current_cross(setup, t))
}

/// `N0 v |Ψ1 + Ψ2|²` at the detector.
///
/// The phases `k0 s_i` and `ω0 t` are formed separately, so for
/// `k0 s_i ≫ 1` this loses about `k0 s_i · ε` of relative phase accuracy.
pub fn total_current_modulus<T: Real>(setup: &TwoPathPacketSetup<T>, t: T) -> T {
    let p = &setup.packet;
    let z = T::zero();
    let sum = packet_value(p, setup.s1, z, t) + packet_value(p, setup.s2, z, t);
    p.n0 * p.v_g * sum.norm_sqr()
}

/// `(P1, P2, P12, P)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PacketProbabilities<T> {
    pub p1: T,
    pub p2: T,
    pub p12: T,
    pub total: T,
}

impl<T: Real> PacketProbabilities<T> {
    fn from_parts(p1: T, p2: T, p12: T) -> Self {
        Self {
            p1,
            p2,
            p12,
            total: p1 + p2 + p12,
        }
    }
}

/// Time-integrated detection from quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericDetection<T> {
    pub probabilities: PacketProbabilities<T>,
    /// Sum of the quadrature error estimates of the three components.
    pub error_estimate: T,
    /// `∫_{-∞}^0 / ∫_{-∞}^{∞}` for the `J1`, `J2` and `J12` time profiles:
    /// the relative change if the lower limit were taken to `-∞`.
    pub lower_limit_gap: [T; 3],
    /// Natural logarithms of [`Self::lower_limit_gap`]; finite when the gap
    /// underflows.
    pub log_lower_limit_gap: [T; 3],
    /// Bound on the relative weight dropped beyond `t_max`.
    pub truncation_bound: T,
    pub t_max: T,
    pub panels: usize,
    pub validity: PacketValidity<T>,
}

/// `ln ∫_a^∞ exp(-u²/2 - b u) du` with the integrand rescaled by its maximum.
fn log_gaussian_tail<T: Real>(a: T, b: T, options: &QuadratureOptions<T>) -> Result<T> {
    // maximum of -u²/2 - b u on [a, ∞)
    let peak = (-b).max(a);
    let log_peak = -peak * peak / lit(2.0) - b * peak;
    let reach = lit::<T>(WINDOW_WIDTHS) + lit::<T>(2.0) * lit::<T>(WINDOW_WIDTHS).sqrt();
    let hi = peak + reach;
    let f = |u: T| (-u * u / lit(2.0) - b * u - log_peak).exp();
    let est = integrate(f, &[a, peak, hi], options)?;
    Ok(log_peak + est.value.ln())
}

/// Relative lower-limit gap of a profile `exp(-(c - v t)²/2σ² - Γt)`
/// integrated from `t = 0`, returned as `(gap, ln gap)`.
fn lower_limit_gap<T: Real>(centre_widths: T, beta: T, options: &QuadratureOptions<T>) -> Result<(T, T)> {
    // u = (v t - c)/σ: the profile is e^{-u²/2 - β u} up to a constant.
    // ∫_{-∞}^{u0} h(u) du = ∫_{-u0}^{∞} h(-w) dw with h(-w) = e^{-w²/2 + β w}.
    let u0 = -centre_widths;
    let log_below = log_gaussian_tail(-u0, -beta, options)?;
    let log_above = log_gaussian_tail(u0, beta, options)?;
    // ln(G / (G + I)) = -ln(1 + I/G)
    let log_gap = -((log_above - log_below).exp().ln_1p());
    let log_gap = if log_gap.is_finite() { log_gap } else { log_below - log_above };
    Ok((log_gap.exp(), log_gap))
}

pub fn detection_probability_numeric<T: Real>(setup: &TwoPathPacketSetup<T>) -> Result<NumericDetection<T>> {
    detection_probability_numeric_with(setup, &QuadratureOptions::default())
}

/// Integrates each current over `[0, t_max]` with refinement windows at the
/// packet arrival times.
pub fn detection_probability_numeric_with<T: Real>(
    setup: &TwoPathPacketSetup<T>,
    options: &QuadratureOptions<T>,
) -> Result<NumericDetection<T>> {
    let p = &setup.packet;
    let v = p.v_g;
    let width_t = p.sigma0 / v;
    let beta = p.decay_per_width();
    let w = lit::<T>(WINDOW_WIDTHS);
    let two = lit::<T>(2.0);
    let mean = (setup.s1 + setup.s2) / two;

    let arrivals = [setup.s1 / v, setup.s2 / v, mean / v];
    let t_last = setup.s1.max(setup.s2) / v;
    let t_max = t_last + w * width_t;
    let mut breaks = vec![T::zero(), t_max];
    for t in arrivals {
        for x in [t - w * width_t, t, t + w * width_t] {
            if x > T::zero() && x < t_max {
                breaks.push(x);
            }
        }
    }
    breaks.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));
    breaks.dedup();

    let n0 = p.n0;
    let e1 = integrate(|t| current_single(p, setup.s1, t), &breaks, options)?;
    let e2 = integrate(|t| current_single(p, setup.s2, t), &breaks, options)?;
    let e12 = integrate(|t| current_cross(setup, t), &breaks, options)?;

    let mut gap = [T::zero(); 3];
    let mut log_gap = [T::zero(); 3];
    for (j, centre) in [setup.s1, setup.s2, mean].into_iter().enumerate() {
        let (g, lg) = lower_limit_gap(centre / p.sigma0, beta, options)?;
        gap[j] = g;
        log_gap[j] = lg;
    }

    Ok(NumericDetection {
        probabilities: PacketProbabilities::from_parts(n0 * e1.value, n0 * e2.value, n0 * e12.value),
        error_estimate: n0 * (e1.error + e2.error + e12.error),
        lower_limit_gap: gap,
        log_lower_limit_gap: log_gap,
        // Gaussian tail beyond W + β widths past the last arrival
        truncation_bound: (-(w + beta) * (w + beta) / two).exp(),
        t_max,
        panels: e1.panels + e2.panels + e12.panels,
        validity: setup.validity(),
    })
}

/// Closed forms with the lower limit at `-∞`.
pub fn detection_probability_analytic<T: Real>(setup: &TwoPathPacketSetup<T>) -> PacketProbabilities<T> {
    let p = &setup.packet;
    let ds = setup.delta_s();
    let gaussian = (-ds * ds / (lit::<T>(8.0) * p.sigma0 * p.sigma0)).exp();
    analytic_with_envelope(setup, gaussian)
}

/// Closed forms in the limit `σ0 → ∞`, the steady-beam pattern.
pub fn detection_probability_long_coherence<T: Real>(setup: &TwoPathPacketSetup<T>) -> PacketProbabilities<T> {
    analytic_with_envelope(setup, T::one())
}

fn analytic_with_envelope<T: Real>(setup: &TwoPathPacketSetup<T>, gaussian: T) -> PacketProbabilities<T> {
    let p = &setup.packet;
    let rate = p.gamma / p.v_g;
    let two = lit::<T>(2.0);
    let p1 = p.n0 * (-rate * setup.s1).exp();
    let p2 = p.n0 * (-rate * setup.s2).exp();
    let p12 = two
        * p.n0
        * (p.k0 * setup.delta_s()).cos()
        * gaussian
        * (-rate * (setup.s1 + setup.s2) / two).exp();
    PacketProbabilities::from_parts(p1, p2, p12)
}

/// `(V_G, V_DS, V_tot)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TotalVisibility<T> {
    pub gaussian: T,
    pub double_slit: T,
    pub total: T,
}

/// `V_tot = e^{-Δs²/8σ0²} sech(Δs/2ℓ0)`; `sigma0 = None` is the infinite
/// coherence length limit.
pub fn total_visibility<T: Real>(beam: &BeamParticle<T>, sigma0: Option<T>, delta_s: T) -> Result<TotalVisibility<T>> {
    let gaussian = match sigma0 {
        None => T::one(),
        Some(s) if s.is_finite() && s > T::zero() => (-delta_s * delta_s / (lit::<T>(8.0) * s * s)).exp(),
        Some(s) => return Err(Error::domain("packet.sigma0_m", format!("must be finite and > 0, got {s}"))),
    };
    let double_slit = if beam.is_stable() {
        T::one()
    } else {
        sech(delta_s * beam.inverse_survival_length() / lit(2.0))
    };
    Ok(TotalVisibility {
        gaussian,
        double_slit,
        total: gaussian * double_slit,
    })
}
