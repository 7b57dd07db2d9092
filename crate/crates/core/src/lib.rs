//! Interference of undecayed unstable particles.
//!
//! A beam of particles with decay rate `Γ` has a complex wave number, so
//! every path accumulates both a phase and an attenuation. Paths of
//! different length or speed are then attenuated differently, which gives
//! which-way information and lowers fringe visibility, with
//! `V² + P² = 1` throughout.
//!
//! The modules cover the beam itself ([`beam`]), amplitudes along straight
//! paths ([`propagator`]), the double slit ([`doubleslit`]), the gravity
//! interferometer ([`cow`]), a wave-packet treatment of the double slit
//! ([`wavepacket`]) and visibility/predictability bookkeeping
//! ([`duality`]).
//!
//! Everything is generic over the scalar via [`Real`]; the aliases below fix
//! it to `f64`.
//!
//! ```
//! use quup::{Beam, Constants, SlitGeometry, doubleslit};
//!
//! let k = Constants::codata();
//! let beam = Beam::thermal_neutron(&k).with_survival_in_wavelengths(10.0).unwrap();
//! let ds = beam.survival_length().unwrap();
//! let v = doubleslit::visibility(&beam, ds);
//! assert!((v - 1.0 / 0.5_f64.cosh()).abs() < 1e-15);
//! # let _ = SlitGeometry::symmetric(1.0, ds).unwrap();
//! ```

/// Library version.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub mod beam;
pub mod constants;
pub mod cow;
pub mod doubleslit;
pub mod duality;
pub mod error;
pub mod propagator;
pub mod quadrature;
pub mod scalar;
pub mod wavepacket;

pub use beam::{make_beam, BeamParticle, DecayScales, ValidityReport};
pub use constants::PhysicalConstants;
pub use cow::{BeamSplitterSet, CowGeometry, CowModel, CowPhases, RotationRow};
pub use doubleslit::{IntensityPoint, Predictability, SlitGeometry};
pub use duality::{DualityResult, DualityStatus, ExtractionRule};
pub use error::{Error, Result};
pub use propagator::{ComplexPhase, PathLeg, PotentialModel, PropagatedAmplitude, SampledLineProfile};
pub use scalar::Real;
pub use wavepacket::{NumericDetection, PacketParams, PacketProbabilities, PacketValidity, TwoPathPacketSetup};

pub type Constants = PhysicalConstants<f64>;
pub type Beam = BeamParticle<f64>;
pub type Validity = ValidityReport<f64>;
pub type Leg = PathLeg<f64>;
pub type Potential = PotentialModel<f64>;
pub type Phase = ComplexPhase<f64>;
pub type Amplitude = PropagatedAmplitude<f64>;
pub type Slits = SlitGeometry<f64>;
pub type Intensity = IntensityPoint<f64>;
pub type Loop = CowGeometry<f64>;
pub type Splitter = BeamSplitterSet<f64>;
pub type Phases = CowPhases<f64>;
pub type Packet = PacketParams<f64>;
pub type PacketSetup = TwoPathPacketSetup<f64>;
pub type Duality = DualityResult<f64>;
