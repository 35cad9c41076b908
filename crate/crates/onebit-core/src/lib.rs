//! Numerics for the one-bit quantized Gaussian channel.
//!
//! The crate is `no_std` with `alloc`: special functions, channel laws, the
//! capacity solver, capacity-per-unit-energy sweeps, Rayleigh-fading
//! expectations, the pulse-position-modulation simulator and spectral
//! efficiency curves. File formats and threading live in the `onebit-cap`
//! crate.
//!
//! Units: information is measured in nats unless a name says otherwise, and
//! every routine takes the noise standard deviation explicitly.

#![no_std]

extern crate alloc;

pub mod capacity;
pub mod channels;
mod error;
pub mod fading;
pub mod optim;
pub mod ppm;
pub mod quad;
pub mod rng;
pub mod spectral;
pub mod specfun;
pub mod unit_energy;

pub use error::{Error, Result};

/// Information measured in nats.
pub type Nats = f64;

/// Validated noise standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct NoiseStd(f64);

impl NoiseStd {
    pub fn new(sigma: f64) -> Result<Self> {
        if sigma.is_finite() && sigma > 0.0 {
            Ok(Self(sigma))
        } else {
            Err(Error::Domain { what: "noise standard deviation", value: sigma })
        }
    }

    /// Unit noise, the default everywhere.
    pub const UNIT: Self = Self(1.0);

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn variance(self) -> f64 {
        self.0 * self.0
    }
}

/// Validated positive power (average or peak, depending on the caller).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct PowerBudget(f64);

impl PowerBudget {
    pub fn new(p: f64) -> Result<Self> {
        if p.is_finite() && p > 0.0 {
            Ok(Self(p))
        } else {
            Err(Error::Domain { what: "power", value: p })
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

/// Validated probability in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Probability(f64);

impl Probability {
    pub fn new(p: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&p) {
            Ok(Self(p))
        } else {
            Err(Error::Domain { what: "probability", value: p })
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Probability {
    type Error = Error;
    fn try_from(p: f64) -> Result<Self> {
        Self::new(p)
    }
}
