//! Channel laws `P(Y = 1 | X = x)` induced by one-bit quantizers on the
//! real Gaussian channel and on Rayleigh fading with complex outputs.
//!
//! Fading laws take magnitudes only: with circularly symmetric noise and
//! fading they depend on `|x|` and `|h|` alone.

use alloc::vec::Vec;
use libm::{exp, expm1, fabs};

use crate::specfun::{marcum_q1_pair, q_func};
use crate::{Error, NoiseStd, Result};

/// A real number or one of the two infinities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtReal {
    NegInf,
    Finite(f64),
    PosInf,
}

impl ExtReal {
    fn rank(self) -> (i8, f64) {
        match self {
            ExtReal::NegInf => (-1, 0.0),
            ExtReal::Finite(v) => (0, v),
            ExtReal::PosInf => (1, 0.0),
        }
    }

    fn le(self, other: ExtReal) -> bool {
        let (a, x) = self.rank();
        let (b, y) = other.rank();
        a < b || (a == b && (a != 0 || x <= y))
    }
}

/// One-bit quantization region; the output is 1 inside it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Quantizer {
    /// `{y ≥ upsilon}` on the real line.
    Threshold { upsilon: f64 },
    /// `{lower ≤ y ≤ upper}` on the real line.
    Interval { lower: ExtReal, upper: ExtReal },
    /// `{|y| ≥ upsilon}` in the complex plane.
    Radial { upsilon: f64 },
}

impl Quantizer {
    pub fn threshold(upsilon: f64) -> Result<Self> {
        if upsilon.is_finite() {
            Ok(Quantizer::Threshold { upsilon })
        } else {
            Err(Error::Domain { what: "threshold", value: upsilon })
        }
    }

    pub fn interval(lower: ExtReal, upper: ExtReal) -> Result<Self> {
        for e in [lower, upper] {
            if let ExtReal::Finite(v) = e {
                if !v.is_finite() {
                    return Err(Error::Domain { what: "interval bound", value: v });
                }
            }
        }
        if !lower.le(upper) {
            return Err(Error::KindMismatch("interval bounds out of order"));
        }
        Ok(Quantizer::Interval { lower, upper })
    }

    pub fn radial(upsilon: f64) -> Result<Self> {
        if upsilon.is_finite() && upsilon > 0.0 {
            Ok(Quantizer::Radial { upsilon })
        } else {
            Err(Error::Domain { what: "radial threshold", value: upsilon })
        }
    }
}

/// Finite input distribution: mass points and their probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteInput {
    points: Vec<f64>,
    probs: Vec<f64>,
}

impl DiscreteInput {
    pub fn new(points: Vec<f64>, probs: Vec<f64>) -> Result<Self> {
        if points.len() != probs.len() {
            return Err(Error::LengthMismatch { expected: points.len(), found: probs.len() });
        }
        if points.is_empty() {
            return Err(Error::InvalidInput("no mass points"));
        }
        if points.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("non-finite mass point"));
        }
        if probs.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(Error::InvalidInput("probability outside [0, 1]"));
        }
        let total: f64 = probs.iter().sum();
        if fabs(total - 1.0) > 1e-12 {
            return Err(Error::InvalidInput("probabilities do not sum to one"));
        }
        Ok(Self { points, probs })
    }

    /// Equiprobable `±amplitude`.
    pub fn antipodal(amplitude: f64) -> Self {
        Self { points: alloc::vec![-amplitude, amplitude], probs: alloc::vec![0.5, 0.5] }
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.points.iter().zip(&self.probs).map(|(x, p)| x * p).sum()
    }

    pub fn second_moment(&self) -> f64 {
        self.points.iter().zip(&self.probs).map(|(x, p)| x * x * p).sum()
    }

    pub fn max_abs_point(&self) -> f64 {
        self.points.iter().fold(0.0, |m, x| m.max(fabs(*x)))
    }
}

/// Per-point probability of output 1.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryLaw {
    w: Vec<f64>,
}

impl BinaryLaw {
    pub fn new(w: Vec<f64>) -> Result<Self> {
        if w.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::InvalidInput("law entry outside [0, 1]"));
        }
        Ok(Self { w })
    }

    pub fn w(&self) -> &[f64] {
        &self.w
    }

    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }
}

/// Channel on which a law is induced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChannelKind {
    /// Real Gaussian noise; takes threshold or interval quantizers.
    Gaussian,
    /// Rayleigh fading known at the receiver, fading magnitude `h_mag`.
    Coherent { h_mag: f64 },
    /// Rayleigh fading unknown at the receiver.
    Noncoherent,
}

/// `(Q(x), Q(-x))`, each accurate in its own tail.
#[inline]
pub(crate) fn q_pair(x: f64) -> (f64, f64) {
    if x >= 0.0 {
        let t = q_func(x);
        (t, 1.0 - t)
    } else {
        let t = q_func(-x);
        (1.0 - t, t)
    }
}

/// `P(Ỹ ≥ Υ | X = x) = Q((Υ - x)/σ)`.
pub fn threshold_law(x: f64, upsilon: f64, sigma: NoiseStd) -> f64 {
    q_func((upsilon - x) / sigma.get())
}

/// `P(Υ₁ ≤ Ỹ ≤ Υ₂ | X = x)` with either bound possibly infinite.
pub fn interval_law(x: f64, lower: ExtReal, upper: ExtReal, sigma: NoiseStd) -> f64 {
    let s = sigma.get();
    match (lower, upper) {
        (_, ExtReal::NegInf) | (ExtReal::PosInf, _) => 0.0,
        (ExtReal::NegInf, ExtReal::PosInf) => 1.0,
        (ExtReal::Finite(l), ExtReal::PosInf) => q_func((l - x) / s),
        (ExtReal::NegInf, ExtReal::Finite(u)) => q_func((x - u) / s),
        (ExtReal::Finite(l), ExtReal::Finite(u)) => {
            if l > u {
                return 0.0;
            }
            // Difference of the smaller tails on whichever side x sits.
            if x <= 0.5 * (l + u) {
                (q_func((l - x) / s) - q_func((u - x) / s)).max(0.0)
            } else {
                (q_func((x - u) / s) - q_func((x - l) / s)).max(0.0)
            }
        }
    }
}

/// Radial law with the fading known at the receiver:
/// `Q₁(√2 |h||x|/σ, √2 Υ/σ)`.
pub fn coherent_radial_law(h_mag: f64, x_mag: f64, upsilon: f64, sigma: NoiseStd) -> Result<f64> {
    coherent_radial_pair(h_mag, x_mag, upsilon, sigma).map(|(q, _)| q)
}

pub(crate) fn coherent_radial_pair(h_mag: f64, x_mag: f64, upsilon: f64, sigma: NoiseStd) -> Result<(f64, f64)> {
    if !(h_mag >= 0.0) || !(x_mag >= 0.0) || !(upsilon >= 0.0) {
        return Err(Error::Domain { what: "fading magnitude", value: h_mag.min(x_mag).min(upsilon) });
    }
    let r = core::f64::consts::SQRT_2 / sigma.get();
    if x_mag == 0.0 || h_mag == 0.0 {
        let t = (upsilon / sigma.get()) * (upsilon / sigma.get());
        return Ok((exp(-t), -expm1(-t)));
    }
    marcum_q1_pair(r * h_mag * x_mag, r * upsilon)
}

/// Radial law without receiver fading knowledge: `exp(-Υ²/(|x|²+σ²))`.
pub fn noncoherent_radial_law(x_mag: f64, upsilon: f64, sigma: NoiseStd) -> f64 {
    exp(-upsilon * upsilon / (x_mag * x_mag + sigma.variance()))
}

/// Apply a quantizer to every mass point of `input`.
pub fn induce_law(input: &DiscreteInput, quantizer: &Quantizer, channel: ChannelKind, sigma: NoiseStd) -> Result<BinaryLaw> {
    let pts = input.points();
    let w: Vec<f64> = match (channel, quantizer) {
        (ChannelKind::Gaussian, Quantizer::Threshold { upsilon }) => {
            pts.iter().map(|&x| threshold_law(x, *upsilon, sigma)).collect()
        }
        (ChannelKind::Gaussian, Quantizer::Interval { lower, upper }) => {
            pts.iter().map(|&x| interval_law(x, *lower, *upper, sigma)).collect()
        }
        (ChannelKind::Coherent { h_mag }, Quantizer::Radial { upsilon }) => {
            let mut w = Vec::with_capacity(pts.len());
            for &x in pts {
                w.push(coherent_radial_law(h_mag, fabs(x), *upsilon, sigma)?);
            }
            w
        }
        (ChannelKind::Noncoherent, Quantizer::Radial { upsilon }) => {
            pts.iter().map(|&x| noncoherent_radial_law(fabs(x), *upsilon, sigma)).collect()
        }
        (ChannelKind::Gaussian, Quantizer::Radial { .. }) => {
            return Err(Error::KindMismatch("radial quantizer on a real Gaussian channel"))
        }
        (_, _) => return Err(Error::KindMismatch("fading channels take radial quantizers")),
    };
    BinaryLaw::new(w)
}
