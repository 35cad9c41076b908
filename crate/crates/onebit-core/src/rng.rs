//! Counter-based random numbers (Philox4x64-10) and an exact binomial
//! sampler.
//!
//! A stream is addressed by `(key, index)`, so any partition of the trial
//! range across workers draws exactly the same numbers.

use libm::{exp, floor, lgamma, log, log1p, sqrt, fabs};

const M0: u64 = 0xD2E7_470E_E14C_6C93;
const M1: u64 = 0xCA5A_8263_9512_1157;
const W0: u64 = 0x9E37_79B9_7F4A_7C15;
const W1: u64 = 0xBB67_AE85_84CA_A73B;

#[inline]
fn mulhilo(a: u64, b: u64) -> (u64, u64) {
    let p = (a as u128) * (b as u128);
    ((p >> 64) as u64, p as u64)
}

/// Philox4x64 with ten rounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Philox4x64 {
    key: [u64; 2],
}

impl Philox4x64 {
    pub const fn new(key: [u64; 2]) -> Self {
        Self { key }
    }

    /// Encrypt one counter block.
    pub fn block(&self, ctr: [u64; 4]) -> [u64; 4] {
        let mut x = ctr;
        let mut k = self.key;
        for round in 0..10 {
            if round > 0 {
                k[0] = k[0].wrapping_add(W0);
                k[1] = k[1].wrapping_add(W1);
            }
            let (hi0, lo0) = mulhilo(M0, x[0]);
            let (hi1, lo1) = mulhilo(M1, x[2]);
            x = [hi1 ^ x[1] ^ k[0], lo1, hi0 ^ x[3] ^ k[1], lo0];
        }
        x
    }
}

/// Map 64 random bits to the open interval (0, 1) on a grid of step 2⁻⁵².
#[inline]
pub fn open_unit(bits: u64) -> f64 {
    ((bits >> 12) as f64 + 0.5) * (1.0 / 4_503_599_627_370_496.0)
}

/// Uniform draws belonging to one logical index; counter words are
/// `(index, block, 0, 0)`.
#[derive(Debug, Clone)]
pub struct Substream {
    gen: Philox4x64,
    index: u64,
    block: u64,
    buf: [u64; 4],
    used: usize,
}

impl Substream {
    pub fn new(gen: Philox4x64, index: u64) -> Self {
        Self { gen, index, block: 0, buf: [0; 4], used: 4 }
    }

    pub fn next_u64(&mut self) -> u64 {
        if self.used == 4 {
            self.buf = self.gen.block([self.index, self.block, 0, 0]);
            self.block += 1;
            self.used = 0;
        }
        let v = self.buf[self.used];
        self.used += 1;
        v
    }

    /// Uniform on (0, 1).
    pub fn uniform(&mut self) -> f64 {
        open_unit(self.next_u64())
    }
}

/// Exact draw from Binomial(`n`, `p`).
///
/// Inversion when the mean is below 10, otherwise Hörmann's transformed
/// rejection with squeeze (BTRS).
pub fn binomial(n: u64, p: f64, rng: &mut Substream) -> u64 {
    if n == 0 || p <= 0.0 {
        return 0;
    }
    if p >= 1.0 {
        return n;
    }
    if p > 0.5 {
        return n - binomial(n, 1.0 - p, rng);
    }
    if (n as f64) * p < 10.0 {
        binomial_inversion(n, p, rng)
    } else {
        binomial_btrs(n, p, rng)
    }
}

fn binomial_inversion(n: u64, p: f64, rng: &mut Substream) -> u64 {
    let nf = n as f64;
    let odds = p / (1.0 - p);
    let a = (nf + 1.0) * odds;
    let r0 = exp(nf * log1p(-p));
    'restart: loop {
        let mut u = rng.uniform();
        let mut r = r0;
        let mut k = 0u64;
        loop {
            if u <= r {
                return k;
            }
            u -= r;
            k += 1;
            if k > n || k > 110 {
                continue 'restart;
            }
            r *= a / k as f64 - odds;
        }
    }
}

fn binomial_btrs(n: u64, p: f64, rng: &mut Substream) -> u64 {
    let nf = n as f64;
    let q = 1.0 - p;
    let spq = sqrt(nf * p * q);
    let b = 1.15 + 2.53 * spq;
    let a = -0.0873 + 0.0248 * b + 0.01 * p;
    let c = nf * p + 0.5;
    let v_r = 0.92 - 4.2 / b;
    let alpha = (2.83 + 5.1 / b) * spq;
    let lpq = log(p / q);
    let m = floor((nf + 1.0) * p);
    let h = lgamma(m + 1.0) + lgamma(nf - m + 1.0);
    loop {
        let u = rng.uniform() - 0.5;
        let v = rng.uniform();
        let us = 0.5 - fabs(u);
        let k = floor((2.0 * a / us + b) * u + c);
        if k < 0.0 || k > nf {
            continue;
        }
        if us >= 0.07 && v <= v_r {
            return k as u64;
        }
        let lv = log(v * alpha / (a / (us * us) + b));
        if lv <= h - lgamma(k + 1.0) - lgamma(nf - k + 1.0) + (k - m) * lpq {
            return k as u64;
        }
    }
}
