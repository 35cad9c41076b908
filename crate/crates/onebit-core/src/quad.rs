//! Quadrature rules: adaptive Gauss–Kronrod (7/15) on finite intervals and
//! Gauss–Laguerre rules for expectations under a unit-mean exponential.

use alloc::vec::Vec;
use libm::{exp, fabs, log};

use crate::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
// Gauss weights at XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Value and error estimate of a quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
}

fn kronrod15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kron * h, fabs((kron - gauss) * h))
}

/// Adaptive Gauss–Kronrod on `[a, b]`.
///
/// Bisects the worst interval until the summed error estimate is below
/// `max(abs_tol, rel_tol·|value|)`; fails after `max_intervals` pieces.
pub fn gauss_kronrod<F: FnMut(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_intervals: usize,
) -> Result<QuadResult> {
    gauss_kronrod_breaks(f, &[a, b], abs_tol, rel_tol, max_intervals)
}

/// Like [`gauss_kronrod`] but starts from the pieces between consecutive
/// `breaks`, which must be nondecreasing.
pub fn gauss_kronrod_breaks<F: FnMut(f64) -> f64>(
    mut f: F,
    breaks: &[f64],
    abs_tol: f64,
    rel_tol: f64,
    max_intervals: usize,
) -> Result<QuadResult> {
    // (left, right, value, error)
    let mut pieces: Vec<(f64, f64, f64, f64)> = Vec::new();
    for w in breaks.windows(2) {
        if w[1] > w[0] {
            let (v, e) = kronrod15(&mut f, w[0], w[1]);
            pieces.push((w[0], w[1], v, e));
        }
    }
    loop {
        let value: f64 = pieces.iter().map(|p| p.2).sum();
        let error: f64 = pieces.iter().map(|p| p.3).sum();
        if !value.is_finite() {
            return Err(Error::Quadrature { estimate: value, error });
        }
        if error <= abs_tol.max(rel_tol * fabs(value)) {
            return Ok(QuadResult { value, error });
        }
        if pieces.len() >= max_intervals {
            return Err(Error::Quadrature { estimate: value, error });
        }
        let worst = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let (l, r, _, _) = pieces[worst];
        let m = 0.5 * (l + r);
        if !(m > l && m < r) {
            // Interval exhausted at machine precision.
            return Ok(QuadResult { value, error });
        }
        let (v1, e1) = kronrod15(&mut f, l, m);
        let (v2, e2) = kronrod15(&mut f, m, r);
        pieces[worst] = (l, m, v1, e1);
        pieces.push((m, r, v2, e2));
    }
}

/// Nodes and weights of the `n`-point Gauss–Laguerre rule for `∫₀^∞ f(t)e^{-t}dt`.
pub fn gauss_laguerre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = alloc::vec![0.0; n];
    let mut w = alloc::vec![0.0; n];
    let nf = n as f64;
    let mut z = 0.0;
    for i in 0..n {
        z = match i {
            0 => 3.0 / (1.0 + 2.4 * nf),
            1 => z + 15.0 / (1.0 + 2.5 * nf),
            _ => {
                let ai = (i - 1) as f64;
                z + (1.0 + 2.55 * ai) / (1.9 * ai) * (z - x[i - 2])
            }
        };
        let mut p2 = 0.0;
        let mut pp = 1.0;
        for _ in 0..100 {
            let mut p1 = 1.0;
            p2 = 0.0;
            for j in 1..=n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = ((2.0 * jf - 1.0 - z) * p2 - (jf - 1.0) * p3) / jf;
            }
            pp = (nf * p1 - nf * p2) / z;
            let z1 = z;
            z = z1 - p1 / pp;
            if fabs(z - z1) <= 1e-15 * fabs(z) {
                break;
            }
        }
        x[i] = z;
        let prod = pp * nf * p2;
        w[i] = if prod.is_finite() {
            -1.0 / prod
        } else {
            exp(-(log(fabs(pp)) + log(nf) + log(fabs(p2))))
        };
    }
    (x, w)
}
