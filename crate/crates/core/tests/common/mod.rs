//! Independent reference values: closed forms, brute-force scans and plain
//! bisection, written without the library's derivative machinery.
#![allow(dead_code)]

use std::f64::consts::PI;

use memchain::{ConstitutiveCurve, OperatingRange};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SEED: u64 = 0x6d65_6d63_6861_696e;

pub fn cubic() -> ConstitutiveCurve {
    ConstitutiveCurve::polynomial(vec![0.0, 1.0, 0.0, 1.0 / 3.0], OperatingRange::default()).unwrap()
}

pub fn tanh() -> ConstitutiveCurve {
    ConstitutiveCurve::tanh_scaled(1.0, 1.0, OperatingRange::default()).unwrap()
}

pub fn degenerate() -> ConstitutiveCurve {
    ConstitutiveCurve::polynomial(vec![0.0, 0.0, 0.5, -1.0 / 6.0], OperatingRange::default()).unwrap()
}

pub fn sech2(x: f64) -> f64 {
    let c = x.cosh();
    1.0 / (c * c)
}

/// Depth-1 ordinate of the cubic under `1 - cos t`.
pub fn cubic_phi(t: f64) -> f64 {
    let x = 1.0 - t.cos();
    (1.0 + x * x) * t.sin()
}

pub fn tanh_phi(t: f64) -> f64 {
    sech2(1.0 - t.cos()) * t.sin()
}

/// `d2/dx2 tanh` at 1.
pub fn tanh_f2_at_one() -> f64 {
    -2.0 * sech2(1.0) * 1.0f64.tanh()
}

/// Arg-max of `g` over `n` uniform points in `[a, b]`.
pub fn scan_argmax(g: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let mut best = (a, f64::NEG_INFINITY);
    for i in 0..=n {
        let t = a + (b - a) * i as f64 / n as f64;
        let v = g(t);
        if v > best.1 {
            best = (t, v);
        }
    }
    best.0
}

pub fn bisect(g: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut glo = g(lo);
    assert!(glo * g(hi) <= 0.0, "no bracket");
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let gm = g(mid);
        if gm == 0.0 {
            return mid;
        }
        if (gm > 0.0) == (glo > 0.0) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Ascending coefficients with a zero constant term, a positive slope at
/// the origin and positive higher terms: strictly increasing and nonlinear
/// on `[0, 2]`.
pub fn random_monotone_polys(count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let degree = if i % 2 == 0 { 3 } else { 5 };
            let mut c = vec![0.0, rng.random_range(0.1..2.0)];
            for _ in 2..=degree {
                c.push(rng.random_range(0.05..1.0));
            }
            c
        })
        .collect()
}

pub fn poly(c: &[f64]) -> ConstitutiveCurve {
    ConstitutiveCurve::polynomial(c.to_vec(), OperatingRange::default()).unwrap()
}

/// `k`-th derivative of an ascending-coefficient polynomial, by hand.
pub fn poly_derivative(c: &[f64], x: f64, k: usize) -> f64 {
    let mut acc = 0.0;
    for (i, &ci) in c.iter().enumerate().skip(k) {
        let falling: f64 = (0..k).map(|j| (i - j) as f64).product();
        acc += ci * falling * x.powi((i - k) as i32);
    }
    acc
}

pub fn uniform_t(n: usize) -> Vec<f64> {
    (0..=n).map(|i| 2.0 * PI * i as f64 / n as f64).collect()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}
