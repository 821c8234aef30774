//! Fixed inputs shared by the benchmarks.

use shiftker_core::numerics::c;
use shiftker_core::{ComplexValue, KernelParams};

/// Named kernel points: one per closed-form branch plus a generic point
/// with no closed form.
pub fn kernel_cases() -> Vec<(&'static str, KernelParams)> {
    let zero = c(0.0, 0.0);
    let point = |n, k0, sigma: ComplexValue, sigma_hat: ComplexValue| {
        KernelParams::new(1.0, n, k0, sigma, sigma_hat).expect("valid benchmark point")
    };
    vec![
        ("even-sigma-hat-zero", point(2, 0, c(0.0, 0.3), zero)),
        ("even-sigma-zero", point(2, 0, zero, c(0.0, 0.3))),
        ("odd-sigma-zero", point(3, 0, zero, c(0.0, 0.4))),
        ("odd-sigma-hat-zero", point(3, 0, c(0.0, 0.4), zero)),
        ("generic", point(4, 1, c(0.0, 0.5), c(0.0, 0.25))),
    ]
}

/// Bessel orders: real, near-integer, pure imaginary and general complex.
pub fn bessel_orders() -> Vec<(&'static str, ComplexValue)> {
    vec![
        ("real", c(2.6, 0.0)),
        ("near-integer", c(1.02, 0.0)),
        ("imaginary", c(0.0, 3.0)),
        ("complex", c(0.3, 0.2)),
    ]
}

/// Arguments either side of the small-argument switch of `bessel_k`.
pub const BESSEL_ARGS: [f64; 3] = [0.5, 1.5, 6.0];
