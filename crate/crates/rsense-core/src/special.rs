//! Scaled complementary error function.
//!
//! `erfcx(x) = exp(x^2) erfc(x)` stays O(1/x) for large x, while the naive
//! product overflows once x^2 exceeds ~709. The dipolar interaction kernel
//! needs it for arguments up to the quadrature cutoff, which can be large for
//! narrow traps.

/// erfcx(x) = exp(x^2) erfc(x).
///
/// For x up to 26 the direct product is representable (x^2 < 709 and erfc(x)
/// is still normal), so we lean on libm's erfc. Beyond that the asymptotic
/// series in 1/x^2 converges to machine precision.
pub fn erfcx(x: f64) -> f64 {
    if x < 0.0 {
        // erfc(-x) = 2 - erfc(x)
        return 2.0 * (x * x).exp() - erfcx(-x);
    }
    if x >= 26.0 {
        return erfcx_asymptotic(x);
    }
    (x * x).exp() * libm::erfc(x)
}

/// erfcx(x) ~ 1/(x sqrt(pi)) * sum_n (-1)^n (2n-1)!! / (2x^2)^n, valid for large x.
fn erfcx_asymptotic(x: f64) -> f64 {
    let inv2x2 = 1.0 / (2.0 * x * x);
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 1..=9u32 {
        term *= -(2.0 * f64::from(n) - 1.0) * inv2x2;
        sum += term;
    }
    sum / (x * std::f64::consts::PI.sqrt())
}
