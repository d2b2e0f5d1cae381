//! Scaled error functions and small helpers that must stay accurate far into
//! the tails, where the plain `erfc`/`exp` composition under- or overflows.

use statrs::function::erf::erfc;
use statrs::function::gamma::gamma;

/// Scaled complementary error function `erfcx(x) = exp(x^2) * erfc(x)` for x >= 0.
///
/// Below the crossover the direct product is exact enough; above it the
/// asymptotic expansion `erfcx(x) ~ 1/(x sqrt(pi)) * sum (-1)^k (2k-1)!!/(2x^2)^k`
/// is summed until the terms stop decreasing (relative error < 1e-10 for x >= 5).
pub fn erfcx(x: f64) -> f64 {
    assert!(x >= 0.0, "erfcx requires x >= 0, got {x}");
    if x < 5.0 {
        return (x * x).exp() * erfc(x);
    }
    let inv2x2 = 1.0 / (2.0 * x * x);
    let mut magnitude = 1.0_f64;
    let mut sum = 1.0_f64;
    let mut k = 0u32;
    loop {
        let next = magnitude * (2 * k + 1) as f64 * inv2x2;
        if next >= magnitude || next < 1e-18 {
            break;
        }
        sum += if k % 2 == 0 { -next } else { next };
        magnitude = next;
        k += 1;
    }
    sum / (x * std::f64::consts::PI.sqrt())
}

/// `ln(erfc(x))` for x >= 0, valid far beyond the f64 underflow of erfc itself.
pub fn ln_erfc(x: f64) -> f64 {
    -x * x + erfcx(x).ln()
}

/// `ln(r / sinh r)` for r >= 0 without overflow for large r or cancellation near 0.
pub fn ln_r_over_sinh(r: f64) -> f64 {
    assert!(r >= 0.0, "ln_r_over_sinh requires r >= 0, got {r}");
    if r < 0.25 {
        // ln(sinh r / r) = u/6 - u^2/180 + u^3/2835 - u^4/37800 + u^5/467775 - ...
        // (u = r^2); the tail beyond u^6 is below 1e-16 relative for r < 1/4
        let u = r * r;
        return -(u
            * (1.0 / 6.0
                + u * (-1.0 / 180.0
                    + u * (1.0 / 2835.0
                        + u * (-1.0 / 37800.0
                            + u * (1.0 / 467775.0 - u * 1.803667e-7))))));
    }
    // r / sinh r = 2 r e^{-r} / (1 - e^{-2r})
    r.ln() + std::f64::consts::LN_2 - r - (-(-2.0 * r).exp()).ln_1p()
}

/// `ln(sinh r)` for r > 0 without overflow for large r.
pub fn ln_sinh(r: f64) -> f64 {
    assert!(r > 0.0, "ln_sinh requires r > 0, got {r}");
    r + (-(-2.0 * r).exp()).ln_1p() - std::f64::consts::LN_2
}

/// Volume of the Euclidean ball of dimension `l` and radius `radius`.
pub fn ball_volume(l: usize, radius: f64) -> f64 {
    std::f64::consts::PI.powf(l as f64 / 2.0) * radius.powi(l as i32)
        / gamma(l as f64 / 2.0 + 1.0)
}
