//! Scalar numerics shared across the crate: log-factorials via the log-gamma
//! function and the standard normal CDF / quantile.
//!
//! The CDF is computed through `libm`'s `erfc` (no cancellation for large
//! arguments). The quantile is Wichura's PPND16 rational approximation,
//! accurate to well below 1e-12 in absolute terms over (0, 1); the unit tests
//! verify the round trip `cdf(quantile(p)) = p` against the independent
//! `erfc` route.

// The quantile coefficients below are the published 16-digit values.
#![allow(clippy::excessive_precision)]

use crate::error::{Error, Result};

/// ln(n!) computed via the log-gamma function; exact enough for counts up to
/// any realistic exceedance number (never computes integer factorials).
pub fn ln_factorial(n: u64) -> f64 {
    libm::lgamma_r(n as f64 + 1.0).0
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma_r(x).0
}

/// Standard normal CDF Φ(x) = erfc(-x/√2) / 2.
pub fn std_normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// Upper tail 1 - Φ(x), computed without cancellation.
pub fn std_normal_sf(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

/// Standard normal quantile Φ⁻¹(p) for p in (0, 1) (Wichura's PPND16).
pub fn std_normal_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidParameter {
            reason: format!("normal quantile requires p in (0,1), got {p}"),
        });
    }
    let q = p - 0.5;
    if q.abs() <= 0.425 {
        let r = 0.180625 - q * q;
        return Ok(q * rational(r, &CENTRAL_NUM, &CENTRAL_DEN));
    }
    let r = if q < 0.0 { p } else { 1.0 - p };
    let r = (-r.ln()).sqrt();
    let val = if r <= 5.0 {
        let r = r - 1.6;
        rational(r, &TAIL_NUM, &TAIL_DEN)
    } else {
        let r = r - 5.0;
        rational(r, &FAR_TAIL_NUM, &FAR_TAIL_DEN)
    };
    Ok(if q < 0.0 { -val } else { val })
}

fn rational(r: f64, num: &[f64; 8], den: &[f64; 8]) -> f64 {
    let mut n = num[7];
    let mut d = den[7];
    for i in (0..7).rev() {
        n = n * r + num[i];
        d = d * r + den[i];
    }
    n / d
}

// Coefficients from algorithm PPND16 (AS 241), |q| <= 0.425.
const CENTRAL_NUM: [f64; 8] = [
    3.387_132_872_796_366_608e0,
    1.331_416_678_917_843_774_5e2,
    1.971_590_950_306_551_442_7e3,
    1.373_169_376_550_946_112_5e4,
    4.592_195_393_154_987_145_7e4,
    6.726_577_092_700_870_085_3e4,
    3.343_057_558_358_812_810_5e4,
    2.509_080_928_730_122_672_7e3,
];
const CENTRAL_DEN: [f64; 8] = [
    1.0,
    4.231_333_070_160_091_125_2e1,
    6.871_870_074_920_579_083e2,
    5.394_196_021_424_751_107_7e3,
    2.121_379_430_158_659_586_7e4,
    3.930_789_580_009_271_061e4,
    2.872_908_573_572_194_267_4e4,
    5.226_495_278_852_854_561e3,
];
// 0.425 < |q|, r = sqrt(-ln(min(p, 1-p))) <= 5.
const TAIL_NUM: [f64; 8] = [
    1.423_437_110_749_683_577_34e0,
    4.630_337_846_156_545_295_9e0,
    5.769_497_221_460_691_405_5e0,
    3.647_848_324_763_204_605_04e0,
    1.270_458_252_452_368_382_58e0,
    2.417_807_251_774_506_117_7e-1,
    2.272_384_498_926_918_458_33e-2,
    7.745_450_142_783_414_076_4e-4,
];
const TAIL_DEN: [f64; 8] = [
    1.0,
    2.053_191_626_637_758_821_87e0,
    1.676_384_830_183_803_849_4e0,
    6.897_673_349_851_000_045_5e-1,
    1.481_039_764_274_800_745_9e-1,
    1.519_866_656_361_645_719_66e-2,
    5.475_938_084_995_344_946e-4,
    1.050_750_071_644_416_843_24e-9,
];
// r > 5 (extreme tails).
const FAR_TAIL_NUM: [f64; 8] = [
    6.657_904_643_501_103_777_2e0,
    5.463_784_911_164_114_369_9e0,
    1.784_826_539_917_291_335_8e0,
    2.965_605_718_285_048_912_3e-1,
    2.653_218_952_657_612_309_3e-2,
    1.242_660_947_388_078_438_6e-3,
    2.711_555_568_743_487_578_15e-5,
    2.010_334_399_292_288_132_65e-7,
];
const FAR_TAIL_DEN: [f64; 8] = [
    1.0,
    5.998_322_065_558_879_376_9e-1,
    1.369_298_809_227_358_053_1e-1,
    1.487_536_129_085_061_485_25e-2,
    7.868_691_311_456_132_591e-4,
    1.846_318_317_510_054_681_8e-5,
    1.421_511_758_316_445_888_7e-7,
    2.044_263_103_389_939_785_64e-15,
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_factorial_small_values_exact() {
        let direct: f64 = (2..=20u64).map(|i| (i as f64).ln()).sum();
        assert!((ln_factorial(20) - direct).abs() < 1e-10);
        assert_eq!(ln_factorial(0), 0.0);
        assert_eq!(ln_factorial(1), 0.0);
    }

    #[test]
    fn cdf_reference_values() {
        // Φ(0) = 1/2, Φ(1.96) ≈ 0.975 (classical table value).
        assert!((std_normal_cdf(0.0) - 0.5).abs() < 1e-16);
        assert!((std_normal_cdf(1.959_963_984_540_054) - 0.975).abs() < 1e-12);
        assert!((std_normal_cdf(-8.0) - 6.220_960_574_271_78e-16).abs() < 1e-28);
    }

    #[test]
    fn quantile_round_trip_against_erfc_route() {
        // The quantile (rational approximation) and the CDF (erfc) are
        // independent routes; their composition must be the identity.
        let mut p = 1e-12;
        while p < 1.0 {
            let x = std_normal_quantile(p).unwrap();
            let back = std_normal_cdf(x);
            assert!(
                (back - p).abs() < 1e-12,
                "p = {p}: quantile {x}, round trip {back}"
            );
            p *= 1.37;
        }
        for &p in &[0.2, 0.5, 0.8, 0.975, 1.0 - 1e-9, 1.0 - 1e-12] {
            let x = std_normal_quantile(p).unwrap();
            assert!((std_normal_cdf(x) - p).abs() < 1e-12);
        }
    }

    #[test]
    fn quantile_symmetry() {
        // dyadic p keeps 1 - p exactly representable, so the symmetry must be
        // exact up to the approximation's own accuracy
        for &p in &[2f64.powi(-30), 2f64.powi(-10), 0.25, 0.375, 0.4921875] {
            let lo = std_normal_quantile(p).unwrap();
            let hi = std_normal_quantile(1.0 - p).unwrap();
            assert!(
                (lo + hi).abs() < 1e-14 * lo.abs().max(1.0),
                "p = {p}: {lo} vs {hi}"
            );
        }
    }

    #[test]
    fn quantile_rejects_boundary() {
        assert!(std_normal_quantile(0.0).is_err());
        assert!(std_normal_quantile(1.0).is_err());
        assert!(std_normal_quantile(f64::NAN).is_err());
    }
}
