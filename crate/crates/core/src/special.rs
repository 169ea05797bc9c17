//! Double factorials and the standard normal distribution.

use statrs::function::erf::erfc;

use crate::error::{invalid, Error, Result};

/// (2k-1)!! = (2k-1)(2k-3)...3*1, exactly.
pub fn double_factorial_odd(k: u32) -> Result<u128> {
    if k == 0 {
        return Err(invalid("k", "must be at least 1"));
    }
    let mut acc: u128 = 1;
    for j in 1..k {
        let factor = 2 * j as u128 + 1;
        acc = acc.checked_mul(factor).ok_or(Error::Capacity { k })?;
    }
    Ok(acc)
}

/// ln (2k-1)!! = ln (2k)! - k ln 2 - ln k!, valid for any k >= 1.
pub fn ln_double_factorial_odd(k: u32) -> f64 {
    use statrs::function::gamma::ln_gamma;
    let k = k as f64;
    ln_gamma(2.0 * k + 1.0) - k * std::f64::consts::LN_2 - ln_gamma(k + 1.0)
}

/// (2k-1)!! as a float; exact conversion for small k, log-gamma beyond u128.
pub(crate) fn double_factorial_odd_f64(k: u32) -> f64 {
    match double_factorial_odd(k) {
        Ok(v) => v as f64,
        Err(_) => ln_double_factorial_odd(k).exp(),
    }
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// Standard normal survival function, accurate in the upper tail.
pub fn normal_sf(x: f64) -> f64 {
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}

fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// Inverse standard normal CDF.
///
/// Acklam's rational approximation (relative error about 1e-9) refined by one
/// Halley step against the erfc-based CDF.
pub fn inverse_normal_cdf(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(invalid("p", format!("must lie in (0, 1), got {p}")));
    }
    if p == 0.5 {
        return Ok(0.0);
    }
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    const P_LOW: f64 = 0.024_25;

    let tail = |q: f64| {
        let r = (-2.0 * q.ln()).sqrt();
        (((((C[0] * r + C[1]) * r + C[2]) * r + C[3]) * r + C[4]) * r + C[5])
            / ((((D[0] * r + D[1]) * r + D[2]) * r + D[3]) * r + 1.0)
    };
    let x = if p < P_LOW {
        tail(p)
    } else if p > 1.0 - P_LOW {
        -tail(1.0 - p)
    } else {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    };

    // Halley step; the residual is taken on the smaller tail for accuracy.
    let e = if p < 0.5 {
        normal_cdf(x) - p
    } else {
        (1.0 - p) - normal_sf(x)
    };
    let u = e / normal_pdf(x);
    Ok(x - u / (1.0 + 0.5 * x * u))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn double_factorial_small_values() {
        assert_eq!(double_factorial_odd(1).unwrap(), 1);
        assert_eq!(double_factorial_odd(2).unwrap(), 3);
        assert_eq!(double_factorial_odd(3).unwrap(), 15);
        assert_eq!(double_factorial_odd(10).unwrap(), 654_729_075);
        assert!(double_factorial_odd(0).is_err());
    }

    #[test]
    fn double_factorial_overflow_is_detected() {
        let mut last_ok = 0;
        for k in 1..200 {
            match double_factorial_odd(k) {
                Ok(_) => last_ok = k,
                Err(e) => {
                    assert_eq!(e, Error::Capacity { k });
                    break;
                }
            }
        }
        // 55!! < 2^128 < 57!!
        assert_eq!(last_ok, 28);
    }

    #[test]
    fn double_factorial_recurrence_and_log() {
        for k in 1..28 {
            let a = double_factorial_odd(k).unwrap();
            let b = double_factorial_odd(k + 1).unwrap();
            assert_eq!(b, (2 * k as u128 + 1) * a);
            let rel = (ln_double_factorial_odd(k) - (a as f64).ln()).abs() / (a as f64).ln().max(1.0);
            assert!(rel < 1e-12, "k={k}");
        }
    }

    // Reference quantiles computed with mpmath at 30 digits.
    const QUANTILES: [(f64, f64); 7] = [
        (0.975, 1.959_963_984_540_054),
        (0.5, 0.0),
        (0.9, 1.281_551_565_544_600_5),
        (0.01, -2.326_347_874_040_841),
        (1e-6, -4.753_424_308_822_899),
        (1e-12, -7.034_483_825_301_131),
        // quantile of the double nearest to 1 - 1e-12
        (0.999_999_999_999, 7.034_486_910_047_835),
    ];

    #[test]
    fn inverse_normal_matches_reference_quantiles() {
        for (p, q) in QUANTILES {
            let got = inverse_normal_cdf(p).unwrap();
            assert!((got - q).abs() < 1e-9, "p={p}: {got} vs {q}");
        }
    }

    #[test]
    fn inverse_normal_symmetry_and_domain() {
        for &p in &[1e-10, 0.001, 0.2, 0.3, 0.45] {
            let a = inverse_normal_cdf(p).unwrap();
            let b = inverse_normal_cdf(1.0 - p).unwrap();
            // 1 - p carries a relative representation error of ~1e-17 / p.
            assert!((a + b).abs() < 1e-6, "p={p}");
        }
        assert!(inverse_normal_cdf(0.0).is_err());
        assert!(inverse_normal_cdf(1.0).is_err());
        assert!(inverse_normal_cdf(f64::NAN).is_err());
    }
}
