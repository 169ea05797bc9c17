//! Exact norms of reference distributions: intrinsic moment norm and its
//! lower counterpart, the optimal variance proxy of a Bernoulli, psi2 and w2.

use serde::{Deserialize, Serialize};

use crate::dist::DistributionSpec;
use crate::error::{invalid, Error, Result};
use crate::special::ln_double_factorial_odd;

/// Relative slack under which two candidate values count as tied.
const TIE_TOL: f64 = 1e-12;

/// A norm obtained as an extremum over an index sequence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormValue {
    pub value: f64,
    /// Index at which the extremum is reached (smallest among ties).
    pub k_star: u32,
    /// False when the extremum sits at the search cap and may lie beyond it.
    pub attained: bool,
    pub kappa_cap: u32,
}

#[derive(Clone, Copy, PartialEq)]
enum Extremum {
    Max,
    Min,
}

/// Extremum of `exp(log_terms(k))` over k = first..=cap with the tie and
/// attainment conventions shared by all oracle norms.
fn extremum<F>(first: u32, cap: u32, which: Extremum, mut log_term: F) -> Result<NormValue>
where
    F: FnMut(u32) -> Result<f64>,
{
    if cap < first {
        return Err(invalid("cap", format!("must be at least {first}")));
    }
    let mut best = log_term(first)?;
    let mut k_star = first;
    for k in first + 1..=cap {
        let v = log_term(k)?;
        let better = match which {
            Extremum::Max => v > best + TIE_TOL,
            Extremum::Min => v < best - TIE_TOL,
        };
        if better {
            best = v;
            k_star = k;
        }
    }
    Ok(NormValue {
        value: best.exp(),
        k_star,
        attained: !(k_star == cap && cap > first),
        kappa_cap: cap,
    })
}

fn ln_normalized_moment(dist: &DistributionSpec, k: u32) -> Result<f64> {
    Ok((dist.ln_even_moment(k)? - ln_double_factorial_odd(k)) / (2.0 * k as f64))
}

/// max over k <= cap of [E X^{2k} / (2k-1)!!]^{1/(2k)} for the centered variable.
pub fn exact_intrinsic_norm(dist: &DistributionSpec, kappa_cap: u32) -> Result<NormValue> {
    extremum(1, kappa_cap, Extremum::Max, |k| ln_normalized_moment(dist, k))
}

/// The minimum of the same sequence (zero in the limit for bounded variables).
pub fn exact_lower_intrinsic_norm(dist: &DistributionSpec, kappa_cap: u32) -> Result<NormValue> {
    extremum(1, kappa_cap, Extremum::Min, |k| ln_normalized_moment(dist, k))
}

/// Optimal variance proxy of a centered Bernoulli(mu): (1-2mu) / (2 ln((1-mu)/mu)).
pub fn bernoulli_opt_variance_proxy(mu: f64) -> Result<f64> {
    if !(mu > 0.0 && mu < 1.0) {
        return Err(invalid("mu", format!("must lie in (0, 1), got {mu}")));
    }
    if (mu - 0.5).abs() < 1e-9 {
        return Ok(0.25);
    }
    Ok((1.0 - 2.0 * mu) / (2.0 * ((1.0 - mu) / mu).ln()))
}

/// max over integer p in 2..=p_cap of p^{-1/2} (E|X|^p)^{1/p}.
pub fn psi2_norm(dist: &DistributionSpec, p_cap: u32) -> Result<NormValue> {
    extremum(2, p_cap, Extremum::Max, |p| {
        let p = p as f64;
        Ok(dist.ln_abs_moment(p)? / p - 0.5 * p.ln())
    })
}

/// inf{c > 0 : E exp(X^2/c^2) <= 2}, by bisection to relative tolerance `tol`.
pub fn w2_norm(dist: &DistributionSpec, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(invalid("tol", "must be positive"));
    }
    let f = |c: f64| dist.square_exp_moment(c);
    let sd = dist.variance()?.sqrt();
    let mut hi = 2.0 * sd;
    let mut tries = 0;
    while f(hi)? > 2.0 {
        hi *= 2.0;
        tries += 1;
        if tries > 200 {
            return Err(Error::Bracketing(format!(
                "E exp(X^2/c^2) exceeds 2 for all c up to {hi:e}"
            )));
        }
    }
    let mut lo = 0.5 * hi;
    tries = 0;
    while f(lo)? <= 2.0 {
        lo *= 0.5;
        tries += 1;
        if tries > 200 {
            return Err(Error::Bracketing(format!(
                "E exp(X^2/c^2) stays below 2 down to {lo:e}"
            )));
        }
    }
    let (mut f_lo, mut f_hi) = (f(lo)?, f(hi)?);
    while hi - lo > tol * hi {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid)?;
        if !(fm <= f_lo && fm >= f_hi) {
            return Err(Error::NonMonotone { c: mid });
        }
        if fm > 2.0 {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
            f_hi = fm;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Half-lengths of (1 - delta) confidence intervals for the mean of one
/// observation, by the variance proxy each norm certifies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfLengthRow {
    pub sigma_opt: f64,
    pub intrinsic: f64,
    pub psi2: f64,
    pub w2: f64,
    pub std_dev: f64,
}

/// Search caps used when a table compares norms.
const TABLE_KAPPA_CAP: u32 = 20;
const TABLE_P_CAP: u32 = 200;
const TABLE_W2_TOL: f64 = 1e-10;

pub fn ci_half_length_table(dist: &DistributionSpec, delta: f64) -> Result<HalfLengthRow> {
    let DistributionSpec::BernoulliCentered { mu } = *dist else {
        return Err(Error::UnsupportedDistribution {
            operation: "ci_half_length_table",
            dist: format!("{dist:?}"),
        });
    };
    if !(delta > 0.0 && delta < 1.0) {
        return Err(invalid("delta", format!("must lie in (0, 1), got {delta}")));
    }
    let scale = (2.0 * (2.0 / delta).ln()).sqrt();
    Ok(HalfLengthRow {
        sigma_opt: scale * bernoulli_opt_variance_proxy(mu)?.sqrt(),
        intrinsic: scale * (17.0f64 / 12.0).sqrt() * exact_intrinsic_norm(dist, TABLE_KAPPA_CAP)?.value,
        psi2: scale * (10.0 * std::f64::consts::E).sqrt() * psi2_norm(dist, TABLE_P_CAP)?.value,
        w2: scale * 2.5f64.sqrt() * w2_norm(dist, TABLE_W2_TOL)?,
        std_dev: scale * dist.variance()?.sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gauss() -> DistributionSpec {
        DistributionSpec::gaussian(0.0, 1.0).unwrap()
    }

    #[test]
    fn gaussian_sequence_is_flat() {
        let g = exact_intrinsic_norm(&gauss(), 10).unwrap();
        assert!((g.value - 1.0).abs() < 1e-12);
        assert_eq!(g.k_star, 1);
        assert!(g.attained);
        let l = exact_lower_intrinsic_norm(&gauss(), 10).unwrap();
        assert!((l.value - 1.0).abs() < 1e-12);
        let g = exact_intrinsic_norm(&DistributionSpec::gaussian(3.0, 2.5).unwrap(), 10).unwrap();
        assert!((g.value - 2.5).abs() < 1e-12);
    }

    #[test]
    fn uniform_and_bernoulli_values() {
        let u = exact_intrinsic_norm(&DistributionSpec::uniform_sym(1.0).unwrap(), 10).unwrap();
        assert!((u.value - 3f64.sqrt().recip()).abs() < 1e-14);
        assert_eq!(u.k_star, 1);
        let b = exact_intrinsic_norm(&DistributionSpec::bernoulli_centered(0.5).unwrap(), 10).unwrap();
        assert!((b.value - 0.5).abs() < 1e-14);
        assert_eq!(b.k_star, 1);
    }

    #[test]
    fn bounded_lower_norm_shrinks_with_cap() {
        let d = DistributionSpec::uniform_sym(1.0).unwrap();
        let a = exact_lower_intrinsic_norm(&d, 10).unwrap();
        let b = exact_lower_intrinsic_norm(&d, 50).unwrap();
        assert!(b.value < a.value);
        assert_eq!(b.k_star, 50);
    }

    #[test]
    fn mixture_lower_norm_and_unattained_upper() {
        let d = DistributionSpec::gaussian_mixture(0.7, 2.0, 1.0).unwrap();
        let low = exact_lower_intrinsic_norm(&d, 10).unwrap();
        assert!(low.value >= 1.4);
        assert_eq!(low.k_star, 1);
        assert!((low.value - 3.1f64.sqrt()).abs() < 1e-12);
        let up = exact_intrinsic_norm(&d, 10).unwrap();
        assert!(!up.attained);
        assert_eq!(up.k_star, 10);
        assert!(up.value < 2.0);
    }

    #[test]
    fn bernoulli_proxy() {
        assert_eq!(bernoulli_opt_variance_proxy(0.5).unwrap(), 0.25);
        let v = bernoulli_opt_variance_proxy(0.3).unwrap();
        assert!((v - 0.236_044_500_228_765_7).abs() < 1e-15);
        let a = bernoulli_opt_variance_proxy(0.2).unwrap();
        let b = bernoulli_opt_variance_proxy(0.8).unwrap();
        assert!((a - b).abs() < 1e-15);
        assert!(bernoulli_opt_variance_proxy(0.0).is_err());
    }

    #[test]
    fn psi2_reference_values() {
        let g = psi2_norm(&gauss(), 500).unwrap();
        assert!((g.value - 0.5f64.sqrt()).abs() < 1e-10);
        assert_eq!(g.k_star, 2);
        let u = psi2_norm(&DistributionSpec::uniform_sym(1.0).unwrap(), 500).unwrap();
        assert!((u.value - 0.4082).abs() < 5e-5);
        let b = psi2_norm(&DistributionSpec::bernoulli_centered(0.3).unwrap(), 500).unwrap();
        assert!((b.value - 0.3240).abs() < 5e-5);
    }

    #[test]
    fn w2_reference_values() {
        let g = w2_norm(&gauss(), 1e-10).unwrap();
        assert!((g - (8.0f64 / 3.0).sqrt()).abs() < 1e-8);
        let b = w2_norm(&DistributionSpec::bernoulli_centered(0.5).unwrap(), 1e-10).unwrap();
        assert!((b - 0.5 / 2f64.ln().sqrt()).abs() < 1e-8);
        // Rademacher: exp(1/c^2) = 2 at c = 1/sqrt(ln 2).
        let r = w2_norm(&DistributionSpec::rademacher_scaled(1.0).unwrap(), 1e-10).unwrap();
        assert!((r - 2f64.ln().sqrt().recip()).abs() < 1e-8);
    }

    #[test]
    fn half_length_table() {
        let d = DistributionSpec::bernoulli_centered(0.5).unwrap();
        let row = ci_half_length_table(&d, 0.05).unwrap();
        let scale = (2.0 * 40f64.ln()).sqrt();
        assert!((row.sigma_opt - 0.5 * scale).abs() < 1e-12);
        assert!((row.sigma_opt - 1.358_101_515_740_619).abs() < 1e-12);
        assert!((row.std_dev - row.sigma_opt).abs() < 1e-12);
        assert!(ci_half_length_table(&gauss(), 0.05).is_err());
        assert!(ci_half_length_table(&d, 1.0).is_err());
    }
}
