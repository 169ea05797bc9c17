//! Closed-form MGF and tail bounds, confidence intervals, and the maxima
//! sandwich implied by the intrinsic moment norm.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::special::inverse_normal_cdf;

/// Constant inflating the variance proxy for asymmetric summands.
pub const ASYMMETRIC_FACTOR: f64 = 17.0 / 12.0;

/// Berry-Esseen constant for a Bernoulli(1/2) mean (0.4748 rho / sigma^3).
const BE_SHIFT: f64 = 0.409_954;
/// Rounded feasibility constant 2 * BE_SHIFT used to start the scan.
const BE_FEASIBILITY: f64 = 0.8199;

fn factor(symmetric: bool) -> f64 {
    if symmetric {
        1.0
    } else {
        ASYMMETRIC_FACTOR
    }
}

fn check_delta(name: &'static str, delta: f64) -> Result<()> {
    if delta > 0.0 && delta < 1.0 {
        Ok(())
    } else {
        Err(invalid(name, format!("must lie in (0, 1), got {delta}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CiMethod {
    IntrinsicSym,
    IntrinsicAsym,
    Hoeffding,
    BeClt,
    WrongHoeffdingGauss,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceInterval {
    pub center: f64,
    /// Infinite when the interval is infeasible.
    pub half_width: f64,
    /// Nominal coverage 1 - delta.
    pub level: f64,
    pub method: CiMethod,
    pub feasible: bool,
}

impl ConfidenceInterval {
    pub fn lower(&self) -> f64 {
        self.center - self.half_width
    }

    pub fn upper(&self) -> f64 {
        self.center + self.half_width
    }

    pub fn contains(&self, x: f64) -> bool {
        self.feasible && (x - self.center).abs() <= self.half_width
    }
}

/// Per-summand norms for a sum tail bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailBoundParams {
    norms: Vec<f64>,
    symmetric: bool,
}

impl TailBoundParams {
    pub fn new(norms: Vec<f64>, symmetric: bool) -> Result<Self> {
        if norms.is_empty() {
            return Err(invalid("norms", "must not be empty"));
        }
        if norms.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(invalid("norms", "entries must be finite and nonnegative"));
        }
        Ok(Self { norms, symmetric })
    }

    pub fn norms(&self) -> &[f64] {
        &self.norms
    }

    pub fn symmetric(&self) -> bool {
        self.symmetric
    }

    /// 1 for symmetric summands, 17/12 otherwise.
    pub fn constant_factor(&self) -> f64 {
        factor(self.symmetric)
    }
}

/// A value that may exceed its natural range; `value` is clamped, `raw` is not.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Clamped {
    pub value: f64,
    pub raw: f64,
}

/// MGF bound; `saturated` marks an overflow replaced by `f64::MAX`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MgfBound {
    pub value: f64,
    pub saturated: bool,
}

/// exp(c t^2 norm^2 / 2) with c = 1 (symmetric) or 17/12.
pub fn mgf_bound(t: f64, norm: f64, symmetric: bool) -> MgfBound {
    let v = (factor(symmetric) * t * t * norm * norm / 2.0).exp();
    if v.is_finite() {
        MgfBound { value: v, saturated: false }
    } else {
        MgfBound { value: f64::MAX, saturated: true }
    }
}

/// P(|sum X_i| >= s) <= 2 exp(-s^2 / (2 c sum norm_i^2)).
pub fn sum_tail_bound(s: f64, params: &TailBoundParams) -> Result<Clamped> {
    if !(s >= 0.0) {
        return Err(invalid("s", "must be nonnegative"));
    }
    let total: f64 = params.norms.iter().map(|g| g * g).sum();
    let raw = if total == 0.0 {
        if s > 0.0 {
            0.0
        } else {
            2.0
        }
    } else {
        2.0 * (-s * s / (2.0 * params.constant_factor() * total)).exp()
    };
    Ok(Clamped { value: raw.min(1.0), raw })
}

/// Mean +- norm sqrt(2 c ln(2/delta) / n).
pub fn intrinsic_ci(sample_mean: f64, norm: f64, n: usize, delta: f64, symmetric: bool) -> Result<ConfidenceInterval> {
    check_delta("delta", delta)?;
    if !(norm >= 0.0) {
        return Err(invalid("norm", "must be nonnegative"));
    }
    if n == 0 {
        return Err(invalid("n", "must be positive"));
    }
    Ok(ConfidenceInterval {
        center: sample_mean,
        half_width: norm * (factor(symmetric) * 2.0 * (2.0 / delta).ln() / n as f64).sqrt(),
        level: 1.0 - delta,
        method: if symmetric { CiMethod::IntrinsicSym } else { CiMethod::IntrinsicAsym },
        feasible: true,
    })
}

/// Hoeffding interval for variables supported on [a, b].
pub fn hoeffding_ci(sample_mean: f64, a: f64, b: f64, n: usize, delta: f64) -> Result<ConfidenceInterval> {
    check_delta("delta", delta)?;
    if !(a < b) {
        return Err(invalid("a, b", format!("need a < b, got [{a}, {b}]")));
    }
    if n == 0 {
        return Err(invalid("n", "must be positive"));
    }
    Ok(ConfidenceInterval {
        center: sample_mean,
        half_width: (b - a) / 2f64.sqrt() * ((2.0 / delta).ln() / n as f64).sqrt(),
        level: 1.0 - delta,
        method: CiMethod::Hoeffding,
        feasible: true,
    })
}

/// Berry-Esseen corrected normal interval for the mean of Bernoulli(1/2)
/// data, centered at 0. Infeasible (infinite half width) for small n.
pub fn be_clt_ci(n: usize, delta: f64) -> Result<ConfidenceInterval> {
    check_delta("delta", delta)?;
    if n == 0 {
        return Err(invalid("n", "must be positive"));
    }
    let rn = (n as f64).sqrt();
    let p = delta / 2.0 - BE_SHIFT / rn;
    let (half_width, feasible) = if p <= 0.0 {
        (f64::INFINITY, false)
    } else {
        (-inverse_normal_cdf(p)? / (2.0 * rn), true)
    };
    Ok(ConfidenceInterval {
        center: 0.0,
        half_width,
        level: 1.0 - delta,
        method: CiMethod::BeClt,
        feasible,
    })
}

/// Smallest n for which [`be_clt_ci`] is feasible.
pub fn be_clt_min_n(delta: f64) -> Result<usize> {
    check_delta("delta", delta)?;
    let start = ((BE_FEASIBILITY / delta).powi(2).ceil() as usize).saturating_sub(2).max(1);
    let mut n = start;
    // Step back in case the rounded constant overshoots, then scan up.
    while n > 1 && be_clt_ci(n - 1, delta)?.feasible {
        n -= 1;
    }
    while !be_clt_ci(n, delta)?.feasible {
        n += 1;
    }
    Ok(n)
}

/// The loose interval obtained by treating a Gaussian sample as bounded by
/// its high-probability range and applying Hoeffding.
pub fn wrong_hoeffding_gaussian_ci(n: usize, sigma: f64, alpha: f64) -> Result<ConfidenceInterval> {
    check_delta("alpha", alpha)?;
    if n < 2 {
        return Err(invalid("n", "must be at least 2"));
    }
    if !(sigma > 0.0) {
        return Err(invalid("sigma", "must be positive"));
    }
    let l = (4.0 / alpha).ln();
    Ok(ConfidenceInterval {
        center: 0.0,
        half_width: 2.0 * sigma * (l / n as f64).sqrt() * (l.sqrt() + (n as f64).ln().sqrt()),
        level: 1.0 - alpha,
        method: CiMethod::WrongHoeffdingGauss,
        feasible: true,
    })
}

fn check_norm_pair(norm_g: f64, norm_g_tilde: f64) -> Result<()> {
    if !(norm_g_tilde > 0.0) {
        return Err(invalid(
            "normGtilde",
            "must be positive; the lower norm vanishes for bounded variables",
        ));
    }
    if !(norm_g_tilde <= norm_g) || !norm_g.is_finite() {
        return Err(invalid("normG", "must be finite and at least normGtilde"));
    }
    Ok(())
}

/// C(X) from the two norms; 4/27 when they coincide.
pub fn reverse_chernoff_constant(norm_g: f64, norm_g_tilde: f64) -> Result<f64> {
    check_norm_pair(norm_g, norm_g_tilde)?;
    let (g2, t2) = (norm_g * norm_g, norm_g_tilde * norm_g_tilde);
    let denom = 4.0 * g2 - t2;
    Ok((t2 / denom) * ((4.0 * g2 - 2.0 * t2) / denom).powf(4.0 * g2 / t2 - 2.0))
}

/// Lower bound on P(X >= t): C^2 exp(-4 (2 G^2 / Gt^4 - 1/Gt^2) t^2).
pub fn reverse_chernoff_lower(t: f64, norm_g: f64, norm_g_tilde: f64) -> Result<Clamped> {
    if !(t >= 0.0) {
        return Err(invalid("t", "must be nonnegative"));
    }
    let c = reverse_chernoff_constant(norm_g, norm_g_tilde)?;
    let (g2, t2) = (norm_g * norm_g, norm_g_tilde * norm_g_tilde);
    let raw = c * c * (-4.0 * (2.0 * g2 / (t2 * t2) - 1.0 / t2) * t * t).exp();
    Ok(Clamped { value: raw.clamp(0.0, 1.0), raw })
}

/// High-probability bounds on max_i X_i / ||X||_G.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaxBounds {
    /// Zero when the lower bound is undefined (see `lower_defined`).
    pub lower: f64,
    pub upper: f64,
    /// False when ln(n C^2) - ln ln(2/delta) is negative or ln(2/delta) <= 0.
    pub lower_defined: bool,
    /// L(X) = (Gt / (2G)) / sqrt(2 G^2/Gt^2 - 1).
    pub lower_constant: f64,
}

pub fn max_bounds(n: usize, delta: f64, norm_g: f64, norm_g_tilde: f64) -> Result<MaxBounds> {
    check_delta("delta", delta)?;
    if n == 0 {
        return Err(invalid("n", "must be positive"));
    }
    let c = reverse_chernoff_constant(norm_g, norm_g_tilde)?;
    let ratio = norm_g * norm_g / (norm_g_tilde * norm_g_tilde);
    let l = (norm_g_tilde / (2.0 * norm_g)) / (2.0 * ratio - 1.0).sqrt();
    let log_term = (2.0 / delta).ln();
    let upper = (2.0 * (n as f64).ln() + 2.0 * log_term).sqrt();
    let inner = (n as f64 * c * c).ln() - log_term.ln();
    let (lower, lower_defined) = if inner >= 0.0 && log_term > 0.0 {
        (l * inner.sqrt(), true)
    } else {
        (0.0, false)
    };
    debug_assert!(lower <= upper);
    Ok(MaxBounds {
        lower,
        upper,
        lower_defined,
        lower_constant: l,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mgf_examples() {
        assert_eq!(mgf_bound(0.0, 3.0, false).value, 1.0);
        assert!((mgf_bound(1.0, 1.0, true).value - 0.5f64.exp()).abs() < 1e-15);
        assert!((mgf_bound(1.0, 1.0, false).value - 2.030_604_096_634_748).abs() < 1e-12);
        let big = mgf_bound(1e3, 1e3, true);
        assert!(big.saturated && big.value == f64::MAX);
    }

    #[test]
    fn sum_tail_examples() {
        let sym = TailBoundParams::new(vec![1.0], true).unwrap();
        let b = sum_tail_bound(0.0, &sym).unwrap();
        assert_eq!((b.value, b.raw), (1.0, 2.0));
        assert!((sum_tail_bound(2.0, &sym).unwrap().value - 2.0 * (-2.0f64).exp()).abs() < 1e-15);
        let asym = TailBoundParams::new(vec![1.0], false).unwrap();
        assert_eq!(asym.constant_factor(), 17.0 / 12.0);
        let v = sum_tail_bound(2.0, &asym).unwrap().value;
        assert!((v - 0.487_425_643_991_798_1).abs() < 1e-12);
        let zero = TailBoundParams::new(vec![0.0, 0.0], true).unwrap();
        assert_eq!(sum_tail_bound(0.5, &zero).unwrap().value, 0.0);
        assert!(TailBoundParams::new(vec![], true).is_err());
    }

    #[test]
    fn ci_examples() {
        let ci = intrinsic_ci(0.0, 1.0, 100, 0.05, true).unwrap();
        assert!((ci.half_width - 0.271_620_303_148_123_9).abs() < 1e-13);
        let asym = intrinsic_ci(0.0, 1.0, 100, 0.05, false).unwrap();
        assert!((asym.half_width / ci.half_width - (17.0f64 / 12.0).sqrt()).abs() < 1e-14);
        assert_eq!(intrinsic_ci(0.0, 0.0, 10, 0.05, true).unwrap().half_width, 0.0);
        let h = hoeffding_ci(0.0, 0.0, 1.0, 100, 0.05).unwrap();
        assert!((h.half_width - 0.135_810_151_574_061_9).abs() < 1e-13);
        assert!(hoeffding_ci(0.0, 1.0, 1.0, 100, 0.05).is_err());
        let w = wrong_hoeffding_gaussian_ci(100, 1.0, 0.05).unwrap();
        assert!((w.half_width - 1.774_847_944_183_221).abs() < 1e-12);
    }

    #[test]
    fn be_clt_thresholds() {
        assert_eq!(be_clt_min_n(0.05).unwrap(), 269);
        assert_eq!(be_clt_min_n(0.075).unwrap(), 120);
        assert_eq!(be_clt_min_n(0.1).unwrap(), 68);
        assert!(!be_clt_ci(67, 0.1).unwrap().feasible);
        assert!(be_clt_ci(68, 0.1).unwrap().feasible);
    }

    #[test]
    fn reverse_chernoff_gaussian_constant() {
        let c = reverse_chernoff_constant(1.0, 1.0).unwrap();
        assert!((c - 4.0 / 27.0).abs() < 1e-15);
        let r = reverse_chernoff_lower(0.0, 1.0, 1.0).unwrap();
        assert!((r.value - 0.021_947_873_799_725_65).abs() < 1e-15);
        assert!(reverse_chernoff_lower(50.0, 1.0, 1.0).unwrap().value < 1e-300);
        assert!(reverse_chernoff_lower(1.0, 1.0, 0.0).is_err());
        assert!(reverse_chernoff_lower(1.0, 1.0, 2.0).is_err());
    }

    #[test]
    fn max_bounds_gaussian() {
        let b = max_bounds(1_000_000, 0.05, 1.0, 1.0).unwrap();
        assert!((b.lower_constant - 0.5).abs() < 1e-15);
        assert!((b.upper - 5.916_821_784_045_589).abs() < 1e-12);
        assert!(b.lower_defined && b.lower <= b.upper);
        let small = max_bounds(2, 0.05, 1.0, 1.0).unwrap();
        assert!(!small.lower_defined);
        assert_eq!(small.lower, 0.0);
    }
}
