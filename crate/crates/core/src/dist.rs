//! Distributions with analytically known (or quadrature-evaluable) moments.
//!
//! Every distribution here is described through its centered version
//! `X - E X`; moment functions refer to that centered variable.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{invalid, Result};
use crate::quad::integrate;
use crate::special::ln_double_factorial_odd;

pub(crate) const QUAD_TOL: f64 = 1e-10;

/// Reference distributions. Build them with the checked constructors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DistributionSpec {
    Gaussian { mean: f64, sigma: f64 },
    /// U[-a, a].
    UniformSym { a: f64 },
    /// +-c with probability 1/2 each.
    RademacherScaled { c: f64 },
    /// Bernoulli(mu) minus mu.
    BernoulliCentered { mu: f64 },
    /// Exp(1) conditioned on [0, M], minus its mean.
    TruncExpCentered { m: f64 },
    /// Zero-mean mixture p N(0, sigma1^2) + (1-p) N(0, sigma2^2), sigma1 > sigma2.
    GaussianMixture { p: f64, sigma1: f64, sigma2: f64 },
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(invalid(name, format!("must be positive and finite, got {v}")))
    }
}

fn unit_open(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(invalid(name, format!("must lie in (0, 1), got {v}")))
    }
}

/// log(e^a + e^b) without overflow.
fn log_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

impl DistributionSpec {
    pub fn gaussian(mean: f64, sigma: f64) -> Result<Self> {
        if !mean.is_finite() {
            return Err(invalid("mean", "must be finite"));
        }
        positive("sigma", sigma)?;
        Ok(Self::Gaussian { mean, sigma })
    }

    pub fn uniform_sym(a: f64) -> Result<Self> {
        positive("a", a)?;
        Ok(Self::UniformSym { a })
    }

    pub fn rademacher_scaled(c: f64) -> Result<Self> {
        positive("c", c)?;
        Ok(Self::RademacherScaled { c })
    }

    pub fn bernoulli_centered(mu: f64) -> Result<Self> {
        unit_open("mu", mu)?;
        Ok(Self::BernoulliCentered { mu })
    }

    pub fn trunc_exp_centered(m: f64) -> Result<Self> {
        positive("M", m)?;
        Ok(Self::TruncExpCentered { m })
    }

    pub fn gaussian_mixture(p: f64, sigma1: f64, sigma2: f64) -> Result<Self> {
        unit_open("p", p)?;
        positive("sigma1", sigma1)?;
        positive("sigma2", sigma2)?;
        if sigma1 <= sigma2 {
            return Err(invalid("sigma1", "must exceed sigma2"));
        }
        Ok(Self::GaussianMixture { p, sigma1, sigma2 })
    }

    /// Re-checks the constructor invariants (the variants are public).
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Gaussian { mean, sigma } => Self::gaussian(mean, sigma).map(|_| ()),
            Self::UniformSym { a } => positive("a", a),
            Self::RademacherScaled { c } => positive("c", c),
            Self::BernoulliCentered { mu } => unit_open("mu", mu),
            Self::TruncExpCentered { m } => positive("M", m),
            Self::GaussianMixture { p, sigma1, sigma2 } => {
                Self::gaussian_mixture(p, sigma1, sigma2).map(|_| ())
            }
        }
    }

    /// Whether the centered variable is symmetric about zero.
    pub fn is_symmetric(&self) -> bool {
        match *self {
            Self::BernoulliCentered { mu } => mu == 0.5,
            Self::TruncExpCentered { .. } => false,
            _ => true,
        }
    }

    /// Mean of the uncentered variable (the shift removed by centering).
    pub fn raw_mean(&self) -> f64 {
        match *self {
            Self::Gaussian { mean, .. } => mean,
            Self::BernoulliCentered { mu } => mu,
            Self::TruncExpCentered { m } => trunc_exp_mean(m),
            _ => 0.0,
        }
    }

    pub fn variance(&self) -> Result<f64> {
        Ok(self.ln_even_moment(1)?.exp())
    }

    /// ln E[(X - E X)^{2k}].
    pub fn ln_even_moment(&self, k: u32) -> Result<f64> {
        self.validate()?;
        let two_k = 2.0 * k as f64;
        Ok(match *self {
            Self::Gaussian { sigma, .. } => ln_double_factorial_odd(k) + two_k * sigma.ln(),
            Self::UniformSym { a } => two_k * a.ln() - (two_k + 1.0).ln(),
            Self::RademacherScaled { c } => two_k * c.ln(),
            Self::BernoulliCentered { mu } => log_add(
                mu.ln() + two_k * (1.0 - mu).ln(),
                (1.0 - mu).ln() + two_k * mu.ln(),
            ),
            Self::TruncExpCentered { m } => {
                trunc_exp_central_moment(m, |d| d.powi(2 * k as i32))?.ln()
            }
            Self::GaussianMixture { p, sigma1, sigma2 } => {
                ln_double_factorial_odd(k)
                    + log_add(
                        p.ln() + two_k * sigma1.ln(),
                        (1.0 - p).ln() + two_k * sigma2.ln(),
                    )
            }
        })
    }

    /// ln E|X - E X|^p for real p >= 1.
    pub fn ln_abs_moment(&self, p: f64) -> Result<f64> {
        self.validate()?;
        let ln_gauss = |sigma: f64| {
            p * sigma.ln() + 0.5 * p * std::f64::consts::LN_2 + ln_gamma(0.5 * (p + 1.0))
                - 0.5 * std::f64::consts::PI.ln()
        };
        Ok(match *self {
            Self::Gaussian { sigma, .. } => ln_gauss(sigma),
            Self::UniformSym { a } => p * a.ln() - (p + 1.0).ln(),
            Self::RademacherScaled { c } => p * c.ln(),
            Self::BernoulliCentered { mu } => log_add(
                mu.ln() + p * (1.0 - mu).ln(),
                (1.0 - mu).ln() + p * mu.ln(),
            ),
            Self::TruncExpCentered { m } => trunc_exp_central_moment(m, |d| d.abs().powf(p))?.ln(),
            Self::GaussianMixture { p: w, sigma1, sigma2 } => {
                log_add(w.ln() + ln_gauss(sigma1), (1.0 - w).ln() + ln_gauss(sigma2))
            }
        })
    }

    /// E exp((X - E X)^2 / c^2); `+inf` when the expectation diverges.
    pub fn square_exp_moment(&self, c: f64) -> Result<f64> {
        self.validate()?;
        let inv = 1.0 / (c * c);
        let gauss = |sigma: f64| {
            let r = 2.0 * sigma * sigma * inv;
            if r >= 1.0 {
                f64::INFINITY
            } else {
                (1.0 - r).sqrt().recip()
            }
        };
        Ok(match *self {
            Self::Gaussian { sigma, .. } => gauss(sigma),
            Self::UniformSym { a } => integrate(|x| (x * x * inv).exp(), 0.0, a, QUAD_TOL)? / a,
            Self::RademacherScaled { c: s } => (s * s * inv).exp(),
            Self::BernoulliCentered { mu } => {
                mu * ((1.0 - mu).powi(2) * inv).exp() + (1.0 - mu) * (mu * mu * inv).exp()
            }
            Self::TruncExpCentered { m } => trunc_exp_central_moment(m, |d| (d * d * inv).exp())?,
            Self::GaussianMixture { p, sigma1, sigma2 } => p * gauss(sigma1) + (1.0 - p) * gauss(sigma2),
        })
    }

    /// Draws one value of the centered variable (plus the Gaussian mean).
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            Self::Gaussian { mean, sigma } => {
                let z: f64 = StandardNormal.sample(rng);
                mean + sigma * z
            }
            Self::UniformSym { a } => rng.random_range(-a..=a),
            Self::RademacherScaled { c } => {
                if rng.random::<bool>() {
                    c
                } else {
                    -c
                }
            }
            Self::BernoulliCentered { mu } => {
                if rng.random::<f64>() < mu {
                    1.0 - mu
                } else {
                    -mu
                }
            }
            Self::TruncExpCentered { m } => {
                let u: f64 = rng.random();
                // Inverse CDF of Exp(1) restricted to [0, M].
                let x = -(-u * (-(-m).exp_m1())).ln_1p();
                x - trunc_exp_mean(m)
            }
            Self::GaussianMixture { p, sigma1, sigma2 } => {
                let z: f64 = StandardNormal.sample(rng);
                if rng.random::<f64>() < p {
                    sigma1 * z
                } else {
                    sigma2 * z
                }
            }
        }
    }
}

/// Mean of Exp(1) conditioned on [0, M].
fn trunc_exp_mean(m: f64) -> f64 {
    // 1 - M e^{-M} / (1 - e^{-M})
    1.0 - m / m.exp_m1()
}

/// E g(X - mean) for X ~ Exp(1) restricted to [0, M]; the integral is split
/// at the mean so integrands with a kink there stay smooth per piece.
fn trunc_exp_central_moment<G: Fn(f64) -> f64>(m: f64, g: G) -> Result<f64> {
    let mean = trunc_exp_mean(m);
    let z = -(-m).exp_m1();
    let f = |x: f64| g(x - mean) * (-x).exp();
    let left = integrate(f, 0.0, mean, QUAD_TOL)?;
    let right = integrate(f, mean, m, QUAD_TOL)?;
    Ok((left + right) / z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn constructors_enforce_ranges() {
        assert!(DistributionSpec::rademacher_scaled(0.0).is_err());
        assert!(DistributionSpec::gaussian(0.0, -1.0).is_err());
        assert!(DistributionSpec::bernoulli_centered(1.0).is_err());
        assert!(DistributionSpec::gaussian_mixture(0.5, 1.0, 2.0).is_err());
        assert!(DistributionSpec::gaussian_mixture(0.5, 2.0, 1.0).is_ok());
        assert!(DistributionSpec::UniformSym { a: -1.0 }.validate().is_err());
    }

    #[test]
    fn trunc_exp_mean_matches_closed_form() {
        // mpmath reference values
        assert!((trunc_exp_mean(2.75) - 0.812_192_232_806_89).abs() < 1e-13);
        assert!((trunc_exp_mean(3.0) - 0.842_812_910_526_23).abs() < 1e-13);
    }

    #[test]
    fn bernoulli_moments_closed_form() {
        let d = DistributionSpec::bernoulli_centered(0.3).unwrap();
        let m4 = d.ln_even_moment(2).unwrap().exp();
        let direct = 0.3 * 0.7f64.powi(4) + 0.7 * 0.3f64.powi(4);
        assert!((m4 - direct).abs() < 1e-15);
        assert!((d.variance().unwrap() - 0.21).abs() < 1e-15);
    }

    #[test]
    fn trunc_exp_sampler_mean_zero() {
        let d = DistributionSpec::trunc_exp_centered(3.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 200_000;
        let xs: Vec<f64> = (0..n).map(|_| d.sample(&mut rng)).collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        assert!(mean.abs() < 0.01, "{mean}");
        assert!(xs.iter().all(|x| *x >= -trunc_exp_mean(3.0) && *x <= 3.0 - trunc_exp_mean(3.0)));
        let var = xs.iter().map(|x| x * x).sum::<f64>() / n as f64;
        assert!((var - d.variance().unwrap()).abs() < 0.01);
    }

    #[test]
    fn gaussian_abs_moments() {
        let d = DistributionSpec::gaussian(0.0, 1.0).unwrap();
        assert!(d.ln_abs_moment(2.0).unwrap().abs() < 1e-12);
        let m1 = d.ln_abs_moment(1.0).unwrap().exp();
        assert!((m1 - (2.0 / std::f64::consts::PI).sqrt()).abs() < 1e-12);
    }
}
