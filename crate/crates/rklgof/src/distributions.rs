//! Null and alternative univariate laws: density, CDF, quantile, sampling.
//!
//! The set covers the three hazard classes used in the power studies:
//! monotone increasing (Gamma/Weibull shape 2), monotone decreasing
//! (Gamma/Weibull shape 0.5), and nonmonotone (symmetric Beta 0.5,
//! LogNormal σ=1). Gamma and Beta invert their CDFs with a bracketed
//! Newton/bisection hybrid on the regularized incomplete gamma/beta
//! functions; slower than specialized samplers but exact and dependency-light.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::special::{beta_inc, gamma_p, ln_gamma, normal_cdf, normal_quantile};

/// Root tolerance for quantile inversion.
const ROOT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Distribution {
    /// Exponential with scale θ: f(x) = exp(-x/θ)/θ.
    Exponential { scale: f64 },
    /// Gamma with shape k, scale 1.
    Gamma { shape: f64 },
    /// Weibull with shape k, scale 1.
    Weibull { shape: f64 },
    /// Beta(a, b) on (0, 1).
    Beta { a: f64, b: f64 },
    /// LogNormal: ln X ~ N(mu, sigma²).
    LogNormal { mu: f64, sigma: f64 },
}

impl Distribution {
    pub fn exponential(scale: f64) -> Result<Self> {
        require_positive("scale", scale)?;
        Ok(Self::Exponential { scale })
    }

    pub fn gamma(shape: f64) -> Result<Self> {
        require_positive("shape", shape)?;
        Ok(Self::Gamma { shape })
    }

    pub fn weibull(shape: f64) -> Result<Self> {
        require_positive("shape", shape)?;
        Ok(Self::Weibull { shape })
    }

    pub fn beta(a: f64, b: f64) -> Result<Self> {
        require_positive("a", a)?;
        require_positive("b", b)?;
        Ok(Self::Beta { a, b })
    }

    pub fn log_normal(mu: f64, sigma: f64) -> Result<Self> {
        if !mu.is_finite() {
            return Err(Error::InvalidParameter(format!("mu must be finite, got {mu}")));
        }
        require_positive("sigma", sigma)?;
        Ok(Self::LogNormal { mu, sigma })
    }

    /// Open support interval.
    pub fn support(&self) -> (f64, f64) {
        match self {
            Self::Beta { .. } => (0.0, 1.0),
            _ => (0.0, f64::INFINITY),
        }
    }

    pub fn pdf(&self, x: f64) -> f64 {
        match *self {
            Self::Exponential { scale } => {
                if x < 0.0 {
                    0.0
                } else {
                    (-x / scale).exp() / scale
                }
            }
            Self::Gamma { shape } => {
                if x <= 0.0 {
                    0.0
                } else {
                    ((shape - 1.0) * x.ln() - x - ln_gamma(shape)).exp()
                }
            }
            Self::Weibull { shape } => {
                if x <= 0.0 {
                    0.0
                } else {
                    shape * x.powf(shape - 1.0) * (-x.powf(shape)).exp()
                }
            }
            Self::Beta { a, b } => {
                if x <= 0.0 || x >= 1.0 {
                    0.0
                } else {
                    (ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b)
                        + (a - 1.0) * x.ln()
                        + (b - 1.0) * (1.0 - x).ln())
                    .exp()
                }
            }
            Self::LogNormal { mu, sigma } => {
                if x <= 0.0 {
                    0.0
                } else {
                    let z = (x.ln() - mu) / sigma;
                    (-0.5 * z * z).exp() / (x * sigma * (2.0 * std::f64::consts::PI).sqrt())
                }
            }
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match *self {
            Self::Exponential { scale } => {
                if x <= 0.0 {
                    0.0
                } else {
                    -(-x / scale).exp_m1()
                }
            }
            Self::Gamma { shape } => {
                if x <= 0.0 {
                    0.0
                } else {
                    gamma_p(shape, x).unwrap_or(1.0)
                }
            }
            Self::Weibull { shape } => {
                if x <= 0.0 {
                    0.0
                } else {
                    -(-x.powf(shape)).exp_m1()
                }
            }
            Self::Beta { a, b } => {
                if x <= 0.0 {
                    0.0
                } else if x >= 1.0 {
                    1.0
                } else {
                    beta_inc(a, b, x).unwrap_or(1.0)
                }
            }
            Self::LogNormal { mu, sigma } => {
                if x <= 0.0 {
                    0.0
                } else {
                    normal_cdf((x.ln() - mu) / sigma)
                }
            }
        }
    }

    /// Exact functional inverse of the CDF on (0, 1).
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !p.is_finite() || p <= 0.0 || p >= 1.0 {
            return Err(Error::InvalidParameter(format!("quantile requires p in (0,1), got {p}")));
        }
        match *self {
            Self::Exponential { scale } => Ok(-scale * (-p).ln_1p()),
            Self::Weibull { shape } => Ok((-(-p).ln_1p()).powf(1.0 / shape)),
            Self::LogNormal { mu, sigma } => Ok((mu + sigma * normal_quantile(p)?).exp()),
            Self::Gamma { shape } => {
                // bracket around the mean, then refine
                let mut hi = shape.max(1.0);
                while self.cdf(hi) < p {
                    hi *= 2.0;
                }
                invert_monotone(|x| self.cdf(x), |x| self.pdf(x), p, 0.0, hi)
            }
            Self::Beta { .. } => invert_monotone(|x| self.cdf(x), |x| self.pdf(x), p, 0.0, 1.0),
        }
    }

    /// Survival function 1 - F(x), computed with exact tail forms where the
    /// family admits them (avoids the 1 - cdf cancellation deep in the tail).
    pub fn survival(&self, x: f64) -> f64 {
        match *self {
            Self::Exponential { scale } => {
                if x <= 0.0 {
                    1.0
                } else {
                    (-x / scale).exp()
                }
            }
            Self::Weibull { shape } => {
                if x <= 0.0 {
                    1.0
                } else {
                    (-x.powf(shape)).exp()
                }
            }
            Self::Beta { a, b } => {
                if x <= 0.0 {
                    1.0
                } else if x >= 1.0 {
                    0.0
                } else {
                    beta_inc(b, a, 1.0 - x).unwrap_or(0.0)
                }
            }
            Self::LogNormal { mu, sigma } => {
                if x <= 0.0 {
                    1.0
                } else {
                    normal_cdf(-(x.ln() - mu) / sigma)
                }
            }
            Self::Gamma { .. } => 1.0 - self.cdf(x),
        }
    }

    /// One draw via quantile inversion of a uniform variate.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = loop {
            let u: f64 = rng.random();
            if u > 0.0 {
                break u;
            }
        };
        self.quantile(u).expect("quantile is total on (0,1)")
    }

    /// Hazard rate h(x) = f(x) / (1 - F(x)).
    pub fn hazard(&self, x: f64) -> f64 {
        self.pdf(x) / self.survival(x)
    }
}

fn require_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be positive and finite, got {v}")))
    }
}

/// Newton iteration with bisection safeguard on a bracketing interval.
/// Returns an `x` whose verified residual |cdf(x) - p| is below tolerance.
fn invert_monotone<F, D>(cdf: F, pdf: D, p: f64, mut lo: f64, mut hi: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let mut x = 0.5 * (lo + hi);
    let mut best = (f64::INFINITY, x);
    for _ in 0..200 {
        let f = cdf(x) - p;
        if f.abs() < best.0 {
            best = (f.abs(), x);
        }
        if f.abs() <= ROOT_TOL {
            return Ok(x);
        }
        if f > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        if hi - lo <= f64::EPSILON * hi.abs().max(f64::MIN_POSITIVE) {
            // bracket exhausted at machine resolution
            return Ok(best.1);
        }
        let d = pdf(x);
        let newton = if d > 0.0 { x - f / d } else { f64::NAN };
        x = if newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    if best.0 < 1e-9 {
        Ok(best.1)
    } else {
        Err(Error::QuadratureNonConvergence { achieved: best.0, requested: ROOT_TOL })
    }
}

/// CLI literals: `exp:1`, `gamma:2`, `weibull:0.5`, `beta:0.5`, `lognormal:1`.
///
/// `beta:s` is the symmetric Beta(s, s); `lognormal:s` is LogNormal(0, s).
impl FromStr for Distribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (family, param) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidParameter(format!("expected family:param, got `{s}`")))?;
        let value: f64 = param
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("bad numeric parameter `{param}`")))?;
        match family {
            "exp" => Self::exponential(value),
            "gamma" => Self::gamma(value),
            "weibull" => Self::weibull(value),
            "beta" => Self::beta(value, value),
            "lognormal" => Self::log_normal(0.0, value),
            other => Err(Error::InvalidParameter(format!("unknown distribution family `{other}`"))),
        }
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Distribution::Exponential { scale } => write!(f, "exp:{scale}"),
            Distribution::Gamma { shape } => write!(f, "gamma:{shape}"),
            Distribution::Weibull { shape } => write!(f, "weibull:{shape}"),
            Distribution::Beta { a, b } => {
                if a == b {
                    write!(f, "beta:{a}")
                } else {
                    write!(f, "beta:{a},{b}")
                }
            }
            Distribution::LogNormal { mu, sigma } => {
                if mu == 0.0 {
                    write!(f, "lognormal:{sigma}")
                } else {
                    write!(f, "lognormal:{mu},{sigma}")
                }
            }
        }
    }
}
