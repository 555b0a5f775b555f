//! Progressive Type-II censoring schemes and their coefficient algebra.
//!
//! A scheme `(n, m, R)` places `n` units on test, observes `m` failures and
//! removes `R_i` surviving units at the i-th failure, so `n = m + Σ R_i`.
//! Everything downstream (risk-set sizes γ, the normalizing constant c, the
//! partial-fraction coefficients a_{i,j} of the marginal densities, and the
//! expected uniform order statistics p_i) derives from the scheme alone.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};

/// Largest `m` for which the alternating partial-fraction sums are supported.
///
/// The a_{i,j} alternate in sign and cancel; with compensated summation the
/// loss is ~1e-10 relative around m=15 and a few digits by m=30 (the largest
/// design anyone tabulates). Beyond that the sums are not trustworthy in
/// double precision, so the coefficient paths refuse to run.
pub const MAX_PARTIAL_FRACTION_M: usize = 30;

/// A progressive Type-II censoring scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensoringScheme {
    n: usize,
    m: usize,
    removals: Vec<usize>,
}

impl CensoringScheme {
    /// Validates `n = m + Σ R_i`, `1 ≤ m ≤ n` and builds the scheme.
    pub fn new(n: usize, m: usize, removals: Vec<usize>) -> Result<Self> {
        if m == 0 || m > n {
            return Err(Error::InvalidScheme(format!("need 1 <= m <= n, got n={n} m={m}")));
        }
        if removals.len() != m {
            return Err(Error::InvalidScheme(format!(
                "removal vector has length {}, expected m={m}",
                removals.len()
            )));
        }
        let total: usize = removals.iter().sum();
        if n != m + total {
            return Err(Error::InvalidScheme(format!(
                "scheme identity n = m + sum(R) violated: n={n}, m + sum(R) = {}",
                m + total
            )));
        }
        Ok(Self { n, m, removals })
    }

    /// Complete sample: R = (0, ..., 0), m = n.
    pub fn complete(n: usize) -> Result<Self> {
        Self::new(n, n, vec![0; n])
    }

    /// Conventional Type-II right censoring: R = (0, ..., 0, n - m).
    pub fn right_censored(n: usize, m: usize) -> Result<Self> {
        if m == 0 || m > n {
            return Err(Error::InvalidScheme(format!("need 1 <= m <= n, got n={n} m={m}")));
        }
        let mut r = vec![0; m];
        r[m - 1] = n - m;
        Self::new(n, m, r)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn removals(&self) -> &[usize] {
        &self.removals
    }

    /// Risk-set sizes γ_i = m - i + 1 + Σ_{j≥i} R_j, strictly decreasing with
    /// γ_1 = n and γ_m = R_m + 1.
    pub fn gammas(&self) -> Vec<f64> {
        let mut tail: usize = 0;
        let mut out = vec![0.0; self.m];
        for i in (0..self.m).rev() {
            tail += self.removals[i];
            out[i] = (self.m - i + tail) as f64;
        }
        out
    }

    /// Normalizing constant c = Π γ_u of the joint density. Overflows f64
    /// only for schemes far beyond anything usable; prefer
    /// [`log_normalizing_constant`](Self::log_normalizing_constant) when in doubt.
    pub fn normalizing_constant(&self) -> f64 {
        self.gammas().iter().product()
    }

    /// log c, safe at any scheme size.
    pub fn log_normalizing_constant(&self) -> f64 {
        self.gammas().iter().map(|g| g.ln()).sum()
    }

    /// Partial-fraction coefficients a_{i,j} = Π_{u≤j, u≠i} 1/(γ_u - γ_i)
    /// for the marginal density of the j-th order statistic (1-based `j`).
    ///
    /// Signs alternate; capped at m ≤ [`MAX_PARTIAL_FRACTION_M`].
    pub fn a_coeffs(&self, j: usize) -> Result<Vec<f64>> {
        if j == 0 || j > self.m {
            return Err(Error::InvalidParameter(format!("a_coeffs: need 1 <= j <= m, got j={j}")));
        }
        if self.m > MAX_PARTIAL_FRACTION_M {
            return Err(Error::InvalidParameter(format!(
                "partial-fraction coefficients support m <= {MAX_PARTIAL_FRACTION_M}, scheme has m={}",
                self.m
            )));
        }
        let g = self.gammas();
        let mut out = Vec::with_capacity(j);
        for i in 0..j {
            let mut prod = 1.0;
            for u in 0..j {
                if u != i {
                    prod /= g[u] - g[i];
                }
            }
            out.push(prod);
        }
        Ok(out)
    }

    /// Expected uniform progressive order statistics
    /// p_i = E[U_{i:m:n}] = 1 - Π_{k≤i} γ_k / (γ_k + 1), strictly increasing.
    pub fn expected_uniform_order_stats(&self) -> Vec<f64> {
        let mut prod = 1.0;
        self.gammas()
            .iter()
            .map(|&g| {
                prod *= g / (g + 1.0);
                1.0 - prod
            })
            .collect()
    }

    /// All coefficients in one bundle.
    pub fn coefficients(&self) -> Result<SchemeCoefficients> {
        let gamma = self.gammas();
        let a = (1..=self.m).map(|j| self.a_coeffs(j)).collect::<Result<Vec<_>>>()?;
        Ok(SchemeCoefficients {
            gamma,
            c: self.normalizing_constant(),
            log_c: self.log_normalizing_constant(),
            a,
            p: self.expected_uniform_order_stats(),
        })
    }
}

/// Scheme literal: `n=19 m=8 R=0,0,3,0,3,0,0,5` (whitespace-separated
/// key=value pairs, R comma-separated).
impl FromStr for CensoringScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut n = None;
        let mut m = None;
        let mut r: Option<Vec<usize>> = None;
        for tok in s.split_whitespace() {
            let (key, value) = tok
                .split_once('=')
                .ok_or_else(|| Error::InvalidScheme(format!("expected key=value, got `{tok}`")))?;
            match key {
                "n" => {
                    n = Some(value.parse().map_err(|_| {
                        Error::InvalidScheme(format!("n must be a positive integer, got `{value}`"))
                    })?)
                }
                "m" => {
                    m = Some(value.parse().map_err(|_| {
                        Error::InvalidScheme(format!("m must be a positive integer, got `{value}`"))
                    })?)
                }
                "R" => {
                    r = Some(
                        value
                            .split(',')
                            .map(|v| {
                                v.trim().parse().map_err(|_| {
                                    Error::InvalidScheme(format!(
                                        "R entries must be nonnegative integers, got `{v}`"
                                    ))
                                })
                            })
                            .collect::<Result<Vec<usize>>>()?,
                    )
                }
                other => {
                    return Err(Error::InvalidScheme(format!("unknown key `{other}` in scheme literal")))
                }
            }
        }
        let n = n.ok_or_else(|| Error::InvalidScheme("missing n=".into()))?;
        let m = m.ok_or_else(|| Error::InvalidScheme("missing m=".into()))?;
        let r = r.ok_or_else(|| Error::InvalidScheme("missing R=".into()))?;
        Self::new(n, m, r)
    }
}

impl fmt::Display for CensoringScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.removals.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "n={} m={} R={}", self.n, self.m, r)
    }
}

/// Derived coefficients of a scheme.
#[derive(Debug, Clone)]
pub struct SchemeCoefficients {
    /// γ_i, length m.
    pub gamma: Vec<f64>,
    /// c = Π γ_u.
    pub c: f64,
    /// log c.
    pub log_c: f64,
    /// `a[j-1][i-1]` = a_{i,j} for 1 ≤ i ≤ j ≤ m (ragged triangular).
    pub a: Vec<Vec<f64>>,
    /// p_i = E[U_{i:m:n}], length m.
    pub p: Vec<f64>,
}

/// An observed progressively Type-II censored sample.
#[derive(Debug, Clone)]
pub struct ProgressiveSample {
    scheme: CensoringScheme,
    x: Vec<f64>,
}

impl ProgressiveSample {
    /// Validates length m, finiteness, and strict increase.
    pub fn new(scheme: CensoringScheme, x: Vec<f64>) -> Result<Self> {
        if x.len() != scheme.m() {
            return Err(Error::InvalidData(format!(
                "sample has {} observations, scheme expects m={}",
                x.len(),
                scheme.m()
            )));
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidData("observations must be finite".into()));
        }
        for (i, pair) in x.windows(2).enumerate() {
            if pair[1] <= pair[0] {
                return Err(Error::InvalidData(format!(
                    "observations must be strictly increasing: x[{}]={} !< x[{}]={}",
                    i + 1,
                    pair[0],
                    i + 2,
                    pair[1]
                )));
            }
        }
        Ok(Self { scheme, x })
    }

    pub fn scheme(&self) -> &CensoringScheme {
        &self.scheme
    }

    pub fn observations(&self) -> &[f64] {
        &self.x
    }
}

/// Generates a progressive Type-II sample from the law with the given
/// quantile function, by the independent-uniform-powers construction:
/// U_i = 1 - Π_{l≤i} W_l^{1/γ_l} with W_l iid Uniform(0,1), X_i = quantile(U_i).
///
/// Exact, O(m), and reproducible from the caller's stream.
pub fn generate_progressive_sample<R, Q>(
    scheme: &CensoringScheme,
    quantile: Q,
    rng: &mut R,
) -> Result<ProgressiveSample>
where
    R: Rng + ?Sized,
    Q: Fn(f64) -> f64,
{
    let g = scheme.gammas();
    let mut prod = 1.0;
    let mut x = Vec::with_capacity(scheme.m());
    for &gamma in &g {
        let w: f64 = loop {
            let w: f64 = rng.random();
            if w > 0.0 {
                break w;
            }
        };
        prod *= w.powf(1.0 / gamma);
        x.push(quantile(1.0 - prod));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidData(
            "quantile function produced non-finite output; it must map (0,1) to finite reals".into(),
        ));
    }
    for (i, pair) in x.windows(2).enumerate() {
        if pair[1] <= pair[0] {
            return Err(Error::InvalidData(format!(
                "quantile function produced non-increasing output at positions {}..{} ({} !< {}); \
                 it must be strictly increasing on (0,1)",
                i + 1,
                i + 2,
                pair[0],
                pair[1]
            )));
        }
    }
    ProgressiveSample::new(scheme.clone(), x)
}
