//! Goodness-of-fit testing for exponentiality under progressive Type-II
//! censoring, built on a spacings-based Rényi entropy estimator.
//!
//! The pieces, bottom up:
//!
//! - [`censoring`]: scheme algebra — risk-set sizes γ, the normalizing
//!   constant c, partial-fraction coefficients a_{i,j}, expected uniform
//!   order statistics p_i, and exact sample generation.
//! - [`distributions`]: the null and the hazard-class alternatives, with
//!   density / CDF / quantile / sampling.
//! - [`entropy`]: the Rényi estimator H^α(w,n,m), the Shannon baseline, and
//!   a quadrature oracle for the joint-entropy decomposition.
//! - [`gof`]: the test statistics (large values reject exponentiality) and
//!   the censored-sample exponential MLE.
//! - [`mc`]: Monte Carlo critical values, p-values, window selection and
//!   power studies, deterministic for fixed (seed, reps) at any worker count.
//! - [`cli`] / [`report`]: the command-line pipeline and its JSON schema.
//!
//! ```
//! use rklgof::censoring::{CensoringScheme, ProgressiveSample};
//! use rklgof::gof::renyi_test_statistic;
//!
//! let scheme: CensoringScheme = "n=19 m=8 R=0,0,3,0,3,0,0,5".parse().unwrap();
//! let x = vec![0.19, 0.78, 0.96, 1.31, 2.78, 4.85, 6.50, 7.35];
//! let sample = ProgressiveSample::new(scheme, x).unwrap();
//! let t = renyi_test_statistic(&sample, 0.4, 3).unwrap();
//! assert!(t.value.is_finite());
//! ```

pub mod censoring;
pub mod cli;
pub mod distributions;
pub mod entropy;
pub mod error;
pub mod gof;
pub mod mc;
pub mod quad;
pub mod report;
mod special;

pub use censoring::{CensoringScheme, ProgressiveSample};
pub use distributions::Distribution;
pub use error::{Error, Result};
pub use gof::{StatisticKind, TestStatistic};
pub use mc::McConfig;
