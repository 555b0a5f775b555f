//! Monte Carlo engine: critical values, p-values, window selection, and
//! power studies, with deterministic parallel replication.
//!
//! Determinism contract: every output is a pure function of (seed, reps) and
//! the experiment definition, independent of the worker count. Each replicate
//! draws from its own counter-derived stream ([`split_stream`]), so replicates
//! can run on any number of threads and aggregate order-independently.

use std::path::{Path, PathBuf};

use rand_pcg::Pcg64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::censoring::CensoringScheme;
use crate::distributions::Distribution;
use crate::entropy::renyi_scheme_log_constants;
use crate::error::{Error, Result};
use crate::gof::StatisticKind;

/// Monte Carlo run configuration.
#[derive(Debug, Clone, Copy)]
pub struct McConfig {
    /// Number of replicates.
    pub reps: usize,
    /// Master seed; replicate i uses `split_stream(seed', i)` for a context
    /// sub-seed `seed'`.
    pub seed: u64,
    /// Significance level η in (0, 1).
    pub level: f64,
    /// Worker threads; must not affect results.
    pub workers: usize,
}

impl Default for McConfig {
    fn default() -> Self {
        Self { reps: 10_000, seed: 0, level: 0.10, workers: 1 }
    }
}

impl McConfig {
    fn validate(&self) -> Result<()> {
        if self.reps == 0 {
            return Err(Error::InvalidParameter("reps must be >= 1".into()));
        }
        if !self.level.is_finite() || self.level <= 0.0 || self.level >= 1.0 {
            return Err(Error::InvalidParameter(format!("level must be in (0,1), got {}", self.level)));
        }
        if self.workers == 0 {
            return Err(Error::InvalidParameter("workers must be >= 1".into()));
        }
        Ok(())
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Statistically independent stream for `(seed, replicate)`; identical inputs
/// give identical streams, which is what makes results worker-count-independent.
pub fn split_stream(seed: u64, replicate: u64) -> Pcg64 {
    use rand::SeedableRng;
    let mixed = splitmix64(splitmix64(seed) ^ replicate.wrapping_mul(0xA076_1D64_78BD_642F));
    Pcg64::seed_from_u64(mixed)
}

/// Domain-separated sub-seed so that e.g. null and alternative sampling use
/// unrelated streams while staying order- and worker-independent.
fn context_seed(seed: u64, parts: &[&str]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for part in parts {
        for &b in part.as_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01B3);
        }
        h ^= 0xff;
        h = h.wrapping_mul(0x0000_0100_0000_01B3);
    }
    splitmix64(seed ^ h)
}

/// Precomputed per-scheme evaluator for the hot Monte Carlo path.
///
/// Statistically identical to `gof::renyi_test_statistic` /
/// `gof::shannon_test_statistic` (a parity test pins this down); it just
/// hoists the scheme-only work out of the replicate loop.
struct PreparedStatistic {
    n: f64,
    m: usize,
    weights: Vec<f64>, // R_j + 1
    p: Vec<f64>,
    /// Rényi: (alpha, log K_j); Shannon: None.
    renyi: Option<(f64, Vec<f64>)>,
    /// Shannon correction term -(1 - m/n) log(1 - m/n), 0 at m = n.
    shannon_correction: f64,
}

impl PreparedStatistic {
    fn new(scheme: &CensoringScheme, kind: StatisticKind, alpha: Option<f64>) -> Result<Self> {
        if scheme.m() < 2 {
            return Err(Error::InvalidData("test statistics need m >= 2".into()));
        }
        let renyi = match kind {
            StatisticKind::RenyiRkl => {
                let a = alpha.ok_or_else(|| {
                    Error::InvalidParameter("Renyi statistic requires alpha".into())
                })?;
                Some((a, renyi_scheme_log_constants(scheme, a)?))
            }
            StatisticKind::ShannonKl => None,
        };
        let n = scheme.n() as f64;
        let m = scheme.m() as f64;
        let censored = 1.0 - m / n;
        Ok(Self {
            n,
            m: scheme.m(),
            weights: scheme.removals().iter().map(|&r| r as f64 + 1.0).collect(),
            p: scheme.expected_uniform_order_stats(),
            renyi,
            shannon_correction: if censored > 0.0 { censored * censored.ln() } else { 0.0 },
        })
    }

    fn eval(&self, xs: &[f64], w: usize) -> f64 {
        let m = self.m;
        let mut log_slope_sum = 0.0;
        for j in 1..=m {
            let lo = j.saturating_sub(w).max(1) - 1;
            let hi = (j + w).min(m) - 1;
            log_slope_sum += ((xs[hi] - xs[lo]) / (self.p[hi] - self.p[lo])).ln();
        }
        let theta: f64 =
            xs.iter().zip(&self.weights).map(|(x, w)| x * w).sum::<f64>() / m as f64;
        let fit = m as f64 / self.n * (theta.ln() + 1.0);
        match &self.renyi {
            Some((alpha, log_k)) => {
                let h = ((1.0 - alpha) * log_slope_sum + log_k.iter().sum::<f64>()) / (1.0 - alpha);
                -h / self.n + fit
            }
            None => {
                let h = log_slope_sum / self.n - self.shannon_correction;
                -h + fit
            }
        }
    }
}

/// Draw one progressive sample of quantile-transformed uniforms into `buf`.
fn draw_into(buf: &mut Vec<f64>, gammas: &[f64], dist: &Distribution, rng: &mut Pcg64) {
    use rand::Rng;
    buf.clear();
    let mut prod = 1.0;
    for &g in gammas {
        let w: f64 = loop {
            let w: f64 = rng.random();
            if w > 0.0 {
                break w;
            }
        };
        prod *= w.powf(1.0 / g);
        // quantile is total on (0,1); prod in (0,1) keeps u there
        buf.push(dist.quantile(1.0 - prod).expect("u in (0,1)"));
    }
}

/// Statistic values over `cfg.reps` samples drawn from `dist` under the
/// scheme, one per replicate, in replicate order. `stream_parts` pins the
/// stream context.
fn simulate_statistics(
    scheme: &CensoringScheme,
    dist: &Distribution,
    kind: StatisticKind,
    alpha: Option<f64>,
    windows: &[usize],
    cfg: &McConfig,
    stream_parts: &[&str],
) -> Result<Vec<Vec<f64>>> {
    cfg.validate()?;
    for &w in windows {
        if w == 0 || w >= scheme.m() {
            return Err(Error::InvalidParameter(format!(
                "window must satisfy 1 <= w <= m-1, got w={w}, m={}",
                scheme.m()
            )));
        }
    }
    let prepared = PreparedStatistic::new(scheme, kind, alpha)?;
    let gammas = scheme.gammas();
    let sub_seed = context_seed(cfg.seed, stream_parts);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    let rows: Vec<Vec<f64>> = pool.install(|| {
        (0..cfg.reps as u64)
            .into_par_iter()
            .map_init(Vec::new, |buf, rep| {
                let mut rng = split_stream(sub_seed, rep);
                draw_into(buf, &gammas, dist, &mut rng);
                windows.iter().map(|&w| prepared.eval(buf, w)).collect()
            })
            .collect()
    });
    // NaN here would mean a slope went nonpositive, which the generator rules out
    let bad = rows.iter().flatten().filter(|v| !v.is_finite()).count();
    if bad > 0 {
        return Err(Error::ReplicateFailures {
            failed: bad,
            reps: cfg.reps,
            first: Box::new(Error::InvalidData("non-finite statistic in replicate".into())),
        });
    }
    Ok(rows)
}

/// Upper empirical quantile by the ceil((1-level)·reps)-th order statistic.
fn upper_quantile(mut values: Vec<f64>, level: f64) -> f64 {
    let reps = values.len();
    let k = ((1.0 - level) * reps as f64).ceil() as usize;
    let k = k.clamp(1, reps);
    values.sort_by(f64::total_cmp);
    values[k - 1]
}

fn exp1() -> Distribution {
    Distribution::exponential(1.0).expect("unit exponential")
}

/// Critical value: the empirical (1-level)-quantile of the statistic over
/// `cfg.reps` samples from Exponential(1) under the scheme.
pub fn critical_value(
    scheme: &CensoringScheme,
    kind: StatisticKind,
    alpha: Option<f64>,
    w: usize,
    cfg: &McConfig,
    cache: Option<&CritvalCache>,
) -> Result<f64> {
    let key = CritvalKey::new(scheme, kind, alpha, w, cfg);
    if let Some(cache) = cache {
        if let Some(hit) = cache.get(&key)? {
            return Ok(hit);
        }
    }
    let rows = simulate_statistics(scheme, &exp1(), kind, alpha, &[w], cfg, &["null", &scheme.to_string()])?;
    let value = upper_quantile(rows.into_iter().map(|r| r[0]).collect(), cfg.level);
    if let Some(cache) = cache {
        cache.put(&key, value)?;
    }
    Ok(value)
}

/// P(statistic > observed | exponential null), estimated over `cfg.reps`
/// null replicates. Nonincreasing in `observed` by construction.
pub fn p_value(
    observed: f64,
    scheme: &CensoringScheme,
    kind: StatisticKind,
    alpha: Option<f64>,
    w: usize,
    cfg: &McConfig,
) -> Result<f64> {
    let rows = simulate_statistics(scheme, &exp1(), kind, alpha, &[w], cfg, &["null", &scheme.to_string()])?;
    let exceed = rows.iter().filter(|r| r[0] > observed).count();
    Ok(exceed as f64 / cfg.reps as f64)
}

/// The candidate window minimizing the critical value, ties broken toward
/// smaller w. All candidates are evaluated on common replicate samples.
pub fn select_window(
    scheme: &CensoringScheme,
    kind: StatisticKind,
    alpha: Option<f64>,
    cfg: &McConfig,
    candidates: &[usize],
) -> Result<usize> {
    if candidates.is_empty() {
        return Err(Error::EmptyCandidates);
    }
    let mut ws: Vec<usize> = candidates.to_vec();
    ws.sort_unstable();
    ws.dedup();
    let rows = simulate_statistics(scheme, &exp1(), kind, alpha, &ws, cfg, &["null", &scheme.to_string()])?;
    let mut best = (f64::INFINITY, usize::MAX);
    for (col, &w) in ws.iter().enumerate() {
        let crit = upper_quantile(rows.iter().map(|r| r[col]).collect(), cfg.level);
        if crit < best.0 {
            best = (crit, w);
        }
    }
    Ok(best.1)
}

/// One requested power-study cell.
#[derive(Debug, Clone)]
pub struct PowerCell {
    pub scheme: CensoringScheme,
    pub alternative: Distribution,
    pub kind: StatisticKind,
    pub alpha: Option<f64>,
    pub w: usize,
}

/// One computed row: rejection rate with its Monte Carlo standard error, or
/// the per-cell failure.
#[derive(Debug, Clone)]
pub struct PowerRow {
    pub cell: PowerCell,
    pub power: Option<f64>,
    pub se: Option<f64>,
    pub critical_value: Option<f64>,
    pub error: Option<String>,
}

/// Results of a power study.
#[derive(Debug, Clone)]
pub struct PowerTable {
    pub rows: Vec<PowerRow>,
    pub reps: usize,
    pub seed: u64,
    pub level: f64,
}

/// For each cell: simulate the null critical value, then the rejection rate
/// over `cfg.reps` samples from the alternative. Cells fail independently.
///
/// Alternative samples are keyed by (scheme, alternative) only, so different
/// statistics are compared on common random numbers.
pub fn power_study(cells: &[PowerCell], cfg: &McConfig, cache: Option<&CritvalCache>) -> Result<PowerTable> {
    cfg.validate()?;
    let mut rows = Vec::with_capacity(cells.len());
    for cell in cells {
        let outcome = power_cell(cell, cfg, cache);
        rows.push(match outcome {
            Ok((power, crit)) => PowerRow {
                cell: cell.clone(),
                power: Some(power),
                se: Some((power * (1.0 - power) / cfg.reps as f64).sqrt()),
                critical_value: Some(crit),
                error: None,
            },
            Err(e) => PowerRow {
                cell: cell.clone(),
                power: None,
                se: None,
                critical_value: None,
                error: Some(e.to_string()),
            },
        });
    }
    Ok(PowerTable { rows, reps: cfg.reps, seed: cfg.seed, level: cfg.level })
}

fn power_cell(cell: &PowerCell, cfg: &McConfig, cache: Option<&CritvalCache>) -> Result<(f64, f64)> {
    let crit = critical_value(&cell.scheme, cell.kind, cell.alpha, cell.w, cfg, cache)?;
    let rows = simulate_statistics(
        &cell.scheme,
        &cell.alternative,
        cell.kind,
        cell.alpha,
        &[cell.w],
        cfg,
        &["alt", &cell.scheme.to_string(), &cell.alternative.to_string()],
    )?;
    let rejections = rows.iter().filter(|r| r[0] > crit).count();
    Ok((rejections as f64 / cfg.reps as f64, crit))
}

/// Cache key and JSON document for a critical value.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CritvalKey {
    pub scheme: String,
    pub kind: StatisticKind,
    pub alpha: Option<f64>,
    pub w: usize,
    pub level: f64,
    pub reps: usize,
    pub seed: u64,
}

impl CritvalKey {
    fn new(scheme: &CensoringScheme, kind: StatisticKind, alpha: Option<f64>, w: usize, cfg: &McConfig) -> Self {
        Self {
            scheme: scheme.to_string(),
            kind,
            alpha,
            w,
            level: cfg.level,
            reps: cfg.reps,
            seed: cfg.seed,
        }
    }

    fn file_name(&self) -> String {
        use sha2::{Digest, Sha256};
        let canon = format!(
            "{}|{}|{:?}|{}|{}|{}|{}",
            self.scheme, self.kind, self.alpha, self.w, self.level, self.reps, self.seed
        );
        let digest = Sha256::digest(canon.as_bytes());
        let hex: String = digest.iter().take(12).map(|b| format!("{b:02x}")).collect();
        format!("critval-{hex}.json")
    }
}

/// On-disk critical value document.
#[derive(Debug, Serialize, Deserialize)]
pub struct CritvalRecord {
    #[serde(flatten)]
    pub key: CritvalKey,
    pub value: f64,
    pub quantile_rule: String,
}

/// Directory-backed cache of critical values, one JSON document per key.
#[derive(Debug, Clone)]
pub struct CritvalCache {
    dir: PathBuf,
}

impl CritvalCache {
    pub fn new(dir: impl AsRef<Path>) -> Result<Self> {
        std::fs::create_dir_all(dir.as_ref())?;
        Ok(Self { dir: dir.as_ref().to_path_buf() })
    }

    pub fn get(&self, key: &CritvalKey) -> Result<Option<f64>> {
        let path = self.dir.join(key.file_name());
        if !path.exists() {
            return Ok(None);
        }
        let text = std::fs::read_to_string(path)?;
        let record: CritvalRecord = serde_json::from_str(&text)?;
        // hash collisions or hand-edited files: only trust exact key matches
        Ok((record.key == *key).then_some(record.value))
    }

    pub fn put(&self, key: &CritvalKey, value: f64) -> Result<()> {
        let record = CritvalRecord {
            key: key.clone(),
            value,
            quantile_rule: "ceil((1-level)*reps)-th order statistic".into(),
        };
        let path = self.dir.join(key.file_name());
        std::fs::write(path, serde_json::to_string_pretty(&record)?)?;
        Ok(())
    }
}

/// The scheme and alternative enumerations of the three power tables
/// (sample sizes 10, 20, 30).
pub mod tables {
    use super::*;

    /// Schemes of table 1, 2 or 3.
    pub fn schemes(table: u8) -> Result<Vec<CensoringScheme>> {
        let specs: &[(usize, usize, &[usize])] = match table {
            1 => &[
                (10, 5, &[5, 0, 0, 0, 0]),
                (10, 5, &[0, 5, 0, 0, 0]),
                (10, 5, &[1, 1, 1, 1, 1]),
                (10, 5, &[0, 0, 0, 5, 0]),
                (10, 5, &[0, 0, 0, 0, 5]),
                (10, 8, &[2, 0, 0, 0, 0, 0, 0, 0]),
                (10, 8, &[0, 2, 0, 0, 0, 0, 0, 0]),
                (10, 8, &[1, 0, 0, 0, 0, 0, 0, 1]),
                (10, 8, &[0, 0, 0, 0, 0, 0, 2, 0]),
                (10, 8, &[0, 0, 0, 0, 0, 0, 0, 2]),
            ],
            2 => &[
                (20, 5, &[15, 0, 0, 0, 0]),
                (20, 5, &[0, 15, 0, 0, 0]),
                (20, 5, &[3, 3, 3, 3, 3]),
                (20, 5, &[0, 0, 0, 15, 0]),
                (20, 5, &[0, 0, 0, 0, 15]),
                (20, 10, &[10, 0, 0, 0, 0, 0, 0, 0, 0, 0]),
                (20, 10, &[0, 10, 0, 0, 0, 0, 0, 0, 0, 0]),
                (20, 10, &[1, 1, 1, 1, 1, 1, 1, 1, 1, 1]),
                (20, 10, &[0, 0, 0, 0, 0, 0, 0, 0, 10, 0]),
                (20, 10, &[0, 0, 0, 0, 0, 0, 0, 0, 0, 10]),
            ],
            3 => &[
                (30, 5, &[25, 0, 0, 0, 0]),
                (30, 5, &[0, 25, 0, 0, 0]),
                (30, 5, &[5, 5, 5, 5, 5]),
                (30, 5, &[0, 0, 0, 25, 0]),
                (30, 5, &[0, 0, 0, 0, 25]),
                (30, 15, &[15, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]),
                (30, 15, &[0, 15, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]),
                (30, 15, &[1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1]),
                (30, 15, &[0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 15, 0]),
                (30, 15, &[0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 15]),
            ],
            other => {
                return Err(Error::InvalidParameter(format!("table must be 1, 2 or 3, got {other}")))
            }
        };
        specs.iter().map(|&(n, m, r)| CensoringScheme::new(n, m, r.to_vec())).collect()
    }

    /// The six hazard alternatives, in table column order.
    pub fn alternatives() -> Vec<Distribution> {
        vec![
            Distribution::Gamma { shape: 2.0 },
            Distribution::Weibull { shape: 2.0 },
            Distribution::Gamma { shape: 0.5 },
            Distribution::Weibull { shape: 0.5 },
            Distribution::Beta { a: 0.5, b: 0.5 },
            Distribution::LogNormal { mu: 0.0, sigma: 1.0 },
        ]
    }
}
