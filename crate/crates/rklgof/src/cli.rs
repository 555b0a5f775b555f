//! Command implementations behind the `rklgof` binary.
//!
//! Kept in the library so the full pipeline (parse -> statistic -> critical
//! value -> p-value -> report) is testable without spawning processes.

use std::path::{Path, PathBuf};

use crate::censoring::{CensoringScheme, ProgressiveSample};
use crate::distributions::Distribution;
use crate::entropy::{renyi_entropy_estimate, shannon_entropy_estimate};
use crate::error::{Error, Result};
use crate::gof::{renyi_test_statistic, shannon_test_statistic, StatisticKind};
use crate::mc::{self, CritvalCache, McConfig, PowerCell};
use crate::report::{level_key, sha256_hex, DataEcho, SchemeEcho, StatBlock, TestReport};

/// Environment variable naming the critical-value cache directory. Unset
/// means no on-disk caching.
pub const CACHE_DIR_ENV: &str = "RKLGOF_CACHE_DIR";

pub fn cache_from_env() -> Result<Option<CritvalCache>> {
    match std::env::var_os(CACHE_DIR_ENV) {
        Some(dir) if !dir.is_empty() => Ok(Some(CritvalCache::new(dir)?)),
        _ => Ok(None),
    }
}

/// Which statistics a command should run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum StatChoice {
    Renyi,
    Shannon,
    Both,
}

impl StatChoice {
    pub fn kinds(self) -> Vec<StatisticKind> {
        match self {
            StatChoice::Renyi => vec![StatisticKind::RenyiRkl],
            StatChoice::Shannon => vec![StatisticKind::ShannonKl],
            StatChoice::Both => vec![StatisticKind::RenyiRkl, StatisticKind::ShannonKl],
        }
    }
}

/// `--w` argument: a fixed window or `auto`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowArg {
    Auto,
    Fixed(usize),
}

impl std::str::FromStr for WindowArg {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("auto") {
            Ok(WindowArg::Auto)
        } else {
            let w: usize = s
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("--w expects an integer or `auto`, got `{s}`")))?;
            Ok(WindowArg::Fixed(w))
        }
    }
}

/// Load observations from a CSV file: one value per line, optional header `x`.
pub fn read_data_file(path: &Path) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidData(format!("cannot read {}: {e}", path.display())))?;
    let mut values = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if lineno == 0 && line.eq_ignore_ascii_case("x") {
            continue;
        }
        let v: f64 = line.parse().map_err(|_| {
            Error::InvalidData(format!("{}:{}: not a number: `{line}`", path.display(), lineno + 1))
        })?;
        if !v.is_finite() || v <= 0.0 {
            return Err(Error::InvalidData(format!(
                "{}:{}: observations must be positive and finite, got {v}",
                path.display(),
                lineno + 1
            )));
        }
        values.push(v);
    }
    if values.is_empty() {
        return Err(Error::InvalidData(format!("{}: no observations", path.display())));
    }
    Ok(values)
}

/// Resolve the scheme from `--scheme`, `--scheme-file`, or the `<data>.scheme`
/// sidecar, in that order.
pub fn resolve_scheme(
    literal: Option<&str>,
    scheme_file: Option<&Path>,
    data_path: Option<&Path>,
) -> Result<CensoringScheme> {
    if let Some(lit) = literal {
        return lit.parse();
    }
    if let Some(file) = scheme_file {
        let text = std::fs::read_to_string(file)
            .map_err(|e| Error::InvalidScheme(format!("cannot read {}: {e}", file.display())))?;
        return text.trim().parse();
    }
    if let Some(data) = data_path {
        let sidecar = PathBuf::from(format!("{}.scheme", data.display()));
        if sidecar.exists() {
            let text = std::fs::read_to_string(&sidecar)?;
            return text.trim().parse();
        }
    }
    Err(Error::InvalidScheme(
        "no scheme given: pass --scheme, --scheme-file, or provide a <data>.scheme sidecar".into(),
    ))
}

pub struct TestRequest {
    pub data_path: PathBuf,
    pub scheme: CensoringScheme,
    pub alpha: f64,
    pub w: WindowArg,
    pub levels: Vec<f64>,
    pub stat: StatChoice,
    pub cfg: McConfig,
}

/// Full test pipeline: parse -> statistic -> critical values -> p-value -> report.
pub fn cmd_test(req: &TestRequest, cache: Option<&CritvalCache>) -> Result<TestReport> {
    let raw = std::fs::read(&req.data_path)
        .map_err(|e| Error::InvalidData(format!("cannot read {}: {e}", req.data_path.display())))?;
    let values = read_data_file(&req.data_path)?;
    if values.len() != req.scheme.m() {
        return Err(Error::InvalidData(format!(
            "{}: {} observations but scheme expects m={}",
            req.data_path.display(),
            values.len(),
            req.scheme.m()
        )));
    }
    let sample = ProgressiveSample::new(req.scheme.clone(), values)?;

    let mut levels = req.levels.clone();
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    if levels.is_empty() {
        return Err(Error::InvalidParameter("need at least one significance level".into()));
    }

    let mut blocks = Vec::new();
    for kind in req.stat.kinds() {
        let alpha = match kind {
            StatisticKind::RenyiRkl => Some(req.alpha),
            StatisticKind::ShannonKl => None,
        };
        let candidates: Vec<usize> = (1..req.scheme.m()).collect();
        let (w, w_auto) = match req.w {
            WindowArg::Fixed(w) => (w, false),
            WindowArg::Auto => {
                (mc::select_window(&req.scheme, kind, alpha, &req.cfg, &candidates)?, true)
            }
        };
        let stat = match kind {
            StatisticKind::RenyiRkl => renyi_test_statistic(&sample, req.alpha, w)?,
            StatisticKind::ShannonKl => shannon_test_statistic(&sample, w)?,
        };
        let mut critical_values = std::collections::BTreeMap::new();
        let mut reject = std::collections::BTreeMap::new();
        for &level in &levels {
            let mut cfg = req.cfg;
            cfg.level = level;
            let crit = mc::critical_value(&req.scheme, kind, alpha, w, &cfg, cache)?;
            critical_values.insert(level_key(level), crit);
            reject.insert(level_key(level), stat.value > crit);
        }
        let p = mc::p_value(stat.value, &req.scheme, kind, alpha, w, &req.cfg)?;
        blocks.push(StatBlock {
            kind,
            alpha,
            w,
            w_auto,
            value: stat.value,
            theta_hat: stat.theta_hat.unwrap_or(f64::NAN),
            critical_values,
            p_value: p,
            reject,
        });
    }

    Ok(TestReport {
        scheme: scheme_echo(&req.scheme),
        data: DataEcho {
            path: req.data_path.display().to_string(),
            sha256: sha256_hex(&raw),
            observations: req.scheme.m(),
        },
        reps: req.cfg.reps,
        seed: req.cfg.seed,
        workers: req.cfg.workers,
        statistics: blocks,
        generated_at: std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
    })
}

fn scheme_echo(scheme: &CensoringScheme) -> SchemeEcho {
    SchemeEcho {
        n: scheme.n(),
        m: scheme.m(),
        removals: scheme.removals().to_vec(),
        literal: scheme.to_string(),
    }
}

/// Human-readable summary mirroring the worked-example narrative.
pub fn human_summary(report: &TestReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "scheme {} (reps={}, seed={})\n",
        report.scheme.literal, report.reps, report.seed
    ));
    for block in &report.statistics {
        let name = match block.kind {
            StatisticKind::RenyiRkl => format!("T^a (alpha={}, w={})", block.alpha.unwrap_or(f64::NAN), block.w),
            StatisticKind::ShannonKl => format!("T (w={})", block.w),
        };
        out.push_str(&format!(
            "{name}{} = {:.4}, theta_hat = {:.4}\n",
            if block.w_auto { " [w auto-selected]" } else { "" },
            block.value,
            block.theta_hat
        ));
        for (level, crit) in &block.critical_values {
            let decision = if block.reject[level] { "REJECT exponentiality" } else { "fail to reject" };
            out.push_str(&format!("  level {level}: critical value {crit:.4} -> {decision}\n"));
        }
        out.push_str(&format!("  p-value = {:.4}\n", block.p_value));
    }
    out
}

pub struct CritvalsRequest {
    pub scheme: CensoringScheme,
    pub alpha: f64,
    pub w: WindowArg,
    pub levels: Vec<f64>,
    pub stat: StatChoice,
    pub cfg: McConfig,
}

#[derive(Debug, serde::Serialize)]
pub struct CritvalsReport {
    pub scheme: SchemeEcho,
    pub reps: usize,
    pub seed: u64,
    pub results: Vec<CritvalsBlock>,
}

#[derive(Debug, serde::Serialize)]
pub struct CritvalsBlock {
    pub kind: StatisticKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    pub w: usize,
    pub w_auto: bool,
    /// Ascending by level regardless of input order.
    pub levels: Vec<LevelValue>,
}

#[derive(Debug, serde::Serialize)]
pub struct LevelValue {
    pub level: f64,
    pub critical_value: f64,
}

pub fn cmd_critvals(req: &CritvalsRequest, cache: Option<&CritvalCache>) -> Result<CritvalsReport> {
    let mut levels = req.levels.clone();
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    if levels.is_empty() {
        return Err(Error::InvalidParameter("need at least one significance level".into()));
    }
    let mut results = Vec::new();
    for kind in req.stat.kinds() {
        let alpha = match kind {
            StatisticKind::RenyiRkl => Some(req.alpha),
            StatisticKind::ShannonKl => None,
        };
        let candidates: Vec<usize> = (1..req.scheme.m()).collect();
        let (w, w_auto) = match req.w {
            WindowArg::Fixed(w) => (w, false),
            WindowArg::Auto => {
                (mc::select_window(&req.scheme, kind, alpha, &req.cfg, &candidates)?, true)
            }
        };
        let mut rows = Vec::new();
        for &level in &levels {
            let mut cfg = req.cfg;
            cfg.level = level;
            let value = mc::critical_value(&req.scheme, kind, alpha, w, &cfg, cache)?;
            rows.push(LevelValue { level, critical_value: value });
        }
        results.push(CritvalsBlock { kind, alpha, w, w_auto, levels: rows });
    }
    Ok(CritvalsReport { scheme: scheme_echo(&req.scheme), reps: req.cfg.reps, seed: req.cfg.seed, results })
}

pub enum PowerRequest {
    /// Reproduce a whole table (1, 2 or 3) at the given Rényi order.
    Table { table: u8, alpha: f64 },
    /// A single explicit cell.
    Cell { scheme: CensoringScheme, alternative: Distribution, stat: StatChoice, alpha: f64, w: WindowArg },
}

/// Runs a power study and renders it as CSV with one row per
/// (scheme, alternative, statistic) cell.
pub fn cmd_power(req: &PowerRequest, cfg: &McConfig, cache: Option<&CritvalCache>) -> Result<String> {
    let mut cells = Vec::new();
    match req {
        PowerRequest::Table { table, alpha } => {
            for scheme in mc::tables::schemes(*table)? {
                let candidates: Vec<usize> = (1..scheme.m()).collect();
                for kind in [StatisticKind::ShannonKl, StatisticKind::RenyiRkl] {
                    let a = match kind {
                        StatisticKind::RenyiRkl => Some(*alpha),
                        StatisticKind::ShannonKl => None,
                    };
                    let w = mc::select_window(&scheme, kind, a, cfg, &candidates)?;
                    for alternative in mc::tables::alternatives() {
                        cells.push(PowerCell { scheme: scheme.clone(), alternative, kind, alpha: a, w });
                    }
                }
            }
        }
        PowerRequest::Cell { scheme, alternative, stat, alpha, w } => {
            for kind in stat.kinds() {
                let a = match kind {
                    StatisticKind::RenyiRkl => Some(*alpha),
                    StatisticKind::ShannonKl => None,
                };
                let candidates: Vec<usize> = (1..scheme.m()).collect();
                let w = match w {
                    WindowArg::Fixed(w) => *w,
                    WindowArg::Auto => mc::select_window(scheme, kind, a, cfg, &candidates)?,
                };
                cells.push(PowerCell {
                    scheme: scheme.clone(),
                    alternative: *alternative,
                    kind,
                    alpha: a,
                    w,
                });
            }
        }
    }
    let table = mc::power_study(&cells, cfg, cache)?;
    let mut csv = String::from("n,m,scheme,alternative,statistic,alpha,w,power,se,critical_value,error\n");
    for row in &table.rows {
        let scheme = &row.cell.scheme;
        let removals =
            scheme.removals().iter().map(|r| r.to_string()).collect::<Vec<_>>().join(",");
        let alpha = row.cell.alpha.map(|a| a.to_string()).unwrap_or_default();
        csv.push_str(&format!(
            "{},{},\"{}\",{},{},{},{},{},{},{},{}\n",
            scheme.n(),
            scheme.m(),
            removals,
            row.cell.alternative,
            row.cell.kind,
            alpha,
            row.cell.w,
            row.power.map(|p| format!("{p:.4}")).unwrap_or_default(),
            row.se.map(|s| format!("{s:.4}")).unwrap_or_default(),
            row.critical_value.map(|c| format!("{c:.6}")).unwrap_or_default(),
            row.error.as_deref().map(|e| format!("\"{}\"", e.replace('"', "'"))).unwrap_or_default(),
        ));
    }
    Ok(csv)
}

#[derive(Debug, serde::Serialize)]
pub struct CoeffsReport {
    pub scheme: SchemeEcho,
    pub gamma: Vec<f64>,
    pub c: f64,
    pub log_c: f64,
    pub p: Vec<f64>,
    pub a: Vec<Vec<f64>>,
}

pub fn cmd_coeffs(scheme: &CensoringScheme) -> Result<CoeffsReport> {
    let coeffs = scheme.coefficients()?;
    Ok(CoeffsReport {
        scheme: scheme_echo(scheme),
        gamma: coeffs.gamma,
        c: coeffs.c,
        log_c: coeffs.log_c,
        p: coeffs.p,
        a: coeffs.a,
    })
}

#[derive(Debug, serde::Serialize)]
pub struct EntropyReport {
    pub scheme: SchemeEcho,
    pub alpha: f64,
    pub w: usize,
    pub renyi: f64,
    pub per_term: Vec<f64>,
    pub shannon: f64,
}

/// Debug view of the estimator internals on a data file.
pub fn cmd_entropy(data_path: &Path, scheme: &CensoringScheme, alpha: f64, w: usize) -> Result<EntropyReport> {
    let values = read_data_file(data_path)?;
    let sample = ProgressiveSample::new(scheme.clone(), values)?;
    let est = renyi_entropy_estimate(&sample, alpha, w)?;
    let shannon = shannon_entropy_estimate(&sample, w)?;
    Ok(EntropyReport {
        scheme: scheme_echo(scheme),
        alpha,
        w,
        renyi: est.value,
        per_term: est.per_term,
        shannon,
    })
}
