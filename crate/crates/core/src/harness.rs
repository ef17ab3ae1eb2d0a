//! Reproducible Monte-Carlo experiment harness: estimator sweeps over
//! memory parameters, clean and outlier-contaminated, with empirical
//! asymptotic-relative-efficiency tables and density summaries.
//!
//! Replication `r` of a plan draws its ARFIMA stream from
//! `master_seed ^ r` and (when contamination is on) its outlier positions
//! from a salted SplitMix of the same value, so results are bit-identical
//! regardless of the rayon thread count.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arfima::{generate, inject_outliers, ArfimaConfig, OutlierSpec};
use crate::error::{Error, Result};
use crate::estimator::estimate_d;
use crate::scale::EstimatorKind;
use crate::wavelet::{daubechies_spec, decompose, default_wavelet_m, num_coeffs};

const OUTLIER_SALT: u64 = 0x6f75746c69657273; // "outliers"

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Outlier contamination settings inside a plan; per-replication seeds
/// are derived from the plan's master seed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanOutliers {
    pub fraction: f64,
    pub multiplier: f64,
}

/// A full experiment description; `run_plan` output is a pure function of
/// this value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentPlan {
    pub d_values: Vec<f64>,
    pub n: usize,
    pub reps: usize,
    pub j0: usize,
    pub ell: usize,
    pub kinds: Vec<EstimatorKind>,
    #[serde(default)]
    pub outliers: Option<PlanOutliers>,
    /// Daubechies order; `None` selects per `d` (M = 2 for d <= 2, else 4).
    #[serde(default)]
    pub wavelet_m: Option<usize>,
    pub master_seed: u64,
}

impl ExperimentPlan {
    pub fn validate(&self) -> Result<()> {
        if self.reps < 1 {
            return Err(Error::Config("plan needs at least one replication".into()));
        }
        if self.d_values.is_empty() {
            return Err(Error::Config("plan lists no d values".into()));
        }
        if self.kinds.is_empty() {
            return Err(Error::Config("plan lists no estimator kinds".into()));
        }
        if self.j0 < 1 || self.ell < 1 {
            return Err(Error::Config("plan needs j0 >= 1 and ell >= 1".into()));
        }
        if let Some(out) = &self.outliers {
            if !(0.0..=1.0).contains(&out.fraction) {
                return Err(Error::Config(format!(
                    "outliers.fraction = {} outside [0,1]",
                    out.fraction
                )));
            }
        }
        let min_count = self
            .kinds
            .iter()
            .map(|k| k.min_count())
            .max()
            .unwrap_or(1);
        for &d in &self.d_values {
            ArfimaConfig::split_d(d)?;
            let m = self.wavelet_m.unwrap_or_else(|| default_wavelet_m(d));
            if d > m as f64 {
                return Err(Error::Config(format!(
                    "d = {d} exceeds the M = {m} vanishing moments; \
                     the estimator bias condition cannot hold"
                )));
            }
            let t = 2 * m - 1;
            let coarse = self.j0 + self.ell;
            let avail = num_coeffs(self.n, coarse, t);
            if avail < min_count {
                return Err(Error::Config(format!(
                    "coarse scale {coarse} has only {avail} coefficients at n = {} (need {min_count})",
                    self.n
                )));
            }
        }
        Ok(())
    }

    /// ARFIMA stream seed of one replication.
    pub fn rep_seed(&self, rep: usize) -> u64 {
        self.master_seed ^ rep as u64
    }

    fn outlier_seed(&self, rep: usize) -> u64 {
        splitmix64(self.rep_seed(rep) ^ OUTLIER_SALT)
    }
}

/// Aggregates of one (d, kind, clean-or-contaminated) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellStats {
    pub mean: f64,
    pub bias: f64,
    /// Sample variance of `d_hat` (denominator reps-1).
    pub variance: f64,
    /// Standardized errors `sqrt(n 2^-J0) (d_hat - d)`, one per surviving
    /// replication.
    pub standardized: Vec<f64>,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub d: f64,
    pub kind: EstimatorKind,
    pub contaminated: bool,
    pub stats: CellStats,
}

/// One row of the empirical asymptotic-relative-efficiency table:
/// clean-case variance ratios `Var(d_CL) / Var(d_*)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AreRow {
    pub d: f64,
    pub are_cr: Option<f64>,
    pub are_mad: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub plan: ExperimentPlan,
    pub cells: Vec<CellResult>,
    pub are: Vec<AreRow>,
    pub total_failures: usize,
    /// Wall-clock metadata; not part of the reproducible content.
    pub runtime_secs: f64,
}

impl ExperimentResult {
    pub fn cell(&self, d: f64, kind: EstimatorKind, contaminated: bool) -> Option<&CellStats> {
        self.cells
            .iter()
            .find(|c| c.d == d && c.kind == kind && c.contaminated == contaminated)
            .map(|c| &c.stats)
    }
}

// Per-replication estimates: Ok(d_hat) or an error note.
type RepKindResults = Vec<std::result::Result<f64, String>>;

/// Runs every replication of the plan; deterministic given the plan.
pub fn run_plan(plan: &ExperimentPlan) -> Result<ExperimentResult> {
    let start = Instant::now();
    plan.validate()?;
    let scaling = (plan.n as f64 * 2.0f64.powi(-(plan.j0 as i32))).sqrt();
    let mut cells = Vec::new();
    let mut are = Vec::new();
    let mut total_failures = 0usize;
    for &d in &plan.d_values {
        let m = plan.wavelet_m.unwrap_or_else(|| default_wavelet_m(d));
        let spec = daubechies_spec::<f64>(m)?;
        let per_rep: Vec<(RepKindResults, Option<RepKindResults>)> = (0..plan.reps)
            .into_par_iter()
            .map(|rep| {
                let cfg = ArfimaConfig { d, n: plan.n, seed: plan.rep_seed(rep), innovation_sd: 1.0 };
                let run_kinds = |series: &crate::series::TimeSeries<f64>| -> RepKindResults {
                    match decompose(series, &spec, plan.j0 + plan.ell) {
                        Ok(pyr) => plan
                            .kinds
                            .iter()
                            .map(|&kind| {
                                estimate_d(&pyr, plan.j0, plan.ell, kind)
                                    .map(|e| e.d_hat)
                                    .map_err(|e| e.to_string())
                            })
                            .collect(),
                        Err(e) => vec![Err(e.to_string()); plan.kinds.len()],
                    }
                };
                match generate::<f64>(&cfg) {
                    Ok(series) => {
                        let clean = run_kinds(&series);
                        let contaminated = plan.outliers.map(|out| {
                            let ospec = OutlierSpec {
                                fraction: out.fraction,
                                magnitude_multiplier: out.multiplier,
                                seed: plan.outlier_seed(rep),
                            };
                            match inject_outliers(&series, &ospec) {
                                Ok((corrupted, _)) => run_kinds(&corrupted),
                                Err(e) => vec![Err(e.to_string()); plan.kinds.len()],
                            }
                        });
                        (clean, contaminated)
                    }
                    Err(e) => {
                        let errs = vec![Err(e.to_string()); plan.kinds.len()];
                        (errs.clone(), plan.outliers.map(|_| errs.clone()))
                    }
                }
            })
            .collect();
        for (ki, &kind) in plan.kinds.iter().enumerate() {
            for contaminated in [false, true] {
                if contaminated && plan.outliers.is_none() {
                    continue;
                }
                let samples: Vec<&std::result::Result<f64, String>> = per_rep
                    .iter()
                    .map(|(clean, contam)| {
                        if contaminated {
                            &contam.as_ref().expect("contaminated results present")[ki]
                        } else {
                            &clean[ki]
                        }
                    })
                    .collect();
                let stats = aggregate(d, scaling, plan.reps, &samples)?;
                total_failures += stats.failures;
                cells.push(CellResult { d, kind, contaminated, stats });
            }
        }
        are.push(are_row(d, &cells));
    }
    Ok(ExperimentResult {
        plan: plan.clone(),
        cells,
        are,
        total_failures,
        runtime_secs: start.elapsed().as_secs_f64(),
    })
}

fn aggregate(
    d: f64,
    scaling: f64,
    reps: usize,
    samples: &[&std::result::Result<f64, String>],
) -> Result<CellStats> {
    let ok: Vec<f64> = samples.iter().filter_map(|r| r.as_ref().ok()).copied().collect();
    let failures = reps - ok.len();
    if failures as f64 > 0.01 * reps as f64 {
        let first = samples
            .iter()
            .find_map(|r| r.as_ref().err())
            .cloned()
            .unwrap_or_default();
        return Err(Error::Experiment(format!(
            "{failures}/{reps} replications failed at d = {d} (first failure: {first})"
        )));
    }
    let count = ok.len();
    let mean = ok.iter().sum::<f64>() / count as f64;
    let variance = if count > 1 {
        ok.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (count - 1) as f64
    } else {
        0.0
    };
    Ok(CellStats {
        mean,
        bias: mean - d,
        variance,
        standardized: ok.iter().map(|v| scaling * (v - d)).collect(),
        failures,
    })
}

fn are_row(d: f64, cells: &[CellResult]) -> AreRow {
    let var = |kind: EstimatorKind| -> Option<f64> {
        cells
            .iter()
            .find(|c| c.d == d && c.kind == kind && !c.contaminated)
            .map(|c| c.stats.variance)
    };
    let cl = var(EstimatorKind::Cl);
    let ratio = |k: EstimatorKind| -> Option<f64> {
        match (cl, var(k)) {
            (Some(num), Some(den)) if den > 0.0 => Some(num / den),
            _ => None,
        }
    };
    AreRow { d, are_cr: ratio(EstimatorKind::Cr), are_mad: ratio(EstimatorKind::Mad) }
}

/// Kernel-density summary of the standardized errors of one cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityCurve {
    pub d: f64,
    pub kind: EstimatorKind,
    pub contaminated: bool,
    pub grid: Vec<f64>,
    pub density: Vec<f64>,
    pub median: f64,
    pub sd: f64,
    pub bandwidth: f64,
}

/// Runs the plan and summarizes the standardized-error distributions with
/// Gaussian-kernel densities (Silverman bandwidth), clean and
/// contaminated.
pub fn density_experiment(plan: &ExperimentPlan) -> Result<(ExperimentResult, Vec<DensityCurve>)> {
    if plan.reps < 500 {
        return Err(Error::Config(format!(
            "density summaries need at least 500 replications (got {})",
            plan.reps
        )));
    }
    let result = run_plan(plan)?;
    let mut curves = Vec::new();
    for cell in &result.cells {
        curves.push(kde_curve(cell));
    }
    Ok((result, curves))
}

fn kde_curve(cell: &CellResult) -> DensityCurve {
    let xs = &cell.stats.standardized;
    let m = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / m;
    let sd = (xs.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (m - 1.0)).sqrt();
    let mut sorted = xs.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let quantile = |q: f64| -> f64 {
        let pos = q * (sorted.len() - 1) as f64;
        let lo = pos.floor() as usize;
        let hi = pos.ceil() as usize;
        let frac = pos - lo as f64;
        sorted[lo] * (1.0 - frac) + sorted[hi] * frac
    };
    let median = quantile(0.5);
    let iqr = quantile(0.75) - quantile(0.25);
    let spread = sd.min(iqr / 1.34).max(f64::MIN_POSITIVE);
    let bandwidth = 0.9 * spread * m.powf(-0.2);
    let lo = sorted[0] - 3.0 * bandwidth;
    let hi = sorted[sorted.len() - 1] + 3.0 * bandwidth;
    let points = 256usize;
    let step = (hi - lo) / (points - 1) as f64;
    let norm = 1.0 / (m * bandwidth * (2.0 * std::f64::consts::PI).sqrt());
    let mut grid = Vec::with_capacity(points);
    let mut density = Vec::with_capacity(points);
    for i in 0..points {
        let x = lo + step * i as f64;
        let val = xs
            .iter()
            .map(|&v| {
                let z = (x - v) / bandwidth;
                (-0.5 * z * z).exp()
            })
            .sum::<f64>()
            * norm;
        grid.push(x);
        density.push(val);
    }
    DensityCurve {
        d: cell.d,
        kind: cell.kind,
        contaminated: cell.contaminated,
        grid,
        density,
        median,
        sd,
        bandwidth,
    }
}
