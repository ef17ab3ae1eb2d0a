//! The wavelet log-regression estimator of the memory parameter:
//! per-scale spectrum, regression weights, the point estimate
//! `d_hat = sum_j w_{j-J0} log sigma2_hat_j`, confidence intervals and the
//! nested-confidence-interval J0 selection heuristic.

use serde::{Deserialize, Serialize};

use crate::asympvar::{self, CovParams};
use crate::error::{Error, Result};
use crate::numeric::special::norm_quantile;
use crate::scale::{EstimatorKind, ScaleSpectrum};
use crate::wavelet::{num_coeffs, ScalePyramid};
use crate::Scalar;

/// Regression weights `w_0..w_ell` with `sum w_i = 0` and
/// `2 log(2) sum i w_i = 1`; on an exactly log-linear spectrum the
/// estimator is exact for any intercept.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionWeights<F> {
    w: Vec<F>,
}

impl<F: Scalar> RegressionWeights<F> {
    pub fn values(&self) -> &[F] {
        &self.w
    }

    pub fn ell(&self) -> usize {
        self.w.len() - 1
    }

    fn validated(w: Vec<F>) -> Result<Self> {
        let tol = F::of(1e-12).max(F::epsilon() * F::of(128.0));
        let sum: F = w.iter().copied().sum();
        let slope: F = w
            .iter()
            .enumerate()
            .map(|(i, &wi)| F::of_usize(i) * wi)
            .sum();
        let two_log2 = F::two() * F::LN_2();
        if sum.abs() > tol || (two_log2 * slope - F::one()).abs() > tol {
            return Err(Error::Numeric(format!(
                "weight constraints violated: sum = {sum:e}, 2 log2 slope - 1 = {:e}",
                two_log2 * slope - F::one()
            )));
        }
        Ok(Self { w })
    }
}

/// Generalized-least-squares weights `w = D B (B^T D B)^{-1} b` for the
/// design `B = [1 i]`, `b = [0, (2 log 2)^{-1}]`, with an arbitrary
/// positive diagonal `D`.
pub fn weights_with_diag<F: Scalar>(ell: usize, diag: &[F]) -> Result<RegressionWeights<F>> {
    if ell < 1 {
        return Err(Error::Config("regression needs ell >= 1 (two scales)".into()));
    }
    if diag.len() != ell + 1 {
        return Err(Error::Config(format!(
            "diagonal length {} does not match ell + 1 = {}",
            diag.len(),
            ell + 1
        )));
    }
    if diag.iter().any(|&v| v <= F::zero()) {
        return Err(Error::Config("diagonal entries must be positive".into()));
    }
    let mut s0 = F::zero();
    let mut s1 = F::zero();
    let mut s2 = F::zero();
    for (i, &di) in diag.iter().enumerate() {
        let fi = F::of_usize(i);
        s0 += di;
        s1 += fi * di;
        s2 += fi * fi * di;
    }
    let det = s0 * s2 - s1 * s1;
    if det.abs() <= F::epsilon() * s0 * s2 {
        return Err(Error::Numeric("singular 2x2 weighted design system".into()));
    }
    let c = F::one() / (F::two() * F::LN_2());
    let v0 = -s1 * c / det;
    let v1 = s0 * c / det;
    let w: Vec<F> = diag
        .iter()
        .enumerate()
        .map(|(i, &di)| di * (v0 + v1 * F::of_usize(i)))
        .collect();
    RegressionWeights::validated(w)
}

/// Default weights: the diagonal `D_ii = 2^{-i}` recommended as a good
/// approximation of the optimal design.
pub fn default_weights<F: Scalar>(ell: usize) -> Result<RegressionWeights<F>> {
    let diag: Vec<F> = (0..=ell)
        .map(|i| F::of(2.0f64.powi(-(i as i32))))
        .collect();
    weights_with_diag(ell, &diag)
}

/// Per-scale spectrum estimates on scales `j0..=j0+ell`.
pub fn scale_spectrum<F: Scalar>(
    pyr: &ScalePyramid<F>,
    j0: usize,
    ell: usize,
    kind: EstimatorKind,
) -> Result<ScaleSpectrum<F>> {
    if j0 < 1 {
        return Err(Error::Config("j0 must be at least 1".into()));
    }
    if ell < 1 {
        return Err(Error::Config("ell must be at least 1".into()));
    }
    let mut values = Vec::with_capacity(ell + 1);
    let mut counts = Vec::with_capacity(ell + 1);
    for j in j0..=j0 + ell {
        let coeffs = pyr.detail(j).filter(|c| !c.is_empty()).ok_or_else(|| {
            let t = pyr.spec().support_length();
            Error::ScaleRange {
                scale: j,
                detail: format!(
                    "scale absent from pyramid (n_j = {} for n = {})",
                    num_coeffs(pyr.n(), j, t),
                    pyr.n()
                ),
            }
        })?;
        if coeffs.len() < kind.min_count() {
            return Err(Error::ScaleRange {
                scale: j,
                detail: format!(
                    "{} coefficients available but the {kind} estimator needs at least {}",
                    coeffs.len(),
                    kind.min_count()
                ),
            });
        }
        values.push(kind.apply(coeffs)?);
        counts.push(coeffs.len());
    }
    ScaleSpectrum::new(j0, values, counts, kind)
}

/// Memory-parameter estimate with the regression configuration that
/// produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemoryEstimate<F> {
    pub d_hat: F,
    pub kind: EstimatorKind,
    pub j0: usize,
    pub ell: usize,
    pub weights: RegressionWeights<F>,
    pub se: Option<F>,
    pub ci: Option<(F, F)>,
    pub ci_level: Option<f64>,
    pub spectrum: ScaleSpectrum<F>,
}

/// Log-regression of a spectrum against the scale index with the given
/// weights (natural logs; the `2 log 2` normalization is inside the
/// weights).
pub fn estimate_from_spectrum<F: Scalar>(
    spectrum: &ScaleSpectrum<F>,
    weights: &RegressionWeights<F>,
) -> Result<F> {
    if weights.ell() + 1 != spectrum.len() {
        return Err(Error::Config(format!(
            "weights cover {} scales but the spectrum has {}",
            weights.ell() + 1,
            spectrum.len()
        )));
    }
    let mut acc = F::zero();
    for (i, (&v, &w)) in spectrum.values().iter().zip(weights.values()).enumerate() {
        if v <= F::zero() {
            return Err(Error::Estimation {
                scale: Some(spectrum.j0() + i),
                detail: format!("non-positive scale estimate {v} cannot be log-regressed"),
            });
        }
        acc += w * v.ln();
    }
    Ok(acc)
}

/// Point estimate of `d` by weighted log-regression of the scale spectrum
/// over scales `j0..=j0+ell`.
pub fn estimate_d<F: Scalar>(
    pyr: &ScalePyramid<F>,
    j0: usize,
    ell: usize,
    kind: EstimatorKind,
) -> Result<MemoryEstimate<F>> {
    let spectrum = scale_spectrum(pyr, j0, ell, kind)?;
    let weights = default_weights::<F>(ell)?;
    let d_hat = estimate_from_spectrum(&spectrum, &weights)?;
    Ok(MemoryEstimate {
        d_hat,
        kind,
        j0,
        ell,
        weights,
        se: None,
        ci: None,
        ci_level: None,
        spectrum,
    })
}

/// How confidence intervals are produced.
#[derive(Debug, Clone, PartialEq)]
pub enum CiEngine {
    /// Point estimate only.
    None,
    /// Empirical variance of the standardized estimator over seeded
    /// ARFIMA(0, d_hat, 0) replications (the default engine).
    MonteCarlo { reps: usize, seed: u64 },
    /// Asymptotic covariance matrix `V_*(d_hat)` from the CLT.
    Analytic { params: CovParams },
}

/// Point estimate plus a confidence interval at the given level.
///
/// Engine failures (for example a plug-in `d_hat` whose fractional part
/// falls on the non-simulable +-1/2 boundary) degrade to the point
/// estimate; the returned warnings say why.
pub fn estimate_with_ci<F: Scalar>(
    pyr: &ScalePyramid<F>,
    j0: usize,
    ell: usize,
    kind: EstimatorKind,
    engine: &CiEngine,
    level: f64,
) -> Result<(MemoryEstimate<F>, Vec<String>)> {
    if !(0.0 < level && level < 1.0) {
        return Err(Error::Config(format!("confidence level {level} outside (0,1)")));
    }
    let mut estimate = estimate_d(pyr, j0, ell, kind)?;
    let mut warnings = Vec::new();
    let d_hat = estimate.d_hat.to_f64().expect("scalar converts to f64");
    let variance = match engine {
        CiEngine::None => None,
        CiEngine::MonteCarlo { reps, seed } => {
            match asympvar::mc_variance(
                d_hat,
                pyr.n(),
                j0,
                ell,
                kind,
                *reps,
                *seed,
                Some(pyr.spec().vanishing_moments()),
            ) {
                Ok(v) => Some(v),
                Err(e) => {
                    warnings.push(format!("Monte-Carlo CI engine failed, point estimate only: {e}"));
                    None
                }
            }
        }
        CiEngine::Analytic { params } => {
            match asympvar::cov_v::<F>(F::of(d_hat), ell, kind, pyr.spec(), params) {
                Ok(cov) => {
                    warnings.extend(cov.warnings().iter().cloned());
                    let q = cov.quadratic_form(&estimate.weights);
                    Some(q.to_f64().expect("scalar converts to f64"))
                }
                Err(e) => {
                    warnings.push(format!("analytic CI engine failed, point estimate only: {e}"));
                    None
                }
            }
        }
    };
    if let Some(v) = variance {
        let eff = pyr.n() as f64 * 2.0f64.powi(-(j0 as i32));
        let se = (v / eff).sqrt();
        let z = norm_quantile(0.5 * (1.0 + level));
        estimate.se = Some(F::of(se));
        estimate.ci = Some((F::of(d_hat - z * se), F::of(d_hat + z * se)));
        estimate.ci_level = Some(level);
    }
    Ok((estimate, warnings))
}

/// Estimates with confidence intervals for every `J0 = 1..coarse-1` with
/// the coarse scale held fixed (`ell = coarse - J0`).
pub fn j0_scan<F: Scalar>(
    pyr: &ScalePyramid<F>,
    coarse: usize,
    kind: EstimatorKind,
    engine: &CiEngine,
    level: f64,
) -> Result<(Vec<MemoryEstimate<F>>, Vec<String>)> {
    if coarse < 2 {
        return Err(Error::Config("coarse scale must be at least 2".into()));
    }
    let mut estimates = Vec::with_capacity(coarse - 1);
    let mut warnings = Vec::new();
    for j0 in 1..coarse {
        let (est, mut w) = estimate_with_ci(pyr, j0, coarse - j0, kind, engine, level)?;
        estimates.push(est);
        warnings.append(&mut w);
    }
    Ok((estimates, warnings))
}

/// The nested-confidence-interval selection rule: the smallest `J0` such
/// that every confidence interval from `J0` on is contained in the widest
/// interval of that tail. Reported as a recommendation, never applied
/// silently. `None` when some interval is missing.
pub fn recommended_j0<F: Scalar>(estimates: &[MemoryEstimate<F>]) -> Option<usize> {
    if estimates.is_empty() || estimates.iter().any(|e| e.ci.is_none()) {
        return None;
    }
    for start in 0..estimates.len() {
        let tail = &estimates[start..];
        let widest = tail
            .iter()
            .map(|e| e.ci.unwrap())
            .max_by(|a, b| {
                (a.1 - a.0)
                    .partial_cmp(&(b.1 - b.0))
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap();
        if tail
            .iter()
            .all(|e| {
                let (lo, hi) = e.ci.unwrap();
                widest.0 <= lo && hi <= widest.1
            })
        {
            return Some(estimates[start].j0);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scale::ScaleSpectrum;
    use approx::assert_abs_diff_eq;

    #[test]
    fn weights_identity_diag_ell_1() {
        let w = weights_with_diag(1, &[1.0f64, 1.0]).unwrap();
        let c = 1.0 / (2.0 * std::f64::consts::LN_2);
        assert_abs_diff_eq!(w.values()[0], -c, epsilon = 1e-14);
        assert_abs_diff_eq!(w.values()[1], c, epsilon = 1e-14);
        assert_abs_diff_eq!(c, 0.72135, epsilon = 1e-5);
    }

    #[test]
    fn weight_constraints_hold() {
        for ell in 1..=8 {
            let w = default_weights::<f64>(ell).unwrap();
            let sum: f64 = w.values().iter().sum();
            let slope: f64 = w.values().iter().enumerate().map(|(i, &v)| i as f64 * v).sum();
            assert!(sum.abs() < 1e-12, "ell={ell}: sum {sum}");
            assert!((2.0 * std::f64::consts::LN_2 * slope - 1.0).abs() < 1e-12);
        }
    }

    // independent weighted-least-squares oracle: the weights must
    // reproduce the slope of a weighted linear fit of any response
    #[test]
    fn weights_match_generic_wls_slope() {
        let ell = 5usize;
        let diag: Vec<f64> = (0..=ell).map(|i| 2.0f64.powi(-(i as i32))).collect();
        let w = weights_with_diag(ell, &diag).unwrap();
        let y: Vec<f64> = (0..=ell).map(|i| 0.7 - 1.3 * i as f64 + ((i * i) % 3) as f64 * 0.11).collect();
        // closed-form weighted least squares for intercept + slope
        let s0: f64 = diag.iter().sum();
        let s1: f64 = diag.iter().enumerate().map(|(i, d)| i as f64 * d).sum();
        let s2: f64 = diag.iter().enumerate().map(|(i, d)| (i * i) as f64 * d).sum();
        let t0: f64 = diag.iter().zip(&y).map(|(d, yv)| d * yv).sum();
        let t1: f64 = diag.iter().enumerate().zip(&y).map(|((i, d), yv)| i as f64 * d * yv).sum();
        let slope = (s0 * t1 - s1 * t0) / (s0 * s2 - s1 * s1);
        let from_weights: f64 = w.values().iter().zip(&y).map(|(&wi, &yv)| wi * yv).sum();
        assert_abs_diff_eq!(from_weights, slope / (2.0 * std::f64::consts::LN_2), epsilon = 1e-12);
    }

    #[test]
    fn exact_on_exact_log_linear_spectra() {
        for &(c0, d) in &[(3.0, 0.7), (0.4, -0.3), (12.0, 2.2)] {
            for ell in 1..=6usize {
                let j0 = 3usize;
                let values: Vec<f64> = (0..=ell)
                    .map(|i| c0 * 2.0f64.powf(2.0 * ((j0 + i) as f64) * d))
                    .collect();
                let counts = vec![10usize; ell + 1];
                let spec = ScaleSpectrum::new(j0, values, counts, EstimatorKind::Cl).unwrap();
                let w = default_weights(ell).unwrap();
                let d_hat = estimate_from_spectrum(&spec, &w).unwrap();
                assert_abs_diff_eq!(d_hat, d, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn zero_spectrum_is_rejected_with_scale_index() {
        let spec = ScaleSpectrum::new(2, vec![1.0f64, 0.0, 4.0], vec![8, 8, 8], EstimatorKind::Cl).unwrap();
        let w = default_weights(2).unwrap();
        match estimate_from_spectrum(&spec, &w) {
            Err(Error::Estimation { scale: Some(3), .. }) => {}
            other => panic!("expected estimation error at scale 3, got {other:?}"),
        }
    }

    #[test]
    fn nested_ci_recommendation() {
        let mk = |j0: usize, lo: f64, hi: f64| MemoryEstimate {
            d_hat: 0.5 * (lo + hi),
            kind: EstimatorKind::Cl,
            j0,
            ell: 8 - j0,
            weights: default_weights(8 - j0).unwrap(),
            se: Some(0.1),
            ci: Some((lo, hi)),
            ci_level: Some(0.95),
            spectrum: ScaleSpectrum::new(j0, vec![1.0; 9 - j0], vec![5; 9 - j0], EstimatorKind::Cl)
                .unwrap(),
        };
        // J0 = 1, 2 drift away; from 3 on everything nests in the widest tail interval
        let ests = vec![
            mk(1, 0.00, 0.10),
            mk(2, 0.05, 0.17),
            mk(3, 0.16, 0.30),
            mk(4, 0.17, 0.28),
            mk(5, 0.15, 0.32),
            mk(6, 0.18, 0.31),
            mk(7, 0.14, 0.36),
        ];
        assert_eq!(recommended_j0(&ests), Some(3));
        // identical point estimates with growing widths recommend the smallest J0
        let ests: Vec<_> = (1..=7)
            .map(|j| mk(j, 0.2 - 0.01 * j as f64, 0.2 + 0.01 * j as f64))
            .collect();
        assert_eq!(recommended_j0(&ests), Some(1));
    }
}
