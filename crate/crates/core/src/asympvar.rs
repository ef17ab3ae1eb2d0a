//! Numeric evaluation of the asymptotic covariance machinery behind the
//! estimators' central limit theorems: the wavelet Fourier transform
//! `psi_hat`, the scale constant `K(d)`, the limiting between-scale
//! cross-spectral densities `D_inf`, the covariance matrices `U_*(d)` and
//! `V_*(d)`, the asymptotic relative efficiency, and a Monte-Carlo
//! variance fallback.
//!
//! `K(d)` uses the squared modulus `int |xi|^{-2d} |psi_hat(xi)|^2 dxi`;
//! that is the version the variance algebra and the classical-estimator
//! closed form require (`K(0) = 2 pi` by Parseval).

use num_complex::Complex;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::arfima::{generate, ArfimaConfig};
use crate::error::{Error, Result};
use crate::estimator::{estimate_d, RegressionWeights};
use crate::scale::{hermite_coeffs_upto, if_second_moment, EstimatorKind};
use crate::wavelet::{decompose, default_wavelet_m, daubechies_spec, WaveletSpec};
use crate::Scalar;

// Hermite coefficients below this (relative) size are quadrature noise
// around an exact zero (the influence functions have Hermite rank 2 and
// even symmetry); snapping them keeps the CL p-sum exactly p = 2.
const RANK_CUTOFF: f64 = 1e-10;

/// Fourier transform of the wavelet, `psi_hat(xi) = m1(xi/2) prod_{k>=2}
/// m0(xi/2^k)`, truncating the cascade once the argument is below 1e-6
/// (at least 20 factors).
pub fn psi_hat<F: Scalar>(xi: F, spec: &WaveletSpec<F>) -> Complex<F> {
    let half = F::one() / F::two();
    let mut acc = transfer(spec.highpass(), xi * half);
    let mut arg = xi * half;
    let floor = F::of(1e-6);
    let mut k = 1usize;
    loop {
        arg = arg * half;
        k += 1;
        acc = acc * transfer(spec.lowpass(), arg);
        if k >= 20 && arg.abs() < floor {
            break;
        }
        if k >= 64 {
            break;
        }
    }
    acc
}

// (1/sqrt 2) sum_k taps[k] e^{-i k lambda}, evaluated by Horner on
// e^{-i lambda}.
fn transfer<F: Scalar>(taps: &[F], lambda: F) -> Complex<F> {
    let w = Complex::from_polar(F::one(), -lambda);
    let mut acc = Complex::new(F::zero(), F::zero());
    for &t in taps.iter().rev() {
        acc = acc * w + Complex::new(t, F::zero());
    }
    acc * Complex::new(F::one() / F::SQRT_2(), F::zero())
}

/// `K(d) = int |xi|^{-2d} |psi_hat(xi)|^2 dxi` by adaptive quadrature,
/// split at the origin singularity and at the oscillation bumps.
pub fn k_integral<F: Scalar>(d: F, spec: &WaveletSpec<F>) -> Result<F> {
    check_convergence(d, spec)?;
    let f = {
        let spec = spec.clone();
        move |xi: F| {
            let p = psi_hat(xi, &spec).norm_sqr();
            xi.abs().powf(-F::two() * d) * p
        }
    };
    let pi = F::PI();
    let cut = F::of(64.0) * pi;
    let mut pts = vec![F::zero()];
    let mut x = F::of(0.5);
    while x < cut {
        pts.push(x);
        x = x * F::two();
    }
    pts.push(cut);
    let tol_r = F::of(1e-8);
    let head = crate::numeric::quad::integrate_split(&f, &pts, F::of(1e-12), tol_r)?;
    // the tail is a small fraction of the head: tolerate it in absolute
    // terms relative to the head value
    let tail = crate::numeric::quad::integrate_tail(&f, cut, tol_r * head.abs(), tol_r)?;
    let total = F::two() * (head + tail);
    if !total.is_finite() || total <= F::zero() {
        return Err(Error::Numeric(format!("K(d) quadrature produced {total}")));
    }
    Ok(total)
}

fn check_convergence<F: Scalar>(d: F, spec: &WaveletSpec<F>) -> Result<()> {
    let dd = d.to_f64().expect("scalar converts to f64");
    let m = spec.vanishing_moments() as f64;
    if dd > m {
        return Err(Error::Domain(format!(
            "d = {dd} exceeds the M = {m} vanishing moments; the |xi|^{{-2d}} integral diverges at 0"
        )));
    }
    if dd <= 0.5 - spec.decay_alpha() {
        return Err(Error::Domain(format!(
            "d = {dd} <= 1/2 - alpha = {}: the integral tail diverges for this wavelet",
            0.5 - spec.decay_alpha()
        )));
    }
    Ok(())
}

/// Tabulated between-scale cross-spectral density of the generalized
/// fractional Brownian motion: the `2^u` components
/// `D^(r)_{inf,u}(lambda; d)` on a uniform midpoint grid over `(-pi, pi)`.
#[derive(Debug, Clone)]
pub struct SpectralTable<F> {
    u: usize,
    d: F,
    lambda: Vec<F>,
    /// `values[r][g]`, `r = 0..2^u`, `g` indexing the grid.
    values: Vec<Vec<Complex<F>>>,
    l_max: usize,
    tail_rel: F,
}

impl<F: Scalar> SpectralTable<F> {
    pub fn u(&self) -> usize {
        self.u
    }

    pub fn lambda_grid(&self) -> &[F] {
        &self.lambda
    }

    pub fn component(&self, r: usize) -> &[Complex<F>] {
        &self.values[r]
    }

    pub fn components(&self) -> usize {
        self.values.len()
    }

    pub fn l_max(&self) -> usize {
        self.l_max
    }

    /// Largest modulus of the exactly-computed `(l_max, 2 l_max]` band
    /// relative to the largest partial-sum modulus: the truncation
    /// diagnostic of the l-summation.
    pub fn tail_rel(&self) -> F {
        self.tail_rel
    }

    /// Evaluates one component directly at an arbitrary `lambda`
    /// (same truncation as the table).
    pub fn eval_component(&self, r: usize, lambda: F, spec: &WaveletSpec<F>) -> Complex<F> {
        d_inf_band(self.u, self.d, lambda, spec, 0, self.l_max)[r]
    }
}

// Partial l-summation over the band l_lo <= |l| <= l_hi (l = 0 included
// only when l_lo = 0).
fn d_inf_band<F: Scalar>(
    u: usize,
    d: F,
    lambda: F,
    spec: &WaveletSpec<F>,
    l_lo: usize,
    l_hi: usize,
) -> Vec<Complex<F>> {
    let comps = 1usize << u;
    let two_pi = F::two() * F::PI();
    let scale = F::of(2.0f64.powi(-(u as i32)));
    let norm = F::of(2.0f64.powf(-(u as f64) / 2.0));
    let mut out = vec![Complex::new(F::zero(), F::zero()); comps];
    for l in -(l_hi as i64)..=(l_hi as i64) {
        if (l.unsigned_abs() as usize) < l_lo {
            continue;
        }
        let xi = lambda + two_pi * F::of(l as f64);
        if xi == F::zero() {
            continue; // removable: |psi_hat|^2 |xi|^{-2d} -> 0 for d < M
        }
        let weight = xi.abs().powf(-F::two() * d);
        let factor = psi_hat(xi, spec).conj() * psi_hat(xi * scale, spec)
            * Complex::new(weight * norm, F::zero());
        let rot = Complex::from_polar(F::one(), -xi * scale);
        let mut phase = Complex::new(F::one(), F::zero());
        for item in out.iter_mut() {
            *item += factor * phase;
            phase = phase * rot;
        }
    }
    out
}

/// Tabulates `D_{inf,u}(lambda; d)` on a `grid`-point midpoint grid,
/// truncating the l-summation to `|l| <= l_max` and reporting the
/// relative size of the next band as the truncation diagnostic.
pub fn d_infinity<F: Scalar>(
    u: usize,
    d: F,
    spec: &WaveletSpec<F>,
    grid: usize,
    l_max: usize,
) -> Result<SpectralTable<F>> {
    if l_max < 10 {
        return Err(Error::Config("l_max must be at least 10".into()));
    }
    if grid < 16 {
        return Err(Error::Config("grid must have at least 16 points".into()));
    }
    check_convergence(d, spec)?;
    let comps = 1usize << u;
    let two_pi = F::two() * F::PI();
    let lambda: Vec<F> = (0..grid)
        .map(|g| -F::PI() + (F::of_usize(g) + F::one() / F::two()) * two_pi / F::of_usize(grid))
        .collect();
    let per_point: Vec<Vec<Complex<F>>> = lambda
        .par_iter()
        .map(|&lam| d_inf_band(u, d, lam, spec, 0, l_max))
        .collect();
    // tail diagnostic from the next band, on a subsampled grid
    let stride = (grid / 32).max(1);
    let ext_max: F = lambda
        .par_iter()
        .step_by(stride)
        .map(|&lam| {
            d_inf_band(u, d, lam, spec, l_max + 1, 2 * l_max)
                .iter()
                .map(|z| z.norm())
                .fold(F::zero(), F::max)
        })
        .reduce(F::zero, F::max);
    let mut values = vec![vec![Complex::new(F::zero(), F::zero()); grid]; comps];
    let mut max_partial = F::zero();
    for (g, partial) in per_point.iter().enumerate() {
        for r in 0..comps {
            values[r][g] = partial[r];
            max_partial = max_partial.max(partial[r].norm());
        }
    }
    if !max_partial.is_finite() || max_partial == F::zero() {
        return Err(Error::Numeric("spectral table degenerated".into()));
    }
    Ok(SpectralTable {
        u,
        d,
        lambda,
        values,
        l_max,
        tail_rel: ext_max / max_partial,
    })
}

/// Truncation parameters of the covariance evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CovParams {
    /// Grid size of the spectral tables.
    pub grid: usize,
    /// Half-width of the l-summation in `D_inf`.
    pub l_max: usize,
    /// Largest Hermite order kept in the p-summation.
    pub p_max: usize,
    /// Half-width of the tau-summation over Fourier coefficients.
    pub tau_max: usize,
}

impl Default for CovParams {
    fn default() -> Self {
        Self { grid: 2048, l_max: 64, p_max: 20, tau_max: 512 }
    }
}

impl CovParams {
    fn validate(&self) -> Result<()> {
        if self.p_max < 2 {
            return Err(Error::Config("p_max must be at least 2".into()));
        }
        if self.tau_max + 1 >= self.grid / 2 {
            return Err(Error::Config(format!(
                "tau_max = {} does not fit in a grid of {} points",
                self.tau_max, self.grid
            )));
        }
        Ok(())
    }
}

/// Which covariance the matrix holds: `U_*` (raw scale estimates) or
/// `V_*` (the regression estimator).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CovFlavor {
    U,
    V,
}

/// Symmetric `(ell+1) x (ell+1)` asymptotic covariance matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CovMatrix<F> {
    ell: usize,
    kind: EstimatorKind,
    flavor: CovFlavor,
    entries: Vec<F>,
    params: CovParams,
    residual_rel: f64,
    warnings: Vec<String>,
}

impl<F: Scalar> CovMatrix<F> {
    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn kind(&self) -> EstimatorKind {
        self.kind
    }

    pub fn flavor(&self) -> CovFlavor {
        self.flavor
    }

    pub fn get(&self, i: usize, j: usize) -> F {
        self.entries[i * (self.ell + 1) + j]
    }

    /// Largest reported truncation residual (l-tail, tau-imaginary part,
    /// last p-term), relative.
    pub fn residual_rel(&self) -> f64 {
        self.residual_rel
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// `w^T C w`.
    pub fn quadratic_form(&self, weights: &RegressionWeights<F>) -> F {
        let w = weights.values();
        assert_eq!(w.len(), self.ell + 1, "weight/covariance size mismatch");
        let mut acc = F::zero();
        for i in 0..=self.ell {
            for j in 0..=self.ell {
                acc += w[i] * w[j] * self.get(i, j);
            }
        }
        acc
    }
}

// Normalized tau-spectra: s_p(u) = sum_r sum_tau (a^(r)_tau / K)^p for
// even p, where a^(r)_tau = int D^(r)_{inf,u} e^{i lambda tau} d lambda.
struct TauSpectra<F> {
    // s[u][p/2 - 1]
    s: Vec<Vec<F>>,
    // midpoint-rule value of sum_r int |D_u|^2, for the closed-form route
    norm_sq_integral: Vec<F>,
    tail_rel: f64,
    imag_rel: f64,
    k_value: F,
}

fn tau_spectra<F: Scalar>(
    d: F,
    ell: usize,
    spec: &WaveletSpec<F>,
    params: &CovParams,
) -> Result<TauSpectra<F>> {
    params.validate()?;
    let k_value = k_integral(d, spec)?;
    let grid = params.grid;
    let two_pi = F::two() * F::PI();
    let delta = two_pi / F::of_usize(grid);
    let mut planner = FftPlanner::<F>::new();
    let fft = planner.plan_fft_inverse(grid);
    let mut s = Vec::with_capacity(ell + 1);
    let mut norm_sq_integral = Vec::with_capacity(ell + 1);
    let mut tail_rel = 0.0f64;
    let mut imag_rel = 0.0f64;
    let half_orders = params.p_max / 2;
    for u in 0..=ell {
        let table = d_infinity(u, d, spec, grid, params.l_max)?;
        tail_rel = tail_rel.max(table.tail_rel().to_f64().unwrap_or(f64::NAN));
        let mut su = vec![F::zero(); half_orders];
        let mut nsq = F::zero();
        for r in 0..table.components() {
            let mut buf: Vec<Complex<F>> = table.component(r).to_vec();
            nsq += buf.iter().map(|z| z.norm_sqr()).sum::<F>() * delta;
            fft.process(&mut buf);
            let mut max_re = F::zero();
            let mut max_im = F::zero();
            for tau in -(params.tau_max as i64)..=(params.tau_max as i64) {
                let idx = tau.rem_euclid(grid as i64) as usize;
                let tf = F::of(tau as f64);
                let phase = Complex::from_polar(F::one(), tf * (delta / F::two() - F::PI()));
                let a = buf[idx] * phase * Complex::new(delta, F::zero());
                max_re = max_re.max(a.re.abs());
                max_im = max_im.max(a.im.abs());
                let a_hat = a.re / k_value;
                let a2 = a_hat * a_hat;
                let mut pow = F::one();
                for half_p in 0..half_orders {
                    pow = pow * a2;
                    su[half_p] += pow;
                }
            }
            if max_re > F::zero() {
                imag_rel = imag_rel.max((max_im / max_re).to_f64().unwrap_or(f64::NAN));
            }
        }
        s.push(su);
        norm_sq_integral.push(nsq);
    }
    Ok(TauSpectra { s, norm_sq_integral, tail_rel, imag_rel, k_value })
}

fn prepared_coeffs<F: Scalar>(kind: EstimatorKind, p_max: usize) -> (Vec<F>, F, F) {
    let coeffs: Vec<F> = hermite_coeffs_upto(kind, p_max);
    let eif2: F = if_second_moment(kind).expect("influence second moment quadrature");
    let cutoff = F::of(RANK_CUTOFF);
    let mut snapped = vec![F::zero(); coeffs.len()];
    let mut mass = F::zero();
    for (idx, &c) in coeffs.iter().enumerate() {
        let p = idx + 2;
        let keep = if c.abs() > cutoff { c } else { F::zero() };
        snapped[idx] = keep;
        if p % 2 == 0 {
            mass += keep * keep / fact(p);
        }
    }
    let mut tail_mass = eif2 - mass;
    if tail_mass.abs() < cutoff * eif2 {
        tail_mass = F::zero();
    }
    (snapped, eif2, tail_mass.max(F::zero()))
}

fn fact<F: Scalar>(p: usize) -> F {
    let mut acc = F::one();
    for i in 2..=p {
        acc = acc * F::of_usize(i);
    }
    acc
}

fn two_pow<F: Scalar>(e: F) -> F {
    F::two().powf(e)
}

/// `V_*(d)`: asymptotic covariance of the standardized regression
/// estimator (free of `f*(0)`).
///
/// `V_{i,j} = sum_{p>=2} 4 c_p^2 / (p! K^p) 2^{p d |i-j| + i^j}
/// sum_tau sum_r (int D^(r)_{|i-j|} e^{i lambda tau})^p`, truncated at
/// `p_max` with the diagonal Hermite tail restored in closed form
/// (the tau = 0 term of the `u = 0` bracket is exactly `K^p`).
pub fn cov_v<F: Scalar>(
    d: F,
    ell: usize,
    kind: EstimatorKind,
    spec: &WaveletSpec<F>,
    params: &CovParams,
) -> Result<CovMatrix<F>> {
    let spectra = tau_spectra(d, ell, spec, params)?;
    let (coeffs, _eif2, tail_mass) = prepared_coeffs::<F>(kind, params.p_max);
    let four = F::of(4.0);
    let size = ell + 1;
    let mut entries = vec![F::zero(); size * size];
    let mut last_term_rel = 0.0f64;
    for i in 0..size {
        for j in i..size {
            let u = j - i;
            let mut acc = F::zero();
            let mut last = F::zero();
            for half_p in 0..params.p_max / 2 {
                let p = 2 * (half_p + 1);
                let cp = coeffs[p - 2];
                if cp == F::zero() {
                    continue;
                }
                let weight = four * cp * cp / fact::<F>(p);
                let expo = F::of_usize(p) * d * F::of_usize(u) + F::of_usize(i);
                last = weight * two_pow(expo) * spectra.s[u][half_p];
                acc += last;
            }
            if i == j && tail_mass > F::zero() {
                acc += four * tail_mass * two_pow(F::of_usize(i));
            }
            if acc != F::zero() {
                let rel = (last / acc).to_f64().unwrap_or(f64::NAN).abs();
                if p_truncation_matters(kind) {
                    last_term_rel = last_term_rel.max(rel);
                }
            }
            entries[i * size + j] = acc;
            entries[j * size + i] = acc;
        }
    }
    Ok(finish_matrix(
        ell,
        kind,
        CovFlavor::V,
        entries,
        *params,
        &spectra,
        last_term_rel,
    ))
}

/// `U_*(d)`: asymptotic covariance of the standardized raw scale
/// estimates, with the short-range level `f*(0)` as prefactor.
pub fn cov_u<F: Scalar>(
    d: F,
    ell: usize,
    kind: EstimatorKind,
    fstar0: F,
    spec: &WaveletSpec<F>,
    params: &CovParams,
) -> Result<CovMatrix<F>> {
    let spectra = tau_spectra(d, ell, spec, params)?;
    let (coeffs, _eif2, tail_mass) = prepared_coeffs::<F>(kind, params.p_max);
    let four = F::of(4.0);
    let k2 = spectra.k_value * spectra.k_value;
    let pref = four * fstar0 * fstar0 * k2;
    let size = ell + 1;
    let mut entries = vec![F::zero(); size * size];
    let mut last_term_rel = 0.0f64;
    for i in 0..size {
        for j in i..size {
            let u = j - i;
            let (hi, lo) = (F::of_usize(j), F::of_usize(i));
            let mut acc = F::zero();
            let mut last = F::zero();
            for half_p in 0..params.p_max / 2 {
                let p = 2 * (half_p + 1);
                let cp = coeffs[p - 2];
                if cp == F::zero() {
                    continue;
                }
                let pf = F::of_usize(p);
                let expo = d * (F::two() + pf) * hi + d * (F::two() - pf) * lo + lo;
                last = pref * cp * cp / fact::<F>(p) * two_pow(expo) * spectra.s[u][half_p];
                acc += last;
            }
            if i == j && tail_mass > F::zero() {
                acc += pref * tail_mass * two_pow(four * d * lo + lo);
            }
            if acc != F::zero() && p_truncation_matters(kind) {
                last_term_rel = last_term_rel.max((last / acc).to_f64().unwrap_or(f64::NAN).abs());
            }
            entries[i * size + j] = acc;
            entries[j * size + i] = acc;
        }
    }
    Ok(finish_matrix(
        ell,
        kind,
        CovFlavor::U,
        entries,
        *params,
        &spectra,
        last_term_rel,
    ))
}

// For CL the p-summation is a single exact term; no truncation applies.
fn p_truncation_matters(kind: EstimatorKind) -> bool {
    kind != EstimatorKind::Cl
}

fn finish_matrix<F: Scalar>(
    ell: usize,
    kind: EstimatorKind,
    flavor: CovFlavor,
    entries: Vec<F>,
    params: CovParams,
    spectra: &TauSpectra<F>,
    last_term_rel: f64,
) -> CovMatrix<F> {
    let residual_rel = spectra.tail_rel.max(spectra.imag_rel);
    let mut warnings = Vec::new();
    if residual_rel > 1e-6 {
        warnings.push(format!(
            "spectral truncation residual {residual_rel:.2e} exceeds 1e-6; consider raising l_max/grid"
        ));
    }
    if last_term_rel > 1e-6 {
        warnings.push(format!(
            "last Hermite-order term still contributes {last_term_rel:.2e} relative; consider raising p_max"
        ));
    }
    CovMatrix { ell, kind, flavor, entries, params, residual_rel: residual_rel.max(last_term_rel), warnings }
}

/// Remark-style closed form of `U_CL`:
/// `4 pi f*(0)^2 2^{4d (i v j) + (i ^ j)} int |D_{|i-j|}|^2 d lambda`,
/// an independent reduction used to cross-check the generic p-sum.
pub fn cov_u_cl_closed_form<F: Scalar>(
    d: F,
    ell: usize,
    fstar0: F,
    spec: &WaveletSpec<F>,
    params: &CovParams,
) -> Result<CovMatrix<F>> {
    let spectra = tau_spectra(d, ell, spec, params)?;
    let four = F::of(4.0);
    let size = ell + 1;
    let mut entries = vec![F::zero(); size * size];
    for i in 0..size {
        for j in i..size {
            let u = j - i;
            let expo = four * d * F::of_usize(j) + F::of_usize(i);
            let v = four * F::PI() * fstar0 * fstar0 * two_pow(expo) * spectra.norm_sq_integral[u];
            entries[i * size + j] = v;
            entries[j * size + i] = v;
        }
    }
    Ok(finish_matrix(ell, EstimatorKind::Cl, CovFlavor::U, entries, *params, &spectra, 0.0))
}

/// Empirical variance of `sqrt(n 2^{-J0}) (d_hat - d)` over seeded
/// ARFIMA(0,d,0) replications: the default confidence-interval engine
/// (plug the point estimate in for `d` on real data).
///
/// Replication `r` uses the stream seed `seed ^ r`; the result is
/// independent of the rayon thread count.
#[allow(clippy::too_many_arguments)]
pub fn mc_variance(
    d: f64,
    n: usize,
    j0: usize,
    ell: usize,
    kind: EstimatorKind,
    reps: usize,
    seed: u64,
    wavelet_m: Option<usize>,
) -> Result<f64> {
    if reps < 50 {
        return Err(Error::Config(format!(
            "Monte-Carlo variance needs at least 50 replications (got {reps})"
        )));
    }
    let m = wavelet_m.unwrap_or_else(|| default_wavelet_m(d));
    let spec = daubechies_spec::<f64>(m)?;
    let scaling = (n as f64 * 2.0f64.powi(-(j0 as i32))).sqrt();
    let samples: Vec<Result<f64>> = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let cfg = ArfimaConfig { d, n, seed: seed ^ rep as u64, innovation_sd: 1.0 };
            let series = generate::<f64>(&cfg)?;
            let pyr = decompose(&series, &spec, j0 + ell)?;
            let est = estimate_d(&pyr, j0, ell, kind)?;
            Ok(scaling * (est.d_hat - d))
        })
        .collect();
    let mut values = Vec::with_capacity(reps);
    for s in samples {
        values.push(s?);
    }
    let mean = values.iter().sum::<f64>() / reps as f64;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (reps - 1) as f64;
    Ok(var)
}

/// Rate-condition diagnostic of Theorem-level validity:
/// `n 2^{-(1+2 beta) J0}`, which must be small for the CLT bias term to be
/// negligible. The CLI warns when it is not below 1.
pub fn rate_condition(n: usize, j0: usize, beta: f64) -> f64 {
    n as f64 * 2.0f64.powf(-(1.0 + 2.0 * beta) * j0 as f64)
}

/// Standard error of `d_hat` implied by an asymptotic covariance matrix:
/// `sqrt(w^T V w / (n 2^{-J0}))`.
pub fn se_from_cov<F: Scalar>(
    cov: &CovMatrix<F>,
    weights: &RegressionWeights<F>,
    n: usize,
    j0: usize,
) -> F {
    let q = cov.quadratic_form(weights);
    let eff = F::of_usize(n) * two_pow(-F::of_usize(j0));
    (q / eff).sqrt()
}
