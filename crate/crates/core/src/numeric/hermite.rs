//! Probabilists' Hermite polynomials and Gauss-Hermite quadrature.

use crate::error::{Error, Result};
use crate::Scalar;

/// Probabilists' Hermite polynomial `H_p(x)` (`H_0 = 1`, `H_1 = x`,
/// `H_2 = x^2 - 1`, `H_{p+1} = x H_p - p H_{p-1}`).
pub fn hermite<F: Scalar>(p: usize, x: F) -> F {
    match p {
        0 => F::one(),
        1 => x,
        _ => {
            let mut prev = F::one();
            let mut cur = x;
            for k in 1..p {
                let next = x * cur - F::of_usize(k) * prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

/// A Gauss-Hermite rule for the physicists' weight `exp(-t^2)`:
/// `int f(t) exp(-t^2) dt ~= sum w_i f(t_i)`.
///
/// Nodes and weights by the Golub-Welsch algorithm: eigenvalues of the
/// symmetric tridiagonal Jacobi matrix (off-diagonal `sqrt(j/2)`), with
/// the weights from the first eigenvector components, accumulated during
/// the implicit-shift QL sweep. Stable at any practical order.
#[derive(Debug, Clone)]
pub struct GaussHermite<F> {
    nodes: Vec<F>,
    weights: Vec<F>,
}

impl<F: Scalar> GaussHermite<F> {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Config("Gauss-Hermite rule needs at least 2 nodes".into()));
        }
        let mut diag = vec![F::zero(); n];
        let mut off: Vec<F> = (1..n)
            .map(|j| (F::of_usize(j) / F::two()).sqrt())
            .collect();
        off.push(F::zero());
        let mut first_row = vec![F::zero(); n];
        first_row[0] = F::one();
        tql_first_row(&mut diag, &mut off, &mut first_row)?;
        let mu0 = F::PI().sqrt();
        let mut pairs: Vec<(F, F)> = diag
            .into_iter()
            .zip(first_row)
            .map(|(node, z)| (node, mu0 * z * z))
            .collect();
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
        Ok(Self {
            nodes: pairs.iter().map(|p| p.0).collect(),
            weights: pairs.iter().map(|p| p.1).collect(),
        })
    }

    /// Raw (nodes, weights) access, mainly for diagnostics.
    pub fn raw(&self) -> (&[F], &[F]) {
        (&self.nodes, &self.weights)
    }

    /// `int f(t) exp(-t^2) dt`.
    pub fn integrate(&self, f: impl Fn(F) -> F) -> F {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * f(t))
            .sum()
    }

    /// `E[f(Z)]` for standard normal `Z` (change of variables `x = sqrt(2) t`).
    pub fn gaussian_expectation(&self, f: impl Fn(F) -> F) -> F {
        let inv_sqrt_pi = F::of(0.5641895835477563);
        inv_sqrt_pi * self.integrate(|t| f(F::SQRT_2() * t))
    }
}

// Implicit-shift QL for a symmetric tridiagonal matrix, accumulating only
// the first row of the orthogonal transform (all Golub-Welsch needs).
// diag/off are consumed; diag returns the eigenvalues.
fn tql_first_row<F: Scalar>(diag: &mut [F], off: &mut [F], row: &mut [F]) -> Result<()> {
    let n = diag.len();
    let two = F::two();
    for l in 0..n {
        let mut iter = 0usize;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if off[m].abs() <= F::epsilon() * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::Numeric(
                    "tridiagonal QL iteration did not converge".into(),
                ));
            }
            let mut g = (diag[l + 1] - diag[l]) / (two * off[l]);
            let mut r = g.hypot(F::one());
            let denom = g + if g >= F::zero() { r.abs() } else { -r.abs() };
            g = diag[m] - diag[l] + off[l] / denom;
            let mut s = F::one();
            let mut c = F::one();
            let mut p = F::zero();
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * off[i];
                let b = c * off[i];
                r = f.hypot(g);
                off[i + 1] = r;
                if r == F::zero() {
                    diag[i + 1] -= p;
                    off[m] = F::zero();
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + two * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
                f = row[i + 1];
                row[i + 1] = s * row[i] + c * f;
                row[i] = c * row[i] - s * f;
            }
            if underflow {
                continue;
            }
            diag[l] -= p;
            off[l] = g;
            off[m] = F::zero();
        }
    }
    Ok(())
}
