//! Derivatives of `phi_rho(t) = 1/(1 + t^rho)` via an exact polynomial
//! recurrence.
//!
//! Writing `u = t^rho`, the k-th derivative has the closed shape
//!
//! ```text
//! phi_rho^(k)(t) = q_k(u) / (t^k (1 + u)^(k+1)),
//! ```
//!
//! where `q_0 = 1` and, by direct differentiation of that quotient,
//!
//! ```text
//! q_{k+1}(u) = rho u (1+u) q_k'(u) - k (1+u) q_k(u) - (k+1) rho u q_k(u).
//! ```
//!
//! The signed top derivative `psi_rho = (-1)^n phi_rho^(n)` drives the whole
//! pipeline. Coefficients are held in `f64` at the fixed `rho`; the [`exact`]
//! submodule keeps them as integer polynomials in `rho` and is used by the
//! tests as a cancellation-free reference.

use crate::poly::Poly;
use crate::{Error, ProblemParams, Result};

/// `phi_rho` and its first `n` derivatives at fixed `(n, rho)`.
#[derive(Debug, Clone)]
pub struct DerivativeStack {
    params: ProblemParams,
    q: Vec<Poly>,
}

/// Build `q_0 .. q_n` by the coefficient recurrence
/// `b_j = (rho j - k) a_j + (rho (j - 2 - k) - k) a_{j-1}`.
pub fn build_stack(params: &ProblemParams) -> Result<DerivativeStack> {
    let n = params.n_usize();
    let rho = params.rho();
    let mut q = Vec::with_capacity(n + 1);
    q.push(Poly::one());
    for k in 0..n {
        let a = &q[k];
        let kf = k as f64;
        let mut b = vec![0.0; k + 2];
        for (j, slot) in b.iter_mut().enumerate() {
            let jf = j as f64;
            let mut v = 0.0;
            if j <= a.degree() && !a.is_zero() {
                v += (rho * jf - kf) * a.coeff(j);
            }
            if j >= 1 {
                v += (rho * (jf - 2.0 - kf) - kf) * a.coeff(j - 1);
            }
            *slot = v;
        }
        q.push(Poly::new(b));
    }
    Ok(DerivativeStack { params: *params, q })
}

/// `phi_rho(t) = 1/(1 + t^rho)` for `t >= 0`.
pub fn phi(params: &ProblemParams, t: f64) -> f64 {
    debug_assert!(t >= 0.0);
    1.0 / (1.0 + t.powf(params.rho()))
}

impl DerivativeStack {
    pub fn params(&self) -> &ProblemParams {
        &self.params
    }

    /// Coefficient polynomial `q_k` in the variable `u = t^rho`.
    pub fn q(&self, k: usize) -> &Poly {
        &self.q[k]
    }

    pub fn phi(&self, t: f64) -> f64 {
        phi(&self.params, t)
    }

    /// `phi_rho^(k)(t)`; `t = 0` is admitted only where the limit exists.
    ///
    /// For `t > 1` the quotient is evaluated in `v = t^(-rho)` with reversed
    /// coefficients, which keeps large arguments finite for any `rho`.
    pub fn phi_deriv(&self, k: usize, t: f64) -> Result<f64> {
        let n = self.params.n_usize();
        if k > n {
            return Err(Error::Domain(format!(
                "derivative order {k} exceeds stack order {n}"
            )));
        }
        if t < 0.0 || !t.is_finite() {
            return Err(Error::Domain(format!("t must be finite and >= 0, got {t}")));
        }
        if k == 0 {
            return Ok(self.phi(t));
        }
        let rho = self.params.rho();
        if t == 0.0 {
            return self.limit_at_zero(k);
        }
        let qk = &self.q[k];
        if t <= 1.0 {
            let u = t.powf(rho);
            Ok(qk.eval(u) / (t.powi(k as i32) * (1.0 + u).powi(k as i32 + 1)))
        } else {
            // q_k(u)/(1+u)^{k+1} = v * rev(q_k)(v) / (1+v)^{k+1},  v = 1/u
            let v = t.powf(-rho);
            let mut acc = 0.0;
            for j in 0..=k {
                acc = acc * v + qk.coeff(j);
            }
            Ok(v * acc / (t.powi(k as i32) * (1.0 + v).powi(k as i32 + 1)))
        }
    }

    fn limit_at_zero(&self, k: usize) -> Result<f64> {
        let rho = self.params.rho();
        let qk = &self.q[k];
        let scale = qk.max_abs_coeff();
        let j0 = (1..=qk.degree())
            .find(|&j| qk.coeff(j).abs() > 1e-12 * scale)
            .ok_or_else(|| Error::Domain("zero coefficient polynomial".into()))?;
        let expo = j0 as f64 * rho - k as f64;
        if expo > 1e-9 {
            Ok(0.0)
        } else if expo.abs() <= 1e-9 {
            Ok(qk.coeff(j0))
        } else {
            Err(Error::Domain(format!(
                "phi^({k}) has a non-removable singularity at t = 0 for rho = {rho}"
            )))
        }
    }

    /// `psi_rho(t) = (-1)^n phi_rho^(n)(t)`.
    pub fn psi(&self, t: f64) -> Result<f64> {
        let n = self.params.n_usize();
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        Ok(sign * self.phi_deriv(n, t)?)
    }

    /// Same sign convention applied to the coefficient polynomial: positive
    /// zeros of `psi_rho` are the positive roots of this polynomial in
    /// `x = t^rho`.
    pub fn psi_poly(&self) -> Poly {
        let n = self.params.n_usize();
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        Poly::new(self.q[n].coeffs().iter().map(|&c| sign * c).collect())
    }
}

/// Cancellation-free construction: coefficients of each `q_k` as integer
/// polynomials in `rho`, evaluated on demand.
pub mod exact {
    use super::*;

    /// Coefficient `a_{k,j}` stored as an integer polynomial in `rho`.
    #[derive(Debug, Clone)]
    pub struct ExactStack {
        n: usize,
        // q[k][j] = integer coefficients (ascending powers of rho) of a_{k,j}
        q: Vec<Vec<Vec<i128>>>,
    }

    fn checked_axpy(dst: &mut Vec<i128>, src: &[i128], rho_coef: i128, const_coef: i128) {
        if dst.len() < src.len() + 1 {
            dst.resize(src.len() + 1, 0);
        }
        for (i, &c) in src.iter().enumerate() {
            dst[i] = dst[i]
                .checked_add(c.checked_mul(const_coef).expect("coefficient overflow"))
                .expect("coefficient overflow");
            dst[i + 1] = dst[i + 1]
                .checked_add(c.checked_mul(rho_coef).expect("coefficient overflow"))
                .expect("coefficient overflow");
        }
    }

    impl ExactStack {
        pub fn build(n: usize) -> Result<Self> {
            if !(1..=12).contains(&n) {
                return Err(Error::InvalidParams(format!(
                    "exact stack supports 1 <= n <= 12, got {n}"
                )));
            }
            let mut q: Vec<Vec<Vec<i128>>> = vec![vec![vec![1]]];
            for k in 0..n {
                let a = &q[k];
                let ki = k as i128;
                let mut b: Vec<Vec<i128>> = vec![vec![]; k + 2];
                for (j, slot) in b.iter_mut().enumerate() {
                    let ji = j as i128;
                    if j < a.len() {
                        // (rho j - k) a_j
                        checked_axpy(slot, &a[j], ji, -ki);
                    }
                    if j >= 1 && j - 1 < a.len() {
                        // (rho (j - 2 - k) - k) a_{j-1}
                        checked_axpy(slot, &a[j - 1], ji - 2 - ki, -ki);
                    }
                }
                q.push(b);
            }
            Ok(Self { n, q })
        }

        pub fn n(&self) -> usize {
            self.n
        }

        /// Evaluate all coefficient polynomials at a concrete `rho`.
        pub fn q_polys(&self, rho: f64) -> Vec<Poly> {
            self.q
                .iter()
                .map(|coeffs| {
                    Poly::new(
                        coeffs
                            .iter()
                            .map(|p| {
                                let mut acc = 0.0;
                                for &c in p.iter().rev() {
                                    acc = acc * rho + c as f64;
                                }
                                acc
                            })
                            .collect(),
                    )
                })
                .collect()
        }
    }
}
