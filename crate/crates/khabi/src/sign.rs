//! Positive zeros of `psi_rho` and the `D_-`/`D_+` decomposition.
//!
//! `psi_rho` vanishes exactly where its coefficient polynomial `q_n(x)`
//! vanishes for `x = t^rho > 0`. Isolation works on `q_n(x)/x^j` (structural
//! zero factors stripped) over `(0, B]` with `B` a Cauchy root bound, by
//! recursively isolating the critical points of each derivative; between
//! consecutive critical points the polynomial is monotone, so a sign census
//! there is complete. The census is certified against the Descartes bound and
//! the run aborts on mismatch.

use crate::deriv::DerivativeStack;
use crate::poly::Poly;
use crate::{Error, ProblemParams, Result};
use serde::Serialize;

pub const DEFAULT_ROOT_TOL: f64 = 1e-13;

/// One positive zero of `psi_rho`, kept both in `x = t^rho` and `t` space.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Zero {
    pub x: f64,
    pub tau: f64,
    /// Tangential zero: `psi_rho` touches without changing sign.
    pub even_multiplicity: bool,
}

/// Ordered zeros `tau_1 < ... < tau_m` (with the convention `tau_0 := 0`),
/// the index set `I` of negative intervals, and the induced decomposition.
#[derive(Debug, Clone, Serialize)]
pub struct SignPattern {
    pub params: ProblemParams,
    pub zeros: Vec<Zero>,
    /// 1-based interval indices `i` with `psi_rho < 0` on `(tau_{i-1}, tau_i)`.
    pub negative: Vec<usize>,
}

impl SignPattern {
    /// Left endpoint of interval `i` (1-based), with `tau_0 = 0`.
    pub fn tau(&self, i: usize) -> f64 {
        if i == 0 {
            0.0
        } else {
            self.zeros[i - 1].tau
        }
    }

    pub fn index_set(&self) -> &[usize] {
        &self.negative
    }

    /// Bounded open intervals composing `D_-`.
    pub fn d_minus(&self) -> Vec<(f64, f64)> {
        self.negative
            .iter()
            .map(|&i| (self.tau(i - 1), self.tau(i)))
            .collect()
    }

    /// Bounded components of `D_+` plus the unbounded `(tau_m, inf)` part
    /// encoded as an open upper end.
    pub fn d_plus(&self) -> (Vec<(f64, f64)>, f64) {
        let m = self.zeros.len();
        let bounded = (1..=m)
            .filter(|i| !self.negative.contains(i))
            .map(|i| (self.tau(i - 1), self.tau(i)))
            .collect();
        (bounded, self.tau(m))
    }

    pub fn last_zero(&self) -> f64 {
        self.zeros.last().map(|z| z.tau).unwrap_or(0.0)
    }

    pub fn first_zero(&self) -> f64 {
        self.zeros.first().map(|z| z.tau).unwrap_or(0.0)
    }

    /// 1-based index of the interval containing `t`; `m + 1` means the
    /// unbounded tail.
    pub fn interval_of(&self, t: f64) -> usize {
        self.zeros.iter().take_while(|z| z.tau < t).count() + 1
    }

    pub fn in_d_minus(&self, t: f64) -> bool {
        let i = self.interval_of(t);
        self.negative.contains(&i)
    }
}

fn eval_scale(p: &Poly, x: f64) -> f64 {
    let mut acc = 0.0;
    let mut xp = 1.0;
    for &c in p.coeffs() {
        acc += c.abs() * xp;
        xp *= x.abs();
    }
    acc
}

#[derive(Clone, Copy, PartialEq)]
enum SignClass {
    Neg,
    Zero,
    Pos,
}

fn classify(p: &Poly, x: f64) -> SignClass {
    let v = p.eval(x);
    if v.abs() <= 1e-11 * eval_scale(p, x).max(f64::MIN_POSITIVE) {
        SignClass::Zero
    } else if v > 0.0 {
        SignClass::Pos
    } else {
        SignClass::Neg
    }
}

fn nonzero_sign_near(p: &Poly, x: f64, step: f64) -> SignClass {
    let mut h = step;
    for _ in 0..40 {
        match classify(p, x + h) {
            SignClass::Zero => h *= 2.0,
            s => return s,
        }
    }
    SignClass::Zero
}

fn refine_bracket(p: &Poly, mut lo: f64, mut hi: f64, lo_positive: bool, tol: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (hi - lo) <= tol * mid.abs().max(f64::MIN_POSITIVE) || mid <= lo || mid >= hi {
            break;
        }
        let v = p.eval(mid);
        if v == 0.0 {
            return mid;
        }
        if (v > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // Newton polish inside the bracket
    let dp = p.derivative();
    let mut x = 0.5 * (lo + hi);
    for _ in 0..8 {
        let d = dp.eval(x);
        if d == 0.0 {
            break;
        }
        let next = x - p.eval(x) / d;
        if next.is_finite() && next > lo && next < hi {
            x = next;
        } else {
            break;
        }
    }
    x
}

/// All roots of `p` in `(lo, hi)`, flagged even when the sign does not flip.
fn isolate_roots(p: &Poly, lo: f64, hi: f64, tol: f64) -> Vec<(f64, bool)> {
    if p.degree() == 0 || p.is_zero() {
        return Vec::new();
    }
    let criticals: Vec<f64> = isolate_roots(&p.derivative(), lo, hi, tol)
        .into_iter()
        .map(|(x, _)| x)
        .collect();

    let mut breaks = Vec::with_capacity(criticals.len() + 2);
    breaks.push(lo);
    breaks.extend(criticals.iter().copied());
    breaks.push(hi);

    let mut roots: Vec<(f64, bool)> = Vec::new();
    let classes: Vec<SignClass> = breaks.iter().map(|&x| classify(p, x)).collect();

    // tangential roots sit at critical points where p itself vanishes
    for i in 1..breaks.len() - 1 {
        if classes[i] == SignClass::Zero {
            let span_l = breaks[i] - breaks[i - 1];
            let span_r = breaks[i + 1] - breaks[i];
            let s_l = nonzero_sign_near(p, breaks[i], -0.05 * span_l);
            let s_r = nonzero_sign_near(p, breaks[i], 0.05 * span_r);
            let even = s_l == s_r && s_l != SignClass::Zero;
            roots.push((breaks[i], even));
        }
    }

    for i in 0..breaks.len() - 1 {
        let (l, r) = (breaks[i], breaks[i + 1]);
        let span = r - l;
        let s_l = if classes[i] == SignClass::Zero {
            nonzero_sign_near(p, l, 0.02 * span)
        } else {
            classes[i]
        };
        let s_r = if classes[i + 1] == SignClass::Zero {
            nonzero_sign_near(p, r, -0.02 * span)
        } else {
            classes[i + 1]
        };
        if s_l != SignClass::Zero && s_r != SignClass::Zero && s_l != s_r {
            roots.push((refine_bracket(p, l, r, s_l == SignClass::Pos, tol), false));
        }
    }

    roots.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    roots.dedup_by(|a, b| (a.0 - b.0).abs() <= tol * b.0.abs().max(1e-300));
    roots
}

/// Positive zeros of `psi_rho`, isolated and certified.
pub fn positive_roots(stack: &DerivativeStack) -> Result<Vec<Zero>> {
    positive_roots_with_tol(stack, DEFAULT_ROOT_TOL)
}

/// Descartes bound on the positive-root count of the reduced coefficient
/// polynomial (census evidence for reports).
pub fn descartes_bound(stack: &DerivativeStack) -> usize {
    let qn = stack.q(stack.params().n_usize());
    let scale = qn.max_abs_coeff();
    let mut j0 = 0;
    while j0 <= qn.degree() && qn.coeff(j0).abs() <= 1e-11 * scale {
        j0 += 1;
    }
    qn.shift_down(j0).descartes_sign_changes()
}

pub fn positive_roots_with_tol(stack: &DerivativeStack, tol: f64) -> Result<Vec<Zero>> {
    stack.params().require_rho_above_one()?;
    let rho = stack.params().rho();
    let n = stack.params().n_usize();
    let qn = stack.q(n);

    // strip structural x^j factors (q_n(0) = 0 always; degenerate rho can
    // zero out further low-order coefficients)
    let scale = qn.max_abs_coeff();
    let mut j0 = 0;
    while j0 <= qn.degree() && qn.coeff(j0).abs() <= 1e-11 * scale {
        j0 += 1;
    }
    let reduced = qn.shift_down(j0);
    if reduced.is_zero() {
        return Err(Error::RootIsolation("coefficient polynomial is zero".into()));
    }

    let bound = reduced.cauchy_root_bound();
    let found = isolate_roots(&reduced, 0.0, bound, tol);

    let descartes = reduced.descartes_sign_changes();
    let weighted: usize = found.iter().map(|&(_, even)| if even { 2 } else { 1 }).sum();
    if weighted > descartes || (descartes - weighted) % 2 != 0 {
        return Err(Error::RootIsolation(format!(
            "census mismatch: {} roots found (weighted {weighted}) against Descartes bound \
             {descartes} for n={n}, rho={rho}",
            found.len()
        )));
    }

    Ok(found
        .into_iter()
        .map(|(x, even)| Zero {
            x,
            tau: (x.ln() / rho).exp(),
            even_multiplicity: even,
        })
        .collect())
}

/// Assemble the sign pattern from certified roots; aborts when midpoint signs
/// are inconsistent (a missed root) or the structure contradicts `rho > 1`.
pub fn sign_pattern(stack: &DerivativeStack, roots: &[Zero]) -> Result<SignPattern> {
    stack.params().require_rho_above_one()?;
    if roots.is_empty() {
        return Err(Error::RootIsolation(
            "psi_rho must vanish somewhere on (0, inf) for rho > 1; no zeros found".into(),
        ));
    }

    let m = roots.len();
    let rho = stack.params().rho();
    let mut negative = Vec::new();
    for i in 1..=m {
        let l = if i == 1 { 0.0 } else { roots[i - 2].tau };
        let r = roots[i - 1].tau;
        let probes = interval_probes(l, r, rho);
        let mut sign = 0i32;
        for &t in &probes {
            let v = stack.psi(t).map_err(|e| {
                Error::RootIsolation(format!("psi evaluation failed inside interval {i}: {e}"))
            })?;
            let s = if v > 0.0 { 1 } else if v < 0.0 { -1 } else { 0 };
            if s == 0 {
                continue;
            }
            if sign == 0 {
                sign = s;
            } else if sign != s {
                return Err(Error::RootIsolation(format!(
                    "inconsistent probe signs on interval ({l:.6e}, {r:.6e}); a zero was missed"
                )));
            }
        }
        if sign < 0 {
            negative.push(i);
        }
    }

    // the unbounded tail must be positive; probe in u = t^rho space so the
    // points stay representable for extreme rho
    let tail = roots[m - 1].tau;
    for &du in &[2.0, 6.0] {
        let t = (tail.ln() + du / rho).exp();
        if stack.psi(t).unwrap_or(f64::NAN) <= 0.0 {
            return Err(Error::RootIsolation(format!(
                "psi_rho is not positive at t = {t}; tail interval misclassified"
            )));
        }
    }

    if negative.is_empty() {
        return Err(Error::RootIsolation(
            "D_- is empty although rho > 1; zero isolation is inconsistent".into(),
        ));
    }

    Ok(SignPattern {
        params: *stack.params(),
        zeros: roots.to_vec(),
        negative,
    })
}

// Interior sample points chosen geometrically in u = t^rho, which keeps
// psi evaluations away from under/overflow even for very large rho.
fn interval_probes(l: f64, r: f64, rho: f64) -> [f64; 3] {
    let lur = rho * r.ln();
    let lul = if l == 0.0 {
        lur - 14.0
    } else {
        (rho * l.ln()).max(lur - 60.0)
    };
    let pick = |frac: f64| ((lul + frac * (lur - lul)) / rho).exp();
    [pick(0.25), pick(0.5), pick(0.75)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deriv::build_stack;

    fn pattern(n: u32, rho: f64) -> SignPattern {
        let stack = build_stack(&ProblemParams::new(n, rho).unwrap()).unwrap();
        let roots = positive_roots(&stack).unwrap();
        sign_pattern(&stack, &roots).unwrap()
    }

    #[test]
    fn n2_single_root_closed_form() {
        for &rho in &[1.1, 1.5, 2.0, 3.0, 5.0, 10.0] {
            let stack = build_stack(&ProblemParams::new(2, rho).unwrap()).unwrap();
            let roots = positive_roots(&stack).unwrap();
            assert_eq!(roots.len(), 1);
            let x = (rho - 1.0) / (rho + 1.0);
            assert!((roots[0].x - x).abs() <= 1e-12 * x);
            let tau = x.powf(1.0 / rho);
            assert!((roots[0].tau - tau).abs() <= 1e-12 * tau);
            assert!(!roots[0].even_multiplicity);
        }
    }

    #[test]
    fn n2_rho3_value() {
        let stack = build_stack(&ProblemParams::new(2, 3.0).unwrap()).unwrap();
        let roots = positive_roots(&stack).unwrap();
        // tau = (1/2)^(1/3)
        let expect = 0.5f64.powf(1.0 / 3.0);
        assert!((roots[0].tau - expect).abs() < 1e-13);
    }

    #[test]
    fn n2_pattern_is_single_negative_interval() {
        let p = pattern(2, 2.0);
        assert_eq!(p.index_set(), &[1]);
        let dm = p.d_minus();
        assert_eq!(dm.len(), 1);
        assert_eq!(dm[0].0, 0.0);
        assert!((dm[0].1 - (1.0f64 / 3.0).sqrt()).abs() < 1e-13);
        let (bounded, tail_from) = p.d_plus();
        assert!(bounded.is_empty());
        assert!((tail_from - (1.0f64 / 3.0).sqrt()).abs() < 1e-13);
    }

    #[test]
    fn roots_certified_against_brute_force_scan() {
        // sign-change census on a dense log grid is the independent oracle
        for &(n, rho) in &[(3u32, 2.0f64), (4, 2.0), (5, 4.0), (6, 3.0), (3, 1.1)] {
            let stack = build_stack(&ProblemParams::new(n, rho).unwrap()).unwrap();
            let roots = positive_roots(&stack).unwrap();
            let mut changes = 0usize;
            let mut last = 0.0f64;
            let pts = 1_000_000usize;
            for i in 0..=pts {
                let t = 1e-4 * (1e8f64).powf(i as f64 / pts as f64);
                let v = stack.psi(t).unwrap();
                if v != 0.0 {
                    if last != 0.0 && v.signum() != last.signum() {
                        changes += 1;
                    }
                    last = v;
                }
            }
            let odd = roots.iter().filter(|z| !z.even_multiplicity).count();
            assert_eq!(odd, changes, "n={n} rho={rho}");
        }
    }

    #[test]
    fn psi_vanishes_at_certified_roots() {
        for &(n, rho) in &[(2u32, 2.0f64), (3, 2.0), (4, 3.0), (5, 4.0), (6, 5.0)] {
            let stack = build_stack(&ProblemParams::new(n, rho).unwrap()).unwrap();
            for z in positive_roots(&stack).unwrap() {
                let v = stack.psi(z.tau).unwrap();
                assert!(v.abs() < 1e-10, "n={n} rho={rho} tau={}: psi={v}", z.tau);
            }
        }
    }

    #[test]
    fn pattern_signs_match_random_sampling() {
        let p = pattern(5, 4.0);
        let stack = build_stack(&ProblemParams::new(5, 4.0).unwrap()).unwrap();
        // deterministic quasi-random points
        let mut x = 0.5f64;
        for _ in 0..1000 {
            x = (x * 9301.0 + 0.3).fract();
            let t = 1e-3 * (1e6f64).powf(x);
            let near_zero = p.zeros.iter().any(|z| (t - z.tau).abs() < 1e-6 * z.tau);
            if near_zero {
                continue;
            }
            let v = stack.psi(t).unwrap();
            assert_eq!(v < 0.0, p.in_d_minus(t), "t={t}");
        }
    }

    #[test]
    fn d_minus_nonempty_and_bounded_for_rho_above_one() {
        for &(n, rho) in &[(2u32, 1.1f64), (3, 1.5), (4, 2.0), (5, 3.0), (6, 5.0)] {
            let p = pattern(n, rho);
            assert!(!p.d_minus().is_empty());
            let sup = p.d_minus().iter().map(|i| i.1).fold(0.0f64, f64::max);
            assert!(sup.is_finite() && sup > 0.0);
            assert!(sup <= p.last_zero());
        }
    }

    #[test]
    fn rejects_rho_at_most_one() {
        let stack = build_stack(&ProblemParams::new(2, 0.9).unwrap()).unwrap();
        assert!(positive_roots(&stack).is_err());
    }

    #[test]
    fn tangential_root_detection_on_synthetic_polynomial() {
        // (x-1)^2 (x+2) = 2 - 3x + 0x^2 + x^3: double root at 1
        let p = Poly::new(vec![2.0, -3.0, 0.0, 1.0]);
        let roots = isolate_roots(&p, 0.0, p.cauchy_root_bound(), 1e-13);
        assert_eq!(roots.len(), 1);
        assert!((roots[0].0 - 1.0).abs() < 1e-9);
        assert!(roots[0].1, "double root must be flagged even");

        // (x-1)^3 = -1 + 3x - 3x^2 + x^3: odd triple root at 1
        let p = Poly::new(vec![-1.0, 3.0, -3.0, 1.0]);
        let roots = isolate_roots(&p, 0.0, p.cauchy_root_bound(), 1e-13);
        assert_eq!(roots.len(), 1);
        assert!((roots[0].0 - 1.0).abs() < 1e-9);
        assert!(!roots[0].1);
    }

    #[test]
    fn interval_lookup() {
        let p = pattern(2, 2.0);
        let tau = (1.0f64 / 3.0).sqrt();
        assert_eq!(p.interval_of(tau / 2.0), 1);
        assert_eq!(p.interval_of(tau * 2.0), 2);
        assert!(p.in_d_minus(tau / 2.0));
        assert!(!p.in_d_minus(tau * 2.0));
    }
}
