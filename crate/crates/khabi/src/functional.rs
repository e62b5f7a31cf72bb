//! Candidate functions `s` in the admissible class `inc_rho`, the functional
//! `J_rho(s) = int_0^inf s(t)/t * phi_rho(t) dt`, and the explicit maximizing
//! sequence.
//!
//! The sequence starts from the saturating power
//! `s_0(t) = (rho/2) prod_{k=1}^{n-1}(1 + rho/(2k)) t^{rho/2}` with
//! `f_0 = Q^n[s_0(x)/x] = t^{rho/2+n-1}/(n-1)!`, and damps `f` on `D_-` by
//! smooth cosine bumps:
//!
//! ```text
//! f_k = (1 - eps_k eta) f_{k-1} on D_-,   s_k(t) = t (Q^{-1})^n [f_k](t).
//! ```
//!
//! `s_k` is evaluated analytically: `f_k` is a product of a pure power and
//! trigonometric bumps, so its n-th derivative comes from exact Taylor-jet
//! arithmetic rather than numerical differentiation. Since `f_k - f_0`
//! vanishes to high order at every zero `tau_i`, integration by parts on the
//! negative set gives the exact per-iterate value
//!
//! ```text
//! J_rho(s_k) = P_n(rho)/(2 rho) + int_{D_-} (f_k - f_0) psi_rho dt,
//! ```
//!
//! which increases towards `J(rho)` as the damping kills `f_k` on `D_-`.
//! (The boundary terms of the parts only cancel for the difference
//! `f_k - f_0`, not for `f_k` alone, which is why the damped mass enters as a
//! difference against `f_0`.)

use crate::constants::p_n;
use crate::deriv::build_stack;
use crate::jet::Jet;
use crate::quad::{integrate, IntegrationSpec};
use crate::sign::{positive_roots_with_tol, sign_pattern, SignPattern, DEFAULT_ROOT_TOL};
use crate::special::gamma_ratio;
use crate::{Error, ProblemParams, Result};
use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::Arc;

/// Smooth bump `eta(t) = sum_{i in I} eta_i(t)` supported on `D_-`:
/// `eta_i = [cos(pi t/(2 tau_{i-1})) cos(pi t/(2 tau_i))]^(2n)` on
/// `(tau_{i-1}, tau_i]`, with the single-factor convention
/// `eta_1 = cos^(2n)(pi t/(2 tau_1))` when the first interval is negative.
pub fn eta(pattern: &SignPattern, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let i = pattern.interval_of(t);
    if i > pattern.zeros.len() || !pattern.index_set().contains(&i) {
        return 0.0;
    }
    let n2 = 2 * pattern.params.n() as i32;
    let r = pattern.tau(i);
    let mut base = (PI * t / (2.0 * r)).cos();
    if i > 1 {
        let l = pattern.tau(i - 1);
        base *= (PI * t / (2.0 * l)).cos();
    }
    base.powi(n2)
}

fn eta_jet(pattern: &SignPattern, t: f64, order: usize) -> Jet {
    let i = pattern.interval_of(t);
    if i > pattern.zeros.len() || !pattern.index_set().contains(&i) {
        return Jet::constant(0.0, order);
    }
    let n2 = 2 * pattern.params.n();
    let r = pattern.tau(i);
    let mut base = Jet::cos(t, PI / (2.0 * r), order);
    if i > 1 {
        let l = pattern.tau(i - 1);
        base = base.mul(&Jet::cos(t, PI / (2.0 * l), order));
    }
    base.powi(n2)
}

/// One element `s_k` of the maximizing sequence, defined by its damping
/// factors `eps_1 .. eps_k`.
#[derive(Debug, Clone)]
pub struct Iterate {
    params: ProblemParams,
    pattern: SignPattern,
    epsilons: Vec<f64>,
    s0_coef: f64,
    f0_coef: f64,
}

impl Iterate {
    pub fn new(params: ProblemParams, pattern: SignPattern, epsilons: Vec<f64>) -> Self {
        let rho = params.rho();
        let mut s0_coef = rho / 2.0;
        for k in 1..params.n() {
            s0_coef *= 1.0 + rho / (2.0 * k as f64);
        }
        let f0_coef = 1.0 / crate::special::factorial(params.n() - 1);
        Self {
            params,
            pattern,
            epsilons,
            s0_coef,
            f0_coef,
        }
    }

    pub fn k(&self) -> usize {
        self.epsilons.len()
    }

    pub fn pattern(&self) -> &SignPattern {
        &self.pattern
    }

    pub fn epsilons(&self) -> &[f64] {
        &self.epsilons
    }

    pub fn s0_coef(&self) -> f64 {
        self.s0_coef
    }

    /// `prod_{i<=k} (1 - eps_i eta(t))`.
    pub fn bump(&self, t: f64) -> f64 {
        let e = eta(&self.pattern, t);
        if e == 0.0 {
            return 1.0;
        }
        let mut acc = 1.0;
        for &eps in &self.epsilons {
            acc *= 1.0 - eps * e;
        }
        acc
    }

    /// `1 - prod_{i<=k} (1 - eps_i eta(t))`, accumulated without
    /// cancellation (every update adds a nonnegative term), so tiny damping
    /// factors keep full relative accuracy.
    pub fn bump_defect(&self, t: f64) -> f64 {
        let e = eta(&self.pattern, t);
        if e == 0.0 {
            return 0.0;
        }
        let mut defect = 0.0;
        for &eps in &self.epsilons {
            defect += eps * e * (1.0 - defect);
        }
        defect
    }

    pub fn f0_value(&self, t: f64) -> f64 {
        self.f0_coef * t.powf(self.params.rho() / 2.0 + self.params.n() as f64 - 1.0)
    }

    pub fn f_value(&self, t: f64) -> f64 {
        self.f0_value(t) * self.bump(t)
    }

    pub fn s0_value(&self, t: f64) -> f64 {
        self.s0_coef * t.powf(self.params.rho() / 2.0)
    }

    /// `s_k(t) = t * d^n/dt^n [f_k](t)`, via exact jets on `D_-` and the
    /// locality of differentiation (`f_k = f_0`, hence `s_k = s_0`) elsewhere.
    pub fn s_value(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        if self.epsilons.is_empty() || !self.pattern.in_d_minus(t) {
            return self.s0_value(t);
        }
        let n = self.params.n_usize();
        let f0 = Jet::power(t, self.params.rho() / 2.0 + n as f64 - 1.0, n).scale(self.f0_coef);
        let e = eta_jet(&self.pattern, t, n);
        let mut prod = f0;
        for &eps in &self.epsilons {
            let factor = Jet::constant(1.0, n).add(&e.scale(-eps));
            prod = prod.mul(&factor);
        }
        t * prod.derivative(n)
    }
}

/// How a grid function evaluates between (and beyond) its nodes.
#[derive(Clone)]
pub enum AnalyticForm {
    Zero,
    /// `s(t) = coef * t^expo`
    Power { coef: f64, expo: f64 },
    Iterate(Arc<Iterate>),
}

/// A candidate function on a strictly increasing positive grid. Tabulated
/// data interpolates linearly (from the origin below the grid, constant
/// beyond it); analytic tags evaluate exactly.
#[derive(Clone)]
pub struct GridFunction {
    grid: Vec<f64>,
    values: Vec<f64>,
    form: Option<AnalyticForm>,
    /// Power behavior `t^e` near 0, used as a quadrature hint.
    zero_exponent: f64,
}

fn default_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    (0..points)
        .map(|i| lo * (hi / lo).powf(i as f64 / (points - 1) as f64))
        .collect()
}

impl GridFunction {
    pub fn tabulated(grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if grid.len() != values.len() || grid.len() < 2 {
            return Err(Error::InvalidParams(
                "grid and values must share a length >= 2".into(),
            ));
        }
        if grid[0] <= 0.0 || grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParams(
                "grid must be strictly increasing and positive".into(),
            ));
        }
        Ok(Self {
            grid,
            values,
            form: None,
            zero_exponent: 1.0,
        })
    }

    pub fn zero(params: &ProblemParams) -> Self {
        let _ = params;
        let grid = default_grid(1e-3, 1e3, 64);
        let values = vec![0.0; grid.len()];
        Self {
            grid,
            values,
            form: Some(AnalyticForm::Zero),
            zero_exponent: 1.0,
        }
    }

    pub fn power(coef: f64, expo: f64) -> Self {
        let grid = default_grid(1e-3, 1e3, 256);
        let values = grid.iter().map(|&t| coef * t.powf(expo)).collect();
        Self {
            grid,
            values,
            form: Some(AnalyticForm::Power { coef, expo }),
            zero_exponent: expo,
        }
    }

    /// The saturating admissible power `s_0`.
    pub fn s0(params: &ProblemParams) -> Self {
        let rho = params.rho();
        let mut coef = rho / 2.0;
        for k in 1..params.n() {
            coef *= 1.0 + rho / (2.0 * k as f64);
        }
        Self::power(coef, rho / 2.0)
    }

    pub fn from_iterate(it: Arc<Iterate>, points: usize) -> Self {
        let tau1 = it.pattern.first_zero();
        let taum = it.pattern.last_zero();
        let grid = default_grid(tau1 * 1e-3, taum * 1.05, points.max(2));
        let values = grid.iter().map(|&t| it.s_value(t)).collect();
        let expo = it.params.rho() / 2.0;
        Self {
            grid,
            values,
            form: Some(AnalyticForm::Iterate(it)),
            zero_exponent: expo,
        }
    }

    pub fn with_zero_exponent(mut self, e: f64) -> Self {
        self.zero_exponent = e;
        self
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn form(&self) -> Option<&AnalyticForm> {
        self.form.as_ref()
    }

    pub fn eval(&self, t: f64) -> f64 {
        match &self.form {
            Some(AnalyticForm::Zero) => 0.0,
            Some(AnalyticForm::Power { coef, expo }) => {
                if t <= 0.0 {
                    0.0
                } else {
                    coef * t.powf(*expo)
                }
            }
            Some(AnalyticForm::Iterate(it)) => it.s_value(t),
            None => self.interp(t),
        }
    }

    fn interp(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        if t <= self.grid[0] {
            // extrapolate towards the origin with the declared power
            return self.values[0] * (t / self.grid[0]).powf(self.zero_exponent);
        }
        if t >= *self.grid.last().unwrap() {
            return *self.values.last().unwrap();
        }
        let idx = self.grid.partition_point(|&g| g < t);
        let (g0, g1) = (self.grid[idx - 1], self.grid[idx]);
        let (v0, v1) = (self.values[idx - 1], self.values[idx]);
        v0 + (v1 - v0) * (t - g0) / (g1 - g0)
    }
}

/// `Q^m[f](t) = 1/(m-1)! int_0^t (t-x)^{m-1} f(x) dx` on `f`'s grid.
///
/// Pure powers integrate exactly; tabulated data goes through adaptive
/// quadrature of the Cauchy kernel with `f`'s singularity hint.
pub fn q_power(f: &GridFunction, m: u32) -> Result<GridFunction> {
    if m == 0 {
        return Err(Error::InvalidParams("q_power requires m >= 1".into()));
    }
    if f.zero_exponent <= -1.0 {
        return Err(Error::Domain(format!(
            "integrand behaves like t^{} near 0 and is not integrable",
            f.zero_exponent
        )));
    }
    match f.form {
        Some(AnalyticForm::Zero) => Ok(GridFunction {
            grid: f.grid.clone(),
            values: vec![0.0; f.grid.len()],
            form: Some(AnalyticForm::Zero),
            zero_exponent: 1.0,
        }),
        Some(AnalyticForm::Power { coef, expo }) => {
            // Q^m[c x^a] = c t^{a+m} / ((a+1)...(a+m))
            let new_coef = coef / gamma_ratio(expo + 1.0, m);
            let new_expo = expo + m as f64;
            let values = f.grid.iter().map(|&t| new_coef * t.powf(new_expo)).collect();
            Ok(GridFunction {
                grid: f.grid.clone(),
                values,
                form: Some(AnalyticForm::Power {
                    coef: new_coef,
                    expo: new_expo,
                }),
                zero_exponent: new_expo,
            })
        }
        _ => {
            let inv_fact = 1.0 / crate::special::factorial(m - 1);
            let values = f
                .grid
                .iter()
                .map(|&t| {
                    let spec = IntegrationSpec::new(0.0, t)
                        .with_rel_tol(1e-9)
                        .with_singularity(f.zero_exponent);
                    integrate(
                        &|x: f64| (t - x).powi(m as i32 - 1) * f.eval(x),
                        &spec,
                    )
                    .map(|q| q.value * inv_fact)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(GridFunction {
                grid: f.grid.clone(),
                values,
                form: None,
                zero_exponent: f.zero_exponent + m as f64,
            })
        }
    }
}

/// `Q^n[s(x)/x](t)` for a candidate `s`, routed through the analytic form
/// when one is available.
fn q_n_of_s_over_x(s: &GridFunction, params: &ProblemParams, t: f64) -> Result<f64> {
    let n = params.n();
    match &s.form {
        Some(AnalyticForm::Zero) => Ok(0.0),
        Some(AnalyticForm::Power { coef, expo }) => {
            if *expo <= 0.0 {
                return Err(Error::Domain(
                    "s(x)/x is not integrable near the origin".into(),
                ));
            }
            Ok(coef * t.powf(expo + n as f64 - 1.0) / gamma_ratio(*expo, n))
        }
        Some(AnalyticForm::Iterate(it)) => Ok(it.f_value(t)),
        None => {
            let e = s.zero_exponent - 1.0;
            if e <= -1.0 {
                return Err(Error::Domain(
                    "s(x)/x is not integrable near the origin".into(),
                ));
            }
            let spec = IntegrationSpec::new(0.0, t)
                .with_rel_tol(1e-9)
                .with_singularity(e);
            let q = integrate(
                &|x: f64| (t - x).powi(n as i32 - 1) * s.eval(x) / x,
                &spec,
            )?;
            Ok(q.value / crate::special::factorial(n - 1))
        }
    }
}

/// Admissibility verdict for membership in `inc_rho`.
#[derive(Debug, Clone, Serialize)]
pub struct Admissibility {
    pub admissible: bool,
    pub nonnegative: bool,
    pub nondecreasing: bool,
    /// Worst value of `1 - (n-1)! t^{1-n} Q^n[s/x](t) / t^{rho/2}` over the
    /// checked grid (>= 0 up to tolerance for admissible functions).
    pub worst_growth_margin: f64,
    pub worst_growth_t: f64,
}

const GROWTH_SLACK: f64 = 1e-7;

/// Verify `s >= 0`, `s` nondecreasing, and the growth inequality
/// `(n-1)! t^{1-n} Q^n[s(x)/x](t) <= t^{rho/2}` on a log grid.
pub fn check_inc_rho(s: &GridFunction, params: &ProblemParams) -> Result<Admissibility> {
    let scale = s
        .values
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()))
        .max(f64::MIN_POSITIVE);
    let nonnegative = s.values.iter().all(|&v| v >= -1e-12 * scale);
    let nondecreasing = s
        .values
        .windows(2)
        .all(|w| w[1] - w[0] >= -1e-10 * (1.0 + w[0].abs()));

    let rho = params.rho();
    let fact = crate::special::factorial(params.n() - 1);
    let lo = s.grid[0];
    let hi = *s.grid.last().unwrap();
    let mut worst = f64::INFINITY;
    let mut worst_t = lo;
    for j in 0..64 {
        let t = lo * (hi / lo).powf(j as f64 / 63.0);
        let qn = q_n_of_s_over_x(s, params, t)?;
        let margin = 1.0 - fact * t.powf(1.0 - params.n() as f64) * qn / t.powf(rho / 2.0);
        if margin < worst {
            worst = margin;
            worst_t = t;
        }
    }
    Ok(Admissibility {
        admissible: nonnegative && nondecreasing && worst >= -GROWTH_SLACK,
        nonnegative,
        nondecreasing,
        worst_growth_margin: worst,
        worst_growth_t: worst_t,
    })
}

/// `J_rho(s) = int_0^inf s(t)/t phi_rho(t) dt`.
///
/// Powers use the exact value `coef (pi/rho)/sin(pi expo/rho)`; iterates
/// integrate the analytic `s_k` up to the last zero and close the `s_0` tail
/// with the arctan antiderivative; tabulated data integrates over its span.
pub fn j_functional(s: &GridFunction, params: &ProblemParams) -> Result<f64> {
    let rho = params.rho();
    match &s.form {
        Some(AnalyticForm::Zero) => Ok(0.0),
        Some(AnalyticForm::Power { coef, expo }) => {
            if !(0.0 < *expo && *expo < rho) {
                return Err(Error::Domain(format!(
                    "int t^(expo-1) phi_rho diverges for expo = {expo}, rho = {rho}"
                )));
            }
            Ok(coef * (PI / rho) / (PI * expo / rho).sin())
        }
        Some(AnalyticForm::Iterate(it)) => {
            let cut = it.pattern().last_zero();
            let spec = IntegrationSpec::new(0.0, cut)
                .with_rel_tol(1e-10)
                .with_singularity(rho / 2.0 - 1.0);
            let head = integrate(
                &|t: f64| it.s_value(t) / t / (1.0 + t.powf(rho)),
                &spec,
            )?;
            let tail =
                it.s0_coef() * (2.0 / rho) * (FRAC_PI_2 - cut.powf(rho / 2.0).atan());
            Ok(head.value + tail)
        }
        None => {
            let hi = *s.grid.last().unwrap();
            let spec = IntegrationSpec::new(0.0, hi)
                .with_rel_tol(1e-9)
                .with_singularity(s.zero_exponent - 1.0);
            let q = integrate(&|t: f64| s.eval(t) / t / (1.0 + t.powf(rho)), &spec)?;
            Ok(q.value)
        }
    }
}

fn pattern_for(params: &ProblemParams) -> Result<(crate::deriv::DerivativeStack, SignPattern)> {
    let stack = build_stack(params)?;
    let roots = positive_roots_with_tol(&stack, DEFAULT_ROOT_TOL)?;
    let pattern = sign_pattern(&stack, &roots)?;
    Ok((stack, pattern))
}

/// The strict-gain term `eps int_{D_-} f(t) eta(t) (-psi_rho(t)) dt` with
/// `f = Q^n[s(x)/x]`; positive whenever `f` is positive somewhere on `D_-`,
/// witnessing that no admissible `s` attains the supremum.
pub fn perturbation_gain(s: &GridFunction, params: &ProblemParams, eps: f64) -> Result<f64> {
    params.require_rho_above_one()?;
    let (stack, pattern) = match &s.form {
        Some(AnalyticForm::Iterate(it)) => (build_stack(params)?, it.pattern().clone()),
        _ => pattern_for(params)?,
    };
    let rho = params.rho();
    let mut acc = 0.0;
    for (a, b) in pattern.d_minus() {
        let mut spec = IntegrationSpec::new(a, b).with_rel_tol(1e-10);
        if a == 0.0 {
            spec = spec.with_singularity(1.5 * rho - 1.0);
        }
        let q = integrate(
            &|t: f64| {
                let f = q_n_of_s_over_x(s, params, t).unwrap_or(f64::NAN);
                f * eta(&pattern, t) * (-stack.psi(t).unwrap_or(f64::NAN))
            },
            &spec,
        )?;
        acc += q.value;
    }
    Ok(eps * acc)
}

/// Per-iteration record of the maximizing run.
#[derive(Debug, Clone, Serialize)]
pub struct IterationRow {
    pub k: u32,
    pub epsilon: f64,
    pub j_value: f64,
    pub gap: f64,
    pub margin: f64,
}

/// The damping schedule actually used, with its backtracking log.
#[derive(Debug, Clone, Serialize)]
pub struct EpsilonSchedule {
    pub alpha: f64,
    pub epsilons: Vec<f64>,
    pub backtracks: Vec<u32>,
}

#[derive(Debug, Clone, Copy)]
pub struct MaximizeOptions {
    pub iterations: u32,
    pub alpha: f64,
    pub grid_points: usize,
    pub quad_rel: f64,
}

impl Default for MaximizeOptions {
    fn default() -> Self {
        Self {
            iterations: 200,
            alpha: 0.5,
            grid_points: 512,
            quad_rel: 1e-9,
        }
    }
}

pub struct MaximizeRun {
    pub rows: Vec<IterationRow>,
    pub j_sup: f64,
    pub schedule: EpsilonSchedule,
    pub final_iterate: GridFunction,
}

/// Run the maximizing sequence for `opts.iterations` steps.
///
/// Each `eps_k` starts at `min(alpha/k, eps_{k-1})` and is halved until the
/// iterate stays nonnegative and nondecreasing on the check grid (at most 40
/// halvings, then `alpha` itself is halved and the run restarts). `J` values
/// come from the negative-set decomposition and must be nondecreasing and
/// bounded by `J(rho)` up to quadrature tolerance.
pub fn maximize(params: &ProblemParams, opts: &MaximizeOptions) -> Result<MaximizeRun> {
    params.require_rho_above_one()?;
    let mut alpha = opts.alpha;
    for _ in 0..6 {
        match maximize_with_alpha(params, opts, alpha) {
            Err(Error::NonConvergence(msg)) if msg.contains("halvings") => {
                alpha *= 0.5;
            }
            other => return other,
        }
    }
    Err(Error::NonConvergence(
        "no admissible damping schedule found after repeated alpha halvings".into(),
    ))
}

fn maximize_with_alpha(
    params: &ProblemParams,
    opts: &MaximizeOptions,
    alpha: f64,
) -> Result<MaximizeRun> {
    let (stack, pattern) = pattern_for(params)?;
    let rho = params.rho();
    let n = params.n_usize();
    let base = p_n(params) / (2.0 * rho);
    let template = Iterate::new(*params, pattern.clone(), Vec::new());
    let deficiency = crate::constants::deficiency(&stack, &pattern)?;
    let j_sup = base + deficiency;

    // check grid and cached jets on the D_- part
    let tau1 = pattern.first_zero();
    let taum = pattern.last_zero();
    let grid = default_grid(tau1 * 1e-3, taum * 1.05, opts.grid_points.max(8));
    let s0_values: Vec<f64> = grid.iter().map(|&t| template.s0_value(t)).collect();
    struct Cached {
        idx: usize,
        t: f64,
        f0: Jet,
        eta: Jet,
        prod: Jet,
    }
    let mut cached: Vec<Cached> = grid
        .iter()
        .enumerate()
        .filter(|&(_, &t)| pattern.in_d_minus(t))
        .map(|(idx, &t)| Cached {
            idx,
            t,
            f0: Jet::power(t, rho / 2.0 + n as f64 - 1.0, n)
                .scale(1.0 / crate::special::factorial(params.n() - 1)),
            eta: eta_jet(&pattern, t, n),
            prod: Jet::constant(1.0, n),
        })
        .collect();

    // accept with half the verdict tolerances so the produced iterates
    // re-pass check_inc_rho with headroom
    let admissible = |values: &[f64]| -> bool {
        values
            .iter()
            .zip(&s0_values)
            .all(|(&v, &s0)| v >= -0.5e-12 * s0.max(f64::MIN_POSITIVE))
            && values
                .windows(2)
                .all(|w| w[1] - w[0] >= -0.5e-10 * (1.0 + w[0].abs()))
    };

    let mut rows = vec![IterationRow {
        k: 0,
        epsilon: 0.0,
        j_value: base,
        gap: deficiency,
        margin: 0.0,
    }];
    let mut epsilons: Vec<f64> = Vec::new();
    let mut backtracks: Vec<u32> = Vec::new();
    let mut values = s0_values.clone();
    let mut prev_eps = 1.0f64;
    let mut prev_j = base;

    for k in 1..=opts.iterations {
        // nonincreasing caps keep the schedule monotone; the floor keeps
        // every eps_k inside (0, 1) even when the damping budget saturates
        let mut eps = (alpha / k as f64).min(prev_eps).clamp(1e-300, 0.999);
        let mut tries = 0u32;
        let accepted = loop {
            let mut trial_values = values.clone();
            let mut trial_jets = Vec::with_capacity(cached.len());
            for c in &cached {
                let factor = Jet::constant(1.0, n).add(&c.eta.scale(-eps));
                let trial = c.prod.mul(&factor);
                trial_values[c.idx] = c.t * c.f0.mul(&trial).derivative(n);
                trial_jets.push(trial);
            }
            if admissible(&trial_values) {
                break Some((trial_values, trial_jets));
            }
            eps = (eps * 0.5).max(1e-300);
            tries += 1;
            if tries > 40 {
                break None;
            }
        };
        let Some((trial_values, trial_jets)) = accepted else {
            return Err(Error::NonConvergence(format!(
                "no admissible eps at iteration {k} after 40 halvings"
            )));
        };
        values = trial_values;
        for (c, jet) in cached.iter_mut().zip(trial_jets) {
            c.prod = jet;
        }
        epsilons.push(eps);
        backtracks.push(tries);
        prev_eps = eps;

        // J_k = base + int_{D_-} (f_k - f_0) psi, with the damping defect
        // 1 - prod(1 - eps_i eta) accumulated cancellation-free
        let snapshot = epsilons.clone();
        let it = Iterate::new(*params, pattern.clone(), snapshot);
        let mut correction = 0.0;
        for (a, b) in pattern.d_minus() {
            let mut spec = IntegrationSpec::new(a, b).with_rel_tol(opts.quad_rel);
            if a == 0.0 {
                spec = spec.with_singularity(1.5 * rho - 1.0);
            }
            let q = integrate(
                &|t: f64| {
                    -it.f0_value(t) * it.bump_defect(t) * stack.psi(t).unwrap_or(f64::NAN)
                },
                &spec,
            )?;
            correction += q.value;
        }
        let j_value = base + correction;
        if j_value > j_sup * (1.0 + 1e-8) + 1e-12 {
            return Err(Error::OracleFailure(format!(
                "J(s_{k}) = {j_value:.17e} exceeds J(rho) = {j_sup:.17e}"
            )));
        }
        if j_value < prev_j - 1e-9 * prev_j.abs() {
            return Err(Error::OracleFailure(format!(
                "J(s_{k}) = {j_value:.17e} dropped below J(s_{}) = {prev_j:.17e}",
                k - 1
            )));
        }
        prev_j = j_value;

        let margin = cached
            .iter()
            .map(|c| 1.0 - c.prod.value())
            .fold(f64::INFINITY, f64::min)
            .max(0.0);
        rows.push(IterationRow {
            k,
            epsilon: eps,
            j_value,
            gap: j_sup - j_value,
            margin,
        });
    }

    let final_iterate = GridFunction::from_iterate(
        Arc::new(Iterate::new(*params, pattern, epsilons.clone())),
        opts.grid_points.max(8),
    );
    Ok(MaximizeRun {
        rows,
        j_sup,
        schedule: EpsilonSchedule {
            alpha,
            epsilons,
            backtracks,
        },
        final_iterate,
    })
}

/// Build `s_k` for explicit damping factors (used by the non-attainment
/// experiments).
pub fn iterate_with_epsilons(params: &ProblemParams, epsilons: Vec<f64>) -> Result<GridFunction> {
    params.require_rho_above_one()?;
    let (_, pattern) = pattern_for(params)?;
    Ok(GridFunction::from_iterate(
        Arc::new(Iterate::new(*params, pattern, epsilons)),
        512,
    ))
}
