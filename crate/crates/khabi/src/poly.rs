//! Dense univariate polynomials with `f64` coefficients, ascending order.
//!
//! Degrees stay tiny here (at most the dimension `n`), so everything is
//! plain Horner evaluation and coefficient arithmetic.

#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<f64>,
}

impl Poly {
    pub fn new(coeffs: Vec<f64>) -> Self {
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        Self { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Self { coeffs: vec![1.0] }
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(&c) if c == 0.0) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> f64 {
        self.coeffs.get(j).copied().unwrap_or(0.0)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for &c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, &c)| j as f64 * c)
            .collect();
        Poly::new(coeffs)
    }

    /// Divide by `x` `times` times. Panics if a removed coefficient is not
    /// (numerically) zero; callers strip structural zeros only.
    pub fn shift_down(&self, times: usize) -> Poly {
        let scale = self.max_abs_coeff();
        for j in 0..times.min(self.coeffs.len()) {
            assert!(
                self.coeffs[j].abs() <= 1e-11 * scale,
                "shift_down would drop a nonzero coefficient"
            );
        }
        if times >= self.coeffs.len() {
            return Poly::zero();
        }
        Poly::new(self.coeffs[times..].to_vec())
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Number of strict sign changes in the coefficient sequence
    /// (Descartes' bound on the count of positive roots, multiplicity
    /// included).
    pub fn descartes_sign_changes(&self) -> usize {
        let mut changes = 0;
        let mut last = 0.0f64;
        for &c in &self.coeffs {
            if c == 0.0 {
                continue;
            }
            if last != 0.0 && c.signum() != last.signum() {
                changes += 1;
            }
            last = c;
        }
        changes
    }

    /// Cauchy upper bound for the absolute value of any root.
    pub fn cauchy_root_bound(&self) -> f64 {
        let d = self.degree();
        if self.is_zero() || d == 0 {
            return 1.0;
        }
        let lead = self.coeffs[d].abs();
        let m = self.coeffs[..d].iter().fold(0.0f64, |m, c| m.max(c.abs()));
        1.0 + m / lead
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_and_derivative() {
        // 1 - 3x + 2x^2
        let p = Poly::new(vec![1.0, -3.0, 2.0]);
        assert_eq!(p.eval(0.0), 1.0);
        assert_eq!(p.eval(1.0), 0.0);
        assert_eq!(p.eval(2.0), 3.0);
        let d = p.derivative();
        assert_eq!(d.coeffs(), &[-3.0, 4.0]);
    }

    #[test]
    fn descartes_and_bound() {
        // (x-1)(x-2) = 2 - 3x + x^2: two positive roots, two sign changes
        let p = Poly::new(vec![2.0, -3.0, 1.0]);
        assert_eq!(p.descartes_sign_changes(), 2);
        assert!(p.cauchy_root_bound() >= 2.0);
    }

    #[test]
    fn shift_down_strips_structural_zeros() {
        let p = Poly::new(vec![0.0, 0.0, 5.0, 1.0]);
        let q = p.shift_down(2);
        assert_eq!(q.coeffs(), &[5.0, 1.0]);
    }
}
