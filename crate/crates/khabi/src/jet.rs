//! Truncated Taylor series ("jets") for analytic differentiation.
//!
//! A jet holds the coefficients of `f(t0 + h)` in powers of `h` up to a fixed
//! order; products propagate derivatives exactly, so evaluating the n-th
//! derivative of products like `t^a * cos(w t)^p` carries no finite-difference
//! noise.

#[derive(Debug, Clone)]
pub struct Jet {
    /// `c[j]` = `f^(j)(t0) / j!`
    c: Vec<f64>,
}

impl Jet {
    pub fn constant(value: f64, order: usize) -> Self {
        let mut c = vec![0.0; order + 1];
        c[0] = value;
        Self { c }
    }

    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    pub fn coeff(&self, j: usize) -> f64 {
        self.c.get(j).copied().unwrap_or(0.0)
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// `f^(k)(t0)` recovered from the coefficient.
    pub fn derivative(&self, k: usize) -> f64 {
        let mut fact = 1.0;
        for j in 2..=k as u64 {
            fact *= j as f64;
        }
        self.coeff(k) * fact
    }

    /// Jet of `(t0 + h)^a` for real `a`, `t0 > 0`.
    pub fn power(t0: f64, a: f64, order: usize) -> Self {
        debug_assert!(t0 > 0.0);
        let mut c = vec![0.0; order + 1];
        c[0] = t0.powf(a);
        for j in 1..=order {
            // c_j = c_{j-1} * (a - j + 1) / (j * t0)
            c[j] = c[j - 1] * (a - (j as f64) + 1.0) / (j as f64 * t0);
        }
        Self { c }
    }

    /// Jet of `cos(w (t0 + h))`.
    pub fn cos(t0: f64, w: f64, order: usize) -> Self {
        let (s0, c0) = (w * t0).sin_cos();
        let mut c = vec![0.0; order + 1];
        let mut wj = 1.0;
        let mut fact = 1.0;
        for (j, slot) in c.iter_mut().enumerate() {
            if j > 0 {
                wj *= w;
                fact *= j as f64;
            }
            *slot = match j % 4 {
                0 => c0,
                1 => -s0,
                2 => -c0,
                _ => s0,
            } * wj
                / fact;
        }
        Self { c }
    }

    pub fn scale(&self, k: f64) -> Self {
        Self {
            c: self.c.iter().map(|&x| k * x).collect(),
        }
    }

    pub fn add(&self, other: &Jet) -> Self {
        debug_assert_eq!(self.c.len(), other.c.len());
        Self {
            c: self
                .c
                .iter()
                .zip(&other.c)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }

    /// Truncated Cauchy product.
    pub fn mul(&self, other: &Jet) -> Self {
        let ord = self.order().min(other.order());
        let mut c = vec![0.0; ord + 1];
        for (j, slot) in c.iter_mut().enumerate() {
            let mut acc = 0.0;
            for i in 0..=j {
                acc += self.coeff(i) * other.coeff(j - i);
            }
            *slot = acc;
        }
        Self { c }
    }

    pub fn powi(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Jet::constant(1.0, self.order());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn power_jet_derivatives() {
        // d^3/dt^3 t^4.5 at t = 2
        let j = Jet::power(2.0, 4.5, 4);
        let expect = 4.5 * 3.5 * 2.5 * 2.0f64.powf(1.5);
        assert!(rel(j.derivative(3), expect) < 1e-13);
    }

    #[test]
    fn cos_jet_derivatives() {
        let w = 3.0;
        let j = Jet::cos(0.7, w, 5);
        assert!(rel(j.value(), (w * 0.7).cos()) < 1e-14);
        assert!(rel(j.derivative(1), -w * (w * 0.7).sin()) < 1e-13);
        assert!(rel(j.derivative(2), -w * w * (w * 0.7).cos()) < 1e-13);
    }

    #[test]
    fn product_rule_via_mul() {
        // (t^2 * cos t)'' at t0 = 1.3:
        // 2 cos t - 4 t sin t - t^2 cos t
        let t0 = 1.3;
        let p = Jet::power(t0, 2.0, 3).mul(&Jet::cos(t0, 1.0, 3));
        let expect = 2.0 * t0.cos() - 4.0 * t0 * t0.sin() - t0 * t0 * t0.cos();
        assert!(rel(p.derivative(2), expect) < 1e-12);
    }

    #[test]
    fn powi_matches_repeated_mul() {
        let j = Jet::cos(0.4, 2.0, 4);
        let a = j.powi(4);
        let b = j.mul(&j).mul(&j).mul(&j);
        for k in 0..=4 {
            assert!((a.coeff(k) - b.coeff(k)).abs() < 1e-12 * b.coeff(k).abs().max(1.0));
        }
    }
}
