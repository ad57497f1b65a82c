use crate::{Error, Real, Result};

/// Compactly supported weight `Φ` on `(0, 1)`.
///
/// The bump is `1` on `[ε, 1−ε]`, `0` outside `[ε/2, 1−ε/2]`, and joins the
/// two through the `C^∞` step `ψ(s)/(ψ(s)+ψ(1−s))`, `ψ(s) = exp(−1/s)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightFunction<T> {
    kind: Kind<T>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Kind<T> {
    Bump { epsilon: T },
    Zero,
}

impl<T: Real> WeightFunction<T> {
    pub fn bump(epsilon: T) -> Result<Self> {
        if !(epsilon > T::zero() && epsilon < T::lit(0.5)) {
            return Err(Error::BadEpsilon(epsilon.to_f64_lossy()));
        }
        Ok(WeightFunction {
            kind: Kind::Bump { epsilon },
        })
    }

    /// `Φ ≡ 0`.
    pub fn zero() -> Self {
        WeightFunction { kind: Kind::Zero }
    }

    pub fn epsilon(&self) -> Option<T> {
        match self.kind {
            Kind::Bump { epsilon } => Some(epsilon),
            Kind::Zero => None,
        }
    }

    /// Closed interval outside of which `Φ` vanishes; `None` for `Φ ≡ 0`.
    pub fn support(&self) -> Option<(T, T)> {
        self.epsilon().map(|e| {
            let h = e / T::lit(2.0);
            (h, T::one() - h)
        })
    }

    /// Points where the closed-form pieces of `Φ` meet.
    pub fn breakpoints(&self) -> Vec<T> {
        match self.epsilon() {
            Some(e) => {
                let h = e / T::lit(2.0);
                vec![h, e, T::one() - e, T::one() - h]
            }
            None => Vec::new(),
        }
    }

    pub fn eval(&self, w: T) -> T {
        match self.kind {
            Kind::Zero => T::zero(),
            Kind::Bump { epsilon } => {
                let h = epsilon / T::lit(2.0);
                let one = T::one();
                if w <= h || w >= one - h {
                    T::zero()
                } else if w >= epsilon && w <= one - epsilon {
                    one
                } else if w < epsilon {
                    smooth_step((w - h) / h)
                } else {
                    smooth_step((one - h - w) / h)
                }
            }
        }
    }
}

fn psi<T: Real>(s: T) -> T {
    if s <= T::zero() {
        T::zero()
    } else {
        (-T::one() / s).exp()
    }
}

fn smooth_step<T: Real>(s: T) -> T {
    let a = psi(s);
    let b = psi(T::one() - s);
    a / (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plateau_and_support() {
        let phi = WeightFunction::bump(0.2f64).unwrap();
        assert_eq!(phi.eval(0.5), 1.0);
        assert_eq!(phi.eval(0.2), 1.0);
        assert_eq!(phi.eval(0.8), 1.0);
        assert_eq!(phi.eval(0.05), 0.0);
        assert_eq!(phi.eval(0.1), 0.0);
        assert_eq!(phi.eval(0.95), 0.0);
        assert_eq!(phi.eval(-3.0), 0.0);
        assert!(phi.eval(0.15) > 0.0 && phi.eval(0.15) < 1.0);
    }

    #[test]
    fn transitions_are_symmetric() {
        let phi = WeightFunction::bump(0.3f64).unwrap();
        for k in 0..100 {
            let w = 0.15 + 0.15 * k as f64 / 100.0;
            // 1 − w itself carries a rounding error of order 1e-16
            assert!((phi.eval(w) - phi.eval(1.0 - w)).abs() < 1e-13);
        }
        assert!((phi.eval(0.225) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_epsilon() {
        assert_eq!(WeightFunction::bump(0.0f64), Err(Error::BadEpsilon(0.0)));
        assert_eq!(WeightFunction::bump(0.5f64), Err(Error::BadEpsilon(0.5)));
        assert!(WeightFunction::bump(-0.1f64).is_err());
    }

    #[test]
    fn finite_differences_stay_bounded() {
        // differences of order k scale like h^k times the k-th derivative
        let phi = WeightFunction::bump(0.2f64).unwrap();
        let h = 1e-3;
        let mut worst = [0.0f64; 5];
        let mut w = 0.09;
        while w < 0.21 {
            let f = |k: i32| phi.eval(w + k as f64 * h);
            let d = [
                f(0),
                (f(1) - f(-1)) / (2.0 * h),
                (f(1) - 2.0 * f(0) + f(-1)) / (h * h),
                (f(2) - 2.0 * f(1) + 2.0 * f(-1) - f(-2)) / (2.0 * h.powi(3)),
                (f(2) - 4.0 * f(1) + 6.0 * f(0) - 4.0 * f(-1) + f(-2)) / h.powi(4),
            ];
            for k in 0..5 {
                worst[k] = worst[k].max(d[k].abs());
            }
            w += h / 3.0;
        }
        assert!(worst.iter().all(|v| v.is_finite()));
        assert!(worst[0] <= 1.0);
        assert!(
            worst[1] < 1e2 && worst[2] < 1e4 && worst[3] < 1e6 && worst[4] < 1e8,
            "{worst:?}"
        );
    }
}
