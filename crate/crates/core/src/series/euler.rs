//! Euler products with an accelerated tail.
//!
//! Factors for `p <= cutoff` are multiplied directly (in log space, ascending
//! primes). Beyond the cutoff, `log f(p)` is expanded as a power series in a
//! few monomials `p^{-w}`; grouping by total exponent `α` gives
//! `Σ_{p > cutoff} log f(p) = Σ_α a_α · (P(α) − Σ_{p <= cutoff} p^{-α})`
//! with `P` the prime zeta function. Terms whose exponent exceeds the
//! truncation weight are bounded with `π(t) < 1.25506 t / log t`.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::zeta::prime_zeta;
use crate::real::CompensatedSum;
use crate::smooth::shared_primes;
use crate::{Error, Real, Result};

/// Up to three formal variables; variable `i` stands for `p^{-weights[i]}`.
#[derive(Debug, Clone)]
pub(crate) struct FormalSeries<T> {
    weights: [T; 3],
    max_weight: T,
    terms: BTreeMap<[u16; 3], T>,
}

impl<T: Real> FormalSeries<T> {
    pub fn new(weights: [T; 3], max_weight: T) -> Self {
        FormalSeries {
            weights,
            max_weight,
            terms: BTreeMap::new(),
        }
    }

    fn weight_of(&self, e: &[u16; 3]) -> T {
        (0..3).fold(T::zero(), |acc, i| {
            acc + self.weights[i] * T::from_u64_lossy(e[i] as u64)
        })
    }

    fn keeps(&self, e: &[u16; 3]) -> bool {
        self.weight_of(e) <= self.max_weight + T::lit(1e-9)
    }

    fn empty_like(&self) -> Self {
        FormalSeries::new(self.weights, self.max_weight)
    }

    fn insert(&mut self, e: [u16; 3], c: T) {
        if c != T::zero() && self.keeps(&e) {
            let slot = self.terms.entry(e).or_insert(T::zero());
            *slot = *slot + c;
        }
    }

    pub fn constant(&self, c: T) -> Self {
        let mut s = self.empty_like();
        s.insert([0, 0, 0], c);
        s
    }

    /// `(1 − v)^m` for variable `v` and integer `m` (binomial series when `m < 0`).
    pub fn one_minus_pow(&self, var: usize, m: i32) -> Self {
        let mut s = self.empty_like();
        let mut coef = T::one();
        let mut k: u16 = 0;
        loop {
            let mut e = [0u16; 3];
            e[var] = k;
            if !self.keeps(&e) || (m >= 0 && k as i32 > m) {
                break;
            }
            s.insert(e, coef);
            // (1 - v)^m = Σ C(m, k) (-v)^k
            coef =
                coef * T::from_i32(k as i32 - m).expect("small") / T::from_u64_lossy(k as u64 + 1);
            k += 1;
            if self.weights[var] <= T::zero() && m < 0 {
                break;
            }
        }
        s
    }

    pub fn var(&self, var: usize) -> Self {
        let mut s = self.empty_like();
        let mut e = [0u16; 3];
        e[var] = 1;
        s.insert(e, T::one());
        s
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut s = self.empty_like();
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &other.terms {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
                s.insert(e, ca * cb);
            }
        }
        s
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut s = self.clone();
        for (e, &c) in &other.terms {
            s.insert(*e, c);
        }
        s
    }

    pub fn scale(&self, k: T) -> Self {
        let mut s = self.empty_like();
        for (e, &c) in &self.terms {
            s.insert(*e, c * k);
        }
        s
    }

    /// `log(1 + self)`; `self` must have no constant term.
    pub fn log1p(&self) -> Self {
        assert!(
            !self.terms.contains_key(&[0, 0, 0]),
            "log1p needs a zero constant term"
        );
        let mut out = self.empty_like();
        if self.terms.is_empty() {
            return out;
        }
        let mut power = self.clone();
        let mut n = 1u64;
        while !power.terms.is_empty() {
            let k = T::one() / T::from_u64_lossy(n);
            let k = if n % 2 == 1 { k } else { -k };
            out = out.add(&power.scale(k));
            power = power.mul(self);
            n += 1;
        }
        out
    }

    /// Coefficients grouped by total exponent, ascending.
    pub fn by_exponent(&self) -> Vec<(T, T)> {
        let mut grouped: BTreeMap<i64, (T, T)> = BTreeMap::new();
        for (e, &c) in &self.terms {
            let w = self.weight_of(e);
            let key = (w.to_f64_lossy() * 1e9).round() as i64;
            let slot = grouped.entry(key).or_insert((w, T::zero()));
            slot.1 = slot.1 + c;
        }
        grouped
            .into_values()
            .filter(|&(_, c)| c != T::zero())
            .collect()
    }
}

/// Upper bound for `Σ_{p > t} p^{-α}`, `α > 1`, from `π(u) < 1.25506 u / log u`
/// and partial summation.
pub(crate) fn prime_power_tail_bound<T: Real>(t: u64, alpha: T) -> T {
    let t = T::from_u64_lossy(t.max(17));
    T::lit(1.25506) * alpha * t.powf(T::one() - alpha) / ((alpha - T::one()) * t.ln())
}

/// Result of an accelerated product: the value and an error bound on `log`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ProductEval<T> {
    pub value: T,
    pub log_bound: T,
}

/// Exponent ceiling for the tail expansion: chosen so that the neglected terms
/// are far below `f64` resolution.
fn max_weight_for<T: Real>(cutoff: u64) -> T {
    let lp = T::from_u64_lossy(cutoff.max(10)).ln();
    T::one() + T::lit(24.0 * std::f64::consts::LN_10) / lp
}

/// Evaluates `∏_{lo < p <= direct_upto} f(p) · ∏_{p > direct_upto} f(p)`.
///
/// `log_factor(p)` returns `log f(p)`; `series(max_weight)` returns the
/// expansion of `log f(p)` used beyond the direct range.
pub(crate) fn accelerated_product<T, F, S>(
    lo: u64,
    direct_upto: u64,
    log_factor: F,
    series: S,
) -> Result<ProductEval<T>>
where
    T: Real,
    F: Fn(u64) -> T + Sync,
    S: Fn(T) -> FormalSeries<T>,
{
    let primes = shared_primes(direct_upto);
    let start = primes.partition_point(|&p| p <= lo);
    let direct = &primes[start..];
    let eps = T::epsilon();

    let mut log_acc = CompensatedSum::new();
    let mut abs_sum = T::zero();
    for &p in direct {
        let l = log_factor(p);
        if !l.is_finite() {
            return Err(Error::PoleFactor(p));
        }
        log_acc.add(l);
        abs_sum = abs_sum + l.abs();
    }
    let log_sum = log_acc.value();

    let cutoff = direct_upto.max(lo);
    let w_max = max_weight_for::<T>(cutoff);
    let shell = T::lit(1.5);
    let expansion = series(w_max + shell).by_exponent();
    if let Some(&(alpha, _)) = expansion
        .iter()
        .find(|(a, _)| *a <= T::one() + T::lit(1e-9))
    {
        return Err(Error::DivergentParameter {
            c: alpha.to_f64_lossy(),
            abscissa: 1.0,
        });
    }
    let (kept, dropped): (Vec<_>, Vec<_>) = expansion.into_iter().partition(|(a, _)| *a <= w_max);

    let all_primes = shared_primes(cutoff);
    let tails: Vec<Result<(T, T)>> = kept
        .par_iter()
        .map(|&(alpha, coef)| {
            let full = prime_zeta(alpha)?;
            let mut partial = CompensatedSum::new();
            for &p in all_primes.iter() {
                partial.add(T::from_u64_lossy(p).powf(-alpha));
            }
            let partial = partial.value();
            let tail = full - partial;
            let rounding = T::lit(8.0) * eps * (full.abs() + partial.abs()) * coef.abs();
            Ok((coef * tail, rounding))
        })
        .collect();
    let mut tail_sum = T::zero();
    let mut rounding = T::lit(16.0) * eps * (abs_sum + log_sum.abs() + T::one());
    for t in tails {
        let (v, r) = t?;
        tail_sum = tail_sum + v;
        rounding = rounding + r + T::lit(4.0) * eps * v.abs();
    }
    let neglected = dropped.iter().fold(T::zero(), |acc, &(alpha, coef)| {
        acc + coef.abs() * prime_power_tail_bound(cutoff, alpha)
    });
    // the shell beyond w_max + 1.5 is not expanded; double the shell estimate to cover it
    let log_bound = T::lit(2.0) * neglected + rounding;
    Ok(ProductEval {
        value: (log_sum + tail_sum).exp(),
        log_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_series() {
        let s = FormalSeries::<f64>::new([1.0, 1.0, 1.0], 6.0);
        // (1 - r)^{-2} = Σ (k+1) r^k
        let inv = s.one_minus_pow(2, -2);
        for k in 0..=6u16 {
            assert_eq!(inv.terms[&[0, 0, k]], k as f64 + 1.0);
        }
        let cube = s.one_minus_pow(1, 3);
        assert_eq!(cube.terms.len(), 4);
        assert_eq!(cube.terms[&[0, 2, 0]], 3.0);
        assert_eq!(cube.terms[&[0, 3, 0]], -1.0);
    }

    #[test]
    fn log1p_of_a_monomial() {
        let s = FormalSeries::<f64>::new([1.0, 1.0, 1.0], 5.0);
        let l = s.var(2).scale(-1.0).log1p();
        // log(1 - r) = -Σ r^k / k
        for k in 1..=5u16 {
            assert!((l.terms[&[0, 0, k]] + 1.0 / k as f64).abs() < 1e-15);
        }
    }

    #[test]
    fn reciprocal_zeta_two_by_acceleration() {
        // ∏_p (1 - p^{-2}) = 6/π²
        let eval = accelerated_product(
            1,
            1000,
            |p| (-(p as f64).powi(-2)).ln_1p(),
            |w| {
                let s = FormalSeries::new([1.0, 1.0, 1.0], w);
                s.var(2).mul(&s.var(2)).scale(-1.0).log1p()
            },
        )
        .unwrap();
        let exact = 6.0 / std::f64::consts::PI.powi(2);
        assert!((eval.value - exact).abs() < 1e-13, "{}", eval.value - exact);
        assert!(eval.log_bound < 1e-12);
    }

    #[test]
    fn tail_bound_dominates_actual_tail() {
        let primes = shared_primes(2_000_000);
        for &alpha in &[1.5f64, 2.0, 3.0] {
            let t = 10_000u64;
            let actual: f64 = primes
                .iter()
                .filter(|&&p| p > t)
                .map(|&p| (p as f64).powf(-alpha))
                .sum();
            assert!(prime_power_tail_bound(t, alpha) > actual);
        }
    }
}
