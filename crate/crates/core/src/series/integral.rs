use super::SeriesValue;
use crate::circle::WeightFunction;
use crate::quad::GaussLegendre;
use crate::{Error, Real, Result};

/// Nodes per axis for the weighted singular integral.
pub const WEIGHTED_NODES: usize = 256;

/// Archimedean singular integral
/// `c³ ∫₀¹ ∫₀^{1−t₁} (t₁ t₂ (t₁+t₂))^{c−1} dt₂ dt₁`, for `c > 1/3`.
///
/// With `t₁ = ρw`, `t₂ = ρ(1−w)` the integrand separates into
/// `ρ^{3c−2}` (integrated exactly, giving `1/(3c−1)`) and
/// `(w(1−w))^{c−1}`, which is symmetric about `1/2`. On `[0, 1/2]` the
/// substitution `w = s^{1/c}` removes the endpoint singularity; the remaining
/// smooth integral is done by adaptive Gauss–Legendre.
pub fn sing_int<T: Real>(c: T) -> Result<SeriesValue<T>> {
    let one = T::one();
    if !(c > one / T::lit(3.0)) {
        return Err(Error::DivergentParameter {
            c: c.to_f64_lossy(),
            abscissa: 1.0 / 3.0,
        });
    }
    let inv_c = one / c;
    let upper = T::lit(0.5).powf(c);
    let integrand = |s: T| (one - s.powf(inv_c)).powf(c - one) * inv_c;
    let (half, err) = adaptive(T::zero(), upper, &integrand, T::lit(1e-15), 40);
    let scale = T::lit(2.0) * c * c * c / (T::lit(3.0) * c - one);
    Ok(SeriesValue {
        value: scale * half,
        truncation_bound: scale * err,
        c,
        y: None,
        cutoff: 0,
    })
}

fn adaptive<T: Real, F: Fn(T) -> T>(a: T, b: T, f: &F, tol: T, depth: u32) -> (T, T) {
    let coarse = GaussLegendre::new(16).integrate(a, b, f);
    let fine = GaussLegendre::new(32).integrate(a, b, f);
    let err = (fine - coarse).abs();
    if err <= tol * (T::one() + fine.abs()) || depth == 0 {
        return (fine, err);
    }
    let mid = (a + b) / T::lit(2.0);
    let (l, el) = adaptive(a, mid, f, tol / T::lit(2.0), depth - 1);
    let (r, er) = adaptive(mid, b, f, tol / T::lit(2.0), depth - 1);
    (l + r, el + er)
}

/// Weighted singular integral
/// `c³ ∬ Φ(t₁)Φ(t₂)Φ(t₁+t₂) (t₁ t₂ (t₁+t₂))^{c−1} dt₁ dt₂`
/// by a tensor Gauss–Legendre rule on the support box. The bound reported is
/// the difference against a half-resolution rule.
pub fn sing_int_weighted<T: Real>(c: T, phi: &WeightFunction<T>) -> Result<SeriesValue<T>> {
    let Some((lo, hi)) = phi.support() else {
        return Ok(SeriesValue {
            value: T::zero(),
            truncation_bound: T::zero(),
            c,
            y: None,
            cutoff: 0,
        });
    };
    let fine = tensor_rule(c, phi, lo, hi, WEIGHTED_NODES);
    let coarse = tensor_rule(c, phi, lo, hi, WEIGHTED_NODES / 2);
    Ok(SeriesValue {
        value: fine,
        truncation_bound: (fine - coarse).abs(),
        c,
        y: None,
        cutoff: 0,
    })
}

fn tensor_rule<T: Real>(c: T, phi: &WeightFunction<T>, lo: T, hi: T, n: usize) -> T {
    let nodes = GaussLegendre::new(n).mapped(lo, hi);
    let weighted: Vec<(T, T)> = nodes.iter().map(|&(t, w)| (t, w * phi.eval(t))).collect();
    let exponent = c - T::one();
    let mut total = T::zero();
    for &(t1, w1) in &weighted {
        if w1 == T::zero() {
            continue;
        }
        let mut row = T::zero();
        for &(t2, w2) in &weighted {
            if w2 == T::zero() {
                continue;
            }
            let s = t1 + t2;
            let g = phi.eval(s);
            if g != T::zero() {
                row = row + w2 * g * (t1 * t2 * s).powf(exponent);
            }
        }
        total = total + w1 * row;
    }
    c * c * c * total
}
