//! Singular integrals and singular series.
//!
//! Non-archimedean series are Euler products over all primes. Factors up to
//! a cutoff (default [`DEFAULT_CUTOFF`]) are multiplied directly; the tail
//! beyond it is summed analytically (see `euler.rs`) and its error is
//! carried in [`SeriesValue::truncation_bound`].

mod euler;
mod integral;
mod zeta;

pub use integral::{sing_int, sing_int_weighted};
pub use zeta::{prime_zeta, zeta_minus_one, zeta_real, EM_TERMS};

use euler::{accelerated_product, FormalSeries, ProductEval};

use crate::{Error, Real, Result};

/// Default prime cutoff for direct multiplication of Euler factors.
pub const DEFAULT_CUTOFF: u64 = 10_000_000;

/// A numerically evaluated constant and a bound on the neglected part.
///
/// For Euler products the bound applies to the logarithm:
/// `|log(value) − log(true)| <= truncation_bound`. For integrals it is an
/// absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue<T> {
    pub value: T,
    pub truncation_bound: T,
    pub c: T,
    /// Smoothness bound; `None` for the full product over all primes.
    pub y: Option<u64>,
    /// Largest prime multiplied directly (0 for integrals).
    pub cutoff: u64,
}

fn third<T: Real>() -> T {
    T::one() / T::lit(3.0)
}

fn check_above<T: Real>(c: T, abscissa: T) -> Result<()> {
    if c > abscissa {
        Ok(())
    } else {
        Err(Error::DivergentParameter {
            c: c.to_f64_lossy(),
            abscissa: abscissa.to_f64_lossy(),
        })
    }
}

/// `log` of the `p`-th factor `1 + (p−1)/(p(p^{3c−1}−1)) · ((p−p^c)/(p−1))³`.
pub fn log_factor_f<T: Real>(c: T, p: u64) -> T {
    let pf = T::from_u64_lossy(p);
    let one = T::one();
    let t = pf.powf(one - T::lit(3.0) * c);
    let r = one / pf;
    let ratio = (pf - pf.powf(c)) / (pf - one);
    // (p−1)/(p(p^{3c−1}−1)) = (1−r)·t/(1−t)
    let increment = (one - r) * t / (one - t) * ratio * ratio * ratio;
    increment.ln_1p()
}

/// `log` of `1 + p^{1−3c}(((p−1)/p)((p−p^c)/(p−1))³ − 1)`, which equals the
/// `S_f` factor times `1 − p^{1−3c}`.
pub fn log_factor_fstar<T: Real>(c: T, p: u64) -> T {
    let pf = T::from_u64_lossy(p);
    let one = T::one();
    let t = pf.powf(one - T::lit(3.0) * c);
    let r = one / pf;
    let bracket = if c < one {
        // (1−q)³/(1−r)² − 1 without cancellation
        let q = pf.powf(c - one);
        (T::lit(3.0) * (-q).ln_1p() - T::lit(2.0) * (-r).ln_1p()).exp_m1()
    } else {
        let ratio = (pf - pf.powf(c)) / (pf - one);
        (one - r) * ratio * ratio * ratio - one
    };
    (t * bracket).ln_1p()
}

/// `log(1 − 1/(p−1)²)`, the factor used for primes above the smoothness bound.
pub fn log_factor_rough<T: Real>(p: u64) -> T {
    let d = T::from_u64_lossy(p - 1);
    (-(T::one() / (d * d))).ln_1p()
}

/// Variables: 0 → `t = p^{1−3c}`, 1 → `q = p^{−|1−c|}`, 2 → `r = p^{−1}`.
fn base_series<T: Real>(c: T, w: T) -> FormalSeries<T> {
    let one = T::one();
    FormalSeries::new([T::lit(3.0) * c - one, (one - c).abs(), one], w)
}

fn series_f<T: Real>(c: T, w: T) -> FormalSeries<T> {
    let s = base_series(c, w);
    let x = if c < T::one() {
        // t/(1−t) · (1−q)³ · (1−r)^{−2}
        s.var(0)
            .mul(&s.one_minus_pow(0, -1))
            .mul(&s.one_minus_pow(1, 3))
            .mul(&s.one_minus_pow(2, -2))
    } else {
        // −r² (1−t)^{−1} (1−q)³ (1−r)^{−2}
        s.var(2)
            .mul(&s.var(2))
            .mul(&s.one_minus_pow(0, -1))
            .mul(&s.one_minus_pow(1, 3))
            .mul(&s.one_minus_pow(2, -2))
            .scale(-T::one())
    };
    x.log1p()
}

fn series_fstar<T: Real>(c: T, w: T) -> FormalSeries<T> {
    let s = base_series(c, w);
    let x = if c < T::one() {
        // t((1−q)³(1−r)^{−2} − 1)
        let inner = s
            .one_minus_pow(1, 3)
            .mul(&s.one_minus_pow(2, -2))
            .add(&s.constant(-T::one()));
        s.var(0).mul(&inner)
    } else {
        // −r²(1−q)³(1−r)^{−2} − t
        s.var(2)
            .mul(&s.var(2))
            .mul(&s.one_minus_pow(1, 3))
            .mul(&s.one_minus_pow(2, -2))
            .add(&s.var(0))
            .scale(-T::one())
    };
    x.log1p()
}

fn series_rough<T: Real>(w: T) -> FormalSeries<T> {
    // −r²(1−r)^{−2}
    let s = FormalSeries::new([T::one(), T::one(), T::one()], w);
    s.var(2)
        .mul(&s.var(2))
        .mul(&s.one_minus_pow(2, -2))
        .scale(-T::one())
        .log1p()
}

fn finite_y_series<T: Real, F>(c: T, y: u64, cutoff: u64, log_factor: F) -> Result<SeriesValue<T>>
where
    F: Fn(u64) -> T + Sync,
{
    if y < 2 {
        return Err(Error::InvalidArgument(format!(
            "smoothness bound y = {y} < 2"
        )));
    }
    let smooth_part = accelerated_product(1, y, &log_factor, |w| {
        FormalSeries::<T>::new([T::one(); 3], w)
    })?;
    let rough = rough_product::<T>(y, cutoff)?;
    Ok(SeriesValue {
        value: smooth_part.value * rough.value,
        truncation_bound: smooth_part.log_bound + rough.log_bound,
        c,
        y: Some(y),
        cutoff: cutoff.max(y),
    })
}

/// `∏_{p > y} (1 − 1/(p−1)²)`.
pub fn rough_product<T: Real>(y: u64, cutoff: u64) -> Result<SeriesValueRaw<T>> {
    let eval = accelerated_product(y, cutoff.max(y), log_factor_rough::<T>, series_rough::<T>)?;
    Ok(eval.into())
}

/// Value with a log-error bound, without parameter bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValueRaw<T> {
    pub value: T,
    pub log_bound: T,
}

impl<T> From<ProductEval<T>> for SeriesValueRaw<T> {
    fn from(e: ProductEval<T>) -> Self {
        SeriesValueRaw {
            value: e.value,
            log_bound: e.log_bound,
        }
    }
}

/// Non-archimedean singular series `S_f(c, y)`.
pub fn sing_f<T: Real>(c: T, y: u64) -> Result<SeriesValue<T>> {
    sing_f_with_cutoff(c, y, DEFAULT_CUTOFF)
}

pub fn sing_f_with_cutoff<T: Real>(c: T, y: u64, cutoff: u64) -> Result<SeriesValue<T>> {
    check_above(c, third())?;
    finite_y_series(c, y, cutoff, |p| log_factor_f(c, p))
}

/// Primitive non-archimedean singular series `S_f*(c, y)`.
pub fn sing_fstar<T: Real>(c: T, y: u64) -> Result<SeriesValue<T>> {
    sing_fstar_with_cutoff(c, y, DEFAULT_CUTOFF)
}

pub fn sing_fstar_with_cutoff<T: Real>(c: T, y: u64, cutoff: u64) -> Result<SeriesValue<T>> {
    check_above(c, third())?;
    finite_y_series(c, y, cutoff, |p| log_factor_fstar(c, p))
}

/// `S_f(c) = ∏_p f_p(c)`, convergent for `c > 2/3`.
pub fn sing_f_limit<T: Real>(c: T) -> Result<SeriesValue<T>> {
    sing_f_limit_with_cutoff(c, DEFAULT_CUTOFF)
}

pub fn sing_f_limit_with_cutoff<T: Real>(c: T, cutoff: u64) -> Result<SeriesValue<T>> {
    check_above(c, T::lit(2.0) * third())?;
    let eval = accelerated_product(1, cutoff, |p| log_factor_f(c, p), |w| series_f(c, w))?;
    Ok(SeriesValue {
        value: eval.value,
        truncation_bound: eval.log_bound,
        c,
        y: None,
        cutoff,
    })
}

/// `S_f*(c) = ∏_p f*_p(c)`, convergent for `c > 1/2`.
pub fn sing_fstar_limit<T: Real>(c: T) -> Result<SeriesValue<T>> {
    sing_fstar_limit_with_cutoff(c, DEFAULT_CUTOFF)
}

pub fn sing_fstar_limit_with_cutoff<T: Real>(c: T, cutoff: u64) -> Result<SeriesValue<T>> {
    check_above(c, T::lit(0.5))?;
    let eval = accelerated_product(
        1,
        cutoff,
        |p| log_factor_fstar(c, p),
        |w| series_fstar(c, w),
    )?;
    Ok(SeriesValue {
        value: eval.value,
        truncation_bound: eval.log_bound,
        c,
        y: None,
        cutoff,
    })
}

/// Both sides of `S_f*(c) = S_f(c) / ζ(3c − 1)`, each evaluated on its own.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerIdentityCheck<T> {
    pub c: T,
    pub lhs: T,
    pub rhs: T,
    pub residual: T,
    /// Combined error allowance from both truncation bounds.
    pub allowance: T,
}

pub fn verify_euler_identity<T: Real>(c: T) -> Result<EulerIdentityCheck<T>> {
    verify_euler_identity_with_cutoff(c, DEFAULT_CUTOFF)
}

pub fn verify_euler_identity_with_cutoff<T: Real>(
    c: T,
    cutoff: u64,
) -> Result<EulerIdentityCheck<T>> {
    check_above(c, T::lit(2.0) * third())?;
    let lhs = sing_fstar_limit_with_cutoff(c, cutoff)?;
    let sf = sing_f_limit_with_cutoff(c, cutoff)?;
    let zeta = zeta_real(T::lit(3.0) * c - T::one())?;
    let rhs = sf.value / zeta;
    Ok(EulerIdentityCheck {
        c,
        lhs: lhs.value,
        rhs,
        residual: (lhs.value - rhs).abs(),
        allowance: lhs.value * lhs.truncation_bound + rhs * sf.truncation_bound,
    })
}
