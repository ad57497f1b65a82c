use crate::quad::composite;
use crate::smooth::shared_primes;
use crate::{Error, Real, Result};

/// Primes beyond this bound are replaced by the prime number theorem density.
pub const DIRECT_PRIME_LIMIT: u64 = 10_000_000;

const MAX_EXPANSIONS: usize = 200;
const MAX_HALVINGS: usize = 200;

/// Root `c` of `g(c; y) = log x`, with `residual = g(c; y) − log x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaddlePoint<T> {
    pub x: T,
    pub y: T,
    pub c: T,
    pub residual: T,
}

/// `g(c; y) = Σ_{p <= y} log p / (p^c − 1)`, summed over ascending primes.
///
/// For `y` beyond [`DIRECT_PRIME_LIMIT`] the primes above the limit are
/// accounted for by `∫ dt / (t^c − 1)` over `(limit, y]`.
pub fn g<T: Real>(c: T, y: T) -> T {
    let top = y.floor().to_u64().unwrap_or(u64::MAX);
    let direct = top.min(DIRECT_PRIME_LIMIT);
    let primes = shared_primes(direct);
    let mut sum = T::zero();
    for &p in primes.iter() {
        let pf = T::from_u64_lossy(p);
        let lp = pf.ln();
        sum = sum + lp / (c * lp).exp_m1();
    }
    if top > DIRECT_PRIME_LIMIT {
        sum = sum + density_tail(c, T::from_u64_lossy(DIRECT_PRIME_LIMIT), y);
    }
    sum
}

/// `∫_a^b dt/(t^c − 1)` with `t = e^s`.
fn density_tail<T: Real>(c: T, a: T, b: T) -> T {
    let (sa, sb) = (a.ln(), b.ln());
    let panels = ((sb - sa).ceil().to_usize().unwrap_or(1)).max(1) * 4;
    composite(sa, sb, panels, 16, |s: T| s.exp() / (c * s).exp_m1())
}

pub fn saddle_point<T: Real>(x: T, y: T) -> Result<SaddlePoint<T>> {
    saddle_point_from(x, y, T::lit(0.5), T::one())
}

/// Bisection for `g(c; y) = log x`, starting from the bracket `[lo, hi]` and
/// widening it geometrically until it straddles the root.
pub fn saddle_point_from<T: Real>(x: T, y: T, lo: T, hi: T) -> Result<SaddlePoint<T>> {
    let two = T::lit(2.0);
    if !(x >= two && y >= two) || !x.is_finite() || !y.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "saddle point needs x >= 2 and y >= 2 (got x = {x}, y = {y})"
        )));
    }
    if !(lo > T::zero() && hi > lo) {
        return Err(Error::InvalidArgument(
            "initial bracket must satisfy 0 < lo < hi".into(),
        ));
    }
    let target = x.ln();
    let no_bracket = || Error::NoBracket {
        x: x.to_f64_lossy(),
        y: y.to_f64_lossy(),
    };
    let (mut lo, mut hi) = (lo, hi);
    let mut expansions = 0;
    while g(lo, y) < target {
        lo = lo / two;
        expansions += 1;
        if expansions > MAX_EXPANSIONS || lo == T::zero() {
            return Err(no_bracket());
        }
    }
    while g(hi, y) > target {
        hi = hi * two;
        expansions += 1;
        if expansions > MAX_EXPANSIONS || !hi.is_finite() {
            return Err(no_bracket());
        }
    }
    for _ in 0..MAX_HALVINGS {
        let mid = (lo + hi) / two;
        if mid <= lo || mid >= hi {
            break;
        }
        let v = g(mid, y);
        if v == target {
            lo = mid;
            hi = mid;
            break;
        }
        if v > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (rl, rh) = (g(lo, y) - target, g(hi, y) - target);
    let (c, residual) = if rl.abs() <= rh.abs() {
        (lo, rl)
    } else {
        (hi, rh)
    };
    Ok(SaddlePoint { x, y, c, residual })
}
