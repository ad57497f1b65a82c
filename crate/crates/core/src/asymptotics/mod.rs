//! Dickman's function, the saddle point of `Σ_{p<=y} log p/(p^c − 1)` and the
//! binomial heuristic for the number of smooth triples.

mod rho;
mod saddle;

pub use rho::{dickman_rho, psi_estimate, rho_table, RhoTable, RHO_MAX_U, RHO_STEPS_PER_UNIT};
pub use saddle::{g, saddle_point, saddle_point_from, SaddlePoint, DIRECT_PRIME_LIMIT};

use statrs::function::gamma::ln_gamma;

use crate::smooth::prime_count;
use crate::{Error, Real, Result};

/// Inputs and outcome of the heuristic lower bound for `N(H, κ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeuristicCount<T> {
    pub height: T,
    pub kappa: T,
    /// `⌊(log H)^κ⌋`
    pub y: u64,
    pub pi_y: u64,
    /// `⌊log H / (κ log log H)⌋`
    pub k: u64,
    /// `log [C(π, K) C(π − K, K) C(π − 2K, K)]`
    pub log_count: T,
    /// `3 (1 − 1/κ) log H`
    pub comparison: T,
}

fn ln_binomial(n: u64, k: u64) -> f64 {
    ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)
}

/// Counts the ways to choose three disjoint sets of `K` primes below
/// `y = (log H)^κ`; each choice gives products of size about `H`.
pub fn heuristic_count<T: Real>(height: T, kappa: T) -> Result<HeuristicCount<T>> {
    if !(height >= T::lit(16.0)) || !height.is_finite() {
        return Err(Error::InvalidArgument(
            "heuristic_count needs H >= 16".into(),
        ));
    }
    if !(kappa > T::one()) {
        return Err(Error::InvalidArgument(
            "heuristic_count needs kappa > 1".into(),
        ));
    }
    let log_h = height.ln();
    let y_real = log_h.powf(kappa).floor();
    let y = y_real.to_u64().ok_or(Error::RangeExceeded {
        what: "y",
        value: y_real.to_f64_lossy(),
    })?;
    let k = (log_h / (kappa * log_h.ln())).floor().to_u64().unwrap_or(0);
    let pi_y = prime_count(y)?;
    if pi_y < 3 * k {
        return Err(Error::InsufficientPrimes { pi_y, k });
    }
    let log_count = ln_binomial(pi_y, k) + ln_binomial(pi_y - k, k) + ln_binomial(pi_y - 2 * k, k);
    Ok(HeuristicCount {
        height,
        kappa,
        y,
        pi_y,
        k,
        log_count: T::lit(log_count),
        comparison: T::lit(3.0) * (T::one() - T::one() / kappa) * log_h,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_height_has_k_one() {
        let h = heuristic_count(1e6f64, 3.0).unwrap();
        assert_eq!(h.k, 1);
        assert_eq!(h.y, 2636);
        assert_eq!(h.pi_y, 382);
        let expect = (382f64).ln() + (381f64).ln() + (380f64).ln();
        assert!((h.log_count - expect).abs() < 1e-9);
    }

    #[test]
    fn binomials_exact_for_small_arguments() {
        assert!((ln_binomial(10, 3) - 120f64.ln()).abs() < 1e-12);
        assert_eq!(ln_binomial(7, 0), 0.0);
    }

    #[test]
    fn errors() {
        assert!(heuristic_count(10.0f64, 3.0).is_err());
        assert!(heuristic_count(1e6f64, 1.0).is_err());
        // κ barely above 1 leaves fewer than 3K primes
        assert!(matches!(
            heuristic_count(1e12f64, 1.05),
            Err(Error::InsufficientPrimes { .. })
        ));
    }
}
