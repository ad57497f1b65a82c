//! Exact integer arithmetic on abc triples.

use num_integer::Integer;

use crate::smooth::shared_primes;
use crate::{Error, Real, Result};

/// Trial bound used when a triple is built without an explicit one. Any
/// cofactor left below `DEFAULT_TRIAL_BOUND²` (about `1.1e12`) is prime.
pub const DEFAULT_TRIAL_BOUND: u64 = 1 << 20;

/// Largest admissible magnitude of a triple entry.
pub const MAX_ENTRY: u128 = 1 << 127;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factorization {
    pub value: u128,
    /// `(prime, exponent)` with primes strictly increasing.
    pub factors: Vec<(u128, u32)>,
}

impl Factorization {
    pub fn one() -> Self {
        Factorization {
            value: 1,
            factors: Vec::new(),
        }
    }

    pub fn largest_prime(&self) -> Option<u128> {
        self.factors.last().map(|&(p, _)| p)
    }

    pub fn primes(&self) -> impl Iterator<Item = u128> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    /// Product of `p^e`; `None` on overflow.
    pub fn product(&self) -> Option<u128> {
        self.factors
            .iter()
            .try_fold(1u128, |acc, &(p, e)| acc.checked_mul(p.checked_pow(e)?))
    }

    /// The part of the value composed of primes `<= y`, and the rest.
    pub fn split_smooth(&self, y: u128) -> (Factorization, Factorization) {
        let (small, large): (Vec<_>, Vec<_>) = self.factors.iter().partition(|&&(p, _)| p <= y);
        let build = |factors: Vec<(u128, u32)>| {
            let f = Factorization { value: 1, factors };
            Factorization {
                value: f.product().expect("divides an existing value"),
                ..f
            }
        };
        (build(small), build(large))
    }
}

impl std::fmt::Display for Factorization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, &(p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, "·")?;
            }
            if e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Trial division by every prime up to `trial_bound`. A leftover cofactor is
/// accepted as prime when it is at most `trial_bound²`.
pub fn factorize(n: u128, trial_bound: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::InvalidArgument("cannot factor 0".into()));
    }
    if n > MAX_ENTRY {
        return Err(Error::Overflow);
    }
    if trial_bound < 2 {
        return Err(Error::InvalidArgument(format!(
            "trial bound {trial_bound} < 2"
        )));
    }
    let mut rest = n;
    let mut factors = Vec::new();
    let primes = shared_primes(trial_bound);
    for &p in primes.iter() {
        let p = p as u128;
        if p * p > rest {
            break;
        }
        if rest.is_multiple_of(p) {
            let mut e = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                e += 1;
            }
            factors.push((p, e));
        }
    }
    if rest > 1 {
        let tb = trial_bound as u128;
        let last_tried = primes.last().copied().unwrap_or(1) as u128;
        // either sqrt(rest) was passed during trial division, or rest is below tb²
        if last_tried * last_tried >= rest || rest <= tb * tb {
            factors.push((rest, 1));
        } else {
            return Err(Error::NotFullyFactored {
                n,
                cofactor: rest,
                trial_bound,
            });
        }
    }
    Ok(Factorization { value: n, factors })
}

/// Factorization of an integer known to have no prime factor outside `primes`
/// (ascending); `None` if a cofactor remains.
pub fn factorize_over(n: u128, primes: &[u64]) -> Option<Factorization> {
    if n == 0 {
        return None;
    }
    let mut factors = Vec::with_capacity(4);
    let rest = match u64::try_from(n) {
        // native 64-bit division is far cheaper than the u128 routine
        Ok(mut rest) => {
            for &p in primes {
                if rest == 1 {
                    break;
                }
                if rest % p == 0 {
                    let mut e = 0;
                    while rest % p == 0 {
                        rest /= p;
                        e += 1;
                    }
                    factors.push((p as u128, e));
                }
            }
            rest as u128
        }
        Err(_) => {
            let mut rest = n;
            for &p in primes {
                let p = p as u128;
                if rest.is_multiple_of(p) {
                    let mut e = 0;
                    while rest.is_multiple_of(p) {
                        rest /= p;
                        e += 1;
                    }
                    factors.push((p, e));
                }
            }
            rest
        }
    };
    (rest == 1).then_some(Factorization { value: n, factors })
}

/// Möbius function of a factored integer.
pub fn mobius(f: &Factorization) -> i32 {
    if !f.is_squarefree() {
        0
    } else if f.factors.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Euler's totient of a factored integer.
pub fn totient(f: &Factorization) -> u128 {
    f.factors
        .iter()
        .fold(1u128, |acc, &(p, e)| acc * (p - 1) * p.pow(e - 1))
}

/// A solution of `x + y = z` in canonical order `1 <= x <= y < z`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Triple {
    pub x: u128,
    pub y: u128,
    pub z: u128,
    pub fx: Factorization,
    pub fy: Factorization,
    pub fz: Factorization,
    pub primitive: bool,
}

impl Triple {
    /// Builds a canonical triple from positive `x <= y` with `z = x + y`.
    pub fn from_sum(x: u128, y: u128, trial_bound: u64) -> Result<Triple> {
        if x == 0 || y == 0 {
            return Err(Error::Degenerate(x as i128, y as i128, 0));
        }
        let (x, y) = if x <= y { (x, y) } else { (y, x) };
        let z = x
            .checked_add(y)
            .filter(|&z| z <= MAX_ENTRY)
            .ok_or(Error::Overflow)?;
        Ok(Triple {
            x,
            y,
            z,
            fx: factorize(x, trial_bound)?,
            fy: factorize(y, trial_bound)?,
            fz: factorize(z, trial_bound)?,
            primitive: x.gcd(&y) == 1,
        })
    }

    /// Height `H = max(|X|, |Y|, |Z|)`, which is `z` in canonical order.
    pub fn height(&self) -> u128 {
        self.z
    }

    /// Largest prime dividing `x·y·z`.
    pub fn smoothness(&self) -> u128 {
        [&self.fx, &self.fy, &self.fz]
            .iter()
            .filter_map(|f| f.largest_prime())
            .max()
            .unwrap_or(1)
    }

    /// Distinct primes of `x·y·z`, ascending.
    pub fn prime_support(&self) -> Vec<u128> {
        let mut ps: Vec<u128> = self
            .fx
            .primes()
            .chain(self.fy.primes())
            .chain(self.fz.primes())
            .collect();
        ps.sort_unstable();
        ps.dedup();
        ps
    }
}

pub fn canonicalize(a: i128, b: i128, c: i128) -> Result<Triple> {
    canonicalize_with_bound(a, b, c, DEFAULT_TRIAL_BOUND)
}

/// Normalizes signs and order of a solution of `a + b + c = 0`.
pub fn canonicalize_with_bound(a: i128, b: i128, c: i128, trial_bound: u64) -> Result<Triple> {
    if a == 0 || b == 0 || c == 0 {
        return Err(Error::Degenerate(a, b, c));
    }
    let entries = [a, b, c];
    let negatives = entries.iter().filter(|&&v| v < 0).count();
    // the entry whose sign is in the minority carries the largest magnitude
    let lone_negative = negatives == 1;
    if negatives == 0 || negatives == 3 {
        return Err(Error::Degenerate(a, b, c));
    }
    let (lone, pair): (Vec<i128>, Vec<i128>) =
        entries.iter().partition(|&&v| (v < 0) == lone_negative);
    let z = lone[0].unsigned_abs();
    let (x, y) = (pair[0].unsigned_abs(), pair[1].unsigned_abs());
    if x.checked_add(y) != Some(z) {
        return Err(Error::Degenerate(a, b, c));
    }
    if z > MAX_ENTRY {
        return Err(Error::Overflow);
    }
    Triple::from_sum(x, y, trial_bound)
}

/// Product of the distinct primes dividing `x·y·z`.
pub fn radical(t: &Triple) -> Result<u128> {
    t.prime_support()
        .into_iter()
        .try_fold(1u128, |acc, p| acc.checked_mul(p).ok_or(Error::Overflow))
}

/// Height, radical, smoothness and the logarithmic exponents of one triple.
#[derive(Debug, Clone, PartialEq)]
pub struct TripleMetrics<T> {
    pub height: u128,
    pub radical: u128,
    pub smoothness: u128,
    /// `log S / log log H`
    pub kappa0: T,
    /// `log R / log H`
    pub kappa1: T,
    /// `(3/2) · log log H / log S`
    pub qstar: T,
}

pub fn metrics<T: Real>(t: &Triple) -> Result<TripleMetrics<T>> {
    let height = t.height();
    if height < 3 {
        return Err(Error::HeightTooSmall(height));
    }
    let radical = radical(t)?;
    let smoothness = t.smoothness();
    let log_h = T::from_u128_lossy(height).ln();
    let log_log_h = log_h.ln();
    let log_s = T::from_u128_lossy(smoothness).ln();
    Ok(TripleMetrics {
        height,
        radical,
        smoothness,
        kappa0: log_s / log_log_h,
        kappa1: T::from_u128_lossy(radical).ln() / log_h,
        qstar: T::lit(1.5) * log_log_h / log_s,
    })
}

/// `log R / log H`, defined for every triple (`H >= 2`).
pub fn kappa1<T: Real>(t: &Triple) -> Result<T> {
    Ok(T::from_u128_lossy(radical(t)?).ln() / T::from_u128_lossy(t.height()).ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fact(pairs: &[(u128, u32)]) -> Vec<(u128, u32)> {
        pairs.to_vec()
    }

    #[test]
    fn factorize_over_small_primes() {
        assert_eq!(
            factorize_over(2400, &[2, 3, 5, 7]),
            Some(factorize(2400, 100).unwrap())
        );
        assert_eq!(factorize_over(1, &[2]), Some(Factorization::one()));
        assert_eq!(factorize_over(22, &[2, 3, 5, 7]), None);
        assert_eq!(factorize_over(0, &[2]), None);
    }

    #[test]
    fn factorize_examples() {
        assert_eq!(
            factorize(2400, 100).unwrap().factors,
            fact(&[(2, 5), (3, 1), (5, 2)])
        );
        assert!(factorize(1, 100).unwrap().factors.is_empty());
        assert_eq!(
            factorize(196_882, 100).unwrap().factors,
            fact(&[(2, 1), (7, 4), (41, 1)])
        );
        assert_eq!(factorize(2401, 100).unwrap().to_string(), "7^4");
    }

    #[test]
    fn factorize_cofactor_rules() {
        // 101 * 103 > 100^2 is composite beyond the bound
        assert!(matches!(
            factorize(101 * 103 * 4, 100),
            Err(Error::NotFullyFactored {
                cofactor: 10_403,
                ..
            })
        ));
        // a single prime cofactor below bound^2 is accepted
        assert_eq!(
            factorize(2 * 9973, 100).unwrap().factors,
            fact(&[(2, 1), (9973, 1)])
        );
        assert_eq!(
            factorize(0, 100).unwrap_err(),
            Error::InvalidArgument("cannot factor 0".into())
        );
        assert_eq!(
            factorize(10, 1).unwrap_err(),
            Error::InvalidArgument("trial bound 1 < 2".into())
        );
    }

    #[test]
    fn canonical_forms() {
        let t = canonicalize(1, 2400, -2401).unwrap();
        assert_eq!((t.x, t.y, t.z, t.primitive), (1, 2400, 2401, true));
        let t = canonicalize(-8, -1, 9).unwrap();
        assert_eq!((t.x, t.y, t.z, t.primitive), (1, 8, 9, true));
        assert_eq!(
            canonicalize(2, 2, 0).unwrap_err(),
            Error::Degenerate(2, 2, 0)
        );
        assert_eq!(
            canonicalize(1, 2, 3).unwrap_err(),
            Error::Degenerate(1, 2, 3)
        );
        let t = canonicalize(4, 4, -8).unwrap();
        assert!(!t.primitive);
    }

    #[test]
    fn canonicalize_at_the_magnitude_limit() {
        let half = 1i128 << 126;
        let t = canonicalize(half, half, i128::MIN).unwrap();
        assert_eq!(t.z, 1u128 << 127);
        assert_eq!(t.fz.factors, fact(&[(2, 127)]));
    }

    #[test]
    fn metrics_of_examples() {
        let m = metrics::<f64>(&canonicalize(1, 2400, -2401).unwrap()).unwrap();
        assert_eq!((m.smoothness, m.height), (7, 2401));
        assert!((m.kappa0 - 0.94829).abs() < 1e-5);
        assert!((m.qstar - 1.58180).abs() < 1e-5);
        let m = metrics::<f64>(&canonicalize(1, 8, -9).unwrap()).unwrap();
        assert_eq!((m.smoothness, m.radical), (3, 6));
        assert!((m.kappa0 - 1.39560).abs() < 1e-5);
        assert!((m.qstar - 1.07480).abs() < 1e-5);
        assert!((m.kappa1 - 6f64.ln() / 9f64.ln()).abs() < 1e-15);
        assert!((m.kappa1 - 0.81547).abs() < 1e-5);
    }

    #[test]
    fn metrics_reject_small_heights() {
        let t = canonicalize(1, 1, -2).unwrap();
        assert_eq!(metrics::<f64>(&t).unwrap_err(), Error::HeightTooSmall(2));
        assert_eq!(kappa1::<f64>(&t).unwrap(), 1.0);
    }

    #[test]
    fn radicals() {
        let t = canonicalize(-1331, 2_373_927_704, -2_373_926_373).unwrap();
        assert_eq!(radical(&t).unwrap(), 184_312_146_018);
        assert_eq!(radical(&canonicalize(1, 1, -2).unwrap()).unwrap(), 2);
        assert_eq!(radical(&canonicalize(3, 125, -128).unwrap()).unwrap(), 30);
    }

    #[test]
    fn mobius_and_totient() {
        let f = |n| factorize(n, 1000).unwrap();
        assert_eq!(mobius(&f(1)), 1);
        assert_eq!(mobius(&f(30)), -1);
        assert_eq!(mobius(&f(10)), 1);
        assert_eq!(mobius(&f(12)), 0);
        assert_eq!(totient(&f(1)), 1);
        assert_eq!(totient(&f(36)), 12);
        assert_eq!(totient(&f(97)), 96);
    }

    #[test]
    fn split_into_smooth_and_rough_parts() {
        let f = factorize(2 * 3 * 3 * 49 * 11, 100).unwrap();
        let (s, r) = f.split_smooth(5);
        assert_eq!((s.value, r.value), (18, 539));
    }
}
