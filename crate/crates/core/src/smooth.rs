//! Primes and y-smooth integers.
//!
//! `Ψ(x, y)` is available along two independent routes: explicit enumeration
//! ([`enumerate_smooth`]) and a recursion over exponent vectors
//! ([`psi_exact`]). Each is the other's oracle in the tests.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, OnceLock, RwLock};

use rayon::prelude::*;

use crate::{Error, Real, Result};

/// Default upper limit on the number of members a single enumeration may hold.
pub const DEFAULT_MEMORY_CAP: usize = 100_000_000;

/// Largest bound accepted by [`prime_count`].
pub const PRIME_COUNT_LIMIT: u64 = 1 << 34;

/// All primes up to `bound`, ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTable {
    pub bound: u64,
    pub primes: Vec<u64>,
}

impl PrimeTable {
    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// `π(t)` for `t <= bound`.
    pub fn count_upto(&self, t: u64) -> usize {
        self.primes.partition_point(|&p| p <= t)
    }
}

/// Sieve of Eratosthenes over odd numbers.
pub fn primes_upto(y: u64) -> PrimeTable {
    PrimeTable {
        bound: y,
        primes: sieve(y),
    }
}

fn sieve(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    // index i stands for 2i + 1
    let half = ((n - 1) / 2 + 1) as usize;
    let mut composite = vec![false; half];
    let mut i = 1usize;
    while {
        let p = 2 * i as u64 + 1;
        p * p <= n
    } {
        if !composite[i] {
            let p = 2 * i + 1;
            let mut j = (p * p) / 2;
            while j < half {
                composite[j] = true;
                j += p;
            }
        }
        i += 1;
    }
    let mut out = Vec::with_capacity(estimate_pi(n));
    out.push(2);
    out.extend(
        composite
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, &c)| !c)
            .map(|(i, _)| 2 * i as u64 + 1),
    );
    out
}

fn estimate_pi(n: u64) -> usize {
    let x = n.max(3) as f64;
    (1.26 * x / x.ln()) as usize + 16
}

/// A read-only view of the process-wide prime cache holding every prime up to
/// at least the requested bound.
#[derive(Clone)]
pub struct SharedPrimes {
    all: Arc<Vec<u64>>,
    len: usize,
}

impl std::ops::Deref for SharedPrimes {
    type Target = [u64];

    fn deref(&self) -> &[u64] {
        &self.all[..self.len]
    }
}

fn cache() -> &'static RwLock<(u64, Arc<Vec<u64>>)> {
    static CACHE: OnceLock<RwLock<(u64, Arc<Vec<u64>>)>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new((1, Arc::new(Vec::new()))))
}

/// Primes `<= bound` from a shared, lazily grown table.
pub fn shared_primes(bound: u64) -> SharedPrimes {
    {
        let guard = cache().read().expect("prime cache poisoned");
        if guard.0 >= bound {
            let len = guard.1.partition_point(|&p| p <= bound);
            return SharedPrimes {
                all: Arc::clone(&guard.1),
                len,
            };
        }
    }
    let mut guard = cache().write().expect("prime cache poisoned");
    if guard.0 < bound {
        // grow geometrically so repeated small extensions stay cheap
        let target = bound.max(guard.0.saturating_mul(2)).max(1 << 16);
        *guard = (target, Arc::new(sieve(target)));
    }
    let len = guard.1.partition_point(|&p| p <= bound);
    SharedPrimes {
        all: Arc::clone(&guard.1),
        len,
    }
}

/// `π(n)` by a segmented sieve; does not materialize the primes.
pub fn prime_count(n: u64) -> Result<u64> {
    if n > PRIME_COUNT_LIMIT {
        return Err(Error::RangeExceeded {
            what: "prime_count bound",
            value: n as f64,
        });
    }
    if n < 2 {
        return Ok(0);
    }
    let root = (n as f64).sqrt() as u64 + 1;
    let small = shared_primes(root);
    const SEGMENT: u64 = 1 << 20;
    let mut count = 0u64;
    let mut low = 0u64;
    let mut mark = vec![false; SEGMENT as usize];
    while low <= n {
        let high = (low + SEGMENT - 1).min(n);
        mark.iter_mut().for_each(|m| *m = false);
        for &p in small.iter() {
            if p * p > high {
                break;
            }
            let start = (p * p).max(low.div_ceil(p) * p);
            let mut m = start;
            while m <= high {
                mark[(m - low) as usize] = true;
                m += p;
            }
        }
        for v in low.max(2)..=high {
            if !mark[(v - low) as usize] {
                count += 1;
            }
        }
        low = high + 1;
    }
    Ok(count)
}

/// The sorted set of y-smooth integers in `[1, x]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmoothSet {
    pub x_bound: u64,
    pub y_bound: u64,
    pub members: Vec<u64>,
}

impl SmoothSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, n: u64) -> bool {
        self.members.binary_search(&n).is_ok()
    }
}

pub fn enumerate_smooth(x: u64, y: u64) -> Result<SmoothSet> {
    enumerate_smooth_capped(x, y, DEFAULT_MEMORY_CAP)
}

/// Depth-first products over the prime table, one parallel branch per largest
/// prime factor. Fails with [`Error::TooLarge`] as soon as more than `cap`
/// members have been produced.
pub fn enumerate_smooth_capped(x: u64, y: u64, cap: usize) -> Result<SmoothSet> {
    if x == 0 || y < 2 {
        return Err(Error::InvalidArgument(format!(
            "enumerate_smooth requires x >= 1 and y >= 2 (got x = {x}, y = {y})"
        )));
    }
    let primes = shared_primes(y.min(x));
    let produced = AtomicUsize::new(1);
    if cap == 0 {
        return Err(Error::TooLarge { cap });
    }
    let branches: Vec<Result<Vec<u64>>> = (0..primes.len())
        .into_par_iter()
        .map(|i| {
            let mut out = Vec::new();
            let p = primes[i];
            let mut stack = vec![(p, i)];
            while let Some((v, k)) = stack.pop() {
                out.push(v);
                if out.len() % 4096 == 0 && produced.fetch_add(4096, Ordering::Relaxed) + 4096 > cap
                {
                    return Err(Error::TooLarge { cap });
                }
                for j in 0..=k {
                    match v.checked_mul(primes[j]) {
                        Some(w) if w <= x => stack.push((w, j)),
                        _ => break,
                    }
                }
            }
            if produced.fetch_add(out.len() % 4096, Ordering::Relaxed) + out.len() % 4096 > cap {
                return Err(Error::TooLarge { cap });
            }
            Ok(out)
        })
        .collect();
    let mut members = vec![1u64];
    for b in branches {
        members.extend(b?);
    }
    if members.len() > cap {
        return Err(Error::TooLarge { cap });
    }
    members.par_sort_unstable();
    Ok(SmoothSet {
        x_bound: x,
        y_bound: y,
        members,
    })
}

/// `Ψ(x, y)` by recursion over exponent vectors:
/// `Ψ(x, p_k) = Ψ(x, p_{k-1}) + Ψ(x / p_k, p_k)`.
pub fn psi_exact(x: u64, y: u64) -> Result<u64> {
    if x == 0 {
        return Ok(0);
    }
    if y < 2 {
        return Ok(1);
    }
    let primes = shared_primes(y.min(x));
    Ok(lattice_count(x, &primes))
}

fn lattice_count(x: u64, primes: &[u64]) -> u64 {
    let k = primes.partition_point(|&p| p <= x);
    match k {
        0 => 1,
        1 => {
            let p = primes[0];
            let mut n = 1;
            let mut v = x;
            while v >= p {
                v /= p;
                n += 1;
            }
            n
        }
        _ => {
            let p = primes[k - 1];
            let mut total = lattice_count(x, &primes[..k - 1]);
            let mut v = x / p;
            while v >= 1 {
                total += lattice_count(v, &primes[..k - 1]);
                v /= p;
            }
            total
        }
    }
}

/// `Ψ(x, y)` as the size of the explicit enumeration.
pub fn psi_enumerated(x: u64, y: u64) -> Result<u64> {
    if x == 0 {
        return Ok(0);
    }
    if y < 2 {
        return Ok(1);
    }
    Ok(enumerate_smooth(x, y)?.len() as u64)
}

/// Chebyshev's `θ(y) = Σ_{p ≤ y} log p`, summed in ascending prime order.
pub fn theta<T: Real>(y: u64) -> T {
    shared_primes(y)
        .iter()
        .fold(T::zero(), |acc, &p| acc + T::from_u64_lossy(p).ln())
}

/// Largest prime factor of `n` if it is y-smooth, by trial division with the
/// primes up to `y`.
pub fn smooth_part_max_prime(mut n: u64, primes: &[u64]) -> Option<u64> {
    if n == 0 {
        return None;
    }
    let mut largest = 1;
    for &p in primes {
        if n == 1 {
            break;
        }
        if n.is_multiple_of(p) {
            largest = p;
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
    }
    (n == 1).then_some(largest)
}
