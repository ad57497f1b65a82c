//! Exhaustive search for smooth solutions of `x + y = z` and the counting
//! functions derived from it.
//!
//! Counts `N`, `N*` use canonical solutions `x <= y < z`; the weighted count
//! sums over ordered pairs, matching the circle-method identity.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use num_integer::Integer;
use rayon::prelude::*;

use crate::arith::{factorize_over, metrics, Triple, TripleMetrics};
use crate::circle::{WeightFunction, WeightedSmooth};
use crate::series::zeta_real;
use crate::smooth::{
    enumerate_smooth_capped, psi_exact, shared_primes, SmoothSet, DEFAULT_MEMORY_CAP,
};
use crate::{Error, Real, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Smoothness {
    /// Explicit bound `y`.
    Bound(u64),
    /// `y = ⌊(log H)^κ⌋`.
    Exponent(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    pub height_bound: u64,
    pub smoothness: Smoothness,
    pub primitive_only: bool,
    pub memory_cap: usize,
}

impl SearchConfig {
    pub fn new(height_bound: u64, y: u64, primitive_only: bool) -> Self {
        SearchConfig {
            height_bound,
            smoothness: Smoothness::Bound(y),
            primitive_only,
            memory_cap: DEFAULT_MEMORY_CAP,
        }
    }

    pub fn with_kappa(height_bound: u64, kappa: f64, primitive_only: bool) -> Self {
        SearchConfig {
            height_bound,
            smoothness: Smoothness::Exponent(kappa),
            primitive_only,
            memory_cap: DEFAULT_MEMORY_CAP,
        }
    }

    pub fn y(&self) -> u64 {
        match self.smoothness {
            Smoothness::Bound(y) => y,
            Smoothness::Exponent(kappa) => smoothness_for(self.height_bound, kappa),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.height_bound < 2 {
            return Err(Error::InvalidArgument(format!(
                "height bound must be at least 2 (got {})",
                self.height_bound
            )));
        }
        if let Smoothness::Exponent(k) = self.smoothness {
            if !(k > 0.0) || !k.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "kappa must be positive (got {k})"
                )));
            }
        }
        if self.y() < 2 {
            return Err(Error::InvalidArgument(format!(
                "smoothness bound must be at least 2 (got {})",
                self.y()
            )));
        }
        Ok(())
    }
}

/// `⌊(log H)^κ⌋`.
pub fn smoothness_for(height: u64, kappa: f64) -> u64 {
    (height as f64).ln().powf(kappa).floor() as u64
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchReport {
    pub config: SearchConfig,
    pub y: u64,
    /// Canonical solutions sorted by `(z, x)`; primitive ones only when so configured.
    pub triples: Vec<Triple>,
    /// `N`: all canonical solutions.
    pub count: u64,
    /// `N*`: primitive canonical solutions.
    pub count_primitive: u64,
    /// Largest height of a primitive solution found.
    pub observed_max_height: u64,
    pub wall_time: Duration,
}

/// All `(x, y', z)` with `x <= y' < z <= H`, `x + y' = z` and each entry
/// y-smooth. The outer loop over `x` runs in parallel; for fixed `x` the
/// candidates `y'` and `z = x + y'` are walked with two pointers through the
/// sorted smooth set.
pub fn find_solutions(cfg: &SearchConfig) -> Result<SearchReport> {
    let start = Instant::now();
    let (y, found) = search_pairs(cfg)?;
    // every entry is y-smooth, so trial division by the primes <= y is exact;
    // the pairs are already in (z, x) order and collect keeps it
    let primes = shared_primes(y.min(cfg.height_bound));
    let triples = found
        .pairs
        .into_par_iter()
        .map(|(a, b)| smooth_triple(a, b, &primes))
        .collect::<Result<Vec<_>>>()?;
    let observed_max_height = triples
        .iter()
        .filter(|t| t.primitive)
        .map(|t| t.z as u64)
        .max()
        .unwrap_or(0);
    Ok(SearchReport {
        config: *cfg,
        y,
        triples,
        count: found.count,
        count_primitive: found.count_primitive,
        observed_max_height,
        wall_time: start.elapsed(),
    })
}

/// A stored solution costs about this many smooth-set members of memory, so
/// at most `memory_cap / SOLUTION_COST` solutions are kept.
pub const SOLUTION_COST: usize = 64;

fn search_pairs(cfg: &SearchConfig) -> Result<(u64, Pairs)> {
    cfg.validate()?;
    let y = cfg.y();
    let set = enumerate_smooth_capped(cfg.height_bound, y, cfg.memory_cap)?;
    let pairs = solution_pairs(
        &set,
        cfg.height_bound,
        (cfg.memory_cap / SOLUTION_COST).max(1),
        cfg.primitive_only,
    )?;
    Ok((y, pairs))
}

fn smooth_triple(a: u64, b: u64, primes: &[u64]) -> Result<Triple> {
    let factor = |n: u64| {
        factorize_over(n as u128, primes)
            .ok_or_else(|| Error::InvalidArgument(format!("{n} is not smooth")))
    };
    Ok(Triple {
        x: a as u128,
        y: b as u128,
        z: (a + b) as u128,
        fx: factor(a)?,
        fy: factor(b)?,
        fz: factor(a + b)?,
        primitive: a.gcd(&b) == 1,
    })
}

/// The partners `y' >= m[i]` of `x = m[i]` with `x + y' <= bound` and both
/// `y'` and `x + y'` in the sorted set `m`, found by walking two pointers.
fn partners(m: &[u64], i: usize, bound: u64) -> impl Iterator<Item = u64> + '_ {
    let x = m[i];
    let mut j = i;
    let mut k = i + 1;
    std::iter::from_fn(move || {
        while j < m.len() {
            let b = m[j];
            j += 1;
            let z = x.checked_add(b).filter(|&z| z <= bound)?;
            while k < m.len() && m[k] < z {
                k += 1;
            }
            if k == m.len() {
                return None;
            }
            if m[k] == z {
                return Some(b);
            }
        }
        None
    })
}

struct Pairs {
    /// Kept solutions as `(x, y')`, sorted by `(z, x)`.
    pairs: Vec<(u64, u64)>,
    count: u64,
    count_primitive: u64,
}

/// Canonical pairs `(x, y')` with `x + y' <= bound` and `x`, `y'`, `x + y'` in
/// the set. Every pair is counted but only the kept ones are stored; fails
/// with [`Error::TooLarge`] once more than `cap` are stored.
fn solution_pairs(set: &SmoothSet, bound: u64, cap: usize, primitive_only: bool) -> Result<Pairs> {
    let m = &set.members;
    let stored = AtomicUsize::new(0);
    let per_x: Vec<Pairs> = (0..m.len())
        .into_par_iter()
        .map(|i| {
            let (mut out, mut n, mut n_prim) = (Vec::new(), 0, 0);
            for b in partners(m, i, bound) {
                let primitive = m[i].gcd(&b) == 1;
                n += 1;
                n_prim += u64::from(primitive);
                if primitive_only && !primitive {
                    continue;
                }
                out.push((m[i], b));
                if stored.fetch_add(1, Ordering::Relaxed) >= cap {
                    return Err(Error::TooLarge { cap });
                }
            }
            Ok(Pairs {
                pairs: out,
                count: n,
                count_primitive: n_prim,
            })
        })
        .collect::<Result<_>>()?;
    let (mut count, mut count_primitive) = (0, 0);
    let mut pairs = Vec::new();
    for p in per_x {
        pairs.extend(p.pairs);
        count += p.count;
        count_primitive += p.count_primitive;
    }
    pairs.sort_unstable_by_key(|&(a, b)| (a + b, a));
    Ok(Pairs {
        pairs,
        count,
        count_primitive,
    })
}

/// `(N, N*)` without storing the solutions.
fn solution_counts(set: &SmoothSet, bound: u64) -> (u64, u64) {
    let m = &set.members;
    (0..m.len())
        .into_par_iter()
        .map(|i| {
            partners(m, i, bound).fold((0u64, 0u64), |(n, p), b| {
                (n + 1, p + u64::from(m[i].gcd(&b) == 1))
            })
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
}

/// Row of the per-smoothness table: the solution with the smallest `κ₀`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtremalRow<T> {
    pub smoothness: u64,
    pub triple: Triple,
    pub metrics: TripleMetrics<T>,
    /// Primitive solutions with this smoothness.
    pub group_size: usize,
}

/// Groups the primitive solutions of height at least 3 by `S` and picks the
/// minimiser of `κ₀ = log S / log log H` in each group, which is also the
/// maximiser of `Q* = 3/(2κ₀)`. At fixed `S` this is the solution of largest
/// height; ties go to the smaller `x`.
pub fn extremal_by_smoothness<T: Real>(report: &SearchReport) -> Result<Vec<ExtremalRow<T>>> {
    let mut groups: std::collections::BTreeMap<u64, (usize, &Triple)> =
        std::collections::BTreeMap::new();
    for t in report
        .triples
        .iter()
        .filter(|t| t.primitive && t.height() >= 3)
    {
        let s = t.smoothness() as u64;
        groups
            .entry(s)
            .and_modify(|(n, best)| {
                *n += 1;
                if (t.z, std::cmp::Reverse(t.x)) > (best.z, std::cmp::Reverse(best.x)) {
                    *best = t;
                }
            })
            .or_insert((1, t));
    }
    groups
        .into_iter()
        .map(|(s, (n, t))| {
            Ok(ExtremalRow {
                smoothness: s,
                triple: t.clone(),
                metrics: metrics(t)?,
                group_size: n,
            })
        })
        .collect()
}

/// `Σ Φ(X/x) Φ(Y/x) Φ(Z/x)` over ordered solutions `X + Y = Z` in `S(y)`,
/// optionally restricted to `gcd(X, Y) = 1`.
pub fn weighted_count<T: Real>(
    x: T,
    y: u64,
    phi: &WeightFunction<T>,
    primitive_only: bool,
) -> Result<T> {
    Ok(weighted_count_from(
        &WeightedSmooth::new(x, y, phi)?,
        primitive_only,
    ))
}

/// As [`weighted_count`] for a precomputed weighted smooth set.
pub fn weighted_count_from<T: Real>(ws: &WeightedSmooth<T>, primitive_only: bool) -> T {
    let terms = &ws.terms;
    let index: std::collections::HashMap<u64, T> = terms.iter().copied().collect();
    let rows: Vec<T> = terms
        .par_iter()
        .map(|&(a, wa)| {
            terms.iter().fold(T::zero(), |acc, &(b, wb)| {
                if primitive_only && a.gcd(&b) != 1 {
                    return acc;
                }
                match index.get(&(a + b)) {
                    Some(&wc) => acc + wa * wb * wc,
                    None => acc,
                }
            })
        })
        .collect();
    rows.into_iter().fold(T::zero(), |acc, r| acc + r)
}

/// `N*/N` next to the conjectured limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityRatio<T> {
    pub height: u64,
    pub kappa: f64,
    pub y: u64,
    pub count: u64,
    pub count_primitive: u64,
    pub ratio: T,
    /// `1/ζ(2 − 3/κ)` for `κ > 3`, `0` for `κ <= 3`.
    pub conjectured_limit: T,
    /// `true` when `2 − 3/κ <= 1`, where the zeta value diverges.
    pub divergent: bool,
}

/// `1/ζ(2 − 3/κ)`; [`Error::ZetaPole`] when `κ <= 3`.
pub fn conjectured_density<T: Real>(kappa: T) -> Result<T> {
    let s = T::lit(2.0) - T::lit(3.0) / kappa;
    if !(s > T::one()) {
        return Err(Error::ZetaPole(s.to_f64_lossy()));
    }
    Ok(T::one() / zeta_real(s)?)
}

pub fn density_ratio<T: Real>(
    height: u64,
    kappa: f64,
    memory_cap: usize,
) -> Result<DensityRatio<T>> {
    let cfg = SearchConfig {
        memory_cap,
        ..SearchConfig::with_kappa(height, kappa, false)
    };
    cfg.validate()?;
    let y = cfg.y();
    // counts only, so nothing beyond the smooth set is stored
    let set = enumerate_smooth_capped(height, y, memory_cap)?;
    let (count, count_primitive) = solution_counts(&set, height);
    let (conjectured_limit, divergent) = match conjectured_density(T::lit(kappa)) {
        Ok(v) => (v, false),
        Err(Error::ZetaPole(_)) => (T::zero(), true),
        Err(e) => return Err(e),
    };
    let ratio = if count == 0 {
        T::zero()
    } else {
        T::from_u64_lossy(count_primitive) / T::from_u64_lossy(count)
    };
    Ok(DensityRatio {
        height,
        kappa,
        y,
        count,
        count_primitive,
        ratio,
        conjectured_limit,
        divergent,
    })
}

/// `Ψ(H/2, y)`: the multiples `m·(1, 1, 2)` with `m` y-smooth and `2m <= H`.
pub fn imprimitive_floor(height: u64, y: u64) -> Result<u64> {
    psi_exact(height / 2, y)
}

/// Primitive solution counts under the conventions one might use for a census.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Census {
    pub height: u64,
    pub y: u64,
    /// `1 <= X <= Y < Z`
    pub unordered: u64,
    /// `1 <= X < Y < Z`
    pub unordered_distinct: u64,
    /// ordered pairs `(X, Y)`
    pub ordered: u64,
}

pub fn census(report: &SearchReport) -> Census {
    let prim: Vec<&Triple> = report.triples.iter().filter(|t| t.primitive).collect();
    let diagonal = prim.iter().filter(|t| t.x == t.y).count() as u64;
    let unordered = prim.len() as u64;
    Census {
        height: report.config.height_bound,
        y: report.y,
        unordered,
        unordered_distinct: unordered - diagonal,
        ordered: 2 * unordered - diagonal,
    }
}
