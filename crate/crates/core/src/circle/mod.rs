//! Weighted exponential sums over smooth numbers.
//!
//! `E(x, y; α) = Σ_{n ∈ S(y)} e(nα) Φ(n/x)` with `e(t) = exp(2πit)`. Because
//! `Φ` is supported in `(0, 1)` the sum is finite, and `∫₀¹ E(α)² E(−α) dα`
//! is a trigonometric polynomial integral that a uniform grid evaluates exactly.

mod farey;
mod weight;

pub use farey::{
    farey_dissection, farey_sequence, major_arcs, FareyArc, FareyDissection, MajorArc, MajorArcs,
};
pub use weight::WeightFunction;

use num_complex::Complex;
use rayon::prelude::*;

use crate::arith::{factorize, Factorization};
use crate::asymptotics::saddle_point;
use crate::quad::GaussLegendre;
use crate::search::weighted_count_from;
use crate::smooth::{enumerate_smooth, psi_exact, shared_primes};
use crate::{Error, Real, Result};

/// `e(t) = exp(2πit)`, reducing `t` modulo 1 first.
pub fn unit<T: Real>(t: T) -> Complex<T> {
    let frac = t - t.floor();
    let angle = T::TAU() * frac;
    Complex::new(angle.cos(), angle.sin())
}

/// The y-smooth `n` with `Φ(n/x) ≠ 0`, paired with their weights.
#[derive(Debug, Clone)]
pub struct WeightedSmooth<T> {
    pub x: T,
    pub y: u64,
    pub terms: Vec<(u64, T)>,
}

impl<T: Real> WeightedSmooth<T> {
    pub fn new(x: T, y: u64, phi: &WeightFunction<T>) -> Result<Self> {
        if !(x > T::zero()) {
            return Err(Error::InvalidArgument("x must be positive".into()));
        }
        let terms = match phi.support() {
            None => Vec::new(),
            Some((_, hi)) => {
                let top = (x * hi).floor().to_u64().unwrap_or(0);
                if top == 0 {
                    Vec::new()
                } else {
                    enumerate_smooth(top, y)?
                        .members
                        .into_iter()
                        .map(|n| (n, phi.eval(T::from_u64_lossy(n) / x)))
                        .filter(|&(_, w)| w != T::zero())
                        .collect()
                }
            }
        };
        Ok(WeightedSmooth { x, y, terms })
    }

    pub fn exp_sum(&self, alpha: T) -> Complex<T> {
        self.terms
            .iter()
            .fold(Complex::new(T::zero(), T::zero()), |acc, &(n, w)| {
                acc + unit(frac_product(n, alpha)).scale(w)
            })
    }
}

/// `n·α mod 1` with the integer and fractional parts of `α` separated.
fn frac_product<T: Real>(n: u64, alpha: T) -> T {
    let whole = alpha.floor();
    let frac = alpha - whole;
    let nf = T::from_u64_lossy(n);
    let p = nf * frac;
    p - p.floor()
}

/// `E(x, y; α)`.
pub fn exp_sum<T: Real>(x: T, y: u64, alpha: T, phi: &WeightFunction<T>) -> Result<Complex<T>> {
    Ok(WeightedSmooth::new(x, y, phi)?.exp_sum(alpha))
}

/// Both sides of `N(x, y; Φ) = ∫₀¹ E(α)² E(−α) dα`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleCheck<T> {
    pub x: T,
    pub y: u64,
    pub nodes: usize,
    pub quadrature: Complex<T>,
    pub direct: T,
    pub diff: T,
}

/// Evaluates the integral on `N = 4⌈x⌉` equally spaced nodes. Every frequency
/// `n₁ + n₂ − n₃` lies in `(−x, 2x)`, so only the zero frequency survives the
/// discrete average and the rule is exact.
pub fn circle_identity<T: Real>(x: T, y: u64, phi: &WeightFunction<T>) -> Result<CircleCheck<T>> {
    let ws = WeightedSmooth::new(x, y, phi)?;
    let nodes = 4 * x.ceil().to_usize().unwrap_or(1).max(1);
    let n_t = T::from_usize(nodes).expect("node count");
    let values: Vec<Complex<T>> = (0..nodes)
        .into_par_iter()
        .map(|k| {
            let e = ws.exp_sum(T::from_usize(k).expect("index") / n_t);
            e * e * e.conj()
        })
        .collect();
    let sum = values
        .iter()
        .fold(Complex::new(T::zero(), T::zero()), |acc, v| acc + v);
    let quadrature = sum.unscale(n_t);
    let direct = weighted_count_from(&ws, false);
    Ok(CircleCheck {
        x,
        y,
        nodes,
        quadrature,
        direct,
        diff: (quadrature - Complex::new(direct, T::zero())).norm(),
    })
}

/// `μ(d)/φ(d)` for `d = q / gcd(q, n)`, with `q` given by its factorization.
fn mu_over_phi_of_cofactor<T: Real>(q: &Factorization, n: u64) -> T {
    let mut value = T::one();
    for &(p, e) in &q.factors {
        let mut v = 0u32;
        let mut m = n as u128;
        while v < e && m.is_multiple_of(p) {
            m /= p;
            v += 1;
        }
        match e - v {
            0 => {}
            1 => value = -value / T::from_u128_lossy(p - 1),
            _ => return T::zero(),
        }
    }
    value
}

/// Local main term `M(x, y; q, γ) = Σ μ(q/(q,n))/φ(q/(q,n)) e(nγ) Φ(n/x)`.
pub fn local_main_term<T: Real>(
    x: T,
    y: u64,
    q: u64,
    gamma: T,
    phi: &WeightFunction<T>,
) -> Result<Complex<T>> {
    let ws = WeightedSmooth::new(x, y, phi)?;
    local_main_term_with(&ws, q, gamma)
}

pub fn local_main_term_with<T: Real>(
    ws: &WeightedSmooth<T>,
    q: u64,
    gamma: T,
) -> Result<Complex<T>> {
    if q == 0 {
        return Err(Error::InvalidArgument("q must be positive".into()));
    }
    let fq = factorize(q as u128, 1 << 16)?;
    Ok(ws
        .terms
        .iter()
        .fold(Complex::new(T::zero(), T::zero()), |acc, &(n, w)| {
            let coef = mu_over_phi_of_cofactor::<T>(&fq, n);
            if coef == T::zero() {
                acc
            } else {
                acc + unit(frac_product(n, gamma)).scale(w * coef)
            }
        }))
}

/// Outcome of comparing `M(q)` with `μ(q₁)/φ(q₁) · M(q₀)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QFactorizationCheck<T> {
    pub q: u64,
    pub q0: u64,
    pub q1: u64,
    pub factor: T,
    pub m_q: Complex<T>,
    pub m_q0: Complex<T>,
    pub residual: T,
}

/// Splits `q = q₀q₁` into its y-smooth and y-rough parts and evaluates both
/// sides of `M(x,y;q,γ) = μ(q₁)/φ(q₁) · M(x,y;q₀,γ)` by direct summation.
pub fn verify_q_factorization<T: Real>(
    ws: &WeightedSmooth<T>,
    q: u64,
    gamma: T,
) -> Result<QFactorizationCheck<T>> {
    let fq = factorize(q as u128, 1 << 16)?;
    let (f0, f1) = fq.split_smooth(ws.y as u128);
    let factor = if f1.is_squarefree() {
        let phi = crate::arith::totient(&f1);
        T::from_i32(crate::arith::mobius(&f1)).expect("small") / T::from_u128_lossy(phi)
    } else {
        T::zero()
    };
    let m_q = local_main_term_with(ws, q, gamma)?;
    let m_q0 = local_main_term_with(ws, f0.value as u64, gamma)?;
    Ok(QFactorizationCheck {
        q,
        q0: f0.value as u64,
        q1: f1.value as u64,
        factor,
        m_q,
        m_q0,
        residual: (m_q - m_q0.scale(factor)).norm(),
    })
}

/// Partial Euler product `ζ(s; y) = ∏_{p <= y} (1 − p^{−s})^{−1}`.
pub fn partial_zeta<T: Real>(s: Complex<T>, y: u64) -> Result<Complex<T>> {
    if !(s.re > T::zero()) {
        return Err(Error::InvalidArgument(
            "partial_zeta needs Re(s) > 0".into(),
        ));
    }
    let one = Complex::new(T::one(), T::zero());
    let mut acc = one;
    for &p in shared_primes(y).iter() {
        let factor = one - (-s * T::from_u64_lossy(p).ln()).exp();
        if factor.norm() <= T::epsilon() * T::lit(16.0) {
            return Err(Error::PoleFactor(p));
        }
        acc = acc / factor;
    }
    Ok(acc)
}

/// `Σ_{n ∈ S(y), n <= n_max} n^{−s}` together with the Rankin bound
/// `n_max^{−σ/2} ζ(σ/2; y)` on the omitted terms, `σ = Re(s)`.
pub fn partial_zeta_dirichlet<T: Real>(
    s: Complex<T>,
    y: u64,
    n_max: u64,
) -> Result<(Complex<T>, T)> {
    if !(s.re > T::zero()) {
        return Err(Error::InvalidArgument(
            "partial_zeta needs Re(s) > 0".into(),
        ));
    }
    let members = enumerate_smooth(n_max, y)?.members;
    let sum = members
        .iter()
        .rev()
        .fold(Complex::new(T::zero(), T::zero()), |acc, &n| {
            acc + (-s * T::from_u64_lossy(n).ln()).exp()
        });
    let half = s.re / T::lit(2.0);
    let bound =
        T::from_u64_lossy(n_max).powf(-half) * partial_zeta(Complex::new(half, T::zero()), y)?.re;
    Ok((sum, bound))
}

/// Nodes per Gauss–Legendre panel in [`mellin_phi`].
const MELLIN_ORDER: usize = 32;

/// `Φ̌(s, λ) = ∫₀^∞ Φ(w) e(λw) w^{s−1} dw` by composite Gauss–Legendre,
/// with panel edges at the pieces of `Φ` and at least two panels per
/// oscillation period (never fewer than 512 nodes in total).
pub fn mellin_phi<T: Real>(phi: &WeightFunction<T>, s: Complex<T>, lambda: T) -> Complex<T> {
    let zero = Complex::new(T::zero(), T::zero());
    let edges = phi.breakpoints();
    if edges.is_empty() {
        return zero;
    }
    let rule = GaussLegendre::new(MELLIN_ORDER);
    let mut total = zero;
    for w in edges.windows(2) {
        let (a, b) = (w[0], w[1]);
        let len = b - a;
        let periods = (lambda.abs() * len).ceil().to_usize().unwrap_or(0);
        let panels = (2 * periods).max(4);
        let width = len / T::from_usize(panels).expect("panel count");
        for k in 0..panels {
            let lo = a + width * T::from_usize(k).expect("index");
            for (t, wt) in rule.mapped(lo, lo + width) {
                let weight = phi.eval(t) * wt;
                if weight == T::zero() {
                    continue;
                }
                let power = ((s - T::one()) * t.ln()).exp();
                total = total + unit(lambda * t) * power.scale(weight);
            }
        }
    }
    total
}

/// Leading term of the local main term at a y-smooth modulus, next to the
/// directly summed value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MainTermComparison<T> {
    pub saddle: T,
    pub psi: u64,
    pub main_term: Complex<T>,
    pub local: Complex<T>,
    /// `|M − main| / |M|`
    pub relative_deviation: T,
}

/// `q₀^{−c} ∏_{p | q₀}(1 − (p^c − 1)/(p − 1)) · c Φ̌(c, γx) · Ψ(x, y)` with `c`
/// the saddle point for `(x, y)`.
pub fn main_term<T: Real>(
    x: T,
    y: u64,
    q0: u64,
    gamma: T,
    phi: &WeightFunction<T>,
) -> Result<MainTermComparison<T>> {
    let fq = factorize(q0 as u128, 1 << 16)?;
    if fq.largest_prime().is_some_and(|p| p > y as u128) {
        return Err(Error::InvalidArgument(format!(
            "q0 = {q0} is not {y}-smooth"
        )));
    }
    let c = saddle_point(x, T::from_u64_lossy(y))?.c;
    main_term_at(x, y, q0, gamma, phi, c)
}

/// As [`main_term`] with an explicit exponent `c` in place of the saddle point.
pub fn main_term_at<T: Real>(
    x: T,
    y: u64,
    q0: u64,
    gamma: T,
    phi: &WeightFunction<T>,
    c: T,
) -> Result<MainTermComparison<T>> {
    let fq = factorize(q0 as u128, 1 << 16)?;
    let mut local_factor = T::from_u64_lossy(q0).powf(-c);
    for p in fq.primes() {
        let pf = T::from_u128_lossy(p);
        local_factor = local_factor * (T::one() - (pf.powf(c) - T::one()) / (pf - T::one()));
    }
    let psi = psi_exact(x.floor().to_u64().unwrap_or(0), y)?;
    let transform = mellin_phi(phi, Complex::new(c, T::zero()), gamma * x);
    let main = transform.scale(c * local_factor * T::from_u64_lossy(psi));
    let local = local_main_term(x, y, q0, gamma, phi)?;
    let norm = local.norm();
    let relative_deviation = if norm > T::zero() {
        (local - main).norm() / norm
    } else {
        T::infinity()
    };
    Ok(MainTermComparison {
        saddle: c,
        psi,
        main_term: main,
        local,
        relative_deviation,
    })
}
