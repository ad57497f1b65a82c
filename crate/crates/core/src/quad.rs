//! Gauss–Legendre quadrature rules.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::Real;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Rules are computed once per order and shared.
    pub fn new(n: usize) -> Arc<GaussLegendre> {
        static RULES: OnceLock<Mutex<HashMap<usize, Arc<GaussLegendre>>>> = OnceLock::new();
        let mut rules = RULES
            .get_or_init(Default::default)
            .lock()
            .expect("rule cache poisoned");
        Arc::clone(rules.entry(n).or_insert_with(|| Arc::new(Self::compute(n))))
    }

    fn compute(n: usize) -> GaussLegendre {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            // Tricomi's initial guess, then Newton on P_n
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    /// `∫_a^b f` with this rule.
    pub fn integrate<T: Real, F: FnMut(T) -> T>(&self, a: T, b: T, mut f: F) -> T {
        let half = (b - a) / T::lit(2.0);
        let mid = (a + b) / T::lit(2.0);
        let mut acc = T::zero();
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc = acc + T::lit(w) * f(mid + half * T::lit(x));
        }
        acc * half
    }

    /// Maps the rule to `[a, b]`, returning `(node, weight)` pairs.
    pub fn mapped<T: Real>(&self, a: T, b: T) -> Vec<(T, T)> {
        let half = (b - a) / T::lit(2.0);
        let mid = (a + b) / T::lit(2.0);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| (mid + half * T::lit(x), half * T::lit(w)))
            .collect()
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Composite rule: `panels` equal sub-intervals of `[a, b]`, each with an
/// `order`-point rule.
pub fn composite<T: Real, F: FnMut(T) -> T>(
    a: T,
    b: T,
    panels: usize,
    order: usize,
    mut f: F,
) -> T {
    let rule = GaussLegendre::new(order);
    let width = (b - a) / T::from_usize(panels).expect("panel count");
    (0..panels)
        .map(|k| {
            let lo = a + width * T::from_usize(k).expect("panel index");
            rule.integrate(lo, lo + width, &mut f)
        })
        .fold(T::zero(), |acc, v| acc + v)
}
