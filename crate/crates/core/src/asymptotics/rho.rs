use std::sync::OnceLock;

use crate::{Error, Real, Result};

/// Grid points per unit of `u`.
pub const RHO_STEPS_PER_UNIT: usize = 1 << 10;
/// Largest argument covered by the shared table.
pub const RHO_MAX_U: usize = 50;

/// Dickman's `ρ` tabulated on `u = k·h`, `0 <= u <= u_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct RhoTable<T> {
    pub step: T,
    pub values: Vec<T>,
}

impl<T: Real> RhoTable<T> {
    /// Advances `u ρ(u) = ∫_{u−1}^{u} ρ(t) dt` one grid point at a time.
    ///
    /// The history window is cut at the integer it contains, where `ρ` loses a
    /// derivative, and each piece is integrated by composite Simpson (with one
    /// 3/8 panel for odd lengths, a trapezoid for a single step). The unknown
    /// endpoint enters linearly and is solved for.
    pub fn build(steps_per_unit: usize, u_max: usize) -> Self {
        let n = steps_per_unit;
        assert!(
            n >= 2 && n.is_multiple_of(2),
            "steps per unit must be even and >= 2"
        );
        let h = T::one() / T::from_usize(n).expect("step count");
        let total = n * u_max;
        let mut values = vec![T::one(); total + 1];
        for k in n + 1..=total {
            let start = k - n;
            let split = k.div_ceil(n) * n - n;
            let split = if split <= start { start } else { split };
            let (known_a, _) = piece(&values, start, split, h, false);
            let (known_b, end_weight) = piece(&values, split, k, h, true);
            let u = T::from_usize(k).expect("index") * h;
            values[k] = (known_a + known_b) / (u - end_weight);
        }
        RhoTable { step: h, values }
    }

    pub fn u_max(&self) -> T {
        self.step * T::from_usize(self.values.len() - 1).expect("table size")
    }

    /// Linear interpolation between grid points; `ρ(u) = 1` for `u <= 1`.
    pub fn eval(&self, u: T) -> Result<T> {
        if u.is_nan() || u > self.u_max() {
            return Err(Error::RangeExceeded {
                what: "u",
                value: u.to_f64_lossy(),
            });
        }
        if u <= T::one() {
            return Ok(T::one());
        }
        let pos = u / self.step;
        let k = pos.floor().to_usize().expect("grid index");
        if k + 1 >= self.values.len() {
            return Ok(self.values[self.values.len() - 1]);
        }
        let frac = pos - T::from_usize(k).expect("grid index");
        Ok(self.values[k] + (self.values[k + 1] - self.values[k]) * frac)
    }
}

/// Quadrature of the table over grid indices `[a, b]`. With `open_end` the
/// value at `b` is treated as unknown: its weight is returned separately
/// instead of being multiplied in.
fn piece<T: Real>(v: &[T], a: usize, b: usize, h: T, open_end: bool) -> (T, T) {
    let len = b - a;
    let mut weights: Vec<(usize, T)> = Vec::with_capacity(len + 1);
    let third = h / T::lit(3.0);
    let simpson = |lo: usize, hi: usize, out: &mut Vec<(usize, T)>| {
        for j in lo..=hi {
            let w = if j == lo || j == hi {
                third
            } else if (j - lo) % 2 == 1 {
                third * T::lit(4.0)
            } else {
                third * T::lit(2.0)
            };
            out.push((j, w));
        }
    };
    match len {
        0 => {}
        1 => {
            weights.push((a, h / T::lit(2.0)));
            weights.push((b, h / T::lit(2.0)));
        }
        _ if len.is_multiple_of(2) => simpson(a, b, &mut weights),
        _ => {
            let e = h * T::lit(3.0) / T::lit(8.0);
            weights.extend([
                (a, e),
                (a + 1, e * T::lit(3.0)),
                (a + 2, e * T::lit(3.0)),
                (a + 3, e),
            ]);
            if len > 3 {
                simpson(a + 3, b, &mut weights);
            }
        }
    }
    let mut known = T::zero();
    let mut end = T::zero();
    for (j, w) in weights {
        if open_end && j == b {
            end = end + w;
        } else {
            known = known + w * v[j];
        }
    }
    (known, end)
}

fn shared_table() -> &'static RhoTable<f64> {
    static TABLE: OnceLock<RhoTable<f64>> = OnceLock::new();
    TABLE.get_or_init(|| RhoTable::build(RHO_STEPS_PER_UNIT, RHO_MAX_U))
}

/// The process-wide table (step `2⁻¹⁰`, `u <= 50`).
pub fn rho_table() -> &'static RhoTable<f64> {
    shared_table()
}

/// `ρ(u)` for `0 <= u <= 50`.
pub fn dickman_rho<T: Real>(u: T) -> Result<T> {
    if u < T::zero() {
        return Err(Error::RangeExceeded {
            what: "u",
            value: u.to_f64_lossy(),
        });
    }
    shared_table().eval(u.to_f64_lossy()).map(T::lit)
}

/// `x ρ(log x / log y)`.
pub fn psi_estimate<T: Real>(x: T, y: T) -> Result<T> {
    let two = T::lit(2.0);
    if !(y >= two && x >= y) {
        return Err(Error::InvalidArgument(
            "psi_estimate needs x >= y >= 2".into(),
        ));
    }
    Ok(x * dickman_rho(x.ln() / y.ln())?)
}
