use num_integer::Roots;

use crate::{Error, Rational, Real, Result};

/// One Farey interval: the fraction `a/q` and the mediants around it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FareyArc {
    pub a: u64,
    pub q: u64,
    pub lo: Rational,
    pub hi: Rational,
}

impl FareyArc {
    pub fn fraction(&self) -> Rational {
        Rational::new_raw(self.a, self.q)
    }

    pub fn length(&self) -> Rational {
        self.hi - self.lo
    }
}

/// Partition of `[0, 1]` by the mediants of consecutive terms of `F(Q)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FareyDissection {
    pub order: u64,
    pub arcs: Vec<FareyArc>,
}

/// Terms of the Farey sequence of order `order`, `0/1` through `1/1`.
pub fn farey_sequence(order: u64) -> Vec<(u64, u64)> {
    let mut out = vec![(0, 1)];
    if order == 0 {
        return out;
    }
    let (mut a, mut b, mut c, mut d) = (0u64, 1u64, 1u64, order);
    while c <= order {
        out.push((c, d));
        let k = (order + b) / d;
        (a, b, c, d) = (c, d, k * c - a, k * d - b);
    }
    out
}

pub fn farey_dissection(order: u64) -> Result<FareyDissection> {
    if order == 0 {
        return Err(Error::InvalidArgument(
            "Farey order must be at least 1".into(),
        ));
    }
    let seq = farey_sequence(order);
    let mediant = |l: (u64, u64), r: (u64, u64)| Rational::new(l.0 + r.0, l.1 + r.1);
    let arcs = seq
        .iter()
        .enumerate()
        .map(|(i, &(a, q))| FareyArc {
            a,
            q,
            lo: if i == 0 {
                Rational::from_integer(0)
            } else {
                mediant(seq[i - 1], (a, q))
            },
            hi: if i + 1 == seq.len() {
                Rational::from_integer(1)
            } else {
                mediant((a, q), seq[i + 1])
            },
        })
        .collect();
    Ok(FareyDissection { order, arcs })
}

/// A major arc `{α : |α − a/q| <= x^{δ−1}}` clipped to the Farey interval of `a/q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MajorArc<T> {
    pub a: u64,
    pub q: u64,
    pub lo: T,
    pub hi: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MajorArcs<T> {
    pub x: u64,
    pub delta: T,
    /// Farey order `⌊√x⌋` of the underlying dissection.
    pub farey_order: u64,
    /// Largest denominator `⌊x^{1/4}⌋` receiving a major arc.
    pub q_max: u64,
    pub radius: T,
    pub arcs: Vec<MajorArc<T>>,
    pub measure: T,
}

/// Major arcs for the dissection of order `⌊√x⌋`, one per `a/q` with `q <= x^{1/4}`.
pub fn major_arcs<T: Real>(x: u64, delta: T) -> Result<MajorArcs<T>> {
    if !(delta > T::zero() && delta <= T::lit(0.25)) {
        return Err(Error::BadDelta(delta.to_f64_lossy()));
    }
    if x == 0 {
        return Err(Error::InvalidArgument("x must be positive".into()));
    }
    let farey_order = x.sqrt();
    let q_max = x.nth_root(4);
    let radius = T::from_u64_lossy(x).powf(delta - T::one());
    let dissection = farey_dissection(farey_order)?;
    let to_real = |r: Rational| T::from_u64_lossy(*r.numer()) / T::from_u64_lossy(*r.denom());
    let arcs: Vec<MajorArc<T>> = dissection
        .arcs
        .iter()
        .filter(|arc| arc.q <= q_max)
        .map(|arc| {
            let centre = to_real(arc.fraction());
            let lo = (centre - radius).max(to_real(arc.lo));
            let hi = (centre + radius).min(to_real(arc.hi));
            MajorArc {
                a: arc.a,
                q: arc.q,
                lo,
                hi,
            }
        })
        .collect();
    let measure = arcs
        .iter()
        .fold(T::zero(), |acc, arc| acc + (arc.hi - arc.lo));
    Ok(MajorArcs {
        x,
        delta,
        farey_order,
        q_max,
        radius,
        arcs,
        measure,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;

    #[test]
    fn order_two() {
        let d = farey_dissection(2).unwrap();
        let fr: Vec<_> = d.arcs.iter().map(|a| (a.a, a.q)).collect();
        assert_eq!(fr, vec![(0, 1), (1, 2), (1, 1)]);
        assert_eq!(d.arcs[1].lo, Rational::new(1, 3));
        assert_eq!(d.arcs[1].hi, Rational::new(2, 3));
        assert_eq!(d.arcs[0].lo, Rational::from_integer(0));
        assert_eq!(d.arcs[2].hi, Rational::from_integer(1));
    }

    #[test]
    fn order_five_size_and_partition() {
        // brute force: reduced a/q in [0, 1] with q <= 5
        let mut brute = Vec::new();
        for q in 1..=5u64 {
            for a in 0..=q {
                if a.gcd(&q) == 1 {
                    brute.push(Rational::new(a, q));
                }
            }
        }
        brute.sort();
        let d = farey_dissection(5).unwrap();
        assert_eq!(d.arcs.len(), brute.len());
        assert_eq!(d.arcs.len(), 11);
        let fracs: Vec<_> = d.arcs.iter().map(|a| a.fraction()).collect();
        assert_eq!(fracs, brute);
        let total = d
            .arcs
            .iter()
            .fold(Rational::from_integer(0), |acc, a| acc + a.length());
        assert_eq!(total, Rational::from_integer(1));
        for w in d.arcs.windows(2) {
            assert_eq!(w[0].hi, w[1].lo);
        }
        for a in &d.arcs {
            assert!(a.lo <= a.fraction() && a.fraction() <= a.hi);
        }
    }

    #[test]
    fn major_arcs_are_clipped_and_small() {
        let m = major_arcs(10_000u64, 0.1f64).unwrap();
        assert_eq!(m.farey_order, 100);
        assert_eq!(m.q_max, 10);
        let expected = 1
            + (1..=10u64)
                .map(|q| (1..=q).filter(|a| a.gcd(&q) == 1).count())
                .sum::<usize>();
        assert_eq!(m.arcs.len(), expected);
        for arc in &m.arcs {
            let c = arc.a as f64 / arc.q as f64;
            assert!(arc.lo <= c && c <= arc.hi);
            assert!(arc.hi - arc.lo <= 2.0 * m.radius + 1e-15);
        }
        assert!(m.measure < 1.0);
        assert_eq!(
            major_arcs(100u64, 0.3f64).unwrap_err(),
            Error::BadDelta(0.3)
        );
        assert!(major_arcs(100u64, 0.0f64).is_err());
    }
}
