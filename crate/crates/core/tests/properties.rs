use num_complex::Complex;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::Zero;
use proptest::prelude::*;
use xyz_lab::arith::{canonicalize, factorize, metrics, radical, Triple, DEFAULT_TRIAL_BOUND};
use xyz_lab::asymptotics::{dickman_rho, g, rho_table, saddle_point, saddle_point_from};
use xyz_lab::circle::{
    circle_identity, exp_sum, farey_dissection, partial_zeta, partial_zeta_dirichlet,
    verify_q_factorization, WeightFunction, WeightedSmooth,
};
use xyz_lab::search::{find_solutions, SearchConfig};
use xyz_lab::series::{
    sing_f, sing_f_limit, sing_f_limit_with_cutoff, sing_fstar_limit_with_cutoff,
};
use xyz_lab::smooth::{enumerate_smooth, primes_upto, psi_enumerated, psi_exact, theta};

const SMALL_PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

/// Largest prime factor of every `n <= bound`, by a plain sieve.
fn largest_prime_factors(bound: usize) -> Vec<u64> {
    let mut lpf = vec![1u64; bound + 1];
    for p in 2..=bound {
        if lpf[p] == 1 {
            for m in (p..=bound).step_by(p) {
                lpf[m] = p as u64;
            }
        }
    }
    lpf
}

/// All `(x, y', z)` with `x <= y'`, `z = x + y' <= h`, every entry y-smooth.
fn brute_force(h: u64, y: u64, primitive_only: bool, lpf: &[u64]) -> Vec<(u128, u128, u128)> {
    let mut out = Vec::new();
    for a in 1..=h {
        for b in a..=h.saturating_sub(a) {
            let c = a + b;
            if lpf[a as usize] <= y
                && lpf[b as usize] <= y
                && lpf[c as usize] <= y
                && (!primitive_only || a.gcd(&b) == 1)
            {
                out.push((a as u128, b as u128, c as u128));
            }
        }
    }
    out.sort_by_key(|&(a, _, c)| (c, a));
    out
}

#[test]
fn search_matches_brute_force_at_full_range() {
    let lpf = largest_prime_factors(4000);
    for &y in &SMALL_PRIMES {
        for primitive in [false, true] {
            let report = find_solutions(&SearchConfig::new(2000, y, primitive)).unwrap();
            let got: Vec<_> = report.triples.iter().map(|t| (t.x, t.y, t.z)).collect();
            assert_eq!(
                got,
                brute_force(2000, y, primitive, &lpf),
                "y = {y}, primitive = {primitive}"
            );
        }
    }
}

fn assert_triple_invariants(t: &Triple, y: u64) {
    assert_eq!(t.x + t.y, t.z);
    assert!(1 <= t.x && t.x <= t.y && t.y < t.z);
    assert!(t.smoothness() <= y as u128);
    assert_eq!(t.primitive, t.x.gcd(&t.y) == 1);
    for (f, n) in [(&t.fx, t.x), (&t.fy, t.y), (&t.fz, t.z)] {
        assert_eq!(f.product(), Some(n));
        assert!(f.factors.windows(2).all(|w| w[0].0 < w[1].0));
        assert!(f.factors.iter().all(|&(_, e)| e >= 1));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn search_matches_brute_force(h in 2u64..=2000, yi in 0usize..6, primitive: bool) {
        let y = SMALL_PRIMES[yi];
        let lpf = largest_prime_factors(2 * h as usize);
        let report = find_solutions(&SearchConfig::new(h, y, primitive)).unwrap();
        let got: Vec<_> = report.triples.iter().map(|t| (t.x, t.y, t.z)).collect();
        prop_assert_eq!(got, brute_force(h, y, primitive, &lpf));
        prop_assert!(report.count_primitive <= report.count);
        for t in &report.triples {
            assert_triple_invariants(t, y);
        }
    }

    #[test]
    fn counts_nondecreasing_in_height_and_kappa(h in 16u64..2_500, dh in 0u64..2_500, kappa in 0.8f64..1.8, dk in 0.0f64..0.4) {
        let base = find_solutions(&SearchConfig::with_kappa(h, kappa, false)).unwrap();
        let taller = find_solutions(&SearchConfig::with_kappa(h + dh, kappa, false)).unwrap();
        let wider = find_solutions(&SearchConfig::with_kappa(h, kappa + dk, false)).unwrap();
        for other in [&taller, &wider] {
            prop_assert!(other.count >= base.count);
            prop_assert!(other.count_primitive >= base.count_primitive);
        }
    }

    #[test]
    fn canonicalize_is_symmetric(x in 1i128..1_000_000_000, y in 1i128..1_000_000_000, perm in 0usize..6, flip: bool) {
        let z = x + y;
        let reference = canonicalize(x, y, -z).unwrap();
        let mut v = [x, y, -z];
        let orders = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        v = [v[orders[perm][0]], v[orders[perm][1]], v[orders[perm][2]]];
        if flip {
            v = [-v[0], -v[1], -v[2]];
        }
        let t = canonicalize(v[0], v[1], v[2]).unwrap();
        prop_assert_eq!(&t, &reference);
        // idempotent on canonical input
        let again = canonicalize(t.x as i128, t.y as i128, -(t.z as i128)).unwrap();
        prop_assert_eq!(&again, &t);
    }

    #[test]
    fn radical_and_metrics_invariants(x in 1u128..10_000_000, y in 1u128..10_000_000) {
        let t = Triple::from_sum(x, y, DEFAULT_TRIAL_BOUND).unwrap();
        let r = radical(&t).unwrap();
        let s = t.smoothness();
        // R divides the primorial of S, hence log R <= θ(S)
        let primorial_primes = primes_upto(s as u64).primes;
        let mut rest = r;
        for &p in &primorial_primes {
            if rest.is_multiple_of(p as u128) {
                rest /= p as u128;
            }
        }
        prop_assert_eq!(rest, 1);
        prop_assert!((r as f64).ln() <= theta::<f64>(s as u64) + 1e-9);
        prop_assert!(r <= t.x * t.y * t.z);
        if t.z >= 3 {
            let m = metrics::<f64>(&t).unwrap();
            // recomputed from raw factorizations
            let mut ps: Vec<u128> = [t.x, t.y, t.z]
                .iter()
                .flat_map(|&n| factorize(n, DEFAULT_TRIAL_BOUND).unwrap().factors.into_iter().map(|(p, _)| p))
                .collect();
            ps.sort_unstable();
            ps.dedup();
            let lh = (t.z as f64).ln();
            let ls = (*ps.last().unwrap() as f64).ln();
            let lr: f64 = ps.iter().map(|&p| (p as f64).ln()).sum();
            prop_assert!((m.kappa0 - ls / lh.ln()).abs() <= 1e-12);
            prop_assert!((m.kappa1 - lr / lh).abs() <= 1e-12);
            prop_assert!((m.qstar - 1.5 / m.kappa0).abs() <= 1e-12);
            prop_assert!((m.kappa0 * lh.ln() - ls).abs() <= 1e-12 * ls.max(1.0));
        }
    }

    #[test]
    fn psi_monotone_and_algorithms_agree(x in 1u64..10_000, dx in 0u64..500, yi in 0usize..25, dy in 0u64..20) {
        let y = primes_upto(100).primes[yi];
        let base = psi_exact(x, y).unwrap();
        prop_assert_eq!(base, psi_enumerated(x, y).unwrap());
        prop_assert_eq!(base as usize, enumerate_smooth(x, y).unwrap().len());
        prop_assert!(psi_exact(x + dx, y).unwrap() >= base);
        prop_assert!(psi_exact(x, y + dy).unwrap() >= base);
    }

    #[test]
    fn g_strictly_decreasing(c in 0.3f64..3.0, dc in 0.01f64..1.0, y in 2u64..100_000) {
        prop_assert!(g(c, y as f64) > g(c + dc, y as f64));
    }

    #[test]
    fn rho_positive_and_nonincreasing(u in 1.0f64..20.0, du in 0.0f64..5.0) {
        let a = dickman_rho(u).unwrap();
        let b = dickman_rho(u + du).unwrap();
        prop_assert!(b > 0.0 && b <= a);
    }

    #[test]
    fn saddle_residual_and_bracket_independence(lx in 1.0f64..40.0, ly in 0.7f64..13.0, lo in 0.01f64..2.0, width in 0.01f64..3.0) {
        let (x, y) = (lx.exp(), ly.exp());
        let s = saddle_point(x, y).unwrap();
        prop_assert!(s.residual.abs() <= 1e-9 * x.ln(), "{:?}", s);
        let t = saddle_point_from(x, y, lo, lo + width).unwrap();
        prop_assert!((s.c - t.c).abs() <= 1e-12, "{} vs {}", s.c, t.c);
    }

    #[test]
    fn exp_sum_bounded_by_value_at_zero(x in 2.0f64..300.0, yi in 0usize..6, alpha in 0.0f64..1.0, eps in 0.05f64..0.3) {
        let phi = WeightFunction::bump(eps).unwrap();
        let y = SMALL_PRIMES[yi];
        let top = exp_sum(x, y, 0.0, &phi).unwrap();
        prop_assert!(top.im.abs() < 1e-12);
        prop_assert!(exp_sum(x, y, alpha, &phi).unwrap().norm() <= top.re + 1e-12);
    }

    #[test]
    fn q_factorization_residual(q in 1u64..=10_000, yi in 0usize..4, gamma in -1e-2f64..1e-2) {
        let phi = WeightFunction::bump(0.2).unwrap();
        let ws = WeightedSmooth::new(200.0, [3, 5, 7, 11][yi], &phi).unwrap();
        let check = verify_q_factorization(&ws, q, gamma).unwrap();
        prop_assert!(check.residual <= 1e-10, "{:?}", check);
    }
}

#[test]
fn circle_identity_on_the_small_grid() {
    for eps in [0.1, 0.2] {
        let phi = WeightFunction::bump(eps).unwrap();
        for x in 1..=100u32 {
            for &y in &SMALL_PRIMES {
                let c = circle_identity(x as f64, y, &phi).unwrap();
                let scale = c.direct.abs().max(1e-300);
                assert!(
                    c.diff <= 1e-9 * scale.max(1.0),
                    "x = {x}, y = {y}, eps = {eps}: {c:?}"
                );
            }
        }
    }
}

#[test]
fn farey_lengths_sum_to_one() {
    for order in 1..=40 {
        let d = farey_dissection(order).unwrap();
        let total = d.arcs.iter().fold(Ratio::zero(), |acc, a| acc + a.length());
        assert_eq!(total, Ratio::from_integer(1));
        for a in &d.arcs {
            assert!(a.lo < a.fraction() || a.fraction().is_zero());
            assert!(a.fraction() < a.hi || a.fraction() == Ratio::from_integer(1));
        }
    }
}

#[test]
fn partial_zeta_product_matches_dirichlet_sum() {
    let points = [
        Complex::new(1.5, 0.0),
        Complex::new(2.0, 3.0),
        Complex::new(1.2, -7.5),
        Complex::new(0.9, 1.0),
        Complex::new(3.0, 20.0),
    ];
    for s in points {
        for y in [2u64, 5, 13, 31] {
            let product = partial_zeta(s, y).unwrap();
            let (sum, bound) = partial_zeta_dirichlet(s, y, 1_000_000_000_000).unwrap();
            assert!(
                (product - sum).norm() <= bound + 1e-10 * product.norm(),
                "s = {s}, y = {y}"
            );
        }
    }
}

#[test]
fn delay_equation_on_the_table() {
    let table = rho_table();
    let n = (1.0 / table.step).round() as usize;
    assert!(table.values[..=n].iter().all(|&v| v == 1.0));
    assert!(table.values.windows(2).all(|w| w[1] <= w[0] && w[1] > 0.0));
}

#[test]
fn truncation_bounds_survive_doubling() {
    for c in [0.7f64, 0.8, 0.9] {
        let a = sing_f_limit_with_cutoff(c, 1_000_000).unwrap();
        let b = sing_f_limit_with_cutoff(c, 2_000_000).unwrap();
        assert!(
            (a.value.ln() - b.value.ln()).abs() <= a.truncation_bound,
            "c = {c}"
        );
        let a = sing_fstar_limit_with_cutoff(c, 1_000_000).unwrap();
        let b = sing_fstar_limit_with_cutoff(c, 2_000_000).unwrap();
        assert!(
            (a.value.ln() - b.value.ln()).abs() <= a.truncation_bound,
            "c = {c}"
        );
    }
}

#[test]
fn finite_y_series_approach_the_limit() {
    for c in [0.75f64, 0.9] {
        let limit = sing_f_limit(c).unwrap().value;
        let gaps: Vec<f64> = [100u64, 10_000, 1_000_000]
            .iter()
            .map(|&y| (sing_f(c, y).unwrap().value - limit).abs())
            .collect();
        assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2], "c = {c}: {gaps:?}");
    }
}
