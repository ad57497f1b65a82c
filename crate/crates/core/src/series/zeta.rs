use crate::arith::{factorize, mobius};
use crate::real::CompensatedSum;
use crate::{Error, Real, Result};

/// Number of directly summed terms in the Euler–Maclaurin evaluation.
pub const EM_TERMS: u64 = 10_000;

/// `ζ(s)` for real `s > 1` by Euler–Maclaurin summation through the `B₄` term.
pub fn zeta_real<T: Real>(s: T) -> Result<T> {
    Ok(zeta_minus_one(s)? + T::one())
}

/// `ζ(s) − 1`, accurate also when `s` is large and `ζ(s)` is close to one.
pub fn zeta_minus_one<T: Real>(s: T) -> Result<T> {
    if !(s > T::one()) {
        return Err(Error::Pole(s.to_f64_lossy()));
    }
    let n = T::from_u64_lossy(EM_TERMS);
    // smallest terms first
    let mut acc = CompensatedSum::new();
    for k in (2..EM_TERMS).rev() {
        acc.add(T::from_u64_lossy(k).powf(-s));
    }
    let head = acc.value();
    let n_pow = n.powf(-s);
    let one = T::one();
    let two = T::lit(2.0);
    let b2 = s * n_pow / (T::lit(12.0) * n);
    let b4 = s * (s + one) * (s + two) * n_pow / (T::lit(720.0) * n * n * n);
    Ok(head + n * n_pow / (s - one) + n_pow / two + b2 - b4)
}

/// Prime zeta function `P(s) = Σ_p p^{-s}` for real `s > 1`, from
/// `P(s) = Σ_k μ(k)/k · log ζ(ks)`.
pub fn prime_zeta<T: Real>(s: T) -> Result<T> {
    if !(s > T::one()) {
        return Err(Error::Pole(s.to_f64_lossy()));
    }
    let mut total = T::zero();
    let mut k = 1u64;
    loop {
        let ks = s * T::from_u64_lossy(k);
        // log ζ(ks) ≈ 2^{-ks}; stop once that is below the f64 floor of the sum
        if ks.to_f64_lossy() * std::f64::consts::LN_2 > 80.0 {
            break;
        }
        let mu = mobius(&factorize(k as u128, 64).expect("small k factors"));
        if mu != 0 {
            let term = zeta_minus_one(ks)?.ln_1p() / T::from_u64_lossy(k);
            total = if mu > 0 { total + term } else { total - term };
        }
        k += 1;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        let pi = std::f64::consts::PI;
        assert!((zeta_real(2.0f64).unwrap() - pi * pi / 6.0).abs() < 1e-14);
        assert!((zeta_real(4.0f64).unwrap() - pi.powi(4) / 90.0).abs() < 1e-14);
        assert!((zeta_real(1.5f64).unwrap() - 2.612_375_348_685_488).abs() < 1e-13);
        assert!((zeta_real(1.1f64).unwrap() - 10.584_448_464_950_809).abs() < 1e-11);
    }

    #[test]
    fn pole_and_large_arguments() {
        assert_eq!(zeta_real(1.0f64), Err(Error::Pole(1.0)));
        assert!(zeta_real(0.5f64).is_err());
        let z = zeta_minus_one(60.0f64).unwrap();
        let expect = 2f64.powi(-60) + 3f64.powi(-60) + 4f64.powi(-60);
        assert!((z / expect - 1.0).abs() < 1e-12);
    }

    #[test]
    fn prime_zeta_against_direct_sum() {
        // P(2) = 0.452247420041065498506543364832...
        assert!((prime_zeta(2.0f64).unwrap() - 0.452_247_420_041_065_5).abs() < 1e-14);
        // P(3) = 0.174762639299443536423113314...
        assert!((prime_zeta(3.0f64).unwrap() - 0.174_762_639_299_443_5).abs() < 1e-14);
    }

    #[test]
    fn single_precision_is_usable() {
        let z = zeta_real(2.0f32).unwrap();
        assert!((z - 1.644_934).abs() < 1e-3);
    }
}
