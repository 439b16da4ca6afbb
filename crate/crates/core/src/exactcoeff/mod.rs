//! Exact normalization and ladder coefficients.
//!
//! Family normalizations are ratios of square roots of factorials and double
//! factorials; they are kept as [`RadicalRational`] values so that table
//! identities can be checked with exact equality before any float comparison.

mod radical;
mod tables;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

pub use radical::RadicalRational;
pub use tables::{
    fock_route_coefficient, table_coefficient, table_entries, FamilyKind, Parity, PrintedMisprint,
    Table, TableEntry, TableRow, TargetLabel,
};

use crate::error::{Error, Result};

/// `n!! = n (n-2) (n-4) ...`, with `0!! = (-1)!! = 1`.
pub fn double_factorial(n: i64) -> Result<BigInt> {
    if n < -1 {
        return Err(Error::InvalidArgument(format!(
            "double factorial undefined for {n}"
        )));
    }
    let mut acc = BigInt::one();
    let mut k = n;
    while k > 1 {
        acc *= k;
        k -= 2;
    }
    Ok(acc)
}

pub fn factorial(n: u64) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `sqrt(n!)` as a product of canonical `sqrt(k)` factors.
pub fn sqrt_factorial(n: u64) -> RadicalRational {
    (2..=n).fold(RadicalRational::one(), |acc, k| {
        acc * RadicalRational::sqrt_of_integer(k)
    })
}

fn odd_double_factorial(m: u64) -> BigRational {
    // (2m-1)!!
    BigRational::from_integer(
        double_factorial(2 * m as i64 - 1).expect("2m - 1 >= -1 for every m >= 0"),
    )
}

/// `sqrt((2m)!) / (2m-1)!!`: scale of the even family member `m` over `phi_{2m}`.
pub fn even_norm(m: u64) -> RadicalRational {
    sqrt_factorial(2 * m) * RadicalRational::rational(BigRational::one() / odd_double_factorial(m))
}

/// `sqrt((2m+1)!) / (2m-1)!!`: scale of the odd family member `m` over `phi_{2m+1}`.
pub fn odd_norm(m: u64) -> RadicalRational {
    sqrt_factorial(2 * m + 1)
        * RadicalRational::rational(BigRational::one() / odd_double_factorial(m))
}

/// Ratio between the ladder-normalized dual and the biorthonormal one:
/// `(2m)! / ((2m-1)!!)^2`.
pub fn tilde_psi_ratio(m: u64) -> RadicalRational {
    let odd = odd_double_factorial(m);
    RadicalRational::rational(BigRational::from_integer(factorial(2 * m)) / (&odd * &odd))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn double_factorial_boundaries() {
        assert_eq!(double_factorial(-1).unwrap(), BigInt::from(1));
        assert_eq!(double_factorial(0).unwrap(), BigInt::from(1));
        assert_eq!(double_factorial(5).unwrap(), BigInt::from(15));
        assert_eq!(double_factorial(6).unwrap(), BigInt::from(48));
        assert!(double_factorial(-2).is_err());
    }

    #[test]
    fn even_norm_values() {
        assert_eq!(even_norm(0), RadicalRational::one());
        assert_eq!(even_norm(1), RadicalRational::sqrt_of_integer(2));
        let two_thirds_sqrt6 =
            RadicalRational::from_ratio(2, 3) * RadicalRational::sqrt_of_integer(6);
        assert_eq!(even_norm(2), two_thirds_sqrt6);
        assert!((even_norm(2).value() - 1.63299).abs() < 1e-5);
    }

    #[test]
    fn odd_norm_values() {
        assert_eq!(odd_norm(0), RadicalRational::one());
        assert_eq!(odd_norm(1), RadicalRational::sqrt_of_integer(6));
        let expected = RadicalRational::sqrt_of_integer(120) / RadicalRational::from_integer(3);
        assert_eq!(odd_norm(2), expected);
        assert!((odd_norm(2).value() - 3.65148).abs() < 1e-5);
    }

    #[test]
    fn odd_norm_is_even_norm_times_sqrt() {
        for m in 0..=30u64 {
            let lhs = even_norm(m) * RadicalRational::sqrt_of_integer(2 * m + 1);
            assert_eq!(lhs, odd_norm(m), "m = {m}");
        }
    }

    #[test]
    fn a_on_even_family_from_norms() {
        // sqrt(2m) * even_norm(m) / odd_norm(m-1) == 2m / (2m-1)
        for m in 1..=30u64 {
            let derived = RadicalRational::sqrt_of_integer(2 * m) * even_norm(m) / odd_norm(m - 1);
            assert_eq!(
                derived,
                RadicalRational::from_ratio(2 * m as i64, 2 * m as i64 - 1),
                "m = {m}"
            );
        }
    }

    #[test]
    fn norms_survive_m_64() {
        // doubles overflow the raw factorials long before this; exact ratios stay tame
        let e = even_norm(64).value();
        assert!(e.is_finite() && e > 1.0);
        let ratio = odd_norm(64) / even_norm(64);
        assert_eq!(ratio, RadicalRational::sqrt_of_integer(129));
    }

    #[test]
    fn tilde_ratio_is_even_norm_squared() {
        for m in 0..=20u64 {
            assert_eq!(tilde_psi_ratio(m), even_norm(m) * even_norm(m));
        }
    }
}
