use std::fmt;
use std::ops::{Div, Mul, Neg};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Trial-division bound used when canonicalizing arbitrary radicands.
const TRIAL_BOUND: u64 = 1 << 20;

/// Exact value `coeff * sqrt(radicand)` with a squarefree integer radicand.
///
/// A rational radicand `p/q` is folded as `sqrt(pq)/q`, so the canonical
/// radicand always has denominator one; zero is stored as `0 * sqrt(1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RadicalRational {
    coeff: BigRational,
    radicand: BigUint,
}

/// Splits `n = square^2 * free` with `free` squarefree.
fn squarefree_split(n: &BigUint) -> Result<(BigUint, BigUint)> {
    if n.is_zero() {
        return Ok((BigUint::zero(), BigUint::one()));
    }
    let mut rest = n.clone();
    let mut square = BigUint::one();
    let mut free = BigUint::one();
    let mut p: u64 = 2;
    while p <= TRIAL_BOUND {
        let bp = BigUint::from(p);
        if &bp * &bp > rest {
            break;
        }
        let mut exp = 0u32;
        if let Some(mut small) = rest.to_u64() {
            while small % p == 0 {
                small /= p;
                exp += 1;
            }
            rest = BigUint::from(small);
        } else {
            while (&rest % &bp).is_zero() {
                rest /= &bp;
                exp += 1;
            }
        }
        if exp > 0 {
            square *= bp.pow(exp / 2);
            if exp % 2 == 1 {
                free *= &bp;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > BigUint::one() {
        let bound = BigUint::from(TRIAL_BOUND);
        let root = rest.sqrt();
        if &root * &root == rest {
            square *= root;
        } else if &bound * &bound > rest || rest < bound.pow(3) {
            // every prime factor exceeds the trial bound, so `rest` is p, or p*q with p != q
            free *= rest;
        } else {
            return Err(Error::Canonicalization);
        }
    }
    Ok((square, free))
}

impl RadicalRational {
    pub fn zero() -> Self {
        Self {
            coeff: BigRational::zero(),
            radicand: BigUint::one(),
        }
    }

    pub fn one() -> Self {
        Self::rational(BigRational::one())
    }

    pub fn rational(coeff: BigRational) -> Self {
        Self {
            coeff,
            radicand: BigUint::one(),
        }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Self::rational(BigRational::from_integer(n.into()))
    }

    /// Exact `sqrt(value)` for a non-negative rational.
    pub fn sqrt_of(value: &BigRational) -> Result<Self> {
        if value.is_negative() {
            return Err(Error::InvalidArgument(format!(
                "square root of negative rational {value}"
            )));
        }
        if value.is_zero() {
            return Ok(Self::zero());
        }
        let num = value.numer().magnitude();
        let den = value.denom().magnitude();
        let (square, free) = squarefree_split(&(num * den))?;
        Ok(Self {
            coeff: BigRational::new(BigInt::from(square), BigInt::from(den.clone())),
            radicand: free,
        })
    }

    pub fn sqrt_of_integer(n: u64) -> Self {
        Self::sqrt_of(&BigRational::from_integer(BigInt::from(n)))
            .expect("u64 radicands are within the trial-division range")
    }

    pub fn coeff(&self) -> &BigRational {
        &self.coeff
    }

    pub fn radicand(&self) -> &BigUint {
        &self.radicand
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.radicand.is_one()
    }

    /// Re-canonicalizes a possibly non-canonical pair; idempotent on canonical values.
    pub fn canonical(coeff: BigRational, radicand: &BigRational) -> Result<Self> {
        let root = Self::sqrt_of(radicand)?;
        Ok(Self::rational(coeff) * root)
    }

    pub fn value(&self) -> f64 {
        let q = self.coeff.to_f64().unwrap_or(f64::NAN);
        if self.radicand.is_one() {
            q
        } else {
            q * self.radicand.to_f64().unwrap_or(f64::NAN).sqrt()
        }
    }

    /// Sum when both terms share a radicand (or one of them is zero).
    pub fn checked_add(&self, other: &Self) -> Option<Self> {
        if self.is_zero() {
            return Some(other.clone());
        }
        if other.is_zero() {
            return Some(self.clone());
        }
        if self.radicand != other.radicand {
            return None;
        }
        let coeff = &self.coeff + &other.coeff;
        if coeff.is_zero() {
            return Some(Self::zero());
        }
        Some(Self {
            coeff,
            radicand: self.radicand.clone(),
        })
    }

    pub fn checked_div(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            return None;
        }
        // 1 / (q sqrt r) = sqrt(r) / (q r)
        let r = BigRational::from_integer(BigInt::from(other.radicand.clone()));
        let inv = Self {
            coeff: BigRational::one() / (&other.coeff * r),
            radicand: other.radicand.clone(),
        };
        Some(self.clone() * inv)
    }
}

impl Mul for RadicalRational {
    type Output = RadicalRational;

    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        // squarefree r1, r2 with g = gcd: r1 r2 = g^2 (r1/g)(r2/g), the last two coprime
        let g = self.radicand.gcd(&rhs.radicand);
        let free = (&self.radicand / &g) * (&rhs.radicand / &g);
        let coeff = self.coeff * rhs.coeff * BigRational::from_integer(BigInt::from(g));
        Self {
            coeff,
            radicand: free,
        }
    }
}

impl<'a> Mul<&'a RadicalRational> for &'a RadicalRational {
    type Output = RadicalRational;

    fn mul(self, rhs: &'a RadicalRational) -> RadicalRational {
        self.clone() * rhs.clone()
    }
}

impl Div for RadicalRational {
    type Output = RadicalRational;

    fn div(self, rhs: Self) -> Self {
        self.checked_div(&rhs).expect("division by a zero radical")
    }
}

impl Neg for RadicalRational {
    type Output = RadicalRational;

    fn neg(self) -> Self {
        Self {
            coeff: -self.coeff,
            radicand: self.radicand,
        }
    }
}

impl fmt::Display for RadicalRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.radicand.is_one() {
            write!(f, "{}", self.coeff)
        } else {
            write!(f, "({})*sqrt({})", self.coeff, self.radicand)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn canonical_forms() {
        let s24 = RadicalRational::sqrt_of_integer(24);
        assert_eq!(s24.coeff(), &q(2, 1));
        assert_eq!(s24.radicand(), &BigUint::from(6u32));
        let half = RadicalRational::sqrt_of(&q(1, 2)).unwrap();
        assert_eq!(half.coeff(), &q(1, 2));
        assert_eq!(half.radicand(), &BigUint::from(2u32));
        assert_eq!(
            RadicalRational::sqrt_of_integer(49),
            RadicalRational::from_integer(7)
        );
        assert!(RadicalRational::sqrt_of(&q(-1, 3)).is_err());
    }

    #[test]
    fn equal_values_have_equal_fields() {
        let a = RadicalRational::sqrt_of_integer(8) * RadicalRational::sqrt_of_integer(3);
        let b = RadicalRational::sqrt_of_integer(6) * RadicalRational::from_integer(2);
        assert_eq!(a, b);
        let c = RadicalRational::sqrt_of_integer(2) / RadicalRational::sqrt_of_integer(8);
        assert_eq!(c, RadicalRational::from_ratio(1, 2));
    }

    #[test]
    fn canonicalization_is_idempotent() {
        let x = RadicalRational::canonical(q(3, 4), &q(50, 9)).unwrap();
        let again = RadicalRational::canonical(
            x.coeff().clone(),
            &BigRational::from_integer(BigInt::from(x.radicand().clone())),
        )
        .unwrap();
        assert_eq!(x, again);
        assert!((x.value() - 0.75 * (50.0f64 / 9.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn large_prime_cofactor() {
        // 1_000_003 is prime and exceeds the trial bound only after squaring
        let p = BigUint::from(1_000_003u64);
        let (sq, free) = squarefree_split(&(&p * &p * BigUint::from(12u32))).unwrap();
        assert_eq!(sq, &p * BigUint::from(2u32));
        assert_eq!(free, BigUint::from(3u32));
    }

    #[test]
    fn addition_needs_matching_radicands() {
        let a = RadicalRational::sqrt_of_integer(2);
        let b = RadicalRational::sqrt_of_integer(8);
        assert_eq!(
            a.checked_add(&b).unwrap(),
            RadicalRational::sqrt_of_integer(18)
        );
        assert!(a.checked_add(&RadicalRational::one()).is_none());
        assert_eq!(a.checked_add(&-a.clone()).unwrap(), RadicalRational::zero());
    }
}
