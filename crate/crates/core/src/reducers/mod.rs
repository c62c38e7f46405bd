//! Modular multiplication in GF(p) for SIKE-form primes.
//!
//! Three reduction strategies share one carrier type:
//!
//! * [`naive_modmul`]: full product, then long division. This is the oracle.
//! * [`barrett_mul`]: full product reduced by Barrett against `p` itself.
//! * [`ffm2_mul`]: split off `2^alpha` with a shift, Barrett-divide the rest by
//!   `d = f * 3^beta`, and fold quotient and remainder back together using
//!   `T = p -+ 1`.
//! * [`montgomery_mul`]: word-serial high-radix Montgomery over radix `2^k`.

mod barrett;
mod ffm2;
mod fp2;
mod montgomery;

pub use barrett::{
    barrett_correct, barrett_estimate, barrett_finish, barrett_reduce, barrett_reduce_traced,
    BarrettOutcome, BarrettParams,
};
pub use ffm2::{ffm2_mul, ffm2_trace, post_process, Ffm2Trace};
pub use fp2::{fp2_mul, fp2_product_streams, Fp2Element};
pub use montgomery::{
    from_montgomery, montgomery_modmul, montgomery_mul, montgomery_mul_canonical, to_montgomery,
    MontgomeryContext, DEFAULT_RADIX_BITS,
};

use core::fmt;

use thiserror::Error;

use crate::mpcore::{DefaultLimb, Limb, MpUint};
use crate::params::SikePrime;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReduceError {
    #[error("operands belong to different primes")]
    PrimeMismatch,
    #[error("value 0x{0} is not reduced below the modulus")]
    NotReduced(String),
    #[error("Barrett dividend has {bits} bits but k = {k}")]
    DividendTooLarge { bits: usize, k: usize },
    #[error("Barrett shift k = {k} too small for a {d_bits}-bit divisor (need 2^(k-1) > d)")]
    BarrettShiftTooSmall { k: usize, d_bits: usize },
    #[error("Barrett reciprocal is not floor(2^k / d)")]
    BadReciprocal,
    #[error("Barrett quotient estimate exceeds the true quotient")]
    QuotientOvershoot,
    #[error("Barrett remainder still >= d after one correction")]
    CorrectionExhausted,
    #[error("post-processing input out of range: {0}")]
    PostProcessRange(&'static str),
    #[error("Montgomery modulus must be odd and > 1")]
    EvenModulus,
    #[error("Montgomery radix must be 1..=64 bits, got {0}")]
    BadRadix(u32),
    #[error("Montgomery operand has {bits} bits, context allows {max}")]
    OperandTooWide { bits: usize, max: usize },
    #[error("Montgomery context modulus differs from the field prime")]
    ContextMismatch,
}

/// An element of GF(p), always in `[0, p)`.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement<'p, L: Limb = DefaultLimb> {
    value: MpUint<L>,
    prime: &'p SikePrime<L>,
}

impl<'p, L: Limb> FieldElement<'p, L> {
    pub fn new(prime: &'p SikePrime<L>, value: MpUint<L>) -> Result<Self, ReduceError> {
        if &value >= prime.p() {
            return Err(ReduceError::NotReduced(value.to_hex()));
        }
        Ok(Self { value, prime })
    }

    pub fn from_u64(prime: &'p SikePrime<L>, v: u64) -> Result<Self, ReduceError> {
        Self::new(prime, MpUint::from_u64(v))
    }

    pub fn zero(prime: &'p SikePrime<L>) -> Self {
        Self {
            value: MpUint::zero(),
            prime,
        }
    }

    pub fn one(prime: &'p SikePrime<L>) -> Self {
        Self {
            value: MpUint::one(),
            prime,
        }
    }

    pub(crate) fn new_unchecked(prime: &'p SikePrime<L>, value: MpUint<L>) -> Self {
        debug_assert!(&value < prime.p());
        Self { value, prime }
    }

    pub fn value(&self) -> &MpUint<L> {
        &self.value
    }

    pub fn into_value(self) -> MpUint<L> {
        self.value
    }

    pub fn prime(&self) -> &'p SikePrime<L> {
        self.prime
    }

    pub fn add(&self, other: &Self) -> Result<Self, ReduceError> {
        let prime = same_prime(self, other)?;
        let mut s = &self.value + &other.value;
        if &s >= prime.p() {
            s = &s - prime.p();
        }
        Ok(Self::new_unchecked(prime, s))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, ReduceError> {
        let prime = same_prime(self, other)?;
        let v = if self.value >= other.value {
            &self.value - &other.value
        } else {
            &(&self.value + prime.p()) - &other.value
        };
        Ok(Self::new_unchecked(prime, v))
    }
}

impl<L: Limb> fmt::Debug for FieldElement<'_, L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FieldElement(0x{} mod {})",
            self.value.to_hex(),
            self.prime.label()
        )
    }
}

impl<L: Limb> fmt::Display for FieldElement<'_, L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.value.to_hex())
    }
}

pub(crate) fn same_prime<'p, L: Limb>(
    a: &FieldElement<'p, L>,
    b: &FieldElement<'p, L>,
) -> Result<&'p SikePrime<L>, ReduceError> {
    if core::ptr::eq(a.prime, b.prime) || a.prime.p() == b.prime.p() {
        Ok(a.prime)
    } else {
        Err(ReduceError::PrimeMismatch)
    }
}

/// `(a * b) mod p` by full product and long division.
pub fn naive_modmul<'p, L: Limb>(
    a: &FieldElement<'p, L>,
    b: &FieldElement<'p, L>,
) -> Result<FieldElement<'p, L>, ReduceError> {
    let prime = same_prime(a, b)?;
    let c = &a.value * &b.value;
    let r = c.rem(prime.p()).expect("p is non-zero");
    Ok(FieldElement::new_unchecked(prime, r))
}

/// `(a * b) mod p` with a single Barrett reduction by `p`.
pub fn barrett_mul<'p, L: Limb>(
    a: &FieldElement<'p, L>,
    b: &FieldElement<'p, L>,
) -> Result<FieldElement<'p, L>, ReduceError> {
    let prime = same_prime(a, b)?;
    let out = prime.barrett_p().reduce(&(&a.value * &b.value))?;
    Ok(FieldElement::new_unchecked(prime, out.r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{build_prime, PrimeSign};

    #[test]
    fn naive_examples() {
        let p11 = build_prime::<u32>(1, 2, 1, PrimeSign::MinusOne).unwrap();
        let e = |v| FieldElement::from_u64(&p11, v).unwrap();
        assert_eq!(naive_modmul(&e(7), &e(5)).unwrap(), e(2));
        for b in 0..11 {
            assert_eq!(naive_modmul(&e(0), &e(b)).unwrap(), e(0));
            assert_eq!(naive_modmul(&e(1), &e(b)).unwrap(), e(b));
            assert_eq!(barrett_mul(&e(7), &e(b)).unwrap(), e(7 * b % 11));
        }
    }

    #[test]
    fn element_range_and_mismatch() {
        let p11 = build_prime::<u32>(1, 2, 1, PrimeSign::MinusOne).unwrap();
        let p13 = build_prime::<u32>(1, 2, 1, PrimeSign::PlusOne).unwrap();
        assert!(matches!(
            FieldElement::from_u64(&p11, 11),
            Err(ReduceError::NotReduced(_))
        ));
        let a = FieldElement::from_u64(&p11, 3).unwrap();
        let b = FieldElement::from_u64(&p13, 3).unwrap();
        assert_eq!(naive_modmul(&a, &b), Err(ReduceError::PrimeMismatch));
        assert_eq!(barrett_mul(&a, &b), Err(ReduceError::PrimeMismatch));
        assert_eq!(a.add(&b), Err(ReduceError::PrimeMismatch));
    }

    #[test]
    fn add_sub_wrap() {
        let p11 = build_prime::<u32>(1, 2, 1, PrimeSign::MinusOne).unwrap();
        let e = |v| FieldElement::from_u64(&p11, v).unwrap();
        assert_eq!(e(7).add(&e(6)).unwrap(), e(2));
        assert_eq!(e(3).sub(&e(5)).unwrap(), e(9));
        assert_eq!(e(5).sub(&e(5)).unwrap(), e(0));
    }
}
