//! Word-serial high-radix Montgomery multiplication.
//!
//! One radix-`2^k` digit of `A` is consumed per step:
//!
//! ```text
//! S_0 = 0
//! for i in 0..=m+2:
//!     q_i     = S_i mod 2^k
//!     S_{i+1} = (S_i + q_i * M̄) / 2^k + a_i * B
//! ```
//!
//! With `M̄ = M' * M` and `M * M' = -1 (mod 2^k)` every division is exact. The top
//! digit `a_{m+2}` is zero, so `m + 2` shifts carry weight and the result is
//! `S_{m+3} = A * B * 2^(-k(m+2)) (mod M)`, bounded by `2 * M̄` but not canonical.
//! For `M = f * 2^alpha * 3^beta - 1` and `k <= alpha`, `M' = 1` and `M̄ = M`.

use crate::mpcore::{DefaultLimb, Limb, MpUint};
use crate::params::SikePrime;

use super::{FieldElement, ReduceError};

/// Radix width used when a caller does not pick one.
pub const DEFAULT_RADIX_BITS: u32 = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MontgomeryContext<L: Limb = DefaultLimb> {
    radix_bits: u32,
    m: usize,
    modulus: MpUint<L>,
    m_prime: u64,
    m_bar: MpUint<L>,
    r: MpUint<L>,
    r2_mod_m: MpUint<L>,
}

impl<L: Limb> MontgomeryContext<L> {
    /// Context for an odd modulus, with `m` the smallest digit count giving `4M < 2^(km)`.
    pub fn new(modulus: MpUint<L>, radix_bits: u32) -> Result<Self, ReduceError> {
        if !(1..=64).contains(&radix_bits) {
            return Err(ReduceError::BadRadix(radix_bits));
        }
        if !modulus.is_odd() || modulus == MpUint::one() {
            return Err(ReduceError::EvenModulus);
        }
        let k = radix_bits as usize;
        let m = (modulus.bits() + 2).div_ceil(k);
        let m_prime = neg_inverse_mod_2k(modulus.extract_bits(0, 64), radix_bits);
        let m_bar = &modulus * &MpUint::from_u64(m_prime);
        let r_bits = k * (m + 2);
        let r = MpUint::pow2(r_bits);

        // R^2 mod M by doubling 2^0 up to 2^(2 * r_bits)
        let mut r2 = MpUint::one();
        for _ in 0..2 * r_bits {
            r2 = &r2 << 1;
            if r2 >= modulus {
                r2 = &r2 - &modulus;
            }
        }

        Ok(Self {
            radix_bits,
            m,
            modulus,
            m_prime,
            m_bar,
            r,
            r2_mod_m: r2,
        })
    }

    pub fn for_prime(prime: &SikePrime<L>, radix_bits: u32) -> Result<Self, ReduceError> {
        Self::new(prime.p().clone(), radix_bits)
    }

    pub fn radix_bits(&self) -> u32 {
        self.radix_bits
    }

    /// Digit count `m` of the modulus.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn modulus(&self) -> &MpUint<L> {
        &self.modulus
    }

    /// `M'` with `M * M' = -1 (mod 2^k)`.
    pub fn m_prime(&self) -> u64 {
        self.m_prime
    }

    /// `M̄ = (M' mod 2^k) * M`
    pub fn m_bar(&self) -> &MpUint<L> {
        &self.m_bar
    }

    /// `R = 2^(k(m+2))`
    pub fn r(&self) -> &MpUint<L> {
        &self.r
    }

    pub fn r_bits(&self) -> usize {
        self.radix_bits as usize * (self.m + 2)
    }

    pub fn r2_mod_m(&self) -> &MpUint<L> {
        &self.r2_mod_m
    }

    /// Operands must stay below this (`2 * M̄`).
    pub fn operand_bound(&self) -> MpUint<L> {
        &self.m_bar << 1
    }

    /// Reduces a loop output (`< 2 * M̄`) into `[0, M)`.
    pub fn canonicalize(&self, s: MpUint<L>) -> MpUint<L> {
        if s < self.modulus {
            return s;
        }
        let s = &s - &self.modulus;
        if s < self.modulus {
            s
        } else {
            // only reachable when M' > 1
            s.rem(&self.modulus).expect("modulus is non-zero")
        }
    }
}

/// `-M^{-1} mod 2^k` for odd `M`, from the low 64 bits of `M`.
fn neg_inverse_mod_2k(m_low: u64, k: u32) -> u64 {
    // Newton iteration doubles the number of correct low bits each step
    let mut inv: u64 = 1;
    for _ in 0..6 {
        inv = inv.wrapping_mul(2u64.wrapping_sub(m_low.wrapping_mul(inv)));
    }
    let neg = inv.wrapping_neg();
    if k == 64 {
        neg
    } else {
        neg & ((1u64 << k) - 1)
    }
}

/// Runs the digit-serial loop. Returns `S_{m+3} = a*b*R^{-1} (mod M)`, `< 2 * M̄`.
pub fn montgomery_mul<L: Limb>(
    a: &MpUint<L>,
    b: &MpUint<L>,
    ctx: &MontgomeryContext<L>,
) -> Result<MpUint<L>, ReduceError> {
    let bound = ctx.operand_bound();
    for v in [a, b] {
        if v >= &bound {
            return Err(ReduceError::OperandTooWide {
                bits: v.bits(),
                max: bound.bits(),
            });
        }
    }
    let k = ctx.radix_bits as usize;
    // a_{m+2} must be zero
    if a.bits() > k * (ctx.m + 2) {
        return Err(ReduceError::OperandTooWide {
            bits: a.bits(),
            max: k * (ctx.m + 2),
        });
    }

    let mut s = MpUint::zero();
    for i in 0..ctx.m + 3 {
        let q = s.extract_bits(0, k);
        let a_i = a.extract_bits(i * k, k);
        let t = &s + &(&ctx.m_bar * &MpUint::from_u64(q));
        debug_assert!(t.low_bits(k).is_zero());
        s = &(&t >> k) + &(b * &MpUint::from_u64(a_i));
    }
    Ok(s)
}

/// [`montgomery_mul`] followed by reduction into `[0, M)`.
pub fn montgomery_mul_canonical<L: Limb>(
    a: &MpUint<L>,
    b: &MpUint<L>,
    ctx: &MontgomeryContext<L>,
) -> Result<MpUint<L>, ReduceError> {
    montgomery_mul(a, b, ctx).map(|s| ctx.canonicalize(s))
}

/// `a * R mod M`.
pub fn to_montgomery<L: Limb>(
    a: &FieldElement<'_, L>,
    ctx: &MontgomeryContext<L>,
) -> Result<MpUint<L>, ReduceError> {
    if a.prime().p() != ctx.modulus() {
        return Err(ReduceError::ContextMismatch);
    }
    montgomery_mul_canonical(a.value(), ctx.r2_mod_m(), ctx)
}

/// `s * R^{-1} mod M`, canonical.
pub fn from_montgomery<'p, L: Limb>(
    s: &MpUint<L>,
    ctx: &MontgomeryContext<L>,
    prime: &'p SikePrime<L>,
) -> Result<FieldElement<'p, L>, ReduceError> {
    if prime.p() != ctx.modulus() {
        return Err(ReduceError::ContextMismatch);
    }
    let v = montgomery_mul_canonical(s, &MpUint::one(), ctx)?;
    Ok(FieldElement::new_unchecked(prime, v))
}

/// `(a * b) mod p` through the Montgomery domain and back.
pub fn montgomery_modmul<'p, L: Limb>(
    a: &FieldElement<'p, L>,
    b: &FieldElement<'p, L>,
    ctx: &MontgomeryContext<L>,
) -> Result<FieldElement<'p, L>, ReduceError> {
    let prime = super::same_prime(a, b)?;
    let am = to_montgomery(a, ctx)?;
    let bm = to_montgomery(b, ctx)?;
    let s = montgomery_mul(&am, &bm, ctx)?;
    from_montgomery(&s, ctx, prime)
}
