//! Multi-precision unsigned integers.
//!
//! [`MpUint`] is a little-endian vector of [`Limb`] digits kept in canonical form
//! (no high zero digits). The digit type is a type parameter so the same code can
//! be exercised at 8, 16, 32 and 64 bits; `u32` is the default.
//!
//! Multiplication is schoolbook and general division is bitwise shift-subtract.
//! Neither is on a hot path: the reduction algorithms only divide by powers of two.

mod limb;

pub use limb::Limb;

use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Shl, Shr, Sub};
use core::str::FromStr;

use rand::Rng;
use thiserror::Error;

/// Digit type used when none is named.
pub type DefaultLimb = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MpError {
    #[error("subtraction underflow: subtrahend exceeds minuend")]
    Underflow,
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid hex string {0:?}")]
    InvalidHex(String),
}

/// Arbitrary-width unsigned integer.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct MpUint<L: Limb = DefaultLimb> {
    // least-significant first, no trailing zero digits
    limbs: Vec<L>,
}

impl<L: Limb> MpUint<L> {
    pub fn zero() -> Self {
        Self { limbs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_u64(1)
    }

    pub fn from_u64(mut v: u64) -> Self {
        let mut limbs = Vec::new();
        while v != 0 {
            limbs.push(L::from_u64(v));
            v = if L::BITS >= 64 { 0 } else { v >> L::BITS };
        }
        Self { limbs }
    }

    pub fn from_u128(v: u128) -> Self {
        let lo = Self::from_u64(v as u64);
        let hi = Self::from_u64((v >> 64) as u64);
        &(&hi << 64) + &lo
    }

    /// Builds a value from raw digits, least-significant first.
    pub fn from_limbs(limbs: Vec<L>) -> Self {
        let mut out = Self { limbs };
        out.normalize();
        out
    }

    /// Canonical digits, least-significant first. Empty for zero.
    pub fn limbs(&self) -> &[L] {
        &self.limbs
    }

    pub fn to_u64(&self) -> Option<u64> {
        if self.bits() > 64 {
            return None;
        }
        let mut v = 0u64;
        for (i, l) in self.limbs.iter().enumerate() {
            v |= l.to_u64() << (i as u32 * L::BITS);
        }
        Some(v)
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.is_empty()
    }

    pub fn is_odd(&self) -> bool {
        self.bit(0)
    }

    fn normalize(&mut self) {
        while self.limbs.last() == Some(&L::ZERO) {
            self.limbs.pop();
        }
    }

    /// Number of significant bits; zero has bit length 0.
    pub fn bits(&self) -> usize {
        match self.limbs.last() {
            None => 0,
            Some(top) => {
                let top_bits = 64 - top.to_u64().leading_zeros() as usize;
                (self.limbs.len() - 1) * L::BITS as usize + top_bits
            }
        }
    }

    pub fn bit(&self, i: usize) -> bool {
        let w = L::BITS as usize;
        match self.limbs.get(i / w) {
            Some(l) => (l.to_u64() >> (i % w)) & 1 == 1,
            None => false,
        }
    }

    fn set_bit(&mut self, i: usize) {
        let w = L::BITS as usize;
        if self.limbs.len() <= i / w {
            self.limbs.resize(i / w + 1, L::ZERO);
        }
        let l = &mut self.limbs[i / w];
        *l = L::from_u64(l.to_u64() | (1u64 << (i % w)));
    }

    /// `2^s`.
    pub fn pow2(s: usize) -> Self {
        let mut out = Self::zero();
        out.set_bit(s);
        out
    }

    /// `len` bits starting at bit `offset`, as a machine word. `len <= 64`.
    pub fn extract_bits(&self, offset: usize, len: usize) -> u64 {
        assert!(len <= 64, "extract_bits: len {len} > 64");
        let w = L::BITS as usize;
        let mut v: u128 = 0;
        let mut got = 0usize;
        let mut idx = offset / w;
        let skip = offset % w;
        // skip + len <= w - 1 + 64, so at most 127 bits are gathered
        while got < len + skip && idx < self.limbs.len() {
            v |= self.limbs[idx].widen() << got;
            got += w;
            idx += 1;
        }
        let v = v >> skip;
        if len == 64 {
            v as u64
        } else {
            (v as u64) & ((1u64 << len) - 1)
        }
    }

    /// Exact difference, or [`MpError::Underflow`] when `other > self`.
    pub fn checked_sub(&self, other: &Self) -> Result<Self, MpError> {
        if self < other {
            return Err(MpError::Underflow);
        }
        let mut out = self.limbs.clone();
        sub_in_place(&mut out, &other.limbs);
        Ok(Self::from_limbs(out))
    }

    /// `self mod 2^s`.
    pub fn low_bits(&self, s: usize) -> Self {
        if s >= self.bits() {
            return self.clone();
        }
        let w = L::BITS as usize;
        let mut limbs = self.limbs[..s.div_ceil(w)].to_vec();
        let rem = s % w;
        if rem != 0 {
            let top = limbs.last_mut().expect("non-empty");
            *top = L::from_u64(top.to_u64() & ((1u64 << rem) - 1));
        }
        Self::from_limbs(limbs)
    }

    /// `(self >> s, self mod 2^s)`, so that `q * 2^s + r == self`.
    pub fn split_pow2(&self, s: usize) -> (Self, Self) {
        (self >> s, self.low_bits(s))
    }

    /// Quotient and remainder by shift-subtract long division.
    pub fn divmod(&self, d: &Self) -> Result<(Self, Self), MpError> {
        if d.is_zero() {
            return Err(MpError::DivisionByZero);
        }
        if self < d {
            return Ok((Self::zero(), self.clone()));
        }
        if d.limbs.len() == 1 {
            let (q, r) = self.divmod_limb(d.limbs[0]);
            return Ok((q, Self::from_u64(r.to_u64())));
        }
        let n = self.bits();
        let mut q = vec![L::ZERO; self.limbs.len()];
        let mut r: Vec<L> = Vec::with_capacity(d.limbs.len() + 1);
        let w = L::BITS as usize;
        for i in (0..n).rev() {
            shl1_in_place(&mut r);
            if self.bit(i) {
                if r.is_empty() {
                    r.push(L::ZERO);
                }
                r[0] = L::from_u64(r[0].to_u64() | 1);
            }
            if cmp_limbs(&r, &d.limbs) != Ordering::Less {
                sub_in_place(&mut r, &d.limbs);
                q[i / w] = L::from_u64(q[i / w].to_u64() | (1u64 << (i % w)));
            }
        }
        Ok((Self::from_limbs(q), Self::from_limbs(r)))
    }

    fn divmod_limb(&self, d: L) -> (Self, L) {
        let d = d.widen();
        let mut q = vec![L::ZERO; self.limbs.len()];
        let mut rem: u128 = 0;
        for i in (0..self.limbs.len()).rev() {
            let cur = (rem << L::BITS) | self.limbs[i].widen();
            q[i] = L::truncate(cur / d);
            rem = cur % d;
        }
        (Self::from_limbs(q), L::truncate(rem))
    }

    /// `self mod m`.
    pub fn rem(&self, m: &Self) -> Result<Self, MpError> {
        self.divmod(m).map(|(_, r)| r)
    }

    /// `base^exp` by square-and-multiply.
    pub fn pow_u(base: u64, exp: u32) -> Self {
        let mut acc = Self::one();
        let b = Self::from_u64(base);
        for i in (0..32 - exp.leading_zeros()).rev() {
            acc = &acc * &acc;
            if (exp >> i) & 1 == 1 {
                acc = &acc * &b;
            }
        }
        acc
    }

    /// Lowercase hex, most-significant first, no prefix; zero is `"0"`.
    pub fn to_hex(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let nibbles = self.bits().div_ceil(4);
        (0..nibbles)
            .rev()
            .map(|i| char::from_digit(self.extract_bits(4 * i, 4) as u32, 16).unwrap())
            .collect()
    }

    /// Parses hex digits (either case, no prefix). Leading zeros are accepted.
    pub fn from_hex(s: &str) -> Result<Self, MpError> {
        if s.is_empty() {
            return Err(MpError::InvalidHex(s.to_string()));
        }
        let w = L::BITS as usize;
        let mut limbs = vec![L::ZERO; (s.len() * 4).div_ceil(w)];
        for (i, c) in s.chars().rev().enumerate() {
            let v = c
                .to_digit(16)
                .ok_or_else(|| MpError::InvalidHex(s.to_string()))? as u64;
            let bit = 4 * i;
            // a nibble never straddles digits since every width is a multiple of 4
            let l = &mut limbs[bit / w];
            *l = L::from_u64(l.to_u64() | (v << (bit % w)));
        }
        Ok(Self::from_limbs(limbs))
    }

    pub fn to_le_bytes(&self) -> Vec<u8> {
        (0..self.bits().div_ceil(8))
            .map(|i| self.extract_bits(8 * i, 8) as u8)
            .collect()
    }

    pub fn from_le_bytes(bytes: &[u8]) -> Self {
        let w = L::BITS as usize;
        let mut limbs = vec![L::ZERO; (bytes.len() * 8).div_ceil(w)];
        for (i, b) in bytes.iter().enumerate() {
            let bit = 8 * i;
            let l = &mut limbs[bit / w];
            *l = L::from_u64(l.to_u64() | ((*b as u64) << (bit % w)));
        }
        Self::from_limbs(limbs)
    }

    /// Re-expresses the same value over another digit width.
    pub fn to_width<M: Limb>(&self) -> MpUint<M> {
        MpUint::from_le_bytes(&self.to_le_bytes())
    }

    /// Uniform value in `[0, 2^bits)`.
    pub fn random_bits<R: Rng + ?Sized>(rng: &mut R, bits: usize) -> Self {
        let mut bytes = vec![0u8; bits.div_ceil(8)];
        rng.fill_bytes(&mut bytes);
        Self::from_le_bytes(&bytes).low_bits(bits)
    }

    /// Uniform value in `[0, bound)` by rejection sampling. `bound` must be non-zero.
    pub fn random_below<R: Rng + ?Sized>(rng: &mut R, bound: &Self) -> Self {
        assert!(!bound.is_zero(), "random_below: empty range");
        let bits = bound.bits();
        loop {
            let v = Self::random_bits(rng, bits);
            if &v < bound {
                return v;
            }
        }
    }
}

fn cmp_limbs<L: Limb>(a: &[L], b: &[L]) -> Ordering {
    // both canonical
    a.len()
        .cmp(&b.len())
        .then_with(|| a.iter().rev().cmp(b.iter().rev()))
}

fn shl1_in_place<L: Limb>(a: &mut Vec<L>) {
    let mut carry = 0u64;
    for l in a.iter_mut() {
        let v = l.to_u64();
        *l = L::from_u64((v << 1) | carry);
        carry = v >> (L::BITS - 1);
    }
    if carry != 0 {
        a.push(L::from_u64(carry));
    }
}

/// `a -= b` with `a >= b`; keeps `a` canonical.
fn sub_in_place<L: Limb>(a: &mut Vec<L>, b: &[L]) {
    let mut borrow = false;
    for (i, ai) in a.iter_mut().enumerate() {
        if i >= b.len() && !borrow {
            break;
        }
        let (d, br) = L::sbb(*ai, b.get(i).copied().unwrap_or(L::ZERO), borrow);
        *ai = d;
        borrow = br;
    }
    debug_assert!(!borrow, "sub_in_place underflow");
    while a.last() == Some(&L::ZERO) {
        a.pop();
    }
}

impl<L: Limb> PartialOrd for MpUint<L> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<L: Limb> Ord for MpUint<L> {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_limbs(&self.limbs, &other.limbs)
    }
}

impl<L: Limb> Add for &MpUint<L> {
    type Output = MpUint<L>;

    fn add(self, rhs: Self) -> MpUint<L> {
        let (long, short) = if self.limbs.len() >= rhs.limbs.len() {
            (&self.limbs, &rhs.limbs)
        } else {
            (&rhs.limbs, &self.limbs)
        };
        let mut out = Vec::with_capacity(long.len() + 1);
        let mut carry = false;
        for (i, &l) in long.iter().enumerate() {
            let (s, c) = L::adc(l, short.get(i).copied().unwrap_or(L::ZERO), carry);
            out.push(s);
            carry = c;
        }
        if carry {
            out.push(L::from_u64(1));
        }
        MpUint::from_limbs(out)
    }
}

impl<L: Limb> Sub for &MpUint<L> {
    type Output = MpUint<L>;

    /// Panics on underflow; use [`MpUint::checked_sub`] for a recoverable error.
    fn sub(self, rhs: Self) -> MpUint<L> {
        self.checked_sub(rhs).expect("MpUint subtraction underflow")
    }
}

impl<L: Limb> Mul for &MpUint<L> {
    type Output = MpUint<L>;

    fn mul(self, rhs: Self) -> MpUint<L> {
        if self.is_zero() || rhs.is_zero() {
            return MpUint::zero();
        }
        let (a, b) = (&self.limbs, &rhs.limbs);
        let mut out = vec![L::ZERO; a.len() + b.len()];
        for (i, &ai) in a.iter().enumerate() {
            let mut carry = L::ZERO;
            for (j, &bj) in b.iter().enumerate() {
                let (lo, hi) = L::mac(ai, bj, out[i + j], carry);
                out[i + j] = lo;
                carry = hi;
            }
            out[i + b.len()] = carry;
        }
        MpUint::from_limbs(out)
    }
}

impl<L: Limb> Shl<usize> for &MpUint<L> {
    type Output = MpUint<L>;

    fn shl(self, s: usize) -> MpUint<L> {
        if self.is_zero() {
            return MpUint::zero();
        }
        let w = L::BITS as usize;
        let (digits, bits) = (s / w, (s % w) as u32);
        let mut out = vec![L::ZERO; digits];
        out.reserve(self.limbs.len() + 1);
        if bits == 0 {
            out.extend_from_slice(&self.limbs);
        } else {
            let mut carry = 0u64;
            for l in &self.limbs {
                let v = l.to_u64();
                out.push(L::from_u64((v << bits) | carry));
                carry = v >> (L::BITS - bits);
            }
            out.push(L::from_u64(carry));
        }
        MpUint::from_limbs(out)
    }
}

impl<L: Limb> Shr<usize> for &MpUint<L> {
    type Output = MpUint<L>;

    fn shr(self, s: usize) -> MpUint<L> {
        let w = L::BITS as usize;
        let (digits, bits) = (s / w, (s % w) as u32);
        if digits >= self.limbs.len() {
            return MpUint::zero();
        }
        let src = &self.limbs[digits..];
        if bits == 0 {
            return MpUint::from_limbs(src.to_vec());
        }
        let out = (0..src.len())
            .map(|i| {
                let lo = src[i].to_u64() >> bits;
                let hi = src.get(i + 1).map_or(0, |h| h.to_u64() << (L::BITS - bits));
                L::from_u64(lo | hi)
            })
            .collect();
        MpUint::from_limbs(out)
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl<L: Limb> $tr for MpUint<L> {
            type Output = MpUint<L>;
            fn $m(self, rhs: Self) -> MpUint<L> {
                (&self).$m(&rhs)
            }
        }
        impl<L: Limb> $tr<&MpUint<L>> for MpUint<L> {
            type Output = MpUint<L>;
            fn $m(self, rhs: &MpUint<L>) -> MpUint<L> {
                (&self).$m(rhs)
            }
        }
    )*};
}

forward_owned!(Add::add, Sub::sub, Mul::mul);

impl<L: Limb> Shl<usize> for MpUint<L> {
    type Output = MpUint<L>;
    fn shl(self, s: usize) -> MpUint<L> {
        &self << s
    }
}

impl<L: Limb> Shr<usize> for MpUint<L> {
    type Output = MpUint<L>;
    fn shr(self, s: usize) -> MpUint<L> {
        &self >> s
    }
}

impl<L: Limb> From<u64> for MpUint<L> {
    fn from(v: u64) -> Self {
        Self::from_u64(v)
    }
}

impl<L: Limb> FromStr for MpUint<L> {
    type Err = MpError;
    fn from_str(s: &str) -> Result<Self, MpError> {
        Self::from_hex(s)
    }
}

impl<L: Limb> fmt::LowerHex for MpUint<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl<L: Limb> fmt::Display for MpUint<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl<L: Limb> fmt::Debug for MpUint<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MpUint(0x{})", self.to_hex())
    }
}
