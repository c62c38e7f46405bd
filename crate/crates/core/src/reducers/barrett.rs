//! Barrett reduction with a precomputed reciprocal `x = floor(2^k / d)`.

use crate::mpcore::{Limb, MpUint};

use super::ReduceError;

/// Quotient/remainder pair produced by a Barrett reduction, plus whether the
/// single correction step fired.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BarrettOutcome<L: Limb> {
    pub q: MpUint<L>,
    pub r: MpUint<L>,
    pub corrected: bool,
}

/// Divisor `d` with its Barrett constants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BarrettParams<L: Limb> {
    d: MpUint<L>,
    k: usize,
    x: MpUint<L>,
}

impl<L: Limb> BarrettParams<L> {
    /// Precomputes `x = floor(2^k / d)`. Requires `2^(k-1) > d`.
    pub fn new(d: MpUint<L>, k: usize) -> Result<Self, ReduceError> {
        if d.is_zero() || k == 0 || d.bits() >= k {
            return Err(ReduceError::BarrettShiftTooSmall {
                k,
                d_bits: d.bits(),
            });
        }
        let (x, _) = MpUint::pow2(k).divmod(&d).expect("d is non-zero");
        Ok(Self { d, k, x })
    }

    /// Smallest usable `k` for dividends below `2^dividend_bits`.
    pub fn for_dividend_bits(d: MpUint<L>, dividend_bits: usize) -> Result<Self, ReduceError> {
        let k = dividend_bits.max(d.bits() + 1);
        Self::new(d, k)
    }

    pub fn divisor(&self) -> &MpUint<L> {
        &self.d
    }

    pub fn shift(&self) -> usize {
        self.k
    }

    pub fn reciprocal(&self) -> &MpUint<L> {
        &self.x
    }

    /// Reduces `a < 2^k`.
    pub fn reduce(&self, a: &MpUint<L>) -> Result<BarrettOutcome<L>, ReduceError> {
        if a.bits() > self.k {
            return Err(ReduceError::DividendTooLarge {
                bits: a.bits(),
                k: self.k,
            });
        }
        let q = barrett_estimate(a, &self.x, self.k);
        barrett_correct(a, q, &self.d)
    }
}

/// Quotient estimate `(a * x) >> k`, never above the true quotient.
pub fn barrett_estimate<L: Limb>(a: &MpUint<L>, x: &MpUint<L>, k: usize) -> MpUint<L> {
    &(a * x) >> k
}

/// Remainder from a quotient estimate, with at most one correction step.
///
/// Fails if the estimate overshoots or if one correction is not enough; both
/// mean the inputs broke the Barrett preconditions.
pub fn barrett_correct<L: Limb>(
    a: &MpUint<L>,
    q: MpUint<L>,
    d: &MpUint<L>,
) -> Result<BarrettOutcome<L>, ReduceError> {
    let qd = &q * d;
    barrett_finish(a, q, &qd, d)
}

/// [`barrett_correct`] with `q * d` already computed elsewhere.
pub fn barrett_finish<L: Limb>(
    a: &MpUint<L>,
    mut q: MpUint<L>,
    qd: &MpUint<L>,
    d: &MpUint<L>,
) -> Result<BarrettOutcome<L>, ReduceError> {
    let mut r = a
        .checked_sub(qd)
        .map_err(|_| ReduceError::QuotientOvershoot)?;
    let mut corrected = false;
    if r >= *d {
        r = &r - d;
        q = &q + &MpUint::one();
        corrected = true;
    }
    if r >= *d {
        return Err(ReduceError::CorrectionExhausted);
    }
    Ok(BarrettOutcome { q, r, corrected })
}

/// Barrett division of `a` by `d` given `k` and `x = floor(2^k / d)`.
///
/// All three preconditions (`a < 2^k`, `2^(k-1) > d`, and the exactness of `x`)
/// are checked; a violation is reported instead of returning a wrong pair.
pub fn barrett_reduce<L: Limb>(
    a: &MpUint<L>,
    d: &MpUint<L>,
    k: usize,
    x: &MpUint<L>,
) -> Result<(MpUint<L>, MpUint<L>), ReduceError> {
    barrett_reduce_traced(a, d, k, x).map(|o| (o.q, o.r))
}

/// [`barrett_reduce`] that also reports whether the correction step fired.
pub fn barrett_reduce_traced<L: Limb>(
    a: &MpUint<L>,
    d: &MpUint<L>,
    k: usize,
    x: &MpUint<L>,
) -> Result<BarrettOutcome<L>, ReduceError> {
    if d.is_zero() || k == 0 || d.bits() >= k {
        return Err(ReduceError::BarrettShiftTooSmall {
            k,
            d_bits: d.bits(),
        });
    }
    if a.bits() > k {
        return Err(ReduceError::DividendTooLarge { bits: a.bits(), k });
    }
    // x*d <= 2^k < (x+1)*d
    let two_k = MpUint::pow2(k);
    let xd = x * d;
    if xd > two_k || &xd + d <= two_k {
        return Err(ReduceError::BadReciprocal);
    }
    let q = barrett_estimate(a, x, k);
    barrett_correct(a, q, d)
}
