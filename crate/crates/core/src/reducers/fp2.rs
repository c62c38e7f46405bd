//! GF(p^2) = GF(p)[i] / (i^2 + 1) multiplication on top of FFM2.

use crate::mpcore::{Limb, MpUint};

use super::{ffm2_mul, same_prime, FieldElement, ReduceError};

/// `re + im * i`
pub type Fp2Element<'p, L> = (FieldElement<'p, L>, FieldElement<'p, L>);

/// `(a0 + a1 i)(b0 + b1 i) = (a0 b0 - a1 b1) + (a0 b1 + a1 b0) i`, each product by FFM2.
pub fn fp2_mul<'p, L: Limb>(
    a: &Fp2Element<'p, L>,
    b: &Fp2Element<'p, L>,
) -> Result<Fp2Element<'p, L>, ReduceError> {
    for (x, y) in [(&a.0, &a.1), (&a.0, &b.0), (&b.0, &b.1)] {
        same_prime(x, y)?;
    }
    let re = ffm2_mul(&a.0, &b.0)?.sub(&ffm2_mul(&a.1, &b.1)?)?;
    let im = ffm2_mul(&a.0, &b.1)?.add(&ffm2_mul(&a.1, &b.0)?)?;
    Ok((re, im))
}

/// The four GF(p) products of one GF(p^2) multiplication as two independent
/// streams: real-part products first, imaginary-part products second.
///
/// Feeding the streams to an interleaved multiplier pairs `a0 b0` with `a0 b1`
/// and `a1 b1` with `a1 b0` in the same batch.
#[allow(clippy::type_complexity)]
pub fn fp2_product_streams<L: Limb>(
    a: &Fp2Element<'_, L>,
    b: &Fp2Element<'_, L>,
) -> [Vec<(MpUint<L>, MpUint<L>)>; 2] {
    let pair =
        |x: &FieldElement<'_, L>, y: &FieldElement<'_, L>| (x.value().clone(), y.value().clone());
    [
        vec![pair(&a.0, &b.0), pair(&a.1, &b.1)],
        vec![pair(&a.0, &b.1), pair(&a.1, &b.0)],
    ]
}
