//! FFM2: reduction modulo `p = T -+ 1` with `T = f * 2^alpha * 3^beta`.
//!
//! `C = a*b` is divided by `2^alpha` with a shift and the quotient by `d = f * 3^beta`
//! with Barrett, giving `C = q2*T + (r2*2^alpha + r1)`. Since `T = p + 1` (or
//! `p - 1`), `C` is congruent to `q2 + r'` (or `r' - q2`) with `r' = r2*2^alpha + r1`,
//! and one conditional correction brings it into `[0, p)`.

use crate::mpcore::{Limb, MpUint};
use crate::params::{PrimeSign, SikePrime};

use super::{same_prime, FieldElement, ReduceError};

/// Every intermediate of one FFM2 multiplication.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ffm2Trace<L: Limb> {
    pub c: MpUint<L>,
    pub q1: MpUint<L>,
    pub r1: MpUint<L>,
    pub q2: MpUint<L>,
    pub r2: MpUint<L>,
    /// `r2 * 2^alpha + r1`
    pub r_prime: MpUint<L>,
    /// Barrett needed its correction step.
    pub barrett_corrected: bool,
    /// Value before the final correction: `q2 + r'` for `-1` primes, `|r' - q2|` for `+1`.
    pub pre_correction: MpUint<L>,
    /// For `+1` primes: `r' - q2` was negative.
    pub pre_correction_negative: bool,
    /// The final conditional subtraction/addition of `p` fired.
    pub final_corrected: bool,
    pub result: MpUint<L>,
}

/// `(a * b) mod p` via FFM2.
pub fn ffm2_mul<'p, L: Limb>(
    a: &FieldElement<'p, L>,
    b: &FieldElement<'p, L>,
) -> Result<FieldElement<'p, L>, ReduceError> {
    let prime = same_prime(a, b)?;
    let trace = ffm2_trace(a.value(), b.value(), prime)?;
    Ok(FieldElement::new_unchecked(prime, trace.result))
}

/// Runs FFM2 on raw operands `a, b < p`, keeping every intermediate.
pub fn ffm2_trace<L: Limb>(
    a: &MpUint<L>,
    b: &MpUint<L>,
    prime: &SikePrime<L>,
) -> Result<Ffm2Trace<L>, ReduceError> {
    for v in [a, b] {
        if v >= prime.p() {
            return Err(ReduceError::NotReduced(v.to_hex()));
        }
    }
    let c = a * b;
    let (q1, r1) = c.split_pow2(prime.alpha() as usize);
    let barrett = prime.barrett_d().reduce(&q1)?;
    let tail = recombine(&barrett.q, &barrett.r, &r1, prime)?;
    Ok(Ffm2Trace {
        c,
        q1,
        r1,
        q2: barrett.q,
        r2: barrett.r,
        r_prime: tail.r_prime,
        barrett_corrected: barrett.corrected,
        pre_correction: tail.pre_correction,
        pre_correction_negative: tail.negative,
        final_corrected: tail.corrected,
        result: tail.result,
    })
}

/// The tail of FFM2: shift `r2` back up, fold in `q2`, correct once.
///
/// Requires `r2 < d`, `r1 < 2^alpha` and `q2 < p`.
pub fn post_process<'p, L: Limb>(
    q2: &MpUint<L>,
    r2: &MpUint<L>,
    r1: &MpUint<L>,
    prime: &'p SikePrime<L>,
) -> Result<FieldElement<'p, L>, ReduceError> {
    let tail = recombine(q2, r2, r1, prime)?;
    Ok(FieldElement::new_unchecked(prime, tail.result))
}

struct Tail<L: Limb> {
    r_prime: MpUint<L>,
    pre_correction: MpUint<L>,
    negative: bool,
    corrected: bool,
    result: MpUint<L>,
}

fn recombine<L: Limb>(
    q2: &MpUint<L>,
    r2: &MpUint<L>,
    r1: &MpUint<L>,
    prime: &SikePrime<L>,
) -> Result<Tail<L>, ReduceError> {
    let alpha = prime.alpha() as usize;
    if r2 >= prime.d() {
        return Err(ReduceError::PostProcessRange("r2 >= d"));
    }
    if r1.bits() > alpha {
        return Err(ReduceError::PostProcessRange("r1 >= 2^alpha"));
    }
    if q2 >= prime.p() {
        return Err(ReduceError::PostProcessRange("q2 >= p"));
    }
    let p = prime.p();
    let r_prime = &(r2 << alpha) + r1;
    let tail = match prime.sign() {
        PrimeSign::MinusOne => {
            let sum = q2 + &r_prime;
            let corrected = &sum >= p;
            let result = if corrected { &sum - p } else { sum.clone() };
            Tail {
                r_prime,
                pre_correction: sum,
                negative: false,
                corrected,
                result,
            }
        }
        PrimeSign::PlusOne => {
            if &r_prime >= q2 {
                let diff = &r_prime - q2;
                Tail {
                    r_prime,
                    pre_correction: diff.clone(),
                    negative: false,
                    corrected: false,
                    result: diff,
                }
            } else {
                let mag = q2 - &r_prime;
                let result = p
                    .checked_sub(&mag)
                    .map_err(|_| ReduceError::PostProcessRange("r' - q2 <= -p"))?;
                Tail {
                    r_prime,
                    pre_correction: mag,
                    negative: true,
                    corrected: true,
                    result,
                }
            }
        }
    };
    if &tail.result >= p {
        return Err(ReduceError::PostProcessRange("q2 + r' >= 2p"));
    }
    Ok(tail)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::build_prime;
    use crate::reducers::naive_modmul;

    type U = MpUint<u32>;

    fn n(v: u64) -> U {
        U::from_u64(v)
    }

    #[test]
    fn p863_example() {
        let p = build_prime::<u32>(1, 5, 3, PrimeSign::MinusOne).unwrap();
        let t = ffm2_trace(&n(800), &n(700), &p).unwrap();
        assert_eq!((t.q1.clone(), t.r1.clone()), (n(17500), n(0)));
        assert_eq!((t.q2.clone(), t.r2.clone()), (n(648), n(4)));
        assert_eq!(t.r_prime, n(128));
        assert!(!t.final_corrected);
        assert_eq!(t.result, n(776));
        assert_eq!(
            post_process(&n(648), &n(4), &n(0), &p).unwrap().value(),
            &n(776)
        );
    }

    #[test]
    fn p11_example_takes_subtraction() {
        let p = build_prime::<u32>(1, 2, 1, PrimeSign::MinusOne).unwrap();
        let t = ffm2_trace(&n(10), &n(10), &p).unwrap();
        assert_eq!(
            (t.q1.clone(), t.r1.clone(), t.q2.clone(), t.r2.clone()),
            (n(25), n(0), n(8), n(1))
        );
        assert_eq!(t.r_prime, n(4));
        assert_eq!(t.pre_correction, n(12));
        assert!(t.final_corrected);
        assert_eq!(t.result, n(1));
        assert_eq!(
            post_process(&n(8), &n(1), &n(0), &p).unwrap().value(),
            &n(1)
        );
    }

    #[test]
    fn p13_example_takes_addition() {
        let p = build_prime::<u32>(1, 2, 1, PrimeSign::PlusOne).unwrap();
        let t = ffm2_trace(&n(7), &n(11), &p).unwrap();
        assert_eq!(
            (t.q1.clone(), t.r1.clone(), t.q2.clone(), t.r2.clone()),
            (n(19), n(1), n(6), n(1))
        );
        assert_eq!(t.r_prime, n(5));
        assert!(t.pre_correction_negative);
        assert_eq!(t.result, n(12));
    }

    #[test]
    fn zero_cases() {
        let p = build_prime::<u32>(1, 5, 3, PrimeSign::MinusOne).unwrap();
        let zero = FieldElement::zero(&p);
        let b = FieldElement::from_u64(&p, 500).unwrap();
        assert_eq!(ffm2_mul(&zero, &b).unwrap(), zero);
        assert_eq!(post_process(&n(0), &n(0), &n(0), &p).unwrap(), zero);
    }

    #[test]
    fn post_process_rejects_out_of_range() {
        let p = build_prime::<u32>(1, 5, 3, PrimeSign::MinusOne).unwrap();
        assert!(post_process(&n(0), &n(27), &n(0), &p).is_err());
        assert!(post_process(&n(0), &n(0), &n(32), &p).is_err());
        assert!(post_process(&n(863), &n(0), &n(0), &p).is_err());
        assert!(ffm2_trace(&n(863), &n(1), &p).is_err());
    }

    #[test]
    fn exhaustive_small_primes() {
        for sign in [PrimeSign::MinusOne, PrimeSign::PlusOne] {
            let p = build_prime::<u8>(1, 2, 1, sign).unwrap();
            let pv = p.p().to_u64().unwrap();
            for a in 0..pv {
                for b in 0..pv {
                    let (x, y) = (
                        FieldElement::from_u64(&p, a).unwrap(),
                        FieldElement::from_u64(&p, b).unwrap(),
                    );
                    let t = ffm2_trace(x.value(), y.value(), &p).unwrap();
                    assert_eq!(&(&t.q2 * p.t()) + &t.r_prime, t.c);
                    assert_eq!(ffm2_mul(&x, &y).unwrap(), naive_modmul(&x, &y).unwrap());
                }
            }
        }
    }
}
