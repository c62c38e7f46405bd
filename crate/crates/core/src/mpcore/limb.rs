use core::fmt::Debug;
use core::hash::Hash;

/// A fixed-width unsigned digit.
///
/// Every [`MpUint`](super::MpUint) operation is written against this trait, so the
/// represented value never depends on which width is picked. Digit products are
/// formed in `u128`, which has room for `a * b + c + carry` even at 64 bits.
pub trait Limb: Copy + Default + Eq + Ord + Hash + Debug + Send + Sync + 'static {
    const BITS: u32;
    const ZERO: Self;
    const MAX: Self;

    /// Keeps the low `Self::BITS` bits of `v`.
    fn truncate(v: u128) -> Self;
    fn widen(self) -> u128;

    #[inline]
    fn from_u64(v: u64) -> Self {
        Self::truncate(v as u128)
    }

    #[inline]
    fn to_u64(self) -> u64 {
        self.widen() as u64
    }

    /// `a + b + carry`, returning the low digit and the carry out.
    #[inline]
    fn adc(a: Self, b: Self, carry: bool) -> (Self, bool) {
        let s = a.widen() + b.widen() + carry as u128;
        (Self::truncate(s), (s >> Self::BITS) != 0)
    }

    /// `a - b - borrow`, returning the low digit and the borrow out.
    #[inline]
    fn sbb(a: Self, b: Self, borrow: bool) -> (Self, bool) {
        let sub = b.widen() + borrow as u128;
        if a.widen() >= sub {
            (Self::truncate(a.widen() - sub), false)
        } else {
            (
                Self::truncate((1u128 << Self::BITS) + a.widen() - sub),
                true,
            )
        }
    }

    /// `a * b + c + carry`, returning (low, high).
    #[inline]
    fn mac(a: Self, b: Self, c: Self, carry: Self) -> (Self, Self) {
        let t = a.widen() * b.widen() + c.widen() + carry.widen();
        (Self::truncate(t), Self::truncate(t >> Self::BITS))
    }
}

macro_rules! impl_limb {
    ($($t:ty),*) => {$(
        impl Limb for $t {
            const BITS: u32 = <$t>::BITS;
            const ZERO: Self = 0;
            const MAX: Self = <$t>::MAX;

            #[inline]
            fn truncate(v: u128) -> Self {
                v as $t
            }

            #[inline]
            fn widen(self) -> u128 {
                self as u128
            }
        }
    )*};
}

impl_limb!(u8, u16, u32, u64);
