//! SIKE-form primes `p = f * 2^alpha * 3^beta -+ 1` and their precomputed constants.

use core::fmt;
use core::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mpcore::{DefaultLimb, Limb, MpUint};
use crate::reducers::BarrettParams;

/// Largest prime the constructor accepts, in bits.
pub const MAX_PRIME_BITS: usize = 8192;

/// Miller-Rabin rounds run on every constructed prime.
pub const MILLER_RABIN_ROUNDS: usize = 40;

const MILLER_RABIN_SEED: u64 = 0x5eed_0f51;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamsError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parameters describe a {bits}-bit value, above the {max}-bit limit")]
    Overflow { bits: usize, max: usize },
    #[error("{0} is not prime")]
    Composite(String),
    #[error(
        "unknown prime {0:?}; expected sikep434, sikep503, sikep610, sikep751 or f,alpha,beta,+|-"
    )]
    UnknownName(String),
    #[error("{name}: expected {expected} bits, built {actual}")]
    BitLengthMismatch {
        name: String,
        expected: usize,
        actual: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrimeSign {
    /// `p = T - 1`
    MinusOne,
    /// `p = T + 1`
    PlusOne,
}

impl PrimeSign {
    pub fn symbol(self) -> char {
        match self {
            PrimeSign::MinusOne => '-',
            PrimeSign::PlusOne => '+',
        }
    }
}

/// `(name, alpha, beta)` for the named SIKE primes, all with `f = 1` and sign `-`.
pub const REGISTRY: [(&str, u32, u32); 4] = [
    ("sikep434", 216, 137),
    ("sikep503", 250, 159),
    ("sikep610", 305, 192),
    ("sikep751", 372, 239),
];

/// A prime, either by registry name or by explicit exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PrimeSpec {
    Named(String),
    Custom {
        f: u64,
        alpha: u32,
        beta: u32,
        sign: PrimeSign,
    },
}

impl PrimeSpec {
    pub fn build<L: Limb>(&self) -> Result<SikePrime<L>, ParamsError> {
        match self {
            PrimeSpec::Named(name) => registry(name),
            PrimeSpec::Custom {
                f,
                alpha,
                beta,
                sign,
            } => build_prime(*f, *alpha, *beta, *sign),
        }
    }
}

impl FromStr for PrimeSpec {
    type Err = ParamsError;

    /// Accepts a registry name or `f,alpha,beta,+|-` (e.g. `1,372,239,-`).
    fn from_str(s: &str) -> Result<Self, ParamsError> {
        let s = s.trim();
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() == 1 {
            let name = s.to_ascii_lowercase();
            return if REGISTRY.iter().any(|(n, _, _)| *n == name) {
                Ok(PrimeSpec::Named(name))
            } else {
                Err(ParamsError::UnknownName(s.to_string()))
            };
        }
        if parts.len() != 4 {
            return Err(ParamsError::UnknownName(s.to_string()));
        }
        let bad = |what: &str| ParamsError::InvalidParameter(format!("{what} in {s:?}"));
        let f = parts[0].parse().map_err(|_| bad("f"))?;
        let alpha = parts[1].parse().map_err(|_| bad("alpha"))?;
        let beta = parts[2].parse().map_err(|_| bad("beta"))?;
        let sign = match parts[3] {
            "-" => PrimeSign::MinusOne,
            "+" => PrimeSign::PlusOne,
            _ => return Err(bad("sign")),
        };
        Ok(PrimeSpec::Custom {
            f,
            alpha,
            beta,
            sign,
        })
    }
}

impl fmt::Display for PrimeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrimeSpec::Named(n) => f.write_str(n),
            PrimeSpec::Custom {
                f: cof,
                alpha,
                beta,
                sign,
            } => write!(f, "{cof},{alpha},{beta},{}", sign.symbol()),
        }
    }
}

/// A SIKE-form prime with every constant FFM2, Barrett and the simulator need.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SikePrime<L: Limb = DefaultLimb> {
    name: Option<String>,
    f: u64,
    alpha: u32,
    beta: u32,
    sign: PrimeSign,
    p: MpUint<L>,
    t: MpUint<L>,
    d: MpUint<L>,
    barrett_d: BarrettParams<L>,
    barrett_p: BarrettParams<L>,
    two_n: usize,
}

impl<L: Limb> SikePrime<L> {
    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// `f,alpha,beta,+|-`
    pub fn spec_string(&self) -> String {
        format!(
            "{},{},{},{}",
            self.f,
            self.alpha,
            self.beta,
            self.sign.symbol()
        )
    }

    /// Registry name if there is one, otherwise [`spec_string`](Self::spec_string).
    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| self.spec_string())
    }

    pub fn f(&self) -> u64 {
        self.f
    }

    pub fn alpha(&self) -> u32 {
        self.alpha
    }

    pub fn beta(&self) -> u32 {
        self.beta
    }

    pub fn sign(&self) -> PrimeSign {
        self.sign
    }

    pub fn p(&self) -> &MpUint<L> {
        &self.p
    }

    /// `f * 2^alpha * 3^beta`
    pub fn t(&self) -> &MpUint<L> {
        &self.t
    }

    /// `f * 3^beta`, the Barrett divisor inside FFM2.
    pub fn d(&self) -> &MpUint<L> {
        &self.d
    }

    pub fn barrett_k(&self) -> usize {
        self.barrett_d.shift()
    }

    /// `floor(2^barrett_k / d)`
    pub fn barrett_x(&self) -> &MpUint<L> {
        self.barrett_d.reciprocal()
    }

    /// Barrett constants for dividing by `d`.
    pub fn barrett_d(&self) -> &BarrettParams<L> {
        &self.barrett_d
    }

    /// Barrett constants for dividing a full product `C < p^2` by `p` directly.
    pub fn barrett_p(&self) -> &BarrettParams<L> {
        &self.barrett_p
    }

    /// Operand width 2N.
    pub fn two_n(&self) -> usize {
        self.two_n
    }

    /// N, the width of the reconfigurable multiplier.
    pub fn n_width(&self) -> usize {
        self.two_n / 2
    }

    /// N/4, the width of each small sub-multiplier.
    pub fn quarter_width(&self) -> usize {
        self.two_n / 8
    }

    pub fn bits(&self) -> usize {
        self.p.bits()
    }

    /// Upper bound on the bit length of `q1 = floor(a*b / 2^alpha)` for `a, b < p`.
    pub fn q1_bits(&self) -> usize {
        (2 * self.p.bits()).saturating_sub(self.alpha as usize)
    }

    /// Same prime over another digit width.
    pub fn to_width<M: Limb>(&self) -> SikePrime<M> {
        let barrett_d = BarrettParams::new(self.d.to_width(), self.barrett_k()).expect("valid");
        let barrett_p =
            BarrettParams::new(self.p.to_width(), self.barrett_p.shift()).expect("valid");
        SikePrime {
            name: self.name.clone(),
            f: self.f,
            alpha: self.alpha,
            beta: self.beta,
            sign: self.sign,
            p: self.p.to_width(),
            t: self.t.to_width(),
            d: self.d.to_width(),
            barrett_d,
            barrett_p,
            two_n: self.two_n,
        }
    }
}

impl<L: Limb> fmt::Display for SikePrime<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({} bits)", self.label(), self.bits())
    }
}

/// Builds `p = f * 2^alpha * 3^beta -+ 1`, rejecting composites.
pub fn build_prime<L: Limb>(
    f: u64,
    alpha: u32,
    beta: u32,
    sign: PrimeSign,
) -> Result<SikePrime<L>, ParamsError> {
    if f == 0 || alpha == 0 || beta == 0 {
        return Err(ParamsError::InvalidParameter(format!(
            "f, alpha and beta must all be >= 1 (got {f}, {alpha}, {beta})"
        )));
    }
    let estimate = 64 - f.leading_zeros() as usize
        + alpha as usize
        + (beta as f64 * 3f64.log2()).ceil() as usize;
    if estimate > MAX_PRIME_BITS + 2 {
        return Err(ParamsError::Overflow {
            bits: estimate,
            max: MAX_PRIME_BITS,
        });
    }

    let d = &MpUint::from_u64(f) * &MpUint::pow_u(3, beta);
    let t = &d << alpha as usize;
    let p = match sign {
        PrimeSign::MinusOne => &t - &MpUint::one(),
        PrimeSign::PlusOne => &t + &MpUint::one(),
    };
    if p.bits() > MAX_PRIME_BITS {
        return Err(ParamsError::Overflow {
            bits: p.bits(),
            max: MAX_PRIME_BITS,
        });
    }
    if !is_probable_prime(&p, MILLER_RABIN_ROUNDS) {
        return Err(ParamsError::Composite(format!(
            "{f}*2^{alpha}*3^{beta}{}1",
            sign.symbol()
        )));
    }

    let bits = p.bits();
    let q1_bits = (2 * bits).saturating_sub(alpha as usize);
    let barrett_k = q1_bits + 1;
    let barrett_d = BarrettParams::new(d.clone(), barrett_k)
        .map_err(|e| ParamsError::InvalidParameter(e.to_string()))?;
    let barrett_p = BarrettParams::for_dividend_bits(p.clone(), 2 * bits + 1)
        .map_err(|e| ParamsError::InvalidParameter(e.to_string()))?;
    let two_n = operand_width(bits, q1_bits, &d, barrett_d.reciprocal());

    Ok(SikePrime {
        name: None,
        f,
        alpha,
        beta,
        sign,
        p,
        t,
        d,
        barrett_d,
        barrett_p,
        two_n,
    })
}

/// Smallest multiple of 8 that holds `p` and lets every FFM2 operand fit the
/// N x N decomposition: `d` in N bits, `q1` in 3N, `x` and `q2` in 2N.
fn operand_width<L: Limb>(p_bits: usize, q1_bits: usize, d: &MpUint<L>, x: &MpUint<L>) -> usize {
    let q2_bits = (q1_bits + 1).saturating_sub(d.bits());
    let mut two_n = p_bits.div_ceil(8) * 8;
    loop {
        let n = two_n / 2;
        if d.bits() <= n && q1_bits <= 3 * n && x.bits() <= two_n && q2_bits <= two_n {
            return two_n;
        }
        two_n += 8;
    }
}

/// Looks up one of the named SIKE primes and re-validates it.
pub fn registry<L: Limb>(name: &str) -> Result<SikePrime<L>, ParamsError> {
    let lname = name.to_ascii_lowercase();
    let &(reg_name, alpha, beta) = REGISTRY
        .iter()
        .find(|(n, _, _)| *n == lname)
        .ok_or_else(|| ParamsError::UnknownName(name.to_string()))?;
    let mut prime = build_prime::<L>(1, alpha, beta, PrimeSign::MinusOne)?;
    let expected: usize = reg_name["sikep".len()..]
        .parse()
        .expect("registry names end in digits");
    if prime.bits() != expected {
        return Err(ParamsError::BitLengthMismatch {
            name: reg_name.to_string(),
            expected,
            actual: prime.bits(),
        });
    }
    prime.name = Some(reg_name.to_string());
    Ok(prime)
}

/// All four named primes.
pub fn registered_primes<L: Limb>() -> Result<Vec<SikePrime<L>>, ParamsError> {
    REGISTRY.iter().map(|(n, _, _)| registry(n)).collect()
}

const SMALL_PRIMES: [u64; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

/// Trial division by small primes, then Miller-Rabin with `rounds` seeded random bases.
pub fn is_probable_prime<L: Limb>(n: &MpUint<L>, rounds: usize) -> bool {
    if let Some(v) = n.to_u64() {
        if v < 2 {
            return false;
        }
        if SMALL_PRIMES.contains(&v) {
            return true;
        }
    }
    for sp in SMALL_PRIMES {
        if n.rem(&MpUint::from_u64(sp)).expect("non-zero").is_zero() {
            return false;
        }
    }

    let one = MpUint::one();
    let n_minus_1 = n - &one;
    let mut s = 0;
    while !n_minus_1.bit(s) {
        s += 1;
    }
    let odd = &n_minus_1 >> s;
    let red = BarrettParams::for_dividend_bits(n.clone(), 2 * n.bits()).expect("n > 1");
    let mulmod = |a: &MpUint<L>, b: &MpUint<L>| red.reduce(&(a * b)).expect("a, b < n").r;

    let mut rng = ChaCha8Rng::seed_from_u64(MILLER_RABIN_SEED);
    // bases drawn from [2, n-2]
    let span = n - &MpUint::from_u64(3);
    'witness: for _ in 0..rounds {
        let a = &MpUint::random_below(&mut rng, &span) + &MpUint::from_u64(2);
        let mut y = modpow(&a, &odd, &mulmod);
        if y == one || y == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            y = mulmod(&y, &y);
            if y == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn modpow<L: Limb>(
    base: &MpUint<L>,
    exp: &MpUint<L>,
    mulmod: &impl Fn(&MpUint<L>, &MpUint<L>) -> MpUint<L>,
) -> MpUint<L> {
    let mut acc = MpUint::one();
    for i in (0..exp.bits()).rev() {
        acc = mulmod(&acc, &acc);
        if exp.bit(i) {
            acc = mulmod(&acc, base);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    type U = MpUint<u32>;

    #[test]
    fn toy_primes() {
        let p = build_prime::<u32>(1, 2, 1, PrimeSign::MinusOne).unwrap();
        assert_eq!(
            (p.p(), p.t(), p.d()),
            (&U::from_u64(11), &U::from_u64(12), &U::from_u64(3))
        );
        let p = build_prime::<u32>(1, 5, 3, PrimeSign::MinusOne).unwrap();
        assert_eq!(
            (p.p(), p.t(), p.d()),
            (&U::from_u64(863), &U::from_u64(864), &U::from_u64(27))
        );
        assert_eq!(p.barrett_k(), 16);
        assert_eq!(p.barrett_x(), &U::from_u64(2427));
        let p = build_prime::<u32>(1, 2, 1, PrimeSign::PlusOne).unwrap();
        assert_eq!(
            (p.p(), p.t(), p.d()),
            (&U::from_u64(13), &U::from_u64(12), &U::from_u64(3))
        );
    }

    #[test]
    fn rejects_bad_parameters() {
        // 2^2 * 3^2 - 1 = 35
        assert!(matches!(
            build_prime::<u32>(1, 2, 2, PrimeSign::MinusOne),
            Err(ParamsError::Composite(_))
        ));
        assert!(matches!(
            build_prime::<u32>(0, 2, 2, PrimeSign::MinusOne),
            Err(ParamsError::InvalidParameter(_))
        ));
        assert!(matches!(
            build_prime::<u32>(1, 0, 2, PrimeSign::MinusOne),
            Err(ParamsError::InvalidParameter(_))
        ));
        assert!(matches!(
            build_prime::<u32>(1, 100_000, 2, PrimeSign::MinusOne),
            Err(ParamsError::Overflow { .. })
        ));
    }

    #[test]
    fn primality_small() {
        let primes: Vec<u64> = (0..200u64)
            .filter(|&v| is_probable_prime(&U::from_u64(v), 10))
            .collect();
        let brute: Vec<u64> = (0..200u64)
            .filter(|&v| v >= 2 && (2..v).all(|q| v % q != 0))
            .collect();
        assert_eq!(primes, brute);
        // Carmichael number with no factor below 100
        assert!(!is_probable_prime(&U::from_u64(211 * 421 * 631), 20));
        assert!(is_probable_prime(&U::from_u64(1_000_000_007), 20));
    }

    #[test]
    fn sikep751_widths() {
        let p = registry::<u32>("sikep751").unwrap();
        assert_eq!(p.bits(), 751);
        assert_eq!(p.quarter_width(), 95);
        assert_eq!(p.two_n(), 760);
        assert_eq!(p.n_width(), 380);
        assert_eq!(p.name(), Some("sikep751"));
    }

    #[test]
    fn registry_invariants() {
        let expected_two_n = [440, 512, 616, 760];
        for (prime, two_n) in registered_primes::<u64>()
            .unwrap()
            .iter()
            .zip(expected_two_n)
        {
            assert_eq!(prime.two_n(), two_n);
            assert_eq!(prime.two_n() % 8, 0);
            assert!(prime.two_n() >= prime.bits());
            // p = -1 mod 2^k for k <= alpha
            let low = prime.p().low_bits(prime.alpha() as usize);
            assert_eq!(low, MpUint::pow2(prime.alpha() as usize) - MpUint::one());
            // x*d <= 2^k < (x+1)*d
            let two_k = MpUint::pow2(prime.barrett_k());
            let xd = prime.barrett_x() * prime.d();
            assert!(xd <= two_k && two_k < &xd + prime.d());
            assert!(prime.barrett_k() >= 2 * prime.bits() - prime.alpha() as usize);
            assert!(prime.d().bits() < prime.barrett_k());
            assert_eq!(&(prime.d() << prime.alpha() as usize), prime.t());
            assert!(prime.d().is_odd());
        }
        assert!(matches!(
            registry::<u32>("sikep999"),
            Err(ParamsError::UnknownName(_))
        ));
    }

    #[test]
    fn spec_parsing() {
        assert_eq!(
            "1,372,239,-".parse::<PrimeSpec>().unwrap(),
            PrimeSpec::Custom {
                f: 1,
                alpha: 372,
                beta: 239,
                sign: PrimeSign::MinusOne
            }
        );
        assert_eq!(
            "SIKEp434".parse::<PrimeSpec>().unwrap(),
            PrimeSpec::Named("sikep434".into())
        );
        assert!("1,2,1,*".parse::<PrimeSpec>().is_err());
        assert!("1,2,1".parse::<PrimeSpec>().is_err());
        assert!("x,2,1,-".parse::<PrimeSpec>().is_err());
        assert_eq!(
            "1,5,3,+".parse::<PrimeSpec>().unwrap().to_string(),
            "1,5,3,+"
        );
        let p: SikePrime = "1,5,3,-".parse::<PrimeSpec>().unwrap().build().unwrap();
        assert_eq!(p.spec_string(), "1,5,3,-");
    }
}
