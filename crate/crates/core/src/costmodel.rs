//! Multiplication-instruction counts for an `n`-bit modular multiplication split
//! into `m` sub-blocks of `k = ceil(n/m)` bits, and a search for the `m` that
//! minimizes total time under a per-instruction delay model.

use core::fmt;
use core::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Exact instruction count. Some formulas are non-integral for odd `m`.
pub type Count = Ratio<u64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CostError {
    #[error("m and n_bits must be >= 1")]
    ZeroParameter,
    #[error("delay table is empty")]
    EmptyDelayModel,
    #[error("delay model is invalid: {0}")]
    InvalidDelayModel(String),
    #[error("delay table has no entry for a {0}-bit multiplier")]
    WidthNotCovered(u32),
    #[error("unknown algorithm {0:?}")]
    UnknownAlgorithm(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Montgomery,
    MontgomerySike,
    Barrett,
    Ffm2,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::Montgomery,
        Algorithm::MontgomerySike,
        Algorithm::Barrett,
        Algorithm::Ffm2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Montgomery => "montgomery",
            Algorithm::MontgomerySike => "montgomery_sike",
            Algorithm::Barrett => "barrett",
            Algorithm::Ffm2 => "ffm2",
        }
    }

    /// Instruction count at `m` sub-blocks.
    pub fn count(self, m: u64) -> Count {
        let m = Ratio::from_integer(m);
        let one = Ratio::from_integer(1);
        match self {
            Algorithm::Montgomery => m * m + m,
            Algorithm::MontgomerySike => m * m / 2,
            Algorithm::Barrett => m * m + m * 4 + one,
            Algorithm::Ffm2 => Ratio::new(5, 8) * m * m + Ratio::new(13, 4) * m + one,
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = CostError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| {
                a.name().eq_ignore_ascii_case(s)
                    || (s == "montgomery-sike" && *a == Algorithm::MontgomerySike)
            })
            .ok_or_else(|| CostError::UnknownAlgorithm(s.to_owned()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostTable {
    pub m: u64,
    pub n_bits: u64,
    pub k_bits: u64,
    pub montgomery: Count,
    pub montgomery_sike: Count,
    pub barrett: Count,
    pub ffm2: Count,
}

impl CostTable {
    pub fn get(&self, algo: Algorithm) -> Count {
        match algo {
            Algorithm::Montgomery => self.montgomery,
            Algorithm::MontgomerySike => self.montgomery_sike,
            Algorithm::Barrett => self.barrett,
            Algorithm::Ffm2 => self.ffm2,
        }
    }

    /// `m,k_bits,montgomery,montgomery_sike,barrett,ffm2`
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.m,
            self.k_bits,
            exact_decimal(self.montgomery),
            exact_decimal(self.montgomery_sike),
            exact_decimal(self.barrett),
            exact_decimal(self.ffm2)
        )
    }
}

pub const CSV_HEADER: &str = "m,k_bits,montgomery,montgomery_sike,barrett,ffm2";

pub fn cost_table(m: u64, n_bits: u64) -> Result<CostTable, CostError> {
    if m == 0 || n_bits == 0 {
        return Err(CostError::ZeroParameter);
    }
    Ok(CostTable {
        m,
        n_bits,
        k_bits: n_bits.div_ceil(m),
        montgomery: Algorithm::Montgomery.count(m),
        montgomery_sike: Algorithm::MontgomerySike.count(m),
        barrett: Algorithm::Barrett.count(m),
        ffm2: Algorithm::Ffm2.count(m),
    })
}

/// Renders a ratio whose reduced denominator has only factors 2 and 5 as a
/// terminating decimal, anything else as `num/den`.
pub fn exact_decimal(r: Count) -> String {
    let (num, den) = (*r.numer(), *r.denom());
    let mut d = den;
    let (mut twos, mut fives) = (0u32, 0u32);
    while d % 2 == 0 {
        d /= 2;
        twos += 1;
    }
    while d % 5 == 0 {
        d /= 5;
        fives += 1;
    }
    if d != 1 {
        return format!("{num}/{den}");
    }
    let digits = twos.max(fives);
    if digits == 0 {
        return num.to_string();
    }
    let scale = 10u128.pow(digits);
    let scaled = num as u128 * scale / den as u128;
    let frac = format!("{:0width$}", scaled % scale, width = digits as usize);
    format!("{}.{}", scaled / scale, frac.trim_end_matches('0'))
}

/// Per-instruction delay as a function of multiplier width in bits.
#[derive(Debug, Clone, Default, PartialEq)]
pub enum DelayModel {
    Constant(f64),
    /// `delay(w) = w`
    Linear,
    /// `delay(w) = (w / 64)^2`. Illustrative only.
    #[default]
    Quadratic,
    /// Step function: the delay of the narrowest entry at least `w` bits wide.
    Table(Vec<(u32, f64)>),
}

impl DelayModel {
    pub fn validate(&self) -> Result<(), CostError> {
        match self {
            DelayModel::Constant(c) if !c.is_finite() || *c < 0.0 => {
                Err(CostError::InvalidDelayModel(format!("constant delay {c}")))
            }
            DelayModel::Table(t) if t.is_empty() => Err(CostError::EmptyDelayModel),
            DelayModel::Table(t) => {
                for &(w, d) in t {
                    if !d.is_finite() || d < 0.0 {
                        return Err(CostError::InvalidDelayModel(format!(
                            "delay {d} at width {w}"
                        )));
                    }
                }
                for pair in t.windows(2) {
                    let ((w0, d0), (w1, d1)) = (pair[0], pair[1]);
                    if w1 <= w0 {
                        return Err(CostError::InvalidDelayModel(
                            "widths must be strictly increasing".into(),
                        ));
                    }
                    if d1 < d0 {
                        return Err(CostError::InvalidDelayModel(format!(
                            "delay decreases from {d0} at {w0} bits to {d1} at {w1} bits"
                        )));
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn delay(&self, width: u32) -> Result<f64, CostError> {
        let w = f64::from(width);
        match self {
            DelayModel::Constant(c) => Ok(*c),
            DelayModel::Linear => Ok(w),
            DelayModel::Quadratic => Ok((w / 64.0) * (w / 64.0)),
            DelayModel::Table(t) => t
                .iter()
                .find(|&&(tw, _)| tw >= width)
                .map(|&(_, d)| d)
                .ok_or(CostError::WidthNotCovered(width)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Optimum {
    pub m: u64,
    pub k_bits: u64,
    pub total_time: f64,
}

/// Minimizes `count(m) * delay(ceil(n/m))` over `m` in `1..=n_bits`; the first
/// (smallest) minimizing `m` wins.
pub fn optimal_m(n_bits: u64, delay: &DelayModel, algo: Algorithm) -> Result<Optimum, CostError> {
    if n_bits == 0 {
        return Err(CostError::ZeroParameter);
    }
    delay.validate()?;
    let mut best: Option<Optimum> = None;
    for m in 1..=n_bits {
        let k = n_bits.div_ceil(m);
        let d = match delay.delay(u32::try_from(k).unwrap_or(u32::MAX)) {
            Ok(d) => d,
            // a table may not cover the widest multipliers; those m are not candidates
            Err(CostError::WidthNotCovered(_)) => continue,
            Err(e) => return Err(e),
        };
        let c = algo.count(m);
        let t = *c.numer() as f64 / *c.denom() as f64 * d;
        if best.is_none_or(|b| t < b.total_time) {
            best = Some(Optimum {
                m,
                k_bits: k,
                total_time: t,
            });
        }
    }
    best.ok_or(CostError::InvalidDelayModel(
        "no width in 1..=n_bits is covered".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: u64, d: u64) -> Count {
        Ratio::new(n, d)
    }

    #[test]
    fn table_examples() {
        let t = cost_table(8, 760).unwrap();
        assert_eq!(
            (t.montgomery, t.montgomery_sike, t.barrett, t.ffm2),
            (r(72, 1), r(32, 1), r(97, 1), r(67, 1))
        );
        assert_eq!(t.k_bits, 95);
        let t = cost_table(4, 760).unwrap();
        assert_eq!(
            (t.montgomery, t.montgomery_sike, t.barrett, t.ffm2),
            (r(20, 1), r(8, 1), r(33, 1), r(24, 1))
        );
        let t = cost_table(1, 760).unwrap();
        assert_eq!(
            (t.montgomery, t.montgomery_sike, t.barrett, t.ffm2),
            (r(2, 1), r(1, 2), r(6, 1), r(39, 8))
        );
        assert_eq!(t.csv_row(), "1,760,2,0.5,6,4.875");
        assert_eq!(cost_table(7, 760).unwrap().k_bits, 109);
        assert_eq!(cost_table(0, 760), Err(CostError::ZeroParameter));
    }

    #[test]
    fn decimals() {
        assert_eq!(exact_decimal(r(0, 1)), "0");
        assert_eq!(exact_decimal(r(3, 8)), "0.375");
        assert_eq!(exact_decimal(r(13, 4)), "3.25");
        assert_eq!(exact_decimal(r(1, 3)), "1/3");
        assert_eq!(exact_decimal(r(1, 20)), "0.05");
    }

    #[test]
    fn ordering_holds() {
        for m in 1..=256 {
            let t = cost_table(m, 760).unwrap();
            assert!(t.ffm2 < t.barrett);
            assert!(t.montgomery_sike < t.barrett);
            if m >= 2 {
                assert!(t.montgomery_sike < t.ffm2);
                assert!(t.barrett < t.montgomery + r(4 * m + 1, 1));
                for a in Algorithm::ALL {
                    assert!(t.montgomery_sike <= t.get(a));
                }
            }
        }
    }

    #[test]
    fn constant_delay_prefers_one_block() {
        for a in Algorithm::ALL {
            let o = optimal_m(760, &DelayModel::Constant(3.0), a).unwrap();
            assert_eq!(o.m, 1);
        }
    }

    #[test]
    fn frozen_optima() {
        for a in Algorithm::ALL {
            assert_eq!(optimal_m(760, &DelayModel::Linear, a).unwrap().m, 1);
        }
        let ffm2 = optimal_m(760, &DelayModel::Linear, Algorithm::Ffm2).unwrap();
        assert_eq!(ffm2.total_time, 3705.0);
        let q = |a| optimal_m(760, &DelayModel::Quadratic, a).unwrap().m;
        assert_eq!(q(Algorithm::Montgomery), 760);
        assert_eq!(q(Algorithm::MontgomerySike), 1);
        assert_eq!(q(Algorithm::Barrett), 760);
        assert_eq!(q(Algorithm::Ffm2), 760);
    }

    #[test]
    fn table_delays() {
        let t = DelayModel::Table(vec![(32, 1.0), (64, 3.0), (128, 10.0)]);
        assert_eq!(t.delay(17).unwrap(), 1.0);
        assert_eq!(t.delay(64).unwrap(), 3.0);
        assert_eq!(t.delay(129), Err(CostError::WidthNotCovered(129)));
        // only m with ceil(760/m) <= 128 are candidates
        let o = optimal_m(760, &t, Algorithm::Ffm2).unwrap();
        assert!(o.k_bits <= 128);
        assert_eq!(o.m, brute(760, &t, Algorithm::Ffm2).0);
    }

    #[test]
    fn invalid_models() {
        let bad = [
            DelayModel::Table(vec![]),
            DelayModel::Table(vec![(8, 2.0), (16, 1.0)]),
            DelayModel::Table(vec![(16, 1.0), (8, 2.0)]),
            DelayModel::Table(vec![(8, f64::NAN)]),
            DelayModel::Constant(-1.0),
            DelayModel::Constant(f64::INFINITY),
        ];
        for d in bad {
            assert!(optimal_m(760, &d, Algorithm::Ffm2).is_err(), "{d:?}");
        }
        assert_eq!(
            optimal_m(760, &DelayModel::Table(vec![]), Algorithm::Ffm2),
            Err(CostError::EmptyDelayModel)
        );
    }

    #[test]
    fn algorithm_names() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!("karatsuba".parse::<Algorithm>().is_err());
    }

    // exact rational scan, independent of the float path
    fn brute(n: u64, d: &DelayModel, a: Algorithm) -> (u64, f64) {
        (1..=n)
            .filter_map(|m| d.delay(n.div_ceil(m) as u32).ok().map(|dl| (m, dl)))
            .map(|(m, dl)| {
                let c = a.count(m);
                (m, *c.numer() as f64 * dl / *c.denom() as f64)
            })
            .fold((0, f64::INFINITY), |b, x| if x.1 < b.1 { x } else { b })
    }

    proptest! {
        #[test]
        fn scan_matches_brute_force(n in 1u64..400, ai in 0usize..4, which in 0usize..3) {
            let a = Algorithm::ALL[ai];
            let d = [DelayModel::Linear, DelayModel::Quadratic, DelayModel::Constant(1.5)][which].clone();
            let o = optimal_m(n, &d, a).unwrap();
            let (m, t) = brute(n, &d, a);
            prop_assert_eq!(o.m, m);
            prop_assert_eq!(o.total_time, t);
        }
    }
}
