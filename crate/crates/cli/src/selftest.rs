//! Every algorithm against the long-division oracle.

use std::fmt::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sike_ffm::mpcore::MpUint;
use sike_ffm::params::{build_prime, PrimeSign, SikePrime};
use sike_ffm::reducers::{
    barrett_mul, ffm2_mul, montgomery_modmul, naive_modmul, FieldElement, MontgomeryContext,
    ReduceError,
};

use crate::vectors::Vector;

const ALGOS: [&str; 3] = ["ffm2", "barrett", "montgomery"];

#[derive(Default)]
struct Tally {
    pass: [usize; 3],
    total: usize,
    first_failure: Option<String>,
}

impl Tally {
    fn check(
        &mut self,
        prime: &SikePrime,
        ctx: &MontgomeryContext,
        a: &MpUint,
        b: &MpUint,
        expected: Option<&MpUint>,
    ) -> Result<(), ReduceError> {
        let x = FieldElement::new(prime, a.clone())?;
        let y = FieldElement::new(prime, b.clone())?;
        let want = match expected {
            Some(e) => e.clone(),
            None => naive_modmul(&x, &y)?.into_value(),
        };
        self.total += 1;
        let got = [
            ffm2_mul(&x, &y),
            barrett_mul(&x, &y),
            montgomery_modmul(&x, &y, ctx),
        ];
        for (i, r) in got.into_iter().enumerate() {
            match r {
                Ok(v) if *v.value() == want => self.pass[i] += 1,
                other => {
                    self.first_failure.get_or_insert_with(|| {
                        let got = other.map_or_else(|e| e.to_string(), |v| v.value().to_hex());
                        format!(
                            "{}: {} * {} gave {got}, expected {}",
                            ALGOS[i],
                            a.to_hex(),
                            b.to_hex(),
                            want.to_hex()
                        )
                    });
                }
            }
        }
        Ok(())
    }

    fn ok(&self) -> bool {
        self.pass.iter().all(|&p| p == self.total)
    }

    fn write(&self, out: &mut String) {
        for (name, pass) in ALGOS.iter().zip(self.pass) {
            let _ = writeln!(out, "  {name:<11}{pass}/{}", self.total);
        }
        if let Some(f) = &self.first_failure {
            let _ = writeln!(out, "  first mismatch: {f}");
        }
    }
}

pub struct Outcome {
    pub text: String,
    pub passed: bool,
}

pub fn run(
    prime: &SikePrime,
    trials: usize,
    seed: u64,
    radix_bits: u32,
    vectors: Option<(&str, &[Vector])>,
) -> Result<Outcome, ReduceError> {
    let mut text = String::new();
    let mut passed = true;
    let ctx = MontgomeryContext::for_prime(prime, radix_bits)?;

    let _ = writeln!(
        text,
        "prime {} ({} bits), montgomery radix 2^{radix_bits}",
        prime.label(),
        prime.bits()
    );
    let _ = writeln!(text, "random pairs: {trials} (seed {seed})");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tally = Tally::default();
    for _ in 0..trials {
        let a = MpUint::random_below(&mut rng, prime.p());
        let b = MpUint::random_below(&mut rng, prime.p());
        tally.check(prime, &ctx, &a, &b, None)?;
    }
    tally.write(&mut text);
    passed &= tally.ok();

    for sign in [PrimeSign::MinusOne, PrimeSign::PlusOne] {
        let small = build_prime::<u32>(1, 2, 1, sign).expect("11 and 13 are prime");
        let small_ctx = MontgomeryContext::for_prime(&small, 2)?;
        let pv = small.p().to_u64().expect("small");
        let mut tally = Tally::default();
        for a in 0..pv {
            for b in 0..pv {
                tally.check(
                    &small,
                    &small_ctx,
                    &MpUint::from_u64(a),
                    &MpUint::from_u64(b),
                    None,
                )?;
            }
        }
        let _ = writeln!(
            text,
            "exhaustive p = {pv} ({}): {} pairs",
            small.spec_string(),
            tally.total
        );
        tally.write(&mut text);
        passed &= tally.ok();
    }

    if let Some((name, vectors)) = vectors {
        let mut tally = Tally::default();
        for v in vectors {
            tally.check(prime, &ctx, &v.a, &v.b, Some(&v.expected))?;
        }
        let _ = writeln!(text, "vectors {name}: {}", tally.total);
        tally.write(&mut text);
        passed &= tally.ok();
    }

    let _ = writeln!(text, "result: {}", if passed { "PASS" } else { "FAIL" });
    Ok(Outcome { text, passed })
}
