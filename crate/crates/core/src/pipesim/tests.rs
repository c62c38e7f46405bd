use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::params::{build_prime, registry, PrimeSign};
use crate::reducers::naive_modmul;

type U = MpUint<u32>;

fn random_pairs(prime: &SikePrime<u32>, count: usize, seed: u64) -> Vec<(U, U)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            (
                U::random_below(&mut rng, prime.p()),
                U::random_below(&mut rng, prime.p()),
            )
        })
        .collect()
}

fn check_products(prime: &SikePrime<u32>, inputs: &[(U, U)], sim: &Simulation<'_, u32>) {
    assert_eq!(sim.products.len(), inputs.len());
    for ((a, b), got) in inputs.iter().zip(&sim.products) {
        let a = FieldElement::new(prime, a.clone()).unwrap();
        let b = FieldElement::new(prime, b.clone()).unwrap();
        assert_eq!(got, &naive_modmul(&a, &b).unwrap());
    }
}

#[test]
fn paper_timing_p751() {
    let p = registry::<u32>("sikep751").unwrap();
    let cfg = PipelineConfig::for_prime(&p, Schedule::Paper);
    assert_eq!(cfg.depth(), 9);
    assert_eq!(cfg.n_width, 380);
    let inputs = random_pairs(&p, 2, 1);
    let sim = simulate(&cfg, &p, &inputs).unwrap();
    let r = &sim.report;
    assert_eq!(r.mult_out_cycles, vec![43, 50]);
    assert_eq!(r.final_out_cycles, vec![50, 57]);
    assert_eq!(r.latency_cycles, 57);
    assert_eq!(r.batch_period, 50);
    assert_eq!(r.throughput_cycles_per_mult, 25.0);
    // second input's P1 starts at cycle 5
    assert_eq!(r.sets[1].p1.first_issue, 5);
    assert_eq!(r.sets[0].p1.done, 12);
    assert_eq!(r.utilization.p2, 12.0 / 14.0);
    check_products(&p, &inputs, &sim);
}

#[test]
fn paper_steady_state() {
    let p = registry::<u32>("sikep751").unwrap();
    let cfg = PipelineConfig::for_prime(&p, Schedule::Paper);
    let inputs = random_pairs(&p, 6, 2);
    let sim = simulate(&cfg, &p, &inputs).unwrap();
    assert_eq!(sim.report.mult_out_cycles, vec![43, 50, 93, 100, 143, 150]);
    assert_eq!(
        sim.report.final_out_cycles,
        vec![50, 57, 100, 107, 150, 157]
    );
    check_products(&p, &inputs, &sim);
}

#[test]
fn causal_timing_p751() {
    let p = registry::<u32>("sikep751").unwrap();
    let cfg = PipelineConfig::for_prime(&p, Schedule::Causal);
    let inputs = random_pairs(&p, 4, 3);
    let sim = simulate(&cfg, &p, &inputs).unwrap();
    let r = &sim.report;
    assert_eq!(&r.mult_out_cycles[..2], &[36, 42]);
    assert_eq!(&r.final_out_cycles[..2], &[43, 50]);
    assert_eq!(r.batch_period, 34);
    assert_eq!(r.throughput_cycles_per_mult, 17.0);
    check_products(&p, &inputs, &sim);
    // nothing issues before its operands exist
    for s in &r.sets {
        assert!(s.p2.first_issue >= s.p1.done);
        assert!(s.p3.first_issue >= s.p2.done);
        assert!(s.final_out > s.mult_out);
    }
}

#[test]
fn single_input_phase_spans() {
    let p = registry::<u32>("sikep751").unwrap();
    let cfg = PipelineConfig::for_prime(&p, Schedule::Paper).with_interleave(1);
    let inputs = random_pairs(&p, 1, 4);
    let sim = simulate(&cfg, &p, &inputs).unwrap();
    let s = &sim.report.sets[0];
    assert_eq!(s.p1.done - s.p1.first_issue, 12);
    let u = sim.report.utilization;
    assert_eq!((u.p1, u.p2, u.p3), (4.0 / 12.0, 6.0 / 14.0, 2.0 / 10.0));
    check_products(&p, &inputs, &sim);
}

#[test]
fn utilization_formula() {
    assert_eq!(utilization(Phase::P1, 9, 1), 4.0 / 12.0);
    assert_eq!(utilization(Phase::P2, 9, 1), 6.0 / 14.0);
    assert_eq!(utilization(Phase::P3, 9, 1), 2.0 / 10.0);
    assert_eq!(utilization(Phase::P2, 9, 2), 12.0 / 14.0);
    assert!(utilization(Phase::P2, 9, 2) >= 1.9 * utilization(Phase::P2, 9, 1));
    assert_eq!(utilization(Phase::P1, 9, 5), 1.0);
}

#[test]
fn no_structural_hazards() {
    let p = registry::<u32>("sikep751").unwrap();
    for schedule in [Schedule::Paper, Schedule::Causal] {
        let cfg = PipelineConfig::for_prime(&p, schedule).with_interleave(3);
        let sim = simulate(&cfg, &p, &random_pairs(&p, 7, 5)).unwrap();
        let mut cycles: Vec<u64> = sim.trace.issues.iter().map(|e| e.cycle).collect();
        let n = cycles.len();
        cycles.dedup();
        assert_eq!(cycles.len(), n);
        // 3 batches, the last padded with two bubble inputs
        assert_eq!(n, 3 * 3 * 12);
        assert_eq!(sim.trace.issues.iter().filter(|e| e.bubble).count(), 2 * 12);
        for (i, e) in sim.trace.emerges.iter().enumerate() {
            assert_eq!(e.cycle, sim.trace.issues[i].cycle + 9);
        }
    }
}

#[test]
fn toy_primes_and_odd_geometries() {
    for (alpha, beta, sign) in [
        (2, 1, PrimeSign::MinusOne),
        (2, 1, PrimeSign::PlusOne),
        (5, 3, PrimeSign::MinusOne),
    ] {
        let p = build_prime::<u32>(1, alpha, beta, sign).unwrap();
        let pv = p.p().to_u64().unwrap();
        let inputs: Vec<(U, U)> = (0..pv)
            .flat_map(|a| {
                (0..pv)
                    .step_by(3)
                    .map(move |b| (U::from_u64(a), U::from_u64(b)))
            })
            .take(200)
            .collect();
        for mut cfg in [
            PipelineConfig::paper(p.n_width()),
            PipelineConfig::causal(p.n_width()),
        ] {
            for (small, accum, buffer, n) in [(3, 5, 1, 2), (1, 0, 0, 1), (2, 3, 2, 4)] {
                cfg.small_mult_stages = small;
                cfg.accum_stages = accum;
                cfg.buffer_stages = buffer;
                cfg.interleave = n;
                let sim = simulate(&cfg, &p, &inputs).unwrap();
                check_products(&p, &inputs, &sim);
            }
        }
    }
}

#[test]
fn wider_datapath_still_correct() {
    let p = registry::<u32>("sikep434").unwrap();
    let cfg = PipelineConfig::paper(p.n_width() + 36);
    let inputs = random_pairs(&p, 5, 6);
    check_products(&p, &inputs, &simulate(&cfg, &p, &inputs).unwrap());
}

#[test]
fn errors() {
    let p = build_prime::<u32>(1, 5, 3, PrimeSign::MinusOne).unwrap();
    let cfg = PipelineConfig::paper(p.n_width());
    assert_eq!(simulate(&cfg, &p, &[]).unwrap_err(), SimError::EmptyInput);
    let wide = U::pow2(2 * p.n_width());
    assert!(matches!(
        simulate(&cfg, &p, &[(wide, U::one())]).unwrap_err(),
        SimError::OperandTooWide { .. }
    ));
    assert!(matches!(
        simulate(&cfg, &p, &[(U::from_u64(863), U::one())]).unwrap_err(),
        SimError::NotReduced(_)
    ));
    let narrow = PipelineConfig::paper(p.n_width() - 4);
    assert!(matches!(
        simulate(&narrow, &p, &[(U::one(), U::one())]).unwrap_err(),
        SimError::DatapathTooNarrow { .. }
    ));
    for bad in [
        PipelineConfig {
            n_width: 6,
            ..cfg.clone()
        },
        PipelineConfig {
            interleave: 0,
            ..cfg.clone()
        },
        PipelineConfig {
            small_mult_stages: 0,
            ..cfg.clone()
        },
        PipelineConfig {
            post_cycles: 0,
            ..cfg.clone()
        },
    ] {
        assert!(matches!(bad.validate(), Err(SimError::InvalidConfig(_))));
    }
}

#[test]
fn deterministic_reports() {
    let p = registry::<u32>("sikep503").unwrap();
    let cfg = PipelineConfig::for_prime(&p, Schedule::Causal);
    let inputs = random_pairs(&p, 9, 7);
    let a = simulate(&cfg, &p, &inputs).unwrap();
    let b = simulate(&cfg, &p, &inputs).unwrap();
    assert_eq!(a.report, b.report);
    assert_eq!(a.trace, b.trace);
    let json = serde_json::to_string(&a.report).unwrap();
    let back: TimingReport = serde_json::from_str(&json).unwrap();
    assert_eq!(back, a.report);
    assert_eq!(serde_json::to_string(&back).unwrap(), json);
}

#[test]
fn gantt_of_paper_run() {
    let p = registry::<u32>("sikep751").unwrap();
    let cfg = PipelineConfig::for_prime(&p, Schedule::Paper);
    let sim = simulate(&cfg, &p, &random_pairs(&p, 2, 8)).unwrap();
    let g = render_gantt(&sim.trace, None);
    let p1 = g.lines().find(|l| l.starts_with("P1")).unwrap();
    assert!(p1[6..].starts_with("0000.1111"));
    let post = g.lines().find(|l| l.starts_with("post")).unwrap();
    assert_eq!(&post[6 + 43..6 + 57], "00000001111111");
}

#[test]
fn plan_pads_short_batches() {
    let plan = job_plan(3, 2);
    assert_eq!(plan.len(), 12);
    assert_eq!(plan.iter().filter(|j| j.bubble).count(), 3);
    assert!(plan.iter().all(|j| j.issue_count == j.phase.issue_count()));
    assert_eq!(
        (plan[6].batch, plan[6].phase, plan[6].set_id),
        (1, Phase::P1, 0)
    );
    assert!(plan[7].bubble);
}
