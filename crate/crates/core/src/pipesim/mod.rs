//! Cycle-accurate model of a pipelined, data-interleaved FFM2 multiplier.
//!
//! One reconfigurable N x N multiplier of depth `D` does all three big
//! multiplications of FFM2, each split into N x N products:
//!
//! | phase | operation                   | N x N products |
//! |-------|-----------------------------|----------------|
//! | P1    | `C = A * B` (2N x 2N)       | 4              |
//! | P2    | `q1 * x` (3N x 2N)          | 6              |
//! | P3    | `q_est * d` (2N x N)        | 2              |
//!
//! A product issued at cycle `t` leaves the multiplier at `t + D`. `interleave`
//! independent inputs form a batch and take turns on the multiplier phase by
//! phase, which fills the bubbles a single input leaves while it waits for its
//! own results. A serial post-processing unit finishes the Barrett correction
//! and the FFM2 recombination for each input.
//!
//! Values are computed for real: operands are cut into N and N/4-bit chunks,
//! partial products travel through stage registers, and the results are
//! shifted back together. Timing never changes the values.

mod datapath;
mod figure6;
mod gantt;

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mpcore::{Limb, MpUint};
use crate::params::SikePrime;
use crate::reducers::{barrett_finish, post_process, FieldElement, ReduceError};

use datapath::{Multiplier, Slot, Tag};

pub use figure6::{figure6_schedule, Figure6Schedule, Window};
pub use gantt::render_gantt;

/// Extra cycles after P1, P2 and P3 complete before their results can be
/// used, in `paper` scheduling.
pub const PAPER_PHASE_OVERHEAD: [u32; 3] = [3, 3, 1];
/// Idle cycles between two jobs on the multiplier, in `paper` scheduling.
pub const PAPER_SWITCH_GAP: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    P1,
    P2,
    P3,
}

impl Phase {
    pub const ALL: [Phase; 3] = [Phase::P1, Phase::P2, Phase::P3];

    /// N x N products the phase issues for one input.
    pub fn issue_count(self) -> usize {
        match self {
            Phase::P1 => 4,
            Phase::P2 => 6,
            Phase::P3 => 2,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{}", self.index() + 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Schedule {
    /// Fixed phase overheads and job switch gaps reproducing the reference
    /// timing diagrams. The next batch enters once the current batch's last
    /// multiplier result is out.
    Paper,
    /// Every job starts as soon as its operands exist and the multiplier is
    /// free; lowest (batch, phase, input) first. The next batch enters right
    /// after the current batch's last issue.
    Causal,
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Schedule::Paper => "paper",
            Schedule::Causal => "causal",
        })
    }
}

impl FromStr for Schedule {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "paper" => Ok(Schedule::Paper),
            "causal" => Ok(Schedule::Causal),
            _ => Err(SimError::InvalidConfig(format!("unknown schedule {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineConfig {
    /// N, the multiplier width in bits. Divisible by 4.
    pub n_width: usize,
    pub small_mult_stages: u32,
    pub accum_stages: u32,
    pub buffer_stages: u32,
    /// Inputs per batch.
    pub interleave: usize,
    pub schedule: Schedule,
    /// Cycles after each phase completes before its result is usable.
    pub phase_overhead: [u32; 3],
    /// Idle cycles whenever the multiplier switches from one job to another.
    pub switch_gap: u32,
    pub post_cycles: u32,
}

impl PipelineConfig {
    pub fn paper(n_width: usize) -> Self {
        Self {
            n_width,
            small_mult_stages: 3,
            accum_stages: 5,
            buffer_stages: 1,
            interleave: 2,
            schedule: Schedule::Paper,
            phase_overhead: PAPER_PHASE_OVERHEAD,
            switch_gap: PAPER_SWITCH_GAP,
            post_cycles: 7,
        }
    }

    pub fn causal(n_width: usize) -> Self {
        Self {
            schedule: Schedule::Causal,
            phase_overhead: [0; 3],
            switch_gap: 0,
            ..Self::paper(n_width)
        }
    }

    /// The default geometry sized for `prime`.
    pub fn for_prime<L: Limb>(prime: &SikePrime<L>, schedule: Schedule) -> Self {
        match schedule {
            Schedule::Paper => Self::paper(prime.n_width()),
            Schedule::Causal => Self::causal(prime.n_width()),
        }
    }

    pub fn with_interleave(mut self, n: usize) -> Self {
        self.interleave = n;
        self
    }

    /// `D`, cycles from issue to result.
    pub fn depth(&self) -> u32 {
        self.small_mult_stages + self.accum_stages + self.buffer_stages
    }

    pub fn validate(&self) -> Result<(), SimError> {
        let bad = |m: &str| Err(SimError::InvalidConfig(m.to_owned()));
        if self.n_width == 0 || !self.n_width.is_multiple_of(4) {
            return bad("n_width must be a positive multiple of 4");
        }
        if self.small_mult_stages == 0 {
            return bad("small_mult_stages must be >= 1");
        }
        if self.interleave == 0 {
            return bad("interleave must be >= 1");
        }
        if self.post_cycles == 0 {
            return bad("post_cycles must be >= 1");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("no inputs to simulate")]
    EmptyInput,
    #[error("operand has {bits} bits, the datapath takes {width}")]
    OperandTooWide { bits: usize, width: usize },
    #[error("operand 0x{0} is not reduced below p")]
    NotReduced(String),
    #[error("prime needs an N = {needed}-bit multiplier, configured N = {configured}")]
    DatapathTooNarrow { needed: usize, configured: usize },
    #[error("invalid pipeline configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Reduce(#[from] ReduceError),
}

/// One phase of one input: a run of contiguous issues on the multiplier.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MultJob {
    pub batch: usize,
    pub set_id: usize,
    pub phase: Phase,
    pub issue_count: usize,
    /// Padding in a short final batch: occupies slots, carries no data.
    pub bubble: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseTiming {
    pub first_issue: u64,
    pub last_issue: u64,
    /// Cycle the phase's last product left the multiplier.
    pub done: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetTiming {
    pub input: usize,
    pub batch: usize,
    pub set: usize,
    pub p1: PhaseTiming,
    pub p2: PhaseTiming,
    pub p3: PhaseTiming,
    pub mult_out: u64,
    pub post_start: u64,
    pub final_out: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Utilization {
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingReport {
    pub prime: String,
    pub mode: Schedule,
    pub depth: u32,
    pub interleave: usize,
    pub n_width: usize,
    /// Per input, cycle its last multiplier result is available.
    pub mult_out_cycles: Vec<u64>,
    /// Per input, cycle its field product is available.
    pub final_out_cycles: Vec<u64>,
    /// First batch: first input in to last product out.
    pub latency_cycles: u64,
    /// Cycles between admitting one batch and the next.
    pub batch_period: u64,
    pub throughput_cycles_per_mult: f64,
    pub utilization: Utilization,
    pub total_cycles: u64,
    pub sets: Vec<SetTiming>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEvent {
    pub cycle: u64,
    pub batch: usize,
    pub set: usize,
    pub phase: Phase,
    pub idx: usize,
    pub bubble: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PostSpan {
    pub input: usize,
    pub set: usize,
    pub start: u64,
    pub end: u64,
}

/// Everything that happened, cycle by cycle.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub depth: u32,
    pub total_cycles: u64,
    pub issues: Vec<TraceEvent>,
    pub emerges: Vec<TraceEvent>,
    pub post: Vec<PostSpan>,
}

impl Trace {
    /// Issues of `phase` (not bubbles) in `[from, to)`.
    pub fn issues_in(&self, phase: Phase, from: u64, to: u64) -> usize {
        self.issues
            .iter()
            .filter(|e| e.phase == phase && !e.bubble && (from..to).contains(&e.cycle))
            .count()
    }

    /// Cycles in `[from, to)` with nothing issued.
    pub fn idle_cycles(&self, from: u64, to: u64) -> u64 {
        let busy: std::collections::BTreeSet<u64> = self
            .issues
            .iter()
            .map(|e| e.cycle)
            .filter(|c| (from..to).contains(c))
            .collect();
        (to - from) - busy.len() as u64
    }
}

#[derive(Debug, Clone)]
pub struct Simulation<'p, L: Limb> {
    pub products: Vec<FieldElement<'p, L>>,
    pub report: TimingReport,
    pub trace: Trace,
}

/// Fraction of the multiplier's issue slots a phase keeps busy.
///
/// The window is the first input's phase span, from its first issue to its
/// last result: `D + j - 1` cycles for a `j`-issue phase. Other interleaved
/// inputs fill the idle slots of that window.
pub fn utilization(phase: Phase, depth: u32, interleave: usize) -> f64 {
    let j = phase.issue_count();
    let window = depth as usize + j - 1;
    (interleave * j).min(window) as f64 / window as f64
}

/// One N x N product: operands and the shift that places it in the phase result.
type Product<L> = (MpUint<L>, MpUint<L>, usize);

struct SetState<L: Limb> {
    input: Option<usize>,
    r1: MpUint<L>,
    q1: MpUint<L>,
    q_est: MpUint<L>,
    /// Pending `(x, y, shift)` products per phase; empty for bubbles.
    ops: [Vec<Product<L>>; 3],
    acc: MpUint<L>,
    received: usize,
    first_issue: [Option<u64>; 3],
    last_issue: [Option<u64>; 3],
    done: [Option<u64>; 3],
    mult_out: Option<u64>,
    post_start: Option<u64>,
    final_out: Option<u64>,
}

struct Batch<L: Limb> {
    sets: Vec<SetState<L>>,
    admitted: Option<u64>,
    /// When the next batch may enter, once known.
    release: Option<u64>,
}

struct Job {
    job: MultJob,
    issued: usize,
}

impl Job {
    fn finished(&self) -> bool {
        self.issued == self.job.issue_count
    }
}

/// Every job for `inputs` inputs in batches of `interleave`, in batch, phase,
/// input order. A short last batch is padded with bubble jobs.
pub fn job_plan(inputs: usize, interleave: usize) -> Vec<MultJob> {
    let batches = inputs.div_ceil(interleave.max(1));
    let mut plan = Vec::with_capacity(batches * 3 * interleave);
    for batch in 0..batches {
        for phase in Phase::ALL {
            for set_id in 0..interleave {
                plan.push(MultJob {
                    batch,
                    set_id,
                    phase,
                    issue_count: phase.issue_count(),
                    bubble: batch * interleave + set_id >= inputs,
                });
            }
        }
    }
    plan
}

fn chunks<L: Limb>(v: &MpUint<L>, n: usize, count: usize) -> Vec<MpUint<L>> {
    (0..count).map(|i| (v >> (i * n)).low_bits(n)).collect()
}

fn cross<L: Limb>(xs: &[MpUint<L>], ys: &[MpUint<L>], n: usize) -> Vec<Product<L>> {
    let mut out = Vec::with_capacity(xs.len() * ys.len());
    for (i, x) in xs.iter().enumerate() {
        for (j, y) in ys.iter().enumerate() {
            out.push((x.clone(), y.clone(), (i + j) * n));
        }
    }
    out
}

/// Runs `inputs` through the multiplier and post-processing unit.
///
/// Inputs are taken `interleave` at a time; a short last batch is padded with
/// bubbles. Products come back in input order.
pub fn simulate<'p, L: Limb>(
    config: &PipelineConfig,
    prime: &'p SikePrime<L>,
    inputs: &[(MpUint<L>, MpUint<L>)],
) -> Result<Simulation<'p, L>, SimError> {
    config.validate()?;
    if inputs.is_empty() {
        return Err(SimError::EmptyInput);
    }
    let n = config.n_width;
    if prime.n_width() > n {
        return Err(SimError::DatapathTooNarrow {
            needed: prime.n_width(),
            configured: n,
        });
    }
    for v in inputs.iter().flat_map(|(a, b)| [a, b]) {
        if v.bits() > 2 * n {
            return Err(SimError::OperandTooWide {
                bits: v.bits(),
                width: 2 * n,
            });
        }
        if v >= prime.p() {
            return Err(SimError::NotReduced(v.to_hex()));
        }
    }

    let depth = config.depth();
    let width = config.interleave;
    let alpha = prime.alpha() as usize;
    let barrett = prime.barrett_d();
    let x_chunks = chunks(barrett.reciprocal(), n, 2);

    let mut batches: Vec<Batch<L>> = inputs
        .chunks(width)
        .enumerate()
        .map(|(b, group)| Batch {
            sets: (0..width)
                .map(|s| {
                    let pair = group.get(s);
                    let mut ops: [Vec<_>; 3] = Default::default();
                    if let Some((a, bv)) = pair {
                        ops[0] = cross(&chunks(a, n, 2), &chunks(bv, n, 2), n);
                    }
                    SetState {
                        input: pair.map(|_| b * width + s),
                        r1: MpUint::zero(),
                        q1: MpUint::zero(),
                        q_est: MpUint::zero(),
                        ops,
                        acc: MpUint::zero(),
                        received: 0,
                        first_issue: [None; 3],
                        last_issue: [None; 3],
                        done: [None; 3],
                        mult_out: None,
                        post_start: None,
                        final_out: None,
                    }
                })
                .collect(),
            admitted: None,
            release: None,
        })
        .collect();
    batches[0].admitted = Some(0);

    let mut jobs: Vec<Job> = job_plan(inputs.len(), width)
        .into_iter()
        .map(|job| Job { job, issued: 0 })
        .collect();
    let jobs_per_batch = 3 * width;

    let mut mult = Multiplier::<L>::new(
        n,
        config.small_mult_stages,
        config.accum_stages,
        config.buffer_stages,
    );
    let mut trace = Trace {
        depth,
        ..Trace::default()
    };
    let mut products: Vec<Option<FieldElement<'p, L>>> = vec![None; inputs.len()];
    let mut post_queue: VecDeque<(usize, usize)> = VecDeque::new();
    let mut post_busy: Option<(usize, usize, u64)> = None;
    let mut current: Option<usize> = None;
    let mut next_in_order = 0usize;
    let mut last_issue: Option<u64> = None;
    let mut issued_jobs = 0usize;

    let mut cycle: u64 = 0;
    loop {
        // results leaving the multiplier
        if let Some(slot) = mult.advance() {
            let tag = slot.tag;
            let set = &mut batches[tag.batch].sets[tag.set];
            trace.emerges.push(TraceEvent {
                cycle,
                batch: tag.batch,
                set: tag.set,
                phase: tag.phase,
                idx: tag.idx,
                bubble: set.input.is_none(),
            });
            let shift = (tag.phase, tag.idx);
            if let Some(p) = slot.product() {
                let off = phase_shift(shift.0, shift.1, n);
                set.acc = &set.acc + &(&p << off);
            }
            set.received += 1;
            if set.received == tag.phase.issue_count() {
                set.received = 0;
                set.done[tag.phase.index()] = Some(cycle);
                let acc = std::mem::replace(&mut set.acc, MpUint::zero());
                if set.input.is_some() {
                    match tag.phase {
                        Phase::P1 => {
                            let (q1, r1) = acc.split_pow2(alpha);
                            set.ops[1] = cross(&chunks(&q1, n, 3), &x_chunks, n);
                            set.q1 = q1;
                            set.r1 = r1;
                        }
                        Phase::P2 => {
                            let q_est = &acc >> barrett.shift();
                            debug_assert!(q_est.bits() <= 2 * n);
                            set.ops[2] =
                                cross(&chunks(&q_est, n, 2), std::slice::from_ref(prime.d()), n);
                            set.q_est = q_est;
                        }
                        Phase::P3 => {
                            // q_est * d, consumed by the post-processing unit
                            set.acc = acc;
                        }
                    }
                }
                if tag.phase == Phase::P3 {
                    let out = cycle + u64::from(config.phase_overhead[2]);
                    set.mult_out = Some(out);
                    if set.input.is_some() {
                        post_queue.push_back((tag.batch, tag.set));
                    }
                    let batch = &mut batches[tag.batch];
                    if config.schedule == Schedule::Paper
                        && batch.sets.iter().all(|s| s.mult_out.is_some())
                    {
                        let release = batch.sets.iter().filter_map(|s| s.mult_out).max();
                        batch.release = release;
                        if let Some(next) = batches.get_mut(tag.batch + 1) {
                            next.admitted = release;
                        }
                    }
                }
            }
        }

        // post-processing unit
        if let Some((b, s, end)) = post_busy {
            if end == cycle {
                let set = &batches[b].sets[s];
                let input = set.input.expect("bubbles skip post-processing");
                let fixed = barrett_finish(&set.q1, set.q_est.clone(), &set.acc, prime.d())?;
                products[input] = Some(post_process(&fixed.q, &fixed.r, &set.r1, prime)?);
                batches[b].sets[s].final_out = Some(cycle);
                post_busy = None;
            }
        }
        if post_busy.is_none() {
            if let Some(&(b, s)) = post_queue.front() {
                let set = &mut batches[b].sets[s];
                if set.mult_out.is_some_and(|m| m <= cycle) {
                    post_queue.pop_front();
                    set.post_start = Some(cycle);
                    let end = cycle + u64::from(config.post_cycles);
                    trace.post.push(PostSpan {
                        input: set.input.unwrap_or_default(),
                        set: s,
                        start: cycle,
                        end,
                    });
                    post_busy = Some((b, s, end));
                }
            }
        }

        // issue at most one product
        if current.is_none() {
            let earliest = last_issue.map_or(0, |l| l + 1 + u64::from(config.switch_gap));
            if cycle >= earliest {
                let ready = |j: &Job| -> bool {
                    let j = &j.job;
                    let batch = &batches[j.batch];
                    let at = match j.phase {
                        Phase::P1 => batch.admitted,
                        p => batch.sets[j.set_id].done[p.index() - 1]
                            .map(|d| d + u64::from(config.phase_overhead[p.index() - 1])),
                    };
                    at.is_some_and(|t| t <= cycle) && batch.admitted.is_some_and(|t| t <= cycle)
                };
                current = match config.schedule {
                    Schedule::Paper => (next_in_order < jobs.len() && ready(&jobs[next_in_order]))
                        .then(|| {
                            next_in_order += 1;
                            next_in_order - 1
                        }),
                    Schedule::Causal => jobs.iter().position(|j| j.issued == 0 && ready(j)),
                };
            }
        }
        if let Some(ji) = current {
            let job = jobs[ji].job;
            let idx = jobs[ji].issued;
            let set = &mut batches[job.batch].sets[job.set_id];
            let p = job.phase.index();
            debug_assert_eq!(job.bubble, set.input.is_none());
            let operands = (!job.bubble).then(|| {
                let (x, y, _) = set.ops[p][idx].clone();
                (x, y)
            });
            let tag = Tag {
                batch: job.batch,
                set: job.set_id,
                phase: job.phase,
                idx,
            };
            mult.load(Slot::new(tag, operands));
            trace.issues.push(TraceEvent {
                cycle,
                batch: job.batch,
                set: job.set_id,
                phase: job.phase,
                idx,
                bubble: job.bubble,
            });
            set.first_issue[p].get_or_insert(cycle);
            set.last_issue[p] = Some(cycle);
            last_issue = Some(cycle);
            jobs[ji].issued += 1;
            if jobs[ji].finished() {
                current = None;
                issued_jobs += 1;
                let b = job.batch;
                let batch_done = jobs[b * jobs_per_batch..(b + 1) * jobs_per_batch]
                    .iter()
                    .all(Job::finished);
                if config.schedule == Schedule::Causal && batch_done {
                    batches[b].release = Some(cycle + 1);
                    if let Some(next) = batches.get_mut(b + 1) {
                        next.admitted = Some(cycle + 1);
                    }
                }
            }
        }

        if issued_jobs == jobs.len()
            && mult.is_empty()
            && post_busy.is_none()
            && post_queue.is_empty()
        {
            break;
        }
        cycle += 1;
    }
    trace.total_cycles = cycle + 1;

    let report = build_report(config, prime, &batches, &trace)?;
    Ok(Simulation {
        products: products
            .into_iter()
            .map(|p| p.expect("every input finished"))
            .collect(),
        report,
        trace,
    })
}

fn phase_shift(phase: Phase, idx: usize, n: usize) -> usize {
    // products are issued row-major over (first operand chunk, second operand chunk)
    let cols = match phase {
        Phase::P1 | Phase::P2 => 2,
        Phase::P3 => 1,
    };
    (idx / cols + idx % cols) * n
}

fn build_report<L: Limb>(
    config: &PipelineConfig,
    prime: &SikePrime<L>,
    batches: &[Batch<L>],
    trace: &Trace,
) -> Result<TimingReport, SimError> {
    let missing = || SimError::InvalidConfig("simulation ended with unfinished work".into());
    let mut sets = Vec::new();
    for (b, batch) in batches.iter().enumerate() {
        for (s, set) in batch.sets.iter().enumerate() {
            let Some(input) = set.input else { continue };
            let phase = |i: usize| -> Result<PhaseTiming, SimError> {
                Ok(PhaseTiming {
                    first_issue: set.first_issue[i].ok_or_else(missing)?,
                    last_issue: set.last_issue[i].ok_or_else(missing)?,
                    done: set.done[i].ok_or_else(missing)?,
                })
            };
            sets.push(SetTiming {
                input,
                batch: b,
                set: s,
                p1: phase(0)?,
                p2: phase(1)?,
                p3: phase(2)?,
                mult_out: set.mult_out.ok_or_else(missing)?,
                post_start: set.post_start.ok_or_else(missing)?,
                final_out: set.final_out.ok_or_else(missing)?,
            });
        }
    }
    let first = &batches[0];
    let admitted = first.admitted.unwrap_or(0);
    let latency = sets
        .iter()
        .filter(|s| s.batch == 0)
        .map(|s| s.final_out)
        .max()
        .ok_or_else(missing)?
        - admitted;
    let period = first.release.ok_or_else(missing)? - admitted;

    let depth = u64::from(config.depth());
    let lead = &first.sets[0];
    let util = |phase: Phase| -> f64 {
        let j = phase.issue_count() as u64;
        let window = depth + j - 1;
        let start = lead.first_issue[phase.index()].unwrap_or(0);
        trace.issues_in(phase, start, start + window) as f64 / window as f64
    };

    Ok(TimingReport {
        prime: prime.label(),
        mode: config.schedule,
        depth: config.depth(),
        interleave: config.interleave,
        n_width: config.n_width,
        mult_out_cycles: sets.iter().map(|s| s.mult_out).collect(),
        final_out_cycles: sets.iter().map(|s| s.final_out).collect(),
        latency_cycles: latency,
        batch_period: period,
        throughput_cycles_per_mult: period as f64 / config.interleave as f64,
        utilization: Utilization {
            p1: util(Phase::P1),
            p2: util(Phase::P2),
            p3: util(Phase::P3),
        },
        total_cycles: trace.total_cycles,
        sets,
    })
}

#[cfg(test)]
mod tests;
