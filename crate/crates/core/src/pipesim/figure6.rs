//! The fully-utilized schedule for `n` interleaved inputs on a multiplier of
//! latency `4n`.
//!
//! All P1 products go first, then all P2, then all P3, with no gaps:
//! P1 in `[0, 4n)`, P2 in `[4n, 10n)`, P3 in `[10n, 12n)`, results in
//! `[14n, 16n)`. This is a slot plan, not a causal simulation: the first P2
//! issue at `4n` uses P1 results that only leave the multiplier at `4n + 3`.

use serde::{Deserialize, Serialize};

use super::{Phase, SimError, Trace, TraceEvent};

/// Half-open cycle interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub start: u64,
    pub end: u64,
}

impl Window {
    pub fn len(&self) -> u64 {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Figure6Schedule {
    pub interleave: usize,
    pub depth: u32,
    pub p1: Window,
    pub p2: Window,
    /// P2 results that come out while P2 is still issuing and must be held.
    pub p2_buffered: Window,
    pub p3: Window,
    pub results: Window,
    /// Cycles in `[0, 12n)` with no issue.
    pub idle_cycles: u64,
    pub throughput_cycles_per_mult: f64,
    pub mips_at_100mhz: f64,
    pub trace: Trace,
}

fn span(events: &[TraceEvent], phase: Phase) -> Window {
    let cycles = events.iter().filter(|e| e.phase == phase).map(|e| e.cycle);
    let start = cycles.clone().min().unwrap_or(0);
    let end = cycles.max().map_or(0, |c| c + 1);
    Window { start, end }
}

pub fn figure6_schedule(n: usize) -> Result<Figure6Schedule, SimError> {
    if n == 0 {
        return Err(SimError::InvalidConfig("interleave must be >= 1".into()));
    }
    let depth = 4 * n as u32;
    let d = u64::from(depth);
    let mut trace = Trace {
        depth,
        ..Trace::default()
    };
    let mut cycle = 0u64;
    for phase in Phase::ALL {
        for set in 0..n {
            for idx in 0..phase.issue_count() {
                let ev = TraceEvent {
                    cycle,
                    batch: 0,
                    set,
                    phase,
                    idx,
                    bubble: false,
                };
                trace.issues.push(ev);
                trace.emerges.push(TraceEvent {
                    cycle: cycle + d,
                    ..ev
                });
                cycle += 1;
            }
        }
    }
    trace.total_cycles = cycle + d;

    let p1 = span(&trace.issues, Phase::P1);
    let p2 = span(&trace.issues, Phase::P2);
    let p3 = span(&trace.issues, Phase::P3);
    let p2_out = span(&trace.emerges, Phase::P2);
    let results = span(&trace.emerges, Phase::P3);
    let p2_buffered = Window {
        start: p2_out.start,
        end: p2.end.max(p2_out.start),
    };
    let idle_cycles = trace.idle_cycles(0, p3.end);
    let throughput = results.start as f64 / n as f64;
    Ok(Figure6Schedule {
        interleave: n,
        depth,
        p1,
        p2,
        p2_buffered,
        p3,
        results,
        idle_cycles,
        throughput_cycles_per_mult: throughput,
        mips_at_100mhz: 100.0 / throughput,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(start: u64, end: u64) -> Window {
        Window { start, end }
    }

    #[test]
    fn windows_scale_with_n() {
        for n in 1..=8u64 {
            let s = figure6_schedule(n as usize).unwrap();
            assert_eq!(s.depth as u64, 4 * n);
            assert_eq!(s.p1, w(0, 4 * n));
            assert_eq!(s.p2, w(4 * n, 10 * n));
            assert_eq!(s.p2_buffered, w(8 * n, 10 * n));
            assert_eq!(s.p3, w(10 * n, 12 * n));
            assert_eq!(s.results, w(14 * n, 16 * n));
            assert_eq!(s.idle_cycles, 0);
            assert_eq!(s.throughput_cycles_per_mult, 14.0);
            assert!((s.mips_at_100mhz - 7.14).abs() < 0.005);
        }
    }

    #[test]
    fn n4_results() {
        let s = figure6_schedule(4).unwrap();
        assert_eq!(s.results, w(56, 64));
        assert_eq!(s.results.len(), 8);
    }

    #[test]
    fn rejects_zero() {
        assert!(figure6_schedule(0).is_err());
    }
}
