//! The `sim` report document and its text form.

use std::fmt::Write;

use serde::{Deserialize, Serialize};
use sike_ffm::pipesim::{Figure6Schedule, TimingReport, Utilization};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimDoc {
    pub prime: String,
    pub depth: u32,
    pub interleave: usize,
    pub mode: String,
    pub mult_out_cycles: Vec<u64>,
    pub final_out_cycles: Vec<u64>,
    pub latency_cycles: u64,
    pub throughput_cycles_per_mult: f64,
    pub utilization: Utilization,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub batch_period: Option<u64>,
    /// Fully-utilized schedule only: `[start, end]` of the result window.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<[u64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mips_at_100mhz: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub idle_cycles: Option<u64>,
}

impl SimDoc {
    pub fn from_report(r: &TimingReport) -> Self {
        Self {
            prime: r.prime.clone(),
            depth: r.depth,
            interleave: r.interleave,
            mode: r.mode.to_string(),
            mult_out_cycles: r.mult_out_cycles.clone(),
            final_out_cycles: r.final_out_cycles.clone(),
            latency_cycles: r.latency_cycles,
            throughput_cycles_per_mult: r.throughput_cycles_per_mult,
            utilization: r.utilization,
            batch_period: Some(r.batch_period),
            window: None,
            mips_at_100mhz: None,
            idle_cycles: None,
        }
    }

    /// The schedule has no post-processing step, so a result is final once it
    /// leaves the multiplier.
    pub fn from_figure6(prime: String, s: &Figure6Schedule) -> Self {
        let n = s.interleave;
        let done: Vec<u64> = (0..n)
            .map(|set| {
                s.trace
                    .emerges
                    .iter()
                    .filter(|e| e.set == set && e.phase == sike_ffm::pipesim::Phase::P3)
                    .map(|e| e.cycle + 1)
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let busy = |from: u64, to: u64| {
            (to - from - s.trace.idle_cycles(from, to)) as f64 / (to - from) as f64
        };
        Self {
            prime,
            depth: s.depth,
            interleave: n,
            mode: "figure6".into(),
            mult_out_cycles: done.clone(),
            final_out_cycles: done,
            latency_cycles: s.results.end,
            throughput_cycles_per_mult: s.throughput_cycles_per_mult,
            utilization: Utilization {
                p1: busy(s.p1.start, s.p1.end),
                p2: busy(s.p2.start, s.p2.end),
                p3: busy(s.p3.start, s.p3.end),
            },
            batch_period: None,
            window: Some([s.results.start, s.results.end]),
            mips_at_100mhz: Some(s.mips_at_100mhz),
            idle_cycles: Some(s.idle_cycles),
        }
    }

    pub fn to_text(&self) -> String {
        let mut t = String::new();
        let list = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(", ");
        let _ = writeln!(t, "prime            {}", self.prime);
        let _ = writeln!(t, "mode             {}", self.mode);
        let _ = writeln!(t, "depth            {}", self.depth);
        let _ = writeln!(t, "interleave       {}", self.interleave);
        let _ = writeln!(t, "mult out         {}", list(&self.mult_out_cycles));
        let _ = writeln!(t, "final out        {}", list(&self.final_out_cycles));
        let _ = writeln!(t, "latency          {} cycles", self.latency_cycles);
        if let Some(p) = self.batch_period {
            let _ = writeln!(t, "batch period     {p} cycles");
        }
        let _ = writeln!(
            t,
            "throughput       {} cycles/mult",
            self.throughput_cycles_per_mult
        );
        let u = &self.utilization;
        let _ = writeln!(
            t,
            "utilization      P1 {:.1}%  P2 {:.1}%  P3 {:.1}%",
            u.p1 * 100.0,
            u.p2 * 100.0,
            u.p3 * 100.0
        );
        if let Some([lo, hi]) = self.window {
            let _ = writeln!(t, "results          [{lo}, {hi})");
        }
        if let Some(idle) = self.idle_cycles {
            let _ = writeln!(t, "idle cycles      {idle}");
        }
        if let Some(m) = self.mips_at_100mhz {
            let _ = writeln!(t, "MIPS @ 100 MHz   {m:.2}");
        }
        t
    }
}
