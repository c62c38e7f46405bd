//! Text timing chart: one row per resource, one column per cycle.
//!
//! Issue rows (`P1`..`P3`) and the `out` row show the input slot (`0`-`9`,
//! then `a`-`z`) using the multiplier that cycle; `-` is a padding bubble and
//! `.` an idle cycle. The `post` row shows which slot the post-processing unit
//! is working on.

use super::{Phase, Trace};

fn slot_char(set: usize, bubble: bool) -> char {
    if bubble {
        '-'
    } else {
        char::from_digit((set % 36) as u32, 36).unwrap_or('?')
    }
}

/// Renders the first `max_cycles` cycles of `trace` (all of them if `None`).
pub fn render_gantt(trace: &Trace, max_cycles: Option<u64>) -> String {
    let cols = max_cycles.map_or(trace.total_cycles, |m| m.min(trace.total_cycles)) as usize;
    let mut rows: Vec<(String, Vec<char>)> = Phase::ALL
        .iter()
        .map(|p| (p.to_string(), vec!['.'; cols]))
        .collect();
    rows.push(("out".into(), vec!['.'; cols]));
    rows.push(("post".into(), vec!['.'; cols]));

    for e in &trace.issues {
        if let Some(c) = rows[e.phase.index()].1.get_mut(e.cycle as usize) {
            *c = slot_char(e.set, e.bubble);
        }
    }
    for e in &trace.emerges {
        if let Some(c) = rows[3].1.get_mut(e.cycle as usize) {
            *c = slot_char(e.set, e.bubble);
        }
    }
    for s in &trace.post {
        for cycle in s.start..s.end {
            if let Some(c) = rows[4].1.get_mut(cycle as usize) {
                *c = slot_char(s.set, false);
            }
        }
    }

    let label = 6;
    let mut out = String::new();
    let tens: String = (0..cols)
        .map(|c| {
            if c % 10 == 0 {
                char::from_digit((c / 10 % 10) as u32, 10).unwrap()
            } else {
                ' '
            }
        })
        .collect();
    let units: String = (0..cols)
        .map(|c| char::from_digit((c % 10) as u32, 10).unwrap())
        .collect();
    out.push_str(&format!("{:label$}{tens}\n", ""));
    out.push_str(&format!("{:label$}{units}\n", ""));
    for (name, cells) in rows {
        out.push_str(&format!(
            "{name:label$}{}\n",
            cells.into_iter().collect::<String>()
        ));
    }
    out
}
