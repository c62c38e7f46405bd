//! The reconfigurable N x N multiplier: sixteen N/4 x N/4 sub-multipliers
//! feeding an adder tree, with one register per stage.

use crate::mpcore::{Limb, MpUint};

use super::Phase;

/// Which product a pipeline slot belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Tag {
    pub batch: usize,
    pub set: usize,
    pub phase: Phase,
    pub idx: usize,
}

#[derive(Debug, Clone)]
enum Payload<L: Limb> {
    Operands(MpUint<L>, MpUint<L>),
    /// Shifted partial products still to be summed.
    Partials(Vec<MpUint<L>>),
}

#[derive(Debug, Clone)]
pub(crate) struct Slot<L: Limb> {
    pub tag: Tag,
    /// `None` for padding bubbles.
    payload: Option<Payload<L>>,
}

impl<L: Limb> Slot<L> {
    pub fn new(tag: Tag, operands: Option<(MpUint<L>, MpUint<L>)>) -> Self {
        Self {
            tag,
            payload: operands.map(|(x, y)| Payload::Operands(x, y)),
        }
    }

    /// The finished product; `None` for a bubble.
    pub fn product(self) -> Option<MpUint<L>> {
        match self.payload? {
            Payload::Partials(mut v) => {
                debug_assert_eq!(v.len(), 1);
                v.pop()
            }
            Payload::Operands(..) => unreachable!("operands left the multiplier unprocessed"),
        }
    }
}

const TREE_LEVELS: u32 = 4;

pub(crate) struct Multiplier<L: Limb> {
    chunk: usize,
    small: usize,
    /// Adder-tree levels performed when a slot enters each stage.
    levels: Vec<u32>,
    stages: Vec<Option<Slot<L>>>,
}

impl<L: Limb> Multiplier<L> {
    pub fn new(n_width: usize, small: u32, accum: u32, buffer: u32) -> Self {
        let (small, accum) = (small as usize, accum as usize);
        let depth = small + accum + buffer as usize;
        let mut levels = vec![0; depth];
        if accum == 0 {
            levels[small - 1] = TREE_LEVELS;
        } else {
            let a = accum as u32;
            for i in 0..a {
                levels[small + i as usize] = TREE_LEVELS * (i + 1) / a - TREE_LEVELS * i / a;
            }
        }
        Self {
            chunk: n_width / 4,
            small,
            levels,
            stages: vec![None; depth],
        }
    }

    #[cfg(test)]
    pub fn depth(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.iter().all(Option::is_none)
    }

    /// One clock edge: everything moves down a stage and the last stage's
    /// contents leave the multiplier. Stage 0 is left empty for [`load`].
    pub fn advance(&mut self) -> Option<Slot<L>> {
        let out = self.stages.last_mut().and_then(Option::take);
        for s in (1..self.stages.len()).rev() {
            self.stages[s] = self.stages[s - 1].take().map(|slot| self.enter(s, slot));
        }
        out
    }

    pub fn load(&mut self, slot: Slot<L>) {
        debug_assert!(self.stages[0].is_none());
        self.stages[0] = Some(self.enter(0, slot));
    }

    fn enter(&self, stage: usize, mut slot: Slot<L>) -> Slot<L> {
        if stage + 1 == self.small {
            if let Some(Payload::Operands(x, y)) = slot.payload.take() {
                slot.payload = Some(Payload::Partials(self.partials(&x, &y)));
            }
        }
        if let Some(Payload::Partials(v)) = slot.payload.as_mut() {
            for _ in 0..self.levels[stage] {
                *v = v
                    .chunks(2)
                    .map(|p| {
                        if p.len() == 2 {
                            &p[0] + &p[1]
                        } else {
                            p[0].clone()
                        }
                    })
                    .collect();
            }
        }
        slot
    }

    fn partials(&self, x: &MpUint<L>, y: &MpUint<L>) -> Vec<MpUint<L>> {
        let w = self.chunk;
        debug_assert!(x.bits() <= 4 * w && y.bits() <= 4 * w);
        let split = |v: &MpUint<L>| -> Vec<MpUint<L>> {
            (0..4).map(|i| (v >> (i * w)).low_bits(w)).collect()
        };
        let (xs, ys) = (split(x), split(y));
        let mut out = Vec::with_capacity(16);
        for (i, xi) in xs.iter().enumerate() {
            for (j, yj) in ys.iter().enumerate() {
                out.push(&(xi * yj) << ((i + j) * w));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tag(idx: usize) -> Tag {
        Tag {
            batch: 0,
            set: 0,
            phase: Phase::P1,
            idx,
        }
    }

    #[test]
    fn products_emerge_after_depth_cycles() {
        let mut m = Multiplier::<u32>::new(380, 3, 5, 1);
        assert_eq!(m.depth(), 9);
        let x = &MpUint::pow2(379) - &MpUint::from_u64(12345);
        let y = &MpUint::pow2(300) + &MpUint::from_u64(99);
        m.load(Slot::new(tag(0), Some((x.clone(), y.clone()))));
        let mut out = None;
        for cycle in 1..=9 {
            let o = m.advance();
            if cycle < 9 {
                assert!(o.is_none());
            } else {
                out = o;
            }
        }
        assert!(m.is_empty());
        let slot = out.unwrap();
        assert_eq!(slot.tag, tag(0));
        assert_eq!(slot.product().unwrap(), &x * &y);
    }

    #[test]
    fn back_to_back_and_bubbles() {
        for (small, accum, buffer) in [(1, 0, 0), (3, 5, 1), (2, 1, 3), (1, 7, 0)] {
            let mut m = Multiplier::<u8>::new(16, small, accum, buffer);
            let d = m.depth();
            let mut seen = Vec::new();
            for c in 0..(4 + d) {
                if let Some(s) = m.advance() {
                    seen.push((c, s.tag.idx, s.product()));
                }
                if c < 4 {
                    let ops = (c != 2)
                        .then(|| (MpUint::from_u64(60000 + c as u64), MpUint::from_u64(65535)));
                    m.load(Slot::new(tag(c), ops));
                }
            }
            assert_eq!(seen.len(), 4);
            for (c, idx, p) in seen {
                assert_eq!(c, idx + d);
                match p {
                    Some(p) => assert_eq!(p, MpUint::from_u64((60000 + idx as u64) * 65535)),
                    None => assert_eq!(idx, 2),
                }
            }
        }
    }
}
