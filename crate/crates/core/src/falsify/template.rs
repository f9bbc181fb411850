use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::error::{Error, Result};

/// Largest gate budget accepted by [`enumerate_templates`].
pub const MAX_BUDGET: usize = 7;

/// A circuit skeleton: CNOT orientations plus single-qubit gate slots.
///
/// `slots[s]` marks which wires carry a parameterized gate in segment `s`,
/// where segment 0 precedes the first CNOT and segment `c` follows the last.
/// At most one gate per wire per segment: adjacent gates on a wire fuse.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Template {
    /// Target wire of each CNOT, in time order; the control is the other wire.
    pub cnots: Vec<usize>,
    /// `[wire 0, wire 1]` occupancy per segment; `cnots.len() + 1` entries.
    pub slots: Vec<[bool; 2]>,
}

impl Template {
    /// Builds a template from a segment bitmask: bit `2s + w` marks wire `w`
    /// of segment `s`.
    pub fn from_mask(cnots: Vec<usize>, mask: u32) -> Template {
        let slots = (0..=cnots.len())
            .map(|s| [mask >> (2 * s) & 1 == 1, mask >> (2 * s + 1) & 1 == 1])
            .collect();
        Template { cnots, slots }
    }

    pub fn slot_count(&self) -> usize {
        self.slots.iter().flatten().filter(|&&b| b).count()
    }

    pub fn gate_count(&self) -> usize {
        self.cnots.len() + self.slot_count()
    }

    pub fn slot_mask(&self) -> u32 {
        self.slots
            .iter()
            .enumerate()
            .map(|(s, [w0, w1])| (*w0 as u32) << (2 * s) | (*w1 as u32) << (2 * s + 1))
            .sum()
    }

    /// Injective key, independent of the budget a template was enumerated
    /// under. Seeds derived from it make results comparable across budgets.
    pub fn key(&self) -> u64 {
        let orient: u64 = self
            .cnots
            .iter()
            .enumerate()
            .map(|(i, &t)| (t as u64) << i)
            .sum();
        self.cnots.len() as u64 | orient << 3 | (self.slot_mask() as u64) << 11
    }

    /// Slots in time order as `(segment, wire)`.
    pub fn slot_positions(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.slot_count());
        for (s, occupied) in self.slots.iter().enumerate() {
            for (wire, &on) in occupied.iter().enumerate() {
                if on {
                    out.push((s, wire));
                }
            }
        }
        out
    }

    /// Builds the circuit with the given single-qubit gates, one per slot
    /// in [`Template::slot_positions`] order.
    pub fn instantiate(&self, gates: &[crate::matrix::Mat2]) -> Circuit {
        assert_eq!(gates.len(), self.slot_count());
        let mut c = Circuit::new();
        let mut next = gates.iter();
        for (s, occupied) in self.slots.iter().enumerate() {
            for (wire, &on) in occupied.iter().enumerate() {
                if on {
                    c = c.single(wire, "custom", *next.next().unwrap());
                }
            }
            if let Some(&target) = self.cnots.get(s) {
                c = c.cnot(1 - target, target);
            }
        }
        c
    }
}

/// Every template with at most `k` gates: `2^c` orientations for `c` CNOTs
/// and every slot subset of size at most `k − c` among the `2(c + 1)`
/// positions. Ordered by CNOT count, then orientation, then slot mask.
pub fn enumerate_templates(k: usize) -> Result<Vec<Template>> {
    if k > MAX_BUDGET {
        return Err(Error::BudgetOutOfRange(k));
    }
    let mut out = Vec::new();
    for c in 0..=k {
        for orient in 0u32..(1 << c) {
            let cnots: Vec<usize> = (0..c).map(|i| (orient >> i & 1) as usize).collect();
            for mask in 0u32..(1 << (2 * (c + 1))) {
                if mask.count_ones() as usize <= k - c {
                    out.push(Template::from_mask(cnots.clone(), mask));
                }
            }
        }
    }
    Ok(out)
}

/// `Σ_c 2^c Σ_{s ≤ k−c} C(2(c+1), s)`.
pub fn template_count(k: usize) -> usize {
    fn binom(n: usize, r: usize) -> usize {
        if r > n {
            return 0;
        }
        (0..r).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }
    (0..=k)
        .map(|c| (1usize << c) * (0..=k - c).map(|s| binom(2 * (c + 1), s)).sum::<usize>())
        .sum()
}
