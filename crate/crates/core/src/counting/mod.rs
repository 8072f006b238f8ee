//! Proof systems for threshold (`≥ t` ones) and exact-count (`= t` ones)
//! languages.
//!
//! The interval tree is built over the positions `(0, n]`. Each internal
//! node other than the root carries a claimed number of ones in its span,
//! stored in `⌈log2(j−i+1)⌉` bits and clamped to `j−i`. Leaves stand for
//! the word bits themselves and the root for `t`.
//!
//! Threshold: a node is consistent when its count is at most the sum of its
//! children's; position `k` outputs `a_k` when its path is consistent and 1
//! otherwise. Exact count: a node is consistent when its count equals the
//! sum; on an inconsistent path, with `(p, q]` the topmost inconsistent
//! node and `L` its count, position `k` outputs `[k − p ≤ L]`.

mod arith;

use std::fmt::Write;

use crate::bits::{ceil_log2, popcount, read_msb_first, write_msb_first};
use crate::circuit::{Builder, Circuit, GateId};
use crate::error::{Error, Result};
use crate::interval::IntervalTree;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountKind {
    Threshold,
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountSlot {
    pub lo: usize,
    pub hi: usize,
    pub offset: usize,
    pub bits: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountLayout {
    pub word_len: usize,
    pub slots: Vec<CountSlot>,
    pub num_inputs: usize,
    // slot index per tree node (None for the root and leaves)
    slot_of: Vec<Option<usize>>,
}

impl CountLayout {
    pub fn new(n: usize) -> Self {
        let tree = IntervalTree::new(n);
        Self::for_tree(&tree)
    }

    fn for_tree(tree: &IntervalTree) -> Self {
        let n = tree.len();
        let mut slots = Vec::new();
        let mut slot_of = vec![None; tree.nodes().len()];
        let mut offset = n;
        for (v, node) in tree.nodes().iter().enumerate() {
            if v == tree.root() || node.is_leaf() {
                continue;
            }
            let bits = ceil_log2(node.len() + 1);
            slot_of[v] = Some(slots.len());
            slots.push(CountSlot {
                lo: node.lo,
                hi: node.hi,
                offset,
                bits,
            });
            offset += bits;
        }
        CountLayout {
            word_len: n,
            slots,
            num_inputs: offset,
            slot_of,
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("word 0 {}\n", self.word_len);
        for slot in &self.slots {
            writeln!(s, "count {} {} {} {}", slot.lo, slot.hi, slot.offset, slot.bits).unwrap();
        }
        s
    }
}

fn check_params(kind: CountKind, n: usize, t: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Parameter("counting systems need n >= 1".into()));
    }
    let ok = match kind {
        CountKind::Threshold => (1..=n).contains(&t),
        CountKind::Exact => t <= n,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Parameter(format!("t = {t} is out of range for n = {n}")))
    }
}

/// Claimed count of every tree node under a proof (clamped), with leaves
/// reading the word and the root fixed to `t`.
pub fn node_counts(tree: &IntervalTree, layout: &CountLayout, t: usize, proof: &[bool]) -> Vec<usize> {
    tree.nodes()
        .iter()
        .enumerate()
        .map(|(v, node)| {
            if v == tree.root() {
                t
            } else if node.is_leaf() {
                proof[node.lo] as usize
            } else {
                let s = layout.slots[layout.slot_of[v].unwrap()];
                read_msb_first(&proof[s.offset..s.offset + s.bits]).min(node.len())
            }
        })
        .collect()
}

fn synth(kind: CountKind, n: usize, t: usize) -> Result<(Circuit, CountLayout)> {
    check_params(kind, n, t)?;
    let tree = IntervalTree::new(n);
    let layout = CountLayout::for_tree(&tree);
    let nodes = tree.nodes();
    let root = tree.root();
    let mut b = Builder::new(layout.num_inputs);
    let word: Vec<GateId> = b.inputs(0..n);

    // Counts as little-endian gate vectors.
    let counts: Vec<Vec<GateId>> = (0..nodes.len())
        .map(|v| {
            let node = &nodes[v];
            if v == root {
                arith::constant(&mut b, t, ceil_log2(n + 1).max(1))
            } else if node.is_leaf() {
                vec![word[node.lo]]
            } else {
                let s = layout.slots[layout.slot_of[v].unwrap()];
                let mut raw = b.inputs(s.offset..s.offset + s.bits);
                raw.reverse();
                arith::clamp(&mut b, &raw, node.len())
            }
        })
        .collect();

    let cons: Vec<GateId> = (0..nodes.len())
        .map(|v| match nodes[v].children {
            Some((l, r)) => {
                let sum = arith::add(&mut b, &counts[l], &counts[r]);
                match kind {
                    CountKind::Threshold => arith::less_equal(&mut b, &counts[v], &sum),
                    CountKind::Exact => arith::equal(&mut b, &counts[v], &sum),
                }
            }
            // A leaf is only checked when it is also the root (n = 1).
            None if v == root => {
                let a = vec![word[0]];
                match kind {
                    CountKind::Threshold => arith::less_equal(&mut b, &counts[v], &a),
                    CountKind::Exact => arith::equal(&mut b, &counts[v], &a),
                }
            }
            None => b.constant(true),
        })
        .collect();

    // full[v]: every node from v up to the root is consistent.
    let full: Vec<GateId> = (0..nodes.len())
        .map(|v| {
            let path: Vec<GateId> = tree.path_to_root(v).into_iter().map(|u| cons[u]).collect();
            b.and_all(&path)
        })
        .collect();

    let mut outputs = Vec::with_capacity(n);
    for k in 1..=n {
        let leaf = tree.leaf(k);
        let y = match kind {
            CountKind::Threshold => {
                let bad = b.not(full[leaf]);
                b.or(word[k - 1], bad)
            }
            CountKind::Exact => {
                let path = tree.path_to_root(leaf);
                let mut terms = vec![b.and(word[k - 1], full[leaf])];
                for (h, &u) in path.iter().enumerate() {
                    if nodes[u].is_leaf() && u != root {
                        continue;
                    }
                    let above = match path.get(h + 1) {
                        Some(&parent) => full[parent],
                        None => b.constant(true),
                    };
                    let bad = b.not(cons[u]);
                    let offset = arith::constant(&mut b, k - nodes[u].lo, ceil_log2(n + 1).max(1));
                    let fill = arith::less_equal(&mut b, &offset, &counts[u]);
                    terms.push(b.and_all(&[bad, above, fill]));
                }
                b.or_all(&terms)
            }
        };
        outputs.push(y);
    }
    Ok((b.finish(outputs), layout))
}

/// Proof system for words of length `n` with at least `t` ones.
pub fn synth_threshold(n: usize, t: usize) -> Result<(Circuit, CountLayout)> {
    synth(CountKind::Threshold, n, t)
}

/// Proof system for words of length `n` with exactly `t` ones.
pub fn synth_exact_count(n: usize, t: usize) -> Result<(Circuit, CountLayout)> {
    synth(CountKind::Exact, n, t)
}

/// Honest proof: the word and the true number of ones under every node.
pub fn witness_count(kind: CountKind, n: usize, t: usize, word: &[bool]) -> Result<Vec<bool>> {
    check_params(kind, n, t)?;
    if word.len() != n {
        return Err(Error::Witness(format!(
            "expected a word of length {n}, got {}",
            word.len()
        )));
    }
    let ones = popcount(word);
    let member = match kind {
        CountKind::Threshold => ones >= t,
        CountKind::Exact => ones == t,
    };
    if !member {
        return Err(Error::Witness(format!(
            "word has {ones} ones, outside the language for t = {t}"
        )));
    }
    let layout = CountLayout::new(n);
    let mut proof = vec![false; layout.num_inputs];
    proof[..n].copy_from_slice(word);
    for s in &layout.slots {
        write_msb_first(popcount(&word[s.lo..s.hi]), &mut proof[s.offset..s.offset + s.bits]);
    }
    Ok(proof)
}
