//! Structural measures: depth, size, alternations, output cones, fanin.

use super::{Circuit, Gate};

/// Structural measurements of a circuit.
///
/// * `depth`: longest path from a leaf to an output, leaves at depth 0.
/// * `size`: number of AND, OR and NOT gates (INPUT and CONST leaves are
///   not counted).
/// * `alternations`: maximum number of same-type AND/OR blocks along any
///   leaf-to-output path after pushing negations to the leaves. A balanced
///   AND tree has one alternation; a path with no AND/OR gate has zero.
/// * `cone_sizes`: per output, the number of distinct input bits it reads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircuitMetrics {
    pub depth: usize,
    pub size: usize,
    pub alternations: usize,
    pub cone_sizes: Vec<usize>,
}

impl CircuitMetrics {
    pub fn max_cone(&self) -> usize {
        self.cone_sizes.iter().copied().max().unwrap_or(0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    And,
    Or,
}

/// Effective type of a gate when read with the given polarity.
fn effective(gate: &Gate, negated: bool) -> Option<Kind> {
    match (gate, negated) {
        (Gate::And(..), false) | (Gate::Or(..), true) => Some(Kind::And),
        (Gate::Or(..), false) | (Gate::And(..), true) => Some(Kind::Or),
        _ => None,
    }
}

/// Resolves NOT chains: the first non-NOT gate below `g` and its polarity.
fn strip_nots(c: &Circuit, mut g: usize, mut negated: bool) -> (usize, bool) {
    while let Gate::Not(a) = c.gates[g] {
        g = a;
        negated = !negated;
    }
    (g, negated)
}

pub(super) fn compute(c: &Circuit) -> CircuitMetrics {
    let size = c.gates.iter().filter(|g| !g.is_leaf()).count();
    CircuitMetrics {
        depth: c.depth(),
        size,
        alternations: alternations(c),
        cone_sizes: cone_sizes(c),
    }
}

pub(super) fn alternations(c: &Circuit) -> usize {
    // blocks[g][pol]: max AND/OR block count on any path ending at g read
    // with polarity pol.
    let mut blocks = vec![[0usize; 2]; c.gates.len()];
    for (id, gate) in c.gates.iter().enumerate() {
        for pol in [false, true] {
            blocks[id][pol as usize] = match *gate {
                Gate::Input(_) | Gate::Const(_) => 0,
                Gate::Not(a) => blocks[a][!pol as usize],
                Gate::And(a, b) | Gate::Or(a, b) => {
                    let kind = effective(gate, pol);
                    [a, b]
                        .into_iter()
                        .map(|child| {
                            let (leaf, cpol) = strip_nots(c, child, pol);
                            let count = blocks[child][pol as usize];
                            if effective(&c.gates[leaf], cpol) == kind {
                                count
                            } else {
                                count + 1
                            }
                        })
                        .max()
                        .unwrap_or(1)
                }
            };
        }
    }
    c.outputs.iter().map(|&o| blocks[o][0]).max().unwrap_or(0)
}

pub(super) fn cone_sizes(c: &Circuit) -> Vec<usize> {
    let mut gate_stamp = vec![usize::MAX; c.gates.len()];
    // Parsed circuits may repeat an input index across gates; count indices.
    let mut input_stamp = vec![usize::MAX; c.num_inputs];
    let mut stack = Vec::new();
    c.outputs
        .iter()
        .enumerate()
        .map(|(k, &out)| {
            let mut count = 0;
            stack.push(out);
            while let Some(g) = stack.pop() {
                if std::mem::replace(&mut gate_stamp[g], k) == k {
                    continue;
                }
                match c.gates[g] {
                    Gate::Input(i) => {
                        if std::mem::replace(&mut input_stamp[i], k) != k {
                            count += 1;
                        }
                    }
                    gate => stack.extend(gate.operands()),
                }
            }
            count
        })
        .collect()
}

/// Effective fanin of AND and OR blocks in the negation-pushed view.
///
/// Chains of same-type gates are merged into one unbounded-fanin gate; the
/// fanin of the merged gate is the number of operands entering the block
/// (counted with multiplicity).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FaninProfile {
    pub max_and_fanin: usize,
    pub max_or_fanin: usize,
}

pub fn fanin_profile(c: &Circuit) -> FaninProfile {
    let n = c.gates.len();
    // Which (gate, polarity) pairs are actually read from some output.
    let mut used = vec![[false; 2]; n];
    for &o in &c.outputs {
        used[o][0] = true;
    }
    for id in (0..n).rev() {
        for pol in [false, true] {
            if !used[id][pol as usize] {
                continue;
            }
            match c.gates[id] {
                Gate::Not(a) => used[a][!pol as usize] = true,
                Gate::And(a, b) | Gate::Or(a, b) => {
                    used[a][pol as usize] = true;
                    used[b][pol as usize] = true;
                }
                _ => {}
            }
        }
    }

    let mut fanin = vec![[0usize; 2]; n];
    let mut profile = FaninProfile::default();
    for (id, gate) in c.gates.iter().enumerate() {
        for pol in [false, true] {
            let Some(kind) = effective(gate, pol) else {
                continue;
            };
            let (Gate::And(a, b) | Gate::Or(a, b)) = *gate else {
                unreachable!()
            };
            let total: usize = [a, b]
                .into_iter()
                .map(|child| {
                    let (inner, cpol) = strip_nots(c, child, pol);
                    if effective(&c.gates[inner], cpol) == Some(kind) {
                        fanin[inner][cpol as usize]
                    } else {
                        1
                    }
                })
                .sum();
            fanin[id][pol as usize] = total;
            if used[id][pol as usize] {
                match kind {
                    Kind::And => profile.max_and_fanin = profile.max_and_fanin.max(total),
                    Kind::Or => profile.max_or_fanin = profile.max_or_fanin.max(total),
                }
            }
        }
    }
    profile
}

/// True when every NOT gate reads an INPUT or CONST leaf.
pub fn negations_only_on_literals(c: &Circuit) -> bool {
    c.gates.iter().all(|g| match *g {
        Gate::Not(a) => c.gates[a].is_leaf(),
        _ => true,
    })
}

#[cfg(test)]
mod tests {
    use super::super::Builder;
    use super::*;

    #[test]
    fn single_input_has_depth_zero() {
        let mut b = Builder::new(1);
        let x = b.input(0);
        let m = b.finish(vec![x]).metrics();
        assert_eq!(m.depth, 0);
        assert_eq!(m.size, 0);
        assert_eq!(m.alternations, 0);
        assert_eq!(m.cone_sizes, vec![1]);
    }

    #[test]
    fn balanced_and_tree() {
        let mut b = Builder::new(8);
        let v = b.inputs(0..8);
        let t = b.and_all(&v);
        let m = b.finish(vec![t]).metrics();
        assert_eq!(m.depth, 3);
        assert_eq!(m.size, 7);
        assert_eq!(m.alternations, 1);
        assert_eq!(m.cone_sizes, vec![8]);
    }

    #[test]
    fn not_between_two_ands_counts_as_a_switch() {
        let mut b = Builder::new(3);
        let v = b.inputs(0..3);
        let inner = b.and(v[0], v[1]);
        let neg = b.not(inner);
        let outer = b.and(neg, v[2]);
        let m = b.finish(vec![outer]).metrics();
        assert_eq!(m.alternations, 2);
        assert_eq!(m.depth, 3);

        // Double negation is transparent.
        let mut b = Builder::new(3);
        let v = b.inputs(0..3);
        let inner = b.push(Gate::And(v[0], v[1]));
        let n1 = b.push(Gate::Not(inner));
        let n2 = b.push(Gate::Not(n1));
        let outer = b.push(Gate::And(n2, v[2]));
        let m = b.finish(vec![outer]).metrics();
        assert_eq!(m.alternations, 1);
    }

    #[test]
    fn dnf_has_two_alternations() {
        let mut b = Builder::new(4);
        let v = b.inputs(0..4);
        let t1 = b.and(v[0], v[1]);
        let nv = b.not(v[2]);
        let t2 = b.and(nv, v[3]);
        let o = b.or(t1, t2);
        let c = b.finish(vec![o]);
        let m = c.metrics();
        assert_eq!(m.alternations, 2);
        assert!(negations_only_on_literals(&c));
        let f = fanin_profile(&c);
        assert_eq!(f.max_or_fanin, 2);
        assert_eq!(f.max_and_fanin, 2);
    }

    #[test]
    fn fanin_profile_merges_chains() {
        let mut b = Builder::new(6);
        let v = b.inputs(0..6);
        let big_and = b.and_all(&v);
        let c = b.finish(vec![big_and]);
        assert_eq!(
            fanin_profile(&c),
            FaninProfile {
                max_and_fanin: 6,
                max_or_fanin: 0
            }
        );
    }

    #[test]
    fn negation_above_gate_is_flagged() {
        let mut b = Builder::new(2);
        let v = b.inputs(0..2);
        let a = b.and(v[0], v[1]);
        let n = b.not(a);
        let c = b.finish(vec![n]);
        assert!(!negations_only_on_literals(&c));
    }
}
