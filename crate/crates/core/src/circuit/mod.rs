//! Bounded-fanin boolean circuits over AND/OR/NOT.
//!
//! A [`Circuit`] is a gate list in topological order (every operand id is
//! smaller than the id of the gate reading it) plus an ordered list of
//! output gates. Circuits are immutable once built; [`Builder`] is the only
//! way to grow one besides [`parse`].
//!
//! Depth convention: INPUT and CONST gates sit at depth 0 and every AND, OR
//! or NOT gate adds one level.

mod metrics;
mod table;
pub(crate) mod text;

pub use metrics::{fanin_profile, negations_only_on_literals, CircuitMetrics, FaninProfile};
pub use table::{tabulate, table_to_subcircuit};
pub use text::{parse, serialize};

use std::collections::HashMap;

use crate::error::{Error, Result};

pub type GateId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gate {
    Input(usize),
    Const(bool),
    Not(GateId),
    And(GateId, GateId),
    Or(GateId, GateId),
}

impl Gate {
    /// Operand ids, in order.
    pub fn operands(&self) -> impl Iterator<Item = GateId> {
        let (a, b) = match *self {
            Gate::Input(_) | Gate::Const(_) => (None, None),
            Gate::Not(a) => (Some(a), None),
            Gate::And(a, b) | Gate::Or(a, b) => (Some(a), Some(b)),
        };
        a.into_iter().chain(b)
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Gate::Input(_) | Gate::Const(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    num_inputs: usize,
    gates: Vec<Gate>,
    outputs: Vec<GateId>,
}

impl Circuit {
    /// Assembles a circuit from raw parts, checking every structural invariant.
    pub fn from_parts(num_inputs: usize, gates: Vec<Gate>, outputs: Vec<GateId>) -> Result<Self> {
        for (id, gate) in gates.iter().enumerate() {
            if let Gate::Input(i) = *gate {
                if i >= num_inputs {
                    return Err(Error::Structure(format!(
                        "gate {id} reads input {i} but the circuit has {num_inputs} inputs"
                    )));
                }
            }
            for op in gate.operands() {
                if op >= id {
                    return Err(Error::Structure(format!(
                        "gate {id} references gate {op}, which is not an earlier gate"
                    )));
                }
            }
        }
        if let Some(&bad) = outputs.iter().find(|&&o| o >= gates.len()) {
            return Err(Error::Structure(format!("output references missing gate {bad}")));
        }
        Ok(Circuit {
            num_inputs,
            gates,
            outputs,
        })
    }

    pub fn num_inputs(&self) -> usize {
        self.num_inputs
    }

    pub fn num_outputs(&self) -> usize {
        self.outputs.len()
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn outputs(&self) -> &[GateId] {
        &self.outputs
    }

    pub fn eval(&self, x: &[bool]) -> Result<Vec<bool>> {
        Evaluator::new(self).eval(x)
    }

    /// Bit-sliced evaluation: lane `l` of `x[i]` is input bit `i` of the
    /// `l`-th of 64 independent proofs. Returns one word per output.
    pub fn eval_packed(&self, x: &[u64]) -> Result<Vec<u64>> {
        Evaluator::new(self).eval_packed(x)
    }

    pub fn metrics(&self) -> CircuitMetrics {
        metrics::compute(self)
    }

    /// Alternation count alone; cheaper than [`Circuit::metrics`].
    pub fn alternations(&self) -> usize {
        metrics::alternations(self)
    }

    /// Per-output cone sizes alone.
    pub fn cone_sizes(&self) -> Vec<usize> {
        metrics::cone_sizes(self)
    }

    /// Per-gate depth under the leaf-is-zero convention.
    pub fn gate_depths(&self) -> Vec<usize> {
        let mut depth = vec![0usize; self.gates.len()];
        for (id, gate) in self.gates.iter().enumerate() {
            depth[id] = gate.operands().map(|o| depth[o] + 1).max().unwrap_or(0);
        }
        depth
    }

    /// Maximum depth over the output gates.
    pub fn depth(&self) -> usize {
        let depth = self.gate_depths();
        self.outputs.iter().map(|&o| depth[o]).max().unwrap_or(0)
    }

    /// Sorted input indices in the cone of `output`.
    pub fn cone(&self, output: usize) -> Vec<usize> {
        let mut seen = vec![false; self.gates.len()];
        let mut inputs = Vec::new();
        let mut stack = vec![self.outputs[output]];
        while let Some(g) = stack.pop() {
            if std::mem::replace(&mut seen[g], true) {
                continue;
            }
            match self.gates[g] {
                Gate::Input(i) => inputs.push(i),
                gate => stack.extend(gate.operands()),
            }
        }
        inputs.sort_unstable();
        inputs.dedup();
        inputs
    }
}

/// Reusable evaluation scratch space bound to one circuit.
///
/// Each thread evaluating a shared circuit should own its evaluator.
pub struct Evaluator<'c> {
    circuit: &'c Circuit,
    values: Vec<bool>,
    packed: Vec<u64>,
}

impl<'c> Evaluator<'c> {
    pub fn new(circuit: &'c Circuit) -> Self {
        Evaluator {
            circuit,
            values: Vec::new(),
            packed: Vec::new(),
        }
    }

    pub fn eval(&mut self, x: &[bool]) -> Result<Vec<bool>> {
        let c = self.circuit;
        if x.len() != c.num_inputs {
            return Err(Error::InputArity {
                expected: c.num_inputs,
                got: x.len(),
            });
        }
        self.values.clear();
        self.values.reserve(c.gates.len());
        for gate in &c.gates {
            let v = match *gate {
                Gate::Input(i) => x[i],
                Gate::Const(b) => b,
                Gate::Not(a) => !self.values[a],
                Gate::And(a, b) => self.values[a] & self.values[b],
                Gate::Or(a, b) => self.values[a] | self.values[b],
            };
            self.values.push(v);
        }
        Ok(c.outputs.iter().map(|&o| self.values[o]).collect())
    }

    pub fn eval_packed(&mut self, x: &[u64]) -> Result<Vec<u64>> {
        let mut out = vec![0u64; self.circuit.outputs.len()];
        self.eval_packed_into(x, &mut out)?;
        Ok(out)
    }

    pub fn eval_packed_into(&mut self, x: &[u64], out: &mut [u64]) -> Result<()> {
        let c = self.circuit;
        if x.len() != c.num_inputs {
            return Err(Error::InputArity {
                expected: c.num_inputs,
                got: x.len(),
            });
        }
        self.packed.clear();
        self.packed.reserve(c.gates.len());
        for gate in &c.gates {
            let v = match *gate {
                Gate::Input(i) => x[i],
                Gate::Const(b) => {
                    if b {
                        u64::MAX
                    } else {
                        0
                    }
                }
                Gate::Not(a) => !self.packed[a],
                Gate::And(a, b) => self.packed[a] & self.packed[b],
                Gate::Or(a, b) => self.packed[a] | self.packed[b],
            };
            self.packed.push(v);
        }
        for (slot, &o) in out.iter_mut().zip(&c.outputs) {
            *slot = self.packed[o];
        }
        Ok(())
    }
}

/// Incremental circuit construction.
///
/// The `and`/`or`/`not` helpers fold constants and trivial identities, and
/// leaves are shared (one gate per input index and per constant). [`Builder::push`]
/// appends a gate verbatim.
#[derive(Debug, Clone, Default)]
pub struct Builder {
    num_inputs: usize,
    gates: Vec<Gate>,
    input_gate: HashMap<usize, GateId>,
    const_gate: [Option<GateId>; 2],
    not_cache: HashMap<GateId, GateId>,
}

impl Builder {
    pub fn new(num_inputs: usize) -> Self {
        Builder {
            num_inputs,
            ..Default::default()
        }
    }

    pub fn num_inputs(&self) -> usize {
        self.num_inputs
    }

    /// Reserves `count` fresh input indices and returns the first.
    pub fn add_inputs(&mut self, count: usize) -> usize {
        let first = self.num_inputs;
        self.num_inputs += count;
        first
    }

    pub fn gate(&self, id: GateId) -> Gate {
        self.gates[id]
    }

    pub fn num_gates(&self) -> usize {
        self.gates.len()
    }

    /// Appends `gate` without any simplification.
    pub fn push(&mut self, gate: Gate) -> GateId {
        debug_assert!(gate.operands().all(|o| o < self.gates.len()));
        self.gates.push(gate);
        self.gates.len() - 1
    }

    pub fn input(&mut self, i: usize) -> GateId {
        assert!(i < self.num_inputs, "input {i} out of range");
        if let Some(&g) = self.input_gate.get(&i) {
            return g;
        }
        let g = self.push(Gate::Input(i));
        self.input_gate.insert(i, g);
        g
    }

    pub fn inputs(&mut self, range: std::ops::Range<usize>) -> Vec<GateId> {
        range.map(|i| self.input(i)).collect()
    }

    pub fn constant(&mut self, b: bool) -> GateId {
        if let Some(g) = self.const_gate[b as usize] {
            return g;
        }
        let g = self.push(Gate::Const(b));
        self.const_gate[b as usize] = Some(g);
        g
    }

    fn const_value(&self, g: GateId) -> Option<bool> {
        match self.gates[g] {
            Gate::Const(b) => Some(b),
            _ => None,
        }
    }

    pub fn not(&mut self, a: GateId) -> GateId {
        match self.gates[a] {
            Gate::Const(b) => return self.constant(!b),
            Gate::Not(inner) => return inner,
            _ => {}
        }
        if let Some(&g) = self.not_cache.get(&a) {
            return g;
        }
        let g = self.push(Gate::Not(a));
        self.not_cache.insert(a, g);
        g
    }

    pub fn and(&mut self, a: GateId, b: GateId) -> GateId {
        match (self.const_value(a), self.const_value(b)) {
            (Some(false), _) | (_, Some(false)) => self.constant(false),
            (Some(true), _) => b,
            (_, Some(true)) => a,
            _ if a == b => a,
            _ => self.push(Gate::And(a, b)),
        }
    }

    pub fn or(&mut self, a: GateId, b: GateId) -> GateId {
        match (self.const_value(a), self.const_value(b)) {
            (Some(true), _) | (_, Some(true)) => self.constant(true),
            (Some(false), _) => b,
            (_, Some(false)) => a,
            _ if a == b => a,
            _ => self.push(Gate::Or(a, b)),
        }
    }

    /// `(a ∨ b) ∧ ¬(a ∧ b)`
    pub fn xor(&mut self, a: GateId, b: GateId) -> GateId {
        let either = self.or(a, b);
        let both = self.and(a, b);
        let not_both = self.not(both);
        self.and(either, not_both)
    }

    pub fn xnor(&mut self, a: GateId, b: GateId) -> GateId {
        let x = self.xor(a, b);
        self.not(x)
    }

    /// `sel ? when_true : when_false`
    pub fn mux(&mut self, sel: GateId, when_true: GateId, when_false: GateId) -> GateId {
        let t = self.and(sel, when_true);
        let ns = self.not(sel);
        let f = self.and(ns, when_false);
        self.or(t, f)
    }

    /// Balanced AND tree; the empty conjunction is CONST 1.
    pub fn and_all(&mut self, items: &[GateId]) -> GateId {
        self.balanced(items, true)
    }

    /// Balanced OR tree; the empty disjunction is CONST 0.
    pub fn or_all(&mut self, items: &[GateId]) -> GateId {
        self.balanced(items, false)
    }

    /// Balanced XOR tree; the empty parity is CONST 0.
    pub fn xor_all(&mut self, items: &[GateId]) -> GateId {
        match items.len() {
            0 => self.constant(false),
            1 => items[0],
            len => {
                let (l, r) = items.split_at(len / 2);
                let a = self.xor_all(l);
                let b = self.xor_all(r);
                self.xor(a, b)
            }
        }
    }

    fn balanced(&mut self, items: &[GateId], conj: bool) -> GateId {
        match items.len() {
            0 => self.constant(conj),
            1 => items[0],
            len => {
                let (l, r) = items.split_at(len / 2);
                let a = self.balanced(l, conj);
                let b = self.balanced(r, conj);
                if conj {
                    self.and(a, b)
                } else {
                    self.or(a, b)
                }
            }
        }
    }

    /// Copies `c` into this builder with its input `i` wired to
    /// `input_map[i]`; returns the gate ids of `c`'s outputs.
    pub fn embed(&mut self, c: &Circuit, input_map: &[GateId]) -> Vec<GateId> {
        assert_eq!(input_map.len(), c.num_inputs(), "embed: input map arity");
        let mut ids = Vec::with_capacity(c.gates.len());
        for gate in &c.gates {
            let id = match *gate {
                Gate::Input(i) => input_map[i],
                Gate::Const(b) => self.constant(b),
                Gate::Not(a) => self.not(ids[a]),
                Gate::And(a, b) => self.and(ids[a], ids[b]),
                Gate::Or(a, b) => self.or(ids[a], ids[b]),
            };
            ids.push(id);
        }
        c.outputs.iter().map(|&o| ids[o]).collect()
    }

    pub fn finish(self, outputs: Vec<GateId>) -> Circuit {
        assert!(outputs.iter().all(|&o| o < self.gates.len()));
        Circuit {
            num_inputs: self.num_inputs,
            gates: self.gates,
            outputs,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_constant_circuits() {
        let mut b = Builder::new(1);
        let x = b.input(0);
        let c = b.finish(vec![x]);
        assert_eq!(c.eval(&[true]).unwrap(), vec![true]);

        let mut b = Builder::new(0);
        let z = b.constant(false);
        let c = b.finish(vec![z, z, z]);
        assert_eq!(c.eval(&[]).unwrap(), vec![false; 3]);
    }

    #[test]
    fn arity_mismatch_is_an_error() {
        let c = Builder::new(2).finish(vec![]);
        assert_eq!(
            c.eval(&[true]),
            Err(Error::InputArity {
                expected: 2,
                got: 1
            })
        );
    }

    #[test]
    fn from_parts_rejects_forward_references() {
        let err = Circuit::from_parts(1, vec![Gate::Not(0)], vec![0]).unwrap_err();
        assert!(matches!(err, Error::Structure(_)));
        let err = Circuit::from_parts(1, vec![Gate::Input(3)], vec![0]).unwrap_err();
        assert!(matches!(err, Error::Structure(_)));
    }

    #[test]
    fn xor_mux_and_trees_match_truth_tables() {
        let mut b = Builder::new(3);
        let v = b.inputs(0..3);
        let x = b.xor(v[0], v[1]);
        let m = b.mux(v[0], v[1], v[2]);
        let all = b.and_all(&v);
        let any = b.or_all(&v);
        let par = b.xor_all(&v);
        let c = b.finish(vec![x, m, all, any, par]);
        for bits in 0..8u32 {
            let x: Vec<bool> = (0..3).map(|i| bits >> i & 1 == 1).collect();
            let out = c.eval(&x).unwrap();
            assert_eq!(out[0], x[0] ^ x[1]);
            assert_eq!(out[1], if x[0] { x[1] } else { x[2] });
            assert_eq!(out[2], x.iter().all(|&v| v));
            assert_eq!(out[3], x.iter().any(|&v| v));
            assert_eq!(out[4], x.iter().filter(|&&v| v).count() % 2 == 1);
        }
    }

    #[test]
    fn packed_eval_agrees_with_scalar_eval() {
        let mut b = Builder::new(4);
        let v = b.inputs(0..4);
        let x = b.xor(v[0], v[3]);
        let y = b.mux(v[1], x, v[2]);
        let c = b.finish(vec![x, y]);
        let mut lanes = vec![0u64; 4];
        for l in 0..16u64 {
            for (i, lane) in lanes.iter_mut().enumerate() {
                *lane |= (l >> i & 1) << l;
            }
        }
        let packed = c.eval_packed(&lanes).unwrap();
        for l in 0..16u64 {
            let x: Vec<bool> = (0..4).map(|i| l >> i & 1 == 1).collect();
            let out = c.eval(&x).unwrap();
            for (k, &o) in out.iter().enumerate() {
                assert_eq!(o, packed[k] >> l & 1 == 1);
            }
        }
    }

    #[test]
    fn cone_lists_reachable_inputs() {
        let mut b = Builder::new(5);
        let v = b.inputs(0..5);
        let a = b.and(v[4], v[1]);
        let o = b.or(a, v[1]);
        let c = b.finish(vec![o, v[3]]);
        assert_eq!(c.cone(0), vec![1, 4]);
        assert_eq!(c.cone(1), vec![3]);
    }

    #[test]
    fn embed_remaps_inputs() {
        let mut inner = Builder::new(2);
        let v = inner.inputs(0..2);
        let x = inner.xor(v[0], v[1]);
        let inner = inner.finish(vec![x]);

        let mut outer = Builder::new(3);
        let w = outer.inputs(0..3);
        let out = outer.embed(&inner, &[w[2], w[0]]);
        let c = outer.finish(out);
        assert_eq!(c.eval(&[true, false, false]).unwrap(), vec![true]);
        assert_eq!(c.eval(&[true, false, true]).unwrap(), vec![false]);
    }
}
