//! SAC⁰ and co-SAC⁰ proof systems from NP verifier circuits.
//!
//! The proof holds a candidate `x`, a certificate `y` and a claimed value
//! `z_g` for every NOT/AND/OR gate of the verifier. Gates reading an input
//! or a constant use that value directly. The co-SAC⁰ system outputs `x`
//! when every claimed value is locally consistent and the output gate is
//! claimed true, and `0^n` otherwise; the SAC⁰ system dually falls back to
//! `1^n`.

use crate::circuit::{self, table_to_subcircuit, tabulate, Builder, Circuit, Gate, GateId};
use crate::error::{Error, Result};

/// A single-output circuit reading `x` (the first `n` inputs) and a
/// certificate `y` (the next `p`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifierCircuit {
    circuit: Circuit,
    n: usize,
    p: usize,
}

impl VerifierCircuit {
    pub fn new(circuit: Circuit, n: usize, p: usize) -> Result<Self> {
        if circuit.num_outputs() != 1 {
            return Err(Error::Structure(format!(
                "a verifier has one output, found {}",
                circuit.num_outputs()
            )));
        }
        if circuit.num_inputs() != n + p {
            return Err(Error::Structure(format!(
                "split {n} + {p} does not match {} circuit inputs",
                circuit.num_inputs()
            )));
        }
        Ok(VerifierCircuit { circuit, n, p })
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// Indices of the NOT/AND/OR gates, i.e. the gates carrying a `z` bit.
    pub fn logic_gates(&self) -> Vec<usize> {
        (0..self.circuit.gates().len())
            .filter(|&g| !self.circuit.gates()[g].is_leaf())
            .collect()
    }

    pub fn accepts(&self, x: &[bool], y: &[bool]) -> bool {
        let input = [x, y].concat();
        self.circuit.eval(&input).expect("arity checked")[0]
    }

    /// Smallest certificate (as a little-endian counter) accepting `x`.
    pub fn certificate(&self, x: &[bool]) -> Option<Vec<bool>> {
        assert!(self.p < 64, "certificate search needs p < 64");
        (0..1u64 << self.p)
            .map(|v| (0..self.p).map(|i| v >> i & 1 == 1).collect::<Vec<_>>())
            .find(|y| self.accepts(x, y))
    }

    pub fn in_language(&self, x: &[bool]) -> bool {
        x.len() == self.n && self.certificate(x).is_some()
    }

    /// Values of every gate on input `x·y`.
    pub fn gate_values(&self, x: &[bool], y: &[bool]) -> Vec<bool> {
        let input = [x, y].concat();
        let mut vals: Vec<bool> = Vec::with_capacity(self.circuit.gates().len());
        for gate in self.circuit.gates() {
            let v = match *gate {
                Gate::Input(i) => input[i],
                Gate::Const(b) => b,
                Gate::Not(a) => !vals[a],
                Gate::And(a, b) => vals[a] && vals[b],
                Gate::Or(a, b) => vals[a] || vals[b],
            };
            vals.push(v);
        }
        vals
    }

    /// Serialized circuit preceded by a `split <n> <p>` line.
    pub fn to_text(&self) -> String {
        format!("split {} {}\n{}", self.n, self.p, circuit::serialize(&self.circuit))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let lines: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l))
            .filter(|(_, l)| !l.trim().is_empty())
            .collect();
        let (line, first) = *lines
            .first()
            .ok_or_else(|| Error::parse(1, "empty verifier file"))?;
        let toks: Vec<&str> = first.split_whitespace().collect();
        if toks.len() != 3 || toks[0] != "split" {
            return Err(Error::parse(line, "expected `split <n> <p>`"));
        }
        let num = |t: &str| {
            t.parse::<usize>()
                .map_err(|_| Error::parse(line, format!("invalid number `{t}`")))
        };
        let (n, p) = (num(toks[1])?, num(toks[2])?);
        let circuit = circuit::text::parse_lines(&lines[1..])?;
        VerifierCircuit::new(circuit, n, p)
    }
}

/// Which padded variant of the verifier's language a system produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PadKind {
    /// `L ∪ {1^n}`
    Sac,
    /// `L ∪ {0^n}`
    CoSac,
    /// `1·L·0 ∪ {0^n, 1^n}` at length `n + 2`.
    Padded,
}

impl PadKind {
    pub fn word_len(self, v: &VerifierCircuit) -> usize {
        match self {
            PadKind::Padded => v.n + 2,
            _ => v.n,
        }
    }

    pub fn member(self, v: &VerifierCircuit, word: &[bool]) -> bool {
        if word.len() != self.word_len(v) {
            return false;
        }
        let all = |b: bool| word.iter().all(|&x| x == b);
        match self {
            PadKind::Sac => all(true) || v.in_language(word),
            PadKind::CoSac => all(false) || v.in_language(word),
            PadKind::Padded => {
                let k = word.len();
                all(false)
                    || all(true)
                    || (word[0] && !word[k - 1] && v.in_language(&word[1..k - 1]))
            }
        }
    }
}

/// Input layout shared by the constructions: `x`, `y`, then `z`.
struct Wiring {
    x: Vec<GateId>,
    /// Value of each verifier gate as seen by the checker.
    value: Vec<GateId>,
    logic: Vec<usize>,
}

fn wire(b: &mut Builder, v: &VerifierCircuit) -> Wiring {
    let logic = v.logic_gates();
    let x = b.inputs(0..v.n);
    let y = b.inputs(v.n..v.n + v.p);
    let z_first = v.n + v.p;
    let mut value = Vec::with_capacity(v.circuit.gates().len());
    let mut next_z = z_first;
    for gate in v.circuit.gates() {
        let g = match *gate {
            Gate::Input(i) if i < v.n => x[i],
            Gate::Input(i) => y[i - v.n],
            Gate::Const(c) => b.constant(c),
            _ => {
                next_z += 1;
                b.input(next_z - 1)
            }
        };
        value.push(g);
    }
    Wiring { x, value, logic }
}

/// Per-gate check over `(z_g, operand values)`; `want` selects the
/// consistency or the inconsistency table.
fn gate_check(b: &mut Builder, v: &VerifierCircuit, w: &Wiring, g: usize, want: bool) -> GateId {
    let gate = v.circuit.gates()[g];
    let mut wires = vec![w.value[g]];
    wires.extend(gate.operands().map(|a| w.value[a]));
    let table = tabulate(wires.len(), |bits| {
        let expected = match gate {
            Gate::Not(_) => !bits[1],
            Gate::And(..) => bits[1] && bits[2],
            Gate::Or(..) => bits[1] || bits[2],
            _ => unreachable!(),
        };
        (bits[0] == expected) == want
    });
    table_to_subcircuit(b, &table, &wires)
}

fn proof_len(v: &VerifierCircuit) -> usize {
    v.n + v.p + v.logic_gates().len()
}

/// `AND_g cons_g ∧ z_out`
fn all_consistent(b: &mut Builder, v: &VerifierCircuit, w: &Wiring) -> GateId {
    let mut checks: Vec<GateId> = w.logic.iter().map(|&g| gate_check(b, v, w, g, true)).collect();
    checks.push(w.value[v.circuit.outputs()[0]]);
    b.and_all(&checks)
}

/// `OR_g incons_g ∨ ¬z_out`
fn some_inconsistent(b: &mut Builder, v: &VerifierCircuit, w: &Wiring) -> GateId {
    let mut checks: Vec<GateId> = w.logic.iter().map(|&g| gate_check(b, v, w, g, false)).collect();
    let out = w.value[v.circuit.outputs()[0]];
    checks.push(b.not(out));
    b.or_all(&checks)
}

/// Range `L^{=n} ∪ {0^n}`; OR gates have constant fanin.
pub fn synth_co_sac(v: &VerifierCircuit) -> Circuit {
    let mut b = Builder::new(proof_len(v));
    let w = wire(&mut b, v);
    let ok = all_consistent(&mut b, v, &w);
    let outputs = w.x.iter().map(|&x| b.and(x, ok)).collect();
    b.finish(outputs)
}

/// Range `L^{=n} ∪ {1^n}`; AND gates have constant fanin.
pub fn synth_sac(v: &VerifierCircuit) -> Circuit {
    let mut b = Builder::new(proof_len(v));
    let w = wire(&mut b, v);
    let bad = some_inconsistent(&mut b, v, &w);
    let outputs = w.x.iter().map(|&x| b.or(x, bad)).collect();
    b.finish(outputs)
}

/// Systems `(sac, co_sac)` for `1·L·0 ∪ {0^n, 1^n}` where the verifier reads
/// cores of length `n - 2`. Two extra proof bits follow `z`: the first
/// forces `1^n`, the second `0^n` (in each system one of them acts by
/// collapsing the consistency check).
pub fn pad_language(v: &VerifierCircuit, n: usize) -> Result<(Circuit, Circuit)> {
    if n < 2 {
        return Err(Error::Parameter("padded systems need n >= 2".into()));
    }
    if n - 2 != v.n {
        return Err(Error::Parameter(format!(
            "verifier reads {} bits but the padded core has {}",
            v.n,
            n - 2
        )));
    }
    let base = proof_len(v);

    let mut b = Builder::new(base + 2);
    let w = wire(&mut b, v);
    let (collapse, escape) = (b.input(base), b.input(base + 1));
    let bad = some_inconsistent(&mut b, v, &w);
    let bad = b.or(bad, collapse);
    let keep = b.not(escape);
    let mut outputs = vec![keep];
    for &x in &w.x {
        let t = b.or(x, bad);
        outputs.push(b.and(t, keep));
    }
    outputs.push(b.and(bad, keep));
    let sac = b.finish(outputs);

    let mut b = Builder::new(base + 2);
    let w = wire(&mut b, v);
    let (escape, collapse) = (b.input(base), b.input(base + 1));
    let ok = all_consistent(&mut b, v, &w);
    let not_collapse = b.not(collapse);
    let ok = b.and(ok, not_collapse);
    let mut outputs = vec![b.or(ok, escape)];
    for &x in &w.x {
        let t = b.and(x, ok);
        outputs.push(b.or(t, escape));
    }
    outputs.push(escape);
    let co_sac = b.finish(outputs);
    Ok((sac, co_sac))
}

/// A proof producing `word` in the system of the given kind.
pub fn witness_np(v: &VerifierCircuit, kind: PadKind, word: &[bool]) -> Result<Vec<bool>> {
    if !kind.member(v, word) {
        return Err(Error::Witness("word is outside the language".into()));
    }
    let logic = v.logic_gates();
    let honest = |x: &[bool]| -> Option<Vec<bool>> {
        let y = v.certificate(x)?;
        let vals = v.gate_values(x, &y);
        let mut proof = x.to_vec();
        proof.extend(&y);
        proof.extend(logic.iter().map(|&g| vals[g]));
        Some(proof)
    };
    let base = proof_len(v);
    match kind {
        PadKind::Sac | PadKind::CoSac => Ok(honest(word).unwrap_or_else(|| {
            // The constant word: x itself already equals it.
            let mut proof = word.to_vec();
            proof.resize(base, false);
            proof
        })),
        PadKind::Padded => {
            let k = word.len();
            let core = &word[1..k - 1];
            if word[0] && !word[k - 1] {
                if let Some(mut proof) = honest(core) {
                    proof.extend([false, false]);
                    return Ok(proof);
                }
            }
            let mut proof = vec![false; base + 2];
            proof[base + if word[0] { 0 } else { 1 }] = true;
            Ok(proof)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::word_from_index;
    use crate::circuit::{fanin_profile, negations_only_on_literals};
    use std::collections::BTreeSet;

    /// x of length n contains `11` at the position encoded by y.
    pub(crate) fn substring_11(n: usize) -> VerifierCircuit {
        let p = crate::bits::ceil_log2(n.saturating_sub(1).max(1));
        let mut b = Builder::new(n + p);
        let y = b.inputs(n..n + p);
        let mut hits = Vec::new();
        for i in 0..n.saturating_sub(1) {
            let lits: Vec<GateId> = (0..p)
                .map(|j| {
                    if i >> (p - 1 - j) & 1 == 1 {
                        y[j]
                    } else {
                        b.not(y[j])
                    }
                })
                .collect();
            let sel = b.and_all(&lits);
            let (a, c) = (b.input(i), b.input(i + 1));
            let pair = b.and(a, c);
            hits.push(b.and(sel, pair));
        }
        let out = b.or_all(&hits);
        VerifierCircuit::new(b.finish(vec![out]), n, p).unwrap()
    }

    fn range(c: &Circuit) -> BTreeSet<Vec<bool>> {
        (0..1u64 << c.num_inputs())
            .map(|x| c.eval(&word_from_index(x, c.num_inputs())).unwrap())
            .collect()
    }

    fn slice(len: usize, f: impl Fn(&[bool]) -> bool) -> BTreeSet<Vec<bool>> {
        (0..1u64 << len)
            .map(|x| word_from_index(x, len))
            .filter(|w| f(w))
            .collect()
    }

    fn has_11(w: &[bool]) -> bool {
        w.windows(2).any(|p| p[0] && p[1])
    }

    #[test]
    fn exhaustive_ranges_at_three() {
        let v = substring_11(3);
        let co = synth_co_sac(&v);
        let sac = synth_sac(&v);
        assert_eq!(range(&co), slice(3, |w| has_11(w) || w.iter().all(|&b| !b)));
        assert_eq!(range(&sac), slice(3, |w| has_11(w) || w.iter().all(|&b| b)));
        for c in [&co, &sac] {
            assert!(negations_only_on_literals(c));
        }
        assert!(fanin_profile(&co).max_or_fanin <= 4);
        assert!(fanin_profile(&sac).max_and_fanin <= 3);
    }

    #[test]
    fn honest_and_corrupted_proofs() {
        let v = substring_11(4);
        let co = synth_co_sac(&v);
        let word = vec![false, true, true, false];
        let proof = witness_np(&v, PadKind::CoSac, &word).unwrap();
        assert_eq!(co.eval(&proof).unwrap(), word);
        let last = proof.len() - 1;
        let mut bad = proof.clone();
        bad[last] = !bad[last];
        assert_eq!(co.eval(&bad).unwrap(), vec![false; 4]);
        let sac = synth_sac(&v);
        assert_eq!(sac.eval(&bad).unwrap(), vec![true; 4]);
    }

    #[test]
    fn trivial_verifier_certifies_everything() {
        let mut b = Builder::new(2);
        let one = b.constant(true);
        let v = VerifierCircuit::new(b.finish(vec![one]), 2, 0).unwrap();
        assert_eq!(range(&synth_co_sac(&v)).len(), 4);
        assert_eq!(range(&synth_sac(&v)).len(), 4);
        // Padded: core length 2 with everything accepted.
        let (sac, co) = pad_language(&v, 4).unwrap();
        let expected = slice(4, |w| {
            w.iter().all(|&b| b) || w.iter().all(|&b| !b) || (w[0] && !w[3])
        });
        assert_eq!(range(&sac), expected);
        assert_eq!(range(&co), expected);
    }

    #[test]
    fn padded_ranges() {
        for n in [2usize, 4] {
            let v = substring_11(n - 2);
            let (sac, co) = pad_language(&v, n).unwrap();
            let expected = slice(n, |w| PadKind::Padded.member(&v, w));
            assert_eq!(range(&sac), expected, "sac n = {n}");
            assert_eq!(range(&co), expected, "co-sac n = {n}");
            for w in &expected {
                let proof = witness_np(&v, PadKind::Padded, w).unwrap();
                assert_eq!(&sac.eval(&proof).unwrap(), w);
                assert_eq!(&co.eval(&proof).unwrap(), w);
            }
            assert!(negations_only_on_literals(&sac));
            assert!(negations_only_on_literals(&co));
        }
        // With the empty word in L the length-2 slice is {00, 10, 11}.
        let mut b = Builder::new(0);
        let one = b.constant(true);
        let v = VerifierCircuit::new(b.finish(vec![one]), 0, 0).unwrap();
        let (sac, co) = pad_language(&v, 2).unwrap();
        let expected = slice(2, |w| PadKind::Padded.member(&v, w));
        assert_eq!(expected.len(), 3);
        assert_eq!(range(&sac), expected);
        assert_eq!(range(&co), expected);
    }

    #[test]
    fn text_roundtrip() {
        let v = substring_11(3);
        let text = v.to_text();
        assert!(text.starts_with("split 3 1\ncircuit 4 "));
        assert_eq!(VerifierCircuit::parse(&text).unwrap(), v);
        assert!(VerifierCircuit::parse("split 2 2\ncircuit 3 1 1\n0 INPUT 0\noutputs 0\n").is_err());
    }
}
