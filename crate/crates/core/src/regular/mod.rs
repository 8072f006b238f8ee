//! Interval-tree proof systems for automata and structured branching
//! programs.
//!
//! The proof carries the word `a` (in variable order) and, for every node
//! `(i, j]` of the interval tree over the gaps `(0, n+1]`, a label `⟨p, q⟩`
//! naming a node of layer `i` and a node of layer `j`. Each output position
//! reads `a` when its whole leaf-to-root path is consistent; otherwise it is
//! patched from a fixed path (the feasibility witness) of the highest
//! inconsistent node below its lowest fully consistent ancestor, or of the
//! root when the root itself is inconsistent.
//!
//! Label encodings at or above a layer's width are read as the last node of
//! that layer, so every proof input is meaningful.

mod bp;

pub use bp::{parse_bp, unroll, BpEdge, EdgeLabel, LayeredBp};

use std::fmt::Write;

use crate::bits::{ceil_log2, read_msb_first, write_msb_first};
use crate::circuit::{table_to_subcircuit, tabulate, Builder, Circuit, GateId};
use crate::error::{Error, Result};
use crate::interval::IntervalTree;
use crate::languages::Automaton;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LabelSlot {
    pub lo: usize,
    pub hi: usize,
    pub offset: usize,
    pub p_bits: usize,
    pub q_bits: usize,
}

/// Where each part of the proof lives: the word in `0..word_len`, then one
/// label slot per tree node in pre-order, `p` before `q`, MSB first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofLayout {
    pub word_len: usize,
    pub slots: Vec<LabelSlot>,
    pub num_inputs: usize,
}

impl ProofLayout {
    pub fn to_text(&self) -> String {
        let mut s = format!("word 0 {}\n", self.word_len);
        for slot in &self.slots {
            writeln!(
                s,
                "label {} {} {} {} {}",
                slot.lo, slot.hi, slot.offset, slot.p_bits, slot.q_bits
            )
            .unwrap();
        }
        s
    }
}

/// Output of the native decoder: the produced word and the frontier of tree
/// nodes that determined it, in left-to-right order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decoded {
    pub word: Vec<bool>,
    pub frontier: Vec<usize>,
}

/// Precomputed reachability and witness tables for one branching program.
#[derive(Debug, Clone)]
pub struct RegularScheme {
    bp: LayeredBp,
    tree: IntervalTree,
    layout: ProofLayout,
    // reach[v][p * w_hi + q]
    reach: Vec<Vec<bool>>,
    // witness[v][p * w_hi + q]: bits for gaps lo+1..=min(hi, n)
    witness: Vec<Vec<Option<Vec<bool>>>>,
}

fn label_bits(width: usize) -> usize {
    ceil_log2(width)
}

fn clamp(code: usize, width: usize) -> usize {
    code.min(width - 1)
}

impl RegularScheme {
    pub fn new(bp: LayeredBp) -> Result<Self> {
        let n = bp.len();
        let tree = IntervalTree::new(n + 1);
        let mut slots = Vec::with_capacity(tree.nodes().len());
        let mut offset = n;
        for node in tree.nodes() {
            let p_bits = label_bits(bp.width(node.lo));
            let q_bits = label_bits(bp.width(node.hi));
            slots.push(LabelSlot {
                lo: node.lo,
                hi: node.hi,
                offset,
                p_bits,
                q_bits,
            });
            offset += p_bits + q_bits;
        }
        let layout = ProofLayout {
            word_len: n,
            slots,
            num_inputs: offset,
        };

        let mut reach = Vec::with_capacity(tree.nodes().len());
        let mut witness = Vec::with_capacity(tree.nodes().len());
        for node in tree.nodes() {
            let (r, w) = node_tables(&bp, node.lo, node.hi);
            reach.push(r);
            witness.push(w);
        }
        if !reach[tree.root()][0] {
            return Err(Error::Synthesis(format!(
                "the language has no word of length {n}, so no proof system exists"
            )));
        }
        Ok(RegularScheme {
            bp,
            tree,
            layout,
            reach,
            witness,
        })
    }

    pub fn bp(&self) -> &LayeredBp {
        &self.bp
    }

    pub fn tree(&self) -> &IntervalTree {
        &self.tree
    }

    pub fn layout(&self) -> &ProofLayout {
        &self.layout
    }

    pub fn num_inputs(&self) -> usize {
        self.layout.num_inputs
    }

    /// Whether layer `lo` node `p` reaches layer `hi` node `q`, for a tree
    /// node spanning `(lo, hi]`.
    pub fn reachable(&self, node: usize, p: usize, q: usize) -> bool {
        let w = self.bp.width(self.tree.node(node).hi);
        self.reach[node][p * w + q]
    }

    /// The feasibility witness of `⟨p, q⟩` at `node`: the input bits for
    /// the gaps it spans (the sink gap reads no variable).
    pub fn feasibility_witness(&self, node: usize, p: usize, q: usize) -> Option<&[bool]> {
        let w = self.bp.width(self.tree.node(node).hi);
        self.witness[node][p * w + q].as_deref()
    }

    fn labels(&self, proof: &[bool]) -> Vec<(usize, usize)> {
        self.layout
            .slots
            .iter()
            .map(|s| {
                let p = read_msb_first(&proof[s.offset..s.offset + s.p_bits]);
                let q_start = s.offset + s.p_bits;
                let q = read_msb_first(&proof[q_start..q_start + s.q_bits]);
                (clamp(p, self.bp.width(s.lo)), clamp(q, self.bp.width(s.hi)))
            })
            .collect()
    }

    /// Evaluates the construction directly on a proof.
    pub fn decode(&self, proof: &[bool]) -> Result<Decoded> {
        if proof.len() != self.num_inputs() {
            return Err(Error::InputArity {
                expected: self.num_inputs(),
                got: proof.len(),
            });
        }
        let n = self.bp.len();
        let labels = self.labels(proof);
        let nodes = self.tree.nodes();
        let feasible = |v: usize| self.reachable(v, labels[v].0, labels[v].1);
        let consistent: Vec<bool> = (0..nodes.len())
            .map(|v| {
                let (p, q) = labels[v];
                let node = &nodes[v];
                match node.children {
                    None => {
                        let bit = self.bp.variable(node.hi).map(|x| proof[x]);
                        self.bp.has_edge(node.hi, p, q, bit)
                    }
                    Some((l, r)) => {
                        feasible(v)
                            && feasible(l)
                            && feasible(r)
                            && labels[l].0 == p
                            && labels[r].1 == q
                            && labels[l].1 == labels[r].0
                    }
                }
            })
            .collect();

        let mut word = vec![false; n];
        let mut frontier = Vec::new();
        // Pre-order walk: descend through fully consistent nodes only.
        let mut stack = vec![self.tree.root()];
        while let Some(v) = stack.pop() {
            let node = &nodes[v];
            if consistent[v] {
                if let Some((l, r)) = node.children {
                    stack.push(r);
                    stack.push(l);
                    continue;
                }
                frontier.push(v);
                if let Some(x) = self.bp.variable(node.hi) {
                    word[x] = proof[x];
                }
                continue;
            }
            frontier.push(v);
            let (p, q) = labels[v];
            let bits = self
                .feasibility_witness(v, p, q)
                .expect("frontier nodes are feasible");
            for (offset, &bit) in bits.iter().enumerate() {
                let g = node.lo + 1 + offset;
                word[self.bp.variable(g).unwrap()] = bit;
            }
        }
        Ok(Decoded { word, frontier })
    }

    /// Honest proof for `word` (indexed by variable): the word itself and
    /// the labels of the lexicographically smallest accepting path.
    pub fn witness(&self, word: &[bool]) -> Result<Vec<bool>> {
        let n = self.bp.len();
        if word.len() != n {
            return Err(Error::Witness(format!(
                "expected a word of length {n}, got {}",
                word.len()
            )));
        }
        let layers = self.bp.num_layers();
        let admits = |g: usize, e: &BpEdge| match self.bp.variable(g) {
            Some(x) => e.label.admits(word[x]),
            None => true,
        };
        // alive[g][x]: node x of layer g reaches t along edges consistent with word.
        let mut alive: Vec<Vec<bool>> = (0..layers).map(|g| vec![false; self.bp.width(g)]).collect();
        alive[layers - 1][0] = true;
        for g in (1..layers).rev() {
            for e in self.bp.gap(g) {
                if alive[g][e.to] && admits(g, e) {
                    alive[g - 1][e.from] = true;
                }
            }
        }
        if !alive[0][0] {
            return Err(Error::Witness("word is not accepted".into()));
        }
        let mut states = vec![0usize; layers];
        for g in 1..layers {
            states[g] = self
                .bp
                .gap(g)
                .iter()
                .filter(|e| e.from == states[g - 1] && alive[g][e.to] && admits(g, e))
                .map(|e| e.to)
                .min()
                .unwrap();
        }
        let mut proof = vec![false; self.num_inputs()];
        proof[..n].copy_from_slice(word);
        for s in &self.layout.slots {
            write_msb_first(states[s.lo], &mut proof[s.offset..s.offset + s.p_bits]);
            let q_start = s.offset + s.p_bits;
            write_msb_first(states[s.hi], &mut proof[q_start..q_start + s.q_bits]);
        }
        Ok(proof)
    }

    pub fn synthesize(&self) -> Circuit {
        let n = self.bp.len();
        let nodes = self.tree.nodes();
        let mut b = Builder::new(self.num_inputs());
        let word: Vec<GateId> = b.inputs(0..n);
        let label_wires: Vec<(Vec<GateId>, Vec<GateId>)> = self
            .layout
            .slots
            .iter()
            .map(|s| {
                let q_start = s.offset + s.p_bits;
                (
                    b.inputs(s.offset..q_start),
                    b.inputs(q_start..q_start + s.q_bits),
                )
            })
            .collect();

        let feas: Vec<GateId> = (0..nodes.len())
            .map(|v| {
                let (lo, hi) = (nodes[v].lo, nodes[v].hi);
                let (wp, wq) = (self.bp.width(lo), self.bp.width(hi));
                let (pw, qw) = &label_wires[v];
                let wires = [pw.as_slice(), qw.as_slice()].concat();
                let table = tabulate(wires.len(), |bits| {
                    let p = clamp(read_msb_first(&bits[..pw.len()]), wp);
                    let q = clamp(read_msb_first(&bits[pw.len()..]), wq);
                    self.reach[v][p * wq + q]
                });
                table_to_subcircuit(&mut b, &table, &wires)
            })
            .collect();

        let equal = |b: &mut Builder, x: &[GateId], y: &[GateId], width: usize| {
            let wires = [x, y].concat();
            let table = tabulate(wires.len(), |bits| {
                clamp(read_msb_first(&bits[..x.len()]), width)
                    == clamp(read_msb_first(&bits[x.len()..]), width)
            });
            table_to_subcircuit(b, &table, &wires)
        };

        let cons: Vec<GateId> = (0..nodes.len())
            .map(|v| {
                let node = &nodes[v];
                let (pw, qw) = &label_wires[v];
                match node.children {
                    None => {
                        let g = node.hi;
                        let (wp, wq) = (self.bp.width(node.lo), self.bp.width(g));
                        let mut wires = [pw.as_slice(), qw.as_slice()].concat();
                        let var = self.bp.variable(g);
                        if let Some(x) = var {
                            wires.push(word[x]);
                        }
                        let table = tabulate(wires.len(), |bits| {
                            let p = clamp(read_msb_first(&bits[..pw.len()]), wp);
                            let q_end = pw.len() + qw.len();
                            let q = clamp(read_msb_first(&bits[pw.len()..q_end]), wq);
                            self.bp.has_edge(g, p, q, var.map(|_| bits[q_end]))
                        });
                        table_to_subcircuit(&mut b, &table, &wires)
                    }
                    Some((l, r)) => {
                        let (lp, lq) = &label_wires[l];
                        let (rp, rq) = &label_wires[r];
                        let mid = nodes[l].hi;
                        let e1 = equal(&mut b, pw, lp, self.bp.width(node.lo));
                        let e2 = equal(&mut b, qw, rq, self.bp.width(node.hi));
                        let e3 = equal(&mut b, lq, rp, self.bp.width(mid));
                        b.and_all(&[feas[v], feas[l], feas[r], e1, e2, e3])
                    }
                }
            })
            .collect();

        // Fully-consistent flags as balanced ANDs over each root path.
        let full: Vec<GateId> = (0..nodes.len())
            .map(|v| {
                let path: Vec<GateId> = self
                    .tree
                    .path_to_root(v)
                    .into_iter()
                    .map(|u| cons[u])
                    .collect();
                b.and_all(&path)
            })
            .collect();

        let root = self.tree.root();
        let root_witness = self.witness[root][0].as_ref().unwrap();
        let root_bad = b.not(cons[root]);
        let mut minterms: Vec<Vec<Option<GateId>>> = nodes
            .iter()
            .enumerate()
            .map(|(v, _)| vec![None; 1 << (label_wires[v].0.len() + label_wires[v].1.len())])
            .collect();

        let mut outputs = vec![0; n];
        for g in 1..=n {
            let path = self.tree.path_to_root(self.tree.leaf(g));
            let mut terms = Vec::with_capacity(path.len() + 1);
            let leaf = path[0];
            let honest = match path.get(1) {
                Some(&parent) => b.and_all(&[word[self.bp.variable(g).unwrap()], cons[leaf], full[parent]]),
                None => b.and(word[self.bp.variable(g).unwrap()], cons[leaf]),
            };
            terms.push(honest);
            if root_witness[g - 1] {
                terms.push(root_bad);
            }
            for h in 1..path.len() {
                let below = path[h - 1];
                let patch = self.witness_bit(&mut b, &label_wires[below], &mut minterms[below], below, g);
                let below_bad = b.not(cons[below]);
                let term = b.and_all(&[patch, below_bad, full[path[h]]]);
                terms.push(term);
            }
            outputs[self.bp.variable(g).unwrap()] = b.or_all(&terms);
        }
        b.finish(outputs)
    }

    /// Bit for gap `g` of the witness selected by the label of `node`, as a
    /// DNF over the label wires with minterms shared per node.
    fn witness_bit(
        &self,
        b: &mut Builder,
        wires: &(Vec<GateId>, Vec<GateId>),
        minterms: &mut [Option<GateId>],
        node: usize,
        g: usize,
    ) -> GateId {
        let span = self.tree.node(node);
        let (wp, wq) = (self.bp.width(span.lo), self.bp.width(span.hi));
        let (pw, qw) = wires;
        let all: Vec<GateId> = pw.iter().chain(qw.iter()).copied().collect();
        let mut rows = Vec::new();
        for code in 0..minterms.len() {
            let p = clamp(code >> qw.len(), wp);
            let q = clamp(code & ((1 << qw.len()) - 1), wq);
            let Some(bits) = &self.witness[node][p * wq + q] else {
                continue;
            };
            if !bits[g - span.lo - 1] {
                continue;
            }
            let term = match minterms[code] {
                Some(t) => t,
                None => {
                    let k = all.len();
                    let literals: Vec<GateId> = (0..k)
                        .map(|i| {
                            if code >> (k - 1 - i) & 1 == 1 {
                                all[i]
                            } else {
                                b.not(all[i])
                            }
                        })
                        .collect();
                    let t = b.and_all(&literals);
                    minterms[code] = Some(t);
                    t
                }
            };
            rows.push(term);
        }
        b.or_all(&rows)
    }
}

/// Reachability matrix and lexicographically smallest paths for the layer
/// span `(lo, hi]`.
fn node_tables(bp: &LayeredBp, lo: usize, hi: usize) -> (Vec<bool>, Vec<Option<Vec<bool>>>) {
    let (wp, wq) = (bp.width(lo), bp.width(hi));
    let n = bp.len();
    let mut reach = vec![false; wp * wq];
    let mut witness = vec![None; wp * wq];
    // back[g - lo][x]: node x of layer g reaches (hi, q).
    let mut back: Vec<Vec<bool>> = (lo..=hi).map(|g| vec![false; bp.width(g)]).collect();
    for q in 0..wq {
        for layer in back.iter_mut() {
            layer.iter_mut().for_each(|x| *x = false);
        }
        back[hi - lo][q] = true;
        for g in (lo + 1..=hi).rev() {
            for e in bp.gap(g) {
                if back[g - lo][e.to] {
                    back[g - lo - 1][e.from] = true;
                }
            }
        }
        for p in 0..wp {
            if !back[0][p] {
                continue;
            }
            reach[p * wq + q] = true;
            let mut bits = Vec::with_capacity(hi.min(n).saturating_sub(lo));
            let mut x = p;
            for g in lo + 1..=hi {
                let next = bp
                    .gap(g)
                    .iter()
                    .filter(|e| e.from == x && back[g - lo][e.to])
                    .map(|e| e.to)
                    .min()
                    .unwrap();
                if g <= n {
                    // Prefer 0 whenever an edge to `next` admits it.
                    bits.push(!bp.has_edge(g, x, next, Some(false)));
                }
                x = next;
            }
            witness[p * wq + q] = Some(bits);
        }
    }
    (reach, witness)
}

/// Proof system for the length-`n` words accepted by `a`.
pub fn synth_regular(a: &Automaton, n: usize) -> Result<(Circuit, ProofLayout)> {
    let scheme = RegularScheme::new(unroll(a, n)?)?;
    Ok((scheme.synthesize(), scheme.layout().clone()))
}

/// Proof system for the words accepted by a structured branching program.
pub fn synth_structured(bp: &LayeredBp) -> Result<(Circuit, ProofLayout)> {
    let scheme = RegularScheme::new(bp.clone())?;
    Ok((scheme.synthesize(), scheme.layout().clone()))
}

/// Honest proof for `word` under [`synth_regular`]`(a, word.len())`.
pub fn witness_regular(a: &Automaton, word: &[bool]) -> Result<Vec<bool>> {
    if !a.accepts(word) {
        return Err(Error::Witness("word is not accepted by the automaton".into()));
    }
    RegularScheme::new(unroll(a, word.len())?)?.witness(word)
}
