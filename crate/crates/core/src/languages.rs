//! Language descriptions, membership oracles and slice enumeration.
//!
//! Graph languages use the `n × n` adjacency matrix, row-major, with vertices
//! numbered from 1; `s = 1` and `t = n`. Undirected matrices must be
//! symmetric with an empty diagonal.

use std::collections::VecDeque;

use crate::bits::popcount;
use crate::error::{Error, Result};
use crate::np::{PadKind, VerifierCircuit};
use crate::regular::LayeredBp;

/// Default cap on the number of candidate words any exhaustive routine visits.
pub const DEFAULT_BUDGET: u128 = 1 << 24;

/// A finite automaton over `{0,1}`; deterministic when every state has
/// exactly one successor per bit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automaton {
    num_states: usize,
    start: usize,
    accepting: Vec<bool>,
    // successors[p][b], sorted and deduplicated
    successors: Vec<[Vec<usize>; 2]>,
}

impl Automaton {
    pub fn new(
        num_states: usize,
        start: usize,
        finals: &[usize],
        transitions: &[(usize, bool, usize)],
    ) -> Result<Self> {
        if num_states == 0 {
            return Err(Error::Parameter("automaton needs at least one state".into()));
        }
        let check = |q: usize, what: &str| {
            if q < num_states {
                Ok(())
            } else {
                Err(Error::Parameter(format!(
                    "{what} {q} out of range for {num_states} states"
                )))
            }
        };
        check(start, "start state")?;
        let mut accepting = vec![false; num_states];
        for &f in finals {
            check(f, "final state")?;
            accepting[f] = true;
        }
        let mut successors = vec![[Vec::new(), Vec::new()]; num_states];
        for &(p, b, q) in transitions {
            check(p, "transition source")?;
            check(q, "transition target")?;
            successors[p][b as usize].push(q);
        }
        for pair in &mut successors {
            for list in pair.iter_mut() {
                list.sort_unstable();
                list.dedup();
            }
        }
        Ok(Automaton {
            num_states,
            start,
            accepting,
            successors,
        })
    }

    /// A total deterministic automaton from a transition table `delta[p][b]`.
    pub fn dfa(start: usize, finals: &[usize], delta: &[[usize; 2]]) -> Result<Self> {
        let transitions: Vec<_> = delta
            .iter()
            .enumerate()
            .flat_map(|(p, row)| [(p, false, row[0]), (p, true, row[1])])
            .collect();
        Automaton::new(delta.len(), start, finals, &transitions)
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting[q]
    }

    pub fn successors(&self, p: usize, bit: bool) -> &[usize] {
        &self.successors[p][bit as usize]
    }

    pub fn is_deterministic(&self) -> bool {
        self.successors
            .iter()
            .all(|pair| pair.iter().all(|l| l.len() == 1))
    }

    pub fn accepts(&self, word: &[bool]) -> bool {
        let mut current = vec![false; self.num_states];
        current[self.start] = true;
        for &bit in word {
            let mut next = vec![false; self.num_states];
            for p in (0..self.num_states).filter(|&p| current[p]) {
                for &q in self.successors(p, bit) {
                    next[q] = true;
                }
            }
            current = next;
        }
        (0..self.num_states).any(|q| current[q] && self.accepting[q])
    }
}

/// Parses the automaton text format:
///
/// ```text
/// # comment
/// states <w>
/// start <q0>
/// final <q...>
/// trans <p> <bit> <q>
/// ```
///
/// An optional `kind dfa|nfa` line fixes the mode; otherwise the file is an
/// NFA when some `(state, bit)` pair has two targets and a DFA otherwise.
/// DFA mode requires a transition for every `(state, bit)` pair.
pub fn parse_automaton(text: &str) -> Result<Automaton> {
    let mut states = None;
    let mut start = None;
    let mut finals = Vec::new();
    let mut transitions = Vec::new();
    let mut kind: Option<bool> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut toks = content.split_whitespace();
        let key = toks.next().unwrap();
        let nums = |toks: std::str::SplitWhitespace| -> Result<Vec<usize>> {
            toks.map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::parse(line, format!("invalid number `{t}`")))
            })
            .collect()
        };
        match key {
            "states" | "start" => {
                let v = nums(toks)?;
                if v.len() != 1 {
                    return Err(Error::parse(line, format!("`{key}` takes one number")));
                }
                if key == "states" {
                    states = Some(v[0]);
                } else {
                    start = Some(v[0]);
                }
            }
            "final" => finals.extend(nums(toks)?),
            "trans" => {
                let v = nums(toks)?;
                if v.len() != 3 || v[1] > 1 {
                    return Err(Error::parse(line, "expected `trans <p> <bit> <q>`"));
                }
                transitions.push((line, v[0], v[1] == 1, v[2]));
            }
            "kind" => match toks.next() {
                Some("dfa") => kind = Some(true),
                Some("nfa") => kind = Some(false),
                _ => return Err(Error::parse(line, "expected `kind dfa` or `kind nfa`")),
            },
            other => return Err(Error::parse(line, format!("unknown directive `{other}`"))),
        }
    }
    let w = states.ok_or_else(|| Error::parse(1, "missing `states` line"))?;
    let start = start.ok_or_else(|| Error::parse(1, "missing `start` line"))?;
    if start >= w {
        return Err(Error::Structure(format!("start state {start} out of range for {w} states")));
    }
    if let Some(&f) = finals.iter().find(|&&f| f >= w) {
        return Err(Error::Structure(format!("final state {f} out of range for {w} states")));
    }
    let mut counts = vec![[0usize; 2]; w];
    for &(line, p, b, q) in &transitions {
        if p >= w || q >= w {
            return Err(Error::Structure(format!(
                "line {line}: transition {p} -> {q} out of range for {w} states"
            )));
        }
        counts[p][b as usize] += 1;
    }
    let deterministic =
        kind.unwrap_or_else(|| counts.iter().all(|c| c.iter().all(|&k| k <= 1)));
    if deterministic {
        for (p, c) in counts.iter().enumerate() {
            for b in 0..2 {
                match c[b] {
                    1 => {}
                    0 => {
                        return Err(Error::Structure(format!(
                            "DFA is missing a transition from state {p} on {b}"
                        )))
                    }
                    _ => {
                        return Err(Error::Structure(format!(
                            "DFA has several transitions from state {p} on {b}"
                        )))
                    }
                }
            }
        }
    }
    let transitions: Vec<_> = transitions.iter().map(|&(_, p, b, q)| (p, b, q)).collect();
    Automaton::new(w, start, &finals, &transitions)
}

/// Which end of the word a fixed finite prefix/suffix is attached to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// A fixed-length morphism `{0,1} -> {0,1}^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    images: [Vec<bool>; 2],
}

impl Morphism {
    pub fn new(zero: Vec<bool>, one: Vec<bool>) -> Result<Self> {
        if zero.is_empty() || zero.len() != one.len() {
            return Err(Error::Parameter(
                "morphism images must be non-empty and of equal length".into(),
            ));
        }
        Ok(Morphism {
            images: [zero, one],
        })
    }

    pub fn block_len(&self) -> usize {
        self.images[0].len()
    }

    pub fn image(&self, bit: bool) -> &[bool] {
        &self.images[bit as usize]
    }

    pub fn apply(&self, word: &[bool]) -> Vec<bool> {
        word.iter()
            .flat_map(|&b| self.image(b).iter().copied())
            .collect()
    }

    /// The bits whose image equals `block`.
    pub fn preimages(&self, block: &[bool]) -> Vec<bool> {
        [false, true]
            .into_iter()
            .filter(|&b| self.image(b) == block)
            .collect()
    }
}

/// Closure operations over languages, mirrored by the circuit combinators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Combined {
    Union(Vec<LanguageSpec>),
    Concat {
        words: Vec<Vec<bool>>,
        inner: LanguageSpec,
        side: Side,
    },
    Reverse(LanguageSpec),
    Morphism {
        h: Morphism,
        inner: LanguageSpec,
    },
    InverseMorphism {
        h: Morphism,
        inner: LanguageSpec,
    },
    UpClose(LanguageSpec),
    Finite(Vec<Vec<bool>>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LanguageSpec {
    Regular(Automaton),
    /// Words accepted by a layered branching program (fixed length).
    Branching(LayeredBp),
    /// At least `t` ones.
    Threshold(usize),
    /// Exactly `t` ones.
    ExactCount(usize),
    /// Undirected graphs with every degree even.
    Cycles,
    /// Undirected graphs with vertices 1 and n connected.
    UstConn,
    /// Directed graphs with no path from 1 to n.
    UnReach,
    Np {
        verifier: VerifierCircuit,
        pad: PadKind,
    },
    Combined(Box<Combined>),
}

/// Vertex count of an `n × n` adjacency matrix word.
pub fn graph_order(word: &[bool]) -> Result<usize> {
    let n = (word.len() as f64).sqrt().round() as usize;
    if n * n != word.len() || n == 0 {
        return Err(Error::Encoding(format!(
            "word of length {} is not an n×n adjacency matrix",
            word.len()
        )));
    }
    Ok(n)
}

/// Checks symmetry and an empty diagonal; returns the vertex count.
pub fn check_undirected(word: &[bool]) -> Result<usize> {
    let n = graph_order(word)?;
    for u in 0..n {
        if word[u * n + u] {
            return Err(Error::Encoding(format!("self-loop at vertex {}", u + 1)));
        }
        for v in u + 1..n {
            if word[u * n + v] != word[v * n + u] {
                return Err(Error::Encoding(format!(
                    "asymmetric entries for edge ({}, {})",
                    u + 1,
                    v + 1
                )));
            }
        }
    }
    Ok(n)
}

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }
}

/// Vertices (0-based) reachable from `source` along directed edges.
pub fn reachable_from(word: &[bool], n: usize, source: usize) -> Vec<bool> {
    let mut seen = vec![false; n];
    seen[source] = true;
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        for v in 0..n {
            if word[u * n + v] && !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    seen
}

impl LanguageSpec {
    pub fn combined(c: Combined) -> Self {
        LanguageSpec::Combined(Box::new(c))
    }

    /// Whether this family measures instances by vertex count.
    pub fn is_graph(&self) -> bool {
        matches!(
            self,
            LanguageSpec::Cycles | LanguageSpec::UstConn | LanguageSpec::UnReach
        )
    }

    fn is_undirected(&self) -> bool {
        matches!(self, LanguageSpec::Cycles | LanguageSpec::UstConn)
    }

    /// Word length for size parameter `n` (vertices for graph families).
    pub fn word_len(&self, n: usize) -> usize {
        if self.is_graph() {
            n * n
        } else {
            n
        }
    }

    pub fn member(&self, word: &[bool]) -> Result<bool> {
        Ok(match self {
            LanguageSpec::Regular(a) => a.accepts(word),
            LanguageSpec::Branching(bp) => word.len() == bp.len() && bp.accepts(word),
            LanguageSpec::Threshold(t) => popcount(word) >= *t,
            LanguageSpec::ExactCount(t) => popcount(word) == *t,
            LanguageSpec::Cycles => {
                let n = check_undirected(word)?;
                (0..n).all(|u| popcount(&word[u * n..(u + 1) * n]).is_multiple_of(2))
            }
            LanguageSpec::UstConn => {
                let n = check_undirected(word)?;
                let mut uf = UnionFind::new(n);
                for u in 0..n {
                    for v in u + 1..n {
                        if word[u * n + v] {
                            uf.union(u, v);
                        }
                    }
                }
                uf.find(0) == uf.find(n - 1)
            }
            LanguageSpec::UnReach => {
                let n = graph_order(word)?;
                n > 1 && !reachable_from(word, n, 0)[n - 1]
            }
            LanguageSpec::Np { verifier, pad } => pad.member(verifier, word),
            LanguageSpec::Combined(c) => c.member(word),
        })
    }

    /// Convenience form of [`LanguageSpec::member`] treating encoding errors
    /// as non-membership.
    pub fn contains(&self, word: &[bool]) -> bool {
        self.member(word).unwrap_or(false)
    }

    /// All members with size parameter `n` in lexicographic order.
    ///
    /// `n` is the word length, or the vertex count for graph families.
    pub fn enumerate_slice(&self, n: usize, budget: u128) -> Result<Vec<Vec<bool>>> {
        if self.is_undirected() {
            let pairs = n * n.saturating_sub(1) / 2;
            let needed = 1u128.checked_shl(pairs as u32).unwrap_or(u128::MAX);
            if needed > budget {
                return Err(Error::Budget { needed, budget });
            }
            let mut out = Vec::new();
            let mut word = vec![false; n * n];
            for mask in 0..needed as u64 {
                let mut e = 0;
                for u in 0..n {
                    for v in u + 1..n {
                        let bit = mask >> e & 1 == 1;
                        word[u * n + v] = bit;
                        word[v * n + u] = bit;
                        e += 1;
                    }
                }
                if self.member(&word)? {
                    out.push(word.clone());
                }
            }
            out.sort();
            return Ok(out);
        }
        self.enumerate_words(self.word_len(n), budget)
    }

    /// Members of length `len` among all `2^len` candidates, lexicographic.
    pub fn enumerate_words(&self, len: usize, budget: u128) -> Result<Vec<Vec<bool>>> {
        let needed = 1u128.checked_shl(len as u32).unwrap_or(u128::MAX);
        if len >= 64 || needed > budget {
            return Err(Error::Budget { needed, budget });
        }
        let mut out = Vec::new();
        let mut word = vec![false; len];
        for value in 0..needed as u64 {
            // MSB-first so that numeric order is lexicographic order.
            for (i, bit) in word.iter_mut().enumerate() {
                *bit = value >> (len - 1 - i) & 1 == 1;
            }
            match self.member(&word) {
                Ok(true) => out.push(word.clone()),
                Ok(false) | Err(Error::Encoding(_)) => {}
                Err(e) => return Err(e),
            }
        }
        Ok(out)
    }
}

impl Combined {
    fn member(&self, word: &[bool]) -> bool {
        match self {
            Combined::Union(parts) => parts.iter().any(|p| p.contains(word)),
            Combined::Concat { words, inner, side } => words.iter().any(|u| {
                if u.len() > word.len() {
                    return false;
                }
                let (fixed, rest) = match side {
                    Side::Left => (&word[..u.len()], &word[u.len()..]),
                    Side::Right => (&word[word.len() - u.len()..], &word[..word.len() - u.len()]),
                };
                fixed == u.as_slice() && inner.contains(rest)
            }),
            Combined::Reverse(inner) => {
                let rev: Vec<bool> = word.iter().rev().copied().collect();
                inner.contains(&rev)
            }
            Combined::Morphism { h, inner } => {
                let k = h.block_len();
                if !word.len().is_multiple_of(k) {
                    return false;
                }
                let choices: Vec<Vec<bool>> = word.chunks(k).map(|b| h.preimages(b)).collect();
                if choices.iter().any(|c| c.is_empty()) {
                    return false;
                }
                let mut pre = vec![false; choices.len()];
                any_choice(&choices, 0, &mut pre, &mut |p| inner.contains(p))
            }
            Combined::InverseMorphism { h, inner } => inner.contains(&h.apply(word)),
            Combined::UpClose(inner) => {
                let ones: Vec<usize> = (0..word.len()).filter(|&i| word[i]).collect();
                if ones.len() >= 32 {
                    return false;
                }
                let mut sub = vec![false; word.len()];
                (0..1u64 << ones.len()).any(|mask| {
                    for (j, &i) in ones.iter().enumerate() {
                        sub[i] = mask >> j & 1 == 1;
                    }
                    inner.contains(&sub)
                })
            }
            Combined::Finite(words) => words.iter().any(|w| w.as_slice() == word),
        }
    }
}

fn any_choice(
    choices: &[Vec<bool>],
    at: usize,
    pre: &mut Vec<bool>,
    accept: &mut dyn FnMut(&[bool]) -> bool,
) -> bool {
    if at == choices.len() {
        return accept(pre);
    }
    for &b in &choices[at] {
        pre[at] = b;
        if any_choice(choices, at + 1, pre, accept) {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::parse_bits;

    fn graph(n: usize, edges: &[(usize, usize)]) -> Vec<bool> {
        let mut w = vec![false; n * n];
        for &(u, v) in edges {
            w[(u - 1) * n + (v - 1)] = true;
            w[(v - 1) * n + (u - 1)] = true;
        }
        w
    }

    pub(crate) fn parity() -> Automaton {
        Automaton::dfa(0, &[0], &[[0, 1], [1, 0]]).unwrap()
    }

    #[test]
    fn cycles_membership() {
        assert!(LanguageSpec::Cycles.member(&graph(4, &[])).unwrap());
        assert!(!LanguageSpec::Cycles.member(&graph(4, &[(1, 2)])).unwrap());
        assert!(LanguageSpec::Cycles
            .member(&graph(4, &[(1, 2), (2, 3), (1, 3)]))
            .unwrap());
    }

    #[test]
    fn threshold_membership() {
        let th = LanguageSpec::Threshold(2);
        assert!(th.member(&parse_bits("0110").unwrap()).unwrap());
        assert!(!th.member(&parse_bits("0100").unwrap()).unwrap());
    }

    #[test]
    fn malformed_graphs_are_encoding_errors() {
        let mut w = graph(3, &[(1, 2)]);
        w[1] = false;
        assert!(matches!(LanguageSpec::UstConn.member(&w), Err(Error::Encoding(_))));
        let mut w = graph(3, &[]);
        w[4] = true;
        assert!(matches!(LanguageSpec::Cycles.member(&w), Err(Error::Encoding(_))));
        assert!(matches!(
            LanguageSpec::UnReach.member(&[true, false]),
            Err(Error::Encoding(_))
        ));
    }

    #[test]
    fn connectivity_and_reachability() {
        assert!(LanguageSpec::UstConn
            .member(&graph(4, &[(1, 3), (3, 4)]))
            .unwrap());
        assert!(!LanguageSpec::UstConn.member(&graph(4, &[(1, 2)])).unwrap());
        let mut d = vec![false; 9];
        d[1] = true; // 1 -> 2
        d[2 * 3 + 1] = true; // 3 -> 2
        assert!(LanguageSpec::UnReach.member(&d).unwrap());
        d[3 + 2] = true; // 2 -> 3
        assert!(!LanguageSpec::UnReach.member(&d).unwrap());
    }

    #[test]
    fn slices() {
        let words = LanguageSpec::ExactCount(1)
            .enumerate_slice(3, DEFAULT_BUDGET)
            .unwrap();
        let expected: Vec<_> = ["001", "010", "100"]
            .iter()
            .map(|s| parse_bits(s).unwrap())
            .collect();
        assert_eq!(words, expected);

        let words = LanguageSpec::Regular(parity())
            .enumerate_slice(2, DEFAULT_BUDGET)
            .unwrap();
        assert_eq!(words, vec![parse_bits("00").unwrap(), parse_bits("11").unwrap()]);
    }

    #[test]
    fn cycles_slice_matches_independent_degree_filter() {
        // Independent count: edge subsets of K4 with all degrees even.
        let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let mut expected = 0;
        for mask in 0..64u32 {
            let mut deg = [0; 4];
            for (e, &(u, v)) in pairs.iter().enumerate() {
                if mask >> e & 1 == 1 {
                    deg[u] += 1;
                    deg[v] += 1;
                }
            }
            if deg.iter().all(|d| d % 2 == 0) {
                expected += 1;
            }
        }
        let words = LanguageSpec::Cycles.enumerate_slice(4, DEFAULT_BUDGET).unwrap();
        assert_eq!(words.len(), expected);
        assert_eq!(expected, 8);
    }

    #[test]
    fn budget_is_enforced() {
        let err = LanguageSpec::Threshold(1).enumerate_slice(30, 1 << 20);
        assert!(matches!(err, Err(Error::Budget { .. })));
    }

    #[test]
    fn parse_automata() {
        let a = parse_automaton(
            "# parity\nstates 2\nstart 0\nfinal 0\ntrans 0 0 0\ntrans 0 1 1\ntrans 1 0 1\ntrans 1 1 0\n",
        )
        .unwrap();
        assert_eq!(a.num_states(), 2);
        assert!(a.is_deterministic());
        assert_eq!(a, parity());

        let err = parse_automaton("states 2\nstart 0\nfinal 0\ntrans 0 0 5\n");
        assert!(err.is_err());

        let err = parse_automaton("states 2\nstart 0\nfinal 0\ntrans 0 0 0\ntrans 0 1 1\n");
        assert!(matches!(err, Err(Error::Structure(_))));

        let nfa = parse_automaton(
            "states 2\nstart 0\nfinal 1\ntrans 0 1 0\ntrans 0 1 1\ntrans 0 0 0\n",
        )
        .unwrap();
        assert!(!nfa.is_deterministic());
        assert!(nfa.accepts(&parse_bits("01").unwrap()));
        assert!(!nfa.accepts(&parse_bits("10").unwrap()));
    }

    #[test]
    fn combined_membership() {
        let union = LanguageSpec::combined(Combined::Union(vec![
            LanguageSpec::ExactCount(1),
            LanguageSpec::ExactCount(3),
        ]));
        assert!(union.contains(&parse_bits("111").unwrap()));
        assert!(!union.contains(&parse_bits("110").unwrap()));

        let h = Morphism::new(vec![false, false], vec![true, true]).unwrap();
        let morph = LanguageSpec::combined(Combined::Morphism {
            h: h.clone(),
            inner: LanguageSpec::ExactCount(1),
        });
        assert!(morph.contains(&parse_bits("0011").unwrap()));
        assert!(!morph.contains(&parse_bits("0110").unwrap()));

        let up = LanguageSpec::combined(Combined::UpClose(LanguageSpec::ExactCount(2)));
        assert!(up.contains(&parse_bits("111").unwrap()));
        assert!(!up.contains(&parse_bits("100").unwrap()));
    }
}
