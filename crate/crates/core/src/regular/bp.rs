//! Layered branching programs.
//!
//! A program for length-`n` words has layers `0..=n+1`. Layer 0 holds the
//! single source `s` and layer `n+1` the single sink `t`. Gap `g` (for `g` in
//! `1..=n`) joins layer `g-1` to layer `g` and every edge in it reads the
//! same variable `x_{σ(g)}`; gap `n+1` joins accepting nodes to `t` with
//! unconditional edges.

use crate::error::{Error, Result};
use crate::languages::Automaton;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeLabel {
    /// Taken when the gap's variable is 0.
    Neg,
    /// Taken when the gap's variable is 1.
    Pos,
    Always,
}

impl EdgeLabel {
    pub fn admits(self, bit: bool) -> bool {
        match self {
            EdgeLabel::Neg => !bit,
            EdgeLabel::Pos => bit,
            EdgeLabel::Always => true,
        }
    }

    fn for_bit(bit: bool) -> Self {
        if bit {
            EdgeLabel::Pos
        } else {
            EdgeLabel::Neg
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BpEdge {
    pub from: usize,
    pub to: usize,
    pub label: EdgeLabel,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayeredBp {
    widths: Vec<usize>,
    gaps: Vec<Vec<BpEdge>>,
    order: Vec<usize>,
}

impl LayeredBp {
    /// `widths` has `n + 2` entries, `gaps` has `n + 1` edge lists and
    /// `order[g - 1]` is the 0-based variable read by gap `g`.
    pub fn new(widths: Vec<usize>, mut gaps: Vec<Vec<BpEdge>>, order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        if widths.len() != n + 2 || gaps.len() != n + 1 {
            return Err(Error::Structure(format!(
                "a program over {n} variables needs {} layers and {} gaps",
                n + 2,
                n + 1
            )));
        }
        if widths[0] != 1 || widths[n + 1] != 1 {
            return Err(Error::Structure(
                "the first and last layers must hold a single node".into(),
            ));
        }
        if widths.contains(&0) {
            return Err(Error::Structure("every layer needs at least one node".into()));
        }
        let mut seen = vec![false; n];
        for (g, &v) in order.iter().enumerate() {
            if v >= n || std::mem::replace(&mut seen[v], true) {
                return Err(Error::Structure(format!(
                    "variable order is not a permutation (gap {} reads x{})",
                    g + 1,
                    v + 1
                )));
            }
        }
        for (g, edges) in gaps.iter_mut().enumerate() {
            for e in edges.iter() {
                if e.from >= widths[g] || e.to >= widths[g + 1] {
                    return Err(Error::Structure(format!(
                        "edge {} -> {} in gap {} leaves the layer bounds",
                        e.from,
                        e.to,
                        g + 1
                    )));
                }
                if g == n && e.label != EdgeLabel::Always {
                    return Err(Error::Structure(
                        "edges into the sink layer must be unconditional".into(),
                    ));
                }
            }
            edges.sort_unstable();
            edges.dedup();
        }
        Ok(LayeredBp {
            widths,
            gaps,
            order,
        })
    }

    /// Number of variables `n`.
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn num_layers(&self) -> usize {
        self.widths.len()
    }

    pub fn width(&self, layer: usize) -> usize {
        self.widths[layer]
    }

    pub fn widths(&self) -> &[usize] {
        &self.widths
    }

    /// Edges of gap `g` (1-based), sorted.
    pub fn gap(&self, g: usize) -> &[BpEdge] {
        &self.gaps[g - 1]
    }

    /// 0-based variable read by gap `g`, or `None` for the sink gap.
    pub fn variable(&self, g: usize) -> Option<usize> {
        self.order.get(g - 1).copied()
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Maximum layer width.
    pub fn max_width(&self) -> usize {
        self.widths.iter().copied().max().unwrap_or(1)
    }

    /// Whether some edge from `(g-1, p)` to `(g, q)` is consistent with `bit`
    /// (`None` ignores labels).
    pub fn has_edge(&self, g: usize, p: usize, q: usize, bit: Option<bool>) -> bool {
        self.gap(g).iter().any(|e| {
            e.from == p && e.to == q && bit.is_none_or(|b| e.label.admits(b))
        })
    }

    /// `word` is indexed by variable.
    pub fn accepts(&self, word: &[bool]) -> bool {
        assert_eq!(word.len(), self.len());
        let mut current = vec![true];
        for g in 1..self.num_layers() {
            let bit = self.variable(g).map(|v| word[v]);
            let mut next = vec![false; self.widths[g]];
            for e in self.gap(g) {
                if current[e.from] && bit.is_none_or(|b| e.label.admits(b)) {
                    next[e.to] = true;
                }
            }
            current = next;
        }
        current[0]
    }
}

/// Unrolls `a` on length-`n` inputs: layer widths `1, w, ..., w, 1`, the
/// identity variable order, and accepting copies at layer `n` wired to `t`.
pub fn unroll(a: &Automaton, n: usize) -> Result<LayeredBp> {
    if n == 0 {
        return Err(Error::Parameter("unrolling needs n >= 1".into()));
    }
    let w = a.num_states();
    let mut widths = vec![w; n + 2];
    widths[0] = 1;
    widths[n + 1] = 1;
    let mut gaps = Vec::with_capacity(n + 1);
    for g in 1..=n {
        let sources: Vec<(usize, usize)> = if g == 1 {
            vec![(0, a.start())]
        } else {
            (0..w).map(|p| (p, p)).collect()
        };
        let mut edges = Vec::new();
        for (node, state) in sources {
            for bit in [false, true] {
                for &q in a.successors(state, bit) {
                    edges.push(BpEdge {
                        from: node,
                        to: q,
                        label: EdgeLabel::for_bit(bit),
                    });
                }
            }
        }
        gaps.push(edges);
    }
    gaps.push(
        (0..w)
            .filter(|&q| a.is_accepting(q))
            .map(|q| BpEdge {
                from: q,
                to: 0,
                label: EdgeLabel::Always,
            })
            .collect(),
    );
    LayeredBp::new(widths, gaps, (0..n).collect())
}

/// Parses the structured branching program format:
///
/// ```text
/// bp <n> <w>
/// start <p>
/// accept <q...>
/// edge <g> <p> <q> <lit>
/// ```
///
/// `g` is a gap in `1..=n` joining node `p` of layer `g-1` to node `q` of
/// layer `g` (all inner layers have `w` nodes); `lit` is `x<v>`, `~x<v>`
/// (1-based variable) or `1`. All literal edges of a gap must read one
/// variable and distinct gaps must read distinct variables. `#` starts a
/// comment.
pub fn parse_bp(text: &str) -> Result<LayeredBp> {
    let mut dims = None;
    let mut start = 0;
    let mut accept = Vec::new();
    let mut raw_edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let toks: Vec<&str> = content.split_whitespace().collect();
        let num = |t: &str| {
            t.parse::<usize>()
                .map_err(|_| Error::parse(line, format!("invalid number `{t}`")))
        };
        match toks[0] {
            "bp" if toks.len() == 3 => dims = Some((num(toks[1])?, num(toks[2])?)),
            "start" if toks.len() == 2 => start = num(toks[1])?,
            "accept" => {
                for t in &toks[1..] {
                    accept.push(num(t)?);
                }
            }
            "edge" if toks.len() == 5 => {
                let lit = match toks[4] {
                    "1" => None,
                    s => {
                        let (label, var) = match s.strip_prefix('~') {
                            Some(rest) => (EdgeLabel::Neg, rest),
                            None => (EdgeLabel::Pos, s),
                        };
                        let var = var
                            .strip_prefix('x')
                            .ok_or_else(|| Error::parse(line, format!("invalid literal `{s}`")))?;
                        let var = num(var)?;
                        if var == 0 {
                            return Err(Error::parse(line, "variables are numbered from 1"));
                        }
                        Some((label, var - 1))
                    }
                };
                raw_edges.push((line, num(toks[1])?, num(toks[2])?, num(toks[3])?, lit));
            }
            other => return Err(Error::parse(line, format!("malformed `{other}` line"))),
        }
    }
    let (n, w) = dims.ok_or_else(|| Error::parse(1, "missing `bp <n> <w>` header"))?;
    if n == 0 || w == 0 {
        return Err(Error::Parameter("program needs n >= 1 and w >= 1".into()));
    }
    if start >= w {
        return Err(Error::Structure(format!("start node {start} out of range")));
    }

    let mut gap_var: Vec<Option<usize>> = vec![None; n];
    let mut edges: Vec<Vec<BpEdge>> = vec![Vec::new(); n + 1];
    for &(line, g, p, q, lit) in &raw_edges {
        if g == 0 || g > n {
            return Err(Error::Structure(format!("line {line}: gap {g} out of range")));
        }
        if p >= w || q >= w {
            return Err(Error::Structure(format!("line {line}: node out of range")));
        }
        let label = match lit {
            None => EdgeLabel::Always,
            Some((label, var)) => {
                if var >= n {
                    return Err(Error::Structure(format!(
                        "line {line}: variable x{} out of range",
                        var + 1
                    )));
                }
                match gap_var[g - 1] {
                    Some(v) if v != var => {
                        return Err(Error::Structure(format!(
                            "gap {g} reads both x{} and x{}",
                            v + 1,
                            var + 1
                        )))
                    }
                    _ => gap_var[g - 1] = Some(var),
                }
                label
            }
        };
        if g == 1 && p != start {
            continue;
        }
        let from = if g == 1 { 0 } else { p };
        edges[g - 1].push(BpEdge { from, to: q, label });
    }
    // Gaps with only unconditional edges take the unused variables in order.
    let mut used = vec![false; n];
    for v in gap_var.iter().flatten() {
        if std::mem::replace(&mut used[*v], true) {
            return Err(Error::Structure(format!(
                "variable x{} is read by more than one gap",
                v + 1
            )));
        }
    }
    let mut free = (0..n).filter(|&v| !used[v]);
    let order: Vec<usize> = gap_var
        .iter()
        .map(|v| v.unwrap_or_else(|| free.next().unwrap()))
        .collect();

    let mut sink = Vec::new();
    for &q in &accept {
        if q >= w {
            return Err(Error::Structure(format!("accept node {q} out of range")));
        }
        sink.push(BpEdge {
            from: q,
            to: 0,
            label: EdgeLabel::Always,
        });
    }
    edges[n] = sink;
    let mut widths = vec![w; n + 2];
    widths[0] = 1;
    widths[n + 1] = 1;
    LayeredBp::new(widths, edges, order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::parse_bits;

    fn parity() -> Automaton {
        Automaton::dfa(0, &[0], &[[0, 1], [1, 0]]).unwrap()
    }

    /// All source-to-sink paths, each as its list of (gap, edge).
    fn all_paths(bp: &LayeredBp) -> Vec<Vec<BpEdge>> {
        fn go(bp: &LayeredBp, g: usize, node: usize, acc: &mut Vec<BpEdge>, out: &mut Vec<Vec<BpEdge>>) {
            if g == bp.num_layers() {
                out.push(acc.clone());
                return;
            }
            for e in bp.gap(g).iter().filter(|e| e.from == node) {
                acc.push(*e);
                go(bp, g + 1, e.to, acc, out);
                acc.pop();
            }
        }
        let mut out = Vec::new();
        go(bp, 1, 0, &mut Vec::new(), &mut out);
        out
    }

    #[test]
    fn unrolled_parity_shape_and_paths() {
        let bp = unroll(&parity(), 2).unwrap();
        assert_eq!(bp.widths(), &[1, 2, 2, 1]);
        assert_eq!(bp.gap(3).len(), 1);
        // Path words are exactly the accepted words.
        let mut words: Vec<Vec<bool>> = all_paths(&bp)
            .iter()
            .map(|p| {
                p[..2]
                    .iter()
                    .map(|e| e.label == EdgeLabel::Pos)
                    .collect()
            })
            .collect();
        words.sort();
        assert_eq!(words, vec![parse_bits("00").unwrap(), parse_bits("11").unwrap()]);
        for w in 0..4usize {
            let word = vec![w >> 1 & 1 == 1, w & 1 == 1];
            assert_eq!(bp.accepts(&word), parity().accepts(&word));
        }
    }

    #[test]
    fn unreachable_state_copies_are_present() {
        // State 2 is never entered.
        let a = Automaton::dfa(0, &[0], &[[0, 1], [1, 0], [2, 2]]).unwrap();
        let bp = unroll(&a, 3).unwrap();
        assert_eq!(bp.widths(), &[1, 3, 3, 3, 1]);
        assert!(all_paths(&bp).iter().all(|p| p.iter().all(|e| e.to != 2)));
    }

    #[test]
    fn nfa_gives_parallel_edges() {
        let a = Automaton::new(2, 0, &[1], &[(0, true, 0), (0, true, 1), (0, false, 0)]).unwrap();
        let bp = unroll(&a, 2).unwrap();
        let ones_from_0: Vec<_> = bp
            .gap(2)
            .iter()
            .filter(|e| e.from == 0 && e.label == EdgeLabel::Pos)
            .collect();
        assert_eq!(ones_from_0.len(), 2);
    }

    #[test]
    fn structured_program_for_xx() {
        // Reads x1, x3, x2, x4 and checks x1 = x3, x2 = x4.
        let text = "bp 4 2\nstart 0\naccept 0\n\
            edge 1 0 0 ~x1\nedge 1 0 1 x1\n\
            edge 2 0 0 ~x3\nedge 2 1 0 x3\n\
            edge 3 0 0 ~x2\nedge 3 0 1 x2\n\
            edge 4 0 0 ~x4\nedge 4 1 0 x4\n";
        let bp = parse_bp(text).unwrap();
        assert_eq!(bp.order(), &[0, 2, 1, 3]);
        let accepted: Vec<usize> = (0..16usize)
            .filter(|&w| bp.accepts(&(0..4).map(|i| w >> (3 - i) & 1 == 1).collect::<Vec<_>>()))
            .collect();
        assert_eq!(accepted, vec![0b0000, 0b0101, 0b1010, 0b1111]);
    }

    #[test]
    fn mixed_variables_in_a_gap_are_rejected() {
        let text = "bp 2 2\naccept 0\nedge 1 0 0 x1\nedge 1 0 1 x2\nedge 2 0 0 x2\n";
        assert!(matches!(parse_bp(text), Err(Error::Structure(_))));
        let text = "bp 2 2\naccept 0\nedge 1 0 0 x1\nedge 2 0 0 x1\n";
        assert!(matches!(parse_bp(text), Err(Error::Structure(_))));
    }
}
