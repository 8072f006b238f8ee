//! Constant-locality proof systems for graph languages.
//!
//! * Cycles (every degree even): the proof selects a subset of a fixed
//!   family of triangles and each edge is the parity of the selected
//!   triangles containing it.
//! * Undirected s-t connectivity: a cycles proof with the `(1, n)` entry
//!   complemented yields exactly the simple 1-n paths (plus cycles), and a
//!   mask bit per pair adds arbitrary further edges.
//! * Directed s-t unreachability: the proof gives the matrix and a cut `X`
//!   with `1 ∈ X`, `n ∉ X`; edges leaving `X` are deleted.
//!
//! Vertices are numbered from 1 in documentation and from 0 in code.

use std::collections::{HashMap, VecDeque};

use rustc_hash::FxHashMap;

use crate::circuit::{Builder, Circuit, GateId};
use crate::error::{Error, Result};
use crate::languages::{check_undirected, graph_order, reachable_from, LanguageSpec};

/// Index of the unordered pair `{u, v}` (0-based, `u < v`) in lexicographic
/// pair order.
pub fn pair_index(n: usize, u: usize, v: usize) -> usize {
    debug_assert!(u < v && v < n);
    u * (2 * n - u - 1) / 2 + (v - u - 1)
}

pub fn num_pairs(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Triangles `u < v < w` with gaps `(v-u, w-v)` equal to `(i, i)` or
/// `(i, i+1)`, in lexicographic order, with per-edge incidence lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangleBasis {
    n: usize,
    triangles: Vec<[usize; 3]>,
    incidence: Vec<Vec<usize>>,
    index: HashMap<[usize; 3], usize>,
}

impl TriangleBasis {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Triangles as 0-based vertex triples.
    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn len(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    /// Triangles containing edge `{u, v}` (0-based, any order).
    pub fn incident(&self, u: usize, v: usize) -> &[usize] {
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        &self.incidence[pair_index(self.n, a, b)]
    }

    pub fn position(&self, t: [usize; 3]) -> Option<usize> {
        self.index.get(&t).copied()
    }

    pub fn max_incidence(&self) -> usize {
        self.incidence.iter().map(Vec::len).max().unwrap_or(0)
    }
}

pub fn triangle_basis(n: usize) -> TriangleBasis {
    let mut triangles = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let a = v - u;
            for w in [v + a, v + a + 1] {
                if w < n {
                    triangles.push([u, v, w]);
                }
            }
        }
    }
    triangles.sort_unstable();
    let mut incidence = vec![Vec::new(); num_pairs(n)];
    let mut index = HashMap::with_capacity(triangles.len());
    for (i, &[u, v, w]) in triangles.iter().enumerate() {
        for (a, b) in [(u, v), (v, w), (u, w)] {
            incidence[pair_index(n, a, b)].push(i);
        }
        index.insert([u, v, w], i);
    }
    TriangleBasis {
        n,
        triangles,
        incidence,
        index,
    }
}

/// Parity of the selected incident triangles for every pair.
fn cycle_bits(b: &mut Builder, basis: &TriangleBasis, coeffs: &[GateId]) -> Vec<GateId> {
    let n = basis.n;
    let mut bits = Vec::with_capacity(num_pairs(n));
    for u in 0..n {
        for v in u + 1..n {
            let inputs: Vec<GateId> = basis.incident(u, v).iter().map(|&t| coeffs[t]).collect();
            bits.push(b.xor_all(&inputs));
        }
    }
    bits
}

/// Mirrors per-pair gates into a row-major matrix with a CONST 0 diagonal.
fn symmetric_outputs(b: &mut Builder, n: usize, pairs: &[GateId]) -> Vec<GateId> {
    let zero = b.constant(false);
    let mut out = vec![zero; n * n];
    for u in 0..n {
        for v in u + 1..n {
            let g = pairs[pair_index(n, u, v)];
            out[u * n + v] = g;
            out[v * n + u] = g;
        }
    }
    out
}

/// One input per basis triangle; range is every even-degree graph on `n`
/// vertices.
pub fn synth_cycles(n: usize) -> Circuit {
    let basis = triangle_basis(n);
    let mut b = Builder::new(basis.len());
    let coeffs = b.inputs(0..basis.len());
    let bits = cycle_bits(&mut b, &basis, &coeffs);
    let outputs = symmetric_outputs(&mut b, n, &bits);
    b.finish(outputs)
}

/// Inputs: basis coefficients, then one mask bit per pair in lexicographic
/// order. Range is every graph in which 1 and `n` are connected.
pub fn synth_ustconn(n: usize) -> Result<Circuit> {
    if n < 2 {
        return Err(Error::Parameter("s-t connectivity needs n >= 2".into()));
    }
    let basis = triangle_basis(n);
    let pairs = num_pairs(n);
    let mut b = Builder::new(basis.len() + pairs);
    let coeffs = b.inputs(0..basis.len());
    let mask = b.inputs(basis.len()..basis.len() + pairs);
    let mut bits = cycle_bits(&mut b, &basis, &coeffs);
    let st = pair_index(n, 0, n - 1);
    bits[st] = b.not(bits[st]);
    let bits: Vec<GateId> = bits.iter().zip(&mask).map(|(&c, &m)| b.or(c, m)).collect();
    let outputs = symmetric_outputs(&mut b, n, &bits);
    Ok(b.finish(outputs))
}

/// Inputs: the `n × n` matrix `A`, then cut bits `X_2..X_{n-1}`. Output
/// `B[i][j] = A[i][j] ∧ ¬(X_i ∧ ¬X_j)` with `X_1 = 1`, `X_n = 0`.
pub fn synth_unreach(n: usize) -> Result<Circuit> {
    if n < 2 {
        return Err(Error::Parameter("s-t unreachability needs n >= 2".into()));
    }
    let mut b = Builder::new(n * n + n - 2);
    let a = b.inputs(0..n * n);
    let mut x = vec![b.constant(true)];
    x.extend(b.inputs(n * n..n * n + n - 2));
    x.push(b.constant(false));
    let mut outputs = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let nj = b.not(x[j]);
            let leaves = b.and(x[i], nj);
            let stays = b.not(leaves);
            outputs.push(b.and(a[i * n + j], stays));
        }
    }
    Ok(b.finish(outputs))
}

/// Result of the greedy triangle decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    /// One coefficient per basis triangle.
    pub coeffs: Vec<bool>,
    /// `d(G) = (longest edge length, number of edges of that length)` before
    /// each step.
    pub trace: Vec<(usize, usize)>,
}

/// Longest edge length and its multiplicity over a pair-indexed edge set.
fn potential(n: usize, edges: &[bool]) -> Option<(usize, usize, (usize, usize))> {
    // Lengths are scanned from the longest down; ties go to the smallest pair.
    for len in (1..n).rev() {
        let mut first = None;
        let mut count = 0;
        for u in 0..n - len {
            if edges[pair_index(n, u, u + len)] {
                count += 1;
                first.get_or_insert((u, u + len));
            }
        }
        if let Some(e) = first {
            return Some((len, count, e));
        }
    }
    None
}

/// Writes `G` as a sum of basis triangles: repeatedly cancel the
/// lexicographically smallest longest edge `(u, v)` with the triangle
/// `(u, u + ⌊(v-u)/2⌋, v)`.
pub fn decompose_cycles(basis: &TriangleBasis, word: &[bool]) -> Result<Decomposition> {
    let n = check_undirected(word)?;
    if n != basis.n {
        return Err(Error::Encoding(format!(
            "graph has {n} vertices, basis expects {}",
            basis.n
        )));
    }
    let mut edges = vec![false; num_pairs(n)];
    let mut degree = vec![0usize; n];
    for u in 0..n {
        for v in u + 1..n {
            if word[u * n + v] {
                edges[pair_index(n, u, v)] = true;
                degree[u] += 1;
                degree[v] += 1;
            }
        }
    }
    if let Some(v) = degree.iter().position(|d| d % 2 == 1) {
        return Err(Error::Witness(format!(
            "vertex {} has odd degree, so the graph is not a union of cycles",
            v + 1
        )));
    }
    decompose_pairs(basis, edges)
}

fn decompose_pairs(basis: &TriangleBasis, mut edges: Vec<bool>) -> Result<Decomposition> {
    let n = basis.n;
    let mut coeffs = vec![false; basis.len()];
    let mut trace = Vec::new();
    while let Some((len, count, (u, v))) = potential(n, &edges) {
        trace.push((len, count));
        let t = [u, u + len / 2, v];
        let idx = basis
            .position(t)
            .ok_or_else(|| Error::Witness(format!("edge ({}, {}) lies on no basis triangle", u + 1, v + 1)))?;
        coeffs[idx] ^= true;
        for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[0], t[2])] {
            edges[pair_index(n, a, b)] ^= true;
        }
    }
    Ok(Decomposition { coeffs, trace })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GraphKind {
    Cycles,
    UstConn,
    UnReach,
}

impl GraphKind {
    pub fn spec(self) -> LanguageSpec {
        match self {
            GraphKind::Cycles => LanguageSpec::Cycles,
            GraphKind::UstConn => LanguageSpec::UstConn,
            GraphKind::UnReach => LanguageSpec::UnReach,
        }
    }

    pub fn synthesize(self, n: usize) -> Result<Circuit> {
        match self {
            GraphKind::Cycles => Ok(synth_cycles(n)),
            GraphKind::UstConn => synth_ustconn(n),
            GraphKind::UnReach => synth_unreach(n),
        }
    }
}

/// Proof generator for one graph family and vertex count. Decompositions of
/// s-t path cycles are cached and BFS scratch is reused, which makes
/// sweeping every member of a slice cheap.
#[derive(Debug, Clone)]
pub struct GraphProver {
    kind: GraphKind,
    n: usize,
    basis: TriangleBasis,
    path_cache: FxHashMap<Vec<usize>, Vec<bool>>,
    parent: Vec<usize>,
    queue: VecDeque<usize>,
    path: Vec<usize>,
    on_path: Vec<bool>,
}

impl GraphProver {
    pub fn new(kind: GraphKind, n: usize) -> Self {
        GraphProver {
            kind,
            n,
            basis: triangle_basis(n),
            path_cache: FxHashMap::default(),
            parent: Vec::new(),
            queue: VecDeque::new(),
            path: Vec::new(),
            on_path: Vec::new(),
        }
    }

    pub fn basis(&self) -> &TriangleBasis {
        &self.basis
    }

    pub fn prove(&mut self, word: &[bool]) -> Result<Vec<bool>> {
        let mut proof = Vec::new();
        self.prove_into(word, &mut proof)?;
        Ok(proof)
    }

    /// [`GraphProver::prove`] writing into a reused buffer.
    pub fn prove_into(&mut self, word: &[bool], proof: &mut Vec<bool>) -> Result<()> {
        let n = graph_order(word)?;
        if n != self.n {
            return Err(Error::Witness(format!(
                "expected a graph on {} vertices, got {n}",
                self.n
            )));
        }
        proof.clear();
        match self.kind {
            GraphKind::Cycles => proof.extend(decompose_cycles(&self.basis, word)?.coeffs),
            GraphKind::UstConn => self.prove_ustconn(word, proof)?,
            GraphKind::UnReach => {
                let reach = reachable_from(word, n, 0);
                if n < 2 || reach[n - 1] {
                    return Err(Error::Witness(format!("vertex {n} is reachable from 1")));
                }
                proof.extend_from_slice(word);
                proof.extend(&reach[1..n - 1]);
            }
        }
        Ok(())
    }

    fn prove_ustconn(&mut self, word: &[bool], proof: &mut Vec<bool>) -> Result<()> {
        let n = self.n;
        let found = if n <= 64 {
            self.bfs_path_bits(word)?
        } else {
            check_undirected(word)?;
            bfs_path(word, n, &mut self.parent, &mut self.queue, &mut self.path)
        };
        if !found {
            return Err(Error::Witness(format!("vertices 1 and {n} are not connected")));
        }
        let path = &self.path;
        if let Some(coeffs) = self.path_cache.get(path.as_slice()) {
            proof.extend_from_slice(coeffs);
        } else {
            // The path closed by the edge (1, n) is a cycle (or empty).
            let mut edges = vec![false; num_pairs(n)];
            for w in path.windows(2) {
                let (a, b) = (w[0].min(w[1]), w[0].max(w[1]));
                edges[pair_index(n, a, b)] ^= true;
            }
            edges[pair_index(n, 0, n - 1)] ^= true;
            let coeffs = decompose_pairs(&self.basis, edges)
                .expect("a closed path has even degrees")
                .coeffs;
            proof.extend_from_slice(&coeffs);
            self.path_cache.insert(path.clone(), coeffs);
        }
        self.on_path.clear();
        self.on_path.resize(num_pairs(n), false);
        for w in path.windows(2) {
            self.on_path[pair_index(n, w[0].min(w[1]), w[0].max(w[1]))] = true;
        }
        let mut e = 0;
        for u in 0..n {
            for v in u + 1..n {
                proof.push(word[u * n + v] && !self.on_path[e]);
                e += 1;
            }
        }
        Ok(())
    }
}

impl GraphProver {
    /// [`bfs_path`] over adjacency bitmasks, validating symmetry and the
    /// empty diagonal in the same pass.
    fn bfs_path_bits(&mut self, word: &[bool]) -> Result<bool> {
        let n = self.n;
        let mut adj = [0u64; 64];
        for u in 0..n {
            let row = &word[u * n..(u + 1) * n];
            for (v, &b) in row.iter().enumerate() {
                adj[u] |= (b as u64) << v;
            }
        }
        for u in 0..n {
            if adj[u] >> u & 1 == 1 {
                return Err(Error::Encoding(format!("self-loop at vertex {}", u + 1)));
            }
            let mut rest = adj[u];
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                if adj[v] >> u & 1 == 0 {
                    return Err(Error::Encoding(format!(
                        "asymmetric entries for edge ({}, {})",
                        u + 1,
                        v + 1
                    )));
                }
            }
        }
        self.parent.clear();
        self.parent.resize(n, usize::MAX);
        self.parent[0] = 0;
        self.queue.clear();
        self.queue.push_back(0);
        let mut seen = 1u64;
        while let Some(u) = self.queue.pop_front() {
            if u == n - 1 {
                break;
            }
            let mut next = adj[u] & !seen;
            seen |= next;
            while next != 0 {
                let v = next.trailing_zeros() as usize;
                next &= next - 1;
                self.parent[v] = u;
                self.queue.push_back(v);
            }
        }
        if self.parent[n - 1] == usize::MAX {
            return Ok(false);
        }
        self.path.clear();
        self.path.push(n - 1);
        while *self.path.last().unwrap() != 0 {
            self.path.push(self.parent[*self.path.last().unwrap()]);
        }
        self.path.reverse();
        Ok(true)
    }
}

/// Breadth-first 1-to-n path into `path`, neighbours visited in increasing
/// order; false when none exists.
fn bfs_path(
    word: &[bool],
    n: usize,
    parent: &mut Vec<usize>,
    queue: &mut VecDeque<usize>,
    path: &mut Vec<usize>,
) -> bool {
    parent.clear();
    parent.resize(n, usize::MAX);
    parent[0] = 0;
    queue.clear();
    queue.push_back(0);
    while let Some(u) = queue.pop_front() {
        if u == n - 1 {
            break;
        }
        for v in 0..n {
            if word[u * n + v] && parent[v] == usize::MAX {
                parent[v] = u;
                queue.push_back(v);
            }
        }
    }
    if parent[n - 1] == usize::MAX {
        return false;
    }
    path.clear();
    path.push(n - 1);
    while *path.last().unwrap() != 0 {
        path.push(parent[*path.last().unwrap()]);
    }
    path.reverse();
    true
}

/// Proof that the circuit of `kind` on `graph_order(word)` vertices maps to
/// `word`.
pub fn witness_graph(kind: GraphKind, word: &[bool]) -> Result<Vec<bool>> {
    let n = graph_order(word)?;
    GraphProver::new(kind, n).prove(word)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::word_from_index;
    use std::collections::BTreeSet;

    fn graph(n: usize, edges: &[(usize, usize)]) -> Vec<bool> {
        let mut w = vec![false; n * n];
        for &(u, v) in edges {
            w[(u - 1) * n + (v - 1)] = true;
            w[(v - 1) * n + (u - 1)] = true;
        }
        w
    }

    fn range(c: &Circuit) -> BTreeSet<Vec<bool>> {
        (0..1u64 << c.num_inputs())
            .map(|x| c.eval(&word_from_index(x, c.num_inputs())).unwrap())
            .collect()
    }

    #[test]
    fn pair_indices_are_dense() {
        let n = 7;
        let mut next = 0;
        for u in 0..n {
            for v in u + 1..n {
                assert_eq!(pair_index(n, u, v), next);
                next += 1;
            }
        }
        assert_eq!(next, num_pairs(n));
    }

    #[test]
    fn small_bases() {
        assert_eq!(triangle_basis(3).triangles(), &[[0, 1, 2]]);
        assert_eq!(triangle_basis(4).triangles(), &[[0, 1, 2], [0, 1, 3], [1, 2, 3]]);
        assert!(triangle_basis(2).is_empty());
    }

    #[test]
    fn single_triangle_and_empty_inputs() {
        let c = synth_cycles(3);
        assert_eq!(c.eval(&[true]).unwrap(), graph(3, &[(1, 2), (2, 3), (1, 3)]));
        let c = synth_cycles(6);
        assert_eq!(c.eval(&vec![false; c.num_inputs()]).unwrap(), vec![false; 36]);
    }

    #[test]
    fn cycles_range_small() {
        for n in 3..=5 {
            let c = synth_cycles(n);
            let expected: BTreeSet<_> = LanguageSpec::Cycles
                .enumerate_slice(n, 1 << 20)
                .unwrap()
                .into_iter()
                .collect();
            assert_eq!(range(&c), expected);
            assert!(c.metrics().max_cone() <= 6);
        }
    }

    #[test]
    fn decomposition_examples() {
        let basis = triangle_basis(3);
        let d = decompose_cycles(&basis, &graph(3, &[(1, 2), (2, 3), (1, 3)])).unwrap();
        assert_eq!(d.coeffs, vec![true]);
        assert_eq!(d.trace, vec![(2, 1)]);

        let basis = triangle_basis(4);
        let square = graph(4, &[(1, 2), (2, 3), (3, 4), (1, 4)]);
        let d = decompose_cycles(&basis, &square).unwrap();
        assert_eq!(d.coeffs.iter().filter(|&&b| b).count(), 2);
        assert_eq!(synth_cycles(4).eval(&d.coeffs).unwrap(), square);
        assert!(d.trace.windows(2).all(|w| w[1] < w[0]));

        assert!(matches!(
            decompose_cycles(&basis, &graph(4, &[(1, 2)])),
            Err(Error::Witness(_))
        ));
    }

    #[test]
    fn ustconn_examples() {
        let n = 4;
        let c = synth_ustconn(n).unwrap();
        let zero = vec![false; c.num_inputs()];
        assert_eq!(c.eval(&zero).unwrap(), graph(n, &[(1, 4)]));
        let mut masked = zero.clone();
        for bit in masked[triangle_basis(n).len()..].iter_mut() {
            *bit = true;
        }
        let out = c.eval(&masked).unwrap();
        assert!(LanguageSpec::UstConn.member(&out).unwrap());
        assert_eq!(out, graph(n, &[(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]));

        let c2 = synth_ustconn(2).unwrap();
        assert_eq!(c2.eval(&[false]).unwrap(), graph(2, &[(1, 2)]));
        assert_eq!(c2.eval(&[true]).unwrap(), graph(2, &[(1, 2)]));
    }

    #[test]
    fn ustconn_range_small() {
        for n in 3..=4 {
            let c = synth_ustconn(n).unwrap();
            let expected: BTreeSet<_> = LanguageSpec::UstConn
                .enumerate_slice(n, 1 << 20)
                .unwrap()
                .into_iter()
                .collect();
            assert_eq!(range(&c), expected);
        }
    }

    #[test]
    fn ustconn_path_witness() {
        let n = 6;
        let path: Vec<(usize, usize)> = (1..n).map(|i| (i, i + 1)).collect();
        let g = graph(n, &path);
        let proof = witness_graph(GraphKind::UstConn, &g).unwrap();
        let t = triangle_basis(n).len();
        assert!(proof[t..].iter().all(|&b| !b));
        assert_eq!(synth_ustconn(n).unwrap().eval(&proof).unwrap(), g);
    }

    #[test]
    fn unreach_examples() {
        let n = 3;
        let c = synth_unreach(n).unwrap();
        assert_eq!(c.eval(&[false; 10]).unwrap(), vec![false; 9]);
        let mut a = vec![false; 9];
        a[1] = true; // 1 -> 2
        let mut input = a.clone();
        input.push(true); // X_2 = 1
        assert_eq!(c.eval(&input).unwrap(), a);

        let expected: BTreeSet<_> = LanguageSpec::UnReach
            .enumerate_slice(n, 1 << 20)
            .unwrap()
            .into_iter()
            .collect();
        assert_eq!(range(&c), expected);
        assert!(c.metrics().max_cone() <= 3);

        let empty = vec![false; 16];
        let proof = witness_graph(GraphKind::UnReach, &empty).unwrap();
        assert_eq!(&proof[16..], &[false, false]);
    }

    #[test]
    fn witnesses_cover_small_slices() {
        for kind in [GraphKind::Cycles, GraphKind::UstConn, GraphKind::UnReach] {
            let n = 4;
            let c = kind.synthesize(n).unwrap();
            let mut prover = GraphProver::new(kind, n);
            for word in kind.spec().enumerate_slice(n, 1 << 20).unwrap() {
                let proof = prover.prove(&word).unwrap();
                assert_eq!(c.eval(&proof).unwrap(), word, "{kind:?}");
            }
        }
    }
}
