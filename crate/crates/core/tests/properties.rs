use proptest::prelude::*;

use proofsys::bits::word_from_index;
use proofsys::circuit::{parse, serialize, Circuit, Gate};
use proofsys::combinators::{read_selector, selector_bits, upclose, upclose_proof};
use proofsys::graph::{decompose_cycles, synth_cycles, synth_ustconn, triangle_basis, GraphProver, GraphKind};

/// Random topologically ordered circuit over `m` inputs.
fn arb_circuit() -> impl Strategy<Value = Circuit> {
    (1usize..6, prop::collection::vec((0u8..5, any::<u32>(), any::<u32>()), 1..40), 1usize..5)
        .prop_flat_map(|(m, raw, k)| {
            let mut gates: Vec<Gate> = (0..m).map(Gate::Input).collect();
            for (op, a, b) in raw {
                let len = gates.len() as u32;
                let (a, b) = ((a % len) as usize, (b % len) as usize);
                gates.push(match op {
                    0 => Gate::Const(a % 2 == 0),
                    1 => Gate::Not(a),
                    2 | 3 => Gate::And(a, b),
                    _ => Gate::Or(a, b),
                });
            }
            let total = gates.len();
            prop::collection::vec(0..total, k)
                .prop_map(move |outs| Circuit::from_parts(m, gates.clone(), outs).unwrap())
        })
}

/// Output bit `o` under every assignment to the inputs.
fn truth(c: &Circuit, o: usize) -> Vec<bool> {
    let m = c.num_inputs();
    (0..1u64 << m)
        .map(|x| c.eval(&word_from_index(x, m)).unwrap()[o])
        .collect()
}

fn graph_word(n: usize, edges: &[bool]) -> Vec<bool> {
    let mut w = vec![false; n * n];
    let mut k = 0;
    for u in 0..n {
        for v in u + 1..n {
            w[u * n + v] = edges[k];
            w[v * n + u] = edges[k];
            k += 1;
        }
    }
    w
}

proptest! {
    #[test]
    fn text_roundtrip(c in arb_circuit()) {
        let back = parse(&serialize(&c)).unwrap();
        prop_assert_eq!(back.num_inputs(), c.num_inputs());
        prop_assert_eq!(back.num_outputs(), c.num_outputs());
        for o in 0..c.num_outputs() {
            prop_assert_eq!(truth(&back, o), truth(&c, o));
        }
    }

    #[test]
    fn outputs_ignore_inputs_outside_cone(c in arb_circuit(), x in any::<u64>(), flip in 0usize..6) {
        let m = c.num_inputs();
        let i = flip % m;
        let a = word_from_index(x, m);
        let mut b = a.clone();
        b[i] = !b[i];
        let (ya, yb) = (c.eval(&a).unwrap(), c.eval(&b).unwrap());
        for o in 0..c.num_outputs() {
            if !c.cone(o).contains(&i) {
                prop_assert_eq!(ya[o], yb[o]);
            }
        }
    }

    #[test]
    fn selector_is_total(bits in prop::collection::vec(any::<bool>(), 0..6), k in 1usize..40) {
        let w = selector_bits(k).min(bits.len());
        prop_assert!(read_selector(&bits[..w], k) < k);
    }

    #[test]
    fn upclose_outputs_dominate(c in arb_circuit(), x in any::<u64>(), mask in any::<u64>()) {
        let n = c.num_outputs();
        let inner = word_from_index(x, c.num_inputs());
        let mask = word_from_index(mask, n);
        let y = c.eval(&inner).unwrap();
        let z = upclose(&c).eval(&upclose_proof(&inner, &mask)).unwrap();
        for j in 0..n {
            prop_assert_eq!(z[j], y[j] || mask[j]);
        }
    }

    #[test]
    fn cycles_range_closed_under_xor(n in 3usize..8, a in any::<u64>(), b in any::<u64>()) {
        let c = synth_cycles(n);
        let m = c.num_inputs();
        let (pa, pb) = (word_from_index(a, m), word_from_index(b, m));
        let px: Vec<bool> = pa.iter().zip(&pb).map(|(x, y)| x ^ y).collect();
        let (ya, yb, yx) = (c.eval(&pa).unwrap(), c.eval(&pb).unwrap(), c.eval(&px).unwrap());
        for i in 0..ya.len() {
            prop_assert_eq!(yx[i], ya[i] ^ yb[i]);
        }
    }

    #[test]
    fn even_graphs_decompose(n in 3usize..9, seed in any::<u64>()) {
        let basis = triangle_basis(n);
        let c = synth_cycles(n);
        let y = c.eval(&word_from_index(seed, c.num_inputs())).unwrap();
        let d = decompose_cycles(&basis, &y).unwrap();
        prop_assert_eq!(c.eval(&d.coeffs).unwrap(), y);
    }

    #[test]
    fn ustconn_witness_reproduces_word(n in 3usize..8, seed in any::<u64>()) {
        let pairs = n * (n - 1) / 2;
        let mut edges = word_from_index(seed, pairs);
        // Force a path 1 - n through a middle vertex so the word is a member.
        let idx = |u: usize, v: usize| (0..u).map(|a| n - 1 - a).sum::<usize>() + v - u - 1;
        let mid = 1 + (seed as usize) % (n - 2);
        edges[idx(0, mid)] = true;
        edges[idx(mid, n - 1)] = true;
        let word = graph_word(n, &edges);
        let proof = GraphProver::new(GraphKind::UstConn, n).prove(&word).unwrap();
        prop_assert_eq!(synth_ustconn(n).unwrap().eval(&proof).unwrap(), word);
    }
}
