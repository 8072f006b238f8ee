//! Closure operations on proof-system circuits.
//!
//! Selector fields are read MSB first and values past the last choice are
//! clamped to it, so every proof input stays meaningful. Each combinator
//! has a matching `*_proof` helper that maps proofs of the parts to a proof
//! of the result.

use crate::bits::{ceil_log2, read_msb_first, write_msb_first};
use crate::circuit::{table_to_subcircuit, tabulate, Builder, Circuit, Gate, GateId};
use crate::error::{Error, Result};
use crate::languages::{Morphism, Side};

/// Width of a selector over `k` choices.
pub fn selector_bits(k: usize) -> usize {
    ceil_log2(k)
}

/// Selector value in `sel` (MSB first), clamped to `k - 1`.
pub fn read_selector(sel: &[bool], k: usize) -> usize {
    read_msb_first(sel).min(k - 1)
}

/// One gate per choice, true when the selector picks it.
fn decode_selector(b: &mut Builder, sel: &[GateId], k: usize) -> Vec<GateId> {
    (0..k)
        .map(|i| {
            let table = tabulate(sel.len(), |bits| read_selector(bits, k) == i);
            table_to_subcircuit(b, &table, sel)
        })
        .collect()
}

fn same_length(words: &[Vec<bool>]) -> Result<usize> {
    let len = words
        .first()
        .ok_or_else(|| Error::Parameter("the word set must not be empty".into()))?
        .len();
    if words.iter().any(|w| w.len() != len) {
        return Err(Error::Parameter("all words must have the same length".into()));
    }
    Ok(len)
}

/// Per-bit tables selecting a word of `words` by `sel`.
fn select_word(b: &mut Builder, sel: &[GateId], words: &[Vec<bool>]) -> Vec<GateId> {
    let len = words[0].len();
    (0..len)
        .map(|j| {
            let table = tabulate(sel.len(), |bits| words[read_selector(bits, words.len())][j]);
            table_to_subcircuit(b, &table, sel)
        })
        .collect()
}

/// Inputs: selector, then each branch's inputs in order.
pub fn union(branches: &[Circuit]) -> Result<Circuit> {
    let first = branches
        .first()
        .ok_or_else(|| Error::Parameter("union of no systems".into()))?;
    let n = first.num_outputs();
    if let Some(c) = branches.iter().find(|c| c.num_outputs() != n) {
        return Err(Error::Parameter(format!(
            "union needs equal output lengths, got {n} and {}",
            c.num_outputs()
        )));
    }
    let k = branches.len();
    let s = selector_bits(k);
    let total = s + branches.iter().map(Circuit::num_inputs).sum::<usize>();
    let mut b = Builder::new(total);
    let sel = b.inputs(0..s);
    let picks = decode_selector(&mut b, &sel, k);
    let mut offset = s;
    let mut outs = Vec::with_capacity(k);
    for c in branches {
        let map = b.inputs(offset..offset + c.num_inputs());
        outs.push(b.embed(c, &map));
        offset += c.num_inputs();
    }
    let outputs = (0..n)
        .map(|j| {
            let terms: Vec<GateId> = (0..k).map(|i| b.and(picks[i], outs[i][j])).collect();
            b.or_all(&terms)
        })
        .collect();
    Ok(b.finish(outputs))
}

/// Proof of [`union`] taking branch `branch` with `proof`; other branches
/// get all-zero inputs.
pub fn union_proof(branch_inputs: &[usize], branch: usize, proof: &[bool]) -> Vec<bool> {
    let s = selector_bits(branch_inputs.len());
    let mut out = vec![false; s];
    write_msb_first(branch, &mut out);
    for (i, &m) in branch_inputs.iter().enumerate() {
        if i == branch {
            out.extend_from_slice(proof);
        } else {
            out.extend(std::iter::repeat_n(false, m));
        }
    }
    out
}

/// Inputs: selector over `words`, then `c`'s inputs. Outputs the selected
/// word before (`Side::Left`) or after (`Side::Right`) `c`'s output.
pub fn concat_finite(words: &[Vec<bool>], c: &Circuit, side: Side) -> Result<Circuit> {
    same_length(words)?;
    let s = selector_bits(words.len());
    let mut b = Builder::new(s + c.num_inputs());
    let sel = b.inputs(0..s);
    let fixed = select_word(&mut b, &sel, words);
    let map = b.inputs(s..s + c.num_inputs());
    let inner = b.embed(c, &map);
    let outputs = match side {
        Side::Left => [fixed, inner].concat(),
        Side::Right => [inner, fixed].concat(),
    };
    Ok(b.finish(outputs))
}

pub fn concat_proof(num_words: usize, choice: usize, inner: &[bool]) -> Vec<bool> {
    let mut out = vec![false; selector_bits(num_words)];
    write_msb_first(choice, &mut out);
    out.extend_from_slice(inner);
    out
}

pub fn reverse(c: &Circuit) -> Circuit {
    let outputs: Vec<GateId> = c.outputs().iter().rev().copied().collect();
    Circuit::from_parts(c.num_inputs(), c.gates().to_vec(), outputs).expect("same gates")
}

/// Replaces every output bit by its `h`-image block.
pub fn morphism(h: &Morphism, c: &Circuit) -> Circuit {
    let mut b = Builder::new(c.num_inputs());
    let map = b.inputs(0..c.num_inputs());
    let outs = b.embed(c, &map);
    let mut outputs = Vec::with_capacity(outs.len() * h.block_len());
    for &o in &outs {
        for j in 0..h.block_len() {
            let table = [h.image(false)[j], h.image(true)[j]];
            outputs.push(table_to_subcircuit(&mut b, &table, &[o]));
        }
    }
    b.finish(outputs)
}

/// Maps each length-`k` output block back through `h`. When `h(0) = h(1)`
/// one choice bit per block is appended to the inputs and picks the
/// preimage; otherwise the block is decoded as `[block = h(1)]`.
///
/// Only sound when every block `c` can output is an image of `h`; see
/// `verify::check_block_contract`.
pub fn inverse_morphism(h: &Morphism, c: &Circuit) -> Result<Circuit> {
    let k = h.block_len();
    if !c.num_outputs().is_multiple_of(k) {
        return Err(Error::Parameter(format!(
            "block length {k} does not divide the output length {}",
            c.num_outputs()
        )));
    }
    let blocks = c.num_outputs() / k;
    let collide = h.image(false) == h.image(true);
    let extra = if collide { blocks } else { 0 };
    let mut b = Builder::new(c.num_inputs() + extra);
    let map = b.inputs(0..c.num_inputs());
    let outs = b.embed(c, &map);
    let table = tabulate(k, |bits| bits == h.image(true));
    let outputs = (0..blocks)
        .map(|i| {
            if collide {
                b.input(c.num_inputs() + i)
            } else {
                table_to_subcircuit(&mut b, &table, &outs[i * k..(i + 1) * k])
            }
        })
        .collect();
    Ok(b.finish(outputs))
}

/// Proof of [`inverse_morphism`] for the word `pre` whose image `c`
/// produces on `inner`.
pub fn inverse_morphism_proof(h: &Morphism, inner: &[bool], pre: &[bool]) -> Vec<bool> {
    let mut out = inner.to_vec();
    if h.image(false) == h.image(true) {
        out.extend_from_slice(pre);
    }
    out
}

/// Upward closure: output `i` becomes `c_i ∨ y_i` for fresh inputs `y`.
/// The original gates are kept verbatim, so depth grows by exactly one and
/// size by exactly the output count.
pub fn upclose(c: &Circuit) -> Circuit {
    let m = c.num_inputs();
    let n = c.num_outputs();
    let mut gates = c.gates().to_vec();
    let mut outputs = Vec::with_capacity(n);
    for (i, &o) in c.outputs().iter().enumerate() {
        gates.push(Gate::Input(m + i));
        gates.push(Gate::Or(o, gates.len() - 1));
        outputs.push(gates.len() - 1);
    }
    Circuit::from_parts(m + n, gates, outputs).expect("well-formed by construction")
}

pub fn upclose_proof(inner: &[bool], mask: &[bool]) -> Vec<bool> {
    [inner, mask].concat()
}

/// Selector over `words`, clamped; the range is exactly `words`.
pub fn finite_language(words: &[Vec<bool>]) -> Result<Circuit> {
    same_length(words)?;
    let s = selector_bits(words.len());
    let mut b = Builder::new(s);
    let sel = b.inputs(0..s);
    let outputs = select_word(&mut b, &sel, words);
    Ok(b.finish(outputs))
}

pub fn finite_proof(num_words: usize, choice: usize) -> Vec<bool> {
    concat_proof(num_words, choice, &[])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::{parse_bits, word_from_index};
    use crate::counting::synth_exact_count;
    use std::collections::BTreeSet;

    fn w(s: &str) -> Vec<bool> {
        parse_bits(s).unwrap()
    }

    fn range(c: &Circuit) -> BTreeSet<Vec<bool>> {
        (0..1u64 << c.num_inputs())
            .map(|x| c.eval(&word_from_index(x, c.num_inputs())).unwrap())
            .collect()
    }

    fn set(words: &[&str]) -> BTreeSet<Vec<bool>> {
        words.iter().map(|s| w(s)).collect()
    }

    #[test]
    fn finite_languages_and_clamping() {
        let c = finite_language(&[w("01")]).unwrap();
        assert_eq!(c.num_inputs(), 0);
        assert_eq!(range(&c), set(&["01"]));
        let c = finite_language(&[w("00"), w("01"), w("11")]).unwrap();
        assert_eq!(c.eval(&[true, true]).unwrap(), w("11"));
        assert_eq!(range(&c), set(&["00", "01", "11"]));
        assert!(finite_language(&[]).is_err());
    }

    #[test]
    fn unions() {
        let a = finite_language(&[w("00")]).unwrap();
        let b = finite_language(&[w("11")]).unwrap();
        assert_eq!(range(&union(std::slice::from_ref(&a)).unwrap()), set(&["00"]));
        assert_eq!(range(&union(&[a.clone(), b]).unwrap()), set(&["00", "11"]));
        let (e1, _) = synth_exact_count(3, 1).unwrap();
        let (e3, _) = synth_exact_count(3, 3).unwrap();
        let u = union(&[e1, e3]).unwrap();
        assert_eq!(range(&u), set(&["001", "010", "100", "111"]));
        assert!(union(&[a, finite_language(&[w("1")]).unwrap()]).is_err());
    }

    #[test]
    fn concatenation_and_reversal() {
        let all2 = finite_language(&[w("00"), w("01"), w("10"), w("11")]).unwrap();
        let c = concat_finite(&[w("1")], &all2, Side::Left).unwrap();
        assert_eq!(range(&c), set(&["100", "101", "110", "111"]));
        let c = concat_finite(&[vec![]], &all2, Side::Right).unwrap();
        assert_eq!(range(&c), range(&all2));
        let inner = finite_language(&[w("001"), w("011")]).unwrap();
        let c = concat_finite(&[w("01"), w("10")], &inner, Side::Right).unwrap();
        assert_eq!(range(&c), set(&["00101", "00110", "01101", "01110"]));
        let r = reverse(&inner);
        assert_eq!(range(&r), set(&["100", "110"]));
        assert_eq!(range(&reverse(&r)), range(&inner));
    }

    #[test]
    fn morphisms() {
        let c = finite_language(&[w("01")]).unwrap();
        let h = Morphism::new(w("00"), w("11")).unwrap();
        assert_eq!(range(&morphism(&h, &c)), set(&["0011"]));
        let id = Morphism::new(w("0"), w("1")).unwrap();
        assert_eq!(range(&morphism(&id, &c)), set(&["01"]));

        let hc = finite_language(&[w("0011")]).unwrap();
        assert_eq!(range(&inverse_morphism(&h, &hc).unwrap()), set(&["01"]));
        let flat = Morphism::new(w("00"), w("00")).unwrap();
        let zeros = finite_language(&[w("0000")]).unwrap();
        let inv = inverse_morphism(&flat, &zeros).unwrap();
        assert_eq!(range(&inv), set(&["00", "01", "10", "11"]));
        assert!(inverse_morphism(&h, &finite_language(&[w("001")]).unwrap()).is_err());
    }

    #[test]
    fn upward_closure() {
        let zero = finite_language(&[w("000")]).unwrap();
        assert_eq!(range(&upclose(&zero)).len(), 8);
        let (c, _) = synth_exact_count(3, 1).unwrap();
        let u = upclose(&c);
        let (m0, m1) = (c.metrics(), u.metrics());
        assert_eq!(m1.depth, m0.depth + 1);
        assert_eq!(m1.size, m0.size + 3);
        assert_eq!(range(&u), set(&["001", "010", "100", "011", "101", "110", "111"]));
        let proof = upclose_proof(&vec![false; c.num_inputs()], &[false; 3]);
        assert_eq!(u.eval(&proof).unwrap(), c.eval(&vec![false; c.num_inputs()]).unwrap());
    }
}
