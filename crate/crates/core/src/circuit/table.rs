use super::{Builder, GateId};

/// Lowers a truth table over `inputs` into a DNF subcircuit and returns the
/// gate computing it.
///
/// Row index `r` assigns bit `k-1-i` of `r` to `inputs[i]`, so the first wire
/// is the most significant. Each true row becomes a balanced AND of literals
/// and the rows are joined by a balanced OR. No minimization is attempted;
/// the local depth is at most `ceil(log2 k) + ceil(log2 #true_rows) + 1`.
pub fn table_to_subcircuit(b: &mut Builder, table: &[bool], inputs: &[GateId]) -> GateId {
    let k = inputs.len();
    assert_eq!(table.len(), 1usize << k, "truth table must have 2^k rows");
    if k == 0 {
        return b.constant(table[0]);
    }
    if table.iter().all(|&v| !v) {
        return b.constant(false);
    }
    if table.iter().all(|&v| v) {
        return b.constant(true);
    }
    let negated: Vec<GateId> = inputs.iter().map(|&g| b.not(g)).collect();
    let mut rows = Vec::new();
    let mut literals = Vec::with_capacity(k);
    for (r, _) in table.iter().enumerate().filter(|(_, &v)| v) {
        literals.clear();
        for i in 0..k {
            let bit = r >> (k - 1 - i) & 1 == 1;
            literals.push(if bit { inputs[i] } else { negated[i] });
        }
        rows.push(b.and_all(&literals));
    }
    b.or_all(&rows)
}

/// Tabulates `f` over all `2^k` rows, MSB-first like [`table_to_subcircuit`].
pub fn tabulate(k: usize, mut f: impl FnMut(&[bool]) -> bool) -> Vec<bool> {
    let mut bits = vec![false; k];
    (0..1usize << k)
        .map(|r| {
            for (i, bit) in bits.iter_mut().enumerate() {
                *bit = r >> (k - 1 - i) & 1 == 1;
            }
            f(&bits)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ceil_log2(x: usize) -> usize {
        if x <= 1 {
            0
        } else {
            (usize::BITS - (x - 1).leading_zeros()) as usize
        }
    }

    fn lower(table: &[bool], k: usize) -> crate::circuit::Circuit {
        let mut b = Builder::new(k);
        let v = b.inputs(0..k);
        let g = table_to_subcircuit(&mut b, table, &v);
        b.finish(vec![g])
    }

    #[test]
    fn all_false_is_const_zero() {
        let c = lower(&[false; 8], 3);
        assert_eq!(c.gates()[c.outputs()[0]], crate::circuit::Gate::Const(false));
    }

    #[test]
    fn zero_arity_emits_the_single_entry() {
        for v in [false, true] {
            let c = lower(&[v], 0);
            assert_eq!(c.eval(&[]).unwrap(), vec![v]);
        }
    }

    #[test]
    fn xor_table_exhaustive() {
        let table = tabulate(2, |x| x[0] ^ x[1]);
        let c = lower(&table, 2);
        for r in 0..4 {
            let x = [r >> 1 & 1 == 1, r & 1 == 1];
            assert_eq!(c.eval(&x).unwrap()[0], x[0] ^ x[1]);
        }
    }

    #[test]
    fn two_bit_label_equality_against_direct_predicate() {
        // Labels p = (x0 x1), q = (x2 x3), MSB first.
        let table = tabulate(4, |x| x[0] == x[2] && x[1] == x[3]);
        let c = lower(&table, 4);
        for r in 0..16usize {
            let x: Vec<bool> = (0..4).map(|i| r >> (3 - i) & 1 == 1).collect();
            let p = r >> 2;
            let q = r & 3;
            assert_eq!(c.eval(&x).unwrap()[0], p == q, "row {r}");
        }
    }

    #[test]
    fn depth_bound_holds() {
        for k in 1..=6usize {
            for seed in 0..20u64 {
                let table: Vec<bool> = (0..1usize << k)
                    .map(|r| (r as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15 ^ seed) >> 61 & 1 == 1)
                    .collect();
                let trues = table.iter().filter(|&&v| v).count();
                let c = lower(&table, k);
                if trues > 0 && trues < table.len() {
                    assert!(c.depth() <= ceil_log2(k) + ceil_log2(trues) + 1);
                }
                for (r, &want) in table.iter().enumerate() {
                    let x: Vec<bool> = (0..k).map(|i| r >> (k - 1 - i) & 1 == 1).collect();
                    assert_eq!(c.eval(&x).unwrap()[0], want);
                }
            }
        }
    }
}
