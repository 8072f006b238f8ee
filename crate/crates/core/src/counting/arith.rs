//! Constant-alternation arithmetic on little-endian gate vectors.
//!
//! Comparison and carry computation use balanced prefix ANDs, so depth is
//! logarithmic in the operand width and the alternation count is fixed.

use crate::circuit::{Builder, GateId};

pub fn constant(b: &mut Builder, value: usize, width: usize) -> Vec<GateId> {
    (0..width).map(|i| b.constant(value >> i & 1 == 1)).collect()
}

fn padded(b: &mut Builder, x: &[GateId], width: usize) -> Vec<GateId> {
    let mut out = x.to_vec();
    while out.len() < width {
        out.push(b.constant(false));
    }
    out
}

/// `x < y`
pub fn less_than(b: &mut Builder, x: &[GateId], y: &[GateId]) -> GateId {
    let m = x.len().max(y.len());
    let (x, y) = (padded(b, x, m), padded(b, y, m));
    let same: Vec<GateId> = (0..m).map(|i| b.xnor(x[i], y[i])).collect();
    let terms: Vec<GateId> = (0..m)
        .map(|i| {
            let nx = b.not(x[i]);
            let mut parts = vec![nx, y[i]];
            parts.extend_from_slice(&same[i + 1..]);
            b.and_all(&parts)
        })
        .collect();
    b.or_all(&terms)
}

/// `x <= y`
pub fn less_equal(b: &mut Builder, x: &[GateId], y: &[GateId]) -> GateId {
    let gt = less_than(b, y, x);
    b.not(gt)
}

pub fn equal(b: &mut Builder, x: &[GateId], y: &[GateId]) -> GateId {
    let m = x.len().max(y.len());
    let (x, y) = (padded(b, x, m), padded(b, y, m));
    let same: Vec<GateId> = (0..m).map(|i| b.xnor(x[i], y[i])).collect();
    b.and_all(&same)
}

/// `x + y` with one extra output bit; carries by lookahead.
pub fn add(b: &mut Builder, x: &[GateId], y: &[GateId]) -> Vec<GateId> {
    let m = x.len().max(y.len());
    let (x, y) = (padded(b, x, m), padded(b, y, m));
    let generate: Vec<GateId> = (0..m).map(|i| b.and(x[i], y[i])).collect();
    let propagate: Vec<GateId> = (0..m).map(|i| b.or(x[i], y[i])).collect();
    let carry: Vec<GateId> = (0..=m)
        .map(|i| {
            let terms: Vec<GateId> = (0..i)
                .map(|j| {
                    let mut parts = vec![generate[j]];
                    parts.extend_from_slice(&propagate[j + 1..i]);
                    b.and_all(&parts)
                })
                .collect();
            b.or_all(&terms)
        })
        .collect();
    let mut sum: Vec<GateId> = (0..m)
        .map(|i| {
            let half = b.xor(x[i], y[i]);
            b.xor(half, carry[i])
        })
        .collect();
    sum.push(carry[m]);
    sum
}

/// `min(x, max)`
pub fn clamp(b: &mut Builder, x: &[GateId], max: usize) -> Vec<GateId> {
    if x.len() < usize::BITS as usize && (1usize << x.len()) - 1 <= max {
        return x.to_vec();
    }
    let width = x.len();
    let limit = constant(b, max, width);
    let over = less_than(b, &limit, x);
    let keep = b.not(over);
    (0..width)
        .map(|i| {
            if max >> i & 1 == 1 {
                b.or(over, x[i])
            } else {
                b.and(keep, x[i])
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn value(bits: &[bool]) -> usize {
        bits.iter().rev().fold(0, |acc, &b| acc << 1 | b as usize)
    }

    /// Evaluates a two-operand circuit on all pairs of `w`-bit values.
    fn check(w: usize, build: impl Fn(&mut Builder, &[GateId], &[GateId]) -> Vec<GateId>, f: impl Fn(usize, usize) -> usize) {
        let mut b = Builder::new(2 * w);
        let x = b.inputs(0..w);
        let y = b.inputs(w..2 * w);
        let out = build(&mut b, &x, &y);
        let c = b.finish(out);
        for u in 0..1usize << w {
            for v in 0..1usize << w {
                let input: Vec<bool> = (0..w)
                    .map(|i| u >> i & 1 == 1)
                    .chain((0..w).map(|i| v >> i & 1 == 1))
                    .collect();
                assert_eq!(value(&c.eval(&input).unwrap()), f(u, v), "u={u} v={v}");
            }
        }
        assert!(c.metrics().alternations <= 6);
    }

    #[test]
    fn arithmetic_matches_integers() {
        for w in 1..=4 {
            check(w, add, |u, v| u + v);
            check(w, |b, x, y| vec![less_than(b, x, y)], |u, v| (u < v) as usize);
            check(w, |b, x, y| vec![less_equal(b, x, y)], |u, v| (u <= v) as usize);
            check(w, |b, x, y| vec![equal(b, x, y)], |u, v| (u == v) as usize);
            check(w, |b, x, _| clamp(b, x, 5), |u, _| u.min(5));
        }
    }
}
