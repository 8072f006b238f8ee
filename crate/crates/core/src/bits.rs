//! Bit-vector helpers shared by the file formats and the CLI.

use crate::error::{Error, Result};

/// Parses a `0`/`1` string.
pub fn parse_bits(s: &str) -> Result<Vec<bool>> {
    s.trim()
        .chars()
        .map(|ch| match ch {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::Encoding(format!("`{other}` is not a bit"))),
        })
        .collect()
}

pub fn format_bits(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// Smallest `b` with `2^b >= x` (0 for `x <= 1`).
pub fn ceil_log2(x: usize) -> usize {
    if x <= 1 {
        0
    } else {
        (usize::BITS - (x - 1).leading_zeros()) as usize
    }
}

/// Writes `value` into `out` as `out.len()` bits, most significant first.
pub fn write_msb_first(value: usize, out: &mut [bool]) {
    let k = out.len();
    for (i, bit) in out.iter_mut().enumerate() {
        *bit = value >> (k - 1 - i) & 1 == 1;
    }
}

pub fn read_msb_first(bits: &[bool]) -> usize {
    bits.iter().fold(0, |acc, &b| acc << 1 | b as usize)
}

/// The bits of `value` as a length-`len` vector, least significant first.
pub fn word_from_index(value: u64, len: usize) -> Vec<bool> {
    (0..len).map(|i| value >> i & 1 == 1).collect()
}

pub fn popcount(word: &[bool]) -> usize {
    word.iter().filter(|&&b| b).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_and_msb_roundtrip() {
        assert_eq!(ceil_log2(0), 0);
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(3), 2);
        assert_eq!(ceil_log2(4), 2);
        assert_eq!(ceil_log2(5), 3);
        let mut buf = [false; 3];
        write_msb_first(6, &mut buf);
        assert_eq!(buf, [true, true, false]);
        assert_eq!(read_msb_first(&buf), 6);
    }

    #[test]
    fn bit_strings() {
        assert_eq!(parse_bits("0110").unwrap(), vec![false, true, true, false]);
        assert_eq!(format_bits(&[true, false]), "10");
        assert!(parse_bits("01x").is_err());
    }
}
