//! Line-oriented text format.
//!
//! ```text
//! circuit <num_inputs> <num_gates> <num_outputs>
//! <id> INPUT <i> | <id> CONST <b> | <id> NOT <a> | <id> AND <a> <b> | <id> OR <a> <b>
//! outputs <id...>
//! ```

use std::fmt::Write;

use super::{Circuit, Gate};
use crate::error::{Error, Result};

pub fn serialize(c: &Circuit) -> String {
    let mut s = String::new();
    writeln!(
        s,
        "circuit {} {} {}",
        c.num_inputs(),
        c.gates().len(),
        c.num_outputs()
    )
    .unwrap();
    for (id, gate) in c.gates().iter().enumerate() {
        match *gate {
            Gate::Input(i) => writeln!(s, "{id} INPUT {i}"),
            Gate::Const(b) => writeln!(s, "{id} CONST {}", b as u8),
            Gate::Not(a) => writeln!(s, "{id} NOT {a}"),
            Gate::And(a, b) => writeln!(s, "{id} AND {a} {b}"),
            Gate::Or(a, b) => writeln!(s, "{id} OR {a} {b}"),
        }
        .unwrap();
    }
    s.push_str("outputs");
    for o in c.outputs() {
        write!(s, " {o}").unwrap();
    }
    s.push('\n');
    s
}

pub fn parse(text: &str) -> Result<Circuit> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .collect();
    parse_lines(&lines)
}

fn number(line: usize, tok: Option<&str>, what: &str) -> Result<usize> {
    let tok = tok.ok_or_else(|| Error::parse(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| Error::parse(line, format!("invalid {what} `{tok}`")))
}

/// Parses numbered lines; shared with formats that extend the header.
pub(crate) fn parse_lines(lines: &[(usize, &str)]) -> Result<Circuit> {
    let mut it = lines.iter().copied();
    let (hline, header) = it.next().ok_or_else(|| Error::parse(1, "empty input"))?;
    let mut toks = header.split_whitespace();
    if toks.next() != Some("circuit") {
        return Err(Error::parse(hline, "expected `circuit` header"));
    }
    let num_inputs = number(hline, toks.next(), "input count")?;
    let num_gates = number(hline, toks.next(), "gate count")?;
    let num_outputs = number(hline, toks.next(), "output count")?;
    if toks.next().is_some() {
        return Err(Error::parse(hline, "trailing tokens in header"));
    }

    let mut gates = Vec::with_capacity(num_gates);
    let mut outputs = None;
    for (line, text) in it {
        if outputs.is_some() {
            if text.trim().is_empty() {
                continue;
            }
            return Err(Error::parse(line, "content after `outputs` line"));
        }
        let mut toks = text.split_whitespace();
        let first = toks
            .next()
            .ok_or_else(|| Error::parse(line, "blank line"))?;
        if first == "outputs" {
            let ids = toks
                .map(|t| number(line, Some(t), "output id"))
                .collect::<Result<Vec<_>>>()?;
            outputs = Some((line, ids));
            continue;
        }
        let id = number(line, Some(first), "gate id")?;
        if id != gates.len() {
            return Err(Error::parse(
                line,
                format!("gate id {id} out of sequence (expected {})", gates.len()),
            ));
        }
        let kind = toks
            .next()
            .ok_or_else(|| Error::parse(line, "missing gate kind"))?;
        let args = toks
            .map(|t| number(line, Some(t), "operand"))
            .collect::<Result<Vec<_>>>()?;
        let arity = |want: usize| -> Result<()> {
            if args.len() == want {
                Ok(())
            } else {
                Err(Error::parse(
                    line,
                    format!("{kind} takes {want} argument(s), got {}", args.len()),
                ))
            }
        };
        let gate = match kind {
            "INPUT" => {
                arity(1)?;
                Gate::Input(args[0])
            }
            "CONST" => {
                arity(1)?;
                match args[0] {
                    0 => Gate::Const(false),
                    1 => Gate::Const(true),
                    v => return Err(Error::parse(line, format!("CONST value {v} is not a bit"))),
                }
            }
            "NOT" => {
                arity(1)?;
                Gate::Not(args[0])
            }
            "AND" => {
                arity(2)?;
                Gate::And(args[0], args[1])
            }
            "OR" => {
                arity(2)?;
                Gate::Or(args[0], args[1])
            }
            other => return Err(Error::parse(line, format!("unknown gate kind `{other}`"))),
        };
        if let Some(op) = gate.operands().find(|&o| o >= id) {
            return Err(Error::Structure(format!(
                "line {line}: gate {id} references gate {op}, which is not an earlier gate"
            )));
        }
        if let Gate::Input(i) = gate {
            if i >= num_inputs {
                return Err(Error::Structure(format!(
                    "line {line}: input index {i} out of range for {num_inputs} inputs"
                )));
            }
        }
        gates.push(gate);
    }

    let last = lines.last().map_or(1, |l| l.0);
    let (oline, outputs) = outputs.ok_or_else(|| Error::parse(last, "missing `outputs` line"))?;
    if gates.len() != num_gates {
        return Err(Error::parse(
            oline,
            format!("header declares {num_gates} gates, found {}", gates.len()),
        ));
    }
    if outputs.len() != num_outputs {
        return Err(Error::parse(
            oline,
            format!("header declares {num_outputs} outputs, found {}", outputs.len()),
        ));
    }
    if let Some(bad) = outputs.iter().find(|&&o| o >= gates.len()) {
        return Err(Error::Structure(format!(
            "line {oline}: output references missing gate {bad}"
        )));
    }
    Circuit::from_parts(num_inputs, gates, outputs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Builder;

    #[test]
    fn empty_circuit_is_two_lines() {
        let c = Builder::new(0).finish(vec![]);
        let text = serialize(&c);
        assert_eq!(text, "circuit 0 0 0\noutputs\n");
        assert_eq!(parse(&text).unwrap(), c);
    }

    #[test]
    fn identity_is_three_lines() {
        let mut b = Builder::new(1);
        let x = b.input(0);
        let c = b.finish(vec![x]);
        let text = serialize(&c);
        assert_eq!(text, "circuit 1 1 1\n0 INPUT 0\noutputs 0\n");
        assert_eq!(parse(&text).unwrap(), c);
    }

    #[test]
    fn forward_reference_is_a_structure_error() {
        let text = "circuit 1 2 1\n0 NOT 1\n1 INPUT 0\noutputs 0\n";
        assert!(matches!(parse(text), Err(Error::Structure(_))));
        let text = "circuit 1 1 1\n0 NOT 0\noutputs 0\n";
        assert!(matches!(parse(text), Err(Error::Structure(_))));
    }

    #[test]
    fn header_count_mismatch_is_a_parse_error() {
        let text = "circuit 1 2 1\n0 INPUT 0\noutputs 0\n";
        assert!(matches!(parse(text), Err(Error::Parse { line: 3, .. })));
        let text = "circuit 1 1 2\n0 INPUT 0\noutputs 0\n";
        assert!(matches!(parse(text), Err(Error::Parse { .. })));
    }

    #[test]
    fn malformed_lines_report_line_numbers() {
        let text = "circuit 2 2 1\n0 INPUT 0\n1 XOR 0 0\noutputs 1\n";
        assert!(matches!(parse(text), Err(Error::Parse { line: 3, .. })));
        let text = "circuit 2 2 1\n0 INPUT 0\n1 AND 0\noutputs 1\n";
        assert!(matches!(parse(text), Err(Error::Parse { line: 3, .. })));
        let text = "circuit 2 1 1\n0 CONST 2\noutputs 0\n";
        assert!(matches!(parse(text), Err(Error::Parse { line: 2, .. })));
        let text = "graph 2 1 1\n";
        assert!(matches!(parse(text), Err(Error::Parse { line: 1, .. })));
    }
}
