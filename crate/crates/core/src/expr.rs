//! Language expressions: base families plus combinator trees, with a small
//! text syntax shared by the command line.
//!
//! Expression syntax:
//!
//! ```text
//! regular(FILE, n)   structured(FILE)   threshold(n, t)   exact(n, t)
//! cycles(n)   ustconn(n)   unreach(n)
//! sac(FILE)   cosac(FILE)   padded(FILE, n)   copadded(FILE, n)
//! union(e, ...)   concat([w, ...], e)   concat(e, [w, ...])
//! reverse(e)   morph(w0, w1, e)   invmorph(w0, w1, e)   upclose(e)
//! finite([w, ...])
//! ```
//!
//! Words are bit strings; `eps` is the empty word. Short specs use colons:
//! `regular:FILE:n`, `structured:FILE`, `threshold:n:t`, `exact:n:t`,
//! `cycles:n`, `ustconn:n`, `unreach:n`, `sac:FILE`, `co-sac:FILE`,
//! `padded:FILE:n`, `co-padded:FILE:n`, `expr:EXPRESSION`.

use std::path::Path;

use crate::bits::parse_bits;
use crate::circuit::Circuit;
use crate::combinators as comb;
use crate::counting::{synth_exact_count, synth_threshold, witness_count, CountKind};
use crate::error::{Error, Result};
use crate::graph::{witness_graph, GraphKind};
use crate::languages::{parse_automaton, Automaton, Combined, LanguageSpec, Morphism, Side};
use crate::np::{pad_language, synth_co_sac, synth_sac, witness_np, PadKind, VerifierCircuit};
use crate::regular::{parse_bp, unroll, LayeredBp, RegularScheme};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Regular { automaton: Automaton, n: usize },
    Structured(LayeredBp),
    Threshold { n: usize, t: usize },
    Exact { n: usize, t: usize },
    Graph { kind: GraphKind, n: usize },
    /// `co_sac` picks the dual construction; both have the same range for
    /// `PadKind::Padded`.
    Np { verifier: VerifierCircuit, pad: PadKind, co_sac: bool },
    Union(Vec<Expr>),
    Concat { words: Vec<Vec<bool>>, inner: Box<Expr>, side: Side },
    Reverse(Box<Expr>),
    Morph { h: Morphism, inner: Box<Expr> },
    InvMorph { h: Morphism, inner: Box<Expr> },
    UpClose(Box<Expr>),
    Finite(Vec<Vec<bool>>),
}

impl Expr {
    pub fn language(&self) -> LanguageSpec {
        match self {
            Expr::Regular { automaton, .. } => LanguageSpec::Regular(automaton.clone()),
            Expr::Structured(bp) => LanguageSpec::Branching(bp.clone()),
            Expr::Threshold { t, .. } => LanguageSpec::Threshold(*t),
            Expr::Exact { t, .. } => LanguageSpec::ExactCount(*t),
            Expr::Graph { kind, .. } => kind.spec(),
            Expr::Np { verifier, pad, .. } => LanguageSpec::Np {
                verifier: verifier.clone(),
                pad: *pad,
            },
            Expr::Union(parts) => {
                LanguageSpec::combined(Combined::Union(parts.iter().map(Expr::language).collect()))
            }
            Expr::Concat { words, inner, side } => LanguageSpec::combined(Combined::Concat {
                words: words.clone(),
                inner: inner.language(),
                side: *side,
            }),
            Expr::Reverse(inner) => LanguageSpec::combined(Combined::Reverse(inner.language())),
            Expr::Morph { h, inner } => LanguageSpec::combined(Combined::Morphism {
                h: h.clone(),
                inner: inner.language(),
            }),
            Expr::InvMorph { h, inner } => LanguageSpec::combined(Combined::InverseMorphism {
                h: h.clone(),
                inner: inner.language(),
            }),
            Expr::UpClose(inner) => LanguageSpec::combined(Combined::UpClose(inner.language())),
            Expr::Finite(words) => LanguageSpec::combined(Combined::Finite(words.clone())),
        }
    }

    /// Length of the words the system outputs.
    pub fn output_len(&self) -> usize {
        match self {
            Expr::Regular { n, .. } | Expr::Threshold { n, .. } | Expr::Exact { n, .. } => *n,
            Expr::Structured(bp) => bp.len(),
            Expr::Graph { n, .. } => n * n,
            Expr::Np { verifier, pad, .. } => pad.word_len(verifier),
            Expr::Union(parts) => parts.first().map_or(0, Expr::output_len),
            Expr::Concat { words, inner, .. } => words[0].len() + inner.output_len(),
            Expr::Reverse(inner) | Expr::UpClose(inner) => inner.output_len(),
            Expr::Morph { h, inner } => h.block_len() * inner.output_len(),
            Expr::InvMorph { h, inner } => inner.output_len() / h.block_len(),
            Expr::Finite(words) => words[0].len(),
        }
    }

    /// Size parameter of the slice: vertex count for graph families, word
    /// length otherwise.
    pub fn size(&self) -> usize {
        match self {
            Expr::Graph { n, .. } => *n,
            _ => self.output_len(),
        }
    }

    pub fn build(&self) -> Result<System> {
        System::build(self.clone())
    }
}

/// A synthesized expression together with what its witness generator needs.
#[derive(Debug, Clone)]
pub struct System {
    expr: Expr,
    circuit: Circuit,
    layout: Option<String>,
    scheme: Option<Box<RegularScheme>>,
    parts: Vec<System>,
}

impl System {
    fn leaf(expr: Expr, circuit: Circuit, layout: Option<String>) -> Self {
        System {
            expr,
            circuit,
            layout,
            scheme: None,
            parts: Vec::new(),
        }
    }

    pub fn build(expr: Expr) -> Result<Self> {
        let regular = |expr: Expr, bp: LayeredBp| -> Result<System> {
            let scheme = RegularScheme::new(bp)?;
            let mut sys = System::leaf(
                expr,
                scheme.synthesize(),
                Some(scheme.layout().to_text()),
            );
            sys.scheme = Some(Box::new(scheme));
            Ok(sys)
        };
        match &expr {
            Expr::Regular { automaton, n } => {
                let bp = unroll(automaton, *n)?;
                regular(expr, bp)
            }
            Expr::Structured(bp) => {
                let bp = bp.clone();
                regular(expr, bp)
            }
            Expr::Threshold { n, t } => {
                let (c, layout) = synth_threshold(*n, *t)?;
                Ok(System::leaf(expr, c, Some(layout.to_text())))
            }
            Expr::Exact { n, t } => {
                let (c, layout) = synth_exact_count(*n, *t)?;
                Ok(System::leaf(expr, c, Some(layout.to_text())))
            }
            Expr::Graph { kind, n } => {
                let c = kind.synthesize(*n)?;
                Ok(System::leaf(expr, c, None))
            }
            Expr::Np { verifier, pad, co_sac } => {
                let c = match (pad, co_sac) {
                    (PadKind::Padded, _) => {
                        let (sac, co) = pad_language(verifier, verifier.n() + 2)?;
                        if *co_sac {
                            co
                        } else {
                            sac
                        }
                    }
                    (PadKind::Sac, _) => synth_sac(verifier),
                    (PadKind::CoSac, _) => synth_co_sac(verifier),
                };
                Ok(System::leaf(expr, c, None))
            }
            Expr::Union(parts) => {
                let parts = parts
                    .iter()
                    .map(|p| System::build(p.clone()))
                    .collect::<Result<Vec<_>>>()?;
                let circuits: Vec<Circuit> = parts.iter().map(|p| p.circuit.clone()).collect();
                let c = comb::union(&circuits)?;
                Ok(System {
                    parts,
                    ..System::leaf(expr, c, None)
                })
            }
            Expr::Concat { words, inner, side } => {
                let part = System::build((**inner).clone())?;
                let c = comb::concat_finite(words, &part.circuit, *side)?;
                Ok(System {
                    parts: vec![part],
                    ..System::leaf(expr, c, None)
                })
            }
            Expr::Reverse(inner) => {
                let part = System::build((**inner).clone())?;
                let c = comb::reverse(&part.circuit);
                Ok(System {
                    parts: vec![part],
                    ..System::leaf(expr, c, None)
                })
            }
            Expr::Morph { h, inner } => {
                let part = System::build((**inner).clone())?;
                let c = comb::morphism(h, &part.circuit);
                Ok(System {
                    parts: vec![part],
                    ..System::leaf(expr, c, None)
                })
            }
            Expr::InvMorph { h, inner } => {
                let part = System::build((**inner).clone())?;
                let c = comb::inverse_morphism(h, &part.circuit)?;
                Ok(System {
                    parts: vec![part],
                    ..System::leaf(expr, c, None)
                })
            }
            Expr::UpClose(inner) => {
                let part = System::build((**inner).clone())?;
                let c = comb::upclose(&part.circuit);
                Ok(System {
                    parts: vec![part],
                    ..System::leaf(expr, c, None)
                })
            }
            Expr::Finite(words) => {
                let c = comb::finite_language(words)?;
                Ok(System::leaf(expr, c, None))
            }
        }
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    pub fn into_circuit(self) -> Circuit {
        self.circuit
    }

    /// Proof-input layout text, for base families that have one.
    pub fn layout(&self) -> Option<&str> {
        self.layout.as_deref()
    }

    pub fn language(&self) -> LanguageSpec {
        self.expr.language()
    }

    /// A proof input whose output is `word`.
    pub fn witness(&self, word: &[bool]) -> Result<Vec<bool>> {
        if word.len() != self.expr.output_len() {
            return Err(Error::Witness(format!(
                "word has length {}, the system outputs length {}",
                word.len(),
                self.expr.output_len()
            )));
        }
        if !self.language().member(word)? {
            return Err(Error::Witness("word is outside the language".into()));
        }
        match &self.expr {
            Expr::Regular { .. } | Expr::Structured(_) => {
                self.scheme.as_ref().expect("regular systems keep their scheme").witness(word)
            }
            Expr::Threshold { n, t } => witness_count(CountKind::Threshold, *n, *t, word),
            Expr::Exact { n, t } => witness_count(CountKind::Exact, *n, *t, word),
            Expr::Graph { kind, .. } => witness_graph(*kind, word),
            Expr::Np { verifier, pad, .. } => witness_np(verifier, *pad, word),
            Expr::Union(_) => {
                let sizes: Vec<usize> = self.parts.iter().map(|p| p.circuit.num_inputs()).collect();
                let i = self
                    .parts
                    .iter()
                    .position(|p| p.language().contains(word))
                    .expect("membership checked above");
                Ok(comb::union_proof(&sizes, i, &self.parts[i].witness(word)?))
            }
            Expr::Concat { words, side, .. } => {
                let k = words[0].len();
                let (fixed, rest) = match side {
                    Side::Left => (&word[..k], &word[k..]),
                    Side::Right => (&word[word.len() - k..], &word[..word.len() - k]),
                };
                let i = words
                    .iter()
                    .position(|u| u.as_slice() == fixed)
                    .expect("membership checked above");
                Ok(comb::concat_proof(words.len(), i, &self.parts[0].witness(rest)?))
            }
            Expr::Reverse(_) => {
                let rev: Vec<bool> = word.iter().rev().copied().collect();
                self.parts[0].witness(&rev)
            }
            Expr::Morph { h, .. } => {
                let pre = self.morph_preimage(h, word)?;
                self.parts[0].witness(&pre)
            }
            Expr::InvMorph { h, .. } => {
                let inner = self.parts[0].witness(&h.apply(word))?;
                Ok(comb::inverse_morphism_proof(h, &inner, word))
            }
            Expr::UpClose(_) => {
                // Any member below `word` works with the mask set to `word`.
                let below = self.member_below(word)?;
                Ok(comb::upclose_proof(&self.parts[0].witness(&below)?, word))
            }
            Expr::Finite(words) => {
                let i = words.iter().position(|u| u == word).expect("membership checked above");
                Ok(comb::finite_proof(words.len(), i))
            }
        }
    }

    /// A word of the inner language whose image is `word`.
    fn morph_preimage(&self, h: &Morphism, word: &[bool]) -> Result<Vec<bool>> {
        let inner = self.parts[0].language();
        let choices: Vec<Vec<bool>> = word.chunks(h.block_len()).map(|b| h.preimages(b)).collect();
        let free: Vec<usize> = (0..choices.len()).filter(|&i| choices[i].len() > 1).collect();
        if free.len() > 24 {
            return Err(Error::Budget {
                needed: 1 << free.len(),
                budget: 1 << 24,
            });
        }
        let mut pre: Vec<bool> = choices.iter().map(|c| c[0]).collect();
        for mask in 0..1u64 << free.len() {
            for (j, &i) in free.iter().enumerate() {
                pre[i] = mask >> j & 1 == 1;
            }
            if inner.contains(&pre) {
                return Ok(pre);
            }
        }
        Err(Error::Witness("no preimage lies in the inner language".into()))
    }

    /// A member of the inner language dominated by `word`, found by
    /// descending over the submasks of its ones.
    fn member_below(&self, word: &[bool]) -> Result<Vec<bool>> {
        let inner = self.parts[0].language();
        let ones: Vec<usize> = (0..word.len()).filter(|&i| word[i]).collect();
        if ones.len() > 24 {
            if inner.contains(word) {
                return Ok(word.to_vec());
            }
            return Err(Error::Budget {
                needed: 1 << ones.len(),
                budget: 1 << 24,
            });
        }
        let mut cand = vec![false; word.len()];
        for drop in 0..1u64 << ones.len() {
            for (j, &i) in ones.iter().enumerate() {
                cand[i] = drop >> j & 1 == 0;
            }
            if inner.contains(&cand) {
                return Ok(cand);
            }
        }
        Err(Error::Witness("no member lies below the word".into()))
    }
}

// ---- parsing ----

#[derive(Debug, Clone, PartialEq)]
enum Arg {
    Atom(String),
    List(Vec<String>),
    Call(String, Vec<Arg>),
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parameter(format!("expression error at offset {}: {}", self.pos, msg.into()))
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.src[self.pos..].chars().next().unwrap().len_utf8();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected '{c}'")))
        }
    }

    fn atom(&mut self) -> Result<String> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let end = rest
            .find(|c: char| c.is_whitespace() || "(),[]".contains(c))
            .unwrap_or(rest.len());
        if end == 0 {
            return Err(self.err("expected a name, number, word or path"));
        }
        self.pos += end;
        Ok(rest[..end].to_string())
    }

    fn arg(&mut self) -> Result<Arg> {
        if self.peek() == Some('[') {
            self.pos += 1;
            let mut items = Vec::new();
            if self.peek() != Some(']') {
                loop {
                    items.push(self.atom()?);
                    if self.peek() == Some(',') {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
            }
            self.expect(']')?;
            return Ok(Arg::List(items));
        }
        let name = self.atom()?;
        if self.peek() != Some('(') {
            return Ok(Arg::Atom(name));
        }
        self.pos += 1;
        let mut args = Vec::new();
        if self.peek() != Some(')') {
            loop {
                args.push(self.arg()?);
                if self.peek() == Some(',') {
                    self.pos += 1;
                } else {
                    break;
                }
            }
        }
        self.expect(')')?;
        Ok(Arg::Call(name, args))
    }
}

fn parse_word(s: &str) -> Result<Vec<bool>> {
    if s == "eps" {
        return Ok(Vec::new());
    }
    parse_bits(s)
}

fn parse_num(s: &str) -> Result<usize> {
    s.parse()
        .map_err(|_| Error::Parameter(format!("expected a number, got '{s}'")))
}

fn read_file(path: &str) -> Result<String> {
    std::fs::read_to_string(Path::new(path)).map_err(|e| Error::Io {
        path: path.to_string(),
        msg: e.to_string(),
    })
}

pub fn load_automaton(path: &str) -> Result<Automaton> {
    parse_automaton(&read_file(path)?)
}

pub fn load_bp(path: &str) -> Result<LayeredBp> {
    parse_bp(&read_file(path)?)
}

pub fn load_verifier(path: &str) -> Result<VerifierCircuit> {
    VerifierCircuit::parse(&read_file(path)?)
}

/// Padded expression whose core verifier length must be `n - 2`.
fn padded(path: &str, n: usize, co_sac: bool) -> Result<Expr> {
    let verifier = load_verifier(path)?;
    if n < 2 || verifier.n() + 2 != n {
        return Err(Error::Parameter(format!(
            "padded length {n} does not match the verifier's {} input bits plus 2",
            verifier.n()
        )));
    }
    Ok(Expr::Np {
        verifier,
        pad: PadKind::Padded,
        co_sac,
    })
}

fn morphism_args(name: &str, args: &[Arg]) -> Result<(Morphism, Expr)> {
    match args {
        [Arg::Atom(a), Arg::Atom(b), e] => Ok((
            Morphism::new(parse_word(a)?, parse_word(b)?)?,
            to_expr(e)?,
        )),
        _ => Err(Error::Parameter(format!("{name} expects (w0, w1, expr)"))),
    }
}

fn to_expr(arg: &Arg) -> Result<Expr> {
    let (name, args) = match arg {
        Arg::Call(name, args) => (name.as_str(), args.as_slice()),
        Arg::Atom(a) => return Err(Error::Parameter(format!("expected an expression, got '{a}'"))),
        Arg::List(_) => return Err(Error::Parameter("expected an expression, got a list".into())),
    };
    let atoms = || -> Result<Vec<&str>> {
        args.iter()
            .map(|a| match a {
                Arg::Atom(s) => Ok(s.as_str()),
                _ => Err(Error::Parameter(format!("{name} takes plain arguments"))),
            })
            .collect()
    };
    let arity = |k: usize| -> Result<Vec<&str>> {
        let a = atoms()?;
        if a.len() != k {
            return Err(Error::Parameter(format!(
                "{name} takes {k} argument(s), got {}",
                a.len()
            )));
        }
        Ok(a)
    };
    let words = |items: &[String]| items.iter().map(|s| parse_word(s)).collect::<Result<Vec<_>>>();
    let graph = |kind| -> Result<Expr> {
        Ok(Expr::Graph {
            kind,
            n: parse_num(arity(1)?[0])?,
        })
    };
    Ok(match name {
        "regular" => {
            let a = arity(2)?;
            Expr::Regular {
                automaton: load_automaton(a[0])?,
                n: parse_num(a[1])?,
            }
        }
        "structured" => Expr::Structured(load_bp(arity(1)?[0])?),
        "threshold" | "exact" => {
            let a = arity(2)?;
            let (n, t) = (parse_num(a[0])?, parse_num(a[1])?);
            if name == "threshold" {
                Expr::Threshold { n, t }
            } else {
                Expr::Exact { n, t }
            }
        }
        "cycles" => graph(GraphKind::Cycles)?,
        "ustconn" => graph(GraphKind::UstConn)?,
        "unreach" => graph(GraphKind::UnReach)?,
        "sac" | "cosac" => Expr::Np {
            verifier: load_verifier(arity(1)?[0])?,
            pad: if name == "sac" { PadKind::Sac } else { PadKind::CoSac },
            co_sac: name == "cosac",
        },
        "padded" | "copadded" => {
            let a = arity(2)?;
            padded(a[0], parse_num(a[1])?, name == "copadded")?
        }
        "union" => {
            if args.is_empty() {
                return Err(Error::Parameter("union needs at least one expression".into()));
            }
            Expr::Union(args.iter().map(to_expr).collect::<Result<_>>()?)
        }
        "concat" => match args {
            [Arg::List(ws), e] => Expr::Concat {
                words: words(ws)?,
                inner: Box::new(to_expr(e)?),
                side: Side::Left,
            },
            [e, Arg::List(ws)] => Expr::Concat {
                words: words(ws)?,
                inner: Box::new(to_expr(e)?),
                side: Side::Right,
            },
            _ => return Err(Error::Parameter("concat expects ([words], expr) or (expr, [words])".into())),
        },
        "reverse" | "upclose" => {
            let [e] = args else {
                return Err(Error::Parameter(format!("{name} takes one expression")));
            };
            let inner = Box::new(to_expr(e)?);
            if name == "reverse" {
                Expr::Reverse(inner)
            } else {
                Expr::UpClose(inner)
            }
        }
        "morph" => {
            let (h, e) = morphism_args(name, args)?;
            Expr::Morph { h, inner: Box::new(e) }
        }
        "invmorph" => {
            let (h, e) = morphism_args(name, args)?;
            Expr::InvMorph { h, inner: Box::new(e) }
        }
        "finite" => match args {
            [Arg::List(ws)] => Expr::Finite(words(ws)?),
            _ => return Err(Error::Parameter("finite expects one list of words".into())),
        },
        other => return Err(Error::Parameter(format!("unknown function '{other}'"))),
    })
}

pub fn parse_expr(src: &str) -> Result<Expr> {
    let mut p = Parser { src, pos: 0 };
    let arg = p.arg()?;
    if p.peek().is_some() {
        return Err(p.err("trailing input"));
    }
    let expr = to_expr(&arg)?;
    check_shapes(&expr)?;
    Ok(expr)
}

/// Rejects expressions whose parts cannot line up, before any synthesis.
fn check_shapes(e: &Expr) -> Result<()> {
    let bad = |msg: String| Err(Error::Parameter(msg));
    match e {
        Expr::Union(parts) => {
            for p in parts {
                check_shapes(p)?;
            }
            let n = parts[0].output_len();
            if parts.iter().any(|p| p.output_len() != n) {
                return bad("union parts have different output lengths".into());
            }
        }
        Expr::Concat { words, inner, .. } => {
            check_shapes(inner)?;
            if words.is_empty() || words.iter().any(|w| w.len() != words[0].len()) {
                return bad("concat needs a non-empty list of equal-length words".into());
            }
        }
        Expr::Finite(words) => {
            if words.is_empty() || words.iter().any(|w| w.len() != words[0].len()) {
                return bad("finite needs a non-empty list of equal-length words".into());
            }
        }
        Expr::InvMorph { h, inner } => {
            check_shapes(inner)?;
            if inner.output_len() % h.block_len() != 0 {
                return bad(format!(
                    "block length {} does not divide {}",
                    h.block_len(),
                    inner.output_len()
                ));
            }
        }
        Expr::Reverse(inner) | Expr::UpClose(inner) | Expr::Morph { inner, .. } => {
            check_shapes(inner)?
        }
        _ => {}
    }
    Ok(())
}

/// Parses the colon form used on the command line.
pub fn parse_spec(spec: &str) -> Result<Expr> {
    if let Some(e) = spec.strip_prefix("expr:") {
        return parse_expr(e);
    }
    let parts: Vec<&str> = spec.split(':').collect();
    let num = |i: usize| -> Result<usize> {
        parts
            .get(i)
            .ok_or_else(|| Error::Parameter(format!("spec '{spec}' is missing a field")))
            .and_then(|s| parse_num(s))
    };
    let field = |i: usize| -> Result<&str> {
        parts
            .get(i)
            .copied()
            .ok_or_else(|| Error::Parameter(format!("spec '{spec}' is missing a field")))
    };
    let arity = |k: usize| -> Result<()> {
        if parts.len() != k + 1 {
            return Err(Error::Parameter(format!(
                "spec '{spec}' takes {k} field(s) after the family"
            )));
        }
        Ok(())
    };
    let graph = |kind| -> Result<Expr> {
        arity(1)?;
        Ok(Expr::Graph { kind, n: num(1)? })
    };
    match parts[0] {
        "regular" => {
            arity(2)?;
            Ok(Expr::Regular {
                automaton: load_automaton(field(1)?)?,
                n: num(2)?,
            })
        }
        "structured" => {
            arity(1)?;
            Ok(Expr::Structured(load_bp(field(1)?)?))
        }
        "threshold" => {
            arity(2)?;
            Ok(Expr::Threshold { n: num(1)?, t: num(2)? })
        }
        "exact" => {
            arity(2)?;
            Ok(Expr::Exact { n: num(1)?, t: num(2)? })
        }
        "cycles" => graph(GraphKind::Cycles),
        "ustconn" => graph(GraphKind::UstConn),
        "unreach" => graph(GraphKind::UnReach),
        "sac" | "co-sac" => {
            arity(1)?;
            Ok(Expr::Np {
                verifier: load_verifier(field(1)?)?,
                pad: if parts[0] == "sac" { PadKind::Sac } else { PadKind::CoSac },
                co_sac: parts[0] == "co-sac",
            })
        }
        "padded" | "co-padded" => {
            arity(2)?;
            padded(field(1)?, num(2)?, parts[0] == "co-padded")
        }
        other => Err(Error::Parameter(format!("unknown language family '{other}'"))),
    }
}
