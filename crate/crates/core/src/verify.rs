//! Compliance checks for proof systems: every proof maps into the language
//! (soundness), every member has a proof (completeness), and structural
//! bounds hold (locality audit).
//!
//! Sweeps evaluate 64 proofs per pass with [`Evaluator::eval_packed_into`].
//! Exhaustive sweeps take an index range so they can be split across
//! workers; [`Report::merge`] combines the pieces.

use std::collections::HashSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::format_bits;
use crate::circuit::{Circuit, CircuitMetrics, Evaluator};
use crate::error::{Error, Result};
use crate::languages::{LanguageSpec, Morphism};

pub const DEFAULT_BUDGET: u64 = 1 << 24;
/// Violations kept verbatim in a report; the rest are only counted.
pub const MAX_RECORDED: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    Sampled,
    Witness,
    Structural,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exhaustive => "exhaustive",
            Mode::Sampled => "sampled",
            Mode::Witness => "witness",
            Mode::Structural => "structural",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub proof: Vec<bool>,
    pub output: Vec<bool>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub check: String,
    pub mode: Mode,
    pub trials: u64,
    /// The first [`MAX_RECORDED`] violations.
    pub violations: Vec<Violation>,
    pub violation_count: u64,
    pub metrics: Option<CircuitMetrics>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(check: &str, mode: Mode) -> Self {
        Report {
            check: check.to_string(),
            mode,
            trials: 0,
            violations: Vec::new(),
            violation_count: 0,
            metrics: None,
            notes: Vec::new(),
        }
    }

    pub fn pass(&self) -> bool {
        self.violation_count == 0
    }

    pub fn record(&mut self, proof: Vec<bool>, output: Vec<bool>, reason: impl Into<String>) {
        self.violation_count += 1;
        if self.violations.len() < MAX_RECORDED {
            self.violations.push(Violation {
                proof,
                output,
                reason: reason.into(),
            });
        }
    }

    /// Combines reports of disjoint sweeps of the same check.
    pub fn merge(mut self, other: Report) -> Report {
        self.trials += other.trials;
        self.violation_count += other.violation_count;
        let room = MAX_RECORDED.saturating_sub(self.violations.len());
        self.violations.extend(other.violations.into_iter().take(room));
        self.notes.extend(other.notes);
        if self.metrics.is_none() {
            self.metrics = other.metrics;
        }
        self
    }

    pub fn with_metrics(mut self, c: &Circuit) -> Self {
        self.metrics = Some(c.metrics());
        self
    }

    /// `PASS|FAIL <check> <trials> <violations>`
    pub fn line(&self) -> String {
        format!(
            "{} {} {} {}",
            if self.pass() { "PASS" } else { "FAIL" },
            self.check,
            self.trials,
            self.violation_count
        )
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "check: {}", self.check)?;
        writeln!(f, "mode: {}", self.mode)?;
        writeln!(f, "trials: {}", self.trials)?;
        writeln!(f, "violations: {}", self.violation_count)?;
        if let Some(m) = &self.metrics {
            writeln!(
                f,
                "metrics: depth {}, size {}, alternations {}, max cone {}",
                m.depth,
                m.size,
                m.alternations,
                m.max_cone()
            )?;
        }
        for note in &self.notes {
            writeln!(f, "note: {note}")?;
        }
        for v in &self.violations {
            writeln!(
                f,
                "violation: proof={} output={} ({})",
                format_bits(&v.proof),
                format_bits(&v.output),
                v.reason
            )?;
        }
        write!(f, "{}", self.line())
    }
}

/// Output predicate: `None` when acceptable, otherwise the reason.
pub type OutputCheck<'a> = dyn Fn(&[bool]) -> Option<String> + 'a;

fn membership(spec: &LanguageSpec) -> impl Fn(&[bool]) -> Option<String> + '_ {
    move |w| match spec.member(w) {
        Ok(true) => None,
        Ok(false) => Some("output is outside the language".into()),
        Err(e) => Some(format!("output is malformed: {e}")),
    }
}

/// Evaluates packed proof batches and checks every lane's output.
struct Sweep<'c, 'f> {
    eval: Evaluator<'c>,
    check: &'f OutputCheck<'f>,
    out: Vec<u64>,
    word: Vec<bool>,
    report: Report,
}

impl<'c, 'f> Sweep<'c, 'f> {
    fn new(c: &'c Circuit, check: &'f OutputCheck<'f>, report: Report) -> Self {
        Sweep {
            eval: Evaluator::new(c),
            check,
            out: vec![0; c.num_outputs()],
            word: vec![false; c.num_outputs()],
            report,
        }
    }

    /// Checks the first `lanes` lanes of the packed proofs `x`.
    fn run(&mut self, x: &[u64], lanes: usize) {
        self.eval
            .eval_packed_into(x, &mut self.out)
            .expect("input width matches the circuit");
        for lane in 0..lanes {
            for (bit, &o) in self.word.iter_mut().zip(&self.out) {
                *bit = o >> lane & 1 == 1;
            }
            self.report.trials += 1;
            if let Some(reason) = (self.check)(&self.word) {
                let proof = x.iter().map(|&v| v >> lane & 1 == 1).collect();
                self.report.record(proof, self.word.clone(), reason);
            }
        }
    }
}

fn length_mismatch(c: &Circuit, expected: usize, check: &str, mode: Mode) -> Option<Report> {
    if c.num_outputs() == expected {
        return None;
    }
    let mut r = Report::new(check, mode);
    r.record(
        Vec::new(),
        Vec::new(),
        format!(
            "circuit outputs {} bits, the language slice has length {expected}",
            c.num_outputs()
        ),
    );
    Some(r)
}

/// Exhaustive sweep over proof indices `start..end` (bit `i` of the index
/// is proof input `i`).
pub fn sweep_exhaustive(c: &Circuit, check: &OutputCheck<'_>, start: u64, end: u64) -> Report {
    let m = c.num_inputs();
    let mut sweep = Sweep::new(c, check, Report::new("soundness", Mode::Exhaustive));
    let mut x = vec![0u64; m];
    let mut base = start;
    while base < end {
        let lanes = (end - base).min(64) as usize;
        for (i, xi) in x.iter_mut().enumerate() {
            *xi = (0..lanes as u64).fold(0, |acc, l| acc | ((base + l) >> i & 1) << l);
        }
        sweep.run(&x, lanes);
        base += lanes as u64;
    }
    sweep.report
}

/// How [`check_soundness`] draws proofs.
#[derive(Debug, Clone)]
pub struct SoundnessOptions {
    /// Exhaustive when `2^m <= budget`.
    pub budget: u64,
    pub seed: u64,
    /// Sample even when an exhaustive sweep would fit.
    pub force_sample: bool,
    /// Trials in sampled mode.
    pub samples: u64,
    /// Honest proofs to mutate with 1 to 3 bit flips; half the samples are
    /// spent on them when non-empty.
    pub bases: Vec<Vec<bool>>,
}

impl Default for SoundnessOptions {
    fn default() -> Self {
        SoundnessOptions {
            budget: DEFAULT_BUDGET,
            seed: 0,
            force_sample: false,
            samples: 1 << 16,
            bases: Vec::new(),
        }
    }
}

pub fn check_soundness(c: &Circuit, spec: &LanguageSpec, n: usize, opts: &SoundnessOptions) -> Report {
    let check = membership(spec);
    check_outputs(c, spec.word_len(n), &check, opts, "soundness")
}

/// Soundness-style sweep with an arbitrary output predicate.
pub fn check_outputs(
    c: &Circuit,
    out_len: usize,
    check: &OutputCheck<'_>,
    opts: &SoundnessOptions,
    name: &str,
) -> Report {
    let m = c.num_inputs();
    let exhaustive = !opts.force_sample && m < 64 && (1u64 << m) <= opts.budget;
    let mode = if exhaustive { Mode::Exhaustive } else { Mode::Sampled };
    if let Some(r) = length_mismatch(c, out_len, name, mode) {
        return r;
    }
    let mut report = if exhaustive {
        sweep_exhaustive(c, check, 0, 1u64 << m)
    } else {
        sample(c, check, opts)
    };
    report.check = name.to_string();
    report.with_metrics(c)
}

fn sample(c: &Circuit, check: &OutputCheck<'_>, opts: &SoundnessOptions) -> Report {
    let m = c.num_inputs();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut sweep = Sweep::new(c, check, Report::new("soundness", Mode::Sampled));
    if let Some(base) = opts.bases.iter().find(|b| b.len() != m) {
        sweep.report.record(
            base.clone(),
            Vec::new(),
            format!("mutation base has {} bits, expected {m}", base.len()),
        );
        return sweep.report;
    }
    let mutated = if opts.bases.is_empty() || m == 0 { 0 } else { opts.samples / 2 };
    let mut x = vec![0u64; m];
    let mut done = 0;
    while done < opts.samples {
        let lanes = (opts.samples - done).min(64) as usize;
        if done < mutated {
            let base = &opts.bases[rng.gen_range(0..opts.bases.len())];
            for (xi, &b) in x.iter_mut().zip(base) {
                *xi = if b { u64::MAX } else { 0 };
            }
            for lane in 0..lanes {
                for _ in 0..rng.gen_range(1..=3) {
                    x[rng.gen_range(0..m)] ^= 1 << lane;
                }
            }
        } else {
            for xi in x.iter_mut() {
                *xi = rng.gen();
            }
        }
        sweep.run(&x, lanes);
        done += lanes as u64;
    }
    sweep.report
}

/// Batches `(word, proof)` pairs and checks that each proof evaluates to
/// its word.
pub struct WitnessSweep<'c> {
    eval: Evaluator<'c>,
    m: usize,
    /// Pending words, concatenated; `lanes` of them.
    words: Vec<bool>,
    lanes: usize,
    x: Vec<u64>,
    out: Vec<u64>,
    report: Report,
}

impl<'c> WitnessSweep<'c> {
    pub fn new(c: &'c Circuit) -> Self {
        WitnessSweep {
            eval: Evaluator::new(c),
            m: c.num_inputs(),
            words: Vec::with_capacity(64 * c.num_outputs()),
            lanes: 0,
            x: vec![0; c.num_inputs()],
            out: vec![0; c.num_outputs()],
            report: Report::new("completeness", Mode::Witness),
        }
    }

    pub fn push(&mut self, word: &[bool], proof: Result<Vec<bool>>) {
        match proof {
            Ok(p) => self.push_proof(word, &p),
            Err(e) => {
                self.report.trials += 1;
                self.report
                    .record(Vec::new(), word.to_vec(), format!("no witness: {e}"));
            }
        }
    }

    pub fn push_proof(&mut self, word: &[bool], proof: &[bool]) {
        if proof.len() != self.m || word.len() != self.out.len() {
            self.report.trials += 1;
            let reason = format!(
                "witness has {} bits for a {}-bit word, expected {} and {}",
                proof.len(),
                word.len(),
                self.m,
                self.out.len()
            );
            self.report.record(proof.to_vec(), word.to_vec(), reason);
            return;
        }
        let bit = 1u64 << self.lanes;
        for (xi, &b) in self.x.iter_mut().zip(proof) {
            if b {
                *xi |= bit;
            } else {
                *xi &= !bit;
            }
        }
        self.words.extend_from_slice(word);
        self.lanes += 1;
        if self.lanes == 64 {
            self.flush();
        }
    }

    fn flush(&mut self) {
        if self.lanes == 0 {
            return;
        }
        self.eval
            .eval_packed_into(&self.x, &mut self.out)
            .expect("input width matches the circuit");
        let len = self.out.len();
        for lane in 0..self.lanes {
            self.report.trials += 1;
            let word = &self.words[lane * len..(lane + 1) * len];
            let ok = word
                .iter()
                .zip(&self.out)
                .all(|(&b, &o)| (o >> lane & 1 == 1) == b);
            if !ok {
                let proof = self.x.iter().map(|&v| v >> lane & 1 == 1).collect();
                let got = self.out.iter().map(|&o| o >> lane & 1 == 1).collect();
                let reason = format!("witness for {} maps elsewhere", format_bits(word));
                self.report.record(proof, got, reason);
            }
        }
        self.words.clear();
        self.lanes = 0;
    }

    pub fn finish(mut self) -> Report {
        self.flush();
        self.report
    }
}

/// Every member of the slice must have a witness that evaluates back to it.
pub fn check_completeness(
    c: &Circuit,
    spec: &LanguageSpec,
    n: usize,
    witness: &mut dyn FnMut(&[bool]) -> Result<Vec<bool>>,
    budget: u64,
) -> Result<Report> {
    if let Some(r) = length_mismatch(c, spec.word_len(n), "completeness", Mode::Witness) {
        return Ok(r);
    }
    let members = spec.enumerate_slice(n, budget as u128)?;
    let mut sweep = WitnessSweep::new(c);
    for w in &members {
        sweep.push(w, witness(w));
    }
    Ok(sweep.finish().with_metrics(c))
}

/// Compares the full range of `c` with the slice, both enumerated.
pub fn check_range(c: &Circuit, spec: &LanguageSpec, n: usize, budget: u64) -> Result<Report> {
    if let Some(r) = length_mismatch(c, spec.word_len(n), "range", Mode::Exhaustive) {
        return Ok(r);
    }
    let m = c.num_inputs();
    if m >= 64 || (1u64 << m) > budget {
        return Err(Error::Budget {
            needed: 1u128 << m.min(127),
            budget: budget as u128,
        });
    }
    let range = std::cell::RefCell::new(HashSet::new());
    let collect = |w: &[bool]| -> Option<String> {
        range.borrow_mut().insert(w.to_vec());
        None
    };
    let mut report = sweep_exhaustive(c, &collect, 0, 1u64 << m);
    report.check = "range".into();
    let range = range.into_inner();
    let slice: HashSet<Vec<bool>> = spec.enumerate_slice(n, budget as u128)?.into_iter().collect();
    let mut extra: Vec<_> = range.difference(&slice).cloned().collect();
    let mut missing: Vec<_> = slice.difference(&range).cloned().collect();
    extra.sort();
    missing.sort();
    for w in extra {
        report.record(Vec::new(), w, "output is outside the language");
    }
    for w in missing {
        report.record(Vec::new(), w, "member is not in the range");
    }
    report
        .notes
        .push(format!("range {} words, slice {} words", range.len(), slice.len()));
    Ok(report.with_metrics(c))
}

/// Structural limits for [`locality_audit`]; `None` skips a metric.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Bounds {
    pub max_cone: Option<usize>,
    pub max_depth: Option<usize>,
    pub max_alternations: Option<usize>,
}

/// Compares metrics with `bounds`, noting the worst output for each. Only
/// requested metrics are computed, so large circuits stay cheap to audit.
pub fn locality_audit(c: &Circuit, bounds: &Bounds) -> Report {
    let mut report = Report::new("locality", Mode::Structural);
    let worst = |values: &[usize]| -> (usize, usize) {
        values
            .iter()
            .copied()
            .enumerate()
            .max_by_key(|&(i, v)| (v, std::cmp::Reverse(i)))
            .map(|(i, v)| (i, v))
            .unwrap_or((0, 0))
    };
    if let Some(bound) = bounds.max_cone {
        let (i, v) = worst(&c.cone_sizes());
        report.trials += 1;
        report.notes.push(format!("max cone {v} at output {i} (bound {bound})"));
        if v > bound {
            report.record(Vec::new(), Vec::new(), format!("output {i} reads {v} inputs, bound {bound}"));
        }
    }
    if let Some(bound) = bounds.max_depth {
        let depths = c.gate_depths();
        let per_output: Vec<usize> = c.outputs().iter().map(|&o| depths[o]).collect();
        let (i, v) = worst(&per_output);
        report.trials += 1;
        report.notes.push(format!("depth {v} at output {i} (bound {bound})"));
        if v > bound {
            report.record(Vec::new(), Vec::new(), format!("output {i} has depth {v}, bound {bound}"));
        }
    }
    if let Some(bound) = bounds.max_alternations {
        let v = c.alternations();
        report.trials += 1;
        report.notes.push(format!("alternations {v} (bound {bound})"));
        if v > bound {
            report.record(Vec::new(), Vec::new(), format!("{v} alternations, bound {bound}"));
        }
    }
    report
}

/// Checks that every output block of `c` is an image of `h`, the
/// precondition of `combinators::inverse_morphism`.
pub fn check_block_contract(c: &Circuit, h: &Morphism, opts: &SoundnessOptions) -> Report {
    let k = h.block_len();
    let check = |w: &[bool]| -> Option<String> {
        if !w.len().is_multiple_of(k) {
            return Some(format!("output length {} is not a multiple of {k}", w.len()));
        }
        w.chunks(k)
            .position(|b| h.preimages(b).is_empty())
            .map(|i| format!("block {i} is not an image of the morphism"))
    };
    check_outputs(c, c.num_outputs(), &check, opts, "contract")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::parse_bits;
    use crate::circuit::Gate;
    use crate::combinators::finite_language;
    use crate::counting::{synth_threshold, witness_count, CountKind};
    use crate::graph::{synth_cycles, witness_graph, GraphKind};

    #[test]
    fn cycles_pass_and_broken_cycles_fail() {
        let c = synth_cycles(4);
        let r = check_soundness(&c, &LanguageSpec::Cycles, 4, &SoundnessOptions::default());
        assert_eq!(r.mode, Mode::Exhaustive);
        assert!(r.pass(), "{r}");
        assert_eq!(r.line(), format!("PASS soundness {} 0", 1u64 << c.num_inputs()));

        // Replace the first output (edge slot (1,1) aside) by its first operand.
        let mut gates = c.gates().to_vec();
        let mut outputs = c.outputs().to_vec();
        let target = outputs
            .iter()
            .position(|&o| !gates[o].is_leaf())
            .unwrap();
        let first = gates[outputs[target]].operands().next().unwrap();
        gates.push(Gate::Or(first, first));
        outputs[target] = gates.len() - 1;
        let broken = Circuit::from_parts(c.num_inputs(), gates, outputs).unwrap();
        let r = check_soundness(&broken, &LanguageSpec::Cycles, 4, &SoundnessOptions::default());
        assert!(!r.pass());
        let v = &r.violations[0];
        assert!(!LanguageSpec::Cycles.contains(&v.output));
        assert_eq!(broken.eval(&v.proof).unwrap(), v.output);
    }

    #[test]
    fn sampling_is_deterministic() {
        let (c, _) = synth_threshold(8, 3).unwrap();
        let opts = SoundnessOptions {
            force_sample: true,
            samples: 1000,
            seed: 7,
            bases: vec![witness_count(CountKind::Threshold, 8, 3, &parse_bits("11100000").unwrap()).unwrap()],
            ..Default::default()
        };
        let a = check_soundness(&c, &LanguageSpec::Threshold(3), 8, &opts);
        let b = check_soundness(&c, &LanguageSpec::Threshold(3), 8, &opts);
        assert_eq!(a, b);
        assert_eq!(a.trials, 1000);
        assert!(a.pass());
    }

    #[test]
    fn completeness_and_range() {
        let (c, _) = synth_threshold(4, 2).unwrap();
        let spec = LanguageSpec::Threshold(2);
        let r = check_range(&c, &spec, 4, 1 << 20).unwrap();
        assert!(r.pass(), "{r}");
        let mut w = |x: &[bool]| witness_count(CountKind::Threshold, 4, 2, x);
        let r = check_completeness(&c, &spec, 4, &mut w, 1 << 20).unwrap();
        assert!(r.pass());
        assert_eq!(r.trials, 11);

        let c = synth_cycles(4);
        let mut w = |x: &[bool]| witness_graph(GraphKind::Cycles, x);
        let r = check_completeness(&c, &LanguageSpec::Cycles, 4, &mut w, 1 << 20).unwrap();
        assert!(r.pass());
        assert_eq!(r.trials, 8);

        // A wrong witness generator is caught.
        let mut bad = |_: &[bool]| Ok(vec![false; c.num_inputs()]);
        let r = check_completeness(&c, &LanguageSpec::Cycles, 4, &mut bad, 1 << 20).unwrap();
        assert_eq!(r.violation_count, 7);
    }

    #[test]
    fn range_reports_missing_members() {
        let c = finite_language(&[parse_bits("11").unwrap()]).unwrap();
        let r = check_range(&c, &LanguageSpec::Threshold(1), 2, 1 << 10).unwrap();
        assert_eq!(r.violation_count, 2);
        assert!(r.violations.iter().all(|v| v.reason.contains("not in the range")));
    }

    #[test]
    fn partitioned_sweeps_merge() {
        let c = synth_cycles(6);
        let check = membership(&LanguageSpec::Cycles);
        let total = 1u64 << c.num_inputs();
        let whole = sweep_exhaustive(&c, &check, 0, total);
        let parts = sweep_exhaustive(&c, &check, 0, 100)
            .merge(sweep_exhaustive(&c, &check, 100, total / 3))
            .merge(sweep_exhaustive(&c, &check, total / 3, total));
        assert_eq!(whole.trials, total);
        assert_eq!(whole, parts);
    }

    #[test]
    fn audits_and_contracts() {
        let c = synth_cycles(6);
        let ok = Bounds {
            max_cone: Some(6),
            max_depth: Some(10),
            max_alternations: Some(10),
        };
        assert!(locality_audit(&c, &ok).pass());
        let tight = Bounds {
            max_cone: Some(2),
            ..Default::default()
        };
        assert!(!locality_audit(&c, &tight).pass());

        let h = Morphism::new(parse_bits("00").unwrap(), parse_bits("11").unwrap()).unwrap();
        let good = finite_language(&[parse_bits("0011").unwrap()]).unwrap();
        assert!(check_block_contract(&good, &h, &SoundnessOptions::default()).pass());
        let bad = finite_language(&[parse_bits("0011").unwrap(), parse_bits("0110").unwrap()]).unwrap();
        let r = check_block_contract(&bad, &h, &SoundnessOptions::default());
        assert!(!r.pass());
        assert_eq!(r.violations[0].output, parse_bits("0110").unwrap());
    }
}
