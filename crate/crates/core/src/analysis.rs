//! Circuit metrics and functional verification against arithmetic specs.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gate::GateKind;
use crate::netlist::{Circuit, LineRole, DEFAULT_ENUMERATION_CAP};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricsReport {
    pub total_gates: usize,
    pub gates_by_kind: BTreeMap<GateKind, usize>,
    pub garbage_outputs: usize,
    pub constant_inputs: usize,
    /// Critical path in gate levels, every gate costing one unit.
    pub unit_delay: usize,
    pub lines: usize,
}

pub fn metrics(circuit: &Circuit) -> MetricsReport {
    let mut gates_by_kind: BTreeMap<GateKind, usize> =
        GateKind::ALL.iter().map(|&k| (k, 0)).collect();
    // level of the most recent gate to touch each line
    let mut line_level = vec![0usize; circuit.lines()];
    let mut unit_delay = 0;
    for app in circuit.gates() {
        *gates_by_kind.entry(app.kind).or_default() += 1;
        let level = 1 + app.lines.iter().map(|&l| line_level[l]).max().unwrap_or(0);
        for &l in &app.lines {
            line_level[l] = level;
        }
        unit_delay = unit_delay.max(level);
    }
    MetricsReport {
        total_gates: circuit.gate_count(),
        gates_by_kind,
        garbage_outputs: circuit.garbage_lines().len(),
        constant_inputs: circuit
            .roles()
            .iter()
            .filter(|r| matches!(r, LineRole::Constant(_)))
            .count(),
        unit_delay,
        lines: circuit.lines(),
    }
}

impl MetricsReport {
    pub fn gates_of(&self, kind: GateKind) -> usize {
        self.gates_by_kind.get(&kind).copied().unwrap_or(0)
    }

    /// `(key, value)` pairs under the stable key names.
    pub fn entries(&self) -> Vec<(String, usize)> {
        let mut out = vec![("total_gates".to_string(), self.total_gates)];
        for kind in GateKind::ALL {
            out.push((
                format!("gates_by_kind.{}", kind.name()),
                self.gates_of(kind),
            ));
        }
        out.extend([
            ("garbage_outputs".to_string(), self.garbage_outputs),
            ("constant_inputs".to_string(), self.constant_inputs),
            ("unit_delay".to_string(), self.unit_delay),
            ("lines".to_string(), self.lines),
        ]);
        out
    }

    /// One `key=value` per line.
    pub fn to_kv(&self) -> String {
        self.entries()
            .into_iter()
            .map(|(k, v)| format!("{k}={v}\n"))
            .collect()
    }

    /// Aligned two-column text table.
    pub fn to_table(&self) -> String {
        let entries = self.entries();
        let width = entries.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let mut out = format!("{:<width$}  value\n", "metric");
        for (k, v) in entries {
            out.push_str(&format!("{k:<width$}  {v:>5}\n"));
        }
        out
    }

    pub fn as_reference(&self) -> ReferenceRow {
        ReferenceRow {
            name: "measured",
            gates: self.total_gates,
            garbage: self.garbage_outputs,
            delay: self.unit_delay,
        }
    }
}

impl fmt::Display for MetricsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_table())
    }
}

/// A published (gates, garbage, delay) row for a competing design.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReferenceRow {
    pub name: &'static str,
    pub gates: usize,
    pub garbage: usize,
    pub delay: usize,
}

/// Published full-adder designs built from other gate libraries.
pub const FULL_ADDER_REFERENCES: [ReferenceRow; 3] = [
    ReferenceRow {
        name: "two New Gates + Feynman",
        gates: 3,
        garbage: 3,
        delay: 3,
    },
    ReferenceRow {
        name: "New Gate + Toffoli + Feynman",
        gates: 3,
        garbage: 2,
        delay: 3,
    },
    ReferenceRow {
        name: "five Fredkin gates",
        gates: 5,
        garbage: 5,
        delay: 5,
    },
];

/// 4:2 compressors built by chaining two of each reference full adder.
pub const COMPRESSOR_REFERENCES: [ReferenceRow; 3] = [
    ReferenceRow {
        name: "two New Gates + Feynman",
        gates: 6,
        garbage: 6,
        delay: 6,
    },
    ReferenceRow {
        name: "New Gate + Toffoli + Feynman",
        gates: 6,
        garbage: 4,
        delay: 4,
    },
    ReferenceRow {
        name: "five Fredkin gates",
        gates: 10,
        garbage: 10,
        delay: 10,
    },
];

/// Field-by-field ordering of a measured design against a reference row;
/// `Less` means the measured design uses fewer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Comparison {
    pub gates: Ordering,
    pub garbage: Ordering,
    pub delay: Ordering,
}

impl Comparison {
    /// No field is worse than the reference.
    pub fn dominates(&self) -> bool {
        [self.gates, self.garbage, self.delay]
            .iter()
            .all(|o| *o != Ordering::Greater)
    }

    /// Strictly fewer on every field.
    pub fn strictly_dominates(&self) -> bool {
        [self.gates, self.garbage, self.delay]
            .iter()
            .all(|o| *o == Ordering::Less)
    }
}

pub fn compare_against_reference(report: &MetricsReport, reference: &ReferenceRow) -> Comparison {
    Comparison {
        gates: report.total_gates.cmp(&reference.gates),
        garbage: report.garbage_outputs.cmp(&reference.garbage),
        delay: report.unit_delay.cmp(&reference.delay),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FunctionKind {
    FullAdder,
    HalfAdder,
    Compressor42,
    RippleAdder(usize),
    AndArray(usize),
    Multiplier(usize),
}

/// What a circuit's outputs must equal for one input vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expected {
    /// Σ value·2^weight over all named outputs.
    Weighted(u128),
    /// Exact value of each output listed by [`FunctionSpec::output_names`].
    Bits(Vec<bool>),
}

impl fmt::Display for Expected {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expected::Weighted(v) => write!(f, "weighted output sum {v}"),
            Expected::Bits(bits) => {
                let s: String = bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
                write!(f, "output bits {s}")
            }
        }
    }
}

/// An arithmetic function a circuit is checked against.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionSpec {
    kind: FunctionKind,
    inputs: Vec<String>,
    outputs: Vec<String>,
}

fn operand_names(prefix: &str, n: usize) -> impl Iterator<Item = String> + '_ {
    (0..n).map(move |i| format!("{prefix}{i}"))
}

fn operand(bits: &[bool]) -> u128 {
    bits.iter()
        .enumerate()
        .map(|(i, &b)| (b as u128) << i)
        .sum()
}

impl FunctionSpec {
    pub fn new(kind: FunctionKind) -> Result<Self> {
        let names = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        let width = |n: usize, min: usize, max: usize| {
            if n < min {
                Err(Error::Width {
                    what: "function width",
                    min,
                    got: n,
                })
            } else if n > max {
                Err(Error::TooWide {
                    what: "function width",
                    max,
                    got: n,
                })
            } else {
                Ok(n)
            }
        };
        let (inputs, outputs) = match kind {
            FunctionKind::FullAdder => (names(&["A", "B", "Cin"]), vec![]),
            FunctionKind::HalfAdder => (names(&["A", "B"]), vec![]),
            FunctionKind::Compressor42 => (names(&["x1", "x2", "x3", "x4", "cin"]), vec![]),
            FunctionKind::RippleAdder(n) => {
                let n = width(n, 1, 120)?;
                let inputs = operand_names("a", n)
                    .chain(operand_names("b", n))
                    .chain(["cin".to_string()])
                    .collect();
                (inputs, vec![])
            }
            FunctionKind::AndArray(n) => {
                let n = width(n, 1, 64)?;
                let inputs = operand_names("a", n).chain(operand_names("b", n)).collect();
                let outputs = (0..n)
                    .flat_map(|i| (0..n).map(move |j| format!("pp{i}_{j}")))
                    .collect();
                (inputs, outputs)
            }
            FunctionKind::Multiplier(n) => {
                let n = width(n, 1, 64)?;
                (
                    operand_names("a", n).chain(operand_names("b", n)).collect(),
                    vec![],
                )
            }
        };
        Ok(FunctionSpec {
            kind,
            inputs,
            outputs,
        })
    }

    pub fn kind(&self) -> FunctionKind {
        self.kind
    }

    /// Input names in evaluation order.
    pub fn input_names(&self) -> &[String] {
        &self.inputs
    }

    /// Outputs checked bit-by-bit; empty for weighted specs.
    pub fn output_names(&self) -> &[String] {
        &self.outputs
    }

    /// Evaluates the reference function; `inputs` follows [`Self::input_names`].
    pub fn evaluate(&self, inputs: &[bool]) -> Expected {
        let ones = |bits: &[bool]| bits.iter().filter(|&&b| b).count() as u128;
        match self.kind {
            FunctionKind::FullAdder | FunctionKind::HalfAdder | FunctionKind::Compressor42 => {
                Expected::Weighted(ones(inputs))
            }
            FunctionKind::RippleAdder(n) => Expected::Weighted(
                operand(&inputs[..n]) + operand(&inputs[n..2 * n]) + inputs[2 * n] as u128,
            ),
            FunctionKind::AndArray(n) => Expected::Bits(
                (0..n)
                    .flat_map(|i| (0..n).map(move |j| inputs[i] & inputs[n + j]))
                    .collect(),
            ),
            FunctionKind::Multiplier(n) => {
                Expected::Weighted(operand(&inputs[..n]) * operand(&inputs[n..2 * n]))
            }
        }
    }
}

impl FromStr for FunctionSpec {
    type Err = Error;

    /// `fa`, `ha`, `c42`, `add:N`, `and:N` or `mul:N`.
    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownSpec(s.to_string());
        let kind = match s {
            "fa" => FunctionKind::FullAdder,
            "ha" => FunctionKind::HalfAdder,
            "c42" => FunctionKind::Compressor42,
            _ => {
                let (family, n) = s.split_once(':').ok_or_else(unknown)?;
                let n: usize = n.parse().map_err(|_| unknown())?;
                match family {
                    "add" => FunctionKind::RippleAdder(n),
                    "and" => FunctionKind::AndArray(n),
                    "mul" => FunctionKind::Multiplier(n),
                    _ => return Err(unknown()),
                }
            }
        };
        FunctionSpec::new(kind)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyMode {
    Exhaustive,
    Random { samples: u64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub inputs: Vec<(String, bool)>,
    pub expected: Expected,
    pub actual: Expected,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, v) in &self.inputs {
            write!(f, "{name}={} ", *v as u8)?;
        }
        write!(f, "expected {}, got {}", self.expected, self.actual)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub cases: u64,
    pub counterexample: Option<Counterexample>,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Precomputed wiring between a spec and a circuit.
struct Harness<'a> {
    circuit: &'a Circuit,
    spec: &'a FunctionSpec,
    input_lines: Vec<usize>,
    check: Check,
}

enum Check {
    Weighted(Vec<(usize, u32)>),
    Bits(Vec<usize>),
}

impl<'a> Harness<'a> {
    fn new(circuit: &'a Circuit, spec: &'a FunctionSpec) -> Result<Self> {
        let circuit_inputs = circuit.input_lines();
        if circuit_inputs.len() != spec.input_names().len() {
            return Err(Error::InterfaceMismatch(format!(
                "circuit has {} primary inputs, function has {}",
                circuit_inputs.len(),
                spec.input_names().len()
            )));
        }
        let input_lines = spec
            .input_names()
            .iter()
            .map(|name| {
                circuit_inputs
                    .iter()
                    .find(|(_, n)| n == name)
                    .map(|&(line, _)| line)
                    .ok_or_else(|| Error::InterfaceMismatch(format!("no input named {name}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let check = if spec.output_names().is_empty() {
            let weighted = circuit
                .output_lines()
                .into_iter()
                .map(|(line, name, weight)| {
                    weight.map(|w| (line, w)).ok_or_else(|| {
                        Error::InterfaceMismatch(format!("output {name} has no weight"))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            if weighted.is_empty() {
                return Err(Error::InterfaceMismatch(
                    "circuit has no named outputs".into(),
                ));
            }
            if let Some(&(_, w)) = weighted.iter().find(|&&(_, w)| w >= 128) {
                return Err(Error::InterfaceMismatch(format!(
                    "output weight {w} too large"
                )));
            }
            Check::Weighted(weighted)
        } else {
            let lines = spec
                .output_names()
                .iter()
                .map(|name| {
                    circuit
                        .output_line(name)
                        .ok_or_else(|| Error::InterfaceMismatch(format!("no output named {name}")))
                })
                .collect::<Result<Vec<_>>>()?;
            Check::Bits(lines)
        };
        Ok(Harness {
            circuit,
            spec,
            input_lines,
            check,
        })
    }

    fn test(&self, inputs: &[bool]) -> Option<Counterexample> {
        let mut state = self.circuit.initial_state();
        for (&line, &v) in self.input_lines.iter().zip(inputs) {
            state[line] = v;
        }
        self.circuit.run(&mut state);
        let actual = match &self.check {
            Check::Weighted(outs) => Expected::Weighted(
                outs.iter()
                    .map(|&(line, w)| (state[line] as u128) << w)
                    .sum(),
            ),
            Check::Bits(lines) => Expected::Bits(lines.iter().map(|&l| state[l]).collect()),
        };
        let expected = self.spec.evaluate(inputs);
        (actual != expected).then(|| Counterexample {
            inputs: self
                .spec
                .input_names()
                .iter()
                .cloned()
                .zip(inputs.iter().copied())
                .collect(),
            expected,
            actual,
        })
    }
}

/// Checks `circuit` against `spec`. Input vectors are ordered with the
/// spec's first input as the most significant bit; the reported
/// counterexample is the first failing vector in that order (exhaustive) or
/// in sampling order (random).
pub fn verify_function(
    circuit: &Circuit,
    spec: &FunctionSpec,
    mode: VerifyMode,
) -> Result<Verdict> {
    verify_function_with_cap(circuit, spec, mode, DEFAULT_ENUMERATION_CAP)
}

pub fn verify_function_with_cap(
    circuit: &Circuit,
    spec: &FunctionSpec,
    mode: VerifyMode,
    cap: usize,
) -> Result<Verdict> {
    let harness = Harness::new(circuit, spec)?;
    let m = spec.input_names().len();
    let decode =
        |code: u64| -> Vec<bool> { (0..m).map(|k| (code >> (m - 1 - k)) & 1 == 1).collect() };
    match mode {
        VerifyMode::Exhaustive => {
            if m > cap {
                return Err(Error::EnumerationCap { inputs: m, cap });
            }
            let counterexample = (0..1u64 << m)
                .into_par_iter()
                .map(|code| harness.test(&decode(code)))
                .find_first(Option::is_some)
                .flatten();
            Ok(Verdict {
                cases: 1 << m,
                counterexample,
            })
        }
        VerifyMode::Random { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let vectors: Vec<Vec<bool>> = (0..samples)
                .map(|_| (0..m).map(|_| rng.gen()).collect())
                .collect();
            let counterexample = vectors
                .par_iter()
                .map(|v| harness.test(v))
                .find_first(Option::is_some)
                .flatten();
            Ok(Verdict {
                cases: samples,
                counterexample,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fa() -> Circuit {
        let mut c = Circuit::new(vec![
            LineRole::input("A"),
            LineRole::input("B"),
            LineRole::constant(false),
            LineRole::input("Cin"),
        ])
        .unwrap();
        c.append_gate(GateKind::Tsg, &[0, 1, 2, 3]).unwrap();
        c.set_output(2, "Sum", Some(0)).unwrap();
        c.set_output(3, "Cout", Some(1)).unwrap();
        c
    }

    #[test]
    fn full_adder_metrics() {
        let m = metrics(&fa());
        assert_eq!((m.total_gates, m.garbage_outputs, m.unit_delay), (1, 2, 1));
        assert_eq!(m.constant_inputs, 1);
        assert_eq!(m.gates_of(GateKind::Tsg), 1);
        assert_eq!(m.lines, 4);
    }

    #[test]
    fn empty_circuit_metrics() {
        let c = Circuit::new(vec![LineRole::input("x")]).unwrap();
        let m = metrics(&c);
        assert_eq!((m.total_gates, m.unit_delay, m.garbage_outputs), (0, 0, 1));
        assert_eq!(m.gates_by_kind.values().sum::<usize>(), 0);
    }

    #[test]
    fn delay_tracks_shared_lines() {
        let mut c = Circuit::new(vec![LineRole::constant(false); 8]).unwrap();
        c.append_gate(GateKind::Tsg, &[0, 1, 2, 3]).unwrap();
        c.append_gate(GateKind::Tsg, &[4, 5, 6, 7]).unwrap();
        assert_eq!(metrics(&c).unit_delay, 1);
        c.append_gate(GateKind::Tsg, &[2, 5, 6, 7]).unwrap();
        assert_eq!(metrics(&c).unit_delay, 2);
        c.append_gate(GateKind::Not, &[0]).unwrap();
        assert_eq!(metrics(&c).unit_delay, 2);
        c.append_gate(GateKind::Feynman, &[0, 7]).unwrap();
        assert_eq!(metrics(&c).unit_delay, 3);
    }

    #[test]
    fn reference_comparisons() {
        let report = metrics(&fa());
        let cmp = compare_against_reference(&report, &FULL_ADDER_REFERENCES[0]);
        assert!(cmp.strictly_dominates());
        let cmp = compare_against_reference(&report, &FULL_ADDER_REFERENCES[1]);
        assert_eq!(cmp.gates, Ordering::Less);
        assert_eq!(cmp.garbage, Ordering::Equal);
        assert_eq!(cmp.delay, Ordering::Less);
        assert!(cmp.dominates() && !cmp.strictly_dominates());
        let worse = ReferenceRow {
            name: "tiny",
            gates: 1,
            garbage: 1,
            delay: 1,
        };
        assert!(!compare_against_reference(&report, &worse).dominates());
    }

    #[test]
    fn kv_and_table_rendering() {
        let kv = metrics(&fa()).to_kv();
        assert_eq!(
            kv,
            "total_gates=1\ngates_by_kind.TSG=1\ngates_by_kind.FREDKIN=0\n\
             gates_by_kind.TOFFOLI=0\ngates_by_kind.FEYNMAN=0\ngates_by_kind.NOT=0\n\
             garbage_outputs=2\nconstant_inputs=1\nunit_delay=1\nlines=4\n"
        );
        let table = metrics(&fa()).to_table();
        assert!(table
            .lines()
            .any(|l| l.starts_with("unit_delay ") && l.ends_with(" 1")));
    }

    #[test]
    fn spec_parsing() {
        assert_eq!(
            "fa".parse::<FunctionSpec>().unwrap().kind(),
            FunctionKind::FullAdder
        );
        assert_eq!(
            "mul:8".parse::<FunctionSpec>().unwrap().kind(),
            FunctionKind::Multiplier(8)
        );
        assert_eq!(
            "and:3"
                .parse::<FunctionSpec>()
                .unwrap()
                .output_names()
                .len(),
            9
        );
        for bad in ["fx", "mul", "mul:x", "div:4"] {
            assert!(
                matches!(bad.parse::<FunctionSpec>(), Err(Error::UnknownSpec(_))),
                "{bad}"
            );
        }
        assert!(matches!(
            "add:0".parse::<FunctionSpec>(),
            Err(Error::Width { .. })
        ));
    }

    #[test]
    fn evaluators() {
        let mul = FunctionSpec::new(FunctionKind::Multiplier(4)).unwrap();
        // a = 3 (a0=a1=1), b = 5 (b0=b2=1)
        let bits = [true, true, false, false, true, false, true, false];
        assert_eq!(mul.evaluate(&bits), Expected::Weighted(15));
        let add = FunctionSpec::new(FunctionKind::RippleAdder(2)).unwrap();
        assert_eq!(
            add.evaluate(&[true, true, true, false, true]),
            Expected::Weighted(3 + 1 + 1)
        );
    }

    #[test]
    fn verifies_full_adder_exhaustively() {
        let spec = FunctionSpec::new(FunctionKind::FullAdder).unwrap();
        let v = verify_function(&fa(), &spec, VerifyMode::Exhaustive).unwrap();
        assert!(v.passed());
        assert_eq!(v.cases, 8);
        let v = verify_function(
            &fa(),
            &spec,
            VerifyMode::Random {
                samples: 50,
                seed: 3,
            },
        )
        .unwrap();
        assert!(v.passed());
    }

    #[test]
    fn reports_first_counterexample_in_input_order() {
        let mut broken = fa();
        // swapping the weights breaks every case with exactly one carry or one sum bit
        broken.set_output(2, "Sum", Some(1)).unwrap();
        broken.set_output(3, "Cout", Some(0)).unwrap();
        let spec = FunctionSpec::new(FunctionKind::FullAdder).unwrap();
        let v = verify_function(&broken, &spec, VerifyMode::Exhaustive).unwrap();
        let cex = v.counterexample.unwrap();
        // code 0b001 is the first vector where sum != carry
        let ins: Vec<bool> = cex.inputs.iter().map(|(_, b)| *b).collect();
        assert_eq!(ins, vec![false, false, true]);
        assert_eq!(cex.expected, Expected::Weighted(1));
        assert_eq!(cex.actual, Expected::Weighted(2));
    }

    #[test]
    fn interface_mismatches() {
        let spec = FunctionSpec::new(FunctionKind::HalfAdder).unwrap();
        assert!(matches!(
            verify_function(&fa(), &spec, VerifyMode::Exhaustive),
            Err(Error::InterfaceMismatch(_))
        ));
        let c42 = FunctionSpec::new(FunctionKind::Compressor42).unwrap();
        assert!(matches!(
            verify_function(&fa(), &c42, VerifyMode::Exhaustive),
            Err(Error::InterfaceMismatch(_))
        ));
        let spec = FunctionSpec::new(FunctionKind::FullAdder).unwrap();
        assert_eq!(
            verify_function_with_cap(&fa(), &spec, VerifyMode::Exhaustive, 2),
            Err(Error::EnumerationCap { inputs: 3, cap: 2 })
        );
    }
}
