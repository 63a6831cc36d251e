//! Cascade netlists: a fixed set of lines rewritten by an ordered list of
//! gate applications. Fan-out is unrepresentable; copies need explicit
//! Feynman gates onto constant lines.

use std::collections::{HashMap, HashSet};
use std::ops::Range;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gate::{gate_inverse, Gate, GateKind};

/// Largest number of free inputs enumerated exhaustively by default.
pub const DEFAULT_ENUMERATION_CAP: usize = 24;

/// How a line enters the cascade.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LineRole {
    Input(String),
    Constant(bool),
}

impl LineRole {
    pub fn input(name: impl Into<String>) -> Self {
        LineRole::Input(name.into())
    }

    pub fn constant(value: bool) -> Self {
        LineRole::Constant(value)
    }
}

/// How a line leaves the cascade.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub enum OutputLabel {
    Output {
        name: String,
        weight: Option<u32>,
    },
    #[default]
    Garbage,
}

impl OutputLabel {
    pub fn name(&self) -> Option<&str> {
        match self {
            OutputLabel::Output { name, .. } => Some(name),
            OutputLabel::Garbage => None,
        }
    }

    pub fn is_garbage(&self) -> bool {
        matches!(self, OutputLabel::Garbage)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GateApp {
    pub kind: GateKind,
    pub lines: Vec<usize>,
}

impl GateApp {
    #[inline]
    fn apply(&self, gate: &Gate, state: &mut [bool]) {
        let code = self
            .lines
            .iter()
            .fold(0usize, |acc, &l| (acc << 1) | state[l] as usize);
        let out = gate.apply_code(code);
        let k = self.lines.len();
        for (port, &l) in self.lines.iter().enumerate() {
            state[l] = (out >> (k - 1 - port)) & 1 == 1;
        }
    }
}

/// Final line values after simulation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Assignment {
    pub bits: Vec<bool>,
}

impl Assignment {
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, line: usize) -> bool {
        self.bits[line]
    }
}

pub(crate) fn check_name(name: &str) -> Result<()> {
    let bad = |c: char| c.is_whitespace() || matches!(c, '#' | ',' | '=');
    if name.is_empty() || name.chars().any(bad) {
        return Err(Error::InvalidName(name.to_string()));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    roles: Vec<LineRole>,
    gates: Vec<GateApp>,
    labels: Vec<OutputLabel>,
}

impl Circuit {
    /// An empty cascade over the given lines; every output starts as garbage.
    pub fn new(roles: Vec<LineRole>) -> Result<Self> {
        if roles.is_empty() {
            return Err(Error::EmptyCircuit);
        }
        let mut circuit = Circuit {
            roles: Vec::with_capacity(roles.len()),
            gates: Vec::new(),
            labels: Vec::with_capacity(roles.len()),
        };
        for role in roles {
            circuit.add_line(role)?;
        }
        Ok(circuit)
    }

    /// Appends a fresh line and returns its index.
    pub fn add_line(&mut self, role: LineRole) -> Result<usize> {
        if let LineRole::Input(name) = &role {
            check_name(name)?;
            if self.input_names().any(|n| n == name) {
                return Err(Error::DuplicateInputName(name.clone()));
            }
        }
        self.roles.push(role);
        self.labels.push(OutputLabel::Garbage);
        Ok(self.roles.len() - 1)
    }

    pub fn add_constant(&mut self, value: bool) -> usize {
        self.roles.push(LineRole::Constant(value));
        self.labels.push(OutputLabel::Garbage);
        self.roles.len() - 1
    }

    pub fn append_gate(&mut self, kind: GateKind, lines: &[usize]) -> Result<()> {
        if lines.len() != kind.arity() {
            return Err(Error::ArityMismatch {
                kind,
                expected: kind.arity(),
                got: lines.len(),
            });
        }
        for (i, &l) in lines.iter().enumerate() {
            if l >= self.roles.len() {
                return Err(Error::LineOutOfRange {
                    index: l,
                    lines: self.roles.len(),
                });
            }
            if lines[..i].contains(&l) {
                return Err(Error::DuplicateLine { index: l });
            }
        }
        self.gates.push(GateApp {
            kind,
            lines: lines.to_vec(),
        });
        Ok(())
    }

    /// Labels `line` as a named primary output.
    pub fn set_output(&mut self, line: usize, name: &str, weight: Option<u32>) -> Result<()> {
        check_name(name)?;
        self.check_line(line)?;
        let taken = self
            .labels
            .iter()
            .enumerate()
            .any(|(i, l)| i != line && l.name() == Some(name));
        if taken {
            return Err(Error::DuplicateOutputName(name.to_string()));
        }
        self.labels[line] = OutputLabel::Output {
            name: name.to_string(),
            weight,
        };
        Ok(())
    }

    pub fn set_garbage(&mut self, line: usize) -> Result<()> {
        self.check_line(line)?;
        self.labels[line] = OutputLabel::Garbage;
        Ok(())
    }

    fn check_line(&self, line: usize) -> Result<()> {
        if line >= self.roles.len() {
            return Err(Error::LineOutOfRange {
                index: line,
                lines: self.roles.len(),
            });
        }
        Ok(())
    }

    pub fn lines(&self) -> usize {
        self.roles.len()
    }

    pub fn roles(&self) -> &[LineRole] {
        &self.roles
    }

    pub fn gates(&self) -> &[GateApp] {
        &self.gates
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    pub fn labels(&self) -> &[OutputLabel] {
        &self.labels
    }

    /// Primary input names in line order.
    pub fn input_names(&self) -> impl Iterator<Item = &str> {
        self.roles.iter().filter_map(|r| match r {
            LineRole::Input(n) => Some(n.as_str()),
            LineRole::Constant(_) => None,
        })
    }

    /// `(line, name)` of every primary input, in line order.
    pub fn input_lines(&self) -> Vec<(usize, &str)> {
        self.roles
            .iter()
            .enumerate()
            .filter_map(|(i, r)| match r {
                LineRole::Input(n) => Some((i, n.as_str())),
                LineRole::Constant(_) => None,
            })
            .collect()
    }

    /// `(line, name, weight)` of every named output, in line order.
    pub fn output_lines(&self) -> Vec<(usize, &str, Option<u32>)> {
        self.labels
            .iter()
            .enumerate()
            .filter_map(|(i, l)| match l {
                OutputLabel::Output { name, weight } => Some((i, name.as_str(), *weight)),
                OutputLabel::Garbage => None,
            })
            .collect()
    }

    pub fn garbage_lines(&self) -> Vec<usize> {
        (0..self.lines())
            .filter(|&i| self.labels[i].is_garbage())
            .collect()
    }

    pub fn output_line(&self, name: &str) -> Option<usize> {
        self.labels.iter().position(|l| l.name() == Some(name))
    }

    /// Constant lines no gate ever acts on. Generated circuits have none:
    /// an ancilla is only allocated for the gate that consumes it.
    pub fn idle_constants(&self) -> Vec<usize> {
        let mut touched = vec![false; self.lines()];
        for app in &self.gates {
            for &l in &app.lines {
                touched[l] = true;
            }
        }
        self.roles
            .iter()
            .enumerate()
            .filter(|&(i, r)| matches!(r, LineRole::Constant(_)) && !touched[i])
            .map(|(i, _)| i)
            .collect()
    }

    /// Initial state with constants placed and every input low.
    pub fn initial_state(&self) -> Vec<bool> {
        self.roles
            .iter()
            .map(|r| matches!(r, LineRole::Constant(true)))
            .collect()
    }

    /// Runs the whole cascade in place over an L-bit state.
    pub fn run(&self, state: &mut [bool]) {
        self.run_range(state, 0..self.gates.len());
    }

    /// Runs gates `range` (in cascade order) in place.
    pub fn run_range(&self, state: &mut [bool], range: Range<usize>) {
        debug_assert_eq!(state.len(), self.lines());
        for app in &self.gates[range] {
            app.apply(app.kind.gate(), state);
        }
    }

    /// Undoes [`Circuit::run`]: inverse gates in reverse order.
    pub fn run_backward(&self, state: &mut [bool]) {
        let inverses: Vec<Gate> = GateKind::ALL
            .iter()
            .map(|k| gate_inverse(k.gate()))
            .collect();
        for app in self.gates.iter().rev() {
            app.apply(&inverses[app.kind as usize], state);
        }
    }

    /// Simulates the cascade from named input values. Constants come from
    /// the line roles.
    pub fn simulate<'a, I>(&self, inputs: I) -> Result<Assignment>
    where
        I: IntoIterator<Item = (&'a str, bool)>,
    {
        let mut given: HashMap<&str, bool> = HashMap::new();
        for (name, value) in inputs {
            given.insert(name, value);
        }
        let mut state = self.initial_state();
        for (line, name) in self.input_lines() {
            state[line] = given
                .remove(name)
                .ok_or_else(|| Error::MissingInput(name.to_string()))?;
        }
        if let Some(name) = given.keys().min() {
            return Err(Error::UnknownInput(name.to_string()));
        }
        self.run(&mut state);
        Ok(Assignment { bits: state })
    }

    /// Simulates an explicit L-bit starting state (constants not forced).
    pub fn simulate_state(&self, state: &[bool]) -> Result<Assignment> {
        if state.len() != self.lines() {
            return Err(Error::AssignmentLength {
                expected: self.lines(),
                got: state.len(),
            });
        }
        let mut bits = state.to_vec();
        self.run(&mut bits);
        Ok(Assignment { bits })
    }

    /// Named output values of a final assignment, in line order.
    pub fn named_outputs<'a>(&'a self, result: &Assignment) -> Vec<(&'a str, bool)> {
        self.output_lines()
            .into_iter()
            .map(|(line, name, _)| (name, result.get(line)))
            .collect()
    }

    pub fn truth_table(&self) -> Result<TruthTable> {
        self.truth_table_with_cap(DEFAULT_ENUMERATION_CAP)
    }

    /// Enumerates every primary-input combination, first input as MSB.
    pub fn truth_table_with_cap(&self, cap: usize) -> Result<TruthTable> {
        let inputs = self.input_lines();
        if inputs.len() > cap {
            return Err(Error::EnumerationCap {
                inputs: inputs.len(),
                cap,
            });
        }
        let outputs = self.output_lines();
        let garbage = self.garbage_lines();
        let m = inputs.len();
        let rows = (0..1u64 << m)
            .into_par_iter()
            .map(|code| {
                let mut state = self.initial_state();
                for (k, &(line, _)) in inputs.iter().enumerate() {
                    state[line] = (code >> (m - 1 - k)) & 1 == 1;
                }
                self.run(&mut state);
                TruthRow {
                    code,
                    outputs: outputs.iter().map(|&(l, _, _)| state[l]).collect(),
                    garbage: garbage.iter().map(|&l| state[l]).collect(),
                }
            })
            .collect();
        Ok(TruthTable {
            inputs: inputs.iter().map(|&(_, n)| n.to_string()).collect(),
            outputs: outputs.iter().map(|&(_, n, _)| n.to_string()).collect(),
            garbage_lines: garbage,
            rows,
        })
    }

    /// Exhaustive permutation check of the L-bit transfer function with
    /// constant lines treated as free.
    pub fn check_reversibility(&self, cap: usize) -> Result<bool> {
        let l = self.lines();
        if l > cap {
            return Err(Error::EnumerationCap { inputs: l, cap });
        }
        let mut seen = vec![false; 1usize << l];
        let mut state = vec![false; l];
        for code in 0..1usize << l {
            for (i, bit) in state.iter_mut().enumerate() {
                *bit = (code >> (l - 1 - i)) & 1 == 1;
            }
            self.run(&mut state);
            let out = state.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
            if std::mem::replace(&mut seen[out], true) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Sampled injectivity probe for circuits too wide to enumerate: runs
    /// `samples` distinct random L-bit states and reports whether any two
    /// collide on output.
    pub fn probe_injectivity(&self, samples: usize, seed: u64) -> bool {
        let l = self.lines();
        let samples = if l < 64 {
            samples.min(1usize << l)
        } else {
            samples
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut starts = HashSet::with_capacity(samples);
        while starts.len() < samples {
            let state: Vec<bool> = (0..l).map(|_| rng.gen()).collect();
            starts.insert(state);
        }
        let mut images = HashSet::with_capacity(samples);
        starts.into_iter().all(|mut state| {
            self.run(&mut state);
            images.insert(state)
        })
    }
}

pub fn new_circuit(roles: Vec<LineRole>) -> Result<Circuit> {
    Circuit::new(roles)
}

pub fn append_gate(mut circuit: Circuit, kind: GateKind, lines: &[usize]) -> Result<Circuit> {
    circuit.append_gate(kind, lines)?;
    Ok(circuit)
}

pub fn simulate<'a, I>(circuit: &Circuit, inputs: I) -> Result<Assignment>
where
    I: IntoIterator<Item = (&'a str, bool)>,
{
    circuit.simulate(inputs)
}

pub fn truth_table(circuit: &Circuit) -> Result<TruthTable> {
    circuit.truth_table()
}

/// Exhaustive when `L` is within [`DEFAULT_ENUMERATION_CAP`], otherwise
/// a 10^5-sample injectivity probe.
pub fn check_circuit_reversibility(circuit: &Circuit) -> bool {
    match circuit.check_reversibility(DEFAULT_ENUMERATION_CAP) {
        Ok(verdict) => verdict,
        Err(_) => circuit.probe_injectivity(100_000, 0x5eed),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruthRow {
    /// Primary-input code, first input most significant.
    pub code: u64,
    pub outputs: Vec<bool>,
    pub garbage: Vec<bool>,
}

impl TruthRow {
    pub fn input_bits(&self, width: usize) -> Vec<bool> {
        (0..width)
            .map(|k| (self.code >> (width - 1 - k)) & 1 == 1)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruthTable {
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub garbage_lines: Vec<usize>,
    pub rows: Vec<TruthRow>,
}

impl TruthTable {
    /// Comma-separated table: inputs, named outputs, then (optionally)
    /// garbage columns headed `g<line>`.
    pub fn to_csv(&self, with_garbage: bool) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header: Vec<String> = self.inputs.iter().chain(&self.outputs).cloned().collect();
        if with_garbage {
            header.extend(self.garbage_lines.iter().map(|l| format!("g{l}")));
        }
        w.write_record(&header).expect("in-memory write");
        let bit = |b: &bool| if *b { "1" } else { "0" };
        for row in &self.rows {
            let mut record: Vec<&str> = row.input_bits(self.inputs.len()).iter().map(bit).collect();
            record.extend(row.outputs.iter().map(bit));
            if with_garbage {
                record.extend(row.garbage.iter().map(bit));
            }
            w.write_record(&record).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii")
    }
}
