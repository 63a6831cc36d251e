//! RNL v1: a line-oriented text format for cascade netlists.
//!
//! ```text
//! lines 4
//! input 0 A
//! input 1 B
//! const 2 0
//! input 3 Cin
//! gate tsg 0 1 2 3
//! garbage 0
//! garbage 1
//! output 2 Sum 0
//! output 3 Cout 1
//! ```
//!
//! `#` starts a comment. `lines` must come first. Lines without an
//! `output`/`garbage` directive default to garbage.

use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::error::Error as CircuitError;
use crate::gate::GateKind;
use crate::netlist::{Circuit, LineRole, OutputLabel};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    UnknownGate(String),
    DuplicateOutputLabel(usize),
    Arity {
        kind: GateKind,
        expected: usize,
        got: usize,
    },
    Validation(String),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Syntax(msg) => write!(f, "syntax error: {msg}"),
            ParseErrorKind::UnknownGate(kind) => write!(f, "unknown gate kind {kind:?}"),
            ParseErrorKind::DuplicateOutputLabel(line) => {
                write!(f, "line {line} already has an output label")
            }
            ParseErrorKind::Arity {
                kind,
                expected,
                got,
            } => {
                write!(f, "{kind} takes {expected} lines, got {got}")
            }
            ParseErrorKind::Validation(msg) => write!(f, "invalid netlist: {msg}"),
        }
    }
}

/// A parse failure at a 1-based line and column of the source text.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let code = line.split('#').next().unwrap_or("");
    let mut tokens = Vec::new();
    let mut start = None;
    for (i, ch) in code.char_indices().chain([(code.len(), ' ')]) {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                tokens.push(Token {
                    text: &code[s..i],
                    column: s + 1,
                });
                start = None;
            }
            _ => {}
        }
    }
    tokens
}

struct Parser {
    line: usize,
    lines: Option<usize>,
    roles: Vec<Option<LineRole>>,
    gates: Vec<(GateKind, Vec<usize>, usize)>,
    labels: Vec<Option<OutputLabel>>,
}

impl Parser {
    fn err(&self, column: usize, kind: ParseErrorKind) -> ParseError {
        ParseError {
            line: self.line,
            column,
            kind,
        }
    }

    fn number<T: std::str::FromStr>(&self, tok: &Token<'_>, what: &str) -> Result<T, ParseError> {
        tok.text.parse().map_err(|_| {
            self.err(
                tok.column,
                ParseErrorKind::Syntax(format!("expected {what}, found {:?}", tok.text)),
            )
        })
    }

    fn index(&self, tok: &Token<'_>) -> Result<usize, ParseError> {
        let idx: usize = self.number(tok, "a line index")?;
        let lines = self.lines.unwrap_or(0);
        if idx >= lines {
            return Err(self.err(
                tok.column,
                ParseErrorKind::Validation(format!("line {idx} is out of range for {lines} lines")),
            ));
        }
        Ok(idx)
    }

    fn arity(&self, tokens: &[Token<'_>], min: usize, max: usize) -> Result<(), ParseError> {
        let args = tokens.len() - 1;
        if args < min || args > max {
            let col = tokens.get(max + 1).map_or(tokens[0].column, |t| t.column);
            let want = if min == max {
                format!("{min}")
            } else {
                format!("{min} to {max}")
            };
            return Err(self.err(
                col,
                ParseErrorKind::Syntax(format!(
                    "{} expects {want} arguments, got {args}",
                    tokens[0].text
                )),
            ));
        }
        Ok(())
    }

    fn directive(&mut self, tokens: &[Token<'_>]) -> Result<(), ParseError> {
        let head = &tokens[0];
        if head.text != "lines" && self.lines.is_none() {
            return Err(self.err(
                head.column,
                ParseErrorKind::Syntax("the first directive must be `lines`".into()),
            ));
        }
        match head.text {
            "lines" => {
                self.arity(tokens, 1, 1)?;
                if self.lines.is_some() {
                    return Err(self.err(
                        head.column,
                        ParseErrorKind::Syntax("duplicate `lines`".into()),
                    ));
                }
                let n: usize = self.number(&tokens[1], "a line count")?;
                if n == 0 {
                    return Err(self.err(
                        tokens[1].column,
                        ParseErrorKind::Validation("a circuit needs at least one line".into()),
                    ));
                }
                self.lines = Some(n);
                self.roles = vec![None; n];
                self.labels = vec![None; n];
            }
            "input" | "const" => {
                self.arity(tokens, 2, 2)?;
                let idx = self.index(&tokens[1])?;
                let role = if head.text == "input" {
                    LineRole::Input(tokens[2].text.to_string())
                } else {
                    match tokens[2].text {
                        "0" => LineRole::Constant(false),
                        "1" => LineRole::Constant(true),
                        other => {
                            return Err(self.err(
                                tokens[2].column,
                                ParseErrorKind::Syntax(format!(
                                    "constant must be 0 or 1, found {other:?}"
                                )),
                            ))
                        }
                    }
                };
                if self.roles[idx].replace(role).is_some() {
                    return Err(self.err(
                        tokens[1].column,
                        ParseErrorKind::Validation(format!("line {idx} already has an input role")),
                    ));
                }
            }
            "gate" => {
                if tokens.len() < 2 {
                    return Err(self.err(
                        head.column,
                        ParseErrorKind::Syntax("gate needs a kind".into()),
                    ));
                }
                let kind: GateKind = tokens[1].text.parse().map_err(|_| {
                    self.err(
                        tokens[1].column,
                        ParseErrorKind::UnknownGate(tokens[1].text.to_string()),
                    )
                })?;
                let args = &tokens[2..];
                if args.len() != kind.arity() {
                    return Err(self.err(
                        tokens[1].column,
                        ParseErrorKind::Arity {
                            kind,
                            expected: kind.arity(),
                            got: args.len(),
                        },
                    ));
                }
                let idx = args
                    .iter()
                    .map(|t| self.index(t))
                    .collect::<Result<Vec<_>, _>>()?;
                self.gates.push((kind, idx, tokens[1].column));
            }
            "output" => {
                self.arity(tokens, 2, 3)?;
                let idx = self.index(&tokens[1])?;
                let weight = tokens
                    .get(3)
                    .map(|t| self.number::<u32>(t, "a weight"))
                    .transpose()?;
                let label = OutputLabel::Output {
                    name: tokens[2].text.to_string(),
                    weight,
                };
                self.label(idx, label, tokens[1].column)?;
            }
            "garbage" => {
                self.arity(tokens, 1, 1)?;
                let idx = self.index(&tokens[1])?;
                self.label(idx, OutputLabel::Garbage, tokens[1].column)?;
            }
            other => {
                return Err(self.err(
                    head.column,
                    ParseErrorKind::Syntax(format!("unknown directive {other:?}")),
                ))
            }
        }
        Ok(())
    }

    fn label(&mut self, idx: usize, label: OutputLabel, column: usize) -> Result<(), ParseError> {
        if self.labels[idx].is_some() {
            return Err(self.err(column, ParseErrorKind::DuplicateOutputLabel(idx)));
        }
        if let Some(name) = label.name() {
            if self.labels.iter().flatten().any(|l| l.name() == Some(name)) {
                return Err(self.err(
                    column,
                    ParseErrorKind::Validation(format!("output name {name:?} is declared twice")),
                ));
            }
        }
        self.labels[idx] = Some(label);
        Ok(())
    }
}

fn validation(line: usize, err: CircuitError) -> ParseError {
    ParseError {
        line,
        column: 1,
        kind: ParseErrorKind::Validation(err.to_string()),
    }
}

pub fn parse_netlist(text: &str) -> Result<Circuit, ParseError> {
    let mut p = Parser {
        line: 0,
        lines: None,
        roles: Vec::new(),
        gates: Vec::new(),
        labels: Vec::new(),
    };
    let mut role_lines = Vec::new();
    let mut label_lines = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        p.line = n + 1;
        let tokens = tokenize(raw);
        if tokens.is_empty() {
            continue;
        }
        p.directive(&tokens)?;
        match tokens[0].text {
            "input" | "const" => role_lines.push(p.line),
            "output" => label_lines.push(p.line),
            _ => {}
        }
    }
    let end = p.line.max(1);
    if p.lines.is_none() {
        return Err(ParseError {
            line: end,
            column: 1,
            kind: ParseErrorKind::Syntax("missing `lines` directive".into()),
        });
    }
    if let Some(idx) = p.roles.iter().position(Option::is_none) {
        return Err(ParseError {
            line: end,
            column: 1,
            kind: ParseErrorKind::Validation(format!("line {idx} has no input or const role")),
        });
    }
    let roles: Vec<LineRole> = p.roles.into_iter().flatten().collect();
    let first_role_line = role_lines.first().copied().unwrap_or(end);
    let mut circuit = Circuit::new(roles).map_err(|e| validation(first_role_line, e))?;
    for (kind, lines, _) in &p.gates {
        match circuit.append_gate(*kind, lines) {
            Ok(()) => {}
            Err(e) => {
                let at = locate_gate(text, circuit.gate_count());
                return Err(ParseError {
                    line: at,
                    column: 1,
                    kind: ParseErrorKind::Validation(e.to_string()),
                });
            }
        }
    }
    for (idx, label) in p.labels.into_iter().enumerate() {
        if let Some(OutputLabel::Output { name, weight }) = label {
            circuit
                .set_output(idx, &name, weight)
                .map_err(|e| validation(label_lines.first().copied().unwrap_or(end), e))?;
        }
    }
    Ok(circuit)
}

/// Source line of the `k`-th gate directive (0-based).
fn locate_gate(text: &str, k: usize) -> usize {
    text.lines()
        .enumerate()
        .filter(|(_, l)| tokenize(l).first().is_some_and(|t| t.text == "gate"))
        .nth(k)
        .map_or(1, |(n, _)| n + 1)
}

/// Canonical RNL text for `circuit`.
pub fn write_netlist(circuit: &Circuit) -> String {
    let mut out = String::new();
    writeln!(out, "lines {}", circuit.lines()).unwrap();
    for (idx, role) in circuit.roles().iter().enumerate() {
        match role {
            LineRole::Input(name) => writeln!(out, "input {idx} {name}").unwrap(),
            LineRole::Constant(v) => writeln!(out, "const {idx} {}", *v as u8).unwrap(),
        }
    }
    for app in circuit.gates() {
        out.push_str("gate ");
        out.push_str(app.kind.keyword());
        for l in &app.lines {
            write!(out, " {l}").unwrap();
        }
        out.push('\n');
    }
    for (idx, label) in circuit.labels().iter().enumerate() {
        match label {
            OutputLabel::Garbage => writeln!(out, "garbage {idx}").unwrap(),
            OutputLabel::Output {
                name,
                weight: Some(w),
            } => writeln!(out, "output {idx} {name} {w}").unwrap(),
            OutputLabel::Output { name, weight: None } => {
                writeln!(out, "output {idx} {name}").unwrap()
            }
        }
    }
    out
}
