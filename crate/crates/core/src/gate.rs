//! Reversible gate primitives stored as explicit permutations.
//!
//! Port `0` (A) is the most significant bit of a table index and the last
//! port the least significant, so `table[0b1101]` is the output for
//! `(A, B, C, D) = (1, 1, 0, 1)` on a four-line gate.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GateKind {
    Tsg,
    Fredkin,
    Toffoli,
    Feynman,
    Not,
}

impl GateKind {
    pub const ALL: [GateKind; 5] = [
        GateKind::Tsg,
        GateKind::Fredkin,
        GateKind::Toffoli,
        GateKind::Feynman,
        GateKind::Not,
    ];

    pub fn arity(self) -> usize {
        match self {
            GateKind::Tsg => 4,
            GateKind::Fredkin | GateKind::Toffoli => 3,
            GateKind::Feynman => 2,
            GateKind::Not => 1,
        }
    }

    /// Lower-case netlist keyword.
    pub fn keyword(self) -> &'static str {
        match self {
            GateKind::Tsg => "tsg",
            GateKind::Fredkin => "fredkin",
            GateKind::Toffoli => "toffoli",
            GateKind::Feynman => "feynman",
            GateKind::Not => "not",
        }
    }

    /// Upper-case name used in metrics keys.
    pub fn name(self) -> &'static str {
        match self {
            GateKind::Tsg => "TSG",
            GateKind::Fredkin => "FREDKIN",
            GateKind::Toffoli => "TOFFOLI",
            GateKind::Feynman => "FEYNMAN",
            GateKind::Not => "NOT",
        }
    }

    /// The shared, immutable standard gate for this kind.
    pub fn gate(self) -> &'static Gate {
        static GATES: OnceLock<[Gate; 5]> = OnceLock::new();
        let gates = GATES.get_or_init(|| GateKind::ALL.map(make_standard_gate));
        &gates[self as usize]
    }

    /// Applies the defining Boolean equations to one input vector.
    fn equations(self, input: &[bool]) -> Vec<bool> {
        match *input {
            [a, b, c, d] if self == GateKind::Tsg => {
                let q = (!a & !c) ^ !b;
                let r = q ^ d;
                let s = (q & d) ^ ((a & b) ^ c);
                vec![a, q, r, s]
            }
            [a, b, c] if self == GateKind::Fredkin => {
                vec![a, (!a & b) ^ (a & c), (!a & c) ^ (a & b)]
            }
            [a, b, c] if self == GateKind::Toffoli => vec![a, b, (a & b) ^ c],
            [a, b] if self == GateKind::Feynman => vec![a, a ^ b],
            [a] if self == GateKind::Not => vec![!a],
            _ => unreachable!("input width always matches arity"),
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GateKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        GateKind::ALL
            .into_iter()
            .find(|k| k.keyword().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown gate kind {s:?}"))
    }
}

/// A k-line reversible gate: a permutation of `0..2^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gate {
    kind: GateKind,
    inverted: bool,
    table: Vec<u8>,
}

impl Gate {
    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn arity(&self) -> usize {
        self.kind.arity()
    }

    /// True for a gate produced by [`gate_inverse`] an odd number of times.
    pub fn is_inverted(&self) -> bool {
        self.inverted
    }

    pub fn table(&self) -> &[u8] {
        &self.table
    }

    /// Table lookup on an encoded input (port 0 is the MSB).
    #[inline]
    pub fn apply_code(&self, code: usize) -> usize {
        self.table[code] as usize
    }

    pub fn eval(&self, bits: &[bool]) -> Result<Vec<bool>> {
        if bits.len() != self.arity() {
            return Err(Error::ArityMismatch {
                kind: self.kind,
                expected: self.arity(),
                got: bits.len(),
            });
        }
        let out = self.apply_code(encode(bits));
        Ok(decode(out, self.arity()))
    }
}

/// Packs bits into an integer, first bit most significant.
pub fn encode(bits: &[bool]) -> usize {
    bits.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
}

/// Inverse of [`encode`] for a fixed width.
pub fn decode(code: usize, width: usize) -> Vec<bool> {
    (0..width)
        .map(|i| (code >> (width - 1 - i)) & 1 == 1)
        .collect()
}

pub fn make_standard_gate(kind: GateKind) -> Gate {
    let k = kind.arity();
    let table = (0..1usize << k)
        .map(|code| encode(&kind.equations(&decode(code, k))) as u8)
        .collect();
    Gate {
        kind,
        inverted: false,
        table,
    }
}

pub fn eval_gate(gate: &Gate, bits: &[bool]) -> Result<Vec<bool>> {
    gate.eval(bits)
}

pub fn gate_inverse(gate: &Gate) -> Gate {
    let mut table = vec![0u8; gate.table.len()];
    for (input, &output) in gate.table.iter().enumerate() {
        table[output as usize] = input as u8;
    }
    Gate {
        kind: gate.kind,
        inverted: !gate.inverted,
        table,
    }
}

/// True iff `table` is a permutation of `0..2^k`.
pub fn is_bijective_table(table: &[usize], k: usize) -> Result<bool> {
    let size = 1usize << k;
    if table.len() != size {
        return Err(Error::TableLength {
            arity: k,
            expected: size,
            got: table.len(),
        });
    }
    let mut seen = vec![false; size];
    for &v in table {
        if v >= size || std::mem::replace(&mut seen[v], true) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(s: &str) -> Vec<bool> {
        s.chars().map(|c| c == '1').collect()
    }

    fn widened(g: &Gate) -> Vec<usize> {
        g.table().iter().map(|&v| v as usize).collect()
    }

    // Bootstrap anchors: everything else is built on these two holding.
    #[test]
    fn tsg_is_a_permutation_of_sixteen_states() {
        let tsg = make_standard_gate(GateKind::Tsg);
        assert_eq!(tsg.table().len(), 16);
        assert!(is_bijective_table(&widened(&tsg), 4).unwrap());
    }

    #[test]
    fn tsg_with_third_port_zero_is_a_full_adder() {
        let tsg = GateKind::Tsg.gate();
        for code in 0..8 {
            let (a, b, cin) = (code >> 2 & 1 == 1, code >> 1 & 1 == 1, code & 1 == 1);
            let out = tsg.eval(&[a, b, false, cin]).unwrap();
            let total = a as u8 + b as u8 + cin as u8;
            assert_eq!(out[2], total & 1 == 1, "sum for {a} {b} {cin}");
            assert_eq!(out[3], total >= 2, "carry for {a} {b} {cin}");
        }
    }

    #[test]
    fn worked_examples() {
        let cases = [
            (GateKind::Tsg, "0000", "0000"),
            (GateKind::Tsg, "1101", "1011"),
            (GateKind::Tsg, "0110", "0001"),
            (GateKind::Fredkin, "101", "110"),
            (GateKind::Feynman, "11", "10"),
            (GateKind::Toffoli, "110", "111"),
            (GateKind::Not, "0", "1"),
        ];
        for (kind, input, output) in cases {
            assert_eq!(
                eval_gate(kind.gate(), &bits(input)).unwrap(),
                bits(output),
                "{kind} on {input}"
            );
        }
    }

    #[test]
    fn every_standard_gate_is_bijective() {
        for kind in GateKind::ALL {
            let g = make_standard_gate(kind);
            assert!(
                is_bijective_table(&widened(&g), kind.arity()).unwrap(),
                "{kind}"
            );
        }
    }

    #[test]
    fn eval_rejects_wrong_width() {
        let err = GateKind::Tsg.gate().eval(&[true, false, true]).unwrap_err();
        assert_eq!(
            err,
            Error::ArityMismatch {
                kind: GateKind::Tsg,
                expected: 4,
                got: 3
            }
        );
    }

    #[test]
    fn bijectivity_checker() {
        assert!(is_bijective_table(&(0..8).collect::<Vec<_>>(), 3).unwrap());
        assert!(!is_bijective_table(&[0, 0, 1, 1], 2).unwrap());
        assert!(!is_bijective_table(&[0, 1, 2, 4], 2).unwrap());
        assert!(matches!(
            is_bijective_table(&[0, 1, 2], 2),
            Err(Error::TableLength { .. })
        ));
    }

    #[test]
    fn self_inverse_gates() {
        for kind in [
            GateKind::Feynman,
            GateKind::Fredkin,
            GateKind::Toffoli,
            GateKind::Not,
        ] {
            let g = kind.gate();
            assert_eq!(gate_inverse(g).table(), g.table(), "{kind}");
        }
    }

    #[test]
    fn tsg_inverse_undoes_tsg() {
        let tsg = GateKind::Tsg.gate();
        let inv = gate_inverse(tsg);
        assert!(inv.is_inverted());
        for code in 0..16 {
            let x = decode(code, 4);
            assert_eq!(inv.eval(&tsg.eval(&x).unwrap()).unwrap(), x);
        }
        assert_eq!(gate_inverse(&inv), *tsg);
    }

    #[test]
    fn one_through_and_universality_witnesses() {
        let tsg = GateKind::Tsg.gate();
        for code in 0..16 {
            let x = decode(code, 4);
            assert_eq!(tsg.eval(&x).unwrap()[0], x[0]);
        }
        for (a, b) in [(false, false), (false, true), (true, false), (true, true)] {
            assert_eq!(tsg.eval(&[a, b, false, false]).unwrap()[3], a & b);
            let fredkin = GateKind::Fredkin.gate().eval(&[a, b, false]).unwrap();
            assert_eq!(fredkin[2], a & b);
        }
        for c in [false, true] {
            assert_eq!(tsg.eval(&[false, true, c, false]).unwrap()[1], !c);
        }
    }

    #[test]
    fn keywords_round_trip() {
        for kind in GateKind::ALL {
            assert_eq!(kind.keyword().parse::<GateKind>().unwrap(), kind);
        }
        assert!("nand".parse::<GateKind>().is_err());
    }
}
