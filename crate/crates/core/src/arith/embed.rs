//! Exhaustive search for the ways a single TSG realises a full adder.

use std::fmt;

use crate::analysis::{verify_function, FunctionKind, FunctionSpec, VerifyMode};
use crate::gate::{decode, GateKind};
use crate::netlist::{Circuit, LineRole};

/// What drives one TSG input port.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Operand {
    A,
    B,
    Cin,
    Const,
}

impl Operand {
    fn swap_ab(self) -> Self {
        match self {
            Operand::A => Operand::B,
            Operand::B => Operand::A,
            other => other,
        }
    }
}

/// A placement of `A`, `B`, `Cin` and one constant on TSG's input ports,
/// plus the output ports carrying sum and carry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FaEmbedding {
    pub ports: [Operand; 4],
    pub constant: bool,
    pub sum_port: usize,
    pub carry_port: usize,
}

const PORT_NAMES: [char; 4] = ['A', 'B', 'C', 'D'];
const OUT_NAMES: [char; 4] = ['P', 'Q', 'R', 'S'];

impl FaEmbedding {
    /// Inputs `(A, B, 0, Cin)`, sum on R, carry on S.
    pub const CANONICAL: FaEmbedding = FaEmbedding {
        ports: [Operand::A, Operand::B, Operand::Const, Operand::Cin],
        constant: false,
        sum_port: 2,
        carry_port: 3,
    };

    pub fn constant_port(&self) -> usize {
        self.ports
            .iter()
            .position(|&p| p == Operand::Const)
            .expect("exactly one constant port")
    }

    pub fn swap_operands(&self) -> Self {
        FaEmbedding {
            ports: self.ports.map(Operand::swap_ab),
            ..*self
        }
    }

    /// Single-gate circuit wired per this embedding, with `Sum`/`Cout`
    /// labeled for verification against the full-adder spec.
    pub fn to_circuit(&self) -> Circuit {
        let roles = self
            .ports
            .iter()
            .map(|p| match p {
                Operand::A => LineRole::input("A"),
                Operand::B => LineRole::input("B"),
                Operand::Cin => LineRole::input("Cin"),
                Operand::Const => LineRole::constant(self.constant),
            })
            .collect();
        let mut c = Circuit::new(roles).expect("four distinct lines");
        c.append_gate(GateKind::Tsg, &[0, 1, 2, 3])
            .expect("four lines");
        c.set_output(self.sum_port, "Sum", Some(0))
            .expect("distinct ports");
        c.set_output(self.carry_port, "Cout", Some(1))
            .expect("distinct ports");
        c
    }
}

impl fmt::Display for FaEmbedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ports: Vec<String> = self
            .ports
            .iter()
            .map(|p| match p {
                Operand::Const => (self.constant as u8).to_string(),
                other => format!("{other:?}"),
            })
            .collect();
        write!(
            f,
            "({}) const on {}, Sum={}, Cout={}",
            ports.join(","),
            PORT_NAMES[self.constant_port()],
            OUT_NAMES[self.sum_port],
            OUT_NAMES[self.carry_port]
        )
    }
}

/// Every port placement, constant value and output choice under which one
/// TSG computes `(a ⊕ b ⊕ cin, maj(a, b, cin))`, in sorted order.
pub fn find_fa_embeddings() -> Vec<FaEmbedding> {
    let tsg = GateKind::Tsg.gate();
    let operands = [Operand::A, Operand::B, Operand::Cin, Operand::Const];
    let mut found = Vec::new();
    for code in 0..256usize {
        let ports: [Operand; 4] = std::array::from_fn(|k| operands[code >> (2 * k) & 3]);
        if (0..4).any(|k| ports[k + 1..].contains(&ports[k])) {
            continue;
        }
        for constant in [false, true] {
            // outputs[v] = TSG output bits for operand vector v = (a, b, cin)
            let outputs: Vec<Vec<bool>> = (0..8)
                .map(|v| {
                    let bits = decode(v, 3);
                    let input: Vec<bool> = ports
                        .iter()
                        .map(|p| match p {
                            Operand::A => bits[0],
                            Operand::B => bits[1],
                            Operand::Cin => bits[2],
                            Operand::Const => constant,
                        })
                        .collect();
                    tsg.eval(&input).expect("arity 4")
                })
                .collect();
            for sum_port in 0..4 {
                for carry_port in (0..4).filter(|&p| p != sum_port) {
                    let ok = outputs.iter().enumerate().all(|(v, out)| {
                        let ones = (v as u32).count_ones();
                        out[sum_port] == (ones & 1 == 1) && out[carry_port] == (ones >= 2)
                    });
                    if ok {
                        found.push(FaEmbedding {
                            ports,
                            constant,
                            sum_port,
                            carry_port,
                        });
                    }
                }
            }
        }
    }
    found.sort();
    found
}

/// Re-checks an embedding through the circuit simulator.
pub fn verify_embedding(embedding: &FaEmbedding) -> bool {
    let spec = FunctionSpec::new(FunctionKind::FullAdder).expect("fixed width");
    verify_function(&embedding.to_circuit(), &spec, VerifyMode::Exhaustive)
        .map(|v| v.passed())
        .unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn canonical_embedding_is_found() {
        let found = find_fa_embeddings();
        assert!(found.contains(&FaEmbedding::CANONICAL), "{found:?}");
        assert_eq!(FaEmbedding::CANONICAL.constant_port(), 2);
        assert_eq!(
            FaEmbedding::CANONICAL.to_string(),
            "(A,B,0,Cin) const on C, Sum=R, Cout=S"
        );
    }

    #[test]
    fn symmetric_in_operands() {
        let found: BTreeSet<_> = find_fa_embeddings().into_iter().collect();
        let swapped: BTreeSet<_> = found.iter().map(FaEmbedding::swap_operands).collect();
        assert_eq!(found, swapped);
    }

    #[test]
    fn every_embedding_reverifies() {
        let found = find_fa_embeddings();
        assert!(!found.is_empty());
        assert!(found.iter().all(verify_embedding));
    }
}
