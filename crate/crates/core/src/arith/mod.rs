//! Generators for TSG-based arithmetic circuits.
//!
//! Every cell is a thin wrapper over one or two TSG gates with the third
//! port tied to a fresh constant-0 line: `TSG(a, b, 0, c)` leaves
//! `a ⊕ b ⊕ c` on the constant line and the majority carry on `c`'s line.

mod embed;
mod wallace;

pub use embed::{find_fa_embeddings, verify_embedding, FaEmbedding, Operand};
pub use wallace::{
    gen_wallace_multiplier, wallace_multiplier, Row, StageBoundary, WallaceMultiplier,
};

use crate::error::{Error, Result};
use crate::gate::GateKind;
use crate::netlist::{Circuit, LineRole};

pub(crate) fn require_width(what: &'static str, n: usize, min: usize) -> Result<()> {
    if n < min {
        return Err(Error::Width { what, min, got: n });
    }
    Ok(())
}

/// One TSG as a full adder; returns `(sum, carry)` lines.
pub(crate) fn full_adder_cell(c: &mut Circuit, a: usize, b: usize, cin: usize) -> (usize, usize) {
    let zero = c.add_constant(false);
    c.append_gate(GateKind::Tsg, &[a, b, zero, cin])
        .expect("fresh lines are distinct and in range");
    (zero, cin)
}

/// One TSG with two constant ports; returns `(sum, carry)` lines.
pub(crate) fn half_adder_cell(c: &mut Circuit, a: usize, b: usize) -> (usize, usize) {
    let sum = c.add_constant(false);
    let carry = c.add_constant(false);
    c.append_gate(GateKind::Tsg, &[a, b, sum, carry])
        .expect("fresh lines are distinct and in range");
    (sum, carry)
}

/// Two chained full-adder TSGs; returns `(sum, carry, cout)`. `cout` does
/// not depend on `cin`, so a row of cells can chain `cout` into the next
/// column's `cin` without a ripple.
pub(crate) fn compressor_cell(c: &mut Circuit, x: [usize; 4], cin: usize) -> (usize, usize, usize) {
    let (partial, cout) = full_adder_cell(c, x[0], x[1], x[2]);
    let (sum, carry) = full_adder_cell(c, partial, x[3], cin);
    (sum, carry, cout)
}

pub fn gen_full_adder() -> Circuit {
    let mut c = Circuit::new(vec![
        LineRole::input("A"),
        LineRole::input("B"),
        LineRole::constant(false),
        LineRole::input("Cin"),
    ])
    .expect("static layout");
    c.append_gate(GateKind::Tsg, &[0, 1, 2, 3])
        .expect("static layout");
    c.set_output(2, "Sum", Some(0)).expect("static layout");
    c.set_output(3, "Cout", Some(1)).expect("static layout");
    c
}

pub fn gen_half_adder() -> Circuit {
    let mut c = Circuit::new(vec![
        LineRole::input("A"),
        LineRole::input("B"),
        LineRole::constant(false),
        LineRole::constant(false),
    ])
    .expect("static layout");
    c.append_gate(GateKind::Tsg, &[0, 1, 2, 3])
        .expect("static layout");
    c.set_output(2, "Sum", Some(0)).expect("static layout");
    c.set_output(3, "Carry", Some(1)).expect("static layout");
    c
}

/// Lines `[x1, x2, 0, x3, x4, 0, cin]`. Sum sits at weight 0, Carry and
/// Cout at weight 1.
pub fn gen_compressor_4_2() -> Circuit {
    let mut c = Circuit::new(vec![
        LineRole::input("x1"),
        LineRole::input("x2"),
        LineRole::constant(false),
        LineRole::input("x3"),
        LineRole::input("x4"),
        LineRole::constant(false),
        LineRole::input("cin"),
    ])
    .expect("static layout");
    c.append_gate(GateKind::Tsg, &[0, 1, 2, 3])
        .expect("static layout");
    c.append_gate(GateKind::Tsg, &[2, 4, 5, 6])
        .expect("static layout");
    c.set_output(5, "Sum", Some(0)).expect("static layout");
    c.set_output(6, "Carry", Some(1)).expect("static layout");
    c.set_output(3, "Cout", Some(1)).expect("static layout");
    c
}

/// `n` chained TSG full adders. Stage `i` occupies lines `a_i, b_i, 0`
/// and rewrites the incoming carry line in place.
pub fn gen_ripple_adder(n: usize) -> Result<Circuit> {
    require_width("ripple adder width", n, 1)?;
    let mut c = Circuit::new(vec![
        LineRole::input("a0"),
        LineRole::input("b0"),
        LineRole::constant(false),
        LineRole::input("cin"),
    ])?;
    let mut carry = 3;
    let mut sums = vec![2];
    c.append_gate(GateKind::Tsg, &[0, 1, 2, carry])?;
    for i in 1..n {
        let a = c.add_line(LineRole::input(format!("a{i}")))?;
        let b = c.add_line(LineRole::input(format!("b{i}")))?;
        let (sum, next) = full_adder_cell(&mut c, a, b, carry);
        sums.push(sum);
        carry = next;
    }
    for (i, &line) in sums.iter().enumerate() {
        c.set_output(line, &format!("s{i}"), Some(i as u32))?;
    }
    c.set_output(carry, "cout", Some(n as u32))?;
    Ok(c)
}

/// Line indices of every partial product `a_i · b_j` (weight `i + j`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialProductGrid {
    n: usize,
    lines: Vec<usize>,
}

impl PartialProductGrid {
    pub fn width(&self) -> usize {
        self.n
    }

    pub fn line(&self, i: usize, j: usize) -> usize {
        self.lines[i * self.n + j]
    }

    pub fn weight(&self, i: usize, j: usize) -> u32 {
        (i + j) as u32
    }

    /// `(i, j, line)` in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.lines
            .iter()
            .enumerate()
            .map(move |(k, &l)| (k / self.n, k % self.n, l))
    }
}

/// Appends `n - 1` Feynman copies of each `b_j` (doubling from existing
/// copies) followed by `n²` Fredkin ANDs. Fredkin keeps its control, so
/// `a_i` threads through its whole row.
pub(crate) fn append_partial_products(
    c: &mut Circuit,
    a: &[usize],
    b: &[usize],
) -> PartialProductGrid {
    let n = a.len();
    debug_assert_eq!(n, b.len());
    let copies: Vec<Vec<usize>> = b
        .iter()
        .map(|&bj| {
            let mut lines = vec![bj];
            while lines.len() < n {
                let have = lines.len();
                for k in 0..have.min(n - have) {
                    let dst = c.add_constant(false);
                    c.append_gate(GateKind::Feynman, &[lines[k], dst])
                        .expect("fresh line");
                    lines.push(dst);
                }
            }
            lines
        })
        .collect();
    let mut lines = Vec::with_capacity(n * n);
    for (i, &ai) in a.iter().enumerate() {
        for copies_j in &copies {
            let product = c.add_constant(false);
            c.append_gate(GateKind::Fredkin, &[ai, copies_j[i], product])
                .expect("fresh line");
            lines.push(product);
        }
    }
    PartialProductGrid { n, lines }
}

/// Operand lines `a0..a(n-1), b0..b(n-1)` followed by the AND array.
/// Nothing is labeled; see [`gen_and_array`] for a labeled version.
pub fn gen_partial_products(n: usize) -> Result<(Circuit, PartialProductGrid)> {
    require_width("partial product width", n, 1)?;
    let roles = (0..n)
        .map(|i| LineRole::input(format!("a{i}")))
        .chain((0..n).map(|j| LineRole::input(format!("b{j}"))))
        .collect();
    let mut c = Circuit::new(roles)?;
    let a: Vec<usize> = (0..n).collect();
    let b: Vec<usize> = (n..2 * n).collect();
    let grid = append_partial_products(&mut c, &a, &b);
    Ok((c, grid))
}

/// [`gen_partial_products`] with each product labeled `pp{i}_{j}`.
pub fn gen_and_array(n: usize) -> Result<Circuit> {
    let (mut c, grid) = gen_partial_products(n)?;
    for (i, j, line) in grid.iter() {
        c.set_output(line, &format!("pp{i}_{j}"), Some(grid.weight(i, j)))?;
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{metrics, verify_function, FunctionKind, FunctionSpec, VerifyMode};

    fn named(c: &Circuit, inputs: &[(&str, bool)]) -> Vec<(String, bool)> {
        let out = c.simulate(inputs.iter().copied()).unwrap();
        c.named_outputs(&out)
            .into_iter()
            .map(|(n, v)| (n.to_string(), v))
            .collect()
    }

    fn exhaustive(c: &Circuit, kind: FunctionKind) -> bool {
        let spec = FunctionSpec::new(kind).unwrap();
        verify_function(c, &spec, VerifyMode::Exhaustive)
            .unwrap()
            .passed()
    }

    #[test]
    fn full_adder() {
        let c = gen_full_adder();
        let m = metrics(&c);
        assert_eq!((m.total_gates, m.garbage_outputs, m.unit_delay), (1, 2, 1));
        let got = named(&c, &[("A", true), ("B", true), ("Cin", false)]);
        assert_eq!(got, vec![("Sum".into(), false), ("Cout".into(), true)]);
        let got = named(&c, &[("A", false), ("B", false), ("Cin", false)]);
        assert_eq!(got, vec![("Sum".into(), false), ("Cout".into(), false)]);
        assert!(exhaustive(&c, FunctionKind::FullAdder));
    }

    #[test]
    fn half_adder() {
        let c = gen_half_adder();
        assert_eq!(
            named(&c, &[("A", true), ("B", true)]),
            vec![("Sum".into(), false), ("Carry".into(), true)]
        );
        assert_eq!(
            named(&c, &[("A", true), ("B", false)]),
            vec![("Sum".into(), true), ("Carry".into(), false)]
        );
        let m = metrics(&c);
        assert_eq!(
            (m.total_gates, m.garbage_outputs, m.constant_inputs),
            (1, 2, 2)
        );
        assert!(exhaustive(&c, FunctionKind::HalfAdder));
    }

    #[test]
    fn compressor() {
        let c = gen_compressor_4_2();
        let m = metrics(&c);
        assert_eq!((m.total_gates, m.garbage_outputs, m.unit_delay), (2, 4, 2));
        let all_ones: Vec<(&str, bool)> = ["x1", "x2", "x3", "x4", "cin"]
            .iter()
            .map(|&n| (n, true))
            .collect();
        let mut got = named(&c, &all_ones);
        got.sort();
        assert_eq!(
            got,
            vec![
                ("Carry".into(), true),
                ("Cout".into(), true),
                ("Sum".into(), true)
            ]
        );
        let zeros: Vec<(&str, bool)> = all_ones.iter().map(|&(n, _)| (n, false)).collect();
        assert!(named(&c, &zeros).iter().all(|(_, v)| !v));
        assert!(exhaustive(&c, FunctionKind::Compressor42));
    }

    #[test]
    fn compressor_cout_ignores_cin() {
        let c = gen_compressor_4_2();
        let cout = c.output_line("Cout").unwrap();
        for code in 0..16u32 {
            let xs: Vec<(&str, bool)> = ["x1", "x2", "x3", "x4"]
                .iter()
                .enumerate()
                .map(|(k, &n)| (n, code >> k & 1 == 1))
                .collect();
            let with = |cin| {
                let mut v = xs.clone();
                v.push(("cin", cin));
                c.simulate(v).unwrap().get(cout)
            };
            assert_eq!(with(false), with(true));
        }
    }

    #[test]
    fn ripple_adder() {
        for n in 1..=5 {
            let c = gen_ripple_adder(n).unwrap();
            let m = metrics(&c);
            assert_eq!(
                (m.total_gates, m.garbage_outputs, m.unit_delay),
                (n, 2 * n, n)
            );
            assert!(exhaustive(&c, FunctionKind::RippleAdder(n)), "n={n}");
        }
        assert!(matches!(gen_ripple_adder(0), Err(Error::Width { .. })));
    }

    fn add4(a: u32, b: u32) -> (u32, bool) {
        let c = gen_ripple_adder(4).unwrap();
        let names: Vec<String> = (0..4)
            .flat_map(|i| [format!("a{i}"), format!("b{i}")])
            .collect();
        let mut inputs: Vec<(&str, bool)> = names
            .iter()
            .map(|n| {
                let (op, i) = (
                    if n.starts_with('a') { a } else { b },
                    n[1..].parse::<u32>().unwrap(),
                );
                (n.as_str(), op >> i & 1 == 1)
            })
            .collect();
        inputs.push(("cin", false));
        let out = c.simulate(inputs).unwrap();
        let sum = (0..4)
            .map(|i| (out.get(c.output_line(&format!("s{i}")).unwrap()) as u32) << i)
            .sum();
        (sum, out.get(c.output_line("cout").unwrap()))
    }

    #[test]
    fn ripple_adder_examples() {
        assert_eq!(add4(9, 6), (15, false));
        assert_eq!(add4(15, 1), (0, true));
    }

    #[test]
    fn partial_products() {
        let (c, grid) = gen_partial_products(8).unwrap();
        let m = metrics(&c);
        assert_eq!(m.gates_of(GateKind::Fredkin), 64);
        assert_eq!(m.gates_of(GateKind::Feynman), 56);
        assert_eq!(m.total_gates, 120);
        assert!(c.idle_constants().is_empty());

        let mut inputs: Vec<(String, bool)> = (0..8).map(|i| (format!("a{i}"), true)).collect();
        inputs.extend((0..8).map(|j| (format!("b{j}"), j == 0)));
        let out = c
            .simulate(inputs.iter().map(|(n, v)| (n.as_str(), *v)))
            .unwrap();
        for (_, j, line) in grid.iter() {
            assert_eq!(out.get(line), j == 0);
        }
        assert!(matches!(gen_partial_products(0), Err(Error::Width { .. })));
    }

    #[test]
    fn and_array_matches_bitwise_and() {
        for n in 1..=4 {
            assert!(
                exhaustive(&gen_and_array(n).unwrap(), FunctionKind::AndArray(n)),
                "n={n}"
            );
        }
    }
}
