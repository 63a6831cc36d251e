//! Wallace tree multiplier: Fredkin partial products, 4-rows-at-a-time
//! reduction with 4:2 compressors, full and half adders, then a TSG ripple
//! adder over the last two rows.

use std::collections::BTreeMap;

use super::{
    append_partial_products, compressor_cell, full_adder_cell, half_adder_cell, require_width,
    PartialProductGrid,
};
use crate::error::{Error, Result};
use crate::netlist::{Circuit, LineRole};

/// One row of the dot diagram: weight → line carrying that bit.
pub type Row = BTreeMap<u32, usize>;

/// Snapshot of the live bits between two phases of the multiplier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageBoundary {
    /// Number of cascade gates executed before this snapshot is valid.
    pub gate_index: usize,
    pub rows: Vec<Row>,
}

impl StageBoundary {
    /// `(weight, line)` of every live bit.
    pub fn bits(&self) -> impl Iterator<Item = (u32, usize)> + '_ {
        self.rows
            .iter()
            .flat_map(|r| r.iter().map(|(&w, &l)| (w, l)))
    }

    /// Σ bit·2^weight over the live bits of a simulated state.
    pub fn weighted_sum(&self, state: &[bool]) -> u128 {
        self.bits().map(|(w, l)| (state[l] as u128) << w).sum()
    }
}

#[derive(Clone, Debug)]
pub struct WallaceMultiplier {
    pub circuit: Circuit,
    pub grid: PartialProductGrid,
    /// Boundary 0 follows partial-product generation; boundary `k` follows
    /// reduction stage `k`.
    pub stages: Vec<StageBoundary>,
}

impl WallaceMultiplier {
    pub fn reduction_stages(&self) -> usize {
        self.stages.len() - 1
    }

    /// Row count at each boundary, e.g. `[8, 4, 2]` for 8×8.
    pub fn row_schedule(&self) -> Vec<usize> {
        self.stages.iter().map(|s| s.rows.len()).collect()
    }
}

pub fn gen_wallace_multiplier(n: usize) -> Result<Circuit> {
    Ok(wallace_multiplier(n)?.circuit)
}

/// Builds an `n`×`n` multiplier with inputs `a0.., b0..` (LSB first) and
/// outputs `P0..P(2n-1)`.
pub fn wallace_multiplier(n: usize) -> Result<WallaceMultiplier> {
    require_width("multiplier width", n, 2)?;
    if n > 64 {
        return Err(Error::TooWide {
            what: "multiplier width",
            max: 64,
            got: n,
        });
    }
    let roles = (0..n)
        .map(|i| LineRole::input(format!("a{i}")))
        .chain((0..n).map(|j| LineRole::input(format!("b{j}"))))
        .collect();
    let mut c = Circuit::new(roles)?;
    let a: Vec<usize> = (0..n).collect();
    let b: Vec<usize> = (n..2 * n).collect();
    let grid = append_partial_products(&mut c, &a, &b);

    let mut rows: Vec<Row> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (grid.weight(i, j), grid.line(i, j)))
                .collect()
        })
        .collect();
    let mut stages = vec![StageBoundary {
        gate_index: c.gate_count(),
        rows: rows.clone(),
    }];
    while rows.len() > 2 {
        rows = reduce_stage(&mut c, &rows);
        stages.push(StageBoundary {
            gate_index: c.gate_count(),
            rows: rows.clone(),
        });
    }

    let product = final_adder(&mut c, &rows, 2 * n as u32);
    for (w, line) in product.into_iter().enumerate() {
        c.set_output(line, &format!("P{w}"), Some(w as u32))?;
    }
    Ok(WallaceMultiplier {
        circuit: c,
        grid,
        stages,
    })
}

fn reduce_stage(c: &mut Circuit, rows: &[Row]) -> Vec<Row> {
    let mut next = Vec::with_capacity(rows.len() / 2 + 1);
    for group in rows.chunks(4) {
        if group.len() <= 2 {
            next.extend(group.iter().cloned());
        } else {
            next.extend(reduce_group(c, group).into_iter().filter(|r| !r.is_empty()));
        }
    }
    next
}

/// Compresses three or four rows into a sum row and a carry row. Column
/// bits are taken oldest row first. A column with four or more bits (the
/// chained `cout` from the column below included) gets a 4:2 compressor,
/// padded with constant 0 where short.
fn reduce_group(c: &mut Circuit, group: &[Row]) -> [Row; 2] {
    let lo = group
        .iter()
        .filter_map(|r| r.keys().next())
        .min()
        .copied()
        .unwrap_or(0);
    let hi = group
        .iter()
        .filter_map(|r| r.keys().next_back())
        .max()
        .copied()
        .unwrap_or(0);
    let mut sum_row = Row::new();
    let mut carry_row = Row::new();
    let mut chain: Option<usize> = None;
    let mut w = lo;
    while w <= hi || chain.is_some() {
        let mut bits: Vec<usize> = group.iter().filter_map(|r| r.get(&w).copied()).collect();
        let incoming = chain.take();
        if bits.len() + incoming.is_some() as usize >= 4 {
            while bits.len() < 4 {
                bits.push(c.add_constant(false));
            }
            let cin = incoming.unwrap_or_else(|| c.add_constant(false));
            let (sum, carry, cout) = compressor_cell(c, [bits[0], bits[1], bits[2], bits[3]], cin);
            sum_row.insert(w, sum);
            carry_row.insert(w + 1, carry);
            chain = Some(cout);
        } else {
            bits.extend(incoming);
            match *bits.as_slice() {
                [] => {}
                [x] => {
                    sum_row.insert(w, x);
                }
                [x, y] => {
                    let (sum, carry) = half_adder_cell(c, x, y);
                    sum_row.insert(w, sum);
                    carry_row.insert(w + 1, carry);
                }
                [x, y, z] => {
                    let (sum, carry) = full_adder_cell(c, x, y, z);
                    sum_row.insert(w, sum);
                    carry_row.insert(w + 1, carry);
                }
                _ => unreachable!("at most three bits outside a compressor"),
            }
        }
        w += 1;
    }
    [sum_row, carry_row]
}

/// Ripple addition of the last rows; returns the line of each product bit
/// `0..width`. A carry out of the top column is always 0 and stays garbage.
fn final_adder(c: &mut Circuit, rows: &[Row], width: u32) -> Vec<usize> {
    let mut product = Vec::with_capacity(width as usize);
    let mut carry: Option<usize> = None;
    for w in 0..width {
        let mut bits: Vec<usize> = rows.iter().filter_map(|r| r.get(&w).copied()).collect();
        bits.extend(carry.take());
        let bit = match *bits.as_slice() {
            [] => c.add_constant(false),
            [x] => x,
            [x, y] => {
                let (sum, next) = half_adder_cell(c, x, y);
                carry = Some(next);
                sum
            }
            [x, y, z] => {
                let (sum, next) = full_adder_cell(c, x, y, z);
                carry = Some(next);
                sum
            }
            _ => unreachable!("two rows plus a carry"),
        };
        product.push(bit);
    }
    product
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::metrics;
    use crate::gate::GateKind;

    fn multiply(m: &WallaceMultiplier, n: usize, a: u64, b: u64) -> (u128, Vec<u128>) {
        let c = &m.circuit;
        let mut state = c.initial_state();
        for i in 0..n {
            state[i] = a >> i & 1 == 1;
            state[n + i] = b >> i & 1 == 1;
        }
        let mut sums = Vec::new();
        let mut done = 0;
        for stage in &m.stages {
            c.run_range(&mut state, done..stage.gate_index);
            done = stage.gate_index;
            sums.push(stage.weighted_sum(&state));
        }
        c.run_range(&mut state, done..c.gate_count());
        let product = (0..2 * n)
            .map(|w| (state[c.output_line(&format!("P{w}")).unwrap()] as u128) << w)
            .sum();
        (product, sums)
    }

    #[test]
    fn eight_bit_schedule_and_counts() {
        let m = wallace_multiplier(8).unwrap();
        assert_eq!(m.row_schedule(), vec![8, 4, 2]);
        assert_eq!(m.reduction_stages(), 2);
        let r = metrics(&m.circuit);
        assert_eq!(r.gates_of(GateKind::Fredkin), 64);
        assert_eq!(r.gates_of(GateKind::Feynman), 56);
        assert_eq!(r.garbage_outputs, r.lines - 16);
        assert!(m.circuit.idle_constants().is_empty());
    }

    #[test]
    fn small_products() {
        let m = wallace_multiplier(8).unwrap();
        for (a, b) in [(0, 173), (255, 255), (3, 5), (1, 1), (128, 2)] {
            let (p, sums) = multiply(&m, 8, a, b);
            assert_eq!(p, (a * b) as u128, "{a}*{b}");
            assert!(sums.iter().all(|&s| s == (a * b) as u128));
        }
    }

    #[test]
    fn every_width_up_to_five_is_exact() {
        for n in 2..=5 {
            let m = wallace_multiplier(n).unwrap();
            assert!(m.circuit.idle_constants().is_empty(), "n={n}");
            for a in 0..1u64 << n {
                for b in 0..1u64 << n {
                    let (p, sums) = multiply(&m, n, a, b);
                    assert_eq!(p, (a * b) as u128, "n={n} {a}*{b}");
                    assert!(sums.iter().all(|&s| s == (a * b) as u128));
                }
            }
        }
    }

    #[test]
    fn rejects_narrow_widths() {
        assert!(wallace_multiplier(1).is_err());
        assert!(gen_wallace_multiplier(0).is_err());
        assert!(wallace_multiplier(65).is_err());
    }
}
