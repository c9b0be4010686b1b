//! Vertical-component multiplicities from the chain-ring length of
//! A/(alpha_k, beta_k), next to the closed form.

use cmlocus::length::{quotient_length, LengthOptions};
use cmlocus::window::{CaseDescriptor, CaseKind};
use std::time::Instant;

fn closed_form(p: u64, c: u32) -> u64 {
    (0..c).map(|j| 2 * p.pow(j) * (c - j) as u64).sum()
}

fn main() -> cmlocus::Result<()> {
    let mut cells = vec![];
    for kind in [CaseKind::Unramified, CaseKind::Ramified] {
        for p in [3, 5] {
            for c in [1, 2] {
                cells.push((kind, p, c));
            }
        }
    }
    cells.push((CaseKind::Unramified, 3, 3));
    for (kind, p, c) in cells {
        let t = Instant::now();
        let rep = quotient_length(&CaseDescriptor::default_for(kind), p, c, LengthOptions::default())?;
        println!(
            "{kind} p={p} c0={c}: length {} (closed form {}), window {}, doubled {:?}, {:.1?}",
            rep.length,
            closed_form(p, c),
            rep.x1_window,
            rep.doubled_length,
            t.elapsed()
        );
    }
    Ok(())
}
