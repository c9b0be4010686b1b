//! Ideal-membership facts about (alpha_k, beta_k) decided by length comparison.
use cmlocus::length::annihilator_check;
use cmlocus::window::{CaseDescriptor, CaseKind};

fn main() -> cmlocus::Result<()> {
    for kind in [CaseKind::Unramified, CaseKind::Ramified] {
        for (p, k) in [(3, 1), (3, 2), (5, 1)] {
            let rep = annihilator_check(&CaseDescriptor::default_for(kind), p, k, 200)?;
            println!("{kind} p={p} k={k}: {} {rep:?}", if rep.passed() { "PASS" } else { "FAIL" });
        }
    }
    Ok(())
}
