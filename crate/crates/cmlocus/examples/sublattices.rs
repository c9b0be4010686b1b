//! Stable sublattices of the height-two module and the character on L/VL.
use cmlocus::lattice::{enumerate_stable_sublattices, lie_action_parity, sublattice_exponents};

fn main() -> cmlocus::Result<()> {
    for p in [3, 5] {
        for k in 0..=4 {
            let found = enumerate_stable_sublattices(p, k)?;
            for l in &found {
                let (i, j) = sublattice_exponents(l);
                println!("p={p} k={k}: {} lattice(s), p^{i} e0 + p^{j} f0, Lie character {}", found.len(), lie_action_parity(p, l)?);
            }
        }
    }
    Ok(())
}
