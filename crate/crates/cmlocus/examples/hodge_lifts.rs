//! Lifts of the Hodge filtration over the dual numbers, counted under each
//! combination of stability constraints.
use cmlocus::lattice::hodge_lift_table;

fn main() -> cmlocus::Result<()> {
    for p in [3, 5] {
        let (rows, errata) = hodge_lift_table(p)?;
        for (c, n) in rows {
            println!("p={p} order action {:<5} uniformizer {:<5} lifts {n}", c.order_action, c.uniformizer);
        }
        for e in errata {
            println!("  erratum [{}]: {}", e.topic, e.detail);
        }
    }
    Ok(())
}
