//! Stable superlattices of the height-four module and their descents.
use cmlocus::lattice::{descend_superlattice, enumerate_stable_superlattices_with, Search};
use std::time::Instant;

fn main() -> cmlocus::Result<()> {
    for p in [3, 5] {
        for (s, m, search) in [(1, 1, Search::Exhaustive), (2, 1, Search::Exhaustive), (1, 1, Search::Diagonal), (2, 2, Search::Diagonal)] {
            let t = Instant::now();
            let rep = enumerate_stable_superlattices_with(p, s, m, search)?;
            let shapes: Vec<String> = rep.found.iter().map(|x| format!("({},{},{})", x.a, x.b, x.delta)).collect();
            println!("p={p} s={s} m={m} {search:?}: {} matches={} {:.2?}", shapes.join(" "), rep.matches(), t.elapsed());
        }
    }
    for total in 0..=3u32 {
        for delta in 0..=1.min(total) {
            for a in 0..=total - delta {
                let d = descend_superlattice(3, a, total - delta - a, delta)?;
                println!("descent ({a},{},{delta}) scale {}: e0* {:?} f0* {:?}", total - delta - a, d.scale, d.e0, d.f0);
            }
        }
    }
    Ok(())
}
