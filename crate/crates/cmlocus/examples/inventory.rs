//! Component inventories and the total intersection number, with errata for
//! displayed closed forms that disagree.
use cmlocus::combinatorics::{check_inventory, component_inventory, theorem_d_total};
use cmlocus::window::CaseKind;

fn main() {
    for kind in [CaseKind::Unramified, CaseKind::Ramified] {
        for p in [3, 5, 7] {
            let totals: Vec<String> = (0..=4)
                .map(|c0| {
                    let inv = component_inventory(kind, p, c0);
                    let (checks, _) = check_inventory(&inv);
                    format!("{}{}", checks.total, if checks.passed() && checks.total == theorem_d_total(kind, p, c0) { "" } else { "!" })
                })
                .collect();
            println!("{kind} p={p} totals for c0 = 0..4: {}", totals.join(" "));
        }
    }
    let inv = component_inventory(CaseKind::Ramified, 3, 1);
    for r in &inv.records {
        println!("  {:<24} s={:?} t={:?} count={} mult={} I={} proper={}", r.kind.to_string(), r.level, r.orbit_level, r.count, r.multiplicity, r.intersection, r.proper);
    }
    for e in check_inventory(&inv).1 {
        println!("erratum [{}]: {}", e.topic, e.detail);
    }
}
