//! Endomorphism-order levels, their thresholds, and the degree bookkeeping
//! against the special-fiber length.
use cmlocus::combinatorics::{auxiliary_formulas, endo_order_level, keating_threshold, unit_index};
use cmlocus::window::CaseKind;

fn main() {
    for kind in [CaseKind::Unramified, CaseKind::Ramified] {
        for p in [3u64, 5] {
            let th: Vec<i128> = (0..=4).map(|k| keating_threshold(kind, p, k)).collect();
            println!("{kind} p={p} thresholds {th:?}");
            let s = 3;
            let steps: Vec<String> = (0..=3)
                .map(|j| {
                    let t = th[j] as u64;
                    format!("k={t}:{} k={}:{}", endo_order_level(kind, p, s, t), t + 1, endo_order_level(kind, p, s, t + 1))
                })
                .collect();
            println!("  level at s={s} across each threshold: {}", steps.join("  "));
            let idx: Vec<i128> = (0..=s).map(|t| unit_index(kind, p, t, s)).collect();
            println!("  unit indices at s={s}: {idx:?}");
            for c0 in 0..=4 {
                let a = auxiliary_formulas(kind, p, c0);
                println!("  c0={c0}: degrees {:?} sum {} fiber length {}", a.degrees, a.degree_sum, a.fiber_length);
            }
        }
    }
}
