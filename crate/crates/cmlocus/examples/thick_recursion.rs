//! The two-variable recursion: structure of the steps and alpha_k, beta_k.
use cmlocus::report::poly_string_below;
use cmlocus::window::{alpha_beta, solve_thickened_recursion, structure_check, thick::Truncation, CaseDescriptor, CaseKind};

fn main() -> cmlocus::Result<()> {
    for kind in [CaseKind::Unramified, CaseKind::Ramified] {
        for (p, k) in [(3, 1), (3, 2), (3, 3), (5, 2)] {
            let sol = solve_thickened_recursion(&CaseDescriptor::default_for(kind), p, k, Truncation::with_x1(200))?;
            let rep = structure_check(&sol);
            let degs: Vec<_> = rep.leading.iter().map(|l| (l.x2_exponent, l.unit_x1_degree)).collect();
            println!("{kind} p={p} k={k}: structure {} leading (x2, x1) {degs:?}", if rep.passed() { "ok" } else { "FAILED" });
            println!("  compatible levels {:?}", sol.reduction_compatibility());
            if k == 1 {
                let (a, b) = alpha_beta(&sol, 2 * k + 1)?;
                println!("  alpha = {} + ...", poly_string_below(&a, 6));
                println!("  beta  = {} + ...", poly_string_below(&b, 6));
            }
        }
    }
    Ok(())
}
