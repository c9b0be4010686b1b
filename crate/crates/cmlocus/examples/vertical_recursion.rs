//! The one-variable recursion for the endomorphism over the vertical locus:
//! fixed-point iteration against the closed form in f and g.
use cmlocus::padic::Zp2;
use cmlocus::report::poly_string;
use cmlocus::series::Window;
use cmlocus::window::{closed_form_vertical, integrality_predicate, solve_vertical_recursion, verify_closed_form, CaseDescriptor, CaseKind};

fn main() -> cmlocus::Result<()> {
    for kind in [CaseKind::Unramified, CaseKind::Ramified] {
        for p in [3u64, 5] {
            let r = Zp2::new(p, 4)?;
            let abcd = CaseDescriptor::default_for(kind).abcd(&r).map(|x| x.signed());
            let check = verify_closed_form(p, 8, p.pow(4) as i64, abcd)?;
            let sol = solve_vertical_recursion(p, 4, 40, abcd, 40)?;
            let rr = sol.pair.ring();
            let cf = closed_form_vertical(rr, Window::x1_only(40), abcd.map(|v| cmlocus::window::lift(&rr, v)));
            println!(
                "{kind} p={p}: closed form {check:?}; iteration stabilised after {} steps at {} digits, agrees: {}",
                sol.depth,
                sol.work_precision,
                sol.pair == cf
            );
            println!("  pY[0][1] = {}", poly_string(&cf.y[0][1].rewindow(Window::x1_only(8))));
        }
    }
    let r = Zp2::new(3, 4)?;
    for (a, c, d) in [(1, 0, 1), (1, 3, 4), (1, 1, 1), (2, 0, 1)] {
        println!("integral lift for a={a} c={c} d={d}: {}", integrality_predicate(r.int(a), r.int(0), r.int(c), r.int(d)));
    }
    Ok(())
}
