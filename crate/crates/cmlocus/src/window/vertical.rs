//! The one-variable lifting recursion and its closed-form solution.

use super::{frame_a, frame_b, raw_p, QuasiEndoPair};
use crate::error::{Error, Result};
use crate::padic::{WittScalar, Zp2};
use crate::series::{
    f_series_scaled, g_series_scaled, mat_add, mat_eq_mod_p, mat_frobenius, mat_map, mat_mul, mat_sub, mat_try_map,
    Mat2, TruncSeries, Var, Window,
};

fn consts(r: Zp2, win: Window, m: [[WittScalar; 2]; 2]) -> Mat2 {
    mat_from(r, win, m, |s| s.clone())
}

fn mat_from(r: Zp2, win: Window, m: [[WittScalar; 2]; 2], f: impl Fn(&TruncSeries) -> TruncSeries) -> Mat2 {
    let k = |s: WittScalar| f(&TruncSeries::constant(r, win, s.raw()));
    [[k(m[0][0]), k(m[0][1])], [k(m[1][0]), k(m[1][1])]]
}

fn times(s: &TruncSeries, m: [[WittScalar; 2]; 2]) -> Mat2 {
    [
        [s.scale(m[0][0].raw()), s.scale(m[0][1].raw())],
        [s.scale(m[1][0].raw()), s.scale(m[1][1].raw())],
    ]
}

/// The closed-form solution, returned as (pY, pZ) with denominator p.
pub fn closed_form_vertical(r: Zp2, win: Window, abcd: [WittScalar; 4]) -> QuasiEndoPair {
    let [a, b, c, d] = abcd;
    let p = r.int(r.p() as i64);
    let o = r.int(0);
    let (cs, dma) = (c.sigma(), (d - a).sigma());
    let f1 = f_series_scaled(r, win, Var::X1, 1);
    let g1 = g_series_scaled(r, win, Var::X1, 1);
    let fp = f_series_scaled(r, win, Var::X1, r.p() as i64);
    let gp = g_series_scaled(r, win, Var::X1, r.p() as i64);

    let py0 = consts(r, win, [[p * a, p * p * b], [p * c, p * d]]);
    let py = mat_sub(
        &mat_add(&py0, &times(&f1, [[p * c, p * (d - a)], [o, -(p * c)]])),
        &times(&g1, [[o, p * c], [o, o]]),
    );
    let pz0 = consts(r, win, [[p * d.sigma(), p * p * cs], [p * b.sigma(), p * a.sigma()]]);
    let pz = mat_sub(&mat_add(&pz0, &times(&fp, [[-(p * cs), o], [dma, p * cs]])), &times(&gp, [[o, o], [cs, o]]));
    QuasiEndoPair { y: py, z: pz, denom_exp: 1 }
}

/// Result of checking the closed form against the recursion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedFormCheck {
    pub recursion_holds: bool,
    pub reduces_to_gamma: bool,
    pub integral: bool,
}

/// Verifies that the closed form satisfies the recursion modulo p^digits and
/// the x1-window, without dividing: A Fr(pZ) B = p (pY) and S Fr(pY) S = p (pZ)
/// modulo p^(digits+2).
pub fn verify_closed_form(p: u64, digits: u32, x1_end: i64, abcd: [[i64; 2]; 4]) -> Result<ClosedFormCheck> {
    let r = Zp2::new(p, digits + 2)?;
    let win = Window::x1_only(x1_end);
    let s = abcd.map(|v| super::lift(&r, v));
    let pair = closed_form_vertical(r, win, s);
    let (a, b, sm) = (frame_a(r, win, Some(Var::X1)), frame_b(r, win, Some(Var::X1)), frame_a(r, win, None));
    let pp = raw_p(&r);
    let lhs_y = mat_mul(&mat_mul(&a, &mat_frobenius(&pair.z)), &b);
    let lhs_z = mat_mul(&mat_mul(&sm, &mat_frobenius(&pair.y)), &sm);
    let rhs_y = mat_map(&pair.y, |t| t.scale(pp));
    let rhs_z = mat_map(&pair.z, |t| t.scale(pp));
    let holds = mat_eq_mod_p(&lhs_y, &rhs_y, digits + 2) && mat_eq_mod_p(&lhs_z, &rhs_z, digits + 2);
    let gamma = QuasiEndoPair::from_abcd(r, win, s);
    let at0 = |m: &Mat2| mat_map(m, |t| constant_part(t));
    let reduces = at0(&pair.y) == mat_map(&gamma.y, |t| t.scale(pp)) && at0(&pair.z) == mat_map(&gamma.z, |t| t.scale(pp));
    let [a_, _, c_, d_] = s;
    Ok(ClosedFormCheck {
        recursion_holds: holds,
        reduces_to_gamma: reduces,
        integral: super::integrality_predicate(a_, s[1], c_, d_) == pair.is_integral(),
    })
}

fn constant_part(t: &TruncSeries) -> TruncSeries {
    let mut out = TruncSeries::zero(t.ring(), t.window());
    out.add_term(0, 0, t.coefficient(0, 0).raw());
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerticalSolution {
    /// (pY, pZ) with denominator exponent 1, normalized if integral.
    pub pair: QuasiEndoPair,
    /// Number of iterations until two successive iterates agreed.
    pub depth: u32,
    pub work_precision: u32,
}

/// Iterates Y <- (1/p) A Fr(Z) B, Z <- (1/p) S Fr(Y) S from the constant
/// Gamma until stable modulo p^N and the x1-window.
///
/// Y stays integral and pZ stays integral along the iteration, so the pair
/// (Y, pZ) is carried; each Y-update divides by p^2 and loses two digits.
pub fn solve_vertical_recursion(
    p: u64,
    digits: u32,
    x1_end: i64,
    abcd: [[i64; 2]; 4],
    max_depth: u32,
) -> Result<VerticalSolution> {
    let max = Zp2::max_precision(p);
    let depth_cap = max_depth.min(max.saturating_sub(digits + 2) / 2);
    if depth_cap == 0 {
        return Err(Error::PrecisionExhausted(format!("no room for iteration at {digits} digits")));
    }
    let work = digits + 2 * depth_cap + 2;
    let r = Zp2::new(p, work)?;
    let win = Window::x1_only(x1_end);
    let s = abcd.map(|v| super::lift(&r, v));
    let g = QuasiEndoPair::from_abcd(r, win, s);
    let pp = raw_p(&r);
    let (a, b, sm) = (frame_a(r, win, Some(Var::X1)), frame_b(r, win, Some(Var::X1)), frame_a(r, win, None));

    let mut y = g.y.clone();
    let mut pz = mat_map(&g.z, |t| t.scale(pp));
    let (mut dy, mut dz) = (work, work);
    for k in 1..=depth_cap {
        let raw = mat_mul(&mat_mul(&a, &mat_frobenius(&pz)), &b);
        let y_new = mat_try_map(&raw, |t| t.truncate_digits(dz).div_p(2))?;
        let pz_new = mat_mul(&mat_mul(&sm, &mat_frobenius(&y)), &sm);
        let (dy_new, dz_new) = (dz - 2, dy);
        if dy_new.min(dz_new) < digits {
            return Err(Error::PrecisionExhausted(format!("iteration {k} left fewer than {digits} digits")));
        }
        let stable = mat_eq_mod_p(&y_new, &y, digits) && mat_eq_mod_p(&pz_new, &pz, digits);
        y = y_new;
        pz = pz_new;
        dy = dy_new;
        dz = dz_new;
        if stable {
            let out_r = Zp2::new(p, digits)?;
            let red = |m: &Mat2| mat_try_map(m, |t| t.reduce_precision(digits));
            let py = red(&mat_map(&y, |t| t.scale(pp)))?;
            let pair = QuasiEndoPair { y: py, z: red(&pz)?, denom_exp: 1 };
            debug_assert_eq!(pair.ring(), out_r);
            return Ok(VerticalSolution { pair, depth: k, work_precision: work });
        }
    }
    Err(Error::PrecisionExhausted(format!("no stabilization within {depth_cap} iterations")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_a_fixed_point() {
        let sol = solve_vertical_recursion(3, 6, 30, [[1, 0], [0, 0], [0, 0], [1, 0]], 20).unwrap();
        assert_eq!(sol.depth, 1);
        assert!(sol.pair.is_integral());
        let n = sol.pair.normalize();
        assert_eq!(n.y[0][0].coefficient(0, 0), n.ring().int(1));
        assert!(n.y[0][1].is_zero() && n.y[1][0].is_zero());
    }

    #[test]
    fn iteration_matches_closed_form() {
        for p in [3u64, 5] {
            let abcd = [[2, 1], [1, 3], [4, -1], [0, 2]];
            let sol = solve_vertical_recursion(p, 6, 60, abcd, 20).unwrap();
            let r = Zp2::new(p, 6).unwrap();
            let cf = closed_form_vertical(r, Window::x1_only(60), abcd.map(|v| super::super::lift(&r, v)));
            assert_eq!(sol.pair, cf, "p = {p}");
        }
    }
}
