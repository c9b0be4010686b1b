//! The two-variable lifting recursion over the thickened frames, the series
//! alpha_k and beta_k, and the vanishing/divisibility pattern of its steps.

use super::{frame_a, frame_b, raw_p, CaseDescriptor, QuasiEndoPair};
use crate::error::{Error, Result};
use crate::padic::{WittScalar, Zp2};
use crate::series::{
    f_series_scaled, g_series_scaled, mat_add, mat_eq_mod_p, mat_frobenius, mat_map, mat_mul, mat_sub, mat_try_map,
    Mat2, TruncSeries, Var, Window,
};
use serde::Serialize;

/// Truncation of the two-variable computation. `None` picks the default
/// (x2-cap p^k, precision 2k+2).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Truncation {
    pub x1_end: i64,
    pub x2_cap: Option<u32>,
    pub precision: Option<u32>,
}

impl Truncation {
    pub fn with_x1(x1_end: i64) -> Self {
        Truncation { x1_end, x2_cap: None, precision: None }
    }
}

#[derive(Clone, Debug)]
pub struct ThickSolution {
    pub case: CaseDescriptor,
    pub k: u32,
    /// p-adic digits known for every step.
    pub digits: u32,
    pub win: Window,
    pub y_init: Mat2,
    pub pz_init: Mat2,
    /// `ys[l - 1]` is Y_l = p^l (Y[l] - Y[l-1]) for l = 1..=k; likewise `zs`.
    pub ys: Vec<Mat2>,
    pub zs: Vec<Mat2>,
}

fn mat(r: Zp2, win: Window, e: [[Option<TruncSeries>; 2]; 2]) -> Mat2 {
    e.map(|row| row.map(|s| s.unwrap_or_else(|| TruncSeries::zero(r, win))))
}

fn initial_data(case: &CaseDescriptor, r: Zp2, win: Window) -> (Mat2, Mat2) {
    let c = |s: WittScalar| TruncSeries::constant(r, win, s.raw());
    let p = r.int(r.p() as i64);
    let f1 = f_series_scaled(r, win, Var::X1, 1);
    let g1 = g_series_scaled(r, win, Var::X1, 1);
    let fp = f_series_scaled(r, win, Var::X1, r.p() as i64);
    let gp = g_series_scaled(r, win, Var::X1, r.p() as i64);
    match case {
        CaseDescriptor::Unramified { .. } => {
            let (psi, psib, u) = (case.psi(&r), case.psibar(&r), case.u(&r));
            let y = mat(r, win, [[Some(c(psi)), Some(f1.scale((-u).raw()))], [None, Some(c(psib))]]);
            let pz = mat(r, win, [[Some(c(p * psi)), None], [Some(fp.scale(u.raw())), Some(c(p * psib))]]);
            (y, pz)
        }
        CaseDescriptor::Ramified { .. } => {
            let b = case.b(&r);
            let bs = b.sigma();
            let y = mat(
                r,
                win,
                [
                    [Some(f1.scale(bs.raw())), Some(c(p * b).sub(&g1.scale(bs.raw())))],
                    [Some(c(bs)), Some(f1.scale((-bs).raw()))],
                ],
            );
            let pz = mat(
                r,
                win,
                [
                    [Some(fp.scale((-(p * b)).raw())), Some(c(p * p * b))],
                    [Some(c(p * bs).sub(&gp.scale(b.raw()))), Some(fp.scale((p * b).raw()))],
                ],
            );
            (y, pz)
        }
    }
}

/// Runs the thickened recursion to depth k.
pub fn solve_thickened_recursion(case: &CaseDescriptor, p: u64, k: u32, trunc: Truncation) -> Result<ThickSolution> {
    if k == 0 {
        return Err(Error::Invalid("recursion depth must be at least 1".into()));
    }
    case.validate(p)?;
    let cap = match trunc.x2_cap {
        Some(c) => c,
        None => u32::try_from(p.checked_pow(k).ok_or_else(|| Error::Invalid("x2 cap overflow".into()))?)
            .map_err(|_| Error::Invalid("x2 cap overflow".into()))?,
    };
    let prec = trunc.precision.unwrap_or(2 * k + 2);
    if prec < 2 {
        return Err(Error::PrecisionTooLow(format!("precision {prec} leaves no digits after division")));
    }
    let r = Zp2::new(p, prec).map_err(|e| match e {
        Error::BadPrecision { .. } => Error::PrecisionExhausted(e.to_string()),
        e => e,
    })?;
    let win = Window::new(0, trunc.x1_end, cap);
    let (y0, pz0) = initial_data(case, r, win);
    let pp = raw_p(&r);
    let (a1, b1) = (frame_a(r, win, Some(Var::X1)), frame_b(r, win, Some(Var::X1)));
    let (a2, b2) = (frame_a(r, win, Some(Var::X2)), frame_b(r, win, Some(Var::X2)));
    let conj = |a: &Mat2, m: &Mat2, b: &Mat2| mat_mul(&mat_mul(a, &mat_frobenius(m)), b);
    let py0 = mat_map(&y0, |s| s.scale(pp));

    let y1 = mat_sub(&mat_try_map(&conj(&a1, &pz0, &b1), |s| s.div_p(1))?, &py0);
    let z1 = mat_sub(&mat_try_map(&conj(&a2, &py0, &b2), |s| s.div_p(1))?, &pz0);
    let mut ys = vec![y1];
    let mut zs = vec![z1];
    for l in 1..k as usize {
        let y = conj(&a1, &zs[l - 1], &b1);
        let z = conj(&a2, &ys[l - 1], &b2);
        ys.push(y);
        zs.push(z);
    }
    Ok(ThickSolution { case: *case, k, digits: prec - 1, win, y_init: y0, pz_init: pz0, ys, zs })
}

impl ThickSolution {
    pub fn ring(&self) -> Zp2 {
        self.y_init[0][0].ring()
    }

    pub fn p(&self) -> u64 {
        self.ring().p()
    }

    /// Upper-right entry y_l of Y_l (l = 0 means Y[0]).
    pub fn y_entry(&self, l: u32) -> TruncSeries {
        if l == 0 {
            self.y_init[0][1].clone()
        } else {
            self.ys[l as usize - 1][0][1].clone()
        }
    }

    /// Upper-right entry z_l of Z_l (l = 0 means Z[0]).
    pub fn z_entry(&self, l: u32) -> TruncSeries {
        if l == 0 {
            self.pz_init[0][1].div_p(1).expect("upper-right entry of pZ[0] carries p")
        } else {
            self.zs[l as usize - 1][0][1].clone()
        }
    }

    /// The lifts at levels 0..=k: level 0 is (pY[0], pZ[0]) over p, level j
    /// is p^j (Y[j], Z[j]) over p^j, windowed to x2-cap p^j.
    pub fn levels(&self) -> Vec<QuasiEndoPair> {
        let pp = raw_p(&self.ring());
        let mut y = mat_map(&self.y_init, |s| s.scale(pp));
        let mut z = self.pz_init.clone();
        let mut out = vec![QuasiEndoPair { y: y.clone(), z: z.clone(), denom_exp: 1 }];
        for j in 1..=self.k {
            let (yl, zl) = (&self.ys[j as usize - 1], &self.zs[j as usize - 1]);
            if j > 1 {
                y = mat_map(&y, |s| s.scale(pp));
                z = mat_map(&z, |s| s.scale(pp));
            }
            y = mat_add(&y, yl);
            z = mat_add(&z, zl);
            out.push(QuasiEndoPair { y: y.clone(), z: z.clone(), denom_exp: j });
        }
        let p = self.p();
        out.into_iter()
            .enumerate()
            .map(|(j, q)| {
                let cap = (p.pow(j as u32) as u32).min(self.win.x2_cap);
                let w = Window::new(self.win.x1_lo, self.win.x1_end, cap);
                QuasiEndoPair { y: mat_map(&q.y, |s| s.rewindow(w)), z: mat_map(&q.z, |s| s.rewindow(w)), denom_exp: q.denom_exp }
            })
            .collect()
    }

    /// Commutation with the two-variable frame for every level, each at its
    /// own x2-cap.
    pub fn level_commutation(&self) -> Result<Vec<bool>> {
        self.levels()
            .iter()
            .map(|q| super::check_phi_commutation(q, super::Frame::TwoVar, self.digits))
            .collect()
    }

    /// Level j reduced modulo x2^(p^(j-1)) equals level j-1, for j = 1..=k.
    pub fn reduction_compatibility(&self) -> Vec<bool> {
        let lv = self.levels();
        let pp = raw_p(&self.ring());
        (1..lv.len())
            .map(|j| {
                let w = lv[j - 1].window();
                let down = |m: &Mat2| mat_map(m, |s| s.rewindow(w));
                let prev = if j == 1 { (lv[0].y.clone(), lv[0].z.clone()) } else {
                    (mat_map(&lv[j - 1].y, |s| s.scale(pp)), mat_map(&lv[j - 1].z, |s| s.scale(pp)))
                };
                mat_eq_mod_p(&down(&lv[j].y), &prev.0, self.digits) && mat_eq_mod_p(&down(&lv[j].z), &prev.1, self.digits)
            })
            .collect()
    }

    /// Level 0 at x2 = 0, as (pY, pZ) over the one-variable window.
    pub fn level_zero_at_x2_zero(&self) -> QuasiEndoPair {
        let w = Window::x1_only(self.win.x1_end);
        let q = &self.levels()[0];
        QuasiEndoPair {
            y: mat_map(&q.y, |s| s.at_x2_zero().rewindow(w)),
            z: mat_map(&q.z, |s| s.at_x2_zero().rewindow(w)),
            denom_exp: 1,
        }
    }
}

/// (alpha_k, beta_k): upper-right entries of p^k Y[k] and p^k Z[k], modulo p^m.
pub fn alpha_beta(sol: &ThickSolution, m: u32) -> Result<(TruncSeries, TruncSeries)> {
    if m > sol.digits {
        return Err(Error::PrecisionExhausted(format!("{m} digits requested, {} known", sol.digits)));
    }
    let r = sol.ring();
    let mut a = TruncSeries::zero(r, sol.win);
    let mut b = TruncSeries::zero(r, sol.win);
    for l in 0..=sol.k {
        let w = r.from_i64(r.p().pow(sol.k - l) as i64);
        a = a.add(&sol.y_entry(l).scale(w));
        b = b.add(&sol.z_entry(l).scale(w));
    }
    Ok((a.reduce_precision(m)?, b.reduce_precision(m)?))
}

/// Sum of 2p^i over i < l with i even.
pub fn eps_plus(p: u64, l: u32) -> u64 {
    (0..l).filter(|i| i % 2 == 0).map(|i| 2 * p.pow(i)).sum()
}

/// Sum of 2p^i over i < l with i odd.
pub fn eps_minus(p: u64, l: u32) -> u64 {
    (0..l).filter(|i| i % 2 == 1).map(|i| 2 * p.pow(i)).sum()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Clause {
    pub name: &'static str,
    pub level: u32,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LeadingTerm {
    pub level: u32,
    /// "y" for even levels, "z" for odd.
    pub entry: &'static str,
    pub x2_exponent: u64,
    /// Least x1 degree among unit coefficients of the leading x2 slice.
    pub unit_x1_degree: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub clauses: Vec<Clause>,
    pub leading: Vec<LeadingTerm>,
}

impl StructureReport {
    pub fn passed(&self) -> bool {
        self.clauses.iter().all(|c| c.passed)
    }

    pub fn require(&self) -> Result<()> {
        match self.clauses.iter().find(|c| !c.passed) {
            None => Ok(()),
            Some(c) => Err(Error::StructureViolation(format!("{} at level {}: {}", c.name, c.level, c.detail))),
        }
    }
}

fn is_zero_mod(m: &Mat2, digits: u32) -> bool {
    m.iter().flatten().all(|s| s.terms().all(|(_, _, c)| s.ring().is_zero(s.ring().trunc(c, digits))))
}

fn min_x2(m: &Mat2, digits: u32) -> Option<u32> {
    m.iter()
        .flatten()
        .flat_map(|s| s.terms().filter(move |t| !s.ring().is_zero(s.ring().trunc(t.2, digits))).map(|t| t.1))
        .min()
}

/// Checks the alternating vanishing of the steps, their x2-divisibility,
/// and that y_l (l even) / z_l (l odd) is a unit times a fixed x2-power
/// modulo p.
pub fn structure_check(sol: &ThickSolution) -> StructureReport {
    let p = sol.p();
    let r = sol.ring();
    let d = sol.digits;
    let mut clauses = Vec::new();
    let mut leading = Vec::new();
    for l in 1..=sol.k {
        let (yl, zl) = (&sol.ys[l as usize - 1], &sol.zs[l as usize - 1]);
        let (vanish, other, vn, on) = if l % 2 == 1 { (yl, zl, "Y", "Z") } else { (zl, yl, "Z", "Y") };
        let ok = is_zero_mod(vanish, d);
        clauses.push(Clause {
            name: "alternating-vanishing",
            level: l,
            passed: ok,
            detail: if ok { format!("{vn}_{l} = 0") } else { format!("{vn}_{l} has nonzero terms") },
        });
        let need = p.pow(l - 1);
        let got = min_x2(other, d);
        let ok = got.map_or(true, |e| e as u64 >= need);
        clauses.push(Clause {
            name: "x2-divisibility",
            level: l,
            passed: ok,
            detail: format!("{on}_{l} has x2-order {got:?}, need {need}"),
        });
    }
    for l in 0..=sol.k {
        let (entry, name, eps) =
            if l % 2 == 0 { (sol.y_entry(l), "y", eps_minus(p, l)) } else { (sol.z_entry(l), "z", eps_plus(p, l)) };
        let units: Vec<(i64, u32)> = entry.terms().filter(|t| r.is_unit(t.2)).map(|t| (t.0, t.1)).collect();
        let unit_deg = units.iter().filter(|t| t.1 as u64 == eps).map(|t| t.0).min();
        let mut problems = Vec::new();
        if eps >= sol.win.x2_cap as u64 {
            problems.push(format!("exponent {eps} is beyond the x2-cap {}", sol.win.x2_cap));
        }
        if unit_deg.is_none() {
            problems.push(format!("no unit coefficient at x2^{eps}"));
        }
        if let Some(t) = units.iter().find(|t| t.1 as u64 != eps) {
            problems.push(format!("unit coefficient at x2^{}", t.1));
        }
        if l >= 1 {
            let need = p.pow(l - 1);
            let low = entry
                .terms()
                .filter(|t| !r.is_unit(t.2) && !r.is_zero(r.trunc(t.2, d)) && (t.1 as u64) < need)
                .map(|t| t.1)
                .min();
            if let Some(e) = low {
                problems.push(format!("p-divisible term at x2^{e} below {need}"));
            }
        }
        clauses.push(Clause {
            name: "unit-leading-term",
            level: l,
            passed: problems.is_empty(),
            detail: if problems.is_empty() { format!("{name}_{l} = unit * x2^{eps} mod p") } else { problems.join("; ") },
        });
        leading.push(LeadingTerm { level: l, entry: name, x2_exponent: eps, unit_x1_degree: unit_deg });
    }
    StructureReport { clauses, leading }
}
