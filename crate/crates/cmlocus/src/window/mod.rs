//! Windows over the one- and two-variable frames, the lifting recursions
//! for the endomorphism of the order generator, and their structure.

pub mod display;
pub mod thick;
pub mod vertical;

pub use display::{hasse_witt_ideal, tensor_zp2, universal_display, DisplayingMatrix, HasseWittIdeal};
pub use thick::{alpha_beta, solve_thickened_recursion, structure_check, StructureReport, ThickSolution};
pub use vertical::{closed_form_vertical, solve_vertical_recursion, verify_closed_form, VerticalSolution};

use crate::error::{Error, Result};
use crate::padic::{Raw, WittScalar, Zp2};
use crate::series::{mat_eq_mod_p, mat_frobenius, mat_mul, Mat2, TruncSeries, Window};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
pub enum CaseKind {
    #[serde(rename = "unr")]
    Unramified,
    #[serde(rename = "ram")]
    Ramified,
}

impl fmt::Display for CaseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseKind::Unramified => "unr",
            CaseKind::Ramified => "ram",
        })
    }
}

impl FromStr for CaseKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unr" | "unramified" => Ok(CaseKind::Unramified),
            "ram" | "ramified" => Ok(CaseKind::Ramified),
            _ => Err(Error::Invalid(format!("unknown case {s:?}"))),
        }
    }
}

/// Ramification of E0 together with its parameters, given as integer pairs
/// `[a, b]` meaning `a + b*w`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CaseDescriptor {
    /// `psi` is the image of the generator eta; its conjugate is `sigma(psi)`.
    Unramified { psi: [i64; 2] },
    /// Trace-free uniformizer acting through the unit `b`.
    Ramified { b: [i64; 2] },
}

impl CaseDescriptor {
    pub fn default_for(kind: CaseKind) -> Self {
        match kind {
            CaseKind::Unramified => CaseDescriptor::Unramified { psi: [0, 1] },
            CaseKind::Ramified => CaseDescriptor::Ramified { b: [1, 0] },
        }
    }

    pub fn kind(&self) -> CaseKind {
        match self {
            CaseDescriptor::Unramified { .. } => CaseKind::Unramified,
            CaseDescriptor::Ramified { .. } => CaseKind::Ramified,
        }
    }

    pub fn validate(&self, p: u64) -> Result<()> {
        let r = Zp2::new(p, 1)?;
        match *self {
            CaseDescriptor::Unramified { psi } => {
                if !self.u(&r).is_unit() {
                    return Err(Error::Invalid(format!("psi = {psi:?} gives U divisible by p")));
                }
            }
            CaseDescriptor::Ramified { b } => {
                if !lift(&r, b).is_unit() {
                    return Err(Error::Invalid(format!("b = {b:?} is not a unit")));
                }
            }
        }
        Ok(())
    }

    pub fn psi(&self, r: &Zp2) -> WittScalar {
        match *self {
            CaseDescriptor::Unramified { psi } => lift(r, psi),
            CaseDescriptor::Ramified { .. } => r.int(0),
        }
    }

    pub fn psibar(&self, r: &Zp2) -> WittScalar {
        self.psi(r).sigma()
    }

    /// U = Psi(eta) - Psibar(eta).
    pub fn u(&self, r: &Zp2) -> WittScalar {
        self.psi(r) - self.psibar(r)
    }

    pub fn b(&self, r: &Zp2) -> WittScalar {
        match *self {
            CaseDescriptor::Ramified { b } => lift(r, b),
            CaseDescriptor::Unramified { .. } => r.int(0),
        }
    }

    /// The constants (a, b, c, d) of Gamma = [[a, pb], [c, d]].
    pub fn abcd(&self, r: &Zp2) -> [WittScalar; 4] {
        match self {
            CaseDescriptor::Unramified { .. } => [self.psi(r), r.int(0), r.int(0), self.psibar(r)],
            CaseDescriptor::Ramified { .. } => {
                let b = self.b(r);
                [r.int(0), b, b.sigma(), r.int(0)]
            }
        }
    }
}

pub fn lift(r: &Zp2, v: [i64; 2]) -> WittScalar {
    r.scalar([r.from_i64(v[0])[0], r.from_i64(v[1])[0]])
}

/// A quasi-endomorphism `p^(-denom_exp) (Y, Z)` with integral Y, Z.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiEndoPair {
    pub y: Mat2,
    pub z: Mat2,
    pub denom_exp: u32,
}

impl QuasiEndoPair {
    pub fn ring(&self) -> Zp2 {
        self.y[0][0].ring()
    }
    pub fn window(&self) -> Window {
        self.y[0][0].window()
    }

    /// Constant pair from (a, b, c, d): Y = [[a, pb], [c, d]],
    /// Z = [[d^s, p c^s], [b^s, a^s]].
    pub fn from_abcd(r: Zp2, win: Window, abcd: [WittScalar; 4]) -> Self {
        let [a, b, c, d] = abcd;
        let p = r.int(r.p() as i64);
        let k = |s: WittScalar| TruncSeries::constant(r, win, s.raw());
        QuasiEndoPair {
            y: [[k(a), k(p * b)], [k(c), k(d)]],
            z: [[k(d.sigma()), k(p * c.sigma())], [k(b.sigma()), k(a.sigma())]],
            denom_exp: 0,
        }
    }

    pub fn scalar(r: Zp2, win: Window, lambda: i64) -> Self {
        let l = r.int(lambda);
        let z = r.int(0);
        let k = |s: WittScalar| TruncSeries::constant(r, win, s.raw());
        let m = [[k(l), k(z)], [k(z), k(l)]];
        QuasiEndoPair { y: m.clone(), z: m, denom_exp: 0 }
    }

    /// Divide out common powers of p from the denominator.
    pub fn normalize(&self) -> Self {
        let mut out = self.clone();
        while out.denom_exp > 0 {
            let all = out.y.iter().chain(out.z.iter()).flatten().all(|s| s.valuation() >= 1);
            if !all {
                break;
            }
            let div = |m: &Mat2| crate::series::mat_try_map(m, |s| s.div_p(1)).expect("checked");
            out = QuasiEndoPair { y: div(&out.y), z: div(&out.z), denom_exp: out.denom_exp - 1 };
        }
        out
    }

    pub fn is_integral(&self) -> bool {
        self.normalize().denom_exp == 0
    }
}

/// Which frame the commutation is checked over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Frame {
    /// x2 = 0, x1 free.
    OneVar,
    /// Both variables.
    TwoVar,
    /// x1 = x2 = 0.
    Constant,
}

/// The frame matrix [[x, p], [1, 0]] for x = x1, x2 or 0.
pub fn frame_a(r: Zp2, win: Window, var: Option<crate::series::Var>) -> Mat2 {
    let x = match var {
        Some(v) => TruncSeries::var(r, win, v),
        None => TruncSeries::zero(r, win),
    };
    [
        [x, TruncSeries::constant(r, win, r.from_i64(r.p() as i64))],
        [TruncSeries::one(r, win), TruncSeries::zero(r, win)],
    ]
}

/// The matrix [[0, p], [1, -x]] with A*B = p.
pub fn frame_b(r: Zp2, win: Window, var: Option<crate::series::Var>) -> Mat2 {
    let x = match var {
        Some(v) => TruncSeries::var(r, win, v).neg(),
        None => TruncSeries::zero(r, win),
    };
    [
        [TruncSeries::zero(r, win), TruncSeries::constant(r, win, r.from_i64(r.p() as i64))],
        [TruncSeries::one(r, win), x],
    ]
}

/// Checks Y A1 = A1 Fr(Z) and Z A2 = A2 Fr(Y) modulo p^digits and the
/// pair's own window.
pub fn check_phi_commutation(pair: &QuasiEndoPair, frame: Frame, digits: u32) -> Result<bool> {
    use crate::series::Var;
    let r = pair.ring();
    if digits > r.precision() {
        return Err(Error::PrecisionExhausted(format!(
            "asked for {digits} digits of a pair known to {}",
            r.precision()
        )));
    }
    let win = pair.window();
    let (v1, v2) = match frame {
        Frame::OneVar => (Some(Var::X1), None),
        Frame::TwoVar => (Some(Var::X1), Some(Var::X2)),
        Frame::Constant => (None, None),
    };
    let (a1, a2) = (frame_a(r, win, v1), frame_a(r, win, v2));
    let ok1 = mat_eq_mod_p(&mat_mul(&pair.y, &a1), &mat_mul(&a1, &mat_frobenius(&pair.z)), digits);
    let ok2 = mat_eq_mod_p(&mat_mul(&pair.z, &a2), &mat_mul(&a2, &mat_frobenius(&pair.y)), digits);
    Ok(ok1 && ok2)
}

/// The constant endomorphism matrix of eta (unramified) or of the
/// uniformizer (ramified).
pub fn gamma_matrix(case: &CaseDescriptor, r: Zp2, win: Window) -> QuasiEndoPair {
    QuasiEndoPair::from_abcd(r, win, case.abcd(&r))
}

/// The one-variable lift of Gamma is integral iff p | a - d and p | c.
pub fn integrality_predicate(a: WittScalar, _b: WittScalar, c: WittScalar, d: WittScalar) -> bool {
    (a - d).valuation() >= 1 && c.valuation() >= 1
}

pub(crate) fn raw_p(r: &Zp2) -> Raw {
    r.from_i64(r.p() as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalars_commute_and_nilpotent_does_not() {
        let r = Zp2::new(3, 6).unwrap();
        let w = Window::new(0, 20, 9);
        let s = QuasiEndoPair::scalar(r, w, 7);
        assert!(check_phi_commutation(&s, Frame::TwoVar, 6).unwrap());
        let n = [
            [TruncSeries::zero(r, w), TruncSeries::one(r, w)],
            [TruncSeries::zero(r, w), TruncSeries::zero(r, w)],
        ];
        let bad = QuasiEndoPair { y: n.clone(), z: n, denom_exp: 0 };
        assert!(!check_phi_commutation(&bad, Frame::OneVar, 6).unwrap());
    }

    #[test]
    fn gamma_commutes_over_constant_frame() {
        for kind in [CaseKind::Unramified, CaseKind::Ramified] {
            let r = Zp2::new(5, 6).unwrap();
            let w = Window::new(0, 10, 5);
            let g = gamma_matrix(&CaseDescriptor::default_for(kind), r, w);
            assert!(check_phi_commutation(&g, Frame::Constant, 6).unwrap());
        }
    }

    #[test]
    fn integrality_examples() {
        let r = Zp2::new(3, 6).unwrap();
        let case = CaseDescriptor::default_for(CaseKind::Unramified);
        let [a, b, c, d] = case.abcd(&r);
        assert!(!integrality_predicate(a, b, c, d));
        let p = r.int(3);
        assert!(integrality_predicate(p * a, p * b, p * c, p * d));
        assert!(integrality_predicate(a, b, r.int(0), a));
    }
}
