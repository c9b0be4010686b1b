//! Displaying matrices of the height-two and height-four supersingular
//! displays and their universal deformations.

use crate::padic::Zp2;
use crate::series::{TruncSeries, Var, Window};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisplayingMatrix {
    pub labels: Vec<&'static str>,
    /// `entries[i][j]`: coefficient of basis vector i in the image of basis vector j.
    pub entries: Vec<Vec<TruncSeries>>,
    /// Number of leading basis vectors of e-type (the ones outside Q).
    pub e_count: usize,
}

impl DisplayingMatrix {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn map(&self, f: impl Fn(&TruncSeries) -> TruncSeries) -> Self {
        DisplayingMatrix {
            labels: self.labels.clone(),
            entries: self.entries.iter().map(|r| r.iter().map(&f).collect()).collect(),
            e_count: self.e_count,
        }
    }
}

fn grid(ring: Zp2, win: Window, layout: &[&[Option<Var>]], ones: &[(usize, usize)]) -> Vec<Vec<TruncSeries>> {
    let mut m: Vec<Vec<TruncSeries>> = layout
        .iter()
        .map(|row| {
            row.iter()
                .map(|v| match v {
                    Some(v) => TruncSeries::var(ring, win, *v),
                    None => TruncSeries::zero(ring, win),
                })
                .collect()
        })
        .collect();
    for &(i, j) in ones {
        m[i][j] = TruncSeries::one(ring, win);
    }
    m
}

/// The universal displaying matrix in one variable (2x2) or two variables (4x4).
pub fn universal_display(ring: Zp2, win: Window, nvars: u8) -> DisplayingMatrix {
    if nvars == 1 {
        DisplayingMatrix {
            labels: vec!["e0", "f0"],
            entries: grid(ring, win, &[&[Some(Var::X0), None], &[None, None]], &[(0, 1), (1, 0)]),
            e_count: 1,
        }
    } else {
        let x1 = Some(Var::X1);
        let x2 = Some(Var::X2);
        DisplayingMatrix {
            labels: vec!["e1", "e2", "f1", "f2"],
            entries: grid(
                ring,
                win,
                &[&[None, x1, None, None], &[x2, None, None, None], &[None; 4], &[None; 4]],
                &[(0, 3), (1, 2), (2, 1), (3, 0)],
            ),
            e_count: 2,
        }
    }
}

/// Tensoring a 2x2 display with Z_{p^2}: F is sigma-linear, so it swaps
/// the two idempotent components.
pub fn tensor_zp2(d0: &DisplayingMatrix) -> DisplayingMatrix {
    assert_eq!(d0.dim(), 2);
    let ring = d0.entries[0][0].ring();
    let win = d0.entries[0][0].window();
    let idx = |i: usize, s: usize| 2 * i + s;
    let mut e = vec![vec![TruncSeries::zero(ring, win); 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            for s in 0..2 {
                e[idx(i, 1 - s)][idx(j, s)] = d0.entries[i][j].clone();
            }
        }
    }
    DisplayingMatrix { labels: vec!["e1", "e2", "f1", "f2"], entries: e, e_count: 2 }
}

/// Generators of the Hasse-Witt ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HasseWittIdeal {
    pub p: u64,
    pub multiplier: TruncSeries,
}

impl fmt::Display for HasseWittIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(p, {})", crate::report::poly_string(&self.multiplier))
    }
}

fn det(m: &[Vec<TruncSeries>]) -> TruncSeries {
    match m.len() {
        1 => m[0][0].clone(),
        2 => m[0][0].mul(&m[1][1]).sub(&m[0][1].mul(&m[1][0])),
        n => {
            let mut acc = TruncSeries::zero(m[0][0].ring(), m[0][0].window());
            for j in 0..n {
                let minor: Vec<Vec<TruncSeries>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, s)| s.clone()).collect())
                    .collect();
                let t = m[0][j].mul(&det(&minor));
                acc = if j % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
            }
            acc
        }
    }
}

/// Verschiebung on the Lie algebra is read off the e-to-e block; its top
/// exterior power, together with p, cuts out the Hasse-Witt locus.
pub fn hasse_witt_ideal(d: &DisplayingMatrix) -> HasseWittIdeal {
    let k = d.e_count;
    let block: Vec<Vec<TruncSeries>> = d.entries[..k].iter().map(|r| r[..k].to_vec()).collect();
    let mut m = det(&block);
    let ring = m.ring();
    let lead = m.terms().next().map(|t| t.2);
    if let Some(c) = lead {
        if ring.is_unit(c) {
            m = m.scale(ring.inv(c).expect("unit"));
        }
    }
    HasseWittIdeal { p: ring.p(), multiplier: m }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn specializations() {
        let r = Zp2::new(3, 4).unwrap();
        let w = Window::new(0, 4, 4);
        let d = universal_display(r, w, 2);
        let zero = d.map(|s| s.at_x2_zero().rewindow(Window::new(0, 4, 4)));
        let zero = zero.map(|s| {
            let mut t = TruncSeries::zero(r, w);
            for (a, b, c) in s.terms() {
                if a == 0 && b == 0 {
                    t.add_term(a, b, c);
                }
            }
            t
        });
        for i in 0..4 {
            for j in 0..4 {
                let want = if i + j == 3 { TruncSeries::one(r, w) } else { TruncSeries::zero(r, w) };
                assert_eq!(zero.entries[i][j], want);
            }
        }
    }
}
