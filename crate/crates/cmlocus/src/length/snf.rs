//! Presentations of x2-truncated quotients and their elimination over the
//! chain ring.

use super::chain::ChainScalar;
use crate::error::{Error, Result};
use crate::padic::Zp2;
use crate::series::TruncSeries;
use serde::Serialize;

/// Relation matrix of a module with `rows` generators over C/p^modulus.
#[derive(Clone, Debug)]
pub struct ChainPresentation {
    pub modulus: u32,
    pub entries: Vec<Vec<ChainScalar>>,
}

/// Coefficient ring of chain scalars: the largest precision that fits.
pub fn chain_ring(p: u64) -> Result<Zp2> {
    Zp2::new(p, Zp2::max_precision(p))
}

impl ChainPresentation {
    pub fn rows(&self) -> usize {
        self.entries.len()
    }
    pub fn cols(&self) -> usize {
        self.entries.first().map_or(0, |r| r.len())
    }

    /// Presentation of A/(gens) + (x2^rows): column (g, j) holds the
    /// x2-coefficients of g * x2^j, each known for x1-exponents below `x1_end`.
    pub fn from_generators(gens: &[TruncSeries], rows: usize, modulus: u32, x1_end: i64) -> Result<Self> {
        let p = gens.first().ok_or_else(|| Error::Invalid("no generators".into()))?.ring().p();
        let r = chain_ring(p)?;
        let mut entries = vec![Vec::with_capacity(gens.len() * rows); rows];
        for g in gens {
            let slices: Vec<Vec<(i64, [u64; 2])>> =
                (0..rows as u32).map(|j| g.x2_slice(j).into_iter().filter(|t| t.0 < x1_end).collect()).collect();
            for j in 0..rows {
                for (i, row) in entries.iter_mut().enumerate() {
                    row.push(if i >= j {
                        ChainScalar::windowed(r, slices[i - j].iter().copied(), x1_end)
                    } else {
                        ChainScalar::zero(r)
                    });
                }
            }
        }
        Ok(ChainPresentation { modulus, entries })
    }

    /// Appends exact columns (used for ideal membership tests).
    pub fn with_columns(&self, extra: &[Vec<ChainScalar>]) -> Self {
        let mut out = self.clone();
        for col in extra {
            for (row, e) in out.entries.iter_mut().zip(col) {
                row.push(e.clone());
            }
        }
        out
    }

    /// Rows and columns reordered: new row i is old row `rp[i]`.
    pub fn permuted(&self, rp: &[usize], cp: &[usize]) -> Self {
        let entries = rp.iter().map(|&i| cp.iter().map(|&j| self.entries[i][j].clone()).collect()).collect();
        ChainPresentation { modulus: self.modulus, entries }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SnfResult {
    /// Elementary divisor exponents, ascending, capped at the modulus.
    pub exponents: Vec<u32>,
    /// Rows left without a pivot of valuation below the modulus.
    pub saturated: usize,
}

impl SnfResult {
    pub fn length(&self) -> u32 {
        self.exponents.iter().sum()
    }
}

/// Gaussian elimination with pivots of minimal visible valuation, then
/// minimal x1-degree, then lowest row.
pub fn chain_snf(pres: &ChainPresentation) -> Result<SnfResult> {
    let m = pres.modulus;
    let mut mat = pres.entries.clone();
    let mut rows: Vec<usize> = (0..pres.rows()).collect();
    let mut cols: Vec<usize> = (0..pres.cols()).collect();
    let mut exps = Vec::new();
    let mut saturated = 0;
    while !rows.is_empty() {
        let mut best: Option<((u32, i64, usize), usize)> = None;
        for &i in &rows {
            for &j in &cols {
                let a = &mat[i][j];
                let v = a.valuation();
                if v >= m {
                    continue;
                }
                let key = (v, a.leading_degree(v).expect("visible term"), i);
                if best.as_ref().map_or(true, |b| key < b.0) {
                    best = Some((key, j));
                }
            }
        }
        let Some(((v, _, pi), pj)) = best else {
            saturated = rows.len();
            exps.extend(std::iter::repeat(m).take(rows.len()));
            break;
        };
        exps.push(v);
        let ui = mat[pi][pj].div_p(v)?.inverse()?;
        let pivot_row = mat[pi].clone();
        let active: Vec<bool> = (0..mat.len()).map(|i| i != pi && rows.contains(&i)).collect();
        for (_, row) in mat.iter_mut().enumerate().filter(|(i, _)| active[*i]) {
            let e = &row[pj];
            if e.is_exact_zero() {
                continue;
            }
            let q = e.div_p(v)?.mul(&ui);
            for &j in &cols {
                row[j] = row[j].sub(&q.mul(&pivot_row[j]));
            }
        }
        rows.retain(|&i| i != pi);
        cols.retain(|&j| j != pj);
    }
    exps.sort_unstable();
    Ok(SnfResult { exponents: exps, saturated })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{Var, Window};

    fn pres(p: u64, m: u32, e: Vec<Vec<Vec<(i64, i64)>>>) -> ChainPresentation {
        let r = chain_ring(p).unwrap();
        let entries = e
            .into_iter()
            .map(|row| row.into_iter().map(|t| ChainScalar::exact(r, t.into_iter().map(|(x, c)| (x, r.from_i64(c))))).collect())
            .collect();
        ChainPresentation { modulus: m, entries }
    }

    #[test]
    fn diagonal() {
        let s = chain_snf(&pres(3, 5, vec![vec![vec![(0, 3)], vec![]], vec![vec![], vec![(0, 27)]]])).unwrap();
        assert_eq!(s.exponents, vec![1, 3]);
    }

    #[test]
    fn x1_is_a_unit() {
        let s = chain_snf(&pres(3, 5, vec![vec![vec![(0, 3)], vec![(1, 1)]], vec![vec![], vec![(0, 9)]]])).unwrap();
        assert_eq!(s.exponents, vec![0, 3]);
    }

    #[test]
    fn p_and_x2_squared() {
        let r = Zp2::new(3, 3).unwrap();
        let w = Window::new(0, 10, 2);
        let p = TruncSeries::constant(r, w, r.from_i64(3));
        let x = TruncSeries::var(r, w, Var::X2);
        let pr = ChainPresentation::from_generators(&[p, x.mul(&x)], 2, 3, 10).unwrap();
        assert_eq!(chain_snf(&pr).unwrap().length(), 2);
    }
}
