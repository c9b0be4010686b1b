//! Independent length computation from the leading monomials alone.
//!
//! Replaces y_l (l even) and z_l (l odd) by the bare x2-power of their unit
//! part, read off the computed recursion, and drops every p-divisible
//! correction. The quotient of Z_p[[x2]] by the resulting pair is presented
//! over Z/p^M and reduced by ordinary integer elimination.

use crate::error::{Error, Result};
use crate::window::ThickSolution;

fn val(mut x: u128, p: u128, cap: u32) -> u32 {
    if x == 0 {
        return cap;
    }
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

fn inv_mod(a: u128, m: u128) -> u128 {
    let (mut t, mut nt, mut r, mut nr) = (0i128, 1i128, m as i128, a as i128);
    while nr != 0 {
        let q = r / nr;
        (t, nt) = (nt, t - q * nt);
        (r, nr) = (nr, r - q * nr);
    }
    t.rem_euclid(m as i128) as u128
}

/// Elementary divisor exponents of an integer matrix over Z/p^m.
pub fn integer_snf(p: u64, m: u32, mut a: Vec<Vec<u128>>) -> Vec<u32> {
    let (p, modulus) = (p as u128, (p as u128).pow(m));
    for row in a.iter_mut() {
        for x in row.iter_mut() {
            *x %= modulus;
        }
    }
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut live_r: Vec<usize> = (0..rows).collect();
    let mut live_c: Vec<usize> = (0..cols).collect();
    let mut out = Vec::new();
    while !live_r.is_empty() {
        let mut best: Option<(u32, usize, usize)> = None;
        for &i in &live_r {
            for &j in &live_c {
                let v = val(a[i][j], p, m);
                if v < m && best.map_or(true, |b| v < b.0) {
                    best = Some((v, i, j));
                }
            }
        }
        let Some((v, pi, pj)) = best else {
            out.extend(std::iter::repeat(m).take(live_r.len()));
            break;
        };
        out.push(v);
        let pv = p.pow(v);
        let ui = inv_mod(a[pi][pj] / pv, modulus);
        for &i in &live_r {
            if i == pi || a[i][pj] == 0 {
                continue;
            }
            let q = (a[i][pj] / pv) * ui % modulus;
            for &j in &live_c {
                let sub = q * a[pi][j] % modulus;
                a[i][j] = (a[i][j] + modulus - sub) % modulus;
            }
        }
        live_r.retain(|&i| i != pi);
        live_c.retain(|&j| j != pj);
    }
    out.sort_unstable();
    out
}

/// Least x2-exponent carrying a unit coefficient.
fn unit_exponent(s: &crate::series::TruncSeries) -> Option<u32> {
    let r = s.ring();
    s.terms().filter(|t| r.is_unit(t.2)).map(|t| t.1).min()
}

/// Length of Z_p[[x2]]/(alpha', beta', x2^(p^k), p^M) for the monomial model
/// of a solved recursion, M = 2k+1.
pub fn structure_guided_length(sol: &ThickSolution) -> Result<u32> {
    let p = sol.p();
    let k = sol.k;
    let m = p.pow(k) as usize;
    let big_m = 2 * k + 1;
    let mut alpha = vec![0u128; m];
    let mut beta = vec![0u128; m];
    for l in 0..=k {
        let (entry, target) = if l % 2 == 0 { (sol.y_entry(l), &mut alpha) } else { (sol.z_entry(l), &mut beta) };
        let e = unit_exponent(&entry)
            .ok_or_else(|| Error::StructureViolation(format!("level {l} entry has no unit coefficient")))?;
        if (e as usize) < m {
            target[e as usize] += (p as u128).pow(k - l);
        }
    }
    let modulus = (p as u128).pow(big_m);
    let mut mat = vec![Vec::with_capacity(3 * m); m];
    for poly in [&alpha, &beta] {
        for j in 0..m {
            for (i, row) in mat.iter_mut().enumerate() {
                row.push(if i >= j { poly[i - j] } else { 0 });
            }
        }
    }
    for j in 0..m {
        for (i, row) in mat.iter_mut().enumerate() {
            row.push(if i == j { modulus } else { 0 });
        }
    }
    Ok(integer_snf(p, big_m, mat).iter().sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_elimination() {
        assert_eq!(integer_snf(3, 5, vec![vec![3, 0], vec![0, 27]]), vec![1, 3]);
        assert_eq!(integer_snf(3, 5, vec![vec![6, 9], vec![3, 0]]), vec![1, 2]);
        assert_eq!(integer_snf(5, 3, vec![vec![0, 0], vec![0, 0]]), vec![3, 3]);
    }
}
