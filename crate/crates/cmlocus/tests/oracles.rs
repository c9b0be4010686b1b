//! Values checked against independent computations done here from scratch.

use cmlocus::combinatorics::{component_inventory, intersection_number, vertical_multiplicity_closed, ComponentKind};
use cmlocus::lattice::{count_hodge_lifts, enumerate_stable_sublattices, enumerate_stable_superlattices, HodgeConstraints};
use cmlocus::length::{quotient_length, structure_guided_length, LengthOptions};
use cmlocus::window::{solve_thickened_recursion, thick::Truncation, CaseDescriptor, CaseKind};

/// Number of F_q-solutions of a homogeneous linear system over F_p given by
/// rows of coefficients, q = p^(nvars / dim).
fn solution_count(p: u64, mut rows: Vec<Vec<u64>>, nvars: usize) -> u64 {
    let mut rank = 0;
    for col in 0..nvars {
        let Some(piv) = (rank..rows.len()).find(|&i| rows[i][col] % p != 0) else { continue };
        rows.swap(rank, piv);
        let inv = (1..p).find(|x| x * rows[rank][col] % p == 1).unwrap();
        for x in rows[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..rows.len() {
            if i != rank && rows[i][col] % p != 0 {
                let f = rows[i][col];
                for j in 0..nvars {
                    rows[i][j] = (rows[i][j] + p * p - f * rows[rank][j] % p) % p;
                }
            }
        }
        rank += 1;
    }
    p.pow((nvars - rank) as u32)
}

/// Linear conditions on c in M_2(F_{p^2}) = F_p^8 for A_ee c = c A_ff, with
/// A_ee, A_ff either scalar w / -w (order action) or the nilpotent N.
fn hodge_conditions(p: u64, order: bool, uniformizer: bool) -> Vec<Vec<u64>> {
    // Variables: entry (i, j) of c has F_p-coordinates x[4i+2j], x[4i+2j+1] (a + b w).
    let mut rows = Vec::new();
    let var = |i: usize, j: usize, part: usize| 4 * i + 2 * j + part;
    if order {
        // w c + c w = 2 w c = 0: every coordinate of c vanishes.
        for v in 0..8 {
            let mut r = vec![0; 8];
            r[v] = 2;
            rows.push(r);
        }
    }
    if uniformizer {
        // N c = c N with N = [[0, 0], [1, 0]]: (N c)_{ij} = [i == 1] c_{0j}, (c N)_{ij} = [j == 0] c_{i1}.
        for i in 0..2 {
            for j in 0..2 {
                for part in 0..2 {
                    let mut r = vec![0u64; 8];
                    if i == 1 {
                        r[var(0, j, part)] += 1;
                    }
                    if j == 0 {
                        r[var(i, 1, part)] += p - 1;
                    }
                    if r.iter().any(|&x| x % p != 0) {
                        rows.push(r);
                    }
                }
            }
        }
    }
    rows
}

#[test]
fn hodge_counts_match_linear_algebra() {
    for p in [3u64, 5] {
        for (o, u) in [(true, true), (true, false), (false, true), (false, false)] {
            let want = solution_count(p, hodge_conditions(p, o, u), 8);
            let got = count_hodge_lifts(p, HodgeConstraints { order_action: o, uniformizer: u }).unwrap();
            assert_eq!(got, want, "p={p} order={o} uniformizer={u}");
        }
    }
}

/// Modulo p the two actions have four distinct characters on e1, e2, f1, f2,
/// so stable subspaces of (p^-1 D)/D are spans of coordinate lines closed
/// under the reduction of F (e1 -> f2, e2 -> f1, f1, f2 -> 0).
#[test]
fn superlattices_match_closed_coordinate_sets() {
    let image = [Some(3usize), Some(2), None, None];
    for s in 0..=2u32 {
        let count = (0u32..16)
            .filter(|m| m.count_ones() == 2 * s)
            .filter(|m| (0..4).all(|i| m & (1 << i) == 0 || image[i].map_or(true, |j| m & (1 << j) != 0)))
            .count();
        for p in [3, 5] {
            assert_eq!(enumerate_stable_superlattices(p, s, 1).unwrap().found.len(), count, "p={p} s={s}");
        }
    }
}

/// Stability checked by hand: F(p^i e0) = p^i f0 and F(p^j f0) = p^(j+1) e0
/// lie in p^i e0 + p^j f0 iff j <= i <= j + 1.
#[test]
fn sublattices_match_exponent_inequalities() {
    for p in [3, 5] {
        for k in 0..=4u32 {
            let want: Vec<(u32, u32)> = (0..=k).map(|i| (i, k - i)).filter(|&(i, j)| j <= i && i <= j + 1).collect();
            let got: Vec<(u32, u32)> = enumerate_stable_sublattices(p, k).unwrap().iter().map(|l| (l.diag[0], l.diag[1])).collect();
            assert_eq!(got, want);
        }
    }
}

#[test]
fn lengths_match_the_monomial_model_and_the_term_sum() {
    let quick = LengthOptions { x1_window: 150, max_doublings: 3, verdict: false };
    for kind in [CaseKind::Unramified, CaseKind::Ramified] {
        for (p, k) in [(3u64, 1u32), (3, 2), (5, 1), (5, 2)] {
            let case = CaseDescriptor::default_for(kind);
            let sol = solve_thickened_recursion(&case, p, k, Truncation::with_x1(150)).unwrap();
            let model = structure_guided_length(&sol).unwrap();
            let snf = quotient_length(&case, p, k, quick).unwrap().length;
            let sum: u64 = (1..=k as u64).map(|i| 2 * i * p.pow(k - i as u32)).sum();
            assert_eq!(snf, model, "{kind} p={p} k={k}");
            assert_eq!(snf as u64, sum);
            assert_eq!(vertical_multiplicity_closed(p, k), sum as i128);
        }
    }
}

/// Totals recounted from first principles: improper level components
/// excluded, t-classes counted as differences of unit indices p^(s-t)
/// (with the (p-1)/p correction at t = 0 unramified).
#[test]
fn totals_recounted() {
    for p in [3u64, 5, 7] {
        for c0 in 0..=4u32 {
            for kind in [CaseKind::Unramified, CaseKind::Ramified] {
                let idx = |t: u32, s: u32| -> i128 {
                    if t == s {
                        1
                    } else if kind == CaseKind::Unramified && t == 0 {
                        (p as i128 - 1) * (p as i128).pow(s - 1)
                    } else {
                        (p as i128).pow(s - t)
                    }
                };
                let mut total: i128 = 0;
                for s in 0..=c0 {
                    for t in 0..s {
                        total += (idx(t, s) - idx(t + 1, s)) * intersection_number(kind, ComponentKind::HorizontalStandard, p, t);
                    }
                    if kind == CaseKind::Ramified {
                        total += (p as i128).pow(s);
                    }
                }
                if c0 > 0 {
                    let q = p as i128;
                    let mult: i128 = (1..=c0 as i128).map(|i| 2 * i * q.pow(c0 - i as u32)).sum();
                    total += 2 * mult;
                }
                assert_eq!(component_inventory(kind, p, c0).proper_total(), total, "{kind} p={p} c0={c0}");
            }
        }
    }
}
