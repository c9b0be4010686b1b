use cmlocus::combinatorics::{component_inventory, level_sum_formula, unit_index};
use cmlocus::lattice::{descend_superlattice, Lattice};
use cmlocus::length::{chain_ring, chain_snf, ChainPresentation, ChainScalar};
use cmlocus::padic::{Raw, Zp2};
use cmlocus::series::{TruncSeries, Window};
use cmlocus::window::CaseKind;
use proptest::prelude::*;

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![3u64, 5, 7, 11])
}

fn raw(r: Zp2) -> impl Strategy<Value = Raw> {
    let m = r.modulus();
    (0..m, 0..m).prop_map(|(a, b)| [a, b])
}

fn ring_and_elems(n: usize) -> impl Strategy<Value = (Zp2, Vec<Raw>)> {
    (prime(), 1u32..6).prop_flat_map(move |(p, prec)| {
        let r = Zp2::new(p, prec).unwrap();
        (Just(r), prop::collection::vec(raw(r), n))
    })
}

proptest! {
    #[test]
    fn ring_axioms((r, v) in ring_and_elems(3)) {
        let (x, y, z) = (v[0], v[1], v[2]);
        prop_assert_eq!(r.mul(x, r.mul(y, z)), r.mul(r.mul(x, y), z));
        prop_assert_eq!(r.mul(x, r.add(y, z)), r.add(r.mul(x, y), r.mul(x, z)));
        prop_assert_eq!(r.mul(x, y), r.mul(y, x));
        prop_assert_eq!(r.add(x, r.neg(x)), [0, 0]);
        prop_assert_eq!(r.mul(x, r.one()), x);
    }

    #[test]
    fn frobenius_is_an_involutive_automorphism((r, v) in ring_and_elems(2)) {
        let (x, y) = (v[0], v[1]);
        prop_assert_eq!(r.sigma(r.sigma(x)), x);
        prop_assert_eq!(r.sigma(r.mul(x, y)), r.mul(r.sigma(x), r.sigma(y)));
        prop_assert_eq!(r.sigma(r.add(x, y)), r.add(r.sigma(x), r.sigma(y)));
        prop_assert_eq!(r.norm(x), r.mul(x, r.sigma(x))[0]);
    }

    #[test]
    fn valuations_add_and_units_invert((r, v) in ring_and_elems(2)) {
        let (x, y) = (v[0], v[1]);
        let xy = r.mul(x, y);
        if !r.is_zero(xy) {
            prop_assert_eq!(r.val(xy), r.val(x) + r.val(y));
        }
        if r.is_unit(x) {
            prop_assert_eq!(r.mul(x, r.inv(x).unwrap()), r.one());
        } else {
            prop_assert!(r.inv(x).is_err());
        }
    }

    #[test]
    fn reduction_is_a_ring_map((r, v) in ring_and_elems(2), drop in 0u32..3) {
        let lo = r.precision().saturating_sub(drop).max(1);
        let s = r.scalar(v[0]);
        let t = r.scalar(v[1]);
        prop_assert_eq!((s * t).reduce_to(lo).unwrap(), s.reduce_to(lo).unwrap() * t.reduce_to(lo).unwrap());
        prop_assert_eq!((s + t).reduce_to(lo).unwrap(), s.reduce_to(lo).unwrap() + t.reduce_to(lo).unwrap());
    }

    #[test]
    fn series_frobenius_is_semilinear(
        p in prime(),
        terms in prop::collection::vec((0i64..6, 0u32..3, -20i64..20, -20i64..20), 0..8),
        other in prop::collection::vec((0i64..6, 0u32..3, -20i64..20, -20i64..20), 0..8),
    ) {
        let r = Zp2::new(p, 4).unwrap();
        let w = Window::new(0, 40, 8);
        let build = |ts: &[(i64, u32, i64, i64)]| {
            let mut s = TruncSeries::zero(r, w);
            for &(e1, e2, a, b) in ts {
                s.add_term(e1, e2, r.add(r.from_i64(a), r.mul(r.from_i64(b), r.omega())));
            }
            s
        };
        let (f, g) = (build(&terms), build(&other));
        prop_assert_eq!(f.mul(&g).frobenius_lift(), f.frobenius_lift().mul(&g.frobenius_lift()));
        prop_assert_eq!(f.add(&g).frobenius_lift(), f.frobenius_lift().add(&g.frobenius_lift()));
        prop_assert_eq!(f.scale(r.omega()).frobenius_lift(), f.frobenius_lift().scale(r.sigma(r.omega())));
        prop_assert_eq!(f.mul(&g), g.mul(&f));
    }

    #[test]
    fn elimination_ignores_pivot_order(
        p in prop::sample::select(vec![3u64, 5]),
        entries in prop::collection::vec(prop::collection::vec((0i64..3, -30i64..30), 0..3), 9),
        seed in any::<u64>(),
    ) {
        let r = chain_ring(p).unwrap();
        let rows: Vec<Vec<ChainScalar>> = entries
            .chunks(3)
            .map(|row| row.iter().map(|t| ChainScalar::windowed(r, t.iter().map(|&(e, c)| (e, r.from_i64(c))), 40)).collect())
            .collect();
        let pres = ChainPresentation { modulus: 4, entries: rows };
        let base = chain_snf(&pres).unwrap();
        let rot = (seed % 3) as usize;
        let rp: Vec<usize> = (0..3).map(|i| (i + rot) % 3).collect();
        let cp: Vec<usize> = if seed % 2 == 0 { vec![2, 0, 1] } else { vec![1, 2, 0] };
        prop_assert_eq!(chain_snf(&pres.permuted(&rp, &cp)).unwrap().exponents, base.exponents);
    }

    #[test]
    fn orbit_classes_partition_the_unit_quotient(p in prime(), s in 0u32..=5) {
        for kind in [CaseKind::Unramified, CaseKind::Ramified] {
            let classes: i128 = (0..s).map(|t| unit_index(kind, p, t, s) - unit_index(kind, p, t + 1, s)).sum();
            prop_assert_eq!(classes + 1, unit_index(kind, p, 0, s));
            let inv = component_inventory(kind, p, s);
            for level in 0..=s {
                prop_assert_eq!(inv.level_sums(level), level_sum_formula(kind, p, level));
            }
        }
    }

    #[test]
    fn hermite_form_is_canonical(
        p in prop::sample::select(vec![3u64, 5]),
        gens in prop::collection::vec(prop::collection::vec((-40i64..40, -40i64..40), 3), 1..5),
        unit in (1i64..20, 0i64..20),
    ) {
        let r = Zp2::new(p, 5).unwrap();
        let mut vecs: Vec<Vec<Raw>> = gens
            .iter()
            .map(|g| g.iter().map(|&(a, b)| r.add(r.from_i64(a), r.mul(r.from_i64(b), r.omega()))).collect())
            .collect();
        // Canonical forms need p^m D inside the lattice with precision above 2m.
        for i in 0..3 {
            vecs.push((0..3).map(|j| if i == j { r.from_i64(p as i64 * p as i64) } else { [0, 0] }).collect());
        }
        let l = Lattice::from_generators(&r, 3, &vecs);
        for v in &vecs {
            prop_assert!(l.contains(&r, v));
        }
        let u = r.add(r.from_i64(unit.0 * p as i64 + 1), r.mul(r.from_i64(unit.1), r.omega()));
        let mut other: Vec<Vec<Raw>> = vecs.iter().rev().map(|v| v.iter().map(|&x| r.mul(u, x)).collect()).collect();
        if other.len() > 1 {
            let first = other[0].clone();
            for (x, y) in other[1].iter_mut().zip(&first) {
                *x = r.add(*x, r.mul(r.from_i64(7), *y));
            }
        }
        prop_assert_eq!(Lattice::from_generators(&r, 3, &other), l);
    }

    #[test]
    fn every_family_member_descends(p in prop::sample::select(vec![3u64, 5]), a in 0u32..4, b in 0u32..4, delta in 0u32..2) {
        let d = descend_superlattice(p, a, b, delta).unwrap();
        prop_assert_eq!(d.scale, a.max(b) + delta);
    }
}
