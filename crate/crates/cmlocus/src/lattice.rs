//! Lattices in the supersingular Dieudonne modules of height two and four:
//! Hermite forms over Z_{p^2}, operator stability, the two lattice
//! classifications and the count of Hodge filtration lifts over dual numbers.

use crate::error::{Error, Result};
use crate::padic::{Raw, Zp2};
use crate::report::Erratum;
use rayon::prelude::*;
use serde::Serialize;

pub type Vector = Vec<Raw>;

/// A Z_{p^2}-linear or sigma-semilinear operator; column j is the image of
/// basis vector j.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Operator {
    pub name: &'static str,
    pub cols: Vec<Vector>,
    pub semilinear: bool,
}

impl Operator {
    pub fn apply(&self, r: &Zp2, v: &[Raw]) -> Vector {
        let n = self.cols.len();
        let mut out = vec![[0, 0]; n];
        for (j, &x) in v.iter().enumerate() {
            let x = if self.semilinear { r.sigma(x) } else { x };
            if r.is_zero(x) {
                continue;
            }
            for i in 0..n {
                out[i] = r.add(out[i], r.mul(self.cols[j][i], x));
            }
        }
        out
    }

    fn diagonal(name: &'static str, d: &[Raw]) -> Self {
        let n = d.len();
        let cols = (0..n).map(|j| (0..n).map(|i| if i == j { d[j] } else { [0, 0] }).collect()).collect();
        Operator { name, cols, semilinear: false }
    }

    /// Semilinear operator sending basis j to `c_j * basis[t_j]`.
    fn permutation(r: &Zp2, name: &'static str, targets: &[(usize, i64)]) -> Self {
        let n = targets.len();
        let cols = targets
            .iter()
            .map(|&(t, c)| (0..n).map(|i| if i == t { r.from_i64(c) } else { [0, 0] }).collect())
            .collect();
        Operator { name, cols, semilinear: true }
    }
}

/// A free module with F, V and a family of commuting linear actions.
#[derive(Clone, Debug)]
pub struct SemilinearModule {
    pub ring: Zp2,
    pub labels: Vec<&'static str>,
    pub f: Operator,
    pub v: Operator,
    pub actions: Vec<Operator>,
}

impl SemilinearModule {
    /// Height two: F e0 = f0, F f0 = p e0 (V alike), eta acting by
    /// psi = w on e0 and by its conjugate on f0.
    pub fn height_two(ring: Zp2) -> Self {
        let p = ring.p() as i64;
        let fv = |name| Operator::permutation(&ring, name, &[(1, 1), (0, p)]);
        let w = ring.omega();
        SemilinearModule {
            ring,
            labels: vec!["e0", "f0"],
            f: fv("F"),
            v: fv("V"),
            actions: vec![Operator::diagonal("eta", &[w, ring.sigma(w)])],
        }
    }

    /// Height four (the height-two module tensored with Z_{p^2}): F and V
    /// send e1 -> f2, e2 -> f1, f1 -> p e2, f2 -> p e1; eta acts by psi on
    /// e1, e2 and by its conjugate on f1, f2; the second factor's w acts by
    /// w on e1, f1 and by its conjugate on e2, f2.
    pub fn height_four(ring: Zp2) -> Self {
        let p = ring.p() as i64;
        let fv = |name| Operator::permutation(&ring, name, &[(3, 1), (2, 1), (1, p), (0, p)]);
        let w = ring.omega();
        let wb = ring.sigma(w);
        SemilinearModule {
            ring,
            labels: vec!["e1", "e2", "f1", "f2"],
            f: fv("F"),
            v: fv("V"),
            actions: vec![
                Operator::diagonal("eta", &[w, w, wb, wb]),
                Operator::diagonal("w", &[w, wb, w, wb]),
            ],
        }
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn operators(&self) -> impl Iterator<Item = &Operator> {
        [&self.f, &self.v].into_iter().chain(self.actions.iter())
    }

    /// FV = VF = p and every action commutes with F and V.
    pub fn sanity(&self) -> bool {
        let r = self.ring;
        let n = self.rank();
        let basis = |j: usize| -> Vector { (0..n).map(|i| if i == j { r.one() } else { [0, 0] }).collect() };
        let pp = r.from_i64(r.p() as i64);
        let probe = [r.one(), r.omega(), r.from_i64(2)];
        (0..n).all(|j| {
            probe.iter().all(|&c| {
                let v: Vector = basis(j).iter().map(|&x| r.mul(x, c)).collect();
                let pv: Vector = v.iter().map(|&x| r.mul(x, pp)).collect();
                let fv = self.f.apply(&r, &self.v.apply(&r, &v));
                let vf = self.v.apply(&r, &self.f.apply(&r, &v));
                let commute = self.actions.iter().all(|a| {
                    self.f.apply(&r, &a.apply(&r, &v)) == a.apply(&r, &self.f.apply(&r, &v))
                        && self.v.apply(&r, &a.apply(&r, &v)) == a.apply(&r, &self.v.apply(&r, &v))
                });
                fv == pv && vf == pv && commute
            })
        })
    }
}

/// Upper-triangular Hermite form: column r has p^diag[r] in row r and zeros
/// below; entries above the diagonal are reduced modulo the row's diagonal.
/// A diagonal equal to the ring precision marks a zero column. The form is
/// canonical for lattices containing p^m D when the precision exceeds 2m.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lattice {
    pub diag: Vec<u32>,
    pub cols: Vec<Vector>,
}

fn floor_div(r: &Zp2, x: Raw, d: u32) -> (Raw, Raw) {
    let m = r.p().pow(d);
    let rem = [x[0] % m, x[1] % m];
    ([(x[0] - rem[0]) / m, (x[1] - rem[1]) / m], rem)
}

impl Lattice {
    pub fn from_generators(r: &Zp2, n: usize, gens: &[Vector]) -> Self {
        let prec = r.precision();
        let mut pool: Vec<Vector> = gens.iter().filter(|g| g.iter().any(|&x| !r.is_zero(x))).cloned().collect();
        let mut cols: Vec<Vector> = vec![vec![[0, 0]; n]; n];
        let mut diag = vec![prec; n];
        for row in (0..n).rev() {
            let best = pool.iter().enumerate().filter(|(_, g)| !r.is_zero(g[row])).min_by_key(|(_, g)| r.val(g[row]));
            let Some((bi, _)) = best else { continue };
            let mut piv = pool.swap_remove(bi);
            let d = r.val(piv[row]);
            let unit = r.divp(piv[row], d).expect("valuation");
            let ui = r.inv(unit).expect("unit");
            for x in piv.iter_mut() {
                *x = r.mul(*x, ui);
            }
            for g in pool.iter_mut() {
                if r.is_zero(g[row]) {
                    continue;
                }
                let q = r.divp(g[row], d).expect("minimal valuation");
                for i in 0..n {
                    g[i] = r.sub(g[i], r.mul(q, piv[i]));
                }
            }
            pool.retain(|g| g.iter().any(|&x| !r.is_zero(x)));
            diag[row] = d;
            cols[row] = piv;
        }
        for c in 0..n {
            if diag[c] == prec {
                continue;
            }
            for q in (0..c).rev() {
                if diag[q] == prec {
                    continue;
                }
                let (t, _) = floor_div(r, cols[c][q], diag[q]);
                if r.is_zero(t) {
                    continue;
                }
                let colq = cols[q].clone();
                for i in 0..n {
                    cols[c][i] = r.sub(cols[c][i], r.mul(t, colq[i]));
                }
            }
        }
        Lattice { diag, cols }
    }

    /// The lattice p^diag[0] b0 + ... in the given coordinates.
    pub fn diagonal(r: &Zp2, diag: &[u32]) -> Self {
        let n = diag.len();
        let gens: Vec<Vector> = (0..n)
            .map(|j| (0..n).map(|i| if i == j { r.from_i64(r.p().pow(diag[j]) as i64) } else { [0, 0] }).collect())
            .collect();
        Self::from_generators(r, n, &gens)
    }

    pub fn rank(&self) -> usize {
        self.diag.len()
    }

    /// Length of the quotient of the standard lattice by this one.
    pub fn colength(&self) -> u32 {
        self.diag.iter().sum()
    }

    pub fn is_diagonal(&self, r: &Zp2) -> bool {
        (0..self.rank()).all(|c| (0..self.rank()).all(|i| i == c || r.is_zero(self.cols[c][i])))
    }

    pub fn contains(&self, r: &Zp2, v: &[Raw]) -> bool {
        let prec = r.precision();
        let mut v = v.to_vec();
        for row in (0..self.rank()).rev() {
            if r.is_zero(v[row]) {
                continue;
            }
            let d = self.diag[row];
            if d == prec || r.val(v[row]) < d {
                return false;
            }
            let q = r.divp(v[row], d).expect("checked valuation");
            for i in 0..self.rank() {
                v[i] = r.sub(v[i], r.mul(q, self.cols[row][i]));
            }
        }
        true
    }

    pub fn basis(&self, r: &Zp2) -> Vec<Vector> {
        let prec = r.precision();
        (0..self.rank()).filter(|&c| self.diag[c] < prec).map(|c| self.cols[c].clone()).collect()
    }

    pub fn is_stable(&self, r: &Zp2, op: &Operator) -> bool {
        self.basis(r).iter().all(|b| self.contains(r, &op.apply(r, b)))
    }

    pub fn image(&self, r: &Zp2, op: &Operator) -> Lattice {
        let gens: Vec<Vector> = self.basis(r).iter().map(|b| op.apply(r, b)).collect();
        Lattice::from_generators(r, self.rank(), &gens)
    }

    /// Signed entries, for output.
    pub fn signed_cols(&self, r: &Zp2) -> Vec<Vec<[i64; 2]>> {
        self.cols.iter().map(|c| c.iter().map(|&x| r.scalar(x).signed()).collect()).collect()
    }
}

pub fn stable_under_all(m: &SemilinearModule, l: &Lattice) -> bool {
    m.operators().all(|op| l.is_stable(&m.ring, op))
}

/// Working precision for lattices of colength up to k inside p^-s D.
pub fn lattice_precision(s: u32, k: u32) -> u32 {
    2 * (s + k) + 2
}

fn checked_ring(p: u64, prec: u32) -> Result<Zp2> {
    let max = Zp2::max_precision(p);
    if prec > max {
        return Err(Error::PrecisionTooLow(format!("needs {prec} digits, at most {max} available")));
    }
    Zp2::new(p, prec)
}

/// All sublattices of colength k of the height-two module stable under F, V
/// and the normalized action, by brute force over Hermite forms.
pub fn enumerate_stable_sublattices(p: u64, k: u32) -> Result<Vec<Lattice>> {
    let r = checked_ring(p, lattice_precision(0, k))?;
    let m = SemilinearModule::height_two(r);
    let mut out: Vec<Lattice> = (0..=k)
        .into_par_iter()
        .flat_map_iter(|i| {
            let j = k - i;
            let q = p.pow(i);
            let m = m.clone();
            (0..q * q).filter_map(move |idx| {
                let x = [idx % q, idx / q];
                let gens = vec![vec![r.from_i64(p.pow(i) as i64), [0, 0]], vec![x, r.from_i64(p.pow(j) as i64)]];
                let l = Lattice::from_generators(&r, 2, &gens);
                stable_under_all(&m, &l).then_some(l)
            })
        })
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LieCharacter {
    #[serde(rename = "psi")]
    Psi,
    #[serde(rename = "psibar")]
    PsiBar,
}

impl std::fmt::Display for LieCharacter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            LieCharacter::Psi => "psi",
            LieCharacter::PsiBar => "psibar",
        })
    }
}

/// Character by which eta acts on L/VL for a stable sublattice L of the
/// height-two module.
pub fn lie_action_parity(p: u64, l: &Lattice) -> Result<LieCharacter> {
    let k = l.colength();
    let r = checked_ring(p, lattice_precision(0, k))?;
    let m = SemilinearModule::height_two(r);
    let l = Lattice::from_generators(&r, 2, &l.basis(&r));
    let vl = l.image(&r, &m.v);
    if vl.colength() != l.colength() + 1 {
        return Err(Error::StabilityFailure(format!("L/VL has length {}", vl.colength() - l.colength())));
    }
    let eta = &m.actions[0];
    let w = r.omega();
    for b in l.basis(&r) {
        if vl.contains(&r, &b) {
            continue;
        }
        let eb = eta.apply(&r, &b);
        let twist = |c: Raw| -> Vector { eb.iter().zip(&b).map(|(&x, &y)| r.sub(x, r.mul(c, y))).collect() };
        if vl.contains(&r, &twist(w)) {
            return Ok(LieCharacter::Psi);
        }
        if vl.contains(&r, &twist(r.sigma(w))) {
            return Ok(LieCharacter::PsiBar);
        }
        return Err(Error::StabilityFailure("eta does not act on L/VL by a character".into()));
    }
    Err(Error::StabilityFailure("L = VL".into()))
}

/// Exponents (i, j) of the stable sublattice p^i e0 + p^j f0.
pub fn sublattice_exponents(l: &Lattice) -> (u32, u32) {
    (l.diag[0], l.diag[1])
}

/// Erratum for the displayed stable sublattice shape, which swaps the roles
/// of e0 and f0.
pub fn sublattice_shape_erratum() -> Erratum {
    Erratum {
        topic: "stable-sublattice-shape".into(),
        detail: "the stable sublattice of colength k = 2a + e is p^(a+e) e0 + p^a f0; the displayed form p^a e0 + p^(a+e) f0 is not F-stable for e = 1".into(),
    }
}

/// Parameters (a, b, delta) of p^-a e1 + p^-b e2 + p^-(b+delta) f1 + p^-(a+delta) f2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SuperShape {
    pub a: u32,
    pub b: u32,
    pub delta: u32,
}

impl SuperShape {
    pub fn s(&self) -> u32 {
        self.a + self.b + self.delta
    }
    /// Exponents of p^-1 on e1, e2, f1, f2.
    pub fn exponents(&self) -> [u32; 4] {
        [self.a, self.b, self.b + self.delta, self.a + self.delta]
    }
    pub fn fits(&self, m: u32) -> bool {
        self.exponents().iter().all(|&e| e <= m)
    }
    /// The family with a + b + delta = s inside p^-m D.
    pub fn family(s: u32, m: u32) -> Vec<SuperShape> {
        let mut out = Vec::new();
        for delta in 0..=1.min(s) {
            for a in 0..=s - delta {
                let sh = SuperShape { a, b: s - delta - a, delta };
                if sh.fits(m) {
                    out.push(sh);
                }
            }
        }
        out.sort();
        out
    }
}

/// Reads (a, b, delta) off the scaled lattice p^m L.
fn classify(r: &Zp2, l: &Lattice, m: u32) -> Result<SuperShape> {
    let bad = || Error::ShapeViolation(format!("stable lattice outside the diagonal family: diag {:?}", l.diag));
    if !l.is_diagonal(r) || l.diag.iter().any(|&d| d > m) {
        return Err(bad());
    }
    let e: Vec<u32> = l.diag.iter().map(|&d| m - d).collect();
    let (a, b) = (e[0], e[1]);
    if e[2] < b || e[3] < a || e[2] - b != e[3] - a || e[2] - b > 1 {
        return Err(bad());
    }
    Ok(SuperShape { a, b, delta: e[2] - b })
}

/// F_{p^2}-subspaces of F_{p^2}^n of dimension d in reduced row echelon form.
fn subspaces(p: u64, n: usize, d: usize) -> Vec<Vec<Vec<[u64; 2]>>> {
    let q = (p * p) as usize;
    let elem = |i: usize| [(i as u64) % p, (i as u64) / p];
    let mut out = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    fn choose(n: usize, d: usize, start: usize, cur: &mut Vec<usize>, all: &mut Vec<Vec<usize>>) {
        if cur.len() == d {
            all.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            choose(n, d, i + 1, cur, all);
            cur.pop();
        }
    }
    let mut sets = Vec::new();
    choose(n, d, 0, &mut pivots, &mut sets);
    for piv in sets {
        let free: Vec<(usize, usize)> =
            (0..d).flat_map(|r| ((piv[r] + 1)..n).filter(|c| !piv.contains(c)).map(move |c| (r, c))).collect();
        let total = q.pow(free.len() as u32);
        for mut idx in 0..total {
            let mut rows = vec![vec![[0u64, 0u64]; n]; d];
            for (r, &c) in piv.iter().enumerate() {
                rows[r][c] = [1, 0];
            }
            for &(r, c) in &free {
                rows[r][c] = elem(idx % q);
                idx /= q;
            }
            out.push(rows);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuperlatticeReport {
    pub s: u32,
    pub m: u32,
    /// Whether every submodule of p^-m D / D was searched (m = 1) or only
    /// sums of eigenline pieces.
    pub exhaustive: bool,
    pub found: Vec<SuperShape>,
    pub expected: Vec<SuperShape>,
}

impl SuperlatticeReport {
    pub fn matches(&self) -> bool {
        self.found == self.expected
    }
}

/// Lattices D in L in p^-m D of colength 2s stable under F, V and both actions.
///
/// For m = 1 every F_{p^2}-subspace of (p^-1 D)/D is tried. For larger m only
/// direct sums of pieces of the four eigenlines are tried: the two actions
/// have four distinct characters modulo p, so their idempotents lie in the
/// algebra they generate and any stable lattice splits along eigenlines.
pub fn enumerate_stable_superlattices(p: u64, s: u32, m: u32) -> Result<SuperlatticeReport> {
    let search = if m == 1 { Search::Exhaustive } else { Search::Diagonal };
    enumerate_stable_superlattices_with(p, s, m, search)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Search {
    /// Every F_{p^2}-subspace of (p^-1 D)/D; only for m = 1.
    Exhaustive,
    /// Direct sums of eigenline pieces.
    Diagonal,
}

pub fn enumerate_stable_superlattices_with(p: u64, s: u32, m: u32, search: Search) -> Result<SuperlatticeReport> {
    if search == Search::Exhaustive && m != 1 {
        return Err(Error::Invalid("exhaustive superlattice search needs m = 1".into()));
    }
    let r = checked_ring(p, lattice_precision(s, m))?;
    let module = SemilinearModule::height_four(r);
    let pm = r.from_i64(p.pow(m) as i64);
    let unit = |i: usize, c: Raw| -> Vector { (0..4).map(|j| if i == j { c } else { [0, 0] }).collect() };
    let candidates: Vec<Lattice> = if search == Search::Exhaustive {
        if 2 * s > 4 {
            vec![]
        } else {
            subspaces(p, 4, 2 * s as usize)
                .into_par_iter()
                .map(|rows| {
                    let mut gens: Vec<Vector> = (0..4).map(|i| unit(i, pm)).collect();
                    gens.extend(rows.into_iter().map(|v| v.into_iter().collect::<Vector>()));
                    Lattice::from_generators(&r, 4, &gens)
                })
                .collect()
        }
    } else {
        let mut v = Vec::new();
        let top = m + 1;
        for code in 0..top.pow(4) {
            let d: Vec<u32> = (0..4).map(|i| (code / top.pow(i)) % top).collect();
            if d.iter().map(|x| m - x).sum::<u32>() == 2 * s {
                v.push(Lattice::diagonal(&r, &d));
            }
        }
        v
    };
    let stable: Vec<Lattice> = candidates.into_par_iter().filter(|l| stable_under_all(&module, l)).collect();
    let mut found = stable.iter().map(|l| classify(&r, l, m)).collect::<Result<Vec<_>>>()?;
    found.sort();
    found.dedup();
    Ok(SuperlatticeReport { s, m, exhaustive: search == Search::Exhaustive, found, expected: SuperShape::family(s, m) })
}

/// Rank-two descent of a stable superlattice, in coordinates scaled by p^scale.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Descent {
    pub shape: SuperShape,
    pub scale: u32,
    pub e0: Vec<[i64; 2]>,
    pub f0: Vec<[i64; 2]>,
}

/// e0* = p^-a e1 + p^-b e2 and f0* = p^-(b+delta) f1 + p^-(a+delta) f2: checks
/// F e0* = p^delta f0*, F f0* = p^(1-delta) e0* (V alike), that eta acts by
/// psi and its conjugate, and that the span under the full order is the
/// superlattice.
pub fn descend_superlattice(p: u64, a: u32, b: u32, delta: u32) -> Result<Descent> {
    if delta > 1 {
        return Err(Error::Invalid("delta must be 0 or 1".into()));
    }
    let shape = SuperShape { a, b, delta };
    let m = a.max(b) + delta;
    let r = checked_ring(p, lattice_precision(shape.s(), m))?;
    let module = SemilinearModule::height_four(r);
    let pw = |e: u32| r.from_i64(p.pow(e) as i64);
    let e0: Vector = vec![pw(m - a), pw(m - b), [0, 0], [0, 0]];
    let f0: Vector = vec![[0, 0], [0, 0], pw(m - b - delta), pw(m - a - delta)];
    let scale = |c: Raw, v: &Vector| -> Vector { v.iter().map(|&x| r.mul(c, x)).collect() };
    let fail = |what: &str| Error::StabilityFailure(format!("{what} fails for (a, b, delta) = ({a}, {b}, {delta})"));
    for op in [&module.f, &module.v] {
        if op.apply(&r, &e0) != scale(pw(delta), &f0) {
            return Err(fail("F/V on e0*"));
        }
        if op.apply(&r, &f0) != scale(pw(1 - delta), &e0) {
            return Err(fail("F/V on f0*"));
        }
    }
    let eta = &module.actions[0];
    let w = r.omega();
    if eta.apply(&r, &e0) != scale(w, &e0) || eta.apply(&r, &f0) != scale(r.sigma(w), &f0) {
        return Err(fail("order action"));
    }
    let wact = &module.actions[1];
    let span = Lattice::from_generators(&r, 4, &[e0.clone(), f0.clone(), wact.apply(&r, &e0), wact.apply(&r, &f0)]);
    let target = Lattice::diagonal(&r, &shape.exponents().map(|e| m - e));
    if span != target {
        return Err(fail("recovering the superlattice"));
    }
    let signed = |v: &Vector| v.iter().map(|&x| r.scalar(x).signed()).collect();
    Ok(Descent { shape, scale: m, e0: signed(&e0), f0: signed(&f0) })
}

/// Which stability constraints the Hodge-lift count imposes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HodgeConstraints {
    pub order_action: bool,
    pub uniformizer: bool,
}

/// Lifts over F_{p^2}[eps] of the Hodge filtration span(f1, f2) to direct
/// summands of the rank-four module, stable under the selected actions.
///
/// A lift is the span of f_j + eps * (c_1j e1 + c_2j e2) for a matrix c over
/// F_{p^2}; an operator with e/f blocks (A_ee, A_ef; A_fe, A_ff) preserves it
/// iff A_ef = 0 and A_ee c = c A_ff. Counted by running over all c.
pub fn count_hodge_lifts(p: u64, cons: HodgeConstraints) -> Result<u64> {
    let r = Zp2::new(p, 1)?;
    let w = r.omega();
    let wb = r.sigma(w);
    let z = [0, 0];
    let one = r.one();
    // (A_ee, A_ff) blocks; both actions have A_ef = 0.
    type Block = [[Raw; 2]; 2];
    let mut ops: Vec<(Block, Block)> = Vec::new();
    if cons.order_action {
        ops.push(([[w, z], [z, w]], [[wb, z], [z, wb]]));
    }
    if cons.uniformizer {
        // x^2 - a x - b with a, b in pZ_p: both vanish in characteristic p.
        let n = [[z, z], [one, z]];
        ops.push((n, n));
    }
    let q = p * p;
    let elem = |i: u64| [i % p, i / p];
    let mm = |x: &Block, y: &Block| -> Block {
        let e = |i: usize, j: usize| r.add(r.mul(x[i][0], y[0][j]), r.mul(x[i][1], y[1][j]));
        [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
    };
    let count = (0..q.pow(4))
        .into_par_iter()
        .filter(|&idx| {
            let c = [[elem(idx % q), elem((idx / q) % q)], [elem((idx / q / q) % q), elem(idx / q / q / q)]];
            ops.iter().all(|(aee, aff)| mm(aee, &c) == mm(&c, aff))
        })
        .count();
    Ok(count as u64)
}

/// Hodge-lift counts under all four constraint combinations, with the
/// statement that removing the uniformizer constraint leaves p^4 lifts
/// checked against the computation.
pub fn hodge_lift_table(p: u64) -> Result<(Vec<(HodgeConstraints, u64)>, Vec<Erratum>)> {
    let mut rows = Vec::new();
    for (order_action, uniformizer) in [(true, true), (true, false), (false, true), (false, false)] {
        let c = HodgeConstraints { order_action, uniformizer };
        rows.push((c, count_hodge_lifts(p, c)?));
    }
    let mut errata = Vec::new();
    let without_uniformizer = rows[1].1;
    if without_uniformizer != p.pow(4) {
        errata.push(Erratum {
            topic: "hodge-lift-count-without-uniformizer".into(),
            detail: format!(
                "dropping the uniformizer constraint leaves {without_uniformizer} lifts, not p^4 = {}; p^4 = {} is the count with the order-action constraint dropped",
                p.pow(4),
                rows[2].1
            ),
        });
    }
    Ok((rows, errata))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modules_are_sane() {
        let r = Zp2::new(3, 6).unwrap();
        assert!(SemilinearModule::height_two(r).sanity());
        assert!(SemilinearModule::height_four(r).sanity());
    }

    #[test]
    fn hermite_form_is_canonical() {
        let r = Zp2::new(3, 6).unwrap();
        let a = Lattice::from_generators(&r, 2, &[vec![r.from_i64(3), r.from_i64(1)], vec![r.from_i64(0), r.from_i64(9)]]);
        let b = Lattice::from_generators(
            &r,
            2,
            &[vec![r.from_i64(3), r.from_i64(10)], vec![r.from_i64(6), r.from_i64(2)], vec![r.from_i64(0), r.from_i64(27)]],
        );
        assert_eq!(a, b);
        assert_eq!(a.colength(), 3);
        assert!(a.contains(&r, &[r.from_i64(0), r.from_i64(9)]));
        assert!(!a.contains(&r, &[r.from_i64(0), r.from_i64(1)]));
    }

    #[test]
    fn sublattices_and_parity() {
        let full = enumerate_stable_sublattices(3, 0).unwrap();
        assert_eq!(full.len(), 1);
        assert_eq!(lie_action_parity(3, &full[0]).unwrap(), LieCharacter::Psi);
        let one = enumerate_stable_sublattices(3, 1).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(sublattice_exponents(&one[0]), (1, 0));
        assert_eq!(lie_action_parity(3, &one[0]).unwrap(), LieCharacter::PsiBar);
        let two = enumerate_stable_sublattices(3, 2).unwrap();
        assert_eq!(sublattice_exponents(&two[0]), (1, 1));
        assert_eq!(lie_action_parity(3, &two[0]).unwrap(), LieCharacter::Psi);
    }

    #[test]
    fn superlattices_small() {
        assert_eq!(enumerate_stable_superlattices(3, 0, 1).unwrap().found.len(), 1);
        let rep = enumerate_stable_superlattices(3, 1, 1).unwrap();
        assert_eq!(rep.found.len(), 3);
        assert!(rep.matches());
        let diag = enumerate_stable_superlattices_with(3, 1, 1, Search::Diagonal).unwrap();
        assert_eq!(diag.found, rep.found);
        assert_eq!(enumerate_stable_superlattices(3, 2, 2).unwrap().found.len(), 5);
    }

    #[test]
    fn descents() {
        let d = descend_superlattice(3, 1, 0, 0).unwrap();
        assert_eq!(d.e0, vec![[1, 0], [3, 0], [0, 0], [0, 0]]);
        assert_eq!(d.f0, vec![[0, 0], [0, 0], [3, 0], [1, 0]]);
        descend_superlattice(3, 0, 0, 1).unwrap();
        descend_superlattice(5, 2, 1, 1).unwrap();
    }

    #[test]
    fn hodge_counts() {
        let all = |o, u| count_hodge_lifts(3, HodgeConstraints { order_action: o, uniformizer: u }).unwrap();
        assert_eq!(all(true, true), 1);
        assert_eq!(all(true, false), 1);
        assert_eq!(all(false, true), 81);
        assert_eq!(all(false, false), 6561);
    }
}
