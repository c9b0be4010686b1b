//! Elements of the chain ring C/p^D, where C is the completion of
//! Z_{p^2}((x1)) at p, known only up to a per-digit x1-precision.
//!
//! A scalar carries Laurent terms and a nonincreasing profile `h`: digit i
//! (the coefficient modulo p^(i+1)) of the x1^e term is known iff e < h[i].
//! Terms are stored reduced modulo p^phi(e), phi(e) = #{i : h[i] > e}.

use crate::error::{Error, Result};
use crate::padic::{Raw, Zp2};

pub const INF: i64 = i64::MAX / 4;
pub const NINF: i64 = i64::MIN / 4;

fn sat_add(a: i64, b: i64) -> i64 {
    if a >= INF || b >= INF {
        INF
    } else if a <= NINF || b <= NINF {
        NINF
    } else {
        a + b
    }
}

fn prefix_min(h: &mut [i64]) {
    let mut c = INF;
    for x in h.iter_mut() {
        c = c.min(*x);
        *x = c;
    }
}

/// Min-plus convolution of two profiles.
fn conv(g: &[i64], h: &[i64]) -> Vec<i64> {
    let d = g.len();
    let mut r = vec![INF; d];
    for j in 0..d {
        if g[j] >= INF {
            continue;
        }
        for l in 0..d - j {
            let s = sat_add(g[j], h[l]);
            if s < r[j + l] {
                r[j + l] = s;
            }
        }
    }
    prefix_min(&mut r);
    r
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainScalar {
    ring: Zp2,
    /// Sorted by exponent, nonzero after reduction.
    terms: Vec<(i64, Raw)>,
    h: Vec<i64>,
}

impl ChainScalar {
    pub fn new(ring: Zp2, terms: impl IntoIterator<Item = (i64, Raw)>, mut h: Vec<i64>) -> Self {
        assert_eq!(h.len(), ring.precision() as usize);
        prefix_min(&mut h);
        let mut t: Vec<(i64, Raw)> = terms.into_iter().collect();
        t.sort_by_key(|x| x.0);
        let mut out: Vec<(i64, Raw)> = Vec::with_capacity(t.len());
        for (e, v) in t {
            match out.last_mut() {
                Some(last) if last.0 == e => last.1 = ring.add(last.1, v),
                _ => out.push((e, v)),
            }
        }
        let mut s = ChainScalar { ring, terms: Vec::new(), h };
        s.terms = out
            .into_iter()
            .filter_map(|(e, v)| {
                let f = s.phi(e);
                if f == 0 {
                    return None;
                }
                let w = ring.trunc(v, f);
                (!ring.is_zero(w)).then_some((e, w))
            })
            .collect();
        s
    }

    /// Exactly known Laurent polynomial.
    pub fn exact(ring: Zp2, terms: impl IntoIterator<Item = (i64, Raw)>) -> Self {
        Self::new(ring, terms, vec![INF; ring.precision() as usize])
    }

    /// Series known to all digits below x1^end.
    pub fn windowed(ring: Zp2, terms: impl IntoIterator<Item = (i64, Raw)>, end: i64) -> Self {
        Self::new(ring, terms, vec![end; ring.precision() as usize])
    }

    pub fn zero(ring: Zp2) -> Self {
        Self::exact(ring, [])
    }

    pub fn monomial(ring: Zp2, c: Raw, e: i64) -> Self {
        Self::exact(ring, [(e, c)])
    }

    pub fn ring(&self) -> Zp2 {
        self.ring
    }
    pub fn terms(&self) -> &[(i64, Raw)] {
        &self.terms
    }
    pub fn profile(&self) -> &[i64] {
        &self.h
    }

    fn digits(&self) -> usize {
        self.h.len()
    }

    /// Number of known digits of the x1^e coefficient.
    pub fn phi(&self, e: i64) -> u32 {
        self.h.iter().position(|&x| x <= e).unwrap_or(self.digits()) as u32
    }

    /// Exactly zero (no terms, nothing unknown).
    pub fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.h[0] >= INF
    }

    /// Nothing visible and nothing left to learn.
    fn is_settled_zero(&self) -> bool {
        self.terms.is_empty() && self.h.iter().all(|&x| x >= INF || x <= NINF)
    }

    /// Minimal visible p-valuation (D if nothing is visible).
    pub fn valuation(&self) -> u32 {
        self.terms.iter().map(|t| self.ring.val(t.1)).min().unwrap_or(self.digits() as u32)
    }

    /// Least x1 exponent among terms of valuation `v`.
    pub fn leading_degree(&self, v: u32) -> Option<i64> {
        self.terms.iter().find(|t| self.ring.val(t.1) == v).map(|t| t.0)
    }

    /// Newton profile of the visible terms.
    fn newton(&self) -> Vec<i64> {
        let d = self.digits();
        let mut g = vec![INF; d];
        for &(e, v) in &self.terms {
            let j = self.ring.val(v) as usize;
            for gi in g.iter_mut().skip(j) {
                if e < *gi {
                    *gi = e;
                } else {
                    break;
                }
            }
        }
        prefix_min(&mut g);
        g
    }

    fn newton_known(&self) -> Vec<i64> {
        self.newton().into_iter().zip(&self.h).map(|(a, &b)| a.min(b)).collect()
    }

    pub fn add(&self, o: &Self) -> Self {
        let h = self.h.iter().zip(&o.h).map(|(a, b)| *a.min(b)).collect();
        Self::new(self.ring, self.terms.iter().chain(&o.terms).copied(), h)
    }

    pub fn neg(&self) -> Self {
        let r = self.ring;
        ChainScalar { ring: r, terms: self.terms.iter().map(|&(e, v)| (e, r.neg(v))).collect(), h: self.h.clone() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let r = self.ring;
        let c1 = conv(&self.newton_known(), &o.h);
        let c2 = conv(&o.newton_known(), &self.h);
        let mut h: Vec<i64> = c1.iter().zip(&c2).map(|(a, b)| *a.min(b)).collect();
        prefix_min(&mut h);
        let h0 = h[0];
        let (Some(a0), Some(b0)) = (self.terms.first(), o.terms.first()) else {
            return Self::new(r, [], h);
        };
        let lo = a0.0 + b0.0;
        let hi = (self.terms.last().unwrap().0 + o.terms.last().unwrap().0 + 1).min(h0);
        if hi <= lo {
            return Self::new(r, [], h);
        }
        let mut acc: Vec<Raw> = vec![[0, 0]; (hi - lo) as usize];
        for &(e, v) in &self.terms {
            for &(f, w) in &o.terms {
                let s = e + f;
                if s >= hi {
                    break;
                }
                let slot = &mut acc[(s - lo) as usize];
                *slot = r.add(*slot, r.mul(v, w));
            }
        }
        let terms = acc.into_iter().enumerate().filter(|(_, v)| !r.is_zero(*v)).map(|(i, v)| (lo + i as i64, v));
        Self::new(r, terms, h)
    }

    /// Division by p^v of a scalar all of whose visible terms have
    /// valuation at least v; digits that are not known beyond v vanish.
    pub fn div_p(&self, v: u32) -> Result<Self> {
        let r = self.ring;
        let mut terms = Vec::with_capacity(self.terms.len());
        for &(e, w) in &self.terms {
            if self.phi(e) <= v {
                continue;
            }
            terms.push((e, r.divp(w, v)?));
        }
        let v = v as usize;
        let mut h: Vec<i64> = self.h[v.min(self.digits())..].to_vec();
        h.resize(self.digits(), NINF);
        Ok(Self::new(r, terms, h))
    }

    /// Inverse of a scalar with a visible unit coefficient.
    pub fn inverse(&self) -> Result<Self> {
        let r = self.ring;
        let d = self.terms.iter().find(|t| r.is_unit(t.1)).map(|t| t.0).ok_or(Error::NotAUnit)?;
        let c = r.inv(self.terms.iter().find(|t| t.0 == d).unwrap().1)?;
        let shift = Self::monomial(r, c, -d);
        let up = shift.mul(self);

        // 1 + t0 + rest, with t0 the digit-0 lift of the x1-positive part.
        let p = r.p();
        let mut t0 = Vec::new();
        let mut rest = Vec::new();
        for &(e, w0) in &up.terms {
            let w = if e == 0 { r.sub(w0, r.one()) } else { w0 };
            let low = [w[0] % p, w[1] % p];
            if !r.is_zero(low) {
                if e <= 0 {
                    return Err(Error::NotAUnit);
                }
                t0.push((e, low));
            }
            let hi = r.sub(w, low);
            if !r.is_zero(hi) {
                rest.push((e, hi));
            }
        }
        let (i0, hinv) = if t0.is_empty() {
            (vec![(0, r.one())], up.h.clone())
        } else {
            let k = up.h[0];
            if k >= INF {
                return Err(Error::PrecisionExhausted("exact scalar with a non-terminating inverse".into()));
            }
            (newton_inverse(r, &t0, k), up.h.iter().map(|&x| x.min(k)).collect())
        };
        let w0 = Self::new(r, i0, hinv);
        let s = Self::new(r, rest, up.h.clone());
        let q = s.mul(&w0);
        let mut acc = Self::monomial(r, r.one(), 0);
        let mut term = acc.clone();
        for it in 1..=self.digits() {
            term = term.mul(&q);
            if term.is_settled_zero() {
                break;
            }
            acc = if it % 2 == 1 { acc.sub(&term) } else { acc.add(&term) };
        }
        Ok(w0.mul(&acc).mul(&shift))
    }
}

/// Inverse of 1 + t modulo x^k by Newton iteration; t has positive exponents.
fn newton_inverse(r: Zp2, t: &[(i64, Raw)], k: i64) -> Vec<(i64, Raw)> {
    let mut w: Vec<Raw> = vec![r.one()];
    let mut prec: i64 = 1;
    let one_t = {
        let mut v: Vec<Raw> = Vec::new();
        let top = t.iter().map(|x| x.0).max().unwrap_or(0).min(k.max(1) - 1).max(0) as usize;
        v.resize(top + 1, [0, 0]);
        v[0] = r.one();
        for &(e, c) in t {
            if (e as usize) <= top {
                v[e as usize] = r.add(v[e as usize], c);
            }
        }
        v
    };
    let trunc_mul = |a: &[Raw], b: &[Raw], n: usize| -> Vec<Raw> {
        let mut out = vec![[0u64, 0u64]; n];
        for (i, &x) in a.iter().enumerate().take(n) {
            if r.is_zero(x) {
                continue;
            }
            for (j, &y) in b.iter().enumerate().take(n - i) {
                if !r.is_zero(y) {
                    out[i + j] = r.add(out[i + j], r.mul(x, y));
                }
            }
        }
        out
    };
    while prec < k {
        prec = (2 * prec).min(k);
        let n = prec as usize;
        let uw = trunc_mul(&one_t, &w, n);
        let mut two: Vec<Raw> = uw.iter().map(|&x| r.neg(x)).collect();
        two[0] = r.add(two[0], r.from_i64(2));
        w = trunc_mul(&w, &two, n);
    }
    w.into_iter().enumerate().filter(|(_, c)| !r.is_zero(*c)).map(|(i, c)| (i as i64, c)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> Zp2 {
        Zp2::new(3, Zp2::max_precision(3)).unwrap()
    }

    #[test]
    fn exact_arithmetic() {
        let r = ring();
        let x = ChainScalar::monomial(r, r.one(), 1);
        let p = ChainScalar::monomial(r, r.from_i64(3), 0);
        let s = x.add(&p);
        let sq = s.mul(&s);
        assert_eq!(sq.terms(), &[(0, r.from_i64(9)), (1, r.from_i64(6)), (2, r.one())]);
        assert_eq!(p.mul(&p).valuation(), 2);
        assert_eq!(sq.sub(&sq), ChainScalar::zero(r));
    }

    #[test]
    fn windowed_product_loses_precision() {
        let r = ring();
        let a = ChainScalar::windowed(r, [(0, r.one()), (3, r.one())], 10);
        let b = ChainScalar::monomial(r, r.one(), -4);
        let c = a.mul(&b);
        assert_eq!(c.profile()[0], 6);
        assert_eq!(c.terms(), &[(-4, r.one()), (-1, r.one())]);
    }

    #[test]
    fn inverse_of_unit_with_p_tail() {
        let r = ring();
        let u = ChainScalar::windowed(r, [(-1, r.from_i64(3)), (2, r.from_i64(5)), (3, r.one()), (7, r.from_i64(9))], 60);
        let ui = u.inverse().unwrap();
        let one = u.mul(&ui);
        let k = one.profile()[0];
        assert!(k > 10, "precision collapsed to {k}");
        for &(e, c) in one.terms() {
            assert_eq!((e, c), (0, r.one()));
        }
    }

    #[test]
    fn division_by_p_shifts_profile() {
        let r = ring();
        let a = ChainScalar::windowed(r, [(0, r.from_i64(9)), (1, r.from_i64(27))], 5);
        let b = a.div_p(2).unwrap();
        assert_eq!(b.terms(), &[(0, r.one()), (1, r.from_i64(3))]);
        assert_eq!(*b.profile().last().unwrap(), NINF);
    }
}
