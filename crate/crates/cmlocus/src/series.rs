//! Truncated series in x1 (Laurent-capable) and x2 over Z_{p^2}/p^N.

use crate::error::{Error, Result};
use crate::padic::{Raw, WittScalar, Zp2};
use std::collections::BTreeMap;

/// Truncation data: x1 exponents in `x1_lo..x1_end`, x2 exponents below `x2_cap`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Window {
    pub x1_lo: i64,
    pub x1_end: i64,
    pub x2_cap: u32,
}

impl Window {
    pub fn new(x1_lo: i64, x1_end: i64, x2_cap: u32) -> Self {
        Window { x1_lo, x1_end, x2_cap }
    }
    /// Power series in x1 only, exponents `0..end`.
    pub fn x1_only(end: i64) -> Self {
        Window { x1_lo: 0, x1_end: end, x2_cap: 1 }
    }
    pub fn contains(&self, e1: i64, e2: u32) -> bool {
        e1 >= self.x1_lo && e1 < self.x1_end && e2 < self.x2_cap
    }
}

/// Series variable. `X0` is the single variable of the height-two problem
/// and lives in the x1 slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    X0,
    X1,
    X2,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncSeries {
    ring: Zp2,
    win: Window,
    terms: BTreeMap<(i64, u32), Raw>,
}

impl TruncSeries {
    pub fn zero(ring: Zp2, win: Window) -> Self {
        TruncSeries { ring, win, terms: BTreeMap::new() }
    }

    pub fn monomial(ring: Zp2, win: Window, c: Raw, e1: i64, e2: u32) -> Self {
        let mut s = Self::zero(ring, win);
        s.add_term(e1, e2, c);
        s
    }

    pub fn constant(ring: Zp2, win: Window, c: Raw) -> Self {
        Self::monomial(ring, win, c, 0, 0)
    }

    pub fn one(ring: Zp2, win: Window) -> Self {
        Self::constant(ring, win, ring.one())
    }

    pub fn var(ring: Zp2, win: Window, v: Var) -> Self {
        match v {
            Var::X0 | Var::X1 => Self::monomial(ring, win, ring.one(), 1, 0),
            Var::X2 => Self::monomial(ring, win, ring.one(), 0, 1),
        }
    }

    pub fn ring(&self) -> Zp2 {
        self.ring
    }
    pub fn window(&self) -> Window {
        self.win
    }
    pub fn len(&self) -> usize {
        self.terms.len()
    }
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, u32, Raw)> + '_ {
        self.terms.iter().map(|(&(a, b), &c)| (a, b, c))
    }

    pub fn coefficient(&self, e1: i64, e2: u32) -> WittScalar {
        self.ring.scalar(self.terms.get(&(e1, e2)).copied().unwrap_or([0, 0]))
    }

    /// Adds `c * x1^e1 x2^e2`, dropping it if outside the window.
    pub fn add_term(&mut self, e1: i64, e2: u32, c: Raw) {
        if !self.win.contains(e1, e2) || self.ring.is_zero(c) {
            return;
        }
        let r = self.ring;
        let e = self.terms.entry((e1, e2)).or_insert([0, 0]);
        *e = r.add(*e, c);
        if r.is_zero(*e) {
            self.terms.remove(&(e1, e2));
        }
    }

    fn check_compat(&self, o: &Self) {
        assert_eq!(self.ring, o.ring, "series over different rings");
        assert_eq!(self.win, o.win, "series with different windows");
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check_compat(o);
        let mut out = self.clone();
        for (&(a, b), &c) in &o.terms {
            out.add_term(a, b, c);
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(self.ring.neg(self.ring.one()))
    }

    pub fn scale(&self, c: Raw) -> Self {
        let r = self.ring;
        let mut out = Self::zero(r, self.win);
        for (&(a, b), &v) in &self.terms {
            out.add_term(a, b, r.mul(c, v));
        }
        out
    }

    pub fn scale_int(&self, c: i64) -> Self {
        self.scale(self.ring.from_i64(c))
    }

    /// Multiplication by `c * x1^e1 x2^e2`.
    pub fn mul_monomial(&self, c: Raw, e1: i64, e2: u32) -> Self {
        let r = self.ring;
        let mut out = Self::zero(r, self.win);
        for (&(a, b), &v) in &self.terms {
            out.add_term(a + e1, b + e2, r.mul(c, v));
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.check_compat(o);
        if self.terms.len() > o.terms.len() {
            return o.mul(self);
        }
        let r = self.ring;
        let mut out = Self::zero(r, self.win);
        for (&(a, b), &v) in &self.terms {
            for (&(c, d), &w) in &o.terms {
                if c + a >= self.win.x1_end || b + d >= self.win.x2_cap {
                    continue;
                }
                out.add_term(a + c, b + d, r.mul(v, w));
            }
        }
        out
    }

    /// Frame Frobenius: sigma on coefficients, x_i -> x_i^p.
    pub fn frobenius_lift(&self) -> Self {
        let r = self.ring;
        let p = r.p() as i64;
        let mut out = Self::zero(r, self.win);
        for (&(a, b), &v) in &self.terms {
            let (a2, b2) = (a * p, b as u64 * p as u64);
            if b2 < self.win.x2_cap as u64 {
                out.add_term(a2, b2 as u32, r.sigma(v));
            }
        }
        out
    }

    /// Same terms in a new window (terms outside are dropped).
    pub fn rewindow(&self, win: Window) -> Self {
        let mut out = Self::zero(self.ring, win);
        for (&(a, b), &v) in &self.terms {
            out.add_term(a, b, v);
        }
        out
    }

    /// Reduce coefficients to a lower precision.
    pub fn reduce_precision(&self, prec: u32) -> Result<Self> {
        let r2 = self.ring.with_precision(prec)?;
        let mut out = Self::zero(r2, self.win);
        for (&(a, b), &v) in &self.terms {
            out.add_term(a, b, r2.scalar(v).raw());
        }
        Ok(out)
    }

    /// Coefficients reduced modulo p^e, keeping the ring.
    pub fn truncate_digits(&self, e: u32) -> Self {
        let r = self.ring;
        let mut out = Self::zero(r, self.win);
        for (&(a, b), &v) in &self.terms {
            out.add_term(a, b, r.trunc(v, e));
        }
        out
    }

    /// Exact division by p^e.
    pub fn div_p(&self, e: u32) -> Result<Self> {
        let r = self.ring;
        let mut out = Self::zero(r, self.win);
        for (&(a, b), &v) in &self.terms {
            out.add_term(a, b, r.divp(v, e)?);
        }
        Ok(out)
    }

    /// Equality modulo p^e.
    pub fn eq_mod_p(&self, o: &Self, e: u32) -> bool {
        let d = self.sub(o);
        d.terms.values().all(|&v| d.ring.is_zero(d.ring.trunc(v, e)))
    }

    /// Minimal p-adic valuation of a coefficient (precision if zero).
    pub fn valuation(&self) -> u32 {
        self.terms.values().map(|&v| self.ring.val(v)).min().unwrap_or(self.ring.precision())
    }

    /// Minimal x2 exponent among terms (None if zero).
    pub fn x2_order(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.1).min()
    }

    /// Coefficient of x2^j as a series in x1 alone.
    pub fn x2_slice(&self, j: u32) -> BTreeMap<i64, Raw> {
        self.terms
            .range((i64::MIN, j)..)
            .filter(|(k, _)| k.1 == j)
            .map(|(k, &v)| (k.0, v))
            .collect()
    }

    /// Setting x2 = 0.
    pub fn at_x2_zero(&self) -> Self {
        let mut out = Self::zero(self.ring, self.win);
        for (&(a, b), &v) in &self.terms {
            if b == 0 {
                out.add_term(a, 0, v);
            }
        }
        out
    }

    /// Substituting x1 = x2 = x0; the result lives in the x1 slot.
    pub fn diagonal(&self) -> Self {
        let win = Window::new(self.win.x1_lo, self.win.x1_end, 1);
        let mut out = Self::zero(self.ring, win);
        for (&(a, b), &v) in &self.terms {
            out.add_term(a + b as i64, 0, v);
        }
        out
    }

    /// Inverse of a unit of the localized ring.
    ///
    /// Factor `u = c x1^d (1 + t)` with `c` a unit coefficient at the least
    /// such x1 degree among x2-free terms, then invert `1 + t` by the
    /// product `(1 - t)(1 + t^2)(1 + t^4)...`, which terminates because
    /// every term of `t` carries p, x2 or a positive power of x1.
    pub fn invert(&self) -> Result<Self> {
        let r = self.ring;
        let d = self
            .terms
            .iter()
            .filter(|(k, v)| k.1 == 0 && r.is_unit(**v))
            .map(|(k, _)| k.0)
            .next()
            .ok_or(Error::NotAUnit)?;
        let c = self.terms[&(d, 0)];
        let ci = r.inv(c)?;
        let mut t: Vec<((i64, u32), Raw)> = Vec::new();
        for (&(a, b), &v) in &self.terms {
            let mut w = r.mul(ci, v);
            if (a, b) == (d, 0) {
                w = r.sub(w, r.one());
            }
            if !r.is_zero(w) {
                t.push(((a - d, b), w));
            }
        }
        let neg = t.iter().map(|((a, _), _)| -a).max().unwrap_or(0).max(0);
        let steps = r.precision() as i64 + self.win.x2_cap as i64;
        let lo = (self.win.x1_lo + d).min(-steps * neg);
        let end = self.win.x1_end + d + steps * neg;
        let work = Window::new(lo, end, self.win.x2_cap);
        let mut s = Self::zero(r, work);
        for ((a, b), v) in t {
            s.add_term(a, b, r.neg(v));
        }
        let mut w = Self::one(r, work);
        let mut q = s;
        let mut rounds = 0;
        while !q.is_zero() {
            w = w.add(&w.mul(&q));
            q = q.mul(&q);
            rounds += 1;
            if rounds > 64 {
                return Err(Error::NotAUnit);
            }
        }
        let mut out = Self::zero(r, self.win);
        for (&(a, b), &v) in &w.terms {
            out.add_term(a - d, b, r.mul(ci, v));
        }
        Ok(out)
    }
}

fn var_slot(v: Var, win: &Window) -> (bool, i64) {
    match v {
        Var::X0 | Var::X1 => (true, win.x1_end),
        Var::X2 => (false, win.x2_cap as i64),
    }
}

/// Exponents p^(2i) * scale below `bound`.
fn even_powers(p: u64, scale: i64, bound: i64) -> Vec<i64> {
    let mut out = Vec::new();
    let mut q: i64 = 1;
    while q.saturating_mul(scale) < bound {
        out.push(q * scale);
        q = q.saturating_mul((p * p) as i64);
    }
    out
}

fn place(s: &mut TruncSeries, on_x1: bool, e: i64, c: Raw) {
    if on_x1 {
        s.add_term(e, 0, c);
    } else if e < u32::MAX as i64 {
        s.add_term(0, e as u32, c);
    }
}

/// f(x^scale) = sum_i x^(scale p^(2i)), truncated to the window.
pub fn f_series_scaled(ring: Zp2, win: Window, v: Var, scale: i64) -> TruncSeries {
    let (on_x1, bound) = var_slot(v, &win);
    let mut s = TruncSeries::zero(ring, win);
    for e in even_powers(ring.p(), scale, bound) {
        place(&mut s, on_x1, e, ring.one());
    }
    s
}

/// g(x^scale) with g(x) = sum_i x^(p^(2i)) (2 sum_{j<i} x^(p^(2j)) + x^(p^(2i))).
pub fn g_series_scaled(ring: Zp2, win: Window, v: Var, scale: i64) -> TruncSeries {
    let (on_x1, bound) = var_slot(v, &win);
    let pw = even_powers(ring.p(), 1, bound);
    let mut s = TruncSeries::zero(ring, win);
    for (i, &a) in pw.iter().enumerate() {
        for (j, &b) in pw[..=i].iter().enumerate() {
            let e = (a + b).saturating_mul(scale);
            if e >= bound {
                continue;
            }
            let c = if j < i { 2 } else { 1 };
            place(&mut s, on_x1, e, ring.from_i64(c));
        }
    }
    s
}

pub fn f_series(ring: Zp2, win: Window, v: Var) -> TruncSeries {
    f_series_scaled(ring, win, v, 1)
}

pub fn g_series(ring: Zp2, win: Window, v: Var) -> TruncSeries {
    g_series_scaled(ring, win, v, 1)
}

/// 2x2 matrices of series.
pub type Mat2 = [[TruncSeries; 2]; 2];

pub fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let e = |i: usize, j: usize| a[i][0].mul(&b[0][j]).add(&a[i][1].mul(&b[1][j]));
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

pub fn mat_add(a: &Mat2, b: &Mat2) -> Mat2 {
    let e = |i: usize, j: usize| a[i][j].add(&b[i][j]);
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

pub fn mat_sub(a: &Mat2, b: &Mat2) -> Mat2 {
    let e = |i: usize, j: usize| a[i][j].sub(&b[i][j]);
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

pub fn mat_map(a: &Mat2, f: impl Fn(&TruncSeries) -> TruncSeries) -> Mat2 {
    [[f(&a[0][0]), f(&a[0][1])], [f(&a[1][0]), f(&a[1][1])]]
}

pub fn mat_try_map(a: &Mat2, f: impl Fn(&TruncSeries) -> Result<TruncSeries>) -> Result<Mat2> {
    Ok([[f(&a[0][0])?, f(&a[0][1])?], [f(&a[1][0])?, f(&a[1][1])?]])
}

pub fn mat_frobenius(a: &Mat2) -> Mat2 {
    mat_map(a, |s| s.frobenius_lift())
}

pub fn mat_eq_mod_p(a: &Mat2, b: &Mat2, e: u32) -> bool {
    (0..2).all(|i| (0..2).all(|j| a[i][j].eq_mod_p(&b[i][j], e)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> Zp2 {
        Zp2::new(3, 8).unwrap()
    }

    #[test]
    fn f_and_g_leading_terms() {
        let r = ring();
        let f9 = f_series(r, Window::x1_only(9), Var::X1);
        assert_eq!(f9.terms().map(|t| t.0).collect::<Vec<_>>(), vec![1]);
        let f10 = f_series(r, Window::x1_only(10), Var::X1);
        assert_eq!(f10.terms().map(|t| t.0).collect::<Vec<_>>(), vec![1, 9]);
        let g9 = g_series(r, Window::x1_only(9), Var::X1);
        assert_eq!(g9.terms().map(|t| (t.0, t.2)).collect::<Vec<_>>(), vec![(2, [1, 0])]);
        let g11 = g_series(r, Window::x1_only(11), Var::X1);
        assert_eq!(
            g11.terms().map(|t| (t.0, t.2)).collect::<Vec<_>>(),
            vec![(2, [1, 0]), (10, [2, 0])]
        );
    }

    #[test]
    fn x2_variable_lands_in_x2_slot() {
        let r = ring();
        let f = f_series(r, Window::new(0, 5, 12), Var::X2);
        assert_eq!(f.terms().map(|t| (t.0, t.1)).collect::<Vec<_>>(), vec![(0, 1), (0, 9)]);
    }

    #[test]
    fn monomial_inverse() {
        let r = ring();
        let w = Window::new(-5, 5, 1);
        let x = TruncSeries::var(r, w, Var::X1);
        let xi = x.invert().unwrap();
        assert_eq!(xi, TruncSeries::monomial(r, w, r.one(), -1, 0));
    }

    #[test]
    fn laurent_inverse_with_p_divisible_tail() {
        let r = ring();
        let w = Window::new(-20, 20, 3);
        let mut u = TruncSeries::monomial(r, w, r.from_i64(3), -1, 0);
        u.add_term(0, 0, r.one());
        u.add_term(2, 1, r.from_i64(5));
        let ui = u.invert().unwrap();
        let prod = u.mul(&ui);
        for (a, b, c) in prod.terms() {
            if a > -10 && a < 10 {
                assert_eq!((a, b, c), (0, 0, r.one()), "stray term");
            }
        }
    }
}
