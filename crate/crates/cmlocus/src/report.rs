//! Text rendering of series and scalars.

use crate::padic::Raw;
use crate::series::TruncSeries;

/// Signed representative of a coefficient as "a", "b*w" or "(a+b*w)".
pub fn coeff_string(c: [i64; 2]) -> String {
    match c {
        [a, 0] => a.to_string(),
        [0, b] => format!("{b}*w"),
        [a, b] => format!("({a}{b:+}*w)"),
    }
}

fn signed(s: &TruncSeries, c: Raw) -> [i64; 2] {
    s.ring().scalar(c).signed()
}

fn monomial(e1: i64, e2: u32) -> String {
    let mut parts = Vec::new();
    match e1 {
        0 => {}
        1 => parts.push("x1".to_string()),
        e => parts.push(format!("x1^{e}")),
    }
    match e2 {
        0 => {}
        1 => parts.push("x2".to_string()),
        e => parts.push(format!("x2^{e}")),
    }
    parts.join("*")
}

/// Human-readable polynomial, terms ordered by (x2, x1) degree.
pub fn poly_string(s: &TruncSeries) -> String {
    if s.is_zero() {
        return "0".into();
    }
    let mut terms: Vec<_> = s.terms().collect();
    terms.sort_by_key(|t| (t.1, t.0));
    let mut out = String::new();
    for (i, (e1, e2, c)) in terms.into_iter().enumerate() {
        let c = signed(s, c);
        let m = monomial(e1, e2);
        let (neg, mag) = match c {
            [a, 0] if a < 0 => (true, [-a, 0]),
            [0, b] if b < 0 => (true, [0, -b]),
            _ => (false, c),
        };
        if i > 0 {
            out.push_str(if neg { " - " } else { " + " });
        } else if neg {
            out.push('-');
        }
        let cs = coeff_string(mag);
        if m.is_empty() {
            out.push_str(&cs);
        } else if mag == [1, 0] {
            out.push_str(&m);
        } else {
            out.push_str(&format!("{cs}*{m}"));
        }
    }
    out
}

/// A disagreement between a computed value and a displayed statement.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Erratum {
    pub topic: String,
    pub detail: String,
}

/// Like [`poly_string`], keeping only terms with x1-exponent below `x1_end`.
pub fn poly_string_below(s: &TruncSeries, x1_end: i64) -> String {
    let mut t = TruncSeries::zero(s.ring(), s.window());
    for (e1, e2, c) in s.terms().filter(|t| t.0 < x1_end) {
        t.add_term(e1, e2, c);
    }
    poly_string(&t)
}
