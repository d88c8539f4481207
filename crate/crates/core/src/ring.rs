//! Exact coefficient arithmetic: Gaussian integers, half-integers, and
//! Laurent polynomials in the variable `A`.
//!
//! Everything here is plain integer arithmetic; there are no floats and
//! no normalization beyond dropping zero terms. `phase` fixes the branch
//! `(-1)^(1/2) = i` once, so every half-integer power of `-1` in the
//! state sum is evaluated the same way.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use crate::Error;

/// Gaussian integer `re + im*i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct GaussianInt {
    pub re: i64,
    pub im: i64,
}

impl GaussianInt {
    pub const ZERO: GaussianInt = GaussianInt { re: 0, im: 0 };
    pub const ONE: GaussianInt = GaussianInt { re: 1, im: 0 };
    pub const I: GaussianInt = GaussianInt { re: 0, im: 1 };

    pub fn new(re: i64, im: i64) -> Self {
        GaussianInt { re, im }
    }

    pub fn is_zero(&self) -> bool {
        self.re == 0 && self.im == 0
    }

    pub fn conj(&self) -> Self {
        GaussianInt::new(self.re, -self.im)
    }
}

impl From<i64> for GaussianInt {
    fn from(re: i64) -> Self {
        GaussianInt::new(re, 0)
    }
}

impl Add for GaussianInt {
    type Output = GaussianInt;
    fn add(self, rhs: Self) -> Self {
        GaussianInt::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl Sub for GaussianInt {
    type Output = GaussianInt;
    fn sub(self, rhs: Self) -> Self {
        GaussianInt::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Neg for GaussianInt {
    type Output = GaussianInt;
    fn neg(self) -> Self {
        GaussianInt::new(-self.re, -self.im)
    }
}

impl Mul for GaussianInt {
    type Output = GaussianInt;
    fn mul(self, rhs: Self) -> Self {
        GaussianInt::new(
            self.re * rhs.re - self.im * rhs.im,
            self.re * rhs.im + self.im * rhs.re,
        )
    }
}

impl fmt::Display for GaussianInt {
    /// Canonical form `a+bi` with zero parts omitted: `0`, `3`, `-i`, `2i`, `3-2i`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re, self.im) {
            (0, 0) => write!(f, "0"),
            (re, 0) => write!(f, "{re}"),
            (0, im) => write!(f, "{}", imag_str(im)),
            (re, im) if im < 0 => write!(f, "{re}-{}", imag_str(-im).trim_start_matches('-')),
            (re, im) => write!(f, "{re}+{}", imag_str(im)),
        }
    }
}

fn imag_str(im: i64) -> String {
    match im {
        1 => "i".into(),
        -1 => "-i".into(),
        v => format!("{v}i"),
    }
}

/// Half-integer stored exactly as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HalfInt {
    twice: i64,
}

impl HalfInt {
    pub fn from_twice(twice: i64) -> Self {
        HalfInt { twice }
    }

    pub fn from_int(n: i64) -> Self {
        HalfInt { twice: 2 * n }
    }

    pub fn twice(&self) -> i64 {
        self.twice
    }

    pub fn is_integer(&self) -> bool {
        self.twice % 2 == 0
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: Self) -> Self {
        HalfInt::from_twice(self.twice + rhs.twice)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: Self) -> Self {
        HalfInt::from_twice(self.twice - rhs.twice)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> Self {
        HalfInt::from_twice(-self.twice)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

/// `(-1)^t` for half-integer `t`, with the fixed branch `(-1)^(1/2) = i`.
/// Periodic in `t` with period 2, i.e. in `twice(t)` with period 4.
pub fn phase(t: HalfInt) -> GaussianInt {
    match t.twice().rem_euclid(4) {
        0 => GaussianInt::ONE,
        1 => GaussianInt::I,
        2 => -GaussianInt::ONE,
        _ => -GaussianInt::I,
    }
}

/// Laurent polynomial in `A` with Gaussian-integer coefficients.
/// Canonical form: a sorted exponent map with no zero coefficients, so
/// structural equality is polynomial equality.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, GaussianInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::gauss(GaussianInt::ONE)
    }

    pub fn constant(n: i64) -> Self {
        LaurentPoly::gauss(GaussianInt::from(n))
    }

    pub fn gauss(c: GaussianInt) -> Self {
        LaurentPoly::monomial(0, c)
    }

    /// `c * A^exp`.
    pub fn monomial(exp: i64, c: GaussianInt) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        LaurentPoly { terms }
    }

    /// `A^exp`.
    pub fn var_pow(exp: i64) -> Self {
        LaurentPoly::monomial(exp, GaussianInt::ONE)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in descending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, GaussianInt)> + '_ {
        self.terms.iter().rev().map(|(&e, &c)| (e, c))
    }

    pub fn coeff(&self, exp: i64) -> GaussianInt {
        self.terms.get(&exp).copied().unwrap_or(GaussianInt::ZERO)
    }

    pub fn add_term(&mut self, exp: i64, c: GaussianInt) {
        let entry = self.terms.entry(exp).or_insert(GaussianInt::ZERO);
        *entry = *entry + c;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn scale(&self, c: GaussianInt) -> Self {
        let mut out = LaurentPoly::zero();
        for (e, v) in self.terms() {
            out.add_term(e, v * c);
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = LaurentPoly::one();
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// Substitute `A -> A^-1`.
    pub fn invert_variable(&self) -> Self {
        let mut out = LaurentPoly::zero();
        for (e, c) in self.terms() {
            out.add_term(-e, c);
        }
        out
    }

    /// Conjugate every coefficient.
    pub fn conj(&self) -> Self {
        let mut out = LaurentPoly::zero();
        for (e, c) in self.terms() {
            out.add_term(e, c.conj());
        }
        out
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        for (e, c) in rhs.terms() {
            self.add_term(e, c);
        }
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(mut self, rhs: LaurentPoly) -> LaurentPoly {
        self += &rhs;
        self
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        &self - &rhs
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(-GaussianInt::ONE)
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in rhs.terms() {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

/// Sum of a term's printable pieces: sign to hoist, then the body without it.
fn term_pieces(exp: i64, c: GaussianInt) -> (bool, String) {
    let a_part = match exp {
        0 => None,
        1 => Some("A".to_string()),
        e => Some(format!("A^{e}")),
    };
    // Mixed coefficients keep their sign inside parentheses; pure real or
    // pure imaginary coefficients hoist the sign into the separator.
    let (neg, coeff) = match (c.re, c.im) {
        (re, 0) => (re < 0, {
            let m = re.abs();
            if m == 1 && a_part.is_some() {
                None
            } else {
                Some(format!("{m}"))
            }
        }),
        (0, im) => (im < 0, {
            let m = im.abs();
            if m == 1 {
                Some("i".to_string())
            } else {
                Some(format!("{m}i"))
            }
        }),
        _ => (false, Some(format!("({c})"))),
    };
    let body = match (coeff, a_part) {
        (Some(c), Some(a)) => format!("{c}*{a}"),
        (Some(c), None) => c,
        (None, Some(a)) => a,
        (None, None) => unreachable!("constant term always renders a coefficient"),
    };
    (neg, body)
}

impl fmt::Display for LaurentPoly {
    /// Canonical text: terms in descending exponent order, e.g.
    /// `-A^2 - A^-2`, `-i*A + i*A^-1`, `2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.terms().enumerate() {
            let (neg, body) = term_pieces(e, c);
            if idx == 0 {
                write!(f, "{}{}", if neg { "-" } else { "" }, body)?;
            } else {
                write!(f, " {} {}", if neg { "-" } else { "+" }, body)?;
            }
        }
        Ok(())
    }
}

impl FromStr for LaurentPoly {
    type Err = Error;

    /// Parse the canonical text form (and unambiguous variants of it).
    fn from_str(s: &str) -> Result<Self, Error> {
        let err = |msg: &str| Error::PolyParse(format!("{msg} in `{s}`"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err("empty input"));
        }
        // Split into signed terms at top-level +/-; a sign directly after
        // '^' or '(' belongs to a number, not to a term boundary.
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut cur_neg = false;
        let mut depth = 0usize;
        let mut prev: Option<char> = None;
        for ch in compact.chars() {
            match ch {
                '(' => {
                    depth += 1;
                    cur.push(ch);
                }
                ')' => {
                    depth = depth.checked_sub(1).ok_or_else(|| err("unbalanced parens"))?;
                    cur.push(ch);
                }
                '+' | '-' if depth == 0 && prev != Some('^') => {
                    if cur.is_empty() {
                        if prev.is_some() {
                            return Err(err("dangling sign"));
                        }
                        cur_neg = ch == '-';
                    } else {
                        terms.push((cur_neg, std::mem::take(&mut cur)));
                        cur_neg = ch == '-';
                    }
                }
                _ => cur.push(ch),
            }
            prev = Some(ch);
        }
        if depth != 0 {
            return Err(err("unbalanced parens"));
        }
        if cur.is_empty() {
            return Err(err("dangling sign"));
        }
        terms.push((cur_neg, cur));

        let mut out = LaurentPoly::zero();
        for (neg, body) in terms {
            let (coeff_str, exp) = match body.find('A') {
                None => (body.as_str(), 0),
                Some(pos) => {
                    let (head, tail) = body.split_at(pos);
                    let head = head.strip_suffix('*').unwrap_or(head);
                    let exp = match &tail[1..] {
                        "" => 1,
                        t => t
                            .strip_prefix('^')
                            .and_then(|v| v.parse::<i64>().ok())
                            .ok_or_else(|| err("bad exponent"))?,
                    };
                    (head, exp)
                }
            };
            let mut c = parse_gauss(coeff_str).ok_or_else(|| err("bad coefficient"))?;
            if neg {
                c = -c;
            }
            out.add_term(exp, c);
        }
        Ok(out)
    }
}

/// Parse `""` (implicit 1), `7`, `i`, `2i`, `(3+2i)`, `(3-i)`.
fn parse_gauss(s: &str) -> Option<GaussianInt> {
    if s.is_empty() {
        return Some(GaussianInt::ONE);
    }
    if let Some(inner) = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
        // Split at the sign of the imaginary part (skip a leading sign).
        let pivot = inner
            .char_indices()
            .skip(1)
            .find(|(_, c)| *c == '+' || *c == '-')
            .map(|(i, _)| i)?;
        let re: i64 = inner[..pivot].parse().ok()?;
        let im_part = &inner[pivot..];
        let im = parse_imag(im_part)?;
        return Some(GaussianInt::new(re, im));
    }
    if s.ends_with('i') {
        return parse_imag(s).map(|im| GaussianInt::new(0, im));
    }
    s.parse::<i64>().ok().map(GaussianInt::from)
}

/// Parse `i`, `-i`, `+3i`, `12i`.
fn parse_imag(s: &str) -> Option<i64> {
    let body = s.strip_suffix('i')?;
    match body {
        "" | "+" => Some(1),
        "-" => Some(-1),
        v => v.parse().ok(),
    }
}
