//! Exact multivariate rational functions with a syntactic positivity
//! certificate.
//!
//! A `RatFunc` is a pair of canonical polynomials. No multivariate gcd is
//! taken; equality is decided by cross-multiplication, which never depends
//! on reduction. A cheap content pass (rational content plus per-variable
//! monomial content shared by numerator and denominator) bounds growth.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::poly::Poly;
use crate::Result;

pub use crate::poly::Rat;

/// Exact rational function `num/den` over `arity` variables.
///
/// `positive` is a syntactic certificate: it is set only when the value was
/// built from variables and positive constants using `add`, `mul`, `div`
/// alone. It certifies that the function is subtraction-free; it is not a
/// decision procedure.
#[derive(Debug, Clone)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
    positive: bool,
}

impl RatFunc {
    fn make(num: Poly, den: Poly, positive: bool) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZeroFunction);
        }
        let mut f = RatFunc { num, den, positive };
        f.normalize();
        Ok(f)
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den = Poly::one(self.den.arity());
            self.positive = false;
            return;
        }
        // Shared monomial content.
        for v in 0..self.num.arity() {
            let e = self.num.min_exponent(v).min(self.den.min_exponent(v));
            if e > 0 {
                self.num = self.num.shift_down(v, e);
                self.den = self.den.shift_down(v, e);
            }
        }
        // Joint rational content; keep the denominator's leading coefficient positive.
        let mut scale = self.den.content();
        if self
            .den
            .leading()
            .map(|(_, c)| c.is_negative())
            .unwrap_or(false)
        {
            scale = -scale;
        }
        self.den = self.den.map_coeffs(|c| c / &scale);
        self.num = self.num.map_coeffs(|c| c / &scale);
        if self.num == self.den {
            self.num = Poly::one(self.num.arity());
            self.den = Poly::one(self.den.arity());
        }
    }

    pub fn arity(&self) -> usize {
        self.num.arity()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_certified_positive(&self) -> bool {
        self.positive
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    pub fn zero(arity: usize) -> Self {
        RatFunc {
            num: Poly::zero(arity),
            den: Poly::one(arity),
            positive: false,
        }
    }

    pub fn one(arity: usize) -> Self {
        Self::constant(arity, Rat::one())
    }

    pub fn constant(arity: usize, c: Rat) -> Self {
        let positive = c.is_positive();
        RatFunc {
            num: Poly::constant(arity, c),
            den: Poly::one(arity),
            positive,
        }
    }

    pub fn int(arity: usize, n: i64) -> Self {
        Self::constant(arity, Rat::from_integer(n.into()))
    }

    pub fn var(arity: usize, idx: usize) -> Self {
        RatFunc {
            num: Poly::var(arity, idx),
            den: Poly::one(arity),
            positive: true,
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        let positive = !p.is_zero() && p.all_coeffs_positive();
        let arity = p.arity();
        RatFunc {
            num: p,
            den: Poly::one(arity),
            positive,
        }
    }

    /// Laurent monomial `coef * prod(v_i^{e_i})` with possibly negative exponents.
    pub fn laurent_monomial(arity: usize, exps: &[i64], coef: Rat) -> Self {
        assert_eq!(exps.len(), arity);
        let pos: Vec<u32> = exps.iter().map(|&e| e.max(0) as u32).collect();
        let neg: Vec<u32> = exps.iter().map(|&e| (-e).max(0) as u32).collect();
        let positive = coef.is_positive();
        RatFunc {
            num: Poly::monomial(arity, pos, coef),
            den: Poly::monomial(arity, neg, Rat::one()),
            positive,
        }
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        // Adding an exact zero keeps the other operand (and its
        // positivity certificate) intact.
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let num = self
            .num
            .mul(&other.den)
            .add(&other.num.mul(&self.den));
        let den = self.den.mul(&other.den);
        let positive = self.positive && other.positive;
        RatFunc::make(num, den, positive).expect("denominator product is nonzero")
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc::make(self.num.neg(), self.den.clone(), false).expect("den unchanged")
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        let positive = self.positive && other.positive;
        RatFunc::make(
            self.num.mul(&other.num),
            self.den.mul(&other.den),
            positive,
        )
        .expect("denominator product is nonzero")
    }

    pub fn div(&self, other: &RatFunc) -> Result<RatFunc> {
        if other.num.is_zero() {
            return Err(Error::DivisionByZeroFunction);
        }
        let positive = self.positive && other.positive;
        RatFunc::make(
            self.num.mul(&other.den),
            self.den.mul(&other.num),
            positive,
        )
    }

    pub fn inv(&self) -> Result<RatFunc> {
        RatFunc::one(self.arity()).div(self)
    }

    pub fn pow(&self, e: i64) -> Result<RatFunc> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = RatFunc::one(self.arity());
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// Exact equality via cross-multiplication of canonical forms.
    pub fn equals(&self, other: &RatFunc) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }

    /// Compose: substitute `images[i]` for variable `i`. All images must
    /// share one arity, which becomes the arity of the result.
    pub fn substitute(&self, images: &[RatFunc]) -> Result<RatFunc> {
        assert_eq!(images.len(), self.arity(), "image count mismatch");
        let out_arity = images
            .first()
            .map(|f| f.arity())
            .unwrap_or(0);
        let num = eval_poly_at_ratfuncs(&self.num, images, out_arity);
        let den = eval_poly_at_ratfuncs(&self.den, images, out_arity);
        if den.num.is_zero() {
            return Err(Error::DivisionByZeroFunction);
        }
        let positive = self.positive && images.iter().all(|f| f.positive);
        let mut out = num.div(&den)?;
        out.positive = positive;
        Ok(out)
    }

    /// Exact value at a rational point.
    pub fn eval(&self, point: &[Rat]) -> Result<Rat> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return Err(Error::PoleAtPoint);
        }
        Ok(self.num.eval(point) / d)
    }

    /// Reinterpret over a larger variable set, mapping old variable `i`
    /// to new variable `map[i]`.
    pub fn remap(&self, arity: usize, map: &[usize]) -> RatFunc {
        RatFunc {
            num: self.num.remap(arity, map),
            den: self.den.remap(arity, map),
            positive: self.positive,
        }
    }

    /// Valuation of a univariate Laurent rational function: the lowest
    /// exponent of the numerator minus that of the denominator.
    pub fn lowest_degree(&self) -> Result<i64> {
        assert_eq!(self.arity(), 1, "lowest_degree needs a univariate function");
        if self.num.is_zero() {
            return Err(Error::ZeroFunction);
        }
        Ok(self.num.min_exponent(0) as i64 - self.den.min_exponent(0) as i64)
    }

    pub fn term_count(&self) -> usize {
        self.num.term_count() + self.den.term_count()
    }
}

fn eval_poly_at_ratfuncs(p: &Poly, images: &[RatFunc], out_arity: usize) -> RatFunc {
    let mut acc = RatFunc::zero(out_arity);
    for (m, c) in p.terms() {
        let mut t = RatFunc::constant(out_arity, c.clone());
        for (i, &e) in m.0.iter().enumerate() {
            if e > 0 {
                t = t.mul(&images[i].pow(e as i64).expect("nonnegative power"));
            }
        }
        acc = acc.add(&t);
    }
    acc
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

// ---------------------------------------------------------------------------
// Textual serialization: fully parenthesized `+ - * / ^` expressions.
// ---------------------------------------------------------------------------

fn fmt_poly(p: &Poly, names: &[String], out: &mut String) {
    if p.is_zero() {
        out.push('0');
        return;
    }
    // Highest term first for readability; order is canonical either way.
    for (k, (m, c)) in p.terms().collect::<Vec<_>>().into_iter().rev().enumerate() {
        let neg = c.is_negative();
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else if neg {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        let abs = c.abs();
        let is_const_mon = m.total_degree() == 0;
        let mut wrote_coef = false;
        if !abs.is_one() || is_const_mon {
            if abs.denom().is_one() {
                out.push_str(&abs.numer().to_string());
            } else {
                out.push_str(&format!("{}/{}", abs.numer(), abs.denom()));
            }
            wrote_coef = true;
        }
        let mut first = !wrote_coef;
        for (i, &e) in m.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                out.push('*');
            }
            first = false;
            out.push_str(&names[i]);
            if e > 1 {
                out.push_str(&format!("^{e}"));
            }
        }
    }
}

impl RatFunc {
    /// Render with the given variable names; parses back exactly.
    pub fn to_text(&self, names: &[String]) -> String {
        assert_eq!(names.len(), self.arity());
        let mut num = String::new();
        fmt_poly(&self.num, names, &mut num);
        if self.den.is_one() {
            format!("({num})")
        } else {
            let mut den = String::new();
            fmt_poly(&self.den, names, &mut den);
            format!("(({num})/({den}))")
        }
    }

    pub fn parse(text: &str, names: &[String]) -> Result<RatFunc> {
        Parser::new(text, names)?.parse_all()
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.arity()).map(|i| format!("z{}", i + 1)).collect();
        write!(f, "{}", self.to_text(&names))
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rat),
    Var(usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    arity: usize,
}

impl Parser {
    fn new(text: &str, names: &[String]) -> Result<Parser> {
        let mut toks = Vec::new();
        let bytes = text.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i] as char;
            match c {
                ' ' | '\t' | '\n' => i += 1,
                '+' => {
                    toks.push(Tok::Plus);
                    i += 1;
                }
                '-' => {
                    toks.push(Tok::Minus);
                    i += 1;
                }
                '*' => {
                    toks.push(Tok::Star);
                    i += 1;
                }
                '/' => {
                    toks.push(Tok::Slash);
                    i += 1;
                }
                '^' => {
                    toks.push(Tok::Caret);
                    i += 1;
                }
                '(' => {
                    toks.push(Tok::LParen);
                    i += 1;
                }
                ')' => {
                    toks.push(Tok::RParen);
                    i += 1;
                }
                '0'..='9' => {
                    let start = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    let n: num_bigint::BigInt = text[start..i]
                        .parse()
                        .map_err(|_| Error::Parse("bad integer".into()))?;
                    toks.push(Tok::Num(Rat::from_integer(n)));
                }
                c if c.is_alphabetic() || c == '_' => {
                    let start = i;
                    while i < bytes.len()
                        && ((bytes[i] as char).is_alphanumeric() || bytes[i] == b'_')
                    {
                        i += 1;
                    }
                    let name = &text[start..i];
                    let idx = names
                        .iter()
                        .position(|n| n == name)
                        .ok_or_else(|| Error::Parse(format!("unknown variable `{name}`")))?;
                    toks.push(Tok::Var(idx));
                }
                other => return Err(Error::Parse(format!("unexpected character `{other}`"))),
            }
        }
        Ok(Parser {
            toks,
            pos: 0,
            arity: names.len(),
        })
    }

    fn parse_all(&mut self) -> Result<RatFunc> {
        let f = self.expr()?;
        if self.pos != self.toks.len() {
            return Err(Error::Parse("trailing tokens".into()));
        }
        Ok(f)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn expr(&mut self) -> Result<RatFunc> {
        let mut acc = if matches!(self.peek(), Some(Tok::Minus)) {
            self.pos += 1;
            self.term()?.neg()
        } else {
            self.term()?
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RatFunc> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    acc = acc.div(&self.factor()?)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<RatFunc> {
        let base = match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                RatFunc::constant(self.arity, n)
            }
            Some(Tok::Var(i)) => {
                self.pos += 1;
                RatFunc::var(self.arity, i)
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if !matches!(self.peek(), Some(Tok::RParen)) {
                    return Err(Error::Parse("expected `)`".into()));
                }
                self.pos += 1;
                inner
            }
            Some(Tok::Minus) => {
                self.pos += 1;
                self.factor()?.neg()
            }
            _ => return Err(Error::Parse("expected a factor".into())),
        };
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.pos += 1;
            let neg = if matches!(self.peek(), Some(Tok::Minus)) {
                self.pos += 1;
                true
            } else {
                false
            };
            match self.peek().cloned() {
                Some(Tok::Num(n)) if n.denom().is_one() => {
                    self.pos += 1;
                    let mut e: i64 = n
                        .numer()
                        .try_into()
                        .map_err(|_| Error::Parse("exponent too large".into()))?;
                    if neg {
                        e = -e;
                    }
                    return base.pow(e);
                }
                _ => return Err(Error::Parse("expected an integer exponent".into())),
            }
        }
        Ok(base)
    }
}

/// Convenience: build the identity tuple `(z_1, ..., z_m)` over `arity` vars.
pub fn identity_tuple(arity: usize) -> Vec<RatFunc> {
    (0..arity).map(|i| RatFunc::var(arity, i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(arity: usize, i: usize) -> RatFunc {
        RatFunc::var(arity, i)
    }

    fn q(n: i64) -> Rat {
        Rat::from_integer(n.into())
    }

    #[test]
    fn sum_of_variables_is_certified_positive() {
        let f = v(2, 0).add(&v(2, 1));
        assert!(f.is_certified_positive());
    }

    #[test]
    fn cancellation_forfeits_certificate() {
        let f = v(1, 0).sub(&v(1, 0));
        assert!(f.is_zero());
        assert!(!f.is_certified_positive());
    }

    #[test]
    fn unreduced_equality() {
        // (x^2 - 1)/(x - 1) is stored unreduced but equals x + 1.
        let x = v(1, 0);
        let one = RatFunc::one(1);
        let f = x.mul(&x).sub(&one).div(&x.sub(&one)).unwrap();
        assert!(f.num().term_count() == 2);
        assert!(f.equals(&x.add(&one)));
        assert!(!v(2, 0).div(&v(2, 1)).unwrap().equals(&v(2, 1).div(&v(2, 0)).unwrap()));
    }

    #[test]
    fn substitute_examples() {
        // x*y at (c*z, z) -> c*z^2 over (c, z)
        let f = v(2, 0).mul(&v(2, 1));
        let c = v(2, 0);
        let z = v(2, 1);
        let g = f.substitute(&[c.mul(&z), z.clone()]).unwrap();
        assert!(g.equals(&c.mul(&z).mul(&z)));

        // 1/(x+1) at (x-1) -> 1/x
        let h = RatFunc::one(1)
            .div(&v(1, 0).add(&RatFunc::one(1)))
            .unwrap()
            .substitute(&[v(1, 0).sub(&RatFunc::one(1))])
            .unwrap();
        assert!(h.equals(&v(1, 0).inv().unwrap()));

        // (x+y)/x at (u*v, u) -> (uv+u)/(uv)
        let f = v(2, 0).add(&v(2, 1)).div(&v(2, 0)).unwrap();
        let u = v(2, 0);
        let w = v(2, 1);
        let g = f.substitute(&[u.mul(&w), u.clone()]).unwrap();
        let expect = u.mul(&w).add(&u).div(&u.mul(&w)).unwrap();
        assert!(g.equals(&expect));
    }

    #[test]
    fn eval_and_poles() {
        let f = v(2, 0).div(&v(2, 1)).unwrap();
        assert_eq!(f.eval(&[q(1), q(2)]).unwrap(), Rat::new(1.into(), 2.into()));
        let g = RatFunc::one(1)
            .div(&v(1, 0).sub(&RatFunc::one(1)))
            .unwrap();
        assert_eq!(g.eval(&[q(1)]), Err(Error::PoleAtPoint));
        let h = v(2, 0).pow(2).unwrap().add(&v(2, 1));
        assert_eq!(h.eval(&[q(2), q(3)]).unwrap(), q(7));
    }

    #[test]
    fn lowest_degree_examples() {
        let c = v(1, 0);
        // (c^2 + c^3)/c -> 1
        let f = c.pow(2).unwrap().add(&c.pow(3).unwrap()).div(&c).unwrap();
        assert_eq!(f.lowest_degree().unwrap(), 1);
        // 1/(c + c^2) -> -1
        let g = RatFunc::one(1)
            .div(&c.add(&c.pow(2).unwrap()))
            .unwrap();
        assert_eq!(g.lowest_degree().unwrap(), -1);
        // constant 5 -> 0
        assert_eq!(RatFunc::int(1, 5).lowest_degree().unwrap(), 0);
        assert_eq!(RatFunc::zero(1).lowest_degree(), Err(Error::ZeroFunction));
    }

    #[test]
    fn division_by_zero_function() {
        assert_eq!(
            v(1, 0).div(&RatFunc::zero(1)),
            Err(Error::DivisionByZeroFunction)
        );
    }

    #[test]
    fn text_round_trip() {
        let names: Vec<String> = vec!["x".into(), "y".into()];
        let f = v(2, 0)
            .pow(2)
            .unwrap()
            .sub(&RatFunc::constant(2, Rat::new(3.into(), 2.into())))
            .div(&v(2, 1).add(&RatFunc::one(2)))
            .unwrap();
        let text = f.to_text(&names);
        let g = RatFunc::parse(&text, &names).unwrap();
        assert_eq!(g.num(), f.num());
        assert_eq!(g.den(), f.den());
    }
}
