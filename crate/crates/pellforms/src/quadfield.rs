//! Exact arithmetic in quadratic fields Q(sqrt(m)).
//!
//! A [`QElem`] stores `(p + q*sqrt(m)) / r` with canonical invariants
//! `r >= 1`, `gcd(p, q, r) = 1`, and `m` squarefree. Purely rational values
//! drop the radicand entirely (`q = 0` forces the sentinel), so rationals
//! compose with elements of any quadratic field. Combining two elements of
//! distinct irrational fields is an error; this crate never builds
//! biquadratic extensions.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::intarith::{is_perfect_square, isqrt, square_part};

/// Element of Q or of a quadratic field Q(sqrt(m)).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QElem {
    /// Radicand; `None` for purely rational values.
    m: Option<BigInt>,
    p: BigInt,
    q: BigInt,
    r: BigInt,
}

impl QElem {
    /// Canonicalize raw data: extract square factors from `m`, clear the
    /// radicand when `q = 0`, normalize signs and content.
    fn canonical(m: Option<BigInt>, mut p: BigInt, mut q: BigInt, mut r: BigInt) -> Result<Self> {
        if r.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut m = if q.is_zero() { None } else { m };
        if let Some(rad) = m.take() {
            if rad.is_zero() || rad.is_one() {
                // sqrt(0) = 0, sqrt(1) = 1 fold into the rational part
                if rad.is_zero() {
                    q = BigInt::zero();
                } else {
                    p += &q;
                    q = BigInt::zero();
                }
            } else {
                let (s, core) = square_part(&rad)?;
                q *= s;
                if core.is_one() {
                    p += &q;
                    q = BigInt::zero();
                } else {
                    m = Some(core);
                }
            }
        }
        if q.is_zero() {
            m = None;
        }
        if r.is_negative() {
            p = -p;
            q = -q;
            r = -r;
        }
        let g = p.gcd(&q).gcd(&r);
        if !g.is_one() && !g.is_zero() {
            p /= &g;
            q /= &g;
            r /= &g;
        }
        if p.is_zero() && q.is_zero() {
            r = BigInt::one();
        }
        Ok(QElem { m, p, q, r })
    }

    /// `(p + q*sqrt(m)) / r`, canonicalized. `m` may carry square factors.
    pub fn new(m: BigInt, p: BigInt, q: BigInt, r: BigInt) -> Result<Self> {
        Self::canonical(Some(m), p, q, r)
    }

    /// Rational value `p / r`.
    pub fn rational(p: BigInt, r: BigInt) -> Result<Self> {
        Self::canonical(None, p, BigInt::zero(), r)
    }

    pub fn from_int(p: impl Into<BigInt>) -> Self {
        QElem {
            m: None,
            p: p.into(),
            q: BigInt::zero(),
            r: BigInt::one(),
        }
    }

    /// `sqrt(m)` as a field element.
    pub fn sqrt_of(m: impl Into<BigInt>) -> Result<Self> {
        Self::canonical(Some(m.into()), BigInt::zero(), BigInt::one(), BigInt::one())
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.q.is_zero() && self.r.is_one() && self.p.is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.m.is_none()
    }

    /// Radicand of the smallest field containing this element, if irrational.
    pub fn radicand(&self) -> Option<&BigInt> {
        self.m.as_ref()
    }

    /// The value as a rational integer, when it is one.
    pub fn as_int(&self) -> Option<BigInt> {
        (self.q.is_zero() && self.r.is_one()).then(|| self.p.clone())
    }

    /// The value as an exact rational, when it is rational.
    pub fn as_rational(&self) -> Option<BigRational> {
        self.m
            .is_none()
            .then(|| BigRational::new(self.p.clone(), self.r.clone()))
    }

    pub fn numer_p(&self) -> &BigInt {
        &self.p
    }

    pub fn numer_q(&self) -> &BigInt {
        &self.q
    }

    pub fn denom_r(&self) -> &BigInt {
        &self.r
    }

    /// Common radicand of two operands, or `MixedFields`.
    fn join(&self, other: &QElem) -> Result<Option<BigInt>> {
        match (&self.m, &other.m) {
            (Some(a), Some(b)) if a != b => {
                Err(Error::MixedFields(a.to_string(), b.to_string()))
            }
            (Some(a), _) => Ok(Some(a.clone())),
            (_, Some(b)) => Ok(Some(b.clone())),
            (None, None) => Ok(None),
        }
    }

    pub fn add(&self, other: &QElem) -> Result<QElem> {
        let m = self.join(other)?;
        QElem::canonical(
            m,
            &self.p * &other.r + &other.p * &self.r,
            &self.q * &other.r + &other.q * &self.r,
            &self.r * &other.r,
        )
    }

    pub fn sub(&self, other: &QElem) -> Result<QElem> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> QElem {
        QElem {
            m: self.m.clone(),
            p: -&self.p,
            q: -&self.q,
            r: self.r.clone(),
        }
    }

    pub fn mul(&self, other: &QElem) -> Result<QElem> {
        let m = self.join(other)?;
        let mm = m.clone().unwrap_or_else(BigInt::zero);
        QElem::canonical(
            m,
            &self.p * &other.p + &self.q * &other.q * &mm,
            &self.p * &other.q + &self.q * &other.p,
            &self.r * &other.r,
        )
    }

    pub fn div(&self, other: &QElem) -> Result<QElem> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let m = self.join(other)?;
        // 1/((p + q sqrt(m))/r) = r (p - q sqrt(m)) / (p^2 - q^2 m)
        let mm = m.clone().unwrap_or_else(BigInt::zero);
        let nrm = &other.p * &other.p - &other.q * &other.q * &mm;
        let inv = QElem::canonical(
            m,
            &other.r * &other.p,
            -(&other.r * &other.q),
            nrm,
        )?;
        self.mul(&inv)
    }

    pub fn mul_int(&self, k: &BigInt) -> QElem {
        QElem::canonical(self.m.clone(), &self.p * k, &self.q * k, self.r.clone())
            .expect("integer scaling cannot fail")
    }

    pub fn div_int(&self, k: &BigInt) -> Result<QElem> {
        if k.is_zero() {
            return Err(Error::DivisionByZero);
        }
        QElem::canonical(self.m.clone(), self.p.clone(), self.q.clone(), &self.r * k)
    }

    /// Nontrivial field automorphism: `(p + q sqrt(m))/r -> (p - q sqrt(m))/r`.
    pub fn conj(&self) -> QElem {
        QElem {
            m: self.m.clone(),
            p: self.p.clone(),
            q: -&self.q,
            r: self.r.clone(),
        }
    }

    /// Product of the roots of the minimum polynomial: `a * conj(a)` for
    /// irrational `a`, and `a` itself for rational `a` (degree one).
    pub fn norm(&self) -> BigRational {
        if self.m.is_none() {
            BigRational::new(self.p.clone(), self.r.clone())
        } else {
            self.field_norm()
        }
    }

    /// Norm relative to the ambient quadratic field: always `a * conj(a)`,
    /// i.e. `a^2` for rational `a`.
    pub fn field_norm(&self) -> BigRational {
        let mm = self.m.clone().unwrap_or_else(BigInt::zero);
        BigRational::new(
            &self.p * &self.p - &self.q * &self.q * &mm,
            &self.r * &self.r,
        )
    }

    /// Is `n * self` an algebraic integer? Exact trace/norm criterion.
    fn is_integral_multiple(&self, n: &BigInt) -> bool {
        if self.q.is_zero() {
            return (n * &self.p).mod_floor(&self.r).is_zero();
        }
        // trace(n a) = 2 n p / r, norm(n a) = n^2 (p^2 - q^2 m) / r^2
        let tr_num = BigInt::from(2) * n * &self.p;
        if !tr_num.mod_floor(&self.r).is_zero() {
            return false;
        }
        let m = self.m.as_ref().expect("irrational");
        let nm_num = n * n * (&self.p * &self.p - &self.q * &self.q * m);
        nm_num.mod_floor(&(&self.r * &self.r)).is_zero()
    }

    /// den(a): least positive integer `n` with `n * a` an algebraic integer.
    ///
    /// It divides the canonical `r`; per prime power `l^e || r` the needed
    /// valuation is `e - min(v_l(2p), floor(v_l(p^2 - q^2 m)/2))`, clamped
    /// at 0, so the answer follows from the factorization of `r`.
    pub fn den(&self) -> BigInt {
        if self.is_zero() {
            return BigInt::one();
        }
        if self.q.is_zero() {
            return self.r.clone();
        }
        let m = self.m.as_ref().expect("irrational");
        let two_p = BigInt::from(2) * &self.p;
        let nrm = &self.p * &self.p - &self.q * &self.q * m;
        let mut den = BigInt::one();
        for (l, e) in crate::intarith::factorize(&self.r) {
            let v_trace = crate::intarith::valuation(&two_p, &l).unwrap_or(e);
            let v_norm = crate::intarith::valuation(&nrm, &l).map(|v| v / 2).unwrap_or(e);
            let needed = e.saturating_sub(v_trace.min(v_norm));
            den *= l.pow(needed);
        }
        debug_assert!(self.is_integral_multiple(&den));
        den
    }

    /// Is the element an algebraic integer?
    pub fn is_integral(&self) -> bool {
        self.is_integral_multiple(&BigInt::one())
    }

    /// Coordinates `(s, t)` of an algebraic integer in the basis
    /// `{1, omega}` of the ring of integers of its field, where
    /// `omega = (1 + sqrt(m))/2` for `m = 1 (mod 4)` and `sqrt(m)` otherwise.
    /// Rational integers report `(p, 0)`. `None` for non-integers.
    pub fn integral_coords(&self) -> Option<(BigInt, BigInt)> {
        match &self.m {
            None => (self.r.is_one()).then(|| (self.p.clone(), BigInt::zero())),
            Some(m) => {
                let half_basis = m.mod_floor(&BigInt::from(4)).is_one();
                if self.r.is_one() {
                    if half_basis {
                        // p + q sqrt(m) = (p - q) + 2q * omega
                        Some((&self.p - &self.q, BigInt::from(2) * &self.q))
                    } else {
                        Some((self.p.clone(), self.q.clone()))
                    }
                } else if self.r == BigInt::from(2) && half_basis {
                    // (p + q sqrt(m))/2 integral iff p = q (mod 2)
                    ((&self.p - &self.q).mod_floor(&BigInt::from(2)).is_zero())
                        .then(|| ((&self.p - &self.q) / BigInt::from(2), self.q.clone()))
                } else {
                    None
                }
            }
        }
    }

    /// Build `s + t*omega` in the ring of integers of Q(sqrt(m)).
    pub fn from_integral_coords(m: &BigInt, s: &BigInt, t: &BigInt) -> Result<QElem> {
        if m.mod_floor(&BigInt::from(4)).is_one() {
            // s + t (1 + sqrt(m))/2 = (2s + t + t sqrt(m)) / 2
            QElem::new(
                m.clone(),
                BigInt::from(2) * s + t,
                t.clone(),
                BigInt::from(2),
            )
        } else {
            QElem::new(m.clone(), s.clone(), t.clone(), BigInt::one())
        }
    }

    /// Square root inside Q(sqrt(ambient)), if one exists there.
    ///
    /// Rational inputs may acquire an irrational square root `d*sqrt(ambient)`;
    /// irrational inputs must already live in the ambient field.
    pub fn sqrt_in(&self, ambient: &BigInt) -> Option<QElem> {
        if self.is_zero() {
            return Some(QElem::zero());
        }
        match &self.m {
            None => {
                if let Some(w) = rational_sqrt(&self.p, &self.r) {
                    return Some(w);
                }
                // (d sqrt(m))^2 = d^2 m: need self/m a rational square
                let d2_num = &self.p * ambient;
                let d2_den = &self.r * ambient * ambient;
                let d = rational_sqrt(&d2_num, &d2_den)?;
                let w = QElem::canonical(Some(ambient.clone()), BigInt::zero(), d.p, d.r).ok()?;
                (w.mul(&w).ok()? == *self).then_some(w)
            }
            Some(m) => {
                if m != ambient {
                    return None;
                }
                // w = c + d sqrt(m): c^2 = (p +- s)/(2r) with s^2 = p^2 - q^2 m
                let s2 = &self.p * &self.p - &self.q * &self.q * m;
                if !is_perfect_square(&s2) {
                    return None;
                }
                let s = isqrt(&s2);
                let two_r = BigInt::from(2) * &self.r;
                for sign in [1, -1] {
                    let c2_num = &self.p + BigInt::from(sign) * &s;
                    let Some(c) = rational_sqrt(&c2_num, &two_r) else {
                        continue;
                    };
                    if c.is_zero() {
                        continue;
                    }
                    // d = q / (2 r c)
                    let d_num = QElem::rational(self.q.clone(), &self.r * BigInt::from(2)).ok()?;
                    let d = d_num.div(&c).ok()?;
                    let w = QElem::canonical(
                        Some(m.clone()),
                        &c.p * &d.r,
                        &d.p * &c.r,
                        &c.r * &d.r,
                    )
                    .ok()?;
                    if w.mul(&w).ok()? == *self {
                        return Some(w);
                    }
                }
                None
            }
        }
    }
}

/// Rational square root of `num/den` as a rational QElem, when it exists.
fn rational_sqrt(num: &BigInt, den: &BigInt) -> Option<QElem> {
    if num.is_zero() {
        return Some(QElem::zero());
    }
    let prod = num * den;
    if prod.is_negative() || !is_perfect_square(&prod) {
        return None;
    }
    Some(QElem::rational(isqrt(&prod), den.abs()).expect("den != 0"))
}

impl fmt::Display for QElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q.is_zero() {
            if self.r.is_one() {
                return write!(f, "{}", self.p);
            }
            return write!(f, "{}/{}", self.p, self.r);
        }
        let m = self.m.as_ref().expect("irrational");
        let sign = if self.q.is_negative() { '-' } else { '+' };
        let qa = self.q.abs();
        if self.r.is_one() {
            write!(f, "({}{}{}*sqrt({}))", self.p, sign, qa, m)
        } else {
            write!(f, "({}{}{}*sqrt({}))/{}", self.p, sign, qa, m, self.r)
        }
    }
}

/// Hand-rolled parser for the textual syntax: sums of integer and
/// `k*sqrt(m)` terms, optionally parenthesized, each or the whole divided
/// by a positive integer. Accepts e.g. `7`, `-3/5`, `sqrt(-1)`,
/// `2*sqrt(3)/7`, `(0-2*sqrt(-1))/15`, `(1+1*sqrt(5))/2`.
struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(s: &'a str) -> Self {
        Parser {
            s: s.as_bytes(),
            pos: 0,
        }
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse(format!(
            "{msg} at byte {} of {:?}",
            self.pos,
            String::from_utf8_lossy(self.s)
        )))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(&format!("expected '{}'", c as char))
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        if self.peek() == Some(b'-') || self.peek() == Some(b'+') {
            self.pos += 1;
        }
        let digits_from = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits_from {
            self.pos = start;
            return self.err("expected integer");
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii");
        BigInt::from_str(text.trim()).map_err(|e| Error::Parse(e.to_string()))
    }

    fn sqrt_radicand(&mut self) -> Result<BigInt> {
        // caller consumed nothing; expects literal `sqrt(` next
        self.skip_ws();
        let rest = &self.s[self.pos..];
        if rest.len() < 4 || &rest[..4] != b"sqrt" {
            return self.err("expected sqrt(");
        }
        self.pos += 4;
        self.expect(b'(')?;
        let m = self.integer()?;
        self.expect(b')')?;
        Ok(m)
    }

    /// One term: `int`, `int*sqrt(m)`, `sqrt(m)`, `-sqrt(m)`, with an
    /// optional trailing `/int`.
    fn term(&mut self) -> Result<QElem> {
        self.skip_ws();
        let mut value = if self.looking_at_sqrt() {
            let m = self.sqrt_radicand()?;
            QElem::sqrt_of(m)?
        } else if self.peek() == Some(b'-') && self.looking_at_signed_sqrt() {
            self.pos += 1;
            let m = self.sqrt_radicand()?;
            QElem::sqrt_of(m)?.neg()
        } else {
            let k = self.integer()?;
            if self.eat(b'*') {
                let m = self.sqrt_radicand()?;
                QElem::sqrt_of(m)?.mul_int(&k)
            } else {
                QElem::from_int(k)
            }
        };
        if self.eat(b'/') {
            let d = self.integer()?;
            value = value.div_int(&d)?;
        }
        Ok(value)
    }

    fn looking_at_sqrt(&mut self) -> bool {
        self.skip_ws();
        self.s[self.pos..].starts_with(b"sqrt")
    }

    fn looking_at_signed_sqrt(&mut self) -> bool {
        self.skip_ws();
        let rest = &self.s[self.pos..];
        rest.starts_with(b"-") && rest[1..]
            .iter()
            .skip_while(|c| c.is_ascii_whitespace())
            .take(4)
            .copied()
            .collect::<Vec<_>>()
            .starts_with(b"sqrt")
    }

    fn sum(&mut self) -> Result<QElem> {
        let mut acc = self.term()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.add(&t)?;
                }
                Some(b'-') => {
                    // binary minus: the sign belongs to the next term
                    let t = self.term()?;
                    acc = acc.add(&t)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn elem(&mut self) -> Result<QElem> {
        self.skip_ws();
        let mut value = if self.eat(b'(') {
            let inner = self.sum()?;
            self.expect(b')')?;
            inner
        } else {
            self.sum()?
        };
        if self.eat(b'/') {
            let d = self.integer()?;
            value = value.div_int(&d)?;
        }
        self.skip_ws();
        if self.pos != self.s.len() {
            return self.err("trailing input");
        }
        Ok(value)
    }
}

impl FromStr for QElem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Parser::new(s).elem()
    }
}
