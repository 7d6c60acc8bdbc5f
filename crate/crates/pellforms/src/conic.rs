//! Pell conics `x^2 + sigma*x*y - m*y^2 = 1` and their abelian group law.
//!
//! The discriminant decomposes as `delta = sigma + 4m` with `sigma` in
//! `{0, 1}`. Points do not embed their conic; the conic is passed to each
//! operation, which keeps batch use cheap.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::intarith::is_fundamental_discriminant;
use crate::quadfield::QElem;

/// The conic `x^2 + sigma*x*y - m*y^2 = 1` of fundamental discriminant
/// `delta = sigma + 4m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PellConic {
    delta: BigInt,
    sigma: BigInt,
    m: BigInt,
}

/// A point `(x, y)` with coordinates in Q or a quadratic field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConicPoint {
    pub x: QElem,
    pub y: QElem,
}

impl ConicPoint {
    pub fn new(x: QElem, y: QElem) -> Self {
        ConicPoint { x, y }
    }

    /// The identity O = (1, 0).
    pub fn identity() -> Self {
        ConicPoint::new(QElem::one(), QElem::zero())
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_one() && self.y.is_zero()
    }

    /// Componentwise Galois conjugation.
    pub fn conj(&self) -> Self {
        ConicPoint::new(self.x.conj(), self.y.conj())
    }

    /// Both coordinates are algebraic integers.
    pub fn is_integral(&self) -> bool {
        self.x.is_integral() && self.y.is_integral()
    }

    /// Both coordinates are rational.
    pub fn is_rational(&self) -> bool {
        self.x.is_rational() && self.y.is_rational()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "x": self.x.to_string(), "y": self.y.to_string() })
    }
}

impl PellConic {
    /// Conic of the given fundamental discriminant.
    pub fn new(delta: BigInt) -> Result<Self> {
        if !is_fundamental_discriminant(&delta)? {
            return Err(Error::NotFundamental(delta.to_string()));
        }
        let sigma = delta.mod_floor(&BigInt::from(4));
        debug_assert!(sigma.is_zero() || sigma == BigInt::from(1));
        let m = (&delta - &sigma) / BigInt::from(4);
        Ok(PellConic { delta, sigma, m })
    }

    pub fn delta(&self) -> &BigInt {
        &self.delta
    }

    pub fn sigma(&self) -> &BigInt {
        &self.sigma
    }

    pub fn m(&self) -> &BigInt {
        &self.m
    }

    /// `Q0(x, y) = x^2 + sigma*x*y - m*y^2` evaluated exactly.
    pub fn eval(&self, x: &QElem, y: &QElem) -> Result<QElem> {
        let x2 = x.mul(x)?;
        let sxy = x.mul(y)?.mul_int(&self.sigma);
        let my2 = y.mul(y)?.mul_int(&self.m);
        x2.add(&sxy)?.sub(&my2)
    }

    /// Exact membership test.
    pub fn contains(&self, p: &ConicPoint) -> bool {
        matches!(self.eval(&p.x, &p.y), Ok(v) if v.is_one())
    }

    /// Group law: `(x1 x2 + m y1 y2, x1 y2 + x2 y1 + sigma y1 y2)`.
    pub fn add(&self, p1: &ConicPoint, p2: &ConicPoint) -> Result<ConicPoint> {
        let x = p1.x.mul(&p2.x)?.add(&p1.y.mul(&p2.y)?.mul_int(&self.m))?;
        let y = p1
            .x
            .mul(&p2.y)?
            .add(&p2.x.mul(&p1.y)?)?
            .add(&p1.y.mul(&p2.y)?.mul_int(&self.sigma))?;
        Ok(ConicPoint::new(x, y))
    }

    /// Inverse: `(x + sigma*y, -y)`.
    pub fn neg(&self, p: &ConicPoint) -> ConicPoint {
        let x = p
            .x
            .add(&p.y.mul_int(&self.sigma))
            .expect("same field by construction");
        ConicPoint::new(x, p.y.neg())
    }

    /// Subtraction: `(x1 x2 + sigma x1 y2 - m y1 y2, x2 y1 - x1 y2)`.
    pub fn sub(&self, p1: &ConicPoint, p2: &ConicPoint) -> Result<ConicPoint> {
        let x = p1
            .x
            .mul(&p2.x)?
            .add(&p1.x.mul(&p2.y)?.mul_int(&self.sigma))?
            .sub(&p1.y.mul(&p2.y)?.mul_int(&self.m))?;
        let y = p2.x.mul(&p1.y)?.sub(&p1.x.mul(&p2.y)?)?;
        Ok(ConicPoint::new(x, y))
    }

    /// n-fold sum by binary doubling; negative n goes through `neg`.
    pub fn mul(&self, p: &ConicPoint, n: &BigInt) -> Result<ConicPoint> {
        if n.is_negative() {
            return self.mul(&self.neg(p), &-n);
        }
        let mut acc = ConicPoint::identity();
        let mut base = p.clone();
        let mut k = n.clone();
        let two = BigInt::from(2);
        while !k.is_zero() {
            if k.is_odd() {
                acc = self.add(&acc, &base)?;
            }
            base = self.add(&base, &base)?;
            k /= &two;
        }
        Ok(acc)
    }
}

impl fmt::Display for ConicPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} ; {})", self.x, self.y)
    }
}

/// Split `(x ; y)` into its two coordinate strings, respecting nesting.
pub(crate) fn split_pair(s: &str) -> Result<(String, String)> {
    let t = s.trim();
    let inner = t
        .strip_prefix('(')
        .and_then(|u| u.strip_suffix(')'))
        .ok_or_else(|| Error::Parse(format!("expected (x ; y), got {s:?}")))?;
    let mut depth = 0usize;
    for (i, c) in inner.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth = depth
                    .checked_sub(1)
                    .ok_or_else(|| Error::Parse(format!("unbalanced parens in {s:?}")))?
            }
            ';' if depth == 0 => {
                return Ok((inner[..i].to_string(), inner[i + 1..].to_string()));
            }
            _ => {}
        }
    }
    Err(Error::Parse(format!("missing ';' in {s:?}")))
}

impl FromStr for ConicPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (xs, ys) = split_pair(s)?;
        Ok(ConicPoint::new(xs.parse()?, ys.parse()?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn conic(delta: i64) -> PellConic {
        PellConic::new(BigInt::from(delta)).unwrap()
    }

    fn pt(s: &str) -> ConicPoint {
        s.parse().unwrap()
    }

    #[test]
    fn decomposition() {
        let c = conic(229);
        assert_eq!(c.sigma(), &BigInt::from(1));
        assert_eq!(c.m(), &BigInt::from(57));
        let c = conic(-4);
        assert_eq!(c.sigma(), &BigInt::zero());
        assert_eq!(c.m(), &BigInt::from(-1));
        assert!(matches!(
            PellConic::new(BigInt::from(7)),
            Err(Error::NotFundamental(_))
        ));
    }

    #[test]
    fn membership() {
        let c229 = conic(229);
        assert!(c229.contains(&pt("((0+1*sqrt(-1))/5 ; (0-2*sqrt(-1))/15)")));
        assert!(c229.contains(&ConicPoint::identity()));
        assert!(!conic(5).contains(&pt("(2 ; 2)")));
    }

    #[test]
    fn addition_and_negation() {
        let c5 = conic(5);
        let p = pt("(1 ; 1)");
        let sum = c5.add(&p, &p).unwrap();
        assert_eq!(sum, pt("(2 ; 3)"));
        assert!(c5.contains(&sum));

        assert_eq!(c5.neg(&pt("(2 ; 3)")), pt("(5 ; -3)"));
        assert!(c5.contains(&pt("(5 ; -3)")));
        assert_eq!(c5.neg(&ConicPoint::identity()), ConicPoint::identity());

        let c229 = conic(229);
        let q = pt("((0+1*sqrt(-1))/5 ; (0-2*sqrt(-1))/15)");
        let nq = c229.neg(&q);
        assert_eq!(nq, pt("((0+1*sqrt(-1))/15 ; (0+2*sqrt(-1))/15)"));
        assert!(c229.contains(&nq));
        assert_eq!(c229.add(&q, &nq).unwrap(), ConicPoint::identity());

        // identity behaves
        assert_eq!(c229.add(&q, &ConicPoint::identity()).unwrap(), q);
    }

    #[test]
    fn subtraction() {
        let c5 = conic(5);
        let p = pt("(2 ; 3)");
        assert_eq!(c5.sub(&p, &p).unwrap(), ConicPoint::identity());
        assert_eq!(c5.sub(&p, &pt("(1 ; 1)")).unwrap(), pt("(1 ; 1)"));
        assert_eq!(c5.sub(&p, &ConicPoint::identity()).unwrap(), p);
    }

    #[test]
    fn scalar_multiples() {
        let c5 = conic(5);
        let p = pt("(1 ; 1)");
        assert_eq!(c5.mul(&p, &BigInt::zero()).unwrap(), ConicPoint::identity());
        assert_eq!(c5.mul(&p, &BigInt::from(2)).unwrap(), pt("(2 ; 3)"));
        assert_eq!(c5.mul(&p, &BigInt::from(-1)).unwrap(), c5.neg(&p));
        let p6a = c5.mul(&p, &BigInt::from(6)).unwrap();
        let p6b = c5.add(&c5.mul(&p, &BigInt::from(4)).unwrap(), &pt("(2 ; 3)")).unwrap();
        assert_eq!(p6a, p6b);
        assert!(c5.contains(&p6a));
    }

    #[test]
    fn point_parsing() {
        let p = pt("( (0+1*sqrt(-1))/5 ; (0-2*sqrt(-1))/15 )");
        assert_eq!(p.to_string(), "((0+1*sqrt(-1))/5 ; (0-2*sqrt(-1))/15)");
        assert!("(1, 2)".parse::<ConicPoint>().is_err());
    }
}
