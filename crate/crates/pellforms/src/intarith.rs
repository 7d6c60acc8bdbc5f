//! Arbitrary-precision integer utilities: extended gcds, modular inverses,
//! and the fundamental-discriminant test.
//!
//! Everything here is exact `BigInt` arithmetic; squarefreeness is decided by
//! trial division, which is ample at the scale this crate targets.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Largest |D| accepted by the squarefree trial-division test.
pub const SQUAREFREE_BOUND: u64 = 10_000_000;

/// Extended gcd: returns `(g, s, t)` with `g = gcd(x, y) >= 0` and
/// `s*x + t*y = g`. `ext_gcd2(0, 0) = (0, 0, 0)`.
pub fn ext_gcd2(x: &BigInt, y: &BigInt) -> (BigInt, BigInt, BigInt) {
    if x.is_zero() && y.is_zero() {
        return (BigInt::zero(), BigInt::zero(), BigInt::zero());
    }
    let ext = x.extended_gcd(y);
    let (mut g, mut s, mut t) = (ext.gcd, ext.x, ext.y);
    if g.is_negative() {
        g = -g;
        s = -s;
        t = -t;
    }
    debug_assert_eq!(&s * x + &t * y, g);
    (g, s, t)
}

/// Extended gcd of three integers: `(g, j, k, l)` with `g = gcd(x, y, z) >= 0`
/// and `j*x + k*y + l*z = g`.
pub fn ext_gcd3(x: &BigInt, y: &BigInt, z: &BigInt) -> (BigInt, BigInt, BigInt, BigInt) {
    let (g1, s, t) = ext_gcd2(x, y);
    let (g, u, v) = ext_gcd2(&g1, z);
    // u*(s*x + t*y) + v*z = g
    (g, &u * s, u * t, v)
}

/// Least positive `a` with `a*x = 1 (mod n)`. Requires `n >= 1`.
pub fn mod_inverse(x: &BigInt, n: &BigInt) -> Result<BigInt> {
    if n < &BigInt::one() {
        return Err(Error::NotInvertible(x.to_string(), n.to_string()));
    }
    if n.is_one() {
        // Every residue is invertible mod 1; the least positive witness is 1.
        return Ok(BigInt::one());
    }
    let (g, s, _) = ext_gcd2(x, n);
    if !g.is_one() {
        return Err(Error::NotInvertible(x.to_string(), n.to_string()));
    }
    let mut a = s.mod_floor(n);
    if a.is_zero() {
        a = n.clone(); // unreachable for n > 1, kept for form
    }
    Ok(a)
}

/// Trial-division squarefreeness test for `|n| <= SQUAREFREE_BOUND`.
pub fn is_squarefree(n: &BigInt) -> Result<bool> {
    if n.is_zero() {
        return Ok(false);
    }
    let abs = n.abs();
    if abs > BigInt::from(SQUAREFREE_BOUND) {
        return Err(Error::TooLarge(
            n.to_string(),
            SQUAREFREE_BOUND.to_string(),
        ));
    }
    let mut v: u64 = abs.try_into().expect("bounded above");
    let mut d: u64 = 2;
    while d * d <= v {
        if v % d == 0 {
            v /= d;
            if v % d == 0 {
                return Ok(false);
            }
        }
        d += 1;
    }
    Ok(true)
}

/// Largest integer `s >= 1` with `s*s | n`, together with `n / s^2`.
/// Used to canonicalize radicands. `n` must be nonzero and within bound.
pub fn square_part(n: &BigInt) -> Result<(BigInt, BigInt)> {
    if n.is_zero() {
        return Err(Error::Parse("square_part of zero".into()));
    }
    let abs = n.abs();
    if abs > BigInt::from(SQUAREFREE_BOUND) {
        return Err(Error::TooLarge(
            n.to_string(),
            SQUAREFREE_BOUND.to_string(),
        ));
    }
    let mut v: u64 = abs.try_into().expect("bounded above");
    let mut s: u64 = 1;
    let mut d: u64 = 2;
    while d * d <= v {
        while v % (d * d) == 0 {
            v /= d * d;
            s *= d;
        }
        d += 1;
    }
    let core = BigInt::from(v) * n.signum();
    Ok((BigInt::from(s), core))
}

/// Is `D` a fundamental discriminant?
///
/// True iff `D = 1 (mod 4)` and squarefree, or `D = 4d` with `d = 2, 3 (mod 4)`
/// squarefree. `D = 0, 1` are excluded.
pub fn is_fundamental_discriminant(d: &BigInt) -> Result<bool> {
    if d.is_zero() || d.is_one() {
        return Ok(false);
    }
    let four = BigInt::from(4);
    let rem = d.mod_floor(&four);
    if rem == BigInt::one() {
        return is_squarefree(d);
    }
    if rem.is_zero() {
        let q = d / &four;
        let qr = q.mod_floor(&four);
        if qr == BigInt::from(2) || qr == BigInt::from(3) {
            return is_squarefree(&q);
        }
    }
    Ok(false)
}

/// Prime factorization by trial division. Fast whenever the input is
/// smooth, which covers every denominator this crate constructs; a large
/// prime cofactor degrades to an O(sqrt(n)) scan.
pub fn factorize(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut v = n.abs();
    let mut out: Vec<(BigInt, u32)> = Vec::new();
    if v <= BigInt::one() {
        return out;
    }
    let mut d = BigInt::from(2);
    while &d * &d <= v {
        let mut e = 0u32;
        while v.mod_floor(&d).is_zero() {
            v /= &d;
            e += 1;
        }
        if e > 0 {
            out.push((d.clone(), e));
        }
        d += 1;
    }
    if v > BigInt::one() {
        out.push((v, 1));
    }
    out
}

/// Largest `e` with `l^e | n`, or `None` for `n = 0` (infinite valuation).
pub fn valuation(n: &BigInt, l: &BigInt) -> Option<u32> {
    if n.is_zero() {
        return None;
    }
    let mut v = 0u32;
    let mut cur = n.abs();
    while cur.mod_floor(l).is_zero() {
        cur /= l;
        v += 1;
    }
    Some(v)
}

/// Solve `k*x = a (mod n)` for `k`. Returns `(k0, modulus)` describing the
/// full solution set `k = k0 (mod modulus)`, or `None` if unsolvable.
/// Requires `n >= 1`.
pub fn solve_linear_congruence(x: &BigInt, a: &BigInt, n: &BigInt) -> Option<(BigInt, BigInt)> {
    debug_assert!(n >= &BigInt::one());
    let g = x.gcd(n);
    if g.is_zero() {
        // x = 0 and n = 0 cannot happen for n >= 1
        return None;
    }
    if x.mod_floor(n).is_zero() {
        return a.mod_floor(n).is_zero().then(|| (BigInt::zero(), BigInt::one()));
    }
    if !a.mod_floor(&g).is_zero() {
        return None;
    }
    let n2 = n / &g;
    let x2 = (x / &g).mod_floor(&n2);
    let a2 = (a / &g).mod_floor(&n2);
    let inv = mod_inverse(&x2, &n2).ok()?;
    Some(((a2 * inv).mod_floor(&n2), n2))
}

/// Chinese remainder: combine `r = r1 (mod m1)` and `r = r2 (mod m2)` into
/// `r = r0 (mod lcm(m1, m2))`, or `None` when incompatible.
pub fn crt(r1: &BigInt, m1: &BigInt, r2: &BigInt, m2: &BigInt) -> Option<(BigInt, BigInt)> {
    debug_assert!(m1 >= &BigInt::one() && m2 >= &BigInt::one());
    let g = m1.gcd(m2);
    let diff = r2 - r1;
    if !diff.mod_floor(&g).is_zero() {
        return None;
    }
    let l = m1 / &g * m2;
    let m2g = m2 / &g;
    let inv = mod_inverse(&(m1 / &g).mod_floor(&m2g), &m2g).ok()?;
    let k = ((diff / &g).mod_floor(&m2g) * inv).mod_floor(&m2g);
    Some(((r1 + m1 * k).mod_floor(&l), l))
}

/// Exact quotient `a / b`; panics in debug builds if `b` does not divide `a`.
pub fn exact_div(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    debug_assert!(r.is_zero(), "exact_div: {a} not divisible by {b}");
    q
}

/// True iff `n` is a perfect square (of a rational integer).
pub fn is_perfect_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let s = n.sqrt();
    &(&s * &s) == n
}

/// Floor square root for nonnegative `n`.
pub fn isqrt(n: &BigInt) -> BigInt {
    debug_assert!(!n.is_negative());
    n.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn ext_gcd2_examples() {
        let (g, s, t) = ext_gcd2(&b(225), &b(223));
        assert_eq!(g, b(1));
        assert_eq!(s * 225 + t * 223, b(1));

        assert_eq!(ext_gcd2(&b(0), &b(0)), (b(0), b(0), b(0)));

        let (g, s, t) = ext_gcd2(&b(6), &b(4));
        assert_eq!(g, b(2));
        assert_eq!(s * 6 + t * 4, b(2));
    }

    #[test]
    fn ext_gcd3_examples() {
        let (g, j, k, l) = ext_gcd3(&b(225), &b(225), &b(223));
        assert_eq!(g, b(1));
        assert_eq!(j * 225 + k * 225 + l * 223, b(1));

        let (g, j, k, l) = ext_gcd3(&b(1), &b(0), &b(0));
        assert_eq!((g, j, k, l), (b(1), b(1), b(0), b(0)));

        let (g, j, k, l) = ext_gcd3(&b(4), &b(6), &b(9));
        assert_eq!(g, b(1));
        assert_eq!(j * 4 + k * 6 + l * 9, b(1));
    }

    #[test]
    fn mod_inverse_examples() {
        assert_eq!(mod_inverse(&b(4), &b(225)).unwrap(), b(169));
        assert_eq!(mod_inverse(&b(1), &b(17)).unwrap(), b(1));
        assert_eq!(mod_inverse(&b(7), &b(9)).unwrap(), b(4));
        assert_eq!(mod_inverse(&b(5), &b(1)).unwrap(), b(1));
        assert!(matches!(
            mod_inverse(&b(6), &b(9)),
            Err(Error::NotInvertible(..))
        ));
    }

    #[test]
    fn fundamental_discriminants() {
        for d in [5, 8, 12, 13, 229, -4, -8, -23, -3] {
            assert!(is_fundamental_discriminant(&b(d)).unwrap(), "delta {d}");
        }
        for d in [0, 1, 4, 20, 45, 9, -12, 100] {
            assert!(!is_fundamental_discriminant(&b(d)).unwrap(), "delta {d}");
        }
    }

    #[test]
    fn square_part_extracts() {
        assert_eq!(square_part(&b(12)).unwrap(), (b(2), b(3)));
        assert_eq!(square_part(&b(-4)).unwrap(), (b(2), b(-1)));
        assert_eq!(square_part(&b(7)).unwrap(), (b(1), b(7)));
        assert_eq!(square_part(&b(36)).unwrap(), (b(6), b(1)));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn bezout_identity_holds(x in -10_000_000i64..10_000_000, y in -10_000_000i64..10_000_000) {
            let (g, s, t) = ext_gcd2(&b(x), &b(y));
            prop_assert_eq!(&s * x + &t * y, g.clone());
            prop_assert!(!g.is_negative());
            if !g.is_zero() {
                prop_assert!(b(x).mod_floor(&g).is_zero());
                prop_assert!(b(y).mod_floor(&g).is_zero());
            }
        }

        #[test]
        fn gcd3_matches_nested(x in -100_000i64..100_000, y in -100_000i64..100_000, z in -100_000i64..100_000) {
            let (g, j, k, l) = ext_gcd3(&b(x), &b(y), &b(z));
            prop_assert_eq!(j * x + k * y + l * z, g.clone());
            prop_assert_eq!(g, b(x).gcd(&b(y)).gcd(&b(z)));
        }

        #[test]
        fn mod_inverse_is_inverse(x in 1i64..1_000_000, n in 2i64..1_000_000) {
            let (x, n) = (b(x), b(n));
            prop_assume!(x.gcd(&n).is_one());
            let a = mod_inverse(&x, &n).unwrap();
            prop_assert!(a > BigInt::zero() && a <= n);
            prop_assert!((a * x).mod_floor(&n).is_one());
        }

        // gcd(x,y)^2 = gcd(x^2,y^2) and the three-argument analogue.
        #[test]
        fn gcd_squares(x in 1i64..1_000_000, y in 1i64..1_000_000, z in 1i64..1_000_000) {
            let (x, y, z) = (b(x), b(y), b(z));
            let g2 = x.gcd(&y);
            prop_assert_eq!(&g2 * &g2, (&x * &x).gcd(&(&y * &y)));
            let g3 = x.gcd(&y).gcd(&z);
            prop_assert_eq!(&g3 * &g3, (&x * &x).gcd(&(&y * &y)).gcd(&(&z * &z)));
        }
    }
}
