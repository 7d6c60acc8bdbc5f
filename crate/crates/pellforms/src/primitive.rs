//! Primitive algebraic points of a Pell conic, restricted to quadratic
//! fields: membership analysis, the denominator/ratio/quotient/numerator
//! data, the bijection onto integral torsor points, and the kernel
//! decomposition into a rational plus an integral point.
//!
//! A point `(x, y)` with `A = den(y)` is primitive when `A*x` is integral,
//! `gcd(A^2 N(y), A^2) = 1 = gcd(A, delta)`, and some integer ratio `b`
//! makes `(x - b*y)/A` integral with `A^2 | Q0(b, 1)`. The ratio is found
//! exactly by solving the two coordinate congruences `A*x = b*(A*y)`
//! modulo `A^2` in the integral basis; when the classical inverse-norm
//! formula for `b` lands in the rationals it is cross-checked against the
//! solved value.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::classgroup::{represents_one_integrally, ClassGroup};
use crate::conic::{ConicPoint, PellConic};
use crate::error::{Error, Result};
use crate::forms::{q0_at, F2Class};
use crate::intarith::{crt, mod_inverse, solve_linear_congruence};
use crate::quadfield::QElem;
use crate::torsor::TorsorPoint;

/// Denominator, ratio, quotient, numerator and attached form of a
/// primitive point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimitiveData {
    denominator: BigInt,
    ratio: BigInt,
    quotient: QElem,
    numerator: QElem,
    form: F2Class,
}

impl PrimitiveData {
    /// `A = den(y)`.
    pub fn denominator(&self) -> &BigInt {
        &self.denominator
    }

    /// `beta`, the least non-negative ratio mod `A^2`.
    pub fn ratio(&self) -> &BigInt {
        &self.ratio
    }

    /// `T = (x - beta*y)/A`.
    pub fn quotient(&self) -> &QElem {
        &self.quotient
    }

    /// `U = A*y`.
    pub fn numerator(&self) -> &QElem {
        &self.numerator
    }

    /// The attached class with form `(A^2, 2*beta + sigma, Q0(beta,1)/A^2)`.
    pub fn form_class(&self) -> &F2Class {
        &self.form
    }

    /// Display string for the attached squared ideal `(A, beta + omega)^2`.
    pub fn ideal_display(&self) -> String {
        format!("({}, {}+omega)^2", self.denominator, self.ratio)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let f = self.form.form();
        serde_json::json!({
            "A": self.denominator.to_string().parse::<i64>().ok(),
            "beta": self.ratio.to_string().parse::<i64>().ok(),
            "quotient": self.quotient.to_string(),
            "numerator": self.numerator.to_string(),
            "form": [f.a.to_string(), f.b.to_string(), f.c.to_string()],
            "ideal": self.ideal_display(),
        })
    }
}

/// Solve `b * u = ax (mod A^2)` componentwise in the integral basis; the
/// solution is unique mod `A^2` when `den(y) = A`.
fn solve_ratio(ax: &QElem, u: &QElem, a_sq: &BigInt) -> Option<BigInt> {
    let (ax1, ax2) = ax.integral_coords()?;
    let (u1, u2) = u.integral_coords()?;
    let (r1, m1) = solve_linear_congruence(&u1, &ax1, a_sq)?;
    let (r2, m2) = solve_linear_congruence(&u2, &ax2, a_sq)?;
    let (b, modulus) = crt(&r1, &m1, &r2, &m2)?;
    debug_assert!(a_sq.mod_floor(&modulus).is_zero());
    // lift through the remaining cofactor; den(y) = A keeps it tiny
    let steps: BigInt = a_sq / &modulus;
    let mut k = BigInt::zero();
    while k < steps {
        let cand = (&b + &k * &modulus).mod_floor(a_sq);
        let ok1 = (&ax1 - &cand * &u1).mod_floor(a_sq).is_zero();
        let ok2 = (&ax2 - &cand * &u2).mod_floor(a_sq).is_zero();
        if ok1 && ok2 {
            return Some(cand);
        }
        k += 1;
    }
    None
}

/// Analyze a point of the conic; `Some` iff the point is primitive, with
/// its denominator, ratio, quotient, numerator and attached form.
pub fn analyze_point(conic: &PellConic, p: &ConicPoint) -> Option<PrimitiveData> {
    if !conic.contains(p) {
        return None;
    }
    let delta = conic.delta();
    if p.y.is_zero() {
        // (1, 0) or (-1, 0): denominator 1, ratio 0
        let form = F2Class::principal(delta.clone()).expect("fundamental");
        return Some(PrimitiveData {
            denominator: BigInt::one(),
            ratio: BigInt::zero(),
            quotient: p.x.clone(),
            numerator: QElem::zero(),
            form,
        });
    }
    let a = p.y.den();
    if !a.gcd(delta).is_one() {
        return None;
    }
    let ax = p.x.mul_int(&a);
    if !ax.is_integral() {
        return None;
    }
    let u = p.y.mul_int(&a);
    debug_assert!(u.is_integral());
    // A^2 N(y) = N(A y), a rational integer for integral A y
    let nu = u.field_norm();
    debug_assert!(nu.is_integer());
    let nu = nu.to_integer();
    let a_sq = &a * &a;
    if !nu.gcd(&a_sq).is_one() {
        return None;
    }

    let beta = solve_ratio(&ax, &u, &a_sq)?;
    if !q0_at(delta, &beta).mod_floor(&a_sq).is_zero() {
        return None;
    }

    // classical ratio formula b = a0 * A^2 * N(y) * x/y = a0 * A^2 * x * conj(y);
    // whenever it lands in the rationals it must agree with the solved ratio
    if let Ok(inv) = mod_inverse(&nu.mod_floor(&a_sq), &a_sq) {
        let b_formula = p.x.mul(&p.y.conj()).ok().map(|v| v.mul_int(&(&inv * &a_sq)));
        if let Some(b_int) = b_formula.and_then(|v| v.as_int()) {
            debug_assert_eq!(b_int.mod_floor(&a_sq), beta, "ratio formula disagrees");
        }
    }

    let quotient = p
        .x
        .sub(&p.y.mul_int(&beta))
        .expect("same field")
        .div_int(&a)
        .expect("A >= 1");
    debug_assert!(quotient.is_integral());
    let form = F2Class::new(delta.clone(), a.clone(), beta.clone()).ok()?;
    debug_assert!(matches!(form.form().eval(&quotient, &u), Ok(v) if v.is_one()));
    Some(PrimitiveData {
        denominator: a,
        ratio: beta,
        quotient,
        numerator: u,
        form,
    })
}

/// `phi(P) = (T, U)`, the integral point of the attached form's torsor.
pub fn phi(data: &PrimitiveData) -> TorsorPoint {
    TorsorPoint::new(data.quotient.clone(), data.numerator.clone())
}

/// `phi^{-1}(t, u) = ((A^2 t + beta u)/A, u/A)` for an integral point of the
/// torsor of `q`. Rejects inputs whose denominator collapses below `A`.
pub fn phi_inv(q: &F2Class, point: &TorsorPoint) -> Result<ConicPoint> {
    let a = q.a();
    let a_sq = a * a;
    let y = point.u.div_int(a)?;
    if &y.den() != a {
        return Err(Error::DenominatorCollapse(
            y.den().to_string(),
            a.to_string(),
        ));
    }
    let x = point
        .t
        .mul_int(&a_sq)
        .add(&point.u.mul_int(q.beta()))?
        .div_int(a)?;
    Ok(ConicPoint::new(x, y))
}

/// The homomorphism onto form classes: `P -> [Q_P]`.
pub fn theta(data: &PrimitiveData) -> F2Class {
    data.form.clone()
}

/// Class of the attached form inside the narrow class group; composed with
/// the form-class isomorphism this is the squared-ideal class of the point.
pub fn lambda_k(data: &PrimitiveData, group: &ClassGroup) -> Result<usize> {
    group.class_of(&data.form.form())
}

/// Split a kernel point into rational plus integral parts: when the attached
/// form represents 1 integrally with witness `(t, u)`, the rational point
/// `R = ((A^2 t + beta u)/A, u/A)` and the integral point `Z = P - R`
/// satisfy `R + Z = P`. `None` when the attached class is nonprincipal.
pub fn decompose_kernel(
    conic: &PellConic,
    p: &ConicPoint,
    data: &PrimitiveData,
) -> Result<Option<(ConicPoint, ConicPoint)>> {
    let Some((t, u)) = represents_one_integrally(&data.form.form())? else {
        return Ok(None);
    };
    let witness = TorsorPoint::new(QElem::from_int(t), QElem::from_int(u));
    let rational = phi_inv(&data.form, &witness)?;
    debug_assert!(rational.is_rational() && conic.contains(&rational));
    let integral = conic.sub(p, &rational)?;
    debug_assert!(integral.is_integral());
    debug_assert_eq!(conic.add(&rational, &integral)?, *p);
    Ok(Some((rational, integral)))
}
