//! Torsors `Q(t, u) = 1` for a Pell conic, where `Q` has square leading
//! coefficient: the automorph action `mu`, the difference map `nu`, the
//! bilinear group law on torsor points across forms, an exact checker for
//! the principal-homogeneous-space axioms, and the order-2 cocycle
//! constructor for the Galois group of a quadratic field.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;

use crate::conic::{split_pair, ConicPoint, PellConic};
use crate::error::{Error, Result};
use crate::forms::{split_delta, F2Class};
use crate::intarith::exact_div;
use crate::primitive::PrimitiveData;
use crate::quadfield::QElem;

/// A point `(t, u)` of some torsor `Q(t, u) = 1`; the form is supplied to
/// each operation rather than stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TorsorPoint {
    pub t: QElem,
    pub u: QElem,
}

impl TorsorPoint {
    pub fn new(t: QElem, u: QElem) -> Self {
        TorsorPoint { t, u }
    }

    /// Componentwise Galois conjugation.
    pub fn conj(&self) -> Self {
        TorsorPoint::new(self.t.conj(), self.u.conj())
    }

    pub fn is_integral(&self) -> bool {
        self.t.is_integral() && self.u.is_integral()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "t": self.t.to_string(), "u": self.u.to_string() })
    }
}

impl fmt::Display for TorsorPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} ; {})", self.t, self.u)
    }
}

impl FromStr for TorsorPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (ts, us) = split_pair(s)?;
        Ok(TorsorPoint::new(ts.parse()?, us.parse()?))
    }
}

/// Is `(t, u)` exactly on the torsor of `q`?
pub fn on_torsor(q: &F2Class, point: &TorsorPoint) -> bool {
    matches!(q.form().eval(&point.t, &point.u), Ok(v) if v.is_one())
}

/// Torsor addition `mu(q, P) = M_P q`: act on a torsor point by the
/// automorph of a conic point.
pub fn mu(q: &F2Class, point: &TorsorPoint, p: &ConicPoint) -> Result<TorsorPoint> {
    let (t, u) = q.automorph(p).mul_vec(&point.t, &point.u)?;
    Ok(TorsorPoint::new(t, u))
}

/// Torsor difference `nu(q2, q1) = L_{Q, q1} q2`, a point of the conic.
pub fn nu(q: &F2Class, q2: &TorsorPoint, q1: &TorsorPoint) -> Result<ConicPoint> {
    let (x, y) = q.l_matrix(&q1.t, &q1.u).mul_vec(&q2.t, &q2.u)?;
    Ok(ConicPoint::new(x, y))
}

/// The bilinear transformation carrying points of two torsors to the torsor
/// of the composed form: `t3` and `u3` are bilinear in `(t1, u1)` and
/// `(t2, u2)` with the integer coefficients below, and
/// `Q3(t3, u3) = Q1(t1, u1) * Q2(t2, u2)` identically.
#[derive(Debug, Clone)]
pub struct BilinearMap {
    pub composed: F2Class,
    pub e_sq: BigInt,
    pub coeff_f: BigInt,
    pub coeff_g: BigInt,
    pub coeff_h: BigInt,
    pub coeff_b: BigInt,
    pub coeff_c: BigInt,
    pub coeff_d: BigInt,
}

impl BilinearMap {
    /// Coefficients of the transformation attached to an ordered pair of
    /// square-leading-coefficient classes.
    pub fn new(q1: &F2Class, q2: &F2Class) -> Result<BilinearMap> {
        let composed = q1.compose(q2)?;
        let (sigma, m) = split_delta(q1.delta());
        let a1_sq = q1.a() * q1.a();
        let a2_sq = q2.a() * q2.a();
        let beta_plus = q1.beta() + q2.beta() + sigma;
        let beta_cross = q1.beta() * q2.beta() + m;
        let e = q1.a().gcd(q2.a()).gcd(&beta_plus);
        let e_sq = &e * &e;
        let beta3 = composed.beta();
        Ok(BilinearMap {
            coeff_b: exact_div(&a1_sq, &e_sq),
            coeff_c: exact_div(&a2_sq, &e_sq),
            coeff_d: exact_div(&beta_plus, &e_sq),
            coeff_f: exact_div(&(&e_sq * (q2.beta() - beta3)), &a2_sq),
            coeff_g: exact_div(&(&e_sq * (q1.beta() - beta3)), &a1_sq),
            coeff_h: exact_div(
                &(&e_sq * (&beta_cross - beta3 * &beta_plus)),
                &(&a1_sq * &a2_sq),
            ),
            e_sq,
            composed,
        })
    }

    /// Apply the transformation to arbitrary exact coordinates (they need
    /// not lie on the torsors; the product identity is polynomial).
    pub fn apply(
        &self,
        t1: &QElem,
        u1: &QElem,
        t2: &QElem,
        u2: &QElem,
    ) -> Result<(QElem, QElem)> {
        let t1t2 = t1.mul(t2)?;
        let t1u2 = t1.mul(u2)?;
        let t2u1 = t2.mul(u1)?;
        let u1u2 = u1.mul(u2)?;
        let t3 = t1t2
            .mul_int(&self.e_sq)
            .add(&t1u2.mul_int(&self.coeff_f))?
            .add(&t2u1.mul_int(&self.coeff_g))?
            .add(&u1u2.mul_int(&self.coeff_h))?;
        let u3 = t1u2
            .mul_int(&self.coeff_b)
            .add(&t2u1.mul_int(&self.coeff_c))?
            .add(&u1u2.mul_int(&self.coeff_d))?;
        Ok((t3, u3))
    }
}

/// Group law on the union of torsor points: carry `(q1, q2)` to the point
/// of the composed form's torsor.
pub fn circ(
    q1: &F2Class,
    p1: &TorsorPoint,
    q2: &F2Class,
    p2: &TorsorPoint,
) -> Result<(F2Class, TorsorPoint)> {
    let map = BilinearMap::new(q1, q2)?;
    let (t3, u3) = map.apply(&p1.t, &p1.u, &p2.t, &p2.u)?;
    let point = TorsorPoint::new(t3, u3);
    debug_assert!(on_torsor(&map.composed, &point));
    Ok((map.composed, point))
}

/// Outcome of checking the three principal-homogeneous-space axioms on a
/// finite sample. Off-torsor or off-conic sample members are reported as
/// precondition violations, never as axiom failures.
#[derive(Debug, Clone, Default)]
pub struct PhsReport {
    pub instances_checked: usize,
    pub axiom_failures: Vec<String>,
    pub precondition_violations: Vec<String>,
}

impl PhsReport {
    pub fn all_passed(&self) -> bool {
        self.axiom_failures.is_empty()
    }
}

/// Verify the PHS axioms exactly on the given samples:
/// 1. `mu(q, O) = q`;
/// 2. `mu(mu(q, P1), P2) = mu(q, P1 + P2)`;
/// 3. `P = nu(q2, q1)` is the unique transporter, checked constructively
///    via `mu(q1, nu(q2, q1)) = q2` and `nu(mu(q, P), q) = P`.
pub fn check_phs_axioms(
    q: &F2Class,
    conic: &PellConic,
    torsor_sample: &[TorsorPoint],
    conic_sample: &[ConicPoint],
) -> PhsReport {
    let mut report = PhsReport::default();
    let mut points = Vec::new();
    for tp in torsor_sample {
        if on_torsor(q, tp) {
            points.push(tp.clone());
        } else {
            report
                .precondition_violations
                .push(format!("off-torsor sample point {tp}"));
        }
    }
    let mut moves = Vec::new();
    for cp in conic_sample {
        if conic.contains(cp) {
            moves.push(cp.clone());
        } else {
            report
                .precondition_violations
                .push(format!("off-conic sample point {cp}"));
        }
    }

    let origin = ConicPoint::identity();
    for tp in &points {
        report.instances_checked += 1;
        match mu(q, tp, &origin) {
            Ok(moved) if moved == *tp => {}
            Ok(moved) => report
                .axiom_failures
                .push(format!("mu({tp}, O) = {moved} != {tp}")),
            Err(e) => report
                .precondition_violations
                .push(format!("mu({tp}, O): {e}")),
        }
    }

    for tp in &points {
        for p1 in &moves {
            for p2 in &moves {
                report.instances_checked += 1;
                let outcome = (|| -> Result<bool> {
                    let lhs = mu(q, &mu(q, tp, p1)?, p2)?;
                    let rhs = mu(q, tp, &conic.add(p1, p2)?)?;
                    Ok(lhs == rhs)
                })();
                match outcome {
                    Ok(true) => {}
                    Ok(false) => report.axiom_failures.push(format!(
                        "mu(mu({tp}, {p1}), {p2}) != mu({tp}, {p1} + {p2})"
                    )),
                    Err(e) => report
                        .precondition_violations
                        .push(format!("axiom 2 instance ({tp}, {p1}, {p2}): {e}")),
                }
            }
        }
    }

    for q1 in &points {
        for q2 in &points {
            report.instances_checked += 1;
            let outcome = (|| -> Result<bool> {
                let p = nu(q, q2, q1)?;
                if !conic.contains(&p) {
                    return Ok(false);
                }
                Ok(mu(q, q1, &p)? == *q2)
            })();
            match outcome {
                Ok(true) => {}
                Ok(false) => report
                    .axiom_failures
                    .push(format!("nu({q2}, {q1}) does not transport {q1} to {q2}")),
                Err(e) => report
                    .precondition_violations
                    .push(format!("axiom 3 instance ({q1}, {q2}): {e}")),
            }
        }
        for p in &moves {
            report.instances_checked += 1;
            let outcome = (|| -> Result<bool> { Ok(nu(q, &mu(q, q1, p)?, q1)? == *p) })();
            match outcome {
                Ok(true) => {}
                Ok(false) => report
                    .axiom_failures
                    .push(format!("nu(mu({q1}, {p}), {q1}) != {p}")),
                Err(e) => report
                    .precondition_violations
                    .push(format!("uniqueness instance ({q1}, {p}): {e}")),
            }
        }
    }
    report
}

/// A 1-cocycle on the order-2 Galois group of a quadratic field, valued in
/// integral conic points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cocycle {
    /// Value at the identity automorphism; always `(1, 0)`.
    pub at_identity: ConicPoint,
    /// Value at conjugation: `nu(q^tau, q)`.
    pub at_conj: ConicPoint,
}

/// The cocycle attached to a primitive point through an integral point `q`
/// of its form's torsor: `tau -> nu(q^tau, q)`.
pub fn xi_cocycle(data: &PrimitiveData, q: &TorsorPoint) -> Result<Cocycle> {
    let at_conj = nu(data.form_class(), &q.conj(), q)?;
    Ok(Cocycle {
        at_identity: ConicPoint::identity(),
        at_conj,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primitive::{analyze_point, phi};

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn conic(delta: i64) -> PellConic {
        PellConic::new(b(delta)).unwrap()
    }

    fn pt(s: &str) -> ConicPoint {
        s.parse().unwrap()
    }

    fn tp(s: &str) -> TorsorPoint {
        s.parse().unwrap()
    }

    fn example_setup() -> (PellConic, ConicPoint, PrimitiveData, TorsorPoint) {
        let c = conic(229);
        let p = pt("((0+1*sqrt(-1))/5 ; (0-2*sqrt(-1))/15)");
        let data = analyze_point(&c, &p).unwrap();
        let q = phi(&data);
        (c, p, data, q)
    }

    #[test]
    fn mu_identity_and_phi() {
        let (_, _, data, q) = example_setup();
        let f2 = data.form_class();
        assert_eq!(mu(f2, &q, &ConicPoint::identity()).unwrap(), q);

        // mu(o, P) = phi(P) with o = (1/A, 0)
        let (c, p, _, _) = example_setup();
        let o = TorsorPoint::new(
            QElem::rational(b(1), b(15)).unwrap(),
            QElem::zero(),
        );
        assert!(on_torsor(f2, &o));
        let moved = mu(f2, &o, &p).unwrap();
        assert_eq!(moved, q);
        assert!(c.contains(&p));
    }

    #[test]
    fn nu_examples() {
        let (c, p, data, q) = example_setup();
        let f2 = data.form_class();
        assert_eq!(nu(f2, &q, &q).unwrap(), ConicPoint::identity());

        // nu(phi(P2), phi(P1)) = P2 - P1 on points sharing (A, beta):
        // use P2 = P and P1 = P, plus the translated pair via mu
        let p2 = c.add(&p, &pt("(8*sqrt(-1) ; -sqrt(-1))")).unwrap();
        let d2 = analyze_point(&c, &p2).unwrap();
        assert_eq!(d2.denominator(), data.denominator());
        assert_eq!(d2.ratio(), data.ratio());
        let q2 = phi(&d2);
        let diff = nu(f2, &q2, &q).unwrap();
        assert_eq!(diff, c.sub(&p2, &p).unwrap());

        // nu(q2, q1) = phi_inv(q2) - phi_inv(q1) in general
        let r1 = crate::primitive::phi_inv(f2, &q).unwrap();
        let r2 = crate::primitive::phi_inv(f2, &q2).unwrap();
        assert_eq!(nu(f2, &q2, &q).unwrap(), c.sub(&r2, &r1).unwrap());
    }

    #[test]
    fn circ_identity_transport() {
        let e = F2Class::principal(b(229)).unwrap();
        let one = TorsorPoint::new(QElem::one(), QElem::zero());
        let q = F2Class::new(b(229), b(15), b(111)).unwrap();
        let point = tp("(sqrt(-1) ; -2*sqrt(-1))");
        let (q3, moved) = circ(&e, &one, &q, &point).unwrap();
        assert_eq!(q3, q);
        assert_eq!(moved, point);
    }

    #[test]
    fn circ_matches_conic_addition() {
        let (c, p, data, q) = example_setup();
        let f2 = data.form_class();
        let (q3_class, q3) = circ(f2, &q, f2, &q).unwrap();
        // the image of 2P under phi
        let doubled = c.add(&p, &p).unwrap();
        let d2 = analyze_point(&c, &doubled).unwrap();
        assert_eq!(&q3_class, d2.form_class());
        assert_eq!(q3, phi(&d2));
        assert_eq!(q3, tp("(-5 ; 8)"));
    }

    #[test]
    fn bilinear_identity_off_torsor() {
        // the product identity holds for arbitrary rational substitutions
        let q1 = F2Class::new(b(229), b(15), b(111)).unwrap();
        let q2 = F2Class::new(b(229), b(15), b(113)).unwrap();
        let map = BilinearMap::new(&q1, &q2).unwrap();
        let vals = [
            ("2/3", "-1/5", "7", "4/9"),
            ("0", "1", "1", "0"),
            ("-5/2", "3", "1/7", "-2"),
        ];
        for (a, bb, cc, d) in vals {
            let (t1, u1): (QElem, QElem) = (a.parse().unwrap(), bb.parse().unwrap());
            let (t2, u2): (QElem, QElem) = (cc.parse().unwrap(), d.parse().unwrap());
            let (t3, u3) = map.apply(&t1, &u1, &t2, &u2).unwrap();
            let lhs = map.composed.form().eval(&t3, &u3).unwrap();
            let rhs = q1
                .form()
                .eval(&t1, &u1)
                .unwrap()
                .mul(&q2.form().eval(&t2, &u2).unwrap())
                .unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn phs_axioms_on_samples() {
        let (c, p, data, q) = example_setup();
        let f2 = data.form_class();
        let o = TorsorPoint::new(QElem::rational(b(1), b(15)).unwrap(), QElem::zero());
        let torsor_sample = vec![q.clone(), o, tp("(-6 ; 13)")];
        let conic_sample = vec![
            ConicPoint::identity(),
            pt("(-1 ; 0)"),
            p.clone(),
            pt("(8*sqrt(-1) ; -sqrt(-1))"),
            c.neg(&p),
        ];
        let report = check_phs_axioms(f2, &c, &torsor_sample, &conic_sample);
        assert!(report.all_passed(), "{:?}", report.axiom_failures);
        assert!(report.precondition_violations.is_empty());
        assert!(report.instances_checked > 30);
    }

    #[test]
    fn phs_rejects_bad_samples_as_preconditions() {
        let (c, _, data, q) = example_setup();
        let f2 = data.form_class();
        let report = check_phs_axioms(
            f2,
            &c,
            &[q, tp("(1 ; 1)")],
            &[ConicPoint::identity(), pt("(2 ; 2)")],
        );
        assert!(report.all_passed());
        assert_eq!(report.precondition_violations.len(), 2);
    }

    #[test]
    fn cocycle_of_example_point() {
        let (c, _, data, q) = example_setup();
        let xi = xi_cocycle(&data, &q).unwrap();
        assert_eq!(xi.at_identity, ConicPoint::identity());
        assert_eq!(xi.at_conj, pt("(-1 ; 0)"));
        assert!(xi.at_conj.is_integral());
        assert!(c.contains(&xi.at_conj));

        // order-2 cocycle condition: tau(f(tau)) + f(tau) = O
        let total = c.add(&xi.at_conj.conj(), &xi.at_conj).unwrap();
        assert_eq!(total, ConicPoint::identity());

        // the kernel witness: f(tau) is the coboundary of the integral part
        let (_, z) = crate::primitive::decompose_kernel(&c, &pt("((0+1*sqrt(-1))/5 ; (0-2*sqrt(-1))/15)"), &data)
            .unwrap()
            .unwrap();
        let coboundary = c.sub(&z.conj(), &z).unwrap();
        assert_eq!(coboundary, xi.at_conj);
    }

    #[test]
    fn cocycle_of_rational_point_is_trivial() {
        let c = conic(5);
        let p = pt("(-13/11 ; 3/11)");
        let data = analyze_point(&c, &p).unwrap();
        let q = phi(&data);
        assert!(q.is_integral());
        let xi = xi_cocycle(&data, &q).unwrap();
        assert_eq!(xi.at_conj, ConicPoint::identity());
    }
}
