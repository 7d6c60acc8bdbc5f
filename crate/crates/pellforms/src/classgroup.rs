//! Narrow class groups of fundamental discriminant via exact reduction
//! theory: unique reduced representatives for negative discriminants,
//! reduction cycles for positive ones, composition tables, the squares
//! subgroup, integral-representability certificates, and the census of
//! forms representing 1 rationally but not integrally.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::forms::{principal_form, FClass, Form, IntMat2};
use crate::intarith::{ext_gcd2, is_fundamental_discriminant, isqrt};

/// Hard ceiling on |delta| for class-group enumeration.
pub const DELTA_BOUND: i64 = 1_000_000;

/// A reduced form with the unimodular certificate that produced it:
/// `original.apply(&certificate) == form`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedForm {
    pub form: Form,
    pub certificate: IntMat2,
}

/// Is `f` reduced for `delta < 0`? (`|b| <= a <= c`, boundary `b >= 0`.)
fn is_reduced_definite(f: &Form) -> bool {
    if !f.a.is_positive() {
        return false;
    }
    let babs = f.b.abs();
    if !(babs <= f.a && f.a <= f.c) {
        return false;
    }
    if f.b.is_negative() && (babs == f.a || f.a == f.c) {
        return false;
    }
    true
}

/// Is `f` reduced for `delta > 0`?
/// (`0 < b < sqrt(delta)` and `sqrt(delta) - b < 2|a| < sqrt(delta) + b`.)
fn is_reduced_indefinite(f: &Form, delta: &BigInt) -> bool {
    if !f.b.is_positive() || &(&f.b * &f.b) >= delta {
        return false;
    }
    let two_a = BigInt::from(2) * f.a.abs();
    let hi = &two_a + &f.b;
    if &(&hi * &hi) <= delta {
        return false; // sqrt(delta) - b >= 2|a|
    }
    let lo = &two_a - &f.b;
    if lo.is_positive() && &(&lo * &lo) >= delta {
        return false; // 2|a| - b >= sqrt(delta)
    }
    true
}

/// Is `f` reduced for its own discriminant's sign?
pub fn is_reduced(f: &Form, delta: &BigInt) -> bool {
    if delta.is_negative() {
        is_reduced_definite(f)
    } else {
        is_reduced_indefinite(f, delta)
    }
}

/// One reduction step for indefinite forms: `(a,b,c) -> (c, r, (r^2-delta)/4c)`
/// with `r = -b (mod 2|c|)` normalized into the standard window.
fn rho_step(f: &Form, delta: &BigInt) -> (Form, IntMat2) {
    debug_assert!(!f.c.is_zero());
    let c_abs = f.c.abs();
    let two_c_abs = BigInt::from(2) * &c_abs;
    let r = if &(&f.c * &f.c) > delta {
        // -|c| < r <= |c|
        let t = (-&f.b).mod_floor(&two_c_abs);
        if t > c_abs {
            t - &two_c_abs
        } else {
            t
        }
    } else {
        // sqrt(delta) - 2|c| < r < sqrt(delta)
        let s = isqrt(delta);
        let lower = &s - &two_c_abs + BigInt::one();
        &lower + (-&f.b - &lower).mod_floor(&two_c_abs)
    };
    let new_c = (&r * &r - delta) / (BigInt::from(4) * &f.c);
    let shift = (&f.b + &r) / (BigInt::from(2) * &f.c);
    let mat = IntMat2::new(BigInt::zero(), BigInt::from(-1), BigInt::one(), shift);
    (Form::new(f.c.clone(), r, new_c), mat)
}

/// Reduce a positive definite form by translations and swaps.
fn reduce_definite(f: &Form) -> (Form, IntMat2) {
    let mut cur = f.clone();
    let mut acc = IntMat2::identity();
    loop {
        // normalize b into (-a, a]
        let two_a = BigInt::from(2) * &cur.a;
        let mut t = cur.b.mod_floor(&two_a);
        if t > cur.a {
            t -= &two_a;
        }
        if t != cur.b {
            let s = (&t - &cur.b) / &two_a;
            let m = IntMat2::new(BigInt::one(), s, BigInt::zero(), BigInt::one());
            cur = cur.apply(&m).expect("translation is unimodular");
            acc = acc.mul(&m);
        }
        if cur.a > cur.c {
            let m = IntMat2::new(BigInt::zero(), BigInt::from(-1), BigInt::one(), BigInt::zero());
            cur = cur.apply(&m).expect("swap is unimodular");
            acc = acc.mul(&m);
            continue;
        }
        break;
    }
    if cur.b.is_negative() && (cur.b.abs() == cur.a || cur.a == cur.c) {
        if cur.b.abs() == cur.a {
            let m = IntMat2::new(BigInt::one(), BigInt::one(), BigInt::zero(), BigInt::one());
            cur = cur.apply(&m).expect("translation is unimodular");
            acc = acc.mul(&m);
        } else {
            let m = IntMat2::new(BigInt::zero(), BigInt::from(-1), BigInt::one(), BigInt::zero());
            cur = cur.apply(&m).expect("swap is unimodular");
            acc = acc.mul(&m);
        }
    }
    debug_assert!(is_reduced_definite(&cur));
    (cur, acc)
}

/// Reduce a primitive form to a reduced representative of its proper
/// equivalence class, with certificate.
pub fn reduce(f: &Form, delta: &BigInt) -> Result<ReducedForm> {
    if &f.discriminant() != delta {
        return Err(Error::MixedDiscriminants(
            f.discriminant().to_string(),
            delta.to_string(),
        ));
    }
    if !f.is_primitive() {
        return Err(Error::NotPrimitive(f.to_string()));
    }
    if delta.is_negative() {
        if f.a.is_negative() {
            return Err(Error::NegativeDefinite(f.to_string()));
        }
        let (form, certificate) = reduce_definite(f);
        debug_assert_eq!(&f.apply(&certificate).unwrap(), &form);
        return Ok(ReducedForm { form, certificate });
    }
    let mut cur = f.clone();
    let mut acc = IntMat2::identity();
    for _ in 0..100_000 {
        if is_reduced_indefinite(&cur, delta) {
            debug_assert_eq!(&f.apply(&acc).unwrap(), &cur);
            return Ok(ReducedForm {
                form: cur,
                certificate: acc,
            });
        }
        let (next, m) = rho_step(&cur, delta);
        cur = next;
        acc = acc.mul(&m);
    }
    unreachable!("indefinite reduction did not terminate for {f}")
}

/// The full rho-cycle through a reduced indefinite form, starting at `f`.
pub fn reduction_cycle(f: &Form, delta: &BigInt) -> Vec<Form> {
    debug_assert!(is_reduced_indefinite(f, delta));
    let mut cycle = vec![f.clone()];
    let (mut cur, _) = rho_step(f, delta);
    while &cur != f {
        debug_assert!(is_reduced_indefinite(&cur, delta));
        cycle.push(cur.clone());
        let (next, _) = rho_step(&cur, delta);
        cur = next;
    }
    cycle
}

fn check_desk_scale(delta: &BigInt) -> Result<i64> {
    if !is_fundamental_discriminant(delta)? {
        return Err(Error::NotFundamental(delta.to_string()));
    }
    let d: i64 = delta
        .try_into()
        .map_err(|_| Error::TooLarge(delta.to_string(), DELTA_BOUND.to_string()))?;
    if d.abs() > DELTA_BOUND {
        return Err(Error::TooLarge(delta.to_string(), DELTA_BOUND.to_string()));
    }
    Ok(d)
}

/// Every reduced primitive form of discriminant `delta`, sorted.
pub fn enumerate_reduced(delta: &BigInt) -> Result<Vec<Form>> {
    let d = check_desk_scale(delta)?;
    let mut out = Vec::new();
    if d < 0 {
        // |b| <= a <= c with 4ac = b^2 - delta
        let mut a: i64 = 1;
        while 3 * a * a <= -d {
            for bb in -a + 1..=a {
                if (bb - d).rem_euclid(2) != 0 {
                    continue;
                }
                let num = bb * bb - d;
                if num % (4 * a) != 0 {
                    continue;
                }
                let c = num / (4 * a);
                if c < a {
                    continue;
                }
                if bb < 0 && (-bb == a || a == c) {
                    continue;
                }
                let f = Form::new(a, bb, c);
                if f.is_primitive() {
                    out.push(f);
                }
            }
            a += 1;
        }
    } else {
        let mut s = 0i64;
        while (s + 1) * (s + 1) < d {
            s += 1;
        }
        for bb in 1..=s {
            if (bb - d).rem_euclid(2) != 0 {
                continue;
            }
            let n = (bb * bb - d) / 4; // negative
            let nabs = -n;
            let mut a_abs = 1i64;
            while a_abs * a_abs <= nabs {
                if nabs % a_abs == 0 {
                    for a in [a_abs, -a_abs, nabs / a_abs, -(nabs / a_abs)] {
                        let c = n / a;
                        let f = Form::new(a, bb, c);
                        if is_reduced_indefinite(&f, delta) && f.is_primitive() && !out.contains(&f)
                        {
                            out.push(f);
                        }
                    }
                }
                a_abs += 1;
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Class count by pure enumeration: reduced forms for `delta < 0`,
/// rho-cycles of reduced forms for `delta > 0`. Serves as the oracle the
/// composition-backed group is validated against.
pub fn count_classes_by_enumeration(delta: &BigInt) -> Result<usize> {
    let reduced = enumerate_reduced(delta)?;
    if delta.is_negative() {
        return Ok(reduced.len());
    }
    let mut seen: HashMap<Form, bool> = HashMap::new();
    let mut classes = 0usize;
    for f in &reduced {
        if seen.contains_key(f) {
            continue;
        }
        classes += 1;
        for g in reduction_cycle(f, delta) {
            seen.insert(g, true);
        }
    }
    Ok(classes)
}

/// One proper equivalence class: deterministic representative plus every
/// reduced form in the class.
#[derive(Debug, Clone)]
pub struct ClassData {
    pub rep: Form,
    pub cycle: Vec<Form>,
}

/// An enumerated narrow class group with its composition table.
#[derive(Debug, Clone)]
pub struct ClassGroup {
    delta: BigInt,
    classes: Vec<ClassData>,
    table: Vec<Vec<usize>>,
    identity: usize,
    index: HashMap<Form, usize>,
}

impl ClassGroup {
    pub fn delta(&self) -> &BigInt {
        &self.delta
    }

    pub fn order(&self) -> usize {
        self.classes.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn classes(&self) -> &[ClassData] {
        &self.classes
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn compose(&self, i: usize, j: usize) -> usize {
        self.table[i][j]
    }

    /// Index of the proper equivalence class of `f`.
    pub fn class_of(&self, f: &Form) -> Result<usize> {
        let red = reduce(f, &self.delta)?;
        self.index.get(&red.form).copied().ok_or_else(|| {
            Error::MixedDiscriminants(f.discriminant().to_string(), self.delta.to_string())
        })
    }

    pub fn inverse_of(&self, i: usize) -> usize {
        (0..self.order())
            .find(|&j| self.table[i][j] == self.identity)
            .expect("every class has an inverse")
    }

    /// Multiplicative order of class `i`.
    pub fn element_order(&self, i: usize) -> usize {
        let mut cur = i;
        let mut n = 1usize;
        while cur != self.identity {
            cur = self.table[cur][i];
            n += 1;
        }
        n
    }

    /// The subgroup `{g^2}` with its inherited composition table.
    pub fn squares_subgroup(&self) -> ClassGroup {
        let mut members: Vec<usize> = (0..self.order()).map(|i| self.table[i][i]).collect();
        members.sort_unstable();
        members.dedup();
        let pos: HashMap<usize, usize> = members.iter().enumerate().map(|(s, &g)| (g, s)).collect();
        let table: Vec<Vec<usize>> = members
            .iter()
            .map(|&i| members.iter().map(|&j| pos[&self.table[i][j]]).collect())
            .collect();
        let classes: Vec<ClassData> = members.iter().map(|&i| self.classes[i].clone()).collect();
        let mut index = HashMap::new();
        for (s, class) in classes.iter().enumerate() {
            for f in &class.cycle {
                index.insert(f.clone(), s);
            }
        }
        ClassGroup {
            delta: self.delta.clone(),
            identity: pos[&self.identity],
            classes,
            table,
            index,
        }
    }
}

/// Enumerate the narrow class group of a fundamental discriminant and build
/// its composition table by Bezout composition followed by reduction.
pub fn narrow_class_group(delta: &BigInt) -> Result<ClassGroup> {
    let reduced = enumerate_reduced(delta)?;
    let mut classes: Vec<ClassData> = Vec::new();
    let mut index: HashMap<Form, usize> = HashMap::new();
    if delta.is_negative() {
        for f in reduced {
            index.insert(f.clone(), classes.len());
            classes.push(ClassData {
                rep: f.clone(),
                cycle: vec![f],
            });
        }
    } else {
        for f in &reduced {
            if index.contains_key(f) {
                continue;
            }
            let cycle = reduction_cycle(f, delta);
            let id = classes.len();
            for g in &cycle {
                index.insert(g.clone(), id);
            }
            let rep = cycle
                .iter()
                .filter(|g| g.a.is_positive())
                .min()
                .expect("every cycle alternates signs")
                .clone();
            classes.push(ClassData { rep, cycle });
        }
    }

    let h = classes.len();
    let mut table = vec![vec![0usize; h]; h];
    let fclasses: Vec<FClass> = classes
        .iter()
        .map(|c| FClass::from_form(delta.clone(), &c.rep))
        .collect::<Result<_>>()?;
    for i in 0..h {
        for j in 0..=i {
            let composed = fclasses[i].compose(&fclasses[j])?;
            let red = reduce(&composed.form(), delta)?;
            let k = *index.get(&red.form).ok_or_else(|| {
                Error::InvalidClassRep(format!(
                    "composition left the enumerated classes: {}",
                    red.form
                ))
            })?;
            table[i][j] = k;
            table[j][i] = k;
        }
    }

    let principal = reduce(&principal_form(delta)?, delta)?;
    let identity = index[&principal.form];
    Ok(ClassGroup {
        delta: delta.clone(),
        classes,
        table,
        identity,
        index,
    })
}

/// Does a proper equivalence `Q1 ~ Q2` hold? Exact, via reduction.
pub fn is_properly_equivalent(q1: &Form, q2: &Form) -> Result<bool> {
    let d1 = q1.discriminant();
    if d1 != q2.discriminant() {
        return Err(Error::MixedDiscriminants(
            d1.to_string(),
            q2.discriminant().to_string(),
        ));
    }
    if d1.is_negative() {
        if q1.a.is_negative() != q2.a.is_negative() {
            return Ok(false);
        }
        if q1.a.is_negative() {
            let neg = |f: &Form| Form::new(-&f.a, -&f.b, -&f.c);
            return Ok(reduce(&neg(q1), &d1)?.form == reduce(&neg(q2), &d1)?.form);
        }
        return Ok(reduce(q1, &d1)?.form == reduce(q2, &d1)?.form);
    }
    let r1 = reduce(q1, &d1)?.form;
    let r2 = reduce(q2, &d1)?.form;
    Ok(reduction_cycle(&r2, &d1).contains(&r1))
}

/// Integer representation of 1 by `Q`, certified through the reduction
/// machinery: a witness exists iff `Q` is properly equivalent to the
/// principal form, in which case the certificate matrices transport the
/// principal form's `(1, 0)`.
pub fn represents_one_integrally(q: &Form) -> Result<Option<(BigInt, BigInt)>> {
    let delta = q.discriminant();
    if !is_fundamental_discriminant(&delta)? {
        return Err(Error::NotFundamental(delta.to_string()));
    }
    if delta.is_negative() && q.a.is_negative() {
        return Ok(None); // negative definite forms represent no positive value
    }
    let target = reduce(q, &delta)?;
    let principal = reduce(&principal_form(&delta)?, &delta)?;

    // walk the principal cycle with accumulated certificates
    let mut walk: Vec<(Form, IntMat2)> =
        vec![(principal.form.clone(), principal.certificate.clone())];
    if delta.is_positive() {
        let (mut cur, mut acc) = (principal.form.clone(), principal.certificate.clone());
        loop {
            let (next, m) = rho_step(&cur, &delta);
            if next == principal.form {
                break;
            }
            acc = acc.mul(&m);
            cur = next;
            walk.push((cur.clone(), acc.clone()));
        }
    }
    for (form, cert) in &walk {
        if form == &target.form {
            // q . target.certificate = form = q0 . cert, so
            // q0 = q . (target.certificate * cert^{-1})
            let w = target.certificate.mul(&cert.inverse_unimodular()?);
            let (t, u) = (w.a.clone(), w.c.clone());
            debug_assert!(q.eval_int(&t, &u).is_one());
            return Ok(Some((t, u)));
        }
    }
    Ok(None)
}

/// Census record: a square-leading-coefficient form whose torsor has the
/// rational point `(1/A, 0)` but no integral point.
#[derive(Debug, Clone)]
pub struct ObstructionRecord {
    pub delta: BigInt,
    pub form: Form,
    pub denominator: BigInt,
    pub class_order: usize,
}

impl ObstructionRecord {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "delta": self.delta.to_string().parse::<i64>().ok(),
            "form": [self.form.a.to_string(), self.form.b.to_string(), self.form.c.to_string()],
            "rational_point": format!("(1/{} ; 0)", self.denominator),
            "integral": false,
            "class_order": self.class_order,
        })
    }
}

/// A form of the given class with positive leading coefficient coprime to
/// `delta`, as an upper-triangular class representative. Searched over
/// primitive value pairs in an expanding box.
pub fn coprime_class_rep(rep: &Form, delta: &BigInt) -> Result<FClass> {
    for bound in [4i64, 8, 16, 32, 64] {
        for x in -bound..=bound {
            for y in -bound..=bound {
                let (xb, yb) = (BigInt::from(x), BigInt::from(y));
                if xb.gcd(&yb) != BigInt::one() {
                    continue;
                }
                let v = rep.eval_int(&xb, &yb);
                if !v.is_positive() || !v.gcd(delta).is_one() {
                    continue;
                }
                let (g, s, t) = ext_gcd2(&xb, &yb);
                debug_assert!(g.is_one());
                // first column (x, y); determinant x*s - (-t)*y = 1
                let m = IntMat2::new(xb, -t, yb, s);
                debug_assert!(m.det().is_one());
                let f = rep.apply(&m)?;
                debug_assert_eq!(&f.a, &v);
                return FClass::from_form(delta.clone(), &f);
            }
        }
    }
    Err(Error::InvalidClassRep(format!(
        "no leading coefficient coprime to {delta} found for {rep}"
    )))
}

/// For each nontrivial class of the squares subgroup, emit a representative
/// square-leading-coefficient form together with the evidence that it
/// represents 1 rationally but not integrally.
pub fn sha_census(delta: &BigInt) -> Result<Vec<ObstructionRecord>> {
    let group = narrow_class_group(delta)?;
    let squares = group.squares_subgroup();
    let mut out = Vec::new();
    for sub_id in 0..squares.order() {
        if sub_id == squares.identity() {
            continue;
        }
        let class_form = &squares.classes()[sub_id].rep;
        let parent_id = group.class_of(class_form)?;
        let root = (0..group.order())
            .find(|&i| group.compose(i, i) == parent_id)
            .expect("member of the squares subgroup");
        let f2 = coprime_class_rep(&group.classes()[root].rep, delta)?.square()?;
        let form = f2.form();
        debug_assert_eq!(group.class_of(&form)?, parent_id);
        let witness = represents_one_integrally(&form)?;
        debug_assert!(witness.is_none(), "nontrivial class cannot represent 1");
        out.push(ObstructionRecord {
            delta: delta.clone(),
            form,
            denominator: f2.a().clone(),
            class_order: squares.element_order(sub_id),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn reduce_examples() {
        // principal form of 229 lands in the two-element principal cycle
        let d = b(229);
        let red = reduce(&Form::new(1, 1, -57), &d).unwrap();
        assert!(is_reduced(&red.form, &d));
        assert_eq!(
            Form::new(1, 1, -57).apply(&red.certificate).unwrap(),
            red.form
        );
        let cyc = reduction_cycle(&red.form, &d);
        assert_eq!(cyc.len(), 2);
        assert!(cyc.contains(&Form::new(1, 15, -1)));
        assert!(cyc.contains(&Form::new(-1, 15, 1)));

        // an already-reduced definite form is untouched
        let f = Form::new(1, 0, 1);
        let red = reduce(&f, &b(-4)).unwrap();
        assert_eq!(red.form, f);
        assert_eq!(red.certificate, IntMat2::identity());

        // the worked square reduces with a valid certificate
        let f = Form::new(50625, 63223, 19739);
        let red = reduce(&f, &d).unwrap();
        assert!(is_reduced(&red.form, &d));
        assert_eq!(f.apply(&red.certificate).unwrap(), red.form);
    }

    #[test]
    fn equivalence_examples() {
        let q0 = Form::new(1, 1, -57);
        assert!(is_properly_equivalent(&q0, &q0).unwrap());
        assert!(!is_properly_equivalent(&q0, &Form::new(3, 13, -5)).unwrap());
        let m = IntMat2::new(5, 2, 2, 1);
        assert!(m.det().is_one());
        let moved = q0.apply(&m).unwrap();
        assert!(is_properly_equivalent(&q0, &moved).unwrap());
    }

    #[test]
    fn enumeration_oracle_counts() {
        assert_eq!(count_classes_by_enumeration(&b(5)).unwrap(), 1);
        assert_eq!(count_classes_by_enumeration(&b(-4)).unwrap(), 1);
        assert_eq!(count_classes_by_enumeration(&b(229)).unwrap(), 3);
        assert_eq!(count_classes_by_enumeration(&b(8)).unwrap(), 1);
        assert_eq!(count_classes_by_enumeration(&b(13)).unwrap(), 1);
        assert_eq!(count_classes_by_enumeration(&b(-23)).unwrap(), 3);
    }

    #[test]
    fn group_orders_match_oracle() {
        for d in [5i64, 8, 13, 229, -4, -23, 12, -8, 40, -39, 136] {
            let delta = b(d);
            let g = narrow_class_group(&delta).unwrap();
            assert_eq!(
                g.order(),
                count_classes_by_enumeration(&delta).unwrap(),
                "delta {d}"
            );
        }
    }

    #[test]
    fn table_is_a_group() {
        for d in [229i64, -23, 145, -47] {
            let g = narrow_class_group(&b(d)).unwrap();
            let h = g.order();
            let e = g.identity();
            for i in 0..h {
                assert_eq!(g.compose(e, i), i);
                g.inverse_of(i); // panics if missing
                let mut row: Vec<usize> = (0..h).map(|j| g.compose(i, j)).collect();
                row.sort_unstable();
                assert_eq!(row, (0..h).collect::<Vec<_>>());
            }
            for i in 0..h.min(4) {
                for j in 0..h.min(4) {
                    for k in 0..h.min(4) {
                        assert_eq!(g.compose(g.compose(i, j), k), g.compose(i, g.compose(j, k)));
                    }
                }
            }
        }
    }

    #[test]
    fn narrow_differs_from_wide_when_needed() {
        // delta = 12 (field Q(sqrt(3))): the fundamental unit 2+sqrt(3) has
        // norm +1, so the narrow group is Z/2 while h = 1.
        let g = narrow_class_group(&b(12)).unwrap();
        assert_eq!(g.order(), 2);
        let g = narrow_class_group(&b(40)).unwrap();
        assert_eq!(g.order(), 2);
    }

    #[test]
    fn squares_subgroup_examples() {
        let g = narrow_class_group(&b(5)).unwrap();
        assert_eq!(g.squares_subgroup().order(), 1);

        // odd order: squaring is onto
        let g = narrow_class_group(&b(229)).unwrap();
        assert_eq!(g.squares_subgroup().order(), 3);

        // delta = 12: exponent-2 group squares to the trivial subgroup
        let g = narrow_class_group(&b(12)).unwrap();
        assert_eq!(g.squares_subgroup().order(), 1);
    }

    #[test]
    fn representability_examples() {
        let q0 = Form::new(1, 1, -57);
        let (t, u) = represents_one_integrally(&q0).unwrap().unwrap();
        assert!(q0.eval_int(&t, &u).is_one());

        // (225, 223, 55) is principal over delta 229: a witness exists
        let q = Form::new(225, 223, 55);
        let (t, u) = represents_one_integrally(&q).unwrap().unwrap();
        assert!(q.eval_int(&t, &u).is_one());

        // (9, 43, 45) lies in a nonprincipal class
        assert_eq!(
            represents_one_integrally(&Form::new(9, 43, 45)).unwrap(),
            None
        );
        assert_eq!(
            represents_one_integrally(&Form::new(9, 7, -5)).unwrap(),
            None
        );

        // certificate transport: a unimodular substitution moves the witness
        let m = IntMat2::new(7, 3, 2, 1);
        assert!(m.det().is_one());
        let moved = q0.apply(&m).unwrap();
        let (t, u) = represents_one_integrally(&moved).unwrap().unwrap();
        assert!(moved.eval_int(&t, &u).is_one());
    }

    #[test]
    fn census_229() {
        let records = sha_census(&b(229)).unwrap();
        assert_eq!(records.len(), 2);
        for r in &records {
            assert_eq!(r.form.discriminant(), b(229));
            // leading coefficient is the square of the point denominator,
            // so Q(1/A, 0) = 1 exactly
            assert_eq!(&r.form.a, &(&r.denominator * &r.denominator));
            assert_eq!(represents_one_integrally(&r.form).unwrap(), None);
            assert_eq!(r.class_order, 3);
        }
    }

    #[test]
    fn census_trivial() {
        assert!(sha_census(&b(5)).unwrap().is_empty());
        assert!(sha_census(&b(-4)).unwrap().is_empty());
    }

    #[test]
    fn census_matches_squares_subgroup_count() {
        for d in [5i64, 8, 13, 229, -4, -23, 12, 40, -39, 316] {
            let delta = b(d);
            let g = narrow_class_group(&delta).unwrap();
            let expect = g.squares_subgroup().order() - 1;
            assert_eq!(sha_census(&delta).unwrap().len(), expect, "delta {d}");
        }
    }

    #[test]
    fn errors() {
        assert!(matches!(
            narrow_class_group(&b(7)),
            Err(Error::NotFundamental(_))
        ));
        assert!(matches!(
            reduce(&Form::new(2, 2, 2), &b(-12)),
            Err(Error::NotPrimitive(_))
        ));
        assert!(matches!(
            reduce(&Form::new(-1, 0, -1), &b(-4)),
            Err(Error::NegativeDefinite(_))
        ));
    }
}
