//! Deterministic sample generation for the property suites: bounded exact
//! searches for conic points, integral torsor points and form classes, and
//! seeded pseudo-random selection where sampling is called for.
//!
//! Searches are honest about misses: a combination of discriminant and
//! field may simply contain no small points, in which case the pool is
//! smaller. The suites count what they actually exercised.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::conic::{ConicPoint, PellConic};
use crate::error::Result;
use crate::forms::{q0_at, F2Class};
use crate::primitive::{analyze_point, phi_inv, PrimitiveData};
use crate::quadfield::QElem;
use crate::torsor::TorsorPoint;

/// Knobs for the bounded searches.
#[derive(Debug, Clone)]
pub struct SampleConfig {
    pub seed: u64,
    /// Half-width of the integral-coordinate boxes.
    pub coord_bound: i64,
    /// Largest denominator tried for non-integral conic points.
    pub denom_bound: i64,
    /// Largest unsquared leading coefficient in form-class scans.
    pub max_lead: i64,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            seed: 0,
            coord_bound: 8,
            denom_bound: 16,
            max_lead: 16,
        }
    }
}

/// Fields the point searches try, in order.
pub const FIELDS: [i64; 10] = [-1, 2, 3, 5, -2, -3, 6, 7, -5, -6];

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn mix_seed(seed: u64, delta: &BigInt, m: i64) -> u64 {
    let d: i64 = delta.try_into().unwrap_or(0);
    seed ^ (d as u64).wrapping_mul(0x9e3779b97f4a7c15)
        ^ (m as u64).wrapping_mul(0xc2b2ae3d27d4eb4f)
}

/// Random rational points via the slope parametrization through (1, 0):
/// `x = -(q^2 + m p^2)/D`, `y = -p(2q + sigma p)/D`,
/// `D = q^2 + sigma p q - m p^2`.
pub fn rational_points(conic: &PellConic, count: usize, rng: &mut ChaCha8Rng) -> Vec<ConicPoint> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < count && attempts < count * 40 {
        attempts += 1;
        let p = BigInt::from(rng.gen_range(-60i64..=60));
        let q = BigInt::from(rng.gen_range(1i64..=60));
        let d = &q * &q + conic.sigma() * &p * &q - conic.m() * &p * &p;
        if d.is_zero() {
            continue;
        }
        let x = QElem::rational(-(&q * &q + conic.m() * &p * &p), d.clone()).expect("d != 0");
        let y =
            QElem::rational(-&p * (BigInt::from(2) * &q + conic.sigma() * &p), d).expect("d != 0");
        let point = ConicPoint::new(x, y);
        debug_assert!(conic.contains(&point));
        if seen.insert(point.clone()) {
            out.push(point);
        }
    }
    out
}

/// Solutions `x` of the conic equation for a fixed `y`, inside Q(sqrt(m)):
/// `x = (-sigma y +- w)/2` with `w^2 = delta y^2 + 4`.
fn solve_for_x(conic: &PellConic, y: &QElem, m: &BigInt) -> Vec<ConicPoint> {
    let mut out = Vec::new();
    let Ok(y2) = y.mul(y) else { return out };
    let Ok(disc) = y2.mul_int(conic.delta()).add(&QElem::from_int(4)) else {
        return out;
    };
    let Some(w) = disc.sqrt_in(m) else { return out };
    for root in [w.clone(), w.neg()] {
        let Ok(num) = root.sub(&y.mul_int(conic.sigma())) else {
            continue;
        };
        let x = num.div_int(&BigInt::from(2)).expect("2 != 0");
        let p = ConicPoint::new(x, y.clone());
        if conic.contains(&p) {
            out.push(p);
        }
    }
    out
}

/// Bounded search for points of the conic with coordinates in Q(sqrt(m)):
/// `y` ranges over integral elements of the field divided by small
/// denominators.
pub fn field_points(conic: &PellConic, m: i64, cfg: &SampleConfig) -> Vec<ConicPoint> {
    let mb = BigInt::from(m);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for den in 1..=cfg.denom_bound {
        for s in -cfg.coord_bound..=cfg.coord_bound {
            for t in -cfg.coord_bound..=cfg.coord_bound {
                let Ok(base) =
                    QElem::from_integral_coords(&mb, &BigInt::from(s), &BigInt::from(t))
                else {
                    continue;
                };
                let Ok(y) = base.div_int(&BigInt::from(den)) else {
                    continue;
                };
                for p in solve_for_x(conic, &y, &mb) {
                    if seen.insert(p.clone()) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

/// Bounded search for integral points `(t, u)` of the torsor of `q` with
/// coordinates in Q(sqrt(m)): `u` ranges over a box in the ring of
/// integers, `t` is solved from the quadratic.
pub fn torsor_points(q: &F2Class, m: i64, coord_bound: i64) -> Vec<TorsorPoint> {
    let mb = BigInt::from(m);
    let delta = q.delta().clone();
    let a_sq = q.a() * q.a();
    let form = q.form();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for s in -coord_bound..=coord_bound {
        for t in -coord_bound..=coord_bound {
            let Ok(u) = QElem::from_integral_coords(&mb, &BigInt::from(s), &BigInt::from(t))
            else {
                continue;
            };
            let Ok(u2) = u.mul(&u) else { continue };
            let Ok(disc) = u2
                .mul_int(&delta)
                .add(&QElem::from_int(BigInt::from(4) * &a_sq))
            else {
                continue;
            };
            let Some(w) = disc.sqrt_in(&mb) else { continue };
            for root in [w.clone(), w.neg()] {
                let Ok(num) = root.sub(&u.mul_int(&form.b)) else {
                    continue;
                };
                let Ok(tt) = num.div_int(&(BigInt::from(2) * &a_sq)) else {
                    continue;
                };
                if !tt.is_integral() {
                    continue;
                }
                let point = TorsorPoint::new(tt, u.clone());
                if matches!(form.eval(&point.t, &point.u), Ok(v) if v.is_one())
                    && seen.insert(point.clone())
                {
                    out.push(point);
                }
            }
        }
    }
    out
}

/// Every class with square leading coefficient `A^2`, `A <= max_lead`,
/// `gcd(A, delta) = 1`, in deterministic order. Includes the principal
/// class.
pub fn f2_classes(delta: &BigInt, max_lead: i64) -> Result<Vec<F2Class>> {
    let mut out = Vec::new();
    for a in 1..=max_lead {
        let ab = BigInt::from(a);
        if !ab.gcd(delta).is_one() {
            continue;
        }
        let a_sq = &ab * &ab;
        let mut beta = BigInt::zero();
        while beta < a_sq {
            if q0_at(delta, &beta).mod_floor(&a_sq).is_zero() {
                out.push(F2Class::new(delta.clone(), ab.clone(), beta.clone())?);
            }
            beta += 1;
        }
    }
    Ok(out)
}

/// A pool of primitive points of the conic with coordinates in Q(sqrt(m))
/// or Q: integral torsor points pulled back through the inverse
/// substitution, rational points, and pairwise sums.
pub fn primitive_pool(
    conic: &PellConic,
    m: i64,
    cfg: &SampleConfig,
) -> Vec<(ConicPoint, PrimitiveData)> {
    let mut rng = seeded_rng(mix_seed(cfg.seed, conic.delta(), m));
    let mut seen: HashSet<ConicPoint> = HashSet::new();
    let mut pool: Vec<(ConicPoint, PrimitiveData)> = Vec::new();

    fn push(
        conic: &PellConic,
        point: ConicPoint,
        pool: &mut Vec<(ConicPoint, PrimitiveData)>,
        seen: &mut HashSet<ConicPoint>,
    ) {
        if seen.contains(&point) {
            return;
        }
        if let Some(data) = analyze_point(conic, &point) {
            seen.insert(point.clone());
            pool.push((point, data));
        }
    }

    let classes = f2_classes(conic.delta(), cfg.max_lead).unwrap_or_default();
    for class in &classes {
        for tp in torsor_points(class, m, cfg.coord_bound) {
            if let Ok(point) = phi_inv(class, &tp) {
                push(conic, point, &mut pool, &mut seen);
            }
        }
    }
    for point in rational_points(conic, 12, &mut rng) {
        push(conic, point, &mut pool, &mut seen);
    }
    let narrow = SampleConfig {
        denom_bound: 4,
        coord_bound: cfg.coord_bound.min(5),
        ..cfg.clone()
    };
    for point in field_points(conic, m, &narrow) {
        push(conic, point, &mut pool, &mut seen);
    }

    // enrich with sums of base points only; primitivity is closed under
    // the group law, and summing base pairs keeps denominators bounded
    let base = pool.len();
    if base >= 2 {
        for _ in 0..(2 * base) {
            if pool.len() >= 3 * base + 8 {
                break;
            }
            let i = rng.gen_range(0..base);
            let j = rng.gen_range(0..base);
            if let Ok(sum) = conic.add(&pool[i].0, &pool[j].0) {
                push(conic, sum, &mut pool, &mut seen);
            }
        }
    }
    pool
}

/// Random nonzero rational values with numerator and denominator bounded
/// by `bound`.
pub fn random_rationals(rng: &mut ChaCha8Rng, count: usize, bound: i64) -> Vec<QElem> {
    (0..count)
        .map(|_| {
            let num = rng.gen_range(-bound..=bound);
            let den = rng.gen_range(1..=bound);
            QElem::rational(BigInt::from(num), BigInt::from(den)).expect("den >= 1")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn conic(delta: i64) -> PellConic {
        PellConic::new(BigInt::from(delta)).unwrap()
    }

    #[test]
    fn rational_points_lie_on_conic() {
        let c = conic(229);
        let mut rng = seeded_rng(7);
        let pts = rational_points(&c, 25, &mut rng);
        assert!(pts.len() >= 20);
        assert!(pts.iter().all(|p| c.contains(p)));
    }

    #[test]
    fn field_search_finds_known_families() {
        let c = conic(229);
        let cfg = SampleConfig {
            coord_bound: 3,
            denom_bound: 15,
            ..Default::default()
        };
        let pts = field_points(&c, -1, &cfg);
        let target: ConicPoint = "((0+1*sqrt(-1))/5 ; (0-2*sqrt(-1))/15)".parse().unwrap();
        assert!(pts.contains(&target));
        assert!(pts.iter().all(|p| c.contains(p)));
    }

    #[test]
    fn torsor_search_finds_example_point() {
        let q = F2Class::new(BigInt::from(229), BigInt::from(15), BigInt::from(111)).unwrap();
        let pts = torsor_points(&q, -1, 3);
        let target: TorsorPoint = "(sqrt(-1) ; -2*sqrt(-1))".parse().unwrap();
        assert!(pts.contains(&target));
    }

    #[test]
    fn class_scan_includes_known_classes() {
        let classes = f2_classes(&BigInt::from(229), 16).unwrap();
        assert!(classes.iter().any(|c| c.is_principal()));
        assert!(classes
            .iter()
            .any(|c| c.a() == &BigInt::from(15) && c.beta() == &BigInt::from(111)));
        assert!(classes
            .iter()
            .any(|c| c.a() == &BigInt::from(3) && c.beta() == &BigInt::from(3)));
    }

    #[test]
    fn pools_are_nonempty_and_deterministic() {
        let c = conic(229);
        let cfg = SampleConfig::default();
        let pool1 = primitive_pool(&c, -1, &cfg);
        let pool2 = primitive_pool(&c, -1, &cfg);
        assert!(pool1.len() >= 8, "pool too small: {}", pool1.len());
        assert_eq!(
            pool1.iter().map(|(p, _)| p.clone()).collect::<Vec<_>>(),
            pool2.iter().map(|(p, _)| p.clone()).collect::<Vec<_>>()
        );
    }

    #[test]
    fn nonprincipal_pool_exists_for_minus_39() {
        // delta = -39 over Q(i) carries primitive points whose attached
        // class is nonprincipal, e.g. from the torsor of (4, 3, 3)
        let c = conic(-39);
        let pool = primitive_pool(&c, -1, &SampleConfig::default());
        let group = crate::classgroup::narrow_class_group(&BigInt::from(-39)).unwrap();
        let nonprincipal = pool
            .iter()
            .filter(|(_, d)| crate::primitive::lambda_k(d, &group).unwrap() != group.identity())
            .count();
        assert!(nonprincipal > 0);
    }
}
