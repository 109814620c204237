//! Endomorphism catalog: unit groups, norm-equation solving, recognition of
//! the `(a, −3a², a³)` family, and explicit endomorphism application.
//!
//! Recognition is catalog-based: j ∈ {0, 1728} for the extra units, the
//! explicit coefficient pattern for the degree-2 case, plus a user-level
//! override policy. Nothing here attempts general endomorphism-ring
//! computation over C.

use num_traits::{One, Signed, Zero};

use crate::curve::{CurvePoint, WeierstrassCurve};
use crate::error::{Error, Result};
use crate::exact::{rat, rat_i64, QuadNum, Rat};

/// A complex multiplier together with its degree (norm).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndoDescriptor {
    pub element: QuadNum,
    pub degree: i64,
}

impl EndoDescriptor {
    pub fn new(element: QuadNum) -> Result<Self> {
        let n = element.norm();
        let degree = if n.denom().is_one() && !n.is_negative() {
            use num_traits::ToPrimitive;
            n.numer().to_i64().ok_or(Error::UnsupportedEndo(element.to_string()))?
        } else {
            return Err(Error::UnsupportedEndo(element.to_string()));
        };
        Ok(EndoDescriptor { element, degree })
    }
}

/// The unit group of the endomorphism ring, as explicit scalars.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitGroup {
    pub units: Vec<QuadNum>,
}

impl UnitGroup {
    fn generic() -> Self {
        UnitGroup {
            units: vec![QuadNum::one(), QuadNum::from_int(-1)],
        }
    }

    fn order_four() -> Self {
        let i = QuadNum::sqrt_d(-1);
        UnitGroup {
            units: vec![QuadNum::one(), QuadNum::from_int(-1), i.clone(), -i],
        }
    }

    fn order_six() -> Self {
        let zeta = QuadNum::new(rat(-1, 2), rat(1, 2), -3);
        let zeta2 = zeta.try_mul(&zeta).unwrap();
        UnitGroup {
            units: vec![
                QuadNum::one(),
                QuadNum::from_int(-1),
                zeta.clone(),
                -&zeta,
                zeta2.clone(),
                -&zeta2,
            ],
        }
    }
}

/// How unit detection treats the curve (CLI `--cm` flag).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CmPolicy {
    /// j-invariant catalog (the default).
    #[default]
    Auto,
    /// Force the generic unit group {±1} and skip the degree-2 family.
    None,
    /// Declare CM by the order of discriminant class `d` (−1, −3 widen the
    /// unit group; anything else behaves like the generic case).
    Declared(i64),
}

/// Unit group per the catalog: {±1} generically, four units at j = 1728,
/// six at j = 0.
pub fn units_of(curve: &WeierstrassCurve) -> UnitGroup {
    units_with_policy(curve, CmPolicy::Auto)
}

pub fn units_with_policy(curve: &WeierstrassCurve, policy: CmPolicy) -> UnitGroup {
    match policy {
        CmPolicy::None => UnitGroup::generic(),
        CmPolicy::Declared(-1) => UnitGroup::order_four(),
        CmPolicy::Declared(-3) => UnitGroup::order_six(),
        CmPolicy::Declared(_) => UnitGroup::generic(),
        CmPolicy::Auto => {
            let j = curve.j_invariant();
            if j.is_zero() {
                UnitGroup::order_six()
            } else if j.eq_value(&QuadNum::from_int(1728)) {
                UnitGroup::order_four()
            } else {
                UnitGroup::generic()
            }
        }
    }
}

/// All elements of the maximal order of Q(sqrt(d)) with norm `n`
/// (half-integer coordinates allowed when d ≡ 1 mod 4).
pub fn solve_norm(d: i64, n: i64) -> Result<Vec<QuadNum>> {
    if d >= 0 || n < 1 {
        return Err(Error::UnsupportedEndo(format!("solve_norm({d}, {n})")));
    }
    let (_, d) = crate::exact::squarefree_part(d);
    let half_coords = d.rem_euclid(4) == 1;
    let mut out = Vec::new();
    if half_coords {
        // (a + b√d)/2 with a ≡ b (mod 2): a² + |d| b² = 4n
        let target = 4 * n;
        let mut b = 0i64;
        while d.abs() * b * b <= target {
            let rest = target - d.abs() * b * b;
            let a = (rest as f64).sqrt().round() as i64;
            if a * a == rest && (a - b).rem_euclid(2) == 0 {
                push_signed(&mut out, rat(a, 2), rat(b, 2), d);
            }
            b += 1;
        }
    } else {
        // a + b√d: a² + |d| b² = n
        let mut b = 0i64;
        while d.abs() * b * b <= n {
            let rest = n - d.abs() * b * b;
            let a = (rest as f64).sqrt().round() as i64;
            if a * a == rest {
                push_signed(&mut out, rat_i64(a), rat_i64(b), d);
            }
            b += 1;
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn push_signed(out: &mut Vec<QuadNum>, a: Rat, b: Rat, d: i64) {
    for sa in [Rat::one(), -Rat::one()] {
        for sb in [Rat::one(), -Rat::one()] {
            let v = QuadNum::new(&a * &sa, &b * &sb, d);
            if !out.contains(&v) {
                out.push(v);
            }
        }
    }
}

/// Recognizes `(A, B, C) = (a, −3a², a³)` with `a ≠ 0` and returns `a`.
pub fn detect_ea_form(curve: &WeierstrassCurve) -> Option<QuadNum> {
    let a = curve.a2().clone();
    if a.is_zero() {
        return None;
    }
    let a_sq = a.try_mul(&a).ok()?;
    let want_b = QuadNum::from_int(-3).try_mul(&a_sq).ok()?;
    let want_c = a_sq.try_mul(&a).ok()?;
    if curve.a4().eq_value(&want_b) && curve.a6().eq_value(&want_c) {
        Some(a)
    } else {
        None
    }
}

/// Applies an endomorphism to a point. Supported combinations:
/// integers on any curve, the fourth-root units on curves with depressed
/// `q = 0`, the sixth-root units on depressed `p = 0`, and `±sqrt(-2)` on
/// the `(a, −3a², a³)` family.
pub fn endo_apply(
    curve: &WeierstrassCurve,
    e: &EndoDescriptor,
    point: &CurvePoint,
) -> Result<CurvePoint> {
    let el = &e.element;
    if let Some(n) = el.as_integer() {
        use num_traits::ToPrimitive;
        let n = n.to_i64().ok_or(Error::UnsupportedEndo(el.to_string()))?;
        return curve.scalar_mul(n, point);
    }
    match (el.discriminant(), e.degree) {
        (-1, 1) => unit_apply(curve, el, point),
        (-3, 1) => unit_apply(curve, el, point),
        (-2, 2) if el.rational_part().is_zero() => sqrt_minus_two_apply(curve, el, point),
        _ => Err(Error::UnsupportedEndo(el.to_string())),
    }
}

/// `[u]P` through the depressed model: `ξ ↦ u⁻²ξ`, `y ↦ u⁻³y`.
fn unit_apply(curve: &WeierstrassCurve, u: &QuadNum, point: &CurvePoint) -> Result<CurvePoint> {
    let (x, y) = match point {
        CurvePoint::Infinity => return Ok(CurvePoint::Infinity),
        CurvePoint::Affine { x, y } => (x, y),
    };
    if !curve.contains(point) {
        return Err(Error::PointNotOnCurve(x.to_string(), y.to_string()));
    }
    let dep = curve.depressed_form();
    // only genuine roots of unity act this way, and only on the matching
    // normal form: ±i needs q = 0, the sixth-root units need p = 0
    let ok = match u.discriminant() {
        -1 => dep.q.is_zero() && u.rational_part().is_zero() && u.radical_part().abs().is_one(),
        -3 => {
            dep.p.is_zero()
                && u.rational_part().abs() == rat(1, 2)
                && u.radical_part().abs() == rat(1, 2)
        }
        _ => false,
    };
    if !ok {
        return Err(Error::UnsupportedEndo(u.to_string()));
    }
    let u2 = u.try_mul(u).unwrap();
    let inv_u2 = QuadNum::one().try_div(&u2).unwrap();
    let inv_u3 = QuadNum::one()
        .try_div(&u2.try_mul(u).unwrap())
        .unwrap();
    let xi = x.try_add(&dep.shift).map_err(field_clash)?;
    let new_x = inv_u2
        .try_mul(&xi)
        .and_then(|v| v.try_sub(&dep.shift))
        .map_err(field_clash)?;
    let new_y = inv_u3.try_mul(y).map_err(field_clash)?;
    Ok(CurvePoint::Affine { x: new_x, y: new_y })
}

fn field_clash(e: Error) -> Error {
    match e {
        Error::IncompatibleFields(a, b) => Error::UnsupportedEndo(format!(
            "point coordinates in Q(sqrt {a}) cannot carry a Q(sqrt {b}) multiplier"
        )),
        other => other,
    }
}

/// The explicit degree-2 endomorphism on `y² = x³ + ax² − 3a²x + a³`:
/// `(X, Y) ↦ (−(X + a + 2a²/(X−a))/2, (√−2/4)·Y·(1 − 2a²/(X−a)²))`,
/// with the kernel {∞, (a, 0)} mapping to ∞.
fn sqrt_minus_two_apply(
    curve: &WeierstrassCurve,
    el: &QuadNum,
    point: &CurvePoint,
) -> Result<CurvePoint> {
    let a = detect_ea_form(curve).ok_or_else(|| Error::UnsupportedEndo(el.to_string()))?;
    let (x, y) = match point {
        CurvePoint::Infinity => return Ok(CurvePoint::Infinity),
        CurvePoint::Affine { x, y } => (x, y),
    };
    if !curve.contains(point) {
        return Err(Error::PointNotOnCurve(x.to_string(), y.to_string()));
    }
    let diff = x.try_sub(&a).map_err(field_clash)?;
    if diff.is_zero() {
        return Ok(CurvePoint::Infinity);
    }
    let a2 = a.try_mul(&a).unwrap();
    let two_a2 = QuadNum::from_int(2).try_mul(&a2).unwrap();
    let new_x = x
        .try_add(&a)
        .and_then(|s| s.try_add(&two_a2.try_div(&diff)?))
        .and_then(|s| s.try_div(&QuadNum::from_int(-2)))
        .map_err(field_clash)?;
    // y-multiplier: (√−2/4)(1 − 2a²/(X−a)²); which square root names the
    // endomorphism is immaterial to every identity this crate checks.
    let root = QuadNum::new(Rat::zero(), rat(1, 4), -2);
    let root = if el.radical_part().is_negative() {
        -root
    } else {
        root
    };
    let factor = QuadNum::one()
        .try_sub(&two_a2.try_div(&diff.try_mul(&diff)?)?)
        .map_err(field_clash)?;
    let new_y = y
        .try_mul(&factor)
        .and_then(|v| v.try_mul(&root))
        .map_err(field_clash)?;
    Ok(CurvePoint::Affine { x: new_x, y: new_y })
}
