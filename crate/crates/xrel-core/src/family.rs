//! Classification of the curve families inside the relation surface
//! `c1·x1 + c2·x2 + c3·x3 = 0` on E³, with exact symbolic verification and
//! membership tests.
//!
//! Four shapes occur:
//!   (a) one free slot, the other two pinned at infinity;
//!   (b) `(P, [u]P)` in two slots and a constant point `R` in the third,
//!       for a unit `u` with `c_i·u² + c_j = 0`;
//!   (c) `(P, [u]P, [v]P)` for unit pairs satisfying the full symbolic
//!       identity (which adds `A·(c1+c2+c3) = 0` on shifted models);
//!   (d) `([λ]P, ±P, ±P + (a,0))` on the `(a, −3a², a³)` family when one
//!       coefficient doubles the other two.
//!
//! Every emitted descriptor passes the function-field identity before it is
//! included; the constant in case (b) comes from the symbolic oracle, never
//! from a closed-form transcription.

use std::cmp::Ordering;

use serde::Serialize;

use crate::cm::{detect_ea_form, units_with_policy, CmPolicy};
use crate::curve::{CurvePoint, WeierstrassCurve};
use crate::error::{Error, Result};
use crate::exact::{sqrt_in_extension, MultiQuad, QuadNum};
use crate::funcfield::{identity_check, x_function, CurveFunction, XTransform};
use crate::oracle::derive_caseb_constant;

/// The relation coefficients `(c1, c2, c3)`, all nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationCoeffs {
    c: [QuadNum; 3],
}

impl RelationCoeffs {
    pub fn new(c1: QuadNum, c2: QuadNum, c3: QuadNum) -> Result<Self> {
        let c = [c1, c2, c3];
        if c.iter().any(QuadNum::is_zero) {
            return Err(Error::ZeroCoefficient);
        }
        Ok(RelationCoeffs { c })
    }

    pub fn from_ints(c1: i64, c2: i64, c3: i64) -> Result<Self> {
        Self::new(
            QuadNum::from_int(c1),
            QuadNum::from_int(c2),
            QuadNum::from_int(c3),
        )
    }

    /// 0-based access.
    pub fn get(&self, slot: usize) -> &QuadNum {
        &self.c[slot]
    }

    pub fn as_array(&self) -> &[QuadNum; 3] {
        &self.c
    }

    /// Discriminant of the extension the coefficients live in.
    pub fn field_disc(&self) -> Result<i64> {
        crate::curve::unify_field(&[&self.c[0], &self.c[1], &self.c[2]])
    }
}

/// True iff some subsum of `c1 + c2 + c3` vanishes.
pub fn subsum_zero(coeffs: &RelationCoeffs) -> bool {
    let [c1, c2, c3] = coeffs.as_array();
    let pair = |a: &QuadNum, b: &QuadNum| a.try_add(b).map(|s| s.is_zero()).unwrap_or(false);
    let total = c1
        .try_add(c2)
        .and_then(|s| s.try_add(c3))
        .map(|s| s.is_zero())
        .unwrap_or(false);
    pair(c1, c2) || pair(c1, c3) || pair(c2, c3) || total
}

/// A classified family, tagged by case.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "case")]
#[allow(clippy::large_enum_variant)]
pub enum FamilyDescriptor {
    /// `{(P, e, e)}` with the free slot marked (1-based).
    #[serde(rename = "a")]
    CaseA { free_slot: u8 },
    /// `{(P, [u]P, R)}` with the constant slot marked; the moving slots are
    /// the remaining two in increasing order, multiplier 1 on the lower.
    #[serde(rename = "b")]
    CaseB {
        const_slot: u8,
        unit: QuadNum,
        r: CurvePoint,
        x_r: QuadNum,
    },
    /// `{(P, [u]P, [v]P)}`.
    #[serde(rename = "c")]
    CaseC { u: QuadNum, v: QuadNum },
    /// `{([λ]P, sP, sP + (a,0))}` permuted: `endo_slot` holds `[λ]P`,
    /// `plus_slot` holds `sP`, the remaining slot holds `sP + (a,0)`.
    #[serde(rename = "d")]
    CaseD {
        endo_slot: u8,
        plus_slot: u8,
        sign: i8,
        a: QuadNum,
    },
}

impl FamilyDescriptor {
    fn case_rank(&self) -> u8 {
        match self {
            FamilyDescriptor::CaseA { .. } => 0,
            FamilyDescriptor::CaseB { .. } => 1,
            FamilyDescriptor::CaseC { .. } => 2,
            FamilyDescriptor::CaseD { .. } => 3,
        }
    }

    /// Short stable label used in reports.
    pub fn label(&self) -> String {
        match self {
            FamilyDescriptor::CaseA { free_slot } => format!("a:free={free_slot}"),
            FamilyDescriptor::CaseB {
                const_slot, unit, r, ..
            } => format!("b:const={const_slot},u={unit},R={r}"),
            FamilyDescriptor::CaseC { u, v } => format!("c:u={u},v={v}"),
            FamilyDescriptor::CaseD {
                endo_slot,
                plus_slot,
                sign,
                ..
            } => format!("d:endo={endo_slot},plus={plus_slot},sign={sign:+}"),
        }
    }
}

impl PartialOrd for FamilyDescriptor {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FamilyDescriptor {
    fn cmp(&self, other: &Self) -> Ordering {
        use FamilyDescriptor::*;
        self.case_rank().cmp(&other.case_rank()).then_with(|| {
            match (self, other) {
                (CaseA { free_slot: a }, CaseA { free_slot: b }) => a.cmp(b),
                (
                    CaseB {
                        const_slot: k1,
                        unit: u1,
                        r: r1,
                        ..
                    },
                    CaseB {
                        const_slot: k2,
                        unit: u2,
                        r: r2,
                        ..
                    },
                ) => k1.cmp(k2).then_with(|| u1.cmp(u2)).then_with(|| r1.cmp(r2)),
                (CaseC { u: u1, v: v1 }, CaseC { u: u2, v: v2 }) => {
                    u1.cmp(u2).then_with(|| v1.cmp(v2))
                }
                (
                    CaseD {
                        endo_slot: k1,
                        plus_slot: p1,
                        sign: s1,
                        ..
                    },
                    CaseD {
                        endo_slot: k2,
                        plus_slot: p2,
                        sign: s2,
                        ..
                    },
                ) => k1.cmp(k2).then_with(|| p1.cmp(p2)).then_with(|| s1.cmp(s2)),
                _ => Ordering::Equal,
            }
        })
    }
}

/// A case-(b) coefficient condition that holds but admits no point with the
/// required x-coordinate inside the working field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnrealizedFamily {
    pub const_slot: u8,
    pub unit: QuadNum,
    pub x_r: QuadNum,
}

/// Complete deduplicated classification output, canonically ordered.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyList {
    pub families: Vec<FamilyDescriptor>,
    pub unrealized: Vec<UnrealizedFamily>,
}

impl FamilyList {
    pub fn len(&self) -> usize {
        self.families.len()
    }

    pub fn is_empty(&self) -> bool {
        self.families.is_empty()
    }

    pub fn count_case(&self, rank: u8) -> usize {
        self.families
            .iter()
            .filter(|f| f.case_rank() == rank)
            .count()
    }
}

/// The two moving slots (0-based, increasing) next to a constant slot.
fn moving_slots(const_slot: usize) -> (usize, usize) {
    match const_slot {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

/// Exact cross-field zero test of `c_i·u² + c_j`.
fn caseb_condition(ci: &QuadNum, cj: &QuadNum, u: &QuadNum) -> bool {
    let u2 = u.try_mul(u).expect("unit squares stay in one field");
    let mut acc = MultiQuad::zero();
    acc.add_product(ci, &u2);
    acc.add_product(cj, &QuadNum::one());
    acc.is_zero()
}

fn inverse_square(u: &QuadNum) -> QuadNum {
    let u2 = u.try_mul(u).expect("unit squares stay in one field");
    QuadNum::one().try_div(&u2).expect("units are invertible")
}

/// Exact zero test of `c1 + c2·u⁻² + c3·v⁻²`.
fn casec_condition(coeffs: &RelationCoeffs, u: &QuadNum, v: &QuadNum) -> bool {
    let mut acc = MultiQuad::zero();
    acc.add_product(coeffs.get(0), &QuadNum::one());
    acc.add_product(coeffs.get(1), &inverse_square(u));
    acc.add_product(coeffs.get(2), &inverse_square(v));
    acc.is_zero()
}

/// Exact zero test of `a2·(c1 + c2 + c3)`.
fn shifted_sum_condition(curve: &WeierstrassCurve, coeffs: &RelationCoeffs) -> bool {
    let mut acc = MultiQuad::zero();
    for c in coeffs.as_array() {
        acc.add_product(curve.a2(), c);
    }
    acc.is_zero()
}

/// Complete classification for `(E, c1, c2, c3)`.
pub fn classify(curve: &WeierstrassCurve, coeffs: &RelationCoeffs) -> Result<FamilyList> {
    classify_with_policy(curve, coeffs, CmPolicy::Auto)
}

pub fn classify_with_policy(
    curve: &WeierstrassCurve,
    coeffs: &RelationCoeffs,
    policy: CmPolicy,
) -> Result<FamilyList> {
    // a single working extension covers curve and coefficients
    let field = crate::curve::unify_field(&[
        curve.a2(),
        curve.a4(),
        curve.a6(),
        coeffs.get(0),
        coeffs.get(1),
        coeffs.get(2),
    ])?;
    let field = if curve.field_disc() != 1 {
        if field != 1 && field != curve.field_disc() {
            return Err(Error::IncompatibleFields(curve.field_disc(), field));
        }
        curve.field_disc()
    } else {
        field
    };

    let mut families = Vec::new();
    let mut unrealized = Vec::new();

    for slot in 1..=3u8 {
        families.push(FamilyDescriptor::CaseA { free_slot: slot });
    }

    let units = units_with_policy(curve, policy).units;

    // case (b): constant slot k, moving pair (i, j), slot j = [u]·slot i
    for k in 0..3usize {
        let (i, j) = moving_slots(k);
        for u in &units {
            // a declared-CM override may list units the curve's normal form
            // cannot carry; those act nowhere and generate nothing
            if !unit_form_supported(curve, u)? {
                continue;
            }
            if !caseb_condition(coeffs.get(i), coeffs.get(j), u) {
                continue;
            }
            let x_r = derive_caseb_constant(curve, coeffs, (k + 1) as u8, u)?;
            let rhs = curve.cubic_at(&x_r);
            match sqrt_in_extension(&rhs, field) {
                Some(y) => {
                    let mut rs = vec![CurvePoint::affine(x_r.clone(), y.clone())];
                    if !y.is_zero() {
                        rs.push(CurvePoint::affine(x_r.clone(), -y));
                    }
                    rs.sort();
                    for r in rs {
                        families.push(FamilyDescriptor::CaseB {
                            const_slot: (k + 1) as u8,
                            unit: u.clone(),
                            r,
                            x_r: x_r.clone(),
                        });
                    }
                }
                None => unrealized.push(UnrealizedFamily {
                    const_slot: (k + 1) as u8,
                    unit: u.clone(),
                    x_r,
                }),
            }
        }
    }

    // case (c): the pair condition plus the shifted-model constraint
    for u in &units {
        if !unit_form_supported(curve, u)? {
            continue;
        }
        for v in &units {
            if !unit_form_supported(curve, v)? {
                continue;
            }
            if casec_condition(coeffs, u, v) && shifted_sum_condition(curve, coeffs) {
                families.push(FamilyDescriptor::CaseC {
                    u: u.clone(),
                    v: v.clone(),
                });
            }
        }
    }

    // case (d): the explicit degree-2 family
    if policy != CmPolicy::None {
        if let Some(a) = detect_ea_form(curve) {
            for k in 0..3usize {
                let (i, j) = moving_slots(k);
                let doubled = |other: &QuadNum| {
                    coeffs
                        .get(k)
                        .try_sub(&(&QuadNum::from_int(2) * other))
                        .map(|t| t.is_zero())
                        .unwrap_or(false)
                };
                if doubled(coeffs.get(i)) && doubled(coeffs.get(j)) {
                    for plus_slot in [i, j] {
                        for sign in [1i8, -1] {
                            families.push(FamilyDescriptor::CaseD {
                                endo_slot: (k + 1) as u8,
                                plus_slot: (plus_slot + 1) as u8,
                                sign,
                                a: a.clone(),
                            });
                        }
                    }
                }
            }
        }
    }

    // every emitted family must pass the exact symbolic identity
    let mut verified = Vec::with_capacity(families.len());
    for f in families {
        if verify_family_symbolic(curve, coeffs, &f)? {
            verified.push(f);
        } else {
            debug_assert!(false, "classifier emitted an unverifiable family: {f:?}");
        }
    }
    verified.sort();
    verified.dedup();
    unrealized.sort_by(|a, b| {
        a.const_slot
            .cmp(&b.const_slot)
            .then_with(|| a.unit.cmp(&b.unit))
    });
    Ok(FamilyList {
        families: verified,
        unrealized,
    })
}

/// Checks the exact function-field identity for a family.
pub fn verify_family_symbolic(
    curve: &WeierstrassCurve,
    coeffs: &RelationCoeffs,
    family: &FamilyDescriptor,
) -> Result<bool> {
    match family {
        // families with coordinates at infinity lie inside the closure of
        // the surface structurally; there is no affine identity to test
        FamilyDescriptor::CaseA { .. } => Ok(true),
        FamilyDescriptor::CaseB {
            const_slot,
            unit,
            x_r,
            ..
        } => verify_caseb_with_x(curve, coeffs, *const_slot, unit, x_r),
        FamilyDescriptor::CaseC { u, v } => {
            let units_ok = unit_form_supported(curve, u)? && unit_form_supported(curve, v)?;
            if !units_ok {
                return Ok(false);
            }
            Ok(casec_condition(coeffs, u, v) && shifted_sum_condition(curve, coeffs))
        }
        FamilyDescriptor::CaseD {
            endo_slot,
            plus_slot,
            a,
            ..
        } => {
            let k = (*endo_slot - 1) as usize;
            let p = (*plus_slot - 1) as usize;
            let (m, n) = moving_slots(k);
            let t = if p == m { n } else { m };
            let translate = CurvePoint::affine(a.clone(), QuadNum::zero());
            let mut terms = vec![CurveFunction::zero(curve); 3];
            terms[k] = x_function(curve, &XTransform::SqrtMinusTwoEndo)?;
            terms[p] = x_function(curve, &XTransform::Identity)?;
            terms[t] = x_function(curve, &XTransform::TranslateBy(translate))?;
            let terms: [CurveFunction; 3] = terms.try_into().unwrap();
            identity_check_general(curve, coeffs.as_array(), &terms)
        }
    }
}

/// Case-(b) verification against an explicit x-value, so conditions whose
/// point leaves the working field can still be adjudicated. This is the
/// sign-regression oracle: the identity is
/// `c_i·X + c_j·(u⁻²(X+s) − s) + c_k·x_R ≡ 0` with `s = a2/3`.
pub fn verify_caseb_with_x(
    curve: &WeierstrassCurve,
    coeffs: &RelationCoeffs,
    const_slot: u8,
    unit: &QuadNum,
    x_r: &QuadNum,
) -> Result<bool> {
    if !unit_form_supported(curve, unit)? {
        return Ok(false);
    }
    let k = (const_slot - 1) as usize;
    let (i, j) = moving_slots(k);
    let inv_u2 = inverse_square(unit);
    let shift = &curve.depressed_form().shift;

    // coefficient of X
    let mut lin = MultiQuad::zero();
    lin.add_product(coeffs.get(i), &QuadNum::one());
    lin.add_product(coeffs.get(j), &inv_u2);
    if !lin.is_zero() {
        return Ok(false);
    }
    // constant term: c_j·(u⁻² − 1)·s + c_k·x_R
    let mut con = MultiQuad::from_quad(coeffs.get(j))
        .mul(&MultiQuad::from_quad(&inv_u2))
        .mul(&MultiQuad::from_quad(shift));
    con.sub_assign(&MultiQuad::from_quad(coeffs.get(j)).mul(&MultiQuad::from_quad(shift)));
    let ck_xr = MultiQuad::from_quad(coeffs.get(k)).mul(&MultiQuad::from_quad(x_r));
    con.add_assign(&ck_xr);
    Ok(con.is_zero())
}

/// Whether the unit's action is defined on this curve (identity units act
/// everywhere; the others need the matching depressed normal form).
fn unit_form_supported(curve: &WeierstrassCurve, u: &QuadNum) -> Result<bool> {
    let u2 = u.try_mul(u).map_err(|_| Error::UnsupportedEndo(u.to_string()))?;
    if u2.is_one() {
        return Ok(true);
    }
    if u.norm() != crate::exact::rat_i64(1) {
        return Err(Error::UnsupportedEndo(u.to_string()));
    }
    let dep = curve.depressed_form();
    Ok(match u.discriminant() {
        -1 => dep.q.is_zero(),
        -3 => dep.p.is_zero(),
        _ => false,
    })
}

/// Function-field identity with coefficients possibly living in a different
/// extension than the curve: each foreign radicand contributes an
/// independent component identity.
fn identity_check_general(
    curve: &WeierstrassCurve,
    coeffs: &[QuadNum; 3],
    terms: &[CurveFunction; 3],
) -> Result<bool> {
    let fd = curve.field_disc();
    let zero3 = || [QuadNum::zero(), QuadNum::zero(), QuadNum::zero()];
    let mut components: std::collections::BTreeMap<i64, [QuadNum; 3]> =
        std::collections::BTreeMap::new();
    for (slot, c) in coeffs.iter().enumerate() {
        if c.is_rational() || c.discriminant() == fd {
            components.entry(1).or_insert_with(zero3)[slot] = c.clone();
        } else {
            components.entry(1).or_insert_with(zero3)[slot] =
                QuadNum::from_rat(c.rational_part().clone());
            components.entry(c.discriminant()).or_insert_with(zero3)[slot] =
                QuadNum::from_rat(c.radical_part().clone());
        }
    }
    for comp in components.values() {
        if comp.iter().all(QuadNum::is_zero) {
            continue;
        }
        if !identity_check(curve, comp, terms) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exact membership of a point triple in a family, including the
/// degenerate fibers with infinity coordinates. Comparisons run in the
/// multi-quadratic accumulator, so mixed-extension coordinates are fine.
pub fn member(
    curve: &WeierstrassCurve,
    family: &FamilyDescriptor,
    triple: &[CurvePoint; 3],
) -> bool {
    match family {
        FamilyDescriptor::CaseA { free_slot } => {
            let k = (*free_slot - 1) as usize;
            let (i, j) = moving_slots(k);
            triple[i].is_infinity() && triple[j].is_infinity()
        }
        FamilyDescriptor::CaseB {
            const_slot,
            unit,
            r,
            ..
        } => {
            let k = (*const_slot - 1) as usize;
            let (i, j) = moving_slots(k);
            if !triple[k].eq_value(r) {
                return false;
            }
            unit_image_matches(curve, unit, &triple[i], &triple[j])
        }
        FamilyDescriptor::CaseC { u, v } => {
            unit_image_matches(curve, u, &triple[0], &triple[1])
                && unit_image_matches(curve, v, &triple[0], &triple[2])
        }
        FamilyDescriptor::CaseD {
            endo_slot,
            plus_slot,
            sign,
            a,
        } => member_cased(curve, *endo_slot, *plus_slot, *sign, a, triple),
    }
}

/// Does `image = [u]·base` hold? Exact, cross-extension safe.
fn unit_image_matches(
    curve: &WeierstrassCurve,
    u: &QuadNum,
    base: &CurvePoint,
    image: &CurvePoint,
) -> bool {
    let u2 = match u.try_mul(u) {
        Ok(v) => v,
        Err(_) => return false,
    };
    if base.is_infinity() || image.is_infinity() {
        return base.is_infinity() && image.is_infinity();
    }
    if u2.is_one() {
        // [±1]: x fixed, y possibly negated
        let y_expect = if u.is_one() {
            base.y().unwrap().clone()
        } else {
            -base.y().unwrap()
        };
        return image.x().unwrap().eq_value(base.x().unwrap())
            && image.y().unwrap().eq_value(&y_expect);
    }
    match unit_form_supported(curve, u) {
        Ok(true) => {}
        _ => return false,
    }
    let shift = curve.depressed_form().shift;
    let inv_u2 = inverse_square(u);
    let u2u = u2.try_mul(u).expect("same field");
    let inv_u3 = QuadNum::one().try_div(&u2u).expect("unit");
    // x(image) = u⁻²·(x + s) − s
    let mut xs = MultiQuad::from_quad(base.x().unwrap());
    xs.add_assign(&MultiQuad::from_quad(&shift));
    let mut x_check = xs.mul(&MultiQuad::from_quad(&inv_u2));
    x_check.sub_assign(&MultiQuad::from_quad(&shift));
    x_check.sub_assign(&MultiQuad::from_quad(image.x().unwrap()));
    if !x_check.is_zero() {
        return false;
    }
    // y(image) = u⁻³·y
    let mut y_check = MultiQuad::from_quad(base.y().unwrap()).mul(&MultiQuad::from_quad(&inv_u3));
    y_check.sub_assign(&MultiQuad::from_quad(image.y().unwrap()));
    y_check.is_zero()
}

fn member_cased(
    curve: &WeierstrassCurve,
    endo_slot: u8,
    plus_slot: u8,
    sign: i8,
    a: &QuadNum,
    triple: &[CurvePoint; 3],
) -> bool {
    let k = (endo_slot - 1) as usize;
    let p = (plus_slot - 1) as usize;
    let (m, n) = moving_slots(k);
    let t = if p == m { n } else { m };
    let w = &triple[k]; // [λ]P
    let u = &triple[p]; // sP
    let v = &triple[t]; // sP + (a,0)
    let translate = CurvePoint::affine(a.clone(), QuadNum::zero());
    if !curve.contains(&translate) {
        return false;
    }
    if u.is_infinity() {
        // P = ∞: the image point is (∞ in slot k, ∞ in slot p, (a,0))
        return w.is_infinity() && v.eq_value(&translate);
    }
    // V = sP + (a,0) = U + (a,0) regardless of the sign
    let expected_v = curve.add_unchecked(u, &translate);
    if !v.eq_value(&expected_v) {
        return false;
    }
    // W = [λ]P = s·[λ]U
    let ux = u.x().unwrap();
    let uy = u.y().unwrap();
    let diff = match ux.try_sub(a) {
        Ok(d) => d,
        Err(_) => return false,
    };
    if diff.is_zero() {
        // U = ±(a,0) = (a,0) is in the kernel
        return w.is_infinity();
    }
    let CurvePoint::Affine { x: wx, y: wy } = w else {
        return false;
    };
    // x(W) = −(U_x² + a²)/(2(U_x − a))
    let a2 = a.try_mul(a).expect("same field");
    let num = match ux.try_mul(ux).and_then(|s| s.try_add(&a2)) {
        Ok(v) => v,
        Err(_) => return false,
    };
    let den = QuadNum::from_int(-2).try_mul(&diff).expect("same field");
    let expected_wx = match num.try_div(&den) {
        Ok(v) => v,
        Err(_) => return false,
    };
    if !wx.eq_value(&expected_wx) {
        return false;
    }
    // y(W) = s·(√−2/4)·U_y·(1 − 2a²/(U_x−a)²), compared cross-field
    let factor = match diff
        .try_mul(&diff)
        .and_then(|d2| (&QuadNum::from_int(2) * &a2).try_div(&d2))
        .and_then(|f| QuadNum::one().try_sub(&f))
    {
        Ok(v) => v,
        Err(_) => return false,
    };
    let scale = match uy
        .try_mul(&factor)
        .and_then(|v| v.try_mul(&QuadNum::from_frac(i64::from(sign), 4)))
    {
        Ok(v) => v,
        Err(_) => return false,
    };
    let mut y_check = MultiQuad::from_quad(&scale).mul(&MultiQuad::from_quad(&QuadNum::sqrt_d(-2)));
    y_check.sub_assign(&MultiQuad::from_quad(wy));
    y_check.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qi(n: i64) -> QuadNum {
        QuadNum::from_int(n)
    }

    fn curve(a2: i64, a4: i64, a6: i64) -> WeierstrassCurve {
        WeierstrassCurve::new(qi(a2), qi(a4), qi(a6)).unwrap()
    }

    fn pt(x: i64, y: i64) -> CurvePoint {
        CurvePoint::affine(qi(x), qi(y))
    }

    #[test]
    fn zero_coefficients_rejected() {
        assert_eq!(
            RelationCoeffs::from_ints(1, 0, 1),
            Err(Error::ZeroCoefficient)
        );
    }

    #[test]
    fn subsum_examples() {
        assert!(!subsum_zero(&RelationCoeffs::from_ints(1, 1, 1).unwrap()));
        assert!(subsum_zero(&RelationCoeffs::from_ints(1, 1, -2).unwrap()));
        assert!(subsum_zero(&RelationCoeffs::from_ints(1, -1, 3).unwrap()));
    }

    #[test]
    fn generic_curve_equal_coeffs_gives_three_families() {
        let e = WeierstrassCurve::new(qi(0), qi(-1), QuadNum::from_frac(1, 4)).unwrap();
        let c = RelationCoeffs::from_ints(1, 1, 1).unwrap();
        let out = classify(&e, &c).unwrap();
        assert_eq!(out.families.len(), 3);
        assert!(out
            .families
            .iter()
            .all(|f| matches!(f, FamilyDescriptor::CaseA { .. })));
    }

    #[test]
    fn lemniscatic_curve_one_one_two_gives_nine() {
        let e = curve(0, -1, 0);
        let c = RelationCoeffs::from_ints(1, 1, 2).unwrap();
        let out = classify(&e, &c).unwrap();
        assert_eq!(out.count_case(0), 3, "case a");
        assert_eq!(out.count_case(1), 2, "case b");
        assert_eq!(out.count_case(2), 4, "case c");
        assert_eq!(out.families.len(), 9);
        // the case-b families pin R = (0,0)
        for f in &out.families {
            if let FamilyDescriptor::CaseB { r, x_r, .. } = f {
                assert_eq!(r, &pt(0, 0));
                assert!(x_r.is_zero());
            }
        }
        assert!(out.unrealized.is_empty());
    }

    #[test]
    fn doubled_coefficient_family_curve_gives_seven() {
        let e = curve(1, -3, 1);
        let c = RelationCoeffs::from_ints(2, 1, 1).unwrap();
        let out = classify(&e, &c).unwrap();
        assert_eq!(out.count_case(0), 3);
        assert_eq!(out.count_case(3), 4);
        assert_eq!(out.families.len(), 7);
        for f in &out.families {
            if let FamilyDescriptor::CaseD { endo_slot, .. } = f {
                assert_eq!(*endo_slot, 1);
            }
        }
    }

    #[test]
    fn j_zero_equal_coefficients() {
        // six units: (u, v) with 1 + u⁻² + v⁻² = 0 has 8 solutions
        let e = curve(0, 0, 1);
        let c = RelationCoeffs::from_ints(1, 1, 1).unwrap();
        let out = classify(&e, &c).unwrap();
        assert_eq!(out.count_case(0), 3);
        assert_eq!(out.count_case(1), 0);
        assert_eq!(out.count_case(2), 8);
        assert_eq!(out.families.len(), 11);
    }

    #[test]
    fn case_b_when_pair_sum_vanishes() {
        let e = curve(0, -1, 0);
        let c = RelationCoeffs::from_ints(1, -1, 3).unwrap();
        let out = classify(&e, &c).unwrap();
        // u = ±1 against constant slot 3, R = (0,0)
        assert_eq!(out.count_case(1), 2);
        assert_eq!(out.families.len(), 5);
    }

    #[test]
    fn unrealized_case_b_reported() {
        // y²=x³+3x²+2x with (1,1,1): every constant slot admits u = ±i and
        // x(R) = 2, but y² = 24 has no root in Q
        let e = curve(3, 2, 0);
        let c = RelationCoeffs::from_ints(1, 1, 1).unwrap();
        let out = classify(&e, &c).unwrap();
        assert_eq!(out.count_case(1), 0);
        assert_eq!(out.unrealized.len(), 6); // u = ±i per constant slot
        assert!(out.unrealized.iter().all(|u| u.x_r == qi(2)));
        // over Q(√6) the points (2, ±2√6) exist
        let e6 = curve(3, 2, 0).in_field(6).unwrap();
        let out = classify(&e6, &c).unwrap();
        assert_eq!(out.count_case(1), 12);
        assert!(out.unrealized.is_empty());
    }

    #[test]
    fn sign_regression_pinned() {
        // oracle-derived x(R) = +2 verifies; the opposite sign fails
        let e = curve(3, 2, 0);
        let c = RelationCoeffs::from_ints(1, 1, 1).unwrap();
        let i = QuadNum::sqrt_d(-1);
        assert_eq!(verify_caseb_with_x(&e, &c, 3, &i, &qi(2)), Ok(true));
        assert_eq!(verify_caseb_with_x(&e, &c, 3, &i, &qi(-2)), Ok(false));
    }

    #[test]
    fn membership_examples() {
        let e = curve(0, -1, 0);
        let i = QuadNum::sqrt_d(-1);
        let b = FamilyDescriptor::CaseB {
            const_slot: 3,
            unit: i.clone(),
            r: pt(0, 0),
            x_r: qi(0),
        };
        assert!(member(&e, &b, &[pt(1, 0), pt(-1, 0), pt(0, 0)]));
        assert!(!member(&e, &b, &[pt(1, 0), pt(1, 0), pt(0, 0)]));
        assert!(member(
            &e,
            &b,
            &[CurvePoint::Infinity, CurvePoint::Infinity, pt(0, 0)]
        ));

        let c = FamilyDescriptor::CaseC {
            u: qi(1),
            v: i.clone(),
        };
        assert!(member(&e, &c, &[pt(0, 0), pt(0, 0), pt(0, 0)]));
        assert!(member(&e, &c, &[pt(1, 0), pt(1, 0), pt(-1, 0)]));
        assert!(!member(&e, &c, &[pt(1, 0), pt(-1, 0), pt(0, 0)]));

        let a = FamilyDescriptor::CaseA { free_slot: 1 };
        assert!(member(
            &e,
            &a,
            &[pt(1, 0), CurvePoint::Infinity, CurvePoint::Infinity]
        ));
    }

    #[test]
    fn cased_membership_degenerate_fibers() {
        let e = curve(1, -3, 1);
        let d = FamilyDescriptor::CaseD {
            endo_slot: 1,
            plus_slot: 2,
            sign: 1,
            a: qi(1),
        };
        // Φ(e) = (e, e, (a,0)) and Φ((a,0)) = (e, (a,0), e)
        assert!(member(
            &e,
            &d,
            &[CurvePoint::Infinity, CurvePoint::Infinity, pt(1, 0)]
        ));
        assert!(member(
            &e,
            &d,
            &[CurvePoint::Infinity, pt(1, 0), CurvePoint::Infinity]
        ));
        // generic fiber through P = (−1, 2): ([λ]P, P, P+(1,0))
        let lam = crate::cm::EndoDescriptor::new(QuadNum::sqrt_d(-2)).unwrap();
        let p = pt(-1, 2);
        let w = crate::cm::endo_apply(&e, &lam, &p).unwrap();
        let v = e.add(&p, &pt(1, 0)).unwrap();
        assert!(member(&e, &d, &[w.clone(), p.clone(), v.clone()]));
        // the sign-flipped descriptor does not match this triple
        let d_neg = FamilyDescriptor::CaseD {
            endo_slot: 1,
            plus_slot: 2,
            sign: -1,
            a: qi(1),
        };
        assert!(!member(&e, &d_neg, &[w, p, v]));
    }

    #[test]
    fn classification_is_deterministic() {
        let e = curve(0, -1, 0);
        let c = RelationCoeffs::from_ints(1, 1, 2).unwrap();
        let a = classify(&e, &c).unwrap();
        let b = classify(&e, &c).unwrap();
        assert_eq!(a, b);
        let json_a = serde_json::to_string(&a).unwrap();
        let json_b = serde_json::to_string(&b).unwrap();
        assert_eq!(json_a, json_b);
    }
}
