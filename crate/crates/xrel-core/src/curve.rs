//! Elliptic curves `y² = x³ + a2·x² + a4·x + a6` with exact point
//! arithmetic over Q(sqrt(d)).
//!
//! Points are affine-or-infinity; the chord–tangent group law is evaluated
//! in exact rationals, so every identity downstream (classification,
//! membership, search) is decided without rounding.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::QuadNum;
use crate::poly::{cubic_roots_in_field, Poly};

/// `y² = x³ + a2 x² + a4 x + a6` over Q(sqrt(d)).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeierstrassCurve {
    a2: QuadNum,
    a4: QuadNum,
    a6: QuadNum,
    field_d: i64,
}

/// A point on the curve: affine or the point at infinity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
#[allow(clippy::large_enum_variant)]
pub enum CurvePoint {
    Infinity,
    Affine { x: QuadNum, y: QuadNum },
}

impl CurvePoint {
    pub fn affine(x: QuadNum, y: QuadNum) -> Self {
        CurvePoint::Affine { x, y }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, CurvePoint::Infinity)
    }

    pub fn x(&self) -> Option<&QuadNum> {
        match self {
            CurvePoint::Infinity => None,
            CurvePoint::Affine { x, .. } => Some(x),
        }
    }

    pub fn y(&self) -> Option<&QuadNum> {
        match self {
            CurvePoint::Infinity => None,
            CurvePoint::Affine { y, .. } => Some(y),
        }
    }

    pub fn negate(&self) -> Self {
        match self {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => CurvePoint::Affine {
                x: x.clone(),
                y: -y,
            },
        }
    }

    /// Value equality that tolerates representations in different
    /// (rational-compatible) extensions.
    pub fn eq_value(&self, rhs: &Self) -> bool {
        match (self, rhs) {
            (CurvePoint::Infinity, CurvePoint::Infinity) => true,
            (CurvePoint::Affine { x: x1, y: y1 }, CurvePoint::Affine { x: x2, y: y2 }) => {
                x1.eq_value(x2) && y1.eq_value(y2)
            }
            _ => false,
        }
    }
}

impl fmt::Display for CurvePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurvePoint::Infinity => write!(f, "inf"),
            CurvePoint::Affine { x, y } => write!(f, "({x}, {y})"),
        }
    }
}

impl Serialize for CurvePoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            CurvePoint::Infinity => s.serialize_str("inf"),
            CurvePoint::Affine { x, y } => {
                let pair = [x.to_string(), y.to_string()];
                pair.serialize(s)
            }
        }
    }
}

impl<'de> Deserialize<'de> for CurvePoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Inf(String),
            Pair([String; 2]),
        }
        match Repr::deserialize(d)? {
            Repr::Inf(s) if s == "inf" => Ok(CurvePoint::Infinity),
            Repr::Inf(s) => Err(serde::de::Error::custom(format!("bad point `{s}`"))),
            Repr::Pair([x, y]) => Ok(CurvePoint::Affine {
                x: x.parse().map_err(serde::de::Error::custom)?,
                y: y.parse().map_err(serde::de::Error::custom)?,
            }),
        }
    }
}

/// The depressed model `y² = ξ³ + pξ + q` reached by `x = ξ − a2/3`,
/// together with the quadrupled coefficients `b = 4p`, `c = 4q` of the
/// doubled-y normalization `Y² = 4ξ³ + bξ + c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepressedForm {
    pub p: QuadNum,
    pub q: QuadNum,
    pub b: QuadNum,
    pub c: QuadNum,
    /// `a2/3`; the general x-coordinate is `ξ − shift`.
    pub shift: QuadNum,
}

impl WeierstrassCurve {
    pub fn new(a2: QuadNum, a4: QuadNum, a6: QuadNum) -> Result<Self> {
        let field_d = unify_field(&[&a2, &a4, &a6])?;
        let curve = WeierstrassCurve {
            a2,
            a4,
            a6,
            field_d,
        };
        if curve.cubic_discriminant().is_zero() {
            return Err(Error::SingularCurve);
        }
        Ok(curve)
    }

    pub fn a2(&self) -> &QuadNum {
        &self.a2
    }

    pub fn a4(&self) -> &QuadNum {
        &self.a4
    }

    pub fn a6(&self) -> &QuadNum {
        &self.a6
    }

    /// Discriminant of the working extension the coefficients live in.
    pub fn field_disc(&self) -> i64 {
        self.field_d
    }

    /// Widens the working extension to Q(sqrt(d)). The coefficients must be
    /// rational or already live there. Root searches (2-torsion, translate
    /// points) then look inside this extension.
    pub fn in_field(mut self, d: i64) -> Result<Self> {
        let (_, d) = crate::exact::squarefree_part(d);
        if self.field_d == 1 || self.field_d == d {
            self.field_d = d;
            Ok(self)
        } else if d == 1 {
            Ok(self)
        } else {
            Err(Error::IncompatibleFields(self.field_d, d))
        }
    }

    /// The right-hand-side cubic as a polynomial.
    pub fn cubic(&self) -> Poly {
        Poly::cubic(&self.a2, &self.a4, &self.a6)
    }

    /// `x³ + a2x² + a4x + a6` evaluated at `x`.
    pub fn cubic_at(&self, x: &QuadNum) -> QuadNum {
        self.cubic().eval(x)
    }

    /// Discriminant of the cubic (nonzero iff the curve is nonsingular):
    /// `18·a2·a4·a6 − 4·a2³·a6 + a2²·a4² − 4·a4³ − 27·a6²`.
    pub fn cubic_discriminant(&self) -> QuadNum {
        let (a, b, c) = (&self.a2, &self.a4, &self.a6);
        let n = |k: i64| QuadNum::from_int(k);
        &(&(&(&(&n(18) * &(&(a * b) * c)) - &(&n(4) * &(&(&(a * a) * a) * c)))
            + &(&(&(a * a) * b) * b))
            - &(&n(4) * &(&(b * b) * b)))
            - &(&n(27) * &(c * c))
    }

    /// The j-invariant `c4³ / Δ` of the Weierstrass model.
    pub fn j_invariant(&self) -> QuadNum {
        let b2 = &QuadNum::from_int(4) * &self.a2;
        let b4 = &QuadNum::from_int(2) * &self.a4;
        let b6 = &QuadNum::from_int(4) * &self.a6;
        let b8 = &(&b2 * &b6) - &(&b4 * &b4);
        let b8 = &b8 / &QuadNum::from_int(4);
        let c4 = &(&b2 * &b2) - &(&QuadNum::from_int(24) * &b4);
        let disc = &(&(&(-(&(&b2 * &b2) * &b8)) - &(&QuadNum::from_int(8) * &(&(&b4 * &b4) * &b4)))
            - &(&QuadNum::from_int(27) * &(&b6 * &b6)))
            + &(&QuadNum::from_int(9) * &(&(&b2 * &b4) * &b6));
        &(&(&c4 * &c4) * &c4) / &disc
    }

    pub fn contains(&self, point: &CurvePoint) -> bool {
        match point {
            CurvePoint::Infinity => true,
            CurvePoint::Affine { x, y } => match y.try_mul(y) {
                Ok(y2) => match self.cubic_at(x).try_sub(&y2) {
                    Ok(difference) => difference.is_zero(),
                    Err(_) => false,
                },
                Err(_) => false,
            },
        }
    }

    /// Constructs and validates an affine point.
    pub fn point(&self, x: QuadNum, y: QuadNum) -> Result<CurvePoint> {
        let p = CurvePoint::affine(x, y);
        self.check_on_curve(&p)?;
        Ok(p)
    }

    fn check_on_curve(&self, p: &CurvePoint) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            let (x, y) = (p.x().unwrap(), p.y().unwrap());
            Err(Error::PointNotOnCurve(x.to_string(), y.to_string()))
        }
    }

    /// Chord–tangent addition.
    pub fn add(&self, p: &CurvePoint, q: &CurvePoint) -> Result<CurvePoint> {
        self.check_on_curve(p)?;
        self.check_on_curve(q)?;
        Ok(self.add_unchecked(p, q))
    }

    /// Addition without the on-curve validation; inner loops use this after
    /// validating their inputs once.
    pub fn add_unchecked(&self, p: &CurvePoint, q: &CurvePoint) -> CurvePoint {
        let (x1, y1) = match p {
            CurvePoint::Infinity => return q.clone(),
            CurvePoint::Affine { x, y } => (x, y),
        };
        let (x2, y2) = match q {
            CurvePoint::Infinity => return p.clone(),
            CurvePoint::Affine { x, y } => (x, y),
        };
        let slope = if x1.eq_value(x2) {
            if y1.try_add(y2).map(|s| s.is_zero()).unwrap_or(false) {
                return CurvePoint::Infinity;
            }
            // tangent: (3x² + 2·a2·x + a4) / (2y)
            let three_x2 = &QuadNum::from_int(3) * &(x1 * x1);
            let num = &(&three_x2 + &(&(&QuadNum::from_int(2) * &self.a2) * x1)) + &self.a4;
            num / (&QuadNum::from_int(2) * y1)
        } else {
            (y2 - y1) / (x2 - x1)
        };
        let x3 = &(&(&slope * &slope) - &self.a2) - &(x1 + x2);
        let y3 = &(&slope * &(x1 - &x3)) - y1;
        CurvePoint::Affine { x: x3, y: y3 }
    }

    pub fn negate(&self, p: &CurvePoint) -> CurvePoint {
        p.negate()
    }

    /// `[n]P` via double-and-add; `[0]P` is infinity, `[-n]P = -[n]P`.
    pub fn scalar_mul(&self, n: i64, p: &CurvePoint) -> Result<CurvePoint> {
        self.check_on_curve(p)?;
        Ok(self.scalar_mul_unchecked(n, p))
    }

    pub fn scalar_mul_unchecked(&self, n: i64, p: &CurvePoint) -> CurvePoint {
        if n == 0 || p.is_infinity() {
            return CurvePoint::Infinity;
        }
        let base = if n < 0 { p.negate() } else { p.clone() };
        let mut k = n.unsigned_abs();
        let mut acc = CurvePoint::Infinity;
        let mut cur = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add_unchecked(&acc, &cur);
            }
            k >>= 1;
            if k > 0 {
                cur = self.add_unchecked(&cur, &cur);
            }
        }
        acc
    }

    /// The depressed model; construction re-verifies the defining identity.
    pub fn depressed_form(&self) -> DepressedForm {
        let three = QuadNum::from_int(3);
        let shift = &self.a2 / &three;
        let p = &self.a4 - &(&(&self.a2 * &self.a2) / &three);
        let q = &(&self.a6 - &(&(&self.a2 * &self.a4) / &three))
            + &(&(&QuadNum::from_int(2) * &(&(&self.a2 * &self.a2) * &self.a2))
                / &QuadNum::from_int(27));
        let form = DepressedForm {
            b: &QuadNum::from_int(4) * &p,
            c: &QuadNum::from_int(4) * &q,
            p,
            q,
            shift,
        };
        debug_assert!(self.depressed_round_trip(&form));
        form
    }

    /// Substitutes `x = ξ − a2/3` back and compares with `ξ³ + pξ + q`.
    fn depressed_round_trip(&self, form: &DepressedForm) -> bool {
        let xi = Poly::x();
        let x = xi.sub(&Poly::constant(form.shift.clone()));
        let orig = Poly::cubic(&self.a2, &self.a4, &self.a6);
        // orig(x(ξ))
        let mut composed = Poly::zero();
        for (k, c) in orig.coeffs().iter().enumerate() {
            let mut pow = Poly::constant(c.clone());
            for _ in 0..k {
                pow = pow.mul(&x);
            }
            composed = composed.add(&pow);
        }
        let depressed = Poly::new(vec![
            form.q.clone(),
            form.p.clone(),
            QuadNum::zero(),
            QuadNum::one(),
        ]);
        composed == depressed
    }

    /// All 2-torsion points visible in the working field: `(ε, 0)` for each
    /// root ε of the cubic in Q(sqrt(d)). Never extends the field.
    pub fn two_torsion(&self) -> Result<Vec<CurvePoint>> {
        let roots = cubic_roots_in_field(&self.cubic(), self.field_d)?;
        Ok(roots
            .into_iter()
            .map(|e| CurvePoint::affine(e, QuadNum::zero()))
            .collect())
    }
}

/// Unifies the discriminants of a coefficient list (rationals adapt).
pub fn unify_field(values: &[&QuadNum]) -> Result<i64> {
    let mut d = 1i64;
    for v in values {
        if v.is_rational() {
            continue;
        }
        if d == 1 {
            d = v.discriminant();
        } else if d != v.discriminant() {
            return Err(Error::IncompatibleFields(d, v.discriminant()));
        }
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn curve(a2: i64, a4: i64, a6: i64) -> WeierstrassCurve {
        WeierstrassCurve::new(
            QuadNum::from_int(a2),
            QuadNum::from_int(a4),
            QuadNum::from_int(a6),
        )
        .unwrap()
    }

    fn pt(x: i64, y: i64) -> CurvePoint {
        CurvePoint::affine(QuadNum::from_int(x), QuadNum::from_int(y))
    }

    #[test]
    fn singular_curve_rejected() {
        // y² = x³: discriminant 0
        assert_eq!(
            WeierstrassCurve::new(QuadNum::zero(), QuadNum::zero(), QuadNum::zero()),
            Err(Error::SingularCurve)
        );
    }

    #[test]
    fn addition_identity_and_torsion() {
        let e = curve(0, -1, 0); // y² = x³ − x
        let p = pt(0, 0);
        assert_eq!(e.add(&p, &CurvePoint::Infinity).unwrap(), p);
        // two 2-torsion points sum to the third
        assert_eq!(e.add(&pt(0, 0), &pt(1, 0)).unwrap(), pt(-1, 0));
    }

    #[test]
    fn chord_addition_example() {
        let e = curve(0, 0, 1); // y² = x³ + 1
        assert_eq!(e.add(&pt(0, 1), &pt(2, 3)).unwrap(), pt(-1, 0));
    }

    #[test]
    fn doubling_and_order_six() {
        let e = curve(0, 0, 1);
        let g = pt(2, 3);
        assert_eq!(e.scalar_mul(2, &g).unwrap(), pt(0, 1));
        assert_eq!(e.scalar_mul(6, &g).unwrap(), CurvePoint::Infinity);
        assert_eq!(e.scalar_mul(1, &g).unwrap(), g);
        assert_eq!(
            e.scalar_mul(-2, &g).unwrap(),
            e.scalar_mul(2, &g).unwrap().negate()
        );
    }

    #[test]
    fn off_curve_points_rejected() {
        let e = curve(0, -1, 0);
        assert!(matches!(
            e.add(&pt(5, 1), &pt(0, 0)),
            Err(Error::PointNotOnCurve(..))
        ));
    }

    #[test]
    fn depressed_form_examples() {
        let e = curve(0, -1, 0);
        let f = e.depressed_form();
        assert_eq!(f.p, QuadNum::from_int(-1));
        assert_eq!(f.q, QuadNum::zero());
        assert_eq!(f.b, QuadNum::from_int(-4));
        assert_eq!(f.c, QuadNum::zero());

        let e = curve(3, 2, 0);
        let f = e.depressed_form();
        assert_eq!(f.p, QuadNum::from_int(-1));
        assert_eq!(f.q, QuadNum::zero());

        // a = 1 member of the x³+ax²−3a²x+a³ family
        let e = curve(1, -3, 1);
        let f = e.depressed_form();
        assert_eq!(f.p, QuadNum::from_frac(-10, 3));
        assert_eq!(f.q, QuadNum::from_frac(56, 27));
    }

    #[test]
    fn two_torsion_in_field() {
        let e = curve(0, -1, 0);
        let t = e.two_torsion().unwrap();
        assert_eq!(t.len(), 3);
        assert!(t.contains(&pt(0, 0)) && t.contains(&pt(1, 0)) && t.contains(&pt(-1, 0)));

        let e = curve(0, 0, 1);
        assert_eq!(e.two_torsion().unwrap(), vec![pt(-1, 0)]);

        // y² = x³+x²−3x+1 over Q: only (1,0); over Q(√2) also (−1±√2, 0)
        let e = curve(1, -3, 1);
        assert_eq!(e.two_torsion().unwrap(), vec![pt(1, 0)]);
        let with_field = curve(1, -3, 1).in_field(2).unwrap();
        let t = with_field.two_torsion().unwrap();
        assert_eq!(t.len(), 3);
        let r = QuadNum::new(rat(-1, 1), rat(1, 1), 2);
        assert!(t.iter().any(|p| p.x().unwrap().eq_value(&r)));
    }

    #[test]
    fn j_invariants() {
        assert_eq!(curve(0, -1, 0).j_invariant(), QuadNum::from_int(1728));
        assert_eq!(curve(0, 0, 1).j_invariant(), QuadNum::zero());
        assert_eq!(curve(3, 2, 0).j_invariant(), QuadNum::from_int(1728));
        assert_eq!(curve(1, -3, 1).j_invariant(), QuadNum::from_int(8000));
    }
}
