//! Rational functions on a curve, reduced modulo `Y² − (X³ + a2X² + a4X + a6)`.
//!
//! This is the exact oracle behind classification: a family lies inside the
//! relation surface iff the corresponding combination of x-coordinate
//! functions is the zero element of the function field. Canonical form keeps
//! the denominator free of Y (multiply through by the conjugate), cancels
//! the common polynomial content, and makes the denominator monic, so zero
//! testing and equality are plain structural checks.

use crate::curve::{CurvePoint, WeierstrassCurve};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::exact::QuadNum;

/// `(num0 + num1·Y) / den` with `den ∈ K[X]` monic and the three
/// polynomials coprime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveFunction {
    num0: Poly,
    num1: Poly,
    den: Poly,
    cubic: Poly,
}

/// The x-coordinate transforms the classifier composes with.
#[derive(Debug, Clone)]
pub enum XTransform {
    /// `x(P)`
    Identity,
    /// `x(−P)` (equal to the identity on x-coordinates)
    NegatePoint,
    /// `x([u]P)` for a unit `u` of the endomorphism ring
    UnitEndo(QuadNum),
    /// `x([λ]P)` for the degree-2 endomorphism of the `(a, −3a², a³)` family
    SqrtMinusTwoEndo,
    /// `x(P + T)`
    TranslateBy(CurvePoint),
}

impl CurveFunction {
    fn reduce(mut num0: Poly, mut num1: Poly, den0: Poly, den1: Poly, cubic: Poly) -> Self {
        // clear Y from the denominator: multiply by (den0 − den1·Y)
        let (n0, n1, mut den) = if den1.is_zero() {
            (num0, num1, den0)
        } else {
            let d = den0.mul(&den0).sub(&den1.mul(&den1).mul(&cubic));
            let a = num0.mul(&den0).sub(&num1.mul(&den1).mul(&cubic));
            let b = num1.mul(&den0).sub(&num0.mul(&den1));
            (a, b, d)
        };
        assert!(!den.is_zero(), "zero denominator in function field");
        num0 = n0;
        num1 = n1;
        let g = Poly::content_gcd(&[&num0, &num1, &den]);
        if g.degree().is_some_and(|d| d > 0) {
            num0 = num0.div_rem(&g).0;
            num1 = num1.div_rem(&g).0;
            den = den.div_rem(&g).0;
        }
        let lead = den.leading().expect("nonzero denominator").clone();
        if !lead.is_one() {
            let inv = QuadNum::one() / &lead;
            num0 = num0.scale(&inv);
            num1 = num1.scale(&inv);
            den = den.scale(&inv);
        }
        CurveFunction {
            num0,
            num1,
            den,
            cubic,
        }
    }

    pub fn zero(curve: &WeierstrassCurve) -> Self {
        Self::constant(curve, QuadNum::zero())
    }

    pub fn constant(curve: &WeierstrassCurve, value: QuadNum) -> Self {
        CurveFunction {
            num0: Poly::constant(value),
            num1: Poly::zero(),
            den: Poly::constant(QuadNum::one()),
            cubic: curve.cubic(),
        }
    }

    /// The coordinate function X.
    pub fn x(curve: &WeierstrassCurve) -> Self {
        CurveFunction {
            num0: Poly::x(),
            num1: Poly::zero(),
            den: Poly::constant(QuadNum::one()),
            cubic: curve.cubic(),
        }
    }

    /// The coordinate function Y.
    pub fn y(curve: &WeierstrassCurve) -> Self {
        CurveFunction {
            num0: Poly::zero(),
            num1: Poly::constant(QuadNum::one()),
            den: Poly::constant(QuadNum::one()),
            cubic: curve.cubic(),
        }
    }

    /// Builds `(n0 + n1 Y)/(d0 + d1 Y)` in canonical form.
    pub fn from_parts(curve: &WeierstrassCurve, n0: Poly, n1: Poly, d0: Poly, d1: Poly) -> Self {
        Self::reduce(n0, n1, d0, d1, curve.cubic())
    }

    pub fn is_zero(&self) -> bool {
        self.num0.is_zero() && self.num1.is_zero()
    }

    /// Constant value, when the reduced form is a scalar.
    pub fn as_constant(&self) -> Option<QuadNum> {
        if self.num1.is_zero()
            && self.num0.degree().is_none_or(|d| d == 0)
            && self.den.degree() == Some(0)
        {
            Some(self.num0.coeff(0))
        } else {
            None
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.cubic, rhs.cubic);
        let n0 = self
            .num0
            .mul(&rhs.den)
            .add(&rhs.num0.mul(&self.den));
        let n1 = self
            .num1
            .mul(&rhs.den)
            .add(&rhs.num1.mul(&self.den));
        let den = self.den.mul(&rhs.den);
        Self::reduce(n0, n1, den, Poly::zero(), self.cubic.clone())
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.scale(&QuadNum::from_int(-1)))
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.cubic, rhs.cubic);
        // (a0 + a1 Y)(b0 + b1 Y) = a0b0 + a1b1·f(X) + (a0b1 + a1b0)·Y
        let n0 = self
            .num0
            .mul(&rhs.num0)
            .add(&self.num1.mul(&rhs.num1).mul(&self.cubic));
        let n1 = self.num0.mul(&rhs.num1).add(&self.num1.mul(&rhs.num0));
        let den = self.den.mul(&rhs.den);
        Self::reduce(n0, n1, den, Poly::zero(), self.cubic.clone())
    }

    pub fn scale(&self, s: &QuadNum) -> Self {
        Self::reduce(
            self.num0.scale(s),
            self.num1.scale(s),
            self.den.clone(),
            Poly::zero(),
            self.cubic.clone(),
        )
    }

    /// Evaluates a Y-free function at an x-value. Returns `None` at a pole
    /// or when the function genuinely involves Y.
    pub fn eval_x(&self, x: &QuadNum) -> Option<QuadNum> {
        if !self.num1.is_zero() {
            return None;
        }
        let den = self.den.eval(x);
        if den.is_zero() {
            return None;
        }
        Some(&self.num0.eval(x) / &den)
    }

    /// Evaluates at an affine point (x, y). Returns `None` at poles.
    pub fn eval_point(&self, x: &QuadNum, y: &QuadNum) -> Option<QuadNum> {
        let den = self.den.eval(x);
        if den.is_zero() {
            return None;
        }
        let num = &self.num0.eval(x) + &(&self.num1.eval(x) * y);
        Some(&num / &den)
    }
}

/// Exact x-coordinate function of the transformed point.
pub fn x_function(curve: &WeierstrassCurve, transform: &XTransform) -> Result<CurveFunction> {
    match transform {
        XTransform::Identity | XTransform::NegatePoint => Ok(CurveFunction::x(curve)),
        XTransform::UnitEndo(u) => unit_x_function(curve, u),
        XTransform::SqrtMinusTwoEndo => sqrt_minus_two_x_function(curve),
        XTransform::TranslateBy(t) => translate_x_function(curve, t),
    }
}

/// `x([u]P) = u⁻²·(X + a2/3) − a2/3` for a unit of the endomorphism ring.
/// Requires the matching depressed normal form: `q = 0` for fourth roots of
/// unity, `p = 0` for the sixth-root units.
fn unit_x_function(curve: &WeierstrassCurve, u: &QuadNum) -> Result<CurveFunction> {
    let u2 = u.try_mul(u).map_err(|_| bad_unit(u))?;
    if u2.is_one() {
        return Ok(CurveFunction::x(curve));
    }
    let dep = curve.depressed_form();
    let ok = match u.discriminant() {
        -1 => dep.q.is_zero(),
        -3 => dep.p.is_zero(),
        _ => false,
    };
    if !ok {
        return Err(bad_unit(u));
    }
    let inv_u2 = QuadNum::one().try_div(&u2).map_err(|_| bad_unit(u))?;
    let shift = dep.shift;
    // u⁻²·X + (u⁻²−1)·shift
    let lin = inv_u2
        .try_sub(&QuadNum::one())
        .and_then(|t| t.try_mul(&shift))
        .map_err(|_| bad_unit(u))?;
    let num0 = Poly::new(vec![lin, inv_u2]);
    Ok(CurveFunction::from_parts(
        curve,
        num0,
        Poly::zero(),
        Poly::constant(QuadNum::one()),
        Poly::zero(),
    ))
}

fn bad_unit(u: &QuadNum) -> Error {
    Error::UnsupportedTransform(format!("unit endomorphism {u} on this curve"))
}

/// `x([λ]P) = −(X² + a²) / (2(X − a))` on the `(a, −3a², a³)` family.
fn sqrt_minus_two_x_function(curve: &WeierstrassCurve) -> Result<CurveFunction> {
    let a = crate::cm::detect_ea_form(curve).ok_or_else(|| {
        Error::UnsupportedTransform("degree-2 endomorphism needs the (a, -3a^2, a^3) form".into())
    })?;
    let a2 = &a * &a;
    let num = Poly::new(vec![-&a2, QuadNum::zero(), QuadNum::from_int(-1)]);
    let den = Poly::new(vec![&QuadNum::from_int(-2) * &a, QuadNum::from_int(2)]);
    Ok(CurveFunction::from_parts(
        curve,
        num,
        Poly::zero(),
        den,
        Poly::zero(),
    ))
}

/// `x(P + T)` from the chord construction through the fixed point T.
fn translate_x_function(curve: &WeierstrassCurve, t: &CurvePoint) -> Result<CurveFunction> {
    let (tx, ty) = match t {
        CurvePoint::Infinity => return Ok(CurveFunction::x(curve)),
        CurvePoint::Affine { x, y } => (x, y),
    };
    if !curve.contains(t) {
        return Err(Error::PointNotOnCurve(tx.to_string(), ty.to_string()));
    }
    // ((Y − ty)² − (a2 + X + tx)(X − tx)²) / (X − tx)², with Y² reduced
    let lin = Poly::new(vec![-tx.clone(), QuadNum::one()]); // X − tx
    let lin2 = lin.mul(&lin);
    let sum = Poly::new(vec![curve.a2() + tx, QuadNum::one()]); // X + tx + a2
    let num_y_free = curve
        .cubic()
        .add(&Poly::constant(ty * ty))
        .sub(&sum.mul(&lin2));
    let num_y = Poly::constant(&QuadNum::from_int(-2) * ty);
    Ok(CurveFunction::from_parts(
        curve,
        num_y_free,
        num_y,
        lin2,
        Poly::zero(),
    ))
}

/// True iff `c1·f1 + c2·f2 + c3·f3` is the zero element of the function
/// field (exact polynomial identity after reduction).
pub fn identity_check(
    curve: &WeierstrassCurve,
    coeffs: &[QuadNum; 3],
    terms: &[CurveFunction; 3],
) -> bool {
    let mut acc = CurveFunction::zero(curve);
    for (c, f) in coeffs.iter().zip(terms.iter()) {
        acc = acc.add(&f.scale(c));
    }
    acc.is_zero()
}
