//! Dense univariate polynomials over [`QuadNum`] scalars, plus the root
//! machinery used to locate cubic roots inside a fixed quadratic extension.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::Result;
use crate::exact::{rat_i64, rat_sqrt, sqrt_in_extension, QuadNum, Rat};

/// Coefficients in ascending degree order; the zero polynomial is empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<QuadNum>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<QuadNum>) -> Self {
        while coeffs.last().is_some_and(QuadNum::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn constant(c: QuadNum) -> Self {
        Self::new(vec![c])
    }

    pub fn x() -> Self {
        Self::new(vec![QuadNum::zero(), QuadNum::one()])
    }

    /// `x³ + a2 x² + a4 x + a6`.
    pub fn cubic(a2: &QuadNum, a4: &QuadNum, a6: &QuadNum) -> Self {
        Self::new(vec![a6.clone(), a4.clone(), a2.clone(), QuadNum::one()])
    }

    pub fn coeffs(&self) -> &[QuadNum] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> QuadNum {
        self.coeffs.get(k).cloned().unwrap_or_else(QuadNum::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&QuadNum> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &QuadNum) -> QuadNum {
        let mut acc = QuadNum::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(&self.coeff(k) + &rhs.coeff(k));
        }
        Self::new(out)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut out = vec![QuadNum::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, s: &QuadNum) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Euclidean division; the divisor must be nonzero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let dlead = divisor.leading().unwrap().clone();
        let ddeg = divisor.degree().unwrap();
        let mut rem = self.clone();
        let mut quo = vec![QuadNum::zero(); self.coeffs.len().saturating_sub(ddeg)];
        while let Some(rdeg) = rem.degree() {
            if rdeg < ddeg {
                break;
            }
            let factor = rem.leading().unwrap() / &dlead;
            let shift = rdeg - ddeg;
            quo[shift] = factor.clone();
            let mut sub = vec![QuadNum::zero(); shift];
            sub.extend(divisor.coeffs.iter().map(|c| c * &factor));
            rem = rem.sub(&Poly::new(sub));
        }
        (Poly::new(quo), rem)
    }

    /// Monic gcd via the Euclidean algorithm.
    pub fn gcd(&self, rhs: &Self) -> Self {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.into_monic()
    }

    pub fn into_monic(self) -> Self {
        match self.leading() {
            None => self,
            Some(l) if l.is_one() => self,
            Some(l) => {
                let inv = QuadNum::one() / l;
                self.scale(&inv)
            }
        }
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &QuadNum::from_int(k as i64))
                .collect(),
        )
    }

    /// Divides out all content so the gcd of the three polynomials in a
    /// rational function can be cancelled.
    pub fn content_gcd(polys: &[&Poly]) -> Poly {
        let mut g = Poly::zero();
        for p in polys {
            g = g.gcd(p);
        }
        g
    }

    /// True when every coefficient lies in Q.
    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().all(QuadNum::is_rational)
    }

    /// Galois-conjugates every coefficient.
    pub fn conj(&self) -> Self {
        Self::new(self.coeffs.iter().map(QuadNum::conj).collect())
    }
}

/// All rational roots of a polynomial with rational coefficients, via the
/// rational root theorem on the primitive integer model.
pub fn rational_roots(p: &Poly) -> Vec<Rat> {
    assert!(p.is_rational());
    if p.is_zero() {
        return vec![];
    }
    let ints = to_integer_coeffs(p);
    let mut poly = ints;
    // strip powers of x: root 0
    let mut roots = Vec::new();
    while poly.first().is_some_and(|c| c.is_zero()) {
        poly.remove(0);
        if !roots.contains(&Rat::zero()) {
            roots.push(Rat::zero());
        }
    }
    if poly.len() <= 1 {
        roots.sort();
        return roots;
    }
    let a0 = poly.first().unwrap().clone();
    let an = poly.last().unwrap().clone();
    for num in divisors(&a0) {
        for den in divisors(&an) {
            for sign in [1i64, -1] {
                let cand = Rat::new(&num * BigInt::from(sign), den.clone());
                if roots.contains(&cand) {
                    continue;
                }
                if eval_int_poly(&poly, &cand).is_zero() {
                    roots.push(cand);
                }
            }
        }
    }
    roots.sort();
    roots
}

fn eval_int_poly(coeffs: &[BigInt], x: &Rat) -> Rat {
    let mut acc = Rat::zero();
    for c in coeffs.iter().rev() {
        acc = acc * x + Rat::from_integer(c.clone());
    }
    acc
}

/// Clears denominators and content: a primitive integer coefficient vector.
fn to_integer_coeffs(p: &Poly) -> Vec<BigInt> {
    let rats: Vec<Rat> = p
        .coeffs()
        .iter()
        .map(|c| c.as_rational().expect("rational poly").clone())
        .collect();
    let mut lcm = BigInt::one();
    for r in &rats {
        lcm = lcm.lcm(r.denom());
    }
    let mut ints: Vec<BigInt> = rats
        .iter()
        .map(|r| r.numer() * (&lcm / r.denom()))
        .collect();
    let mut g = BigInt::zero();
    for c in &ints {
        g = g.gcd(c);
    }
    if !g.is_zero() && !g.is_one() {
        for c in &mut ints {
            *c /= &g;
        }
    }
    ints
}

/// Positive divisors of |n| (desk scale: trial division).
fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    if n.is_zero() {
        return vec![BigInt::one()];
    }
    let mut out = Vec::new();
    let mut d = BigInt::one();
    loop {
        if &d * &d > n {
            break;
        }
        if (&n % &d).is_zero() {
            out.push(d.clone());
            let q = &n / &d;
            if q != d {
                out.push(q);
            }
        }
        d += 1;
    }
    out.sort();
    out
}

/// Irreducible-over-Q quadratic factors of a rational polynomial, found by
/// Kronecker interpolation through x = 0, 1, −1. Returned monic.
pub fn quadratic_factors(p: &Poly) -> Vec<Poly> {
    assert!(p.is_rational());
    let Some(deg) = p.degree() else {
        return vec![];
    };
    if deg < 2 {
        return vec![];
    }
    let ints = to_integer_coeffs(p);
    let at = |x: i64| -> BigInt {
        let mut acc = BigInt::zero();
        for c in ints.iter().rev() {
            acc = acc * BigInt::from(x) + c;
        }
        acc
    };
    let (v0, v1, vm1) = (at(0), at(1), at(-1));
    // A rational root makes one of the sample values vanish; deflate first
    // so divisor enumeration stays finite.
    let mut base = Poly::new(ints.iter().map(|c| QuadNum::from_rat(Rat::from_integer(c.clone()))).collect());
    for r in rational_roots(p) {
        let lin = Poly::new(vec![QuadNum::from_rat(-r.clone()), QuadNum::one()]);
        loop {
            let (q, rem) = base.div_rem(&lin);
            if rem.is_zero() && q.degree().is_some() {
                base = q;
            } else {
                break;
            }
        }
    }
    if base.degree().is_none_or(|d| d < 2) {
        return vec![];
    }
    let ints = to_integer_coeffs(&base);
    let at_base = |x: i64| -> BigInt {
        let mut acc = BigInt::zero();
        for c in ints.iter().rev() {
            acc = acc * BigInt::from(x) + c;
        }
        acc
    };
    let (v0, v1, vm1) = if v0.is_zero() || v1.is_zero() || vm1.is_zero() {
        (at_base(0), at_base(1), at_base(-1))
    } else {
        (v0, v1, vm1)
    };
    debug_assert!(!v0.is_zero() && !v1.is_zero() && !vm1.is_zero());

    let mut found = Vec::new();
    let two = BigInt::from(2);
    for d0 in signed_divisors(&v0) {
        for d1 in signed_divisors(&v1) {
            for dm1 in signed_divisors(&vm1) {
                // g(x) = a x² + b x + c interpolating the three divisor picks
                let c = d0.clone();
                let b2 = &d1 - &dm1; // 2b
                let a2 = &d1 + &dm1 - &two * &c; // 2a
                if (&b2 % &two).is_zero() != (&a2 % &two).is_zero() {
                    continue;
                }
                if !(&a2 % &two).is_zero() {
                    continue;
                }
                let a = &a2 / &two;
                let b = &b2 / &two;
                if a.is_zero() {
                    continue;
                }
                let cand = Poly::new(vec![
                    QuadNum::from_rat(Rat::from_integer(c.clone())),
                    QuadNum::from_rat(Rat::from_integer(b.clone())),
                    QuadNum::from_rat(Rat::from_integer(a.clone())),
                ])
                .into_monic();
                if found.contains(&cand) {
                    continue;
                }
                let (_, rem) = base.div_rem(&cand);
                if rem.is_zero() && is_irreducible_quadratic(&cand) {
                    found.push(cand);
                }
            }
        }
    }
    found.sort_by(|a, b| a.coeffs().cmp(b.coeffs()));
    found
}

fn signed_divisors(n: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    for d in divisors(n) {
        out.push(d.clone());
        out.push(-d);
    }
    out
}

fn is_irreducible_quadratic(p: &Poly) -> bool {
    if p.degree() != Some(2) {
        return false;
    }
    let a = p.coeff(2).as_rational().unwrap().clone();
    let b = p.coeff(1).as_rational().unwrap().clone();
    let c = p.coeff(0).as_rational().unwrap().clone();
    let disc = &b * &b - rat_i64(4) * &a * &c;
    rat_sqrt(&disc).is_none()
}

/// Roots of a monic quadratic `x² + bx + c` over the working extension
/// Q(sqrt(d)), via the exact in-field square root.
pub fn quadratic_roots_in_field(b: &QuadNum, c: &QuadNum, d: i64) -> Vec<QuadNum> {
    let four = QuadNum::from_int(4);
    let disc = &(b * b) - &(&four * c);
    let mut out = Vec::new();
    if let Some(s) = sqrt_in_extension(&disc, d) {
        let half = QuadNum::from_frac(1, 2);
        let r1 = (&(-b.clone()) + &s).try_mul(&half).unwrap();
        let r2 = (&(-b.clone()) - &s).try_mul(&half).unwrap();
        out.push(r1.clone());
        if r2 != r1 {
            out.push(r2);
        }
    }
    out.sort();
    out
}

/// All roots of a monic cubic with coefficients in Q(sqrt(d)) that lie in
/// that same field. Rational-coefficient cubics go through the rational
/// root theorem; genuinely quadratic coefficients go through the norm
/// polynomial and its quadratic factors.
pub fn cubic_roots_in_field(cubic: &Poly, d: i64) -> Result<Vec<QuadNum>> {
    debug_assert_eq!(cubic.degree(), Some(3));
    fn push(roots: &mut Vec<QuadNum>, r: QuadNum) {
        if !roots.iter().any(|x| x.eq_value(&r)) {
            roots.push(r);
        }
    }
    let mut roots: Vec<QuadNum> = Vec::new();

    if cubic.is_rational() {
        for r in rational_roots(cubic) {
            push(&mut roots, QuadNum::from_rat(r));
        }
        // a rational cubic with any root in Q(sqrt d) has a rational root;
        // deflate by one and finish with the quadratic formula
        if let Some(first) = roots.first().cloned() {
            let lin = Poly::new(vec![-first.clone(), QuadNum::one()]);
            let (quad, rem) = cubic.div_rem(&lin);
            debug_assert!(rem.is_zero());
            if quad.degree() == Some(2) {
                let quad = quad.into_monic();
                for r in quadratic_roots_in_field(&quad.coeff(1), &quad.coeff(0), d) {
                    push(&mut roots, r);
                }
            }
        }
        let mut out = roots;
        out.sort();
        return Ok(out);
    }

    // Norm polynomial N = f * conj(f) has rational coefficients; roots of f
    // in the field are rational roots of N or roots of its quadratic factors.
    let norm = cubic.mul(&cubic.conj());
    debug_assert!(norm.is_rational());
    for r in rational_roots(&norm) {
        let cand = QuadNum::from_rat(r);
        if cubic.eval(&cand).is_zero() {
            push(&mut roots, cand);
        }
    }
    for m in quadratic_factors(&norm) {
        // common roots of f and m inside the field
        let g = cubic.gcd(&m);
        match g.degree() {
            Some(1) => {
                let root = -(&g.coeff(0) / &g.coeff(1));
                if root.discriminant() == d || root.is_rational() {
                    push(&mut roots, root);
                }
            }
            Some(2) => {
                let g = g.into_monic();
                for r in quadratic_roots_in_field(&g.coeff(1), &g.coeff(0), d) {
                    if cubic.eval(&r).is_zero() {
                        push(&mut roots, r);
                    }
                }
            }
            _ => {}
        }
    }
    roots.sort();
    Ok(roots)
}
