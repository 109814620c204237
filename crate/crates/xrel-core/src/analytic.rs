//! Floating-point Weierstrass machinery: lattice periods by the complex
//! AGM, ℘/℘′ evaluation by Laurent series plus point doubling, pole-set
//! window checks, and numeric residuals for classified families.
//!
//! Period pairs are validated at construction: the q-series Eisenstein
//! values of the computed lattice must reproduce the curve's `g2 = −b`,
//! `g3 = −c`. That check is independent of the AGM route, so a wrong branch
//! choice cannot slip through.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::curve::{DepressedForm, WeierstrassCurve};
use crate::error::{Error, Result};
use crate::family::FamilyDescriptor;
use crate::exact::QuadNum;

type C = Complex64;

const PI: f64 = std::f64::consts::PI;

/// A validated period lattice with its invariants.
#[derive(Debug, Clone)]
pub struct LatticeData {
    pub omega1: C,
    pub omega2: C,
    pub g2: C,
    pub g3: C,
    /// `a2/3` of the source curve; the curve's x-coordinate is `℘ − shift`.
    pub shift: C,
    inv: [f64; 4],
    series: Vec<C>,
}

/// Optimal complex arithmetic–geometric mean: the square-root branch is
/// chosen each step so that `|a − b| ≤ |a + b|`.
fn agm(mut a: C, mut b: C) -> C {
    for _ in 0..80 {
        if (a - b).norm() <= 1e-30 * (a.norm() + b.norm()) {
            break;
        }
        let a1 = (a + b) / 2.0;
        let mut b1 = (a * b).sqrt();
        if (a1 - b1).norm() > (a1 + b1).norm() {
            b1 = -b1;
        }
        a = a1;
        b = b1;
    }
    a
}

/// Roots of `4t³ + bt + c`, Newton-polished.
fn quartic_normalized_roots(b: C, c: C) -> [C; 3] {
    // depressed cubic t³ + pt + q with p = b/4, q = c/4
    let p = b / 4.0;
    let q = c / 4.0;
    let mut roots = if p.norm() < 1e-14 * (1.0 + q.norm()) {
        let r = (-q).powf(1.0 / 3.0);
        // powf on complex gives one cube root; rotate for the others
        let w = C::new(-0.5, 3f64.sqrt() / 2.0);
        [r, r * w, r * w * w]
    } else {
        let disc = (q / 2.0) * (q / 2.0) + (p / 3.0) * (p / 3.0) * (p / 3.0);
        let s = disc.sqrt();
        let mut u3 = -q / 2.0 + s;
        if u3.norm() < 1e-18 {
            u3 = -q / 2.0 - s;
        }
        let u = u3.powf(1.0 / 3.0);
        let w = C::new(-0.5, 3f64.sqrt() / 2.0);
        let mut out = [C::new(0.0, 0.0); 3];
        for (k, out_k) in out.iter_mut().enumerate() {
            let uk = u * w.powu(k as u32);
            *out_k = uk - p / (3.0 * uk);
        }
        out
    };
    for r in &mut roots {
        for _ in 0..8 {
            let f = ((*r * *r) * *r) + p * *r + q;
            let fp = 3.0 * (*r * *r) + p;
            if fp.norm() < 1e-300 {
                break;
            }
            *r -= f / fp;
        }
    }
    roots
}

/// Eisenstein series by q-expansion; requires a reduced τ.
fn eisenstein_g2_g3(omega1: C, tau: C) -> (C, C) {
    let q = (C::new(0.0, 2.0 * PI) * tau).exp();
    let mut e4 = C::new(1.0, 0.0);
    let mut e6 = C::new(1.0, 0.0);
    let mut qn = C::new(1.0, 0.0);
    for n in 1..=40u32 {
        qn *= q;
        let nn = n as f64;
        let term = qn / (C::new(1.0, 0.0) - qn);
        e4 += 240.0 * nn.powi(3) * term;
        e6 -= 504.0 * nn.powi(5) * term;
    }
    let base = C::new(2.0 * PI, 0.0) / omega1;
    let b2 = base * base;
    let b4 = b2 * b2;
    let g2 = b4 * e4 / 12.0;
    let g3 = b4 * b2 * e6 / 216.0;
    (g2, g3)
}

/// Gauss lattice reduction plus canonical orientation: ω₁ is a shortest
/// vector with positive real part (or positive imaginary part on the
/// boundary), and Im(ω₂/ω₁) > 0 with |Re(ω₂/ω₁)| ≤ 1/2.
fn reduce_basis(mut w1: C, mut w2: C) -> (C, C) {
    for _ in 0..64 {
        if w1.norm() > w2.norm() {
            std::mem::swap(&mut w1, &mut w2);
        }
        let mu = (w2 * w1.conj()).re / w1.norm_sqr();
        let n = mu.round();
        if n == 0.0 {
            break;
        }
        w2 -= C::new(n, 0.0) * w1;
    }
    if w1.norm() > w2.norm() {
        std::mem::swap(&mut w1, &mut w2);
    }
    // orientation of the short vector
    if w1.re < -1e-12 * w1.norm() || (w1.re.abs() <= 1e-12 * w1.norm() && w1.im < 0.0) {
        w1 = -w1;
    }
    let tau = w2 / w1;
    if tau.im < 0.0 {
        w2 = -w2;
    }
    let tau = w2 / w1;
    let shift = (tau.re).round();
    if shift != 0.0 {
        w2 -= C::new(shift, 0.0) * w1;
    }
    (w1, w2)
}

/// Laurent coefficients `c_k` of `℘ = z⁻² + Σ c_k z^{2k−2}`.
fn laurent_coeffs(g2: C, g3: C, terms: usize) -> Vec<C> {
    let mut c = vec![C::new(0.0, 0.0); terms + 1];
    if terms >= 2 {
        c[2] = g2 / 20.0;
    }
    if terms >= 3 {
        c[3] = g3 / 28.0;
    }
    for k in 4..=terms {
        let mut s = C::new(0.0, 0.0);
        for m in 2..=(k - 2) {
            s += c[m] * c[k - m];
        }
        c[k] = s * 3.0 / ((2 * k + 1) as f64 * (k - 3) as f64);
    }
    c
}

/// Fundamental periods for `Y² = 4ξ³ + bξ + c` (so `g2 = −b`, `g3 = −c`),
/// validated against the q-series invariants to relative 1e−9.
pub fn periods(form: &DepressedForm, precision: u32) -> Result<LatticeData> {
    let b = form.b.embed_complex(precision)?;
    let c = form.c.embed_complex(precision)?;
    let shift = form.shift.embed_complex(precision)?;
    periods_from_bc(b, c, shift)
}

pub fn periods_from_bc(b: C, c: C, shift: C) -> Result<LatticeData> {
    let g2 = -b;
    let g3 = -c;
    let roots = quartic_normalized_roots(b, c);
    let perms: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let scale = 1.0 + g2.norm().sqrt().sqrt() + g3.norm().powf(1.0 / 6.0);
    let mut best: Option<(f64, C, C)> = None;
    for perm in perms {
        let (e1, e2, e3) = (roots[perm[0]], roots[perm[1]], roots[perm[2]]);
        let a = (e1 - e3).sqrt();
        let bb = (e1 - e2).sqrt();
        let cc = (e2 - e3).sqrt();
        let m1 = agm(a, bb);
        let m2 = agm(a, cc);
        if m1.norm() < 1e-300 || m2.norm() < 1e-300 {
            continue;
        }
        let w1 = C::new(PI, 0.0) / m1;
        let w2 = C::new(0.0, PI) / m2;
        if (w2 / w1).im.abs() < 1e-12 {
            continue;
        }
        let (r1, r2) = reduce_basis(w1, w2);
        let tau = r2 / r1;
        let (g2_check, g3_check) = eisenstein_g2_g3(r1, tau);
        let err = (g2_check - g2).norm() / (1.0 + g2.norm())
            + (g3_check - g3).norm() / (1.0 + g3.norm());
        if best.as_ref().is_none_or(|(e, ..)| err < *e) {
            best = Some((err, r1, r2));
        }
    }
    let (err, omega1, omega2) = best.ok_or(Error::Periods)?;
    if err > 1e-9 * scale {
        return Err(Error::Periods);
    }
    let det = omega1.re * omega2.im - omega2.re * omega1.im;
    let inv = [
        omega2.im / det,
        -omega2.re / det,
        -omega1.im / det,
        omega1.re / det,
    ];
    Ok(LatticeData {
        omega1,
        omega2,
        g2,
        g3,
        shift,
        inv,
        series: laurent_coeffs(g2, g3, 30),
    })
}

impl LatticeData {
    pub fn from_curve(curve: &WeierstrassCurve, precision: u32) -> Result<Self> {
        periods(&curve.depressed_form(), precision)
    }

    pub fn tau(&self) -> C {
        self.omega2 / self.omega1
    }

    /// Real lattice coordinates: `z = x·ω₁ + y·ω₂`.
    pub fn coords(&self, z: C) -> (f64, f64) {
        (
            self.inv[0] * z.re + self.inv[1] * z.im,
            self.inv[2] * z.re + self.inv[3] * z.im,
        )
    }

    /// Translate of z with coordinates in [−1/2, 1/2].
    pub fn reduce(&self, z: C) -> C {
        let (x, y) = self.coords(z);
        z - C::new(x.round(), 0.0) * self.omega1 - C::new(y.round(), 0.0) * self.omega2
    }

    /// Distance from z to the nearest lattice point.
    pub fn lattice_distance(&self, z: C) -> f64 {
        let r = self.reduce(z);
        let mut best = f64::INFINITY;
        for m in -1..=1 {
            for n in -1..=1 {
                let d = (r - C::new(m as f64, 0.0) * self.omega1
                    - C::new(n as f64, 0.0) * self.omega2)
                    .norm();
                best = best.min(d);
            }
        }
        best
    }

    fn series_eval(&self, z: C) -> (C, C) {
        let z2 = z * z;
        let mut p = 1.0 / z2;
        let mut dp = -2.0 / (z2 * z);
        let mut zpow = z2; // z^{2k−2}, starting at k = 2
        for (k, ck) in self.series.iter().enumerate().skip(2) {
            let deg = (2 * k - 2) as f64;
            p += *ck * zpow;
            dp += *ck * deg * zpow / z;
            zpow *= z2;
        }
        (p, dp)
    }

    /// ℘ and ℘′ at z. Errors when z lies on the lattice.
    pub fn wp(&self, z: C) -> Result<(C, C)> {
        let scale = self.omega1.norm();
        if self.lattice_distance(z) < 1e-10 * scale {
            return Err(Error::Pole);
        }
        let mut w = self.reduce(z);
        let radius = 0.4 * scale;
        let mut halvings = 0u32;
        while w.norm() > radius {
            w /= 2.0;
            halvings += 1;
        }
        let (mut p, mut dp) = self.series_eval(w);
        for _ in 0..halvings {
            // double the point on Y² = 4X³ − g2X − g3
            let lambda = (12.0 * p * p - self.g2) / (2.0 * dp);
            let x2 = lambda * lambda / 4.0 - 2.0 * p;
            let y2 = lambda * (p - x2) - dp;
            p = x2;
            dp = y2;
        }
        Ok((p, dp))
    }

    /// ℘ at the three half-periods.
    pub fn half_period_values(&self) -> Result<[(C, C); 3]> {
        let halves = [
            self.omega1 / 2.0,
            self.omega2 / 2.0,
            (self.omega1 + self.omega2) / 2.0,
        ];
        let mut out = [(C::new(0.0, 0.0), C::new(0.0, 0.0)); 3];
        for (slot, h) in halves.iter().enumerate() {
            let (p, _) = self.wp(*h)?;
            out[slot] = (*h, p);
        }
        Ok(out)
    }

    /// The half-period whose ℘-value matches `target` best; errors when the
    /// match is not convincing.
    pub fn half_period_for_value(&self, target: C) -> Result<C> {
        let vals = self.half_period_values()?;
        let scale = 1.0 + target.norm();
        let (h, v) = vals
            .iter()
            .min_by(|a, b| {
                (a.1 - target)
                    .norm()
                    .partial_cmp(&(b.1 - target).norm())
                    .unwrap()
            })
            .copied()
            .unwrap();
        if (v - target).norm() > 1e-6 * scale {
            return Err(Error::Periods);
        }
        Ok(h)
    }
}

/// x-coordinate of the sum of two distinct lattice points given their
/// (℘, ℘′) pairs, by the addition theorem.
pub fn wp_addition_x(p1: (C, C), p2: (C, C)) -> C {
    let (x1, y1) = p1;
    let (x2, y2) = p2;
    assert!(
        (x1 - x2).norm() > 1e-9 * (1.0 + x1.norm()),
        "addition formula needs distinct first coordinates"
    );
    let lambda = (y1 - y2) / (x1 - x2);
    lambda * lambda / 4.0 - x1 - x2
}

/// Multipliers and offsets realizing a family through the uniformization.
#[derive(Debug, Clone)]
pub struct FamilyUniformization {
    pub alphas: [C; 3],
    pub betas: [C; 3],
    /// Constant x-value contributed by a pinned slot, if any.
    pub constant: Option<(usize, C)>,
}

/// Derives the complex multipliers for an affine family.
pub fn family_uniformization(
    curve: &WeierstrassCurve,
    lattice: &LatticeData,
    family: &FamilyDescriptor,
) -> Result<FamilyUniformization> {
    let one = C::new(1.0, 0.0);
    let zero = C::new(0.0, 0.0);
    match family {
        FamilyDescriptor::CaseA { .. } => Err(Error::UnsupportedTransform(
            "families with infinity slots have no affine uniformization".into(),
        )),
        FamilyDescriptor::CaseB {
            const_slot,
            unit,
            x_r,
            ..
        } => {
            let k = (*const_slot - 1) as usize;
            let (i, j) = match k {
                0 => (1, 2),
                1 => (0, 2),
                _ => (0, 1),
            };
            let mut alphas = [zero; 3];
            let mut betas = [zero; 3];
            alphas[i] = one;
            alphas[j] = unit.embed();
            betas[i] = zero;
            betas[j] = zero;
            Ok(FamilyUniformization {
                alphas,
                betas,
                constant: Some((k, x_r.embed())),
            })
        }
        FamilyDescriptor::CaseC { u, v } => Ok(FamilyUniformization {
            alphas: [one, u.embed(), v.embed()],
            betas: [zero; 3],
            constant: None,
        }),
        FamilyDescriptor::CaseD {
            endo_slot,
            plus_slot,
            sign,
            a,
        } => {
            let k = (*endo_slot - 1) as usize;
            let p = (*plus_slot - 1) as usize;
            let (m, n) = match k {
                0 => (1, 2),
                1 => (0, 2),
                _ => (0, 1),
            };
            let t = if p == m { n } else { m };
            let s = C::new(f64::from(*sign), 0.0);
            // ξ((a,0)) = a + a2/3 = 4a/3 for this family
            let target = a.embed() + lattice.shift;
            let beta = lattice.half_period_for_value(target)?;
            let mut alphas = [zero; 3];
            let mut betas = [zero; 3];
            alphas[k] = QuadNum::sqrt_d(-2).embed();
            alphas[p] = s;
            alphas[t] = s;
            betas[t] = beta;
            let _ = curve;
            Ok(FamilyUniformization {
                alphas,
                betas,
                constant: None,
            })
        }
    }
}

/// Max residual of `Σ c_i·x(component_i(z))` over random samples through
/// the uniformization; structural (case a) families report 0.
pub fn identity_residual(
    curve: &WeierstrassCurve,
    coeffs: &[QuadNum; 3],
    family: &FamilyDescriptor,
    samples: usize,
) -> Result<f64> {
    if matches!(family, FamilyDescriptor::CaseA { .. }) {
        return Ok(0.0);
    }
    let lattice = LatticeData::from_curve(curve, 53)?;
    let uni = family_uniformization(curve, &lattice, family)?;
    let c: Vec<C> = coeffs.iter().map(QuadNum::embed).collect();
    let mut rng = ChaCha20Rng::seed_from_u64(0x7e11_a5e5);
    let mut worst: f64 = 0.0;
    let mut accepted = 0usize;
    let mut attempts = 0usize;
    while accepted < samples {
        attempts += 1;
        if attempts > samples * 200 {
            return Err(Error::Periods);
        }
        let x: f64 = rng.gen_range(-0.5..0.5);
        let y: f64 = rng.gen_range(-0.5..0.5);
        let z = C::new(x, 0.0) * lattice.omega1 + C::new(y, 0.0) * lattice.omega2;
        let mut sum = C::new(0.0, 0.0);
        let mut ok = true;
        for (slot, c_slot) in c.iter().enumerate() {
            if let Some((k, value)) = uni.constant {
                if k == slot {
                    sum += c_slot * value;
                    continue;
                }
            }
            let arg = uni.alphas[slot] * z + uni.betas[slot];
            if lattice.lattice_distance(arg) < 1e-3 * lattice.omega1.norm() {
                ok = false;
                break;
            }
            let (p, _) = lattice.wp(arg)?;
            if p.norm() > 1e3 {
                ok = false;
                break;
            }
            sum += c_slot * (p - lattice.shift);
        }
        if !ok {
            continue;
        }
        accepted += 1;
        worst = worst.max(sum.norm());
    }
    Ok(worst)
}

/// Windowed pole-inclusion test: every pole of `℘(αᵢz + βᵢ)` inside the
/// 3×3 fundamental-domain window must lie within 1e−8 (scaled) of a pole
/// of some other component.
pub fn pole_inclusion_check(alphas: &[C; 3], betas: &[C; 3], lattice: &LatticeData) -> bool {
    let scale = lattice.omega1.norm();
    let tol = 1e-8 * scale;
    for i in 0..3 {
        if alphas[i].norm() < 1e-300 {
            return false;
        }
        // lattice-coordinate bound for λ = αᵢ·p + βᵢ over window corners
        let mut bound = 0.0f64;
        for sx in [-1.5f64, 1.5] {
            for sy in [-1.5f64, 1.5] {
                let corner = C::new(sx, 0.0) * lattice.omega1 + C::new(sy, 0.0) * lattice.omega2;
                let lam = alphas[i] * corner + betas[i];
                let (x, y) = lattice.coords(lam);
                bound = bound.max(x.abs()).max(y.abs());
            }
        }
        let m = bound.ceil() as i64 + 1;
        for mm in -m..=m {
            for nn in -m..=m {
                let lam = C::new(mm as f64, 0.0) * lattice.omega1
                    + C::new(nn as f64, 0.0) * lattice.omega2;
                let pole = (lam - betas[i]) / alphas[i];
                let (x, y) = lattice.coords(pole);
                if x.abs() > 1.5 + 1e-9 || y.abs() > 1.5 + 1e-9 {
                    continue;
                }
                let covered = (0..3).any(|j| {
                    j != i && lattice.lattice_distance(alphas[j] * pole + betas[j]) < tol
                });
                if !covered {
                    return false;
                }
            }
        }
    }
    true
}

/// Exact pairwise pole-set inclusion for CM multiplier ratios, on lattices
/// whose basis satisfies `ω₂ = √d·ω₁` (the square and `√−2` rectangular
/// cases the classifier produces). Offsets are rational lattice
/// coordinates. The pole set of `℘(αz + β)` is `(1/α)Λ − β/α`; the poles of
/// component `i` lie inside those of component `j` iff `ρ = α_j/α_i` maps
/// the lattice into itself and `β_j − ρβ_i ∈ Λ`.
pub fn poles_subset_exact(
    rho: &QuadNum,
    beta_i: (&crate::exact::Rat, &crate::exact::Rat),
    beta_j: (&crate::exact::Rat, &crate::exact::Rat),
) -> bool {
    use num_traits::One;
    let p = rho.rational_part();
    let q = rho.radical_part();
    let d = rho.discriminant();
    let is_int = |r: &crate::exact::Rat| r.denom().is_one();
    // ρ·Λ ⊆ Λ in the (ω₁, √d·ω₁) basis means integer p, q
    if !is_int(p) || !is_int(q) {
        return false;
    }
    // ρ·(a, b) = (pa + qbd, qa + pb)
    let (a, b) = beta_i;
    let d_rat = crate::exact::rat_i64(d);
    let rot_a = p * a + q * b * &d_rat;
    let rot_b = q * a + p * b;
    is_int(&(beta_j.0 - rot_a)) && is_int(&(beta_j.1 - rot_b))
}
