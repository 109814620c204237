//! Independent brute-force verifiers.
//!
//! `lemma2_scan` exhaustively checks the abelian covering property: whenever
//! a finite abelian group of rank ≤ 2 is the union of a proper subgroup and
//! a coset of another proper subgroup, the two subgroups coincide and have
//! index 2. `derive_caseb_constant` solves the case-(b) identity for its
//! constant term in the function field; it is the oracle of record for the
//! constant slot, so sign conventions never get transcribed by hand.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::curve::WeierstrassCurve;
use crate::error::{Error, Result};
use crate::exact::QuadNum;
use crate::family::RelationCoeffs;
use crate::funcfield::{x_function, CurveFunction, XTransform};

/// Summary of an exhaustive covering scan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Lemma2Report {
    pub max_order: u64,
    pub groups_scanned: u64,
    pub subgroup_pairs: u64,
    pub covering_instances: u64,
    pub counterexamples: u64,
}

/// Scans every abelian group `Z/n1 × Z/n2` with `n1 | n2`, `n1·n2 ≤
/// max_order`, every ordered pair of proper subgroups `(H, H')` and every
/// coset offset `b`, and checks that each covering `G = H ∪ (H' + b)`
/// forces `H = H'` of index 2.
pub fn lemma2_scan(max_order: u64) -> Result<Lemma2Report> {
    if max_order > 256 {
        return Err(Error::ScanTooLarge(max_order, 256));
    }
    let mut report = Lemma2Report {
        max_order,
        groups_scanned: 0,
        subgroup_pairs: 0,
        covering_instances: 0,
        counterexamples: 0,
    };
    for n1 in 1..=max_order {
        for n2 in (n1..=max_order).step_by(n1 as usize) {
            if n2 % n1 != 0 || n1 * n2 > max_order {
                continue;
            }
            scan_group(n1 as usize, n2 as usize, &mut report);
            report.groups_scanned += 1;
        }
    }
    Ok(report)
}

/// Fixed 256-bit set, one bit per group element.
#[derive(Clone, Copy, PartialEq, Eq, Default)]
struct Bits256([u64; 4]);

impl Bits256 {
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn union(self, rhs: Self) -> Self {
        Bits256([
            self.0[0] | rhs.0[0],
            self.0[1] | rhs.0[1],
            self.0[2] | rhs.0[2],
            self.0[3] | rhs.0[3],
        ])
    }

    fn full(order: usize) -> Self {
        let mut b = Bits256::default();
        for i in 0..order {
            b.set(i);
        }
        b
    }
}

/// Elements of `Z/n1 × Z/n2` are indexed `a*n2 + b`.
fn scan_group(n1: usize, n2: usize, report: &mut Lemma2Report) {
    let order = n1 * n2;
    let idx = |a: usize, b: usize| (a % n1) * n2 + (b % n2);
    let subgroups = enumerate_subgroups(n1, n2);
    // element-translation tables for coset shifts
    let mut shift = vec![vec![0usize; order]; order];
    for a in 0..n1 {
        for b in 0..n2 {
            let g = idx(a, b);
            for c in 0..n1 {
                for d in 0..n2 {
                    shift[g][idx(c, d)] = idx(a + c, b + d);
                }
            }
        }
    }
    let full = Bits256::full(order);
    let masks: Vec<Bits256> = subgroups
        .iter()
        .map(|h| {
            let mut m = Bits256::default();
            for &g in h {
                m.set(g);
            }
            m
        })
        .collect();
    for (hi, h) in subgroups.iter().enumerate() {
        if h.len() == order {
            continue; // proper subgroups only
        }
        for (hj, h2) in subgroups.iter().enumerate() {
            if h2.len() == order {
                continue;
            }
            report.subgroup_pairs += 1;
            if h.len() + h2.len() < order {
                continue;
            }
            for row in &shift {
                let mut coset = Bits256::default();
                for &g in h2 {
                    coset.set(row[g]);
                }
                if masks[hi].union(coset) == full {
                    report.covering_instances += 1;
                    let same = hi == hj;
                    let index_two = order == 2 * h.len();
                    if !(same && index_two) {
                        report.counterexamples += 1;
                    }
                }
            }
        }
    }
}

/// All subgroups, via closure of every generator pair (rank ≤ 2 suffices).
fn enumerate_subgroups(n1: usize, n2: usize) -> Vec<Vec<usize>> {
    let order = n1 * n2;
    let idx = |a: usize, b: usize| (a % n1) * n2 + (b % n2);
    let add = |x: usize, y: usize| idx(x / n2 + y / n2, x % n2 + y % n2);
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    for g1 in 0..order {
        for g2 in g1..order {
            let mut h: BTreeSet<usize> = BTreeSet::new();
            h.insert(0);
            let mut frontier = vec![0usize];
            while let Some(x) = frontier.pop() {
                for g in [g1, g2] {
                    let y = add(x, g);
                    if h.insert(y) {
                        frontier.push(y);
                    }
                }
            }
            seen.insert(h.into_iter().collect());
        }
    }
    seen.into_iter().collect()
}

/// Solves `c_i·X + c_j·x([u]P) + c_k·t ≡ 0` for the constant `t`, where
/// the constant sits in `const_slot` (1-based) and the moving slots are the
/// remaining two in increasing order.
pub fn derive_caseb_constant(
    curve: &WeierstrassCurve,
    coeffs: &RelationCoeffs,
    const_slot: u8,
    unit: &QuadNum,
) -> Result<QuadNum> {
    let k = (const_slot - 1) as usize;
    let (i, j) = match k {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    let f_i = x_function(curve, &XTransform::Identity)?;
    let f_j = x_function(curve, &XTransform::UnitEndo(unit.clone()))?;
    let g = f_i
        .scale(coeffs.get(i))
        .add(&f_j.scale(coeffs.get(j)));
    let g0 = g.as_constant().ok_or(Error::NoConstantSolution)?;
    let t = -g0.try_div(coeffs.get(k))?;
    // feeding the constant back must verify
    debug_assert!({
        let mut terms = vec![CurveFunction::zero(curve); 3];
        terms[i] = f_i;
        terms[j] = f_j;
        terms[k] = CurveFunction::constant(curve, QuadNum::one());
        let mut cs = coeffs.as_array().clone();
        cs[k] = cs[k].try_mul(&t).unwrap();
        crate::funcfield::identity_check(curve, &cs, &terms.try_into().unwrap())
    });
    Ok(t)
}
