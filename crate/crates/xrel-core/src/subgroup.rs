//! Finite-rank subgroups given by generators plus torsion, and their
//! exhaustive enumeration over coefficient boxes.
//!
//! Generators are treated as formally independent; coincidences show up as
//! flagged duplicates rather than errors. Points are produced incrementally,
//! one curve addition per element, walking the coefficient box in snake
//! order, then sorted into lexicographic coefficient order.

use serde::Serialize;

use crate::curve::{CurvePoint, WeierstrassCurve};
use crate::error::{Error, Result};

/// Generators and torsion points describing Γ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupSpec {
    generators: Vec<CurvePoint>,
    torsion: Vec<CurvePoint>,
}

impl SubgroupSpec {
    /// Validates all points against the curve. The torsion list must
    /// contain the identity; it is closed under negation automatically.
    pub fn new(
        curve: &WeierstrassCurve,
        generators: Vec<CurvePoint>,
        torsion: Vec<CurvePoint>,
    ) -> Result<Self> {
        for p in generators.iter().chain(torsion.iter()) {
            if !curve.contains(p) {
                let (x, y) = (p.x().unwrap(), p.y().unwrap());
                return Err(Error::PointNotOnCurve(x.to_string(), y.to_string()));
            }
        }
        if !torsion.iter().any(CurvePoint::is_infinity) {
            return Err(Error::TorsionMissingIdentity);
        }
        let mut torsion = torsion;
        let negs: Vec<CurvePoint> = torsion.iter().map(CurvePoint::negate).collect();
        for n in negs {
            if !torsion.contains(&n) {
                torsion.push(n);
            }
        }
        torsion.sort();
        torsion.dedup();
        Ok(SubgroupSpec {
            generators,
            torsion,
        })
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[CurvePoint] {
        &self.generators
    }

    pub fn torsion(&self) -> &[CurvePoint] {
        &self.torsion
    }
}

/// One enumerated element: its coefficient vector, torsion index, the exact
/// point, and whether an earlier element already produced the same point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupElement {
    pub coeffs: Vec<i64>,
    pub torsion_index: usize,
    pub point: CurvePoint,
    pub duplicate: bool,
}

/// Box size limits; exact coordinates grow quadratically in height per
/// addition, so the cap is a memory guard.
#[derive(Debug, Clone, Copy)]
pub struct EnumerateOptions {
    pub max_box: u32,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions { max_box: 16 }
    }
}

/// All `Σ k_i·G_i + T` with `‖k‖∞ ≤ box_n`, `T` over the torsion list, in
/// lexicographic (coeffs, torsion_index) order.
pub fn enumerate(
    curve: &WeierstrassCurve,
    spec: &SubgroupSpec,
    box_n: u32,
) -> Result<Vec<GroupElement>> {
    enumerate_with(curve, spec, box_n, EnumerateOptions::default())
}

pub fn enumerate_with(
    curve: &WeierstrassCurve,
    spec: &SubgroupSpec,
    box_n: u32,
    options: EnumerateOptions,
) -> Result<Vec<GroupElement>> {
    if box_n > options.max_box {
        return Err(Error::BoxTooLarge(box_n, options.max_box));
    }
    let r = spec.rank();
    let n = box_n as i64;
    let width = 2 * n + 1;

    let mut out: Vec<GroupElement> = Vec::new();
    let mut emit = |coeffs: Vec<i64>, combo: &CurvePoint| {
        for (ti, t) in spec.torsion.iter().enumerate() {
            let point = curve.add_unchecked(combo, t);
            out.push(GroupElement {
                coeffs: coeffs.clone(),
                torsion_index: ti,
                point,
                duplicate: false,
            });
        }
    };

    if r == 0 {
        emit(vec![], &CurvePoint::Infinity);
    } else {
        // snake walk: one addition per step in the last coordinate,
        // one addition per row start in the outer coordinates
        let corner: Vec<CurvePoint> = spec
            .generators
            .iter()
            .map(|g| curve.scalar_mul_unchecked(-n, g))
            .collect();
        let mut coeffs = vec![-n; r];
        let mut dirs = vec![1i64; r];
        // prefix[k] = Σ_{i≤k} coeffs[i]·G_i
        let mut prefix: Vec<CurvePoint> = Vec::with_capacity(r);
        {
            let mut acc = CurvePoint::Infinity;
            for c in &corner {
                acc = curve.add_unchecked(&acc, c);
                prefix.push(acc.clone());
            }
        }
        loop {
            emit(coeffs.clone(), &prefix[r - 1]);
            // advance the deepest coordinate that can move
            let mut k = r;
            loop {
                if k == 0 {
                    break;
                }
                let i = k - 1;
                let next = coeffs[i] + dirs[i];
                if next.abs() <= n {
                    coeffs[i] = next;
                    let step = if dirs[i] > 0 {
                        spec.generators[i].clone()
                    } else {
                        spec.generators[i].negate()
                    };
                    // this and every deeper prefix sum shift by the step
                    for p in prefix.iter_mut().skip(i) {
                        *p = curve.add_unchecked(p, &step);
                    }
                    break;
                }
                dirs[i] = -dirs[i];
                k -= 1;
            }
            if k == 0 {
                break;
            }
        }
        debug_assert_eq!(out.len(), (width.pow(r as u32) as usize) * spec.torsion.len());
    }

    out.sort_by(|a, b| {
        a.coeffs
            .cmp(&b.coeffs)
            .then_with(|| a.torsion_index.cmp(&b.torsion_index))
    });
    let mut seen: std::collections::BTreeMap<CurvePoint, ()> = Default::default();
    for e in &mut out {
        if seen.insert(e.point.clone(), ()).is_some() {
            e.duplicate = true;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::QuadNum;

    fn qi(n: i64) -> QuadNum {
        QuadNum::from_int(n)
    }

    fn pt(x: i64, y: i64) -> CurvePoint {
        CurvePoint::affine(qi(x), qi(y))
    }

    fn lemniscatic() -> WeierstrassCurve {
        WeierstrassCurve::new(qi(0), qi(-1), qi(0)).unwrap()
    }

    fn rank_one_curve() -> WeierstrassCurve {
        WeierstrassCurve::new(qi(0), qi(-1), QuadNum::from_frac(1, 4)).unwrap()
    }

    #[test]
    fn torsion_only_enumeration() {
        let e = lemniscatic();
        let spec = SubgroupSpec::new(
            &e,
            vec![],
            vec![CurvePoint::Infinity, pt(0, 0), pt(1, 0), pt(-1, 0)],
        )
        .unwrap();
        let elems = enumerate(&e, &spec, 7).unwrap();
        assert_eq!(elems.len(), 4);
        assert!(elems.iter().all(|e| !e.duplicate));
    }

    #[test]
    fn rank_one_box() {
        let e = rank_one_curve();
        let g = e.point(qi(0), QuadNum::from_frac(1, 2)).unwrap();
        let spec = SubgroupSpec::new(&e, vec![g.clone()], vec![CurvePoint::Infinity]).unwrap();
        let elems = enumerate(&e, &spec, 2).unwrap();
        assert_eq!(elems.len(), 5);
        // all distinct: the generator has infinite order
        assert!(elems.iter().all(|e| !e.duplicate));
        // incremental addition matches direct recomputation
        for el in &elems {
            let direct = e.scalar_mul(el.coeffs[0], &g).unwrap();
            assert_eq!(el.point, direct);
        }
    }

    #[test]
    fn zero_box_identity_only() {
        let e = rank_one_curve();
        let spec = SubgroupSpec::new(&e, vec![], vec![CurvePoint::Infinity]).unwrap();
        let elems = enumerate(&e, &spec, 0).unwrap();
        assert_eq!(elems.len(), 1);
        assert!(elems[0].point.is_infinity());
    }

    #[test]
    fn size_formula_and_duplicates() {
        // rank 1 with a 2-torsion generator: plenty of coincidences
        let e = lemniscatic();
        let spec =
            SubgroupSpec::new(&e, vec![pt(0, 0)], vec![CurvePoint::Infinity, pt(1, 0)]).unwrap();
        let elems = enumerate(&e, &spec, 3).unwrap();
        assert_eq!(elems.len(), 7 * 2);
        let distinct = elems.iter().filter(|e| !e.duplicate).count();
        assert_eq!(distinct, 4); // {∞, (0,0)} + (1,0) + (−1,0)
        // duplicates keep their coefficient vectors
        assert!(elems.iter().any(|e| e.duplicate && e.coeffs == vec![2]));
    }

    #[test]
    fn rank_two_incremental_matches_direct() {
        let e = lemniscatic();
        let spec = SubgroupSpec::new(
            &e,
            vec![pt(0, 0), pt(1, 0)],
            vec![CurvePoint::Infinity],
        )
        .unwrap();
        let elems = enumerate(&e, &spec, 2).unwrap();
        assert_eq!(elems.len(), 25);
        for el in &elems {
            let a = e.scalar_mul(el.coeffs[0], &pt(0, 0)).unwrap();
            let b = e.scalar_mul(el.coeffs[1], &pt(1, 0)).unwrap();
            assert_eq!(el.point, e.add(&a, &b).unwrap());
        }
        // lexicographic order
        let mut sorted = elems.clone();
        sorted.sort_by(|a, b| a.coeffs.cmp(&b.coeffs));
        assert_eq!(
            sorted.iter().map(|e| &e.coeffs).collect::<Vec<_>>(),
            elems.iter().map(|e| &e.coeffs).collect::<Vec<_>>()
        );
    }

    #[test]
    fn box_cap_enforced() {
        let e = rank_one_curve();
        let spec = SubgroupSpec::new(&e, vec![], vec![CurvePoint::Infinity]).unwrap();
        assert!(matches!(
            enumerate(&e, &spec, 17),
            Err(Error::BoxTooLarge(17, 16))
        ));
    }

    #[test]
    fn torsion_must_include_identity() {
        let e = lemniscatic();
        assert_eq!(
            SubgroupSpec::new(&e, vec![], vec![pt(0, 0)]),
            Err(Error::TorsionMissingIdentity)
        );
    }

    #[test]
    fn negation_closure_added() {
        let e = WeierstrassCurve::new(qi(0), qi(0), qi(1)).unwrap();
        let spec =
            SubgroupSpec::new(&e, vec![], vec![CurvePoint::Infinity, pt(2, 3)]).unwrap();
        assert!(spec.torsion().contains(&pt(2, -3)));
        assert_eq!(spec.torsion().len(), 3);
    }

    #[test]
    fn off_curve_generator_rejected() {
        let e = lemniscatic();
        assert!(matches!(
            SubgroupSpec::new(&e, vec![pt(5, 5)], vec![CurvePoint::Infinity]),
            Err(Error::PointNotOnCurve(..))
        ));
    }
}
