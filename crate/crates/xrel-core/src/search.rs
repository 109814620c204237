//! Solution search: all triples from an enumerated box satisfying the
//! exact relation, classified against the family list, plus the fiber-count
//! helper for the degree-8 covering property.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::curve::WeierstrassCurve;
use crate::error::Result;
use crate::exact::QuadNum;
use crate::family::{classify_with_policy, member, FamilyList, RelationCoeffs};
use crate::cm::CmPolicy;
use crate::subgroup::{enumerate_with, EnumerateOptions, GroupElement, SubgroupSpec};

/// How a solution triple sits relative to the classified families.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Classification {
    /// Lies on the family with this id (index into the canonical list).
    Trivial { family: usize },
    /// Satisfies the relation but lies on no classified family.
    Sporadic,
}

/// One exact solution triple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolutionRecord {
    pub p1: GroupElement,
    pub p2: GroupElement,
    pub p3: GroupElement,
    pub classification: Classification,
}

/// Counts for one completed search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchSummary {
    pub box_n: u32,
    pub elements: usize,
    pub duplicates: usize,
    pub total: usize,
    pub trivial: usize,
    pub sporadic: usize,
    pub per_family: BTreeMap<usize, usize>,
    /// Counts at the doubled box, when the stabilization pass ran.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stabilization: Option<Box<SearchSummary>>,
}

/// Full search output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    pub families: FamilyList,
    pub solutions: Vec<SolutionRecord>,
    pub summary: SearchSummary,
}

#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    pub threads: usize,
    pub max_box: u32,
    /// Re-run at `2·box_n` and report both counts.
    pub stabilize: bool,
    pub cm_policy: CmPolicy,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            threads: 1,
            max_box: 16,
            stabilize: false,
            cm_policy: CmPolicy::Auto,
        }
    }
}

/// Number of points of E³ over the algebraic closure above an affine
/// x-triple: each slot contributes 2 unless its x is a root of the cubic.
pub fn fiber_count(curve: &WeierstrassCurve, xs: &[QuadNum; 3]) -> u32 {
    xs.iter()
        .map(|x| if curve.cubic_at(x).is_zero() { 1 } else { 2 })
        .product()
}

/// Finds all solution triples over the box and classifies them.
pub fn find_solutions(
    curve: &WeierstrassCurve,
    coeffs: &RelationCoeffs,
    spec: &SubgroupSpec,
    box_n: u32,
) -> Result<SearchReport> {
    find_solutions_with(curve, coeffs, spec, box_n, SearchOptions::default())
}

pub fn find_solutions_with(
    curve: &WeierstrassCurve,
    coeffs: &RelationCoeffs,
    spec: &SubgroupSpec,
    box_n: u32,
    options: SearchOptions,
) -> Result<SearchReport> {
    let families = classify_with_policy(curve, coeffs, options.cm_policy)?;
    let mut report = search_one_box(curve, coeffs, spec, box_n, &families, &options)?;
    if options.stabilize {
        // the doubled box was explicitly requested, so it may exceed the cap
        let mut widened = options;
        widened.max_box = options.max_box.max(box_n * 2);
        let doubled = search_one_box(curve, coeffs, spec, box_n * 2, &families, &widened)?;
        report.summary.stabilization = Some(Box::new(doubled.summary));
    }
    Ok(report)
}

fn search_one_box(
    curve: &WeierstrassCurve,
    coeffs: &RelationCoeffs,
    spec: &SubgroupSpec,
    box_n: u32,
    families: &FamilyList,
    options: &SearchOptions,
) -> Result<SearchReport> {
    let all = enumerate_with(
        curve,
        spec,
        box_n,
        EnumerateOptions {
            max_box: options.max_box,
        },
    )?;
    let duplicates = all.iter().filter(|e| e.duplicate).count();
    // search over distinct affine points; the first witness represents each
    let elements: Vec<&GroupElement> = all
        .iter()
        .filter(|e| !e.duplicate && !e.point.is_infinity())
        .collect();

    // x-coordinate index: x3 is solved for, then looked up
    let mut index: BTreeMap<QuadNum, Vec<usize>> = BTreeMap::new();
    for (i, e) in elements.iter().enumerate() {
        index
            .entry(e.point.x().unwrap().clone())
            .or_default()
            .push(i);
    }

    let [c1, c2, c3] = coeffs.as_array();
    let scan_pair = |i: usize| -> Result<Vec<(usize, usize, usize)>> {
        let mut found = Vec::new();
        let x1 = elements[i].point.x().unwrap();
        let c1x1 = c1.try_mul(x1)?;
        for (j, e2) in elements.iter().enumerate() {
            let x2 = e2.point.x().unwrap();
            let partial = c1x1.try_add(&c2.try_mul(x2)?)?;
            let x3 = (-partial).try_div(c3)?;
            if let Some(bucket) = index.get(&x3) {
                for &k in bucket {
                    found.push((i, j, k));
                }
            }
        }
        Ok(found)
    };

    let triples: Vec<(usize, usize, usize)> = if options.threads > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(options.threads)
            .build()
            .expect("thread pool");
        let per: Result<Vec<Vec<_>>> = pool.install(|| {
            (0..elements.len())
                .into_par_iter()
                .map(scan_pair)
                .collect()
        });
        per?.into_iter().flatten().collect()
    } else {
        let mut acc = Vec::new();
        for i in 0..elements.len() {
            acc.extend(scan_pair(i)?);
        }
        acc
    };

    let mut solutions = Vec::with_capacity(triples.len());
    let mut per_family: BTreeMap<usize, usize> = BTreeMap::new();
    let mut sporadic = 0usize;
    for (i, j, k) in triples {
        let (e1, e2, e3) = (elements[i], elements[j], elements[k]);
        // defense against enumeration or indexing bugs: re-verify exactly
        let relation = c1
            .try_mul(e1.point.x().unwrap())?
            .try_add(&c2.try_mul(e2.point.x().unwrap())?)?
            .try_add(&c3.try_mul(e3.point.x().unwrap())?)?;
        assert!(relation.is_zero(), "indexed triple fails exact relation");
        let triple = [e1.point.clone(), e2.point.clone(), e3.point.clone()];
        let classification = match families
            .families
            .iter()
            .position(|f| member(curve, f, &triple))
        {
            Some(id) => {
                *per_family.entry(id).or_insert(0) += 1;
                Classification::Trivial { family: id }
            }
            None => {
                sporadic += 1;
                Classification::Sporadic
            }
        };
        solutions.push(SolutionRecord {
            p1: e1.clone(),
            p2: e2.clone(),
            p3: e3.clone(),
            classification,
        });
    }
    solutions.sort_by(|a, b| {
        let key = |r: &SolutionRecord| {
            (
                r.p1.coeffs.clone(),
                r.p1.torsion_index,
                r.p2.coeffs.clone(),
                r.p2.torsion_index,
                r.p3.coeffs.clone(),
                r.p3.torsion_index,
            )
        };
        key(a).cmp(&key(b))
    });
    let trivial = solutions.len() - sporadic;
    Ok(SearchReport {
        families: families.clone(),
        summary: SearchSummary {
            box_n,
            elements: elements.len(),
            duplicates,
            total: solutions.len(),
            trivial,
            sporadic,
            per_family,
            stabilization: None,
        },
        solutions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::CurvePoint;

    fn qi(n: i64) -> QuadNum {
        QuadNum::from_int(n)
    }

    fn pt(x: i64, y: i64) -> CurvePoint {
        CurvePoint::affine(qi(x), qi(y))
    }

    #[test]
    fn fiber_counts() {
        let e = WeierstrassCurve::new(qi(0), qi(-1), qi(0)).unwrap();
        assert_eq!(fiber_count(&e, &[qi(2), qi(3), qi(-4)]), 8);
        assert_eq!(fiber_count(&e, &[qi(0), qi(2), qi(3)]), 4);
        assert_eq!(fiber_count(&e, &[qi(0), qi(1), qi(-1)]), 1);
    }

    #[test]
    fn torsion_search_finds_five() {
        let e = WeierstrassCurve::new(qi(0), qi(-1), qi(0)).unwrap();
        let coeffs = RelationCoeffs::from_ints(1, 1, 2).unwrap();
        let spec = SubgroupSpec::new(
            &e,
            vec![],
            vec![CurvePoint::Infinity, pt(0, 0), pt(1, 0), pt(-1, 0)],
        )
        .unwrap();
        let report = find_solutions(&e, &coeffs, &spec, 0).unwrap();
        assert_eq!(report.summary.total, 5);
        assert_eq!(report.summary.sporadic, 0);
        assert_eq!(report.summary.trivial, 5);
        let expected: Vec<[CurvePoint; 3]> = vec![
            [pt(-1, 0), pt(-1, 0), pt(1, 0)],
            [pt(-1, 0), pt(1, 0), pt(0, 0)],
            [pt(0, 0), pt(0, 0), pt(0, 0)],
            [pt(1, 0), pt(-1, 0), pt(0, 0)],
            [pt(1, 0), pt(1, 0), pt(-1, 0)],
        ];
        let got: Vec<[CurvePoint; 3]> = report
            .solutions
            .iter()
            .map(|s| [s.p1.point.clone(), s.p2.point.clone(), s.p3.point.clone()])
            .collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn empty_subgroup_no_solutions() {
        let e = WeierstrassCurve::new(qi(0), qi(-1), QuadNum::from_frac(1, 4)).unwrap();
        let coeffs = RelationCoeffs::from_ints(1, 1, 1).unwrap();
        let spec = SubgroupSpec::new(&e, vec![], vec![CurvePoint::Infinity]).unwrap();
        let report = find_solutions(&e, &coeffs, &spec, 5).unwrap();
        assert_eq!(report.summary.total, 0);
    }

    #[test]
    fn thread_count_does_not_change_output() {
        let e = WeierstrassCurve::new(qi(0), qi(-1), qi(0)).unwrap();
        let coeffs = RelationCoeffs::from_ints(1, 1, 2).unwrap();
        let spec = SubgroupSpec::new(
            &e,
            vec![pt(0, 0)],
            vec![CurvePoint::Infinity, pt(1, 0)],
        )
        .unwrap();
        let single = find_solutions_with(
            &e,
            &coeffs,
            &spec,
            3,
            SearchOptions {
                threads: 1,
                ..Default::default()
            },
        )
        .unwrap();
        let multi = find_solutions_with(
            &e,
            &coeffs,
            &spec,
            3,
            SearchOptions {
                threads: 4,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(single, multi);
        assert_eq!(
            serde_json::to_string(&single).unwrap(),
            serde_json::to_string(&multi).unwrap()
        );
    }

    #[test]
    fn stabilization_reports_doubled_box() {
        let e = WeierstrassCurve::new(qi(0), qi(-1), QuadNum::from_frac(1, 4)).unwrap();
        let g = e.point(qi(0), QuadNum::from_frac(1, 2)).unwrap();
        let coeffs = RelationCoeffs::from_ints(1, 1, 1).unwrap();
        let spec = SubgroupSpec::new(&e, vec![g], vec![CurvePoint::Infinity]).unwrap();
        let report = find_solutions_with(
            &e,
            &coeffs,
            &spec,
            2,
            SearchOptions {
                stabilize: true,
                ..Default::default()
            },
        )
        .unwrap();
        let stab = report.summary.stabilization.as_ref().unwrap();
        assert_eq!(stab.box_n, 4);
        assert!(stab.total >= report.summary.total);
    }
}
