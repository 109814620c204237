//! Machine-readable report shapes. Field order is fixed by struct order,
//! numbers are canonical text, so identical jobs emit identical bytes.

use num_complex::Complex64;
use serde::Serialize;

use xrel_core::{FamilyDescriptor, FamilyList, QuadNum, UnrealizedFamily, WeierstrassCurve};

#[derive(Serialize)]
pub struct CurveInfo {
    pub a2: String,
    pub a4: String,
    pub a6: String,
    pub d: i64,
}

impl CurveInfo {
    pub fn new(curve: &WeierstrassCurve) -> Self {
        CurveInfo {
            a2: curve.a2().to_string(),
            a4: curve.a4().to_string(),
            a6: curve.a6().to_string(),
            d: curve.field_disc(),
        }
    }
}

pub fn coeff_strings(coeffs: &[QuadNum; 3]) -> [String; 3] {
    [
        coeffs[0].to_string(),
        coeffs[1].to_string(),
        coeffs[2].to_string(),
    ]
}

#[derive(Serialize)]
pub struct FamilyRecord {
    pub id: usize,
    #[serde(flatten)]
    pub family: FamilyDescriptor,
    pub verified: bool,
}

#[derive(Serialize)]
pub struct ClassifyReport {
    pub curve: CurveInfo,
    pub coeffs: [String; 3],
    pub families: Vec<FamilyRecord>,
    pub unrealized: Vec<UnrealizedFamily>,
}

impl ClassifyReport {
    pub fn new(curve: &WeierstrassCurve, coeffs: &[QuadNum; 3], list: &FamilyList) -> Self {
        ClassifyReport {
            curve: CurveInfo::new(curve),
            coeffs: coeff_strings(coeffs),
            families: list
                .families
                .iter()
                .enumerate()
                .map(|(id, family)| FamilyRecord {
                    id,
                    family: family.clone(),
                    verified: true,
                })
                .collect(),
            unrealized: list.unrealized.clone(),
        }
    }
}

#[derive(Serialize)]
pub struct VerifyEntry {
    pub id: usize,
    pub label: String,
    pub symbolic: bool,
    /// Max numeric residual over the sampled parameter points; 0 for the
    /// structural (case a) families.
    pub residual: f64,
    pub numeric_ok: bool,
}

#[derive(Serialize)]
pub struct VerifyReport {
    pub curve: CurveInfo,
    pub coeffs: [String; 3],
    pub results: Vec<VerifyEntry>,
    pub all_passed: bool,
}

/// `re,im` text form for complex values.
pub fn fmt_complex(z: Complex64) -> String {
    format!("{:.15e},{:.15e}", z.re, z.im)
}

#[derive(Serialize)]
pub struct WpReport {
    pub omega1: String,
    pub omega2: String,
    pub tau: String,
    pub g2: String,
    pub g3: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wp: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wp_prime: Option<String>,
}

#[derive(Serialize)]
pub struct CasebConstantReport {
    pub const_slot: u8,
    pub unit: String,
    pub x_r: String,
    pub verified: bool,
}
