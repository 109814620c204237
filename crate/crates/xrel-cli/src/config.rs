//! Declarative job configuration: a TOML file plus flag overrides. All
//! numbers are exact text; nothing in a config is ever a float.

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};

use xrel_core::{
    CmPolicy, CurvePoint, QuadNum, RelationCoeffs, SubgroupSpec, WeierstrassCurve,
};

/// On-disk / on-flag form. Everything optional so flags can fill the gaps.
#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
pub struct JobConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curve: Option<[String; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<[String; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub box_n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_box: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precision: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cm: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subgroup: Option<SubgroupConfig>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
pub struct SubgroupConfig {
    #[serde(default)]
    pub generators: Vec<PointSpec>,
    #[serde(default)]
    pub torsion: Vec<PointSpec>,
}

/// `"inf"` or `["x", "y"]` with QuadNum text coordinates.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum PointSpec {
    Named(String),
    Affine([String; 2]),
}

impl PointSpec {
    pub fn resolve(&self) -> anyhow::Result<CurvePoint> {
        match self {
            PointSpec::Named(s) if s == "inf" => Ok(CurvePoint::Infinity),
            PointSpec::Named(s) => bail!("unknown point literal `{s}` (expected \"inf\")"),
            PointSpec::Affine([x, y]) => Ok(CurvePoint::affine(
                parse_num(x).context("point x")?,
                parse_num(y).context("point y")?,
            )),
        }
    }
}

fn parse_num(s: &str) -> anyhow::Result<QuadNum> {
    s.parse::<QuadNum>()
        .map_err(|e| anyhow::anyhow!("{e} in `{s}`"))
}

impl JobConfig {
    pub fn load(path: &std::path::Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).context("parsing config")
    }

    /// Later values win; used to apply flag overrides onto a file config.
    pub fn merged_with(mut self, over: JobConfig) -> Self {
        if over.d.is_some() {
            self.d = over.d;
        }
        if over.curve.is_some() {
            self.curve = over.curve;
        }
        if over.coeffs.is_some() {
            self.coeffs = over.coeffs;
        }
        if over.box_n.is_some() {
            self.box_n = over.box_n;
        }
        if over.max_box.is_some() {
            self.max_box = over.max_box;
        }
        if over.precision.is_some() {
            self.precision = over.precision;
        }
        if over.threads.is_some() {
            self.threads = over.threads;
        }
        if over.cm.is_some() {
            self.cm = over.cm;
        }
        if over.subgroup.is_some() {
            self.subgroup = over.subgroup;
        }
        self
    }

    /// Canonical TOML emission (parse → emit is idempotent).
    pub fn canonical_toml(&self) -> anyhow::Result<String> {
        toml::to_string(self).context("emitting config")
    }
}

/// Fully validated job inputs.
pub struct ResolvedJob {
    pub curve: WeierstrassCurve,
    pub coeffs: RelationCoeffs,
    pub subgroup: Option<SubgroupSpec>,
    pub box_n: u32,
    pub max_box: u32,
    pub threads: usize,
    pub cm_policy: CmPolicy,
}

/// Just the curve, for commands that need no relation coefficients.
pub fn resolve_curve(config: &JobConfig) -> anyhow::Result<WeierstrassCurve> {
    let d = config.d.unwrap_or(1);
    let curve_text = config
        .curve
        .as_ref()
        .context("missing curve (config `curve` or --curve)")?;
    Ok(WeierstrassCurve::new(
        parse_num(&curve_text[0]).context("curve a2")?,
        parse_num(&curve_text[1]).context("curve a4")?,
        parse_num(&curve_text[2]).context("curve a6")?,
    )?
    .in_field(d)?)
}

pub fn resolve(config: &JobConfig) -> anyhow::Result<ResolvedJob> {
    let curve = resolve_curve(config)?;

    let coeffs_text = config
        .coeffs
        .as_ref()
        .context("missing coefficients (config `coeffs` or --coeffs)")?;
    let coeffs = RelationCoeffs::new(
        parse_num(&coeffs_text[0]).context("c1")?,
        parse_num(&coeffs_text[1]).context("c2")?,
        parse_num(&coeffs_text[2]).context("c3")?,
    )?;

    let subgroup = match &config.subgroup {
        None => None,
        Some(sg) => {
            let generators = sg
                .generators
                .iter()
                .map(|p| p.resolve())
                .collect::<anyhow::Result<Vec<_>>>()?;
            let mut torsion = sg
                .torsion
                .iter()
                .map(|p| p.resolve())
                .collect::<anyhow::Result<Vec<_>>>()?;
            // the identity is implied; the core requires it explicitly
            if !torsion.iter().any(CurvePoint::is_infinity) {
                torsion.push(CurvePoint::Infinity);
            }
            Some(SubgroupSpec::new(&curve, generators, torsion)?)
        }
    };

    let cm_policy = match config.cm.as_deref() {
        None | Some("auto") => CmPolicy::Auto,
        Some("none") => CmPolicy::None,
        Some(s) => {
            let Some(rest) = s.strip_prefix("d=") else {
                bail!("bad --cm value `{s}` (auto | none | d=<disc>)");
            };
            CmPolicy::Declared(rest.parse::<i64>().context("cm discriminant")?)
        }
    };

    if config.precision.unwrap_or(53) < 53 {
        bail!("precision must be at least 53 bits");
    }
    Ok(ResolvedJob {
        curve,
        coeffs,
        subgroup,
        box_n: config.box_n.unwrap_or(0),
        max_box: config.max_box.unwrap_or(16),
        threads: config.threads.unwrap_or(1).max(1),
        cm_policy,
    })
}
