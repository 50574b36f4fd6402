//! Report formats written by the commands. Every report derives both
//! `Serialize` and `Deserialize` so emitted files re-parse under the same
//! schema. Rationals are strings; decimal approximations appear only in
//! fields suffixed `_approx`.

use serde::{Deserialize, Serialize};

use polystab_core::cone::{Cone, ConeFace};
use polystab_core::exact::{QVec, Rat};
use polystab_core::moment::{ContainmentReport, Realization, Target, TargetOutcome, ZeroCertificate};
use polystab_core::poly::Root;
use polystab_core::stability::{Series, StabilityVerdict, SweepReport, Wall};
use polystab_core::toric::{AffineFn, Polygon};

use crate::error::CliResult;
use crate::input::{int_vec, int_vecs, ModelJson};

/// Digits after the point in approximate values.
pub const APPROX_DIGITS: usize = 12;

/// Controls whether `_approx` fields are filled in.
#[derive(Clone, Copy, Debug, Default)]
pub struct Style {
    pub float: bool,
}

impl Style {
    pub fn approx(&self, r: &Rat) -> Option<String> {
        self.float.then(|| r.to_decimal(APPROX_DIGITS))
    }

    pub fn approx_vec(&self, v: &QVec) -> Option<Vec<String>> {
        self.float.then(|| v.iter().map(|r| r.to_decimal(APPROX_DIGITS)).collect())
    }
}

pub fn rat(r: &Rat) -> String {
    r.to_string()
}

pub fn rat_vec(v: &QVec) -> Vec<String> {
    v.iter().map(rat).collect()
}

pub fn rat_list(v: &[Rat]) -> Vec<String> {
    v.iter().map(rat).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeDualReport {
    pub dim: usize,
    pub input: Vec<Vec<i64>>,
    pub generators: Vec<Vec<i64>>,
    pub lineality: Vec<Vec<i64>>,
    pub rays: Vec<Vec<i64>>,
    pub input_strongly_convex: bool,
    pub dual_full_dimensional: bool,
}

impl ConeDualReport {
    pub fn new(cone: &Cone) -> CliResult<ConeDualReport> {
        let dual = cone.dual();
        let canon = dual.canonical();
        Ok(ConeDualReport {
            dim: cone.dim_ambient(),
            input: int_vecs(cone.generators())?,
            generators: int_vecs(dual.generators())?,
            lineality: int_vecs(&canon.lineality)?,
            rays: int_vecs(&canon.rays)?,
            input_strongly_convex: cone.is_strongly_convex(),
            dual_full_dimensional: dual.cone_dim() == cone.dim_ambient(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceReport {
    pub generators: Vec<Vec<i64>>,
    pub support_normals: Vec<Vec<i64>>,
}

impl FaceReport {
    pub fn new(face: &ConeFace) -> CliResult<FaceReport> {
        Ok(FaceReport {
            generators: int_vecs(face.as_cone().generators())?,
            support_normals: int_vecs(&face.support_normals)?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroCertificateReport {
    pub feasible: bool,
    pub in_open_orbit: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub masses_solution: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary_face: Option<FaceReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degeneration: Option<Vec<i64>>,
}

impl ZeroCertificateReport {
    pub fn new(z: &ZeroCertificate) -> CliResult<ZeroCertificateReport> {
        Ok(ZeroCertificateReport {
            feasible: z.feasible,
            in_open_orbit: z.in_open_orbit(),
            masses_solution: z.masses_solution.as_deref().map(rat_list),
            boundary_face: z.boundary_face.as_ref().map(FaceReport::new).transpose()?,
            degeneration: z.degeneration.as_ref().map(int_vec).transpose()?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub v: Vec<i64>,
    pub role: String,
    pub fut: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fut_approx: Option<String>,
    pub violates: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub eps: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_approx: Option<String>,
    pub status: String,
    pub witnesses: Vec<WitnessReport>,
    /// `μ*(0)`; absent when the oracle does not determine it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_value: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zero_certificate: Option<ZeroCertificateReport>,
}

impl VerdictReport {
    pub fn new(v: &StabilityVerdict, style: Style) -> CliResult<VerdictReport> {
        Ok(VerdictReport {
            eps: rat(&v.eps),
            eps_approx: style.approx(&v.eps),
            status: v.status.as_str().into(),
            witnesses: v
                .witnesses
                .iter()
                .map(|w| {
                    Ok(WitnessReport {
                        v: int_vec(&w.v)?,
                        role: w.role.as_str().into(),
                        fut: rat(&w.fut),
                        fut_approx: style.approx(&w.fut),
                        violates: w.violates,
                    })
                })
                .collect::<CliResult<_>>()?,
            base_value: v.base_value.as_ref().map(rat_vec),
            zero_certificate: v.zero_certificate.as_ref().map(ZeroCertificateReport::new).transpose()?,
        })
    }
}

/// A verdict together with the model it was computed for.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictDocument {
    pub model: ModelJson,
    pub support: Vec<usize>,
    pub verdict: VerdictReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesReport {
    pub name: String,
    pub role: String,
    pub v: Vec<i64>,
    /// Coefficients of the numerator polynomial, constant term first.
    pub numerator: Vec<String>,
}

impl SeriesReport {
    pub fn new(s: &Series) -> CliResult<SeriesReport> {
        Ok(SeriesReport {
            name: s.name.clone(),
            role: s.role.as_str().into(),
            v: int_vec(&s.v)?,
            numerator: rat_list(s.numerator.coeffs()),
        })
    }
}

/// A wall at an exact rational `eps`, or inside the open bracket `(lo, hi)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallReport {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lo: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hi: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_approx: Option<String>,
    pub tags: Vec<String>,
}

impl WallReport {
    pub fn new(w: &Wall, style: Style) -> WallReport {
        let (eps, lo, hi) = match &w.location {
            Root::Exact(r) => (Some(rat(r)), None, None),
            Root::Bracket { lo, hi } => (None, Some(rat(lo)), Some(rat(hi))),
        };
        WallReport {
            eps,
            lo,
            hi,
            eps_approx: style.approx(&w.location.approx()),
            tags: w.tags.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepDocument {
    pub model: ModelJson,
    pub support: Vec<usize>,
    pub interval: [String; 2],
    pub grid: usize,
    pub series: Vec<SeriesReport>,
    pub walls: Vec<WallReport>,
    pub touches: Vec<WallReport>,
    pub points: Vec<VerdictReport>,
}

impl SweepDocument {
    pub fn new(model: ModelJson, support: Vec<usize>, r: &SweepReport, style: Style) -> CliResult<SweepDocument> {
        Ok(SweepDocument {
            model,
            support,
            interval: [rat(&r.lo), rat(&r.hi)],
            grid: r.grid,
            series: r.series.iter().map(SeriesReport::new).collect::<CliResult<_>>()?,
            walls: r.walls.iter().map(|w| WallReport::new(w, style)).collect(),
            touches: r.touches.iter().map(|w| WallReport::new(w, style)).collect(),
            points: r
                .points
                .iter()
                .map(|p| VerdictReport::new(p, style))
                .collect::<CliResult<_>>()?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolygonReport {
    pub vertices: Vec<Vec<String>>,
    pub normals: Vec<Vec<i64>>,
    pub area: String,
    pub lattice_perimeter: String,
}

impl PolygonReport {
    pub fn new(p: &Polygon) -> CliResult<PolygonReport> {
        Ok(PolygonReport {
            vertices: p.vertices().iter().map(rat_vec).collect(),
            normals: int_vecs(p.normals())?,
            area: rat(&p.area()),
            lattice_perimeter: rat(&p.lattice_perimeter()),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub name: String,
    /// `[a, b, c]` for `a·x + b·y + c`.
    pub f: [String; 3],
    pub boundary_integral: String,
    pub interior_integral: String,
    pub fut: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fut_approx: Option<String>,
    pub sign: i32,
    /// Numerator polynomial over the requested interval, constant term first.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub numerator: Option<Vec<String>>,
}

impl InvariantReport {
    pub fn new(name: &str, p: &Polygon, f: &AffineFn, style: Style) -> InvariantReport {
        let fut = p.futaki(f);
        InvariantReport {
            name: name.into(),
            f: [rat(&f.a), rat(&f.b), rat(&f.c)],
            boundary_integral: rat(&p.boundary_integral_affine(f)),
            interior_integral: rat(&p.integral_affine(f)),
            fut_approx: style.approx(&fut),
            sign: fut.signum(),
            fut: rat(&fut),
            numerator: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FutakiDocument {
    pub eps: String,
    pub polygon: PolygonReport,
    pub invariants: Vec<InvariantReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interval: Option<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub combinatorially_stable: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LimitReport {
    pub one_ps: Vec<i64>,
    pub exists: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limit: Option<ModelJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitLimitDocument {
    pub model: ModelJson,
    pub support: Vec<usize>,
    pub limits: Vec<LimitReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizerDocument {
    pub model: ModelJson,
    pub support: Vec<usize>,
    pub stabilizer: Vec<Vec<i64>>,
    pub orbit_closed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support_cone: Option<Vec<Vec<i64>>>,
    pub destabilizer_candidates: Vec<Vec<i64>>,
    pub quotient_rays: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zero_in_orbit_closure: Option<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TargetReport {
    Coefficients { t: Vec<String> },
    Point { value: Vec<String> },
    OneParam { v: Vec<i64> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RealizationReport {
    OpenOrbit { masses: Vec<String> },
    Limit { masses: Vec<String>, one_ps: Vec<i64> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomeReport {
    pub target: TargetReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub in_sigma_eta: Option<bool>,
    pub reachable: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub realization: Option<RealizationReport>,
}

impl OutcomeReport {
    pub fn new(o: &TargetOutcome) -> CliResult<OutcomeReport> {
        let target = match &o.target {
            Target::Coefficients(t) => TargetReport::Coefficients { t: rat_list(t) },
            Target::Point(p) => TargetReport::Point { value: rat_vec(p) },
            Target::OneParam(v) => TargetReport::OneParam { v: int_vec(&v.primitive_direction()?)? },
        };
        let realization = match &o.realization {
            None => None,
            Some(Realization::OpenOrbit { masses }) => Some(RealizationReport::OpenOrbit { masses: rat_list(masses) }),
            Some(Realization::Limit { masses, one_ps }) => Some(RealizationReport::Limit {
                masses: rat_list(masses),
                one_ps: int_vec(&one_ps.primitive_direction()?)?,
            }),
        };
        Ok(OutcomeReport {
            target,
            point: o.point.as_ref().map(rat_vec),
            in_sigma_eta: o.in_sigma_eta,
            reachable: o.reachable(),
            realization,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImageDocument {
    pub model: ModelJson,
    pub base_value: Vec<String>,
    pub masses: Vec<String>,
    pub moment_value: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub moment_value_approx: Option<Vec<String>>,
    pub eta: String,
    pub zero_certificate: ZeroCertificateReport,
    pub outcomes: Vec<OutcomeReport>,
    pub sigma_eta_contained: bool,
}

impl ImageDocument {
    pub fn containment(r: &ContainmentReport) -> CliResult<(String, Vec<OutcomeReport>, bool)> {
        Ok((
            rat(&r.eta),
            r.outcomes.iter().map(OutcomeReport::new).collect::<CliResult<_>>()?,
            r.sigma_eta_contained(),
        ))
    }
}
