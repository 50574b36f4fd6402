//! JSON input formats and their conversion into core types.
//!
//! Rationals are accepted as JSON integers or as strings `"p"` / `"p/q"`;
//! lattice vectors (weights, cone generators, normals, one-parameter
//! subgroups) are arrays of integers.

use serde::{Deserialize, Serialize};

use polystab_core::exact::{CRat, Matrix, QVec, Rat};
use polystab_core::poly::Poly;
use polystab_core::presets;
use polystab_core::stability::FutakiOracle;
use polystab_core::toric::{AffineFn, PolytopePencil};
use polystab_core::{Cone, DeformationModel, MomentMapModel};

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RatJson {
    Int(i64),
    Text(String),
}

impl RatJson {
    pub fn to_rat(&self) -> CliResult<Rat> {
        match self {
            RatJson::Int(n) => Ok(Rat::int(*n)),
            RatJson::Text(s) => parse_rat(s),
        }
    }

    pub fn from_rat(r: &Rat) -> RatJson {
        RatJson::Text(r.to_string())
    }
}

pub fn parse_rat(s: &str) -> CliResult<Rat> {
    s.trim()
        .parse()
        .map_err(|_| CliError::Input(format!("not a rational number: {s:?}")))
}

fn rats(xs: &[RatJson]) -> CliResult<Vec<Rat>> {
    xs.iter().map(RatJson::to_rat).collect()
}

fn rat_strings(xs: &[Rat]) -> Vec<RatJson> {
    xs.iter().map(RatJson::from_rat).collect()
}

pub fn int_vec(v: &QVec) -> CliResult<Vec<i64>> {
    v.iter()
        .map(|x| x.to_i64().ok_or_else(|| CliError::Input(format!("{v} is not a 64-bit integer vector"))))
        .collect()
}

pub fn int_vecs(vs: &[QVec]) -> CliResult<Vec<Vec<i64>>> {
    vs.iter().map(int_vec).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeJson {
    pub dim: usize,
    pub generators: Vec<Vec<i64>>,
}

impl ConeJson {
    pub fn to_cone(&self) -> CliResult<Cone> {
        Ok(Cone::new(self.dim, self.generators.iter().map(|g| QVec::from_ints(g)).collect())?)
    }

    pub fn from_cone(c: &Cone) -> CliResult<ConeJson> {
        Ok(ConeJson {
            dim: c.dim_ambient(),
            generators: int_vecs(c.generators())?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelJson {
    pub dim_t: usize,
    pub weights: Vec<Vec<i64>>,
    pub coefficients: Vec<(RatJson, RatJson)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gram: Option<Vec<Vec<RatJson>>>,
}

impl ModelJson {
    pub fn to_model(&self) -> CliResult<DeformationModel> {
        let weights = self.weights.iter().map(|w| QVec::from_ints(w)).collect();
        let coefficients = self
            .coefficients
            .iter()
            .map(|(re, im)| Ok(CRat::new(re.to_rat()?, im.to_rat()?)))
            .collect::<CliResult<Vec<_>>>()?;
        let gram = match &self.gram {
            None => None,
            Some(rows) => {
                let rows = rows.iter().map(|r| rats(r).map(QVec::new)).collect::<CliResult<Vec<_>>>()?;
                Some(Matrix::from_rows(rows, self.dim_t)?)
            }
        };
        Ok(DeformationModel::new(self.dim_t, weights, coefficients, gram)?)
    }

    pub fn from_model(m: &DeformationModel) -> CliResult<ModelJson> {
        Ok(ModelJson {
            dim_t: m.dim_t(),
            weights: int_vecs(m.weights())?,
            coefficients: m
                .coefficients()
                .iter()
                .map(|c| (RatJson::from_rat(&c.re), RatJson::from_rat(&c.im)))
                .collect(),
            gram: m
                .gram_input()
                .map(|g| g.rows().iter().map(|r| rat_strings(r.entries())).collect()),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomentJson {
    pub base_value: Vec<RatJson>,
    pub model: ModelJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub masses: Option<Vec<RatJson>>,
}

impl MomentJson {
    pub fn to_moment(&self) -> CliResult<MomentMapModel> {
        let base = QVec::new(rats(&self.base_value)?);
        let model = self.model.to_model()?;
        Ok(match &self.masses {
            Some(m) => MomentMapModel::new(base, model, rats(m)?)?,
            None => MomentMapModel::with_default_masses(base, model)?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitPencil {
    pub normals: Vec<[i64; 2]>,
    pub c: Vec<RatJson>,
    pub d: Vec<RatJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuiltinPencil {
    pub builtin: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<RatJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PencilJson {
    Explicit(ExplicitPencil),
    Builtin(BuiltinPencil),
}

pub fn builtin_pencil(name: &str, delta: Option<&Rat>) -> CliResult<PolytopePencil> {
    match presets::builtin_pencil(name, delta) {
        Some(p) => Ok(p?),
        None => Err(CliError::Input(format!(
            "unknown built-in {name:?}; available: {}",
            presets::BUILTIN_NAMES.join(", ")
        ))),
    }
}

impl PencilJson {
    pub fn to_pencil(&self) -> CliResult<PolytopePencil> {
        match self {
            PencilJson::Explicit(p) => Ok(PolytopePencil::new(
                p.normals.iter().map(|n| QVec::from_ints(n)).collect(),
                rats(&p.c)?,
                rats(&p.d)?,
            )?),
            PencilJson::Builtin(b) => {
                let delta = b.delta.as_ref().map(RatJson::to_rat).transpose()?;
                builtin_pencil(&b.builtin, delta.as_ref())
            }
        }
    }
}

pub fn affine(f: &[RatJson; 3]) -> CliResult<AffineFn> {
    Ok(AffineFn::new(f[0].to_rat()?, f[1].to_rat()?, f[2].to_rat()?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToricOracleJson {
    pub pencil: PencilJson,
    /// One `[a, b, c]` per basis vector of the torus; defaults to `x − 1`,
    /// `y − 1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hamiltonians: Option<Vec<[RatJson; 3]>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TabulatedEntry {
    pub v: Vec<RatJson>,
    /// Polynomial in `ε`, constant term first.
    pub fut: Vec<RatJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TabulatedOracleJson {
    pub tabulated: Vec<TabulatedEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OracleJson {
    Toric(ToricOracleJson),
    Tabulated(TabulatedOracleJson),
}

impl OracleJson {
    pub fn to_oracle(&self, dim_t: usize) -> CliResult<FutakiOracle> {
        match self {
            OracleJson::Toric(t) => {
                let hamiltonians = match &t.hamiltonians {
                    Some(hs) => hs.iter().map(affine).collect::<CliResult<Vec<_>>>()?,
                    None => presets::p1p1_hamiltonians().to_vec(),
                };
                Ok(FutakiOracle::toric(t.pencil.to_pencil()?, hamiltonians)?)
            }
            OracleJson::Tabulated(t) => {
                let entries = t
                    .tabulated
                    .iter()
                    .map(|e| Ok((QVec::new(rats(&e.v)?), Poly::new(rats(&e.fut)?))))
                    .collect::<CliResult<Vec<_>>>()?;
                Ok(FutakiOracle::tabulated(dim_t, entries)?)
            }
        }
    }
}

/// Input of `verdict` and `sweep`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobJson {
    pub model: ModelJson,
    pub oracle: OracleJson,
}

/// Reads a JSON document, reporting syntax and schema errors with their
/// position.
pub fn from_json_str<T: serde::de::DeserializeOwned>(text: &str) -> CliResult<T> {
    Ok(serde_json::from_str(text)?)
}
