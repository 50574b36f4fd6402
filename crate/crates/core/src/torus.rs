//! Weight-space model of a torus-equivariant deformation.
//!
//! A point `b = Σ b_i` of the deformation space is recorded by the characters
//! `m_i` of the torus acting on it and one complex coefficient per weight
//! space. The one-parameter subgroup generated by an integer `v` acts by
//! `t ↦ Σ t^⟨m_i, v⟩ b_i`, so everything about orbits, limits and stabilisers
//! depends only on which coefficients vanish: the support.

use alloc::vec::Vec;

use crate::cone::{Cone, ConeFace};
use crate::error::{check_dim, Error, Result};
use crate::exact::{kernel_basis, CRat, Matrix, QVec, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeformationModel {
    dim_t: usize,
    weights: Vec<QVec>,
    coefficients: Vec<CRat>,
    gram: Option<Matrix>,
}

/// Indices of the weights whose coefficient is nonzero, increasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Support(Vec<usize>);

impl Support {
    pub fn new(mut indices: Vec<usize>) -> Support {
        indices.sort_unstable();
        indices.dedup();
        Support(indices)
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }
}

/// The torus divided by the stabiliser of the point, in coordinates.
///
/// `complement` is a basis (primitive integer vectors) of the
/// gram-orthogonal complement of the stabiliser algebra; `reduced_weights`
/// are the support weights written in the dual coordinates
/// `(⟨m_i, w_1⟩, …, ⟨m_i, w_r⟩)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientTorus {
    pub complement: Vec<QVec>,
    pub reduced_weights: Vec<QVec>,
}

impl QuotientTorus {
    pub fn rank(&self) -> usize {
        self.complement.len()
    }

    /// `Σ c_k w_k`, made primitive.
    pub fn lift(&self, coords: &QVec) -> Result<QVec> {
        check_dim(self.rank(), coords.dim())?;
        let dim = self.complement.first().map(QVec::dim).ok_or(Error::ZeroVector)?;
        let mut v = QVec::zeros(dim);
        for (c, w) in coords.iter().zip(&self.complement) {
            v.axpy(c, w);
        }
        v.primitive_direction()
    }
}

impl DeformationModel {
    /// Weights must be distinct nonzero integer vectors in `dim_t`
    /// dimensions, one coefficient per weight; `gram`, when given, must be a
    /// symmetric positive-definite `dim_t × dim_t` matrix.
    pub fn new(
        dim_t: usize,
        weights: Vec<QVec>,
        coefficients: Vec<CRat>,
        gram: Option<Matrix>,
    ) -> Result<DeformationModel> {
        if dim_t == 0 {
            return Err(Error::InvalidInput("torus dimension must be positive".into()));
        }
        check_dim(weights.len(), coefficients.len())?;
        for (i, w) in weights.iter().enumerate() {
            check_dim(dim_t, w.dim())?;
            if !w.is_integral() {
                return Err(Error::NotIntegral);
            }
            if w.is_zero() {
                return Err(Error::InvalidInput("weights must be nonzero characters".into()));
            }
            if weights[..i].contains(w) {
                return Err(Error::InvalidInput(alloc::format!("weight {w} listed twice")));
            }
        }
        if let Some(g) = &gram {
            check_dim(dim_t, g.nrows())?;
            check_dim(dim_t, g.ncols())?;
            if !g.is_positive_definite() {
                return Err(Error::InvalidInput("gram matrix must be symmetric positive definite".into()));
            }
        }
        Ok(DeformationModel { dim_t, weights, coefficients, gram })
    }

    /// Coefficient 1 on the given weight indices, 0 elsewhere.
    pub fn with_support(dim_t: usize, weights: Vec<QVec>, support: &Support, gram: Option<Matrix>) -> Result<Self> {
        if let Some(&bad) = support.indices().iter().find(|&&i| i >= weights.len()) {
            return Err(Error::InvalidInput(alloc::format!("support index {bad} out of range")));
        }
        let coefficients = (0..weights.len())
            .map(|i| if support.contains(i) { CRat::real(Rat::one()) } else { CRat::default() })
            .collect();
        DeformationModel::new(dim_t, weights, coefficients, gram)
    }

    pub fn dim_t(&self) -> usize {
        self.dim_t
    }

    pub fn weights(&self) -> &[QVec] {
        &self.weights
    }

    pub fn coefficients(&self) -> &[CRat] {
        &self.coefficients
    }

    pub fn gram_input(&self) -> Option<&Matrix> {
        self.gram.as_ref()
    }

    /// The inner product on the Lie algebra; identity when none was given.
    pub fn gram(&self) -> Matrix {
        self.gram.clone().unwrap_or_else(|| Matrix::identity(self.dim_t))
    }

    pub fn with_coefficients(&self, coefficients: Vec<CRat>) -> Result<DeformationModel> {
        DeformationModel::new(self.dim_t, self.weights.clone(), coefficients, self.gram.clone())
    }

    pub fn support(&self) -> Support {
        Support(
            self.coefficients
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, _)| i)
                .collect(),
        )
    }

    pub fn support_weights(&self) -> Vec<QVec> {
        self.support().0.iter().map(|&i| self.weights[i].clone()).collect()
    }

    /// `|b_i|²` for each support weight, in support order.
    pub fn default_masses(&self) -> Vec<Rat> {
        self.support().0.iter().map(|&i| self.coefficients[i].norm_sqr()).collect()
    }

    /// Cone generated by the weights carrying a nonzero coefficient.
    pub fn support_cone(&self) -> Result<Cone> {
        let gens = self.support_weights();
        if gens.is_empty() {
            return Err(Error::OriginPoint);
        }
        Cone::new(self.dim_t, gens)
    }

    /// Same as [`Self::support_cone`] but the origin gives the zero cone.
    pub(crate) fn support_cone_or_zero(&self) -> Cone {
        Cone::new(self.dim_t, self.support_weights()).expect("weights validated at construction")
    }

    /// Basis of the annihilator of the support weights, primitive integer
    /// vectors. Empty iff the stabiliser is finite.
    pub fn stabilizer_algebra(&self) -> Vec<QVec> {
        let a = Matrix::from_rows(self.support_weights(), self.dim_t).expect("dims validated");
        kernel_basis(&a)
            .into_iter()
            .map(|v| v.primitive_direction().expect("kernel basis vectors are nonzero"))
            .collect()
    }

    /// Limit of `t ↦ Σ t^⟨m_i, v⟩ b_i` as `t → 0`.
    ///
    /// Exists iff `⟨m_i, v⟩ ≥ 0` on the support; the limit keeps the
    /// coefficients with `⟨m_i, v⟩ = 0` and drops the rest. Only the sign
    /// pattern of `v` matters, so rational input is accepted as is.
    pub fn one_ps_limit(&self, v: &QVec) -> Result<Option<DeformationModel>> {
        check_dim(self.dim_t, v.dim())?;
        let mut coefficients = self.coefficients.clone();
        for i in self.support().0 {
            match self.weights[i].dot(v).signum() {
                -1 => return Ok(None),
                1 => coefficients[i] = CRat::default(),
                _ => {}
            }
        }
        Ok(Some(DeformationModel {
            coefficients,
            ..self.clone()
        }))
    }

    /// The complexified orbit is closed iff the support cone is a linear
    /// subspace. The origin is a fixed point.
    pub fn is_orbit_closed(&self) -> bool {
        let cone = self.support_cone_or_zero();
        cone.generators()
            .iter()
            .all(|m| cone.contains(&m.neg()).expect("same dimension"))
    }

    /// Canonical generators of the dual of the support cone: every
    /// one-parameter subgroup whose limit exists is a nonnegative
    /// combination of these.
    pub fn destabilizer_candidates(&self) -> Result<Vec<QVec>> {
        Ok(self.support_cone()?.dual().generators().to_vec())
    }

    /// For a ray of the support cone, the limit point whose support is exactly
    /// the weights on that ray, reached along a relative interior point of the
    /// dual face `σ^∨ ∩ ray^⊥`.
    pub fn ray_witness(&self, ray: &QVec) -> Result<DeformationModel> {
        Ok(self.ray_witness_with_direction(ray)?.0)
    }

    /// [`Self::ray_witness`] together with the one-parameter subgroup used.
    pub fn ray_witness_with_direction(&self, ray: &QVec) -> Result<(DeformationModel, QVec)> {
        check_dim(self.dim_t, ray.dim())?;
        let sigma = self.support_cone()?;
        let rays = sigma.rays()?;
        let ray = ray.primitive_direction()?;
        if !rays.contains(&ray) {
            return Err(Error::Precondition(alloc::format!("{ray} is not a ray of the support cone")));
        }
        let face = ConeFace::new(sigma.dual(), alloc::vec![ray])?;
        let v = face.relative_interior_point().point;
        let limit = self
            .one_ps_limit(&v)?
            .expect("v lies in the dual cone, so the limit exists");
        Ok((limit, v))
    }

    /// An integer `v` with `⟨m_i, v⟩ > 0` on the whole support, i.e. a
    /// one-parameter subgroup sending the point to the origin, if any.
    pub fn zero_in_orbit_closure(&self) -> Option<QVec> {
        let sigma = self.support_cone().ok()?;
        let dual = sigma.dual();
        let mut v = QVec::zeros(self.dim_t);
        for g in dual.generators() {
            v = v.add(g);
        }
        let all_positive = sigma.generators().iter().all(|m| m.dot(&v).is_positive());
        all_positive.then_some(v)
    }

    /// Quotient by the stabiliser: a gram-orthogonal complement of the
    /// stabiliser algebra and the support weights in its coordinates.
    pub fn quotient(&self) -> QuotientTorus {
        let gram = self.gram();
        let stab = self.stabilizer_algebra();
        let constraints: Vec<QVec> = stab.iter().map(|s| gram.mul_vec(s).expect("dims")).collect();
        let a = Matrix::from_rows(constraints, self.dim_t).expect("dims");
        let complement: Vec<QVec> = kernel_basis(&a)
            .into_iter()
            .map(|w| w.primitive_direction().expect("nonzero"))
            .collect();
        let reduced_weights = self
            .support_weights()
            .iter()
            .map(|m| complement.iter().map(|w| m.dot(w)).collect())
            .collect();
        QuotientTorus { complement, reduced_weights }
    }

    /// Extreme rays of the dual cone in the quotient torus, lifted back to
    /// the gram-orthogonal complement of the stabiliser. These are the
    /// directions on which the Futaki invariant must be strictly positive.
    pub fn quotient_rays(&self) -> Result<Vec<QVec>> {
        if self.support().is_empty() {
            return Err(Error::OriginPoint);
        }
        let q = self.quotient();
        let reduced = Cone::new(q.rank(), q.reduced_weights.clone())?;
        let mut out = Vec::new();
        for r in reduced.dual().rays()? {
            out.push(q.lift(&r)?);
        }
        out.sort();
        Ok(out)
    }
}
