//! Local normal form of the moment map on the closure of a complexified
//! orbit, `μ*(b') = μ*(0) + Σ ‖b'_i‖² m_i`, and the questions asked of it:
//! where its image lies, whether it reaches zero, and which limit point
//! realises a given target.

use alloc::vec::Vec;

use crate::cone::{ConeFace, Representation};
use crate::error::{check_dim, Error, Result};
use crate::exact::{QVec, Rat};
use crate::torus::DeformationModel;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentMapModel {
    base_value: QVec,
    model: DeformationModel,
    masses: Vec<Rat>,
}

/// Outcome of the search for a zero of the moment map in the orbit closure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroCertificate {
    pub feasible: bool,
    /// One nonnegative mass per support weight with `Σ s_i m_i = -μ*(0)`.
    pub masses_solution: Option<Vec<Rat>>,
    /// Set iff some mass is zero: the face of the support cone carrying the
    /// zero.
    pub boundary_face: Option<ConeFace>,
    /// A one-parameter subgroup degenerating the point onto that face.
    pub degeneration: Option<QVec>,
}

impl ZeroCertificate {
    pub fn in_open_orbit(&self) -> bool {
        self.feasible && self.boundary_face.is_none()
    }
}

/// A requested point of the image, in one of three forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Target {
    /// `μ*(0) + Σ t_i m_i`, one `t_i ≥ 0` per support weight.
    Coefficients(Vec<Rat>),
    /// An arbitrary point of the dual Lie algebra.
    Point(QVec),
    /// The image of the limit along this one-parameter subgroup.
    OneParam(QVec),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Realization {
    /// All support masses positive: a point of the orbit itself.
    OpenOrbit { masses: Vec<Rat> },
    /// Some mass zero: a limit point reached along `one_ps`.
    Limit { masses: Vec<Rat>, one_ps: QVec },
}

impl Realization {
    pub fn masses(&self) -> &[Rat] {
        match self {
            Realization::OpenOrbit { masses } | Realization::Limit { masses, .. } => masses,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TargetOutcome {
    pub target: Target,
    /// The image point aimed at; `None` for a one-parameter subgroup whose
    /// limit does not exist.
    pub point: Option<QVec>,
    /// Whether the target lies in `μ*(0) + σ_η`; only known for targets
    /// given by coefficients.
    pub in_sigma_eta: Option<bool>,
    pub realization: Option<Realization>,
}

impl TargetOutcome {
    pub fn reachable(&self) -> bool {
        self.realization.is_some()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContainmentReport {
    pub eta: Rat,
    pub outcomes: Vec<TargetOutcome>,
}

impl ContainmentReport {
    /// Every target of `μ*(0) + σ_η` was realised.
    pub fn sigma_eta_contained(&self) -> bool {
        self.outcomes
            .iter()
            .filter(|o| o.in_sigma_eta == Some(true))
            .all(TargetOutcome::reachable)
    }
}

impl MomentMapModel {
    /// `masses` holds one nonnegative value per support weight, in support
    /// order.
    pub fn new(base_value: QVec, model: DeformationModel, masses: Vec<Rat>) -> Result<MomentMapModel> {
        check_dim(model.dim_t(), base_value.dim())?;
        check_dim(model.support().len(), masses.len())?;
        if masses.iter().any(Rat::is_negative) {
            return Err(Error::InvalidInput("masses must be nonnegative".into()));
        }
        Ok(MomentMapModel { base_value, model, masses })
    }

    /// Masses `|b_i|²` read off the coefficients.
    pub fn with_default_masses(base_value: QVec, model: DeformationModel) -> Result<MomentMapModel> {
        let masses = model.default_masses();
        MomentMapModel::new(base_value, model, masses)
    }

    pub fn base_value(&self) -> &QVec {
        &self.base_value
    }

    pub fn model(&self) -> &DeformationModel {
        &self.model
    }

    pub fn masses(&self) -> &[Rat] {
        &self.masses
    }

    fn image_of(&self, masses: &[Rat]) -> QVec {
        let mut value = self.base_value.clone();
        for (s, m) in masses.iter().zip(self.model.support_weights()) {
            value.axpy(s, &m);
        }
        value
    }

    /// `μ*(0) + Σ s_i m_i`.
    pub fn moment_value(&self) -> QVec {
        self.image_of(&self.masses)
    }

    /// Natural pairing of the moment value with `v`. With a base value
    /// derived from Futaki invariants this is `-Fut(v)`.
    pub fn pairing(&self, v: &QVec) -> Result<Rat> {
        self.moment_value().try_dot(v)
    }

    /// Decides whether `-μ*(0)` lies in the support cone, i.e. whether some
    /// point of the orbit closure is a zero of the moment map, and returns
    /// explicit masses. When a solution with all masses positive exists it is
    /// the one returned.
    pub fn find_zero_in_orbit_closure(&self) -> Result<ZeroCertificate> {
        let sigma = self.model.support_cone_or_zero();
        match sigma.representation(&self.base_value.neg())? {
            None => Ok(ZeroCertificate {
                feasible: false,
                masses_solution: None,
                boundary_face: None,
                degeneration: None,
            }),
            Some(rep) => {
                let boundary = rep.coefficients.iter().any(Rat::is_zero);
                let degeneration = boundary.then(|| degeneration_direction(&rep, self.model.dim_t()));
                Ok(ZeroCertificate {
                    feasible: true,
                    masses_solution: Some(rep.coefficients),
                    boundary_face: boundary.then_some(rep.face),
                    degeneration,
                })
            }
        }
    }

    /// Exhibits masses realising each target, checking constructively that
    /// `μ*(0) + σ_η` sits inside the image of the orbit closure.
    pub fn check_image_containment(&self, eta: &Rat, targets: &[Target]) -> Result<ContainmentReport> {
        if !eta.is_positive() {
            return Err(Error::InvalidInput("eta must be positive".into()));
        }
        let outcomes = targets
            .iter()
            .map(|t| self.realize_target(eta, t))
            .collect::<Result<Vec<_>>>()?;
        Ok(ContainmentReport { eta: eta.clone(), outcomes })
    }

    fn realize_target(&self, eta: &Rat, target: &Target) -> Result<TargetOutcome> {
        match target {
            Target::OneParam(v) => {
                let Some(limit) = self.model.one_ps_limit(v)? else {
                    return Ok(TargetOutcome {
                        target: target.clone(),
                        point: None,
                        in_sigma_eta: None,
                        realization: None,
                    });
                };
                let kept = limit.support();
                let masses: Vec<Rat> = self
                    .model
                    .support()
                    .indices()
                    .iter()
                    .zip(&self.masses)
                    .map(|(i, s)| if kept.contains(*i) { s.clone() } else { Rat::zero() })
                    .collect();
                let point = self.image_of(&masses);
                let realization = if kept == self.model.support() {
                    Realization::OpenOrbit { masses }
                } else {
                    Realization::Limit { masses, one_ps: v.clone() }
                };
                Ok(TargetOutcome {
                    target: target.clone(),
                    point: Some(point),
                    in_sigma_eta: None,
                    realization: Some(realization),
                })
            }
            Target::Coefficients(ts) => {
                check_dim(self.masses.len(), ts.len())?;
                if ts.iter().any(Rat::is_negative) {
                    return Err(Error::InvalidInput("target coefficients must be nonnegative".into()));
                }
                let point = self.image_of(ts);
                let inside = ts.iter().all(|t| t < eta);
                let realization = self.realize_point(&point)?;
                Ok(TargetOutcome {
                    target: target.clone(),
                    point: Some(point),
                    in_sigma_eta: Some(inside),
                    realization,
                })
            }
            Target::Point(p) => {
                check_dim(self.model.dim_t(), p.dim())?;
                Ok(TargetOutcome {
                    target: target.clone(),
                    point: Some(p.clone()),
                    in_sigma_eta: None,
                    realization: self.realize_point(p)?,
                })
            }
        }
    }

    fn realize_point(&self, point: &QVec) -> Result<Option<Realization>> {
        let sigma = self.model.support_cone_or_zero();
        let offset = point.sub(&self.base_value);
        let Some(rep) = sigma.representation(&offset)? else {
            return Ok(None);
        };
        Ok(Some(if rep.coefficients.iter().all(Rat::is_positive) {
            Realization::OpenOrbit { masses: rep.coefficients }
        } else {
            let one_ps = degeneration_direction(&rep, self.model.dim_t());
            Realization::Limit { masses: rep.coefficients, one_ps }
        }))
    }

    /// The origin, `η/2` along each ray, `η/2` on every weight, a point
    /// outside `μ*(0) + σ` when the cone is pointed, and each destabilising
    /// one-parameter subgroup.
    pub fn default_targets(&self, eta: &Rat) -> Result<Vec<Target>> {
        let n = self.masses.len();
        let half = eta / &Rat::int(2);
        let mut targets = alloc::vec![Target::Coefficients(alloc::vec![Rat::zero(); n])];
        let weights = self.model.support_weights();
        if let Ok(sigma) = self.model.support_cone() {
            if let Ok(rays) = sigma.rays() {
                for r in rays {
                    if let Some(i) = weights.iter().position(|m| m.is_positive_multiple_of(&r)) {
                        let mut ts = alloc::vec![Rat::zero(); n];
                        ts[i] = half.clone();
                        targets.push(Target::Coefficients(ts));
                    }
                }
                let mut outside = self.base_value.clone();
                for m in &weights {
                    outside = outside.sub(m);
                }
                targets.push(Target::Point(outside));
            }
            targets.push(Target::Coefficients(alloc::vec![half.clone(); n]));
            for v in self.model.destabilizer_candidates()? {
                targets.push(Target::OneParam(v));
            }
        }
        Ok(targets)
    }
}

/// Relative interior point of the dual face `σ^∨ ∩ F^⊥`; its limit keeps
/// exactly the weights of `F`.
fn degeneration_direction(rep: &Representation, dim: usize) -> QVec {
    let mut v = QVec::zeros(dim);
    for n in &rep.face.support_normals {
        v = v.add(n);
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::CRat;
    use alloc::vec;

    fn q(xs: &[i64]) -> QVec {
        QVec::from_ints(xs)
    }

    fn quad_model() -> DeformationModel {
        DeformationModel::new(
            2,
            vec![q(&[1, 0]), q(&[0, 1])],
            vec![CRat::real(Rat::one()), CRat::real(Rat::one())],
            None,
        )
        .unwrap()
    }

    fn mm(base: &[i64], masses: &[i64]) -> MomentMapModel {
        MomentMapModel::new(q(base), quad_model(), masses.iter().map(|&m| Rat::int(m)).collect()).unwrap()
    }

    #[test]
    fn moment_value_examples() {
        assert_eq!(mm(&[3, -1], &[0, 0]).moment_value(), q(&[3, -1]));
        assert_eq!(mm(&[0, 0], &[1, 2]).moment_value(), q(&[1, 2]));
        assert_eq!(mm(&[-1, -2], &[1, 2]).moment_value(), q(&[0, 0]));
    }

    #[test]
    fn zero_finding_examples() {
        let z = mm(&[-1, -2], &[1, 1]).find_zero_in_orbit_closure().unwrap();
        assert!(z.feasible && z.in_open_orbit());
        assert_eq!(z.masses_solution, Some(vec![Rat::one(), Rat::int(2)]));

        let z = mm(&[1, 0], &[1, 1]).find_zero_in_orbit_closure().unwrap();
        assert!(!z.feasible);
        assert!(z.masses_solution.is_none());

        let z = mm(&[0, -1], &[1, 1]).find_zero_in_orbit_closure().unwrap();
        assert!(z.feasible && !z.in_open_orbit());
        assert_eq!(z.masses_solution, Some(vec![Rat::zero(), Rat::one()]));
        let face = z.boundary_face.unwrap();
        assert_eq!(face.as_cone().generators(), &[q(&[0, 1])]);
        let v = z.degeneration.unwrap();
        let limit = quad_model().one_ps_limit(&v).unwrap().unwrap();
        assert_eq!(limit.support().indices(), &[1]);
    }

    #[test]
    fn pairing_examples() {
        assert_eq!(mm(&[0, 0], &[0, 0]).pairing(&q(&[4, 5])).unwrap(), Rat::zero());
        assert_eq!(mm(&[0, 0], &[1, 2]).pairing(&q(&[0, 1])).unwrap(), Rat::int(2));
        assert_eq!(mm(&[0, 0], &[1, 2]).pairing(&q(&[1, -1])).unwrap(), Rat::int(-1));
    }

    #[test]
    fn containment_examples() {
        let m = mm(&[5, 5], &[1, 1]);
        let eta = Rat::one();
        let targets = vec![
            Target::Coefficients(vec![Rat::zero(), Rat::zero()]),
            Target::Coefficients(vec![Rat::frac(1, 2), Rat::zero()]),
            Target::Coefficients(vec![Rat::frac(1, 3), Rat::frac(1, 4)]),
            Target::Point(q(&[4, 5])),
            Target::OneParam(q(&[1, 0])),
            Target::OneParam(q(&[-1, 0])),
        ];
        let report = m.check_image_containment(&eta, &targets).unwrap();
        let o = &report.outcomes;
        match o[0].realization.as_ref().unwrap() {
            Realization::Limit { masses, one_ps } => {
                assert!(masses.iter().all(Rat::is_zero));
                assert!(quad_model().one_ps_limit(one_ps).unwrap().unwrap().support().is_empty());
            }
            other => panic!("{other:?}"),
        }
        match o[1].realization.as_ref().unwrap() {
            Realization::Limit { masses, one_ps } => {
                assert_eq!(masses, &vec![Rat::frac(1, 2), Rat::zero()]);
                assert_eq!(one_ps, &q(&[0, 1]));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(o[2].realization, Some(Realization::OpenOrbit { .. })));
        assert!(!o[3].reachable());
        assert_eq!(o[4].point, Some(q(&[5, 6])));
        assert!(o[5].point.is_none());
        assert!(report.sigma_eta_contained());
    }

    #[test]
    fn rejects_inconsistent_masses() {
        assert!(MomentMapModel::new(q(&[0, 0]), quad_model(), vec![Rat::one()]).is_err());
        assert!(MomentMapModel::new(q(&[0, 0]), quad_model(), vec![Rat::one(), Rat::int(-1)]).is_err());
        assert!(MomentMapModel::new(q(&[0]), quad_model(), vec![Rat::one(), Rat::one()]).is_err());
    }
}
