//! The finite stability test: Futaki invariants on the stabiliser must
//! vanish and on each extreme ray of the dual support cone must be
//! positive. Verdicts at single parameter values, sweeps over an interval,
//! and exact location of the walls where a ray invariant changes sign.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{check_dim, Error, Result};
use crate::exact::{lin_solve, Matrix, QVec, Rat};
use crate::moment::{MomentMapModel, ZeroCertificate};
use crate::poly::{Poly, Root};
use crate::toric::{AffineFn, PolytopePencil};
use crate::torus::{DeformationModel, Support};

/// Source of Futaki invariants `Fut_ε(v)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FutakiOracle {
    /// Computed on a polygon pencil; `hamiltonians[k]` is the affine function
    /// of the `k`-th basis vector of the torus.
    Toric { pencil: PolytopePencil, hamiltonians: Vec<AffineFn> },
    /// Given outright as polynomials in `ε`; a lookup of `s·v` for a listed
    /// `v` returns `s·Fut(v)`.
    Tabulated { dim_t: usize, entries: Vec<(QVec, Poly)> },
}

impl FutakiOracle {
    pub fn toric(pencil: PolytopePencil, hamiltonians: Vec<AffineFn>) -> Result<FutakiOracle> {
        check_dim(2, hamiltonians.len())?;
        Ok(FutakiOracle::Toric { pencil, hamiltonians })
    }

    pub fn tabulated(dim_t: usize, entries: Vec<(QVec, Poly)>) -> Result<FutakiOracle> {
        for (v, _) in &entries {
            check_dim(dim_t, v.dim())?;
            if v.is_zero() {
                return Err(Error::ZeroVector);
            }
        }
        Ok(FutakiOracle::Tabulated { dim_t, entries })
    }

    pub fn dim_t(&self) -> usize {
        match self {
            FutakiOracle::Toric { hamiltonians, .. } => hamiltonians.len(),
            FutakiOracle::Tabulated { dim_t, .. } => *dim_t,
        }
    }

    fn hamiltonian(hamiltonians: &[AffineFn], v: &QVec) -> AffineFn {
        AffineFn::combination(v.iter(), hamiltonians)
    }

    fn lookup(entries: &[(QVec, Poly)], v: &QVec) -> Result<Poly> {
        if v.is_zero() {
            return Ok(Poly::zero());
        }
        for (key, value) in entries {
            let k = key.iter().position(|x| !x.is_zero()).expect("keys are nonzero");
            let s = &v[k] / &key[k];
            if !s.is_zero() && key.scale(&s) == *v {
                return Ok(value.scale(&s));
            }
        }
        Err(Error::OracleGap(v.clone()))
    }

    /// Fails unless the oracle can be evaluated at `eps`.
    pub fn check_eps(&self, eps: &Rat) -> Result<()> {
        match self {
            FutakiOracle::Toric { pencil, .. } => pencil.realize(eps).map(|_| ()),
            FutakiOracle::Tabulated { .. } => Ok(()),
        }
    }

    pub fn futaki(&self, v: &QVec, eps: &Rat) -> Result<Rat> {
        check_dim(self.dim_t(), v.dim())?;
        match self {
            FutakiOracle::Toric { pencil, hamiltonians } => {
                Ok(pencil.realize(eps)?.futaki(&Self::hamiltonian(hamiltonians, v)))
            }
            FutakiOracle::Tabulated { entries, .. } => Ok(Self::lookup(entries, v)?.eval(eps)),
        }
    }

    /// A polynomial with the sign of `Fut_ε(v)` for every `ε` in `[lo, hi]`.
    pub fn numerator(&self, v: &QVec, lo: &Rat, hi: &Rat) -> Result<Poly> {
        check_dim(self.dim_t(), v.dim())?;
        match self {
            FutakiOracle::Toric { pencil, hamiltonians } => {
                pencil.futaki_pencil_numerator(&Self::hamiltonian(hamiltonians, v), lo, hi)
            }
            FutakiOracle::Tabulated { entries, .. } => Self::lookup(entries, v),
        }
    }

    /// `μ*(0)` at `eps`, from `⟨μ*(0), v⟩ = −Fut(v)`. Toric oracles know
    /// every direction; tabulated ones are solved on the evaluated vectors,
    /// giving `None` if their values are not consistent with a covector.
    fn base_value(&self, eps: &Rat, evaluated: &[(QVec, Rat)]) -> Result<Option<QVec>> {
        let n = self.dim_t();
        match self {
            FutakiOracle::Toric { .. } => (0..n)
                .map(|k| self.futaki(&QVec::unit(n, k), eps).map(|f| -f))
                .collect::<Result<QVec>>()
                .map(Some),
            FutakiOracle::Tabulated { .. } => {
                if evaluated.is_empty() {
                    return Ok(Some(QVec::zeros(n)));
                }
                let a = Matrix::from_rows(evaluated.iter().map(|(v, _)| v.clone()).collect(), n)?;
                let y: QVec = evaluated.iter().map(|(_, f)| -f).collect();
                lin_solve(&a, &y)
            }
        }
    }
}

#[allow(non_camel_case_types)]
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Status {
    Polystable_cscK,
    StrictlySemistable,
    Unstable,
    ClosedOrbit_FutakiOnly,
}

impl Status {
    pub const ALL: [Status; 4] = [
        Status::Polystable_cscK,
        Status::StrictlySemistable,
        Status::Unstable,
        Status::ClosedOrbit_FutakiOnly,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Polystable_cscK => "Polystable_cscK",
            Status::StrictlySemistable => "StrictlySemistable",
            Status::Unstable => "Unstable",
            Status::ClosedOrbit_FutakiOnly => "ClosedOrbit_FutakiOnly",
        }
    }

    pub fn parse(s: &str) -> Option<Status> {
        Status::ALL.into_iter().find(|st| st.as_str() == s)
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    /// Basis vector of the stabiliser algebra; Futaki must vanish.
    Stabilizer,
    /// Extreme ray of the dual support cone; Futaki must be positive.
    Ray,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Stabilizer => "stabilizer",
            Role::Ray => "ray",
        }
    }

    fn prefix(self) -> &'static str {
        match self {
            Role::Stabilizer => "stab",
            Role::Ray => "ray",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub v: QVec,
    pub role: Role,
    pub fut: Rat,
    /// Strict failure of the condition for this role.
    pub violates: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityVerdict {
    pub eps: Rat,
    pub status: Status,
    /// Every vector evaluated: stabiliser basis first, then rays.
    pub witnesses: Vec<Witness>,
    /// `μ*(0)` as reconstructed from the oracle, when determined.
    pub base_value: Option<QVec>,
    pub zero_certificate: Option<ZeroCertificate>,
}

impl StabilityVerdict {
    pub fn violations(&self) -> impl Iterator<Item = &Witness> {
        self.witnesses.iter().filter(|w| w.violates)
    }
}

/// The vectors the test evaluates, with their roles, in report order.
pub fn test_vectors(m: &DeformationModel) -> Result<Vec<(Role, QVec)>> {
    let mut out: Vec<(Role, QVec)> = m.stabilizer_algebra().into_iter().map(|v| (Role::Stabilizer, v)).collect();
    if !m.is_orbit_closed() {
        out.extend(m.quotient_rays()?.into_iter().map(|v| (Role::Ray, v)));
    }
    Ok(out)
}

/// Column names `stab_<k>` and `ray_<k>` matching [`test_vectors`].
pub fn test_vector_names(vectors: &[(Role, QVec)]) -> Vec<String> {
    let mut counts = [0usize; 2];
    vectors
        .iter()
        .map(|(role, _)| {
            let c = &mut counts[*role as usize];
            let name = format!("{}_{}", role.prefix(), c);
            *c += 1;
            name
        })
        .collect()
}

pub fn verdict(m: &DeformationModel, oracle: &FutakiOracle, eps: &Rat) -> Result<StabilityVerdict> {
    check_dim(m.dim_t(), oracle.dim_t())?;
    oracle.check_eps(eps)?;
    let closed = m.is_orbit_closed();
    let mut witnesses = Vec::new();
    for (role, v) in test_vectors(m)? {
        let fut = oracle.futaki(&v, eps)?;
        let violates = match role {
            Role::Stabilizer => !fut.is_zero(),
            Role::Ray => fut.is_negative(),
        };
        witnesses.push(Witness { v, role, fut, violates });
    }
    let stab_ok = witnesses.iter().filter(|w| w.role == Role::Stabilizer).all(|w| !w.violates);
    let rays = || witnesses.iter().filter(|w| w.role == Role::Ray);
    let status = if closed {
        if stab_ok {
            Status::ClosedOrbit_FutakiOnly
        } else {
            Status::Unstable
        }
    } else if !stab_ok || rays().any(|w| w.violates) {
        Status::Unstable
    } else if rays().any(|w| w.fut.is_zero()) {
        Status::StrictlySemistable
    } else {
        Status::Polystable_cscK
    };

    let evaluated: Vec<(QVec, Rat)> = witnesses.iter().map(|w| (w.v.clone(), w.fut.clone())).collect();
    let base_value = oracle.base_value(eps, &evaluated)?;
    let zero_certificate = match &base_value {
        Some(base) => {
            let mm = MomentMapModel::with_default_masses(base.clone(), m.clone())?;
            Some(mm.find_zero_in_orbit_closure()?)
        }
        None => None,
    };
    Ok(StabilityVerdict {
        eps: eps.clone(),
        status,
        witnesses,
        base_value,
        zero_certificate,
    })
}

/// Verdict for every model with the given support: the model with all
/// support coefficients equal to one stands for the family.
pub fn family_verdict(
    dim_t: usize,
    weights: Vec<QVec>,
    support: &Support,
    gram: Option<Matrix>,
    oracle: &FutakiOracle,
    eps: &Rat,
) -> Result<StabilityVerdict> {
    if support.is_empty() {
        return Err(Error::OriginPoint);
    }
    let m = DeformationModel::with_support(dim_t, weights, support, gram)?;
    verdict(&m, oracle, eps)
}

/// Sign-change locations shared by one or more tested invariants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wall {
    pub location: Root,
    pub tags: Vec<String>,
}

/// An invariant tracked across a sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    pub name: String,
    pub role: Role,
    pub v: QVec,
    pub numerator: Poly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepReport {
    pub lo: Rat,
    pub hi: Rat,
    pub grid: usize,
    pub series: Vec<Series>,
    pub points: Vec<StabilityVerdict>,
    /// Odd-order zeros inside the open interval.
    pub walls: Vec<Wall>,
    /// Even-order zeros inside the open interval: the sign is kept but the
    /// invariant vanishes there.
    pub touches: Vec<Wall>,
}

pub fn wall_tolerance() -> Rat {
    Rat::frac(1, 1_000_000)
}

/// `grid + 1` equally spaced points from `lo` to `hi`.
pub fn sweep_grid(lo: &Rat, hi: &Rat, grid: usize) -> Result<Vec<Rat>> {
    if lo >= hi {
        return Err(Error::InvalidInput(format!("empty interval [{lo}, {hi}]")));
    }
    if grid == 0 {
        return Err(Error::InvalidInput("grid must be positive".into()));
    }
    let step = (hi - lo) / Rat::int(grid as i64);
    Ok((0..=grid).map(|k| lo + &(&step * &Rat::int(k as i64))).collect())
}

pub fn sweep_series(m: &DeformationModel, oracle: &FutakiOracle, lo: &Rat, hi: &Rat) -> Result<Vec<Series>> {
    let vectors = test_vectors(m)?;
    let names = test_vector_names(&vectors);
    vectors
        .into_iter()
        .zip(names)
        .map(|((role, v), name)| {
            let numerator = oracle.numerator(&v, lo, hi)?;
            Ok(Series { name, role, v, numerator })
        })
        .collect()
}

fn same_root(a: &Root, pa: &Poly, b: &Root, pb: &Poly, tol: &Rat) -> bool {
    match (a, b) {
        (Root::Exact(x), Root::Exact(y)) => x == y,
        (Root::Bracket { lo: l1, hi: h1 }, Root::Bracket { lo: l2, hi: h2 }) => {
            let lo = l1.max(l2);
            let hi = h1.min(h2);
            if lo > hi {
                return false;
            }
            let g = pa.gcd(pb);
            let roots = g.sign_changes(lo, hi, tol);
            !(roots.crossings.is_empty() && roots.touches.is_empty())
        }
        _ => false,
    }
}

fn merge_roots(mut found: Vec<(Root, usize)>, series: &[Series], tol: &Rat) -> Vec<Wall> {
    found.sort_by(|(a, i), (b, j)| a.approx().cmp(&b.approx()).then(i.cmp(j)));
    let mut walls: Vec<(Wall, usize)> = Vec::new();
    for (root, i) in found {
        if let Some((wall, rep)) = walls.last_mut() {
            if same_root(&wall.location, &series[*rep].numerator, &root, &series[i].numerator, tol) {
                if !wall.tags.contains(&series[i].name) {
                    wall.tags.push(series[i].name.clone());
                }
                continue;
            }
        }
        walls.push((
            Wall {
                location: root,
                tags: alloc::vec![series[i].name.clone()],
            },
            i,
        ));
    }
    walls.into_iter().map(|(w, _)| w).collect()
}

/// Walls and touches of the given series strictly inside `(lo, hi)`.
pub fn locate_walls(series: &[Series], lo: &Rat, hi: &Rat) -> (Vec<Wall>, Vec<Wall>) {
    let tol = wall_tolerance();
    let interior = |r: &Root| !matches!(r, Root::Exact(x) if x == lo || x == hi);
    let mut crossings = Vec::new();
    let mut touches = Vec::new();
    for (i, s) in series.iter().enumerate() {
        let changes = s.numerator.sign_changes(lo, hi, &tol);
        crossings.extend(changes.crossings.into_iter().filter(|r| interior(r)).map(|r| (r, i)));
        touches.extend(changes.touches.into_iter().filter(|r| interior(r)).map(|r| (r, i)));
    }
    (merge_roots(crossings, series, &tol), merge_roots(touches, series, &tol))
}

impl SweepReport {
    /// Combines verdicts computed elsewhere (for instance in parallel) with
    /// the wall analysis of `series`.
    pub fn assemble(lo: Rat, hi: Rat, grid: usize, series: Vec<Series>, points: Vec<StabilityVerdict>) -> SweepReport {
        let (walls, touches) = locate_walls(&series, &lo, &hi);
        SweepReport { lo, hi, grid, series, points, walls, touches }
    }
}

pub fn sweep(m: &DeformationModel, oracle: &FutakiOracle, lo: &Rat, hi: &Rat, grid: usize) -> Result<SweepReport> {
    let eps = sweep_grid(lo, hi, grid)?;
    let series = sweep_series(m, oracle, lo, hi)?;
    let points = eps.iter().map(|e| verdict(m, oracle, e)).collect::<Result<Vec<_>>>()?;
    Ok(SweepReport::assemble(lo.clone(), hi.clone(), grid, series, points))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::CRat;
    use crate::presets::{cross_weights, p1p1_blowup4, p1p1_oracle, EXAMPLE_SUPPORT_INDEX};
    use alloc::vec;

    fn q(xs: &[i64]) -> QVec {
        QVec::from_ints(xs)
    }

    fn example_model(coeff: i64) -> DeformationModel {
        let mut c = vec![CRat::default(); 4];
        c[EXAMPLE_SUPPORT_INDEX] = CRat::real(Rat::int(coeff));
        DeformationModel::new(2, cross_weights(), c, None).unwrap()
    }

    fn oracle() -> FutakiOracle {
        p1p1_oracle(&Rat::frac(1, 4)).unwrap()
    }

    #[test]
    fn example_verdicts() {
        let m = example_model(1);
        let v = verdict(&m, &oracle(), &Rat::frac(-1, 10)).unwrap();
        assert_eq!(v.status, Status::Polystable_cscK);
        assert!(v.zero_certificate.as_ref().unwrap().in_open_orbit());
        assert_eq!(v.witnesses[0].v, q(&[1, 0]));
        assert_eq!(v.witnesses[0].fut, Rat::zero());

        let v = verdict(&m, &oracle(), &Rat::zero()).unwrap();
        assert_eq!(v.status, Status::StrictlySemistable);

        let v = verdict(&m, &oracle(), &Rat::frac(1, 10)).unwrap();
        assert_eq!(v.status, Status::Unstable);
        let bad: Vec<&Witness> = v.violations().collect();
        assert_eq!(bad.len(), 1);
        assert_eq!(bad[0].v, q(&[0, 1]));
        assert!(bad[0].fut.is_negative());
        assert!(!v.zero_certificate.unwrap().feasible);
    }

    #[test]
    fn closed_orbits() {
        let full = DeformationModel::new(2, cross_weights(), vec![CRat::real(Rat::one()); 4], None).unwrap();
        let v = verdict(&full, &oracle(), &Rat::frac(1, 10)).unwrap();
        assert_eq!(v.status, Status::ClosedOrbit_FutakiOnly);
        assert!(v.witnesses.is_empty());
        let origin = DeformationModel::new(2, cross_weights(), vec![CRat::default(); 4], None).unwrap();
        assert_eq!(verdict(&origin, &oracle(), &Rat::zero()).unwrap().status, Status::ClosedOrbit_FutakiOnly);
        assert_eq!(verdict(&origin, &oracle(), &Rat::frac(1, 10)).unwrap().status, Status::Unstable);
    }

    #[test]
    fn family_uniformity() {
        let sup = Support::new(vec![EXAMPLE_SUPPORT_INDEX]);
        let fam = family_verdict(2, cross_weights(), &sup, None, &oracle(), &Rat::frac(-1, 10)).unwrap();
        assert_eq!(fam.status, Status::Polystable_cscK);
        for c in [2, -3, 7] {
            let v = verdict(&example_model(c), &oracle(), &Rat::frac(-1, 10)).unwrap();
            assert_eq!(v.status, fam.status);
            assert_eq!(v.witnesses, fam.witnesses);
        }
        let all = Support::new(vec![0, 1, 2, 3]);
        let fam = family_verdict(2, cross_weights(), &all, None, &oracle(), &Rat::zero()).unwrap();
        assert_eq!(fam.status, Status::ClosedOrbit_FutakiOnly);
        let empty = FutakiOracle::tabulated(2, vec![]).unwrap();
        assert!(matches!(
            family_verdict(2, cross_weights(), &sup, None, &empty, &Rat::zero()),
            Err(Error::OracleGap(_))
        ));
    }

    #[test]
    fn example_sweep() {
        let r = sweep(&example_model(1), &oracle(), &Rat::frac(-1, 10), &Rat::frac(1, 10), 20).unwrap();
        assert_eq!(r.points.len(), 21);
        assert_eq!(r.walls.len(), 1);
        assert_eq!(r.walls[0].location, Root::Exact(Rat::zero()));
        assert_eq!(r.walls[0].tags, vec![String::from("ray_0")]);
        assert!(r.touches.is_empty());
        assert_eq!(r.series.iter().map(|s| s.name.as_str()).collect::<Vec<_>>(), ["stab_0", "ray_0"]);
    }

    #[test]
    fn static_pencil_has_no_walls() {
        let pencil = PolytopePencil::new(
            vec![q(&[1, 0]), q(&[-1, 0]), q(&[0, 1]), q(&[0, -1]), q(&[1, 1])],
            vec![Rat::zero(), Rat::int(2), Rat::zero(), Rat::int(2), Rat::frac(-1, 2)],
            vec![Rat::zero(); 5],
        )
        .unwrap();
        let o = FutakiOracle::toric(pencil, crate::presets::p1p1_hamiltonians().to_vec()).unwrap();
        let r = sweep(&example_model(1), &o, &Rat::int(-1), &Rat::one(), 10).unwrap();
        assert!(r.walls.is_empty());
    }

    #[test]
    fn tabulated_wall() {
        let m = DeformationModel::new(1, vec![q(&[1])], vec![CRat::real(Rat::one())], None).unwrap();
        let o = FutakiOracle::tabulated(1, vec![(q(&[1]), Poly::linear_root(&Rat::frac(1, 3)))]).unwrap();
        let r = sweep(&m, &o, &Rat::zero(), &Rat::one(), 10).unwrap();
        assert_eq!(r.walls.len(), 1);
        assert_eq!(r.walls[0].location, Root::Exact(Rat::frac(1, 3)));
        assert_eq!(r.points[0].status, Status::Unstable);
        assert_eq!(r.points[10].status, Status::Polystable_cscK);
        assert_eq!(verdict(&m, &o, &Rat::frac(1, 3)).unwrap().status, Status::StrictlySemistable);
    }

    #[test]
    fn tabulated_scaling_and_gaps() {
        let o = FutakiOracle::tabulated(2, vec![(q(&[1, 2]), Poly::constant(Rat::int(3)))]).unwrap();
        assert_eq!(o.futaki(&q(&[-2, -4]), &Rat::zero()).unwrap(), Rat::int(-6));
        assert!(matches!(o.futaki(&q(&[1, 0]), &Rat::zero()), Err(Error::OracleGap(_))));
    }

    #[test]
    fn pencil_instability_is_a_precondition_error() {
        let err = verdict(&example_model(1), &oracle(), &Rat::frac(-1, 4)).unwrap_err();
        assert!(err.is_precondition());
        let _ = p1p1_blowup4(&Rat::frac(1, 4)).unwrap();
    }
}
