//! Rational polyhedral cones given by generators.
//!
//! Membership is decided by Carathéodory enumeration: a vector lies in the
//! cone iff it is a nonnegative combination of some linearly independent
//! subset of the generators, and for such a subset the combination is unique.
//! Duals are computed by Fourier–Motzkin elimination on generator lists, with
//! the intermediate cones reduced to their canonical generators after every
//! step. Both are exact and fine for the tiny cones met here.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{check_dim, Error, Result};
use crate::exact::{Matrix, QVec, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    dim: usize,
    generators: Vec<QVec>,
}

/// Lineality space plus the extreme rays of the pointed part.
///
/// `lineality` is a basis of `c ∩ -c` taken from the reduced row echelon
/// form (each row made primitive); `rays` are primitive generators of the
/// pointed cone `c ∩ lineality^⊥` (standard dot product), sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Canonical {
    pub lineality: Vec<QVec>,
    pub rays: Vec<QVec>,
}

impl Canonical {
    /// `±lineality` and `rays`, sorted lexicographically.
    pub fn generators(&self) -> Vec<QVec> {
        let mut out: Vec<QVec> = self
            .lineality
            .iter()
            .flat_map(|l| [l.clone(), l.neg()])
            .chain(self.rays.iter().cloned())
            .collect();
        out.sort();
        out
    }
}

/// Face of a cone cut out by supporting hyperplanes `⟨·, n⟩ = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeFace {
    pub cone: Cone,
    pub support_normals: Vec<QVec>,
}

/// Result of [`ConeFace::relative_interior_point`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InteriorPoint {
    pub point: QVec,
    /// The returned point is the zero vector: the face is `{0}` or a linear
    /// subspace, so no nonzero canonical point exists.
    pub degenerate: bool,
}

/// A vector written as a combination of the cone generators with positive
/// coefficients exactly on the generators of its minimal face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    pub coefficients: Vec<Rat>,
    pub face: ConeFace,
}

impl Cone {
    /// Generators must be nonzero integer vectors of dimension `dim`. An empty
    /// list is the zero cone.
    pub fn new(dim: usize, generators: Vec<QVec>) -> Result<Cone> {
        if dim == 0 {
            return Err(Error::InvalidInput("cone dimension must be positive".into()));
        }
        for g in &generators {
            check_dim(dim, g.dim())?;
            if g.is_zero() {
                return Err(Error::ZeroVector);
            }
            if !g.is_integral() {
                return Err(Error::NotIntegral);
            }
        }
        Ok(Cone { dim, generators })
    }

    /// Rational generators are replaced by the primitive integer vector on
    /// their ray; zero vectors are dropped.
    pub fn from_rational(dim: usize, generators: &[QVec]) -> Result<Cone> {
        let mut gens = Vec::new();
        for g in generators {
            check_dim(dim, g.dim())?;
            if !g.is_zero() {
                gens.push(g.primitive_direction()?);
            }
        }
        Cone::new(dim, gens)
    }

    pub fn from_ints(dim: usize, generators: &[&[i64]]) -> Result<Cone> {
        Cone::new(dim, generators.iter().map(|g| QVec::from_ints(g)).collect())
    }

    pub fn zero(dim: usize) -> Cone {
        Cone { dim, generators: Vec::new() }
    }

    pub fn whole_space(dim: usize) -> Cone {
        let generators = (0..dim)
            .flat_map(|i| {
                let e = QVec::unit(dim, i);
                [e.neg(), e]
            })
            .collect();
        Cone { dim, generators }
    }

    pub fn dim_ambient(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[QVec] {
        &self.generators
    }

    fn generator_matrix(&self) -> Matrix {
        Matrix::from_rows(self.generators.clone(), self.dim).expect("generators have cone dimension")
    }

    /// Dimension of the linear span.
    pub fn cone_dim(&self) -> usize {
        self.generator_matrix().rank()
    }

    pub fn contains(&self, x: &QVec) -> Result<bool> {
        Ok(self.nonnegative_combination(x)?.is_some())
    }

    /// Nonnegative coefficients, one per generator, with `Σ λ_i g_i = x`.
    pub fn nonnegative_combination(&self, x: &QVec) -> Result<Option<Vec<Rat>>> {
        check_dim(self.dim, x.dim())?;
        if x.is_zero() {
            return Ok(Some(vec![Rat::zero(); self.generators.len()]));
        }
        Ok(phase_one(&self.generators, x))
    }

    /// True iff the cone contains no line. Checked generator by generator:
    /// a line exists iff some generator's negative lies in the cone.
    pub fn is_strongly_convex(&self) -> bool {
        self.generators
            .iter()
            .all(|g| !self.contains(&g.neg()).expect("dimension checked at construction"))
    }

    /// Basis of `c ∩ -c` and the extreme rays of the pointed part.
    pub fn canonical(&self) -> Canonical {
        let mut dirs: Vec<QVec> = Vec::new();
        for g in &self.generators {
            let p = g.primitive_direction().expect("generators are nonzero");
            if !dirs.contains(&p) {
                dirs.push(p);
            }
        }
        let (in_lineality, pointed): (Vec<QVec>, Vec<QVec>) = dirs
            .into_iter()
            .partition(|g| self.contains(&g.neg()).expect("same dimension"));

        let lineality: Vec<QVec> = if in_lineality.is_empty() {
            Vec::new()
        } else {
            let (red, pivots) = Matrix::from_rows(in_lineality, self.dim).expect("dims").rref();
            (0..pivots.len())
                .map(|i| red.row(i).primitive_direction().expect("nonzero rref row"))
                .collect()
        };

        let mut projected: Vec<QVec> = Vec::new();
        for g in pointed {
            let p = project_out(&g, &lineality)
                .primitive_direction()
                .expect("generator outside the lineality space");
            if !projected.contains(&p) {
                projected.push(p);
            }
        }
        let mut rays: Vec<QVec> = projected
            .iter()
            .enumerate()
            .filter(|&(i, r)| {
                let others: Vec<QVec> = projected
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, o)| o.clone())
                    .collect();
                !Cone { dim: self.dim, generators: others }
                    .contains(r)
                    .expect("same dimension")
            })
            .map(|(_, r)| r.clone())
            .collect();
        rays.sort();
        Canonical { lineality, rays }
    }

    /// The cone on its canonical generators.
    pub fn canonicalized(&self) -> Cone {
        Cone {
            dim: self.dim,
            generators: self.canonical().generators(),
        }
    }

    pub fn lineality_basis(&self) -> Vec<QVec> {
        self.canonical().lineality
    }

    /// Primitive generators of the one-dimensional faces. Requires a strongly
    /// convex cone.
    pub fn rays(&self) -> Result<Vec<QVec>> {
        let canon = self.canonical();
        if !canon.lineality.is_empty() {
            return Err(Error::Precondition("rays of a cone that contains a line".into()));
        }
        Ok(canon.rays)
    }

    /// `{v : ⟨m, v⟩ ≥ 0 for all m in the cone}`, on canonical generators.
    pub fn dual(&self) -> Cone {
        let mut current = Cone::whole_space(self.dim);
        for g in &self.generators {
            let mut next: Vec<QVec> = Vec::new();
            let mut positive = Vec::new();
            let mut negative = Vec::new();
            for r in &current.generators {
                let s = g.dot(r);
                match s.signum() {
                    1 => {
                        positive.push((r, s));
                        next.push(r.clone());
                    }
                    0 => next.push(r.clone()),
                    _ => negative.push((r, s)),
                }
            }
            for (p, sp) in &positive {
                for (n, sn) in &negative {
                    let mut combo = n.scale(sp);
                    combo.axpy(&-sn, p);
                    if !combo.is_zero() {
                        next.push(combo.primitive_direction().expect("nonzero"));
                    }
                }
            }
            current = Cone { dim: self.dim, generators: next }.canonicalized();
        }
        if self.generators.is_empty() {
            current = current.canonicalized();
        }
        current
    }

    /// Same set of points (checked through mutual generator membership).
    pub fn set_eq(&self, other: &Cone) -> bool {
        self.dim == other.dim
            && self.generators.iter().all(|g| other.contains(g).unwrap_or(false))
            && other.generators.iter().all(|g| self.contains(g).unwrap_or(false))
    }

    /// Positive combination of the generators of the minimal face containing
    /// `x`, or `None` when `x` is not in the cone.
    ///
    /// Writes `x = Σ λ_i g_i` with `λ_i > 0` exactly for the generators of
    /// the minimal face `F` and reports `F` through the dual generators that
    /// vanish on `x`. The positive solution is built from `c = Σ_F g_i`:
    /// `x - t·c` stays in `F` for `0 < t < t_max` because `x` lies in the
    /// relative interior of `F`.
    pub fn representation(&self, x: &QVec) -> Result<Option<Representation>> {
        if !self.contains(x)? {
            return Ok(None);
        }
        let dual_gens = self.dual().generators;
        let (vanishing, positive): (Vec<QVec>, Vec<QVec>) =
            dual_gens.into_iter().partition(|v| x.dot(v).is_zero());
        let in_face: Vec<bool> = self
            .generators
            .iter()
            .map(|g| vanishing.iter().all(|v| g.dot(v).is_zero()))
            .collect();
        let mut c = QVec::zeros(self.dim);
        for (g, _) in self.generators.iter().zip(&in_face).filter(|(_, &f)| f) {
            c = c.add(g);
        }
        let t_max = positive
            .iter()
            .filter_map(|v| {
                let cv = c.dot(v);
                cv.is_positive().then(|| x.dot(v) / cv)
            })
            .min();
        let t = match t_max {
            Some(t) => t / Rat::int(2),
            None => Rat::one(),
        };
        let face_gens: Vec<QVec> = self
            .generators
            .iter()
            .zip(&in_face)
            .filter(|(_, &f)| f)
            .map(|(g, _)| g.clone())
            .collect();
        let face_cone = Cone { dim: self.dim, generators: face_gens };
        let shifted = x.sub(&c.scale(&t));
        let inner = face_cone
            .nonnegative_combination(&shifted)?
            .ok_or_else(|| Error::Precondition(String::from("relative interior shift left the face")))?;
        let mut inner = inner.into_iter();
        let coefficients: Vec<Rat> = in_face
            .iter()
            .map(|&f| if f { inner.next().expect("one per face generator") + &t } else { Rat::zero() })
            .collect();
        Ok(Some(Representation {
            coefficients,
            face: ConeFace {
                cone: self.clone(),
                support_normals: vanishing,
            },
        }))
    }
}

/// Phase one of the simplex method with Bland's rule: a basic solution of
/// `Σ λ_j g_j = x`, `λ ≥ 0`, or `None` if there is none.
fn phase_one(generators: &[QVec], x: &QVec) -> Option<Vec<Rat>> {
    let n = generators.len();
    let m = x.dim();
    let width = n + m + 1;
    let mut t: Vec<Vec<Rat>> = (0..m)
        .map(|i| {
            let flip = x[i].is_negative();
            let sign = |v: &Rat| if flip { -v } else { v.clone() };
            let mut row: Vec<Rat> = generators.iter().map(|g| sign(&g[i])).collect();
            row.extend((0..m).map(|k| if k == i { Rat::one() } else { Rat::zero() }));
            row.push(sign(&x[i]));
            row
        })
        .collect();
    let mut basis: Vec<usize> = (n..n + m).collect();
    // Reduced costs of the artificial objective, last entry minus its value.
    let mut z: Vec<Rat> = (0..width)
        .map(|j| if (n..n + m).contains(&j) { Rat::zero() } else { -t.iter().map(|r| &r[j]).sum::<Rat>() })
        .collect();
    while let Some(enter) = (0..n + m).find(|&j| z[j].is_negative()) {
        let leave = (0..m)
            .filter(|&i| t[i][enter].is_positive())
            .map(|i| (&t[i][width - 1] / &t[i][enter], basis[i], i))
            .min_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)))
            .map(|(_, _, i)| i)?;
        let p = t[leave][enter].clone();
        for v in t[leave].iter_mut() {
            *v = &*v / &p;
        }
        let pivot_row = t[leave].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != leave && !row[enter].is_zero() {
                let f = row[enter].clone();
                for (v, q) in row.iter_mut().zip(&pivot_row) {
                    *v -= &(&f * q);
                }
            }
        }
        let f = z[enter].clone();
        for (v, q) in z.iter_mut().zip(&pivot_row) {
            *v -= &(&f * q);
        }
        basis[leave] = enter;
    }
    if !z[width - 1].is_zero() {
        return None;
    }
    let mut out = vec![Rat::zero(); n];
    for (i, &b) in basis.iter().enumerate() {
        if b < n {
            out[b] = t[i][width - 1].clone();
        }
    }
    Some(out)
}

/// Component of `g` orthogonal (standard dot product) to the span of `basis`.
fn project_out(g: &QVec, basis: &[QVec]) -> QVec {
    if basis.is_empty() {
        return g.clone();
    }
    let b = Matrix::from_rows(basis.to_vec(), g.dim()).expect("dims");
    let bg = b.mul_vec(g).expect("dims");
    let gram = b.mul(&b.transpose()).expect("dims");
    let z = gram
        .particular_solution(&bg)
        .expect("dims")
        .expect("gram matrix of a basis is invertible");
    let along = b.transpose().mul_vec(&z).expect("dims");
    g.sub(&along)
}

impl ConeFace {
    /// Each normal must be nonnegative on the cone so that its hyperplane
    /// supports it.
    pub fn new(cone: Cone, support_normals: Vec<QVec>) -> Result<ConeFace> {
        for n in &support_normals {
            check_dim(cone.dim, n.dim())?;
            if cone.generators.iter().any(|g| g.dot(n).is_negative()) {
                return Err(Error::InvalidInput(alloc::format!(
                    "{n} does not define a supporting hyperplane"
                )));
            }
        }
        Ok(ConeFace { cone, support_normals })
    }

    /// The face as a cone: generators of the parent killed by every normal.
    pub fn as_cone(&self) -> Cone {
        let generators = self
            .cone
            .generators
            .iter()
            .filter(|g| self.support_normals.iter().all(|n| g.dot(n).is_zero()))
            .cloned()
            .collect();
        Cone { dim: self.cone.dim, generators }
    }

    /// Sum of the canonical generators of the face. It lies on no proper
    /// subface; opposite lineality generators cancel.
    pub fn relative_interior_point(&self) -> InteriorPoint {
        let face = self.as_cone();
        let mut point = QVec::zeros(face.dim);
        for g in face.canonical().generators() {
            point = point.add(&g);
        }
        let degenerate = point.is_zero();
        InteriorPoint { point, degenerate }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(xs: &[i64]) -> QVec {
        QVec::from_ints(xs)
    }

    fn cone(gens: &[&[i64]]) -> Cone {
        Cone::from_ints(gens[0].len(), gens).unwrap()
    }

    #[test]
    fn dual_examples() {
        assert_eq!(cone(&[&[1, 0], &[0, 1]]).dual().generators(), &[q(&[0, 1]), q(&[1, 0])]);
        assert_eq!(
            Cone::from_ints(2, &[&[0, 1]]).unwrap().dual().generators(),
            &[q(&[-1, 0]), q(&[0, 1]), q(&[1, 0])]
        );
        assert_eq!(
            cone(&[&[1, 0], &[1, 1], &[0, 1]]).dual().generators(),
            &[q(&[0, 1]), q(&[1, 0])]
        );
    }

    #[test]
    fn dual_of_whole_space_is_zero() {
        let c = cone(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]]);
        assert!(c.dual().generators().is_empty());
        assert_eq!(Cone::zero(2).dual().generators().len(), 4);
    }

    #[test]
    fn contains_examples() {
        let quad = cone(&[&[1, 0], &[0, 1]]);
        assert!(quad.contains(&q(&[1, 2])).unwrap());
        assert!(!quad.contains(&q(&[-1, 0])).unwrap());
        let c = cone(&[&[2, 1], &[1, 2]]);
        assert!(c.contains(&q(&[1, 1])).unwrap());
        let coeffs = c.nonnegative_combination(&q(&[1, 1])).unwrap().unwrap();
        assert_eq!(coeffs, vec![Rat::frac(1, 3), Rat::frac(1, 3)]);
        assert!(matches!(quad.contains(&q(&[1])), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn strong_convexity_examples() {
        assert!(cone(&[&[1, 0], &[0, 1]]).is_strongly_convex());
        assert!(!cone(&[&[1, 0], &[-1, 0]]).is_strongly_convex());
        assert!(!cone(&[&[1, 0], &[-1, 1], &[0, -1]]).is_strongly_convex());
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(Cone::from_ints(2, &[&[0, 1]]).unwrap().cone_dim(), 1);
        assert_eq!(cone(&[&[1, 0], &[0, 1]]).cone_dim(), 2);
        assert_eq!(cone(&[&[1, 1], &[2, 2]]).cone_dim(), 1);
    }

    #[test]
    fn rays_examples() {
        assert_eq!(cone(&[&[1, 0], &[1, 1], &[0, 1]]).rays().unwrap(), vec![q(&[0, 1]), q(&[1, 0])]);
        assert_eq!(cone(&[&[1, 0], &[0, 1]]).rays().unwrap(), vec![q(&[0, 1]), q(&[1, 0])]);
        assert_eq!(Cone::from_ints(2, &[&[2, 0]]).unwrap().rays().unwrap(), vec![q(&[1, 0])]);
        assert!(matches!(
            cone(&[&[1, 0], &[-1, 0]]).rays(),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn relative_interior_examples() {
        let sigma_dual = cone(&[&[1, 0], &[0, 1]]);
        let facet = ConeFace::new(sigma_dual.clone(), vec![q(&[0, 1])]).unwrap();
        assert_eq!(facet.relative_interior_point(), InteriorPoint { point: q(&[1, 0]), degenerate: false });
        let whole = ConeFace::new(sigma_dual, vec![]).unwrap();
        assert_eq!(whole.relative_interior_point().point, q(&[1, 1]));
        let half_plane = cone(&[&[1, -1], &[-1, 1], &[1, 1]]);
        let cut = ConeFace::new(half_plane, vec![q(&[1, 1])]).unwrap();
        assert_eq!(cut.relative_interior_point(), InteriorPoint { point: q(&[0, 0]), degenerate: true });
    }

    #[test]
    fn face_requires_supporting_normal() {
        let c = cone(&[&[1, 0], &[0, 1]]);
        assert!(ConeFace::new(c, vec![q(&[1, -1])]).is_err());
    }

    #[test]
    fn rejects_bad_generators() {
        assert_eq!(Cone::from_ints(2, &[&[0, 0]]), Err(Error::ZeroVector));
        assert!(matches!(Cone::from_ints(2, &[&[1, 0, 0]]), Err(Error::DimensionMismatch { .. })));
        let half = QVec::new(vec![Rat::frac(1, 2), Rat::zero()]);
        assert_eq!(Cone::new(2, vec![half.clone()]), Err(Error::NotIntegral));
        assert_eq!(Cone::from_rational(2, &[half]).unwrap().generators(), &[q(&[1, 0])]);
    }

    #[test]
    fn representation_boundary_and_interior() {
        let quad = cone(&[&[1, 0], &[0, 1]]);
        let r = quad.representation(&q(&[0, 1])).unwrap().unwrap();
        assert_eq!(r.coefficients, vec![Rat::zero(), Rat::one()]);
        assert_eq!(r.face.as_cone().generators(), &[q(&[0, 1])]);
        let r = quad.representation(&q(&[1, 2])).unwrap().unwrap();
        assert_eq!(r.coefficients, vec![Rat::one(), Rat::int(2)]);
        assert!(r.face.support_normals.is_empty());
        // redundant generator: interior point gets all three positive
        let c = cone(&[&[1, 0], &[1, 1], &[0, 1]]);
        let r = c.representation(&q(&[1, 1])).unwrap().unwrap();
        assert!(r.coefficients.iter().all(Rat::is_positive));
        assert!(quad.representation(&q(&[-1, 0])).unwrap().is_none());
    }
}
