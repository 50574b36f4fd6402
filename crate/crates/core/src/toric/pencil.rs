use alloc::vec::Vec;

use super::polygon::{angle_cmp, cross, lattice_ratio};
use super::{AffineFn, Polygon};
use crate::error::{check_dim, Error, Result};
use crate::exact::{QVec, Rat};
use crate::poly::Poly;

/// The family `P_ε = {x : ⟨n_k, x⟩ + c_k + ε d_k ≥ 0}` of planar polygons.
///
/// Facets are stored sorted by the angle of their edge direction
/// `(n_y, −n_x)`, which is the counterclockwise order of the edges of every
/// member with the same combinatorial type as `P_0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolytopePencil {
    normals: Vec<QVec>,
    c: Vec<Rat>,
    d: Vec<Rat>,
    /// Position of each stored facet in the input order.
    order: Vec<usize>,
}

fn tangent(n: &QVec) -> QVec {
    QVec::new(alloc::vec![n[1].clone(), -n[0].clone()])
}

/// Intersection of `⟨n1, x⟩ = r1` and `⟨n2, x⟩ = r2`.
fn meet(n1: &QVec, r1: &Rat, n2: &QVec, r2: &Rat) -> QVec {
    let det = cross(n1, n2);
    let x = &(r1 * &n2[1]) - &(r2 * &n1[1]);
    let y = &(&n1[0] * r2) - &(&n2[0] * r1);
    QVec::new(alloc::vec![x / det.clone(), y / det])
}

impl PolytopePencil {
    /// Requires primitive integer normals whose edge directions turn by
    /// strictly less than a half-turn between neighbours (so every member is
    /// bounded) and a full-dimensional `P_0` on which every inequality cuts
    /// out an edge.
    pub fn new(normals: Vec<QVec>, c: Vec<Rat>, d: Vec<Rat>) -> Result<PolytopePencil> {
        let n = normals.len();
        check_dim(n, c.len())?;
        check_dim(n, d.len())?;
        if n < 3 {
            return Err(Error::InvalidInput("a pencil needs at least three facets".into()));
        }
        for v in &normals {
            check_dim(2, v.dim())?;
            if &crate::exact::primitive(v)? != v {
                return Err(Error::InvalidInput(alloc::format!("normal {v} is not primitive")));
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| angle_cmp(&tangent(&normals[i]), &tangent(&normals[j])));
        for k in 0..n {
            let (i, j) = (order[k], order[(k + 1) % n]);
            if !cross(&tangent(&normals[i]), &tangent(&normals[j])).is_positive() {
                return Err(Error::InvalidInput(alloc::format!(
                    "normals {} and {} leave the polygons unbounded or repeat a direction",
                    normals[i],
                    normals[j]
                )));
            }
        }
        let pencil = PolytopePencil {
            normals: order.iter().map(|&i| normals[i].clone()).collect(),
            c: order.iter().map(|&i| c[i].clone()).collect(),
            d: order.iter().map(|&i| d[i].clone()).collect(),
            order,
        };
        pencil.realize(&Rat::zero())?;
        Ok(pencil)
    }

    pub fn len(&self) -> usize {
        self.normals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.normals.is_empty()
    }

    /// Normals and offsets in the order they were given.
    pub fn normals(&self) -> Vec<QVec> {
        self.in_input_order(&self.normals)
    }

    pub fn offsets_c(&self) -> Vec<Rat> {
        self.in_input_order(&self.c)
    }

    pub fn offsets_d(&self) -> Vec<Rat> {
        self.in_input_order(&self.d)
    }

    fn in_input_order<T: Clone>(&self, xs: &[T]) -> Vec<T> {
        let mut out: Vec<Option<T>> = alloc::vec![None; xs.len()];
        for (k, &i) in self.order.iter().enumerate() {
            out[i] = Some(xs[k].clone());
        }
        out.into_iter().map(|x| x.expect("order is a permutation")).collect()
    }

    fn rhs(&self, k: usize, eps: &Rat) -> Rat {
        -(&self.c[k] + &(eps * &self.d[k]))
    }

    /// Vertices `V_k = line_{k−1} ∩ line_k`, in edge order.
    fn vertices(&self, eps: &Rat) -> Vec<QVec> {
        let n = self.len();
        (0..n)
            .map(|k| {
                let p = (k + n - 1) % n;
                meet(&self.normals[p], &self.rhs(p, eps), &self.normals[k], &self.rhs(k, eps))
            })
            .collect()
    }

    /// Lattice lengths of the edges at `eps`, allowing nonpositive values.
    pub fn edge_lengths(&self, eps: &Rat) -> Vec<Rat> {
        let vs = self.vertices(eps);
        let n = self.len();
        (0..n)
            .map(|k| lattice_ratio(&vs[(k + 1) % n].sub(&vs[k]), &tangent(&self.normals[k])))
            .collect()
    }

    /// The polygon `P_eps`, provided every facet still cuts out an edge of
    /// positive length.
    pub fn realize(&self, eps: &Rat) -> Result<Polygon> {
        if let Some(k) = self.edge_lengths(eps).iter().position(|l| !l.is_positive()) {
            return Err(Error::Precondition(alloc::format!(
                "combinatorial type changed at eps = {eps}: facet {} does not cut out an edge",
                self.normals[k]
            )));
        }
        Polygon::with_normals(self.vertices(eps), self.normals.clone())
    }

    /// Edge lengths are affine in `ε`, so positivity at both ends of the
    /// closed interval decides positivity throughout.
    pub fn is_combinatorially_stable(&self, lo: &Rat, hi: &Rat) -> bool {
        if lo > hi {
            return false;
        }
        [lo, hi]
            .iter()
            .all(|e| self.edge_lengths(e).iter().all(Rat::is_positive))
    }

    /// The values of `ε` at which some edge length vanishes, increasing.
    pub fn breakpoints(&self) -> Vec<Rat> {
        let at0 = self.edge_lengths(&Rat::zero());
        let at1 = self.edge_lengths(&Rat::one());
        let mut out: Vec<Rat> = at0
            .iter()
            .zip(&at1)
            .filter_map(|(a, b)| {
                let slope = b - a;
                (!slope.is_zero()).then(|| -(a / &slope))
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// `N(ε) = |P_ε| ∫_∂P_ε f dσ − |∂P_ε| ∫_P_ε f dμ` (with the global sign),
    /// a polynomial of degree at most 4 with the sign of the Futaki invariant
    /// throughout `[lo, hi]`.
    pub fn futaki_pencil_numerator(&self, f: &AffineFn, lo: &Rat, hi: &Rat) -> Result<Poly> {
        if lo >= hi {
            return Err(Error::InvalidInput(alloc::format!("empty interval [{lo}, {hi}]")));
        }
        if !self.is_combinatorially_stable(lo, hi) {
            return Err(Error::Precondition(alloc::format!(
                "pencil is not combinatorially stable on [{lo}, {hi}]"
            )));
        }
        let step = (hi - lo) / Rat::int(4);
        let points = (0..5)
            .map(|i| {
                let eps = lo + &(&step * &Rat::int(i));
                let value = self.realize(&eps)?.futaki_numerator(f);
                Ok((eps, value))
            })
            .collect::<Result<Vec<_>>>()?;
        Poly::interpolate(&points)
    }
}
