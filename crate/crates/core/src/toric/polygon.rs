use alloc::vec::Vec;
use core::cmp::Ordering;

use super::{AffineFn, FUTAKI_SIGN};
use crate::error::{Error, Result};
use crate::exact::{Matrix, QVec, Rat};

/// A convex lattice-rational polygon, vertices counterclockwise.
///
/// Edge `k` runs from vertex `k` to vertex `k + 1` and carries the primitive
/// integer inward normal `normals[k]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polygon {
    vertices: Vec<QVec>,
    normals: Vec<QVec>,
}

pub(super) fn cross(u: &QVec, v: &QVec) -> Rat {
    &(&u[0] * &v[1]) - &(&u[1] * &v[0])
}

/// Orders directions by angle in `[0, 2π)` measured from `(1, 0)`.
pub(super) fn angle_cmp(u: &QVec, v: &QVec) -> Ordering {
    let half = |w: &QVec| {
        if w[1].is_positive() || (w[1].is_zero() && w[0].is_positive()) {
            0
        } else {
            1
        }
    };
    half(u)
        .cmp(&half(v))
        .then_with(|| Rat::zero().cmp(&cross(u, v)))
}

/// Lattice length of `edge` along the primitive integer direction `dir`.
pub(super) fn lattice_ratio(edge: &QVec, dir: &QVec) -> Rat {
    if dir[0].is_zero() {
        &edge[1] / &dir[1]
    } else {
        &edge[0] / &dir[0]
    }
}

impl Polygon {
    /// Validates a strictly convex counterclockwise vertex cycle without
    /// repeated or collinear vertices.
    pub fn from_vertices(vertices: Vec<QVec>) -> Result<Polygon> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::InvalidInput("a polygon needs at least three vertices".into()));
        }
        if let Some(v) = vertices.iter().find(|v| v.dim() != 2) {
            return Err(Error::DimensionMismatch { expected: 2, found: v.dim() });
        }
        let edges: Vec<QVec> = (0..n).map(|k| vertices[(k + 1) % n].sub(&vertices[k])).collect();
        if edges.iter().any(QVec::is_zero) {
            return Err(Error::InvalidInput("repeated polygon vertex".into()));
        }
        for k in 0..n {
            if !cross(&edges[k], &edges[(k + 1) % n]).is_positive() {
                return Err(Error::InvalidInput("polygon is not strictly convex and counterclockwise".into()));
            }
        }
        let descents = (0..n)
            .filter(|&k| angle_cmp(&edges[k], &edges[(k + 1) % n]) != Ordering::Less)
            .count();
        if descents != 1 {
            return Err(Error::InvalidInput("polygon boundary winds more than once".into()));
        }
        let normals = edges
            .iter()
            .map(|e| QVec::new(alloc::vec![-e[1].clone(), e[0].clone()]).primitive_direction())
            .collect::<Result<Vec<_>>>()?;
        Ok(Polygon { vertices, normals })
    }

    /// Same as [`Self::from_vertices`] but checks the given normals against
    /// the edges; they must be primitive integer and inward.
    pub fn with_normals(vertices: Vec<QVec>, normals: Vec<QVec>) -> Result<Polygon> {
        let p = Polygon::from_vertices(vertices)?;
        if normals.len() != p.normals.len() {
            return Err(Error::DimensionMismatch { expected: p.normals.len(), found: normals.len() });
        }
        for (given, actual) in normals.iter().zip(&p.normals) {
            if !given.is_integral() {
                return Err(Error::NotIntegral);
            }
            if given != actual {
                return Err(Error::InvalidInput(alloc::format!(
                    "normal {given} is not the primitive inward normal {actual} of its edge"
                )));
            }
        }
        Ok(p)
    }

    pub fn vertices(&self) -> &[QVec] {
        &self.vertices
    }

    pub fn normals(&self) -> &[QVec] {
        &self.normals
    }

    fn edge(&self, k: usize) -> (&QVec, &QVec) {
        let n = self.vertices.len();
        (&self.vertices[k], &self.vertices[(k + 1) % n])
    }

    /// Primitive direction of edge `k`.
    fn tangent(&self, k: usize) -> QVec {
        let n = &self.normals[k];
        QVec::new(alloc::vec![n[1].clone(), -n[0].clone()])
    }

    /// Lattice length of edge `k`.
    pub fn edge_lattice_length(&self, k: usize) -> Rat {
        let (a, b) = self.edge(k);
        lattice_ratio(&b.sub(a), &self.tangent(k))
    }

    /// Image under `x ↦ A x + t` for an integer matrix of determinant ±1.
    pub fn map_affine(&self, a: &Matrix, t: &QVec) -> Result<Polygon> {
        if a.nrows() != 2 || a.ncols() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: a.nrows() });
        }
        let det = &(a.get(0, 0) * a.get(1, 1)) - &(a.get(0, 1) * a.get(1, 0));
        if !(det == 1 || det == -1) || a.rows().iter().any(|r| !r.is_integral()) {
            return Err(Error::InvalidInput("map is not unimodular".into()));
        }
        let mut vertices = self
            .vertices
            .iter()
            .map(|v| a.mul_vec(v).map(|w| w.add(t)))
            .collect::<Result<Vec<_>>>()?;
        if det.is_negative() {
            vertices.reverse();
        }
        Polygon::from_vertices(vertices)
    }

    pub fn area(&self) -> Rat {
        let n = self.vertices.len();
        let twice: Rat = (0..n).map(|k| cross(&self.vertices[k], &self.vertices[(k + 1) % n])).sum();
        twice / Rat::int(2)
    }

    /// `∫_P f dμ`, exactly, by a fan of triangles from vertex 0.
    pub fn integral_affine(&self, f: &AffineFn) -> Rat {
        let v0 = &self.vertices[0];
        let three = Rat::int(3);
        (1..self.vertices.len() - 1)
            .map(|k| {
                let (v1, v2) = (&self.vertices[k], &self.vertices[k + 1]);
                let area = cross(&v1.sub(v0), &v2.sub(v0)) / Rat::int(2);
                let centroid = v0.add(v1).add(v2).scale(&three.recip().expect("nonzero"));
                area * f.eval(&centroid)
            })
            .sum()
    }

    /// `∫_∂P f dσ` with the lattice boundary measure.
    pub fn boundary_integral_affine(&self, f: &AffineFn) -> Rat {
        let two = Rat::int(2);
        (0..self.vertices.len())
            .map(|k| {
                let (a, b) = self.edge(k);
                self.edge_lattice_length(k) * (f.eval(a) + f.eval(b)) / two.clone()
            })
            .sum()
    }

    pub fn lattice_perimeter(&self) -> Rat {
        (0..self.vertices.len()).map(|k| self.edge_lattice_length(k)).sum()
    }

    /// `|P| ∫_∂P f dσ − |∂P| ∫_P f dμ`: the invariant times the area.
    pub fn futaki_numerator(&self, f: &AffineFn) -> Rat {
        let l = &self.boundary_integral_affine(f) * &self.area() - &self.lattice_perimeter() * &self.integral_affine(f);
        l * Rat::int(FUTAKI_SIGN)
    }

    pub fn futaki(&self, f: &AffineFn) -> Rat {
        self.futaki_numerator(f) / self.area()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn poly(vs: &[[i64; 2]]) -> Polygon {
        Polygon::from_vertices(vs.iter().map(|v| QVec::from_ints(v)).collect()).unwrap()
    }

    fn square(s: i64) -> Polygon {
        poly(&[[0, 0], [s, 0], [s, s], [0, s]])
    }

    #[test]
    fn validation() {
        assert!(Polygon::from_vertices(vec![QVec::from_ints(&[0, 0]), QVec::from_ints(&[1, 0])]).is_err());
        assert!(Polygon::from_vertices(
            [[0, 0], [0, 1], [1, 1], [1, 0]].iter().map(|v| QVec::from_ints(v)).collect()
        )
        .is_err());
        assert!(Polygon::from_vertices(
            [[0, 0], [1, 0], [2, 0], [1, 1]].iter().map(|v| QVec::from_ints(v)).collect()
        )
        .is_err());
        let star: Vec<QVec> = [[0, 0], [2, 0], [0, 1], [1, -1], [2, 1]]
            .iter()
            .map(|v| QVec::from_ints(v))
            .collect();
        assert!(Polygon::from_vertices(star).is_err());
        let sq = square(2);
        assert_eq!(sq.normals()[0], QVec::from_ints(&[0, 1]));
        assert_eq!(sq.normals()[1], QVec::from_ints(&[-1, 0]));
        let bad = vec![QVec::from_ints(&[0, 2]), QVec::from_ints(&[-1, 0]), QVec::from_ints(&[0, -1]), QVec::from_ints(&[1, 0])];
        assert!(Polygon::with_normals(sq.vertices().to_vec(), bad).is_err());
    }

    #[test]
    fn interior_integrals() {
        assert_eq!(square(1).integral_affine(&AffineFn::from_ints(1, 0, 0)), Rat::frac(1, 2));
        assert_eq!(square(2).integral_affine(&AffineFn::from_ints(0, 0, 1)), Rat::int(4));
        assert_eq!(square(2).area(), Rat::int(4));
        assert_eq!(square(2).integral_affine(&AffineFn::from_ints(1, 0, -1)), Rat::zero());
    }

    #[test]
    fn boundary_integrals() {
        assert_eq!(square(2).boundary_integral_affine(&AffineFn::from_ints(0, 0, 1)), Rat::int(8));
        assert_eq!(square(2).lattice_perimeter(), Rat::int(8));
        assert_eq!(square(2).boundary_integral_affine(&AffineFn::from_ints(1, 0, -1)), Rat::zero());
        assert_eq!(square(1).boundary_integral_affine(&AffineFn::from_ints(0, 1, 0)), Rat::int(2));
        // The hypotenuse of the standard triangle has lattice length 1.
        assert_eq!(poly(&[[0, 0], [1, 0], [0, 1]]).lattice_perimeter(), Rat::int(3));
        assert_eq!(poly(&[[0, 0], [3, 0], [0, 3]]).edge_lattice_length(1), Rat::int(3));
    }

    #[test]
    fn futaki_basics() {
        let tri = poly(&[[0, 0], [1, 0], [0, 1]]);
        assert_eq!(tri.futaki(&AffineFn::from_ints(0, 0, 7)), Rat::zero());
        assert_eq!(tri.futaki(&AffineFn::from_ints(1, -1, 0)), Rat::zero());
        assert_eq!(square(2).futaki(&AffineFn::from_ints(1, 0, -1)), Rat::zero());
        // Barycentre of the boundary differs from the barycentre of the area.
        let trapezoid = poly(&[[0, 0], [2, 0], [1, 1], [0, 1]]);
        assert!(!trapezoid.futaki(&AffineFn::from_ints(1, 0, 0)).is_zero());
    }

    #[test]
    fn unimodular_image() {
        let p = poly(&[[0, 0], [2, 0], [1, 1], [0, 1]]);
        let a = Matrix::from_int_rows(&[&[1, 1], &[0, 1]]);
        let t = QVec::from_ints(&[3, -1]);
        let f = AffineFn::from_ints(2, -1, 5);
        let q = p.map_affine(&a, &t).unwrap();
        assert_eq!(q.area(), p.area());
        assert_eq!(q.lattice_perimeter(), p.lattice_perimeter());
        assert_eq!(q.futaki(&f), p.futaki(&f.pullback(&a, &t)));
        let flip = Matrix::from_int_rows(&[&[0, 1], &[1, 0]]);
        let r = p.map_affine(&flip, &t).unwrap();
        assert_eq!(r.futaki(&f), p.futaki(&f.pullback(&flip, &t)));
        assert!(p.map_affine(&Matrix::from_int_rows(&[&[2, 0], &[0, 1]]), &t).is_err());
    }
}
