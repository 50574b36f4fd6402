//! Toric Futaki invariants of planar rational polygons.
//!
//! For a polygon `P` with lattice boundary measure `dσ` and an affine
//! function `f`, the invariant is taken to be
//! `L(f) = ∫_∂P f dσ − (|∂P| / |P|) ∫_P f dμ`, which kills constants and is
//! linear in `f`. A pencil of polygons `P_ε` moves its facets linearly in
//! `ε`, so all quantities are polynomials in `ε` on a combinatorially stable
//! interval.

mod pencil;
mod polygon;

use core::fmt;

use crate::exact::{Matrix, QVec, Rat};

pub use pencil::PolytopePencil;
pub use polygon::Polygon;

/// Global sign applied to `L(f)` when reporting Futaki invariants.
pub const FUTAKI_SIGN: i64 = 1;

/// `f(x, y) = a·x + b·y + c`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct AffineFn {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
}

impl AffineFn {
    pub fn new(a: Rat, b: Rat, c: Rat) -> AffineFn {
        AffineFn { a, b, c }
    }

    pub fn from_ints(a: i64, b: i64, c: i64) -> AffineFn {
        AffineFn::new(Rat::int(a), Rat::int(b), Rat::int(c))
    }

    pub fn constant(c: Rat) -> AffineFn {
        AffineFn::new(Rat::zero(), Rat::zero(), c)
    }

    pub fn eval(&self, p: &QVec) -> Rat {
        &(&(&self.a * &p[0]) + &(&self.b * &p[1])) + &self.c
    }

    pub fn add(&self, other: &AffineFn) -> AffineFn {
        AffineFn::new(&self.a + &other.a, &self.b + &other.b, &self.c + &other.c)
    }

    pub fn scale(&self, s: &Rat) -> AffineFn {
        AffineFn::new(&self.a * s, &self.b * s, &self.c * s)
    }

    /// `Σ s_k f_k`.
    pub fn combination<'a>(coeffs: impl IntoIterator<Item = &'a Rat>, fns: &[AffineFn]) -> AffineFn {
        coeffs
            .into_iter()
            .zip(fns)
            .fold(AffineFn::default(), |acc, (s, f)| acc.add(&f.scale(s)))
    }

    /// `x ↦ f(A x + t)`.
    pub fn pullback(&self, a: &Matrix, t: &QVec) -> AffineFn {
        let lin = QVec::new(vec_of(&self.a, &self.b));
        let at = a.transpose().mul_vec(&lin).expect("2x2 map");
        AffineFn::new(at[0].clone(), at[1].clone(), &lin.dot(t) + &self.c)
    }
}

fn vec_of(a: &Rat, b: &Rat) -> alloc::vec::Vec<Rat> {
    alloc::vec![a.clone(), b.clone()]
}

impl fmt::Display for AffineFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*x + {}*y + {}", self.a, self.b, self.c)
    }
}
