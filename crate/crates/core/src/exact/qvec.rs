use alloc::vec::Vec;
use core::fmt;
use core::ops::Index;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::Rat;
use crate::error::{check_dim, Error, Result};

/// A vector of exact rationals, used both for elements of the torus Lie
/// algebra and for characters in its dual. The duality pairing is the plain
/// dot product.
///
/// Ordering is lexicographic in the entries, which is the canonical order
/// used whenever generator lists are reported.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct QVec(Vec<Rat>);

impl QVec {
    pub fn new(entries: Vec<Rat>) -> QVec {
        QVec(entries)
    }

    pub fn from_ints(entries: &[i64]) -> QVec {
        QVec(entries.iter().map(|&e| Rat::int(e)).collect())
    }

    pub fn zeros(dim: usize) -> QVec {
        QVec((0..dim).map(|_| Rat::zero()).collect())
    }

    pub fn unit(dim: usize, axis: usize) -> QVec {
        let mut v = QVec::zeros(dim);
        v.0[axis] = Rat::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Rat] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<Rat> {
        self.0
    }

    pub fn iter(&self) -> core::slice::Iter<'_, Rat> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Rat::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(Rat::is_integer)
    }

    /// Panics on a dimension mismatch; use [`QVec::try_dot`] for unchecked input.
    pub fn dot(&self, other: &QVec) -> Rat {
        assert_eq!(self.dim(), other.dim(), "dot product of vectors of different dimension");
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn try_dot(&self, other: &QVec) -> Result<Rat> {
        check_dim(self.dim(), other.dim())?;
        Ok(self.dot(other))
    }

    pub fn add(&self, other: &QVec) -> QVec {
        assert_eq!(self.dim(), other.dim());
        QVec(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &QVec) -> QVec {
        assert_eq!(self.dim(), other.dim());
        QVec(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: &Rat) -> QVec {
        QVec(self.0.iter().map(|a| a * s).collect())
    }

    /// `self += s * other`
    pub fn axpy(&mut self, s: &Rat, other: &QVec) {
        assert_eq!(self.dim(), other.dim());
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += &(s * b);
        }
    }

    pub fn neg(&self) -> QVec {
        QVec(self.0.iter().map(|a| -a).collect())
    }

    pub fn is_positive_multiple_of(&self, other: &QVec) -> bool {
        if self.dim() != other.dim() || self.is_zero() || other.is_zero() {
            return false;
        }
        let k = other.0.iter().position(|x| !x.is_zero()).expect("nonzero");
        let ratio = &self.0[k] / &other.0[k];
        ratio.is_positive() && other.scale(&ratio) == *self
    }

    /// The unique primitive integer vector on the ray through `self`.
    pub fn primitive_direction(&self) -> Result<QVec> {
        if self.is_zero() {
            return Err(Error::ZeroVector);
        }
        let lcm = self
            .0
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let scaled = QVec(self.0.iter().map(|x| x * &Rat::from_bigint(lcm.clone())).collect());
        primitive(&scaled)
    }
}

/// Divides an integer vector by the gcd of its entries.
pub fn primitive(v: &QVec) -> Result<QVec> {
    if !v.is_integral() {
        return Err(Error::NotIntegral);
    }
    let g = v
        .0
        .iter()
        .fold(BigInt::zero(), |acc, x| acc.gcd(x.numer()));
    if g.is_zero() {
        return Err(Error::ZeroVector);
    }
    let g = Rat::from_bigint(g);
    Ok(QVec(v.0.iter().map(|x| x / &g).collect()))
}

impl Index<usize> for QVec {
    type Output = Rat;
    fn index(&self, i: usize) -> &Rat {
        &self.0[i]
    }
}

impl From<Vec<Rat>> for QVec {
    fn from(v: Vec<Rat>) -> Self {
        QVec(v)
    }
}

impl FromIterator<Rat> for QVec {
    fn from_iter<I: IntoIterator<Item = Rat>>(iter: I) -> Self {
        QVec(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a QVec {
    type Item = &'a Rat;
    type IntoIter = core::slice::Iter<'a, Rat>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for QVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for QVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
