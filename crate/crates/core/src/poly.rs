//! Univariate polynomials over the rationals, just enough to interpolate
//! Futaki numerators in the polarisation parameter and to locate their sign
//! changes exactly.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::exact::Rat;

/// Coefficients in ascending order, without trailing zeros. The zero
/// polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Rat>,
}

/// A real root of a polynomial inside a queried interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Root {
    Exact(Rat),
    /// Irrational root strictly inside the open interval `(lo, hi)`.
    Bracket { lo: Rat, hi: Rat },
}

impl Root {
    /// A representative point: the root itself or the bracket midpoint.
    pub fn approx(&self) -> Rat {
        match self {
            Root::Exact(r) => r.clone(),
            Root::Bracket { lo, hi } => (lo + hi) / Rat::int(2),
        }
    }
}

/// Roots of a polynomial in a closed interval, split by whether the
/// polynomial changes sign across them.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SignChanges {
    /// Odd multiplicity: the sign flips.
    pub crossings: Vec<Root>,
    /// Even multiplicity: the polynomial touches zero and keeps its sign.
    pub touches: Vec<Root>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rat>) -> Poly {
        while coeffs.last().is_some_and(Rat::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rat) -> Poly {
        Poly::new(vec![c])
    }

    /// `x - r`
    pub fn linear_root(r: &Rat) -> Poly {
        Poly::new(vec![-r, Rat::one()])
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn leading(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.coeffs
            .iter()
            .rev()
            .fold(Rat::zero(), |acc, c| acc * x + c)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(
            (0..n)
                .map(|i| {
                    let a = self.coeffs.get(i).cloned().unwrap_or_default();
                    let b = other.coeffs.get(i).cloned().unwrap_or_default();
                    a + b
                })
                .collect(),
        )
    }

    pub fn scale(&self, s: &Rat) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(&Rat::int(-1)))
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        Poly::new(out)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * &Rat::int(i as i64))
                .collect(),
        )
    }

    /// Euclidean division; panics when dividing by the zero polynomial.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let lead = divisor.leading().expect("division by the zero polynomial");
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![Rat::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / lead;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &(&c * d);
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some(l) => self.scale(&l.recip().expect("nonzero leading coefficient")),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Exact Lagrange interpolation through points with distinct abscissae.
    pub fn interpolate(points: &[(Rat, Rat)]) -> Result<Poly> {
        for (i, (xi, _)) in points.iter().enumerate() {
            if points[..i].iter().any(|(xj, _)| xj == xi) {
                return Err(Error::InvalidInput("interpolation nodes must be distinct".into()));
            }
        }
        let mut acc = Poly::zero();
        for (i, (xi, yi)) in points.iter().enumerate() {
            let mut basis = Poly::constant(yi.clone());
            for (j, (xj, _)) in points.iter().enumerate() {
                if i != j {
                    let denom = (xi - xj).recip().expect("distinct nodes");
                    basis = basis.mul(&Poly::linear_root(xj)).scale(&denom);
                }
            }
            acc = acc.add(&basis);
        }
        Ok(acc)
    }

    /// Yun's square-free factorisation: returns `(f_1, f_2, ...)` with
    /// `self = c · Π f_k^k`, each `f_k` monic and square-free.
    pub fn squarefree_factors(&self) -> Vec<Poly> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let d = self.derivative();
        let a0 = self.gcd(&d);
        let mut b = self.div_rem(&a0).0;
        let c = d.div_rem(&a0).0;
        let mut dd = c.sub(&b.derivative());
        let mut factors = Vec::new();
        while b.degree().unwrap_or(0) > 0 {
            let f = b.gcd(&dd);
            let next_b = b.div_rem(&f).0;
            let next_c = dd.div_rem(&f).0;
            dd = next_c.sub(&next_b.derivative());
            b = next_b;
            factors.push(f);
        }
        factors
    }

    /// All distinct real roots in the closed interval `[lo, hi]`, classified by
    /// sign behaviour. Rational roots are reported exactly; irrational ones as
    /// open brackets no wider than `tolerance`.
    pub fn sign_changes(&self, lo: &Rat, hi: &Rat, tolerance: &Rat) -> SignChanges {
        let mut out = SignChanges::default();
        if self.is_zero() || lo > hi {
            return out;
        }
        let mut odd = Poly::constant(Rat::one());
        let mut even = Poly::constant(Rat::one());
        for (k, f) in self.squarefree_factors().iter().enumerate() {
            if k % 2 == 0 {
                odd = odd.mul(f);
            } else {
                even = even.mul(f);
            }
        }
        out.crossings = odd.squarefree_roots(lo, hi, tolerance);
        out.touches = even.squarefree_roots(lo, hi, tolerance);
        out
    }

    /// Roots of a square-free polynomial in `[lo, hi]`, sorted.
    fn squarefree_roots(&self, lo: &Rat, hi: &Rat, tolerance: &Rat) -> Vec<Root> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let sturm = Sturm::new(self);
        let bound = self.rational_root_denominator_bound();
        let mut roots = Vec::new();
        if self.eval(lo).is_zero() {
            roots.push(Root::Exact(lo.clone()));
        }
        let mut stack = vec![(lo.clone(), hi.clone())];
        let mut isolated = Vec::new();
        while let Some((a, b)) = stack.pop() {
            let n = sturm.count_open(&a, &b);
            if n == 0 {
                continue;
            }
            if n == 1 {
                isolated.push((a, b));
                continue;
            }
            let mid = (&a + &b) / Rat::int(2);
            if self.eval(&mid).is_zero() {
                roots.push(Root::Exact(mid.clone()));
            }
            stack.push((a, mid.clone()));
            stack.push((mid, b));
        }
        for (a, b) in isolated {
            roots.push(self.refine(&sturm, a, b, &bound, tolerance));
        }
        if lo < hi && self.eval(hi).is_zero() {
            roots.push(Root::Exact(hi.clone()));
        }
        roots.sort_by_key(Root::approx);
        roots
    }

    /// Narrows an interval holding exactly one root until the root is
    /// identified as rational or the bracket is below `tolerance`.
    ///
    /// A rational root `p/q` of a primitive integer polynomial has `q`
    /// dividing the leading coefficient `a`, so two such roots are at least
    /// `1/a²` apart. Once the bracket is that narrow the simplest rational in
    /// it is the only candidate.
    fn refine(&self, sturm: &Sturm, mut a: Rat, mut b: Rat, sep: &Rat, tolerance: &Rat) -> Root {
        loop {
            let candidate = Rat::simplest_between(&a, &b);
            if candidate > a && candidate < b && self.eval(&candidate).is_zero() {
                return Root::Exact(candidate);
            }
            let width = &b - &a;
            if &width < sep && &width <= tolerance {
                return Root::Bracket { lo: a, hi: b };
            }
            let mid = (&a + &b) / Rat::int(2);
            if self.eval(&mid).is_zero() {
                return Root::Exact(mid);
            }
            if sturm.count_open(&a, &mid) == 1 {
                b = mid;
            } else {
                a = mid;
            }
        }
    }

    /// `1/a²` where `a` is the leading coefficient of the primitive integer
    /// multiple of `self`.
    fn rational_root_denominator_bound(&self) -> Rat {
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&lcm / c.denom()))
            .collect();
        let g = ints.iter().fold(BigInt::from(0), |acc, c| acc.gcd(c));
        let lead = ints.last().expect("nonzero polynomial").abs() / g;
        Rat::new(1, &lead * &lead).expect("nonzero leading coefficient")
    }
}

struct Sturm {
    chain: Vec<Poly>,
}

impl Sturm {
    fn new(p: &Poly) -> Sturm {
        let mut chain = vec![p.clone(), p.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let r = chain[n - 2].div_rem(&chain[n - 1]).1;
            if r.is_zero() {
                break;
            }
            chain.push(r.scale(&Rat::int(-1)));
        }
        Sturm { chain }
    }

    /// Sign variations at `x`, zeros skipped. For a square-free chain this is
    /// right-continuous in `x`.
    fn variations(&self, x: &Rat) -> usize {
        let mut last = 0;
        let mut count = 0;
        for p in &self.chain {
            let s = p.eval(x).signum();
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }

    /// Number of distinct roots in the open interval `(a, b)`.
    fn count_open(&self, a: &Rat, b: &Rat) -> usize {
        let half_open = self.variations(a) - self.variations(b);
        half_open - usize::from(self.chain[0].eval(b).is_zero())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})·x")?,
                _ => write!(f, "({c})·x^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{self}]")
    }
}
