//! Built-in example: the square `[0, 2]²` with its four corners cut at
//! depth `δ`, two of which move with `ε`, acted on by the diagonal torus.

use alloc::vec::Vec;

use crate::error::Result;
use crate::exact::{QVec, Rat};
use crate::stability::FutakiOracle;
use crate::toric::{AffineFn, PolytopePencil};

pub const P1P1_BLOWUP4: &str = "p1p1-blowup4";

/// Names accepted by [`builtin_pencil`].
pub const BUILTIN_NAMES: &[&str] = &[P1P1_BLOWUP4];

pub fn default_delta() -> Rat {
    Rat::frac(1, 4)
}

/// Corner chops `x + y ≥ δ`, `(2 − x) + y ≥ δ`, `x + (2 − y) ≥ δ + ε` and
/// `(2 − x) + (2 − y) ≥ δ + ε` of the square `[0, 2]²`.
pub fn p1p1_blowup4(delta: &Rat) -> Result<PolytopePencil> {
    let two = Rat::int(2);
    let four = Rat::int(4);
    let normals = [[1, 0], [-1, 0], [0, 1], [0, -1], [1, 1], [-1, 1], [1, -1], [-1, -1]]
        .iter()
        .map(|n| QVec::from_ints(n))
        .collect();
    let c = alloc::vec![
        Rat::zero(),
        two.clone(),
        Rat::zero(),
        two.clone(),
        -delta.clone(),
        &two - delta,
        &two - delta,
        &four - delta,
    ];
    let mut d = alloc::vec![Rat::zero(); 6];
    d.extend([Rat::int(-1), Rat::int(-1)]);
    PolytopePencil::new(normals, c, d)
}

/// The characters `±e_1, ±e_2` of the two-torus on the deformation space.
pub fn cross_weights() -> Vec<QVec> {
    [[1, 0], [-1, 0], [0, 1], [0, -1]].iter().map(|m| QVec::from_ints(m)).collect()
}

/// Hamiltonians `x − 1` and `y − 1` of the two circle factors.
pub fn p1p1_hamiltonians() -> [AffineFn; 2] {
    [AffineFn::from_ints(1, 0, -1), AffineFn::from_ints(0, 1, -1)]
}

/// Index into [`cross_weights`] of the deformation used in the example.
pub const EXAMPLE_SUPPORT_INDEX: usize = 2;

pub fn builtin_pencil(name: &str, delta: Option<&Rat>) -> Option<Result<PolytopePencil>> {
    match name {
        P1P1_BLOWUP4 => Some(p1p1_blowup4(delta.unwrap_or(&default_delta()))),
        _ => None,
    }
}

pub fn p1p1_oracle(delta: &Rat) -> Result<FutakiOracle> {
    FutakiOracle::toric(p1p1_blowup4(delta)?, p1p1_hamiltonians().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_range() {
        assert!(p1p1_blowup4(&Rat::frac(1, 2)).is_ok());
        assert!(p1p1_blowup4(&Rat::zero()).is_err());
        assert!(p1p1_blowup4(&Rat::one()).is_err());
        assert!(builtin_pencil("p2", None).is_none());
    }
}
