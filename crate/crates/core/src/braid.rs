//! Pure braid group action on a ground space.
//!
//! A generator `(i, j)` drags hole `i` once counter-clockwise around hole `j`.
//! Holes between them are first moved out of the way with F-moves, the full
//! exchange of the now adjacent pair is applied, and the F-moves are undone.
//! The counter-clockwise hole braid acts by the inverse R-monodromy, which is
//! the unnormalized S entry of the two hole charges.

use std::collections::HashSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::boundary::GroundSpace;
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::wilson::{OperatorMatrix, Provenance};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BraidGenerator {
    pub i: usize,
    pub j: usize,
}

impl BraidGenerator {
    pub fn new(i: usize, j: usize) -> Result<Self> {
        if i == 0 || i >= j {
            return Err(Error::InvalidInput(format!("braid generator needs 1 <= i < j, got ({i},{j})")));
        }
        Ok(BraidGenerator { i, j })
    }
}

/// One letter of a braid word, as `{"pair":[2,3],"exp":1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BraidLetter {
    pub pair: (usize, usize),
    pub exp: i32,
}

pub fn braid_squared(space: &Arc<GroundSpace>, g: BraidGenerator) -> Result<OperatorMatrix> {
    let (i, j) = (g.i, g.j);
    space.check_hole(i)?;
    space.check_hole(j)?;
    let t = space.theory();
    let f = t.f();
    let diag: Vec<Cyclotomic> = space
        .basis()
        .iter()
        .map(|l| {
            let (a, b) = (l[i - 1], l[j - 1]);
            let mid = l[i..j - 1].iter().fold(t.vacuum(), |acc, x| acc.mul(x));
            let key = [a, mid, b, a.mul(&mid).mul(&b), a.mul(&mid), mid.mul(&b)];
            let reassociate = f.get(key);
            let exchange = t.monodromy(&a, &b).inv().expect("phase");
            &reassociate * &exchange / &reassociate
        })
        .collect();
    Ok(OperatorMatrix::new(
        space.clone(),
        Matrix::diagonal(&diag),
        Provenance::Braid { pair: (i, j), exp: 1 },
    ))
}

/// Product of the letters of `word`, the first letter acting first.
pub fn pure_braid_image(space: &Arc<GroundSpace>, word: &[BraidLetter]) -> Result<OperatorMatrix> {
    let mut acc = Matrix::identity(space.dim());
    for letter in word {
        let g = BraidGenerator::new(letter.pair.0, letter.pair.1)?;
        let m = braid_squared(space, g)?.matrix;
        let step = match letter.exp {
            1 => m,
            -1 => m.adjoint(),
            e => return Err(Error::InvalidInput(format!("braid exponent must be ±1, got {e}"))),
        };
        acc = &step * &acc;
    }
    Ok(OperatorMatrix::new(
        space.clone(),
        acc,
        Provenance::BraidWord {
            word: word.iter().map(|l| (l.pair, l.exp)).collect(),
        },
    ))
}

pub const DEFAULT_GROUP_BOUND: usize = 1_000_000;

/// Order of the group generated by all generators, modulo global phases.
pub fn group_order_generated(space: &Arc<GroundSpace>, bound: usize) -> Result<usize> {
    let n = space.holes();
    let mut gens = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            gens.push(braid_squared(space, BraidGenerator { i, j })?.matrix);
        }
    }
    let start = Matrix::identity(space.dim());
    let mut seen: HashSet<Matrix> = HashSet::from([start.clone()]);
    let mut frontier = vec![start];
    while let Some(x) = frontier.pop() {
        for g in &gens {
            let y = (g * &x).projective_normal_form();
            if !seen.contains(&y) {
                if seen.len() >= bound {
                    return Err(Error::ExceedsBound(format!("more than {bound} group elements")));
                }
                seen.insert(y.clone());
                frontier.push(y);
            }
        }
    }
    Ok(seen.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::qudit_registers;
    use crate::theory::build_theory;

    fn space(n: u32, names: &[&str]) -> Arc<GroundSpace> {
        let t = Arc::new(build_theory(n).unwrap());
        Arc::new(GroundSpace::from_names(&t, names).unwrap())
    }

    fn w(k: i64) -> Cyclotomic {
        Cyclotomic::root_of_unity(3, k)
    }

    #[test]
    fn two_qutrit_generator() {
        let gs = space(3, &["e", "e", "m", "m"]);
        let m = braid_squared(&gs, BraidGenerator::new(2, 3).unwrap()).unwrap().matrix;
        let want = [0, 0, 0, 0, 1, 2, 0, 2, 1].map(w);
        assert_eq!(m, Matrix::diagonal(&want));
        let regs = qudit_registers(&gs, &[(1, 2), (3, 4)]).unwrap();
        assert_eq!(regs.to_register_basis(&m), Matrix::diagonal(&want));
    }

    #[test]
    fn two_qubit_generator() {
        let gs = space(2, &["e", "e", "m", "m"]);
        let m = braid_squared(&gs, BraidGenerator::new(2, 3).unwrap()).unwrap().matrix;
        let c = Cyclotomic::from_integer;
        assert_eq!(m, Matrix::diagonal(&[c(1), c(1), c(1), c(-1)]));
    }

    #[test]
    fn word_products() {
        let gs = space(3, &["e", "e", "m", "m"]);
        let g = BraidLetter { pair: (2, 3), exp: 1 };
        let inv = BraidLetter { pair: (2, 3), exp: -1 };
        assert!(pure_braid_image(&gs, &[g, inv]).unwrap().matrix.is_identity());
        assert!(pure_braid_image(&gs, &[g, g, g]).unwrap().matrix.is_identity());
        assert!(!pure_braid_image(&gs, &[g, g]).unwrap().matrix.is_identity());
        assert!(pure_braid_image(&gs, &[BraidLetter { pair: (3, 2), exp: 1 }]).is_err());
    }

    #[test]
    fn group_orders() {
        assert_eq!(group_order_generated(&space(3, &["e", "e", "m", "m"]), DEFAULT_GROUP_BOUND).unwrap(), 3);
        assert_eq!(group_order_generated(&space(2, &["e", "e", "m", "m"]), DEFAULT_GROUP_BOUND).unwrap(), 2);
        assert_eq!(group_order_generated(&space(3, &["e", "m"]), DEFAULT_GROUP_BOUND).unwrap(), 1);
        assert!(matches!(
            group_order_generated(&space(3, &["e", "e", "m", "m"]), 2),
            Err(Error::ExceedsBound(_))
        ));
    }
}
