//! Tunneling and loop operators on a ground space.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::boundary::{GroundSpace, LagrangianAlgebra};
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::theory::AnyonLabel;

/// Where an operator came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Provenance {
    Tunnel { anyon: AnyonLabel, from: usize, to: usize },
    Loop { anyon: AnyonLabel, hole: usize },
    Braid { pair: (usize, usize), exp: i32 },
    BraidWord { word: Vec<((usize, usize), i32)> },
    Tcm { charge: u32, curve: String, complement: bool },
    Hamiltonian { anyon: AnyonLabel, curve: String },
    Gate { name: String },
    Product,
}

/// Square matrix over a ground-space basis.
#[derive(Clone, Debug)]
pub struct OperatorMatrix {
    pub space: Arc<GroundSpace>,
    pub matrix: Matrix,
    pub provenance: Provenance,
}

impl PartialEq for OperatorMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space && self.matrix == other.matrix
    }
}

impl OperatorMatrix {
    pub fn new(space: Arc<GroundSpace>, matrix: Matrix, provenance: Provenance) -> Self {
        assert_eq!(matrix.rows(), space.dim());
        assert_eq!(matrix.cols(), space.dim());
        OperatorMatrix {
            space,
            matrix,
            provenance,
        }
    }

    /// `self · other` as operators (apply `other` first).
    pub fn then(&self, other: &OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix::new(self.space.clone(), &other.matrix * &self.matrix, Provenance::Product)
    }

    pub fn compose(&self, other: &OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix::new(self.space.clone(), &self.matrix * &other.matrix, Provenance::Product)
    }

    pub fn adjoint(&self) -> OperatorMatrix {
        OperatorMatrix::new(self.space.clone(), self.matrix.adjoint(), self.provenance.clone())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "schema": crate::SCHEMA,
            "space": self.space.descriptor(),
            "provenance": self.provenance,
            "unitary": self.matrix.is_unitary(),
            "matrix": self.matrix,
        })
    }
}

/// Exact test `U†U = I`.
pub fn is_unitary(op: &OperatorMatrix) -> bool {
    op.matrix.is_unitary()
}

/// Moves `a` from hole `from` to hole `to`: `a_from ↦ a_from·ā`, `a_to ↦ a_to·a`.
pub fn tunnel(space: &Arc<GroundSpace>, a: AnyonLabel, from: usize, to: usize) -> Result<OperatorMatrix> {
    space.theory().check_label(&a)?;
    let (src, dst) = (space.boundary(from)?, space.boundary(to)?);
    if from == to {
        return Err(Error::InvalidInput("tunneling needs two distinct holes".into()));
    }
    if !dst.contains(&a) || !src.contains(&a.dual()) {
        return Err(Error::NotCondensable(format!(
            "{a} must condense on hole {to} ({}) and {} on hole {from} ({})",
            dst.name(),
            a.dual(),
            src.name()
        )));
    }
    let dim = space.dim();
    let mut m = Matrix::zeros(dim, dim);
    for (col, labeling) in space.basis().iter().enumerate() {
        let mut image = labeling.clone();
        image[from - 1] = image[from - 1].mul(&a.dual());
        image[to - 1] = image[to - 1].mul(&a);
        let row = space.position(&image).expect("tunneling preserves the vacuum constraint");
        m.set(row, col, Cyclotomic::one());
    }
    Ok(OperatorMatrix::new(space.clone(), m, Provenance::Tunnel { anyon: a, from, to }))
}

/// Counter-clockwise loop of `a` around `hole`; eigenvalue S_{a,b}/d_b on enclosed charge b.
pub fn wilson_loop(space: &Arc<GroundSpace>, a: AnyonLabel, hole: usize) -> Result<OperatorMatrix> {
    let t = space.theory();
    t.check_label(&a)?;
    space.check_hole(hole)?;
    let diag: Vec<Cyclotomic> = space
        .basis()
        .iter()
        .map(|l| {
            let b = &l[hole - 1];
            t.s(&a, b) / t.quantum_dimension(b)
        })
        .collect();
    Ok(OperatorMatrix::new(space.clone(), Matrix::diagonal(&diag), Provenance::Loop { anyon: a, hole }))
}

/// Boundary associativity data `M^{ab}_c`; unspecified entries read as 1.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MSymbolTable {
    entries: HashMap<(AnyonLabel, AnyonLabel, AnyonLabel), Cyclotomic>,
}

impl MSymbolTable {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn with(mut self, a: AnyonLabel, b: AnyonLabel, c: AnyonLabel, value: Cyclotomic) -> Self {
        self.entries.insert((a, b, c), value);
        self
    }

    pub fn get(&self, a: &AnyonLabel, b: &AnyonLabel, c: &AnyonLabel) -> Cyclotomic {
        self.entries.get(&(*a, *b, *c)).cloned().unwrap_or_else(Cyclotomic::one)
    }

    /// Checks that every nontrivial entry is a phase on anyons condensing on `boundary`.
    pub fn validate(&self, boundary: &LagrangianAlgebra) -> Result<()> {
        for ((a, b, c), v) in &self.entries {
            if !(boundary.contains(a) && boundary.contains(b) && boundary.contains(c)) || a.mul(b) != *c {
                return Err(Error::InvalidInput(format!("M symbol ({a},{b};{c}) is not a boundary fusion")));
            }
            if !(v * &v.conj()).is_one() {
                return Err(Error::InvalidInput(format!("M symbol ({a},{b};{c}) is not a phase")));
            }
        }
        Ok(())
    }
}

/// Expands `W_a(γ)·W_b(γ)` into `Σ_c coeff_c · W_c(γ)` for tunnels from `from` to `to`.
pub fn compose_tunnels(
    space: &Arc<GroundSpace>,
    a: AnyonLabel,
    b: AnyonLabel,
    from: usize,
    to: usize,
    m_from: &MSymbolTable,
    m_to: &MSymbolTable,
) -> Result<Vec<(AnyonLabel, Cyclotomic)>> {
    tunnel(space, a, from, to)?;
    tunnel(space, b, from, to)?;
    let t = space.theory();
    let c = a.mul(&b);
    // Only one fusion channel for abelian labels; the dimension factor is kept explicit.
    let ratio = &(t.quantum_dimension(&a) * t.quantum_dimension(&b)) / t.quantum_dimension(&c);
    let root = Cyclotomic::sqrt_rational(ratio.as_rational().expect("rational dimensions")).expect("positive");
    let coeff = m_from.get(&a, &b, &c) * m_to.get(&a, &b, &c).conj() * root;
    Ok(vec![(c, coeff)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::qudit_registers;
    use crate::theory::build_theory;

    fn qutrit() -> Arc<GroundSpace> {
        let t = Arc::new(build_theory(3).unwrap());
        Arc::new(GroundSpace::from_names(&t, &["e", "e"]).unwrap())
    }

    fn w(k: i64) -> Cyclotomic {
        Cyclotomic::root_of_unity(3, k)
    }

    /// Basis position of the qutrit state labelled by the charge on hole 2.
    fn pos(gs: &GroundSpace, c: AnyonLabel) -> usize {
        gs.position(&[c.dual(), c]).unwrap()
    }

    #[test]
    fn tunnel_e_is_pauli_x() {
        let gs = qutrit();
        let e = AnyonLabel::charge(3);
        let x = tunnel(&gs, e, 1, 2).unwrap();
        let one = AnyonLabel::vacuum(3);
        assert!(x.matrix.get(pos(&gs, e), pos(&gs, one)).is_one());
        assert!(x.matrix.get(pos(&gs, e.pow(2)), pos(&gs, e)).is_one());
        assert!(x.matrix.get(pos(&gs, one), pos(&gs, e.pow(2))).is_one());
        assert!(x.matrix.is_permutation() && is_unitary(&x));
        assert!(x.matrix.pow(3).is_identity());
        let regs = qudit_registers(&gs, &[(1, 2)]).unwrap();
        assert_eq!(regs.to_register_basis(&x.matrix), Matrix::permutation(&[1, 2, 0]));
    }

    #[test]
    fn vacuum_operators_are_identity() {
        let gs = qutrit();
        let one = AnyonLabel::vacuum(3);
        assert!(tunnel(&gs, one, 1, 2).unwrap().matrix.is_identity());
        assert!(wilson_loop(&gs, one, 1).unwrap().matrix.is_identity());
    }

    #[test]
    fn condensation_precondition() {
        let gs = qutrit();
        assert!(matches!(tunnel(&gs, AnyonLabel::flux(3), 1, 2), Err(Error::NotCondensable(_))));
        assert!(matches!(tunnel(&gs, AnyonLabel::charge(3), 1, 3), Err(Error::InvalidInput(_))));
        assert!(matches!(tunnel(&gs, AnyonLabel::charge(5), 1, 2), Err(Error::TheoryMismatch(_))));
    }

    #[test]
    fn loops_on_qutrit() {
        let gs = qutrit();
        let (e, m) = (AnyonLabel::charge(3), AnyonLabel::flux(3));
        let lm = wilson_loop(&gs, m, 2).unwrap();
        for (c, phase) in [(0, 0), (1, -1), (2, -2)] {
            let k = pos(&gs, e.pow(c));
            assert_eq!(*lm.matrix.get(k, k), w(phase));
        }
        assert!(wilson_loop(&gs, e, 2).unwrap().matrix.is_identity());
        assert!(is_unitary(&lm));
    }

    #[test]
    fn weyl_commutation() {
        let gs = qutrit();
        let x = tunnel(&gs, AnyonLabel::charge(3), 1, 2).unwrap().matrix;
        let z = wilson_loop(&gs, AnyonLabel::flux(3), 2).unwrap().matrix;
        assert_eq!(&z * &x, (&x * &z).scale(&w(-1)));
    }

    #[test]
    fn third_of_all_ones_is_not_unitary() {
        let gs = qutrit();
        let j = Matrix::from_fn(3, 3, |_, _| Cyclotomic::ratio(1, 3));
        assert!(!is_unitary(&OperatorMatrix::new(gs, j, Provenance::Product)));
    }

    #[test]
    fn composition_law() {
        let gs = qutrit();
        let e = AnyonLabel::charge(3);
        let trivial = MSymbolTable::trivial();
        assert_eq!(
            compose_tunnels(&gs, e, e, 1, 2, &trivial, &trivial).unwrap(),
            vec![(e.pow(2), Cyclotomic::one())]
        );
        let one = AnyonLabel::vacuum(3);
        assert_eq!(
            compose_tunnels(&gs, one, e, 1, 2, &trivial, &trivial).unwrap(),
            vec![(e, Cyclotomic::one())]
        );
        let twisted = MSymbolTable::trivial().with(e, e, e.pow(2), w(1));
        twisted.validate(gs.boundary(1).unwrap()).unwrap();
        assert_eq!(
            compose_tunnels(&gs, e, e, 1, 2, &twisted, &trivial).unwrap(),
            vec![(e.pow(2), w(1))]
        );
    }
}
