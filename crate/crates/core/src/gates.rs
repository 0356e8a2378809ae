//! The D(Z_3) qutrit gate set built from tunneling, loops, braids and charge projections.
//!
//! All gate matrices are written in the register basis: each pair of holes
//! carries a qutrit labelled by the charge on its second hole, in ascending
//! label order, so `|k⟩` is `e^k` on an e-pair and `m^k` on an m-pair.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use crate::boundary::{code_registers, qudit_registers, GroundSpace, RegisterMap};
use crate::braid::{braid_squared, BraidGenerator};
use crate::charge::{charge_projector, split_double_layer, CurveLabel};
use crate::circuit::{channel_matrix, Channel, Circuit};
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::theory::{build_theory, AnyonLabel};
use crate::wilson::{tunnel, wilson_loop};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum GateName {
    X3,
    Z3,
    H3,
    CZ3,
    SUM3,
    #[serde(rename = "SUM3_ee")]
    SUM3ee,
    Q3,
    M,
}

impl GateName {
    pub const ALL: [GateName; 8] = [
        GateName::X3,
        GateName::Z3,
        GateName::H3,
        GateName::CZ3,
        GateName::SUM3,
        GateName::SUM3ee,
        GateName::Q3,
        GateName::M,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            GateName::X3 => "X3",
            GateName::Z3 => "Z3",
            GateName::H3 => "H3",
            GateName::CZ3 => "CZ3",
            GateName::SUM3 => "SUM3",
            GateName::SUM3ee => "SUM3_ee",
            GateName::Q3 => "Q3",
            GateName::M => "M",
        }
    }
}

impl fmt::Display for GateName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GateName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        GateName::ALL
            .into_iter()
            .find(|g| g.as_str() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown gate `{s}`")))
    }
}

/// One step of a gate recipe, in time order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "op", rename_all = "kebab-case")]
pub enum Primitive {
    Tunnel { anyon: AnyonLabel, from: usize, to: usize },
    Loop { anyon: AnyonLabel, hole: usize },
    Braid { pair: (usize, usize), exp: i32 },
    Tcm { charge: u32, curve: String, complement: bool },
    /// Normalized single-layer S matrix on one register (or its adjoint).
    ModularS { register: usize, adjoint: bool },
    /// Single-layer Dehn twist diag(θ_x) raised to a power.
    DehnTwist { register: usize, power: u32 },
    /// A compiled gate applied to named circuit registers.
    Gate { name: String, on: Vec<String> },
    Measure { register: String, bind: String },
    Conditional { var: String, eq: u32, gate: String, on: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GateAction {
    Unitary(Matrix),
    /// Two-outcome measurement: outcome 0 is `projector`, outcome 1 `complement`.
    Measurement { projector: Matrix, complement: Matrix },
}

#[derive(Clone, Debug)]
pub struct CompiledGate {
    pub name: GateName,
    pub space: Arc<GroundSpace>,
    pub registers: RegisterMap,
    pub action: GateAction,
    pub recipe: Vec<Primitive>,
    /// `matrix = phase · (product of the recipe)`.
    pub phase: Cyclotomic,
}

fn space(names: &[&str]) -> Result<Arc<GroundSpace>> {
    let t = Arc::new(build_theory(3)?);
    Ok(Arc::new(GroundSpace::from_names(&t, names)?))
}

fn pairing(gs: &GroundSpace) -> Vec<(usize, usize)> {
    (0..gs.holes() / 2).map(|k| (2 * k + 1, 2 * k + 2)).collect()
}

/// Single-layer S̃ for N = 3 in register basis.
pub fn modular_s() -> Matrix {
    split_double_layer(&build_theory(3).expect("N = 3")).expect("odd N").s
}

fn dehn_twist() -> Matrix {
    Matrix::diagonal(&split_double_layer(&build_theory(3).expect("N = 3")).expect("odd N").twists)
}

/// `m` acting on register `k` of a register map with the given dims.
fn on_register(dims: &[usize], k: usize, m: &Matrix) -> Matrix {
    dims.iter().enumerate().fold(Matrix::identity(1), |acc, (i, &d)| {
        acc.kron(&if i == k { m.clone() } else { Matrix::identity(d) })
    })
}

impl CompiledGate {
    fn new(name: GateName, space: Arc<GroundSpace>, action: GateAction, recipe: Vec<Primitive>) -> Result<Self> {
        let registers = code_registers(&space, &pairing(&space))?;
        Ok(CompiledGate {
            name,
            space,
            registers,
            action,
            recipe,
            phase: Cyclotomic::one(),
        })
    }

    pub fn matrix(&self) -> Option<&Matrix> {
        match &self.action {
            GateAction::Unitary(m) => Some(m),
            GateAction::Measurement { .. } => None,
        }
    }

    /// Register-basis matrix of one primitive step.
    pub fn primitive_matrix(&self, p: &Primitive) -> Result<Matrix> {
        let dims = self.registers.dims();
        let lift = |m: Matrix| self.registers.to_register_basis(&m);
        Ok(match p {
            Primitive::Tunnel { anyon, from, to } => lift(tunnel(&self.space, *anyon, *from, *to)?.matrix),
            Primitive::Loop { anyon, hole } => lift(wilson_loop(&self.space, *anyon, *hole)?.matrix),
            Primitive::Braid { pair, exp } => {
                let m = braid_squared(&self.space, BraidGenerator::new(pair.0, pair.1)?)?.matrix;
                lift(if *exp < 0 { m.adjoint() } else { m })
            }
            Primitive::Tcm { charge, curve, complement } => {
                let c = charge_projector(&self.space, *charge, curve.parse::<CurveLabel>()?)?;
                lift(if *complement { c.complement.matrix } else { c.projector.matrix })
            }
            Primitive::ModularS { register, adjoint } => {
                let s = modular_s();
                on_register(&dims, *register, &if *adjoint { s.adjoint() } else { s })
            }
            Primitive::DehnTwist { register, power } => on_register(&dims, *register, &dehn_twist().pow(*power)),
            Primitive::Gate { .. } | Primitive::Measure { .. } | Primitive::Conditional { .. } => {
                return Err(Error::InvalidInput("circuit steps have no single matrix".into()))
            }
        })
    }

    /// Product of the recipe, first step acting first.
    pub fn recipe_product(&self) -> Result<Matrix> {
        let d = self.registers.dim();
        self.recipe
            .iter()
            .try_fold(Matrix::identity(d), |acc, p| Ok(&self.primitive_matrix(p)? * &acc))
    }

    /// Whether the stored action equals the recipe (for SUM3_ee: the circuit channel).
    pub fn recipe_matches(&self) -> Result<bool> {
        match (&self.action, self.name) {
            (GateAction::Unitary(m), GateName::SUM3ee) => Ok(match channel_matrix(&sum_protocol(true))? {
                Channel::Unitary(u) => &u == m,
                Channel::NonUnitary { .. } => false,
            }),
            (GateAction::Unitary(m), _) => Ok(self.recipe_product()?.scale(&self.phase) == *m),
            (GateAction::Measurement { projector, .. }, _) => Ok(self.recipe_product()? == *projector),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::json!({
            "schema": crate::SCHEMA,
            "name": self.name,
            "space": self.space.descriptor(),
            "registers": self.registers.dims(),
            "recipe": self.recipe,
            "phase": self.phase,
        });
        match &self.action {
            GateAction::Unitary(m) => v["matrix"] = serde_json::to_value(m).unwrap(),
            GateAction::Measurement { projector, complement } => {
                v["projectors"] = serde_json::json!([projector, complement]);
            }
        }
        v
    }
}

/// Pauli X: tunnel e from hole 1 to hole 2.
pub fn gate_x3() -> Result<CompiledGate> {
    let gs = space(&["e", "e"])?;
    let recipe = vec![Primitive::Tunnel {
        anyon: AnyonLabel::charge(3),
        from: 1,
        to: 2,
    }];
    let mut g = CompiledGate::new(GateName::X3, gs, GateAction::Unitary(Matrix::identity(1)), recipe)?;
    g.action = GateAction::Unitary(g.recipe_product()?);
    Ok(g)
}

/// Pauli Z = diag(1, ω, ω²): loop of m̄ around hole 2.
pub fn gate_z3() -> Result<CompiledGate> {
    let gs = space(&["e", "e"])?;
    let recipe = vec![Primitive::Loop {
        anyon: AnyonLabel::new(3, 0, -1),
        hole: 2,
    }];
    let mut g = CompiledGate::new(GateName::Z3, gs, GateAction::Unitary(Matrix::identity(1)), recipe)?;
    g.action = GateAction::Unitary(g.recipe_product()?);
    Ok(g)
}

/// Qutrit Hadamard, the normalized single-layer S matrix.
pub fn gate_h3() -> Result<CompiledGate> {
    let gs = space(&["e", "e"])?;
    let recipe = vec![Primitive::ModularS {
        register: 0,
        adjoint: false,
    }];
    CompiledGate::new(GateName::H3, gs, GateAction::Unitary(modular_s()), recipe)
}

/// Controlled Z: full braid of hole 2 around hole 3 on an e-pair and an m-pair.
pub fn gate_cz3() -> Result<CompiledGate> {
    let gs = space(&["e", "e", "m", "m"])?;
    let recipe = vec![Primitive::Braid { pair: (2, 3), exp: 1 }];
    let mut g = CompiledGate::new(GateName::CZ3, gs, GateAction::Unitary(Matrix::identity(1)), recipe)?;
    g.action = GateAction::Unitary(g.recipe_product()?);
    Ok(g)
}

/// |i, j⟩ ↦ |i, i + j⟩ on `dims = [3, 3]`.
pub fn sum_matrix() -> Matrix {
    let perm: Vec<usize> = (0..9).map(|k| 3 * (k / 3) + (k / 3 + k % 3) % 3).collect();
    Matrix::permutation(&perm)
}

/// SUM between an e-qutrit and an m-qutrit: SUM = (I⊗H†)·CZ·(I⊗H).
pub fn gate_sum3_mixed() -> Result<CompiledGate> {
    gate_sum3_mixed_with("e")
}

/// As [`gate_sum3_mixed`], with the control on the given boundary type (`e` or `m`).
pub fn gate_sum3_mixed_with(control: &str) -> Result<CompiledGate> {
    let names = match control {
        "e" => ["e", "e", "m", "m"],
        "m" => ["m", "m", "e", "e"],
        other => return Err(Error::InvalidInput(format!("control must be on an e or m pair, got `{other}`"))),
    };
    let gs = space(&names)?;
    let recipe = vec![
        Primitive::ModularS {
            register: 1,
            adjoint: false,
        },
        Primitive::Braid { pair: (2, 3), exp: 1 },
        Primitive::ModularS {
            register: 1,
            adjoint: true,
        },
    ];
    CompiledGate::new(GateName::SUM3, gs, GateAction::Unitary(sum_matrix()), recipe)
}

/// The ancilla-mediated SUM between two e-qutrits; see [`sum_protocol`].
pub fn gate_sum3_ee() -> Result<CompiledGate> {
    let gs = space(&["e", "e", "e", "e"])?;
    let circuit = sum_protocol(true);
    let recipe = circuit.recipe();
    let matrix = match channel_matrix(&circuit)? {
        Channel::Unitary(u) => u,
        Channel::NonUnitary { witness, reason } => {
            return Err(Error::InvalidInput(format!(
                "SUM protocol is not deterministic (input {witness}): {reason}"
            )))
        }
    };
    CompiledGate::new(GateName::SUM3ee, gs, GateAction::Unitary(matrix), recipe)
}

/// Registers `ctrl`, `tgt` (e-pairs) and ancilla `anc` (m-pair, starts in |0⟩).
///
/// The ancilla is put in H|0⟩, receives two SUMs onto the target and one SUM
/// from the control, and is measured in the charge basis with outcome j. The
/// target is then corrected by X^j, leaving |c, t⟩ ↦ |c, c + t⟩.
pub fn sum_protocol(with_correction: bool) -> Circuit {
    let mut json = serde_json::json!({
        "schema": crate::SCHEMA,
        "registers": [
            {"name": "ctrl", "dim": 3, "boundary": "e"},
            {"name": "tgt", "dim": 3, "boundary": "e"},
            {"name": "anc", "dim": 3, "boundary": "m", "init": 0}
        ],
        "instructions": [
            {"gate": "H3", "on": ["anc"]},
            {"gate": "SUM3", "on": ["anc", "tgt"]},
            {"gate": "SUM3", "on": ["anc", "tgt"]},
            {"gate": "SUM3", "on": ["ctrl", "anc"]},
            {"measure": "anc", "basis": "charge", "bind": "j"}
        ]
    });
    if with_correction {
        let ins = json["instructions"].as_array_mut().unwrap();
        ins.push(serde_json::json!({"if": "j", "eq": 1, "gate": "X3", "on": ["tgt"]}));
        ins.push(serde_json::json!({"if": "j", "eq": 2, "gate": "X3", "on": ["tgt"], "pow": 2}));
    }
    serde_json::from_value(json).expect("well-formed protocol")
}

/// Q3 = diag(1, 1, ω) as the squared Dehn twist followed by Pauli Z.
pub fn gate_q3() -> Result<CompiledGate> {
    let gs = space(&["e", "e"])?;
    let recipe = vec![
        Primitive::DehnTwist { register: 0, power: 2 },
        Primitive::Loop {
            anyon: AnyonLabel::new(3, 0, -1),
            hole: 2,
        },
    ];
    let w = |k| Cyclotomic::root_of_unity(3, k);
    let target = Matrix::diagonal(&[w(0), w(0), w(1)]);
    let mut g = CompiledGate::new(GateName::Q3, gs, GateAction::Unitary(target.clone()), recipe)?;
    g.phase = target
        .proportionality(&g.recipe_product()?)
        .ok_or_else(|| Error::InvalidInput("Q3 recipe is not proportional to diag(1,1,ω)".into()))?;
    Ok(g)
}

/// Coherent projection H†PH versus H†(1 − P)H, with P the vacuum projector on the arc.
pub fn gate_m() -> Result<CompiledGate> {
    let gs = space(&["e", "e"])?;
    let regs = qudit_registers(&gs, &[(1, 2)])?;
    let tcm = charge_projector(&gs, 0, CurveLabel::Arc { from: 1, to: 2 })?;
    let h = modular_s();
    let conj = |p: &Matrix| &(&h.adjoint() * &regs.to_register_basis(p)) * &h;
    let action = GateAction::Measurement {
        projector: conj(&tcm.projector.matrix),
        complement: conj(&tcm.complement.matrix),
    };
    let recipe = vec![
        Primitive::ModularS {
            register: 0,
            adjoint: false,
        },
        Primitive::Tcm {
            charge: 0,
            curve: "arc:1,2".into(),
            complement: false,
        },
        Primitive::ModularS {
            register: 0,
            adjoint: true,
        },
    ];
    CompiledGate::new(GateName::M, gs, action, recipe)
}

pub fn compile(name: GateName) -> Result<CompiledGate> {
    match name {
        GateName::X3 => gate_x3(),
        GateName::Z3 => gate_z3(),
        GateName::H3 => gate_h3(),
        GateName::CZ3 => gate_cz3(),
        GateName::SUM3 => gate_sum3_mixed(),
        GateName::SUM3ee => gate_sum3_ee(),
        GateName::Q3 => gate_q3(),
        GateName::M => gate_m(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(k: i64) -> Cyclotomic {
        Cyclotomic::root_of_unity(3, k)
    }

    fn unitary(g: &CompiledGate) -> &Matrix {
        g.matrix().unwrap()
    }

    #[test]
    fn pauli_x() {
        let x = gate_x3().unwrap();
        assert_eq!(*unitary(&x), Matrix::permutation(&[1, 2, 0]));
        assert!(unitary(&x).pow(3).is_identity());
        assert!(x.recipe_matches().unwrap());
    }

    #[test]
    fn pauli_z() {
        let z = gate_z3().unwrap();
        assert_eq!(*unitary(&z), Matrix::diagonal(&[w(0), w(1), w(2)]));
    }

    #[test]
    fn hadamard() {
        let h = unitary(&gate_h3().unwrap()).clone();
        let r = Cyclotomic::inv_sqrt(3);
        let want = Matrix::from_rows(vec![
            vec![r.clone(), r.clone(), r.clone()],
            vec![r.clone(), &r * &w(1), &r * &w(2)],
            vec![r.clone(), &r * &w(2), &r * &w(1)],
        ]);
        assert_eq!(h, want);
        assert!(h.is_unitary());
        // H² is charge conjugation
        assert_eq!(h.pow(2), Matrix::permutation(&[0, 2, 1]));
        assert!(h.pow(4).is_identity());
    }

    #[test]
    fn controlled_z() {
        let cz = gate_cz3().unwrap();
        let want = Matrix::diagonal(&[0, 0, 0, 0, 1, 2, 0, 2, 1].map(w));
        assert_eq!(*unitary(&cz), want);
        assert!(unitary(&cz).pow(3).is_identity());
        let swap = Matrix::permutation(&(0..9).map(|k| 3 * (k % 3) + k / 3).collect::<Vec<_>>());
        assert_eq!(&(&swap * unitary(&cz)) * &swap, want);
    }

    #[test]
    fn mixed_sum() {
        for control in ["e", "m"] {
            let g = gate_sum3_mixed_with(control).unwrap();
            assert!(g.recipe_matches().unwrap(), "control on {control}");
        }
        let s = sum_matrix();
        assert!(s.is_permutation());
        // |1,0⟩ ↦ |1,1⟩ and control 0 is inert
        assert!(s.get(4, 3).is_one());
        for j in 0..3 {
            assert!(s.get(j, j).is_one());
        }
        let h = modular_s();
        let ih = Matrix::identity(3).kron(&h);
        let ihd = Matrix::identity(3).kron(&h.adjoint());
        let cz = unitary(&gate_cz3().unwrap()).clone();
        assert_eq!(&(&ih * &s) * &ihd, cz);
        // both factors un-daggered only agree up to charge conjugation on the target
        assert_ne!(&(&ih * &s) * &ih, cz);
    }

    #[test]
    fn sum_between_charge_qutrits() {
        let g = gate_sum3_ee().unwrap();
        assert_eq!(*unitary(&g), sum_matrix());
        assert!(g.recipe_matches().unwrap());
    }

    #[test]
    fn q3_is_twist_squared_times_z() {
        let q = gate_q3().unwrap();
        assert_eq!(*unitary(&q), Matrix::diagonal(&[w(0), w(0), w(1)]));
        assert!(q.phase.is_one());
        assert!(q.recipe_matches().unwrap());
        let z = unitary(&gate_z3().unwrap()).clone();
        assert_eq!(unitary(&q) * &z, &z * unitary(&q));
        assert_eq!(dehn_twist(), Matrix::diagonal(&[w(0), w(1), w(1)]));
    }

    #[test]
    fn coherent_projection() {
        let m = gate_m().unwrap();
        let GateAction::Measurement { projector, complement } = &m.action else { panic!() };
        let c = Cyclotomic::from_integer;
        assert_eq!(*projector, Matrix::diagonal(&[c(1), c(0), c(0)]));
        assert_eq!(*complement, Matrix::diagonal(&[c(0), c(1), c(1)]));
        assert!((projector + complement).is_identity());
        assert!(m.recipe_matches().unwrap());
    }

    #[test]
    fn names_round_trip() {
        for g in GateName::ALL {
            assert_eq!(g.as_str().parse::<GateName>().unwrap(), g);
        }
        assert!("H4".parse::<GateName>().is_err());
    }
}
