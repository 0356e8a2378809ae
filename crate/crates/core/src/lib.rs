pub mod boundary;
pub mod braid;
pub mod charge;
pub mod circuit;
pub mod cyclotomic;
pub mod error;
pub mod gates;
pub mod matrix;
pub mod poly;
pub mod theory;
pub mod wilson;

pub use boundary::{build_ground_space, enumerate_lagrangians, qudit_registers, GroundSpace, LagrangianAlgebra, RegisterMap};
pub use cyclotomic::Cyclotomic;
pub use error::{Error, Result};
pub use matrix::Matrix;
pub use poly::Poly;
pub use braid::{braid_squared, group_order_generated, pure_braid_image, BraidGenerator, BraidLetter};
pub use charge::{charge_projector, effective_hamiltonian, measure, split_double_layer, wilson_basis, ChargeMeasurement, CurveLabel};
pub use theory::{build_theory, verify_modular_relations, AnyonLabel, TheoryData};
pub use wilson::{compose_tunnels, is_unitary, tunnel, wilson_loop, MSymbolTable, OperatorMatrix, Provenance};

/// Version tag carried by every JSON document.
pub const SCHEMA: &str = "gbl/1";
