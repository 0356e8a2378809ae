//! Gapped boundary types and the ground space of a sphere with boundary holes.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::theory::{AnyonLabel, TheoryData};

/// A set of mutually transparent bosons of size N that can condense on a boundary.
#[derive(Clone)]
pub struct LagrangianAlgebra {
    theory: Arc<TheoryData>,
    condensed: Vec<AnyonLabel>,
    short: String,
}

impl PartialEq for LagrangianAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.theory.n() == other.theory.n() && self.condensed == other.condensed
    }
}

impl Eq for LagrangianAlgebra {}

impl fmt::Debug for LagrangianAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.short, self.display_name())
    }
}

impl LagrangianAlgebra {
    pub fn theory(&self) -> &Arc<TheoryData> {
        &self.theory
    }

    /// Condensed anyons in ascending label order.
    pub fn condensed(&self) -> &[AnyonLabel] {
        &self.condensed
    }

    pub fn contains(&self, a: &AnyonLabel) -> bool {
        self.condensed.binary_search(a).is_ok()
    }

    /// Short selector: `e`, `m`, or `L<k>` for the others.
    pub fn name(&self) -> &str {
        &self.short
    }

    /// Sum of condensed anyons, e.g. `1+e+e²`.
    pub fn display_name(&self) -> String {
        self.condensed
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join("+")
    }
}

fn generated(g: AnyonLabel, h: AnyonLabel) -> Vec<AnyonLabel> {
    let n = g.n as i64;
    let set: BTreeSet<AnyonLabel> = (0..n)
        .flat_map(|i| (0..n).map(move |j| g.pow(i).mul(&h.pow(j))))
        .collect();
    set.into_iter().collect()
}

/// All Lagrangian subgroups of Z_N × Z_N: order N, trivial twists, trivial mutual braiding.
pub fn enumerate_lagrangians(t: &Arc<TheoryData>) -> Vec<LagrangianAlgebra> {
    let n = t.n();
    let labels = t.labels();
    let mut found: BTreeSet<Vec<AnyonLabel>> = BTreeSet::new();
    for &g in labels {
        for &h in labels {
            let sub = generated(g, h);
            if sub.len() != n as usize {
                continue;
            }
            let bosonic = sub.iter().all(|a| t.theta(a).is_one());
            let transparent = sub.iter().all(|a| sub.iter().all(|b| t.s(a, b).is_one()));
            if bosonic && transparent {
                found.insert(sub);
            }
        }
    }
    let charge: Vec<AnyonLabel> = (0..n as i64).map(|k| AnyonLabel::new(n, k, 0)).collect();
    let flux: Vec<AnyonLabel> = (0..n as i64).map(|k| AnyonLabel::new(n, 0, k)).collect();
    let mut ordered: Vec<Vec<AnyonLabel>> = Vec::new();
    for special in [&charge, &flux] {
        if found.remove(special) {
            ordered.push(special.clone());
        }
    }
    ordered.extend(found);
    ordered
        .into_iter()
        .enumerate()
        .map(|(k, condensed)| {
            let short = if condensed == charge {
                "e".to_string()
            } else if condensed == flux {
                "m".to_string()
            } else {
                format!("L{k}")
            };
            LagrangianAlgebra {
                theory: t.clone(),
                condensed,
                short,
            }
        })
        .collect()
}

/// Looks a boundary type up by short name (`e`, `m`, `L2`) or display name (`1+e+e²`).
pub fn resolve_algebra(t: &Arc<TheoryData>, name: &str) -> Result<LagrangianAlgebra> {
    let all = enumerate_lagrangians(t);
    let key = name.trim();
    if let Some(a) = all.iter().find(|a| a.name() == key || a.display_name() == key) {
        return Ok(a.clone());
    }
    let known: Vec<String> = all.iter().map(|a| a.name().to_string()).collect();
    Err(Error::InvalidInput(format!(
        "unknown boundary type `{key}` for D(Z_{}); known: {}",
        t.n(),
        known.join(", ")
    )))
}

/// Labelings `(a_1, …, a_n)` with `a_i` condensing on hole `i` and total charge vacuum.
#[derive(Clone)]
pub struct GroundSpace {
    theory: Arc<TheoryData>,
    boundaries: Vec<LagrangianAlgebra>,
    basis: Vec<Vec<AnyonLabel>>,
    index: HashMap<Vec<AnyonLabel>, usize>,
}

impl PartialEq for GroundSpace {
    fn eq(&self, other: &Self) -> bool {
        self.boundaries == other.boundaries
    }
}

impl Eq for GroundSpace {}

impl fmt::Debug for GroundSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroundSpace(N={}, {:?}, dim={})", self.theory.n(), self.boundaries, self.dim())
    }
}

pub fn build_ground_space(boundaries: &[LagrangianAlgebra]) -> Result<GroundSpace> {
    let first = boundaries
        .first()
        .ok_or_else(|| Error::InvalidInput("at least one boundary is required".into()))?;
    let theory = first.theory.clone();
    if let Some(b) = boundaries.iter().find(|b| b.theory.n() != theory.n()) {
        return Err(Error::TheoryMismatch(format!(
            "boundary {} belongs to D(Z_{}) but the first boundary to D(Z_{})",
            b.name(),
            b.theory.n(),
            theory.n()
        )));
    }
    let n = boundaries.len();
    let mut basis = Vec::new();
    // Odometer over a_1..a_{n-1}, first index most significant.
    let mut digits = vec![0usize; n - 1];
    loop {
        let mut labeling: Vec<AnyonLabel> =
            digits.iter().enumerate().map(|(i, &d)| boundaries[i].condensed[d]).collect();
        let total = labeling.iter().fold(theory.vacuum(), |acc, a| acc.mul(a));
        let last = total.dual();
        if boundaries[n - 1].contains(&last) {
            labeling.push(last);
            basis.push(labeling);
        }
        let mut k = n - 1;
        loop {
            if k == 0 {
                let index = basis.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
                return Ok(GroundSpace {
                    theory,
                    boundaries: boundaries.to_vec(),
                    basis,
                    index,
                });
            }
            k -= 1;
            digits[k] += 1;
            if digits[k] < boundaries[k].condensed.len() {
                break;
            }
            digits[k] = 0;
        }
    }
}

impl GroundSpace {
    /// Builds a space from boundary names such as `["e", "e", "m", "m"]`.
    pub fn from_names(t: &Arc<TheoryData>, names: &[&str]) -> Result<GroundSpace> {
        let algebras = names
            .iter()
            .map(|s| resolve_algebra(t, s))
            .collect::<Result<Vec<_>>>()?;
        build_ground_space(&algebras)
    }

    pub fn theory(&self) -> &Arc<TheoryData> {
        &self.theory
    }

    pub fn boundaries(&self) -> &[LagrangianAlgebra] {
        &self.boundaries
    }

    /// Algebra of a 1-based hole index.
    pub fn boundary(&self, hole: usize) -> Result<&LagrangianAlgebra> {
        self.check_hole(hole)?;
        Ok(&self.boundaries[hole - 1])
    }

    pub fn holes(&self) -> usize {
        self.boundaries.len()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<AnyonLabel>] {
        &self.basis
    }

    pub fn position(&self, labeling: &[AnyonLabel]) -> Option<usize> {
        self.index.get(labeling).copied()
    }

    pub fn check_hole(&self, hole: usize) -> Result<()> {
        if hole == 0 || hole > self.holes() {
            return Err(Error::InvalidInput(format!(
                "hole index {hole} out of range 1..={}",
                self.holes()
            )));
        }
        Ok(())
    }

    pub fn descriptor(&self) -> SpaceDescriptor {
        SpaceDescriptor {
            schema: crate::SCHEMA.to_string(),
            n: self.theory.n(),
            boundaries: self.boundaries.iter().map(|b| b.name().to_string()).collect(),
            dim: self.dim(),
            basis: self
                .basis
                .iter()
                .map(|l| l.iter().map(|a| [a.a1, a.a2]).collect())
                .collect(),
        }
    }
}

/// JSON form of a ground space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct SpaceDescriptor {
    #[serde(default = "default_schema")]
    pub schema: String,
    #[serde(rename = "N")]
    pub n: u32,
    pub boundaries: Vec<String>,
    pub dim: usize,
    pub basis: Vec<Vec<[u32; 2]>>,
}

fn default_schema() -> String {
    crate::SCHEMA.to_string()
}

impl SpaceDescriptor {
    /// Rebuilds the space and checks the stored basis matches.
    pub fn rebuild(&self) -> Result<GroundSpace> {
        let theory = Arc::new(crate::theory::build_theory(self.n)?);
        let names: Vec<&str> = self.boundaries.iter().map(String::as_str).collect();
        let gs = GroundSpace::from_names(&theory, &names)?;
        if gs.descriptor().basis != self.basis && !self.basis.is_empty() {
            return Err(Error::InvalidInput("stored basis does not match the boundary list".into()));
        }
        Ok(gs)
    }
}

/// Qudit registers carried by pairs of holes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegisterMap {
    pairs: Vec<(usize, usize)>,
    labels: Vec<Vec<AnyonLabel>>,
    /// Register-basis index of each ground-space basis vector, `None` outside the code space.
    to_register: Vec<Option<usize>>,
}

/// Splits the ground space into per-pair registers; pair `(i, j)` is labelled by the charge `a_j`.
pub fn qudit_registers(gs: &GroundSpace, pairing: &[(usize, usize)]) -> Result<RegisterMap> {
    build_registers(gs, pairing, true)
}

/// Registers on the subspace where every pair carries vacuum total charge.
pub fn code_registers(gs: &GroundSpace, pairing: &[(usize, usize)]) -> Result<RegisterMap> {
    build_registers(gs, pairing, false)
}

fn build_registers(gs: &GroundSpace, pairing: &[(usize, usize)], strict: bool) -> Result<RegisterMap> {
    let mut seen = vec![false; gs.holes()];
    for &(i, j) in pairing {
        gs.check_hole(i)?;
        gs.check_hole(j)?;
        if i == j || seen[i - 1] || seen[j - 1] {
            return Err(Error::InvalidInput(format!("pairing {pairing:?} is not a partition of the holes")));
        }
        seen[i - 1] = true;
        seen[j - 1] = true;
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::InvalidInput(format!("pairing {pairing:?} does not cover every hole")));
    }
    let neutral = |l: &[AnyonLabel]| pairing.iter().all(|&(i, j)| l[i - 1].mul(&l[j - 1]).is_vacuum());
    if strict {
        if let Some(l) = gs.basis().iter().find(|l| !neutral(l)) {
            let &(i, j) = pairing
                .iter()
                .find(|&&(i, j)| !l[i - 1].mul(&l[j - 1]).is_vacuum())
                .unwrap();
            return Err(Error::AmbiguousRegister(format!(
                "holes ({i},{j}) carry net charge {} in a basis state, so no pair charge labels it",
                l[i - 1].mul(&l[j - 1])
            )));
        }
    }
    let code: Vec<&Vec<AnyonLabel>> = gs.basis().iter().filter(|l| neutral(l)).collect();
    let labels: Vec<Vec<AnyonLabel>> = pairing
        .iter()
        .map(|&(_, j)| {
            let set: BTreeSet<AnyonLabel> = code.iter().map(|l| l[j - 1]).collect();
            set.into_iter().collect()
        })
        .collect();
    let total: usize = labels.iter().map(Vec::len).product();
    if total != code.len() {
        return Err(Error::AmbiguousRegister(format!(
            "pair charges span {total} tuples but the code space has dimension {}",
            code.len()
        )));
    }
    let to_register = gs
        .basis()
        .iter()
        .map(|l| {
            neutral(l).then(|| {
                pairing.iter().zip(&labels).fold(0, |acc, (&(_, j), regs)| {
                    acc * regs.len() + regs.binary_search(&l[j - 1]).unwrap()
                })
            })
        })
        .collect();
    Ok(RegisterMap {
        pairs: pairing.to_vec(),
        labels,
        to_register,
    })
}

impl RegisterMap {
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Charge label of each basis state of each register.
    pub fn labels(&self) -> &[Vec<AnyonLabel>] {
        &self.labels
    }

    pub fn dims(&self) -> Vec<usize> {
        self.labels.iter().map(Vec::len).collect()
    }

    /// Dimension of the register tensor product.
    pub fn dim(&self) -> usize {
        self.labels.iter().map(Vec::len).product()
    }

    /// Whether the registers cover the whole ground space.
    pub fn is_complete(&self) -> bool {
        self.to_register.iter().all(Option::is_some)
    }

    pub fn register_index(&self, basis_index: usize) -> Option<usize> {
        self.to_register[basis_index]
    }

    /// Register digits of a ground-space basis vector.
    pub fn digits(&self, basis_index: usize) -> Option<Vec<usize>> {
        let mut rest = self.to_register[basis_index]?;
        let mut out = vec![0; self.labels.len()];
        for (k, regs) in self.labels.iter().enumerate().rev() {
            out[k] = rest % regs.len();
            rest /= regs.len();
        }
        Some(out)
    }

    /// Rewrites an operator from the ground-space basis into the register basis,
    /// keeping only the block on the code space.
    pub fn to_register_basis(&self, m: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.dim(), self.dim());
        for (i, ri) in self.to_register.iter().enumerate() {
            let Some(ri) = ri else { continue };
            for (j, rj) in self.to_register.iter().enumerate() {
                if let Some(rj) = rj {
                    out.set(*ri, *rj, m.get(i, j).clone());
                }
            }
        }
        out
    }

    /// Embeds a register-basis operator back into the ground-space basis (zero off the code space).
    pub fn from_register_basis(&self, m: &Matrix) -> Matrix {
        let n = self.to_register.len();
        let mut out = Matrix::zeros(n, n);
        for (i, ri) in self.to_register.iter().enumerate() {
            let Some(ri) = ri else { continue };
            for (j, rj) in self.to_register.iter().enumerate() {
                if let Some(rj) = rj {
                    out.set(i, j, m.get(*ri, *rj).clone());
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::build_theory;

    fn theory(n: u32) -> Arc<TheoryData> {
        Arc::new(build_theory(n).unwrap())
    }

    #[test]
    fn two_algebras_for_three() {
        let t = theory(3);
        let algebras = enumerate_lagrangians(&t);
        let names: Vec<String> = algebras.iter().map(|a| a.display_name()).collect();
        assert_eq!(names, vec!["1+e+e²", "1+m+m²"]);
        assert_eq!(algebras[0].name(), "e");
        assert_eq!(algebras[1].name(), "m");
    }

    #[test]
    fn lagrangian_counts() {
        let counts: Vec<usize> = [2, 3, 4, 5].iter().map(|&n| enumerate_lagrangians(&theory(n)).len()).collect();
        assert_eq!(counts, vec![2, 2, 3, 2]);
        let z4 = enumerate_lagrangians(&theory(4));
        assert_eq!(z4[2].display_name(), "1+m²+e²+e²m²");
    }

    #[test]
    fn qutrit_space() {
        let t = theory(3);
        let gs = GroundSpace::from_names(&t, &["e", "e"]).unwrap();
        assert_eq!(gs.dim(), 3);
        for l in gs.basis() {
            assert_eq!(l[0], l[1].dual());
        }
        let order: Vec<String> = gs.basis().iter().map(|l| l[1].to_string()).collect();
        assert_eq!(order, vec!["1", "e²", "e"]);
    }

    #[test]
    fn small_spaces() {
        let t = theory(3);
        assert_eq!(GroundSpace::from_names(&t, &["e", "m"]).unwrap().dim(), 1);
        assert_eq!(GroundSpace::from_names(&t, &["e"]).unwrap().dim(), 1);
        assert_eq!(GroundSpace::from_names(&t, &["e", "e", "m", "m"]).unwrap().dim(), 9);
        assert!(matches!(build_ground_space(&[]), Err(Error::InvalidInput(_))));
        assert!(GroundSpace::from_names(&t, &["q"]).is_err());
    }

    #[test]
    fn registers() {
        let t = theory(3);
        let gs = GroundSpace::from_names(&t, &["e", "e", "m", "m"]).unwrap();
        let regs = qudit_registers(&gs, &[(1, 2), (3, 4)]).unwrap();
        assert_eq!(regs.dims(), vec![3, 3]);
        let qutrit = GroundSpace::from_names(&t, &["e", "e"]).unwrap();
        let r = qudit_registers(&qutrit, &[(1, 2)]).unwrap();
        let names: Vec<String> = r.labels()[0].iter().map(ToString::to_string).collect();
        assert_eq!(names, vec!["1", "e", "e²"]);
        let trivial = GroundSpace::from_names(&t, &["e", "m"]).unwrap();
        assert_eq!(qudit_registers(&trivial, &[(1, 2)]).unwrap().dims(), vec![1]);
        // pairing holes across the two qutrits leaves net charge on each pair
        assert!(matches!(
            qudit_registers(&gs, &[(1, 3), (2, 4)]),
            Err(Error::AmbiguousRegister(_))
        ));
        assert!(matches!(qudit_registers(&gs, &[(1, 2)]), Err(Error::InvalidInput(_))));
        let four = GroundSpace::from_names(&t, &["e", "e", "e", "e"]).unwrap();
        assert_eq!(four.dim(), 27);
        assert!(qudit_registers(&four, &[(1, 2), (3, 4)]).is_err());
        let code = code_registers(&four, &[(1, 2), (3, 4)]).unwrap();
        assert_eq!((code.dims(), code.is_complete()), (vec![3, 3], false));
        let x = Matrix::identity(27);
        assert!(code.to_register_basis(&x).is_identity());
    }

    #[test]
    fn descriptor_round_trip() {
        let t = theory(3);
        let gs = GroundSpace::from_names(&t, &["e", "e"]).unwrap();
        let json = serde_json::to_string(&gs.descriptor()).unwrap();
        assert!(json.contains(r#""N":3"#) && json.contains(r#""dim":3"#));
        let back: SpaceDescriptor = serde_json::from_str(&json).unwrap();
        assert_eq!(back.rebuild().unwrap(), gs);
    }
}
