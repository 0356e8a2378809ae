//! State-vector simulation of qutrit circuits with mid-circuit measurement and feed-forward.
//!
//! Circuit JSON:
//!
//! ```json
//! {"schema": "gbl/1",
//!  "registers": [{"name": "ctrl", "dim": 3, "boundary": "e"},
//!                {"name": "anc", "dim": 3, "boundary": "m", "init": 0}],
//!  "instructions": [{"gate": "H3", "on": ["anc"]},
//!                   {"measure": "anc", "basis": "charge", "bind": "j"},
//!                   {"if": "j", "eq": 1, "gate": "X3", "on": ["ctrl"], "pow": 1}]}
//! ```
//!
//! Registers with `init` are ancillas fixed to that basis state; the input
//! state covers only the other (data) registers. Measurement bases are
//! `charge` (one outcome per basis state), `M` (the coherent projection) and
//! `tcm:<a>` (charge `a` through the arc of the pair, or its complement).
//!
//! Shot `k` of a run with master seed `s` draws from a ChaCha8 stream seeded
//! with `splitmix64(s ^ splitmix64(k))`.

use std::collections::{BTreeMap, HashMap};
use std::sync::OnceLock;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::gates::{self, GateAction, Primitive};
use crate::matrix::Matrix;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Register {
    pub name: String,
    pub dim: usize,
    pub boundary: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub init: Option<usize>,
}

fn one() -> u32 {
    1
}

fn is_one(p: &u32) -> bool {
    *p == 1
}

fn charge_basis() -> String {
    "charge".into()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Instruction {
    Conditional {
        #[serde(rename = "if")]
        var: String,
        eq: u32,
        gate: String,
        on: Vec<String>,
        #[serde(default = "one", skip_serializing_if = "is_one")]
        pow: u32,
    },
    Measure {
        measure: String,
        #[serde(default = "charge_basis")]
        basis: String,
        bind: String,
    },
    Gate {
        gate: String,
        on: Vec<String>,
        #[serde(default = "one", skip_serializing_if = "is_one")]
        pow: u32,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Circuit {
    #[serde(default = "schema")]
    pub schema: String,
    pub registers: Vec<Register>,
    #[serde(default)]
    pub instructions: Vec<Instruction>,
}

fn schema() -> String {
    crate::SCHEMA.to_string()
}

pub const MAX_REGISTERS: usize = 5;

/// Gate names usable in circuits, with their register-basis matrices.
pub fn gate_library() -> &'static HashMap<&'static str, Matrix> {
    static LIB: OnceLock<HashMap<&'static str, Matrix>> = OnceLock::new();
    LIB.get_or_init(|| {
        let unitary = |g: Result<gates::CompiledGate>| match g.expect("gate compiles").action {
            GateAction::Unitary(m) => m,
            GateAction::Measurement { .. } => unreachable!(),
        };
        let h = gates::modular_s();
        let twist = Matrix::diagonal(
            &crate::charge::split_double_layer(&crate::theory::build_theory(3).unwrap())
                .unwrap()
                .twists,
        );
        HashMap::from([
            ("X3", unitary(gates::gate_x3())),
            ("Z3", unitary(gates::gate_z3())),
            ("H3dag", h.adjoint()),
            ("H3", h),
            ("CZ3", unitary(gates::gate_cz3())),
            ("SUM3", unitary(gates::gate_sum3_mixed())),
            ("Q3", unitary(gates::gate_q3())),
            ("T3", twist),
        ])
    })
}

fn gate_arity(m: &Matrix) -> usize {
    if m.rows() == 9 {
        2
    } else {
        1
    }
}

/// Gates acting on an e-pair and an m-pair together.
fn needs_mixed_pair(gate: &str) -> bool {
    matches!(gate, "SUM3" | "CZ3")
}

/// Projectors of a measurement basis on a register of the given dimension.
fn basis_projectors(basis: &str, dim: usize) -> Option<Vec<Matrix>> {
    if basis == "charge" {
        return Some(
            (0..dim)
                .map(|k| {
                    let mut p = Matrix::zeros(dim, dim);
                    p.set(k, k, Cyclotomic::one());
                    p
                })
                .collect(),
        );
    }
    if dim != 3 {
        return None;
    }
    if basis == "M" {
        let GateAction::Measurement { projector, complement } = gates::gate_m().ok()?.action else {
            return None;
        };
        return Some(vec![projector, complement]);
    }
    let a: u32 = basis.strip_prefix("tcm:")?.parse().ok()?;
    let space = std::sync::Arc::new(
        crate::boundary::GroundSpace::from_names(&std::sync::Arc::new(crate::theory::build_theory(3).ok()?), &["e", "e"])
            .ok()?,
    );
    let regs = crate::boundary::qudit_registers(&space, &[(1, 2)]).ok()?;
    let m = crate::charge::charge_projector(&space, a, crate::charge::CurveLabel::Arc { from: 1, to: 2 }).ok()?;
    Some(vec![
        regs.to_register_basis(&m.projector.matrix),
        regs.to_register_basis(&m.complement.matrix),
    ])
}

/// Instruction resolved against the register list.
#[derive(Clone, Debug)]
enum Step {
    Apply { targets: Vec<usize>, local: Matrix, cond: Option<(String, u32)> },
    Measure { target: usize, projectors: Vec<Matrix>, bind: String },
}

impl Circuit {
    pub fn register_index(&self, name: &str) -> Option<usize> {
        self.registers.iter().position(|r| r.name == name)
    }

    pub fn dims(&self) -> Vec<usize> {
        self.registers.iter().map(|r| r.dim).collect()
    }

    /// Indices of registers without a fixed initial state.
    pub fn data_registers(&self) -> Vec<usize> {
        (0..self.registers.len()).filter(|&k| self.registers[k].init.is_none()).collect()
    }

    pub fn data_dim(&self) -> usize {
        self.data_registers().iter().map(|&k| self.registers[k].dim).product()
    }

    /// Checks the circuit and reports the first offending instruction.
    pub fn validate(&self) -> Result<()> {
        self.compile().map(|_| ())
    }

    fn compile(&self) -> Result<Vec<Step>> {
        if self.schema != crate::SCHEMA {
            return Err(Error::InvalidInput(format!("unsupported schema `{}`", self.schema)));
        }
        if self.registers.is_empty() || self.registers.len() > MAX_REGISTERS {
            return Err(Error::InvalidInput(format!(
                "a circuit needs 1 to {MAX_REGISTERS} registers, got {}",
                self.registers.len()
            )));
        }
        for (k, r) in self.registers.iter().enumerate() {
            if r.dim == 0 {
                return Err(Error::InvalidInput(format!("register `{}` has dimension 0", r.name)));
            }
            if self.registers[..k].iter().any(|o| o.name == r.name) {
                return Err(Error::InvalidInput(format!("register `{}` is declared twice", r.name)));
            }
            if r.init.is_some_and(|i| i >= r.dim) {
                return Err(Error::InvalidInput(format!("register `{}` init is out of range", r.name)));
            }
            if r.boundary != "e" && r.boundary != "m" {
                return Err(Error::InvalidInput(format!(
                    "register `{}` has boundary `{}`; expected e or m",
                    r.name, r.boundary
                )));
            }
        }
        let mut outcomes: HashMap<&str, usize> = HashMap::new();
        let mut steps = Vec::new();
        for (index, ins) in self.instructions.iter().enumerate() {
            let fail = |reason: String| Error::CircuitValidation { index, reason };
            let resolve = |names: &[String]| -> Result<Vec<usize>> {
                let mut out = Vec::new();
                for name in names {
                    let k = self
                        .register_index(name)
                        .ok_or_else(|| fail(format!("unknown register `{name}`")))?;
                    if out.contains(&k) {
                        return Err(fail(format!("register `{name}` used twice")));
                    }
                    out.push(k);
                }
                Ok(out)
            };
            let gate_step = |gate: &str, on: &[String], pow: u32| -> Result<(Vec<usize>, Matrix)> {
                let m = gate_library()
                    .get(gate)
                    .ok_or_else(|| fail(format!("unknown gate `{gate}`")))?;
                let targets = resolve(on)?;
                if targets.len() != gate_arity(m) {
                    return Err(fail(format!(
                        "gate {gate} acts on {} register(s), got {}",
                        gate_arity(m),
                        targets.len()
                    )));
                }
                if let Some(&k) = targets.iter().find(|&&k| self.registers[k].dim != 3) {
                    return Err(fail(format!("gate {gate} needs qutrits; `{}` has dimension {}", self.registers[k].name, self.registers[k].dim)));
                }
                if needs_mixed_pair(gate) && self.registers[targets[0]].boundary == self.registers[targets[1]].boundary {
                    return Err(fail(format!(
                        "gate {gate} braids an e-pair with an m-pair; both registers are {}-type",
                        self.registers[targets[0]].boundary
                    )));
                }
                Ok((targets, m.pow(pow)))
            };
            match ins {
                Instruction::Gate { gate, on, pow } => {
                    let (targets, local) = gate_step(gate, on, *pow)?;
                    steps.push(Step::Apply { targets, local, cond: None });
                }
                Instruction::Conditional { var, eq, gate, on, pow } => {
                    let count = *outcomes
                        .get(var.as_str())
                        .ok_or_else(|| fail(format!("outcome `{var}` is used before it is measured")))?;
                    if *eq as usize >= count {
                        return Err(fail(format!("outcome `{var}` takes values below {count}, not {eq}")));
                    }
                    let (targets, local) = gate_step(gate, on, *pow)?;
                    steps.push(Step::Apply {
                        targets,
                        local,
                        cond: Some((var.clone(), *eq)),
                    });
                }
                Instruction::Measure { measure, basis, bind } => {
                    let target = resolve(std::slice::from_ref(measure))?[0];
                    if bind.is_empty() {
                        return Err(fail("empty outcome name".into()));
                    }
                    let projectors = basis_projectors(basis, self.registers[target].dim)
                        .ok_or_else(|| fail(format!("unknown measurement basis `{basis}` for register `{measure}`")))?;
                    outcomes.insert(bind, projectors.len());
                    steps.push(Step::Measure {
                        target,
                        projectors,
                        bind: bind.clone(),
                    });
                }
            }
        }
        Ok(steps)
    }

    /// The instruction list as recipe steps.
    pub fn recipe(&self) -> Vec<Primitive> {
        self.instructions
            .iter()
            .map(|ins| match ins {
                Instruction::Gate { gate, on, pow } => Primitive::Gate {
                    name: if *pow == 1 { gate.clone() } else { format!("{gate}^{pow}") },
                    on: on.clone(),
                },
                Instruction::Measure { measure, bind, .. } => Primitive::Measure {
                    register: measure.clone(),
                    bind: bind.clone(),
                },
                Instruction::Conditional { var, eq, gate, on, pow } => Primitive::Conditional {
                    var: var.clone(),
                    eq: *eq,
                    gate: if *pow == 1 { gate.clone() } else { format!("{gate}^{pow}") },
                    on: on.clone(),
                },
            })
            .collect()
    }
}

// ---------------------------------------------------------------------------
// Amplitude arithmetic shared by the exact and floating paths

trait Amp: Clone + Send + Sync {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn from_cyc(c: &Cyclotomic) -> Self;
}

impl Amp for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        *self == Complex64::new(0.0, 0.0)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn from_cyc(c: &Cyclotomic) -> Self {
        c.to_complex()
    }
}

impl Amp for Cyclotomic {
    fn zero() -> Self {
        Cyclotomic::zero()
    }
    fn is_zero(&self) -> bool {
        Cyclotomic::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn from_cyc(c: &Cyclotomic) -> Self {
        c.clone()
    }
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

/// Applies a local operator to the given registers (first target most significant).
fn apply_local<T: Amp>(state: &[T], dims: &[usize], targets: &[usize], local: &Matrix) -> Vec<T> {
    let st = strides(dims);
    let local_dims: Vec<usize> = targets.iter().map(|&t| dims[t]).collect();
    let local_dim: usize = local_dims.iter().product();
    let offsets: Vec<usize> = (0..local_dim)
        .map(|mut li| {
            let mut off = 0;
            for (k, &t) in targets.iter().enumerate().rev() {
                off += (li % local_dims[k]) * st[t];
                li /= local_dims[k];
            }
            off
        })
        .collect();
    let entries: Vec<Vec<(usize, T)>> = (0..local_dim)
        .map(|i| {
            (0..local_dim)
                .filter(|&j| !local.get(i, j).is_zero())
                .map(|j| (j, T::from_cyc(local.get(i, j))))
                .collect()
        })
        .collect();
    let mut out = vec![T::zero(); state.len()];
    for base in 0..state.len() {
        if targets.iter().any(|&t| (base / st[t]) % dims[t] != 0) {
            continue;
        }
        for (i, row) in entries.iter().enumerate() {
            let mut acc = T::zero();
            for (j, v) in row {
                let x = &state[base + offsets[*j]];
                if !x.is_zero() {
                    acc = acc.add(&v.mul(x));
                }
            }
            out[base + offsets[i]] = acc;
        }
    }
    out
}

/// Embeds a data-register state into the full register space.
fn embed<T: Amp>(c: &Circuit, data: &[T]) -> Result<Vec<T>> {
    let dims = c.dims();
    let total: usize = dims.iter().product();
    if data.len() != c.data_dim() {
        return Err(Error::InvalidInput(format!(
            "input has {} amplitudes but the data registers span {}",
            data.len(),
            c.data_dim()
        )));
    }
    let st = strides(&dims);
    let data_regs = c.data_registers();
    let mut full = vec![T::zero(); total];
    for (k, amp) in data.iter().enumerate() {
        let mut rest = k;
        let mut idx = 0;
        for &r in data_regs.iter().rev() {
            idx += (rest % dims[r]) * st[r];
            rest /= dims[r];
        }
        for (r, reg) in c.registers.iter().enumerate() {
            if let Some(i) = reg.init {
                idx += i * st[r];
            }
        }
        full[idx] = amp.clone();
    }
    Ok(full)
}

fn digits(mut idx: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for k in (0..dims.len()).rev() {
        out[k] = idx % dims[k];
        idx /= dims[k];
    }
    out
}

// ---------------------------------------------------------------------------
// Floating-point shots

/// Input to a run: a basis tuple over the data registers or an amplitude vector.
#[derive(Clone, Debug, PartialEq)]
pub enum Input {
    Basis(Vec<usize>),
    Amplitudes(Vec<Complex64>),
    Exact(Vec<Cyclotomic>),
}

impl Input {
    fn exact(&self, c: &Circuit) -> Result<Vec<Cyclotomic>> {
        match self {
            Input::Basis(d) => Ok(basis_vector(c, d)?
                .into_iter()
                .map(|x| Cyclotomic::from_integer(x as i64))
                .collect()),
            Input::Exact(v) => Ok(v.clone()),
            Input::Amplitudes(_) => Err(Error::InvalidInput("the exact path needs an exact input".into())),
        }
    }

    fn float(&self, c: &Circuit) -> Result<Vec<Complex64>> {
        match self {
            Input::Basis(d) => Ok(basis_vector(c, d)?
                .into_iter()
                .map(|x| Complex64::new(x as f64, 0.0))
                .collect()),
            Input::Exact(v) => Ok(v.iter().map(Cyclotomic::to_complex).collect()),
            Input::Amplitudes(v) => Ok(v.clone()),
        }
    }
}

fn basis_vector(c: &Circuit, digits: &[usize]) -> Result<Vec<u8>> {
    let regs = c.data_registers();
    if digits.len() != regs.len() {
        return Err(Error::InvalidInput(format!(
            "basis input needs {} labels (one per data register), got {}",
            regs.len(),
            digits.len()
        )));
    }
    let mut idx = 0;
    for (&r, &d) in regs.iter().zip(digits) {
        if d >= c.registers[r].dim {
            return Err(Error::InvalidInput(format!("label {d} out of range for register `{}`", c.registers[r].name)));
        }
        idx = idx * c.registers[r].dim + d;
    }
    let mut v = vec![0u8; c.data_dim()];
    v[idx] = 1;
    Ok(v)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShotRecord {
    pub shot: usize,
    pub outcomes: BTreeMap<String, u32>,
    /// Outcome distribution of each measurement, in execution order.
    pub branch_probs: Vec<Vec<f64>>,
    /// Register labels when the final state is a single basis state.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basis_out: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub final_state: Option<Vec<[f64; 2]>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunRecord {
    pub schema: &'static str,
    pub seed: u64,
    pub shots: Vec<ShotRecord>,
}

pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the RNG stream for one shot.
pub fn shot_seed(master: u64, shot: usize) -> u64 {
    splitmix64(master ^ splitmix64(shot as u64))
}

fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

fn run_shot(c: &Circuit, steps: &[Step], init: &[Complex64], shot: usize, seed: u64, emit_state: bool) -> ShotRecord {
    let dims = c.dims();
    let mut rng = ChaCha8Rng::seed_from_u64(shot_seed(seed, shot));
    let mut state = init.to_vec();
    let mut outcomes = BTreeMap::new();
    let mut branch_probs = Vec::new();
    let mut warnings = Vec::new();
    for step in steps {
        match step {
            Step::Apply { targets, local, cond } => {
                if let Some((var, eq)) = cond {
                    if outcomes.get(var) != Some(eq) {
                        continue;
                    }
                }
                state = apply_local(&state, &dims, targets, local);
            }
            Step::Measure { target, projectors, bind } => {
                let branches: Vec<Vec<Complex64>> = projectors
                    .iter()
                    .map(|p| apply_local(&state, &dims, &[*target], p))
                    .collect();
                let probs: Vec<f64> = branches.iter().map(|b| norm_sqr(b)).collect();
                let u: f64 = rng.gen::<f64>() * probs.iter().sum::<f64>();
                let mut pick = probs.len() - 1;
                let mut acc = 0.0;
                for (k, p) in probs.iter().enumerate() {
                    acc += p;
                    if u < acc {
                        pick = k;
                        break;
                    }
                }
                if probs[pick] < crate::charge::DEGENERATE_NORM {
                    let other = (0..probs.len())
                        .max_by(|&a, &b| probs[a].partial_cmp(&probs[b]).unwrap())
                        .unwrap();
                    warnings.push(format!(
                        "outcome {pick} of `{bind}` has norm below {}; took outcome {other}",
                        crate::charge::DEGENERATE_NORM
                    ));
                    pick = other;
                }
                let scale = 1.0 / probs[pick].sqrt();
                state = branches[pick].iter().map(|z| z * scale).collect();
                outcomes.insert(bind.clone(), pick as u32);
                branch_probs.push(probs);
            }
        }
    }
    let basis_out = state
        .iter()
        .position(|z| z.norm_sqr() > 1.0 - 1e-10)
        .map(|k| digits(k, &dims));
    ShotRecord {
        shot,
        outcomes,
        branch_probs,
        basis_out,
        final_state: emit_state.then(|| state.iter().map(|z| [z.re, z.im]).collect()),
        warnings,
    }
}

/// Runs `shots` independent shots; deterministic for a given seed.
pub fn run(c: &Circuit, input: &Input, shots: usize, seed: u64, emit_state: bool) -> Result<RunRecord> {
    let steps = c.compile()?;
    let data = input.float(c)?;
    let norm = norm_sqr(&data);
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidInput(format!("input norm {norm} is not 1")));
    }
    let init = embed(c, &data)?;
    let records = (0..shots)
        .into_par_iter()
        .map(|k| run_shot(c, &steps, &init, k, seed, emit_state))
        .collect();
    Ok(RunRecord {
        schema: crate::SCHEMA,
        seed,
        shots: records,
    })
}

// ---------------------------------------------------------------------------
// Exact path

/// One measurement history with its unnormalized state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Branch {
    pub outcomes: Vec<(String, u32)>,
    pub state: Vec<Cyclotomic>,
}

/// Every measurement history with nonzero weight, states left unnormalized.
pub fn enumerate_branches(c: &Circuit, input: &Input) -> Result<Vec<Branch>> {
    let steps = c.compile()?;
    let dims = c.dims();
    let mut branches = vec![Branch {
        outcomes: Vec::new(),
        state: embed(c, &input.exact(c)?)?,
    }];
    for step in &steps {
        let mut next = Vec::new();
        for b in branches {
            match step {
                Step::Apply { targets, local, cond } => {
                    let fire = cond
                        .as_ref()
                        .is_none_or(|(var, eq)| b.outcomes.iter().rev().find(|(v, _)| v == var).map(|x| x.1) == Some(*eq));
                    let state = if fire { apply_local(&b.state, &dims, targets, local) } else { b.state };
                    next.push(Branch { state, ..b });
                }
                Step::Measure { target, projectors, bind } => {
                    for (k, p) in projectors.iter().enumerate() {
                        let state = apply_local(&b.state, &dims, &[*target], p);
                        if state.iter().all(Cyclotomic::is_zero) {
                            continue;
                        }
                        let mut outcomes = b.outcomes.clone();
                        outcomes.push((bind.clone(), k as u32));
                        next.push(Branch { outcomes, state });
                    }
                }
            }
        }
        branches = next;
    }
    Ok(branches)
}

fn exact_norm(v: &[Cyclotomic]) -> Cyclotomic {
    v.iter().map(|x| x * &x.conj()).sum()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactRun {
    pub outcomes: BTreeMap<String, u32>,
    pub state: Vec<Cyclotomic>,
}

/// Single exact shot: samples a branch with the given seed and renormalizes exactly.
pub fn run_exact(c: &Circuit, input: &Input, seed: u64) -> Result<ExactRun> {
    let steps = c.compile()?;
    let dims = c.dims();
    let mut rng = ChaCha8Rng::seed_from_u64(shot_seed(seed, 0));
    let mut state = embed(c, &input.exact(c)?)?;
    if !exact_norm(&state).is_one() {
        return Err(Error::InvalidInput("exact input is not normalized".into()));
    }
    let mut outcomes = BTreeMap::new();
    for step in &steps {
        match step {
            Step::Apply { targets, local, cond } => {
                if let Some((var, eq)) = cond {
                    if outcomes.get(var) != Some(eq) {
                        continue;
                    }
                }
                state = apply_local(&state, &dims, targets, local);
            }
            Step::Measure { target, projectors, bind } => {
                let branches: Vec<Vec<Cyclotomic>> =
                    projectors.iter().map(|p| apply_local(&state, &dims, &[*target], p)).collect();
                let probs: Vec<Cyclotomic> = branches.iter().map(|b| exact_norm(b)).collect();
                let u: f64 = rng.gen();
                let mut acc = 0.0;
                let mut pick = probs.iter().rposition(|p| !p.is_zero()).expect("normalized state");
                for (k, p) in probs.iter().enumerate() {
                    acc += p.to_complex().re;
                    if u < acc && !p.is_zero() {
                        pick = k;
                        break;
                    }
                }
                let r = probs[pick].as_rational().ok_or_else(|| {
                    Error::InvalidInput("exact renormalization needs a rational branch probability".into())
                })?;
                let inv = Cyclotomic::sqrt_rational(r).expect("non-negative").inv().expect("nonzero");
                state = branches[pick].iter().map(|x| x * &inv).collect();
                outcomes.insert(bind.clone(), pick as u32);
            }
        }
    }
    Ok(ExactRun { outcomes, state })
}

/// Overall action of a circuit on its data registers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Channel {
    Unitary(Matrix),
    /// Branches disagree; `witness` is a data basis input showing it.
    NonUnitary { witness: usize, reason: String },
}

/// Drops ancilla registers that sit in a definite basis state.
pub fn reduce_to_data(c: &Circuit, state: &[Cyclotomic]) -> std::result::Result<Vec<Cyclotomic>, String> {
    let dims = c.dims();
    let data = c.data_registers();
    let ancillas: Vec<usize> = (0..dims.len()).filter(|k| !data.contains(k)).collect();
    let mut anc_value: Option<Vec<usize>> = None;
    let mut out = vec![Cyclotomic::zero(); c.data_dim()];
    for (idx, amp) in state.iter().enumerate() {
        if amp.is_zero() {
            continue;
        }
        let d = digits(idx, &dims);
        let anc: Vec<usize> = ancillas.iter().map(|&k| d[k]).collect();
        match &anc_value {
            None => anc_value = Some(anc),
            Some(v) if *v != anc => return Err("ancilla left entangled with the data".into()),
            _ => {}
        }
        let k = data.iter().fold(0, |acc, &r| acc * dims[r] + d[r]);
        out[k] = amp.clone();
    }
    Ok(out)
}

/// Exact composite map; every measurement branch must realise the same unitary.
pub fn channel_matrix(c: &Circuit) -> Result<Channel> {
    c.validate()?;
    let d = c.data_dim();
    let mut per_path: BTreeMap<Vec<(String, u32)>, Matrix> = BTreeMap::new();
    for k in 0..d {
        let mut e = vec![Cyclotomic::zero(); d];
        e[k] = Cyclotomic::one();
        for b in enumerate_branches(c, &Input::Exact(e))? {
            let col = match reduce_to_data(c, &b.state) {
                Ok(v) => v,
                Err(reason) => return Ok(Channel::NonUnitary { witness: k, reason }),
            };
            let m = per_path.entry(b.outcomes).or_insert_with(|| Matrix::zeros(d, d));
            for (i, v) in col.into_iter().enumerate() {
                m.set(i, k, v);
            }
        }
    }
    let mut reference: Option<(Matrix, Cyclotomic)> = None;
    for (path, m) in &per_path {
        let gram = &m.adjoint() * m;
        let weight = gram.get(0, 0).clone();
        if let Some(k) = (0..d).find(|&k| gram.row(k).iter().enumerate().any(|(j, v)| if j == k { *v != weight } else { !v.is_zero() })) {
            return Ok(Channel::NonUnitary {
                witness: k,
                reason: format!("branch {path:?} does not act as a scaled unitary"),
            });
        }
        match &reference {
            None => reference = Some((m.clone(), weight)),
            Some((r, _)) => {
                if m.proportionality(r).is_none() {
                    let i0 = (0..d).find(|&i| !r.get(i, 0).is_zero()).expect("nonzero column");
                    let lambda = m.get(i0, 0) / r.get(i0, 0);
                    let k = (0..d)
                        .find(|&k| (0..d).any(|i| *m.get(i, k) != r.get(i, k) * &lambda))
                        .unwrap_or(0);
                    return Ok(Channel::NonUnitary {
                        witness: k,
                        reason: format!("branch {path:?} differs from the other branches"),
                    });
                }
            }
        }
    }
    let (m, weight) = reference.ok_or_else(|| Error::InvalidInput("circuit has no branches".into()))?;
    let r = weight
        .as_rational()
        .ok_or_else(|| Error::InvalidInput("branch weight is not rational".into()))?;
    let scale = Cyclotomic::sqrt_rational(r).expect("non-negative").inv().expect("nonzero");
    Ok(Channel::Unitary(m.scale(&scale)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{sum_matrix, sum_protocol};

    fn single(instructions: serde_json::Value) -> Circuit {
        serde_json::from_value(serde_json::json!({
            "registers": [{"name": "q", "dim": 3, "boundary": "e"}],
            "instructions": instructions
        }))
        .unwrap()
    }

    #[test]
    fn json_schema_round_trip() {
        let c = sum_protocol(true);
        let s = serde_json::to_string(&c).unwrap();
        assert!(s.contains(r#""if":"j""#) && s.contains(r#""schema":"gbl/1""#));
        let back: Circuit = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn empty_circuit_returns_input() {
        let c = single(serde_json::json!([]));
        let r = run(&c, &Input::Basis(vec![2]), 3, 1, false).unwrap();
        assert!(r.shots.iter().all(|s| s.basis_out == Some(vec![2])));
        assert_eq!(channel_matrix(&c).unwrap(), Channel::Unitary(Matrix::identity(3)));
    }

    #[test]
    fn x_moves_zero_to_one() {
        let c = single(serde_json::json!([{"gate": "X3", "on": ["q"]}]));
        let r = run(&c, &Input::Basis(vec![0]), 5, 9, false).unwrap();
        assert!(r.shots.iter().all(|s| s.basis_out == Some(vec![1])));
    }

    #[test]
    fn four_hadamards() {
        let c = single(serde_json::json!([
            {"gate": "H3", "on": ["q"]}, {"gate": "H3", "on": ["q"]},
            {"gate": "H3", "on": ["q"]}, {"gate": "H3", "on": ["q"]}
        ]));
        assert_eq!(channel_matrix(&c).unwrap(), Channel::Unitary(Matrix::identity(3)));
    }

    #[test]
    fn measurement_without_correction_diverges() {
        let c = single(serde_json::json!([
            {"gate": "H3", "on": ["q"]},
            {"measure": "q", "basis": "charge", "bind": "k"}
        ]));
        assert!(matches!(channel_matrix(&c).unwrap(), Channel::NonUnitary { .. }));
    }

    #[test]
    fn sum_protocol_channel() {
        assert_eq!(channel_matrix(&sum_protocol(true)).unwrap(), Channel::Unitary(sum_matrix()));
        assert!(matches!(
            channel_matrix(&sum_protocol(false)).unwrap(),
            Channel::NonUnitary { .. }
        ));
    }

    #[test]
    fn sum_protocol_shots() {
        let r = run(&sum_protocol(true), &Input::Basis(vec![2, 1]), 100, 42, false).unwrap();
        for s in &r.shots {
            assert_eq!(&s.basis_out.as_ref().unwrap()[..2], &[2, 0]);
            for probs in &s.branch_probs {
                assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-10);
            }
        }
        let again = run(&sum_protocol(true), &Input::Basis(vec![2, 1]), 100, 42, false).unwrap();
        assert_eq!(serde_json::to_string(&r).unwrap(), serde_json::to_string(&again).unwrap());
    }

    #[test]
    fn exact_shot_matches_channel() {
        let r = run_exact(&sum_protocol(true), &Input::Basis(vec![1, 1]), 5).unwrap();
        let j = r.outcomes["j"] as usize;
        // ctrl = 1, tgt = 2, ancilla collapsed to j
        let mut want = vec![Cyclotomic::zero(); 27];
        want[9 + 2 * 3 + j] = Cyclotomic::one();
        assert_eq!(r.state, want);
    }

    #[test]
    fn validation_errors() {
        let bad_gate = single(serde_json::json!([{"gate": "X3", "on": ["q"]}, {"gate": "Y3", "on": ["q"]}]));
        assert!(matches!(bad_gate.validate(), Err(Error::CircuitValidation { index: 1, .. })));
        let unbound = single(serde_json::json!([{"if": "k", "eq": 1, "gate": "X3", "on": ["q"]}]));
        assert!(matches!(unbound.validate(), Err(Error::CircuitValidation { index: 0, .. })));
        let arity = single(serde_json::json!([{"gate": "SUM3", "on": ["q"]}]));
        assert!(matches!(arity.validate(), Err(Error::CircuitValidation { index: 0, .. })));
        let same_type: Circuit = serde_json::from_value(serde_json::json!({
            "registers": [{"name": "a", "dim": 3, "boundary": "e"}, {"name": "b", "dim": 3, "boundary": "e"}],
            "instructions": [{"gate": "SUM3", "on": ["a", "b"]}]
        }))
        .unwrap();
        assert!(matches!(same_type.validate(), Err(Error::CircuitValidation { index: 0, .. })));
    }

    #[test]
    fn charge_basis_matches_loop_projectors() {
        use crate::charge::{charge_projector, CurveLabel};
        use std::sync::Arc;
        let t = Arc::new(crate::theory::build_theory(3).unwrap());
        let gs = Arc::new(crate::boundary::GroundSpace::from_names(&t, &["e", "e"]).unwrap());
        let regs = crate::boundary::qudit_registers(&gs, &[(1, 2)]).unwrap();
        let charge = basis_projectors("charge", 3).unwrap();
        // the loop around hole 1 sees the charge ē carried there, so P^(a) selects label −a
        for a in 0..3u32 {
            let p = charge_projector(&gs, a, CurveLabel::Loop { hole: 1 }).unwrap();
            assert_eq!(regs.to_register_basis(&p.projector.matrix), charge[((3 - a) % 3) as usize]);
        }
    }

    #[test]
    fn seeds_split() {
        assert_ne!(shot_seed(1, 0), shot_seed(1, 1));
        assert_ne!(shot_seed(1, 0), shot_seed(2, 0));
    }
}
