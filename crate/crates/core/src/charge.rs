//! Wilson operator basis, topological charge projectors and the tunneling Hamiltonian.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::boundary::GroundSpace;
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::theory::{AnyonLabel, TheoryData};
use crate::wilson::{tunnel, wilson_loop, OperatorMatrix, Provenance};

/// A simple closed loop around one hole, or a simple arc between two holes (1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CurveLabel {
    Loop { hole: usize },
    Arc { from: usize, to: usize },
}

impl fmt::Display for CurveLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveLabel::Loop { hole } => write!(f, "loop:{hole}"),
            CurveLabel::Arc { from, to } => write!(f, "arc:{from},{to}"),
        }
    }
}

impl FromStr for CurveLabel {
    type Err = Error;

    /// `loop:2` or `arc:1,2`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("invalid curve `{s}` (expected loop:<i> or arc:<i>,<j>)"));
        let (kind, rest) = s.trim().split_once(':').ok_or_else(bad)?;
        let nums: Vec<usize> = rest
            .split(',')
            .map(|x| x.trim().parse().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        match (kind, nums.as_slice()) {
            ("loop", [h]) => Ok(CurveLabel::Loop { hole: *h }),
            ("arc", [i, j]) if i < j => Ok(CurveLabel::Arc { from: *i, to: *j }),
            _ => Err(bad()),
        }
    }
}

/// Basis of the Wilson operator algebra: every loop, plus arcs whose anyon can tunnel.
#[derive(Clone, Debug)]
pub struct WilsonAlgebraBasis {
    pub space: Arc<GroundSpace>,
    pub elements: Vec<(AnyonLabel, CurveLabel)>,
}

/// Anyons `a` with `a` condensing on hole `to` and `ā` on hole `from`.
pub fn arc_anyons(space: &GroundSpace, from: usize, to: usize) -> Result<Vec<AnyonLabel>> {
    let (src, dst) = (space.boundary(from)?, space.boundary(to)?);
    Ok(dst
        .condensed()
        .iter()
        .filter(|a| src.contains(&a.dual()))
        .copied()
        .collect())
}

pub fn wilson_basis(space: &Arc<GroundSpace>) -> WilsonAlgebraBasis {
    let n = space.holes();
    let mut elements = Vec::new();
    for hole in 1..=n {
        for a in space.theory().labels() {
            elements.push((*a, CurveLabel::Loop { hole }));
        }
    }
    for from in 1..=n {
        for to in from + 1..=n {
            for a in arc_anyons(space, from, to).expect("valid holes") {
                elements.push((a, CurveLabel::Arc { from, to }));
            }
        }
    }
    WilsonAlgebraBasis {
        space: space.clone(),
        elements,
    }
}

/// Single-layer theory C with D(Z_N) ≅ C ⊠ C̄.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingleLayer {
    pub n: u32,
    /// Twists θ_x for x in Z_N.
    pub twists: Vec<Cyclotomic>,
    /// Normalized S̃_{xa} = ω^{xa}/√N.
    pub s: Matrix,
}

/// Splits D(Z_N) for odd N into Z_N with twists ω^{x²(N−1)/2} and its mirror.
pub fn split_double_layer(t: &TheoryData) -> Result<SingleLayer> {
    let n = t.n();
    if n % 2 == 0 {
        return Err(Error::NotFactorizable(format!(
            "D(Z_{n}) has no modular Z_{n} layer: x ↦ ω^(x²/2) is not defined for even N"
        )));
    }
    let half = ((n - 1) / 2) as i64;
    let twists = (0..n as i64).map(|x| t.omega(x * x * half)).collect();
    let norm = Cyclotomic::inv_sqrt(n as u64);
    let s = Matrix::from_fn(n as usize, n as usize, |x, a| t.omega((x * a) as i64) * &norm);
    Ok(SingleLayer { n, twists, s })
}

/// Projector onto charge `a` through a curve, with its complement.
#[derive(Clone, Debug)]
pub struct ChargeMeasurement {
    pub charge: u32,
    pub curve: CurveLabel,
    pub projector: OperatorMatrix,
    pub complement: OperatorMatrix,
}

/// The operator `O_x` measured along a curve.
fn curve_operator(space: &Arc<GroundSpace>, x: u32, curve: CurveLabel) -> Result<OperatorMatrix> {
    let n = space.theory().n();
    match curve {
        CurveLabel::Loop { hole } => {
            space.check_hole(hole).map_err(|e| Error::InvalidCurve(e.to_string()))?;
            wilson_loop(space, AnyonLabel::new(n, x as i64, -(x as i64)), hole)
        }
        CurveLabel::Arc { from, to } => {
            let g = arc_generator(space, from, to)?;
            tunnel(space, g.pow(x as i64), from, to)
        }
    }
}

/// Generator of the tunnelable group on an arc, which must be cyclic of order N.
pub fn arc_generator(space: &GroundSpace, from: usize, to: usize) -> Result<AnyonLabel> {
    if from >= to {
        return Err(Error::InvalidCurve(format!("arc endpoints must satisfy i < j, got ({from},{to})")));
    }
    let n = space.theory().n();
    let group = arc_anyons(space, from, to).map_err(|e| Error::InvalidCurve(e.to_string()))?;
    group
        .iter()
        .find(|a| a.order() == n)
        .copied()
        .ok_or_else(|| {
            Error::InvalidCurve(format!(
                "only {} anyon(s) can tunnel from hole {from} to hole {to}; charge measurement needs a cyclic group of order {n}",
                group.len()
            ))
        })
}

/// P = Σ_x S̃_{0a} S̃*_{xa} O_x along `curve`, and 1 − P.
pub fn charge_projector(space: &Arc<GroundSpace>, a: u32, curve: CurveLabel) -> Result<ChargeMeasurement> {
    let layer = split_double_layer(space.theory())?;
    let n = layer.n;
    if a >= n {
        return Err(Error::InvalidInput(format!("charge {a} is not a label of Z_{n}")));
    }
    let dim = space.dim();
    let mut p = Matrix::zeros(dim, dim);
    for x in 0..n {
        let coeff = layer.s.get(0, a as usize) * layer.s.get(x as usize, a as usize).conj();
        p = &p + &curve_operator(space, x, curve)?.matrix.scale(&coeff);
    }
    let complement = &Matrix::identity(dim) - &p;
    let tag = |complement| Provenance::Tcm {
        charge: a,
        curve: curve.to_string(),
        complement,
    };
    Ok(ChargeMeasurement {
        charge: a,
        curve,
        projector: OperatorMatrix::new(space.clone(), p, tag(false)),
        complement: OperatorMatrix::new(space.clone(), complement, tag(true)),
    })
}

/// H = −t·W − t̄·W† for the Wilson operator of `a` along `curve`.
pub fn effective_hamiltonian(
    space: &Arc<GroundSpace>,
    a: AnyonLabel,
    curve: CurveLabel,
    t: &Cyclotomic,
) -> Result<OperatorMatrix> {
    let w = match curve {
        CurveLabel::Loop { hole } => wilson_loop(space, a, hole)?,
        CurveLabel::Arc { from, to } => tunnel(space, a, from, to)?,
    }
    .matrix;
    let h = &w.scale(&-t) - &w.adjoint().scale(&t.conj());
    Ok(OperatorMatrix::new(
        space.clone(),
        h,
        Provenance::Hamiltonian {
            anyon: a,
            curve: curve.to_string(),
        },
    ))
}

/// Result of a projective measurement. Outcome 0 is the projector, 1 the complement.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeasureOutcome {
    pub seed: u64,
    pub outcome: u8,
    pub prob: f64,
    #[serde(skip)]
    pub state: Vec<Complex64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

/// Born-rule probability `⟨ψ|P|ψ⟩` and the projected vector.
pub(crate) fn project(p: &Matrix, state: &[Complex64]) -> (f64, Vec<Complex64>) {
    let pm = p.to_complex();
    let v = nalgebra::DVector::from_column_slice(state);
    let out = pm * v;
    let prob = out.iter().map(|z| z.norm_sqr()).sum::<f64>();
    (prob, out.iter().copied().collect())
}

pub const DEGENERATE_NORM: f64 = 1e-12;

pub fn measure_with<R: Rng>(state: &[Complex64], m: &ChargeMeasurement, rng: &mut R) -> Result<(u8, f64, Vec<Complex64>, Option<String>)> {
    let norm: f64 = state.iter().map(|z| z.norm_sqr()).sum();
    if state.len() != m.projector.matrix.rows() {
        return Err(Error::InvalidInput(format!(
            "state has {} amplitudes but the space has dimension {}",
            state.len(),
            m.projector.matrix.rows()
        )));
    }
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidInput(format!("state norm {norm} is not 1")));
    }
    let branches = [project(&m.projector.matrix, state), project(&m.complement.matrix, state)];
    let u: f64 = rng.gen();
    let mut outcome = if u < branches[0].0 { 0 } else { 1 };
    let mut warning = None;
    if branches[outcome].0 < DEGENERATE_NORM {
        warning = Some(format!("branch {outcome} has norm below {DEGENERATE_NORM}; took the other branch"));
        outcome = 1 - outcome;
    }
    let (prob, v) = &branches[outcome];
    let scale = 1.0 / prob.sqrt();
    Ok((outcome as u8, *prob, v.iter().map(|z| z * scale).collect(), warning))
}

/// Samples P versus 1 − P; deterministic for a given seed.
pub fn measure(state: &[Complex64], m: &ChargeMeasurement, seed: u64) -> Result<MeasureOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (outcome, prob, state, warning) = measure_with(state, m, &mut rng)?;
    Ok(MeasureOutcome {
        seed,
        outcome,
        prob,
        state,
        warning,
    })
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

    const ARC: CurveLabel = CurveLabel::Arc { from: 1, to: 2 };

    #[test]
    fn basis_counts() {
        let t = Arc::new(build_theory(3).unwrap());
        assert_eq!(wilson_basis(&qutrit()).elements.len(), 21);
        let em = Arc::new(GroundSpace::from_names(&t, &["e", "m"]).unwrap());
        let arcs: Vec<_> = wilson_basis(&em)
            .elements
            .into_iter()
            .filter(|(_, c)| matches!(c, CurveLabel::Arc { .. }))
            .collect();
        assert_eq!(arcs, vec![(AnyonLabel::vacuum(3), ARC)]);
        let one = Arc::new(GroundSpace::from_names(&t, &["e"]).unwrap());
        assert!(wilson_basis(&one).elements.iter().all(|(_, c)| matches!(c, CurveLabel::Loop { .. })));
    }

    #[test]
    fn single_layer_data() {
        let layer = split_double_layer(&build_theory(3).unwrap()).unwrap();
        for a in 0..3 {
            assert_eq!(*layer.s.get(0, a), Cyclotomic::inv_sqrt(3));
        }
        let w = |k| Cyclotomic::root_of_unity(3, k);
        assert_eq!(layer.twists, vec![w(0), w(1), w(1)]);
        assert!(layer.s.is_unitary());
        let row: Cyclotomic = (0..3).map(|a| layer.s.get(0, a) * layer.s.get(0, a).conj()).sum();
        assert!(row.is_one());
        assert!(matches!(split_double_layer(&build_theory(2).unwrap()), Err(Error::NotFactorizable(_))));
    }

    #[test]
    fn vacuum_arc_projector_is_third_of_ones() {
        let p = charge_projector(&qutrit(), 0, ARC).unwrap();
        assert_eq!(p.projector.matrix, Matrix::from_fn(3, 3, |_, _| Cyclotomic::ratio(1, 3)));
    }

    #[test]
    fn loop_projector_selects_hole_charge() {
        let gs = qutrit();
        for a in 0..3u32 {
            let p = charge_projector(&gs, a, CurveLabel::Loop { hole: 1 }).unwrap().projector.matrix;
            for (k, l) in gs.basis().iter().enumerate() {
                assert_eq!(p.get(k, k).is_one(), l[0].a1 == a);
            }
            assert!(p.is_diagonal());
        }
    }

    #[test]
    fn invalid_curves() {
        let t = Arc::new(build_theory(3).unwrap());
        let em = Arc::new(GroundSpace::from_names(&t, &["e", "m"]).unwrap());
        assert!(matches!(charge_projector(&em, 0, ARC), Err(Error::InvalidCurve(_))));
        assert!(matches!(
            charge_projector(&qutrit(), 0, CurveLabel::Loop { hole: 3 }),
            Err(Error::InvalidCurve(_))
        ));
        assert!("arc:2,1".parse::<CurveLabel>().is_err());
        assert_eq!("loop:2".parse::<CurveLabel>().unwrap(), CurveLabel::Loop { hole: 2 });
    }

    #[test]
    fn hamiltonian_spectra() {
        let gs = qutrit();
        let e = AnyonLabel::charge(3);
        let h = effective_hamiltonian(&gs, e, ARC, &Cyclotomic::one()).unwrap().matrix;
        assert!(h.is_hermitian());
        let p = h.characteristic_polynomial();
        assert_eq!(p.root_multiplicity(&Cyclotomic::one()), 2);
        assert_eq!(p.root_multiplicity(&Cyclotomic::from_integer(-2)), 1);
        assert!(effective_hamiltonian(&gs, e, ARC, &Cyclotomic::zero()).unwrap().matrix.is_zero());
        // a phase outside ω^k·R splits all three levels: 0 and ±√3
        let hi = effective_hamiltonian(&gs, e, ARC, &Cyclotomic::root_of_unity(4, 1)).unwrap().matrix;
        let pi = hi.characteristic_polynomial();
        assert_eq!(pi.distinct_root_count(), 3);
        for r in [Cyclotomic::zero(), Cyclotomic::sqrt_int(3), -Cyclotomic::sqrt_int(3)] {
            assert_eq!(pi.root_multiplicity(&r), 1);
        }
    }

    #[test]
    fn omega_phase_permutes_levels() {
        let gs = qutrit();
        let h = effective_hamiltonian(&gs, AnyonLabel::charge(3), ARC, &Cyclotomic::root_of_unity(3, 1))
            .unwrap()
            .matrix;
        let p = h.characteristic_polynomial();
        assert_eq!(p.root_multiplicity(&Cyclotomic::one()), 2);
        assert_eq!(p.distinct_root_count(), 2);
    }

    #[test]
    fn measurement_statistics() {
        let gs = qutrit();
        let regs = qudit_registers(&gs, &[(1, 2)]).unwrap();
        let m = charge_projector(&gs, 0, ARC).unwrap();
        let s = 1.0 / 3f64.sqrt();
        let w = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        // states given in register order (1, e, ē) and moved to the ground-space basis
        let to_space = |v: [Complex64; 3]| -> Vec<Complex64> {
            (0..3).map(|k| v[regs.register_index(k).unwrap()]).collect()
        };
        let flat = to_space([Complex64::new(s, 0.0); 3]);
        for seed in 0..20 {
            let r = measure(&flat, &m, seed).unwrap();
            assert_eq!(r.outcome, 0);
            assert!((r.prob - 1.0).abs() < 1e-12);
        }
        let twisted = to_space([Complex64::new(s, 0.0), w * s, w.conj() * s]);
        for seed in 0..20 {
            assert_eq!(measure(&twisted, &m, seed).unwrap().outcome, 1);
        }
        let basis = to_space([Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)]);
        let (p0, _) = project(&m.projector.matrix, &basis);
        let (p1, _) = project(&m.complement.matrix, &basis);
        assert!((p0 - 1.0 / 3.0).abs() < 1e-12 && (p1 - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(measure(&basis, &m, 7).unwrap(), measure(&basis, &m, 7).unwrap());
    }
}
