mod args;

use std::fs;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context};
use clap::Parser;
use num_complex::Complex64;
use serde_json::json;

use args::{BoundaryCommand, CircuitCommand, Cli, Command, EmitSelector, Format, GateCommand, OpCommand, RunArgs, SpaceArgs};
use gbl_core::boundary::{build_ground_space, enumerate_lagrangians, GroundSpace, SpaceDescriptor};
use gbl_core::braid::{pure_braid_image, BraidLetter};
use gbl_core::charge::{charge_projector, CurveLabel};
use gbl_core::circuit::{run, Circuit, Input, RunRecord};
use gbl_core::gates::{compile, CompiledGate, GateAction, GateName};
use gbl_core::theory::{build_theory, verify_modular_relations, AnyonLabel};
use gbl_core::wilson::{tunnel, wilson_loop, OperatorMatrix};

/// Why a command did not succeed.
enum Failure {
    /// Bad arguments or an operation that cannot be performed (exit 2).
    Usage(anyhow::Error),
    /// Verification ran but some check failed (exit 1).
    ChecksFailed,
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

impl From<gbl_core::Error> for Failure {
    fn from(e: gbl_core::Error) -> Self {
        Failure::Usage(e.into())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::ChecksFailed) => ExitCode::from(1),
        Err(Failure::Usage(e)) => {
            match e.downcast_ref::<gbl_core::Error>() {
                Some(core) => eprintln!("error[{}]: {e}", core.kind()),
                None => eprintln!("error: {e:#}"),
            }
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: &Cli) -> Result<String, Failure> {
    let f = cli.format;
    Ok(match &cli.command {
        Command::Theory(a) | Command::Emit { selector: EmitSelector::Theory(a) } => theory(a.n, f)?,
        Command::Boundary { command: BoundaryCommand::List(a) } | Command::Emit { selector: EmitSelector::Boundary(a) } => {
            boundaries(a.n, f)?
        }
        Command::Space(a) | Command::Emit { selector: EmitSelector::Space(a) } => space(a, f)?,
        Command::Op { op } | Command::Emit { selector: EmitSelector::Op { op } } => operator(op, f)?,
        Command::Gate { command: GateCommand::Emit { name } } | Command::Emit { selector: EmitSelector::Gate { name } } => {
            gate(name, f)?
        }
        Command::Circuit { command: CircuitCommand::Run(a) } => circuit(a, f)?,
        Command::Verify { scope } => return verify(scope, f),
    })
}

/// Closest candidate by Jaro-Winkler similarity, if any is reasonably close.
fn nearest<'a>(word: &str, candidates: &[&'a str]) -> Option<&'a str> {
    candidates
        .iter()
        .map(|c| (strsim::jaro_winkler(&word.to_lowercase(), &c.to_lowercase()), *c))
        .filter(|(score, _)| *score > 0.7)
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .map(|(_, c)| c)
}

fn unknown(kind: &str, word: &str, candidates: &[&str]) -> anyhow::Error {
    let mut msg = format!("unknown {kind} `{word}` (known: {})", candidates.join(", "));
    if let Some(c) = nearest(word, candidates) {
        msg.push_str(&format!("\nhint: did you mean `{c}`?"));
    }
    anyhow!(msg)
}

fn to_json(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn indent(block: &str) -> String {
    block.lines().map(|l| format!("  {l}\n")).collect()
}

fn theory(n: u32, f: Format) -> anyhow::Result<String> {
    let t = build_theory(n)?;
    let report = verify_modular_relations(&t);
    Ok(match f {
        Format::Json => {
            let mut v = serde_json::to_value(&t)?;
            v["relations"] = serde_json::to_value(&report.checks)?;
            to_json(&v)
        }
        Format::Pretty => {
            let labels: Vec<String> = t.labels().iter().map(ToString::to_string).collect();
            let twists: Vec<String> = t.twists().iter().map(|x| x.pretty(n)).collect();
            let relations: Vec<String> = report
                .checks
                .iter()
                .map(|c| format!("{} {}", c.relation, if c.pass { "ok" } else { "FAILED" }))
                .collect();
            format!(
                "D(Z_{n}): {} anyons, total quantum dimension {}\nlabels: {}\nS (unnormalized):\n{}T = diag({})\nrelations: {}\n",
                labels.len(),
                t.global_dimension().pretty(n),
                labels.join(" "),
                indent(&t.s_matrix().pretty(n)),
                twists.join(", "),
                relations.join(", ")
            )
        }
    })
}

fn boundaries(n: u32, f: Format) -> anyhow::Result<String> {
    let t = Arc::new(build_theory(n)?);
    let all = enumerate_lagrangians(&t);
    Ok(match f {
        Format::Json => to_json(&json!({
            "schema": gbl_core::SCHEMA,
            "N": n,
            "algebras": all
                .iter()
                .map(|a| json!({"name": a.name(), "display": a.display_name(), "condensed": a.condensed()}))
                .collect::<Vec<_>>(),
        })),
        Format::Pretty => all
            .iter()
            .map(|a| format!("{:<4} {}\n", a.name(), a.display_name()))
            .collect(),
    })
}

fn load_space(a: &SpaceArgs) -> anyhow::Result<Arc<GroundSpace>> {
    if let Some(path) = &a.space {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let d: SpaceDescriptor = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        return Ok(Arc::new(d.rebuild()?));
    }
    if a.boundaries.is_empty() {
        bail!("no holes given; pass --boundaries (e.g. --boundaries e,e) or --space <file>");
    }
    let t = Arc::new(build_theory(a.n)?);
    let known = enumerate_lagrangians(&t);
    let names: Vec<&str> = known.iter().map(|x| x.name()).collect();
    let picked = a
        .boundaries
        .iter()
        .map(|b| {
            known
                .iter()
                .find(|x| x.name() == b || x.display_name() == *b)
                .cloned()
                .ok_or_else(|| unknown(&format!("boundary type for D(Z_{})", a.n), b, &names))
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    Ok(Arc::new(build_ground_space(&picked)?))
}

fn labeling(gs: &GroundSpace, k: usize) -> String {
    let l: Vec<String> = gs.basis()[k].iter().map(ToString::to_string).collect();
    format!("({})", l.join(", "))
}

fn space(a: &SpaceArgs, f: Format) -> anyhow::Result<String> {
    let gs = load_space(a)?;
    Ok(match f {
        Format::Json => to_json(&gs.descriptor()),
        Format::Pretty => {
            let d = gs.descriptor();
            let mut out = format!("D(Z_{}) holes [{}]: dim {}\n", d.n, d.boundaries.join(","), d.dim);
            for k in 0..gs.dim() {
                out.push_str(&format!("  |{k}⟩ = {}\n", labeling(&gs, k)));
            }
            out
        }
    })
}

fn anyon(gs: &GroundSpace, s: &str) -> anyhow::Result<AnyonLabel> {
    let a = AnyonLabel::parse(gs.theory().n(), s)?;
    gs.theory().check_label(&a)?;
    Ok(a)
}

/// `i,j` or `i,j:-1`.
fn braid_letter(s: &str) -> anyhow::Result<BraidLetter> {
    let bad = || anyhow!("invalid braid letter `{s}` (expected i,j or i,j:-1)");
    let (pair, exp) = match s.split_once(':') {
        Some((p, e)) => (p, e.trim().parse::<i32>().map_err(|_| bad())?),
        None => (s, 1),
    };
    let (i, j) = pair.split_once(',').ok_or_else(bad)?;
    let i = i.trim().parse().map_err(|_| bad())?;
    let j = j.trim().parse().map_err(|_| bad())?;
    Ok(BraidLetter { pair: (i, j), exp })
}

fn operator(op: &OpCommand, f: Format) -> anyhow::Result<String> {
    let o: OperatorMatrix = match op {
        OpCommand::Tunnel { space, anyon: a, from, to } => {
            let gs = load_space(space)?;
            tunnel(&gs, anyon(&gs, a)?, *from, *to)?
        }
        OpCommand::Loop { space, anyon: a, hole } => {
            let gs = load_space(space)?;
            wilson_loop(&gs, anyon(&gs, a)?, *hole)?
        }
        OpCommand::Braid { space, word } => {
            let gs = load_space(space)?;
            let letters = word.iter().map(|w| braid_letter(w)).collect::<anyhow::Result<Vec<_>>>()?;
            pure_braid_image(&gs, &letters)?
        }
        OpCommand::Tcm { space, charge, curve } | OpCommand::TcmComplement { space, charge, curve } => {
            let gs = load_space(space)?;
            let m = charge_projector(&gs, *charge, curve.parse::<CurveLabel>()?)?;
            if matches!(op, OpCommand::Tcm { .. }) {
                m.projector
            } else {
                m.complement
            }
        }
    };
    Ok(match f {
        Format::Json => to_json(&o.to_json()),
        Format::Pretty => {
            let n = o.space.theory().n();
            let d = o.space.descriptor();
            format!(
                "{} on D(Z_{n}) holes [{}], dim {}\n{}unitary: {}\n",
                serde_json::to_string(&o.provenance)?,
                d.boundaries.join(","),
                d.dim,
                indent(&o.matrix.pretty(n)),
                if o.matrix.is_unitary() { "yes" } else { "no" }
            )
        }
    })
}

fn gate_by_name(name: &str) -> anyhow::Result<CompiledGate> {
    let names: Vec<&str> = GateName::ALL.iter().map(GateName::as_str).collect();
    let g: GateName = name.parse().map_err(|_| unknown("gate", name, &names))?;
    Ok(compile(g)?)
}

fn gate(name: &str, f: Format) -> anyhow::Result<String> {
    let g = gate_by_name(name)?;
    Ok(match f {
        Format::Json => to_json(&g.to_json()),
        Format::Pretty => {
            let d = g.space.descriptor();
            let dims: Vec<String> = g.registers.dims().iter().map(ToString::to_string).collect();
            let mut out = format!(
                "{} on D(Z_{}) holes [{}], registers {}\n",
                g.name,
                d.n,
                d.boundaries.join(","),
                dims.join("x")
            );
            out.push_str("recipe:\n");
            for step in &g.recipe {
                out.push_str(&format!("  {}\n", serde_json::to_string(step)?));
            }
            out.push_str(&format!("phase: {}\n", g.phase.pretty(3)));
            match &g.action {
                GateAction::Unitary(m) => out.push_str(&format!("matrix:\n{}", indent(&m.pretty(3)))),
                GateAction::Measurement { projector, complement } => {
                    out.push_str(&format!("outcome 0:\n{}", indent(&projector.pretty(3))));
                    out.push_str(&format!("outcome 1:\n{}", indent(&complement.pretty(3))));
                }
            }
            out
        }
    })
}

fn run_input(a: &RunArgs, c: &Circuit) -> anyhow::Result<Input> {
    if let Some(text) = &a.amplitudes {
        let raw: Vec<[f64; 2]> = serde_json::from_str(text).context("--amplitudes must be JSON [[re, im], ...]")?;
        return Ok(Input::Amplitudes(raw.iter().map(|z| Complex64::new(z[0], z[1])).collect()));
    }
    Ok(Input::Basis(
        a.input.clone().unwrap_or_else(|| vec![0; c.data_registers().len()]),
    ))
}

fn circuit(a: &RunArgs, f: Format) -> anyhow::Result<String> {
    let text = fs::read_to_string(&a.file).with_context(|| format!("reading {}", a.file.display()))?;
    let c: Circuit = serde_json::from_str(&text).with_context(|| format!("parsing {}", a.file.display()))?;
    let record: RunRecord = run(&c, &run_input(a, &c)?, a.shots, a.seed, a.emit_state)?;
    Ok(match f {
        Format::Json => to_json(&record),
        Format::Pretty => {
            let names: Vec<&str> = c.registers.iter().map(|r| r.name.as_str()).collect();
            let mut out = format!("seed {}, {} shot(s), registers [{}]\n", record.seed, record.shots.len(), names.join(","));
            for s in &record.shots {
                let outcomes: Vec<String> = s.outcomes.iter().map(|(k, v)| format!("{k}={v}")).collect();
                let basis = s.basis_out.as_ref().map_or("superposition".to_string(), |b| {
                    format!("|{}⟩", b.iter().map(ToString::to_string).collect::<Vec<_>>().join(","))
                });
                out.push_str(&format!("shot {}: {} -> {basis}\n", s.shot, outcomes.join(" ")));
                for w in &s.warnings {
                    out.push_str(&format!("  warning: {w}\n"));
                }
            }
            out
        }
    })
}

fn verify(scope: &str, f: Format) -> Result<String, Failure> {
    let ids = gbl_verify::check_ids();
    if scope != "all" && !ids.contains(&scope) {
        let mut choices = ids.clone();
        choices.push("all");
        return Err(unknown("check", scope, &choices).into());
    }
    let report = gbl_verify::verify(scope)?;
    let out = match f {
        Format::Json => to_json(&report),
        Format::Pretty => report
            .checks
            .iter()
            .map(|c| {
                let status = if c.pass { "PASS" } else { "FAIL" };
                let mut line = format!("{status} {} ({}): {}\n", c.id, c.anchor, c.actual);
                if !c.pass {
                    line.push_str(&format!("     expected: {}\n", c.expected));
                }
                line
            })
            .collect(),
    };
    print!("{out}");
    if report.all_pass() {
        Ok(String::new())
    } else {
        Err(Failure::ChecksFailed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hints_pick_the_closest_name() {
        assert_eq!(nearest("CZ", &["CZ3", "SUM3", "X3"]), Some("CZ3"));
        assert_eq!(nearest("sigma2", &["sigma22", "gsd"]), Some("sigma22"));
        assert_eq!(nearest("zzzz", &["e", "m"]), None);
    }

    #[test]
    fn braid_letters() {
        assert_eq!(braid_letter("2,3").unwrap(), BraidLetter { pair: (2, 3), exp: 1 });
        assert_eq!(braid_letter("1, 4:-1").unwrap(), BraidLetter { pair: (1, 4), exp: -1 });
        assert!(braid_letter("2;3").is_err());
    }
}
