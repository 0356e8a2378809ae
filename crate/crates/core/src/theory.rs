//! Modular data of the Z_N toric code D(Z_N).

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cyclotomic::{superscript, Cyclotomic};
use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Anyon `e^{a1} m^{a2}` of D(Z_N). Ordered by `(a1, a2)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AnyonLabel {
    pub a1: u32,
    pub a2: u32,
    pub n: u32,
}

impl AnyonLabel {
    /// Label with components reduced mod `n`.
    pub fn new(n: u32, a1: i64, a2: i64) -> Self {
        let m = n as i64;
        AnyonLabel {
            a1: a1.rem_euclid(m) as u32,
            a2: a2.rem_euclid(m) as u32,
            n,
        }
    }

    pub fn vacuum(n: u32) -> Self {
        Self::new(n, 0, 0)
    }

    pub fn charge(n: u32) -> Self {
        Self::new(n, 1, 0)
    }

    pub fn flux(n: u32) -> Self {
        Self::new(n, 0, 1)
    }

    pub fn is_vacuum(&self) -> bool {
        self.a1 == 0 && self.a2 == 0
    }

    pub fn dual(&self) -> Self {
        Self::new(self.n, -(self.a1 as i64), -(self.a2 as i64))
    }

    /// Fusion `a × b`; labels must share the modulus.
    pub fn fuse(&self, other: &AnyonLabel) -> Result<AnyonLabel> {
        if self.n != other.n {
            return Err(Error::TheoryMismatch(format!(
                "cannot fuse a D(Z_{}) label with a D(Z_{}) label",
                self.n, other.n
            )));
        }
        Ok(self.mul(other))
    }

    /// Fusion without the modulus check, for labels already known to agree.
    pub(crate) fn mul(&self, other: &AnyonLabel) -> AnyonLabel {
        Self::new(self.n, (self.a1 + other.a1) as i64, (self.a2 + other.a2) as i64)
    }

    pub fn pow(&self, k: i64) -> Self {
        Self::new(self.n, self.a1 as i64 * k, self.a2 as i64 * k)
    }

    /// Additive order in Z_N × Z_N.
    pub fn order(&self) -> u32 {
        (1..=self.n).find(|&k| self.pow(k as i64).is_vacuum()).unwrap()
    }

    /// Parses `a1,a2`, or a monomial such as `1`, `e`, `m2`, `e²m`, `ebar`.
    pub fn parse(n: u32, s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((x, y)) = s.split_once(',') {
            let parse = |t: &str| {
                t.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::Parse(format!("invalid anyon component `{t}`")))
            };
            return Ok(Self::new(n, parse(x)?, parse(y)?));
        }
        if s == "1" || s == "0" || s.eq_ignore_ascii_case("vacuum") {
            return Ok(Self::vacuum(n));
        }
        let bad = || Error::Parse(format!("invalid anyon label `{s}`"));
        let (mut a1, mut a2) = (0i64, 0i64);
        let mut chars = s.chars().peekable();
        let mut seen = false;
        while let Some(c) = chars.next() {
            let slot = match c {
                'e' => &mut a1,
                'm' => &mut a2,
                _ => return Err(bad()),
            };
            let mut exp = String::new();
            let mut bar = false;
            while let Some(&d) = chars.peek() {
                if let Some(v) = "⁰¹²³⁴⁵⁶⁷⁸⁹".chars().position(|x| x == d) {
                    exp.push(char::from_digit(v as u32, 10).unwrap());
                } else if d.is_ascii_digit() {
                    exp.push(d);
                } else if d == '\u{0304}' {
                    bar = true;
                } else if d == 'b' {
                    // "bar" suffix
                    let rest: String = chars.clone().take(3).collect();
                    if rest != "bar" {
                        return Err(bad());
                    }
                    chars.nth(2);
                    bar = true;
                    continue;
                } else {
                    break;
                }
                chars.next();
            }
            let mut k: i64 = if exp.is_empty() { 1 } else { exp.parse().map_err(|_| bad())? };
            if bar {
                k = -k;
            }
            *slot += k;
            seen = true;
        }
        if !seen {
            return Err(bad());
        }
        Ok(Self::new(n, a1, a2))
    }
}

impl fmt::Display for AnyonLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_vacuum() {
            return write!(f, "1");
        }
        let part = |sym: char, k: u32| match k {
            0 => String::new(),
            1 => sym.to_string(),
            _ => format!("{sym}{}", superscript(k)),
        };
        write!(f, "{}{}", part('e', self.a1), part('m', self.a2))
    }
}

impl fmt::Debug for AnyonLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a1, self.a2)
    }
}

impl Serialize for AnyonLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.a1, self.a2].serialize(s)
    }
}

/// Six-index associator table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FSymbols {
    /// Every symbol equals 1.
    Trivial,
    /// Explicit entries; missing keys read as 1.
    Table(HashMap<[AnyonLabel; 6], Cyclotomic>),
}

impl FSymbols {
    pub fn get(&self, key: [AnyonLabel; 6]) -> Cyclotomic {
        match self {
            FSymbols::Trivial => Cyclotomic::one(),
            FSymbols::Table(t) => t.get(&key).cloned().unwrap_or_else(Cyclotomic::one),
        }
    }
}

/// Fusion, braiding and modular data of an abelian theory on Z_N × Z_N labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoryData {
    n: u32,
    labels: Vec<AnyonLabel>,
    s: Matrix,
    t: Vec<Cyclotomic>,
    r: Matrix,
    f: FSymbols,
    dims: Vec<Cyclotomic>,
}

/// D(Z_N) modular data.
pub fn build_theory(n: u32) -> Result<TheoryData> {
    if n < 2 {
        return Err(Error::InvalidModulus(n));
    }
    let labels: Vec<AnyonLabel> = (0..n)
        .flat_map(|a1| (0..n).map(move |a2| AnyonLabel { a1, a2, n }))
        .collect();
    let w = |k: i64| Cyclotomic::root_of_unity(n, k);
    let count = labels.len();
    let s = Matrix::from_fn(count, count, |i, j| {
        let (a, b) = (labels[i], labels[j]);
        w(-((a.a2 * b.a1 + a.a1 * b.a2) as i64))
    });
    let r = Matrix::from_fn(count, count, |i, j| w((labels[i].a2 * labels[j].a1) as i64));
    let t = labels.iter().map(|a| w((a.a1 * a.a2) as i64)).collect();
    Ok(TheoryData {
        n,
        dims: vec![Cyclotomic::one(); count],
        labels,
        s,
        t,
        r,
        f: FSymbols::Trivial,
    })
}

impl TheoryData {
    /// Assembles user-supplied data on the Z_N × Z_N label set.
    pub fn from_parts(n: u32, s: Matrix, t: Vec<Cyclotomic>, r: Matrix, f: FSymbols) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidModulus(n));
        }
        let count = (n * n) as usize;
        if s.rows() != count || s.cols() != count || r.rows() != count || r.cols() != count || t.len() != count {
            return Err(Error::InvalidInput(format!("modular data must be indexed by {count} labels")));
        }
        let labels = (0..n)
            .flat_map(|a1| (0..n).map(move |a2| AnyonLabel { a1, a2, n }))
            .collect();
        Ok(TheoryData {
            n,
            labels,
            s,
            t,
            r,
            f,
            dims: vec![Cyclotomic::one(); count],
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn labels(&self) -> &[AnyonLabel] {
        &self.labels
    }

    pub fn vacuum(&self) -> AnyonLabel {
        AnyonLabel::vacuum(self.n)
    }

    pub fn index(&self, a: &AnyonLabel) -> usize {
        (a.a1 * self.n + a.a2) as usize
    }

    /// ζ_N^k.
    pub fn omega(&self, k: i64) -> Cyclotomic {
        Cyclotomic::root_of_unity(self.n, k)
    }

    pub fn check_label(&self, a: &AnyonLabel) -> Result<()> {
        if a.n != self.n {
            return Err(Error::TheoryMismatch(format!(
                "label {a} belongs to D(Z_{}) but the theory is D(Z_{})",
                a.n, self.n
            )));
        }
        Ok(())
    }

    pub fn fuse(&self, a: &AnyonLabel, b: &AnyonLabel) -> Result<AnyonLabel> {
        self.check_label(a)?;
        self.check_label(b)?;
        a.fuse(b)
    }

    /// Unnormalized S entry.
    pub fn s(&self, a: &AnyonLabel, b: &AnyonLabel) -> &Cyclotomic {
        self.s.get(self.index(a), self.index(b))
    }

    pub fn s_matrix(&self) -> &Matrix {
        &self.s
    }

    /// Topological twist θ_a.
    pub fn theta(&self, a: &AnyonLabel) -> &Cyclotomic {
        &self.t[self.index(a)]
    }

    pub fn twists(&self) -> &[Cyclotomic] {
        &self.t
    }

    pub fn r(&self, a: &AnyonLabel, b: &AnyonLabel) -> &Cyclotomic {
        self.r.get(self.index(a), self.index(b))
    }

    pub fn r_matrix(&self) -> &Matrix {
        &self.r
    }

    pub fn f(&self) -> &FSymbols {
        &self.f
    }

    pub fn quantum_dimension(&self, a: &AnyonLabel) -> &Cyclotomic {
        &self.dims[self.index(a)]
    }

    /// Total quantum dimension D = √(Σ d_a²) = N.
    pub fn global_dimension(&self) -> Cyclotomic {
        let total: Cyclotomic = self.dims.iter().map(|d| d * d).sum();
        let r = total.as_rational().expect("rational total dimension");
        Cyclotomic::sqrt_rational(r).expect("non-negative total dimension")
    }

    pub fn monodromy(&self, a: &AnyonLabel, b: &AnyonLabel) -> Cyclotomic {
        self.r(a, b) * self.r(b, a)
    }
}

/// Outcome of one relation check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationCheck {
    pub relation: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModularReport {
    pub checks: Vec<RelationCheck>,
}

impl ModularReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn get(&self, relation: &str) -> Option<bool> {
        self.checks.iter().find(|c| c.relation == relation).map(|c| c.pass)
    }
}

/// Checks unitarity, the (ST)³ ∝ S² relation, charge conjugation and monodromy consistency.
pub fn verify_modular_relations(t: &TheoryData) -> ModularReport {
    let d_inv = t.global_dimension().inv().expect("positive dimension");
    let s = t.s_matrix().scale(&d_inv);
    let tm = Matrix::diagonal(t.twists());
    let s2 = &s * &s;
    let st = &s * &tm;
    let st3 = &(&st * &st) * &st;
    let monodromy = t.labels().iter().all(|a| {
        t.labels()
            .iter()
            .all(|b| t.monodromy(a, b) == t.s(a, b).conj())
    });
    let checks = vec![
        ("s-symmetric", *t.s_matrix() == t.s_matrix().transpose()),
        ("s-unitary", s.is_unitary()),
        ("st-cubed", st3.proportionality(&s2).is_some()),
        ("charge-conjugation", s2.is_permutation()),
        ("t-diagonal-phases", t.twists().iter().all(|x| (x * &x.conj()).is_one())),
        ("monodromy", monodromy),
    ];
    ModularReport {
        checks: checks
            .into_iter()
            .map(|(relation, pass)| RelationCheck {
                relation: relation.into(),
                pass,
            })
            .collect(),
    }
}

#[derive(Serialize)]
struct TheoryJson<'a> {
    schema: &'static str,
    #[serde(rename = "N")]
    n: u32,
    labels: Vec<[u32; 2]>,
    names: Vec<String>,
    #[serde(rename = "S")]
    s: &'a Matrix,
    #[serde(rename = "T")]
    t: &'a [Cyclotomic],
    #[serde(rename = "R")]
    r: &'a Matrix,
    #[serde(rename = "F")]
    f: &'static str,
    #[serde(rename = "D")]
    d: Cyclotomic,
}

#[derive(Deserialize)]
struct TheoryJsonIn {
    #[serde(rename = "N")]
    n: u32,
    #[serde(rename = "S")]
    s: Matrix,
    #[serde(rename = "T")]
    t: Vec<Cyclotomic>,
    #[serde(rename = "R")]
    r: Matrix,
}

impl Serialize for TheoryData {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        TheoryJson {
            schema: crate::SCHEMA,
            n: self.n,
            labels: self.labels.iter().map(|a| [a.a1, a.a2]).collect(),
            names: self.labels.iter().map(ToString::to_string).collect(),
            s: &self.s,
            t: &self.t,
            r: &self.r,
            f: match self.f {
                FSymbols::Trivial => "trivial",
                FSymbols::Table(_) => "table",
            },
            d: self.global_dimension(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for TheoryData {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let raw = TheoryJsonIn::deserialize(de)?;
        TheoryData::from_parts(raw.n, raw.s, raw.t, raw.r, FSymbols::Trivial).map_err(serde::de::Error::custom)
    }
}
