//! Weight enumerators of singly even self-dual codes and their shadows:
//! Gleason expansions, parametric families, integrality tests for the
//! coefficient `b_m` and the Ray-Chaudhuri–Wilson bound on `B_s`.
//!
//! Everything here is exact; no floating point is used.

mod affine;
mod gleason;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num::{BigInt, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::analysis::WeightProfile;
use crate::error::{Error, Result};

pub use affine::{fmt_q, parse_q, q, solve_affine, Affine, AffineSolution, Q};
pub use gleason::{alpha_generating_function, binomial, gleason_system, GleasonSystem, LengthShape};

pub const CERTIFICATE_SCHEMA_VERSION: u32 = 1;

/// A linear condition on a weight enumerator coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Pin {
    /// `A_w = value`.
    A(usize, Affine),
    /// `B_w = value`.
    B(usize, Affine),
}

impl FromStr for Pin {
    type Err = Error;

    /// `A14=3705+8*beta` or `B7=alpha`.
    fn from_str(s: &str) -> Result<Self> {
        let (lhs, rhs) = s.split_once('=').ok_or_else(|| Error::Parse(format!("pin {s:?} needs '='")))?;
        let lhs = lhs.trim();
        let w: usize = lhs[1..].parse().map_err(|_| Error::Parse(format!("bad weight in {s:?}")))?;
        let value: Affine = rhs.parse()?;
        match &lhs[..1] {
            "A" | "a" => Ok(Pin::A(w, value)),
            "B" | "b" => Ok(Pin::B(w, value)),
            _ => Err(Error::Parse(format!("pin {s:?} must start with A or B"))),
        }
    }
}

impl fmt::Display for Pin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pin::A(w, v) => write!(f, "A{w}={v}"),
            Pin::B(w, v) => write!(f, "B{w}={v}"),
        }
    }
}

/// The listed parametric families, as shadow pins on top of the distance
/// constraints: `(name, n, d, pins)`.
pub const FAMILY_HINTS: &[(&str, usize, usize, &[&str])] = &[
    ("78,1", 78, 14, &["B3=0", "B7=alpha", "B11=-beta-16*alpha"]),
    ("78,2", 78, 14, &["B3=1", "B7=0", "B11=-alpha-135"]),
    ("74,1", 74, 14, &["B1=0", "B5=0", "B9=-alpha"]),
    ("74,2", 74, 14, &["B1=0", "B5=1", "B9=-16-alpha"]),
    ("76,1", 76, 14, &["B2=0", "B6=0", "B10=alpha"]),
    ("76,2", 76, 14, &["B2=0", "B6=1", "B10=-16-alpha"]),
    ("82", 82, 16, &["B1=0", "B5=0", "B9=alpha"]),
    ("98,1", 98, 18, &["B1=0", "B5=0", "B9=alpha", "B13=-beta-20*alpha"]),
    ("98,2", 98, 18, &["B1=0", "B5=1", "B9=0", "B13=-209-alpha"]),
    ("100,1", 100, 18, &["B2=0", "B6=0", "B10=alpha", "B14=-beta-20*alpha"]),
    ("100,2", 100, 18, &["B2=0", "B6=1", "B10=0", "B14=-209-alpha"]),
];

/// Pins of a named family hint with its length and distance.
pub fn family_hint(name: &str) -> Result<(usize, usize, Vec<Pin>)> {
    let (_, n, d, pins) = FAMILY_HINTS
        .iter()
        .find(|h| h.0 == name)
        .ok_or_else(|| Error::Parse(format!("unknown family {name:?}")))?;
    Ok((*n, *d, pins.iter().map(|p| p.parse()).collect::<Result<_>>()?))
}

/// Affine space of `(W, S)` pairs satisfying the pins.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EnumeratorFamily {
    pub shape: LengthShape,
    pub d: usize,
    pub pins: Vec<Pin>,
    /// `A_w` for every even `w ≤ n`.
    pub a: BTreeMap<usize, Affine>,
    /// `B_w` for every `w ≡ n/2 (mod 4)`.
    pub b: BTreeMap<usize, Affine>,
    /// Free parameters: hint names plus `c<i>` for unconstrained basis
    /// coefficients.
    pub params: Vec<String>,
    /// Expressions in the parameters that must vanish.
    pub constraints: Vec<Affine>,
}

fn dot_affine(row: &[Q], values: &[Affine]) -> Affine {
    row.iter().zip(values).fold(Affine::default(), |acc, (c, v)| if c.is_zero() { acc } else { acc.add(&v.scale(c)) })
}

/// Conditions `A_0 = 1`, `A_w = 0` for `0 < w < d`.
fn distance_pins(d: usize) -> Vec<Pin> {
    let mut pins = vec![Pin::A(0, Affine::int(1))];
    pins.extend((2..d).step_by(2).map(|w| Pin::A(w, Affine::int(0))));
    pins
}

/// Solves for the basis coefficients `c` under the pins.
fn solve_pins(g: &GleasonSystem, pins: &[Pin]) -> Result<AffineSolution> {
    let mut rows = Vec::with_capacity(pins.len());
    for pin in pins {
        let (row, value) = match pin {
            Pin::A(w, v) => (g.a_row(*w), v),
            Pin::B(w, v) => (g.b_row(*w), v),
        };
        match row {
            Some(row) => rows.push((row.to_vec(), value.clone())),
            None => {
                // a coefficient that is identically zero
                if !value.is_zero() {
                    if value.is_constant() {
                        return Err(Error::Infeasible(format!("{pin} at a weight that cannot occur")));
                    }
                    rows.push((vec![Q::zero(); g.shape.top() + 1], value.clone()));
                }
            }
        }
    }
    solve_affine(&rows, g.shape.top() + 1, |i| format!("c{i}"))
}

/// `enumerator_family(shape, d, extra)`: the distance constraints plus any
/// extra pins. Singly even codes also have `B_0 = 0`.
pub fn enumerator_family(shape: LengthShape, d: usize, extra: &[Pin]) -> Result<EnumeratorFamily> {
    let g = gleason_system(shape);
    let mut pins = distance_pins(d);
    if shape.r == 0 {
        pins.push(Pin::B(0, Affine::int(0)));
    }
    pins.extend(extra.iter().cloned());
    let sol = solve_pins(&g, &pins)?;
    let a = (0..=shape.n).step_by(2).map(|w| (w, dot_affine(g.a_row(w).unwrap(), &sol.values))).collect();
    let r = shape.shadow_base();
    let b = (r..=shape.n).step_by(4).map(|w| (w, dot_affine(g.b_row(w).unwrap(), &sol.values))).collect();
    let mut params: Vec<String> = Vec::new();
    for pin in extra {
        let (Pin::A(_, v) | Pin::B(_, v)) = pin;
        for p in v.params() {
            if !params.contains(p) {
                params.push(p.clone());
            }
        }
    }
    params.extend(sol.free.iter().map(|i| format!("c{i}")));
    Ok(EnumeratorFamily { shape, d, pins: extra.to_vec(), a, b, params, constraints: sol.constraints })
}

impl EnumeratorFamily {
    pub fn a(&self, w: usize) -> Affine {
        self.a.get(&w).cloned().unwrap_or_default()
    }

    pub fn b(&self, w: usize) -> Affine {
        self.b.get(&w).cloned().unwrap_or_default()
    }

    /// Solves for the parameters from known coefficients. Returns
    /// `Ok(None)` when the values are not in the family.
    pub fn fit(&self, a_known: &BTreeMap<usize, Q>, b_known: &BTreeMap<usize, Q>) -> Result<Option<AffineSolution>> {
        let mut rows = Vec::new();
        let mut push = |expr: &Affine, value: &Q| {
            let coeffs = self.params.iter().map(|p| expr.coeff(p)).collect();
            rows.push((coeffs, Affine::constant(value - &expr.constant)));
        };
        for (w, v) in a_known {
            push(&self.a(*w), v);
        }
        for (w, v) in b_known {
            push(&self.b(*w), v);
        }
        for c in &self.constraints {
            push(c, &Q::zero());
        }
        let names = self.params.clone();
        match solve_affine(&rows, names.len(), |i| names[i].clone()) {
            Ok(sol) => Ok(Some(sol)),
            Err(Error::Infeasible(_)) => Ok(None),
            Err(e) => Err(e),
        }
    }

    /// Whether some parameter choice yields the given coefficients.
    pub fn admits(&self, a_known: &BTreeMap<usize, Q>, b_known: &BTreeMap<usize, Q>) -> Result<bool> {
        Ok(self.fit(a_known, b_known)?.is_some())
    }
}

/// Fits the listed families for length `n` to computed counts; returns the
/// first family whose named parameters are all determined.
pub fn derive_parameters(
    n: usize,
    weights: &WeightProfile,
    shadow: Option<&WeightProfile>,
) -> Result<Option<(String, BTreeMap<String, Q>)>> {
    let shape = LengthShape::new(n)?;
    let to_q = |p: &WeightProfile| -> BTreeMap<usize, Q> {
        (0..=p.w_max.min(n)).map(|w| (w, Q::from_integer(BigInt::from(p.get(w))))).collect()
    };
    let a_known: BTreeMap<usize, Q> = to_q(weights).into_iter().filter(|(w, _)| w % 2 == 0).collect();
    let b_known: BTreeMap<usize, Q> = match shadow {
        Some(s) => to_q(s).into_iter().filter(|(w, _)| *w >= shape.r && (w - shape.r) % 4 == 0).collect(),
        None => BTreeMap::new(),
    };
    for (name, hn, d, _) in FAMILY_HINTS {
        if *hn != n {
            continue;
        }
        let (_, _, pins) = family_hint(name)?;
        let fam = match enumerator_family(shape, *d, &pins) {
            Ok(f) => f,
            Err(Error::Infeasible(_)) => continue,
            Err(e) => return Err(e),
        };
        let Some(sol) = fam.fit(&a_known, &b_known)? else { continue };
        let named: Vec<(usize, &String)> =
            fam.params.iter().enumerate().filter(|(_, p)| !p.starts_with('c')).collect();
        if named.iter().all(|(i, _)| sol.values[*i].is_constant()) {
            let values = named.into_iter().map(|(i, p)| (p.clone(), sol.values[i].constant.clone())).collect();
            return Ok(Some((name.to_string(), values)));
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShadowKind {
    Minimal,
    NearMinimal,
    NearNearMinimal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Extremality {
    Extremal,
    NearExtremal,
}

/// Extremality of `d` and the shadow's minimum weight relative to the
/// smallest possible one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ShadowClass {
    pub kind: ShadowKind,
    pub extremality: Extremality,
    pub shape: LengthShape,
}

impl ShadowClass {
    pub fn new(n: usize, extremality: Extremality, kind: ShadowKind) -> Result<Self> {
        Ok(ShadowClass { kind, extremality, shape: LengthShape::new(n)? })
    }

    pub fn d(&self) -> usize {
        match self.extremality {
            Extremality::Extremal => self.shape.extremal_d(),
            Extremality::NearExtremal => self.shape.near_extremal_d(),
        }
    }

    /// `wt(S)`: `r`, `r+4`, `r+8`, or `4`, `8`, `12` when `r = 0`.
    pub fn shadow_weight(&self) -> usize {
        let base = if self.shape.r == 0 { 4 } else { self.shape.r };
        base + 4 * match self.kind {
            ShadowKind::Minimal => 0,
            ShadowKind::NearMinimal => 1,
            ShadowKind::NearNearMinimal => 2,
        }
    }

    /// Class of a code with minimum distance `d` and shadow minimum
    /// weight `s`, if it is one of the six.
    pub fn classify(n: usize, d: usize, s: usize) -> Result<Option<Self>> {
        let shape = LengthShape::new(n)?;
        let extremality = if d == shape.extremal_d() {
            Extremality::Extremal
        } else if d == shape.near_extremal_d() {
            Extremality::NearExtremal
        } else {
            return Ok(None);
        };
        for kind in [ShadowKind::Minimal, ShadowKind::NearMinimal, ShadowKind::NearNearMinimal] {
            let c = ShadowClass { kind, extremality, shape };
            if c.shadow_weight() == s {
                return Ok(Some(c));
            }
        }
        Ok(None)
    }

    pub fn label(&self) -> String {
        let e = match self.extremality {
            Extremality::Extremal => "extremal",
            Extremality::NearExtremal => "near-extremal",
        };
        let k = match self.kind {
            ShadowKind::Minimal => "minimal",
            ShadowKind::NearMinimal => "near-minimal",
            ShadowKind::NearNearMinimal => "near-near-minimal",
        };
        format!("{e}-{k}")
    }

    /// Parses `near-extremal-minimal`, `extremal-near-minimal`, ...
    pub fn parse(n: usize, label: &str) -> Result<Self> {
        let (extremality, rest) = if let Some(rest) = label.strip_prefix("near-extremal-") {
            (Extremality::NearExtremal, rest)
        } else if let Some(rest) = label.strip_prefix("extremal-") {
            (Extremality::Extremal, rest)
        } else {
            return Err(Error::Parse(format!("unknown class {label:?}")));
        };
        let kind = match rest {
            "minimal" => ShadowKind::Minimal,
            "near-minimal" => ShadowKind::NearMinimal,
            "near-near-minimal" => ShadowKind::NearNearMinimal,
            _ => return Err(Error::Parse(format!("unknown class {label:?}"))),
        };
        Self::new(n, extremality, kind)
    }

    /// Shadow coefficients forced by `wt(S) = s` and `d`: `B_w = 0` below
    /// `s`; `B_s = 1` when `2s < d`, since two distinct minimum weight
    /// shadow vectors sum to a codeword; and `B_w = 0` for `s < w < d − s`.
    pub fn shadow_pins(&self) -> Vec<Pin> {
        let (s, d, r) = (self.shadow_weight(), self.d(), self.shape.r);
        let mut pins = Vec::new();
        let mut w = r;
        while w <= self.shape.n {
            if w < s || (w > s && w + s < d) {
                pins.push(Pin::B(w, Affine::int(0)));
            } else if w == s && 2 * s < d {
                pins.push(Pin::B(w, Affine::int(1)));
            }
            w += 4;
        }
        pins
    }

    /// First shadow weight not fixed by [`Self::shadow_pins`]; its
    /// coefficient is the `b` value the integrality tests are about.
    pub fn target_weight(&self) -> usize {
        let (s, d, r) = (self.shadow_weight(), self.d(), self.shape.r);
        let floor = (s + 1).max(d.saturating_sub(s));
        let mut w = r;
        while w < floor {
            w += 4;
        }
        w
    }

    pub fn target_index(&self) -> usize {
        (self.target_weight() - self.shape.r) / 4
    }
}

impl fmt::Display for ShadowClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// A closed-form binomial expression for `b_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedForm {
    pub formula: String,
    #[serde(with = "q_string")]
    pub value: Q,
}

fn c(n: i64, k: i64) -> Q {
    Q::from_integer(binomial(n, k))
}

fn frac(a: i64, b: i64) -> Q {
    Q::new(BigInt::from(a), BigInt::from(b))
}

/// Extremal, near-minimal, `r = 1`, `l = 1`: `b_m`.
pub fn near_minimal_l1_r1(m: i64) -> Q {
    frac(-12 * m + 5, -4 * m - 2) * c(5 * m + 1, m) - frac(3 * m, 2 * m + 1) * c(5 * m, m - 1)
}

/// Extremal, near-minimal, `r = 2`, `l = 0`: `b_{m−1}`.
pub fn near_minimal_r2(m: i64) -> Q {
    frac(2 * (6 * m + 1) * (8 * m + 1), 16 * m * (2 * m + 1)) * c(5 * m, m - 1)
        - frac(3 * m - 1, 2 * m + 1) * c(5 * m - 1, m - 2)
}

/// Extremal, near-minimal, `r = 3`, `l = 0`: `b_{m−1}`.
pub fn near_minimal_r3(m: i64) -> Q {
    frac(3 * (4 * m + 1) * (6 * m + 1), 8 * m * (2 * m + 1)) * c(5 * m, m - 1)
        - frac(3 * m - 1, 2 * m + 1) * c(5 * m - 1, m - 2)
}

/// Near-extremal, minimal, `r = 1`, `l = 0`: `b_m`.
pub fn minimal_r1(m: i64) -> Q {
    frac(24 * m + 2, m) * c(5 * m - 1, m - 1) - frac(3, 2) * c(5 * m - 1, m)
}

/// Near-extremal, minimal, `r = 2`, `l = 0`: `b_m`.
pub fn minimal_r2(m: i64) -> Q {
    frac(24 * m + 4, m) * (c(5 * m, m - 2) + q(3) * c(5 * m + 1, m - 2)) - frac(3, 2) * c(5 * m - 1, m)
}

/// Extremal, near-near-minimal, `r = 1`, `l = 0`: `b_{m−1}`.
pub fn near_near_minimal_r1(m: i64) -> Q {
    frac(1, 32) * frac((12 * m + 1) * (56 * m + 4), (2 * m + 1) * (m - 1)) * c(5 * m - 1, m - 2)
}

/// Extremal near-minimal with `r = 1`, `l = 0` would need
/// `(12m+1)(56m+4)/((2m+1)(m−1)) = 32(3m−1)/(2m+1)`; returns whether that
/// holds at `m`.
pub fn near_minimal_identity_holds(m: i64) -> bool {
    let m = m as i128;
    m >= 2 && (12 * m + 1) * (56 * m + 4) == 32 * (3 * m - 1) * (m - 1)
}

/// First `m` in `[2, m_max]` where the identity holds.
pub fn near_minimal_identity_scan(m_max: i64) -> Option<i64> {
    (2..=m_max).find(|&m| near_minimal_identity_holds(m))
}

/// The closed form covering a class, if any.
pub fn closed_form(class: &ShadowClass) -> Option<ClosedForm> {
    let LengthShape { m, l, r, .. } = class.shape;
    let m = m as i64;
    let (formula, value) = match (class.extremality, class.kind, l, r) {
        (Extremality::Extremal, ShadowKind::NearMinimal, 1, 1) if m >= 1 => (
            "(-12m+5)/(-4m-2) C(5m+1,m) - 3m/(2m+1) C(5m,m-1)",
            near_minimal_l1_r1(m),
        ),
        (Extremality::Extremal, ShadowKind::NearMinimal, 0, 2) if m >= 1 => (
            "2(6m+1)(8m+1)/(16m(2m+1)) C(5m,m-1) - (3m-1)/(2m+1) C(5m-1,m-2)",
            near_minimal_r2(m),
        ),
        (Extremality::Extremal, ShadowKind::NearMinimal, 0, 3) if m >= 1 => (
            "3(4m+1)(6m+1)/(8m(2m+1)) C(5m,m-1) - (3m-1)/(2m+1) C(5m-1,m-2)",
            near_minimal_r3(m),
        ),
        (Extremality::NearExtremal, ShadowKind::Minimal, 0, 1) if m >= 1 => {
            ("(24m+2)/m C(5m-1,m-1) - 3/2 C(5m-1,m)", minimal_r1(m))
        }
        (Extremality::NearExtremal, ShadowKind::Minimal, 0, 2) if m >= 1 => {
            ("(24m+4)/m [C(5m,m-2) + 3 C(5m+1,m-2)] - 3/2 C(5m-1,m)", minimal_r2(m))
        }
        (Extremality::Extremal, ShadowKind::NearNearMinimal, 0, 1) if m >= 2 => (
            "2^-5 (12m+1)(56m+4)/((2m+1)(m-1)) C(5m-1,m-2)",
            near_near_minimal_r1(m),
        ),
        _ => return None,
    };
    Some(ClosedForm { formula: formula.to_string(), value })
}

/// Whether a class is one the integrality tests speak about.
pub fn is_covered(class: &ShadowClass) -> bool {
    closed_form(class).is_some() || identity_case(class)
}

fn identity_case(class: &ShadowClass) -> bool {
    let s = class.shape;
    class.extremality == Extremality::Extremal
        && class.kind == ShadowKind::NearMinimal
        && s.l == 0
        && s.r == 1
        && s.m >= 2
}

/// Outcome of solving the Gleason system under the class's pins.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum GleasonOutcome {
    Determined {
        #[serde(with = "q_string")]
        b: Q,
        /// `A_d` of the same solution.
        #[serde(with = "q_string")]
        a_d: Q,
    },
    Infeasible {
        reason: String,
    },
    Underdetermined,
}

/// Both computations of the target coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BValue {
    pub target_index: usize,
    pub target_weight: usize,
    pub closed_form: Option<ClosedForm>,
    pub gleason: GleasonOutcome,
}

/// `conway_sloane_value`: solves for `B_target` given pinned coefficients.
pub fn conway_sloane_value(shape: LengthShape, d: usize, pins: &[Pin], target_weight: usize) -> Result<Q> {
    let g = gleason_system(shape);
    let mut all = distance_pins(d);
    all.extend(pins.iter().cloned());
    let sol = solve_pins(&g, &all)?;
    let row = g.b_row(target_weight).ok_or_else(|| Error::InvalidParams(format!("B{target_weight} is identically zero")))?;
    let v = dot_affine(row, &sol.values);
    if v.is_constant() {
        Ok(v.constant)
    } else {
        Err(Error::NeedsMoreConstraints(format!("B{target_weight} = {v}")))
    }
}

fn gleason_outcome(class: &ShadowClass) -> Result<GleasonOutcome> {
    let pins = class.shadow_pins();
    let target = class.target_weight();
    if target > class.shape.n {
        return Ok(GleasonOutcome::Underdetermined);
    }
    match conway_sloane_value(class.shape, class.d(), &pins, target) {
        Ok(b) => {
            let a_d = conway_sloane_a(class.shape, class.d(), &pins, class.d())?;
            Ok(GleasonOutcome::Determined { b, a_d })
        }
        Err(Error::Infeasible(reason)) => Ok(GleasonOutcome::Infeasible { reason }),
        Err(Error::NeedsMoreConstraints(_)) => Ok(GleasonOutcome::Underdetermined),
        Err(e) => Err(e),
    }
}

fn conway_sloane_a(shape: LengthShape, d: usize, pins: &[Pin], w: usize) -> Result<Q> {
    let g = gleason_system(shape);
    let mut all = distance_pins(d);
    all.extend(pins.iter().cloned());
    let sol = solve_pins(&g, &all)?;
    let v = g.a_row(w).map(|row| dot_affine(row, &sol.values)).unwrap_or_default();
    if v.is_constant() {
        Ok(v.constant)
    } else {
        Err(Error::NeedsMoreConstraints(format!("A{w} = {v}")))
    }
}

/// `b_value`: closed form (where one exists) and the Gleason solve.
pub fn b_value(class: &ShadowClass) -> Result<BValue> {
    if !is_covered(class) {
        return Err(Error::UnsupportedCase(format!("no closed form for {class} at n = {}", class.shape.n)));
    }
    Ok(BValue {
        target_index: class.target_index(),
        target_weight: class.target_weight(),
        closed_form: closed_form(class),
        gleason: gleason_outcome(class)?,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Eliminated,
    NotEliminated,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Eliminated => "eliminated",
            Verdict::NotEliminated => "not-eliminated",
        })
    }
}

/// Published values of the target coefficient for comparison:
/// `(n, class, value, value by the Conway–Sloane method)`.
pub const PUBLISHED_B: &[(usize, &str, &str, Option<&str>)] = &[
    (74, "near-extremal-minimal", "5447/3", None),
    (76, "near-extremal-minimal", "1050", Some("2590")),
    (82, "extremal-near-minimal", "1105", Some("1505")),
    (98, "near-extremal-minimal", "38301/2", None),
    (100, "near-extremal-minimal", "14686", Some("98686")),
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema_version: u32,
    pub n: usize,
    pub m: usize,
    pub l: usize,
    pub r: usize,
    pub class: String,
    pub d: usize,
    pub shadow_weight: usize,
    pub target: String,
    pub b_value_closed_form: Option<String>,
    pub closed_form_formula: Option<String>,
    pub b_value_gleason: Option<String>,
    pub gleason: GleasonOutcome,
    pub published_b: Option<String>,
    pub published_conway_sloane: Option<String>,
    pub verdict: Verdict,
    pub clause: String,
    pub notes: Vec<String>,
}

impl Certificate {
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "n = {} (m = {}, l = {}, r = {}), class {}, d = {}, wt(S) = {}\n",
            self.n, self.m, self.l, self.r, self.class, self.d, self.shadow_weight
        );
        out += &format!("target {} (B{})\n", self.target, self.shadow_weight_of_target());
        if let (Some(f), Some(v)) = (&self.closed_form_formula, &self.b_value_closed_form) {
            out += &format!("closed form: {f} = {v}\n");
        }
        match &self.gleason {
            GleasonOutcome::Determined { b, a_d } => {
                out += &format!("gleason solve: {} = {}, A{} = {}\n", self.target, fmt_q(b), self.d, fmt_q(a_d))
            }
            GleasonOutcome::Infeasible { reason } => out += &format!("gleason solve: infeasible ({reason})\n"),
            GleasonOutcome::Underdetermined => out += "gleason solve: underdetermined\n",
        }
        if let Some(p) = &self.published_b {
            out += &format!("published value: {p}\n");
        }
        if let Some(p) = &self.published_conway_sloane {
            out += &format!("published Conway-Sloane value: {p}\n");
        }
        out += &format!("verdict: {} ({})\n", self.verdict, self.clause);
        for n in &self.notes {
            out += &format!("note: {n}\n");
        }
        out
    }

    fn shadow_weight_of_target(&self) -> usize {
        let j: usize = self.target.trim_start_matches("b_").parse().unwrap_or(0);
        self.r + 4 * j
    }
}

fn not_count(x: &Q) -> bool {
    !x.is_integer() || x.is_negative()
}

/// `nonexistence_verdict`: decides whether the integrality and consistency
/// tests rule the class out.
pub fn nonexistence_verdict(class: &ShadowClass) -> Result<Certificate> {
    let shape = class.shape;
    let target_index = class.target_index();
    let gleason = gleason_outcome(class)?;
    let cf = closed_form(class);
    let published = PUBLISHED_B.iter().find(|p| p.0 == shape.n && p.1 == class.label());
    let mut notes = Vec::new();
    let gleason_b = match &gleason {
        GleasonOutcome::Determined { b, .. } => Some(b.clone()),
        _ => None,
    };

    let (verdict, clause) = if identity_case(class) {
        let holds = near_minimal_identity_holds(shape.m as i64);
        if let GleasonOutcome::Infeasible { reason } = &gleason {
            notes.push(format!("gleason pins are inconsistent: {reason}"));
        }
        if holds {
            (Verdict::NotEliminated, "required identity holds at this m".to_string())
        } else {
            (
                Verdict::Eliminated,
                "b_{m-1} = 0 forces (12m+1)(56m+4)/((2m+1)(m-1)) = 32(3m-1)/(2m+1), which fails at this m".to_string(),
            )
        }
    } else if let Some(cf) = &cf {
        if let Some(g) = &gleason_b {
            if !g.is_integer() {
                notes.push(format!("gleason value {} is not an integer", fmt_q(g)));
            } else {
                notes.push(format!("gleason value {} is an integer", fmt_q(g)));
            }
        }
        if !cf.value.is_integer() {
            (Verdict::Eliminated, format!("closed form {} is not an integer", fmt_q(&cf.value)))
        } else if cf.value.is_negative() {
            (Verdict::Eliminated, format!("closed form {} is negative", fmt_q(&cf.value)))
        } else {
            match &gleason {
                GleasonOutcome::Determined { b, .. } if *b != cf.value => (
                    Verdict::Eliminated,
                    format!("closed form {} disagrees with the gleason value {}", fmt_q(&cf.value), fmt_q(b)),
                ),
                GleasonOutcome::Infeasible { reason } => {
                    (Verdict::Eliminated, format!("gleason pins are inconsistent: {reason}"))
                }
                _ => (Verdict::NotEliminated, "closed form is a nonnegative integer".to_string()),
            }
        }
    } else {
        match &gleason {
            GleasonOutcome::Determined { b, .. } if not_count(b) => {
                (Verdict::Eliminated, format!("gleason value {} is not a nonnegative integer", fmt_q(b)))
            }
            GleasonOutcome::Determined { .. } => {
                (Verdict::NotEliminated, "gleason value is a nonnegative integer".to_string())
            }
            GleasonOutcome::Infeasible { reason } => match doubly_even_forced(class)? {
                true => {
                    notes.push("the distance constraints alone force a doubly even enumerator (B_0 = 1)".into());
                    (
                        Verdict::NotEliminated,
                        "enumerator shape is realized only by a doubly even code; the singly even reading is infeasible"
                            .to_string(),
                    )
                }
                false => (Verdict::Eliminated, format!("pins are inconsistent: {reason}")),
            },
            GleasonOutcome::Underdetermined => {
                return Err(Error::UnsupportedCase(format!(
                    "{class} at n = {} is neither covered by a closed form nor determined by its pins",
                    shape.n
                )))
            }
        }
    };
    if let Some(p) = published {
        let printed = parse_q(p.2)?;
        if let Some(cf) = &cf {
            if printed != cf.value {
                notes.push(format!("published value {} differs from the evaluated closed form {}", p.2, fmt_q(&cf.value)));
            }
        }
        if let (Some(cs), GleasonOutcome::Determined { b, a_d }) = (p.3, &gleason) {
            let cs = parse_q(cs)?;
            if cs == *b {
                notes.push(format!("published Conway-Sloane value {} equals the gleason b value", p.3.unwrap()));
            } else if cs == *a_d {
                notes.push(format!(
                    "published Conway-Sloane value {} equals A{} of the gleason solution, not b (= {})",
                    p.3.unwrap(),
                    class.d(),
                    fmt_q(b)
                ));
            } else {
                notes.push(format!("published Conway-Sloane value {} differs from the gleason value {}", p.3.unwrap(), fmt_q(b)));
            }
        }
    }
    Ok(Certificate {
        schema_version: CERTIFICATE_SCHEMA_VERSION,
        n: shape.n,
        m: shape.m,
        l: shape.l,
        r: shape.r,
        class: class.label(),
        d: class.d(),
        shadow_weight: class.shadow_weight(),
        target: format!("b_{target_index}"),
        b_value_closed_form: cf.as_ref().map(|c| fmt_q(&c.value)),
        closed_form_formula: cf.map(|c| c.formula),
        b_value_gleason: gleason_b.as_ref().map(fmt_q),
        gleason,
        published_b: published.map(|p| p.2.to_string()),
        published_conway_sloane: published.and_then(|p| p.3.map(str::to_string)),
        verdict,
        clause,
        notes,
    })
}

/// Whether the distance constraints alone determine `W` and give `B_0 = 1`.
fn doubly_even_forced(class: &ShadowClass) -> Result<bool> {
    if class.shape.r != 0 {
        return Ok(false);
    }
    match conway_sloane_value(class.shape, class.d(), &[], 0) {
        Ok(b0) => Ok(b0.is_one()),
        Err(Error::NeedsMoreConstraints(_)) | Err(Error::Infeasible(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Parameter bounds from `0 ≤ B_s ≤ n` and nonnegativity of the pinned
/// shadow coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RangeRestriction {
    pub s: usize,
    pub b_s: Affine,
    /// Each expression is `≥ 0`.
    pub constraints: Vec<Affine>,
    /// Parameter ↦ (lower bounds, upper bounds), each bound affine in the
    /// other parameters.
    pub bounds: BTreeMap<String, (Vec<Affine>, Vec<Affine>)>,
}

impl RangeRestriction {
    /// e.g. `0 ≤ alpha ≤ min{100, -1/20*beta}`.
    pub fn describe(&self, param: &str) -> Option<String> {
        let (lo, hi) = self.bounds.get(param)?;
        let side = |v: &[Affine], word: &str| match v.len() {
            0 => None,
            1 => Some(v[0].to_string()),
            _ => Some(format!("{word}{{{}}}", v.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(", "))),
        };
        let mut s = String::new();
        if let Some(l) = side(lo, "max") {
            s += &format!("{l} ≤ ");
        }
        s += param;
        if let Some(h) = side(hi, "min") {
            s += &format!(" ≤ {h}");
        }
        Some(s)
    }
}

/// `shadow_range_restriction`: applies `B_s ≤ n` to a family. Needs a
/// non-minimal shadow, `m ≥ 2` and `2s − d ≤ 2`.
pub fn shadow_range_restriction(family: &EnumeratorFamily, s: usize) -> Result<RangeRestriction> {
    let shape = family.shape;
    let minimal = if shape.r == 0 { 4 } else { shape.r };
    if 2 * s > family.d + 2 {
        return Err(Error::NotApplicable(format!("2s - d = {} exceeds 2", 2 * s as i64 - family.d as i64)));
    }
    if s <= minimal || shape.m < 2 {
        return Err(Error::NotApplicable("needs m ≥ 2 and a shadow that is not minimal".into()));
    }
    let b_s = family.b(s);
    let mut constraints = vec![b_s.clone(), Affine::int(shape.n as i64).sub(&b_s)];
    for pin in &family.pins {
        if let Pin::B(w, _) = pin {
            let e = family.b(*w);
            if *w != s && !e.is_constant() && !constraints.contains(&e) {
                constraints.push(e);
            }
        }
    }
    let mut bounds: BTreeMap<String, (Vec<Affine>, Vec<Affine>)> = BTreeMap::new();
    for e in &constraints {
        for (p, coef) in &e.coeffs {
            let mut rest = e.clone();
            rest.coeffs.remove(p);
            let bound = rest.scale(&(-coef.recip()));
            let entry = bounds.entry(p.clone()).or_default();
            let list = if coef.is_positive() { &mut entry.0 } else { &mut entry.1 };
            if !list.contains(&bound) {
                list.push(bound);
            }
        }
    }
    Ok(RangeRestriction { s, b_s, constraints, bounds })
}

/// A failed clause of the basic shadow properties.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClauseViolation {
    pub clause: u8,
    pub detail: String,
}

/// Checks the shadow counts against: symmetry `B_r = B_{n−r}`; support on
/// `r ≡ n/2 (mod 4)`; `B_0 = 0`; `B_r ≤ 1` for `r < d/2`; at most one
/// nonzero `B_r` with `r < (d+4)/2`. Only weights inside the profile's
/// complete range are examined.
pub fn shadow_clause_check(shadow: &WeightProfile, d: usize) -> Vec<ClauseViolation> {
    let n = shadow.n;
    let mut out = Vec::new();
    let known = |w: usize| w <= shadow.w_max;
    for w in 0..=shadow.w_max.min(n) {
        let other = n - w;
        if known(other) && shadow.get(w) != shadow.get(other) {
            out.push(ClauseViolation { clause: 1, detail: format!("B{w} = {} but B{other} = {}", shadow.get(w), shadow.get(other)) });
            break;
        }
    }
    for (&w, &c) in &shadow.counts {
        if c > 0 && w % 4 != (n / 2) % 4 {
            out.push(ClauseViolation { clause: 2, detail: format!("B{w} = {c} at a weight not ≡ n/2 (mod 4)") });
        }
    }
    if shadow.get(0) != 0 {
        out.push(ClauseViolation { clause: 3, detail: format!("B0 = {}", shadow.get(0)) });
    }
    for (&w, &c) in &shadow.counts {
        if 2 * w < d && c > 1 {
            out.push(ClauseViolation { clause: 4, detail: format!("B{w} = {c} > 1 below d/2") });
        }
    }
    let low: Vec<usize> = shadow.counts.iter().filter(|(&w, &c)| c > 0 && 2 * w < d + 4).map(|(&w, _)| w).collect();
    if low.len() > 1 {
        out.push(ClauseViolation { clause: 5, detail: format!("nonzero B at weights {low:?} below (d+4)/2") });
    }
    out
}

pub(crate) mod q_string {
    use super::{fmt_q, parse_q, Q};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        parse_q(&String::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qs(s: &str) -> Q {
        parse_q(s).unwrap()
    }

    fn class(n: usize, label: &str) -> ShadowClass {
        ShadowClass::parse(n, label).unwrap()
    }

    #[test]
    fn closed_forms() {
        assert_eq!(minimal_r2(3), q(1050));
        assert_eq!(minimal_r2(4), q(14686));
        assert_eq!(near_minimal_l1_r1(3), q(1105));
        assert_eq!(minimal_r1(3), qs("5096/3"));
        assert_eq!(minimal_r1(4), qs("35853/2"));
        assert_eq!(near_minimal_identity_scan(1_000_000), None);
    }

    #[test]
    fn families_contain_listed_vectors() {
        let s78 = LengthShape::new(78).unwrap();
        let (_, d, pins) = family_hint("78,1").unwrap();
        let fam = enumerator_family(s78, d, &pins).unwrap();
        assert_eq!(fam.a(14).to_string(), "3705 + 8*beta");
        assert_eq!(fam.a(16).to_string(), "62244 + 512*alpha - 24*beta");
        let a = BTreeMap::from([(14, q(3705)), (16, q(62244))]);
        let b = BTreeMap::from([(7, q(0)), (11, q(0))]);
        assert!(fam.admits(&a, &b).unwrap());
        assert!(!fam.admits(&BTreeMap::from([(14, q(3706))]), &b).unwrap());

        let (_, d, pins) = family_hint("76,1").unwrap();
        let fam = enumerator_family(LengthShape::new(76).unwrap(), d, &pins).unwrap();
        assert_eq!(fam.a(14).to_string(), "4750 - 16*alpha");
        assert_eq!(fam.b(14).to_string(), "9500 - 14*alpha");
        let (_, d, pins) = family_hint("74,1").unwrap();
        let fam = enumerator_family(LengthShape::new(74).unwrap(), d, &pins).unwrap();
        assert_eq!(fam.a(14).to_string(), "6364 + 32*alpha");
    }

    #[test]
    fn shadow_pins_follow_the_weight_argument() {
        let c = class(74, "near-extremal-minimal");
        assert_eq!(c.shadow_pins(), ["B1=1", "B5=0", "B9=0"].map(|p| p.parse().unwrap()));
        assert_eq!(c.target_index(), 3);
        let c = class(82, "extremal-near-minimal");
        assert_eq!(c.shadow_pins(), ["B1=0", "B5=1", "B9=0"].map(|p| p.parse().unwrap()));
        assert_eq!(c.target_index(), 3);
        assert_eq!(class(76, "extremal-near-minimal").target_index(), 2);
    }

    #[test]
    fn gleason_values() {
        let get = |n, l| match b_value(&class(n, l)).unwrap().gleason {
            GleasonOutcome::Determined { b, a_d } => (b, a_d),
            other => panic!("{other:?}"),
        };
        assert_eq!(get(74, "near-extremal-minimal").0, q(2044));
        assert_eq!(get(76, "near-extremal-minimal"), (q(8954), q(2590)));
        assert_eq!(get(82, "extremal-near-minimal").0, q(1505));
        assert_eq!(get(98, "near-extremal-minimal").0, q(22116));
        assert_eq!(get(100, "near-extremal-minimal").0, q(98686));
    }

    #[test]
    fn verdicts() {
        for n in [74, 98] {
            let cert = nonexistence_verdict(&class(n, "near-extremal-minimal")).unwrap();
            assert_eq!(cert.verdict, Verdict::Eliminated);
            assert!(cert.clause.contains("not an integer"), "{}", cert.clause);
        }
        for (n, l) in [(76, "near-extremal-minimal"), (82, "extremal-near-minimal"), (100, "near-extremal-minimal")] {
            let cert = nonexistence_verdict(&class(n, l)).unwrap();
            assert_eq!(cert.verdict, Verdict::Eliminated, "{n}");
            assert!(cert.clause.contains("disagrees"));
        }
        let cert = nonexistence_verdict(&class(50, "extremal-near-minimal")).unwrap();
        assert_eq!(cert.verdict, Verdict::Eliminated);
        let golay = nonexistence_verdict(&class(24, "extremal-minimal")).unwrap();
        assert_eq!(golay.verdict, Verdict::NotEliminated);
        assert!(matches!(b_value(&class(78, "extremal-minimal")), Err(Error::UnsupportedCase(_))));
    }

    #[test]
    fn range_restrictions() {
        let fam = |name: &str| {
            let (n, d, pins) = family_hint(name).unwrap();
            enumerator_family(LengthShape::new(n).unwrap(), d, &pins).unwrap()
        };
        let r = shadow_range_restriction(&fam("82"), 9).unwrap();
        assert_eq!(r.describe("alpha").unwrap(), "0 ≤ alpha ≤ 82");
        let r = shadow_range_restriction(&fam("100,1"), 10).unwrap();
        assert_eq!(r.describe("alpha").unwrap(), "0 ≤ alpha ≤ min{100, -1/20*beta}");
        let r = shadow_range_restriction(&fam("78,1"), 7).unwrap();
        assert_eq!(r.describe("alpha").unwrap(), "0 ≤ alpha ≤ min{78, -1/16*beta}");
        assert!(matches!(shadow_range_restriction(&fam("82"), 11), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn shadow_clauses() {
        let prof = |n, w_max, counts: &[(usize, u64)]| WeightProfile { n, w_max, counts: counts.iter().copied().collect() };
        assert!(shadow_clause_check(&prof(78, 11, &[(11, 38)]), 14).is_empty());
        let v = shadow_clause_check(&prof(78, 11, &[(0, 1)]), 14);
        assert!(v.iter().any(|c| c.clause == 3));
        let v = shadow_clause_check(&prof(78, 11, &[(3, 1), (7, 1)]), 14);
        assert!(v.iter().any(|c| c.clause == 5));
        let v = shadow_clause_check(&prof(78, 11, &[(5, 1)]), 14);
        assert!(v.iter().any(|c| c.clause == 2));
        let v = shadow_clause_check(&prof(78, 11, &[(3, 2)]), 14);
        assert!(v.iter().any(|c| c.clause == 4));
    }
}
