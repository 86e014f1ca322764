//! Codes with an automorphism `σ` of odd prime order `p` and type `p-(c;f)`.
//!
//! Coordinates are laid out cycle by cycle: cycle `i` (0-based) covers
//! `[i·p, (i+1)·p)` and the `f` fixed points come last. Offset `j` inside a
//! cycle carries the coefficient of `x^j`, and `σ` maps offset `j` to `j + 1`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cyclic_field::{FieldContext, RingElement};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector, Permutation};
use crate::numtheory;

/// `σ` of type `p-(c;f)`: `c` cycles of length `p` and `f` fixed points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AutomorphismType {
    pub p: usize,
    pub c: usize,
    pub f: usize,
}

impl AutomorphismType {
    pub fn new(p: usize, c: usize, f: usize) -> Self {
        AutomorphismType { p, c, f }
    }

    pub fn length(&self) -> usize {
        self.p * self.c + self.f
    }

    /// The standard `σ`: offset `j ↦ j + 1 (mod p)` on every cycle.
    pub fn sigma(&self) -> Permutation {
        let p = self.p;
        let images = (0..self.length())
            .map(|i| if i < p * self.c { (i / p) * p + (i % p + 1) % p } else { i })
            .collect();
        Permutation::new(images).expect("σ is a bijection")
    }
}

impl fmt::Display for AutomorphismType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-({};{})", self.p, self.c, self.f)
    }
}

/// `g(s) = Σ_{i<s} ⌈d/2ⁱ⌉`, the Griesmer length of a `k = s` code.
pub fn griesmer_sum(d: u64, s: u64) -> u64 {
    let mut total = 0u64;
    for i in 0..s {
        let term = if i >= 64 { 1 } else { d.div_ceil(1u64 << i) };
        if term == 1 {
            // every remaining term is 1
            return total + (s - i);
        }
        total += term;
    }
    total
}

/// Types `p-(c;f)` with `c ≥ 1` that survive the Griesmer-type length
/// bounds on the fixed and cyclic parts and the parity restriction on `c`.
pub fn feasible_types(n: usize, d: usize, p: usize) -> Result<Vec<AutomorphismType>> {
    if p < 3 || !numtheory::is_prime(p as u64) {
        return Err(Error::InvalidParams(format!("{p} is not an odd prime")));
    }
    let order_even = numtheory::order_mod(2, p as u64) % 2 == 0;
    let d = d as u64;
    let mut out = Vec::new();
    for c in 1..=n / p {
        let f = n - p * c;
        if order_even && c % 2 == 1 {
            continue;
        }
        if (c + f) % 2 == 1 {
            continue;
        }
        if ((p * c) as u64) < griesmer_sum(d, ((p - 1) * c / 2) as u64) {
            continue;
        }
        if f > c && (f as u64) < griesmer_sum(d, ((f - c) / 2) as u64) {
            continue;
        }
        out.push(AutomorphismType::new(p, c, f));
    }
    Ok(out)
}

/// Named generator matrices for the fixed subcode `π(F_σ(C))`.
///
/// * `d6`: `100100 / 010010 / 001001`, the `[6,3]` code for type `(4;2)`
/// * `d4`: `1100 / 0011`, for type `(4;0)`
/// * `d8`: `10001000 / 01000100 / 00100010 / 00010001`, for type `(4;4)`
///
/// Any other id is read as a path to a matrix in the text format.
pub fn fixed_gen(id: &str) -> Result<BitMatrix> {
    match id {
        "d6" => BitMatrix::from_strs(&["100100", "010010", "001001"]),
        "d4" => BitMatrix::from_strs(&["1100", "0011"]),
        "d8" => BitMatrix::from_strs(&["10001000", "01000100", "00100010", "00010001"]),
        path => {
            let text = std::fs::read_to_string(Path::new(path))
                .map_err(|e| Error::InvalidParams(format!("unknown fixed generator {path:?}: {e}")))?;
            BitMatrix::from_text(&text)
        }
    }
}

/// Default fixed generator id for `c = 4` and the given number of fixed points.
pub fn default_fixed_gen_id(f: usize) -> Result<&'static str> {
    match f {
        0 => Ok("d4"),
        2 => Ok("d6"),
        4 => Ok("d8"),
        _ => Err(Error::InvalidParams(format!("f = {f}; expected 0, 2 or 4"))),
    }
}

/// Coset representatives of `S₄` printed alongside the length-78 search, in
/// the order they are listed there.
pub const REPS_78: [&str; 6] = ["I", "(1,2,3,4)", "(1,2)", "(1,3)(2,4)", "(1,3,4)", "(1,4,3,2)"];

/// One point of the construction grid. Serializes as the flat record.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct ConstructionParams {
    pub p: usize,
    pub f: usize,
    pub u: [u64; 3],
    pub v: (u64, u64),
    pub s: Permutation,
    pub fixed_gen_id: String,
}

impl ConstructionParams {
    pub fn new(p: usize, f: usize, u: [u64; 3], v: (u64, u64), s: Permutation) -> Result<Self> {
        let id = default_fixed_gen_id(f)?.to_string();
        if s.degree() != 4 {
            return Err(Error::InvalidParams(format!("s must permute the 4 cycles, got degree {}", s.degree())));
        }
        Ok(ConstructionParams { p, f, u, v, s, fixed_gen_id: id })
    }

    pub fn automorphism_type(&self) -> AutomorphismType {
        AutomorphismType::new(self.p, 4, self.f)
    }

    pub fn length(&self) -> usize {
        4 * self.p + self.f
    }

    /// `u` reduced modulo the order of `b`.
    pub fn reduced_u(&self, ctx: &FieldContext) -> [u64; 3] {
        let m = ctx.b_order();
        [self.u[0] % m, self.u[1] % m, self.u[2] % m]
    }

    /// Checks the pair equation, the ranges and that some congruence class holds.
    pub fn validate(&self, ctx: &FieldContext) -> Result<()> {
        if ctx.p != self.p {
            return Err(Error::ModulusMismatch(self.p, ctx.p));
        }
        let (v1, v2) = self.v;
        if !(1 <= v1 && v1 < v2 && v2 <= ctx.q - 2) {
            return Err(Error::InvalidParams(format!("need 1 ≤ v1 < v2 ≤ {}, got ({v1},{v2})", ctx.q - 2)));
        }
        if ctx.a_pow(v1).add(&ctx.a_pow(v2))? != ctx.e {
            return Err(Error::InvalidParams(format!("a^{v1} + a^{v2} ≠ e")));
        }
        if dihedral_filter(self.reduced_u(ctx), ctx.b_order()).is_empty() {
            return Err(Error::InvalidParams(format!(
                "u = {:?} satisfies none of the congruence conditions mod {}",
                self.u,
                ctx.b_order()
            )));
        }
        Ok(())
    }

    pub fn fixed_gen(&self) -> Result<BitMatrix> {
        let g = fixed_gen(&self.fixed_gen_id)?;
        if g.ncols() != 4 + self.f {
            return Err(Error::Shape(format!(
                "fixed generator {} has {} columns, expected {}",
                self.fixed_gen_id,
                g.ncols(),
                4 + self.f
            )));
        }
        Ok(g)
    }
}

impl fmt::Display for ConstructionParams {
    /// Flat record `p f u1 u2 u3 v1 v2 s fixed_gen_id`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} {} {} {} {} {} {}",
            self.p, self.f, self.u[0], self.u[1], self.u[2], self.v.0, self.v.1, self.s, self.fixed_gen_id
        )
    }
}

impl FromStr for ConstructionParams {
    type Err = Error;

    fn from_str(line: &str) -> Result<Self> {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 9 {
            return Err(Error::Parse(format!("expected 9 fields `p f u1 u2 u3 v1 v2 s fixed_gen_id`, got {line:?}")));
        }
        let num = |i: usize| -> Result<u64> {
            fields[i].parse().map_err(|_| Error::Parse(format!("field {} of {line:?} is not an integer", i + 1)))
        };
        Ok(ConstructionParams {
            p: num(0)? as usize,
            f: num(1)? as usize,
            u: [num(2)?, num(3)?, num(4)?],
            v: (num(5)?, num(6)?),
            s: Permutation::from_cycles(4, fields[7])?,
            fixed_gen_id: fields[8].to_string(),
        })
    }
}

impl From<ConstructionParams> for String {
    fn from(p: ConstructionParams) -> String {
        p.to_string()
    }
}

impl TryFrom<String> for ConstructionParams {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// Congruence classes satisfied by `u` modulo `(q+1)/p`:
/// 1. `u₁+u₂ ≡ u₃`, 2. `u₂+u₃ ≡ u₁`, 3. `u₁+u₃ ≡ u₂`, 4. `u₁=u₂=u₃=0`.
pub fn dihedral_filter(u: [u64; 3], modulus: u64) -> Vec<u8> {
    let [u1, u2, u3] = u.map(|x| x % modulus);
    let mut classes = Vec::new();
    if (u1 + u2) % modulus == u3 {
        classes.push(1);
    }
    if (u2 + u3) % modulus == u1 {
        classes.push(2);
    }
    if (u1 + u3) % modulus == u2 {
        classes.push(3);
    }
    if u1 == 0 && u2 == 0 && u3 == 0 {
        classes.push(4);
    }
    classes
}

/// Relabels the first `c` coordinates by `s` (bit `i` moves to `s(i)`) and
/// expands each into a constant run of length `p`; fixed points pass through.
pub fn lift_fixed(fixed_gen: &BitMatrix, ty: AutomorphismType, s: &Permutation) -> Result<BitMatrix> {
    let AutomorphismType { p, c, f } = ty;
    if fixed_gen.ncols() != c + f || s.degree() != c {
        return Err(Error::Shape(format!(
            "fixed generator has {} columns and s has degree {}; type {ty} needs {} and {c}",
            fixed_gen.ncols(),
            s.degree(),
            c + f
        )));
    }
    let relabel = s.extend(&Permutation::identity(f));
    let mut rows = Vec::with_capacity(fixed_gen.nrows());
    for row in fixed_gen.rows() {
        let moved = row.apply_permutation(&relabel)?;
        let mut out = BitVector::zeros(p * c + f);
        for i in moved.iter_ones() {
            if i < c {
                for j in 0..p {
                    out.set(i * p + j, true);
                }
            } else {
                out.set(p * c + (i - c), true);
            }
        }
        rows.push(out);
    }
    BitMatrix::new(p * c + f, rows)
}

/// `π`: one bit per cycle plus the fixed points, for a `σ`-invariant vector.
pub fn project_fixed(v: &BitVector, ty: AutomorphismType) -> Result<BitVector> {
    let AutomorphismType { p, c, f } = ty;
    if v.len() != p * c + f {
        return Err(Error::Shape(format!("vector of length {} for type {ty}", v.len())));
    }
    let mut out = BitVector::zeros(c + f);
    for i in 0..c {
        let first = v.get(i * p);
        if (1..p).any(|j| v.get(i * p + j) != first) {
            return Err(Error::InvalidParams(format!("vector is not constant on cycle {}", i + 1)));
        }
        out.set(i, first);
    }
    for j in 0..f {
        out.set(c + j, v.get(p * c + j));
    }
    Ok(out)
}

/// The two rows over `P` that generate `φ(E_σ(C)*)`.
pub fn skew_rows(ctx: &FieldContext, params: &ConstructionParams) -> Result<[[RingElement; 4]; 2]> {
    params.validate(ctx)?;
    let [u1, u2, u3] = params.reduced_u(ctx);
    let (v1, v2) = params.v;
    let zero = RingElement::zero(ctx.p);
    let b3 = ctx.b_pow(u3);
    Ok([
        [ctx.b_pow(u1), zero.clone(), ctx.a_pow(v1), ctx.a_pow(v2).mul(&b3)?],
        [zero, ctx.b_pow(u2), ctx.a_pow(v2), ctx.a_pow(v1).mul(&b3)?],
    ])
}

/// Binary basis of `E_σ(C)`: `xⁱ·row` for `i < p − 1`, zero on fixed points.
pub fn lift_skew(ctx: &FieldContext, params: &ConstructionParams) -> Result<BitMatrix> {
    let p = ctx.p;
    let n = params.length();
    let mut rows = Vec::with_capacity(2 * (p - 1));
    for prow in skew_rows(ctx, params)? {
        for i in 0..p - 1 {
            let mut out = BitVector::zeros(n);
            for (block, entry) in prow.iter().enumerate() {
                for j in entry.shift(i).coeffs().iter_ones() {
                    out.set(block * p + j, true);
                }
            }
            rows.push(out);
        }
    }
    BitMatrix::new(n, rows)
}

/// `F ⊕ E`, in canonical RREF, checked to be self-dual.
pub fn build_code(ctx: &FieldContext, params: &ConstructionParams) -> Result<BitMatrix> {
    let fixed = lift_fixed(&params.fixed_gen()?, params.automorphism_type(), &params.s)?;
    let skew = lift_skew(ctx, params)?;
    let code = fixed.stack(&skew)?.canonical();
    if !code.is_self_dual()? {
        return Err(Error::ConstructionBug(format!(
            "parameters {params} produced a non-self-dual code of rank {}",
            code.nrows()
        )));
    }
    Ok(code)
}

/// The ten involutions `τ` with `τστ = σ⁻¹` on the `4p` cyclic coordinates.
#[derive(Clone, Debug)]
pub struct InvolutionCatalog {
    pub p: usize,
    pub involutions: Vec<Permutation>,
}

/// Block action of each catalog entry: `Some(j)` sends cycle `i` to cycle
/// `j` reversed; `i ↦ i` is a reflection within the cycle.
const CATALOG_BLOCKS: [[usize; 4]; 10] = [
    [1, 0, 3, 2],
    [2, 3, 0, 1],
    [3, 2, 1, 0],
    [0, 1, 2, 3],
    [0, 1, 3, 2],
    [0, 2, 1, 3],
    [0, 3, 2, 1],
    [1, 0, 2, 3],
    [2, 1, 0, 3],
    [3, 1, 2, 0],
];

impl InvolutionCatalog {
    pub fn new(p: usize) -> Self {
        let involutions = CATALOG_BLOCKS
            .iter()
            .map(|blocks| {
                let images = (0..4 * p).map(|i| blocks[i / p] * p + (p - 1 - i % p)).collect();
                Permutation::new(images).expect("block reversal is a bijection")
            })
            .collect();
        InvolutionCatalog { p, involutions }
    }

    /// Entry `k` (1-based) extended to the fixed points by `ext`.
    pub fn extended(&self, k: usize, ext: &Permutation) -> Permutation {
        self.involutions[k - 1].extend(ext)
    }
}

/// All involutions (including the identity) of `0..f`.
pub fn involutions_of(f: usize) -> Vec<Permutation> {
    Permutation::all(f).into_iter().filter(|g| g.then(g).is_identity()).collect()
}

/// Evidence that a code has a dihedral group `⟨σ, τ⟩` of order `2p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DihedralEvidence {
    /// 1-based catalog index.
    pub catalog_index: usize,
    pub sigma_power: usize,
    pub fixed_action: Permutation,
}

/// Looks for `σᵏτ` (with `τ` from the catalog, extended by an involution of
/// the fixed points) preserving the code, after checking `σ` itself does.
pub fn dihedral_evidence(code: &BitMatrix, ty: AutomorphismType) -> Result<Option<DihedralEvidence>> {
    if ty.c != 4 {
        return Err(Error::UnsupportedCase(format!("the involution catalog covers c = 4 only, got {ty}")));
    }
    let sigma = ty.sigma();
    if !code.preserved_by(&sigma)? {
        return Ok(None);
    }
    let catalog = InvolutionCatalog::new(ty.p);
    let exts = involutions_of(ty.f);
    for k in 1..=catalog.involutions.len() {
        for ext in &exts {
            let tau = catalog.extended(k, ext);
            let mut g = tau;
            for power in 0..ty.p {
                if code.preserved_by(&g)? {
                    return Ok(Some(DihedralEvidence { catalog_index: k, sigma_power: power, fixed_action: ext.clone() }));
                }
                g = g.then(&sigma);
            }
        }
    }
    Ok(None)
}

/// Representatives `s` of the cosets `s∘S̄` in the symmetric group on the
/// cycle coordinates, where `S̄` is the restriction to those coordinates of
/// the automorphisms of `fixed_gen` that fix `fixed_points` setwise.
///
/// Entries of `preferred` are used as representatives of their cosets and
/// come first; remaining cosets are represented by their least element.
pub fn coset_reps(fixed_gen: &BitMatrix, fixed_points: &[usize], preferred: &[Permutation]) -> Result<Vec<Permutation>> {
    let n = fixed_gen.ncols();
    if n > 8 {
        return Err(Error::TooLarge(format!("automorphism search over S_{n} (limit 8)")));
    }
    let is_fixed: Vec<bool> = (0..n).map(|i| fixed_points.contains(&i)).collect();
    let cyc: Vec<usize> = (0..n).filter(|&i| !is_fixed[i]).collect();
    let position = |x: usize| cyc.iter().position(|&y| y == x);
    let c = cyc.len();
    let mut stab: Vec<Permutation> = Vec::new();
    for g in Permutation::all(n) {
        if (0..n).any(|i| is_fixed[i] != is_fixed[g.image(i)]) || !fixed_gen.preserved_by(&g)? {
            continue;
        }
        let images = cyc.iter().map(|&x| position(g.image(x)).expect("cycle set is stable")).collect();
        let h = Permutation::new(images)?;
        if !stab.contains(&h) {
            stab.push(h);
        }
    }
    let coset = |s: &Permutation| -> Vec<Permutation> { stab.iter().map(|h| h.then(s)).collect() };
    let mut covered: Vec<Permutation> = Vec::new();
    let mut reps = Vec::new();
    for s in preferred {
        if s.degree() != c {
            return Err(Error::Shape(format!("preferred representative {s} is not of degree {c}")));
        }
        if !covered.contains(s) {
            covered.extend(coset(s));
            reps.push(s.clone());
        }
    }
    for s in Permutation::all(c) {
        if !covered.contains(&s) {
            covered.extend(coset(&s));
            reps.push(s);
        }
    }
    Ok(reps)
}

/// For each congruence class `k`, the representatives `s` for which the
/// lifted fixed subcode is preserved by catalog entry `k` (for some
/// involutive action on the fixed points).
pub fn pair_conditions(
    ty: AutomorphismType,
    fixed_gen: &BitMatrix,
    reps: &[Permutation],
) -> Result<BTreeMap<u8, Vec<Permutation>>> {
    if ty.c != 4 {
        return Err(Error::UnsupportedCase(format!("congruence pairing is defined for c = 4 only, got {ty}")));
    }
    let catalog = InvolutionCatalog::new(ty.p);
    let exts = involutions_of(ty.f);
    let mut out = BTreeMap::new();
    for class in 1..=4u8 {
        let mut allowed = Vec::new();
        for s in reps {
            let lifted = lift_fixed(fixed_gen, ty, s)?;
            let mut ok = false;
            for ext in &exts {
                if lifted.preserved_by(&catalog.extended(class as usize, ext))? {
                    ok = true;
                    break;
                }
            }
            if ok {
                allowed.push(s.clone());
            }
        }
        out.insert(class, allowed);
    }
    Ok(out)
}

/// The class-to-representative table as listed with the length-78 search.
/// It agrees with [`pair_conditions`] except that `(1,4,3,2)` is filed
/// under class 3 instead of class 1.
pub fn printed_pairing_78() -> BTreeMap<u8, Vec<Permutation>> {
    let table: [(u8, &[&str]); 4] = [
        (1, &["(1,2,3,4)"]),
        (2, &["(1,2)", "(1,3,4)"]),
        (3, &["I", "(1,3)(2,4)", "(1,4,3,2)"]),
        (4, &REPS_78),
    ];
    table
        .iter()
        .map(|(k, reps)| (*k, reps.iter().map(|s| Permutation::from_cycles(4, s).expect("valid literal")).collect()))
        .collect()
}

/// Representatives and pairing for a type, preferring [`REPS_78`] labels.
pub fn standard_pairing(
    ty: AutomorphismType,
    fixed_gen: &BitMatrix,
) -> Result<(Vec<Permutation>, BTreeMap<u8, Vec<Permutation>>)> {
    let preferred: Vec<Permutation> =
        REPS_78.iter().map(|s| Permutation::from_cycles(ty.c, s)).collect::<Result<_>>()?;
    let fixed_points: Vec<usize> = (ty.c..ty.c + ty.f).collect();
    let reps = coset_reps(fixed_gen, &fixed_points, &preferred)?;
    let pairing = pair_conditions(ty, fixed_gen, &reps)?;
    Ok((reps, pairing))
}
