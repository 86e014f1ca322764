//! Arithmetic in `R = F₂[x]/(xᵖ − 1)` and its even-weight subring `P`.
//!
//! When 2 is a primitive root modulo `p`, `P` is a field with `2^(p−1)`
//! elements whose identity is `e(x) = x + x² + ⋯ + x^(p−1)`. [`FieldContext`]
//! fixes a pair of generators `a` (order `q − 1`) and `b` (order `(q + 1)/p`)
//! with `q = 2^((p−1)/2)`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::numtheory;

/// A polynomial modulo `xᵖ − 1`; the coefficient of `xⁱ` is bit `i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RingElement {
    p: usize,
    coeffs: BitVector,
}

impl RingElement {
    pub fn zero(p: usize) -> Self {
        RingElement { p, coeffs: BitVector::zeros(p) }
    }

    /// The constant polynomial 1 (identity of `R`, not of `P`).
    pub fn one(p: usize) -> Self {
        Self::monomial(p, 0)
    }

    pub fn monomial(p: usize, k: usize) -> Self {
        RingElement { p, coeffs: BitVector::unit(p, k % p) }
    }

    /// `e(x) = x + ⋯ + x^(p−1)`, the identity of `P`.
    pub fn field_identity(p: usize) -> Self {
        RingElement { p, coeffs: BitVector::from_indices(p, 1..p) }
    }

    pub fn from_exponents(p: usize, exps: impl IntoIterator<Item = usize>) -> Self {
        let mut coeffs = BitVector::zeros(p);
        for k in exps {
            coeffs.flip(k % p);
        }
        RingElement { p, coeffs }
    }

    pub fn from_coeffs(coeffs: BitVector) -> Self {
        RingElement { p: coeffs.len(), coeffs }
    }

    #[inline]
    pub fn modulus(&self) -> usize {
        self.p
    }

    pub fn coeffs(&self) -> &BitVector {
        &self.coeffs
    }

    pub fn exponents(&self) -> Vec<usize> {
        self.coeffs.iter_ones().collect()
    }

    pub fn weight(&self) -> usize {
        self.coeffs.weight()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_zero()
    }

    /// Even weight, i.e. a member of `P`.
    pub fn in_even_subring(&self) -> bool {
        self.weight() % 2 == 0
    }

    fn check_modulus(&self, other: &RingElement) -> Result<()> {
        if self.p != other.p {
            return Err(Error::ModulusMismatch(self.p, other.p));
        }
        Ok(())
    }

    pub fn add(&self, other: &RingElement) -> Result<RingElement> {
        self.check_modulus(other)?;
        Ok(RingElement { p: self.p, coeffs: self.coeffs.xor(&other.coeffs) })
    }

    /// Multiplication by `x^k`: a cyclic shift of the coefficients.
    pub fn shift(&self, k: usize) -> RingElement {
        let k = k % self.p;
        if self.p <= 64 {
            let w = self.coeffs.words().first().copied().unwrap_or(0);
            return RingElement { p: self.p, coeffs: BitVector::from_words(self.p, vec![rotl(w, k, self.p)]) };
        }
        let mut out = BitVector::zeros(self.p);
        for i in self.coeffs.iter_ones() {
            out.set((i + k) % self.p, true);
        }
        RingElement { p: self.p, coeffs: out }
    }

    /// Product reduced modulo `xᵖ − 1`.
    pub fn mul(&self, other: &RingElement) -> Result<RingElement> {
        self.check_modulus(other)?;
        if self.p <= 64 {
            let u = self.coeffs.words().first().copied().unwrap_or(0);
            let v = other.coeffs.words().first().copied().unwrap_or(0);
            let mut acc = 0u64;
            let mut rest = u;
            while rest != 0 {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                acc ^= rotl(v, i, self.p);
            }
            return Ok(RingElement { p: self.p, coeffs: BitVector::from_words(self.p, vec![acc]) });
        }
        let mut acc = BitVector::zeros(self.p);
        for i in self.coeffs.iter_ones() {
            acc.xor_assign(&other.shift(i).coeffs);
        }
        Ok(RingElement { p: self.p, coeffs: acc })
    }

    /// Square-and-multiply. `u⁰` is `e` for nonzero `u ∈ P` and `1` otherwise.
    pub fn pow(&self, k: u64) -> Result<RingElement> {
        if k == 0 {
            if self.is_zero() {
                return Err(Error::Undefined("0^0".into()));
            }
            return Ok(if self.in_even_subring() {
                RingElement::field_identity(self.p)
            } else {
                RingElement::one(self.p)
            });
        }
        let mut base = self.clone();
        let mut acc: Option<RingElement> = None;
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base)?,
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc.expect("k > 0"))
    }

    /// `u(x) ↦ u(x^t)`; for `t = 2^j` this is the `j`-th Frobenius power.
    pub fn substitute(&self, t: usize) -> RingElement {
        let mut out = BitVector::zeros(self.p);
        for i in self.coeffs.iter_ones() {
            out.flip((i * t) % self.p);
        }
        RingElement { p: self.p, coeffs: out }
    }

    /// Compact form: `0x` followed by the coefficients read as a binary
    /// number (coefficient of `xⁱ` is bit `i`).
    pub fn to_hex_form(&self) -> String {
        let mut digits = Vec::new();
        for nibble in 0..self.p.div_ceil(4) {
            let mut d = 0u32;
            for b in 0..4 {
                let i = 4 * nibble + b;
                if i < self.p && self.coeffs.get(i) {
                    d |= 1 << b;
                }
            }
            digits.push(char::from_digit(d, 16).unwrap());
        }
        while digits.len() > 1 && digits.last() == Some(&'0') {
            digits.pop();
        }
        digits.reverse();
        format!("0x{}", digits.into_iter().collect::<String>())
    }

    /// Parses either the exponent form (`x^1+x^2+1`) or the hex form (`0x66`).
    pub fn parse(p: usize, text: &str) -> Result<RingElement> {
        let text: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if let Some(hex) = text.strip_prefix("0x") {
            let mut coeffs = BitVector::zeros(p);
            for (nibble, ch) in hex.chars().rev().enumerate() {
                let d = ch.to_digit(16).ok_or_else(|| Error::Parse(format!("bad hex digit {ch:?}")))?;
                for b in 0..4 {
                    if d >> b & 1 == 1 {
                        let i = 4 * nibble + b;
                        if i >= p {
                            return Err(Error::Parse(format!("{text} has a term of degree ≥ {p}")));
                        }
                        coeffs.set(i, true);
                    }
                }
            }
            return Ok(RingElement { p, coeffs });
        }
        if text == "0" {
            return Ok(RingElement::zero(p));
        }
        let mut exps = Vec::new();
        for term in text.split('+') {
            let k = match term {
                "1" => 0,
                "x" => 1,
                t => t
                    .strip_prefix("x^")
                    .and_then(|e| e.parse::<usize>().ok())
                    .ok_or_else(|| Error::Parse(format!("bad term {t:?}")))?,
            };
            exps.push(k);
        }
        Ok(RingElement::from_exponents(p, exps))
    }
}

#[inline]
fn rotl(w: u64, k: usize, p: usize) -> u64 {
    if k == 0 {
        return w;
    }
    let mask = if p == 64 { u64::MAX } else { (1u64 << p) - 1 };
    ((w << k) | (w >> (p - k))) & mask
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let terms: Vec<String> =
            self.coeffs.iter_ones().map(|i| if i == 0 { "1".to_string() } else { format!("x^{i}") }).collect();
        f.write_str(&terms.join("+"))
    }
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RingElement[p={}]({self})", self.p)
    }
}

impl Serialize for RingElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        format!("{}:{}", self.p, self.to_hex_form()).serialize(s)
    }
}

impl<'de> Deserialize<'de> for RingElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        let (p, body) = s.split_once(':').ok_or_else(|| serde::de::Error::custom("expected `p:element`"))?;
        let p = usize::from_str(p).map_err(serde::de::Error::custom)?;
        RingElement::parse(p, body).map_err(serde::de::Error::custom)
    }
}

pub fn multiply(u: &RingElement, v: &RingElement) -> Result<RingElement> {
    u.mul(v)
}

pub fn power(u: &RingElement, k: u64) -> Result<RingElement> {
    u.pow(k)
}

/// `uᵠ`, the nontrivial Galois automorphism of `P` over its subfield of size `q`.
pub fn conjugate(u: &RingElement) -> RingElement {
    let p = u.modulus();
    let q_mod_p = numtheory::pow_mod(2, (p as u64 - 1) / 2, p as u64) as usize;
    u.substitute(q_mod_p)
}

/// Multiplicative order of `u` in `P^×`.
pub fn multiplicative_order(u: &RingElement) -> Result<u64> {
    let p = u.modulus();
    check_field_modulus(p)?;
    let group_order = (1u64 << (p - 1)) - 1;
    order_in_group(u, group_order, &numtheory::factorize(group_order))
}

fn order_in_group(u: &RingElement, group_order: u64, factors: &[(u64, u32)]) -> Result<u64> {
    if u.is_zero() || !u.in_even_subring() {
        return Err(Error::NotAUnit(format!("{u} is not a nonzero element of P")));
    }
    let e = RingElement::field_identity(u.modulus());
    let mut failure = None;
    if u.pow(group_order)? != e {
        return Err(Error::NotAUnit(format!("{u} is not invertible")));
    }
    let order = numtheory::order_from_factors(group_order, factors, |k| match u.pow(k) {
        Ok(x) => x == e,
        Err(err) => {
            failure = Some(err);
            false
        }
    });
    match failure {
        Some(err) => Err(err),
        None => Ok(order),
    }
}

fn check_field_modulus(p: usize) -> Result<()> {
    if p < 3 || p % 2 == 0 || !numtheory::is_prime(p as u64) {
        return Err(Error::InvalidParams(format!("{p} is not an odd prime")));
    }
    if p > 61 {
        return Err(Error::TooLarge(format!("p = {p} exceeds the supported range p ≤ 61")));
    }
    if numtheory::order_mod(2, p as u64) != p as u64 - 1 {
        return Err(Error::HypothesisViolated(p));
    }
    Ok(())
}

/// The field `P` for a prime `p` with 2 as a primitive root, with generators
/// `a` of order `q − 1` and `b` of order `(q + 1)/p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldContext {
    pub p: usize,
    pub q: u64,
    pub e: RingElement,
    pub a: RingElement,
    pub b: RingElement,
}

const A19: [usize; 8] = [1, 2, 5, 6, 13, 14, 17, 18];
const B19: [usize; 10] = [4, 7, 8, 9, 10, 11, 12, 15, 16, 17];
const A29: [usize; 14] = [1, 3, 4, 6, 9, 10, 11, 18, 19, 20, 23, 25, 26, 28];
const B29: [usize; 16] = [1, 2, 3, 4, 6, 7, 10, 12, 13, 14, 17, 19, 20, 21, 22, 28];

/// The reduced set of `(v₁, v₂)` pairs used for the length-78 classification.
pub const V19_PUBLISHED: [(u64, u64); 29] = [
    (1, 93),
    (6, 13),
    (7, 505),
    (9, 59),
    (15, 37),
    (19, 105),
    (20, 99),
    (21, 87),
    (25, 251),
    (29, 178),
    (31, 193),
    (34, 175),
    (39, 111),
    (43, 246),
    (45, 61),
    (46, 255),
    (49, 119),
    (63, 190),
    (73, 219),
    (83, 138),
    (91, 167),
    (94, 169),
    (103, 108),
    (106, 239),
    (114, 221),
    (125, 187),
    (155, 213),
    (179, 220),
    (191, 242),
];

impl FieldContext {
    /// Context with explicitly chosen `a` and `b`; their orders are checked.
    pub fn with_generators(p: usize, a: RingElement, b: RingElement) -> Result<Self> {
        check_field_modulus(p)?;
        if a.modulus() != p || b.modulus() != p {
            return Err(Error::ModulusMismatch(a.modulus().max(b.modulus()), p));
        }
        let q = 1u64 << ((p - 1) / 2);
        let ctx = FieldContext { p, q, e: RingElement::field_identity(p), a, b };
        let (oa, ob) = (ctx.order(&ctx.a)?, ctx.order(&ctx.b)?);
        if oa != q - 1 {
            return Err(Error::InvalidParams(format!("a has order {oa}, expected {}", q - 1)));
        }
        if ob != ctx.b_order() {
            return Err(Error::InvalidParams(format!("b has order {ob}, expected {}", ctx.b_order())));
        }
        Ok(ctx)
    }

    /// The explicit `a`, `b` used for the published length-78 (`p = 19`) and
    /// length-116 (`p = 29`) constructions.
    pub fn reference(p: usize) -> Option<Self> {
        let (a, b): (&[usize], &[usize]) = match p {
            19 => (&A19, &B19),
            29 => (&A29, &B29),
            _ => return None,
        };
        let a = RingElement::from_exponents(p, a.iter().copied());
        let b = RingElement::from_exponents(p, b.iter().copied());
        Some(FieldContext::with_generators(p, a, b).expect("reference generators have the stated orders"))
    }

    /// Reference elements when available, otherwise a deterministic search.
    pub fn for_prime(p: usize) -> Result<Self> {
        match Self::reference(p) {
            Some(ctx) => Ok(ctx),
            None => find_generators(p, None),
        }
    }

    /// `(q + 1)/p`, the order of `b` and the modulus of the `u` exponents.
    pub fn b_order(&self) -> u64 {
        (self.q + 1) / self.p as u64
    }

    pub fn group_order(&self) -> u64 {
        (1u64 << (self.p - 1)) - 1
    }

    pub fn order(&self, u: &RingElement) -> Result<u64> {
        if u.modulus() != self.p {
            return Err(Error::ModulusMismatch(u.modulus(), self.p));
        }
        let n = self.group_order();
        order_in_group(u, n, &numtheory::factorize(n))
    }

    pub fn a_pow(&self, k: u64) -> RingElement {
        self.a.pow(k).expect("a is a unit")
    }

    pub fn b_pow(&self, k: u64) -> RingElement {
        self.b.pow(k).expect("b is a unit")
    }

    /// Generates the successive powers `a⁰ … a^(q−2)`.
    pub fn a_powers(&self) -> Vec<RingElement> {
        let mut out = Vec::with_capacity(self.q as usize - 1);
        let mut x = self.e.clone();
        for _ in 0..self.q - 1 {
            out.push(x.clone());
            x = x.mul(&self.a).expect("same modulus");
        }
        out
    }
}

/// Finds a primitive element `α` of `P` and returns `a = α^(q+1)`,
/// `b = α^((q−1)p)`.
///
/// Candidates are even-weight coefficient vectors visited in increasing
/// binary order; a seed only moves the starting point.
pub fn find_generators(p: usize, seed: Option<u64>) -> Result<FieldContext> {
    check_field_modulus(p)?;
    let q = 1u64 << ((p - 1) / 2);
    let group_order = (1u64 << (p - 1)) - 1;
    let factors = numtheory::factorize(group_order);
    let space = 1u64 << p;
    let start = match seed {
        None => 1,
        Some(s) => ChaCha8Rng::seed_from_u64(s).gen_range(1..space),
    };
    for offset in 0..space {
        let t = (start + offset) % space;
        if t == 0 || t.count_ones() % 2 == 1 {
            continue;
        }
        let cand = RingElement::from_coeffs(BitVector::from_words(p, vec![t]));
        if order_in_group(&cand, group_order, &factors)? == group_order {
            let a = cand.pow(q + 1)?;
            let b = cand.pow((q - 1) * p as u64)?;
            return FieldContext::with_generators(p, a, b);
        }
    }
    Err(Error::Undefined(format!("no primitive element found for p = {p}")))
}

/// All `1 ≤ v₁ < v₂ ≤ q − 2` with `a^v₁ + a^v₂ = e`, without any reduction
/// by equivalence.
pub fn find_v_pairs(ctx: &FieldContext) -> Vec<(u64, u64)> {
    let powers = ctx.a_powers();
    let index: HashMap<&BitVector, u64> = powers.iter().enumerate().map(|(i, x)| (x.coeffs(), i as u64)).collect();
    let top = ctx.q - 2;
    let mut pairs = Vec::new();
    for v1 in 1..=top {
        let target = ctx.e.add(&powers[v1 as usize]).expect("same modulus");
        if let Some(&v2) = index.get(target.coeffs()) {
            if v2 > v1 && v2 <= top {
                pairs.push((v1, v2));
            }
        }
    }
    pairs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_wraparound() {
        for p in [7, 19, 29, 67] {
            let x = RingElement::monomial(p, 1);
            let xp1 = RingElement::monomial(p, p - 1);
            assert_eq!(x.mul(&xp1).unwrap(), RingElement::one(p));
        }
    }

    #[test]
    fn identity_is_idempotent() {
        let e = RingElement::field_identity(19);
        assert_eq!(e.mul(&e).unwrap(), e);
        let ctx = FieldContext::reference(19).unwrap();
        assert_eq!(ctx.a.mul(&e).unwrap(), ctx.a);
        assert_eq!(ctx.b.mul(&e).unwrap(), ctx.b);
    }

    #[test]
    fn modulus_mismatch() {
        let r = RingElement::one(19).mul(&RingElement::one(29));
        assert!(matches!(r, Err(Error::ModulusMismatch(19, 29))));
    }

    #[test]
    fn reference_orders_p19() {
        let ctx = FieldContext::reference(19).unwrap();
        assert_eq!(ctx.q, 512);
        assert_eq!(ctx.order(&ctx.a).unwrap(), 511);
        assert_eq!(ctx.order(&ctx.b).unwrap(), 27);
        assert_eq!(ctx.a.mul(&ctx.a_pow(510)).unwrap(), ctx.e);
        assert_eq!(ctx.a_pow(511), ctx.e);
        assert_eq!(ctx.b_pow(27), ctx.e);
        assert_eq!(ctx.order(&ctx.e).unwrap(), 1);
    }

    #[test]
    fn reference_orders_p29() {
        let ctx = FieldContext::reference(29).unwrap();
        assert_eq!(ctx.q, 16384);
        assert_eq!(ctx.order(&ctx.a).unwrap(), 16383);
        assert_eq!(ctx.order(&ctx.b).unwrap(), 565);
        assert_eq!(ctx.b_pow(565), ctx.e);
    }

    #[test]
    fn power_zero_cases() {
        let ctx = FieldContext::reference(19).unwrap();
        assert_eq!(ctx.a.pow(0).unwrap(), ctx.e);
        assert!(matches!(RingElement::zero(19).pow(0), Err(Error::Undefined(_))));
    }

    #[test]
    fn order_rejects_non_units() {
        assert!(matches!(multiplicative_order(&RingElement::zero(19)), Err(Error::NotAUnit(_))));
        assert!(matches!(multiplicative_order(&RingElement::one(19)), Err(Error::NotAUnit(_))));
    }

    #[test]
    fn conjugation_is_an_involution() {
        let ctx = FieldContext::reference(19).unwrap();
        assert_eq!(conjugate(&ctx.e), ctx.e);
        assert_eq!(conjugate(&conjugate(&ctx.a)), ctx.a);
        // a lies in the subfield of size q; b is inverted by conjugation
        assert_eq!(conjugate(&ctx.a), ctx.a);
        assert_eq!(conjugate(&ctx.b).mul(&ctx.b).unwrap(), ctx.e);
        // conjugation agrees with raising to the q-th power
        let u = RingElement::from_exponents(19, [0, 3, 4, 11]);
        assert_eq!(conjugate(&u), u.pow(ctx.q).unwrap());
    }

    #[test]
    fn norm_lands_in_subfield() {
        let ctx = FieldContext::reference(19).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let t: u64 = rng.gen_range(1..(1 << 19));
            let u = RingElement::from_coeffs(BitVector::from_words(19, vec![t]));
            if !u.in_even_subring() || u.is_zero() {
                continue;
            }
            let norm = conjugate(&u).mul(&u).unwrap();
            assert_eq!((ctx.q - 1) % ctx.order(&norm).unwrap(), 0);
        }
    }

    #[test]
    fn generator_search() {
        let ctx = find_generators(19, None).unwrap();
        assert_eq!((ctx.q, ctx.order(&ctx.a).unwrap(), ctx.order(&ctx.b).unwrap()), (512, 511, 27));
        let seeded = find_generators(19, Some(3)).unwrap();
        assert_eq!(seeded.order(&seeded.b).unwrap(), 27);
        let ctx = find_generators(29, None).unwrap();
        assert_eq!((ctx.q, ctx.order(&ctx.a).unwrap(), ctx.order(&ctx.b).unwrap()), (16384, 16383, 565));
        assert!(matches!(find_generators(7, None), Err(Error::HypothesisViolated(7))));
    }

    #[test]
    fn text_forms_round_trip() {
        let ctx = FieldContext::reference(19).unwrap();
        assert_eq!(ctx.a.to_string(), "x^1+x^2+x^5+x^6+x^13+x^14+x^17+x^18");
        assert_eq!(RingElement::parse(19, &ctx.a.to_string()).unwrap(), ctx.a);
        assert_eq!(RingElement::parse(19, &ctx.a.to_hex_form()).unwrap(), ctx.a);
        assert_eq!(RingElement::parse(19, "1+x+x^3").unwrap().exponents(), vec![0, 1, 3]);
        assert!(RingElement::parse(19, "x^2+y").is_err());
    }

    #[test]
    fn v_pairs_p19() {
        let ctx = FieldContext::reference(19).unwrap();
        let pairs = find_v_pairs(&ctx);
        for pair in V19_PUBLISHED.iter().chain(&[(215, 335), (35, 231)]) {
            assert!(pairs.contains(pair), "{pair:?} missing");
        }
        for &(v1, v2) in &pairs {
            assert_eq!(ctx.a_pow(v1).add(&ctx.a_pow(v2)).unwrap(), ctx.e);
        }
    }
}
