//! Affine expressions in named parameters with exact rational coefficients,
//! and a solver for linear systems whose right-hand sides are such
//! expressions.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num::{BigInt, BigRational, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// `constant + Σ coeff·name`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Affine {
    pub constant: Q,
    pub coeffs: BTreeMap<String, Q>,
}

impl Affine {
    pub fn constant(c: Q) -> Self {
        Affine { constant: c, coeffs: BTreeMap::new() }
    }

    pub fn int(c: i64) -> Self {
        Self::constant(q(c))
    }

    pub fn param(name: &str) -> Self {
        Affine { constant: Q::zero(), coeffs: BTreeMap::from([(name.to_string(), Q::one())]) }
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.is_constant() && self.constant.is_zero()
    }

    pub fn coeff(&self, name: &str) -> Q {
        self.coeffs.get(name).cloned().unwrap_or_else(Q::zero)
    }

    pub fn params(&self) -> impl Iterator<Item = &String> {
        self.coeffs.keys()
    }

    fn tidy(mut self) -> Self {
        self.coeffs.retain(|_, v| !v.is_zero());
        self
    }

    pub fn add(&self, other: &Affine) -> Affine {
        let mut out = self.clone();
        out.constant += &other.constant;
        for (k, v) in &other.coeffs {
            *out.coeffs.entry(k.clone()).or_insert_with(Q::zero) += v;
        }
        out.tidy()
    }

    pub fn scale(&self, s: &Q) -> Affine {
        Affine {
            constant: &self.constant * s,
            coeffs: self.coeffs.iter().map(|(k, v)| (k.clone(), v * s)).collect(),
        }
        .tidy()
    }

    pub fn sub(&self, other: &Affine) -> Affine {
        self.add(&other.scale(&-Q::one()))
    }

    /// Replaces `name` by `value`.
    pub fn substitute(&self, name: &str, value: &Affine) -> Affine {
        match self.coeffs.get(name) {
            None => self.clone(),
            Some(c) => {
                let mut rest = self.clone();
                rest.coeffs.remove(name);
                rest.add(&value.scale(c))
            }
        }
    }

    /// Value under a full assignment of the parameters.
    pub fn evaluate(&self, values: &BTreeMap<String, Q>) -> Result<Q> {
        let mut acc = self.constant.clone();
        for (k, v) in &self.coeffs {
            let x = values.get(k).ok_or_else(|| Error::NeedsMoreConstraints(format!("no value for {k}")))?;
            acc += v * x;
        }
        Ok(acc)
    }
}

pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if !self.constant.is_zero() || self.coeffs.is_empty() {
            parts.push(fmt_q(&self.constant));
        }
        for (name, c) in &self.coeffs {
            let mag = c.abs();
            let body = if mag.is_one() { name.clone() } else { format!("{}*{name}", fmt_q(&mag)) };
            if parts.is_empty() {
                parts.push(if c.is_negative() { format!("-{body}") } else { body });
            } else {
                parts.push(format!("{} {body}", if c.is_negative() { "-" } else { "+" }));
            }
        }
        f.write_str(&parts.join(" "))
    }
}

impl FromStr for Affine {
    type Err = Error;

    /// Parses sums like `-beta - 16*alpha + 3/2`.
    fn from_str(s: &str) -> Result<Self> {
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if text.is_empty() {
            return Err(Error::Parse("empty expression".into()));
        }
        let mut out = Affine::default();
        let mut terms = Vec::new();
        let mut cur = String::new();
        for ch in text.chars() {
            if (ch == '+' || ch == '-') && !cur.is_empty() {
                terms.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
        }
        terms.push(cur);
        for term in terms {
            let (neg, body) = match term.strip_prefix('-') {
                Some(b) => (true, b),
                None => (false, term.strip_prefix('+').unwrap_or(&term)),
            };
            let (coef, name) = match body.split_once('*') {
                Some((c, n)) => (parse_q(c)?, Some(n)),
                None if body.starts_with(|c: char| c.is_ascii_digit()) => (parse_q(body)?, None),
                None => (Q::one(), Some(body)),
            };
            let coef = if neg { -coef } else { coef };
            match name {
                Some(n) if n.is_empty() || !n.chars().all(|c| c.is_alphanumeric() || c == '_') => {
                    return Err(Error::Parse(format!("bad parameter name in {s:?}")))
                }
                Some(n) => out = out.add(&Affine::param(n).scale(&coef)),
                None => out.constant += coef,
            }
        }
        Ok(out)
    }
}

pub fn parse_q(s: &str) -> Result<Q> {
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((a, b)) => {
            let (a, b) = (a.parse::<BigInt>().map_err(|_| bad())?, b.parse::<BigInt>().map_err(|_| bad())?);
            if b.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(a, b))
        }
        None => Ok(Q::from_integer(s.parse::<BigInt>().map_err(|_| bad())?)),
    }
}

impl Serialize for Affine {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_string().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Affine {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Solution of `Σ_i coeff[i]·x_i = rhs` over all rows.
#[derive(Clone, Debug)]
pub struct AffineSolution {
    /// Each unknown as an affine expression; free unknowns appear as
    /// parameters named `free_name(i)`.
    pub values: Vec<Affine>,
    /// Expressions that must vanish for the system to be consistent.
    pub constraints: Vec<Affine>,
    pub free: Vec<usize>,
}

/// Gauss–Jordan elimination with affine right-hand sides. A row reducing to
/// `0 = nonzero constant` makes the system infeasible.
pub fn solve_affine(
    rows: &[(Vec<Q>, Affine)],
    unknowns: usize,
    free_name: impl Fn(usize) -> String,
) -> Result<AffineSolution> {
    let mut m: Vec<(Vec<Q>, Affine)> = rows.to_vec();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut rank = 0;
    for col in 0..unknowns {
        let Some(found) = (rank..m.len()).find(|&r| !m[r].0[col].is_zero()) else {
            continue;
        };
        m.swap(rank, found);
        let inv = m[rank].0[col].recip();
        let (prow, prhs) = (m[rank].0.iter().map(|x| x * &inv).collect::<Vec<_>>(), m[rank].1.scale(&inv));
        m[rank] = (prow.clone(), prhs.clone());
        for r in 0..m.len() {
            if r != rank && !m[r].0[col].is_zero() {
                let factor = m[r].0[col].clone();
                for (x, p) in m[r].0.iter_mut().zip(&prow) {
                    *x -= &factor * p;
                }
                m[r].1 = m[r].1.sub(&prhs.scale(&factor));
            }
        }
        pivots.push((rank, col));
        rank += 1;
    }
    let mut constraints = Vec::new();
    for (_, rhs) in &m[rank..] {
        if rhs.is_constant() {
            if !rhs.constant.is_zero() {
                return Err(Error::Infeasible(format!("constraints force 0 = {}", fmt_q(&rhs.constant))));
            }
        } else {
            constraints.push(rhs.clone());
        }
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let free: Vec<usize> = (0..unknowns).filter(|c| !pivot_cols.contains(c)).collect();
    let mut values = vec![Affine::default(); unknowns];
    for &c in &free {
        values[c] = Affine::param(&free_name(c));
    }
    for &(r, c) in &pivots {
        let mut v = m[r].1.clone();
        for &fc in &free {
            if !m[r].0[fc].is_zero() {
                v = v.sub(&Affine::param(&free_name(fc)).scale(&m[r].0[fc]));
            }
        }
        values[c] = v;
    }
    Ok(AffineSolution { values, constraints, free })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let e: Affine = "-beta - 16*alpha".parse().unwrap();
        assert_eq!(e.coeff("alpha"), q(-16));
        assert_eq!(e.to_string(), "-16*alpha - beta");
        let e: Affine = "3705+8*beta".parse().unwrap();
        assert_eq!(e.to_string(), "3705 + 8*beta");
        assert_eq!("5096/3".parse::<Affine>().unwrap().constant, Q::new(5096.into(), 3.into()));
        assert!("2*".parse::<Affine>().is_err());
    }

    #[test]
    fn solves_with_parameters() {
        // x + y = alpha, x - y = 1
        let rows = vec![(vec![q(1), q(1)], Affine::param("alpha")), (vec![q(1), q(-1)], Affine::int(1))];
        let sol = solve_affine(&rows, 2, |i| format!("x{i}")).unwrap();
        assert_eq!(sol.values[0].to_string(), "1/2 + 1/2*alpha");
        assert!(sol.free.is_empty());
        let bad = vec![(vec![q(1)], Affine::int(1)), (vec![q(2)], Affine::int(3))];
        assert!(matches!(solve_affine(&bad, 1, |i| format!("x{i}")), Err(Error::Infeasible(_))));
    }
}
