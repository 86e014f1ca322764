//! Gleason-type expansions of `W(y)` and `S(y)` in the basis
//! `(1+y²)^{D−4i}(y²(1−y²)²)^i`, `D = n/2`.

use num::{BigInt, One, Zero};
use serde::{Deserialize, Serialize};

use super::affine::{q, Q};
use crate::error::{Error, Result};

/// `n = 24m + 8l + 2r` with `l < 3`, `r < 4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LengthShape {
    pub n: usize,
    pub m: usize,
    pub l: usize,
    pub r: usize,
}

impl LengthShape {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n % 2 == 1 {
            return Err(Error::InvalidLength(format!("self-dual lengths are positive and even, got {n}")));
        }
        let r = (n / 2) % 4;
        let t = (n - 2 * r) / 8;
        Ok(LengthShape { n, m: t / 3, l: t % 3, r })
    }

    /// `D = n/2`.
    pub fn half(&self) -> usize {
        self.n / 2
    }

    /// Index of the last basis polynomial.
    pub fn top(&self) -> usize {
        3 * self.m + self.l
    }

    /// `4⌊n/24⌋ + 4`, plus 2 when `n ≡ 22 (mod 24)`.
    pub fn extremal_d(&self) -> usize {
        4 * (self.n / 24) + 4 + if self.n % 24 == 22 { 2 } else { 0 }
    }

    pub fn near_extremal_d(&self) -> usize {
        self.extremal_d() - 2
    }

    /// Shadow weights are `≡ n/2 (mod 4)`; `b_j` counts weight `r + 4j`.
    pub fn shadow_base(&self) -> usize {
        self.r
    }
}

pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn one_plus_pow(k: usize, sign: i64) -> Vec<BigInt> {
    (0..=k as i64).map(|j| binomial(k as i64, j) * BigInt::from(sign.pow((j % 2) as u32))).collect()
}

/// Coefficient matrices of both expansions and their exact inverses on the
/// triangular parts.
#[derive(Clone, Debug)]
pub struct GleasonSystem {
    pub shape: LengthShape,
    /// `a_j = Σ_i m[j][i] c_i` for `j ≤ D`; `a_j` is the count of weight `2j`.
    pub m: Vec<Vec<Q>>,
    /// `b_j = Σ_i k[j][i] c_i` for `j ≤ 2·top`; `b_j` is the count of
    /// shadow weight `r + 4j`.
    pub k: Vec<Vec<Q>>,
    /// `c_i = Σ_j alpha[i][j] a_j`, `i, j ≤ top`.
    pub alpha: Vec<Vec<Q>>,
    /// `c_i = Σ_j beta[i][j] b_j`, `i, j ≤ top`.
    pub beta: Vec<Vec<Q>>,
}

pub fn gleason_system(shape: LengthShape) -> GleasonSystem {
    let d = shape.half();
    let top = shape.top();
    let mut m = vec![vec![Q::zero(); top + 1]; d + 1];
    let mut k = vec![vec![Q::zero(); top + 1]; 2 * top + 1];
    for i in 0..=top {
        // (1+Y)^{D−4i} Y^i (1−Y)^{2i}
        let p = poly_mul(&one_plus_pow(d - 4 * i, 1), &one_plus_pow(2 * i, -1));
        for (j, c) in p.iter().enumerate() {
            if i + j <= d {
                m[i + j][i] = Q::from_integer(c.clone());
            }
        }
        // (−1)^i 2^{D−6i} Z^{top−i} (1−Z)^{2i}
        let scale = pow2(d as i64 - 6 * i as i64) * q(if i % 2 == 0 { 1 } else { -1 });
        for (j, c) in one_plus_pow(2 * i, -1).iter().enumerate() {
            k[top - i + j][i] = &scale * Q::from_integer(c.clone());
        }
    }
    let lower: Vec<Vec<Q>> = m[..=top].to_vec();
    let alpha = invert_lower(&lower);
    // b_j for j ≤ top involves c_i with i ≥ top − j: reversing the columns
    // makes the block lower triangular.
    let rev: Vec<Vec<Q>> = k[..=top].iter().map(|row| row.iter().rev().cloned().collect()).collect();
    let inv_rev = invert_lower(&rev);
    let beta: Vec<Vec<Q>> = (0..=top).map(|i| inv_rev[top - i].clone()).collect();
    GleasonSystem { shape, m, k, alpha, beta }
}

pub(crate) fn pow2(e: i64) -> Q {
    let p = Q::from_integer(BigInt::one() << e.unsigned_abs());
    if e >= 0 {
        p
    } else {
        p.recip()
    }
}

fn invert_lower(a: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let n = a.len();
    let mut inv = vec![vec![Q::zero(); n]; n];
    for col in 0..n {
        for i in col..n {
            let mut acc = if i == col { Q::one() } else { Q::zero() };
            for j in col..i {
                acc -= &a[i][j] * &inv[j][col];
            }
            inv[i][col] = acc / &a[i][i];
        }
    }
    inv
}

fn apply(mat: &[Vec<Q>], v: &[Q]) -> Vec<Q> {
    mat.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

impl GleasonSystem {
    pub fn c_from_a(&self, a: &[Q]) -> Vec<Q> {
        apply(&self.alpha, a)
    }

    pub fn c_from_b(&self, b: &[Q]) -> Vec<Q> {
        apply(&self.beta, b)
    }

    /// All `a_j`, `j ≤ D`.
    pub fn a_from_c(&self, c: &[Q]) -> Vec<Q> {
        apply(&self.m, c)
    }

    /// All `b_j`, `j ≤ 2·top`.
    pub fn b_from_c(&self, c: &[Q]) -> Vec<Q> {
        apply(&self.k, c)
    }

    /// Weight enumerator coefficient `A_w` in terms of `c`.
    pub fn a_row(&self, w: usize) -> Option<&[Q]> {
        (w % 2 == 0).then(|| self.m.get(w / 2).map(Vec::as_slice)).flatten()
    }

    /// Shadow coefficient `B_w` in terms of `c`.
    pub fn b_row(&self, w: usize) -> Option<&[Q]> {
        let r = self.shape.shadow_base();
        (w >= r && (w - r) % 4 == 0).then(|| self.k.get((w - r) / 4).map(Vec::as_slice)).flatten()
    }
}

/// `−(12m+r)/(2m) · [y^{2m−1}] (1+y)^{−4m−r−1}(1−y)^{−4m}`, which equals
/// `α_{2m,0}` when `l = 0`.
pub fn alpha_generating_function(m: usize, r: usize) -> Result<Q> {
    if m == 0 {
        return Err(Error::UnsupportedCase("needs m ≥ 1".into()));
    }
    let deg = 2 * m - 1;
    let neg_binom = |k: usize, j: usize| binomial((k + j) as i64 - 1, j as i64);
    let mut coeff = BigInt::zero();
    for j in 0..=deg {
        let left = neg_binom(4 * m + r + 1, j);
        let left = if j % 2 == 1 { -left } else { left };
        coeff += left * neg_binom(4 * m, deg - j);
    }
    Ok(-Q::new(BigInt::from(12 * m + r), BigInt::from(2 * m)) * Q::from_integer(coeff))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn shapes() {
        let s = LengthShape::new(78).unwrap();
        assert_eq!((s.m, s.l, s.r), (3, 0, 3));
        assert_eq!(s.extremal_d(), 16);
        let s = LengthShape::new(82).unwrap();
        assert_eq!((s.m, s.l, s.r), (3, 1, 1));
        assert_eq!(LengthShape::new(70).unwrap().extremal_d(), 14);
        assert_eq!(LengthShape::new(24).unwrap().extremal_d(), 8);
        assert!(LengthShape::new(7).is_err());
    }

    #[test]
    fn leading_terms() {
        for n in (2..=120).step_by(2) {
            let g = gleason_system(LengthShape::new(n).unwrap());
            assert_eq!(g.alpha[0][0], q(1));
            let s = g.shape;
            if s.l == 0 && s.r > 0 && s.m > 0 {
                assert_eq!(g.beta[2 * s.m][s.m], pow2(-(s.r as i64)), "n={n}");
            }
        }
    }

    #[test]
    fn round_trips() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for n in [24, 50, 74, 76, 82, 100, 116] {
            let g = gleason_system(LengthShape::new(n).unwrap());
            let top = g.shape.top();
            for _ in 0..3 {
                let a: Vec<Q> = (0..=top).map(|_| q(rng.gen_range(-1000..1000))).collect();
                let c = g.c_from_a(&a);
                assert_eq!(g.a_from_c(&c)[..=top], a[..]);
                let b: Vec<Q> = (0..=top).map(|_| q(rng.gen_range(-1000..1000))).collect();
                let c = g.c_from_b(&b);
                assert_eq!(g.b_from_c(&c)[..=top], b[..]);
            }
        }
    }

    #[test]
    fn alpha_matches_generating_function() {
        for (n, want) in [(74, 1295), (76, 2375), (98, 13965), (100, 26125), (26, 0), (50, 0)] {
            let s = LengthShape::new(n).unwrap();
            let g = gleason_system(s);
            let gf = alpha_generating_function(s.m, s.r).unwrap();
            assert_eq!(g.alpha[2 * s.m][0], gf, "n={n}");
            if want != 0 {
                assert_eq!(gf, q(want));
            }
        }
    }
}
