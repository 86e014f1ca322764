//! Invariants of self-dual codes: minimum distance, low-weight counts,
//! intersection numbers and the shadow.

mod enumerate;
mod record;

use std::collections::BTreeMap;

use num::{BigInt, BigRational, One, Zero};
use serde::{Deserialize, Serialize};

use crate::decomposition::griesmer_sum;
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};

pub use enumerate::{full_weight_distribution, random_probe, InfoSetFamily, LowWeightHits, LowWeightQuery, MAX_WORDS};
pub use record::{CodeRecord, InvariantOptions, RECORD_SCHEMA_VERSION};

/// Exact counts `A_w` for every `w ≤ w_max`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightProfile {
    pub n: usize,
    pub w_max: usize,
    /// Nonzero counts only.
    pub counts: BTreeMap<usize, u64>,
}

impl WeightProfile {
    pub(crate) fn from_counts(n: usize, counts: &[u64]) -> Self {
        let w_max = counts.len().saturating_sub(1);
        let counts = counts.iter().enumerate().filter(|(_, &c)| c > 0).map(|(w, &c)| (w, c)).collect();
        WeightProfile { n, w_max, counts }
    }

    pub fn get(&self, w: usize) -> u64 {
        assert!(w <= self.w_max, "weight {w} beyond the complete range {}", self.w_max);
        self.counts.get(&w).copied().unwrap_or(0)
    }

    /// Smallest nonzero weight with a nonzero count.
    pub fn min_weight(&self) -> Option<usize> {
        self.counts.keys().copied().find(|&w| w > 0)
    }
}

/// `(d, proven)`. `max_info_weight` bounds the Brouwer–Zimmermann
/// enumeration; when it is reached the best weight seen so far is returned
/// with `proven = false`.
pub fn min_distance(gen: &BitMatrix, max_info_weight: usize) -> Result<(usize, bool)> {
    Ok(InfoSetFamily::new(gen)?.min_distance(max_info_weight))
}

/// Exact number of codewords of weight `w`.
pub fn count_weight(gen: &BitMatrix, w: usize) -> Result<u64> {
    let fam = InfoSetFamily::new(gen)?;
    Ok(fam.enumerate(&LowWeightQuery::up_to(w))?.counts[w])
}

pub fn weight_profile(gen: &BitMatrix, w_max: usize) -> Result<WeightProfile> {
    let fam = InfoSetFamily::new(gen)?;
    let hits = fam.enumerate(&LowWeightQuery::up_to(w_max))?;
    Ok(WeightProfile::from_counts(gen.ncols(), &hits.counts))
}

/// All codewords of weight exactly `w`, sorted.
pub fn words_of_weight(gen: &BitMatrix, w: usize) -> Result<Vec<BitVector>> {
    let fam = InfoSetFamily::new(gen)?;
    let hits = fam.enumerate(&LowWeightQuery { collect: Some((w, w)), ..LowWeightQuery::up_to(w) })?;
    let mut words = hits.words;
    words.sort();
    Ok(words)
}

/// Histogram `j ↦ I_j` of distances between unordered pairs of the words.
pub fn intersection_numbers(words: &[BitVector]) -> BTreeMap<usize, u64> {
    let mut hist = vec![0u64; words.first().map_or(1, |w| w.len() + 1)];
    for (i, a) in words.iter().enumerate() {
        for b in &words[i + 1..] {
            hist[a.distance(b)] += 1;
        }
    }
    hist.into_iter().enumerate().filter(|(_, c)| *c > 0).collect()
}

/// `I_j` for the minimum-weight words of weight `d`.
pub fn intersection_number(gen: &BitMatrix, d: usize, j: usize) -> Result<u64> {
    let words = words_of_weight(gen, d)?;
    Ok(intersection_numbers(&words).get(&j).copied().unwrap_or(0))
}

/// `C₀ ⊂ C ⊂ C₀^⊥` with `C = C₀ ∪ (t₂ + C₀)` and shadow `(t₁ + C₀) ∪ (t₃ + C₀)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShadowDecomposition {
    pub c0: BitMatrix,
    pub t1: BitVector,
    pub t2: BitVector,
    pub t3: BitVector,
}

impl ShadowDecomposition {
    /// A vector of the shadow; the whole shadow is `t₁ + C`.
    pub fn shadow_offset(&self) -> &BitVector {
        &self.t1
    }
}

/// Decomposes a singly even self-dual code. The map `c ↦ wt(c)/2 mod 2` is
/// linear on a self-orthogonal code and `C₀` is its kernel.
pub fn shadow(gen: &BitMatrix) -> Result<ShadowDecomposition> {
    if !gen.is_self_dual()? {
        return Err(Error::InvalidParams("shadow needs a self-dual code".into()));
    }
    let code = gen.canonical();
    let odd: Vec<bool> = code.rows().iter().map(|r| r.weight() % 4 == 2).collect();
    let Some(r) = odd.iter().position(|&x| x) else {
        return Err(Error::NoShadow);
    };
    let t2 = code.row(r).clone();
    let c0_rows: Vec<BitVector> = code
        .rows()
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != r)
        .map(|(i, row)| if odd[i] { row.xor(&t2) } else { row.clone() })
        .collect();
    let c0 = BitMatrix::new(code.ncols(), c0_rows)?.canonical();
    let t1 = c0
        .dual()
        .rows()
        .iter()
        .find(|v| !code.contains(v))
        .cloned()
        .ok_or_else(|| Error::ConstructionBug("C₀^⊥ is contained in C".into()))?;
    let t3 = t1.xor(&t2);
    Ok(ShadowDecomposition { c0, t1, t2, t3 })
}

/// Exact shadow counts `B_r` for `r ≤ w_max`.
pub fn shadow_counts(gen: &BitMatrix, w_max: usize) -> Result<WeightProfile> {
    let dec = shadow(gen)?;
    let fam = InfoSetFamily::new(gen)?;
    let hits = fam.enumerate(&LowWeightQuery { offset: Some(dec.t1.clone()), ..LowWeightQuery::up_to(w_max) })?;
    Ok(WeightProfile::from_counts(gen.ncols(), &hits.counts))
}

/// `n ≥ Σ_{i<k} ⌈d/2ⁱ⌉`.
pub fn griesmer_check(n: usize, k: usize, d: usize) -> bool {
    n as u64 >= griesmer_sum(d as u64, k as u64)
}

/// Krawtchouk transform `B_j = 2^{−k} Σ_i A_i K_j(i)` of a full distribution.
pub fn macwilliams_transform(dist: &[u64], k: usize) -> Vec<BigRational> {
    let n = dist.len() - 1;
    let binom = |a: usize, b: usize| -> BigInt {
        if b > a {
            return BigInt::zero();
        }
        let mut r = BigInt::one();
        for i in 0..b {
            r = r * BigInt::from(a - i) / BigInt::from(i + 1);
        }
        r
    };
    let scale = BigInt::one() << k;
    (0..=n)
        .map(|j| {
            let mut acc = BigInt::zero();
            for (i, &a) in dist.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let mut kj = BigInt::zero();
                for s in 0..=j {
                    let term = binom(i, s) * binom(n - i, j - s);
                    if s % 2 == 1 {
                        kj -= term;
                    } else {
                        kj += term;
                    }
                }
                acc += kj * BigInt::from(a);
            }
            BigRational::new(acc, scale.clone())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn i2(m: usize) -> BitMatrix {
        let rows = (0..m).map(|i| BitVector::from_indices(2 * m, [2 * i, 2 * i + 1])).collect();
        BitMatrix::new(2 * m, rows).unwrap()
    }

    #[test]
    fn griesmer() {
        assert!(!griesmer_check(38, 18, 14));
        assert!(griesmer_check(8, 4, 4));
        assert!(griesmer_check(9, 1, 9));
    }

    #[test]
    fn shadow_of_small_codes() {
        let rep = i2(1);
        let dec = shadow(&rep).unwrap();
        assert!(dec.c0.nrows() == 0 && dec.t1.weight() == 1);
        assert_eq!(shadow_counts(&rep, 2).unwrap().counts, BTreeMap::from([(1, 2)]));
        let h8 = BitMatrix::from_strs(&["11110000", "00111100", "00001111", "01010101"]).unwrap();
        assert!(matches!(shadow(&h8), Err(Error::NoShadow)));
        // i2^6: the shadow is every vector with one 1 in each pair
        assert_eq!(shadow_counts(&i2(6), 12).unwrap().counts, BTreeMap::from([(6, 64)]));
    }

    #[test]
    fn macwilliams_fixes_self_dual_enumerators() {
        let dist = full_weight_distribution(&i2(4)).unwrap();
        let t = macwilliams_transform(&dist, 4);
        for (a, b) in dist.iter().zip(&t) {
            assert_eq!(BigRational::from_integer(BigInt::from(*a)), *b);
        }
    }

    #[test]
    fn intersections_are_even() {
        let words = words_of_weight(&i2(5), 4).unwrap();
        assert_eq!(words.len(), 10);
        let hist = intersection_numbers(&words);
        assert!(hist.keys().all(|j| j % 2 == 0));
        assert_eq!(hist.values().sum::<u64>(), 45);
    }
}
