//! Low-weight enumeration over disjoint information sets.
//!
//! For each information set the generator is brought to systematic form and
//! only the redundancy part of each row is kept, packed into `W` words. A
//! combination of `t` rows then costs one `W`-word XOR at the leaf.
//!
//! Exact counts use a threshold split: with thresholds `h_j` such that
//! `Σ (h_j + 1) > w_max`, every word of weight `≤ w_max` meets some set `j`
//! in at most `h_j` positions. It is counted in the first such set only, so
//! no word is seen twice and no hash set is needed.

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf2::{words_for, BitMatrix, BitVector};

/// Widest redundancy part supported by the kernel, in 64-bit words.
pub const MAX_WORDS: usize = 8;

struct SystematicForm {
    info: Vec<usize>,
    red: Vec<usize>,
    /// Full-length systematic rows; row `i` has its pivot at `info[i]`.
    rows: Vec<BitVector>,
    /// Redundancy parts, `words` words per row.
    packed: Vec<u64>,
    /// `masks[i]` marks set `i` inside `red` (empty for this set itself).
    masks: Vec<Vec<u64>>,
}

/// A family of pairwise disjoint information sets of a code.
pub struct InfoSetFamily {
    n: usize,
    k: usize,
    words: usize,
    forms: Vec<SystematicForm>,
}

fn pack(v: &BitVector, coords: &[usize], words: usize) -> Vec<u64> {
    let mut out = vec![0u64; words];
    for (pos, &c) in coords.iter().enumerate() {
        if v.get(c) {
            out[pos / 64] |= 1u64 << (pos % 64);
        }
    }
    out
}

/// Result of one enumeration pass.
#[derive(Clone, Debug, Default)]
pub struct LowWeightHits {
    /// `counts[w]` for `0 ≤ w ≤ w_max`.
    pub counts: Vec<u64>,
    /// Words whose weight lies in the collected range, in enumeration order.
    pub words: Vec<BitVector>,
    /// A word lighter than the abort threshold, if one stopped the run.
    pub aborted_by: Option<BitVector>,
}

/// What to enumerate.
#[derive(Clone, Debug)]
pub struct LowWeightQuery {
    pub w_max: usize,
    /// Collect every word with weight in `collect.0..=collect.1`.
    pub collect: Option<(usize, usize)>,
    /// Stop as soon as a nonzero word of weight below this is found.
    pub abort_below: Option<usize>,
    /// Enumerate the coset `offset + C` instead of `C`.
    pub offset: Option<BitVector>,
    /// Refuse to enumerate info patterns heavier than this.
    pub max_info_weight: usize,
}

impl LowWeightQuery {
    pub fn up_to(w_max: usize) -> Self {
        LowWeightQuery { w_max, collect: None, abort_below: None, offset: None, max_info_weight: usize::MAX }
    }
}

impl InfoSetFamily {
    /// Greedy extraction: each set is the pivot set of a reduction over the
    /// columns not yet used, scanned left to right.
    pub fn new(gen: &BitMatrix) -> Result<Self> {
        let code = gen.canonical();
        let n = code.ncols();
        let k = code.nrows();
        if k == 0 {
            return Err(Error::InvalidParams("the zero code has no information set".into()));
        }
        let words = words_for(n - k).max(1);
        if words > MAX_WORDS {
            return Err(Error::TooLarge(format!("redundancy of {} coordinates exceeds {}", n - k, 64 * MAX_WORDS)));
        }
        let mut remaining: Vec<usize> = (0..n).collect();
        let mut sets: Vec<(Vec<usize>, Vec<BitVector>)> = Vec::new();
        loop {
            let (rows, pivots) = code.rref_with_order(&remaining);
            if pivots.len() < k {
                break;
            }
            remaining.retain(|c| !pivots.contains(c));
            sets.push((pivots, rows));
            if remaining.len() < k {
                break;
            }
        }
        let all_info: Vec<Vec<usize>> = sets.iter().map(|(info, _)| info.clone()).collect();
        let forms = sets
            .into_iter()
            .map(|(info, rows)| {
                let red: Vec<usize> = (0..n).filter(|c| !info.contains(c)).collect();
                let packed = rows.iter().flat_map(|r| pack(r, &red, words)).collect();
                let masks = all_info
                    .iter()
                    .map(|other| {
                        if *other == info {
                            vec![0; words]
                        } else {
                            pack(&BitVector::from_indices(n, other.iter().copied()), &red, words)
                        }
                    })
                    .collect();
                SystematicForm { info, red, rows, packed, masks }
            })
            .collect();
        Ok(InfoSetFamily { n, k, words, forms })
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.k
    }

    pub fn length(&self) -> usize {
        self.n
    }

    pub fn sets(&self) -> Vec<Vec<usize>> {
        self.forms.iter().map(|f| f.info.clone()).collect()
    }

    /// Per-set info-weight thresholds covering every weight `≤ w_max`.
    pub fn thresholds(&self, w_max: usize) -> Vec<usize> {
        let m = self.forms.len();
        let total = w_max + 1;
        (0..m).map(|j| (total / m + usize::from(j < total % m)).saturating_sub(1).min(self.k)).collect()
    }

    /// Exact counts of all weights `≤ w_max` in the code (or the coset).
    pub fn enumerate(&self, q: &LowWeightQuery) -> Result<LowWeightHits> {
        if let Some(off) = &q.offset {
            if off.len() != self.n {
                return Err(Error::Shape(format!("offset of length {} for a code of length {}", off.len(), self.n)));
            }
        }
        let h = self.thresholds(q.w_max);
        let exhaustive = h.iter().any(|&x| x >= self.k);
        if !exhaustive && h.iter().map(|&x| x + 1).sum::<usize>() <= q.w_max {
            return Err(Error::IncompleteCoverage(format!(
                "{} information sets of size {} cannot cover weight {}",
                self.forms.len(),
                self.k,
                q.w_max
            )));
        }
        if let Some(&worst) = h.iter().max() {
            if worst > q.max_info_weight {
                return Err(Error::IncompleteCoverage(format!(
                    "weight {} needs info weight {worst}, budget is {}",
                    q.w_max, q.max_info_weight
                )));
            }
        }
        let mut total = LowWeightHits { counts: vec![0; q.w_max + 1], ..Default::default() };
        let abort = AtomicBool::new(false);
        for (j, form) in self.forms.iter().enumerate() {
            let offset = self.reduce_offset(form, q.offset.as_ref());
            let earlier: Vec<(&[u64], u32)> = (0..j).map(|i| (&form.masks[i][..], h[i] as u32)).collect();
            for t in 0..=h[j] {
                let part = dispatch_count(self.words, form, &offset, t, q, &earlier, &abort);
                total.counts.iter_mut().zip(&part.counts).for_each(|(a, b)| *a += b);
                total.words.extend(part.words);
                if part.aborted_by.is_some() {
                    total.aborted_by = part.aborted_by;
                    return Ok(total);
                }
            }
        }
        Ok(total)
    }

    /// Offset made zero on the info set of `form` (same coset), as a full vector.
    fn reduce_offset(&self, form: &SystematicForm, offset: Option<&BitVector>) -> BitVector {
        let mut v = offset.cloned().unwrap_or_else(|| BitVector::zeros(self.n));
        for (i, &c) in form.info.iter().enumerate() {
            if v.get(c) {
                v.xor_assign(&form.rows[i]);
            }
        }
        v
    }

    /// Brouwer–Zimmermann: returns `(best weight found, proven)`, enumerating
    /// info weight up to `max_info_weight` in every set.
    pub fn min_distance(&self, max_info_weight: usize) -> (usize, bool) {
        self.min_distance_above(max_info_weight, 0)
    }

    /// As [`Self::min_distance`], but gives up (unproven) as soon as a word
    /// lighter than `stop_below` turns up.
    pub fn min_distance_above(&self, max_info_weight: usize, stop_below: usize) -> (usize, bool) {
        let best = AtomicUsize::new(self.n + 1);
        let m = self.forms.len();
        for t in 1..=self.k.min(max_info_weight) {
            for form in &self.forms {
                dispatch_min(self.words, form, t, &best);
            }
            let lower = m * (t + 1);
            let found = best.load(Ordering::Relaxed);
            if found < stop_below {
                return (found, false);
            }
            if found <= lower {
                return (found, true);
            }
            if t == self.k {
                return (found, true);
            }
        }
        let found = best.load(Ordering::Relaxed);
        (found, false)
    }
}

impl SystematicForm {
    /// Single form for the pivot set of a reduction in column order `order`.
    fn from_order(code: &BitMatrix, order: &[usize], words: usize) -> Option<Self> {
        let (rows, info) = code.rref_with_order(order);
        if info.len() < code.nrows() {
            return None;
        }
        let red: Vec<usize> = (0..code.ncols()).filter(|c| !info.contains(c)).collect();
        let packed = rows.iter().flat_map(|r| pack(r, &red, words)).collect();
        Some(SystematicForm { info, red, rows, packed, masks: Vec::new() })
    }
}

/// Rejection test over `sets` information sets taken from seeded random
/// column orders: looks for a word lighter than `below` among info patterns
/// of weight `≤ max_info_weight`. Finding nothing proves nothing.
pub fn random_probe(gen: &BitMatrix, sets: usize, max_info_weight: usize, below: usize, seed: u64) -> Option<usize> {
    let code = gen.canonical();
    let words = words_for(code.ncols() - code.nrows()).max(1);
    if code.nrows() == 0 || words > MAX_WORDS {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let best = AtomicUsize::new(below);
    let mut order: Vec<usize> = (0..code.ncols()).collect();
    for _ in 0..sets {
        order.shuffle(&mut rng);
        let form = SystematicForm::from_order(&code, &order, words)?;
        for t in 1..=code.nrows().min(max_info_weight) {
            dispatch_min(words, &form, t, &best);
            let found = best.load(Ordering::Relaxed);
            if found < below {
                return Some(found);
            }
        }
    }
    None
}

impl InfoSetFamily {
    /// Cheap rejection test: looks for a word lighter than `below` among
    /// info patterns of weight `≤ max_info_weight` in the first set only.
    pub fn probe(&self, max_info_weight: usize, below: usize) -> Option<usize> {
        let best = AtomicUsize::new(below);
        let form = self.forms.first()?;
        for t in 1..=self.k.min(max_info_weight) {
            dispatch_min(self.words, form, t, &best);
            let found = best.load(Ordering::Relaxed);
            if found < below {
                return Some(found);
            }
        }
        None
    }
}

fn dispatch_count(
    words: usize,
    form: &SystematicForm,
    offset: &BitVector,
    t: usize,
    q: &LowWeightQuery,
    earlier: &[(&[u64], u32)],
    abort: &AtomicBool,
) -> LowWeightHits {
    macro_rules! go {
        ($($w:literal),*) => {
            match words {
                $($w => count_pass::<$w>(form, offset, t, q, earlier, abort),)*
                _ => unreachable!("word count checked at construction"),
            }
        };
    }
    go!(1, 2, 3, 4, 5, 6, 7, 8)
}

fn dispatch_min(words: usize, form: &SystematicForm, t: usize, best: &AtomicUsize) {
    macro_rules! go {
        ($($w:literal),*) => {
            match words {
                $($w => min_pass::<$w>(form, t, best),)*
                _ => unreachable!("word count checked at construction"),
            }
        };
    }
    go!(1, 2, 3, 4, 5, 6, 7, 8)
}

fn to_arrays<const W: usize>(flat: &[u64]) -> Vec<[u64; W]> {
    flat.chunks_exact(W).map(|c| c.try_into().expect("chunk of W words")).collect()
}

fn to_array<const W: usize>(v: &[u64]) -> [u64; W] {
    v.try_into().expect("W words")
}

#[inline(always)]
fn xor<const W: usize>(a: &[u64; W], b: &[u64; W]) -> [u64; W] {
    let mut out = *a;
    for w in 0..W {
        out[w] ^= b[w];
    }
    out
}

#[inline(always)]
fn popcount<const W: usize>(a: &[u64; W]) -> u32 {
    a.iter().map(|w| w.count_ones()).sum()
}

#[inline(always)]
fn masked_popcount<const W: usize>(a: &[u64; W], mask: &[u64]) -> u32 {
    (0..W).map(|w| (a[w] & mask[w]).count_ones()).sum()
}

/// Visits every `remaining`-subset of `start..rows.len()` added to `acc`,
/// calling `leaf` only when the redundancy weight is at most the current
/// limit. `leaf` returns the new limit.
fn walk<const W: usize, F: FnMut(&[usize], &[u64; W]) -> u32>(
    rows: &[[u64; W]],
    start: usize,
    remaining: usize,
    acc: [u64; W],
    mut limit: u32,
    combo: &mut Vec<usize>,
    leaf: &mut F,
) -> u32 {
    if remaining == 1 {
        for (i, row) in rows.iter().enumerate().skip(start) {
            let x = xor(&acc, row);
            if popcount(&x) <= limit {
                combo.push(i);
                limit = leaf(combo, &x);
                combo.pop();
            }
        }
        return limit;
    }
    for i in start..=rows.len() - remaining {
        combo.push(i);
        limit = walk(rows, i + 1, remaining - 1, xor(&acc, &rows[i]), limit, combo, leaf);
        combo.pop();
    }
    limit
}

/// Runs `walk` for all `t`-subsets, split over the first index. Task states
/// come back in index order, so the merge is deterministic.
fn split_walk<const W: usize, S, F>(
    rows: &[[u64; W]],
    t: usize,
    acc: [u64; W],
    limit: u32,
    abort: &AtomicBool,
    make: impl Fn() -> S + Sync,
    leaf: F,
) -> Vec<S>
where
    S: Send,
    F: Fn(&mut S, &[usize], &[u64; W]) -> u32 + Sync,
{
    let k = rows.len();
    if t == 0 || t > k {
        return Vec::new();
    }
    if t == 1 {
        let mut state = make();
        let mut combo = Vec::with_capacity(1);
        walk(rows, 0, 1, acc, limit, &mut combo, &mut |c: &[usize], x: &[u64; W]| leaf(&mut state, c, x));
        return vec![state];
    }
    (0..=k - t)
        .into_par_iter()
        .map(|i0| {
            let mut state = make();
            if abort.load(Ordering::Relaxed) {
                return state;
            }
            let mut combo = Vec::with_capacity(t);
            combo.push(i0);
            walk(rows, i0 + 1, t - 1, xor(&acc, &rows[i0]), limit, &mut combo, &mut |c: &[usize], x: &[u64; W]| {
                leaf(&mut state, c, x)
            });
            state
        })
        .collect()
}

fn count_pass<const W: usize>(
    form: &SystematicForm,
    offset: &BitVector,
    t: usize,
    q: &LowWeightQuery,
    earlier: &[(&[u64], u32)],
    abort: &AtomicBool,
) -> LowWeightHits {
    let rows = to_arrays::<W>(&form.packed);
    let off: [u64; W] = to_array(&pack(offset, &form.red, W));
    let w_max = q.w_max;
    let Some(limit) = w_max.checked_sub(t) else {
        return LowWeightHits { counts: vec![0; w_max + 1], ..Default::default() };
    };
    let limit = limit as u32;
    let is_coset = q.offset.is_some();
    let accept = |x: &[u64; W]| earlier.iter().all(|(mask, h)| masked_popcount(x, mask) > *h);
    let record = |hits: &mut LowWeightHits, combo: &[usize], x: &[u64; W]| {
        if !accept(x) {
            return;
        }
        let w = t + popcount(x) as usize;
        hits.counts[w] += 1;
        let nonzero = w > 0 || is_coset;
        let collect = nonzero && q.collect.is_some_and(|(lo, hi)| lo <= w && w <= hi);
        let below = nonzero && q.abort_below.is_some_and(|b| w < b);
        if collect || below {
            let mut v = BitVector::zeros(offset.len());
            for &i in combo {
                v.set(form.info[i], true);
            }
            for (pos, &c) in form.red.iter().enumerate() {
                if x[pos / 64] >> (pos % 64) & 1 == 1 {
                    v.set(c, true);
                }
            }
            if below {
                hits.aborted_by = Some(v.clone());
                abort.store(true, Ordering::Relaxed);
            }
            if collect {
                hits.words.push(v);
            }
        }
    };
    let mut states: Vec<LowWeightHits> = if t == 0 {
        let mut h = LowWeightHits { counts: vec![0; w_max + 1], ..Default::default() };
        if popcount(&off) <= limit {
            record(&mut h, &[], &off);
        }
        vec![h]
    } else {
        split_walk(
            &rows,
            t,
            off,
            limit,
            abort,
            || LowWeightHits { counts: vec![0; w_max + 1], ..Default::default() },
            |h: &mut LowWeightHits, combo: &[usize], x: &[u64; W]| {
                record(h, combo, x);
                if h.aborted_by.is_some() {
                    0
                } else {
                    limit
                }
            },
        )
    };
    let mut out = LowWeightHits { counts: vec![0; w_max + 1], ..Default::default() };
    for s in states.drain(..) {
        out.counts.iter_mut().zip(&s.counts).for_each(|(a, b)| *a += b);
        out.words.extend(s.words);
        if out.aborted_by.is_none() {
            out.aborted_by = s.aborted_by;
        }
    }
    out
}

fn min_pass<const W: usize>(form: &SystematicForm, t: usize, best: &AtomicUsize) {
    let rows = to_arrays::<W>(&form.packed);
    let current = best.load(Ordering::Relaxed);
    if current <= t + 1 {
        return;
    }
    let limit = (current - t - 1) as u32;
    let never = AtomicBool::new(false);
    split_walk(
        &rows,
        t,
        [0u64; W],
        limit,
        &never,
        || (),
        |_: &mut (), _: &[usize], x: &[u64; W]| {
            let w = t + popcount(x) as usize;
            let now = best.fetch_min(w, Ordering::Relaxed).min(w);
            now.saturating_sub(t + 1) as u32
        },
    );
}

/// Full weight distribution by walking all `2^k` codewords in Gray-code order.
pub fn full_weight_distribution(gen: &BitMatrix) -> Result<Vec<u64>> {
    let code = gen.canonical();
    let k = code.nrows();
    if k > 30 {
        return Err(Error::TooLarge(format!("2^{k} codewords")));
    }
    let n = code.ncols();
    let mut counts = vec![0u64; n + 1];
    let mut v = BitVector::zeros(n);
    counts[0] = 1;
    for i in 1u64..(1u64 << k) {
        v.xor_assign(code.row(i.trailing_zeros() as usize));
        counts[v.weight()] += 1;
    }
    Ok(counts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hamming8() -> BitMatrix {
        BitMatrix::from_strs(&["11110000", "00111100", "00001111", "01010101"]).unwrap()
    }

    #[test]
    fn extended_hamming() {
        let fam = InfoSetFamily::new(&hamming8()).unwrap();
        assert_eq!(fam.len(), 2);
        assert_eq!(fam.min_distance(4), (4, true));
        let hits = fam.enumerate(&LowWeightQuery::up_to(8)).unwrap();
        assert_eq!(hits.counts, vec![1, 0, 0, 0, 14, 0, 0, 0, 1]);
        assert_eq!(full_weight_distribution(&hamming8()).unwrap(), hits.counts);
    }

    #[test]
    fn probes_only_report_lighter_words() {
        let fam = InfoSetFamily::new(&hamming8()).unwrap();
        assert_eq!(fam.probe(1, 5), Some(4));
        assert_eq!(fam.probe(4, 4), None);
        assert_eq!(random_probe(&hamming8(), 3, 2, 5, 11), Some(4));
        assert_eq!(random_probe(&hamming8(), 3, 4, 4, 11), None);
        assert_eq!(fam.min_distance_above(4, 6), (4, false));
        assert_eq!(fam.min_distance_above(4, 4), (4, true));
    }

    #[test]
    fn repetition_code() {
        let g = BitMatrix::from_strs(&["11"]).unwrap();
        let fam = InfoSetFamily::new(&g).unwrap();
        assert_eq!(fam.min_distance(1), (2, true));
        let coset = fam.enumerate(&LowWeightQuery { offset: Some("10".parse().unwrap()), ..LowWeightQuery::up_to(2) });
        assert_eq!(coset.unwrap().counts, vec![0, 2, 0]);
    }

    #[test]
    fn collects_and_aborts() {
        let fam = InfoSetFamily::new(&hamming8()).unwrap();
        let q = LowWeightQuery { collect: Some((4, 4)), ..LowWeightQuery::up_to(4) };
        let hits = fam.enumerate(&q).unwrap();
        assert_eq!(hits.words.len(), 14);
        assert!(hits.words.iter().all(|w| w.weight() == 4 && hamming8().contains(w)));
        let q = LowWeightQuery { abort_below: Some(6), ..LowWeightQuery::up_to(6) };
        assert_eq!(fam.enumerate(&q).unwrap().aborted_by.unwrap().weight(), 4);
    }

    #[test]
    fn thresholds_cover() {
        let rows: Vec<BitVector> = (0..39).map(|i| BitVector::from_indices(78, [i, 39 + i])).collect();
        let fam = InfoSetFamily::new(&BitMatrix::new(78, rows).unwrap()).unwrap();
        assert_eq!(fam.thresholds(14), vec![7, 6]);
        assert_eq!(fam.thresholds(18), vec![9, 8]);
        let hits = fam.enumerate(&LowWeightQuery::up_to(6)).unwrap();
        assert_eq!(hits.counts, vec![1, 0, 39, 0, 741, 0, 9139]);
    }
}
