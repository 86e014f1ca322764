use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

use super::{BitVector, Permutation};

/// A dense matrix over GF(2), one [`BitVector`] per row.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVector>,
}

impl BitMatrix {
    pub fn new(cols: usize, rows: Vec<BitVector>) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::Shape(format!("row of length {} in matrix with {cols} columns", bad.len())));
        }
        Ok(BitMatrix { cols, rows })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix { cols, rows: vec![BitVector::zeros(cols); rows] }
    }

    pub fn empty(cols: usize) -> Self {
        BitMatrix { cols, rows: Vec::new() }
    }

    pub fn identity(n: usize) -> Self {
        BitMatrix { cols: n, rows: (0..n).map(|i| BitVector::unit(n, i)).collect() }
    }

    /// Builds a matrix from `0`/`1` strings, one per row.
    pub fn from_strs(rows: &[&str]) -> Result<Self> {
        let parsed: Vec<BitVector> = rows.iter().map(|r| r.parse()).collect::<Result<_>>()?;
        let cols = parsed.first().map_or(0, BitVector::len);
        BitMatrix::new(cols, parsed)
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row(&self, i: usize) -> &BitVector {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<BitVector> {
        self.rows
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn push_row(&mut self, row: BitVector) -> Result<()> {
        if row.len() != self.cols {
            return Err(Error::Shape(format!("row of length {} pushed onto {} columns", row.len(), self.cols)));
        }
        self.rows.push(row);
        Ok(())
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn stack(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.cols {
            return Err(Error::Shape(format!("cannot stack {} and {} columns", self.cols, other.cols)));
        }
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Ok(BitMatrix { cols: self.cols, rows })
    }

    /// Reduced row-echelon form and its pivot columns.
    ///
    /// Pivots are taken left to right, each from the topmost available row, so
    /// the result is canonical for the row space. Zero rows are kept at the
    /// bottom and the shape is unchanged.
    pub fn rref(&self) -> (BitMatrix, Vec<usize>) {
        let mut rows = self.rows.clone();
        let pivots = reduce_in_place(&mut rows, self.cols, None);
        (BitMatrix { cols: self.cols, rows }, pivots)
    }

    /// RREF with zero rows dropped: the canonical generator matrix of the
    /// row space.
    pub fn canonical(&self) -> BitMatrix {
        let (mut m, pivots) = self.rref();
        m.rows.truncate(pivots.len());
        m
    }

    /// Echelon form where pivots are searched in the given column order.
    pub(crate) fn rref_with_order(&self, order: &[usize]) -> (Vec<BitVector>, Vec<usize>) {
        let mut rows = self.rows.clone();
        let pivots = reduce_in_place(&mut rows, self.cols, Some(order));
        rows.truncate(pivots.len());
        (rows, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut out = BitMatrix::zeros(self.cols, self.nrows());
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.iter_ones() {
                out.rows[c].set(r, true);
            }
        }
        out
    }

    /// Matrix product over GF(2).
    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.nrows() {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.nrows(),
                self.cols,
                other.nrows(),
                other.cols
            )));
        }
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut acc = BitVector::zeros(other.cols);
                for k in row.iter_ones() {
                    acc.xor_assign(&other.rows[k]);
                }
                acc
            })
            .collect();
        Ok(BitMatrix { cols: other.cols, rows })
    }

    /// `x · self` for a coefficient vector `x` of length `nrows`.
    pub fn combine(&self, coeffs: &BitVector) -> BitVector {
        let mut acc = BitVector::zeros(self.cols);
        for k in coeffs.iter_ones() {
            acc.xor_assign(&self.rows[k]);
        }
        acc
    }

    /// Generator matrix of the orthogonal complement of the row space.
    pub fn dual(&self) -> BitMatrix {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let rows = (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|c| {
                let mut v = BitVector::unit(self.cols, c);
                for (i, &p) in pivots.iter().enumerate() {
                    if r.rows[i].get(c) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect();
        BitMatrix { cols: self.cols, rows }
    }

    /// Every pair of rows (including each row with itself) is orthogonal.
    pub fn is_self_orthogonal(&self) -> bool {
        self.rows.iter().enumerate().all(|(i, a)| self.rows[i..].iter().all(|b| !a.dot(b)))
    }

    /// True iff the row space is a self-dual code.
    pub fn is_self_dual(&self) -> Result<bool> {
        if self.cols % 2 == 1 {
            return Err(Error::InvalidLength(format!("self-dual codes need even length, got {}", self.cols)));
        }
        Ok(self.rank() == self.cols / 2 && self.is_self_orthogonal())
    }

    /// Row-space membership test. `self` must be in RREF with the given pivots.
    pub fn reduces_to_zero(&self, pivots: &[usize], v: &BitVector) -> bool {
        let mut w = v.clone();
        for (i, &p) in pivots.iter().enumerate() {
            if w.get(p) {
                w.xor_assign(&self.rows[i]);
            }
        }
        w.is_zero()
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        let (r, pivots) = self.rref();
        r.reduces_to_zero(&pivots, v)
    }

    pub fn same_row_space(&self, other: &BitMatrix) -> bool {
        self.cols == other.cols && self.canonical() == other.canonical()
    }

    /// Applies a coordinate permutation to every row.
    pub fn permute_columns(&self, perm: &Permutation) -> Result<BitMatrix> {
        let rows = self.rows.iter().map(|r| r.apply_permutation(perm)).collect::<Result<_>>()?;
        Ok(BitMatrix { cols: self.cols, rows })
    }

    /// True iff `perm` maps the row space onto itself.
    pub fn preserved_by(&self, perm: &Permutation) -> Result<bool> {
        let (r, pivots) = self.rref();
        for row in &r.rows[..pivots.len()] {
            if !r.reduces_to_zero(&pivots, &row.apply_permutation(perm)?) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Text form: a `rows cols` header, then one little-endian hex row per line.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.nrows(), self.cols);
        for row in &self.rows {
            s.push_str(&row.to_hex());
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<BitMatrix> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty matrix text".into()))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad header {header:?}"))))
            .collect::<Result<_>>()?;
        let [nrows, cols] = dims[..] else {
            return Err(Error::Parse(format!("header must be `rows cols`, got {header:?}")));
        };
        let rows: Vec<BitVector> = lines.map(|l| BitVector::from_hex(cols, l)).collect::<Result<_>>()?;
        if rows.len() != nrows {
            return Err(Error::Parse(format!("header promises {nrows} rows, found {}", rows.len())));
        }
        BitMatrix::new(cols, rows)
    }

    pub fn to_hex_rows(&self) -> Vec<String> {
        self.rows.iter().map(BitVector::to_hex).collect()
    }

    pub fn from_hex_rows(cols: usize, rows: &[String]) -> Result<BitMatrix> {
        let rows = rows.iter().map(|r| BitVector::from_hex(cols, r)).collect::<Result<_>>()?;
        BitMatrix::new(cols, rows)
    }
}

/// Gauss-Jordan elimination over the column order (default: left to right).
fn reduce_in_place(rows: &mut [BitVector], cols: usize, order: Option<&[usize]>) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut rank = 0;
    let default_order: Vec<usize>;
    let order = match order {
        Some(o) => o,
        None => {
            default_order = (0..cols).collect();
            &default_order
        }
    };
    for &c in order {
        if rank == rows.len() {
            break;
        }
        let Some(found) = (rank..rows.len()).find(|&r| rows[r].get(c)) else {
            continue;
        };
        rows.swap(rank, found);
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row.get(c) {
                row.xor_assign(&pivot_row);
            }
        }
        pivots.push(c);
        rank += 1;
    }
    pivots
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.nrows(), self.cols)?;
        for row in &self.rows {
            writeln!(f, "  {row}")?;
        }
        write!(f, "]")
    }
}

#[derive(Serialize, Deserialize)]
struct HexMatrix {
    cols: usize,
    rows: Vec<String>,
}

impl Serialize for BitMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        HexMatrix { cols: self.cols, rows: self.to_hex_rows() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for BitMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let h = HexMatrix::deserialize(d)?;
        BitMatrix::from_hex_rows(h.cols, &h.rows).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d6() -> BitMatrix {
        BitMatrix::from_strs(&["100100", "010010", "001001"]).unwrap()
    }

    #[test]
    fn rref_examples() {
        let (r, p) = BitMatrix::identity(3).rref();
        assert_eq!(r, BitMatrix::identity(3));
        assert_eq!(p, vec![0, 1, 2]);

        let (r, p) = d6().rref();
        assert_eq!(r, d6());
        assert_eq!(p, vec![0, 1, 2]);

        let (r, p) = BitMatrix::zeros(2, 4).rref();
        assert_eq!(r, BitMatrix::zeros(2, 4));
        assert!(p.is_empty());
    }

    #[test]
    fn dual_examples() {
        let g = d6();
        let d = g.dual();
        assert!(d.same_row_space(&g));
        assert!(g.mul(&d.transpose()).unwrap().rows().iter().all(BitVector::is_zero));

        let rep = BitMatrix::from_strs(&["11"]).unwrap();
        assert_eq!(rep.dual(), rep);

        let full = BitMatrix::identity(5);
        let d = full.dual();
        assert_eq!((d.nrows(), d.ncols()), (0, 5));
    }

    #[test]
    fn self_duality_examples() {
        assert!(BitMatrix::from_strs(&["11"]).unwrap().is_self_dual().unwrap());
        assert!(d6().is_self_dual().unwrap());
        assert!(!BitMatrix::identity(2).is_self_dual().unwrap());
        assert!(matches!(BitMatrix::identity(3).is_self_dual(), Err(Error::InvalidLength(_))));
    }

    #[test]
    fn text_round_trip() {
        let g = d6();
        let text = g.to_text();
        assert_eq!(text, "3 6\n09\n12\n24\n");
        assert_eq!(BitMatrix::from_text(&text).unwrap(), g);
        assert!(BitMatrix::from_text("2 6\n09\n").is_err());
    }

    #[test]
    fn column_order_reduction() {
        let g = d6();
        let (rows, piv) = g.rref_with_order(&[3, 4, 5, 0, 1, 2]);
        assert_eq!(piv, vec![3, 4, 5]);
        assert_eq!(rows.len(), 3);
    }
}
