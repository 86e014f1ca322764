use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A permutation of `0..degree`, stored as its image table.
///
/// Text form is 1-based cycle notation such as `(1,2,3,4)(5,6)`; the identity
/// prints as `I`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation { images: (0..degree).collect() }
    }

    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::InvalidPermutation(format!("{images:?} is not a bijection on 0..{n}")));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    /// Parses 1-based cycle notation, e.g. `(1,3,4)` or `(1,3)(2,4)`.
    pub fn from_cycles(degree: usize, text: &str) -> Result<Self> {
        let text: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut images: Vec<usize> = (0..degree).collect();
        if text.is_empty() || text == "I" || text == "()" || text == "id" {
            return Ok(Permutation { images });
        }
        let mut touched = vec![false; degree];
        let mut rest = text.as_str();
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('(')
                .and_then(|r| r.find(')').map(|end| (&r[..end], &r[end + 1..])))
                .ok_or_else(|| Error::Parse(format!("malformed cycle notation {text:?}")))?;
            let (cycle, tail) = body;
            rest = tail;
            let points: Vec<usize> = cycle
                .split(',')
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad point {t:?} in {text:?}")))
                        .and_then(|x| {
                            if x == 0 || x > degree {
                                Err(Error::InvalidPermutation(format!("point {x} outside 1..={degree}")))
                            } else {
                                Ok(x - 1)
                            }
                        })
                })
                .collect::<Result<_>>()?;
            for (k, &x) in points.iter().enumerate() {
                if touched[x] {
                    return Err(Error::InvalidPermutation(format!("point {} repeated in {text:?}", x + 1)));
                }
                touched[x] = true;
                images[x] = points[(k + 1) % points.len()];
            }
        }
        Ok(Permutation { images })
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn image(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Permutation { images: inv }
    }

    /// `self` followed by `next`: `i ↦ next(self(i))`.
    pub fn then(&self, next: &Permutation) -> Permutation {
        assert_eq!(self.degree(), next.degree());
        Permutation { images: self.images.iter().map(|&x| next.images[x]).collect() }
    }

    /// Direct sum: `self` on the first block, `other` shifted onto the next.
    pub fn extend(&self, other: &Permutation) -> Permutation {
        let shift = self.degree();
        let mut images = self.images.clone();
        images.extend(other.images.iter().map(|&x| x + shift));
        Permutation { images }
    }

    pub fn order(&self) -> usize {
        let mut lcm = 1usize;
        for cycle in self.cycles() {
            lcm = num::integer::lcm(lcm, cycle.len());
        }
        lcm
    }

    /// Cycles of length at least two, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.images[start] == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.images[start];
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.images[x];
            }
            out.push(cycle);
        }
        out
    }

    /// All permutations of `0..degree` in lexicographic order of image tables.
    pub fn all(degree: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut current: Vec<usize> = (0..degree).collect();
        loop {
            out.push(Permutation { images: current.clone() });
            // next lexicographic permutation
            let Some(i) = (1..degree).rev().find(|&i| current[i - 1] < current[i]) else {
                break;
            };
            let j = (i..degree).rev().find(|&j| current[j] > current[i - 1]).unwrap();
            current.swap(i - 1, j);
            current[i..].reverse();
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("I");
        }
        for cycle in cycles {
            let pts: Vec<String> = cycle.iter().map(|x| (x + 1).to_string()).collect();
            write!(f, "({})", pts.join(","))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[{}; {}]", self.degree(), self)
    }
}

impl From<Permutation> for String {
    fn from(p: Permutation) -> String {
        format!("{}:{}", p.degree(), p)
    }
}

impl TryFrom<String> for Permutation {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        let (deg, cycles) =
            s.split_once(':').ok_or_else(|| Error::Parse(format!("expected `degree:cycles`, got {s:?}")))?;
        let deg = deg.parse().map_err(|_| Error::Parse(format!("bad degree in {s:?}")))?;
        Permutation::from_cycles(deg, cycles)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_notation_round_trip() {
        for text in ["I", "(1,2,3,4)", "(1,3)(2,4)", "(1,4,3,2)", "(1,3,4)"] {
            let p = Permutation::from_cycles(4, text).unwrap();
            assert_eq!(p.to_string(), text);
        }
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::new(vec![0, 0, 1]).is_err());
        assert!(Permutation::from_cycles(4, "(1,2)(2,3)").is_err());
        assert!(Permutation::from_cycles(4, "(1,5)").is_err());
    }

    #[test]
    fn all_of_degree_four() {
        let all = Permutation::all(4);
        assert_eq!(all.len(), 24);
        assert!(all[0].is_identity());
    }

    #[test]
    fn composition_and_inverse() {
        let a = Permutation::from_cycles(4, "(1,2,3,4)").unwrap();
        assert!(a.then(&a.inverse()).is_identity());
        assert_eq!(a.then(&a).to_string(), "(1,3)(2,4)");
        assert_eq!(a.order(), 4);
    }
}
