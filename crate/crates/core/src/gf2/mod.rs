//! Bit-packed linear algebra over GF(2).
//!
//! Codes are carried as generator matrices; [`BitMatrix::canonical`] gives
//! the RREF form used for hashing and comparison.

mod matrix;
mod permutation;
mod vector;

pub use matrix::BitMatrix;
pub use permutation::Permutation;
pub use vector::BitVector;

pub(crate) use vector::words_for;

#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    fn matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = BitMatrix> {
        (1..=max_cols, 0..=max_rows).prop_flat_map(|(cols, rows)| {
            proptest::collection::vec(proptest::collection::vec(any::<bool>(), cols), rows).prop_map(move |bits| {
                let rows = bits.iter().map(|b| BitVector::from_bools(b)).collect();
                BitMatrix::new(cols, rows).unwrap()
            })
        })
    }

    fn perm(n: usize) -> impl Strategy<Value = Permutation> {
        Just((0..n).collect::<Vec<_>>()).prop_shuffle().prop_map(|v| Permutation::new(v).unwrap())
    }

    proptest! {
        #[test]
        fn dual_rank_complements(g in matrix(12, 80)) {
            prop_assert_eq!(g.rank() + g.dual().rank(), g.ncols());
            let d = g.dual();
            for a in g.rows() {
                for b in d.rows() {
                    prop_assert!(!a.dot(b));
                }
            }
        }

        #[test]
        fn rref_is_idempotent(g in matrix(10, 70)) {
            let (r, p) = g.rref();
            let (rr, pp) = r.rref();
            prop_assert_eq!(&r, &rr);
            prop_assert_eq!(p, pp);
            prop_assert!(r.same_row_space(&g));
        }

        #[test]
        fn permutation_preserves_weight_and_composes(
            (v, p, q) in (1usize..150).prop_flat_map(|n| (
                proptest::collection::vec(any::<bool>(), n).prop_map(|b| BitVector::from_bools(&b)),
                perm(n),
                perm(n),
            ))
        ) {
            let pv = v.apply_permutation(&p).unwrap();
            prop_assert_eq!(pv.weight(), v.weight());
            let two_step = pv.apply_permutation(&q).unwrap();
            prop_assert_eq!(two_step, v.apply_permutation(&p.then(&q)).unwrap());
        }
    }
}
