//! Randomized checks of the Smith normal form decomposition.

use anyonforge_core::zlinalg::{det, kernel_cokernel, smith, IMat};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn arb_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=6, 1usize..=6).prop_flat_map(|(m, n)| {
        proptest::collection::vec(proptest::collection::vec(-1000i64..=1000, n), m)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn smith_reconstructs_and_is_canonical(rows in arb_matrix()) {
        let a = IMat::from_rows(rows);
        let s = smith(&a);
        // Exact reconstruction.
        prop_assert_eq!(&s.u.mul(&s.d).mul(&s.v), &a);
        // Unimodular transforms with exact tracked inverses.
        prop_assert_eq!(det(&s.u).abs(), BigInt::one());
        prop_assert_eq!(det(&s.v).abs(), BigInt::one());
        prop_assert_eq!(s.u.mul(&s.u_inv), IMat::identity(a.rows));
        prop_assert_eq!(s.v.mul(&s.v_inv), IMat::identity(a.cols));
        // Diagonal, positive pivots, divisibility chain, trailing zeros.
        for i in 0..s.d.rows {
            for j in 0..s.d.cols {
                if i != j {
                    prop_assert!(s.d.at(i, j).is_zero());
                }
            }
        }
        for i in 0..s.rank {
            prop_assert!(s.diag(i).is_positive());
            if i > 0 {
                prop_assert!((s.diag(i) % s.diag(i - 1)).is_zero());
            }
        }
        for i in s.rank..s.d.rows.min(s.d.cols) {
            prop_assert!(s.diag(i).is_zero());
        }
    }

    #[test]
    fn kernel_vectors_annihilate(rows in arb_matrix()) {
        let a = IMat::from_rows(rows);
        let kc = kernel_cokernel(&a);
        for k in &kc.kernel {
            for i in 0..a.rows {
                let mut acc = BigInt::zero();
                for j in 0..a.cols {
                    acc += a.at(i, j) * &k[j];
                }
                prop_assert!(acc.is_zero());
            }
        }
        let s = smith(&a);
        prop_assert_eq!(kc.kernel.len(), a.cols - s.rank);
    }
}
