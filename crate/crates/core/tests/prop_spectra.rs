use anyonforge_core::arith::{big_rational_zero, cmat_inverse, cmat_mul, Cplx, Ctx};
use anyonforge_core::spectra::{
    character_table, modular_pairs, s_matrix_candidates, vafa_t_matrices,
};
use num_rational::BigRational;
use proptest::prelude::*;
use std::collections::BTreeSet;

mod common;
use common::perm_fixing_unit;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// Each table row is an algebra character: chi(a)chi(b) = sum_c N_ab^c chi(c).
    #[test]
    fn rows_satisfy_the_character_equation(idx in 0usize..11, seed in any::<u64>()) {
        let ring = &common::pool()[idx];
        prop_assume!(ring.is_commutative());
        let cx = Ctx::new(64);
        let table = character_table(ring, seed, &cx).unwrap();
        let r = ring.rank();
        for row in table.rows() {
            for a in 1..=r {
                for b in 1..=r {
                    let mut rhs = Cplx::zero(&cx);
                    for c in 1..=r {
                        let n = ring.n(a, b, c) as i64;
                        if n != 0 {
                            rhs = rhs.add(&row[c - 1].scale(&cx.int(n), &cx), &cx);
                        }
                    }
                    let lhs = row[a - 1].mul(&row[b - 1], &cx);
                    prop_assert!(lhs.close(&rhs, &cx.tol(), &cx));
                }
            }
        }
    }

    /// Conjugating every fusion matrix by the table leaves only the diagonal,
    /// and that diagonal repeats the table values.
    #[test]
    fn tables_diagonalise_every_fusion_matrix(idx in 0usize..11, seed in any::<u64>()) {
        let ring = &common::pool()[idx];
        prop_assume!(ring.is_commutative());
        let cx = Ctx::new(64);
        let table = character_table(ring, seed, &cx).unwrap();
        let r = ring.rank();
        let v: Vec<Vec<Cplx>> = (0..r)
            .map(|i| (0..r).map(|j| table.rows()[j][i].clone()).collect())
            .collect();
        let vinv = cmat_inverse(&v, &cx).unwrap();
        for a in 1..=r {
            let na: Vec<Vec<Cplx>> = (1..=r)
                .map(|b| (1..=r).map(|c| Cplx::int(&cx, ring.n(a, b, c) as i64)).collect())
                .collect();
            let d = cmat_mul(&vinv, &cmat_mul(&na, &v, &cx), &cx);
            for i in 0..r {
                for j in 0..r {
                    if i == j {
                        prop_assert!(d[i][j].close(table.value(i, a), &cx.tol(), &cx));
                    } else {
                        prop_assert!(d[i][j].is_small(&cx.tol(), &cx));
                    }
                }
            }
        }
    }

    /// Every candidate S is symmetric, invertible, squares to the duality
    /// permutation, and keeps character rows as eigenvectors.
    #[test]
    fn s_candidates_obey_the_defining_relations(idx in 0usize..11, seed in any::<u64>()) {
        let ring = &common::pool()[idx];
        prop_assume!(ring.is_commutative());
        let cx = Ctx::new(64);
        let table = character_table(ring, seed, &cx).unwrap();
        let r = ring.rank();
        for s in s_matrix_candidates(&table, &cx) {
            for i in 0..r {
                for j in 0..r {
                    prop_assert!(s[i][j].close(&s[j][i], &cx.tol(), &cx));
                }
            }
            prop_assert!(cmat_inverse(&s, &cx).is_some());
            let s2 = cmat_mul(&s, &s, &cx);
            for i in 0..r {
                for j in 0..r {
                    let want = Cplx::int(&cx, (ring.dual(i + 1) == j + 1) as i64);
                    prop_assert!(s2[i][j].close(&want, &cx.tol(), &cx));
                }
            }
            // Row i is an eigenvector of [N_a] with eigenvalue S[i][a]/S[i][0].
            for i in 0..r {
                for a in 1..=r {
                    let chi = s[i][a - 1].div(&s[i][0], &cx);
                    for b in 1..=r {
                        let mut acc = Cplx::zero(&cx);
                        for c in 1..=r {
                            let n = ring.n(a, b, c) as i64;
                            if n != 0 {
                                acc = acc.add(&s[i][c - 1].scale(&cx.int(n), &cx), &cx);
                            }
                        }
                        prop_assert!(acc.close(&chi.mul(&s[i][b - 1], &cx), &cx.tol(), &cx));
                    }
                }
            }
        }
    }

    /// The exact phase solutions transform equivariantly under relabelling.
    #[test]
    fn phase_solutions_permute_with_the_ring(idx in 0usize..11, seed in any::<u64>()) {
        let ring = &common::pool()[idx];
        let r = ring.rank();
        let sigma = perm_fixing_unit(r, seed);
        let relabelled = ring.relabel(&sigma);
        let original: BTreeSet<Vec<BigRational>> = vafa_t_matrices(ring)
            .iter()
            .map(|t| {
                let mut q = vec![big_rational_zero(); r];
                for a in 0..r {
                    q[sigma[a] - 1] = t.phases()[a].clone();
                }
                q
            })
            .collect();
        let after: BTreeSet<Vec<BigRational>> = vafa_t_matrices(&relabelled)
            .iter()
            .map(|t| t.phases().to_vec())
            .collect();
        prop_assert_eq!(original, after);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    /// Modular pairs of a relabelled ring are the simultaneously permuted
    /// pairs of the original.
    #[test]
    fn modular_pairs_permute_with_the_ring(
        idx in prop::sample::select(vec![0usize, 1, 2, 3, 4, 5, 6, 8, 9]),
        seed in any::<u64>(),
    ) {
        let ring = &common::pool()[idx];
        let r = ring.rank();
        let sigma = perm_fixing_unit(r, seed);
        let relabelled = ring.relabel(&sigma);
        let cx = Ctx::new(64);
        let before = modular_pairs(ring, 0, &cx).unwrap();
        let after = modular_pairs(&relabelled, 0, &cx).unwrap();
        prop_assert_eq!(before.len(), after.len());
        for p in &before {
            let mut phases = vec![big_rational_zero(); r];
            for a in 0..r {
                phases[sigma[a] - 1] = p.t.phases()[a].clone();
            }
            let found = after.iter().any(|q| {
                q.t.phases() == &phases[..]
                    && q.lambda.close(&p.lambda, &cx.tol(), &cx)
                    && (0..r).all(|i| {
                        (0..r).all(|j| {
                            q.s[sigma[i] - 1][sigma[j] - 1].close(&p.s[i][j], &cx.tol(), &cx)
                        })
                    })
            });
            prop_assert!(found, "no permuted counterpart for a modular pair");
        }
    }
}
