use anyonforge_core::arith::Ctx;
use proptest::prelude::*;

mod common;
use common::perm_fixing_unit;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn canonical_key_is_relabelling_invariant(
        idx in 0usize..11,
        seed in any::<u64>(),
    ) {
        let cx = Ctx::new(64);
        let ring = &common::pool()[idx];
        let sigma = perm_fixing_unit(ring.rank(), seed);
        let relabelled = ring.relabel(&sigma);
        prop_assert_eq!(
            relabelled.canonical_form(&cx).key,
            ring.canonical_form(&cx).key
        );
        let form = ring.canonical_form(&cx);
        let again = form.ring.canonical_form(&cx);
        prop_assert_eq!(form.key, again.key);
        prop_assert_eq!(form.ring.tensor(), again.ring.tensor());
    }

    #[test]
    fn product_total_dimension_multiplies(a in 0usize..11, b in 0usize..11) {
        let cx = Ctx::new(64);
        let pool = common::pool();
        // The exhaustive automorphism search in analyze is (r-1)! and meant
        // for desk-scale ranks only.
        prop_assume!(pool[a].rank() * pool[b].rank() <= 9);
        let product = pool[a].direct_product(&pool[b]);
        let total = product.analyze(&cx).total_fpdim_sq;
        let expect = cx.mul(
            &pool[a].analyze(&cx).total_fpdim_sq,
            &pool[b].analyze(&cx).total_fpdim_sq,
        );
        let tol = cx.pow10(-30);
        prop_assert!(cx.close(&total, &expect, &tol));
    }

    #[test]
    fn automorphisms_form_a_group(idx in 0usize..11) {
        let cx = Ctx::new(64);
        let ring = &common::pool()[idx];
        let auts = ring.analyze(&cx).automorphisms;
        let contains = |p: &Vec<usize>| auts.iter().any(|q| q == p);
        for s in &auts {
            let r = ring.rank();
            let mut inv = vec![0usize; r];
            for a in 1..=r {
                inv[s[a - 1] - 1] = a;
            }
            prop_assert!(contains(&inv));
            for t in &auts {
                let composed: Vec<usize> = (1..=r).map(|a| t[s[a - 1] - 1]).collect();
                prop_assert!(contains(&composed));
            }
        }
    }

    #[test]
    fn invertible_iff_unit_dimension(idx in 0usize..11) {
        let cx = Ctx::new(64);
        let ring = &common::pool()[idx];
        let analysis = ring.analyze(&cx);
        let tol = cx.pow10(-30);
        for a in 1..=ring.rank() {
            let exact = ring.is_invertible(a);
            let numeric = cx.close(&analysis.fpdims[a - 1], &cx.one(), &tol);
            prop_assert_eq!(exact, numeric);
        }
    }
}
