//! Ring fixtures shared by the integration test suites.
#![allow(dead_code)]

use anyonforge_core::ring::FusionRing;

/// Builds a ring from products given as coefficient lists: `rows[a][b]` lists
/// the basis labels (with repetition) of the product a⊗b.
pub fn from_products(dual: Vec<usize>, rows: &[&[&[usize]]]) -> FusionRing {
    let r = dual.len();
    FusionRing::from_fn(r, dual, |a, b, c| {
        rows[a - 1][b - 1].iter().filter(|&&x| x == c).count() as u32
    })
    .expect("fixture table must validate")
}

pub fn trivial() -> FusionRing {
    FusionRing::validate(vec![1], vec![1]).unwrap()
}

pub fn fib() -> FusionRing {
    from_products(vec![1, 2], &[&[&[1], &[2]], &[&[2], &[1, 2]]])
}

pub fn ising() -> FusionRing {
    from_products(
        vec![1, 2, 3],
        &[
            &[&[1], &[2], &[3]],
            &[&[2], &[1], &[3]],
            &[&[3], &[3], &[1, 2]],
        ],
    )
}

pub fn rep_s3() -> FusionRing {
    from_products(
        vec![1, 2, 3],
        &[
            &[&[1], &[2], &[3]],
            &[&[2], &[1], &[3]],
            &[&[3], &[3], &[1, 2, 3]],
        ],
    )
}

/// Cyclic group ring Z_k.
pub fn zk(k: usize) -> FusionRing {
    let dual = (0..k).map(|a| (k - a) % k + 1).collect();
    FusionRing::from_fn(k, dual, |a, b, c| u32::from((a - 1 + b - 1) % k == c - 1)).unwrap()
}

/// Rank-6 non-commutative ring generated by two Fibonacci elements x, y with
/// x² = 1+x, y² = 1+y, xyx = yxy; basis (1, x, y, xyx, yx, xy).
pub fn hecke6() -> FusionRing {
    from_products(
        vec![1, 2, 3, 4, 6, 5],
        &[
            &[&[1], &[2], &[3], &[4], &[5], &[6]],
            &[&[2], &[1, 2], &[6], &[4, 5], &[4], &[3, 6]],
            &[&[3], &[5], &[1, 3], &[4, 6], &[2, 5], &[4]],
            &[
                &[4],
                &[4, 6],
                &[4, 5],
                &[1, 2, 3, 4, 4, 5, 6],
                &[3, 4, 5, 6],
                &[2, 4, 5, 6],
            ],
            &[&[5], &[3, 5], &[4], &[2, 4, 5, 6], &[4, 6], &[1, 3, 4]],
            &[&[6], &[4], &[2, 6], &[3, 4, 5, 6], &[1, 2, 4], &[4, 5]],
        ],
    )
}

/// A small pool of structurally varied rings for property tests.
pub fn pool() -> Vec<FusionRing> {
    vec![
        trivial(),
        fib(),
        ising(),
        rep_s3(),
        zk(2),
        zk(3),
        zk(4),
        zk(5),
        zk(2).direct_product(&zk(2)),
        fib().direct_product(&zk(2)),
        hecke6(),
    ]
}

/// Seed-driven permutation of 2..=r (the unit stays at 1), as a relabelling map.
pub fn perm_fixing_unit(r: usize, mut seed: u64) -> Vec<usize> {
    let mut sigma: Vec<usize> = (1..=r).collect();
    for i in (2..r).rev() {
        seed = seed
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        let j = 1 + (seed >> 33) as usize % i;
        sigma.swap(i, j);
    }
    sigma
}
