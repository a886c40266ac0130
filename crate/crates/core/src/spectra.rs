//! Characters, candidate S-matrices and T-matrices of fusion rings.
//!
//! Everything here works at the ring level, before any categorification: the
//! fusion matrices of a commutative ring commute and are simultaneously
//! diagonalisable, so a random integer combination of them generically has
//! simple spectrum and its eigenvectors carry the ring characters. Candidate
//! S-matrices then arise by permuting and rescaling character rows, and
//! diagonal T-matrices are pinned down by an exact integer congruence system
//! on their phases. Matching S/T pairs certify that a ring could support
//! modular data; their absence rules it out.

use crate::arith::{aberth_roots, big_rational_zero, cmat_inverse, cmat_mul, CMat, Cplx, Ctx};
use crate::ring::{next_permutation, FusionRing};
use crate::zlinalg::{det, solve_mod1, IMat};
use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpectrumError {
    /// The fusion matrices of a non-commutative ring cannot be
    /// simultaneously diagonalised.
    NonCommutative,
}

impl core::fmt::Display for SpectrumError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            SpectrumError::NonCommutative => {
                write!(f, "spectral analysis requires a commutative fusion ring")
            }
        }
    }
}

/// Character table of a commutative fusion ring.
///
/// Row `i` holds the values `chi_i(a)` of one character on every basis
/// element; each row is a simultaneous eigenvector of all fusion matrices.
/// Rows are sorted so that the all-positive Perron row (the
/// Frobenius-Perron dimensions) comes first; the remaining rows follow in a
/// deterministic order independent of the sampling seed.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    rank: usize,
    dual: Vec<usize>,
    rows: Vec<Vec<Cplx>>,
}

impl CharacterTable {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rows(&self) -> &[Vec<Cplx>] {
        &self.rows
    }

    /// Value `chi_i(a)` for row `i` (0-based) on element `a` (1-based).
    pub fn value(&self, i: usize, a: usize) -> &Cplx {
        &self.rows[i][a - 1]
    }

    /// The Perron row: Frobenius-Perron dimensions of the ring elements.
    pub fn fp_row(&self) -> &[Cplx] {
        &self.rows[0]
    }

    /// Dual of element `a` in the ring the table was computed from.
    pub fn dual(&self, a: usize) -> usize {
        self.dual[a - 1]
    }
}

/// Compute the character table of a commutative ring.
///
/// A combination `M = sum_a c_a [N_a]` with random integer weights
/// `c_a in [1, 2^16]` generically has `r` distinct eigenvalues, and then each
/// eigenvector determines one character. Degenerate draws are detected
/// exactly (square-free test on the characteristic polynomial) and resampled,
/// up to eight times; the final table is verified by conjugating every fusion
/// matrix and bounding the off-diagonal residue, so a returned table is
/// always a genuine simultaneous diagonalisation at working precision.
pub fn character_table(
    ring: &FusionRing,
    seed: u64,
    cx: &Ctx,
) -> Result<CharacterTable, SpectrumError> {
    if !ring.is_commutative() {
        return Err(SpectrumError::NonCommutative);
    }
    let r = ring.rank();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last = "no attempt made";
    for _ in 0..8 {
        let c: Vec<i64> = (0..r).map(|_| (rng.next_u32() % 65536) as i64 + 1).collect();
        match try_table(ring, &c, cx) {
            Ok(rows) => {
                return Ok(CharacterTable {
                    rank: r,
                    dual: ring.dual_map().to_vec(),
                    rows,
                })
            }
            Err(issue) => last = issue,
        }
    }
    // A valid commutative ring fails all eight draws only with probability
    // comparable to hitting a measure-zero set eight times in a row.
    panic!("character_table: no separating combination after 8 attempts ({last})");
}

fn fusion_matrix(ring: &FusionRing, a: usize, cx: &Ctx) -> CMat {
    let r = ring.rank();
    (1..=r)
        .map(|b| (1..=r).map(|c| Cplx::int(cx, ring.n(a, b, c) as i64)).collect())
        .collect()
}

fn try_table(ring: &FusionRing, c: &[i64], cx: &Ctx) -> Result<Vec<Vec<Cplx>>, &'static str> {
    let r = ring.rank();
    let mut m = IMat::zero(r, r);
    for a in 1..=r {
        for b in 1..=r {
            for cc in 1..=r {
                let add = BigInt::from(c[a - 1] * ring.n(a, b, cc) as i64);
                let cur = m.at(b - 1, cc - 1).clone();
                m.set(b - 1, cc - 1, cur + add);
            }
        }
    }
    let p = char_poly(&m);
    if !is_square_free(&p) {
        return Err("degenerate eigenvalues");
    }
    let pc: Vec<Cplx> = p.iter().map(|q| Cplx::from_rational(cx, q)).collect();
    let roots = aberth_roots(&pc, cx);
    let mats: Vec<CMat> = (1..=r).map(|a| fusion_matrix(ring, a, cx)).collect();
    let mut rows = Vec::with_capacity(r);
    for lam in &roots {
        let shifted: CMat = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| {
                        let e = Cplx::real(cx, cx.from_bigint(m.at(i, j)));
                        if i == j {
                            e.sub(lam, cx)
                        } else {
                            e
                        }
                    })
                    .collect()
            })
            .collect();
        let v = null_vector(shifted, cx);
        // Read characters off the largest eigenvector component; the ratio
        // ([N_a] v)_j / v_j is stable there even when other components of v
        // are small.
        let mut jbest = 0;
        let mut best = v[0].abs(cx);
        for (j, e) in v.iter().enumerate().skip(1) {
            let ab = e.abs(cx);
            if cx.lt(&best, &ab) {
                jbest = j;
                best = ab;
            }
        }
        let mut row = Vec::with_capacity(r);
        for mat in &mats {
            let mut acc = Cplx::zero(cx);
            for (k, vk) in v.iter().enumerate() {
                acc = acc.add(&mat[jbest][k].mul(vk, cx), cx);
            }
            row.push(acc.div(&v[jbest], cx));
        }
        rows.push(row);
    }
    // Descending entrywise order puts the Perron row first: no character
    // value exceeds the corresponding dimension in real part, with equality
    // only while the rows agree.
    rows.sort_by(|x, y| row_cmp(y, x, cx));
    // Verify through the table itself: its rows as columns of V must turn
    // every fusion matrix into a diagonal one.
    let v: CMat = (0..r)
        .map(|i| (0..r).map(|j| rows[j][i].clone()).collect())
        .collect();
    let Some(vinv) = cmat_inverse(&v, cx) else {
        return Err("character matrix is singular");
    };
    let tol = cx.tol();
    for mat in &mats {
        let d = cmat_mul(&vinv, &cmat_mul(mat, &v, cx), cx);
        for i in 0..r {
            for j in 0..r {
                if i != j && !d[i][j].is_small(&tol, cx) {
                    return Err("off-diagonal residue above tolerance");
                }
            }
        }
    }
    Ok(rows)
}

/// Null vector of a square matrix of nullity one, by Gauss-Jordan
/// elimination. The pivot-free column gets value 1, the rest follow from the
/// reduced rows.
fn null_vector(mut a: CMat, cx: &Ctx) -> Vec<Cplx> {
    let n = a.len();
    let mut scale = cx.zero();
    for row in &a {
        for e in row {
            let ab = e.abs(cx);
            if cx.lt(&scale, &ab) {
                scale = ab;
            }
        }
    }
    let thr = cx.mul(&cx.tol(), &cx.add(&cx.one(), &scale));
    let mut used = vec![false; n];
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    for col in 0..n {
        let mut best = None;
        let mut best_abs = thr.clone();
        for (row, u) in used.iter().enumerate() {
            if *u {
                continue;
            }
            let ab = a[row][col].abs(cx);
            if cx.lt(&best_abs, &ab) {
                best = Some(row);
                best_abs = ab;
            }
        }
        let Some(prow) = best else { continue };
        used[prow] = true;
        pivots.push((prow, col));
        let inv = a[prow][col].inv(cx);
        for j in 0..n {
            a[prow][j] = a[prow][j].mul(&inv, cx);
        }
        for row in 0..n {
            if row == prow || a[row][col].is_zero() {
                continue;
            }
            let f = a[row][col].clone();
            for j in 0..n {
                a[row][j] = a[row][j].sub(&f.mul(&a[prow][j], cx), cx);
            }
        }
    }
    let free = (0..n)
        .find(|c| !pivots.iter().any(|&(_, pc)| pc == *c))
        .unwrap_or(n - 1);
    let mut v = vec![Cplx::zero(cx); n];
    v[free] = Cplx::one(cx);
    for &(prow, pcol) in &pivots {
        v[pcol] = a[prow][free].neg();
    }
    v
}

/// Exact characteristic polynomial `det(xI - M)`, little-endian
/// coefficients, via determinant evaluation at the integer nodes `0..=r`
/// followed by Lagrange interpolation.
fn char_poly(m: &IMat) -> Vec<BigRational> {
    let r = m.rows;
    let mut ys = Vec::with_capacity(r + 1);
    for x in 0..=(r as i64) {
        let mut b = IMat::zero(r, r);
        for i in 0..r {
            for j in 0..r {
                let mut v = -m.at(i, j).clone();
                if i == j {
                    v += BigInt::from(x);
                }
                b.set(i, j, v);
            }
        }
        ys.push(det(&b));
    }
    let mut acc = vec![big_rational_zero(); r + 1];
    for (k, yk) in ys.iter().enumerate() {
        let mut num = vec![BigRational::one()];
        let mut den = BigInt::one();
        for j in 0..=r {
            if j == k {
                continue;
            }
            num = poly_mul_linear(&num, j as i64);
            den *= BigInt::from(k as i64) - BigInt::from(j as i64);
        }
        let scale = BigRational::new(yk.clone(), den);
        for (i, coeff) in num.iter().enumerate() {
            acc[i] += coeff * &scale;
        }
    }
    debug_assert!(acc[r].is_one(), "characteristic polynomial must be monic");
    acc
}

/// Multiply a polynomial by `(x - root)`.
fn poly_mul_linear(p: &[BigRational], root: i64) -> Vec<BigRational> {
    let mut out = vec![big_rational_zero(); p.len() + 1];
    let neg = BigRational::from(BigInt::from(-root));
    for (i, c) in p.iter().enumerate() {
        out[i + 1] += c;
        out[i] += c * &neg;
    }
    out
}

fn poly_trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
    p
}

fn poly_rem(mut a: Vec<BigRational>, b: &[BigRational]) -> Vec<BigRational> {
    while a.len() >= b.len() {
        let f = a.last().unwrap() / b.last().unwrap();
        let shift = a.len() - b.len();
        for (i, bc) in b.iter().enumerate() {
            let sub = bc * &f;
            a[shift + i] -= sub;
        }
        a.pop();
        a = poly_trim(a);
        if a.is_empty() {
            break;
        }
    }
    a
}

/// A repeated eigenvalue shows up as a positive-degree gcd of the
/// characteristic polynomial and its derivative.
fn is_square_free(p: &[BigRational]) -> bool {
    let mut a = poly_trim(p.to_vec());
    let mut b = poly_trim(
        (1..a.len())
            .map(|i| &a[i] * BigRational::from(BigInt::from(i as i64)))
            .collect(),
    );
    while !b.is_empty() {
        let r = poly_rem(a, &b);
        a = b;
        b = r;
    }
    a.len() == 1
}

// Component-wise tolerant comparison: values within tolerance count as ties,
// so rounding noise on a genuinely equal component can never decide an order.
fn cplx_cmp(x: &Cplx, y: &Cplx, cx: &Ctx) -> Ordering {
    let tol = cx.tol();
    if !cx.close(&x.re, &y.re, &tol) {
        return cx.cmp(&x.re, &y.re);
    }
    if !cx.close(&x.im, &y.im, &tol) {
        return cx.cmp(&x.im, &y.im);
    }
    Ordering::Equal
}

fn row_cmp(x: &[Cplx], y: &[Cplx], cx: &Ctx) -> Ordering {
    for (a, b) in x.iter().zip(y) {
        match cplx_cmp(a, b, cx) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    Ordering::Equal
}

fn mat_cmp(x: &CMat, y: &CMat, cx: &Ctx) -> Ordering {
    for (a, b) in x.iter().zip(y) {
        match row_cmp(a, b, cx) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    Ordering::Equal
}

/// Candidate S-matrices of the ring behind a character table.
///
/// Any S-matrix has simultaneous eigenvectors of the fusion matrices as
/// rows, so it must be a row permutation of the character table up to row
/// scalings. Requiring `S_{1a} = S_{a1}` fixes the scalings to
/// `S[i][a] = c * chi_p(i) * chi_{pi(i)}(a)` where `chi_p` is the row
/// assigned to the unit, with one global constant `c` fixed up to sign by
/// `[S^2]_{11} = 1`. Every permutation is tried; candidates must then be
/// symmetric, invertible and square to the duality permutation matrix.
/// Both members of each `+/-c` pair qualify, so candidates come in sign
/// pairs, sorted by entrywise lexicographic order.
pub fn s_matrix_candidates(table: &CharacterTable, cx: &Ctx) -> Vec<CMat> {
    let r = table.rank();
    let tol = cx.tol();
    let mut found: Vec<CMat> = Vec::new();
    let mut perm: Vec<usize> = (0..r).collect();
    loop {
        'this_perm: {
            let lead = &table.rows()[perm[0]];
            // A zero in the leading row would zero out a full row of S.
            for e in lead.iter() {
                if e.is_small(&tol, cx) {
                    break 'this_perm;
                }
            }
            let sp: CMat = (0..r)
                .map(|i| {
                    let row = &table.rows()[perm[i]];
                    (0..r).map(|a| lead[i].mul(&row[a], cx)).collect()
                })
                .collect();
            for i in 0..r {
                for j in (i + 1)..r {
                    if !sp[i][j].close(&sp[j][i], &tol, cx) {
                        break 'this_perm;
                    }
                }
            }
            let mut beta = Cplx::zero(cx);
            for k in 0..r {
                beta = beta.add(&sp[0][k].mul(&sp[k][0], cx), cx);
            }
            if beta.is_small(&tol, cx) {
                break 'this_perm;
            }
            let c0 = beta.sqrt(cx).inv(cx);
            for c in [c0.clone(), c0.neg()] {
                let s: CMat = sp
                    .iter()
                    .map(|row| row.iter().map(|e| e.mul(&c, cx)).collect())
                    .collect();
                let s2 = cmat_mul(&s, &s, cx);
                let mut ok = true;
                'check: for i in 0..r {
                    for j in 0..r {
                        let want = Cplx::int(cx, (table.dual(i + 1) == j + 1) as i64);
                        if !s2[i][j].close(&want, &tol, cx) {
                            ok = false;
                            break 'check;
                        }
                    }
                }
                if ok {
                    found.push(s);
                }
            }
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    found.sort_by(|a, b| mat_cmp(a, b, cx));
    found.dedup_by(|a, b| mat_cmp(a, b, cx) == Ordering::Equal);
    found
}

/// Diagonal T-matrix candidate with exact rational phases: the entry for
/// element `a` is `exp(2 pi i phases[a-1])`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct TMatrix {
    phases: Vec<BigRational>,
}

impl TMatrix {
    pub fn phases(&self) -> &[BigRational] {
        &self.phases
    }

    /// Diagonal entries evaluated at working precision.
    pub fn thetas(&self, cx: &Ctx) -> Vec<Cplx> {
        self.phases.iter().map(|q| Cplx::unit_phase(cx, q)).collect()
    }
}

/// Upper bound on the number of discrete phase classes enumerated per ring;
/// low-rank rings stay far below it.
const PHASE_CLASS_CAP: usize = 1 << 20;

/// All diagonal T-matrices compatible with the twist constraints of the
/// ring, as exact rational phases.
///
/// Any T-matrix of modular data satisfies, for every quadruple `(i,j,k,l)`,
/// the product relation whose logarithm reads
/// `sum_n N_ij^{n*} N_kl^n (t_i+t_j+t_k+t_l)
///  - sum_n (N_ij^n N_{l n}^{k*} + N_{jk}^n N_{l n}^{i*} + N_{ik}^n N_{l n}^{j*}) t_n
///  in Z` with `t_a = ln(theta_a)/(2 pi i)`, together with `theta_1 = 1`.
/// The system is solved exactly modulo 1; its solution set is finite for
/// every ring encountered here (a free direction would signal a continuum,
/// which gets reported and skipped).
pub fn vafa_t_matrices(ring: &FusionRing) -> Vec<TMatrix> {
    let r = ring.rank();
    let mut distinct: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut unit = vec![0i64; r];
    unit[0] = 1;
    distinct.insert(unit);
    for i in 1..=r {
        for j in 1..=r {
            for k in 1..=r {
                for l in 1..=r {
                    let mut row = vec![0i64; r];
                    let mut tot: i64 = 0;
                    for n in 1..=r {
                        tot += ring.n(i, j, ring.dual(n)) as i64 * ring.n(k, l, n) as i64;
                    }
                    for idx in [i, j, k, l] {
                        row[idx - 1] += tot;
                    }
                    for n in 1..=r {
                        let b = ring.n(i, j, n) as i64 * ring.n(l, n, ring.dual(k)) as i64
                            + ring.n(j, k, n) as i64 * ring.n(l, n, ring.dual(i)) as i64
                            + ring.n(i, k, n) as i64 * ring.n(l, n, ring.dual(j)) as i64;
                        row[n - 1] -= b;
                    }
                    if row.iter().any(|&x| x != 0) {
                        distinct.insert(row);
                    }
                }
            }
        }
    }
    let a = IMat::from_rows(distinct.into_iter().collect());
    let y = vec![big_rational_zero(); a.rows];
    let sol = solve_mod1(&a, &y).expect("homogeneous phase system is always solvable");
    if !sol.free.is_empty() {
        log::warn!(
            target: "spectra",
            "phase system keeps {} free directions; only the discrete classes are returned",
            sol.free.len()
        );
    }
    let classes = sol
        .enumerate_classes(PHASE_CLASS_CAP)
        .expect("phase class count exceeds the enumeration cap");
    classes.into_iter().map(|phases| TMatrix { phases }).collect()
}

/// A matching S/T pair: `(ST)^3 = lambda * S^2` at working precision.
#[derive(Clone, Debug)]
pub struct ModularCandidate {
    pub s: CMat,
    pub t: TMatrix,
    pub lambda: Cplx,
}

/// Cross the S-matrix candidates with the admissible T-matrices and keep
/// the pairs that represent the modular group projectively.
///
/// `lambda` is recovered from the first entry where `S^2` is clearly
/// nonzero, then the full matrix relation is checked entrywise.
pub fn modular_pairs(
    ring: &FusionRing,
    seed: u64,
    cx: &Ctx,
) -> Result<Vec<ModularCandidate>, SpectrumError> {
    let table = character_table(ring, seed, cx)?;
    let smats = s_matrix_candidates(&table, cx);
    let tmats = vafa_t_matrices(ring);
    let tol = cx.tol();
    let mut out = Vec::new();
    for s in &smats {
        let s2 = cmat_mul(s, s, cx);
        for t in &tmats {
            let thetas = t.thetas(cx);
            let st: CMat = s
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(&thetas)
                        .map(|(e, th)| e.mul(th, cx))
                        .collect()
                })
                .collect();
            let st3 = cmat_mul(&cmat_mul(&st, &st, cx), &st, cx);
            let mut lambda = None;
            'find: for (i, row) in s2.iter().enumerate() {
                for (j, e) in row.iter().enumerate() {
                    if !e.is_small(&tol, cx) {
                        lambda = Some(st3[i][j].div(e, cx));
                        break 'find;
                    }
                }
            }
            let Some(lambda) = lambda else { continue };
            let mut ok = true;
            'check: for (i, row) in st3.iter().enumerate() {
                for (j, e) in row.iter().enumerate() {
                    if !e.close(&lambda.mul(&s2[i][j], cx), &tol, cx) {
                        ok = false;
                        break 'check;
                    }
                }
            }
            if ok {
                out.push(ModularCandidate {
                    s: s.clone(),
                    t: t.clone(),
                    lambda,
                });
            }
        }
    }
    Ok(out)
}
