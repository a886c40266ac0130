//! Exact integer linear algebra: Smith normal form, kernels, cokernels and
//! solving linear congruences over the rationals modulo 1.
//!
//! All arithmetic is over `BigInt`/`BigRational`; nothing here rounds.

use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IMat {
    pub rows: usize,
    pub cols: usize,
    e: Vec<BigInt>,
}

impl IMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IMat { rows, cols, e: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IMat::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = IMat::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                *m.at_mut(i, j) = BigInt::from(*v);
            }
        }
        m
    }

    pub fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.e[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.e[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.e[i * self.cols + j] = v;
    }

    pub fn mul(&self, o: &IMat) -> IMat {
        assert_eq!(self.cols, o.rows);
        let mut out = IMat::zero(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.at(i, k).is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let add = self.at(i, k) * o.at(k, j);
                    *out.at_mut(i, j) += add;
                }
            }
        }
        out
    }

    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        (0..self.cols).map(|j| self.at(i, j).clone()).collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            let c = self.cols;
            self.e.swap(a * c + j, b * c + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            let c = self.cols;
            self.e.swap(i * c + a, i * c + b);
        }
    }

    /// row[i] += f * row[j]
    fn add_row(&mut self, i: usize, j: usize, f: &BigInt) {
        for k in 0..self.cols {
            let add = f * self.at(j, k);
            *self.at_mut(i, k) += add;
        }
    }

    /// col[i] += f * col[j]
    fn add_col(&mut self, i: usize, j: usize, f: &BigInt) {
        for k in 0..self.rows {
            let add = f * self.at(k, j);
            *self.at_mut(k, i) += add;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for k in 0..self.cols {
            let v = -self.at(i, k).clone();
            self.set(i, k, v);
        }
    }

    fn negate_col(&mut self, j: usize) {
        for k in 0..self.rows {
            let v = -self.at(k, j).clone();
            self.set(k, j, v);
        }
    }
}

/// Smith normal form `A = U * D * V` with unimodular `U`, `V` and diagonal `D`
/// whose nonzero entries are positive and form a divisibility chain.
///
/// The inverses of both transforms are tracked during reduction so kernel and
/// cokernel bases come out without a separate inversion step.
pub struct Snf {
    pub u: IMat,
    pub u_inv: IMat,
    pub d: IMat,
    pub v: IMat,
    pub v_inv: IMat,
    pub rank: usize,
}

impl Snf {
    pub fn diag(&self, i: usize) -> &BigInt {
        self.d.at(i, i)
    }
}

pub fn smith(a: &IMat) -> Snf {
    let m = a.rows;
    let n = a.cols;
    let mut d = a.clone();
    let mut u = IMat::identity(m);
    let mut u_inv = IMat::identity(m);
    let mut v = IMat::identity(n);
    let mut v_inv = IMat::identity(n);

    // Invariant: a == u * d * v at all times.
    // Row op E on d  => u := u * E^-1, u_inv := E * u_inv.
    // Col op F on d  => v := F^-1 * v, v_inv := v_inv * F.
    //
    // Every swap below moves a strictly smaller remainder into the pivot seat,
    // and after each swap we restart from pivot selection. Cleaning the column
    // before the row matters: once the pivot column is zero below the pivot,
    // the column operations that clean the pivot row no longer touch the
    // trailing block, which is what keeps intermediate entries under control.
    let mut t = 0;
    'position: while t < m && t < n {
        // Find the entry of smallest absolute value in the remaining block.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if d.at(i, j).is_zero() {
                    continue;
                }
                match pivot {
                    None => pivot = Some((i, j)),
                    Some((pi, pj)) => {
                        if d.at(i, j).abs() < d.at(pi, pj).abs() {
                            pivot = Some((i, j));
                        }
                    }
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        d.swap_rows(t, pi);
        u.swap_cols(t, pi);
        u_inv.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_rows(t, pj);
        v_inv.swap_cols(t, pj);

        // Clean column t below the pivot.
        for i in (t + 1)..m {
            if d.at(i, t).is_zero() {
                continue;
            }
            let q = round_div(d.at(i, t), d.at(t, t));
            if !q.is_zero() {
                let f = -q;
                d.add_row(i, t, &f);
                // E = I + f e_{i,t}: u gets E^-1 on the right, u_inv E on the left.
                u.add_col(t, i, &(-f.clone()));
                u_inv.add_row(i, t, &f);
            }
            if !d.at(i, t).is_zero() {
                d.swap_rows(t, i);
                u.swap_cols(t, i);
                u_inv.swap_rows(t, i);
                continue 'position;
            }
        }
        // Clean row t right of the pivot.
        for j in (t + 1)..n {
            if d.at(t, j).is_zero() {
                continue;
            }
            let q = round_div(d.at(t, j), d.at(t, t));
            if !q.is_zero() {
                let f = -q;
                d.add_col(j, t, &f);
                // F = I + f e_{t,j}: v gets F^-1 on the left, v_inv F on the right.
                v.add_row(t, j, &(-f.clone()));
                v_inv.add_col(j, t, &f);
            }
            if !d.at(t, j).is_zero() {
                d.swap_cols(t, j);
                v.swap_rows(t, j);
                v_inv.swap_cols(t, j);
                continue 'position;
            }
        }

        // Divisibility: the pivot must divide every remaining entry; if not,
        // fold the offending row in and redo this position (the new pivot is a
        // proper divisor of the old one, so this happens only finitely often).
        for i in (t + 1)..m {
            for j in (t + 1)..n {
                if !(d.at(i, j) % d.at(t, t)).is_zero() {
                    let one = BigInt::one();
                    d.add_row(t, i, &one);
                    u.add_col(i, t, &(-&one));
                    u_inv.add_row(t, i, &one);
                    continue 'position;
                }
            }
        }

        if d.at(t, t).is_negative() {
            d.negate_row(t);
            u.negate_col(t);
            u_inv.negate_row(t);
        }
        t += 1;
    }

    let mut rank = 0;
    while rank < m && rank < n && !d.at(rank, rank).is_zero() {
        rank += 1;
    }
    Snf { u, u_inv, d, v, v_inv, rank }
}

/// Quotient with the remainder of least absolute value (at most |b|/2), which
/// makes the Euclidean passes in `smith` converge in logarithmically many swaps.
fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut q, r) = a.div_mod_floor(b);
    if r.abs() * 2i32 > b.abs() {
        // Stepping q forward flips the remainder to the smaller representative
        // regardless of the sign of b (floor division keeps sign(r) == sign(b)).
        q += 1;
    }
    q
}

/// Integer kernel basis (columns x with A x = 0) and cokernel presentation of
/// Z^m / im(A): torsion factors with generators, plus free generators.
pub struct KernelCokernel {
    pub kernel: Vec<Vec<BigInt>>,
    pub torsion: Vec<(BigInt, Vec<BigInt>)>,
    pub coker_free: Vec<Vec<BigInt>>,
}

pub fn kernel_cokernel(a: &IMat) -> KernelCokernel {
    let s = smith(a);
    let n = a.cols;
    let m = a.rows;
    // A x = 0  <=>  D (V x) = 0  <=>  (V x)_i = 0 for i < rank,
    // so the kernel is spanned by V^-1 e_j for j >= rank.
    let kernel = (s.rank..n).map(|j| s.v_inv.col(j)).collect();
    let mut torsion = Vec::new();
    for i in 0..s.rank {
        let di = s.diag(i).clone();
        if di > BigInt::one() {
            torsion.push((di, s.u.col(i)));
        }
    }
    let coker_free = (s.rank..m).map(|i| s.u.col(i)).collect();
    KernelCokernel { kernel, torsion, coker_free }
}

/// Exact determinant of a square integer matrix (fraction-free elimination).
pub fn det(a: &IMat) -> BigInt {
    assert_eq!(a.rows, a.cols);
    let n = a.rows;
    if n == 0 {
        return BigInt::one();
    }
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..(n - 1) {
        if m.at(k, k).is_zero() {
            let swap = ((k + 1)..n).find(|&i| !m.at(i, k).is_zero());
            match swap {
                Some(i) => {
                    m.swap_rows(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let v = (m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j)) / &prev;
                m.set(i, j, v);
            }
        }
        prev = m.at(k, k).clone();
    }
    sign * m.at(n - 1, n - 1).clone()
}

/// Solution of `A x = y (mod 1)` over the rationals modulo integers.
#[derive(Debug)]
pub struct SolveMod1 {
    /// One particular solution.
    pub particular: Vec<BigRational>,
    /// Finite-order shift directions; adding `k/order * 1` of the generator
    /// for k = 0..order-1 enumerates the discrete classes.
    pub torsion: Vec<(BigInt, Vec<BigRational>)>,
    /// Directions in which any rational shift stays a solution.
    pub free: Vec<Vec<BigRational>>,
}

impl SolveMod1 {
    /// Enumerate all discrete solution classes (free directions left at zero),
    /// reduced into [0,1). Returns `None` when the class count exceeds `cap`.
    pub fn enumerate_classes(&self, cap: usize) -> Option<Vec<Vec<BigRational>>> {
        let mut count: usize = 1;
        for (ord, _) in &self.torsion {
            let o = ord_to_usize(ord)?;
            count = count.checked_mul(o)?;
            if count > cap {
                return None;
            }
        }
        let n = self.particular.len();
        let mut out = Vec::with_capacity(count);
        let mut idx = vec![0usize; self.torsion.len()];
        loop {
            let mut x = self.particular.clone();
            for (t, &k) in idx.iter().enumerate() {
                let (ord, gen) = &self.torsion[t];
                let f = BigRational::new(BigInt::from(k), ord.clone());
                for j in 0..n {
                    let add = &gen[j] * &f;
                    x[j] += add;
                }
            }
            for xv in x.iter_mut() {
                let f = xv.floor();
                *xv -= f;
            }
            out.push(x);
            // Odometer increment.
            let mut t = 0;
            loop {
                if t == idx.len() {
                    out.sort();
                    out.dedup();
                    return Some(out);
                }
                idx[t] += 1;
                if idx[t] < ord_to_usize(&self.torsion[t].0).unwrap() {
                    break;
                }
                idx[t] = 0;
                t += 1;
            }
        }
    }
}

fn ord_to_usize(b: &BigInt) -> Option<usize> {
    use num_traits::ToPrimitive;
    b.to_usize()
}

#[derive(Debug, PartialEq, Eq)]
pub enum SolveMod1Error {
    /// Some congruence has no rational solution (an incompatible constant).
    NoSolution,
}

pub fn solve_mod1(a: &IMat, y: &[BigRational]) -> Result<SolveMod1, SolveMod1Error> {
    assert_eq!(a.rows, y.len());
    let s = smith(a);
    let n = a.cols;
    // c = U^-1 y; then D w = c (mod 1) with w = V x.
    let mut c = vec![BigRational::from(BigInt::zero()); a.rows];
    for i in 0..a.rows {
        for j in 0..a.rows {
            let add = BigRational::from(s.u_inv.at(i, j).clone()) * &y[j];
            c[i] += add;
        }
    }
    // Rows past the rank demand integer right-hand sides.
    for ci in c.iter().skip(s.rank) {
        if !ci.is_integer() {
            return Err(SolveMod1Error::NoSolution);
        }
    }
    let mut w = vec![BigRational::from(BigInt::zero()); n];
    for i in 0..s.rank {
        w[i] = &c[i] / BigRational::from(s.diag(i).clone());
    }
    // x = V^-1 w.
    let to_x = |w: &[BigRational]| -> Vec<BigRational> {
        (0..n)
            .map(|i| {
                let mut acc = BigRational::from(BigInt::zero());
                for j in 0..n {
                    let add = BigRational::from(s.v_inv.at(i, j).clone()) * &w[j];
                    acc += add;
                }
                acc
            })
            .collect()
    };
    let particular = to_x(&w);
    let mut torsion = Vec::new();
    for i in 0..s.rank {
        let di = s.diag(i).clone();
        if di > BigInt::one() {
            // Shifting w_i by 1/d_i stays a solution, so x may shift by any
            // multiple of V^-1 e_i / d_i: a direction of order d_i in Q/Z.
            let mut dir = vec![BigRational::from(BigInt::zero()); n];
            for r in 0..n {
                dir[r] = BigRational::from(s.v_inv.at(r, i).clone());
            }
            torsion.push((di, dir));
        }
    }
    let free = (s.rank..n)
        .map(|j| {
            (0..n)
                .map(|i| BigRational::from(s.v_inv.at(i, j).clone()))
                .collect()
        })
        .collect();
    Ok(SolveMod1 { particular, torsion, free })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn check_decomposition(a: &IMat) {
        let s = smith(a);
        assert_eq!(&s.u.mul(&s.d).mul(&s.v), a, "U*D*V != A");
        assert_eq!(s.u.mul(&s.u_inv), IMat::identity(a.rows));
        assert_eq!(s.v.mul(&s.v_inv), IMat::identity(a.cols));
        assert_eq!(det(&s.u).abs(), BigInt::one());
        assert_eq!(det(&s.v).abs(), BigInt::one());
        for i in 1..s.rank {
            assert!((s.diag(i) % s.diag(i - 1)).is_zero(), "no divisibility chain");
        }
    }

    #[test]
    fn smith_small() {
        let a = IMat::from_rows(vec![vec![2, 4], vec![6, 8]]);
        let s = smith(&a);
        check_decomposition(&a);
        assert_eq!(s.diag(0), &BigInt::from(2));
        assert_eq!(s.diag(1), &BigInt::from(4));
    }

    #[test]
    fn smith_coprime_diagonal() {
        let a = IMat::from_rows(vec![vec![2, 0, 0], vec![0, 3, 0]]);
        let s = smith(&a);
        check_decomposition(&a);
        assert_eq!(s.diag(0), &BigInt::from(1));
        assert_eq!(s.diag(1), &BigInt::from(6));
    }

    #[test]
    fn smith_rank_deficient() {
        let a = IMat::from_rows(vec![vec![1, 2, 3], vec![2, 4, 6]]);
        let s = smith(&a);
        check_decomposition(&a);
        assert_eq!(s.rank, 1);
    }

    #[test]
    fn kernel_of_sum_functional() {
        let a = IMat::from_rows(vec![vec![1, 1, 1]]);
        let kc = kernel_cokernel(&a);
        assert_eq!(kc.kernel.len(), 2);
        for k in &kc.kernel {
            let sum: BigInt = k.iter().sum();
            assert!(sum.is_zero());
        }
        assert!(kc.torsion.is_empty());
        assert!(kc.coker_free.is_empty());
    }

    #[test]
    fn cokernel_of_doubling() {
        let a = IMat::from_rows(vec![vec![2, 0], vec![0, 2]]);
        let kc = kernel_cokernel(&a);
        assert!(kc.kernel.is_empty());
        assert_eq!(kc.torsion.len(), 2);
        assert_eq!(kc.torsion[0].0, BigInt::from(2));
        assert_eq!(kc.torsion[1].0, BigInt::from(2));
    }

    #[test]
    fn det_examples() {
        let a = IMat::from_rows(vec![vec![1, 2], vec![3, 4]]);
        assert_eq!(det(&a), BigInt::from(-2));
        let b = IMat::from_rows(vec![vec![2, 0, 1], vec![1, 1, 0], vec![0, 3, 1]]);
        assert_eq!(det(&b), BigInt::from(5));
    }

    #[test]
    fn mod1_quarter_classes() {
        let a = IMat::from_rows(vec![vec![4]]);
        let y = vec![BigRational::from(BigInt::zero())];
        let sol = solve_mod1(&a, &y).unwrap();
        let classes = sol.enumerate_classes(100).unwrap();
        let got: Vec<String> = classes.iter().map(|c| alloc::format!("{}", c[0])).collect();
        assert_eq!(got, vec!["0", "1/4", "1/2", "3/4"]);
    }

    #[test]
    fn mod1_inconsistent() {
        let a = IMat::from_rows(vec![vec![2, 0], vec![0, 0]]);
        let y = vec![
            BigRational::new(BigInt::from(1), BigInt::from(2)),
            BigRational::new(BigInt::from(1), BigInt::from(3)),
        ];
        assert_eq!(solve_mod1(&a, &y).unwrap_err(), SolveMod1Error::NoSolution);
    }

    #[test]
    fn mod1_solutions_satisfy_system() {
        let a = IMat::from_rows(vec![vec![2, 1], vec![0, 3]]);
        let y = vec![
            BigRational::new(BigInt::from(1), BigInt::from(2)),
            BigRational::new(BigInt::from(2), BigInt::from(3)),
        ];
        let sol = solve_mod1(&a, &y).unwrap();
        for class in sol.enumerate_classes(1000).unwrap() {
            for i in 0..a.rows {
                let mut acc = BigRational::from(BigInt::zero());
                for j in 0..a.cols {
                    let add = BigRational::from(a.at(i, j).clone()) * &class[j];
                    acc += add;
                }
                let resid = &acc - &y[i];
                assert!(resid.is_integer(), "A x - y not integral");
            }
        }
    }
}
