//! Fusion-ring data model: axiom validation, dimension/automorphism analysis,
//! canonical naming, direct products and subring reports.
//!
//! Basis elements are labelled `1..=rank` with the unit at `1`, matching the
//! convention used throughout the solver modules. Storage is a flat row-major
//! tensor; the accessors take 1-based labels.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::arith::{Ctx, Real};

/// Axiom families that [`FusionRing::validate`] checks, in checking order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axiom {
    /// Tensor/dual dimensions, dual range, dual an involution fixing the unit.
    Shape,
    /// N[1][a][b] = N[a][1][b] = δ(a,b).
    Unitality,
    /// N[a][b][1] = δ(b, dual(a)).
    Duality,
    /// Σ_e N[a][b][e] N[e][c][d] = Σ_f N[b][c][f] N[a][f][d].
    Associativity,
    /// N[a][b][c] = N[a*][c][b] = N[c][b*][a].
    Pivotal,
}

/// A failed axiom together with the indices at which it failed. Unused trailing
/// witness slots are zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AxiomViolation {
    pub axiom: Axiom,
    pub witness: [usize; 4],
}

impl core::fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{:?} violated at {:?}", self.axiom, self.witness)
    }
}

/// A fusion ring: structure-constant tensor plus dual involution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FusionRing {
    rank: usize,
    multiplicity: u32,
    dual: Vec<usize>,
    n: Vec<u32>,
}

impl FusionRing {
    /// Validates a flat row-major tensor (`n[(a-1)·r² + (b-1)·r + (c-1)]`)
    /// against all ring axioms. The multiplicity is the largest entry.
    pub fn validate(dual: Vec<usize>, n: Vec<u32>) -> Result<FusionRing, AxiomViolation> {
        let r = dual.len();
        let fail = |axiom, witness| Err(AxiomViolation { axiom, witness });
        if r == 0 || n.len() != r * r * r {
            return fail(Axiom::Shape, [0; 4]);
        }
        for a in 1..=r {
            let d = dual[a - 1];
            if d < 1 || d > r {
                return fail(Axiom::Shape, [a, 0, 0, 0]);
            }
            if dual[d - 1] != a || (a == 1 && d != 1) {
                return fail(Axiom::Shape, [a, d, 0, 0]);
            }
        }
        let ring = FusionRing {
            rank: r,
            multiplicity: n.iter().copied().max().unwrap_or(0),
            dual,
            n,
        };
        for a in 1..=r {
            for b in 1..=r {
                let delta = u32::from(a == b);
                if ring.n(1, a, b) != delta || ring.n(a, 1, b) != delta {
                    return fail(Axiom::Unitality, [a, b, 0, 0]);
                }
                if ring.n(a, b, 1) != u32::from(b == ring.dual(a)) {
                    return fail(Axiom::Duality, [a, b, 1, 0]);
                }
            }
        }
        for a in 1..=r {
            for b in 1..=r {
                for c in 1..=r {
                    for d in 1..=r {
                        let lhs: u64 = (1..=r)
                            .map(|e| ring.n(a, b, e) as u64 * ring.n(e, c, d) as u64)
                            .sum();
                        let rhs: u64 = (1..=r)
                            .map(|f| ring.n(b, c, f) as u64 * ring.n(a, f, d) as u64)
                            .sum();
                        if lhs != rhs {
                            return fail(Axiom::Associativity, [a, b, c, d]);
                        }
                    }
                    let v = ring.n(a, b, c);
                    if v != ring.n(ring.dual(a), c, b) || v != ring.n(c, ring.dual(b), a) {
                        return fail(Axiom::Pivotal, [a, b, c, 0]);
                    }
                }
            }
        }
        Ok(ring)
    }

    /// Builds and validates a ring from a structure-constant closure.
    pub fn from_fn(
        r: usize,
        dual: Vec<usize>,
        mut f: impl FnMut(usize, usize, usize) -> u32,
    ) -> Result<FusionRing, AxiomViolation> {
        let mut n = Vec::with_capacity(r * r * r);
        for a in 1..=r {
            for b in 1..=r {
                for c in 1..=r {
                    n.push(f(a, b, c));
                }
            }
        }
        FusionRing::validate(dual, n)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn multiplicity(&self) -> u32 {
        self.multiplicity
    }

    /// Structure constant N[a][b][c] with 1-based labels.
    pub fn n(&self, a: usize, b: usize, c: usize) -> u32 {
        self.n[((a - 1) * self.rank + (b - 1)) * self.rank + (c - 1)]
    }

    /// Dual of element `a` (1-based).
    pub fn dual(&self, a: usize) -> usize {
        self.dual[a - 1]
    }

    pub fn dual_map(&self) -> &[usize] {
        &self.dual
    }

    pub fn tensor(&self) -> &[u32] {
        &self.n
    }

    pub fn is_commutative(&self) -> bool {
        self.all_abc(|a, b, c| self.n(a, b, c) == self.n(b, a, c))
    }

    pub fn num_non_self_dual(&self) -> usize {
        (1..=self.rank).filter(|&a| self.dual(a) != a).count()
    }

    pub fn nonzero_count(&self) -> usize {
        self.n.iter().filter(|&&v| v != 0).count()
    }

    fn all_abc(&self, mut f: impl FnMut(usize, usize, usize) -> bool) -> bool {
        for a in 1..=self.rank {
            for b in 1..=self.rank {
                for c in 1..=self.rank {
                    if !f(a, b, c) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Whether `[N_a]` is a permutation matrix, i.e. `a` is invertible.
    pub fn is_invertible(&self, a: usize) -> bool {
        let r = self.rank;
        let mut col_hit = vec![false; r];
        for b in 1..=r {
            let mut row_ones = 0;
            for c in 1..=r {
                match self.n(a, b, c) {
                    0 => {}
                    1 => {
                        row_ones += 1;
                        if col_hit[c - 1] {
                            return false;
                        }
                        col_hit[c - 1] = true;
                    }
                    _ => return false,
                }
            }
            if row_ones != 1 {
                return false;
            }
        }
        true
    }

    /// Relabels elements by `sigma` (`sigma[a-1]` = new label of `a`); the
    /// relabelled tensor satisfies N'[σa][σb][σc] = N[a][b][c].
    pub fn relabel(&self, sigma: &[usize]) -> FusionRing {
        let r = self.rank;
        let mut dual = vec![0usize; r];
        let mut n = vec![0u32; r * r * r];
        for a in 1..=r {
            dual[sigma[a - 1] - 1] = sigma[self.dual(a) - 1];
        }
        for a in 1..=r {
            for b in 1..=r {
                for c in 1..=r {
                    let (sa, sb, sc) = (sigma[a - 1], sigma[b - 1], sigma[c - 1]);
                    n[((sa - 1) * r + (sb - 1)) * r + (sc - 1)] = self.n(a, b, c);
                }
            }
        }
        FusionRing::validate(dual, n).expect("relabelling preserves the ring axioms")
    }

    /// Tensor product ring on pairs (a₁,a₂) ↦ (a₁-1)·r₂ + a₂.
    pub fn direct_product(&self, other: &FusionRing) -> FusionRing {
        let (r1, r2) = (self.rank, other.rank);
        let r = r1 * r2;
        let pair = |x: usize, y: usize| (x - 1) * r2 + y;
        let mut dual = vec![0usize; r];
        for a1 in 1..=r1 {
            for a2 in 1..=r2 {
                dual[pair(a1, a2) - 1] = pair(self.dual(a1), other.dual(a2));
            }
        }
        let mut n = vec![0u32; r * r * r];
        for a1 in 1..=r1 {
            for b1 in 1..=r1 {
                for c1 in 1..=r1 {
                    let v1 = self.n(a1, b1, c1);
                    if v1 == 0 {
                        continue;
                    }
                    for a2 in 1..=r2 {
                        for b2 in 1..=r2 {
                            for c2 in 1..=r2 {
                                let v = v1 * other.n(a2, b2, c2);
                                if v != 0 {
                                    let (a, b, c) = (pair(a1, a2), pair(b1, b2), pair(c1, c2));
                                    n[((a - 1) * r + (b - 1)) * r + (c - 1)] = v;
                                }
                            }
                        }
                    }
                }
            }
        }
        FusionRing::validate(dual, n).expect("tensor product of valid rings is valid")
    }

    /// Perron–Frobenius dimension of every element.
    ///
    /// All fusion matrices share a common positive eigenvector (the dimension
    /// vector itself), which is also the Perron vector of P = Σ_a [N_a]. P has
    /// strictly positive entries and is symmetric, so power iteration on P
    /// converges geometrically; individual per-matrix iteration would cycle on
    /// permutation matrices (group elements). The iterate is normalised to
    /// first component 1, making its components the dimensions directly; the
    /// Rayleigh quotient of P doubles as the convergence certificate, since it
    /// must agree with the component sum in the limit.
    pub fn fp_dims(&self, cx: &Ctx) -> Vec<Real> {
        let hi = cx.doubled();
        let r = self.rank;
        let mut p = vec![hi.zero(); r * r];
        for b in 1..=r {
            for c in 1..=r {
                let s: i64 = (1..=r).map(|a| self.n(a, b, c) as i64).sum();
                p[(b - 1) * r + (c - 1)] = hi.int(s);
            }
        }
        let eps = hi.pow10(-(cx.digits() as i64 + 8));
        let mut v = vec![hi.one(); r];
        for _ in 0..100_000 {
            let mut w = vec![hi.zero(); r];
            for b in 0..r {
                let mut acc = hi.zero();
                for c in 0..r {
                    acc = hi.add(&acc, &hi.mul(&p[b * r + c], &v[c]));
                }
                w[b] = acc;
            }
            let scale = w[0].clone();
            let next: Vec<Real> = w.iter().map(|x| hi.div(x, &scale)).collect();
            let mut delta = hi.zero();
            let mut rayleigh_num = hi.zero();
            let mut norm_sq = hi.zero();
            let mut comp_sum = hi.zero();
            for b in 0..r {
                let d = hi.abs(&hi.sub(&next[b], &v[b]));
                if hi.lt(&delta, &d) {
                    delta = d;
                }
                rayleigh_num = hi.add(&rayleigh_num, &hi.mul(&next[b], &w[b]));
                norm_sq = hi.add(&norm_sq, &hi.mul(&next[b], &next[b]));
                comp_sum = hi.add(&comp_sum, &next[b]);
            }
            v = next;
            if hi.lt(&delta, &eps) {
                let rayleigh = hi.div(&rayleigh_num, &norm_sq);
                if hi.is_small(&hi.sub(&rayleigh, &comp_sum), &eps) {
                    break;
                }
            }
        }
        v
    }

    /// Full ring analysis at the given precision. The automorphism search is
    /// exhaustive over (rank−1)! permutations and intended for rank ≤ 9.
    pub fn analyze(&self, cx: &Ctx) -> RingAnalysis {
        let hi = cx.doubled();
        let fpdims = self.fp_dims(cx);
        let mut total = hi.zero();
        for d in &fpdims {
            total = hi.add(&total, &hi.mul(d, d));
        }
        let invertibles: Vec<usize> = (1..=self.rank).filter(|&a| self.is_invertible(a)).collect();
        let mut automorphisms = Vec::new();
        let mut tail: Vec<usize> = (2..=self.rank).collect();
        loop {
            let mut sigma = vec![1usize; self.rank];
            for (i, &x) in tail.iter().enumerate() {
                sigma[i + 1] = x;
            }
            if self.all_abc(|a, b, c| {
                self.n(a, b, c) == self.n(sigma[a - 1], sigma[b - 1], sigma[c - 1])
            }) {
                automorphisms.push(sigma);
            }
            if !next_permutation(&mut tail) {
                break;
            }
        }
        RingAnalysis {
            fpdims,
            total_fpdim_sq: total,
            commutative: self.is_commutative(),
            num_non_self_dual: self.num_non_self_dual(),
            invertibles,
            automorphisms,
        }
    }

    /// Canonical relabelling: over all admissible layouts (unit first,
    /// self-duals sorted by increasing dimension, dual pairs after sorted by
    /// increasing dimension, dimension ties and pair orientations free), the
    /// lexicographic reading of the tensor is maximised as a base-(m+1) digit
    /// string. The maximiser is the canonical key.
    pub fn canonical_form(&self, cx: &Ctx) -> CanonicalForm {
        let r = self.rank;
        let dims = self.fp_dims(cx);
        let hi = cx.doubled();
        let tie = hi.pow10(-30);
        let by_dim = |items: &mut Vec<usize>| {
            items.sort_by(|&x, &y| hi.cmp(&dims[x - 1], &dims[y - 1]));
        };
        let classes_of = |items: &[usize]| -> Vec<Vec<usize>> {
            let mut classes: Vec<Vec<usize>> = Vec::new();
            for &x in items {
                match classes.last_mut() {
                    Some(class)
                        if hi.close(&dims[class[0] - 1], &dims[x - 1], &tie) =>
                    {
                        class.push(x)
                    }
                    _ => classes.push(vec![x]),
                }
            }
            classes
        };
        let mut self_duals: Vec<usize> = (2..=r).filter(|&a| self.dual(a) == a).collect();
        let mut pair_reps: Vec<usize> =
            (2..=r).filter(|&a| a < self.dual(a)).collect();
        by_dim(&mut self_duals);
        by_dim(&mut pair_reps);
        let sd_classes = classes_of(&self_duals);
        let pair_classes = classes_of(&pair_reps);
        let num_pairs = pair_reps.len();

        let mut best_key: Option<Vec<u32>> = None;
        let mut best_sigma: Vec<usize> = Vec::new();
        let mut sigma = vec![0usize; r];
        for sd_order in class_arrangements(&sd_classes) {
            for pair_order in class_arrangements(&pair_classes) {
                for orient in 0..(1u32 << num_pairs) {
                    sigma[0] = 1;
                    let mut pos = 2;
                    for &a in &sd_order {
                        sigma[a - 1] = pos;
                        pos += 1;
                    }
                    for (k, &a) in pair_order.iter().enumerate() {
                        let (first, second) = if orient >> k & 1 == 0 {
                            (a, self.dual(a))
                        } else {
                            (self.dual(a), a)
                        };
                        sigma[first - 1] = pos;
                        sigma[second - 1] = pos + 1;
                        pos += 2;
                    }
                    let key = self.read_key(&sigma);
                    if best_key.as_ref().is_none_or(|b| key > *b) {
                        best_key = Some(key);
                        best_sigma = sigma.clone();
                    }
                }
            }
        }
        let key = best_key.expect("at least one admissible layout exists");
        CanonicalForm {
            ring: self.relabel(&best_sigma),
            perm: best_sigma,
            key,
        }
    }

    /// Digit string of the tensor after relabelling by `sigma`, read
    /// lexicographically in (a,b,c).
    fn read_key(&self, sigma: &[usize]) -> Vec<u32> {
        let r = self.rank;
        let mut inv = vec![0usize; r];
        for a in 1..=r {
            inv[sigma[a - 1] - 1] = a;
        }
        let mut key = Vec::with_capacity(r * r * r);
        for a in 1..=r {
            for b in 1..=r {
                for c in 1..=r {
                    key.push(self.n(inv[a - 1], inv[b - 1], inv[c - 1]));
                }
            }
        }
        key
    }

    /// Group of invertibles plus every proper non-trivial fusion-closed
    /// dual-closed unital sub-basis, by exhaustive subset search.
    pub fn subgroup_and_subrings(&self) -> SubringReport {
        let r = self.rank;
        let largest_subgroup: Vec<usize> =
            (1..=r).filter(|&a| self.is_invertible(a)).collect();
        let mut subrings = Vec::new();
        for mask in 1u32..(1 << (r - 1)) {
            let set: Vec<usize> = core::iter::once(1)
                .chain((2..=r).filter(|&a| mask >> (a - 2) & 1 == 1))
                .collect();
            if set.len() == r {
                continue;
            }
            let inside = |x: usize| set.binary_search(&x).is_ok();
            let closed = set.iter().all(|&a| inside(self.dual(a)))
                && set.iter().all(|&a| {
                    set.iter().all(|&b| {
                        (1..=r).all(|c| inside(c) || self.n(a, b, c) == 0)
                    })
                });
            if closed {
                subrings.push(set);
            }
        }
        subrings.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
        SubringReport { largest_subgroup, subrings }
    }
}

/// Lexicographic next permutation; returns false when wrapped around.
pub(crate) fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        p.sort_unstable();
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// All concatenations of one permutation per class, classes in order.
fn class_arrangements(classes: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for class in classes {
        let mut perm = class.clone();
        perm.sort_unstable();
        let mut perms = vec![perm.clone()];
        while next_permutation(&mut perm) {
            perms.push(perm.clone());
        }
        let mut next = Vec::with_capacity(out.len() * perms.len());
        for prefix in &out {
            for p in &perms {
                let mut ext = prefix.clone();
                ext.extend_from_slice(p);
                next.push(ext);
            }
        }
        out = next;
    }
    out
}

/// Numerical and combinatorial profile of a ring.
pub struct RingAnalysis {
    pub fpdims: Vec<Real>,
    pub total_fpdim_sq: Real,
    pub commutative: bool,
    pub num_non_self_dual: usize,
    pub invertibles: Vec<usize>,
    pub automorphisms: Vec<Vec<usize>>,
}

/// Canonical relabelling of a ring together with the achieved key.
pub struct CanonicalForm {
    /// Base-(m+1) digits of the relabelled tensor, length rank³.
    pub key: Vec<u32>,
    /// `perm[a-1]` = canonical label of original element `a`.
    pub perm: Vec<usize>,
    pub ring: FusionRing,
}

/// Invertible elements and proper non-trivial subrings.
pub struct SubringReport {
    pub largest_subgroup: Vec<usize>,
    pub subrings: Vec<Vec<usize>>,
}

/// Formal name FR(r,m,n,i): rank, multiplicity, non-self-dual count, and
/// 1-based position in the canonical catalog order for that triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FormalName {
    pub rank: usize,
    pub multiplicity: u32,
    pub non_self_dual: usize,
    pub index: usize,
}

impl core::fmt::Display for FormalName {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(
            f,
            "FR({},{},{},{})",
            self.rank, self.multiplicity, self.non_self_dual, self.index
        )
    }
}

impl FormalName {
    pub fn render(&self) -> String {
        alloc::format!("{}", self)
    }
}

/// Catalog order of canonical keys: ascending number of nonzero structure
/// constants, then ascending key. Positions in this order are the formal-name
/// indices.
pub fn catalog_cmp(x: &[u32], y: &[u32]) -> core::cmp::Ordering {
    let nz = |k: &[u32]| k.iter().filter(|&&d| d != 0).count();
    nz(x).cmp(&nz(y)).then_with(|| x.cmp(y))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NameError {
    /// No stored catalog covers this (rank, multiplicity, n) triple, or the
    /// ring's key is absent from it.
    CatalogMissing,
}

/// Canonical keys grouped by (rank, multiplicity, non-self-dual count); the
/// in-bucket order (ascending number of nonzero constants, then ascending key)
/// assigns the index of each formal name.
#[derive(Debug, Default, Clone)]
pub struct Catalog {
    buckets: BTreeMap<(usize, u32, usize), Vec<Vec<u32>>>,
}

impl Catalog {
    pub fn new() -> Catalog {
        Catalog::default()
    }

    pub fn from_rings<'a>(rings: impl IntoIterator<Item = &'a FusionRing>, cx: &Ctx) -> Catalog {
        let mut cat = Catalog::new();
        for ring in rings {
            cat.insert(ring, cx);
        }
        cat
    }

    pub fn insert(&mut self, ring: &FusionRing, cx: &Ctx) {
        let key = ring.canonical_form(cx).key;
        let bucket = self
            .buckets
            .entry((ring.rank(), ring.multiplicity(), ring.num_non_self_dual()))
            .or_default();
        if !bucket.contains(&key) {
            bucket.push(key);
            bucket.sort_by(|x, y| catalog_cmp(x, y));
        }
    }

    pub fn name(&self, ring: &FusionRing, cx: &Ctx) -> Result<FormalName, NameError> {
        let triple = (ring.rank(), ring.multiplicity(), ring.num_non_self_dual());
        let bucket = self.buckets.get(&triple).ok_or(NameError::CatalogMissing)?;
        let key = ring.canonical_form(cx).key;
        let index = bucket
            .iter()
            .position(|k| *k == key)
            .ok_or(NameError::CatalogMissing)?;
        Ok(FormalName {
            rank: triple.0,
            multiplicity: triple.1,
            non_self_dual: triple.2,
            index: index + 1,
        })
    }

    pub fn len(&self) -> usize {
        self.buckets.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.buckets.is_empty()
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::FusionRing;
    use alloc::vec;
    use alloc::vec::Vec;

    /// Builds a ring from products given as coefficient lists: `rows[a][b]` is
    /// the multiset of basis labels (with repetition) in the product a⊗b,
    /// including the unit rows.
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

    /// Even sectors of SU(2) at level 6: rank 4, commutative, self-dual.
    pub fn psu2_6() -> FusionRing {
        from_products(
            vec![1, 2, 3, 4],
            &[
                &[&[1], &[2], &[3], &[4]],
                &[&[2], &[1, 2, 3], &[2, 3, 4], &[3]],
                &[&[3], &[2, 3, 4], &[1, 2, 3], &[2]],
                &[&[4], &[3], &[2], &[1]],
            ],
        )
    }

    /// Cyclic group ring Z_k.
    pub fn zk(k: usize) -> FusionRing {
        let dual = (0..k).map(|a| (k - a) % k + 1).collect();
        FusionRing::from_fn(k, dual, |a, b, c| {
            u32::from((a - 1 + b - 1) % k == c - 1)
        })
        .unwrap()
    }

    /// The rank-6 non-commutative ring generated by two Fibonacci elements
    /// x, y with x² = 1+x, y² = 1+y, xyx = yxy; basis (1, x, y, xyx, yx, xy).
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
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::arith::Ctx;

    fn cx() -> Ctx {
        Ctx::new(64)
    }

    #[test]
    fn fibonacci_dimensions_and_symmetries() {
        let cx = cx();
        let ring = fib();
        assert_eq!(ring.multiplicity(), 1);
        let analysis = ring.analyze(&cx);
        // φ = (1+√5)/2; total = 1 + φ².
        let phi = cx.div(&cx.add(&cx.one(), &cx.sqrt(&cx.int(5))), &cx.int(2));
        let tol = cx.pow10(-30);
        assert!(cx.close(&analysis.fpdims[1], &phi, &tol));
        let expect = cx.add(&cx.one(), &cx.mul(&phi, &phi));
        assert!(cx.close(&analysis.total_fpdim_sq, &expect, &tol));
        assert_eq!(cx.fmt(&analysis.total_fpdim_sq, 4), "3.618");
        assert!(analysis.commutative);
        assert_eq!(analysis.invertibles, vec![1]);
        assert_eq!(analysis.automorphisms, vec![vec![1, 2]]);
        let report = ring.subgroup_and_subrings();
        assert_eq!(report.largest_subgroup, vec![1]);
        assert!(report.subrings.is_empty());
    }

    #[test]
    fn axiom_violations_are_reported() {
        // Self-dual rank-2 element whose square avoids the unit.
        let err = FusionRing::from_fn(2, vec![1, 2], |a, b, c| {
            u32::from((a, b, c) == (2, 2, 2) || a == 1 && b == c || b == 1 && a == c)
        })
        .unwrap_err();
        assert_eq!(err.axiom, Axiom::Duality);
        assert_eq!(err.witness, [2, 2, 1, 0]);

        // x² = y² = 1 with xy = yx = x: then (xx)y = y but x(xy) = 1.
        let err = FusionRing::from_fn(3, vec![1, 2, 3], |a, b, c| {
            u32::from(matches!(
                (a, b, c),
                (2, 2, 1) | (3, 3, 1) | (2, 3, 2) | (3, 2, 2)
            )) | u32::from(a == 1 && b == c || b == 1 && a == c)
        })
        .unwrap_err();
        assert_eq!(err.axiom, Axiom::Associativity);

        let err = FusionRing::validate(vec![2, 1], vec![0; 8]).unwrap_err();
        assert_eq!(err.axiom, Axiom::Shape);
    }

    #[test]
    fn rep_s3_profile() {
        let cx = cx();
        let analysis = rep_s3().analyze(&cx);
        let tol = cx.pow10(-30);
        assert!(cx.close(&analysis.fpdims[0], &cx.one(), &tol));
        assert!(cx.close(&analysis.fpdims[1], &cx.one(), &tol));
        assert!(cx.close(&analysis.fpdims[2], &cx.int(2), &tol));
        assert!(analysis.commutative);
        assert_eq!(analysis.invertibles, vec![1, 2]);
        // The 2-dimensional element cannot trade places with an invertible.
        assert_eq!(analysis.automorphisms, vec![vec![1, 2, 3]]);
        assert_eq!(analysis.num_non_self_dual, 0);
    }

    #[test]
    fn z3_profile() {
        let cx = cx();
        let ring = zk(3);
        let analysis = ring.analyze(&cx);
        assert_eq!(analysis.invertibles, vec![1, 2, 3]);
        assert_eq!(analysis.num_non_self_dual, 2);
        let tol = cx.pow10(-30);
        for d in &analysis.fpdims {
            assert!(cx.close(d, &cx.one(), &tol));
        }
        assert!(cx.close(&analysis.total_fpdim_sq, &cx.int(3), &tol));
    }

    #[test]
    fn canonicalization_is_a_fixed_point_and_permutation_invariant() {
        let cx = cx();
        for ring in [fib(), ising(), rep_s3(), zk(3), zk(4), hecke6()] {
            let form = ring.canonical_form(&cx);
            let again = form.ring.canonical_form(&cx);
            assert_eq!(form.key, again.key);
            assert_eq!(form.ring.tensor(), again.ring.tensor());
        }
        // A relabelled copy reaches the same key.
        let swapped = rep_s3().relabel(&[1, 3, 2]);
        assert_eq!(
            swapped.canonical_form(&cx).key,
            rep_s3().canonical_form(&cx).key
        );
    }

    #[test]
    fn direct_products_multiply_dimensions() {
        let cx = cx();
        let ring = fib().direct_product(&fib());
        assert_eq!(ring.rank(), 4);
        let analysis = ring.analyze(&cx);
        assert_eq!(cx.fmt(&analysis.total_fpdim_sq, 4), "13.09");
        let single = fib().analyze(&cx).total_fpdim_sq;
        let tol = cx.pow10(-30);
        assert!(cx.close(&analysis.total_fpdim_sq, &cx.mul(&single, &single), &tol));

        let klein = zk(2).direct_product(&zk(2));
        let analysis = klein.analyze(&cx);
        assert_eq!(analysis.invertibles, vec![1, 2, 3, 4]);
        assert_eq!(klein.nonzero_count(), 16);

        let padded = trivial().direct_product(&fib());
        assert_eq!(padded.tensor(), fib().tensor());
    }

    #[test]
    fn hecke6_subring_structure() {
        let ring = hecke6();
        assert_eq!(ring.multiplicity(), 2);
        assert!(!ring.is_commutative());
        let report = ring.subgroup_and_subrings();
        assert_eq!(report.largest_subgroup, vec![1]);
        assert_eq!(report.subrings, vec![vec![1, 2], vec![1, 3]]);
    }

    #[test]
    fn rank_three_catalog_names() {
        let cx = cx();
        let catalog = Catalog::from_rings([&ising(), &rep_s3(), &trivial()], &cx);
        assert_eq!(catalog.len(), 3);
        // Ising's table has fewer nonzero constants than Rep(S3)'s (10 vs 11),
        // so it comes first in the (3,1,0) bucket.
        let name = catalog.name(&ising(), &cx).unwrap();
        assert_eq!(name.render(), "FR(3,1,0,1)");
        let name = catalog.name(&rep_s3(), &cx).unwrap();
        assert_eq!(name.render(), "FR(3,1,0,2)");
        let name = catalog.name(&trivial(), &cx).unwrap();
        assert_eq!(name.render(), "FR(1,1,0,1)");
        assert_eq!(catalog.name(&fib(), &cx), Err(NameError::CatalogMissing));
    }

    #[test]
    fn invertibles_have_dimension_one_exactly() {
        let cx = cx();
        let tol = cx.pow10(-30);
        for ring in [zk(5), ising(), rep_s3()] {
            let analysis = ring.analyze(&cx);
            for a in 1..=ring.rank() {
                let inv = ring.is_invertible(a);
                let dim_one = cx.close(&analysis.fpdims[a - 1], &cx.one(), &tol);
                assert_eq!(inv, dim_one, "element {a}");
            }
        }
    }
}
