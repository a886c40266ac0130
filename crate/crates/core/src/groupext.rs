//! Finite groups and their song extensions: fusion rings built from a group
//! `G`, a normal subgroup `H` and one extra orbit of objects labelled by the
//! cosets `G/H`, together with the closed-form obstructions that rule whole
//! families of such extensions in or out before any search is attempted.
//!
//! Tambara–Yamagami, near-group and Haagerup–Izumi rings are the classical
//! special cases (`H = G` resp. `H = {1}` with the inversion automorphism);
//! [`song_extend`] covers them all from one recipe. The construction takes a
//! coset automorphism `A`, a twist element and a tail multiplicity, validates
//! the compatibility premises, and hands the resulting tensor to the ring
//! axiom checker, so a successful return is always a genuine fusion ring.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::ring::{Axiom, AxiomViolation, FusionRing};

/// A finite group as a validated Cayley table. Elements are indices
/// `0..order` with the identity at `0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    inv: Vec<usize>,
    names: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupError {
    InvalidParams,
    /// Table size or entry range does not match the element count.
    BadShape,
    /// Element 0 is not a two-sided identity.
    BadIdentity,
    NotAssociative([usize; 3]),
    NoInverse(usize),
}

impl core::fmt::Display for GroupError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            GroupError::InvalidParams => write!(f, "invalid group parameters"),
            GroupError::BadShape => write!(f, "Cayley table has the wrong shape"),
            GroupError::BadIdentity => write!(f, "element 0 is not an identity"),
            GroupError::NotAssociative(w) => write!(f, "not associative at {w:?}"),
            GroupError::NoInverse(a) => write!(f, "element {a} has no inverse"),
        }
    }
}

impl FiniteGroup {
    /// Validates a row-major Cayley table (`table[a·order + b] = a·b`).
    pub fn from_table(names: Vec<String>, table: Vec<usize>) -> Result<FiniteGroup, GroupError> {
        let n = names.len();
        if n == 0 || table.len() != n * n || table.iter().any(|&x| x >= n) {
            return Err(GroupError::BadShape);
        }
        let at = |a: usize, b: usize| table[a * n + b];
        for a in 0..n {
            if at(0, a) != a || at(a, 0) != a {
                return Err(GroupError::BadIdentity);
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if at(at(a, b), c) != at(a, at(b, c)) {
                        return Err(GroupError::NotAssociative([a, b, c]));
                    }
                }
            }
        }
        let mut inv = vec![0usize; n];
        for a in 0..n {
            match (0..n).find(|&b| at(a, b) == 0 && at(b, a) == 0) {
                Some(b) => inv[a] = b,
                None => return Err(GroupError::NoInverse(a)),
            }
        }
        Ok(FiniteGroup { order: n, table, inv, names })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Smallest subgroup containing `gens`, as a sorted element list.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut in_set = vec![false; self.order];
        in_set[0] = true;
        for &g in gens {
            in_set[g] = true;
        }
        loop {
            let current: Vec<usize> = (0..self.order).filter(|&x| in_set[x]).collect();
            let mut grew = false;
            for &a in &current {
                for &b in &current {
                    let p = self.mul(a, b);
                    if !in_set[p] {
                        in_set[p] = true;
                        grew = true;
                    }
                }
            }
            if !grew {
                return current;
            }
        }
    }

    /// Every subgroup (including the trivial and full ones), each sorted,
    /// found by closing generator sets grown one element at a time.
    pub fn subgroups(&self) -> Vec<Vec<usize>> {
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut queue: Vec<Vec<usize>> = vec![vec![0]];
        found.insert(vec![0]);
        while let Some(h) = queue.pop() {
            for g in 1..self.order {
                if h.binary_search(&g).is_ok() {
                    continue;
                }
                let mut gens = h.clone();
                gens.push(g);
                let closed = self.closure(&gens);
                if found.insert(closed.clone()) {
                    queue.push(closed);
                }
            }
        }
        let mut subs: Vec<Vec<usize>> = found.into_iter().collect();
        subs.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
        subs
    }

    /// Whether the sorted subgroup `h` is closed under conjugation.
    pub fn is_normal(&self, h: &[usize]) -> bool {
        (0..self.order).all(|g| {
            h.iter().all(|&x| {
                let conj = self.mul(self.mul(g, x), self.inv(g));
                h.binary_search(&conj).is_ok()
            })
        })
    }
}

/// Built-in group families for [`make_group`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupKind {
    Cyclic(usize),
    Product(usize, usize),
    Dihedral(usize),
    Quaternion,
}

/// Constructs a built-in group; all parameters must be positive.
pub fn make_group(kind: GroupKind) -> Result<FiniteGroup, GroupError> {
    let built = match kind {
        GroupKind::Cyclic(n) => {
            if n == 0 {
                return Err(GroupError::InvalidParams);
            }
            let names = (0..n).map(|k| format!("{k}")).collect();
            let table = (0..n * n).map(|i| (i / n + i % n) % n).collect();
            FiniteGroup::from_table(names, table)
        }
        GroupKind::Product(p, q) => {
            if p == 0 || q == 0 {
                return Err(GroupError::InvalidParams);
            }
            let n = p * q;
            let names = (0..n).map(|x| format!("({},{})", x / q, x % q)).collect();
            let table = (0..n * n)
                .map(|i| {
                    let (a, b) = (i / n, i % n);
                    (a / q + b / q) % p * q + (a % q + b % q) % q
                })
                .collect();
            FiniteGroup::from_table(names, table)
        }
        GroupKind::Dihedral(n) => {
            if n == 0 {
                return Err(GroupError::InvalidParams);
            }
            // Element f·n + k is s^f r^k; s r^k s = r^{-k}, so the rotation
            // part of a product only depends on whether the right factor
            // flips.
            let names = (0..2 * n)
                .map(|x| format!("{}{}", if x < n { 'r' } else { 's' }, x % n))
                .collect();
            let mut table = Vec::with_capacity(4 * n * n);
            for x in 0..2 * n {
                for y in 0..2 * n {
                    let (a, fa) = (x % n, x / n);
                    let (b, fb) = (y % n, y / n);
                    let k = if fb == 0 { (a + b) % n } else { (n + b - a) % n };
                    table.push((fa + fb) % 2 * n + k);
                }
            }
            FiniteGroup::from_table(names, table)
        }
        GroupKind::Quaternion => {
            let names = ["1", "i", "j", "k", "-1", "-i", "-j", "-k"]
                .iter()
                .map(|&s| String::from(s))
                .collect();
            const AX: [[usize; 4]; 4] =
                [[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]];
            const SG: [[usize; 4]; 4] =
                [[0, 0, 0, 0], [0, 1, 0, 1], [0, 1, 1, 0], [0, 0, 1, 1]];
            let table = (0..64)
                .map(|i| {
                    let (x, y) = (i / 8, i % 8);
                    let (s1, a1) = (x / 4, x % 4);
                    let (s2, a2) = (y / 4, y % 4);
                    (s1 + s2 + SG[a1][a2]) % 2 * 4 + AX[a1][a2]
                })
                .collect();
            FiniteGroup::from_table(names, table)
        }
    };
    built.map_err(|_| GroupError::InvalidParams)
}

/// The two compatibility premises a song specification must satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Premise {
    /// `A²` must act on cosets as conjugation by the twist element.
    TwistSquare,
    /// `A` must fix the coset of the twist element.
    TwistFixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SongError {
    /// An element index is out of range for the group.
    BadElement,
    NotASubgroup,
    NotNormal,
    /// Not a permutation of the cosets, or not a quotient automorphism.
    BadAutomorphism,
    /// A proposed representative does not lie in its coset.
    BadLift,
    PremiseViolation(Premise),
    NotAFusionRing(AxiomViolation),
}

impl core::fmt::Display for SongError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            SongError::BadElement => write!(f, "element index out of range"),
            SongError::NotASubgroup => write!(f, "subset is not a subgroup"),
            SongError::NotNormal => write!(f, "subgroup is not normal"),
            SongError::BadAutomorphism => write!(f, "not a quotient automorphism"),
            SongError::BadLift => write!(f, "lift leaves its coset"),
            SongError::PremiseViolation(Premise::TwistSquare) => {
                write!(f, "squared automorphism differs from twist conjugation")
            }
            SongError::PremiseViolation(Premise::TwistFixed) => {
                write!(f, "automorphism moves the twist's coset")
            }
            SongError::NotAFusionRing(v) => write!(f, "extension is not a fusion ring: {v}"),
        }
    }
}

/// A validated song specification: group, normal subgroup, coset automorphism,
/// twist element, tail multiplicity, and a choice of coset representatives.
///
/// Cosets are indexed in order of their minimal element, so coset `0` is the
/// subgroup itself and the extra ring objects come in a predictable order.
#[derive(Debug, Clone)]
pub struct SongSpec {
    group: FiniteGroup,
    normal: Vec<usize>,
    cosets: Vec<Vec<usize>>,
    coset_of: Vec<usize>,
    auto: Vec<usize>,
    twist: usize,
    tail: u32,
    lift: Vec<usize>,
}

impl SongSpec {
    /// Validates subgroup, normality, the automorphism and both premises.
    /// The lift defaults to the minimal element of each coset.
    pub fn new(
        group: FiniteGroup,
        normal: &[usize],
        auto: &[usize],
        twist: usize,
        tail: u32,
    ) -> Result<SongSpec, SongError> {
        let n = group.order();
        if twist >= n || normal.iter().any(|&x| x >= n) {
            return Err(SongError::BadElement);
        }
        let mut h = normal.to_vec();
        h.sort_unstable();
        h.dedup();
        if h.binary_search(&0).is_err() {
            return Err(SongError::NotASubgroup);
        }
        for &a in &h {
            for &b in &h {
                if h.binary_search(&group.mul(a, b)).is_err() {
                    return Err(SongError::NotASubgroup);
                }
            }
        }
        if !group.is_normal(&h) {
            return Err(SongError::NotNormal);
        }

        let mut coset_of = vec![usize::MAX; n];
        let mut cosets: Vec<Vec<usize>> = Vec::new();
        for g in 0..n {
            if coset_of[g] != usize::MAX {
                continue;
            }
            let mut coset: Vec<usize> = h.iter().map(|&x| group.mul(g, x)).collect();
            coset.sort_unstable();
            for &x in &coset {
                coset_of[x] = cosets.len();
            }
            cosets.push(coset);
        }
        let t = cosets.len();
        let lift: Vec<usize> = cosets.iter().map(|c| c[0]).collect();
        let coset_mul =
            |c1: usize, c2: usize| coset_of[group.mul(lift[c1], lift[c2])];

        if auto.len() != t {
            return Err(SongError::BadAutomorphism);
        }
        let mut seen = vec![false; t];
        for &c in auto {
            if c >= t || seen[c] {
                return Err(SongError::BadAutomorphism);
            }
            seen[c] = true;
        }
        for c1 in 0..t {
            for c2 in 0..t {
                if auto[coset_mul(c1, c2)] != coset_mul(auto[c1], auto[c2]) {
                    return Err(SongError::BadAutomorphism);
                }
            }
        }

        for (c, &rep) in lift.iter().enumerate() {
            let conj = coset_of[group.mul(group.mul(group.inv(twist), rep), twist)];
            if auto[auto[c]] != conj {
                return Err(SongError::PremiseViolation(Premise::TwistSquare));
            }
        }
        if auto[coset_of[twist]] != coset_of[twist] {
            return Err(SongError::PremiseViolation(Premise::TwistFixed));
        }

        let auto = auto.to_vec();
        Ok(SongSpec { group, normal: h, cosets, coset_of, auto, twist, tail, lift })
    }

    /// Replaces the coset representatives; each must lie in its coset.
    pub fn with_lift(mut self, lift: &[usize]) -> Result<SongSpec, SongError> {
        if lift.len() != self.cosets.len() {
            return Err(SongError::BadLift);
        }
        for (c, &rep) in lift.iter().enumerate() {
            if rep >= self.group.order() || self.coset_of[rep] != c {
                return Err(SongError::BadLift);
            }
        }
        self.lift = lift.to_vec();
        Ok(self)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn normal(&self) -> &[usize] {
        &self.normal
    }

    pub fn cosets(&self) -> &[Vec<usize>] {
        &self.cosets
    }

    pub fn coset_of(&self, g: usize) -> usize {
        self.coset_of[g]
    }

    pub fn num_cosets(&self) -> usize {
        self.cosets.len()
    }

    pub fn twist(&self) -> usize {
        self.twist
    }

    pub fn tail(&self) -> u32 {
        self.tail
    }

    /// Rank of the extension: group order plus coset count.
    pub fn rank(&self) -> usize {
        self.group.order() + self.cosets.len()
    }
}

/// Builds the song extension ring of a validated specification.
///
/// Ring labels: group element `i` becomes basis label `i + 1` (so the group
/// identity is the unit), coset `c` becomes label `order + c + 1`. Duals are
/// read off the unit column and the whole tensor passes through axiom
/// validation before being returned.
pub fn song_extend(spec: &SongSpec) -> Result<FusionRing, SongError> {
    let g = &spec.group;
    let ng = g.order();
    let t = spec.cosets.len();
    let r = ng + t;
    let coset_mul =
        |c1: usize, c2: usize| spec.coset_of[g.mul(spec.lift[c1], spec.lift[c2])];

    let mut n = vec![0u32; r * r * r];
    let mut set = |a: usize, b: usize, c: usize, v: u32| {
        n[((a - 1) * r + (b - 1)) * r + (c - 1)] = v;
    };
    for i in 0..ng {
        for j in 0..ng {
            set(i + 1, j + 1, g.mul(i, j) + 1, 1);
        }
        for c in 0..t {
            set(i + 1, ng + c + 1, ng + spec.coset_of[g.mul(i, spec.lift[c])] + 1, 1);
            set(ng + c + 1, i + 1, ng + coset_mul(c, spec.auto[spec.coset_of[i]]) + 1, 1);
        }
    }
    for c1 in 0..t {
        for c2 in 0..t {
            let x = g.mul(spec.lift[coset_mul(c1, spec.auto[c2])], g.inv(spec.twist));
            for &h in &spec.normal {
                set(ng + c1 + 1, ng + c2 + 1, g.mul(x, h) + 1, 1);
            }
            for e in 0..t {
                set(ng + c1 + 1, ng + c2 + 1, ng + e + 1, spec.tail);
            }
        }
    }

    let mut dual = vec![0usize; r];
    for a in 1..=r {
        let mut hits = (1..=r).filter(|&b| n[((a - 1) * r + (b - 1)) * r] != 0);
        match (hits.next(), hits.next()) {
            (Some(b), None) => dual[a - 1] = b,
            _ => {
                return Err(SongError::NotAFusionRing(AxiomViolation {
                    axiom: Axiom::Duality,
                    witness: [a, 0, 1, 0],
                }))
            }
        }
    }
    FusionRing::validate(dual, n).map_err(SongError::NotAFusionRing)
}

/// The unique one-extra-object extension of a group: every group element acts
/// trivially on the extra object `t` and `t × t = Σ_g g + tail·t`.
pub fn near_group(group: FiniteGroup, tail: u32) -> Result<FusionRing, SongError> {
    let everything: Vec<usize> = (0..group.order()).collect();
    let spec = SongSpec::new(group, &everything, &[0], 0, tail)?;
    song_extend(&spec)
}

/// Tambara–Yamagami ring of a group: the tail-free near-group extension.
pub fn tambara_yamagami(group: FiniteGroup) -> Result<FusionRing, SongError> {
    near_group(group, 0)
}

/// Haagerup–Izumi-type extension: one extra object per group element with
/// `t_g × t_h = g·h⁻¹ + tail·Σ t`. Tail 1 is the classical Haagerup–Izumi
/// ring; the construction needs the inversion map to be an automorphism, so
/// non-abelian groups are rejected.
pub fn haagerup_izumi(group: FiniteGroup, tail: u32) -> Result<FusionRing, SongError> {
    let auto: Vec<usize> = (0..group.order()).map(|c| group.inv(c)).collect();
    let spec = SongSpec::new(group, &[0], &auto, 0, tail)?;
    song_extend(&spec)
}

/// One closed-form statement about extensions of a group by `t_count` extra
/// objects at multiplicity `m`. Findings marked as forms or bounds are
/// advisory necessary conditions for particular extension shapes; only the
/// unconditional ones flip [`ObstructionReport::impossible`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObstructionFinding {
    /// One extra object: exactly one extension per tail value exists, and it
    /// is commutative iff the group is.
    UniqueSingleExtension { commutative: bool },
    /// Two self-dual extra objects fixed by the whole group force
    /// `b(b−d) + c(c−a) = |G|` on their mutual coefficients.
    SelfDualPairForm { solvable: bool },
    /// Two dual extra objects fixed by the whole group force
    /// `b² − a² = |G|`.
    DualPairForm { solvable: bool },
    /// A fully fixed multiplicity-free pair needs `|G| ≤ 2`.
    FixedPairTooLarge,
    /// A multiplicity-free pair extension needs `|G|` even.
    PairNeedsEvenOrder,
    /// Every left stabilizer in an extension has order at most `t·m²`.
    StabilizerBound { bound: usize },
    /// No multiplicity-free extension with `2 ≤ t < |G|` fixes all extra
    /// objects under the whole group.
    FullStabilizersImpossible,
    /// For prime `|G|` the stabilizers are forced full, so no
    /// multiplicity-free extension with `2 ≤ t < |G|` exists at all.
    PrimeOrderImpossible,
}

/// Everything [`extension_obstructions`] could conclude. `impossible` is set
/// only by the unconditional findings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObstructionReport {
    pub findings: Vec<ObstructionFinding>,
    pub impossible: bool,
}

pub fn extension_obstructions(group: &FiniteGroup, t_count: usize, m: u32) -> ObstructionReport {
    let order = group.order();
    let mut findings = Vec::new();
    let mut impossible = false;

    if t_count == 1 {
        findings.push(ObstructionFinding::UniqueSingleExtension {
            commutative: group.is_abelian(),
        });
    }
    if t_count == 2 && order > 1 {
        let mi = m as i64;
        let goal = order as i64;
        let range = 0..=mi;
        let self_dual = range.clone().any(|a| {
            (0..=mi).any(|b| {
                (0..=mi).any(|c| (0..=mi).any(|d| b * (b - d) + c * (c - a) == goal))
            })
        });
        findings.push(ObstructionFinding::SelfDualPairForm { solvable: self_dual });
        let dual_pair = range.clone().any(|a| (0..=mi).any(|b| b * b - a * a == goal));
        findings.push(ObstructionFinding::DualPairForm { solvable: dual_pair });
        if m == 1 && order > 2 {
            findings.push(ObstructionFinding::FixedPairTooLarge);
        }
        if m == 1 && order % 2 == 1 {
            findings.push(ObstructionFinding::PairNeedsEvenOrder);
            impossible = true;
        }
    }
    if t_count >= 2 {
        findings.push(ObstructionFinding::StabilizerBound {
            bound: t_count * (m as usize) * (m as usize),
        });
        if m == 1 && t_count < order {
            findings.push(ObstructionFinding::FullStabilizersImpossible);
            if is_prime(order) {
                findings.push(ObstructionFinding::PrimeOrderImpossible);
                impossible = true;
            }
        }
    }
    ObstructionReport { findings, impossible }
}

fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Ctx;
    use crate::ring::{fixtures, Catalog};

    fn cx() -> Ctx {
        Ctx::new(64)
    }

    fn cyclic(n: usize) -> FiniteGroup {
        make_group(GroupKind::Cyclic(n)).unwrap()
    }

    #[test]
    fn make_group_builds_the_classical_small_groups() {
        let z3 = cyclic(3);
        assert_eq!(z3.order(), 3);
        assert!(z3.is_abelian());
        assert_eq!(z3.element_order(1), 3);
        assert_eq!(z3.mul(1, 2), 0);
        assert_eq!(z3.inv(1), 2);

        let d3 = make_group(GroupKind::Dihedral(3)).unwrap();
        assert_eq!(d3.order(), 6);
        assert!(!d3.is_abelian());
        // Reflections square to the identity, rotations have order 3.
        assert_eq!(d3.element_order(3), 2);
        assert_eq!(d3.element_order(1), 3);

        let klein = make_group(GroupKind::Dihedral(2)).unwrap();
        assert!(klein.is_abelian());
        assert_eq!(klein.order(), 4);

        let q8 = make_group(GroupKind::Quaternion).unwrap();
        assert_eq!(q8.order(), 8);
        assert!(!q8.is_abelian());
        assert_eq!(q8.name(1), "i");
        assert_eq!(q8.name(4), "-1");
        let order_two: Vec<usize> =
            (0..8).filter(|&a| q8.element_order(a) == 2).collect();
        assert_eq!(order_two, vec![4]);
        // i·j = k but j·i = -k.
        assert_eq!(q8.mul(1, 2), 3);
        assert_eq!(q8.mul(2, 1), 7);

        let z6 = make_group(GroupKind::Product(2, 3)).unwrap();
        assert_eq!(z6.order(), 6);
        assert!(z6.is_abelian());
        assert_eq!(z6.name(4), "(1,1)");

        for bad in [
            GroupKind::Cyclic(0),
            GroupKind::Dihedral(0),
            GroupKind::Product(0, 5),
        ] {
            assert_eq!(make_group(bad), Err(GroupError::InvalidParams));
        }
    }

    #[test]
    fn from_table_rejects_non_groups() {
        let names = |n: usize| (0..n).map(|k| format!("{k}")).collect::<Vec<_>>();
        assert_eq!(
            FiniteGroup::from_table(names(2), vec![0, 1, 1]),
            Err(GroupError::BadShape)
        );
        assert_eq!(
            FiniteGroup::from_table(names(2), vec![1, 0, 0, 1]),
            Err(GroupError::BadIdentity)
        );
        // Boolean OR is associative with identity 0 but 1 has no inverse.
        assert_eq!(
            FiniteGroup::from_table(names(2), vec![0, 1, 1, 1]),
            Err(GroupError::NoInverse(1))
        );
        // Identity holds but (1·1)·1 = 1 while 1·(1·1) = 2.
        let skew = vec![0, 1, 2, 1, 2, 2, 2, 1, 1];
        assert!(matches!(
            FiniteGroup::from_table(names(3), skew),
            Err(GroupError::NotAssociative(_))
        ));
    }

    #[test]
    fn subgroups_and_normality() {
        let z4 = cyclic(4);
        assert_eq!(
            z4.subgroups(),
            vec![vec![0], vec![0, 2], vec![0, 1, 2, 3]]
        );
        assert!(z4.is_normal(&[0, 2]));

        let d3 = make_group(GroupKind::Dihedral(3)).unwrap();
        let subs = d3.subgroups();
        assert_eq!(subs.len(), 6);
        assert!(subs.contains(&vec![0, 1, 2]));
        assert!(subs.contains(&vec![0, 3]));
        assert!(d3.is_normal(&[0, 1, 2]));
        assert!(!d3.is_normal(&[0, 3]));
        let normal: Vec<_> = subs.iter().filter(|h| d3.is_normal(h)).collect();
        assert_eq!(normal.len(), 3);
    }

    #[test]
    fn song_specs_validate_structure() {
        let bad_subgroup = SongSpec::new(cyclic(4), &[0, 1], &[0, 1], 0, 0);
        assert_eq!(bad_subgroup.err(), Some(SongError::NotASubgroup));

        let d3 = make_group(GroupKind::Dihedral(3)).unwrap();
        let not_normal = SongSpec::new(d3, &[0, 3], &[0, 1, 2], 0, 0);
        assert_eq!(not_normal.err(), Some(SongError::NotNormal));

        let not_hom = SongSpec::new(cyclic(4), &[0], &[0, 2, 1, 3], 0, 0);
        assert_eq!(not_hom.err(), Some(SongError::BadAutomorphism));
        let not_perm = SongSpec::new(cyclic(4), &[0], &[0, 0, 1, 2], 0, 0);
        assert_eq!(not_perm.err(), Some(SongError::BadAutomorphism));
        let short = SongSpec::new(cyclic(4), &[0], &[0, 1], 0, 0);
        assert_eq!(short.err(), Some(SongError::BadAutomorphism));

        let out_of_range = SongSpec::new(cyclic(4), &[0], &[0, 1, 2, 3], 9, 0);
        assert_eq!(out_of_range.err(), Some(SongError::BadElement));

        // Doubling is an automorphism of Z5 but its square is not trivial.
        let doubling = SongSpec::new(cyclic(5), &[0], &[0, 2, 4, 1, 3], 0, 0);
        assert_eq!(
            doubling.err(),
            Some(SongError::PremiseViolation(Premise::TwistSquare))
        );
        // Inversion squares to the identity but moves the twist's coset.
        let moved_twist = SongSpec::new(cyclic(5), &[0], &[0, 4, 3, 2, 1], 1, 0);
        assert_eq!(
            moved_twist.err(),
            Some(SongError::PremiseViolation(Premise::TwistFixed))
        );

        let spec = SongSpec::new(cyclic(4), &[0, 2], &[0, 1], 0, 0).unwrap();
        assert_eq!(spec.num_cosets(), 2);
        assert_eq!(spec.cosets(), &[vec![0, 2], vec![1, 3]]);
        assert_eq!(spec.rank(), 6);
        assert_eq!(spec.clone().with_lift(&[2, 3]).unwrap().num_cosets(), 2);
        assert_eq!(
            spec.with_lift(&[1, 3]).err(),
            Some(SongError::BadLift)
        );
    }

    #[test]
    fn near_group_reproduces_the_classical_rules() {
        let cx = cx();
        // The one-object extension of Z2 is the Ising ring.
        let ty_z2 = tambara_yamagami(cyclic(2)).unwrap();
        assert_eq!(
            ty_z2.canonical_form(&cx).key,
            fixtures::ising().canonical_form(&cx).key
        );

        // The one-object extension of the trivial group with tail 1 is the
        // Fibonacci ring.
        let fib = near_group(cyclic(1), 1).unwrap();
        assert_eq!(
            fib.canonical_form(&cx).key,
            fixtures::fib().canonical_form(&cx).key
        );

        let ty_z3 = tambara_yamagami(cyclic(3)).unwrap();
        assert_eq!(ty_z3.rank(), 4);
        assert!(ty_z3.is_commutative());
        let catalog = Catalog::from_rings(
            &crate::search::enumerate_rank(4, 1, &cx).unwrap(),
            &cx,
        );
        let name = catalog.name(&ty_z3, &cx).unwrap();
        assert_eq!((name.rank, name.multiplicity, name.non_self_dual), (4, 1, 2));

        // Near-group extensions of a non-abelian group are non-commutative.
        let d3 = make_group(GroupKind::Dihedral(3)).unwrap();
        for tail in 0..=1 {
            let ring = near_group(d3.clone(), tail).unwrap();
            assert_eq!(ring.rank(), 7);
            assert_eq!(ring.multiplicity(), 1);
            assert!(!ring.is_commutative());
        }
    }

    #[test]
    fn haagerup_izumi_examples() {
        let hi_z3 = haagerup_izumi(cyclic(3), 1).unwrap();
        assert_eq!(hi_z3.rank(), 6);
        assert_eq!(hi_z3.multiplicity(), 1);
        assert!(!hi_z3.is_commutative());

        let hi_z2 = haagerup_izumi(cyclic(2), 1).unwrap();
        assert_eq!(hi_z2.rank(), 4);
        assert!(hi_z2.is_commutative());

        // Tail 0 is still a valid song, just not the classical ring.
        assert!(haagerup_izumi(cyclic(3), 0).is_ok());

        let d3 = make_group(GroupKind::Dihedral(3)).unwrap();
        assert_eq!(
            haagerup_izumi(d3, 1).err(),
            Some(SongError::BadAutomorphism)
        );
    }

    #[test]
    fn dihedral_and_z6_songs_match_their_published_shapes() {
        // D3 with its rotation subgroup: rank 8, non-commutative, with the
        // full group surviving as the invertible elements.
        let d3 = make_group(GroupKind::Dihedral(3)).unwrap();
        let spec = SongSpec::new(d3, &[0, 1, 2], &[0, 1], 0, 0).unwrap();
        let ring = song_extend(&spec).unwrap();
        assert_eq!(ring.rank(), 8);
        assert_eq!(ring.multiplicity(), 1);
        assert!(!ring.is_commutative());
        assert_eq!(ring.num_non_self_dual(), 2);
        let report = ring.subgroup_and_subrings();
        assert_eq!(report.largest_subgroup, vec![1, 2, 3, 4, 5, 6]);

        // Z6 with its order-2 subgroup and the inversion automorphism on the
        // quotient: rank 9 with four non-self-dual elements.
        let z6 = cyclic(6);
        let spec = SongSpec::new(z6, &[0, 3], &[0, 2, 1], 0, 0).unwrap();
        let ring = song_extend(&spec).unwrap();
        assert_eq!(ring.rank(), 9);
        assert_eq!(ring.multiplicity(), 1);
        assert!(!ring.is_commutative());
        assert_eq!(ring.num_non_self_dual(), 4);
    }

    #[test]
    fn lift_choice_never_changes_the_ring() {
        let cx = cx();
        let d3 = make_group(GroupKind::Dihedral(3)).unwrap();
        let spec = SongSpec::new(d3, &[0, 1, 2], &[0, 1], 0, 0).unwrap();
        let base = song_extend(&spec).unwrap();
        for lift in [[0usize, 3], [1, 4], [2, 5]] {
            let other = song_extend(&spec.clone().with_lift(&lift).unwrap()).unwrap();
            assert_eq!(base.tensor(), other.tensor());
        }
        assert_eq!(
            base.canonical_form(&cx).key,
            song_extend(&spec.with_lift(&[2, 4]).unwrap())
                .unwrap()
                .canonical_form(&cx)
                .key
        );

        let z6 = cyclic(6);
        let spec = SongSpec::new(z6, &[0, 3], &[0, 2, 1], 0, 0).unwrap();
        let base = song_extend(&spec).unwrap();
        let other = song_extend(&spec.with_lift(&[3, 4, 5]).unwrap()).unwrap();
        assert_eq!(base.tensor(), other.tensor());
    }

    #[test]
    fn obstruction_reports_flag_known_cases() {
        use ObstructionFinding::*;

        let z5 = cyclic(5);
        let report = extension_obstructions(&z5, 2, 1);
        assert!(report.impossible);
        assert!(report.findings.contains(&PairNeedsEvenOrder));
        assert!(report.findings.contains(&PrimeOrderImpossible));

        // Odd non-prime order is still impossible for a pair at m = 1.
        let z9 = make_group(GroupKind::Product(3, 3)).unwrap();
        let report = extension_obstructions(&z9, 2, 1);
        assert!(report.impossible);
        assert!(report.findings.contains(&PairNeedsEvenOrder));
        assert!(!report.findings.contains(&PrimeOrderImpossible));

        // Z4 by a pair: not settled, and both closed forms are unsolvable.
        let z4 = cyclic(4);
        let report = extension_obstructions(&z4, 2, 1);
        assert!(!report.impossible);
        assert!(report.findings.contains(&SelfDualPairForm { solvable: false }));
        assert!(report.findings.contains(&DualPairForm { solvable: false }));
        assert!(report.findings.contains(&FixedPairTooLarge));
        assert!(report.findings.contains(&StabilizerBound { bound: 2 }));
        assert!(report.findings.contains(&FullStabilizersImpossible));

        // At multiplicity 2 both Diophantine forms open up for Z4.
        let report = extension_obstructions(&z4, 2, 2);
        assert!(report.findings.contains(&SelfDualPairForm { solvable: true }));
        assert!(report.findings.contains(&DualPairForm { solvable: true }));

        let report = extension_obstructions(&cyclic(2), 1, 1);
        assert_eq!(
            report.findings,
            vec![UniqueSingleExtension { commutative: true }]
        );
        let d3 = make_group(GroupKind::Dihedral(3)).unwrap();
        let report = extension_obstructions(&d3, 1, 1);
        assert_eq!(
            report.findings,
            vec![UniqueSingleExtension { commutative: false }]
        );

        // t = |G| escapes the stabilizer impossibilities (the Haagerup–Izumi
        // ring of Z3 exists), and the trivial group supports pairs (the Ising
        // ring extends it).
        let report = extension_obstructions(&cyclic(3), 3, 1);
        assert!(!report.impossible);
        assert!(!report.findings.contains(&FullStabilizersImpossible));
        let report = extension_obstructions(&cyclic(1), 2, 1);
        assert!(!report.impossible);
    }
}
