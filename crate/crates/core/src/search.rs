//! Backtracking enumeration of fusion rings with a given rank, exact
//! multiplicity and number of self-dual elements.
//!
//! The tensor is first reduced to one unknown per orbit of the pivotal
//! relations; associativity and symmetry-breaking inequalities are compiled
//! against those unknowns, scheduled at the earliest depth where all their
//! variables are bound, and checked during a depth-first scan of value
//! assignments. The symmetry constraints only prune; completeness and
//! uniqueness of the output rest on the canonical dedup pass at the end.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigUint;

use crate::arith::Ctx;
use crate::ring::{catalog_cmp, FusionRing};

/// What to enumerate. `num_self_dual` counts the unit; rank − num_self_dual
/// must be even. Layout: elements 1..=s self-dual, then dual pairs
/// (s+1, s+2), (s+3, s+4), …
#[derive(Debug, Clone)]
pub struct SearchSpec {
    pub rank: usize,
    pub multiplicity: u32,
    pub num_self_dual: usize,
    /// Apply the symmetry-breaking inequalities (pruning only).
    pub symmetry: bool,
    /// Abort with `LimitExceeded` after this many assignments in one run.
    pub node_cap: u64,
    pub extra: Vec<ExtraConstraint>,
}

impl SearchSpec {
    pub fn new(rank: usize, multiplicity: u32, num_self_dual: usize) -> SearchSpec {
        SearchSpec {
            rank,
            multiplicity,
            num_self_dual,
            symmetry: true,
            node_cap: 10_000_000_000,
            extra: Vec::new(),
        }
    }
}

/// Additional caller-supplied restrictions on individual structure constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtraConstraint {
    Fix { a: usize, b: usize, c: usize, value: u32 },
    AtMost { a: usize, b: usize, c: usize, bound: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecError {
    BadSelfDualCount,
    BadMultiplicity,
    ExtraOutOfRange,
    /// An extra constraint contradicts a forced entry or another extra.
    ExtraConflict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LimitExceeded {
    pub nodes: u64,
}

/// Where a tensor entry gets its value: forced by unitality/duality, or bound
/// to the unknown of its orbit under the pivotal relations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntrySource {
    Fixed(u32),
    Var(usize),
}

/// The reduced unknown set for a spec.
#[derive(Debug, Clone)]
pub struct Reduction {
    rank: usize,
    /// Lexicographically minimal orbit member per unknown, sorted.
    pub reps: Vec<(usize, usize, usize)>,
    entries: Vec<EntrySource>,
}

impl Reduction {
    pub fn entry(&self, a: usize, b: usize, c: usize) -> EntrySource {
        self.entries[((a - 1) * self.rank + (b - 1)) * self.rank + (c - 1)]
    }

    pub fn num_unknowns(&self) -> usize {
        self.reps.len()
    }

    /// Raw search-space size (m+1)^#unknowns.
    pub fn search_space_size(&self, multiplicity: u32) -> BigUint {
        BigUint::from(multiplicity as u64 + 1).pow(self.reps.len() as u32)
    }
}

/// One side of a constraint: a sum of tensor entries.
pub type EntrySum = Vec<EntrySource>;

/// Guarded inequality: if every premise pair sums equal, then lhs ≤ rhs.
#[derive(Debug, Clone)]
pub struct Implication {
    pub equal_premises: Vec<(EntrySum, EntrySum)>,
    pub le: (EntrySum, EntrySum),
}

#[derive(Debug, Clone)]
enum Constraint {
    /// Σ products(lhs) = Σ products(rhs) — an associativity instance.
    Assoc {
        lhs: Vec<(EntrySource, EntrySource)>,
        rhs: Vec<(EntrySource, EntrySource)>,
    },
    Imp(Implication),
}

fn sum(values: &[u32], s: &EntrySum) -> u64 {
    s.iter()
        .map(|e| match e {
            EntrySource::Fixed(v) => *v as u64,
            EntrySource::Var(k) => values[*k] as u64,
        })
        .sum()
}

impl Constraint {
    fn holds(&self, values: &[u32]) -> bool {
        let val = |e: &EntrySource| match e {
            EntrySource::Fixed(v) => *v as u64,
            EntrySource::Var(k) => values[*k] as u64,
        };
        match self {
            Constraint::Assoc { lhs, rhs } => {
                let l: u64 = lhs.iter().map(|(x, y)| val(x) * val(y)).sum();
                let r: u64 = rhs.iter().map(|(x, y)| val(x) * val(y)).sum();
                l == r
            }
            Constraint::Imp(imp) => {
                let guarded = imp
                    .equal_premises
                    .iter()
                    .all(|(x, y)| sum(values, x) == sum(values, y));
                !guarded || sum(values, &imp.le.0) <= sum(values, &imp.le.1)
            }
        }
    }

    fn vars(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut push = |e: &EntrySource| {
            if let EntrySource::Var(k) = e {
                out.push(*k);
            }
        };
        match self {
            Constraint::Assoc { lhs, rhs } => {
                for (x, y) in lhs.iter().chain(rhs) {
                    push(x);
                    push(y);
                }
            }
            Constraint::Imp(imp) => {
                for (x, y) in &imp.equal_premises {
                    x.iter().for_each(&mut push);
                    y.iter().for_each(&mut push);
                }
                imp.le.0.iter().for_each(&mut push);
                imp.le.1.iter().for_each(&mut push);
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// A compiled search: reduction, dual layout, constraint schedule, domains.
pub struct Search {
    spec: SearchSpec,
    dual: Vec<usize>,
    reduction: Reduction,
    symmetry: Vec<Implication>,
    /// Decision order: order[k] = variable bound at depth k.
    order: Vec<usize>,
    /// Per-variable inclusive value range after extra constraints.
    domains: Vec<(u32, u32)>,
    /// Constraints to check right after depth k binds its variable.
    checks_at: Vec<Vec<Constraint>>,
    /// Constraints with no variables, checked before any descent.
    preflight: Vec<Constraint>,
}

impl Search {
    pub fn new(spec: SearchSpec) -> Result<Search, SpecError> {
        let (r, m, s) = (spec.rank, spec.multiplicity, spec.num_self_dual);
        if r == 0 || s < 1 || s > r || (r - s) % 2 != 0 {
            return Err(SpecError::BadSelfDualCount);
        }
        if m == 0 {
            return Err(SpecError::BadMultiplicity);
        }
        let dual: Vec<usize> = (1..=r)
            .map(|a| {
                if a <= s {
                    a
                } else if (a - s) % 2 == 1 {
                    a + 1
                } else {
                    a - 1
                }
            })
            .collect();
        let reduction = reduce(r, &dual);
        let mut domains = vec![(0u32, m); reduction.reps.len()];
        for extra in &spec.extra {
            let (&a, &b, &c) = match extra {
                ExtraConstraint::Fix { a, b, c, .. } => (a, b, c),
                ExtraConstraint::AtMost { a, b, c, .. } => (a, b, c),
            };
            if a < 1 || a > r || b < 1 || b > r || c < 1 || c > r {
                return Err(SpecError::ExtraOutOfRange);
            }
            match (extra, reduction.entry(a, b, c)) {
                (ExtraConstraint::Fix { value, .. }, EntrySource::Fixed(v)) => {
                    if v != *value {
                        return Err(SpecError::ExtraConflict);
                    }
                }
                (ExtraConstraint::AtMost { bound, .. }, EntrySource::Fixed(v)) => {
                    if v > *bound {
                        return Err(SpecError::ExtraConflict);
                    }
                }
                (ExtraConstraint::Fix { value, .. }, EntrySource::Var(k)) => {
                    let (lo, hi) = domains[k];
                    if *value < lo || *value > hi {
                        return Err(SpecError::ExtraConflict);
                    }
                    domains[k] = (*value, *value);
                }
                (ExtraConstraint::AtMost { bound, .. }, EntrySource::Var(k)) => {
                    let (lo, hi) = domains[k];
                    if lo > *bound {
                        return Err(SpecError::ExtraConflict);
                    }
                    domains[k] = (lo, hi.min(*bound));
                }
            }
        }

        let mut constraints = associativity_constraints(r, &reduction);
        let symmetry = symmetry_constraints(r, s, &reduction);
        if spec.symmetry {
            constraints.extend(symmetry.iter().cloned().map(Constraint::Imp));
        }

        // Greedy schedule: repeatedly take the constraint needing the fewest
        // not-yet-bound variables (ties: lexicographically smallest variable
        // tuple), bind its new variables in ascending order.
        let num_vars = reduction.reps.len();
        let mut bound = vec![false; num_vars];
        let mut order: Vec<usize> = Vec::new();
        let mut preflight = Vec::new();
        let mut checks_at: Vec<Vec<Constraint>> = vec![Vec::new(); num_vars];
        let mut remaining: Vec<(Vec<usize>, Constraint)> =
            constraints.into_iter().map(|c| (c.vars(), c)).collect();
        while !remaining.is_empty() {
            let mut best: Option<(usize, Vec<usize>)> = None;
            for (i, (vars, _)) in remaining.iter().enumerate() {
                let new: Vec<usize> = vars.iter().copied().filter(|&v| !bound[v]).collect();
                match &best {
                    Some((_, bn)) if (new.len(), &new) >= (bn.len(), bn) => {}
                    _ => best = Some((i, new)),
                }
            }
            let (i, new) = best.unwrap();
            let (vars, constraint) = remaining.remove(i);
            for &v in &new {
                bound[v] = true;
                order.push(v);
            }
            if vars.is_empty() {
                preflight.push(constraint);
            } else {
                let depth = vars
                    .iter()
                    .map(|&v| order.iter().position(|&o| o == v).unwrap())
                    .max()
                    .unwrap();
                checks_at[depth].push(constraint);
            }
        }
        for v in 0..num_vars {
            if !bound[v] {
                order.push(v);
            }
        }

        Ok(Search {
            spec,
            dual,
            reduction,
            symmetry,
            order,
            domains,
            checks_at,
            preflight,
        })
    }

    pub fn spec(&self) -> &SearchSpec {
        &self.spec
    }

    pub fn reduction(&self) -> &Reduction {
        &self.reduction
    }

    pub fn dual_layout(&self) -> &[usize] {
        &self.dual
    }

    /// The compiled symmetry-breaking inequalities (whether or not enabled).
    pub fn symmetry_constraints(&self) -> &[Implication] {
        &self.symmetry
    }

    /// All consistent assignments of the first `levels` decision variables;
    /// each is an independent subtree that can run on its own worker.
    pub fn subtasks(&self, levels: usize) -> Vec<Vec<u32>> {
        let levels = levels.min(self.order.len());
        let mut tasks = Vec::new();
        let mut values = vec![0u32; self.reduction.reps.len()];
        if !self.preflight.iter().all(|c| c.holds(&values)) {
            return tasks;
        }
        self.split_rec(0, levels, &mut values, &mut Vec::new(), &mut tasks);
        tasks
    }

    fn split_rec(
        &self,
        depth: usize,
        levels: usize,
        values: &mut Vec<u32>,
        prefix: &mut Vec<u32>,
        tasks: &mut Vec<Vec<u32>>,
    ) {
        if depth == levels {
            tasks.push(prefix.clone());
            return;
        }
        let var = self.order[depth];
        let (lo, hi) = self.domains[var];
        for v in lo..=hi {
            values[var] = v;
            if self.checks_at[depth].iter().all(|c| c.holds(values)) {
                prefix.push(v);
                self.split_rec(depth + 1, levels, values, prefix, tasks);
                prefix.pop();
            }
        }
    }

    /// Depth-first scan of the subtree fixed by `prefix` (values of the first
    /// decision variables). Returns validated rings of exact multiplicity, in
    /// scan order, without dedup.
    pub fn run(&self, prefix: &[u32]) -> Result<Vec<FusionRing>, LimitExceeded> {
        let mut values = vec![0u32; self.reduction.reps.len()];
        if !self.preflight.iter().all(|c| c.holds(&values)) {
            return Ok(Vec::new());
        }
        for (depth, &v) in prefix.iter().enumerate() {
            let var = self.order[depth];
            let (lo, hi) = self.domains[var];
            if v < lo || v > hi {
                return Ok(Vec::new());
            }
            values[var] = v;
            if !self.checks_at[depth].iter().all(|c| c.holds(&values)) {
                return Ok(Vec::new());
            }
        }
        let mut out = Vec::new();
        let mut nodes = 0u64;
        self.dfs(prefix.len(), &mut values, &mut nodes, &mut out)?;
        Ok(out)
    }

    fn dfs(
        &self,
        depth: usize,
        values: &mut Vec<u32>,
        nodes: &mut u64,
        out: &mut Vec<FusionRing>,
    ) -> Result<(), LimitExceeded> {
        if depth == self.order.len() {
            self.emit(values, out);
            return Ok(());
        }
        let var = self.order[depth];
        let (lo, hi) = self.domains[var];
        for v in lo..=hi {
            *nodes += 1;
            if *nodes > self.spec.node_cap {
                return Err(LimitExceeded { nodes: *nodes });
            }
            values[var] = v;
            if self.checks_at[depth].iter().all(|c| c.holds(values)) {
                self.dfs(depth + 1, values, nodes, out)?;
            }
        }
        Ok(())
    }

    fn emit(&self, values: &[u32], out: &mut Vec<FusionRing>) {
        let r = self.spec.rank;
        let tensor: Vec<u32> = self
            .reduction
            .entries
            .iter()
            .map(|e| match e {
                EntrySource::Fixed(v) => *v,
                EntrySource::Var(k) => values[*k],
            })
            .collect();
        if tensor.iter().copied().max().unwrap_or(0) != self.spec.multiplicity {
            return;
        }
        debug_assert_eq!(tensor.len(), r * r * r);
        if let Ok(ring) = FusionRing::validate(self.dual.clone(), tensor) {
            out.push(ring);
        }
    }

    /// Canonical dedup and catalog-order sort; rings come out in canonical
    /// labelling. Merging several subtask outputs through here gives the same
    /// list as a sequential scan.
    pub fn finalize(
        &self,
        raw: impl IntoIterator<Item = FusionRing>,
        cx: &Ctx,
    ) -> Vec<FusionRing> {
        finalize(raw, cx)
    }

    /// Sequential enumeration: scan, dedup, sort.
    pub fn enumerate(&self, cx: &Ctx) -> Result<Vec<FusionRing>, LimitExceeded> {
        Ok(self.finalize(self.run(&[])?, cx))
    }
}

/// Canonicalize, dedup by canonical key and sort in catalog order.
pub fn finalize(raw: impl IntoIterator<Item = FusionRing>, cx: &Ctx) -> Vec<FusionRing> {
    let mut seen = BTreeSet::new();
    let mut keyed: Vec<(Vec<u32>, FusionRing)> = Vec::new();
    for ring in raw {
        let form = ring.canonical_form(cx);
        if seen.insert(form.key.clone()) {
            keyed.push((form.key, form.ring));
        }
    }
    keyed.sort_by(|(x, _), (y, _)| catalog_cmp(x, y));
    keyed.into_iter().map(|(_, ring)| ring).collect()
}

/// Enumerate across every admissible self-dual count for the rank.
pub fn enumerate_rank(
    rank: usize,
    multiplicity: u32,
    cx: &Ctx,
) -> Result<Vec<FusionRing>, LimitExceeded> {
    let mut raw = Vec::new();
    let mut s = rank;
    loop {
        let search = Search::new(SearchSpec::new(rank, multiplicity, s))
            .expect("self-dual count matches rank parity");
        raw.extend(search.run(&[])?);
        if s < 3 {
            break;
        }
        s -= 2;
    }
    Ok(finalize(raw, cx))
}

/// Orbit of (a,b,c) under the pivotal relations.
fn orbit(a: usize, b: usize, c: usize, dual: &[usize]) -> [(usize, usize, usize); 6] {
    let d = |x: usize| dual[x - 1];
    [
        (a, b, c),
        (d(a), c, b),
        (c, d(b), a),
        (b, d(c), d(a)),
        (d(c), a, d(b)),
        (d(b), d(a), d(c)),
    ]
}

fn reduce(r: usize, dual: &[usize]) -> Reduction {
    let mut entries = vec![EntrySource::Fixed(0); r * r * r];
    let ix = |a: usize, b: usize, c: usize| ((a - 1) * r + (b - 1)) * r + (c - 1);
    for a in 1..=r {
        for b in 1..=r {
            entries[ix(1, a, b)] = EntrySource::Fixed(u32::from(a == b));
            entries[ix(a, 1, b)] = EntrySource::Fixed(u32::from(a == b));
            entries[ix(a, b, 1)] = EntrySource::Fixed(u32::from(b == dual[a - 1]));
        }
    }
    let mut reps = Vec::new();
    for a in 2..=r {
        for b in 2..=r {
            for c in 2..=r {
                let rep = orbit(a, b, c, dual).into_iter().min().unwrap();
                if rep == (a, b, c) {
                    reps.push(rep);
                }
            }
        }
    }
    for (k, &(a, b, c)) in reps.iter().enumerate() {
        for (x, y, z) in orbit(a, b, c, dual) {
            entries[ix(x, y, z)] = EntrySource::Var(k);
        }
    }
    Reduction { rank: r, reps, entries }
}

fn associativity_constraints(r: usize, red: &Reduction) -> Vec<Constraint> {
    let mut out = Vec::new();
    for a in 2..=r {
        for b in 2..=r {
            for c in 2..=r {
                for d in 2..=r {
                    let lhs: Vec<_> = (1..=r)
                        .map(|e| (red.entry(a, b, e), red.entry(e, c, d)))
                        .collect();
                    let rhs: Vec<_> = (1..=r)
                        .map(|f| (red.entry(b, c, f), red.entry(a, f, d)))
                        .collect();
                    out.push(Constraint::Assoc { lhs, rhs });
                }
            }
        }
    }
    out
}

/// Symmetry-breaking inequalities, built separately for the self-dual block
/// and the dual-pair block.
///
/// Self-dual elements j = 3..s are sorted by the chain of fusion profiles
/// t_n(j) = N[n,j,j]: each t_i comparison applies only when all earlier
/// profiles tie, and element 2 must have the largest trace Σ_i N[k,i,i] in its
/// block. Pair comparisons must not depend on the free orientation inside a
/// pair, so pairs are compared through orientation-invariant pair sums; the
/// first pair carries the largest total trace and later adjacent pairs are
/// chained like the self-duals.
fn symmetry_constraints(r: usize, s: usize, red: &Reduction) -> Vec<Implication> {
    let mut out = Vec::new();
    let t = |n: usize, i: usize| vec![red.entry(n, i, i)];
    let trace = |k: usize| (1..=r).map(|i| red.entry(k, i, i)).collect::<EntrySum>();

    for i in 2..=s {
        for j in (i + 1).max(3)..s {
            let equal_premises = (2..i).map(|n| (t(n, j), t(n, j + 1))).collect();
            out.push(Implication {
                equal_premises,
                le: (t(i, j), t(i, j + 1)),
            });
        }
    }
    if s >= 3 {
        for k in 3..=s {
            out.push(Implication {
                equal_premises: Vec::new(),
                le: (trace(k), trace(2)),
            });
        }
    }

    let num_pairs = (r - s) / 2;
    let pair = |p: usize| (s + 2 * p - 1, s + 2 * p);
    // Orientation-invariant profile of pair p against a key source.
    let pair_t = |n: usize, p: usize| -> EntrySum {
        let (x, y) = pair(p);
        vec![red.entry(n, x, x), red.entry(n, y, y)]
    };
    let pair_pair_t = |q: usize, p: usize| -> EntrySum {
        let (n1, n2) = pair(q);
        let (x, y) = pair(p);
        vec![
            red.entry(n1, x, x),
            red.entry(n1, y, y),
            red.entry(n2, x, x),
            red.entry(n2, y, y),
        ]
    };
    let pair_trace = |p: usize| -> EntrySum {
        let (x, y) = pair(p);
        (1..=r)
            .flat_map(|i| [red.entry(x, i, i), red.entry(y, i, i)])
            .collect()
    };
    for p in 2..num_pairs {
        // Keys: self-dual profiles, then the first pair's profile.
        let mut keys: Vec<(EntrySum, EntrySum)> = (2..=s)
            .map(|n| (pair_t(n, p), pair_t(n, p + 1)))
            .collect();
        keys.push((pair_pair_t(1, p), pair_pair_t(1, p + 1)));
        for upto in 0..keys.len() {
            out.push(Implication {
                equal_premises: keys[..upto].to_vec(),
                le: (keys[upto].0.clone(), keys[upto].1.clone()),
            });
        }
    }
    for p in 2..=num_pairs {
        out.push(Implication {
            equal_premises: Vec::new(),
            le: (pair_trace(p), pair_trace(1)),
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Ctx;
    use crate::ring::fixtures;

    fn cx() -> Ctx {
        Ctx::new(64)
    }

    #[test]
    fn rank_two_reduces_to_one_unknown() {
        let search = Search::new(SearchSpec::new(2, 1, 2)).unwrap();
        assert_eq!(search.reduction().reps, vec![(2, 2, 2)]);
        assert_eq!(
            search.reduction().search_space_size(1),
            BigUint::from(2u32)
        );
    }

    #[test]
    fn rank_one_has_no_unknowns_and_one_ring() {
        let search = Search::new(SearchSpec::new(1, 1, 1)).unwrap();
        assert_eq!(search.reduction().num_unknowns(), 0);
        let rings = search.enumerate(&cx()).unwrap();
        assert_eq!(rings.len(), 1);
        assert_eq!(rings[0].tensor(), fixtures::trivial().tensor());
        // Rank 1 cannot reach multiplicity 2.
        let none = Search::new(SearchSpec::new(1, 2, 1)).unwrap();
        assert!(none.enumerate(&cx()).unwrap().is_empty());
    }

    #[test]
    fn rank_three_orbit_reduction_shrinks() {
        let search = Search::new(SearchSpec::new(3, 1, 3)).unwrap();
        // 8 non-vacuum entries fall into 4 orbits.
        assert_eq!(search.reduction().num_unknowns(), 4);
        for (a, b, c) in [(2usize, 3usize, 2usize), (3, 2, 2), (2, 2, 3)] {
            assert_eq!(
                search.reduction().entry(a, b, c),
                search.reduction().entry(2, 2, 3),
            );
        }
        assert_eq!(search.reduction().entry(2, 2, 1), EntrySource::Fixed(1));
        assert_eq!(search.reduction().entry(2, 3, 1), EntrySource::Fixed(0));
    }

    #[test]
    fn symmetry_set_contains_leading_profile_chain() {
        let search = Search::new(SearchSpec::new(4, 1, 4)).unwrap();
        let wanted_l = search.reduction().entry(2, 3, 3);
        let wanted_r = search.reduction().entry(2, 4, 4);
        assert!(search.symmetry_constraints().iter().any(|imp| {
            imp.equal_premises.is_empty()
                && imp.le.0 == vec![wanted_l]
                && imp.le.1 == vec![wanted_r]
        }));
        // Rank 2 needs nothing beyond unit fixing.
        let small = Search::new(SearchSpec::new(2, 1, 2)).unwrap();
        assert!(small.symmetry_constraints().is_empty());
        // Mixed blocks never compare self-dual against pair entries: every
        // comparison stays within one block's elements.
        let mixed = Search::new(SearchSpec::new(3, 1, 1)).unwrap();
        assert!(mixed.symmetry_constraints().is_empty());
    }

    #[test]
    fn published_low_rank_multiplicity_one_counts() {
        let cx = cx();
        for (r, expect) in [(1usize, 1usize), (2, 2), (3, 4), (4, 10), (5, 16)] {
            let rings = enumerate_rank(r, 1, &cx).unwrap();
            assert_eq!(rings.len(), expect, "rank {r}");
            for ring in &rings {
                assert_eq!(ring.multiplicity(), 1);
                assert_eq!(ring.rank(), r);
            }
        }
    }

    #[test]
    fn rank_four_breakdown_by_self_dual_count() {
        let cx = cx();
        // Of the 10 rank-4 rings, the split by non-self-dual count n follows
        // from enumerating each self-dual sector separately.
        let by_s: Vec<usize> = [4usize, 2]
            .iter()
            .map(|&s| {
                Search::new(SearchSpec::new(4, 1, s))
                    .unwrap()
                    .enumerate(&cx)
                    .unwrap()
                    .len()
            })
            .collect();
        assert_eq!(by_s.iter().sum::<usize>(), 10);
        let union = enumerate_rank(4, 1, &cx).unwrap();
        assert_eq!(union.len(), 10);
    }

    #[test]
    fn rank_three_multiplicity_two_count() {
        let rings = enumerate_rank(3, 2, &cx()).unwrap();
        assert_eq!(rings.len(), 3);
        assert!(rings.iter().all(|ring| ring.multiplicity() == 2));
    }

    #[test]
    fn known_rings_are_found() {
        let cx = cx();
        let rings = enumerate_rank(3, 1, &cx).unwrap();
        let keys: Vec<Vec<u32>> = rings
            .iter()
            .map(|ring| ring.canonical_form(&cx).key)
            .collect();
        for fixture in [fixtures::ising(), fixtures::rep_s3(), fixtures::zk(3)] {
            assert!(keys.contains(&fixture.canonical_form(&cx).key));
        }
    }

    #[test]
    fn extra_constraints_restrict_the_catalog() {
        let cx = cx();
        let mut spec = SearchSpec::new(2, 1, 2);
        spec.extra.push(ExtraConstraint::Fix { a: 2, b: 2, c: 2, value: 0 });
        let rings = Search::new(spec).unwrap().enumerate(&cx).unwrap();
        assert_eq!(rings.len(), 1);
        assert_eq!(rings[0].tensor(), fixtures::zk(2).tensor());

        let mut clash = SearchSpec::new(2, 1, 2);
        clash.extra.push(ExtraConstraint::Fix { a: 2, b: 2, c: 1, value: 0 });
        assert!(matches!(Search::new(clash), Err(SpecError::ExtraConflict)));
    }

    #[test]
    fn node_cap_aborts() {
        let mut spec = SearchSpec::new(4, 1, 4);
        spec.node_cap = 10;
        let search = Search::new(spec).unwrap();
        assert!(matches!(search.run(&[]), Err(LimitExceeded { .. })));
    }

    #[test]
    fn subtasks_cover_the_tree() {
        let cx = cx();
        let search = Search::new(SearchSpec::new(4, 1, 2)).unwrap();
        let whole = search.enumerate(&cx).unwrap();
        for levels in [1usize, 2, 3] {
            let mut merged = Vec::new();
            for task in search.subtasks(levels) {
                merged.extend(search.run(&task).unwrap());
            }
            let merged = search.finalize(merged, &cx);
            assert_eq!(
                merged.len(),
                whole.len(),
                "levels {levels}"
            );
            for (x, y) in merged.iter().zip(&whole) {
                assert_eq!(x.tensor(), y.tensor());
            }
        }
    }

    #[test]
    fn bad_specs_are_rejected() {
        assert!(Search::new(SearchSpec::new(4, 1, 3)).is_err());
        assert!(Search::new(SearchSpec::new(3, 0, 3)).is_err());
        assert!(Search::new(SearchSpec::new(0, 1, 0)).is_err());
    }
}
