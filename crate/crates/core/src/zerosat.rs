//! Enumeration of the admissible zero patterns of F-symbols.
//!
//! Several pentagon-solving steps assume the variables they eliminate are
//! nonzero, so the possible sets of vanishing F-symbols must be determined
//! first.  This is done by abstracting each F-symbol to a boolean `b_I`
//! (`TRUE` iff the symbol is nonzero) and translating two facts into
//! propositions:
//!
//! * a polynomial equation cannot hold if exactly one of its terms is
//!   nonzero, and
//! * an invertible F-block must have at least one nonzero determinant term
//!   (a weakening of invertibility that is expressible in the booleans).
//!
//! The proposition is reduced by identifying variables along tetrahedral
//! symmetry orbits (symbols related by the dual-flip transformations differ
//! by nonzero factors, so their zero-ness agrees; orbits that touch a
//! vacuum-trivial symbol are forced nonzero), by extracting forced
//! conjunctions, by merging biconditionally linked variables, and by cheap
//! bounded normal-form sweeps.  The remaining search is an ALLSAT problem
//! solved by DPLL with unit propagation and blocking clauses.  Every
//! candidate is finally re-checked against the full equation list, so the
//! heuristic reductions never affect the output.

use crate::arith::Ctx;
use crate::eqgen::{pentagon_system, EqgenError, Poly, PolySystem, SymbolId};
use crate::ring::FusionRing;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

/// Budget for the optional clause sweeps, counted in literals.
const SWEEP_LITERAL_BOUND: usize = 100_000;

/// A class of F-symbols whose zero-ness is shared.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoolVarClass {
    pub representative: SymbolId,
    pub members: Vec<SymbolId>,
}

/// One admissible assignment of zeros: the listed symbols vanish, all other
/// F-symbols are nonzero.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ZeroPattern {
    pub zeros: Vec<SymbolId>,
}

/// A boolean constraint over class indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Constraint {
    /// Disjunction of literals `(class, polarity)`.
    Clause(Vec<(usize, bool)>),
    /// Disjunction of conjunctions of positive variables.
    OrConj(Vec<Vec<usize>>),
    /// "Not exactly one of these conjunctions is true."  Conjunctions may
    /// repeat; each occurrence counts separately.
    NotExactlyOne(Vec<Vec<usize>>),
}

/// The boolean abstraction of a pentagon system.
#[derive(Clone, Debug, Default)]
pub struct Proposition {
    pub classes: Vec<BoolVarClass>,
    pub constraints: Vec<Constraint>,
    pub forced: BTreeMap<usize, bool>,
    pub contradiction: bool,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    fn union(&mut self, x: usize, y: usize) {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx != ry {
            let (lo, hi) = if rx < ry { (rx, ry) } else { (ry, rx) };
            self.parent[hi] = lo;
        }
    }
}

fn poly_term_sets(p: &Poly) -> Vec<Vec<usize>> {
    p.terms
        .iter()
        .map(|t| {
            let mut vs: Vec<usize> = t.pows.iter().map(|&(v, _)| v).collect();
            vs.sort_unstable();
            vs.dedup();
            vs
        })
        .collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in permutations(n - 1) {
        for pos in 0..n {
            let mut p = rest.clone();
            p.insert(pos, n - 1);
            out.push(p);
        }
    }
    out
}

/// Symbol sets of the determinant terms of an F-block.
fn det_term_sets(sys: &PolySystem, block_idx: usize) -> Vec<Vec<SymbolId>> {
    let blk = &sys.invertible_groups[block_idx];
    let n = blk.size();
    permutations(n)
        .into_iter()
        .map(|perm| {
            let mut syms: Vec<SymbolId> = (0..n).map(|i| blk.symbol(i, perm[i])).collect();
            syms.sort_unstable();
            syms.dedup();
            syms
        })
        .collect()
}

/// Translates a pentagon system into its boolean abstraction: one class per
/// F-symbol variable, a "not exactly one nonzero term" constraint per
/// equation, and a nonzero-determinant-term disjunction per F-block.
pub fn build_propositions(sys: &PolySystem) -> Proposition {
    let classes: Vec<BoolVarClass> = sys
        .variables
        .iter()
        .map(|&s| BoolVarClass { representative: s, members: vec![s] })
        .collect();
    let mut constraints = Vec::new();
    for eq in &sys.equations {
        constraints.push(Constraint::NotExactlyOne(poly_term_sets(eq)));
    }
    for bi in 0..sys.invertible_groups.len() {
        let conjs: Vec<Vec<usize>> = det_term_sets(sys, bi)
            .into_iter()
            .map(|syms| {
                syms.iter()
                    .map(|s| sys.variables.binary_search(s).expect("block entry is a variable"))
                    .collect()
            })
            .collect();
        constraints.push(Constraint::OrConj(conjs));
    }
    Proposition {
        classes,
        constraints,
        forced: BTreeMap::new(),
        contradiction: false,
    }
}

/// The three tetrahedral transformations of an F-symbol's labels.
fn tetra_images(ring: &FusionRing, s: SymbolId) -> [SymbolId; 3] {
    let l = s.labels();
    let (a, b, c, d, e, f) = (l[0], l[1], l[2], l[3], l[4], l[5]);
    let du = |x: usize| ring.dual(x);
    [
        SymbolId::f(c, b, du(a), du(d), e, du(f)),
        SymbolId::f(du(a), d, c, du(b), du(e), du(f)),
        SymbolId::f(du(e), c, du(f), du(a), du(d), du(b)),
    ]
}

fn is_admissible(ring: &FusionRing, s: SymbolId) -> bool {
    let l = s.labels();
    ring.n(l[0], l[1], l[4]) == 1
        && ring.n(l[4], l[2], l[3]) == 1
        && ring.n(l[1], l[2], l[5]) == 1
        && ring.n(l[0], l[5], l[3]) == 1
}

/// Rebuilds the proposition with classes merged along `uf` and the forced
/// map re-anchored on the new class indices.
fn compress(prop: &mut Proposition, uf: &mut UnionFind, forced: BTreeMap<usize, bool>) {
    let mut members: BTreeMap<usize, Vec<SymbolId>> = BTreeMap::new();
    for (i, class) in prop.classes.iter().enumerate() {
        let root = uf.find(i);
        members.entry(root).or_default().extend(class.members.iter().copied());
    }
    let mut new_classes: Vec<(usize, BoolVarClass)> = members
        .into_iter()
        .map(|(root, mut ms)| {
            ms.sort_unstable();
            ms.dedup();
            let rep = ms[0];
            (root, BoolVarClass { representative: rep, members: ms })
        })
        .collect();
    new_classes.sort_by(|x, y| x.1.representative.cmp(&y.1.representative));
    let remap: BTreeMap<usize, usize> = new_classes
        .iter()
        .enumerate()
        .map(|(new, (root, _))| (*root, new))
        .collect();
    prop.classes = new_classes.into_iter().map(|(_, c)| c).collect();
    let mut new_forced: BTreeMap<usize, bool> = BTreeMap::new();
    for (k, v) in forced {
        let key = remap[&uf.find(k)];
        match new_forced.get(&key) {
            Some(&w) if w != v => prop.contradiction = true,
            _ => {
                new_forced.insert(key, v);
            }
        }
    }
    prop.forced = new_forced;
    let constraints = core::mem::take(&mut prop.constraints);
    prop.constraints = constraints
        .into_iter()
        .filter_map(|cst| match cst {
            Constraint::Clause(lits) => {
                let mut out: Vec<(usize, bool)> = lits
                    .into_iter()
                    .map(|(v, p)| (remap[&uf.find(v)], p))
                    .collect();
                out.sort_unstable();
                out.dedup();
                if out.windows(2).any(|w| w[0].0 == w[1].0) {
                    None
                } else {
                    Some(Constraint::Clause(out))
                }
            }
            Constraint::OrConj(cs) => Some(Constraint::OrConj(
                cs.into_iter().map(|c| remap_conj(c, uf, &remap)).collect(),
            )),
            Constraint::NotExactlyOne(cs) => Some(Constraint::NotExactlyOne(
                cs.into_iter().map(|c| remap_conj(c, uf, &remap)).collect(),
            )),
        })
        .collect();
}

fn remap_conj(c: Vec<usize>, uf: &mut UnionFind, remap: &BTreeMap<usize, usize>) -> Vec<usize> {
    let mut out: Vec<usize> = c.into_iter().map(|v| remap[&uf.find(v)]).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Merges classes along tetrahedral symmetry orbits; any orbit meeting a
/// vacuum-trivial symbol is forced nonzero.
fn identify_tetrahedral(prop: &mut Proposition, ring: &FusionRing) {
    let mut uf = UnionFind::new(prop.classes.len());
    let sym_index: BTreeMap<SymbolId, usize> = prop
        .classes
        .iter()
        .enumerate()
        .flat_map(|(i, c)| c.members.iter().map(move |&m| (m, i)))
        .collect();
    let mut forced = prop.forced.clone();
    for (i, class) in prop.classes.iter().enumerate() {
        for &m in &class.members {
            for img in tetra_images(ring, m) {
                if !is_admissible(ring, img) {
                    continue;
                }
                let l = img.labels();
                if l[0] == 1 || l[1] == 1 || l[2] == 1 {
                    forced.insert(i, true);
                } else if let Some(&j) = sym_index.get(&img) {
                    uf.union(i, j);
                }
            }
        }
    }
    compress(prop, &mut uf, forced);
}

/// Reduces constraints to a fixpoint: unit extraction from lone surviving
/// conjunctions, biconditional class merging, conjunction-in-every-branch
/// forcing for disjunctions, and a bounded clause sweep over biconditional
/// pairs.  Ring-independent.
fn reduce_fixpoint(prop: &mut Proposition) {
    let n = prop.classes.len();
    let mut uf = UnionFind::new(n);
    let mut forced = prop.forced.clone();
    let mut constraints = core::mem::take(&mut prop.constraints);

    fn norm_conj(
        conj: &[usize],
        uf: &mut UnionFind,
        forced: &BTreeMap<usize, bool>,
    ) -> Option<Vec<usize>> {
        let mut out: Vec<usize> = Vec::with_capacity(conj.len());
        for &v in conj {
            let root = uf.find(v);
            match forced.get(&root) {
                Some(true) => {}
                Some(false) => return None,
                None => out.push(root),
            }
        }
        out.sort_unstable();
        out.dedup();
        Some(out)
    }

    loop {
        let mut changed = false;
        let mut next: Vec<Constraint> = Vec::with_capacity(constraints.len());
        for cst in constraints.drain(..) {
            if prop.contradiction {
                break;
            }
            match cst {
                Constraint::Clause(lits) => {
                    let mut out: Vec<(usize, bool)> = Vec::with_capacity(lits.len());
                    let mut sat = false;
                    for (v, pol) in lits {
                        let root = uf.find(v);
                        match forced.get(&root) {
                            Some(&w) if w == pol => {
                                sat = true;
                                break;
                            }
                            Some(_) => {}
                            None => out.push((root, pol)),
                        }
                    }
                    if sat {
                        changed = true;
                        continue;
                    }
                    out.sort_unstable();
                    out.dedup();
                    if out.windows(2).any(|w| w[0].0 == w[1].0) {
                        changed = true;
                        continue;
                    }
                    match out.len() {
                        0 => prop.contradiction = true,
                        1 => {
                            forced.insert(out[0].0, out[0].1);
                            changed = true;
                        }
                        _ => next.push(Constraint::Clause(out)),
                    }
                }
                Constraint::OrConj(conjs) => {
                    let mut out: Vec<Vec<usize>> = Vec::with_capacity(conjs.len());
                    let mut sat = false;
                    for conj in &conjs {
                        match norm_conj(conj, &mut uf, &forced) {
                            None => {}
                            Some(c) if c.is_empty() => {
                                sat = true;
                                break;
                            }
                            Some(c) => out.push(c),
                        }
                    }
                    if sat {
                        changed = true;
                        continue;
                    }
                    out.sort();
                    out.dedup();
                    match out.len() {
                        0 => prop.contradiction = true,
                        1 => {
                            for v in &out[0] {
                                forced.insert(*v, true);
                            }
                            changed = true;
                        }
                        _ => {
                            // A variable occurring in every conjunction of a
                            // disjunction must be true.
                            let common: Vec<usize> = out[0]
                                .iter()
                                .copied()
                                .filter(|v| out[1..].iter().all(|c| c.contains(v)))
                                .collect();
                            if !common.is_empty() {
                                for v in common {
                                    forced.insert(v, true);
                                }
                                changed = true;
                            }
                            next.push(Constraint::OrConj(out));
                        }
                    }
                }
                Constraint::NotExactlyOne(conjs) => {
                    let mut live: Vec<Vec<usize>> = Vec::with_capacity(conjs.len());
                    let mut const_true = 0usize;
                    for conj in &conjs {
                        match norm_conj(conj, &mut uf, &forced) {
                            None => {}
                            Some(c) if c.is_empty() => const_true += 1,
                            Some(c) => live.push(c),
                        }
                    }
                    if const_true >= 2 {
                        changed = true;
                        continue;
                    }
                    if const_true == 1 {
                        match live.len() {
                            0 => prop.contradiction = true,
                            1 => {
                                // A lone partner of a nonzero term must be
                                // nonzero itself.
                                for v in &live[0] {
                                    forced.insert(*v, true);
                                }
                                changed = true;
                            }
                            _ => {
                                changed = true;
                                next.push(Constraint::OrConj(live));
                            }
                        }
                        continue;
                    }
                    match live.len() {
                        0 => changed = true,
                        1 => {
                            // The lone live term must vanish.
                            changed = true;
                            next.push(Constraint::Clause(
                                live[0].iter().map(|&v| (v, false)).collect(),
                            ));
                        }
                        2 if live[0].len() == 1 && live[1].len() == 1 && live[0] != live[1] => {
                            // Biconditional between two variables: merge
                            // their classes.
                            uf.union(live[0][0], live[1][0]);
                            changed = true;
                        }
                        _ => next.push(Constraint::NotExactlyOne(live)),
                    }
                }
            }
        }
        constraints = next;
        // Re-anchor forced keys onto current roots; a conflict makes the
        // proposition unsatisfiable.
        let snapshot: Vec<(usize, bool)> = forced.iter().map(|(&k, &v)| (k, v)).collect();
        forced.clear();
        for (k, v) in snapshot {
            let root = uf.find(k);
            match forced.get(&root) {
                Some(&w) if w != v => prop.contradiction = true,
                _ => {
                    forced.insert(root, v);
                }
            }
        }
        if !changed || prop.contradiction {
            break;
        }
    }

    // Bounded clause sweep: distribute two-term biconditionals into clauses
    // so the solver can propagate across them directly.
    let mut literal_budget = SWEEP_LITERAL_BOUND;
    let mut extra: Vec<Constraint> = Vec::new();
    for cst in &constraints {
        if let Constraint::NotExactlyOne(conjs) = cst {
            if conjs.len() == 2 {
                for (p, q) in [(&conjs[0], &conjs[1]), (&conjs[1], &conjs[0])] {
                    for &v in q.iter() {
                        let mut lits: Vec<(usize, bool)> =
                            p.iter().map(|&w| (w, false)).collect();
                        lits.push((v, true));
                        lits.sort_unstable();
                        lits.dedup();
                        if lits.windows(2).any(|w| w[0].0 == w[1].0) {
                            continue;
                        }
                        if literal_budget < lits.len() {
                            break;
                        }
                        literal_budget -= lits.len();
                        extra.push(Constraint::Clause(lits));
                    }
                }
            }
        }
    }
    extra.sort_by(constraint_cmp);
    extra.dedup();
    constraints.extend(extra);

    prop.constraints = constraints;
    compress(prop, &mut uf, forced);
}

fn constraint_cmp(a: &Constraint, b: &Constraint) -> core::cmp::Ordering {
    let key = |c: &Constraint| match c {
        Constraint::Clause(l) => (0usize, l.clone(), Vec::new()),
        Constraint::OrConj(cs) => (1, Vec::new(), cs.clone()),
        Constraint::NotExactlyOne(cs) => (2, Vec::new(), cs.clone()),
    };
    key(a).cmp(&key(b))
}

/// Reduces the proposition in place: tetrahedral identification followed by
/// the constraint-reduction fixpoint.
pub fn simplify(prop: &mut Proposition, ring: &FusionRing) {
    identify_tetrahedral(prop, ring);
    reduce_fixpoint(prop);
}

enum Status {
    Satisfied,
    Violated,
    /// Constraint is undecided; the vector lists implied unit assignments.
    Open(Vec<(usize, bool)>),
}

fn conj_state(conj: &[usize], vals: &[Option<bool>]) -> Option<bool> {
    let mut open = false;
    for &v in conj {
        match vals[v] {
            Some(false) => return Some(false),
            None => open = true,
            Some(true) => {}
        }
    }
    if open {
        None
    } else {
        Some(true)
    }
}

fn constraint_status(cst: &Constraint, vals: &[Option<bool>]) -> Status {
    match cst {
        Constraint::Clause(lits) => {
            let mut unassigned: Vec<(usize, bool)> = Vec::new();
            for &(v, pol) in lits {
                match vals[v] {
                    Some(w) if w == pol => return Status::Satisfied,
                    Some(_) => {}
                    None => unassigned.push((v, pol)),
                }
            }
            match unassigned.len() {
                0 => Status::Violated,
                1 => Status::Open(unassigned),
                _ => Status::Open(Vec::new()),
            }
        }
        Constraint::OrConj(conjs) => {
            let mut open: Vec<&Vec<usize>> = Vec::new();
            for conj in conjs {
                match conj_state(conj, vals) {
                    Some(true) => return Status::Satisfied,
                    Some(false) => {}
                    None => open.push(conj),
                }
            }
            match open.len() {
                0 => Status::Violated,
                1 => Status::Open(
                    open[0]
                        .iter()
                        .filter(|&&v| vals[v].is_none())
                        .map(|&v| (v, true))
                        .collect(),
                ),
                _ => Status::Open(Vec::new()),
            }
        }
        Constraint::NotExactlyOne(conjs) => {
            let mut true_count = 0usize;
            let mut open: Vec<&Vec<usize>> = Vec::new();
            for conj in conjs {
                match conj_state(conj, vals) {
                    Some(true) => true_count += 1,
                    Some(false) => {}
                    None => open.push(conj),
                }
            }
            if true_count >= 2 {
                return Status::Satisfied;
            }
            match (true_count, open.len()) {
                (1, 0) => Status::Violated,
                (1, 1) => Status::Open(
                    open[0]
                        .iter()
                        .filter(|&&v| vals[v].is_none())
                        .map(|&v| (v, true))
                        .collect(),
                ),
                (0, 0) => Status::Satisfied,
                (0, 1) => {
                    let unassigned: Vec<(usize, bool)> = open[0]
                        .iter()
                        .filter(|&&v| vals[v].is_none())
                        .map(|&v| (v, false))
                        .collect();
                    if unassigned.len() == 1 {
                        Status::Open(unassigned)
                    } else {
                        Status::Open(Vec::new())
                    }
                }
                _ => Status::Open(Vec::new()),
            }
        }
    }
}

/// DPLL all-solutions enumeration with unit propagation and blocking
/// clauses.  Returns full per-class truth assignments.
fn enumerate_assignments(prop: &Proposition) -> Vec<Vec<bool>> {
    let n = prop.classes.len();
    if prop.contradiction {
        return Vec::new();
    }
    let mut vals: Vec<Option<bool>> = vec![None; n];
    for (&v, &b) in &prop.forced {
        vals[v] = Some(b);
    }
    // Decision order: most-occurring class first, ties by class index.
    let mut occur = vec![0usize; n];
    for cst in &prop.constraints {
        match cst {
            Constraint::Clause(lits) => {
                for &(v, _) in lits {
                    occur[v] += 1;
                }
            }
            Constraint::OrConj(cs) | Constraint::NotExactlyOne(cs) => {
                for c in cs {
                    for &v in c {
                        occur[v] += 1;
                    }
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| occur[y].cmp(&occur[x]).then(x.cmp(&y)));

    let mut blocking: Vec<Vec<(usize, bool)>> = Vec::new();
    let mut out: Vec<Vec<bool>> = Vec::new();
    search(prop, &order, &mut vals, &mut blocking, &mut out);
    out
}

fn search(
    prop: &Proposition,
    order: &[usize],
    vals: &mut Vec<Option<bool>>,
    blocking: &mut Vec<Vec<(usize, bool)>>,
    out: &mut Vec<Vec<bool>>,
) {
    // Unit propagation to fixpoint; the trail records what to undo.
    let mut trail: Vec<usize> = Vec::new();
    let ok = loop {
        let mut implied: Vec<(usize, bool)> = Vec::new();
        let mut violated = false;
        for cst in &prop.constraints {
            match constraint_status(cst, vals) {
                Status::Violated => {
                    violated = true;
                    break;
                }
                Status::Open(units) => implied.extend(units),
                Status::Satisfied => {}
            }
        }
        if !violated {
            for bl in blocking.iter() {
                let mut sat = false;
                let mut open = false;
                for &(v, pol) in bl {
                    match vals[v] {
                        Some(w) if w == pol => {
                            sat = true;
                            break;
                        }
                        Some(_) => {}
                        None => open = true,
                    }
                }
                if !sat && !open {
                    violated = true;
                    break;
                }
            }
        }
        if violated {
            break false;
        }
        let mut progressed = false;
        for (v, b) in implied {
            match vals[v] {
                Some(w) if w == b => {}
                // A conflicting unit will surface as a violation on the
                // next evaluation pass.
                Some(_) => break,
                None => {
                    vals[v] = Some(b);
                    trail.push(v);
                    progressed = true;
                }
            }
        }
        if !progressed {
            break true;
        }
    };
    if ok {
        match order.iter().find(|&&v| vals[v].is_none()) {
            None => {
                let all_ok = prop
                    .constraints
                    .iter()
                    .all(|c| !matches!(constraint_status(c, vals), Status::Violated));
                if all_ok {
                    let solution: Vec<bool> = vals.iter().map(|v| v.unwrap()).collect();
                    blocking.push(
                        solution
                            .iter()
                            .enumerate()
                            .map(|(v, &b)| (v, !b))
                            .collect(),
                    );
                    out.push(solution);
                }
            }
            Some(&v) => {
                for b in [true, false] {
                    vals[v] = Some(b);
                    search(prop, order, vals, blocking, out);
                    vals[v] = None;
                }
            }
        }
    }
    for v in trail {
        vals[v] = None;
    }
}

/// Exact check of a zero set against the full system: no equation may be
/// left with exactly one structurally nonzero term, and every F-block must
/// keep a structurally nonzero determinant term.
fn pattern_admissible(sys: &PolySystem, zeros: &BTreeSet<SymbolId>) -> bool {
    let zero_idx: BTreeSet<usize> = zeros
        .iter()
        .filter_map(|s| sys.variables.binary_search(s).ok())
        .collect();
    for eq in &sys.equations {
        let nonzero_terms = eq
            .terms
            .iter()
            .filter(|t| t.pows.iter().all(|&(v, _)| !zero_idx.contains(&v)))
            .count();
        if nonzero_terms == 1 {
            return false;
        }
    }
    for bi in 0..sys.invertible_groups.len() {
        let any = det_term_sets(sys, bi)
            .into_iter()
            .any(|syms| syms.iter().all(|s| !zeros.contains(s)));
        if !any {
            return false;
        }
    }
    true
}

/// Enumerates all admissible zero patterns of the ring's F-symbols, sorted
/// by pattern size and then lexicographically.
pub fn all_zero_patterns(ring: &FusionRing, cx: &Ctx) -> Result<Vec<ZeroPattern>, EqgenError> {
    let sys = pentagon_system(ring, cx)?;
    let mut prop = build_propositions(&sys);
    simplify(&mut prop, ring);
    let mut patterns: Vec<ZeroPattern> = Vec::new();
    for assignment in enumerate_assignments(&prop) {
        let mut zeros: BTreeSet<SymbolId> = BTreeSet::new();
        for (ci, &b) in assignment.iter().enumerate() {
            if !b {
                zeros.extend(prop.classes[ci].members.iter().copied());
            }
        }
        if pattern_admissible(&sys, &zeros) {
            patterns.push(ZeroPattern { zeros: zeros.into_iter().collect() });
        }
    }
    patterns.sort_by(|a, b| {
        a.zeros
            .len()
            .cmp(&b.zeros.len())
            .then_with(|| a.zeros.cmp(&b.zeros))
    });
    patterns.dedup();
    Ok(patterns)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupext::{haagerup_izumi, make_group, tambara_yamagami, GroupKind};
    use crate::ring::fixtures;

    fn cx64() -> Ctx {
        Ctx::new(64)
    }

    /// Brute force over all class assignments with only the exact filter.
    fn brute_force(ring: &FusionRing, cx: &Ctx) -> Vec<ZeroPattern> {
        let sys = pentagon_system(ring, cx).unwrap();
        let mut prop = build_propositions(&sys);
        identify_tetrahedral(&mut prop, ring);
        let k = prop.classes.len();
        assert!(k <= 20, "brute force oracle applies to at most 20 classes");
        let mut patterns = Vec::new();
        for mask in 0u32..(1u32 << k) {
            let mut zeros: BTreeSet<SymbolId> = BTreeSet::new();
            for (ci, class) in prop.classes.iter().enumerate() {
                if mask >> ci & 1 == 0 {
                    zeros.extend(class.members.iter().copied());
                }
            }
            if pattern_admissible(&sys, &zeros) {
                patterns.push(ZeroPattern { zeros: zeros.into_iter().collect() });
            }
        }
        patterns.sort_by(|a, b| {
            a.zeros
                .len()
                .cmp(&b.zeros.len())
                .then_with(|| a.zeros.cmp(&b.zeros))
        });
        patterns.dedup();
        patterns
    }

    #[test]
    fn tetra_images_stay_admissible() {
        for ring in [
            fixtures::fib(),
            fixtures::ising(),
            fixtures::rep_s3(),
            fixtures::psu2_6(),
            fixtures::zk(4),
        ] {
            let cx = cx64();
            let sys = pentagon_system(&ring, &cx).unwrap();
            for &s in &sys.variables {
                for img in tetra_images(&ring, s) {
                    assert!(is_admissible(&ring, img), "image {img} of {s} is not admissible");
                    let l = img.labels();
                    let vacuum = l[0] == 1 || l[1] == 1 || l[2] == 1;
                    assert!(
                        vacuum || sys.variables.binary_search(&img).is_ok(),
                        "image {img} of {s} is not a variable"
                    );
                }
            }
        }
    }

    #[test]
    fn z2_all_symbols_forced_nonzero() {
        let cx = cx64();
        let patterns = all_zero_patterns(&fixtures::zk(2), &cx).unwrap();
        assert_eq!(patterns, vec![ZeroPattern { zeros: vec![] }]);
    }

    #[test]
    fn fibonacci_has_unique_empty_pattern() {
        let cx = cx64();
        let patterns = all_zero_patterns(&fixtures::fib(), &cx).unwrap();
        assert_eq!(patterns, vec![ZeroPattern { zeros: vec![] }]);
    }

    #[test]
    fn rep_s3_has_two_patterns() {
        let cx = cx64();
        let patterns = all_zero_patterns(&fixtures::rep_s3(), &cx).unwrap();
        assert_eq!(patterns.len(), 2, "patterns: {patterns:?}");
        assert_eq!(patterns[0], ZeroPattern { zeros: vec![] });
        assert_eq!(
            patterns[1],
            ZeroPattern { zeros: vec![SymbolId::f(3, 3, 3, 3, 3, 3)] }
        );
    }

    #[test]
    fn psu2_6_class_reduction() {
        let cx = cx64();
        let ring = fixtures::psu2_6();
        let sys = pentagon_system(&ring, &cx).unwrap();
        assert_eq!(sys.variables.len(), 163);
        let mut prop = build_propositions(&sys);
        identify_tetrahedral(&mut prop, &ring);
        assert_eq!(prop.classes.len(), 44);
    }

    #[test]
    fn haagerup_izumi_z3_class_reduction() {
        let cx = cx64();
        let ring = haagerup_izumi(make_group(GroupKind::Cyclic(3)).unwrap(), 1).unwrap();
        let sys = pentagon_system(&ring, &cx).unwrap();
        assert_eq!(sys.variables.len(), 1259);
        let mut prop = build_propositions(&sys);
        identify_tetrahedral(&mut prop, &ring);
        assert_eq!(prop.classes.len(), 396);
    }

    #[test]
    fn matches_brute_force_on_small_rings() {
        let cx = cx64();
        let rings = [
            fixtures::fib(),
            fixtures::ising(),
            fixtures::rep_s3(),
            fixtures::zk(3),
            fixtures::zk(4),
            tambara_yamagami(make_group(GroupKind::Cyclic(3)).unwrap()).unwrap(),
        ];
        for ring in rings {
            let fast = all_zero_patterns(&ring, &cx).unwrap();
            let slow = brute_force(&ring, &cx);
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn patterns_are_class_unions() {
        let cx = cx64();
        for ring in [fixtures::rep_s3(), fixtures::ising()] {
            let sys = pentagon_system(&ring, &cx).unwrap();
            let mut prop = build_propositions(&sys);
            simplify(&mut prop, &ring);
            for pat in all_zero_patterns(&ring, &cx).unwrap() {
                let zeros: BTreeSet<SymbolId> = pat.zeros.iter().copied().collect();
                for class in &prop.classes {
                    let hit = class.members.iter().filter(|m| zeros.contains(m)).count();
                    assert!(hit == 0 || hit == class.members.len());
                }
            }
        }
    }

    #[test]
    fn reduce_forces_unit_and_biconditional() {
        // b1 and (b1 <-> b2): both end up forced true with no residue.
        let s1 = SymbolId::f(2, 2, 2, 2, 1, 1);
        let s2 = SymbolId::f(2, 2, 2, 2, 2, 2);
        let mut prop = Proposition {
            classes: vec![
                BoolVarClass { representative: s1, members: vec![s1] },
                BoolVarClass { representative: s2, members: vec![s2] },
            ],
            constraints: vec![
                Constraint::Clause(vec![(0, true)]),
                Constraint::NotExactlyOne(vec![vec![0], vec![1]]),
            ],
            forced: BTreeMap::new(),
            contradiction: false,
        };
        reduce_fixpoint(&mut prop);
        assert!(!prop.contradiction);
        assert!(prop.constraints.is_empty());
        assert_eq!(prop.classes.len(), 1, "biconditional should merge the classes");
        assert_eq!(prop.classes[0].members, vec![s1, s2]);
        assert_eq!(prop.forced.get(&0), Some(&true));
    }

    #[test]
    fn contradictory_forcings_are_detected() {
        let s1 = SymbolId::f(2, 2, 2, 2, 1, 1);
        let mut prop = Proposition {
            classes: vec![BoolVarClass { representative: s1, members: vec![s1] }],
            constraints: vec![
                Constraint::Clause(vec![(0, true)]),
                Constraint::Clause(vec![(0, false)]),
            ],
            forced: BTreeMap::new(),
            contradiction: false,
        };
        reduce_fixpoint(&mut prop);
        assert!(prop.contradiction);
        assert!(enumerate_assignments(&prop).is_empty());
    }
}
