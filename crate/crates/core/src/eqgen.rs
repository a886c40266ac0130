//! Generation of the polynomial consistency systems attached to a fusion
//! ring: pentagon equations for F-symbols, hexagon equations for R-symbols,
//! pivotal equations for pivotal coefficients, and the exchange/loop move
//! equations for anyons on trijunction, circle and lollipop graphs.
//!
//! All generators emit a [`PolySystem`]: a sparse polynomial system over an
//! ordered list of symbol variables, together with nonzero assumptions and
//! (for the pentagon) the F-blocks whose invertibility is part of the
//! definition.  Numeric coefficients are arbitrary-precision complex numbers.
//!
//! Conventions used throughout:
//!
//! * `F[a,b,c,d,e,f]` denotes the F-symbol with upper index `e` (the channel
//!   of `a⊗b`) and lower index `f` (the channel of `b⊗c`); it is admissible
//!   iff `N(a,b,e)·N(e,c,d)·N(b,c,f)·N(a,f,d) = 1`.  Symbols with a vacuum
//!   label among `a,b,c` are fixed to `1` and never become variables.
//! * `R[a,b,c]` is the exchange phase of `a` and `b` in channel `c`; symbols
//!   with `a = 1` or `b = 1` are fixed to `1`.
//! * `D[a,b,c]` is the loop move of `a` past `b` on the circle in channel
//!   `c`; the moves `D[a,1,a]` are normalized to `1`, while the generalized
//!   twists `D[1,a,a]` remain free.
//! * Trijunction symbols `P`/`Q` and the four-particle symbols `X`, `Y`,
//!   `A`, `B` are derived quantities: they are recorded as evaluation
//!   recipes over the R-variables (see [`Definition`]) and never appear as
//!   unknowns.  Rows of their defining move identities with distinct free
//!   indices become consistency equations in the R-variables alone, with
//!   denominators cleared.
//!
//! Equations are normalized (sorted exponent lists, like terms merged,
//! leading coefficient scaled to `+1` for comparison) and exact duplicates
//! are removed.  Coefficients smaller than the working tolerance are treated
//! as zero; legitimate coefficients in these systems are algebraic numbers
//! far above that threshold, so the cut only removes rounding residue.

use crate::arith::{cmat_inverse, CMat, Cplx, Ctx, Real};
use crate::ring::FusionRing;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Errors reported by the system generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EqgenError {
    /// Pentagon generation is only supported for multiplicity-free rings.
    MultiplicityUnsupported,
    /// Graph-braid systems are only defined over commutative rings, since
    /// the upper and lower index ranges of a block and its inverse must
    /// agree channel by channel.
    NonCommutative,
    /// An F-block of the supplied solution is numerically singular, so the
    /// inverse symbols needed by the graph systems do not exist.
    SingularBlock,
}

impl fmt::Display for EqgenError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EqgenError::MultiplicityUnsupported => {
                write!(f, "equation generation requires a multiplicity-free ring")
            }
            EqgenError::NonCommutative => {
                write!(f, "graph-braid systems require a commutative ring")
            }
            EqgenError::SingularBlock => {
                write!(f, "an F-block of the supplied solution is singular")
            }
        }
    }
}

/// Which graph the braid-consistency system describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphKind {
    /// Loop moves on a circle.
    Circle,
    /// Exchange moves on a trijunction with three particles.
    Tri3,
    /// Exchange moves on a trijunction with four particles.
    Tri4,
    /// A circle with one attached stick: trijunction exchanges whose
    /// off-junction symbols collapse to R, plus the circle loop moves.
    Lollipop,
}

/// Kind tag for [`SymbolId`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SymbolKind {
    F,
    R,
    Pv,
    D,
    P,
    Q,
    X,
    Y,
    A,
    B,
    Param,
}

/// A typed, labelled symbol: the atoms that polynomial systems range over.
///
/// The derived order (kind first, then labels lexicographically) is the
/// canonical variable order used by every generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SymbolId {
    /// `F[a,b,c,d,e,f]`.
    F(u16, u16, u16, u16, u16, u16),
    /// `R[a,b,c]`: exchange of `a` and `b` in channel `c`.
    R(u16, u16, u16),
    /// `Pv[a]`: pivotal coefficient of `a`.
    Pv(u16),
    /// `D[a,b,c]`: loop move of `a` past `b` in channel `c`.
    D(u16, u16, u16),
    /// `P[t1,t2,t3,e,d]`: trijunction exchange of `t1,t2` (charge `e`, total
    /// `d`) with the third particle parked on the first free edge.
    P(u16, u16, u16, u16, u16),
    /// `Q[t1,t2,t3,e,d]`: as `P` but parking on the second free edge.
    Q(u16, u16, u16, u16, u16),
    /// `X[t1,t2,t3,t4,f,g,e]`: four-particle exchange of `t1,t2` with the
    /// pair `t3,t4` moved to the first free edge.
    X(u16, u16, u16, u16, u16, u16, u16),
    /// `Y[...]`: as `X` via the second free edge.
    Y(u16, u16, u16, u16, u16, u16, u16),
    /// `A[...]`: as `X` with the two far particles parked on distinct edges,
    /// one ordering.
    A(u16, u16, u16, u16, u16, u16, u16),
    /// `B[...]`: as `A` with the opposite parking order.
    B(u16, u16, u16, u16, u16, u16, u16),
    /// `z[k]`: a free parameter introduced while solving.
    Param(u32),
}

impl SymbolId {
    pub fn f(a: usize, b: usize, c: usize, d: usize, e: usize, ff: usize) -> SymbolId {
        SymbolId::F(a as u16, b as u16, c as u16, d as u16, e as u16, ff as u16)
    }

    pub fn r(a: usize, b: usize, c: usize) -> SymbolId {
        SymbolId::R(a as u16, b as u16, c as u16)
    }

    pub fn pv(a: usize) -> SymbolId {
        SymbolId::Pv(a as u16)
    }

    pub fn d(a: usize, b: usize, c: usize) -> SymbolId {
        SymbolId::D(a as u16, b as u16, c as u16)
    }

    pub fn p(t1: usize, t2: usize, t3: usize, e: usize, d: usize) -> SymbolId {
        SymbolId::P(t1 as u16, t2 as u16, t3 as u16, e as u16, d as u16)
    }

    pub fn q(t1: usize, t2: usize, t3: usize, e: usize, d: usize) -> SymbolId {
        SymbolId::Q(t1 as u16, t2 as u16, t3 as u16, e as u16, d as u16)
    }

    pub fn x(v: [usize; 7]) -> SymbolId {
        SymbolId::X(
            v[0] as u16,
            v[1] as u16,
            v[2] as u16,
            v[3] as u16,
            v[4] as u16,
            v[5] as u16,
            v[6] as u16,
        )
    }

    pub fn y(v: [usize; 7]) -> SymbolId {
        SymbolId::Y(
            v[0] as u16,
            v[1] as u16,
            v[2] as u16,
            v[3] as u16,
            v[4] as u16,
            v[5] as u16,
            v[6] as u16,
        )
    }

    pub fn a(v: [usize; 7]) -> SymbolId {
        SymbolId::A(
            v[0] as u16,
            v[1] as u16,
            v[2] as u16,
            v[3] as u16,
            v[4] as u16,
            v[5] as u16,
            v[6] as u16,
        )
    }

    pub fn b(v: [usize; 7]) -> SymbolId {
        SymbolId::B(
            v[0] as u16,
            v[1] as u16,
            v[2] as u16,
            v[3] as u16,
            v[4] as u16,
            v[5] as u16,
            v[6] as u16,
        )
    }

    pub fn param(k: usize) -> SymbolId {
        SymbolId::Param(k as u32)
    }

    pub fn kind(&self) -> SymbolKind {
        match self {
            SymbolId::F(..) => SymbolKind::F,
            SymbolId::R(..) => SymbolKind::R,
            SymbolId::Pv(..) => SymbolKind::Pv,
            SymbolId::D(..) => SymbolKind::D,
            SymbolId::P(..) => SymbolKind::P,
            SymbolId::Q(..) => SymbolKind::Q,
            SymbolId::X(..) => SymbolKind::X,
            SymbolId::Y(..) => SymbolKind::Y,
            SymbolId::A(..) => SymbolKind::A,
            SymbolId::B(..) => SymbolKind::B,
            SymbolId::Param(..) => SymbolKind::Param,
        }
    }

    pub fn labels(&self) -> Vec<usize> {
        match *self {
            SymbolId::F(a, b, c, d, e, f) => {
                vec![a as usize, b as usize, c as usize, d as usize, e as usize, f as usize]
            }
            SymbolId::R(a, b, c) | SymbolId::D(a, b, c) => {
                vec![a as usize, b as usize, c as usize]
            }
            SymbolId::Pv(a) => vec![a as usize],
            SymbolId::P(a, b, c, e, d) | SymbolId::Q(a, b, c, e, d) => {
                vec![a as usize, b as usize, c as usize, e as usize, d as usize]
            }
            SymbolId::X(a, b, c, d, f, g, e)
            | SymbolId::Y(a, b, c, d, f, g, e)
            | SymbolId::A(a, b, c, d, f, g, e)
            | SymbolId::B(a, b, c, d, f, g, e) => vec![
                a as usize, b as usize, c as usize, d as usize, f as usize, g as usize, e as usize,
            ],
            SymbolId::Param(k) => vec![k as usize],
        }
    }
}

impl fmt::Display for SymbolId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let head = match self.kind() {
            SymbolKind::F => "F",
            SymbolKind::R => "R",
            SymbolKind::Pv => "Pv",
            SymbolKind::D => "D",
            SymbolKind::P => "P",
            SymbolKind::Q => "Q",
            SymbolKind::X => "X",
            SymbolKind::Y => "Y",
            SymbolKind::A => "A",
            SymbolKind::B => "B",
            SymbolKind::Param => "z",
        };
        write!(f, "{head}[")?;
        for (i, l) in self.labels().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "]")
    }
}

/// Parses the output of [`SymbolId`]'s `Display` back into a symbol.
pub fn parse_symbol(s: &str) -> Option<SymbolId> {
    let open = s.find('[')?;
    if !s.ends_with(']') {
        return None;
    }
    let head = &s[..open];
    let body = &s[open + 1..s.len() - 1];
    let nums: Vec<usize> = body
        .split(',')
        .map(|t| t.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .ok()?;
    let n7 = |v: &[usize]| -> Option<[usize; 7]> {
        if v.len() == 7 {
            Some([v[0], v[1], v[2], v[3], v[4], v[5], v[6]])
        } else {
            None
        }
    };
    match (head, nums.len()) {
        ("F", 6) => Some(SymbolId::f(nums[0], nums[1], nums[2], nums[3], nums[4], nums[5])),
        ("R", 3) => Some(SymbolId::r(nums[0], nums[1], nums[2])),
        ("Pv", 1) => Some(SymbolId::pv(nums[0])),
        ("D", 3) => Some(SymbolId::d(nums[0], nums[1], nums[2])),
        ("P", 5) => Some(SymbolId::p(nums[0], nums[1], nums[2], nums[3], nums[4])),
        ("Q", 5) => Some(SymbolId::q(nums[0], nums[1], nums[2], nums[3], nums[4])),
        ("X", 7) => Some(SymbolId::x(n7(&nums)?)),
        ("Y", 7) => Some(SymbolId::y(n7(&nums)?)),
        ("A", 7) => Some(SymbolId::a(n7(&nums)?)),
        ("B", 7) => Some(SymbolId::b(n7(&nums)?)),
        ("z", 1) => Some(SymbolId::param(nums[0])),
        _ => None,
    }
}

/// A numeric assignment of values to symbols.  Missing F-symbols are read as
/// zero (solutions list zeros explicitly or omit them); vacuum-trivial
/// symbols never appear and are implied to be `1`.
pub type Assignment = BTreeMap<SymbolId, Cplx>;

/// One monomial of a [`Poly`]: coefficient times a product of variables,
/// referenced by their index in the owning system's variable list.  The
/// exponent list is sorted by variable index and contains no zeros.
#[derive(Clone, Debug)]
pub struct Term {
    pub coeff: Cplx,
    pub pows: Vec<(usize, u32)>,
}

/// A sparse polynomial in the system variables.
#[derive(Clone, Debug, Default)]
pub struct Poly {
    pub terms: Vec<Term>,
}

impl Poly {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sorts terms by exponent list, merges like terms, and drops
    /// coefficients below `tol`.
    pub fn normalize(&mut self, cx: &Ctx, tol: &Real) {
        self.terms.sort_by(|s, t| s.pows.cmp(&t.pows));
        let mut merged: Vec<Term> = Vec::with_capacity(self.terms.len());
        for t in self.terms.drain(..) {
            match merged.last_mut() {
                Some(m) if m.pows == t.pows => m.coeff = m.coeff.add(&t.coeff, cx),
                _ => merged.push(t),
            }
        }
        merged.retain(|t| !t.coeff.is_small(tol, cx));
        self.terms = merged;
    }

    /// Total degree of the highest-degree term.
    pub fn degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|t| t.pows.iter().map(|&(_, k)| k).sum())
            .max()
            .unwrap_or(0)
    }

    /// Evaluates at a positional value vector (indexed like the owning
    /// system's variable list).
    pub fn eval(&self, vals: &[Cplx], cx: &Ctx) -> Cplx {
        let mut acc = Cplx::zero(cx);
        for t in &self.terms {
            let mut m = t.coeff.clone();
            for &(v, k) in &t.pows {
                m = m.mul(&vals[v].powi(k as i64, cx), cx);
            }
            acc = acc.add(&m, cx);
        }
        acc
    }

    /// Renders the polynomial against a variable list, e.g.
    /// `(-1)·F[2,2,2,2,1,1]^2 + (1)`.
    pub fn render(&self, vars: &[SymbolId], cx: &Ctx, sig: usize) -> String {
        if self.terms.is_empty() {
            return String::from("0");
        }
        let mut out = String::new();
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                out.push_str(" + ");
            }
            out.push_str(&format!(
                "({},{})",
                cx.fmt(&t.coeff.re, sig),
                cx.fmt(&t.coeff.im, sig)
            ));
            for &(v, k) in &t.pows {
                out.push_str(&format!("·{}", vars[v]));
                if k > 1 {
                    out.push_str(&format!("^{k}"));
                }
            }
        }
        out
    }

    /// Canonical comparison key: terms of the normalized polynomial scaled
    /// so the leading coefficient is `+1`, rendered at `sig` digits.
    fn key(&self, cx: &Ctx, sig: usize) -> String {
        let mut out = String::new();
        if let Some(lead) = self.terms.first() {
            let inv = lead.coeff.inv(cx);
            for t in &self.terms {
                let c = t.coeff.mul(&inv, cx);
                out.push_str(&format!(
                    "{:?}|{}|{};",
                    t.pows,
                    cx.fmt(&c.re, sig),
                    cx.fmt(&c.im, sig)
                ));
            }
        }
        out
    }
}

/// One monomial of a symbolic expression over [`SymbolId`]s.  Negative
/// exponents denote division; they appear only in derived-symbol recipes.
#[derive(Clone, Debug)]
pub struct STerm {
    pub coeff: Cplx,
    pub pows: Vec<(SymbolId, i32)>,
}

/// Evaluation recipe for a derived symbol: `symbol = Σ terms`.
///
/// Recipes reference only R-variables and derived symbols listed *earlier*
/// in [`PolySystem::definitions`], so a single forward pass evaluates them
/// all.
#[derive(Clone, Debug)]
pub struct Definition {
    pub symbol: SymbolId,
    pub terms: Vec<STerm>,
}

impl Definition {
    /// Evaluates the recipe against `values`, which must already contain
    /// every referenced symbol (vacuum-trivial R-symbols are implied `1`).
    /// Returns `None` if a referenced value is missing.
    pub fn eval(&self, values: &Assignment, cx: &Ctx) -> Option<Cplx> {
        let mut acc = Cplx::zero(cx);
        for t in &self.terms {
            let mut m = t.coeff.clone();
            for &(s, k) in &t.pows {
                let v = match values.get(&s) {
                    Some(v) => v.clone(),
                    None => match s {
                        SymbolId::R(a, b, _) if a == 1 || b == 1 => Cplx::one(cx),
                        _ => return None,
                    },
                };
                m = m.mul(&v.powi(k as i64, cx), cx);
            }
            acc = acc.add(&m, cx);
        }
        Some(acc)
    }
}

/// An F-block `[F_d^{abc}]` scheduled for invertibility: entry `(i, j)` is
/// the symbol with upper index `rows[i]` and lower index `cols[j]`.
#[derive(Clone, Debug)]
pub struct FBlock {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl FBlock {
    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn symbol(&self, i: usize, j: usize) -> SymbolId {
        SymbolId::f(self.a, self.b, self.c, self.d, self.rows[i], self.cols[j])
    }
}

/// A polynomial system over an ordered list of symbol variables.
///
/// Every equation and assumption references declared variables only.
/// `assumptions` are polynomials required to be nonzero; `invertible_groups`
/// lists the F-blocks whose determinant must not vanish; `definitions` are
/// evaluation recipes for derived symbols (not variables).
#[derive(Clone, Debug, Default)]
pub struct PolySystem {
    pub variables: Vec<SymbolId>,
    pub equations: Vec<Poly>,
    pub assumptions: Vec<Poly>,
    pub invertible_groups: Vec<FBlock>,
    pub definitions: Vec<Definition>,
}

impl PolySystem {
    pub fn var_index(&self, s: &SymbolId) -> Option<usize> {
        self.variables.binary_search(s).ok()
    }

    /// Positional value vector for an assignment; missing variables read as
    /// zero.
    pub fn value_vector(&self, a: &Assignment, cx: &Ctx) -> Vec<Cplx> {
        self.variables
            .iter()
            .map(|s| a.get(s).cloned().unwrap_or_else(|| Cplx::zero(cx)))
            .collect()
    }

    /// Largest equation residual at the given assignment.
    pub fn max_residual(&self, a: &Assignment, cx: &Ctx) -> Real {
        let vals = self.value_vector(a, cx);
        let mut worst = cx.zero();
        for eq in &self.equations {
            let r = eq.eval(&vals, cx).abs(cx);
            if cx.lt(&worst, &r) {
                worst = r;
            }
        }
        worst
    }
}

/// Resolves the numeric value of an F-symbol against a solution assignment:
/// zero when inadmissible, one when vacuum-trivial, otherwise the stored
/// value (missing entries read as zero).
pub fn f_value(
    ring: &FusionRing,
    vals: &Assignment,
    cx: &Ctx,
    a: usize,
    b: usize,
    c: usize,
    d: usize,
    e: usize,
    f: usize,
) -> Cplx {
    let n1 = |x: usize, y: usize, z: usize| ring.n(x, y, z) == 1;
    if !(n1(a, b, e) && n1(e, c, d) && n1(b, c, f) && n1(a, f, d)) {
        return Cplx::zero(cx);
    }
    if a == 1 || b == 1 || c == 1 {
        return Cplx::one(cx);
    }
    vals.get(&SymbolId::f(a, b, c, d, e, f))
        .cloned()
        .unwrap_or_else(|| Cplx::zero(cx))
}

/// Resolves the numeric value of an R-symbol: zero when inadmissible, one
/// when an exchanged particle is the vacuum, otherwise the stored value.
pub fn r_value(
    ring: &FusionRing,
    vals: &Assignment,
    cx: &Ctx,
    a: usize,
    b: usize,
    c: usize,
) -> Cplx {
    if ring.n(a, b, c) != 1 {
        return Cplx::zero(cx);
    }
    if a == 1 || b == 1 {
        return Cplx::one(cx);
    }
    vals.get(&SymbolId::r(a, b, c))
        .cloned()
        .unwrap_or_else(|| Cplx::zero(cx))
}

// ---------------------------------------------------------------------------
// Shared generation scaffolding.

struct RingView<'a> {
    ring: &'a FusionRing,
    r: usize,
    ch: Vec<Vec<Vec<usize>>>,
}

impl<'a> RingView<'a> {
    fn new(ring: &'a FusionRing) -> Self {
        let r = ring.rank();
        let mut ch = vec![vec![Vec::new(); r]; r];
        for a in 1..=r {
            for b in 1..=r {
                for c in 1..=r {
                    if ring.n(a, b, c) == 1 {
                        ch[a - 1][b - 1].push(c);
                    }
                }
            }
        }
        RingView { ring, r, ch }
    }

    fn n1(&self, a: usize, b: usize, c: usize) -> bool {
        self.ring.n(a, b, c) == 1
    }

    fn ch(&self, a: usize, b: usize) -> &[usize] {
        &self.ch[a - 1][b - 1]
    }

    fn f_admissible(&self, a: usize, b: usize, c: usize, d: usize, e: usize, f: usize) -> bool {
        self.n1(a, b, e) && self.n1(e, c, d) && self.n1(b, c, f) && self.n1(a, f, d)
    }
}

/// Accumulates normalized, deduplicated equations.
struct EqSink {
    equations: Vec<Poly>,
    seen: BTreeSet<String>,
    sig: usize,
}

impl EqSink {
    fn new(cx: &Ctx) -> Self {
        EqSink {
            equations: Vec::new(),
            seen: BTreeSet::new(),
            sig: (cx.digits() / 2).max(12),
        }
    }

    fn push(&mut self, mut p: Poly, cx: &Ctx, tol: &Real) {
        p.normalize(cx, tol);
        if p.is_zero() {
            return;
        }
        let key = p.key(cx, self.sig);
        if self.seen.insert(key) {
            self.equations.push(p);
        }
    }
}

fn make_term(cx: &Ctx, coeff: Cplx, vars: &[usize]) -> Term {
    let mut pows: Vec<(usize, u32)> = Vec::with_capacity(vars.len());
    let mut sorted = vars.to_vec();
    sorted.sort_unstable();
    for v in sorted {
        match pows.last_mut() {
            Some(p) if p.0 == v => p.1 += 1,
            _ => pows.push((v, 1)),
        }
    }
    let _ = cx;
    Term { coeff, pows }
}

fn monomial_assumption(idx: usize, cx: &Ctx) -> Poly {
    Poly {
        terms: vec![Term {
            coeff: Cplx::one(cx),
            pows: vec![(idx, 1)],
        }],
    }
}

// ---------------------------------------------------------------------------
// Pentagon.

/// Generates the pentagon system of a multiplicity-free fusion ring: the
/// variables are all admissible non-vacuum F-symbols, the equations run over
/// all label tuples for which the left-hand product of two F-symbols is
/// admissible (tuples where only right-hand terms survive are consequences
/// of block invertibility and are not emitted), the snake symbols
/// `F[a,a*,a,a,1,1]` are assumed nonzero, and every non-vacuum F-block is
/// scheduled for invertibility.
pub fn pentagon_system(ring: &FusionRing, cx: &Ctx) -> Result<PolySystem, EqgenError> {
    if ring.multiplicity() > 1 {
        return Err(EqgenError::MultiplicityUnsupported);
    }
    let v = RingView::new(ring);
    let r = v.r;
    let tol = cx.tol();

    let mut variables = Vec::new();
    for a in 2..=r {
        for b in 2..=r {
            for c in 2..=r {
                for d in 1..=r {
                    for &e in v.ch(a, b) {
                        if !v.n1(e, c, d) {
                            continue;
                        }
                        for &f in v.ch(b, c) {
                            if v.n1(a, f, d) {
                                variables.push(SymbolId::f(a, b, c, d, e, f));
                            }
                        }
                    }
                }
            }
        }
    }
    variables.sort_unstable();
    let index: BTreeMap<SymbolId, usize> =
        variables.iter().enumerate().map(|(i, s)| (*s, i)).collect();

    // Resolves an F-symbol occurring in an instance: `None` for a vacuum
    // (constant 1) factor, `Some(i)` for variable `i`.  All symbols reached
    // below are admissible by construction.
    let resolve = |a: usize, b: usize, c: usize, d: usize, e: usize, f: usize| -> Option<usize> {
        debug_assert!(v.f_admissible(a, b, c, d, e, f));
        if a == 1 || b == 1 || c == 1 {
            None
        } else {
            Some(index[&SymbolId::f(a, b, c, d, e, f)])
        }
    };

    let mut sink = EqSink::new(cx);
    let one = Cplx::one(cx);
    let neg = Cplx::int(cx, -1);
    for a in 2..=r {
        for b in 2..=r {
            for c in 2..=r {
                for dd in 2..=r {
                    for &f in v.ch(a, b) {
                        for &l in v.ch(c, dd) {
                            for &k in v.ch(b, l) {
                                for &g in v.ch(f, c) {
                                    for &e in v.ch(g, dd) {
                                        if !v.n1(a, k, e) || !v.n1(f, l, e) {
                                            continue;
                                        }
                                        let mut terms: Vec<Term> = Vec::new();
                                        for &h in v.ch(b, c) {
                                            if v.n1(a, h, g) && v.n1(h, dd, k) {
                                                let mut fac = Vec::new();
                                                for s in [
                                                    resolve(a, b, c, g, f, h),
                                                    resolve(a, h, dd, e, g, k),
                                                    resolve(b, c, dd, k, h, l),
                                                ]
                                                .into_iter()
                                                .flatten()
                                                {
                                                    fac.push(s);
                                                }
                                                terms.push(make_term(cx, one.clone(), &fac));
                                            }
                                        }
                                        if v.n1(f, l, e) {
                                            let mut fac = Vec::new();
                                            for s in [
                                                resolve(f, c, dd, e, g, l),
                                                resolve(a, b, l, e, f, k),
                                            ]
                                            .into_iter()
                                            .flatten()
                                            {
                                                fac.push(s);
                                            }
                                            terms.push(make_term(cx, neg.clone(), &fac));
                                        }
                                        sink.push(Poly { terms }, cx, &tol);
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    let mut invertible_groups = Vec::new();
    for a in 2..=r {
        for b in 2..=r {
            for c in 2..=r {
                for d in 1..=r {
                    let rows: Vec<usize> = v
                        .ch(a, b)
                        .iter()
                        .copied()
                        .filter(|&e| v.n1(e, c, d))
                        .collect();
                    if rows.is_empty() {
                        continue;
                    }
                    let cols: Vec<usize> = v
                        .ch(b, c)
                        .iter()
                        .copied()
                        .filter(|&f| v.n1(a, f, d))
                        .collect();
                    debug_assert_eq!(rows.len(), cols.len());
                    invertible_groups.push(FBlock { a, b, c, d, rows, cols });
                }
            }
        }
    }

    let mut assumptions = Vec::new();
    for a in 2..=r {
        let idx = index[&SymbolId::f(a, ring.dual(a), a, a, 1, 1)];
        assumptions.push(monomial_assumption(idx, cx));
    }

    Ok(PolySystem {
        variables,
        equations: sink.equations,
        assumptions,
        invertible_groups,
        definitions: Vec::new(),
    })
}

// ---------------------------------------------------------------------------
// Hexagon.

/// Generates the hexagon system for a fixed F-symbol solution.  The
/// variables are the R-symbols `R[a,b,c]` with `a, b ≥ 2`; exchanges with
/// the vacuum are substituted as `1`.  With `inverse = false` the equations
/// constrain the braiding directly; with `inverse = true` they constrain its
/// inverse, with all denominators cleared through the nonzero assumptions on
/// the R-variables.
pub fn hexagon_system(ring: &FusionRing, fvals: &Assignment, inverse: bool, cx: &Ctx) -> PolySystem {
    let v = RingView::new(ring);
    let r = v.r;
    let tol = cx.tol();

    let mut variables = Vec::new();
    for a in 2..=r {
        for b in 2..=r {
            for &c in v.ch(a, b) {
                variables.push(SymbolId::r(a, b, c));
            }
        }
    }
    variables.sort_unstable();
    let index: BTreeMap<SymbolId, usize> =
        variables.iter().enumerate().map(|(i, s)| (*s, i)).collect();

    // R-symbol factor: `None` kills the term, `Some(None)` is the constant
    // 1, `Some(Some(i))` multiplies by variable `i`.
    let rfac = |a: usize, b: usize, c: usize| -> Option<Option<usize>> {
        if !v.n1(a, b, c) {
            return None;
        }
        if a == 1 || b == 1 {
            return Some(None);
        }
        Some(Some(index[&SymbolId::r(a, b, c)]))
    };
    let fv = |a, b, c, d, e, f| f_value(ring, fvals, cx, a, b, c, d, e, f);

    let mut sink = EqSink::new(cx);
    for a in 2..=r {
        for b in 2..=r {
            for c in 2..=r {
                for &e in v.ch(a, c) {
                    for &g in v.ch(c, b) {
                        for d in 1..=r {
                            if !(v.n1(e, b, d) && v.n1(a, g, d)) {
                                continue;
                            }
                            let lhs_f = fv(a, c, b, d, e, g);
                            // Channels f with a surviving product of the two
                            // right-hand F-symbols.
                            let mut rhs: Vec<(usize, Cplx)> = Vec::new();
                            for &f in v.ch(a, b) {
                                if !v.n1(c, f, d) {
                                    continue;
                                }
                                let cf = fv(c, a, b, d, e, f).mul(&fv(a, b, c, d, f, g), cx);
                                if !cf.is_small(&tol, cx) {
                                    rhs.push((f, cf));
                                }
                            }
                            let mut terms: Vec<Term> = Vec::new();
                            if !inverse {
                                // R·F·R = Σ_f F·R·F
                                if !lhs_f.is_small(&tol, cx) {
                                    if let (Some(x), Some(y)) = (rfac(c, a, e), rfac(c, b, g)) {
                                        let fac: Vec<usize> =
                                            [x, y].into_iter().flatten().collect();
                                        terms.push(make_term(cx, lhs_f.neg(), &fac));
                                    }
                                }
                                for &(f, ref cf) in &rhs {
                                    if let Some(s) = rfac(c, f, d) {
                                        let fac: Vec<usize> = s.into_iter().collect();
                                        terms.push(make_term(cx, cf.clone(), &fac));
                                    }
                                }
                            } else {
                                // F/(R·R) = Σ_f F·F/R in the reversed-pair
                                // braids, cleared by the product of all
                                // denominators present.
                                let entries: Vec<(Cplx, Option<usize>)> = rhs
                                    .iter()
                                    .filter_map(|&(f, ref cf)| {
                                        rfac(f, c, d).map(|s| (cf.clone(), s))
                                    })
                                    .collect();
                                // Left side picks up every denominator.
                                if !lhs_f.is_small(&tol, cx) {
                                    let fac: Vec<usize> =
                                        entries.iter().filter_map(|&(_, s)| s).collect();
                                    terms.push(make_term(cx, lhs_f.neg(), &fac));
                                }
                                if let (Some(x), Some(y)) = (rfac(a, c, e), rfac(b, c, g)) {
                                    for (pos, &(ref cf, _)) in entries.iter().enumerate() {
                                        let mut fac: Vec<usize> =
                                            [x, y].into_iter().flatten().collect();
                                        for (qos, &(_, s)) in entries.iter().enumerate() {
                                            if qos != pos {
                                                if let Some(i) = s {
                                                    fac.push(i);
                                                }
                                            }
                                        }
                                        terms.push(make_term(cx, cf.clone(), &fac));
                                    }
                                }
                            }
                            sink.push(Poly { terms }, cx, &tol);
                        }
                    }
                }
            }
        }
    }

    let assumptions = (0..variables.len())
        .map(|i| monomial_assumption(i, cx))
        .collect();
    PolySystem {
        variables,
        equations: sink.equations,
        assumptions,
        invertible_groups: Vec::new(),
        definitions: Vec::new(),
    }
}

// ---------------------------------------------------------------------------
// Pivotal.

/// Generates the pivotal system for a fixed F-symbol solution: variables
/// `Pv[a]` for every label, the unit normalization `Pv[1] = 1`, the dual
/// relations `Pv[a]·Pv[a*] = 1`, and for every admissible product channel
/// the relation `Pv[c] = K·Pv[a]·Pv[b]` with `K` the product of the three
/// vacuum-total F-values attached to the triangle `(a, b, c*)`.
pub fn pivotal_system(ring: &FusionRing, fvals: &Assignment, cx: &Ctx) -> PolySystem {
    let v = RingView::new(ring);
    let r = v.r;
    let tol = cx.tol();
    let one = Cplx::one(cx);
    let neg = Cplx::int(cx, -1);

    let variables: Vec<SymbolId> = (1..=r).map(SymbolId::pv).collect();
    let fv = |a, b, c, d, e, f| f_value(ring, fvals, cx, a, b, c, d, e, f);

    let mut sink = EqSink::new(cx);
    // Pv[1] = 1.
    sink.push(
        Poly {
            terms: vec![
                Term { coeff: one.clone(), pows: vec![(0, 1)] },
                Term { coeff: neg.clone(), pows: vec![] },
            ],
        },
        cx,
        &tol,
    );
    // Pv[a]·Pv[a*] = 1.
    for a in 1..=r {
        let s = ring.dual(a);
        sink.push(
            Poly {
                terms: vec![
                    make_term(cx, one.clone(), &[a - 1, s - 1]),
                    Term { coeff: neg.clone(), pows: vec![] },
                ],
            },
            cx,
            &tol,
        );
    }
    // Pv[c] = K·Pv[a]·Pv[b] around each admissible triangle.
    for a in 2..=r {
        for b in 2..=r {
            for &c in v.ch(a, b) {
                let cs = ring.dual(c);
                let k = fv(a, b, cs, 1, c, ring.dual(a))
                    .mul(&fv(b, cs, a, 1, ring.dual(a), ring.dual(b)), cx)
                    .mul(&fv(cs, a, b, 1, ring.dual(b), c), cx);
                let mut terms = vec![Term { coeff: one.clone(), pows: vec![(c - 1, 1)] }];
                if !k.is_small(&tol, cx) {
                    terms.push(make_term(cx, k.neg(), &[a - 1, b - 1]));
                }
                sink.push(Poly { terms }, cx, &tol);
            }
        }
    }

    let assumptions = (0..variables.len())
        .map(|i| monomial_assumption(i, cx))
        .collect();
    PolySystem {
        variables,
        equations: sink.equations,
        assumptions,
        invertible_groups: Vec::new(),
        definitions: Vec::new(),
    }
}

// ---------------------------------------------------------------------------
// Graph-braid systems.

/// Symbolic polynomial over `SymbolId`s with integer (possibly negative)
/// exponents; used internally to assemble derived-symbol recipes and to
/// clear denominators in consistency rows.
type SPoly = Vec<STerm>;

fn sp_normalize(p: &mut SPoly, cx: &Ctx, tol: &Real) {
    for t in p.iter_mut() {
        t.pows.retain(|&(_, k)| k != 0);
        t.pows.sort_unstable_by(|x, y| x.0.cmp(&y.0));
    }
    p.sort_by(|s, t| s.pows.cmp(&t.pows));
    let mut merged: SPoly = Vec::with_capacity(p.len());
    for t in p.drain(..) {
        match merged.last_mut() {
            Some(m) if m.pows == t.pows => m.coeff = m.coeff.add(&t.coeff, cx),
            _ => merged.push(t),
        }
    }
    merged.retain(|t| !t.coeff.is_small(tol, cx));
    *p = merged;
}

fn sterm_mul(a: &STerm, b: &STerm, cx: &Ctx) -> STerm {
    let mut pows = a.pows.clone();
    for &(s, k) in &b.pows {
        match pows.iter_mut().find(|p| p.0 == s) {
            Some(p) => p.1 += k,
            None => pows.push((s, k)),
        }
    }
    pows.retain(|&(_, k)| k != 0);
    pows.sort_unstable_by(|x, y| x.0.cmp(&y.0));
    STerm { coeff: a.coeff.mul(&b.coeff, cx), pows }
}

fn sp_mul(a: &SPoly, b: &SPoly, cx: &Ctx, tol: &Real) -> SPoly {
    let mut out: SPoly = Vec::with_capacity(a.len() * b.len());
    for s in a {
        for t in b {
            out.push(sterm_mul(s, t, cx));
        }
    }
    sp_normalize(&mut out, cx, tol);
    out
}

fn sp_one(cx: &Ctx) -> SPoly {
    vec![STerm { coeff: Cplx::one(cx), pows: vec![] }]
}

/// A ratio of symbolic polynomials.
#[derive(Clone, Debug)]
struct SFrac {
    num: SPoly,
    den: SPoly,
}

impl SFrac {
    fn zero() -> SFrac {
        SFrac { num: Vec::new(), den: Vec::new() }
    }

    fn is_zero(&self) -> bool {
        self.num.is_empty()
    }
}

fn sf_make(num: SPoly, den: SPoly, cx: &Ctx, tol: &Real) -> SFrac {
    let mut f = SFrac { num, den };
    if f.num.is_empty() {
        return SFrac::zero();
    }
    // Factor out shared monomial content and rescale so the denominator's
    // leading coefficient is 1; keeps intermediate expressions small.
    let mut mins: BTreeMap<SymbolId, i32> = BTreeMap::new();
    let mut first = true;
    for t in f.num.iter().chain(f.den.iter()) {
        if first {
            for &(s, k) in &t.pows {
                mins.insert(s, k);
            }
            first = false;
        } else {
            for (s, m) in mins.iter_mut() {
                let k = t.pows.iter().find(|p| p.0 == *s).map(|p| p.1).unwrap_or(0);
                *m = (*m).min(k);
            }
            mins.retain(|_, m| *m != 0);
        }
    }
    if !mins.is_empty() {
        let shift = |p: &mut SPoly| {
            for t in p.iter_mut() {
                for (&s, &m) in mins.iter() {
                    match t.pows.iter_mut().find(|q| q.0 == s) {
                        Some(q) => q.1 -= m,
                        None => t.pows.push((s, -m)),
                    }
                }
                t.pows.retain(|&(_, k)| k != 0);
                t.pows.sort_unstable_by(|x, y| x.0.cmp(&y.0));
            }
        };
        shift(&mut f.num);
        shift(&mut f.den);
        sp_normalize(&mut f.num, cx, tol);
        sp_normalize(&mut f.den, cx, tol);
    }
    if let Some(lead) = f.den.first() {
        let inv = lead.coeff.inv(cx);
        for t in f.num.iter_mut() {
            t.coeff = t.coeff.mul(&inv, cx);
        }
        for t in f.den.iter_mut() {
            t.coeff = t.coeff.mul(&inv, cx);
        }
    }
    f
}

fn sf_add(a: &SFrac, b: &SFrac, cx: &Ctx, tol: &Real) -> SFrac {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    let mut num = sp_mul(&a.num, &b.den, cx, tol);
    let other = sp_mul(&b.num, &a.den, cx, tol);
    num.extend(other);
    let mut num = num;
    sp_normalize(&mut num, cx, tol);
    let den = sp_mul(&a.den, &b.den, cx, tol);
    sf_make(num, den, cx, tol)
}

fn sf_mul(a: &SFrac, b: &SFrac, cx: &Ctx, tol: &Real) -> SFrac {
    if a.is_zero() || b.is_zero() {
        return SFrac::zero();
    }
    sf_make(
        sp_mul(&a.num, &b.num, cx, tol),
        sp_mul(&a.den, &b.den, cx, tol),
        cx,
        tol,
    )
}

fn sf_inv(a: &SFrac) -> SFrac {
    SFrac { num: a.den.clone(), den: a.num.clone() }
}

fn sf_scalar(c: Cplx, cx: &Ctx) -> SFrac {
    SFrac {
        num: vec![STerm { coeff: c, pows: vec![] }],
        den: vec![STerm { coeff: Cplx::one(cx), pows: vec![] }],
    }
}

struct GraphCtx<'a> {
    v: RingView<'a>,
    fvals: &'a Assignment,
    // (a, b, c, d) → (rows = upper labels, cols = lower labels, inverse).
    inv: BTreeMap<(usize, usize, usize, usize), (Vec<usize>, Vec<usize>, CMat)>,
    tol: Real,
}

impl<'a> GraphCtx<'a> {
    fn build(ring: &'a FusionRing, fvals: &'a Assignment, cx: &Ctx) -> Result<Self, EqgenError> {
        if !ring.is_commutative() {
            return Err(EqgenError::NonCommutative);
        }
        let v = RingView::new(ring);
        let r = v.r;
        let mut inv = BTreeMap::new();
        for a in 1..=r {
            for b in 1..=r {
                for c in 1..=r {
                    for d in 1..=r {
                        let rows: Vec<usize> = v
                            .ch(a, b)
                            .iter()
                            .copied()
                            .filter(|&e| v.n1(e, c, d))
                            .collect();
                        if rows.is_empty() {
                            continue;
                        }
                        let cols: Vec<usize> = v
                            .ch(b, c)
                            .iter()
                            .copied()
                            .filter(|&f| v.n1(a, f, d))
                            .collect();
                        debug_assert_eq!(rows.len(), cols.len());
                        let m: CMat = rows
                            .iter()
                            .map(|&e| {
                                cols.iter()
                                    .map(|&f| f_value(ring, fvals, cx, a, b, c, d, e, f))
                                    .collect()
                            })
                            .collect();
                        let mi = cmat_inverse(&m, cx).ok_or(EqgenError::SingularBlock)?;
                        inv.insert((a, b, c, d), (rows, cols, mi));
                    }
                }
            }
        }
        Ok(GraphCtx { v, fvals, inv, tol: cx.tol() })
    }

    fn fval(&self, cx: &Ctx, a: usize, b: usize, c: usize, d: usize, e: usize, f: usize) -> Cplx {
        f_value(self.v.ring, self.fvals, cx, a, b, c, d, e, f)
    }

    /// Entry of the inverse block: upper index `sup` runs over the lower
    /// range of the forward block, lower index `sub` over its upper range.
    fn ftil(
        &self,
        cx: &Ctx,
        a: usize,
        b: usize,
        c: usize,
        d: usize,
        sup: usize,
        sub: usize,
    ) -> Cplx {
        match self.inv.get(&(a, b, c, d)) {
            None => Cplx::zero(cx),
            Some((rows, cols, mi)) => {
                let i = match cols.iter().position(|&f| f == sup) {
                    Some(i) => i,
                    None => return Cplx::zero(cx),
                };
                let j = match rows.iter().position(|&e| e == sub) {
                    Some(j) => j,
                    None => return Cplx::zero(cx),
                };
                mi[i][j].clone()
            }
        }
    }
}

/// Generates the braid-consistency system of the given graph for a fixed
/// F-symbol solution.  See the module docs for the variable conventions;
/// rows of the trijunction move identities with unequal free charges are
/// emitted as polynomial constraints on the R-variables (denominators
/// cleared), while the diagonal rows are recorded as derived-symbol
/// recipes in `definitions`.
pub fn graphbraid_system(
    ring: &FusionRing,
    fvals: &Assignment,
    kind: GraphKind,
    cx: &Ctx,
) -> Result<PolySystem, EqgenError> {
    let g = GraphCtx::build(ring, fvals, cx)?;
    let r = g.v.r;
    let tol = g.tol.clone();

    let mut r_vars = Vec::new();
    for a in 2..=r {
        for b in 2..=r {
            for &c in g.v.ch(a, b) {
                r_vars.push(SymbolId::r(a, b, c));
            }
        }
    }
    let mut d_vars = Vec::new();
    for a in 1..=r {
        for b in 2..=r {
            for &c in g.v.ch(a, b) {
                d_vars.push(SymbolId::d(a, b, c));
            }
        }
    }

    let mut variables: Vec<SymbolId> = match kind {
        GraphKind::Circle => d_vars.clone(),
        GraphKind::Tri3 | GraphKind::Tri4 => r_vars.clone(),
        GraphKind::Lollipop => {
            let mut vs = r_vars.clone();
            vs.extend(d_vars.iter().copied());
            vs
        }
    };
    variables.sort_unstable();
    let index: BTreeMap<SymbolId, usize> =
        variables.iter().enumerate().map(|(i, s)| (*s, i)).collect();

    let mut sink = EqSink::new(cx);
    let mut definitions: Vec<Definition> = Vec::new();
    let mut extra_assumptions: Vec<SPoly> = Vec::new();

    if matches!(kind, GraphKind::Tri3 | GraphKind::Tri4 | GraphKind::Lollipop) {
        generate_trijunction(
            &g, cx, &tol, &index, kind, &mut sink, &mut definitions, &mut extra_assumptions,
        );
    }
    if matches!(kind, GraphKind::Circle | GraphKind::Lollipop) {
        generate_circle(&g, cx, &tol, &index, &mut sink);
    }

    let mut assumptions: Vec<Poly> = (0..variables.len())
        .map(|i| monomial_assumption(i, cx))
        .collect();
    for sp in extra_assumptions {
        if sp.len() > 1 {
            let mut p = spoly_to_poly(&sp, &index);
            p.normalize(cx, &tol);
            if !p.is_zero() && p.terms.len() > 1 {
                assumptions.push(p);
            }
        }
    }

    Ok(PolySystem {
        variables,
        equations: sink.equations,
        assumptions,
        invertible_groups: Vec::new(),
        definitions,
    })
}

fn spoly_to_poly(sp: &SPoly, index: &BTreeMap<SymbolId, usize>) -> Poly {
    let terms = sp
        .iter()
        .map(|t| {
            let mut pows: Vec<(usize, u32)> = t
                .pows
                .iter()
                .map(|&(s, k)| {
                    debug_assert!(k > 0, "cleared polynomial has negative exponent");
                    (index[&s], k as u32)
                })
                .collect();
            pows.sort_unstable();
            Term { coeff: t.coeff.clone(), pows }
        })
        .collect();
    Poly { terms }
}

/// Fraction form of an R-symbol: zero if inadmissible, one for vacuum
/// exchanges, else the symbol itself.
fn r_frac(g: &GraphCtx, cx: &Ctx, a: usize, b: usize, c: usize, power: i32) -> Option<SFrac> {
    if !g.v.n1(a, b, c) {
        return None;
    }
    if a == 1 || b == 1 {
        return Some(sf_scalar(Cplx::one(cx), cx));
    }
    let term = STerm { coeff: Cplx::one(cx), pows: vec![(SymbolId::r(a, b, c), power)] };
    let (num, den) = if power >= 0 {
        (vec![term], sp_one(cx))
    } else {
        (
            sp_one(cx),
            vec![STerm { coeff: Cplx::one(cx), pows: vec![(SymbolId::r(a, b, c), -power)] }],
        )
    };
    Some(SFrac { num, den })
}

/// Fraction form of a trijunction symbol `P`/`Q` with the vacuum reductions
/// applied: a third-particle vacuum collapses it to an R-symbol, a vacuum
/// exchanged particle to 1; otherwise the recorded fraction is used.
fn pq_frac(
    g: &GraphCtx,
    cx: &Ctx,
    fracs: &BTreeMap<SymbolId, SFrac>,
    sym: SymbolId,
) -> Option<SFrac> {
    let l = sym.labels();
    let (t1, t2, t3, e, d) = (l[0], l[1], l[2], l[3], l[4]);
    if !(g.v.n1(t1, t2, e) && g.v.n1(e, t3, d)) {
        return None;
    }
    if t3 == 1 {
        return r_frac(g, cx, t1, t2, e, 1);
    }
    if t1 == 1 || t2 == 1 {
        return Some(sf_scalar(Cplx::one(cx), cx));
    }
    fracs.get(&sym).cloned()
}

#[allow(clippy::too_many_arguments)]
fn generate_trijunction(
    g: &GraphCtx,
    cx: &Ctx,
    tol: &Real,
    index: &BTreeMap<SymbolId, usize>,
    kind: GraphKind,
    sink: &mut EqSink,
    definitions: &mut Vec<Definition>,
    extra_assumptions: &mut Vec<SPoly>,
) {
    let r = g.v.r;
    // Recipes for the three-particle exchange symbols, and their cleared
    // fraction forms for substitution into the four-particle rows.
    let mut recipes_p: Vec<(SymbolId, Vec<STerm>)> = Vec::new();
    let mut recipes_q: Vec<(SymbolId, Vec<STerm>)> = Vec::new();
    let mut fracs: BTreeMap<SymbolId, SFrac> = BTreeMap::new();

    // First trijunction exchange: parked on the first free edge.
    //
    //   P[c,a,b,e,d]·δ(e,e') = Σ_{f,g} F̃(a,c,b;d)[g,e'] · F(c,a,b;d)[e,f]
    //                           · R[c,f,d] · F(a,b,c;d)[f,g] / R[c,b,g]
    for a in 2..=r {
        for b in 2..=r {
            for c in 2..=r {
                for d in 1..=r {
                    let charges: Vec<usize> = g
                        .v
                        .ch(c, a)
                        .iter()
                        .copied()
                        .filter(|&x| g.v.n1(x, b, d))
                        .collect();
                    if charges.is_empty() {
                        continue;
                    }
                    for &e in &charges {
                        for &ep in &charges {
                            // Terms indexed by (f, g) with their scalar parts.
                            let mut parts: Vec<(usize, usize, Cplx)> = Vec::new();
                            let mut gset: Vec<usize> = Vec::new();
                            for &f in g.v.ch(a, b) {
                                if !g.v.n1(c, f, d) {
                                    continue;
                                }
                                for &gg in g.v.ch(b, c) {
                                    if !g.v.n1(a, gg, d) {
                                        continue;
                                    }
                                    let k = g
                                        .ftil(cx, a, c, b, d, gg, ep)
                                        .mul(&g.fval(cx, c, a, b, d, e, f), cx)
                                        .mul(&g.fval(cx, a, b, c, d, f, gg), cx);
                                    if k.is_small(tol, cx) {
                                        continue;
                                    }
                                    if !gset.contains(&gg) {
                                        gset.push(gg);
                                    }
                                    parts.push((f, gg, k));
                                }
                            }
                            if e == ep {
                                let mut terms: Vec<STerm> = Vec::new();
                                for &(f, gg, ref k) in &parts {
                                    let mut pows: Vec<(SymbolId, i32)> = Vec::new();
                                    if f != 1 {
                                        pows.push((SymbolId::r(c, f, d), 1));
                                    }
                                    pows.push((SymbolId::r(c, b, gg), -1));
                                    pows.sort_unstable_by(|x, y| x.0.cmp(&y.0));
                                    terms.push(STerm { coeff: k.clone(), pows });
                                }
                                if !terms.is_empty() {
                                    recipes_p.push((SymbolId::p(c, a, b, e, d), terms));
                                }
                            } else {
                                // Consistency row: clear all R[c,b,g] present.
                                let mut terms: Vec<Term> = Vec::new();
                                for &(f, gg, ref k) in &parts {
                                    let mut fac: Vec<usize> = Vec::new();
                                    if f != 1 {
                                        fac.push(index[&SymbolId::r(c, f, d)]);
                                    }
                                    for &go in &gset {
                                        if go != gg {
                                            fac.push(index[&SymbolId::r(c, b, go)]);
                                        }
                                    }
                                    terms.push(make_term(cx, k.clone(), &fac));
                                }
                                sink.push(Poly { terms }, cx, tol);
                            }
                        }
                    }
                }
            }
        }
    }

    // Second trijunction exchange: parked on the second free edge.
    //
    //   Q[b,a,c,e,d]·δ(e,e') = Σ_{f,g} F(b,a,c;d)[e',g] · F̃(b,c,a;d)[g,f]
    //                           · R[f,a,d] · F̃(a,b,c;d)[f,e] / R[c,a,g]
    for a in 2..=r {
        for b in 2..=r {
            for c in 2..=r {
                for d in 1..=r {
                    let charges: Vec<usize> = g
                        .v
                        .ch(b, a)
                        .iter()
                        .copied()
                        .filter(|&x| g.v.n1(x, c, d))
                        .collect();
                    if charges.is_empty() {
                        continue;
                    }
                    for &e in &charges {
                        for &ep in &charges {
                            let mut parts: Vec<(usize, usize, Cplx)> = Vec::new();
                            let mut gset: Vec<usize> = Vec::new();
                            for &f in g.v.ch(b, c) {
                                if !g.v.n1(f, a, d) {
                                    continue;
                                }
                                for &gg in g.v.ch(a, c) {
                                    if !g.v.n1(b, gg, d) {
                                        continue;
                                    }
                                    let k = g
                                        .fval(cx, b, a, c, d, ep, gg)
                                        .mul(&g.ftil(cx, b, c, a, d, gg, f), cx)
                                        .mul(&g.ftil(cx, a, b, c, d, f, e), cx);
                                    if k.is_small(tol, cx) {
                                        continue;
                                    }
                                    if !gset.contains(&gg) {
                                        gset.push(gg);
                                    }
                                    parts.push((f, gg, k));
                                }
                            }
                            if e == ep {
                                let mut terms: Vec<STerm> = Vec::new();
                                for &(f, gg, ref k) in &parts {
                                    let mut pows: Vec<(SymbolId, i32)> = Vec::new();
                                    if f != 1 {
                                        pows.push((SymbolId::r(f, a, d), 1));
                                    }
                                    pows.push((SymbolId::r(c, a, gg), -1));
                                    pows.sort_unstable_by(|x, y| x.0.cmp(&y.0));
                                    terms.push(STerm { coeff: k.clone(), pows });
                                }
                                if !terms.is_empty() {
                                    recipes_q.push((SymbolId::q(b, a, c, e, d), terms));
                                }
                            } else {
                                let mut terms: Vec<Term> = Vec::new();
                                for &(f, gg, ref k) in &parts {
                                    let mut fac: Vec<usize> = Vec::new();
                                    if f != 1 {
                                        fac.push(index[&SymbolId::r(f, a, d)]);
                                    }
                                    for &go in &gset {
                                        if go != gg {
                                            fac.push(index[&SymbolId::r(c, a, go)]);
                                        }
                                    }
                                    terms.push(make_term(cx, k.clone(), &fac));
                                }
                                sink.push(Poly { terms }, cx, tol);
                            }
                        }
                    }
                }
            }
        }
    }

    // Cleared fraction forms of the recipes, for substitution below.
    for (sym, terms) in recipes_p.iter().chain(recipes_q.iter()) {
        let mut acc = SFrac::zero();
        for t in terms {
            let mut f = sf_scalar(t.coeff.clone(), cx);
            for &(s, k) in &t.pows {
                let rf = match s {
                    SymbolId::R(a, b, c) => {
                        r_frac(g, cx, a as usize, b as usize, c as usize, k)
                    }
                    _ => unreachable!("trijunction recipes reference R-symbols only"),
                };
                match rf {
                    None => {
                        f = SFrac::zero();
                        break;
                    }
                    Some(rf) => f = sf_mul(&f, &rf, cx, tol),
                }
            }
            acc = sf_add(&acc, &f, cx, tol);
        }
        fracs.insert(*sym, acc);
    }

    for (sym, terms) in recipes_p {
        definitions.push(Definition { symbol: sym, terms });
    }
    for (sym, terms) in recipes_q {
        definitions.push(Definition { symbol: sym, terms });
    }

    match kind {
        GraphKind::Lollipop => {
            // The stick exchange collapses to R: for every recorded P-symbol
            // impose P[t1,t2,t3,e,d] = R[t1,t2,e], cleared.
            let psyms: Vec<SymbolId> = fracs
                .keys()
                .copied()
                .filter(|s| s.kind() == SymbolKind::P)
                .collect();
            for sym in psyms {
                let l = sym.labels();
                let frac = fracs[&sym].clone();
                let rsub = match r_frac(g, cx, l[0], l[1], l[3], 1) {
                    Some(f) => f,
                    None => continue,
                };
                // frac - rsub = 0  →  frac.num·rsub.den − rsub.num·frac.den = 0
                let mut lhs = sp_mul(&frac.num, &rsub.den, cx, tol);
                let mut rhs = sp_mul(&rsub.num, &frac.den, cx, tol);
                for t in rhs.iter_mut() {
                    t.coeff = t.coeff.neg();
                }
                lhs.extend(rhs.drain(..));
                sp_normalize(&mut lhs, cx, tol);
                sink.push(spoly_to_poly(&lhs, index), cx, tol);
            }
        }
        GraphKind::Tri4 => {
            generate_tri4(g, cx, tol, index, &mut fracs, sink, definitions, extra_assumptions);
        }
        _ => {}
    }
}

/// Emits a consistency row given as a sum of fractions: pushes the cleared
/// numerator and records any non-monomial denominator as an assumption.
fn push_frac_row(
    row: SFrac,
    index: &BTreeMap<SymbolId, usize>,
    sink: &mut EqSink,
    extra_assumptions: &mut Vec<SPoly>,
    cx: &Ctx,
    tol: &Real,
) {
    if row.is_zero() {
        return;
    }
    sink.push(spoly_to_poly(&row.num, index), cx, tol);
    if row.den.len() > 1 {
        extra_assumptions.push(row.den);
    }
}

#[allow(clippy::too_many_arguments)]
fn generate_tri4(
    g: &GraphCtx,
    cx: &Ctx,
    tol: &Real,
    index: &BTreeMap<SymbolId, usize>,
    fracs: &mut BTreeMap<SymbolId, SFrac>,
    sink: &mut EqSink,
    definitions: &mut Vec<Definition>,
    extra_assumptions: &mut Vec<SPoly>,
) {
    let r = g.v.r;

    // Exchange with the far pair parked on one edge, composite channel l:
    //
    //   X[b,a,c,d,f,g,e]·δ(g,g') = Σ_l F(f,c,d;e)[g,l] · P[b,a,l,f,e]
    //                               · F̃(f,c,d;e)[l,g']
    // and the same with Q giving Y.  A vacuum l collapses P/Q to R[b,a,f].
    let mut recipes_x: Vec<(SymbolId, Vec<STerm>)> = Vec::new();
    let mut recipes_y: Vec<(SymbolId, Vec<STerm>)> = Vec::new();
    for b in 2..=r {
        for a in 2..=r {
            for c in 2..=r {
                for d in 2..=r {
                    for e in 1..=r {
                        for &f in g.v.ch(b, a) {
                            let gs: Vec<usize> = g
                                .v
                                .ch(f, c)
                                .iter()
                                .copied()
                                .filter(|&x| g.v.n1(x, d, e))
                                .collect();
                            if gs.is_empty() {
                                continue;
                            }
                            for &gg in &gs {
                                for &gp in &gs {
                                    let mut parts: Vec<(usize, Cplx)> = Vec::new();
                                    for &l in g.v.ch(c, d) {
                                        if !g.v.n1(f, l, e) {
                                            continue;
                                        }
                                        let k = g
                                            .fval(cx, f, c, d, e, gg, l)
                                            .mul(&g.ftil(cx, f, c, d, e, l, gp), cx);
                                        if !k.is_small(tol, cx) {
                                            parts.push((l, k));
                                        }
                                    }
                                    for (which, recipes) in
                                        [(SymbolKind::P, &mut recipes_x), (SymbolKind::Q, &mut recipes_y)]
                                    {
                                        let hold = |l: usize| -> SymbolId {
                                            if which == SymbolKind::P {
                                                SymbolId::p(b, a, l, f, e)
                                            } else {
                                                SymbolId::q(b, a, l, f, e)
                                            }
                                        };
                                        if gg == gp {
                                            let terms: Vec<STerm> = parts
                                                .iter()
                                                .map(|&(l, ref k)| STerm {
                                                    coeff: k.clone(),
                                                    pows: vec![(
                                                        if l == 1 {
                                                            SymbolId::r(b, a, f)
                                                        } else {
                                                            hold(l)
                                                        },
                                                        1,
                                                    )],
                                                })
                                                .collect();
                                            if !terms.is_empty() {
                                                let sym = if which == SymbolKind::P {
                                                    SymbolId::x([b, a, c, d, f, gg, e])
                                                } else {
                                                    SymbolId::y([b, a, c, d, f, gg, e])
                                                };
                                                recipes.push((sym, terms));
                                            }
                                        } else {
                                            let mut row = SFrac::zero();
                                            for &(l, ref k) in &parts {
                                                let pf = pq_frac(g, cx, fracs, hold(l));
                                                if let Some(pf) = pf {
                                                    let t =
                                                        sf_mul(&sf_scalar(k.clone(), cx), &pf, cx, tol);
                                                    row = sf_add(&row, &t, cx, tol);
                                                }
                                            }
                                            push_frac_row(
                                                row, index, sink, extra_assumptions, cx, tol,
                                            );
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    // Parking on distinct edges, second ordering: driven by the two
    // trijunction exchanges around the full four-particle tree.
    //
    //   B[c,a,b,d,n,g,e]·δ(n,n')·δ(g,g') =
    //     Σ_{f,h,k} F(c,a,b;g)[n,f] · Q[c,f,d,g,e] · F(a,b,c;g)[f,h]
    //               · F(a,h,d;e)[g,k] / Q[c,b,d,h,k]
    //               · F̃(a,h,d;e)[k,g'] · F̃(a,c,b;g')[h,n']
    let mut recipes_b: Vec<(SymbolId, Vec<STerm>)> = Vec::new();
    for c in 2..=r {
        for a in 2..=r {
            for b in 2..=r {
                for d in 2..=r {
                    for e in 1..=r {
                        let pairs: Vec<(usize, usize)> = {
                            let mut ps = Vec::new();
                            for &n in g.v.ch(c, a) {
                                for &gg in g.v.ch(n, b) {
                                    if g.v.n1(gg, d, e) {
                                        ps.push((n, gg));
                                    }
                                }
                            }
                            ps
                        };
                        for &(n, gg) in &pairs {
                            for &(np, gp) in &pairs {
                                let mut terms_sym: Vec<STerm> = Vec::new();
                                let mut row = SFrac::zero();
                                let diag = (n, gg) == (np, gp);
                                for &f in g.v.ch(a, b) {
                                    if !g.v.n1(c, f, gg) {
                                        continue;
                                    }
                                    for &h in g.v.ch(b, c) {
                                        if !g.v.n1(a, h, gg) {
                                            continue;
                                        }
                                        for &k in g.v.ch(h, d) {
                                            if !g.v.n1(a, k, e) {
                                                continue;
                                            }
                                            let coeff = g
                                                .fval(cx, c, a, b, gg, n, f)
                                                .mul(&g.fval(cx, a, b, c, gg, f, h), cx)
                                                .mul(&g.fval(cx, a, h, d, e, gg, k), cx)
                                                .mul(&g.ftil(cx, a, h, d, e, k, gp), cx)
                                                .mul(&g.ftil(cx, a, c, b, gp, h, np), cx);
                                            if coeff.is_small(tol, cx) {
                                                continue;
                                            }
                                            let qnum = SymbolId::q(c, f, d, gg, e);
                                            let qden = SymbolId::q(c, b, d, h, k);
                                            if diag {
                                                let mut pows: Vec<(SymbolId, i32)> = Vec::new();
                                                if f == 1 {
                                                    // Q with a vacuum particle is 1.
                                                } else {
                                                    pows.push((qnum, 1));
                                                }
                                                pows.push((qden, -1));
                                                pows.sort_unstable_by(|x2, y2| x2.0.cmp(&y2.0));
                                                terms_sym.push(STerm { coeff, pows });
                                            } else {
                                                let fq = match pq_frac(g, cx, fracs, qnum) {
                                                    Some(fq) => fq,
                                                    None => continue,
                                                };
                                                let fd = match pq_frac(g, cx, fracs, qden) {
                                                    Some(fd) => fd,
                                                    None => continue,
                                                };
                                                if fd.is_zero() {
                                                    continue;
                                                }
                                                let t = sf_mul(
                                                    &sf_mul(&sf_scalar(coeff.clone(), cx), &fq, cx, tol),
                                                    &sf_inv(&fd),
                                                    cx,
                                                    tol,
                                                );
                                                row = sf_add(&row, &t, cx, tol);
                                            }
                                        }
                                    }
                                }
                                if diag {
                                    if !terms_sym.is_empty() {
                                        recipes_b
                                            .push((SymbolId::b([c, a, b, d, n, gg, e]), terms_sym));
                                    }
                                } else {
                                    push_frac_row(row, index, sink, extra_assumptions, cx, tol);
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    // Fraction forms of the B-symbols for the final family of rows.
    let mut bfracs: BTreeMap<SymbolId, SFrac> = BTreeMap::new();
    for (sym, terms) in &recipes_b {
        let mut acc = SFrac::zero();
        for t in terms {
            let mut f = sf_scalar(t.coeff.clone(), cx);
            let mut dead = false;
            for &(s, k) in &t.pows {
                let part = match pq_frac(g, cx, fracs, s) {
                    Some(p) => p,
                    None => {
                        dead = true;
                        break;
                    }
                };
                let part = if k < 0 { sf_inv(&part) } else { part };
                if part.num.is_empty() && k >= 0 {
                    dead = true;
                    break;
                }
                f = sf_mul(&f, &part, cx, tol);
            }
            if !dead {
                acc = sf_add(&acc, &f, cx, tol);
            }
        }
        bfracs.insert(*sym, acc);
    }

    // Parking on distinct edges, first ordering: conjugate of B by the
    // exchange of the far pair.
    //
    //   A[b,a,d,c,f,j,e]·δ(j,j') =
    //     Σ_{g,l,l'} F̃(f,d,c;e)[l',j'] / R[d,c,l'] · F(f,d,c;e)[j,l]
    //                · R[d,c,l] · F̃(f,c,d;e)[l,g] · B[b,a,c,d,f,g,e]
    //                · F(f,c,d;e)[g,l']
    let mut recipes_a: Vec<(SymbolId, Vec<STerm>)> = Vec::new();
    for b in 2..=r {
        for a in 2..=r {
            for d in 2..=r {
                for c in 2..=r {
                    for e in 1..=r {
                        for &f in g.v.ch(b, a) {
                            let js: Vec<usize> = g
                                .v
                                .ch(f, d)
                                .iter()
                                .copied()
                                .filter(|&x| g.v.n1(x, c, e))
                                .collect();
                            if js.is_empty() {
                                continue;
                            }
                            for &j in &js {
                                for &jp in &js {
                                    let diag = j == jp;
                                    let mut terms_sym: Vec<STerm> = Vec::new();
                                    let mut row = SFrac::zero();
                                    for &gg in g.v.ch(f, c) {
                                        if !g.v.n1(gg, d, e) {
                                            continue;
                                        }
                                        for &l in g.v.ch(d, c) {
                                            if !g.v.n1(f, l, e) {
                                                continue;
                                            }
                                            for &lp in g.v.ch(d, c) {
                                                if !g.v.n1(f, lp, e) {
                                                    continue;
                                                }
                                                let coeff = g
                                                    .ftil(cx, f, d, c, e, lp, jp)
                                                    .mul(&g.fval(cx, f, d, c, e, j, l), cx)
                                                    .mul(&g.ftil(cx, f, c, d, e, l, gg), cx)
                                                    .mul(&g.fval(cx, f, c, d, e, gg, lp), cx);
                                                if coeff.is_small(tol, cx) {
                                                    continue;
                                                }
                                                let bsym = SymbolId::b([b, a, c, d, f, gg, e]);
                                                if diag {
                                                    let mut pows: Vec<(SymbolId, i32)> =
                                                        vec![(bsym, 1)];
                                                    if l != lp {
                                                        pows.push((SymbolId::r(d, c, l), 1));
                                                        pows.push((SymbolId::r(d, c, lp), -1));
                                                    }
                                                    pows.sort_unstable_by(|x2, y2| {
                                                        x2.0.cmp(&y2.0)
                                                    });
                                                    terms_sym.push(STerm { coeff, pows });
                                                } else {
                                                    let bf = match bfracs.get(&bsym) {
                                                        Some(bf) => bf.clone(),
                                                        None => continue,
                                                    };
                                                    let mut t =
                                                        sf_mul(&sf_scalar(coeff.clone(), cx), &bf, cx, tol);
                                                    if let Some(rf) =
                                                        r_frac(g, cx, d, c, l, 1)
                                                    {
                                                        t = sf_mul(&t, &rf, cx, tol);
                                                    } else {
                                                        continue;
                                                    }
                                                    if let Some(rf) =
                                                        r_frac(g, cx, d, c, lp, -1)
                                                    {
                                                        t = sf_mul(&t, &rf, cx, tol);
                                                    } else {
                                                        continue;
                                                    }
                                                    row = sf_add(&row, &t, cx, tol);
                                                }
                                            }
                                        }
                                    }
                                    if diag {
                                        if !terms_sym.is_empty() {
                                            recipes_a.push((
                                                SymbolId::a([b, a, d, c, f, j, e]),
                                                terms_sym,
                                            ));
                                        }
                                    } else {
                                        push_frac_row(
                                            row, index, sink, extra_assumptions, cx, tol,
                                        );
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    for (sym, terms) in recipes_x {
        definitions.push(Definition { symbol: sym, terms });
    }
    for (sym, terms) in recipes_y {
        definitions.push(Definition { symbol: sym, terms });
    }
    for (sym, terms) in recipes_b {
        definitions.push(Definition { symbol: sym, terms });
    }
    for (sym, terms) in recipes_a {
        definitions.push(Definition { symbol: sym, terms });
    }
}

/// Loop-move rows on the circle:
///
///   D[g,b,d]·F̃(b,c,a;d)[g,f]·D[f,a,d] = Σ_e F(c,a,b;d)[g,e]·D[c,e,d]
///                                         ·F(a,b,c;d)[e,f]
fn generate_circle(
    g: &GraphCtx,
    cx: &Ctx,
    tol: &Real,
    index: &BTreeMap<SymbolId, usize>,
    sink: &mut EqSink,
) {
    let r = g.v.r;
    // D-symbol factor: `None` kills the term, `Some(None)` is the constant
    // normalization D[a,1,a] = 1, `Some(Some(i))` is variable `i`.
    let dfac = |a: usize, b: usize, c: usize| -> Option<Option<usize>> {
        if !g.v.n1(a, b, c) {
            return None;
        }
        if b == 1 {
            return Some(None);
        }
        Some(Some(index[&SymbolId::d(a, b, c)]))
    };
    for a in 1..=r {
        for b in 1..=r {
            for c in 1..=r {
                for d in 1..=r {
                    for &gg in g.v.ch(c, a) {
                        if !g.v.n1(gg, b, d) {
                            continue;
                        }
                        for &f in g.v.ch(b, c) {
                            if !g.v.n1(a, f, d) {
                                continue;
                            }
                            let mut terms: Vec<Term> = Vec::new();
                            let lhs_f = g.ftil(cx, b, c, a, d, gg, f);
                            if !lhs_f.is_small(tol, cx) {
                                if let (Some(x), Some(y)) = (dfac(gg, b, d), dfac(f, a, d)) {
                                    let mut fac = Vec::new();
                                    if let Some(i) = x {
                                        fac.push(i);
                                    }
                                    if let Some(i) = y {
                                        fac.push(i);
                                    }
                                    terms.push(make_term(cx, lhs_f.neg(), &fac));
                                }
                            }
                            for &e in g.v.ch(a, b) {
                                if !g.v.n1(c, e, d) {
                                    continue;
                                }
                                let k = g
                                    .fval(cx, c, a, b, d, gg, e)
                                    .mul(&g.fval(cx, a, b, c, d, e, f), cx);
                                if k.is_small(tol, cx) {
                                    continue;
                                }
                                if let Some(x) = dfac(c, e, d) {
                                    let mut fac = Vec::new();
                                    if let Some(i) = x {
                                        fac.push(i);
                                    }
                                    terms.push(make_term(cx, k, &fac));
                                }
                            }
                            sink.push(Poly { terms }, cx, tol);
                        }
                    }
                }
            }
        }
    }
}
