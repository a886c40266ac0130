//! Arbitrary-precision real and complex arithmetic.
//!
//! Precision is requested in *decimal digits*. Internally every operation runs
//! with a binary precision that carries one extra machine word beyond the
//! requested digits, so that chained products of a few thousand factors still
//! leave the displayed digits trustworthy. All rounding is to nearest/even,
//! which keeps results independent of evaluation order chosen by schedulers.
//!
//! A [`Ctx`] bundles the working precision with a cache of computed constants
//! (pi etc.). Contexts are cheap to create; parallel callers should create one
//! per worker instead of sharing.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use astro_float_num::{BigFloat, Consts, Radix, RoundingMode};
use core::cell::RefCell;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

pub type Real = BigFloat;

const RM: RoundingMode = RoundingMode::ToEven;

/// Binary precision used for `digits` decimal digits, rounded up to whole
/// 64-bit words with one guard word.
pub fn digits_to_bits(digits: usize) -> usize {
    // log2(10) = 3.3219...; 3.33 overshoots slightly which is harmless.
    let bits = (digits * 333 + 99) / 100;
    ((bits + 63) / 64 + 1) * 64
}

pub struct Ctx {
    digits: usize,
    bits: usize,
    consts: RefCell<Consts>,
}

impl Ctx {
    pub fn new(digits: usize) -> Self {
        Ctx {
            digits,
            bits: digits_to_bits(digits),
            consts: RefCell::new(Consts::new().expect("constants cache")),
        }
    }

    pub fn digits(&self) -> usize {
        self.digits
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    /// A context with twice the digits, for confirming tolerance decisions.
    pub fn doubled(&self) -> Ctx {
        Ctx::new(self.digits * 2)
    }

    // ---- constructors ----

    pub fn int(&self, v: i64) -> Real {
        BigFloat::from_i64(v, self.bits)
    }

    pub fn zero(&self) -> Real {
        self.int(0)
    }

    pub fn one(&self) -> Real {
        self.int(1)
    }

    pub fn from_bigint(&self, v: &BigInt) -> Real {
        // Feed the decimal expansion through the parser; exact for any size.
        self.parse(&v.to_string())
    }

    pub fn from_rational(&self, q: &BigRational) -> Real {
        let n = self.from_bigint(q.numer());
        let d = self.from_bigint(q.denom());
        self.div(&n, &d)
    }

    pub fn parse(&self, s: &str) -> Real {
        let mut cc = self.consts.borrow_mut();
        BigFloat::parse(s, Radix::Dec, self.bits, RM, &mut cc)
    }

    pub fn pi(&self) -> Real {
        self.consts.borrow_mut().pi(self.bits, RM)
    }

    pub fn two_pi(&self) -> Real {
        let pi = self.pi();
        self.add(&pi, &pi)
    }

    /// 10^e as a `Real`, `e` may be negative.
    pub fn pow10(&self, e: i64) -> Real {
        self.parse(&format!("1e{}", e))
    }

    /// The default comparison tolerance 10^(-digits/2).
    pub fn tol(&self) -> Real {
        self.pow10(-((self.digits / 2) as i64))
    }

    // ---- real arithmetic ----

    pub fn add(&self, a: &Real, b: &Real) -> Real {
        a.add(b, self.bits, RM)
    }

    pub fn sub(&self, a: &Real, b: &Real) -> Real {
        a.sub(b, self.bits, RM)
    }

    pub fn mul(&self, a: &Real, b: &Real) -> Real {
        a.mul(b, self.bits, RM)
    }

    pub fn div(&self, a: &Real, b: &Real) -> Real {
        a.div(b, self.bits, RM)
    }

    pub fn neg(&self, a: &Real) -> Real {
        a.neg()
    }

    pub fn abs(&self, a: &Real) -> Real {
        a.abs()
    }

    pub fn sqrt(&self, a: &Real) -> Real {
        a.sqrt(self.bits, RM)
    }

    pub fn exp(&self, a: &Real) -> Real {
        a.exp(self.bits, RM, &mut self.consts.borrow_mut())
    }

    pub fn ln(&self, a: &Real) -> Real {
        a.ln(self.bits, RM, &mut self.consts.borrow_mut())
    }

    pub fn sin(&self, a: &Real) -> Real {
        a.sin(self.bits, RM, &mut self.consts.borrow_mut())
    }

    pub fn cos(&self, a: &Real) -> Real {
        a.cos(self.bits, RM, &mut self.consts.borrow_mut())
    }

    pub fn atan(&self, a: &Real) -> Real {
        a.atan(self.bits, RM, &mut self.consts.borrow_mut())
    }

    /// Integer power with signed exponent.
    pub fn powi(&self, a: &Real, n: i64) -> Real {
        if n >= 0 {
            a.powi(n as usize, self.bits, RM)
        } else {
            let p = a.powi((-n) as usize, self.bits, RM);
            self.div(&self.one(), &p)
        }
    }

    /// Four-quadrant arctangent; `atan2(0, 0)` returns 0.
    pub fn atan2(&self, y: &Real, x: &Real) -> Real {
        if x.is_zero() && y.is_zero() {
            return self.zero();
        }
        if x.is_zero() {
            let half_pi = self.div(&self.pi(), &self.int(2));
            return if y.is_negative() { half_pi.neg() } else { half_pi };
        }
        let base = self.atan(&self.div(y, x));
        if x.is_negative() {
            if y.is_negative() {
                self.sub(&base, &self.pi())
            } else {
                self.add(&base, &self.pi())
            }
        } else {
            base
        }
    }

    // ---- comparisons ----

    /// Total order; any NaN signals an internal error and panics.
    pub fn cmp(&self, a: &Real, b: &Real) -> core::cmp::Ordering {
        let c = a.cmp(b).expect("NaN in comparison");
        c.cmp(&0)
    }

    pub fn lt(&self, a: &Real, b: &Real) -> bool {
        self.cmp(a, b) == core::cmp::Ordering::Less
    }

    pub fn le(&self, a: &Real, b: &Real) -> bool {
        self.cmp(a, b) != core::cmp::Ordering::Greater
    }

    /// |a| < tol.
    pub fn is_small(&self, a: &Real, tol: &Real) -> bool {
        self.lt(&a.abs(), tol)
    }

    /// |a - b| < tol.
    pub fn close(&self, a: &Real, b: &Real, tol: &Real) -> bool {
        self.is_small(&self.sub(a, b), tol)
    }

    /// Nearest integer, as `i64`; the value must be within `tol` of it.
    pub fn round_to_i64(&self, a: &Real, tol: &Real) -> Option<i64> {
        let half = self.parse("0.5");
        let shifted = if a.is_negative() {
            self.sub(a, &half)
        } else {
            self.add(a, &half)
        };
        let int = shifted.int();
        let s = self.fmt(&int, 40);
        let v: i64 = parse_plain_int(&s)?;
        if self.close(a, &self.int(v), tol) {
            Some(v)
        } else {
            None
        }
    }

    // ---- formatting ----

    /// Decimal string with `sig` significant digits, plain notation when the
    /// exponent is moderate, otherwise normalized scientific form.
    pub fn fmt(&self, a: &Real, sig: usize) -> String {
        if a.is_zero() {
            return "0".into();
        }
        if a.is_nan() {
            return "NaN".into();
        }
        if a.is_inf() {
            return if a.is_inf_neg() { "-Inf".into() } else { "Inf".into() };
        }
        let raw = a
            .format(Radix::Dec, RM, &mut self.consts.borrow_mut())
            .expect("format");
        let (neg, digits, exp10) = split_sci(&raw);
        let (digits, exp10) = round_digit_string(&digits, exp10, sig);
        let digits = digits.trim_end_matches('0');
        let digits = if digits.is_empty() { "0" } else { digits };
        if digits == "0" {
            return "0".into();
        }
        let sign = if neg { "-" } else { "" };
        let n = digits.len() as i64;
        let mut out = String::new();
        // exp10 is the power of ten of the leading digit.
        if exp10 >= 0 && exp10 < (sig as i64 + 2).max(21) {
            if exp10 + 1 >= n {
                out.push_str(digits);
                for _ in 0..(exp10 + 1 - n) {
                    out.push('0');
                }
            } else {
                out.push_str(&digits[..(exp10 + 1) as usize]);
                out.push('.');
                out.push_str(&digits[(exp10 + 1) as usize..]);
            }
        } else if exp10 < 0 && exp10 > -5 {
            out.push_str("0.");
            for _ in 0..(-exp10 - 1) {
                out.push('0');
            }
            out.push_str(digits);
        } else {
            out.push_str(&digits[..1]);
            if n > 1 {
                out.push('.');
                out.push_str(&digits[1..]);
            }
            out.push('e');
            if exp10 >= 0 {
                out.push('+');
            }
            out.push_str(&exp10.to_string());
        }
        format!("{}{}", sign, out)
    }

    pub fn fmt_default(&self, a: &Real) -> String {
        self.fmt(a, self.digits)
    }
}

fn parse_plain_int(s: &str) -> Option<i64> {
    // `fmt` with enough digits renders moderate integers without exponent.
    if let Some(stripped) = s.strip_suffix(".0") {
        stripped.parse().ok()
    } else if let Some((int, frac)) = s.split_once('.') {
        if frac.chars().all(|c| c == '0') {
            int.parse().ok()
        } else {
            None
        }
    } else {
        s.parse().ok()
    }
}

/// Split astro-float's `-d.dddde±E` output into sign, digit string and the
/// power of ten of the leading digit.
fn split_sci(s: &str) -> (bool, String, i64) {
    let (neg, s) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (mantissa, exp) = match s.split_once('e') {
        Some((m, e)) => (m, e.parse::<i64>().expect("exponent")),
        None => (s, 0),
    };
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    // The mantissa is printed as d.ddd, so the exponent already refers to the
    // leading digit. Leading zeros (subnormal prints) shift it down.
    let lead_zeros = digits.len() - digits.trim_start_matches('0').len();
    (neg, digits.trim_start_matches('0').to_string(), exp - lead_zeros as i64)
}

/// Round a digit string to `sig` significant digits (half away from zero).
fn round_digit_string(digits: &str, exp10: i64, sig: usize) -> (String, i64) {
    if digits.len() <= sig {
        return (digits.into(), exp10);
    }
    let keep: Vec<u8> = digits.bytes().take(sig).map(|b| b - b'0').collect();
    let next = digits.as_bytes()[sig] - b'0';
    let mut keep = keep;
    if next >= 5 {
        let mut i = sig;
        loop {
            if i == 0 {
                keep.insert(0, 1);
                let s: String = keep.iter().map(|d| (d + b'0') as char).collect();
                return (s, exp10 + 1);
            }
            i -= 1;
            if keep[i] == 9 {
                keep[i] = 0;
            } else {
                keep[i] += 1;
                break;
            }
        }
    }
    let s: String = keep.iter().map(|d| (d + b'0') as char).collect();
    (s, exp10)
}

// ---------------------------------------------------------------------------
// Complex numbers
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct Cplx {
    pub re: Real,
    pub im: Real,
}

impl Cplx {
    pub fn new(re: Real, im: Real) -> Self {
        Cplx { re, im }
    }

    pub fn zero(cx: &Ctx) -> Self {
        Cplx::new(cx.zero(), cx.zero())
    }

    pub fn one(cx: &Ctx) -> Self {
        Cplx::new(cx.one(), cx.zero())
    }

    pub fn int(cx: &Ctx, v: i64) -> Self {
        Cplx::new(cx.int(v), cx.zero())
    }

    pub fn real(cx: &Ctx, re: Real) -> Self {
        Cplx::new(re, cx.zero())
    }

    pub fn from_rational(cx: &Ctx, q: &BigRational) -> Self {
        Cplx::real(cx, cx.from_rational(q))
    }

    /// e^(2 pi i q) for rational q.
    pub fn unit_phase(cx: &Ctx, q: &BigRational) -> Self {
        let theta = cx.mul(&cx.two_pi(), &cx.from_rational(q));
        Cplx::new(cx.cos(&theta), cx.sin(&theta))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &Cplx, cx: &Ctx) -> Cplx {
        Cplx::new(cx.add(&self.re, &o.re), cx.add(&self.im, &o.im))
    }

    pub fn sub(&self, o: &Cplx, cx: &Ctx) -> Cplx {
        Cplx::new(cx.sub(&self.re, &o.re), cx.sub(&self.im, &o.im))
    }

    pub fn neg(&self) -> Cplx {
        Cplx::new(self.re.neg(), self.im.neg())
    }

    pub fn conj(&self) -> Cplx {
        Cplx::new(self.re.clone(), self.im.neg())
    }

    pub fn mul(&self, o: &Cplx, cx: &Ctx) -> Cplx {
        let re = cx.sub(&cx.mul(&self.re, &o.re), &cx.mul(&self.im, &o.im));
        let im = cx.add(&cx.mul(&self.re, &o.im), &cx.mul(&self.im, &o.re));
        Cplx::new(re, im)
    }

    pub fn scale(&self, s: &Real, cx: &Ctx) -> Cplx {
        Cplx::new(cx.mul(&self.re, s), cx.mul(&self.im, s))
    }

    pub fn abs2(&self, cx: &Ctx) -> Real {
        cx.add(&cx.mul(&self.re, &self.re), &cx.mul(&self.im, &self.im))
    }

    pub fn abs(&self, cx: &Ctx) -> Real {
        cx.sqrt(&self.abs2(cx))
    }

    pub fn arg(&self, cx: &Ctx) -> Real {
        cx.atan2(&self.im, &self.re)
    }

    pub fn inv(&self, cx: &Ctx) -> Cplx {
        let d = self.abs2(cx);
        Cplx::new(cx.div(&self.re, &d), cx.div(&self.im.neg(), &d))
    }

    pub fn div(&self, o: &Cplx, cx: &Ctx) -> Cplx {
        self.mul(&o.inv(cx), cx)
    }

    pub fn powi(&self, n: i64, cx: &Ctx) -> Cplx {
        if n == 0 {
            return Cplx::one(cx);
        }
        let base = if n < 0 { self.inv(cx) } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Cplx::one(cx);
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq, cx);
            }
            sq = sq.mul(&sq, cx);
            e >>= 1;
        }
        acc
    }

    /// Principal square root.
    pub fn sqrt(&self, cx: &Ctx) -> Cplx {
        if self.im.is_zero() {
            if self.re.is_negative() {
                return Cplx::new(cx.zero(), cx.sqrt(&self.re.abs()));
            }
            return Cplx::new(cx.sqrt(&self.re), cx.zero());
        }
        let r = self.abs(cx);
        let two = cx.int(2);
        let u = cx.sqrt(&cx.div(&cx.add(&r, &self.re), &two));
        let v = cx.sqrt(&cx.div(&cx.sub(&r, &self.re), &two));
        let v = if self.im.is_negative() { v.neg() } else { v };
        Cplx::new(u, v)
    }

    pub fn exp(&self, cx: &Ctx) -> Cplx {
        let m = cx.exp(&self.re);
        Cplx::new(cx.mul(&m, &cx.cos(&self.im)), cx.mul(&m, &cx.sin(&self.im)))
    }

    /// Principal logarithm.
    pub fn ln(&self, cx: &Ctx) -> Cplx {
        Cplx::new(cx.ln(&self.abs(cx)), self.arg(cx))
    }

    pub fn close(&self, o: &Cplx, tol: &Real, cx: &Ctx) -> bool {
        cx.close(&self.re, &o.re, tol) && cx.close(&self.im, &o.im, tol)
    }

    pub fn is_small(&self, tol: &Real, cx: &Ctx) -> bool {
        cx.is_small(&self.re, tol) && cx.is_small(&self.im, tol)
    }
}

/// Detect `arg(z) / 2pi` as a rational with denominator at most `max_den`.
///
/// Returns the fraction in (-1/2, 1/2] when the residual against the exact
/// phase stays below `tol`, otherwise `None`.
pub fn detect_rational_phase(z: &Cplx, max_den: i64, tol: &Real, cx: &Ctx) -> Option<BigRational> {
    if z.is_zero() {
        return None;
    }
    let t = cx.div(&z.arg(cx), &cx.two_pi());
    for q in 1..=max_den {
        let scaled = cx.mul(&t, &cx.int(q));
        if let Some(p) = cx.round_to_i64(&scaled, tol) {
            let cand = BigRational::new(BigInt::from(p), BigInt::from(q));
            // Confirm against the number itself, not just the float quotient.
            let r = z.abs(cx);
            let expect = Cplx::unit_phase(cx, &cand).scale(&r, cx);
            let scale = cx.add(&r.abs(), &cx.one());
            if z.close(&expect, &cx.mul(tol, &scale), cx) {
                return Some(cand);
            }
        }
    }
    None
}

/// Detect a real value as a rational with denominator at most `max_den`.
pub fn detect_rational(x: &Real, max_den: i64, tol: &Real, cx: &Ctx) -> Option<BigRational> {
    for q in 1..=max_den {
        let scaled = cx.mul(x, &cx.int(q));
        if let Some(p) = cx.round_to_i64(&scaled, tol) {
            let cand = BigRational::new(BigInt::from(p), BigInt::from(q));
            if cx.close(x, &cx.from_rational(&cand), tol) {
                return Some(cand);
            }
        }
    }
    None
}

/// Reduce a rational into the window (-1/2, 1/2] modulo 1.
pub fn frac_mod1_centered(q: &BigRational) -> BigRational {
    let mut f = q - q.floor();
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    if f > half {
        f -= BigRational::from(BigInt::from(1));
    }
    f
}

/// Reduce a rational into [0, 1).
pub fn frac_mod1(q: &BigRational) -> BigRational {
    q - q.floor()
}

pub fn rational_is_integer(q: &BigRational) -> bool {
    q.denom().abs() == BigInt::from(1)
}

pub fn rational_to_i64(q: &BigRational) -> Option<i64> {
    if rational_is_integer(q) {
        q.numer().to_i64()
    } else {
        None
    }
}

pub fn big_rational_zero() -> BigRational {
    BigRational::from(BigInt::zero())
}

// ---------------------------------------------------------------------------
// Dense complex matrices and polynomial roots
// ---------------------------------------------------------------------------

/// Dense complex matrix stored as rows.
pub type CMat = Vec<Vec<Cplx>>;

pub fn cmat_mul(a: &CMat, b: &CMat, cx: &Ctx) -> CMat {
    let n = a.len();
    let m = b[0].len();
    let inner = b.len();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(m);
        for j in 0..m {
            let mut acc = Cplx::zero(cx);
            for (k, bk) in b.iter().enumerate().take(inner) {
                acc = acc.add(&a[i][k].mul(&bk[j], cx), cx);
            }
            row.push(acc);
        }
        out.push(row);
    }
    out
}

/// Invert a square complex matrix by Gauss-Jordan elimination with partial
/// pivoting. Returns `None` when some pivot falls below `tol * (1 + scale)`
/// where `scale` is the largest entry magnitude of the input, i.e. when the
/// matrix is singular at working precision.
pub fn cmat_inverse(a: &CMat, cx: &Ctx) -> Option<CMat> {
    let n = a.len();
    let mut work = a.clone();
    let mut inv: CMat = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Cplx::one(cx) } else { Cplx::zero(cx) })
                .collect()
        })
        .collect();
    let mut scale = cx.zero();
    for row in &work {
        for e in row {
            let ab = e.abs(cx);
            if cx.lt(&scale, &ab) {
                scale = ab;
            }
        }
    }
    let thr = cx.mul(&cx.tol(), &cx.add(&cx.one(), &scale));
    for col in 0..n {
        let mut best = col;
        let mut best_abs = work[col][col].abs(cx);
        for row in (col + 1)..n {
            let ab = work[row][col].abs(cx);
            if cx.lt(&best_abs, &ab) {
                best = row;
                best_abs = ab;
            }
        }
        if cx.lt(&best_abs, &thr) {
            return None;
        }
        work.swap(col, best);
        inv.swap(col, best);
        let piv = work[col][col].inv(cx);
        for j in 0..n {
            work[col][j] = work[col][j].mul(&piv, cx);
            inv[col][j] = inv[col][j].mul(&piv, cx);
        }
        for row in 0..n {
            if row == col {
                continue;
            }
            let f = work[row][col].clone();
            if f.is_zero() {
                continue;
            }
            for j in 0..n {
                work[row][j] = work[row][j].sub(&f.mul(&work[col][j], cx), cx);
                inv[row][j] = inv[row][j].sub(&f.mul(&inv[col][j], cx), cx);
            }
        }
    }
    Some(inv)
}

/// Evaluate `p` and its derivative at `z` (coefficients little-endian).
fn poly_eval_with_deriv(p: &[Cplx], z: &Cplx, cx: &Ctx) -> (Cplx, Cplx) {
    let mut v = Cplx::zero(cx);
    let mut d = Cplx::zero(cx);
    for c in p.iter().rev() {
        d = d.mul(z, cx).add(&v, cx);
        v = v.mul(z, cx).add(c, cx);
    }
    (v, d)
}

/// All complex roots of `p[0] + p[1] x + ... + p[n] x^n` by the
/// Aberth-Ehrlich simultaneous iteration.
///
/// The leading coefficient must be nonzero. Starting points sit on a circle
/// of the Cauchy root bound with an angular offset, which breaks the
/// conjugation symmetry of real-coefficient polynomials. The iteration is
/// meant for square-free polynomials (distinct roots); repeated roots still
/// converge, but only linearly and to cluster accuracy. Callers are expected
/// to verify the results downstream.
pub fn aberth_roots(p: &[Cplx], cx: &Ctx) -> Vec<Cplx> {
    let n = p.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let lead = p[n].abs(cx);
    let mut bound = cx.zero();
    for c in p.iter().take(n) {
        let q = cx.div(&c.abs(cx), &lead);
        if cx.lt(&bound, &q) {
            bound = q;
        }
    }
    let radius = cx.add(&cx.one(), &bound);
    let offset = cx.parse("0.4");
    let mut z: Vec<Cplx> = (0..n)
        .map(|k| {
            let turn = cx.div(&cx.mul(&cx.two_pi(), &cx.int(k as i64)), &cx.int(n as i64));
            let angle = cx.add(&turn, &offset);
            Cplx::new(
                cx.mul(&radius, &cx.cos(&angle)),
                cx.mul(&radius, &cx.sin(&angle)),
            )
        })
        .collect();
    let eps = cx.mul(&radius, &cx.pow10(-(cx.digits() as i64 + 8)));
    let max_iter = 60 + 6 * cx.digits();
    for _ in 0..max_iter {
        let mut worst = cx.zero();
        for k in 0..n {
            let (v, d) = poly_eval_with_deriv(p, &z[k], cx);
            if v.is_zero() {
                continue;
            }
            if d.is_zero() {
                // A saddle of p; nudge off it and retry next sweep.
                z[k] = z[k].add(&Cplx::real(cx, cx.mul(&radius, &cx.pow10(-3))), cx);
                worst = radius.clone();
                continue;
            }
            let w = v.div(&d, cx);
            let mut rep = Cplx::zero(cx);
            for j in 0..n {
                if j == k {
                    continue;
                }
                let diff = z[k].sub(&z[j], cx);
                if diff.is_zero() {
                    continue;
                }
                rep = rep.add(&diff.inv(cx), cx);
            }
            let denom = Cplx::one(cx).sub(&w.mul(&rep, cx), cx);
            let delta = if denom.is_small(&eps, cx) {
                w
            } else {
                w.div(&denom, cx)
            };
            z[k] = z[k].sub(&delta, cx);
            let step = delta.abs(cx);
            if cx.lt(&worst, &step) {
                worst = step;
            }
        }
        if cx.lt(&worst, &eps) {
            break;
        }
    }
    z
}
