//! Formal Laurent series in `q`, `t1`, `t2` with λ-affine q-exponents.
//!
//! A monomial is `q^{c0 + c1·λ1 + c2·λ2} · t1^a · t2^b`. Every series carries
//! the [`Window`] it is exact on; arithmetic drops whatever lands outside.
//! The t-exponents are offsets from the highest weight: a stored `t1^a t2^b`
//! stands for `t1^{λ1 + a} t2^{λ2 + b}`, so the common factor
//! `t1^{λ1} t2^{λ2}` of every character and regularized trace is implicit.
//!
//! `q` is a formal symbol. The trace of a monodromy operator is defined as
//! `Σ q^{eigenvalue of κ}`; analytically `q = exp(2π√-1/ħ)`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::exactalg::{int, Rational};
use crate::{Error, Result};

/// `c0 + c1·λ1 + c2·λ2` with integer coefficients.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ExponentForm {
    pub c0: i64,
    pub c1: i64,
    pub c2: i64,
}

impl ExponentForm {
    pub const ZERO: ExponentForm = ExponentForm { c0: 0, c1: 0, c2: 0 };

    pub const fn new(c0: i64, c1: i64, c2: i64) -> Self {
        ExponentForm { c0, c1, c2 }
    }

    pub const fn constant(c0: i64) -> Self {
        ExponentForm { c0, c1: 0, c2: 0 }
    }

    pub fn scale(self, k: i64) -> Self {
        ExponentForm::new(self.c0 * k, self.c1 * k, self.c2 * k)
    }

    pub fn is_constant(self) -> bool {
        self.c1 == 0 && self.c2 == 0
    }

    pub fn eval(self, l1: &Rational, l2: &Rational) -> Rational {
        int(self.c0) + int(self.c1) * l1 + int(self.c2) * l2
    }
}

impl Add for ExponentForm {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        ExponentForm::new(self.c0 + o.c0, self.c1 + o.c1, self.c2 + o.c2)
    }
}

impl Sub for ExponentForm {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        ExponentForm::new(self.c0 - o.c0, self.c1 - o.c1, self.c2 - o.c2)
    }
}

impl Neg for ExponentForm {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-1)
    }
}

impl fmt::Display for ExponentForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (c, sym) in [(self.c1, "λ1"), (self.c2, "λ2")] {
            match c {
                0 => {}
                1 => parts.push(sym.to_string()),
                -1 => parts.push(format!("-{sym}")),
                _ => parts.push(format!("{c}{sym}")),
            }
        }
        if self.c0 != 0 || parts.is_empty() {
            parts.push(self.c0.to_string());
        }
        write!(f, "{}", parts.join("+").replace("+-", "-"))
    }
}

/// `q^{qexp} t1^{t1} t2^{t2}`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub qexp: ExponentForm,
    pub t1: i64,
    pub t2: i64,
}

impl Monomial {
    pub const ONE: Monomial = Monomial {
        qexp: ExponentForm::ZERO,
        t1: 0,
        t2: 0,
    };

    pub const fn new(qexp: ExponentForm, t1: i64, t2: i64) -> Self {
        Monomial { qexp, t1, t2 }
    }

    pub const fn q(qexp: ExponentForm) -> Self {
        Monomial { qexp, t1: 0, t2: 0 }
    }

    pub const fn q_const(c0: i64) -> Self {
        Monomial::q(ExponentForm::constant(c0))
    }

    pub fn pow(self, j: i64) -> Self {
        Monomial::new(self.qexp.scale(j), self.t1 * j, self.t2 * j)
    }

    pub fn inverse(self) -> Self {
        self.pow(-1)
    }

    fn sort_key(&self) -> (i64, i64, i64, i64, i64) {
        (self.qexp.c1, self.qexp.c2, -self.qexp.c0, self.t1, self.t2)
    }
}

impl Mul for Monomial {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Monomial::new(self.qexp + o.qexp, self.t1 + o.t1, self.t2 + o.t2)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q^({})", self.qexp)?;
        if self.t1 != 0 {
            write!(f, " t1^{}", self.t1)?;
        }
        if self.t2 != 0 {
            write!(f, " t2^{}", self.t2)?;
        }
        Ok(())
    }
}

/// Finite set of monomials on which series are compared exactly:
/// `0 ≤ c1, c2 ≤ B`, `c0 ≥ -D` (and `c0 ≤ cap` when a cap is set),
/// `|t1|, |t2| ≤ T`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Window {
    #[serde(rename = "B")]
    pub max_lambda: i64,
    #[serde(rename = "D")]
    pub min_const: i64,
    #[serde(rename = "T")]
    pub max_t: i64,
    #[serde(rename = "cap", skip_serializing_if = "Option::is_none")]
    pub max_const: Option<i64>,
}

impl Window {
    pub fn new(b: i64, d: i64, t: i64) -> Result<Self> {
        if b < 0 || d < 0 || t < 0 {
            return Err(Error::Usage(format!(
                "window bounds must be nonnegative (B={b}, D={d}, T={t})"
            )));
        }
        Ok(Window {
            max_lambda: b,
            min_const: d,
            max_t: t,
            max_const: None,
        })
    }

    /// Adds the upper bound `c0 ≤ cap`.
    pub fn with_cap(mut self, cap: i64) -> Self {
        self.max_const = Some(cap);
        self
    }

    /// The symmetric cap `c0 ≤ D`, needed by identities whose exponents
    /// are unbounded above.
    pub fn with_symmetric_cap(self) -> Self {
        let d = self.min_const;
        self.with_cap(d)
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        let e = m.qexp;
        (0..=self.max_lambda).contains(&e.c1)
            && (0..=self.max_lambda).contains(&e.c2)
            && e.c0 >= -self.min_const
            && self.max_const.is_none_or(|cap| e.c0 <= cap)
            && m.t1.abs() <= self.max_t
            && m.t2.abs() <= self.max_t
    }

    /// Whether every monomial of `inner` also lies in `self`.
    pub fn covers(&self, inner: &Window) -> bool {
        inner.max_lambda <= self.max_lambda
            && inner.min_const <= self.min_const
            && inner.max_t <= self.max_t
            && match (self.max_const, inner.max_const) {
                (None, _) => true,
                (Some(_), None) => false,
                (Some(a), Some(b)) => b <= a,
            }
    }

    pub fn intersect(&self, other: &Window) -> Result<Window> {
        let cap = match (self.max_const, other.max_const) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        let w = Window {
            max_lambda: self.max_lambda.min(other.max_lambda),
            min_const: self.min_const.min(other.min_const),
            max_t: self.max_t.min(other.max_t),
            max_const: cap,
        };
        if let Some(cap) = w.max_const {
            if cap < -w.min_const {
                return Err(Error::IncompatibleWindows(format!(
                    "{self:?} and {other:?} share no constant term range"
                )));
            }
        }
        Ok(w)
    }
}

/// Finitely supported map from monomials to rationals, exact on `window`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalSeries {
    terms: BTreeMap<Monomial, Rational>,
    window: Window,
}

impl FormalSeries {
    pub fn zero(window: Window) -> Self {
        FormalSeries {
            terms: BTreeMap::new(),
            window,
        }
    }

    pub fn one(window: Window) -> Self {
        Self::monomial(Monomial::ONE, Rational::one(), window)
    }

    pub fn monomial(m: Monomial, coeff: Rational, window: Window) -> Self {
        let mut s = Self::zero(window);
        s.add_term(m, coeff);
        s
    }

    pub fn from_terms<I>(terms: I, window: Window) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut s = Self::zero(window);
        for (m, c) in terms {
            s.add_term(m, c);
        }
        s
    }

    pub fn window(&self) -> Window {
        self.window
    }

    /// Accumulates `coeff·m`, ignoring monomials outside the window.
    pub fn add_term(&mut self, m: Monomial, coeff: Rational) {
        if coeff.is_zero() || !self.window.contains(&m) {
            return;
        }
        let slot = self.terms.entry(m).or_insert_with(Rational::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Drops terms outside `window` and narrows the exactness window to the
    /// intersection.
    pub fn restrict(&self, window: &Window) -> Result<FormalSeries> {
        let w = self.window.intersect(window)?;
        Ok(FormalSeries::from_terms(
            self.terms.iter().map(|(m, c)| (*m, c.clone())),
            w,
        ))
    }

    pub fn add(&self, other: &FormalSeries) -> Result<FormalSeries> {
        let w = self.window.intersect(&other.window)?;
        let mut out = FormalSeries::zero(w);
        for (m, c) in self.terms.iter().chain(other.terms.iter()) {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &FormalSeries) -> Result<FormalSeries> {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> FormalSeries {
        FormalSeries::from_terms(self.terms.iter().map(|(m, x)| (*m, x * c)), self.window)
    }

    pub fn shift(&self, by: Monomial) -> FormalSeries {
        FormalSeries::from_terms(self.terms.iter().map(|(m, x)| (*m * by, x.clone())), self.window)
    }

    /// Truncated product. Exact on the intersected window whenever no pair of
    /// out-of-window monomials can multiply back into it, which holds when
    /// every factor only moves monomials away from the window's bounded
    /// directions (e.g. non-positive `c0`, non-negative `c1`, `c2`, no `t`).
    pub fn mul(&self, other: &FormalSeries) -> Result<FormalSeries> {
        let w = self.window.intersect(&other.window)?;
        let mut out = FormalSeries::zero(w);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(*ma * *mb, ca * cb);
            }
        }
        Ok(out)
    }
}

fn escapes(m: &Monomial, window: &Window) -> bool {
    let e = m.qexp;
    e.c1 != 0
        || e.c2 != 0
        || e.c0 < 0
        || (e.c0 > 0 && window.max_const.is_some())
        || m.t1 != 0
        || m.t2 != 0
}

/// `1/(1 - m) = Σ_{j≥0} m^j`, truncated to `window`.
///
/// Window membership of `m^j` is an interval `0 ≤ j ≤ J` (each bound is
/// linear in `j` and holds at `j = 0`), so the sum stops at the first power
/// outside the window. Fails when no power ever leaves the window.
pub fn geometric_expand(m: Monomial, window: Window) -> Result<FormalSeries> {
    if !escapes(&m, &window) {
        return Err(Error::Divergent(format!(
            "powers of {m} never leave window {window:?}"
        )));
    }
    let mut out = FormalSeries::zero(window);
    let mut power = Monomial::ONE;
    while window.contains(&power) {
        out.add_term(power, Rational::one());
        power = power * m;
    }
    Ok(out)
}

/// Integer linear functional on `(c0, c1, c2, t1, t2)` used to truncate
/// intermediate products of geometric expansions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Grading {
    pub weights: [i64; 5],
}

impl Grading {
    /// `-c0`: geometric ratios `q^{-a}` have positive grade.
    pub const Q_DEPTH: Grading = Grading {
        weights: [-1, 0, 0, 0, 0],
    };
    /// `-(t1 + t2)`: the sl(3) lowering directions `t1^-2 t2`, `t1 t2^-2`,
    /// `t1^-1 t2^-1` all have positive grade.
    pub const T_DEPTH: Grading = Grading {
        weights: [0, 0, 0, -1, -1],
    };

    pub fn grade(&self, m: &Monomial) -> i64 {
        let w = self.weights;
        w[0] * m.qexp.c0 + w[1] * m.qexp.c1 + w[2] * m.qexp.c2 + w[3] * m.t1 + w[4] * m.t2
    }
}

/// Expansion of `numerator / Π (1 - d_i)` restricted to a window.
#[derive(Clone, Debug)]
pub struct FractionExpansion {
    pub series: FormalSeries,
    /// Number of denominator factors expanded in the inverse direction,
    /// via `1/(1 - d) = -d^{-1}/(1 - d^{-1})`.
    pub flipped: usize,
}

/// Expands `Σ_p c_p·p / Π_i (1 - d_i)` exactly on `window`.
///
/// `window` must lie inside `{grade ≤ bound}`. A denominator of negative
/// grade is expanded in the inverse direction; one of zero grade cannot be
/// expanded and is reported as divergent. The geometric factors are
/// multiplied with truncation at `bound - min grade(numerator)`, which keeps
/// every product that the numerator can shift back into the window.
pub fn expand_fraction(
    numerator: &[(Monomial, Rational)],
    denominators: &[Monomial],
    grading: Grading,
    bound: i64,
    window: Window,
) -> Result<FractionExpansion> {
    let mut num: Vec<(Monomial, Rational)> = numerator.to_vec();
    let mut ratios = Vec::with_capacity(denominators.len());
    let mut flipped = 0;
    for &d in denominators {
        let g = grading.grade(&d);
        if g > 0 {
            ratios.push(d);
        } else if g < 0 {
            let inv = d.inverse();
            num = num.into_iter().map(|(m, c)| (m * inv, -c)).collect();
            ratios.push(inv);
            flipped += 1;
        } else {
            return Err(Error::Divergent(format!(
                "denominator factor (1 - {d}) has zero grade; window too permissive"
            )));
        }
    }
    let mut out = FormalSeries::zero(window);
    let Some(min_grade) = num.iter().map(|(m, _)| grading.grade(m)).min() else {
        return Ok(FractionExpansion { series: out, flipped });
    };
    let work = bound - min_grade;
    if work < 0 {
        return Ok(FractionExpansion { series: out, flipped });
    }
    let mut prod: BTreeMap<Monomial, Rational> = BTreeMap::from([(Monomial::ONE, Rational::one())]);
    for r in &ratios {
        let step = grading.grade(r);
        let mut next: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (m, c) in &prod {
            let mut j = 0;
            let mut term = *m;
            while grading.grade(&term) <= work {
                *next.entry(term).or_insert_with(Rational::zero) += c;
                j += 1;
                term = *m * r.pow(j);
                debug_assert!(step > 0);
            }
        }
        next.retain(|_, c| !c.is_zero());
        prod = next;
    }
    for (p, cp) in &num {
        for (m, c) in &prod {
            out.add_term(*p * *m, cp * c);
        }
    }
    Ok(FractionExpansion { series: out, flipped })
}

/// Outcome of a windowed comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Comparison {
    Pass,
    Mismatch {
        monomial: Monomial,
        left: Rational,
        right: Rational,
    },
}

impl Comparison {
    pub fn is_pass(&self) -> bool {
        matches!(self, Comparison::Pass)
    }
}

/// Compares two series on `window`, reporting the first differing monomial
/// in canonical order. Both series are assumed exact on `window`.
pub fn equal_on(a: &FormalSeries, b: &FormalSeries, window: &Window) -> Comparison {
    let support: std::collections::BTreeSet<&Monomial> = a
        .terms
        .keys()
        .chain(b.terms.keys())
        .filter(|m| window.contains(m))
        .collect();
    for m in support {
        let (x, y) = (a.coeff(m), b.coeff(m));
        if x != y {
            return Comparison::Mismatch {
                monomial: *m,
                left: x,
                right: y,
            };
        }
    }
    Comparison::Pass
}

/// Key of a series after substituting numeric λ: the q-exponent value and
/// the retained t-offsets.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct NumericMonomial {
    pub qexp: Rational,
    pub t1: i64,
    pub t2: i64,
}

/// Evaluates every q-exponent at `(λ1, λ2)`; colliding terms are summed.
pub fn substitute_lambda(
    a: &FormalSeries,
    l1: &Rational,
    l2: &Rational,
) -> BTreeMap<NumericMonomial, Rational> {
    let mut out: BTreeMap<NumericMonomial, Rational> = BTreeMap::new();
    for (m, c) in &a.terms {
        let key = NumericMonomial {
            qexp: m.qexp.eval(l1, l2),
            t1: m.t1,
            t2: m.t2,
        };
        *out.entry(key).or_insert_with(Rational::zero) += c;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

#[derive(Serialize)]
#[serde(untagged)]
enum JsonInt {
    Small(i64),
    Big(String),
}

fn json_int(x: &BigInt) -> JsonInt {
    x.to_i64()
        .map(JsonInt::Small)
        .unwrap_or_else(|| JsonInt::Big(x.to_string()))
}

#[derive(Serialize)]
struct TermRecord {
    c0: i64,
    c1: i64,
    c2: i64,
    t1: i64,
    t2: i64,
    num: JsonInt,
    den: JsonInt,
}

impl Serialize for FormalSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.terms.iter().map(|(m, c)| TermRecord {
            c0: m.qexp.c0,
            c1: m.qexp.c1,
            c2: m.qexp.c2,
            t1: m.t1,
            t2: m.t2,
            num: json_int(c.numer()),
            den: json_int(c.denom()),
        }))
    }
}

impl fmt::Display for FormalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("({c})·{m}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;
    use proptest::prelude::*;

    fn w(b: i64, d: i64, t: i64) -> Window {
        Window::new(b, d, t).unwrap()
    }

    fn qc(c0: i64) -> Monomial {
        Monomial::q_const(c0)
    }

    #[test]
    fn add_zero_and_exponent_addition() {
        let win = w(3, 5, 0);
        let a = FormalSeries::from_terms([(qc(-1), int(2)), (qc(0), int(1))], win);
        assert_eq!(a.add(&FormalSeries::zero(win)).unwrap(), a);
        let l1 = FormalSeries::monomial(Monomial::q(ExponentForm::new(0, 1, 0)), int(1), win);
        let l2 = FormalSeries::monomial(Monomial::q(ExponentForm::new(0, 0, 1)), int(1), win);
        let p = l1.mul(&l2).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.coeff(&Monomial::q(ExponentForm::new(0, 1, 1))), int(1));
    }

    #[test]
    fn telescoping_product() {
        let d = 6;
        let win = w(0, d, 0);
        let a = FormalSeries::from_terms([(qc(0), int(1)), (qc(-1), int(-1))], win);
        let b = FormalSeries::from_terms((0..=d).map(|j| (qc(-j), int(1))), win);
        let p = a.mul(&b).unwrap();
        assert_eq!(p, FormalSeries::one(win));
    }

    #[test]
    fn geometric_examples() {
        let g = geometric_expand(qc(-1), w(0, 3, 0)).unwrap();
        assert_eq!(g, FormalSeries::from_terms((0..=3).map(|j| (qc(-j), int(1))), w(0, 3, 0)));

        let m = Monomial::new(ExponentForm::constant(-2), -2, 1);
        let g = geometric_expand(m, w(0, 4, 4)).unwrap();
        let expected = FormalSeries::from_terms(
            [(Monomial::ONE, int(1)), (m, int(1)), (m.pow(2), int(1))],
            w(0, 4, 4),
        );
        assert_eq!(g, expected);

        let g = geometric_expand(Monomial::q(ExponentForm::new(0, 1, 0)), w(4, 0, 0)).unwrap();
        assert_eq!(g.len(), 5);

        assert!(matches!(geometric_expand(Monomial::ONE, w(2, 2, 2)), Err(Error::Divergent(_))));
        assert!(matches!(geometric_expand(qc(1), w(2, 2, 2)), Err(Error::Divergent(_))));
        assert_eq!(geometric_expand(qc(1), w(2, 2, 2).with_cap(2)).unwrap().len(), 3);
    }

    #[test]
    fn comparison_reports_first_difference() {
        let win = w(0, 4, 0);
        let one = FormalSeries::one(win);
        assert!(equal_on(&one, &one, &win).is_pass());
        let wide = w(0, 6, 0);
        let other = FormalSeries::from_terms([(qc(0), int(1)), (qc(-5), int(1))], wide);
        assert!(equal_on(&one, &other, &win).is_pass());
        let c = equal_on(&one, &other, &wide);
        assert_eq!(
            c,
            Comparison::Mismatch {
                monomial: qc(-5),
                left: int(0),
                right: int(1)
            }
        );
    }

    #[test]
    fn substitution() {
        let win = w(2, 2, 0);
        let s = FormalSeries::from_terms(
            [
                (Monomial::q(ExponentForm::new(0, 1, 0)), int(1)),
                (Monomial::q(ExponentForm::new(0, 0, 1)), int(1)),
            ],
            win,
        );
        let sub = substitute_lambda(&s, &rat(1, 2), &rat(1, 2));
        assert_eq!(sub.len(), 1);
        let (k, v) = sub.iter().next().unwrap();
        assert_eq!(k.qexp, rat(1, 2));
        assert_eq!(*v, int(2));
        let single = substitute_lambda(&s.restrict(&w(2, 2, 0)).unwrap(), &int(2), &int(0));
        assert!(single.contains_key(&NumericMonomial { qexp: int(2), t1: 0, t2: 0 }));
        let k0 = ExponentForm::new(0, 1, 1).eval(&rat(7, 3), &rat(5, 7));
        assert_eq!(k0, rat(64, 21));
    }

    #[test]
    fn window_intersection_and_cover() {
        let a = w(3, 5, 2);
        let b = w(4, 2, 6).with_cap(3);
        let i = a.intersect(&b).unwrap();
        assert_eq!(i, Window { max_lambda: 3, min_const: 2, max_t: 2, max_const: Some(3) });
        assert!(a.covers(&w(2, 5, 1)));
        assert!(!i.covers(&a));
        assert!(w(1, 1, 1).with_cap(-3).intersect(&a).is_err());
    }

    #[test]
    fn fraction_expansion_flips_positive_factors() {
        // (1 - q^3) / (1 - q) = 1 + q + q^2, with (1 - q) expanded in q^-1.
        let win = w(0, 6, 0).with_symmetric_cap();
        let e = expand_fraction(
            &[(qc(0), int(1)), (qc(3), int(-1))],
            &[qc(1)],
            Grading::Q_DEPTH,
            6,
            win,
        )
        .unwrap();
        assert_eq!(e.flipped, 1);
        assert_eq!(
            e.series,
            FormalSeries::from_terms([(qc(0), int(1)), (qc(1), int(1)), (qc(2), int(1))], win)
        );
        assert!(expand_fraction(&[(qc(0), int(1))], &[Monomial::ONE], Grading::Q_DEPTH, 3, win).is_err());
    }

    #[test]
    fn canonical_order_and_json() {
        let win = w(2, 4, 2);
        let s = FormalSeries::from_terms(
            [
                (Monomial::q(ExponentForm::new(0, 1, 0)), rat(1, 2)),
                (qc(-1), int(3)),
                (qc(0), int(-1)),
                (Monomial::new(ExponentForm::ZERO, -1, 1), int(1)),
            ],
            win,
        );
        let order: Vec<Monomial> = s.terms().map(|(m, _)| *m).collect();
        assert_eq!(
            order,
            vec![
                Monomial::new(ExponentForm::ZERO, -1, 1),
                qc(0),
                qc(-1),
                Monomial::q(ExponentForm::new(0, 1, 0))
            ]
        );
    }

    fn small_series() -> impl Strategy<Value = FormalSeries> {
        proptest::collection::vec(((-4i64..1, 0i64..3, 0i64..3), -3i64..4), 0..6).prop_map(|ts| {
            FormalSeries::from_terms(
                ts.into_iter()
                    .map(|((c0, c1, c2), c)| (Monomial::q(ExponentForm::new(c0, c1, c2)), int(c))),
                w(4, 6, 0),
            )
        })
    }

    proptest! {
        #[test]
        fn add_mul_commutative_associative(a in small_series(), b in small_series(), c in small_series()) {
            prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
            prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
            prop_assert_eq!(a.add(&b).unwrap().add(&c).unwrap(), a.add(&b.add(&c).unwrap()).unwrap());
            prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        }

        #[test]
        fn geometric_inverts_one_minus_m(c0 in -3i64..1, c1 in 0i64..3, t1 in -2i64..3, t2 in -2i64..3) {
            let m = Monomial::new(ExponentForm::new(c0, c1, 0), t1, t2);
            prop_assume!(m != Monomial::ONE);
            let win = w(4, 6, 4);
            let g = geometric_expand(m, win).unwrap();
            let one_minus = FormalSeries::from_terms([(Monomial::ONE, int(1)), (m, int(-1))], win);
            prop_assert_eq!(one_minus.mul(&g).unwrap(), FormalSeries::one(win));
        }

        #[test]
        fn comparison_symmetric(a in small_series(), b in small_series()) {
            let win = w(4, 6, 0);
            prop_assert!(equal_on(&a, &a, &win).is_pass());
            prop_assert_eq!(equal_on(&a, &b, &win).is_pass(), equal_on(&b, &a, &win).is_pass());
        }
    }
}
