//! Borel and parabolic Verma modules of sl(3): PBW bases, straightening,
//! weight spaces and operator matrices.
//!
//! Weights are recorded as `λ - n·α12 - m·α23` with `n, m ≥ 0`. A PBW
//! monomial with exponents `(e21, e32, e31)` sits at `(n, m) = (e21 + e31,
//! e32 + e31)` in both module families. The Borel module uses the ordered
//! word `E21^a E32^b E31^c v`; the parabolic module uses `E21^a E31^c E32^i v`
//! where `E32^i v` spans the Levi module `V_λ` (`0 ≤ i ≤ λ2`).
//!
//! The parabolic literature often writes weights as `λ + m·α12 + k·α13`
//! with the opposite sign. In the coordinates used here the region
//! `λ - m·α12 - k·α13` is `(n, m) = (m + k, k)` and `λ - l·α23 - k·α13` is
//! `(n, m) = (k, l + k)`.
//!
//! The action of a generator is computed only from matrix-unit commutators:
//! `g·(y·rest) = y·(g·rest) + [g, y]·rest` until the word is ordered.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::exactalg::{as_integer, int, serialize_rational, QMatrix, Rational};
use crate::qseries::{ExponentForm, FormalSeries, Monomial, Window};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Generator {
    E12,
    E21,
    E23,
    E32,
    E13,
    E31,
    H12,
    H23,
}

type Mat3 = [[i64; 3]; 3];

impl Generator {
    pub const ALL: [Generator; 8] = [
        Generator::E12,
        Generator::E21,
        Generator::E23,
        Generator::E32,
        Generator::E13,
        Generator::E31,
        Generator::H12,
        Generator::H23,
    ];

    fn unit(self) -> Option<(usize, usize)> {
        use Generator::*;
        match self {
            E12 => Some((0, 1)),
            E21 => Some((1, 0)),
            E23 => Some((1, 2)),
            E32 => Some((2, 1)),
            E13 => Some((0, 2)),
            E31 => Some((2, 0)),
            H12 | H23 => None,
        }
    }

    fn from_unit(i: usize, j: usize) -> Generator {
        use Generator::*;
        match (i, j) {
            (0, 1) => E12,
            (1, 0) => E21,
            (1, 2) => E23,
            (2, 1) => E32,
            (0, 2) => E13,
            (2, 0) => E31,
            _ => unreachable!("diagonal matrix unit"),
        }
    }

    fn matrix(self) -> Mat3 {
        let mut m = [[0; 3]; 3];
        match self {
            Generator::H12 => {
                m[0][0] = 1;
                m[1][1] = -1;
            }
            Generator::H23 => {
                m[1][1] = 1;
                m[2][2] = -1;
            }
            g => {
                let (i, j) = g.unit().unwrap();
                m[i][j] = 1;
            }
        }
        m
    }

    pub fn is_cartan(self) -> bool {
        matches!(self, Generator::H12 | Generator::H23)
    }

    /// Change of the `(n, m)` coordinates caused by applying `self`.
    pub fn weight_shift(self) -> (i64, i64) {
        use Generator::*;
        match self {
            E21 => (1, 0),
            E32 => (0, 1),
            E31 => (1, 1),
            E12 => (-1, 0),
            E23 => (0, -1),
            E13 => (-1, -1),
            H12 | H23 => (0, 0),
        }
    }

    /// `[a, b]` expanded in the generator basis, computed from the 3×3
    /// matrices. A traceless diagonal `diag(d1, d2, d3)` is
    /// `d1·H12 + (d1 + d2)·H23`.
    pub fn commutator(a: Generator, b: Generator) -> Vec<(Generator, i64)> {
        let (x, y) = (a.matrix(), b.matrix());
        let mut c = [[0i64; 3]; 3];
        for (i, row) in c.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (0..3).map(|k| x[i][k] * y[k][j] - y[i][k] * x[k][j]).sum();
            }
        }
        debug_assert_eq!(c[0][0] + c[1][1] + c[2][2], 0);
        let mut out = Vec::new();
        for (i, row) in c.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if i != j && v != 0 {
                    out.push((Generator::from_unit(i, j), v));
                }
            }
        }
        if c[0][0] != 0 {
            out.push((Generator::H12, c[0][0]));
        }
        if c[0][0] + c[1][1] != 0 {
            out.push((Generator::H23, c[0][0] + c[1][1]));
        }
        out
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Positive roots of sl(3).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Root {
    A12,
    A23,
    A13,
}

impl Root {
    pub const ALL: [Root; 3] = [Root::A12, Root::A23, Root::A13];

    pub fn raising(self) -> Generator {
        match self {
            Root::A12 => Generator::E12,
            Root::A23 => Generator::E23,
            Root::A13 => Generator::E13,
        }
    }

    pub fn lowering(self) -> Generator {
        match self {
            Root::A12 => Generator::E21,
            Root::A23 => Generator::E32,
            Root::A13 => Generator::E31,
        }
    }

    /// One lowering step along the root string in `(n, m)` coordinates.
    pub fn step(self) -> (usize, usize) {
        match self {
            Root::A12 => (1, 0),
            Root::A23 => (0, 1),
            Root::A13 => (1, 1),
        }
    }

    pub fn step_size(self) -> usize {
        let (a, b) = self.step();
        a + b
    }

    pub fn label(self) -> &'static str {
        match self {
            Root::A12 => "12",
            Root::A23 => "23",
            Root::A13 => "13",
        }
    }

    pub fn parse(text: &str) -> Result<Root> {
        match text.trim().trim_start_matches(['A', 'a']) {
            "12" => Ok(Root::A12),
            "23" => Ok(Root::A23),
            "13" => Ok(Root::A13),
            _ => Err(Error::Usage(format!("unknown root {text:?} (expected 12, 23 or 13)"))),
        }
    }

    /// Weight `k` steps above `(n, m)` on the string, if it exists.
    pub fn up(self, (n, m): (usize, usize), k: usize) -> Option<(usize, usize)> {
        let (dn, dm) = self.step();
        Some((n.checked_sub(k * dn)?, m.checked_sub(k * dm)?))
    }

    pub fn down(self, (n, m): (usize, usize), k: usize) -> (usize, usize) {
        let (dn, dm) = self.step();
        (n + k * dn, m + k * dm)
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A{}", self.label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModuleKind {
    Borel,
    Parabolic,
}

impl ModuleKind {
    pub fn parse(text: &str) -> Result<ModuleKind> {
        match text.trim().to_ascii_lowercase().as_str() {
            "borel" => Ok(ModuleKind::Borel),
            "parabolic" => Ok(ModuleKind::Parabolic),
            _ => Err(Error::Usage(format!("unknown module kind {text:?}"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ModuleKind::Borel => "borel",
            ModuleKind::Parabolic => "parabolic",
        }
    }

    /// Lowering generators in PBW word order, leftmost first.
    fn alphabet(self) -> [Generator; 3] {
        match self {
            ModuleKind::Borel => [Generator::E21, Generator::E32, Generator::E31],
            ModuleKind::Parabolic => [Generator::E21, Generator::E31, Generator::E32],
        }
    }
}

/// Module family, highest weight and depth cutoff on `n + m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModuleSpec {
    pub kind: ModuleKind,
    #[serde(serialize_with = "serialize_rational")]
    pub lambda1: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub lambda2: Rational,
    pub depth: usize,
}

impl ModuleSpec {
    pub fn new(kind: ModuleKind, lambda1: Rational, lambda2: Rational, depth: usize) -> Result<Self> {
        if kind == ModuleKind::Parabolic {
            let ok = as_integer(&lambda2).is_some_and(|v| !v.is_negative() && v.to_u32().is_some());
            if !ok {
                return Err(Error::Usage(format!(
                    "parabolic module needs a nonnegative integer lambda2, got {lambda2}"
                )));
            }
        }
        Ok(ModuleSpec {
            kind,
            lambda1,
            lambda2,
            depth,
        })
    }

    pub fn borel(lambda1: Rational, lambda2: Rational, depth: usize) -> Self {
        ModuleSpec {
            kind: ModuleKind::Borel,
            lambda1,
            lambda2,
            depth,
        }
    }

    pub fn parabolic(lambda1: Rational, lambda2: u32, depth: usize) -> Self {
        ModuleSpec {
            kind: ModuleKind::Parabolic,
            lambda1,
            lambda2: int(i64::from(lambda2)),
            depth,
        }
    }

    pub fn with_depth(&self, depth: usize) -> Self {
        ModuleSpec {
            depth,
            ..self.clone()
        }
    }

    /// `λ2` for the parabolic family (the top Levi index).
    pub fn levi_top(&self) -> Option<u32> {
        match self.kind {
            ModuleKind::Borel => None,
            ModuleKind::Parabolic => self.lambda2.to_integer().to_u32(),
        }
    }

    /// `h_α` on the weight `(n, m)` as an exponent form. For the parabolic
    /// family `λ2` is a fixed integer and is folded into the constant.
    pub fn h_value(&self, root: Root, n: usize, m: usize) -> ExponentForm {
        let (n, m) = (n as i64, m as i64);
        let l2 = self.levi_top().map(i64::from);
        let lam2 = |c: i64| match l2 {
            Some(v) => ExponentForm::new(c + v, 0, 0),
            None => ExponentForm::new(c, 0, 1),
        };
        match root {
            Root::A12 => ExponentForm::new(m - 2 * n, 1, 0),
            Root::A23 => lam2(n - 2 * m),
            Root::A13 => lam2(-n - m) + ExponentForm::new(0, 1, 0),
        }
    }

    pub fn h_numeric(&self, root: Root, n: usize, m: usize) -> Rational {
        self.h_value(root, n, m).eval(&self.lambda1, &self.lambda2)
    }

    /// t-offsets `(h1 - λ1, h2 - λ2)` of the weight `(n, m)`.
    pub fn t_offset(n: usize, m: usize) -> (i64, i64) {
        let (n, m) = (n as i64, m as i64);
        (m - 2 * n, n - 2 * m)
    }

    fn cartan_scalar(&self, g: Generator, n: usize, m: usize) -> Rational {
        let (n, m) = (int(n as i64), int(m as i64));
        match g {
            Generator::H12 => &self.lambda1 - int(2) * &n + m,
            Generator::H23 => &self.lambda2 + n - int(2) * m,
            _ => unreachable!("not a Cartan generator"),
        }
    }
}

/// Checks that no coefficient of the form `λ + integer` reachable within
/// `depth` can vanish: `λ1`, `λ2` and `λ1 + λ2` must avoid the integers in
/// `[-3·depth - 3, 3·depth + 3]`. For the parabolic family `λ2` is required
/// to be a nonnegative integer instead.
pub fn genericity_guard(kind: ModuleKind, l1: &Rational, l2: &Rational, depth: usize) -> Result<()> {
    let bound = 3 * depth as i64 + 3;
    let hits = |q: &Rational| {
        as_integer(q).is_some_and(|v| v.to_i64().is_some_and(|v| v.abs() <= bound))
    };
    let sum = l1 + l2;
    let mut bad = Vec::new();
    if hits(l1) {
        bad.push(format!("lambda1 = {l1}"));
    }
    match kind {
        ModuleKind::Borel => {
            if hits(l2) {
                bad.push(format!("lambda2 = {l2}"));
            }
            if hits(&sum) {
                bad.push(format!("lambda1 + lambda2 = {sum}"));
            }
        }
        ModuleKind::Parabolic => {
            if as_integer(l2).is_none_or(|v| v.is_negative()) {
                bad.push(format!("lambda2 = {l2} is not a nonnegative integer"));
            } else if hits(&sum) {
                bad.push(format!("lambda1 + lambda2 = {sum}"));
            }
        }
    }
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Error::Genericity(format!(
            "{} (integers within ±{bound} are excluded at depth {depth})",
            bad.join(", ")
        )))
    }
}

/// Exponents of `E21`, `E32`, `E31` in a PBW word applied to `v_λ`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PBWMonomial {
    pub e21: u32,
    pub e32: u32,
    pub e31: u32,
}

impl PBWMonomial {
    pub const HIGHEST: PBWMonomial = PBWMonomial {
        e21: 0,
        e32: 0,
        e31: 0,
    };

    pub const fn new(e21: u32, e32: u32, e31: u32) -> Self {
        PBWMonomial { e21, e32, e31 }
    }

    pub fn weight(&self) -> (usize, usize) {
        ((self.e21 + self.e31) as usize, (self.e32 + self.e31) as usize)
    }

    fn exponent(&self, g: Generator) -> u32 {
        match g {
            Generator::E21 => self.e21,
            Generator::E32 => self.e32,
            Generator::E31 => self.e31,
            _ => 0,
        }
    }

    fn bumped(mut self, g: Generator, by: i32) -> Self {
        let slot = match g {
            Generator::E21 => &mut self.e21,
            Generator::E32 => &mut self.e32,
            Generator::E31 => &mut self.e31,
            _ => unreachable!("not a PBW letter"),
        };
        *slot = slot.checked_add_signed(by).expect("exponent underflow");
        self
    }

    /// The word in the given module's letter order, e.g. `E21^2 E32 v`.
    pub fn describe(&self, kind: ModuleKind) -> String {
        let mut parts = Vec::new();
        for g in kind.alphabet() {
            match self.exponent(g) {
                0 => {}
                1 => parts.push(g.to_string()),
                e => parts.push(format!("{g}^{e}")),
            }
        }
        parts.push("v".into());
        parts.join(" ")
    }
}

/// Finite rational combination of PBW monomials.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ModuleElement {
    terms: BTreeMap<PBWMonomial, Rational>,
}

impl ModuleElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(m: PBWMonomial) -> Self {
        Self::term(m, Rational::one())
    }

    pub fn term(m: PBWMonomial, c: Rational) -> Self {
        let mut e = Self::zero();
        e.add_term(m, c);
        e
    }

    pub fn add_term(&mut self, m: PBWMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add_scaled(&mut self, other: &ModuleElement, c: &Rational) {
        for (m, x) in &other.terms {
            self.add_term(*m, x * c);
        }
    }

    pub fn coeff(&self, m: &PBWMonomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PBWMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn sub(&self, other: &ModuleElement) -> ModuleElement {
        let mut out = self.clone();
        out.add_scaled(other, &-Rational::one());
        out
    }

    /// Coordinates in `basis`; fails if the element has support outside it.
    pub fn coordinates(&self, basis: &[PBWMonomial]) -> Result<Vec<Rational>> {
        if let Some(m) = self.terms.keys().find(|m| !basis.contains(m)) {
            return Err(Error::DimensionMismatch(format!(
                "monomial {m:?} is not in the target weight space"
            )));
        }
        Ok(basis.iter().map(|b| self.coeff(b)).collect())
    }

    pub fn from_coordinates(basis: &[PBWMonomial], coords: &[Rational]) -> Self {
        let mut e = Self::zero();
        for (b, c) in basis.iter().zip(coords) {
            e.add_term(*b, c.clone());
        }
        e
    }
}

/// Operator whose matrix can be taken on a weight space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Operator {
    Gen(Generator),
    /// `κ_α = E F + F E` for the root sl(2) of `α`.
    Kappa(Root),
}

/// A concrete module with a memoized straightening table.
pub struct VermaModule {
    spec: ModuleSpec,
    levi_top: Option<u32>,
    memo: RefCell<HashMap<(Generator, PBWMonomial), ModuleElement>>,
}

impl VermaModule {
    pub fn new(spec: ModuleSpec) -> Self {
        let levi_top = spec.levi_top();
        VermaModule {
            spec,
            levi_top,
            memo: RefCell::new(HashMap::new()),
        }
    }

    pub fn spec(&self) -> &ModuleSpec {
        &self.spec
    }

    pub fn kind(&self) -> ModuleKind {
        self.spec.kind
    }

    pub fn depth(&self) -> usize {
        self.spec.depth
    }

    fn position(&self, g: Generator) -> Option<usize> {
        self.spec.kind.alphabet().iter().position(|&x| x == g)
    }

    fn first_letter(&self, mono: &PBWMonomial) -> Option<(usize, Generator)> {
        self.spec
            .kind
            .alphabet()
            .into_iter()
            .enumerate()
            .find(|(_, g)| mono.exponent(*g) > 0)
    }

    fn prepend(&self, g: Generator, mono: &PBWMonomial) -> ModuleElement {
        let out = mono.bumped(g, 1);
        if let Some(top) = self.levi_top {
            if out.e32 > top {
                return ModuleElement::zero();
            }
        }
        ModuleElement::basis(out)
    }

    /// `g · mono`, normal ordered.
    pub fn act(&self, g: Generator, mono: &PBWMonomial) -> ModuleElement {
        if let Some(hit) = self.memo.borrow().get(&(g, *mono)) {
            return hit.clone();
        }
        let result = if g.is_cartan() {
            let (n, m) = mono.weight();
            ModuleElement::term(*mono, self.spec.cartan_scalar(g, n, m))
        } else {
            match (self.position(g), self.first_letter(mono)) {
                (Some(_), None) => self.prepend(g, mono),
                (Some(pg), Some((pf, _))) if pg <= pf => self.prepend(g, mono),
                (None, None) => ModuleElement::zero(),
                (_, Some((_, y))) => {
                    let rest = mono.bumped(y, -1);
                    let mut out = self.act_element(y, &self.act(g, &rest));
                    for (z, c) in Generator::commutator(g, y) {
                        out.add_scaled(&self.act(z, &rest), &int(c));
                    }
                    out
                }
            }
        };
        self.memo.borrow_mut().insert((g, *mono), result.clone());
        result
    }

    pub fn act_element(&self, g: Generator, e: &ModuleElement) -> ModuleElement {
        let mut out = ModuleElement::zero();
        for (m, c) in e.terms() {
            out.add_scaled(&self.act(g, m), c);
        }
        out
    }

    /// Applies a word of generators to `v_λ`; the rightmost letter acts
    /// first.
    pub fn straighten(&self, word: &[Generator]) -> ModuleElement {
        self.apply_word(word, &ModuleElement::basis(PBWMonomial::HIGHEST))
    }

    pub fn apply_word(&self, word: &[Generator], e: &ModuleElement) -> ModuleElement {
        word.iter()
            .rev()
            .fold(e.clone(), |acc, &g| self.act_element(g, &acc))
    }

    /// PBW basis of the weight space `(n, m)`, ordered by the `E31`
    /// exponent. Independent of the depth cutoff.
    pub fn weight_space(&self, n: usize, m: usize) -> Vec<PBWMonomial> {
        let lo = match self.levi_top {
            Some(top) => m.saturating_sub(top as usize),
            None => 0,
        };
        (lo..=n.min(m))
            .map(|c| PBWMonomial::new((n - c) as u32, (m - c) as u32, c as u32))
            .collect()
    }

    pub fn weight_dim(&self, n: usize, m: usize) -> usize {
        self.weight_space(n, m).len()
    }

    /// All weight spaces with `n + m ≤ depth`, including empty ones.
    pub fn weight_spaces(&self) -> BTreeMap<(usize, usize), Vec<PBWMonomial>> {
        let d = self.spec.depth;
        (0..=d)
            .flat_map(|s| (0..=s).map(move |n| (n, s - n)))
            .map(|(n, m)| ((n, m), self.weight_space(n, m)))
            .collect()
    }

    fn check_depth(&self, n: usize, m: usize, needed: usize) -> Result<()> {
        if needed > self.spec.depth {
            return Err(Error::Truncation {
                n,
                m,
                needed,
                depth: self.spec.depth,
            });
        }
        Ok(())
    }

    /// Matrix of `op` from the weight space `(n, m)` to its image weight
    /// space; columns are images of the source basis vectors.
    pub fn operator_matrix(&self, op: Operator, n: usize, m: usize) -> Result<QMatrix> {
        self.check_depth(n, m, n + m)?;
        let source = self.weight_space(n, m);
        match op {
            Operator::Gen(g) => {
                let (dn, dm) = g.weight_shift();
                let (tn, tm) = (n as i64 + dn, m as i64 + dm);
                let target = if tn < 0 || tm < 0 {
                    Vec::new()
                } else {
                    self.check_depth(n, m, (tn + tm) as usize)?;
                    self.weight_space(tn as usize, tm as usize)
                };
                self.matrix_of(&source, &target, |b| self.act(g, b))
            }
            Operator::Kappa(root) => {
                self.check_depth(n, m, n + m + root.step_size())?;
                let (e, f) = (root.raising(), root.lowering());
                self.matrix_of(&source, &source, |b| {
                    let b = ModuleElement::basis(*b);
                    let mut out = self.act_element(e, &self.act_element(f, &b));
                    out.add_scaled(&self.act_element(f, &self.act_element(e, &b)), &Rational::one());
                    out
                })
            }
        }
    }

    fn matrix_of<F>(&self, source: &[PBWMonomial], target: &[PBWMonomial], image: F) -> Result<QMatrix>
    where
        F: Fn(&PBWMonomial) -> ModuleElement,
    {
        let mut mat = QMatrix::zeros(target.len(), source.len());
        for (j, b) in source.iter().enumerate() {
            for (i, c) in image(b).coordinates(target)?.into_iter().enumerate() {
                mat.set(i, j, c);
            }
        }
        Ok(mat)
    }

    /// `Σ_{basis} t1^{h1} t2^{h2}` over all basis vectors with
    /// `|t-offset| ≤ T` (offsets relative to `t1^{λ1} t2^{λ2}`).
    pub fn character_bruteforce(&self, max_t: i64) -> Result<FormalSeries> {
        let window = Window::new(0, 0, max_t)?;
        let needed = 2 * max_t.max(0) as usize;
        self.check_depth(0, 0, needed)?;
        let mut out = FormalSeries::zero(window);
        for s in 0..=needed {
            for n in 0..=s {
                let m = s - n;
                let (t1, t2) = ModuleSpec::t_offset(n, m);
                let dim = self.weight_dim(n, m);
                if dim > 0 {
                    out.add_term(Monomial::new(ExponentForm::ZERO, t1, t2), int(dim as i64));
                }
            }
        }
        Ok(out)
    }
}
