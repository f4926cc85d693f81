//! Closed-form partial theta series and the three-way identity verifier.
//!
//! Every closed form is transcribed as displayed in the source, including
//! suspected misprints; corrected versions are separate, explicitly named
//! identities (`ParabolicTrace12Alt`, `ParabolicTrace23AltLimit`).
//!
//! Rational-function factors are expanded exactly on a window by graded
//! truncation: unregularized traces are graded by `-c0` (bound `D`), the
//! regularized traces and the character by `-(t1 + t2)` (bound `2T`). A
//! factor `(1 - d)` with `d` of negative grade is expanded as
//! `-d^{-1}/(1 - d^{-1})`; the number of such flips is recorded in the
//! report notes.
//!
//! For the parabolic family `λ2` is a fixed integer and is folded into the
//! constant `c0` of every exponent. All t-exponents are offsets from the
//! common prefactor `t1^{λ1} t2^{λ2}`.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::branching::{
    branching_table, character_from_branching, replicated_spectra, trace_from_branching, trace_from_spectra,
    trace_shell,
};
use crate::exactalg::{int, rat, Rational};
use crate::qseries::{equal_on, expand_fraction, Comparison, ExponentForm, FormalSeries, Grading, Monomial, Window};
use crate::verma::{genericity_guard, ModuleKind, ModuleSpec, Root, VermaModule};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ClosedFormId {
    BorelTrace13,
    BorelRegTrace12,
    BorelRegTrace23,
    ParabolicTrace12,
    /// Sign-corrected form of `ParabolicTrace12`.
    ParabolicTrace12Alt,
    ParabolicTrace23,
    /// `ParabolicTrace23` with the inner sum stopped at `k ≤ i`.
    ParabolicTrace23AltLimit,
    ParabolicTrace13,
    ParabolicCharacter,
}

impl ClosedFormId {
    pub const ALL: [ClosedFormId; 9] = [
        ClosedFormId::BorelTrace13,
        ClosedFormId::BorelRegTrace12,
        ClosedFormId::BorelRegTrace23,
        ClosedFormId::ParabolicTrace12,
        ClosedFormId::ParabolicTrace12Alt,
        ClosedFormId::ParabolicTrace23,
        ClosedFormId::ParabolicTrace23AltLimit,
        ClosedFormId::ParabolicTrace13,
        ClosedFormId::ParabolicCharacter,
    ];

    pub fn name(self) -> &'static str {
        use ClosedFormId::*;
        match self {
            BorelTrace13 => "BorelTrace13",
            BorelRegTrace12 => "BorelRegTrace12",
            BorelRegTrace23 => "BorelRegTrace23",
            ParabolicTrace12 => "ParabolicTrace12",
            ParabolicTrace12Alt => "ParabolicTrace12Alt",
            ParabolicTrace23 => "ParabolicTrace23",
            ParabolicTrace23AltLimit => "ParabolicTrace23AltLimit",
            ParabolicTrace13 => "ParabolicTrace13",
            ParabolicCharacter => "ParabolicCharacter",
        }
    }

    pub fn parse(text: &str) -> Result<ClosedFormId> {
        ClosedFormId::ALL
            .into_iter()
            .find(|id| id.name().eq_ignore_ascii_case(text.trim()))
            .ok_or_else(|| Error::Usage(format!("unknown identity {text:?}")))
    }

    pub fn module_kind(self) -> ModuleKind {
        use ClosedFormId::*;
        match self {
            BorelTrace13 | BorelRegTrace12 | BorelRegTrace23 => ModuleKind::Borel,
            _ => ModuleKind::Parabolic,
        }
    }

    /// Root of the traced monodromy operator; `None` for the character.
    pub fn root(self) -> Option<Root> {
        use ClosedFormId::*;
        match self {
            BorelRegTrace12 | ParabolicTrace12 | ParabolicTrace12Alt => Some(Root::A12),
            BorelRegTrace23 | ParabolicTrace23 | ParabolicTrace23AltLimit => Some(Root::A23),
            BorelTrace13 | ParabolicTrace13 => Some(Root::A13),
            ParabolicCharacter => None,
        }
    }

    pub fn regularized(self) -> bool {
        matches!(self, ClosedFormId::BorelRegTrace12 | ClosedFormId::BorelRegTrace23)
    }

    /// Identities checked by `verify --all` for a module family.
    pub fn suite(kind: ModuleKind) -> Vec<ClosedFormId> {
        ClosedFormId::ALL
            .into_iter()
            .filter(|id| id.module_kind() == kind)
            .collect()
    }
}

impl fmt::Display for ClosedFormId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A closed form expanded on a window, with notes on how it was expanded.
#[derive(Clone, Debug)]
pub struct ClosedForm {
    pub series: FormalSeries,
    pub window: Window,
    pub notes: Vec<String>,
}

fn mono(c0: i64, c1: i64, c2: i64, t1: i64, t2: i64) -> Monomial {
    Monomial::new(ExponentForm::new(c0, c1, c2), t1, t2)
}

fn one() -> Rational {
    int(1)
}

/// Theta indices `k` with `2k + 1 ≤ B`; larger `k` carry `c1 > B`.
fn theta_indices(window: &Window) -> impl Iterator<Item = i64> {
    let b = window.max_lambda;
    (0..).take_while(move |k| 2 * k < b)
}

struct Accumulator {
    series: FormalSeries,
    flipped: usize,
    grading: Grading,
    bound: i64,
}

impl Accumulator {
    fn new(window: Window, grading: Grading, bound: i64) -> Self {
        Accumulator {
            series: FormalSeries::zero(window),
            flipped: 0,
            grading,
            bound,
        }
    }

    fn add(&mut self, numerator: &[(Monomial, Rational)], denominators: &[Monomial]) -> Result<()> {
        let e = expand_fraction(numerator, denominators, self.grading, self.bound, self.series.window())?;
        self.flipped += e.flipped;
        self.series = self.series.add(&e.series)?;
        Ok(())
    }

    fn finish(self, grading_name: &str, notes: &mut Vec<String>) -> FormalSeries {
        notes.push(format!(
            "expanded by grading {grading_name} up to {}; {} denominator factor(s) expanded in the inverse direction",
            self.bound, self.flipped
        ));
        self.series
    }
}

fn levi_top(spec: &ModuleSpec) -> Result<i64> {
    spec.levi_top()
        .map(i64::from)
        .ok_or_else(|| Error::Usage("parabolic identity needs a parabolic module".into()))
}

/// Window on which an identity is compared: the character lives on
/// `(B, D) = (0, 0)`, and the finite `α23` sums need a cap on `c0`
/// (the symmetric cap `c0 ≤ D` when none is given).
pub fn effective_window(id: ClosedFormId, window: &Window) -> Result<(Window, Option<String>)> {
    match id {
        ClosedFormId::ParabolicCharacter => Ok((Window::new(0, 0, window.max_t)?, None)),
        ClosedFormId::ParabolicTrace23 | ClosedFormId::ParabolicTrace23AltLimit if window.max_const.is_none() => Ok((
            window.with_symmetric_cap(),
            Some(format!("implicit symmetric cap c0 <= {} applied", window.min_const)),
        )),
        _ => Ok((*window, None)),
    }
}

/// Expands the closed form `id` exactly on `window` (see
/// [`effective_window`] for the window actually used).
pub fn closed_form(id: ClosedFormId, spec: &ModuleSpec, window: &Window) -> Result<ClosedForm> {
    use ClosedFormId::*;
    if spec.kind != id.module_kind() {
        return Err(Error::Usage(format!(
            "{id} is an identity for the {} module, not the {} module",
            id.module_kind().name(),
            spec.kind.name()
        )));
    }
    let (window, cap_note) = effective_window(id, window)?;
    let mut notes: Vec<String> = cap_note.into_iter().collect();
    let d = window.min_const;
    let t2 = 2 * window.max_t;
    let series = match id {
        BorelTrace13 => {
            // Σ_k q^{-2k² + (2k+1)(λ1+λ2)} / (1 - q^{-(2k+1)})²
            let mut acc = Accumulator::new(window, Grading::Q_DEPTH, d);
            for k in theta_indices(&window) {
                let a = 2 * k + 1;
                acc.add(&[(mono(-2 * k * k, a, a, 0, 0), one())], &[mono(-a, 0, 0, 0, 0); 2])?;
            }
            acc.finish("-c0", &mut notes)
        }
        BorelRegTrace12 | BorelRegTrace23 => {
            // Σ_k X^k q^{λ(2k+1) - 2k²} / ((1 - X q^{-2(2k+1)})(1 - Y q^{2k+1}))
            //   - X^{k+1} q^{(λ-2)(2k+1) - 2k²} / ((1 - X q^{-2(2k+1)})(1 - t1^-1 t2^-1 q^{-(2k+1)}))
            // with (X, Y, λ) = (t1^-2 t2, t1 t2^-2, λ1) or (t1 t2^-2, t1^-2 t2, λ2)
            let (x, y, l) = if id == BorelRegTrace12 {
                ((-2, 1), (1, -2), (1, 0))
            } else {
                ((1, -2), (-2, 1), (0, 1))
            };
            let mut acc = Accumulator::new(window, Grading::T_DEPTH, t2);
            for k in theta_indices(&window) {
                let a = 2 * k + 1;
                let (lc1, lc2) = (l.0 * a, l.1 * a);
                let first = mono(-2 * k * k, lc1, lc2, x.0 * k, x.1 * k);
                acc.add(
                    &[(first, one())],
                    &[mono(-2 * a, 0, 0, x.0, x.1), mono(a, 0, 0, y.0, y.1)],
                )?;
                let second = mono(-2 * a - 2 * k * k, lc1, lc2, x.0 * (k + 1), x.1 * (k + 1));
                acc.add(&[(second, -one())], &[mono(-2 * a, 0, 0, x.0, x.1), mono(-a, 0, 0, -1, -1)])?;
            }
            acc.finish("-(t1+t2)", &mut notes)
        }
        ParabolicTrace12 | ParabolicTrace12Alt => {
            // displayed: Σ_k q^{-2k² - (2k+1)λ1} (1 - q^{-(2k+1)(λ2+1)}) / ((1 - q^{-(2k+1)})(1 - q^{2k+1}))
            // corrected: Σ_k q^{(2k+1)λ1 - 2k²} (1 - q^{(2k+1)(λ2+1)}) / ((1 - q^{-(2k+1)})(1 - q^{2k+1}))
            let l2 = levi_top(spec)?;
            let sign = if id == ParabolicTrace12 { -1 } else { 1 };
            let mut acc = Accumulator::new(window, Grading::Q_DEPTH, d);
            for k in theta_indices(&window) {
                let a = 2 * k + 1;
                let lead = mono(-2 * k * k, sign * a, 0, 0, 0);
                let tail = lead * mono(sign * a * (l2 + 1), 0, 0, 0, 0);
                acc.add(&[(lead, one()), (tail, -one())], &[mono(-a, 0, 0, 0, 0), mono(a, 0, 0, 0, 0)])?;
            }
            acc.finish("-c0", &mut notes)
        }
        ParabolicTrace13 => {
            // Σ_k q^{-2k² + (λ1+λ2)(2k+1)} (1 - q^{-(λ2+1)(2k+1)}) / (1 - q^{-2k-1})²
            let l2 = levi_top(spec)?;
            let mut acc = Accumulator::new(window, Grading::Q_DEPTH, d);
            for k in theta_indices(&window) {
                let a = 2 * k + 1;
                let lead = mono(l2 * a - 2 * k * k, a, 0, 0, 0);
                let tail = lead * mono(-(l2 + 1) * a, 0, 0, 0, 0);
                acc.add(&[(lead, one()), (tail, -one())], &[mono(-a, 0, 0, 0, 0); 2])?;
            }
            acc.finish("-c0", &mut notes)
        }
        ParabolicTrace23 | ParabolicTrace23AltLimit => {
            // Σ_{i≤λ2} Σ_{k=0}^{K(i)} (i+1) q^{-2k² + (2k+1)i} + Σ_{i>λ2} Σ_{k=0}^{K(i)} (λ2+1) q^{...}
            // with K(i) = i + 1 as displayed, or K(i) = i
            let l2 = levi_top(spec)?;
            let extra = if id == ParabolicTrace23 { 1 } else { 0 };
            let cap = window.max_const.unwrap_or(d);
            // exponents with k ≤ i are at least i, the k = i + 1 term is -i - 2
            let last_i = cap.max(d).max(0) + 1;
            let mut out = FormalSeries::zero(window);
            for i in 0..=last_i {
                let mult = if i <= l2 { i + 1 } else { l2 + 1 };
                for k in 0..=i + extra {
                    out.add_term(mono((2 * k + 1) * i - 2 * k * k, 0, 0, 0, 0), int(mult));
                }
            }
            notes.push(format!("finite sum over i <= {last_i}, inner limit k <= i{}", if extra == 1 { " + 1" } else { "" }));
            out
        }
        ParabolicCharacter => {
            // Σ_{i=0}^{λ2} t1^i t2^{-2i} / ((1 - t1^-2 t2)(1 - t1^-1 t2^-1))
            let l2 = levi_top(spec)?;
            let mut acc = Accumulator::new(window, Grading::T_DEPTH, t2);
            let numerator: Vec<(Monomial, Rational)> = (0..=l2).map(|i| (mono(0, 0, 0, i, -2 * i), one())).collect();
            acc.add(&numerator, &[mono(0, 0, 0, -2, 1), mono(0, 0, 0, -1, -1)])?;
            acc.finish("-(t1+t2)", &mut notes)
        }
    };
    Ok(ClosedForm { series, window, notes })
}

/// Default λ samples used for genericity replication. For the parabolic
/// family only `λ1` varies; `λ2` is the module's.
pub fn default_samples(kind: ModuleKind, lambda2: &Rational) -> Vec<(Rational, Rational)> {
    let borel = [(rat(7, 3), rat(5, 7)), (rat(11, 5), rat(-3, 7)), (rat(13, 4), rat(9, 11))];
    match kind {
        ModuleKind::Borel => borel.to_vec(),
        ModuleKind::Parabolic => borel.into_iter().map(|(l1, _)| (l1, lambda2.clone())).collect(),
    }
}

/// The sample list for a run: the given samples, or the module's own λ
/// followed by the defaults (three points in total).
pub fn resolve_samples(spec: &ModuleSpec, given: &[(Rational, Rational)]) -> Result<Vec<(Rational, Rational)>> {
    let own = (spec.lambda1.clone(), spec.lambda2.clone());
    let samples = if given.is_empty() {
        let mut v = vec![own];
        for s in default_samples(spec.kind, &spec.lambda2) {
            if v.len() < 3 && !v.contains(&s) {
                v.push(s);
            }
        }
        v
    } else {
        given.to_vec()
    };
    if spec.kind == ModuleKind::Parabolic {
        if let Some((_, l2)) = samples.iter().find(|(_, l2)| l2 != &spec.lambda2) {
            return Err(Error::Usage(format!(
                "parabolic samples must share lambda2 = {}, got {l2}",
                spec.lambda2
            )));
        }
    }
    Ok(samples)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Mismatch,
}

impl Status {
    fn of(c: &Comparison) -> Status {
        if c.is_pass() {
            Status::Pass
        } else {
            Status::Mismatch
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    Ok,
    PaperDiscrepancy,
    PipelineFailure,
}

/// First monomial (canonical order) at which the closed form and the
/// brute-force series differ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MismatchRecord {
    pub monomial: String,
    pub c0: i64,
    pub c1: i64,
    pub c2: i64,
    pub t1: i64,
    pub t2: i64,
    #[serde(serialize_with = "crate::exactalg::serialize_rational")]
    pub closed_form: Rational,
    #[serde(serialize_with = "crate::exactalg::serialize_rational")]
    pub brute_force: Rational,
}

impl MismatchRecord {
    pub fn from_comparison(c: &Comparison) -> Option<MismatchRecord> {
        match c {
            Comparison::Pass => None,
            Comparison::Mismatch { monomial, left, right } => Some(MismatchRecord {
                monomial: monomial.to_string(),
                c0: monomial.qexp.c0,
                c1: monomial.qexp.c1,
                c2: monomial.qexp.c2,
                t1: monomial.t1,
                t2: monomial.t2,
                closed_form: left.clone(),
                brute_force: right.clone(),
            }),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VerifyReport {
    pub id: ClosedFormId,
    pub status: Status,
    pub pipeline_agreement: Status,
    pub classification: Classification,
    pub window: Window,
    pub lambda_samples: Vec<[String; 2]>,
    pub depth_used: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_mismatch: Option<MismatchRecord>,
    pub notes: Vec<String>,
    #[serde(skip)]
    pub closed_form: FormalSeries,
    #[serde(skip)]
    pub brute_force: FormalSeries,
    #[serde(skip)]
    pub branching: FormalSeries,
}

/// Module depth needed to verify `id` on `window`.
pub fn required_depth(id: ClosedFormId, spec: &ModuleSpec, window: &Window) -> Result<usize> {
    let (window, _) = effective_window(id, window)?;
    Ok(match id.root() {
        None => 2 * window.max_t as usize,
        Some(root) => trace_shell(spec, root, &window, id.regularized())? + root.step_size(),
    })
}

/// Three-way check of `id`: closed form against the brute-force κ-spectrum
/// trace (or brute-force character), and brute force against the assembly
/// from branching tables, at every λ sample.
pub fn verify_identity(
    id: ClosedFormId,
    spec: &ModuleSpec,
    window: &Window,
    samples: &[(Rational, Rational)],
) -> Result<VerifyReport> {
    let samples = resolve_samples(spec, samples)?;
    let closed = closed_form(id, spec, window)?;
    let window = closed.window;
    let mut notes = closed.notes.clone();
    let needed = required_depth(id, spec, &window)?;
    let depth = spec.depth.max(needed);
    if depth > spec.depth {
        notes.push(format!(
            "depth raised from {} to {depth} so every contributing weight space is computed",
            spec.depth
        ));
    }
    let specs: Vec<ModuleSpec> = samples
        .iter()
        .map(|(l1, l2)| ModuleSpec::new(spec.kind, l1.clone(), l2.clone(), depth))
        .collect::<Result<_>>()?;
    for s in &specs {
        genericity_guard(s.kind, &s.lambda1, &s.lambda2, depth)?;
    }

    let (brute, branching): (Vec<FormalSeries>, Vec<FormalSeries>) = match id.root() {
        Some(root) => {
            let shell = trace_shell(spec, root, &window, id.regularized())?;
            let tables = replicated_spectra(&specs, root, shell)?;
            let brute = tables
                .iter()
                .map(|t| trace_from_spectra(t, &window, id.regularized()))
                .collect();
            let branching = specs
                .par_iter()
                .map(|s| {
                    let table = branching_table(&VermaModule::new(s.clone()), root)?;
                    trace_from_branching(&table, &window, id.regularized())
                })
                .collect::<Result<Vec<_>>>()?;
            (brute, branching)
        }
        None => specs
            .par_iter()
            .map(|s| {
                let module = VermaModule::new(s.clone());
                let brute = module.character_bruteforce(window.max_t)?;
                let table = branching_table(&module, Root::A23)?;
                Ok((brute, character_from_branching(&table, window.max_t)?))
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .unzip(),
    };

    for (s, series) in samples.iter().zip(&brute).skip(1) {
        if series != &brute[0] {
            return Err(Error::Replication(format!(
                "{id}: brute-force series at lambda = ({}, {}) differs from the first sample",
                s.0, s.1
            )));
        }
    }
    let mut agreement = Status::Pass;
    for ((s, b), a) in samples.iter().zip(&brute).zip(&branching) {
        if let c @ Comparison::Mismatch { .. } = equal_on(b, a, &window) {
            agreement = Status::Mismatch;
            let r = MismatchRecord::from_comparison(&c).expect("mismatch");
            notes.push(format!(
                "pipeline disagreement at lambda = ({}, {}): {} has brute force {} but branching {}",
                s.0, s.1, r.monomial, r.closed_form, r.brute_force
            ));
            break;
        }
    }
    let comparison = equal_on(&closed.series, &brute[0], &window);
    let status = Status::of(&comparison);
    let classification = match (agreement, status) {
        (Status::Mismatch, _) => Classification::PipelineFailure,
        (_, Status::Mismatch) => Classification::PaperDiscrepancy,
        _ => Classification::Ok,
    };
    Ok(VerifyReport {
        id,
        status,
        pipeline_agreement: agreement,
        classification,
        window,
        lambda_samples: samples.iter().map(|(a, b)| [a.to_string(), b.to_string()]).collect(),
        depth_used: depth,
        first_mismatch: MismatchRecord::from_comparison(&comparison),
        notes,
        closed_form: closed.series,
        brute_force: brute[0].clone(),
        branching: branching[0].clone(),
    })
}

/// Which upper limit of the inner `α23` sum matches the oracle, given the
/// reports for the displayed and the corrected limit.
pub fn levi_limit_verdict(literal: &VerifyReport, corrected: &VerifyReport) -> String {
    match (literal.status, corrected.status) {
        (Status::Pass, Status::Mismatch) => "matching upper limit: k <= i + 1 (ParabolicTrace23)".into(),
        (Status::Mismatch, Status::Pass) => "matching upper limit: k <= i (ParabolicTrace23AltLimit)".into(),
        (Status::Pass, Status::Pass) => "both upper limits match on this window".into(),
        (Status::Mismatch, Status::Mismatch) => "neither upper limit matches".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn borel_spec() -> ModuleSpec {
        ModuleSpec::borel(rat(7, 3), rat(5, 7), 10)
    }

    #[test]
    fn borel_trace13_leading_term() {
        let w = Window::new(1, 4, 0).unwrap();
        let cf = closed_form(ClosedFormId::BorelTrace13, &borel_spec(), &w).unwrap();
        assert_eq!(cf.series.len(), 5);
        for j in 0..=4 {
            assert_eq!(cf.series.coeff(&mono(-j, 1, 1, 0, 0)), int(j + 1));
        }
    }

    #[test]
    fn character_at_zero_levi() {
        let spec = ModuleSpec::parabolic(rat(7, 3), 0, 10);
        let w = Window::new(0, 0, 4).unwrap();
        let cf = closed_form(ClosedFormId::ParabolicCharacter, &spec, &w).unwrap();
        assert_eq!(cf.series.coeff(&Monomial::ONE), int(1));
        assert_eq!(cf.series.coeff(&mono(0, 0, 0, -3, 0)), int(1));
        assert_eq!(cf.series.coeff(&mono(0, 0, 0, 1, -2)), int(0));
    }

    #[test]
    fn parabolic_trace13_leading_term() {
        let spec = ModuleSpec::parabolic(rat(7, 3), 1, 10);
        let w = Window::new(1, 3, 0).unwrap();
        let cf = closed_form(ClosedFormId::ParabolicTrace13, &spec, &w).unwrap();
        // q^{λ1+1}(1 - q^-2)/(1 - q^-1)² = q^{λ1+1}(1 + q^-1)/(1 - q^-1)
        assert_eq!(cf.series.coeff(&mono(1, 1, 0, 0, 0)), int(1));
        assert_eq!(cf.series.coeff(&mono(0, 1, 0, 0, 0)), int(2));
        assert_eq!(cf.series.coeff(&mono(-2, 1, 0, 0, 0)), int(2));
    }

    #[test]
    fn wrong_family_is_usage_error() {
        let w = Window::new(5, 8, 8).unwrap();
        assert!(matches!(
            closed_form(ClosedFormId::ParabolicTrace13, &borel_spec(), &w),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn borel_trace13_three_way() {
        let w = Window::new(5, 8, 0).unwrap();
        let r = verify_identity(ClosedFormId::BorelTrace13, &borel_spec(), &w, &[]).unwrap();
        assert_eq!(r.pipeline_agreement, Status::Pass);
        assert_eq!(r.status, Status::Pass, "{:?}", r.first_mismatch);
        assert_eq!(r.lambda_samples.len(), 3);
    }

    #[test]
    fn levi_limit_is_decided() {
        let spec = ModuleSpec::parabolic(rat(7, 3), 1, 10);
        let w = Window::new(5, 8, 0).unwrap();
        let literal = verify_identity(ClosedFormId::ParabolicTrace23, &spec, &w, &[]).unwrap();
        let alt = verify_identity(ClosedFormId::ParabolicTrace23AltLimit, &spec, &w, &[]).unwrap();
        assert_eq!(literal.pipeline_agreement, Status::Pass);
        assert_eq!(alt.pipeline_agreement, Status::Pass);
        assert_eq!(levi_limit_verdict(&literal, &alt), "matching upper limit: k <= i (ParabolicTrace23AltLimit)");
        let m = literal.first_mismatch.unwrap();
        assert_eq!((m.c0, m.closed_form, m.brute_force), (-2, int(1), int(0)));
    }

    #[test]
    fn sample_resolution() {
        let s = resolve_samples(&borel_spec(), &[]).unwrap();
        assert_eq!(s, default_samples(ModuleKind::Borel, &rat(5, 7)));
        let p = ModuleSpec::parabolic(rat(1, 2), 2, 4);
        let s = resolve_samples(&p, &[]).unwrap();
        assert_eq!(s[0], (rat(1, 2), int(2)));
        assert_eq!(s.len(), 3);
        assert!(resolve_samples(&p, &[(rat(1, 2), int(1))]).is_err());
    }
}
