//! Root sl(2) branching: singular vectors, constituent tables, κ spectra and
//! the two independent assemblies of the root monodromy traces.
//!
//! An sl(2) highest weight module of highest weight `μ` has one vector at
//! each string depth `k` (`0 ≤ k ≤ i` for the finite module `L_i`), and
//! `κ = EF + FE` acts there by `(2k+1)μ - 2k²`. A trace is the formal sum
//! `Σ q^{eigenvalue}` over a basis of κ-eigenvectors; the regularized trace
//! also carries `t1^{h1} t2^{h2}` of each vector's sl(3)-weight (recorded as
//! offsets from `t1^{λ1} t2^{λ2}`).

use std::collections::BTreeMap;

use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use crate::exactalg::{
    as_integer, int, kernel_basis, mat_scalar_shift, rank, serialize_rational, solve_unique,
    QMatrix, Rational,
};
use crate::qseries::{ExponentForm, FormalSeries, Monomial, Window};
use crate::verma::{ModuleElement, ModuleKind, ModuleSpec, Operator, Root, VermaModule};
use crate::{Error, Result};

/// Singular vectors for `root` in the weight space `(n, m)`, as a kernel
/// basis of the raising generator.
pub fn singular_vectors(module: &VermaModule, root: Root, n: usize, m: usize) -> Result<Vec<ModuleElement>> {
    let mat = module.operator_matrix(Operator::Gen(root.raising()), n, m)?;
    let basis = module.weight_space(n, m);
    Ok(kernel_basis(&mat)
        .iter()
        .map(|v| ModuleElement::from_coordinates(&basis, v))
        .collect())
}

pub fn singular_dimension(module: &VermaModule, root: Root, n: usize, m: usize) -> Result<usize> {
    let mat = module.operator_matrix(Operator::Gen(root.raising()), n, m)?;
    Ok(mat.cols() - rank(&mat))
}

/// An sl(2) constituent: a Verma module `M_μ` with λ-affine `μ`, or the
/// finite module `L_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", content = "hw")]
pub enum Constituent {
    VermaM(ExponentForm),
    FiniteL(u32),
}

impl Constituent {
    pub fn hw_form(&self) -> ExponentForm {
        match *self {
            Constituent::VermaM(f) => f,
            Constituent::FiniteL(i) => ExponentForm::constant(i64::from(i)),
        }
    }

    /// Whether string depth `k` is a slot of this constituent.
    pub fn has_depth(&self, k: usize) -> bool {
        match *self {
            Constituent::VermaM(_) => true,
            Constituent::FiniteL(i) => k <= i as usize,
        }
    }

    /// κ eigenvalue exponent `(2k+1)μ - 2k²` at string depth `k`.
    pub fn exponent_at(&self, k: usize) -> ExponentForm {
        let k = k as i64;
        self.hw_form().scale(2 * k + 1) - ExponentForm::constant(2 * k * k)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BranchingTerm {
    #[serde(flatten)]
    pub constituent: Constituent,
    pub multiplicity: usize,
    pub origin: (usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BranchingTable {
    pub root: Root,
    pub spec: ModuleSpec,
    pub terms: Vec<BranchingTerm>,
    pub depth_covered: usize,
}

impl BranchingTable {
    /// Total multiplicity of each constituent over all origins.
    pub fn aggregate(&self) -> BTreeMap<Constituent, usize> {
        let mut out = BTreeMap::new();
        for t in &self.terms {
            *out.entry(t.constituent).or_insert(0) += t.multiplicity;
        }
        out
    }

    /// Terms whose string passes through `(n, m)`, with the depth at which
    /// they do.
    pub fn passing_through(&self, n: usize, m: usize) -> impl Iterator<Item = (&BranchingTerm, usize)> {
        let root = self.root;
        self.terms.iter().filter_map(move |t| {
            (0..=n + m)
                .find(|&k| root.up((n, m), k) == Some(t.origin))
                .filter(|&k| t.constituent.has_depth(k))
                .map(|k| (t, k))
        })
    }

    /// κ eigenvalues at `(n, m)` predicted by the constituents through it,
    /// evaluated at the table's λ.
    pub fn predicted_spectrum(&self, n: usize, m: usize) -> BTreeMap<Rational, usize> {
        let mut out = BTreeMap::new();
        for (t, k) in self.passing_through(n, m) {
            let e = t.constituent.exponent_at(k).eval(&self.spec.lambda1, &self.spec.lambda2);
            *out.entry(e).or_insert(0) += t.multiplicity;
        }
        out
    }

    /// Largest `i` such that every copy of `L_i` has its origin inside the
    /// covered depth. The weight spaces with first coordinate `n` carry
    /// `L_n ⊗ L_{λ2}`, so `L_i` has origins only at `n ≤ i + λ2` and
    /// `m = (n + λ2 - i)/2`, giving `n + m ≤ i + 2λ2`.
    pub fn finite_complete_up_to(&self) -> Option<u32> {
        let top = self.spec.levi_top()? as usize;
        (self.depth_covered >= 2 * top).then(|| (self.depth_covered - 2 * top) as u32)
    }
}

/// Decomposes the module restricted to the root sl(2) within its depth.
/// Every singular vector of non-negative integral weight `i` is tested for
/// `F^{i+1} v = 0` inside the sl(3) module to separate `L_i` from `M_i`.
pub fn branching_table(module: &VermaModule, root: Root) -> Result<BranchingTable> {
    let spec = module.spec().clone();
    let f = root.lowering();
    let mut terms = Vec::new();
    for ((n, m), basis) in module.weight_spaces() {
        if basis.is_empty() {
            continue;
        }
        let singular = singular_vectors(module, root, n, m)?;
        if singular.is_empty() {
            continue;
        }
        let mu = spec.h_numeric(root, n, m);
        let finite_index = as_integer(&mu)
            .filter(|v| !v.is_negative())
            .and_then(|v| v.to_u32());
        let mut verma_count = singular.len();
        if let Some(i) = finite_index {
            let word = vec![f; i as usize + 1];
            let (tn, tm) = root.down((n, m), i as usize + 1);
            let target = module.weight_space(tn, tm);
            let mut images = QMatrix::zeros(target.len(), singular.len());
            for (j, v) in singular.iter().enumerate() {
                let img = module.apply_word(&word, v).coordinates(&target)?;
                for (r, c) in img.into_iter().enumerate() {
                    images.set(r, j, c);
                }
            }
            verma_count = rank(&images);
            let finite = singular.len() - verma_count;
            if finite > 0 {
                terms.push(BranchingTerm {
                    constituent: Constituent::FiniteL(i),
                    multiplicity: finite,
                    origin: (n, m),
                });
            }
        }
        if verma_count > 0 {
            terms.push(BranchingTerm {
                constituent: Constituent::VermaM(spec.h_value(root, n, m)),
                multiplicity: verma_count,
                origin: (n, m),
            });
        }
    }
    let table = BranchingTable {
        root,
        spec,
        terms,
        depth_covered: module.depth(),
    };
    for ((n, m), basis) in module.weight_spaces() {
        let found: usize = table.passing_through(n, m).map(|(t, _)| t.multiplicity).sum();
        if found != basis.len() {
            return Err(Error::DimensionAccounting {
                n,
                m,
                found,
                expected: basis.len(),
            });
        }
    }
    Ok(table)
}

/// One eigenvalue of κ on a weight space, with its λ-affine lift.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SpectrumEntry {
    #[serde(serialize_with = "serialize_rational")]
    pub eigenvalue: Rational,
    pub multiplicity: usize,
    /// Depth on the root string of the constituent whose form was matched.
    pub string_depth: usize,
    pub exponent: ExponentForm,
}

struct Candidate {
    value: Rational,
    lift: Option<(usize, ExponentForm)>,
}

/// Spectrum of κ for `root` on the weight space `(n, m)` by kernel ranks
/// against the candidate list forced by sl(2) theory.
pub fn kappa_spectrum(module: &VermaModule, root: Root, n: usize, m: usize) -> Result<Vec<SpectrumEntry>> {
    let spec = module.spec();
    let dim = module.weight_dim(n, m);
    let kappa = module.operator_matrix(Operator::Kappa(root), n, m)?;
    if dim == 0 {
        return Ok(Vec::new());
    }
    let (l1, l2) = (&spec.lambda1, &spec.lambda2);
    let mut candidates: Vec<Candidate> = Vec::new();
    let mut k = 0;
    while let Some(origin) = root.up((n, m), k) {
        let form = Constituent::VermaM(spec.h_value(root, origin.0, origin.1)).exponent_at(k);
        candidates.push(Candidate {
            value: form.eval(l1, l2),
            lift: Some((k, form)),
        });
        k += 1;
    }
    let w = spec.h_numeric(root, n, m);
    for i in 0..=module.depth() as i64 {
        let mu = int(i);
        candidates.push(Candidate {
            value: (&mu * &mu + int(2) * &mu - &w * &w) / int(2),
            lift: None,
        });
    }

    let mut values: Vec<&Rational> = candidates.iter().map(|c| &c.value).collect();
    values.sort();
    values.dedup();
    let mut entries = Vec::new();
    let mut total = 0;
    for e in values {
        let shifted = mat_scalar_shift(&kappa, e)?;
        let mult = dim - rank(&shifted);
        if mult == 0 {
            continue;
        }
        total += mult;
        let mut lifts: Vec<(usize, ExponentForm)> = candidates
            .iter()
            .filter(|c| &c.value == e)
            .filter_map(|c| c.lift)
            .collect();
        lifts.sort_by_key(|&(k, f)| (f, k));
        lifts.dedup_by_key(|&mut (_, f)| f);
        match lifts.as_slice() {
            [(k, form)] => entries.push(SpectrumEntry {
                eigenvalue: e.clone(),
                multiplicity: mult,
                string_depth: *k,
                exponent: *form,
            }),
            [] => {
                return Err(Error::AmbiguousLift {
                    n,
                    m,
                    detail: format!("eigenvalue {e} matches no string candidate"),
                })
            }
            many => {
                let forms: Vec<String> = many.iter().map(|(_, f)| f.to_string()).collect();
                return Err(Error::AmbiguousLift {
                    n,
                    m,
                    detail: format!("eigenvalue {e} matches {}", forms.join(", ")),
                });
            }
        }
    }
    if total != dim {
        return Err(Error::IncompleteSpectrum {
            n,
            m,
            found: total,
            expected: dim,
        });
    }
    Ok(entries)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightSpectrum {
    pub n: usize,
    pub m: usize,
    pub entries: Vec<SpectrumEntry>,
}

type Weight = (usize, usize);

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SpectrumTable {
    pub root: Root,
    pub spec: ModuleSpec,
    pub weights: Vec<WeightSpectrum>,
}

impl SpectrumTable {
    /// Multiplicity patterns with lifted exponents, independent of λ.
    pub fn pattern(&self) -> Vec<(Weight, Vec<(ExponentForm, usize)>)> {
        self.weights
            .iter()
            .map(|w| {
                let mut v: Vec<_> = w.entries.iter().map(|e| (e.exponent, e.multiplicity)).collect();
                v.sort();
                ((w.n, w.m), v)
            })
            .collect()
    }
}

/// κ spectra on every nonzero weight space with `n + m ≤ shell`.
pub fn spectrum_table(module: &VermaModule, root: Root, shell: usize) -> Result<SpectrumTable> {
    let mut weights = Vec::new();
    for s in 0..=shell {
        for n in 0..=s {
            let m = s - n;
            if module.weight_dim(n, m) == 0 {
                continue;
            }
            weights.push(WeightSpectrum {
                n,
                m,
                entries: kappa_spectrum(module, root, n, m)?,
            });
        }
    }
    Ok(SpectrumTable {
        root,
        spec: module.spec().clone(),
        weights,
    })
}

/// Recovers `c0 + c1 λ1 + c2 λ2` from its values at the sample points by
/// solving the interpolation system; `None` unless the solution is unique
/// and integral. Parabolic samples share `λ2`, so only `(c0, c1)` are
/// solved for there.
pub fn interpolate_exponent(kind: ModuleKind, samples: &[(Rational, Rational)], values: &[Rational]) -> Option<ExponentForm> {
    let rows: Vec<Vec<Rational>> = samples
        .iter()
        .map(|(l1, l2)| match kind {
            ModuleKind::Borel => vec![Rational::one(), l1.clone(), l2.clone()],
            ModuleKind::Parabolic => vec![Rational::one(), l1.clone()],
        })
        .collect();
    let a = QMatrix::from_rows(rows).ok()?;
    let sol = solve_unique(&a, values).ok()??;
    let ints: Option<Vec<i64>> = sol.iter().map(|c| as_integer(c)?.to_i64()).collect();
    let ints = ints?;
    Some(ExponentForm::new(ints[0], ints[1], ints.get(2).copied().unwrap_or(0)))
}

fn unknowns(kind: ModuleKind) -> usize {
    match kind {
        ModuleKind::Borel => 3,
        ModuleKind::Parabolic => 2,
    }
}

/// Spectrum tables at several λ samples of one module family, computed in
/// parallel and certified against each other: identical lifted patterns at
/// every sample, and each lifted exponent reproduced by interpolating the
/// numeric eigenvalues across samples.
pub fn replicated_spectra(specs: &[ModuleSpec], root: Root, shell: usize) -> Result<Vec<SpectrumTable>> {
    let tables: Vec<SpectrumTable> = specs
        .par_iter()
        .map(|spec| spectrum_table(&VermaModule::new(spec.clone()), root, shell))
        .collect::<Result<_>>()?;
    check_replication(&tables)?;
    Ok(tables)
}

pub fn check_replication(tables: &[SpectrumTable]) -> Result<()> {
    let Some(first) = tables.first() else {
        return Ok(());
    };
    let reference = first.pattern();
    for t in &tables[1..] {
        if t.pattern() != reference {
            let at = t
                .pattern()
                .into_iter()
                .zip(&reference)
                .find(|(a, b)| a != *b)
                .map(|(a, _)| format!(" first difference at weight {:?}", a.0))
                .unwrap_or_default();
            return Err(Error::Replication(format!(
                "spectrum pattern of {root} at lambda = ({}, {}) differs from ({}, {});{at}",
                t.spec.lambda1,
                t.spec.lambda2,
                first.spec.lambda1,
                first.spec.lambda2,
                root = t.root,
            )));
        }
    }
    let kind = first.spec.kind;
    if tables.len() < unknowns(kind) {
        return Ok(());
    }
    let samples: Vec<(Rational, Rational)> = tables
        .iter()
        .map(|t| (t.spec.lambda1.clone(), t.spec.lambda2.clone()))
        .collect();
    for (idx, w) in first.weights.iter().enumerate() {
        for entry in &w.entries {
            let values: Option<Vec<Rational>> = tables
                .iter()
                .map(|t| {
                    t.weights[idx]
                        .entries
                        .iter()
                        .find(|e| e.exponent == entry.exponent)
                        .map(|e| e.eigenvalue.clone())
                })
                .collect();
            let lifted = values.and_then(|v| interpolate_exponent(kind, &samples, &v));
            if lifted != Some(entry.exponent) {
                return Err(Error::AmbiguousLift {
                    n: w.n,
                    m: w.m,
                    detail: format!(
                        "interpolation across samples gives {} instead of {}",
                        lifted.map(|f| f.to_string()).unwrap_or_else(|| "no unique integral form".into()),
                        entry.exponent
                    ),
                });
            }
        }
    }
    Ok(())
}

fn floor_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b)
}

/// Largest `n + m` of a weight space that can contribute a monomial inside
/// `window` to the trace of `root`. Unregularized traces whose window sums
/// are infinite are reported as divergent.
pub fn trace_shell(spec: &ModuleSpec, root: Root, window: &Window, regularized: bool) -> Result<usize> {
    if regularized {
        return Ok(2 * window.max_t as usize);
    }
    let (b, d) = (window.max_lambda, window.min_const);
    let depths = (0..).take_while(|k| 2 * k < b);
    let best = |f: &dyn Fn(i64) -> Option<i64>| depths.clone().filter_map(f).max().unwrap_or(0).max(0) as usize;
    match (spec.kind, root) {
        (ModuleKind::Borel, Root::A12 | Root::A23) => Err(Error::Divergent(format!(
            "the trace of {root} on the Borel module has infinitely many terms in every window \
             (formal window sums; divergent as series); regularize it or bound the depth"
        ))),
        (ModuleKind::Borel, Root::A13) => Ok(best(&|k| {
            (2 * k * k <= d).then(|| floor_div(d + 2 * k * k + 2 * k, 2 * k + 1))
        })),
        (ModuleKind::Parabolic, _) => {
            let l2 = i64::from(spec.levi_top().unwrap_or(0));
            match root {
                Root::A12 => Ok(best(&|k| {
                    let top = l2 + floor_div(d - 2 * k * k, 2 * k + 1);
                    (top >= 0).then(|| 2 * top + l2 + k)
                })),
                Root::A13 => Ok(best(&|k| {
                    let top = l2 + floor_div(d - 2 * k * k, 2 * k + 1);
                    (top >= 0).then(|| top + 2 * k)
                })),
                Root::A23 => match window.max_const {
                    None => Err(Error::Divergent(format!(
                        "the trace of {root} on the parabolic module has all exponents nonnegative \
                         and unbounded; the window needs a cap on the constant term"
                    ))),
                    Some(cap) => {
                        // every constituent of the weight spaces with first
                        // coordinate n is L_i with i ≥ n - λ2, and the
                        // eigenvalues on L_i are at least i
                        let top = cap + l2;
                        Ok(if top < 0 { 0 } else { (2 * top + l2) as usize })
                    }
                },
            }
        }
    }
}

fn slot_monomial(qexp: ExponentForm, (n, m): (usize, usize), regularized: bool) -> Monomial {
    if regularized {
        let (t1, t2) = ModuleSpec::t_offset(n, m);
        Monomial::new(qexp, t1, t2)
    } else {
        Monomial::q(qexp)
    }
}

/// `Σ mult · q^{exponent}` over a spectrum table, optionally with the
/// t-weights of each slot.
pub fn trace_from_spectra(table: &SpectrumTable, window: &Window, regularized: bool) -> FormalSeries {
    let mut out = FormalSeries::zero(*window);
    for w in &table.weights {
        for e in &w.entries {
            out.add_term(slot_monomial(e.exponent, (w.n, w.m), regularized), int(e.multiplicity as i64));
        }
    }
    out
}

/// Brute-force trace on a window: κ spectra of every weight space that can
/// contribute, lifted to λ-affine exponents.
pub fn trace_brute_force(module: &VermaModule, root: Root, window: &Window, regularized: bool) -> Result<FormalSeries> {
    let shell = trace_shell(module.spec(), root, window, regularized)?;
    trace_brute_force_shell(module, root, window, regularized, shell)
}

/// Brute-force trace over the weight spaces with `n + m ≤ shell` only.
pub fn trace_brute_force_shell(
    module: &VermaModule,
    root: Root,
    window: &Window,
    regularized: bool,
    shell: usize,
) -> Result<FormalSeries> {
    let table = spectrum_table(module, root, shell)?;
    Ok(trace_from_spectra(&table, window, regularized))
}

/// Trace assembled from the constituents of a branching table.
pub fn trace_from_branching(table: &BranchingTable, window: &Window, regularized: bool) -> Result<FormalSeries> {
    let shell = trace_shell(&table.spec, table.root, window, regularized)?;
    if shell > table.depth_covered {
        return Err(Error::Usage(format!(
            "window needs weight spaces up to n + m = {shell} but the table covers depth {}",
            table.depth_covered
        )));
    }
    Ok(trace_from_branching_shell(table, window, regularized, shell))
}

pub fn trace_from_branching_shell(
    table: &BranchingTable,
    window: &Window,
    regularized: bool,
    shell: usize,
) -> FormalSeries {
    let mut out = FormalSeries::zero(*window);
    for t in &table.terms {
        let mut k = 0;
        loop {
            let slot = table.root.down(t.origin, k);
            if slot.0 + slot.1 > shell || !t.constituent.has_depth(k) {
                break;
            }
            out.add_term(
                slot_monomial(t.constituent.exponent_at(k), slot, regularized),
                int(t.multiplicity as i64),
            );
            k += 1;
        }
    }
    out
}

/// Character `Σ t1^{h1} t2^{h2}` rebuilt from the constituents of a
/// branching table (each contributes the weights of its string slots).
pub fn character_from_branching(table: &BranchingTable, max_t: i64) -> Result<FormalSeries> {
    let shell = 2 * max_t.max(0) as usize;
    if shell > table.depth_covered {
        return Err(Error::Usage(format!(
            "character window T = {max_t} needs depth {shell} but the table covers {}",
            table.depth_covered
        )));
    }
    let window = Window::new(0, 0, max_t)?;
    let mut out = FormalSeries::zero(window);
    for t in &table.terms {
        let mut k = 0;
        loop {
            let slot = table.root.down(t.origin, k);
            if slot.0 + slot.1 > shell || !t.constituent.has_depth(k) {
                break;
            }
            out.add_term(slot_monomial(ExponentForm::ZERO, slot, true), int(t.multiplicity as i64));
            k += 1;
        }
    }
    Ok(out)
}

/// Compares the kernel-rank spectrum with the branching prediction at every
/// weight space of `n + m ≤ shell`; returns the first weight that differs.
pub fn spectrum_coherence(
    module: &VermaModule,
    table: &BranchingTable,
    shell: usize,
) -> Result<Option<(usize, usize)>> {
    let spectra = spectrum_table(module, table.root, shell)?;
    for w in &spectra.weights {
        let observed: BTreeMap<Rational, usize> =
            w.entries.iter().map(|e| (e.eigenvalue.clone(), e.multiplicity)).collect();
        if observed != table.predicted_spectrum(w.n, w.m) {
            return Ok(Some((w.n, w.m)));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{mat_mul, rat};

    fn borel(depth: usize) -> VermaModule {
        VermaModule::new(ModuleSpec::borel(rat(7, 3), rat(5, 7), depth))
    }

    fn parabolic(l2: u32, depth: usize) -> VermaModule {
        VermaModule::new(ModuleSpec::parabolic(rat(7, 3), l2, depth))
    }

    #[test]
    fn singular_dimension_examples() {
        let b = borel(6);
        assert_eq!(singular_dimension(&b, Root::A12, 1, 2).unwrap(), 1);
        assert_eq!(singular_dimension(&b, Root::A12, 2, 1).unwrap(), 0);
        let p = parabolic(1, 6);
        for (k, l) in [(0, 1), (1, 1), (2, 1), (1, 0), (3, 0)] {
            // region λ - l α23 - k α13 sits at (n, m) = (k, l + k)
            assert_eq!(singular_dimension(&p, Root::A12, k, l + k).unwrap(), 1, "{k} {l}");
        }
    }

    #[test]
    fn borel_a13_table() {
        let table = branching_table(&borel(6), Root::A13).unwrap();
        assert_eq!(table.terms.len(), 28);
        for t in &table.terms {
            let (n, m) = t.origin;
            let hw = ExponentForm::new(-(n as i64) - m as i64, 1, 1);
            assert_eq!(t.constituent, Constituent::VermaM(hw));
            assert_eq!(t.multiplicity, 1);
        }
    }

    #[test]
    fn parabolic_a23_table_has_finite_constituents() {
        let table = branching_table(&parabolic(1, 10), Root::A23).unwrap();
        let agg = table.aggregate();
        assert!(table.finite_complete_up_to().unwrap() >= 4);
        assert_eq!(agg[&Constituent::FiniteL(0)], 1);
        assert_eq!(agg[&Constituent::FiniteL(1)], 2);
        assert_eq!(agg[&Constituent::FiniteL(2)], 2);
        assert_eq!(agg[&Constituent::FiniteL(3)], 2);
        assert!(agg.keys().all(|c| matches!(c, Constituent::FiniteL(_))));
    }

    #[test]
    fn parabolic_a12_table_at_zero_levi() {
        let table = branching_table(&parabolic(0, 8), Root::A12).unwrap();
        let agg = table.aggregate();
        // origins sit at (s, s), so depth 8 holds s ≤ 4
        for s in 0..=4 {
            assert_eq!(agg[&Constituent::VermaM(ExponentForm::new(-s, 1, 0))], 1);
        }
        assert_eq!(agg.len(), 5);
    }

    #[test]
    fn kappa_spectrum_examples() {
        let b = borel(6);
        let s = kappa_spectrum(&b, Root::A13, 0, 0).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].eigenvalue, rat(64, 21));
        assert_eq!(s[0].exponent, ExponentForm::new(0, 1, 1));
        let s = kappa_spectrum(&b, Root::A13, 1, 1).unwrap();
        let got: Vec<_> = s.iter().map(|e| (e.eigenvalue.clone(), e.multiplicity)).collect();
        assert_eq!(got, vec![(rat(22, 21), 1), (rat(50, 7), 1)]);
        assert_eq!(s[1].exponent, ExponentForm::new(-2, 3, 3));
    }

    #[test]
    fn kappa_eigenvalues_annihilate() {
        let b = borel(6);
        let k = b.operator_matrix(Operator::Kappa(Root::A13), 1, 1).unwrap();
        let a = mat_scalar_shift(&k, &rat(22, 21)).unwrap();
        let c = mat_scalar_shift(&k, &rat(50, 7)).unwrap();
        assert!(mat_mul(&a, &c).unwrap().is_zero());
    }

    #[test]
    fn finite_l1_slots_both_give_one() {
        // λ2 = 1: the weight E32 v has h23 = -1 and lies at depth 1 of L_1
        let p = parabolic(1, 6);
        let s = kappa_spectrum(&p, Root::A23, 0, 1).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!((s[0].eigenvalue.clone(), s[0].multiplicity), (int(1), 1));
        let s = kappa_spectrum(&p, Root::A23, 0, 0).unwrap();
        assert_eq!(s[0].eigenvalue, int(1));
    }

    #[test]
    fn single_l1_trace_is_two_q() {
        let spec = ModuleSpec::parabolic(rat(7, 3), 1, 4);
        let table = BranchingTable {
            root: Root::A23,
            spec,
            terms: vec![BranchingTerm {
                constituent: Constituent::FiniteL(1),
                multiplicity: 1,
                origin: (0, 0),
            }],
            depth_covered: 4,
        };
        let w = Window::new(0, 4, 0).unwrap().with_cap(4);
        let tr = trace_from_branching_shell(&table, &w, false, 4);
        assert_eq!(tr.len(), 1);
        assert_eq!(tr.coeff(&Monomial::q_const(1)), int(2));
    }

    #[test]
    fn borel_a13_depth_zero_trace() {
        let w = Window::new(5, 8, 0).unwrap();
        let tr = trace_brute_force_shell(&borel(2), Root::A13, &w, false, 0).unwrap();
        assert_eq!(tr.len(), 1);
        assert_eq!(tr.coeff(&Monomial::q(ExponentForm::new(0, 1, 1))), int(1));
    }

    #[test]
    fn pipelines_agree_borel_a13() {
        let w = Window::new(5, 8, 0).unwrap();
        let shell = trace_shell(borel(0).spec(), Root::A13, &w, false).unwrap();
        let m = borel(shell + 2);
        let brute = trace_brute_force(&m, Root::A13, &w, false).unwrap();
        let table = branching_table(&m, Root::A13).unwrap();
        assert_eq!(brute, trace_from_branching(&table, &w, false).unwrap());
        assert!(!brute.is_empty());
    }

    #[test]
    fn coherence_on_small_depth() {
        for (m, roots) in [(borel(7), Root::ALL.to_vec()), (parabolic(2, 7), Root::ALL.to_vec())] {
            for root in roots {
                let table = branching_table(&m, root).unwrap();
                assert_eq!(spectrum_coherence(&m, &table, 5).unwrap(), None, "{root}");
            }
        }
    }

    #[test]
    fn divergent_traces_are_rejected() {
        let w = Window::new(5, 8, 8).unwrap();
        let b = ModuleSpec::borel(rat(7, 3), rat(5, 7), 10);
        assert!(matches!(trace_shell(&b, Root::A12, &w, false), Err(Error::Divergent(_))));
        assert_eq!(trace_shell(&b, Root::A12, &w, true).unwrap(), 16);
        let p = ModuleSpec::parabolic(rat(7, 3), 1, 10);
        assert!(matches!(trace_shell(&p, Root::A23, &w, false), Err(Error::Divergent(_))));
        assert_eq!(trace_shell(&p, Root::A23, &w.with_cap(2), false).unwrap(), 7);
    }

    #[test]
    fn replication_across_samples() {
        let specs: Vec<ModuleSpec> = [(rat(7, 3), rat(5, 7)), (rat(11, 5), rat(-3, 7)), (rat(13, 4), rat(9, 11))]
            .into_iter()
            .map(|(a, b)| ModuleSpec::borel(a, b, 6))
            .collect();
        let tables = replicated_spectra(&specs, Root::A13, 4).unwrap();
        assert_eq!(tables.len(), 3);
    }

    #[test]
    fn interpolation_recovers_forms() {
        let samples = vec![(rat(7, 3), rat(5, 7)), (rat(11, 5), rat(-3, 7)), (rat(13, 4), rat(9, 11))];
        let f = ExponentForm::new(-2, 3, 3);
        let values: Vec<Rational> = samples.iter().map(|(a, b)| f.eval(a, b)).collect();
        assert_eq!(interpolate_exponent(ModuleKind::Borel, &samples, &values), Some(f));
        assert_eq!(interpolate_exponent(ModuleKind::Borel, &samples[..2], &values[..2]), None);
    }
}
