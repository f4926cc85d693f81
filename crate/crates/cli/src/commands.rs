//! Subcommand implementations. Each returns a report (or CSV text); hard
//! errors from the library become failing checks, usage and genericity
//! errors are passed up for exit code 2.

use rayon::prelude::*;
use serde_json::{json, Value};
use sl3theta_core::branching::{
    branching_table, character_from_branching, replicated_spectra, spectrum_coherence, trace_from_branching_shell,
    trace_from_spectra, trace_shell, BranchingTable, Constituent,
};
use sl3theta_core::exactalg::{int, Rational};
use sl3theta_core::qseries::{equal_on, expand_fraction, ExponentForm, FormalSeries, Grading, Monomial, Window};
use sl3theta_core::theta::{
    closed_form, levi_limit_verdict, resolve_samples, verify_identity, Classification, ClosedFormId, MismatchRecord,
};
use sl3theta_core::verma::{genericity_guard, ModuleKind, ModuleSpec, Root, VermaModule};
use sl3theta_core::{Error, Result};

use crate::config::{Format, RunConfig};
use crate::report::{Check, CheckStatus, Report, SimpleCheck};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pipeline {
    Brute,
    Branching,
    Closed,
    All,
}

impl Pipeline {
    pub fn parse(text: &str) -> Result<Pipeline> {
        match text {
            "brute" => Ok(Pipeline::Brute),
            "branching" => Ok(Pipeline::Branching),
            "closed" => Ok(Pipeline::Closed),
            "all" => Ok(Pipeline::All),
            _ => Err(Error::Usage(format!("unknown pipeline {text:?}"))),
        }
    }

    fn wants(self, p: Pipeline) -> bool {
        self == Pipeline::All || self == p
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Character,
    Branch { root: Root },
    Spectrum { root: Root },
    Trace { root: Root, pipeline: Pipeline, regularized: bool },
    Verify { ids: Vec<ClosedFormId> },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Character => "character",
            Command::Branch { .. } => "branch",
            Command::Spectrum { .. } => "spectrum",
            Command::Trace { .. } => "trace",
            Command::Verify { .. } => "verify",
        }
    }
}

/// What a command produced.
pub enum Output {
    Report(Report),
    Csv(String),
}

/// Whether an error is the caller's fault (exit code 2).
pub fn is_usage_error(e: &Error) -> bool {
    matches!(e, Error::Usage(_) | Error::Genericity(_) | Error::IncompatibleWindows(_))
}

fn sample_strings(samples: &[(Rational, Rational)]) -> Vec<[String; 2]> {
    samples.iter().map(|(a, b)| [a.to_string(), b.to_string()]).collect()
}

type Samples = Vec<(Rational, Rational)>;

fn sample_specs(cfg: &RunConfig, depth: usize) -> Result<(Samples, Vec<ModuleSpec>)> {
    let samples = resolve_samples(&cfg.spec()?, &cfg.samples)?;
    let specs = samples
        .iter()
        .map(|(a, b)| ModuleSpec::new(cfg.module, a.clone(), b.clone(), depth))
        .collect::<Result<Vec<_>>>()?;
    for s in &specs {
        genericity_guard(s.kind, &s.lambda1, &s.lambda2, depth)?;
    }
    Ok((samples, specs))
}

pub fn run(cmd: &Command, cfg: &RunConfig) -> Result<Output> {
    let spec = cfg.spec()?;
    genericity_guard(spec.kind, &spec.lambda1, &spec.lambda2, spec.depth)?;
    if cfg.format == Format::Csv && !matches!(cmd, Command::Branch { .. }) {
        return Err(Error::Usage("CSV output is only available for the branch command".into()));
    }
    let body = match cmd {
        Command::Character => character(cfg),
        Command::Branch { root } => {
            if cfg.format == Format::Csv {
                let table = branching_table(&VermaModule::new(spec), *root)?;
                return Ok(Output::Csv(branching_csv(&table)));
            }
            branch(cfg, *root)
        }
        Command::Spectrum { root } => spectrum(cfg, *root),
        Command::Trace {
            root,
            pipeline,
            regularized,
        } => trace(cfg, *root, *pipeline, *regularized),
        Command::Verify { ids } => verify(cfg, ids),
    };
    let (checks, data) = match body {
        Ok(x) => x,
        Err(e) if is_usage_error(&e) => return Err(e),
        Err(e) => (vec![Check::Simple(SimpleCheck::error(cmd.name(), e.to_string()))], None),
    };
    Ok(Output::Report(Report {
        command: cmd.name().into(),
        config: cfg.view()?,
        checks,
        data,
    }))
}

type Body = Result<(Vec<Check>, Option<Value>)>;

fn series_json(s: &FormalSeries) -> Value {
    serde_json::to_value(s).expect("series serializes")
}

fn character(cfg: &RunConfig) -> Body {
    let window = Window::new(0, 0, cfg.t)?;
    let depth = cfg.depth.max(2 * cfg.t as usize);
    match cfg.module {
        ModuleKind::Parabolic => {
            let spec = cfg.spec()?.with_depth(depth);
            let r = verify_identity(ClosedFormId::ParabolicCharacter, &spec, &window, &cfg.samples)?;
            let data = json!({ "bruteForce": series_json(&r.brute_force) });
            Ok((vec![Check::Verify(Box::new(r))], Some(data)))
        }
        ModuleKind::Borel => {
            let (samples, specs) = sample_specs(cfg, depth)?;
            let module = VermaModule::new(specs[0].clone());
            let brute = module.character_bruteforce(cfg.t)?;
            let table = branching_table(&module, Root::A13)?;
            let assembled = character_from_branching(&table, cfg.t)?;
            // 1 / ((1 - t1^-2 t2)(1 - t1 t2^-2)(1 - t1^-1 t2^-1))
            let closed = expand_fraction(
                &[(Monomial::ONE, int(1))],
                &[
                    Monomial::new(ExponentForm::ZERO, -2, 1),
                    Monomial::new(ExponentForm::ZERO, 1, -2),
                    Monomial::new(ExponentForm::ZERO, -1, -1),
                ],
                Grading::T_DEPTH,
                2 * cfg.t,
                window,
            )?
            .series;
            let cmp = equal_on(&closed, &brute, &window);
            let mut check = SimpleCheck::agreement("BorelCharacter", &brute, &assembled, &window, sample_strings(&samples[..1]));
            if check.classification == Classification::Ok && !cmp.is_pass() {
                check.status = CheckStatus::Mismatch;
                check.classification = Classification::PaperDiscrepancy;
            }
            check.first_mismatch = MismatchRecord::from_comparison(&cmp);
            let data = json!({ "bruteForce": series_json(&brute) });
            Ok((vec![Check::Simple(check)], Some(data)))
        }
    }
}

fn aggregate_json(table: &BranchingTable) -> Value {
    Value::Array(
        table
            .aggregate()
            .into_iter()
            .map(|(c, mult)| {
                let mut v = serde_json::to_value(c).expect("constituent serializes");
                v["multiplicity"] = json!(mult);
                v
            })
            .collect(),
    )
}

fn pattern(table: &BranchingTable) -> Vec<((usize, usize), Constituent, usize)> {
    table
        .terms
        .iter()
        .map(|t| (t.origin, t.constituent, t.multiplicity))
        .collect()
}

fn branch(cfg: &RunConfig, root: Root) -> Body {
    let (samples, specs) = sample_specs(cfg, cfg.depth)?;
    let tables = specs
        .par_iter()
        .map(|s| branching_table(&VermaModule::new(s.clone()), root))
        .collect::<Result<Vec<_>>>()?;
    let reference = pattern(&tables[0]);
    let same = tables.iter().all(|t| pattern(t) == reference);
    let mut check = SimpleCheck::new(
        format!("Branching{}", root.label()),
        if same { CheckStatus::Pass } else { CheckStatus::Mismatch },
        sample_strings(&samples),
    )
    .with_note(format!(
        "dimension accounting holds on every weight space with n + m <= {}",
        tables[0].depth_covered
    ));
    if !same {
        check.classification = Classification::PipelineFailure;
        check.notes.push("branching patterns differ between lambda samples".into());
    }
    if let Some(i) = tables[0].finite_complete_up_to() {
        if tables[0].aggregate().keys().any(|c| matches!(c, Constituent::FiniteL(_))) {
            check.notes.push(format!("finite constituent counts are complete for i <= {i}"));
        }
    }
    let data = json!({
        "table": serde_json::to_value(&tables[0]).expect("table serializes"),
        "aggregate": aggregate_json(&tables[0]),
    });
    Ok((vec![Check::Simple(check)], Some(data)))
}

/// CSV dump of a branching table, one row per origin.
pub fn branching_csv(table: &BranchingTable) -> String {
    let mut out = String::from("root,n,m,kind,hw_c0,hw_c1,hw_c2,multiplicity\n");
    for t in &table.terms {
        let (kind, hw) = match t.constituent {
            Constituent::VermaM(f) => ("VermaM", f),
            Constituent::FiniteL(i) => ("FiniteL", ExponentForm::constant(i64::from(i))),
        };
        out.push_str(&format!(
            "{},{},{},{kind},{},{},{},{}\n",
            table.root.label(),
            t.origin.0,
            t.origin.1,
            hw.c0,
            hw.c1,
            hw.c2,
            t.multiplicity
        ));
    }
    out
}

fn spectrum(cfg: &RunConfig, root: Root) -> Body {
    let shell = cfg.depth.checked_sub(root.step_size()).ok_or_else(|| {
        Error::Usage(format!("depth {} is too small for the kappa operator of {root}", cfg.depth))
    })?;
    let (samples, specs) = sample_specs(cfg, cfg.depth)?;
    let tables = replicated_spectra(&specs, root, shell)?;
    let incoherent = specs
        .par_iter()
        .map(|s| {
            let module = VermaModule::new(s.clone());
            let table = branching_table(&module, root)?;
            spectrum_coherence(&module, &table, shell)
        })
        .collect::<Result<Vec<_>>>()?;
    let label = root.label();
    let replication = SimpleCheck::new(format!("SpectrumReplication{label}"), CheckStatus::Pass, sample_strings(&samples))
        .with_note(format!("lifted exponents agree and interpolate across samples for n + m <= {shell}"));
    let mut coherence = SimpleCheck::new(format!("SpectrumCoherence{label}"), CheckStatus::Pass, sample_strings(&samples));
    if let Some((s, (n, m))) = samples.iter().zip(&incoherent).find_map(|(s, w)| w.map(|w| (s, w))) {
        coherence.status = CheckStatus::Mismatch;
        coherence.classification = Classification::PipelineFailure;
        coherence
            .notes
            .push(format!("kernel-rank spectrum differs from the branching prediction at ({n},{m}) for lambda = ({}, {})", s.0, s.1));
    }
    let data = serde_json::to_value(&tables[0]).expect("spectrum serializes");
    Ok((vec![Check::Simple(replication), Check::Simple(coherence)], Some(data)))
}

fn closed_ids(kind: ModuleKind, root: Root, regularized: bool) -> Vec<ClosedFormId> {
    ClosedFormId::ALL
        .into_iter()
        .filter(|id| id.module_kind() == kind && id.root() == Some(root) && id.regularized() == regularized)
        .collect()
}

fn trace(cfg: &RunConfig, root: Root, pipeline: Pipeline, regularized: bool) -> Body {
    let base = cfg.spec()?;
    let mut window = cfg.window()?;
    let mut notes = Vec::new();
    if cfg.module == ModuleKind::Parabolic && root == Root::A23 && !regularized && window.max_const.is_none() {
        window = window.with_symmetric_cap();
        notes.push(format!("implicit symmetric cap c0 <= {} applied", window.min_const));
    }
    let shell = match trace_shell(&base, root, &window, regularized) {
        Ok(s) => s,
        Err(Error::Divergent(_)) if cfg.module == ModuleKind::Borel => {
            let s = cfg.depth.saturating_sub(root.step_size());
            notes.push(format!(
                "formal window sums; divergent as series (weight spaces with n + m <= {s} only)"
            ));
            s
        }
        Err(e) => return Err(e),
    };
    let depth = cfg.depth.max(shell + root.step_size());
    if depth > cfg.depth {
        notes.push(format!("depth raised from {} to {depth}", cfg.depth));
    }
    let (samples, specs) = sample_specs(cfg, depth)?;
    let ids = closed_ids(cfg.module, root, regularized);
    if pipeline == Pipeline::Closed && ids.is_empty() {
        return Err(Error::Usage(format!(
            "no closed form for the {}trace of {root} on the {} module",
            if regularized { "regularized " } else { "" },
            cfg.module.name()
        )));
    }

    let mut data = serde_json::Map::new();
    let mut checks = Vec::new();
    let brute = if pipeline.wants(Pipeline::Brute) {
        let tables = replicated_spectra(&specs, root, shell)?;
        let s = trace_from_spectra(&tables[0], &window, regularized);
        data.insert("bruteForce".into(), series_json(&s));
        Some(s)
    } else {
        None
    };
    let branching = if pipeline.wants(Pipeline::Branching) {
        let series = specs
            .par_iter()
            .map(|s| {
                let table = branching_table(&VermaModule::new(s.clone()), root)?;
                Ok(trace_from_branching_shell(&table, &window, regularized, shell))
            })
            .collect::<Result<Vec<_>>>()?;
        if series.iter().any(|s| s != &series[0]) {
            return Err(Error::Replication("branching traces differ between lambda samples".into()));
        }
        data.insert("branching".into(), series_json(&series[0]));
        Some(series.into_iter().next().expect("at least one sample"))
    } else {
        None
    };
    if let (Some(b), Some(a)) = (&brute, &branching) {
        let mut c = SimpleCheck::agreement(format!("PipelineAgreement{}", root.label()), b, a, &window, sample_strings(&samples));
        c.notes.extend(notes.iter().cloned());
        checks.push(Check::Simple(c));
    }
    if pipeline.wants(Pipeline::Closed) {
        let mut closed = serde_json::Map::new();
        for id in ids {
            let cf = closed_form(id, &base, &window)?;
            closed.insert(id.name().into(), series_json(&cf.series));
            if let Some(b) = &brute {
                let cmp = equal_on(&cf.series, b, &window);
                let mut c = SimpleCheck::new(
                    id.name(),
                    if cmp.is_pass() { CheckStatus::Pass } else { CheckStatus::Mismatch },
                    sample_strings(&samples),
                );
                c.window = Some(window);
                c.first_mismatch = MismatchRecord::from_comparison(&cmp);
                c.notes.extend(cf.notes);
                checks.push(Check::Simple(c));
            }
        }
        data.insert("closedForm".into(), Value::Object(closed));
    }
    if checks.is_empty() && !notes.is_empty() {
        let mut c = SimpleCheck::new(format!("Trace{}", root.label()), CheckStatus::Pass, sample_strings(&samples));
        c.window = Some(window);
        c.notes = notes;
        checks.push(Check::Simple(c));
    }
    Ok((checks, Some(Value::Object(data))))
}

fn verify(cfg: &RunConfig, ids: &[ClosedFormId]) -> Body {
    let spec = cfg.spec()?;
    let window = cfg.window()?;
    if let Some(id) = ids.iter().find(|id| id.module_kind() != cfg.module) {
        return Err(Error::Usage(format!(
            "{id} needs --module {}",
            id.module_kind().name()
        )));
    }
    let results: Vec<Result<_>> = ids
        .par_iter()
        .map(|&id| verify_identity(id, &spec, &window, &cfg.samples))
        .collect();
    let mut checks = Vec::new();
    for (id, r) in ids.iter().zip(results) {
        match r {
            Ok(r) => checks.push(Check::Verify(Box::new(r))),
            Err(e) if is_usage_error(&e) => return Err(e),
            Err(e) => checks.push(Check::Simple(SimpleCheck::error(id.name(), e.to_string()))),
        }
    }
    let find = |want: ClosedFormId| {
        checks.iter().position(|c| matches!(c, Check::Verify(r) if r.id == want))
    };
    if let (Some(p), Some(a)) = (find(ClosedFormId::ParabolicTrace23), find(ClosedFormId::ParabolicTrace23AltLimit)) {
        if let (Check::Verify(literal), Check::Verify(alt)) = (&checks[p], &checks[a]) {
            let verdict = levi_limit_verdict(literal, alt);
            for i in [p, a] {
                if let Check::Verify(r) = &mut checks[i] {
                    r.notes.push(verdict.clone());
                }
            }
        }
    }
    Ok((checks, None))
}
