//! JSON report layout shared by all subcommands.

use serde::Serialize;
use serde_json::Value;
use sl3theta_core::qseries::{equal_on, Comparison, FormalSeries, Window};
use sl3theta_core::theta::{Classification, MismatchRecord, Status, VerifyReport};

use crate::config::ConfigView;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Mismatch,
    Error,
}

/// A check that is not a full identity verification.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SimpleCheck {
    pub id: String,
    pub status: CheckStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pipeline_agreement: Option<Status>,
    pub classification: Classification,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<Window>,
    pub lambda_samples: Vec<[String; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_mismatch: Option<MismatchRecord>,
    pub notes: Vec<String>,
}

impl SimpleCheck {
    pub fn new(id: impl Into<String>, status: CheckStatus, samples: Vec<[String; 2]>) -> Self {
        let classification = match status {
            CheckStatus::Pass => Classification::Ok,
            CheckStatus::Mismatch => Classification::PaperDiscrepancy,
            CheckStatus::Error => Classification::PipelineFailure,
        };
        SimpleCheck {
            id: id.into(),
            status,
            pipeline_agreement: None,
            classification,
            window: None,
            lambda_samples: samples,
            first_mismatch: None,
            notes: Vec::new(),
        }
    }

    pub fn error(id: impl Into<String>, message: String) -> Self {
        let mut c = SimpleCheck::new(id, CheckStatus::Error, Vec::new());
        c.notes.push(message);
        c
    }

    /// Agreement between two independent pipelines; a difference is a
    /// pipeline failure.
    pub fn agreement(id: impl Into<String>, a: &FormalSeries, b: &FormalSeries, window: &Window, samples: Vec<[String; 2]>) -> Self {
        let cmp = equal_on(a, b, window);
        let status = if cmp.is_pass() { Status::Pass } else { Status::Mismatch };
        let mut c = SimpleCheck::new(id, CheckStatus::Pass, samples);
        c.pipeline_agreement = Some(status);
        c.window = Some(*window);
        if let Comparison::Mismatch { monomial, left, right } = cmp {
            c.status = CheckStatus::Mismatch;
            c.classification = Classification::PipelineFailure;
            c.notes.push(format!("{monomial}: {left} vs {right}"));
        }
        c
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }
}

#[allow(clippy::large_enum_variant)]
#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum Check {
    Verify(Box<VerifyReport>),
    Simple(SimpleCheck),
}

impl Check {
    pub fn classification(&self) -> Classification {
        match self {
            Check::Verify(r) => r.classification,
            Check::Simple(c) => c.classification,
        }
    }
}

#[derive(Serialize)]
pub struct Report {
    pub command: String,
    pub config: ConfigView,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data: Option<Value>,
}

impl Report {
    pub fn all_ok(&self) -> bool {
        self.checks.iter().all(|c| c.classification() == Classification::Ok)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
