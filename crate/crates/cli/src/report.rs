//! The JSON report written by every subcommand. Layout in `docs/formats.md`.

use commprob::{Error, ExactRational, FiniteGroup};
use serde::Serialize;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: CommandEcho,
    pub group: Option<GroupDescriptor>,
    pub results: Vec<ResultEntry>,
    pub assertions: Vec<Assertion>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rows: Option<Vec<crate::scan::ScanRow>>,
    pub summary: Option<String>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct CommandEcho {
    pub name: String,
    pub args: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct GroupDescriptor {
    pub source: String,
    pub name: String,
    pub order: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ResultEntry {
    pub label: String,
    pub value: ExactRational,
    /// Rounded rendering for humans; never parse it back.
    pub display_decimal: String,
}

#[derive(Debug, Serialize)]
pub struct Assertion {
    pub name: String,
    pub pass: bool,
    /// Negative controls: `pass` means the check failed as it should.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub expected_fail: bool,
    pub witness: String,
}

impl ResultEntry {
    pub fn new(label: impl Into<String>, value: ExactRational) -> Self {
        let display_decimal = value.to_decimal(12);
        ResultEntry {
            label: label.into(),
            value,
            display_decimal,
        }
    }

    pub fn integer(label: impl Into<String>, v: impl Into<num_bigint::BigInt>) -> Self {
        Self::new(label, ExactRational::from_integer(v))
    }
}

impl Assertion {
    pub fn check(name: impl Into<String>, pass: bool, witness: impl Into<String>) -> Self {
        Assertion {
            name: name.into(),
            pass,
            expected_fail: false,
            witness: witness.into(),
        }
    }

    pub fn expected_fail(
        name: impl Into<String>,
        failed: bool,
        witness: impl Into<String>,
    ) -> Self {
        Assertion {
            name: name.into(),
            pass: failed,
            expected_fail: true,
            witness: witness.into(),
        }
    }
}

impl Report {
    pub fn new(name: &str, args: Vec<String>) -> Self {
        Report {
            schema: SCHEMA,
            command: CommandEcho {
                name: name.to_string(),
                args,
            },
            group: None,
            results: Vec::new(),
            assertions: Vec::new(),
            rows: None,
            summary: None,
            warnings: Vec::new(),
        }
    }

    pub fn set_group(&mut self, source: &str, g: &FiniteGroup) {
        self.group = Some(GroupDescriptor {
            source: source.to_string(),
            name: g.name().to_string(),
            order: g.order(),
        });
    }

    pub fn all_pass(&self) -> bool {
        self.assertions.iter().all(|a| a.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// A failure that ends the process with a specific exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

pub const EXIT_ASSERTION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_HYPOTHESIS: i32 = 4;

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        Error::HypothesisNotMet(_)
        | Error::AbelianInput
        | Error::NotClass2ExponentP(_)
        | Error::NotNormal { .. } => EXIT_HYPOTHESIS,
        Error::Violation(_) => EXIT_ASSERTION,
        Error::NotAGroup(_)
        | Error::ClosureExceedsCap { .. }
        | Error::InvalidParameters(_)
        | Error::Domain(_)
        | Error::Parse(_)
        | Error::Io(_) => EXIT_INPUT,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: exit_code(&e),
            message: e.to_string(),
        }
    }
}
