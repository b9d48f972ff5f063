//! Status vocabulary shared by the schedule validator and the analysis checkers.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    /// A limit or infinite-sum hypothesis checked only on the finite range.
    FiniteProxyPass,
    /// A supremum evaluated up to a horizon rather than over a full period.
    HorizonLimited,
    /// The quantifier range was empty.
    Vacuous,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn proxy(ok: bool) -> Self {
        if ok {
            Status::FiniteProxyPass
        } else {
            Status::Fail
        }
    }

    pub fn is_failure(self) -> bool {
        self == Status::Fail
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::FiniteProxyPass => "finite-proxy-pass",
            Status::HorizonLimited => "horizon-limited",
            Status::Vacuous => "vacuous",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One named condition with its outcome and a human-readable witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionResult {
    pub name: String,
    pub status: Status,
    pub witness: String,
}

impl ConditionResult {
    pub fn new(name: impl Into<String>, status: Status, witness: impl Into<String>) -> Self {
        ConditionResult {
            name: name.into(),
            status,
            witness: witness.into(),
        }
    }
}
