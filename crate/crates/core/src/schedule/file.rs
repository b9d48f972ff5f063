//! Schedule files: TOML with keys `K`, `Delta0`, `tau`, `delta`, `eta`,
//! `Delta` and an optional `log2 = true` under which the four arrays hold
//! base-2 exponents. `Delta0` is always a plain integer. An optional
//! `weights0` names the block-0 weight convention; only `"unit"` exists.

use std::path::Path;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::{CPlusSchedule, Level, ScheduleError};

// Exponents above this would need more than a mebibit per value.
const MAX_LOG2_EXPONENT: u64 = 1 << 23;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScheduleDoc {
    #[serde(rename = "K")]
    k: usize,
    #[serde(rename = "Delta0")]
    delta0: u64,
    tau: Vec<u64>,
    delta: Vec<u64>,
    eta: Vec<u64>,
    #[serde(rename = "Delta")]
    size: Vec<u64>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    log2: bool,
    #[serde(default, skip_serializing)]
    weights0: Option<String>,
}

fn exact_log2(x: &BigUint) -> Option<u64> {
    let tz = x.trailing_zeros()?;
    (x.bits() == tz + 1).then_some(tz)
}

impl CPlusSchedule {
    pub fn from_toml_str(text: &str) -> Result<Self, ScheduleError> {
        let doc: ScheduleDoc =
            toml::from_str(text).map_err(|e| ScheduleError::Parse(e.message().to_string()))?;
        if let Some(w) = doc.weights0.as_deref().filter(|&w| w != "unit") {
            return Err(ScheduleError::Parse(format!(
                "unknown weights0 convention {w:?}, expected \"unit\""
            )));
        }
        for (name, arr) in [
            ("tau", &doc.tau),
            ("delta", &doc.delta),
            ("eta", &doc.eta),
            ("Delta", &doc.size),
        ] {
            if arr.len() != doc.k {
                return Err(ScheduleError::Parse(format!(
                    "array {name} has {} entries, expected K = {}",
                    arr.len(),
                    doc.k
                )));
            }
        }
        let value = |x: u64| -> Result<BigUint, ScheduleError> {
            if !doc.log2 {
                return Ok(BigUint::from(x));
            }
            if x > MAX_LOG2_EXPONENT {
                return Err(ScheduleError::Parse(format!(
                    "log2 exponent {x} exceeds {MAX_LOG2_EXPONENT}"
                )));
            }
            Ok(BigUint::one() << x)
        };
        let levels = (0..doc.k)
            .map(|i| {
                Ok(Level {
                    tau: value(doc.tau[i])?,
                    delta: value(doc.delta[i])?,
                    eta: value(doc.eta[i])?,
                    size: value(doc.size[i])?,
                })
            })
            .collect::<Result<Vec<_>, ScheduleError>>()?;
        let mut s = CPlusSchedule::new(doc.delta0.into(), levels)?;
        s.log2 = doc.log2;
        Ok(s)
    }

    pub fn to_toml_string(&self) -> Result<String, ScheduleError> {
        let enc = |x: &BigUint| -> Result<u64, ScheduleError> {
            if self.log2 {
                exact_log2(x).ok_or_else(|| {
                    ScheduleError::Invalid(format!("{x} is not a power of two"))
                })
            } else {
                x.to_i64().map(|v| v as u64).ok_or_else(|| {
                    ScheduleError::Invalid(format!(
                        "value with {} bits needs the log2 representation",
                        x.bits()
                    ))
                })
            }
        };
        let column = |f: fn(&Level) -> &BigUint| -> Result<Vec<u64>, ScheduleError> {
            self.levels.iter().map(|l| enc(f(l))).collect()
        };
        let doc = ScheduleDoc {
            k: self.levels.len(),
            delta0: self
                .delta0
                .to_i64()
                .ok_or_else(|| ScheduleError::Invalid("Delta0 exceeds 2^63".into()))?
                as u64,
            tau: column(|l| &l.tau)?,
            delta: column(|l| &l.delta)?,
            eta: column(|l| &l.eta)?,
            size: column(|l| &l.size)?,
            log2: self.log2,
            weights0: None,
        };
        toml::to_string(&doc).map_err(|e| ScheduleError::Invalid(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, ScheduleError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ScheduleError::Parse(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn save(&self, path: &Path) -> Result<(), ScheduleError> {
        std::fs::write(path, self.to_toml_string()?)
            .map_err(|e| ScheduleError::Parse(format!("{}: {e}", path.display())))
    }
}
