use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// How a decision is computed: by brute force over the members, by the
/// structural characterization, or by both with an agreement check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Mode {
    Oracle,
    Theorem,
    #[default]
    Both,
}

impl Mode {
    /// Runs the requested side(s); under [`Mode::Both`] a disagreement is a
    /// [`Error::ModeMismatch`].
    pub(crate) fn decide(
        self,
        what: &str,
        oracle: impl FnOnce() -> Result<bool>,
        theorem: impl FnOnce() -> Result<bool>,
    ) -> Result<bool> {
        match self {
            Mode::Oracle => oracle(),
            Mode::Theorem => theorem(),
            Mode::Both => {
                let (o, t) = (oracle()?, theorem()?);
                if o != t {
                    return Err(Error::ModeMismatch(format!(
                        "{what}: oracle says {o}, characterization says {t}"
                    )));
                }
                Ok(o)
            }
        }
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "oracle" => Ok(Mode::Oracle),
            "theorem" => Ok(Mode::Theorem),
            "both" => Ok(Mode::Both),
            other => Err(Error::InvalidArgument(format!(
                "unknown mode {other:?} (expected oracle, theorem or both)"
            ))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Oracle => "oracle",
            Mode::Theorem => "theorem",
            Mode::Both => "both",
        })
    }
}
