use multiband_core::{Error, LpStatus};
use std::fmt::Display;

pub const OK: u8 = 0;
pub const NO_OPTIMUM: u8 = 1;
pub const INPUT: u8 = 2;
pub const INTERNAL: u8 = 3;

/// An error together with the exit code it maps to.
#[derive(Debug)]
pub struct Fail {
    pub code: u8,
    pub err: anyhow::Error,
}

impl Fail {
    pub fn input(msg: impl Display) -> Self {
        Fail {
            code: INPUT,
            err: anyhow::anyhow!("{msg}"),
        }
    }

    pub fn internal(msg: impl Display) -> Self {
        Fail {
            code: INTERNAL,
            err: anyhow::anyhow!("{msg}"),
        }
    }

    pub fn context(mut self, ctx: impl Display + Send + Sync + 'static) -> Self {
        self.err = self.err.context(ctx);
        self
    }
}

pub fn status_code(status: LpStatus) -> u8 {
    match status {
        LpStatus::Optimal => OK,
        _ => NO_OPTIMUM,
    }
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Flow(_) => INTERNAL,
            Error::Solver { .. } | Error::SolverFailure(_) => NO_OPTIMUM,
            _ => INPUT,
        };
        Fail {
            code,
            err: e.into(),
        }
    }
}

impl From<std::io::Error> for Fail {
    fn from(e: std::io::Error) -> Self {
        Fail {
            code: INPUT,
            err: e.into(),
        }
    }
}

impl From<multiband_core::model::io::ParseError> for Fail {
    fn from(e: multiband_core::model::io::ParseError) -> Self {
        Fail {
            code: INPUT,
            err: e.into(),
        }
    }
}

impl From<serde_json::Error> for Fail {
    fn from(e: serde_json::Error) -> Self {
        Fail {
            code: INTERNAL,
            err: e.into(),
        }
    }
}

pub type CmdResult = Result<u8, Fail>;
