use super::{LpSolution, LpSolver, LpStatus, SolverCapabilities};
use crate::model::io::write_lp;
use crate::model::LinearProgram;
use crate::Error;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::{Command, Stdio};
use std::time::Instant;

/// Runs an external program per solve. The program reads an `[lp]` section on
/// stdin and answers on stdout with lines
///
/// ```text
/// status optimal
/// objective 6.666666666666667
/// x 6.666666666666667
/// duals 0.6666666666666666   # optional
/// ```
#[derive(Debug, Clone)]
pub struct ExecSolver {
    pub program: PathBuf,
    pub args: Vec<String>,
}

impl ExecSolver {
    pub fn new(program: impl Into<PathBuf>) -> Self {
        ExecSolver {
            program: program.into(),
            args: Vec::new(),
        }
    }
}

fn failure(msg: impl Into<String>) -> Error {
    Error::SolverFailure(msg.into())
}

/// Status, objective, `x` and duals of a reply.
pub type Reply = (LpStatus, Option<f64>, Vec<f64>, Option<Vec<f64>>);

/// Parses the reply format described on [`ExecSolver`].
pub fn parse_reply(text: &str, n: usize) -> Result<Reply, Error> {
    let mut status = None;
    let mut objective = None;
    let mut x = None;
    let mut duals = None;
    let floats = |rest: &[&str]| -> Result<Vec<f64>, Error> {
        rest.iter()
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| failure(format!("bad number `{t}` in reply")))
            })
            .collect()
    };
    for line in text.lines() {
        let tok: Vec<&str> = line
            .split('#')
            .next()
            .unwrap_or("")
            .split_whitespace()
            .collect();
        match tok.as_slice() {
            [] => {}
            ["status", s] => status = Some(s.parse::<LpStatus>().map_err(failure)?),
            ["objective", v] => objective = Some(floats(&[v])?[0]),
            ["x", rest @ ..] => x = Some(floats(rest)?),
            ["duals", rest @ ..] => duals = Some(floats(rest)?),
            _ => return Err(failure(format!("unexpected reply line `{line}`"))),
        }
    }
    let status = status.ok_or_else(|| failure("reply lacks a status line"))?;
    let x = match x {
        Some(x) if x.len() == n => x,
        Some(x) => {
            return Err(failure(format!(
                "reply has {} values, expected {n}",
                x.len()
            )))
        }
        None if status == LpStatus::Optimal => return Err(failure("optimal reply lacks x")),
        None => vec![0.0; n],
    };
    Ok((status, objective, x, duals))
}

impl LpSolver for ExecSolver {
    fn name(&self) -> &str {
        "exec"
    }

    fn capabilities(&self) -> SolverCapabilities {
        SolverCapabilities {
            max_rows: None,
            max_cols: None,
            warm_start: false,
        }
    }

    fn solve(&mut self, lp: &LinearProgram) -> Result<LpSolution, Error> {
        let start = Instant::now();
        let mut text = String::new();
        write_lp(&mut text, lp);
        let mut child = Command::new(&self.program)
            .args(&self.args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()
            .map_err(|e| failure(format!("cannot start {}: {e}", self.program.display())))?;
        child
            .stdin
            .take()
            .expect("stdin is piped")
            .write_all(text.as_bytes())
            .map_err(|e| failure(format!("writing to solver: {e}")))?;
        let output = child
            .wait_with_output()
            .map_err(|e| failure(format!("waiting for solver: {e}")))?;
        if !output.status.success() {
            return Err(failure(format!(
                "{} exited with {}: {}",
                self.program.display(),
                output.status,
                String::from_utf8_lossy(&output.stderr).trim()
            )));
        }
        let reply = String::from_utf8_lossy(&output.stdout);
        let (status, objective, x, duals) = parse_reply(&reply, lp.num_vars())?;
        Ok(LpSolution {
            status,
            objective: objective.unwrap_or_else(|| lp.objective_value(&x)),
            x,
            duals,
            iterations: 0,
            wall_time: start.elapsed(),
            basis: None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reply_parsing() {
        let (s, o, x, d) = parse_reply("status optimal\nobjective 3\nx 1 2\n", 2).unwrap();
        assert_eq!(
            (s, o, x, d),
            (LpStatus::Optimal, Some(3.0), vec![1.0, 2.0], None)
        );
        assert!(parse_reply("status optimal\nx 1\n", 2).is_err());
        assert!(parse_reply("objective 1\n", 0).is_err());
        let (s, _, x, _) = parse_reply("status infeasible\n", 2).unwrap();
        assert_eq!((s, x), (LpStatus::Infeasible, vec![0.0, 0.0]));
    }
}
