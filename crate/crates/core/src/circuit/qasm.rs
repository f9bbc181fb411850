//! OpenQASM 3 emission, plus a re-simulator for the emitted subset.

use std::fmt::Write as _;

use super::{apply_cnot, apply_single, Circuit, Gate};
use crate::error::{Error, Result};
use crate::matrix::{cis, wrap_angle, Mat2, Mat4};
use crate::synth::{zyz, ZyzAngles};

const HEADER: &str = "OPENQASM 3.0;\n\
include \"stdgates.inc\";\n\
gate u4(alpha, beta, gamma, delta) q { U(gamma, beta, delta) q; gphase(alpha - (beta + delta) / 2); }\n\
qubit[2] q;\n";

/// Emits one statement per gate, in circuit order.
///
/// Single-qubit gates become `u4(α, β, γ, δ)`, the Euler form
/// `e^{iα} Rz(β) Ry(γ) Rz(δ)`; gates of the exact form `diag(1, e^{iθ})`
/// become `p(θ)`. Wire `w` is `q[w]`.
pub fn to_qasm3(c: &Circuit) -> String {
    let mut out = String::from(HEADER);
    for g in &c.gates {
        match g {
            Gate::Cnot { control, target } => {
                writeln!(out, "cx q[{control}], q[{target}];").unwrap();
            }
            Gate::Single { wire, matrix, .. } => {
                let a = zyz(matrix).expect("circuit gates are unitary");
                if a.gamma == 0.0 && wrap_angle(a.alpha - (a.beta + a.delta) / 2.0).abs() <= 1e-15 {
                    writeln!(out, "p({:?}) q[{wire}];", a.beta + a.delta).unwrap();
                } else {
                    writeln!(
                        out,
                        "u4({:?}, {:?}, {:?}, {:?}) q[{wire}];",
                        a.alpha, a.beta, a.gamma, a.delta
                    )
                    .unwrap();
                }
            }
        }
    }
    out
}

fn parse_err(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("qasm line {}: {msg}", line + 1))
}

fn parse_qubit(s: &str, line: usize) -> Result<usize> {
    let s = s.trim();
    let inner = s
        .strip_prefix("q[")
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| parse_err(line, format!("expected qubit operand, got {s:?}")))?;
    match inner.trim() {
        "0" => Ok(0),
        "1" => Ok(1),
        other => Err(parse_err(
            line,
            format!("qubit index {other:?} out of range"),
        )),
    }
}

fn parse_args(s: &str, line: usize) -> Result<Vec<f64>> {
    s.split(',')
        .map(|a| {
            a.trim()
                .parse::<f64>()
                .map_err(|e| parse_err(line, format!("bad angle {a:?}: {e}")))
        })
        .collect()
}

/// Splits `name(args) operands` into its three parts.
fn split_call(stmt: &str) -> (&str, Option<&str>, &str) {
    match (stmt.find('('), stmt.find(')')) {
        (Some(open), Some(close)) if open < close => (
            stmt[..open].trim(),
            Some(&stmt[open + 1..close]),
            stmt[close + 1..].trim(),
        ),
        _ => match stmt.split_once(' ') {
            Some((name, rest)) => (name.trim(), None, rest.trim()),
            None => (stmt.trim(), None, ""),
        },
    }
}

/// Re-simulates a program produced by [`to_qasm3`].
///
/// Accepts the statements `u4`, `p`, `U`, `cx` and `gphase`; header lines
/// are skipped.
pub fn simulate_qasm3(text: &str) -> Result<Mat4> {
    let mut m = Mat4::identity();
    for (line, raw) in text.lines().enumerate() {
        let stmt = raw.trim();
        if stmt.is_empty()
            || stmt.starts_with("OPENQASM")
            || stmt.starts_with("include")
            || stmt.starts_with("gate ")
            || stmt.starts_with("qubit")
            || stmt.starts_with("//")
        {
            continue;
        }
        let stmt = stmt
            .strip_suffix(';')
            .ok_or_else(|| parse_err(line, "missing ';'"))?;
        let (name, args, operands) = split_call(stmt);
        let args = args
            .map(|a| parse_args(a, line))
            .transpose()?
            .unwrap_or_default();
        let expect = |n: usize| {
            if args.len() == n {
                Ok(())
            } else {
                Err(parse_err(line, format!("{name} takes {n} angles")))
            }
        };
        match name {
            "cx" => {
                let (c, t) = operands
                    .split_once(',')
                    .ok_or_else(|| parse_err(line, "cx needs two operands"))?;
                let (c, t) = (parse_qubit(c, line)?, parse_qubit(t, line)?);
                if c == t {
                    return Err(parse_err(line, "cx on a single qubit"));
                }
                apply_cnot(&mut m, c);
            }
            "u4" => {
                expect(4)?;
                let g = ZyzAngles {
                    alpha: args[0],
                    beta: args[1],
                    gamma: args[2],
                    delta: args[3],
                }
                .to_matrix();
                apply_single(&mut m, parse_qubit(operands, line)?, &g);
            }
            "U" => {
                expect(3)?;
                let (theta, phi, lambda) = (args[0], args[1], args[2]);
                let g = ZyzAngles {
                    alpha: (phi + lambda) / 2.0,
                    beta: phi,
                    gamma: theta,
                    delta: lambda,
                }
                .to_matrix();
                apply_single(&mut m, parse_qubit(operands, line)?, &g);
            }
            "p" => {
                expect(1)?;
                apply_single(&mut m, parse_qubit(operands, line)?, &Mat2::phase(args[0]));
            }
            "gphase" => {
                expect(1)?;
                m = m.scale(cis(args[0]));
            }
            other => return Err(parse_err(line, format!("unsupported statement {other:?}"))),
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn body(text: &str) -> Vec<&str> {
        text.lines().skip(HEADER.lines().count()).collect()
    }

    #[test]
    fn cnot_statement() {
        let q = to_qasm3(&Circuit::new().cnot(1, 0));
        assert_eq!(body(&q), vec!["cx q[1], q[0];"]);
    }

    #[test]
    fn phase_gate_statement() {
        let q = to_qasm3(&Circuit::new().single(1, "E", Mat2::phase(PI / 4.0)));
        let lines = body(&q);
        assert_eq!(lines.len(), 1);
        assert!(lines[0].starts_with("p("), "{}", lines[0]);
        let angle: f64 = lines[0][2..lines[0].find(')').unwrap()].parse().unwrap();
        assert!((angle - PI / 4.0).abs() < 1e-15);
        assert!(lines[0].ends_with("q[1];"));
    }

    #[test]
    fn generic_gate_resimulates() {
        let c = Circuit::new().single(0, "H", Mat2::H).cnot(0, 1).single(
            1,
            "custom",
            Mat2::ry(0.3) * Mat2::rz(1.1),
        );
        let q = to_qasm3(&c);
        assert_eq!(body(&q).len(), 3);
        assert!(simulate_qasm3(&q).unwrap().distance(&c.evaluate()) <= 1e-12);
    }

    #[test]
    fn u_builtin_matches_definition() {
        // U(θ,φ,λ) = [[cos, −e^{iλ} sin], [e^{iφ} sin, e^{i(φ+λ)} cos]]
        let (t, p, l) = (0.4, 1.3, -0.6);
        let m = simulate_qasm3(&format!("U({t}, {p}, {l}) q[0];")).unwrap();
        let (s, co) = (t / 2.0_f64).sin_cos();
        let expected = Mat2::new(cis(0.0) * co, -cis(l) * s, cis(p) * s, cis(p + l) * co);
        assert!(m.distance(&crate::matrix::kron(&Mat2::IDENTITY, &expected)) < 1e-15);
    }

    #[test]
    fn rejects_unknown_statements() {
        assert!(simulate_qasm3("h q[0];").is_err());
        assert!(simulate_qasm3("cx q[0], q[0];").is_err());
        assert!(simulate_qasm3("p(0.1) q[2];").is_err());
    }
}
