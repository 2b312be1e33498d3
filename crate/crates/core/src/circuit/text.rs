//! Line-oriented circuit text format.
//!
//! ```text
//! qubits 6
//! #meta variant waterfall
//! reg f0 0 3
//! reg f1 3 3
//! relabel 0 1
//! relabel 1 0
//! #tag SQUARE#1
//! cx q1 q0
//! ccx q0 q3 q5
//! ```
//!
//! `#tag <label>` labels every following gate until the next `#tag` line
//! (a bare `#tag` clears it). `#meta <key> <value>` carries free-form
//! metadata. Any other `#` line is a comment. `relabel i j` sets readout
//! wire `i` to physical qubit `j`; omitted wires are identity.

use std::fmt::Write as _;

use thiserror::Error;

use super::{Circuit, Gate, GateKind, RegisterRef};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

/// A parsed circuit file: the circuit plus its `#meta` entries in file order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CircuitDocument {
    pub circuit: Circuit,
    pub meta: Vec<(String, String)>,
}

impl CircuitDocument {
    pub fn meta(&self, key: &str) -> Option<&str> {
        self.meta
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

pub fn emit(c: &Circuit) -> String {
    emit_with_meta(c, &[])
}

pub fn emit_with_meta(c: &Circuit, meta: &[(String, String)]) -> String {
    let mut out = String::with_capacity(16 * c.len() + 64);
    let _ = writeln!(out, "qubits {}", c.width());
    for (k, v) in meta {
        let _ = writeln!(out, "#meta {k} {v}");
    }
    for r in c.registers() {
        let _ = writeln!(out, "reg {} {} {}", r.name, r.start, r.len);
    }
    for (i, &q) in c.relabel().iter().enumerate() {
        if i as u32 != q {
            let _ = writeln!(out, "relabel {i} {q}");
        }
    }
    let mut current = None;
    for g in c.gates() {
        if g.tag() != current {
            current = g.tag();
            match current {
                Some(t) => {
                    let _ = writeln!(out, "#tag {}", c.tag_name(t));
                }
                None => out.push_str("#tag\n"),
            }
        }
        let _ = writeln!(out, "{g}");
    }
    out
}

fn parse_qubit(tok: &str) -> Option<u32> {
    tok.strip_prefix('q')?.parse().ok()
}

pub fn parse(text: &str) -> Result<CircuitDocument, ParseError> {
    let mut circuit: Option<Circuit> = None;
    let mut meta = Vec::new();
    let mut relabel: Option<Vec<u32>> = None;
    let mut tag: Option<String> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let err = |msg: String| ParseError { line: line_no, msg };
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let rest = rest.trim_start();
            if let Some(t) = rest.strip_prefix("tag") {
                if t.is_empty() || t.starts_with(char::is_whitespace) {
                    let t = t.trim();
                    tag = (!t.is_empty()).then(|| t.to_string());
                }
            } else if let Some(m) = rest.strip_prefix("meta ") {
                let mut parts = m.trim().splitn(2, char::is_whitespace);
                let key = parts.next().unwrap_or_default().to_string();
                let value = parts.next().unwrap_or_default().trim().to_string();
                meta.push((key, value));
            }
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let head = toks[0];
        if head == "qubits" {
            if circuit.is_some() {
                return Err(err("duplicate qubits header".into()));
            }
            let [_, n] = toks[..] else {
                return Err(err("expected `qubits <N>`".into()));
            };
            let n: usize = n
                .parse()
                .map_err(|_| err(format!("bad qubit count {n:?}")))?;
            circuit = Some(Circuit::new(n));
            relabel = Some((0..n as u32).collect());
            continue;
        }
        let Some(c) = circuit.as_mut() else {
            return Err(err("missing `qubits <N>` header".into()));
        };
        match head {
            "reg" => {
                let [_, name, start, len] = toks[..] else {
                    return Err(err("expected `reg <name> <start> <len>`".into()));
                };
                let start = start
                    .parse()
                    .map_err(|_| err(format!("bad start {start:?}")))?;
                let len = len
                    .parse()
                    .map_err(|_| err(format!("bad length {len:?}")))?;
                c.add_register(RegisterRef::new(name, start, len))
                    .map_err(|e| err(e.to_string()))?;
            }
            "relabel" => {
                let [_, i, j] = toks[..] else {
                    return Err(err("expected `relabel <i> <j>`".into()));
                };
                let (Ok(i), Ok(j)) = (i.parse::<usize>(), j.parse::<u32>()) else {
                    return Err(err("relabel indices must be integers".into()));
                };
                let r = relabel.as_mut().expect("set with header");
                if i >= r.len() || j as usize >= r.len() {
                    return Err(err(format!("relabel {i} {j} out of range")));
                }
                r[i] = j;
            }
            mnemonic => {
                let kind = GateKind::from_mnemonic(mnemonic)
                    .ok_or_else(|| err(format!("unknown gate {mnemonic:?}")))?;
                let qubits = toks[1..]
                    .iter()
                    .map(|t| parse_qubit(t).ok_or_else(|| err(format!("bad qubit {t:?}"))))
                    .collect::<Result<Vec<u32>, _>>()?;
                let gate = Gate::new(kind, &qubits).map_err(|e| err(e.to_string()))?;
                c.append_block(tag.as_deref(), [gate])
                    .map_err(|e| err(e.to_string()))?;
            }
        }
    }

    let mut circuit = circuit.ok_or(ParseError {
        line: 0,
        msg: "empty file: missing `qubits <N>` header".into(),
    })?;
    circuit
        .set_relabel(relabel.expect("set with header"))
        .map_err(|e| ParseError {
            line: 0,
            msg: e.to_string(),
        })?;
    Ok(CircuitDocument { circuit, meta })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Circuit {
        let mut c = Circuit::new(0);
        c.alloc_register("a", 2);
        c.alloc_register("b", 1);
        c.append_block(Some("MULT#1"), [Gate::toffoli(0, 1, 2), Gate::swap(0, 1)])
            .unwrap();
        c.push(Gate::x(2)).unwrap();
        c.append_block(Some("SQUARE#1"), [Gate::cnot(1, 0), Gate::t(1)])
            .unwrap();
        c.set_relabel(vec![1, 0, 2]).unwrap();
        c
    }

    #[test]
    fn emits_expected_text() {
        let text = emit(&sample());
        assert_eq!(
            text,
            "qubits 3\nreg a 0 2\nreg b 2 1\nrelabel 0 1\nrelabel 1 0\n\
             #tag MULT#1\nccx q0 q1 q2\nswap q0 q1\n#tag\nx q2\n\
             #tag SQUARE#1\ncx q1 q0\nt q1\n"
        );
    }

    #[test]
    fn parse_inverts_emit() {
        let c = sample();
        let meta = vec![("variant".to_string(), "waterfall".to_string())];
        let doc = parse(&emit_with_meta(&c, &meta)).unwrap();
        assert_eq!(doc.circuit, c);
        assert_eq!(doc.meta("variant"), Some("waterfall"));
    }

    #[test]
    fn errors_report_line_numbers() {
        assert_eq!(parse("cx q0 q1\n").unwrap_err().line, 1);
        assert_eq!(parse("qubits 2\n\ncx q0 q2\n").unwrap_err().line, 3);
        assert_eq!(parse("qubits 2\nfoo q1\n").unwrap_err().line, 2);
        assert_eq!(parse("qubits 2\ncx q0 q0\n").unwrap_err().line, 2);
        assert_eq!(parse("qubits 2\ncx q0 r1\n").unwrap_err().line, 2);
        assert_eq!(parse("qubits 2\nreg a 0 3\n").unwrap_err().line, 2);
        assert_eq!(parse("qubits 2\nrelabel 0 1\n").unwrap_err().line, 0);
        assert_eq!(parse("").unwrap_err().line, 0);
    }

    #[test]
    fn plain_comments_are_ignored() {
        let doc = parse("# hello\nqubits 1\n# tagline is not a tag\nx q0\n").unwrap();
        assert_eq!(doc.circuit.len(), 1);
        assert_eq!(doc.circuit.gate_tag(&doc.circuit.gates()[0]), None);
    }
}
