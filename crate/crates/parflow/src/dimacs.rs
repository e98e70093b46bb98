//! DIMACS maximum-flow format.
//!
//! Recognized problem-file lines: `c` comments, one `p max <n> <m>` problem
//! line, `n <id> s|t` endpoint designators and `a <u> <v> <cap>` arc lines.
//! Vertex ids are 1-based in files and 0-based in memory. Flow-result files
//! carry one `s <value>` line plus `f <u> <v> <flow>` lines.

use std::io::{self, BufRead, Write};

use thiserror::Error;

use crate::graph::{BuildError, Capacity, FlowAssignment, FlowNetwork};

/// A network plus provenance, as read from a file or produced by a generator.
#[derive(Debug)]
pub struct ProblemInstance {
    pub network: FlowNetwork,
    /// Short identifier used in reports and benchmark records.
    pub name: String,
    /// Human-readable provenance: generator parameters or file origin.
    pub meta: String,
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("read failed: {0}")]
    Io(#[from] io::Error),
    #[error("no problem line (p max <n> <m>) found")]
    MissingProblemLine,
    #[error("line {line}: second problem line")]
    DuplicateProblemLine { line: usize },
    #[error("line {line}: malformed problem line, expected p max <n> <m>")]
    BadProblemLine { line: usize },
    #[error("line {line}: {kind} line before the problem line")]
    LineBeforeProblem { line: usize, kind: char },
    #[error("line {line}: malformed node line, expected n <id> s|t")]
    BadNodeLine { line: usize },
    #[error("line {line}: node designator must be s or t, got {got:?}")]
    BadDesignator { line: usize, got: String },
    #[error("line {line}: duplicate {which} designator")]
    DuplicateDesignator { line: usize, which: char },
    #[error("line {line}: source and sink designate the same vertex")]
    SourceEqualsSink { line: usize },
    #[error("line {line}: vertex id {id} out of range 1..={max}")]
    IdOutOfRange { line: usize, id: usize, max: usize },
    #[error("line {line}: malformed arc line, expected a <u> <v> <cap>")]
    BadArcLine { line: usize },
    #[error("line {line}: capacity {token:?} is not a 64-bit integer")]
    BadCapacity { line: usize, token: String },
    #[error("line {line}: negative capacity {cap}")]
    NegativeCapacity { line: usize, cap: i64 },
    #[error("line {line}: unknown line type {tag:?}")]
    UnknownLineType { line: usize, tag: String },
    #[error("problem line declared {declared} arcs, file has {found}")]
    ArcCountMismatch { declared: usize, found: usize },
    #[error("no source designator (n <id> s) found")]
    MissingSource,
    #[error("no sink designator (n <id> t) found")]
    MissingSink,
    #[error("no flow value line (s <value>) found")]
    MissingValueLine,
    #[error("line {line}: second flow value line")]
    DuplicateValueLine { line: usize },
    #[error("line {line}: malformed flow line, expected f <u> <v> <flow>")]
    BadFlowLine { line: usize },
    #[error("network rejected: {0}")]
    Build(#[from] BuildError),
}

fn parse_id(
    token: &str,
    line: usize,
    max: usize,
    malformed: impl Fn() -> ParseError,
) -> Result<usize, ParseError> {
    let id: usize = token.parse().map_err(|_| malformed())?;
    if id == 0 || id > max {
        return Err(ParseError::IdOutOfRange { line, id, max });
    }
    Ok(id - 1)
}

/// Parses a DIMACS maximum-flow problem. Zero-capacity arc lines count
/// toward the declared arc total but produce no arcs in the network.
pub fn parse_dimacs(reader: impl BufRead) -> Result<ProblemInstance, ParseError> {
    let mut problem: Option<(usize, usize)> = None;
    let mut source: Option<usize> = None;
    let mut sink: Option<usize> = None;
    let mut edges: Vec<(usize, usize, Capacity)> = Vec::new();
    let mut arc_lines = 0usize;
    for (idx, read) in reader.lines().enumerate() {
        let line = idx + 1;
        let text = read?;
        let mut tokens = text.split_whitespace();
        let Some(tag) = tokens.next() else { continue };
        match tag {
            "c" => {}
            "p" => {
                if problem.is_some() {
                    return Err(ParseError::DuplicateProblemLine { line });
                }
                let bad = || ParseError::BadProblemLine { line };
                if tokens.next() != Some("max") {
                    return Err(bad());
                }
                let n: usize = tokens.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
                let m: usize = tokens.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
                if tokens.next().is_some() {
                    return Err(bad());
                }
                problem = Some((n, m));
            }
            "n" => {
                let Some((n, _)) = problem else {
                    return Err(ParseError::LineBeforeProblem { line, kind: 'n' });
                };
                let bad = || ParseError::BadNodeLine { line };
                let id_token = tokens.next().ok_or_else(bad)?;
                let designator = tokens.next().ok_or_else(bad)?;
                if tokens.next().is_some() {
                    return Err(bad());
                }
                let id = parse_id(id_token, line, n, bad)?;
                match designator {
                    "s" => {
                        if source.is_some() {
                            return Err(ParseError::DuplicateDesignator { line, which: 's' });
                        }
                        if sink == Some(id) {
                            return Err(ParseError::SourceEqualsSink { line });
                        }
                        source = Some(id);
                    }
                    "t" => {
                        if sink.is_some() {
                            return Err(ParseError::DuplicateDesignator { line, which: 't' });
                        }
                        if source == Some(id) {
                            return Err(ParseError::SourceEqualsSink { line });
                        }
                        sink = Some(id);
                    }
                    other => {
                        return Err(ParseError::BadDesignator { line, got: other.to_string() })
                    }
                }
            }
            "a" => {
                let Some((n, _)) = problem else {
                    return Err(ParseError::LineBeforeProblem { line, kind: 'a' });
                };
                let bad = || ParseError::BadArcLine { line };
                let u_token = tokens.next().ok_or_else(bad)?;
                let v_token = tokens.next().ok_or_else(bad)?;
                let cap_token = tokens.next().ok_or_else(bad)?;
                if tokens.next().is_some() {
                    return Err(bad());
                }
                let u = parse_id(u_token, line, n, bad)?;
                let v = parse_id(v_token, line, n, bad)?;
                let cap: i64 = cap_token.parse().map_err(|_| ParseError::BadCapacity {
                    line,
                    token: cap_token.to_string(),
                })?;
                if cap < 0 {
                    return Err(ParseError::NegativeCapacity { line, cap });
                }
                arc_lines += 1;
                if cap > 0 {
                    edges.push((u, v, cap));
                }
            }
            other => {
                return Err(ParseError::UnknownLineType { line, tag: other.to_string() })
            }
        }
    }
    let (n, m) = problem.ok_or(ParseError::MissingProblemLine)?;
    let source = source.ok_or(ParseError::MissingSource)?;
    let sink = sink.ok_or(ParseError::MissingSink)?;
    if arc_lines != m {
        return Err(ParseError::ArcCountMismatch { declared: m, found: arc_lines });
    }
    let network = FlowNetwork::build(n, source, sink, &edges)?;
    Ok(ProblemInstance {
        network,
        name: String::new(),
        meta: "parsed from DIMACS input".to_string(),
    })
}

/// Writes the instance in DIMACS form. Output is deterministic: arcs appear
/// in owner-major adjacency order with their original capacities.
pub fn write_dimacs(instance: &ProblemInstance, mut out: impl Write) -> io::Result<()> {
    let net = &instance.network;
    if !instance.name.is_empty() {
        writeln!(out, "c {}", instance.name)?;
    }
    writeln!(out, "p max {} {}", net.vertex_count(), net.edge_count())?;
    writeln!(out, "n {} s", net.source() + 1)?;
    writeln!(out, "n {} t", net.sink() + 1)?;
    for (tail, head, cap) in net.forward_edges() {
        writeln!(out, "a {} {} {}", tail + 1, head + 1, cap)?;
    }
    Ok(())
}

/// Writes a flow result: the value line followed by every forward arc that
/// carries positive flow.
pub fn write_flow_result(
    net: &FlowNetwork,
    assignment: &FlowAssignment,
    mut out: impl Write,
) -> io::Result<()> {
    writeln!(out, "s {}", assignment.value)?;
    for v in 0..net.vertex_count() {
        for a in net.out_arcs(v) {
            if net.is_forward(a) && assignment.flow[a] > 0 {
                writeln!(out, "f {} {} {}", v + 1, net.head(a) + 1, assignment.flow[a])?;
            }
        }
    }
    Ok(())
}

/// Flow-result file content: claimed value and raw (tail, head, flow)
/// entries with 0-based ids. Range checks against a network happen later.
#[derive(Debug, PartialEq, Eq)]
pub struct FlowFile {
    pub value: i64,
    pub entries: Vec<(usize, usize, i64)>,
}

/// Parses a flow-result file (`c`, `s`, `f` lines).
pub fn parse_flow_file(reader: impl BufRead) -> Result<FlowFile, ParseError> {
    let mut value: Option<i64> = None;
    let mut entries = Vec::new();
    for (idx, read) in reader.lines().enumerate() {
        let line = idx + 1;
        let text = read?;
        let mut tokens = text.split_whitespace();
        let Some(tag) = tokens.next() else { continue };
        match tag {
            "c" => {}
            "s" => {
                if value.is_some() {
                    return Err(ParseError::DuplicateValueLine { line });
                }
                let bad = || ParseError::BadFlowLine { line };
                let token = tokens.next().ok_or_else(bad)?;
                if tokens.next().is_some() {
                    return Err(bad());
                }
                value = Some(token.parse().map_err(|_| bad())?);
            }
            "f" => {
                let bad = || ParseError::BadFlowLine { line };
                let u: usize = tokens.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
                let v: usize = tokens.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
                let f: i64 = tokens.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
                if tokens.next().is_some() || u == 0 || v == 0 {
                    return Err(bad());
                }
                entries.push((u - 1, v - 1, f));
            }
            other => {
                return Err(ParseError::UnknownLineType { line, tag: other.to_string() })
            }
        }
    }
    let value = value.ok_or(ParseError::MissingValueLine)?;
    Ok(FlowFile { value, entries })
}

#[cfg(test)]
mod tests {
    use super::*;

    const DIAMOND: &str = "\
c tiny diamond
p max 4 5
n 1 s
n 4 t
a 1 2 4
a 1 3 2
a 2 3 3
a 2 4 1
a 3 4 6
";

    #[test]
    fn parses_well_formed_input() {
        let inst = parse_dimacs(DIAMOND.as_bytes()).unwrap();
        let net = &inst.network;
        assert_eq!(net.vertex_count(), 4);
        assert_eq!(net.edge_count(), 5);
        assert_eq!(net.source(), 0);
        assert_eq!(net.sink(), 3);
        let edges: Vec<_> = net.forward_edges().collect();
        assert!(edges.contains(&(0, 1, 4)));
        assert!(edges.contains(&(2, 3, 6)));
    }

    #[test]
    fn zero_capacity_arcs_count_but_vanish() {
        let text = "p max 2 2\nn 1 s\nn 2 t\na 1 2 0\na 1 2 5\n";
        let inst = parse_dimacs(text.as_bytes()).unwrap();
        assert_eq!(inst.network.edge_count(), 1);
        let edges: Vec<_> = inst.network.forward_edges().collect();
        assert_eq!(edges, vec![(0, 1, 5)]);
    }

    fn err_of(text: &str) -> ParseError {
        parse_dimacs(text.as_bytes()).unwrap_err()
    }

    #[test]
    fn reports_missing_and_duplicate_problem_lines() {
        assert!(matches!(err_of("c nothing\n"), ParseError::MissingProblemLine));
        assert!(matches!(
            err_of("p max 2 0\np max 2 0\n"),
            ParseError::DuplicateProblemLine { line: 2 }
        ));
        assert!(matches!(err_of("p min 2 0\n"), ParseError::BadProblemLine { line: 1 }));
        assert!(matches!(err_of("p max two 0\n"), ParseError::BadProblemLine { line: 1 }));
    }

    #[test]
    fn reports_lines_before_problem() {
        assert!(matches!(
            err_of("a 1 2 3\np max 2 1\n"),
            ParseError::LineBeforeProblem { line: 1, kind: 'a' }
        ));
        assert!(matches!(
            err_of("n 1 s\np max 2 0\n"),
            ParseError::LineBeforeProblem { line: 1, kind: 'n' }
        ));
    }

    #[test]
    fn reports_bad_designators() {
        let base = "p max 3 0\n";
        assert!(matches!(
            err_of(&format!("{base}n 1 x\n")),
            ParseError::BadDesignator { line: 2, .. }
        ));
        assert!(matches!(
            err_of(&format!("{base}n 1 s\nn 2 s\n")),
            ParseError::DuplicateDesignator { line: 3, which: 's' }
        ));
        assert!(matches!(
            err_of(&format!("{base}n 1 s\nn 1 t\n")),
            ParseError::SourceEqualsSink { line: 3 }
        ));
        assert!(matches!(
            err_of(&format!("{base}n 4 s\n")),
            ParseError::IdOutOfRange { line: 2, id: 4, max: 3 }
        ));
        assert!(matches!(
            err_of(&format!("{base}n 0 s\n")),
            ParseError::IdOutOfRange { line: 2, id: 0, max: 3 }
        ));
    }

    #[test]
    fn reports_bad_arcs() {
        let base = "p max 3 1\nn 1 s\nn 3 t\n";
        assert!(matches!(
            err_of(&format!("{base}a 1 9 5\n")),
            ParseError::IdOutOfRange { line: 4, id: 9, max: 3 }
        ));
        assert!(matches!(
            err_of(&format!("{base}a 1 2 -3\n")),
            ParseError::NegativeCapacity { line: 4, cap: -3 }
        ));
        assert!(matches!(
            err_of(&format!("{base}a 1 2 lots\n")),
            ParseError::BadCapacity { line: 4, .. }
        ));
        assert!(matches!(
            err_of(&format!("{base}a 1 2\n")),
            ParseError::BadArcLine { line: 4 }
        ));
        // 99999999999999999999 overflows a 64-bit integer.
        assert!(matches!(
            err_of(&format!("{base}a 1 2 99999999999999999999\n")),
            ParseError::BadCapacity { line: 4, .. }
        ));
    }

    #[test]
    fn reports_arc_count_mismatch_and_missing_designators() {
        assert!(matches!(
            err_of("p max 2 2\nn 1 s\nn 2 t\na 1 2 5\n"),
            ParseError::ArcCountMismatch { declared: 2, found: 1 }
        ));
        assert!(matches!(
            err_of("p max 2 0\nn 2 t\n"),
            ParseError::MissingSource
        ));
        assert!(matches!(
            err_of("p max 2 0\nn 1 s\n"),
            ParseError::MissingSink
        ));
    }

    #[test]
    fn rejects_unknown_line_types() {
        assert!(matches!(
            err_of("p max 2 0\nn 1 s\nn 2 t\nx what\n"),
            ParseError::UnknownLineType { line: 4, .. }
        ));
    }

    #[test]
    fn round_trip_preserves_structure() {
        let inst = parse_dimacs(DIAMOND.as_bytes()).unwrap();
        let mut buf = Vec::new();
        write_dimacs(&inst, &mut buf).unwrap();
        let again = parse_dimacs(buf.as_slice()).unwrap();
        assert!(inst.network.structurally_equal(&again.network));
        // Writing is deterministic.
        let mut buf2 = Vec::new();
        write_dimacs(&again, &mut buf2).unwrap();
        let mut buf3 = Vec::new();
        write_dimacs(&again, &mut buf3).unwrap();
        assert_eq!(buf2, buf3);
    }

    #[test]
    fn writes_and_reads_flow_results() {
        let inst = parse_dimacs(DIAMOND.as_bytes()).unwrap();
        let net = &inst.network;
        let a01 = net.out_arcs(0).find(|&a| net.head(a) == 1).unwrap();
        let a13 = net
            .out_arcs(1)
            .find(|&a| net.head(a) == 3 && net.is_forward(a))
            .unwrap();
        net.push_on_arc(a01, 1);
        net.push_on_arc(a13, 1);
        let assignment = net.extract_flow();
        let mut buf = Vec::new();
        write_flow_result(net, &assignment, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("s 1\n"));
        assert!(text.contains("f 1 2 1"));
        assert!(text.contains("f 2 4 1"));
        let parsed = parse_flow_file(buf.as_slice()).unwrap();
        assert_eq!(parsed.value, 1);
        assert_eq!(parsed.entries.len(), 2);
        assert!(parsed.entries.contains(&(0, 1, 1)));
    }

    #[test]
    fn flow_file_errors() {
        assert!(matches!(
            parse_flow_file("f 1 2 3\n".as_bytes()).unwrap_err(),
            ParseError::MissingValueLine
        ));
        assert!(matches!(
            parse_flow_file("s 1\ns 2\n".as_bytes()).unwrap_err(),
            ParseError::DuplicateValueLine { line: 2 }
        ));
        assert!(matches!(
            parse_flow_file("s 1\nf 1 2\n".as_bytes()).unwrap_err(),
            ParseError::BadFlowLine { line: 2 }
        ));
    }
}
