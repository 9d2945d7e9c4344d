//! Line-oriented topology files.
//!
//! ```text
//! # comment
//! node 0 router
//! node 1 consumer
//! edge 0 1 1e9 0.001     # a b bandwidth_bps delay_s
//! ```
//!
//! All `node` lines come before the first `edge` line. Node ids must be
//! `0..n` and each may appear once.

use std::path::Path;

use ndncache_core::{Link, NodeKind, Topology};

use crate::{read_file, FormatError};

pub fn parse_topology(text: &str, origin: &str) -> Result<Topology, FormatError> {
    let syntax = |line: usize, message: String| FormatError::Syntax {
        path: origin.to_string(),
        line,
        message,
    };
    let mut kinds: Vec<Option<NodeKind>> = Vec::new();
    let mut links = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields[0] {
            "node" => {
                if !links.is_empty() {
                    return Err(syntax(lineno, "node line after the first edge".into()));
                }
                let [_, id, kind] = fields[..] else {
                    return Err(syntax(lineno, "expected `node <id> <kind>`".into()));
                };
                let id: usize = id
                    .parse()
                    .map_err(|_| syntax(lineno, format!("bad node id `{id}`")))?;
                let kind: NodeKind = kind
                    .parse()
                    .map_err(|_| syntax(lineno, format!("unknown node kind `{kind}`")))?;
                if kinds.len() <= id {
                    kinds.resize(id + 1, None);
                }
                if kinds[id].replace(kind).is_some() {
                    return Err(syntax(lineno, format!("node {id} declared twice")));
                }
            }
            "edge" => {
                let [_, a, b, bw, delay] = fields[..] else {
                    return Err(syntax(
                        lineno,
                        "expected `edge <id> <id> <bandwidth_bps> <delay_s>`".into(),
                    ));
                };
                let node = |s: &str| -> Result<usize, FormatError> {
                    let id: usize = s
                        .parse()
                        .map_err(|_| syntax(lineno, format!("bad node id `{s}`")))?;
                    if kinds.get(id).copied().flatten().is_none() {
                        return Err(syntax(lineno, format!("edge uses undeclared node {id}")));
                    }
                    Ok(id)
                };
                let number = |s: &str| -> Result<f64, FormatError> {
                    s.parse::<f64>()
                        .ok()
                        .filter(|x| x.is_finite())
                        .ok_or_else(|| syntax(lineno, format!("bad number `{s}`")))
                };
                links.push(Link::new(node(a)?, node(b)?, number(bw)?, number(delay)?));
            }
            other => return Err(syntax(lineno, format!("unknown directive `{other}`"))),
        }
    }

    let kinds = kinds
        .into_iter()
        .enumerate()
        .map(|(id, k)| {
            k.ok_or_else(|| FormatError::Syntax {
                path: origin.to_string(),
                line: 0,
                message: format!("node ids must be contiguous; {id} is missing"),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Topology::new(kinds, links).map_err(|source| FormatError::Topology {
        path: origin.to_string(),
        source,
    })
}

pub fn load_topology(path: &Path) -> Result<Topology, FormatError> {
    parse_topology(&read_file(path)?, &path.display().to_string())
}

/// Writes a topology back in the file format; parsing the output yields an
/// equal topology.
pub fn format_topology(t: &Topology) -> String {
    let mut out = String::new();
    for n in t.nodes() {
        out.push_str(&format!("node {} {}\n", n.index(), t.kind(n)));
    }
    for l in t.links() {
        out.push_str(&format!(
            "edge {} {} {:e} {}\n",
            l.a.index(),
            l.b.index(),
            l.bandwidth_bps,
            l.delay_s
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndncache_core::TopologyError;

    #[test]
    fn shipped_abilene_file_parses() {
        let t = parse_topology(crate::ABILENE27, "abilene27.topo").unwrap();
        assert_eq!(t.node_count(), 27);
        assert_eq!(t.routers().len(), 11);
        assert_eq!(t.consumers().len(), 12);
        assert_eq!(t.producers().len(), 4);
    }

    #[test]
    fn reports_line_of_syntax_error() {
        let text = "node 0 router\nnode 1 consumer\n\nedge 0 1 1e9\n";
        match parse_topology(text, "x") {
            Err(FormatError::Syntax { line, .. }) => assert_eq!(line, 4),
            other => panic!("unexpected {other:?}"),
        }
        match parse_topology("node 0 switch\n", "x") {
            Err(FormatError::Syntax { line, .. }) => assert_eq!(line, 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_node_after_edge_and_duplicates() {
        let text = "node 0 router\nnode 1 router\nedge 0 1 1e9 0\nnode 2 router\n";
        assert!(matches!(parse_topology(text, "x"), Err(FormatError::Syntax { line: 4, .. })));
        let text = "node 0 router\nnode 0 router\n";
        assert!(matches!(parse_topology(text, "x"), Err(FormatError::Syntax { line: 2, .. })));
    }

    #[test]
    fn semantic_errors_come_from_validation() {
        let text = "node 0 router\nnode 1 router\nnode 2 router\nedge 0 1 1e9 0\n";
        assert!(matches!(
            parse_topology(text, "x"),
            Err(FormatError::Topology {
                source: TopologyError::Disconnected { .. },
                ..
            })
        ));
        let text = "node 0 router\nnode 1 router\nedge 0 1 1e9 0\nedge 1 0 1e9 0\n";
        assert!(matches!(
            parse_topology(text, "x"),
            Err(FormatError::Topology {
                source: TopologyError::DuplicateEdge { .. },
                ..
            })
        ));
    }

    #[test]
    fn format_round_trips() {
        let t = parse_topology(crate::ABILENE27, "abilene27.topo").unwrap();
        let again = parse_topology(&format_topology(&t), "again").unwrap();
        assert_eq!(t.links(), again.links());
        assert!(t.nodes().all(|n| t.kind(n) == again.kind(n)));
    }
}
