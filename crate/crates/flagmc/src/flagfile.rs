//! Reader and writer for the `.flag` text format.
//!
//! Accepted grammar:
//!
//! ```text
//! dim 0
//! <one value per vertex, whitespace separated, any number of lines>
//! dim 1
//! <source> <target> [weight]     one edge per line, 0-indexed
//! ```
//!
//! Blank lines and lines starting with `#` are ignored anywhere. Vertex
//! values and edge weights are parsed as numbers and discarded. Repeated
//! edge lines collapse into one edge. No other `dim` sections are allowed.

use std::io::{self, BufRead, Write};

use flagmc_core::graph::{DirectedGraph, Vertex};

#[derive(Debug, thiserror::Error)]
pub enum FlagError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: edge ({a}, {b}) references a vertex >= {n}")]
    VertexOutOfRange { line: usize, a: u64, b: u64, n: u32 },
    #[error("line {line}: self-loop on vertex {v}")]
    SelfLoop { line: usize, v: u64 },
    #[error(transparent)]
    Io(#[from] io::Error),
}

fn syntax(line: usize, msg: impl Into<String>) -> FlagError {
    FlagError::Syntax {
        line,
        msg: msg.into(),
    }
}

#[derive(PartialEq)]
enum Section {
    None,
    Vertices,
    Edges,
}

pub fn read_flag<R: BufRead>(input: R) -> Result<DirectedGraph, FlagError> {
    let mut section = Section::None;
    let mut n: u64 = 0;
    let mut edges: Vec<(u64, u64, usize)> = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let lineno = i + 1;
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let mut tok = text.split_whitespace();
        if text.starts_with("dim") {
            let (Some("dim"), Some(d), None) = (tok.next(), tok.next(), tok.next()) else {
                return Err(syntax(lineno, format!("malformed header {text:?}")));
            };
            section = match (d, &section) {
                ("0", Section::None) => Section::Vertices,
                ("1", Section::Vertices) => Section::Edges,
                _ => return Err(syntax(lineno, format!("unexpected header {text:?}"))),
            };
            continue;
        }
        match section {
            Section::None => return Err(syntax(lineno, "data before \"dim 0\"")),
            Section::Vertices => {
                for t in tok {
                    t.parse::<f64>()
                        .map_err(|_| syntax(lineno, format!("bad vertex value {t:?}")))?;
                    n += 1;
                }
            }
            Section::Edges => {
                let fields: Vec<&str> = tok.collect();
                if !(2..=3).contains(&fields.len()) {
                    return Err(syntax(lineno, "edge line needs \"source target [weight]\""));
                }
                let parse = |s: &str| {
                    s.parse::<u64>()
                        .map_err(|_| syntax(lineno, format!("bad vertex index {s:?}")))
                };
                let (a, b) = (parse(fields[0])?, parse(fields[1])?);
                if let Some(w) = fields.get(2) {
                    w.parse::<f64>()
                        .map_err(|_| syntax(lineno, format!("bad weight {w:?}")))?;
                }
                edges.push((a, b, lineno));
            }
        }
    }
    if section == Section::None {
        return Err(syntax(0, "missing \"dim 0\" header"));
    }
    let n = u32::try_from(n).map_err(|_| syntax(0, "too many vertices"))?;
    let mut g = DirectedGraph::new(n);
    for (a, b, line) in edges {
        if a == b {
            return Err(FlagError::SelfLoop { line, v: a });
        }
        if a >= u64::from(n) || b >= u64::from(n) {
            return Err(FlagError::VertexOutOfRange { line, a, b, n });
        }
        g.add_edge(a as Vertex, b as Vertex)
            .expect("validated edge");
    }
    Ok(g)
}

pub fn read_flag_file(path: &std::path::Path) -> Result<DirectedGraph, FlagError> {
    read_flag(io::BufReader::new(std::fs::File::open(path)?))
}

/// Writes `g` with unit vertex values and sorted edges.
pub fn write_flag<W: Write>(g: &DirectedGraph, mut out: W) -> io::Result<()> {
    writeln!(out, "dim 0")?;
    let values = vec!["1"; g.n_vertices() as usize];
    writeln!(out, "{}", values.join(" "))?;
    writeln!(out, "dim 1")?;
    for (a, b) in g.edges() {
        writeln!(out, "{a} {b}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<DirectedGraph, FlagError> {
        read_flag(s.as_bytes())
    }

    #[test]
    fn path_graph() {
        let g = parse("dim 0\n0 0 0\ndim 1\n0 1\n1 2\n").unwrap();
        assert_eq!(g.n_vertices(), 3);
        assert_eq!(g.edges(), [(0, 1), (1, 2)]);
    }

    #[test]
    fn permissive_layout() {
        let g = parse("# comment\n\ndim 0\n1 1\n1.5\n\ndim 1\n0 1 0.25\n0 1 2\n2 0\n").unwrap();
        assert_eq!(g.n_vertices(), 3);
        assert_eq!(g.edges(), [(0, 1), (2, 0)]);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            parse("dim 0\n1 1 1 1 1 1\ndim 1\n5 5 1.0\n"),
            Err(FlagError::SelfLoop { v: 5, .. })
        ));
        assert!(matches!(
            parse("dim 0\n1 1\ndim 1\n0 2\n"),
            Err(FlagError::VertexOutOfRange { .. })
        ));
        assert!(matches!(parse("0 1\n"), Err(FlagError::Syntax { .. })));
        assert!(matches!(
            parse("dim 1\n0 1\n"),
            Err(FlagError::Syntax { .. })
        ));
        assert!(matches!(
            parse("dim 0\n1\ndim 2\n"),
            Err(FlagError::Syntax { .. })
        ));
        assert!(matches!(
            parse("dim 0\n1 x\n"),
            Err(FlagError::Syntax { .. })
        ));
        assert!(matches!(parse(""), Err(FlagError::Syntax { .. })));
    }

    #[test]
    fn round_trip() {
        let g = DirectedGraph::from_edges(4, [(0, 1), (1, 0), (2, 3), (3, 1)]).unwrap();
        let mut buf = Vec::new();
        write_flag(&g, &mut buf).unwrap();
        assert_eq!(
            parse(std::str::from_utf8(&buf).unwrap()).unwrap().edges(),
            g.edges()
        );
    }
}
