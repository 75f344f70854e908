//! The `.hg` text format.
//!
//! ```text
//! # comment
//! n m r
//! w v1 v2 ... vs      (m lines, 2 <= s <= r)
//! ```

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use super::{EdgeId, FaultSet, Hypergraph, HypergraphError, Vertex};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("missing header line `n m r`")]
    MissingHeader,
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("line {line}: vertex {vertex} out of range (n = {n})")]
    VertexOutOfRange { line: usize, vertex: Vertex, n: usize },
    #[error("line {line}: weight must be positive")]
    NonPositiveWeight { line: usize },
    #[error("line {line}: hyperedge needs at least 2 vertices, got {size}")]
    TooFewVertices { line: usize, size: usize },
    #[error("line {line}: hyperedge of size {size} exceeds declared rank {rank}")]
    RankExceeded { line: usize, size: usize, rank: usize },
    #[error("line {line}: vertex {vertex} listed twice")]
    RepeatedVertex { line: usize, vertex: Vertex },
    #[error("line {line}: duplicates the hyperedge on line {first_line}")]
    DuplicateHyperedge { line: usize, first_line: usize },
    #[error("header declares {declared} hyperedges, found {found}")]
    EdgeCountMismatch { declared: usize, found: usize },
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn malformed(line: usize, reason: impl Into<String>) -> ParseError {
    ParseError::Malformed { line, reason: reason.into() }
}

fn parse_usize(line: usize, tok: &str, what: &str) -> Result<usize, ParseError> {
    tok.parse()
        .map_err(|_| malformed(line, format!("expected {what}, found `{tok}`")))
}

impl Hypergraph {
    /// Parses `.hg` text, rejecting exact duplicate hyperedges.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        Self::parse_with(text, false)
    }

    /// Parses `.hg` text; `allow_multi` permits exact duplicate hyperedges.
    pub fn parse_with(text: &str, allow_multi: bool) -> Result<Self, ParseError> {
        let mut lines = content_lines(text);
        let (hline, header) = lines.next().ok_or(ParseError::MissingHeader)?;
        let toks: Vec<&str> = header.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(malformed(hline, "header must be `n m r`"));
        }
        let n = parse_usize(hline, toks[0], "vertex count")?;
        let m = parse_usize(hline, toks[1], "edge count")?;
        let r = parse_usize(hline, toks[2], "rank")?;

        let mut edges = Vec::with_capacity(m);
        let mut line_of = Vec::with_capacity(m);
        for (line, body) in lines {
            let mut toks = body.split_whitespace();
            let wtok = toks.next().expect("non-empty line");
            let weight: f64 = wtok
                .parse()
                .map_err(|_| malformed(line, format!("expected weight, found `{wtok}`")))?;
            if !weight.is_finite() {
                return Err(malformed(line, format!("weight `{wtok}` is not finite")));
            }
            if weight <= 0.0 {
                return Err(ParseError::NonPositiveWeight { line });
            }
            let mut vertices = toks
                .map(|t| parse_usize(line, t, "vertex id"))
                .collect::<Result<Vec<_>, _>>()?;
            if let Some(&vertex) = vertices.iter().find(|&&v| v >= n) {
                return Err(ParseError::VertexOutOfRange { line, vertex, n });
            }
            if vertices.len() < 2 {
                return Err(ParseError::TooFewVertices { line, size: vertices.len() });
            }
            if vertices.len() > r {
                return Err(ParseError::RankExceeded { line, size: vertices.len(), rank: r });
            }
            vertices.sort_unstable();
            if let Some(w) = vertices.windows(2).find(|w| w[0] == w[1]) {
                return Err(ParseError::RepeatedVertex { line, vertex: w[0] });
            }
            edges.push((weight, vertices));
            line_of.push(line);
        }
        if edges.len() != m {
            return Err(ParseError::EdgeCountMismatch { declared: m, found: edges.len() });
        }
        let built = if allow_multi {
            Hypergraph::new_multi(n, edges)
        } else {
            Hypergraph::new(n, edges)
        };
        built.map_err(|e| match e {
            HypergraphError::DuplicateHyperedge { first, second } => {
                ParseError::DuplicateHyperedge { line: line_of[second], first_line: line_of[first] }
            }
            other => unreachable!("validated above: {other}"),
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ParseError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Serializes in the current edge order. Apply
    /// [`Hypergraph::canonicalize`] first for the canonical form.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {} {}", self.n(), self.m(), self.rank());
        for e in self.edges() {
            out.push_str(&format_weight(e.weight));
            for v in &e.vertices {
                let _ = write!(out, " {v}");
            }
            out.push('\n');
        }
        out
    }

    pub fn save(&self, path: impl AsRef<Path>) -> std::io::Result<()> {
        std::fs::write(path, self.to_text())
    }
}

/// Integers print without a fractional part; everything else uses the
/// shortest representation that parses back to the same value.
pub(crate) fn format_weight(w: f64) -> String {
    if w.fract() == 0.0 && w.abs() < 9.007_199_254_740_992e15 {
        format!("{}", w as i64)
    } else {
        format!("{w}")
    }
}

pub(super) fn parse_fault_line(text: &str) -> Result<FaultSet, ParseError> {
    let mut ids: Vec<EdgeId> = Vec::new();
    for (line, body) in content_lines(text) {
        for tok in body.split_whitespace() {
            ids.push(parse_usize(line, tok, "hyperedge index")?);
        }
    }
    FaultSet::new(ids).map_err(|e| malformed(1, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_edge_file() {
        let g = Hypergraph::parse("3 1 3\n1.0 0 1 2").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.m(), 1);
        assert_eq!(g.rank(), 3);
        assert_eq!(g.edges()[0].vertices, vec![0, 1, 2]);
        assert_eq!(g.edges()[0].weight, 1.0);
    }

    #[test]
    fn zero_weight_names_line() {
        let err = Hypergraph::parse("3 1 3\n0.0 0 1 2").unwrap_err();
        assert!(matches!(err, ParseError::NonPositiveWeight { line: 2 }), "{err:?}");
    }

    #[test]
    fn each_error_is_distinct() {
        let cases: [(&str, fn(&ParseError) -> bool); 8] = [
            ("", |e| matches!(e, ParseError::MissingHeader)),
            ("3 1\n1 0 1", |e| matches!(e, ParseError::Malformed { line: 1, .. })),
            ("3 1 3\nx 0 1", |e| matches!(e, ParseError::Malformed { line: 2, .. })),
            ("3 1 3\n1 0 7", |e| matches!(e, ParseError::VertexOutOfRange { line: 2, vertex: 7, .. })),
            ("3 1 3\n# c\n1 0", |e| matches!(e, ParseError::TooFewVertices { line: 3, size: 1 })),
            ("4 1 2\n1 0 1 2", |e| matches!(e, ParseError::RankExceeded { line: 2, .. })),
            ("3 1 3\n1 0 0", |e| matches!(e, ParseError::RepeatedVertex { line: 2, vertex: 0 })),
            ("3 2 3\n1 0 1", |e| matches!(e, ParseError::EdgeCountMismatch { declared: 2, found: 1 })),
        ];
        for (text, check) in cases {
            let err = Hypergraph::parse(text).unwrap_err();
            assert!(check(&err), "{text:?} gave {err:?}");
        }
    }

    #[test]
    fn duplicates_report_both_lines() {
        let text = "3 2 2\n1 0 1\n\n1 1 0\n";
        let err = Hypergraph::parse(text).unwrap_err();
        assert!(matches!(err, ParseError::DuplicateHyperedge { line: 4, first_line: 2 }));
        assert_eq!(Hypergraph::parse_with(text, true).unwrap().m(), 2);
    }

    #[test]
    fn comments_and_weights_format() {
        let g = Hypergraph::parse("# hi\n4 2 3\n2.5 3 1\n7 0 1 2\n").unwrap();
        assert_eq!(g.to_text(), "4 2 3\n2.5 1 3\n7 0 1 2\n");
    }

    #[test]
    fn fault_line() {
        let f = FaultSet::parse("3 0 5\n").unwrap();
        assert_eq!(f.ids(), &[0, 3, 5]);
        assert!(FaultSet::parse("1 1").is_err());
        assert!(FaultSet::parse("1 a").is_err());
        assert!(FaultSet::parse("").unwrap().is_empty());
    }

    #[test]
    fn load_and_save_files() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.hg");
        let g = Hypergraph::parse("3 2 3\n1 0 1 2\n4 1 2\n").unwrap();
        g.save(&path).unwrap();
        assert_eq!(Hypergraph::load(&path).unwrap(), g);
        assert!(matches!(
            Hypergraph::load(dir.path().join("missing.hg")),
            Err(ParseError::Io(_))
        ));
    }
}
