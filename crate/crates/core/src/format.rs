//! Edge-list text format.
//!
//! ```text
//! # comment
//! n m [weighted|unweighted] [dual]
//! u v [w]
//! ```
//!
//! `dual` declares that the file is also the in-adjacency source, so
//! in-lists are built while loading and no materialization is charged
//! later. Problem and circuit files extend this format with keyword
//! lines (`GATE`, `LEAF`, `VAR`, ...); those are collected verbatim in
//! [`EdgeListFile::directives`] for the owning module to interpret.

use thiserror::Error;

use crate::dag::{Dag, DagError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing header line `n m [weighted|unweighted]`")]
    MissingHeader,
    #[error("header declares {declared} edges but {found} were listed")]
    EdgeCount { declared: usize, found: usize },
    #[error(transparent)]
    Dag(#[from] DagError),
}

pub(crate) fn syntax(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, msg: msg.into() }
}

/// A keyword line such as `GATE 3 AND`, with its 1-based line number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Directive {
    pub line: usize,
    pub keyword: String,
    pub args: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeListFile {
    pub n: usize,
    pub weighted: bool,
    pub dual: bool,
    /// `(u, v, third column)` where present.
    pub edges: Vec<(usize, usize, Option<f64>)>,
    pub directives: Vec<Directive>,
}

impl EdgeListFile {
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or(FormatError::MissingHeader)?;
        let tokens: Vec<&str> = header.split_whitespace().collect();
        if tokens.len() < 2 {
            return Err(FormatError::MissingHeader);
        }
        let n = parse_usize(tokens[0], hline)?;
        let declared = parse_usize(tokens[1], hline)?;
        let mut weighted = false;
        let mut dual = false;
        for flag in &tokens[2..] {
            match *flag {
                "weighted" => weighted = true,
                "unweighted" => weighted = false,
                "dual" => dual = true,
                other => return Err(syntax(hline, format!("unknown header flag {other:?}"))),
            }
        }
        let mut edges = Vec::with_capacity(declared);
        let mut directives = Vec::new();
        for (line, content) in lines {
            let content = content.split('#').next().unwrap_or("").trim();
            let tokens: Vec<&str> = content.split_whitespace().collect();
            if tokens.is_empty() {
                continue;
            }
            if tokens[0].chars().all(|c| c.is_ascii_digit()) {
                if !(2..=3).contains(&tokens.len()) {
                    return Err(syntax(line, "edge lines are `u v [w]`"));
                }
                let u = parse_usize(tokens[0], line)?;
                let v = parse_usize(tokens[1], line)?;
                let third = match tokens.get(2) {
                    Some(t) => Some(t.parse::<f64>().map_err(|_| syntax(line, format!("bad number {t:?}")))?),
                    None => None,
                };
                if weighted && third.is_none() {
                    return Err(syntax(line, "weighted file needs `u v w`"));
                }
                edges.push((u, v, third));
            } else {
                directives.push(Directive {
                    line,
                    keyword: tokens[0].to_ascii_uppercase(),
                    args: tokens[1..].iter().map(|s| s.to_string()).collect(),
                });
            }
        }
        if edges.len() != declared {
            return Err(FormatError::EdgeCount { declared, found: edges.len() });
        }
        Ok(Self { n, weighted, dual, edges, directives })
    }

    /// Builds the graph, using the third column as weight when the file is weighted.
    pub fn to_dag(&self) -> Result<Dag, FormatError> {
        let dag = if self.weighted {
            let edges: Vec<_> = self.edges.iter().map(|&(u, v, w)| (u, v, w.unwrap_or(1.0))).collect();
            Dag::from_weighted_edges(self.n, &edges)?
        } else {
            let edges: Vec<_> = self.edges.iter().map(|&(u, v, _)| (u, v)).collect();
            Dag::from_edges(self.n, &edges)?
        };
        Ok(if self.dual { attach_in_lists(dag)? } else { dag })
    }
}

fn attach_in_lists(dag: Dag) -> Result<Dag, FormatError> {
    let mut lists = vec![Vec::new(); dag.n()];
    for (u, v, _) in dag.edges() {
        lists[v - 1].push(u);
    }
    Ok(dag.with_in_lists(lists)?)
}

pub(crate) fn parse_usize(tok: &str, line: usize) -> Result<usize, FormatError> {
    tok.parse().map_err(|_| syntax(line, format!("expected a non-negative integer, got {tok:?}")))
}

/// Parses a plain edge-list file into a [`Dag`].
pub fn parse_edge_list(text: &str) -> Result<Dag, FormatError> {
    let file = EdgeListFile::parse(text)?;
    if let Some(d) = file.directives.first() {
        return Err(syntax(d.line, format!("unexpected keyword {:?}", d.keyword)));
    }
    file.to_dag()
}

/// Writes `dag` in edge-list format. Weighted graphs keep their weights;
/// graphs with in-lists are marked `dual`.
pub fn write_edge_list(dag: &Dag) -> String {
    let mut out = format!(
        "{} {} {}{}\n",
        dag.n(),
        dag.m(),
        if dag.is_weighted() { "weighted" } else { "unweighted" },
        if dag.has_in_adjacency() { " dual" } else { "" }
    );
    for (u, v, w) in dag.edges() {
        if dag.is_weighted() {
            out.push_str(&format!("{u} {v} {w}\n"));
        } else {
            out.push_str(&format!("{u} {v}\n"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_weighted_file_with_comments() {
        let text = "# longest path demo\n3 3 weighted\n1 2 1\n2 3 5 # heavy\n\n1 3 2\n";
        let dag = parse_edge_list(text).unwrap();
        assert_eq!(dag.m(), 3);
        assert_eq!(dag.edge_weight(2, 3), Some(5.0));
        assert!(!dag.has_in_adjacency());
    }

    #[test]
    fn dual_flag_attaches_in_lists() {
        let dag = parse_edge_list("3 2 unweighted dual\n1 3\n2 3\n").unwrap();
        assert_eq!(dag.in_list(3), Some(&[1, 2][..]));
    }

    #[test]
    fn reports_errors_with_lines() {
        assert_eq!(parse_edge_list(""), Err(FormatError::MissingHeader));
        assert_eq!(
            parse_edge_list("2 2\n1 2\n"),
            Err(FormatError::EdgeCount { declared: 2, found: 1 })
        );
        assert!(matches!(
            parse_edge_list("2 1 weighted\n1 2\n"),
            Err(FormatError::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            parse_edge_list("2 1\nGATE 1 AND\n1 2\n"),
            Err(FormatError::Syntax { line: 2, .. })
        ));
        assert!(matches!(parse_edge_list("2 2\n1 2\n2 1\n"), Err(FormatError::Dag(_))));
    }

    #[test]
    fn write_then_parse() {
        let dag = Dag::from_weighted_edges(4, &[(1, 2, 0.5), (2, 4, 3.0), (1, 3, -1.0)]).unwrap();
        assert_eq!(parse_edge_list(&write_edge_list(&dag)).unwrap(), dag);
    }
}
