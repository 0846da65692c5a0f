//! Terrain and solution text files.
//!
//! A terrain file holds the vertex count on its first line, then one `x y`
//! pair per line from left to right. A solution file holds the guard count,
//! then one `guard: w1 w2 ...` line per guard, then `# provenance` comments.
//! Lines starting with `#` and blank lines are ignored on input. Indices are
//! 0-based.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use orthoguard::{GridPoint, GuardEntry, GuardSolution, Provenance, Terrain, TerrainError};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("{0}")]
    Empty(&'static str),
    #[error("expected {expected} entries, found {found}")]
    CountMismatch { expected: usize, found: usize },
    #[error("line {line}: {source}")]
    Invalid { line: usize, source: TerrainError },
    #[error("line {line}: index {index} out of range for {len} vertices")]
    IndexOutOfRange { line: usize, index: usize, len: usize },
}

/// Non-comment, non-blank lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_num<T: std::str::FromStr>(line: usize, word: &str, what: &str) -> Result<T, FormatError> {
    word.parse().map_err(|_| FormatError::Syntax { line, message: format!("`{word}` is not a valid {what}") })
}

pub fn parse_terrain(text: &str) -> Result<Terrain, FormatError> {
    let mut lines = content_lines(text);
    let (line, first) = lines.next().ok_or(FormatError::Empty("terrain file has no vertex count"))?;
    let n: usize = parse_num(line, first, "vertex count")?;
    let mut points = Vec::with_capacity(n);
    let mut line_of = Vec::with_capacity(n);
    for (line, l) in lines {
        let words: Vec<&str> = l.split_whitespace().collect();
        if words.len() != 2 {
            return Err(FormatError::Syntax { line, message: format!("expected `x y`, found `{l}`") });
        }
        points.push(GridPoint::new(parse_num(line, words[0], "integer")?, parse_num(line, words[1], "integer")?));
        line_of.push(line);
    }
    if points.len() != n {
        return Err(FormatError::CountMismatch { expected: n, found: points.len() });
    }
    Terrain::validate(&points).map_err(|e| {
        let line = e.index().map_or(line, |i| line_of[i.min(n.saturating_sub(1))]);
        FormatError::Invalid { line, source: e }
    })
}

pub fn serialize_terrain(t: &Terrain) -> String {
    let mut out = format!("{}\n", t.len());
    for p in t.vertices() {
        let _ = writeln!(out, "{} {}", p.x, p.y);
    }
    out
}

pub fn serialize_solution(sol: &GuardSolution) -> String {
    let mut out = format!("{}\n", sol.len());
    for (g, e) in &sol.guards {
        let ws: Vec<String> = e.witnesses.iter().map(|w| w.to_string()).collect();
        let _ = writeln!(out, "{g}: {}", ws.join(" "));
    }
    for (g, e) in &sol.guards {
        if !e.provenance.is_empty() {
            let ps: Vec<&str> = e.provenance.iter().map(|p| p.as_str()).collect();
            let _ = writeln!(out, "# provenance {g} {}", ps.join(","));
        }
    }
    out
}

/// Parse a solution file, checking indices against a terrain of `n` vertices.
pub fn parse_solution(text: &str, n: usize) -> Result<GuardSolution, FormatError> {
    let mut lines = content_lines(text);
    let (line, first) = lines.next().ok_or(FormatError::Empty("solution file has no guard count"))?;
    let g: usize = parse_num(line, first, "guard count")?;
    let check = |line: usize, index: usize| {
        if index < n {
            Ok(index)
        } else {
            Err(FormatError::IndexOutOfRange { line, index, len: n })
        }
    };
    let mut guards = BTreeMap::new();
    for (line, l) in lines {
        let (head, tail) = l
            .split_once(':')
            .ok_or_else(|| FormatError::Syntax { line, message: format!("expected `guard: witnesses`, found `{l}`") })?;
        let guard = check(line, parse_num(line, head.trim(), "guard index")?)?;
        let witnesses = tail
            .split_whitespace()
            .map(|w| parse_num(line, w, "witness index").and_then(|w| check(line, w)))
            .collect::<Result<Vec<usize>, _>>()?;
        if witnesses.is_empty() {
            return Err(FormatError::Syntax { line, message: format!("guard {guard} has no witnesses") });
        }
        if guards.insert(guard, GuardEntry { witnesses, provenance: Vec::new() }).is_some() {
            return Err(FormatError::Syntax { line, message: format!("guard {guard} listed twice") });
        }
    }
    if guards.len() != g {
        return Err(FormatError::CountMismatch { expected: g, found: guards.len() });
    }
    for l in text.lines() {
        let Some(rest) = l.trim().strip_prefix("# provenance ") else { continue };
        let mut words = rest.split_whitespace();
        if let (Some(Ok(guard)), Some(tags)) = (words.next().map(str::parse::<usize>), words.next()) {
            if let Some(e) = guards.get_mut(&guard) {
                e.provenance = tags.split(',').filter_map(Provenance::parse).collect();
            }
        }
    }
    Ok(GuardSolution { guards, ..Default::default() })
}
