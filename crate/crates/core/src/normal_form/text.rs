//! Line-oriented text form of a normal-form game.
//!
//! ```text
//! # comment
//! rows: Y W C
//! cols: G S
//! Y: 8,15 6,1
//! W: -400,-400 15,7
//! C: -500,-200 20,7
//! ```
//!
//! Each cell is `row_payoff,col_payoff`; entries are integers or fractions `a/b`.
//! [`write_game`] emits the canonical form (reduced fractions, rows in order), so
//! parse and write are mutually inverse on canonical text.

use super::NormalFormGame;
use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, Rational};

pub fn parse_game(text: &str) -> Result<NormalFormGame> {
    let lines: Vec<(usize, &str)> = content_lines(text).collect();
    parse_block(&lines)
}

pub fn write_game(game: &NormalFormGame) -> String {
    let mut out = String::new();
    out.push_str(&format!("rows: {}\n", game.row_actions().join(" ")));
    out.push_str(&format!("cols: {}\n", game.col_actions().join(" ")));
    for (label, row) in game.row_actions().iter().zip(game.payoffs()) {
        let cells: Vec<String> = row
            .iter()
            .map(|(a, b)| format!("{},{}", format_rational(a), format_rational(b)))
            .collect();
        out.push_str(&format!("{label}: {}\n", cells.join(" ")));
    }
    out
}

/// Non-blank, non-comment lines with 1-based line numbers, trimmed.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub(crate) fn parse_block(lines: &[(usize, &str)]) -> Result<NormalFormGame> {
    let mut rows: Option<Vec<String>> = None;
    let mut cols: Option<Vec<String>> = None;
    let mut cells: Vec<(usize, String, Vec<(Rational, Rational)>)> = Vec::new();
    let last_line = lines.last().map_or(1, |(n, _)| *n);

    for &(n, line) in lines {
        let (key, rest) = line
            .split_once(':')
            .ok_or_else(|| Error::parse(n, "expected `label: ...`"))?;
        let key = key.trim();
        match key {
            "rows" | "cols" => {
                let labels: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
                if labels.is_empty() {
                    return Err(Error::parse(n, format!("`{key}` lists no actions")));
                }
                let slot = if key == "rows" { &mut rows } else { &mut cols };
                if slot.replace(labels).is_some() {
                    return Err(Error::parse(n, format!("duplicate `{key}` line")));
                }
            }
            label => {
                if rows.is_none() || cols.is_none() {
                    return Err(Error::parse(n, "payoff line before `rows:` and `cols:`"));
                }
                let parsed = rest
                    .split_whitespace()
                    .map(|cell| parse_cell(n, cell))
                    .collect::<Result<Vec<_>>>()?;
                cells.push((n, label.to_string(), parsed));
            }
        }
    }

    let rows = rows.ok_or_else(|| Error::parse(last_line, "missing `rows:` line"))?;
    let cols = cols.ok_or_else(|| Error::parse(last_line, "missing `cols:` line"))?;
    let mut payoffs: Vec<Option<Vec<(Rational, Rational)>>> = vec![None; rows.len()];
    for (n, label, row) in cells {
        let idx = rows
            .iter()
            .position(|r| *r == label)
            .ok_or_else(|| Error::parse(n, format!("`{label}` is not a row action")))?;
        if row.len() != cols.len() {
            return Err(Error::parse(
                n,
                format!("row `{label}` has {} cells, expected {}", row.len(), cols.len()),
            ));
        }
        if payoffs[idx].replace(row).is_some() {
            return Err(Error::parse(n, format!("duplicate payoff row `{label}`")));
        }
    }
    let payoffs = payoffs
        .into_iter()
        .zip(&rows)
        .map(|(row, label)| row.ok_or_else(|| Error::parse(last_line, format!("missing payoff row `{label}`"))))
        .collect::<Result<Vec<_>>>()?;
    NormalFormGame::new(rows, cols, payoffs).map_err(|e| Error::parse(last_line, e.to_string()))
}

fn parse_cell(line: usize, cell: &str) -> Result<(Rational, Rational)> {
    let (a, b) = cell
        .split_once(',')
        .ok_or_else(|| Error::parse(line, format!("cell `{cell}` is not `a,b`")))?;
    let parse =
        |s: &str| parse_rational(s).ok_or_else(|| Error::parse(line, format!("`{s}` is not a rational number")));
    Ok((parse(a)?, parse(b)?))
}
