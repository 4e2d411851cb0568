//! Where each Plücker coordinate sits in the frieze, and the staircase text
//! rendering of one period.
//!
//! Row `t` (counted from the top, `0 ≤ t ≤ w+5`) on diagonal `d` holds
//! `v{d, d+1, d+t}`. Rows 0, 1, `w+4`, `w+5` repeat an index and vanish; rows
//! 2 and `w+3` are continuous triples with value 1; row `k+2` is `Δ_k`.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ground::{GroundSet, Triangle};
use crate::Rational;

use super::grid::FriezeGrid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Slot {
    /// A repeated index.
    Zero,
    /// A continuous triple.
    One,
    /// `Δ_k(d)`.
    Delta(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MapEntry {
    pub row: usize,
    pub diagonal: usize,
    /// `(d, d+1, d+t)` reduced mod `n`; may repeat an index.
    pub indices: [usize; 3],
    pub slot: Slot,
}

impl MapEntry {
    /// The triangle, unless an index repeats.
    pub fn triangle(&self) -> Option<Triangle> {
        let [a, b, c] = self.indices;
        Triangle::new(a, b, c).ok()
    }
}

/// Every position of one period, row by row from the top.
pub fn build_plucker_frieze_map(ground: GroundSet) -> Vec<MapEntry> {
    let n = ground.n();
    let w = ground.width();
    let mut out = Vec::with_capacity((w + 6) * n);
    for row in 0..=w + 5 {
        for d in 1..=n {
            let indices = [d, ground.shift(d, 1), ground.shift(d, row as isize)];
            let slot = if indices[2] == indices[0] || indices[2] == indices[1] {
                Slot::Zero
            } else if row == 2 || row == w + 3 {
                Slot::One
            } else {
                Slot::Delta(row - 2)
            };
            out.push(MapEntry {
                row,
                diagonal: d,
                indices,
                slot,
            });
        }
    }
    out
}

/// One period as a staircase: each row starts half a cell further right
/// than the one above.
pub fn render_frieze(grid: &FriezeGrid) -> String {
    let n = grid.n() as isize;
    let cells: Vec<Vec<String>> = (0..grid.height())
        .map(|t| (1..=n).map(|d| grid.entry(d, t).to_string()).collect())
        .collect();
    let wide = cells.iter().flatten().map(|s| s.len()).max().unwrap_or(1);
    let half = (wide + 2) / 2;
    let mut out = String::new();
    for (t, row) in cells.iter().enumerate() {
        let mut line = " ".repeat(t * half);
        for cell in row {
            let _ = write!(line, "{cell:>width$}", width = 2 * half);
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

fn numeric_row(line: &str) -> Option<Vec<Rational>> {
    let tokens: Vec<&str> = line.split_whitespace().collect();
    if tokens.is_empty() {
        return None;
    }
    tokens
        .iter()
        .map(|t| crate::parse_rational(t).ok())
        .collect()
}

/// Reads back the output of [`render_frieze`]: the first block of lines
/// that consist only of numbers, with its border rows.
pub fn parse_rendered(text: &str) -> Result<FriezeGrid> {
    let rows: Vec<Vec<Rational>> = text
        .lines()
        .skip_while(|l| numeric_row(l).is_none())
        .map_while(numeric_row)
        .collect();
    if rows.len() < 7 {
        return Err(Error::Format(format!(
            "a rendered frieze has at least 7 rows, found {}",
            rows.len()
        )));
    }
    let n = rows[0].len();
    if let Some(i) = rows.iter().position(|r| r.len() != n) {
        return Err(Error::Format(format!(
            "row {} has {} entries, expected {n}",
            i + 1,
            rows[i].len()
        )));
    }
    let h = rows.len();
    let is = |r: &Vec<Rational>, v: i64| r.iter().all(|x| *x == Rational::from_integer(v.into()));
    let border = [(0, 0), (1, 0), (2, 1), (h - 3, 1), (h - 2, 0), (h - 1, 0)];
    if let Some(&(i, v)) = border.iter().find(|(i, v)| !is(&rows[*i], *v)) {
        return Err(Error::Format(format!(
            "border row {} is not all {v}",
            i + 1
        )));
    }
    FriezeGrid::new(n, rows[3..h - 3].to_vec()).map_err(|e| Error::Format(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> Rational {
        Rational::from_integer(v.into())
    }

    fn sample() -> FriezeGrid {
        let rows = [
            [4, 3, 2, 5, 1, 4, 5, 1],
            [6, 5, 4, 3, 3, 7, 4, 2],
            [9, 8, 1, 8, 3, 4, 7, 1],
            [13, 1, 2, 6, 1, 6, 2, 1],
        ];
        FriezeGrid::new(
            8,
            rows.iter()
                .map(|r| r.iter().map(|&v| q(v)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn map_slots() {
        let g = GroundSet::new(8).unwrap();
        let map = build_plucker_frieze_map(g);
        assert_eq!(map.len(), 10 * 8);
        for e in &map {
            match e.slot {
                Slot::Zero => assert!(e.triangle().is_none()),
                Slot::One => assert!(e.triangle().unwrap().is_continuous(&g)),
                Slot::Delta(k) => {
                    let t = e.triangle().unwrap();
                    assert!(!t.is_continuous(&g));
                    let d = e.diagonal;
                    assert_eq!(
                        t,
                        g.triangle(d, g.shift(d, 1), g.shift(d, k as isize + 2))
                            .unwrap()
                    );
                }
            }
        }
        let first = map.iter().find(|e| e.slot == Slot::Delta(1)).unwrap();
        let [i, j, k] = first.indices;
        assert_eq!((j, k), (g.shift(i, 1), g.shift(i, 3)));
    }

    #[test]
    fn rendered_rows_read_as_the_sample() {
        let text = render_frieze(&sample());
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 10);
        let tokens: Vec<String> = lines[3].split_whitespace().map(String::from).collect();
        assert_eq!(tokens.join(" "), "4 3 2 5 1 4 5 1");
        assert_eq!(
            lines[6].split_whitespace().collect::<Vec<_>>().join(" "),
            "13 1 2 6 1 6 2 1"
        );
        let indent = |l: &str| l.len() - l.trim_start().len();
        assert!(indent(lines[4]) > indent(lines[3]));
    }

    #[test]
    fn render_parse_round_trip() {
        let g = sample();
        let text = format!("{}\nSL3: yes\n", render_frieze(&g));
        assert_eq!(parse_rendered(&text).unwrap(), g);
        assert!(parse_rendered("1 2 3\n").is_err());
    }
}
