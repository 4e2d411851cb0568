//! Frieze rows and the recursions that grow them from the two bottom rows.
//!
//! `Δ_k(i) = v{i, i+1, i+k+2}` and `Δ^k(i) = v{i, i+k+1, i+k+2}`, indices
//! mod `n`. Both families of rows describe the same triples:
//! `Δ^k(i) = Δ_{n-3-k}(i+k+1)`.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Rational;

fn wrap(i: isize, n: usize) -> usize {
    i.rem_euclid(n as isize) as usize
}

/// `Δ_1` and `Δ^1`, indexed `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuiddityRows {
    n: usize,
    delta_low: Vec<Rational>,
    delta_high: Vec<Rational>,
}

impl QuiddityRows {
    pub fn new(
        n: usize,
        delta_low: Vec<Rational>,
        delta_high: Vec<Rational>,
    ) -> Result<QuiddityRows> {
        if n < 5 {
            return Err(Error::invalid(format!("a frieze needs n ≥ 5, got {n}")));
        }
        if delta_low.len() != n || delta_high.len() != n {
            return Err(Error::invalid(format!(
                "rows have lengths {} and {}, expected {n}",
                delta_low.len(),
                delta_high.len()
            )));
        }
        if let Some(i) = delta_low
            .iter()
            .chain(&delta_high)
            .position(|v| v.is_zero())
        {
            return Err(Error::invalid(format!("zero entry at flat position {i}")));
        }
        Ok(QuiddityRows {
            n,
            delta_low,
            delta_high,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `Δ_1(i)`, `i` taken mod `n`.
    pub fn low(&self, i: usize) -> &Rational {
        &self.delta_low[wrap(i as isize - 1, self.n)]
    }

    /// `Δ^1(i)`, `i` taken mod `n`.
    pub fn high(&self, i: usize) -> &Rational {
        &self.delta_high[wrap(i as isize - 1, self.n)]
    }

    pub fn delta_low(&self) -> &[Rational] {
        &self.delta_low
    }

    pub fn delta_high(&self) -> &[Rational] {
        &self.delta_high
    }
}

/// The nontrivial rows `Δ_1, ..., Δ_w` of a frieze of width `w = n - 4`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FriezeGrid {
    n: usize,
    rows: Vec<Vec<Rational>>,
}

impl FriezeGrid {
    pub fn new(n: usize, rows: Vec<Vec<Rational>>) -> Result<FriezeGrid> {
        if rows.is_empty() {
            return Err(Error::InconsistentRows(
                "a frieze needs width at least 1".into(),
            ));
        }
        if n != rows.len() + 4 {
            return Err(Error::InconsistentRows(format!(
                "{} rows need period {}, got n = {n}",
                rows.len(),
                rows.len() + 4
            )));
        }
        if let Some((k, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::InconsistentRows(format!(
                "row {} has {} entries, expected {n}",
                k + 1,
                r.len()
            )));
        }
        Ok(FriezeGrid { n, rows })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn width(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    /// `Δ_k(i)` for `1 ≤ k ≤ w`, `i` taken mod `n`.
    pub fn delta(&self, k: usize, i: isize) -> &Rational {
        &self.rows[k - 1][wrap(i - 1, self.n)]
    }

    /// `v{d, d+1, d+t}` for `0 ≤ t ≤ w+5`: the full array including the
    /// two rows of zeros and the row of ones on either side.
    pub fn entry(&self, d: isize, t: usize) -> Rational {
        let w = self.width();
        match t {
            0 | 1 => Rational::zero(),
            2 => Rational::one(),
            t if t <= w + 2 => self.delta(t - 2, d).clone(),
            t if t == w + 3 => Rational::one(),
            t if t <= w + 5 => Rational::zero(),
            _ => panic!("row {t} is outside the frieze of width {w}"),
        }
    }

    /// Number of rows including the border rows.
    pub fn height(&self) -> usize {
        self.width() + 6
    }

    pub fn all_positive_integers(&self) -> bool {
        self.rows
            .iter()
            .flatten()
            .all(|v| v.is_integer() && *v > Rational::zero())
    }

    pub fn to_file(&self) -> FriezeFile {
        FriezeFile {
            schema_version: Some(crate::SCHEMA_VERSION),
            n: self.n,
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|v| Entry::Text(v.to_string())).collect())
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        crate::to_json_lines(&self.to_file())
    }

    pub fn from_json(text: &str) -> Result<FriezeGrid> {
        let file: FriezeFile =
            serde_json::from_str(text).map_err(|e| Error::Format(format!("frieze file: {e}")))?;
        file.into_grid()
    }
}

/// A rational written as `"p/q"` or `"p"`, or a bare JSON integer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Integer(i64),
    Text(String),
}

impl Entry {
    fn value(&self) -> Result<Rational> {
        match self {
            Entry::Integer(v) => Ok(Rational::from_integer((*v).into())),
            Entry::Text(s) => crate::parse_rational(s),
        }
    }
}

/// On-disk frieze: `{"n": 8, "rows": [["4", "3", ...], ...]}`, rows
/// `Δ_1` to `Δ_w`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FriezeFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema_version: Option<u32>,
    pub n: usize,
    pub rows: Vec<Vec<Entry>>,
}

impl FriezeFile {
    pub fn into_grid(self) -> Result<FriezeGrid> {
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(Entry::value).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()
            .map_err(|e| Error::Format(e.to_string()))?;
        FriezeGrid::new(self.n, rows).map_err(|e| Error::Format(e.to_string()))
    }
}

/// `Δ^1, ..., Δ^w` from the bottom rows by
/// `Δ^2(i) = Δ^1(i+1)Δ^1(i) − Δ_1(i)` and, for `k ≥ 3`,
/// `Δ^k(i) = Δ^1(i+k−1)Δ^{k−1}(i) − Δ_1(i+k−2)Δ^{k−2}(i) + Δ^{k−3}(i)`.
pub fn dual_rows(q: &QuiddityRows) -> Vec<Vec<Rational>> {
    let n = q.n();
    let w = n - 4;
    let one = Rational::one();
    // up[k][i-1] = Δ^k(i), with Δ^0 = 1.
    let mut up: Vec<Vec<Rational>> = vec![vec![one; n], q.delta_high().to_vec()];
    for k in 2..=w {
        let row = (1..=n)
            .map(|i| {
                let mut v =
                    q.high(i + k - 1) * &up[k - 1][i - 1] - q.low(i + k - 2) * &up[k - 2][i - 1];
                if k >= 3 {
                    v += &up[k - 3][i - 1];
                }
                v
            })
            .collect();
        up.push(row);
    }
    up.remove(0);
    up
}

/// Grows `Δ_2, ..., Δ_w` from `Δ_1` and `Δ^1`:
/// `Δ_2(i) = Δ_1(i)Δ_1(i+1) − Δ^1(i+1)` and, for `k ≥ 3`,
/// `Δ_k(i) = Δ_1(i)Δ_{k−1}(i+1) − Δ^1(i+1)Δ_{k−2}(i+2) + Δ_{k−3}(i+3)`.
///
/// The rows `Δ^k` are computed independently by [`dual_rows`]; every
/// position must satisfy `Δ^k(i) = Δ_{n-3-k}(i+k+1)`.
pub fn extend_rows(q: &QuiddityRows) -> Result<FriezeGrid> {
    let n = q.n();
    let w = n - 4;
    let one = Rational::one();
    // low[k][i-1] = Δ_k(i), with Δ_0 = 1.
    let mut low: Vec<Vec<Rational>> = vec![vec![one; n], q.delta_low().to_vec()];
    let at = |row: &Vec<Rational>, i: usize| row[(i - 1) % n].clone();
    for k in 2..=w {
        let row = (1..=n)
            .map(|i| {
                let mut v =
                    q.low(i) * at(&low[k - 1], i + 1) - q.high(i + 1) * at(&low[k - 2], i + 2);
                if k >= 3 {
                    v += at(&low[k - 3], i + 3);
                }
                v
            })
            .collect();
        low.push(row);
    }
    low.remove(0);
    let grid = FriezeGrid::new(n, low)?;
    let dual = dual_rows(q);
    if let Some((k, i)) = dual_mismatch(&grid, &dual, 1) {
        return Err(Error::InconsistentRows(format!(
            "Δ^{k}({i}) = {} but Δ_{}({}) = {}",
            dual[k - 1][i - 1],
            n - 3 - k,
            wrap((i + k) as isize, n) + 1,
            grid.delta(n - 3 - k, (i + k + 1) as isize)
        )));
    }
    Ok(grid)
}

/// First `(k, i)` where `Δ^k(i) ≠ Δ_{n-3-k}(i+k+shift)`, if any.
pub fn dual_mismatch(
    grid: &FriezeGrid,
    dual: &[Vec<Rational>],
    shift: usize,
) -> Option<(usize, usize)> {
    let n = grid.n();
    for (k, row) in (1..).zip(dual) {
        for i in 1..=n {
            if row[i - 1] != *grid.delta(n - 3 - k, (i + k + shift) as isize) {
                return Some((k, i));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter()
            .map(|&x| Rational::from_integer(x.into()))
            .collect()
    }

    fn sample_rows() -> QuiddityRows {
        QuiddityRows::new(
            8,
            ints(&[4, 3, 2, 5, 1, 4, 5, 1]),
            ints(&[2, 6, 1, 6, 2, 1, 13, 1]),
        )
        .unwrap()
    }

    #[test]
    fn second_row_entries() {
        let grid = extend_rows(&sample_rows()).unwrap();
        assert_eq!(grid.delta(2, 1), &Rational::from_integer(6.into()));
        assert_eq!(grid.delta(2, 8), &Rational::from_integer(2.into()));
    }

    #[test]
    fn reproduces_the_width_four_example() {
        let grid = extend_rows(&sample_rows()).unwrap();
        assert_eq!(grid.rows()[1], ints(&[6, 5, 4, 3, 3, 7, 4, 2]));
        assert_eq!(grid.rows()[2], ints(&[9, 8, 1, 8, 3, 4, 7, 1]));
        assert_eq!(grid.rows()[3], ints(&[13, 1, 2, 6, 1, 6, 2, 1]));
    }

    #[test]
    fn corrupted_high_row_is_inconsistent() {
        let mut high = ints(&[2, 6, 1, 6, 2, 1, 13, 1]);
        high[3] = Rational::from_integer(7.into());
        let q = QuiddityRows::new(8, ints(&[4, 3, 2, 5, 1, 4, 5, 1]), high).unwrap();
        assert!(matches!(extend_rows(&q), Err(Error::InconsistentRows(_))));
    }

    #[test]
    fn border_rows() {
        let grid = extend_rows(&sample_rows()).unwrap();
        for d in 1..=8 {
            assert!(grid.entry(d, 0).is_zero() && grid.entry(d, 1).is_zero());
            assert!(grid.entry(d, 2).is_one() && grid.entry(d, 7).is_one());
            assert!(grid.entry(d, 8).is_zero() && grid.entry(d, 9).is_zero());
        }
    }

    #[test]
    fn json_accepts_integers_and_strings() {
        let text = r#"{"n":5,"rows":[[1,"2","3/1",1,2]]}"#;
        let g = FriezeGrid::from_json(text).unwrap();
        assert_eq!(g.rows()[0], ints(&[1, 2, 3, 1, 2]));
        assert!(FriezeGrid::from_json(r#"{"n":4,"rows":[]}"#).is_err());
        assert!(FriezeGrid::from_json(r#"{"n":5,"rows":[[1,2,3,1]]}"#).is_err());
        assert!(FriezeGrid::from_json(r#"{"n":5,"rows":[["1/0",1,1,1,1]]}"#).is_err());
        let back = FriezeGrid::from_json(&g.to_json()).unwrap();
        assert_eq!(back, g);
    }
}
