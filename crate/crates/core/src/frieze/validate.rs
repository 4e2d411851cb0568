//! Diamond determinants over one period of a frieze.

use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::Rational;

use super::grid::FriezeGrid;

/// Exact determinant by Gaussian elimination.
pub fn determinant(mut m: Vec<Vec<Rational>>) -> Rational {
    let k = m.len();
    let mut det = Rational::one();
    for col in 0..k {
        let Some(pivot) = (col..k).find(|&r| !m[r][col].is_zero()) else {
            return Rational::zero();
        };
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= &p;
        for r in col + 1..k {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &p;
            let (top, bottom) = m.split_at_mut(r);
            for (x, y) in bottom[0][col..].iter_mut().zip(&top[col][col..]) {
                *x -= &f * y;
            }
        }
    }
    det
}

/// How a `k × k` diamond is read off the array.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// `M[a][b] = v{d+b, d+b+1, d+t+a}`: row `a` runs down-left, column `b`
    /// runs down-right.
    Standard,
    /// `Standard` with its rows in reverse order.
    Mirrored,
}

/// The diamond anchored at diagonal `d`, row `t`.
pub fn diamond(
    grid: &FriezeGrid,
    orientation: Orientation,
    d: isize,
    t: usize,
    k: usize,
) -> Vec<Vec<Rational>> {
    (0..k)
        .map(|a| {
            let a = match orientation {
                Orientation::Standard => a,
                Orientation::Mirrored => k - 1 - a,
            };
            (0..k)
                .map(|b| grid.entry(d + b as isize, t + a - b))
                .collect()
        })
        .collect()
}

/// Anchors `(d, t)` of every `k × k` diamond over one period.
pub fn diamond_anchors(grid: &FriezeGrid, k: usize) -> impl Iterator<Item = (isize, usize)> {
    let n = grid.n() as isize;
    let top = grid.height() - 1;
    (k - 1..=top + 1 - k).flat_map(move |t| (1..=n).map(move |d| (d, t)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiamondFailure {
    pub size: usize,
    pub diagonal: isize,
    pub row: usize,
    pub determinant: String,
}

impl fmt::Display for DiamondFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{0}x{0} diamond at diagonal {1}, row {2}: determinant {3}",
            self.size, self.diagonal, self.row, self.determinant
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FriezeReport {
    pub n: usize,
    pub width: usize,
    pub diamonds3: usize,
    pub diamonds4: usize,
    pub failures3: Vec<DiamondFailure>,
    pub failures4: Vec<DiamondFailure>,
    pub period: bool,
    pub integral: bool,
}

impl FriezeReport {
    pub fn sl3(&self) -> bool {
        self.failures3.is_empty()
    }

    pub fn tame(&self) -> bool {
        self.failures4.is_empty()
    }

    pub fn valid(&self) -> bool {
        self.sl3() && self.tame() && self.period
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

impl fmt::Display for FriezeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "width {} period {}", self.width, self.n)?;
        writeln!(
            f,
            "SL3: {} ({} of {} 3x3 diamonds have determinant 1)",
            yes_no(self.sl3()),
            self.diamonds3 - self.failures3.len(),
            self.diamonds3
        )?;
        writeln!(
            f,
            "tame: {} ({} of {} 4x4 diamonds have determinant 0)",
            yes_no(self.tame()),
            self.diamonds4 - self.failures4.len(),
            self.diamonds4
        )?;
        writeln!(f, "period: {}", yes_no(self.period))?;
        write!(f, "integral: {}", yes_no(self.integral))?;
        for fail in self.failures3.iter().chain(&self.failures4) {
            write!(f, "\n  {fail}")?;
        }
        Ok(())
    }
}

fn failures(
    grid: &FriezeGrid,
    orientation: Orientation,
    k: usize,
    expected: &Rational,
) -> (usize, Vec<DiamondFailure>) {
    let mut count = 0;
    let mut out = Vec::new();
    for (d, t) in diamond_anchors(grid, k) {
        count += 1;
        let det = determinant(diamond(grid, orientation, d, t, k));
        if det != *expected {
            out.push(DiamondFailure {
                size: k,
                diagonal: d,
                row: t,
                determinant: det.to_string(),
            });
        }
    }
    (count, out)
}

pub fn validate_frieze(grid: &FriezeGrid) -> FriezeReport {
    validate_with(grid, Orientation::Standard)
}

pub fn validate_with(grid: &FriezeGrid, orientation: Orientation) -> FriezeReport {
    let (diamonds3, failures3) = failures(grid, orientation, 3, &Rational::one());
    let (diamonds4, failures4) = failures(grid, orientation, 4, &Rational::zero());
    let n = grid.n() as isize;
    let period = grid.n() == grid.width() + 4
        && (0..grid.height()).all(|t| (1..=n).all(|d| grid.entry(d, t) == grid.entry(d + n, t)));
    FriezeReport {
        n: grid.n(),
        width: grid.width(),
        diamonds3,
        diamonds4,
        failures3,
        failures4,
        period,
        integral: grid.rows().iter().flatten().all(|v| v.is_integer()),
    }
}
