//! Points on a circle, their cyclic order, and triangles.
//!
//! Points are the integers `1..=n` arranged counter-clockwise. All modular
//! arithmetic maps back into `1..=n`; zero is never a valid point.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest supported ground size. Below six points the neighbourhood
/// `x-2, ..., x+2` of a point no longer leaves room for anything else.
pub const MIN_POINTS: usize = 6;

/// Largest supported ground size; adjacency sets are `u128` bitmasks.
pub const MAX_POINTS: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct GroundSet {
    n: usize,
}

impl TryFrom<usize> for GroundSet {
    type Error = Error;

    fn try_from(n: usize) -> Result<Self> {
        GroundSet::new(n)
    }
}

impl From<GroundSet> for usize {
    fn from(g: GroundSet) -> usize {
        g.n
    }
}

impl GroundSet {
    pub fn new(n: usize) -> Result<Self> {
        if n < MIN_POINTS {
            return Err(Error::invalid(format!(
                "ground size n = {n} is below the supported minimum of {MIN_POINTS}"
            )));
        }
        if n > MAX_POINTS {
            return Err(Error::invalid(format!(
                "ground size n = {n} exceeds the supported maximum of {MAX_POINTS}"
            )));
        }
        Ok(GroundSet { n })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Width of the frieze attached to this ground set.
    #[inline]
    pub fn width(&self) -> usize {
        self.n - 4
    }

    /// Maximal weakly separated families always have this many triangles.
    #[inline]
    pub fn maximal_family_size(&self) -> usize {
        3 * self.n - 8
    }

    #[inline]
    pub fn contains(&self, p: usize) -> bool {
        (1..=self.n).contains(&p)
    }

    pub fn points(&self) -> impl Iterator<Item = usize> + Clone {
        1..=self.n
    }

    pub fn check_point(&self, p: usize) -> Result<usize> {
        if self.contains(p) {
            Ok(p)
        } else {
            Err(Error::invalid(format!(
                "point {p} is outside 1..={}",
                self.n
            )))
        }
    }

    /// `p + k` taken modulo `n`, mapped into `1..=n`.
    #[inline]
    pub fn shift(&self, p: usize, k: isize) -> usize {
        let n = self.n as isize;
        ((p as isize - 1 + k).rem_euclid(n) + 1) as usize
    }

    /// Position of `p` in the order `<_x` on `[n] \ {x}`: `x+1` has rank 0,
    /// `x-1` has rank `n-2`. Undefined for `p == x`.
    #[inline]
    pub(crate) fn rank_from(&self, x: usize, p: usize) -> usize {
        (p + self.n - x - 1) % self.n
    }

    /// Unchecked three-point cyclic order test for distinct in-range points.
    #[inline]
    pub(crate) fn ccw(&self, a: usize, b: usize, c: usize) -> bool {
        self.rank_from(a, b) < self.rank_from(a, c)
    }

    /// A tuple is cyclically ordered when it is ascending or a single
    /// rotation of an ascending tuple.
    pub fn cyclically_ordered(&self, points: &[usize]) -> Result<bool> {
        if points.len() < 3 {
            return Err(Error::invalid(format!(
                "cyclic order needs at least 3 points, got {}",
                points.len()
            )));
        }
        self.check_distinct(points)?;
        Ok(cyclic_descents(points) == 1)
    }

    fn check_distinct(&self, points: &[usize]) -> Result<()> {
        for (i, &p) in points.iter().enumerate() {
            self.check_point(p)?;
            if points[..i].contains(&p) {
                return Err(Error::invalid(format!("point {p} appears twice")));
            }
        }
        Ok(())
    }

    /// The cyclic interval from `a` to `b`, listed in cyclic order starting
    /// after `a` (or at `a` when closed on the left).
    pub fn interval(
        &self,
        a: usize,
        b: usize,
        closed_left: bool,
        closed_right: bool,
    ) -> Result<Vec<usize>> {
        self.check_point(a)?;
        self.check_point(b)?;
        if a == b {
            return Err(Error::invalid(format!(
                "interval endpoints must differ, got ({a},{b})"
            )));
        }
        let mut out = Vec::new();
        if closed_left {
            out.push(a);
        }
        let mut p = self.shift(a, 1);
        while p != b {
            out.push(p);
            p = self.shift(p, 1);
        }
        if closed_right {
            out.push(b);
        }
        Ok(out)
    }

    /// `a <_x b`, i.e. `(x, a, b)` is cyclically ordered.
    pub fn less_x(&self, x: usize, a: usize, b: usize) -> Result<bool> {
        self.check_distinct(&[x, a, b])?;
        Ok(self.ccw(x, a, b))
    }

    /// `[n] \ {x}` sorted by `<_x`.
    pub fn order_from(&self, x: usize) -> Vec<usize> {
        (1..self.n).map(|k| self.shift(x, k as isize)).collect()
    }

    pub fn triangle(&self, a: usize, b: usize, c: usize) -> Result<Triangle> {
        let t = Triangle::new(a, b, c)?;
        for p in t.points() {
            self.check_point(p)?;
        }
        Ok(t)
    }

    /// Every triangle in lexicographic order of sorted triples.
    pub fn all_triangles(&self) -> impl Iterator<Item = Triangle> + '_ {
        let n = self.n;
        (1..=n).flat_map(move |a| {
            (a + 1..=n).flat_map(move |b| (b + 1..=n).map(move |c| Triangle([a, b, c])))
        })
    }

    /// `{i, i+1, i+2}` reduced mod `n`.
    pub fn continuous(&self, i: usize) -> Triangle {
        Triangle::sorted(i, self.shift(i, 1), self.shift(i, 2))
    }
}

fn cyclic_descents(points: &[usize]) -> usize {
    let r = points.len();
    (0..r).filter(|&i| points[i] > points[(i + 1) % r]).count()
}

/// A 3-subset of `[n]`, stored strictly ascending.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triangle([usize; 3]);

impl Triangle {
    pub fn new(a: usize, b: usize, c: usize) -> Result<Triangle> {
        if a == 0 || b == 0 || c == 0 {
            return Err(Error::invalid("points are 1-based; 0 is not a point"));
        }
        if a == b || b == c || a == c {
            return Err(Error::invalid(format!(
                "triangle ({a},{b},{c}) repeats a point"
            )));
        }
        Ok(Triangle::sorted(a, b, c))
    }

    /// Sorts three distinct points. Callers guarantee distinctness.
    pub(crate) fn sorted(a: usize, b: usize, c: usize) -> Triangle {
        debug_assert!(a != b && b != c && a != c, "({a},{b},{c})");
        let mut p = [a, b, c];
        p.sort_unstable();
        Triangle(p)
    }

    #[inline]
    pub fn points(&self) -> [usize; 3] {
        self.0
    }

    #[inline]
    pub fn contains(&self, p: usize) -> bool {
        self.0.contains(&p)
    }

    pub fn shared(&self, other: &Triangle) -> usize {
        self.0.iter().filter(|p| other.contains(**p)).count()
    }

    /// Points of `self` not in `other`, ascending.
    pub fn minus(&self, other: &Triangle) -> Vec<usize> {
        self.0
            .iter()
            .copied()
            .filter(|p| !other.contains(*p))
            .collect()
    }

    /// The two points other than `x`, ascending, if `x` is a corner.
    pub fn others(&self, x: usize) -> Option<(usize, usize)> {
        let [a, b, c] = self.0;
        if a == x {
            Some((b, c))
        } else if b == x {
            Some((a, c))
        } else if c == x {
            Some((a, b))
        } else {
            None
        }
    }

    /// Consecutive points `{i, i+1, i+2}` modulo `n`.
    pub fn is_continuous(&self, ground: &GroundSet) -> bool {
        self.0.iter().any(|&i| ground.continuous(i) == *self)
    }
}

impl fmt::Display for Triangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.0;
        write!(f, "{{{a},{b},{c}}}")
    }
}

impl TryFrom<[usize; 3]> for Triangle {
    type Error = Error;

    fn try_from(p: [usize; 3]) -> Result<Triangle> {
        Triangle::new(p[0], p[1], p[2])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize) -> GroundSet {
        GroundSet::new(n).unwrap()
    }

    #[test]
    fn small_ground_sets_rejected() {
        assert!(GroundSet::new(5).is_err());
        assert!(GroundSet::new(0).is_err());
        assert!(GroundSet::new(6).is_ok());
    }

    #[test]
    fn cyclic_order_examples() {
        let g6 = g(6);
        assert!(g6.cyclically_ordered(&[1, 2, 3]).unwrap());
        assert!(g6.cyclically_ordered(&[4, 6, 1]).unwrap());
        assert!(!g6.cyclically_ordered(&[1, 3, 2]).unwrap());
        assert!(g6.cyclically_ordered(&[5, 6, 1, 2]).unwrap());
        assert!(g6.cyclically_ordered(&[1, 1, 2]).is_err());
        assert!(g6.cyclically_ordered(&[1, 2, 7]).is_err());
    }

    #[test]
    fn intervals() {
        let g6 = g(6);
        assert_eq!(g6.interval(2, 5, false, false).unwrap(), vec![3, 4]);
        assert_eq!(g6.interval(5, 2, false, false).unwrap(), vec![6, 1]);
        assert_eq!(g6.interval(5, 2, true, true).unwrap(), vec![5, 6, 1, 2]);
        assert_eq!(
            g6.interval(3, 4, false, false).unwrap(),
            Vec::<usize>::new()
        );
        assert!(g6.interval(2, 2, false, false).is_err());
    }

    #[test]
    fn order_relative_to_x() {
        let g6 = g(6);
        assert!(g6.less_x(3, 4, 2).unwrap());
        assert!(!g6.less_x(3, 2, 4).unwrap());
        assert!(g6.less_x(3, 3, 2).is_err());
        assert_eq!(g6.order_from(3), vec![4, 5, 6, 1, 2]);
    }

    #[test]
    fn shift_wraps_into_one_based_range() {
        let g6 = g(6);
        assert_eq!(g6.shift(6, 1), 1);
        assert_eq!(g6.shift(1, -1), 6);
        assert_eq!(g6.shift(2, -8), 6);
        assert_eq!(g6.continuous(5), Triangle::new(5, 6, 1).unwrap());
    }

    #[test]
    fn all_triangles_is_lexicographic() {
        let ts: Vec<_> = g(6).all_triangles().collect();
        assert_eq!(ts.len(), 20);
        assert!(ts.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn ccw_agrees_with_definition() {
        let g7 = g(7);
        for a in g7.points() {
            for b in g7.points() {
                for c in g7.points() {
                    if a != b && b != c && a != c {
                        assert_eq!(g7.ccw(a, b, c), g7.cyclically_ordered(&[a, b, c]).unwrap());
                    }
                }
            }
        }
    }
}
