//! Crossing predicates for triangles.
//!
//! Three independent routes decide whether two triangles cross: the
//! quadruple search straight from the definition, the interval case
//! analysis on a cyclically labelled triangle, and chord interleaving.
//! They are interchangeable behind [`CrossingPredicate`] and registered by
//! name in [`predicates`].

use crate::ground::{GroundSet, Triangle};
use crate::registry::Registry;

pub trait CrossingPredicate: Send + Sync {
    fn name(&self) -> &'static str;
    fn crosses(&self, ground: &GroundSet, a: &Triangle, b: &Triangle) -> bool;
}

/// Exhaustive search for `a, c` in `A \ B` and `b, d` in `B \ A` with
/// `(a, b, c, d)` cyclically ordered.
pub fn crossing_definition(ground: &GroundSet, a: &Triangle, b: &Triangle) -> bool {
    let only_a = a.minus(b);
    let only_b = b.minus(a);
    for &p in &only_a {
        for &r in &only_a {
            if p == r {
                continue;
            }
            for &q in &only_b {
                for &s in &only_b {
                    if q == s {
                        continue;
                    }
                    if ground.cyclically_ordered(&[p, q, r, s]).unwrap_or(false) {
                        return true;
                    }
                }
            }
        }
    }
    false
}

#[inline]
fn in_open(ground: &GroundSet, lo: usize, hi: usize, p: usize) -> bool {
    p != lo && p != hi && ground.ccw(lo, p, hi)
}

/// Interval case analysis. With `A = {a, b, c}` labelled cyclically, `B`
/// crosses `A` exactly when some labelling `B = {u, v, w}` satisfies one of
///
/// 1. `u ∈ (a,b)`, `v ∈ (b,c)`, `w ≠ b`
/// 2. `u ∈ (a,b)`, `w ∈ (c,a)`, `v ≠ a`
/// 3. `v ∈ (b,c)`, `w ∈ (c,a)`, `u ≠ c`
pub fn crossing_cases(ground: &GroundSet, a: &Triangle, b: &Triangle) -> bool {
    let [p, q, r] = a.points();
    let [x, y, z] = b.points();
    const PERMS: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let pts = [x, y, z];
    PERMS.iter().any(|perm| {
        let (u, v, w) = (pts[perm[0]], pts[perm[1]], pts[perm[2]]);
        (in_open(ground, p, q, u) && in_open(ground, q, r, v) && w != q)
            || (in_open(ground, p, q, u) && in_open(ground, r, p, w) && v != p)
            || (in_open(ground, q, r, v) && in_open(ground, r, p, w) && u != r)
    })
}

/// Crossing iff some chord between two points of `A \ B` crosses some chord
/// between two points of `B \ A`.
pub fn crossing_chords(ground: &GroundSet, a: &Triangle, b: &Triangle) -> bool {
    let only_a = a.minus(b);
    let only_b = b.minus(a);
    if only_a.len() < 2 {
        return false;
    }
    for (i, &p) in only_a.iter().enumerate() {
        for &r in &only_a[i + 1..] {
            for (j, &q) in only_b.iter().enumerate() {
                for &s in &only_b[j + 1..] {
                    if in_open(ground, p, r, q) != in_open(ground, p, r, s) {
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// The predicate used on production paths.
#[inline]
pub fn crosses(ground: &GroundSet, a: &Triangle, b: &Triangle) -> bool {
    crossing_cases(ground, a, b)
}

pub struct Definition;
pub struct CaseAnalysis;
pub struct Chords;

impl CrossingPredicate for Definition {
    fn name(&self) -> &'static str {
        "definition"
    }
    fn crosses(&self, ground: &GroundSet, a: &Triangle, b: &Triangle) -> bool {
        crossing_definition(ground, a, b)
    }
}

impl CrossingPredicate for CaseAnalysis {
    fn name(&self) -> &'static str {
        "cases"
    }
    fn crosses(&self, ground: &GroundSet, a: &Triangle, b: &Triangle) -> bool {
        crossing_cases(ground, a, b)
    }
}

impl CrossingPredicate for Chords {
    fn name(&self) -> &'static str {
        "chords"
    }
    fn crosses(&self, ground: &GroundSet, a: &Triangle, b: &Triangle) -> bool {
        crossing_chords(ground, a, b)
    }
}

pub const DEFAULT_PREDICATE: &str = "cases";

pub fn predicates() -> Registry<dyn CrossingPredicate> {
    let mut r: Registry<dyn CrossingPredicate> = Registry::new("crossing predicate");
    for p in [
        Box::new(Definition) as Box<dyn CrossingPredicate>,
        Box::new(CaseAnalysis),
        Box::new(Chords),
    ] {
        r.register(p.name(), p);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(a: usize, b: usize, c: usize) -> Triangle {
        Triangle::new(a, b, c).unwrap()
    }

    #[test]
    fn interleaved_triangles_cross() {
        let g = GroundSet::new(6).unwrap();
        for (_, p) in predicates().iter() {
            assert!(p.crosses(&g, &t(1, 3, 5), &t(2, 4, 6)), "{}", p.name());
            assert!(!p.crosses(&g, &t(1, 2, 3), &t(4, 5, 6)), "{}", p.name());
        }
    }

    #[test]
    fn two_shared_points_never_cross() {
        let g = GroundSet::new(7).unwrap();
        for (_, p) in predicates().iter() {
            assert!(!p.crosses(&g, &t(1, 2, 5), &t(1, 2, 6)));
        }
    }

    #[test]
    fn identical_triangles_do_not_cross() {
        let g = GroundSet::new(8).unwrap();
        for (_, p) in predicates().iter() {
            assert!(!p.crosses(&g, &t(2, 5, 7), &t(2, 5, 7)));
        }
    }

    #[test]
    fn one_shared_point() {
        let g = GroundSet::new(6).unwrap();
        // A \ B = {1,4}, B \ A = {3,5}: chords 1-4 and 3-5 interleave.
        assert!(crossing_definition(&g, &t(1, 2, 4), &t(2, 3, 5)));
        assert!(crossing_cases(&g, &t(1, 2, 4), &t(2, 3, 5)));
        // A \ B = {1,5}, B \ A = {2,3}: separated.
        assert!(!crossing_definition(&g, &t(1, 4, 5), &t(2, 3, 4)));
        assert!(!crossing_cases(&g, &t(1, 4, 5), &t(2, 3, 4)));
    }

    #[test]
    fn continuous_triangles_cross_nothing() {
        let g = GroundSet::new(7).unwrap();
        for i in g.points() {
            let c = g.continuous(i);
            for other in g.all_triangles() {
                assert!(!crossing_definition(&g, &c, &other), "{c} {other}");
            }
        }
    }

    #[test]
    fn registry_names() {
        assert_eq!(predicates().names(), vec!["cases", "chords", "definition"]);
        assert!(predicates().get(DEFAULT_PREDICATE).is_some());
    }
}
