//! Families of triangles: weak separation, maximality, completion and
//! random sampling of maximal families.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ground::{GroundSet, Triangle};
use crate::mutation::available_moves;
use crate::separation::{crosses, CrossingPredicate};
use crate::SCHEMA_VERSION;

/// A set of triangles over a ground set. `validated` records that the
/// triangles are already known to be pairwise weakly separated.
#[derive(Debug, Clone)]
pub struct Family {
    ground: GroundSet,
    triangles: BTreeSet<Triangle>,
    validated: bool,
}

impl PartialEq for Family {
    fn eq(&self, other: &Self) -> bool {
        self.ground == other.ground && self.triangles == other.triangles
    }
}

impl Eq for Family {}

impl Family {
    pub fn new(ground: GroundSet, triangles: impl IntoIterator<Item = Triangle>) -> Result<Family> {
        let mut set = BTreeSet::new();
        for t in triangles {
            for p in t.points() {
                ground.check_point(p)?;
            }
            if !set.insert(t) {
                return Err(Error::invalid(format!("duplicate triangle {t}")));
            }
        }
        Ok(Family {
            ground,
            triangles: set,
            validated: false,
        })
    }

    /// Like [`Family::new`] but also rejects crossing pairs.
    pub fn validated(
        ground: GroundSet,
        triangles: impl IntoIterator<Item = Triangle>,
    ) -> Result<Family> {
        let mut f = Family::new(ground, triangles)?;
        f.validate()?;
        Ok(f)
    }

    pub fn empty(ground: GroundSet) -> Family {
        Family {
            ground,
            triangles: BTreeSet::new(),
            validated: true,
        }
    }

    /// Builds a family that the caller knows to be weakly separated.
    pub(crate) fn trusted(ground: GroundSet, triangles: BTreeSet<Triangle>) -> Family {
        Family {
            ground,
            triangles,
            validated: true,
        }
    }

    fn validate(&mut self) -> Result<()> {
        if let Some((a, b)) = self.first_crossing_pair() {
            return Err(Error::invalid(format!(
                "family is not weakly separated: {a} crosses {b}"
            )));
        }
        self.validated = true;
        Ok(())
    }

    #[inline]
    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    #[inline]
    pub fn triangles(&self) -> &BTreeSet<Triangle> {
        &self.triangles
    }

    pub fn iter(&self) -> impl Iterator<Item = &Triangle> {
        self.triangles.iter()
    }

    pub fn len(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    pub fn contains(&self, t: &Triangle) -> bool {
        self.triangles.contains(t)
    }

    pub fn is_validated(&self) -> bool {
        self.validated
    }

    pub fn first_crossing_pair(&self) -> Option<(Triangle, Triangle)> {
        self.first_crossing_pair_by(crosses)
    }

    pub fn first_crossing_pair_with(
        &self,
        predicate: &dyn CrossingPredicate,
    ) -> Option<(Triangle, Triangle)> {
        self.first_crossing_pair_by(|g, a, b| predicate.crosses(g, a, b))
    }

    fn first_crossing_pair_by(
        &self,
        cross: impl Fn(&GroundSet, &Triangle, &Triangle) -> bool,
    ) -> Option<(Triangle, Triangle)> {
        let ts: Vec<&Triangle> = self.triangles.iter().collect();
        for (i, a) in ts.iter().enumerate() {
            for b in &ts[i + 1..] {
                if cross(&self.ground, a, b) {
                    return Some((**a, **b));
                }
            }
        }
        None
    }

    pub fn is_weakly_separated(&self) -> bool {
        self.validated || self.first_crossing_pair().is_none()
    }

    fn require_weakly_separated(&self) -> Result<()> {
        match (self.validated, self.first_crossing_pair()) {
            (true, _) | (false, None) => Ok(()),
            (false, Some((a, b))) => Err(Error::invalid(format!(
                "family is not weakly separated: {a} crosses {b}"
            ))),
        }
    }

    /// Whether `t` could be added without creating a crossing.
    pub fn compatible(&self, t: &Triangle) -> bool {
        self.triangles.iter().all(|s| !crosses(&self.ground, s, t))
    }

    /// A weakly separated family is maximal exactly when it has `3n - 8`
    /// triangles.
    pub fn is_maximal(&self) -> Result<bool> {
        self.require_weakly_separated()?;
        Ok(self.len() == self.ground.maximal_family_size())
    }

    /// Triangles outside the family that cross none of its members.
    pub fn addable_triangles(&self) -> Result<Vec<Triangle>> {
        self.require_weakly_separated()?;
        Ok(self
            .ground
            .all_triangles()
            .filter(|t| !self.contains(t) && self.compatible(t))
            .collect())
    }

    /// Slow maximality check that scans every triangle, and cross-checks the
    /// cardinality criterion against it.
    pub fn is_maximal_exhaustive(&self) -> Result<bool> {
        let by_scan = self.addable_triangles()?.is_empty();
        let by_count = self.is_maximal()?;
        if by_scan != by_count {
            return Err(Error::internal(format!(
                "maximality by scan ({by_scan}) disagrees with maximality by size ({by_count}, |F| = {})",
                self.len()
            )));
        }
        Ok(by_scan)
    }

    pub(crate) fn require_maximal(&self) -> Result<()> {
        if !self.is_maximal()? {
            return Err(Error::invalid(format!(
                "family has {} triangles but a maximal family on {} points has {}",
                self.len(),
                self.ground.n(),
                self.ground.maximal_family_size()
            )));
        }
        Ok(())
    }

    /// `F_x`: the triangles containing `x`.
    pub fn star(&self, x: usize) -> Family {
        Family {
            ground: self.ground,
            triangles: self
                .triangles
                .iter()
                .filter(|t| t.contains(x))
                .copied()
                .collect(),
            validated: self.validated,
        }
    }

    /// `self ∪ {add} \ {remove}`, keeping the validation flag. Callers are
    /// responsible for the exchange preserving weak separation.
    pub(crate) fn exchanged(&self, remove: &Triangle, add: Triangle) -> Family {
        let mut triangles = self.triangles.clone();
        triangles.remove(remove);
        triangles.insert(add);
        Family {
            ground: self.ground,
            triangles,
            validated: self.validated,
        }
    }

    pub fn to_file(&self) -> FamilyFile {
        FamilyFile {
            schema_version: Some(SCHEMA_VERSION),
            n: self.ground.n(),
            triangles: self.triangles.iter().map(|t| t.points()).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        crate::to_json_lines(&self.to_file())
    }

    pub fn from_json(text: &str) -> Result<Family> {
        let file: FamilyFile =
            serde_json::from_str(text).map_err(|e| Error::Format(format!("family file: {e}")))?;
        file.into_family()
    }
}

/// On-disk family: `{"n": 8, "triangles": [[1,2,3], ...]}`, sorted triples.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema_version: Option<u32>,
    pub n: usize,
    pub triangles: Vec<[usize; 3]>,
}

impl FamilyFile {
    pub fn into_family(self) -> Result<Family> {
        let ground = GroundSet::new(self.n).map_err(|e| Error::Format(e.to_string()))?;
        let mut ts = Vec::with_capacity(self.triangles.len());
        for raw in self.triangles {
            if !(raw[0] < raw[1] && raw[1] < raw[2]) {
                return Err(Error::Format(format!(
                    "triangle {raw:?} is not a strictly ascending triple"
                )));
            }
            let t = ground
                .triangle(raw[0], raw[1], raw[2])
                .map_err(|e| Error::Format(e.to_string()))?;
            ts.push(t);
        }
        Family::new(ground, ts).map_err(|e| Error::Format(e.to_string()))
    }
}

/// `{i, i+1, i+2}` for every `i`; contained in every maximal family.
pub fn frozen_triangles(ground: GroundSet) -> Family {
    let set = ground.points().map(|i| ground.continuous(i)).collect();
    Family::trusted(ground, set)
}

/// Extends a weakly separated family to a maximal one by adding the
/// lexicographically smallest compatible triangle until none is left.
///
/// One ascending pass suffices: a triangle rejected earlier stays
/// incompatible as the family only grows.
pub fn greedy_complete(family: &Family) -> Result<Family> {
    family.require_weakly_separated()?;
    let ground = family.ground();
    let mut set = family.triangles().clone();
    for t in ground.all_triangles() {
        if !set.contains(&t) && set.iter().all(|s| !crosses(&ground, s, &t)) {
            set.insert(t);
        }
    }
    Ok(Family::trusted(ground, set))
}

/// The canonical maximal family: the greedy completion of the frozen
/// triangles.
pub fn canonical_family(ground: GroundSet) -> Family {
    greedy_complete(&frozen_triangles(ground)).expect("frozen triangles are weakly separated")
}

/// Starts from [`canonical_family`] and applies `steps` mutations, each
/// drawn uniformly from the moves available at that point.
pub fn random_maximal_family(ground: GroundSet, steps: usize, seed: u64) -> Family {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut family = canonical_family(ground);
    for _ in 0..steps {
        let moves = available_moves(&family);
        if moves.is_empty() {
            break;
        }
        let m = moves[rng.gen_range(0..moves.len())];
        family = family.exchanged(&m.removed(), m.added());
    }
    family
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize) -> GroundSet {
        GroundSet::new(n).unwrap()
    }

    fn t(a: usize, b: usize, c: usize) -> Triangle {
        Triangle::new(a, b, c).unwrap()
    }

    #[test]
    fn frozen_six() {
        let f = frozen_triangles(g(6));
        let expected: BTreeSet<_> = [
            t(1, 2, 3),
            t(2, 3, 4),
            t(3, 4, 5),
            t(4, 5, 6),
            t(1, 5, 6),
            t(1, 2, 6),
        ]
        .into_iter()
        .collect();
        assert_eq!(f.triangles(), &expected);
        assert!(f.first_crossing_pair().is_none());
        assert_eq!(frozen_triangles(g(8)).len(), 8);
        assert!(!f.is_maximal().unwrap());
    }

    #[test]
    fn crossing_pair_is_reported() {
        let mut ts: Vec<_> = frozen_triangles(g(6)).iter().copied().collect();
        ts.push(t(1, 3, 5));
        ts.push(t(2, 4, 6));
        let f = Family::new(g(6), ts.clone()).unwrap();
        assert_eq!(f.first_crossing_pair(), Some((t(1, 3, 5), t(2, 4, 6))));
        assert!(!f.is_weakly_separated());
        assert!(f.is_maximal().is_err());
        assert!(greedy_complete(&f).is_err());
        assert!(Family::validated(g(6), ts).is_err());
    }

    #[test]
    fn empty_family_is_weakly_separated() {
        assert!(Family::empty(g(7)).is_weakly_separated());
        assert!(Family::new(g(7), [])
            .unwrap()
            .first_crossing_pair()
            .is_none());
    }

    #[test]
    fn duplicates_and_out_of_range_rejected() {
        assert!(Family::new(g(6), [t(1, 2, 3), t(1, 2, 3)]).is_err());
        assert!(Family::new(g(6), [t(1, 2, 7)]).is_err());
    }

    #[test]
    fn greedy_completion_reaches_three_n_minus_eight() {
        for n in 6..=10 {
            let f = canonical_family(g(n));
            assert_eq!(f.len(), 3 * n - 8, "n = {n}");
            assert!(f.is_maximal_exhaustive().unwrap());
            assert_eq!(greedy_complete(&f).unwrap(), f);
        }
    }

    #[test]
    fn random_families_are_deterministic_and_maximal() {
        let a = random_maximal_family(g(8), 25, 7);
        let b = random_maximal_family(g(8), 25, 7);
        assert_eq!(a, b);
        assert!(a.is_maximal_exhaustive().unwrap());
        assert_eq!(random_maximal_family(g(8), 0, 99), canonical_family(g(8)));
    }

    #[test]
    fn json_round_trip_and_rejections() {
        let f = canonical_family(g(7));
        let back = Family::from_json(&f.to_json()).unwrap();
        assert_eq!(back, f);
        assert!(Family::from_json(r#"{"n": 6, "triangles": [[2,1,3]]}"#).is_err());
        assert!(Family::from_json(r#"{"n": 6, "triangles": [], "extra": 1}"#).is_err());
        assert!(Family::from_json(r#"{"n": 5, "triangles": []}"#).is_err());
        assert!(Family::from_json(r#"{"n": 6, "triangles": [[1,2,3]"#).is_err());
        assert!(Family::from_json(r#"{"n": 6, "triangles": [[1,2,3],[1,2,3]]}"#).is_err());
    }
}
