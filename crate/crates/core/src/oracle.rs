//! Ground-truth Plücker values by breadth-first search over mutations.
//!
//! Starting from a valued family, the search applies every available move,
//! level by level, until each requested triangle has appeared in some
//! reached family. A triangle's value does not depend on the path that
//! produced it; the search keeps one table of values and fails loudly if two
//! paths ever disagree.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::ground::{GroundSet, Triangle};
use crate::mutation::{move_value, moves_of, ValuedFamily};
use crate::Rational;

pub const DEFAULT_BUDGET: usize = 100_000;

/// Order in which moves out of one family are enqueued.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    #[default]
    Lexicographic,
    ReverseLexicographic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Oracle {
    /// Maximum number of families expanded per call.
    pub budget: usize,
    pub order: TieBreak,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle {
            budget: DEFAULT_BUDGET,
            order: TieBreak::Lexicographic,
        }
    }
}

/// Index of a triangle among all `C(n,3)` triangles.
fn rank(t: &Triangle) -> u32 {
    let [a, b, c] = t.points().map(|p| (p - 1) as u64);
    (c * (c - 1) * (c - 2) / 6 + b * (b - 1) / 2 + a) as u32
}

fn key(set: &BTreeSet<Triangle>) -> Vec<u32> {
    let mut k: Vec<u32> = set.iter().map(rank).collect();
    k.sort_unstable();
    k
}

impl Oracle {
    pub fn new(budget: usize, order: TieBreak) -> Oracle {
        Oracle { budget, order }
    }

    pub fn value(&self, vf: &ValuedFamily, target: &Triangle) -> Result<Rational> {
        Ok(self.values(vf, std::slice::from_ref(target))?.remove(0))
    }

    /// Values of several triangles from a single search.
    pub fn values(&self, vf: &ValuedFamily, targets: &[Triangle]) -> Result<Vec<Rational>> {
        let ground: GroundSet = vf.ground();
        for t in targets {
            for p in t.points() {
                ground.check_point(p)?;
            }
        }
        let mut table: HashMap<Triangle, Rational> =
            vf.values().iter().map(|(t, v)| (*t, v.clone())).collect();
        let done =
            |table: &HashMap<Triangle, Rational>| targets.iter().all(|t| table.contains_key(t));
        if done(&table) {
            return Ok(targets.iter().map(|t| table[t].clone()).collect());
        }

        let start = vf.family().triangles().clone();
        let mut seen: HashSet<Vec<u32>> = HashSet::new();
        seen.insert(key(&start));
        let mut queue = VecDeque::from([start]);
        let mut expanded = 0usize;

        while let Some(family) = queue.pop_front() {
            if expanded >= self.budget {
                break;
            }
            expanded += 1;
            let mut moves = moves_of(ground.n(), &family);
            if self.order == TieBreak::ReverseLexicographic {
                moves.reverse();
            }
            for m in moves {
                let value = match move_value(&m, |t| table.get(t).cloned()) {
                    Ok(v) => v,
                    Err(Error::ZeroPivot(_)) => continue,
                    Err(e) => return Err(e),
                };
                let added = m.added();
                match table.get(&added) {
                    Some(known) if *known != value => {
                        return Err(Error::internal(format!(
                            "path dependence at {added}: {known} versus {value} via {m}"
                        )))
                    }
                    Some(_) => {}
                    None => {
                        table.insert(added, value);
                    }
                }
                let mut next = family.clone();
                next.remove(&m.removed());
                next.insert(added);
                if seen.insert(key(&next)) {
                    queue.push_back(next);
                }
            }
            if done(&table) {
                return Ok(targets.iter().map(|t| table[t].clone()).collect());
            }
        }
        let missing = *targets.iter().find(|t| !table.contains_key(t)).unwrap();
        Err(Error::BudgetExhausted {
            target: missing,
            budget: self.budget,
            visited: seen.len(),
        })
    }
}

/// [`Oracle::value`] with the default budget and order.
pub fn oracle_value(vf: &ValuedFamily, target: &Triangle) -> Result<Rational> {
    Oracle::default().value(vf, target)
}
