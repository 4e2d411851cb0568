//! Almost-continuous Plücker values at a point by collapsing its star graph.
//!
//! Each step of the label bookkeeping is also carried out as an actual
//! mutation on a working copy of the family, and the labels are compared
//! against the values the mutations produce.

use std::collections::BTreeMap;

use num_traits::One;

use crate::error::{Error, Result};
use crate::ground::Triangle;
use crate::mutation::{contract_degree2, remove_leaf, Side, ValuedFamily};
use crate::oracle::Oracle;
use crate::registry::Registry;
use crate::structure::StarGraph;
use crate::Rational;

use super::grid::QuiddityRows;

/// `(v{x-2,x-1,x+1}, v{x-1,x+1,x+2})` for a family whose triangles
/// through `x` all have value 1.
pub fn almost_continuous_at(vf: &ValuedFamily, x: usize) -> Result<(Rational, Rational)> {
    let lambda = vf.require_unitary(x)?;
    if !lambda.is_one() {
        return Err(Error::NotUnitary {
            x,
            detail: format!("common value is {lambda}, not 1"),
        });
    }
    Collapse::new(vf, x).run()
}

struct Collapse {
    cur: ValuedFamily,
    x: usize,
    xp1: usize,
    xm1: usize,
    xp2: usize,
    xm2: usize,
    labels: BTreeMap<usize, Rational>,
}

impl Collapse {
    fn new(vf: &ValuedFamily, x: usize) -> Collapse {
        let g = vf.ground();
        Collapse {
            cur: vf.clone(),
            x,
            xp1: g.shift(x, 1),
            xm1: g.shift(x, -1),
            xp2: g.shift(x, 2),
            xm2: g.shift(x, -2),
            labels: BTreeMap::new(),
        }
    }

    fn graph(&self) -> StarGraph {
        StarGraph::of_family(self.cur.family(), self.x)
    }

    fn v(&self, p: usize, q: usize, r: usize) -> Result<Rational> {
        self.cur.value_or_err(&Triangle::sorted(p, q, r)).cloned()
    }

    fn border_sum(&self, p: usize, seq: &[usize], js: std::ops::Range<usize>) -> Result<Rational> {
        let mut sum = Rational::from_integer(0.into());
        for j in js {
            sum += self.v(p, seq[j], seq[j + 1])?;
        }
        Ok(sum)
    }

    fn remove_leaf_at(&mut self, p: usize, at: usize) -> Result<()> {
        let seq = self.graph().incident_sequence(p);
        self.cur = remove_leaf(&self.cur, self.x, p, seq[at - 1], seq[at], seq[at + 1])?;
        Ok(())
    }

    fn label(&self, p: usize) -> Result<Rational> {
        self.labels
            .get(&p)
            .cloned()
            .ok_or_else(|| Error::internal(format!("no label at {p}")))
    }

    fn add_label(&mut self, p: usize, amount: &Rational) -> Result<()> {
        let sum = self.label(p)? + amount;
        self.labels.insert(p, sum);
        Ok(())
    }

    fn run(mut self) -> Result<(Rational, Rational)> {
        self.initialize()?;
        self.check_labels()?;
        loop {
            let g = self.graph();
            if g.edge_count() <= 3 {
                break;
            }
            let p = g
                .triangulation_points()
                .iter()
                .copied()
                .find(|&p| p != self.xp1 && p != self.xm1 && g.degree(p) == 2)
                .ok_or_else(|| {
                    Error::internal(format!(
                        "no removable degree-2 point at x = {} with {} edges left",
                        self.x,
                        g.edge_count()
                    ))
                })?;
            let lp = self.label(p)?;
            if p == self.xp2 {
                let pj = g.next_point(p);
                self.labels.insert(self.xp1, lp.clone());
                self.cur = contract_degree2(&self.cur, self.x, p, Side::Right)?;
                self.add_label(pj, &lp)?;
            } else if p == self.xm2 {
                let pj = g.prev_point(p);
                self.labels.insert(self.xm1, lp.clone());
                self.cur = contract_degree2(&self.cur, self.x, p, Side::Left)?;
                self.add_label(pj, &lp)?;
            } else {
                let (pj, pk) = (g.prev_point(p), g.next_point(p));
                self.add_label(pj, &lp)?;
                self.add_label(pk, &lp)?;
                self.cur = contract_degree2(&self.cur, self.x, p, Side::Left)?;
                // p now hangs off pk, right after pj.
                self.remove_leaf_at(pk, 1)?;
            }
            self.labels.remove(&p);
            self.check_labels()?;
        }
        let low = self.label(self.xm1)?;
        let high = self.label(self.xp1)?;
        let expect_low = self.v(self.xm2, self.xm1, self.xp1)?;
        let expect_high = self.v(self.xm1, self.xp1, self.xp2)?;
        if low != expect_low || high != expect_high {
            return Err(Error::internal(format!(
                "final labels ({low}, {high}) disagree with the collapsed family ({expect_low}, {expect_high}) at x = {}",
                self.x
            )));
        }
        Ok((low, high))
    }

    fn initialize(&mut self) -> Result<()> {
        let g = self.graph();
        for &p in g.triangulation_points() {
            if p == self.xp1 || p == self.xm1 {
                continue;
            }
            let seq = g.incident_sequence(p);
            let label = self.border_sum(p, &seq, 0..seq.len() - 1)?;
            self.labels.insert(p, label);
            while self.graph().incident_sequence(p).len() > 2 {
                self.remove_leaf_at(p, 1)?;
            }
        }
        if g.attachment(self.xp2) == Some(self.xp1) {
            let seq = g.incident_sequence(self.xp1);
            let label = self.border_sum(self.xp1, &seq, 1..seq.len() - 1)?;
            self.labels.insert(self.xp1, label);
            while self.graph().incident_sequence(self.xp1).len() > 3 {
                self.remove_leaf_at(self.xp1, 2)?;
            }
        }
        if g.attachment(self.xm2) == Some(self.xm1) {
            let seq = self.graph().incident_sequence(self.xm1);
            let label = self.border_sum(self.xm1, &seq, 0..seq.len() - 2)?;
            self.labels.insert(self.xm1, label);
            while self.graph().incident_sequence(self.xm1).len() > 3 {
                self.remove_leaf_at(self.xm1, 1)?;
            }
        }
        Ok(())
    }

    /// Every label equals the value of the one border triangle left at its
    /// point.
    fn check_labels(&self) -> Result<()> {
        let g = self.graph();
        for (&p, label) in &self.labels {
            if !g.is_triangulation_point(p) {
                return Err(Error::internal(format!(
                    "label at non-triangulation point {p}"
                )));
            }
            let t = if p == self.xp1 {
                Triangle::sorted(p, self.xp2, g.next_point(p))
            } else if p == self.xm1 {
                Triangle::sorted(p, g.prev_point(p), self.xm2)
            } else {
                Triangle::sorted(p, g.prev_point(p), g.next_point(p))
            };
            let actual = self.cur.value_or_err(&t)?;
            if actual != label {
                return Err(Error::internal(format!(
                    "label {label} at {p} but v{t} = {actual} (x = {})",
                    self.x
                )));
            }
        }
        Ok(())
    }
}

/// A way of computing the two almost-continuous values at a point.
pub trait AlmostContinuous: Send + Sync {
    fn name(&self) -> &'static str;
    fn evaluate(&self, vf: &ValuedFamily, x: usize) -> Result<(Rational, Rational)>;
}

/// Star-graph collapse.
pub struct Collapsing;

/// Breadth-first mutation search.
pub struct Searching {
    pub oracle: Oracle,
}

impl AlmostContinuous for Collapsing {
    fn name(&self) -> &'static str {
        "algorithm"
    }

    fn evaluate(&self, vf: &ValuedFamily, x: usize) -> Result<(Rational, Rational)> {
        almost_continuous_at(vf, x)
    }
}

impl AlmostContinuous for Searching {
    fn name(&self) -> &'static str {
        "oracle"
    }

    fn evaluate(&self, vf: &ValuedFamily, x: usize) -> Result<(Rational, Rational)> {
        let g = vf.ground();
        let (xm2, xm1, xp1, xp2) = (g.shift(x, -2), g.shift(x, -1), g.shift(x, 1), g.shift(x, 2));
        let targets = [
            Triangle::sorted(xm2, xm1, xp1),
            Triangle::sorted(xm1, xp1, xp2),
        ];
        let mut vals = self.oracle.values(vf, &targets)?;
        let high = vals.pop().unwrap();
        let low = vals.pop().unwrap();
        Ok((low, high))
    }
}

pub const DEFAULT_METHOD: &str = "algorithm";

pub fn evaluators(oracle: Oracle) -> Registry<dyn AlmostContinuous> {
    let mut r: Registry<dyn AlmostContinuous> = Registry::new("evaluation method");
    r.register("algorithm", Box::new(Collapsing));
    r.register("oracle", Box::new(Searching { oracle }));
    r
}

/// `Δ_1` and `Δ^1` for a family specialized to 1, by the collapse at every
/// point.
pub fn quiddity_rows(vf: &ValuedFamily) -> Result<QuiddityRows> {
    quiddity_rows_with(vf, &Collapsing)
}

pub fn quiddity_rows_with(
    vf: &ValuedFamily,
    method: &dyn AlmostContinuous,
) -> Result<QuiddityRows> {
    let g = vf.ground();
    let n = g.n();
    let zero = Rational::from_integer(0.into());
    let mut low = vec![zero.clone(); n];
    let mut high = vec![zero; n];
    for x in g.points() {
        let (lo, hi) = method.evaluate(vf, x)?;
        // v{x-2,x-1,x+1} = Δ_1(x-2), v{x-1,x+1,x+2} = Δ^1(x-1)
        low[g.shift(x, -2) - 1] = lo;
        high[g.shift(x, -1) - 1] = hi;
    }
    QuiddityRows::new(n, low, high)
}
