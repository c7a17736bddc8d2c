//! All-solutions chronological backtracking with exact node counts.
//!
//! Variables are instantiated in the static order `0, 1, ..., n-1` and values
//! in a static order. The root counts as one node and every instantiation adds
//! one, so for a complete traversal
//!
//! ```text
//! nodes = 1 + d * (c_0 + c_1 + ... + c_{n-1})
//! ```
//!
//! where `c_i` is the number of consistent assignments to the first `i`
//! variables.

use crate::error::{Error, Result};
use crate::generator::tuple_to_rank;
use crate::model::{is_violated, Instance, PartialAssignment, Value};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchStats {
    /// Search-tree nodes including the root.
    pub nodes: u64,
    pub solution_count: u64,
    /// Every solution in value-order-lexicographic order, when collected.
    pub solutions: Option<Vec<Vec<Value>>>,
    /// `c_0..=c_n`.
    pub level_counts: Vec<u64>,
}

impl SearchStats {
    pub fn is_satisfiable(&self) -> bool {
        self.solution_count > 0
    }
}

/// `1 + d * sum(c_0..c_{n-1})`; `None` on overflow.
pub fn nodes_from_profile(level_counts: &[u64], d: u32) -> Option<u64> {
    let interior = &level_counts[..level_counts.len().saturating_sub(1)];
    interior.iter().try_fold(1u64, |acc, &c| {
        c.checked_mul(d as u64).and_then(|x| acc.checked_add(x))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ValueOrder {
    #[default]
    Ascending,
    Descending,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CheckMode {
    /// Check only the constraints whose scope is completed by the newest
    /// variable. Applies to strict instances; others fall back to `Naive`.
    #[default]
    Incremental,
    /// Re-test every constraint with the full violation predicate at each node.
    Naive,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SearchOptions {
    pub collect: bool,
    pub value_order: ValueOrder,
    pub check: CheckMode,
}

pub fn solve_all(inst: &Instance, collect: bool) -> Result<SearchStats> {
    solve_with(
        inst,
        &SearchOptions {
            collect,
            ..Default::default()
        },
    )
}

pub fn level_profile(inst: &Instance) -> Result<Vec<u64>> {
    solve_all(inst, false).map(|s| s.level_counts)
}

/// A constraint reduced to what the incremental check needs.
struct Compiled {
    scope: Vec<usize>,
    ranks: Vec<u64>,
}

pub fn solve_with(inst: &Instance, opts: &SearchOptions) -> Result<SearchStats> {
    let n = inst.n();
    let d = inst.d();
    let incremental = opts.check == CheckMode::Incremental && inst.params().is_strict();

    // buckets[v]: constraints whose last scope variable is v.
    let mut buckets: Vec<Vec<Compiled>> = (0..n).map(|_| Vec::new()).collect();
    if incremental {
        for c in inst.constraints() {
            let mut ranks: Vec<u64> = c.incompatible.iter().map(|t| tuple_to_rank(t, d)).collect();
            ranks.sort_unstable();
            buckets[c.last_variable()].push(Compiled {
                scope: c.scope.clone(),
                ranks,
            });
        }
    }

    let values: Vec<Value> = match opts.value_order {
        ValueOrder::Ascending => (0..d).collect(),
        ValueOrder::Descending => (0..d).rev().collect(),
    };

    let mut search = Search {
        inst,
        d,
        n,
        incremental,
        buckets,
        values,
        assignment: Vec::with_capacity(n),
        nodes: 1,
        level_counts: vec![0; n + 1],
        solutions: opts.collect.then(Vec::new),
    };
    search.visit()?;

    let solution_count = search.level_counts[n];
    Ok(SearchStats {
        nodes: search.nodes,
        solution_count,
        solutions: search.solutions,
        level_counts: search.level_counts,
    })
}

struct Search<'a> {
    inst: &'a Instance,
    d: u32,
    n: usize,
    incremental: bool,
    buckets: Vec<Vec<Compiled>>,
    values: Vec<Value>,
    assignment: Vec<Value>,
    nodes: u64,
    level_counts: Vec<u64>,
    solutions: Option<Vec<Vec<Value>>>,
}

impl Search<'_> {
    fn consistent(&self) -> bool {
        let depth = self.assignment.len();
        if self.incremental {
            if depth == 0 {
                return true;
            }
            self.buckets[depth - 1].iter().all(|c| {
                let rank = c.scope.iter().fold(0u64, |acc, &v| {
                    acc * self.d as u64 + self.assignment[v] as u64
                });
                c.ranks.binary_search(&rank).is_err()
            })
        } else {
            let a = PartialAssignment::new(self.assignment.clone());
            self.inst
                .constraints()
                .iter()
                .all(|c| !is_violated(c, &a, self.d))
        }
    }

    /// Handles the node for the current assignment, which is already counted.
    fn visit(&mut self) -> Result<()> {
        if !self.consistent() {
            return Ok(());
        }
        let depth = self.assignment.len();
        self.level_counts[depth] += 1;
        if depth == self.n {
            if let Some(sols) = self.solutions.as_mut() {
                sols.push(self.assignment.clone());
            }
            return Ok(());
        }
        for idx in 0..self.values.len() {
            self.nodes = self.nodes.checked_add(1).ok_or(Error::NodeOverflow)?;
            self.assignment.push(self.values[idx]);
            self.visit()?;
            self.assignment.pop();
        }
        Ok(())
    }
}
