//! The unit-constraint (UC) heuristic.
//!
//! UC assigns one variable per step. If some live constraint has a single
//! variable left, a random such "unit" is served with a value it allows;
//! otherwise a random unset variable gets a random value. After each
//! assignment every constraint on that variable is either dropped (the value
//! appears in none of its forbidden tuples) or projected onto its remaining
//! variables. A constraint projected down to no variables while still holding a
//! forbidden tuple is an empty constraint and ends the run with
//! [`UcOutcome::Unknown`]. UC never reports a false solution.

use rayon::prelude::*;

use crate::error::Result;
use crate::generator::sample_instance;
use crate::model::{is_consistent, Instance, ValidParams, Value};
use crate::rng::{Purpose, SeedSpec, TrialRng};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UcOutcome {
    SolutionFound(Vec<Value>),
    Unknown,
}

impl UcOutcome {
    pub fn is_solution(&self) -> bool {
        matches!(self, UcOutcome::SolutionFound(_))
    }
}

/// Signal raised when a reduction leaves a constraint with no variables but a
/// surviving forbidden tuple.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EmptyConstraint {
    pub constraint: usize,
}

#[derive(Debug, Clone)]
struct LiveConstraint {
    scope: Vec<usize>,
    tuples: Vec<Vec<Value>>,
    alive: bool,
}

/// Set of small integers with O(1) insert, remove and uniform pick.
#[derive(Debug, Clone)]
struct IndexSet {
    members: Vec<usize>,
    pos: Vec<usize>,
}

impl IndexSet {
    const ABSENT: usize = usize::MAX;

    fn with_universe(size: usize) -> Self {
        IndexSet {
            members: Vec::new(),
            pos: vec![Self::ABSENT; size],
        }
    }

    fn insert(&mut self, x: usize) {
        if self.pos[x] == Self::ABSENT {
            self.pos[x] = self.members.len();
            self.members.push(x);
        }
    }

    fn remove(&mut self, x: usize) {
        let at = self.pos[x];
        if at == Self::ABSENT {
            return;
        }
        self.members.swap_remove(at);
        if let Some(&moved) = self.members.get(at) {
            self.pos[moved] = at;
        }
        self.pos[x] = Self::ABSENT;
    }

    fn len(&self) -> usize {
        self.members.len()
    }

    fn pick(&self, rng: &mut TrialRng) -> usize {
        self.members[rng.index(self.members.len())]
    }
}

#[derive(Debug, Clone)]
pub struct UcState {
    d: u32,
    assigned: Vec<Option<Value>>,
    constraints: Vec<LiveConstraint>,
    /// Variable -> constraints whose original scope contains it.
    occurrences: Vec<Vec<usize>>,
    live: usize,
    unit_pool: IndexSet,
    unset: IndexSet,
}

/// What one UC step produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    Continue,
    AllRemoved,
    Empty(EmptyConstraint),
}

impl UcState {
    pub fn new(inst: &Instance) -> Self {
        let constraints = inst
            .constraints()
            .iter()
            .map(|c| (c.scope.clone(), c.incompatible.clone()))
            .collect();
        Self::from_constraints(inst.n(), inst.d(), constraints)
    }

    /// Builds a state from arbitrary (scope, forbidden tuples) pairs, e.g. an
    /// already-reduced constraint set.
    pub fn from_constraints(
        n: usize,
        d: u32,
        constraints: Vec<(Vec<usize>, Vec<Vec<Value>>)>,
    ) -> Self {
        let mut occurrences = vec![Vec::new(); n];
        let mut unit_pool = IndexSet::with_universe(constraints.len());
        let mut unset = IndexSet::with_universe(n);
        (0..n).for_each(|v| unset.insert(v));
        let mut live = 0;
        let constraints: Vec<LiveConstraint> = constraints
            .into_iter()
            .enumerate()
            .map(|(id, (scope, tuples))| {
                for &v in &scope {
                    occurrences[v].push(id);
                }
                let alive = !tuples.is_empty();
                if alive {
                    live += 1;
                    if scope.len() == 1 {
                        unit_pool.insert(id);
                    }
                }
                LiveConstraint {
                    scope,
                    tuples,
                    alive,
                }
            })
            .collect();
        UcState {
            d,
            assigned: vec![None; n],
            constraints,
            occurrences,
            live,
            unit_pool,
            unset,
        }
    }

    pub fn live_count(&self) -> usize {
        self.live
    }

    /// Live constraints as (scope, forbidden tuples over that scope).
    pub fn live_constraints(&self) -> impl Iterator<Item = (&[usize], &[Vec<Value>])> {
        self.constraints
            .iter()
            .filter(|c| c.alive)
            .map(|c| (c.scope.as_slice(), c.tuples.as_slice()))
    }

    /// Ids of the live constraints with exactly one variable left.
    pub fn unit_pool(&self) -> Vec<usize> {
        let mut ids = self.unit_pool.members.clone();
        ids.sort_unstable();
        ids
    }

    pub fn value_of(&self, var: usize) -> Option<Value> {
        self.assigned[var]
    }

    /// Assigns `var <- value` and reduces every constraint containing `var`.
    ///
    /// All affected constraints are processed even after an empty one appears;
    /// the first empty constraint is reported.
    pub fn reduce_after_assignment(
        &mut self,
        var: usize,
        value: Value,
    ) -> Result<(), EmptyConstraint> {
        assert!(self.assigned[var].is_none(), "variable {var} already set");
        self.assigned[var] = Some(value);
        self.unset.remove(var);
        let mut empty = None;
        for &id in &self.occurrences[var] {
            let c = &mut self.constraints[id];
            if !c.alive {
                continue;
            }
            let Some(at) = c.scope.iter().position(|&v| v == var) else {
                continue;
            };
            c.tuples.retain(|t| t[at] == value);
            if c.tuples.is_empty() {
                c.alive = false;
                self.live -= 1;
                self.unit_pool.remove(id);
                continue;
            }
            c.scope.remove(at);
            for t in c.tuples.iter_mut() {
                t.remove(at);
            }
            c.tuples.sort_unstable();
            c.tuples.dedup();
            match c.scope.len() {
                0 => {
                    self.unit_pool.remove(id);
                    empty.get_or_insert(EmptyConstraint { constraint: id });
                }
                1 => self.unit_pool.insert(id),
                _ => {}
            }
        }
        match empty {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }

    /// One iteration of the UC loop.
    pub fn step(&mut self, rng: &mut TrialRng) -> Step {
        if self.live == 0 {
            return Step::AllRemoved;
        }
        let (var, value) = if self.unit_pool.len() > 0 {
            let id = self.unit_pool.pick(rng);
            let unit = &self.constraints[id];
            let forbidden: Vec<Value> = unit.tuples.iter().map(|t| t[0]).collect();
            let allowed: Vec<Value> = (0..self.d).filter(|v| !forbidden.contains(v)).collect();
            assert!(!allowed.is_empty(), "unit constraint forbids every value");
            (unit.scope[0], allowed[rng.index(allowed.len())])
        } else {
            let var = self.unset.pick(rng);
            (var, rng.below(self.d as u64) as Value)
        };
        match self.reduce_after_assignment(var, value) {
            Err(e) => Step::Empty(e),
            Ok(()) if self.live == 0 => Step::AllRemoved,
            Ok(()) => Step::Continue,
        }
    }

    /// Runs to completion. Leftover variables get uniform values.
    pub fn run(mut self, rng: &mut TrialRng) -> UcOutcome {
        loop {
            match self.step(rng) {
                Step::Continue => {}
                Step::Empty(_) => return UcOutcome::Unknown,
                Step::AllRemoved => {
                    let d = self.d as u64;
                    let values = self
                        .assigned
                        .iter()
                        .map(|v| v.unwrap_or_else(|| rng.below(d) as Value))
                        .collect();
                    return UcOutcome::SolutionFound(values);
                }
            }
        }
    }
}

pub fn run_uc(inst: &Instance, seed: SeedSpec) -> Result<UcOutcome> {
    inst.params().require_strict()?;
    Ok(UcState::new(inst).run(&mut seed.rng(Purpose::Heuristic)))
}

/// Panics if UC reports an assignment that violates `inst`.
pub(crate) fn checked_uc(inst: &Instance, seed: SeedSpec) -> Result<bool> {
    let outcome = run_uc(inst, seed)?;
    if let UcOutcome::SolutionFound(values) = &outcome {
        assert!(
            is_consistent(inst, &values.clone().into()),
            "UC returned a non-solution for stream {seed:?}"
        );
    }
    Ok(outcome.is_solution())
}

/// Fraction of `trials` fresh instances on which UC finds a solution.
/// Trial `i` uses instance and heuristic streams `(master_seed, i)`.
pub fn uc_success_rate(params: &ValidParams, trials: u64, master_seed: u64) -> Result<f64> {
    params.require_strict()?;
    if trials == 0 {
        return Ok(0.0);
    }
    let wins = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let seed = SeedSpec::new(master_seed, trial);
            checked_uc(&sample_instance(params, seed), seed)
        })
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .filter(|&w| w)
        .count();
    Ok(wins as f64 / trials as f64)
}
