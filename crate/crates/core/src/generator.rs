//! Model GB sampling.
//!
//! Each of the `t` constraints is drawn independently: a uniform `k`-subset
//! of the variables (partial Fisher-Yates, kept in draw order) and a uniform
//! `q`-subset of the `d^k` tuple ranks (Floyd's algorithm). Rank `r` maps to
//! the tuple whose base-`d` digits, most significant first, are the values.

use std::collections::BTreeSet;

use crate::model::{ConstraintSpec, Instance, ValidParams, Value};
use crate::rng::{Purpose, SeedSpec, TrialRng};

pub fn sample_scope(n: usize, k: usize, rng: &mut TrialRng) -> Vec<usize> {
    debug_assert!(k <= n);
    let mut pool: Vec<usize> = (0..n).collect();
    for j in 0..k {
        let pick = j + rng.index(n - j);
        pool.swap(j, pick);
    }
    pool.truncate(k);
    pool
}

/// `q` distinct ranks in `0..total`, ascending.
pub fn sample_ranks(total: u64, q: u64, rng: &mut TrialRng) -> BTreeSet<u64> {
    debug_assert!(q <= total);
    let mut chosen = BTreeSet::new();
    for j in (total - q)..total {
        let pick = rng.below(j + 1);
        if !chosen.insert(pick) {
            chosen.insert(j);
        }
    }
    chosen
}

pub fn rank_to_tuple(mut rank: u64, d: u32, k: usize) -> Vec<Value> {
    let mut tuple = vec![0; k];
    for slot in tuple.iter_mut().rev() {
        *slot = (rank % d as u64) as Value;
        rank /= d as u64;
    }
    tuple
}

pub fn tuple_to_rank(tuple: &[Value], d: u32) -> u64 {
    tuple.iter().fold(0, |acc, &v| acc * d as u64 + v as u64)
}

/// `q` distinct tuples of length `k` over `0..d`, in lexicographic order.
pub fn sample_incompatible(d: u32, k: usize, q: u64, rng: &mut TrialRng) -> Vec<Vec<Value>> {
    let total = (d as u64).pow(k as u32);
    sample_ranks(total, q, rng)
        .into_iter()
        .map(|r| rank_to_tuple(r, d, k))
        .collect()
}

pub fn sample_constraint(params: &ValidParams, rng: &mut TrialRng) -> ConstraintSpec {
    let k = params.k() as usize;
    let scope = sample_scope(params.n(), k, rng);
    let incompatible = sample_incompatible(params.d(), k, params.q(), rng);
    ConstraintSpec::new(scope, incompatible)
}

pub fn sample_instance(params: &ValidParams, seed: SeedSpec) -> Instance {
    let mut rng = seed.rng(Purpose::Instance);
    let constraints = (0..params.t())
        .map(|_| sample_constraint(params, &mut rng))
        .collect();
    Instance::new(*params, constraints).expect("sampled constraints are well formed")
}
