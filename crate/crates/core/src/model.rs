//! Instance data model and the consistency predicate shared by every solver.

use std::path::Path;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Rational;

/// A domain value, always in `0..d`.
pub type Value = u32;

/// Raw integer instance parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Params {
    /// Number of variables.
    pub n: usize,
    /// Domain size shared by every variable.
    pub d: u32,
    /// Constraint arity.
    pub k: u32,
    /// Number of constraints.
    pub t: u64,
    /// Incompatible tuples per constraint.
    pub q: u64,
}

/// Parameters that passed [`Params::validate`], annotated with derived values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidParams {
    params: Params,
    tuples: u64,
    p: f64,
    r: f64,
    strict: bool,
}

impl Params {
    pub fn new(n: usize, d: u32, k: u32, t: u64, q: u64) -> Self {
        Params { n, d, k, t, q }
    }

    pub fn validate(self) -> Result<ValidParams> {
        let Params { n, d, k, t, q } = self;
        if n == 0 {
            return Err(Error::NoVariables);
        }
        if d < 2 {
            return Err(Error::DegenerateDomain { d });
        }
        if k < 2 {
            return Err(Error::ArityTooSmall { k });
        }
        if k as usize > n {
            return Err(Error::ArityExceedsVariables { k, n });
        }
        if q < 1 {
            return Err(Error::ZeroTightness);
        }
        let tuples = (d as u64)
            .checked_pow(k)
            .ok_or(Error::TupleSpaceOverflow { d, k })?;
        if q > tuples {
            return Err(Error::EmptyRelation { q, tuples });
        }
        Ok(ValidParams {
            params: self,
            tuples,
            p: q as f64 / tuples as f64,
            r: t as f64 / n as f64,
            strict: q < d as u64,
        })
    }
}

impl ValidParams {
    pub fn params(&self) -> Params {
        self.params
    }
    pub fn n(&self) -> usize {
        self.params.n
    }
    pub fn d(&self) -> u32 {
        self.params.d
    }
    pub fn k(&self) -> u32 {
        self.params.k
    }
    pub fn t(&self) -> u64 {
        self.params.t
    }
    pub fn q(&self) -> u64 {
        self.params.q
    }
    /// `d^k`, the number of value tuples of one constraint.
    pub fn tuple_count(&self) -> u64 {
        self.tuples
    }
    /// Tightness `q / d^k`.
    pub fn p(&self) -> f64 {
        self.p
    }
    /// Tightness as an exact rational.
    pub fn p_exact(&self) -> Rational {
        Rational::new(BigInt::from(self.params.q), BigInt::from(self.tuples))
    }
    /// Density `t / n`.
    pub fn r(&self) -> f64 {
        self.r
    }
    /// True iff `q < d`, i.e. `p < 1/d^(k-1)`: every constraint with an
    /// unassigned variable still has a compatible tuple.
    pub fn is_strict(&self) -> bool {
        self.strict
    }

    /// Returns a copy with a different constraint count.
    pub fn with_t(&self, t: u64) -> ValidParams {
        ValidParams {
            params: Params { t, ..self.params },
            r: t as f64 / self.params.n as f64,
            ..*self
        }
    }

    pub(crate) fn require_strict(&self) -> Result<()> {
        if self.strict {
            Ok(())
        } else {
            Err(Error::NonStrict {
                q: self.params.q,
                d: self.params.d,
            })
        }
    }
}

/// One constraint: an ordered scope and the tuples it forbids.
///
/// Tuple position `j` holds the value of variable `scope[j]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConstraintSpec {
    pub scope: Vec<usize>,
    pub incompatible: Vec<Vec<Value>>,
}

impl ConstraintSpec {
    pub fn new(scope: Vec<usize>, incompatible: Vec<Vec<Value>>) -> Self {
        ConstraintSpec {
            scope,
            incompatible,
        }
    }

    /// Checks scope and tuple shape against `params`. Returns a reason on failure.
    pub fn check(&self, params: &ValidParams) -> std::result::Result<(), String> {
        let k = params.k() as usize;
        if self.scope.len() != k {
            return Err(format!(
                "scope has {} variables, expected {k}",
                self.scope.len()
            ));
        }
        for (j, &v) in self.scope.iter().enumerate() {
            if v >= params.n() {
                return Err(format!("variable {v} out of range 0..{}", params.n()));
            }
            if self.scope[..j].contains(&v) {
                return Err(format!("variable {v} repeated in scope"));
            }
        }
        if self.incompatible.len() as u64 != params.q() {
            return Err(format!(
                "{} incompatible tuples, expected {}",
                self.incompatible.len(),
                params.q()
            ));
        }
        let mut seen = std::collections::HashSet::new();
        for tuple in &self.incompatible {
            if tuple.len() != k {
                return Err(format!("tuple {tuple:?} has wrong length"));
            }
            if let Some(v) = tuple.iter().find(|&&v| v >= params.d()) {
                return Err(format!("value {v} out of domain 0..{}", params.d()));
            }
            if !seen.insert(tuple) {
                return Err(format!("tuple {tuple:?} listed twice"));
            }
        }
        Ok(())
    }

    /// Largest variable index in the scope: the depth-1 at which the scope
    /// becomes fully assigned under the static order.
    pub fn last_variable(&self) -> usize {
        self.scope.iter().copied().max().unwrap_or(0)
    }
}

/// Values for the first `depth` variables of the static order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct PartialAssignment {
    values: Vec<Value>,
}

impl PartialAssignment {
    pub fn new(values: Vec<Value>) -> Self {
        PartialAssignment { values }
    }
    pub fn empty() -> Self {
        Self::default()
    }
    pub fn depth(&self) -> usize {
        self.values.len()
    }
    pub fn values(&self) -> &[Value] {
        &self.values
    }
    pub fn get(&self, var: usize) -> Option<Value> {
        self.values.get(var).copied()
    }
}

impl From<Vec<Value>> for PartialAssignment {
    fn from(values: Vec<Value>) -> Self {
        PartialAssignment { values }
    }
}

/// True iff no completion of `a` on `c.scope` avoids `c.incompatible`.
///
/// Counts the forbidden tuples that agree with `a` on the assigned scope
/// positions; since they are distinct, the constraint is dead exactly when that
/// count equals `d^(free positions)`.
pub fn is_violated(c: &ConstraintSpec, a: &PartialAssignment, d: u32) -> bool {
    let depth = a.depth();
    let free = c.scope.iter().filter(|&&v| v >= depth).count() as u32;
    let Some(needed) = (d as u64).checked_pow(free) else {
        return false;
    };
    if (c.incompatible.len() as u64) < needed {
        return false;
    }
    let agreeing = c
        .incompatible
        .iter()
        .filter(|tuple| {
            c.scope
                .iter()
                .zip(tuple.iter())
                .all(|(&var, &val)| var >= depth || a.values[var] == val)
        })
        .count() as u64;
    agreeing == needed
}

/// True iff no constraint of `inst` is violated by `a`.
pub fn is_consistent(inst: &Instance, a: &PartialAssignment) -> bool {
    let d = inst.params.d();
    inst.constraints.iter().all(|c| !is_violated(c, a, d))
}

/// Validated parameters plus `t` constraints. Duplicate constraints are legal.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    params: ValidParams,
    constraints: Vec<ConstraintSpec>,
}

#[derive(Serialize, Deserialize)]
struct InstanceDoc {
    n: usize,
    d: u32,
    k: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    q: Option<u64>,
    constraints: Vec<ConstraintSpec>,
}

impl Instance {
    pub fn new(params: ValidParams, constraints: Vec<ConstraintSpec>) -> Result<Self> {
        if constraints.len() as u64 != params.t() {
            return Err(Error::InvalidConstraint {
                index: constraints.len(),
                reason: format!(
                    "{} constraints, expected t={}",
                    constraints.len(),
                    params.t()
                ),
            });
        }
        for (index, c) in constraints.iter().enumerate() {
            c.check(&params)
                .map_err(|reason| Error::InvalidConstraint { index, reason })?;
        }
        Ok(Instance {
            params,
            constraints,
        })
    }

    pub fn params(&self) -> &ValidParams {
        &self.params
    }
    pub fn constraints(&self) -> &[ConstraintSpec] {
        &self.constraints
    }
    pub fn n(&self) -> usize {
        self.params.n()
    }
    pub fn d(&self) -> u32 {
        self.params.d()
    }

    /// Canonical JSON: incompatible tuples sorted lexicographically, scopes
    /// kept in draw order.
    pub fn to_json(&self) -> String {
        let doc = InstanceDoc {
            n: self.params.n(),
            d: self.params.d(),
            k: self.params.k(),
            q: Some(self.params.q()),
            constraints: self
                .constraints
                .iter()
                .map(|c| {
                    let mut incompatible = c.incompatible.clone();
                    incompatible.sort();
                    ConstraintSpec::new(c.scope.clone(), incompatible)
                })
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("instance serializes");
        s.push('\n');
        s
    }

    /// Parses an instance document. `t` is the length of the constraint array;
    /// `q` is taken from the optional `q` field, else from the first constraint.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: InstanceDoc = serde_json::from_str(text)?;
        let q = doc
            .q
            .or_else(|| doc.constraints.first().map(|c| c.incompatible.len() as u64))
            .unwrap_or(1);
        let params =
            Params::new(doc.n, doc.d, doc.k, doc.constraints.len() as u64, q).validate()?;
        Instance::new(params, doc.constraints)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binary_instance(incompatible: Vec<Vec<Value>>) -> Instance {
        let q = incompatible.len() as u64;
        let params = Params::new(2, 2, 2, 1, q).validate().unwrap();
        Instance::new(params, vec![ConstraintSpec::new(vec![0, 1], incompatible)]).unwrap()
    }

    #[test]
    fn validate_derives_p_r_and_strictness() {
        let v = Params::new(10, 3, 2, 10, 2).validate().unwrap();
        assert_eq!(v.p(), 2.0 / 9.0);
        assert_eq!(v.r(), 1.0);
        assert!(v.is_strict());
        assert_eq!(v.p_exact(), Rational::new(2.into(), 9.into()));

        let v = Params::new(10, 2, 3, 5, 2).validate().unwrap();
        assert!(!v.is_strict());
    }

    #[test]
    fn validate_rejects_impossible_params() {
        assert!(matches!(
            Params::new(3, 2, 4, 1, 1).validate(),
            Err(Error::ArityExceedsVariables { k: 4, n: 3 })
        ));
        assert!(matches!(
            Params::new(3, 1, 2, 1, 1).validate(),
            Err(Error::DegenerateDomain { d: 1 })
        ));
        assert!(matches!(
            Params::new(3, 2, 2, 1, 5).validate(),
            Err(Error::EmptyRelation { q: 5, tuples: 4 })
        ));
        assert!(matches!(
            Params::new(3, 2, 2, 1, 0).validate(),
            Err(Error::ZeroTightness)
        ));
        // q = d^k is allowed: every tuple forbidden.
        assert!(Params::new(3, 2, 2, 1, 4).validate().is_ok());
    }

    #[test]
    fn violated_needs_every_extension_blocked() {
        let c = ConstraintSpec::new(vec![0, 1], vec![vec![0, 0]]);
        assert!(!is_violated(&c, &vec![0].into(), 2));
        assert!(is_violated(&c, &vec![0, 0].into(), 2));
        assert!(!is_violated(&c, &vec![1, 0].into(), 2));

        let c = ConstraintSpec::new(vec![0, 1], vec![vec![0, 0], vec![0, 1]]);
        assert!(is_violated(&c, &vec![0].into(), 2));
        assert!(!is_violated(&c, &vec![1].into(), 2));
    }

    #[test]
    fn violation_respects_scope_order() {
        // scope (1, 0): tuple (1, 0) forbids u1 = 1, u0 = 0.
        let c = ConstraintSpec::new(vec![1, 0], vec![vec![1, 0]]);
        assert!(is_violated(&c, &vec![0, 1].into(), 2));
        assert!(!is_violated(&c, &vec![1, 0].into(), 2));
    }

    #[test]
    fn consistency_examples() {
        let params = Params::new(3, 2, 2, 0, 1).validate().unwrap();
        let empty = Instance::new(params, vec![]).unwrap();
        assert!(is_consistent(&empty, &vec![1, 0, 1].into()));

        let inst = binary_instance(vec![vec![0, 0]]);
        assert!(!is_consistent(&inst, &vec![0, 0].into()));
        assert!(is_consistent(&inst, &vec![1].into()));
        assert!(is_consistent(&inst, &PartialAssignment::empty()));
    }

    #[test]
    fn instance_rejects_bad_constraints() {
        let params = Params::new(3, 3, 2, 1, 2).validate().unwrap();
        let bad = [
            ConstraintSpec::new(vec![0, 0], vec![vec![0, 0], vec![1, 1]]),
            ConstraintSpec::new(vec![0, 3], vec![vec![0, 0], vec![1, 1]]),
            ConstraintSpec::new(vec![0, 1], vec![vec![0, 0]]),
            ConstraintSpec::new(vec![0, 1], vec![vec![0, 0], vec![0, 0]]),
            ConstraintSpec::new(vec![0, 1], vec![vec![0, 0], vec![0, 3]]),
            ConstraintSpec::new(vec![0, 1, 2], vec![vec![0, 0, 0], vec![1, 1, 1]]),
        ];
        for c in bad {
            assert!(Instance::new(params, vec![c]).is_err());
        }
        assert!(Instance::new(params, vec![]).is_err());
    }

    #[test]
    fn json_is_canonical() {
        let params = Params::new(3, 3, 2, 1, 2).validate().unwrap();
        let inst = Instance::new(
            params,
            vec![ConstraintSpec::new(
                vec![2, 0],
                vec![vec![2, 1], vec![0, 2]],
            )],
        )
        .unwrap();
        let text = inst.to_json();
        let back = Instance::from_json(&text).unwrap();
        assert_eq!(
            back.constraints()[0].incompatible,
            vec![vec![0, 2], vec![2, 1]]
        );
        assert_eq!(back.constraints()[0].scope, vec![2, 0]);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn json_without_q_infers_it() {
        let text = r#"{"n": 2, "d": 2, "k": 2,
            "constraints": [{"scope": [0, 1], "incompatible": [[0, 0]]}]}"#;
        let inst = Instance::from_json(text).unwrap();
        assert_eq!(inst.params().q(), 1);
        assert_eq!(inst.params().t(), 1);
    }
}
