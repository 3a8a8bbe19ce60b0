//! Weight functions on set families, and the builders for weak partitions
//! of `B(n)` into copies of a poset.
//!
//! Everything here is exact: weights are [`BigRational`]s, and multiplicity
//! identities are checked with equality, never with a tolerance.

mod certificate;
mod greedy;
mod modpart;
mod rpart;

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poset::{LatticeCopy, LatticeElement};

pub use certificate::{
    verify_weak_certificate, WeakCertificate, WeakKind, WeakReport, WeakViolation,
};
pub use greedy::{greedy_t_subset_trace, greedy_t_subset_weights, split_scattered, GreedyPhase};
pub use modpart::{build_mod_certificate, reduce_mod_r};
pub use rpart::{build_r_certificate, smallest_r_dimension};

/// A family member that can be asked whether it contains an element.
pub trait Member<E> {
    fn has(&self, x: &E) -> bool;
}

impl Member<LatticeElement> for LatticeCopy {
    fn has(&self, x: &LatticeElement) -> bool {
        self.contains(x)
    }
}

/// Sorted index sets, used for subsets of `X` and of `{0..n}`.
impl Member<u32> for Vec<u32> {
    fn has(&self, x: &u32) -> bool {
        self.binary_search(x).is_ok()
    }
}

/// Which values a weight function may take.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValueDomain {
    /// `Q+`
    NonNegRational,
    /// `Z+`
    NonNegInteger,
    /// `Z`
    Integer,
}

impl ValueDomain {
    fn admits(self, v: &BigRational) -> bool {
        match self {
            ValueDomain::NonNegRational => !v.is_negative(),
            ValueDomain::NonNegInteger => !v.is_negative() && v.is_integer(),
            ValueDomain::Integer => v.is_integer(),
        }
    }
}

/// A sparse weight function: members absent from `entries` have weight 0,
/// and no stored weight is 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightFunction<K: Ord> {
    domain: ValueDomain,
    entries: BTreeMap<K, BigRational>,
}

impl<K: Ord + Clone> WeightFunction<K> {
    pub fn new(domain: ValueDomain) -> Self {
        WeightFunction {
            domain,
            entries: BTreeMap::new(),
        }
    }

    pub fn domain(&self) -> ValueDomain {
        self.domain
    }

    pub fn get(&self, key: &K) -> BigRational {
        self.entries
            .get(key)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Sets `w(key) = value`.
    pub fn set(&mut self, key: K, value: BigRational) -> Result<()> {
        if !self.domain.admits(&value) {
            return Err(Error::InvalidInput(format!(
                "weight {value} outside {:?}",
                self.domain
            )));
        }
        if value.is_zero() {
            self.entries.remove(&key);
        } else {
            self.entries.insert(key, value);
        }
        Ok(())
    }

    /// `w(key) += delta`; the result must stay inside the domain.
    pub fn add(&mut self, key: K, delta: BigRational) -> Result<()> {
        let v = self.get(&key) + delta;
        self.set(key, v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &BigRational)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `N_w(x)`: total weight of members containing `x`.
    pub fn multiplicity<E>(&self, x: &E) -> BigRational
    where
        K: Member<E>,
    {
        self.entries
            .iter()
            .filter(|(k, _)| k.has(x))
            .fold(BigRational::zero(), |acc, (_, v)| acc + v)
    }

    /// `N_w(Y) = Σ_{y ∈ Y} N_w(y)`.
    pub fn multiplicity_of_set<'a, E: 'a>(&self, ys: impl IntoIterator<Item = &'a E>) -> BigRational
    where
        K: Member<E>,
    {
        ys.into_iter()
            .fold(BigRational::zero(), |acc, y| acc + self.multiplicity(y))
    }

    /// Least common multiple of the weight denominators (1 when empty).
    pub fn denominator_lcm(&self) -> BigInt {
        self.entries
            .values()
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
    }

    /// Reinterprets the function in another value domain.
    pub fn into_domain(self, domain: ValueDomain) -> Result<Self> {
        if let Some((_, v)) = self.entries.iter().find(|(_, v)| !domain.admits(v)) {
            return Err(Error::InvalidInput(format!(
                "weight {v} outside {domain:?}"
            )));
        }
        Ok(WeightFunction {
            domain,
            entries: self.entries,
        })
    }
}

/// `C(n, k)` as an exact integer (0 when `k > n`).
pub fn binomial(n: u32, k: u32) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

pub fn factorial(n: u32) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

/// Per-level totals `N_w(L_k)` for `k = 0..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelProfile(pub Vec<BigRational>);

impl LevelProfile {
    /// Computed member by member: each copy contributes `w(C)·|C ∩ L_k|`.
    pub fn of(w: &WeightFunction<LatticeCopy>, n: u32) -> Self {
        let mut totals = vec![BigRational::zero(); n as usize + 1];
        for (copy, weight) in w.iter() {
            for x in copy.elements() {
                totals[x.len() as usize] += weight;
            }
        }
        LevelProfile(totals)
    }

    pub fn level(&self, k: u32) -> &BigRational {
        &self.0[k as usize]
    }
}

/// Multiplicity of `x` under the permutation-average of `w`, via the closed
/// form `N_w(L_{|x|}) / C(n, |x|)`.
pub fn symmetrized_multiplicity(
    w: &WeightFunction<LatticeCopy>,
    n: u32,
    x: &LatticeElement,
) -> BigRational {
    let k = x.len();
    let total = LevelProfile::of(w, n).0.swap_remove(k as usize);
    total / BigRational::from_integer(BigInt::from(binomial(n, k)))
}

/// All permutations of `1..=n` as images `perm[i - 1]`, in lexicographic order.
pub(crate) fn permutations(n: u32) -> Vec<Vec<u32>> {
    fn go(n: u32, cur: &mut Vec<u32>, used: &mut Vec<bool>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n as usize {
            out.push(cur.clone());
            return;
        }
        for v in 1..=n {
            if !used[v as usize] {
                used[v as usize] = true;
                cur.push(v);
                go(n, cur, used, out);
                cur.pop();
                used[v as usize] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(
        n,
        &mut Vec::new(),
        &mut vec![false; n as usize + 1],
        &mut out,
    );
    out
}

/// The permutation average `w̄(A) = (1/n!) Σ_π w(π(A))`, materialized
/// member by member. Only sensible for small `n`; `w` must be nonnegative.
pub fn symmetrize_explicitly(
    w: &WeightFunction<LatticeCopy>,
    n: u32,
) -> Result<WeightFunction<LatticeCopy>> {
    if w.domain == ValueDomain::Integer {
        return Err(Error::InvalidInput(
            "symmetrization needs nonnegative weights".into(),
        ));
    }
    let perms = permutations(n);
    let scale = rational(BigInt::from(perms.len()));
    let mut acc: BTreeMap<LatticeCopy, BigRational> = BTreeMap::new();
    for (copy, v) in w.iter() {
        let share = v / &scale;
        for p in &perms {
            *acc.entry(copy.permuted(p))
                .or_insert_with(BigRational::zero) += &share;
        }
    }
    Ok(WeightFunction {
        domain: ValueDomain::NonNegRational,
        entries: acc.into_iter().filter(|(_, v)| !v.is_zero()).collect(),
    })
}

pub(crate) fn rational(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}
