use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;

use super::{
    binomial, factorial, greedy_t_subset_weights, split_scattered, ValueDomain, WeakCertificate,
    WeakKind, WeightFunction,
};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::poset::{find_base_embedding, scattered_embedding, LatticeCopy, Poset};

/// Smallest `n ≥ 1` with `k·C(n, ⌈n/2⌉) ≤ 2^n`, searched up to `cap`.
pub fn smallest_r_dimension(k: u64, cap: u32) -> Result<u32> {
    let k = BigUint::from(k);
    // central = C(n, ⌈n/2⌉), advanced one n at a time
    let mut central = BigUint::one();
    let mut pow = BigUint::from(2u32);
    for n in 1..=cap {
        if &k * &central <= pow {
            return Ok(n);
        }
        let m = n / 2;
        if n % 2 == 0 {
            central = central * BigUint::from(2 * m + 1) / BigUint::from(m + 1);
        } else {
            central *= 2u32;
        }
        pow <<= 1;
    }
    Err(Error::budget("r-partition dimension", u64::from(cap)))
}

/// Builds a nonnegative rational weighting of copies of `P` in `B(n)` with
/// `N_w(L_i) = C(n, i)` for every level `i`.
///
/// Level totals `C(n, i)` are first spread over `k`-sets of levels
/// (`k = |P|·d`), each `k`-set is split into `d` classes of `d`-scattered
/// levels, and each class is realised by one canonical copy occupying
/// exactly those levels.
pub fn build_r_certificate(poset: &Poset, budget: &Budget) -> Result<WeakCertificate> {
    let (d, psi) = find_base_embedding(poset, budget)?;
    let d_eff = d.max(1);
    let k = poset.len() as u64 * u64::from(d_eff);
    let n = smallest_r_dimension(k, budget.max_weak_dim)?;

    let f: Vec<BigRational> = (0..=n)
        .map(|i| BigRational::from_integer(BigInt::from(binomial(n, i))))
        .collect();
    let spread = greedy_t_subset_weights(&f, k as u32)?;

    let mut w = WeightFunction::new(ValueDomain::NonNegRational);
    for (levels, weight) in spread.iter() {
        for class in split_scattered(levels, d_eff)? {
            let phi = scattered_embedding(poset, &psi, n, &class)?;
            w.add(LatticeCopy::new(phi.images), weight.clone())?;
        }
    }

    let r = factorial(n) * w.denominator_lcm().to_biguint().unwrap_or_default();
    Ok(WeakCertificate {
        kind: WeakKind::RPartition,
        poset: poset.clone(),
        n,
        r,
        base_embedding: psi,
        weights: w,
        integer_stage: None,
    })
}
