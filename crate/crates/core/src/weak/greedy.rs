use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{rational, ValueDomain, WeightFunction};
use crate::error::{Error, Result};

/// One batched step of the greedy builder, in scaled integer units.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyPhase {
    /// Working function before the step.
    pub values: Vec<BigInt>,
    /// `Σ values / t` before the step.
    pub level: BigInt,
    pub chosen: Vec<u32>,
    pub step: BigInt,
}

/// Weights on `t`-subsets of `X = {0, ..., |f| - 1}` whose multiplicities
/// are exactly `f`.
pub fn greedy_t_subset_weights(f: &[BigRational], t: u32) -> Result<WeightFunction<Vec<u32>>> {
    greedy_t_subset_trace(f, t).map(|(w, _)| w)
}

/// As [`greedy_t_subset_weights`], also returning every phase.
///
/// Values are scaled to integers `g` with `Σ g = t·N` and `max g ≤ N`. Each
/// phase takes `T = {x : g(x) = N}`, pads it to a `t`-set `A` with the
/// largest remaining values (smallest index first on ties), and lowers `g`
/// on `A` and `N` by the largest `δ` keeping `g ≥ 0` and `max g ≤ N`.
pub fn greedy_t_subset_trace(
    f: &[BigRational],
    t: u32,
) -> Result<(WeightFunction<Vec<u32>>, Vec<GreedyPhase>)> {
    if t == 0 {
        return Err(Error::Precondition("t must be positive".into()));
    }
    if let Some(v) = f.iter().find(|v| v.is_negative()) {
        return Err(Error::Precondition(format!("negative value {v}")));
    }
    let mut out = WeightFunction::new(ValueDomain::NonNegRational);
    let sum: BigRational = f.iter().sum();
    if sum.is_zero() {
        return Ok((out, Vec::new()));
    }
    if t as usize > f.len() {
        return Err(Error::Precondition(format!(
            "t = {t} exceeds |X| = {}",
            f.len()
        )));
    }
    let tq = rational(t);
    let max = f.iter().max().cloned().unwrap_or_else(BigRational::zero);
    if &tq * &max > sum {
        return Err(Error::Precondition(format!(
            "t·max f = {} exceeds Σ f = {sum}",
            &tq * &max
        )));
    }

    let lcm = f.iter().fold(BigInt::one(), |acc, v| {
        num_integer::lcm(acc, v.denom().clone())
    });
    let scale = BigInt::from(t) * lcm;
    let scale_q = BigRational::from_integer(scale.clone());
    let mut g: Vec<BigInt> = f.iter().map(|v| (v * &scale_q).to_integer()).collect();
    let mut level: BigInt = g.iter().sum::<BigInt>() / BigInt::from(t);
    let mut phases = Vec::new();

    while level.is_positive() {
        let mut order: Vec<usize> = (0..g.len()).collect();
        // g = N first, then decreasing value, then index
        order.sort_by(|&a, &b| g[b].cmp(&g[a]).then(a.cmp(&b)));
        let chosen_idx = &order[..t as usize];
        let outside_max = order[t as usize..].iter().map(|&i| &g[i]).max();
        let mut step = chosen_idx
            .iter()
            .map(|&i| g[i].clone())
            .min()
            .unwrap_or_default();
        if let Some(m) = outside_max {
            step = step.min(&level - m);
        }
        if !step.is_positive() {
            return Err(Error::Precondition("greedy step stalled".into()));
        }
        let mut chosen: Vec<u32> = chosen_idx.iter().map(|&i| i as u32).collect();
        chosen.sort_unstable();
        phases.push(GreedyPhase {
            values: g.clone(),
            level: level.clone(),
            chosen: chosen.clone(),
            step: step.clone(),
        });
        for &i in chosen_idx {
            g[i] -= &step;
        }
        level -= &step;
        out.add(chosen, BigRational::new(step, scale.clone()))?;
    }
    Ok((out, phases))
}

/// Splits a set of levels into `d` classes by taking every `d`-th element
/// of the ascending order; class `i` gets positions `i, i + d, ...`.
pub fn split_scattered(set: &[u32], d: u32) -> Result<Vec<Vec<u32>>> {
    if d == 0 {
        return Err(Error::Precondition("d must be positive".into()));
    }
    if !set.len().is_multiple_of(d as usize) {
        return Err(Error::Precondition(format!(
            "{d} does not divide |B| = {}",
            set.len()
        )));
    }
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != set.len() {
        return Err(Error::InvalidInput("repeated level".into()));
    }
    Ok((0..d as usize)
        .map(|i| sorted.iter().skip(i).step_by(d as usize).copied().collect())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| rational(x)).collect()
    }

    #[test]
    fn small_example() {
        let w = greedy_t_subset_weights(&q(&[1, 1, 2]), 2).unwrap();
        let got: Vec<_> = w.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        assert_eq!(
            got,
            vec![(vec![0, 2], rational(1)), (vec![1, 2], rational(1))]
        );
    }

    #[test]
    fn zero_and_singletons() {
        assert!(greedy_t_subset_weights(&q(&[0, 0]), 2).unwrap().is_empty());
        let w = greedy_t_subset_weights(&q(&[3, 0, 5]), 1).unwrap();
        assert_eq!(w.get(&vec![0]), rational(3));
        assert_eq!(w.get(&vec![2]), rational(5));
        assert_eq!(w.len(), 2);
    }

    #[test]
    fn rational_values() {
        let f = vec![
            BigRational::new(1.into(), 2.into()),
            BigRational::new(1.into(), 3.into()),
            rational(0),
        ];
        // 2·max = 1 > 5/6
        assert!(greedy_t_subset_weights(&f, 2).is_err());
        let f = vec![
            BigRational::new(1.into(), 2.into()),
            BigRational::new(1.into(), 2.into()),
            BigRational::new(1.into(), 2.into()),
        ];
        let w = greedy_t_subset_weights(&f, 2).unwrap();
        for x in 0..3u32 {
            assert_eq!(w.multiplicity(&x), f[x as usize]);
        }
    }

    #[test]
    fn hypothesis_errors() {
        assert!(greedy_t_subset_weights(&q(&[1, 1]), 0).is_err());
        assert!(greedy_t_subset_weights(&q(&[1, 1]), 3).is_err());
        assert!(greedy_t_subset_weights(&q(&[1, 5]), 2).is_err());
        assert!(greedy_t_subset_weights(&q(&[-1, 1]), 1).is_err());
    }

    #[test]
    fn splitting() {
        assert_eq!(
            split_scattered(&[0, 1, 2, 3], 2).unwrap(),
            vec![vec![0, 2], vec![1, 3]]
        );
        assert_eq!(split_scattered(&[4, 1, 7], 1).unwrap(), vec![vec![1, 4, 7]]);
        assert!(split_scattered(&[0, 1, 2], 2).is_err());
        assert!(split_scattered(&[0, 1], 0).is_err());
    }
}
