use crate::budget::Budget;
use crate::engine::{members, Set};
use crate::error::{Error, Result};

/// One weighting found by [`weak_partition_search`]: `weights[i]` is the
/// weight of family member `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Finding {
    pub r: u32,
    pub weights: Vec<u32>,
}

impl Finding {
    /// Member positions repeated by weight, as instance witnesses list them.
    pub fn as_list(&self) -> Vec<usize> {
        self.weights
            .iter()
            .enumerate()
            .flat_map(|(i, &w)| std::iter::repeat_n(i, w as usize))
            .collect()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WeakFindings {
    /// For each `r ≤ r_max` with an `r`-partition, the first one found.
    pub r_partitions: Vec<Finding>,
    /// For each `r ≤ r_max` with a `(1 mod r)`-partition, the first one found.
    pub mod_partitions: Vec<Finding>,
    /// A 0/1 weighting with every multiplicity 1, if any.
    pub exact: Option<Vec<u32>>,
    pub vectors: u64,
}

impl WeakFindings {
    pub fn r_partition(&self, r: u32) -> Option<&Finding> {
        self.r_partitions.iter().find(|f| f.r == r)
    }

    pub fn mod_partition(&self, r: u32) -> Option<&Finding> {
        self.mod_partitions.iter().find(|f| f.r == r)
    }
}

struct Sweep<'a> {
    family: &'a [Set],
    elems: Vec<u8>,
    r_max: u32,
    limit: u64,
    w: Vec<u32>,
    mult: Vec<u32>,
    out: WeakFindings,
}

impl Sweep<'_> {
    fn add(&mut self, i: usize, v: u32, sub: bool) {
        let set = self.family[i];
        for (k, &e) in self.elems.iter().enumerate() {
            if set >> e & 1 == 1 {
                if sub {
                    self.mult[k] -= v;
                } else {
                    self.mult[k] += v;
                }
            }
        }
    }

    fn go(&mut self, i: usize, left: u32, any: bool) -> Result<()> {
        if i == self.family.len() {
            if any {
                self.out.vectors += 1;
                if self.out.vectors > self.limit {
                    return Err(Error::budget("weight vectors", self.limit));
                }
                self.record();
            }
            return Ok(());
        }
        for v in 0..=left {
            self.w[i] = v;
            self.add(i, v, false);
            let res = self.go(i + 1, left - v, any || v > 0);
            self.add(i, v, true);
            res?;
        }
        self.w[i] = 0;
        Ok(())
    }

    fn record(&mut self) {
        let m = self.mult[0];
        if m > 0
            && m <= self.r_max
            && self.mult.iter().all(|&x| x == m)
            && self.out.r_partition(m).is_none()
        {
            self.out.r_partitions.push(Finding {
                r: m,
                weights: self.w.clone(),
            });
        }
        if self.mult.iter().all(|&x| x >= 1) {
            for r in 1..=self.r_max {
                if self.mult.iter().all(|&x| (x - 1) % r == 0)
                    && self.out.mod_partition(r).is_none()
                {
                    self.out.mod_partitions.push(Finding {
                        r,
                        weights: self.w.clone(),
                    });
                }
            }
        }
        if self.out.exact.is_none() && self.mult.iter().all(|&x| x == 1) {
            self.out.exact = Some(self.w.clone());
        }
    }
}

/// Exhaustive search over nonnegative integer weightings of `family` with
/// total weight at most `weight_bound`, in lexicographic order of the
/// weight vectors. Multiplicities are taken over the elements of `ground`.
pub fn weak_partition_search(
    ground: Set,
    family: &[Set],
    r_max: u32,
    weight_bound: u32,
    budget: &Budget,
) -> Result<WeakFindings> {
    if ground == 0 {
        return Err(Error::InvalidInput("empty ground set".into()));
    }
    if let Some(i) = family.iter().position(|&m| m == 0 || m & !ground != 0) {
        return Err(Error::InvalidInput(format!(
            "member {i} is empty or leaves the ground set"
        )));
    }
    let mut s = Sweep {
        family,
        elems: members(ground).collect(),
        r_max,
        limit: budget.nodes,
        w: vec![0; family.len()],
        mult: vec![0; ground.count_ones() as usize],
        out: WeakFindings::default(),
    };
    s.go(0, weight_bound, false)?;
    s.out.r_partitions.sort_by_key(|f| f.r);
    s.out.mod_partitions.sort_by_key(|f| f.r);
    Ok(s.out)
}
