//! Finite posets, Boolean-lattice elements and embeddings into `B(n)`.

mod copies;
mod element;
mod embed;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use copies::{enumerate_copies, is_copy};
pub use element::{LatticeCopy, LatticeElement};
pub use embed::{
    copy_with_extreme, find_base_embedding, is_embedding, scattered_embedding, Embedding,
    ExtremeRole,
};

/// The textual description a poset is read from: element ids plus a list of
/// `a < b` pairs. Pairs need not be covers; the closure is taken on load.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetSpec {
    pub elements: Vec<String>,
    pub covers: Vec<(String, String)>,
}

/// A finite partial order on element ids `0..len()`.
///
/// Element order is significant: it is the fixed ordering used to break ties
/// in every deterministic search.
#[derive(Clone, PartialEq, Eq)]
pub struct Poset {
    ids: Vec<String>,
    leq: Vec<Vec<bool>>,
    top: Option<usize>,
    bottom: Option<usize>,
}

/// Parses a JSON poset description (`elements`, `covers`); any other fields
/// are ignored.
pub fn parse_poset(text: &str) -> Result<Poset> {
    let spec: PosetSpec = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    Poset::from_spec(&spec)
}

impl Poset {
    pub fn from_spec(spec: &PosetSpec) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, id) in spec.elements.iter().enumerate() {
            if index.insert(id.as_str(), i).is_some() {
                return Err(Error::Poset(format!("duplicate element id `{id}`")));
            }
        }
        let lookup = |id: &str| {
            index
                .get(id)
                .copied()
                .ok_or_else(|| Error::Poset(format!("cover mentions unknown element `{id}`")))
        };
        let pairs = spec
            .covers
            .iter()
            .map(|(a, b)| Ok((lookup(a)?, lookup(b)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_relations(spec.elements.clone(), &pairs)
    }

    /// Builds the poset generated by the strict relations `a < b`.
    pub fn from_relations(ids: Vec<String>, less: &[(usize, usize)]) -> Result<Self> {
        let s = ids.len();
        let mut leq = vec![vec![false; s]; s];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in less {
            if a == b {
                return Err(Error::Poset(format!("cycle: `{}` < `{}`", ids[a], ids[a])));
            }
            leq[a][b] = true;
        }
        for k in 0..s {
            for i in 0..s {
                if leq[i][k] {
                    for j in 0..s {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..s {
            for j in i + 1..s {
                if leq[i][j] && leq[j][i] {
                    return Err(Error::Poset(format!(
                        "cycle through `{}` and `{}`",
                        ids[i], ids[j]
                    )));
                }
            }
        }
        let top = (0..s).find(|&t| (0..s).all(|x| leq[x][t]));
        let bottom = (0..s).find(|&b| (0..s).all(|x| leq[b][x]));
        Ok(Poset {
            ids,
            leq,
            top,
            bottom,
        })
    }

    /// The chain `0 < 1 < ... < len-1`.
    pub fn chain(len: usize) -> Self {
        let ids = (0..len).map(|i| i.to_string()).collect();
        let less: Vec<_> = (1..len).map(|i| (i - 1, i)).collect();
        Self::from_relations(ids, &less).expect("chains are partial orders")
    }

    /// The product order on `self × other`, element `(p, q)` at index
    /// `p * other.len() + q`.
    pub fn product(&self, other: &Poset) -> Poset {
        let (s, t) = (self.len(), other.len());
        let mut ids = Vec::with_capacity(s * t);
        for p in &self.ids {
            for q in &other.ids {
                ids.push(format!("({p},{q})"));
            }
        }
        let mut leq = vec![vec![false; s * t]; s * t];
        for a in 0..s * t {
            for b in 0..s * t {
                leq[a][b] = self.leq[a / t][b / t] && other.leq[a % t][b % t];
            }
        }
        let n = s * t;
        let top = (0..n).find(|&x| (0..n).all(|y| leq[y][x]));
        let bottom = (0..n).find(|&x| (0..n).all(|y| leq[x][y]));
        Poset {
            ids,
            leq,
            top,
            bottom,
        }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, i: usize) -> &str {
        &self.ids[i]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|x| x == id)
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn top(&self) -> Option<usize> {
        self.top
    }

    pub fn bottom(&self) -> Option<usize> {
        self.bottom
    }

    /// Cover pairs `a ⋖ b` (the Hasse diagram), sorted by index.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let s = self.len();
        let mut out = Vec::new();
        for a in 0..s {
            for b in 0..s {
                if a != b
                    && self.leq[a][b]
                    && !(0..s).any(|c| c != a && c != b && self.leq[a][c] && self.leq[c][b])
                {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn to_spec(&self) -> PosetSpec {
        PosetSpec {
            elements: self.ids.clone(),
            covers: self
                .covers()
                .into_iter()
                .map(|(a, b)| (self.ids[a].clone(), self.ids[b].clone()))
                .collect(),
        }
    }

    /// A linear extension: repeatedly take the smallest-index minimal
    /// element among those not yet placed.
    pub fn linear_extension(&self) -> Vec<usize> {
        let s = self.len();
        let mut placed = vec![false; s];
        let mut out = Vec::with_capacity(s);
        while out.len() < s {
            let next = (0..s)
                .find(|&x| !placed[x] && (0..s).all(|y| y == x || placed[y] || !self.leq[y][x]))
                .expect("a finite partial order always has a minimal element");
            placed[next] = true;
            out.push(next);
        }
        out
    }

    /// `|P|` is `2^k` for the returned `k`.
    pub fn log2_size(&self) -> Option<u32> {
        let s = self.len();
        (s.is_power_of_two()).then(|| s.trailing_zeros())
    }
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let covers: Vec<_> = self
            .covers()
            .into_iter()
            .map(|(a, b)| format!("{}<{}", self.ids[a], self.ids[b]))
            .collect();
        f.debug_struct("Poset")
            .field("elements", &self.ids)
            .field("covers", &covers)
            .finish()
    }
}
