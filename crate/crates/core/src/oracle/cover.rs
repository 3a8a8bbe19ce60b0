use crate::error::{Error, Result};

/// Exact cover over the elements `0..universe`: pick candidates so that
/// every element lies in exactly one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverProblem {
    pub universe: usize,
    /// Element lists, one per candidate.
    pub candidates: Vec<Vec<usize>>,
}

impl CoverProblem {
    pub fn new(universe: usize, candidates: Vec<Vec<usize>>) -> Result<Self> {
        for (i, c) in candidates.iter().enumerate() {
            if let Some(&e) = c.iter().find(|&&e| e >= universe) {
                return Err(Error::InvalidInput(format!(
                    "candidate {i} has element {e} outside the universe of {universe}"
                )));
            }
            let mut s = c.clone();
            s.sort_unstable();
            s.dedup();
            if s.len() != c.len() {
                return Err(Error::InvalidInput(format!(
                    "candidate {i} repeats an element"
                )));
            }
        }
        Ok(CoverProblem {
            universe,
            candidates,
        })
    }

    /// `true` iff the chosen candidates cover every element exactly once.
    pub fn is_exact_cover(&self, chosen: &[usize]) -> bool {
        let mut hit = vec![0u32; self.universe];
        for &c in chosen {
            let Some(cand) = self.candidates.get(c) else {
                return false;
            };
            for &e in cand {
                hit[e] += 1;
            }
        }
        hit.iter().all(|&h| h == 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoverMode {
    First,
    Count,
    All,
}

/// Search result. `count == 0` is UNSAT: the search was complete.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverOutcome {
    /// Sorted candidate positions; empty in count mode.
    pub solutions: Vec<Vec<usize>>,
    pub count: u64,
    pub nodes: u64,
}

impl CoverOutcome {
    pub fn is_unsat(&self) -> bool {
        self.count == 0
    }
}

// Dancing links: node 0 is the root, 1..=cols are column headers.
struct Links {
    left: Vec<usize>,
    right: Vec<usize>,
    up: Vec<usize>,
    down: Vec<usize>,
    col: Vec<usize>,
    row: Vec<usize>,
    size: Vec<usize>,
}

impl Links {
    fn new(p: &CoverProblem) -> Links {
        let cols = p.universe;
        let total = 1 + cols + p.candidates.iter().map(Vec::len).sum::<usize>();
        let mut l = Links {
            left: Vec::with_capacity(total),
            right: Vec::with_capacity(total),
            up: Vec::with_capacity(total),
            down: Vec::with_capacity(total),
            col: Vec::with_capacity(total),
            row: Vec::with_capacity(total),
            size: vec![0; cols + 1],
        };
        for i in 0..=cols {
            l.left.push(if i == 0 { cols } else { i - 1 });
            l.right.push(if i == cols { 0 } else { i + 1 });
            l.up.push(i);
            l.down.push(i);
            l.col.push(i);
            l.row.push(usize::MAX);
        }
        for (r, cand) in p.candidates.iter().enumerate() {
            let mut elems = cand.clone();
            elems.sort_unstable();
            let first = l.left.len();
            for (k, &e) in elems.iter().enumerate() {
                let node = first + k;
                let c = e + 1;
                l.left.push(if k == 0 {
                    first + elems.len() - 1
                } else {
                    node - 1
                });
                l.right.push(if k + 1 == elems.len() {
                    first
                } else {
                    node + 1
                });
                l.up.push(l.up[c]);
                l.down.push(c);
                let last = l.up[c];
                l.down[last] = node;
                l.up[c] = node;
                l.col.push(c);
                l.row.push(r);
                l.size[c] += 1;
            }
        }
        l
    }

    fn cover(&mut self, c: usize) {
        let (lc, rc) = (self.left[c], self.right[c]);
        self.right[lc] = rc;
        self.left[rc] = lc;
        let mut i = self.down[c];
        while i != c {
            let mut j = self.right[i];
            while j != i {
                let (u, d) = (self.up[j], self.down[j]);
                self.down[u] = d;
                self.up[d] = u;
                self.size[self.col[j]] -= 1;
                j = self.right[j];
            }
            i = self.down[i];
        }
    }

    fn uncover(&mut self, c: usize) {
        let mut i = self.up[c];
        while i != c {
            let mut j = self.left[i];
            while j != i {
                self.size[self.col[j]] += 1;
                let (u, d) = (self.up[j], self.down[j]);
                self.down[u] = j;
                self.up[d] = j;
                j = self.left[j];
            }
            i = self.up[i];
        }
        let (lc, rc) = (self.left[c], self.right[c]);
        self.right[lc] = c;
        self.left[rc] = c;
    }

    /// Column with the fewest rows, the first such in element order.
    fn choose(&self) -> usize {
        let mut best = self.right[0];
        let mut c = self.right[best];
        while c != 0 {
            if self.size[c] < self.size[best] {
                best = c;
            }
            c = self.right[c];
        }
        best
    }
}

struct Search<'a> {
    links: Links,
    mode: CoverMode,
    limit: u64,
    nodes: u64,
    stack: Vec<usize>,
    out: &'a mut CoverOutcome,
}

impl Search<'_> {
    /// Returns `Ok(true)` to stop.
    fn run(&mut self) -> Result<bool> {
        if self.links.right[0] == 0 {
            self.out.count += 1;
            if self.mode != CoverMode::Count {
                let mut sol = self.stack.clone();
                sol.sort_unstable();
                self.out.solutions.push(sol);
            }
            return Ok(self.mode == CoverMode::First);
        }
        self.nodes += 1;
        if self.nodes > self.limit {
            return Err(Error::budget("exact cover search nodes", self.limit));
        }
        let c = self.links.choose();
        if self.links.size[c] == 0 {
            return Ok(false);
        }
        self.links.cover(c);
        let mut r = self.links.down[c];
        let mut stop = false;
        while r != c && !stop {
            self.stack.push(self.links.row[r]);
            let mut j = self.links.right[r];
            while j != r {
                self.links.cover(self.links.col[j]);
                j = self.links.right[j];
            }
            let res = self.run();
            let mut j = self.links.left[r];
            while j != r {
                self.links.uncover(self.links.col[j]);
                j = self.links.left[j];
            }
            self.stack.pop();
            stop = res?;
            r = self.links.down[r];
        }
        self.links.uncover(c);
        Ok(stop)
    }
}

/// Deterministic exact-cover backtracking. Exceeding `node_limit` is an
/// error, never reported as UNSAT.
pub fn exact_cover_solve(
    p: &CoverProblem,
    mode: CoverMode,
    node_limit: u64,
) -> Result<CoverOutcome> {
    let mut out = CoverOutcome {
        solutions: Vec::new(),
        count: 0,
        nodes: 0,
    };
    let mut s = Search {
        links: Links::new(p),
        mode,
        limit: node_limit,
        nodes: 0,
        stack: Vec::new(),
        out: &mut out,
    };
    s.run()?;
    let nodes = s.nodes;
    out.nodes = nodes;
    Ok(out)
}
