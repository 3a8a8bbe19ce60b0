use super::instance::{members, MemberRef, Set};
use super::region::Box;

/// One tile: the clone of `member` whose `host` coordinate ranges over the
/// member and whose other coordinates equal `coords` (the host entry of
/// `coords` is ignored and kept at 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TileRef<'a> {
    pub member: MemberRef,
    pub host: usize,
    pub coords: &'a [u8],
}

/// A list of tiles of one dimension, stored column-wise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tiles {
    dim: usize,
    members: Vec<MemberRef>,
    hosts: Vec<u16>,
    coords: Vec<u8>,
}

impl Tiles {
    pub fn new(dim: usize) -> Self {
        Tiles {
            dim,
            members: Vec::new(),
            hosts: Vec::new(),
            coords: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn push(&mut self, member: MemberRef, host: usize, coords: &[u8]) {
        assert!(
            host < self.dim && coords.len() == self.dim,
            "tile shape mismatch"
        );
        self.members.push(member);
        self.hosts.push(host as u16);
        let start = self.coords.len();
        self.coords.extend_from_slice(coords);
        self.coords[start + host] = 0;
    }

    pub fn get(&self, i: usize) -> TileRef<'_> {
        TileRef {
            member: self.members[i],
            host: self.hosts[i] as usize,
            coords: &self.coords[i * self.dim..(i + 1) * self.dim],
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = TileRef<'_>> + '_ {
        (0..self.len()).map(move |i| self.get(i))
    }

    pub fn append(&mut self, other: Tiles) {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.members.extend(other.members);
        self.hosts.extend(other.hosts);
        self.coords.extend(other.coords);
    }

    /// Tiles of `member` covering `cells`, all hosted at `host`. The host
    /// factor of `cells` is the member's set; nothing is added when it is
    /// empty.
    pub fn fill_box(&mut self, member: MemberRef, host: usize, cells: &Box) {
        if cells.is_empty() {
            return;
        }
        let mut cells = cells.clone();
        // the host coordinate is free; any single value enumerates each tile once
        cells.factors[host] = 1;
        cells.for_each_cell(|c| self.push(member, host, c));
    }

    /// `T × {y}` for every tile `T` and every `y ∈ values`, as a new last
    /// coordinate.
    pub fn times(&self, values: Set) -> Tiles {
        let mut out = Tiles::new(self.dim + 1);
        let mut buf = vec![0u8; self.dim + 1];
        for t in self.iter() {
            buf[..self.dim].copy_from_slice(t.coords);
            for y in members(values) {
                buf[self.dim] = y;
                out.push(t.member, t.host, &buf);
            }
        }
        out
    }

    /// Extends every tile by each point of `b` on new trailing coordinates.
    pub fn times_box(&self, b: &Box) -> Tiles {
        b.factors.iter().fold(self.clone(), |acc, &f| acc.times(f))
    }

    /// Inserts a fixed coordinate with value `value` at position `pos`.
    pub fn insert_coord(&self, pos: usize, value: u8) -> Tiles {
        let mut out = Tiles::new(self.dim + 1);
        let mut buf = Vec::with_capacity(self.dim + 1);
        for t in self.iter() {
            buf.clear();
            buf.extend_from_slice(&t.coords[..pos]);
            buf.push(value);
            buf.extend_from_slice(&t.coords[pos..]);
            let host = if t.host >= pos { t.host + 1 } else { t.host };
            out.push(t.member, host, &buf);
        }
        out
    }

    /// Moves coordinate `j` to position `sigma[j]`.
    pub fn permute(&self, sigma: &[usize]) -> Tiles {
        assert_eq!(sigma.len(), self.dim, "permutation length");
        let mut out = Tiles::new(self.dim);
        let mut buf = vec![0u8; self.dim];
        for t in self.iter() {
            for (j, &v) in t.coords.iter().enumerate() {
                buf[sigma[j]] = v;
            }
            out.push(t.member, sigma[t.host], &buf);
        }
        out
    }

    pub fn relabel(&mut self, from: MemberRef, to: MemberRef) {
        for m in &mut self.members {
            if *m == from {
                *m = to;
            }
        }
    }

    pub fn member_refs(&self) -> impl Iterator<Item = MemberRef> + '_ {
        self.members.iter().copied()
    }

    /// Canonical order: by coordinates, then host, then member.
    pub fn sorted(&self) -> Tiles {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.sort_by(|&a, &b| {
            let (x, y) = (self.get(a), self.get(b));
            x.coords
                .cmp(y.coords)
                .then(x.host.cmp(&y.host))
                .then(x.member.cmp(&y.member))
        });
        let mut out = Tiles::new(self.dim);
        for i in idx {
            let t = self.get(i);
            out.push(t.member, t.host, t.coords);
        }
        out
    }
}
