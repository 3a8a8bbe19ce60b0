use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// A subset of the ground set, bit `j` for the `j`-th ground element.
pub type Set = u64;

/// Members of the ground set contained in `set`, ascending.
pub fn members(set: Set) -> impl Iterator<Item = u8> {
    (0..64u8).filter(move |&j| set >> j & 1 == 1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyMember {
    pub id: String,
    pub set: Set,
}

/// What a tile is a clone of.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MemberRef {
    A,
    B,
    /// The whole ground set.
    S,
    /// A member of the family, by position.
    F(u32),
}

/// Ground set `S`, family `F`, the pair `A, B`, and optional witnesses: an
/// `r`-partition `P_1..P_m` and a `(1 mod r)`-partition `R_1..R_k`, both as
/// lists of family positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductInstance {
    pub ground: Vec<String>,
    pub family: Vec<FamilyMember>,
    pub a: Set,
    pub b: Set,
    pub r: Option<u32>,
    pub r_witness: Option<Vec<usize>>,
    pub mod_witness: Option<Vec<usize>>,
}

pub(crate) const RESERVED: [&str; 3] = ["A", "B", "S"];

/// Labels are written inside tile and box strings, so they are restricted
/// to letters, digits, `_`, `-` and `.`.
fn check_label(what: &str, l: &str) -> Result<()> {
    if l.is_empty()
        || !l
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || "_-.".contains(c))
    {
        return Err(Error::InvalidInput(format!(
            "{what} label {l:?} must be nonempty [A-Za-z0-9_.-]"
        )));
    }
    Ok(())
}

impl ProductInstance {
    /// Builds an instance from labels. Family members and `A`, `B` are
    /// given as lists of ground labels.
    pub fn new(
        ground: Vec<String>,
        family: Vec<(String, Vec<String>)>,
        a: &[String],
        b: &[String],
    ) -> Result<Self> {
        if ground.len() > 64 {
            return Err(Error::InvalidInput(format!(
                "ground set has {} elements, at most 64 supported",
                ground.len()
            )));
        }
        let mut seen = BTreeSet::new();
        for g in &ground {
            check_label("ground", g)?;
            if !seen.insert(g) {
                return Err(Error::InvalidInput(format!("duplicate ground element {g}")));
            }
        }
        let mut inst = ProductInstance {
            ground,
            family: Vec::new(),
            a: 0,
            b: 0,
            r: None,
            r_witness: None,
            mod_witness: None,
        };
        let mut ids = BTreeSet::new();
        for (id, elems) in family {
            check_label("member", &id)?;
            if RESERVED.contains(&id.as_str()) {
                return Err(Error::InvalidInput(format!("member id {id} is reserved")));
            }
            if !ids.insert(id.clone()) {
                return Err(Error::InvalidInput(format!("duplicate member id {id}")));
            }
            let set = inst.set_of(&elems)?;
            inst.family.push(FamilyMember { id, set });
        }
        inst.a = inst.set_of(a)?;
        inst.b = inst.set_of(b)?;
        Ok(inst)
    }

    /// Attaches witnesses given as member ids.
    pub fn with_witnesses(
        mut self,
        r: u32,
        r_witness: &[String],
        mod_witness: &[String],
    ) -> Result<Self> {
        self.r = Some(r);
        self.r_witness = Some(self.positions(r_witness)?);
        self.mod_witness = Some(self.positions(mod_witness)?);
        Ok(self)
    }

    pub fn with_ab(&self, a: Set, b: Set) -> Self {
        ProductInstance {
            a,
            b,
            ..self.clone()
        }
    }

    fn positions(&self, ids: &[String]) -> Result<Vec<usize>> {
        ids.iter()
            .map(|id| {
                self.member_index(id)
                    .ok_or_else(|| Error::Reference(format!("unknown member id {id}")))
            })
            .collect()
    }

    pub fn member_index(&self, id: &str) -> Option<usize> {
        self.family.iter().position(|m| m.id == id)
    }

    pub fn ground_index(&self, label: &str) -> Option<u8> {
        self.ground.iter().position(|g| g == label).map(|i| i as u8)
    }

    pub fn set_of(&self, labels: &[String]) -> Result<Set> {
        labels.iter().try_fold(0, |acc, l| {
            let i = self
                .ground_index(l)
                .ok_or_else(|| Error::Reference(format!("unknown ground element {l}")))?;
            Ok(acc | 1 << i)
        })
    }

    pub fn labels_of(&self, set: Set) -> Vec<String> {
        members(set)
            .map(|j| self.ground[j as usize].clone())
            .collect()
    }

    pub fn size(&self) -> usize {
        self.ground.len()
    }

    pub fn full(&self) -> Set {
        if self.ground.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.ground.len()) - 1
        }
    }

    pub fn u(&self) -> Set {
        self.a | self.b
    }

    /// `U ∖ A`
    pub fn ac(&self) -> Set {
        self.u() & !self.a
    }

    /// `U ∖ B`
    pub fn bc(&self) -> Set {
        self.u() & !self.b
    }

    pub fn resolve(&self, m: MemberRef) -> Option<Set> {
        match m {
            MemberRef::A => Some(self.a),
            MemberRef::B => Some(self.b),
            MemberRef::S => Some(self.full()),
            MemberRef::F(i) => self.family.get(i as usize).map(|f| f.set),
        }
    }

    pub fn label(&self, m: MemberRef) -> String {
        match m {
            MemberRef::A => "A".into(),
            MemberRef::B => "B".into(),
            MemberRef::S => "S".into(),
            MemberRef::F(i) => self
                .family
                .get(i as usize)
                .map_or_else(|| format!("#{i}"), |f| f.id.clone()),
        }
    }

    pub fn parse_label(&self, label: &str) -> Result<MemberRef> {
        match label {
            "A" => Ok(MemberRef::A),
            "B" => Ok(MemberRef::B),
            "S" => Ok(MemberRef::S),
            id => self
                .member_index(id)
                .map(|i| MemberRef::F(i as u32))
                .ok_or_else(|| Error::Reference(format!("undefined member id {id}"))),
        }
    }

    fn multiplicities(&self, list: &[usize]) -> Vec<u64> {
        let mut counts = vec![0u64; self.size()];
        for &i in list {
            for j in members(self.family[i].set) {
                counts[j as usize] += 1;
            }
        }
        counts
    }

    /// `(r, P_1..P_m)` after checking that every element lies in exactly
    /// `r` of the listed members.
    pub fn checked_r_witness(&self) -> Result<(u32, Vec<usize>)> {
        let (Some(r), Some(list)) = (self.r, self.r_witness.as_ref()) else {
            return Err(Error::Precondition(
                "instance has no r-partition witness".into(),
            ));
        };
        if r == 0 {
            return Err(Error::Precondition("r must be positive".into()));
        }
        self.check_positions(list)?;
        let counts = self.multiplicities(list);
        if let Some(j) = counts.iter().position(|&c| c != u64::from(r)) {
            return Err(Error::Precondition(format!(
                "r-partition witness covers {} {} times, expected {r}",
                self.ground[j], counts[j]
            )));
        }
        Ok((r, list.clone()))
    }

    /// `R_1..R_k` after checking every multiplicity is `1 mod r`.
    pub fn checked_mod_witness(&self) -> Result<Vec<usize>> {
        let (Some(r), Some(list)) = (self.r, self.mod_witness.as_ref()) else {
            return Err(Error::Precondition(
                "instance has no (1 mod r)-partition witness".into(),
            ));
        };
        if r == 0 {
            return Err(Error::Precondition("r must be positive".into()));
        }
        self.check_positions(list)?;
        let counts = self.multiplicities(list);
        if let Some(j) = counts
            .iter()
            .position(|&c| c % u64::from(r) != 1 % u64::from(r) || c == 0)
        {
            return Err(Error::Precondition(format!(
                "(1 mod {r})-partition witness covers {} {} times",
                self.ground[j], counts[j]
            )));
        }
        Ok(list.clone())
    }

    fn check_positions(&self, list: &[usize]) -> Result<()> {
        match list.iter().find(|&&i| i >= self.family.len()) {
            Some(i) => Err(Error::Reference(format!("witness refers to member #{i}"))),
            None => Ok(()),
        }
    }
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn derived_sets() {
        let i = small();
        assert_eq!(i.u(), 0b111);
        assert_eq!(i.ac(), 0b100);
        assert_eq!(i.bc(), 0b001);
        assert_eq!(i.ac() & i.bc(), 0);
    }

    #[test]
    fn witnesses() {
        assert!(small().checked_r_witness().is_ok());
        assert!(pentagon().checked_r_witness().is_ok());
        assert!(pentagon().checked_mod_witness().is_ok());
        let bad = pentagon()
            .with_witnesses(2, &strings(&["e0", "e1"]), &strings(&["all"]))
            .unwrap();
        assert!(bad.checked_r_witness().is_err());
        let bad = pentagon()
            .with_witnesses(
                2,
                &strings(&["e0", "e1", "e2", "e3", "e4"]),
                &strings(&["e0"]),
            )
            .unwrap();
        assert!(bad.checked_mod_witness().is_err());
    }

    #[test]
    fn rejects_bad_input() {
        let g = strings(&["x", "x"]);
        assert!(ProductInstance::new(g, vec![], &[], &[]).is_err());
        let g = strings(&["x"]);
        assert!(ProductInstance::new(g.clone(), vec![("A".into(), g.clone())], &[], &[]).is_err());
        assert!(matches!(
            ProductInstance::new(g, vec![], &strings(&["y"]), &[]),
            Err(Error::Reference(_))
        ));
    }
}
