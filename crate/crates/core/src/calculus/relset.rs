use std::fmt;
use std::ops::{BitAnd, BitAndAssign, BitOr, BitOrAssign};

/// Maximum number of base relations a calculus may declare.
pub const MAX_RELATIONS: usize = 64;

/// Index of a base relation within its calculus.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct RelationId(pub u8);

impl RelationId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A set of base relations, stored as a 64-bit mask indexed by [`RelationId`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct RelationSet(u64);

impl RelationSet {
    pub const EMPTY: RelationSet = RelationSet(0);

    #[inline]
    pub const fn from_bits(bits: u64) -> Self {
        RelationSet(bits)
    }

    #[inline]
    pub const fn bits(self) -> u64 {
        self.0
    }

    #[inline]
    pub const fn singleton(r: RelationId) -> Self {
        RelationSet(1 << r.0)
    }

    /// The set `{0, .., count-1}`.
    #[inline]
    pub const fn full(count: usize) -> Self {
        if count >= 64 {
            RelationSet(u64::MAX)
        } else {
            RelationSet((1u64 << count) - 1)
        }
    }

    #[inline]
    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub const fn contains(self, r: RelationId) -> bool {
        self.0 & (1 << r.0) != 0
    }

    #[inline]
    pub fn insert(&mut self, r: RelationId) {
        self.0 |= 1 << r.0;
    }

    #[inline]
    pub fn remove(&mut self, r: RelationId) {
        self.0 &= !(1 << r.0);
    }

    #[inline]
    pub const fn union(self, other: RelationSet) -> RelationSet {
        RelationSet(self.0 | other.0)
    }

    #[inline]
    pub const fn intersection(self, other: RelationSet) -> RelationSet {
        RelationSet(self.0 & other.0)
    }

    #[inline]
    pub const fn difference(self, other: RelationSet) -> RelationSet {
        RelationSet(self.0 & !other.0)
    }

    #[inline]
    pub const fn is_subset(self, other: RelationSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Lowest relation in the set.
    #[inline]
    pub fn first(self) -> Option<RelationId> {
        if self.0 == 0 {
            None
        } else {
            Some(RelationId(self.0.trailing_zeros() as u8))
        }
    }

    /// The single member, if the set has exactly one.
    #[inline]
    pub fn single(self) -> Option<RelationId> {
        if self.0.is_power_of_two() {
            self.first()
        } else {
            None
        }
    }

    /// Members in ascending id order.
    pub fn iter(self) -> Iter {
        Iter(self.0)
    }
}

pub struct Iter(u64);

impl Iterator for Iter {
    type Item = RelationId;

    #[inline]
    fn next(&mut self) -> Option<RelationId> {
        if self.0 == 0 {
            return None;
        }
        let r = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(RelationId(r as u8))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Iter {}

impl IntoIterator for RelationSet {
    type Item = RelationId;
    type IntoIter = Iter;

    fn into_iter(self) -> Iter {
        self.iter()
    }
}

impl FromIterator<RelationId> for RelationSet {
    fn from_iter<I: IntoIterator<Item = RelationId>>(iter: I) -> Self {
        let mut s = RelationSet::EMPTY;
        for r in iter {
            s.insert(r);
        }
        s
    }
}

impl From<RelationId> for RelationSet {
    fn from(r: RelationId) -> Self {
        RelationSet::singleton(r)
    }
}

impl BitOr for RelationSet {
    type Output = RelationSet;
    fn bitor(self, rhs: RelationSet) -> RelationSet {
        self.union(rhs)
    }
}

impl BitOrAssign for RelationSet {
    fn bitor_assign(&mut self, rhs: RelationSet) {
        self.0 |= rhs.0;
    }
}

impl BitAnd for RelationSet {
    type Output = RelationSet;
    fn bitand(self, rhs: RelationSet) -> RelationSet {
        self.intersection(rhs)
    }
}

impl BitAndAssign for RelationSet {
    fn bitand_assign(&mut self, rhs: RelationSet) {
        self.0 &= rhs.0;
    }
}

impl fmt::Debug for RelationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|r| r.0)).finish()
    }
}
