//! The base-relation definitions written out as boolean formulas over
//! 1-based region indices, with no shortcuts shared with the classifier.

use crate::calculus::{tc10, tc6, RelationSet};
use crate::trajectory::{CalcKind, RegionId, Trajectory};

struct Pair<'a> {
    a: &'a [RegionId],
    b: &'a [RegionId],
}

impl Pair<'_> {
    fn n(&self) -> usize {
        self.a.len()
    }
    fn m(&self) -> usize {
        self.b.len()
    }
    /// `EQ(T1^i, T2^j)` with 1-based indices.
    fn eq(&self, i: usize, j: usize) -> bool {
        self.a[i - 1] == self.b[j - 1]
    }

    fn equal(&self) -> bool {
        self.n() == self.m() && (1..=self.n()).all(|i| self.eq(i, i))
    }

    fn reverse(&self) -> bool {
        let n = self.n();
        self.n() == self.m() && (1..=n).all(|i| self.eq(i, n + 1 - i))
    }

    fn alternative(&self) -> bool {
        let (n, m) = (self.n(), self.m());
        self.eq(1, 1) && self.eq(n, m) && (n != m || (2..n).any(|i| !self.eq(i, i)))
    }

    fn ret(&self) -> bool {
        let (n, m) = (self.n(), self.m());
        // The `n + 1 - i` index is only reached when n == m.
        self.eq(1, m) && self.eq(n, 1) && (n != m || (2..n).any(|i| !self.eq(i, n + 1 - i)))
    }

    fn start(&self) -> bool {
        self.eq(1, 1) && !self.eq(self.n(), self.m())
    }

    fn finish(&self) -> bool {
        !self.eq(1, 1) && self.eq(self.n(), self.m())
    }

    fn extends(&self) -> bool {
        !self.eq(self.n(), 1) && self.eq(1, self.m())
    }

    fn extended_by(&self) -> bool {
        !self.eq(1, self.m()) && self.eq(self.n(), 1)
    }

    fn shared_where(&self, i_range: impl Fn(usize) -> bool, j_range: impl Fn(usize) -> bool) -> bool {
        (1..=self.n()).any(|i| i_range(i) && (1..=self.m()).any(|j| j_range(j) && self.eq(i, j)))
    }

    fn intersect6(&self) -> bool {
        let (n, m) = (self.n(), self.m());
        !self.eq(1, 1)
            && !self.eq(n, m)
            && (self.shared_where(|i| i < n, |j| j > 1) || self.shared_where(|i| i > 1, |j| j < m))
    }

    fn intersect10(&self) -> bool {
        let (n, m) = (self.n(), self.m());
        !self.eq(1, 1)
            && !self.eq(n, m)
            && !self.eq(1, m)
            && !self.eq(n, 1)
            && (self.shared_where(|i| 1 < i && i < n, |_| true) || self.shared_where(|_| true, |j| 1 < j && j < m))
    }

    fn disjoint(&self) -> bool {
        (1..=self.n()).all(|i| (1..=self.m()).all(|j| !self.eq(i, j)))
    }
}

/// Every base relation whose definition holds from `t1` to `t2`. For valid
/// trajectories this is always a singleton.
pub fn definitions_holding(kind: CalcKind, t1: &Trajectory, t2: &Trajectory) -> RelationSet {
    let p = Pair { a: &t1.regions, b: &t2.regions };
    let mut out = RelationSet::EMPTY;
    let mut put = |holds: bool, r| {
        if holds {
            out.insert(r);
        }
    };
    match kind {
        CalcKind::Tc6 => {
            put(p.equal(), tc6::EQ);
            put(p.alternative(), tc6::ALT);
            put(p.start(), tc6::S);
            put(p.finish(), tc6::F);
            put(p.intersect6(), tc6::I);
            put(p.disjoint(), tc6::DIS);
        }
        CalcKind::Tc10 => {
            put(p.equal(), tc10::EQ);
            put(p.reverse(), tc10::REV);
            put(p.alternative(), tc10::ALT);
            put(p.ret(), tc10::RET);
            put(p.start(), tc10::S);
            put(p.finish(), tc10::F);
            put(p.extends(), tc10::EX);
            put(p.extended_by(), tc10::EXI);
            put(p.intersect10(), tc10::I);
            put(p.disjoint(), tc10::DIS);
        }
    }
    out
}
