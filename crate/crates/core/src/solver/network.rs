use std::collections::VecDeque;
use std::sync::Arc;
use std::time::Instant;

use crate::calculus::{Calculus, RelationSet};

use super::Instance;

/// Domains for every pair of elements.
///
/// Search variables are the canonical pairs `i < j`. The matrix also keeps the
/// mirrored entry `(j, i)` as the converse image so that propagation reads any
/// orientation with one load; the two halves are always written together.
#[derive(Clone)]
pub struct Network {
    calc: Arc<Calculus>,
    n: usize,
    dom: Vec<RelationSet>,
    trail: Vec<(u32, u32, RelationSet)>,
    queue: VecDeque<(u32, u32)>,
    queued: Vec<bool>,
    pub(crate) revisions: u64,
}

/// Result of [`algebraic_closure`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Closure {
    Consistent,
    /// The domain of this canonical pair became empty.
    Empty { x: usize, y: usize },
}

pub(crate) enum Stop {
    Empty(usize, usize),
    Timeout,
}

/// Queue pops between deadline checks during propagation.
const PROPAGATION_CHECK_INTERVAL: u32 = 1024;

/// Folds every constraint into the universal network. Emptiness is not an
/// error here; see [`Network::first_empty`].
pub fn build_network(inst: &Instance) -> Network {
    let calc = inst.shared_calculus();
    let n = inst.len();
    let mut dom = vec![calc.universe(); n * n];
    for i in 0..n {
        dom[i * n + i] = RelationSet::singleton(calc.equality());
    }
    for c in inst.constraints() {
        let (i, j, rels) = if c.x < c.y { (c.x, c.y, c.rels) } else { (c.y, c.x, calc.converse_set(c.rels)) };
        dom[i * n + j] &= rels;
        dom[j * n + i] = calc.converse_set(dom[i * n + j]);
    }
    Network { calc, n, dom, trail: Vec::new(), queue: VecDeque::new(), queued: vec![false; n * n], revisions: 0 }
}

/// Refines `net` to its path-consistent fixpoint.
///
/// Only pairs whose domain is not already universal are seeded; a universal
/// pair can never refine a neighbour that it has not itself been refined by.
pub fn algebraic_closure(net: &mut Network) -> Closure {
    if let Some((x, y)) = net.first_empty() {
        return Closure::Empty { x, y };
    }
    net.seed_constrained();
    match net.propagate(None) {
        Ok(()) => Closure::Consistent,
        Err(Stop::Empty(x, y)) => Closure::Empty { x, y },
        Err(Stop::Timeout) => unreachable!("no deadline was given"),
    }
}

impl Network {
    pub fn calculus(&self) -> &Calculus {
        &self.calc
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Domain of `(x, y)` in either orientation; `{eq}` on the diagonal.
    #[inline]
    pub fn domain(&self, x: usize, y: usize) -> RelationSet {
        self.dom[x * self.n + y]
    }

    /// First canonical pair with an empty domain.
    pub fn first_empty(&self) -> Option<(usize, usize)> {
        super::canonical_pairs(self.n).find(|&(i, j)| self.domain(i, j).is_empty())
    }

    /// Canonical domains in pair order.
    pub fn canonical_domains(&self) -> Vec<RelationSet> {
        super::canonical_pairs(self.n).map(|(i, j)| self.domain(i, j)).collect()
    }

    pub(crate) fn seed_constrained(&mut self) {
        let all = self.calc.universe();
        for (i, j) in super::canonical_pairs(self.n) {
            if self.dom[i * self.n + j] != all {
                self.enqueue(i, j);
            }
        }
    }

    #[inline]
    fn enqueue(&mut self, i: usize, j: usize) {
        let slot = &mut self.queued[i * self.n + j];
        if !*slot {
            *slot = true;
            self.queue.push_back((i as u32, j as u32));
        }
    }

    pub(crate) fn trail_len(&self) -> usize {
        self.trail.len()
    }

    /// Writes a canonical pair and its mirror, recording the old value.
    pub(crate) fn assign(&mut self, i: usize, j: usize, value: RelationSet) {
        debug_assert!(i < j);
        let n = self.n;
        self.trail.push((i as u32, j as u32, self.dom[i * n + j]));
        self.dom[i * n + j] = value;
        self.dom[j * n + i] = self.calc.converse_set(value);
        self.enqueue(i, j);
    }

    pub(crate) fn undo_to(&mut self, mark: usize) {
        let n = self.n;
        while self.trail.len() > mark {
            let (i, j, old) = self.trail.pop().expect("trail longer than mark");
            let (i, j) = (i as usize, j as usize);
            self.dom[i * n + j] = old;
            self.dom[j * n + i] = self.calc.converse_set(old);
        }
    }

    fn clear_queue(&mut self) {
        while let Some((i, j)) = self.queue.pop_front() {
            self.queued[i as usize * self.n + j as usize] = false;
        }
    }

    /// Intersects the domain of `(x, z)`, in any orientation, with `with`.
    #[inline]
    fn revise(&mut self, x: usize, z: usize, with: RelationSet) -> Result<(), Stop> {
        let n = self.n;
        let old = self.dom[x * n + z];
        let new = old & with;
        if new == old {
            return Ok(());
        }
        self.revisions += 1;
        if new.is_empty() {
            return Err(Stop::Empty(x.min(z), x.max(z)));
        }
        if x < z {
            self.assign(x, z, new);
        } else {
            self.assign(z, x, self.calc.converse_set(new));
        }
        Ok(())
    }

    /// Runs the queue to a fixpoint.
    ///
    /// When canonical pair `(i, j)` changes, every third element `k` gets
    /// `D(i,k) &= D(i,j)∘D(j,k)` and `D(k,j) &= D(k,i)∘D(i,j)`. The two
    /// triangles that use the mirror `(j, i)` as an input are the converses
    /// of these and are covered by the converse-composition law.
    pub(crate) fn propagate(&mut self, deadline: Option<Instant>) -> Result<(), Stop> {
        let n = self.n;
        let mut ticks = 0u32;
        while let Some((i, j)) = self.queue.pop_front() {
            let (i, j) = (i as usize, j as usize);
            self.queued[i * n + j] = false;
            ticks += 1;
            if ticks == PROPAGATION_CHECK_INTERVAL {
                ticks = 0;
                if deadline.is_some_and(|d| Instant::now() >= d) {
                    self.clear_queue();
                    return Err(Stop::Timeout);
                }
            }
            let dij = self.dom[i * n + j];
            for k in 0..n {
                if k == i || k == j {
                    continue;
                }
                let forward = self.calc.compose_set(dij, self.dom[j * n + k]);
                let backward = self.calc.compose_set(self.dom[k * n + i], self.dom[i * n + j]);
                let r = self.revise(i, k, forward).and_then(|()| self.revise(k, j, backward));
                if let Err(stop) = r {
                    self.clear_queue();
                    return Err(stop);
                }
            }
        }
        Ok(())
    }
}
