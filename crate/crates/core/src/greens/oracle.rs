//! Principal ideals of every member, as bit sets over member indices.

use std::collections::HashMap;
use std::sync::OnceLock;

use crate::bits::PointSet;
use crate::ensemble::Ensemble;
use crate::error::{Error, Result};

use super::SearchLimits;

pub(crate) struct Tables {
    /// `left[b] = S b`.
    left: Vec<PointSet>,
    /// `right[b] = b S`.
    right: Vec<PointSet>,
    l_id: Vec<usize>,
    r_id: Vec<usize>,
    /// First member with a given (L-class, R-class) pair.
    middle: HashMap<(usize, usize), usize>,
    two_sided: Vec<OnceLock<PointSet>>,
}

fn labels(rows: &[PointSet]) -> Vec<usize> {
    let mut seen: HashMap<&PointSet, usize> = HashMap::new();
    rows.iter()
        .map(|r| {
            let next = seen.len();
            *seen.entry(r).or_insert(next)
        })
        .collect()
}

impl Tables {
    pub(crate) fn build(ens: &Ensemble, limits: SearchLimits) -> Result<Self> {
        let n = ens.len();
        if (n as u64).saturating_mul(n as u64) > limits.oracle_cap {
            return Err(Error::ResourceLimit(format!(
                "oracle tables for {n} members exceed the cap of {} products",
                limits.oracle_cap
            )));
        }
        let left: Vec<PointSet> = (0..n)
            .map(|b| PointSet::from_points(n, (0..n).map(|h| ens.mul(h, b))))
            .collect();
        let right: Vec<PointSet> = (0..n)
            .map(|b| PointSet::from_points(n, (0..n).map(|h| ens.mul(b, h))))
            .collect();
        let l_id = labels(&left);
        let r_id = labels(&right);
        let mut middle = HashMap::new();
        for m in 0..n {
            middle.entry((l_id[m], r_id[m])).or_insert(m);
        }
        Ok(Self {
            left,
            right,
            l_id,
            r_id,
            middle,
            two_sided: (0..n).map(|_| OnceLock::new()).collect(),
        })
    }

    pub(crate) fn l_related(&self, a: usize, b: usize) -> bool {
        self.l_id[a] == self.l_id[b]
    }

    pub(crate) fn r_related(&self, a: usize, b: usize) -> bool {
        self.r_id[a] == self.r_id[b]
    }

    pub(crate) fn l_leq(&self, a: usize, b: usize) -> bool {
        self.left[b].contains(a)
    }

    pub(crate) fn r_leq(&self, a: usize, b: usize) -> bool {
        self.right[b].contains(a)
    }

    pub(crate) fn l_class(&self, a: usize) -> usize {
        self.l_id[a]
    }

    pub(crate) fn r_class(&self, a: usize) -> usize {
        self.r_id[a]
    }

    /// A member `h` with `a L h` and `h R b`, if any.
    pub(crate) fn d_middle(&self, a: usize, b: usize) -> Option<usize> {
        self.middle.get(&(self.l_id[a], self.r_id[b])).copied()
    }

    /// `S b S`.
    pub(crate) fn two_sided(&self, b: usize) -> &PointSet {
        self.two_sided[b].get_or_init(|| {
            let mut ideal = PointSet::new(self.left.len());
            for x in self.left[b].iter() {
                ideal.union_with(&self.right[x]);
            }
            ideal
        })
    }

    pub(crate) fn j_leq(&self, a: usize, b: usize) -> bool {
        self.two_sided(b).contains(a)
    }

    pub(crate) fn j_related(&self, a: usize, b: usize) -> bool {
        self.j_leq(a, b) && self.j_leq(b, a)
    }

    /// First `h` with `a = hb`.
    pub(crate) fn left_factor(&self, ens: &Ensemble, a: usize, b: usize) -> Option<usize> {
        if !self.l_leq(a, b) {
            return None;
        }
        (0..ens.len()).find(|&h| ens.mul(h, b) == a)
    }

    /// First `h` with `a = bh`.
    pub(crate) fn right_factor(&self, ens: &Ensemble, a: usize, b: usize) -> Option<usize> {
        if !self.r_leq(a, b) {
            return None;
        }
        (0..ens.len()).find(|&h| ens.mul(b, h) == a)
    }

    /// First `(h₁, h₂)` in lexicographic order with `a = h₁ b h₂`.
    pub(crate) fn two_sided_factors(
        &self,
        ens: &Ensemble,
        a: usize,
        b: usize,
    ) -> Option<(usize, usize)> {
        if !self.j_leq(a, b) {
            return None;
        }
        (0..ens.len()).find_map(|h1| {
            let x = ens.mul(h1, b);
            self.right[x].contains(a).then(|| {
                (
                    h1,
                    (0..ens.len())
                        .find(|&h2| ens.mul(x, h2) == a)
                        .expect("in ideal"),
                )
            })
        })
    }
}
