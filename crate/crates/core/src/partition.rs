//! The partitioned ground set and the action of transformations on its blocks.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::maps::{FiniteMap, SetPartition};

/// A partition of `X = [0, n)` into indexed blocks `X_0, ..., X_{k-1}`.
///
/// The block order is the index set `I`; it is kept as given, only the
/// points inside each block are sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    n: usize,
    blocks: Vec<Vec<usize>>,
    block_of: Vec<usize>,
    local_index: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct PartitionFile {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        if n == 0 {
            return Err(invalid!("the ground set must be nonempty"));
        }
        // reuse the disjoint-cover validation
        SetPartition::new(n, blocks.clone())?;
        let blocks: Vec<Vec<usize>> = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        let mut block_of = vec![0; n];
        let mut local_index = vec![0; n];
        for (i, b) in blocks.iter().enumerate() {
            for (pos, &x) in b.iter().enumerate() {
                block_of[x] = i;
                local_index[x] = pos;
            }
        }
        Ok(Self {
            n,
            blocks,
            block_of,
            local_index,
        })
    }

    /// Blocks from a label per point; block order follows first occurrence.
    pub fn from_labels(labels: &[usize]) -> Result<Self> {
        let mut order: Vec<usize> = Vec::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (x, &l) in labels.iter().enumerate() {
            match order.iter().position(|&o| o == l) {
                Some(i) => blocks[i].push(x),
                None => {
                    order.push(l);
                    blocks.push(vec![x]);
                }
            }
        }
        Self::new(labels.len(), blocks)
    }

    pub fn singletons(n: usize) -> Result<Self> {
        Self::new(n, (0..n).map(|x| vec![x]).collect())
    }

    pub fn single_block(n: usize) -> Result<Self> {
        Self::new(n, vec![(0..n).collect()])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &[usize] {
        &self.blocks[i]
    }

    /// Number of blocks, `|I|`.
    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_of(&self, x: usize) -> usize {
        self.block_of[x]
    }

    /// Position of `x` inside its (sorted) block.
    pub fn local_index(&self, x: usize) -> usize {
        self.local_index[x]
    }

    pub fn block_size(&self, i: usize) -> usize {
        self.blocks[i].len()
    }

    /// Only singleton blocks, or a single block.
    pub fn is_trivial(&self) -> bool {
        self.blocks.len() == 1 || self.blocks.len() == self.n
    }

    /// The partition as a canonical [`SetPartition`] (forgets block order).
    pub fn as_set_partition(&self) -> SetPartition {
        SetPartition::new(self.n, self.blocks.clone()).expect("validated at construction")
    }

    fn check_endo(&self, f: &FiniteMap) -> Result<()> {
        if f.domain_size() != self.n || f.codomain_size() != self.n {
            return Err(invalid!(
                "expected a self-map of {} points, got {} -> {}",
                self.n,
                f.domain_size(),
                f.codomain_size()
            ));
        }
        Ok(())
    }

    /// Block index of the image of each block, if `f` preserves the partition.
    fn block_targets(&self, f: &FiniteMap) -> Option<Vec<usize>> {
        self.blocks
            .iter()
            .map(|b| {
                let t = self.block_of[f.apply(b[0])];
                b.iter()
                    .all(|&x| self.block_of[f.apply(x)] == t)
                    .then_some(t)
            })
            .collect()
    }

    /// Every block is sent into a single block.
    pub fn preserves(&self, f: &FiniteMap) -> Result<bool> {
        self.check_endo(f)?;
        Ok(self.block_targets(f).is_some())
    }

    /// The character `χ(f)` on block indices: `i ↦ j` when `X_i f ⊆ X_j`.
    pub fn character(&self, f: &FiniteMap) -> Result<FiniteMap> {
        self.check_endo(f)?;
        let targets = self
            .block_targets(f)
            .ok_or_else(|| invalid!("{f} does not preserve the partition"))?;
        Ok(FiniteMap::from_parts(self.blocks.len(), targets))
    }

    /// Character of a map already known to preserve the partition.
    pub(crate) fn character_unchecked(&self, f: &FiniteMap) -> FiniteMap {
        FiniteMap::from_parts(
            self.blocks.len(),
            self.blocks
                .iter()
                .map(|b| self.block_of[f.apply(b[0])])
                .collect(),
        )
    }

    /// The family of block maps `f|X_i : X_i -> X_{iχ(f)}` in local coordinates.
    pub fn block_maps(&self, f: &FiniteMap) -> Result<BlockDecomposition> {
        let chi = self.character(f)?;
        let entries = (0..self.block_count())
            .map(|i| {
                let target = chi.apply(i);
                BlockMap {
                    source: i,
                    target,
                    map: self.restrict_unchecked(f, i, target),
                }
            })
            .collect();
        Ok(BlockDecomposition { entries })
    }

    /// `f|X_i` as a local map `X_i -> X_target`; `f` must send `X_i` into `X_target`.
    pub(crate) fn restrict_unchecked(&self, f: &FiniteMap, i: usize, target: usize) -> FiniteMap {
        FiniteMap::from_parts(
            self.block_size(target),
            self.blocks[i]
                .iter()
                .map(|&x| {
                    let y = f.apply(x);
                    debug_assert_eq!(self.block_of[y], target);
                    self.local_index[y]
                })
                .collect(),
        )
    }

    /// Membership in the unit group `S(X,P)`: every block map and the character are bijective.
    pub fn is_unit_bijection(&self, f: &FiniteMap) -> Result<bool> {
        let decomposition = self.block_maps(f)?;
        let chi = self.character_unchecked(f);
        Ok(chi.is_bijection()
            && decomposition
                .entries
                .iter()
                .all(|e| e.map.domain_size() == e.map.codomain_size() && e.map.is_injective()))
    }

    /// Whether `phi`, acting on the sorted subset `dom` of `X`, sends each
    /// block's share of `dom` into a single block.
    pub fn is_e_preserving(&self, phi: &FiniteMap, dom: &[usize]) -> Result<bool> {
        if phi.domain_size() != dom.len() {
            return Err(invalid!(
                "map acts on {} points but the domain lists {}",
                phi.domain_size(),
                dom.len()
            ));
        }
        if let Some(&x) = dom.iter().find(|&&x| x >= self.n) {
            return Err(invalid!("domain point {x} outside the ground set"));
        }
        if let Some(&y) = phi.images().iter().find(|&&y| y >= self.n) {
            return Err(invalid!("value {y} outside the ground set"));
        }
        let mut target: Vec<Option<usize>> = vec![None; self.block_count()];
        for (pos, &x) in dom.iter().enumerate() {
            let b = self.block_of[x];
            let t = self.block_of[phi.apply(pos)];
            match target[b] {
                None => target[b] = Some(t),
                Some(prev) if prev != t => return Ok(false),
                Some(_) => {}
            }
        }
        Ok(true)
    }

    /// A block-wise constant map with character `alpha`: each `x ∈ X_i` goes to
    /// the basepoint of `X_{iα}` (least element unless `basepoints` is given).
    pub fn lift_character(
        &self,
        alpha: &FiniteMap,
        basepoints: Option<&[usize]>,
    ) -> Result<FiniteMap> {
        let k = self.block_count();
        if alpha.domain_size() != k || alpha.codomain_size() != k {
            return Err(invalid!(
                "character must be a self-map of {k} block indices, got {} -> {}",
                alpha.domain_size(),
                alpha.codomain_size()
            ));
        }
        let base = self.basepoints(basepoints)?;
        Ok(FiniteMap::from_parts(
            self.n,
            (0..self.n)
                .map(|x| base[alpha.apply(self.block_of[x])])
                .collect(),
        ))
    }

    /// Validated basepoints, one per block; default is the block minimum.
    pub fn basepoints(&self, given: Option<&[usize]>) -> Result<Vec<usize>> {
        match given {
            None => Ok(self.blocks.iter().map(|b| b[0]).collect()),
            Some(pts) => {
                if pts.len() != self.block_count() {
                    return Err(invalid!(
                        "expected {} basepoints, got {}",
                        self.block_count(),
                        pts.len()
                    ));
                }
                for (i, &p) in pts.iter().enumerate() {
                    if p >= self.n || self.block_of[p] != i {
                        return Err(invalid!("basepoint {p} does not lie in block {i}"));
                    }
                }
                Ok(pts.to_vec())
            }
        }
    }
}

impl Serialize for Partition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PartitionFile {
            n: self.n,
            blocks: self.blocks.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let file = PartitionFile::deserialize(d)?;
        Partition::new(file.n, file.blocks).map_err(serde::de::Error::custom)
    }
}

/// The kernel classes of `f` that meet `a`, i.e. `π_A(f)`.
pub fn pi_restricted(f: &FiniteMap, a: &[usize]) -> Result<Vec<Vec<usize>>> {
    if let Some(&x) = a.iter().find(|&&x| x >= f.domain_size()) {
        return Err(invalid!("point {x} outside the domain"));
    }
    let kernel = f.kernel_partition();
    let class_of = kernel.class_index();
    let mut meets = vec![false; kernel.len()];
    for &x in a {
        meets[class_of[x]] = true;
    }
    Ok(kernel
        .classes()
        .iter()
        .zip(meets)
        .filter(|(_, m)| *m)
        .map(|(c, _)| c.clone())
        .collect())
}

/// One block map `f|X_source : X_source -> X_target` in local coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockMap {
    pub source: usize,
    pub target: usize,
    pub map: FiniteMap,
}

/// The indexed family of block maps induced by a partition-preserving map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockDecomposition {
    pub entries: Vec<BlockMap>,
}

impl BlockDecomposition {
    /// Rebuilds the global map from its block maps.
    pub fn reassemble(&self, p: &Partition) -> Result<FiniteMap> {
        if self.entries.len() != p.block_count() {
            return Err(invalid!(
                "decomposition has {} entries for {} blocks",
                self.entries.len(),
                p.block_count()
            ));
        }
        let mut images = vec![0; p.n()];
        for e in &self.entries {
            let (src, tgt) = (p.block(e.source), p.block(e.target));
            if e.map.domain_size() != src.len() || e.map.codomain_size() != tgt.len() {
                return Err(invalid!("block map {} has the wrong shape", e.source));
            }
            for (pos, &x) in src.iter().enumerate() {
                images[x] = tgt[e.map.apply(pos)];
            }
        }
        Ok(FiniteMap::from_parts(p.n(), images))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(v: &[usize]) -> FiniteMap {
        FiniteMap::endo(v.to_vec()).unwrap()
    }

    fn p22() -> Partition {
        Partition::new(4, vec![vec![0, 1], vec![2, 3]]).unwrap()
    }

    #[test]
    fn preserves_examples() {
        let p = p22();
        assert!(p.preserves(&m(&[2, 3, 0, 0])).unwrap());
        assert!(p.preserves(&FiniteMap::identity(4)).unwrap());
        assert!(!p.preserves(&m(&[2, 3, 3, 0])).unwrap());
        assert!(p.preserves(&FiniteMap::identity(3)).is_err());
    }

    #[test]
    fn character_examples() {
        let p = p22();
        assert_eq!(p.character(&m(&[2, 3, 0, 0])).unwrap(), m(&[1, 0]));
        assert_eq!(
            p.character(&FiniteMap::identity(4)).unwrap(),
            FiniteMap::identity(2)
        );
        assert_eq!(p.character(&m(&[0, 0, 0, 0])).unwrap(), m(&[0, 0]));
        assert!(p.character(&m(&[2, 3, 3, 0])).is_err());
    }

    #[test]
    fn block_map_examples() {
        let p = p22();
        let d = p.block_maps(&m(&[2, 3, 0, 0])).unwrap();
        assert_eq!((d.entries[0].source, d.entries[0].target), (0, 1));
        assert_eq!(d.entries[0].map, m(&[0, 1]));
        assert_eq!((d.entries[1].source, d.entries[1].target), (1, 0));
        assert_eq!(d.entries[1].map, m(&[0, 0]));

        let d = p.block_maps(&FiniteMap::identity(4)).unwrap();
        assert!(d.entries.iter().all(|e| e.map == FiniteMap::identity(2)));

        let d = p.block_maps(&m(&[0, 0, 2, 2])).unwrap();
        assert_eq!(d.entries[0].map, m(&[0, 0]));
        assert_eq!(d.entries[1].map, m(&[0, 0]));
    }

    #[test]
    fn unit_bijection_examples() {
        let p = p22();
        assert!(p.is_unit_bijection(&m(&[2, 3, 0, 1])).unwrap());
        assert!(p.is_unit_bijection(&FiniteMap::identity(4)).unwrap());
        assert!(!p.is_unit_bijection(&m(&[2, 2, 0, 1])).unwrap());
        // bijective block maps between blocks of different sizes are impossible
        let q = Partition::new(3, vec![vec![0], vec![1, 2]]).unwrap();
        assert!(!q.is_unit_bijection(&m(&[1, 0, 0])).unwrap());
    }

    #[test]
    fn e_preserving_examples() {
        let p = p22();
        assert!(p
            .is_e_preserving(&FiniteMap::new(4, vec![1, 2, 3]).unwrap(), &[0, 2, 3])
            .unwrap());
        assert!(p
            .is_e_preserving(&FiniteMap::new(4, vec![3, 0]).unwrap(), &[0, 2])
            .unwrap());
        assert!(!p
            .is_e_preserving(&FiniteMap::new(4, vec![0, 2]).unwrap(), &[2, 3])
            .unwrap());
        assert!(p
            .is_e_preserving(&FiniteMap::new(4, vec![0]).unwrap(), &[0, 1])
            .is_err());
    }

    #[test]
    fn lift_examples() {
        let p = p22();
        assert_eq!(
            p.lift_character(&m(&[0, 0]), None).unwrap(),
            m(&[0, 0, 0, 0])
        );
        assert_eq!(
            p.lift_character(&FiniteMap::identity(2), None).unwrap(),
            m(&[0, 0, 2, 2])
        );
        assert_eq!(
            p.lift_character(&m(&[1, 0]), None).unwrap(),
            m(&[2, 2, 0, 0])
        );
        assert_eq!(
            p.lift_character(&m(&[1, 0]), Some(&[1, 3])).unwrap(),
            m(&[3, 3, 1, 1])
        );
        assert!(p.lift_character(&m(&[1, 0]), Some(&[2, 3])).is_err());
        assert!(p.lift_character(&FiniteMap::identity(3), None).is_err());
    }

    #[test]
    fn pi_restricted_examples() {
        let f = m(&[2, 3, 0, 0]);
        assert_eq!(pi_restricted(&f, &[2, 3]).unwrap(), vec![vec![2, 3]]);
        assert_eq!(
            pi_restricted(&f, &[0, 1, 2, 3]).unwrap(),
            f.kernel_partition().classes().to_vec()
        );
        assert_eq!(
            pi_restricted(&f, &[0, 2]).unwrap(),
            vec![vec![0], vec![2, 3]]
        );
    }

    #[test]
    fn reassembly_round_trip_exhaustive() {
        let p = Partition::new(4, vec![vec![0, 2], vec![1], vec![3]]).unwrap();
        for f in FiniteMap::all_maps(4, 4) {
            if p.preserves(&f).unwrap() {
                assert_eq!(p.block_maps(&f).unwrap().reassemble(&p).unwrap(), f);
            }
        }
    }

    #[test]
    fn triviality() {
        assert!(Partition::singletons(3).unwrap().is_trivial());
        assert!(Partition::single_block(3).unwrap().is_trivial());
        assert!(!Partition::from_labels(&[0, 0, 1]).unwrap().is_trivial());
        assert!(Partition::new(0, vec![]).is_err());
    }

    #[test]
    fn serde_round_trip() {
        let p = Partition::new(4, vec![vec![2, 3], vec![1, 0]]).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"n":4,"blocks":[[2,3],[0,1]]}"#);
        let back: Partition = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
        assert!(serde_json::from_str::<Partition>(r#"{"n":3,"blocks":[[0,1]]}"#).is_err());
    }
}
