//! Total maps between finite index ranges and the partitions they induce.
//!
//! Maps compose left to right: `f.compose(&g)` sends `x` to `g(f(x))`.
//! All points are dense 0-based indices.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{invalid, Error, Result};

/// A total map `[0, domain_size) -> [0, codomain_size)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteMap {
    domain_size: usize,
    codomain_size: usize,
    images: Vec<usize>,
}

impl FiniteMap {
    pub fn new(codomain_size: usize, images: Vec<usize>) -> Result<Self> {
        if let Some(bad) = images.iter().find(|&&y| y >= codomain_size) {
            return Err(invalid!(
                "image {bad} out of range for codomain of size {codomain_size}"
            ));
        }
        Ok(Self {
            domain_size: images.len(),
            codomain_size,
            images,
        })
    }

    /// A self-map of `[0, images.len())`.
    pub fn endo(images: Vec<usize>) -> Result<Self> {
        Self::new(images.len(), images)
    }

    pub fn identity(n: usize) -> Self {
        Self {
            domain_size: n,
            codomain_size: n,
            images: (0..n).collect(),
        }
    }

    pub fn constant(n: usize, value: usize) -> Result<Self> {
        Self::new(n, vec![value; n])
    }

    /// Caller guarantees every image is below `codomain_size`.
    pub(crate) fn from_parts(codomain_size: usize, images: Vec<usize>) -> Self {
        debug_assert!(images.iter().all(|&y| y < codomain_size));
        Self {
            domain_size: images.len(),
            codomain_size,
            images,
        }
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    pub fn codomain_size(&self) -> usize {
        self.codomain_size
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn is_endomap(&self) -> bool {
        self.domain_size == self.codomain_size
    }

    /// Left-to-right composition: the result sends `x` to `g(self(x))`.
    pub fn compose(&self, g: &FiniteMap) -> Result<FiniteMap> {
        if self.codomain_size != g.domain_size {
            return Err(invalid!(
                "cannot compose a map into {} points with a map from {} points",
                self.codomain_size,
                g.domain_size
            ));
        }
        Ok(self.then(g))
    }

    /// Unchecked composition for callers that already know the sizes agree.
    #[inline]
    pub(crate) fn then(&self, g: &FiniteMap) -> FiniteMap {
        debug_assert_eq!(self.codomain_size, g.domain_size);
        FiniteMap {
            domain_size: self.domain_size,
            codomain_size: g.codomain_size,
            images: self.images.iter().map(|&y| g.images[y]).collect(),
        }
    }

    /// The image set, sorted ascending.
    pub fn image(&self) -> Vec<usize> {
        let mut hit = vec![false; self.codomain_size];
        for &y in &self.images {
            hit[y] = true;
        }
        hit.iter()
            .enumerate()
            .filter_map(|(y, &h)| h.then_some(y))
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.image().len()
    }

    /// Sorted fibre `y f^-1`.
    pub fn preimage(&self, y: usize) -> Vec<usize> {
        self.images
            .iter()
            .enumerate()
            .filter_map(|(x, &fx)| (fx == y).then_some(x))
            .collect()
    }

    /// The partition of the domain into the fibres of the map.
    pub fn kernel_partition(&self) -> SetPartition {
        let mut label_of_value = vec![usize::MAX; self.codomain_size];
        let mut labels = Vec::with_capacity(self.domain_size);
        let mut next = 0;
        for &y in &self.images {
            if label_of_value[y] == usize::MAX {
                label_of_value[y] = next;
                next += 1;
            }
            labels.push(label_of_value[y]);
        }
        SetPartition::from_canonical_labels(labels, next)
    }

    /// The least point of every kernel class, sorted ascending.
    pub fn canonical_transversal(&self) -> Vec<usize> {
        let mut seen = vec![false; self.codomain_size];
        let mut out = Vec::new();
        for (x, &y) in self.images.iter().enumerate() {
            if !seen[y] {
                seen[y] = true;
                out.push(x);
            }
        }
        out
    }

    /// `(c, d)`: points outside the transversal and codomain points missed.
    pub fn collapse_defect(&self) -> (usize, usize) {
        let rank = self.rank();
        (self.domain_size - rank, self.codomain_size - rank)
    }

    pub fn is_idempotent(&self) -> Result<bool> {
        if !self.is_endomap() {
            return Err(invalid!(
                "idempotence needs a self-map, got {} -> {} points",
                self.domain_size,
                self.codomain_size
            ));
        }
        Ok(self.images.iter().all(|&y| self.images[y] == y))
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.domain_size
    }

    pub fn is_bijection(&self) -> bool {
        self.is_endomap() && self.is_injective()
    }

    /// Two-sided inverse of a bijection.
    pub fn inverse(&self) -> Option<FiniteMap> {
        if !self.is_bijection() {
            return None;
        }
        let mut inv = vec![0; self.domain_size];
        for (x, &y) in self.images.iter().enumerate() {
            inv[y] = x;
        }
        Some(FiniteMap::from_parts(self.domain_size, inv))
    }

    /// All maps `[0, domain) -> [0, codomain)` in lexicographic order.
    pub fn all_maps(domain: usize, codomain: usize) -> AllMaps {
        AllMaps {
            codomain,
            current: (codomain > 0 || domain == 0).then(|| vec![0; domain]),
        }
    }
}

impl fmt::Display for FiniteMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, y) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{y}")?;
        }
        write!(f, "]")
    }
}

/// Parses `2,3,0,0` or `[2,3,0,0]` as a self-map.
impl FromStr for FiniteMap {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let body = s
            .trim()
            .trim_start_matches('[')
            .trim_end_matches(']')
            .trim();
        if body.is_empty() {
            return FiniteMap::endo(Vec::new());
        }
        let images = body
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad image entry {t:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        FiniteMap::endo(images)
    }
}

/// Serialized as the bare image sequence; deserialized as a self-map.
impl Serialize for FiniteMap {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.images.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FiniteMap {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let images = Vec::<usize>::deserialize(deserializer)?;
        FiniteMap::endo(images).map_err(serde::de::Error::custom)
    }
}

/// Lexicographic enumeration of every map between two finite ranges.
pub struct AllMaps {
    codomain: usize,
    current: Option<Vec<usize>>,
}

impl Iterator for AllMaps {
    type Item = FiniteMap;

    fn next(&mut self) -> Option<FiniteMap> {
        let cur = self.current.as_mut()?;
        let out = FiniteMap::from_parts(self.codomain, cur.clone());
        let mut pos = cur.len();
        loop {
            if pos == 0 {
                self.current = None;
                break;
            }
            pos -= 1;
            cur[pos] += 1;
            if cur[pos] < self.codomain {
                break;
            }
            cur[pos] = 0;
        }
        Some(out)
    }
}

/// A partition of `[0, ground_size)` in canonical form: classes sorted
/// internally and ordered by their least element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetPartition {
    ground_size: usize,
    classes: Vec<Vec<usize>>,
}

impl SetPartition {
    pub fn new(ground_size: usize, classes: Vec<Vec<usize>>) -> Result<Self> {
        let mut owner = vec![usize::MAX; ground_size];
        for (c, class) in classes.iter().enumerate() {
            if class.is_empty() {
                return Err(invalid!("empty class in partition"));
            }
            for &x in class {
                if x >= ground_size {
                    return Err(invalid!(
                        "point {x} outside ground set of size {ground_size}"
                    ));
                }
                if owner[x] != usize::MAX {
                    return Err(invalid!("point {x} appears in two classes"));
                }
                owner[x] = c;
            }
        }
        if let Some(x) = owner.iter().position(|&o| o == usize::MAX) {
            return Err(invalid!("point {x} is not covered by any class"));
        }
        let mut classes: Vec<Vec<usize>> = classes
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .collect();
        classes.sort_by_key(|c| c[0]);
        Ok(Self {
            ground_size,
            classes,
        })
    }

    /// Labels must be a restricted growth string (first occurrences in order).
    fn from_canonical_labels(labels: Vec<usize>, count: usize) -> Self {
        let mut classes = vec![Vec::new(); count];
        for (x, &l) in labels.iter().enumerate() {
            classes[l].push(x);
        }
        Self {
            ground_size: labels.len(),
            classes,
        }
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// `class_of[x]` is the index of the class containing `x`.
    pub fn class_index(&self) -> Vec<usize> {
        let mut out = vec![0; self.ground_size];
        for (c, class) in self.classes.iter().enumerate() {
            for &x in class {
                out[x] = c;
            }
        }
        out
    }

    /// True iff every class of `self` sits inside a class of `other`.
    pub fn refines(&self, other: &SetPartition) -> Result<bool> {
        if self.ground_size != other.ground_size {
            return Err(invalid!(
                "partitions of {} and {} points are not comparable",
                self.ground_size,
                other.ground_size
            ));
        }
        let owner = other.class_index();
        Ok(self
            .classes
            .iter()
            .all(|c| c.iter().all(|&x| owner[x] == owner[c[0]])))
    }
}

impl Serialize for SetPartition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.classes.serialize(serializer)
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, c) in self.classes.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{{")?;
            for (j, x) in c.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "}}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(v: &[usize]) -> FiniteMap {
        FiniteMap::endo(v.to_vec()).unwrap()
    }

    fn sp(n: usize, c: &[&[usize]]) -> SetPartition {
        SetPartition::new(n, c.iter().map(|c| c.to_vec()).collect()).unwrap()
    }

    #[test]
    fn compose_examples() {
        let f = m(&[2, 3, 0, 0]);
        assert_eq!(f.compose(&f).unwrap(), m(&[0, 0, 2, 2]));
        let g = m(&[3, 1, 1, 0]);
        assert_eq!(FiniteMap::identity(4).compose(&g).unwrap(), g);
        assert_eq!(m(&[1, 1]).compose(&m(&[0, 1])).unwrap(), m(&[1, 1]));
    }

    #[test]
    fn compose_rejects_mismatch() {
        let f = FiniteMap::new(3, vec![0, 2]).unwrap();
        assert!(matches!(
            f.compose(&FiniteMap::identity(2)),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn out_of_range_image_rejected() {
        assert!(FiniteMap::new(2, vec![0, 2]).is_err());
    }

    #[test]
    fn image_examples() {
        assert_eq!(m(&[2, 3, 0, 0]).image(), vec![0, 2, 3]);
        assert_eq!(FiniteMap::identity(3).image(), vec![0, 1, 2]);
        assert_eq!(m(&[1, 1, 1]).image(), vec![1]);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(
            m(&[2, 3, 0, 0]).kernel_partition(),
            sp(4, &[&[0], &[1], &[2, 3]])
        );
        assert_eq!(
            FiniteMap::identity(3).kernel_partition(),
            sp(3, &[&[0], &[1], &[2]])
        );
        assert_eq!(m(&[1, 1, 1]).kernel_partition(), sp(3, &[&[0, 1, 2]]));
    }

    #[test]
    fn transversal_examples() {
        assert_eq!(m(&[2, 3, 0, 0]).canonical_transversal(), vec![0, 1, 2]);
        assert_eq!(m(&[1, 1, 1, 1]).canonical_transversal(), vec![0]);
        assert_eq!(
            FiniteMap::identity(4).canonical_transversal(),
            vec![0, 1, 2, 3]
        );
    }

    #[test]
    fn collapse_defect_examples() {
        assert_eq!(m(&[0, 0]).collapse_defect(), (1, 1));
        assert_eq!(m(&[1, 0, 2]).collapse_defect(), (0, 0));
        assert_eq!(
            FiniteMap::new(3, vec![0, 1]).unwrap().collapse_defect(),
            (0, 1)
        );
    }

    #[test]
    fn refines_examples() {
        let p = sp(4, &[&[0], &[1], &[2, 3]]);
        let q = sp(4, &[&[0, 1], &[2, 3]]);
        assert!(p.refines(&q).unwrap());
        assert!(p.refines(&p).unwrap());
        assert!(!sp(2, &[&[0, 1]]).refines(&sp(2, &[&[0], &[1]])).unwrap());
        assert!(p.refines(&sp(3, &[&[0, 1, 2]])).is_err());
    }

    #[test]
    fn idempotent_examples() {
        assert!(m(&[0, 0, 2, 2]).is_idempotent().unwrap());
        assert!(FiniteMap::identity(4).is_idempotent().unwrap());
        assert!(!m(&[2, 3, 0, 0]).is_idempotent().unwrap());
        assert!(FiniteMap::new(3, vec![0, 1])
            .unwrap()
            .is_idempotent()
            .is_err());
    }

    #[test]
    fn set_partition_is_canonical() {
        let a = sp(4, &[&[3, 2], &[1, 0]]);
        let b = sp(4, &[&[0, 1], &[2, 3]]);
        assert_eq!(a, b);
        assert!(SetPartition::new(3, vec![vec![0], vec![0, 1, 2]]).is_err());
        assert!(SetPartition::new(3, vec![vec![0, 1]]).is_err());
    }

    #[test]
    fn parse_and_display() {
        let f: FiniteMap = "2,3,0,0".parse().unwrap();
        assert_eq!(f, m(&[2, 3, 0, 0]));
        assert_eq!(f.to_string(), "[2,3,0,0]");
        assert_eq!("[1, 0]".parse::<FiniteMap>().unwrap(), m(&[1, 0]));
        assert!("1,x".parse::<FiniteMap>().is_err());
        assert!("3,0".parse::<FiniteMap>().is_err());
    }

    #[test]
    fn all_maps_counts() {
        assert_eq!(FiniteMap::all_maps(3, 2).count(), 8);
        assert_eq!(FiniteMap::all_maps(0, 2).count(), 1);
        assert_eq!(FiniteMap::all_maps(2, 0).count(), 0);
        let v: Vec<_> = FiniteMap::all_maps(2, 2)
            .map(|f| f.images().to_vec())
            .collect();
        assert_eq!(v, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn composition_associative_exhaustive_on_three_points() {
        let all: Vec<_> = FiniteMap::all_maps(3, 3).collect();
        for f in &all {
            for g in &all {
                let fg = f.then(g);
                for h in all.iter().step_by(4) {
                    assert_eq!(fg.then(h), f.then(&g.then(h)));
                }
            }
        }
    }

    #[test]
    fn endomap_collapse_equals_defect_exhaustive() {
        for n in 1..=5 {
            for f in FiniteMap::all_maps(n, n) {
                let (c, d) = f.collapse_defect();
                assert_eq!(c, d, "{f}");
                assert_eq!(c, n - f.rank());
            }
        }
    }

    fn arb_map(dom: usize, cod: usize) -> impl Strategy<Value = FiniteMap> {
        proptest::collection::vec(0..cod, dom).prop_map(move |v| FiniteMap::new(cod, v).unwrap())
    }

    fn arb_triple() -> impl Strategy<Value = (FiniteMap, FiniteMap, FiniteMap)> {
        (1usize..6, 1usize..6, 1usize..6, 1usize..6)
            .prop_flat_map(|(a, b, c, d)| (arb_map(a, b), arb_map(b, c), arb_map(c, d)))
    }

    proptest! {
        #[test]
        fn compose_is_associative((f, g, h) in arb_triple()) {
            let left = f.compose(&g).unwrap().compose(&h).unwrap();
            let right = f.compose(&g.compose(&h).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn counting_identities((f, _g, _h) in arb_triple()) {
            let (_, d) = f.collapse_defect();
            prop_assert_eq!(f.image().len() + d, f.codomain_size());
            prop_assert_eq!(f.canonical_transversal().len(), f.image().len());
        }

        #[test]
        fn kernel_refines_kernel_of_composite((f, g, _h) in arb_triple()) {
            let fg = f.compose(&g).unwrap();
            prop_assert!(f.kernel_partition().refines(&fg.kernel_partition()).unwrap());
        }

        #[test]
        fn idempotent_iff_fixes_image(v in proptest::collection::vec(0usize..5, 5)) {
            let f = FiniteMap::endo(v).unwrap();
            let fixes = f.image().iter().all(|&y| f.apply(y) == y);
            prop_assert_eq!(f.is_idempotent().unwrap(), fixes);
            prop_assert_eq!(f.is_idempotent().unwrap(), f.then(&f) == f);
        }
    }
}
