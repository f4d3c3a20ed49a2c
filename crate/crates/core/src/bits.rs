//! Small dense bit sets over point indices.

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub(crate) struct PointSet {
    words: Vec<u64>,
}

impl PointSet {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            words: vec![0; n.div_ceil(64)],
        }
    }

    pub(crate) fn from_points(n: usize, points: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::new(n);
        for x in points {
            s.insert(x);
        }
        s
    }

    pub(crate) fn insert(&mut self, x: usize) {
        self.words[x / 64] |= 1 << (x % 64);
    }

    pub(crate) fn contains(&self, x: usize) -> bool {
        self.words[x / 64] >> (x % 64) & 1 == 1
    }

    pub(crate) fn is_subset(&self, other: &PointSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub(crate) fn intersection(&self, other: &PointSet) -> PointSet {
        PointSet {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    pub(crate) fn union_with(&mut self, other: &PointSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub(crate) fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * 64 + b)
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_operations() {
        let a = PointSet::from_points(70, [1, 3, 65]);
        let b = PointSet::from_points(70, [1, 2, 3, 65, 69]);
        assert!(a.is_subset(&b));
        assert!(!b.is_subset(&a));
        assert_eq!(b.iter().collect::<Vec<_>>(), vec![1, 2, 3, 65, 69]);
        assert_eq!(a.intersection(&b), a);
        assert_eq!(PointSet::new(5).iter().count(), 0);
        assert!(a.contains(65) && !a.contains(64));
    }
}
