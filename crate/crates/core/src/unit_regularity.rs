//! Unit-regular elements and semigroups.

use crate::ensemble::{Ensemble, Instance};
use crate::error::{precondition, Error, Result};
use crate::maps::FiniteMap;
use crate::mode::Mode;
use crate::regularity::Profile;

/// The first unit `u` in enumeration order with `fuf = f`.
pub fn is_unit_regular_oracle(f: &FiniteMap, ens: &Ensemble) -> Result<Option<FiniteMap>> {
    let i = ens.require_member(f)?;
    let units = ens.units()?;
    Ok(unit_oracle_index(ens, &units, i).map(|u| ens.member(u).clone()))
}

pub(crate) fn unit_oracle_index(ens: &Ensemble, units: &[usize], i: usize) -> Option<usize> {
    units
        .iter()
        .copied()
        .find(|&u| ens.mul(ens.mul(i, u), i) == i)
}

/// Every unit `α` of the index monoid satisfying the unit-regular-element conditions for `f`.
pub fn unit_regular_witnesses(f: &FiniteMap, ens: &Ensemble) -> Result<Vec<FiniteMap>> {
    let i = ens.require_member(f)?;
    Ok(unit_witness_indices(ens, i)?
        .into_iter()
        .map(|a| ens.si().element(a).clone())
        .collect())
}

pub(crate) fn unit_witness_indices(ens: &Ensemble, i: usize) -> Result<Vec<usize>> {
    let index_units = ens.si().units()?;
    let profile = Profile::new(ens, i);
    Ok(index_units
        .into_iter()
        .filter(|&a| unit_witness(ens, &profile, a))
        .collect())
}

fn unit_witness(ens: &Ensemble, profile: &Profile, a: usize) -> bool {
    if !profile.regular_witness(ens, a) {
        return false;
    }
    let p = ens.partition();
    let alpha = ens.si().element(a);
    if (0..p.block_count()).any(|i| p.block_size(i) != p.block_size(alpha.apply(i))) {
        return false;
    }
    (0..p.block_count())
        .filter(|&i| profile.in_chi_image[i])
        .all(|i| {
            let j = alpha.apply(i);
            let (c, d) = p.restrict_unchecked(profile.f, j, i).collapse_defect();
            c == d
        })
}

/// A unit `g` with character `alpha` and `fgf = f`, assembled block by block.
pub fn build_unit_inverse(f: &FiniteMap, alpha: &FiniteMap, ens: &Ensemble) -> Result<FiniteMap> {
    let idx = ens.require_member(f)?;
    let a = ens
        .si()
        .index_of(alpha)
        .ok_or_else(|| precondition!("{alpha} is not in the index semigroup"))?;
    if !ens.si().units()?.contains(&a) {
        return Err(precondition!("{alpha} is not a unit of the index monoid"));
    }
    let profile = Profile::new(ens, idx);
    if !unit_witness(ens, &profile, a) {
        return Err(precondition!(
            "{alpha} does not satisfy the unit-regular-element conditions for {f}"
        ));
    }
    let p = ens.partition();
    let mut images = vec![0; p.n()];
    for i in 0..p.block_count() {
        let j = alpha.apply(i);
        let (source, target) = (p.block(i), p.block(j));
        if profile.in_chi_image[i] {
            // f sends X_j into X_i
            let mut transversal = Vec::new();
            let mut defect = Vec::new();
            for &x in source {
                match target.iter().find(|&&y| f.apply(y) == x) {
                    Some(&y) => {
                        images[x] = y;
                        transversal.push(y);
                    }
                    None => defect.push(x),
                }
            }
            let collapsed = target.iter().filter(|y| !transversal.contains(y));
            for (&x, &y) in defect.iter().zip(collapsed) {
                images[x] = y;
            }
        } else {
            for (&x, &y) in source.iter().zip(target) {
                images[x] = y;
            }
        }
    }
    let g = FiniteMap::from_parts(p.n(), images);
    if f.then(&g).then(f) != *f
        || ens.index_of(&g).is_none()
        || !p.is_unit_bijection(&g)?
        || p.character(&g)? != *alpha
    {
        return Err(Error::Internal(format!(
            "constructed unit inverse {g} of {f} failed validation"
        )));
    }
    Ok(g)
}

/// A map from `size_x` points to `size_y` points whose collapse and defect differ.
pub fn make_c_neq_d_map(size_x: usize, size_y: usize) -> Result<FiniteMap> {
    if size_x == 0 || size_y == 0 {
        return Err(precondition!("both sets must be nonempty"));
    }
    if size_x == size_y {
        return Err(precondition!(
            "every map between sets of equal finite size has equal collapse and defect"
        ));
    }
    FiniteMap::new(size_y, (0..size_x).map(|x| x.min(size_y - 1)).collect())
}

/// The structural conditions for the whole semigroup to be unit-regular.
pub fn unit_regular_semigroup_by_theorem(inst: &Instance) -> Result<bool> {
    let si = inst.si();
    let p = inst.partition();
    if !si.is_unit_regular()? {
        return Ok(false);
    }
    let sizes_kept = si.units()?.into_iter().all(|a| {
        let alpha = si.element(a);
        (0..p.block_count()).all(|i| p.block_size(i) == p.block_size(alpha.apply(i)))
    });
    if !sizes_kept {
        return Ok(false);
    }
    Ok(si.elements().iter().all(|beta| {
        let mut hits = vec![0usize; p.block_count()];
        for &j in beta.images() {
            hits[j] += 1;
        }
        (0..p.block_count()).all(|i| hits[i] < 2 || p.block_size(i) == 1)
    }))
}

pub fn unit_regular_semigroup_by_oracle(ens: &Ensemble) -> Result<bool> {
    let units = ens.units()?;
    Ok((0..ens.len()).all(|i| unit_oracle_index(ens, &units, i).is_some()))
}

pub fn is_unit_regular_semigroup(ens: &Ensemble, mode: Mode) -> Result<bool> {
    if !ens.si().has_identity() {
        return Err(precondition!(
            "the index semigroup does not contain the identity"
        ));
    }
    mode.decide(
        "unit-regular semigroup",
        || unit_regular_semigroup_by_oracle(ens),
        || unit_regular_semigroup_by_theorem(ens.instance()),
    )
}

/// Unit-regularity of a member; needs the identity in the index semigroup.
pub fn is_unit_regular_element(f: &FiniteMap, ens: &Ensemble, mode: Mode) -> Result<bool> {
    mode.decide(
        &format!("unit-regular element {f}"),
        || Ok(is_unit_regular_oracle(f, ens)?.is_some()),
        || Ok(!unit_regular_witnesses(f, ens)?.is_empty()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::IndexSemigroup;
    use crate::partition::Partition;

    fn m(v: &[usize]) -> FiniteMap {
        FiniteMap::endo(v.to_vec()).unwrap()
    }

    fn ens(blocks: Vec<Vec<usize>>, si: IndexSemigroup) -> Ensemble {
        let n = blocks.iter().map(Vec::len).sum();
        Ensemble::new(Instance::new(Partition::new(n, blocks).unwrap(), si).unwrap()).unwrap()
    }

    fn full22() -> Ensemble {
        ens(
            vec![vec![0, 1], vec![2, 3]],
            IndexSemigroup::full(2).unwrap(),
        )
    }

    #[test]
    fn oracle_examples() {
        let e = full22();
        assert_eq!(
            is_unit_regular_oracle(&m(&[2, 3, 0, 0]), &e).unwrap(),
            Some(m(&[2, 3, 0, 1]))
        );
        let id = FiniteMap::identity(4);
        assert_eq!(is_unit_regular_oracle(&id, &e).unwrap(), Some(id));
        let zero = m(&[0, 0, 0, 0]);
        let found = is_unit_regular_oracle(&zero, &e).unwrap().is_some();
        assert_eq!(
            found,
            !unit_regular_witnesses(&zero, &e).unwrap().is_empty()
        );
    }

    #[test]
    fn witness_examples() {
        let e = full22();
        assert_eq!(
            unit_regular_witnesses(&m(&[2, 3, 0, 0]), &e).unwrap(),
            vec![m(&[1, 0])]
        );
        assert!(unit_regular_witnesses(&FiniteMap::identity(4), &e)
            .unwrap()
            .contains(&FiniteMap::identity(2)));

        // block 0 has one point, block 1 has two; the character swaps them
        let uneven = ens(
            vec![vec![0], vec![1, 2]],
            IndexSemigroup::symmetric(2).unwrap(),
        );
        let block_map = make_c_neq_d_map(2, 1).unwrap();
        assert_eq!(block_map.images(), &[0, 0]);
        let f = m(&[1, 0, 0]);
        assert!(unit_regular_witnesses(&f, &uneven).unwrap().is_empty());
        assert!(is_unit_regular_oracle(&f, &uneven).unwrap().is_none());
    }

    #[test]
    fn unit_inverse_examples() {
        let e = full22();
        assert_eq!(
            build_unit_inverse(&m(&[2, 3, 0, 0]), &m(&[1, 0]), &e).unwrap(),
            m(&[2, 3, 0, 1])
        );
        let id = FiniteMap::identity(4);
        assert_eq!(
            build_unit_inverse(&id, &FiniteMap::identity(2), &e).unwrap(),
            id
        );
        assert!(matches!(
            build_unit_inverse(&m(&[2, 3, 0, 0]), &m(&[0, 0]), &e),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn unit_inverse_always_validates() {
        let e = ens(
            vec![vec![0, 1], vec![2], vec![3]],
            IndexSemigroup::full(3).unwrap(),
        );
        let mut built = 0;
        for f in e.members() {
            for alpha in unit_regular_witnesses(f, &e).unwrap() {
                let g = build_unit_inverse(f, &alpha, &e).unwrap();
                assert!(e.partition().is_unit_bijection(&g).unwrap());
                built += 1;
            }
        }
        assert!(built > 0);
    }

    #[test]
    fn c_neq_d_examples() {
        let f = make_c_neq_d_map(2, 3).unwrap();
        assert_eq!((f.images(), f.collapse_defect()), (&[0, 1][..], (0, 1)));
        let f = make_c_neq_d_map(3, 2).unwrap();
        assert_eq!((f.images(), f.collapse_defect()), (&[0, 1, 1][..], (1, 0)));
        let f = make_c_neq_d_map(1, 2).unwrap();
        assert_eq!((f.images(), f.collapse_defect()), (&[0][..], (0, 1)));
        assert!(matches!(
            make_c_neq_d_map(2, 2),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn semigroup_examples() {
        for k in 1..=3 {
            let singles = ens(
                (0..k).map(|x| vec![x]).collect(),
                IndexSemigroup::full(k).unwrap(),
            );
            assert!(is_unit_regular_semigroup(&singles, Mode::Both).unwrap());
        }
        assert!(!is_unit_regular_semigroup(&full22(), Mode::Both).unwrap());
        let sym = ens(
            vec![vec![0, 1], vec![2, 3]],
            IndexSemigroup::symmetric(2).unwrap(),
        );
        is_unit_regular_semigroup(&sym, Mode::Both).unwrap();
        let no_id = IndexSemigroup::closure_from_generators(&[m(&[0, 0])]).unwrap();
        let e = ens(vec![vec![0, 1], vec![2, 3]], no_id);
        assert!(matches!(
            is_unit_regular_semigroup(&e, Mode::Oracle),
            Err(Error::Precondition(_))
        ));
    }
}
