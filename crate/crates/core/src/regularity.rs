//! Regular elements, idempotents, and regular and inverse semigroups.

use crate::bits::PointSet;
use crate::ensemble::{Ensemble, Instance};
use crate::error::{precondition, Error, Result};
use crate::maps::FiniteMap;
use crate::mode::Mode;

/// Image data of one member, shared by the element-level characterizations.
pub(crate) struct Profile<'a> {
    pub(crate) f: &'a FiniteMap,
    pub(crate) chi: usize,
    /// `X_j f` for every block `j`.
    pub(crate) block_image: Vec<PointSet>,
    /// `X_i ∩ Xf` for every block `i`.
    pub(crate) image_in_block: Vec<PointSet>,
    /// Membership of each block index in the image of the character.
    pub(crate) in_chi_image: Vec<bool>,
}

impl<'a> Profile<'a> {
    pub(crate) fn new(ens: &'a Ensemble, idx: usize) -> Self {
        let p = ens.partition();
        let f = ens.member(idx);
        let k = p.block_count();
        let block_image: Vec<PointSet> = (0..k)
            .map(|j| PointSet::from_points(p.n(), p.block(j).iter().map(|&x| f.apply(x))))
            .collect();
        let image = PointSet::from_points(p.n(), f.images().iter().copied());
        let image_in_block = (0..k)
            .map(|i| image.intersection(&PointSet::from_points(p.n(), p.block(i).iter().copied())))
            .collect();
        let chi = ens.character(idx);
        let mut in_chi_image = vec![false; k];
        for &j in chi.images() {
            in_chi_image[j] = true;
        }
        Self {
            f,
            chi: ens.character_index(idx),
            block_image,
            image_in_block,
            in_chi_image,
        }
    }

    /// `χαχ = χ` and `X_i ∩ Xf ⊆ X_{iα} f` for every `i` in the image of `χ`.
    pub(crate) fn regular_witness(&self, ens: &Ensemble, a: usize) -> bool {
        let si = ens.si();
        if si.mul(si.mul(self.chi, a), self.chi) != self.chi {
            return false;
        }
        let alpha = si.element(a);
        (0..self.in_chi_image.len())
            .filter(|&i| self.in_chi_image[i])
            .all(|i| self.image_in_block[i].is_subset(&self.block_image[alpha.apply(i)]))
    }
}

/// The first member `g` in enumeration order with `fgf = f`.
pub fn is_regular_oracle(f: &FiniteMap, ens: &Ensemble) -> Result<Option<FiniteMap>> {
    let i = ens.require_member(f)?;
    Ok(regular_oracle_index(ens, i).map(|g| ens.member(g).clone()))
}

pub(crate) fn regular_oracle_index(ens: &Ensemble, i: usize) -> Option<usize> {
    (0..ens.len()).find(|&g| ens.mul(ens.mul(i, g), i) == i)
}

/// Every `α` in the index semigroup satisfying the regular-element conditions for `f`.
pub fn regular_character_witnesses(f: &FiniteMap, ens: &Ensemble) -> Result<Vec<FiniteMap>> {
    let i = ens.require_member(f)?;
    Ok(regular_witness_indices(ens, i)
        .into_iter()
        .map(|a| ens.si().element(a).clone())
        .collect())
}

pub(crate) fn regular_witness_indices(ens: &Ensemble, i: usize) -> Vec<usize> {
    let profile = Profile::new(ens, i);
    (0..ens.si().len())
        .filter(|&a| profile.regular_witness(ens, a))
        .collect()
}

/// An inner inverse of `f` with character `alpha`, assembled block by block
/// from least preimages and block minima.
pub fn build_inner_inverse(f: &FiniteMap, alpha: &FiniteMap, ens: &Ensemble) -> Result<FiniteMap> {
    let i = ens.require_member(f)?;
    let a = ens
        .si()
        .index_of(alpha)
        .ok_or_else(|| precondition!("{alpha} is not in the index semigroup"))?;
    let profile = Profile::new(ens, i);
    if !profile.regular_witness(ens, a) {
        return Err(precondition!(
            "{alpha} does not satisfy the regular-element conditions for {f}"
        ));
    }
    let p = ens.partition();
    let images = (0..p.n())
        .map(|x| {
            let b = p.block_of(x);
            let target = p.block(alpha.apply(b));
            if profile.in_chi_image[b] && profile.image_in_block[b].contains(x) {
                target
                    .iter()
                    .copied()
                    .find(|&y| f.apply(y) == x)
                    .expect("witness condition guarantees a preimage")
            } else {
                target[0]
            }
        })
        .collect();
    let g = FiniteMap::from_parts(p.n(), images);
    if f.then(&g).then(f) != *f || ens.index_of(&g).is_none() || p.character(&g)? != *alpha {
        return Err(Error::Internal(format!(
            "constructed inner inverse {g} of {f} failed validation"
        )));
    }
    Ok(g)
}

/// Idempotency through the character and block conditions.
pub fn is_idempotent_characterized(f: &FiniteMap, ens: &Ensemble) -> Result<bool> {
    let i = ens.require_member(f)?;
    Ok(idempotent_conditions(ens, i))
}

pub(crate) fn idempotent_conditions(ens: &Ensemble, i: usize) -> bool {
    let si = ens.si();
    let c = ens.character_index(i);
    if si.mul(c, c) != c {
        return false;
    }
    let profile = Profile::new(ens, i);
    let p = ens.partition();
    let chi = si.element(c);
    (0..p.block_count()).all(|b| {
        if profile.in_chi_image[b] {
            p.block(b)
                .iter()
                .all(|&x| profile.f.apply(profile.f.apply(x)) == profile.f.apply(x))
        } else {
            profile.block_image[b].is_subset(&profile.block_image[chi.apply(b)])
        }
    })
}

/// Whether some block index has at least two preimages under `alpha` while
/// its block has more than one point.
fn has_large_collapsed_block(inst: &Instance, alpha: &FiniteMap) -> bool {
    let p = inst.partition();
    let mut hits = vec![0usize; p.block_count()];
    for &j in alpha.images() {
        hits[j] += 1;
    }
    (0..p.block_count()).any(|i| hits[i] >= 2 && p.block_size(i) != 1)
}

/// The structural conditions for the whole semigroup to be regular.
pub fn regular_semigroup_by_theorem(inst: &Instance) -> bool {
    inst.si().is_regular()
        && !inst
            .si()
            .elements()
            .iter()
            .any(|alpha| has_large_collapsed_block(inst, alpha))
}

pub fn regular_semigroup_by_oracle(ens: &Ensemble) -> bool {
    (0..ens.len()).all(|i| regular_oracle_index(ens, i).is_some())
}

pub fn is_regular_semigroup(ens: &Ensemble, mode: Mode) -> Result<bool> {
    mode.decide(
        "regular semigroup",
        || Ok(regular_semigroup_by_oracle(ens)),
        || Ok(regular_semigroup_by_theorem(ens.instance())),
    )
}

/// The structural conditions for the whole semigroup to be an inverse semigroup.
pub fn inverse_semigroup_by_theorem(inst: &Instance) -> bool {
    let si = inst.si();
    let p = inst.partition();
    si.is_inverse()
        && si
            .idempotents()
            .into_iter()
            .all(|e| si.element(e).images().iter().all(|&i| p.block_size(i) == 1))
}

/// Regular with pairwise commuting idempotents.
pub fn inverse_semigroup_by_oracle(ens: &Ensemble) -> bool {
    if !regular_semigroup_by_oracle(ens) {
        return false;
    }
    let idempotents = ens.idempotents();
    idempotents.iter().enumerate().all(|(k, &e)| {
        idempotents[k + 1..]
            .iter()
            .all(|&h| ens.mul(e, h) == ens.mul(h, e))
    })
}

pub fn is_inverse_semigroup(ens: &Ensemble, mode: Mode) -> Result<bool> {
    mode.decide(
        "inverse semigroup",
        || Ok(inverse_semigroup_by_oracle(ens)),
        || Ok(inverse_semigroup_by_theorem(ens.instance())),
    )
}

/// Whether `f` is a member idempotent by definition (`ff = f`).
pub fn is_idempotent(f: &FiniteMap, ens: &Ensemble) -> Result<bool> {
    ens.require_member(f)?;
    f.is_idempotent()
}

/// Regularity of a member, decided by search, by witnesses or by both.
pub fn is_regular_element(f: &FiniteMap, ens: &Ensemble, mode: Mode) -> Result<bool> {
    mode.decide(
        &format!("regular element {f}"),
        || Ok(is_regular_oracle(f, ens)?.is_some()),
        || Ok(!regular_character_witnesses(f, ens)?.is_empty()),
    )
}

pub fn is_idempotent_element(f: &FiniteMap, ens: &Ensemble, mode: Mode) -> Result<bool> {
    mode.decide(
        &format!("idempotent {f}"),
        || is_idempotent(f, ens),
        || is_idempotent_characterized(f, ens),
    )
}
