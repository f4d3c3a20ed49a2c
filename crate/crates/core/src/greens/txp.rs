//! Green's relations on the full partition-preserving semigroup `T(X,P)` and
//! on `T(X)`, decided from the maps alone.

use crate::bits::PointSet;
use crate::error::{invalid, Error, Result};
use crate::maps::FiniteMap;
use crate::partition::Partition;

use super::theorem::{allowed_sources, block_images, search_image_maps};
use super::{Relation, SearchLimits};

/// Decides `rel` between `f` and `g` in `T(X,P)`.
pub fn txp_green(rel: Relation, f: &FiniteMap, g: &FiniteMap, p: &Partition) -> Result<bool> {
    txp_green_with_limits(rel, f, g, p, SearchLimits::default())
}

pub fn txp_green_with_limits(
    rel: Relation,
    f: &FiniteMap,
    g: &FiniteMap,
    p: &Partition,
    limits: SearchLimits,
) -> Result<bool> {
    for h in [f, g] {
        if h.domain_size() != p.n() || !p.preserves(h)? {
            return Err(invalid!("{h} does not preserve the partition"));
        }
    }
    if p.n() > 64 {
        return Err(invalid!("Green's computations support at most 64 points"));
    }
    let (cf, cg) = (p.character(f)?, p.character(g)?);
    let (fb, gb) = (block_images(p, f), block_images(p, g));
    Ok(match rel {
        Relation::L => covered(&fb, &gb) && covered(&gb, &fb),
        Relation::R => {
            cf.kernel_partition() == cg.kernel_partition()
                && f.kernel_partition() == g.kernel_partition()
        }
        Relation::D => d_holds(p, f, g, &cf, &cg, limits.phi_cap)?,
        Relation::J => j_leq(p, f, g, limits.phi_cap)? && j_leq(p, g, f, limits.phi_cap)?,
    })
}

/// Every `X_i a` lies inside some `X_j b`.
fn covered(a: &[PointSet], b: &[PointSet]) -> bool {
    a.iter().all(|x| b.iter().any(|y| x.is_subset(y)))
}

fn d_holds(
    p: &Partition,
    f: &FiniteMap,
    g: &FiniteMap,
    cf: &FiniteMap,
    cg: &FiniteMap,
    cap: u64,
) -> Result<bool> {
    if f.rank() != g.rank() || cf.rank() != cg.rank() {
        return Ok(false);
    }
    let (kf, kg) = (f.kernel_partition(), g.kernel_partition());
    let (fclasses, gclasses) = (kf.classes(), kg.classes());
    let r = fclasses.len();
    let k = p.block_count();
    let meets = |class: &[usize]| class.iter().fold(0u64, |m, &x| m | 1 << p.block_of(x));
    let fmask: Vec<u64> = fclasses.iter().map(|c| meets(c)).collect();
    let gmask: Vec<u64> = gclasses.iter().map(|c| meets(c)).collect();
    // classes of f and g inside each block
    let f_in: Vec<Vec<usize>> = (0..k)
        .map(|i| (0..r).filter(|&a| fmask[a] >> i & 1 == 1).collect())
        .collect();
    let g_in: Vec<Vec<usize>> = (0..k)
        .map(|i| (0..r).filter(|&c| gmask[c] >> i & 1 == 1).collect())
        .collect();
    let image_cf = cf.image();
    let ker_cg = cg.kernel_partition();
    let mut nodes = 0u64;
    for gamma in FiniteMap::all_maps(k, k) {
        if gamma.image() != image_cf || gamma.kernel_partition() != ker_cg {
            continue;
        }
        // admissible j for each i: j γ = i χf; admissible k: k χf = i γ
        let fwd: Vec<Vec<usize>> = (0..k)
            .map(|i| (0..k).filter(|&j| gamma.apply(j) == cf.apply(i)).collect())
            .collect();
        let bwd: Vec<Vec<usize>> = (0..k)
            .map(|i| (0..k).filter(|&j| cf.apply(j) == gamma.apply(i)).collect())
            .collect();
        let mut phi = vec![usize::MAX; r];
        let mut used = vec![false; r];
        let accept = |phi: &[usize]| {
            let mut inverse = vec![0; r];
            for (a, &c) in phi.iter().enumerate() {
                inverse[c] = a;
            }
            let forward_ok = (0..k).all(|i| {
                fwd[i]
                    .iter()
                    .any(|&j| f_in[i].iter().all(|&a| gmask[phi[a]] >> j & 1 == 1))
            });
            forward_ok
                && (0..k).all(|i| {
                    bwd[i]
                        .iter()
                        .any(|&j| g_in[i].iter().all(|&c| fmask[inverse[c]] >> j & 1 == 1))
                })
        };
        if permute(0, &mut phi, &mut used, &mut nodes, cap, &accept)? {
            return Ok(true);
        }
    }
    Ok(false)
}

fn permute(
    a: usize,
    phi: &mut [usize],
    used: &mut [bool],
    nodes: &mut u64,
    cap: u64,
    accept: &dyn Fn(&[usize]) -> bool,
) -> Result<bool> {
    if a == phi.len() {
        return Ok(accept(phi));
    }
    for c in 0..phi.len() {
        if used[c] {
            continue;
        }
        *nodes += 1;
        if *nodes > cap {
            return Err(Error::ResourceLimit(format!(
                "class pairing search exceeded {cap} steps"
            )));
        }
        phi[a] = c;
        used[c] = true;
        let done = permute(a + 1, phi, used, nodes, cap, accept)?;
        used[c] = false;
        if done {
            return Ok(true);
        }
    }
    Ok(false)
}

fn j_leq(p: &Partition, f: &FiniteMap, g: &FiniteMap, cap: u64) -> Result<bool> {
    let k = p.block_count();
    let mut image_blocks: Vec<usize> = g.image().iter().map(|&y| p.block_of(y)).collect();
    image_blocks.dedup();
    // every assignment of target blocks to the blocks meeting Xg
    let targets: Vec<Vec<usize>> = FiniteMap::all_maps(image_blocks.len(), k)
        .map(|choice| {
            let mut t = vec![0; k];
            for (pos, &b) in image_blocks.iter().enumerate() {
                t[b] = choice.apply(pos);
            }
            t
        })
        .collect();
    let fb = block_images(p, f);
    let mut accept =
        |covers: &[PointSet]| (!allowed_sources(&fb, covers).contains(&0)).then_some(());
    Ok(search_image_maps(p, f, g, &targets, &mut accept, cap)?.is_some())
}

/// Decides `rel` between `f` and `g` in the full transformation monoid `T(X)`.
pub fn full_tx_green(rel: Relation, f: &FiniteMap, g: &FiniteMap) -> Result<bool> {
    if !f.is_endomap() || !g.is_endomap() || f.domain_size() != g.domain_size() {
        return Err(invalid!("{f} and {g} are not self-maps of the same set"));
    }
    Ok(match rel {
        Relation::L => f.image() == g.image(),
        Relation::R => f.kernel_partition() == g.kernel_partition(),
        Relation::D | Relation::J => f.rank() == g.rank(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(v: &[usize]) -> FiniteMap {
        FiniteMap::endo(v.to_vec()).unwrap()
    }

    #[test]
    fn full_tx_criteria() {
        let (f, g) = (m(&[0, 0, 1]), m(&[1, 1, 0]));
        assert!(full_tx_green(Relation::L, &f, &g).unwrap());
        assert!(full_tx_green(Relation::R, &f, &g).unwrap());
        let h = m(&[2, 1, 1]);
        assert!(!full_tx_green(Relation::L, &f, &h).unwrap());
        assert!(!full_tx_green(Relation::R, &f, &h).unwrap());
        assert!(full_tx_green(Relation::D, &f, &h).unwrap());
        assert!(full_tx_green(Relation::J, &f, &h).unwrap());
        assert!(full_tx_green(Relation::D, &f, &m(&[0, 1, 2])).is_ok_and(|b| !b));
        assert!(full_tx_green(Relation::L, &f, &m(&[0, 1])).is_err());
    }

    #[test]
    fn rejects_maps_outside_the_semigroup() {
        let p = Partition::new(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        let bad = m(&[0, 2, 2, 3]);
        assert!(matches!(
            txp_green(Relation::L, &bad, &bad, &p),
            Err(Error::InvalidArgument(_))
        ));
    }
}
