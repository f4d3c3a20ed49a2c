//! Searches for the data in the structural characterizations of L, R, D and
//! J, and the constructions that turn that data into explicit factors.

use std::collections::{HashMap, HashSet};

use crate::bits::PointSet;
use crate::ensemble::{Ensemble, IndexSemigroup};
use crate::error::{precondition, Error, Result};
use crate::maps::FiniteMap;
use crate::partition::Partition;

use super::{Equation, GreenContext, GreenWitness, ImageMap, Relation};

pub(crate) fn block_images(p: &Partition, f: &FiniteMap) -> Vec<PointSet> {
    (0..p.block_count())
        .map(|j| PointSet::from_points(p.n(), p.block(j).iter().map(|&x| f.apply(x))))
        .collect()
}

/// `π(g) ⪯ π(f)`: points with equal `g`-values have equal `f`-values.
pub(crate) fn kernel_refines(g: &FiniteMap, f: &FiniteMap) -> bool {
    let mut value: Vec<Option<usize>> = vec![None; g.codomain_size()];
    (0..g.domain_size()).all(|x| {
        let slot = &mut value[g.apply(x)];
        match *slot {
            None => {
                *slot = Some(f.apply(x));
                true
            }
            Some(v) => v == f.apply(x),
        }
    })
}

/// `x ∈ X_i ↦` some `y ∈ X_{iα}` with `yg = xf`: `x` itself when possible,
/// otherwise the least such `y`.
fn left_factor_raw(
    p: &Partition,
    f: &FiniteMap,
    g: &FiniteMap,
    alpha: &FiniteMap,
) -> Option<FiniteMap> {
    let images = (0..p.n())
        .map(|x| {
            let target = alpha.apply(p.block_of(x));
            if p.block_of(x) == target && g.apply(x) == f.apply(x) {
                return Some(x);
            }
            p.block(target)
                .iter()
                .copied()
                .find(|&y| g.apply(y) == f.apply(x))
        })
        .collect::<Option<Vec<usize>>>()?;
    Some(FiniteMap::from_parts(p.n(), images))
}

/// `x ∈ X_i ∩ Xg ↦ x'f` for the least `g`-preimage `x'`; other points stay
/// put when `iβ = i` and otherwise go to the least point of `X_{iβ}`.
fn right_factor_raw(p: &Partition, f: &FiniteMap, g: &FiniteMap, beta: &FiniteMap) -> FiniteMap {
    let mut first_preimage: Vec<Option<usize>> = vec![None; p.n()];
    for x in (0..p.n()).rev() {
        first_preimage[g.apply(x)] = Some(x);
    }
    let images = (0..p.n())
        .map(|x| match first_preimage[x] {
            Some(pre) => f.apply(pre),
            None => {
                let target = beta.apply(p.block_of(x));
                if target == p.block_of(x) {
                    x
                } else {
                    p.block(target)[0]
                }
            }
        })
        .collect();
    FiniteMap::from_parts(p.n(), images)
}

fn l_condition(
    si: &IndexSemigroup,
    chi_f: usize,
    chi_g: usize,
    fb: &[PointSet],
    gb: &[PointSet],
    a: usize,
) -> bool {
    si.mul(a, chi_g) == chi_f && {
        let alpha = si.element(a);
        (0..fb.len()).all(|i| fb[i].is_subset(&gb[alpha.apply(i)]))
    }
}

fn l_alpha(ctx: &GreenContext, a: usize, b: usize) -> Option<usize> {
    let si = ctx.ens.si();
    let (da, db) = (ctx.data(a), ctx.data(b));
    (0..si.len()).find(|&x| l_condition(si, da.chi, db.chi, &da.block_image, &db.block_image, x))
}

fn r_beta(ctx: &GreenContext, a: usize, b: usize) -> Option<usize> {
    let ens = ctx.ens;
    if !kernel_refines(ens.member(b), ens.member(a)) {
        return None;
    }
    let si = ens.si();
    let (ca, cb) = (ens.character_index(a), ens.character_index(b));
    (0..si.len()).find(|&x| si.mul(cb, x) == ca)
}

fn internal(what: &str, f: &FiniteMap, g: &FiniteMap) -> Error {
    Error::Internal(format!("{what} for ({f}, {g}) failed validation"))
}

pub(crate) fn l_witness(ctx: &GreenContext, a: usize, b: usize) -> Result<Option<GreenWitness>> {
    let (Some(x), Some(y)) = (l_alpha(ctx, a, b), l_alpha(ctx, b, a)) else {
        return Ok(None);
    };
    let ens = ctx.ens;
    let (p, si) = (ens.partition(), ens.si());
    let (f, g) = (ens.member(a), ens.member(b));
    let (alpha, beta) = (si.element(x), si.element(y));
    let (Some(h1), Some(h2)) = (
        left_factor_raw(p, f, g, alpha),
        left_factor_raw(p, g, f, beta),
    ) else {
        return Err(internal("left factors", f, g));
    };
    let mut w = GreenWitness::bare(Relation::L, "theorem");
    w.equations = vec![Equation::new(f, &[&h1, g]), Equation::new(g, &[&h2, f])];
    w.alpha = Some(alpha.clone());
    w.beta = Some(beta.clone());
    check_equations(&w, f, g)?;
    Ok(Some(w))
}

pub(crate) fn r_witness(ctx: &GreenContext, a: usize, b: usize) -> Result<Option<GreenWitness>> {
    let (Some(x), Some(y)) = (r_beta(ctx, a, b), r_beta(ctx, b, a)) else {
        return Ok(None);
    };
    let ens = ctx.ens;
    let (p, si) = (ens.partition(), ens.si());
    let (f, g) = (ens.member(a), ens.member(b));
    let (alpha, beta) = (si.element(x), si.element(y));
    let h1 = right_factor_raw(p, f, g, alpha);
    let h2 = right_factor_raw(p, g, f, beta);
    let mut w = GreenWitness::bare(Relation::R, "theorem");
    w.equations = vec![Equation::new(f, &[g, &h1]), Equation::new(g, &[f, &h2])];
    w.alpha = Some(alpha.clone());
    w.beta = Some(beta.clone());
    check_equations(&w, f, g)?;
    Ok(Some(w))
}

fn check_equations(w: &GreenWitness, f: &FiniteMap, g: &FiniteMap) -> Result<()> {
    if w.equations.iter().all(Equation::holds) {
        Ok(())
    } else {
        Err(internal(&format!("{} witness", w.relation), f, g))
    }
}

/// A factor `h` with character `alpha` and `f = hg`.
pub fn build_left_factor(
    f: &FiniteMap,
    g: &FiniteMap,
    alpha: &FiniteMap,
    ens: &Ensemble,
) -> Result<FiniteMap> {
    let (a, b) = (ens.require_member(f)?, ens.require_member(g)?);
    let (p, si) = (ens.partition(), ens.si());
    let x = si
        .index_of(alpha)
        .ok_or_else(|| precondition!("{alpha} is not in the index semigroup"))?;
    let (fb, gb) = (block_images(p, f), block_images(p, g));
    if !l_condition(
        si,
        ens.character_index(a),
        ens.character_index(b),
        &fb,
        &gb,
        x,
    ) {
        return Err(precondition!(
            "{alpha} does not satisfy the left-ideal conditions for ({f}, {g})"
        ));
    }
    let h = left_factor_raw(p, f, g, alpha).ok_or_else(|| internal("left factor", f, g))?;
    if h.then(g) != *f || ens.index_of(&h).is_none() || p.character(&h)? != *alpha {
        return Err(internal("left factor", f, g));
    }
    Ok(h)
}

/// A factor `h` with character `beta` and `f = gh`.
pub fn build_right_factor(
    f: &FiniteMap,
    g: &FiniteMap,
    beta: &FiniteMap,
    ens: &Ensemble,
) -> Result<FiniteMap> {
    let (a, b) = (ens.require_member(f)?, ens.require_member(g)?);
    let (p, si) = (ens.partition(), ens.si());
    let y = si
        .index_of(beta)
        .ok_or_else(|| precondition!("{beta} is not in the index semigroup"))?;
    if si.mul(ens.character_index(b), y) != ens.character_index(a) {
        return Err(precondition!(
            "the character of {f} is not that of {g} followed by {beta}"
        ));
    }
    if !kernel_refines(g, f) {
        return Err(precondition!(
            "the kernel of {g} does not refine the kernel of {f}"
        ));
    }
    let h = right_factor_raw(p, f, g, beta);
    if g.then(&h) != *f || ens.index_of(&h).is_none() || p.character(&h)? != *beta {
        return Err(internal("right factor", f, g));
    }
    Ok(h)
}

fn map_mask(alpha: &FiniteMap, mask: u64) -> u64 {
    let (mut m, mut out) = (mask, 0u64);
    while m != 0 {
        let i = m.trailing_zeros() as usize;
        m &= m - 1;
        out |= 1 << alpha.apply(i);
    }
    out
}

fn bump(nodes: &mut u64, cap: u64, what: &str) -> Result<()> {
    *nodes += 1;
    if *nodes > cap {
        return Err(Error::ResourceLimit(format!(
            "{what} search exceeded {cap} steps"
        )));
    }
    Ok(())
}

/// Perfect matching of rows to columns within `allowed` (bit rows).
fn perfect_matching(allowed: &[u64], nodes: &mut u64, cap: u64) -> Result<Option<Vec<usize>>> {
    fn augment(
        a: usize,
        allowed: &[u64],
        owner: &mut [Option<usize>],
        seen: &mut u64,
        nodes: &mut u64,
        cap: u64,
    ) -> Result<bool> {
        let mut cands = allowed[a] & !*seen;
        while cands != 0 {
            let c = cands.trailing_zeros() as usize;
            cands &= cands - 1;
            if *seen >> c & 1 == 1 {
                continue;
            }
            bump(nodes, cap, "class pairing")?;
            *seen |= 1 << c;
            let free = match owner[c] {
                None => true,
                Some(other) => augment(other, allowed, owner, seen, nodes, cap)?,
            };
            if free {
                owner[c] = Some(a);
                return Ok(true);
            }
        }
        Ok(false)
    }
    let r = allowed.len();
    let mut owner: Vec<Option<usize>> = vec![None; r];
    for a in 0..r {
        let mut seen = 0u64;
        if !augment(a, allowed, &mut owner, &mut seen, nodes, cap)? {
            return Ok(None);
        }
    }
    let mut phi = vec![0; r];
    for (c, a) in owner.into_iter().enumerate() {
        phi[a.expect("perfect")] = c;
    }
    Ok(Some(phi))
}

/// Kernel classes of a map with the block mask each meets.
struct Classes {
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
    blocks: Vec<u64>,
}

impl Classes {
    fn new(p: &Partition, f: &FiniteMap) -> Self {
        let kernel = f.kernel_partition();
        let blocks = kernel
            .classes()
            .iter()
            .map(|c| c.iter().fold(0u64, |m, &x| m | 1 << p.block_of(x)))
            .collect();
        Self {
            class_of: kernel.class_index(),
            classes: kernel.classes().to_vec(),
            blocks,
        }
    }
}

/// Rows of `M[A][C]`: `α` sends the blocks met by `A` into blocks met by `C`.
fn forward_rows(alpha: &FiniteMap, cf: &Classes, cg: &Classes) -> Vec<u64> {
    cf.blocks
        .iter()
        .map(|&ma| {
            let img = map_mask(alpha, ma);
            cg.blocks
                .iter()
                .enumerate()
                .filter(|(_, &mc)| img & !mc == 0)
                .fold(0u64, |m, (c, _)| m | 1 << c)
        })
        .collect()
}

/// Rows of `N[A][C]`: `β` sends the blocks met by `C` into blocks met by `A`.
fn backward_rows(beta: &FiniteMap, cf: &Classes, cg: &Classes) -> Vec<u64> {
    let img: Vec<u64> = cg.blocks.iter().map(|&mc| map_mask(beta, mc)).collect();
    cf.blocks
        .iter()
        .map(|&ma| {
            img.iter()
                .enumerate()
                .filter(|(_, &ic)| ic & !ma == 0)
                .fold(0u64, |m, (c, _)| m | 1 << c)
        })
        .collect()
}

struct DFound {
    alpha: usize,
    beta: usize,
    gamma: usize,
    phi: Vec<usize>,
}

fn d_search(
    ens: &Ensemble,
    f: &FiniteMap,
    g: &FiniteMap,
    chi_f: usize,
    chi_g: usize,
    cap: u64,
) -> Result<Option<(DFound, Classes, Classes)>> {
    let p = ens.partition();
    let (cf, cg) = (Classes::new(p, f), Classes::new(p, g));
    let r = cf.classes.len();
    if r != cg.classes.len() {
        return Ok(None);
    }
    if r > 64 {
        return Err(Error::ResourceLimit("more than 64 kernel classes".into()));
    }
    let si = ens.si();
    let mut nodes = 0u64;
    for gamma in 0..si.len() {
        if !si.r_related(gamma, chi_g) {
            continue;
        }
        let mut forward: HashMap<Vec<u64>, usize> = HashMap::new();
        let mut forward_order = Vec::new();
        for alpha in (0..si.len()).filter(|&x| si.mul(x, gamma) == chi_f) {
            let rows = forward_rows(si.element(alpha), &cf, &cg);
            if rows.contains(&0) || forward.contains_key(&rows) {
                continue;
            }
            forward.insert(rows.clone(), alpha);
            forward_order.push(rows);
        }
        if forward_order.is_empty() {
            continue;
        }
        let mut backward: HashMap<Vec<u64>, usize> = HashMap::new();
        let mut backward_order = Vec::new();
        for beta in (0..si.len()).filter(|&x| si.mul(x, chi_f) == gamma) {
            let rows = backward_rows(si.element(beta), &cf, &cg);
            if rows.contains(&0) || backward.contains_key(&rows) {
                continue;
            }
            backward.insert(rows.clone(), beta);
            backward_order.push(rows);
        }
        for m in &forward_order {
            for n in &backward_order {
                bump(&mut nodes, cap, "class pairing")?;
                let allowed: Vec<u64> = m.iter().zip(n).map(|(x, y)| x & y).collect();
                if allowed.contains(&0) {
                    continue;
                }
                if let Some(phi) = perfect_matching(&allowed, &mut nodes, cap)? {
                    let found = DFound {
                        alpha: forward[m],
                        beta: backward[n],
                        gamma,
                        phi,
                    };
                    return Ok(Some((found, cf, cg)));
                }
            }
        }
    }
    Ok(None)
}

/// `xh = y` where `y` is the `f`-value of the class paired with the `g`-class of `x`.
fn d_middle_raw(f: &FiniteMap, cf: &Classes, cg: &Classes, phi: &[usize]) -> FiniteMap {
    let mut inverse = vec![0; phi.len()];
    for (a, &c) in phi.iter().enumerate() {
        inverse[c] = a;
    }
    let images = (0..f.domain_size())
        .map(|x| f.apply(cf.classes[inverse[cg.class_of[x]]][0]))
        .collect();
    FiniteMap::from_parts(f.codomain_size(), images)
}

fn pairing(cf: &Classes, cg: &Classes, phi: &[usize]) -> Vec<(Vec<usize>, Vec<usize>)> {
    phi.iter()
        .enumerate()
        .map(|(a, &c)| (cf.classes[a].clone(), cg.classes[c].clone()))
        .collect()
}

pub(crate) fn d_witness(ctx: &GreenContext, a: usize, b: usize) -> Result<Option<GreenWitness>> {
    let ens = ctx.ens;
    let (f, g) = (ens.member(a), ens.member(b));
    let found = d_search(
        ens,
        f,
        g,
        ens.character_index(a),
        ens.character_index(b),
        ctx.limits.phi_cap,
    )?;
    let Some((d, cf, cg)) = found else {
        return Ok(None);
    };
    let (p, si) = (ens.partition(), ens.si());
    let h = d_middle_raw(f, &cf, &cg, &d.phi);
    let gamma = si.element(d.gamma);
    if p.character(&h)? != *gamma || h.kernel_partition() != g.kernel_partition() {
        return Err(internal("middle element", f, g));
    }
    let (alpha, beta) = (si.element(d.alpha), si.element(d.beta));
    let chi_g = ens.character_index(b);
    let to_g = (0..si.len()).find(|&x| si.mul(chi_g, x) == d.gamma);
    let from_g = (0..si.len()).find(|&x| si.mul(d.gamma, x) == chi_g);
    let (Some(p1), Some(p2), Some(x), Some(y)) = (
        left_factor_raw(p, f, &h, alpha),
        left_factor_raw(p, &h, f, beta),
        to_g,
        from_g,
    ) else {
        return Err(internal("middle element factors", f, g));
    };
    let q1 = right_factor_raw(p, &h, g, si.element(x));
    let q2 = right_factor_raw(p, g, &h, si.element(y));
    let mut w = GreenWitness::bare(Relation::D, "theorem");
    w.equations = vec![
        Equation::new(f, &[&p1, &h]),
        Equation::new(&h, &[&p2, f]),
        Equation::new(&h, &[g, &q1]),
        Equation::new(g, &[&h, &q2]),
    ];
    w.alpha = Some(alpha.clone());
    w.beta = Some(beta.clone());
    w.gamma = Some(gamma.clone());
    w.class_pairing = Some(pairing(&cf, &cg, &d.phi));
    w.middle = Some(h);
    check_equations(&w, f, g)?;
    Ok(Some(w))
}

/// The middle element `h` with `f L h R g` determined by `gamma` and a class pairing.
pub fn build_d_middle(
    f: &FiniteMap,
    g: &FiniteMap,
    gamma: &FiniteMap,
    phi: &[(Vec<usize>, Vec<usize>)],
    ens: &Ensemble,
) -> Result<FiniteMap> {
    let (a, b) = (ens.require_member(f)?, ens.require_member(g)?);
    if !ens.si().has_identity() {
        return Err(precondition!(
            "Green's relations require the identity in the index semigroup"
        ));
    }
    let (p, si) = (ens.partition(), ens.si());
    let c = si
        .index_of(gamma)
        .ok_or_else(|| precondition!("{gamma} is not in the index semigroup"))?;
    let (cf, cg) = (Classes::new(p, f), Classes::new(p, g));
    let r = cf.classes.len();
    if r != cg.classes.len() || phi.len() != r || r > 64 {
        return Err(precondition!(
            "the pairing is not a bijection between kernel classes"
        ));
    }
    let mut perm = vec![usize::MAX; r];
    let mut used = vec![false; r];
    for (src, dst) in phi {
        let ai = cf.classes.iter().position(|k| k == src);
        let ci = cg.classes.iter().position(|k| k == dst);
        let (Some(ai), Some(ci)) = (ai, ci) else {
            return Err(precondition!(
                "the pairing names a set that is not a kernel class"
            ));
        };
        if perm[ai] != usize::MAX || used[ci] {
            return Err(precondition!(
                "the pairing is not a bijection between kernel classes"
            ));
        }
        perm[ai] = ci;
        used[ci] = true;
    }
    let (chi_f, chi_g) = (ens.character_index(a), ens.character_index(b));
    let fits = |rows: Vec<u64>| (0..r).all(|k| rows[k] >> perm[k] & 1 == 1);
    let alpha_ok =
        (0..si.len()).any(|x| si.mul(x, c) == chi_f && fits(forward_rows(si.element(x), &cf, &cg)));
    let beta_ok = (0..si.len())
        .any(|x| si.mul(x, chi_f) == c && fits(backward_rows(si.element(x), &cf, &cg)));
    if !si.r_related(c, chi_g) || !alpha_ok || !beta_ok {
        return Err(precondition!(
            "{gamma} and the pairing do not satisfy the D conditions for ({f}, {g})"
        ));
    }
    let h = d_middle_raw(f, &cf, &cg, &perm);
    if p.character(&h)? != *gamma
        || h.kernel_partition() != g.kernel_partition()
        || ens.index_of(&h).is_none()
    {
        return Err(internal("middle element", f, g));
    }
    Ok(h)
}

/// Search over maps `φ: Xg → X` sending each block's share of `Xg` into the
/// block chosen by one of `targets`; `accept` sees `φ(X_j g)` for every `j`.
pub(crate) fn search_image_maps<T>(
    p: &Partition,
    f: &FiniteMap,
    g: &FiniteMap,
    targets: &[Vec<usize>],
    accept: &mut dyn FnMut(&[PointSet]) -> Option<T>,
    cap: u64,
) -> Result<Option<(usize, ImageMap, T)>> {
    let image_f = PointSet::from_points(p.n(), f.images().iter().copied());
    let need: Vec<usize> = image_f.iter().collect();
    let ys = g.image();
    if need.len() > ys.len() {
        return Ok(None);
    }
    let mut slot = vec![usize::MAX; p.n()];
    for (k, &y) in ys.iter().enumerate() {
        slot[y] = k;
    }
    let mut seen: HashSet<Vec<PointSet>> = HashSet::new();
    let mut nodes = 0u64;
    for (ti, target) in targets.iter().enumerate() {
        let cands: Vec<Vec<usize>> = ys
            .iter()
            .map(|&y| {
                let block = p.block(target[p.block_of(y)]);
                let inside: Vec<usize> = block
                    .iter()
                    .copied()
                    .filter(|&z| image_f.contains(z))
                    .collect();
                if inside.is_empty() {
                    vec![block[0]]
                } else {
                    inside
                }
            })
            .collect();
        let mut values = vec![0usize; ys.len()];
        let mut hits = vec![0usize; p.n()];
        let mut found = None;
        dfs(
            0,
            &cands,
            &mut values,
            &mut hits,
            need.len(),
            &image_f,
            &mut nodes,
            cap,
            &mut |values: &[usize]| {
                let covers: Vec<PointSet> = (0..p.block_count())
                    .map(|j| {
                        PointSet::from_points(
                            p.n(),
                            p.block(j).iter().map(|&x| values[slot[g.apply(x)]]),
                        )
                    })
                    .collect();
                if !seen.insert(covers.clone()) {
                    return false;
                }
                match accept(&covers) {
                    Some(t) => {
                        found = Some((values.to_vec(), t));
                        true
                    }
                    None => false,
                }
            },
        )?;
        if let Some((values, t)) = found {
            let map = ImageMap {
                domain: ys.clone(),
                map: FiniteMap::from_parts(p.n(), values),
            };
            return Ok(Some((ti, map, t)));
        }
    }
    Ok(None)
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    k: usize,
    cands: &[Vec<usize>],
    values: &mut [usize],
    hits: &mut [usize],
    uncovered: usize,
    image_f: &PointSet,
    nodes: &mut u64,
    cap: u64,
    leaf: &mut dyn FnMut(&[usize]) -> bool,
) -> Result<bool> {
    if uncovered > cands.len() - k {
        return Ok(false);
    }
    if k == cands.len() {
        return Ok(leaf(values));
    }
    for &v in &cands[k] {
        bump(nodes, cap, "image map")?;
        values[k] = v;
        let fresh = image_f.contains(v) && hits[v] == 0;
        hits[v] += 1;
        let done = dfs(
            k + 1,
            cands,
            values,
            hits,
            uncovered - usize::from(fresh),
            image_f,
            nodes,
            cap,
            leaf,
        )?;
        hits[v] -= 1;
        if done {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Bit mask of the `j` with `X_i f ⊆ covers[j]`, per block `i`.
pub(crate) fn allowed_sources(fb: &[PointSet], covers: &[PointSet]) -> Vec<u64> {
    fb.iter()
        .map(|need| {
            covers
                .iter()
                .enumerate()
                .filter(|(_, c)| need.is_subset(c))
                .fold(0u64, |m, (j, _)| m | 1 << j)
        })
        .collect()
}

/// `J_f ≤ J_g` data `(α, β, φ)`, with `α, β` as indices in the index semigroup.
fn j_search(
    ens: &Ensemble,
    f: &FiniteMap,
    g: &FiniteMap,
    cap: u64,
) -> Result<Option<(usize, usize, ImageMap)>> {
    let (p, si) = (ens.partition(), ens.si());
    let blocks_of_image: Vec<usize> = {
        let mut v: Vec<usize> = g.image().iter().map(|&y| p.block_of(y)).collect();
        v.dedup();
        v
    };
    let mut first_beta: Vec<usize> = Vec::new();
    let mut targets: Vec<Vec<usize>> = Vec::new();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    for (x, beta) in si.elements().iter().enumerate() {
        let restriction: Vec<usize> = blocks_of_image.iter().map(|&t| beta.apply(t)).collect();
        if seen.insert(restriction) {
            first_beta.push(x);
            targets.push(beta.images().to_vec());
        }
    }
    let fb = block_images(p, f);
    let mut accept = |covers: &[PointSet]| {
        let allowed = allowed_sources(&fb, covers);
        if allowed.contains(&0) {
            return None;
        }
        si.elements()
            .iter()
            .position(|alpha| (0..fb.len()).all(|i| allowed[i] >> alpha.apply(i) & 1 == 1))
    };
    Ok(search_image_maps(p, f, g, &targets, &mut accept, cap)?
        .map(|(ti, phi, alpha)| (alpha, first_beta[ti], phi)))
}

fn j_conditions(
    p: &Partition,
    f: &FiniteMap,
    g: &FiniteMap,
    alpha: &FiniteMap,
    beta: &FiniteMap,
    phi: &ImageMap,
) -> bool {
    if phi.domain != g.image() || phi.map.codomain_size() != p.n() {
        return false;
    }
    let fb = block_images(p, f);
    let covers_ok = (0..p.block_count()).all(|i| {
        let cover = PointSet::from_points(
            p.n(),
            p.block(alpha.apply(i))
                .iter()
                .map(|&y| phi.apply(g.apply(y)).expect("in domain")),
        );
        fb[i].is_subset(&cover)
    });
    covers_ok
        && phi
            .domain
            .iter()
            .all(|&y| p.block_of(phi.apply(y).expect("in domain")) == beta.apply(p.block_of(y)))
}

fn j_factors_raw(
    p: &Partition,
    f: &FiniteMap,
    g: &FiniteMap,
    alpha: &FiniteMap,
    beta: &FiniteMap,
    phi: &ImageMap,
) -> Option<(FiniteMap, FiniteMap)> {
    let h1 = (0..p.n())
        .map(|x| {
            p.block(alpha.apply(p.block_of(x)))
                .iter()
                .copied()
                .find(|&y| phi.apply(g.apply(y)) == Some(f.apply(x)))
        })
        .collect::<Option<Vec<usize>>>()?;
    let h2 = (0..p.n())
        .map(|x| {
            phi.apply(x)
                .unwrap_or_else(|| p.block(beta.apply(p.block_of(x)))[0])
        })
        .collect();
    Some((
        FiniteMap::from_parts(p.n(), h1),
        FiniteMap::from_parts(p.n(), h2),
    ))
}

pub(crate) fn j_witness(ctx: &GreenContext, a: usize, b: usize) -> Result<Option<GreenWitness>> {
    let ens = ctx.ens;
    let (f, g) = (ens.member(a), ens.member(b));
    let cap = ctx.limits.phi_cap;
    let Some((x, y, phi)) = j_search(ens, f, g, cap)? else {
        return Ok(None);
    };
    let Some((z, t, psi)) = j_search(ens, g, f, cap)? else {
        return Ok(None);
    };
    let (p, si) = (ens.partition(), ens.si());
    let (alpha, beta, gamma, delta) = (si.element(x), si.element(y), si.element(z), si.element(t));
    let (Some((h1, h2)), Some((k1, k2))) = (
        j_factors_raw(p, f, g, alpha, beta, &phi),
        j_factors_raw(p, g, f, gamma, delta, &psi),
    ) else {
        return Err(internal("two-sided factors", f, g));
    };
    let mut w = GreenWitness::bare(Relation::J, "theorem");
    w.equations = vec![
        Equation::new(f, &[&h1, g, &h2]),
        Equation::new(g, &[&k1, f, &k2]),
    ];
    w.alpha = Some(alpha.clone());
    w.beta = Some(beta.clone());
    w.gamma = Some(gamma.clone());
    w.delta = Some(delta.clone());
    w.phi = Some(phi);
    w.psi = Some(psi);
    check_equations(&w, f, g)?;
    Ok(Some(w))
}

/// Factors `(h₁, h₂)` with characters `alpha`, `beta` and `f = h₁ g h₂`.
pub fn build_j_factors(
    f: &FiniteMap,
    g: &FiniteMap,
    alpha: &FiniteMap,
    beta: &FiniteMap,
    phi: &ImageMap,
    ens: &Ensemble,
) -> Result<(FiniteMap, FiniteMap)> {
    ens.require_member(f)?;
    ens.require_member(g)?;
    let (p, si) = (ens.partition(), ens.si());
    for m in [alpha, beta] {
        if !si.contains(m) {
            return Err(precondition!("{m} is not in the index semigroup"));
        }
    }
    if !j_conditions(p, f, g, alpha, beta, phi) {
        return Err(precondition!(
            "the given data do not satisfy the two-sided ideal conditions for ({f}, {g})"
        ));
    }
    let (h1, h2) = j_factors_raw(p, f, g, alpha, beta, phi)
        .ok_or_else(|| internal("two-sided factors", f, g))?;
    if h1.then(g).then(&h2) != *f
        || ens.index_of(&h1).is_none()
        || ens.index_of(&h2).is_none()
        || p.character(&h1)? != *alpha
        || p.character(&h2)? != *beta
    {
        return Err(internal("two-sided factors", f, g));
    }
    Ok((h1, h2))
}
