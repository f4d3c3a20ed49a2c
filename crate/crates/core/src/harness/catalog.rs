//! Deterministic catalogs of small instances.

use std::collections::HashSet;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ensemble::{IndexSemigroup, Instance};
use crate::error::{invalid, Result};
use crate::maps::FiniteMap;
use crate::partition::Partition;

/// Largest ground-set size a catalog may cover.
pub const MAX_CATALOG_N: usize = 5;

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    /// Human-readable name, e.g. `[[0,1],[2]] symmetric`.
    pub label: String,
    /// Which menu item produced the index semigroup.
    pub family: String,
    pub instance: Instance,
}

#[derive(Clone, Debug)]
pub struct Catalog {
    pub max_n: usize,
    pub seed: u64,
    pub entries: Vec<CatalogEntry>,
}

impl Catalog {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Restricted growth strings of length `n`, in lexicographic order.
pub fn restricted_growth_strings(n: usize) -> Vec<Vec<usize>> {
    fn extend(prefix: &mut Vec<usize>, max: usize, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for v in 0..=max + 1 {
            prefix.push(v);
            extend(prefix, max.max(v), n, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let mut prefix = vec![0];
    extend(&mut prefix, 0, n, &mut out);
    out
}

/// All set partitions of `[0, n)`, blocks ordered by least element.
pub fn all_partitions(n: usize) -> Result<Vec<Partition>> {
    restricted_growth_strings(n)
        .iter()
        .map(|labels| Partition::from_labels(labels))
        .collect()
}

fn permutations(k: usize) -> Vec<FiniteMap> {
    FiniteMap::all_maps(k, k)
        .filter(FiniteMap::is_bijection)
        .collect()
}

/// Every subgroup of `Sym(k)` that is generated by at most two elements.
pub fn two_generated_subgroups(k: usize) -> Result<Vec<IndexSemigroup>> {
    let perms = permutations(k);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (x, a) in perms.iter().enumerate() {
        for b in &perms[x..] {
            let g = IndexSemigroup::closure_from_generators(&[a.clone(), b.clone()])?;
            if seen.insert(g.elements().to_vec()) {
                out.push(g);
            }
        }
    }
    out.sort_by(|a, b| {
        a.len()
            .cmp(&b.len())
            .then_with(|| a.elements().cmp(b.elements()))
    });
    Ok(out)
}

fn menu(k: usize, seed: u64) -> Result<Vec<(String, IndexSemigroup)>> {
    let mut items = vec![
        ("full".to_string(), IndexSemigroup::full(k)?),
        ("symmetric".to_string(), IndexSemigroup::symmetric(k)?),
        ("identity".to_string(), IndexSemigroup::trivial(k)?),
        (
            "identity+constants".to_string(),
            IndexSemigroup::identity_and_constants(k)?,
        ),
    ];
    for (j, g) in two_generated_subgroups(k)?.into_iter().enumerate() {
        items.push((format!("subgroup#{j}"), g));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (k as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    for r in 0..3 {
        let count = rng.random_range(1..=2);
        let gens: Vec<FiniteMap> = (0..count)
            .map(|_| {
                let images = (0..k).map(|_| rng.random_range(0..k)).collect();
                FiniteMap::endo(images)
            })
            .collect::<Result<_>>()?;
        let s = IndexSemigroup::closure_from_generators(&gens)?;
        let with_id = s.with_identity();
        items.push((format!("random#{r}"), s));
        items.push((format!("random#{r}+id"), with_id));
    }
    let mut seen = HashSet::new();
    items.retain(|(_, s)| seen.insert(s.elements().to_vec()));
    Ok(items)
}

fn blocks_label(p: &Partition) -> String {
    let inner: Vec<String> = p
        .blocks()
        .iter()
        .map(|b| {
            let pts: Vec<String> = b.iter().map(usize::to_string).collect();
            format!("[{}]", pts.join(","))
        })
        .collect();
    format!("[{}]", inner.join(","))
}

/// Every partition of `[0, n)` for `n ≤ max_n`, crossed with the index-semigroup menu.
pub fn build_catalog(max_n: usize, seed: u64) -> Result<Catalog> {
    if max_n == 0 || max_n > MAX_CATALOG_N {
        return Err(invalid!(
            "max_n must lie between 1 and {MAX_CATALOG_N}, got {max_n}"
        ));
    }
    let menus: Vec<Vec<(String, IndexSemigroup)>> =
        (1..=max_n).map(|k| menu(k, seed)).collect::<Result<_>>()?;
    let mut entries = Vec::new();
    for n in 1..=max_n {
        for p in all_partitions(n)? {
            let k = p.block_count();
            for (name, si) in &menus[k - 1] {
                entries.push(CatalogEntry {
                    label: format!("{} {name}", blocks_label(&p)),
                    family: name.clone(),
                    instance: Instance::new(p.clone(), si.clone())?,
                });
            }
        }
    }
    Ok(Catalog {
        max_n,
        seed,
        entries,
    })
}
