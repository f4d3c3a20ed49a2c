//! The suite registry: each suite checks one property on one instance.

use std::collections::HashSet;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ensemble::{Ensemble, IndexSemigroup};
use crate::error::{Error, Result};
use crate::greens::{full_tx_green, txp_green, GreenContext, Relation};
use crate::maps::FiniteMap;
use crate::mode::Mode;
use crate::regularity::{
    build_inner_inverse, idempotent_conditions, inverse_semigroup_by_oracle,
    inverse_semigroup_by_theorem, is_regular_semigroup, regular_oracle_index,
    regular_semigroup_by_oracle, regular_semigroup_by_theorem, regular_witness_indices,
};
use crate::unit_regularity::{
    build_unit_inverse, is_unit_regular_semigroup, make_c_neq_d_map, unit_oracle_index,
    unit_regular_semigroup_by_oracle, unit_regular_semigroup_by_theorem, unit_witness_indices,
};

/// Instances above this size get sampled pairs in the characterization suites.
pub const EXHAUSTIVE_PAIR_LIMIT: usize = 60;
/// Pairs drawn per instance when sampling.
pub const SAMPLED_PAIRS: usize = 200;

pub(crate) struct Env<'a> {
    pub(crate) ens: &'a Ensemble,
    pub(crate) focus: Option<Vec<usize>>,
    pub(crate) seed: u64,
}

impl Env<'_> {
    fn members(&self) -> Vec<usize> {
        match &self.focus {
            Some(f) => f.clone(),
            None => (0..self.ens.len()).collect(),
        }
    }

    fn pairs(&self) -> Vec<(usize, usize)> {
        let m = self.members();
        m.iter()
            .flat_map(|&a| m.iter().map(move |&b| (a, b)))
            .collect()
    }

    /// All pairs on small instances, seeded samples on larger ones.
    fn checked_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.ens.len();
        if self.focus.is_some() || n <= EXHAUSTIVE_PAIR_LIMIT {
            return self.pairs();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        (0..SAMPLED_PAIRS)
            .map(|_| (rng.random_range(0..n), rng.random_range(0..n)))
            .collect()
    }

    fn ctx(&self) -> Result<GreenContext<'_>> {
        GreenContext::new(self.ens)
    }
}

#[derive(Default)]
pub(crate) struct Tally {
    pub(crate) checks: u64,
    pub(crate) failure: Option<(Vec<usize>, String)>,
    pub(crate) capped: u64,
    pub(crate) note: Option<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, elements: &[usize], detail: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some((elements.to_vec(), detail()));
        }
    }
}

/// Which instances a suite applies to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scope {
    Any,
    /// The index semigroup contains the identity.
    Identity,
    /// The index semigroup is a group of permutations.
    PermutationGroup,
    /// The index semigroup is the full transformation monoid.
    FullIndex,
    /// The partition has a single block.
    SingleBlock,
}

impl Scope {
    pub(crate) fn applies(self, ens: &Ensemble) -> bool {
        let si = ens.si();
        match self {
            Scope::Any => true,
            Scope::Identity => si.has_identity(),
            Scope::PermutationGroup => si.elements().iter().all(FiniteMap::is_bijection),
            Scope::FullIndex => si.len() == full_size(si),
            Scope::SingleBlock => ens.partition().block_count() == 1,
        }
    }
}

fn full_size(si: &IndexSemigroup) -> usize {
    let k = si.degree();
    k.checked_pow(k as u32).unwrap_or(usize::MAX)
}

pub struct SuiteDef {
    pub id: &'static str,
    pub description: &'static str,
    pub scope: Scope,
    pub(crate) run: fn(&Env, &mut Tally) -> Result<()>,
}

macro_rules! suite {
    ($id:literal, $scope:ident, $run:ident, $desc:literal) => {
        SuiteDef {
            id: $id,
            description: $desc,
            scope: Scope::$scope,
            run: $run,
        }
    };
}

pub static SUITES: &[SuiteDef] = &[
    suite!(
        "character-homomorphism",
        Any,
        character_homomorphism,
        "the character of a product is the product of characters"
    ),
    suite!(
        "character-lift-section",
        Any,
        character_lift_section,
        "lifting a character and taking its character is the identity"
    ),
    suite!(
        "unit-bijection-cross-check",
        Any,
        unit_bijection_cross_check,
        "partition-preserving bijections with partition-preserving inverses"
    ),
    suite!(
        "unit-image-blocks",
        Any,
        unit_image_blocks,
        "such bijections send every block onto a block"
    ),
    suite!(
        "block-decomposition-roundtrip",
        Any,
        block_decomposition_roundtrip,
        "splitting into block maps and reassembling is lossless"
    ),
    suite!(
        "counting",
        Any,
        counting,
        "enumeration size equals the predicted size"
    ),
    suite!(
        "closure",
        Any,
        closure,
        "members are closed under composition"
    ),
    suite!(
        "unit-set-identity",
        Identity,
        unit_set_identity,
        "units by definition equal the member bijections preserving the partition both ways"
    ),
    suite!(
        "units-are-bijections",
        Identity,
        units_are_bijections,
        "every unit is a partition-preserving bijection"
    ),
    suite!(
        "regular-element-equivalence",
        Any,
        regular_element_equivalence,
        "inner-inverse search agrees with the character conditions"
    ),
    suite!(
        "inner-inverse-construction",
        Any,
        inner_inverse_construction,
        "constructed inner inverses validate"
    ),
    suite!(
        "idempotent-equivalence",
        Any,
        idempotent_equivalence,
        "idempotents agree with the block conditions"
    ),
    suite!(
        "regular-semigroup-equivalence",
        Any,
        regular_semigroup_equivalence,
        "regular-semigroup search agrees with the structural conditions"
    ),
    suite!(
        "inverse-semigroup-equivalence",
        Any,
        inverse_semigroup_equivalence,
        "inverse-semigroup search agrees with the structural conditions"
    ),
    suite!(
        "subgroup-regular",
        PermutationGroup,
        subgroup_regular,
        "permutation-group index semigroups give regular semigroups"
    ),
    suite!(
        "txp-regular-iff-trivial",
        FullIndex,
        txp_regular_iff_trivial,
        "all partition-preserving maps are regular exactly for trivial partitions"
    ),
    suite!(
        "unit-regular-element-equivalence",
        Identity,
        unit_regular_element_equivalence,
        "unit inner-inverse search agrees with the unit conditions"
    ),
    suite!(
        "unit-inverse-construction",
        Identity,
        unit_inverse_construction,
        "constructed unit inverses validate"
    ),
    suite!(
        "unit-regular-within-regular",
        Identity,
        unit_regular_within_regular,
        "unit-regular elements are regular"
    ),
    suite!(
        "unit-regular-semigroup-equivalence",
        Identity,
        unit_regular_semigroup_equivalence,
        "unit-regular-semigroup search agrees with the structural conditions"
    ),
    suite!(
        "txp-unit-regular-iff-trivial",
        FullIndex,
        txp_unit_regular_iff_trivial,
        "all partition-preserving maps are unit-regular exactly for trivial partitions"
    ),
    suite!(
        "equal-size-collapse-defect",
        Any,
        equal_size_collapse_defect,
        "collapse equals defect between blocks of equal size, and can differ otherwise"
    ),
    suite!(
        "transversal-lemma",
        Any,
        transversal_lemma,
        "the image of f then an inner inverse is a transversal of the kernel of f"
    ),
    suite!(
        "greens-L-equivalence",
        Identity,
        greens_l,
        "L by ideals agrees with the characterization"
    ),
    suite!(
        "greens-R-equivalence",
        Identity,
        greens_r,
        "R by ideals agrees with the characterization"
    ),
    suite!(
        "greens-D-equivalence",
        Identity,
        greens_d,
        "D by ideals agrees with the characterization"
    ),
    suite!(
        "greens-J-equivalence",
        Identity,
        greens_j,
        "J by ideals agrees with the characterization"
    ),
    suite!(
        "greens-character-descent",
        Identity,
        greens_character_descent,
        "L and R pass to characters"
    ),
    suite!(
        "greens-D-equals-LcircR",
        Identity,
        greens_d_commutes,
        "L then R equals R then L"
    ),
    suite!(
        "greens-D-within-J",
        Identity,
        greens_d_within_j,
        "D is contained in J"
    ),
    suite!(
        "greens-full-tx",
        SingleBlock,
        greens_full_tx,
        "single-block instances follow the image, kernel and rank criteria"
    ),
    suite!(
        "greens-txp-specializations",
        FullIndex,
        greens_txp,
        "the partition-preserving criteria agree with the ideals"
    ),
    suite!(
        "greens-witness-replay",
        Identity,
        greens_witness_replay,
        "every witness replays"
    ),
    suite!(
        "greens-necessary-conditions",
        Identity,
        greens_necessary,
        "L forces equal images and R forces equal kernels"
    ),
];

pub fn suite_ids() -> impl Iterator<Item = &'static str> {
    SUITES.iter().map(|s| s.id)
}

pub fn find_suite(id: &str) -> Option<&'static SuiteDef> {
    SUITES.iter().find(|s| s.id == id)
}

fn character_homomorphism(env: &Env, t: &mut Tally) -> Result<()> {
    let p = env.ens.partition();
    for (a, b) in env.pairs() {
        let (f, g) = (env.ens.member(a), env.ens.member(b));
        let lhs = p.character(&f.then(g))?;
        let rhs = env.ens.character(a).then(env.ens.character(b));
        t.check(lhs == rhs, &[a, b], || {
            format!("character of the product is {lhs}, product of characters is {rhs}")
        });
    }
    Ok(())
}

fn character_lift_section(env: &Env, t: &mut Tally) -> Result<()> {
    let p = env.ens.partition();
    let k = p.block_count();
    let tops: Vec<usize> = p.blocks().iter().map(|b| b[b.len() - 1]).collect();
    for alpha in FiniteMap::all_maps(k, k) {
        for base in [None, Some(&tops[..])] {
            let back = p.character(&p.lift_character(&alpha, base)?)?;
            t.check(back == alpha, &[], || {
                format!("lifting {alpha} gives character {back}")
            });
        }
    }
    Ok(())
}

fn preserves_both_ways(env: &Env, f: &FiniteMap) -> Result<bool> {
    let p = env.ens.partition();
    match f.inverse() {
        Some(g) => Ok(p.preserves(f)? && p.preserves(&g)?),
        None => Ok(false),
    }
}

fn unit_bijection_cross_check(env: &Env, t: &mut Tally) -> Result<()> {
    let p = env.ens.partition();
    for a in env.members() {
        let f = env.ens.member(a);
        let direct = preserves_both_ways(env, f)?;
        let claimed = p.is_unit_bijection(f)?;
        t.check(direct == claimed, &[a], || {
            format!("direct check says {direct}, is_unit_bijection says {claimed}")
        });
    }
    Ok(())
}

fn unit_image_blocks(env: &Env, t: &mut Tally) -> Result<()> {
    let p = env.ens.partition();
    for a in env.members() {
        let f = env.ens.member(a);
        if !p.is_unit_bijection(f)? {
            continue;
        }
        let ok = p.blocks().iter().all(|b| {
            let mut img: Vec<usize> = b.iter().map(|&x| f.apply(x)).collect();
            img.sort_unstable();
            p.blocks().contains(&img)
        });
        t.check(ok, &[a], || "some block image is not a block".into());
    }
    Ok(())
}

fn block_decomposition_roundtrip(env: &Env, t: &mut Tally) -> Result<()> {
    let p = env.ens.partition();
    for a in env.members() {
        let f = env.ens.member(a);
        let back = p.block_maps(f)?.reassemble(p)?;
        t.check(back == *f, &[a], || format!("reassembled to {back}"));
    }
    Ok(())
}

fn counting(env: &Env, t: &mut Tally) -> Result<()> {
    let predicted = env.ens.instance().predicted_size();
    let got = env.ens.len() as u128;
    t.check(got == predicted, &[], || {
        format!("enumerated {got} members, predicted {predicted}")
    });
    Ok(())
}

fn closure(env: &Env, t: &mut Tally) -> Result<()> {
    for (a, b) in env.pairs() {
        let h = env.ens.member(a).then(env.ens.member(b));
        let ok = env.ens.index_of(&h).is_some();
        t.check(ok, &[a, b], || format!("product {h} is not a member"));
    }
    Ok(())
}

fn units_by_definition(ens: &Ensemble) -> Vec<usize> {
    let Some(e) = ens.identity_index() else {
        return Vec::new();
    };
    (0..ens.len())
        .filter(|&u| (0..ens.len()).any(|v| ens.mul(u, v) == e && ens.mul(v, u) == e))
        .collect()
}

fn unit_set_identity(env: &Env, t: &mut Tally) -> Result<()> {
    let p = env.ens.partition();
    let by_definition = units_by_definition(env.ens);
    let mut by_formula = Vec::new();
    for (i, f) in env.ens.members().iter().enumerate() {
        if p.is_unit_bijection(f)? {
            by_formula.push(i);
        }
    }
    let diff: Vec<usize> = by_definition
        .iter()
        .chain(&by_formula)
        .copied()
        .filter(|x| by_definition.contains(x) != by_formula.contains(x))
        .collect();
    t.check(diff.is_empty(), &diff[..diff.len().min(1)], || {
        format!(
            "{} units by definition, {} member bijections preserving the partition both ways",
            by_definition.len(),
            by_formula.len()
        )
    });
    Ok(())
}

fn units_are_bijections(env: &Env, t: &mut Tally) -> Result<()> {
    let p = env.ens.partition();
    for u in env.ens.units()? {
        let f = env.ens.member(u);
        let ok = f.is_bijection() && p.is_unit_bijection(f)?;
        t.check(ok, &[u], || {
            format!("unit {f} is not a partition-preserving bijection")
        });
    }
    Ok(())
}

fn regular_element_equivalence(env: &Env, t: &mut Tally) -> Result<()> {
    for a in env.members() {
        let oracle = regular_oracle_index(env.ens, a);
        let witnesses = regular_witness_indices(env.ens, a);
        t.check(oracle.is_some() == !witnesses.is_empty(), &[a], || {
            format!(
                "oracle found {:?}, {} character witnesses",
                oracle.map(|g| env.ens.member(g).to_string()),
                witnesses.len()
            )
        });
        if let Some(g) = oracle {
            let chi = env.ens.character_index(g);
            t.check(witnesses.contains(&chi), &[a, g], || {
                format!(
                    "character {} of the inner inverse is not a witness",
                    env.ens.character(g)
                )
            });
        }
    }
    Ok(())
}

fn inner_inverse_construction(env: &Env, t: &mut Tally) -> Result<()> {
    let (ens, p) = (env.ens, env.ens.partition());
    for a in env.members() {
        let f = ens.member(a);
        for w in regular_witness_indices(ens, a) {
            let alpha = ens.si().element(w);
            match build_inner_inverse(f, alpha, ens) {
                Ok(g) => {
                    let ok = f.then(&g).then(f) == *f
                        && ens.index_of(&g).is_some()
                        && p.character(&g)? == *alpha;
                    t.check(ok, &[a], || {
                        format!("inner inverse {g} for {alpha} is invalid")
                    });
                }
                Err(e) => t.check(false, &[a], || {
                    format!("construction for {alpha} failed: {e}")
                }),
            }
        }
    }
    Ok(())
}

fn idempotent_equivalence(env: &Env, t: &mut Tally) -> Result<()> {
    for a in env.members() {
        let f = env.ens.member(a);
        let by_definition = f.then(f) == *f;
        let by_conditions = idempotent_conditions(env.ens, a);
        t.check(by_definition == by_conditions, &[a], || {
            format!("definition says {by_definition}, block conditions say {by_conditions}")
        });
    }
    Ok(())
}

fn regular_semigroup_equivalence(env: &Env, t: &mut Tally) -> Result<()> {
    let oracle = regular_semigroup_by_oracle(env.ens);
    let theorem = regular_semigroup_by_theorem(env.ens.instance());
    t.check(oracle == theorem, &[], || {
        format!("search says {oracle}, structural conditions say {theorem}")
    });
    Ok(())
}

fn inverse_semigroup_equivalence(env: &Env, t: &mut Tally) -> Result<()> {
    let oracle = inverse_semigroup_by_oracle(env.ens);
    let theorem = inverse_semigroup_by_theorem(env.ens.instance());
    t.check(oracle == theorem, &[], || {
        format!("search says {oracle}, structural conditions say {theorem}")
    });
    Ok(())
}

fn subgroup_regular(env: &Env, t: &mut Tally) -> Result<()> {
    let regular = is_regular_semigroup(env.ens, Mode::Both)?;
    t.check(regular, &[], || "the semigroup is not regular".into());
    Ok(())
}

fn txp_regular_iff_trivial(env: &Env, t: &mut Tally) -> Result<()> {
    let regular = is_regular_semigroup(env.ens, Mode::Both)?;
    let trivial = env.ens.partition().is_trivial();
    t.check(regular == trivial, &[], || {
        format!("regular is {regular}, trivial partition is {trivial}")
    });
    Ok(())
}

fn unit_regular_element_equivalence(env: &Env, t: &mut Tally) -> Result<()> {
    let units = env.ens.units()?;
    for a in env.members() {
        let oracle = unit_oracle_index(env.ens, &units, a);
        let witnesses = unit_witness_indices(env.ens, a)?;
        t.check(oracle.is_some() == !witnesses.is_empty(), &[a], || {
            format!(
                "oracle found {:?}, {} unit witnesses",
                oracle.map(|g| env.ens.member(g).to_string()),
                witnesses.len()
            )
        });
    }
    Ok(())
}

fn unit_inverse_construction(env: &Env, t: &mut Tally) -> Result<()> {
    let ens = env.ens;
    let units: HashSet<usize> = ens.units()?.into_iter().collect();
    for a in env.members() {
        let f = ens.member(a);
        for w in unit_witness_indices(ens, a)? {
            let alpha = ens.si().element(w);
            match build_unit_inverse(f, alpha, ens) {
                Ok(u) => {
                    let ok = f.then(&u).then(f) == *f
                        && ens.index_of(&u).is_some_and(|i| units.contains(&i));
                    t.check(ok, &[a], || {
                        format!("unit inverse {u} for {alpha} is invalid")
                    });
                }
                Err(e) => t.check(false, &[a], || {
                    format!("construction for {alpha} failed: {e}")
                }),
            }
        }
    }
    Ok(())
}

fn unit_regular_within_regular(env: &Env, t: &mut Tally) -> Result<()> {
    let units = env.ens.units()?;
    for a in env.members() {
        if unit_oracle_index(env.ens, &units, a).is_some() {
            let regular = regular_oracle_index(env.ens, a).is_some();
            t.check(regular, &[a], || "unit-regular but not regular".into());
        }
    }
    Ok(())
}

fn unit_regular_semigroup_equivalence(env: &Env, t: &mut Tally) -> Result<()> {
    let oracle = unit_regular_semigroup_by_oracle(env.ens)?;
    let theorem = unit_regular_semigroup_by_theorem(env.ens.instance())?;
    t.check(oracle == theorem, &[], || {
        format!("search says {oracle}, structural conditions say {theorem}")
    });
    Ok(())
}

fn txp_unit_regular_iff_trivial(env: &Env, t: &mut Tally) -> Result<()> {
    let unit_regular = is_unit_regular_semigroup(env.ens, Mode::Both)?;
    let trivial = env.ens.partition().is_trivial();
    t.check(unit_regular == trivial, &[], || {
        format!("unit-regular is {unit_regular}, trivial partition is {trivial}")
    });
    Ok(())
}

fn equal_size_collapse_defect(env: &Env, t: &mut Tally) -> Result<()> {
    let p = env.ens.partition();
    let mut sizes: Vec<usize> = (0..p.block_count()).map(|i| p.block_size(i)).collect();
    sizes.sort_unstable();
    sizes.dedup();
    for &s in &sizes {
        for &r in &sizes {
            if s == r {
                for h in FiniteMap::all_maps(s, r) {
                    let (c, d) = h.collapse_defect();
                    t.check(c == d, &[], || {
                        format!("{h} has collapse {c} and defect {d}")
                    });
                }
            } else {
                let h = make_c_neq_d_map(s, r)?;
                let (c, d) = h.collapse_defect();
                t.check(c != d, &[], || format!("{h} has collapse and defect {c}"));
            }
        }
    }
    Ok(())
}

fn is_transversal(f: &FiniteMap, g: &FiniteMap) -> bool {
    let fg = f.then(g);
    let kernel = f.kernel_partition();
    let image = fg.image();
    kernel.classes().iter().all(|class| {
        class
            .iter()
            .filter(|x| image.binary_search(x).is_ok())
            .count()
            == 1
    }) && image.len() == kernel.len()
}

fn transversal_lemma(env: &Env, t: &mut Tally) -> Result<()> {
    let ens = env.ens;
    let units = if ens.si().has_identity() {
        Some(ens.units()?)
    } else {
        None
    };
    for a in env.members() {
        let f = ens.member(a);
        let mut inverses: Vec<FiniteMap> = Vec::new();
        if let Some(g) = regular_oracle_index(ens, a) {
            inverses.push(ens.member(g).clone());
        }
        for w in regular_witness_indices(ens, a) {
            inverses.push(build_inner_inverse(f, ens.si().element(w), ens)?);
        }
        if let Some(units) = &units {
            if let Some(u) = unit_oracle_index(ens, units, a) {
                inverses.push(ens.member(u).clone());
            }
            for w in unit_witness_indices(ens, a)? {
                inverses.push(build_unit_inverse(f, ens.si().element(w), ens)?);
            }
        }
        for g in inverses {
            let ok = f.then(&g).then(f) == *f && is_transversal(f, &g);
            t.check(ok, &[a], || {
                format!("image of {f} then {g} is not a kernel transversal")
            });
        }
    }
    Ok(())
}

fn greens_equivalence(env: &Env, t: &mut Tally, rel: Relation) -> Result<()> {
    let ctx = env.ctx()?;
    for (a, b) in env.checked_pairs() {
        let oracle = ctx.oracle_related(rel, a, b)?;
        match ctx.theorem_witness(rel, a, b) {
            Err(Error::ResourceLimit(_)) => t.capped += 1,
            Err(e) => t.check(false, &[a, b], || {
                format!("{rel} characterization failed: {e}")
            }),
            Ok(w) => {
                let replayed = w.as_ref().map_or(Ok(()), |w| w.replay(env.ens));
                t.check(oracle == w.is_some() && replayed.is_ok(), &[a, b], || {
                    format!(
                        "{rel}: ideals say {oracle}, characterization says {}",
                        w.is_some()
                    )
                });
            }
        }
    }
    Ok(())
}

fn greens_l(env: &Env, t: &mut Tally) -> Result<()> {
    greens_equivalence(env, t, Relation::L)
}

fn greens_r(env: &Env, t: &mut Tally) -> Result<()> {
    greens_equivalence(env, t, Relation::R)
}

fn greens_d(env: &Env, t: &mut Tally) -> Result<()> {
    greens_equivalence(env, t, Relation::D)
}

fn greens_j(env: &Env, t: &mut Tally) -> Result<()> {
    greens_equivalence(env, t, Relation::J)
}

fn greens_character_descent(env: &Env, t: &mut Tally) -> Result<()> {
    let ctx = env.ctx()?;
    let tables = ctx.tables()?;
    let si = env.ens.si();
    for (a, b) in env.pairs() {
        let (ca, cb) = (env.ens.character_index(a), env.ens.character_index(b));
        if tables.l_related(a, b) {
            t.check(si.l_related(ca, cb), &[a, b], || {
                "L-related with characters not L-related".into()
            });
        }
        if tables.r_related(a, b) {
            t.check(si.r_related(ca, cb), &[a, b], || {
                "R-related with characters not R-related".into()
            });
        }
    }
    Ok(())
}

fn greens_d_commutes(env: &Env, t: &mut Tally) -> Result<()> {
    let ctx = env.ctx()?;
    let tables = ctx.tables()?;
    let present: HashSet<(usize, usize)> = (0..env.ens.len())
        .map(|h| (tables.l_class(h), tables.r_class(h)))
        .collect();
    for (a, b) in env.pairs() {
        // f L h R g needs h in L_f and R_g; f R h L g needs h in R_f and L_g
        let l_then_r = present.contains(&(tables.l_class(a), tables.r_class(b)));
        let r_then_l = present.contains(&(tables.l_class(b), tables.r_class(a)));
        t.check(l_then_r == r_then_l, &[a, b], || {
            format!("L then R says {l_then_r}, R then L says {r_then_l}")
        });
    }
    Ok(())
}

fn greens_d_within_j(env: &Env, t: &mut Tally) -> Result<()> {
    let ctx = env.ctx()?;
    let tables = ctx.tables()?;
    let mut strict = 0u64;
    for (a, b) in env.pairs() {
        let d = tables.d_middle(a, b).is_some();
        let j = tables.j_related(a, b);
        t.check(!d || j, &[a, b], || "D-related but not J-related".into());
        if j && !d {
            strict += 1;
        }
    }
    if strict > 0 {
        t.note = Some(format!(
            "J strictly larger than D on {strict} ordered pairs"
        ));
    }
    Ok(())
}

fn greens_full_tx(env: &Env, t: &mut Tally) -> Result<()> {
    let ctx = env.ctx()?;
    for (a, b) in env.pairs() {
        let (f, g) = (env.ens.member(a), env.ens.member(b));
        for rel in Relation::ALL {
            let ideal = ctx.oracle_related(rel, a, b)?;
            let criterion = full_tx_green(rel, f, g)?;
            t.check(ideal == criterion, &[a, b], || {
                format!("{rel}: ideals say {ideal}, image/kernel/rank criterion says {criterion}")
            });
        }
        let (d, j) = (
            ctx.oracle_related(Relation::D, a, b)?,
            ctx.oracle_related(Relation::J, a, b)?,
        );
        t.check(d == j, &[a, b], || format!("D is {d} but J is {j}"));
    }
    Ok(())
}

fn greens_txp(env: &Env, t: &mut Tally) -> Result<()> {
    let ctx = env.ctx()?;
    let p = env.ens.partition();
    for (a, b) in env.checked_pairs() {
        let (f, g) = (env.ens.member(a), env.ens.member(b));
        for rel in Relation::ALL {
            let ideal = ctx.oracle_related(rel, a, b)?;
            match txp_green(rel, f, g, p) {
                Err(Error::ResourceLimit(_)) => t.capped += 1,
                Err(e) => return Err(e),
                Ok(v) => t.check(v == ideal, &[a, b], || {
                    format!("{rel}: ideals say {ideal}, partition-preserving criterion says {v}")
                }),
            }
        }
    }
    Ok(())
}

fn greens_witness_replay(env: &Env, t: &mut Tally) -> Result<()> {
    let ctx = env.ctx()?;
    for (a, b) in env.checked_pairs() {
        for rel in Relation::ALL {
            let oracle = ctx.oracle_witness(rel, a, b)?;
            let theorem = match ctx.theorem_witness(rel, a, b) {
                Err(Error::ResourceLimit(_)) => {
                    t.capped += 1;
                    None
                }
                other => other?,
            };
            for w in oracle.iter().chain(theorem.iter()) {
                let r = w.replay(env.ens);
                t.check(r.is_ok(), &[a, b], || {
                    format!("{rel} witness from {} does not replay: {:?}", w.source, r)
                });
            }
        }
    }
    Ok(())
}

fn greens_necessary(env: &Env, t: &mut Tally) -> Result<()> {
    let ctx = env.ctx()?;
    let tables = ctx.tables()?;
    for (a, b) in env.pairs() {
        let (f, g) = (env.ens.member(a), env.ens.member(b));
        if tables.l_related(a, b) {
            t.check(f.image() == g.image(), &[a, b], || {
                "L-related with different images".into()
            });
        }
        if tables.r_related(a, b) {
            t.check(
                f.kernel_partition() == g.kernel_partition(),
                &[a, b],
                || "R-related with different kernels".into(),
            );
        }
    }
    Ok(())
}
