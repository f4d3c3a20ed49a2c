//! Green's relations on `T_S(I)(X,P)`: ideal-based oracles, the structural
//! characterizations with witness construction, and the `T(X,P)` and `T(X)`
//! specializations.

mod eggbox;
mod oracle;
mod theorem;
mod txp;

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::Serialize;

use crate::bits::PointSet;
use crate::ensemble::Ensemble;
use crate::error::{invalid, precondition, Error, Result};
use crate::maps::FiniteMap;
use crate::mode::Mode;

pub use eggbox::{EggBox, EggBoxClass};
pub use theorem::{build_d_middle, build_j_factors, build_left_factor, build_right_factor};
pub use txp::{full_tx_green, txp_green};

/// One of Green's relations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Relation {
    L,
    R,
    D,
    J,
}

impl Relation {
    pub const ALL: [Relation; 4] = [Relation::L, Relation::R, Relation::D, Relation::J];
}

impl FromStr for Relation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "L" | "l" => Ok(Relation::L),
            "R" | "r" => Ok(Relation::R),
            "D" | "d" => Ok(Relation::D),
            "J" | "j" => Ok(Relation::J),
            other => Err(invalid!(
                "unknown relation {other:?} (expected L, R, D or J)"
            )),
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Bounds on the searches; exceeding one yields [`Error::ResourceLimit`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    /// Partial assignments explored by a single characterization search.
    pub phi_cap: u64,
    /// Largest `members²` for which oracle tables are built.
    pub oracle_cap: u64,
}

impl Default for SearchLimits {
    fn default() -> Self {
        Self {
            phi_cap: 1_000_000,
            oracle_cap: 100_000_000,
        }
    }
}

/// `target = factors[0] factors[1] ...` (left-to-right composition).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Equation {
    pub target: FiniteMap,
    pub factors: Vec<FiniteMap>,
}

impl Equation {
    fn new(target: &FiniteMap, factors: &[&FiniteMap]) -> Self {
        Self {
            target: target.clone(),
            factors: factors.iter().map(|&h| h.clone()).collect(),
        }
    }

    pub fn holds(&self) -> bool {
        let mut it = self.factors.iter();
        let Some(first) = it.next() else {
            return false;
        };
        let product = it.try_fold(first.clone(), |acc, h| acc.compose(h));
        matches!(product, Ok(p) if p == self.target)
    }
}

/// A map defined on a subset of `X` (an image set), listed in sorted order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ImageMap {
    pub domain: Vec<usize>,
    pub map: FiniteMap,
}

impl ImageMap {
    pub fn apply(&self, x: usize) -> Option<usize> {
        self.domain
            .binary_search(&x)
            .ok()
            .map(|pos| self.map.apply(pos))
    }
}

/// Evidence for a Green's relation between two members.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GreenWitness {
    pub relation: Relation,
    /// `oracle` when the factors came from the ideal scan, `theorem` when
    /// they were built from the characterization data.
    pub source: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<FiniteMap>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<FiniteMap>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<FiniteMap>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<FiniteMap>,
    /// Kernel classes of `f` paired with kernel classes of `g`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class_pairing: Option<Vec<(Vec<usize>, Vec<usize>)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi: Option<ImageMap>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub psi: Option<ImageMap>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub middle: Option<FiniteMap>,
    pub equations: Vec<Equation>,
}

impl GreenWitness {
    fn bare(relation: Relation, source: &'static str) -> Self {
        Self {
            relation,
            source,
            alpha: None,
            beta: None,
            gamma: None,
            delta: None,
            class_pairing: None,
            phi: None,
            psi: None,
            middle: None,
            equations: Vec::new(),
        }
    }

    /// Checks every recorded equation and that every factor is a member.
    pub fn replay(&self, ens: &Ensemble) -> Result<()> {
        if self.equations.is_empty() {
            return Err(Error::Validation("witness carries no equations".into()));
        }
        for eq in &self.equations {
            if !eq.holds() {
                return Err(Error::Validation(format!(
                    "equation for {} does not hold",
                    eq.target
                )));
            }
            if let Some(h) = eq.factors.iter().find(|h| ens.index_of(h).is_none()) {
                return Err(Error::Validation(format!("factor {h} is not a member")));
            }
        }
        if let Some(pairing) = &self.class_pairing {
            let mut targets: Vec<&Vec<usize>> = pairing.iter().map(|(_, c)| c).collect();
            targets.sort();
            targets.dedup();
            if targets.len() != pairing.len() {
                return Err(Error::Validation("class pairing is not injective".into()));
            }
        }
        Ok(())
    }
}

/// Per-member data reused by the characterization searches.
pub(crate) struct MemberData {
    pub(crate) chi: usize,
    pub(crate) block_image: Vec<PointSet>,
}

impl MemberData {
    fn new(ens: &Ensemble, idx: usize) -> Self {
        Self {
            chi: ens.character_index(idx),
            block_image: theorem::block_images(ens.partition(), ens.member(idx)),
        }
    }
}

/// Shared state for Green's computations on one ensemble.
///
/// Oracle tables and per-member data are built lazily and reused across calls.
pub struct GreenContext<'a> {
    ens: &'a Ensemble,
    limits: SearchLimits,
    oracle: OnceLock<Result<oracle::Tables>>,
    data: Vec<OnceLock<MemberData>>,
}

impl<'a> GreenContext<'a> {
    pub fn new(ens: &'a Ensemble) -> Result<Self> {
        Self::with_limits(ens, SearchLimits::default())
    }

    pub fn with_limits(ens: &'a Ensemble, limits: SearchLimits) -> Result<Self> {
        if !ens.si().has_identity() {
            return Err(precondition!(
                "Green's relations require the identity in the index semigroup"
            ));
        }
        if ens.partition().block_count() > 64 || ens.partition().n() > 64 {
            return Err(invalid!("Green's computations support at most 64 points"));
        }
        Ok(Self {
            ens,
            limits,
            oracle: OnceLock::new(),
            data: (0..ens.len()).map(|_| OnceLock::new()).collect(),
        })
    }

    pub fn ensemble(&self) -> &'a Ensemble {
        self.ens
    }

    pub fn limits(&self) -> SearchLimits {
        self.limits
    }

    pub(crate) fn data(&self, i: usize) -> &MemberData {
        self.data[i].get_or_init(|| MemberData::new(self.ens, i))
    }

    pub(crate) fn tables(&self) -> Result<&oracle::Tables> {
        self.oracle
            .get_or_init(|| oracle::Tables::build(self.ens, self.limits))
            .as_ref()
            .map_err(Clone::clone)
    }

    fn pair(&self, f: &FiniteMap, g: &FiniteMap) -> Result<(usize, usize)> {
        Ok((self.ens.require_member(f)?, self.ens.require_member(g)?))
    }

    /// Factors witnessing `f ≤ g` in the given preorder, found by scanning members.
    pub fn principal_leq_oracle(
        &self,
        rel: Relation,
        f: &FiniteMap,
        g: &FiniteMap,
    ) -> Result<Option<Vec<FiniteMap>>> {
        let (a, b) = self.pair(f, g)?;
        let t = self.tables()?;
        let found = match rel {
            Relation::L => t.left_factor(self.ens, a, b).map(|h| vec![h]),
            Relation::R => t.right_factor(self.ens, a, b).map(|h| vec![h]),
            Relation::J => t
                .two_sided_factors(self.ens, a, b)
                .map(|(h1, h2)| vec![h1, h2]),
            Relation::D => {
                return Err(invalid!(
                    "D is not a principal-ideal preorder; use L, R or J"
                ))
            }
        };
        Ok(found.map(|hs| hs.into_iter().map(|h| self.ens.member(h).clone()).collect()))
    }

    /// Decides the relation by ideal membership.
    pub fn oracle_related(&self, rel: Relation, a: usize, b: usize) -> Result<bool> {
        let t = self.tables()?;
        Ok(match rel {
            Relation::L => t.l_related(a, b),
            Relation::R => t.r_related(a, b),
            Relation::D => t.d_middle(a, b).is_some(),
            Relation::J => t.j_related(a, b),
        })
    }

    /// An oracle witness, with factors found by scanning members.
    pub fn oracle_witness(
        &self,
        rel: Relation,
        a: usize,
        b: usize,
    ) -> Result<Option<GreenWitness>> {
        let t = self.tables()?;
        let ens = self.ens;
        let (f, g) = (ens.member(a), ens.member(b));
        let mut w = GreenWitness::bare(rel, "oracle");
        match rel {
            Relation::L | Relation::R => {
                let (x, y) = if rel == Relation::L {
                    (t.left_factor(ens, a, b), t.left_factor(ens, b, a))
                } else {
                    (t.right_factor(ens, a, b), t.right_factor(ens, b, a))
                };
                let (Some(x), Some(y)) = (x, y) else {
                    return Ok(None);
                };
                let (x, y) = (ens.member(x), ens.member(y));
                w.equations = if rel == Relation::L {
                    vec![Equation::new(f, &[x, g]), Equation::new(g, &[y, f])]
                } else {
                    vec![Equation::new(f, &[g, x]), Equation::new(g, &[f, y])]
                };
            }
            Relation::D => {
                let Some(m) = t.d_middle(a, b) else {
                    return Ok(None);
                };
                let h = ens.member(m);
                let parts = [
                    t.left_factor(ens, a, m),
                    t.left_factor(ens, m, a),
                    t.right_factor(ens, m, b),
                    t.right_factor(ens, b, m),
                ];
                let [Some(p), Some(q), Some(r), Some(s)] = parts else {
                    return Err(Error::Internal("middle element lost its factors".into()));
                };
                w.equations = vec![
                    Equation::new(f, &[ens.member(p), h]),
                    Equation::new(h, &[ens.member(q), f]),
                    Equation::new(h, &[g, ens.member(r)]),
                    Equation::new(g, &[h, ens.member(s)]),
                ];
                w.class_pairing = Some(forward_pairing(f, h));
                w.gamma = Some(ens.character(m).clone());
                w.middle = Some(h.clone());
            }
            Relation::J => {
                let (Some((p, q)), Some((r, s))) = (
                    t.two_sided_factors(ens, a, b),
                    t.two_sided_factors(ens, b, a),
                ) else {
                    return Ok(None);
                };
                w.equations = vec![
                    Equation::new(f, &[ens.member(p), g, ens.member(q)]),
                    Equation::new(g, &[ens.member(r), f, ens.member(s)]),
                ];
            }
        }
        Ok(Some(w))
    }

    /// A witness from the characterization; `Err(ResourceLimit)` if a search cap was hit.
    pub fn theorem_witness(
        &self,
        rel: Relation,
        a: usize,
        b: usize,
    ) -> Result<Option<GreenWitness>> {
        match rel {
            Relation::L => theorem::l_witness(self, a, b),
            Relation::R => theorem::r_witness(self, a, b),
            Relation::D => theorem::d_witness(self, a, b),
            Relation::J => theorem::j_witness(self, a, b),
        }
    }

    /// Whether the characterization holds, without building factors.
    pub fn theorem_related(&self, rel: Relation, a: usize, b: usize) -> Result<bool> {
        Ok(self.theorem_witness(rel, a, b)?.is_some())
    }

    /// The relation decided in `mode`; under [`Mode::Both`] the oracle and the
    /// characterization must agree.
    pub fn related(
        &self,
        rel: Relation,
        f: &FiniteMap,
        g: &FiniteMap,
        mode: Mode,
    ) -> Result<Option<GreenWitness>> {
        let (a, b) = self.pair(f, g)?;
        match mode {
            Mode::Oracle => self.oracle_witness(rel, a, b),
            Mode::Theorem => self.theorem_witness(rel, a, b),
            Mode::Both => {
                let oracle = self.oracle_related(rel, a, b)?;
                let witness = self.theorem_witness(rel, a, b)?;
                if oracle != witness.is_some() {
                    return Err(Error::ModeMismatch(format!(
                        "{rel} on ({f}, {g}): oracle says {oracle}, characterization says {}",
                        witness.is_some()
                    )));
                }
                Ok(witness)
            }
        }
    }

    pub fn egg_box(&self) -> Result<EggBox> {
        eggbox::build(self)
    }
}

/// Pairs each kernel class of `f` with the class of `h` over the same image point.
fn forward_pairing(f: &FiniteMap, h: &FiniteMap) -> Vec<(Vec<usize>, Vec<usize>)> {
    f.image()
        .into_iter()
        .map(|y| (f.preimage(y), h.preimage(y)))
        .collect()
}

/// First `h` with `f = hg`, `f = gh` or `f = h₁gh₂`, per `rel`.
pub fn principal_leq_oracle(
    rel: Relation,
    f: &FiniteMap,
    g: &FiniteMap,
    ens: &Ensemble,
) -> Result<Option<Vec<FiniteMap>>> {
    GreenContext::new(ens)?.principal_leq_oracle(rel, f, g)
}

pub fn l_related(
    f: &FiniteMap,
    g: &FiniteMap,
    ens: &Ensemble,
    mode: Mode,
) -> Result<Option<GreenWitness>> {
    GreenContext::new(ens)?.related(Relation::L, f, g, mode)
}

pub fn r_related(
    f: &FiniteMap,
    g: &FiniteMap,
    ens: &Ensemble,
    mode: Mode,
) -> Result<Option<GreenWitness>> {
    GreenContext::new(ens)?.related(Relation::R, f, g, mode)
}

pub fn d_related(
    f: &FiniteMap,
    g: &FiniteMap,
    ens: &Ensemble,
    mode: Mode,
) -> Result<Option<GreenWitness>> {
    GreenContext::new(ens)?.related(Relation::D, f, g, mode)
}

pub fn j_related(
    f: &FiniteMap,
    g: &FiniteMap,
    ens: &Ensemble,
    mode: Mode,
) -> Result<Option<GreenWitness>> {
    GreenContext::new(ens)?.related(Relation::J, f, g, mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::{IndexSemigroup, Instance};
    use crate::partition::Partition;

    fn m(v: &[usize]) -> FiniteMap {
        FiniteMap::endo(v.to_vec()).unwrap()
    }

    fn ens(blocks: Vec<Vec<usize>>, si: IndexSemigroup) -> Ensemble {
        let n = blocks.iter().map(Vec::len).sum();
        Ensemble::new(Instance::new(Partition::new(n, blocks).unwrap(), si).unwrap()).unwrap()
    }

    fn menus(k: usize) -> Vec<IndexSemigroup> {
        let mut out = vec![
            IndexSemigroup::full(k).unwrap(),
            IndexSemigroup::symmetric(k).unwrap(),
            IndexSemigroup::trivial(k).unwrap(),
            IndexSemigroup::identity_and_constants(k).unwrap(),
        ];
        if k == 2 {
            out.push(
                IndexSemigroup::closure_from_generators(&[m(&[0, 0])])
                    .unwrap()
                    .with_identity(),
            );
        }
        if k == 3 {
            out.push(
                IndexSemigroup::closure_from_generators(&[m(&[1, 2, 2])])
                    .unwrap()
                    .with_identity(),
            );
            out.push(
                IndexSemigroup::closure_from_generators(&[m(&[1, 0, 0]), m(&[0, 0, 2])])
                    .unwrap()
                    .with_identity(),
            );
        }
        out
    }

    fn shapes() -> Vec<Vec<Vec<usize>>> {
        vec![
            vec![vec![0, 1, 2]],
            vec![vec![0], vec![1, 2]],
            vec![vec![0, 1], vec![2, 3]],
            vec![vec![0], vec![1, 2, 3]],
            vec![vec![0, 2], vec![1], vec![3]],
            vec![vec![0], vec![1], vec![2]],
        ]
    }

    #[test]
    fn characterizations_agree_with_ideals() {
        for blocks in shapes() {
            let k = blocks.len();
            for si in menus(k) {
                let e = ens(blocks.clone(), si);
                let ctx = GreenContext::new(&e).unwrap();
                for rel in Relation::ALL {
                    for a in 0..e.len() {
                        for b in 0..e.len() {
                            let oracle = ctx.oracle_related(rel, a, b).unwrap();
                            let w = ctx.theorem_witness(rel, a, b).unwrap();
                            assert_eq!(
                                oracle,
                                w.is_some(),
                                "{rel} {} {} in {:?}",
                                e.member(a),
                                e.member(b),
                                e.partition().blocks()
                            );
                            if let Some(w) = w {
                                w.replay(&e).unwrap();
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn full_partition_preserving_shortcut_agrees() {
        for blocks in shapes() {
            let k = blocks.len();
            let e = ens(blocks, IndexSemigroup::full(k).unwrap());
            let ctx = GreenContext::new(&e).unwrap();
            for rel in Relation::ALL {
                for a in 0..e.len() {
                    for b in 0..e.len() {
                        let (f, g) = (e.member(a), e.member(b));
                        assert_eq!(
                            txp_green(rel, f, g, e.partition()).unwrap(),
                            ctx.oracle_related(rel, a, b).unwrap(),
                            "{rel} {f} {g} in {:?}",
                            e.partition().blocks()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn oracle_witnesses_replay() {
        let e = ens(
            vec![vec![0, 1], vec![2, 3]],
            IndexSemigroup::full(2).unwrap(),
        );
        let ctx = GreenContext::new(&e).unwrap();
        for rel in Relation::ALL {
            for a in (0..e.len()).step_by(7) {
                for b in (0..e.len()).step_by(5) {
                    if let Some(w) = ctx.oracle_witness(rel, a, b).unwrap() {
                        w.replay(&e).unwrap();
                    }
                }
            }
        }
    }

    #[test]
    fn builders_and_preconditions() {
        let e = ens(
            vec![vec![0, 1], vec![2, 3]],
            IndexSemigroup::full(2).unwrap(),
        );
        let (f, g) = (m(&[2, 2, 0, 0]), m(&[0, 0, 2, 2]));
        let h = build_left_factor(&f, &g, &m(&[1, 0]), &e).unwrap();
        assert_eq!(h.then(&g), f);
        assert!(matches!(
            build_left_factor(&f, &g, &m(&[0, 0]), &e),
            Err(Error::Precondition(_))
        ));
        let h = build_right_factor(&f, &g, &m(&[1, 0]), &e).unwrap();
        assert_eq!(g.then(&h), f);
        let k = m(&[1, 1, 3, 3]);
        let w = d_related(&f, &k, &e, Mode::Both).unwrap().unwrap();
        let mid = build_d_middle(
            &f,
            &k,
            w.gamma.as_ref().unwrap(),
            w.class_pairing.as_ref().unwrap(),
            &e,
        )
        .unwrap();
        assert_eq!(Some(mid), w.middle);
        let w = j_related(&f, &g, &e, Mode::Theorem).unwrap().unwrap();
        let (h1, h2) = build_j_factors(
            &f,
            &g,
            w.alpha.as_ref().unwrap(),
            w.beta.as_ref().unwrap(),
            w.phi.as_ref().unwrap(),
            &e,
        )
        .unwrap();
        assert_eq!(h1.then(&g).then(&h2), f);
        assert!(matches!(
            l_related(&m(&[0, 2, 0, 0]), &g, &e, Mode::Both),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            principal_leq_oracle(Relation::D, &f, &g, &e),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn identity_is_required() {
        let no_id = IndexSemigroup::closure_from_generators(&[m(&[0, 0])]).unwrap();
        let e = ens(vec![vec![0, 1], vec![2, 3]], no_id);
        assert!(matches!(GreenContext::new(&e), Err(Error::Precondition(_))));
    }

    #[test]
    fn caps_surface_as_resource_limits() {
        let e = ens(
            vec![vec![0, 1], vec![2, 3]],
            IndexSemigroup::full(2).unwrap(),
        );
        let limits = SearchLimits {
            phi_cap: 1,
            oracle_cap: 4,
        };
        let ctx = GreenContext::with_limits(&e, limits).unwrap();
        let (f, g) = (m(&[0, 1, 2, 3]), m(&[1, 0, 3, 2]));
        assert!(matches!(
            ctx.related(Relation::J, &f, &g, Mode::Theorem),
            Err(Error::ResourceLimit(_))
        ));
        assert!(matches!(
            ctx.related(Relation::L, &f, &g, Mode::Oracle),
            Err(Error::ResourceLimit(_))
        ));
    }
}
