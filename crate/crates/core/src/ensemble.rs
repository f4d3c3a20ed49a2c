//! Index semigroups, instances, and the enumerated member set of an instance.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, precondition, Error, Result};
use crate::maps::FiniteMap;
use crate::partition::Partition;

/// Default limit on the number of members an [`Ensemble`] may materialize.
pub const DEFAULT_ELEMENT_CAP: usize = 100_000;

const TABLE_LIMIT: usize = 2048;

/// A composition-closed set of self-maps of `I`, stored sorted.
#[derive(Clone)]
pub struct IndexSemigroup {
    degree: usize,
    elements: Vec<FiniteMap>,
    index: HashMap<FiniteMap, usize>,
    identity: Option<usize>,
    table: OnceLock<Option<Vec<u32>>>,
    class_ids: OnceLock<(Vec<usize>, Vec<usize>)>,
}

impl IndexSemigroup {
    /// The smallest composition-closed set containing `gens`.
    pub fn closure_from_generators(gens: &[FiniteMap]) -> Result<Self> {
        let degree = check_degree(gens, "generator")?;
        let mut seen: BTreeSet<FiniteMap> = gens.iter().cloned().collect();
        let mut frontier: Vec<FiniteMap> = seen.iter().cloned().collect();
        let gens: Vec<FiniteMap> = seen.iter().cloned().collect();
        while let Some(a) = frontier.pop() {
            for g in &gens {
                for p in [a.then(g), g.then(&a)] {
                    if !seen.contains(&p) {
                        seen.insert(p.clone());
                        frontier.push(p);
                    }
                }
            }
        }
        Ok(Self::from_sorted(degree, seen.into_iter().collect()))
    }

    /// An explicit element list; closure is verified.
    pub fn from_elements(elements: Vec<FiniteMap>) -> Result<Self> {
        let degree = check_degree(&elements, "element")?;
        let set: BTreeSet<FiniteMap> = elements.into_iter().collect();
        for a in &set {
            for b in &set {
                let p = a.then(b);
                if !set.contains(&p) {
                    return Err(Error::Validation(format!(
                        "not closed under composition: {a} then {b} gives {p}, which is missing"
                    )));
                }
            }
        }
        Ok(Self::from_sorted(degree, set.into_iter().collect()))
    }

    /// The full transformation semigroup `T(I)`.
    pub fn full(degree: usize) -> Result<Self> {
        check_positive(degree)?;
        Ok(Self::from_sorted(
            degree,
            FiniteMap::all_maps(degree, degree).collect(),
        ))
    }

    /// The symmetric group `Sym(I)`.
    pub fn symmetric(degree: usize) -> Result<Self> {
        check_positive(degree)?;
        Ok(Self::from_sorted(
            degree,
            FiniteMap::all_maps(degree, degree)
                .filter(FiniteMap::is_bijection)
                .collect(),
        ))
    }

    /// The one-element monoid `{id_I}`.
    pub fn trivial(degree: usize) -> Result<Self> {
        check_positive(degree)?;
        Ok(Self::from_sorted(degree, vec![FiniteMap::identity(degree)]))
    }

    /// The identity together with every constant map.
    pub fn identity_and_constants(degree: usize) -> Result<Self> {
        check_positive(degree)?;
        let mut elements: Vec<FiniteMap> = (0..degree)
            .map(|c| FiniteMap::from_parts(degree, vec![c; degree]))
            .collect();
        elements.push(FiniteMap::identity(degree));
        elements.sort();
        elements.dedup();
        Ok(Self::from_sorted(degree, elements))
    }

    /// The same semigroup with `id_I` adjoined.
    pub fn with_identity(&self) -> Self {
        let mut elements = self.elements.clone();
        elements.push(FiniteMap::identity(self.degree));
        elements.sort();
        elements.dedup();
        Self::from_sorted(self.degree, elements)
    }

    fn from_sorted(degree: usize, elements: Vec<FiniteMap>) -> Self {
        let index: HashMap<FiniteMap, usize> = elements
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, e)| (e, i))
            .collect();
        let identity = index.get(&FiniteMap::identity(degree)).copied();
        Self {
            degree,
            elements,
            index,
            identity,
            table: OnceLock::new(),
            class_ids: OnceLock::new(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn elements(&self) -> &[FiniteMap] {
        &self.elements
    }

    pub fn element(&self, a: usize) -> &FiniteMap {
        &self.elements[a]
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn has_identity(&self) -> bool {
        self.identity.is_some()
    }

    pub fn identity_index(&self) -> Option<usize> {
        self.identity
    }

    pub fn contains(&self, alpha: &FiniteMap) -> bool {
        self.index.contains_key(alpha)
    }

    pub fn index_of(&self, alpha: &FiniteMap) -> Option<usize> {
        self.index.get(alpha).copied()
    }

    /// Index of the product `ab` (apply `a` first).
    pub fn mul(&self, a: usize, b: usize) -> usize {
        let table = self.table.get_or_init(|| {
            (self.len() <= TABLE_LIMIT).then(|| {
                let mut t = Vec::with_capacity(self.len() * self.len());
                for x in &self.elements {
                    for y in &self.elements {
                        t.push(self.index[&x.then(y)] as u32);
                    }
                }
                t
            })
        });
        match table {
            Some(t) => t[a * self.len() + b] as usize,
            None => self.index[&self.elements[a].then(&self.elements[b])],
        }
    }

    fn require_identity(&self) -> Result<usize> {
        self.identity
            .ok_or_else(|| precondition!("the index semigroup does not contain the identity"))
    }

    /// The group of units, by two-sided inverses inside the element set.
    pub fn units(&self) -> Result<Vec<usize>> {
        let e = self.require_identity()?;
        Ok((0..self.len())
            .filter(|&a| (0..self.len()).any(|b| self.mul(a, b) == e && self.mul(b, a) == e))
            .collect())
    }

    pub fn idempotents(&self) -> Vec<usize> {
        (0..self.len()).filter(|&a| self.mul(a, a) == a).collect()
    }

    pub fn is_regular_element(&self, a: usize) -> bool {
        (0..self.len()).any(|b| self.mul(self.mul(a, b), a) == a)
    }

    pub fn is_regular(&self) -> bool {
        (0..self.len()).all(|a| self.is_regular_element(a))
    }

    /// Every element has exactly one `b` with `aba = a` and `bab = b`.
    pub fn is_inverse(&self) -> bool {
        (0..self.len()).all(|a| {
            (0..self.len())
                .filter(|&b| self.mul(self.mul(a, b), a) == a && self.mul(self.mul(b, a), b) == b)
                .count()
                == 1
        })
    }

    pub fn is_unit_regular(&self) -> Result<bool> {
        let units = self.units()?;
        Ok((0..self.len()).all(|a| units.iter().any(|&u| self.mul(self.mul(a, u), a) == a)))
    }

    /// `a ≤_L b`: `a = xb` for some `x` in the semigroup with identity adjoined.
    pub fn l_leq(&self, a: usize, b: usize) -> bool {
        a == b || (0..self.len()).any(|x| self.mul(x, b) == a)
    }

    /// `a ≤_R b`: `a = bx` for some `x` in the semigroup with identity adjoined.
    pub fn r_leq(&self, a: usize, b: usize) -> bool {
        a == b || (0..self.len()).any(|x| self.mul(b, x) == a)
    }

    pub fn l_related(&self, a: usize, b: usize) -> bool {
        self.class_ids().0[a] == self.class_ids().0[b]
    }

    pub fn r_related(&self, a: usize, b: usize) -> bool {
        self.class_ids().1[a] == self.class_ids().1[b]
    }

    /// L-class and R-class labels of every element.
    fn class_ids(&self) -> &(Vec<usize>, Vec<usize>) {
        self.class_ids.get_or_init(|| {
            let label = |row: &dyn Fn(usize) -> Vec<bool>| {
                let mut seen: HashMap<Vec<bool>, usize> = HashMap::new();
                (0..self.len())
                    .map(|a| {
                        let next = seen.len();
                        *seen.entry(row(a)).or_insert(next)
                    })
                    .collect::<Vec<usize>>()
            };
            let ideal = |b: usize, left: bool| {
                let mut row = vec![false; self.len()];
                row[b] = true;
                for x in 0..self.len() {
                    row[if left { self.mul(x, b) } else { self.mul(b, x) }] = true;
                }
                row
            };
            let left = label(&|b| ideal(b, true));
            let right = label(&|b| ideal(b, false));
            (left, right)
        })
    }
}

impl PartialEq for IndexSemigroup {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.elements == other.elements
    }
}

impl Eq for IndexSemigroup {}

impl fmt::Debug for IndexSemigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IndexSemigroup")
            .field("degree", &self.degree)
            .field("elements", &self.elements)
            .finish()
    }
}

fn check_positive(degree: usize) -> Result<()> {
    if degree == 0 {
        return Err(invalid!("the index set must be nonempty"));
    }
    Ok(())
}

fn check_degree(maps: &[FiniteMap], what: &str) -> Result<usize> {
    let first = maps
        .first()
        .ok_or_else(|| invalid!("at least one {what} is required"))?;
    let degree = first.domain_size();
    check_positive(degree)?;
    for m in maps {
        if !m.is_endomap() || m.domain_size() != degree {
            return Err(invalid!("{what} {m} is not a self-map of {degree} indices"));
        }
    }
    Ok(degree)
}

/// A partition together with an index semigroup of matching degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    partition: Partition,
    si: IndexSemigroup,
}

impl Instance {
    pub fn new(partition: Partition, si: IndexSemigroup) -> Result<Self> {
        if partition.block_count() != si.degree() {
            return Err(invalid!(
                "the partition has {} blocks but the index semigroup has degree {}",
                partition.block_count(),
                si.degree()
            ));
        }
        Ok(Self { partition, si })
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn si(&self) -> &IndexSemigroup {
        &self.si
    }

    /// `Σ_α Π_i |X_{iα}|^{|X_i|}`, saturating.
    pub fn predicted_size(&self) -> u128 {
        let p = &self.partition;
        self.si
            .elements()
            .iter()
            .map(|alpha| {
                (0..p.block_count()).fold(1u128, |acc, i| {
                    let base = p.block_size(alpha.apply(i)) as u128;
                    acc.saturating_mul(base.saturating_pow(p.block_size(i) as u32))
                })
            })
            .fold(0u128, u128::saturating_add)
    }

    /// Whether `f` lies in `T_S(I)(X,P)`.
    pub fn contains(&self, f: &FiniteMap) -> Result<bool> {
        if !self.partition.preserves(f)? {
            return Ok(false);
        }
        Ok(self.si.contains(&self.partition.character_unchecked(f)))
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: InstanceFile = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
        file.into_instance()
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| invalid!("cannot read {}: {e}", path.display()))?;
        Self::from_json_str(&text)
    }

    /// Serialized with an explicit element list.
    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("plain data")
    }

    fn to_file(&self) -> InstanceFile {
        InstanceFile {
            n: self.partition.n(),
            blocks: self.partition.blocks().to_vec(),
            si: SiSpec {
                kind: SiKind::Explicit,
                elements: Some(
                    self.si
                        .elements()
                        .iter()
                        .map(|e| e.images().to_vec())
                        .collect(),
                ),
                generators: None,
            },
        }
    }
}

impl Serialize for Instance {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_file().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Instance {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        InstanceFile::deserialize(d)?
            .into_instance()
            .map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    n: usize,
    blocks: Vec<Vec<usize>>,
    si: SiSpec,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SiSpec {
    kind: SiKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    elements: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    generators: Option<Vec<Vec<usize>>>,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum SiKind {
    Full,
    Symmetric,
    Explicit,
    Generated,
}

impl InstanceFile {
    fn into_instance(self) -> Result<Instance> {
        let partition = Partition::new(self.n, self.blocks)
            .map_err(|e| Error::Validation(format!("field \"blocks\": {e}")))?;
        let k = partition.block_count();
        let maps = |field: &str, list: Option<Vec<Vec<usize>>>| -> Result<Vec<FiniteMap>> {
            let list = list.ok_or_else(|| {
                Error::Parse(format!("field \"si.{field}\" is required for this kind"))
            })?;
            list.into_iter()
                .map(|images| {
                    FiniteMap::new(k, images)
                        .map_err(|e| Error::Validation(format!("field \"si.{field}\": {e}")))
                })
                .collect()
        };
        let si = match self.si.kind {
            SiKind::Full => IndexSemigroup::full(k)?,
            SiKind::Symmetric => IndexSemigroup::symmetric(k)?,
            SiKind::Explicit => IndexSemigroup::from_elements(maps("elements", self.si.elements)?)
                .map_err(as_validation)?,
            SiKind::Generated => {
                IndexSemigroup::closure_from_generators(&maps("generators", self.si.generators)?)
                    .map_err(as_validation)?
            }
        };
        Instance::new(partition, si).map_err(as_validation)
    }
}

fn as_validation(e: Error) -> Error {
    match e {
        Error::InvalidArgument(m) => Error::Validation(m),
        other => other,
    }
}

/// The members of an instance, enumerated in lexicographic order, with
/// lazily built multiplication data.
pub struct Ensemble {
    instance: Instance,
    members: Vec<FiniteMap>,
    characters: Vec<usize>,
    index: HashMap<FiniteMap, usize>,
    table: OnceLock<Option<Vec<u32>>>,
    units: OnceLock<Result<Vec<usize>>>,
}

impl Ensemble {
    pub fn new(instance: Instance) -> Result<Self> {
        Self::with_cap(instance, DEFAULT_ELEMENT_CAP)
    }

    /// Enumerates unless the predicted size exceeds `cap`.
    pub fn with_cap(instance: Instance, cap: usize) -> Result<Self> {
        let predicted = instance.predicted_size();
        if predicted > cap as u128 {
            return Err(Error::ResourceLimit(format!(
                "the instance has {predicted} members, above the cap of {cap}"
            )));
        }
        let p = instance.partition();
        let mut tagged: Vec<(FiniteMap, usize)> = Vec::with_capacity(predicted as usize);
        for (a, alpha) in instance.si().elements().iter().enumerate() {
            let choices: Vec<&[usize]> = (0..p.n())
                .map(|x| p.block(alpha.apply(p.block_of(x))))
                .collect();
            let mut pos = vec![0usize; p.n()];
            loop {
                let images = pos.iter().zip(&choices).map(|(&k, c)| c[k]).collect();
                tagged.push((FiniteMap::from_parts(p.n(), images), a));
                // odometer, last point fastest
                let mut x = p.n();
                loop {
                    if x == 0 {
                        break;
                    }
                    x -= 1;
                    pos[x] += 1;
                    if pos[x] < choices[x].len() {
                        break;
                    }
                    pos[x] = 0;
                }
                if pos.iter().all(|&k| k == 0) {
                    break;
                }
            }
        }
        tagged.sort_unstable();
        let (members, characters): (Vec<_>, Vec<_>) = tagged.into_iter().unzip();
        let index = members
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, f)| (f, i))
            .collect();
        Ok(Self {
            instance,
            members,
            characters,
            index,
            table: OnceLock::new(),
            units: OnceLock::new(),
        })
    }

    pub fn instance(&self) -> &Instance {
        &self.instance
    }

    pub fn partition(&self) -> &Partition {
        self.instance.partition()
    }

    pub fn si(&self) -> &IndexSemigroup {
        self.instance.si()
    }

    pub fn members(&self) -> &[FiniteMap] {
        &self.members
    }

    pub fn member(&self, i: usize) -> &FiniteMap {
        &self.members[i]
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn index_of(&self, f: &FiniteMap) -> Option<usize> {
        self.index.get(f).copied()
    }

    /// Index of `f`, or an invalid-argument error naming it.
    pub fn require_member(&self, f: &FiniteMap) -> Result<usize> {
        self.index_of(f)
            .ok_or_else(|| invalid!("{f} is not a member of the semigroup under study"))
    }

    /// Index in the index semigroup of the character of member `i`.
    pub fn character_index(&self, i: usize) -> usize {
        self.characters[i]
    }

    pub fn character(&self, i: usize) -> &FiniteMap {
        self.si().element(self.characters[i])
    }

    pub fn identity_index(&self) -> Option<usize> {
        self.index_of(&FiniteMap::identity(self.partition().n()))
    }

    /// Index of the product `fg` (apply `f` first).
    pub fn mul(&self, a: usize, b: usize) -> usize {
        let table = self.table.get_or_init(|| {
            (self.len() <= TABLE_LIMIT).then(|| {
                let mut t = Vec::with_capacity(self.len() * self.len());
                for f in &self.members {
                    for g in &self.members {
                        t.push(self.index[&f.then(g)] as u32);
                    }
                }
                t
            })
        });
        match table {
            Some(t) => t[a * self.len() + b] as usize,
            None => self.index[&self.members[a].then(&self.members[b])],
        }
    }

    /// The units, found by two-sided inverses and cross-checked against the
    /// block-bijection characterization.
    pub fn units(&self) -> Result<Vec<usize>> {
        self.units
            .get_or_init(|| {
                if !self.si().has_identity() {
                    return Err(precondition!(
                        "the index semigroup does not contain the identity"
                    ));
                }
                let e = self
                    .identity_index()
                    .ok_or_else(|| Error::Internal("identity map missing from members".into()))?;
                let by_definition: Vec<usize> = (0..self.len())
                    .filter(|&a| {
                        (0..self.len()).any(|b| self.mul(a, b) == e && self.mul(b, a) == e)
                    })
                    .collect();
                let p = self.partition();
                let by_blocks: Vec<usize> = (0..self.len())
                    .filter(|&a| p.is_unit_bijection(&self.members[a]).unwrap_or(false))
                    .collect();
                if by_definition != by_blocks {
                    return Err(Error::Internal(format!(
                        "units by definition ({}) differ from block-bijective members ({})",
                        by_definition.len(),
                        by_blocks.len()
                    )));
                }
                Ok(by_definition)
            })
            .clone()
    }

    pub fn idempotents(&self) -> Vec<usize> {
        (0..self.len()).filter(|&a| self.mul(a, a) == a).collect()
    }
}

impl fmt::Debug for Ensemble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Ensemble")
            .field("instance", &self.instance)
            .field("members", &self.members.len())
            .finish()
    }
}
