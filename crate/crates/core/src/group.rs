//! Finite groups given by multiplication tables, with exhaustive subgroup
//! enumeration. A Galois group acts on a lattice through a finite image, and
//! that finite image is what is represented here.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::limits::Limits;

/// A finite group on the element indices `0..order`.
///
/// `table[a * order + b]` is the index of `a * b`. For groups built from
/// permutations the product is composition, `(a * b)(x) = a(b(x))`, and the
/// identity has index 0.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    identity: usize,
    generators: Vec<usize>,
    inverses: Vec<usize>,
    permutations: Option<(usize, Vec<Vec<usize>>)>,
    subgroups: OnceLock<Vec<Subgroup>>,
    classes: OnceLock<Vec<SubgroupClass>>,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.identity == other.identity && self.table == other.table
    }
}

impl Eq for FiniteGroup {}

fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&x| a[x]).collect()
}

impl FiniteGroup {
    /// Closure of the given permutations under composition, capped by the
    /// configured maximum group order.
    pub fn from_permutations(degree: usize, gens: &[Vec<usize>]) -> Result<Self> {
        Self::from_permutations_bounded(degree, gens, Limits::from_env().max_group_order)
    }

    pub fn from_permutations_bounded(
        degree: usize,
        gens: &[Vec<usize>],
        bound: usize,
    ) -> Result<Self> {
        for (index, g) in gens.iter().enumerate() {
            let mut seen = vec![false; degree];
            let ok = g.len() == degree
                && g.iter()
                    .all(|&x| x < degree && !std::mem::replace(&mut seen[x], true));
            if !ok {
                return Err(Error::NotBijective { index, degree });
            }
        }
        let id: Vec<usize> = (0..degree).collect();
        let mut elements = vec![id.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(id, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(e) = queue.pop_front() {
            for g in gens {
                let p = compose(&elements[e], g);
                if !index.contains_key(&p) {
                    if elements.len() >= bound {
                        return Err(Error::GroupTooLarge {
                            bound,
                            what: "permutation closure".into(),
                        });
                    }
                    index.insert(p.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(p);
                }
            }
        }
        let order = elements.len();
        let mut table = vec![0; order * order];
        for a in 0..order {
            for b in 0..order {
                table[a * order + b] = index[&compose(&elements[a], &elements[b])];
            }
        }
        let generators = gens.iter().map(|g| index[g]).collect();
        let mut group = Self::assemble(order, table, 0, generators, false)?;
        group.permutations = Some((degree, elements));
        Ok(group)
    }

    /// Group from an explicit multiplication table, fully validated.
    pub fn from_table(
        table: Vec<Vec<usize>>,
        identity: usize,
        generators: Vec<usize>,
    ) -> Result<Self> {
        let order = table.len();
        if order == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        if order > Limits::from_env().max_group_order {
            return Err(Error::GroupTooLarge {
                bound: Limits::from_env().max_group_order,
                what: "multiplication table".into(),
            });
        }
        let mut flat = Vec::with_capacity(order * order);
        for (i, row) in table.iter().enumerate() {
            if row.len() != order {
                return Err(Error::InvalidGroup(format!(
                    "row {i} has length {}",
                    row.len()
                )));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= order) {
                return Err(Error::InvalidGroup(format!("entry {bad} out of range")));
            }
            flat.extend_from_slice(row);
        }
        if identity >= order {
            return Err(Error::InvalidGroup("identity out of range".into()));
        }
        if let Some(&g) = generators.iter().find(|&&g| g >= order) {
            return Err(Error::InvalidGroup(format!("generator {g} out of range")));
        }
        let group = Self::assemble(order, flat, identity, generators, true)?;
        if group.closure(&group.generators).len() != order {
            return Err(Error::InvalidGroup(
                "generators do not generate the group".into(),
            ));
        }
        Ok(group)
    }

    fn assemble(
        order: usize,
        table: Vec<usize>,
        identity: usize,
        generators: Vec<usize>,
        check_associative: bool,
    ) -> Result<Self> {
        let mul = |a: usize, b: usize| table[a * order + b];
        for a in 0..order {
            if mul(identity, a) != a || mul(a, identity) != a {
                return Err(Error::InvalidGroup(format!(
                    "{identity} is not an identity for {a}"
                )));
            }
        }
        if check_associative {
            for a in 0..order {
                for b in 0..order {
                    let ab = mul(a, b);
                    for c in 0..order {
                        if mul(ab, c) != mul(a, mul(b, c)) {
                            return Err(Error::InvalidGroup(format!(
                                "not associative at ({a},{b},{c})"
                            )));
                        }
                    }
                }
            }
        }
        let inverses = (0..order)
            .map(|a| {
                (0..order)
                    .find(|&b| mul(a, b) == identity && mul(b, a) == identity)
                    .ok_or_else(|| Error::InvalidGroup(format!("element {a} has no inverse")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FiniteGroup {
            order,
            table,
            identity,
            generators,
            inverses,
            permutations: None,
            subgroups: OnceLock::new(),
            classes: OnceLock::new(),
        })
    }

    pub fn trivial() -> Self {
        Self::from_permutations_bounded(1, &[], 1).expect("trivial group")
    }

    /// Cyclic group of order `n` as the rotation of `n` points.
    pub fn cyclic(n: usize) -> Self {
        let rot: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        Self::from_permutations_bounded(n, &[rot], n.max(1)).expect("cyclic group")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    /// Distinct non-identity generators.
    pub fn reduced_generators(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for &g in &self.generators {
            if g != self.identity && !out.contains(&g) {
                out.push(g);
            }
        }
        out
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn conjugate(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(g, h), self.inverse(g))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Permutation representation, when the group was built from one.
    pub fn permutation_representation(&self) -> Option<(usize, &[Vec<usize>])> {
        self.permutations.as_ref().map(|(d, p)| (*d, p.as_slice()))
    }

    /// Sorted element set of the subgroup generated by `seeds`.
    pub fn closure(&self, seeds: &[usize]) -> Vec<usize> {
        let mut members = vec![false; self.order];
        members[self.identity] = true;
        let mut list = vec![self.identity];
        let mut i = 0;
        while i < list.len() {
            let x = list[i];
            for &s in seeds {
                let y = self.mul(x, s);
                if !members[y] {
                    members[y] = true;
                    list.push(y);
                }
            }
            i += 1;
        }
        list.sort_unstable();
        list
    }

    /// Breadth-first spanning tree from the identity along right
    /// multiplication by `gens`: entries `(element, parent, generator position)`
    /// with `element = parent * gens[position]`, the identity excluded.
    pub fn spanning_tree(&self, gens: &[usize]) -> Vec<(usize, usize, usize)> {
        let mut seen = vec![false; self.order];
        seen[self.identity] = true;
        let mut queue = VecDeque::from([self.identity]);
        let mut tree = Vec::with_capacity(self.order);
        while let Some(x) = queue.pop_front() {
            for (k, &s) in gens.iter().enumerate() {
                let y = self.mul(x, s);
                if !seen[y] {
                    seen[y] = true;
                    tree.push((y, x, k));
                    queue.push_back(y);
                }
            }
        }
        tree
    }

    /// Extends an assignment on `gens` to every element along the spanning
    /// tree. The result is a homomorphism only if the caller verifies it.
    pub fn extend_along_generators<T: Clone>(
        &self,
        gens: &[usize],
        images: &[T],
        identity: T,
        mul: impl Fn(&T, &T) -> T,
    ) -> Vec<T> {
        let mut out = vec![identity; self.order];
        for (y, x, k) in self.spanning_tree(gens) {
            out[y] = mul(&out[x], &images[k]);
        }
        out
    }

    fn conjugate_set(&self, g: usize, set: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = set.iter().map(|&h| self.conjugate(g, h)).collect();
        out.sort_unstable();
        out
    }

    /// Subgroup from an explicit element list (validated).
    pub fn subgroup(&self, elements: &[usize]) -> Result<Subgroup> {
        let mut sorted = elements.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.iter().any(|&x| x >= self.order) {
            return Err(Error::NotASubgroup("element out of range".into()));
        }
        if !sorted.contains(&self.identity) {
            return Err(Error::NotASubgroup("identity missing".into()));
        }
        for &a in &sorted {
            if sorted.binary_search(&self.inverse(a)).is_err() {
                return Err(Error::NotASubgroup(format!("inverse of {a} missing")));
            }
            for &b in &sorted {
                if sorted.binary_search(&self.mul(a, b)).is_err() {
                    return Err(Error::NotASubgroup(format!("not closed at ({a},{b})")));
                }
            }
        }
        Ok(Subgroup::from_closed_set(self, sorted))
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup::from_closed_set(self, (0..self.order).collect())
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup::from_closed_set(self, vec![self.identity])
    }

    /// Every subgroup, sorted by order and then by element set.
    pub fn all_subgroups(&self) -> &[Subgroup] {
        self.subgroups.get_or_init(|| {
            // every subgroup is a join of cyclic subgroups
            let cyclic: Vec<Vec<usize>> = self.cyclic_element_sets();
            let mut found: BTreeSet<Vec<usize>> = cyclic.iter().cloned().collect();
            let mut frontier: Vec<Vec<usize>> = found.iter().cloned().collect();
            while !frontier.is_empty() {
                let mut next = Vec::new();
                for h in &frontier {
                    for c in &cyclic {
                        if c.iter().all(|x| h.binary_search(x).is_ok()) {
                            continue;
                        }
                        let mut seeds = h.clone();
                        seeds.extend_from_slice(c);
                        let joined = self.closure(&seeds);
                        if found.insert(joined.clone()) {
                            next.push(joined);
                        }
                    }
                }
                frontier = next;
            }
            let mut subs: Vec<Subgroup> = found
                .into_iter()
                .map(|s| Subgroup::from_closed_set(self, s))
                .collect();
            subs.sort_by(|a, b| (a.order(), &a.elements).cmp(&(b.order(), &b.elements)));
            subs
        })
    }

    fn cyclic_element_sets(&self) -> Vec<Vec<usize>> {
        let set: BTreeSet<Vec<usize>> = (0..self.order).map(|g| self.closure(&[g])).collect();
        set.into_iter().collect()
    }

    /// Cyclic subgroups `<g>`, deduplicated, sorted like [`all_subgroups`](Self::all_subgroups).
    pub fn cyclic_subgroups(&self) -> Vec<Subgroup> {
        self.all_subgroups()
            .iter()
            .filter(|s| s.is_cyclic())
            .cloned()
            .collect()
    }

    /// Conjugacy classes of subgroups with their sizes. Each representative
    /// is the lexicographically least element set in its class.
    pub fn subgroup_conjugacy_classes(&self) -> &[SubgroupClass] {
        self.classes.get_or_init(|| {
            let mut assigned: BTreeSet<Vec<usize>> = BTreeSet::new();
            let mut classes = Vec::new();
            for s in self.all_subgroups() {
                if assigned.contains(&s.elements) {
                    continue;
                }
                let orbit: BTreeSet<Vec<usize>> = (0..self.order)
                    .map(|g| self.conjugate_set(g, &s.elements))
                    .collect();
                let rep = orbit.iter().next().expect("nonempty").clone();
                let size = orbit.len();
                assigned.extend(orbit);
                classes.push(SubgroupClass {
                    representative: Subgroup::from_closed_set(self, rep),
                    size,
                });
            }
            classes
        })
    }
}

/// A subgroup of a [`FiniteGroup`], stored as its sorted element set. It
/// refers to the group it was obtained from.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    elements: Vec<usize>,
    cyclic_generator: Option<usize>,
    generators: Vec<usize>,
}

impl Subgroup {
    fn from_closed_set(group: &FiniteGroup, elements: Vec<usize>) -> Self {
        let cyclic_generator = elements
            .iter()
            .copied()
            .find(|&g| group.element_order(g) == elements.len());
        let generators = match cyclic_generator {
            Some(g) if elements.len() > 1 => vec![g],
            Some(_) => Vec::new(),
            None => {
                let mut gens = Vec::new();
                let mut span = vec![group.identity];
                for &x in &elements {
                    if span.binary_search(&x).is_err() {
                        gens.push(x);
                        span = group.closure(&gens);
                    }
                }
                gens
            }
        };
        Subgroup {
            elements,
            cyclic_generator,
            generators,
        }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn contains(&self, g: usize) -> bool {
        self.elements.binary_search(&g).is_ok()
    }

    pub fn is_cyclic(&self) -> bool {
        self.cyclic_generator.is_some()
    }

    /// A generator when the subgroup is cyclic.
    pub fn cyclic_generator(&self) -> Option<usize> {
        self.cyclic_generator
    }

    /// Generating set, empty for the trivial subgroup.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    /// The subgroup as a standalone group; local index `i` stands for
    /// `self.elements()[i]` in the parent.
    pub fn to_group(&self, parent: &FiniteGroup) -> FiniteGroup {
        let n = self.elements.len();
        let local = |g: usize| self.elements.binary_search(&g).expect("closed subgroup");
        let mut table = vec![0; n * n];
        for (i, &a) in self.elements.iter().enumerate() {
            for (j, &b) in self.elements.iter().enumerate() {
                table[i * n + j] = local(parent.mul(a, b));
            }
        }
        let identity = local(parent.identity);
        let generators = self.generators.iter().map(|&g| local(g)).collect();
        let mut g = FiniteGroup::assemble(n, table, identity, generators, false)
            .expect("subgroup of a valid group is a group");
        if let Some((degree, perms)) = &parent.permutations {
            // keep the restricted permutation representation when the identity stays at 0
            if identity == 0 {
                g.permutations = Some((
                    *degree,
                    self.elements.iter().map(|&e| perms[e].clone()).collect(),
                ));
            }
        }
        g
    }
}

/// One conjugacy class of subgroups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupClass {
    pub representative: Subgroup,
    pub size: usize,
}

pub fn group_from_permutations(degree: usize, gens: &[Vec<usize>]) -> Result<FiniteGroup> {
    FiniteGroup::from_permutations(degree, gens)
}

pub fn all_subgroups(g: &FiniteGroup) -> Vec<Subgroup> {
    g.all_subgroups().to_vec()
}

pub fn cyclic_subgroups(g: &FiniteGroup) -> Vec<Subgroup> {
    g.cyclic_subgroups()
}

pub fn subgroup_conjugacy_classes(g: &FiniteGroup) -> Vec<(Subgroup, usize)> {
    g.subgroup_conjugacy_classes()
        .iter()
        .map(|c| (c.representative.clone(), c.size))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v4() -> FiniteGroup {
        FiniteGroup::from_permutations(4, &[vec![1, 0, 3, 2], vec![2, 3, 0, 1]]).unwrap()
    }

    fn s3() -> FiniteGroup {
        FiniteGroup::from_permutations(3, &[vec![1, 2, 0], vec![1, 0, 2]]).unwrap()
    }

    #[test]
    fn closure_orders() {
        assert_eq!(
            FiniteGroup::from_permutations(2, &[vec![1, 0]])
                .unwrap()
                .order(),
            2
        );
        assert_eq!(v4().order(), 4);
        assert_eq!(s3().order(), 6);
        assert_eq!(FiniteGroup::trivial().order(), 1);
    }

    #[test]
    fn rejects_non_bijective_and_oversized() {
        assert_eq!(
            FiniteGroup::from_permutations(3, &[vec![0, 0, 1]]),
            Err(Error::NotBijective {
                index: 0,
                degree: 3
            })
        );
        let s5 = vec![vec![1, 2, 3, 4, 0], vec![1, 0, 2, 3, 4]];
        assert!(matches!(
            FiniteGroup::from_permutations_bounded(5, &s5, 100),
            Err(Error::GroupTooLarge { .. })
        ));
        assert_eq!(
            FiniteGroup::from_permutations_bounded(5, &s5, 120)
                .unwrap()
                .order(),
            120
        );
    }

    #[test]
    fn subgroup_counts() {
        assert_eq!(FiniteGroup::cyclic(2).all_subgroups().len(), 2);
        assert_eq!(v4().all_subgroups().len(), 5);
        assert_eq!(s3().all_subgroups().len(), 6);
    }

    #[test]
    fn cyclic_subgroup_counts() {
        assert_eq!(FiniteGroup::trivial().cyclic_subgroups().len(), 1);
        assert_eq!(v4().cyclic_subgroups().len(), 4);
        assert_eq!(FiniteGroup::cyclic(6).cyclic_subgroups().len(), 4);
    }

    #[test]
    fn conjugacy_classes() {
        for c in v4().subgroup_conjugacy_classes() {
            assert_eq!(c.size, 1);
        }
        let classes = s3().subgroup_conjugacy_classes().to_vec();
        assert_eq!(classes.len(), 4);
        assert_eq!(
            classes.iter().map(|c| c.size).collect::<Vec<_>>(),
            vec![1, 3, 1, 1]
        );
        let d4 = FiniteGroup::from_permutations(4, &[vec![1, 2, 3, 0], vec![0, 3, 2, 1]]).unwrap();
        assert_eq!(d4.order(), 8);
        assert_eq!(d4.subgroup_conjugacy_classes().len(), 8);
    }

    #[test]
    fn table_validation() {
        let bad = vec![vec![0, 1], vec![1, 1]];
        assert!(FiniteGroup::from_table(bad, 0, vec![1]).is_err());
        let c2 = FiniteGroup::from_table(vec![vec![0, 1], vec![1, 0]], 0, vec![1]).unwrap();
        assert_eq!(c2, FiniteGroup::cyclic(2));
        assert!(FiniteGroup::from_table(vec![vec![0, 1], vec![1, 0]], 0, vec![]).is_err());
    }

    #[test]
    fn standalone_subgroup() {
        let g = s3();
        let c3 = g
            .all_subgroups()
            .iter()
            .find(|s| s.order() == 3)
            .unwrap()
            .clone();
        let h = c3.to_group(&g);
        assert_eq!(h.order(), 3);
        assert!(h.is_abelian());
        assert_eq!(h.element_order(h.generators()[0]), 3);
    }
}
