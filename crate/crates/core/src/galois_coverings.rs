//! Finite groups and actions, pseudo-torsors, Galois coverings, the
//! category of Galois coverings over an object, and limits of torsor systems.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::cat_core::{FiniteCategory, Mor, Obj};
use crate::coverage_topology::{saturate, MorphismCollection};
use crate::error::{Error, Result};
use crate::site_validation::Site;

/// A finite group given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupTable {
    pub elements: Vec<String>,
    /// `mul[a][b] = a·b`.
    pub mul: Vec<Vec<usize>>,
    pub unit: usize,
    pub inv: Vec<usize>,
}

impl GroupTable {
    /// Validates the group axioms and derives inverses.
    pub fn new(elements: Vec<String>, mul: Vec<Vec<usize>>, unit: usize) -> Result<Self> {
        let n = elements.len();
        if n == 0 || unit >= n {
            return Err(Error::input("a group needs a unit element"));
        }
        if mul.len() != n
            || mul
                .iter()
                .any(|row| row.len() != n || row.iter().any(|&x| x >= n))
        {
            return Err(Error::input("multiplication table has the wrong shape"));
        }
        let names: BTreeSet<&String> = elements.iter().collect();
        if names.len() != n {
            return Err(Error::input("duplicate group element ids"));
        }
        for a in 0..n {
            if mul[unit][a] != a || mul[a][unit] != a {
                return Err(Error::input(format!(
                    "{} is not a two-sided unit",
                    elements[unit]
                )));
            }
            for b in 0..n {
                for c in 0..n {
                    if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                        return Err(Error::input(format!(
                            "multiplication is not associative at ({}, {}, {})",
                            elements[a], elements[b], elements[c]
                        )));
                    }
                }
            }
        }
        let mut inv = Vec::with_capacity(n);
        for a in 0..n {
            match (0..n).find(|&b| mul[a][b] == unit && mul[b][a] == unit) {
                Some(b) => inv.push(b),
                None => return Err(Error::input(format!("{} has no inverse", elements[a]))),
            }
        }
        Ok(GroupTable {
            elements,
            mul,
            unit,
            inv,
        })
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    pub fn cyclic(n: usize) -> Self {
        let elements = (0..n).map(|i| i.to_string()).collect();
        let mul = (0..n)
            .map(|a| (0..n).map(|b| (a + b) % n).collect())
            .collect();
        GroupTable::new(elements, mul, 0).expect("cyclic group")
    }

    pub fn product(a: &GroupTable, b: &GroupTable) -> Self {
        let (na, nb) = (a.order(), b.order());
        let elements = (0..na * nb)
            .map(|k| format!("({},{})", a.elements[k / nb], b.elements[k % nb]))
            .collect();
        let mul = (0..na * nb)
            .map(|x| {
                (0..na * nb)
                    .map(|y| a.mul[x / nb][y / nb] * nb + b.mul[x % nb][y % nb])
                    .collect()
            })
            .collect();
        GroupTable::new(elements, mul, a.unit * nb + b.unit).expect("direct product")
    }

    /// The symmetric group on `n` points; elements are one-line notations,
    /// and `a·b` is "a after b".
    pub fn symmetric(n: usize) -> Self {
        let mut perms: Vec<Vec<usize>> = vec![vec![]];
        for _ in 0..n {
            let mut next = Vec::new();
            for p in &perms {
                for x in (0..n).filter(|x| !p.contains(x)) {
                    let mut q = p.clone();
                    q.push(x);
                    next.push(q);
                }
            }
            perms = next;
        }
        perms.sort();
        let index: HashMap<Vec<usize>, usize> = perms
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, p)| (p, i))
            .collect();
        let mul = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| index[&b.iter().map(|&i| a[i]).collect::<Vec<_>>()])
                    .collect()
            })
            .collect();
        let elements = perms
            .iter()
            .map(|p| p.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(""))
            .collect();
        GroupTable::new(elements, mul, 0).expect("symmetric group")
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != self.unit {
            x = self.mul[x][g];
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order()).all(|a| (0..self.order()).all(|b| self.mul[a][b] == self.mul[b][a]))
    }

    /// Smallest subgroup containing `gens`, as a sorted element list.
    pub fn generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        seen[self.unit] = true;
        let mut queue = VecDeque::from([self.unit]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul[x][g];
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..self.order()).filter(|&x| seen[x]).collect()
    }

    /// Every subgroup, sorted by order and then by element list.
    pub fn subgroups(&self) -> Vec<Vec<usize>> {
        let mut found: BTreeSet<Vec<usize>> =
            (0..self.order()).map(|g| self.generated(&[g])).collect();
        loop {
            let current: Vec<Vec<usize>> = found.iter().cloned().collect();
            let mut grew = false;
            for (i, h) in current.iter().enumerate() {
                for k in &current[i + 1..] {
                    let mut gens = h.clone();
                    gens.extend(k);
                    if found.insert(self.generated(&gens)) {
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
        let mut out: Vec<Vec<usize>> = found.into_iter().collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        out
    }

    /// `g H g⁻¹`, sorted.
    pub fn conjugate(&self, h: &[usize], g: usize) -> Vec<usize> {
        let mut out: Vec<usize> = h
            .iter()
            .map(|&x| self.mul[self.mul[g][x]][self.inv[g]])
            .collect();
        out.sort();
        out
    }

    pub fn is_normal(&self, h: &[usize]) -> bool {
        (0..self.order()).all(|g| self.conjugate(h, g) == h)
    }

    /// `G/N` for a normal subgroup `N`, with the projection.
    pub fn quotient(&self, normal: &[usize]) -> Result<(GroupTable, Vec<usize>)> {
        if !self.is_normal(normal) || self.generated(normal) != normal {
            return Err(Error::input("quotient needs a normal subgroup"));
        }
        let mut class = vec![usize::MAX; self.order()];
        let mut reps = Vec::new();
        for g in 0..self.order() {
            if class[g] == usize::MAX {
                for &n in normal {
                    class[self.mul[g][n]] = reps.len();
                }
                reps.push(g);
            }
        }
        let elements = reps
            .iter()
            .map(|&g| format!("{}N", self.elements[g]))
            .collect();
        let mul = reps
            .iter()
            .map(|&a| reps.iter().map(|&b| class[self.mul[a][b]]).collect())
            .collect();
        Ok((GroupTable::new(elements, mul, class[self.unit])?, class))
    }

    /// Greedy generating set in element order.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![self.unit];
        for g in 0..self.order() {
            if span.binary_search(&g).is_err() {
                gens.push(g);
                span = self.generated(&gens);
            }
        }
        gens
    }

    pub fn is_homomorphism(&self, target: &GroupTable, map: &[usize]) -> bool {
        map.len() == self.order()
            && (0..self.order()).all(|a| {
                (0..self.order()).all(|b| map[self.mul[a][b]] == target.mul[map[a]][map[b]])
            })
    }
}

/// An isomorphism `a → b` found by exhaustive search over generator images.
pub fn find_isomorphism(a: &GroupTable, b: &GroupTable) -> Option<Vec<usize>> {
    if a.order() != b.order() {
        return None;
    }
    let gens = a.generators();
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&g| {
            (0..b.order())
                .filter(|&x| b.element_order(x) == a.element_order(g))
                .collect()
        })
        .collect();
    let mut choice = vec![0usize; gens.len()];
    if candidates.iter().any(|c| c.is_empty()) {
        return None;
    }
    loop {
        let images: Vec<usize> = choice.iter().zip(&candidates).map(|(&i, c)| c[i]).collect();
        if let Some(map) = extend_to_homomorphism(a, b, &gens, &images) {
            let distinct: BTreeSet<usize> = map.iter().copied().collect();
            if distinct.len() == a.order() {
                return Some(map);
            }
        }
        let mut k = 0;
        loop {
            if k == choice.len() {
                return None;
            }
            choice[k] += 1;
            if choice[k] < candidates[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

fn extend_to_homomorphism(
    a: &GroupTable,
    b: &GroupTable,
    gens: &[usize],
    images: &[usize],
) -> Option<Vec<usize>> {
    let mut map = vec![usize::MAX; a.order()];
    map[a.unit] = b.unit;
    let mut queue = VecDeque::from([a.unit]);
    while let Some(x) = queue.pop_front() {
        for (&g, &img) in gens.iter().zip(images) {
            let y = a.mul[x][g];
            let target = b.mul[map[x]][img];
            if map[y] == usize::MAX {
                map[y] = target;
                queue.push_back(y);
            } else if map[y] != target {
                return None;
            }
        }
    }
    a.is_homomorphism(b, &map).then_some(map)
}

/// A left action of a finite group on a finite set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAction {
    pub group: GroupTable,
    pub carrier: Vec<String>,
    /// `act[g][s] = g·s`.
    pub act: Vec<Vec<usize>>,
}

impl GroupAction {
    pub fn new(group: GroupTable, carrier: Vec<String>, act: Vec<Vec<usize>>) -> Result<Self> {
        let n = carrier.len();
        if act.len() != group.order()
            || act
                .iter()
                .any(|row| row.len() != n || row.iter().any(|&s| s >= n))
        {
            return Err(Error::input("action table has the wrong shape"));
        }
        for s in 0..n {
            if act[group.unit][s] != s {
                return Err(Error::input("the unit does not act trivially"));
            }
            for g in 0..group.order() {
                for h in 0..group.order() {
                    if act[group.mul[g][h]][s] != act[g][act[h][s]] {
                        return Err(Error::input("action does not respect multiplication"));
                    }
                }
            }
        }
        Ok(GroupAction {
            group,
            carrier,
            act,
        })
    }

    /// `G` acting on itself by left multiplication.
    pub fn regular(group: &GroupTable) -> Self {
        GroupAction {
            group: group.clone(),
            carrier: group.elements.clone(),
            act: group.mul.clone(),
        }
    }

    pub fn is_free(&self) -> bool {
        (0..self.carrier.len())
            .all(|s| (0..self.group.order()).all(|g| g == self.group.unit || self.act[g][s] != s))
    }

    pub fn is_torsor(&self) -> bool {
        !self.carrier.is_empty()
            && self.is_free()
            && (0..self.carrier.len()).all(|s| {
                let orbit: BTreeSet<usize> =
                    (0..self.group.order()).map(|g| self.act[g][0]).collect();
                orbit.contains(&s)
            })
    }
}

/// Checks that `phi: S → S'` is a pseudo-torsor for the action on `S`.
///
/// Returns the first violated condition: 1 invariance, 2 freeness,
/// 3 injectivity of the orbit map.
pub fn is_pseudo_torsor(phi: &[usize], action: &GroupAction) -> std::result::Result<(), u8> {
    let g = &action.group;
    let n = action.carrier.len();
    for s in 0..n {
        for x in 0..g.order() {
            if phi[action.act[x][s]] != phi[s] {
                return Err(1);
            }
        }
    }
    if !action.is_free() {
        return Err(2);
    }
    for s in 0..n {
        for t in 0..n {
            if phi[s] == phi[t] && !(0..g.order()).any(|x| action.act[x][s] == t) {
                return Err(3);
            }
        }
    }
    Ok(())
}

/// `Hom_X(Y1, Y2) = {h | f2 ∘ h = f1}`.
pub fn hom_over(c: &FiniteCategory, f1: Mor, f2: Mor) -> Vec<Mor> {
    assert_eq!(c.dst(f1), c.dst(f2), "hom_over needs a common target");
    c.hom(c.src(f1), c.src(f2))
        .iter()
        .copied()
        .filter(|&h| c.compose(f2, h) == f1)
        .collect()
}

/// The automorphism group of `f: Y → X` over `X`, together with `End_X(Y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OverGroup {
    pub covering: Mor,
    /// Automorphisms in id order; group element `i` is `members[i]`.
    pub members: Vec<Mor>,
    pub table: GroupTable,
    pub endomorphisms: Vec<Mor>,
}

impl OverGroup {
    pub fn index_of(&self, m: Mor) -> Option<usize> {
        self.members.iter().position(|&x| x == m)
    }
}

pub fn aut_over(c: &FiniteCategory, f: Mor) -> OverGroup {
    let endomorphisms = hom_over(c, f, f);
    let members: Vec<Mor> = endomorphisms
        .iter()
        .copied()
        .filter(|&h| c.inverse(h).is_some_and(|k| endomorphisms.contains(&k)))
        .collect();
    let pos: HashMap<Mor, usize> = members.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let mul = members
        .iter()
        .map(|&a| members.iter().map(|&b| pos[&c.compose(a, b)]).collect())
        .collect();
    let unit = pos[&c.identity(c.src(f))];
    let table = GroupTable::new(c.names(&members), mul, unit)
        .expect("automorphisms over a base form a group");
    OverGroup {
        covering: f,
        members,
        table,
        endomorphisms,
    }
}

/// `Aut_X(Y)` when `f: Y → X` is a Galois covering, `None` otherwise.
pub fn is_galois_covering(c: &FiniteCategory, f: Mor) -> Option<OverGroup> {
    let aut = aut_over(c, f);
    let y = c.src(f);
    let id = c.identity(y);
    for z in c.objects() {
        let homs = c.hom(z, y);
        for &h in homs {
            for &s in &aut.members {
                if s != id && c.compose(s, h) == h {
                    return None;
                }
            }
            let fh = c.compose(f, h);
            for &k in homs {
                if c.compose(f, k) == fh && !aut.members.iter().any(|&s| c.compose(s, h) == k) {
                    return None;
                }
            }
        }
    }
    Some(aut)
}

/// All Galois coverings of `c`.
pub fn galois_coverings(c: &FiniteCategory) -> MorphismCollection {
    MorphismCollection::from_predicate(c, |f| is_galois_covering(c, f).is_some())
}

/// Compares the saturation of the Galois coverings inside `saturate(t)`
/// with `saturate(t)`; on failure returns a morphism in one but not the other.
pub fn enough_galois_coverings(
    c: &FiniteCategory,
    t: &MorphismCollection,
) -> std::result::Result<(), Mor> {
    let covering = saturate(c, t);
    let galois = galois_coverings(c);
    let inside =
        MorphismCollection::from_predicate(c, |f| galois.contains(f) && covering.contains(f));
    let sat = saturate(c, &inside);
    match c
        .morphisms()
        .find(|&f| sat.contains(f) != covering.contains(f))
    {
        Some(f) => Err(f),
        None => Ok(()),
    }
}

/// The thin cofiltered category of Galois coverings over an object.
#[derive(Clone, Debug)]
pub struct GalOver {
    pub base: Obj,
    pub category: FiniteCategory,
    /// Covering morphism of each object of `category`, in object order.
    pub coverings: Vec<Mor>,
    pub groups: Vec<OverGroup>,
}

impl GalOver {
    /// Least morphism over the base from the covering of `a` to the covering of `b`.
    pub fn transition(&self, c: &FiniteCategory, a: usize, b: usize) -> Option<Mor> {
        hom_over(c, self.coverings[a], self.coverings[b])
            .first()
            .copied()
    }

    pub fn position(&self, f: Mor) -> Option<usize> {
        self.coverings.iter().position(|&g| g == f)
    }
}

/// Builds `Gal/X`: Galois coverings of `x` in the covering collection, with
/// one arrow whenever a morphism over `x` exists.
pub fn galois_category_over(site: &Site, x: Obj) -> Result<GalOver> {
    let c = &site.category;
    if let Err(f) = enough_galois_coverings(c, site.topology.basis()) {
        return Err(Error::precondition(format!(
            "site lacks enough Galois coverings (witness {})",
            c.mor_name(f)
        )));
    }
    let covering = site.covering();
    let mut coverings = Vec::new();
    let mut groups = Vec::new();
    for f in c.incoming(x) {
        if covering.contains(f) {
            if let Some(g) = is_galois_covering(c, f) {
                coverings.push(f);
                groups.push(g);
            }
        }
    }
    let mut arrows = Vec::new();
    for (i, &f1) in coverings.iter().enumerate() {
        for (j, &f2) in coverings.iter().enumerate() {
            let homs = hom_over(c, f1, f2);
            if homs.is_empty() || i == j {
                continue;
            }
            let h0 = homs[0];
            if homs
                .iter()
                .any(|&h| !groups[j].members.iter().any(|&s| c.compose(s, h0) == h))
            {
                return Err(Error::invariant(format!(
                    "Gal/{} is not thin between {} and {}",
                    c.obj_name(x),
                    c.mor_name(f1),
                    c.mor_name(f2)
                )));
            }
            arrows.push((
                format!("hom({},{})", c.mor_name(f1), c.mor_name(f2)),
                c.mor_name(f1).to_string(),
                c.mor_name(f2).to_string(),
            ));
        }
    }
    let objects: Vec<String> = coverings
        .iter()
        .map(|&f| c.mor_name(f).to_string())
        .collect();
    let ends: HashMap<String, (String, String)> = arrows
        .iter()
        .map(|(n, a, b)| (n.clone(), (a.clone(), b.clone())))
        .collect();
    let end_of = |name: &str| -> (String, String) {
        match name.strip_prefix("id:") {
            Some(o) if !ends.contains_key(name) => (o.to_string(), o.to_string()),
            _ => ends[name].clone(),
        }
    };
    let category = FiniteCategory::from_rule(objects, arrows.clone(), |g, f| {
        let (a, _) = end_of(f);
        let (_, b) = end_of(g);
        if a == b {
            format!("id:{a}")
        } else {
            format!("hom({a},{b})")
        }
    })?;
    if category.num_objects() == 0 {
        return Err(Error::invariant("Gal/X is empty"));
    }
    if crate::cat_core::lambda_violation(&category, &|_| true).is_some() {
        return Err(Error::invariant(format!(
            "Gal/{} is not cofiltered",
            c.obj_name(x)
        )));
    }
    Ok(GalOver {
        base: x,
        category,
        coverings,
        groups,
    })
}

/// A projective system of torsors over a finite poset.
///
/// For `i ≤ j` there are maps `G_j → G_i` and `S_j → S_i`.
#[derive(Clone, Debug)]
pub struct TorsorSystem {
    pub indices: Vec<String>,
    /// `le[i][j]` iff `i ≤ j`.
    pub le: Vec<Vec<bool>>,
    pub torsors: Vec<GroupAction>,
    pub group_maps: HashMap<(usize, usize), Vec<usize>>,
    pub torsor_maps: HashMap<(usize, usize), Vec<usize>>,
}

impl TorsorSystem {
    /// Checks the poset, the torsor property, homomorphism and equivariance
    /// of transitions, and functoriality along the poset.
    pub fn validate(&self) -> Result<()> {
        let n = self.indices.len();
        if self.le.len() != n || self.torsors.len() != n {
            return Err(Error::input("torsor system tables have inconsistent sizes"));
        }
        for i in 0..n {
            if !self.le[i][i] {
                return Err(Error::input("index relation is not reflexive"));
            }
            for j in 0..n {
                if i != j && self.le[i][j] && self.le[j][i] {
                    return Err(Error::input("index relation is not antisymmetric"));
                }
                for k in 0..n {
                    if self.le[i][j] && self.le[j][k] && !self.le[i][k] {
                        return Err(Error::input("index relation is not transitive"));
                    }
                }
            }
        }
        for (i, t) in self.torsors.iter().enumerate() {
            if !t.is_torsor() {
                return Err(Error::input(format!(
                    "carrier at {} is not a torsor",
                    self.indices[i]
                )));
            }
        }
        for j in 0..n {
            for i in 0..n {
                if !self.le[i][j] {
                    continue;
                }
                let (gj, gi) = (&self.torsors[j].group, &self.torsors[i].group);
                let phi = self.group_map(j, i)?;
                let f = self.torsor_map(j, i)?;
                if !gj.is_homomorphism(gi, phi) {
                    return Err(Error::input(format!(
                        "group transition {}→{} is not a homomorphism",
                        self.indices[j], self.indices[i]
                    )));
                }
                for g in 0..gj.order() {
                    for s in 0..self.torsors[j].carrier.len() {
                        if f[self.torsors[j].act[g][s]] != self.torsors[i].act[phi[g]][f[s]] {
                            return Err(Error::input("torsor transition is not equivariant"));
                        }
                    }
                }
                for k in 0..n {
                    if self.le[j][k] {
                        let (fk, fkj) = (self.torsor_map(k, i)?, self.torsor_map(k, j)?);
                        if (0..fk.len()).any(|s| fk[s] != f[fkj[s]]) {
                            return Err(Error::input("torsor transitions do not compose"));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn group_map(&self, j: usize, i: usize) -> Result<&Vec<usize>> {
        self.group_maps
            .get(&(j, i))
            .ok_or_else(|| Error::input("missing group transition"))
    }

    fn torsor_map(&self, j: usize, i: usize) -> Result<&Vec<usize>> {
        self.torsor_maps
            .get(&(j, i))
            .ok_or_else(|| Error::input("missing torsor transition"))
    }

    /// Checks `f_{j,i}(s_j) = s_i` for every `i ≤ j`.
    pub fn is_compatible(&self, family: &[usize]) -> bool {
        let n = self.indices.len();
        family.len() == n
            && (0..n).all(|j| {
                (0..n).all(|i| !self.le[i][j] || self.torsor_maps[&(j, i)][family[j]] == family[i])
            })
    }
}

/// The least compatible family, searched from maximal indices downwards.
pub fn torsor_limit(ts: &TorsorSystem) -> Result<Option<Vec<usize>>> {
    ts.validate()?;
    let n = ts.indices.len();
    let mut order: Vec<usize> = (0..n).collect();
    // Indices with more elements above them come later.
    order.sort_by_key(|&i| ((0..n).filter(|&j| ts.le[i][j]).count(), i));
    let mut family = vec![usize::MAX; n];
    fn search(ts: &TorsorSystem, order: &[usize], k: usize, family: &mut Vec<usize>) -> bool {
        if k == order.len() {
            return true;
        }
        let i = order[k];
        for s in 0..ts.torsors[i].carrier.len() {
            let consistent = order[..k].iter().all(|&j| {
                if ts.le[i][j] {
                    ts.torsor_maps[&(j, i)][family[j]] == s
                } else if ts.le[j][i] {
                    ts.torsor_maps[&(i, j)][s] == family[j]
                } else {
                    true
                }
            });
            if consistent {
                family[i] = s;
                if search(ts, order, k + 1, family) {
                    return true;
                }
            }
        }
        family[i] = usize::MAX;
        false
    }
    Ok(search(ts, &order, 0, &mut family).then_some(family))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat_core::fixtures::*;

    fn swap_action() -> GroupAction {
        GroupAction::new(
            GroupTable::cyclic(2),
            vec!["0".into(), "1".into()],
            vec![vec![0, 1], vec![1, 0]],
        )
        .unwrap()
    }

    #[test]
    fn group_constructors() {
        assert_eq!(GroupTable::symmetric(3).order(), 6);
        assert!(!GroupTable::symmetric(3).is_abelian());
        let k4 = GroupTable::product(&GroupTable::cyclic(2), &GroupTable::cyclic(2));
        assert!(find_isomorphism(&k4, &GroupTable::cyclic(4)).is_none());
        assert!(find_isomorphism(
            &GroupTable::cyclic(6),
            &GroupTable::product(&GroupTable::cyclic(2), &GroupTable::cyclic(3))
        )
        .is_some());
        assert!(find_isomorphism(&GroupTable::cyclic(6), &GroupTable::symmetric(3)).is_none());
        assert_eq!(GroupTable::symmetric(3).subgroups().len(), 6);
        assert_eq!(GroupTable::symmetric(4).subgroups().len(), 30);
        assert_eq!(GroupTable::cyclic(12).subgroups().len(), 6);
    }

    #[test]
    fn pseudo_torsor_examples() {
        let trivial = GroupAction::new(
            GroupTable::trivial(),
            vec!["a".into(), "b".into()],
            vec![vec![0, 1]],
        )
        .unwrap();
        assert_eq!(is_pseudo_torsor(&[0, 1], &trivial), Ok(()));
        assert_eq!(is_pseudo_torsor(&[0, 0], &swap_action()), Ok(()));
        let fixed = GroupAction::new(
            GroupTable::cyclic(2),
            vec!["0".into(), "1".into()],
            vec![vec![0, 1], vec![0, 1]],
        )
        .unwrap();
        assert_eq!(is_pseudo_torsor(&[0, 0], &fixed), Err(2));
    }

    #[test]
    fn z2_site_galois() {
        let c = z2_site();
        let pi = c.morphism("π").unwrap();
        let g = is_galois_covering(&c, pi).unwrap();
        assert_eq!(c.names(&g.members), vec!["id:P", "σ"]);
        assert!(find_isomorphism(&g.table, &GroupTable::cyclic(2)).is_some());
        for x in c.objects() {
            assert_eq!(
                is_galois_covering(&c, c.identity(x)).unwrap().table.order(),
                1
            );
        }
        assert!(enough_galois_coverings(&c, &MorphismCollection::all(&c)).is_ok());
    }

    #[test]
    fn parallel_arrows_are_galois() {
        let c = FiniteCategory::new(
            vec!["a".into(), "b".into()],
            vec![
                ("f".into(), "a".into(), "b".into()),
                ("g".into(), "a".into(), "b".into()),
            ],
            vec![],
        )
        .unwrap();
        // Both arrows are monic, so each is Galois with trivial group.
        for f in c.morphisms() {
            assert_eq!(is_galois_covering(&c, f).unwrap().table.order(), 1);
        }
        assert!(enough_galois_coverings(&c, &MorphismCollection::all(&c)).is_ok());
    }

    #[test]
    fn gal_over_z2() {
        let site = Site::atomic(z2_site()).unwrap();
        let t = site.category.object("T").unwrap();
        let gal = galois_category_over(&site, t).unwrap();
        assert_eq!(gal.category.num_objects(), 2);
        assert_eq!(gal.category.num_morphisms(), 3);
        let p = site.category.object("P").unwrap();
        assert_eq!(
            galois_category_over(&site, p)
                .unwrap()
                .category
                .num_objects(),
            2
        );
    }

    #[test]
    fn torsor_limit_examples() {
        let single = TorsorSystem {
            indices: vec!["0".into()],
            le: vec![vec![true]],
            torsors: vec![swap_action()],
            group_maps: HashMap::from([((0, 0), vec![0, 1])]),
            torsor_maps: HashMap::from([((0, 0), vec![0, 1])]),
        };
        assert_eq!(torsor_limit(&single).unwrap(), Some(vec![0]));
        let chain = TorsorSystem {
            indices: vec!["lo".into(), "hi".into()],
            le: vec![vec![true, true], vec![false, true]],
            torsors: vec![swap_action(), swap_action()],
            group_maps: HashMap::from([
                ((0, 0), vec![0, 1]),
                ((1, 1), vec![0, 1]),
                ((1, 0), vec![0, 1]),
            ]),
            torsor_maps: HashMap::from([
                ((0, 0), vec![0, 1]),
                ((1, 1), vec![0, 1]),
                ((1, 0), vec![1, 0]),
            ]),
        };
        let fam = torsor_limit(&chain).unwrap().unwrap();
        assert!(chain.is_compatible(&fam));
        assert_eq!(fam, vec![1, 0]);
        let empty = GroupAction {
            group: GroupTable::trivial(),
            carrier: vec![],
            act: vec![vec![]],
        };
        let bad = TorsorSystem {
            torsors: vec![empty],
            ..single
        };
        assert!(matches!(torsor_limit(&bad), Err(Error::Input(_))));
    }
}
