//! The Galois monoid of a grid, the subgroups `K_X`, the pro-group `H_X`
//! with the comparison maps `ψ_X` and `φ_X`, and the coset topology.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::grid::{edge_objects, lift_under, transport_under, validate_grid, Grid};
use crate::cat_core::{CatFunctor, FiniteCategory, Mor, NaturalIso, Obj};
use crate::error::{Error, Result};
use crate::galois_coverings::{is_galois_covering, GroupTable, OverGroup};
use crate::report::{Level, ValidationReport};
use crate::site_validation::Site;

/// Largest grid handled by the exhaustive element search.
pub const EXHAUSTIVE_GRID_LIMIT: usize = 12;

/// A pair `(α, γ)`: a monotone endomap of the grid and a natural isomorphism
/// `γ: ι ≅ ι ∘ α`, stored by components.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MonoidElement {
    pub alpha: Vec<Obj>,
    pub gamma: Vec<Mor>,
}

impl MonoidElement {
    pub fn identity(g: &Grid, c: &FiniteCategory) -> Self {
        MonoidElement {
            alpha: g.objects().collect(),
            gamma: g.objects().map(|x| c.identity(g.image(x))).collect(),
        }
    }

    /// `self ∘ other = (αβ, β*γ_α ∘ γ_β)`.
    pub fn compose(&self, other: &MonoidElement, c: &FiniteCategory) -> MonoidElement {
        MonoidElement {
            alpha: other.alpha.iter().map(|&x| self.alpha[x]).collect(),
            gamma: other
                .gamma
                .iter()
                .zip(&other.alpha)
                .map(|(&gb, &bx)| c.compose(self.gamma[bx], gb))
                .collect(),
        }
    }

    pub fn validate(&self, g: &Grid, c: &FiniteCategory) -> Result<()> {
        if self.alpha.len() != g.len() || self.gamma.len() != g.len() {
            return Err(Error::input("monoid element does not match the grid size"));
        }
        let mut mor_map = Vec::with_capacity(g.poset.num_morphisms());
        for m in g.poset.morphisms() {
            let (a, b) = (self.alpha[g.poset.src(m)], self.alpha[g.poset.dst(m)]);
            let image = g.poset.hom(a, b).first().ok_or_else(|| {
                Error::invariant(format!("α is not monotone at {}", g.poset.mor_name(m)))
            })?;
            mor_map.push(*image);
        }
        let alpha = CatFunctor {
            obj_map: self.alpha.clone(),
            mor_map,
        };
        NaturalIso {
            components: self.gamma.clone(),
        }
        .validate(&g.poset, c, &g.iota, &alpha.then(&g.iota))
    }
}

/// A basic open set `m·K_X`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coset {
    pub element: usize,
    pub edge: Obj,
    pub members: Vec<usize>,
}

/// The Galois monoid of a finite grid with its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaloisMonoid {
    pub elements: Vec<MonoidElement>,
    /// `mul[a][b] = a ∘ b`.
    pub mul: Vec<Vec<usize>>,
    pub unit: usize,
    pub edges: Vec<Obj>,
    /// `K_X` for every edge object.
    pub k: BTreeMap<Obj, Vec<usize>>,
    pub coset_basis: Vec<Coset>,
}

impl GaloisMonoid {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index_of(&self, m: &MonoidElement) -> Option<usize> {
        self.elements.iter().position(|e| e == m)
    }

    pub fn name(&self, i: usize) -> String {
        format!("m{i}")
    }

    pub fn is_invertible(&self, a: usize) -> bool {
        (0..self.order()).any(|b| self.mul[a][b] == self.unit && self.mul[b][a] == self.unit)
    }

    /// The multiplication table as a group, when every element is invertible.
    pub fn as_group(&self) -> Option<GroupTable> {
        if !(0..self.order()).all(|a| self.is_invertible(a)) {
            return None;
        }
        GroupTable::new(
            (0..self.order()).map(|i| self.name(i)).collect(),
            self.mul.clone(),
            self.unit,
        )
        .ok()
    }

    /// Elements with `α(x) = y` and `γ(x) = b`.
    pub fn moving(&self, x: Obj, y: Obj, b: Mor) -> impl Iterator<Item = usize> + '_ {
        (0..self.order())
            .filter(move |&i| self.elements[i].alpha[x] == y && self.elements[i].gamma[x] == b)
    }

    pub fn k_of(&self, x: Obj) -> Result<&[usize]> {
        self.k
            .get(&x)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::precondition(format!("object {x} is not an edge object")))
    }
}

/// The element determined by `α(e) = x'` and `γ(e) = β` at the least object
/// `e`, if the forced extension to the whole grid exists.
///
/// For `z ≥ e`, naturality forces `γ(z) ∘ ι(e → z) = ι(x' → α(z)) ∘ β`, so
/// `(α(z), γ(z))` is the unique lift of `ι(e → z) ∘ β⁻¹` under `x'`.
fn extend_from_least(
    g: &Grid,
    c: &FiniteCategory,
    e: Obj,
    x2: Obj,
    beta: Mor,
) -> Result<Option<MonoidElement>> {
    let beta_inv = c
        .inverse(beta)
        .ok_or_else(|| Error::invariant("seed is not an isomorphism"))?;
    let mut alpha = Vec::with_capacity(g.len());
    let mut gamma = Vec::with_capacity(g.len());
    for z in g.objects() {
        let u = c.compose(g.image_arrow(e, z).expect("e is least"), beta_inv);
        match lift_under(g, c, x2, u)[..] {
            [] => return Ok(None),
            [(y, a)] => {
                alpha.push(y);
                gamma.push(c.inverse(a).expect("lifts are isomorphisms"));
            }
            _ => {
                return Err(Error::invariant(format!(
                    "several lifts under {}",
                    g.name(x2)
                )))
            }
        }
    }
    Ok(Some(MonoidElement { alpha, gamma }))
}

/// Every element of the monoid, seeded at the least object of the grid.
///
/// An element is determined by its value at the least object, so the seeds
/// `(x', β: ι(e) ≅ ι(x'))` are extended and each extension is checked
/// against the full definition.
pub fn seeded_elements(g: &Grid, c: &FiniteCategory) -> Result<Vec<MonoidElement>> {
    let e = g
        .least()
        .ok_or_else(|| Error::precondition("grid has no least object"))?;
    let mut out = Vec::new();
    for x2 in g.objects() {
        for beta in c.isos(g.image(e), g.image(x2)) {
            if let Some(m) = extend_from_least(g, c, e, x2, beta)? {
                if m.validate(g, c).is_ok() {
                    out.push(m);
                }
            }
        }
    }
    Ok(out)
}

/// Every element of the monoid by backtracking over monotone maps and
/// isomorphism components, pruned by naturality.
pub fn exhaustive_elements(g: &Grid, c: &FiniteCategory) -> Result<Vec<MonoidElement>> {
    if g.len() > EXHAUSTIVE_GRID_LIMIT {
        return Err(Error::resource(format!(
            "exhaustive search is limited to {EXHAUSTIVE_GRID_LIMIT} grid objects"
        )));
    }
    let mut out = Vec::new();
    let mut alpha = Vec::new();
    let mut gamma = Vec::new();
    exhaustive_step(g, c, &mut alpha, &mut gamma, &mut out);
    out.sort();
    Ok(out)
}

fn exhaustive_step(
    g: &Grid,
    c: &FiniteCategory,
    alpha: &mut Vec<Obj>,
    gamma: &mut Vec<Mor>,
    out: &mut Vec<MonoidElement>,
) {
    let x = alpha.len();
    if x == g.len() {
        out.push(MonoidElement {
            alpha: alpha.clone(),
            gamma: gamma.clone(),
        });
        return;
    }
    for y in g.objects() {
        let monotone = (0..x)
            .all(|w| (!g.le(w, x) || g.le(alpha[w], y)) && (!g.le(x, w) || g.le(y, alpha[w])));
        if !monotone {
            continue;
        }
        for iso in c.isos(g.image(x), g.image(y)) {
            let natural = (0..x).all(|w| {
                let forward = g.image_arrow(w, x).map(|f| {
                    c.compose(iso, f) == c.compose(g.image_arrow(alpha[w], y).unwrap(), gamma[w])
                });
                let backward = g.image_arrow(x, w).map(|f| {
                    c.compose(gamma[w], f) == c.compose(g.image_arrow(y, alpha[w]).unwrap(), iso)
                });
                forward.unwrap_or(true) && backward.unwrap_or(true)
            });
            if natural {
                alpha.push(y);
                gamma.push(iso);
                exhaustive_step(g, c, alpha, gamma, out);
                alpha.pop();
                gamma.pop();
            }
        }
    }
}

/// The Galois monoid with its table, the subgroups `K_X` and the coset basis.
pub fn compute_monoid(g: &Grid, site: &Site) -> Result<GaloisMonoid> {
    let c = &site.category;
    let report = validate_grid(g, site);
    if let Some(f) = report.failures().next() {
        return Err(Error::precondition(format!(
            "invalid grid: {} at {:?}",
            f.condition, f.witness
        )));
    }
    let elements = seeded_elements(g, c)?;
    monoid_from_elements(g, site, elements)
}

/// Builds the table, `K_X` and the coset basis from a complete element list.
pub fn monoid_from_elements(
    g: &Grid,
    site: &Site,
    elements: Vec<MonoidElement>,
) -> Result<GaloisMonoid> {
    let c = &site.category;
    let index: HashMap<&MonoidElement, usize> =
        elements.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let unit = *index
        .get(&MonoidElement::identity(g, c))
        .ok_or_else(|| Error::invariant("identity element is missing"))?;
    let mut mul = vec![vec![0; elements.len()]; elements.len()];
    for (a, ma) in elements.iter().enumerate() {
        for (b, mb) in elements.iter().enumerate() {
            let ab = ma.compose(mb, c);
            mul[a][b] = *index
                .get(&ab)
                .ok_or_else(|| Error::invariant("element list is not closed under composition"))?;
        }
    }
    let edges = edge_objects(g, site);
    let k: BTreeMap<Obj, Vec<usize>> = edges
        .iter()
        .map(|&x| {
            let id = c.identity(g.image(x));
            (
                x,
                (0..elements.len())
                    .filter(|&i| elements[i].alpha[x] == x && elements[i].gamma[x] == id)
                    .collect(),
            )
        })
        .collect();
    let mut coset_basis: Vec<Coset> = Vec::new();
    let mut seen: BTreeSet<(Obj, Vec<usize>)> = BTreeSet::new();
    for (m, row) in mul.iter().enumerate() {
        for &x in &edges {
            let mut members: Vec<usize> = k[&x].iter().map(|&kk| row[kk]).collect();
            members.sort();
            members.dedup();
            if seen.insert((x, members.clone())) {
                coset_basis.push(Coset {
                    element: m,
                    edge: x,
                    members,
                });
            }
        }
    }
    Ok(GaloisMonoid {
        elements,
        mul,
        unit,
        edges,
        k,
        coset_basis,
    })
}

/// `K_X` as a group table; fails unless `x` is an edge object.
pub fn subgroup_k(m: &GaloisMonoid, x: Obj) -> Result<GroupTable> {
    let members = m.k_of(x)?;
    let pos: HashMap<usize, usize> = members.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let mut mul = vec![vec![0; members.len()]; members.len()];
    for (i, &a) in members.iter().enumerate() {
        for (j, &b) in members.iter().enumerate() {
            mul[i][j] = *pos
                .get(&m.mul[a][b])
                .ok_or_else(|| Error::invariant("K_X is not closed"))?;
        }
    }
    let unit = *pos
        .get(&m.unit)
        .ok_or_else(|| Error::invariant("K_X misses the unit"))?;
    GroupTable::new(members.iter().map(|&e| m.name(e)).collect(), mul, unit)
        .map_err(|e| Error::invariant(format!("K_X is not a group: {e}")))
}

/// The limit `H_X = lim Gal(ι(y → x))` over the Galois grid arrows into `x`.
#[derive(Clone, Debug)]
pub struct ProGroupHX {
    pub edge: Obj,
    /// Sources `y` of the arrows `y → x` in `I_X`.
    pub index: Vec<Obj>,
    pub groups: Vec<OverGroup>,
    /// `(i, j)` with `index[i] ≤ index[j]`: the surjection `Gal_i → Gal_j`.
    pub transitions: BTreeMap<(usize, usize), Vec<usize>>,
    /// Compatible families, one group element index per member of `index`.
    pub families: Vec<Vec<usize>>,
}

/// `H_X` together with `ψ_X: H_X → K_X` and `φ_X: K_X → H_X`.
#[derive(Clone, Debug)]
pub struct PsiPhi {
    pub h: ProGroupHX,
    /// Monoid element of each family.
    pub psi: Vec<usize>,
    /// Family of each member of `K_X`, in the order of `m.k[x]`.
    pub phi: Vec<usize>,
}

impl PsiPhi {
    pub fn mutually_inverse(&self, m: &GaloisMonoid) -> bool {
        let Ok(k) = m.k_of(self.h.edge) else {
            return false;
        };
        let psi_then_phi = self
            .psi
            .iter()
            .enumerate()
            .all(|(f, &e)| k.iter().position(|&x| x == e).map(|i| self.phi[i]) == Some(f));
        let phi_then_psi = self
            .phi
            .iter()
            .enumerate()
            .all(|(i, &f)| self.psi.get(f) == Some(&k[i]));
        psi_then_phi && phi_then_psi && self.psi.len() == k.len()
    }
}

fn pro_group(g: &Grid, site: &Site, x: Obj) -> Result<ProGroupHX> {
    let c = &site.category;
    let mut index = Vec::new();
    let mut groups = Vec::new();
    for y in g.down_set(x) {
        let f = g.image_arrow(y, x).unwrap();
        if site.is_covering(f) {
            if let Some(group) = is_galois_covering(c, f) {
                index.push(y);
                groups.push(group);
            }
        }
    }
    let mut transitions = BTreeMap::new();
    for i in 0..index.len() {
        for j in 0..index.len() {
            let Some(u) = g.image_arrow(index[i], index[j]) else {
                continue;
            };
            let mut map = Vec::with_capacity(groups[i].members.len());
            for &s in &groups[i].members {
                let t = groups[j]
                    .members
                    .iter()
                    .position(|&t| c.compose(t, u) == c.compose(u, s))
                    .ok_or_else(|| {
                        Error::invariant("Galois element does not descend along the grid")
                    })?;
                map.push(t);
            }
            if !groups[i].table.is_homomorphism(&groups[j].table, &map) {
                return Err(Error::invariant("transition is not a homomorphism"));
            }
            let image: BTreeSet<usize> = map.iter().copied().collect();
            if image.len() != groups[j].members.len() {
                return Err(Error::invariant("transition is not surjective"));
            }
            transitions.insert((i, j), map);
        }
    }
    let mut families = Vec::new();
    let mut current = Vec::new();
    families_step(&groups, &transitions, &mut current, &mut families);
    Ok(ProGroupHX {
        edge: x,
        index,
        groups,
        transitions,
        families,
    })
}

fn families_step(
    groups: &[OverGroup],
    transitions: &BTreeMap<(usize, usize), Vec<usize>>,
    current: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    let i = current.len();
    if i == groups.len() {
        out.push(current.clone());
        return;
    }
    for s in 0..groups[i].members.len() {
        let compatible = (0..i).all(|j| {
            transitions.get(&(i, j)).is_none_or(|t| t[s] == current[j])
                && transitions.get(&(j, i)).is_none_or(|t| t[current[j]] == s)
        });
        if compatible {
            current.push(s);
            families_step(groups, transitions, current, out);
            current.pop();
        }
    }
}

/// Builds `H_X`, `ψ_X` through the transports `θ_{y,y,β_y⁻¹}`, and `φ_X`
/// by reading off the components `γ(y)`.
pub fn compute_h_psi(g: &Grid, site: &Site, m: &GaloisMonoid, x: Obj) -> Result<PsiPhi> {
    let c = &site.category;
    let k = m.k_of(x)?;
    let h = pro_group(g, site, x)?;
    let mut psi = Vec::with_capacity(h.families.len());
    for family in &h.families {
        let mut alpha: Vec<Option<Obj>> = vec![None; g.len()];
        let mut gamma: Vec<Option<Mor>> = vec![None; g.len()];
        for (i, &y) in h.index.iter().enumerate() {
            let beta = h.groups[i].members[family[i]];
            let theta = transport_under(
                g,
                c,
                y,
                y,
                c.inverse(beta).expect("Galois elements are invertible"),
            )?;
            for (&z, &w) in &theta.map {
                let comp = c.inverse(theta.xi[&z]).expect("ξ is an isomorphism");
                if alpha[z].is_some_and(|a| a != w) || gamma[z].is_some_and(|gz| gz != comp) {
                    return Err(Error::invariant(format!(
                        "transports disagree at {}",
                        g.name(z)
                    )));
                }
                alpha[z] = Some(w);
                gamma[z] = Some(comp);
            }
        }
        let element = MonoidElement {
            alpha: alpha
                .into_iter()
                .collect::<Option<_>>()
                .ok_or_else(|| Error::invariant("I_X does not reach every object"))?,
            gamma: gamma
                .into_iter()
                .collect::<Option<_>>()
                .expect("set together with alpha"),
        };
        let e = m
            .index_of(&element)
            .ok_or_else(|| Error::invariant("ψ_X produced a pair outside the monoid"))?;
        if !k.contains(&e) {
            return Err(Error::invariant("ψ_X produced an element outside K_X"));
        }
        psi.push(e);
    }
    let mut phi = Vec::with_capacity(k.len());
    for &e in k {
        let element = &m.elements[e];
        let mut family = Vec::with_capacity(h.index.len());
        for (i, &y) in h.index.iter().enumerate() {
            if element.alpha[y] != y {
                return Err(Error::invariant(format!("K_X element moves {}", g.name(y))));
            }
            family.push(h.groups[i].index_of(element.gamma[y]).ok_or_else(|| {
                Error::invariant(format!("γ({}) is not in the Galois group", g.name(y)))
            })?);
        }
        phi.push(
            h.families
                .iter()
                .position(|f| *f == family)
                .ok_or_else(|| Error::invariant("φ_X family is not compatible"))?,
        );
    }
    Ok(PsiPhi { h, psi, phi })
}

/// The coset basis with the filter-base and continuity checks.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TopologyReport {
    pub cosets: Vec<Coset>,
    pub discrete: bool,
    pub report: ValidationReport,
}

pub fn monoid_topology_basis(m: &GaloisMonoid) -> TopologyReport {
    let mut report = ValidationReport::new(Level::Topology);
    let coset =
        |a: usize, x: Obj| -> BTreeSet<usize> { m.k[&x].iter().map(|&kk| m.mul[a][kk]).collect() };
    for b1 in &m.coset_basis {
        for b2 in &m.coset_basis {
            let both: BTreeSet<usize> = b1
                .members
                .iter()
                .filter(|e| b2.members.contains(e))
                .copied()
                .collect();
            for &a in &both {
                if !m.edges.iter().any(|&y| coset(a, y).is_subset(&both)) {
                    report.fail(
                        "filter-base",
                        vec![m.name(a), m.name(b1.element), m.name(b2.element)],
                        "no basic neighbourhood inside the intersection",
                    );
                }
            }
        }
    }
    for a in 0..m.order() {
        for &x in &m.edges {
            let right = coset(a, x);
            let continuous = m
                .edges
                .iter()
                .any(|&y| m.k[&y].iter().all(|&kk| right.contains(&m.mul[kk][a])));
            if !continuous {
                report.fail(
                    "continuity",
                    vec![m.name(a), x.to_string()],
                    "no K_Y with K_Y·m inside m·K_X",
                );
            }
        }
    }
    let mut common: BTreeSet<usize> = (0..m.order()).collect();
    for ks in m.k.values() {
        common.retain(|e| ks.contains(e));
    }
    let discrete = common.len() == 1;
    report.note(if discrete { "discrete" } else { "not discrete" });
    TopologyReport {
        cosets: m.coset_basis.clone(),
        discrete,
        report,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois_coverings::find_isomorphism;
    use crate::site_io::build_gsets_site;

    fn gsets(g: &GroupTable) -> (Site, Grid) {
        build_gsets_site(g, 24).unwrap()
    }

    #[test]
    fn seeded_matches_exhaustive() {
        for g in [
            GroupTable::cyclic(2),
            GroupTable::cyclic(4),
            GroupTable::symmetric(3),
            GroupTable::product(&GroupTable::cyclic(2), &GroupTable::cyclic(2)),
        ] {
            let (site, grid) = gsets(&g);
            let mut seeded = seeded_elements(&grid, &site.category).unwrap();
            seeded.sort();
            assert_eq!(seeded, exhaustive_elements(&grid, &site.category).unwrap());
            assert_eq!(seeded.len(), g.order());
        }
    }

    #[test]
    fn monoid_recovers_the_group() {
        for g in [GroupTable::cyclic(4), GroupTable::symmetric(3)] {
            let (site, grid) = gsets(&g);
            let m = compute_monoid(&grid, &site).unwrap();
            let table = m.as_group().unwrap();
            assert!(find_isomorphism(&table, &g).is_some());
            assert_eq!(table.is_abelian(), g.is_abelian());
        }
    }

    #[test]
    fn k_sizes_on_z4() {
        let (site, grid) = gsets(&GroupTable::cyclic(4));
        let m = compute_monoid(&grid, &site).unwrap();
        let sizes: Vec<usize> = grid
            .objects()
            .map(|x| subgroup_k(&m, x).unwrap().order())
            .collect();
        let mut sorted = sizes.clone();
        sorted.sort();
        assert_eq!(sorted, vec![1, 2, 4]);
        for x in grid.objects() {
            for &e in &m.k[&x] {
                for y in grid.up_set(x) {
                    assert_eq!(m.elements[e].alpha[y], y);
                    assert!(site.category.is_identity(m.elements[e].gamma[y]));
                }
            }
        }
    }

    #[test]
    fn psi_and_phi_are_inverse() {
        for g in [
            GroupTable::cyclic(2),
            GroupTable::cyclic(4),
            GroupTable::symmetric(3),
        ] {
            let (site, grid) = gsets(&g);
            let m = compute_monoid(&grid, &site).unwrap();
            for &x in &m.edges {
                let pp = compute_h_psi(&grid, &site, &m, x).unwrap();
                assert!(pp.mutually_inverse(&m));
                assert_eq!(pp.h.families.len(), m.k[&x].len());
            }
        }
    }

    #[test]
    fn transport_composition_law() {
        let (site, grid) = gsets(&GroupTable::cyclic(4));
        let c = &site.category;
        for z in grid.objects() {
            for z1 in grid.objects() {
                for z2 in grid.objects() {
                    for &h in c.hom(grid.image(z), grid.image(z1)) {
                        for &h2 in c.hom(grid.image(z1), grid.image(z2)) {
                            let outer = transport_under(&grid, c, z, z2, c.compose(h2, h)).unwrap();
                            let first = transport_under(&grid, c, z1, z2, h2).unwrap();
                            let second = transport_under(&grid, c, z, z1, h).unwrap();
                            for (y2, y1) in &first.map {
                                assert_eq!(outer.map[y2], second.map[y1]);
                                assert_eq!(outer.xi[y2], c.compose(first.xi[y2], second.xi[y1]));
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn identity_transport_is_identity() {
        let (site, grid) = gsets(&GroupTable::symmetric(3));
        let c = &site.category;
        for z in grid.objects() {
            let t = transport_under(&grid, c, z, z, c.identity(grid.image(z))).unwrap();
            assert!(t.map.iter().all(|(a, b)| a == b));
        }
    }

    #[test]
    fn elements_preserve_type_j_and_are_fully_faithful() {
        let (site, grid) = gsets(&GroupTable::symmetric(3));
        let m = compute_monoid(&grid, &site).unwrap();
        for e in &m.elements {
            for a in grid.objects() {
                for b in grid.objects() {
                    assert_eq!(grid.le(a, b), grid.le(e.alpha[a], e.alpha[b]));
                }
            }
        }
        for a in 0..m.order() {
            assert!(m.is_invertible(a));
        }
    }

    #[test]
    fn elements_agreeing_at_an_edge_differ_by_k() {
        let (site, grid) = gsets(&GroupTable::symmetric(3));
        let m = compute_monoid(&grid, &site).unwrap();
        for &x in &m.edges {
            for a in 0..m.order() {
                for b in 0..m.order() {
                    let (ea, eb) = (&m.elements[a], &m.elements[b]);
                    if ea.alpha[x] != eb.alpha[x] || ea.gamma[x] != eb.gamma[x] {
                        continue;
                    }
                    let quotients: Vec<usize> =
                        (0..m.order()).filter(|&q| m.mul[a][q] == b).collect();
                    assert_eq!(quotients.len(), 1);
                    assert!(m.k[&x].contains(&quotients[0]));
                }
            }
        }
    }

    #[test]
    fn topology_is_discrete() {
        for g in [GroupTable::cyclic(4), GroupTable::symmetric(3)] {
            let (site, grid) = gsets(&g);
            let m = compute_monoid(&grid, &site).unwrap();
            let t = monoid_topology_basis(&m);
            assert!(t.discrete);
            assert!(t.report.pass);
            assert!(t.cosets.iter().any(|b| b.members.len() == 1));
        }
        let (site, grid) = gsets(&GroupTable::trivial());
        let m = compute_monoid(&grid, &site).unwrap();
        assert_eq!(m.order(), 1);
        assert_eq!(monoid_topology_basis(&m).cosets.len(), 1);
    }
}
