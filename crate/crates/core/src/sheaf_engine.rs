//! Presheaves of finite sets, the two sheaf criteria, sheafification through
//! Galois coverings, and enumeration of natural transformations.

use std::collections::{BTreeMap, HashMap};

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::cat_core::{FiniteCategory, Mor, Obj};
use crate::error::{Error, Result};
use crate::galois_coverings::{
    galois_category_over, hom_over, is_galois_covering, GalOver, OverGroup,
};
use crate::report::{Level, ValidationReport};
use crate::site_validation::{validate_b_site, Site};

/// Default limit on search nodes for the enumerators.
pub const DEFAULT_HOM_CAP: usize = 1_000_000;

/// A presheaf of finite sets, indexed by the object and morphism numbering
/// of its category.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presheaf {
    pub sections: Vec<Vec<String>>,
    /// `restrict[f][y] = x`: restriction along `f: X → Y` sends section `y`
    /// of `Y` to section `x` of `X`.
    pub restrict: Vec<Vec<usize>>,
}

/// Name-keyed form used by the JSON documents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresheafData {
    pub sections: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub restrictions: BTreeMap<String, BTreeMap<String, String>>,
}

impl Presheaf {
    pub fn new(
        c: &FiniteCategory,
        sections: Vec<Vec<String>>,
        restrict: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if sections.len() != c.num_objects() || restrict.len() != c.num_morphisms() {
            return Err(Error::input("presheaf shape does not match the category"));
        }
        for (x, names) in sections.iter().enumerate() {
            let mut sorted = names.clone();
            sorted.sort();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::input(format!(
                    "duplicate section name over {}",
                    c.obj_name(x)
                )));
            }
        }
        for f in c.morphisms() {
            let (a, b) = (c.src(f), c.dst(f));
            if restrict[f].len() != sections[b].len()
                || restrict[f].iter().any(|&x| x >= sections[a].len())
            {
                return Err(Error::input(format!(
                    "restriction along {} has the wrong shape",
                    c.mor_name(f)
                )));
            }
        }
        Ok(Presheaf { sections, restrict })
    }

    /// Builds the restriction maps from a rule `(f, y) ↦ x`.
    pub fn from_fn(
        c: &FiniteCategory,
        sections: Vec<Vec<String>>,
        rule: impl Fn(Mor, usize) -> usize,
    ) -> Result<Self> {
        let restrict = c
            .morphisms()
            .map(|f| (0..sections[c.dst(f)].len()).map(|y| rule(f, y)).collect())
            .collect();
        Presheaf::new(c, sections, restrict)
    }

    /// `𝔥(x)`: sections over `y` are `Hom(y, x)`, restriction is precomposition.
    pub fn representable(c: &FiniteCategory, x: Obj) -> Self {
        let sections = c.objects().map(|y| c.names(c.hom(y, x))).collect();
        let pos: HashMap<Mor, usize> = c
            .objects()
            .flat_map(|y| c.hom(y, x).iter().enumerate().map(|(i, &h)| (h, i)))
            .collect();
        let restrict = c
            .morphisms()
            .map(|f| {
                c.hom(c.dst(f), x)
                    .iter()
                    .map(|&h| pos[&c.compose(h, f)])
                    .collect()
            })
            .collect();
        Presheaf { sections, restrict }
    }

    /// Every object gets `names`, every restriction is the identity.
    pub fn constant(c: &FiniteCategory, names: &[&str]) -> Self {
        let sections = c
            .objects()
            .map(|_| names.iter().map(|s| s.to_string()).collect())
            .collect();
        let restrict = c.morphisms().map(|_| (0..names.len()).collect()).collect();
        Presheaf { sections, restrict }
    }

    pub fn terminal(c: &FiniteCategory) -> Self {
        Presheaf::constant(c, &["*"])
    }

    pub fn empty(c: &FiniteCategory) -> Self {
        Presheaf::constant(c, &[])
    }

    pub fn size(&self, x: Obj) -> usize {
        self.sections[x].len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.sections.iter().map(Vec::len).collect()
    }

    /// Restriction of section `s` along `f`.
    pub fn apply(&self, f: Mor, s: usize) -> usize {
        self.restrict[f][s]
    }

    pub fn section(&self, x: Obj, name: &str) -> Option<usize> {
        self.sections[x].iter().position(|s| s == name)
    }

    /// Sections over `src(f)` fixed by every automorphism in `group`.
    pub fn invariants(&self, c: &FiniteCategory, group: &OverGroup) -> Vec<usize> {
        let y = c.src(group.covering);
        (0..self.size(y))
            .filter(|&s| group.members.iter().all(|&g| self.apply(g, s) == s))
            .collect()
    }

    /// Reads the name-keyed form. Missing objects have no sections; identity
    /// restrictions default to the identity.
    pub fn from_data(c: &FiniteCategory, data: &PresheafData) -> Result<Self> {
        for name in data.sections.keys() {
            c.object(name)?;
        }
        for name in data.restrictions.keys() {
            c.morphism(name)?;
        }
        let sections: Vec<Vec<String>> = c
            .object_names()
            .iter()
            .map(|x| data.sections.get(x).cloned().unwrap_or_default())
            .collect();
        let mut restrict = Vec::with_capacity(c.num_morphisms());
        for f in c.morphisms() {
            let (a, b) = (c.src(f), c.dst(f));
            let given = data.restrictions.get(c.mor_name(f));
            let mut map = Vec::with_capacity(sections[b].len());
            for (y, name) in sections[b].iter().enumerate() {
                let x = match given {
                    Some(m) => {
                        let target = m.get(name).ok_or_else(|| {
                            Error::input(format!(
                                "restriction along {} misses section {name}",
                                c.mor_name(f)
                            ))
                        })?;
                        sections[a]
                            .iter()
                            .position(|s| s == target)
                            .ok_or_else(|| {
                                Error::input(format!(
                                    "restriction along {} names unknown section {target}",
                                    c.mor_name(f)
                                ))
                            })?
                    }
                    None if c.is_identity(f) => y,
                    None => {
                        return Err(Error::input(format!(
                            "missing restriction along {}",
                            c.mor_name(f)
                        )));
                    }
                };
                map.push(x);
            }
            if let Some(m) = given {
                if let Some(extra) = m.keys().find(|k| !sections[b].contains(k)) {
                    return Err(Error::input(format!(
                        "restriction along {} names unknown section {extra}",
                        c.mor_name(f)
                    )));
                }
            }
            restrict.push(map);
        }
        Presheaf::new(c, sections, restrict)
    }

    /// Name-keyed form; restrictions along identities are omitted when trivial.
    pub fn to_data(&self, c: &FiniteCategory) -> PresheafData {
        let sections = c
            .objects()
            .map(|x| (c.obj_name(x).to_string(), self.sections[x].clone()))
            .collect();
        let restrictions = c
            .morphisms()
            .filter(|&f| {
                !c.is_identity(f) || self.restrict[f].iter().enumerate().any(|(i, &j)| i != j)
            })
            .map(|f| {
                let (a, b) = (c.src(f), c.dst(f));
                let map = self.restrict[f]
                    .iter()
                    .enumerate()
                    .map(|(y, &x)| (self.sections[b][y].clone(), self.sections[a][x].clone()))
                    .collect();
                (c.mor_name(f).to_string(), map)
            })
            .collect();
        PresheafData {
            sections,
            restrictions,
        }
    }

    /// Sections renamed `s0, s1, …` per object.
    pub fn relabeled(&self) -> Self {
        let sections = self
            .sections
            .iter()
            .map(|v| (0..v.len()).map(|i| format!("s{i}")).collect())
            .collect();
        Presheaf {
            sections,
            restrict: self.restrict.clone(),
        }
    }

    /// Pointwise product, with sections named `(a,b)`.
    pub fn product(&self, c: &FiniteCategory, other: &Presheaf) -> Self {
        let sections = c
            .objects()
            .map(|x| {
                let mut v = Vec::new();
                for a in &self.sections[x] {
                    for b in &other.sections[x] {
                        v.push(format!("({a},{b})"));
                    }
                }
                v
            })
            .collect();
        let restrict = c
            .morphisms()
            .map(|f| {
                let (a, b) = (c.src(f), c.dst(f));
                let (m, n) = (other.size(b), other.size(a));
                (0..self.size(b) * m)
                    .map(|i| self.apply(f, i / m) * n + other.apply(f, i % m))
                    .collect()
            })
            .collect();
        Presheaf { sections, restrict }
    }

    /// Pointwise disjoint union, with sections tagged `0:` and `1:`.
    pub fn coproduct(&self, c: &FiniteCategory, other: &Presheaf) -> Self {
        let sections = c
            .objects()
            .map(|x| {
                self.sections[x]
                    .iter()
                    .map(|s| format!("0:{s}"))
                    .chain(other.sections[x].iter().map(|s| format!("1:{s}")))
                    .collect()
            })
            .collect();
        let restrict = c
            .morphisms()
            .map(|f| {
                let shift = self.size(c.src(f));
                self.restrict[f]
                    .iter()
                    .copied()
                    .chain(other.restrict[f].iter().map(|&x| x + shift))
                    .collect()
            })
            .collect();
        Presheaf { sections, restrict }
    }
}

/// Functoriality violations: conditions "identity" and "composition".
pub fn validate_presheaf(c: &FiniteCategory, p: &Presheaf) -> ValidationReport {
    let mut report = ValidationReport::new(Level::Presheaf);
    for x in c.objects() {
        let id = c.identity(x);
        if p.restrict[id].iter().enumerate().any(|(i, &j)| i != j) {
            report.fail(
                "identity",
                c.names(&[id]),
                "identity does not restrict to the identity",
            );
        }
    }
    for f in c.morphisms() {
        for g in c.outgoing(c.dst(f)) {
            let gf = c.compose(g, f);
            if (0..p.size(c.dst(g))).any(|z| p.apply(gf, z) != p.apply(f, p.apply(g, z))) {
                report.fail(
                    "composition",
                    c.names(&[f, g]),
                    "restriction along g∘f differs from f* g*",
                );
            }
        }
    }
    report
}

/// A natural transformation; `components[x][s]` is the image of section `s`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PresheafMorphism {
    pub components: Vec<Vec<usize>>,
}

impl PresheafMorphism {
    pub fn identity(p: &Presheaf) -> Self {
        PresheafMorphism {
            components: p.sections.iter().map(|v| (0..v.len()).collect()).collect(),
        }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &PresheafMorphism) -> Self {
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.iter().map(|&s| b[s]).collect())
            .collect();
        PresheafMorphism { components }
    }

    pub fn is_natural(&self, c: &FiniteCategory, source: &Presheaf, target: &Presheaf) -> bool {
        let shape_ok = c.objects().all(|x| {
            self.components[x].len() == source.size(x)
                && self.components[x].iter().all(|&t| t < target.size(x))
        });
        shape_ok
            && c.morphisms().all(|f| {
                let (a, b) = (c.src(f), c.dst(f));
                (0..source.size(b)).all(|u| {
                    self.components[a][source.apply(f, u)] == target.apply(f, self.components[b][u])
                })
            })
    }

    pub fn is_injective(&self) -> bool {
        self.components.iter().all(|m| {
            let mut seen = m.clone();
            seen.sort_unstable();
            seen.windows(2).all(|w| w[0] != w[1])
        })
    }

    /// Bijective on every object, given the target sizes.
    pub fn is_iso(&self, target: &Presheaf) -> bool {
        self.is_injective()
            && self
                .components
                .iter()
                .enumerate()
                .all(|(x, m)| m.len() == target.size(x))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SheafMode {
    Equalizer,
    Galois,
}

/// A covering morphism at which the sheaf condition fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SheafWitness {
    pub morphism: String,
    pub sections: Vec<String>,
    pub reason: String,
}

/// The first failure of the sheaf condition, or `None` for a sheaf.
///
/// Equalizer mode runs over the basis, Galois mode over the Galois coverings
/// in `T(J)` and needs enough of them.
pub fn sheaf_violation(site: &Site, p: &Presheaf, mode: SheafMode) -> Result<Option<SheafWitness>> {
    let c = &site.category;
    match mode {
        SheafMode::Equalizer => {
            for f in site.topology.basis().members() {
                if let Some(w) = injectivity_violation(c, p, f) {
                    return Ok(Some(w));
                }
                let pairs = fiber_pairs(c, f);
                if let Some(group) = is_galois_covering(c, f) {
                    for (z, zs) in pairs.iter().enumerate() {
                        if zs.len() != group.members.len() * c.hom(z, c.src(f)).len() {
                            return Err(Error::invariant(format!(
                                "fiber product over {} disagrees with the Galois decomposition at {}",
                                c.mor_name(f),
                                c.obj_name(z)
                            )));
                        }
                    }
                }
                let y = c.src(f);
                let equalizer = (0..p.size(y)).filter(|&t| {
                    pairs
                        .iter()
                        .flatten()
                        .all(|&(a, b)| p.apply(a, t) == p.apply(b, t))
                });
                if let Some(w) = image_violation(c, p, f, equalizer, "equalizer") {
                    return Ok(Some(w));
                }
            }
        }
        SheafMode::Galois => {
            if let Err(f) =
                crate::galois_coverings::enough_galois_coverings(c, site.topology.basis())
            {
                return Err(Error::precondition(format!(
                    "Galois criterion needs enough Galois coverings (witness {})",
                    c.mor_name(f)
                )));
            }
            for f in site.covering().members() {
                let Some(group) = is_galois_covering(c, f) else {
                    continue;
                };
                if let Some(w) = injectivity_violation(c, p, f) {
                    return Ok(Some(w));
                }
                if let Some(w) =
                    image_violation(c, p, f, p.invariants(c, &group).into_iter(), "invariant")
                {
                    return Ok(Some(w));
                }
            }
        }
    }
    Ok(None)
}

pub fn is_sheaf(site: &Site, p: &Presheaf, mode: SheafMode) -> Result<bool> {
    Ok(sheaf_violation(site, p, mode)?.is_none())
}

/// `(𝔥(Y) ×_{𝔥(X)} 𝔥(Y))(Z)` for `f: Y → X`, per object `Z`.
pub fn fiber_pairs(c: &FiniteCategory, f: Mor) -> Vec<Vec<(Mor, Mor)>> {
    let y = c.src(f);
    c.objects()
        .map(|z| {
            let homs = c.hom(z, y);
            let mut v = Vec::new();
            for &a in homs {
                for &b in homs {
                    if c.compose(f, a) == c.compose(f, b) {
                        v.push((a, b));
                    }
                }
            }
            v
        })
        .collect()
}

fn injectivity_violation(c: &FiniteCategory, p: &Presheaf, f: Mor) -> Option<SheafWitness> {
    let x = c.dst(f);
    let mut seen: HashMap<usize, usize> = HashMap::new();
    for s in 0..p.size(x) {
        if let Some(&prev) = seen.get(&p.apply(f, s)) {
            return Some(SheafWitness {
                morphism: c.mor_name(f).to_string(),
                sections: vec![p.sections[x][prev].clone(), p.sections[x][s].clone()],
                reason: "restriction is not injective".into(),
            });
        }
        seen.insert(p.apply(f, s), s);
    }
    None
}

fn image_violation(
    c: &FiniteCategory,
    p: &Presheaf,
    f: Mor,
    expected: impl Iterator<Item = usize>,
    what: &str,
) -> Option<SheafWitness> {
    let y = c.src(f);
    let image: Vec<usize> = p.restrict[f].clone();
    for t in expected {
        if !image.contains(&t) {
            return Some(SheafWitness {
                morphism: c.mor_name(f).to_string(),
                sections: vec![p.sections[y][t].clone()],
                reason: format!("{what} section is not a restriction"),
            });
        }
    }
    None
}

/// The sheafification and its unit `F → a_J(F)`.
#[derive(Clone, Debug)]
pub struct Sheafified {
    pub sheaf: Presheaf,
    pub unit: PresheafMorphism,
}

/// Colimit of the invariant sections over `Gal/X` for one object.
struct Colimit {
    gal: GalOver,
    /// `(covering index, section)` per member.
    members: Vec<(usize, usize)>,
    index: HashMap<(usize, usize), usize>,
    /// Class of each member.
    class_of: Vec<usize>,
    /// Members of each class.
    classes: Vec<Vec<usize>>,
    names: Vec<String>,
}

impl Colimit {
    fn build(site: &Site, p: &Presheaf, x: Obj) -> Result<Self> {
        let c = &site.category;
        let gal = galois_category_over(site, x)?;
        let invariants: Vec<Vec<usize>> = gal.groups.iter().map(|g| p.invariants(c, g)).collect();
        let mut members = Vec::new();
        for (k, inv) in invariants.iter().enumerate() {
            members.extend(inv.iter().map(|&s| (k, s)));
        }
        let index: HashMap<(usize, usize), usize> =
            members.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let mut uf = UnionFind::new(members.len());
        for i in 0..gal.coverings.len() {
            for j in 0..gal.coverings.len() {
                let homs = hom_over(c, gal.coverings[i], gal.coverings[j]);
                let Some(&h) = homs.first() else { continue };
                for &s in &invariants[j] {
                    let t = p.apply(h, s);
                    if homs.iter().any(|&h2| p.apply(h2, s) != t) {
                        return Err(Error::invariant(
                            "transition depends on the chosen morphism over the base",
                        ));
                    }
                    let target = index
                        .get(&(i, t))
                        .ok_or_else(|| Error::invariant("transition leaves the invariants"))?;
                    uf.union(index[&(j, s)], *target);
                }
            }
        }
        let label = |&(k, s): &(usize, usize)| {
            format!(
                "{}|{}",
                c.mor_name(gal.coverings[k]),
                p.sections[c.src(gal.coverings[k])][s]
            )
        };
        let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..members.len() {
            by_root.entry(uf.find(i)).or_default().push(i);
        }
        let mut named: Vec<(String, Vec<usize>)> = by_root
            .into_values()
            .map(|ms| {
                let least = ms
                    .iter()
                    .map(|&i| label(&members[i]))
                    .min()
                    .expect("classes are nonempty");
                (format!("class:{least}"), ms)
            })
            .collect();
        named.sort();
        let mut class_of = vec![0; members.len()];
        for (ci, (_, ms)) in named.iter().enumerate() {
            for &i in ms {
                class_of[i] = ci;
            }
        }
        let (names, classes) = named.into_iter().unzip();
        Ok(Colimit {
            gal,
            members,
            index,
            class_of,
            classes,
            names,
        })
    }
}

/// `a_J(F)(X) = colim_{Gal/X} F(Y)^{Aut_X(Y)}` with restrictions through `Gal/f`.
pub fn sheafify(site: &Site, p: &Presheaf) -> Result<Sheafified> {
    let c = &site.category;
    if validate_b_site(site, 0).has_failures() {
        return Err(Error::precondition("sheafification needs a B-site"));
    }
    let colimits: Vec<Colimit> = c
        .objects()
        .map(|x| Colimit::build(site, p, x))
        .collect::<Result<_>>()?;
    let mut restrict = Vec::with_capacity(c.num_morphisms());
    for g in c.morphisms() {
        let (x, x2) = (c.src(g), c.dst(g));
        let (low, high) = (&colimits[x], &colimits[x2]);
        let mut map = Vec::with_capacity(high.classes.len());
        for (ci, class) in high.classes.iter().enumerate() {
            let mut result: Option<usize> = None;
            for &m in class {
                let (k2, s) = high.members[m];
                let f2 = high.gal.coverings[k2];
                for (k, &h) in low.gal.coverings.iter().enumerate() {
                    let gh = c.compose(g, h);
                    if high.gal.position(gh).is_none() {
                        continue;
                    }
                    for u in hom_over(c, gh, f2) {
                        let t = p.apply(u, s);
                        let idx = low.index.get(&(k, t)).ok_or_else(|| {
                            Error::invariant("restriction leaves the invariants over the source")
                        })?;
                        let cls = low.class_of[*idx];
                        match result {
                            None => result = Some(cls),
                            Some(r) if r != cls => {
                                return Err(Error::invariant(format!(
                                    "restriction of {} along {} depends on choices",
                                    high.names[ci],
                                    c.mor_name(g)
                                )));
                            }
                            _ => {}
                        }
                    }
                }
            }
            map.push(result.ok_or_else(|| {
                Error::invariant(format!(
                    "no Galois covering over {} factors through {}",
                    c.obj_name(x),
                    c.mor_name(g)
                ))
            })?);
        }
        restrict.push(map);
    }
    let sections = colimits.iter().map(|col| col.names.clone()).collect();
    let sheaf = Presheaf::new(c, sections, restrict)?;
    let mut components = Vec::with_capacity(c.num_objects());
    for x in c.objects() {
        let col = &colimits[x];
        let k0 = col
            .gal
            .position(c.identity(x))
            .ok_or_else(|| Error::invariant("identity is not in Gal/X"))?;
        components.push(
            (0..p.size(x))
                .map(|s| col.class_of[col.index[&(k0, s)]])
                .collect(),
        );
    }
    Ok(Sheafified {
        sheaf,
        unit: PresheafMorphism { components },
    })
}

/// Backtracking over sections with naturality constraints checked as soon as
/// both ends are assigned.
struct HomSearch<'a> {
    source: &'a Presheaf,
    target: &'a Presheaf,
    vars: Vec<(Obj, usize)>,
    /// Per variable: `(earlier var a, earlier var b, f)` with `φ(a) = G(f)(φ(b))`.
    checks: Vec<Vec<(usize, usize, Mor)>>,
    injective: bool,
    cap: usize,
    nodes: usize,
    limit: usize,
    assignment: Vec<usize>,
    found: Vec<PresheafMorphism>,
}

impl<'a> HomSearch<'a> {
    fn new(
        c: &FiniteCategory,
        source: &'a Presheaf,
        target: &'a Presheaf,
        injective: bool,
        cap: usize,
        limit: usize,
    ) -> Self {
        let mut vars = Vec::new();
        let mut var_of = HashMap::new();
        for x in c.objects() {
            for s in 0..source.size(x) {
                var_of.insert((x, s), vars.len());
                vars.push((x, s));
            }
        }
        let mut checks = vec![Vec::new(); vars.len()];
        for f in c.morphisms() {
            let (a, b) = (c.src(f), c.dst(f));
            for u in 0..source.size(b) {
                let va = var_of[&(a, source.apply(f, u))];
                let vb = var_of[&(b, u)];
                checks[va.max(vb)].push((va, vb, f));
            }
        }
        HomSearch {
            source,
            target,
            vars,
            checks,
            injective,
            cap,
            nodes: 0,
            limit,
            assignment: Vec::new(),
            found: Vec::new(),
        }
    }

    fn run(&mut self) -> Result<()> {
        if self.found.len() >= self.limit {
            return Ok(());
        }
        let v = self.assignment.len();
        if v == self.vars.len() {
            let mut components: Vec<Vec<usize>> = self
                .source
                .sections
                .iter()
                .map(|s| vec![0; s.len()])
                .collect();
            for (i, &(x, s)) in self.vars.iter().enumerate() {
                components[x][s] = self.assignment[i];
            }
            self.found.push(PresheafMorphism { components });
            return Ok(());
        }
        let (x, _) = self.vars[v];
        for t in 0..self.target.size(x) {
            self.nodes += 1;
            if self.nodes > self.cap {
                return Err(Error::resource(format!(
                    "presheaf morphism search exceeded {} nodes",
                    self.cap
                )));
            }
            if self.injective && (0..v).any(|w| self.vars[w].0 == x && self.assignment[w] == t) {
                continue;
            }
            self.assignment.push(t);
            let ok = self.checks[v].iter().all(|&(va, vb, f)| {
                self.assignment[va] == self.target.apply(f, self.assignment[vb])
            });
            if ok {
                self.run()?;
            }
            self.assignment.pop();
        }
        Ok(())
    }
}

/// All natural transformations `source → target`.
pub fn presheaf_hom(
    c: &FiniteCategory,
    source: &Presheaf,
    target: &Presheaf,
    cap: usize,
) -> Result<Vec<PresheafMorphism>> {
    let mut search = HomSearch::new(c, source, target, false, cap, usize::MAX);
    search.run()?;
    Ok(search.found)
}

/// Some isomorphism `source → target`, if one exists.
pub fn presheaf_isomorphism(
    c: &FiniteCategory,
    source: &Presheaf,
    target: &Presheaf,
    cap: usize,
) -> Result<Option<PresheafMorphism>> {
    if source.sizes() != target.sizes() {
        return Ok(None);
    }
    let mut search = HomSearch::new(c, source, target, true, cap, 1);
    search.run()?;
    Ok(search.found.pop())
}

/// One representative per isomorphism class, in input order.
pub fn dedupe_isomorphic(
    c: &FiniteCategory,
    presheaves: Vec<Presheaf>,
    cap: usize,
) -> Result<Vec<Presheaf>> {
    let key = |p: &Presheaf| {
        let images: Vec<usize> = p
            .restrict
            .iter()
            .map(|m| {
                let mut v = m.clone();
                v.sort_unstable();
                v.dedup();
                v.len()
            })
            .collect();
        (p.sizes(), images)
    };
    let mut buckets: HashMap<(Vec<usize>, Vec<usize>), Vec<usize>> = HashMap::new();
    let mut reps: Vec<Presheaf> = Vec::new();
    for p in presheaves {
        let bucket = buckets.entry(key(&p)).or_default();
        let mut known = false;
        for &r in bucket.iter() {
            if presheaf_isomorphism(c, &reps[r], &p, cap)?.is_some() {
                known = true;
                break;
            }
        }
        if !known {
            bucket.push(reps.len());
            reps.push(p);
        }
    }
    Ok(reps)
}

/// Enumerates labelled presheaves with at most `bound` sections per object,
/// sections named `s0, s1, …`. With `sheaves_only`, partial assignments are
/// pruned by the Galois criterion and results are filtered by the equalizer
/// criterion.
pub fn enumerate_presheaves(
    site: &Site,
    bound: usize,
    sheaves_only: bool,
    cap: usize,
) -> Result<Vec<Presheaf>> {
    let c = &site.category;
    let order: Vec<Mor> = c.morphisms().filter(|&f| !c.is_identity(f)).collect();
    let rank: HashMap<Mor, usize> = order.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let mut triples: Vec<Vec<(Mor, Mor, Mor)>> = vec![Vec::new(); order.len()];
    let mut decompositions: Vec<Vec<(Mor, Mor)>> = vec![Vec::new(); order.len()];
    for &h in &order {
        for g in c.outgoing(c.dst(h)) {
            if c.is_identity(g) {
                continue;
            }
            let k = c.compose(g, h);
            let last = [g, h, k]
                .iter()
                .filter_map(|m| rank.get(m))
                .copied()
                .max()
                .expect("g is ranked");
            triples[last].push((g, h, k));
            if let Some(&rk) = rank.get(&k) {
                if rank[&g] < rk && rank[&h] < rk {
                    decompositions[rk].push((g, h));
                }
            }
        }
    }
    let mut galois_checks: Vec<Vec<OverGroup>> = vec![Vec::new(); order.len()];
    // Restrictions along isomorphisms, and along Galois coverings of a sheaf, are injective.
    let mut injective: Vec<bool> = order.iter().map(|&f| c.is_iso(f)).collect();
    if sheaves_only {
        for f in site.covering().members() {
            if let Some(group) = is_galois_covering(c, f) {
                if let Some(&r) = rank.get(&f) {
                    injective[r] = true;
                }
                let last = std::iter::once(f)
                    .chain(group.members.iter().copied())
                    .filter_map(|m| rank.get(&m))
                    .max()
                    .copied();
                if let Some(r) = last {
                    galois_checks[r].push(group);
                }
            }
        }
    }
    let mut out = Vec::new();
    let mut nodes = 0usize;
    let mut sizes = vec![0usize; c.num_objects()];
    loop {
        let mut state = Enumeration {
            c,
            sizes: &sizes,
            order: &order,
            triples: &triples,
            decompositions: &decompositions,
            galois_checks: &galois_checks,
            injective: &injective,
            assigned: c
                .morphisms()
                .map(|f| c.is_identity(f).then(|| (0..sizes[c.dst(f)]).collect()))
                .collect(),
            nodes: &mut nodes,
            cap,
            out: &mut out,
        };
        state.run(0)?;
        let mut i = 0;
        loop {
            if i == sizes.len() {
                break;
            }
            sizes[i] += 1;
            if sizes[i] <= bound {
                break;
            }
            sizes[i] = 0;
            i += 1;
        }
        if i == sizes.len() {
            break;
        }
    }
    if sheaves_only {
        let mut sheaves = Vec::new();
        for p in out {
            if sheaf_violation(site, &p, SheafMode::Equalizer)?.is_none() {
                sheaves.push(p);
            }
        }
        return Ok(sheaves);
    }
    Ok(out)
}

struct Enumeration<'a> {
    c: &'a FiniteCategory,
    sizes: &'a [usize],
    order: &'a [Mor],
    triples: &'a [Vec<(Mor, Mor, Mor)>],
    decompositions: &'a [Vec<(Mor, Mor)>],
    galois_checks: &'a [Vec<OverGroup>],
    injective: &'a [bool],
    assigned: Vec<Option<Vec<usize>>>,
    nodes: &'a mut usize,
    cap: usize,
    out: &'a mut Vec<Presheaf>,
}

impl Enumeration<'_> {
    fn run(&mut self, pos: usize) -> Result<()> {
        let c = self.c;
        if pos == self.order.len() {
            let sections = self
                .sizes
                .iter()
                .map(|&n| (0..n).map(|i| format!("s{i}")).collect())
                .collect();
            let restrict = self
                .assigned
                .iter()
                .map(|m| m.clone().expect("all assigned"))
                .collect();
            self.out.push(Presheaf { sections, restrict });
            return Ok(());
        }
        let f = self.order[pos];
        let (n_src, n_dst) = (self.sizes[c.src(f)], self.sizes[c.dst(f)]);
        let candidates: Vec<Vec<usize>> = match self.decompositions[pos].first() {
            Some(&(g, h)) => {
                let (mg, mh) = (
                    self.assigned[g].as_ref().expect("ranked"),
                    self.assigned[h].as_ref().expect("ranked"),
                );
                vec![mg.iter().map(|&z| mh[z]).collect()]
            }
            None if self.injective[pos] => injective_maps(n_dst, n_src),
            None => all_maps(n_dst, n_src),
        };
        for map in candidates {
            *self.nodes += 1;
            if *self.nodes > self.cap {
                return Err(Error::resource(format!(
                    "presheaf enumeration exceeded {} nodes",
                    self.cap
                )));
            }
            self.assigned[f] = Some(map);
            if self.consistent(pos) {
                self.run(pos + 1)?;
            }
        }
        self.assigned[f] = None;
        Ok(())
    }

    fn consistent(&self, pos: usize) -> bool {
        let c = self.c;
        let get = |m: Mor| {
            self.assigned[m]
                .as_ref()
                .expect("checks run once all members are assigned")
        };
        for &(g, h, k) in &self.triples[pos] {
            let (mg, mh, mk) = (get(g), get(h), get(k));
            if mg.iter().enumerate().any(|(z, &y)| mh[y] != mk[z]) {
                return false;
            }
        }
        for group in &self.galois_checks[pos] {
            let f = group.covering;
            let mf = get(f);
            let mut sorted = mf.clone();
            sorted.sort_unstable();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return false;
            }
            let y = c.src(f);
            for t in 0..self.sizes[y] {
                let fixed = group.members.iter().all(|&s| get(s)[t] == t);
                if fixed != mf.contains(&t) {
                    return false;
                }
            }
        }
        true
    }
}

/// Injective maps `{0..n} → {0..m}` as value vectors.
fn injective_maps(n: usize, m: usize) -> Vec<Vec<usize>> {
    fn extend(cur: &mut Vec<usize>, n: usize, m: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for v in 0..m {
            if !cur.contains(&v) {
                cur.push(v);
                extend(cur, n, m, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::with_capacity(n), n, m, &mut out);
    out
}

/// All maps `{0..n} → {0..m}` as value vectors.
fn all_maps(n: usize, m: usize) -> Vec<Vec<usize>> {
    if n > 0 && m == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur = vec![0; n];
    loop {
        out.push(cur.clone());
        let mut i = 0;
        while i < n {
            cur[i] += 1;
            if cur[i] < m {
                break;
            }
            cur[i] = 0;
            i += 1;
        }
        if i == n {
            return out;
        }
    }
}
