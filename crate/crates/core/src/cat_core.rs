//! Finite categories given by explicit composition tables, functors between
//! them, and the elementary structural checks used by every other module.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::report::{Level, ValidationReport};

/// Index of an object inside a [`FiniteCategory`].
pub type Obj = usize;
/// Index of a morphism inside a [`FiniteCategory`].
pub type Mor = usize;

const NONE: usize = usize::MAX;

/// Reserved id of the identity morphism of `object`.
pub fn identity_id(object: &str) -> String {
    format!("id:{object}")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub id: String,
    pub src: Obj,
    pub dst: Obj,
}

/// A finite category with a total composition table.
///
/// Objects and morphisms are stored sorted by id, so index order is the
/// lexicographic order used by every deterministic search.
#[derive(Clone, Debug)]
pub struct FiniteCategory {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identity: Vec<Mor>,
    table: Vec<Mor>,
    hom: Vec<Vec<Mor>>,
    obj_index: HashMap<String, Obj>,
    mor_index: HashMap<String, Mor>,
}

impl PartialEq for FiniteCategory {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects
            && self.morphisms == other.morphisms
            && self.table == other.table
    }
}

impl Eq for FiniteCategory {}

impl FiniteCategory {
    /// Builds a category from named data.
    ///
    /// `morphisms` lists `(id, src, dst)` for the non-identity morphisms;
    /// identities are added as `id:<object>`. Each composition triple is
    /// `(f, g, h)` with `h = g ∘ f`. Composites involving an identity may be
    /// omitted.
    pub fn new(
        objects: Vec<String>,
        morphisms: Vec<(String, String, String)>,
        composition: Vec<(String, String, String)>,
    ) -> Result<Self> {
        let mut objects = objects;
        objects.sort();
        if let Some(w) = objects.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::input(format!("duplicate object id {}", w[0])));
        }
        let obj_index: HashMap<String, Obj> = objects
            .iter()
            .enumerate()
            .map(|(i, o)| (o.clone(), i))
            .collect();
        let lookup_obj = |name: &str| {
            obj_index
                .get(name)
                .copied()
                .ok_or_else(|| Error::input(format!("unknown object {name}")))
        };

        let mut records: Vec<Morphism> = Vec::new();
        for o in &objects {
            let i = obj_index[o];
            records.push(Morphism {
                id: identity_id(o),
                src: i,
                dst: i,
            });
        }
        for (id, src, dst) in morphisms {
            let (s, d) = (lookup_obj(&src)?, lookup_obj(&dst)?);
            if id.starts_with("id:") {
                if s == d && id == identity_id(&src) {
                    continue;
                }
                return Err(Error::input(format!(
                    "morphism id {id} uses the reserved identity prefix"
                )));
            }
            records.push(Morphism { id, src: s, dst: d });
        }
        records.sort_by(|a, b| a.id.cmp(&b.id));
        if let Some(w) = records.windows(2).find(|w| w[0].id == w[1].id) {
            return Err(Error::input(format!("duplicate morphism id {}", w[0].id)));
        }
        let mor_index: HashMap<String, Mor> = records
            .iter()
            .enumerate()
            .map(|(i, m)| (m.id.clone(), i))
            .collect();
        let identity: Vec<Mor> = objects.iter().map(|o| mor_index[&identity_id(o)]).collect();

        let n = records.len();
        let mut table = vec![NONE; n * n];
        let lookup_mor = |name: &str| {
            mor_index
                .get(name)
                .copied()
                .ok_or_else(|| Error::input(format!("unknown morphism {name}")))
        };
        for (f, g, h) in &composition {
            let (f, g, h) = (lookup_mor(f)?, lookup_mor(g)?, lookup_mor(h)?);
            if records[f].dst != records[g].src {
                return Err(Error::input(format!(
                    "composition entry [{}, {}, {}] is not composable",
                    records[f].id, records[g].id, records[h].id
                )));
            }
            if records[h].src != records[f].src || records[h].dst != records[g].dst {
                return Err(Error::input(format!(
                    "composite {} has the wrong source or target for {} after {}",
                    records[h].id, records[g].id, records[f].id
                )));
            }
            let slot = &mut table[g * n + f];
            if *slot != NONE && *slot != h {
                return Err(Error::input(format!(
                    "conflicting composition entries for {} after {}",
                    records[g].id, records[f].id
                )));
            }
            *slot = h;
        }
        for f in 0..n {
            let (s, d) = (records[f].src, records[f].dst);
            if table[identity[d] * n + f] == NONE {
                table[identity[d] * n + f] = f;
            }
            if table[f * n + identity[s]] == NONE {
                table[f * n + identity[s]] = f;
            }
        }
        for g in 0..n {
            for f in 0..n {
                if records[f].dst == records[g].src && table[g * n + f] == NONE {
                    return Err(Error::input(format!(
                        "composition table is not total: {} after {} is missing",
                        records[g].id, records[f].id
                    )));
                }
            }
        }

        let no = objects.len();
        let mut hom = vec![Vec::new(); no * no];
        for (i, m) in records.iter().enumerate() {
            hom[m.src * no + m.dst].push(i);
        }
        Ok(FiniteCategory {
            objects,
            morphisms: records,
            identity,
            table,
            hom,
            obj_index,
            mor_index,
        })
    }

    /// Builds a category from a composition rule on ids instead of a list of triples.
    pub fn from_rule(
        objects: Vec<String>,
        morphisms: Vec<(String, String, String)>,
        mut rule: impl FnMut(&str, &str) -> String,
    ) -> Result<Self> {
        let mut all: Vec<(String, String, String)> = objects
            .iter()
            .map(|o| (identity_id(o), o.clone(), o.clone()))
            .collect();
        all.extend(morphisms.iter().cloned());
        let mut composition = Vec::new();
        for (f, _, fd) in &all {
            for (g, gs, _) in &all {
                if fd == gs {
                    composition.push((f.clone(), g.clone(), rule(g, f)));
                }
            }
        }
        FiniteCategory::new(objects, morphisms, composition)
    }

    /// Returns a copy whose table maps `g ∘ f` to `h`; used for mutation testing.
    pub fn with_composite(&self, g: Mor, f: Mor, h: Mor) -> Result<Self> {
        if self.dst(f) != self.src(g) || self.src(h) != self.src(f) || self.dst(h) != self.dst(g) {
            return Err(Error::input("replacement composite has the wrong shape"));
        }
        let mut out = self.clone();
        let n = out.morphisms.len();
        out.table[g * n + f] = h;
        Ok(out)
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> std::ops::Range<Obj> {
        0..self.objects.len()
    }

    pub fn morphisms(&self) -> std::ops::Range<Mor> {
        0..self.morphisms.len()
    }

    pub fn object_names(&self) -> &[String] {
        &self.objects
    }

    pub fn morphism_records(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn obj_name(&self, x: Obj) -> &str {
        &self.objects[x]
    }

    pub fn mor_name(&self, f: Mor) -> &str {
        &self.morphisms[f].id
    }

    pub fn find_object(&self, name: &str) -> Option<Obj> {
        self.obj_index.get(name).copied()
    }

    pub fn find_morphism(&self, name: &str) -> Option<Mor> {
        self.mor_index.get(name).copied()
    }

    pub fn object(&self, name: &str) -> Result<Obj> {
        self.find_object(name)
            .ok_or_else(|| Error::input(format!("unknown object {name}")))
    }

    pub fn morphism(&self, name: &str) -> Result<Mor> {
        self.find_morphism(name)
            .ok_or_else(|| Error::input(format!("unknown morphism {name}")))
    }

    pub fn src(&self, f: Mor) -> Obj {
        self.morphisms[f].src
    }

    pub fn dst(&self, f: Mor) -> Obj {
        self.morphisms[f].dst
    }

    pub fn identity(&self, x: Obj) -> Mor {
        self.identity[x]
    }

    pub fn is_identity(&self, f: Mor) -> bool {
        self.identity[self.src(f)] == f
    }

    /// `g ∘ f`, "g after f". Panics when the pair is not composable.
    pub fn compose(&self, g: Mor, f: Mor) -> Mor {
        self.try_compose(g, f).unwrap_or_else(|| {
            panic!(
                "{} after {} is not composable",
                self.mor_name(g),
                self.mor_name(f)
            )
        })
    }

    pub fn try_compose(&self, g: Mor, f: Mor) -> Option<Mor> {
        if self.dst(f) != self.src(g) {
            return None;
        }
        let h = self.table[g * self.morphisms.len() + f];
        (h != NONE).then_some(h)
    }

    /// Morphisms from `a` to `b`, in id order.
    pub fn hom(&self, a: Obj, b: Obj) -> &[Mor] {
        &self.hom[a * self.objects.len() + b]
    }

    /// Morphisms with target `x`, in id order.
    pub fn incoming(&self, x: Obj) -> Vec<Mor> {
        self.morphisms().filter(|&f| self.dst(f) == x).collect()
    }

    /// Morphisms with source `x`, in id order.
    pub fn outgoing(&self, x: Obj) -> Vec<Mor> {
        self.morphisms().filter(|&f| self.src(f) == x).collect()
    }

    pub fn inverse(&self, f: Mor) -> Option<Mor> {
        let (s, d) = (self.src(f), self.dst(f));
        self.hom(d, s).iter().copied().find(|&g| {
            self.compose(g, f) == self.identity(s) && self.compose(f, g) == self.identity(d)
        })
    }

    pub fn is_iso(&self, f: Mor) -> bool {
        self.inverse(f).is_some()
    }

    /// Isomorphisms from `a` to `b`, in id order.
    pub fn isos(&self, a: Obj, b: Obj) -> Vec<Mor> {
        self.hom(a, b)
            .iter()
            .copied()
            .filter(|&f| self.is_iso(f))
            .collect()
    }

    pub fn is_thin(&self) -> bool {
        self.hom.iter().all(|h| h.len() <= 1)
    }

    pub fn names(&self, fs: &[Mor]) -> Vec<String> {
        fs.iter().map(|&f| self.mor_name(f).to_string()).collect()
    }

    /// Non-identity morphisms as `(id, src, dst)` name triples.
    pub fn morphism_triples(&self) -> Vec<(String, String, String)> {
        self.morphisms()
            .filter(|&f| !self.is_identity(f))
            .map(|f| {
                (
                    self.mor_name(f).to_string(),
                    self.obj_name(self.src(f)).to_string(),
                    self.obj_name(self.dst(f)).to_string(),
                )
            })
            .collect()
    }

    /// Composition triples `(f, g, g∘f)` for all composable non-identity pairs.
    pub fn composition_triples(&self) -> Vec<(String, String, String)> {
        let mut out = Vec::new();
        for f in self.morphisms() {
            for g in self.morphisms() {
                if self.is_identity(f) || self.is_identity(g) {
                    continue;
                }
                if let Some(h) = self.try_compose(g, f) {
                    out.push((
                        self.mor_name(f).into(),
                        self.mor_name(g).into(),
                        self.mor_name(h).into(),
                    ));
                }
            }
        }
        out
    }
}

/// A functor between finite categories, stored as index maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatFunctor {
    pub obj_map: Vec<Obj>,
    pub mor_map: Vec<Mor>,
}

impl CatFunctor {
    pub fn identity(c: &FiniteCategory) -> Self {
        CatFunctor {
            obj_map: c.objects().collect(),
            mor_map: c.morphisms().collect(),
        }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &CatFunctor) -> CatFunctor {
        CatFunctor {
            obj_map: self.obj_map.iter().map(|&x| other.obj_map[x]).collect(),
            mor_map: self.mor_map.iter().map(|&f| other.mor_map[f]).collect(),
        }
    }

    /// Checks that sources, targets, identities and composites are preserved.
    pub fn validate(&self, source: &FiniteCategory, target: &FiniteCategory) -> Result<()> {
        if self.obj_map.len() != source.num_objects()
            || self.mor_map.len() != source.num_morphisms()
        {
            return Err(Error::input(
                "functor tables do not match the source category",
            ));
        }
        for f in source.morphisms() {
            let image = self.mor_map[f];
            if target.src(image) != self.obj_map[source.src(f)]
                || target.dst(image) != self.obj_map[source.dst(f)]
            {
                return Err(Error::invariant(format!(
                    "functor does not preserve the ends of {}",
                    source.mor_name(f)
                )));
            }
        }
        for x in source.objects() {
            if self.mor_map[source.identity(x)] != target.identity(self.obj_map[x]) {
                return Err(Error::invariant(format!(
                    "functor does not preserve the identity of {}",
                    source.obj_name(x)
                )));
            }
        }
        for f in source.morphisms() {
            for g in source.morphisms() {
                if let Some(h) = source.try_compose(g, f) {
                    if target.compose(self.mor_map[g], self.mor_map[f]) != self.mor_map[h] {
                        return Err(Error::invariant(format!(
                            "functor does not preserve {} after {}",
                            source.mor_name(g),
                            source.mor_name(f)
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// A natural isomorphism between two functors with common source and target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NaturalIso {
    pub components: Vec<Mor>,
}

impl NaturalIso {
    pub fn validate(
        &self,
        source: &FiniteCategory,
        target: &FiniteCategory,
        from: &CatFunctor,
        to: &CatFunctor,
    ) -> Result<()> {
        for x in source.objects() {
            let c = self.components[x];
            if target.src(c) != from.obj_map[x]
                || target.dst(c) != to.obj_map[x]
                || !target.is_iso(c)
            {
                return Err(Error::invariant(format!(
                    "component at {} is not an isomorphism",
                    source.obj_name(x)
                )));
            }
        }
        for f in source.morphisms() {
            let (a, b) = (source.src(f), source.dst(f));
            let left = target.compose(to.mor_map[f], self.components[a]);
            let right = target.compose(self.components[b], from.mor_map[f]);
            if left != right {
                return Err(Error::invariant(format!(
                    "naturality fails at {}",
                    source.mor_name(f)
                )));
            }
        }
        Ok(())
    }
}

/// Lists every identity-law and associativity violation.
pub fn validate_category(c: &FiniteCategory) -> ValidationReport {
    let mut report = ValidationReport::new(Level::Category);
    for f in c.morphisms() {
        let (s, d) = (c.src(f), c.dst(f));
        if c.compose(c.identity(d), f) != f {
            report.fail(
                "identity-left",
                c.names(&[c.identity(d), f]),
                "id after f differs from f",
            );
        }
        if c.compose(f, c.identity(s)) != f {
            report.fail(
                "identity-right",
                c.names(&[f, c.identity(s)]),
                "f after id differs from f",
            );
        }
    }
    for f in c.morphisms() {
        for g in c.outgoing(c.dst(f)) {
            let gf = c.compose(g, f);
            for h in c.outgoing(c.dst(g)) {
                if c.compose(h, gf) != c.compose(c.compose(h, g), f) {
                    report.fail(
                        "associativity",
                        c.names(&[f, g, h]),
                        "h(gf) differs from (hg)f",
                    );
                }
            }
        }
    }
    report
}

/// A pair `(g, h)` with `g ∘ f = h ∘ f` and `g ≠ h`, if `f` is not an epimorphism.
pub fn non_epi_witness(c: &FiniteCategory, f: Mor) -> Option<(Mor, Mor)> {
    let b = c.dst(f);
    for z in c.objects() {
        let mut seen: HashMap<Mor, Mor> = HashMap::new();
        for &g in c.hom(b, z) {
            if let Some(&prev) = seen.get(&c.compose(g, f)) {
                return Some((prev, g));
            }
            seen.insert(c.compose(g, f), g);
        }
    }
    None
}

/// The epimorphisms of `c`, in id order.
pub fn epimorphisms(c: &FiniteCategory) -> Vec<Mor> {
    c.morphisms()
        .filter(|&f| non_epi_witness(c, f).is_none())
        .collect()
}

/// `Ok` when every morphism is an epimorphism; otherwise `(f, g, h)` with `g∘f = h∘f`.
pub fn is_e_category(c: &FiniteCategory) -> std::result::Result<(), (Mor, Mor, Mor)> {
    for f in c.morphisms() {
        if let Some((g, h)) = non_epi_witness(c, f) {
            return Err((f, g, h));
        }
    }
    Ok(())
}

/// First pair of objects without a common source using only `allowed` morphisms.
pub fn lambda_violation(c: &FiniteCategory, allowed: &dyn Fn(Mor) -> bool) -> Option<(Obj, Obj)> {
    let reach: Vec<Vec<bool>> = c
        .objects()
        .map(|z| {
            let mut r = vec![false; c.num_objects()];
            for f in c.outgoing(z) {
                if allowed(f) {
                    r[c.dst(f)] = true;
                }
            }
            r
        })
        .collect();
    for x in c.objects() {
        for y in x..c.num_objects() {
            if !c.objects().any(|z| reach[z][x] && reach[z][y]) {
                return Some((x, y));
            }
        }
    }
    None
}

/// `Ok(None)` when Λ-connected, `Ok(Some(pair))` with a violating pair otherwise.
pub fn is_lambda_connected(c: &FiniteCategory) -> Result<Option<(Obj, Obj)>> {
    if c.num_objects() == 0 {
        return Err(Error::input("the empty category has no Λ-connectivity"));
    }
    Ok(lambda_violation(c, &|_| true))
}

/// A square `(g1, g2)` with `f1 ∘ g1 = f2 ∘ g2` and `g2` in `closing`.
pub fn ore_witness(
    c: &FiniteCategory,
    closing: &dyn Fn(Mor) -> bool,
    f1: Mor,
    f2: Mor,
) -> Option<(Mor, Mor)> {
    let (y1, y2) = (c.src(f1), c.src(f2));
    for z in c.objects() {
        for &g2 in c.hom(z, y2) {
            if !closing(g2) {
                continue;
            }
            let target = c.compose(f2, g2);
            if let Some(&g1) = c.hom(z, y1).iter().find(|&&g1| c.compose(f1, g1) == target) {
                return Some((g1, g2));
            }
        }
    }
    None
}

/// Every cospan `(f1, f2)` with `f1` in `basis` that has no square closed by `basis`.
pub fn ore_violations(c: &FiniteCategory, basis: &dyn Fn(Mor) -> bool) -> Vec<(Mor, Mor)> {
    let mut out = Vec::new();
    for f1 in c.morphisms().filter(|&f| basis(f)) {
        for f2 in c.incoming(c.dst(f1)) {
            if ore_witness(c, basis, f1, f2).is_none() {
                out.push((f1, f2));
            }
        }
    }
    out
}

/// `None` when every cospan closes to a square, otherwise the least open cospan.
pub fn is_semi_cofiltered(c: &FiniteCategory) -> Option<(Mor, Mor)> {
    ore_violations(c, &|_| true).into_iter().next()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Over,
    Under,
}

/// The over- or undercategory at `x` with its forgetful functor.
///
/// Slice objects are named by the morphism they stand for.
pub fn slice(
    c: &FiniteCategory,
    x: Obj,
    direction: Direction,
) -> Result<(FiniteCategory, CatFunctor)> {
    let objs: Vec<Mor> = match direction {
        Direction::Over => c.incoming(x),
        Direction::Under => c.outgoing(x),
    };
    let end = |f: Mor| match direction {
        Direction::Over => c.src(f),
        Direction::Under => c.dst(f),
    };
    // (name, from, to, underlying)
    let mut arrows: Vec<(String, Mor, Mor, Mor)> = Vec::new();
    for &f1 in &objs {
        for &f2 in &objs {
            for &h in c.hom(end(f1), end(f2)) {
                let commutes = match direction {
                    Direction::Over => c.compose(f2, h) == f1,
                    Direction::Under => c.compose(h, f1) == f2,
                };
                if !commutes {
                    continue;
                }
                let name = if f1 == f2 && c.is_identity(h) {
                    identity_id(c.mor_name(f1))
                } else {
                    format!("{}@{}>{}", c.mor_name(h), c.mor_name(f1), c.mor_name(f2))
                };
                arrows.push((name, f1, f2, h));
            }
        }
    }
    let key: HashMap<(Mor, Mor, Mor), String> = arrows
        .iter()
        .map(|(n, a, b, h)| ((*a, *b, *h), n.clone()))
        .collect();
    let mut composition = Vec::new();
    for (n1, a, b, h1) in &arrows {
        for (n2, b2, d, h2) in &arrows {
            if b != b2 {
                continue;
            }
            let h = c.compose(*h2, *h1);
            composition.push((n1.clone(), n2.clone(), key[&(*a, *d, h)].clone()));
        }
    }
    let objects: Vec<String> = objs.iter().map(|&f| c.mor_name(f).to_string()).collect();
    let morphisms = arrows
        .iter()
        .filter(|(n, ..)| !n.starts_with("id:"))
        .map(|(n, a, b, _)| {
            (
                n.clone(),
                c.mor_name(*a).to_string(),
                c.mor_name(*b).to_string(),
            )
        })
        .collect();
    let s = FiniteCategory::new(objects, morphisms, composition)?;
    let obj_map = s
        .objects()
        .map(|o| end(c.morphism(s.obj_name(o)).unwrap()))
        .collect();
    let by_name: HashMap<&str, Mor> = arrows.iter().map(|(n, _, _, h)| (n.as_str(), *h)).collect();
    let mor_map = s.morphisms().map(|m| by_name[s.mor_name(m)]).collect();
    Ok((s, CatFunctor { obj_map, mor_map }))
}

/// Skeleton of a thin category together with the collapse functor
/// `c → skeleton` and the inclusion `skeleton → c`.
#[derive(Clone, Debug)]
pub struct Skeleton {
    pub poset: FiniteCategory,
    pub collapse: CatFunctor,
    pub include: CatFunctor,
    /// Representative object of `c` for every object of `c`.
    pub representative: Vec<Obj>,
}

/// Collapses each isomorphism class of a thin category to its least object.
pub fn poset_skeleton(c: &FiniteCategory) -> Result<Skeleton> {
    if c.num_objects() == 0 {
        return Err(Error::input("empty category has no skeleton"));
    }
    for a in c.objects() {
        for b in c.objects() {
            if c.hom(a, b).len() > 1 {
                return Err(Error::input(format!(
                    "category is not thin: Hom({},{}) has {} morphisms",
                    c.obj_name(a),
                    c.obj_name(b),
                    c.hom(a, b).len()
                )));
            }
        }
    }
    let le = |a: Obj, b: Obj| !c.hom(a, b).is_empty();
    let representative: Vec<Obj> = c
        .objects()
        .map(|a| c.objects().find(|&b| le(a, b) && le(b, a)).unwrap())
        .collect();
    let reps: Vec<Obj> = c.objects().filter(|&a| representative[a] == a).collect();
    let mut morphisms = Vec::new();
    for &a in &reps {
        for &b in &reps {
            if a != b && le(a, b) {
                let f = c.hom(a, b)[0];
                morphisms.push((
                    c.mor_name(f).to_string(),
                    c.obj_name(a).to_string(),
                    c.obj_name(b).to_string(),
                ));
            }
        }
    }
    let objects: Vec<String> = reps.iter().map(|&a| c.obj_name(a).to_string()).collect();
    let poset = FiniteCategory::from_rule(objects, morphisms, |g, f| {
        let (g, f) = (c.find_morphism(g).unwrap(), c.find_morphism(f).unwrap());
        let h = c.compose(g, f);
        if c.is_identity(h) {
            identity_id(c.obj_name(c.src(h)))
        } else {
            c.mor_name(h).to_string()
        }
    })?;
    let include = CatFunctor {
        obj_map: poset
            .objects()
            .map(|o| c.object(poset.obj_name(o)).unwrap())
            .collect(),
        mor_map: poset
            .morphisms()
            .map(|m| {
                if poset.is_identity(m) {
                    c.identity(c.object(poset.obj_name(poset.src(m))).unwrap())
                } else {
                    c.morphism(poset.mor_name(m)).unwrap()
                }
            })
            .collect(),
    };
    let to_skel: Vec<Obj> = c
        .objects()
        .map(|a| poset.object(c.obj_name(representative[a])).unwrap())
        .collect();
    let collapse = CatFunctor {
        obj_map: to_skel.clone(),
        mor_map: c
            .morphisms()
            .map(|f| poset.hom(to_skel[c.src(f)], to_skel[c.dst(f)])[0])
            .collect(),
    };
    Ok(Skeleton {
        poset,
        collapse,
        include,
        representative,
    })
}

/// The quotient `y → X` of `y` by a subgroup of `Aut(y)`, if one exists in `c`.
///
/// A candidate `can` qualifies when precomposition with it is a bijection
/// from `Hom(X, Z)` onto the invariant part of `Hom(y, Z)` for every `Z`.
pub fn quotient_object(c: &FiniteCategory, y: Obj, subgroup: &[Mor]) -> Result<Option<(Obj, Mor)>> {
    check_subgroup(c, y, subgroup)?;
    for &can in &c.outgoing(y) {
        if subgroup.iter().any(|&s| c.compose(can, s) != can) {
            continue;
        }
        let x = c.dst(can);
        let universal = c.objects().all(|z| {
            let invariant: Vec<Mor> = c
                .hom(y, z)
                .iter()
                .copied()
                .filter(|&h| subgroup.iter().all(|&s| c.compose(h, s) == h))
                .collect();
            let mut images: Vec<Mor> = c.hom(x, z).iter().map(|&g| c.compose(g, can)).collect();
            images.sort();
            let before = images.len();
            images.dedup();
            before == images.len() && images == invariant
        });
        if universal {
            return Ok(Some((x, can)));
        }
    }
    Ok(None)
}

fn check_subgroup(c: &FiniteCategory, y: Obj, subgroup: &[Mor]) -> Result<()> {
    let members: std::collections::BTreeSet<Mor> = subgroup.iter().copied().collect();
    if !members.contains(&c.identity(y)) {
        return Err(Error::input("subgroup does not contain the identity"));
    }
    for &s in &members {
        if c.src(s) != y || c.dst(s) != y {
            return Err(Error::input(format!(
                "{} is not an endomorphism of {}",
                c.mor_name(s),
                c.obj_name(y)
            )));
        }
        match c.inverse(s) {
            Some(t) if members.contains(&t) => {}
            _ => {
                return Err(Error::input(format!(
                    "{} has no inverse in the subgroup",
                    c.mor_name(s)
                )))
            }
        }
        for &t in &members {
            if !members.contains(&c.compose(s, t)) {
                return Err(Error::input("subgroup is not closed under composition"));
            }
        }
    }
    Ok(())
}

/// The thin category of a partial order on named elements, with arrows
/// named `a<b`. Returns the category and the object index of each element.
pub fn poset_category(
    names: &[String],
    le: impl Fn(usize, usize) -> bool,
) -> Result<(FiniteCategory, Vec<Obj>)> {
    let n = names.len();
    for a in 0..n {
        if !le(a, a) {
            return Err(Error::input(format!(
                "order is not reflexive at {}",
                names[a]
            )));
        }
        for b in 0..n {
            if a != b && le(a, b) && le(b, a) {
                return Err(Error::input(format!(
                    "order is not antisymmetric at {} and {}",
                    names[a], names[b]
                )));
            }
            for c in 0..n {
                if le(a, b) && le(b, c) && !le(a, c) {
                    return Err(Error::input(format!(
                        "order is not transitive at {}",
                        names[b]
                    )));
                }
            }
        }
    }
    let arrow = |a: usize, b: usize| format!("{}<{}", names[a], names[b]);
    let mut ends: HashMap<String, (usize, usize)> = HashMap::new();
    let mut morphisms = Vec::new();
    for a in 0..n {
        ends.insert(identity_id(&names[a]), (a, a));
        for b in 0..n {
            if a != b && le(a, b) {
                ends.insert(arrow(a, b), (a, b));
                morphisms.push((arrow(a, b), names[a].clone(), names[b].clone()));
            }
        }
    }
    let c = FiniteCategory::from_rule(names.to_vec(), morphisms, |g, f| {
        let (a, _) = ends[f];
        let (_, b) = ends[g];
        if a == b {
            identity_id(&names[a])
        } else {
            arrow(a, b)
        }
    })?;
    let index = names.iter().map(|x| c.object(x)).collect::<Result<_>>()?;
    Ok((c, index))
}

/// Hom-set sizes `|Hom(a, b)|` keyed by object names.
pub fn hom_counts(c: &FiniteCategory) -> BTreeMap<(String, String), usize> {
    let mut out = BTreeMap::new();
    for a in c.objects() {
        for b in c.objects() {
            out.insert(
                (c.obj_name(a).to_string(), c.obj_name(b).to_string()),
                c.hom(a, b).len(),
            );
        }
    }
    out
}
