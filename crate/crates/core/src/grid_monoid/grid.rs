//! Grids and pregrids: validation, lifting searches, and the construction
//! of a pregrid and a grid from a finite Y-site.

use std::collections::{BTreeMap, HashMap};

use petgraph::unionfind::UnionFind;

use crate::cat_core::{lambda_violation, poset_category, CatFunctor, FiniteCategory, Mor, Obj};
use crate::error::{Error, Result};
use crate::galois_coverings::{galois_category_over, hom_over};
use crate::report::{Level, ValidationReport};
use crate::site_validation::{cardinality_report, validate_y_site, Site};

/// A thin skeletal poset with a functor into a site category.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grid {
    pub poset: FiniteCategory,
    pub iota: CatFunctor,
}

impl Grid {
    pub fn new(poset: FiniteCategory, iota: CatFunctor, target: &FiniteCategory) -> Result<Self> {
        iota.validate(&poset, target)
            .map_err(|e| Error::input(e.to_string()))?;
        for a in poset.objects() {
            for b in poset.objects() {
                if poset.hom(a, b).len() > 1 {
                    return Err(Error::input(format!(
                        "grid is not thin at {}",
                        poset.obj_name(a)
                    )));
                }
                if a != b && !poset.hom(a, b).is_empty() && !poset.hom(b, a).is_empty() {
                    return Err(Error::input(format!(
                        "grid is not skeletal: {} and {} are isomorphic",
                        poset.obj_name(a),
                        poset.obj_name(b)
                    )));
                }
            }
        }
        Ok(Grid { poset, iota })
    }

    pub fn len(&self) -> usize {
        self.poset.num_objects()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn objects(&self) -> std::ops::Range<Obj> {
        self.poset.objects()
    }

    pub fn name(&self, x: Obj) -> &str {
        self.poset.obj_name(x)
    }

    pub fn le(&self, a: Obj, b: Obj) -> bool {
        !self.poset.hom(a, b).is_empty()
    }

    /// The site object `ι(x)`.
    pub fn image(&self, x: Obj) -> Obj {
        self.iota.obj_map[x]
    }

    /// The site morphism `ι(a → b)`, when `a ≤ b`.
    pub fn image_arrow(&self, a: Obj, b: Obj) -> Option<Mor> {
        self.poset.hom(a, b).first().map(|&m| self.iota.mor_map[m])
    }

    pub fn up_set(&self, x: Obj) -> Vec<Obj> {
        self.objects().filter(|&y| self.le(x, y)).collect()
    }

    pub fn down_set(&self, x: Obj) -> Vec<Obj> {
        self.objects().filter(|&y| self.le(y, x)).collect()
    }

    /// The least object; every finite Λ-connected poset has one.
    pub fn least(&self) -> Option<Obj> {
        self.objects()
            .find(|&e| self.objects().all(|x| self.le(e, x)))
    }
}

/// A poset arrow into `x` whose image is not a covering morphism.
pub fn non_edge_witness(g: &Grid, site: &Site, x: Obj) -> Option<Mor> {
    g.poset
        .incoming(x)
        .into_iter()
        .find(|&m| !site.is_covering(g.iota.mor_map[m]))
}

/// Objects all of whose incoming arrows map to covering morphisms.
pub fn edge_objects(g: &Grid, site: &Site) -> Vec<Obj> {
    g.objects()
        .filter(|&x| non_edge_witness(g, site, x).is_none())
        .collect()
}

/// Pairs `(y, a)` with `x ≤ y` and `a: ι(y) ≅ dst(u)` such that `a ∘ ι(x → y) = u`.
pub fn lift_under(g: &Grid, c: &FiniteCategory, x: Obj, u: Mor) -> Vec<(Obj, Mor)> {
    let mut out = Vec::new();
    for y in g.up_set(x) {
        let arrow = g.image_arrow(x, y).expect("y lies above x");
        for a in c.isos(g.image(y), c.dst(u)) {
            if c.compose(a, arrow) == u {
                out.push((y, a));
            }
        }
    }
    out
}

/// Pairs `(y, a)` with `y ≤ x` and `a: src(f) ≅ ι(y)` such that `ι(y → x) ∘ a = f`.
pub fn lift_over(g: &Grid, c: &FiniteCategory, x: Obj, f: Mor) -> Vec<(Obj, Mor)> {
    let mut out = Vec::new();
    for y in g.down_set(x) {
        let arrow = g.image_arrow(y, x).expect("y lies below x");
        for a in c.isos(c.src(f), g.image(y)) {
            if c.compose(arrow, a) == f {
                out.push((y, a));
            }
        }
    }
    out
}

/// Checks that `ι` induces an equivalence from the up-set of `x` onto the
/// undercategory of `ι(x)` restricted to morphisms accepted by `allowed`.
fn under_equivalence(
    g: &Grid,
    c: &FiniteCategory,
    x: Obj,
    allowed: &dyn Fn(Mor) -> bool,
    condition: &str,
    report: &mut ValidationReport,
) {
    let up = g.up_set(x);
    for &y in &up {
        for &z in &up {
            if g.le(y, z) {
                continue;
            }
            let (uy, uz) = (g.image_arrow(x, y).unwrap(), g.image_arrow(x, z).unwrap());
            if c.hom(g.image(y), g.image(z))
                .iter()
                .any(|&h| allowed(h) && c.compose(h, uy) == uz)
            {
                report.fail(
                    condition,
                    vec![
                        g.name(x).to_string(),
                        g.name(y).to_string(),
                        g.name(z).to_string(),
                    ],
                    "undercategory functor is not full",
                );
            }
        }
    }
    for u in c.outgoing(g.image(x)) {
        if allowed(u) && lift_under(g, c, x, u).is_empty() {
            report.fail(
                condition,
                vec![g.name(x).to_string(), c.mor_name(u).to_string()],
                "undercategory functor is not essentially surjective",
            );
        }
    }
}

fn lambda_and_lifting(g: &Grid, site: &Site, report: &mut ValidationReport, prefix: &str) {
    let c = &site.category;
    if g.is_empty() {
        report.fail(format!("{prefix}1"), vec![], "poset is empty");
    } else if let Some((a, b)) = lambda_violation(&g.poset, &|_| true) {
        report.fail(
            format!("{prefix}1"),
            vec![g.name(a).to_string(), g.name(b).to_string()],
            "poset is not Λ-connected",
        );
    }
    for x in g.objects() {
        for f in c.incoming(g.image(x)) {
            if site.is_covering(f) && lift_over(g, c, x, f).is_empty() {
                report.fail(
                    format!("{prefix}3"),
                    vec![g.name(x).to_string(), c.mor_name(f).to_string()],
                    "covering morphism has no lift into the poset",
                );
            }
        }
    }
}

/// The four grid conditions, each failure carrying a witness.
pub fn validate_grid(g: &Grid, site: &Site) -> ValidationReport {
    let c = &site.category;
    let mut report = ValidationReport::new(Level::Grid);
    lambda_and_lifting(g, site, &mut report, "G");
    let edges = edge_objects(g, site);
    for x in c.objects() {
        if !edges.iter().any(|&e| !c.isos(g.image(e), x).is_empty()) {
            report.fail(
                "G2",
                vec![c.obj_name(x).to_string()],
                "object is not isomorphic to the image of an edge object",
            );
        }
    }
    for x in g.objects() {
        under_equivalence(g, c, x, &|_| true, "G4", &mut report);
    }
    report
}

/// The four pregrid conditions against the covering subcategory.
pub fn validate_pregrid(g: &Grid, site: &Site) -> ValidationReport {
    let c = &site.category;
    let mut report = ValidationReport::new(Level::Pregrid);
    for m in g.poset.morphisms() {
        if !site.is_covering(g.iota.mor_map[m]) {
            report.fail(
                "P0",
                vec![g.poset.mor_name(m).to_string()],
                "arrow does not map to a covering morphism",
            );
        }
    }
    lambda_and_lifting(g, site, &mut report, "P");
    for x in c.objects() {
        if !g.objects().any(|e| !c.isos(g.image(e), x).is_empty()) {
            report.fail(
                "P2",
                vec![c.obj_name(x).to_string()],
                "functor is not essentially surjective",
            );
        }
    }
    let covering = |f: Mor| site.is_covering(f);
    for x in g.objects() {
        under_equivalence(g, c, x, &covering, "P4", &mut report);
    }
    report
}

/// Thin poset on morphisms out of a common object, ordered by factorization
/// through `allowed` morphisms, collapsed to the least morphism of each class.
fn under_skeleton(
    c: &FiniteCategory,
    members: &[Mor],
    allowed: &dyn Fn(Mor) -> bool,
) -> Result<(Grid, Vec<Mor>)> {
    let factor = |u: Mor, v: Mor| {
        c.hom(c.dst(u), c.dst(v))
            .iter()
            .copied()
            .find(|&h| allowed(h) && c.compose(h, u) == v)
    };
    let mut reps: Vec<Mor> = Vec::new();
    for &u in members {
        if !reps
            .iter()
            .any(|&r| factor(r, u).is_some() && factor(u, r).is_some())
        {
            reps.push(u);
        }
    }
    reps.sort();
    let names: Vec<String> = reps
        .iter()
        .map(|&u| format!("[{}]", c.mor_name(u)))
        .collect();
    let (poset, index) = poset_category(&names, |a, b| factor(reps[a], reps[b]).is_some())?;
    let mut obj_map = vec![0; poset.num_objects()];
    let mut rep_of = vec![0; poset.num_objects()];
    for (k, &o) in index.iter().enumerate() {
        obj_map[o] = c.dst(reps[k]);
        rep_of[o] = reps[k];
    }
    let mor_map = poset
        .morphisms()
        .map(|m| {
            factor(rep_of[poset.src(m)], rep_of[poset.dst(m)])
                .expect("arrows come from factorizations")
        })
        .collect();
    let grid = Grid::new(poset, CatFunctor { obj_map, mor_map }, c)?;
    Ok((grid, rep_of))
}

/// A pregrid of the covering subcategory, built over the base object `x0`.
///
/// On a finite site the directed system of finite subsets of representatives
/// has a largest member, so the construction runs once with every
/// representative: a Galois covering `Ỹ → x0` dominating all of them, the
/// least compatible choice of morphisms over `x0`, and the poset skeleton of
/// the covering morphisms out of `Ỹ` that factor through the choice.
pub fn build_pregrid(site: &Site, x0: Obj) -> Result<Grid> {
    let c = &site.category;
    let y_report = validate_y_site(site, 0);
    if y_report.has_failures() {
        let first = y_report.failures().next().unwrap();
        return Err(Error::precondition(format!(
            "not a Y-site: {} {:?}",
            first.condition, first.witness
        )));
    }
    cardinality_report(site)?;
    if x0 >= c.num_objects() {
        return Err(Error::input("base object out of range"));
    }
    let covering = |f: Mor| site.is_covering(f);
    let over: Vec<Mor> = c
        .incoming(x0)
        .into_iter()
        .filter(|&f| covering(f))
        .collect();
    let mut reps: Vec<Mor> = Vec::new();
    for &s in &over {
        let isomorphic = |r: Mor| {
            c.isos(c.src(s), c.src(r))
                .iter()
                .any(|&a| c.compose(r, a) == s)
        };
        if !reps.iter().any(|&r| isomorphic(r)) {
            reps.push(s);
        }
    }
    let gal = galois_category_over(site, x0)?;
    let top = gal
        .coverings
        .iter()
        .copied()
        .find(|&f| reps.iter().all(|&s| !hom_over(c, f, s).is_empty()))
        .ok_or_else(|| Error::invariant("no Galois covering dominates every representative"))?;
    let choice: Vec<Mor> = reps.iter().map(|&s| hom_over(c, top, s)[0]).collect();
    let mut members: Vec<Mor> = c
        .outgoing(c.src(top))
        .into_iter()
        .filter(|&u| {
            covering(u)
                && choice.iter().any(|&y| {
                    c.hom(c.dst(y), c.dst(u))
                        .iter()
                        .any(|&g| covering(g) && c.compose(g, y) == u)
                })
        })
        .collect();
    members.sort();
    let (pregrid, _) = under_skeleton(c, &members, &covering)?;
    let report = validate_pregrid(&pregrid, site);
    if let Some(f) = report.failures().next() {
        return Err(Error::invariant(format!(
            "constructed pregrid fails {} at {:?}",
            f.condition, f.witness
        )));
    }
    Ok(pregrid)
}

/// A grid glued from the undercategories of the pregrid objects.
///
/// The colimit is computed by union-find on pairs `(x, u)` of a pregrid
/// object and a morphism out of `ι(x)`, identifying `(x, u)` with
/// `(y, u ∘ ι(y → x))` and with `(x, a ∘ u)` for isomorphisms `a`. Each class
/// is represented by its least morphism out of the least pregrid object.
pub fn build_grid(pregrid: &Grid, site: &Site) -> Result<Grid> {
    let c = &site.category;
    let report = validate_pregrid(pregrid, site);
    if let Some(f) = report.failures().next() {
        return Err(Error::precondition(format!(
            "invalid pregrid: {} at {:?}",
            f.condition, f.witness
        )));
    }
    let bottom = pregrid
        .least()
        .ok_or_else(|| Error::invariant("pregrid has no least object"))?;
    let mut pairs: Vec<(Obj, Mor)> = Vec::new();
    for x in pregrid.objects() {
        pairs.extend(c.outgoing(pregrid.image(x)).into_iter().map(|u| (x, u)));
    }
    let index: HashMap<(Obj, Mor), usize> =
        pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut uf = UnionFind::new(pairs.len());
    for (i, &(x, u)) in pairs.iter().enumerate() {
        for y in pregrid.down_set(x) {
            let v = c.compose(u, pregrid.image_arrow(y, x).unwrap());
            uf.union(i, index[&(y, v)]);
        }
        for a in c.isos(c.dst(u), c.dst(u)) {
            uf.union(i, index[&(x, c.compose(a, u))]);
        }
    }
    let mut classes: BTreeMap<usize, Vec<Mor>> = BTreeMap::new();
    for (i, &(x, u)) in pairs.iter().enumerate() {
        let members = classes.entry(uf.find(i)).or_default();
        if x == bottom {
            members.push(u);
        }
    }
    let mut reps = Vec::new();
    for members in classes.values() {
        let &rep = members
            .iter()
            .min()
            .ok_or_else(|| Error::invariant("colimit class misses the least pregrid object"))?;
        for &u in members {
            if !c
                .isos(c.dst(rep), c.dst(u))
                .iter()
                .any(|&a| c.compose(a, rep) == u)
            {
                return Err(Error::invariant(format!(
                    "colimit identifies non-isomorphic morphisms {} and {}",
                    c.mor_name(rep),
                    c.mor_name(u)
                )));
            }
        }
        reps.push(rep);
    }
    let (grid, _) = under_skeleton(c, &reps, &|_| true)?;
    let report = validate_grid(&grid, site);
    if let Some(f) = report.failures().next() {
        return Err(Error::invariant(format!(
            "constructed grid fails {} at {:?}",
            f.condition, f.witness
        )));
    }
    Ok(grid)
}

/// The functor `θ_{z,z',h}` from the up-set of `z'` to the up-set of `z`,
/// with the comparison isomorphisms `ξ: ι(θ(y')) ≅ ι(y')`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transport {
    pub map: BTreeMap<Obj, Obj>,
    pub xi: BTreeMap<Obj, Mor>,
}

/// `θ_{z,z',h}` for `h: ι(z) → ι(z')`: sends `y' ≥ z'` to the unique `y ≥ z`
/// admitting `ξ: ι(y) ≅ ι(y')` with `ξ ∘ ι(z → y) = ι(z' → y') ∘ h`.
pub fn transport_under(g: &Grid, c: &FiniteCategory, z: Obj, z2: Obj, h: Mor) -> Result<Transport> {
    if c.src(h) != g.image(z) || c.dst(h) != g.image(z2) {
        return Err(Error::input(format!(
            "{} does not run from ι({}) to ι({})",
            c.mor_name(h),
            g.name(z),
            g.name(z2)
        )));
    }
    let mut map = BTreeMap::new();
    let mut xi = BTreeMap::new();
    for y2 in g.up_set(z2) {
        let target = c.compose(g.image_arrow(z2, y2).unwrap(), h);
        let lifts = lift_under(g, c, z, target);
        let [(y, a)] = lifts[..] else {
            return Err(Error::invariant(format!(
                "{} lifts of {} under {} (expected one)",
                lifts.len(),
                c.mor_name(target),
                g.name(z)
            )));
        };
        map.insert(y2, y);
        xi.insert(y2, a);
    }
    Ok(Transport { map, xi })
}
