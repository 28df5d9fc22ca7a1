//! The fiber functor, smooth monoid sets, the inverse construction `F_T`,
//! and the exhaustive checks of the equivalence and of the topos point.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use super::grid::{lift_under, Grid};
use super::monoid::GaloisMonoid;
use crate::cat_core::{FiniteCategory, Mor, Obj};
use crate::error::{Error, Result};
use crate::report::{Level, ValidationReport};
use crate::sheaf_engine::{
    dedupe_isomorphic, enumerate_presheaves, is_sheaf, presheaf_hom, presheaf_isomorphism,
    validate_presheaf, Presheaf, PresheafMorphism, SheafMode, DEFAULT_HOM_CAP,
};
use crate::site_validation::Site;

/// Largest `bound` accepted by [`verify_equivalence`].
pub const MAX_EQUIVALENCE_BOUND: usize = 5;

/// A finite left set over a Galois monoid; `action[m][p]` is `m·p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmoothMSet {
    pub carrier: Vec<String>,
    pub action: Vec<Vec<usize>>,
    /// An edge object whose `K_X` fixes the point.
    pub stabilizer_witness: Vec<Obj>,
}

impl SmoothMSet {
    pub fn from_action(
        m: &GaloisMonoid,
        carrier: Vec<String>,
        action: Vec<Vec<usize>>,
    ) -> Result<Self> {
        check_action(m, carrier.len(), &action)?;
        let stabilizer_witness = (0..carrier.len())
            .map(|p| {
                stabilizer_witness(m, &action, p).ok_or_else(|| {
                    Error::precondition(format!("point {} is not fixed by any K_X", carrier[p]))
                })
            })
            .collect::<Result<_>>()?;
        Ok(SmoothMSet {
            carrier,
            action,
            stabilizer_witness,
        })
    }

    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.is_empty()
    }

    /// Points fixed by every element of `sub`.
    pub fn fixed_points(&self, sub: &[usize]) -> Vec<usize> {
        (0..self.len())
            .filter(|&p| sub.iter().all(|&k| self.action[k][p] == p))
            .collect()
    }
}

fn check_action(m: &GaloisMonoid, n: usize, action: &[Vec<usize>]) -> Result<()> {
    if action.len() != m.order()
        || action
            .iter()
            .any(|row| row.len() != n || row.iter().any(|&q| q >= n))
    {
        return Err(Error::input("action table has the wrong shape"));
    }
    if (0..n).any(|p| action[m.unit][p] != p) {
        return Err(Error::input("the unit does not act trivially"));
    }
    for a in 0..m.order() {
        for b in 0..m.order() {
            if (0..n).any(|p| action[m.mul[a][b]][p] != action[a][action[b][p]]) {
                return Err(Error::input(format!(
                    "action is not compatible with {} ∘ {}",
                    m.name(a),
                    m.name(b)
                )));
            }
        }
    }
    Ok(())
}

/// The edge object with the largest `K_X` fixing `p`.
fn stabilizer_witness(m: &GaloisMonoid, action: &[Vec<usize>], p: usize) -> Option<Obj> {
    m.k.iter()
        .filter(|(_, ks)| ks.iter().all(|&k| action[k][p] == p))
        .max_by_key(|(&x, ks)| (ks.len(), std::cmp::Reverse(x)))
        .map(|(&x, _)| x)
}

/// `Ok(None)` when every point is fixed by some `K_X`, otherwise the first
/// point that is not; action-law violations are input errors.
pub fn smooth_check(m: &GaloisMonoid, t: &SmoothMSet) -> Result<Option<usize>> {
    check_action(m, t.len(), &t.action)?;
    Ok((0..t.len()).find(|&p| stabilizer_witness(m, &t.action, p).is_none()))
}

/// `ω(F)` with the class of every pair `(x, s)` of a grid object and a
/// section over `ι(x)`.
#[derive(Clone, Debug)]
pub struct FiberValue {
    pub set: SmoothMSet,
    /// `class[x][s]`.
    pub class: Vec<Vec<usize>>,
    /// A representative pair of every class.
    pub reps: Vec<(Obj, usize)>,
}

/// `ω(F) = colim F(ι(x))` by union-find on pairs `(x, s)`, with
/// `(a, γ)·[x, s] = [α(x), F(γ(x)⁻¹)(s)]`.
///
/// The colimit runs over all grid objects; edge objects are cofinal, so it
/// agrees with the colimit over edge objects, and every class is checked to
/// contain a pair at an edge object.
pub fn fiber_functor(g: &Grid, site: &Site, m: &GaloisMonoid, f: &Presheaf) -> Result<FiberValue> {
    let c = &site.category;
    let mut offset = Vec::with_capacity(g.len());
    let mut pairs = Vec::new();
    for x in g.objects() {
        offset.push(pairs.len());
        pairs.extend((0..f.size(g.image(x))).map(|s| (x, s)));
    }
    let mut uf = UnionFind::new(pairs.len());
    for m_arrow in g.poset.morphisms() {
        let (y, x) = (g.poset.src(m_arrow), g.poset.dst(m_arrow));
        let arrow = g.iota.mor_map[m_arrow];
        for s in 0..f.size(g.image(x)) {
            uf.union(offset[x] + s, offset[y] + f.apply(arrow, s));
        }
    }
    let least = g
        .least()
        .ok_or_else(|| Error::precondition("grid has no least object"))?;
    let mut order: Vec<Obj> = vec![least];
    order.extend(g.objects().filter(|&x| x != least));
    let mut root_class: BTreeMap<usize, usize> = BTreeMap::new();
    let mut reps = Vec::new();
    let mut carrier = Vec::new();
    for &x in &order {
        for s in 0..f.size(g.image(x)) {
            let root = uf.find(offset[x] + s);
            if let std::collections::btree_map::Entry::Vacant(e) = root_class.entry(root) {
                e.insert(reps.len());
                reps.push((x, s));
                carrier.push(format!("{}@{}", f.sections[g.image(x)][s], g.name(x)));
            }
        }
    }
    let class: Vec<Vec<usize>> = g
        .objects()
        .map(|x| {
            (0..f.size(g.image(x)))
                .map(|s| root_class[&uf.find(offset[x] + s)])
                .collect()
        })
        .collect();
    for (p, _) in reps.iter().enumerate() {
        if !m.edges.iter().any(|&e| class[e].contains(&p)) {
            return Err(Error::invariant(format!(
                "class {} has no edge representative",
                carrier[p]
            )));
        }
    }
    let mut action = vec![vec![0; reps.len()]; m.order()];
    for (a, element) in m.elements.iter().enumerate() {
        for (p, &(x, s)) in reps.iter().enumerate() {
            let back = c
                .inverse(element.gamma[x])
                .ok_or_else(|| Error::invariant("γ component is not invertible"))?;
            action[a][p] = class[element.alpha[x]][f.apply(back, s)];
        }
    }
    let set = SmoothMSet::from_action(m, carrier, action)?;
    Ok(FiberValue { set, class, reps })
}

/// `ω(φ)` for a morphism `φ: F → F'`, given both fiber values.
pub fn omega_map(
    g: &Grid,
    source: &FiberValue,
    target: &FiberValue,
    phi: &PresheafMorphism,
) -> Vec<usize> {
    source
        .reps
        .iter()
        .map(|&(x, s)| target.class[x][phi.components[g.image(x)][s]])
        .collect()
}

/// All equivariant maps `a → b`, optionally only bijections, up to `limit`.
pub fn equivariant_maps(
    m: &GaloisMonoid,
    a: &SmoothMSet,
    b: &SmoothMSet,
    bijective: bool,
    limit: usize,
) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if bijective && a.len() != b.len() {
        return out;
    }
    let mut current = Vec::with_capacity(a.len());
    let mut used = vec![false; b.len()];
    equivariant_step(m, a, b, bijective, limit, &mut current, &mut used, &mut out);
    out
}

#[allow(clippy::too_many_arguments)]
fn equivariant_step(
    m: &GaloisMonoid,
    a: &SmoothMSet,
    b: &SmoothMSet,
    bijective: bool,
    limit: usize,
    current: &mut Vec<usize>,
    used: &mut [bool],
    out: &mut Vec<Vec<usize>>,
) {
    if out.len() >= limit {
        return;
    }
    let p = current.len();
    if p == a.len() {
        out.push(current.clone());
        return;
    }
    for q in 0..b.len() {
        if bijective && used[q] {
            continue;
        }
        current.push(q);
        let consistent = (0..m.order()).all(|e| {
            (0..=p).all(|r| {
                let image = a.action[e][r];
                image > p || current[image] == b.action[e][current[r]]
            })
        });
        if consistent {
            used[q] = true;
            equivariant_step(m, a, b, bijective, limit, current, used, out);
            used[q] = false;
        }
        current.pop();
    }
}

pub fn mset_isomorphism(m: &GaloisMonoid, a: &SmoothMSet, b: &SmoothMSet) -> Option<Vec<usize>> {
    equivariant_maps(m, a, b, true, 1).pop()
}

/// The left cosets `M/K` of a subgroup `K`, with the left multiplication action.
pub fn coset_mset(m: &GaloisMonoid, sub: &[usize]) -> Result<SmoothMSet> {
    let mut cosets: Vec<Vec<usize>> = Vec::new();
    let mut class_of = vec![usize::MAX; m.order()];
    for a in 0..m.order() {
        if class_of[a] != usize::MAX {
            continue;
        }
        let mut coset: Vec<usize> = sub.iter().map(|&k| m.mul[a][k]).collect();
        coset.sort();
        coset.dedup();
        for &b in &coset {
            class_of[b] = cosets.len();
        }
        cosets.push(coset);
    }
    if class_of.contains(&usize::MAX) {
        return Err(Error::input("subset does not contain the unit"));
    }
    let carrier = cosets
        .iter()
        .map(|cs| format!("{}K", m.name(cs[0])))
        .collect();
    let action = (0..m.order())
        .map(|a| cosets.iter().map(|cs| class_of[m.mul[a][cs[0]]]).collect())
        .collect();
    SmoothMSet::from_action(m, carrier, action)
}

pub fn disjoint_union(m: &GaloisMonoid, parts: &[&SmoothMSet]) -> Result<SmoothMSet> {
    let mut carrier = Vec::new();
    let mut action = vec![Vec::new(); m.order()];
    for (i, part) in parts.iter().enumerate() {
        let shift = carrier.len();
        carrier.extend(part.carrier.iter().map(|s| format!("{i}:{s}")));
        for (a, row) in action.iter_mut().enumerate() {
            row.extend(part.action[a].iter().map(|&q| q + shift));
        }
    }
    SmoothMSet::from_action(m, carrier, action)
}

fn dedupe_msets(m: &GaloisMonoid, sets: Vec<SmoothMSet>) -> Vec<SmoothMSet> {
    let mut reps: Vec<SmoothMSet> = Vec::new();
    for t in sets {
        if !reps.iter().any(|r| mset_isomorphism(m, r, &t).is_some()) {
            reps.push(t);
        }
    }
    reps
}

/// Smooth sets with at most `bound` points, one per isomorphism class.
///
/// When the monoid is a group, sets are disjoint unions of transitive ones
/// and the transitive ones are the coset sets `M/H`; otherwise actions are
/// enumerated through the images of a generating set.
pub fn enumerate_smooth_sets(m: &GaloisMonoid, bound: usize) -> Result<Vec<SmoothMSet>> {
    let Some(group) = m.as_group() else {
        return enumerate_smooth_sets_by_generators(m, bound);
    };
    let mut transitive = Vec::new();
    for h in group.subgroups() {
        if m.order() / h.len() > bound {
            continue;
        }
        let cosets = coset_mset(m, &h);
        if let Ok(t) = cosets {
            transitive.push(t);
        }
    }
    let transitive = dedupe_msets(m, transitive);
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    orbit_step(m, &transitive, bound, 0, &mut chosen, &mut out)?;
    Ok(out)
}

fn orbit_step(
    m: &GaloisMonoid,
    transitive: &[SmoothMSet],
    room: usize,
    start: usize,
    chosen: &mut Vec<usize>,
    out: &mut Vec<SmoothMSet>,
) -> Result<()> {
    let parts: Vec<&SmoothMSet> = chosen.iter().map(|&i| &transitive[i]).collect();
    out.push(disjoint_union(m, &parts)?);
    for i in start..transitive.len() {
        if transitive[i].len() <= room {
            chosen.push(i);
            orbit_step(m, transitive, room - transitive[i].len(), i, chosen, out)?;
            chosen.pop();
        }
    }
    Ok(())
}

/// Smooth sets with at most `bound` points by assigning a self-map to each
/// generator and closing under the multiplication table.
pub fn enumerate_smooth_sets_by_generators(
    m: &GaloisMonoid,
    bound: usize,
) -> Result<Vec<SmoothMSet>> {
    let mut generators: Vec<usize> = Vec::new();
    // word[e] = (generator, rest) with e = generator ∘ rest
    let mut word: Vec<Option<(usize, usize)>> = vec![None; m.order()];
    let mut reached: BTreeSet<usize> = BTreeSet::from([m.unit]);
    let close =
        |gens: &[usize], reached: &mut BTreeSet<usize>, word: &mut Vec<Option<(usize, usize)>>| {
            let mut frontier: Vec<usize> = reached.iter().copied().collect();
            while let Some(e) = frontier.pop() {
                for (gi, &gen) in gens.iter().enumerate() {
                    let next = m.mul[gen][e];
                    if reached.insert(next) {
                        word[next] = Some((gi, e));
                        frontier.push(next);
                    }
                }
            }
        };
    for e in 0..m.order() {
        if !reached.contains(&e) {
            generators.push(e);
            close(&generators, &mut reached, &mut word);
        }
    }
    let mut order: Vec<usize> = vec![m.unit];
    let mut placed = vec![false; m.order()];
    placed[m.unit] = true;
    while order.len() < m.order() {
        for e in 0..m.order() {
            if let Some((_, rest)) = word[e] {
                if !placed[e] && placed[rest] {
                    placed[e] = true;
                    order.push(e);
                }
            }
        }
    }
    let mut out = Vec::new();
    for n in 0..=bound {
        let maps = n.pow(n as u32);
        let total = maps
            .checked_pow(generators.len() as u32)
            .ok_or_else(|| Error::resource("too many candidate actions"))?;
        if total > 10_000_000 {
            return Err(Error::resource("too many candidate actions"));
        }
        for code in 0..total {
            let mut rest = code;
            let mut gen_maps = Vec::with_capacity(generators.len());
            for _ in &generators {
                let mut k = rest % maps;
                rest /= maps;
                let map: Vec<usize> = (0..n)
                    .map(|_| {
                        let v = k % n;
                        k /= n;
                        v
                    })
                    .collect();
                gen_maps.push(map);
            }
            let mut action = vec![Vec::new(); m.order()];
            for &e in &order {
                action[e] = match word[e] {
                    None => (0..n).collect(),
                    Some((gi, r)) => action[r].iter().map(|&p: &usize| gen_maps[gi][p]).collect(),
                };
            }
            if check_action(m, n, &action).is_err() {
                continue;
            }
            let carrier = (0..n).map(|p| format!("p{p}")).collect();
            if let Ok(t) = SmoothMSet::from_action(m, carrier, action) {
                out.push(t);
            }
        }
    }
    Ok(dedupe_msets(m, out))
}

/// Which end of the deterministic candidate order a choice is taken from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChoiceOrder {
    Least,
    Greatest,
}

fn pick<T>(mut candidates: impl DoubleEndedIterator<Item = T>, order: ChoiceOrder) -> Option<T> {
    match order {
        ChoiceOrder::Least => candidates.next(),
        ChoiceOrder::Greatest => candidates.next_back(),
    }
}

/// `F_T(X) = T^{K_{E_X}}` for chosen `(E_X, β_X: ι(E_X) ≅ X)`, with restriction
/// along `f: X → Y` given by an element `(α, γ)` satisfying `α(E_Y) = Y'`
/// and `γ(E_Y) = β'⁻¹ ∘ β_Y`.
pub fn sheaf_from_smooth_set(
    m: &GaloisMonoid,
    g: &Grid,
    site: &Site,
    t: &SmoothMSet,
) -> Result<Presheaf> {
    sheaf_from_smooth_set_with(m, g, site, t, ChoiceOrder::Least)
}

pub fn sheaf_from_smooth_set_with(
    m: &GaloisMonoid,
    g: &Grid,
    site: &Site,
    t: &SmoothMSet,
    order: ChoiceOrder,
) -> Result<Presheaf> {
    let c = &site.category;
    if let Some(p) = smooth_check(m, t)? {
        return Err(Error::precondition(format!(
            "point {} is not fixed by any K_X",
            t.carrier[p]
        )));
    }
    let mut chart: Vec<(Obj, Mor)> = Vec::with_capacity(c.num_objects());
    for x in c.objects() {
        let candidates: Vec<(Obj, Mor)> = m
            .edges
            .iter()
            .flat_map(|&e| c.isos(g.image(e), x).into_iter().map(move |b| (e, b)))
            .collect();
        chart.push(pick(candidates.into_iter(), order).ok_or_else(|| {
            Error::precondition(format!(
                "{} is not the image of an edge object",
                c.obj_name(x)
            ))
        })?);
    }
    let fixed: Vec<Vec<usize>> = chart
        .iter()
        .map(|&(e, _)| t.fixed_points(&m.k[&e]))
        .collect();
    let sections = fixed
        .iter()
        .map(|ps| ps.iter().map(|&p| t.carrier[p].clone()).collect())
        .collect();
    let mut restrict = Vec::with_capacity(c.num_morphisms());
    for f in c.morphisms() {
        let (x, y) = (c.src(f), c.dst(f));
        let (ex, bx) = chart[x];
        let (ey, by) = chart[y];
        let lifts = lift_under(g, c, ex, c.compose(f, bx));
        let [(y2, b2)] = lifts[..] else {
            return Err(Error::invariant(format!(
                "{} lifts of {} under {}",
                lifts.len(),
                c.mor_name(f),
                g.name(ex)
            )));
        };
        let beta = c.compose(c.inverse(b2).expect("lifts are isomorphisms"), by);
        let a = pick(
            m.moving(ey, y2, beta).collect::<Vec<_>>().into_iter(),
            order,
        )
        .ok_or_else(|| Error::invariant("no monoid element realizes the transport"))?;
        let map = fixed[y]
            .iter()
            .map(|&p| {
                let q = t.action[a][p];
                fixed[x]
                    .iter()
                    .position(|&r| r == q)
                    .ok_or_else(|| Error::invariant("restriction leaves the fixed points"))
            })
            .collect::<Result<Vec<usize>>>()?;
        restrict.push(map);
    }
    let p = Presheaf::new(c, sections, restrict)?;
    let report = validate_presheaf(c, &p);
    if let Some(f) = report.failures().next() {
        return Err(Error::invariant(format!(
            "F_T is not a presheaf: {} at {:?}",
            f.condition, f.witness
        )));
    }
    Ok(p)
}

/// Counts from an exhaustive run of [`verify_equivalence`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub sheaves: usize,
    pub smooth_sets: usize,
    pub morphisms: usize,
    pub report: ValidationReport,
}

/// Exhaustive check of the comparison between sheaves and smooth sets at a
/// size bound: full faithfulness of `ω`, `ω(F_T) ≅ T`, and
/// `F(ι(X)) ≅ ω(F)^{K_X}`.
pub fn verify_equivalence(
    m: &GaloisMonoid,
    g: &Grid,
    site: &Site,
    bound: usize,
) -> Result<EquivalenceReport> {
    if bound > MAX_EQUIVALENCE_BOUND {
        return Err(Error::resource(format!(
            "bound {bound} exceeds {MAX_EQUIVALENCE_BOUND}"
        )));
    }
    let c = &site.category;
    let mut report = ValidationReport::new(Level::Equivalence);
    let sheaves = dedupe_isomorphic(
        c,
        enumerate_presheaves(site, bound, true, DEFAULT_HOM_CAP)?,
        DEFAULT_HOM_CAP,
    )?;
    let fibers: Vec<FiberValue> = sheaves
        .iter()
        .map(|f| fiber_functor(g, site, m, f))
        .collect::<Result<_>>()?;
    let mut morphisms = 0;
    for (i, (fi, wi)) in sheaves.iter().zip(&fibers).enumerate() {
        for (j, (fj, wj)) in sheaves.iter().zip(&fibers).enumerate() {
            let homs = presheaf_hom(c, fi, fj, DEFAULT_HOM_CAP)?;
            morphisms += homs.len();
            let images: BTreeSet<Vec<usize>> =
                homs.iter().map(|phi| omega_map(g, wi, wj, phi)).collect();
            let equivariant = equivariant_maps(m, &wi.set, &wj.set, false, usize::MAX);
            let witness = vec![i.to_string(), j.to_string()];
            if images.len() != homs.len() {
                report.fail(
                    "faithful",
                    witness.clone(),
                    "distinct sheaf morphisms have the same image",
                );
            }
            if images.iter().any(|img| !equivariant.contains(img)) {
                report.fail(
                    "equivariant",
                    witness.clone(),
                    "image of a sheaf morphism is not equivariant",
                );
            }
            if images.len() != equivariant.len() {
                report.fail(
                    "full",
                    witness,
                    "some equivariant map is not the image of a sheaf morphism",
                );
            }
        }
        for &x in &m.edges {
            let map = &wi.class[x];
            let distinct: BTreeSet<usize> = map.iter().copied().collect();
            let invariant: BTreeSet<usize> = wi.set.fixed_points(&m.k[&x]).into_iter().collect();
            if distinct.len() != map.len() || distinct != invariant {
                report.fail(
                    "fixed-points",
                    vec![i.to_string(), g.name(x).to_string()],
                    "F(ι(X)) → ω(F)^{K_X} is not bijective",
                );
            }
        }
    }
    let smooth_sets = enumerate_smooth_sets(m, bound)?;
    for (k, t) in smooth_sets.iter().enumerate() {
        let witness = vec![format!("T{k}")];
        let f_t = sheaf_from_smooth_set(m, g, site, t)?;
        if !is_sheaf(site, &f_t, SheafMode::Equalizer)? {
            report.fail(
                "essential-surjectivity",
                witness.clone(),
                "F_T is not a sheaf",
            );
        }
        let omega = fiber_functor(g, site, m, &f_t)?;
        if mset_isomorphism(m, &omega.set, t).is_none() {
            report.fail(
                "essential-surjectivity",
                witness.clone(),
                "ω(F_T) is not isomorphic to T",
            );
        }
        let other = sheaf_from_smooth_set_with(m, g, site, t, ChoiceOrder::Greatest)?;
        if presheaf_isomorphism(c, &f_t, &other, DEFAULT_HOM_CAP)?.is_none() {
            report.fail(
                "choice-independence",
                witness,
                "F_T depends on the chosen charts",
            );
        }
    }
    report.note(format!(
        "{} sheaves, {} smooth sets, {morphisms} sheaf morphisms",
        sheaves.len(),
        smooth_sets.len()
    ));
    Ok(EquivalenceReport {
        sheaves: sheaves.len(),
        smooth_sets: smooth_sets.len(),
        morphisms,
        report,
    })
}

/// `F_*(Y)` with the adjunction and reflection checks.
#[derive(Clone, Debug)]
pub struct PointReport {
    pub pushforward: Presheaf,
    pub report: ValidationReport,
}

fn encode(map: &[usize], y: usize) -> usize {
    map.iter().rev().fold(0, |acc, &v| acc * y + v)
}

fn decode(mut code: usize, n: usize, y: usize) -> Vec<usize> {
    (0..n)
        .map(|_| {
            let v = code % y;
            code /= y;
            v
        })
        .collect()
}

/// `𝔥(f): 𝔥(x) → 𝔥(z)` for `f: x → z`.
fn representable_map(c: &FiniteCategory, f: Mor) -> PresheafMorphism {
    let (x, z) = (c.src(f), c.dst(f));
    let components = c
        .objects()
        .map(|w| {
            c.hom(w, x)
                .iter()
                .map(|&h| {
                    c.hom(w, z)
                        .iter()
                        .position(|&k| k == c.compose(f, h))
                        .unwrap()
                })
                .collect()
        })
        .collect();
    PresheafMorphism { components }
}

/// The Yoneda morphism `𝔥(x) → H` of a section `s ∈ H(x)`.
fn yoneda(c: &FiniteCategory, h: &Presheaf, x: Obj, s: usize) -> PresheafMorphism {
    PresheafMorphism {
        components: c
            .objects()
            .map(|w| c.hom(w, x).iter().map(|&k| h.apply(k, s)).collect())
            .collect(),
    }
}

/// `F_*(Y)(X) = Map(ω𝔥(X), Y)` for a `y`-point set, checked to be a sheaf;
/// for every test sheaf `H` the map `Map(ωH, Y) → Hom(H, F_*(Y))` is built
/// explicitly and checked to be a bijection, and `ω` is checked to reflect
/// isomorphisms among the test sheaves.
pub fn point_adjoint(
    m: &GaloisMonoid,
    g: &Grid,
    site: &Site,
    y: usize,
    tests: &[Presheaf],
) -> Result<PointReport> {
    let c = &site.category;
    let mut report = ValidationReport::new(Level::Point);
    let representables: Vec<FiberValue> = c
        .objects()
        .map(|x| fiber_functor(g, site, m, &Presheaf::representable(c, x)))
        .collect::<Result<_>>()?;
    let sizes: Vec<usize> = representables.iter().map(|r| r.set.len()).collect();
    let count = |n: usize| {
        y.checked_pow(n as u32)
            .ok_or_else(|| Error::resource("Map(ω𝔥(X), Y) is too large"))
    };
    let mut sections = Vec::with_capacity(c.num_objects());
    for &n in &sizes {
        let total = count(n)?;
        sections.push(
            (0..total)
                .map(|code| {
                    let parts: Vec<String> =
                        decode(code, n, y).iter().map(|v| v.to_string()).collect();
                    format!("({})", parts.join(","))
                })
                .collect(),
        );
    }
    let omega_h: Vec<Vec<usize>> = c
        .morphisms()
        .map(|f| {
            omega_map(
                g,
                &representables[c.src(f)],
                &representables[c.dst(f)],
                &representable_map(c, f),
            )
        })
        .collect();
    let pushforward = Presheaf::from_fn(c, sections, |f, code| {
        let phi = decode(code, sizes[c.dst(f)], y);
        let pulled: Vec<usize> = omega_h[f].iter().map(|&q| phi[q]).collect();
        encode(&pulled, y)
    })?;
    if !is_sheaf(site, &pushforward, SheafMode::Equalizer)? {
        report.fail("sheaf", vec![], "F_*(Y) is not a sheaf");
    }
    let fibers: Vec<FiberValue> = tests
        .iter()
        .map(|h| fiber_functor(g, site, m, h))
        .collect::<Result<_>>()?;
    for (i, (h, wh)) in tests.iter().zip(&fibers).enumerate() {
        let witness = vec![format!("H{i}")];
        let maps = count(wh.set.len())?;
        let homs = presheaf_hom(c, h, &pushforward, DEFAULT_HOM_CAP)?;
        if homs.len() != maps {
            report.fail(
                "adjunction",
                witness.clone(),
                format!("|Map(ωH, Y)| = {maps} but |Hom(H, F_*Y)| = {}", homs.len()),
            );
        }
        let mut images = HashSet::new();
        for code in 0..maps {
            let phi = decode(code, wh.set.len(), y);
            let components = c
                .objects()
                .map(|x| {
                    (0..h.size(x))
                        .map(|s| {
                            let via = omega_map(g, &representables[x], wh, &yoneda(c, h, x, s));
                            let composite: Vec<usize> = via.iter().map(|&q| phi[q]).collect();
                            encode(&composite, y)
                        })
                        .collect()
                })
                .collect();
            let adjoint = PresheafMorphism { components };
            if !adjoint.is_natural(c, h, &pushforward) {
                report.fail(
                    "adjunction",
                    witness.clone(),
                    "adjoint of a map is not natural",
                );
            }
            images.insert(adjoint);
        }
        if images.len() != maps {
            report.fail("adjunction", witness, "adjunction map is not injective");
        }
    }
    for (i, (hi, wi)) in tests.iter().zip(&fibers).enumerate() {
        for (j, (hj, wj)) in tests.iter().zip(&fibers).enumerate() {
            if wi.set.len() != wj.set.len() {
                continue;
            }
            for phi in presheaf_hom(c, hi, hj, DEFAULT_HOM_CAP)? {
                let image: BTreeSet<usize> = omega_map(g, wi, wj, &phi).into_iter().collect();
                if image.len() == wj.set.len() && !phi.is_iso(hj) {
                    report.fail(
                        "reflects-isos",
                        vec![format!("H{i}"), format!("H{j}")],
                        "ω(φ) is bijective but φ is not",
                    );
                }
            }
        }
    }
    Ok(PointReport {
        pushforward,
        report,
    })
}
