//! Instance generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

use rand::seq::SliceRandom;
use rand::Rng;
use sitoform::cat_core::{identity_id, FiniteCategory, Mor};
use sitoform::coverage_topology::{is_semi_localizing, MorphismCollection};
use sitoform::galois_coverings::{GroupAction, GroupTable, TorsorSystem};

fn s(x: &str) -> String {
    x.to_string()
}

/// Objects P, T; σ: P→P with σσ = id, π: P→T with πσ = π.
pub fn z2_site() -> FiniteCategory {
    FiniteCategory::new(
        vec![s("P"), s("T")],
        vec![(s("σ"), s("P"), s("P")), (s("π"), s("P"), s("T"))],
        vec![(s("σ"), s("σ"), s("id:P")), (s("σ"), s("π"), s("π"))],
    )
    .unwrap()
}

type Arrow = (usize, usize, Vec<usize>);

/// A subcategory of finite sets: up to `max_objects` sets of size 1 to 3
/// and the closure of a few random maps, retried until it has at most
/// `max_morphisms` morphisms including identities.
pub fn random_concrete_category(
    rng: &mut impl Rng,
    max_objects: usize,
    max_morphisms: usize,
) -> FiniteCategory {
    loop {
        let n = rng.gen_range(1..=max_objects);
        let sizes: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=3)).collect();
        let mut arrows: Vec<Arrow> = (0..n).map(|x| (x, x, (0..sizes[x]).collect())).collect();
        for _ in 0..rng.gen_range(0..=4) {
            let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
            let f: Vec<usize> = (0..sizes[a]).map(|_| rng.gen_range(0..sizes[b])).collect();
            if !arrows.contains(&(a, b, f.clone())) {
                arrows.push((a, b, f));
            }
        }
        let mut k = 0;
        while k < arrows.len() && arrows.len() <= max_morphisms {
            for j in 0..=k {
                for (f, g) in [(k, j), (j, k)] {
                    let (fa, fb, ff) = arrows[f].clone();
                    let (ga, gb, gf) = arrows[g].clone();
                    if fb == ga {
                        let h = (fa, gb, ff.iter().map(|&x| gf[x]).collect());
                        if !arrows.contains(&h) {
                            arrows.push(h);
                        }
                    }
                }
            }
            k += 1;
        }
        if arrows.len() > max_morphisms {
            continue;
        }
        return concrete_category(&arrows, n);
    }
}

fn concrete_category(arrows: &[Arrow], n: usize) -> FiniteCategory {
    let objects: Vec<String> = (0..n).map(|x| format!("o{x}")).collect();
    let mut names: HashMap<&Arrow, String> = HashMap::new();
    let mut by_name: BTreeMap<String, &Arrow> = BTreeMap::new();
    let mut morphisms = Vec::new();
    for (i, arrow) in arrows.iter().enumerate() {
        let name = if i < n {
            identity_id(&objects[i])
        } else {
            format!("f{i}")
        };
        if i >= n {
            morphisms.push((
                name.clone(),
                objects[arrow.0].clone(),
                objects[arrow.1].clone(),
            ));
        }
        names.insert(arrow, name.clone());
        by_name.insert(name, arrow);
    }
    FiniteCategory::from_rule(objects, morphisms, |g, f| {
        let ((a, _, ff), (_, b, gf)) = (by_name[f], by_name[g]);
        let h: Arrow = (*a, *b, ff.iter().map(|&x| gf[x]).collect());
        names[&h].clone()
    })
    .unwrap()
}

/// Closes `seeds` plus identities under composition and Ore squares,
/// adding the closing leg of the least available square. `None` when some
/// cospan has no commuting square at all.
pub fn semi_localizing_closure(c: &FiniteCategory, seeds: &[Mor]) -> Option<MorphismCollection> {
    let mut t = MorphismCollection::from_morphisms(c, seeds);
    for x in c.objects() {
        t.insert(c.identity(x));
    }
    loop {
        let mut grew = false;
        for f in t.members() {
            for g in t.members() {
                if let Some(h) = c.try_compose(g, f) {
                    if !t.contains(h) {
                        t.insert(h);
                        grew = true;
                    }
                }
            }
        }
        if grew {
            continue;
        }
        let Err(violation) = is_semi_localizing(c, &t) else {
            return Some(t);
        };
        let (f1, f2) = (violation.witness[0], violation.witness[1]);
        let square = c
            .objects()
            .flat_map(|z| c.hom(z, c.src(f2)).iter().copied())
            .find(|&g2| {
                let target = c.compose(f2, g2);
                c.hom(c.src(g2), c.src(f1))
                    .iter()
                    .any(|&g1| c.compose(f1, g1) == target)
            });
        t.insert(square?);
    }
}

/// A random semi-localizing collection generated by closure, with at least
/// one seed morphism.
pub fn random_semi_localizing(
    rng: &mut impl Rng,
    c: &FiniteCategory,
) -> Option<MorphismCollection> {
    let all: Vec<Mor> = c.morphisms().collect();
    let count = rng.gen_range(0..=2.min(all.len()));
    let seeds: Vec<Mor> = all.choose_multiple(rng, count).copied().collect();
    semi_localizing_closure(c, &seeds)
}

/// Groups of order at most 6.
pub fn small_groups() -> Vec<GroupTable> {
    let mut out: Vec<GroupTable> = (1..=6).map(GroupTable::cyclic).collect();
    out.push(GroupTable::product(
        &GroupTable::cyclic(2),
        &GroupTable::cyclic(2),
    ));
    out.push(GroupTable::symmetric(3));
    out
}

/// A torsor system over a poset with a greatest index.
///
/// Each index carries `G/N_i` for a normal subgroup `N_i` of a common group
/// `G`, with `N = 1` at the top; `i ≤ j` when `N_j ⊊ N_i` (ties broken by
/// index). Torsor carriers are shuffled and the transition `S_j → S_i` is
/// `x N_j ↦ x o_j⁻¹ o_i N_i` for random offsets `o`.
pub fn random_torsor_system(rng: &mut impl Rng, max_indices: usize) -> TorsorSystem {
    let groups = small_groups();
    let g = groups.choose(rng).unwrap().clone();
    let normals: Vec<Vec<usize>> = g
        .subgroups()
        .into_iter()
        .filter(|h| g.is_normal(h))
        .collect();
    let n = rng.gen_range(1..=max_indices);
    let mut subs: Vec<Vec<usize>> = vec![vec![g.unit]];
    subs.extend((1..n).map(|_| normals.choose(rng).unwrap().clone()));
    let offsets: Vec<usize> = (0..n).map(|_| rng.gen_range(0..g.order())).collect();
    let subset = |a: &[usize], b: &[usize]| a.iter().all(|x| b.contains(x));
    let le: Vec<Vec<bool>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| i == j || (subset(&subs[j], &subs[i]) && (subs[j] != subs[i] || j < i)))
                .collect()
        })
        .collect();
    let mut quotients = Vec::new();
    let mut torsors = Vec::new();
    for (i, sub) in subs.iter().enumerate() {
        let (q, proj) = g.quotient(sub).unwrap();
        let mut perm: Vec<usize> = (0..q.order()).collect();
        perm.shuffle(rng);
        let carrier = (0..q.order()).map(|k| format!("t{i}.{k}")).collect();
        // the point labelled perm[c] is the coset c
        let mut act = vec![vec![0; q.order()]; q.order()];
        for a in 0..q.order() {
            for c in 0..q.order() {
                act[a][perm[c]] = perm[q.mul[a][c]];
            }
        }
        torsors.push(GroupAction::new(q.clone(), carrier, act).unwrap());
        quotients.push((q, proj, perm));
    }
    let mut group_maps = HashMap::new();
    let mut torsor_maps = HashMap::new();
    for j in 0..n {
        for i in 0..n {
            if !le[i][j] {
                continue;
            }
            let (qj, pj, permj) = &quotients[j];
            let (_, pi, permi) = &quotients[i];
            let lift: Vec<usize> = (0..qj.order())
                .map(|c| (0..g.order()).find(|&x| pj[x] == c).unwrap())
                .collect();
            group_maps.insert((j, i), lift.iter().map(|&x| pi[x]).collect::<Vec<_>>());
            let shift = g.mul[g.inv[offsets[j]]][offsets[i]];
            let mut map = vec![0; qj.order()];
            for c in 0..qj.order() {
                map[permj[c]] = permi[pi[g.mul[lift[c]][shift]]];
            }
            torsor_maps.insert((j, i), map);
        }
    }
    TorsorSystem {
        indices: (0..n).map(|i| format!("i{i}")).collect(),
        le,
        torsors,
        group_maps,
        torsor_maps,
    }
}
