//! Example sites: finite G-sets with their subgroup grid, the successor
//! window, and the cyclic span category.

use std::collections::BTreeMap;

use num_integer::Integer;

use crate::cat_core::{identity_id, poset_category, CatFunctor, FiniteCategory};
use crate::coverage_topology::MorphismCollection;
use crate::error::{Error, Result};
use crate::galois_coverings::GroupTable;
use crate::grid_monoid::Grid;
use crate::site_validation::{Site, Window};

/// Default bound on the group order for [`build_gsets_site`].
pub const DEFAULT_GROUP_CAP: usize = 24;

/// Largest modulus accepted by [`build_cyclic_span_site`].
pub const MAX_SPAN_MODULUS: usize = 64;

/// Transitive G-sets `G/H`, one per conjugacy class of subgroups, with all
/// G-maps and the atomic topology, together with the grid of all subgroups
/// ordered by inclusion and `ι(H) = G/H`.
///
/// A map `G/H → G/K` is the coset `aK` with `a⁻¹Ha ⊆ K`, sending `gH` to
/// `gaK`, and is named by the least element of the coset.
pub fn build_gsets_site(group: &GroupTable, cap: usize) -> Result<(Site, Grid)> {
    if group.order() > cap {
        return Err(Error::resource(format!(
            "group order {} exceeds the cap {cap}",
            group.order()
        )));
    }
    let subgroups = group.subgroups();
    // class_rep[i] = (index of the representative, least c with H_i = c·rep·c⁻¹)
    let mut reps: Vec<usize> = Vec::new();
    let mut class_rep: Vec<(usize, usize)> = Vec::with_capacity(subgroups.len());
    for h in &subgroups {
        let found = reps.iter().find_map(|&r| {
            (0..group.order())
                .find(|&c| group.conjugate(&subgroups[r], c) == *h)
                .map(|c| (r, c))
        });
        class_rep.push(found.unwrap_or_else(|| {
            reps.push(class_rep.len());
            (class_rep.len(), group.unit)
        }));
    }
    let object = |r: usize| format!("G/H{r}");
    let coset = |a: usize, k: &[usize]| {
        k.iter()
            .map(|&x| group.mul[a][x])
            .min()
            .expect("subgroups are nonempty")
    };
    let is_map = |a: usize, h: &[usize], k: &[usize]| {
        h.iter().all(|&x| {
            k.binary_search(&group.mul[group.mul[group.inv[a]][x]][a])
                .is_ok()
        })
    };
    let mor_name = |least: usize, r: usize, s: usize| {
        if r == s && subgroups[s].contains(&least) {
            identity_id(&object(r))
        } else {
            format!("{}:{}>{}", group.elements[least], object(r), object(s))
        }
    };
    let mut by_name: BTreeMap<String, (usize, usize, usize)> = BTreeMap::new();
    let mut morphisms = Vec::new();
    for &r in &reps {
        for &s in &reps {
            for a in 0..group.order() {
                if coset(a, &subgroups[s]) == a && is_map(a, &subgroups[r], &subgroups[s]) {
                    let name = mor_name(a, r, s);
                    if !name.starts_with("id:") {
                        morphisms.push((name.clone(), object(r), object(s)));
                    }
                    by_name.insert(name, (a, r, s));
                }
            }
        }
    }
    let objects: Vec<String> = reps.iter().map(|&r| object(r)).collect();
    let category = FiniteCategory::from_rule(objects, morphisms, |g, f| {
        let (a, r, _) = by_name[f];
        let (b, _, t) = by_name[g];
        mor_name(coset(group.mul[a][b], &subgroups[t]), r, t)
    })?;
    let names: Vec<String> = (0..subgroups.len()).map(|i| format!("H{i}")).collect();
    let (poset, index) = poset_category(&names, |i, j| {
        subgroups[i]
            .iter()
            .all(|x| subgroups[j].binary_search(x).is_ok())
    })?;
    let mut position = vec![0; subgroups.len()];
    for (i, &x) in index.iter().enumerate() {
        position[x] = i;
    }
    let obj_map = poset
        .objects()
        .map(|x| category.object(&object(class_rep[position[x]].0)))
        .collect::<Result<_>>()?;
    let mor_map = poset
        .morphisms()
        .map(|arrow| {
            let (i, j) = (position[poset.src(arrow)], position[poset.dst(arrow)]);
            let ((r, ci), (s, cj)) = (class_rep[i], class_rep[j]);
            let a = group.mul[group.inv[ci]][cj];
            category.morphism(&mor_name(coset(a, &subgroups[s]), r, s))
        })
        .collect::<Result<_>>()?;
    let site = Site::atomic(category)?;
    let grid = Grid::new(poset, CatFunctor { obj_map, mor_map }, &site.category)?;
    Ok((site, grid))
}

/// Objects `[0] … [n]` with one morphism `[m] → [k]` for every offset
/// `c ∈ [0, m − k]`; offsets add under composition. The basis is every
/// morphism, or only the offset-zero morphisms when `plus` is set.
pub fn build_successor_site(n: usize, plus: bool) -> Result<Site> {
    if n == 0 {
        return Err(Error::input("the successor window needs n ≥ 1"));
    }
    let object = |k: usize| format!("[{k}]");
    let name = |c: usize, m: usize, k: usize| {
        if c == 0 && m == k {
            identity_id(&object(m))
        } else {
            format!("s{c}:{m}>{k}")
        }
    };
    let mut morphisms = Vec::new();
    let mut ends: BTreeMap<String, (usize, usize, usize)> = BTreeMap::new();
    for m in 0..=n {
        for k in 0..=m {
            for c in 0..=m - k {
                ends.insert(name(c, m, k), (c, m, k));
                if !(c == 0 && m == k) {
                    morphisms.push((name(c, m, k), object(m), object(k)));
                }
            }
        }
    }
    let category = FiniteCategory::from_rule((0..=n).map(object).collect(), morphisms, |g, f| {
        let (c1, m, _) = ends[f];
        let (c2, _, k) = ends[g];
        name(c1 + c2, m, k)
    })?;
    let basis = if plus {
        MorphismCollection::from_predicate(&category, |f| ends[category.mor_name(f)].0 == 0)
    } else {
        MorphismCollection::all(&category)
    };
    let window = Window {
        upper: n,
        levels: (0..=n).map(|k| (object(k), k)).collect(),
    };
    Ok(Site::windowed(category, basis, window))
}

/// Euler's totient by trial division.
pub fn totient(n: usize) -> usize {
    (1..=n).filter(|&u| gcd(u, n) == 1).count()
}

fn gcd(a: usize, b: usize) -> usize {
    a.gcd(&b)
}

/// Objects `Z/n` for `n` dividing `modulus`; a morphism `Z/m → Z/n` is the
/// class of a span `Z/m ⊇ S ↠ Z/n`, encoded by `d = |S|` and the image
/// `u ∈ (Z/n)^×` of the generator `m/d` of `S`. Composition is by pullback,
/// which on codes reads `(d₁, u₁) ; (d₂, u₂) = (d₁d₂/n, u₁u₂ mod p)`. The
/// basis is the spans whose injection is bijective (`d = m`).
///
/// Common sources for the Ore condition may lie outside the divisors of
/// `modulus`, so the site is windowed by the number of prime factors.
pub fn build_cyclic_span_site(modulus: usize) -> Result<Site> {
    if modulus == 0 || modulus > MAX_SPAN_MODULUS {
        return Err(Error::input(format!(
            "modulus must lie in 1..={MAX_SPAN_MODULUS}"
        )));
    }
    let divisors: Vec<usize> = (1..=modulus)
        .filter(|&d| modulus.is_multiple_of(d))
        .collect();
    let object = |n: usize| format!("Z/{n}");
    let name = |d: usize, u: usize, m: usize, n: usize| {
        if m == n && d == m && u == 1 % m {
            identity_id(&object(m))
        } else {
            format!("({d},{u}):{m}>{n}")
        }
    };
    let mut morphisms = Vec::new();
    let mut codes: BTreeMap<String, (usize, usize, usize, usize)> = BTreeMap::new();
    for &m in &divisors {
        for &n in &divisors {
            for d in divisors
                .iter()
                .copied()
                .filter(|&d| m % d == 0 && d % n == 0)
            {
                for u in (0..n).filter(|&u| gcd(u, n) == 1) {
                    let id = name(d, u, m, n);
                    if !id.starts_with("id:") {
                        morphisms.push((id.clone(), object(m), object(n)));
                    }
                    codes.insert(id, (d, u, m, n));
                }
            }
        }
    }
    let category = FiniteCategory::from_rule(
        divisors.iter().map(|&n| object(n)).collect(),
        morphisms,
        |g, f| {
            let (d1, u1, m, n) = codes[f];
            let (d2, u2, _, p) = codes[g];
            name(d1 * d2 / n, (u1 * u2) % p, m, p)
        },
    )?;
    let basis = MorphismCollection::from_predicate(&category, |f| {
        let (d, _, m, _) = codes[category.mor_name(f)];
        d == m
    });
    let omega = |mut n: usize| {
        let mut count = 0;
        let mut p = 2;
        while n > 1 {
            while n.is_multiple_of(p) {
                n /= p;
                count += 1;
            }
            p += 1;
        }
        count
    };
    let window = Window {
        upper: omega(modulus),
        levels: divisors.iter().map(|&n| (object(n), omega(n))).collect(),
    };
    Ok(Site::windowed(category, basis, window))
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::cat_core::{hom_counts, validate_category};
    use crate::coverage_topology::saturate;
    use crate::galois_coverings::is_galois_covering;

    #[test]
    fn z2_gsets_hom_counts() {
        let (site, grid) = build_gsets_site(&GroupTable::cyclic(2), DEFAULT_GROUP_CAP).unwrap();
        let c = &site.category;
        let (p, t) = (c.object("G/H0").unwrap(), c.object("G/H1").unwrap());
        assert_eq!(
            [
                c.hom(p, p).len(),
                c.hom(p, t).len(),
                c.hom(t, p).len(),
                c.hom(t, t).len()
            ],
            [2, 1, 0, 1]
        );
        assert_eq!(grid.len(), 2);
    }

    #[test]
    fn gsets_object_and_grid_sizes() {
        let (site, grid) = build_gsets_site(&GroupTable::trivial(), DEFAULT_GROUP_CAP).unwrap();
        assert_eq!(
            (
                site.category.num_objects(),
                site.category.num_morphisms(),
                grid.len()
            ),
            (1, 1, 1)
        );
        let (site, grid) = build_gsets_site(&GroupTable::symmetric(3), DEFAULT_GROUP_CAP).unwrap();
        assert_eq!((site.category.num_objects(), grid.len()), (4, 6));
        assert!(validate_category(&site.category).pass);
        let s4 = GroupTable::symmetric(4);
        assert!(matches!(build_gsets_site(&s4, 12), Err(Error::Resource(_))));
    }

    /// `|Hom(G/H, G/K)| = |(G/K)^H|`, counted on explicit cosets.
    #[test]
    fn gsets_hom_counts_match_fixed_cosets() {
        for group in [
            GroupTable::cyclic(4),
            GroupTable::symmetric(3),
            GroupTable::product(&GroupTable::cyclic(2), &GroupTable::cyclic(2)),
        ] {
            let (site, _) = build_gsets_site(&group, DEFAULT_GROUP_CAP).unwrap();
            let c = &site.category;
            let subgroups = group.subgroups();
            let sub = |x| {
                let i: usize = c.obj_name(x)[3..].parse().unwrap();
                subgroups[i].clone()
            };
            for x in c.objects() {
                for y in c.objects() {
                    let (h, k) = (sub(x), sub(y));
                    let cosets: BTreeSet<BTreeSet<usize>> = (0..group.order())
                        .map(|a| k.iter().map(|&z| group.mul[a][z]).collect())
                        .collect();
                    let fixed = cosets
                        .iter()
                        .filter(|cs| {
                            h.iter().all(|&g| {
                                cs.iter().map(|&z| group.mul[g][z]).collect::<BTreeSet<_>>() == **cs
                            })
                        })
                        .count();
                    assert_eq!(c.hom(x, y).len(), fixed);
                }
            }
        }
    }

    #[test]
    fn successor_counts_and_galois_groups() {
        let site = build_successor_site(8, true).unwrap();
        let c = &site.category;
        for (m, k) in (0..=8usize).flat_map(|m| (0..=8usize).map(move |k| (m, k))) {
            let (x, y) = (
                c.object(&format!("[{m}]")).unwrap(),
                c.object(&format!("[{k}]")).unwrap(),
            );
            assert_eq!(c.hom(x, y).len(), (m + 1).saturating_sub(k));
        }
        for f in c.morphisms() {
            assert_eq!(is_galois_covering(c, f).map(|g| g.table.order()), Some(1));
        }
        assert_eq!(saturate(c, site.topology.basis()), *site.topology.basis());
        assert!(build_successor_site(0, false).is_err());
    }

    /// Counts spans `Z/m ⊇ S ↠ Z/n` by enumerating subsets closed under
    /// addition and additive surjections out of them.
    fn span_count(m: usize, n: usize) -> usize {
        let mut total = 0;
        for mask in 1u64..(1 << m) {
            let s: Vec<usize> = (0..m).filter(|&x| mask >> x & 1 == 1).collect();
            if !s.contains(&0)
                || s.iter()
                    .any(|&a| s.iter().any(|&b| mask >> ((a + b) % m) & 1 == 0))
            {
                continue;
            }
            let gen = s.iter().copied().filter(|&x| x != 0).min().unwrap_or(0);
            for image in 0..n {
                let map = |x: usize| x.checked_div(gen).map_or(0, |q| q * image % n);
                let additive = s
                    .iter()
                    .all(|&a| s.iter().all(|&b| map((a + b) % m) == (map(a) + map(b)) % n));
                let onto: BTreeSet<usize> = s.iter().map(|&x| map(x)).collect();
                if additive && onto.len() == n {
                    total += 1;
                }
            }
        }
        total
    }

    #[test]
    fn cyclic_span_counts_match_brute_force() {
        let site = build_cyclic_span_site(12).unwrap();
        let c = &site.category;
        for x in c.objects() {
            for y in c.objects() {
                let m: usize = c.obj_name(x)[2..].parse().unwrap();
                let n: usize = c.obj_name(y)[2..].parse().unwrap();
                let formula = totient(n)
                    * (1..=m)
                        .filter(|&d| m.is_multiple_of(d) && d.is_multiple_of(n))
                        .count();
                assert_eq!(c.hom(x, y).len(), span_count(m, n), "{m} {n}");
                assert_eq!(c.hom(x, y).len(), formula);
            }
        }
        let hom = hom_counts(c);
        assert_eq!(hom[&("Z/4".to_string(), "Z/2".to_string())], 2);
        assert_eq!(hom[&("Z/1".to_string(), "Z/3".to_string())], 0);
        assert!(build_cyclic_span_site(65).is_err());
    }

    #[test]
    fn builders_are_deterministic() {
        let a = build_cyclic_span_site(12).unwrap();
        let b = build_cyclic_span_site(12).unwrap();
        assert_eq!(
            a.category.composition_triples(),
            b.category.composition_triples()
        );
        let (s1, g1) = build_gsets_site(&GroupTable::symmetric(3), 24).unwrap();
        let (s2, g2) = build_gsets_site(&GroupTable::symmetric(3), 24).unwrap();
        assert_eq!(
            s1.category.morphism_triples(),
            s2.category.morphism_triples()
        );
        assert_eq!(g1.iota, g2.iota);
    }
}
