//! Semi-localizing collections, sieves, and the A-topologies they generate.

use std::collections::HashSet;

use crate::cat_core::{ore_violations, ore_witness, FiniteCategory, Mor, Obj};
use crate::error::{Error, Result};
use crate::report::{Level, ValidationReport};

/// Default cap on the number of morphisms into one object for exhaustive sieve enumeration.
pub const DEFAULT_SIEVE_CAP: usize = 20;

/// A set of morphisms of a fixed category, stored as a membership mask.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MorphismCollection {
    mask: Vec<bool>,
}

impl MorphismCollection {
    pub fn empty(c: &FiniteCategory) -> Self {
        MorphismCollection {
            mask: vec![false; c.num_morphisms()],
        }
    }

    pub fn all(c: &FiniteCategory) -> Self {
        MorphismCollection {
            mask: vec![true; c.num_morphisms()],
        }
    }

    pub fn identities(c: &FiniteCategory) -> Self {
        Self::from_predicate(c, |f| c.is_identity(f))
    }

    pub fn from_predicate(c: &FiniteCategory, pred: impl Fn(Mor) -> bool) -> Self {
        MorphismCollection {
            mask: c.morphisms().map(pred).collect(),
        }
    }

    pub fn from_morphisms(c: &FiniteCategory, members: &[Mor]) -> Self {
        let mut out = Self::empty(c);
        for &f in members {
            out.mask[f] = true;
        }
        out
    }

    pub fn contains(&self, f: Mor) -> bool {
        self.mask[f]
    }

    pub fn insert(&mut self, f: Mor) {
        self.mask[f] = true;
    }

    pub fn members(&self) -> Vec<Mor> {
        (0..self.mask.len()).filter(|&f| self.mask[f]).collect()
    }

    pub fn len(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_subset(&self, other: &MorphismCollection) -> bool {
        self.mask.iter().zip(&other.mask).all(|(&a, &b)| !a || b)
    }

    pub fn as_predicate(&self) -> impl Fn(Mor) -> bool + '_ {
        move |f| self.mask[f]
    }
}

/// Why a collection fails to be semi-localizing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemiLocalizingViolation {
    /// 1: identities, 2: composition, 3: Ore squares.
    pub condition: u8,
    pub witness: Vec<Mor>,
}

/// Checks identities, closure under composition and Ore squares with the
/// closing morphism in `t`, returning the least violation.
pub fn is_semi_localizing(
    c: &FiniteCategory,
    t: &MorphismCollection,
) -> std::result::Result<(), SemiLocalizingViolation> {
    if let Some(x) = c.objects().find(|&x| !t.contains(c.identity(x))) {
        return Err(SemiLocalizingViolation {
            condition: 1,
            witness: vec![c.identity(x)],
        });
    }
    for f in t.members() {
        for g in t.members() {
            if let Some(h) = c.try_compose(g, f) {
                if !t.contains(h) {
                    return Err(SemiLocalizingViolation {
                        condition: 2,
                        witness: vec![f, g],
                    });
                }
            }
        }
    }
    if let Some((f1, f2)) = ore_violations(c, &t.as_predicate()).into_iter().next() {
        return Err(SemiLocalizingViolation {
            condition: 3,
            witness: vec![f1, f2],
        });
    }
    Ok(())
}

/// `{f | f∘g ∈ t for some g}`.
pub fn saturate(c: &FiniteCategory, t: &MorphismCollection) -> MorphismCollection {
    MorphismCollection::from_predicate(c, |f| {
        c.incoming(c.src(f))
            .into_iter()
            .any(|g| t.contains(c.compose(f, g)))
    })
}

/// A set of morphisms into `apex` closed under precomposition.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sieve {
    pub apex: Obj,
    members: Vec<bool>,
}

impl Sieve {
    pub fn contains(&self, f: Mor) -> bool {
        self.members[f]
    }

    pub fn members(&self) -> Vec<Mor> {
        (0..self.members.len())
            .filter(|&f| self.members[f])
            .collect()
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Checks the apex and closure under precomposition.
    pub fn is_valid(&self, c: &FiniteCategory) -> bool {
        self.members().into_iter().all(|f| {
            c.dst(f) == self.apex
                && c.incoming(c.src(f))
                    .into_iter()
                    .all(|g| self.contains(c.compose(f, g)))
        })
    }
}

/// The smallest sieve on `apex` containing `generators`.
pub fn sieve_generated(c: &FiniteCategory, apex: Obj, generators: &[Mor]) -> Result<Sieve> {
    let mut members = vec![false; c.num_morphisms()];
    for &f in generators {
        if c.dst(f) != apex {
            return Err(Error::input(format!(
                "generator {} does not end at {}",
                c.mor_name(f),
                c.obj_name(apex)
            )));
        }
        for g in c.incoming(c.src(f)) {
            members[c.compose(f, g)] = true;
        }
    }
    Ok(Sieve { apex, members })
}

pub fn maximal_sieve(c: &FiniteCategory, apex: Obj) -> Sieve {
    sieve_generated(c, apex, &[c.identity(apex)]).expect("identity ends at its object")
}

/// `{g | f∘g ∈ r}`, a sieve on the source of `f`.
pub fn pullback_sieve(c: &FiniteCategory, r: &Sieve, f: Mor) -> Result<Sieve> {
    if c.dst(f) != r.apex {
        return Err(Error::input(format!(
            "{} does not end at the apex of the sieve",
            c.mor_name(f)
        )));
    }
    let mut members = vec![false; c.num_morphisms()];
    for g in c.incoming(c.src(f)) {
        members[g] = r.contains(c.compose(f, g));
    }
    Ok(Sieve {
        apex: c.src(f),
        members,
    })
}

/// An A-topology, represented by a semi-localizing basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ATopology {
    basis: MorphismCollection,
}

impl ATopology {
    pub fn new(c: &FiniteCategory, basis: MorphismCollection) -> Result<Self> {
        if let Err(v) = is_semi_localizing(c, &basis) {
            return Err(Error::precondition(format!(
                "basis is not semi-localizing: condition ({}) fails at {:?}",
                v.condition,
                c.names(&v.witness)
            )));
        }
        Ok(ATopology { basis })
    }

    /// Skips the semi-localizing check; used for truncated windows, whose
    /// Ore squares are judged by the site validators instead.
    pub fn unchecked(basis: MorphismCollection) -> Self {
        ATopology { basis }
    }

    /// The atomic topology, whose basis is every morphism.
    pub fn atomic(c: &FiniteCategory) -> Result<Self> {
        Self::new(c, MorphismCollection::all(c))
    }

    pub fn basis(&self) -> &MorphismCollection {
        &self.basis
    }
}

/// A sieve covers when it contains a basis morphism.
pub fn in_topology(basis: &MorphismCollection, r: &Sieve) -> bool {
    r.members().into_iter().any(|f| basis.contains(f))
}

/// `{f | R_f covers}`, computed from principal sieves.
pub fn covering_collection(c: &FiniteCategory, basis: &MorphismCollection) -> MorphismCollection {
    MorphismCollection::from_predicate(c, |f| {
        let r = sieve_generated(c, c.dst(f), &[f]).expect("f ends at its target");
        in_topology(basis, &r)
    })
}

/// Checks the three Grothendieck-topology axioms for the topology generated
/// by `basis` (which need not be semi-localizing).
///
/// All sieves on an object are enumerated when at most `cap` morphisms end
/// there; otherwise only principal sieves and their pullbacks are used and
/// the report carries the note `principal-only`.
pub fn verify_topology_axioms(
    c: &FiniteCategory,
    basis: &MorphismCollection,
    cap: usize,
) -> ValidationReport {
    let mut report = ValidationReport::new(Level::Topology);
    let principal: Vec<Vec<Sieve>> = c
        .objects()
        .map(|x| {
            c.incoming(x)
                .iter()
                .map(|&f| sieve_generated(c, x, &[f]).unwrap())
                .collect()
        })
        .collect();
    let principal_only = c.objects().any(|x| principal[x].len() > cap);
    let family = |x: Obj| -> Vec<Sieve> {
        if principal[x].len() <= cap {
            return all_sieves(c, x, &principal[x]);
        }
        let empty = Sieve {
            apex: x,
            members: vec![false; c.num_morphisms()],
        };
        let mut seen: HashSet<Sieve> = HashSet::from([empty.clone()]);
        let mut out = vec![empty];
        for s in &principal[x] {
            if seen.insert(s.clone()) {
                out.push(s.clone());
            }
        }
        for y in c.objects() {
            for &f in c.hom(x, y) {
                for s in &principal[y] {
                    let p = pullback_sieve(c, s, f).unwrap();
                    if seen.insert(p.clone()) {
                        out.push(p);
                    }
                }
            }
        }
        out
    };
    if principal_only {
        report.note("principal-only");
    }
    for x in c.objects() {
        let max = maximal_sieve(c, x);
        if !in_topology(basis, &max) {
            report.fail(
                "1",
                vec![c.obj_name(x).to_string()],
                "maximal sieve does not cover",
            );
        }
        let sieves = family(x);
        let covering: Vec<&Sieve> = sieves.iter().filter(|r| in_topology(basis, r)).collect();
        for r in &covering {
            for f in c.incoming(x) {
                let p = pullback_sieve(c, r, f).unwrap();
                if !in_topology(basis, &p) {
                    let mut w = c.names(&r.members());
                    w.insert(0, c.mor_name(f).to_string());
                    report.fail("2", w, "pullback of a covering sieve does not cover");
                }
            }
        }
        for r in &covering {
            for r2 in &sieves {
                if in_topology(basis, r2) {
                    continue;
                }
                let locally = r
                    .members()
                    .into_iter()
                    .all(|f| in_topology(basis, &pullback_sieve(c, r2, f).unwrap()));
                if locally {
                    let mut w = c.names(&r.members());
                    w.push("|".to_string());
                    w.extend(c.names(&r2.members()));
                    report.fail(
                        "3",
                        w,
                        "sieve covers locally on a covering sieve but does not cover",
                    );
                }
            }
        }
    }
    report
}

/// Every sieve on `x`, as unions of principal sieves, in discovery order.
fn all_sieves(c: &FiniteCategory, x: Obj, principal: &[Sieve]) -> Vec<Sieve> {
    let empty = Sieve {
        apex: x,
        members: vec![false; c.num_morphisms()],
    };
    let mut seen: HashSet<Sieve> = HashSet::from([empty.clone()]);
    let mut out = vec![empty];
    for p in principal {
        let grown: Vec<Sieve> = out
            .iter()
            .map(|s| Sieve {
                apex: x,
                members: s
                    .members
                    .iter()
                    .zip(&p.members)
                    .map(|(&a, &b)| a || b)
                    .collect(),
            })
            .collect();
        for s in grown {
            if seen.insert(s.clone()) {
                out.push(s);
            }
        }
    }
    out
}

/// Every sieve on `x` (exhaustive; intended for small categories).
pub fn sieves_on(c: &FiniteCategory, x: Obj) -> Vec<Sieve> {
    let principal: Vec<Sieve> = c
        .incoming(x)
        .iter()
        .map(|&f| sieve_generated(c, x, &[f]).unwrap())
        .collect();
    all_sieves(c, x, &principal)
}

/// Ore square for `(f1, f2)` closed inside `t`.
pub fn ore_square(
    c: &FiniteCategory,
    t: &MorphismCollection,
    f1: Mor,
    f2: Mor,
) -> Option<(Mor, Mor)> {
    ore_witness(c, &t.as_predicate(), f1, f2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat_core::fixtures::*;

    /// Split epimorphisms by direct search for a section.
    fn split_epis(c: &FiniteCategory) -> MorphismCollection {
        MorphismCollection::from_predicate(c, |f| {
            c.hom(c.dst(f), c.src(f))
                .iter()
                .any(|&s| c.compose(f, s) == c.identity(c.dst(f)))
        })
    }

    #[test]
    fn semi_localizing_examples() {
        let z2 = z2_site();
        assert!(is_semi_localizing(&z2, &MorphismCollection::identities(&z2)).is_ok());
        assert!(is_semi_localizing(&z2, &MorphismCollection::all(&z2)).is_ok());
        let c = cospan();
        let f = c.morphism("f").unwrap();
        let g = c.morphism("g").unwrap();
        let mut t = MorphismCollection::identities(&c);
        t.insert(f);
        let v = is_semi_localizing(&c, &t).unwrap_err();
        assert_eq!(v.condition, 3);
        assert_eq!(v.witness, vec![f, g]);
    }

    #[test]
    fn saturation_examples() {
        for c in [z2_site(), cospan(), parallel_with_equalized(), terminal()] {
            let ids = MorphismCollection::identities(&c);
            assert_eq!(saturate(&c, &ids), split_epis(&c));
            let all = MorphismCollection::all(&c);
            assert_eq!(saturate(&c, &all), all);
            assert_eq!(covering_collection(&c, &ids), saturate(&c, &ids));
        }
    }

    #[test]
    fn sieve_examples() {
        let c = z2_site();
        let t = c.object("T").unwrap();
        let p = c.object("P").unwrap();
        let pi = c.morphism("π").unwrap();
        let r = sieve_generated(&c, t, &[pi]).unwrap();
        assert_eq!(r.members(), vec![pi]);
        assert!(r.is_valid(&c));
        assert_eq!(sieve_generated(&c, t, &[]).unwrap().len(), 0);
        assert_eq!(maximal_sieve(&c, t).len(), 2);
        assert!(sieve_generated(&c, p, &[pi]).is_err());

        let back = pullback_sieve(&c, &r, pi).unwrap();
        assert_eq!(back, maximal_sieve(&c, p));
        assert_eq!(pullback_sieve(&c, &r, c.identity(t)).unwrap(), r);
        let empty = sieve_generated(&c, t, &[]).unwrap();
        assert!(pullback_sieve(&c, &empty, pi).unwrap().is_empty());

        let atomic = ATopology::atomic(&c).unwrap();
        assert!(in_topology(atomic.basis(), &r));
        assert!(!in_topology(atomic.basis(), &empty));
    }

    #[test]
    fn axioms_examples() {
        let c = z2_site();
        assert!(verify_topology_axioms(&c, &MorphismCollection::all(&c), DEFAULT_SIEVE_CAP).pass);
        assert!(
            verify_topology_axioms(&c, &MorphismCollection::identities(&c), DEFAULT_SIEVE_CAP).pass
        );
        let cs = cospan();
        let report = verify_topology_axioms(&cs, &MorphismCollection::all(&cs), DEFAULT_SIEVE_CAP);
        assert!(report.findings.iter().any(|f| f.condition == "2"));
        let principal = verify_topology_axioms(&c, &MorphismCollection::all(&c), 1);
        assert!(principal.notes.contains(&"principal-only".to_string()));
        assert!(principal.findings.is_empty());
    }

    #[test]
    fn atomic_needs_semi_cofiltered() {
        assert!(ATopology::atomic(&cospan()).is_err());
    }
}
