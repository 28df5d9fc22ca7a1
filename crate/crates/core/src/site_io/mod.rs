//! Versioned JSON documents, DOT output, example-site builders and the
//! command-line dispatcher.

mod builders;
pub mod cli;
mod dot;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub use builders::*;
pub use dot::*;

use crate::cat_core::{poset_category, CatFunctor, FiniteCategory};
use crate::coverage_topology::MorphismCollection;
use crate::error::{Error, Result};
use crate::galois_coverings::GroupTable;
use crate::grid_monoid::Grid;
use crate::report::ValidationReport;
use crate::sheaf_engine::{Presheaf, PresheafData};
use crate::site_validation::{Site, Window};

/// Value of the `"schema"` key in every document.
pub const SCHEMA: &str = "sitoform/1";

fn schema() -> String {
    SCHEMA.to_string()
}

fn check_schema(found: &str) -> Result<()> {
    if found == SCHEMA {
        Ok(())
    } else {
        Err(Error::input(format!(
            "unsupported schema {found:?}, expected {SCHEMA:?}"
        )))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismEntry {
    pub id: String,
    pub src: String,
    pub dst: String,
}

/// A finite category; identities are implicit and `composition` lists
/// `[f, g, g∘f]` for composable non-identity pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryDoc {
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismEntry>,
    #[serde(default)]
    pub composition: Vec<[String; 3]>,
}

impl CategoryDoc {
    pub fn from_category(c: &FiniteCategory) -> Self {
        CategoryDoc {
            objects: c.object_names().to_vec(),
            morphisms: c
                .morphism_triples()
                .into_iter()
                .map(|(id, src, dst)| MorphismEntry { id, src, dst })
                .collect(),
            composition: c
                .composition_triples()
                .into_iter()
                .map(|(f, g, h)| [f, g, h])
                .collect(),
        }
    }

    pub fn to_category(&self) -> Result<FiniteCategory> {
        FiniteCategory::new(
            self.objects.clone(),
            self.morphisms
                .iter()
                .map(|m| (m.id.clone(), m.src.clone(), m.dst.clone()))
                .collect(),
            self.composition
                .iter()
                .map(|[f, g, h]| (f.clone(), g.clone(), h.clone()))
                .collect(),
        )
    }
}

/// A finite group by element names; `mul[a][b]` names `a·b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDoc {
    #[serde(default = "schema")]
    pub schema: String,
    pub elements: Vec<String>,
    pub mul: Vec<Vec<String>>,
    pub unit: String,
}

impl GroupDoc {
    pub fn from_group(g: &GroupTable) -> Self {
        GroupDoc {
            schema: schema(),
            elements: g.elements.clone(),
            mul: g
                .mul
                .iter()
                .map(|row| row.iter().map(|&x| g.elements[x].clone()).collect())
                .collect(),
            unit: g.elements[g.unit].clone(),
        }
    }

    pub fn to_group(&self) -> Result<GroupTable> {
        check_schema(&self.schema)?;
        let index: BTreeMap<&str, usize> = self
            .elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.as_str(), i))
            .collect();
        let find = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| Error::input(format!("unknown group element {name}")))
        };
        let mul = self
            .mul
            .iter()
            .map(|row| row.iter().map(|x| find(x)).collect::<Result<_>>())
            .collect::<Result<_>>()?;
        GroupTable::new(self.elements.clone(), mul, find(&self.unit)?)
    }
}

/// A grid: poset elements, the strict order relation, and the structure
/// functor on objects and on non-identity arrows `a<b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridDoc {
    pub objects: Vec<String>,
    pub order: Vec<[String; 2]>,
    pub iota_objects: BTreeMap<String, String>,
    pub iota_arrows: BTreeMap<String, String>,
}

impl GridDoc {
    pub fn from_grid(g: &Grid, c: &FiniteCategory) -> Self {
        let p = &g.poset;
        let arrows = p.morphisms().filter(|&a| !p.is_identity(a));
        GridDoc {
            objects: p.object_names().to_vec(),
            order: arrows
                .clone()
                .map(|a| {
                    [
                        p.obj_name(p.src(a)).to_string(),
                        p.obj_name(p.dst(a)).to_string(),
                    ]
                })
                .collect(),
            iota_objects: g
                .objects()
                .map(|x| (g.name(x).to_string(), c.obj_name(g.image(x)).to_string()))
                .collect(),
            iota_arrows: arrows
                .map(|a| {
                    (
                        p.mor_name(a).to_string(),
                        c.mor_name(g.iota.mor_map[a]).to_string(),
                    )
                })
                .collect(),
        }
    }

    pub fn to_grid(&self, c: &FiniteCategory) -> Result<Grid> {
        let index: BTreeMap<&str, usize> = self
            .objects
            .iter()
            .enumerate()
            .map(|(i, e)| (e.as_str(), i))
            .collect();
        let mut strict = BTreeSet::new();
        for [a, b] in &self.order {
            let ends = (index.get(a.as_str()), index.get(b.as_str()));
            let (Some(&i), Some(&j)) = ends else {
                return Err(Error::input(format!(
                    "order names an unknown grid object in {a} < {b}"
                )));
            };
            strict.insert((i, j));
        }
        let (poset, _) = poset_category(&self.objects, |i, j| i == j || strict.contains(&(i, j)))?;
        let obj_map = poset
            .objects()
            .map(|x| {
                let name = poset.obj_name(x);
                let target = self
                    .iota_objects
                    .get(name)
                    .ok_or_else(|| Error::input(format!("ι misses grid object {name}")))?;
                c.object(target)
            })
            .collect::<Result<Vec<_>>>()?;
        let mor_map = poset
            .morphisms()
            .map(|a| {
                if poset.is_identity(a) {
                    return Ok(c.identity(obj_map[poset.src(a)]));
                }
                let name = poset.mor_name(a);
                let target = self
                    .iota_arrows
                    .get(name)
                    .ok_or_else(|| Error::input(format!("ι misses grid arrow {name}")))?;
                c.morphism(target)
            })
            .collect::<Result<_>>()?;
        Grid::new(poset, CatFunctor { obj_map, mor_map }, c)
    }
}

/// A site with optional grid, presheaves and window metadata.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SiteDocument {
    #[serde(default = "schema")]
    pub schema: String,
    #[serde(default)]
    pub name: String,
    pub category: CategoryDoc,
    /// Basis of the topology; absent means the atomic topology.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<Window>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub presheaves: BTreeMap<String, PresheafData>,
}

impl SiteDocument {
    pub fn from_site(name: &str, site: &Site, grid: Option<&Grid>) -> Self {
        let c = &site.category;
        let basis = site.topology.basis();
        let atomic = basis.len() == c.num_morphisms();
        SiteDocument {
            schema: schema(),
            name: name.to_string(),
            category: CategoryDoc::from_category(c),
            basis: (!atomic).then(|| c.names(&basis.members())),
            window: site.window.clone(),
            grid: grid.map(|g| GridDoc::from_grid(g, c)),
            presheaves: BTreeMap::new(),
        }
    }

    pub fn with_presheaf(mut self, name: &str, c: &FiniteCategory, p: &Presheaf) -> Self {
        self.presheaves.insert(name.to_string(), p.to_data(c));
        self
    }

    /// The site, checking referential integrity of every section.
    pub fn to_site(&self) -> Result<Site> {
        check_schema(&self.schema)?;
        let c = self.category.to_category()?;
        let basis = match &self.basis {
            None => MorphismCollection::all(&c),
            Some(ids) => {
                let members = ids
                    .iter()
                    .map(|id| c.morphism(id))
                    .collect::<Result<Vec<_>>>()?;
                MorphismCollection::from_morphisms(&c, &members)
            }
        };
        if let Some(w) = &self.window {
            if let Some(unknown) = w.levels.keys().find(|x| c.find_object(x).is_none()) {
                return Err(Error::input(format!(
                    "window names unknown object {unknown}"
                )));
            }
        }
        match &self.window {
            Some(w) => Ok(Site::windowed(c, basis, w.clone())),
            None => Site::new(c, basis),
        }
    }

    pub fn grid(&self, site: &Site) -> Result<Option<Grid>> {
        self.grid
            .as_ref()
            .map(|g| g.to_grid(&site.category))
            .transpose()
    }

    pub fn presheaf(&self, site: &Site, name: &str) -> Result<Presheaf> {
        let data = self
            .presheaves
            .get(name)
            .ok_or_else(|| Error::input(format!("no presheaf named {name}")))?;
        Presheaf::from_data(&site.category, data)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let doc: SiteDocument = serde_json::from_str(text)
            .map_err(|e| Error::input(format!("invalid site document: {e}")))?;
        check_schema(&doc.schema)?;
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }
}

/// The result of one command.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    #[serde(default = "schema")]
    pub schema: String,
    pub command: String,
    /// SHA-256 of the input document, hex encoded.
    pub inputs_hash: String,
    pub pass: bool,
    pub exit_code: i32,
    pub reports: Vec<ValidationReport>,
    #[serde(default)]
    pub artifacts: serde_json::Value,
    /// Only present when requested, so reports stay byte-identical by default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

impl ReportDocument {
    pub fn new(
        command: &str,
        input: &[u8],
        reports: Vec<ValidationReport>,
        artifacts: serde_json::Value,
    ) -> Self {
        let exit_code = if reports.iter().any(|r| r.has_failures()) {
            1
        } else if reports.iter().any(|r| r.exit_code() == 3) {
            3
        } else {
            0
        };
        ReportDocument {
            schema: schema(),
            command: command.to_string(),
            inputs_hash: hex::encode(Sha256::digest(input)),
            pass: exit_code == 0,
            exit_code,
            reports,
            artifacts,
            timing_ms: None,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let doc: ReportDocument = serde_json::from_str(text)
            .map_err(|e| Error::input(format!("invalid report document: {e}")))?;
        check_schema(&doc.schema)?;
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat_core::fixtures::z2_site;

    #[test]
    fn site_document_round_trip() {
        let (site, grid) = build_gsets_site(&GroupTable::symmetric(3), DEFAULT_GROUP_CAP).unwrap();
        let doc = SiteDocument::from_site("s3", &site, Some(&grid)).with_presheaf(
            "terminal",
            &site.category,
            &Presheaf::terminal(&site.category),
        );
        let text = doc.to_json();
        let back = SiteDocument::parse(&text).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.to_json(), text);
        let site2 = back.to_site().unwrap();
        assert_eq!(site2.category, site.category);
        assert_eq!(back.grid(&site2).unwrap().unwrap().iota, grid.iota);
        assert_eq!(
            back.presheaf(&site2, "terminal").unwrap(),
            Presheaf::terminal(&site.category)
        );
    }

    #[test]
    fn windowed_round_trip() {
        let site = build_successor_site(4, true).unwrap();
        let doc = SiteDocument::from_site("succ", &site, None);
        assert!(doc.basis.is_some() && doc.window.is_some());
        let back = SiteDocument::parse(&doc.to_json())
            .unwrap()
            .to_site()
            .unwrap();
        assert_eq!(back.window, site.window);
        assert_eq!(back.topology.basis(), site.topology.basis());
    }

    #[test]
    fn group_and_category_round_trip() {
        let g = GroupTable::symmetric(3);
        let doc = GroupDoc::from_group(&g);
        let back: GroupDoc = serde_json::from_str(&serde_json::to_string(&doc).unwrap()).unwrap();
        assert_eq!(back.to_group().unwrap(), g);
        let c = z2_site();
        assert_eq!(CategoryDoc::from_category(&c).to_category().unwrap(), c);
    }

    #[test]
    fn rejects_bad_documents() {
        let c = z2_site();
        let mut doc = SiteDocument::from_site("z2", &Site::atomic(c).unwrap(), None);
        doc.schema = "other/2".into();
        assert!(matches!(
            SiteDocument::parse(&doc.to_json()),
            Err(Error::Input(_))
        ));
        doc.schema = SCHEMA.into();
        doc.basis = Some(vec!["nope".into()]);
        assert!(doc.to_site().is_err());
        assert!(matches!(SiteDocument::parse("{"), Err(Error::Input(_))));
    }

    #[test]
    fn report_hash_is_deterministic() {
        let a = ReportDocument::new("x", b"abc", vec![], serde_json::Value::Null);
        let b = ReportDocument::new("x", b"abc", vec![], serde_json::Value::Null);
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(
            a.inputs_hash,
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
        assert_eq!(ReportDocument::parse(&a.to_json()).unwrap(), a);
    }
}
