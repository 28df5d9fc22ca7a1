//! Command-line dispatch. Every command reads a site document (from `--in`
//! or standard input) and writes either a site document, a report document
//! or DOT.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use super::{
    build_cyclic_span_site, build_gsets_site, build_successor_site, category_dot, galois_dot,
    grid_dot,
};
use super::{GroupDoc, ReportDocument, SiteDocument, DEFAULT_GROUP_CAP};
use crate::cat_core::validate_category;
use crate::error::{Error, Result};
use crate::galois_coverings::{
    enough_galois_coverings, galois_category_over, galois_coverings, is_galois_covering, GroupTable,
};
use crate::grid_monoid::{
    build_grid, build_pregrid, compute_h_psi, compute_monoid, monoid_topology_basis, point_adjoint,
    validate_grid, validate_pregrid, verify_equivalence, Grid,
};
use crate::report::{Level, ValidationReport};
use crate::sheaf_engine::{
    dedupe_isomorphic, enumerate_presheaves, is_sheaf, presheaf_hom, sheaf_violation, sheafify,
    SheafMode, DEFAULT_HOM_CAP,
};
use crate::site_validation::{validate_b_site, validate_y_site, Site, DEFAULT_MARGIN};

#[derive(Parser, Debug)]
#[command(name = "sitoform", version, about = "Finite-site Galois toolkit")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Input site document; standard input when absent.
    #[arg(long = "in", global = true, value_name = "FILE")]
    input: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(long = "out", global = true, value_name = "FILE")]
    output: Option<PathBuf>,
    /// Objects this close to the window boundary report UNVERIFIED instead of FAIL.
    #[arg(long, global = true, default_value_t = DEFAULT_MARGIN)]
    window_margin: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Record the elapsed time in the report.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate the category or the site conditions.
    #[command(subcommand)]
    Check(CheckCommand),
    /// Galois coverings.
    #[command(subcommand)]
    Galois(GaloisCommand),
    /// Sheaf condition, sheafification and presheaf morphisms.
    #[command(subcommand)]
    Sheaf(SheafCommand),
    /// Pregrids and grids.
    #[command(subcommand)]
    Grid(GridCommand),
    /// The Galois monoid of a grid.
    #[command(subcommand)]
    Monoid(MonoidCommand),
    /// The comparison between sheaves and smooth monoid sets.
    #[command(subcommand)]
    Equiv(EquivCommand),
    /// The point of the topos given by the fiber functor.
    #[command(subcommand)]
    Point(PointCommand),
    /// Write an example site document.
    #[command(subcommand)]
    Example(ExampleCommand),
}

#[derive(Subcommand, Debug)]
enum CheckCommand {
    Category,
    Site,
    Ysite,
}

#[derive(Subcommand, Debug)]
enum GaloisCommand {
    /// Every Galois covering with the order of its group, or `Gal/X` as DOT.
    List {
        #[arg(long)]
        base: Option<String>,
    },
    Enough,
}

#[derive(Subcommand, Debug)]
enum SheafCommand {
    /// Sheaf condition in both modes for one or every named presheaf.
    Check {
        #[arg(long)]
        presheaf: Option<String>,
    },
    Sheafify {
        #[arg(long)]
        presheaf: String,
    },
    Hom {
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
    },
}

#[derive(Args, Debug)]
struct BaseArg {
    /// Base object of the pregrid; the first object when absent.
    #[arg(long)]
    base: Option<String>,
}

#[derive(Subcommand, Debug)]
enum GridCommand {
    Pregrid(BaseArg),
    /// Build a grid from the document's pregrid, or from a fresh pregrid.
    Build(BaseArg),
    Validate {
        /// Check the pregrid conditions instead.
        #[arg(long)]
        pregrid: bool,
    },
}

#[derive(Subcommand, Debug)]
enum MonoidCommand {
    Compute(BaseArg),
    Table(BaseArg),
    Topology(BaseArg),
}

#[derive(Subcommand, Debug)]
enum EquivCommand {
    Verify {
        #[arg(long, default_value_t = 3)]
        bound: usize,
        #[command(flatten)]
        base: BaseArg,
    },
}

#[derive(Subcommand, Debug)]
enum PointCommand {
    /// Adjunction and iso reflection for a set `Y` of the given size.
    Check {
        #[arg(long, default_value_t = 2)]
        points: usize,
        /// Test sheaves have at most this many sections per object.
        #[arg(long, default_value_t = 2)]
        bound: usize,
        #[command(flatten)]
        base: BaseArg,
    },
}

#[derive(Subcommand, Debug)]
enum ExampleCommand {
    /// Finite G-sets with the subgroup grid.
    Gsets {
        #[arg(long, group = "which")]
        cyclic: Option<usize>,
        #[arg(long, group = "which")]
        symmetric: Option<usize>,
        /// Product of cyclic groups, e.g. `2,2`.
        #[arg(long, group = "which", value_delimiter = ',')]
        product: Option<Vec<usize>>,
        /// Group document.
        #[arg(long, group = "which")]
        group: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_GROUP_CAP)]
        cap: usize,
    },
    /// The successor window `[0] … [n]`.
    Succ {
        #[arg(long, default_value_t = 8)]
        n: usize,
        /// Use the offset-zero morphisms as the basis.
        #[arg(long)]
        plus: bool,
    },
    /// Cyclic groups dividing a modulus, with span classes as morphisms.
    Cycspan {
        #[arg(long, default_value_t = 12)]
        modulus: usize,
    },
}

enum Output {
    Site(Box<(SiteDocument, Option<Grid>, Site)>),
    Report(Vec<ValidationReport>, serde_json::Value),
    Dot(String),
}

/// Parses `argv`, runs the command and returns the exit code: 0 pass,
/// 1 violation, 2 input or usage error, 3 only unverified instances.
pub fn run(
    argv: Vec<OsString>,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli, stdin, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}

fn execute(cli: &Cli, stdin: &mut dyn Read, stdout: &mut dyn Write) -> Result<i32> {
    let start = Instant::now();
    let needs_input = !matches!(cli.command, Command::Example(_));
    let mut input = Vec::new();
    if needs_input {
        match &cli.input {
            Some(path) => {
                input = std::fs::read(path)
                    .map_err(|e| Error::input(format!("{}: {e}", path.display())))?
            }
            None => {
                stdin
                    .read_to_end(&mut input)
                    .map_err(|e| Error::input(format!("standard input: {e}")))?;
            }
        }
    }
    let doc = if needs_input {
        Some(SiteDocument::parse(
            std::str::from_utf8(&input).map_err(|_| Error::input("input is not UTF-8"))?,
        )?)
    } else {
        None
    };
    let output = dispatch(cli, doc)?;
    let (text, code) = match output {
        Output::Site(built) => match (cli.format, *built) {
            (Format::Json, (doc, _, _)) => (doc.to_json() + "\n", 0),
            (Format::Dot, (_, Some(g), site)) => (grid_dot(&g, &site.category), 0),
            (Format::Dot, (_, None, site)) => (category_dot(&site.category), 0),
        },
        Output::Dot(text) => (text, 0),
        Output::Report(reports, artifacts) => {
            let mut report =
                ReportDocument::new(&command_name(&cli.command), &input, reports, artifacts);
            if cli.timing {
                report.timing_ms = Some(start.elapsed().as_millis());
            }
            if cli.format == Format::Dot {
                return Err(Error::input(
                    "DOT output is only available for site documents and Gal/X",
                ));
            }
            (report.to_json() + "\n", report.exit_code)
        }
    };
    match &cli.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::input(format!("{}: {e}", path.display())))?,
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| Error::input(format!("standard output: {e}")))?,
    }
    Ok(code)
}

fn command_name(command: &Command) -> String {
    let debug = format!("{command:?}");
    let mut words = debug
        .split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty());
    let outer = words.next().unwrap_or_default().to_lowercase();
    let inner = words.next().unwrap_or_default().to_lowercase();
    format!("{outer} {inner}")
}

fn base_object(site: &Site, base: &BaseArg) -> Result<usize> {
    match &base.base {
        Some(name) => site.category.object(name),
        None => Ok(0),
    }
}

/// The document's grid, or a grid built from a pregrid at the base object.
fn grid_for(doc: &SiteDocument, site: &Site, base: &BaseArg) -> Result<Grid> {
    match doc.grid(site)? {
        Some(g) => Ok(g),
        None => build_grid(&build_pregrid(site, base_object(site, base)?)?, site),
    }
}

fn dispatch(cli: &Cli, doc: Option<SiteDocument>) -> Result<Output> {
    if let Command::Example(example) = &cli.command {
        return example_site(example);
    }
    let doc = doc.expect("commands other than example read a document");
    let site = doc.to_site()?;
    let c = &site.category;
    let margin = cli.window_margin;
    let report = |r: ValidationReport, artifacts| Ok(Output::Report(vec![r], artifacts));
    match &cli.command {
        Command::Example(_) => unreachable!(),
        Command::Check(CheckCommand::Category) => report(validate_category(c), json!({})),
        Command::Check(CheckCommand::Site) => report(validate_b_site(&site, margin), json!({})),
        Command::Check(CheckCommand::Ysite) => report(validate_y_site(&site, margin), json!({})),
        Command::Galois(GaloisCommand::List { base }) => {
            if cli.format == Format::Dot {
                let x = c.object(
                    base.as_deref()
                        .ok_or_else(|| Error::input("DOT output of Gal/X needs --base"))?,
                )?;
                return Ok(Output::Dot(galois_dot(&galois_category_over(&site, x)?, c)));
            }
            let coverings: Vec<_> = galois_coverings(c)
                .members()
                .into_iter()
                .filter(|&f| base.as_ref().is_none_or(|b| c.obj_name(c.dst(f)) == b))
                .map(|f| {
                    let order = is_galois_covering(c, f).map_or(0, |g| g.table.order());
                    json!({ "covering": c.mor_name(f), "group_order": order })
                })
                .collect();
            report(
                ValidationReport::new(Level::Topology),
                json!({ "galois": coverings }),
            )
        }
        Command::Galois(GaloisCommand::Enough) => {
            let mut r = ValidationReport::new(Level::Y);
            if let Err(f) = enough_galois_coverings(c, site.covering()) {
                r.fail(
                    "enough-galois",
                    vec![c.mor_name(f).to_string()],
                    "no Galois covering factors through this covering",
                );
            }
            report(r, json!({}))
        }
        Command::Sheaf(cmd) => sheaf_command(cmd, &doc, &site),
        Command::Grid(GridCommand::Pregrid(base)) => {
            let pregrid = build_pregrid(&site, base_object(&site, base)?)?;
            let mut out = SiteDocument::from_site(&doc.name, &site, Some(&pregrid));
            out.presheaves = doc.presheaves.clone();
            Ok(Output::Site(Box::new((out, Some(pregrid), site))))
        }
        Command::Grid(GridCommand::Build(base)) => {
            let pregrid = match doc.grid(&site)? {
                Some(g) => g,
                None => build_pregrid(&site, base_object(&site, base)?)?,
            };
            let grid = build_grid(&pregrid, &site)?;
            let mut out = SiteDocument::from_site(&doc.name, &site, Some(&grid));
            out.presheaves = doc.presheaves.clone();
            Ok(Output::Site(Box::new((out, Some(grid), site))))
        }
        Command::Grid(GridCommand::Validate { pregrid }) => {
            let g = doc
                .grid(&site)?
                .ok_or_else(|| Error::input("the document has no grid"))?;
            if cli.format == Format::Dot {
                return Ok(Output::Dot(grid_dot(&g, c)));
            }
            report(
                if *pregrid {
                    validate_pregrid(&g, &site)
                } else {
                    validate_grid(&g, &site)
                },
                json!({}),
            )
        }
        Command::Monoid(cmd) => monoid_command(cmd, &doc, &site),
        Command::Equiv(EquivCommand::Verify { bound, base }) => {
            let grid = grid_for(&doc, &site, base)?;
            let m = compute_monoid(&grid, &site)?;
            let r = verify_equivalence(&m, &grid, &site, *bound)?;
            let artifacts = json!({ "sheaves": r.sheaves, "smooth_sets": r.smooth_sets, "morphisms": r.morphisms });
            report(r.report, artifacts)
        }
        Command::Point(PointCommand::Check {
            points,
            bound,
            base,
        }) => {
            let grid = grid_for(&doc, &site, base)?;
            let m = compute_monoid(&grid, &site)?;
            let tests = dedupe_isomorphic(
                c,
                enumerate_presheaves(&site, *bound, true, DEFAULT_HOM_CAP)?,
                DEFAULT_HOM_CAP,
            )?;
            let r = point_adjoint(&m, &grid, &site, *points, &tests)?;
            let artifacts =
                json!({ "test_sheaves": tests.len(), "pushforward": r.pushforward.to_data(c) });
            report(r.report, artifacts)
        }
    }
}

fn sheaf_command(cmd: &SheafCommand, doc: &SiteDocument, site: &Site) -> Result<Output> {
    let c = &site.category;
    match cmd {
        SheafCommand::Check { presheaf } => {
            let names: Vec<String> = match presheaf {
                Some(name) => vec![name.clone()],
                None => doc.presheaves.keys().cloned().collect(),
            };
            let mut r = ValidationReport::new(Level::Presheaf);
            for name in &names {
                let p = doc.presheaf(site, name)?;
                r.absorb(crate::sheaf_engine::validate_presheaf(c, &p));
                for (mode, label) in [
                    (SheafMode::Equalizer, "equalizer"),
                    (SheafMode::Galois, "galois"),
                ] {
                    match sheaf_violation(site, &p, mode) {
                        Ok(None) => {}
                        Ok(Some(w)) => {
                            let mut witness = vec![name.clone(), w.morphism];
                            witness.extend(w.sections);
                            r.fail(format!("sheaf-{label}"), witness, w.reason);
                        }
                        Err(e) => r.note(format!("{name}: {label} mode unavailable: {e}")),
                    }
                }
            }
            Ok(Output::Report(vec![r], json!({ "presheaves": names })))
        }
        SheafCommand::Sheafify { presheaf } => {
            let p = doc.presheaf(site, presheaf)?;
            let s = sheafify(site, &p)?;
            let mut r = ValidationReport::new(Level::Presheaf);
            if !is_sheaf(site, &s.sheaf, SheafMode::Equalizer)? {
                r.fail(
                    "sheaf-equalizer",
                    vec![presheaf.clone()],
                    "sheafification is not a sheaf",
                );
            }
            let unit = if s.unit.is_iso(&s.sheaf) {
                "isomorphism"
            } else {
                "not an isomorphism"
            };
            Ok(Output::Report(
                vec![r],
                json!({ "sheaf": s.sheaf.to_data(c), "unit": unit }),
            ))
        }
        SheafCommand::Hom { source, target } => {
            let (a, b) = (doc.presheaf(site, source)?, doc.presheaf(site, target)?);
            let homs = presheaf_hom(c, &a, &b, DEFAULT_HOM_CAP)?;
            Ok(Output::Report(
                vec![ValidationReport::new(Level::Presheaf)],
                json!({ "count": homs.len() }),
            ))
        }
    }
}

fn monoid_command(cmd: &MonoidCommand, doc: &SiteDocument, site: &Site) -> Result<Output> {
    let (MonoidCommand::Compute(base) | MonoidCommand::Table(base) | MonoidCommand::Topology(base)) =
        cmd;
    let grid = grid_for(doc, site, base)?;
    let m = compute_monoid(&grid, site)?;
    match cmd {
        MonoidCommand::Compute(_) => {
            let mut r = validate_grid(&grid, site);
            let mut k_sizes = serde_json::Map::new();
            for &x in &m.edges {
                k_sizes.insert(grid.name(x).to_string(), json!(m.k[&x].len()));
                let psi = compute_h_psi(&grid, site, &m, x)?;
                if !psi.mutually_inverse(&m) {
                    r.fail(
                        "psi-phi",
                        vec![grid.name(x).to_string()],
                        "ψ_X and φ_X are not mutually inverse",
                    );
                }
            }
            let artifacts = json!({
                "order": m.order(),
                "is_group": m.as_group().is_some(),
                "edges": m.edges.iter().map(|&x| grid.name(x)).collect::<Vec<_>>(),
                "k_sizes": k_sizes,
            });
            Ok(Output::Report(vec![r], artifacts))
        }
        MonoidCommand::Table(_) => {
            let names: Vec<String> = (0..m.order()).map(|i| m.name(i)).collect();
            let mul: Vec<Vec<&str>> = m
                .mul
                .iter()
                .map(|row| row.iter().map(|&x| names[x].as_str()).collect())
                .collect();
            let alpha: Vec<Vec<&str>> = m
                .elements
                .iter()
                .map(|e| e.alpha.iter().map(|&x| grid.name(x)).collect())
                .collect();
            let artifacts =
                json!({ "elements": names, "unit": m.name(m.unit), "mul": mul, "alpha": alpha });
            Ok(Output::Report(
                vec![ValidationReport::new(Level::Grid)],
                artifacts,
            ))
        }
        MonoidCommand::Topology(_) => {
            let t = monoid_topology_basis(&m);
            let artifacts = json!({ "discrete": t.discrete, "cosets": t.cosets.len() });
            Ok(Output::Report(vec![t.report], artifacts))
        }
    }
}

fn example_site(cmd: &ExampleCommand) -> Result<Output> {
    match cmd {
        ExampleCommand::Gsets {
            cyclic,
            symmetric,
            product,
            group,
            cap,
        } => {
            let (name, table) = if let Some(n) = cyclic {
                if *n == 0 {
                    return Err(Error::input("cyclic order must be positive"));
                }
                (format!("Z/{n}"), GroupTable::cyclic(*n))
            } else if let Some(n) = symmetric {
                if *n == 0 || *n > 4 {
                    return Err(Error::input("symmetric degree must lie in 1..=4"));
                }
                (format!("S{n}"), GroupTable::symmetric(*n))
            } else if let Some(orders) = product {
                if orders.contains(&0) {
                    return Err(Error::input("cyclic order must be positive"));
                }
                let table = orders.iter().fold(GroupTable::trivial(), |acc, &n| {
                    GroupTable::product(&acc, &GroupTable::cyclic(n))
                });
                (
                    orders
                        .iter()
                        .map(|n| format!("Z/{n}"))
                        .collect::<Vec<_>>()
                        .join("×"),
                    table,
                )
            } else if let Some(path) = group {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::input(format!("{}: {e}", path.display())))?;
                let doc: GroupDoc = serde_json::from_str(&text)
                    .map_err(|e| Error::input(format!("invalid group document: {e}")))?;
                (path.display().to_string(), doc.to_group()?)
            } else {
                ("trivial".to_string(), GroupTable::trivial())
            };
            let (site, grid) = build_gsets_site(&table, *cap)?;
            Ok(Output::Site(Box::new((
                SiteDocument::from_site(&format!("gsets {name}"), &site, Some(&grid)),
                Some(grid),
                site,
            ))))
        }
        ExampleCommand::Succ { n, plus } => {
            let site = build_successor_site(*n, *plus)?;
            let name = format!("successor [0..{n}]{}", if *plus { " plus" } else { "" });
            Ok(Output::Site(Box::new((
                SiteDocument::from_site(&name, &site, None),
                None,
                site,
            ))))
        }
        ExampleCommand::Cycspan { modulus } => {
            let site = build_cyclic_span_site(*modulus)?;
            Ok(Output::Site(Box::new((
                SiteDocument::from_site(&format!("cyclic spans {modulus}"), &site, None),
                None,
                site,
            ))))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str], stdin: &str) -> (i32, String, String) {
        let argv = std::iter::once("sitoform")
            .chain(args.iter().copied())
            .map(OsString::from)
            .collect();
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(argv, &mut stdin.as_bytes(), &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn gsets_pipeline_computes_the_monoid() {
        let (code, site, _) = call(&["example", "gsets", "--cyclic", "4"], "");
        assert_eq!(code, 0);
        let (code, out, err) = call(&["monoid", "compute"], &site);
        assert_eq!(code, 0, "{err}");
        let report = ReportDocument::parse(&out).unwrap();
        assert_eq!(report.artifacts["order"], 4);
        assert_eq!(report.command, "monoid compute");
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(call(&["frobnicate"], "").0, 2);
        assert_eq!(call(&["check", "category"], "not json").0, 2);
        assert_eq!(call(&["--help"], "").0, 0);
    }

    #[test]
    fn disconnected_site_fails_ysite() {
        let doc = r#"{"schema":"sitoform/1","category":{"objects":["a","b"],"morphisms":[]}}"#;
        let (code, out, _) = call(&["check", "ysite"], doc);
        assert_eq!(code, 1);
        let report = ReportDocument::parse(&out).unwrap();
        assert!(report.reports[0]
            .findings
            .iter()
            .any(|f| f.witness.len() == 2));
    }

    #[test]
    fn sheafify_on_a_sheaf_flags_the_unit() {
        let (_, site, _) = call(&["example", "gsets", "--cyclic", "2"], "");
        let mut doc = SiteDocument::parse(&site).unwrap();
        let s = doc.to_site().unwrap();
        doc = doc.with_presheaf(
            "one",
            &s.category,
            &crate::sheaf_engine::Presheaf::terminal(&s.category),
        );
        let (code, out, _) = call(&["sheaf", "sheafify", "--presheaf", "one"], &doc.to_json());
        assert_eq!(code, 0);
        assert_eq!(
            ReportDocument::parse(&out).unwrap().artifacts["unit"],
            "isomorphism"
        );
    }

    #[test]
    fn successor_window_reports_unverified_only() {
        let (_, site, _) = call(&["example", "succ", "--n", "6", "--plus"], "");
        let (code, out, _) = call(&["check", "site", "--window-margin", "4"], &site);
        assert_eq!(code, 3);
        assert!(!ReportDocument::parse(&out).unwrap().reports[0].has_failures());
    }

    #[test]
    fn dot_output_for_grids() {
        let (code, dot, _) = call(
            &["example", "gsets", "--symmetric", "3", "--format", "dot"],
            "",
        );
        assert_eq!(code, 0);
        assert!(dot.starts_with("digraph {"));
        let (_, site, _) = call(&["example", "gsets", "--cyclic", "2"], "");
        assert_eq!(call(&["check", "category", "--format", "dot"], &site).0, 2);
    }

    #[test]
    fn examples_are_byte_identical() {
        for args in [
            &["example", "cycspan", "--modulus", "12"][..],
            &["example", "gsets", "--product", "2,2"][..],
        ] {
            assert_eq!(call(args, "").1, call(args, "").1);
        }
    }
}
