use std::fmt::Write;

use crystal_pde::abelian::FgAbelianGroup;
use crystal_pde::bordism::{
    crystal_group_of, oriented_bordism, paper_crystal_assignment, relative_bordism, unoriented_bordism,
    verify_extension_exactness,
};
use crystal_pde::cohomology::{group_cohomology, GModule};
use crystal_pde::crystal::{
    denominator_bound, is_symmorphic, spacegroup_table_query, wallpaper_groups, wallpaper_info, wallpaper_subgroups,
};
use crystal_pde::groups::{enumerate_subgroups, lookup_point_group, validate_appendix_b};
use crystal_pde::jets::{
    cartan_distribution, corpus_file, load_system_file, parse_section, rational_string, symbol_report_with,
    verify_polynomial_solution, IntegrabilityVerdict, PdeSystem, SamplingConfig, SymbolReport, DEFAULT_SAMPLES,
};
use crystal_pde::pdeclass::{
    classify, classify_singular, component_bordism_compare, descriptor, singular_descriptor, CrystalClassification,
    PdeDescriptor, SingularPdeDescriptor,
};
use crystal_pde::validate::{known_errata, validate_all_tables, ValidationReport};
use crystal_pde::{Error, Result};
use serde_json::{json, Value};

use crate::output::{to_json, Output, Status};
use crate::{BordismCommand, Cli, Command, CohomologyArgs, DescriptorSource, PdeCommand, SystemSource, TablesCommand};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum ModuleKind {
    Trivial,
    Sign,
    Natural,
}

pub fn run(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Bordism(c) => bordism(c),
        Command::Tables(c) => tables(c, cli.expect_known_errata),
        Command::Cohomology(a) => cohomology(a),
        Command::Symmorphic { name } => symmorphic(name),
        Command::Pde(c) => pde(c, SamplingConfig { seed: cli.seed, samples: DEFAULT_SAMPLES }),
    }
}

fn group_output(degree: usize, g: &FgAbelianGroup) -> Output {
    Output::new(g.to_string(), json!({ "degree": degree, "group": g.to_string() }))
}

fn bordism(c: &BordismCommand) -> Result<Output> {
    match c {
        BordismCommand::Unoriented { n } => Ok(group_output(*n, &unoriented_bordism(*n))),
        BordismCommand::Oriented { n } => Ok(group_output(*n, &oriented_bordism(*n)?)),
        BordismCommand::Relative { betti, p } => Ok(group_output(*p, &relative_bordism(betti, *p)?)),
        BordismCommand::CrystalGroup { group } => {
            let b: FgAbelianGroup = group.parse()?;
            let c = crystal_group_of(&b)?;
            let exactness = verify_extension_exactness(&c.group);
            let paper = paper_crystal_assignment(&b).ok();
            let name = c.group.name().unwrap_or_default().to_string();
            let mut text = format!("{b}: {name}, dimension {}\n", c.dimension);
            if let Some(a) = &paper {
                writeln!(text, "published assignment: {} (dimension {})", a.name, a.dimension).unwrap();
            }
            writeln!(text, "chain: {}", c.embedding.chain.join(" < ")).unwrap();
            writeln!(text, "direct product embeds: {}", c.embedding.direct_product_embeds).unwrap();
            if let Some(w) = &c.split {
                writeln!(text, "split sequence: {}", if w.holds() { "verified" } else { "FAILED" }).unwrap();
            }
            writeln!(text, "exactness: {} checks, {} failures", exactness.checks, exactness.failures.len()).unwrap();
            let json = json!({
                "group": b.to_string(),
                "free_rank": c.free_rank,
                "z2_rank": c.z2_rank,
                "dimension": c.dimension,
                "crystal_group": name,
                "paper_assignment": paper.as_ref().map(to_json),
                "split": c.split.as_ref().map(to_json),
                "embedding": { "chain": c.embedding.chain, "direct_product_embeds": c.embedding.direct_product_embeds },
                "exactness": to_json(&exactness),
            });
            let status = if exactness.passed() { Status::Ok } else { Status::Mismatch };
            Ok(Output::new(text, json).with_status(status))
        }
    }
}

fn validation_output(report: &ValidationReport, expect_known: bool) -> Output {
    let errata = known_errata();
    let known = |m| report.is_known(m, &errata);
    let unexpected = report.unexpected(&errata).len();
    let mut text = format!(
        "{}: {} checks, {} mismatches ({} known errata)\n",
        report.dataset,
        report.checks_run,
        report.mismatches.len(),
        report.mismatches.len() - unexpected
    );
    for m in &report.mismatches {
        let tag = if known(m) { " [known erratum]" } else { "" };
        writeln!(text, "{} at {}: published {} | computed {}{tag}", m.class, m.location, m.published, m.computed).unwrap();
    }
    let mismatches: Vec<Value> = report
        .mismatches
        .iter()
        .map(|m| {
            let mut v = to_json(m);
            v["known_erratum"] = json!(known(m));
            v
        })
        .collect();
    let json = json!({
        "dataset": report.dataset,
        "checks_run": report.checks_run,
        "mismatches": mismatches,
    });
    let passed = report.mismatches.is_empty() || (expect_known && unexpected == 0);
    Output::new(text, json).with_status(if passed { Status::Ok } else { Status::Mismatch })
}

fn tables(c: &TablesCommand, expect_known: bool) -> Result<Output> {
    match c {
        TablesCommand::Pointgroup { name, verify } => {
            let entry = lookup_point_group(name)?;
            if *verify {
                return Ok(validation_output(&validate_appendix_b(&entry.schoenflies)?, expect_known));
            }
            let g = entry.build()?;
            let subs = enumerate_subgroups(&g);
            let mut text = format!("{} ({}), order {}\n", entry.schoenflies, entry.international, g.order());
            for s in &subs {
                writeln!(text, "  {} / {} / {}", s.iso_name, s.order, s.index).unwrap();
            }
            let rows: Vec<Value> =
                subs.iter().map(|s| json!({ "name": s.iso_name, "order": s.order, "index": s.index })).collect();
            let json = json!({
                "schoenflies": entry.schoenflies,
                "international": entry.international,
                "order": g.order(),
                "subgroups": rows,
            });
            Ok(Output::new(text, json))
        }
        TablesCommand::Spacegroups { filter } => {
            let rows = spacegroup_table_query(filter)?;
            let total: usize = rows.iter().map(|r| r.class_total()).sum();
            let mut text = String::new();
            for r in &rows {
                let classes: Vec<String> = r.classes.iter().map(|(c, n)| format!("{c} {n}")).collect();
                writeln!(
                    text,
                    "{}: {} (sum {}) | Bravais {} = {}",
                    r.syngony,
                    classes.join(", "),
                    r.class_total(),
                    r.bravais.join(" "),
                    r.bravais_total()
                )
                .unwrap();
            }
            writeln!(text, "total: {total}").unwrap();
            Ok(Output::new(text, json!({ "rows": to_json(&rows), "total": total })))
        }
        TablesCommand::Wallpaper { name: None } => {
            let groups = wallpaper_groups();
            let mut text = String::new();
            let mut rows = Vec::new();
            for w in groups {
                let order = w.group.point_group().order();
                writeln!(text, "{:<4} {:<12} {:<3} point group order {order}", w.name, w.syngony, w.point_group).unwrap();
                rows.push(json!({ "name": w.name, "syngony": w.syngony, "point_group": w.point_group, "point_group_order": order }));
            }
            writeln!(text, "{} groups", groups.len()).unwrap();
            Ok(Output::new(text, json!({ "count": groups.len(), "groups": rows })))
        }
        TablesCommand::Wallpaper { name: Some(name) } => {
            let w = wallpaper_info(name)?;
            let subs = wallpaper_subgroups(&w.name)?;
            let mut text = format!("{} ({}, point group {})\n", w.name, w.syngony, w.point_group);
            for g in w.group.generators() {
                writeln!(text, "  generator {g}").unwrap();
            }
            for s in subs {
                let index = s.index.map_or("-".to_string(), |i| i.to_string());
                writeln!(text, "  subgroup {} index {index}", s.name).unwrap();
            }
            let json = json!({
                "name": w.name,
                "syngony": w.syngony,
                "point_group": w.point_group,
                "generators": w.group.generators().iter().map(|g| g.to_string()).collect::<Vec<_>>(),
                "subgroups": to_json(&subs),
            });
            Ok(Output::new(text, json))
        }
        TablesCommand::Validate => Ok(validation_output(&validate_all_tables(), expect_known)),
    }
}

fn cohomology(a: &CohomologyArgs) -> Result<Output> {
    let entry = lookup_point_group(&a.group)?;
    let g = entry.build()?;
    let base: FgAbelianGroup = a.coefficients.parse()?;
    let module = match a.module {
        ModuleKind::Trivial => GModule::trivial(&g, &base),
        ModuleKind::Sign => GModule::sign(&g, &base),
        ModuleKind::Natural => match (base.free_rank(), base.invariant_factors()) {
            (1, []) => GModule::natural(&g),
            (0, [n]) => GModule::natural_mod(&g, n.try_into().map_err(|_| Error::InvalidModule(base.to_string()))?),
            _ => {
                return Err(Error::InvalidModule(format!(
                    "natural action needs coefficients Z^1 or Z/n, got {base}"
                )))
            }
        },
    };
    let h = group_cohomology(&g, &module, a.degree)?;
    let kind = format!("{:?}", a.module).to_lowercase();
    let text = format!("H^{}({}; {} {}) = {h}", a.degree, entry.schoenflies, kind, module.base());
    let json = json!({
        "group": entry.schoenflies,
        "module": kind,
        "coefficients": module.base().to_string(),
        "degree": a.degree,
        "cohomology": h.to_string(),
    });
    Ok(Output::new(text, json))
}

fn symmorphic(name: &str) -> Result<Output> {
    let w = wallpaper_info(name)?;
    let witness = is_symmorphic(&w.group)?;
    let shift: Option<Vec<String>> = witness.shift.as_ref().map(|s| s.iter().map(rational_string).collect());
    let text = match &shift {
        Some(s) => format!("{}: symmorphic, origin shift ({})", w.name, s.join(", ")),
        None => format!("{}: not symmorphic", w.name),
    };
    let json = json!({
        "name": w.name,
        "symmorphic": witness.symmorphic,
        "shift": shift,
        "denominator_bound": denominator_bound(&w.group).to_string(),
    });
    Ok(Output::new(text, json))
}

fn load_system(src: &SystemSource) -> Result<PdeSystem> {
    let file = match (&src.path, &src.corpus) {
        (Some(p), _) => load_system_file(p)?,
        (None, Some(k)) => corpus_file(k)?,
        (None, None) => unreachable!("clap requires a source"),
    };
    if src.alternate {
        file.build_alternate()
            .unwrap_or_else(|| Err(Error::Parse(format!("{} has no alternate parameters", file.name))))
    } else {
        file.build()
    }
}

fn load_descriptor(src: &DescriptorSource) -> Result<PdeDescriptor> {
    match (&src.path, &src.builtin) {
        (Some(p), _) => PdeDescriptor::load(p),
        (None, Some(k)) => descriptor(k),
        (None, None) => unreachable!("clap requires a source"),
    }
}

fn load_singular(src: &DescriptorSource) -> Result<SingularPdeDescriptor> {
    match (&src.path, &src.builtin) {
        (Some(p), _) => SingularPdeDescriptor::load(p),
        (None, Some(k)) => singular_descriptor(k),
        (None, None) => unreachable!("clap requires a source"),
    }
}

fn list(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(", ")
}

fn symbol_text(r: &SymbolReport) -> String {
    let mut t = format!("{}: n = {}, m = {}, order {}\n", r.system, r.n_independent, r.m_dependent, r.order);
    writeln!(t, "dim J = {}, dim E = {}, lower-order part {}", r.ambient_jet_dim, r.equation_dim, r.lower_order_dim).unwrap();
    writeln!(t, "symbol filtration dim g^(i): {}", list(&r.symbol_filtration)).unwrap();
    writeln!(t, "Cartan characters: {}", list(&r.characters)).unwrap();
    writeln!(t, "filtration in generic coordinates: {}", list(&r.regular_filtration)).unwrap();
    writeln!(t, "dim g_+1 = {}, dim E_+1 = {}", r.prolonged_symbol_dim, r.prolonged_equation_dim).unwrap();
    writeln!(t, "sample ranks: {} ({})", list(&r.sample_ranks), if r.on_manifold { "on the equation" } else { "off the equation" })
        .unwrap();
    for w in &r.rank_warnings {
        writeln!(t, "warning: {w}").unwrap();
    }
    t
}

fn verdict_text(v: &IntegrabilityVerdict) -> String {
    let ledger = |l: &crystal_pde::jets::InvolutivityLedger| {
        format!("{} = {} ({})", l.prolonged_symbol_dim, l.filtration_terms.iter().map(usize::to_string).collect::<Vec<_>>().join(" + "),
            if l.involutive { "involutive" } else { "not involutive" })
    };
    let mut t = format!("Cartan test: {}\n", ledger(&v.involutivity));
    writeln!(t, "in generic coordinates: {}", ledger(&v.regular_involutivity)).unwrap();
    writeln!(
        t,
        "dimension identity: {} = {} + {} ({})",
        v.prolonged_equation_dim,
        v.equation_dim,
        v.prolonged_symbol_dim,
        if v.dimension_identity { "holds" } else { "fails" }
    )
    .unwrap();
    writeln!(t, "verdict: {}", if v.passed { "PASS" } else { "FAIL" }).unwrap();
    if let Some(c) = &v.caveat {
        writeln!(t, "{c}").unwrap();
    }
    for a in &v.assumptions {
        writeln!(t, "assumption: {a}").unwrap();
    }
    t
}

fn classification_text(c: &CrystalClassification) -> String {
    let mut t = format!("{}\n", c.name);
    writeln!(t, "  weak bordism: {}", c.weak_bordism).unwrap();
    writeln!(t, "  singular bordism: {}", c.singular_bordism).unwrap();
    writeln!(t, "  verdict: {}", c.verdict).unwrap();
    writeln!(t, "  crystal group: {} (dimension {})", c.crystal_group_name, c.crystal_dimension).unwrap();
    for cav in &c.caveats {
        writeln!(t, "  caveat: {cav}").unwrap();
    }
    t
}

fn pde(c: &PdeCommand, config: SamplingConfig) -> Result<Output> {
    match c {
        PdeCommand::Symbol { source, cartan } => {
            let s = load_system(source)?;
            let r = symbol_report_with(&s, &config)?;
            let mut text = symbol_text(&r);
            let mut json = to_json(&r);
            if *cartan {
                let d = cartan_distribution(&s, &config)?;
                writeln!(text, "Cartan distribution: {} = {} - {}", d.dimension, d.parameters, d.constraint_rank).unwrap();
                json["cartan_distribution"] = to_json(&d);
            }
            Ok(Output::new(text, json))
        }
        PdeCommand::Involutivity { source } => {
            let s = load_system(source)?;
            let v = IntegrabilityVerdict::from_report(&symbol_report_with(&s, &config)?);
            Ok(Output::from_serialize(verdict_text(&v), &v))
        }
        PdeCommand::Classify { source } => {
            let c = classify(&load_descriptor(source)?)?;
            Ok(Output::from_serialize(classification_text(&c), &c.report()))
        }
        PdeCommand::SingularClassify { source, compare, degree } => {
            let s = load_singular(source)?;
            let c = classify_singular(&s)?;
            let mut text = format!("{}: {:?}\n", c.name, c.verdict);
            for l in &c.singular_locus {
                writeln!(text, "singular locus {l}").unwrap();
            }
            for k in &c.components {
                text.push_str(&classification_text(k));
            }
            let mut json = json!({
                "name": c.name,
                "verdict": format!("{:?}", c.verdict),
                "singular_locus": c.singular_locus,
                "components": c.components.iter().map(|k| json!({ "name": k.name, "report": to_json(&k.report()) })).collect::<Vec<_>>(),
            });
            let mut status = Status::Ok;
            if let Some(pair) = compare {
                if pair.len() != 2 {
                    return Err(Error::HypothesisViolated(format!("--compare takes two component indices, got {}", pair.len())));
                }
                let p = match degree {
                    Some(p) => *p,
                    None => s.components.get(pair[0]).map_or(0, |d| d.n.saturating_sub(1)),
                };
                let cmp = component_bordism_compare(&s, pair[0], pair[1], p)?;
                writeln!(
                    text,
                    "degree {p}: {} | {} | intersection {}: {}",
                    cmp.component_i, cmp.component_j, cmp.intersection, cmp.conclusion
                )
                .unwrap();
                json["comparison"] = to_json(&cmp);
                if !cmp.isomorphic {
                    status = Status::Mismatch;
                }
            }
            Ok(Output::new(text, json).with_status(status))
        }
        PdeCommand::VerifySolution { source, sections } => {
            let s = load_system(source)?;
            let refs: Vec<&str> = sections.iter().map(String::as_str).collect();
            let sec = parse_section(&s, &refs)?;
            let names = sec.names(&s);
            let residuals = verify_polynomial_solution(&s, &sec.components)?;
            let shown: Vec<String> = residuals.iter().map(|r| r.display(&names).to_string()).collect();
            let solves = residuals.iter().all(|r| r.is_zero());
            let mut text = String::new();
            for (eq, r) in s.equations().iter().zip(&shown) {
                writeln!(text, "{} -> {r}", eq.display(&s)).unwrap();
            }
            writeln!(text, "{}", if solves { "solution" } else { "not a solution" }).unwrap();
            let json = json!({ "system": s.name, "residuals": shown, "solution": solves });
            Ok(Output::new(text, json).with_status(if solves { Status::Ok } else { Status::Mismatch }))
        }
    }
}
