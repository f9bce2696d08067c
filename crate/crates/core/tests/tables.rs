use crystal_pde::crystal::{amalgamated_products, commuting_involutions_check, spacegroup_table, SpaceGroupRow};
use crystal_pde::groups::validate_appendix_b;
use crystal_pde::validate::{known_errata, parse_errata, validate_all_tables, MismatchClass};

#[test]
fn every_finding_is_a_known_erratum() {
    let report = validate_all_tables();
    let errata = known_errata();
    assert!(report.checks_run > 600);
    assert!(report.unexpected(&errata).is_empty(), "{:#?}", report.unexpected(&errata));
    assert!(report.stale(&errata).is_empty(), "{:#?}", report.stale(&errata));
    assert_eq!(report.mismatches.len(), errata.len());
}

#[test]
fn forced_errata_are_reported() {
    let report = validate_all_tables();
    assert!(report
        .mismatches
        .iter()
        .any(|m| m.class == MismatchClass::CountMismatch && m.location.ends_with("Cubic Bravais types") && m.published.ends_with("= 35")));
    let c3 = validate_appendix_b("C_3").unwrap();
    assert_eq!(c3.count(MismatchClass::LagrangeViolationInPaper), 1);
    assert!(c3.mismatches.iter().any(|m| m.published == "2 / 2 / 3"));
    assert!(c3.unexpected(&known_errata()).is_empty());
}

#[test]
fn clean_tables_stay_clean() {
    for name in ["C_1", "C_2v", "D_2h", "T", "O"] {
        let r = validate_appendix_b(name).unwrap();
        assert!(r.is_clean(), "{name}: {:?}", r.mismatches);
    }
}

#[test]
fn space_group_totals() {
    let rows = spacegroup_table();
    assert_eq!(rows.len(), 7);
    assert_eq!(rows.iter().map(SpaceGroupRow::class_total).sum::<usize>(), 230);
    let cubic = rows.iter().find(|r| r.syngony == "Cubic").unwrap();
    assert_eq!((cubic.class_total(), cubic.bravais_total()), (36, 35));
}

#[test]
fn first_amalgamated_product_has_commuting_reflections() {
    let first = &amalgamated_products()[0];
    assert_eq!(first.symbols, ["x", "y"]);
    assert!(commuting_involutions_check(&first.involutions()).unwrap());
}

#[test]
fn errata_file_format() {
    assert!(parse_errata("a | Bogus | b | c").is_err());
    assert!(parse_errata("a | b | c").is_err());
    let e = parse_errata("# note\n\nx | DuplicateRow | y | z\n").unwrap();
    assert_eq!(e.len(), 1);
    assert_eq!(e[0].class, MismatchClass::DuplicateRow);
}
