use clusterpic::tables::classify_all;
use clusterpic_cli::golden::{check, check_against, parse_errata, ERRATA, GOLDEN};

#[test]
fn errata_are_needed_and_sufficient() {
    for roots in [5, 6] {
        let rows = classify_all(roots).unwrap();
        let c = check(&rows, roots).unwrap();
        assert!(!c.raw.is_empty(), "{roots}: fixture matches without errata");
        assert!(c.ok(), "{roots}: {c:?}");
    }
}

#[test]
fn dropping_an_erratum_is_detected() {
    let rows = classify_all(5).unwrap();
    let dropped = format!("{}:", check(&rows, 5).unwrap().errata[0].line);
    let trimmed: String = ERRATA.lines().filter(|l| !l.starts_with(&dropped)).map(|l| format!("{l}\n")).collect();
    let c = check_against(&rows, 5, GOLDEN, &trimmed).unwrap();
    assert!(!c.corrected.is_empty());
    assert!(!c.ok());
}

#[test]
fn redundant_erratum_is_detected() {
    let rows = classify_all(5).unwrap();
    let fixed: Vec<usize> = parse_errata(ERRATA).unwrap().iter().map(|e| e.line).collect();
    let five = check(&rows, 5).unwrap().errata[0].line;
    // a five-root tuple line with its spacing changed, which the comparison ignores
    let (i, line) = GOLDEN
        .lines()
        .enumerate()
        .skip(five.saturating_sub(20))
        .find(|(i, l)| l.trim_start().starts_with("tuple ") && !fixed.contains(&(i + 1)))
        .unwrap();
    let extra = format!("{ERRATA}\n{}: {}\n", i + 1, line.trim().replacen(' ', "  ", 1));
    let c = check_against(&rows, 5, GOLDEN, &extra).unwrap();
    assert!(c.corrected.is_empty(), "{c:?}");
    assert_eq!(c.unneeded, vec![i + 1]);
}
