//! Acceptance run: one PASS/FAIL line per criterion, with the failing checks
//! listed underneath. Oracles are the printed table values written out below
//! and independent re-derivations; the library's own golden comparison is
//! only used where the criterion is about the errata report itself.

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use orbicensus_core::census::golden::GoldenOrder;
use orbicensus_core::census::{
    build_census, compare_to_golden, cy_defect, enumerate_cy, lift_components, load_golden, Census, DeltaConvention,
    ErrataField, GoldenTable, SubOrbifold,
};
use orbicensus_core::euler::{e_complement, e_complement_recursive, e_orb_formula, e_orb_stratified};
use orbicensus_core::groups::{
    all_two_signature, enumerate_enriques_quotients, orb_group_order_formula, orb_group_structure, quotient_group,
    quotient_uniformizes,
};
use orbicensus_core::census::cy::nonabelian_extension_orders;
use orbicensus_core::signature::{canonicalize, parse_components};
use orbicensus_core::uniformization::{is_uniformizable_lcm, is_uniformizable_prime_power};
use orbicensus_core::{parse_signature, LocusComponent, OrbifoldSignature, RationalValue, StrataCheck};

const PROPERTY_CASES: u32 = 1000;

/// Number, name, runtime budget, body.
type Criterion = (u32, &'static str, Duration, fn(&mut Checks));

#[derive(Default)]
struct Checks {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Checks {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }

    fn note(&mut self, s: String) {
        self.notes.push(s);
    }
}

fn golden(name: &str) -> GoldenTable {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../golden").join(name);
    load_golden(&path).unwrap_or_else(|e| panic!("{e}"))
}

/// Printed rows with a finite group, parsed; unparseable rows are reported.
fn printed_finite(table: &GoldenTable, checks: &mut Checks) -> Vec<(u32, OrbifoldSignature)> {
    let mut out = Vec::new();
    for row in &table.rows {
        if matches!(row.pi1, Some(GoldenOrder::Text(_))) || row.signature.contains('∞') {
            continue;
        }
        match parse_signature(&row.signature, table.dim) {
            Ok(s) => out.push((row.row, s)),
            Err(e) => checks.check(false, || format!("{} row {}: '{}' does not parse: {e}", table.table, row.row, row.signature)),
        }
    }
    out
}

fn set_difference(found: &[OrbifoldSignature], printed: &[(u32, OrbifoldSignature)], checks: &mut Checks, label: &str) {
    let found: BTreeSet<_> = found.iter().cloned().collect();
    let printed_set: BTreeSet<_> = printed.iter().map(|(_, s)| s.clone()).collect();
    for s in found.difference(&printed_set) {
        checks.check(false, || format!("{label}: enumerated but not printed: {}", s.render_machine()));
    }
    for (r, s) in printed {
        checks.check(found.contains(s), || format!("{label}: printed row {r} {} not enumerated", s.render_machine()));
    }
}

/// Resolves every printed covering reference by lifting the printed component
/// order along the printed vector and locating the result among the printed rows.
fn printed_coverings(table: &GoldenTable) -> Vec<(u32, String, u32, Result<u32, String>)> {
    let rows: Vec<(u32, Option<OrbifoldSignature>)> =
        table.rows.iter().map(|r| (r.row, parse_signature(&r.signature, table.dim).ok())).collect();
    let mut out = Vec::new();
    for row in &table.rows {
        for cov in &row.coverings {
            let resolved = (|| {
                let comps = parse_components(&row.signature).map_err(|e| e.to_string())?;
                let inner = cov.sub.trim_start_matches('[').trim_end_matches(']');
                let divisors = inner
                    .split(',')
                    .map(|t| if t.trim() == "m" { Ok(2) } else { t.trim().parse::<u64>().map_err(|e| e.to_string()) })
                    .collect::<Result<Vec<u64>, String>>()?;
                let target = lift_components(table.dim, &comps, &SubOrbifold { divisors }).map_err(|e| e.to_string())?;
                rows.iter()
                    .find(|(_, s)| s.as_ref() == Some(&target))
                    .map(|(r, _)| *r)
                    .ok_or_else(|| format!("lift {} is not a printed row", target.render_machine()))
            })();
            out.push((row.row, cov.sub.clone(), cov.target_row, resolved));
        }
    }
    out
}

fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

fn criterion_1(c: &mut Checks) {
    const PRINTED: [[i64; 9]; 8] = [
        [1, 1, 1, 1, 1, 1, 1, 1, 1],
        [2, 1, 0, -1, -2, -3, -4, -5, -6],
        [3, 1, 0, 0, 1, 3, 6, 10, 15],
        [4, 1, 0, 0, 0, -1, -4, -10, -20],
        [5, 1, 0, 0, 0, 0, 1, 5, 15],
        [6, 1, 0, 0, 0, 0, 0, -1, -6],
        [7, 1, 0, 0, 0, 0, 0, 0, 1],
        [8, 1, 0, 0, 0, 0, 0, 0, 0],
    ];
    let mut cells = 0;
    for (n, row) in PRINTED.iter().enumerate() {
        for (r, &v) in row.iter().enumerate() {
            cells += 1;
            let got = e_complement(r as u32, n as u32);
            c.check(got == int(v), || format!("e({r},{n}) = {got}, printed {v}"));
        }
    }
    c.check(cells == 72, || format!("{cells} cells"));
    for r in 0..=64 {
        for n in 0..=16 {
            let (a, b) = (e_complement(r, n), e_complement_recursive(r, n));
            c.check(a == b, || format!("r={r} n={n}: closed {a} vs recursion {b}"));
        }
    }
}

fn criterion_2(c: &mut Checks) {
    let expected: BTreeSet<OrbifoldSignature> = ["[2,2,2,2]", "[2,3,6]", "[2,4,4]", "[3,3,3]"]
        .iter()
        .map(|s| parse_signature(s, 1).unwrap())
        .collect();
    let got: BTreeSet<_> = enumerate_cy(1, false).into_iter().collect();
    c.check(got == expected, || format!("enumerate_cy(1) = {:?}", got.iter().map(|s| s.render_machine()).collect::<Vec<_>>()));

    let census = build_census(1, false).unwrap();
    let table = golden("p1.json");
    c.check(census.rows.len() == table.rows.len(), || format!("{} census rows vs {} printed", census.rows.len(), table.rows.len()));
    for row in &table.rows {
        let sig = parse_signature(&row.signature, 1).unwrap();
        match census.find(&sig) {
            None => c.check(false, || format!("printed row {} {} missing", row.row, row.signature)),
            Some(r) => {
                c.check(r.e_universal == Some(BigInt::zero()), || format!("row {}: e = {:?}", row.row, r.e_universal));
                c.check(r.group_order.is_none(), || format!("row {}: finite group {:?}", row.row, r.group_order));
                c.check(row.e == Some(0), || format!("printed row {} e = {:?}", row.row, row.e));
            }
        }
    }
    let md = orbicensus_core::census::render::to_markdown(&census, DeltaConvention::Moduli);
    let rendered = md.lines().skip(2).filter(|l| l.contains("| 0 | ∞ |")).count();
    c.check(rendered == 6, || format!("{rendered} rendered rows show e = 0, |π₁| = ∞"));
}

fn criterion_3(c: &mut Checks) {
    const ORDERS: [u64; 13] = [72, 64, 18, 4, 18, 16, 6, 32, 32, 8, 8, 4, 2];
    let table = golden("k3.json");
    let printed = printed_finite(&table, c);
    c.check(printed.len() == 13, || format!("{} printed finite rows", printed.len()));
    set_difference(&enumerate_cy(2, false), &printed, c, "k3");

    let census = build_census(2, false).unwrap();
    for ((row, sig), &order) in printed.iter().zip(ORDERS.iter()) {
        let Some(r) = census.find(sig) else { continue };
        let computed = r.group_order.clone().unwrap_or_default();
        c.check(computed == BigUint::from(order), || format!("row {row} {sig}: |π₁| = {computed}, printed {order}"));
        match &r.e_universal {
            Some(e) => c.check(*e == int(24), || format!("row {row} {sig}: e = {e}")),
            None => c.check(false, || format!("row {row} {sig}: e not reached by any covering edge")),
        }
        let printed_delta = table.rows.iter().find(|g| g.row == *row).and_then(|g| g.delta);
        c.check(printed_delta.map(int).as_ref() == Some(&r.delta_moduli), || {
            format!("row {row} {sig}: δ = {}, printed {printed_delta:?}", r.delta_moduli)
        });
    }
    for (row, sub, target, resolved) in printed_coverings(&table) {
        c.check(resolved == Ok(target), || format!("row {row} {sub}{{{target}}} resolves to {resolved:?}"));
    }
    let report = compare_to_golden(&census, &table, DeltaConvention::Moduli).unwrap();
    c.check(report.entries.is_empty(), || {
        format!("{} errata entries: {:?}", report.entries.len(), report.keys())
    });
}

fn criterion_4(c: &mut Checks) {
    let table = golden("cy3.json");
    let printed = printed_finite(&table, c);
    c.check(printed.len() == 33, || format!("{} printed finite rows", printed.len()));
    set_difference(&enumerate_cy(3, false), &printed, c, "cy3");

    let census = build_census(3, false).unwrap();
    let sig_of: BTreeMap<u32, OrbifoldSignature> = printed.iter().cloned().collect();
    let golden_row = |r: u32| table.rows.iter().find(|g| g.row == r).unwrap();
    let census_row = |r: u32| sig_of.get(&r).and_then(|s| census.find(s));

    for (row, sig) in &printed {
        let Some(cr) = census.find(sig) else { continue };
        let computed = cr.group_order.clone().unwrap_or_default();
        let printed_order = golden_row(*row).pi1.clone();
        if *row == 24 {
            c.check(computed == BigUint::from(6u32), || format!("row 24: |π₁| = {computed}, expected 6"));
            let printed_delta = golden_row(24).delta;
            c.check(printed_delta == Some(6), || format!("row 24: printed δ {printed_delta:?}, expected the swapped 6"));
        } else {
            c.check(printed_order == Some(GoldenOrder::Finite(computed.to_string().parse().unwrap())), || {
                format!("row {row} {sig}: |π₁| = {computed}, printed {printed_order:?}")
            });
        }
    }

    // linear rows: e computed from the orbifold Euler number
    for (row, value) in [(2, -288), (3, -296), (4, -204), (5, -200), (9, -120), (10, -176), (11, -144), (25, -128)] {
        let got = census_row(row).and_then(|r| r.e_universal.clone());
        c.check(got == Some(int(value)), || format!("linear row {row}: e = {got:?}, printed {value}"));
    }
    // non-linear rows reached through covering edges
    for row in [12, 13, 16, 22, 26, 27, 28, 29, 30, 32, 34] {
        let printed_e = golden_row(row).e;
        let got = census_row(row).and_then(|r| r.e_universal.clone());
        c.check(printed_e.map(int) == got, || format!("propagated row {row}: e = {got:?}, printed {printed_e:?}"));
    }
    for (row, value) in [(6, -288), (7, -296)] {
        let got = census_row(row).and_then(|r| r.e_universal.clone());
        c.check(got == Some(int(value)), || format!("row {row}: e = {got:?}, expected {value}"));
    }

    for (row, _) in &printed {
        if [8, 19, 33, 34, 24].contains(row) {
            continue;
        }
        let printed_delta = golden_row(*row).delta;
        let got = census_row(*row).map(|r| r.delta_moduli.clone());
        c.check(printed_delta.map(int) == got, || format!("row {row}: δ = {got:?}, printed {printed_delta:?}"));
    }

    let covering_9: Vec<_> = printed_coverings(&table).into_iter().filter(|x| x.0 == 9).collect();
    c.check(covering_9.iter().any(|(_, _, printed, got)| *printed == 28 && *got == Ok(29)), || {
        format!("row 9 coverings: {covering_9:?}")
    });

    let report = compare_to_golden(&census, &table, DeltaConvention::Moduli).unwrap();
    let expected: BTreeSet<(Option<u32>, ErrataField)> = [
        (24, ErrataField::GroupOrderDeltaSwap),
        (6, ErrataField::Euler),
        (7, ErrataField::Euler),
        (8, ErrataField::Delta),
        (19, ErrataField::Delta),
        (33, ErrataField::Delta),
        (34, ErrataField::Delta),
        (9, ErrataField::Covering),
    ]
    .into_iter()
    .map(|(r, f)| (Some(r), f))
    .collect();
    let got: BTreeSet<_> = report.keys().into_iter().collect();
    let numbered = report.entries.iter().filter(|e| e.row_id.is_some()).count();
    c.check(got.iter().filter(|k| k.0.is_some()).count() == numbered, || "duplicate errata keys".into());
    for k in expected.difference(&got) {
        c.check(false, || format!("expected erratum missing: row {:?} {}", k.0, k.1));
    }
    for e in report.entries.iter().filter(|e| !expected.contains(&(e.row_id, e.field))) {
        c.check(false, || {
            format!("extra erratum: row {:?} {} printed {} computed {}", e.row_id, e.field, e.printed_value, e.computed_value)
        });
    }
    c.note(format!("{} errata entries, {} notes", report.entries.len(), report.notes.len()));
}

fn criterion_5(c: &mut Checks) {
    for (n, file) in [(4, "p4.json"), (5, "p5.json"), (6, "p6.json"), (7, "p7.json")] {
        let table = golden(file);
        let start = Instant::now();
        let found: BTreeSet<_> = enumerate_cy(n, true).into_iter().collect();
        c.note(format!("n={n}: {} linear signatures in {:.1?}", found.len(), start.elapsed()));
        for row in &table.rows {
            match parse_signature(&row.signature, n) {
                Ok(s) => c.check(found.contains(&s), || format!("ℙ{n} row {}: {} not enumerated", row.row, row.signature)),
                Err(e) => c.check(false, || format!("ℙ{n} row {}: '{}' does not parse: {e}", row.row, row.signature)),
            }
        }
    }
    for s in ["[2,7,14,14,14,14,14]", "[7,7,7,7,7,7,7]"] {
        let sig = parse_signature(s, 5).unwrap();
        c.check(enumerate_cy(5, true).contains(&sig), || format!("{s} not enumerated for n = 5"));
    }
}

fn random_signature() -> impl Strategy<Value = OrbifoldSignature> {
    (2u32..=4, prop::collection::vec((1u64..=4, 2u64..=12), 1..=7))
        .prop_map(|(n, comps)| OrbifoldSignature::new(n, comps.into_iter().map(|(d, m)| LocusComponent::new(d, m)).collect()).unwrap())
}

fn random_linear() -> impl Strategy<Value = OrbifoldSignature> {
    (1u32..=5, prop::collection::vec(2u64..=12, 1..=9))
        .prop_map(|(n, ms)| OrbifoldSignature::linear(n, &ms).unwrap())
}

fn run_property<S: Strategy>(c: &mut Checks, name: &str, strategy: S, test: impl Fn(S::Value) -> Result<(), String>)
where
    S::Value: std::fmt::Debug,
{
    let mut runner = TestRunner::new(Config { cases: PROPERTY_CASES, failure_persistence: None, ..Config::default() });
    let cases = std::cell::Cell::new(0u32);
    let outcome = runner.run(&strategy, |v| {
        cases.set(cases.get() + 1);
        test(v).map_err(TestCaseError::fail)
    });
    c.check(outcome.is_ok(), || format!("{name}: {}", outcome.unwrap_err()));
    c.check(cases.get() >= PROPERTY_CASES, || format!("{name}: only {} cases", cases.get()));
    c.note(format!("{name}: {} cases", cases.get()));
}

fn criterion_6(c: &mut Checks) {
    run_property(c, "prime-power ≡ lcm", random_signature(), |s| {
        let (a, b) = (is_uniformizable_prime_power(&s).unwrap(), is_uniformizable_lcm(&s).unwrap());
        if a == b { Ok(()) } else { Err(format!("{s}: prime-power {a}, lcm {b}")) }
    });
    run_property(c, "order formula ≡ SNF", random_signature(), |s| {
        let formula = orb_group_order_formula(&s).unwrap();
        let snf = orb_group_structure(&s).unwrap().order();
        if snf.as_ref() == Some(&formula) { Ok(()) } else { Err(format!("{s}: formula {formula}, SNF {snf:?}")) }
    });
    run_property(c, "Euler formula ≡ stratified", random_linear(), |s| {
        let (a, b) = (e_orb_formula(&s).unwrap(), e_orb_stratified(&s).unwrap());
        if a == b { Ok(()) } else { Err(format!("{s}: {a} vs {b}")) }
    });
    run_property(
        c,
        "canonical form idempotent",
        prop::collection::vec((1u64..=6, prop::option::weighted(0.9, 2u64..=12)), 1..=8),
        |comps| {
            let comps: Vec<LocusComponent> = comps
                .into_iter()
                .map(|(d, m)| m.map_or(LocusComponent::infinite(), |m| LocusComponent::new(d, m)))
                .collect();
            let once = canonicalize(comps.clone());
            let twice = canonicalize(once.clone());
            let mut reversed = comps;
            reversed.reverse();
            let sig = OrbifoldSignature::new(3, once.clone()).unwrap();
            let reparsed = parse_signature(&sig.render_machine(), 3).unwrap();
            if once != twice || canonicalize(reversed) != once || reparsed != sig {
                Err(format!("{once:?}"))
            } else {
                Ok(())
            }
        },
    );
}

fn criterion_7(c: &mut Checks) {
    for n in 1..=5u32 {
        for m in 2..=12u64 {
            let sig = OrbifoldSignature::linear(n, &vec![m; n as usize + 1]).unwrap();
            let e = e_orb_formula(&sig).unwrap();
            let scaled = e * RationalValue::from_integer(BigInt::from(m).pow(n));
            c.check(scaled == RationalValue::from_integer(n + 1), || format!("m={m} n={n}: e_orb·mⁿ = {scaled}"));
        }
    }
    for n in 2..=3 {
        let census: Census = build_census(n, false).unwrap();
        let mut edges = 0;
        for (row, edge) in census.edges() {
            let Some(t) = edge.target_row else {
                c.check(false, || format!("n={n} row {}: lift {} outside the census", row.row, edge.target));
                continue;
            };
            edges += 1;
            let (Some(src), Some(dst)) = (&row.group_order, &census.row(t).group_order) else { continue };
            let c_n = BigUint::from(edge.kummer_exponent).pow(n);
            c.check(*src == dst * &c_n, || format!("n={n} row {} → {t}: {src} ≠ {dst}·{c_n}", row.row));
        }
        c.note(format!("n={n}: {edges} edges"));
        c.check(edges > 0, || format!("n={n}: no edges"));
    }
}

fn criterion_8(c: &mut Checks) {
    for (n, count) in [(2u32, 10usize), (3, 35)] {
        let (found, specs) = enumerate_enriques_quotients(n).unwrap();
        c.check(found == count && specs.len() == count, || format!("n={n}: {found} quotients, expected {count}"));
        let sig = all_two_signature(n).unwrap();
        let full = orb_group_order_formula(&sig).unwrap();
        for spec in &specs {
            let (_, order) = quotient_group(&sig, spec).unwrap();
            c.check(&order * 2u32 == full, || format!("n={n} {spec:?}: order {order}, |π₁| = {full}"));
            let ok = quotient_uniformizes(&sig, spec, StrataCheck::Paranoid).unwrap();
            c.check(ok, || format!("n={n} {spec:?}: local groups do not inject"));
        }
    }
    let (order, aut) = nonabelian_extension_orders().unwrap();
    c.check(order == BigUint::from(1024u32), || format!("128·8 = {order}"));
    c.check(aut == BigUint::from(24576u32), || format!("1024·24 = {aut}"));
}

fn criterion_9(c: &mut Checks) {
    for n in 1..=6u32 {
        let k = n as u64 + 2;
        let sig = OrbifoldSignature::new(n, vec![LocusComponent::new(k, k)]).unwrap();
        let defect = cy_defect(&sig).unwrap();
        c.check(defect.is_zero(), || format!("n={n}: defect {defect}"));
        if n == 1 {
            // on ℙ¹ the cubic is three points, a row of the dimension-one census
            let three = parse_signature("[3,3,3]", 1).unwrap();
            let three_defect = cy_defect(&three).unwrap();
            c.check(three_defect.is_zero(), || format!("n=1: [3,3,3] defect {three_defect}"));
            c.check(enumerate_cy(1, false).contains(&three), || "n=1: [3,3,3] not in the census".into());
            continue;
        }
        c.check(is_uniformizable_prime_power(&sig).unwrap(), || format!("n={n}: not uniformizable"));
        let g = orb_group_structure(&sig).unwrap();
        c.check(g.is_cyclic() && g.order() == Some(BigUint::from(k)), || format!("n={n}: group {g:?}"));
    }
}

fn main() {
    let criteria: [Criterion; 9] = [
        (1, "complement Euler triangle", Duration::from_secs(1), criterion_1),
        (2, "dimension-one census", Duration::from_secs(1), criterion_2),
        (3, "K3 census", Duration::from_secs(5), criterion_3),
        (4, "Calabi-Yau threefold census", Duration::from_secs(30), criterion_4),
        (5, "higher-dimensional linear lists", Duration::from_secs(120), criterion_5),
        (6, "cross-implementation properties", Duration::MAX, criterion_6),
        (7, "Kummer law and covering conservation", Duration::MAX, criterion_7),
        (8, "Enriques-type quotients", Duration::MAX, criterion_8),
        (9, "cyclic multiple hyperplanes", Duration::MAX, criterion_9),
    ];
    let mut failed = Vec::new();
    for (id, name, budget, run) in criteria {
        let mut checks = Checks::default();
        let start = Instant::now();
        run(&mut checks);
        let elapsed = start.elapsed();
        if elapsed > budget {
            checks.failures.push(format!("runtime {elapsed:.2?} exceeds {budget:?}"));
        }
        let verdict = if checks.failures.is_empty() { "PASS" } else { "FAIL" };
        println!("{verdict} criterion {id}: {name} ({elapsed:.2?}, {} failed checks)", checks.failures.len());
        for f in &checks.failures {
            println!("    - {f}");
        }
        for n in &checks.notes {
            println!("    · {n}");
        }
        if !checks.failures.is_empty() {
            failed.push(id);
        }
    }
    if !failed.is_empty() {
        println!("acceptance: criteria {failed:?} failed");
        std::process::exit(1);
    }
    println!("acceptance: all criteria passed");
}
