//! Subcommand bodies. Everything is printed to stdout in a fixed order so
//! output is byte-stable; diagnostics go to stderr.

use std::path::Path;

use orbicensus_core::census::golden::resolve_golden;
use orbicensus_core::census::render::{to_csv, to_json, to_markdown};
use orbicensus_core::census::{
    build_census, check_degree_bounds, compare_to_golden, cy_defect, enumerate_cy, family_dimension, lift_components,
    load_golden, DeltaConvention, SubOrbifold,
};
use orbicensus_core::euler::{e_orb_formula, e_orb_stratified, integral_euler};
use orbicensus_core::groups::{
    all_two_signature, enumerate_enriques_quotients_with, orb_group_order_formula, orb_group_structure, quotient_group,
    quotient_uniformizes,
};
use orbicensus_core::signature::parse_components;
use orbicensus_core::uniformization::{factorization_certificate, failing_prime_power, is_uniformizable_lcm};
use orbicensus_core::{Error, OrbifoldSignature, QuotientSpec, StrataCheck};

use crate::{Failure, Format};

fn list<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn require_presentable(sig: &OrbifoldSignature) -> Result<(), Failure> {
    if sig.dim() < 2 {
        return Err(Failure::Domain(Error::DimOne));
    }
    Ok(())
}

pub fn check(sig: &OrbifoldSignature, paranoid: bool) -> Result<(), Failure> {
    require_presentable(sig)?;
    let f = sig.f_vector()?;
    println!("signature: {sig} on P^{}", sig.dim());
    println!("f-vector: ({})", list(f.values()));
    match failing_prime_power(f.values(), sig.dim()) {
        Some((p, a, count)) => {
            println!("not uniformizable");
            println!(
                "failing prime power: {p}^{a} divides {count} of the f-values, needs at least {}",
                sig.dim() + 1
            );
        }
        None => {
            println!("uniformizable");
            for t in factorization_certificate(sig)? {
                println!("  {}^{}: exponents ({})", t.prime, t.alpha, list(&t.exponents));
            }
            println!("order: {}", orb_group_order_formula(sig)?);
        }
    }
    let prime_form = failing_prime_power(f.values(), sig.dim()).is_none();
    assert_eq!(is_uniformizable_lcm(sig)?, prime_form, "uniformizability tests disagree on {sig}");
    if paranoid {
        let every = quotient_uniformizes(sig, &QuotientSpec::empty(), StrataCheck::Paranoid)?;
        println!("local groups inject on every stratum of size ≤ {}: {}", sig.dim(), if every { "yes" } else { "no" });
    }
    Ok(())
}

pub fn group(sig: &OrbifoldSignature) -> Result<(), Failure> {
    let g = orb_group_structure(sig)?;
    match g.order() {
        Some(order) => println!("order: {order}"),
        None => println!("order: infinite"),
    }
    println!("invariant factors: [{}]", list(&g.invariant_factors));
    if g.free_rank > 0 {
        println!("free rank: {}", g.free_rank);
    }
    println!("structure: {g}");
    Ok(())
}

pub fn euler(sig: &OrbifoldSignature) -> Result<(), Failure> {
    let e_orb = e_orb_formula(sig)?;
    let stratified = e_orb_stratified(sig)?;
    assert_eq!(stratified, e_orb, "Euler number routes disagree on {sig}");
    println!("e_orb: {e_orb}");
    if sig.dim() < 2 {
        println!("e_universal: not applicable (dimension 1)");
        return Ok(());
    }
    match failing_prime_power(sig.f_vector()?.values(), sig.dim()) {
        None => {
            let order = orb_group_order_formula(sig)?;
            println!("order: {order}");
            println!("e_universal: {}", integral_euler(&e_orb, &order)?);
        }
        Some((p, a, count)) => println!(
            "e_universal: not applicable (not uniformizable: {p}^{a} divides {count} of the f-values, needs {})",
            sig.dim() + 1
        ),
    }
    Ok(())
}

pub fn cy(sig: &OrbifoldSignature) -> Result<(), Failure> {
    let defect = cy_defect(sig)?;
    println!("defect: {defect}");
    println!("calabi-yau: {}", if defect.is_zero() { "yes" } else { "no" });
    if defect.is_zero() {
        match check_degree_bounds(sig)? {
            Ok(()) => println!("degree bounds: ok ({} ≤ {} ≤ {})", sig.dim() + 2, sig.total_degree(), 2 * sig.dim() + 2),
            Err(v) => println!("degree bounds: violated, {v}"),
        }
    }
    println!("delta (moduli): {}", family_dimension(sig, DeltaConvention::Moduli));
    println!("delta (linear-system): {}", family_dimension(sig, DeltaConvention::LinearSystem));
    Ok(())
}

pub fn enumerate(dim: u32, linear_only: bool) -> Result<(), Failure> {
    if dim == 0 {
        return Err(Failure::Domain(Error::ZeroDimension));
    }
    for s in enumerate_cy(dim, linear_only) {
        println!("{}", s.render_human());
    }
    Ok(())
}

pub fn census(
    dim: u32,
    linear_only: bool,
    golden: Option<&Path>,
    convention: DeltaConvention,
    format: Format,
) -> Result<(), Failure> {
    if dim == 0 {
        return Err(Failure::Domain(Error::ZeroDimension));
    }
    let mut census = build_census(dim, linear_only)?;
    let report = match golden {
        Some(path) => {
            let table = load_golden(&resolve_golden(path))?;
            let report = compare_to_golden(&census, &table, convention)?;
            census.annotate(&report, &table);
            Some(report)
        }
        None => None,
    };
    let text = match format {
        Format::Json => to_json(&census, convention, report.as_ref())? + "\n",
        Format::Csv => to_csv(&census, convention)?,
        Format::Md => to_markdown(&census, convention),
    };
    print!("{text}");

    let Some(report) = report else { return Ok(()) };
    let unexpected = report.unexpected().count();
    eprintln!(
        "{} mismatches ({} in the errata ledger, {unexpected} unexpected), {} unverifiable printed values",
        report.entries.len(),
        report.entries.len() - unexpected,
        report.notes.len()
    );
    for e in &report.entries {
        let row = e.row_id.map_or("-".into(), |r| r.to_string());
        let tag = if e.known { "known" } else { "UNEXPECTED" };
        eprintln!("  [{tag}] row {row} {}: printed {} / computed {}", e.field, e.printed_value, e.computed_value);
    }
    if unexpected > 0 {
        return Err(Failure::Unexpected(unexpected));
    }
    Ok(())
}

/// Branch positions refer to the signature as written, not its canonical order.
pub fn lift(text: &str, dim: u32, branch: &[usize], c: u64) -> Result<(), Failure> {
    let comps = parse_components(text).map_err(|e| Failure::Usage(e.to_string()))?;
    let mut positions = Vec::with_capacity(branch.len());
    for &b in branch {
        if b == 0 || b > comps.len() {
            return Err(Failure::Usage(format!("branch position {b} outside 1..={}", comps.len())));
        }
        if positions.contains(&(b - 1)) {
            return Err(Failure::Usage(format!("branch position {b} listed twice")));
        }
        positions.push(b - 1);
    }
    if c < 2 {
        return Err(Failure::Usage("--c must be at least 2".into()));
    }
    let sub = SubOrbifold::on(comps.len(), &positions, c);
    let target = lift_components(dim, &comps, &sub)?;
    println!("{}", target.render_human());
    Ok(())
}

pub fn enriques(dim: u32, paranoid: bool) -> Result<(), Failure> {
    let check = if paranoid { StrataCheck::Paranoid } else { StrataCheck::Maximal };
    let (count, specs) = enumerate_enriques_quotients_with(dim, check)?;
    let sig = all_two_signature(dim)?;
    println!("signature: {sig} on P^{dim}");
    println!("orbifold group order: {}", orb_group_order_formula(&sig)?);
    println!("quotients: {count}");
    for spec in &specs {
        let (_, order) = quotient_group(&sig, spec)?;
        let chosen: Vec<usize> = spec.extra_relations[0]
            .iter()
            .enumerate()
            .filter(|(_, &x)| x != 0)
            .map(|(i, _)| i + 1)
            .collect();
        println!("  S = {{{}}}: order {order}", list(&chosen));
    }
    Ok(())
}
