use serde_json::{json, Value};

use toricmor::document::{document_rays, theta_records, to_document_order, ProblemDocument};
use toricmor::fan::Fan;
use toricmor::jacobian::integrate_v_along;
use toricmor::localization::{choose_direction, localize, vanishing_predicate, Direction, Localization};
use toricmor::moduli::{euler_char_y, DegreeData};
use toricmor::rational::format_rational;
use toricmor::Result;

pub struct Options {
    pub direction: Option<Vec<i64>>,
    pub verbose: bool,
}

pub fn execute(verb: &str, doc: &ProblemDocument, opts: &Options) -> Result<Value> {
    let fan = doc.fan()?;
    let mut report = match verb {
        "validate" => validate(&fan),
        "primitive-collections" => json!({
            "primitive_collections": fan
                .primitive_collections()
                .iter()
                .map(|pc| document_rays(&fan, &pc.0))
                .collect::<Vec<_>>(),
        }),
        "degree-data" => degree_report(&fan, &doc.degree_data(&fan)?),
        "chi-y" => {
            let dd = doc.degree_data(&fan)?;
            json!({ "chi_y": euler_char_y(&fan, &dd).to_string() })
        }
        "pushforward" => pushforward(&fan, doc, opts)?,
        "integrate" => integrate(&fan, doc, opts)?,
        "check-vanishing" => check_vanishing(&fan, doc, opts)?,
        other => unreachable!("unknown verb {other}"),
    };
    report["verb"] = json!(verb);
    Ok(report)
}

fn validate(fan: &Fan) -> Value {
    let l = fan.picard_rank();
    let canonical: Vec<usize> = (0..fan.num_rays()).collect();
    json!({
        "valid": true,
        "dim": fan.dim(),
        "num_rays": fan.num_rays(),
        "picard_rank": l,
        "num_max_cones": fan.max_cones().len(),
        "canonical_order": canonical.iter().map(|&r| fan.permutation()[r] + 1).collect::<Vec<_>>(),
        "relation_matrix": fan.relation_matrix().rows,
    })
}

fn degree_report(fan: &Fan, dd: &DegreeData) -> Value {
    json!({
        "genus": dd.genus,
        "degrees": to_document_order(fan, &dd.degrees),
        "ranks": to_document_order(fan, &dd.ranks),
        "dim_mor": dd.dim_mor,
        "dim_w": dd.dim_w,
        "dim_v": dd.dim_v,
        "dim_y": dd.dim_y,
    })
}

fn direction(fan: &Fan, opts: &Options) -> Result<Direction> {
    match &opts.direction {
        Some(v) => Ok(Direction::new(fan, v.clone())?),
        None => Ok(choose_direction(fan)),
    }
}

/// Poles of the summed series are all zero once `constant_term` succeeds;
/// this records how deep the individual terms went.
fn cancellation(loc: &Localization) -> Value {
    let lowest = loc.terms.iter().filter_map(|t| t.min_exponent()).min().unwrap_or(0).min(0);
    json!({ "lowest_term_exponent": lowest, "poles_cancelled": true })
}

fn fixed_point_terms(fan: &Fan, loc: &Localization) -> Value {
    let terms: Vec<Value> = loc
        .terms
        .iter()
        .enumerate()
        .map(|(x, term)| {
            json!({
                "cone": document_rays(fan, &fan.max_cones()[x]),
                "series": term
                    .iter()
                    .map(|(e, c)| json!({ "t_exponent": e, "class": theta_records(fan, c) }))
                    .collect::<Vec<_>>(),
            })
        })
        .collect();
    Value::Array(terms)
}

fn pushforward(fan: &Fan, doc: &ProblemDocument, opts: &Options) -> Result<Value> {
    let dd = doc.degree_data(fan)?;
    let m = doc.exponents(fan)?;
    let dir = direction(fan, opts)?;
    let loc = localize(fan, &dd, &m, &dir, opts.verbose)?;
    let class = loc.constant_term()?;
    let mut report = json!({
        "direction": dir.vector,
        "pushforward": theta_records(fan, &class),
        "cancellation": cancellation(&loc),
    });
    if opts.verbose {
        report["display"] = json!(class.to_string());
        report["fixed_points"] = fixed_point_terms(fan, &loc);
    }
    Ok(report)
}

fn integrate(fan: &Fan, doc: &ProblemDocument, opts: &Options) -> Result<Value> {
    let dd = doc.degree_data(fan)?;
    let m = doc.exponents(fan)?;
    let dir = direction(fan, opts)?;
    let integral = integrate_v_along(fan, &dd, &m, &dir)?;
    let mut report = json!({
        "direction": dir.vector,
        "value": format_rational(&integral.value),
    });
    if opts.verbose {
        let loc = localize(fan, &dd, &m, &dir, true)?;
        report["pushforward"] = json!(theta_records(fan, &integral.pushforward));
        report["cancellation"] = cancellation(&loc);
        report["fixed_points"] = fixed_point_terms(fan, &loc);
    }
    Ok(report)
}

fn check_vanishing(fan: &Fan, doc: &ProblemDocument, opts: &Options) -> Result<Value> {
    let dd = doc.degree_data(fan)?;
    let m = doc.exponents(fan)?;
    let subset = doc.ray_subset(fan)?;
    let cert = vanishing_predicate(fan, &dd, &subset, &m)?;
    let dir = direction(fan, opts)?;
    let total: i64 = m.iter().map(|&x| x as i64).sum();
    let mut report = json!({
        "ray_subset": document_rays(fan, &subset),
        "spans_cone": cert.spans_cone,
        "short_rays": document_rays(fan, &cert.short_rays),
        "predicate": cert.holds,
    });
    if total == dd.dim_v {
        let integral = integrate_v_along(fan, &dd, &m, &dir)?;
        report["integral"] = json!(format_rational(&integral.value));
        report["pushforward"] = json!(theta_records(fan, &integral.pushforward));
    } else {
        let loc = localize(fan, &dd, &m, &dir, false)?;
        report["integral"] = Value::Null;
        report["pushforward"] = json!(theta_records(fan, &loc.constant_term()?));
    }
    Ok(report)
}
