use std::io::Write;
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sympindex::dual::{
    distinct, find_characteristics, functional_checks, plane_seed, ClosedCharacteristic,
    ConvexBody, DualAction, DualParams, Ellipsoid, MinimizeOptions, MollifierSpec, RecoverOptions,
    SearchOptions, SeedKind,
};
use sympindex::index::{find_gap_m, iterate, Decomposition};
use sympindex::spectral::{
    analyze_orbit, annotate, bott_check, cross_validate, ChainOptions, OrbitAnalysis,
};
use sympindex::symplectic::{
    classify_with, ClassifyOptions, SymplecticMatrix, DEFAULT_SYMPLECTIC_TOL,
};
use sympindex::Execution;

use crate::io::{output, read_json, write_json, CharJson};
use crate::{
    BottArgs, CliError, FindArgs, Format, GapArgs, IterateArgs, NormalFormArgs, SpectralArgs,
};

fn positive(name: &str, v: f64) -> Result<(), CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CliError::usage(format!(
            "--{name} must be positive, got {v}"
        )))
    }
}

fn power_of_two(name: &str, v: usize) -> Result<(), CliError> {
    if v.is_power_of_two() {
        Ok(())
    } else {
        Err(CliError::usage(format!(
            "--{name} must be a power of two, got {v}"
        )))
    }
}

fn read_decomposition(path: &Path) -> Result<Decomposition, CliError> {
    Ok(Decomposition::from_json(&std::fs::read_to_string(path)?)?)
}

pub fn normal_form(a: &NormalFormArgs) -> Result<(), CliError> {
    positive("cluster-tol", a.cluster_tol)?;
    positive("rank-tol", a.rank_tol)?;
    let raw: Value = read_json(&a.matrix)?;
    let rows = match &raw {
        Value::Object(o) => o
            .get("matrix")
            .ok_or_else(|| CliError::usage("object input needs a \"matrix\" key"))?,
        other => other,
    };
    let rows: Vec<Vec<f64>> = serde_json::from_value(rows.clone())?;
    let m = SymplecticMatrix::from_rows(&rows, DEFAULT_SYMPLECTIC_TOL)?;
    let blocks = classify_with(
        &m,
        ClassifyOptions {
            cluster_tol: a.cluster_tol,
            rank_tol: a.rank_tol,
        },
    )?;
    let d = Decomposition::with_total_i1(&blocks, a.i1)?;
    let mut doc = serde_json::to_value(&d)?;
    doc["elliptic_height"] = json!(d.elliptic_height());
    doc["config"] = serde_json::to_value(a)?;
    let mut w = output(a.out.as_deref())?;
    serde_json::to_writer_pretty(&mut w, &doc)?;
    writeln!(w)?;
    Ok(())
}

#[derive(Serialize)]
struct IterateRow {
    m: u32,
    i_minus1: i64,
    nu_minus1: u32,
    orbit_index: i64,
    orbit_nullity: i64,
    gap_to_next: i64,
    boundary_warning: bool,
}

pub fn iterate_cmd(a: &IterateArgs) -> Result<(), CliError> {
    if a.m_min == 0 || a.m_max < a.m_min {
        return Err(CliError::usage("need 1 ≤ --m-min ≤ --m-max"));
    }
    let d = read_decomposition(&a.decomp)?;
    let mut rows = Vec::new();
    let mut cur = iterate(&d, a.m_min)?;
    for m in a.m_min..=a.m_max {
        let next = iterate(&d, m + 1)?;
        rows.push(IterateRow {
            m,
            i_minus1: cur.i_minus1,
            nu_minus1: cur.nu_minus1,
            orbit_index: cur.orbit_index(),
            orbit_nullity: cur.orbit_nullity(),
            gap_to_next: next.i_minus1 - cur.i_minus1,
            boundary_warning: cur.boundary_warning,
        });
        cur = next;
    }
    if rows.iter().any(|r| r.boundary_warning) {
        eprintln!("warning: a float angle sits within 1e-12 of a rational boundary; use theta_pi for exact results");
    }
    let mut w = output(a.out.as_deref())?;
    match a.format {
        Format::Json => {
            let doc = json!({ "config": a, "n": d.n(), "total_i1": d.total_i1(), "rows": rows });
            serde_json::to_writer_pretty(&mut w, &doc)?;
            writeln!(w)?;
        }
        Format::Csv => {
            let config = serde_json::to_value(a)?;
            for (k, v) in config.as_object().into_iter().flatten() {
                writeln!(w, "# {k} = {v}")?;
            }
            let mut csv = csv::Writer::from_writer(w);
            for r in &rows {
                csv.serialize(r)
                    .map_err(|e| CliError::usage(e.to_string()))?;
            }
            csv.flush()?;
        }
    }
    Ok(())
}

pub fn gap(a: &GapArgs) -> Result<(), CliError> {
    let d = read_decomposition(&a.decomp)?;
    let m = find_gap_m(&d, a.m_max)?;
    let (i_m, i_next) = (iterate(&d, m)?, iterate(&d, m + 1)?);
    println!("{m}");
    if let Some(path) = &a.out {
        let doc = json!({
            "config": a,
            "m": m,
            "i_m": i_m.i_minus1,
            "i_m_plus_1": i_next.i_minus1,
        });
        write_json(path, &doc)?;
    }
    Ok(())
}

/// Body and problem parameters stored alongside the characteristics.
#[derive(Serialize, Deserialize)]
struct ProblemConfig {
    ellipsoid: Vec<f64>,
    a: f64,
    alpha: f64,
    c: f64,
    g_hi: f64,
    theta_cap: f64,
}

impl ProblemConfig {
    fn new(body: &Ellipsoid, p: &DualParams) -> Self {
        let s = p.mollifier.spec();
        Self {
            ellipsoid: body.semi_axes().to_vec(),
            a: p.a,
            alpha: s.alpha,
            c: s.c,
            g_hi: s.g_hi,
            theta_cap: s.theta_cap,
        }
    }

    fn build(&self) -> Result<(Ellipsoid, DualParams), CliError> {
        let body = Ellipsoid::new(self.ellipsoid.clone())?;
        let spec = MollifierSpec {
            alpha: self.alpha,
            c: self.c,
            g_hi: self.g_hi,
            theta_cap: self.theta_cap,
        };
        Ok((body, DualParams::new(self.a, spec)?))
    }
}

#[derive(Serialize)]
struct SeedJson {
    seed: String,
    period: Option<f64>,
    error: Option<String>,
    iterations: usize,
}

#[derive(Serialize, Deserialize)]
struct CharsFile {
    problem: ProblemConfig,
    #[serde(default)]
    config: Value,
    #[serde(default)]
    seeds: Value,
    characteristics: Vec<CharJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    verification: Option<Value>,
}

fn chain_options(modes: usize, zero_tol: f64) -> ChainOptions {
    ChainOptions {
        modes,
        zero_tol,
        ..ChainOptions::default()
    }
}

pub fn find(a: &FindArgs) -> Result<(), CliError> {
    power_of_two("modes", a.modes)?;
    power_of_two("index-modes", a.index_modes)?;
    for (name, v) in [
        ("tol", a.tol),
        ("orbit-tol", a.orbit_tol),
        ("distinct-tol", a.distinct_tol),
        ("zero-tol", a.zero_tol),
    ] {
        positive(name, v)?;
    }
    if a.verify && a.verify_m == 0 {
        return Err(CliError::usage("--verify-m must be at least 1"));
    }
    let body = Ellipsoid::new(a.ellipsoid.clone())?;
    let params = DualParams::for_ellipsoid(&body, MollifierSpec::default())?;
    for w in body
        .planar_periods()
        .iter()
        .flat_map(|&t| params.warnings(t))
    {
        eprintln!("warning: {w}");
    }
    let opts = SearchOptions {
        modes: a.modes,
        quad_nodes: a.quad_nodes,
        random_seeds: a.seeds,
        rng_seed: a.rng_seed,
        minimize: MinimizeOptions {
            grad_tol: a.tol,
            max_iter: a.max_iter,
            ..MinimizeOptions::default()
        },
        recover: RecoverOptions {
            orbit_tol: a.orbit_tol,
            ..RecoverOptions::default()
        },
        distinct_tol: a.distinct_tol,
        exec: Execution::default(),
    };

    let clock = Instant::now();
    let outcome = find_characteristics(&body, &params, &opts)?;
    eprintln!(
        "found {} characteristic(s) in {:.1}s",
        outcome.characteristics.len(),
        clock.elapsed().as_secs_f64()
    );

    let chain = chain_options(a.index_modes, a.zero_tol);
    let mut chars = outcome.characteristics;
    let mut analyses: Vec<Option<OrbitAnalysis>> = Vec::new();
    for (k, c) in chars.iter_mut().enumerate() {
        if !c.symmetric {
            eprintln!(
                "orbit {k}: not symmetric (error {:.1e}), index skipped",
                c.symmetry_error
            );
            analyses.push(None);
            continue;
        }
        let an = analyze_orbit(&body, &params, c, &chain)?;
        annotate(c, &an)?;
        eprintln!(
            "orbit {k}: τ = {:.10}, index {}, nullity {}",
            c.tau,
            c.index.unwrap_or_default(),
            c.nullity.unwrap_or_default()
        );
        analyses.push(Some(an));
    }

    let seeds: Vec<SeedJson> = outcome
        .seeds
        .iter()
        .map(|s| SeedJson {
            seed: match s.kind {
                SeedKind::Plane(k) => format!("plane {k}"),
                SeedKind::Random(r) => format!("random {r}"),
            },
            period: s.outcome.as_ref().ok().copied(),
            error: s.outcome.as_ref().err().cloned(),
            iterations: s.iterations,
        })
        .collect();

    let verification = if a.verify {
        Some(verify(a, &body, &params, &chars, &analyses, &chain)?)
    } else {
        None
    };

    let file = CharsFile {
        problem: ProblemConfig::new(&body, &params),
        config: serde_json::to_value(a)?,
        seeds: serde_json::to_value(&seeds)?,
        characteristics: chars
            .iter()
            .zip(&analyses)
            .map(|(c, an)| CharJson::from_characteristic(c, an.as_ref().map(|x| x.monodromy.gamma)))
            .collect(),
        verification: verification.as_ref().map(|(v, _)| v.clone()),
    };
    write_json(&a.out, &file)?;

    if let Some(path) = &a.dump_samples {
        let mut w = csv::Writer::from_path(path).map_err(|e| CliError::usage(e.to_string()))?;
        let d = 2 * body.dim_half();
        let mut header = vec!["orbit".to_string(), "t".to_string()];
        header.extend((0..d).map(|i| format!("y{i}")));
        w.write_record(&header)
            .map_err(|e| CliError::usage(e.to_string()))?;
        for (k, c) in chars.iter().enumerate() {
            let n = c.samples.len();
            for (j, y) in c.samples.iter().enumerate() {
                let mut rec = vec![k.to_string(), (c.tau * j as f64 / n as f64).to_string()];
                rec.extend(y.iter().map(|v| v.to_string()));
                w.write_record(&rec)
                    .map_err(|e| CliError::usage(e.to_string()))?;
            }
        }
        w.flush()?;
    }

    match verification {
        Some((_, failures)) if !failures.is_empty() => {
            Err(CliError::Verification(failures.join("; ")))
        }
        _ => Ok(()),
    }
}

/// Every check of a `--verify` run; returns the report and the failed checks.
fn verify(
    a: &FindArgs,
    body: &Ellipsoid,
    params: &DualParams,
    chars: &[ClosedCharacteristic],
    analyses: &[Option<OrbitAnalysis>],
    chain: &ChainOptions,
) -> Result<(Value, Vec<String>), CliError> {
    let mut failures = Vec::new();
    let mut check = |ok: bool, what: String| {
        eprintln!("[{}] {what}", if ok { "ok" } else { "FAIL" });
        if !ok {
            failures.push(what);
        }
    };

    let mut expected = body.planar_periods();
    expected.sort_by(f64::total_cmp);
    check(
        chars.len() == expected.len(),
        format!(
            "{} characteristics, expected {}",
            chars.len(),
            expected.len()
        ),
    );
    let mut orbits = Vec::new();
    for (k, c) in chars.iter().enumerate() {
        let target = expected.get(k).copied().unwrap_or(f64::NAN);
        let rel = (c.tau / target - 1.0).abs();
        check(
            rel < 1e-4,
            format!("orbit {k}: τ = {:.10} against {target:.10}", c.tau),
        );
        check(
            c.symmetric && c.symmetry_error <= a.orbit_tol,
            format!("orbit {k}: symmetry error {:.1e}", c.symmetry_error),
        );
        check(
            c.gauge_error <= a.orbit_tol,
            format!("orbit {k}: gauge error {:.1e}", c.gauge_error),
        );
        check(
            c.psi_value < 0.0,
            format!("orbit {k}: critical value {:.6e}", c.psi_value),
        );
        orbits.push(json!({
            "tau": c.tau,
            "expected_tau": target,
            "relative_error": rel,
        }));
    }
    for i in 0..chars.len() {
        for j in i + 1..chars.len() {
            check(
                distinct(&chars[i], &chars[j], a.distinct_tol),
                format!("orbits {i} and {j} are geometrically distinct"),
            );
        }
    }

    let action = DualAction::new(body, *params, a.modes, a.quad_nodes, Execution::default())?;
    let size = plane_seed(body, params, a.modes, 0)?.norm();
    let functional = functional_checks(&action, size, 8, a.rng_seed)?;
    check(
        functional.pass(),
        format!(
            "functional: antisymmetry {:.1e}, shift {:.1e}, gradient {:.1e}",
            functional.antisymmetry, functional.shift_invariance, functional.gradient
        ),
    );

    let mut rows = Vec::new();
    for (k, an) in analyses.iter().enumerate() {
        let Some(an) = an else {
            check(false, format!("orbit {k}: no index analysis"));
            continue;
        };
        let mono = &an.monodromy;
        check(
            mono.drift <= chain.monodromy.drift_tol
                && mono.tangent_residual <= 1e-6
                && mono.gamma > 0.0,
            format!(
                "orbit {k}: drift {:.1e}, tangent residual {:.1e}, γ = {:.6}",
                mono.drift, mono.tangent_residual, mono.gamma
            ),
        );
        for m in 1..=a.verify_m {
            let clock = Instant::now();
            let row = cross_validate(an, m, chain)?;
            check(
                row.pass && row.bott_pass,
                format!(
                    "orbit {k} m {m}: analytic ({}, {}), direct ({}, {}), bott ({}, {}), 2K ({}, {}) [{:.1}s]",
                    row.analytic.i_minus1,
                    row.analytic.nu_minus1,
                    row.direct_index,
                    row.direct_nullity,
                    row.bott_sum,
                    row.bott_nullity,
                    row.doubled_index,
                    row.doubled_nullity,
                    clock.elapsed().as_secs_f64()
                ),
            );
            rows.push(json!({ "orbit": k, "row": row }));
        }
    }
    let pass = failures.is_empty();
    let report = json!({
        "pass": pass,
        "orbits": orbits,
        "functional": functional,
        "cross_validation": rows,
        "failures": failures,
    });
    Ok((report, failures))
}

fn load_chars(
    path: &Path,
    orbit_tol: f64,
) -> Result<(Ellipsoid, DualParams, Vec<ClosedCharacteristic>), CliError> {
    let file: CharsFile = read_json(path)?;
    let (body, params) = file.problem.build()?;
    let chars = file
        .characteristics
        .into_iter()
        .map(|c| c.into_characteristic(&body, orbit_tol))
        .collect::<Result<Vec<_>, _>>()?;
    if chars.is_empty() {
        return Err(CliError::usage("no characteristics in input"));
    }
    Ok((body, params, chars))
}

fn analyze_all(
    body: &Ellipsoid,
    params: &DualParams,
    chars: &[ClosedCharacteristic],
    chain: &ChainOptions,
) -> Result<Vec<OrbitAnalysis>, CliError> {
    chars
        .iter()
        .enumerate()
        .map(|(k, c)| {
            if !c.symmetric {
                return Err(CliError::usage(format!(
                    "orbit {k} is not symmetric (error {:.1e})",
                    c.symmetry_error
                )));
            }
            Ok(analyze_orbit(body, params, c, chain)?)
        })
        .collect()
}

#[derive(Serialize)]
struct SpectralRow {
    orbit: usize,
    m: u32,
    analytic_index: i64,
    analytic_nullity: u32,
    direct_index: usize,
    direct_nullity: usize,
    bott_sum: usize,
    bott_nullity: usize,
    doubled_index: usize,
    doubled_nullity: usize,
    k_stable: bool,
    bott_pass: bool,
    pass: bool,
}

pub fn spectral(a: &SpectralArgs) -> Result<(), CliError> {
    power_of_two("modes", a.modes)?;
    positive("zero-tol", a.zero_tol)?;
    let (body, params, chars) = load_chars(&a.chars, sympindex::dual::DEFAULT_ORBIT_TOL)?;
    let chain = chain_options(a.modes, a.zero_tol);
    let analyses = analyze_all(&body, &params, &chars, &chain)?;
    let mut rows = Vec::new();
    for (k, an) in analyses.iter().enumerate() {
        for m in a.m.0..=a.m.1 {
            let clock = Instant::now();
            let r = cross_validate(an, m, &chain)?;
            eprintln!(
                "orbit {k} m {m}: analytic {} direct {} bott {} pass {} ({:.1}s)",
                r.analytic.i_minus1,
                r.direct_index,
                r.bott_sum,
                r.pass && r.bott_pass,
                clock.elapsed().as_secs_f64()
            );
            rows.push(SpectralRow {
                orbit: k,
                m,
                analytic_index: r.analytic.i_minus1,
                analytic_nullity: r.analytic.nu_minus1,
                direct_index: r.direct_index,
                direct_nullity: r.direct_nullity,
                bott_sum: r.bott_sum,
                bott_nullity: r.bott_nullity,
                doubled_index: r.doubled_index,
                doubled_nullity: r.doubled_nullity,
                k_stable: r.k_stable,
                bott_pass: r.bott_pass,
                pass: r.pass,
            });
        }
    }
    let decompositions: Vec<&Decomposition> = analyses.iter().map(|x| &x.decomposition).collect();
    let failed: Vec<String> = rows
        .iter()
        .filter(|r| !(r.pass && r.bott_pass))
        .map(|r| format!("orbit {} m {}", r.orbit, r.m))
        .collect();
    let doc = json!({
        "config": a,
        "decompositions": decompositions,
        "rows": rows,
        "pass": failed.is_empty(),
    });
    write_json(&a.report, &doc)?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verification(format!(
            "mismatched rows: {}",
            failed.join(", ")
        )))
    }
}

pub fn bott_check_cmd(a: &BottArgs) -> Result<(), CliError> {
    power_of_two("modes", a.modes)?;
    positive("zero-tol", a.zero_tol)?;
    let (body, params, chars) = load_chars(&a.chars, sympindex::dual::DEFAULT_ORBIT_TOL)?;
    let analyses = analyze_all(&body, &params, &chars, &chain_options(a.modes, a.zero_tol))?;
    let mut reports = Vec::new();
    let mut failed = Vec::new();
    for (k, an) in analyses.iter().enumerate() {
        for m in a.m.0..=a.m.1 {
            let r = bott_check(&an.data, m, a.modes, a.zero_tol, Execution::default())?;
            println!(
                "orbit {k} m {m}: direct {} ({}), sum {} ({}){}",
                r.direct_index,
                r.direct_nullity,
                r.bott_sum,
                r.bott_nullity,
                if r.pass { "" } else { " MISMATCH" }
            );
            if !r.pass {
                failed.push(format!("orbit {k} m {m}"));
            }
            reports.push(json!({ "orbit": k, "report": r }));
        }
    }
    if let Some(path) = &a.report {
        write_json(
            path,
            &json!({ "config": a, "reports": reports, "pass": failed.is_empty() }),
        )?;
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verification(format!(
            "Bott mismatch: {}",
            failed.join(", ")
        )))
    }
}
