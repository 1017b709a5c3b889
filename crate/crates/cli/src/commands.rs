use serde_json::{Map, Value};

use contextuality::experiment::{
    linspace, post_measurement_state, prepare_state, run_experiment, sweep, ExperimentConfig,
    OutcomeTable,
};
use contextuality::nchv::{
    contradiction_search, enumerate_assignments, induced_product_values, nchv_c, Observable,
    SearchConstraints,
};
use contextuality::optics::{
    channel_table, coincidence_table, default_probes, effective_mixing, Distinguishability,
    ProbeState, MIXING_FIT_LIMIT,
};
use contextuality::pauli::{check_identities, IdentityOperands};
use contextuality::{Complex, Setting, State};

use crate::descriptor::{parse_probe, parse_state};
use crate::error::{CliError, CliResult};
use crate::record::Record;

const OUTCOME_KEYS: [&str; 4] = ["(+1,+1)", "(+1,-1)", "(-1,+1)", "(-1,-1)"];

fn echo(pairs: &[(&str, Value)]) -> Map<String, Value> {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

fn table_results(r: &mut Record, table: &OutcomeTable<f64>) {
    for (key, v) in OUTCOME_KEYS.iter().zip(table.ordered()) {
        r.result(key, v);
    }
    r.result("total", table.total());
}

fn setting_name(s: Setting) -> &'static str {
    match s {
        Setting::A => "a",
        Setting::B => "b",
    }
}

pub fn identities(tolerance: f64, corrupt: bool) -> CliResult<Vec<Record>> {
    let mut ops = IdentityOperands::<f64>::default();
    if corrupt {
        ops.s11.set(0, 3, Complex::new(0.5, 0.0));
    }
    let report = check_identities(&ops, tolerance)?;
    let input = echo(&[("corrupt", corrupt.into()), ("tolerance", tolerance.into())]);
    let mut r = Record::new("identities", "identities", &input);
    for c in &report.checks {
        r.check(c.name, c.residual, tolerance);
    }
    r.result("max_residual", report.max_residual());
    Ok(vec![r])
}

pub fn run(state: &str, p: f64, p_prime: f64, tolerance: f64) -> CliResult<Vec<Record>> {
    let rho = prepare_state(&parse_state(state)?)?;
    let config = ExperimentConfig::new(rho, p, p_prime)?;
    let est = run_experiment(&config)?;
    let input = echo(&[
        ("state", state.into()),
        ("p", p.into()),
        ("p_prime", p_prime.into()),
        ("tolerance", tolerance.into()),
    ]);
    let mut records = Vec::new();
    for (setting, table, corr) in [
        (Setting::A, &est.table_a, est.correlation_a),
        (Setting::B, &est.table_b, est.correlation_b),
    ] {
        let mut r = Record::new("run", format!("table_{}", setting_name(setting)), &input);
        table_results(&mut r, table);
        r.result("correlation", corr);
        records.push(r);
    }
    let formula = 2.0 - p - p_prime;
    let mut w = Record::new("run", "witness", &input);
    w.result("correlation_a", est.correlation_a)
        .result("correlation_b", est.correlation_b)
        .result("c", est.c)
        .result("qm_prediction", est.qm_prediction)
        .result("mixing_law", est.mixing_law)
        .result("mixing_law_residual", est.mixing_law_residual)
        .result("two_minus_p_minus_p_prime", formula)
        .result("formula_residual", est.c - formula)
        .check("c = (2 - p - p')<s1s1>", est.mixing_law_residual, tolerance);
    records.push(w);
    Ok(records)
}

#[derive(Debug, Clone, Copy)]
pub struct Axis {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl Axis {
    fn points(&self, name: &str) -> CliResult<Vec<f64>> {
        if self.steps == 0 {
            return Err(CliError::usage(format!("{name}: steps must be at least 1")));
        }
        for (end, v) in [("start", self.start), ("stop", self.stop)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(CliError::usage(format!(
                    "{name}: {end} = {v} is outside [0, 1]"
                )));
            }
        }
        Ok(linspace(self.start, self.stop, self.steps)?)
    }
}

pub fn sweep_grid(p: Axis, q: Axis, tolerance: f64) -> CliResult<Vec<Record>> {
    let ps = p.points("p")?;
    let qs = q.points("p_prime")?;
    let grid: Vec<(f64, f64)> = ps
        .iter()
        .flat_map(|&a| qs.iter().map(move |&b| (a, b)))
        .collect();
    let points = sweep(&grid)?;
    let spec = [
        ("p_start", p.start.into()),
        ("p_stop", p.stop.into()),
        ("p_steps", p.steps.into()),
        ("p_prime_start", q.start.into()),
        ("p_prime_stop", q.stop.into()),
        ("p_prime_steps", q.steps.into()),
        ("tolerance", tolerance.into()),
    ];
    let mut records = Vec::with_capacity(points.len() + 1);
    let mut worst = 0.0f64;
    for pt in &points {
        let mut pairs = vec![("p", pt.p.into()), ("p_prime", pt.p_prime.into())];
        pairs.extend(spec.iter().cloned());
        let mut r = Record::new("sweep", "point", &echo(&pairs));
        r.result("c", pt.c).result("residual", pt.residual).check(
            "c = 2 - p - p'",
            pt.residual,
            tolerance,
        );
        worst = worst.max(pt.residual.abs());
        records.push(r);
    }
    let mut summary = Record::new("sweep", "summary", &echo(&spec));
    summary
        .integer("points", points.len() as i64)
        .result("max_residual", worst)
        .check("max |c - (2 - p - p')|", worst, tolerance);
    records.push(summary);
    Ok(records)
}

const CONSTRAINT_NAMES: [&str; 3] = ["factorization", "identity-22-33", "identity-23-32"];

pub fn parse_disabled(names: &[String]) -> CliResult<SearchConstraints> {
    let mut c = SearchConstraints::default();
    for name in names {
        match name.trim() {
            "factorization" => c.factorization = false,
            "identity-22-33" => c.identity_22_33 = false,
            "identity-23-32" => c.identity_23_32 = false,
            "identities" => {
                c.identity_22_33 = false;
                c.identity_23_32 = false;
            }
            "" => {}
            other => {
                return Err(CliError::usage(format!(
                    "unknown constraint '{other}'; expected one of {}, identities",
                    CONSTRAINT_NAMES.join(", ")
                )))
            }
        }
    }
    Ok(c)
}

fn without(c: SearchConstraints, name: &str) -> SearchConstraints {
    let mut c = c;
    match name {
        "factorization" => c.factorization = false,
        "identity-22-33" => c.identity_22_33 = false,
        _ => c.identity_23_32 = false,
    }
    c
}

fn assignment_record(input: &Map<String, Value>) -> CliResult<Record> {
    let assignments = enumerate_assignments();
    let equal = assignments
        .iter()
        .filter(|a| {
            let (x, y) = induced_product_values(a);
            x == y
        })
        .count();
    let uniform: f64 = nchv_c(&[1.0 / 16.0; 16])?;
    let mut worst = uniform.abs();
    for k in 0..16 {
        let mut w = [0.0f64; 16];
        w[k] = 1.0;
        worst = worst.max(nchv_c(&w)?.abs());
    }
    let mut r = Record::new("nchv", "assignments", input);
    r.integer("assignments", assignments.len() as i64)
        .integer("equal_product_pairs", equal as i64)
        .result("c_nchv_uniform", uniform)
        .result("c_nchv_max_abs", worst)
        .check(
            "induced products agree",
            (assignments.len() - equal) as f64,
            0.0,
        )
        .check("C_nchv = 0", worst, 0.0);
    Ok(r)
}

pub fn nchv(target: i64, disabled: &[String]) -> CliResult<Vec<Record>> {
    let target = match target {
        1 => 1i8,
        -1 => -1i8,
        other => {
            return Err(CliError::usage(format!(
                "target must be 1 or -1, got {other}"
            )))
        }
    };
    let constraints = parse_disabled(disabled)?;
    let disabled_echo: Vec<&str> = CONSTRAINT_NAMES
        .iter()
        .copied()
        .filter(|&n| match n {
            "factorization" => !constraints.factorization,
            "identity-22-33" => !constraints.identity_22_33,
            _ => !constraints.identity_23_32,
        })
        .collect();
    let input = echo(&[
        ("target", target.into()),
        ("disable", disabled_echo.join(",").into()),
    ]);

    let mut records = vec![assignment_record(&input)?];
    let survivors = contradiction_search(target, constraints)?;
    let mut search = Record::new("nchv", "search", &input);
    search
        .integer("candidates", 512)
        .integer("survivors", survivors.len() as i64);
    for name in CONSTRAINT_NAMES {
        let n = contradiction_search(target, without(constraints, name))?.len();
        search.integer(&format!("survivors_without_{name}"), n as i64);
    }
    if disabled_echo.is_empty() {
        search.check("no noncontextual assignment", survivors.len() as f64, 0.0);
    }
    records.push(search);
    for (k, v) in survivors.iter().enumerate() {
        let mut r = Record::new("nchv", format!("survivor_{k}"), &input);
        for obs in Observable::ALL {
            r.integer(obs.label(), i64::from(v.get(obs)));
        }
        records.push(r);
    }
    Ok(records)
}

pub fn parse_settings(text: &str) -> CliResult<Vec<Setting>> {
    match text.trim().to_ascii_lowercase().as_str() {
        "a" => Ok(vec![Setting::A]),
        "b" => Ok(vec![Setting::B]),
        "both" => Ok(Setting::BOTH.to_vec()),
        other => Err(CliError::usage(format!(
            "setting must be a, b or both, got '{other}'"
        ))),
    }
}

struct OpticsRun {
    correlation: f64,
    p_eff: f64,
    record: Record,
}

fn optics_setting(
    probe: &ProbeState<f64>,
    s: Distinguishability<f64>,
    setting: Setting,
    input: &Map<String, Value>,
) -> CliResult<OpticsRun> {
    let table = coincidence_table(setting, &probe.source(s)?)?;
    let fit = effective_mixing(s, setting, &default_probes())?;
    let mismatch = table.max_abs_diff(&channel_table(probe, setting, fit.p_eff)?);
    let correlation = contextuality::experiment::correlation_from_table(&table);
    let mut r = Record::new(
        "optics",
        format!("setting_{}", setting_name(setting)),
        input,
    );
    table_results(&mut r, &table);
    r.result("correlation", correlation)
        .result("p_eff", fit.p_eff)
        .result("fit_residual", fit.residual)
        .result("channel_mismatch", mismatch)
        .check("probe-set fit residual", fit.residual, MIXING_FIT_LIMIT)
        .check(
            "source matches channel at p_eff",
            mismatch,
            MIXING_FIT_LIMIT,
        );
    Ok(OpticsRun {
        correlation,
        p_eff: fit.p_eff,
        record: r,
    })
}

pub fn optics(s: f64, settings: &str, state: &str, tolerance: f64) -> CliResult<Vec<Record>> {
    let overlap = Distinguishability::new(s)?;
    let chosen = parse_settings(settings)?;
    let probe = parse_probe(state)?;
    let input = echo(&[
        ("s", s.into()),
        ("setting", settings.into()),
        ("state", state.into()),
        ("tolerance", tolerance.into()),
    ]);
    let runs = chosen
        .iter()
        .map(|&setting| optics_setting(&probe, overlap, setting, &input))
        .collect::<CliResult<Vec<_>>>()?;
    let mut records: Vec<Record> = runs.iter().map(|r| r.record.clone()).collect();
    if let [a, b] = runs.as_slice() {
        let qm = contextuality::experiment::qm_prediction(&probe.density()?)?;
        let c = b.correlation - a.correlation;
        let predicted = (2.0 - a.p_eff - b.p_eff) * qm / 2.0;
        let mut w = Record::new("optics", "witness", &input);
        w.result("c", c)
            .result("predicted", predicted)
            .result("residual", c - predicted)
            .check(
                "c = (2 - p_eff_a - p_eff_b)<s1s1>",
                c - predicted,
                tolerance,
            );
        records.push(w);
    }
    Ok(records)
}

/// One condensed record per headline claim, all at default parameters.
pub fn report(tolerance: f64) -> CliResult<Vec<Record>> {
    let input = echo(&[("tolerance", tolerance.into())]);
    let mut out = Vec::new();

    let ids = identities(tolerance, false)?.remove(0);
    let mut r = Record::new("report", "identities", &input);
    r.result(
        "max_residual",
        ids.results["max_residual"].as_f64().unwrap_or(f64::NAN),
    );
    r.checks = ids.checks;
    out.push(r);

    let est = run_experiment(&ExperimentConfig::new(State::plus_plus(), 0.0, 0.0)?)?;
    let mut r = Record::new("report", "maximal_violation", &input);
    r.result("c", est.c)
        .check("c = 2 at p = p' = 0", est.c - 2.0, tolerance);
    out.push(r);

    let axis = Axis {
        start: 0.0,
        stop: 1.0,
        steps: 11,
    };
    let grid = sweep_grid(axis, axis, tolerance)?;
    let summary = grid.last().expect("sweep emits a summary");
    let mut r = Record::new("report", "mixing_law", &input);
    r.results = summary.results.clone();
    r.checks = summary.checks.clone();
    out.push(r);

    let mut r = Record::new("report", "nchv", &input);
    let assignments = assignment_record(&input)?;
    r.results = assignments.results;
    r.checks = assignments.checks;
    for target in [1i8, -1] {
        let full = contradiction_search(target, SearchConstraints::default())?.len();
        let free = contradiction_search(target, SearchConstraints::without_identities())?.len();
        r.integer(&format!("survivors_target_{target}"), full as i64)
            .integer(
                &format!("survivors_without_identities_target_{target}"),
                free as i64,
            )
            .check(&format!("no survivors, target {target}"), full as f64, 0.0)
            .check(
                &format!("16 survivors without identities, target {target}"),
                free as f64 - 16.0,
                0.0,
            );
    }
    out.push(r);

    let mut r = Record::new("report", "post_measurement", &input);
    for q in [0.0, 0.4, 1.0] {
        let pm = post_measurement_state(&ExperimentConfig::new(State::plus_plus(), 0.0, q)?)?;
        r.result(&format!("weight_1_at_{q}"), pm.weights[0])
            .result(&format!("weight_2_at_{q}"), pm.weights[1])
            .check(
                &format!("state matches closed form, p' = {q}"),
                pm.state_residual,
                tolerance,
            )
            .check(
                &format!("weights match closed form, p' = {q}"),
                pm.weight_residual,
                tolerance,
            );
    }
    out.push(r);

    let mut r = Record::new("report", "optics", &input);
    for (s, expected) in [(1.0, 2.0), (0.0, 0.0)] {
        let recs = optics(s, "both", "plus_plus", tolerance)?;
        let c = recs
            .last()
            .and_then(|w| w.results["c"].as_f64())
            .unwrap_or(f64::NAN);
        r.result(&format!("c_at_s_{s}"), c).check(
            &format!("c = {expected} at s = {s}"),
            c - expected,
            tolerance,
        );
    }
    out.push(r);
    Ok(out)
}
