use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use super::config::{scalar_field, FreeSource, InstanceConfig};
use super::generate::{generate, Generated};
use super::json::{
    CertificateJson, ChainJson, FunctionalJson, LadderJson, LowerJson, LuJson, MatrixJson, PartialJson,
    PolySequenceJson, RelationJson, UpperJson,
};
use super::table::{mark, render};
use super::{HarnessError, EXIT_INTERNAL, EXIT_PASS};
use crate::algebra::{format_scalar, Scalar};
use crate::banded::{BidiagonalChain, PolynomialSequence};
use crate::engine::{run_theorem, stage_plan, EngineError};
use crate::factorization::{
    chain_lower, darboux_transform, factorize, shifted_lu, upper_diag_from_polys, FactorError, FreeEntrySpec,
};
use crate::relations::{check_dual_relations, check_polynomial_relations, RelationCheck};

/// Directory for reports when the config names no explicit paths.
pub const REPORT_DIR_ENV: &str = "BANDED_DARBOUX_REPORT_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Gen,
    Factorize,
    Transform,
    Polys,
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Gen => "gen",
            Command::Factorize => "factorize",
            Command::Transform => "transform",
            Command::Polys => "polys",
            Command::Verify => "verify",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Timings {
    pub generate_ms: f64,
    pub compute_ms: f64,
    pub total_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckJson {
    pub check: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stage: Option<usize>,
    pub verdict: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErrorJson {
    pub code: i32,
    pub kind: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

/// Everything one command run produced. Field order is fixed; only
/// `timings` varies between identical runs.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: InstanceConfig,
    pub moment_budget: usize,
    #[serde(rename = "C_used", skip_serializing_if = "Option::is_none")]
    pub shift_used: Option<String>,
    pub shift_retries: usize,
    pub checks: Vec<CheckJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorJson>,
    pub verdict: String,
    pub exit_code: i32,
    pub timings: Timings,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// The report without `timings`, for reproducibility comparisons.
    pub fn payload(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if let Value::Object(map) = &mut v {
            map.remove("timings");
        }
        v
    }
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub report: RunReport,
    pub table: String,
    pub exit_code: i32,
}

struct Run<'a> {
    config: &'a InstanceConfig,
    checks: Vec<CheckJson>,
    table: String,
}

impl Run<'_> {
    fn check(&mut self, name: &str, stage: Option<usize>, pass: bool) {
        self.checks.push(CheckJson {
            check: name.into(),
            stage,
            verdict: if pass { "pass" } else { "fail" }.into(),
        });
    }

    fn relation_checks(&mut self, checks: &[RelationCheck]) -> Vec<RelationJson> {
        for c in checks {
            self.check(c.relation.name(), c.stage, c.passed());
        }
        checks.iter().map(RelationJson::from_check).collect()
    }
}

fn ms(t: Instant) -> f64 {
    (t.elapsed().as_secs_f64() * 1e6).round() / 1e3
}

fn free_entries(config: &InstanceConfig, g: &Generated) -> Result<FreeEntrySpec, HarnessError> {
    let p = config.p;
    match &config.free_entries {
        FreeSource::Theorem => Ok(FreeEntrySpec::new(p, stage_plan(&g.ladder, p)?.free)?),
        FreeSource::Filled { value } => Ok(FreeEntrySpec::filled(p, &scalar_field("free entry", value)?)),
        FreeSource::Explicit { values } => {
            let parsed = values
                .iter()
                .map(|row| row.iter().map(|v| scalar_field("free entry", v)).collect())
                .collect::<Result<Vec<Vec<Scalar>>, _>>()?;
            Ok(FreeEntrySpec::new(p, parsed)?)
        }
    }
}

fn build_chain(config: &InstanceConfig, g: &Generated) -> Result<BidiagonalChain, HarnessError> {
    let free = free_entries(config, g)?;
    Ok(factorize(&g.instance, &free)?)
}

fn stage_selection(config: &InstanceConfig, j: Option<usize>) -> Result<Vec<usize>, HarnessError> {
    match j {
        Some(j) if j > config.p => Err(HarnessError::Config(format!("--j {j} exceeds p = {}", config.p))),
        Some(j) => Ok(vec![j]),
        None => Ok((0..=config.p).collect()),
    }
}

fn band_header(d: usize) -> String {
    if d == 0 {
        "a(n,n)".into()
    } else {
        format!("a(n,n-{d})")
    }
}

fn gamma_table(chain: &BidiagonalChain, rows: usize) -> String {
    let p = chain.p();
    let mut headers = vec!["n".to_string(), "u_n".to_string()];
    headers.extend((1..=p).map(|j| format!("L^({j}) sub(n+1)")));
    let body: Vec<Vec<String>> = (0..rows.min(chain.size()))
        .map(|n| {
            let mut row = vec![n.to_string(), format_scalar(chain.upper().diag(n))];
            for f in chain.factors() {
                row.push(f.subs().get(n).map(format_scalar).unwrap_or_default());
            }
            row
        })
        .collect();
    let refs: Vec<&str> = headers.iter().map(String::as_str).collect();
    render(&refs, &body)
}

fn poly_table(label: &str, seq: &PolynomialSequence) -> String {
    let body: Vec<Vec<String>> = seq
        .as_slice()
        .iter()
        .enumerate()
        .map(|(n, q)| vec![n.to_string(), q.to_string()])
        .collect();
    render(&["n", label], &body)
}

fn cmd_gen(run: &mut Run, g: &Generated) -> Result<Value, HarnessError> {
    let m = g.instance.matrix();
    run.check("lowest_band_nonzero", None, m.is_regular());
    run.check("ladder_regular", None, g.ladder.is_regular());
    run.check("shift_admissible", None, true);
    let body: Vec<Vec<String>> = (0..m.size())
        .map(|n| {
            let mut row = vec![n.to_string()];
            row.extend((0..=m.p()).map(|d| m.band_entry(n, d).map(format_scalar).unwrap_or_default()));
            row
        })
        .collect();
    let mut headers = vec!["n".to_string()];
    headers.extend((0..=m.p()).map(band_header));
    let refs: Vec<&str> = headers.iter().map(String::as_str).collect();
    run.table.push_str(&render(&refs, &body));
    run.table.push('\n');
    for (i, row) in g.ladder.rows().iter().enumerate() {
        let cells: Vec<String> = row.iter().map(format_scalar).collect();
        let _ = writeln!(run.table, "lambda({}, 0..{}) = [{}]", i + 1, i, cells.join(", "));
    }
    Ok(json!({
        "matrix": MatrixJson::from_matrix(m),
        "C": format_scalar(g.instance.shift()),
        "ladder": LadderJson::from_ladder(&g.ladder),
        "nu": g.nu.entries().iter().map(FunctionalJson::from_functional).collect::<Vec<_>>(),
    }))
}

fn cmd_factorize(run: &mut Run, g: &Generated) -> Result<Value, HarnessError> {
    let inst = &g.instance;
    let n = inst.size();
    let (lower, upper) = shifted_lu(inst.matrix(), inst.shift())?;
    let target = inst
        .matrix()
        .to_band_matrix()
        .add_scalar_identity(&-inst.shift().clone());
    let product = lower
        .as_band()
        .multiply_window(&upper.to_band_matrix())
        .map_err(FactorError::from)?;
    run.check("lu_roundtrip", None, product.rows_equal(&target, n));
    run.check(
        "upper_diagonal_ratio",
        None,
        (0..n).all(|k| upper.diag(k) == &upper_diag_from_polys(inst.polys(), inst.shift(), k)),
    );
    let chain = build_chain(run.config, g)?;
    let rebuilt = chain_lower(&chain)?;
    run.check(
        "chain_roundtrip",
        None,
        rebuilt.as_band().rows_equal(lower.as_band(), n),
    );
    run.table.push_str(&gamma_table(&chain, n));
    Ok(json!({
        "lu": LuJson { lower: LowerJson::from_lower(&lower), upper: UpperJson::from_upper(&upper) },
        "chain": ChainJson::from_chain(&chain),
    }))
}

fn cmd_transform(run: &mut Run, g: &Generated, j: Option<usize>) -> Result<Value, HarnessError> {
    let chain = build_chain(run.config, g)?;
    let mut transforms = Vec::new();
    for stage in stage_selection(run.config, j)? {
        let m = darboux_transform(&chain, stage)?;
        if stage == 0 {
            let rows = m.valid_rows();
            let same = (0..rows).all(|r| (0..rows).all(|c| m.get(r, c) == g.instance.matrix().get(r, c)));
            run.check("reconstruction", Some(0), same);
        }
        let _ = writeln!(run.table, "J^({stage}), {} valid rows", m.valid_rows());
        let body: Vec<Vec<String>> = (0..m.valid_rows().min(8))
            .map(|n| {
                let mut row = vec![n.to_string()];
                row.extend((0..=m.p()).map(|d| m.band_entry(n, d).map(format_scalar).unwrap_or_default()));
                row
            })
            .collect();
        let mut headers = vec!["n".to_string()];
        headers.extend((0..=m.p()).map(band_header));
        let refs: Vec<&str> = headers.iter().map(String::as_str).collect();
        run.table.push_str(&render(&refs, &body));
        run.table.push('\n');
        transforms.push(json!({ "j": stage, "matrix": MatrixJson::from_matrix(&m) }));
    }
    run.table.push_str(&gamma_table(&chain, 8));
    Ok(json!({ "chain": ChainJson::from_chain(&chain), "transforms": transforms }))
}

fn cmd_polys(run: &mut Run, g: &Generated, j: Option<usize>) -> Result<Value, HarnessError> {
    let chain = build_chain(run.config, g)?;
    let window = run.config.window;
    let mut sequences = Vec::new();
    for stage in stage_selection(run.config, j)? {
        let seq = darboux_transform(&chain, stage)?
            .characteristic_polys(window)
            .map_err(FactorError::from)?;
        run.check("monic_graded", Some(stage), seq.is_monic_graded());
        run.table.push_str(&poly_table(&format!("P^({stage})_n"), &seq));
        run.table.push('\n');
        sequences.push(PolySequenceJson::from_sequence(stage, &seq));
    }
    let nmax = window.min(chain.size() - 2);
    let relations = run.relation_checks(&check_polynomial_relations(&chain, nmax)?);
    Ok(json!({ "sequences": sequences, "relations": relations }))
}

fn cmd_verify(run: &mut Run, g: &Generated) -> Result<Value, HarnessError> {
    let window = run.config.window;
    let cert = run_theorem(&g.instance, &g.nu, window)?;
    for d in &cert.hypotheses {
        run.check(
            &format!("delta_{}", d.m),
            Some(d.stage),
            d.value != Scalar::from_integer(0.into()),
        );
    }
    for s in &cert.stage_reports {
        run.check("orthogonality", Some(s.j), s.report.passed());
    }
    for s in &cert.staircase_checks {
        run.check(&format!("staircase_s{}", s.s), Some(s.stage), s.holds);
    }
    run.check("structural_consistency", None, cert.structural_consistency);

    let nmax = window.min(cert.chain.size() - 2);
    let mut relations = check_polynomial_relations(&cert.chain, nmax)?;
    relations.extend(check_dual_relations(&cert.chain, nmax)?);
    let relations = run.relation_checks(&relations);

    let _ = writeln!(run.table, "fingerprint {}", cert.fingerprint);
    let deltas: Vec<Vec<String>> = cert
        .hypotheses
        .iter()
        .map(|d| vec![d.stage.to_string(), d.m.to_string(), format_scalar(&d.value)])
        .collect();
    if !deltas.is_empty() {
        run.table.push_str(&render(&["j", "m", "Delta"], &deltas));
        run.table.push('\n');
    }
    run.table.push_str(&gamma_table(&cert.chain, 6));
    run.table.push('\n');
    let stages: Vec<Vec<String>> = cert
        .stage_reports
        .iter()
        .map(|s| {
            vec![
                s.j.to_string(),
                s.report.vanishing_checked.to_string(),
                s.report.nonvanishing_checked.to_string(),
                s.report.failures.len().to_string(),
                mark(s.report.passed()),
            ]
        })
        .collect();
    run.table.push_str(&render(
        &["j", "zero checks", "nonzero checks", "failures", "verdict"],
        &stages,
    ));
    run.table.push('\n');
    let rel_rows: Vec<Vec<String>> = relations
        .iter()
        .map(|r| {
            vec![
                r.relation.clone(),
                r.stage.map(|s| s.to_string()).unwrap_or_default(),
                r.checked.to_string(),
                mark(r.failures.is_empty()),
            ]
        })
        .collect();
    run.table
        .push_str(&render(&["relation", "j", "checked", "verdict"], &rel_rows));
    for w in &cert.warnings {
        let _ = writeln!(run.table, "warning: {w}");
    }
    Ok(json!({ "certificate": CertificateJson::from_certificate(&cert), "relations": relations }))
}

fn error_json(e: &HarnessError) -> ErrorJson {
    let witness = match e {
        HarnessError::Engine(EngineError::HypothesisViolated {
            stage,
            m,
            value,
            partial,
        }) => Some(json!({
            "stage": stage,
            "m": m,
            "delta": value,
            "partial": partial.as_deref().map(PartialJson::from_partial),
        })),
        HarnessError::Factor(FactorError::SingularLeadingMinor(k))
        | HarnessError::Engine(EngineError::Factor {
            source: FactorError::SingularLeadingMinor(k),
            ..
        }) => Some(json!({ "singular_minor": k })),
        HarnessError::Factor(FactorError::ZeroPeelPivot { stage, row })
        | HarnessError::Engine(EngineError::Factor {
            source: FactorError::ZeroPeelPivot { stage, row },
            ..
        }) => Some(json!({ "stage": stage, "row": row })),
        HarnessError::Engine(EngineError::ConsistencyFailure { stage, k }) => Some(json!({ "stage": stage, "k": k })),
        _ => None,
    };
    ErrorJson {
        code: e.exit_code(),
        kind: e.kind().into(),
        message: e.to_string(),
        witness,
    }
}

/// Run one command end to end. Never panics on bad input; failures end up
/// in the report's `error` field and the exit code.
pub fn run_command(command: Command, config: &InstanceConfig, j: Option<usize>) -> RunOutcome {
    let start = Instant::now();
    let mut report = RunReport {
        tool: "banded-darboux".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: command.name().into(),
        config: config.clone(),
        moment_budget: config.moment_budget(),
        shift_used: None,
        shift_retries: 0,
        checks: Vec::new(),
        result: None,
        error: None,
        verdict: "fail".into(),
        exit_code: EXIT_INTERNAL,
        timings: Timings::default(),
    };
    let mut run = Run {
        config,
        checks: Vec::new(),
        table: format!(
            "banded-darboux {}  p={} N={} C={} seed={} window={}\n\n",
            command.name(),
            config.p,
            config.n,
            config.shift,
            config.seed,
            config.window
        ),
    };

    let outcome = (|| -> Result<Value, HarnessError> {
        config.validate()?;
        let t = Instant::now();
        let g = generate(config)?;
        report.timings.generate_ms = ms(t);
        report.shift_used = Some(format_scalar(g.instance.shift()));
        report.shift_retries = g.shift_retries;
        let t = Instant::now();
        let value = match command {
            Command::Gen => cmd_gen(&mut run, &g),
            Command::Factorize => cmd_factorize(&mut run, &g),
            Command::Transform => cmd_transform(&mut run, &g, j),
            Command::Polys => cmd_polys(&mut run, &g, j),
            Command::Verify => cmd_verify(&mut run, &g),
        };
        report.timings.compute_ms = ms(t);
        value
    })();

    report.checks = run.checks;
    let failed: Vec<String> = report
        .checks
        .iter()
        .filter(|c| c.verdict != "pass")
        .map(|c| match c.stage {
            Some(s) => format!("{} (j = {s})", c.check),
            None => c.check.clone(),
        })
        .collect();
    let mut table = run.table;
    match outcome {
        Ok(value) => {
            report.result = Some(value);
            if failed.is_empty() {
                report.verdict = "pass".into();
                report.exit_code = EXIT_PASS;
            } else {
                let e = HarnessError::VerificationFailed(failed.join(", "));
                report.exit_code = e.exit_code();
                report.error = Some(error_json(&e));
            }
        }
        Err(e) => {
            report.exit_code = e.exit_code();
            report.error = Some(error_json(&e));
        }
    }
    if let Some(err) = &report.error {
        let _ = writeln!(table, "\nerror ({}): {}", err.kind, err.message);
    }
    let _ = writeln!(table, "\nverdict: {} (exit {})", report.verdict, report.exit_code);
    report.timings.total_ms = ms(start);
    RunOutcome {
        exit_code: report.exit_code,
        report,
        table,
    }
}

/// The report directory from [`REPORT_DIR_ENV`], if set and non-empty.
pub fn report_dir() -> Option<PathBuf> {
    std::env::var_os(REPORT_DIR_ENV)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
}

/// Write the JSON report and the table to the paths named in the config,
/// falling back to `dir` (usually [`report_dir`]). Returns the written paths.
pub fn write_outputs(outcome: &RunOutcome, dir: Option<PathBuf>) -> Result<Vec<PathBuf>, HarnessError> {
    let config = &outcome.report.config;
    let stem = format!(
        "{}-p{}-N{}-seed{}",
        outcome.report.command, config.p, config.n, config.seed
    );
    let explicit = config.output.clone().unwrap_or_default();
    let report_path = explicit
        .report
        .or_else(|| dir.as_ref().map(|d| d.join(format!("{stem}.json"))));
    let table_path = explicit
        .table
        .or_else(|| dir.as_ref().map(|d| d.join(format!("{stem}.txt"))));
    let mut written = Vec::new();
    for (path, body) in [
        (report_path, outcome.report.to_json() + "\n"),
        (table_path, outcome.table.clone()),
    ] {
        let Some(path) = path else { continue };
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            std::fs::create_dir_all(parent).map_err(|source| HarnessError::Io {
                path: parent.to_path_buf(),
                source,
            })?;
        }
        std::fs::write(&path, body).map_err(|source| HarnessError::Io {
            path: path.clone(),
            source,
        })?;
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{EXIT_CONFIG, EXIT_HYPOTHESIS, EXIT_SINGULAR};

    fn example_a(extra: &str) -> InstanceConfig {
        let diag = vec!["\"2\""; 14].join(",");
        let sub = vec!["\"1\""; 13].join(",");
        InstanceConfig::from_json(&format!(
            r#"{{"p":1,"N":14,"C":"0","window":6,{extra}"matrix":{{"kind":"explicit","bands":{{"0":[{diag}],"-1":[{sub}]}}}}}}"#
        ))
        .unwrap()
    }

    fn random(p: usize, seed: u64, nu: &str) -> InstanceConfig {
        let w = 2 * p;
        let n = crate::functionals::moment_budget(w, p) + 1;
        InstanceConfig::from_json(&format!(
            r#"{{"p":{p},"N":{n},"C":"1/2","seed":{seed},"window":{w},"matrix":{{"kind":"random"}},"nu":{{"kind":"{nu}"}}}}"#
        ))
        .unwrap()
    }

    #[test]
    fn verify_example_a_passes() {
        let out = run_command(Command::Verify, &example_a(""), None);
        assert_eq!(out.exit_code, EXIT_PASS, "{}", out.table);
        assert_eq!(out.report.verdict, "pass");
        assert!(out.table.contains("verdict: pass"));
    }

    #[test]
    fn verify_canonical_p2_exits_hypothesis() {
        let out = run_command(Command::Verify, &random(2, 3, "canonical"), None);
        assert_eq!(out.exit_code, EXIT_HYPOTHESIS);
        let err = out.report.error.unwrap();
        assert_eq!(err.witness.unwrap()["delta"], "0");
    }

    #[test]
    fn factorize_singular_shift_exits_three() {
        let mut c = example_a("");
        c.shift = "2".into();
        let out = run_command(Command::Factorize, &c, None);
        assert_eq!(out.exit_code, EXIT_SINGULAR);
        assert_eq!(out.report.error.unwrap().witness.unwrap()["singular_minor"], 1);
    }

    #[test]
    fn bad_window_is_config_error() {
        let mut c = example_a("");
        c.window = 12;
        assert_eq!(run_command(Command::Verify, &c, None).exit_code, EXIT_CONFIG);
        assert_eq!(
            run_command(Command::Transform, &example_a(""), Some(2)).exit_code,
            EXIT_CONFIG
        );
    }

    #[test]
    fn every_command_passes_on_random_instance() {
        for cmd in [
            Command::Gen,
            Command::Factorize,
            Command::Transform,
            Command::Polys,
            Command::Verify,
        ] {
            let out = run_command(cmd, &random(3, 9, "random"), None);
            assert_eq!(out.exit_code, EXIT_PASS, "{:?}\n{}", cmd, out.table);
        }
    }

    #[test]
    fn reports_are_reproducible() {
        let a = run_command(Command::Verify, &random(2, 42, "random"), None);
        let b = run_command(Command::Verify, &random(2, 42, "random"), None);
        assert_eq!(a.report.payload(), b.report.payload());
        assert_eq!(a.table, b.table);
    }

    #[test]
    fn outputs_land_in_directory() {
        let dir = tempfile::tempdir().unwrap();
        let out = run_command(Command::Gen, &example_a(""), None);
        let paths = write_outputs(&out, Some(dir.path().to_path_buf())).unwrap();
        assert_eq!(paths.len(), 2);
        let text = std::fs::read_to_string(&paths[0]).unwrap();
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["command"], "gen");
        assert_eq!(v["result"]["matrix"]["bands"]["0"][0], "2");
        assert!(write_outputs(&out, None).unwrap().is_empty());
    }
}
