//! Command-line surface: every pipeline stage behind a subcommand with a
//! JSON payload on stdin (or --input), a single-line JSON response on stdout
//! (or --output), deterministic output and stable error codes. Exit status:
//! 0 on success, 1 on domain errors, 2 on schema errors.

use std::io::Read;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::invariant::{are_e_equivalent, det_invariant, orbit_count, Cardinal};
use crate::json::*;
use crate::matrix::smith_normal_form;
use crate::module::{canonical_row, is_unimodular, module_from_relations, InvariantFactorModule};
use crate::nielsen::{are_nielsen_equivalent, nielsen_class_count, nielsen_classes};
use crate::normalize::normalize_row;
use crate::oracle::{enumerate_unimodular, orbit_partition, GeneratorSet, DEFAULT_BUDGET};

/// Default cap on expanded Nielsen move sequences.
pub const DEFAULT_EXPANSION_CAP: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CommandName {
    /// Smith normal form with transformation matrices.
    Snf,
    /// Invariant factor decomposition of a relation presentation.
    Decompose,
    /// Normalize a unimodular row to canonical form with a witness script.
    Normalize,
    /// Determinant invariant of a minimal-length row.
    Det,
    /// Decide elementary equivalence of two rows.
    Equiv,
    /// Decide Nielsen equivalence of two generating tuples (integer modules).
    NielsenEquiv,
    /// Count and represent equivalence classes.
    Classes,
    /// Brute-force orbit partition on a small finite module.
    Orbits,
    /// Run the built-in finite-fixture verification suite.
    Selftest,
}

#[derive(Debug, Parser)]
#[command(name = "unirow", about = "Exact normal forms and equivalence of unimodular rows")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: CommandName,
    /// Read the JSON payload from this file instead of stdin.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Write the JSON response to this file instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Include fully expanded L/I move sequences in Nielsen output.
    #[arg(long)]
    pub expand_moves: bool,
    /// State budget for enumeration and orbit search.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    /// Seed for the randomized portions of selftest.
    #[arg(long, default_value_t = 20240)]
    pub seed: u64,
}

/// Options decoupled from argument parsing so tests can drive commands
/// directly.
#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub expand_moves: bool,
    pub budget: u64,
    pub seed: u64,
    pub expansion_cap: u64,
}

impl Default for Options {
    fn default() -> Options {
        Options {
            expand_moves: false,
            budget: DEFAULT_BUDGET,
            seed: 20240,
            expansion_cap: DEFAULT_EXPANSION_CAP,
        }
    }
}

/// Runs one command on a parsed payload. The selftest command ignores the
/// payload.
pub fn run_command(command: CommandName, payload: &Value, opts: &Options) -> Result<Value> {
    match command {
        CommandName::Snf => cmd_snf(payload),
        CommandName::Decompose => cmd_decompose(payload),
        CommandName::Normalize => cmd_normalize(payload),
        CommandName::Det => cmd_det(payload),
        CommandName::Equiv => cmd_equiv(payload),
        CommandName::NielsenEquiv => cmd_nielsen_equiv(payload, opts),
        CommandName::Classes => cmd_classes(payload),
        CommandName::Orbits => cmd_orbits(payload, opts),
        CommandName::Selftest => selftest(opts),
    }
}

/// Runs one command on payload text, returning (exit status, response text).
/// The response is a single JSON line in both the success and error cases.
pub fn run_text(command: CommandName, payload_text: &str, opts: &Options) -> (i32, String) {
    let outcome = (|| {
        let payload = if command == CommandName::Selftest {
            Value::Null
        } else {
            parse_document(payload_text)?
        };
        run_command(command, &payload, opts)
    })();
    match outcome {
        Ok(v) => (0, v.to_string()),
        Err(e) => (e.exit_code(), error_to_json(&e).to_string()),
    }
}

/// Entry point for the binary: parses arguments, reads the payload, writes
/// the response, returns the exit status.
pub fn run(cli: Cli) -> i32 {
    let opts = Options {
        expand_moves: cli.expand_moves,
        budget: cli.budget,
        seed: cli.seed,
        expansion_cap: DEFAULT_EXPANSION_CAP,
    };
    let payload_text = if cli.command == CommandName::Selftest {
        String::new()
    } else {
        match &cli.input {
            Some(path) => match std::fs::read_to_string(path) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("{}", json!({"error": {"code": "SchemaError", "message": format!("cannot read {}: {}", path.display(), e)}}));
                    return 2;
                }
            },
            None => {
                let mut s = String::new();
                if std::io::stdin().read_to_string(&mut s).is_err() {
                    eprintln!("{}", json!({"error": {"code": "SchemaError", "message": "cannot read stdin"}}));
                    return 2;
                }
                s
            }
        }
    };
    let (status, response) = run_text(cli.command, &payload_text, &opts);
    match &cli.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, format!("{}\n", response)) {
                eprintln!("cannot write {}: {}", path.display(), e);
                return 2;
            }
        }
        None => println!("{}", response),
    }
    status
}

// ---------------------------------------------------------------------------
// payload helpers

fn field<'a>(payload: &'a Value, key: &str) -> Result<&'a Value> {
    payload
        .get(key)
        .ok_or_else(|| Error::Schema(format!("payload is missing field \"{}\"", key)))
}

fn field_usize(payload: &Value, key: &str) -> Result<usize> {
    field(payload, key)?
        .as_u64()
        .map(|v| v as usize)
        .ok_or_else(|| Error::Schema(format!("field \"{}\" must be a nonnegative integer", key)))
}

fn module_field(payload: &Value) -> Result<InvariantFactorModule> {
    // "module" preferred; "group" accepted as an alias for integer modules
    let v = payload
        .get("module")
        .or_else(|| payload.get("group"))
        .ok_or_else(|| Error::Schema("payload is missing field \"module\"".into()))?;
    module_from_json(v)
}

// ---------------------------------------------------------------------------
// commands

fn cmd_snf(payload: &Value) -> Result<Value> {
    let ring = ring_from_json(field(payload, "ring")?)?;
    let a = matrix_from_json(field(payload, "matrix")?, &ring)?;
    let (p, d, q) = smith_normal_form(&a)?;
    Ok(json!({
        "d": matrix_to_json(&d),
        "p": matrix_to_json(&p),
        "q": matrix_to_json(&q),
    }))
}

fn cmd_decompose(payload: &Value) -> Result<Value> {
    let ring = ring_from_json(field(payload, "ring")?)?;
    let relations = matrix_from_json(field(payload, "relations")?, &ring)?;
    let (module, basis) = module_from_relations(&relations)?;
    Ok(json!({
        "module": module_to_json(&module),
        "change_of_basis": matrix_to_json(&basis),
    }))
}

fn cmd_normalize(payload: &Value) -> Result<Value> {
    let m = module_field(payload)?;
    let row = row_from_json(field(payload, "row")?, &m)?;
    let result = normalize_row(&row)?;
    Ok(normalization_to_json(&result))
}

fn cmd_det(payload: &Value) -> Result<Value> {
    let m = module_field(payload)?;
    let row = row_from_json(field(payload, "row")?, &m)?;
    let d = det_invariant(&m, &row)?;
    Ok(det_invariant_to_json(&d))
}

fn cmd_equiv(payload: &Value) -> Result<Value> {
    let m = module_field(payload)?;
    let row_a = row_from_json(field(payload, "row_a")?, &m)?;
    let row_b = row_from_json(field(payload, "row_b")?, &m)?;
    let (verdict, witness) = are_e_equivalent(&row_a, &row_b)?;
    let mut out = json!({"equivalent": verdict});
    if row_a.len() == m.rank() {
        out["det_a"] = det_invariant_to_json(&det_invariant(&m, &row_a)?);
        out["det_b"] = det_invariant_to_json(&det_invariant(&m, &row_b)?);
    }
    if let Some(w) = witness {
        out["witness"] = script_to_json(&w);
    }
    Ok(out)
}

fn cmd_nielsen_equiv(payload: &Value, opts: &Options) -> Result<Value> {
    let m = module_field(payload)?;
    let row_a = row_from_json(field(payload, "row_a")?, &m)?;
    let row_b = row_from_json(field(payload, "row_b")?, &m)?;
    let (verdict, witness) = are_nielsen_equivalent(&row_a, &row_b)?;
    let mut out = json!({"equivalent": verdict});
    if let Some(w) = witness {
        out["witness"] = nielsen_witness_to_json(&w);
        if opts.expand_moves {
            out["moves"] = moves_to_json(&w.expand(opts.expansion_cap)?);
        }
    }
    Ok(out)
}

fn cmd_classes(payload: &Value) -> Result<Value> {
    let m = module_field(payload)?;
    let n = field_usize(payload, "n")?;
    let notion = field(payload, "notion")?
        .as_str()
        .ok_or_else(|| Error::Schema("field \"notion\" must be a string".into()))?;
    match notion {
        "elementary" => {
            let count = match orbit_count(&m, n)? {
                Cardinal::Finite(c) => c,
                Cardinal::Infinite => {
                    return Err(Error::Unsupported("infinite class count".into()))
                }
            };
            let reps = crate::invariant::unit_class_representatives(&m)?;
            let representatives: Vec<Value> = if n > m.rank() || m.rank() == 0 {
                vec![row_to_json(&canonical_row(&m, &m.ring().one(), n)?)]
            } else {
                reps.iter()
                    .map(|d| Ok(row_to_json(&canonical_row(&m, d, n)?)))
                    .collect::<Result<_>>()?
            };
            Ok(json!({
                "count": count.to_string(),
                "representatives": representatives,
            }))
        }
        "nielsen" => {
            let report = nielsen_classes(&m, n)?;
            Ok(json!({
                "count": report.class_count.to_string(),
                "representatives": report.representatives.iter().map(row_to_json).collect::<Vec<_>>(),
            }))
        }
        other => Err(Error::Schema(format!(
            "unknown notion \"{}\" (expected \"elementary\" or \"nielsen\")",
            other
        ))),
    }
}

fn cmd_orbits(payload: &Value, opts: &Options) -> Result<Value> {
    let m = module_field(payload)?;
    let n = field_usize(payload, "n")?;
    let generators = field(payload, "generators")?
        .as_str()
        .ok_or_else(|| Error::Schema("field \"generators\" must be a string".into()))?;
    let set = match generators {
        "elementary" => GeneratorSet::Elementary,
        "nielsen" => GeneratorSet::Nielsen,
        other => {
            return Err(Error::Schema(format!(
                "unknown generator set \"{}\" (expected \"elementary\" or \"nielsen\")",
                other
            )))
        }
    };
    let partition = orbit_partition(&m, n, set, opts.budget)?;
    Ok(partition_to_json(&partition))
}

// ---------------------------------------------------------------------------
// selftest

/// Finite fixtures: invariant factor chains over the integers, each with at
/// most 512 elements.
pub fn integer_fixtures() -> Vec<InvariantFactorModule> {
    [
        vec![5, 5],
        vec![2, 4],
        vec![3, 9],
        vec![2, 2, 4],
        vec![6],
        vec![8],
    ]
    .iter()
    .map(|ds| InvariantFactorModule::cyclic_factors(ds).expect("fixture"))
    .collect()
}

fn check(ok: bool, what: &str, failures: &mut Vec<String>) {
    if !ok {
        failures.push(what.to_string());
    }
}

/// The built-in verification suite: cross-validates the constructive
/// pipeline against the brute-force oracle on every finite fixture.
fn selftest(opts: &Options) -> Result<Value> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut failures: Vec<String> = Vec::new();
    let mut checks = 0usize;

    for m in integer_fixtures() {
        let k = m.rank();
        let label = m
            .factors()
            .iter()
            .map(|f| f.generator().to_string())
            .collect::<Vec<_>>()
            .join("x");
        for n in [k, k + 1] {
            let rows = enumerate_unimodular(&m, n, opts.budget)?;
            // normalization replay on every unimodular row
            for row in &rows {
                let res = normalize_row(row)?;
                checks += 1;
                check(
                    row.apply_script(&res.script)? == res.canonical,
                    &format!("replay mismatch on {} at n={}", label, n),
                    &mut failures,
                );
                if n > k {
                    check(
                        res.delta.is_one(),
                        &format!("delta != 1 for n > k on {} at n={}", label, n),
                        &mut failures,
                    );
                }
            }
            // class counts against the oracle
            let elem = orbit_partition(&m, n, GeneratorSet::Elementary, opts.budget)?;
            let expected = match orbit_count(&m, n)? {
                Cardinal::Finite(c) => c,
                Cardinal::Infinite => unreachable!("finite fixture"),
            };
            checks += 1;
            check(
                BigInt::from(elem.classes.len()) == expected,
                &format!("elementary class count on {} at n={}", label, n),
                &mut failures,
            );
            let niel = orbit_partition(&m, n, GeneratorSet::Nielsen, opts.budget)?;
            checks += 1;
            check(
                BigInt::from(niel.classes.len()) == nielsen_class_count(&m, n)?,
                &format!("nielsen class count on {} at n={}", label, n),
                &mut failures,
            );
            // witness replay on random equivalent pairs
            if !rows.is_empty() {
                for _ in 0..20 {
                    let a = &rows[rng.gen_range(0..rows.len())];
                    let b = &rows[rng.gen_range(0..rows.len())];
                    let (verdict, witness) = are_e_equivalent(a, b)?;
                    checks += 1;
                    match witness {
                        Some(w) => check(
                            verdict && a.apply_script(&w)? == *b,
                            &format!("elementary witness replay on {} at n={}", label, n),
                            &mut failures,
                        ),
                        None => check(
                            !verdict,
                            &format!("missing witness on {} at n={}", label, n),
                            &mut failures,
                        ),
                    }
                    let (nverdict, nwitness) = are_nielsen_equivalent(a, b)?;
                    checks += 1;
                    match nwitness {
                        Some(w) => {
                            let moves = w.expand(opts.expansion_cap)?;
                            check(
                                nverdict && moves.replay(a)? == *b,
                                &format!("nielsen witness replay on {} at n={}", label, n),
                                &mut failures,
                            );
                        }
                        None => check(
                            !nverdict,
                            &format!("missing nielsen witness on {} at n={}", label, n),
                            &mut failures,
                        ),
                    }
                }
            }
        }
        // determinant invariant constant within and distinct across classes
        let part = orbit_partition(&m, k, GeneratorSet::Elementary, opts.budget)?;
        let mut class_values = Vec::new();
        for class in &part.classes {
            let d0 = det_invariant(&m, &class[0])?;
            for row in class {
                checks += 1;
                check(
                    det_invariant(&m, row)? == d0,
                    &format!("det not constant within a class on {}", label),
                    &mut failures,
                );
            }
            class_values.push(d0.value);
        }
        class_values.sort_by_key(|v| v.to_string());
        let before = class_values.len();
        class_values.dedup();
        checks += 1;
        check(
            class_values.len() == before,
            &format!("det not injective across classes on {}", label),
            &mut failures,
        );
        // unimodularity agreement between pipeline and closure oracle
        let all = enumerate_unimodular(&m, k, opts.budget)?;
        for row in all.iter().take(50) {
            checks += 1;
            check(
                is_unimodular(row)?,
                &format!("pipeline rejects an oracle-unimodular row on {}", label),
                &mut failures,
            );
        }
    }

    if failures.is_empty() {
        Ok(json!({"status": "ok", "checks": checks}))
    } else {
        failures.sort();
        failures.dedup();
        Err(Error::Unsupported(format!("selftest failures: {}", failures.join("; "))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_ok(command: CommandName, payload: &str) -> Value {
        let (status, out) = run_text(command, payload, &Options::default());
        assert_eq!(status, 0, "unexpected failure: {}", out);
        serde_json::from_str(&out).unwrap()
    }

    #[test]
    fn snf_command_reports_transforms() {
        let out = run_ok(
            CommandName::Snf,
            r#"{"ring":{"kind":"Z"},"matrix":[["2","4"],["6","8"]]}"#,
        );
        assert_eq!(out["d"], serde_json::json!([["2", "0"], ["0", "4"]]));
    }

    #[test]
    fn classes_command_matches_the_totient_formula() {
        let out = run_ok(
            CommandName::Classes,
            r#"{"group":{"ring":{"kind":"Z"},"factors":["5","5"]},"n":2,"notion":"nielsen"}"#,
        );
        assert_eq!(out["count"], serde_json::json!("2"));
    }

    #[test]
    fn equiv_command_reports_both_determinants() {
        let out = run_ok(
            CommandName::Equiv,
            r#"{"module":{"ring":{"kind":"Z"},"factors":["5","5"]},
                "row_a":[["1","0"],["0","1"]],"row_b":[["2","0"],["0","1"]]}"#,
        );
        assert_eq!(out["equivalent"], serde_json::json!(false));
        assert_eq!(out["det_a"]["value"], serde_json::json!("1"));
        assert_eq!(out["det_b"]["value"], serde_json::json!("2"));
    }

    #[test]
    fn schema_errors_exit_with_status_two() {
        let (status, out) = run_text(CommandName::Snf, "{", &Options::default());
        assert_eq!(status, 2);
        assert!(out.contains("SchemaError"));
        let (status, out) =
            run_text(CommandName::Normalize, r#"{"module":{"ring":{"kind":"Z"},"factors":["5"]}}"#, &Options::default());
        assert_eq!(status, 2);
        assert!(out.contains("missing field"));
    }

    #[test]
    fn domain_errors_exit_with_status_one() {
        let (status, out) = run_text(
            CommandName::Normalize,
            r#"{"module":{"ring":{"kind":"Z"},"factors":["5","5"]},
                "row":[["5","0"],["0","1"]]}"#,
            &Options::default(),
        );
        assert_eq!(status, 1);
        assert!(out.contains("NotUnimodular"));
    }

    #[test]
    fn output_is_deterministic() {
        let payload = r#"{"module":{"ring":{"kind":"Z"},"factors":["3","9"]},
            "row":[["2","7"],["1","3"]]}"#;
        let (s1, o1) = run_text(CommandName::Normalize, payload, &Options::default());
        let (s2, o2) = run_text(CommandName::Normalize, payload, &Options::default());
        assert_eq!((s1, &o1), (s2, &o2));
        assert_eq!(s1, 0);
    }

    #[test]
    fn orbits_command_over_a_product_ring() {
        let out = run_ok(
            CommandName::Orbits,
            r#"{"module":{"ring":{"kind":"product","factors":[{"kind":"Z"},{"kind":"Z"}]},
                "factors":[["2","3"]]},"n":2,"generators":"elementary"}"#,
        );
        assert_eq!(out["class_count"], serde_json::json!(1));
    }

    #[test]
    fn expand_moves_flag_adds_explicit_moves() {
        let opts = Options { expand_moves: true, ..Options::default() };
        let (status, out) = run_text(
            CommandName::NielsenEquiv,
            r#"{"module":{"ring":{"kind":"Z"},"factors":["8"]},
                "row_a":[["3"]],"row_b":[["5"]]}"#,
            &opts,
        );
        assert_eq!(status, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["equivalent"], serde_json::json!(true));
        assert!(v["moves"].is_array());
    }
}
