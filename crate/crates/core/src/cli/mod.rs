//! Command-line driver.
//!
//! Exit codes: 0 success, 1 parse or validation error, 2 mathematical
//! precondition violated, 3 internal consistency failure.

mod spec;

pub use spec::{
    catalog, catalog_names, GroupSpec, LatticeSpec, Problem, ProblemSpec, EXTENSION_NAMES,
};

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::cohomology::{h0, h1, h2_bar, sha_omega};
use crate::error::Error;
use crate::flasque::{
    coflasque_resolution, extension_class, flasque_resolution, is_coflasque, is_flasque, is_split,
    LatticeExtension,
};
use crate::invariants::{
    brauer_homogeneous_space, brauer_torus_compactification, verify_resolution_chain,
    InvariantReport,
};
use crate::lattice::GLattice;
use crate::linalg::{bigint_json, AbelianGroupStructure, IntMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn validation(message: String) -> Self {
        CliError { code: 1, message }
    }

    pub fn from_error(location: &str, e: &Error) -> Self {
        CliError {
            code: exit_code(e),
            message: format!("{location}: {e}"),
        }
    }
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Internal(_) | Error::RouteDisagreement(_) => 3,
        Error::DimensionMismatch(_)
        | Error::NotBijective { .. }
        | Error::InvalidGroup(_)
        | Error::NotASubgroup(_)
        | Error::GroupMismatch
        | Error::DependentColumns => 1,
        _ => 2,
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "flasque-lab",
    version,
    about = "Cohomology of finite groups on lattices, flasque resolutions and Brauer invariants"
)]
struct Cli {
    /// Print a JSON document instead of the human summary.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Input {
    /// Input document, or `-` for standard input.
    #[arg(value_name = "FILE")]
    file: Option<PathBuf>,
    /// Use a built-in catalog entry instead of a file.
    #[arg(long, value_name = "NAME", conflicts_with = "file")]
    catalog: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Flasque,
    Coflasque,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// H^0, H^1 or H^2 of the group with coefficients in the lattice.
    Cohomology {
        #[arg(long, value_parser = clap::value_parser!(u32).range(0..=2))]
        degree: u32,
        #[command(flatten)]
        input: Input,
    },
    /// Classes restricting to zero on every cyclic subgroup, in degree 1 or 2.
    ShaOmega {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=2))]
        degree: u32,
        #[command(flatten)]
        input: Input,
    },
    /// Tests H^1(H, M°) = 0 for every subgroup H.
    FlasqueCheck {
        #[command(flatten)]
        input: Input,
    },
    /// Tests H^1(H, M) = 0 for every subgroup H.
    CoflasqueCheck {
        #[command(flatten)]
        input: Input,
    },
    /// Flasque resolution 0 -> M -> P -> F -> 0 or coflasque resolution 0 -> C -> P -> M -> 0.
    Resolve {
        #[arg(long, value_enum)]
        kind: Kind,
        #[command(flatten)]
        input: Input,
    },
    /// Unramified Brauer group of a torus with character lattice M.
    BrauerTorus {
        #[command(flatten)]
        input: Input,
    },
    /// Algebraic Brauer group of a homogeneous space with torus character lattice M.
    BrauerHomspace {
        #[command(flatten)]
        input: Input,
    },
    /// Whether the surjection `map` from `lattice` onto `target` splits.
    SplitCheck {
        #[command(flatten)]
        input: Input,
    },
    /// Cross-checks all routes for 0 -> Q -> P -> T -> 0 given by a surjection `map`
    /// from a permutation lattice `lattice` onto `target`.
    Chain {
        #[command(flatten)]
        input: Input,
    },
    /// Prints a catalog entry as an input document, or lists the entries.
    Catalog {
        #[arg(long)]
        name: Option<String>,
    },
}

struct Output {
    human: String,
    json: Value,
}

/// Runs the command line `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match execute(&cli.command, stdin) {
        Ok(output) => {
            let text = if cli.json {
                serde_json::to_string_pretty(&output.json).expect("values serialize")
            } else {
                output.human
            };
            let _ = writeln!(out, "{}", text.trim_end());
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

fn load(input: &Input, stdin: &mut dyn Read) -> Result<Problem, CliError> {
    let spec = match (&input.file, &input.catalog) {
        (_, Some(name)) => catalog(name).map_err(|e| CliError::from_error("--catalog", &e))?,
        (Some(path), None) => {
            let mut text = String::new();
            let read = if path.as_os_str() == "-" {
                stdin.read_to_string(&mut text)
            } else {
                std::fs::File::open(path).and_then(|mut f| f.read_to_string(&mut text))
            };
            read.map_err(|e| CliError::validation(format!("{}: {e}", path.display())))?;
            ProblemSpec::parse(&text)?
        }
        (None, None) => {
            return Err(CliError::validation(
                "no input: give a FILE, `-`, or --catalog NAME".into(),
            ))
        }
    };
    spec.build()
}

fn lib<T>(what: &str, r: crate::error::Result<T>) -> Result<T, CliError> {
    r.map_err(|e| CliError::from_error(what, &e))
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("values serialize")
}

fn matrix_json(m: &IntMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(bigint_json).collect()))
            .collect(),
    )
}

fn lattice_json(m: &GLattice) -> Result<Value, CliError> {
    Ok(to_value(&lib("lattice", LatticeSpec::from_lattice(m))?))
}

/// `base` with the `invariant_factors` and `free_rank` of `s` added.
fn with_structure(mut base: Map<String, Value>, s: &AbelianGroupStructure) -> Value {
    if let Value::Object(fields) = to_value(s) {
        base.extend(fields);
    }
    base.insert("structure".into(), Value::from(s.to_string()));
    Value::Object(base)
}

fn object(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => unreachable!("json! object literal"),
    }
}

fn context(p: &Problem) -> String {
    format!(
        "group of order {}, lattice of rank {}",
        p.group.order(),
        p.lattice.rank()
    )
}

fn require_map(p: &Problem) -> Result<LatticeExtension, CliError> {
    let map = p.map.clone().ok_or_else(|| {
        CliError::validation("input: this command needs `target` and `map`".into())
    })?;
    lib("map", LatticeExtension::from_surjection(map))
}

fn execute(command: &Command, stdin: &mut dyn Read) -> Result<Output, CliError> {
    match command {
        Command::Catalog { name } => Ok(catalog_output(name.as_deref())?),
        Command::Cohomology { degree, input } => {
            let p = load(input, stdin)?;
            let s = match degree {
                0 => h0(&p.lattice).structure().clone(),
                1 => h1(&p.lattice).structure().clone(),
                _ => lib("cohomology", h2_bar(&p.lattice))?.structure().clone(),
            };
            Ok(Output {
                human: format!("H^{degree}(G, M) = {s}\n({})", context(&p)),
                json: with_structure(
                    object(json!({"command": "cohomology", "degree": degree})),
                    &s,
                ),
            })
        }
        Command::ShaOmega { degree, input } => {
            let p = load(input, stdin)?;
            let s = lib("sha-omega", sha_omega(*degree, &p.lattice))?;
            Ok(Output {
                human: format!("Sha^{degree}_omega(G, M) = {s}\n({})", context(&p)),
                json: with_structure(
                    object(json!({"command": "sha-omega", "degree": degree})),
                    &s,
                ),
            })
        }
        Command::FlasqueCheck { input } | Command::CoflasqueCheck { input } => {
            let p = load(input, stdin)?;
            let flasque = matches!(command, Command::FlasqueCheck { .. });
            let (holds, cert) = if flasque {
                is_flasque(&p.lattice)
            } else {
                is_coflasque(&p.lattice)
            };
            let (name, coeff) = if flasque {
                ("flasque", "M°")
            } else {
                ("coflasque", "M")
            };
            let mut human = format!("{name}: {holds}\n");
            for e in &cert.entries {
                human.push_str(&format!(
                    "  H^1(H, {coeff}) = {} for H = {:?}\n",
                    e.h1, e.subgroup
                ));
            }
            Ok(Output {
                human,
                json: json!({"command": format!("{name}-check"), name: holds, "certificate": to_value(&cert)}),
            })
        }
        Command::Resolve { kind, input } => {
            let p = load(input, stdin)?;
            resolve_output(*kind, &p)
        }
        Command::BrauerTorus { input } => {
            let p = load(input, stdin)?;
            Ok(report_output(
                "brauer-torus",
                &lib("brauer-torus", brauer_torus_compactification(&p.lattice))?,
            ))
        }
        Command::BrauerHomspace { input } => {
            let p = load(input, stdin)?;
            Ok(report_output(
                "brauer-homspace",
                &lib("brauer-homspace", brauer_homogeneous_space(&p.lattice))?,
            ))
        }
        Command::Chain { input } => {
            let p = load(input, stdin)?;
            let map = p.map.as_ref().ok_or_else(|| {
                CliError::validation("input: this command needs `target` and `map`".into())
            })?;
            let report = lib(
                "chain",
                verify_resolution_chain(map.target(), map.source(), map),
            )?;
            Ok(report_output("chain", &report))
        }
        Command::SplitCheck { input } => {
            let p = load(input, stdin)?;
            let ext = require_map(&p)?;
            let section = lib("split-check", is_split(&ext))?;
            let (group, class) = lib("split-check", extension_class(&ext))?;
            let ext1 = group.structure().clone();
            let class_text: Vec<String> = class.iter().map(|x| x.to_string()).collect();
            let human = format!(
                "split: {}\nkernel rank {}, Ext^1 = {ext1}, class coordinates [{}]",
                section.is_some(),
                ext.sub().rank(),
                class_text.join(", ")
            );
            let mut base = object(json!({
                "command": "split-check",
                "split": section.is_some(),
                "kernel": lattice_json(ext.sub())?,
                "class": Value::Array(class.iter().map(bigint_json).collect()),
            }));
            if let Some(s) = &section {
                base.insert("section".into(), matrix_json(s.matrix()));
            }
            Ok(Output {
                human,
                json: with_structure(base, &ext1),
            })
        }
    }
}

fn catalog_output(name: Option<&str>) -> Result<Output, CliError> {
    match name {
        Some(name) => {
            let spec = catalog(name).map_err(|e| CliError::validation(e.to_string()))?;
            Ok(Output {
                human: spec.to_json(),
                json: to_value(&spec),
            })
        }
        None => {
            let names = catalog_names();
            Ok(Output {
                human: names.join("\n"),
                json: json!({"command": "catalog", "entries": names}),
            })
        }
    }
}

fn resolve_output(kind: Kind, p: &Problem) -> Result<Output, CliError> {
    let (ext, certificate, orbits, h1_target) = match kind {
        Kind::Flasque => {
            let res = lib("resolve", flasque_resolution(&p.lattice))?;
            let h = h1(res.flasque()).structure().clone();
            (
                res.extension,
                to_value(&res.flasque_certificate),
                to_value(&res.permutation_certificate),
                h,
            )
        }
        Kind::Coflasque => {
            let ext = lib("resolve", coflasque_resolution(&p.lattice))?;
            let (_, cert) = is_coflasque(ext.sub());
            let orbits = to_value(&ext.middle().permutation_certificate());
            let h = h1(ext.sub()).structure().clone();
            (ext, to_value(&cert), orbits, h)
        }
    };
    let (name, end) = match kind {
        Kind::Flasque => (
            "flasque",
            format!(
                "0 -> M -> P -> F -> 0 with ranks {}, {}, {}",
                ext.sub().rank(),
                ext.middle().rank(),
                ext.quotient().rank()
            ),
        ),
        Kind::Coflasque => (
            "coflasque",
            format!(
                "0 -> C -> P -> M -> 0 with ranks {}, {}, {}",
                ext.sub().rank(),
                ext.middle().rank(),
                ext.quotient().rank()
            ),
        ),
    };
    let summands: Vec<String> = ext
        .middle()
        .permutation_certificate()
        .map(|c| {
            c.orbits
                .iter()
                .map(|o| format!("Z[G/H], |H| = {}", o.stabilizer.len()))
                .collect()
        })
        .unwrap_or_default();
    let last = if kind == Kind::Flasque { "F" } else { "C" };
    let human = format!(
        "{name} resolution: {end}\nP = {}\nH^1(G, {last}) = {h1_target}",
        if summands.is_empty() {
            "0".to_string()
        } else {
            summands.join(" + ")
        }
    );
    let base = object(json!({
        "command": "resolve",
        "kind": name,
        "sub": lattice_json(ext.sub())?,
        "middle": lattice_json(ext.middle())?,
        "quotient": lattice_json(ext.quotient())?,
        "inject": matrix_json(ext.inject().matrix()),
        "project": matrix_json(ext.project().matrix()),
        "permutation_certificate": orbits,
        "certificate": certificate,
    }));
    Ok(Output {
        human,
        json: with_structure(base, &h1_target),
    })
}

fn report_output(command: &str, r: &InvariantReport) -> Output {
    let mut human = format!("{}\nBrauer quotient = {}\n", r.input, r.brauer_quotient);
    for (route, s) in &r.routes {
        human.push_str(&format!("  {route} = {s}\n"));
    }
    human.push_str(&format!("consistent: {}\n", r.consistent));
    for note in &r.annotations {
        human.push_str(&format!("note: {note}\n"));
    }
    let mut base = object(to_value(r));
    base.insert("command".into(), Value::from(command));
    Output {
        human,
        json: with_structure(base, &r.brauer_quotient),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut args_full = vec!["flasque-lab"];
        args_full.extend_from_slice(args);
        let code = run(args_full, &mut std::io::empty(), &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    fn json_of(args: &[&str]) -> Value {
        let (code, out, err) = run_args(args);
        assert_eq!(code, 0, "{err}");
        serde_json::from_str(&out).unwrap()
    }

    #[test]
    fn cohomology_of_trivial_c2() {
        let v = json_of(&[
            "cohomology",
            "--degree",
            "1",
            "--catalog",
            "trivial-C2-rank1",
            "--json",
        ]);
        assert_eq!(v["invariant_factors"], json!([]));
        assert_eq!(v["free_rank"], json!(0));
    }

    #[test]
    fn regular_s3_is_flasque() {
        let v = json_of(&["flasque-check", "--catalog", "regular-S3", "--json"]);
        assert_eq!(v["flasque"], json!(true));
    }

    #[test]
    fn reports_carry_routes() {
        let v = json_of(&[
            "brauer-torus",
            "--catalog",
            "norm-one-biquadratic",
            "--json",
        ]);
        assert_eq!(v["invariant_factors"], json!([2]));
        assert_eq!(v["consistent"], json!(true));
        assert!(v["routes"].as_object().unwrap().len() >= 2);
    }

    #[test]
    fn split_check_on_the_sign_extension() {
        let v = json_of(&["split-check", "--catalog", "extension-sign-C2", "--json"]);
        assert_eq!(v["split"], json!(false));
        let v = json_of(&["split-check", "--catalog", "extension-split-C2", "--json"]);
        assert_eq!(v["split"], json!(true));
    }

    #[test]
    fn usage_and_lookup_errors() {
        assert_eq!(
            run_args(&["cohomology", "--degree", "3", "--catalog", "sign-C2"]).0,
            1
        );
        assert_eq!(run_args(&["cohomology", "--degree", "1"]).0, 1);
        let (code, _, err) = run_args(&["catalog", "--name", "nope"]);
        assert_eq!(code, 1);
        assert!(err.contains("sign-C2"));
        assert_eq!(run_args(&["--help"]).0, 0);
    }

    #[test]
    fn human_output_is_readable() {
        let (code, out, _) = run_args(&[
            "sha-omega",
            "--degree",
            "2",
            "--catalog",
            "norm-one-biquadratic",
        ]);
        assert_eq!(code, 0);
        assert!(out.starts_with("Sha^2_omega(G, M) = Z/2"), "{out}");
        let (_, out, _) = run_args(&["resolve", "--kind", "coflasque", "--catalog", "sign-C2"]);
        assert!(out.contains("Z[G/H], |H| = 1"), "{out}");
    }
}
