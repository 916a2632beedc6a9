//! Batch front end: load a problem file or builtin fixture, run one command,
//! and render the result as text or JSON.

mod problem;

pub use problem::{ModuleSpec, Options, ProblemFile};

use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::filtration::{
    is_generalized_narita, ratliff_rush, reduction_number, vv_certify_cm, Filtration,
    DEFAULT_WINDOW,
};
use crate::harness::{
    self, fixture_with_bound, hilbert_json, num, oracle, reduction_json, rr_json, vv_json, Fixture,
    Verdict, VerificationReport, VerifyOptions,
};
use crate::module::GradedSubmodule;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Hilbert function, h-polynomial and Hilbert coefficients.
    Invariants,
    /// Ratliff-Rush closure compared level by level with the filtration.
    Rr,
    /// Minimal reduction, reduction number and the Valabrega-Valla check.
    Reduction,
    /// Whether e_2 = ... = e_d = 0 for the ideal on the ring.
    Narita,
    /// Length identities and Ratliff-Rush properties on every ideal and module.
    Identities,
    /// Every applicable verification driver.
    Verify,
    /// Linear-algebra lengths against lattice-point counting for monomial ideals.
    OracleCheck,
}

#[derive(Debug, Parser)]
#[command(
    name = "narita",
    version,
    about = "Hilbert coefficients and Ratliff-Rush closures of graded filtrations"
)]
pub struct Args {
    #[arg(value_enum)]
    pub command: Command,
    /// Problem file; omit when using --fixture.
    pub file: Option<PathBuf>,
    /// Use a builtin fixture (m4-square, rr-classic, quadric, hypersurface-3, parameters, ...).
    #[arg(long)]
    pub fixture: Option<String>,
    /// Ideal to filter by; defaults to the first one.
    #[arg(long)]
    pub ideal: Option<String>,
    /// Module to filter; `A` is the ring itself.
    #[arg(long, default_value = "A")]
    pub module: String,
    /// Working degree bound.
    #[arg(long)]
    pub bound: Option<i32>,
    /// Width of the window used for statements about all large n.
    #[arg(long)]
    pub window: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Largest power searched by the Valabrega-Valla power search.
    #[arg(long, default_value_t = 4)]
    pub max_power: usize,
    /// Emit JSON instead of text.
    #[arg(long)]
    pub json: bool,
}

/// Exit code for an error: 1 for a refuted claim, 2 for an exhausted bound,
/// 3 for bad input.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        _ if err.is_inconclusive() => 2,
        Error::Hypothesis(_) | Error::Internal(_) | Error::NotContained { .. } => 1,
        _ => 3,
    }
}

/// The rendered output and the process exit code.
pub struct Outcome {
    pub code: i32,
    pub output: String,
}

pub fn run(args: &Args) -> Outcome {
    match execute(args) {
        Ok((value, text, code)) => Outcome {
            code,
            output: if args.json {
                serde_json::to_string_pretty(&value).expect("serializable") + "\n"
            } else {
                text
            },
        },
        Err(e) => {
            let code = exit_code(&e);
            let output = if args.json {
                let v = json!({"error": e.to_string(), "exit_code": num(code)});
                serde_json::to_string_pretty(&v).expect("serializable") + "\n"
            } else {
                format!("error: {e}\n")
            };
            Outcome { code, output }
        }
    }
}

fn load(args: &Args) -> Result<(Fixture, Options)> {
    match (&args.file, &args.fixture) {
        (Some(_), Some(_)) => Err(Error::Input(
            "give a problem file or --fixture, not both".into(),
        )),
        (None, None) => Err(Error::Input("give a problem file or --fixture".into())),
        (None, Some(name)) => Ok((fixture_with_bound(name, args.bound)?, Options::default())),
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
            let problem = ProblemFile::parse(&text)?;
            let name = path
                .file_stem()
                .map_or("problem".into(), |s| s.to_string_lossy().into_owned());
            Ok((problem.build(&name, args.bound)?, problem.options))
        }
    }
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(", ")
}

fn execute(args: &Args) -> Result<(Value, String, i32)> {
    let (fixture, file_opts) = load(args)?;
    let opts = VerifyOptions {
        seed: args.seed.or(file_opts.seed).unwrap_or(0),
        max_power: args.max_power,
        window: args.window.or(file_opts.window).unwrap_or(DEFAULT_WINDOW),
    };
    let head = json!({
        "command": args.command.to_possible_value().expect("named").get_name(),
        "fixture": fixture.name,
        "seed": num(opts.seed),
        "window": num(opts.window),
        "bound": num(fixture.ring.degree_bound()),
    });
    let header = format!(
        "{} on {}",
        head["command"].as_str().unwrap_or(""),
        fixture.name
    );
    let with = |mut v: Value, extra: Value| {
        if let (Some(v), Some(e)) = (v.as_object_mut(), extra.as_object()) {
            for (k, x) in e {
                v.insert(k.clone(), x.clone());
            }
        }
        v
    };
    match args.command {
        Command::Verify | Command::Identities => {
            let reports = if args.command == Command::Verify {
                harness::verify_fixture(&fixture, &opts)?
            } else {
                vec![harness::verify_identity_suite(&fixture, &opts)?]
            };
            let code = worst(&reports).exit_code();
            let mut text = format!("{header}\n");
            for r in &reports {
                text += &format!("{} [{}]: {}\n", r.tag, r.module, r.verdict());
                for f in r.failures() {
                    text += &format!("  {f}\n");
                }
            }
            let list: Vec<Value> = reports.iter().map(VerificationReport::to_json).collect();
            Ok((with(head, json!({"reports": list})), text, code))
        }
        Command::OracleCheck => {
            let (v, text, ok) = oracle_check(&fixture)?;
            Ok((
                with(head, v),
                format!("{header}\n{text}"),
                if ok { 0 } else { 1 },
            ))
        }
        Command::Narita => {
            let ideal = fixture.get_ideal(args.ideal.as_deref())?;
            let (holds, hd) = is_generalized_narita(ideal)?;
            let text = format!(
                "{header}\ngeneralized narita: {holds}\nh = [{}]\ne = ({})\n",
                join(&hd.h),
                join(&hd.e[..=hd.dim])
            );
            let v = json!({"generalized_narita": holds, "hilbert": hilbert_json(&hd)});
            Ok((with(head, v), text, 0))
        }
        Command::Invariants | Command::Rr | Command::Reduction => {
            let ideal = fixture.get_ideal(args.ideal.as_deref())?;
            let module = fixture.get_module(&args.module)?;
            let f = Filtration::adic(ideal, &module.presentation)?.with_window(opts.window);
            let head = with(head, json!({"module": module.name}));
            match args.command {
                Command::Invariants => {
                    let hd = f.hilbert_data()?;
                    let mut text = format!(
                        "{header}\nh = [{}]\ne = ({})\n",
                        join(&hd.h),
                        join(&hd.e[..=hd.dim])
                    );
                    if hd.e.len() > hd.dim + 1 {
                        text += &format!("extended e = ({})\n", join(&hd.e[hd.dim + 1..]));
                    }
                    Ok((with(head, json!({"hilbert": hilbert_json(hd)})), text, 0))
                }
                Command::Rr => {
                    let rr = ratliff_rush(&f, opts.seed)?;
                    let mut text = format!("{header}\nn  length(F~_{{n+1}}/F_{{n+1}})\n");
                    for (n, l) in rr.differences.iter().enumerate() {
                        text += &format!("{n}  {l}\n");
                    }
                    let show = |o: Option<usize>| o.map_or("none".to_string(), |v| v.to_string());
                    text += &format!(
                        "end_h0 = {}\nc_I = {}\n",
                        show(rr.end_h0()),
                        show(rr.c_bound())
                    );
                    Ok((with(head, json!({"ratliff_rush": rr_json(&rr)})), text, 0))
                }
                _ => {
                    let cert = reduction_number(&f, opts.seed)?;
                    let vv = vv_certify_cm(&f, &cert)?;
                    let text = format!(
                        "{header}\nJ = ({})\nr = {}\nregular sequence: {}\nvalabrega-valla: {}\n",
                        cert.generators.join(", "),
                        cert.r,
                        cert.regular_sequence,
                        vv.holds
                    );
                    let v = json!({"reduction": reduction_json(&cert), "vv": vv_json(&vv)});
                    Ok((with(head, v), text, 0))
                }
            }
        }
    }
}

fn worst(reports: &[VerificationReport]) -> Verdict {
    let vs: Vec<Verdict> = reports.iter().map(VerificationReport::verdict).collect();
    [
        Verdict::Fail,
        Verdict::HypothesisNotMet,
        Verdict::Inconclusive,
    ]
    .into_iter()
    .find(|v| vs.contains(v))
    .unwrap_or(Verdict::Pass)
}

/// For every monomial ideal `I` of the fixture, compares `ℓ(A/I^n)` for
/// `n = 1, 2, 3` computed by linear algebra and by counting.
fn oracle_check(fixture: &Fixture) -> Result<(Value, String, bool)> {
    let ring = &fixture.ring;
    if oracle::monomial_generators(ring.relations(), ring).is_err() {
        return Err(Error::Input("the ring has non-monomial relations".into()));
    }
    let mut rows = Vec::new();
    let mut text = String::new();
    let mut all = true;
    for (name, ideal) in &fixture.ideals {
        let gens = ideal.polynomial_generators();
        if oracle::monomial_generators(&gens, ring).is_err() {
            continue;
        }
        for n in 1..=3usize {
            let power = ideal.power(n)?;
            let pgens = power.polynomial_generators();
            let counted = harness::monomial_oracle_length(ring, &pgens)?;
            let computed = GradedSubmodule::ideal(ring, pgens)?.colength()?;
            let agree = counted == computed;
            all &= agree;
            text += &format!("{name}^{n}: oracle {counted}, linear algebra {computed}\n");
            rows.push(json!({
                "ideal": name,
                "power": num(n),
                "oracle": num(counted),
                "linear_algebra": num(computed),
                "agree": agree,
            }));
        }
    }
    if rows.is_empty() {
        return Err(Error::Input("no monomial ideals to check".into()));
    }
    Ok((json!({"checks": rows, "all_agree": all}), text, all))
}
