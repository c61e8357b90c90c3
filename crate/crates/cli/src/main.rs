use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use accum_core::certificate::{self, Certificate};
use accum_core::constructors::{self, Split};
use accum_core::engine::{merge_columns, profile_with_cap, sample_profile, DEFAULT_CAP};
use accum_core::lab::{self, Epsilon, Flavor, Generator, PrefixSequence, Scheme, DEFAULT_TAIL};
use accum_core::{Error, InfinitudeRelation, Rat, StepSequence, ValueMatrix};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "accum", version, about = "Exact multiplicity profiles of step-sequence spans")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a space with a prescribed profile and certify it.
    Construct {
        #[command(subcommand)]
        kind: Construct,
        /// Where to write the constructed artifact.
        #[arg(long, global = true)]
        out: Option<PathBuf>,
        /// Where to write the certificate (stdout when absent).
        #[arg(long, global = true)]
        cert: Option<PathBuf>,
    },
    /// Exact profile of a value matrix.
    Profile {
        matrix: PathBuf,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        /// Estimate by sampling this many random directions instead.
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Coordinate bound for sampled directions.
        #[arg(long, default_value_t = 5)]
        bound: i64,
        /// Also write a certificate (exact mode only).
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Find a combination whose multiplicity leaves [n, n+d].
    Refute {
        matrix: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        /// Write the certificate here instead of stdout.
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Find a combination of two sequences avoiding the forbidden counts.
    Escape {
        /// JSON object with "x", "y" and an optional "relation".
        pair: PathBuf,
        /// Comma-separated forbidden accumulation-point counts.
        #[arg(long, value_delimiter = ',')]
        forbidden: Vec<usize>,
        /// Write the certificate here instead of stdout.
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Sample a generator prefix and estimate its cluster points.
    Sample {
        /// `constant:V`, `fq:Q`, `rich:Q`, `combo:D1,D2:Q1,Q2`,
        /// `spaceable:A1,A2:NMAX:KMAX[:FLAVOR]` or a JSON object.
        generator: String,
        #[arg(long, default_value_t = 1 << 16)]
        len: u64,
        /// Absolute merge radius (relative 1e-6 of the largest value when absent).
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_TAIL)]
        tail: f64,
        #[arg(long, value_enum, default_value_t = SchemeArg::Dyadic)]
        scheme: SchemeArg,
        /// Write the prefix as CSV here.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Write exact rationals rather than floats in the CSV.
        #[arg(long)]
        exact: bool,
    },
    /// Re-run a certificate and compare transcripts.
    Verify { certificate: PathBuf },
}

#[derive(Subcommand)]
enum Construct {
    Interval {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
    },
    Odd {
        #[arg(long)]
        k: usize,
    },
    Polygon {
        #[arg(long)]
        n: usize,
    },
    Independent {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        split: u8,
    },
    Spaceable {
        #[arg(long)]
        n_max: usize,
        #[arg(long)]
        k_max: usize,
        #[arg(long, value_enum, default_value_t = FlavorArg::Dyadic)]
        flavor: FlavorArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FlavorArg {
    Dyadic,
    RationalDense,
}

impl From<FlavorArg> for Flavor {
    fn from(f: FlavorArg) -> Flavor {
        match f {
            FlavorArg::Dyadic => Flavor::Dyadic,
            FlavorArg::RationalDense => Flavor::RationalDense,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Dyadic,
    Pairing,
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Scheme {
        match s {
            SchemeArg::Dyadic => Scheme::DyadicValuation,
            SchemeArg::Pairing => Scheme::Pairing,
        }
    }
}

/// Outcome of a command that ran to completion.
enum Verdict {
    Ok,
    ClaimFails,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Verdict::Ok) => ExitCode::SUCCESS,
        Ok(Verdict::ClaimFails) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{}", json!({ "error": e.code(), "message": e.to_string() }));
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::TooLarge { .. } => 3,
        _ => 2,
    }
}

fn run(cmd: Command) -> Result<Verdict, Error> {
    match cmd {
        Command::Construct { kind, out, cert } => construct(kind, out.as_deref(), cert.as_deref()),
        Command::Profile {
            matrix,
            cap,
            sample,
            seed,
            bound,
            cert,
        } => profile(&matrix, cap, sample, seed, bound, cert.as_deref()),
        Command::Refute { matrix, n, d, cert } => {
            let m: ValueMatrix = read_json(&matrix)?;
            emit_certificate(&certificate::refute_certificate(&m, n, d)?, cert.as_deref())
        }
        Command::Escape { pair, forbidden, cert } => escape(&pair, forbidden, cert.as_deref()),
        Command::Sample {
            generator,
            len,
            epsilon,
            tail,
            scheme,
            csv,
            exact,
        } => sample(&generator, len, epsilon, tail, scheme.into(), csv.as_deref(), exact),
        Command::Verify { certificate } => verify(&certificate),
    }
}

fn construct(kind: Construct, out: Option<&Path>, cert_path: Option<&Path>) -> Result<Verdict, Error> {
    let (artifact, cert) = match kind {
        Construct::Interval { n, d } => {
            let m = constructors::interval_space(n, d)?;
            let c = certificate::interval_certificate(n, d, &m)?;
            (to_value(&m), c)
        }
        Construct::Odd { k } => {
            let m = constructors::odd_space(k)?;
            let c = certificate::odd_certificate(k, &m)?;
            (to_value(&m), c)
        }
        Construct::Polygon { n } => {
            let space = constructors::polygon_space(n)?;
            let c = certificate::polygon_certificate(n, &space)?;
            (to_value(&space), c)
        }
        Construct::Independent { k, split } => {
            let split = Split::try_from(split)?;
            let fam = constructors::independent_family(k, split)?;
            let c = certificate::independent_certificate(k, split)?;
            (to_value(&fam), c)
        }
        Construct::Spaceable { n_max, k_max, flavor } => {
            let rows = constructors::spaceable_rows(n_max, k_max, flavor.into())?;
            let c = certificate::spaceable_certificate(n_max, k_max, flavor.into())?;
            (to_value(&rows), c)
        }
    };
    if let Some(path) = out {
        write_json(path, &artifact)?;
    }
    emit_certificate(&cert, cert_path)
}

fn profile(
    path: &Path,
    cap: usize,
    samples: Option<usize>,
    seed: u64,
    bound: i64,
    cert_path: Option<&Path>,
) -> Result<Verdict, Error> {
    let m: ValueMatrix = read_json(path)?;
    let (merged, groups) = merge_columns(&m);
    let mut report = json!({ "rows": m.rows(), "columns": m.cols() });
    if merged.cols() != m.cols() {
        report["note"] = json!(format!(
            "duplicate columns merged: {} -> {}",
            m.cols(),
            merged.cols()
        ));
        report["mergedColumns"] = json!(groups);
    }
    let p = match samples {
        Some(s) => {
            report["mode"] = json!("sampled");
            report["seed"] = json!(seed);
            report["samples"] = json!(s);
            sample_profile(&merged, s, bound, seed)?
        }
        None => {
            report["mode"] = json!("exact");
            profile_with_cap(&merged, cap)?
        }
    };
    report["achieved"] = json!(p.achieved);
    report["witnesses"] = to_value(&p.witnesses);
    println!("{}", pretty(&report));
    if let Some(cp) = cert_path {
        if samples.is_some() {
            return Err(Error::Shape("certificates are only issued for exact profiles".into()));
        }
        write_json(cp, &to_value(&certificate::profile_certificate(&m, cap)?))?;
    }
    Ok(Verdict::Ok)
}

fn escape(path: &Path, forbidden: Vec<usize>, cert_path: Option<&Path>) -> Result<Verdict, Error> {
    let v: Value = read_json(path)?;
    let x: StepSequence = field(&v, "x")?;
    let y: StepSequence = field(&v, "y")?;
    let rel = match v.get("relation") {
        Some(r) if !r.is_null() => parse_value::<InfinitudeRelation>(r.clone(), "relation")?,
        _ => InfinitudeRelation::full(x.partition(), y.partition()),
    };
    let forbidden: BTreeSet<usize> = forbidden.into_iter().collect();
    emit_certificate(
        &certificate::escape_certificate(&x, &y, &rel, &forbidden)?,
        cert_path,
    )
}

fn sample(
    spec: &str,
    len: u64,
    epsilon: Option<f64>,
    tail: f64,
    scheme: Scheme,
    csv: Option<&Path>,
    exact: bool,
) -> Result<Verdict, Error> {
    let generator = parse_generator(spec)?;
    let mut seq = PrefixSequence::new(generator.clone(), lab::realize_atoms(scheme))?;
    let values = seq.prefix(len);
    let floats: Vec<f64> = values.iter().map(Rat::to_f64).collect();
    let eps = match epsilon {
        Some(e) => Epsilon::Absolute(e),
        None => Epsilon::default(),
    };
    let est = lab::estimate_clusters(&floats, tail, eps)?;
    if let Some(path) = csv {
        fs::write(path, lab::to_csv(&values, exact)).map_err(|e| io_error(path, e))?;
    }
    let report = json!({
        "generator": generator,
        "scheme": scheme,
        "len": len,
        "clusters": est.centers.len(),
        "estimate": est,
    });
    println!("{}", pretty(&report));
    Ok(Verdict::Ok)
}

fn verify(path: &Path) -> Result<Verdict, Error> {
    let cert: Certificate = read_json(path)?;
    let report = certificate::verify(&cert)?;
    println!("{}", pretty(&to_value(&report)));
    if let Some(at) = &report.mismatch {
        eprintln!("transcript differs at {at}");
    }
    for w in &report.witness_errors {
        eprintln!("witness check failed: {w}");
    }
    Ok(if report.ok() { Verdict::Ok } else { Verdict::ClaimFails })
}

fn parse_generator(spec: &str) -> Result<Generator, Error> {
    let spec = spec.trim();
    if spec.starts_with('{') {
        let g: Generator = serde_json::from_str(spec).map_err(|e| Error::Parse(e.to_string()))?;
        return Ok(g);
    }
    let parts: Vec<&str> = spec.split(':').collect();
    let g = match parts.as_slice() {
        ["constant", v] => Generator::Constant { value: v.parse()? },
        ["fq", q] => Generator::Fq { q: q.parse()? },
        ["rich", q] => Generator::Rich { q: q.parse()? },
        ["combo", d, q] => Generator::Combo {
            d: rat_list(d)?,
            q: rat_list(q)?,
        },
        ["spaceable", a, n, k, rest @ ..] if rest.len() <= 1 => Generator::Spaceable {
            alpha: rat_list(a)?,
            n_max: parse_num(n)?,
            k_max: parse_num(k)?,
            flavor: match rest.first() {
                None | Some(&"dyadic") => Flavor::Dyadic,
                Some(&"rational-dense") => Flavor::RationalDense,
                Some(other) => return Err(Error::Parse(format!("unknown flavor {other:?}"))),
            },
        },
        _ => return Err(Error::Parse(format!("unrecognized generator spec {spec:?}"))),
    };
    g.validate()?;
    Ok(g)
}

fn rat_list(s: &str) -> Result<Vec<Rat>, Error> {
    s.split(',').map(|x| x.trim().parse()).collect()
}

fn parse_num(s: &str) -> Result<u64, Error> {
    s.parse().map_err(|_| Error::Parse(format!("not a count: {s:?}")))
}

fn emit_certificate(cert: &Certificate, path: Option<&Path>) -> Result<Verdict, Error> {
    let v = to_value(cert);
    match path {
        Some(p) => write_json(p, &v)?,
        None => println!("{}", pretty(&v)),
    }
    Ok(if cert.holds() { Verdict::Ok } else { Verdict::ClaimFails })
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Error> {
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn write_json(path: &Path, v: &Value) -> Result<(), Error> {
    fs::write(path, pretty(v) + "\n").map_err(|e| io_error(path, e))
}

fn field<T: serde::de::DeserializeOwned>(v: &Value, key: &str) -> Result<T, Error> {
    let x = v
        .get(key)
        .ok_or_else(|| Error::Parse(format!("missing field {key:?}")))?;
    parse_value(x.clone(), key)
}

fn parse_value<T: serde::de::DeserializeOwned>(v: Value, key: &str) -> Result<T, Error> {
    serde_json::from_value(v).map_err(|e| Error::Parse(format!("field {key:?}: {e}")))
}

fn io_error(path: &Path, e: std::io::Error) -> Error {
    Error::Parse(format!("{}: {e}", path.display()))
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}
