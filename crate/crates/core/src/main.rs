use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use star53k::cgroup::{verify_cgroup, IntersectionReport};
use star53k::classify::classify_rank4;
use star53k::golden::RingError;
use star53k::group::GroupError;
use star53k::polytope::face_counts;
use star53k::survey::{run_survey, write_jsonl, SurveyConfig};
use star53k::{Error, GoldenPrime, StarParams, DEFAULT_CAP, K};

#[derive(Parser)]
#[command(name = "star53k", version, about = "Reductions of the star Coxeter group [5,3;k] modulo primes of Z[tau]")]
struct Cli {
    /// Enumeration cap for explicit element lists.
    #[arg(long, global = true, env = "STAR53K_CAP", default_value_t = DEFAULT_CAP)]
    cap: usize,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Prime class, residue symbols and the type of G^p.
    Classify {
        #[arg(long)]
        k: String,
        #[arg(long, allow_hyphen_values = true)]
        prime: String,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(i64).range(1..=2))]
        scale: i64,
    },
    /// Check the intersection condition on the reduced generators.
    Verify {
        #[arg(long)]
        k: String,
        #[arg(long, allow_hyphen_values = true)]
        prime: String,
    },
    /// Face counts of the semiregular polytope for ring 0 or 2.
    Polytope {
        #[arg(long)]
        k: String,
        #[arg(long, allow_hyphen_values = true)]
        prime: String,
        #[arg(long, value_parser = ["0", "2"])]
        ring: String,
    },
    /// Classify every (k, prime) pair up to a norm bound, as JSON lines.
    Survey {
        #[arg(long, default_value = "all")]
        k: String,
        #[arg(long)]
        max_norm: u64,
        #[arg(long)]
        out: Option<String>,
        /// Skip the intersection-condition check per row.
        #[arg(long)]
        no_cgroup: bool,
    },
}

enum Failure {
    Verification(String),
    Parse(String),
    BadPrime(String),
    OverCap(String),
    Other(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification(_) | Failure::Other(_) => 1,
            Failure::Parse(_) => 2,
            Failure::BadPrime(_) => 3,
            Failure::OverCap(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Verification(m)
            | Failure::Parse(m)
            | Failure::BadPrime(m)
            | Failure::OverCap(m)
            | Failure::Other(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::Ring(RingError::Parse(_)) | Error::Star(_) => Failure::Parse(msg),
            Error::Ring(_) => Failure::BadPrime(msg),
            Error::Group(GroupError::OverCap(_)) => Failure::OverCap(msg),
            _ => Failure::Other(msg),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Other(e.to_string())
    }
}

fn parse_ks(text: &str) -> Result<Vec<K>, Failure> {
    if text == "all" {
        return Ok(K::FINITE.to_vec());
    }
    text.parse::<K>().map(|k| vec![k]).map_err(|e| Failure::Parse(e.to_string()))
}

fn parse_prime(text: &str) -> Result<GoldenPrime, Failure> {
    text.parse::<GoldenPrime>().map_err(|e| Error::from(e).into())
}

fn classify(ks: &[K], prime: &GoldenPrime, scale: i64, fmt: Format, out: &mut impl Write) -> Result<(), Failure> {
    for &k in ks {
        let params = StarParams::with_scale(k, prime.clone(), scale).map_err(Error::from)?;
        let c = classify_rank4(&params).map_err(Error::from)?;
        match fmt {
            Format::Json => {
                let v = json!({
                    "k": k.to_string(),
                    "prime": prime.to_string(),
                    "class": prime.klass,
                    "q": prime.q,
                    "epsilon": c.epsilon,
                    "delta": c.delta,
                    "classification": c.label(),
                    "predictedOrder": c.predicted_order,
                    "smooth": c.smooth,
                });
                writeln!(out, "{v}")?;
            }
            Format::Text => {
                writeln!(out, "k = {k}, prime = {prime}, class {}, q = {}", prime.klass, prime.q)?;
                writeln!(out, "epsilon = {}, delta = {}, smooth = {}", c.epsilon, c.delta, c.smooth)?;
                writeln!(out, "{}, order {}", c.label(), c.predicted_order)?;
            }
        }
    }
    Ok(())
}

fn print_report(k: K, r: &IntersectionReport, fmt: Format, out: &mut impl Write) -> io::Result<()> {
    if fmt == Format::Json {
        let v = json!({"k": k.to_string(), "isCgroup": r.is_cgroup(), "report": r});
        return writeln!(out, "{v}");
    }
    writeln!(out, "k = {k}")?;
    for (name, ok) in ["G_0", "G_2", "G_3"].iter().zip(r.rank3_checks) {
        writeln!(out, "  {name} is a C-group: {ok}")?;
    }
    for (name, ok) in ["G_0 ∩ G_2 = G_0,2", "G_0 ∩ G_3 = G_0,3", "G_2 ∩ G_3 = G_2,3"].iter().zip(r.rank4_checks) {
        writeln!(out, "  {name}: {ok}")?;
    }
    let orders: Vec<String> = r.subgroup_orders.iter().map(|(n, o)| format!("|{n}| = {o}")).collect();
    writeln!(out, "  {}", orders.join(", "))?;
    if let Some(w) = &r.witness {
        writeln!(out, "  witness: {} {:?}", w.check, w.element)?;
    }
    writeln!(out, "  C-group: {}", r.is_cgroup())
}

fn run(cli: Cli) -> Result<(), Failure> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.cmd {
        Cmd::Classify { k, prime, scale } => {
            let ks = parse_ks(&k)?;
            let prime = parse_prime(&prime)?;
            classify(&ks, &prime, scale, cli.format.unwrap_or(Format::Text), &mut out)
        }
        Cmd::Verify { k, prime } => {
            let ks = parse_ks(&k)?;
            let prime = parse_prime(&prime)?;
            let mut failed = Vec::new();
            for k in ks {
                let r = verify_cgroup(&StarParams::new(k, prime.clone()), cli.cap)?;
                print_report(k, &r, cli.format.unwrap_or(Format::Text), &mut out)?;
                if !r.is_cgroup() {
                    failed.push(k.to_string());
                }
            }
            if failed.is_empty() {
                Ok(())
            } else {
                Err(Failure::Verification(format!("intersection condition fails for k = {}", failed.join(", "))))
            }
        }
        Cmd::Polytope { k, prime, ring } => {
            let ring: usize = ring.parse().expect("validated by clap");
            let ks = parse_ks(&k)?;
            let prime = parse_prime(&prime)?;
            for k in ks {
                let s = face_counts(&StarParams::new(k, prime.clone()), ring, cli.cap)?;
                match cli.format.unwrap_or(Format::Json) {
                    Format::Json => writeln!(out, "{}", serde_json::to_string(&s).expect("serializable"))?,
                    Format::Text => write!(out, "k = {k}\n{}", s.to_table())?,
                }
            }
            Ok(())
        }
        Cmd::Survey { k, max_norm, out: path, no_cgroup } => {
            let ks = parse_ks(&k)?;
            let cfg = SurveyConfig { max_norm, cap: cli.cap, check_cgroup: !no_cgroup };
            let rows = run_survey(&ks, &cfg)?;
            let summary = match path {
                Some(p) => write_jsonl(&rows, BufWriter::new(File::create(p)?))?,
                None => write_jsonl(&rows, &mut out)?,
            };
            let bad = summary.order_mismatches + summary.cgroup_failures + summary.dual_path_disagreements;
            if bad == 0 {
                Ok(())
            } else {
                Err(Failure::Verification(format!("{bad} survey rows disagree")))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
