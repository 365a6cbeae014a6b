use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Deserializer};

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Absolute logarithmic height of an element
    Height,
    /// Factorization of ℓ in the field
    Split,
    /// Ramification of ℓ in F(ℓ√α)/F
    Kummer,
    /// Height-gap certificate for F(ℓ√α) over K
    Certify,
    /// Admissible α for ℓ unramified in F
    Construct,
    /// Small-height witness sequence b^(1/3)·b^x
    Witnesses,
    /// Trinomial tower steps, or the quadratic tower bound with --p
    Tower,
    /// Evaluate a single height bound
    Bounds,
    /// Re-check a certificate file
    Verify,
    /// Run job files
    Run,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Height => "height",
            Command::Split => "split",
            Command::Kummer => "kummer",
            Command::Certify => "certify",
            Command::Construct => "construct",
            Command::Witnesses => "witnesses",
            Command::Tower => "tower",
            Command::Bounds => "bounds",
            Command::Verify => "verify",
            Command::Run => "run",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Silverman,
    Garza,
    Excess,
    Prefall,
    Relbocrit,
    Nonbound,
    Theta,
}

pub const DEFAULT_DIGITS: usize = 30;
pub const MIN_DIGITS: usize = 10;
pub const MAX_DIGITS: usize = 200;

/// Every flag of a single job. Job files use the same keys.
#[derive(Clone, Debug, Default, Args, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct JobSpec {
    /// Subcommand, only read from job files
    #[arg(skip)]
    pub command: Option<Command>,

    /// Minimal polynomial of the base field, e.g. "x^2+1"
    #[arg(long)]
    pub field: Option<String>,
    /// Element as coordinates "a,b,..." or a polynomial in x
    #[arg(long)]
    pub elem: Option<String>,
    /// Rational prime ℓ
    #[arg(long)]
    pub ell: Option<u64>,
    /// Declared ρ(K/F) as a rational
    #[arg(long)]
    pub rho: Option<String>,
    /// Attestation backing the declared ρ and the unramified hypothesis
    #[arg(long)]
    #[serde(default, deserialize_with = "one_or_many")]
    pub attest: Vec<String>,
    /// Where ρ comes from
    #[arg(long)]
    pub provenance: Option<String>,
    /// Also evaluate the archimedean branches
    #[arg(long)]
    #[serde(default)]
    pub arch: bool,
    /// Fractional digits of printed decimals (10..=200)
    #[arg(long)]
    pub digits: Option<usize>,
    /// Output file
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,

    /// Witness base (rational), or comma-separated trinomial degrees for tower
    #[arg(long)]
    pub b: Option<String>,
    /// Target height for witnesses
    #[arg(long)]
    pub eps: Option<f64>,
    /// Last witness index
    #[arg(long)]
    pub kmax: Option<u32>,
    /// Prime p ≡ 3 mod 4 for the quadratic tower bound
    #[arg(long)]
    pub p: Option<u64>,

    #[arg(long, value_enum)]
    pub kind: Option<BoundKind>,
    /// Relative degree s
    #[arg(long)]
    pub s: Option<u64>,
    /// Degree d
    #[arg(long)]
    pub d: Option<u64>,
    /// Number of real roots r
    #[arg(long)]
    pub r: Option<usize>,
    /// Number of archimedean places δ(M)
    #[arg(long)]
    pub delta: Option<u64>,
    /// Norm of a relative discriminant (integer)
    #[arg(long)]
    pub norm: Option<String>,
    /// Excess as a power product, e.g. "7" or "2^(1/2)*3"
    #[arg(long)]
    pub excess: Option<String>,
    /// Primes of the subfield discriminant, comma-separated
    #[arg(long)]
    pub primes: Option<String>,
    /// Finite family "s1:N1,s2:N2" of degrees and discriminant norms
    #[arg(long)]
    pub family: Option<String>,
    /// Relbocrit data "s:excess,..."
    #[arg(long)]
    pub data: Option<String>,
    /// Certificate file for verify
    #[arg(long)]
    pub cert: Option<PathBuf>,
}

fn one_or_many<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<String>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany {
        One(String),
        Many(Vec<String>),
    }
    Ok(match OneOrMany::deserialize(d)? {
        OneOrMany::One(s) => vec![s],
        OneOrMany::Many(v) => v,
    })
}

impl JobSpec {
    pub fn format(&self) -> Format {
        self.format.unwrap_or_default()
    }

    pub fn digits(&self) -> CliResult<usize> {
        let d = self.digits.unwrap_or(DEFAULT_DIGITS);
        if !(MIN_DIGITS..=MAX_DIGITS).contains(&d) {
            return Err(CliError::usage(format!("--digits must lie in [{MIN_DIGITS}, {MAX_DIGITS}], got {d}")));
        }
        Ok(d)
    }

    pub fn require<'a, T>(value: &'a Option<T>, flag: &str, cmd: Command) -> CliResult<&'a T> {
        value.as_ref().ok_or_else(|| CliError::usage(format!("{} requires --{flag}", cmd.name())))
    }

    /// Reads a TOML job file. Relative `out` and `cert` paths resolve
    /// against the file's directory.
    pub fn from_file(path: &Path) -> CliResult<JobSpec> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let mut spec: JobSpec =
            toml::from_str(&text).map_err(|e| CliError::JobFile { path: path.to_path_buf(), message: e.message().to_string() })?;
        let dir = path.parent().unwrap_or(Path::new("."));
        for p in [&mut spec.out, &mut spec.cert].into_iter().flatten() {
            if p.is_relative() {
                *p = dir.join(&*p);
            }
        }
        match spec.command {
            None => Err(CliError::JobFile { path: path.to_path_buf(), message: "missing key `command`".into() }),
            Some(Command::Run) => Err(CliError::JobFile { path: path.to_path_buf(), message: "job files cannot nest `run`".into() }),
            Some(_) => Ok(spec),
        }
    }
}
