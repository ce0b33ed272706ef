//! Command-line experiments on top of `arithdyn`: argument handling, configuration, map
//! files and report rendering. The binary is a thin wrapper around [`run`].

pub mod commands;
pub mod config;
pub mod document;
pub mod error;
pub mod report;

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use arithdyn::degrees::TopDegreeMethod;

pub use config::{Format, RunConfig};
pub use document::{LoadedMap, MapDocument};
pub use error::CliError;
pub use report::Report;

/// Environment variable naming the default config file.
pub const CONFIG_ENV: &str = "ARITHDYN_CONFIG";

#[derive(Debug, Parser)]
#[command(name = "arithdyn", version, about = "Exact experiments in arithmetic dynamics over the rationals")]
pub struct Cli {
    #[command(flatten)]
    pub flags: ConfigFlags,
    #[command(subcommand)]
    pub command: Command,
}

/// Overrides for [`RunConfig`], applied on top of the config file.
#[derive(Debug, Default, Args)]
pub struct ConfigFlags {
    /// TOML file with RunConfig fields.
    #[arg(long, global = true, env = CONFIG_ENV, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[arg(long = "nmax", global = true)]
    pub n_max: Option<u32>,
    /// Log-height bound; accepts `log(M)` for the height of max-coordinate M.
    #[arg(long, global = true, value_parser = config::parse_height_bound, allow_hyphen_values = true)]
    pub height_bound: Option<f64>,
    #[arg(long, global = true)]
    pub period_bound: Option<u32>,
    #[arg(long, global = true)]
    pub tail_window: Option<usize>,
    #[arg(long, global = true)]
    pub prime_count: Option<usize>,
    #[arg(long, global = true)]
    pub samples_per_prime: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub term_count_cap: Option<usize>,
    #[arg(long, global = true)]
    pub coordinate_digit_cap: Option<u64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

impl ConfigFlags {
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut c = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        macro_rules! apply {
            ($($f:ident),*) => {$( if let Some(v) = self.$f { c.$f = v; } )*};
        }
        apply!(n_max, height_bound, period_bound, prime_count, samples_per_prime, seed, term_count_cap, coordinate_digit_cap, format);
        if self.tail_window.is_some() {
            c.tail_window = self.tail_window;
        }
        c.validate()?;
        Ok(c)
    }
}

/// Where the map comes from: a zoo family or a map file.
#[derive(Debug, Clone, Default, Args)]
pub struct MapArgs {
    /// Built-in family (see `arithdyn zoo`).
    #[arg(long, conflicts_with = "map")]
    pub zoo: Option<String>,
    /// Family parameters `k=v[,k=v...]`; repeatable.
    #[arg(long = "param", value_name = "K=V", requires = "zoo")]
    pub params: Vec<String>,
    /// Map definition file (TOML).
    #[arg(long, value_name = "FILE")]
    pub map: Option<PathBuf>,
}

impl MapArgs {
    pub fn is_given(&self) -> bool {
        self.zoo.is_some() || self.map.is_some()
    }

    pub fn load(&self) -> Result<LoadedMap, CliError> {
        match (&self.zoo, &self.map) {
            (Some(name), None) => document::load_zoo(name, &parse_params(&self.params)?),
            (None, Some(path)) => MapDocument::load(path),
            _ => Err(CliError::usage("give exactly one of --zoo NAME or --map FILE")),
        }
    }
}

/// Splits `a=1,b=0` style parameters; commas inside brackets belong to the value.
pub fn parse_params(items: &[String]) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for item in items {
        let mut depth = 0i32;
        let mut parts = vec![String::new()];
        for ch in item.chars() {
            match ch {
                '[' | '(' => depth += 1,
                ']' | ')' => depth -= 1,
                _ => {}
            }
            if ch == ',' && depth == 0 {
                parts.push(String::new());
            } else {
                parts.last_mut().unwrap().push(ch);
            }
        }
        for part in parts.iter().filter(|p| !p.trim().is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| CliError::usage(format!("parameter `{part}` is not of the form k=v")))?;
            out.insert(k.trim().to_string(), v.trim().to_string());
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    ExactMonomial,
    BirationalUnit,
    FiberSampling,
}

impl From<MethodArg> for TopDegreeMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::ExactMonomial => TopDegreeMethod::ExactMonomial,
            MethodArg::BirationalUnit => TopDegreeMethod::BirationalUnit,
            MethodArg::FiberSampling => TopDegreeMethod::FiberSampling,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the built-in map families.
    Zoo,
    /// Degrees of the iterates f, f^2, ..., f^nmax.
    Degseq {
        #[command(flatten)]
        map: MapArgs,
        /// Use the inverse map instead.
        #[arg(long)]
        inverse: bool,
    },
    /// Dynamical degree estimates and the hyperbolicity comparison.
    Dyndeg {
        #[command(flatten)]
        map: MapArgs,
    },
    /// Topological degree (number of preimages of a generic point).
    Topdeg {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, value_enum)]
        method: Option<MethodArg>,
    },
    /// Orbit of a point with heights.
    Orbit {
        #[command(flatten)]
        map: MapArgs,
        /// `(r1, ..., rN)` or `[a0:...:aN]`.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        /// Forward and backward orbit (needs an inverse).
        #[arg(long)]
        full: bool,
    },
    /// Arithmetic degree estimates along an orbit.
    Arithdeg {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        /// Also compare with the orbit under f^N.
        #[arg(long, value_name = "N")]
        power: Option<u32>,
    },
    /// Survey of periodic points of bounded height.
    Periodic {
        #[command(flatten)]
        map: MapArgs,
        /// Refuse surveys that would enumerate more points than this.
        #[arg(long, default_value_t = 50_000_000)]
        enumeration_cap: u64,
    },
    /// Return set {n : f^n(P) in Y} and its decomposition into progressions.
    Dml {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        /// Polynomial cutting out Y; repeatable.
        #[arg(long = "poly", required = true, allow_hyphen_values = true)]
        polys: Vec<String>,
    },
    /// Search for a curve of degree <= D through the orbit.
    Density {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long)]
        degree: u32,
    },
    /// Constants alpha, beta of (zeta, d1, d2, C), optionally with the ell sequence of an orbit.
    Lemma {
        zeta: f64,
        d1: f64,
        d2: f64,
        c: f64,
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
        /// Two-sided sequence from the full orbit.
        #[arg(long)]
        full: bool,
    },
}

/// Parses `args` (including the program name), runs the experiment and returns its
/// rendered output. Help and version requests come back as `Ok` text.
pub fn run<I, T>(args: I) -> Result<String, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    Ok(e.render().to_string())
                }
                _ => Err(CliError::usage(e.render().to_string().trim_end())),
            };
        }
    };
    let cfg = cli.flags.resolve()?;
    let report = execute(&cli.command, &cfg)?;
    report.render(cfg.format)
}

pub fn execute(command: &Command, cfg: &RunConfig) -> Result<Report, CliError> {
    use commands as c;
    match command {
        Command::Zoo => Ok(c::zoo()),
        Command::Degseq { map, inverse } => c::degseq(&map.load()?, cfg, *inverse),
        Command::Dyndeg { map } => c::dyndeg(&map.load()?, cfg),
        Command::Topdeg { map, method } => c::topdeg(&map.load()?, cfg, method.map(Into::into)),
        Command::Orbit { map, point, full } => c::orbit_cmd(&map.load()?, point, cfg, *full),
        Command::Arithdeg { map, point, power } => c::arithdeg(&map.load()?, point, cfg, *power),
        Command::Periodic { map, enumeration_cap } => c::periodic(&map.load()?, cfg, *enumeration_cap),
        Command::Dml { map, point, polys } => c::dml(&map.load()?, point, polys, cfg),
        Command::Density { map, point, degree } => c::density(&map.load()?, point, *degree, cfg),
        Command::Lemma { zeta, d1, d2, c: constant, map, point, full } => {
            let loaded = match (map.is_given(), point) {
                (true, Some(p)) => Some((map.load()?, p.as_str())),
                (false, None) => None,
                _ => return Err(CliError::usage("lemma takes --point together with --zoo or --map")),
            };
            c::lemma(*zeta, *d1, *d2, *constant, loaded.as_ref().map(|(m, p)| (m, *p)), *full, cfg)
        }
    }
}
