//! Hand-rolled flag parsing for the five subcommands.

use std::path::PathBuf;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverKind {
    Scan,
    Split,
    Birthday,
}

impl SolverKind {
    pub fn name(&self) -> &'static str {
        match self {
            SolverKind::Scan => "scan",
            SolverKind::Split => "split",
            SolverKind::Birthday => "birthday",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowKind {
    /// Primes in `(2^{n-1}, 2^n]`.
    R,
    /// Primes in `(2^n - 2^{2n/3}, 2^n]`.
    Rprime,
    /// Every order `1..=2^n`, swept round-robin across trials. Not part of
    /// either prime window; exists so a run can cover all orders exactly.
    All,
}

impl WindowKind {
    pub fn name(&self) -> &'static str {
        match self {
            WindowKind::R => "R",
            WindowKind::Rprime => "Rprime",
            WindowKind::All => "all",
        }
    }
}

/// Parsed command line.
#[derive(Debug, Clone)]
pub struct Args {
    pub command: Command,
    pub n: Option<u32>,
    pub m: Option<u32>,
    pub solver: Option<SolverKind>,
    pub window: Option<WindowKind>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub k: Option<u64>,
    pub jobs: Option<usize>,
    pub out: Option<PathBuf>,
    pub max_queries: Option<u64>,
    pub script_len: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Primes,
    Solve,
    Adversary,
    SamplerCheck,
    Gametree,
}

pub const USAGE: &str = "\
orderlab — black-box order-finding testbed

USAGE:
  orderlab <COMMAND> [FLAGS]

COMMANDS:
  primes         sieve a candidate-order window and report its density check
  solve          run seeded order-finding trials against fresh random oracles
  adversary      play a solver against the evasive responder
  sampler-check  measure chain-instrumentation failure rates of the lazy sampler
  gametree       exact worst-case query depth of the splitting strategy

FLAGS:
  --n N            domain bits (required)
  --m M            exponent bits (default: 2n)
  --window W       R | Rprime | all          (default: R; `all` sweeps 1..=2^n)
  --solver S       scan | split | birthday   (required by solve, adversary)
  --trials T       number of trials          (default: 100)
  --seed S         64-bit master seed        (default: 1)
  --k K            birthday sample count     (default: 2^(n/2 + 1))
  --jobs J         worker threads for trials (default: 1; output is identical)
  --out PATH       write CSV rows to PATH instead of stdout
  --max-queries Q  adversary game budget     (default: evasive threshold / 2)
  --t T            sampler script length     (default: 10)

EXIT CODES:
  0  success
  2  configuration error
  3  internal inconsistency (oracle or adversary invariant violated)

EXAMPLES:
  orderlab primes --n 20 --window R
  orderlab solve --solver split --n 4 --m 7 --window all --trials 16 --seed 1
  orderlab solve --solver birthday --n 16 --k 512 --trials 100 --seed 7
  orderlab adversary --n 16 --m 32 --solver split --seed 3
  orderlab sampler-check --n 12 --t 10 --trials 100000 --seed 5
  orderlab gametree --n 4 --m 7
";

fn parse_u64(flag: &str, value: &str) -> Result<u64, CliError> {
    value
        .parse()
        .map_err(|_| CliError::Config(format!("{flag} expects an unsigned integer, got `{value}`")))
}

impl Args {
    pub fn parse<I: IntoIterator<Item = String>>(argv: I) -> Result<Self, CliError> {
        let mut it = argv.into_iter();
        let command = match it.next().as_deref() {
            Some("primes") => Command::Primes,
            Some("solve") => Command::Solve,
            Some("adversary") => Command::Adversary,
            Some("sampler-check") => Command::SamplerCheck,
            Some("gametree") => Command::Gametree,
            Some(other) => return Err(CliError::Config(format!("unknown command `{other}`"))),
            None => return Err(CliError::Config("missing command".into())),
        };
        let mut args = Args {
            command,
            n: None,
            m: None,
            solver: None,
            window: None,
            trials: None,
            seed: None,
            k: None,
            jobs: None,
            out: None,
            max_queries: None,
            script_len: None,
        };
        while let Some(flag) = it.next() {
            let mut value = || {
                it.next()
                    .ok_or_else(|| CliError::Config(format!("{flag} expects a value")))
            };
            match flag.as_str() {
                "--n" => args.n = Some(parse_u64(&flag, &value()?)? as u32),
                "--m" => args.m = Some(parse_u64(&flag, &value()?)? as u32),
                "--trials" => args.trials = Some(parse_u64(&flag, &value()?)?),
                "--seed" => args.seed = Some(parse_u64(&flag, &value()?)?),
                "--k" => args.k = Some(parse_u64(&flag, &value()?)?),
                "--jobs" => args.jobs = Some(parse_u64(&flag, &value()?)? as usize),
                "--max-queries" => args.max_queries = Some(parse_u64(&flag, &value()?)?),
                "--t" => args.script_len = Some(parse_u64(&flag, &value()?)?),
                "--out" => args.out = Some(PathBuf::from(value()?)),
                "--solver" => {
                    args.solver = Some(match value()?.as_str() {
                        "scan" => SolverKind::Scan,
                        "split" => SolverKind::Split,
                        "birthday" => SolverKind::Birthday,
                        other => {
                            return Err(CliError::Config(format!(
                                "--solver expects scan|split|birthday, got `{other}`"
                            )))
                        }
                    })
                }
                "--window" => {
                    args.window = Some(match value()?.as_str() {
                        "R" => WindowKind::R,
                        "Rprime" => WindowKind::Rprime,
                        "all" => WindowKind::All,
                        other => {
                            return Err(CliError::Config(format!(
                                "--window expects R|Rprime|all, got `{other}`"
                            )))
                        }
                    })
                }
                other => return Err(CliError::Config(format!("unknown flag `{other}`"))),
            }
        }
        Ok(args)
    }

    pub fn require_n(&self) -> Result<u32, CliError> {
        self.n.ok_or_else(|| CliError::Config("--n is required".into()))
    }

    pub fn require_solver(&self) -> Result<SolverKind, CliError> {
        self.solver
            .ok_or_else(|| CliError::Config("--solver is required".into()))
    }

    /// Exponent bits, defaulting to `2n`.
    pub fn m_or_default(&self, n: u32) -> u32 {
        self.m.unwrap_or(2 * n)
    }

    pub fn seed_or_default(&self) -> u64 {
        self.seed.unwrap_or(1)
    }

    pub fn trials_or_default(&self) -> u64 {
        self.trials.unwrap_or(100)
    }

    pub fn jobs_or_default(&self) -> usize {
        self.jobs.unwrap_or(1).max(1)
    }

    /// Birthday sample count, defaulting to `2^(n/2 + 1)` — about twice the
    /// square root of the domain.
    pub fn k_or_default(&self, n: u32) -> u64 {
        self.k.unwrap_or(1 << (n / 2 + 1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<Args, CliError> {
        Args::parse(s.split_whitespace().map(str::to_string))
    }

    #[test]
    fn parses_solve_flags() {
        let args = parse("solve --solver split --n 4 --m 7 --trials 16 --seed 9 --window all")
            .unwrap();
        assert_eq!(args.command, Command::Solve);
        assert_eq!(args.n, Some(4));
        assert_eq!(args.m, Some(7));
        assert_eq!(args.solver, Some(SolverKind::Split));
        assert_eq!(args.window, Some(WindowKind::All));
        assert_eq!(args.trials, Some(16));
        assert_eq!(args.seed, Some(9));
    }

    #[test]
    fn rejects_unknown_input() {
        assert!(parse("frobnicate --n 4").is_err());
        assert!(parse("solve --frobnicate 4").is_err());
        assert!(parse("solve --n").is_err());
        assert!(parse("solve --n four").is_err());
        assert!(parse("solve --solver magic").is_err());
    }

    #[test]
    fn defaults() {
        let args = parse("solve --solver scan --n 8").unwrap();
        assert_eq!(args.m_or_default(8), 16);
        assert_eq!(args.seed_or_default(), 1);
        assert_eq!(args.trials_or_default(), 100);
        assert_eq!(args.k_or_default(16), 512);
    }
}
