use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use zerosum_core::bounds::Rational;
use zerosum_core::expansion::Hyperplanes;
use zerosum_core::{Group, SearchConfig};

pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Debug, Parser)]
#[command(name = "zerosum", version, about = "Zero-sum invariants of finite abelian groups")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Node budget for each exact search.
    #[arg(long, global = true)]
    pub max_nodes: Option<u64>,
    /// Cache file; else $ZEROSUM_CACHE, else the platform data directory.
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    /// Neither read nor write the cache.
    #[arg(long, global = true)]
    pub no_cache: bool,
}

impl Global {
    pub fn workers(&self) -> usize {
        self.workers
            .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
            .max(1)
    }

    pub fn search_config(&self) -> SearchConfig {
        let mut cfg = SearchConfig { workers: self.workers(), ..SearchConfig::default() };
        if let Some(n) = self.max_nodes {
            cfg.max_nodes = n;
        }
        cfg
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    #[value(name = "D")]
    D,
    #[value(name = "Ds")]
    Ds,
    #[value(name = "ZS")]
    Zs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum HyperplanesArg {
    Affine,
    ThroughOrigin,
}

impl From<HyperplanesArg> for Hyperplanes {
    fn from(h: HyperplanesArg) -> Hyperplanes {
        match h {
            HyperplanesArg::Affine => Hyperplanes::Affine,
            HyperplanesArg::ThroughOrigin => Hyperplanes::ThroughOrigin,
        }
    }
}

fn parse_group(s: &str) -> Result<Group, String> {
    s.parse::<Group>().map_err(|e| e.to_string())
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    let r: Rational = s.trim().parse().map_err(|_| format!("not a rational: {s:?}"))?;
    if r <= Rational::from_integer(0) {
        return Err(format!("{s} must be positive"));
    }
    Ok(r)
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute D(G), D^s(G) or ZS(G).
    Compute {
        #[arg(short = 'g', long = "group", value_parser = parse_group)]
        group: Group,
        #[arg(short = 'k', long = "kind", value_enum)]
        kind: KindArg,
        /// Length bound for the short constant.
        #[arg(long)]
        s: Option<u64>,
    },
    /// Evaluate every upper bound for D(G).
    Bounds {
        #[arg(short = 'g', long = "group", value_parser = parse_group)]
        group: Group,
        /// Constant of the rank-3 bound, an integer or fraction.
        #[arg(short = 'K', default_value = "5", value_parser = parse_rational)]
        k: Rational,
    },
    /// Extract a zero-sum subsequence by block peeling.
    Extract {
        #[arg(short = 'g', long = "group", value_parser = parse_group)]
        group: Group,
        /// Sequence literal, e.g. "1,0,0*2; 0,1,2".
        #[arg(long)]
        seq: String,
        /// Reduction modulus; defaults to the smallest invariant factor.
        #[arg(long)]
        d: Option<u64>,
        /// Upper bound for D^d(Z_d^3); defaults to the known value for d <= 4.
        #[arg(long)]
        big_a: Option<u64>,
        /// D(Z_d^3); defaults to 3d-2 when d is a prime power.
        #[arg(long)]
        d3: Option<u64>,
    },
    /// Random campaign for the translate-expansion inequality over Z_p^d.
    Expansion {
        #[arg(short = 'p')]
        p: u64,
        #[arg(short = 'd')]
        d: u32,
        #[arg(short = 'n', default_value_t = 1000)]
        n: u64,
        #[arg(long, value_enum, default_value_t = HyperplanesArg::Affine)]
        hyperplanes: HyperplanesArg,
    },
    /// List the abelian groups of order n.
    Enumerate {
        #[arg(short = 'n')]
        n: u64,
    },
    /// Run a verification suite.
    Verify {
        #[command(subcommand)]
        suite: Suite,
    },
}

#[derive(Debug, Subcommand)]
pub enum Suite {
    /// D^s(Z_s^3) against the known short constants.
    Lemma2 {
        /// Single s to check; default 2 and 3.
        #[arg(long)]
        s: Option<u64>,
    },
    /// D(G) <= n/k + k - 1 over all groups up to an order.
    Theorem1 {
        #[arg(long, default_value_t = 32)]
        order_cap: u64,
    },
    /// Random expansion campaign; fails on any violation.
    Expansion {
        #[arg(short = 'p', default_value_t = 5)]
        p: u64,
        #[arg(short = 'd', default_value_t = 2)]
        d: u32,
        #[arg(short = 'n', default_value_t = 1000)]
        n: u64,
        #[arg(long, value_enum, default_value_t = HyperplanesArg::Affine)]
        hyperplanes: HyperplanesArg,
    },
    /// Block extraction on random sequences of threshold length.
    Extraction {
        /// Sequences per parameter set.
        #[arg(short = 'n', default_value_t = 100)]
        n: u64,
        /// Restrict to one s.
        #[arg(long)]
        s: Option<u64>,
    },
    /// ZS(G) by definition against |G| + D(G) - 1.
    Gao {
        #[arg(long, default_value_t = 9)]
        order_cap: u64,
    },
}
