//! Problem names accepted on the command line.

use anyhow::{bail, Context, Result};
use cwsolve_core::sigma_rho::{MuSet, SigmaRhoSpec, Variant};
use cwsolve_core::Direction;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProblemName {
    Mif,
    Fvs,
    Cds,
    Ctds,
    PerfectCds,
    DRegular(u32),
    Cvc,
    Steiner,
    Custom,
}

impl FromStr for ProblemName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "mif" => ProblemName::Mif,
            "fvs" => ProblemName::Fvs,
            "cds" => ProblemName::Cds,
            "ctds" => ProblemName::Ctds,
            "perfect-cds" => ProblemName::PerfectCds,
            "cvc" => ProblemName::Cvc,
            "steiner" => ProblemName::Steiner,
            "custom" => ProblemName::Custom,
            _ => match s.strip_prefix("d-regular:").map(str::parse) {
                Some(Ok(d)) => ProblemName::DRegular(d),
                _ => {
                    return Err(format!(
                        "unknown problem `{s}` (expected mif, fvs, cds, ctds, perfect-cds, d-regular:<d>, cvc, steiner or custom)"
                    ))
                }
            },
        })
    }
}

impl std::fmt::Display for ProblemName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ProblemName::Mif => f.write_str("mif"),
            ProblemName::Fvs => f.write_str("fvs"),
            ProblemName::Cds => f.write_str("cds"),
            ProblemName::Ctds => f.write_str("ctds"),
            ProblemName::PerfectCds => f.write_str("perfect-cds"),
            ProblemName::DRegular(d) => write!(f, "d-regular:{d}"),
            ProblemName::Cvc => f.write_str("cvc"),
            ProblemName::Steiner => f.write_str("steiner"),
            ProblemName::Custom => f.write_str("custom"),
        }
    }
}

/// Flags that shape a domination problem.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct ProblemArgs {
    /// Comma-separated terminal names (steiner)
    #[arg(long, value_delimiter = ',')]
    pub terminals: Vec<String>,
    /// Allowed neighbour counts inside the solution (custom): N, N+, {0,1,2}, N\{0,1}
    #[arg(long)]
    pub sigma: Option<String>,
    /// Allowed neighbour counts outside the solution (custom)
    #[arg(long)]
    pub rho: Option<String>,
    /// Require the complement, not the dominating set, to be connected (custom)
    #[arg(long)]
    pub co: bool,
    /// Optimization direction (domination problems)
    #[arg(long, value_parser = ["min", "max"])]
    pub opt: Option<String>,
}

/// What to solve after resolving presets and flags.
#[derive(Debug, Clone)]
pub enum Resolved {
    Forest { maximize: bool },
    Domination(SigmaRhoSpec),
}

/// Marks errors that should exit with the usage status.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(UsageError(msg.into()).into())
}

fn parse_set(flag: &str, text: &Option<String>) -> Result<MuSet> {
    match text {
        Some(t) => t.parse().with_context(|| format!("invalid --{flag}")),
        None => usage(format!("--problem custom requires --{flag}")),
    }
}

pub fn resolve(name: &ProblemName, args: &ProblemArgs) -> Result<Resolved> {
    let custom_flags = args.sigma.is_some() || args.rho.is_some() || args.co;
    if custom_flags && *name != ProblemName::Custom {
        return usage("--sigma, --rho and --co are only valid with --problem custom");
    }
    if !args.terminals.is_empty() && *name != ProblemName::Steiner {
        return usage("--terminals is only valid with --problem steiner");
    }
    let mut spec = match name {
        ProblemName::Mif | ProblemName::Fvs => {
            if args.opt.is_some() {
                return usage("--opt does not apply to mif/fvs");
            }
            return Ok(Resolved::Forest {
                maximize: *name == ProblemName::Mif,
            });
        }
        ProblemName::Steiner => {
            if args.terminals.is_empty() {
                return usage("--problem steiner requires --terminals");
            }
            if args.opt.is_some() {
                return usage("--opt does not apply to steiner");
            }
            return Ok(Resolved::Domination(SigmaRhoSpec::steiner(args.terminals.clone())));
        }
        ProblemName::Cds => SigmaRhoSpec::cds(),
        ProblemName::Ctds => SigmaRhoSpec::ctds(),
        ProblemName::PerfectCds => SigmaRhoSpec::perfect_cds(),
        ProblemName::DRegular(d) => SigmaRhoSpec::d_regular(*d),
        ProblemName::Cvc => SigmaRhoSpec::cvc(),
        ProblemName::Custom => {
            let variant = if args.co { Variant::Co } else { Variant::Plain };
            SigmaRhoSpec::new(parse_set("sigma", &args.sigma)?, parse_set("rho", &args.rho)?, Direction::Min, variant)
        }
    };
    match args.opt.as_deref() {
        Some("max") => spec.direction = Direction::Max,
        Some(_) => spec.direction = Direction::Min,
        None => {}
    }
    if let Err(e) = spec.d() {
        bail!("invalid set: {e}");
    }
    Ok(Resolved::Domination(spec))
}
