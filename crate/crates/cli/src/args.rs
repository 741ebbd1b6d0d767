use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "coherent", version, about = "Coherent states on the circle and the sphere")]
pub struct Cli {
    #[command(flatten)]
    pub run: RunArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Basis cutoff: a level `>= 10`, or `auto`.
    #[arg(long, default_value = "auto", global = true)]
    pub j_cut: JCut,
    /// Squared-norm fraction allowed in the top three levels under `--j-cut auto`.
    #[arg(long, default_value = "1e-24", global = true)]
    pub tail_tol: f64,
    /// Seed for the randomized sweeps of `verify`.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    /// Tolerance override for a named check, `NAME=VALUE`; repeatable.
    #[arg(long = "tol", value_parser = parse_override, global = true)]
    pub tolerances: Vec<(String, f64)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JCut {
    Auto,
    Fixed(u32),
}

impl FromStr for JCut {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if s == "auto" {
            return Ok(JCut::Auto);
        }
        let n: u32 = s.parse().map_err(|_| format!("expected an integer or `auto`, got `{s}`"))?;
        if n < 10 {
            return Err(format!("explicit cutoff must be at least 10, got {n}"));
        }
        Ok(JCut::Fixed(n))
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Coherent state on the circle labelled by (phi, l).
    Circle(CircleArgs),
    /// Coherent state on the sphere labelled by a phase point (x, l).
    Sphere(SphereArgs),
    /// Probabilities p_{j,m} of the rotator eigenstates in a coherent state.
    Rotator(RotatorArgs),
    /// Run the invariant suite.
    Verify,
}

#[derive(Debug, Args)]
pub struct CircleArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub phi: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub l: f64,
}

#[derive(Debug, Args)]
pub struct PointArgs {
    /// Position, `x1,x2,x3`.
    #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
    pub x: [f64; 3],
    /// Angular momentum, `l1,l2,l3`.
    #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
    pub l: [f64; 3],
    /// Sphere radius.
    #[arg(long, default_value_t = 1.0)]
    pub r: f64,
    /// Rescale x onto the sphere and drop the radial part of l.
    #[arg(long)]
    pub project_tangent: bool,
}

#[derive(Debug, Args)]
pub struct SphereArgs {
    #[command(flatten)]
    pub point: PointArgs,
    /// Compare the closed form with the two expansion paths.
    #[arg(long)]
    pub check_paths: bool,
}

#[derive(Debug, Args)]
pub struct RotatorArgs {
    #[command(flatten)]
    pub point: PointArgs,
    /// Report the j maximizing p_{j,m} at each of these m.
    #[arg(long, num_args = 1.., allow_negative_numbers = true)]
    pub fix_m: Vec<i32>,
    /// Report the m maximizing p_{j,m} at each of these j.
    #[arg(long, num_args = 1..)]
    pub fix_j: Vec<u32>,
}

fn parse_vec3(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated numbers, got `{s}`"));
    }
    let mut v = [0.0f64; 3];
    for (o, p) in v.iter_mut().zip(&parts) {
        *o = p.parse().map_err(|_| format!("`{p}` is not a number"))?;
        if !o.is_finite() {
            return Err(format!("`{p}` is not finite"));
        }
    }
    Ok(v)
}

fn parse_override(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s.split_once('=').ok_or_else(|| format!("expected NAME=VALUE, got `{s}`"))?;
    let v: f64 = value.parse().map_err(|_| format!("`{value}` is not a number"))?;
    if !(v > 0.0 && v.is_finite()) {
        return Err(format!("tolerance must be positive, got {v}"));
    }
    Ok((name.to_string(), v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vectors_and_cutoffs() {
        assert_eq!(parse_vec3("0.412, 0.412,0.812").unwrap(), [0.412, 0.412, 0.812]);
        assert!(parse_vec3("1,2").is_err());
        assert!(parse_vec3("1,nan,2").is_err());
        assert_eq!("auto".parse::<JCut>().unwrap(), JCut::Auto);
        assert_eq!("12".parse::<JCut>().unwrap(), JCut::Fixed(12));
        assert!("9".parse::<JCut>().is_err());
        assert_eq!(parse_override("three_path=1e-8").unwrap(), ("three_path".into(), 1e-8));
        assert!(parse_override("three_path").is_err());
    }
}
