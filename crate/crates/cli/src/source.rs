use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use fqg_core::groups::FiniteGroup;
use fqg_core::hopf::HopfAlgebra;
use fqg_core::ToleranceConfig;
use serde::Serialize;

/// Default order bound when closing permutation generators.
const DEFAULT_BOUND: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgebraKind {
    /// Group algebra ℂ[G].
    Group,
    /// Function algebra C(G).
    Function,
}

/// Where the Hopf algebra comes from. Exactly one source is required.
#[derive(Debug, Clone, Args)]
#[group(id = "source", required = true, multiple = false)]
pub struct SourceArgs {
    /// Named group: Z<n> (or C<n>), D<n> (order 2n), S<n>
    #[arg(long, value_name = "NAME")]
    pub group: Option<String>,

    /// Cayley table CSV, row g column h = g·h, identity at index 0
    #[arg(long, value_name = "FILE")]
    pub cayley: Option<PathBuf>,

    /// Permutation generators, one per line as a whitespace/comma list
    #[arg(long, value_name = "FILE")]
    pub perms: Option<PathBuf>,

    /// Structure-constant JSON file; `kac_paljutkin.json` falls back to the bundled copy
    #[arg(long, value_name = "FILE")]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct BuildArgs {
    #[command(flatten)]
    pub source: SourceArgs,

    /// Which algebra to build from a group source
    #[arg(long, value_enum, default_value_t = AlgebraKind::Group)]
    pub algebra: AlgebraKind,

    /// Largest group order accepted when closing permutation generators
    #[arg(long, default_value_t = DEFAULT_BOUND)]
    pub bound: usize,
}

/// Resolved description of the input, echoed in reports.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AlgebraSpec {
    Named {
        group: String,
        algebra: AlgebraKind,
    },
    CayleyTable {
        path: String,
        algebra: AlgebraKind,
    },
    PermutationGenerators {
        path: String,
        algebra: AlgebraKind,
        bound: usize,
    },
    StructureConstants {
        path: String,
        bundled: bool,
    },
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

impl BuildArgs {
    pub fn spec(&self) -> AlgebraSpec {
        let s = &self.source;
        let algebra = self.algebra;
        if let Some(g) = &s.group {
            AlgebraSpec::Named {
                group: g.clone(),
                algebra,
            }
        } else if let Some(p) = &s.cayley {
            AlgebraSpec::CayleyTable {
                path: p.display().to_string(),
                algebra,
            }
        } else if let Some(p) = &s.perms {
            AlgebraSpec::PermutationGenerators {
                path: p.display().to_string(),
                algebra,
                bound: self.bound,
            }
        } else if let Some(p) = &s.file {
            AlgebraSpec::StructureConstants {
                path: p.display().to_string(),
                bundled: !p.exists(),
            }
        } else {
            unreachable!("clap enforces exactly one source")
        }
    }

    /// Build the Hopf algebra. Axioms are not checked here.
    pub fn build(&self, tol: &ToleranceConfig) -> Result<HopfAlgebra> {
        let s = &self.source;
        let group = if let Some(name) = &s.group {
            FiniteGroup::from_name(name)?
        } else if let Some(p) = &s.cayley {
            FiniteGroup::from_cayley_csv(stem(p), &read(p)?)
                .with_context(|| format!("parsing {}", p.display()))?
        } else if let Some(p) = &s.perms {
            FiniteGroup::from_permutation_text(stem(p), &read(p)?, self.bound)
                .with_context(|| format!("parsing {}", p.display()))?
        } else if let Some(p) = &s.file {
            if p.exists() {
                return HopfAlgebra::from_json(&read(p)?, tol)
                    .with_context(|| format!("loading {}", p.display()));
            }
            return HopfAlgebra::builtin(&p.display().to_string(), tol).with_context(|| {
                format!(
                    "{} does not exist and is not a bundled algebra",
                    p.display()
                )
            });
        } else {
            bail!("no algebra source given");
        };
        Ok(match self.algebra {
            AlgebraKind::Group => HopfAlgebra::group_algebra(&group, tol)?,
            AlgebraKind::Function => HopfAlgebra::function_algebra(&group, tol)?,
        })
    }
}
