//! Loading and validating experiment configs.

use std::fs;
use std::path::{Path, PathBuf};

use num_rational::Rational64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use nwlab_core::design::{design_from_polynomials, gen_design_greedy, gen_design_km};
use nwlab_core::{BitString, Design, Oracle, TargetedPrg};

use crate::CliError;

/// Parses a JSON file, naming the offending field on failure.
pub fn load<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
    parse(&text, &path.display().to_string())
}

pub fn parse<T: DeserializeOwned>(text: &str, origin: &str) -> Result<T, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        CliError::Validation(format!("{origin}: invalid config at `{path}`: {}", e.inner()))
    })
}

/// Config of a subcommand that may also be given entirely by flags.
pub fn load_or_default<T: DeserializeOwned + Default>(path: Option<&Path>) -> Result<T, CliError> {
    path.map(load).unwrap_or_else(|| Ok(T::default()))
}

/// Directory that relative paths inside a config are resolved against.
pub fn base_dir(config: Option<&Path>) -> PathBuf {
    config
        .and_then(Path::parent)
        .map(Path::to_path_buf)
        .unwrap_or_default()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum DesignSpec {
    Inline(Design),
    Greedy {
        d: usize,
        r: usize,
        s: usize,
        m: usize,
    },
    Km {
        d: usize,
        #[serde(with = "nwlab_core::text")]
        alpha: Rational64,
    },
    Polynomial {
        p: u64,
        degree: usize,
        m: usize,
    },
    /// A design file: a bare design or the report of `design gen`.
    File(PathBuf),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum DesignFile {
    Bare(Design),
    Report { design: Design },
}

pub fn load_design_file(path: &Path) -> Result<Design, CliError> {
    Ok(match load::<DesignFile>(path)? {
        DesignFile::Bare(d) | DesignFile::Report { design: d } => d,
    })
}

impl DesignSpec {
    pub fn resolve(&self, base: &Path) -> Result<Design, CliError> {
        Ok(match self {
            DesignSpec::Inline(d) => d.clone(),
            DesignSpec::Greedy { d, r, s, m } => gen_design_greedy(*d, *r, *s, *m)?.design,
            DesignSpec::Km { d, alpha } => gen_design_km(*d, *alpha)?.design,
            DesignSpec::Polynomial { p, degree, m } => design_from_polynomials(*p, *degree, *m)?,
            DesignSpec::File(path) => load_design_file(&base.join(path))?,
        })
    }
}

/// A generator: a design, a hard function and the output length.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrgConfig {
    pub design: DesignSpec,
    #[serde(default = "default_oracle")]
    pub oracle: Oracle,
    /// Number of output bits; every set of the design by default.
    #[serde(default)]
    pub m: Option<usize>,
}

fn default_oracle() -> Oracle {
    Oracle::Target
}

impl PrgConfig {
    pub fn build(&self, base: &Path) -> Result<TargetedPrg, CliError> {
        let design = self.design.resolve(base)?;
        let m = self.m.unwrap_or(design.len());
        Ok(TargetedPrg::with_oracle(&design, self.oracle.clone(), m)?)
    }
}

pub fn parse_bits(text: &str, what: &str) -> Result<BitString, CliError> {
    text.parse()
        .map_err(|e| CliError::Validation(format!("{what}: {e}")))
}
