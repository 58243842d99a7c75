//! Optional TOML run configuration.
//!
//! ```toml
//! [hyper]            # any Hyperparams field; omitted keys keep defaults
//! alpha_shape = 2.0
//! alpha_rate = 20.0
//! nu_mu = 100.0
//!
//! [chain]
//! iterations = 5000
//! burn_in = 2000
//! thin = 1
//! seed = 7
//! ```
//!
//! Unknown keys are errors. Command-line flags override file values, and
//! the baseline always comes from `--baseline`.

use std::path::Path;

use dpmreg::model::Hyperparams;
use serde::Deserialize;

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainSection {
    pub iterations: Option<usize>,
    pub burn_in: Option<usize>,
    pub thin: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub hyper: Hyperparams,
    #[serde(default)]
    pub chain: ChainSection,
}

impl RunConfig {
    pub fn parse(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::Usage(format!("config: {e}")))
    }

    pub fn load(path: Option<&Path>) -> CliResult<Self> {
        match path {
            None => Ok(Self::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| CliError::io(p, e))?;
                Self::parse(&text).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))
            }
        }
    }
}
