use serde::{Deserialize, Serialize};

use crate::error::{check_positive, Result};

/// Which baseline prior the regression coefficients get.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Baseline {
    #[serde(rename = "hs")]
    Horseshoe,
    #[serde(rename = "ng")]
    NormalGamma,
    #[serde(rename = "n")]
    NormalFull,
}

impl Baseline {
    pub fn tag(&self) -> &'static str {
        match self {
            Baseline::Horseshoe => "hs",
            Baseline::NormalGamma => "ng",
            Baseline::NormalFull => "n",
        }
    }
}

/// Fixed prior constants.
///
/// `alpha_shape`/`alpha_rate` give the Gamma prior on the DP mass with mean
/// `alpha_shape / alpha_rate`. The σ² prior is InvGamma(`alpha0`, `theta0`)
/// and the covariate variances have InvGamma(ν₀/2, ν₀s₀²/2) priors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Hyperparams {
    pub n0: f64,
    pub m0: f64,
    pub nu0: f64,
    pub s0_sq: f64,
    pub alpha0: f64,
    pub theta0: f64,
    pub alpha_shape: f64,
    pub alpha_rate: f64,
    pub nu_mu: f64,
    pub baseline: Baseline,
    pub normalfull_eta_var: f64,
    /// Wishart degrees of freedom; `None` means p + 1.
    pub normalfull_wishart_df: Option<f64>,
    pub normalfull_wishart_scale: f64,
}

impl Default for Hyperparams {
    fn default() -> Self {
        Self {
            n0: 0.1,
            m0: 0.0,
            nu0: 2.0,
            s0_sq: 2.0,
            alpha0: 2.0,
            theta0: 2.0,
            alpha_shape: 2.0,
            alpha_rate: 2.0,
            nu_mu: 100.0,
            baseline: Baseline::Horseshoe,
            normalfull_eta_var: 100.0,
            normalfull_wishart_df: None,
            normalfull_wishart_scale: 10.0,
        }
    }
}

impl Hyperparams {
    pub fn with_baseline(baseline: Baseline) -> Self {
        Self {
            baseline,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_positive("n0", self.n0)?;
        check_positive("nu0", self.nu0)?;
        check_positive("s0_sq", self.s0_sq)?;
        check_positive("alpha0", self.alpha0)?;
        check_positive("theta0", self.theta0)?;
        check_positive("alpha_shape", self.alpha_shape)?;
        check_positive("alpha_rate", self.alpha_rate)?;
        check_positive("nu_mu", self.nu_mu)?;
        check_positive("normalfull_eta_var", self.normalfull_eta_var)?;
        check_positive("normalfull_wishart_scale", self.normalfull_wishart_scale)?;
        if let Some(df) = self.normalfull_wishart_df {
            check_positive("normalfull_wishart_df", df)?;
        }
        if !self.m0.is_finite() {
            return Err(crate::Error::InvalidParameter("m0 must be finite".into()));
        }
        Ok(())
    }

    pub fn wishart_df(&self, p: usize) -> f64 {
        self.normalfull_wishart_df.unwrap_or((p + 1) as f64)
    }

    /// InvGamma shape and igscale of the covariate-variance prior.
    pub fn tau_prior(&self) -> (f64, f64) {
        (self.nu0 / 2.0, self.nu0 * self.s0_sq / 2.0)
    }
}
