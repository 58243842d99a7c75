use nalgebra::DVector;

/// Bounds applied to sampled prior variances so that precisions stay finite.
pub(crate) const SCALE_FLOOR: f64 = 1e-250;
pub(crate) const SCALE_CEIL: f64 = 1e250;

pub(crate) fn clamp_scale(x: f64) -> f64 {
    x.clamp(SCALE_FLOOR, SCALE_CEIL)
}

/// Baseline-specific shrinkage parameters of one cluster.
#[derive(Clone, Debug, PartialEq)]
pub enum Locals {
    /// Horseshoe with the inverse-gamma auxiliary augmentation: γ²ₗ | νₗ and
    /// ζ² | ξ are inverse-gamma, so every conditional is conjugate.
    Horseshoe {
        gamma2: DVector<f64>,
        zeta2: f64,
        nu: DVector<f64>,
        xi: f64,
    },
    /// Normal-gamma: ψₗ ~ Ga(λ, rate γ⁻²/2).
    NormalGamma {
        lambda: f64,
        gamma_inv2: f64,
        psi: DVector<f64>,
    },
    /// Coefficients share the state-level (η, Σ).
    NormalFull,
}

/// θⱼ = (μ, β, m, τ) plus the shrinkage locals.
#[derive(Clone, Debug, PartialEq)]
pub struct ClusterParams {
    pub mu: f64,
    pub beta: DVector<f64>,
    pub m: DVector<f64>,
    pub tau: DVector<f64>,
    pub locals: Locals,
}

impl ClusterParams {
    pub fn p(&self) -> usize {
        self.beta.len()
    }

    /// (μ, β₁, …, β_p)
    pub fn coefficients(&self) -> DVector<f64> {
        let p = self.p();
        DVector::from_fn(p + 1, |k, _| if k == 0 { self.mu } else { self.beta[k - 1] })
    }

    pub fn set_coefficients(&mut self, c: &DVector<f64>) {
        self.mu = c[0];
        self.beta = c.rows(1, c.len() - 1).into_owned();
    }

    pub fn is_valid(&self) -> bool {
        let positive = |v: &DVector<f64>| v.iter().all(|x| *x > 0.0 && x.is_finite());
        let finite = self.mu.is_finite() && self.beta.iter().all(|b| b.is_finite()) && self.m.iter().all(|b| b.is_finite());
        let locals = match &self.locals {
            Locals::Horseshoe { gamma2, zeta2, nu, xi } => {
                positive(gamma2) && positive(nu) && *zeta2 > 0.0 && *xi > 0.0
            }
            Locals::NormalGamma { lambda, gamma_inv2, psi } => {
                *lambda > 0.0 && *gamma_inv2 > 0.0 && positive(psi)
            }
            Locals::NormalFull => true,
        };
        finite && positive(&self.tau) && locals
    }
}
