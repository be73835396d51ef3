//! Model parameters and the pluggable energy specifications.
//!
//! All quantities are in the model's nondimensional units. The mixture
//! energy is `U(τ,c) = Û(τ,c) + W(c,θ)` where phase 1 is incompressible
//! with specific volume `τ₁` and phase 2 carries an energy `f(τ₂)` with
//! `f' < 0 < f''` (`-log` by default).

use std::fmt;
use std::sync::Arc;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Evaluator for a custom compressible-phase energy `f` on `(τ₁, ∞)`.
///
/// Implementations must satisfy `f' < 0 < f''` on the whole domain.
pub trait Phase2Energy: Send + Sync {
    fn f(&self, tau2: f64) -> f64;
    fn df(&self, tau2: f64) -> f64;
    fn ddf(&self, tau2: f64) -> f64;
}

/// Energy of the compressible phase 2.
#[derive(Clone)]
pub enum Phase2EnergySpec {
    /// `f(τ₂) = -log τ₂`; the exemplary choice with closed-form Gibbs data.
    NegLog,
    /// User-supplied `f` with `f' < 0 < f''`.
    Custom(Arc<dyn Phase2Energy>),
}

impl Phase2EnergySpec {
    pub fn is_neg_log(&self) -> bool {
        matches!(self, Phase2EnergySpec::NegLog)
    }

    pub fn f(&self, tau2: f64) -> f64 {
        match self {
            Phase2EnergySpec::NegLog => -tau2.ln(),
            Phase2EnergySpec::Custom(e) => e.f(tau2),
        }
    }

    pub fn df(&self, tau2: f64) -> f64 {
        match self {
            Phase2EnergySpec::NegLog => -1.0 / tau2,
            Phase2EnergySpec::Custom(e) => e.df(tau2),
        }
    }

    pub fn ddf(&self, tau2: f64) -> f64 {
        match self {
            Phase2EnergySpec::NegLog => 1.0 / (tau2 * tau2),
            Phase2EnergySpec::Custom(e) => e.ddf(tau2),
        }
    }
}

impl fmt::Debug for Phase2EnergySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Phase2EnergySpec::NegLog => write!(f, "NegLog"),
            Phase2EnergySpec::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Phase2Json {
    kind: String,
}

impl Serialize for Phase2EnergySpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let kind = match self {
            Phase2EnergySpec::NegLog => "neglog",
            Phase2EnergySpec::Custom(_) => "custom",
        };
        Phase2Json { kind: kind.to_string() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Phase2EnergySpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = Phase2Json::deserialize(d)?;
        match j.kind.as_str() {
            "neglog" => Ok(Phase2EnergySpec::NegLog),
            other => Err(D::Error::custom(format!(
                "phase-2 energy kind {other:?} is not deserializable (only \"neglog\")"
            ))),
        }
    }
}

/// One term `(a + b·(θ-θ*))·(c-c*)^k` of a polynomial mixing energy.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyTerm {
    pub power: u32,
    pub coeff: f64,
    #[serde(default)]
    pub theta_coeff: f64,
}

/// Mixing energy `W(c, θ)` undergoing the convex / double-well transition
/// across the critical temperature.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MixingEnergySpec {
    /// `W = a(c-c*)^4 + b(θ-θ*)(c-c*)^2` with `a, b > 0`.
    QuarticSymmetric { a: f64, b: f64, c_star: f64 },
    /// `W = Σ (coeff + theta_coeff (θ-θ*)) (c-c*)^power`.
    Polynomial { c_star: f64, terms: Vec<PolyTerm> },
}

impl Default for MixingEnergySpec {
    fn default() -> Self {
        MixingEnergySpec::QuarticSymmetric { a: 1.0, b: 1.0, c_star: 0.5 }
    }
}

impl MixingEnergySpec {
    pub fn c_star(&self) -> f64 {
        match self {
            MixingEnergySpec::QuarticSymmetric { c_star, .. } => *c_star,
            MixingEnergySpec::Polynomial { c_star, .. } => *c_star,
        }
    }

    /// `(W, W_c, W_cc)` at `(c, θ)` relative to the critical temperature.
    pub fn eval(&self, c: f64, theta: f64, theta_star: f64) -> (f64, f64, f64) {
        let dth = theta - theta_star;
        match self {
            MixingEnergySpec::QuarticSymmetric { a, b, c_star } => {
                let s = c - c_star;
                let s2 = s * s;
                (
                    a * s2 * s2 + b * dth * s2,
                    4.0 * a * s2 * s + 2.0 * b * dth * s,
                    12.0 * a * s2 + 2.0 * b * dth,
                )
            }
            MixingEnergySpec::Polynomial { c_star, terms } => {
                let s = c - c_star;
                let mut w = 0.0;
                let mut wc = 0.0;
                let mut wcc = 0.0;
                for t in terms {
                    let k = t.power;
                    let a = t.coeff + t.theta_coeff * dth;
                    w += a * s.powi(k as i32);
                    if k >= 1 {
                        wc += a * k as f64 * s.powi(k as i32 - 1);
                    }
                    if k >= 2 {
                        wcc += a * (k * (k - 1)) as f64 * s.powi(k as i32 - 2);
                    }
                }
                (w, wc, wcc)
            }
        }
    }
}

/// All physical constants of a model instance.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    /// Specific volume of the incompressible phase, `0 < τ₁ < 1`.
    pub tau1: f64,
    /// Capillarity coefficient `δ > 0`.
    pub delta: f64,
    /// Shear viscosity `μ ≥ 0`.
    pub mu: f64,
    /// Bulk viscosity `λ` with `2μ + λ ≥ 0`.
    #[serde(rename = "lambda")]
    pub lambda_v: f64,
    /// Critical temperature `θ*`.
    pub theta_star: f64,
    /// Mixing energy specification.
    #[serde(rename = "W", default)]
    pub w_spec: MixingEnergySpec,
    /// Compressible-phase energy specification.
    #[serde(rename = "f", default = "default_f_spec")]
    pub f_spec: Phase2EnergySpec,
}

fn default_f_spec() -> Phase2EnergySpec {
    Phase2EnergySpec::NegLog
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams {
            tau1: 0.5,
            delta: 1.0,
            mu: 0.5,
            lambda_v: 0.0,
            theta_star: 1.0,
            w_spec: MixingEnergySpec::default(),
            f_spec: Phase2EnergySpec::NegLog,
        }
    }
}

impl ModelParams {
    /// Effective longitudinal viscosity `ν = 2μ + λ`.
    pub fn nu(&self) -> f64 {
        2.0 * self.mu + self.lambda_v
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau1 > 0.0 && self.tau1 < 1.0) {
            return Err(Error::domain(format!("tau1 = {} not in (0,1)", self.tau1)));
        }
        if !(self.delta > 0.0) {
            return Err(Error::domain(format!("delta = {} must be > 0", self.delta)));
        }
        if !(self.mu >= 0.0) {
            return Err(Error::domain(format!("mu = {} must be >= 0", self.mu)));
        }
        if !(self.nu() >= 0.0) {
            return Err(Error::domain(format!("2*mu + lambda = {} must be >= 0", self.nu())));
        }
        match &self.w_spec {
            MixingEnergySpec::QuarticSymmetric { a, b, c_star } => {
                if !(*a > 0.0 && *b > 0.0) {
                    return Err(Error::domain("quartic coefficients a, b must be positive"));
                }
                if !(*c_star > 0.0 && *c_star < 1.0) {
                    return Err(Error::domain(format!("c_star = {c_star} not in (0,1)")));
                }
            }
            MixingEnergySpec::Polynomial { c_star, terms } => {
                if !(*c_star > 0.0 && *c_star < 1.0) {
                    return Err(Error::domain(format!("c_star = {c_star} not in (0,1)")));
                }
                if terms.is_empty() {
                    return Err(Error::domain("polynomial mixing energy needs terms"));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("ModelParams serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let p: ModelParams =
            serde_json::from_str(s).map_err(|e| Error::domain(format!("bad config: {e}")))?;
        p.validate()?;
        Ok(p)
    }
}

/// A point of the fluid state space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluidState {
    /// Mass density `ρ > 0`.
    pub rho: f64,
    /// Velocity.
    pub u: f64,
    /// Mass fraction of phase 1, in `(0,1)`.
    pub c: f64,
}

impl FluidState {
    pub fn new(rho: f64, u: f64, c: f64) -> Self {
        FluidState { rho, u, c }
    }

    /// Specific volume `τ = 1/ρ`.
    pub fn tau(&self) -> f64 {
        1.0 / self.rho
    }

    /// Specific volume of the compressible phase, `τ₂ = (τ - cτ₁)/(1-c)`.
    pub fn tau2(&self, params: &ModelParams) -> f64 {
        (self.tau() - self.c * params.tau1) / (1.0 - self.c)
    }
}
