use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::scalar::Real;
use crate::tolerances;

use super::FlowError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// Projected consensus only; states must start on their manifolds.
    Plain,
    /// Adds the pull back onto each manifold; any initial state is allowed.
    Restoring,
    /// Restoring flow with a consensus gain `α` and per-agent gains `α_i`.
    Gains,
}

impl Variant {
    pub fn restores(self) -> bool {
        !matches!(self, Variant::Plain)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Integrator {
    Euler,
    Rk4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Init {
    /// `x_i(0) = A_i⁺ b_i`.
    MinNorm,
    /// Min-norm point plus `P_i z`, `z` uniform in `[−1, 1]ⁿ`.
    TangentNoise,
    /// `z` uniform in `[−1, 1]ⁿ`, ignoring the manifold. Restoring flows only.
    FreeRandom,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StepSize<T> {
    /// `h = 1 / (2 α d_max + c)`; see [`super::auto_step`].
    Auto,
    Fixed(T),
}

/// Everything that selects and drives one simulated run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlowConfig<T> {
    pub variant: Variant,
    /// Consensus gain; used by `Gains` only.
    pub alpha: T,
    /// Per-agent restoring gains for `Gains`; empty means all ones.
    pub alpha_i: Vec<T>,
    pub integrator: Integrator,
    pub step: StepSize<T>,
    pub max_steps: usize,
    pub convergence_tol: T,
    pub seed: u64,
    pub init: Init,
    /// Trace sampling period in steps.
    pub record_every: usize,
}

impl<T: Real> Default for FlowConfig<T> {
    fn default() -> Self {
        Self {
            variant: Variant::Plain,
            alpha: T::one(),
            alpha_i: Vec::new(),
            integrator: Integrator::Euler,
            step: StepSize::Auto,
            max_steps: 1_000_000,
            convergence_tol: T::of(tolerances::DEFAULT_CONVERGENCE),
            seed: 0,
            init: Init::MinNorm,
            record_every: 10,
        }
    }
}

impl<T: Real> FlowConfig<T> {
    pub fn with_variant(mut self, variant: Variant) -> Self {
        self.variant = variant;
        self
    }

    pub fn with_init(mut self, init: Init) -> Self {
        self.init = init;
        self
    }

    pub fn with_integrator(mut self, integrator: Integrator) -> Self {
        self.integrator = integrator;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_tol(mut self, tol: T) -> Self {
        self.convergence_tol = tol;
        self
    }

    pub fn with_record_every(mut self, k: usize) -> Self {
        self.record_every = k;
        self
    }

    pub fn with_max_steps(mut self, k: usize) -> Self {
        self.max_steps = k;
        self
    }

    /// Per-agent restoring gains, resolved for `agents` agents.
    pub fn restoring_gains(&self, agents: usize) -> Result<Vec<T>, FlowError> {
        match self.variant {
            Variant::Gains if !self.alpha_i.is_empty() => {
                if self.alpha_i.len() != agents {
                    return Err(FlowError::BadGain(format!(
                        "{} per-agent gains for {agents} agents",
                        self.alpha_i.len()
                    )));
                }
                Ok(self.alpha_i.clone())
            }
            _ => Ok(vec![T::one(); agents]),
        }
    }

    pub fn validate(&self) -> Result<(), FlowError> {
        if self.variant == Variant::Gains {
            if !self.alpha.is_positive_finite() {
                return Err(FlowError::BadGain(format!("alpha = {}", self.alpha)));
            }
            if let Some(g) = self.alpha_i.iter().find(|g| !g.is_positive_finite()) {
                return Err(FlowError::BadGain(format!("alpha_i contains {g}")));
            }
        }
        if let StepSize::Fixed(h) = self.step {
            if !h.is_positive_finite() {
                return Err(FlowError::BadConfig(format!("step size {h} is not positive")));
            }
        }
        if !self.convergence_tol.is_positive_finite() {
            return Err(FlowError::BadConfig("convergence tolerance must be positive".into()));
        }
        if self.record_every == 0 {
            return Err(FlowError::BadConfig("record_every must be at least 1".into()));
        }
        if self.init == Init::FreeRandom && !self.variant.restores() {
            return Err(FlowError::BadConfig(
                "free-random initialization leaves the manifolds; it needs a restoring variant".into(),
            ));
        }
        Ok(())
    }
}

macro_rules! text_enum {
    ($ty:ident { $($text:literal $(| $alt:literal)* => $v:ident),+ $(,)? }) => {
        impl FromStr for $ty {
            type Err = FlowError;
            fn from_str(s: &str) -> Result<Self, FlowError> {
                match s {
                    $($text $(| $alt)* => Ok($ty::$v),)+
                    other => Err(FlowError::BadConfig(format!(
                        concat!("unknown ", stringify!($ty), " '{}'"), other
                    ))),
                }
            }
        }
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(match self { $($ty::$v => $text,)+ })
            }
        }
    };
}

text_enum!(Variant { "plain" => Plain, "restoring" => Restoring, "gains" => Gains });
text_enum!(Integrator { "euler" => Euler, "rk4" => Rk4 });
text_enum!(Init {
    "min-norm" | "min_norm" => MinNorm,
    "tangent-noise" | "tangent_noise" | "min_norm_plus_tangent_noise" => TangentNoise,
    "free-random" | "free_random" => FreeRandom,
});

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        let base = FlowConfig::<f64>::default();
        assert!(base.validate().is_ok());
        let mut c = base.clone().with_variant(Variant::Gains);
        c.alpha = 0.0;
        assert!(matches!(c.validate(), Err(FlowError::BadGain(_))));
        let mut c = base.clone().with_variant(Variant::Gains);
        c.alpha_i = vec![1.0, -2.0];
        assert!(matches!(c.validate(), Err(FlowError::BadGain(_))));
        assert!(matches!(c.restoring_gains(3), Err(FlowError::BadGain(_))));
        let mut c = base.clone();
        c.step = StepSize::Fixed(0.0);
        assert!(c.validate().is_err());
        assert!(base.clone().with_init(Init::FreeRandom).validate().is_err());
        assert!(base
            .with_variant(Variant::Restoring)
            .with_init(Init::FreeRandom)
            .validate()
            .is_ok());
    }

    #[test]
    fn text_forms() {
        assert_eq!("rk4".parse::<Integrator>().unwrap(), Integrator::Rk4);
        assert_eq!("tangent-noise".parse::<Init>().unwrap(), Init::TangentNoise);
        assert_eq!(Variant::Restoring.to_string(), "restoring");
        assert!("bogus".parse::<Variant>().is_err());
    }
}
