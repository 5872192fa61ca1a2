//! Tunable constants of the level structures.
//!
//! Thresholds are kept as reals and turned into integer degree bounds with
//! [`PartitionConfig::out_cap`] (largest out-degree allowed) and
//! [`PartitionConfig::down_min`] (smallest degree into the level below).

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("alpha must be at least 1, got {0}")]
    Alpha(usize),
    #[error("epsilon must be positive and finite, got {0}")]
    Epsilon(f64),
    #[error("beta must be at least 2, got {0}")]
    Beta(f64),
    #[error("d must be positive, got {0}")]
    D(f64),
    #[error("level count must be at least 1")]
    Levels,
}

const SLACK: f64 = 1e-9;

pub(crate) fn floor_int(x: f64) -> usize {
    (x + SLACK).floor().max(0.0) as usize
}

pub(crate) fn ceil_int(x: f64) -> usize {
    (x - SLACK).ceil().max(0.0) as usize
}

/// `ceil(log2 n)`, at least 1.
pub fn ceil_log2(n: usize) -> u32 {
    (n.max(2).next_power_of_two().trailing_zeros()).max(1)
}

/// Thresholds for the fixed-`d` level structure.
#[derive(Clone, Debug, PartialEq)]
pub struct PartitionConfig {
    pub beta: f64,
    pub d: f64,
    pub levels: u32,
    pub epsilon: Option<f64>,
}

impl PartitionConfig {
    /// `d = 4·α_max`, `β = 5`.
    pub fn for_alpha(alpha_max: usize, n: usize) -> Result<Self, ConfigError> {
        if alpha_max == 0 {
            return Err(ConfigError::Alpha(alpha_max));
        }
        Ok(Self {
            beta: 5.0,
            d: 4.0 * alpha_max as f64,
            levels: level_cap(n, 2.0),
            epsilon: None,
        })
    }

    /// `d = (2+ε)·α_max`, `β = 2 + 3ε`.
    pub fn with_epsilon(alpha_max: usize, n: usize, epsilon: f64) -> Result<Self, ConfigError> {
        if alpha_max == 0 {
            return Err(ConfigError::Alpha(alpha_max));
        }
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(ConfigError::Epsilon(epsilon));
        }
        Ok(Self {
            beta: 2.0 + 3.0 * epsilon,
            d: (2.0 + epsilon) * alpha_max as f64,
            levels: level_cap(n, (2.0 + epsilon) / 2.0),
            epsilon: Some(epsilon),
        })
    }

    pub fn custom(beta: f64, d: f64, levels: u32) -> Result<Self, ConfigError> {
        if !(beta >= 2.0 && beta.is_finite()) {
            return Err(ConfigError::Beta(beta));
        }
        if !(d > 0.0 && d.is_finite()) {
            return Err(ConfigError::D(d));
        }
        if levels == 0 {
            return Err(ConfigError::Levels);
        }
        Ok(Self {
            beta,
            d,
            levels,
            epsilon: None,
        })
    }

    /// Invariant 1: `deg⁺(v) <= floor(β·d)`.
    pub fn out_cap(&self) -> usize {
        floor_int(self.beta * self.d)
    }

    /// Invariant 2: `deg_{Z_{l(v)-1}}(v) >= ceil(d)`.
    pub fn down_min(&self) -> usize {
        ceil_int(self.d)
    }

    /// Largest colour the engine can hand out when degrees never exceed
    /// `delta_max`.
    pub fn colour_bound(&self, delta_max: usize) -> usize {
        delta_max + self.out_cap()
    }
}

/// Twice the level count a valid partition needs with shrink factor `base`,
/// plus one.
fn level_cap(n: usize, base: f64) -> u32 {
    let n = n.max(2) as f64;
    let needed = (n.ln() / base.ln()).floor() as u32 + 1;
    2 * needed + 1
}

/// Thresholds for the grouped level structure: levels are blocked into
/// groups of `group_size` and a vertex in group `g` has cap `d(v) = 2^g`.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupedConfig {
    pub beta: f64,
    pub group_size: u32,
    pub groups: u32,
    pub epsilon: Option<f64>,
}

impl GroupedConfig {
    /// `L = 1 + ceil(log2 n)`, `β = 5`, `ceil(log2 n)` groups.
    pub fn new(n: usize) -> Self {
        let log = ceil_log2(n);
        Self {
            beta: 5.0,
            group_size: 1 + log,
            groups: log,
            epsilon: None,
        }
    }

    /// `L = 1 + ceil((2/ε)·log2 n)`, `β = 2 + 3ε`.
    pub fn with_epsilon(n: usize, epsilon: f64) -> Result<Self, ConfigError> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(ConfigError::Epsilon(epsilon));
        }
        let log = ceil_log2(n);
        let lg = (n.max(2) as f64).log2();
        Ok(Self {
            beta: 2.0 + 3.0 * epsilon,
            group_size: 1 + ceil_int(2.0 / epsilon * lg) as u32,
            groups: log,
            epsilon: Some(epsilon),
        })
    }

    pub fn with_beta(mut self, beta: f64) -> Result<Self, ConfigError> {
        if !(beta >= 2.0 && beta.is_finite()) {
            return Err(ConfigError::Beta(beta));
        }
        self.beta = beta;
        Ok(self)
    }

    /// Total number of levels `k = L·groups`.
    pub fn levels(&self) -> u32 {
        self.group_size * self.groups
    }

    /// 1-based group of a level.
    pub fn group_of(&self, level: u32) -> u32 {
        level.div_ceil(self.group_size).max(1)
    }

    /// `d(v) = 2^g`.
    pub fn cap_of_group(&self, group: u32) -> usize {
        1usize << group
    }

    pub fn cap_at(&self, level: u32) -> usize {
        self.cap_of_group(self.group_of(level))
    }

    /// Invariant 1': `deg⁺(v) <= 2β·d(v)`.
    pub fn out_cap(&self, level: u32) -> usize {
        floor_int(2.0 * self.beta * self.cap_at(level) as f64)
    }

    /// Invariant 2': `deg_{Z_{l(v)-1}}(v) >= d(v)`.
    pub fn down_min(&self, level: u32) -> usize {
        self.cap_at(level)
    }

    /// Invariant 3' bound for an edge whose lower endpoint is at `lower_level`.
    pub fn colour_bound(&self, edge_delta: usize, lower_level: u32) -> usize {
        floor_int(edge_delta as f64 + 2.0 * self.beta * self.cap_at(lower_level) as f64)
    }
}
