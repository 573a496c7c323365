//! Resource caps shared by the exact (exponential) computations.

/// Environment variable that overrides [`Caps::budget`].
pub const BUDGET_ENV: &str = "RANKPROF_BUDGET";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Largest `|Σ|^(n+1)` for which the ball `Σ^{≤n}` is materialized.
    pub ball_cap: u128,
    /// Elementary-step budget for a single type or game computation.
    pub budget: u64,
    /// Largest transition monoid that will be built.
    pub monoid_cap: usize,
    /// Largest reachable `T_q(Σ) × Syn(L)` product explored by the global rank search.
    pub product_cap: usize,
    /// Largest horizon for exact values over a one-letter alphabet.
    pub unary_horizon: usize,
    /// Largest horizon for exact values over larger alphabets.
    pub general_horizon: usize,
    /// Default `q_max` for the global rank search, unary and otherwise.
    pub unary_q_max: usize,
    pub general_q_max: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            ball_cap: 1 << 22,
            budget: 100_000_000,
            monoid_cap: 5000,
            product_cap: 200_000,
            unary_horizon: 64,
            general_horizon: 10,
            unary_q_max: 6,
            general_q_max: 3,
        }
    }
}

impl Caps {
    /// Defaults, with the budget taken from `RANKPROF_BUDGET` when it parses.
    pub fn from_env() -> Self {
        let mut caps = Caps::default();
        if let Some(b) = std::env::var(BUDGET_ENV).ok().and_then(|s| s.trim().parse().ok()) {
            caps.budget = b;
        }
        caps
    }
}

impl Caps {
    pub fn horizon_cap(&self, unary: bool) -> usize {
        if unary {
            self.unary_horizon
        } else {
            self.general_horizon
        }
    }

    pub fn q_max(&self, unary: bool) -> usize {
        if unary {
            self.unary_q_max
        } else {
            self.general_q_max
        }
    }
}
