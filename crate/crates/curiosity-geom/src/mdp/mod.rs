//! Exact machinery for episodic finite MDPs: the agent-environment kernel,
//! occupancies, returns, Monte Carlo cross-checks, and the augmented counter
//! chain whose stationary distribution reproduces the occupancy.

mod augmented;
mod format;
mod occupancy;
mod simulate;

pub use augmented::{augmented_stationary, random_augmented_init, AugmentedStationary};
pub use format::{mdp_from_json, mdp_to_json};
pub use occupancy::{agent_env_kernel, occupancy, occupancy_return, Occupancy};
pub(crate) use occupancy::row_times_matrix;
pub use simulate::{empirical_occupancy, rollout_return};

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::sample_interior_simplex;
use crate::simplex::{check_same_dim, Distribution};

/// An episodic finite MDP with state-based rewards. Episodes visit
/// `horizon + 1` states.
#[derive(Debug, Clone)]
pub struct FiniteMdp {
    /// transition[s][a] is the next-state distribution for action a in s.
    transition: Vec<Vec<Distribution>>,
    start: Distribution,
    reward: Vec<f64>,
    horizon: u32,
    num_actions: usize,
}

impl FiniteMdp {
    pub fn new(
        transition: Vec<Vec<Distribution>>,
        start: Distribution,
        reward: Vec<f64>,
        horizon: u32,
    ) -> Result<Self> {
        let d = start.dim();
        check_same_dim(transition.len(), d)?;
        check_same_dim(reward.len(), d)?;
        if reward.iter().any(|r| !r.is_finite()) {
            return Err(Error::InvalidArgument("non-finite reward entry".into()));
        }
        let num_actions = transition.first().map_or(0, Vec::len);
        if num_actions == 0 {
            return Err(Error::InvalidArgument("MDP needs at least one action".into()));
        }
        for (s, row) in transition.iter().enumerate() {
            check_same_dim(row.len(), num_actions)?;
            for (a, dist) in row.iter().enumerate() {
                if dist.dim() != d {
                    return Err(Error::InvalidArgument(format!(
                        "transition[{s}][{a}] has dimension {}, expected {d}",
                        dist.dim()
                    )));
                }
            }
        }
        Ok(Self {
            transition,
            start,
            reward,
            horizon,
            num_actions,
        })
    }

    pub fn num_states(&self) -> usize {
        self.start.dim()
    }

    pub fn num_actions(&self) -> usize {
        self.num_actions
    }

    pub fn horizon(&self) -> u32 {
        self.horizon
    }

    pub fn start(&self) -> &Distribution {
        &self.start
    }

    pub fn reward(&self) -> &[f64] {
        &self.reward
    }

    pub fn transition(&self, s: usize, a: usize) -> &Distribution {
        &self.transition[s][a]
    }

    /// Replace the horizon, keeping dynamics and rewards.
    pub fn with_horizon(mut self, horizon: u32) -> Self {
        self.horizon = horizon;
        self
    }

    /// Two-state deterministic swap with start state 0 and reward (1, 0):
    /// the smallest fixture with a non-trivial occupancy.
    pub fn swap() -> Self {
        let to = |s| Distribution::point_mass(2, s);
        Self::new(
            vec![vec![to(1)], vec![to(0)]],
            Distribution::point_mass(2, 0),
            vec![1.0, 0.0],
            1,
        )
        .unwrap()
    }

    /// Teleport MDP: one action per state, each action jumps deterministically
    /// to its index, uniform start. Makes (asymptotically) every interior
    /// occupancy reachable, so occupancy-space optima are meaningful targets
    /// for policy optimization.
    pub fn teleport(num_states: usize, horizon: u32, reward: Vec<f64>) -> Result<Self> {
        check_same_dim(reward.len(), num_states)?;
        let transition = (0..num_states)
            .map(|_| {
                (0..num_states)
                    .map(|a| Distribution::point_mass(num_states, a))
                    .collect()
            })
            .collect();
        Self::new(
            transition,
            Distribution::uniform(num_states),
            reward,
            horizon,
        )
    }

    /// Random MDP with interior transition rows, used by verification
    /// batteries.
    pub fn random(
        rng: &mut impl Rng,
        num_states: usize,
        num_actions: usize,
        horizon: u32,
    ) -> Self {
        let transition = (0..num_states)
            .map(|_| {
                (0..num_actions)
                    .map(|_| {
                        Distribution::new(sample_interior_simplex(rng, num_states, 0.0)).unwrap()
                    })
                    .collect()
            })
            .collect();
        let start = Distribution::new(sample_interior_simplex(rng, num_states, 0.0)).unwrap();
        let reward = (0..num_states).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
        Self::new(transition, start, reward, horizon).unwrap()
    }
}

/// A tabular policy: one action distribution per state.
#[derive(Debug, Clone)]
pub struct Policy {
    rows: Vec<Distribution>,
}

impl Policy {
    pub fn new(rows: Vec<Distribution>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidArgument("policy needs at least one state".into()));
        }
        let m = rows[0].dim();
        for row in &rows {
            check_same_dim(row.dim(), m)?;
        }
        Ok(Self { rows })
    }

    pub fn uniform(num_states: usize, num_actions: usize) -> Self {
        Self {
            rows: vec![Distribution::uniform(num_actions); num_states],
        }
    }

    /// Deterministic policy taking `actions[s]` in state `s`.
    pub fn deterministic(num_actions: usize, actions: &[usize]) -> Self {
        Self {
            rows: actions
                .iter()
                .map(|&a| Distribution::point_mass(num_actions, a))
                .collect(),
        }
    }

    pub fn random(rng: &mut impl Rng, num_states: usize, num_actions: usize) -> Self {
        Self {
            rows: (0..num_states)
                .map(|_| Distribution::new(sample_interior_simplex(rng, num_actions, 0.0)).unwrap())
                .collect(),
        }
    }

    pub fn num_states(&self) -> usize {
        self.rows.len()
    }

    pub fn num_actions(&self) -> usize {
        self.rows[0].dim()
    }

    pub fn row(&self, s: usize) -> &Distribution {
        &self.rows[s]
    }

    pub(crate) fn check_compatible(&self, mdp: &FiniteMdp) -> Result<()> {
        check_same_dim(self.num_states(), mdp.num_states())?;
        check_same_dim(self.num_actions(), mdp.num_actions())
    }
}
