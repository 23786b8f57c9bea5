//! JSON serialization of finite MDPs.
//!
//! The on-disk document is
//!
//! ```json
//! {
//!   "states": 2,
//!   "actions": 1,
//!   "horizon": 1,
//!   "start": [1.0, 0.0],
//!   "reward": [1.0, 0.0],
//!   "transition": [[[0.0, 1.0]], [[1.0, 0.0]]]
//! }
//! ```
//!
//! with `transition[s][a]` a probability row over next states. The parser
//! validates every simplex invariant and names the offending index on
//! failure.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mdp::FiniteMdp;
use crate::simplex::Distribution;

#[derive(Debug, Serialize, Deserialize)]
struct MdpDocument {
    states: usize,
    actions: usize,
    horizon: u32,
    start: Vec<f64>,
    reward: Vec<f64>,
    transition: Vec<Vec<Vec<f64>>>,
}

fn parse_error(path: &str, message: String) -> Error {
    Error::Parse {
        path: path.to_string(),
        message,
    }
}

/// Parse and validate an MDP document.
pub fn mdp_from_json(text: &str, path: &str) -> Result<FiniteMdp> {
    let doc: MdpDocument = serde_json::from_str(text)
        .map_err(|e| parse_error(path, format!("invalid JSON: {e}")))?;
    if doc.states == 0 || doc.actions == 0 {
        return Err(parse_error(
            path,
            "states and actions must both be positive".into(),
        ));
    }
    if doc.start.len() != doc.states {
        return Err(parse_error(
            path,
            format!("start has {} entries, expected {}", doc.start.len(), doc.states),
        ));
    }
    if doc.reward.len() != doc.states {
        return Err(parse_error(
            path,
            format!("reward has {} entries, expected {}", doc.reward.len(), doc.states),
        ));
    }
    if doc.transition.len() != doc.states {
        return Err(parse_error(
            path,
            format!(
                "transition has {} state rows, expected {}",
                doc.transition.len(),
                doc.states
            ),
        ));
    }
    let start = Distribution::new(doc.start)
        .map_err(|e| parse_error(path, format!("start: {e}")))?;
    let mut transition = Vec::with_capacity(doc.states);
    for (s, row) in doc.transition.into_iter().enumerate() {
        if row.len() != doc.actions {
            return Err(parse_error(
                path,
                format!(
                    "transition[{s}] has {} action rows, expected {}",
                    row.len(),
                    doc.actions
                ),
            ));
        }
        let mut dists = Vec::with_capacity(doc.actions);
        for (a, weights) in row.into_iter().enumerate() {
            if weights.len() != doc.states {
                return Err(parse_error(
                    path,
                    format!(
                        "transition[{s}][{a}] has {} entries, expected {}",
                        weights.len(),
                        doc.states
                    ),
                ));
            }
            let dist = Distribution::new(weights)
                .map_err(|e| parse_error(path, format!("transition[{s}][{a}]: {e}")))?;
            dists.push(dist);
        }
        transition.push(dists);
    }
    FiniteMdp::new(transition, start, doc.reward, doc.horizon)
}

/// Serialize an MDP to the document format.
pub fn mdp_to_json(mdp: &FiniteMdp) -> String {
    let doc = MdpDocument {
        states: mdp.num_states(),
        actions: mdp.num_actions(),
        horizon: mdp.horizon(),
        start: mdp.start().weights().to_vec(),
        reward: mdp.reward().to_vec(),
        transition: (0..mdp.num_states())
            .map(|s| {
                (0..mdp.num_actions())
                    .map(|a| mdp.transition(s, a).weights().to_vec())
                    .collect()
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("MDP document serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_swap() {
        let mdp = FiniteMdp::swap();
        let text = mdp_to_json(&mdp);
        let back = mdp_from_json(&text, "swap").unwrap();
        assert_eq!(back.num_states(), 2);
        assert_eq!(back.start().weights(), mdp.start().weights());
        assert_eq!(back.reward(), mdp.reward());
    }

    #[test]
    fn corrupted_transition_row_names_the_index() {
        let text = r#"{
            "states": 2, "actions": 1, "horizon": 1,
            "start": [1.0, 0.0],
            "reward": [1.0, 0.0],
            "transition": [[[0.0, 0.9]], [[1.0, 0.0]]]
        }"#;
        let err = mdp_from_json(text, "bad.json").unwrap_err();
        let message = err.to_string();
        assert!(message.contains("transition[0][0]"), "message: {message}");
        assert_eq!(err.exit_status(), 2);
    }

    #[test]
    fn shape_mismatches_are_reported() {
        let text = r#"{
            "states": 2, "actions": 2, "horizon": 0,
            "start": [0.5, 0.5],
            "reward": [0.0, 0.0],
            "transition": [[[1.0, 0.0]], [[1.0, 0.0], [0.0, 1.0]]]
        }"#;
        let err = mdp_from_json(text, "ragged.json").unwrap_err();
        assert!(err.to_string().contains("transition[0]"));
    }
}
