//! Joint actions and the joint action space.
//!
//! A [`JointAction`] holds one marginal arm per player. Arms are stored
//! zero-based and displayed one-based, so `JointAction::new(vec![0, 1])`
//! prints as `(1,2)`. Internally joint actions are addressed by an
//! [`ActionId`], their rank in lexicographic order.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rank of a joint action in the lexicographic enumeration of the space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ActionId(pub usize);

impl ActionId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct JointAction(Vec<usize>);

impl JointAction {
    /// Zero-based marginal arms, one per player.
    pub fn new(arms: Vec<usize>) -> Self {
        Self(arms)
    }

    /// Builds from one-based arm labels, as written in tables and logs.
    pub fn from_one_based(arms: &[usize]) -> Result<Self> {
        arms.iter()
            .map(|&a| {
                a.checked_sub(1)
                    .ok_or_else(|| Error::Domain("one-based arm labels start at 1".into()))
            })
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }

    pub fn arms(&self) -> &[usize] {
        &self.0
    }

    pub fn arm(&self, player: usize) -> usize {
        self.0[player]
    }

    pub fn num_players(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Display for JointAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", a + 1)?;
        }
        f.write_str(")")
    }
}

/// The product of every player's arm set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionSpace {
    arms: Vec<usize>,
    strides: Vec<usize>,
    size: usize,
}

impl ActionSpace {
    pub fn new(arms_per_player: &[usize]) -> Result<Self> {
        if arms_per_player.is_empty() {
            return Err(Error::Domain("action space needs at least one player".into()));
        }
        if let Some(p) = arms_per_player.iter().position(|&k| k == 0) {
            return Err(Error::Domain(format!("player {} has no arms", p + 1)));
        }
        let mut strides = vec![1usize; arms_per_player.len()];
        for i in (0..arms_per_player.len() - 1).rev() {
            strides[i] = strides[i + 1]
                .checked_mul(arms_per_player[i + 1])
                .ok_or_else(|| Error::Domain("joint action space is too large".into()))?;
        }
        let size = strides[0]
            .checked_mul(arms_per_player[0])
            .ok_or_else(|| Error::Domain("joint action space is too large".into()))?;
        Ok(Self {
            arms: arms_per_player.to_vec(),
            strides,
            size,
        })
    }

    pub fn num_players(&self) -> usize {
        self.arms.len()
    }

    pub fn arms_per_player(&self) -> &[usize] {
        &self.arms
    }

    pub fn arms_of(&self, player: usize) -> usize {
        self.arms[player]
    }

    /// Number of joint actions, `K_1 * ... * K_M`.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn ids(&self) -> impl Iterator<Item = ActionId> {
        (0..self.size).map(ActionId)
    }

    pub fn contains(&self, id: ActionId) -> bool {
        id.0 < self.size
    }

    pub fn id_of(&self, action: &JointAction) -> Result<ActionId> {
        if action.num_players() != self.num_players() {
            return Err(Error::Domain(format!(
                "joint action {action} has {} components, expected {}",
                action.num_players(),
                self.num_players()
            )));
        }
        self.encode(action.arms())
    }

    /// Id of the joint action whose zero-based arms are given per player.
    pub fn encode(&self, arms: &[usize]) -> Result<ActionId> {
        if arms.len() != self.num_players() {
            return Err(Error::Domain(format!(
                "expected {} arms, got {}",
                self.num_players(),
                arms.len()
            )));
        }
        let mut id = 0;
        for (player, (&arm, &k)) in arms.iter().zip(&self.arms).enumerate() {
            if arm >= k {
                return Err(Error::Domain(format!(
                    "arm {} of player {} is out of range 1..={k}",
                    arm + 1,
                    player + 1
                )));
            }
            id += arm * self.strides[player];
        }
        Ok(ActionId(id))
    }

    pub fn action(&self, id: ActionId) -> JointAction {
        JointAction((0..self.num_players()).map(|p| self.arm(id, p)).collect())
    }

    /// Marginal arm of `player` inside the joint action `id`.
    pub fn arm(&self, id: ActionId, player: usize) -> usize {
        (id.0 / self.strides[player]) % self.arms[player]
    }

    pub fn check(&self, id: ActionId) -> Result<()> {
        if self.contains(id) {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "action id {} is outside a space of {} joint actions",
                id.0, self.size
            )))
        }
    }

    pub fn label(&self, id: ActionId) -> String {
        self.action(id).to_string()
    }
}
