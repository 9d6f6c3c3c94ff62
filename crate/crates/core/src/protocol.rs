//! The mUCB-Intervals player.
//!
//! Players agree on an ordering of all joint actions before play starts and
//! never communicate afterwards. Each keeps a *desired set* of candidate joint
//! actions in that order plus a round-robin cursor. After an initial sweep
//! that pulls every joint action once, each round goes as follows:
//!
//! 1. every player looks at the *considered* action `c` under the cursor;
//! 2. a player whose private interval for `c` lies strictly below the interval
//!    of some other joint action deviates from `c[i]` to signal elimination;
//!    everybody else plays `c[i]`;
//! 3. all players see the joint action actually taken. If it differs from `c`,
//!    everybody drops `c` from the desired set and the cursor moves to the
//!    element that followed it. Otherwise the cursor just advances.
//!
//! Because step 3 only depends on public information, all desired sets stay
//! identical. A singleton desired set is final: nobody signals any more.

use serde::Serialize;

use crate::action::{ActionId, ActionSpace, JointAction};
use crate::confidence::{interval_of, ArmStats, ConfidenceInterval, WidthParams};
use crate::environment::EnvironmentSpec;
use crate::error::{Error, Result};

/// Lexicographic order over joint actions, `(1,1), (1,2), (2,1), (2,2)` for
/// two players with two arms.
pub fn default_order(space: &ActionSpace) -> Vec<ActionId> {
    space.ids().collect()
}

/// [`default_order`] for the space described by an environment spec.
pub fn default_order_for(spec: &EnvironmentSpec) -> Result<Vec<JointAction>> {
    let space = spec.action_space()?;
    Ok(space.ids().map(|id| space.action(id)).collect())
}

/// Arm a player pulls instead of `considered[player]` to request elimination:
/// the next marginal arm, cyclically.
pub fn signal_arm(space: &ActionSpace, considered: ActionId, player: usize) -> usize {
    (space.arm(considered, player) + 1) % space.arms_of(player)
}

/// Ordered surviving candidates and the round-robin cursor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DesiredSet {
    actions: Vec<ActionId>,
    cursor: usize,
}

impl DesiredSet {
    pub fn new(order: Vec<ActionId>) -> Result<Self> {
        if order.is_empty() {
            return Err(Error::Domain("the desired set starts non-empty".into()));
        }
        let mut seen = order.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != order.len() {
            return Err(Error::Domain("the agreed order repeats a joint action".into()));
        }
        Ok(Self {
            actions: order,
            cursor: 0,
        })
    }

    pub fn actions(&self) -> &[ActionId] {
        &self.actions
    }

    pub fn cursor(&self) -> usize {
        self.cursor
    }

    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    pub fn is_committed(&self) -> bool {
        self.actions.len() == 1
    }

    pub fn contains(&self, id: ActionId) -> bool {
        self.actions.contains(&id)
    }

    /// The action under the cursor.
    pub fn considered(&self) -> ActionId {
        self.actions[self.cursor]
    }

    /// Moves the cursor to the next element, wrapping at the end.
    pub fn advance(&mut self) {
        self.cursor = (self.cursor + 1) % self.actions.len();
    }

    /// Removes the considered action; the cursor then points at its successor
    /// (wrapping). The last survivor is never removed.
    pub fn eliminate_considered(&mut self) -> Option<ActionId> {
        if self.is_committed() {
            return None;
        }
        let removed = self.actions.remove(self.cursor);
        if self.cursor == self.actions.len() {
            self.cursor = 0;
        }
        Some(removed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Phase {
    /// Sweeping every joint action once in the agreed order.
    Initialization,
    Main,
}

/// What a player learned from one round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RoundOutcome {
    pub considered: ActionId,
    pub taken: ActionId,
    pub eliminated: Option<ActionId>,
}

/// Private state of one player. Only the player's own rewards ever reach it;
/// everything else it learns comes from the public sequence of taken actions.
#[derive(Debug, Clone)]
pub struct PlayerState {
    player: usize,
    space: ActionSpace,
    order: Vec<ActionId>,
    stats: Vec<ArmStats>,
    desired: DesiredSet,
    params: WidthParams,
    phase: Phase,
    init_counter: usize,
}

impl PlayerState {
    /// `player` is zero-based. `order` must enumerate every joint action once.
    pub fn new(player: usize, space: ActionSpace, order: Vec<ActionId>, params: WidthParams) -> Result<Self> {
        if player >= space.num_players() {
            return Err(Error::Domain(format!(
                "player {} does not exist in a {}-player game",
                player + 1,
                space.num_players()
            )));
        }
        if space.arms_of(player) < 2 {
            return Err(Error::Domain(format!(
                "player {} needs at least two arms to signal",
                player + 1
            )));
        }
        if order.len() != space.size() || order.iter().any(|&id| !space.contains(id)) {
            return Err(Error::Domain(
                "the agreed order must list every joint action exactly once".into(),
            ));
        }
        let desired = DesiredSet::new(order.clone())?;
        Ok(Self {
            player,
            stats: vec![ArmStats::new(); space.size()],
            space,
            order,
            desired,
            params,
            phase: Phase::Initialization,
            init_counter: 0,
        })
    }

    /// A player using the lexicographic agreed order.
    pub fn with_default_order(player: usize, space: ActionSpace, params: WidthParams) -> Result<Self> {
        let order = default_order(&space);
        Self::new(player, space, order, params)
    }

    /// One state per player, all sharing the same agreed order.
    pub fn team(space: &ActionSpace, params: WidthParams) -> Result<Vec<Self>> {
        (0..space.num_players())
            .map(|p| Self::with_default_order(p, space.clone(), params))
            .collect()
    }

    pub fn player(&self) -> usize {
        self.player
    }

    pub fn space(&self) -> &ActionSpace {
        &self.space
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn desired(&self) -> &DesiredSet {
        &self.desired
    }

    pub fn stats(&self) -> &[ArmStats] {
        &self.stats
    }

    pub fn params(&self) -> &WidthParams {
        &self.params
    }

    pub fn interval(&self, id: ActionId) -> ConfidenceInterval {
        interval_of(&self.stats[id.0], &self.params)
    }

    pub fn intervals(&self) -> Vec<ConfidenceInterval> {
        self.space.ids().map(|id| self.interval(id)).collect()
    }

    /// The joint action scheduled this round: the next action of the sweep
    /// during initialization, the desired-set element under the cursor after.
    pub fn considered(&self) -> ActionId {
        match self.phase {
            Phase::Initialization => self.order[self.init_counter],
            Phase::Main => self.desired.considered(),
        }
    }

    /// A joint action whose interval lies strictly above the considered
    /// action's, if this player would signal this round. Eliminated actions
    /// keep their frozen intervals and still count.
    pub fn dominator(&self) -> Option<ActionId> {
        self.dominator_in(|id| self.interval(id))
    }

    fn dominator_in(&self, interval: impl Fn(ActionId) -> ConfidenceInterval) -> Option<ActionId> {
        if self.phase != Phase::Main || self.desired.is_committed() {
            return None;
        }
        let target = interval(self.desired.considered());
        // the largest lower endpoint decides whether any dominator exists
        let (best, lo) = self.space.ids().map(|id| (id, interval(id).lo)).fold(
            (ActionId(0), f64::NEG_INFINITY),
            |acc, (id, lo)| if lo > acc.1 { (id, lo) } else { acc },
        );
        (lo > target.hi).then_some(best)
    }

    /// Marginal arm this player pulls this round.
    pub fn choose_action(&self) -> usize {
        self.choose_given(self.dominator().is_some())
    }

    /// Like [`PlayerState::choose_action`] but reading intervals from the given
    /// table (indexed by [`ActionId`]) instead of this player's statistics.
    pub fn choose_with_intervals(&self, intervals: &[ConfidenceInterval]) -> Result<usize> {
        if intervals.len() != self.space.size() {
            return Err(Error::Domain(format!(
                "expected {} intervals, got {}",
                self.space.size(),
                intervals.len()
            )));
        }
        Ok(self.choose_given(self.dominator_in(|id| intervals[id.0]).is_some()))
    }

    fn choose_given(&self, signal: bool) -> usize {
        let c = self.considered();
        if signal {
            signal_arm(&self.space, c, self.player)
        } else {
            self.space.arm(c, self.player)
        }
    }

    /// Processes the public joint action `taken` and this player's private
    /// reward for it.
    pub fn observe(&mut self, taken: ActionId, own_reward: f64) -> Result<RoundOutcome> {
        self.space.check(taken)?;
        let considered = self.considered();
        self.stats[taken.0].record(own_reward);
        let eliminated = match self.phase {
            Phase::Initialization => {
                self.init_counter += 1;
                if self.init_counter == self.order.len() {
                    self.phase = Phase::Main;
                }
                None
            }
            Phase::Main if taken != considered => self.desired.eliminate_considered(),
            Phase::Main => {
                self.desired.advance();
                None
            }
        };
        Ok(RoundOutcome {
            considered,
            taken,
            eliminated,
        })
    }

    /// Re-derives every choice of one player from the agreed order, that
    /// player's private rewards, and the public log of taken actions.
    pub fn replay_choices(
        player: usize,
        space: &ActionSpace,
        order: &[ActionId],
        params: WidthParams,
        private_rewards: &[f64],
        public_actions: &[ActionId],
    ) -> Result<Vec<usize>> {
        if private_rewards.len() != public_actions.len() {
            return Err(Error::Domain(
                "reward history and action log must have the same length".into(),
            ));
        }
        let mut state = Self::new(player, space.clone(), order.to_vec(), params)?;
        let mut choices = Vec::with_capacity(public_actions.len());
        for (&taken, &reward) in public_actions.iter().zip(private_rewards) {
            choices.push(state.choose_action());
            state.observe(taken, reward)?;
        }
        Ok(choices)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    fn ja(arms: &[usize]) -> JointAction {
        JointAction::from_one_based(arms).unwrap()
    }

    fn ids(space: &ActionSpace, actions: &[&[usize]]) -> Vec<ActionId> {
        actions.iter().map(|a| space.id_of(&ja(a)).unwrap()).collect()
    }

    fn params() -> WidthParams {
        WidthParams::new(1.0 / E, 1.0).unwrap()
    }

    /// Runs the initialization sweep with constant rewards.
    fn initialized(space: &ActionSpace, reward: f64) -> Vec<PlayerState> {
        let mut team = PlayerState::team(space, params()).unwrap();
        for id in space.ids() {
            for p in team.iter_mut() {
                p.observe(id, reward).unwrap();
            }
        }
        team
    }

    #[test]
    fn default_orders() {
        let spec = EnvironmentSpec::random(vec![2, 2], (0.0, 1.0), (0.0, 0.5));
        let labels: Vec<_> = default_order_for(&spec).unwrap().iter().map(|a| a.to_string()).collect();
        assert_eq!(labels, ["(1,1)", "(1,2)", "(2,1)", "(2,2)"]);

        let single = ActionSpace::new(&[3]).unwrap();
        let labels: Vec<_> = default_order(&single).iter().map(|&id| single.label(id)).collect();
        assert_eq!(labels, ["(1)", "(2)", "(3)"]);

        let cube = ActionSpace::new(&[2, 2, 2]).unwrap();
        let order = default_order(&cube);
        assert_eq!(order.len(), 8);
        assert_eq!(cube.label(order[0]), "(1,1,1)");
        assert_eq!(cube.label(order[7]), "(2,2,2)");
        assert!(order.windows(2).all(|w| cube.action(w[0]) < cube.action(w[1])));
    }

    #[test]
    fn cursor_wraps_after_last() {
        let space = ActionSpace::new(&[2, 2]).unwrap();
        let mut d = DesiredSet::new(ids(&space, &[&[1, 2], &[2, 1], &[2, 2]])).unwrap();
        d.advance();
        d.advance();
        assert_eq!(space.label(d.considered()), "(2,2)");
        d.advance();
        assert_eq!(space.label(d.considered()), "(1,2)");
    }

    #[test]
    fn elimination_moves_cursor_to_successor() {
        let space = ActionSpace::new(&[2, 2]).unwrap();
        let mut d = DesiredSet::new(default_order(&space)).unwrap();
        assert_eq!(d.eliminate_considered().map(|id| space.label(id)).as_deref(), Some("(1,1)"));
        assert_eq!(space.label(d.considered()), "(1,2)");
        // eliminating the tail wraps to the front
        d.advance();
        d.advance();
        assert_eq!(space.label(d.considered()), "(2,2)");
        d.eliminate_considered();
        assert_eq!(space.label(d.considered()), "(1,2)");
        assert_eq!(d.actions(), &ids(&space, &[&[1, 2], &[2, 1]])[..]);
    }

    #[test]
    fn last_survivor_is_never_removed() {
        let space = ActionSpace::new(&[2, 2]).unwrap();
        let mut d = DesiredSet::new(ids(&space, &[&[2, 2]])).unwrap();
        assert_eq!(d.eliminate_considered(), None);
        d.advance();
        assert_eq!(d.len(), 1);
        assert_eq!(d.cursor(), 0);
    }

    #[test]
    fn desired_set_rejects_bad_orders() {
        assert!(DesiredSet::new(vec![]).is_err());
        assert!(DesiredSet::new(vec![ActionId(1), ActionId(1)]).is_err());
        let space = ActionSpace::new(&[2, 2]).unwrap();
        assert!(PlayerState::new(0, space.clone(), vec![ActionId(0)], params()).is_err());
        assert!(PlayerState::new(2, space, vec![], params()).is_err());
        let lonely = ActionSpace::new(&[1, 2]).unwrap();
        assert!(PlayerState::with_default_order(0, lonely, params()).is_err());
    }

    #[test]
    fn initialization_sweeps_in_order() {
        let space = ActionSpace::new(&[2, 3]).unwrap();
        let mut team = PlayerState::team(&space, params()).unwrap();
        for id in space.ids() {
            assert_eq!(team[0].phase(), Phase::Initialization);
            let arms: Vec<usize> = team.iter().map(|p| p.choose_action()).collect();
            assert_eq!(space.encode(&arms).unwrap(), id);
            for p in team.iter_mut() {
                let out = p.observe(id, 0.5).unwrap();
                assert_eq!(out.eliminated, None);
            }
        }
        assert!(team.iter().all(|p| p.phase() == Phase::Main));
        assert!(team[0].stats().iter().all(|s| s.pulls() == 1));
        assert_eq!(team[0].considered(), ActionId(0));
    }

    #[test]
    fn no_elimination_during_initialization_even_on_deviation() {
        let space = ActionSpace::new(&[2, 2]).unwrap();
        let mut p = PlayerState::with_default_order(0, space.clone(), params()).unwrap();
        let out = p.observe(ActionId(3), 0.1).unwrap();
        assert_eq!(out.eliminated, None);
        assert_eq!(p.desired().len(), 4);
    }

    #[test]
    fn unbounded_intervals_never_signal() {
        let space = ActionSpace::new(&[2, 2]).unwrap();
        let team = initialized(&space, 0.5);
        let unbounded = vec![ConfidenceInterval::UNBOUNDED; 4];
        for p in &team {
            let c = p.considered();
            assert_eq!(p.choose_with_intervals(&unbounded).unwrap(), space.arm(c, p.player()));
        }
    }

    #[test]
    fn no_deviation_advances_with_wrap() {
        let space = ActionSpace::new(&[2, 2]).unwrap();
        let mut team = initialized(&space, 0.5);
        // drop (1,1) by an observed deviation, then walk to (2,2)
        for p in team.iter_mut() {
            p.observe(space.id_of(&ja(&[2, 1])).unwrap(), 0.5).unwrap();
        }
        for a in [&[1, 2][..], &[2, 1]] {
            for p in team.iter_mut() {
                p.observe(space.id_of(&ja(a)).unwrap(), 0.5).unwrap();
            }
        }
        let taken = space.id_of(&ja(&[2, 2])).unwrap();
        for p in team.iter_mut() {
            let out = p.observe(taken, 0.5).unwrap();
            assert_eq!(out.considered, taken);
            assert_eq!(out.eliminated, None);
            assert_eq!(space.label(p.considered()), "(1,2)");
        }
    }

    #[test]
    fn committed_player_ignores_dominating_intervals() {
        let space = ActionSpace::new(&[2, 2]).unwrap();
        let mut team = initialized(&space, 0.5);
        // eliminate (1,1), (1,2), (2,1) in turn
        for (considered, taken) in [([1, 1], [2, 1]), ([1, 2], [2, 2]), ([2, 1], [1, 1])] {
            let taken = space.id_of(&ja(&taken)).unwrap();
            for p in team.iter_mut() {
                assert_eq!(space.label(p.considered()), ja(&considered).to_string());
                let out = p.observe(taken, 0.5).unwrap();
                assert!(out.eliminated.is_some());
            }
        }
        let survivor = space.id_of(&ja(&[2, 2])).unwrap();
        let mut adversarial = vec![ConfidenceInterval::around(100.0, 0.1); 4];
        adversarial[survivor.0] = ConfidenceInterval::around(0.0, 0.1);
        for p in team.iter_mut() {
            assert!(p.desired().is_committed());
            assert_eq!(p.choose_with_intervals(&adversarial).unwrap(), 1);
            assert_eq!(p.dominator(), None);
            // a stray deviation still cannot empty the set
            let out = p.observe(ActionId(0), 0.5).unwrap();
            assert_eq!(out.eliminated, None);
            assert_eq!(p.desired().actions(), &[survivor]);
        }
    }

    #[test]
    fn signal_arm_always_differs() {
        let space = ActionSpace::new(&[2, 3, 5]).unwrap();
        for id in space.ids() {
            for p in 0..3 {
                let s = signal_arm(&space, id, p);
                assert_ne!(s, space.arm(id, p));
                assert!(s < space.arms_of(p));
            }
        }
    }

    #[test]
    fn replay_rejects_length_mismatch() {
        let space = ActionSpace::new(&[2, 2]).unwrap();
        let order = default_order(&space);
        assert!(PlayerState::replay_choices(0, &space, &order, params(), &[0.1], &[]).is_err());
    }
}
