use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::event::{Alphabet, Event, EventId};

pub type StateId = usize;

/// A finite deterministic generator `(Q, Σ, δ, q0, Qm)` with states
/// `0..state_count`. The empty generator has no states and no initial state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    name: String,
    alphabet: Alphabet,
    delta: Vec<BTreeMap<EventId, StateId>>,
    initial: Option<StateId>,
    marked: BTreeSet<StateId>,
}

impl Generator {
    pub fn new(
        name: impl Into<String>,
        alphabet: Alphabet,
        state_count: usize,
        initial: StateId,
        marked: impl IntoIterator<Item = StateId>,
        transitions: impl IntoIterator<Item = (StateId, EventId, StateId)>,
    ) -> Result<Self> {
        if state_count == 0 {
            return Err(Error::InvalidGenerator(
                "a generator with states needs state_count > 0; use Generator::empty".into(),
            ));
        }
        check_state(initial, state_count)?;
        let marked: BTreeSet<StateId> = marked.into_iter().collect();
        for &q in &marked {
            check_state(q, state_count)?;
        }
        let mut delta = vec![BTreeMap::new(); state_count];
        for (from, event, to) in transitions {
            check_state(from, state_count)?;
            check_state(to, state_count)?;
            if !alphabet.contains(event) {
                return Err(Error::UnknownEvent(event));
            }
            if delta[from].insert(event, to).is_some_and(|prev| prev != to) {
                return Err(Error::Nondeterministic { state: from, event });
            }
        }
        Ok(Generator { name: name.into(), alphabet, delta, initial: Some(initial), marked })
    }

    /// The generator with no states, recognizing the empty language.
    pub fn empty(name: impl Into<String>, alphabet: Alphabet) -> Self {
        Generator {
            name: name.into(),
            alphabet,
            delta: Vec::new(),
            initial: None,
            marked: BTreeSet::new(),
        }
    }

    /// Builds from raw parts known to be consistent.
    pub(crate) fn from_parts(
        name: String,
        alphabet: Alphabet,
        delta: Vec<BTreeMap<EventId, StateId>>,
        initial: Option<StateId>,
        marked: BTreeSet<StateId>,
    ) -> Self {
        debug_assert!(initial.is_some() == !delta.is_empty());
        Generator { name, alphabet, delta, initial, marked }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn event(&self, id: EventId) -> Option<&Event> {
        self.alphabet.get(id)
    }

    pub fn state_count(&self) -> usize {
        self.delta.len()
    }

    pub fn states(&self) -> std::ops::Range<StateId> {
        0..self.delta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.delta.is_empty()
    }

    pub fn initial(&self) -> Option<StateId> {
        self.initial
    }

    pub fn marked(&self) -> &BTreeSet<StateId> {
        &self.marked
    }

    pub fn is_marked(&self, q: StateId) -> bool {
        self.marked.contains(&q)
    }

    pub fn successor(&self, q: StateId, event: EventId) -> Option<StateId> {
        self.delta.get(q).and_then(|out| out.get(&event).copied())
    }

    /// Outgoing transitions of `q`, keyed by event in ascending id order.
    pub fn outgoing(&self, q: StateId) -> &BTreeMap<EventId, StateId> {
        &self.delta[q]
    }

    pub fn transitions(&self) -> impl Iterator<Item = (StateId, EventId, StateId)> + '_ {
        self.delta
            .iter()
            .enumerate()
            .flat_map(|(q, out)| out.iter().map(move |(&e, &to)| (q, e, to)))
    }

    pub fn transition_count(&self) -> usize {
        self.delta.iter().map(BTreeMap::len).sum()
    }

    pub fn check_state(&self, q: StateId) -> Result<()> {
        check_state(q, self.state_count())
    }

    /// Events defined at `q`.
    pub fn enabled_events(&self, q: StateId) -> Result<BTreeSet<EventId>> {
        self.check_state(q)?;
        Ok(self.delta[q].keys().copied().collect())
    }

    /// Follows `word` from the initial state.
    pub fn replay(&self, word: &[EventId]) -> Option<StateId> {
        self.replay_from(self.initial?, word)
    }

    pub fn replay_from(&self, start: StateId, word: &[EventId]) -> Option<StateId> {
        word.iter().try_fold(start, |q, &e| self.successor(q, e))
    }

    /// Like [`Generator::replay`], with an error naming the word on failure.
    pub fn locate(&self, word: &[EventId]) -> Result<StateId> {
        self.replay(word).ok_or_else(|| Error::BadWitness(word.to_vec()))
    }

    /// Predecessor lists: `result[q]` holds every `(p, σ)` with `δ(p, σ) = q`,
    /// sorted by state then event.
    pub fn predecessors(&self) -> Vec<Vec<(StateId, EventId)>> {
        let mut preds = vec![Vec::new(); self.state_count()];
        for (from, event, to) in self.transitions() {
            preds[to].push((from, event));
        }
        preds
    }
}

fn check_state(state: StateId, state_count: usize) -> Result<()> {
    if state < state_count {
        Ok(())
    } else {
        Err(Error::StateOutOfRange { state, state_count })
    }
}
