use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integer identity of an event label. Labels are cosmetic; two events are
/// the same event iff their ids match.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EventId(pub u32);

impl fmt::Display for EventId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u32> for EventId {
    fn from(id: u32) -> Self {
        EventId(id)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Event {
    pub id: EventId,
    pub label: Option<String>,
    pub controllable: bool,
    pub forcible: bool,
}

impl Event {
    pub fn controllable(id: u32) -> Self {
        Event { id: EventId(id), label: None, controllable: true, forcible: false }
    }

    pub fn uncontrollable(id: u32) -> Self {
        Event { id: EventId(id), label: None, controllable: false, forcible: false }
    }

    /// Odd ids are controllable, even ids uncontrollable (the TCT convention).
    pub fn by_parity(id: u32) -> Self {
        if id % 2 == 1 {
            Self::controllable(id)
        } else {
            Self::uncontrollable(id)
        }
    }

    pub fn forcible(mut self, forcible: bool) -> Self {
        self.forcible = forcible;
        self
    }

    pub fn labeled(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    fn same_class(&self, other: &Event) -> bool {
        self.controllable == other.controllable && self.forcible == other.forcible
    }
}

/// A finite set of events keyed by id.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Alphabet {
    events: BTreeMap<EventId, Event>,
}

impl Alphabet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Rejects a second event with an id already present.
    pub fn from_events(events: impl IntoIterator<Item = Event>) -> Result<Self> {
        let mut alphabet = Alphabet::new();
        for event in events {
            if alphabet.events.contains_key(&event.id) {
                return Err(Error::InvalidGenerator(format!("duplicate event id {}", event.id)));
            }
            alphabet.events.insert(event.id, event);
        }
        Ok(alphabet)
    }

    pub fn get(&self, id: EventId) -> Option<&Event> {
        self.events.get(&id)
    }

    pub fn contains(&self, id: EventId) -> bool {
        self.events.contains_key(&id)
    }

    pub fn is_controllable(&self, id: EventId) -> bool {
        self.events.get(&id).is_some_and(|e| e.controllable)
    }

    pub fn is_forcible(&self, id: EventId) -> bool {
        self.events.get(&id).is_some_and(|e| e.forcible)
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Events in ascending id order.
    pub fn iter(&self) -> impl Iterator<Item = &Event> {
        self.events.values()
    }

    pub fn ids(&self) -> impl Iterator<Item = EventId> + '_ {
        self.events.keys().copied()
    }

    pub fn is_subset_of(&self, other: &Alphabet) -> bool {
        self.ids().all(|id| other.contains(id))
    }

    /// Union of two alphabets. Shared ids must agree on controllability and
    /// forcibility.
    pub fn union(&self, other: &Alphabet) -> Result<Alphabet> {
        let mut events = self.events.clone();
        for event in other.iter() {
            match events.get(&event.id) {
                Some(existing) if !existing.same_class(event) => {
                    return Err(Error::AlphabetConflict { event: event.id });
                }
                Some(_) => {}
                None => {
                    events.insert(event.id, event.clone());
                }
            }
        }
        Ok(Alphabet { events })
    }
}

impl FromIterator<Event> for Alphabet {
    /// Later duplicates overwrite earlier ones; use [`Alphabet::from_events`]
    /// to reject them instead.
    fn from_iter<I: IntoIterator<Item = Event>>(iter: I) -> Self {
        Alphabet { events: iter.into_iter().map(|e| (e.id, e)).collect() }
    }
}
