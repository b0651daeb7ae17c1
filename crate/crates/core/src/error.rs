use std::path::PathBuf;

use thiserror::Error;

use crate::event::EventId;
use crate::generator::StateId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("state {state} out of range (generator has {state_count} states)")]
    StateOutOfRange { state: StateId, state_count: usize },

    #[error("event {0} is not in the alphabet")]
    UnknownEvent(EventId),

    #[error("event {event} is declared with conflicting controllability or forcibility")]
    AlphabetConflict { event: EventId },

    #[error("alphabet of {inner} is not contained in the alphabet of {outer}")]
    AlphabetMismatch { inner: String, outer: String },

    #[error("nondeterministic transitions from state {state} on event {event}")]
    Nondeterministic { state: StateId, event: EventId },

    #[error("invalid generator: {0}")]
    InvalidGenerator(String),

    #[error("unknown configuration `{0}`")]
    UnknownConfiguration(String),

    #[error("invalid reconfiguration spec: {0}")]
    InvalidReconfig(String),

    #[error("preemptor {0} is not a forcible event")]
    NotForcible(EventId),

    #[error("degenerate query: {0}")]
    Degenerate(String),

    #[error("size guard exceeded: {size} > {limit}")]
    SizeGuard { size: usize, limit: usize },

    #[error("event string `{}` is not executable from the initial state", word(.0))]
    BadWitness(Vec<EventId>),

    #[error("parse error in {path}: {message}")]
    Parse { path: String, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Precondition violations as opposed to malformed input. The CLI maps
    /// these to exit status 3 and everything else to 2.
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            Error::AlphabetConflict { .. } | Error::AlphabetMismatch { .. } | Error::NotForcible(_)
        )
    }
}

fn word(events: &[EventId]) -> String {
    events.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}
