//! Reconfiguration supervisors for untimed discrete-event systems.
//!
//! The crate covers the whole pipeline: finite generators and their
//! language-level operations ([`ops`]), supremal controllable sublanguage
//! synthesis ([`synthesis`]), reconfiguration specifications and the
//! reconfiguration supervisor RSUP ([`reconfig`]), and the forcible-path
//! solver deciding whether a commanded reconfiguration can be driven from the
//! current state ([`solvability`]). [`format`] and [`manifest`] hold the file
//! formats; [`small_factory`] embeds the two-machine, two-buffer example.

pub mod error;
pub mod event;
pub mod format;
pub mod generator;
pub mod manifest;
pub mod ops;
pub mod reconfig;
pub mod small_factory;
pub mod solvability;
pub mod synthesis;

pub use error::{Error, Result};
pub use event::{Alphabet, Event, EventId};
pub use generator::{Generator, StateId};
pub use ops::StateMap;
