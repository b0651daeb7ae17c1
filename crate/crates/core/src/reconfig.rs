//! Reconfiguration specifications, the multimodal plant and the
//! reconfiguration supervisor.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::event::{Alphabet, Event, EventId};
use crate::generator::{Generator, StateId};
use crate::ops::{self, StateMap};
use crate::synthesis::{self, SupconResult};

/// A named subset of the component pool, active as a synchronous subproduct.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Configuration {
    pub name: String,
    pub members: Vec<String>,
    /// Union of the member alphabets.
    pub alphabet: Alphabet,
}

impl Configuration {
    /// Resolves `members` against `pool` by generator name.
    pub fn from_pool(name: impl Into<String>, members: &[&str], pool: &[&Generator]) -> Result<Self> {
        let name = name.into();
        if members.is_empty() {
            return Err(Error::InvalidReconfig(format!("configuration `{name}` has no components")));
        }
        let mut alphabet = Alphabet::new();
        for member in members {
            let g = pool.iter().find(|g| g.name() == *member).ok_or_else(|| {
                Error::InvalidReconfig(format!("configuration `{name}` names unknown component `{member}`"))
            })?;
            alphabet = alphabet.union(g.alphabet())?;
        }
        Ok(Configuration { name, members: members.iter().map(|m| m.to_string()).collect(), alphabet })
    }

    pub fn sigma(&self) -> BTreeSet<EventId> {
        self.alphabet.ids().collect()
    }
}

/// A reconfiguration event moving the system from one configuration to
/// another.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwitchEvent {
    pub event: Event,
    pub from: String,
    pub to: String,
}

impl SwitchEvent {
    /// Controllable and forcible, as the solver expects of a commanded switch.
    pub fn new(id: u32, from: impl Into<String>, to: impl Into<String>) -> Self {
        SwitchEvent { event: Event::controllable(id).forcible(true), from: from.into(), to: to.into() }
    }

    pub fn id(&self) -> EventId {
        self.event.id
    }
}

#[derive(Debug, Clone, Default)]
pub struct RsOptions {
    /// Keep only the first-listed direction of each switch pair.
    pub one_way: bool,
    /// Marked configurations; all of them when `None`.
    pub marked: Option<BTreeSet<String>>,
}

#[derive(Debug, Clone)]
pub struct ReconfigSpec {
    pub automaton: Generator,
    pub configurations: Vec<Configuration>,
    /// Switches actually present in the automaton.
    pub switches: Vec<SwitchEvent>,
    pub initial: String,
}

impl ReconfigSpec {
    /// Configuration name of RS state `q`; states follow configuration order.
    pub fn config_of_state(&self, q: StateId) -> &str {
        &self.configurations[q].name
    }

    pub fn state_of(&self, config: &str) -> Option<StateId> {
        self.configurations.iter().position(|c| c.name == config)
    }

    pub fn switch_ids(&self) -> BTreeSet<EventId> {
        self.switches.iter().map(SwitchEvent::id).collect()
    }

    pub fn switch(&self, id: EventId) -> Option<&SwitchEvent> {
        self.switches.iter().find(|s| s.id() == id)
    }

    /// Same automaton started in another configuration.
    pub fn rerooted(&self, initial: &str) -> Result<ReconfigSpec> {
        let q0 = self.state_of(initial).ok_or_else(|| Error::UnknownConfiguration(initial.into()))?;
        let g = &self.automaton;
        let automaton = Generator::new(
            g.name(),
            g.alphabet().clone(),
            g.state_count(),
            q0,
            g.marked().iter().copied(),
            g.transitions(),
        )?;
        Ok(ReconfigSpec { automaton, initial: initial.into(), ..self.clone() })
    }
}

/// One state per configuration, selflooped with that configuration's
/// alphabet, plus one edge per switch event.
pub fn build_rs(
    configs: &[Configuration],
    switches: &[SwitchEvent],
    initial: &str,
    options: &RsOptions,
) -> Result<ReconfigSpec> {
    let mut index = BTreeMap::new();
    for (i, c) in configs.iter().enumerate() {
        if index.insert(c.name.as_str(), i).is_some() {
            return Err(Error::InvalidReconfig(format!("duplicate configuration `{}`", c.name)));
        }
    }
    let q0 = *index.get(initial).ok_or_else(|| Error::UnknownConfiguration(initial.into()))?;

    let mut alphabet = configs
        .iter()
        .try_fold(Alphabet::new(), |acc, c| acc.union(&c.alphabet))?;
    let mut kept: Vec<SwitchEvent> = Vec::new();
    for s in switches {
        for end in [&s.from, &s.to] {
            if !index.contains_key(end.as_str()) {
                return Err(Error::UnknownConfiguration(end.clone()));
            }
        }
        if s.from == s.to {
            return Err(Error::InvalidReconfig(format!("switch {} loops on `{}`", s.id(), s.from)));
        }
        if alphabet.contains(s.id()) {
            return Err(Error::InvalidReconfig(format!(
                "switch event {} is not fresh: it already belongs to a component or another switch",
                s.id()
            )));
        }
        alphabet = alphabet.union(&[s.event.clone()].into_iter().collect())?;
        let reverse_kept = kept.iter().any(|k| k.from == s.to && k.to == s.from);
        if !(options.one_way && reverse_kept) {
            kept.push(s.clone());
        }
    }
    if options.one_way {
        // Dropped switches leave the alphabet too.
        alphabet = configs
            .iter()
            .try_fold(Alphabet::new(), |acc, c| acc.union(&c.alphabet))?
            .union(&kept.iter().map(|s| s.event.clone()).collect())?;
    }

    let mut transitions = Vec::new();
    for (q, c) in configs.iter().enumerate() {
        transitions.extend(c.alphabet.ids().map(|e| (q, e, q)));
    }
    for s in &kept {
        transitions.push((index[s.from.as_str()], s.id(), index[s.to.as_str()]));
    }
    let marked: Vec<StateId> = match &options.marked {
        None => (0..configs.len()).collect(),
        Some(names) => {
            let mut marked = Vec::new();
            for name in names {
                marked.push(*index.get(name.as_str()).ok_or_else(|| Error::UnknownConfiguration(name.clone()))?);
            }
            marked
        }
    };
    let automaton = Generator::new("RS", alphabet, configs.len(), q0, marked, transitions)?;
    Ok(ReconfigSpec {
        automaton,
        configurations: configs.to_vec(),
        switches: kept,
        initial: initial.into(),
    })
}

/// `(G1 || ... || Gn) || RS`, with the RS state as the last tuple entry.
pub fn build_gmode(components: &[&Generator], rs: &ReconfigSpec) -> Result<(Generator, StateMap)> {
    let mut all: Vec<&Generator> = components.to_vec();
    all.push(&rs.automaton);
    let (g, map) = ops::sync(&all)?;
    Ok((g.with_name("GMode"), map))
}

/// Every stage of the supervisor pipeline.
#[derive(Debug, Clone)]
pub struct RsupPipeline {
    pub rs: ReconfigSpec,
    pub gmode: Generator,
    /// GMode state → (component states..., RS state).
    pub gmode_map: StateMap,
    /// `allevents(GMode) || E`.
    pub spec: Generator,
    pub rsup: SupconResult,
}

impl RsupPipeline {
    /// Configuration active at supervisor state `q`.
    pub fn configuration_of(&self, q: StateId) -> &str {
        let g = self.rsup.plant_map.get(q)[0];
        let tuple = self.gmode_map.get(g);
        self.rs.config_of_state(tuple[tuple.len() - 1])
    }

    /// Supervisor states at which switch event `event` is enabled.
    pub fn re_source_states(&self, event: EventId) -> Result<BTreeSet<StateId>> {
        if self.rs.switch(event).is_none() {
            return Err(Error::UnknownEvent(event));
        }
        re_source_states(&self.rsup.supervisor, event)
    }
}

/// `RSUP := supcon(GMode, allevents(GMode) || E)` where `E` is the product of
/// `behavioral_specs` (no constraint when empty).
pub fn build_rsup(
    components: &[&Generator],
    rs: &ReconfigSpec,
    behavioral_specs: &[&Generator],
) -> Result<RsupPipeline> {
    let (gmode, gmode_map) = build_gmode(components, rs)?;
    let pad = ops::allevents(&gmode);
    let mut parts: Vec<&Generator> = vec![&pad];
    parts.extend_from_slice(behavioral_specs);
    let (spec, _) = ops::sync(&parts)?;
    let spec = spec.with_name("SPEC");
    if !spec.alphabet().is_subset_of(gmode.alphabet()) {
        return Err(Error::AlphabetMismatch { inner: "E".into(), outer: "GMode".into() });
    }
    let mut rsup = synthesis::supcon(&gmode, &spec)?;
    rsup.supervisor = rsup.supervisor.with_name("RSUP");
    Ok(RsupPipeline { rs: rs.clone(), gmode, gmode_map, spec, rsup })
}

/// States of `sup` where `event` is defined.
pub fn re_source_states(sup: &Generator, event: EventId) -> Result<BTreeSet<StateId>> {
    if !sup.alphabet().contains(event) {
        return Err(Error::UnknownEvent(event));
    }
    Ok(sup.states().filter(|&q| sup.successor(q, event).is_some()).collect())
}
