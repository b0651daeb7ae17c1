//! WebAssembly bindings for a single-page SMALL FACTORY explorer: rebuild
//! RSUP under different RS options, step through supervisor states by
//! clicking events, and solve reconfiguration requests from any state.

use std::collections::BTreeSet;

use serde::Serialize;
use wasm_bindgen::prelude::*;

use rsup_core::manifest::Project;
use rsup_core::reconfig::{RsOptions, RsupPipeline};
use rsup_core::solvability::{self, CollectMode, EventSolution, PreemptionRelation, SolveOptions};
use rsup_core::{small_factory, synthesis, EventId, Generator, StateId};

#[derive(Serialize)]
struct Summary {
    states: usize,
    transitions: usize,
    controllable: bool,
    initial_configuration: String,
    switches: Vec<u32>,
}

#[derive(Serialize)]
struct EnabledEvent {
    id: u32,
    label: Option<String>,
    controllable: bool,
    forcible: bool,
    next: StateId,
}

#[derive(Serialize)]
struct StateView {
    state: StateId,
    configuration: String,
    /// M1, M2 and RS local states.
    components: Vec<(String, StateId)>,
    marked: bool,
    enabled: Vec<EnabledEvent>,
    disabled: Vec<EventId>,
}

/// Pure-Rust core of the demo; the wasm wrapper only converts errors.
pub struct Explorer {
    pipeline: RsupPipeline,
    pr: PreemptionRelation,
    held: BTreeSet<EventId>,
}

impl Explorer {
    /// `block_switch` adds a spec that never allows event 91.
    pub fn new(one_way: bool, block_switch: bool, initial: &str) -> Result<Self, String> {
        let project: Project = small_factory::project().map_err(|e| e.to_string())?;
        let options = RsOptions { one_way, ..project.rs_options() };
        let rs = project
            .reconfig_spec(&options)
            .and_then(|rs| rs.rerooted(initial))
            .map_err(|e| e.to_string())?;
        let no91 = small_factory::no91_spec();
        let mut specs: Vec<&Generator> = project.specs.iter().collect();
        if block_switch {
            specs.push(&no91);
        }
        let components: Vec<&Generator> = project.components.iter().collect();
        let pipeline =
            rsup_core::reconfig::build_rsup(&components, &rs, &specs).map_err(|e| e.to_string())?;
        let pr = project.preemption_for(&pipeline.rsup.supervisor).map_err(|e| e.to_string())?;
        let held = pipeline.rs.switch_ids();
        Ok(Explorer { pipeline, pr, held })
    }

    pub fn supervisor(&self) -> &Generator {
        &self.pipeline.rsup.supervisor
    }

    pub fn summary_json(&self) -> String {
        let sup = self.supervisor();
        let controllable = synthesis::is_controllable(&self.pipeline.gmode, sup)
            .map(|c| c.holds())
            .unwrap_or(false);
        let summary = Summary {
            states: sup.state_count(),
            transitions: sup.transition_count(),
            controllable,
            initial_configuration: self.pipeline.rs.initial.clone(),
            switches: self.held.iter().map(|e| e.0).collect(),
        };
        serde_json::to_string(&summary).expect("summary serializes")
    }

    pub fn state_json(&self, state: StateId) -> Result<String, String> {
        let sup = self.supervisor();
        sup.check_state(state).map_err(|e| e.to_string())?;
        let gmode_state = self.pipeline.rsup.plant_map.get(state)[0];
        let tuple = self.pipeline.gmode_map.get(gmode_state);
        let components = self
            .pipeline
            .gmode_map
            .constituents()
            .iter()
            .cloned()
            .zip(tuple.iter().copied())
            .collect();
        let enabled = sup
            .outgoing(state)
            .iter()
            .map(|(&e, &next)| {
                let event = sup.event(e).expect("enabled events are in the alphabet");
                EnabledEvent {
                    id: e.0,
                    label: event.label.clone(),
                    controllable: event.controllable,
                    forcible: event.forcible,
                    next,
                }
            })
            .collect();
        let view = StateView {
            state,
            configuration: self.pipeline.configuration_of(state).to_string(),
            components,
            marked: sup.is_marked(state),
            enabled,
            disabled: self.pipeline.rsup.disabled[state].iter().copied().collect(),
        };
        Ok(serde_json::to_string(&view).expect("state view serializes"))
    }

    /// State reached by a comma-separated event string from the initial state.
    pub fn locate(&self, witness: &str) -> Result<StateId, String> {
        let word = parse_word(witness)?;
        self.supervisor().locate(&word).map_err(|e| e.to_string())
    }

    /// Solves for switch `event` from `source`; `target` restricts the search
    /// to one RE source state.
    pub fn solve_json(
        &self,
        source: StateId,
        event: u32,
        target: Option<StateId>,
        literal: bool,
    ) -> Result<String, String> {
        let sup = self.supervisor();
        let event = EventId(event);
        let mode = if literal { CollectMode::PaperLiteral } else { CollectMode::AllSimple };
        let options = SolveOptions { mode, held: self.held.clone() };
        let result: EventSolution = match target {
            None => solvability::solve_event(sup, source, event, &self.pr, &options),
            Some(target) => solvability::solve_event_at(sup, source, event, target, &self.pr, &options),
        }
        .map_err(|e| e.to_string())?;
        Ok(serde_json::to_string(&result).expect("report serializes"))
    }
}

fn parse_word(text: &str) -> Result<Vec<EventId>, String> {
    text.split([',', ' '])
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse::<u32>().map(EventId).map_err(|_| format!("bad event id `{t}`")))
        .collect()
}

#[wasm_bindgen]
pub struct Demo {
    inner: Explorer,
}

#[wasm_bindgen]
impl Demo {
    #[wasm_bindgen(constructor)]
    pub fn new(one_way: bool, block_switch: bool, initial: &str) -> Result<Demo, JsValue> {
        Explorer::new(one_way, block_switch, initial).map(|inner| Demo { inner }).map_err(js_error)
    }

    pub fn summary(&self) -> String {
        self.inner.summary_json()
    }

    #[wasm_bindgen(js_name = initialState)]
    pub fn initial_state(&self) -> Option<usize> {
        self.inner.supervisor().initial()
    }

    pub fn state(&self, state: usize) -> Result<String, JsValue> {
        self.inner.state_json(state).map_err(js_error)
    }

    pub fn locate(&self, witness: &str) -> Result<usize, JsValue> {
        self.inner.locate(witness).map_err(js_error)
    }

    /// `target < 0` searches every RE source state.
    pub fn solve(&self, source: usize, event: u32, target: i32, literal: bool) -> Result<String, JsValue> {
        let target = usize::try_from(target).ok();
        self.inner.solve_json(source, event, target, literal).map_err(js_error)
    }
}

fn js_error(message: String) -> JsValue {
    JsValue::from_str(&message)
}
