//! Automaton files (JSON), state-map sidecars, and DOT export.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::event::{Alphabet, Event, EventId};
use crate::generator::{Generator, StateId};
use crate::ops::StateMap;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EventRecord {
    id: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    /// Odd ids are controllable when omitted.
    #[serde(default)]
    controllable: Option<bool>,
    #[serde(default)]
    forcible: bool,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeneratorRecord {
    name: String,
    events: Vec<EventRecord>,
    states: usize,
    #[serde(default)]
    initial: Option<StateId>,
    #[serde(default)]
    marked: Vec<StateId>,
    #[serde(default)]
    transitions: Vec<(StateId, u32, StateId)>,
}

fn parse_error(origin: &str, message: impl ToString) -> Error {
    Error::Parse { path: origin.to_string(), message: message.to_string() }
}

/// Parses one generator document. `origin` names the source in errors.
pub fn parse_generator(text: &str, origin: &str) -> Result<Generator> {
    let record: GeneratorRecord = serde_json::from_str(text).map_err(|e| parse_error(origin, e))?;
    let events = record.events.into_iter().map(|r| {
        let base = match r.controllable {
            Some(true) => Event::controllable(r.id),
            Some(false) => Event::uncontrollable(r.id),
            None => Event::by_parity(r.id),
        };
        Event { label: r.label, ..base.forcible(r.forcible) }
    });
    let alphabet = Alphabet::from_events(events).map_err(|e| parse_error(origin, e))?;
    if record.states == 0 {
        if record.initial.is_some() || !record.marked.is_empty() || !record.transitions.is_empty() {
            return Err(parse_error(origin, "a generator with 0 states has no initial state, marking or transitions"));
        }
        return Ok(Generator::empty(record.name, alphabet));
    }
    let initial = record.initial.ok_or_else(|| parse_error(origin, "missing `initial`"))?;
    Generator::new(
        record.name,
        alphabet,
        record.states,
        initial,
        record.marked,
        record.transitions.into_iter().map(|(a, e, b)| (a, EventId(e), b)),
    )
    .map_err(|e| parse_error(origin, e))
}

/// Deterministic JSON text: one event and one transition per line.
pub fn generator_to_json(g: &Generator) -> String {
    let mut out = String::from("{\n");
    let _ = writeln!(out, "  \"name\": {},", serde_json::to_string(g.name()).unwrap());
    out.push_str("  \"events\": [");
    let events: Vec<String> = g
        .alphabet()
        .iter()
        .map(|e| {
            let record = EventRecord {
                id: e.id.0,
                label: e.label.clone(),
                controllable: Some(e.controllable),
                forcible: e.forcible,
            };
            format!("\n    {}", serde_json::to_string(&record).unwrap())
        })
        .collect();
    out.push_str(&events.join(","));
    out.push_str(if events.is_empty() { "],\n" } else { "\n  ],\n" });
    let _ = writeln!(out, "  \"states\": {},", g.state_count());
    match g.initial() {
        Some(q) => {
            let _ = writeln!(out, "  \"initial\": {q},");
        }
        None => out.push_str("  \"initial\": null,\n"),
    }
    let marked: Vec<String> = g.marked().iter().map(ToString::to_string).collect();
    let _ = writeln!(out, "  \"marked\": [{}],", marked.join(", "));
    out.push_str("  \"transitions\": [");
    let transitions: Vec<String> =
        g.transitions().map(|(a, e, b)| format!("\n    [{a}, {e}, {b}]")).collect();
    out.push_str(&transitions.join(","));
    out.push_str(if transitions.is_empty() { "]\n" } else { "\n  ]\n" });
    out.push_str("}\n");
    out
}

pub fn read_generator(path: &Path) -> Result<Generator> {
    let text = read_text(path)?;
    parse_generator(&text, &path.display().to_string())
}

pub fn write_generator(path: &Path, g: &Generator) -> Result<()> {
    write_text(path, &generator_to_json(g))
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

#[derive(Serialize)]
struct StateMapRecord<'a> {
    constituents: &'a [String],
    tuples: &'a [Vec<StateId>],
}

pub fn state_map_to_json(map: &StateMap) -> String {
    let record = StateMapRecord { constituents: map.constituents(), tuples: map.tuples() };
    let mut text = serde_json::to_string(&record).expect("state map serializes");
    text.push('\n');
    text
}

#[derive(Serialize)]
struct DisabledRecord<'a> {
    state: StateId,
    events: &'a BTreeSet<EventId>,
}

/// Non-empty disablement sets, one entry per state.
pub fn disabled_to_json(disabled: &[BTreeSet<EventId>]) -> String {
    let entries: Vec<String> = disabled
        .iter()
        .enumerate()
        .filter(|(_, d)| !d.is_empty())
        .map(|(state, events)| {
            format!("\n  {}", serde_json::to_string(&DisabledRecord { state, events }).unwrap())
        })
        .collect();
    if entries.is_empty() {
        "[]\n".into()
    } else {
        format!("[{}\n]\n", entries.join(","))
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PreemptionRecord {
    pairs: Vec<(u32, u32)>,
}

/// `{"pairs": [[preemptor, preempted], ...]}`.
pub fn parse_preemption(text: &str, origin: &str) -> Result<Vec<(EventId, EventId)>> {
    let record: PreemptionRecord = serde_json::from_str(text).map_err(|e| parse_error(origin, e))?;
    Ok(record.pairs.into_iter().map(|(a, b)| (EventId(a), EventId(b))).collect())
}

#[derive(Debug, Clone, Copy, Default)]
pub struct DotOptions {
    /// One edge per state pair, labeled with every event between them.
    pub bundle: bool,
}

/// Marked states are double circles, the initial state has an entry arrow,
/// and uncontrollable transitions are dashed.
pub fn to_dot(g: &Generator, options: DotOptions) -> String {
    let mut out = format!("digraph {} {{\n", serde_json::to_string(g.name()).unwrap());
    if g.is_empty() {
        out.push_str("}\n");
        return out;
    }
    out.push_str("  rankdir=LR;\n  node [shape=circle];\n");
    if let Some(q0) = g.initial() {
        let _ = writeln!(out, "  __init [shape=point];\n  __init -> {q0};");
    }
    for q in g.states() {
        let shape = if g.is_marked(q) { "doublecircle" } else { "circle" };
        let _ = writeln!(out, "  {q} [shape={shape}];");
    }
    if options.bundle {
        let mut groups: std::collections::BTreeMap<(StateId, StateId, bool), Vec<EventId>> =
            Default::default();
        for (a, e, b) in g.transitions() {
            let controllable = g.alphabet().is_controllable(e);
            groups.entry((a, b, controllable)).or_default().push(e);
        }
        for ((a, b, controllable), events) in groups {
            let label: Vec<String> = events.iter().map(ToString::to_string).collect();
            let style = if controllable { "" } else { ", style=dashed" };
            let _ = writeln!(out, "  {a} -> {b} [label=\"{}\"{style}];", label.join(","));
        }
    } else {
        for (a, e, b) in g.transitions() {
            let style = if g.alphabet().is_controllable(e) { "" } else { ", style=dashed" };
            let _ = writeln!(out, "  {a} -> {b} [label=\"{e}\"{style}];");
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const M: &str = r#"{
        "name": "M",
        "events": [{"id": 11, "label": "take"}, {"id": 12}, {"id": 91, "controllable": true, "forcible": true}],
        "states": 2, "initial": 0, "marked": [0],
        "transitions": [[0, 11, 1], [1, 12, 0], [0, 91, 0]]
    }"#;

    #[test]
    fn parses_with_parity_default() {
        let g = parse_generator(M, "m.json").unwrap();
        assert!(g.alphabet().is_controllable(EventId(11)));
        assert!(!g.alphabet().is_controllable(EventId(12)));
        assert!(g.alphabet().is_forcible(EventId(91)));
        assert_eq!(g.event(EventId(11)).unwrap().label.as_deref(), Some("take"));
        assert_eq!(parse_generator(&generator_to_json(&g), "again").unwrap(), g);
    }

    #[test]
    fn rejects_unknown_fields_and_bad_shapes() {
        let extra = M.replace("\"states\"", "\"colour\": 1, \"states\"");
        assert!(matches!(parse_generator(&extra, "x"), Err(Error::Parse { .. })));
        let nondet = M.replace("[0, 91, 0]", "[0, 11, 0]");
        assert!(parse_generator(&nondet, "x").is_err());
        let dup = M.replace("{\"id\": 12}", "{\"id\": 11}");
        assert!(parse_generator(&dup, "x").is_err());
    }

    #[test]
    fn empty_generator_round_trip_and_dot() {
        let g = Generator::empty("nothing", Alphabet::new());
        let text = generator_to_json(&g);
        assert_eq!(parse_generator(&text, "e").unwrap(), g);
        assert_eq!(to_dot(&g, DotOptions::default()), "digraph \"nothing\" {\n}\n");
    }

    #[test]
    fn dot_marks_and_bundles() {
        let g = parse_generator(M, "m.json").unwrap();
        let dot = to_dot(&g, DotOptions::default());
        assert!(dot.contains("0 [shape=doublecircle];"));
        assert!(dot.contains("1 [shape=circle];"));
        assert!(dot.contains("__init -> 0;"));
        assert!(dot.contains("1 -> 0 [label=\"12\", style=dashed];"));
        assert_eq!(dot.matches("->").count(), 4);
        let bundled = to_dot(&g, DotOptions { bundle: true });
        assert!(bundled.contains("0 -> 0 [label=\"91\"];"));
    }

    #[test]
    fn preemption_file() {
        let pairs = parse_preemption(r#"{"pairs": [[91, 20], [91, 22]]}"#, "pr").unwrap();
        assert_eq!(pairs, vec![(EventId(91), EventId(20)), (EventId(91), EventId(22))]);
        assert!(parse_preemption(r#"{"pairs": [], "x": 1}"#, "pr").is_err());
    }
}
