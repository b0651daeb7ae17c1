//! Human-readable and JSON renderings of command results.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::Serialize;

use rsup_core::reconfig::RsupPipeline;
use rsup_core::solvability::{EventSolution, Solution, TargetAction, Verdict};
use rsup_core::synthesis::Controllability;
use rsup_core::{ops, EventId, Generator};

fn set(events: &BTreeSet<EventId>) -> String {
    let items: Vec<String> = events.iter().map(ToString::to_string).collect();
    format!("{{{}}}", items.join(", "))
}

fn word(events: &[EventId]) -> String {
    if events.is_empty() {
        return "(empty)".into();
    }
    events.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

#[derive(Serialize)]
pub struct Summary {
    pub gmode_states: usize,
    pub gmode_transitions: usize,
    pub rsup_states: usize,
    pub rsup_transitions: usize,
    pub controllable: bool,
    pub nonblocking: bool,
    pub switch_events: Vec<EventId>,
    pub re_source_states: Vec<(EventId, usize)>,
}

impl Summary {
    pub fn of(pipeline: &RsupPipeline, controllability: Controllability) -> Self {
        let sup = &pipeline.rsup.supervisor;
        let switch_events: Vec<EventId> = pipeline.rs.switch_ids().into_iter().collect();
        let re_source_states = switch_events
            .iter()
            .map(|&e| (e, sup.states().filter(|&q| sup.successor(q, e).is_some()).count()))
            .collect();
        Summary {
            gmode_states: pipeline.gmode.state_count(),
            gmode_transitions: pipeline.gmode.transition_count(),
            rsup_states: sup.state_count(),
            rsup_transitions: sup.transition_count(),
            controllable: controllability.holds(),
            nonblocking: ops::is_trim(sup),
            switch_events,
            re_source_states,
        }
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "GMode: {} states, {} transitions", self.gmode_states, self.gmode_transitions);
        let _ = writeln!(out, "RSUP: {} states, {} transitions", self.rsup_states, self.rsup_transitions);
        out.push_str("  (transition counts are what TCT reports as \"events\")\n");
        let _ = writeln!(out, "controllable: {}", yes_no(self.controllable));
        let _ = writeln!(out, "nonblocking: {}", yes_no(self.nonblocking));
        for (e, n) in &self.re_source_states {
            let _ = writeln!(out, "switch {e}: enabled at {n} RSUP states");
        }
        out
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn action_line(action: &TargetAction) -> String {
    let mut parts = Vec::new();
    if !action.disabled.is_empty() {
        parts.push(format!("disable {}", set(&action.disabled)));
    }
    match action.forced {
        Some(e) => parts.push(format!("force {e} preempting {}", set(&action.preempted))),
        None => parts.push(format!("fire {}", action.event)),
    }
    let mut line = parts.join("; ");
    if !action.feasible {
        line.push_str("  [preemption not covered by the relation]");
    }
    line
}

fn solution_text(out: &mut String, sup: &Generator, solution: &Solution, max_paths: Option<usize>) {
    let shown = max_paths.unwrap_or(usize::MAX);
    for (i, path) in solution.paths.paths().iter().enumerate().take(shown) {
        let _ = writeln!(out, "  path {}: {}", i + 1, word(&path.events));
        for (k, step) in path.steps.iter().enumerate() {
            let _ = write!(
                out,
                "    [{}] --{}--> [{}]  {}",
                path.states[k], path.events[k], path.states[k + 1], step.condition
            );
            if !step.disabled.is_empty() {
                let _ = write!(out, "; disable {}", set(&step.disabled));
            }
            if !step.forced.is_empty() {
                let _ = write!(out, "; force {}", set(&step.forced));
            }
            for d in &step.alternates {
                let _ = write!(out, "; alternate {}", word(&d.events));
                if !d.disabled.is_empty() {
                    let _ = write!(out, " (disable {} at [{}])", set(&d.disabled), sup.successor(path.states[k], d.events[0]).unwrap_or(0));
                }
            }
            out.push('\n');
        }
    }
    if solution.paths.len() > shown {
        let _ = writeln!(out, "  ... {} more", solution.paths.len() - shown);
    }
}

fn verdict(v: Verdict) -> &'static str {
    match v {
        Verdict::Solvable => "SOLVABLE",
        Verdict::Unsolvable => "UNSOLVABLE",
    }
}

pub fn event_solution_text(
    pipeline: &RsupPipeline,
    result: &EventSolution,
    max_paths: Option<usize>,
) -> String {
    let sup = &pipeline.rsup.supervisor;
    let mut out = String::new();
    let _ = writeln!(out, "verdict: {}", verdict(result.verdict));
    let _ = writeln!(out, "event: {}", result.event);
    let _ = writeln!(out, "source: [{}] ({})", result.source, pipeline.configuration_of(result.source));
    if let Some(reason) = &result.reason {
        let _ = writeln!(out, "reason: {reason}");
    }
    if let Some((best, target)) = result.best() {
        let _ = writeln!(out, "shortest: {} (to [{}])", word(&best.events), target.solution.target);
    }
    for t in result.targets.iter().filter(|t| t.solution.verdict == Verdict::Solvable) {
        let _ = writeln!(
            out,
            "target [{}] ({}): {} path(s)",
            t.solution.target,
            pipeline.configuration_of(t.solution.target),
            t.solution.paths.len()
        );
        let _ = writeln!(out, "  at target: {}", action_line(&t.action));
        solution_text(&mut out, sup, &t.solution, max_paths);
    }
    let unsolved = result.targets.iter().filter(|t| t.solution.verdict == Verdict::Unsolvable).count();
    if unsolved > 0 {
        let _ = writeln!(out, "unreachable source states for {}: {unsolved}", result.event);
    }
    out
}
