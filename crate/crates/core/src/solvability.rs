//! Reconfiguration feasibility: backtracking forcibility conditions (BFCs)
//! and forcible path collection from an RE source state back to the current
//! state.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::event::{Alphabet, EventId};
use crate::generator::{Generator, StateId};
use crate::reconfig::re_source_states;

/// Supervisor size limit for [`oracle_enumerate`].
pub const ORACLE_GUARD: usize = 200;

/// `pr(a, b)`: the forcible event `a` can preempt `b`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct PreemptionRelation {
    pairs: BTreeSet<(EventId, EventId)>,
}

impl PreemptionRelation {
    /// Every preemptor must be forcible in `alphabet`.
    pub fn new(pairs: impl IntoIterator<Item = (EventId, EventId)>, alphabet: &Alphabet) -> Result<Self> {
        let pairs: BTreeSet<_> = pairs.into_iter().collect();
        for &(a, b) in &pairs {
            if !alphabet.contains(b) {
                return Err(Error::UnknownEvent(b));
            }
            if !alphabet.is_forcible(a) {
                return Err(Error::NotForcible(a));
            }
        }
        Ok(PreemptionRelation { pairs })
    }

    /// Every forcible event preempts every uncontrollable event.
    pub fn forcible_over_uncontrollable(alphabet: &Alphabet) -> Self {
        let forcible: Vec<EventId> = alphabet.iter().filter(|e| e.forcible).map(|e| e.id).collect();
        let pairs = alphabet
            .iter()
            .filter(|e| !e.controllable)
            .flat_map(|u| forcible.iter().map(move |&f| (f, u.id)))
            .collect();
        PreemptionRelation { pairs }
    }

    pub fn preempts(&self, preemptor: EventId, preempted: EventId) -> bool {
        self.pairs.contains(&(preemptor, preempted))
    }

    pub fn pairs(&self) -> &BTreeSet<(EventId, EventId)> {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// One backward step `q_i → q_r` under examination.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BacktrackContext {
    /// `q_i`.
    pub from: StateId,
    /// `q_r`, the current backtracking target.
    pub to: StateId,
    /// `Σ_i`: events leading from `q_i` to `q_r`.
    pub incoming: BTreeSet<EventId>,
    /// `Σ^i_c`.
    pub competing_controllable: BTreeSet<EventId>,
    /// `Σ^i_u`.
    pub competing_uncontrollable: BTreeSet<EventId>,
    /// Commanded events: they neither compete nor serve as steps.
    pub held: BTreeSet<EventId>,
}

impl BacktrackContext {
    pub fn new(sup: &Generator, from: StateId, to: StateId, held: &BTreeSet<EventId>) -> Result<Self> {
        sup.check_state(from)?;
        sup.check_state(to)?;
        let mut incoming = BTreeSet::new();
        let mut competing_controllable = BTreeSet::new();
        let mut competing_uncontrollable = BTreeSet::new();
        for (&e, &next) in sup.outgoing(from) {
            if held.contains(&e) {
                continue;
            }
            if next == to {
                incoming.insert(e);
            } else if sup.alphabet().is_controllable(e) {
                competing_controllable.insert(e);
            } else {
                competing_uncontrollable.insert(e);
            }
        }
        if incoming.is_empty() {
            return Err(Error::Degenerate(format!("no event leads from state {from} to state {to}")));
        }
        Ok(BacktrackContext {
            from,
            to,
            incoming,
            competing_controllable,
            competing_uncontrollable,
            held: held.clone(),
        })
    }

    /// `Σ^i`.
    pub fn competing(&self) -> BTreeSet<EventId> {
        self.competing_controllable.union(&self.competing_uncontrollable).copied().collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Bfc {
    #[serde(rename = "BFC-1")]
    One,
    #[serde(rename = "BFC-2")]
    Two,
    #[serde(rename = "BFC-3")]
    Three,
    #[serde(rename = "BFC-4")]
    Four,
}

impl fmt::Display for Bfc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = match self {
            Bfc::One => 1,
            Bfc::Two => 2,
            Bfc::Three => 3,
            Bfc::Four => 4,
        };
        write!(f, "BFC-{n}")
    }
}

/// An uncontrollable competitor followed by a controllable event into the
/// same target.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Detour {
    pub events: Vec<EventId>,
    /// Events to disable at the intermediate state.
    pub disabled: BTreeSet<EventId>,
}

/// Why a backward step was authorized and what the supervisor must do there.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct StepJustification {
    pub condition: Bfc,
    pub disabled: BTreeSet<EventId>,
    pub forced: BTreeSet<EventId>,
    /// BFC-4 alternates, each also a forcible way into the target.
    pub alternates: Vec<Detour>,
}

/// No event competes with the step.
pub fn bfc1(ctx: &BacktrackContext) -> bool {
    ctx.competing_controllable.is_empty() && ctx.competing_uncontrollable.is_empty()
}

/// Every competitor can be disabled.
pub fn bfc2(ctx: &BacktrackContext) -> bool {
    !ctx.competing_controllable.is_empty() && ctx.competing_uncontrollable.is_empty()
}

/// No competitor preempts `sigma`, and every uncontrollable competitor is
/// preempted by some competitor.
pub fn bfc3(ctx: &BacktrackContext, sigma: EventId, pr: &PreemptionRelation) -> bool {
    let competing = ctx.competing();
    let unpreempted = !competing.iter().any(|&c| pr.preempts(c, sigma));
    unpreempted
        && ctx
            .competing_uncontrollable
            .iter()
            .all(|&u| competing.iter().any(|&c| pr.preempts(c, u)))
}

/// Detours through uncontrollable competitors `σ'` whose target state `q_j`
/// reaches `q_r` directly and offers only controllable events. Empty when the
/// condition fails.
pub fn bfc4(sup: &Generator, ctx: &BacktrackContext) -> Vec<Detour> {
    let mut detours = Vec::new();
    for &u in &ctx.competing_uncontrollable {
        let Some(qj) = sup.successor(ctx.from, u) else { continue };
        let mut into_target = Vec::new();
        let mut others = BTreeSet::new();
        let mut all_controllable = true;
        for (&e, &next) in sup.outgoing(qj) {
            if ctx.held.contains(&e) {
                continue;
            }
            all_controllable &= sup.alphabet().is_controllable(e);
            if next == ctx.to {
                into_target.push(e);
            } else {
                others.insert(e);
            }
        }
        if all_controllable && !into_target.is_empty() {
            detours.extend(
                into_target
                    .into_iter()
                    .map(|e| Detour { events: vec![u, e], disabled: others.clone() }),
            );
        }
    }
    detours
}

/// First of BFC-1..4 that authorizes `sigma`, with its control actions.
pub fn step_forcible(
    sup: &Generator,
    ctx: &BacktrackContext,
    sigma: EventId,
    pr: &PreemptionRelation,
) -> Option<StepJustification> {
    if !ctx.incoming.contains(&sigma) {
        return None;
    }
    let plain = |condition, disabled| StepJustification {
        condition,
        disabled,
        forced: BTreeSet::new(),
        alternates: Vec::new(),
    };
    if bfc1(ctx) {
        return Some(plain(Bfc::One, BTreeSet::new()));
    }
    if bfc2(ctx) {
        return Some(plain(Bfc::Two, ctx.competing_controllable.clone()));
    }
    if bfc3(ctx, sigma, pr) {
        let competing = ctx.competing();
        let forced: BTreeSet<EventId> = ctx
            .competing_uncontrollable
            .iter()
            .filter_map(|&u| competing.iter().copied().find(|&c| pr.preempts(c, u)))
            .collect();
        let disabled = ctx.competing_controllable.difference(&forced).copied().collect();
        return Some(StepJustification { condition: Bfc::Three, disabled, forced, alternates: Vec::new() });
    }
    let alternates = bfc4(sup, ctx);
    if !alternates.is_empty() {
        return Some(StepJustification {
            condition: Bfc::Four,
            disabled: ctx.competing_controllable.clone(),
            forced: BTreeSet::new(),
            alternates,
        });
    }
    None
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CollectMode {
    /// Every cycle-free forcible path (per-branch visited set).
    #[default]
    AllSimple,
    /// One global visited-state list: each state is expanded at most once.
    PaperLiteral,
}

impl std::str::FromStr for CollectMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "all-simple" => Ok(CollectMode::AllSimple),
            "paper-literal" => Ok(CollectMode::PaperLiteral),
            other => Err(format!("unknown mode `{other}` (expected all-simple or paper-literal)")),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct SolveOptions {
    pub mode: CollectMode,
    /// Commanded events, typically the switch events.
    pub held: BTreeSet<EventId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ForciblePath {
    /// Forward order, source to target.
    pub events: Vec<EventId>,
    /// `events.len() + 1` states starting at the source.
    pub states: Vec<StateId>,
    pub steps: Vec<StepJustification>,
}

impl ForciblePath {
    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn conditions(&self) -> Vec<Bfc> {
        self.steps.iter().map(|s| s.condition).collect()
    }

    /// The path replays in `sup` along its state trace.
    pub fn replays_in(&self, sup: &Generator) -> bool {
        self.states.len() == self.events.len() + 1
            && self.events.len() == self.steps.len()
            && self
                .events
                .iter()
                .enumerate()
                .all(|(i, &e)| sup.successor(self.states[i], e) == Some(self.states[i + 1]))
    }

    fn sort_key(&self) -> (usize, &[EventId]) {
        (self.events.len(), &self.events)
    }
}

/// Forcible paths sorted by length, then by event ids.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct PathCollection {
    paths: Vec<ForciblePath>,
}

impl PathCollection {
    fn from_unsorted(mut paths: Vec<ForciblePath>) -> Self {
        paths.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        paths.dedup();
        PathCollection { paths }
    }

    pub fn paths(&self) -> &[ForciblePath] {
        &self.paths
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn shortest(&self) -> Option<&ForciblePath> {
        self.paths.first()
    }

    /// `(events, conditions)` pairs, for set comparisons.
    pub fn signature(&self) -> BTreeSet<(Vec<EventId>, Vec<Bfc>)> {
        self.paths.iter().map(|p| (p.events.clone(), p.conditions())).collect()
    }
}

fn check_pair(sup: &Generator, target: StateId, source: StateId) -> Result<()> {
    sup.check_state(target)?;
    sup.check_state(source)?;
    if target == source {
        return Err(Error::Degenerate(format!("source and target are the same state {source}")));
    }
    Ok(())
}

/// Backward search from `target` to `source`; a predecessor step is taken only
/// when [`step_forcible`] authorizes it.
pub fn collect_paths(
    sup: &Generator,
    target: StateId,
    source: StateId,
    pr: &PreemptionRelation,
    options: &SolveOptions,
) -> Result<PathCollection> {
    check_pair(sup, target, source)?;
    // Predecessors the source cannot reach never lead back to it.
    let from_source = reachable_from(sup, source, &options.held);
    let mut preds: Vec<Vec<StateId>> = vec![Vec::new(); sup.state_count()];
    for (from, e, to) in sup.transitions() {
        if !options.held.contains(&e) && from_source[from] && preds[to].last() != Some(&from) {
            preds[to].push(from);
        }
    }
    let mut collector = Collector {
        sup,
        pr,
        held: &options.held,
        preds,
        source,
        target,
        open: vec![true; sup.state_count()],
        suffix: Vec::new(),
        found: Vec::new(),
    };
    collector.open[target] = false;
    match options.mode {
        CollectMode::AllSimple => collector.all_simple(target)?,
        CollectMode::PaperLiteral => collector.literal(target)?,
    }
    Ok(PathCollection::from_unsorted(collector.found))
}

fn reachable_from(sup: &Generator, start: StateId, held: &BTreeSet<EventId>) -> Vec<bool> {
    let mut seen = vec![false; sup.state_count()];
    seen[start] = true;
    let mut stack = vec![start];
    while let Some(q) = stack.pop() {
        for (&e, &next) in sup.outgoing(q) {
            if !held.contains(&e) && !seen[next] {
                seen[next] = true;
                stack.push(next);
            }
        }
    }
    seen
}

struct Collector<'a> {
    sup: &'a Generator,
    pr: &'a PreemptionRelation,
    held: &'a BTreeSet<EventId>,
    preds: Vec<Vec<StateId>>,
    source: StateId,
    target: StateId,
    /// All-simple: states not on the current branch. Literal: `Q_T`.
    open: Vec<bool>,
    /// Steps from the current state to the target, nearest first.
    suffix: Vec<(StateId, EventId, StepJustification)>,
    found: Vec<ForciblePath>,
}

impl Collector<'_> {
    fn authorized(&self, from: StateId, to: StateId) -> Result<Vec<(EventId, StepJustification)>> {
        let ctx = BacktrackContext::new(self.sup, from, to, self.held)?;
        Ok(ctx
            .incoming
            .iter()
            .filter_map(|&e| step_forcible(self.sup, &ctx, e, self.pr).map(|j| (e, j)))
            .collect())
    }

    fn record(&mut self) {
        let mut events = Vec::with_capacity(self.suffix.len());
        let mut states = Vec::with_capacity(self.suffix.len() + 1);
        let mut steps = Vec::with_capacity(self.suffix.len());
        for (from, e, j) in self.suffix.iter().rev() {
            states.push(*from);
            events.push(*e);
            steps.push(j.clone());
        }
        states.push(self.target);
        self.found.push(ForciblePath { events, states, steps });
    }

    fn all_simple(&mut self, q: StateId) -> Result<()> {
        for i in 0..self.preds[q].len() {
            let qi = self.preds[q][i];
            if !self.open[qi] {
                continue;
            }
            for (e, j) in self.authorized(qi, q)? {
                self.suffix.push((qi, e, j));
                if qi == self.source {
                    self.record();
                } else {
                    self.open[qi] = false;
                    self.all_simple(qi)?;
                    self.open[qi] = true;
                }
                self.suffix.pop();
            }
        }
        Ok(())
    }

    fn literal(&mut self, q: StateId) -> Result<()> {
        if !self.open.iter().any(|&o| o) {
            return Ok(());
        }
        for i in 0..self.preds[q].len() {
            let qi = self.preds[q][i];
            if qi == self.source {
                for (e, j) in self.authorized(qi, q)? {
                    self.suffix.push((qi, e, j));
                    self.record();
                    self.suffix.pop();
                }
                self.open[qi] = false;
            } else if self.open[qi] {
                for (e, j) in self.authorized(qi, q)? {
                    self.suffix.push((qi, e, j));
                    self.open[qi] = false;
                    self.literal(qi)?;
                    self.suffix.pop();
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Solvable,
    Unsolvable,
}

#[derive(Debug, Clone, Serialize)]
pub struct Solution {
    pub verdict: Verdict,
    pub source: StateId,
    pub target: StateId,
    pub paths: PathCollection,
}

/// Decides whether `target` can be forcibly reached from `source`.
pub fn solve(
    sup: &Generator,
    target: StateId,
    source: StateId,
    pr: &PreemptionRelation,
    options: &SolveOptions,
) -> Result<Solution> {
    let paths = collect_paths(sup, target, source, pr, options)?;
    let verdict = if paths.is_empty() { Verdict::Unsolvable } else { Verdict::Solvable };
    Ok(Solution { verdict, source, target, paths })
}

/// What the supervisor does at an RE source state to make the switch happen.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TargetAction {
    pub state: StateId,
    pub event: EventId,
    pub disabled: BTreeSet<EventId>,
    /// The switch event itself, when it must win a race.
    pub forced: Option<EventId>,
    pub preempted: BTreeSet<EventId>,
    /// The switch is forcible and preempts every uncontrollable competitor.
    pub feasible: bool,
}

pub fn target_action(
    sup: &Generator,
    state: StateId,
    event: EventId,
    pr: &PreemptionRelation,
    held: &BTreeSet<EventId>,
) -> Result<TargetAction> {
    sup.check_state(state)?;
    if sup.successor(state, event).is_none() {
        return Err(Error::Degenerate(format!("event {event} is not enabled at state {state}")));
    }
    let mut disabled = BTreeSet::new();
    let mut preempted = BTreeSet::new();
    for &e in sup.outgoing(state).keys() {
        if e == event || held.contains(&e) {
            continue;
        }
        if sup.alphabet().is_controllable(e) {
            disabled.insert(e);
        } else {
            preempted.insert(e);
        }
    }
    let forced = (!preempted.is_empty()).then_some(event);
    let feasible = preempted.is_empty()
        || (sup.alphabet().is_forcible(event) && preempted.iter().all(|&u| pr.preempts(event, u)));
    Ok(TargetAction { state, event, disabled, forced, preempted, feasible })
}

#[derive(Debug, Clone, Serialize)]
pub struct TargetSolution {
    pub solution: Solution,
    pub action: TargetAction,
}

#[derive(Debug, Clone, Serialize)]
pub struct EventSolution {
    pub verdict: Verdict,
    pub event: EventId,
    pub source: StateId,
    pub reason: Option<String>,
    /// Solvable targets first, in order of their shortest path.
    pub targets: Vec<TargetSolution>,
}

impl EventSolution {
    /// The overall shortest path and the target it reaches.
    pub fn best(&self) -> Option<(&ForciblePath, &TargetSolution)> {
        self.targets
            .iter()
            .filter_map(|t| t.solution.paths.shortest().map(|p| (p, t)))
            .min_by(|a, b| a.0.sort_key().cmp(&b.0.sort_key()))
    }
}

/// Solves for every state at which `event` is enabled. The event itself is
/// held during the search. An event outside the supervisor's alphabet is
/// enabled nowhere.
pub fn solve_event(
    sup: &Generator,
    source: StateId,
    event: EventId,
    pr: &PreemptionRelation,
    options: &SolveOptions,
) -> Result<EventSolution> {
    sup.check_state(source)?;
    let targets = if sup.alphabet().contains(event) {
        re_source_states(sup, event)?
    } else {
        BTreeSet::new()
    };
    let mut options = options.clone();
    options.held.insert(event);
    let unsolved = |reason: &str| EventSolution {
        verdict: Verdict::Unsolvable,
        event,
        source,
        reason: Some(reason.into()),
        targets: Vec::new(),
    };
    if targets.is_empty() {
        return Ok(unsolved("event nowhere enabled"));
    }
    if targets.contains(&source) {
        let here = ForciblePath { events: Vec::new(), states: vec![source], steps: Vec::new() };
        let solution = Solution {
            verdict: Verdict::Solvable,
            source,
            target: source,
            paths: PathCollection::from_unsorted(vec![here]),
        };
        let action = target_action(sup, source, event, pr, &options.held)?;
        return Ok(EventSolution {
            verdict: Verdict::Solvable,
            event,
            source,
            reason: None,
            targets: vec![TargetSolution { solution, action }],
        });
    }
    let mut solved = Vec::new();
    for target in targets {
        let solution = solve(sup, target, source, pr, &options)?;
        let action = target_action(sup, target, event, pr, &options.held)?;
        solved.push(TargetSolution { solution, action });
    }
    solved.sort_by(|a, b| {
        let key = |t: &TargetSolution| {
            t.solution.paths.shortest().map(|p| (p.len(), p.events.clone(), t.solution.target))
        };
        match (key(a), key(b)) {
            (Some(x), Some(y)) => x.cmp(&y),
            (Some(_), None) => std::cmp::Ordering::Less,
            (None, Some(_)) => std::cmp::Ordering::Greater,
            (None, None) => a.solution.target.cmp(&b.solution.target),
        }
    });
    if solved.iter().any(|t| t.solution.verdict == Verdict::Solvable) {
        Ok(EventSolution { verdict: Verdict::Solvable, event, source, reason: None, targets: solved })
    } else {
        Ok(EventSolution { targets: solved, ..unsolved("no forcible path to any source state") })
    }
}

/// [`solve_event`] restricted to one RE source state `target`.
pub fn solve_event_at(
    sup: &Generator,
    source: StateId,
    event: EventId,
    target: StateId,
    pr: &PreemptionRelation,
    options: &SolveOptions,
) -> Result<EventSolution> {
    sup.check_state(source)?;
    let mut options = options.clone();
    options.held.insert(event);
    let action = target_action(sup, target, event, pr, &options.held)?;
    let solution = if target == source {
        let here = ForciblePath { events: Vec::new(), states: vec![source], steps: Vec::new() };
        Solution { verdict: Verdict::Solvable, source, target, paths: PathCollection::from_unsorted(vec![here]) }
    } else {
        solve(sup, target, source, pr, &options)?
    };
    Ok(EventSolution {
        verdict: solution.verdict,
        event,
        source,
        reason: (solution.verdict == Verdict::Unsolvable)
            .then(|| "no forcible path to the requested target".to_string()),
        targets: vec![TargetSolution { solution, action }],
    })
}

/// Brute-force reference for [`collect_paths`] in all-simple mode: enumerate
/// every simple forward path from `source` to `target`, then keep those whose
/// every step passes [`step_forcible`].
pub fn oracle_enumerate(
    sup: &Generator,
    target: StateId,
    source: StateId,
    pr: &PreemptionRelation,
    options: &SolveOptions,
) -> Result<PathCollection> {
    if sup.state_count() > ORACLE_GUARD {
        return Err(Error::SizeGuard { size: sup.state_count(), limit: ORACLE_GUARD });
    }
    check_pair(sup, target, source)?;
    let mut candidates = Vec::new();
    let mut visited = vec![false; sup.state_count()];
    visited[source] = true;
    let mut trace = vec![source];
    let mut word = Vec::new();
    forward_simple(sup, target, &options.held, &mut visited, &mut trace, &mut word, &mut candidates);

    let mut paths = Vec::new();
    'candidates: for (events, states) in candidates {
        let mut steps = Vec::with_capacity(events.len());
        for (i, &e) in events.iter().enumerate() {
            let ctx = BacktrackContext::new(sup, states[i], states[i + 1], &options.held)?;
            match step_forcible(sup, &ctx, e, pr) {
                Some(j) => steps.push(j),
                None => continue 'candidates,
            }
        }
        paths.push(ForciblePath { events, states, steps });
    }
    Ok(PathCollection::from_unsorted(paths))
}

fn forward_simple(
    sup: &Generator,
    target: StateId,
    held: &BTreeSet<EventId>,
    visited: &mut [bool],
    trace: &mut Vec<StateId>,
    word: &mut Vec<EventId>,
    out: &mut Vec<(Vec<EventId>, Vec<StateId>)>,
) {
    let q = *trace.last().expect("trace starts at the source");
    for (&e, &next) in sup.outgoing(q) {
        if held.contains(&e) || visited[next] {
            continue;
        }
        word.push(e);
        trace.push(next);
        if next == target {
            out.push((word.clone(), trace.clone()));
        } else {
            visited[next] = true;
            forward_simple(sup, target, held, visited, trace, word, out);
            visited[next] = false;
        }
        trace.pop();
        word.pop();
    }
}
