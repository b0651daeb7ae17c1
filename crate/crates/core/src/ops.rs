//! Language-level operations on generators.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::event::{Alphabet, EventId};
use crate::generator::{Generator, StateId};

/// Relates each state of a derived generator to a tuple of states of the
/// generators it was built from, one entry per constituent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateMap {
    constituents: Vec<String>,
    tuples: Vec<Vec<StateId>>,
}

impl StateMap {
    pub fn new(constituents: Vec<String>, tuples: Vec<Vec<StateId>>) -> Self {
        debug_assert!(tuples.iter().all(|t| t.len() == constituents.len()));
        StateMap { constituents, tuples }
    }

    pub fn identity(name: &str, state_count: usize) -> Self {
        StateMap::new(vec![name.to_string()], (0..state_count).map(|q| vec![q]).collect())
    }

    pub fn constituents(&self) -> &[String] {
        &self.constituents
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn get(&self, state: StateId) -> &[StateId] {
        &self.tuples[state]
    }

    pub fn tuples(&self) -> &[Vec<StateId>] {
        &self.tuples
    }

    /// The single-constituent map picking component `index`.
    pub fn project(&self, index: usize) -> StateMap {
        StateMap::new(
            vec![self.constituents[index].clone()],
            self.tuples.iter().map(|t| vec![t[index]]).collect(),
        )
    }

    /// Composes `self: A → B` (single-constituent) with `inner: B → C`,
    /// giving `A → C`.
    pub fn then(&self, inner: &StateMap) -> StateMap {
        debug_assert_eq!(self.constituents.len(), 1);
        StateMap::new(
            inner.constituents.clone(),
            self.tuples.iter().map(|t| inner.tuples[t[0]].clone()).collect(),
        )
    }
}

/// States reachable from the initial state.
pub fn reachable(g: &Generator) -> BTreeSet<StateId> {
    let mut seen = BTreeSet::new();
    let Some(q0) = g.initial() else { return seen };
    let mut stack = vec![q0];
    seen.insert(q0);
    while let Some(q) = stack.pop() {
        for &next in g.outgoing(q).values() {
            if seen.insert(next) {
                stack.push(next);
            }
        }
    }
    seen
}

/// States from which some marked state is reachable.
pub fn coreachable(g: &Generator) -> BTreeSet<StateId> {
    let preds = g.predecessors();
    let mut seen: BTreeSet<StateId> = g.marked().clone();
    let mut stack: Vec<StateId> = seen.iter().copied().collect();
    while let Some(q) = stack.pop() {
        for &(p, _) in &preds[q] {
            if seen.insert(p) {
                stack.push(p);
            }
        }
    }
    seen
}

/// Restricts `g` to the states in `keep` that are reachable from the initial
/// state through `keep`, numbered breadth-first with outgoing transitions
/// explored in ascending event-id order. Returns the empty generator when the
/// initial state is not kept.
pub fn restrict(g: &Generator, keep: &BTreeSet<StateId>) -> (Generator, StateMap) {
    let Some(q0) = g.initial().filter(|q| keep.contains(q)) else {
        return (
            Generator::empty(g.name(), g.alphabet().clone()),
            StateMap::new(vec![g.name().to_string()], Vec::new()),
        );
    };
    let mut index: HashMap<StateId, StateId> = HashMap::from([(q0, 0)]);
    let mut order = vec![q0];
    let mut queue = VecDeque::from([q0]);
    let mut delta = Vec::new();
    while let Some(q) = queue.pop_front() {
        let mut out = BTreeMap::new();
        for (&e, &next) in g.outgoing(q) {
            if !keep.contains(&next) {
                continue;
            }
            let id = *index.entry(next).or_insert_with(|| {
                order.push(next);
                queue.push_back(next);
                order.len() - 1
            });
            out.insert(e, id);
        }
        delta.push(out);
    }
    let marked = order
        .iter()
        .enumerate()
        .filter(|(_, q)| g.is_marked(**q))
        .map(|(i, _)| i)
        .collect();
    let map = StateMap::new(vec![g.name().to_string()], order.iter().map(|&q| vec![q]).collect());
    let sub = Generator::from_parts(g.name().to_string(), g.alphabet().clone(), delta, Some(0), marked);
    (sub, map)
}

/// Reachable and coreachable part of `g`, canonically renumbered.
pub fn trim(g: &Generator) -> (Generator, StateMap) {
    restrict(g, &coreachable(g))
}

pub fn is_trim(g: &Generator) -> bool {
    let all = g.state_count();
    reachable(g).len() == all && coreachable(g).len() == all
}

/// Breadth-first renumbering from the initial state, ascending event ids.
/// Unreachable states are dropped.
pub fn canonical_renumber(g: &Generator) -> (Generator, StateMap) {
    restrict(g, &g.states().collect())
}

/// A marked one-state generator selflooped with every event of `g`.
pub fn allevents(g: &Generator) -> Generator {
    let alphabet = g.alphabet().clone();
    let selfloops = alphabet.ids().map(|e| (0, e, 0)).collect::<Vec<_>>();
    Generator::new(format!("allevents({})", g.name()), alphabet, 1, 0, [0], selfloops)
        .expect("selfloop generator is well formed")
}

/// Reachable synchronous product. Shared events move every owner at once;
/// a tuple is marked iff every entry is marked.
pub fn sync(gs: &[&Generator]) -> Result<(Generator, StateMap)> {
    if gs.is_empty() {
        return Err(Error::InvalidGenerator("sync needs at least one generator".into()));
    }
    let alphabet = gs
        .iter()
        .try_fold(Alphabet::new(), |acc, g| acc.union(g.alphabet()))?;
    let name = gs.iter().map(|g| g.name()).collect::<Vec<_>>().join("||");
    let constituents: Vec<String> = gs.iter().map(|g| g.name().to_string()).collect();

    let initial: Option<Vec<StateId>> = gs.iter().map(|g| g.initial()).collect();
    let Some(initial) = initial else {
        return Ok((Generator::empty(name, alphabet), StateMap::new(constituents, Vec::new())));
    };

    // For each event, the constituents that own it.
    let owners: Vec<(EventId, Vec<usize>)> = alphabet
        .ids()
        .map(|e| (e, (0..gs.len()).filter(|&i| gs[i].alphabet().contains(e)).collect()))
        .collect();

    let mut index: HashMap<Vec<StateId>, StateId> = HashMap::from([(initial.clone(), 0)]);
    let mut order = vec![initial.clone()];
    let mut queue = VecDeque::from([initial]);
    let mut delta = Vec::new();
    while let Some(tuple) = queue.pop_front() {
        let mut out = BTreeMap::new();
        'events: for (e, owned_by) in &owners {
            let mut next = tuple.clone();
            for &i in owned_by {
                match gs[i].successor(tuple[i], *e) {
                    Some(q) => next[i] = q,
                    None => continue 'events,
                }
            }
            let id = match index.get(&next) {
                Some(&id) => id,
                None => {
                    order.push(next.clone());
                    index.insert(next.clone(), order.len() - 1);
                    queue.push_back(next);
                    order.len() - 1
                }
            };
            out.insert(*e, id);
        }
        delta.push(out);
    }
    let marked = order
        .iter()
        .enumerate()
        .filter(|(_, t)| t.iter().zip(gs).all(|(&q, g)| g.is_marked(q)))
        .map(|(i, _)| i)
        .collect();
    let product = Generator::from_parts(name, alphabet, delta, Some(0), marked);
    Ok((product, StateMap::new(constituents, order)))
}

/// Every string of `L(g)` up to `max_len` events, each flagged with whether it
/// lies in `L_m(g)`.
pub fn language_sample(g: &Generator, max_len: usize) -> BTreeMap<Vec<EventId>, bool> {
    let mut out = BTreeMap::new();
    if let Some(q0) = g.initial() {
        let mut word = Vec::new();
        sample_from(g, q0, max_len, &mut word, &mut out);
    }
    out
}

fn sample_from(
    g: &Generator,
    q: StateId,
    budget: usize,
    word: &mut Vec<EventId>,
    out: &mut BTreeMap<Vec<EventId>, bool>,
) {
    out.insert(word.clone(), g.is_marked(q));
    if budget == 0 {
        return;
    }
    for (&e, &next) in g.outgoing(q) {
        word.push(e);
        sample_from(g, next, budget - 1, word, out);
        word.pop();
    }
}

/// Closed and marked languages agree up to `depth`.
pub fn language_equivalent(a: &Generator, b: &Generator, depth: usize) -> bool {
    language_sample(a, depth) == language_sample(b, depth)
}
