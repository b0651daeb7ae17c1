#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use rand::Rng;
use rsup_core::event::Event;
use rsup_core::solvability::PreemptionRelation;
use rsup_core::{Alphabet, EventId, Generator};

pub fn ev(id: u32) -> EventId {
    EventId(id)
}

pub fn alphabet(ids: &[u32]) -> Alphabet {
    ids.iter().map(|&i| Event::by_parity(i)).collect()
}

/// Odd ids controllable; a random half of them forcible.
pub fn random_alphabet(rng: &mut impl Rng, ids: &[u32]) -> Alphabet {
    ids.iter()
        .map(|&i| Event::by_parity(i).forcible(i % 2 == 1 && rng.gen_bool(0.5)))
        .collect()
}

/// Up to `max_states` states, each transition present with probability
/// `density`, random marking with at least one marked state.
pub fn random_generator(
    rng: &mut impl Rng,
    name: &str,
    alphabet: &Alphabet,
    max_states: usize,
    density: f64,
) -> Generator {
    let n = rng.gen_range(1..=max_states);
    let mut transitions = Vec::new();
    for q in 0..n {
        for e in alphabet.ids() {
            if rng.gen_bool(density) {
                transitions.push((q, e, rng.gen_range(0..n)));
            }
        }
    }
    let mut marked: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.4)).collect();
    if marked.is_empty() {
        marked.push(rng.gen_range(0..n));
    }
    Generator::new(name, alphabet.clone(), n, 0, marked, transitions).unwrap()
}

pub fn random_preemption(rng: &mut impl Rng, alphabet: &Alphabet) -> PreemptionRelation {
    let forcible: Vec<EventId> = alphabet.iter().filter(|e| e.forcible).map(|e| e.id).collect();
    let mut pairs = Vec::new();
    for &f in &forcible {
        for b in alphabet.ids() {
            if f != b && rng.gen_bool(0.4) {
                pairs.push((f, b));
            }
        }
    }
    PreemptionRelation::new(pairs, alphabet).unwrap()
}

/// Closed and marked behavior of `g` up to `depth`, by replaying every word
/// over the alphabet.
pub fn brute_language(gs: &[&Generator], ids: &[EventId], depth: usize) -> BTreeMap<Vec<EventId>, bool> {
    let mut out = BTreeMap::new();
    let mut frontier = vec![Vec::new()];
    for len in 0..=depth {
        let mut next = Vec::new();
        for word in frontier {
            let mut marked = true;
            let mut alive = true;
            for g in gs {
                let own: Vec<EventId> = word.iter().copied().filter(|&e| g.alphabet().contains(e)).collect();
                match g.replay(&own) {
                    Some(q) => marked &= g.is_marked(q),
                    None => {
                        alive = false;
                        break;
                    }
                }
            }
            if !alive {
                continue;
            }
            if len < depth {
                for &e in ids {
                    let mut w = word.clone();
                    w.push(e);
                    next.push(w);
                }
            }
            out.insert(word, marked);
        }
        frontier = next;
    }
    out
}

/// Union of the generators' alphabets, as event ids.
pub fn ids_of(gs: &[&Generator]) -> Vec<EventId> {
    gs.iter().flat_map(|g| g.alphabet().ids()).collect::<BTreeSet<_>>().into_iter().collect()
}

/// Proptest strategy for a generator over `ids` with at most `max_states`.
pub fn arb_generator(name: &'static str, ids: &'static [u32], max_states: usize) -> impl Strategy<Value = Generator> {
    (1..=max_states).prop_flat_map(move |n| {
        let edges = proptest::collection::vec(proptest::option::weighted(0.5, 0..n), n * ids.len());
        let marked = proptest::collection::vec(any::<bool>(), n);
        (Just(n), edges, marked).prop_map(move |(n, edges, marked)| {
            let transitions = edges.iter().enumerate().filter_map(|(i, to)| {
                to.map(|to| (i / ids.len(), ev(ids[i % ids.len()]), to))
            });
            let marked = marked.iter().enumerate().filter(|(_, &m)| m).map(|(q, _)| q);
            Generator::new(name, alphabet(ids), n, 0, marked, transitions).unwrap()
        })
    })
}

/// Mostly a state reachable from `source`, sometimes any state.
pub fn random_target(rng: &mut impl Rng, g: &Generator, source: usize) -> usize {
    let mut seen = vec![false; g.state_count()];
    let mut stack = vec![source];
    while let Some(q) = stack.pop() {
        for &next in g.outgoing(q).values() {
            if !seen[next] {
                seen[next] = true;
                stack.push(next);
            }
        }
    }
    let reachable: Vec<usize> = (0..g.state_count()).filter(|&q| seen[q] && q != source).collect();
    if reachable.is_empty() || rng.gen_bool(0.2) {
        rng.gen_range(0..g.state_count())
    } else {
        reachable[rng.gen_range(0..reachable.len())]
    }
}
