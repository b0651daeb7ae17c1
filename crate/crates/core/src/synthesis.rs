//! Controllability checking and supremal controllable sublanguage synthesis.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::event::EventId;
use crate::generator::{Generator, StateId};
use crate::ops::{self, StateMap};

/// Product-state limit for [`verify_supremality`].
pub const SUPREMALITY_GUARD: usize = 64;

#[derive(Debug, Clone)]
pub struct SupconResult {
    pub supervisor: Generator,
    /// Supervisor state → plant state.
    pub plant_map: StateMap,
    /// Supervisor state → spec state.
    pub spec_map: StateMap,
    /// Per supervisor state, the controllable events the plant enables there
    /// but the supervisor does not.
    pub disabled: Vec<BTreeSet<EventId>>,
}

impl SupconResult {
    pub fn is_empty(&self) -> bool {
        self.supervisor.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Controllability {
    Controllable,
    /// The plant can execute the uncontrollable `event` at `plant_state`
    /// while the supervisor, sitting at `sup_state`, refuses it.
    Violated { plant_state: StateId, sup_state: StateId, event: EventId },
}

impl Controllability {
    pub fn holds(&self) -> bool {
        matches!(self, Controllability::Controllable)
    }
}

fn require_subset(inner: &Generator, outer: &Generator) -> Result<()> {
    if inner.alphabet().is_subset_of(outer.alphabet()) {
        Ok(())
    } else {
        Err(Error::AlphabetMismatch { inner: inner.name().into(), outer: outer.name().into() })
    }
}

/// State-wise controllability of `sup` with respect to `plant`, decided on
/// their reachable product.
pub fn is_controllable(plant: &Generator, sup: &Generator) -> Result<Controllability> {
    require_subset(sup, plant)?;
    let (product, map) = ops::sync(&[plant, sup])?;
    for x in product.states() {
        let (p, s) = (map.get(x)[0], map.get(x)[1]);
        for &e in plant.outgoing(p).keys() {
            let owned = sup.alphabet().contains(e);
            if !plant.alphabet().is_controllable(e) && owned && sup.successor(s, e).is_none() {
                return Ok(Controllability::Violated { plant_state: p, sup_state: s, event: e });
            }
        }
    }
    Ok(Controllability::Controllable)
}

/// Supremal controllable sublanguage of `L_m(plant) ∩ L_m(spec)`, as a trim
/// generator. The spec's alphabet must be contained in the plant's; pad it
/// with `allevents(plant)` first if needed.
pub fn supcon(plant: &Generator, spec: &Generator) -> Result<SupconResult> {
    require_subset(spec, plant)?;
    let (product, pmap) = ops::sync(&[plant, spec])?;
    let alive = good_states(plant, &product, &pmap, product.states().collect());
    let (mut supervisor, smap) = ops::restrict(&product, &alive);
    supervisor = supervisor.with_name(format!("supcon({},{})", plant.name(), spec.name()));
    let full = smap.then(&pmap);
    let plant_map = full.project(0);
    let spec_map = full.project(1);
    let disabled = supervisor
        .states()
        .map(|s| {
            let p = plant_map.get(s)[0];
            plant
                .outgoing(p)
                .keys()
                .filter(|&&e| plant.alphabet().is_controllable(e) && supervisor.successor(s, e).is_none())
                .copied()
                .collect()
        })
        .collect();
    Ok(SupconResult { supervisor, plant_map, spec_map, disabled })
}

/// Largest subset of `start` that is closed under plant-enabled
/// uncontrollable events and coreachable within itself. Bad-state removal and
/// coreachability pruning alternate until neither changes the set.
fn good_states(
    plant: &Generator,
    product: &Generator,
    pmap: &StateMap,
    mut alive: BTreeSet<StateId>,
) -> BTreeSet<StateId> {
    let preds = product.predecessors();
    loop {
        let before = alive.len();
        loop {
            let bad: Vec<StateId> = alive
                .iter()
                .copied()
                .filter(|&x| !uncontrollably_closed(plant, product, pmap, &alive, x))
                .collect();
            if bad.is_empty() {
                break;
            }
            for x in bad {
                alive.remove(&x);
            }
        }
        alive = coreachable_within(product, &preds, &alive);
        if alive.len() == before {
            return alive;
        }
    }
}

fn uncontrollably_closed(
    plant: &Generator,
    product: &Generator,
    pmap: &StateMap,
    alive: &BTreeSet<StateId>,
    x: StateId,
) -> bool {
    let p = pmap.get(x)[0];
    plant
        .outgoing(p)
        .keys()
        .filter(|&&e| !plant.alphabet().is_controllable(e))
        .all(|&e| product.successor(x, e).is_some_and(|y| alive.contains(&y)))
}

fn coreachable_within(
    g: &Generator,
    preds: &[Vec<(StateId, EventId)>],
    within: &BTreeSet<StateId>,
) -> BTreeSet<StateId> {
    let mut seen: BTreeSet<StateId> =
        within.iter().copied().filter(|&q| g.is_marked(q)).collect();
    let mut stack: Vec<StateId> = seen.iter().copied().collect();
    while let Some(q) = stack.pop() {
        for &(p, _) in &preds[q] {
            if within.contains(&p) && seen.insert(p) {
                stack.push(p);
            }
        }
    }
    seen
}

/// Brute-force supremality check for small instances: the result must be
/// controllable and trim, and re-admitting any single product state that
/// supcon removed must break controllability or nonblocking.
pub fn verify_supremality(plant: &Generator, spec: &Generator, result: &SupconResult) -> Result<bool> {
    let (product, pmap) = ops::sync(&[plant, spec])?;
    if product.state_count() > SUPREMALITY_GUARD {
        return Err(Error::SizeGuard { size: product.state_count(), limit: SUPREMALITY_GUARD });
    }
    let sup = &result.supervisor;
    if !ops::is_trim(sup) || !is_controllable(plant, sup)?.holds() {
        return Ok(false);
    }

    let index: HashMap<&[StateId], StateId> =
        pmap.tuples().iter().enumerate().map(|(x, t)| (t.as_slice(), x)).collect();
    let mut kept = BTreeSet::new();
    for s in sup.states() {
        let tuple = [result.plant_map.get(s)[0], result.spec_map.get(s)[0]];
        match index.get(&tuple[..]) {
            Some(&x) => {
                kept.insert(x);
            }
            None => return Ok(false),
        }
    }
    let (restricted, _) = ops::restrict(&product, &kept);
    if restricted.state_count() != sup.state_count()
        || restricted.transition_count() != sup.transition_count()
    {
        return Ok(false);
    }

    for x in product.states().filter(|x| !kept.contains(x)) {
        let mut grown = kept.clone();
        grown.insert(x);
        let (candidate, cmap) = ops::restrict(&product, &grown);
        if candidate.state_count() != kept.len() + 1 {
            // x is not reachable through the grown set; nothing is added.
            continue;
        }
        let nonblocking = ops::coreachable(&candidate).len() == candidate.state_count();
        let controllable = candidate.states().all(|y| {
            let p = pmap.get(cmap.get(y)[0])[0];
            plant
                .outgoing(p)
                .keys()
                .filter(|&&e| !plant.alphabet().is_controllable(e))
                .all(|&e| candidate.successor(y, e).is_some())
        });
        if nonblocking && controllable {
            return Ok(false);
        }
    }
    Ok(true)
}
