mod common;

use common::*;
use rsup_core::ops::{language_sample, sync};
use rsup_core::small_factory::{self, DRAIN_BUF1, SWITCH_TO_C1, SWITCH_TO_C2, WITNESS_BUF1_FULL_M2_DOWN};
use rsup_core::solvability::{collect_paths, oracle_enumerate, CollectMode, SolveOptions};
use rsup_core::synthesis::is_controllable;
use rsup_core::EventId;

fn word(ids: &[u32]) -> Vec<EventId> {
    small_factory::events(ids)
}

#[test]
fn machine_language_prefix() {
    let project = small_factory::project().unwrap();
    let m1 = &project.components[0];
    let sample = language_sample(m1, 2);
    let expected = [
        (vec![], true),
        (word(&[11]), false),
        (word(&[11, 12]), false),
        (word(&[11, 30]), true),
        (word(&[11, 32]), true),
    ];
    assert_eq!(sample, expected.into_iter().collect());
}

#[test]
fn configuration_product_matches_componentwise_replay() {
    let project = small_factory::project().unwrap();
    let parts: Vec<_> = project.components.iter().chain(&project.specs[..1]).collect();
    let (product, _) = sync(&parts).unwrap();
    assert_eq!(language_sample(&product, 7), brute_language(&parts, &ids_of(&parts), 7));
}

#[test]
fn gmode_is_the_full_multimodal_plant() {
    let pipeline = small_factory::project().unwrap().pipeline().unwrap();
    // 3 x 3 machine states in each of 2 modes.
    assert_eq!(pipeline.gmode.state_count(), 18);
    assert_eq!(pipeline.gmode.transition_count(), 78);
    let sup = &pipeline.rsup.supervisor;
    assert!(is_controllable(&pipeline.gmode, sup).unwrap().holds());
    assert_eq!(pipeline.configuration_of(sup.initial().unwrap()), "C1");
}

#[test]
fn reverse_switch_never_precedes_the_forward_one() {
    let pipeline = small_factory::project().unwrap().pipeline().unwrap();
    for w in language_sample(&pipeline.rsup.supervisor, 10).keys() {
        if let Some(back) = w.iter().position(|&e| e == SWITCH_TO_C1) {
            assert!(w[..back].contains(&SWITCH_TO_C2), "{w:?}");
        }
    }
}

#[test]
fn buffer_bounds_hold_in_the_first_mode() {
    // In C1, BUF1 (3 slots) counts 30 as put and 31 as take.
    let pipeline = small_factory::project().unwrap().pipeline().unwrap();
    for w in language_sample(&pipeline.rsup.supervisor, 10).keys() {
        let mut level = 0i32;
        for &e in w.iter().take_while(|&&e| e != SWITCH_TO_C2) {
            level += match e.0 {
                30 => 1,
                31 => -1,
                _ => 0,
            };
            assert!((0..=3).contains(&level), "{w:?}");
        }
    }
}

#[test]
fn collector_modes_and_oracle_agree_on_the_drain_request() {
    let project = small_factory::project().unwrap();
    let pipeline = project.pipeline().unwrap();
    let sup = &pipeline.rsup.supervisor;
    let source = sup.locate(&word(WITNESS_BUF1_FULL_M2_DOWN)).unwrap();
    let full: Vec<u32> = WITNESS_BUF1_FULL_M2_DOWN.iter().chain(DRAIN_BUF1).copied().collect();
    let target = sup.locate(&word(&full)).unwrap();
    let pr = project.preemption_for(sup).unwrap();
    let mut options: SolveOptions = project.solve_options(&pipeline).unwrap();
    options.held.insert(SWITCH_TO_C2);

    let all = collect_paths(sup, target, source, &pr, &options).unwrap();
    let oracle = oracle_enumerate(sup, target, source, &pr, &options).unwrap();
    assert_eq!(all.signature(), oracle.signature());
    options.mode = CollectMode::PaperLiteral;
    let literal = collect_paths(sup, target, source, &pr, &options).unwrap();
    assert!(literal.signature().is_subset(&all.signature()));
    assert_eq!(literal.shortest().unwrap().events, word(DRAIN_BUF1));
}

#[test]
fn pipeline_is_deterministic_and_reroots() {
    let project = small_factory::project().unwrap();
    let a = project.pipeline().unwrap();
    let b = project.pipeline().unwrap();
    assert_eq!(a.rsup.supervisor, b.rsup.supervisor);

    let rs = project.reconfig_spec(&project.rs_options()).unwrap().rerooted("C2").unwrap();
    let components: Vec<_> = project.components.iter().collect();
    let specs: Vec<_> = project.specs.iter().collect();
    let c2 = rsup_core::reconfig::build_rsup(&components, &rs, &specs).unwrap();
    let sup = &c2.rsup.supervisor;
    assert_eq!(c2.configuration_of(sup.initial().unwrap()), "C2");
    let first = sup.enabled_events(sup.initial().unwrap()).unwrap();
    assert!(first.contains(&SWITCH_TO_C1) && !first.contains(&SWITCH_TO_C2));
}
