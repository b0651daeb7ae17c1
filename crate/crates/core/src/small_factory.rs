//! The SMALL FACTORY example: machines M1 and M2 work with either a 3-slot
//! buffer BUF1 (configuration C1) or a 1-slot buffer BUF2 (C2); event 91
//! switches C1 → C2 and 93 switches back.

use crate::error::{Error, Result};
use crate::event::EventId;
use crate::generator::Generator;
use crate::manifest::{Manifest, Project};

pub const MANIFEST: &str = include_str!("../fixtures/small_factory/manifest.toml");
pub const M1: &str = include_str!("../fixtures/small_factory/M1.json");
pub const M2: &str = include_str!("../fixtures/small_factory/M2.json");
pub const BUF1: &str = include_str!("../fixtures/small_factory/BUF1.json");
pub const BUF2: &str = include_str!("../fixtures/small_factory/BUF2.json");
pub const PREEMPTION: &str = include_str!("../fixtures/small_factory/preemption.json");
/// Behavioral spec that never allows event 91.
pub const NO91: &str = include_str!("../fixtures/small_factory/NO91.json");

pub const SWITCH_TO_C2: EventId = EventId(91);
pub const SWITCH_TO_C1: EventId = EventId(93);

/// Reaches the state with BUF1 full, M1 idle and M2 broken down, still in
/// C1: fill BUF1 twice, let M2 take one part and break, refill.
pub const WITNESS_BUF1_FULL_M2_DOWN: &[u32] = &[11, 30, 11, 30, 31, 22, 11, 30, 11, 30];

/// From the state above: repair M2 and let it drain BUF1; ends with BUF1
/// empty, M1 idle and M2 working.
pub const DRAIN_BUF1: &[u32] = &[23, 31, 20, 31, 20, 31];

pub fn events(ids: &[u32]) -> Vec<EventId> {
    ids.iter().copied().map(EventId).collect()
}

/// The embedded project, as loaded from its manifest.
pub fn project() -> Result<Project> {
    let manifest = Manifest::parse(MANIFEST, "small_factory/manifest.toml")?;
    Project::resolve(manifest, |file| {
        let text = match file {
            "M1.json" => M1,
            "M2.json" => M2,
            "BUF1.json" => BUF1,
            "BUF2.json" => BUF2,
            "preemption.json" => PREEMPTION,
            "NO91.json" => NO91,
            other => {
                return Err(Error::Parse {
                    path: other.into(),
                    message: "not part of the embedded SMALL FACTORY fixture".into(),
                })
            }
        };
        Ok((text.to_string(), format!("small_factory/{file}")))
    })
}

pub fn no91_spec() -> Generator {
    crate::format::parse_generator(NO91, "small_factory/NO91.json").expect("fixture parses")
}
