//! Project manifests (TOML) tying component files, configurations, switch
//! events and specs together.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::event::{Event, EventId};
use crate::format;
use crate::generator::Generator;
use crate::reconfig::{self, Configuration, ReconfigSpec, RsOptions, RsupPipeline, SwitchEvent};
use crate::solvability::{CollectMode, PreemptionRelation, SolveOptions};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    #[serde(default)]
    pub name: Option<String>,
    /// Plant component files.
    pub components: Vec<String>,
    /// Behavioral specification files.
    #[serde(default)]
    pub specs: Vec<String>,
    /// Preemption relation file; every forcible event preempts every
    /// uncontrollable one when absent.
    #[serde(default)]
    pub preemption: Option<String>,
    pub initial: String,
    pub configurations: Vec<ConfigurationEntry>,
    #[serde(default)]
    pub switches: Vec<SwitchEntry>,
    #[serde(default)]
    pub options: ManifestOptions,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigurationEntry {
    pub name: String,
    /// Names of component or spec generators.
    pub members: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SwitchEntry {
    pub id: u32,
    #[serde(default)]
    pub label: Option<String>,
    pub from: String,
    pub to: String,
    #[serde(default = "yes")]
    pub controllable: bool,
    #[serde(default = "yes")]
    pub forcible: bool,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ManifestOptions {
    #[serde(default)]
    pub one_way: bool,
    /// Marked configurations (all when absent).
    #[serde(default)]
    pub marked: Option<Vec<String>>,
    #[serde(default)]
    pub mode: Option<String>,
}

impl Manifest {
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse { path: origin.into(), message: e.to_string() })
    }
}

/// A manifest with every referenced file loaded.
#[derive(Debug, Clone)]
pub struct Project {
    pub manifest: Manifest,
    pub components: Vec<Generator>,
    pub specs: Vec<Generator>,
    pub preemption: Option<Vec<(EventId, EventId)>>,
}

impl Project {
    /// Loads a manifest from disk; file references resolve against the
    /// manifest's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = format::read_text(path)?;
        let manifest = Manifest::parse(&text, &path.display().to_string())?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::resolve(manifest, |file| {
            let full: PathBuf = base.join(file);
            Ok((format::read_text(&full)?, full.display().to_string()))
        })
    }

    /// Resolves file references through `fetch`, which returns the text and a
    /// display name for a manifest-relative path.
    pub fn resolve(manifest: Manifest, fetch: impl Fn(&str) -> Result<(String, String)>) -> Result<Self> {
        let load = |file: &String| -> Result<Generator> {
            let (text, origin) = fetch(file)?;
            format::parse_generator(&text, &origin)
        };
        let components = manifest.components.iter().map(load).collect::<Result<Vec<_>>>()?;
        let specs = manifest.specs.iter().map(load).collect::<Result<Vec<_>>>()?;
        let preemption = match &manifest.preemption {
            Some(file) => {
                let (text, origin) = fetch(file)?;
                Some(format::parse_preemption(&text, &origin)?)
            }
            None => None,
        };
        let mut names = BTreeSet::new();
        for g in components.iter().chain(&specs) {
            if !names.insert(g.name()) {
                return Err(Error::InvalidReconfig(format!("generator name `{}` is used twice", g.name())));
            }
        }
        Ok(Project { manifest, components, specs, preemption })
    }

    pub fn rs_options(&self) -> RsOptions {
        RsOptions {
            one_way: self.manifest.options.one_way,
            marked: self.manifest.options.marked.as_ref().map(|m| m.iter().cloned().collect()),
        }
    }

    pub fn collect_mode(&self) -> Result<CollectMode> {
        match &self.manifest.options.mode {
            None => Ok(CollectMode::default()),
            Some(m) => m.parse().map_err(|e: String| Error::Parse { path: "manifest".into(), message: e }),
        }
    }

    pub fn switches(&self) -> Vec<SwitchEvent> {
        self.manifest
            .switches
            .iter()
            .map(|s| {
                let base = if s.controllable { Event::controllable(s.id) } else { Event::uncontrollable(s.id) };
                let mut event = base.forcible(s.forcible);
                event.label = s.label.clone();
                SwitchEvent { event, from: s.from.clone(), to: s.to.clone() }
            })
            .collect()
    }

    pub fn configurations(&self) -> Result<Vec<Configuration>> {
        let pool: Vec<&Generator> = self.components.iter().chain(&self.specs).collect();
        self.manifest
            .configurations
            .iter()
            .map(|c| {
                let members: Vec<&str> = c.members.iter().map(String::as_str).collect();
                Configuration::from_pool(c.name.clone(), &members, &pool)
            })
            .collect()
    }

    pub fn reconfig_spec(&self, options: &RsOptions) -> Result<ReconfigSpec> {
        reconfig::build_rs(&self.configurations()?, &self.switches(), &self.manifest.initial, options)
    }

    /// GMode, padded spec and RSUP, with `extra_specs` added to the
    /// behavioral specification.
    pub fn pipeline_with(&self, options: &RsOptions, extra_specs: &[&Generator]) -> Result<RsupPipeline> {
        let rs = self.reconfig_spec(options)?;
        let components: Vec<&Generator> = self.components.iter().collect();
        let mut specs: Vec<&Generator> = self.specs.iter().collect();
        specs.extend_from_slice(extra_specs);
        reconfig::build_rsup(&components, &rs, &specs)
    }

    pub fn pipeline(&self) -> Result<RsupPipeline> {
        self.pipeline_with(&self.rs_options(), &[])
    }

    /// The file relation validated against the supervisor's alphabet, or the
    /// default relation. Pairs naming events the supervisor lacks (a switch
    /// dropped by a one-way RS) are ignored.
    pub fn preemption_for(&self, sup: &Generator) -> Result<PreemptionRelation> {
        let alphabet = sup.alphabet();
        match &self.preemption {
            Some(pairs) => PreemptionRelation::new(
                pairs.iter().copied().filter(|&(a, b)| alphabet.contains(a) && alphabet.contains(b)),
                alphabet,
            ),
            None => Ok(PreemptionRelation::forcible_over_uncontrollable(alphabet)),
        }
    }

    /// Switch events held during backtracking, with the manifest's mode.
    pub fn solve_options(&self, pipeline: &RsupPipeline) -> Result<SolveOptions> {
        Ok(SolveOptions { mode: self.collect_mode()?, held: pipeline.rs.switch_ids() })
    }
}
