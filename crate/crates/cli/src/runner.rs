//! Scenario execution: prepared links per band set, cached pump optimization
//! and full-fidelity evaluation.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use hybrid_link_core::pso::{decode_pumps, optimize, pump_bounds};
use hybrid_link_core::{LinkEvaluation, LinkScenario, PreparedLink, RamanPumpSet, SwarmConfig, SwarmResult};
use rayon::prelude::*;

use crate::cache::{optimum_key, OptimumCache};
use crate::config::{BandSet, Config};
use crate::error::{CliError, Result};

pub fn scenario_id(set: &BandSet, n_span: u32, n_pumps: usize, p_mm_w: f64) -> String {
    format!("{set}-{n_span}span-{n_pumps}pump-{p_mm_w}W")
}

pub fn pump_plan(pumps: &RamanPumpSet) -> String {
    if pumps.is_empty() {
        return "none".into();
    }
    pumps
        .pumps()
        .iter()
        .map(|p| format!("{:.2}nm@{:.2}mW", p.wavelength_nm, p.power_mw))
        .collect::<Vec<_>>()
        .join(";")
}

struct Links {
    full: PreparedLink,
    search: PreparedLink,
}

#[derive(Debug, Clone)]
pub struct Optimum {
    pub pumps: RamanPumpSet,
    /// `None` for lumped-only scenarios, which need no search.
    pub swarm: Option<SwarmResult>,
    pub cached: bool,
}

pub struct Study {
    config: Config,
    cache: OptimumCache,
    links: Mutex<BTreeMap<BandSet, Arc<Links>>>,
}

impl Study {
    pub fn new(config: Config, cache: OptimumCache) -> Self {
        Self {
            config,
            cache,
            links: Mutex::new(BTreeMap::new()),
        }
    }

    pub fn config(&self) -> &Config {
        &self.config
    }

    fn links(&self, set: &BandSet) -> Result<Arc<Links>> {
        let mut map = self.links.lock().expect("link map poisoned");
        if let Some(l) = map.get(set) {
            return Ok(l.clone());
        }
        let model = self.config.link_model(set)?;
        let search = model.clone().with_solver(self.config.search_solver());
        let links = Arc::new(Links {
            full: PreparedLink::new(model)?,
            search: PreparedLink::new(search)?,
        });
        map.insert(set.clone(), links.clone());
        Ok(links)
    }

    pub fn prepared(&self, set: &BandSet) -> Result<PreparedLink> {
        Ok(self.links(set)?.full.clone())
    }

    pub fn swarm_config(&self, n_pumps: usize) -> SwarmConfig {
        SwarmConfig {
            bounds: pump_bounds(n_pumps),
            ..self.config.swarm.clone()
        }
    }

    /// Best `n_pumps` pump set for total throughput after `n_span` spans.
    pub fn optimize(&self, set: &BandSet, n_span: u32, n_pumps: usize) -> Result<Optimum> {
        if n_pumps == 0 {
            return Ok(Optimum {
                pumps: RamanPumpSet::none(),
                swarm: None,
                cached: false,
            });
        }
        let links = self.links(set)?;
        let swarm = self.swarm_config(n_pumps);
        let key = optimum_key(links.search.model(), &self.config.search_solver(), n_span, &swarm);
        let id = format!("{set}-{n_span}span-{n_pumps}pump");
        if let Some(hit) = self.cache.get(&key) {
            log::info!("{id}: cached optimum {key}");
            let pumps = decode_pumps(&hit.best).map_err(|source| CliError::Scenario { scenario: id, source })?;
            return Ok(Optimum {
                pumps,
                swarm: Some(hit),
                cached: true,
            });
        }
        let link = &links.search;
        let result = optimize(&swarm, |xs: &[Vec<f64>]| {
            xs.par_iter().map(|x| fitness(link, x, n_span)).collect()
        })
        .map_err(|source| CliError::Scenario {
            scenario: id.clone(),
            source,
        })?;
        if !result.best_fitness.is_finite() {
            return Err(CliError::Scenario {
                scenario: id,
                source: hybrid_link_core::Error::NotConverged {
                    iterations: result.evaluations,
                    residual: f64::INFINITY,
                },
            });
        }
        log::info!(
            "{id}: {:.3} Tb/s after {} evaluations",
            result.best_fitness,
            result.evaluations
        );
        self.cache.put(&key, &result)?;
        let pumps = decode_pumps(&result.best).map_err(|source| CliError::Scenario { scenario: id, source })?;
        Ok(Optimum {
            pumps,
            swarm: Some(result),
            cached: false,
        })
    }

    pub fn evaluate(&self, set: &BandSet, n_span: u32, pumps: &RamanPumpSet, p_mm_w: f64) -> Result<LinkEvaluation> {
        let id = scenario_id(set, n_span, pumps.len(), p_mm_w);
        let scenario = LinkScenario {
            n_span,
            p_mm_w,
            pumps: pumps.clone(),
        };
        let eval = self
            .links(set)?
            .full
            .evaluate(&scenario)
            .map_err(|source| CliError::Scenario {
                scenario: id.clone(),
                source,
            })?;
        if let Some(first) = eval.warnings.first() {
            log::warn!("{id}: {} warning(s), first: {first}", eval.warnings.len());
        }
        Ok(eval)
    }
}

fn fitness(link: &PreparedLink, candidate: &[f64], n_span: u32) -> f64 {
    match decode_pumps(candidate).and_then(|p| link.throughput(&p, n_span)) {
        Ok(v) => v,
        Err(e) => {
            log::debug!("candidate {candidate:?} discarded: {e}");
            f64::NEG_INFINITY
        }
    }
}
