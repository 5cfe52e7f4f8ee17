//! Experiment configuration: JSON schemas for bodies, graphs and runs, and
//! resolution into core run inputs.
//!
//! Precedence is CLI flags over config-file fields over defaults; the CLI
//! layer applies overrides before `prepare` resolves the experiment.

use serde::{Deserialize, Serialize};

use scrible_core::{
    build_flow_polytope, delays_to_loss, make_log_barrier, make_oblivious_sequence,
    AlgorithmKind, BarrierOracle, ConvexPolytope, Environment, EtaChoice, FixedSequenceEnv,
    FlowMap, GraphSpec, RunConfig, SequenceKind, UpdateMode, DEFAULT_NEWTON_TOL,
};

use crate::HarnessError;

/// Polytope as `{"A": [[...]], "b": [...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BodyFile {
    #[serde(rename = "A")]
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
}

impl BodyFile {
    pub fn build(&self) -> Result<ConvexPolytope, HarnessError> {
        Ok(ConvexPolytope::new(self.a.clone(), self.b.clone())?)
    }
}

/// Graph with per-round edge delays; delay rows cycle when the horizon is
/// longer than the list.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphFile {
    pub nodes: usize,
    pub edges: Vec<(usize, usize)>,
    pub source: usize,
    pub sink: usize,
    pub delays: Vec<Vec<f64>>,
}

/// Loss-sequence generator selection.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EnvironmentSpec {
    Constant { vector: Vec<f64> },
    Rotating { vectors: Vec<Vec<f64>> },
    RandomSigned,
}

impl EnvironmentSpec {
    fn to_kind(&self) -> SequenceKind {
        match self {
            EnvironmentSpec::Constant { vector } => SequenceKind::Constant(vector.clone()),
            EnvironmentSpec::Rotating { vectors } => SequenceKind::Rotating(vectors.clone()),
            EnvironmentSpec::RandomSigned => SequenceKind::RandomSigned,
        }
    }
}

/// `"auto"` or a positive number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EtaField {
    Auto,
    Fixed(f64),
}

impl Serialize for EtaField {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            EtaField::Auto => s.serialize_str("auto"),
            EtaField::Fixed(v) => s.serialize_f64(*v),
        }
    }
}

impl<'de> Deserialize<'de> for EtaField {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let value = serde_json::Value::deserialize(d)?;
        match &value {
            serde_json::Value::String(s) if s == "auto" => Ok(EtaField::Auto),
            serde_json::Value::Number(n) => n
                .as_f64()
                .filter(|v| *v > 0.0)
                .map(EtaField::Fixed)
                .ok_or_else(|| serde::de::Error::custom("eta must be positive")),
            _ => Err(serde::de::Error::custom("eta must be \"auto\" or a number")),
        }
    }
}

impl std::str::FromStr for EtaField {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "auto" {
            return Ok(EtaField::Auto);
        }
        s.parse::<f64>()
            .ok()
            .filter(|v| *v > 0.0)
            .map(EtaField::Fixed)
            .ok_or_else(|| format!("eta must be \"auto\" or a positive number, got {s:?}"))
    }
}

fn default_replications() -> usize {
    1
}

fn default_update_mode() -> String {
    "argmin".into()
}

fn default_algorithm() -> String {
    "scrible".into()
}

fn default_eta() -> EtaField {
    EtaField::Auto
}

/// Top-level experiment file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub body: Option<BodyFile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphFile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub environment: Option<EnvironmentSpec>,
    pub horizon: usize,
    #[serde(default = "default_eta")]
    pub eta: EtaField,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_replications")]
    pub replications: usize,
    #[serde(default = "default_algorithm")]
    pub algorithm: String,
    #[serde(default = "default_update_mode")]
    pub update_mode: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub loss_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pgd_delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub newton_tol: Option<f64>,
    #[serde(default)]
    pub allow_condition_violation: bool,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn algorithm_kind(&self) -> Result<AlgorithmKind, HarnessError> {
        match self.algorithm.as_str() {
            "scrible" => Ok(AlgorithmKind::Scrible),
            "ftrl_full" => Ok(AlgorithmKind::FtrlFull),
            "bandit_pgd" => Ok(AlgorithmKind::BanditPgd),
            other => Err(HarnessError::Config(format!(
                "unknown algorithm {other:?} (expected scrible, ftrl_full or bandit_pgd)"
            ))),
        }
    }

    pub fn update_mode_kind(&self) -> Result<UpdateMode, HarnessError> {
        match self.update_mode.as_str() {
            "argmin" => Ok(UpdateMode::Argmin),
            "single_newton" | "single-newton" => Ok(UpdateMode::SingleNewton),
            other => Err(HarnessError::Config(format!(
                "unknown update_mode {other:?} (expected argmin or single_newton)"
            ))),
        }
    }
}

/// Fully resolved experiment: body, barrier, per-round losses and the base
/// run config. Environments are rebuilt per replication.
pub struct PreparedExperiment {
    pub config: ExperimentConfig,
    pub body: ConvexPolytope,
    pub barrier: BarrierOracle,
    pub vectors: Vec<Vec<f64>>,
    pub offsets: Vec<f64>,
    pub run: RunConfig,
    pub flow: Option<(GraphSpec, FlowMap)>,
}

impl PreparedExperiment {
    /// Fresh environment instance (environments are consumed mutably).
    pub fn environment(&self) -> Result<FixedSequenceEnv, HarnessError> {
        Ok(FixedSequenceEnv::new_affine(
            self.vectors.clone(),
            self.offsets.clone(),
            &self.body,
        )?)
    }

    /// Replication `r` runs with seed `base_seed + r`.
    pub fn run_config_for(&self, replication: usize) -> RunConfig {
        let mut cfg = self.run.clone();
        cfg.seed = self.run.seed.wrapping_add(replication as u64);
        cfg
    }
}

/// Resolves a config file into a runnable experiment.
pub fn prepare(config: &ExperimentConfig) -> Result<PreparedExperiment, HarnessError> {
    let algorithm = config.algorithm_kind()?;
    let update_mode = config.update_mode_kind()?;
    if config.replications == 0 {
        return Err(HarnessError::Config("replications must be >= 1".into()));
    }

    let (body, vectors, offsets, flow) = match (&config.body, &config.graph) {
        (Some(_), Some(_)) => {
            return Err(HarnessError::Config(
                "config must give either body or graph, not both".into(),
            ))
        }
        (None, None) => {
            return Err(HarnessError::Config("config needs a body or a graph".into()))
        }
        (Some(body_file), None) => {
            let body = body_file.build()?;
            let env = config.environment.as_ref().ok_or_else(|| {
                HarnessError::Config("body experiments need an environment".into())
            })?;
            let seq = make_oblivious_sequence(
                &env.to_kind(),
                &body,
                config.horizon,
                config.seed,
            )?;
            let vectors = seq.vectors().to_vec();
            let offsets = vec![0.0; vectors.len()];
            (body, vectors, offsets, None)
        }
        (None, Some(graph_file)) => {
            if config.environment.is_some() {
                return Err(HarnessError::Config(
                    "graph experiments take losses from delays; drop the environment field"
                        .into(),
                ));
            }
            if graph_file.delays.is_empty() {
                return Err(HarnessError::Config("graph needs at least one delay row".into()));
            }
            let graph = GraphSpec::new(
                graph_file.nodes,
                graph_file.edges.clone(),
                graph_file.source,
                graph_file.sink,
            )?;
            let (body, map) = build_flow_polytope(&graph)?;
            let mut vectors = Vec::with_capacity(config.horizon);
            let mut offsets = Vec::with_capacity(config.horizon);
            for t in 0..config.horizon {
                let delays = &graph_file.delays[t % graph_file.delays.len()];
                let (linear, offset) = delays_to_loss(&map, delays)?;
                vectors.push(linear);
                offsets.push(offset);
            }
            (body, vectors, offsets, Some((graph, map)))
        }
    };

    // The declared bound defaults to the exact bound of the sequence over
    // the body's vertices; an explicit bound must dominate it.
    let exact_bound = FixedSequenceEnv::new_affine(vectors.clone(), offsets.clone(), &body)?
        .loss_bound();
    let loss_bound = match config.loss_bound {
        None => exact_bound.max(f64::MIN_POSITIVE),
        Some(declared) => {
            if exact_bound > declared * (1.0 + 1e-12) + 1e-12 {
                return Err(HarnessError::Config(format!(
                    "losses attain {exact_bound}, above the declared bound {declared}"
                )));
            }
            declared
        }
    };

    let run = RunConfig {
        horizon: config.horizon,
        eta: match config.eta {
            EtaField::Auto => EtaChoice::Auto,
            EtaField::Fixed(v) => EtaChoice::Fixed(v),
        },
        loss_bound,
        seed: config.seed,
        algorithm,
        update_mode,
        pgd_delta: config.pgd_delta,
        newton_tol: config.newton_tol.unwrap_or(DEFAULT_NEWTON_TOL),
        dikin_radius: 1.0,
        allow_condition_violation: config.allow_condition_violation,
    };

    let barrier = make_log_barrier(body.clone());
    Ok(PreparedExperiment {
        config: config.clone(),
        body,
        barrier,
        vectors,
        offsets,
        run,
        flow,
    })
}
