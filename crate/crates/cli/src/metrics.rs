//! `casino metrics`: distances between the states of a JSON file, Schmidt
//! data of the pure ones, or a randomized search for bound violations.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;
use serde::{Deserialize, Serialize};

use casino_core::qmatrix::json::{matrix_from_json, vector_from_json, JsonTensor};
use casino_core::qmetrics::{
    angle_distance, entanglement_degree, fidelity, schmidt, search_bound_violations, state_to_bloch,
    trace_distance, BoundSearchReport, DensityMatrix, PureState,
};
use casino_core::sampling::SeededRng;

use crate::config::{positive_usize, FileConfig};
use crate::output::Summary;
use crate::DEFAULT_SEED;

pub const DEFAULT_FUZZ_TRIALS: usize = 10_000;

#[derive(Args, Debug)]
pub struct MetricsArgs {
    /// Flat key = value file; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// JSON file `{"states": [...]}` of state vectors and/or density matrices.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Sample random state pairs and count violations of the fidelity bounds.
    #[arg(long)]
    pub fuzz_bounds: bool,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// JSON summary path; stdout when absent.
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

#[derive(Deserialize)]
struct StatesFile {
    states: Vec<JsonTensor>,
}

enum State {
    Pure(PureState),
    Mixed(DensityMatrix),
}

impl State {
    fn density(&self) -> DensityMatrix {
        match self {
            State::Pure(p) => p.density(),
            State::Mixed(d) => d.clone(),
        }
    }

    fn dim(&self) -> usize {
        match self {
            State::Pure(p) => p.dim(),
            State::Mixed(d) => d.dim(),
        }
    }
}

#[derive(Serialize)]
struct Cut {
    cut: usize,
    coefficients: Vec<f64>,
    schmidt_number: usize,
}

#[derive(Serialize)]
struct StateReport {
    index: usize,
    kind: &'static str,
    dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    bloch: Option<[f64; 3]>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    schmidt: Vec<Cut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    entanglement_degree: Option<usize>,
}

#[derive(Serialize)]
struct PairReport {
    a: usize,
    b: usize,
    trace_distance: f64,
    fidelity: f64,
    angle: f64,
}

#[derive(Serialize)]
struct StatesReport {
    states: Vec<StateReport>,
    pairs: Vec<PairReport>,
}

#[derive(Debug, Serialize)]
struct Resolved {
    input: Option<String>,
    fuzz_bounds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    trials: Option<usize>,
}

fn parse_state(t: &JsonTensor) -> Result<State> {
    Ok(match t {
        JsonTensor::Vector(v) => State::Pure(PureState::new(vector_from_json(v))?),
        JsonTensor::Matrix(m) => State::Mixed(DensityMatrix::new(matrix_from_json(m)?)?),
    })
}

fn load_states(path: &std::path::Path) -> Result<Vec<State>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: StatesFile = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    file.states
        .iter()
        .enumerate()
        .map(|(i, t)| parse_state(t).with_context(|| format!("state {i}")))
        .collect()
}

fn report_state(index: usize, s: &State) -> Result<StateReport> {
    let bloch = (s.dim() == 2).then(|| state_to_bloch(&s.density())).transpose()?;
    let mut report = StateReport {
        index,
        kind: match s {
            State::Pure(_) => "pure",
            State::Mixed(_) => "mixed",
        },
        dim: s.dim(),
        bloch,
        schmidt: Vec::new(),
        entanglement_degree: None,
    };
    if let State::Pure(psi) = s {
        let dim = psi.dim();
        if dim.is_power_of_two() && dim >= 4 {
            let n = dim.trailing_zeros() as usize;
            for cut in 1..n {
                let data = schmidt(psi, cut)?;
                report.schmidt.push(Cut {
                    cut,
                    schmidt_number: data.number(),
                    coefficients: data.coefficients,
                });
            }
            report.entanglement_degree = Some(entanglement_degree(psi)?);
        }
    }
    Ok(report)
}

fn report_states(states: &[State]) -> Result<StatesReport> {
    let states_out = states
        .iter()
        .enumerate()
        .map(|(i, s)| report_state(i, s))
        .collect::<Result<Vec<_>>>()?;
    let densities: Vec<DensityMatrix> = states.iter().map(State::density).collect();
    let mut pairs = Vec::new();
    for a in 0..states.len() {
        for b in a + 1..states.len() {
            let (ra, rb) = (&densities[a], &densities[b]);
            if ra.dim() != rb.dim() {
                continue;
            }
            pairs.push(PairReport {
                a,
                b,
                trace_distance: trace_distance(ra, rb)?,
                fidelity: fidelity(ra, rb)?,
                angle: angle_distance(ra, rb)?,
            });
        }
    }
    Ok(StatesReport {
        states: states_out,
        pairs,
    })
}

#[derive(Serialize)]
#[serde(untagged)]
enum Outcome {
    States(StatesReport),
    Bounds(BoundSearchReport),
}

pub fn run(args: &MetricsArgs) -> Result<()> {
    let mut file = FileConfig::load(args.config.as_deref())?;
    let input: Option<PathBuf> = file.take("input", args.input.clone())?;
    let fuzz = file.take_switch("fuzz_bounds", args.fuzz_bounds)?;
    let trials = file.take("trials", args.trials)?;
    let seed = file.take("seed", args.seed)?.unwrap_or(DEFAULT_SEED);
    file.finish()?;

    let (outcome, resolved, seed_echo) = match (input, fuzz) {
        (Some(_), true) => bail!("choose either --input or --fuzz-bounds"),
        (None, false) => bail!("nothing to do: pass --input FILE or --fuzz-bounds"),
        (Some(path), false) => {
            if trials.is_some() {
                bail!("--trials only applies to --fuzz-bounds");
            }
            let states = load_states(&path)?;
            let resolved = Resolved {
                input: Some(path.display().to_string()),
                fuzz_bounds: false,
                trials: None,
            };
            (Outcome::States(report_states(&states)?), resolved, None)
        }
        (None, true) => {
            let trials = positive_usize("trials", trials.unwrap_or(DEFAULT_FUZZ_TRIALS))?;
            let report = search_bound_violations(trials, &mut SeededRng::new(seed))?;
            let resolved = Resolved {
                input: None,
                fuzz_bounds: true,
                trials: Some(trials),
            };
            (Outcome::Bounds(report), resolved, Some(seed))
        }
    };
    Summary::new("metrics", seed_echo, &resolved, outcome).emit(args.summary.as_deref())
}
