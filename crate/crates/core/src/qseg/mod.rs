//! Max-cut segmentation: the pixel lattice becomes a weighted graph, the
//! max-cut is posed as a QUBO and handed to a sampler, and the returned
//! bipartition is decoded into a crack mask.

mod anneal;
mod external;
mod graph;

pub use anneal::{
    anneal, AnnealSchedule, SampleResult, DEFAULT_RESTARTS, DEFAULT_SWEEPS, DEFAULT_T_FINAL,
};
pub use external::{accept_response, sample_external, Endpoint, SamplerRequest, SamplerResponse};
pub use graph::{
    build_grid_graph, build_grid_graph_with, maxcut_qubo, maxcut_to_qubo, GridGraph, QuboModel,
    WeightOffset,
};

use crate::error::{Error, Result};
use crate::patch::{BinaryMask, GrayPatch};

/// Anything that can minimize a QUBO.
pub trait Sampler {
    fn sample(&self, q: &QuboModel) -> Result<SampleResult>;

    /// Short label for reports.
    fn name(&self) -> String;
}

/// Local simulated annealing with the default schedule scaled to each model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalAnnealer {
    pub seed: u64,
    pub sweeps: usize,
    pub restarts: usize,
    /// Overrides the model-scaled `(t_initial, t_final)`.
    pub temperatures: Option<(f64, f64)>,
}

impl LocalAnnealer {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            sweeps: DEFAULT_SWEEPS,
            restarts: DEFAULT_RESTARTS,
            temperatures: None,
        }
    }

    pub fn schedule_for(&self, q: &QuboModel) -> AnnealSchedule {
        let base = AnnealSchedule::for_model(q, self.seed);
        let (t_initial, t_final) = self.temperatures.unwrap_or((base.t_initial, base.t_final));
        AnnealSchedule {
            sweeps: self.sweeps,
            restarts: self.restarts,
            t_initial,
            t_final,
            seed: self.seed,
        }
    }
}

impl Sampler for LocalAnnealer {
    fn sample(&self, q: &QuboModel) -> Result<SampleResult> {
        anneal(q, &self.schedule_for(q))
    }

    fn name(&self) -> String {
        "sa".into()
    }
}

impl Sampler for Endpoint {
    fn sample(&self, q: &QuboModel) -> Result<SampleResult> {
        sample_external(q, self)
    }

    fn name(&self) -> String {
        match self {
            Endpoint::Command(_) => "cmd".into(),
            Endpoint::Http(_) => "http".into(),
        }
    }
}

/// Labels the darker side of the cut as crack.
///
/// Ties in mean intensity go to the smaller side; a full tie goes to the
/// side not containing pixel 0. An uncut assignment gives an empty mask.
pub fn decode_mask(r: &SampleResult, p: &GrayPatch) -> Result<BinaryMask> {
    if r.assignment.len() != p.len() {
        return Err(Error::LengthMismatch {
            expected: p.len(),
            got: r.assignment.len(),
        });
    }
    let (mut n1, mut s1, mut s0) = (0usize, 0.0, 0.0);
    for (&x, &v) in r.assignment.iter().zip(p.data()) {
        if x {
            n1 += 1;
            s1 += v;
        } else {
            s0 += v;
        }
    }
    let n0 = p.len() - n1;
    if n0 == 0 || n1 == 0 {
        return Ok(BinaryMask::empty(p.width(), p.height()));
    }
    let (m1, m0) = (s1 / n1 as f64, s0 / n0 as f64);
    let crack_is_one = if m1 != m0 {
        m1 < m0
    } else if n1 != n0 {
        n1 < n0
    } else {
        !r.assignment[0]
    };
    BinaryMask::new(
        p.width(),
        p.height(),
        r.assignment.iter().map(|&x| x == crack_is_one).collect(),
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QsegConfig {
    pub offset: WeightOffset,
    pub annealer: LocalAnnealer,
}

impl QsegConfig {
    pub fn new(seed: u64) -> Self {
        Self {
            offset: WeightOffset::Mean,
            annealer: LocalAnnealer::new(seed),
        }
    }
}

pub fn segment_qseg_with(
    p: &GrayPatch,
    offset: WeightOffset,
    sampler: &dyn Sampler,
) -> Result<BinaryMask> {
    let q = maxcut_to_qubo(&build_grid_graph_with(p, offset));
    let r = sampler.sample(&q)?;
    decode_mask(&r, p)
}

pub fn segment_qseg(p: &GrayPatch, cfg: &QsegConfig) -> Result<BinaryMask> {
    segment_qseg_with(p, cfg.offset, &cfg.annealer)
}
