use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::patch::GrayPatch;
use crate::qi::lattice_pairs;

/// Offset subtracted from the squared intensity differences.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum WeightOffset {
    /// Subtract the mean raw weight, so similar edges turn negative.
    #[default]
    Mean,
    Fixed(f64),
}

/// Pixel-lattice graph with signed edge weights.
#[derive(Debug, Clone, PartialEq)]
pub struct GridGraph {
    width: usize,
    height: usize,
    /// `(i, j, w)` with `i < j`, 4-neighbour pairs only.
    edges: Vec<(usize, usize, f64)>,
}

impl GridGraph {
    pub fn n_nodes(&self) -> usize {
        self.width * self.height
    }

    pub fn lattice_dims(&self) -> (usize, usize) {
        (self.height, self.width)
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    /// Total weight of edges whose endpoints differ in `x`.
    pub fn cut(&self, x: &[bool]) -> f64 {
        self.edges
            .iter()
            .filter(|&&(i, j, _)| x[i] != x[j])
            .map(|&(_, _, w)| w)
            .sum()
    }
}

/// Squared-difference grid graph, mean-centered.
pub fn build_grid_graph(p: &GrayPatch) -> GridGraph {
    build_grid_graph_with(p, WeightOffset::Mean)
}

pub fn build_grid_graph_with(p: &GrayPatch, offset: WeightOffset) -> GridGraph {
    let a = p.data();
    let raw: Vec<(usize, usize, f64)> = lattice_pairs(p.width(), p.height())
        .map(|(i, j)| (i, j, (a[i] - a[j]) * (a[i] - a[j])))
        .collect();
    let shift = match offset {
        WeightOffset::Mean if raw.is_empty() => 0.0,
        WeightOffset::Mean => raw.iter().map(|e| e.2).sum::<f64>() / raw.len() as f64,
        WeightOffset::Fixed(c) => c,
    };
    GridGraph {
        width: p.width(),
        height: p.height(),
        edges: raw.into_iter().map(|(i, j, d)| (i, j, d - shift)).collect(),
    }
}

/// Upper-triangular QUBO: `E(x) = Σ linear_i x_i + Σ_{i<j} quadratic_ij x_i x_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuboModel {
    linear: Vec<f64>,
    quadratic: BTreeMap<(usize, usize), f64>,
}

impl QuboModel {
    /// Duplicate `(i, j)` keys accumulate; `(j, i)` is folded onto `(i, j)`.
    pub fn new(
        linear: Vec<f64>,
        quadratic: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self> {
        let n = linear.len();
        let mut q = BTreeMap::new();
        for (i, j, v) in quadratic {
            if i == j || i >= n || j >= n {
                return Err(Error::InvalidConfig(format!(
                    "invalid quadratic term ({i}, {j}) for {n} variables"
                )));
            }
            *q.entry((i.min(j), i.max(j))).or_insert(0.0) += v;
        }
        Ok(Self {
            linear,
            quadratic: q,
        })
    }

    pub fn n_vars(&self) -> usize {
        self.linear.len()
    }

    pub fn linear(&self) -> &[f64] {
        &self.linear
    }

    pub fn quadratic(&self) -> &BTreeMap<(usize, usize), f64> {
        &self.quadratic
    }

    pub fn energy(&self, x: &[bool]) -> f64 {
        assert_eq!(
            x.len(),
            self.n_vars(),
            "assignment length must match n_vars"
        );
        let lin: f64 = self
            .linear
            .iter()
            .zip(x)
            .filter(|(_, &b)| b)
            .map(|(c, _)| c)
            .sum();
        let quad: f64 = self
            .quadratic
            .iter()
            .filter(|(&(i, j), _)| x[i] && x[j])
            .map(|(_, c)| c)
            .sum();
        lin + quad
    }

    pub fn max_abs_quadratic(&self) -> f64 {
        self.quadratic.values().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Max-cut as minimization: `E(x) = -Σ w_ij (x_i + x_j - 2 x_i x_j) = -cut(x)`.
pub fn maxcut_to_qubo(g: &GridGraph) -> QuboModel {
    maxcut_qubo(g.n_nodes(), &g.edges).expect("lattice edges are valid upper-triangular pairs")
}

/// The max-cut QUBO of an arbitrary weighted edge list over `n` nodes.
pub fn maxcut_qubo(n: usize, edges: &[(usize, usize, f64)]) -> Result<QuboModel> {
    let mut linear = vec![0.0; n];
    for &(i, j, w) in edges {
        if i >= n || j >= n {
            return Err(Error::InvalidConfig(format!(
                "edge ({i}, {j}) out of range for {n} nodes"
            )));
        }
        linear[i] -= w;
        linear[j] -= w;
    }
    QuboModel::new(linear, edges.iter().map(|&(i, j, w)| (i, j, 2.0 * w)))
}
