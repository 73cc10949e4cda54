//! Causal online non-decimated wavelet (NDWT) and wavelet packet (NWPT)
//! transforms.
//!
//! Every push of a new observation `y_t` emits one coefficient per tree
//! node. Level `l` (1 = finest) filters its parent sequence with taps
//! spaced `2^(l-1)` apart, the last tap landing on the parent value at
//! time `t`:
//!
//! ```text
//! d[l, t] = sum_n g[n] * c[l-1, t - 2^(l-1) * (W - 1 - n)]
//! c[l, t] = sum_n h[n] * c[l-1, t - 2^(l-1) * (W - 1 - n)]
//! ```
//!
//! Packet nodes apply both filters to every parent, each scaled by
//! `sqrt(2)`. A parent index `<= 0` is read as that node's first
//! coefficient (constant-end extension), so no emitted value is ever
//! revised.

mod batch;
mod haar;
mod invertibility;
mod ring;

pub use batch::{batch_dwt, Pyramid};
pub use haar::{haar_threshold_denoise, HaarDenoiser};
pub use invertibility::{banded_transform_matrix, online_invertibility_report, InvertibilityReport};

use std::f64::consts::SQRT_2;
use std::fmt;

use crate::error::{Error, Result};
use crate::filterbank::FilterPair;
use ring::Ring;

/// Default cap on the number of buffered coefficients held by one state.
pub const DEFAULT_BUFFER_BUDGET: usize = 1 << 26;

/// Maximum supported decomposition depth.
pub const MAX_LEVELS: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Ndwt,
    Nwpt,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Ndwt => "ndwt",
            Mode::Nwpt => "nwpt",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ndwt" => Ok(Mode::Ndwt),
            "nwpt" => Ok(Mode::Nwpt),
            other => Err(Error::InvalidArgument(format!(
                "unknown transform mode '{other}' (expected ndwt or nwpt)"
            ))),
        }
    }
}

/// Identifies one emitted coefficient sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeId {
    Detail { level: usize },
    Smooth { level: usize },
    Packet { level: usize, index: usize },
}

impl NodeId {
    pub fn level(&self) -> usize {
        match *self {
            NodeId::Detail { level } | NodeId::Smooth { level } | NodeId::Packet { level, .. } => {
                level
            }
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            NodeId::Detail { .. } => "detail",
            NodeId::Smooth { .. } => "smooth",
            NodeId::Packet { .. } => "packet",
        }
    }

    pub fn packet(&self) -> Option<usize> {
        match *self {
            NodeId::Packet { index, .. } => Some(index),
            _ => None,
        }
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            NodeId::Detail { level } => write!(f, "L{level}.detail"),
            NodeId::Smooth { level } => write!(f, "L{level}.smooth"),
            NodeId::Packet { level, index } => write!(f, "L{level}.p{index}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransformConfig {
    filter: FilterPair,
    levels: usize,
    mode: Mode,
    budget: usize,
}

impl TransformConfig {
    pub fn new(filter: FilterPair, levels: usize, mode: Mode) -> Result<Self> {
        Self::with_budget(filter, levels, mode, DEFAULT_BUFFER_BUDGET)
    }

    /// Like [`TransformConfig::new`] but refuses configurations whose ring
    /// buffers would hold more than `budget` coefficients in total.
    pub fn with_budget(filter: FilterPair, levels: usize, mode: Mode, budget: usize) -> Result<Self> {
        if levels == 0 || levels > MAX_LEVELS {
            return Err(Error::InvalidArgument(format!(
                "levels must be in 1..={MAX_LEVELS}, got {levels}"
            )));
        }
        let config = TransformConfig {
            filter,
            levels,
            mode,
            budget,
        };
        let required = config.buffer_requirement();
        if required > budget {
            return Err(Error::BudgetExceeded { required, budget });
        }
        Ok(config)
    }

    pub fn filter(&self) -> &FilterPair {
        &self.filter
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    /// Parent-history length read by the level-`level` filter.
    pub fn lookback(&self, level: usize) -> usize {
        (self.filter.width() - 1) << (level - 1)
    }

    /// Number of leading time indices whose coefficients may depend on the
    /// boundary extension. From `t = burn_in() + 1` on, every coefficient
    /// is a plain causal convolution of observed data.
    pub fn burn_in(&self) -> usize {
        (self.filter.width() - 1) * ((1usize << self.levels) - 1)
    }

    /// Total ring-buffer capacity, in coefficients, of a state built from
    /// this configuration.
    pub fn buffer_requirement(&self) -> usize {
        node_capacities(self).iter().sum()
    }

    /// Emitted sequences in frame order.
    pub fn nodes(&self) -> Vec<NodeId> {
        match self.mode {
            Mode::Ndwt => (1..=self.levels)
                .flat_map(|level| [NodeId::Detail { level }, NodeId::Smooth { level }])
                .collect(),
            Mode::Nwpt => (1..=self.levels)
                .flat_map(|level| (0..1usize << level).map(move |index| NodeId::Packet { level, index }))
                .collect(),
        }
    }

    pub fn node_count(&self) -> usize {
        match self.mode {
            Mode::Ndwt => 2 * self.levels,
            Mode::Nwpt => (1usize << (self.levels + 1)) - 2,
        }
    }
}

// Buffered tree nodes: input plus the smooth chain for NDWT, the full
// packet tree (heap order) for NWPT. A node at level m feeds the level
// m+1 filter and keeps (W-1)*2^m + 1 values; leaves keep one.
fn node_capacities(config: &TransformConfig) -> Vec<usize> {
    let cap = |m: usize| {
        if m < config.levels {
            ((config.filter.width() - 1) << m) + 1
        } else {
            1
        }
    };
    match config.mode {
        Mode::Ndwt => (0..=config.levels).map(cap).collect(),
        Mode::Nwpt => (0..=config.levels)
            .flat_map(|m| std::iter::repeat_n(cap(m), 1 << m))
            .collect(),
    }
}

/// Every coefficient emitted at one time index.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientFrame {
    t: usize,
    mode: Mode,
    values: Vec<f64>,
}

impl CoefficientFrame {
    /// One-based time index.
    pub fn t(&self) -> usize {
        self.t
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Values in [`TransformConfig::nodes`] order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn detail(&self, level: usize) -> Option<f64> {
        match self.mode {
            Mode::Ndwt if level >= 1 => self.values.get(2 * (level - 1)).copied(),
            _ => None,
        }
    }

    pub fn smooth(&self, level: usize) -> Option<f64> {
        match self.mode {
            Mode::Ndwt if level >= 1 => self.values.get(2 * (level - 1) + 1).copied(),
            _ => None,
        }
    }

    pub fn packet(&self, level: usize, index: usize) -> Option<f64> {
        match self.mode {
            Mode::Nwpt if level >= 1 && index < (1 << level) => {
                self.values.get((1 << level) - 2 + index).copied()
            }
            _ => None,
        }
    }
}

/// Single-pass transform state. Pushes are strictly sequential.
#[derive(Debug, Clone)]
pub struct TransformState {
    config: TransformConfig,
    t: usize,
    nodes: Vec<Node>,
}

#[derive(Debug, Clone)]
struct Node {
    ring: Ring,
    first: f64,
}

impl Node {
    // Value at time `t - lag` given the node currently holds time `t`.
    #[inline]
    fn at(&self, t: usize, lag: usize) -> f64 {
        if lag >= t {
            self.first
        } else {
            self.ring.get(lag)
        }
    }

    fn record(&mut self, t: usize, value: f64) {
        if t == 1 {
            self.first = value;
        }
        self.ring.push(value);
    }
}

impl TransformState {
    pub fn new(config: TransformConfig) -> Self {
        let nodes = node_capacities(&config)
            .into_iter()
            .map(|cap| Node {
                ring: Ring::new(cap),
                first: 0.0,
            })
            .collect();
        TransformState { config, t: 0, nodes }
    }

    pub fn config(&self) -> &TransformConfig {
        &self.config
    }

    /// Number of observations pushed so far.
    pub fn t(&self) -> usize {
        self.t
    }

    /// Consumes `y` and emits the coefficients at the new time index.
    /// A non-finite `y` is rejected and leaves the state untouched.
    pub fn push(&mut self, y: f64) -> Result<CoefficientFrame> {
        if !y.is_finite() {
            return Err(Error::NonFinite {
                index: self.t,
                value: y,
            });
        }
        self.t += 1;
        let t = self.t;
        self.nodes[0].record(t, y);
        let mut values = Vec::with_capacity(self.config.node_count());
        match self.config.mode {
            Mode::Ndwt => self.step_ndwt(t, &mut values),
            Mode::Nwpt => self.step_nwpt(t, &mut values),
        }
        Ok(CoefficientFrame {
            t,
            mode: self.config.mode,
            values,
        })
    }

    pub fn push_block(&mut self, ys: &[f64]) -> Result<Vec<CoefficientFrame>> {
        ys.iter().map(|&y| self.push(y)).collect()
    }

    fn step_ndwt(&mut self, t: usize, out: &mut Vec<f64>) {
        let h = self.config.filter.low_pass();
        let g = self.config.filter.high_pass();
        let w = h.len();
        for level in 1..=self.config.levels {
            let spacing = 1usize << (level - 1);
            let parent = &self.nodes[level - 1];
            let (mut d, mut c) = (0.0, 0.0);
            for n in 0..w {
                let x = parent.at(t, spacing * (w - 1 - n));
                d += g[n] * x;
                c += h[n] * x;
            }
            out.push(d);
            out.push(c);
            self.nodes[level].record(t, c);
        }
    }

    fn step_nwpt(&mut self, t: usize, out: &mut Vec<f64>) {
        let h = self.config.filter.low_pass();
        let g = self.config.filter.high_pass();
        let w = h.len();
        for level in 1..=self.config.levels {
            let spacing = 1usize << (level - 1);
            let parent_base = (1usize << (level - 1)) - 1;
            let child_base = (1usize << level) - 1;
            for l in 0..1usize << (level - 1) {
                let parent = &self.nodes[parent_base + l];
                let (mut even, mut odd) = (0.0, 0.0);
                for n in 0..w {
                    let x = parent.at(t, spacing * (w - 1 - n));
                    even += h[n] * x;
                    odd += g[n] * x;
                }
                let (even, odd) = (SQRT_2 * even, SQRT_2 * odd);
                out.push(even);
                out.push(odd);
                self.nodes[child_base + 2 * l].record(t, even);
                self.nodes[child_base + 2 * l + 1].record(t, odd);
            }
        }
    }
}

/// Pushes one observation through an NDWT state.
pub fn ndwt_push(state: &mut TransformState, y: f64) -> Result<CoefficientFrame> {
    if state.config.mode != Mode::Ndwt {
        return Err(Error::WrongMode { expected: "ndwt" });
    }
    state.push(y)
}

/// Pushes one observation through an NWPT state.
pub fn nwpt_push(state: &mut TransformState, y: f64) -> Result<CoefficientFrame> {
    if state.config.mode != Mode::Nwpt {
        return Err(Error::WrongMode { expected: "nwpt" });
    }
    state.push(y)
}

/// Column view of a whole transformed series.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSeries {
    pub nodes: Vec<NodeId>,
    /// `columns[i][t - 1]` is node `i` at time `t`.
    pub columns: Vec<Vec<f64>>,
}

impl CoefficientSeries {
    pub fn len(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn column(&self, node: NodeId) -> Option<&[f64]> {
        self.nodes
            .iter()
            .position(|&n| n == node)
            .map(|i| self.columns[i].as_slice())
    }
}

/// Streams `series` through a fresh state and collects every node.
pub fn transform_series(config: &TransformConfig, series: &[f64]) -> Result<CoefficientSeries> {
    crate::error::ensure_finite(series)?;
    let nodes = config.nodes();
    let mut columns = vec![Vec::with_capacity(series.len()); nodes.len()];
    let mut state = TransformState::new(config.clone());
    for &y in series {
        let frame = state.push(y)?;
        for (col, v) in columns.iter_mut().zip(frame.values()) {
            col.push(*v);
        }
    }
    Ok(CoefficientSeries { nodes, columns })
}

#[cfg(test)]
mod tests;
