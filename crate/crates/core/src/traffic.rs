//! Bernoulli arrivals, queue evolution and load-direction presets.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, QueueVector};
use crate::grid::{Grid, Orientation};

/// Per-link arrival probability per slot; at most one packet arrives on a
/// link in a slot.
#[derive(Clone, Debug, PartialEq)]
pub struct ArrivalProcess {
    rates: Vec<f64>,
}

impl ArrivalProcess {
    pub fn new(rates: Vec<f64>) -> Result<Self> {
        if let Some(l) = rates.iter().position(|r| !(0.0..=1.0).contains(r)) {
            return Err(Error::domain(format!("arrival rate {} on link {l} is outside [0, 1]", rates[l])));
        }
        Ok(Self { rates })
    }

    pub fn uniform(link_count: usize, rate: f64) -> Result<Self> {
        Self::new(vec![rate; link_count])
    }

    pub fn rates(&self) -> &[f64] {
        &self.rates
    }
}

pub fn sample_arrivals<R: Rng + ?Sized>(process: &ArrivalProcess, rng: &mut R) -> Vec<u64> {
    process.rates.iter().map(|&r| rng.gen_bool(r) as u64).collect()
}

/// `q' = q + arrivals − active`.
pub fn step_queues(q: &QueueVector, arrivals: &[u64], active: &[bool]) -> Result<QueueVector> {
    for len in [arrivals.len(), active.len()] {
        if len != q.len() {
            return Err(Error::LengthMismatch { expected: q.len(), actual: len });
        }
    }
    let next = q
        .as_slice()
        .iter()
        .zip(arrivals)
        .zip(active)
        .enumerate()
        .map(|(link, ((&x, &a), &s))| (x + a).checked_sub(s as u64).ok_or(Error::NegativeQueue { link }))
        .collect::<Result<Vec<_>>>()?;
    Ok(QueueVector::new(next))
}

/// Heavy horizontal links: columns `(0,1), (2,3), …` in every row, so no
/// node touches more than one heavy link.
pub fn heavy_links(grid: &Grid) -> Vec<bool> {
    (0..grid.graph.link_count())
        .map(|l| matches!(grid.orientation(l), Orientation::Horizontal { col, .. } if col % 2 == 0 && col + 1 < grid.cols))
        .collect()
}

/// Rates `heavy·λ` on heavy horizontal links, `light·λ` on other horizontal
/// links and `vertical·λ` on vertical links.
pub fn grid_load_vector(grid: &Grid, heavy: f64, light: f64, vertical: f64, lambda: f64) -> Result<ArrivalProcess> {
    let heavy_mask = heavy_links(grid);
    let rates: Vec<f64> = (0..grid.graph.link_count())
        .map(|l| match grid.orientation(l) {
            Orientation::Horizontal { .. } if heavy_mask[l] => heavy * lambda,
            Orientation::Horizontal { .. } => light * lambda,
            Orientation::Vertical { .. } => vertical * lambda,
        })
        .collect();
    ArrivalProcess::new(rates)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LoadPreset {
    /// Heavy 0.7, light horizontal 0.1, vertical 0.1 (grids only).
    Fig5,
    /// Heavy 0.89, light horizontal 0.1, vertical 0.01 (grids only).
    Fig6,
    /// `λ/Δ` on every link, Δ the maximum degree (any graph).
    Uniform,
}

impl LoadPreset {
    /// `(heavy, light horizontal, vertical)` multipliers for grid presets.
    pub fn direction(self) -> Option<(f64, f64, f64)> {
        match self {
            LoadPreset::Fig5 => Some((0.7, 0.1, 0.1)),
            LoadPreset::Fig6 => Some((0.89, 0.1, 0.01)),
            LoadPreset::Uniform => None,
        }
    }

    pub fn arrivals(self, graph: &Graph, grid: Option<&Grid>, lambda: f64) -> Result<ArrivalProcess> {
        match (self.direction(), grid) {
            (Some((h, l, v)), Some(grid)) => grid_load_vector(grid, h, l, v, lambda),
            (Some(_), None) => Err(Error::Config(format!("load preset `{self}` needs a grid graph"))),
            (None, _) => {
                let degree = graph.max_degree().max(1) as f64;
                ArrivalProcess::uniform(graph.link_count(), lambda / degree)
            }
        }
    }
}

impl fmt::Display for LoadPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LoadPreset::Fig5 => "fig5",
            LoadPreset::Fig6 => "fig6",
            LoadPreset::Uniform => "uniform",
        })
    }
}

impl FromStr for LoadPreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig5" => Ok(LoadPreset::Fig5),
            "fig6" => Ok(LoadPreset::Fig6),
            "uniform" => Ok(LoadPreset::Uniform),
            other => Err(Error::Config(format!("unknown load preset `{other}` (fig5, fig6, uniform)"))),
        }
    }
}
