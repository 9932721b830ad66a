//! Rectangular grid topologies.

use crate::error::{Error, Result};
use crate::graph::{Graph, LinkId, NodeId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    /// Joins `(row, col)` and `(row, col + 1)`.
    Horizontal { row: usize, col: usize },
    /// Joins `(row, col)` and `(row + 1, col)`.
    Vertical { row: usize, col: usize },
}

/// A `rows × cols` grid. Node `(r, c)` has id `r·cols + c`. All horizontal
/// links come first in row-major order, then all vertical links in
/// row-major order.
#[derive(Clone, Debug)]
pub struct Grid {
    pub rows: usize,
    pub cols: usize,
    pub graph: Graph,
    orientation: Vec<Orientation>,
}

impl Grid {
    pub fn node(&self, row: usize, col: usize) -> NodeId {
        row * self.cols + col
    }

    pub fn orientation(&self, link: LinkId) -> Orientation {
        self.orientation[link]
    }
}

pub fn build_grid(rows: usize, cols: usize) -> Result<Grid> {
    if rows < 2 || cols < 2 {
        return Err(Error::domain(format!("grid dimensions must be at least 2x2, got {rows}x{cols}")));
    }
    let mut graph = Graph::new(rows * cols)?;
    let mut orientation = Vec::with_capacity(rows * (cols - 1) + cols * (rows - 1));
    for row in 0..rows {
        for col in 0..cols - 1 {
            graph.add_link(row * cols + col, row * cols + col + 1)?;
            orientation.push(Orientation::Horizontal { row, col });
        }
    }
    for row in 0..rows - 1 {
        for col in 0..cols {
            graph.add_link(row * cols + col, (row + 1) * cols + col)?;
            orientation.push(Orientation::Vertical { row, col });
        }
    }
    Ok(Grid { rows, cols, graph, orientation })
}
