use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest number of cells accepted for a radial grid.
pub const MIN_CELLS: usize = 16;

/// Uniform grid `x_i = i / n_cells`, `i = 0..=n_cells`, on the computational
/// interval `[0, 1]`. `x = 0` is the centre of the ball, `x = 1` the boundary.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RadialGrid {
    n_cells: usize,
}

impl RadialGrid {
    pub fn new(n_cells: usize) -> Result<Self> {
        if n_cells < MIN_CELLS {
            return Err(Error::invalid(format!(
                "n_cells = {n_cells} is below the minimum of {MIN_CELLS}"
            )));
        }
        Ok(Self { n_cells })
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn n_nodes(&self) -> usize {
        self.n_cells + 1
    }

    pub fn dx(&self) -> f64 {
        1.0 / self.n_cells as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        i as f64 / self.n_cells as f64
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.n_cells).map(move |i| self.x(i))
    }

    pub(crate) fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n_nodes() {
            return Err(Error::GridMismatch {
                expected: self.n_nodes(),
                found: len,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodes_are_uniform_and_span_unit_interval() {
        let g = RadialGrid::new(32).unwrap();
        let xs: Vec<f64> = g.nodes().collect();
        assert_eq!(xs.len(), 33);
        assert_eq!(xs[0], 0.0);
        assert_eq!(xs[32], 1.0);
        for w in xs.windows(2) {
            assert!(w[1] > w[0]);
            assert!((w[1] - w[0] - g.dx()).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_coarse_grids() {
        assert!(RadialGrid::new(15).is_err());
        assert!(RadialGrid::new(16).is_ok());
    }
}
