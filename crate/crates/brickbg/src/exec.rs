//! Multi-threaded cell execution.

use brickbg_core::pipeline::{Cell, CellExecutor};
use rayon::prelude::*;

/// Spreads per-cell work over the rayon thread pool. Results keep cell order,
/// so output matches [`brickbg_core::Sequential`] exactly.
#[derive(Debug, Clone, Copy, Default)]
pub struct Parallel;

impl CellExecutor for Parallel {
    fn map_index<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..n).into_par_iter().map(f).collect()
    }

    fn map_cells<T, F>(&self, cells: &mut [Cell], f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize, &mut Cell) -> T + Sync + Send,
    {
        cells.par_iter_mut().enumerate().map(|(i, c)| f(i, c)).collect()
    }
}
