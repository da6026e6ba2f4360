//! Moving a derivation along another one by iterated conflux.
//!
//! Grid node `(i, j)` is the graph reached after `i` steps of `d` and `j`
//! steps of `d̄`. `vertical[i][j]` is step `i` of `d` transported to column
//! `j`, `horizontal[i][j]` is step `j` of `d̄` transported to row `i`. Every
//! transported step reuses the created ids of the step it came from, so
//! both ways around a cell end in the same graph value.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::derivation::Derivation;
use crate::error::{Error, Result};
use crate::independence::{conflux, parallel_independent};
use crate::step::DerivationStep;

/// Every cell of a move grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grid {
    /// `rows x (cols + 1)`
    pub vertical: Vec<Vec<DerivationStep>>,
    /// `(rows + 1) x cols`
    pub horizontal: Vec<Vec<DerivationStep>>,
}

impl Grid {
    pub fn rows(&self) -> usize {
        self.vertical.len()
    }

    pub fn cols(&self) -> usize {
        self.horizontal.first().map_or(0, Vec::len)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MovedPair {
    /// `d` transported to start at the end of `d̄`.
    pub moved: Derivation,
    /// `d̄` transported to start at the end of `d`.
    pub co_moved: Derivation,
    pub grid: Grid,
}

/// Row-major cell order: step 0 of `d` across all of `d̄`, then step 1, ...
pub fn row_major(rows: usize, cols: usize) -> Vec<(usize, usize)> {
    (0..rows).flat_map(|i| (0..cols).map(move |j| (i, j))).collect()
}

/// `move(d, d̄)` with row-major evaluation.
pub fn move_forward(d: &Derivation, d_bar: &Derivation) -> Result<MovedPair> {
    move_forward_in_order(d, d_bar, &row_major(d.len(), d_bar.len()))
}

/// `move(d, d̄)` evaluating cells in `order`, which must list every cell
/// once and each cell after its upper and left neighbours.
pub fn move_forward_in_order(
    d: &Derivation,
    d_bar: &Derivation,
    order: &[(usize, usize)],
) -> Result<MovedPair> {
    if d.start() != d_bar.start() {
        return Err(Error::DifferentStart);
    }
    let (n, m) = (d.len(), d_bar.len());
    if order.len() != n * m {
        return Err(Error::InvalidOrder(format!(
            "{} cells listed, grid has {}",
            order.len(),
            n * m
        )));
    }
    let mut vertical: Vec<Vec<Option<DerivationStep>>> = vec![vec![None; m + 1]; n];
    let mut horizontal: Vec<Vec<Option<DerivationStep>>> = vec![vec![None; m]; n + 1];
    for (i, s) in d.steps().iter().enumerate() {
        vertical[i][0] = Some(s.clone());
    }
    for (j, s) in d_bar.steps().iter().enumerate() {
        horizontal[0][j] = Some(s.clone());
    }
    let mut done = vec![vec![false; m]; n];
    for &(i, j) in order {
        if i >= n || j >= m || done[i][j] {
            return Err(Error::InvalidOrder(format!("cell ({i}, {j}) is out of range or repeated")));
        }
        let (Some(s1), Some(s2)) = (&vertical[i][j], &horizontal[i][j]) else {
            return Err(Error::InvalidOrder(format!(
                "cell ({i}, {j}) comes before a neighbour it depends on"
            )));
        };
        let cell = |first: &DerivationStep, second: &DerivationStep| Error::GridCell {
            row: i,
            col: j,
            first: first.rule().name().into(),
            second: second.rule().name().into(),
        };
        let w = parallel_independent(s1, s2)?.ok_or_else(|| cell(s1, s2))?;
        let c = conflux(s1, s2, &w)?;
        if c.after_first.output() != c.after_second.output() {
            return Err(Error::NotConfluent);
        }
        horizontal[i + 1][j] = Some(c.after_first);
        vertical[i][j + 1] = Some(c.after_second);
        done[i][j] = true;
    }
    let vertical: Vec<Vec<DerivationStep>> = vertical
        .into_iter()
        .map(|row| row.into_iter().map(|s| s.expect("every cell evaluated")).collect())
        .collect();
    let horizontal: Vec<Vec<DerivationStep>> = horizontal
        .into_iter()
        .map(|row| row.into_iter().map(|s| s.expect("every cell evaluated")).collect())
        .collect();
    let moved = Derivation::new(
        d_bar.end().clone(),
        vertical.iter().map(|col| col[m].clone()).collect(),
    )?;
    let co_moved = Derivation::new(d.end().clone(), horizontal[n].clone())?;
    Ok(MovedPair {
        moved,
        co_moved,
        grid: Grid {
            vertical,
            horizontal,
        },
    })
}

/// Backward moving: `d'` transported from the end of `d̄` to its start.
pub fn evom(d_prime: &Derivation, d_bar: &Derivation) -> Result<Derivation> {
    if d_bar.end() != d_prime.start() {
        return Err(Error::NotComposable { index: d_bar.len() });
    }
    Ok(move_forward(d_prime, &d_bar.inverse())?.moved)
}
