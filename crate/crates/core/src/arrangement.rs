//! Cells of an affine hyperplane arrangement, each with an exact sample point.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::Rat;
use crate::polyhedron::{Constraint, Region};

/// Upper bound on the number of cells enumerated before giving up.
pub const DEFAULT_MAX_CELLS: usize = 1_000_000;

pub fn max_cells() -> usize {
    std::env::var("CCC_MAX_CELLS")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_CELLS)
}

/// The affine hyperplane `normal · x = rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hyperplane {
    pub normal: Vec<Rat>,
    pub rhs: Rat,
}

impl Hyperplane {
    pub fn new(normal: Vec<Rat>, rhs: Rat) -> Self {
        Hyperplane { normal, rhs }
    }

    pub fn linear(normal: Vec<Rat>) -> Self {
        Hyperplane { normal, rhs: Rat::zero() }
    }

    /// Scales so the first nonzero coefficient is 1. `None` for a zero normal.
    fn canonical(&self) -> Option<Hyperplane> {
        let lead = self.normal.iter().find(|x| !x.is_zero())?.clone();
        if lead.is_one() {
            return Some(self.clone());
        }
        let s = lead.recip();
        Some(Hyperplane {
            normal: self.normal.iter().map(|x| x * &s).collect(),
            rhs: &self.rhs * &s,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellMode {
    /// Every face of the arrangement: each hyperplane contributes `=`, `>`, `<`.
    AllFaces,
    /// Only the open chambers.
    Chambers,
}

#[derive(Clone, Debug)]
pub struct Cell {
    pub region: Region,
    pub sample: Vec<Rat>,
}

/// Removes zero and repeated hyperplanes.
pub fn dedupe(hyperplanes: &[Hyperplane]) -> Vec<Hyperplane> {
    let mut out: Vec<Hyperplane> = hyperplanes.iter().filter_map(Hyperplane::canonical).collect();
    out.sort();
    out.dedup();
    out
}

/// Enumerates the nonempty cells of `base` cut by the hyperplanes.
pub fn cells(base: &Region, hyperplanes: &[Hyperplane], mode: CellMode) -> Result<Vec<Cell>> {
    cells_with_limit(base, hyperplanes, mode, max_cells())
}

pub fn cells_with_limit(
    base: &Region,
    hyperplanes: &[Hyperplane],
    mode: CellMode,
    limit: usize,
) -> Result<Vec<Cell>> {
    let hs = dedupe(hyperplanes);
    let Some(sample) = base.sample() else {
        return Ok(Vec::new());
    };
    let mut frontier = vec![Cell { region: base.clone(), sample }];
    for h in &hs {
        let mut next = Vec::with_capacity(frontier.len() * 2);
        for cell in frontier {
            let neg: Vec<Rat> = h.normal.iter().map(|x| -x).collect();
            let mut pieces = vec![
                Constraint::gt(h.normal.clone(), h.rhs.clone()),
                Constraint::gt(neg, -h.rhs.clone()),
            ];
            if mode == CellMode::AllFaces {
                pieces.push(Constraint::eq(h.normal.clone(), h.rhs.clone()));
            }
            for c in pieces {
                // The current sample already decides one branch.
                let region = cell.region.with(c.clone());
                if c.holds(&cell.sample) {
                    next.push(Cell { region, sample: cell.sample.clone() });
                } else if let Some(s) = region.sample() {
                    next.push(Cell { region, sample: s });
                }
            }
            if next.len() > limit {
                return Err(Error::CellLimitExceeded { limit });
            }
        }
        frontier = next;
    }
    Ok(frontier)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, rat_vec};

    fn lin(n: &[i64]) -> Hyperplane {
        Hyperplane::linear(rat_vec(n))
    }

    #[test]
    fn two_lines_in_the_plane() {
        let cs = cells(&Region::whole(2), &[lin(&[1, 0]), lin(&[0, 1])], CellMode::AllFaces).unwrap();
        // origin, four half-axes, four quadrants
        assert_eq!(cs.len(), 9);
        for c in &cs {
            assert!(c.region.contains(&c.sample));
        }
        let ch = cells(&Region::whole(2), &[lin(&[1, 0]), lin(&[0, 1]), lin(&[2, 0])], CellMode::Chambers).unwrap();
        assert_eq!(ch.len(), 4);
    }

    #[test]
    fn affine_points_on_a_line() {
        let hs = [Hyperplane::new(rat_vec(&[1]), rat(0)), Hyperplane::new(rat_vec(&[1]), rat(1))];
        let cs = cells(&Region::whole(1), &hs, CellMode::AllFaces).unwrap();
        assert_eq!(cs.len(), 5);
    }

    #[test]
    fn cell_budget_is_enforced() {
        let hs: Vec<Hyperplane> = (0..6).map(|i| Hyperplane::new(rat_vec(&[1]), rat(i))).collect();
        let err = cells_with_limit(&Region::whole(1), &hs, CellMode::AllFaces, 5).unwrap_err();
        assert_eq!(err, Error::CellLimitExceeded { limit: 5 });
    }
}
