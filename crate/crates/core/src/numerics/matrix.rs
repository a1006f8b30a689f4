use num_traits::{One, Signed, Zero};

use super::rational::Rational;
use crate::error::{Error, Result};

/// Dense symmetric matrix over the rationals, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricMatrix {
    n: usize,
    entries: Vec<Rational>,
}

impl SymmetricMatrix {
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("matrix rows must all have length n".into()));
        }
        let entries: Vec<Rational> = rows.into_iter().flatten().collect();
        for i in 0..n {
            for j in 0..i {
                if entries[i * n + j] != entries[j * n + i] {
                    return Err(Error::InvalidInput(format!("entry ({i},{j}) breaks symmetry")));
                }
            }
        }
        Ok(Self { n, entries })
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![Rational::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = Rational::one();
        }
        Self { n, entries }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.n + j]
    }

    /// Sets both `(i,j)` and `(j,i)`.
    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        self.entries[i * self.n + j] = value.clone();
        self.entries[j * self.n + i] = value;
    }

    pub fn has_unit_diagonal(&self) -> bool {
        (0..self.n).all(|i| self.get(i, i).is_one())
    }

    fn rank(&self) -> usize {
        let n = self.n;
        let mut rows: Vec<Vec<Rational>> = (0..n).map(|i| self.entries[i * n..(i + 1) * n].to_vec()).collect();
        let mut rank = 0;
        for col in 0..n {
            let Some(pivot) = (rank..n).find(|&r| !rows[r][col].is_zero()) else {
                continue;
            };
            rows.swap(rank, pivot);
            let pivot_row = rows[rank].clone();
            for row in rows.iter_mut().skip(rank + 1) {
                if row[col].is_zero() {
                    continue;
                }
                let factor = &row[col] / &pivot_row[col];
                for (entry, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                    *entry -= &factor * p;
                }
            }
            rank += 1;
        }
        rank
    }
}

/// Outcome of [`exact_psd_rank`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PsdRank {
    pub is_psd: bool,
    pub rank: usize,
}

/// Decides positive semidefiniteness exactly by symmetric elimination with
/// diagonal pivoting, and reports the rank.
pub fn exact_psd_rank(m: &SymmetricMatrix) -> PsdRank {
    let n = m.n;
    let mut a = m.entries.clone();
    let mut active: Vec<usize> = (0..n).collect();
    let mut is_psd = true;
    while !active.is_empty() {
        if active.iter().any(|&i| a[i * n + i].is_negative()) {
            is_psd = false;
            break;
        }
        let Some(pos) = active.iter().position(|&i| a[i * n + i].is_positive()) else {
            // A PSD matrix with zero diagonal is zero.
            let nonzero = active.iter().any(|&i| active.iter().any(|&j| !a[i * n + j].is_zero()));
            is_psd = !nonzero;
            break;
        };
        let p = active.swap_remove(pos);
        let pivot = a[p * n + p].clone();
        let col: Vec<Rational> = active.iter().map(|&i| a[i * n + p].clone()).collect();
        for (ii, &i) in active.iter().enumerate() {
            if col[ii].is_zero() {
                continue;
            }
            let scaled = &col[ii] / &pivot;
            for (jj, &j) in active.iter().enumerate() {
                a[i * n + j] -= &scaled * &col[jj];
            }
        }
    }
    PsdRank { is_psd, rank: m.rank() }
}

/// Extreme points of the 3x3 elliptope: rank one, or rank two with every
/// off-diagonal entry strictly inside `(-1, 1)`.
pub fn extreme_point_e3(m: &SymmetricMatrix) -> Result<bool> {
    if m.dim() != 3 {
        return Err(Error::InvalidInput(format!("expected a 3x3 matrix, got {}x{}", m.dim(), m.dim())));
    }
    if !m.has_unit_diagonal() {
        return Err(Error::NotInElliptope("diagonal is not all ones".into()));
    }
    let PsdRank { is_psd, rank } = exact_psd_rank(m);
    if !is_psd {
        return Err(Error::NotInElliptope("matrix is not positive semidefinite".into()));
    }
    let strictly_inside = [(0, 1), (0, 2), (1, 2)].iter().all(|&(i, j)| m.get(i, j).abs() < Rational::one());
    Ok(rank == 1 || (rank == 2 && strictly_inside))
}
