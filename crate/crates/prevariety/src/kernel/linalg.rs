//! Fraction-free integer linear algebra: reduced echelon forms, ranks,
//! kernel bases and reduction of vectors modulo a row space.
//!
//! The echelon form computed here is canonical for the row space: rows are
//! primitive with positive pivots, pivot columns are eliminated everywhere
//! else, and rows are ordered by pivot column. It is the rational reduced
//! row echelon form with each row scaled to primitive integers, so two row
//! sets span the same subspace exactly when their `Echelon` rows are equal.

use num_bigint::BigInt;


use super::coeff::{normalize_primitive, slice_from_bigint, CalcResult, Coeff};
use super::vec::IntVector;

fn rref_generic<C: Coeff>(
    dim: usize,
    mut rows: Vec<Vec<C>>,
) -> CalcResult<(Vec<Vec<C>>, Vec<usize>)> {
    let mut pivots = Vec::new();
    let mut next = 0usize;
    for col in 0..dim {
        let Some(pick) = (next..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(next, pick);
        normalize_primitive(&mut rows[next]);
        if rows[next][col].is_negative() {
            for v in rows[next].iter_mut() {
                *v = v.neg();
            }
        }
        let pivot_row = rows[next].clone();
        let p = pivot_row[col].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == next || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                *v = p.checked_mul(v)?.checked_sub(&f.checked_mul(pv)?)?;
            }
            normalize_primitive(row);
        }
        pivots.push(col);
        next += 1;
        if next == rows.len() {
            break;
        }
    }
    rows.truncate(next);
    Ok((rows, pivots))
}

/// Eliminate the pivot coordinates of `row` against an echelon basis, using
/// only positive row multiples so that inequality directions survive. The
/// result is not normalized.
fn reduce_generic<C: Coeff>(
    row: &[C],
    basis: &[Vec<C>],
    pivots: &[usize],
) -> CalcResult<Vec<C>> {
    let mut out = row.to_vec();
    for (brow, &p) in basis.iter().zip(pivots) {
        if out[p].is_zero() {
            continue;
        }
        let scale = brow[p].clone();
        debug_assert!(scale.is_positive());
        let f = out[p].clone();
        for (v, bv) in out.iter_mut().zip(brow) {
            *v = scale.checked_mul(v)?.checked_sub(&f.checked_mul(bv)?)?;
        }
    }
    Ok(out)
}

/// A canonical reduced echelon basis for the span of a set of integer rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Echelon {
    dim: usize,
    rows: Vec<IntVector>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(dim: usize, rows: &[IntVector]) -> Echelon {
        if let Some(fast) = rows
            .iter()
            .map(|r| slice_from_bigint::<i128>(r.coords()))
            .collect::<Option<Vec<_>>>()
        {
            if let Ok((rows, pivots)) = rref_generic(dim, fast) {
                return Echelon {
                    dim,
                    rows: rows
                        .into_iter()
                        .map(|r| IntVector::new(r.iter().map(|v| v.to_bigint()).collect()))
                        .collect(),
                    pivots,
                };
            }
        }
        let big: Vec<Vec<BigInt>> = rows.iter().map(|r| r.coords().to_vec()).collect();
        let (rows, pivots) = rref_generic(dim, big).expect("bigint arithmetic cannot overflow");
        Echelon {
            dim,
            rows: rows.into_iter().map(IntVector::new).collect(),
            pivots,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[IntVector] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduce `row` modulo the row space and return it primitive. The
    /// reduction multiplies by positive scalars only, so a constraint row
    /// keeps describing the same halfspace relative to this span.
    pub fn reduce(&self, row: &IntVector) -> IntVector {
        if self.rows.is_empty() {
            return row.clone().primitive();
        }
        if let (Some(r), Some(b)) = (
            slice_from_bigint::<i128>(row.coords()),
            self.rows
                .iter()
                .map(|r| slice_from_bigint::<i128>(r.coords()))
                .collect::<Option<Vec<_>>>(),
        ) {
            if let Ok(mut out) = reduce_generic(&r, &b, &self.pivots) {
                normalize_primitive(&mut out);
                return IntVector::new(out.iter().map(|v| v.to_bigint()).collect());
            }
        }
        let b: Vec<Vec<BigInt>> = self.rows.iter().map(|r| r.coords().to_vec()).collect();
        let out = reduce_generic(row.coords(), &b, &self.pivots)
            .expect("bigint arithmetic cannot overflow");
        IntVector::new(out).primitive()
    }

    /// A basis of the null space `{x : Rx = 0}`, one primitive vector per
    /// free column, ordered by free column index.
    pub fn kernel_basis(&self) -> Vec<IntVector> {
        let mut lcm = BigInt::one();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let pv = &row.coords()[p];
            lcm = num_integer::lcm(lcm, pv.clone());
        }
        let pivot_set: std::collections::HashSet<usize> = self.pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for f in 0..self.dim {
            if pivot_set.contains(&f) {
                continue;
            }
            let mut v = vec![BigInt::zero(); self.dim];
            v[f] = lcm.clone();
            for (row, &p) in self.rows.iter().zip(&self.pivots) {
                let coeff = &row.coords()[f];
                if !coeff.is_zero() {
                    v[p] = -(coeff * &lcm / &row.coords()[p]);
                }
            }
            basis.push(IntVector::new(v).primitive());
        }
        basis
    }
}

pub fn rank(dim: usize, rows: &[IntVector]) -> usize {
    Echelon::new(dim, rows).rank()
}

pub fn kernel_basis(dim: usize, rows: &[IntVector]) -> Vec<IntVector> {
    Echelon::new(dim, rows).kernel_basis()
}
