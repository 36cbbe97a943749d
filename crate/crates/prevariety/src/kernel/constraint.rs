//! Homogeneous constraint systems: `Ex = 0`, `Ax <= 0`, `A'x < 0`.



use super::coeff::Coeff;
use super::vec::IntVector;
use crate::{Error, Result};

/// A conjunction of homogeneous linear constraints over integer rows, split
/// by kind. Rows are made primitive on insertion. Zero rows are dropped
/// where they are vacuous (equations, nonstrict) and a zero strict row,
/// which no point satisfies, marks the whole system empty.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConstraintSystem {
    dim: usize,
    equations: Vec<IntVector>,
    nonstrict: Vec<IntVector>,
    strict: Vec<IntVector>,
    trivially_empty: bool,
}

impl ConstraintSystem {
    pub fn new(dim: usize) -> Self {
        ConstraintSystem {
            dim,
            equations: Vec::new(),
            nonstrict: Vec::new(),
            strict: Vec::new(),
            trivially_empty: false,
        }
    }

    pub fn from_parts(
        dim: usize,
        equations: Vec<IntVector>,
        nonstrict: Vec<IntVector>,
        strict: Vec<IntVector>,
    ) -> Result<Self> {
        let mut sys = ConstraintSystem::new(dim);
        for r in equations {
            sys.push_equation(r)?;
        }
        for r in nonstrict {
            sys.push_nonstrict(r)?;
        }
        for r in strict {
            sys.push_strict(r)?;
        }
        Ok(sys)
    }

    fn check_dim(&self, row: &IntVector) -> Result<()> {
        if row.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: row.dim(),
            });
        }
        Ok(())
    }

    pub fn push_equation(&mut self, row: IntVector) -> Result<()> {
        self.check_dim(&row)?;
        if !row.is_zero() {
            self.equations.push(row.primitive());
        }
        Ok(())
    }

    pub fn push_nonstrict(&mut self, row: IntVector) -> Result<()> {
        self.check_dim(&row)?;
        if !row.is_zero() {
            self.nonstrict.push(row.primitive());
        }
        Ok(())
    }

    pub fn push_strict(&mut self, row: IntVector) -> Result<()> {
        self.check_dim(&row)?;
        if row.is_zero() {
            self.trivially_empty = true;
        } else {
            self.strict.push(row.primitive());
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn equations(&self) -> &[IntVector] {
        &self.equations
    }

    pub fn nonstrict(&self) -> &[IntVector] {
        &self.nonstrict
    }

    pub fn strict(&self) -> &[IntVector] {
        &self.strict
    }

    /// True when a zero strict row was pushed; the point set is empty no
    /// matter what the other rows say.
    pub fn is_trivially_empty(&self) -> bool {
        self.trivially_empty
    }

    pub fn row_count(&self) -> usize {
        self.equations.len() + self.nonstrict.len() + self.strict.len()
    }

    /// The closed relaxation: every strict row becomes nonstrict. For a
    /// nonempty system this describes the topological closure.
    pub fn closure(&self) -> ConstraintSystem {
        let mut nonstrict = self.nonstrict.clone();
        nonstrict.extend(self.strict.iter().cloned());
        ConstraintSystem {
            dim: self.dim,
            equations: self.equations.clone(),
            nonstrict,
            strict: Vec::new(),
            trivially_empty: self.trivially_empty,
        }
    }

    /// Exact membership test.
    pub fn contains(&self, x: &IntVector) -> bool {
        if self.trivially_empty || x.dim() != self.dim {
            return false;
        }
        self.equations.iter().all(|r| r.dot(x).is_zero())
            && self.nonstrict.iter().all(|r| !r.dot(x).is_positive())
            && self.strict.iter().all(|r| r.dot(x).is_negative())
    }

    /// Concatenation of two systems over the same space: the constraints of
    /// both, hence the intersection of their point sets.
    pub fn concat(&self, other: &ConstraintSystem) -> Result<ConstraintSystem> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let mut out = self.clone();
        out.trivially_empty |= other.trivially_empty;
        out.equations.extend(other.equations.iter().cloned());
        out.nonstrict.extend(other.nonstrict.iter().cloned());
        out.strict.extend(other.strict.iter().cloned());
        Ok(out)
    }
}

/// Outcome of an exact feasibility test. A feasible verdict always carries
/// an integer witness satisfying every constraint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeasibilityVerdict {
    pub feasible: bool,
    pub witness: Option<IntVector>,
}

impl FeasibilityVerdict {
    pub fn empty() -> Self {
        FeasibilityVerdict {
            feasible: false,
            witness: None,
        }
    }

    pub fn with_witness(witness: IntVector) -> Self {
        FeasibilityVerdict {
            feasible: true,
            witness: Some(witness),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(coords: &[i64]) -> IntVector {
        IntVector::from_i64(coords)
    }

    #[test]
    fn rows_are_normalized_primitive() {
        let mut sys = ConstraintSystem::new(2);
        sys.push_nonstrict(iv(&[4, -6])).unwrap();
        assert_eq!(sys.nonstrict(), &[iv(&[2, -3])]);
    }

    #[test]
    fn zero_rows() {
        let mut sys = ConstraintSystem::new(2);
        sys.push_equation(iv(&[0, 0])).unwrap();
        sys.push_nonstrict(iv(&[0, 0])).unwrap();
        assert_eq!(sys.row_count(), 0);
        assert!(!sys.is_trivially_empty());
        sys.push_strict(iv(&[0, 0])).unwrap();
        assert!(sys.is_trivially_empty());
        assert!(!sys.contains(&iv(&[1, 1])));
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let mut sys = ConstraintSystem::new(3);
        let err = sys.push_equation(iv(&[1, 2])).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { expected: 3, got: 2 }));
    }

    #[test]
    fn membership_distinguishes_strict_rows() {
        let sys = ConstraintSystem::from_parts(
            2,
            vec![],
            vec![iv(&[1, 0])],
            vec![iv(&[0, 1])],
        )
        .unwrap();
        assert!(sys.contains(&iv(&[0, -1])));
        assert!(sys.contains(&iv(&[-3, -2])));
        assert!(!sys.contains(&iv(&[0, 0])));
        assert!(!sys.contains(&iv(&[1, -1])));
    }

    #[test]
    fn closure_relaxes_strict_rows() {
        let sys =
            ConstraintSystem::from_parts(2, vec![], vec![], vec![iv(&[0, 1])]).unwrap();
        let cl = sys.closure();
        assert!(cl.strict().is_empty());
        assert!(cl.contains(&iv(&[0, 0])));
    }
}
