//! Fixed-dimension scalar vectors ordered lexicographically.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use crate::scalar::{compare_scalars, CompareMode, Scalar};

/// A vector compared coordinate by coordinate, first difference deciding.
/// The zero-dimensional vector is valid and equal to itself.
#[derive(Clone, PartialEq, Eq)]
pub struct LexVector(Vec<Scalar>);

impl LexVector {
    pub fn new(coords: Vec<Scalar>) -> Self {
        LexVector(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        LexVector(coords.iter().map(|&v| Scalar::from_int(v)).collect())
    }

    pub fn zero(dim: usize) -> Self {
        LexVector(vec![Scalar::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coord(&self, i: usize) -> &Scalar {
        &self.0[i]
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Scalar::is_zero)
    }

    /// Largest absolute coordinate; zero for the empty vector.
    pub fn max_abs(&self) -> Scalar {
        self.0
            .iter()
            .map(Scalar::abs)
            .max()
            .unwrap_or_else(Scalar::zero)
    }
}

/// Lexicographic comparison under a mode. Panics on dimension mismatch —
/// vectors from different spaces must never meet.
pub fn compare_lex(u: &LexVector, v: &LexVector, mode: CompareMode) -> Ordering {
    assert_eq!(
        u.dim(),
        v.dim(),
        "compare_lex: dimension mismatch ({} vs {})",
        u.dim(),
        v.dim()
    );
    for (a, b) in u.0.iter().zip(&v.0) {
        match compare_scalars(a, b, mode) {
            Ordering::Equal => continue,
            decided => return decided,
        }
    }
    Ordering::Equal
}

impl Ord for LexVector {
    fn cmp(&self, other: &Self) -> Ordering {
        compare_lex(self, other, CompareMode::Exact)
    }
}

impl PartialOrd for LexVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &LexVector {
    type Output = LexVector;
    fn add(self, rhs: &LexVector) -> LexVector {
        assert_eq!(self.dim(), rhs.dim(), "vector addition: dimension mismatch");
        LexVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for LexVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for LexVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_differing_coordinate_decides() {
        let u = LexVector::from_ints(&[1, 9]);
        let v = LexVector::from_ints(&[2, 0]);
        assert_eq!(compare_lex(&u, &v, CompareMode::Exact), Ordering::Less);

        let u = LexVector::from_ints(&[2, 0, 7]);
        let v = LexVector::from_ints(&[2, 0, 5]);
        assert_eq!(compare_lex(&u, &v, CompareMode::Exact), Ordering::Greater);
    }

    #[test]
    fn equal_vectors_compare_equal() {
        let u = LexVector::from_ints(&[3, -1]);
        assert_eq!(compare_lex(&u, &u.clone(), CompareMode::Exact), Ordering::Equal);
        assert_eq!(u, u.clone());
    }

    #[test]
    fn zero_dimensional_vectors_are_equal() {
        let u = LexVector::zero(0);
        let v = LexVector::zero(0);
        assert_eq!(compare_lex(&u, &v, CompareMode::Exact), Ordering::Equal);
    }

    #[test]
    #[should_panic(expected = "dimension mismatch")]
    fn dimension_mismatch_panics() {
        let u = LexVector::from_ints(&[1]);
        let v = LexVector::from_ints(&[1, 2]);
        compare_lex(&u, &v, CompareMode::Exact);
    }

    #[test]
    fn tolerant_comparison_applies_per_coordinate() {
        let u = LexVector::new(vec![Scalar::from_f64(0.1000).unwrap(), Scalar::from_f64(5.0).unwrap()]);
        let v = LexVector::new(vec![Scalar::from_f64(0.1005).unwrap(), Scalar::from_f64(5.0).unwrap()]);
        assert_eq!(compare_lex(&u, &v, CompareMode::Tolerant(0.001)), Ordering::Equal);
        assert_eq!(compare_lex(&u, &v, CompareMode::Exact), Ordering::Less);
    }

    #[test]
    fn addition_is_coordinatewise() {
        let u = LexVector::from_ints(&[1, 2]);
        let v = LexVector::from_ints(&[10, -2]);
        assert_eq!(&u + &v, LexVector::from_ints(&[11, 0]));
    }
}
