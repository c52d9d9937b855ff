//! Signed principal submatrices of the target and their real numerical
//! ranges.

use crate::linalg::{self, certify_eigen_interval, FloatMatrix, Interval, KernelError, RatMatrix, Rational};
use crate::subspace::EquivClass;
use crate::{CoapproxError, Result};

/// Principal submatrix of `T` on `P⁺ ∪ P⁻` (ascending), with the rows of
/// indices in `P⁻` negated.
#[derive(Debug, Clone, PartialEq)]
pub struct StarAssociatedMatrix {
    pub class_id: usize,
    pub index_order: Vec<usize>,
    pub matrix: RatMatrix,
}

pub fn star_associated_matrix(t: &RatMatrix, class: &EquivClass) -> Result<StarAssociatedMatrix> {
    if !t.is_square() {
        return Err(KernelError::NotSquare {
            rows: t.rows(),
            cols: t.cols(),
        }
        .into());
    }
    if class.is_zero {
        return Err(CoapproxError::ZeroClass(class.id));
    }
    let index_order = class.members();
    if let Some(&max) = index_order.last() {
        if max >= t.rows() {
            return Err(CoapproxError::DimensionMismatch {
                expected: max + 1,
                found: t.rows(),
            });
        }
    }
    let mut matrix = t.principal_submatrix(&index_order);
    for (r, i) in index_order.iter().enumerate() {
        if class.p_minus.contains(i) {
            for s in 0..index_order.len() {
                matrix[(r, s)] = -matrix[(r, s)].clone();
            }
        }
    }
    Ok(StarAssociatedMatrix {
        class_id: class.id,
        index_order,
        matrix,
    })
}

/// `W(M) = {⟨Mx, x⟩ : ‖x‖₂ = 1}` over real `x`: the eigenvalue interval of
/// the symmetric part.
pub fn real_numerical_range(m: &FloatMatrix) -> Result<Interval<f64>, KernelError> {
    if !m.is_square() {
        return Err(KernelError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    linalg::symmetric_eigen_interval(&m.symmetric_part())
}

/// Numerical range of a rational matrix, with exact endpoints whenever they
/// can be certified as rationals.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericalRange {
    pub approx: Interval<f64>,
    pub exact: Option<Interval<Rational>>,
}

pub fn numerical_range(m: &RatMatrix) -> Result<NumericalRange, KernelError> {
    if !m.is_square() {
        return Err(KernelError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let sym = m.symmetric_part();
    let approx = linalg::symmetric_eigen_interval(&sym.to_f64())?;
    let exact = certify_eigen_interval(&sym, &approx);
    Ok(NumericalRange { approx, exact })
}
