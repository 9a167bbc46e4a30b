//! Causal classification of tangent vectors.

use super::{pair22, q22, AdsPoint, Vec22};
use crate::error::AdsError;
use crate::num::NumericPolicy;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CausalClass {
    Spacelike,
    Lightlike,
    Timelike,
}

/// A tangent vector: base point plus an ambient vector orthogonal to it.
#[derive(Debug, Clone, Copy)]
pub struct TangentVector {
    pub base: AdsPoint,
    pub v: Vec22,
}

impl TangentVector {
    pub fn new(base: AdsPoint, v: Vec22) -> Result<Self> {
        let policy = NumericPolicy::default();
        let pairing = pair22(&base.rep, &v);
        if pairing.abs() > policy.tangency_tol * (1.0 + v.norm()) {
            return Err(AdsError::InvalidInput(format!(
                "vector is not tangent: <base, v> = {pairing:.3e}"
            )));
        }
        Ok(TangentVector { base, v })
    }

    /// Is the vector future-pointing (negative pairing with the global
    /// timelike rotation field)?
    pub fn is_future(&self) -> bool {
        pair22(&self.v, &self.base.rep.time_field()) < 0.0
    }
}

/// Sign classification of q(v, v), with the lightlike band |q| <= causal_tol.
pub fn causal_type(v: &TangentVector) -> CausalClass {
    causal_type_of(&v.v)
}

pub(crate) fn causal_type_of(v: &Vec22) -> CausalClass {
    let policy = NumericPolicy::default();
    let q = q22(v);
    if q.abs() <= policy.causal_tol {
        CausalClass::Lightlike
    } else if q > 0.0 {
        CausalClass::Spacelike
    } else {
        CausalClass::Timelike
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> AdsPoint {
        AdsPoint::new(Vec22::e3()).unwrap()
    }

    #[test]
    fn sign_classification() {
        let p = base();
        // q = 1
        let s = TangentVector::new(p, Vec22::new(1.0, 0.0, 0.0, 0.0)).unwrap();
        assert_eq!(causal_type(&s), CausalClass::Spacelike);
        // q = -0.25
        let t = TangentVector::new(p, Vec22::new(0.0, 0.0, 0.0, 0.5)).unwrap();
        assert_eq!(causal_type(&t), CausalClass::Timelike);
        // |q| below the band
        let l = TangentVector::new(p, Vec22::new(1e-7, 0.0, 0.0, 1e-7)).unwrap();
        assert_eq!(causal_type(&l), CausalClass::Lightlike);
    }

    #[test]
    fn non_tangent_rejected() {
        let p = base();
        assert!(TangentVector::new(p, Vec22::new(0.0, 0.0, 1.0, 0.0)).is_err());
    }
}
