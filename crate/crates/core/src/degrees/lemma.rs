use num_traits::Float;
use serde::Serialize;

use super::DegreeError;

/// The constants `(ζ, d1, d2, C, α, β)` with
/// `α = (ζ d1 d2 + sqrt(ζ² d1² d2² − 4 d1 d2)) / (2 d2)` and the same numerator over `2 d1` for `β`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LemmaConstants<F> {
    pub zeta: F,
    pub d1: F,
    pub d2: F,
    pub c: F,
    pub alpha: F,
    pub beta: F,
}

/// Relative residuals of the defining identities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LemmaResiduals<F> {
    /// `|α/d1 + 1/(α d2) − ζ| / ζ`
    pub alpha_identity: F,
    /// `|β/d2 + 1/(β d1) − ζ| / ζ`
    pub beta_identity: F,
    /// `|α d2 − β d1| / (α d2)`
    pub cross: F,
}

impl<F: Float> LemmaResiduals<F> {
    pub fn max(&self) -> F {
        self.alpha_identity.max(self.beta_identity).max(self.cross)
    }
}

impl<F: Float + std::fmt::Display> LemmaConstants<F> {
    /// Relative tolerance of the construction-time checks: `1e-9` in double precision, a
    /// small multiple of the machine epsilon for coarser types.
    pub fn tolerance() -> F {
        let eps = F::epsilon();
        if eps < F::from(1e-12).unwrap() {
            F::from(1e-9).unwrap()
        } else {
            eps * F::from(1024).unwrap()
        }
    }

    pub fn new(zeta: F, d1: F, d2: F, c: F) -> Result<Self, DegreeError> {
        let zero = F::zero();
        let one = F::one();
        let two = one + one;
        let four = two + two;
        if !(d1 > zero && d2 > zero && c > zero) {
            return Err(DegreeError::LemmaHypothesis(format!(
                "need d1 > 0, d2 > 0 and C > 0 (got d1 = {d1}, d2 = {d2}, C = {c})"
            )));
        }
        let threshold = one / d1 + one / d2;
        if !(zeta > threshold) {
            return Err(DegreeError::LemmaHypothesis(format!(
                "need zeta > 1/d1 + 1/d2, but {zeta} <= {threshold}"
            )));
        }
        let p = zeta * d1 * d2;
        let numerator = p + (p * p - four * d1 * d2).sqrt();
        let consts = LemmaConstants {
            zeta,
            d1,
            d2,
            c,
            alpha: numerator / (two * d2),
            beta: numerator / (two * d1),
        };
        let tol = Self::tolerance();
        let r = consts.residuals();
        if !(consts.alpha > one && consts.beta > one) || r.max() > tol {
            return Err(DegreeError::LemmaHypothesis(format!(
                "identities fail: alpha = {}, beta = {}, max relative residual {}",
                consts.alpha,
                consts.beta,
                r.max()
            )));
        }
        Ok(consts)
    }

    pub fn residuals(&self) -> LemmaResiduals<F> {
        let one = F::one();
        let LemmaConstants { zeta, d1, d2, alpha, beta, .. } = *self;
        LemmaResiduals {
            alpha_identity: ((alpha / d1 + one / (alpha * d2)) - zeta).abs() / zeta,
            beta_identity: ((beta / d2 + one / (beta * d1)) - zeta).abs() / zeta,
            cross: (alpha * d2 - beta * d1).abs() / (alpha * d2),
        }
    }

    /// `α ≥ ζ d1 / 2`, up to the relative tolerance.
    pub fn alpha_lower_bound_holds(&self) -> bool {
        let half = self.zeta * self.d1 / (F::one() + F::one());
        self.alpha >= half * (F::one() - Self::tolerance())
    }
}
