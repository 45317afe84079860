//! The twist map `V1 × V2 ⇢ X`.
//!
//! `V1 = {x0^ℓ + p(x1..xn) = 0}` in `P_(w0..wn)` and `V2 = {y0^ℓ + q(y1..ym) = 0}`
//! in `P_(v0..vm)` combine into a hypersurface of degree `v0·w0·ℓ` in
//! `P_(v0w1..v0wn, w0v1..w0vm)`. The first two image weights `(k1, k2)` carry
//! the fibration over `P^1`.

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::wps::{self, Reduction, WeightedForm};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistInput {
    pub w: Vec<u64>,
    pub v: Vec<u64>,
    pub ell: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwistImage {
    pub image_weights: Vec<u64>,
    pub degree: u64,
    pub quotient_degree: u64,
    pub base_pair: (u64, u64),
    pub is_calabi_yau: bool,
    pub generic_fiber: Reduction,
}

impl TwistInput {
    pub fn new(w: Vec<u64>, v: Vec<u64>, ell: u64) -> Self {
        Self { w, v, ell }
    }

    fn check_shape(&self) -> Result<()> {
        if self.w.len() < 2 || self.v.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "twist needs at least two weights on each side, got w={:?} v={:?}",
                self.w, self.v
            )));
        }
        if self.w.contains(&0) || self.v.contains(&0) || self.ell == 0 {
            return Err(Error::InvalidInput("weights and ℓ must be positive".into()));
        }
        Ok(())
    }

    /// Checks every invariant: shapes, `gcd(w0, v0, ℓ) = 1`, and that both
    /// factors admit Fermat members of degrees `ℓ·w0` and `ℓ·v0`.
    pub fn validate(&self) -> Result<()> {
        self.check_shape()?;
        let (w0, v0) = (self.w[0], self.v[0]);
        if w0.gcd(&v0).gcd(&self.ell) > 1 {
            return Err(Error::CommonDivisor {
                w0,
                v0,
                ell: self.ell,
            });
        }
        let dw = self.ell * w0;
        let dv = self.ell * v0;
        if let Some(bad) = self.w.iter().find(|&&wi| !dw.is_multiple_of(wi)) {
            return Err(Error::NotFermatCompatible(format!(
                "weight {bad} of V1 does not divide {dw}"
            )));
        }
        if let Some(bad) = self.v.iter().find(|&&vj| !dv.is_multiple_of(vj)) {
            return Err(Error::NotFermatCompatible(format!(
                "weight {bad} of V2 does not divide {dv}"
            )));
        }
        Ok(())
    }

    /// `(v0w1, .., v0wn, w0v1, .., w0vm)`; needs only the shape checks, so
    /// it also serves non-Fermat factors.
    pub fn image_weights(&self) -> Result<Vec<u64>> {
        self.check_shape()?;
        let (w0, v0) = (self.w[0], self.v[0]);
        Ok(self.w[1..]
            .iter()
            .map(|wi| v0 * wi)
            .chain(self.v[1..].iter().map(|vj| w0 * vj))
            .collect())
    }

    /// The image degree, computed as `v0·deg(V1)` and as `w0·deg(V2)`.
    pub fn image_degree(&self) -> Result<u64> {
        self.check_shape()?;
        let (w0, v0) = (self.w[0], self.v[0]);
        let via_v1 = v0 * (self.ell * w0);
        let via_v2 = w0 * (self.ell * v0);
        if via_v1 != via_v2 {
            return Err(Error::RouteMismatch {
                what: "image degree",
                first: via_v1.to_string(),
                second: via_v2.to_string(),
            });
        }
        Ok(via_v1)
    }

    /// Calabi-Yau test on the raw data: `v0·Σw_{i≥1} + w0·Σv_{j≥1} = v0·w0·ℓ`.
    pub fn calabi_yau_condition(&self) -> Result<bool> {
        self.check_shape()?;
        let (w0, v0) = (self.w[0], self.v[0]);
        let lhs = v0 * self.w[1..].iter().sum::<u64>() + w0 * self.v[1..].iter().sum::<u64>();
        Ok(lhs == v0 * w0 * self.ell)
    }
}

pub fn twist_image(t: &TwistInput) -> Result<TwistImage> {
    t.validate()?;
    let image_weights = t.image_weights()?;
    let degree = t.image_degree()?;
    let image = WeightedForm::fermat(image_weights.clone(), degree)?;
    let is_calabi_yau = wps::is_calabi_yau(&image);
    if is_calabi_yau != t.calabi_yau_condition()? {
        return Err(Error::RouteMismatch {
            what: "Calabi-Yau condition",
            first: is_calabi_yau.to_string(),
            second: (!is_calabi_yau).to_string(),
        });
    }
    let n = t.w.len() - 1;
    let mut fiber_weights = vec![image_weights[0]];
    fiber_weights.extend_from_slice(&image_weights[n..]);
    let generic_fiber = wps::reduce_form(&WeightedForm::fermat(fiber_weights, degree)?)?;
    Ok(TwistImage {
        base_pair: (image_weights[0], image_weights[1]),
        image_weights,
        degree,
        quotient_degree: t.ell,
        is_calabi_yau,
        generic_fiber,
    })
}

/// Exponent of `y0` (first `n` entries) or `x0` (last `m` entries) attached to
/// each image coordinate.
pub fn twist_exponent_table(t: &TwistInput) -> Result<Vec<Ratio<u64>>> {
    t.check_shape()?;
    let (w0, v0) = (t.w[0], t.v[0]);
    Ok(t.w[1..]
        .iter()
        .map(|&wi| Ratio::new(wi, w0))
        .chain(t.v[1..].iter().map(|&vj| Ratio::new(vj, v0)))
        .collect())
}
