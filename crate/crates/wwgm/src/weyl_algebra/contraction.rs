//! Rescaling of generators to contracted coordinates and the `k -> infinity` limit.
//!
//! Input operators are in `hbar = 2` form; the symbol `hbar` of the contracted
//! frame enters only through the frame scale and the generator prefactor.

use serde::{Deserialize, Serialize};

use super::coef::{rational, Coef};
use super::diffop::DiffOp;
use super::WeylError;

/// Contracted coordinate frames, each a uniform rescaling `z_new = lambda z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Frame {
    /// Group-manifold coordinates `p_breve = sqrt(hbar) k p`.
    Breve,
    /// Expectation-value coordinates `p_s = 2 sqrt(hbar) p / k`.
    Scaled,
    /// Classical coordinates `p_c = sqrt(hbar) p / k`.
    Classical,
}

impl Frame {
    /// `lambda^e` as a symbolic coefficient.
    pub fn scale_pow(self, e: i32) -> Coef {
        match self {
            Frame::Breve => Coef::powers(e, e, 0),
            Frame::Classical => Coef::powers(e, -e, 0),
            Frame::Scaled => {
                let two = if e >= 0 { rational(1 << e, 1) } else { rational(1, 1 << (-e)) };
                Coef::powers(e, -e, 0).mul(&Coef::scalar(two))
            }
        }
    }
}

/// Standard prefactors of the contracted generators.
pub mod prefactor {
    use super::Coef;

    /// `sqrt(hbar)/k` for `X`, `P` and multiplicative `x`, `p`.
    pub fn translation() -> Coef {
        Coef::powers(1, -1, 0)
    }

    /// `hbar/2` for `J`, `H` and the tilde rotation and time generators.
    pub fn half_hbar() -> Coef {
        Coef::hbar().mul(&Coef::ratio(1, 2))
    }

    /// `hbar/k^2` for the multiplicative rotation and time functions.
    pub fn quadratic() -> Coef {
        Coef::powers(2, -2, 0)
    }

    /// `sqrt(hbar) k / 2` for tilde translations in contracted coordinates.
    pub fn tilde_translation() -> Coef {
        Coef::powers(1, 1, 0).mul(&Coef::ratio(1, 2))
    }
}

/// Rewrites `prefactor * A` in the frame's coordinates, before the limit.
///
/// A term with coordinate degree `e` and derivative order `d` in `(p, x)`
/// picks up `lambda^(d - e)`; `theta` is not rescaled.
pub fn rescale(a: &DiffOp, frame: Frame, prefactor: &Coef) -> Result<DiffOp, WeylError> {
    let m = 2 * a.n();
    a.map_coefs(|mono, deriv, c| {
        let e: u32 = mono[..m].iter().sum();
        let d: u32 = deriv[..m].iter().sum();
        Ok(c.bind_hbar_two()?.mul(&frame.scale_pow(d as i32 - e as i32)).mul(prefactor))
    })
}

/// `eps = 1/k^2 -> 0`; a surviving positive power of `k` is reported as a pole.
pub fn limit(a: &DiffOp) -> Result<DiffOp, WeylError> {
    a.map_coefs(|_, _, c| c.limit_k_infinite().map_err(|bad| WeylError::NegativePower(format!("coefficient {bad}"))))
}

pub fn contract(a: &DiffOp, frame: Frame, prefactor: &Coef) -> Result<DiffOp, WeylError> {
    limit(&rescale(a, frame, prefactor)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl_algebra::{group_field_x, make_generator, GeneratorId, GeneratorKind, Realization};

    #[test]
    fn breve_group_field() {
        let r = rescale(&group_field_x(1, 0), Frame::Breve, &prefactor::translation()).unwrap();
        assert_eq!(r.to_string(), "i*hbar*dp[1] + i*eps*x[1]*dtheta");
        assert_eq!(limit(&r).unwrap().to_string(), "i*hbar*dp[1]");
    }

    #[test]
    fn scaled_left_position() {
        let x = make_generator(1, GeneratorId::new(GeneratorKind::TranslationP(0), Realization::Left)).unwrap();
        let r = rescale(&x, Frame::Scaled, &prefactor::translation()).unwrap();
        assert_eq!(r.to_string(), "2*i*hbar*eps*dp[1] + 1/2*x[1]");
    }
}
