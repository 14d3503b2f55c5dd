//! Square-ket representation: modular conjugation, left and right star actions,
//! expectations, transition probabilities and the vacuum GNS inner product.
//!
//! The square-ket inner product is `[a|b] = Tr[conj(a) * b]`, which equals the
//! trace of the pointwise product.

use thiserror::Error;

use crate::gaussian_core::{self, coherent_wigner, trace_analytic, GaussError, PhasePoint, PolyGaussian};
use crate::star_numeric::{self, sample, trace_grid, GridError, GridFunction};
use crate::C64;

/// Relative tolerance for realness of observables and cone members.
pub const REAL_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum TomitaError {
    #[error("operands mix analytic and grid payloads")]
    MixedRepresentation,
    #[error("observable is not real (relative imaginary part {0:.3e})")]
    NonRealObservable(f64),
    #[error("vacuum GNS form is not normalizable")]
    NotNormalizable,
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Gauss(#[from] GaussError),
}

/// A phase-space function in one of the two numeric representations.
#[derive(Clone, Debug)]
pub enum Payload {
    Grid(GridFunction),
    Analytic(PolyGaussian),
}

impl From<GridFunction> for Payload {
    fn from(f: GridFunction) -> Self {
        Payload::Grid(f)
    }
}

impl From<PolyGaussian> for Payload {
    fn from(f: PolyGaussian) -> Self {
        Payload::Analytic(f)
    }
}

impl Payload {
    pub fn conj(&self) -> Payload {
        match self {
            Payload::Grid(f) => Payload::Grid(f.conj()),
            Payload::Analytic(f) => Payload::Analytic(f.conj()),
        }
    }

    pub fn scale(&self, s: C64) -> Payload {
        match self {
            Payload::Grid(f) => Payload::Grid(f.scale(s)),
            Payload::Analytic(f) => Payload::Analytic(f.scale(s)),
        }
    }

    /// `self * other` in the shared representation.
    pub fn star(&self, other: &Payload) -> Result<Payload, TomitaError> {
        match (self, other) {
            (Payload::Grid(f), Payload::Grid(g)) => Ok(Payload::Grid(star_numeric::star(f, g)?)),
            (Payload::Analytic(f), Payload::Analytic(g)) => Ok(Payload::Analytic(gaussian_core::star(f, g)?)),
            _ => Err(TomitaError::MixedRepresentation),
        }
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Payload) -> Result<Payload, TomitaError> {
        match (self, other) {
            (Payload::Grid(f), Payload::Grid(g)) => Ok(Payload::Grid(f.mul(g)?)),
            (Payload::Analytic(f), Payload::Analytic(g)) => Ok(Payload::Analytic(f.mul(g)?)),
            _ => Err(TomitaError::MixedRepresentation),
        }
    }

    pub fn sub(&self, other: &Payload) -> Result<Payload, TomitaError> {
        match (self, other) {
            (Payload::Grid(f), Payload::Grid(g)) => Ok(Payload::Grid(f.sub(g)?)),
            (Payload::Analytic(f), Payload::Analytic(g)) => {
                Ok(Payload::Analytic(f.add_same_gaussian(&g.scale(C64::new(-1.0, 0.0)))?))
            }
            _ => Err(TomitaError::MixedRepresentation),
        }
    }

    /// `Tr[f] = (1/(2^n (2 pi)^n)) int f`.
    pub fn trace(&self) -> Result<C64, TomitaError> {
        match self {
            Payload::Grid(f) => Ok(trace_grid(f)),
            Payload::Analytic(f) => Ok(trace_analytic(f)?),
        }
    }

    /// Largest relative deviation from realness: `|| conj(f) - f || / || f ||`.
    pub fn imaginary_ratio(&self) -> f64 {
        match self {
            Payload::Grid(f) => {
                let norm = f.norm_l2();
                if norm == 0.0 {
                    return 0.0;
                }
                f.conj().sub(f).map(|d| d.norm_l2() / norm).unwrap_or(f64::INFINITY)
            }
            Payload::Analytic(f) => {
                if f.approx_eq(&f.conj(), 1e-12) {
                    0.0
                } else {
                    1.0
                }
            }
        }
    }

    /// The vacuum Wigner function in the same representation.
    fn vacuum_like(&self) -> Result<Payload, TomitaError> {
        match self {
            Payload::Grid(f) => Ok(Payload::Grid(sample(&coherent_wigner(&PhasePoint::origin(1)), f.spec())?)),
            Payload::Analytic(f) => Ok(Payload::Analytic(coherent_wigner(&PhasePoint::origin(f.dim())))),
        }
    }
}

/// Element `|alpha]` of the square-ket space.
#[derive(Clone, Debug)]
pub struct SquareKet(Payload);

impl SquareKet {
    pub fn new(payload: impl Into<Payload>) -> Self {
        SquareKet(payload.into())
    }

    pub fn payload(&self) -> &Payload {
        &self.0
    }

    pub fn into_payload(self) -> Payload {
        self.0
    }

    pub fn scale(&self, s: C64) -> SquareKet {
        SquareKet(self.0.scale(s))
    }

    /// Norm squared `[k|k]`.
    pub fn norm_sqr(&self) -> Result<f64, TomitaError> {
        Ok(ket_inner(self, self)?.re)
    }
}

/// Witness data for membership in the self-dual cone.
#[derive(Clone, Debug, PartialEq)]
pub struct ConeMembership {
    pub is_real: bool,
    pub positivity_witness: f64,
}

/// `J beta = conj(beta)`.
pub fn j_conj(k: &SquareKet) -> SquareKet {
    SquareKet(k.0.conj())
}

/// `alpha * k`.
pub fn left_act(alpha: &Payload, k: &SquareKet) -> Result<SquareKet, TomitaError> {
    Ok(SquareKet(alpha.star(&k.0)?))
}

/// `J (alpha *) J k = k * conj(alpha)`.
pub fn right_act(alpha: &Payload, k: &SquareKet) -> Result<SquareKet, TomitaError> {
    Ok(SquareKet(k.0.star(&alpha.conj())?))
}

/// `{alpha, k}_* = alpha * k - k * alpha` for real `alpha`.
pub fn tilde_act(alpha: &Payload, k: &SquareKet) -> Result<SquareKet, TomitaError> {
    require_real(alpha)?;
    Ok(SquareKet(left_act(alpha, k)?.0.sub(&right_act(alpha, k)?.0)?))
}

/// `[a|b] = Tr[conj(a) * b]`.
pub fn ket_inner(a: &SquareKet, b: &SquareKet) -> Result<C64, TomitaError> {
    a.0.conj().mul(&b.0)?.trace()
}

fn require_real(alpha: &Payload) -> Result<(), TomitaError> {
    let r = alpha.imaginary_ratio();
    if r > REAL_TOL {
        return Err(TomitaError::NonRealObservable(r));
    }
    Ok(())
}

/// `[rho|(alpha *)|rho] = Tr[alpha * rho]` for a real observable.
pub fn expectation(alpha: &Payload, rho: &SquareKet) -> Result<f64, TomitaError> {
    require_real(alpha)?;
    Ok(alpha.mul(&rho.0)?.trace()?.re)
}

/// `rho_{psi phi} = 2^{2n} phi * conj(psi)`, the symbol of `|phi><psi|`.
pub fn transition_density(psi: &Payload, phi: &Payload) -> Result<Payload, TomitaError> {
    let n = match phi {
        Payload::Grid(_) => 1,
        Payload::Analytic(f) => f.dim(),
    };
    Ok(phi.star(&psi.conj())?.scale(C64::new(4f64.powi(n as i32), 0.0)))
}

/// `rho_psi = rho_{psi psi}`.
pub fn pure_density(psi: &Payload) -> Result<SquareKet, TomitaError> {
    Ok(SquareKet(transition_density(psi, psi)?))
}

/// `|Tr[alpha rho_{psi phi}]|^2 = |<psi|alpha phi>|^2`.
pub fn transition_prob(alpha: &Payload, psi: &Payload, phi: &Payload) -> Result<f64, TomitaError> {
    require_real(alpha)?;
    Ok(alpha.mul(&transition_density(psi, phi)?)?.trace()?.norm_sqr())
}

/// `omega_o(conj(alpha) * beta) = Tr[conj(alpha) * beta * rho_o]`.
pub fn gns_inner(alpha: &Payload, beta: &Payload) -> Result<C64, TomitaError> {
    let rho_o = beta.vacuum_like()?;
    let gamma = beta.star(&rho_o)?;
    if let Payload::Grid(g) = &gamma {
        g.check_decay(1e-10).map_err(|_| TomitaError::NotNormalizable)?;
    }
    match alpha.conj().mul(&gamma)?.trace() {
        Err(TomitaError::Gauss(GaussError::NotIntegrable)) => Err(TomitaError::NotNormalizable),
        r => r,
    }
}

/// Realness plus the sampled positivity witness `min_a Tr[rho * rho_a]`.
pub fn cone_membership(rho: &SquareKet, centers: &[PhasePoint]) -> Result<ConeMembership, TomitaError> {
    let is_real = rho.0.imaginary_ratio() < REAL_TOL;
    let mut witness = f64::INFINITY;
    for a in centers {
        let ra = match &rho.0 {
            Payload::Grid(f) => Payload::Grid(sample(&coherent_wigner(a), f.spec())?),
            Payload::Analytic(_) => Payload::Analytic(coherent_wigner(a)),
        };
        witness = witness.min(rho.0.mul(&ra)?.trace()?.re);
    }
    Ok(ConeMembership { is_real, positivity_witness: witness })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rho(p: f64, x: f64) -> Payload {
        Payload::Analytic(coherent_wigner(&PhasePoint::d1(p, x)))
    }

    #[test]
    fn coherent_projector_is_fixed_by_left_action() {
        let r = rho(0.3, -0.2);
        let k = SquareKet::new(coherent_wigner(&PhasePoint::d1(0.3, -0.2)));
        let out = left_act(&r, &k).unwrap();
        let (Payload::Analytic(a), Payload::Analytic(b)) = (out.payload(), k.payload()) else { unreachable!() };
        assert!(a.approx_eq(b, 1e-12));
    }

    #[test]
    fn mixed_payloads_are_rejected() {
        let spec = crate::star_numeric::GridSpec::new(32, 6.0).unwrap();
        let g = Payload::Grid(GridFunction::zeros(spec));
        let k = SquareKet::new(coherent_wigner(&PhasePoint::d1(0.0, 0.0)));
        assert!(matches!(left_act(&g, &k), Err(TomitaError::MixedRepresentation)));
    }

    #[test]
    fn complex_observable_is_rejected() {
        let alpha = rho(0.0, 0.0).scale(C64::new(0.0, 1.0));
        let k = SquareKet::new(coherent_wigner(&PhasePoint::d1(0.0, 0.0)));
        assert!(matches!(expectation(&alpha, &k), Err(TomitaError::NonRealObservable(_))));
    }
}
