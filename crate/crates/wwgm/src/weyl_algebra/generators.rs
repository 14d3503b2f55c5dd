//! Relativity-symmetry generators in their left, right, tilde and multiplicative forms.

use serde::{Deserialize, Serialize};

use super::coef::{cr, Coef};
use super::diffop::{DiffOp, Var};
use super::WeylError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GeneratorKind {
    /// `G_{-x^i} = p_i`.
    TranslationX(usize),
    /// `G_{p^i} = x_i`.
    TranslationP(usize),
    /// `G_{omega^{ij}} = x_i p_j - x_j p_i`.
    Rotation(usize, usize),
    /// `G_t = p.p / (2m)`.
    Time,
    /// `G_theta = 1`.
    Theta,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Realization {
    Left,
    Right,
    Tilde,
    Multiplicative,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GeneratorId {
    pub kind: GeneratorKind,
    pub realization: Realization,
}

impl GeneratorId {
    pub fn new(kind: GeneratorKind, realization: Realization) -> Self {
        GeneratorId { kind, realization }
    }

    pub fn validate(&self, n: usize) -> Result<(), WeylError> {
        let ok = match self.kind {
            GeneratorKind::TranslationX(i) | GeneratorKind::TranslationP(i) => i < n,
            GeneratorKind::Rotation(i, j) => i < n && j < n && i != j,
            GeneratorKind::Time | GeneratorKind::Theta => true,
        };
        if ok {
            Ok(())
        } else {
            Err(WeylError::InvalidId(format!("{self:?} in dimension {n}")))
        }
    }
}

/// The phase-space function `G_s(p, x)` as a derivative-free operator.
pub fn generator_function(n: usize, kind: GeneratorKind) -> DiffOp {
    let coord = |v| DiffOp::coord(n, v);
    let prod = |a: Var, b: Var| coord(a).compose(&coord(b)).expect("same dimension");
    match kind {
        GeneratorKind::TranslationX(i) => coord(Var::P(i)),
        GeneratorKind::TranslationP(i) => coord(Var::X(i)),
        GeneratorKind::Rotation(i, j) => {
            prod(Var::X(i), Var::P(j)).sub(&prod(Var::X(j), Var::P(i))).expect("same dimension")
        }
        GeneratorKind::Time => {
            let mut t = DiffOp::zero(n);
            for i in 0..n {
                t = t.add(&prod(Var::P(i), Var::P(i))).expect("same dimension");
            }
            t.scale(&Coef::ratio(1, 2).mul(&Coef::inv_mass()))
        }
        GeneratorKind::Theta => DiffOp::identity(n),
    }
}

fn factorial(k: u32) -> i64 {
    (1..=k as i64).product()
}

/// Exact Bopp series of a derivative-free operator with `h = hbar/2`.
///
/// Left: `sum (ih)^j (-ih)^l / (j! l!) (d_x^j d_p^l P) d_p^j d_x^l`.
/// Right: `sum (ih)^j (-ih)^l / (j! l!) (d_p^j d_x^l P) d_x^j d_p^l`.
fn bopp(symbol: &DiffOp, left: bool) -> Result<DiffOp, WeylError> {
    if !symbol.is_multiplicative() {
        return Err(WeylError::InvalidId("Bopp realization of a non-multiplicative operator".into()));
    }
    let n = symbol.n();
    let half_hbar = Coef::hbar().mul(&Coef::ratio(1, 2));
    let mut out = DiffOp::zero(n);
    for ((mono, _), c) in symbol.terms() {
        let single = DiffOp::term(n, mono.clone(), vec![0; 2 * n + 1], c.clone());
        let xdeg: Vec<u32> = (0..n).map(|i| mono[n + i]).collect();
        let pdeg: Vec<u32> = (0..n).map(|i| mono[i]).collect();
        let (jb, lb) = if left { (xdeg, pdeg) } else { (pdeg, xdeg) };
        for j in bounded(&jb) {
            for l in bounded(&lb) {
                let mut term = single.clone();
                let mut deriv = vec![0u32; 2 * n + 1];
                let mut weight = Coef::one();
                for i in 0..n {
                    let (on_symbol_j, on_symbol_l, act_j, act_l) = if left {
                        (Var::X(i), Var::P(i), i, n + i)
                    } else {
                        (Var::P(i), Var::X(i), n + i, i)
                    };
                    for _ in 0..j[i] {
                        term = term.symbol_derivative(on_symbol_j);
                    }
                    for _ in 0..l[i] {
                        term = term.symbol_derivative(on_symbol_l);
                    }
                    deriv[act_j] += j[i];
                    deriv[act_l] += l[i];
                    let w = Coef::scalar(cr(0, 1))
                        .pow(j[i])
                        .mul(&Coef::scalar(cr(0, -1)).pow(l[i]))
                        .mul(&half_hbar.pow(j[i] + l[i]))
                        .mul(&Coef::ratio(1, factorial(j[i]) * factorial(l[i])));
                    weight = weight.mul(&w);
                }
                for ((a, _), tc) in term.terms() {
                    out.add_term(a.clone(), deriv.clone(), tc.mul(&weight));
                }
            }
        }
    }
    Ok(out)
}

fn bounded(bound: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for &b in bound {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..=b).map(move |v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out
}

/// Left star multiplication `P *` as a differential operator.
pub fn left_realization(symbol: &DiffOp) -> Result<DiffOp, WeylError> {
    bopp(symbol, true)
}

/// Right star multiplication `* P` as a differential operator.
pub fn right_realization(symbol: &DiffOp) -> Result<DiffOp, WeylError> {
    bopp(symbol, false)
}

/// `{P, .}_* = P^L - P^R`.
pub fn tilde_realization(symbol: &DiffOp) -> Result<DiffOp, WeylError> {
    left_realization(symbol)?.sub(&right_realization(symbol)?)
}

pub fn make_generator(n: usize, id: GeneratorId) -> Result<DiffOp, WeylError> {
    id.validate(n)?;
    let symbol = generator_function(n, id.kind);
    match id.realization {
        Realization::Multiplicative => Ok(symbol),
        Realization::Left => left_realization(&symbol),
        Realization::Right => right_realization(&symbol),
        Realization::Tilde => tilde_realization(&symbol),
    }
}

/// Boost `K_i = m G_{p^i}` in the given realization.
pub fn boost(n: usize, i: usize, realization: Realization) -> Result<DiffOp, WeylError> {
    Ok(make_generator(n, GeneratorId::new(GeneratorKind::TranslationP(i), realization))?.scale(&Coef::mass()))
}

/// Left-invariant field of `X` on the group manifold: `i x d_theta + i d_p`.
pub fn group_field_x(n: usize, i: usize) -> DiffOp {
    let it = DiffOp::coord(n, Var::X(i)).compose(&DiffOp::deriv(n, Var::Theta)).expect("same dimension");
    it.add(&DiffOp::deriv(n, Var::P(i))).expect("same dimension").scale(&Coef::i())
}

/// Left-invariant field of `P`: `i p d_theta - i d_x`.
pub fn group_field_p(n: usize, i: usize) -> DiffOp {
    let it = DiffOp::coord(n, Var::P(i)).compose(&DiffOp::deriv(n, Var::Theta)).expect("same dimension");
    it.sub(&DiffOp::deriv(n, Var::X(i))).expect("same dimension").scale(&Coef::i())
}

/// Left-invariant field of the central `I`: `i d_theta`.
pub fn group_field_i(n: usize) -> DiffOp {
    DiffOp::deriv(n, Var::Theta).scale(&Coef::i())
}

/// Sector reduction `d_theta -> -i lambda` for functions `e^{-i lambda theta} alpha(p, x)`.
pub fn lambda_reduce(op: &DiffOp, lambda: i64) -> Result<DiffOp, WeylError> {
    let t = 2 * op.n();
    let mut out = DiffOp::zero(op.n());
    for ((a, b), c) in op.terms() {
        if a[t] > 0 {
            return Err(WeylError::InvalidId("theta-dependent coefficient".into()));
        }
        let mut b2 = b.clone();
        let e = b2[t];
        b2[t] = 0;
        out.add_term(a.clone(), b2, c.mul(&Coef::scalar(cr(0, -lambda)).pow(e)));
    }
    Ok(out)
}

/// Heisenberg-Weyl group element `W(p, x, theta)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HWElement {
    pub p: Vec<f64>,
    pub x: Vec<f64>,
    pub theta: f64,
}

impl HWElement {
    pub fn new(p: Vec<f64>, x: Vec<f64>, theta: f64) -> Result<Self, WeylError> {
        if p.len() != x.len() {
            return Err(WeylError::DimensionMismatch(p.len(), x.len()));
        }
        if p.iter().chain(&x).any(|v| !v.is_finite()) || !theta.is_finite() {
            return Err(WeylError::InvalidId("non-finite group element".into()));
        }
        Ok(HWElement { p, x, theta })
    }

    pub fn identity(n: usize) -> Self {
        HWElement { p: vec![0.0; n], x: vec![0.0; n], theta: 0.0 }
    }

    pub fn inverse(&self) -> Self {
        HWElement { p: self.p.iter().map(|v| -v).collect(), x: self.x.iter().map(|v| -v).collect(), theta: -self.theta }
    }
}

/// `W(p',x',theta') W(p,x,theta) = W(p'+p, x'+x, theta'+theta - (x'.p - p'.x))`.
pub fn hw_compose(g1: &HWElement, g2: &HWElement) -> Result<HWElement, WeylError> {
    if g1.p.len() != g2.p.len() {
        return Err(WeylError::DimensionMismatch(g1.p.len(), g2.p.len()));
    }
    let symp: f64 = (0..g1.p.len()).map(|i| g1.x[i] * g2.p[i] - g1.p[i] * g2.x[i]).sum();
    Ok(HWElement {
        p: g1.p.iter().zip(&g2.p).map(|(a, b)| a + b).collect(),
        x: g1.x.iter().zip(&g2.x).map(|(a, b)| a + b).collect(),
        theta: g1.theta + g2.theta - symp,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn translations_in_text_form() {
        let l = make_generator(1, GeneratorId::new(GeneratorKind::TranslationP(0), Realization::Left)).unwrap();
        assert_eq!(l.to_string(), "1/2*i*hbar*dp[1] + x[1]");
        let r = make_generator(1, GeneratorId::new(GeneratorKind::TranslationP(0), Realization::Right)).unwrap();
        assert_eq!(r.to_string(), "-1/2*i*hbar*dp[1] + x[1]");
        let t = make_generator(1, GeneratorId::new(GeneratorKind::TranslationX(0), Realization::Tilde)).unwrap();
        assert_eq!(t.to_string(), "-i*hbar*dx[1]");
    }

    #[test]
    fn invalid_rotation_is_rejected() {
        let id = GeneratorId::new(GeneratorKind::Rotation(1, 1), Realization::Left);
        assert!(matches!(make_generator(3, id), Err(WeylError::InvalidId(_))));
    }

    #[test]
    fn lambda_reduction_of_group_fields() {
        let x = lambda_reduce(&group_field_x(1, 0), 1).unwrap();
        assert_eq!(x.to_string(), "i*dp[1] + x[1]");
        let i = lambda_reduce(&group_field_i(1), 1).unwrap();
        assert_eq!(i, DiffOp::identity(1));
    }
}
