//! Normal-ordered polynomial differential operators on `(p_1..p_n, x_1..x_n, theta)`.

use std::collections::BTreeMap;
use std::fmt;

use super::coef::{cr, Coef};
use super::WeylError;
use crate::gaussian_core::{Poly, PolyGaussian};
use crate::C64;

/// Coordinate slot of a phase-space variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    P(usize),
    X(usize),
    Theta,
}

type Key = (Vec<u32>, Vec<u32>);

/// `sum c * z^alpha d^beta` with monomials to the left of derivatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffOp {
    n: usize,
    terms: BTreeMap<Key, Coef>,
}

/// Numeric values for the formal symbols when applying an operator.
#[derive(Clone, Copy, Debug)]
pub struct Bindings {
    pub hbar: f64,
    pub eps: f64,
    pub mass: f64,
}

impl Default for Bindings {
    fn default() -> Self {
        Bindings { hbar: 2.0, eps: 0.5, mass: 1.0 }
    }
}

fn falling(a: u32, b: u32) -> i64 {
    (a - b + 1..=a).map(|v| v as i64).product()
}

fn binom(a: u32, b: u32) -> i64 {
    falling(a, b) / falling(b, b)
}

/// All multi-indices `mu` with `mu <= bound` componentwise.
fn bounded_indices(bound: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::with_capacity(bound.len())];
    for &b in bound {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=b).map(move |v| {
                    let mut next = prefix.clone();
                    next.push(v);
                    next
                })
            })
            .collect();
    }
    out
}

impl DiffOp {
    pub fn zero(n: usize) -> Self {
        DiffOp { n, terms: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        DiffOp::scalar(n, Coef::one())
    }

    pub fn scalar(n: usize, c: Coef) -> Self {
        let w = 2 * n + 1;
        DiffOp::term(n, vec![0; w], vec![0; w], c)
    }

    pub fn term(n: usize, mono: Vec<u32>, deriv: Vec<u32>, c: Coef) -> Self {
        let mut op = DiffOp::zero(n);
        op.add_term(mono, deriv, c);
        op
    }

    pub fn nvars(&self) -> usize {
        2 * self.n + 1
    }

    pub fn slot(&self, v: Var) -> usize {
        match v {
            Var::P(i) => i,
            Var::X(i) => self.n + i,
            Var::Theta => 2 * self.n,
        }
    }

    /// Multiplication by a coordinate.
    pub fn coord(n: usize, v: Var) -> Self {
        let mut op = DiffOp::zero(n);
        let mut mono = vec![0; op.nvars()];
        mono[op.slot(v)] = 1;
        op.add_term(mono, vec![0; 2 * n + 1], Coef::one());
        op
    }

    /// Partial derivative in a coordinate.
    pub fn deriv(n: usize, v: Var) -> Self {
        let mut op = DiffOp::zero(n);
        let mut d = vec![0; op.nvars()];
        d[op.slot(v)] = 1;
        op.add_term(vec![0; 2 * n + 1], d, Coef::one());
        op
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Key, &Coef)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, mono: Vec<u32>, deriv: Vec<u32>, c: Coef) {
        if c.is_zero() {
            return;
        }
        let key = (mono, deriv);
        let sum = match self.terms.get(&key) {
            Some(old) => old.add(&c),
            None => c,
        };
        if sum.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, sum);
        }
    }

    fn check_dim(&self, o: &DiffOp) -> Result<(), WeylError> {
        if self.n != o.n {
            return Err(WeylError::DimensionMismatch(self.n, o.n));
        }
        Ok(())
    }

    pub fn add(&self, o: &DiffOp) -> Result<DiffOp, WeylError> {
        self.check_dim(o)?;
        let mut r = self.clone();
        for ((a, b), c) in &o.terms {
            r.add_term(a.clone(), b.clone(), c.clone());
        }
        Ok(r)
    }

    pub fn sub(&self, o: &DiffOp) -> Result<DiffOp, WeylError> {
        self.add(&o.scale(&Coef::integer(-1)))
    }

    pub fn scale(&self, s: &Coef) -> DiffOp {
        let mut r = DiffOp::zero(self.n);
        for ((a, b), c) in &self.terms {
            r.add_term(a.clone(), b.clone(), c.mul(s));
        }
        r
    }

    /// Operator product `self o other` brought to normal order by the Leibniz rule.
    pub fn compose(&self, o: &DiffOp) -> Result<DiffOp, WeylError> {
        self.check_dim(o)?;
        let w = self.nvars();
        let mut r = DiffOp::zero(self.n);
        for ((alpha, beta), c1) in &self.terms {
            for ((gamma, delta), c2) in &o.terms {
                let c12 = c1.mul(c2);
                let bound: Vec<u32> = (0..w).map(|v| beta[v].min(gamma[v])).collect();
                for mu in bounded_indices(&bound) {
                    let mut factor = 1i64;
                    let mut mono = Vec::with_capacity(w);
                    let mut deriv = Vec::with_capacity(w);
                    for v in 0..w {
                        factor *= binom(beta[v], mu[v]) * falling(gamma[v], mu[v]);
                        mono.push(alpha[v] + gamma[v] - mu[v]);
                        deriv.push(beta[v] - mu[v] + delta[v]);
                    }
                    r.add_term(mono, deriv, c12.scale(cr(factor, 0)));
                }
            }
        }
        Ok(r)
    }

    pub fn commutator(&self, o: &DiffOp) -> Result<DiffOp, WeylError> {
        self.compose(o)?.sub(&o.compose(self)?)
    }

    /// True when no term carries a derivative.
    pub fn is_multiplicative(&self) -> bool {
        self.terms.keys().all(|(_, d)| d.iter().all(|&e| e == 0))
    }

    /// Derivative of the coefficient functions in coordinate `v`, derivatives untouched.
    pub fn symbol_derivative(&self, v: Var) -> DiffOp {
        let s = self.slot(v);
        let mut r = DiffOp::zero(self.n);
        for ((a, b), c) in &self.terms {
            if a[s] > 0 {
                let mut a2 = a.clone();
                a2[s] -= 1;
                r.add_term(a2, b.clone(), c.scale(cr(a[s] as i64, 0)));
            }
        }
        r
    }

    /// Maps every coefficient, keeping the term structure.
    pub fn map_coefs(&self, f: impl Fn(&[u32], &[u32], &Coef) -> Result<Coef, WeylError>) -> Result<DiffOp, WeylError> {
        let mut r = DiffOp::zero(self.n);
        for ((a, b), c) in &self.terms {
            r.add_term(a.clone(), b.clone(), f(a, b, c)?);
        }
        Ok(r)
    }

    pub fn has_theta(&self) -> bool {
        let t = 2 * self.n;
        self.terms.keys().any(|(a, b)| a[t] > 0 || b[t] > 0)
    }

    /// Exact action on a PolyGaussian with numeric values for the symbols.
    pub fn apply(&self, f: &PolyGaussian, bind: Bindings) -> Result<PolyGaussian, WeylError> {
        if f.dim() != self.n {
            return Err(WeylError::DimensionMismatch(self.n, f.dim()));
        }
        if self.has_theta() {
            return Err(WeylError::ThetaDerivativePresent);
        }
        let m = 2 * self.n;
        let mut acc: Option<PolyGaussian> = None;
        for ((a, b), c) in &self.terms {
            let mut g = f.clone();
            for (v, &e) in b[..m].iter().enumerate() {
                for _ in 0..e {
                    g = g.derivative(v);
                }
            }
            let value: C64 = c.eval(bind.hbar, bind.eps, bind.mass);
            let mono = PolyGaussian::polynomial(self.n, Poly::monomial(a[..m].to_vec(), value))?;
            let t = g.mul(&mono)?;
            acc = Some(match acc {
                None => t,
                Some(s) => s.add_same_gaussian(&t)?,
            });
        }
        Ok(match acc {
            None => f.scale(C64::new(0.0, 0.0)),
            Some(s) => s,
        })
    }
}

fn var_name(n: usize, slot: usize) -> String {
    if slot < n {
        format!("p[{}]", slot + 1)
    } else if slot < 2 * n {
        format!("x[{}]", slot - n + 1)
    } else {
        "theta".into()
    }
}

fn factor(name: String, e: u32) -> String {
    if e == 1 {
        name
    } else {
        format!("{name}^{e}")
    }
}

impl fmt::Display for DiffOp {
    /// Canonical text form, e.g. `2*i*dx[1]`; 1-based indices.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for ((a, b), c) in &self.terms {
            let mut factors = Vec::new();
            for (s, &e) in a.iter().enumerate().filter(|(_, &e)| e > 0) {
                factors.push(factor(var_name(self.n, s), e));
            }
            for (s, &e) in b.iter().enumerate().filter(|(_, &e)| e > 0) {
                factors.push(factor(format!("d{}", var_name(self.n, s)), e));
            }
            let coef = c.to_string();
            parts.push(match (factors.is_empty(), coef.as_str()) {
                (true, _) => coef,
                (false, "1") => factors.join("*"),
                (false, "-1") => format!("-{}", factors.join("*")),
                (false, _) => format!("{}*{}", coef, factors.join("*")),
            });
        }
        write!(f, "{}", parts.join(" + "))
    }
}
