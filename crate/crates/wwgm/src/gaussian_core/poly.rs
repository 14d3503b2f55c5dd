use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_traits::Zero;

use crate::C64;

/// Finitely supported polynomial with complex coefficients over `nvars` variables.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, C64>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: C64) -> Self {
        let mut p = Poly::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Poly::constant(nvars, C64::new(1.0, 0.0))
    }

    /// The coordinate function `z_k`.
    pub fn var(nvars: usize, k: usize) -> Self {
        let mut idx = vec![0; nvars];
        idx[k] = 1;
        let mut p = Poly::zero(nvars);
        p.add_term(idx, C64::new(1.0, 0.0));
        p
    }

    pub fn monomial(exps: Vec<u32>, c: C64) -> Self {
        let mut p = Poly::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    /// Linear form `sum_k coeffs[k] z_k + offset`.
    pub fn linear(coeffs: &[C64], offset: C64) -> Self {
        let n = coeffs.len();
        let mut p = Poly::constant(n, offset);
        for (k, &ck) in coeffs.iter().enumerate() {
            let mut idx = vec![0; n];
            idx[k] = 1;
            p.add_term(idx, ck);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &C64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: C64) {
        debug_assert_eq!(exps.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn coeff(&self, exps: &[u32]) -> C64 {
        self.terms.get(exps).copied().unwrap_or_else(C64::zero)
    }

    /// Total degree; `0` for constants and the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Largest exponent of variable `k`.
    pub fn degree_in(&self, k: usize) -> u32 {
        self.terms.keys().map(|e| e[k]).max().unwrap_or(0)
    }

    /// True for a constant polynomial (including zero).
    pub fn is_constant(&self) -> bool {
        self.degree() == 0
    }

    pub fn constant_term(&self) -> C64 {
        self.coeff(&vec![0; self.nvars])
    }

    pub fn add(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars, "polynomial arity mismatch");
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: C64) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, &c) in &self.terms {
            out.add_term(e.clone(), c * s);
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars, "polynomial arity mismatch");
        let mut out = Poly::zero(self.nvars);
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut out = Poly::one(self.nvars);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn conj(&self) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, &c) in &self.terms {
            out.add_term(e.clone(), c.conj());
        }
        out
    }

    /// Partial derivative with respect to variable `k`.
    pub fn derivative(&self, k: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, &c) in &self.terms {
            if e[k] == 0 {
                continue;
            }
            let mut ne = e.clone();
            ne[k] -= 1;
            out.add_term(ne, c * e[k] as f64);
        }
        out
    }

    /// Mixed partial derivative with multi-index `orders`.
    pub fn derivative_multi(&self, orders: &[u32]) -> Poly {
        let mut out = self.clone();
        for (k, &o) in orders.iter().enumerate() {
            for _ in 0..o {
                out = out.derivative(k);
            }
        }
        out
    }

    pub fn eval(&self, z: &[C64]) -> C64 {
        let mut acc = C64::zero();
        for (e, &c) in &self.terms {
            let mut m = c;
            for (zi, &ei) in z.iter().zip(e) {
                if ei > 0 {
                    m *= zi.powu(ei);
                }
            }
            acc += m;
        }
        acc
    }

    pub fn eval_real(&self, z: &[f64]) -> C64 {
        let zc: Vec<C64> = z.iter().map(|&v| C64::new(v, 0.0)).collect();
        self.eval(&zc)
    }

    /// Substitutes variable `k` by `subs[k]`; all substitutes share one arity.
    pub fn substitute(&self, subs: &[Poly]) -> Poly {
        assert_eq!(subs.len(), self.nvars);
        let target = subs.first().map(|p| p.nvars).unwrap_or(0);
        let mut powers: Vec<Vec<Poly>> = subs.iter().map(|s| vec![Poly::one(s.nvars)]).collect();
        let mut out = Poly::zero(target);
        for (e, &c) in &self.terms {
            let mut term = Poly::constant(target, c);
            for (k, &ek) in e.iter().enumerate() {
                while powers[k].len() <= ek as usize {
                    let next = powers[k].last().unwrap().mul(&subs[k]);
                    powers[k].push(next);
                }
                if ek > 0 {
                    term = term.mul(&powers[k][ek as usize]);
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Re-embeds into a larger variable set: old variable `k` becomes `map[k]`.
    pub fn embed(&self, nvars: usize, map: &[usize]) -> Poly {
        let mut out = Poly::zero(nvars);
        for (e, &c) in &self.terms {
            let mut ne = vec![0; nvars];
            for (k, &ek) in e.iter().enumerate() {
                ne[map[k]] += ek;
            }
            out.add_term(ne, c);
        }
        out
    }

    /// Largest coefficient modulus; `0` for the zero polynomial.
    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }
}
