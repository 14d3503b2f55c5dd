//! Laurent polynomials in `sqrt(hbar)`, `k` and `m` with complex rational scalars.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use super::WeylError;
use crate::C64;

pub type Rational = Ratio<i64>;
pub type CRational = Complex<Rational>;

/// Exponents of `sqrt(hbar)`, `k` and the mass `m`. `eps = 1/k^2`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SymbolPowers {
    pub sqrt_hbar: i32,
    pub k: i32,
    pub m: i32,
}

impl SymbolPowers {
    pub const ONE: SymbolPowers = SymbolPowers { sqrt_hbar: 0, k: 0, m: 0 };

    fn add(self, o: SymbolPowers) -> SymbolPowers {
        SymbolPowers { sqrt_hbar: self.sqrt_hbar + o.sqrt_hbar, k: self.k + o.k, m: self.m + o.m }
    }
}

pub fn cr(re: i64, im: i64) -> CRational {
    Complex::new(Rational::from_integer(re), Rational::from_integer(im))
}

pub fn rational(num: i64, den: i64) -> CRational {
    Complex::new(Rational::new(num, den), Rational::zero())
}

fn rational_pow(base: i64, e: i32) -> Rational {
    let b = Rational::from_integer(base);
    if e >= 0 {
        num_traits::pow(b, e as usize)
    } else {
        num_traits::pow(b.recip(), (-e) as usize)
    }
}

/// Exact symbolic coefficient of a differential-operator term.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Coef {
    terms: BTreeMap<SymbolPowers, CRational>,
}

impl Coef {
    pub fn zero() -> Self {
        Coef::default()
    }

    pub fn one() -> Self {
        Coef::scalar(cr(1, 0))
    }

    pub fn i() -> Self {
        Coef::scalar(cr(0, 1))
    }

    pub fn scalar(c: CRational) -> Self {
        Coef::monomial(SymbolPowers::ONE, c)
    }

    pub fn integer(v: i64) -> Self {
        Coef::scalar(cr(v, 0))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Coef::scalar(rational(num, den))
    }

    pub fn monomial(powers: SymbolPowers, c: CRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(powers, c);
        }
        Coef { terms }
    }

    pub fn powers(sqrt_hbar: i32, k: i32, m: i32) -> Self {
        Coef::monomial(SymbolPowers { sqrt_hbar, k, m }, cr(1, 0))
    }

    pub fn hbar() -> Self {
        Coef::powers(2, 0, 0)
    }

    pub fn sqrt_hbar() -> Self {
        Coef::powers(1, 0, 0)
    }

    /// `eps = 1/k^2`.
    pub fn eps() -> Self {
        Coef::powers(0, -2, 0)
    }

    pub fn inv_mass() -> Self {
        Coef::powers(0, 0, -1)
    }

    pub fn mass() -> Self {
        Coef::powers(0, 0, 1)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SymbolPowers, &CRational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, p: SymbolPowers, c: CRational) {
        let entry = self.terms.entry(p).or_insert_with(CRational::zero);
        *entry = *entry + c;
        if entry.is_zero() {
            self.terms.remove(&p);
        }
    }

    pub fn add(&self, o: &Coef) -> Coef {
        let mut r = self.clone();
        for (&p, &c) in &o.terms {
            r.add_term(p, c);
        }
        r
    }

    pub fn sub(&self, o: &Coef) -> Coef {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Coef {
        self.scale(cr(-1, 0))
    }

    pub fn scale(&self, s: CRational) -> Coef {
        let mut r = Coef::zero();
        for (&p, &c) in &self.terms {
            r.add_term(p, c * s);
        }
        r
    }

    pub fn mul(&self, o: &Coef) -> Coef {
        let mut r = Coef::zero();
        for (&p, &c) in &self.terms {
            for (&q, &d) in &o.terms {
                r.add_term(p.add(q), c * d);
            }
        }
        r
    }

    pub fn pow(&self, e: u32) -> Coef {
        (0..e).fold(Coef::one(), |acc, _| acc.mul(self))
    }

    /// Substitutes `hbar = 2`; odd powers of `sqrt(hbar)` are irrational and rejected.
    pub fn bind_hbar_two(&self) -> Result<Coef, WeylError> {
        let mut r = Coef::zero();
        for (&p, &c) in &self.terms {
            if p.sqrt_hbar % 2 != 0 {
                return Err(WeylError::IrrationalBinding);
            }
            let factor = rational_pow(2, p.sqrt_hbar / 2);
            r.add_term(SymbolPowers { sqrt_hbar: 0, ..p }, c.scale(factor));
        }
        Ok(r)
    }

    /// `k -> infinity`: drops negative powers of `k`; positive powers are poles in `eps`.
    pub fn limit_k_infinite(&self) -> Result<Coef, Coef> {
        if self.terms.keys().any(|p| p.k > 0) {
            return Err(self.clone());
        }
        let mut r = Coef::zero();
        for (&p, &c) in &self.terms {
            if p.k == 0 {
                r.add_term(p, c);
            }
        }
        Ok(r)
    }

    pub fn eval(&self, hbar: f64, eps: f64, mass: f64) -> C64 {
        let k = eps.powf(-0.5);
        self.terms
            .iter()
            .map(|(p, c)| {
                let s = hbar.sqrt().powi(p.sqrt_hbar) * k.powi(p.k) * mass.powi(p.m);
                C64::new(to_f64(&c.re), to_f64(&c.im)) * s
            })
            .sum()
    }
}

fn to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn fmt_scalar(c: &CRational) -> String {
    match (c.re.is_zero(), c.im.is_zero()) {
        (_, true) => fmt_rational(&c.re),
        (true, false) => {
            if c.im.is_one() {
                "i".into()
            } else if (-c.im).is_one() {
                "-i".into()
            } else {
                format!("{}*i", fmt_rational(&c.im))
            }
        }
        (false, false) => {
            let sign = if c.im.is_negative() { "-" } else { "+" };
            format!("({}{}{}*i)", fmt_rational(&c.re), sign, fmt_rational(&c.im.abs()))
        }
    }
}

fn fmt_powers(p: &SymbolPowers) -> Vec<String> {
    let mut out = Vec::new();
    match p.sqrt_hbar {
        0 => {}
        2 => out.push("hbar".into()),
        e if e % 2 == 0 => out.push(format!("hbar^{}", e / 2)),
        1 => out.push("sqrt(hbar)".into()),
        e => out.push(format!("sqrt(hbar)^{e}")),
    }
    match p.k {
        0 => {}
        -2 => out.push("eps".into()),
        e if e % 2 == 0 => out.push(format!("eps^{}", -e / 2)),
        e => out.push(format!("k^{e}")),
    }
    match p.m {
        0 => {}
        1 => out.push("m".into()),
        e => out.push(format!("m^{e}")),
    }
    out
}

impl fmt::Display for Coef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(p, c)| {
                let syms = fmt_powers(p);
                let scalar = fmt_scalar(c);
                if syms.is_empty() {
                    scalar
                } else if scalar == "1" {
                    syms.join("*")
                } else if scalar == "-1" {
                    format!("-{}", syms.join("*"))
                } else {
                    format!("{}*{}", scalar, syms.join("*"))
                }
            })
            .collect();
        if parts.len() == 1 {
            write!(f, "{}", parts[0])
        } else {
            write!(f, "({})", parts.join(" + "))
        }
    }
}
